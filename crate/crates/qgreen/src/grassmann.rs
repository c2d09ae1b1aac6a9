//! Exact arithmetic in a finite Grassmann algebra with named conjugate
//! generator pairs.
//!
//! Generators come in conjugate pairs (ξ, ξ*). A fixed total order —
//! pair index first, conjugated generator second — is the single source
//! of truth for every sign in the crate: products, conjugation and
//! Berezin integration all reduce to sorting generator lists while
//! counting transpositions.
//!
//! The Berezin pair integral ∫d²ξ ≡ ∫dξ* dξ is normalized so that the
//! delta sifting identity ∫d²ξ δ⁽²⁾(ξ−ζ) f(ξ,ξ*) = f(ζ,ζ*) holds
//! exactly; this convention is pinned by self-tests rather than by the
//! primitive value of any single integral.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with magnitude below this are pruned after every operation.
pub const PRUNE_TOL: f64 = 1e-15;

/// Absolute tolerance for coefficient equality tests.
pub const EQ_TOL: f64 = 1e-12;

/// An algebra context: an immutable, ordered list of conjugate generator
/// pairs. Elements belonging to different contexts cannot be combined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pair_names: Vec<String>,
}

impl Algebra {
    /// Create a context with the given pair names, e.g. `["zeta", "xi"]`.
    pub fn new<S: AsRef<str>>(pair_names: &[S]) -> Arc<Self> {
        assert!(
            pair_names.len() <= 8,
            "algebra limited to 8 generator pairs"
        );
        Arc::new(Self {
            pair_names: pair_names.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn num_pairs(&self) -> usize {
        self.pair_names.len()
    }

    pub fn num_generators(&self) -> usize {
        2 * self.pair_names.len()
    }

    pub fn pair_name(&self, pair: usize) -> &str {
        &self.pair_names[pair]
    }

    pub fn check_pair(&self, pair: usize) -> Result<()> {
        if pair < self.num_pairs() {
            Ok(())
        } else {
            Err(Error::UnknownPair(pair))
        }
    }
}

/// One generator of an algebra: a pair index plus a conjugation flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub pair: usize,
    pub conjugated: bool,
}

impl GeneratorId {
    /// The unconjugated generator ξ of a pair.
    pub fn plain(pair: usize) -> Self {
        Self {
            pair,
            conjugated: false,
        }
    }

    /// The conjugated generator ξ* of a pair.
    pub fn star(pair: usize) -> Self {
        Self {
            pair,
            conjugated: true,
        }
    }

    pub fn conj(self) -> Self {
        Self {
            pair: self.pair,
            conjugated: !self.conjugated,
        }
    }

    /// Position in the canonical total order.
    fn index(self) -> u8 {
        (2 * self.pair + usize::from(self.conjugated)) as u8
    }

    fn from_index(idx: u8) -> Self {
        Self {
            pair: (idx / 2) as usize,
            conjugated: idx % 2 == 1,
        }
    }
}

/// A canonical monomial: a strictly ascending set of generators, stored
/// as a bitmask over generator indices. The empty monomial is the unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u32);

impl Monomial {
    pub const UNIT: Monomial = Monomial(0);

    pub fn from_generators(gens: &[GeneratorId]) -> Option<Self> {
        let mut mask = 0u32;
        for g in gens {
            let bit = 1u32 << g.index();
            if mask & bit != 0 {
                return None; // repeated generator: 2-nilpotency
            }
            mask |= bit;
        }
        Some(Monomial(mask))
    }

    pub fn generators(self) -> Vec<GeneratorId> {
        self.factor_indices()
            .into_iter()
            .map(GeneratorId::from_index)
            .collect()
    }

    fn factor_indices(self) -> Vec<u8> {
        (0..32u8).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Parity of the monomial: degree mod 2.
    pub fn parity(self) -> usize {
        usize::from(!self.degree().is_multiple_of(2))
    }

    pub fn contains(self, g: GeneratorId) -> bool {
        self.0 & (1 << g.index()) != 0
    }

    fn pair_degree(self, pair: usize) -> usize {
        usize::from(self.contains(GeneratorId::plain(pair)))
            + usize::from(self.contains(GeneratorId::star(pair)))
    }
}

/// Sort a generator-index list into canonical ascending order, counting
/// transpositions. Returns `None` when a generator repeats (the term is
/// zero) and otherwise the sign `(-1)^swaps`. Every sign in the crate is
/// derived through this function.
fn sort_factors(factors: &mut [u8]) -> Option<f64> {
    let mut swaps = 0usize;
    for i in 1..factors.len() {
        let mut j = i;
        while j > 0 && factors[j - 1] > factors[j] {
            factors.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    for w in factors.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(if swaps.is_multiple_of(2) { 1.0 } else { -1.0 })
}

/// An element of the algebra: a sparse map from canonical monomials to
/// complex coefficients. Immutable after construction; all operations
/// return new values.
#[derive(Debug, Clone)]
pub struct GrassmannElement {
    algebra: Arc<Algebra>,
    terms: BTreeMap<Monomial, Complex64>,
}

impl GrassmannElement {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Self {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &Arc<Algebra>) -> Self {
        Self::scalar(algebra, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(algebra: &Arc<Algebra>, value: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if value.norm() > PRUNE_TOL {
            terms.insert(Monomial::UNIT, value);
        }
        Self {
            algebra: algebra.clone(),
            terms,
        }
    }

    pub fn generator(algebra: &Arc<Algebra>, g: GeneratorId) -> Result<Self> {
        algebra.check_pair(g.pair)?;
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial::from_generators(&[g]).expect("single generator"),
            Complex64::new(1.0, 0.0),
        );
        Ok(Self {
            algebra: algebra.clone(),
            terms,
        })
    }

    pub fn from_terms<I>(algebra: &Arc<Algebra>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Complex64)>,
    {
        let mut out = Self::zero(algebra);
        for (m, c) in terms {
            out.accumulate(m, c);
        }
        out.prune();
        out
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: Monomial) -> Complex64 {
        self.terms.get(&m).copied().unwrap_or_default()
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coefficient(Monomial::UNIT)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn accumulate(&mut self, m: Monomial, c: Complex64) {
        let entry = self.terms.entry(m).or_default();
        *entry += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > PRUNE_TOL);
    }

    fn check_context(&self, other: &Self, op: &str) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "{op}: {:?} vs {:?}",
                self.algebra.pair_names, other.algebra.pair_names
            )))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other, "add")?;
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.accumulate(m, c);
        }
        out.prune();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&(-other))
    }

    /// Canonical-normal-form product. Monomials sharing a generator
    /// annihilate; the sign comes from the permutation sorting the
    /// concatenated generator lists.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other, "mul")?;
        let mut out = Self::zero(&self.algebra);
        for (&ma, &ca) in &self.terms {
            for (&mb, &cb) in &other.terms {
                let mut factors = ma.factor_indices();
                factors.extend(mb.factor_indices());
                if let Some(sign) = sort_factors(&mut factors) {
                    let mono = Monomial(factors.iter().fold(0u32, |acc, &i| acc | (1 << i)));
                    out.accumulate(mono, ca * cb * sign);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self {
            algebra: self.algebra.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&m, &c)| (m, c * factor))
                .collect(),
        };
        out.prune();
        out
    }

    /// Complex conjugation: coefficients are conjugated, each monomial's
    /// generators are conjugated and the factor order reversed, so that
    /// (fg)* = g* f* and conj is an involution.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (&m, &c) in &self.terms {
            let mut factors: Vec<u8> = m
                .factor_indices()
                .into_iter()
                .rev()
                .map(|i| GeneratorId::from_index(i).conj().index())
                .collect();
            let sign = sort_factors(&mut factors).expect("conjugation cannot repeat generators");
            let mono = Monomial(factors.iter().fold(0u32, |acc, &i| acc | (1 << i)));
            out.accumulate(mono, c.conj() * sign);
        }
        out.prune();
        out
    }

    /// Berezin pair integral ∫d²ξ ≡ ∫dξ* dξ over one conjugate pair.
    ///
    /// A term survives only when it contains both generators of the
    /// pair; the inner ∫dξ moves ξ to the front of the monomial and
    /// strips it, then ∫dξ* does the same, each move contributing the
    /// grading sign.
    pub fn berezin_integrate(&self, pair: usize) -> Result<Self> {
        self.algebra.check_pair(pair)?;
        let plain = GeneratorId::plain(pair).index();
        let star = GeneratorId::star(pair).index();
        let mut out = Self::zero(&self.algebra);
        for (&m, &c) in &self.terms {
            let mut factors = m.factor_indices();
            let Some(pos) = factors.iter().position(|&i| i == plain) else {
                continue;
            };
            let mut sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            factors.remove(pos);
            let Some(pos) = factors.iter().position(|&i| i == star) else {
                continue;
            };
            if pos % 2 == 1 {
                sign = -sign;
            }
            factors.remove(pos);
            let mono = Monomial(factors.iter().fold(0u32, |acc, &i| acc | (1 << i)));
            out.accumulate(mono, c * sign);
        }
        out.prune();
        Ok(out)
    }

    /// Graded exponential: a scalar part is factored out as an ordinary
    /// complex exponential, the remaining nilpotent part gets a finite
    /// power series that terminates at the number of generators.
    pub fn graded_exp(&self) -> Self {
        let scalar = self.scalar_part();
        let mut nilpotent = self.clone();
        nilpotent.terms.remove(&Monomial::UNIT);

        let mut acc = Self::one(&self.algebra);
        let mut term = Self::one(&self.algebra);
        for k in 1..=self.algebra.num_generators() {
            term = term
                .checked_mul(&nilpotent)
                .expect("same context")
                .scale(Complex64::new(1.0 / k as f64, 0.0));
            if term.is_zero() {
                break;
            }
            acc = acc.checked_add(&term).expect("same context");
        }
        acc.scale(scalar.exp())
    }

    /// Grassmann delta δ⁽²⁾(ξ − s) = (ξ − s)(ξ* − s*) for a pair ξ and an
    /// odd-parity linear shift s.
    pub fn delta(algebra: &Arc<Algebra>, pair: usize, shift: &Self) -> Result<Self> {
        algebra.check_pair(pair)?;
        if shift.terms.keys().any(|m| m.degree() != 1) {
            return Err(Error::EvenParityShift);
        }
        let xi = Self::generator(algebra, GeneratorId::plain(pair))?;
        let xi_star = Self::generator(algebra, GeneratorId::star(pair))?;
        let left = xi.checked_sub(shift)?;
        let right = xi_star.checked_sub(&shift.conj())?;
        left.checked_mul(&right)
    }

    /// Split into (even, odd) parity parts with even + odd = self.
    pub fn parity_split(&self) -> (Self, Self) {
        let mut even = Self::zero(&self.algebra);
        let mut odd = Self::zero(&self.algebra);
        for (&m, &c) in &self.terms {
            if m.parity() == 0 {
                even.terms.insert(m, c);
            } else {
                odd.terms.insert(m, c);
            }
        }
        (even, odd)
    }

    /// Substitute ξ = ξ* = 0 for one pair: drop every term containing a
    /// generator of that pair.
    pub fn substitute_zero(&self, pair: usize) -> Result<Self> {
        self.algebra.check_pair(pair)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.pair_degree(pair) == 0)
                .map(|(&m, &c)| (m, c))
                .collect(),
        })
    }

    /// Substitute ξ → −ξ, ξ* → −ξ* for one pair.
    pub fn negate_pair(&self, pair: usize) -> Result<Self> {
        self.algebra.check_pair(pair)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&m, &c)| {
                    let sign = if m.pair_degree(pair) % 2 == 1 { -1.0 } else { 1.0 };
                    (m, c * sign)
                })
                .collect(),
        })
    }

    /// Relabel generator pairs into a (possibly different) target
    /// algebra. `mapping[i] = (src, dst)` sends pair `src` to pair `dst`;
    /// every pair occurring in the element must be mapped and the map
    /// must be injective. Monomials are re-sorted, so a non-monotone
    /// relabeling contributes its permutation sign.
    pub fn rename_pairs(&self, target: &Arc<Algebra>, mapping: &[(usize, usize)]) -> Result<Self> {
        for &(src, dst) in mapping {
            self.algebra.check_pair(src)?;
            target.check_pair(dst)?;
        }
        let lookup = |pair: usize| -> Result<usize> {
            mapping
                .iter()
                .find(|&&(src, _)| src == pair)
                .map(|&(_, dst)| dst)
                .ok_or(Error::UnknownPair(pair))
        };
        let mut out = Self::zero(target);
        for (&m, &c) in &self.terms {
            let mut factors = Vec::with_capacity(m.degree());
            for g in m.generators() {
                let dst = lookup(g.pair)?;
                let mapped = GeneratorId {
                    pair: dst,
                    conjugated: g.conjugated,
                };
                factors.push(mapped.index());
            }
            let sign = sort_factors(&mut factors).ok_or_else(|| {
                Error::ContextMismatch("rename mapping is not injective".into())
            })?;
            let mono = Monomial(factors.iter().fold(0u32, |acc, &i| acc | (1 << i)));
            out.accumulate(mono, c * sign);
        }
        out.prune();
        Ok(out)
    }

    /// Largest coefficient magnitude of the difference self − other.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff = self.checked_sub(other).expect("same context");
        diff.terms
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.algebra == other.algebra && self.max_abs_diff(other) <= tol
    }
}

impl Add for &GrassmannElement {
    type Output = GrassmannElement;
    fn add(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_add(rhs).expect("algebra context mismatch in +")
    }
}

impl Sub for &GrassmannElement {
    type Output = GrassmannElement;
    fn sub(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_sub(rhs).expect("algebra context mismatch in -")
    }
}

impl Mul for &GrassmannElement {
    type Output = GrassmannElement;
    fn mul(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_mul(rhs).expect("algebra context mismatch in *")
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for g in m.generators() {
                write!(
                    f,
                    "·{}{}",
                    self.algebra.pair_name(g.pair),
                    if g.conjugated { "*" } else { "" }
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single() -> Arc<Algebra> {
        Algebra::new(&["xi"])
    }

    fn double() -> Arc<Algebra> {
        Algebra::new(&["zeta", "xi"])
    }

    fn gen(a: &Arc<Algebra>, g: GeneratorId) -> GrassmannElement {
        GrassmannElement::generator(a, g).unwrap()
    }

    #[test]
    fn nilpotency() {
        let a = single();
        let xi = gen(&a, GeneratorId::plain(0));
        assert!((&xi * &xi).is_zero());
    }

    #[test]
    fn product_of_conjugate_pair_is_single_signed_term() {
        let a = single();
        let xi = gen(&a, GeneratorId::plain(0));
        let xs = gen(&a, GeneratorId::star(0));
        let fwd = &xi * &xs;
        let bwd = &xs * &xi;
        let mono = Monomial::from_generators(&[GeneratorId::plain(0), GeneratorId::star(0)])
            .unwrap();
        assert_eq!(fwd.num_terms(), 1);
        assert_eq!(fwd.coefficient(mono), c(1.0, 0.0));
        assert_eq!(bwd.coefficient(mono), c(-1.0, 0.0));
    }

    #[test]
    fn distributed_product_matches_hand_expansion() {
        // (1 + 2ξ)(3 + ξ*) = 3 + 6ξ + ξ* + 2ξξ*
        let a = single();
        let xi = gen(&a, GeneratorId::plain(0));
        let xs = gen(&a, GeneratorId::star(0));
        let one = GrassmannElement::one(&a);
        let lhs = &(&one + &xi.scale(c(2.0, 0.0))) * &(&one.scale(c(3.0, 0.0)) + &xs);
        let pair = Monomial::from_generators(&[GeneratorId::plain(0), GeneratorId::star(0)])
            .unwrap();
        assert_eq!(lhs.scalar_part(), c(3.0, 0.0));
        assert_eq!(
            lhs.coefficient(Monomial::from_generators(&[GeneratorId::plain(0)]).unwrap()),
            c(6.0, 0.0)
        );
        assert_eq!(
            lhs.coefficient(Monomial::from_generators(&[GeneratorId::star(0)]).unwrap()),
            c(1.0, 0.0)
        );
        assert_eq!(lhs.coefficient(pair), c(2.0, 0.0));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = single();
        let b = double();
        let xa = gen(&a, GeneratorId::plain(0));
        let xb = gen(&b, GeneratorId::plain(0));
        assert!(matches!(
            xa.checked_mul(&xb),
            Err(Error::ContextMismatch(_))
        ));
    }

    #[test]
    fn conj_basics() {
        let a = single();
        let xi = gen(&a, GeneratorId::plain(0));
        let xs = gen(&a, GeneratorId::star(0));
        assert!(xi.conj().approx_eq(&xs, 0.0));
        // (i·1)* = −i·1
        let i1 = GrassmannElement::scalar(&a, c(0.0, 1.0));
        assert_eq!(i1.conj().scalar_part(), c(0.0, -1.0));
        // (ξξ*)* = ξξ*
        let m = &xi * &xs;
        assert!(m.conj().approx_eq(&m, 0.0));
    }

    #[test]
    fn conj_is_involutive_and_antimultiplicative() {
        let a = double();
        let f = random_element(&a, 7);
        let g = random_element(&a, 13);
        assert!(f.conj().conj().approx_eq(&f, EQ_TOL));
        let lhs = (&f * &g).conj();
        let rhs = &g.conj() * &f.conj();
        assert!(lhs.approx_eq(&rhs, EQ_TOL));
    }

    #[test]
    fn berezin_of_scalar_vanishes_and_saturated_term_survives() {
        let a = single();
        let one = GrassmannElement::one(&a);
        assert!(one.berezin_integrate(0).unwrap().is_zero());
        let xi = gen(&a, GeneratorId::plain(0));
        let xs = gen(&a, GeneratorId::star(0));
        // ∫d²ξ ξξ* = 1 under the sifting-anchored convention
        assert_eq!(
            (&xi * &xs).berezin_integrate(0).unwrap().scalar_part(),
            c(1.0, 0.0)
        );
        // ∫d²ξ ξ*ξ = −1
        assert_eq!(
            (&xs * &xi).berezin_integrate(0).unwrap().scalar_part(),
            c(-1.0, 0.0)
        );
    }

    #[test]
    fn delta_sifting_reproduces_the_test_function() {
        // ∫d²ξ δ⁽²⁾(ξ−ζ) f(ξ,ξ*) = f(ζ,ζ*) for all 4-coefficient f.
        let a = double(); // pair 0 = zeta, pair 1 = xi
        let zeta = gen(&a, GeneratorId::plain(0));
        let delta = GrassmannElement::delta(&a, 1, &zeta).unwrap();

        let coeffs = [c(0.3, -0.7), c(1.5, 0.2), c(-0.4, 1.1), c(0.9, -0.3)];
        let f_of = |pair: usize| {
            let g = gen(&a, GeneratorId::plain(pair));
            let gs = gen(&a, GeneratorId::star(pair));
            let mut f = GrassmannElement::scalar(&a, coeffs[0]);
            f = &f + &g.scale(coeffs[1]);
            f = &f + &gs.scale(coeffs[2]);
            f = &f + &(&gs * &g).scale(coeffs[3]);
            f
        };
        let integrand = &delta * &f_of(1);
        let sifted = integrand.berezin_integrate(1).unwrap();
        assert!(sifted.approx_eq(&f_of(0), EQ_TOL));
    }

    #[test]
    fn delta_symmetry_relations() {
        let a = double();
        let zeta = gen(&a, GeneratorId::plain(0));
        let xi = gen(&a, GeneratorId::plain(1));
        let zeta_star = gen(&a, GeneratorId::star(0));
        // δ⁽²⁾(ξ−ζ) written from either side agrees.
        let d1 = GrassmannElement::delta(&a, 1, &zeta).unwrap();
        let d2 = GrassmannElement::delta(&a, 0, &xi).unwrap();
        assert!(d1.approx_eq(&d2, EQ_TOL));
        // δ⁽²⁾(ξ*−ζ*) = −δ⁽²⁾(ξ−ζ): build (ξ*−ζ*)(ξ−ζ) directly.
        let xs = gen(&a, GeneratorId::star(1));
        let lhs = &(&xs - &zeta_star) * &(&xi - &zeta);
        assert!(lhs.approx_eq(&-&d1, EQ_TOL));
    }

    #[test]
    fn delta_with_linear_composite_shift_sifts() {
        // δ(ζ − aξ − bξ*) integrates g(ζ,ζ*) to g(aξ+bξ*, ...conj).
        let a = double();
        let xi = gen(&a, GeneratorId::plain(1));
        let xs = gen(&a, GeneratorId::star(1));
        let av = c(0.7, 0.1);
        let bv = c(-0.2, 0.4);
        let shift = &xi.scale(av) + &xs.scale(bv);
        let delta = GrassmannElement::delta(&a, 0, &shift).unwrap();
        // check the expanded form (ζ−s)(ζ*−s*) against manual terms
        let zeta = gen(&a, GeneratorId::plain(0));
        let zs = gen(&a, GeneratorId::star(0));
        let manual = &(&zeta - &shift) * &(&zs - &shift.conj());
        assert!(delta.approx_eq(&manual, 0.0));
        // sifting against f(ζ): ∫d²ζ δ(ζ−s) f(ζ,ζ*) = f(s, s*)
        let f = |x: &GrassmannElement, xstar: &GrassmannElement| {
            let mut e = GrassmannElement::scalar(&a, c(0.5, 0.0));
            e = &e + &x.scale(c(1.25, -0.5));
            e = &e + &xstar.scale(c(-0.75, 0.25));
            e = &e + &(xstar * x).scale(c(0.3, 0.9));
            e
        };
        let lhs = (&delta * &f(&zeta, &zs)).berezin_integrate(0).unwrap();
        let rhs = f(&shift, &shift.conj());
        assert!(lhs.approx_eq(&rhs, EQ_TOL));
    }

    #[test]
    fn delta_with_zero_shift_is_the_saturated_pair() {
        let a = single();
        let zero = GrassmannElement::zero(&a);
        let d = GrassmannElement::delta(&a, 0, &zero).unwrap();
        let xi = gen(&a, GeneratorId::plain(0));
        let xs = gen(&a, GeneratorId::star(0));
        assert!(d.approx_eq(&(&xi * &xs), 0.0));
    }

    #[test]
    fn delta_rejects_even_parity_shift() {
        let a = double();
        let one = GrassmannElement::one(&a);
        assert!(matches!(
            GrassmannElement::delta(&a, 0, &one),
            Err(Error::EvenParityShift)
        ));
    }

    #[test]
    fn graded_exp_examples() {
        let a = single();
        let zero = GrassmannElement::zero(&a);
        assert!(zero.graded_exp().approx_eq(&GrassmannElement::one(&a), 0.0));

        // exp(Cξ*ξ) = 1 + Cξ*ξ
        let xi = gen(&a, GeneratorId::plain(0));
        let xs = gen(&a, GeneratorId::star(0));
        let cc = c(0.8, -0.3);
        let quad = (&xs * &xi).scale(cc);
        let expected = &GrassmannElement::one(&a) + &quad;
        assert!(quad.graded_exp().approx_eq(&expected, EQ_TOL));
    }

    #[test]
    fn weighted_exponential_mixture_identity() {
        // q·exp(xξξ*) + (1−q)·exp(−xξξ*) = exp((2q−1)xξξ*), x complex
        let a = single();
        let xi = gen(&a, GeneratorId::plain(0));
        let xs = gen(&a, GeneratorId::star(0));
        let x = c(0.37, -1.2);
        let q = 0.73;
        let m = (&xi * &xs).scale(x);
        let lhs = &m.graded_exp().scale(c(q, 0.0))
            + &(-&m).graded_exp().scale(c(1.0 - q, 0.0));
        let rhs = (&xi * &xs).scale(x * (2.0 * q - 1.0)).graded_exp();
        assert!(lhs.approx_eq(&rhs, EQ_TOL));
    }

    #[test]
    fn graded_exp_with_scalar_part() {
        let a = single();
        let xi = gen(&a, GeneratorId::plain(0));
        let s = c(0.4, 1.3);
        let arg = &GrassmannElement::scalar(&a, s) + &xi;
        let expected = (&GrassmannElement::one(&a) + &xi).scale(s.exp());
        assert!(arg.graded_exp().approx_eq(&expected, EQ_TOL));
    }

    #[test]
    fn parity_split_roundtrip() {
        let a = double();
        let f = random_element(&a, 3);
        let (even, odd) = f.parity_split();
        assert!((&even + &odd).approx_eq(&f, 0.0));
        assert!(even.terms().all(|(m, _)| m.parity() == 0));
        assert!(odd.terms().all(|(m, _)| m.parity() == 1));
    }

    #[test]
    fn even_odd_orthogonality_under_pair_integral() {
        // ∫d²ξ f± g∓ = 0
        let a = single();
        for seed in 0..8u64 {
            let f = random_element(&a, seed);
            let g = random_element(&a, seed + 100);
            let (fe, fo) = f.parity_split();
            let (ge, go) = g.parity_split();
            assert!((&fe * &go).berezin_integrate(0).unwrap().is_zero());
            assert!((&fo * &ge).berezin_integrate(0).unwrap().is_zero());
        }
    }

    #[test]
    fn rename_monotone_and_swapped() {
        let a = double();
        let target = Algebra::new(&["xi", "zeta"]);
        let zeta = gen(&a, GeneratorId::plain(0));
        let xs = gen(&a, GeneratorId::star(1));
        let m = &zeta * &xs; // ζ ξ*
        // swap pairs: ζ→pair1, ξ→pair0; ζξ* becomes ... ξ* now pair0*, ζ pair1:
        // canonical order puts pair0* first: ξ*ζ with one transposition sign.
        let renamed = m.rename_pairs(&target, &[(0, 1), (1, 0)]).unwrap();
        let zeta_t = gen(&target, GeneratorId::plain(1));
        let xs_t = gen(&target, GeneratorId::star(0));
        let expected = &zeta_t * &xs_t;
        assert!(renamed.approx_eq(&expected, 0.0));
    }

    pub(crate) fn random_element(a: &Arc<Algebra>, seed: u64) -> GrassmannElement {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = a.num_generators();
        let mut terms = Vec::new();
        for mask in 0..(1u32 << n) {
            if rng.gen_bool(0.7) {
                terms.push((
                    Monomial(mask),
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                ));
            }
        }
        GrassmannElement::from_terms(a, terms)
    }
}
