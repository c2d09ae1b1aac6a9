//! Graded hybrid operators: 2×2 qubit matrices with Grassmann
//! coefficients, stored in left-normal form (Grassmann monomial to the
//! left of the matrix part).
//!
//! The grading law ξ|j⟩ = (−1)ʲ|j⟩ξ makes σ± anticommute with odd
//! generators while σ_z and the projectors commute. Moving a matrix M
//! past a parity-p monomial therefore conjugates it: M·h = h·(σ_zᵖ M σ_zᵖ).
//! Products, adjoints and the graded trace below are the unique linear
//! extensions of that rule; the identities anchoring the conventions
//! (the trace of σ_z D(−ζ), the identity-channel kernel, D†(ξ) = D(−ξ))
//! are enforced by tests and by the self-test battery.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grassmann::{Algebra, GeneratorId, GrassmannElement, Monomial, PRUNE_TOL};

pub type Mat2 = Matrix2<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Common qubit operators in the computational basis {|0⟩, |1⟩}.
pub mod mat {
    use super::{c, Complex64, Mat2};

    pub fn zero() -> Mat2 {
        Mat2::zeros()
    }

    pub fn identity() -> Mat2 {
        Mat2::identity()
    }

    /// σ₊ = |1⟩⟨0|
    pub fn sigma_plus() -> Mat2 {
        Mat2::new(c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.))
    }

    /// σ₋ = |0⟩⟨1|
    pub fn sigma_minus() -> Mat2 {
        Mat2::new(c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.))
    }

    pub fn sigma_x() -> Mat2 {
        Mat2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
    }

    pub fn sigma_y() -> Mat2 {
        Mat2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
    }

    /// σ_z = |0⟩⟨0| − |1⟩⟨1|
    pub fn sigma_z() -> Mat2 {
        Mat2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
    }

    /// |j⟩⟨k|
    pub fn ketbra(j: usize, k: usize) -> Mat2 {
        let mut m = Mat2::zeros();
        m[(j, k)] = c(1., 0.);
        m
    }

    pub fn scale(m: &Mat2, s: Complex64) -> Mat2 {
        m.map(|x| x * s)
    }

    pub fn max_abs(m: &Mat2) -> f64 {
        m.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
        max_abs(&(a - b))
    }

    /// σ_z M σ_z: flips the sign of the off-diagonal entries.
    pub fn sz_conjugate(m: &Mat2) -> Mat2 {
        Mat2::new(m[(0, 0)], -m[(0, 1)], -m[(1, 0)], m[(1, 1)])
    }
}

/// A hybrid operator Σ_h h ⊗ M_h in left-normal form.
#[derive(Debug, Clone)]
pub struct HybridOperator {
    algebra: Arc<Algebra>,
    terms: BTreeMap<Monomial, Mat2>,
}

impl HybridOperator {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Self {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// 1 ⊗ M
    pub fn from_matrix(algebra: &Arc<Algebra>, m: Mat2) -> Self {
        let mut out = Self::zero(algebra);
        out.accumulate(Monomial::UNIT, m);
        out.prune();
        out
    }

    /// g ⊗ 𝟙
    pub fn from_grassmann(g: &GrassmannElement) -> Self {
        let mut out = Self::zero(g.algebra());
        for (mono, coeff) in g.terms() {
            out.accumulate(mono, mat::scale(&mat::identity(), coeff));
        }
        out.prune();
        out
    }

    pub fn from_term(algebra: &Arc<Algebra>, mono: Monomial, m: Mat2) -> Self {
        let mut out = Self::zero(algebra);
        out.accumulate(mono, m);
        out.prune();
        out
    }

    pub fn identity(algebra: &Arc<Algebra>) -> Self {
        Self::from_matrix(algebra, mat::identity())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Mat2)> + '_ {
        self.terms.iter().map(|(&m, mat)| (m, mat))
    }

    pub fn matrix_coefficient(&self, m: Monomial) -> Mat2 {
        self.terms.get(&m).copied().unwrap_or_else(Mat2::zeros)
    }

    fn accumulate(&mut self, mono: Monomial, m: Mat2) {
        let entry = self.terms.entry(mono).or_insert_with(Mat2::zeros);
        *entry += m;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, m| mat::max_abs(m) > PRUNE_TOL);
    }

    fn check_context(&self, other: &Self, op: &str) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("hybrid {op}")))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other, "add")?;
        let mut out = self.clone();
        for (&mono, m) in &other.terms {
            out.accumulate(mono, *m);
        }
        out.prune();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&(-other))
    }

    /// Graded product: (g⊗M)(h⊗N) = (g∧h) ⊗ (σ_z^{p(h)} M σ_z^{p(h)})·N,
    /// extended bilinearly.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other, "mul")?;
        let mut out = Self::zero(&self.algebra);
        for (&ma, mat_a) in &self.terms {
            let ga = GrassmannElement::from_terms(&self.algebra, [(ma, c(1., 0.))]);
            for (&mb, mat_b) in &other.terms {
                let gb = GrassmannElement::from_terms(&self.algebra, [(mb, c(1., 0.))]);
                let wedge = ga.checked_mul(&gb)?;
                if wedge.is_zero() {
                    continue;
                }
                let moved = if mb.parity() == 1 {
                    mat::sz_conjugate(mat_a)
                } else {
                    *mat_a
                };
                let prod = moved * mat_b;
                for (mono, coeff) in wedge.terms() {
                    out.accumulate(mono, mat::scale(&prod, coeff));
                }
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self {
            algebra: self.algebra.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&mono, m)| (mono, mat::scale(m, s)))
                .collect(),
        };
        out.prune();
        out
    }

    /// Left-multiply by a Grassmann element: (g)·X.
    pub fn mul_grassmann_left(&self, g: &GrassmannElement) -> Result<Self> {
        Self::from_grassmann(g).checked_mul(self)
    }

    /// Generalized adjoint: reverses factor order, conjugates Grassmann
    /// and matrix parts, then renormalizes to left-normal form. An
    /// involution, anti-multiplicative over the graded product.
    pub fn hadjoint(&self) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (&mono, m) in &self.terms {
            let g = GrassmannElement::from_terms(&self.algebra, [(mono, c(1., 0.))]);
            let gc = g.conj();
            let adj = m.adjoint();
            let moved = if mono.parity() == 1 {
                mat::sz_conjugate(&adj)
            } else {
                adj
            };
            for (mono2, coeff) in gc.terms() {
                out.accumulate(mono2, mat::scale(&moved, coeff));
            }
        }
        out.prune();
        out
    }

    /// Graded trace: trace(g⊗M) = g · Tr[σ_z^{p(g)} M], extended
    /// linearly. Even-parity coefficients take the ordinary matrix
    /// trace, odd-parity coefficients the σ_z-weighted trace.
    pub fn htrace(&self) -> GrassmannElement {
        let mut terms = Vec::new();
        for (&mono, m) in &self.terms {
            let tr = if mono.parity() == 1 {
                m[(0, 0)] - m[(1, 1)]
            } else {
                m.trace()
            };
            terms.push((mono, tr));
        }
        GrassmannElement::from_terms(&self.algebra, terms)
    }

    /// Substitute ξ → −ξ, ξ* → −ξ* for one pair.
    pub fn negate_pair(&self, pair: usize) -> Result<Self> {
        self.algebra.check_pair(pair)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&mono, m)| {
                    let n = usize::from(mono.contains(GeneratorId::plain(pair)))
                        + usize::from(mono.contains(GeneratorId::star(pair)));
                    let s = if n % 2 == 1 { -1.0 } else { 1.0 };
                    (mono, mat::scale(m, c(s, 0.0)))
                })
                .collect(),
        })
    }

    /// Berezin pair integral applied to the Grassmann part of each term.
    /// The monomial sits left of the matrix part, so no σ_z conjugation
    /// is involved.
    pub fn berezin_integrate(&self, pair: usize) -> Result<Self> {
        let mut out = Self::zero(&self.algebra);
        for (&mono, m) in &self.terms {
            let g = GrassmannElement::from_terms(&self.algebra, [(mono, c(1., 0.))]);
            let integrated = g.berezin_integrate(pair)?;
            for (mono2, coeff) in integrated.terms() {
                out.accumulate(mono2, mat::scale(m, coeff));
            }
        }
        out.prune();
        Ok(out)
    }

    /// Amplitudes on |0⟩ and |1⟩ of self applied to the vacuum: reads
    /// column 0 of each matrix coefficient.
    pub fn ket_amplitudes(&self) -> (GrassmannElement, GrassmannElement) {
        let mut amp0 = Vec::new();
        let mut amp1 = Vec::new();
        for (&mono, m) in &self.terms {
            amp0.push((mono, m[(0, 0)]));
            amp1.push((mono, m[(1, 0)]));
        }
        (
            GrassmannElement::from_terms(&self.algebra, amp0),
            GrassmannElement::from_terms(&self.algebra, amp1),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff = self.checked_sub(other).expect("same context");
        diff.terms
            .values()
            .map(mat::max_abs)
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.algebra == other.algebra && self.max_abs_diff(other) <= tol
    }
}

impl Add for &HybridOperator {
    type Output = HybridOperator;
    fn add(self, rhs: &HybridOperator) -> HybridOperator {
        self.checked_add(rhs).expect("algebra context mismatch in +")
    }
}

impl Sub for &HybridOperator {
    type Output = HybridOperator;
    fn sub(self, rhs: &HybridOperator) -> HybridOperator {
        self.checked_sub(rhs).expect("algebra context mismatch in -")
    }
}

impl Mul for &HybridOperator {
    type Output = HybridOperator;
    fn mul(self, rhs: &HybridOperator) -> HybridOperator {
        self.checked_mul(rhs).expect("algebra context mismatch in *")
    }
}

impl Neg for &HybridOperator {
    type Output = HybridOperator;
    fn neg(self) -> HybridOperator {
        self.scale(c(-1., 0.))
    }
}

impl fmt::Display for HybridOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (&mono, m) in &self.terms {
            write!(f, "[")?;
            for g in mono.generators() {
                write!(
                    f,
                    "{}{}",
                    self.algebra.pair_name(g.pair),
                    if g.conjugated { "*" } else { "" }
                )?;
            }
            writeln!(f, "] ⊗ {m:.4}")?;
        }
        Ok(())
    }
}

/// Qubit displacement operator D(ξ) = exp(σ₊ξ − ξ*σ₋)
///                                  = 𝟙 + σ₊ξ − ξ*σ₋ − σ_z ξ*ξ/2,
/// returned in left-normal form.
pub fn displacement(algebra: &Arc<Algebra>, pair: usize) -> Result<HybridOperator> {
    algebra.check_pair(pair)?;
    let xi = Monomial::from_generators(&[GeneratorId::plain(pair)]).unwrap();
    let xi_star = Monomial::from_generators(&[GeneratorId::star(pair)]).unwrap();
    let both =
        Monomial::from_generators(&[GeneratorId::plain(pair), GeneratorId::star(pair)]).unwrap();
    let mut d = HybridOperator::identity(algebra);
    // σ₊ξ = −ξσ₊
    d.accumulate(xi, mat::scale(&mat::sigma_plus(), c(-1., 0.)));
    // −ξ*σ₋
    d.accumulate(xi_star, mat::scale(&mat::sigma_minus(), c(-1., 0.)));
    // −σ_z ξ*ξ/2 = +ξξ* σ_z/2
    d.accumulate(both, mat::scale(&mat::sigma_z(), c(0.5, 0.)));
    Ok(d)
}

/// The inversion kernel operator Ẽ(ξ) = σ_z − ξ*ξ/2 + σ₊ξ − ξ*σ₋ in
/// left-normal form.
pub fn etilde(algebra: &Arc<Algebra>, pair: usize) -> Result<HybridOperator> {
    algebra.check_pair(pair)?;
    let xi = Monomial::from_generators(&[GeneratorId::plain(pair)]).unwrap();
    let xi_star = Monomial::from_generators(&[GeneratorId::star(pair)]).unwrap();
    let both =
        Monomial::from_generators(&[GeneratorId::plain(pair), GeneratorId::star(pair)]).unwrap();
    let mut e = HybridOperator::from_matrix(algebra, mat::sigma_z());
    // −ξ*ξ/2 = +ξξ*/2
    e.accumulate(both, mat::scale(&mat::identity(), c(0.5, 0.)));
    e.accumulate(xi, mat::scale(&mat::sigma_plus(), c(-1., 0.)));
    e.accumulate(xi_star, mat::scale(&mat::sigma_minus(), c(-1., 0.)));
    Ok(e)
}

/// Coherent-state amplitudes |ξ⟩ = D(ξ)|0⟩ = (1 − ξ*ξ/2)|0⟩ − ξ|1⟩.
pub fn coherent_state(
    algebra: &Arc<Algebra>,
    pair: usize,
) -> Result<(GrassmannElement, GrassmannElement)> {
    let d = displacement(algebra, pair)?;
    let vacuum = HybridOperator::from_matrix(algebra, mat::ketbra(0, 0));
    Ok(d.checked_mul(&vacuum)?.ket_amplitudes())
}
