//! Characteristic functions of qubit operators: χ(ξ) = Tr[Θ D(ξ)],
//! its inversion through Ẽ(−ξ), and density-operator validity tests.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::grassmann::{Algebra, GeneratorId, GrassmannElement, Monomial};
use crate::hybrid::{displacement, etilde, mat, HybridOperator, Mat2};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The four coefficients of χ(ξ) = A + B₁ξ + B₂ξ* + Cξ*ξ.
///
/// Note the quadratic coefficient is stated in ξ*ξ order; the canonical
/// monomial ξξ* therefore stores −C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharFn {
    pub a: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub c: Complex64,
}

/// Density-operator validity of a characteristic function, with the raw
/// numbers each verdict was derived from.
#[derive(Debug, Clone, Copy)]
pub struct ValidityReport {
    pub hermitian: bool,
    pub normalized: bool,
    pub positive: bool,
    /// |∫d²ξ χξ|² + [∫d²ξ χ]², to be compared against 1/4.
    pub positivity_lhs: f64,
    /// Deviation of χ(0) from 1.
    pub normalization_error: f64,
    /// Largest violation of the Hermitianity constraints.
    pub hermiticity_error: f64,
}

impl ValidityReport {
    pub fn all_ok(&self) -> bool {
        self.hermitian && self.normalized && self.positive
    }
}

impl CharFn {
    pub fn new(a: Complex64, b1: Complex64, b2: Complex64, c: Complex64) -> Self {
        Self { a, b1, b2, c }
    }

    /// χ of the operator Θ in the computational basis:
    /// A = Tr Θ, B₁ = θ₀₁, B₂ = −θ₁₀, C = (θ₁₁−θ₀₀)/2.
    pub fn of_operator(theta: &Mat2) -> Self {
        Self {
            a: theta.trace(),
            b1: theta[(0, 1)],
            b2: -theta[(1, 0)],
            c: (theta[(1, 1)] - theta[(0, 0)]) * 0.5,
        }
    }

    /// Evaluate χ(ξ) ≡ Tr[Θ D(ξ)] symbolically; coefficients match
    /// `of_operator` exactly, which is asserted in the self-tests.
    pub fn of_operator_via_trace(theta: &Mat2, algebra: &Arc<Algebra>, pair: usize) -> Result<Self> {
        let d = displacement(algebra, pair)?;
        let op = HybridOperator::from_matrix(algebra, *theta);
        let chi = op.checked_mul(&d)?.htrace();
        Ok(Self::from_element(&chi, pair))
    }

    /// Read coefficients off a Grassmann element over one pair.
    pub fn from_element(element: &GrassmannElement, pair: usize) -> Self {
        let xi = Monomial::from_generators(&[GeneratorId::plain(pair)]).unwrap();
        let xi_star = Monomial::from_generators(&[GeneratorId::star(pair)]).unwrap();
        let both =
            Monomial::from_generators(&[GeneratorId::plain(pair), GeneratorId::star(pair)])
                .unwrap();
        Self {
            a: element.scalar_part(),
            b1: element.coefficient(xi),
            b2: element.coefficient(xi_star),
            c: -element.coefficient(both),
        }
    }

    /// Render as a Grassmann element over one pair of an algebra.
    pub fn to_element(&self, algebra: &Arc<Algebra>, pair: usize) -> Result<GrassmannElement> {
        algebra.check_pair(pair)?;
        let xi = Monomial::from_generators(&[GeneratorId::plain(pair)]).unwrap();
        let xi_star = Monomial::from_generators(&[GeneratorId::star(pair)]).unwrap();
        let both =
            Monomial::from_generators(&[GeneratorId::plain(pair), GeneratorId::star(pair)])
                .unwrap();
        Ok(GrassmannElement::from_terms(
            algebra,
            [
                (Monomial::UNIT, self.a),
                (xi, self.b1),
                (xi_star, self.b2),
                (both, -self.c),
            ],
        ))
    }

    /// Exact inverse of `of_operator`: Θ = ∫d²ξ χ(ξ) Ẽ(−ξ).
    pub fn invert(&self) -> Mat2 {
        let algebra = Algebra::new(&["xi"]);
        let chi = self.to_element(&algebra, 0).expect("pair 0 exists");
        let kernel = etilde(&algebra, 0)
            .expect("pair 0 exists")
            .negate_pair(0)
            .expect("pair 0 exists");
        let integrand = kernel
            .mul_grassmann_left(&chi)
            .expect("same context");
        let theta = integrand
            .berezin_integrate(0)
            .expect("pair 0 exists");
        theta.matrix_coefficient(Monomial::UNIT)
    }

    /// ∫d²ξ χ(ξ)ξ* = γ, the coherence θ₀₁ of a density matrix.
    pub fn gamma(&self) -> Complex64 {
        self.b1
    }

    /// ∫d²ξ χ(ξ) + 1/2 = p (the ground-state population).
    pub fn population(&self) -> Complex64 {
        -self.c + 0.5
    }

    /// Density-operator validity checks: Hermitianity χ(ξ) = [χ(−ξ)]*,
    /// normalization χ(0) = 1, and the positivity inequality
    /// |∫d²ξ χξ|² + [∫d²ξ χ]² ≤ 1/4.
    pub fn density_checks(&self) -> ValidityReport {
        // χ(ξ) = [χ(−ξ)]* ⇔ A real, C real, B₁ = −B₂*.
        let herm_a = self.a.im.abs();
        let herm_c = self.c.im.abs();
        let herm_b = (self.b1 + self.b2.conj()).norm();
        let hermiticity_error = herm_a.max(herm_c).max(herm_b);
        let hermitian = hermiticity_error <= 1e-10;

        let normalization_error = (self.a - c(1., 0.)).norm();
        let normalized = normalization_error <= 1e-10;

        // ∫d²ξ χξ = −B₂ and ∫d²ξ χ = −C; Hermitianity forces −C real, so
        // the squared term takes the real part only.
        let int_chi_xi = -self.b2;
        let int_chi = -self.c;
        let positivity_lhs = int_chi_xi.norm_sqr() + int_chi.re * int_chi.re;
        let positive = hermitian && normalized && positivity_lhs <= 0.25 + 1e-12;

        ValidityReport {
            hermitian,
            normalized,
            positive,
            positivity_lhs,
            normalization_error,
            hermiticity_error,
        }
    }
}

/// Berezin moments of a characteristic function, computed symbolically.
/// Used to pin the closed-form shortcuts in `gamma`/`population`.
pub fn moment(chi: &CharFn, weight: Option<GeneratorId>) -> Complex64 {
    let algebra = Algebra::new(&["xi"]);
    let elem = chi.to_element(&algebra, 0).expect("pair 0");
    let integrand = match weight {
        None => elem,
        Some(g) => {
            let w = GrassmannElement::generator(&algebra, g).expect("pair 0");
            elem.checked_mul(&w).expect("same context")
        }
    };
    integrand
        .berezin_integrate(0)
        .expect("pair 0")
        .scalar_part()
}

/// Maximally mixed state 𝟙/2 convenience.
pub fn maximally_mixed() -> Mat2 {
    mat::scale(&mat::identity(), c(0.5, 0.))
}
