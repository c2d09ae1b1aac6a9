//! Green-function representation of qubit channels.
//!
//! A channel N with Kraus set {M_k} has the kernel
//! G(ζ,ξ) = Σ_k Tr[M_k σ_z D(−ζ) M_k† D(ξ)] over the four generators
//! {ζ, ζ*, ξ, ξ*}; it transforms characteristic functions by
//! χ′(ξ) = ∫d²ζ χ(ζ) G(ζ,ξ) and composes by Grassmann convolution.
//! A channel is Gaussian when its kernel factors as
//! δ⁽²⁾(ζ − aξ − bξ*)·exp[−cξ*ξ].

use std::sync::Arc;

use num_complex::Complex64;

use crate::charfn::CharFn;
use crate::error::{Error, Result};
use crate::grassmann::{Algebra, GeneratorId, GrassmannElement, Monomial};
use crate::hybrid::{displacement, mat, HybridOperator};
use crate::oracle::KrausSet;

pub use crate::oracle::AffineChannelData;

/// Pair index of ζ (channel input variable) in a kernel's algebra.
pub const ZETA: usize = 0;
/// Pair index of ξ (channel output variable) in a kernel's algebra.
pub const XI: usize = 1;

/// Tolerance on the trace-preservation invariant of kernels.
pub const TP_TOL: f64 = 1e-12;

/// Reconstruction tolerance for Gaussian detection.
pub const GAUSS_DETECT_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The standard two-pair kernel algebra {ζ, ξ}.
pub fn green_algebra() -> Arc<Algebra> {
    Algebra::new(&["zeta", "xi"])
}

fn mono(gens: &[GeneratorId]) -> Monomial {
    Monomial::from_generators(gens).expect("distinct generators")
}

/// A trace-preserving channel kernel G(ζ, ξ).
#[derive(Debug, Clone)]
pub struct GreenFn {
    kernel: GrassmannElement,
}

impl GreenFn {
    /// Wrap a kernel, enforcing the trace-preservation invariant:
    /// substituting ξ = ξ* = 0 must leave exactly ζζ*.
    pub fn from_kernel(kernel: GrassmannElement) -> Result<Self> {
        let at_zero = kernel.substitute_zero(XI)?;
        let algebra = kernel.algebra().clone();
        let zeta_zeta = GrassmannElement::from_terms(
            &algebra,
            [(
                mono(&[GeneratorId::plain(ZETA), GeneratorId::star(ZETA)]),
                c(1., 0.),
            )],
        );
        let residual = at_zero.max_abs_diff(&zeta_zeta);
        if residual > TP_TOL {
            return Err(Error::NotTracePreserving(residual));
        }
        Ok(Self { kernel })
    }

    pub fn kernel(&self) -> &GrassmannElement {
        &self.kernel
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.kernel.algebra()
    }

    /// Identity-channel kernel (ζ−ξ)(ζ*−ξ*).
    pub fn identity() -> Self {
        GaussianParams::new(c(1., 0.), c(0., 0.), 0.0).kernel()
    }

    /// Convex mixture w·G₁ + (1−w)·G₂ of two kernels.
    pub fn mix(w: f64, g1: &Self, g2: &Self) -> Result<Self> {
        let kernel = g1
            .kernel
            .scale(c(w, 0.))
            .checked_add(&g2.kernel.scale(c(1. - w, 0.)))?;
        Self::from_kernel(kernel)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.kernel.max_abs_diff(&other.kernel)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.kernel.approx_eq(&other.kernel, tol)
    }
}

/// Kernel of a channel from its Kraus representation,
/// G(ζ,ξ) = Σ_k Tr[M_k σ_z D(−ζ) M_k† D(ξ)].
pub fn green_from_kraus(kraus: &KrausSet) -> GreenFn {
    let algebra = green_algebra();
    let d_neg_zeta = displacement(&algebra, ZETA)
        .expect("zeta pair")
        .negate_pair(ZETA)
        .expect("zeta pair");
    let d_xi = displacement(&algebra, XI).expect("xi pair");
    let sz = HybridOperator::from_matrix(&algebra, mat::sigma_z());

    let mut kernel = GrassmannElement::zero(&algebra);
    for m in kraus.ops() {
        let mk = HybridOperator::from_matrix(&algebra, *m);
        let mk_dag = HybridOperator::from_matrix(&algebra, m.adjoint());
        let product = &(&(&(&mk * &sz) * &d_neg_zeta) * &mk_dag) * &d_xi;
        kernel = &kernel + &product.htrace();
    }
    GreenFn::from_kernel(kernel).expect("Kraus kernels are trace preserving")
}

/// Kernel of a diagonal affine channel, built from the canonical form:
/// δ⁽²⁾(ζ − ((λ₂+λ₁)/2)ξ − ((λ₂−λ₁)/2)ξ*)·exp[−(t₃/2)ξ*ξ]
///   + (λ₃−λ₁λ₂)ξξ* + ((t₁−it₂)/2)ζζ*ξ − ((t₁+it₂)/2)ζζ*ξ*.
pub fn green_from_tt(data: &AffineChannelData) -> Result<GreenFn> {
    let off = data.off_diagonal_magnitude();
    if off > 1e-12 {
        return Err(Error::NonDiagonalT(off));
    }
    let [l1, l2, l3] = data.lambdas();
    let (t1, t2, t3) = (data.t[0], data.t[1], data.t[2]);
    let algebra = green_algebra();

    let xi = GrassmannElement::generator(&algebra, GeneratorId::plain(XI))?;
    let xi_star = GrassmannElement::generator(&algebra, GeneratorId::star(XI))?;
    let shift = &xi.scale(c((l2 + l1) / 2., 0.)) + &xi_star.scale(c((l2 - l1) / 2., 0.));
    let delta = GrassmannElement::delta(&algebra, ZETA, &shift)?;
    let exponent = (&xi_star * &xi).scale(c(-t3 / 2., 0.));
    let mut kernel = &delta * &exponent.graded_exp();

    kernel = &kernel + &(&xi * &xi_star).scale(c(l3 - l1 * l2, 0.));

    let zz = GrassmannElement::from_terms(
        &algebra,
        [(
            mono(&[GeneratorId::plain(ZETA), GeneratorId::star(ZETA)]),
            c(1., 0.),
        )],
    );
    kernel = &kernel + &(&zz * &xi).scale(c(t1 / 2., -t2 / 2.));
    kernel = &kernel - &(&zz * &xi_star).scale(c(t1 / 2., t2 / 2.));

    GreenFn::from_kernel(kernel)
}

/// Transform a characteristic function: χ′(ξ) = ∫d²ζ χ(ζ) G(ζ,ξ).
pub fn apply_green(green: &GreenFn, chi: &CharFn) -> CharFn {
    let algebra = green.algebra();
    let chi_elem = chi.to_element(algebra, ZETA).expect("zeta pair");
    let integrand = chi_elem
        .checked_mul(green.kernel())
        .expect("same context");
    let out = integrand.berezin_integrate(ZETA).expect("zeta pair");
    CharFn::from_element(&out, XI)
}

/// Compose two kernels by Grassmann convolution:
/// G₁₂(ζ,ξ) = ∫d²ξ′ G₁(ζ,ξ′) G₂(ξ′,ξ), the kernel of N₂∘N₁.
pub fn compose_green(g1: &GreenFn, g2: &GreenFn) -> GreenFn {
    let wide = Algebra::new(&["zeta", "mid", "xi"]);
    let a = g1
        .kernel()
        .rename_pairs(&wide, &[(ZETA, 0), (XI, 1)])
        .expect("rename");
    let b = g2
        .kernel()
        .rename_pairs(&wide, &[(ZETA, 1), (XI, 2)])
        .expect("rename");
    let product = a.checked_mul(&b).expect("same context");
    let integrated = product.berezin_integrate(1).expect("mid pair");
    let kernel = integrated
        .rename_pairs(&green_algebra(), &[(0, ZETA), (2, XI)])
        .expect("rename back");
    GreenFn::from_kernel(kernel).expect("convolution preserves the trace invariant")
}

/// Parameters (a, b, c) of a Gaussian kernel
/// δ⁽²⁾(ζ − aξ − bξ*)·exp[−cξ*ξ], with a, b complex and c real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: f64,
}

impl GaussianParams {
    pub fn new(a: Complex64, b: Complex64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn identity() -> Self {
        Self::new(c(1., 0.), c(0., 0.), 0.0)
    }

    /// The exponent coefficient x in the equivalent form exp[x ξξ*].
    /// Since ξξ* = −ξ*ξ the two conventions agree numerically: x = c.
    pub fn exponent_xi_xistar(&self) -> f64 {
        self.c
    }

    /// Reconstruct the kernel from the parameters.
    pub fn kernel(&self) -> GreenFn {
        let algebra = green_algebra();
        let xi = GrassmannElement::generator(&algebra, GeneratorId::plain(XI))
            .expect("xi pair");
        let xi_star = GrassmannElement::generator(&algebra, GeneratorId::star(XI))
            .expect("xi pair");
        let shift = &xi.scale(self.a) + &xi_star.scale(self.b);
        let delta =
            GrassmannElement::delta(&algebra, ZETA, &shift).expect("odd linear shift");
        let exponent = (&xi_star * &xi).scale(c(-self.c, 0.));
        let kernel = &delta * &exponent.graded_exp();
        GreenFn::from_kernel(kernel).expect("Gaussian kernels are trace preserving")
    }

    /// Semigroup composition law for N₂∘N₁:
    /// a = a₁a₂ + b₁b₂*, b = a₁b₂ + b₁a₂*, c = c₁(|a₂|²−|b₂|²) + c₂.
    pub fn compose(&self, second: &Self) -> Self {
        Self {
            a: self.a * second.a + self.b * second.b.conj(),
            b: self.a * second.b + self.b * second.a.conj(),
            c: self.c * (second.a.norm_sqr() - second.b.norm_sqr()) + second.c,
        }
    }
}

/// Detect whether a kernel is Gaussian: read (a, b, c) off designated
/// coefficients, reconstruct, and accept only when every coefficient
/// matches within `GAUSS_DETECT_TOL`. Absence is a value, not an error.
pub fn detect_gaussian(green: &GreenFn) -> Option<GaussianParams> {
    let k = green.kernel();
    let a = k.coefficient(mono(&[GeneratorId::star(ZETA), GeneratorId::plain(XI)]));
    let b = k.coefficient(mono(&[GeneratorId::star(ZETA), GeneratorId::star(XI)]));
    let c_full = k.coefficient(mono(&[
        GeneratorId::plain(ZETA),
        GeneratorId::star(ZETA),
        GeneratorId::plain(XI),
        GeneratorId::star(XI),
    ]));
    if c_full.im.abs() > GAUSS_DETECT_TOL {
        return None;
    }
    let params = GaussianParams::new(a, b, c_full.re);
    let rebuilt = params.kernel();
    if green.max_abs_diff(&rebuilt) <= GAUSS_DETECT_TOL {
        Some(params)
    } else {
        None
    }
}
