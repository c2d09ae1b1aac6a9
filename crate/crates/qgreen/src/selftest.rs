//! Pinned convention anchors and the cross-module correspondence
//! matrix. Every sign convention in the crate (Berezin normalization,
//! trace parity rule, displacement adjoint) is enforced here rather
//! than documented; a flipped convention fails the corresponding anchor
//! by name.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charfn::CharFn;
use crate::gaussian::{gaussian_cp_check, CanonicalParams};
use crate::grassmann::{Algebra, GeneratorId, GrassmannElement};
use crate::green::{
    apply_green, compose_green, detect_gaussian, green_from_kraus, green_from_tt,
    GaussianParams, GreenFn,
};
use crate::hybrid::{displacement, mat, HybridOperator};
use crate::oracle::{
    apply_channel, choi_from_tt, compose_kraus, cp_check, kraus_from_tt, AffineChannelData,
    KrausSet,
};
use crate::sample::{random_channel, random_density, random_matrix2};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One anchor or correspondence check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn gate(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            passed: residual <= tolerance,
            residual,
            tolerance,
        }
    }
}

/// Run the full battery: five convention anchors plus the nine-item
/// correspondence matrix between the Grassmann and dense-matrix routes.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        anchor_berezin_sifting(),
        anchor_char_coefficients(),
        anchor_identity_kernel(),
        anchor_trace_preservation(),
        anchor_displacement_adjoint(),
        matrix_charfn_trace_route(),
        matrix_inversion_roundtrip(),
        matrix_apply_green(),
        matrix_compose_green(),
        matrix_tt_kernel(),
        matrix_gaussian_semigroup(),
        matrix_canonical_vs_dilation(),
        matrix_complementary_vs_weak(),
        matrix_cond3_vs_choi(),
    ]
}

/// ∫d²ξ δ⁽²⁾(ξ−ζ) f(ξ,ξ*) = f(ζ,ζ*) on a fixed asymmetric f.
fn anchor_berezin_sifting() -> CheckResult {
    let a = Algebra::new(&["zeta", "xi"]);
    let build_f = |pair: usize| -> GrassmannElement {
        let g = GrassmannElement::generator(&a, GeneratorId::plain(pair)).unwrap();
        let gs = GrassmannElement::generator(&a, GeneratorId::star(pair)).unwrap();
        let mut f = GrassmannElement::scalar(&a, c(0.35, -0.8));
        f = &f + &g.scale(c(1.1, 0.4));
        f = &f + &gs.scale(c(-0.6, 0.9));
        f = &f + &(&gs * &g).scale(c(0.25, -0.15));
        f
    };
    let zeta = GrassmannElement::generator(&a, GeneratorId::plain(0)).unwrap();
    let delta = GrassmannElement::delta(&a, 1, &zeta).unwrap();
    let sifted = (&delta * &build_f(1)).berezin_integrate(1).unwrap();
    CheckResult::gate(
        "anchor: Berezin delta sifting",
        sifted.max_abs_diff(&build_f(0)),
        1e-12,
    )
}

/// χ(ξ) = Tr[Θ] + (θ₀₀−θ₁₁)ξξ*/2 + θ₀₁ξ − θ₁₀ξ*, via the graded trace.
fn anchor_char_coefficients() -> CheckResult {
    let theta = crate::hybrid::Mat2::new(c(0.3, 0.1), c(-0.7, 0.2), c(0.5, -0.4), c(0.9, 0.6));
    let algebra = Algebra::new(&["xi"]);
    let traced = CharFn::of_operator_via_trace(&theta, &algebra, 0).unwrap();
    let residual = (traced.a - theta.trace())
        .norm()
        .max((traced.b1 - theta[(0, 1)]).norm())
        .max((traced.b2 + theta[(1, 0)]).norm())
        .max((traced.c - (theta[(1, 1)] - theta[(0, 0)]) * 0.5).norm());
    CheckResult::gate("anchor: characteristic-function coefficients", residual, 1e-12)
}

/// Identity-channel kernel equals (ζ−ξ)(ζ*−ξ*).
fn anchor_identity_kernel() -> CheckResult {
    let g = green_from_kraus(&KrausSet::identity());
    CheckResult::gate(
        "anchor: identity-channel kernel",
        g.max_abs_diff(&GreenFn::identity()),
        1e-12,
    )
}

/// G(ζ,0) = Tr[σ_z D(−ζ)] = ζζ* for every constructed kernel.
fn anchor_trace_preservation() -> CheckResult {
    let a = Algebra::new(&["zeta", "xi"]);
    let d_neg = displacement(&a, 0).unwrap().negate_pair(0).unwrap();
    let sz = HybridOperator::from_matrix(&a, mat::sigma_z());
    let tr = sz.checked_mul(&d_neg).unwrap().htrace();
    let zeta = GrassmannElement::generator(&a, GeneratorId::plain(0)).unwrap();
    let zs = GrassmannElement::generator(&a, GeneratorId::star(0)).unwrap();
    CheckResult::gate(
        "anchor: trace of sigma_z displacement",
        tr.max_abs_diff(&(&zeta * &zs)),
        1e-12,
    )
}

/// D†(ξ) = D(−ξ).
fn anchor_displacement_adjoint() -> CheckResult {
    let a = Algebra::new(&["xi"]);
    let d = displacement(&a, 0).unwrap();
    CheckResult::gate(
        "anchor: displacement adjoint",
        d.hadjoint().max_abs_diff(&d.negate_pair(0).unwrap()),
        1e-12,
    )
}

fn matrix_charfn_trace_route() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let algebra = Algebra::new(&["xi"]);
    let mut residual = 0.0f64;
    for _ in 0..24 {
        let theta = random_matrix2(&mut rng);
        let closed = CharFn::of_operator(&theta);
        let traced = CharFn::of_operator_via_trace(&theta, &algebra, 0).unwrap();
        residual = residual
            .max((closed.a - traced.a).norm())
            .max((closed.b1 - traced.b1).norm())
            .max((closed.b2 - traced.b2).norm())
            .max((closed.c - traced.c).norm());
    }
    CheckResult::gate("matrix 1: char_of closed form vs graded trace", residual, 1e-12)
}

fn matrix_inversion_roundtrip() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut residual = 0.0f64;
    for _ in 0..24 {
        let theta = random_matrix2(&mut rng);
        let back = CharFn::of_operator(&theta).invert();
        residual = residual.max(mat::max_abs_diff(&back, &theta));
    }
    CheckResult::gate("matrix 2: inversion roundtrip", residual, 1e-12)
}

fn matrix_apply_green() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut residual = 0.0f64;
    for _ in 0..16 {
        let n = rng.gen_range(1..=4);
        let kraus = random_channel(&mut rng, n);
        let rho = random_density(&mut rng);
        let lhs = apply_green(&green_from_kraus(&kraus), &CharFn::of_operator(&rho));
        let rhs = CharFn::of_operator(&apply_channel(&kraus, &rho));
        residual = residual
            .max((lhs.a - rhs.a).norm())
            .max((lhs.b1 - rhs.b1).norm())
            .max((lhs.b2 - rhs.b2).norm())
            .max((lhs.c - rhs.c).norm());
    }
    CheckResult::gate("matrix 3: apply_green vs oracle channel action", residual, 1e-12)
}

fn matrix_compose_green() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut residual = 0.0f64;
    for _ in 0..16 {
        let n1 = rng.gen_range(1..=4);
        let k1 = random_channel(&mut rng, n1);
        let n2 = rng.gen_range(1..=4);
        let k2 = random_channel(&mut rng, n2);
        let lhs = compose_green(&green_from_kraus(&k1), &green_from_kraus(&k2));
        let rhs = green_from_kraus(&compose_kraus(&k2, &k1));
        residual = residual.max(lhs.max_abs_diff(&rhs));
    }
    CheckResult::gate("matrix 4: Grassmann convolution vs Kraus composition", residual, 1e-10)
}

fn matrix_tt_kernel() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut residual = 0.0f64;
    let mut found = 0;
    while found < 12 {
        let data = AffineChannelData::diagonal(
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ],
            [
                rng.gen_range(-0.4..0.4),
                rng.gen_range(-0.4..0.4),
                rng.gen_range(-0.4..0.4),
            ],
        );
        let Ok(kraus) = kraus_from_tt(&data) else {
            continue;
        };
        found += 1;
        let lhs = green_from_tt(&data).unwrap();
        let rhs = green_from_kraus(&kraus);
        residual = residual.max(lhs.max_abs_diff(&rhs));
    }
    CheckResult::gate("matrix 5: affine kernel vs Kraus kernel", residual, 1e-9)
}

fn matrix_gaussian_semigroup() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut residual = 0.0f64;
    for _ in 0..16 {
        let p1 = GaussianParams::new(
            c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)),
            c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)),
            rng.gen_range(-0.5..0.5),
        );
        let p2 = GaussianParams::new(
            c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)),
            c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)),
            rng.gen_range(-0.5..0.5),
        );
        let convolved = compose_green(&p1.kernel(), &p2.kernel());
        let direct = p1.compose(&p2).kernel();
        residual = residual.max(convolved.max_abs_diff(&direct));
        let detected = detect_gaussian(&convolved);
        if detected.is_none() {
            residual = residual.max(1.0);
        }
    }
    CheckResult::gate("matrix 6: Gaussian semigroup law vs convolution", residual, 1e-12)
}

fn matrix_canonical_vs_dilation() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut residual = 0.0f64;
    for _ in 0..16 {
        let p = CanonicalParams::new(
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..1.0),
        )
        .unwrap();
        let lhs = p.to_green();
        let rhs = green_from_kraus(&p.dilation_kraus().unwrap());
        residual = residual.max(lhs.max_abs_diff(&rhs));
    }
    CheckResult::gate("matrix 7: canonical kernel vs dilation kernel", residual, 1e-12)
}

fn matrix_complementary_vs_weak() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut residual = 0.0f64;
    for _ in 0..16 {
        let p = CanonicalParams::new(
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..1.0),
        )
        .unwrap();
        let lhs = p.complementary_green();
        let rhs = green_from_kraus(&p.weak_complementary_kraus().unwrap());
        residual = residual.max(lhs.max_abs_diff(&rhs));
    }
    CheckResult::gate(
        "matrix 8: complementary kernel vs oracle weak complementary",
        residual,
        1e-12,
    )
}

fn matrix_cond3_vs_choi() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut disagreements = 0u32;
    for _ in 0..400 {
        let l1: f64 = rng.gen_range(-1.0..1.0);
        let l2: f64 = rng.gen_range(-1.0..1.0);
        let t3: f64 = rng.gen_range(-1.0..1.0);
        let ineq = gaussian_cp_check(l1, l2, t3);
        let data = AffineChannelData::diagonal([l1, l2, l1 * l2], [0., 0., t3]);
        let (psd, _) = cp_check(&choi_from_tt(&data));
        if ineq != psd {
            disagreements += 1;
        }
    }
    CheckResult::gate("matrix 9: CP inequality vs Choi spectrum", disagreements as f64, 0.0)
}
