//! Analysis report structure: a deterministic, self-describing JSON
//! document. Every numeric verdict carries the tolerance it was tested
//! against, and a report is never emitted when a cross-check residual
//! exceeds its gate.

use serde::Serialize;

use qgreen::charfn::CharFn;
use qgreen::gaussian::{gaussian_cp_check, DegradabilityVerdict, WITNESS_TOL};
use qgreen::green::{apply_green, detect_gaussian, GreenFn, XI, ZETA};
use qgreen::oracle::{
    apply_channel, choi, cp_check, tt_from_kraus, KrausSet, CP_EIG_TOL,
};
use qgreen::sample::random_density;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::spec::ChannelSpec;
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Report {
    pub input: ChannelSpec,
    pub affine: AffineReport,
    pub kernel: Vec<KernelTerm>,
    pub gaussian: GaussianReport,
    pub cp: CpReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degradability: Option<DegradabilityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition: Option<CompositionReport>,
    pub cross_checks: Vec<CrossCheck>,
}

#[derive(Debug, Serialize)]
pub struct AffineReport {
    pub t: [f64; 3],
    #[serde(rename = "T")]
    pub big_t: [[f64; 3]; 3],
}

#[derive(Debug, Serialize)]
pub struct KernelTerm {
    pub monomial: Vec<String>,
    pub coefficient: (f64, f64),
}

#[derive(Debug, Serialize)]
pub struct GaussianReport {
    pub detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Serialize)]
pub struct CpReport {
    pub is_cp: bool,
    pub choi_min_eigenvalue: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cond3: Option<Cond3Report>,
}

#[derive(Debug, Serialize)]
pub struct Cond3Report {
    pub lambda1: f64,
    pub lambda2: f64,
    pub t3: f64,
    pub bound: f64,
    pub satisfied: bool,
}

#[derive(Debug, Serialize)]
pub struct DegradabilityReport {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    pub theta_x: f64,
    pub phi_x: f64,
}

#[derive(Debug, Serialize)]
pub struct CompositionReport {
    pub input_a_gaussian: bool,
    pub input_b_gaussian: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupReport>,
}

#[derive(Debug, Serialize)]
pub struct SemigroupReport {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub c: f64,
    pub matches_convolution_within: f64,
}

#[derive(Debug, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

pub fn kernel_terms(green: &GreenFn) -> Vec<KernelTerm> {
    let algebra = green.algebra().clone();
    green
        .kernel()
        .terms()
        .map(|(mono, coeff)| KernelTerm {
            monomial: mono
                .generators()
                .into_iter()
                .map(|g| {
                    format!(
                        "{}{}",
                        algebra.pair_name(g.pair),
                        if g.conjugated { "*" } else { "" }
                    )
                })
                .collect(),
            coefficient: (coeff.re, coeff.im),
        })
        .collect()
}

pub fn gaussian_report(green: &GreenFn) -> GaussianReport {
    match detect_gaussian(green) {
        Some(p) => GaussianReport {
            detected: true,
            a: Some((p.a.re, p.a.im)),
            b: Some((p.b.re, p.b.im)),
            c: Some(p.c),
            tolerance: qgreen::green::GAUSS_DETECT_TOL,
        },
        None => GaussianReport {
            detected: false,
            a: None,
            b: None,
            c: None,
            tolerance: qgreen::green::GAUSS_DETECT_TOL,
        },
    }
}

pub fn affine_report(kraus: &KrausSet) -> AffineReport {
    let data = tt_from_kraus(kraus);
    AffineReport {
        t: [data.t[0], data.t[1], data.t[2]],
        big_t: [
            [data.big_t[(0, 0)], data.big_t[(0, 1)], data.big_t[(0, 2)]],
            [data.big_t[(1, 0)], data.big_t[(1, 1)], data.big_t[(1, 2)]],
            [data.big_t[(2, 0)], data.big_t[(2, 1)], data.big_t[(2, 2)]],
        ],
    }
}

/// CP verdict from the Choi spectrum, with the closed-form inequality
/// evaluated whenever the channel sits in the Gaussian canonical family
/// (T diagonal, t₁ = t₂ = 0, λ₃ = λ₁λ₂).
pub fn cp_report(kraus: &KrausSet) -> CpReport {
    let (is_cp, min_eig) = cp_check(&choi(kraus));
    let data = tt_from_kraus(kraus);
    let [l1, l2, l3] = data.lambdas();
    let family = data.is_diagonal(1e-10)
        && data.t[0].abs() < 1e-10
        && data.t[1].abs() < 1e-10
        && (l3 - l1 * l2).abs() < 1e-10;
    let cond3 = family.then(|| {
        let t3 = data.t[2];
        let bound = ((1.0 - l1 * l1) * (1.0 - l2 * l2)).max(0.0).sqrt();
        Cond3Report {
            lambda1: l1,
            lambda2: l2,
            t3,
            bound,
            satisfied: gaussian_cp_check(l1, l2, t3),
        }
    });
    CpReport {
        is_cp,
        choi_min_eigenvalue: min_eig,
        threshold: CP_EIG_TOL,
        cond3,
    }
}

pub fn degradability_report(verdict: &DegradabilityVerdict) -> DegradabilityReport {
    DegradabilityReport {
        kind: verdict.kind.as_str().to_string(),
        witness: verdict
            .witness
            .map(|(theta_x, phi_x)| WitnessReport { theta_x, phi_x }),
        residual: verdict.residual,
        tolerance: WITNESS_TOL,
    }
}

/// Sampled path-independence residual: apply_green against the oracle
/// channel action on `samples` seeded random states.
pub fn path_independence_residual(green: &GreenFn, kraus: &KrausSet, seed: u64, samples: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = 0.0f64;
    for _ in 0..samples {
        let rho = random_density(&mut rng);
        let lhs = apply_green(green, &CharFn::of_operator(&rho));
        let rhs = CharFn::of_operator(&apply_channel(kraus, &rho));
        max = max
            .max((lhs.a - rhs.a).norm())
            .max((lhs.b1 - rhs.b1).norm())
            .max((lhs.b2 - rhs.b2).norm())
            .max((lhs.c - rhs.c).norm());
    }
    max
}

/// Trace-preservation residual of a kernel (ξ → 0 leaves exactly ζζ*).
pub fn trace_preservation_residual(green: &GreenFn) -> f64 {
    use qgreen::num_complex::Complex64;
    use qgreen::grassmann::{GeneratorId, GrassmannElement, Monomial};
    let at_zero = green.kernel().substitute_zero(XI).expect("xi pair");
    let zz = GrassmannElement::from_terms(
        green.algebra(),
        [(
            Monomial::from_generators(&[GeneratorId::plain(ZETA), GeneratorId::star(ZETA)])
                .unwrap(),
            Complex64::new(1.0, 0.0),
        )],
    );
    at_zero.max_abs_diff(&zz)
}

/// Gate every cross-check: a report with a residual above its tolerance
/// is a hard failure, never emitted.
pub fn gate_cross_checks(checks: &[CrossCheck]) -> Result<(), CliError> {
    for check in checks {
        if check.residual > check.tolerance {
            return Err(CliError::Internal(format!(
                "cross-check '{}' residual {:.3e} exceeds tolerance {:.1e}",
                check.name, check.residual, check.tolerance
            )));
        }
    }
    Ok(())
}

/// Render a report as human-readable text.
pub fn to_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("input: {}\n", summarize_spec(&report.input)));
    out.push_str(&format!(
        "affine: t = [{:.6}, {:.6}, {:.6}]\n",
        report.affine.t[0], report.affine.t[1], report.affine.t[2]
    ));
    for row in &report.affine.big_t {
        out.push_str(&format!(
            "        [{:+.6} {:+.6} {:+.6}]\n",
            row[0], row[1], row[2]
        ));
    }
    match (&report.gaussian.a, &report.gaussian.b, &report.gaussian.c) {
        (Some(a), Some(b), Some(c)) => out.push_str(&format!(
            "gaussian: a = {:.6}{:+.6}i, b = {:.6}{:+.6}i, c = {:.6}\n",
            a.0, a.1, b.0, b.1, c
        )),
        _ => out.push_str("gaussian: not detected\n"),
    }
    out.push_str(&format!(
        "cp: {} (min Choi eigenvalue {:.3e})\n",
        if report.cp.is_cp { "yes" } else { "no" },
        report.cp.choi_min_eigenvalue
    ));
    if let Some(c3) = &report.cp.cond3 {
        out.push_str(&format!(
            "cond3: |t3| = {:.6} vs bound {:.6} -> {}\n",
            c3.t3.abs(),
            c3.bound,
            if c3.satisfied { "satisfied" } else { "violated" }
        ));
    }
    if let Some(d) = &report.degradability {
        out.push_str(&format!("degradability: {}", d.kind));
        if let Some(w) = &d.witness {
            out.push_str(&format!(
                " (witness theta_x = {:.6}, phi_x = {:.6})",
                w.theta_x, w.phi_x
            ));
        }
        out.push_str(&format!(" residual {:.3e}\n", d.residual));
    }
    if let Some(comp) = &report.composition {
        out.push_str(&format!(
            "composition: inputs Gaussian: {} / {}\n",
            comp.input_a_gaussian, comp.input_b_gaussian
        ));
        if let Some(s) = &comp.semigroup {
            out.push_str(&format!(
                "semigroup: a = {:.6}{:+.6}i, b = {:.6}{:+.6}i, c = {:.6}\n",
                s.a.0, s.a.1, s.b.0, s.b.1, s.c
            ));
        }
    }
    for check in &report.cross_checks {
        out.push_str(&format!(
            "check {}: residual {:.3e} (tolerance {:.1e})\n",
            check.name, check.residual, check.tolerance
        ));
    }
    out
}

fn summarize_spec(spec: &ChannelSpec) -> String {
    match spec {
        ChannelSpec::Kraus { operators } => {
            format!("kraus ({} operators)", operators.len())
        }
        ChannelSpec::Affine { .. } => "affine (t, T)".to_string(),
        ChannelSpec::GaussianCanonical { theta, phi, q } => {
            format!("gaussian_canonical (theta = {theta}, phi = {phi}, q = {q})")
        }
    }
}
