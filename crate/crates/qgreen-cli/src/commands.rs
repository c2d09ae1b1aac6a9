//! Subcommand implementations.

use rayon::prelude::*;
use serde::Deserialize;

use qgreen::green::{compose_green, detect_gaussian, green_from_tt};
use qgreen::oracle::{coherent_information, compose_kraus, tt_from_kraus};
use qgreen::sample::random_density;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{
    affine_report, cp_report, degradability_report, gate_cross_checks, gaussian_report,
    kernel_terms, path_independence_residual, trace_preservation_residual,
    CompositionReport, CrossCheck, Report, SemigroupReport,
};
use crate::spec::ChannelSpec;
use crate::CliError;

const TP_TOL: f64 = 1e-12;
const PATH_SAMPLES: usize = 20;

pub fn analyze(spec_path: &str, seed: u64, tolerance: f64) -> Result<Report, CliError> {
    let channel = ChannelSpec::load(spec_path)?.realize()?;
    let mut cross_checks = vec![
        CrossCheck {
            name: "trace_preservation".into(),
            residual: trace_preservation_residual(&channel.green),
            tolerance: TP_TOL,
        },
        CrossCheck {
            name: "path_independence_sampled".into(),
            residual: path_independence_residual(
                &channel.green,
                &channel.kraus,
                seed,
                PATH_SAMPLES,
            ),
            tolerance,
        },
    ];

    match (&channel.spec, &channel.canonical) {
        (_, Some(_)) => {
            let via_kraus = qgreen::green::green_from_kraus(&channel.kraus);
            cross_checks.push(CrossCheck {
                name: "canonical_vs_dilation_kernel".into(),
                residual: channel.green.max_abs_diff(&via_kraus),
                tolerance,
            });
        }
        (ChannelSpec::Affine { .. }, None) => {
            let data = tt_from_kraus(&channel.kraus);
            if data.is_diagonal(1e-10) {
                if let Ok(via_tt) = green_from_tt(&data) {
                    cross_checks.push(CrossCheck {
                        name: "affine_vs_kraus_kernel".into(),
                        residual: channel.green.max_abs_diff(&via_tt),
                        tolerance,
                    });
                }
            }
        }
        _ => {}
    }

    let degradability = match &channel.canonical {
        Some(params) => {
            let verdict = params
                .classify()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            Some(degradability_report(&verdict))
        }
        None => None,
    };

    gate_cross_checks(&cross_checks)?;
    Ok(Report {
        input: channel.spec.clone(),
        affine: affine_report(&channel.kraus),
        kernel: kernel_terms(&channel.green),
        gaussian: gaussian_report(&channel.green),
        cp: cp_report(&channel.kraus),
        degradability,
        composition: None,
        cross_checks,
    })
}

pub fn compose(
    spec_a: &str,
    spec_b: &str,
    seed: u64,
    tolerance: f64,
) -> Result<Report, CliError> {
    let a = ChannelSpec::load(spec_a)?.realize()?;
    let b = ChannelSpec::load(spec_b)?.realize()?;

    let composed_green = compose_green(&a.green, &b.green);
    let composed_kraus = compose_kraus(&b.kraus, &a.kraus);

    let mut cross_checks = vec![
        CrossCheck {
            name: "trace_preservation".into(),
            residual: trace_preservation_residual(&composed_green),
            tolerance: TP_TOL,
        },
        CrossCheck {
            name: "composition_vs_kraus".into(),
            residual: composed_green
                .max_abs_diff(&qgreen::green::green_from_kraus(&composed_kraus)),
            tolerance,
        },
        CrossCheck {
            name: "path_independence_sampled".into(),
            residual: path_independence_residual(
                &composed_green,
                &composed_kraus,
                seed,
                PATH_SAMPLES,
            ),
            tolerance,
        },
    ];

    let det_a = detect_gaussian(&a.green);
    let det_b = detect_gaussian(&b.green);
    let semigroup = match (&det_a, &det_b) {
        (Some(pa), Some(pb)) => {
            let law = pa.compose(pb);
            let within = composed_green.max_abs_diff(&law.kernel());
            cross_checks.push(CrossCheck {
                name: "semigroup_vs_convolution".into(),
                residual: within,
                tolerance,
            });
            Some(SemigroupReport {
                a: (law.a.re, law.a.im),
                b: (law.b.re, law.b.im),
                c: law.c,
                matches_convolution_within: within,
            })
        }
        _ => None,
    };

    gate_cross_checks(&cross_checks)?;
    Ok(Report {
        input: a.spec.clone(),
        affine: affine_report(&composed_kraus),
        kernel: kernel_terms(&composed_green),
        gaussian: gaussian_report(&composed_green),
        cp: cp_report(&composed_kraus),
        degradability: None,
        composition: Some(CompositionReport {
            input_a_gaussian: det_a.is_some(),
            input_b_gaussian: det_b.is_some(),
            semigroup,
        }),
        cross_checks,
    })
}

pub fn complement(spec_path: &str, seed: u64, tolerance: f64) -> Result<Report, CliError> {
    let channel = ChannelSpec::load(spec_path)?.realize()?;
    let Some(params) = channel.canonical else {
        return Err(CliError::Validation(
            "complement requires a gaussian_canonical spec (the dilation is defined \
             for the canonical family)"
                .into(),
        ));
    };

    let compl_green = params.complementary_green();
    let compl_kraus = params
        .weak_complementary_kraus()
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let cross_checks = vec![
        CrossCheck {
            name: "trace_preservation".into(),
            residual: trace_preservation_residual(&compl_green),
            tolerance: TP_TOL,
        },
        CrossCheck {
            name: "complementary_vs_weak_complementary".into(),
            residual: compl_green
                .max_abs_diff(&qgreen::green::green_from_kraus(&compl_kraus)),
            tolerance,
        },
        CrossCheck {
            name: "path_independence_sampled".into(),
            residual: path_independence_residual(
                &compl_green,
                &compl_kraus,
                seed,
                PATH_SAMPLES,
            ),
            tolerance,
        },
    ];

    // at q = 1 the complementary is itself a canonical family member
    let degradability = if (params.q - 1.0).abs() <= 1e-12 {
        let verdict = params
            .complementary_params()
            .classify()
            .map_err(|e| CliError::Internal(e.to_string()))?;
        Some(degradability_report(&verdict))
    } else {
        None
    };

    gate_cross_checks(&cross_checks)?;
    Ok(Report {
        input: channel.spec.clone(),
        affine: affine_report(&compl_kraus),
        kernel: kernel_terms(&compl_green),
        gaussian: gaussian_report(&compl_green),
        cp: cp_report(&compl_kraus),
        degradability,
        composition: None,
        cross_checks,
    })
}

#[derive(Debug, Deserialize)]
pub struct SweepConfig {
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub q_values: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    200
}

/// Run the (θ, φ, q) classification sweep and return CSV text. Rows are
/// evaluated in parallel but written in deterministic grid order, with
/// floats printed to 17 significant digits.
pub fn sweep(config_path: &str, seed_override: Option<u64>) -> Result<String, CliError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Validation(format!("cannot read {config_path}: {e}")))?;
    let config: SweepConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("malformed sweep config: {e}")))?;
    if config.theta_steps == 0 || config.phi_steps == 0 || config.q_values.is_empty() {
        return Err(CliError::Validation("empty sweep grid".into()));
    }
    for &q in &config.q_values {
        if !(0.0..=1.0).contains(&q) {
            return Err(CliError::Validation(format!("q = {q} outside [0, 1]")));
        }
    }
    let seed = seed_override.unwrap_or(config.seed);

    let mut cells = Vec::new();
    for i in 0..config.theta_steps {
        for j in 0..config.phi_steps {
            for (k, &q) in config.q_values.iter().enumerate() {
                cells.push((i, j, k, q));
            }
        }
    }

    let rows: Result<Vec<String>, CliError> = cells
        .par_iter()
        .map(|&(i, j, k, q)| {
            let theta = i as f64 * std::f64::consts::TAU / config.theta_steps as f64;
            let phi = j as f64 * std::f64::consts::TAU / config.phi_steps as f64;
            let params = qgreen::gaussian::CanonicalParams::new(theta, phi, q)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let verdict = params
                .classify()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let kraus = params
                .dilation_kraus()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let row_seed =
                seed ^ ((i as u64) << 42) ^ ((j as u64) << 21) ^ (k as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(row_seed);
            let mut max_j = f64::NEG_INFINITY;
            for _ in 0..config.samples {
                let rho = random_density(&mut rng);
                max_j = max_j.max(coherent_information(&kraus, &rho));
            }
            Ok(format!(
                "{:.16e},{:.16e},{:.16e},{},{:.16e},{:.16e}",
                theta,
                phi,
                q,
                verdict.kind.as_str(),
                verdict.residual,
                max_j
            ))
        })
        .collect();

    let mut csv = String::from("theta,phi,q,verdict,residual,max_coherent_info\n");
    for row in rows? {
        csv.push_str(&row);
        csv.push('\n');
    }
    Ok(csv)
}

/// Run the anchor battery; returns the number of failed checks after
/// printing one line per check.
pub fn selftest() -> usize {
    let results = qgreen::selftest::run_all();
    let mut failures = 0;
    for r in &results {
        println!(
            "{} {} (residual {:.3e}, tolerance {:.1e})",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.residual,
            r.tolerance
        );
        if !r.passed {
            failures += 1;
        }
    }
    println!(
        "selftest: {}/{} checks passed",
        results.len() - failures,
        results.len()
    );
    failures
}
