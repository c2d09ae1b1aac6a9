//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`) and asserting the stated tolerance
//! and runtime bounds.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgreen::charfn::CharFn;
use qgreen::gaussian::{
    gaussian_cp_check, witness_channel_kraus, CanonicalParams, DegradabilityKind,
};
use qgreen::grassmann::{Algebra, GeneratorId, GrassmannElement};
use qgreen::green::{
    apply_green, compose_green, detect_gaussian, green_from_kraus, GaussianParams, GreenFn,
};
use qgreen::hybrid::{displacement, mat, HybridOperator};
use qgreen::oracle::{
    apply_channel, choi, choi_from_tt, coherent_information, coherent_information_general,
    compose_kraus, cp_check, verify_degradation, AffineChannelData, KrausSet,
};
use qgreen::sample::{bloch_state, random_channel, random_density, random_matrix2};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(id: u32, name: &str, passed: bool, elapsed_s: f64, detail: &str) {
    println!(
        "ACCEPTANCE {id:02} {}: {name} [{elapsed_s:.2}s] {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {id} failed: {detail}");
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n.max(2) - 1) as f64)
        .collect()
}

/// Criterion 1: Grassmann kernel laws on 1000 randomized instances,
/// exact to 1e-12, under 5 seconds.
#[test]
fn acceptance_01_grassmann_kernel_laws() {
    let start = Instant::now();
    let algebra = Algebra::new(&["zeta", "xi"]);
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut max_residual = 0.0f64;

    let random_element = |rng: &mut ChaCha8Rng| {
        let mut terms = Vec::new();
        for mask in 0..16u32 {
            if rng.gen_bool(0.8) {
                let gens: Vec<GeneratorId> = (0..4u8)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| GeneratorId {
                        pair: (i / 2) as usize,
                        conjugated: i % 2 == 1,
                    })
                    .collect();
                terms.push((
                    qgreen::grassmann::Monomial::from_generators(&gens).unwrap(),
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                ));
            }
        }
        GrassmannElement::from_terms(&algebra, terms)
    };

    for _ in 0..200 {
        // nilpotency of odd parts
        let x = random_element(&mut rng).parity_split().1;
        max_residual = max_residual
            .max((&x * &x).max_abs_diff(&GrassmannElement::zero(&algebra)));
    }
    for _ in 0..200 {
        // anticommutation of random generator pairs
        let gi = GeneratorId {
            pair: rng.gen_range(0..2),
            conjugated: rng.gen_bool(0.5),
        };
        let gj = GeneratorId {
            pair: rng.gen_range(0..2),
            conjugated: rng.gen_bool(0.5),
        };
        let a = GrassmannElement::generator(&algebra, gi).unwrap();
        let b = GrassmannElement::generator(&algebra, gj).unwrap();
        max_residual = max_residual
            .max((&(&a * &b) + &(&b * &a)).max_abs_diff(&GrassmannElement::zero(&algebra)));
    }
    for _ in 0..200 {
        // associativity
        let (a, b, cc) = (
            random_element(&mut rng),
            random_element(&mut rng),
            random_element(&mut rng),
        );
        max_residual = max_residual.max((&(&a * &b) * &cc).max_abs_diff(&(&a * &(&b * &cc))));
    }
    for _ in 0..200 {
        // conj anti-multiplicativity
        let (a, b) = (random_element(&mut rng), random_element(&mut rng));
        max_residual =
            max_residual.max((&a * &b).conj().max_abs_diff(&(&b.conj() * &a.conj())));
    }
    for _ in 0..200 {
        // delta sifting with 4 random coefficients
        let coeffs: Vec<Complex64> = (0..4)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f_of = |pair: usize| {
            let g = GrassmannElement::generator(&algebra, GeneratorId::plain(pair)).unwrap();
            let gs = GrassmannElement::generator(&algebra, GeneratorId::star(pair)).unwrap();
            let mut f = GrassmannElement::scalar(&algebra, coeffs[0]);
            f = &f + &g.scale(coeffs[1]);
            f = &f + &gs.scale(coeffs[2]);
            f = &f + &(&gs * &g).scale(coeffs[3]);
            f
        };
        let zeta = GrassmannElement::generator(&algebra, GeneratorId::plain(0)).unwrap();
        let delta = GrassmannElement::delta(&algebra, 1, &zeta).unwrap();
        let sifted = (&delta * &f_of(1)).berezin_integrate(1).unwrap();
        max_residual = max_residual.max(sifted.max_abs_diff(&f_of(0)));
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "Grassmann kernel laws (1000 instances)",
        max_residual <= 1e-12 && elapsed < 5.0,
        elapsed,
        &format!("max residual {max_residual:.3e}, bound 1e-12, runtime bound 5s"),
    );
}

/// Criterion 2: characteristic-function roundtrip on 500 random
/// operators (< 1e-12) and density-validity equivalence with the oracle
/// PSD test on 1000 samples, zero disagreements.
#[test]
fn acceptance_02_charfn_roundtrip_and_validity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut max_err = 0.0f64;
    for _ in 0..500 {
        let theta = random_matrix2(&mut rng);
        let back = CharFn::of_operator(&theta).invert();
        max_err = max_err.max(mat::max_abs_diff(&back, &theta));
    }

    let mut disagreements = 0u32;
    for k in 0..1000 {
        // half clearly valid (|r| ≤ 0.95), half clearly invalid
        // (1.05 ≤ |r| ≤ 3) unit-trace Hermitian matrices
        let dir: [f64; 3] = loop {
            let v = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 > 1e-6 {
                let n = n2.sqrt();
                break [v[0] / n, v[1] / n, v[2] / n];
            }
        };
        let r = if k % 2 == 0 {
            rng.gen_range(0.0..0.95)
        } else {
            rng.gen_range(1.05..3.0)
        };
        let rho = bloch_state(r * dir[0], r * dir[1], r * dir[2]);
        let chi_valid = CharFn::of_operator(&rho).density_checks().all_ok();
        let se = rho.symmetric_eigen();
        let oracle_valid = se.eigenvalues.iter().all(|&l| l >= 0.0);
        if chi_valid != oracle_valid {
            disagreements += 1;
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        "characteristic-function roundtrip and density validity",
        max_err < 1e-12 && disagreements == 0,
        elapsed,
        &format!("max roundtrip error {max_err:.3e} (bound 1e-12), disagreements {disagreements}/1000"),
    );
}

/// Criterion 3: closed-form anchor identities reproduced exactly via
/// the self-test battery.
#[test]
fn acceptance_03_anchor_identities() {
    let start = Instant::now();
    let results = qgreen::selftest::run_all();
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name)
        .collect();
    // also assert the three named anchors directly
    let algebra = Algebra::new(&["zeta", "xi"]);
    let d_neg = displacement(&algebra, 0).unwrap().negate_pair(0).unwrap();
    let sz = HybridOperator::from_matrix(&algebra, mat::sigma_z());
    let g_zeta_0 = sz.checked_mul(&d_neg).unwrap().htrace();
    let zeta = GrassmannElement::generator(&algebra, GeneratorId::plain(0)).unwrap();
    let zs = GrassmannElement::generator(&algebra, GeneratorId::star(0)).unwrap();
    let anchor_tp = g_zeta_0.max_abs_diff(&(&zeta * &zs));

    let id_kernel = green_from_kraus(&KrausSet::identity());
    let anchor_id = id_kernel.max_abs_diff(&GreenFn::identity());

    let a1 = Algebra::new(&["xi"]);
    let d = displacement(&a1, 0).unwrap();
    let anchor_adj = d.hadjoint().max_abs_diff(&d.negate_pair(0).unwrap());

    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        "anchor identities (selftest battery)",
        failed.is_empty() && anchor_tp == 0.0 && anchor_id <= 1e-12 && anchor_adj == 0.0,
        elapsed,
        &format!(
            "failed checks: {failed:?}; residuals tp={anchor_tp:.1e} id={anchor_id:.1e} adj={anchor_adj:.1e}"
        ),
    );
}

/// Criterion 4: Green/oracle path independence on 200 random channel ×
/// state pairs, per-coefficient 1e-12, under 30 s.
#[test]
fn acceptance_04_path_independence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut max_err = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let kraus = random_channel(&mut rng, n);
        let rho = random_density(&mut rng);
        let lhs = apply_green(&green_from_kraus(&kraus), &CharFn::of_operator(&rho));
        let rhs = CharFn::of_operator(&apply_channel(&kraus, &rho));
        max_err = max_err
            .max((lhs.a - rhs.a).norm())
            .max((lhs.b1 - rhs.b1).norm())
            .max((lhs.b2 - rhs.b2).norm())
            .max((lhs.c - rhs.c).norm());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        "Green/oracle path independence (200 pairs)",
        max_err <= 1e-12 && elapsed < 30.0,
        elapsed,
        &format!("max coefficient error {max_err:.3e}, bound 1e-12, runtime bound 30s"),
    );
}

/// Criterion 5: composition consistency on 200 random pairs and the
/// Gaussian semigroup law on 200 Gaussian pairs, to 1e-12.
#[test]
fn acceptance_05_composition_consistency() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut max_kraus = 0.0f64;
    for _ in 0..200 {
        let n1 = rng.gen_range(1..=4);
        let k1 = random_channel(&mut rng, n1);
        let n2 = rng.gen_range(1..=4);
        let k2 = random_channel(&mut rng, n2);
        let lhs = compose_green(&green_from_kraus(&k1), &green_from_kraus(&k2));
        let rhs = green_from_kraus(&compose_kraus(&k2, &k1));
        max_kraus = max_kraus.max(lhs.max_abs_diff(&rhs));
    }

    let mut max_gauss = 0.0f64;
    for _ in 0..200 {
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
        max_gauss = max_gauss.max(convolved.max_abs_diff(&p1.compose(&p2).kernel()));
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        "composition consistency (200 + 200 pairs)",
        max_kraus <= 1e-12 && max_gauss <= 1e-12,
        elapsed,
        &format!("Kraus route {max_kraus:.3e}, semigroup law {max_gauss:.3e}, bound 1e-12"),
    );
}

/// Criterion 6: the closed-form CP inequality agrees with the oracle Choi PSD
/// verdict on a 50×50×11 grid with λ₃ = λ₁λ₂.
#[test]
fn acceptance_06_cp_boundary_agreement() {
    let start = Instant::now();
    let lambdas = linspace(-1.0, 1.0, 50);
    let t3s = linspace(-1.0, 1.0, 11);
    let mut disagreements = 0u32;
    let mut total = 0u32;
    for &l1 in &lambdas {
        for &l2 in &lambdas {
            for &t3 in &t3s {
                total += 1;
                let ineq = gaussian_cp_check(l1, l2, t3);
                let data = AffineChannelData::diagonal([l1, l2, l1 * l2], [0., 0., t3]);
                let (psd, _) = cp_check(&choi_from_tt(&data));
                if ineq != psd {
                    disagreements += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        "CP boundary agreement (50×50×11 grid)",
        disagreements == 0,
        elapsed,
        &format!("{disagreements} disagreements over {total} points"),
    );
}

/// Criterion 7: dilation and complementary kernels agree with the
/// oracle on a 20×20×5 grid, ≤ 1e-12 per coefficient; the q = 1
/// substitution identity holds exactly.
#[test]
fn acceptance_07_dilation_and_complementary() {
    let start = Instant::now();
    let thetas = linspace(0.0, std::f64::consts::TAU, 21);
    let qs = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut max_dilation = 0.0f64;
    let mut max_compl = 0.0f64;
    let mut max_subst = 0.0f64;
    for &theta in thetas.iter().take(20) {
        for &phi in thetas.iter().take(20) {
            for &q in &qs {
                let p = CanonicalParams::new(theta, phi, q).unwrap();
                let lhs = p.to_green();
                let rhs = green_from_kraus(&p.dilation_kraus().unwrap());
                max_dilation = max_dilation.max(lhs.max_abs_diff(&rhs));

                let lhs_c = p.complementary_green();
                let rhs_c = green_from_kraus(&p.weak_complementary_kraus().unwrap());
                max_compl = max_compl.max(lhs_c.max_abs_diff(&rhs_c));

                if (q - 1.0).abs() < 1e-15 {
                    let subst = p.complementary_params().to_green();
                    max_subst = max_subst.max(lhs_c.max_abs_diff(&subst));
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        7,
        "dilation and complementary consistency (20×20×5 grid)",
        max_dilation <= 1e-12 && max_compl <= 1e-12 && max_subst <= 1e-12,
        elapsed,
        &format!(
            "dilation {max_dilation:.3e}, complementary {max_compl:.3e}, substitution {max_subst:.3e}, bound 1e-12"
        ),
    );
}

fn degradability_grid(n: usize, samples: usize, seed: u64) -> (bool, String) {
    let mut boundary_ok = true;
    let mut witness_ok = true;
    let mut capacity_ok = true;
    let mut max_witness_residual = 0.0f64;
    let mut max_anti_coherent = f64::NEG_INFINITY;
    let thetas: Vec<f64> = (0..n)
        .map(|i| i as f64 * std::f64::consts::TAU / n as f64)
        .collect();

    for (i, &theta) in thetas.iter().enumerate() {
        for (j, &phi) in thetas.iter().enumerate() {
            let p = CanonicalParams::new(theta, phi, 1.0).unwrap();
            let verdict = p.classify().expect("classification must verify");
            let sign = ((2.0 * theta).cos() * (2.0 * phi).cos()).signum();
            let expected = if sign > 0.0 {
                DegradabilityKind::Degradable
            } else {
                DegradabilityKind::AntiDegradable
            };
            if verdict.kind != expected {
                boundary_ok = false;
            }
            match verdict.kind {
                DegradabilityKind::Degradable | DegradabilityKind::WeaklyDegradable => {
                    let (tx, px) = verdict.witness.unwrap();
                    let kn = p.dilation_kraus().unwrap();
                    let kt = p.weak_complementary_kraus().unwrap();
                    let kx = witness_channel_kraus(tx, px, 1.0).unwrap();
                    let residual = verify_degradation(&kn, &kt, &kx);
                    max_witness_residual = max_witness_residual.max(residual);
                    let (psd, _) = cp_check(&choi(&kx));
                    if residual >= 1e-9 || !psd {
                        witness_ok = false;
                    }
                }
                DegradabilityKind::AntiDegradable | DegradabilityKind::QZero => {
                    let kraus = p.dilation_kraus().unwrap();
                    let mut rng =
                        ChaCha8Rng::seed_from_u64(seed ^ ((i as u64) << 32 | j as u64));
                    let mut max_j = f64::NEG_INFINITY;
                    for _ in 0..samples {
                        let rho = random_density(&mut rng);
                        max_j = max_j.max(coherent_information(&kraus, &rho));
                    }
                    max_anti_coherent = max_anti_coherent.max(max_j);
                    if max_j > 1e-9 {
                        capacity_ok = false;
                    }
                }
                DegradabilityKind::Both => {
                    // measure-zero boundary; grid points avoid it
                    boundary_ok = false;
                }
            }
        }
    }
    (
        boundary_ok && witness_ok && capacity_ok,
        format!(
            "boundary={boundary_ok} witnesses={witness_ok} (max residual {max_witness_residual:.3e}) capacity={capacity_ok} (max sampled J {max_anti_coherent:.3e})"
        ),
    )
}

/// Criterion 8 (smoke): the 20×20 grid must complete in under 20 s.
#[test]
fn acceptance_08a_degradability_smoke_grid() {
    let start = Instant::now();
    let (ok, detail) = degradability_grid(20, 200, 0x5eed);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        8,
        "degradability smoke grid (20×20, q=1)",
        ok && elapsed < 20.0,
        elapsed,
        &format!("{detail}, runtime bound 20s"),
    );
}

/// Criterion 8 (full): the 100×100 grid must complete in under 10 min;
/// classifier boundary coincides exactly with sign(cos2θ·cos2φ), every
/// witness verifies with a CPT intermediate map, every anti-degradable
/// point has sampled coherent information ≤ 1e-9 over 200 states.
#[test]
fn acceptance_08b_degradability_full_grid() {
    let start = Instant::now();
    let (ok, detail) = degradability_grid(100, 200, 0xfeed);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        8,
        "degradability full grid (100×100, q=1)",
        ok && elapsed < 600.0,
        elapsed,
        &format!("{detail}, runtime bound 600s"),
    );
}

/// Criterion 9: weak complementaries of mixed-environment channels are
/// never Gaussian for q ∈ {0.3, 0.5, 0.7} and always Gaussian for
/// q ∈ {0, 1}, over 50 random (θ, φ).
#[test]
fn acceptance_09_mixed_environment_non_gaussianity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let mut ok = true;
    for _ in 0..50 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        for &q in &[0.3, 0.5, 0.7] {
            let p = CanonicalParams::new(theta, phi, q).unwrap();
            if detect_gaussian(&p.complementary_green()).is_some() {
                ok = false;
            }
        }
        for &q in &[0.0, 1.0] {
            let p = CanonicalParams::new(theta, phi, q).unwrap();
            if detect_gaussian(&p.complementary_green()).is_none() {
                ok = false;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        9,
        "mixed-environment weak complementaries are non-Gaussian",
        ok,
        elapsed,
        "50 random (θ,φ) × q ∈ {0.3,0.5,0.7} empty, q ∈ {0,1} detected",
    );
}

/// Criterion 10: coherent information of the flagged mixture decomposes
/// as J(N′,ρ) = qJ(N₀,ρ) + (1−q)J(N₁,ρ), error < 1e-10, on 100 random
/// (ρ, q, θ, φ).
#[test]
fn acceptance_10_mixture_coherent_information() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut max_err = 0.0f64;
    for _ in 0..100 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let q: f64 = rng.gen_range(0.05..0.95);
        let rho = random_density(&mut rng);

        let k0 = CanonicalParams::new(theta, phi, 1.0)
            .unwrap()
            .dilation_kraus()
            .unwrap();
        // N₁(ρ) = σ_x N₀(σ_x ρ σ_x) σ_x: Kraus {σ_x M σ_x}
        let sx = mat::sigma_x();
        let k1 = KrausSet::new(k0.ops().iter().map(|m| sx * m * sx).collect()).unwrap();

        // flagged channel N′(ρ) = qN₀(ρ)⊗|0⟩⟨0| + (1−q)N₁(ρ)⊗|1⟩⟨1|,
        // output indices 2·s + flag
        let mut flagged: Vec<nalgebra::DMatrix<Complex64>> = Vec::new();
        for (weight, ops, flag) in [(q, &k0, 0usize), (1.0 - q, &k1, 1usize)] {
            for m in ops.ops() {
                let mut k = nalgebra::DMatrix::<Complex64>::zeros(4, 2);
                for s in 0..2 {
                    for t in 0..2 {
                        k[(2 * s + flag, t)] = m[(s, t)] * weight.sqrt();
                    }
                }
                flagged.push(k);
            }
        }

        let j_flagged = coherent_information_general(&flagged, &rho);
        let j0 = coherent_information(&k0, &rho);
        let j1 = coherent_information(&k1, &rho);
        max_err = max_err.max((j_flagged - (q * j0 + (1.0 - q) * j1)).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        10,
        "flagged-mixture coherent-information decomposition",
        max_err < 1e-10,
        elapsed,
        &format!("max decomposition error {max_err:.3e}, bound 1e-10"),
    );
}
