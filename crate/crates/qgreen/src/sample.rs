//! Deterministic random sampling of states and channels for tests,
//! cross-checks and sweeps. Everything is driven by a caller-supplied
//! RNG so results are reproducible from a seed.

use num_complex::Complex64;
use rand::Rng;

use crate::hybrid::{mat, Mat2};
use crate::oracle::KrausSet;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random complex matrix with entries uniform in the unit square.
pub fn random_matrix2(rng: &mut impl Rng) -> Mat2 {
    Mat2::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Random Hermitian matrix.
pub fn random_hermitian2(rng: &mut impl Rng) -> Mat2 {
    let m = random_matrix2(rng);
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Random density matrix, uniform over the Bloch ball.
pub fn random_density(rng: &mut impl Rng) -> Mat2 {
    let dir: [f64; 3] = loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-12 && n2 <= 1.0 {
            break v;
        }
    };
    bloch_state(dir[0], dir[1], dir[2])
}

/// State at a Bloch vector (no validity check beyond construction).
pub fn bloch_state(x: f64, y: f64, z: f64) -> Mat2 {
    mat::scale(
        &(mat::identity()
            + mat::scale(&mat::sigma_x(), c(x, 0.))
            + mat::scale(&mat::sigma_y(), c(y, 0.))
            + mat::scale(&mat::sigma_z(), c(z, 0.))),
        c(0.5, 0.),
    )
}

/// Random CPT qubit channel with `kraus_count` Kraus operators, built by
/// normalizing Ginibre samples: M_k = G_k S^{-1/2} with S = Σ G_k†G_k.
pub fn random_channel(rng: &mut impl Rng, kraus_count: usize) -> KrausSet {
    loop {
        let gs: Vec<Mat2> = (0..kraus_count).map(|_| random_matrix2(rng)).collect();
        let s: Mat2 = gs.iter().map(|g| g.adjoint() * g).sum();
        let se = s.symmetric_eigen();
        if se.eigenvalues.iter().any(|&l| l < 1e-6) {
            continue;
        }
        let mut inv_sqrt = Mat2::zeros();
        for k in 0..2 {
            let col = se.eigenvectors.column(k);
            let w = c(1.0 / se.eigenvalues[k].sqrt(), 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    inv_sqrt[(i, j)] += col[i] * col[j].conj() * w;
                }
            }
        }
        let ops = gs.iter().map(|g| g * inv_sqrt).collect();
        return KrausSet::new(ops).expect("normalized Ginibre set is complete");
    }
}

/// Random unitary 4×4 via Gram-Schmidt on Ginibre columns.
pub fn random_unitary4(rng: &mut impl Rng) -> nalgebra::Matrix4<Complex64> {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..4)
            .map(|_| {
                (0..4)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        let mut ok = true;
        for i in 0..4 {
            for j in 0..i {
                let dot: Complex64 = cols[j]
                    .iter()
                    .zip(cols[i].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let proj: Vec<Complex64> = cols[j].iter().map(|a| a * dot).collect();
                for (x, p) in cols[i].iter_mut().zip(proj) {
                    *x -= p;
                }
            }
            let n: f64 = cols[i].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if n < 1e-6 {
                ok = false;
                break;
            }
            for x in cols[i].iter_mut() {
                *x /= n;
            }
        }
        if ok {
            return nalgebra::Matrix4::from_fn(|r, col| cols[col][r]);
        }
    }
}
