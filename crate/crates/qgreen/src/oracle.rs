//! Independent dense-matrix ground truth for every Grassmann-side
//! identity: Kraus/Choi/affine conversions, channel application and
//! composition, dilations and weak complementaries, CP tests, and
//! coherent information.
//!
//! Joint two-qubit indices are system-major: |j⟩_S ⊗ |k⟩_E ↦ 2j + k.
//! Choi matrices use the trace-2 convention (unnormalized maximally
//! entangled input, index 2·in + out). Entropies are base 2.

use nalgebra::{DMatrix, Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hybrid::{mat, Mat2};

pub type Mat4 = Matrix4<Complex64>;

/// Completeness tolerance for Kraus sets.
pub const KRAUS_TOL: f64 = 1e-10;

/// PSD threshold for Choi eigenvalues.
pub const CP_EIG_TOL: f64 = -1e-10;

/// Eigenvalues below this are treated as exact zeros in entropy sums.
pub const ENTROPY_EIG_TOL: f64 = 1e-14;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A validated Kraus representation {M_k} of a qubit channel,
/// Σ M_k† M_k = 𝟙 within `KRAUS_TOL`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    ops: Vec<Mat2>,
}

impl KrausSet {
    pub fn new(ops: Vec<Mat2>) -> Result<Self> {
        let sum: Mat2 = ops.iter().map(|m| m.adjoint() * m).sum();
        let deviation = mat::max_abs_diff(&sum, &mat::identity());
        if deviation > KRAUS_TOL {
            return Err(Error::IncompleteKraus { deviation });
        }
        Ok(Self { ops })
    }

    pub fn identity() -> Self {
        Self {
            ops: vec![mat::identity()],
        }
    }

    pub fn ops(&self) -> &[Mat2] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// The channel's image on half an unnormalized maximally entangled
/// state; Hermitian within 1e-12, trace 2 for CPT channels.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    m: Mat4,
}

impl ChoiMatrix {
    pub fn new(m: Mat4) -> Result<Self> {
        let asym = mat4_max_abs(&(m - m.adjoint()));
        if asym > 1e-12 {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }
}

fn mat4_max_abs(m: &Mat4) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// N(ρ) = Σ_k M_k ρ M_k†.
pub fn apply_channel(kraus: &KrausSet, rho: &Mat2) -> Mat2 {
    kraus.ops.iter().map(|m| m * rho * m.adjoint()).sum()
}

/// Choi matrix C = Σ_ij |i⟩⟨j| ⊗ N(|i⟩⟨j|), indices 2·in + out.
pub fn choi(kraus: &KrausSet) -> ChoiMatrix {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let block = apply_channel(kraus, &mat::ketbra(i, j));
            for a in 0..2 {
                for b in 0..2 {
                    m[(2 * i + a, 2 * j + b)] = block[(a, b)];
                }
            }
        }
    }
    // Kraus-built Choi matrices are Hermitian by construction.
    ChoiMatrix::new(m).expect("Choi of a Kraus set is Hermitian")
}

/// Eigendecomposition of a Hermitian 4×4 matrix, eigenvalues sorted
/// descending, eigenvector phases fixed to the nonnegative-amplitude
/// convention for determinism.
fn hermitian_eig4(m: &Mat4) -> (Vector4<f64>, Mat4) {
    let se = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let mut vals = Vector4::zeros();
    let mut vecs = Mat4::zeros();
    for (slot, &idx) in order.iter().enumerate() {
        vals[slot] = se.eigenvalues[idx];
        let col = se.eigenvectors.column(idx);
        let phase = dominant_phase(col.iter());
        for r in 0..4 {
            vecs[(r, slot)] = col[r] * phase.conj();
        }
    }
    (vals, vecs)
}

/// Phase of the largest-magnitude component; multiplying by its
/// conjugate leaves that component real and nonnegative.
fn dominant_phase<'a, I: Iterator<Item = &'a Complex64>>(iter: I) -> Complex64 {
    let mut best = c(1., 0.);
    let mut best_norm = 0.0;
    for x in iter {
        if x.norm() > best_norm + 1e-14 {
            best_norm = x.norm();
            best = x / x.norm();
        }
    }
    if best_norm == 0.0 {
        c(1., 0.)
    } else {
        best
    }
}

/// Kraus operators from a Choi matrix via eigendecomposition;
/// eigenvalues below 1e-12 are discarded, negative eigenvalues beyond
/// the PSD threshold are an error.
pub fn kraus_from_choi(choi: &ChoiMatrix) -> Result<KrausSet> {
    let (vals, vecs) = hermitian_eig4(&choi.m);
    let min_eigenvalue = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < CP_EIG_TOL {
        return Err(Error::NotCompletelyPositive { min_eigenvalue });
    }
    let mut ops = Vec::new();
    for k in 0..4 {
        if vals[k] <= 1e-12 {
            continue;
        }
        let s = vals[k].sqrt();
        let mut m = Mat2::zeros();
        for input in 0..2 {
            for output in 0..2 {
                m[(output, input)] = vecs[(2 * input + output, k)] * s;
            }
        }
        ops.push(m);
    }
    KrausSet::new(ops)
}

/// Affine (t, T) description of a qubit channel on the Bloch ball:
/// r ↦ t + T r.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChannelData {
    pub t: Vector3<f64>,
    pub big_t: Matrix3<f64>,
}

impl AffineChannelData {
    pub fn new(t: Vector3<f64>, big_t: Matrix3<f64>) -> Self {
        Self { t, big_t }
    }

    pub fn diagonal(lambdas: [f64; 3], t: [f64; 3]) -> Self {
        Self {
            t: Vector3::from_row_slice(&t),
            big_t: Matrix3::from_diagonal(&Vector3::from_row_slice(&lambdas)),
        }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.off_diagonal_magnitude() <= tol
    }

    pub fn off_diagonal_magnitude(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    max = max.max(self.big_t[(i, j)].abs());
                }
            }
        }
        max
    }

    pub fn lambdas(&self) -> [f64; 3] {
        [self.big_t[(0, 0)], self.big_t[(1, 1)], self.big_t[(2, 2)]]
    }
}

fn pauli(i: usize) -> Mat2 {
    match i {
        0 => mat::sigma_x(),
        1 => mat::sigma_y(),
        2 => mat::sigma_z(),
        _ => unreachable!(),
    }
}

/// t_i = ½Tr[σ_i N(𝟙)], T_ij = ½Tr[σ_i N(σ_j)].
pub fn tt_from_kraus(kraus: &KrausSet) -> AffineChannelData {
    let n_id = apply_channel(kraus, &mat::identity());
    let mut t = Vector3::zeros();
    let mut big_t = Matrix3::zeros();
    for i in 0..3 {
        t[i] = 0.5 * (pauli(i) * n_id).trace().re;
        for j in 0..3 {
            let n_sig = apply_channel(kraus, &pauli(j));
            big_t[(i, j)] = 0.5 * (pauli(i) * n_sig).trace().re;
        }
    }
    AffineChannelData::new(t, big_t)
}

/// Linear action of the (t, T) map on an arbitrary 2×2 operator.
pub fn apply_tt(data: &AffineChannelData, x: &Mat2) -> Mat2 {
    // decompose X = x0·𝟙 + Σ x_j σ_j with x0 = Tr X / 2, x_j = Tr[σ_j X]/2
    let x0 = x.trace() * 0.5;
    let mut out = mat::scale(&mat::identity(), x0);
    for j in 0..3 {
        let xj = (pauli(j) * x).trace() * 0.5;
        // N(σ_j) = Σ_i T_ij σ_i, N(𝟙) = 𝟙 + t·σ
        for i in 0..3 {
            out += mat::scale(&pauli(i), xj * c(data.big_t[(i, j)], 0.0));
        }
    }
    for i in 0..3 {
        out += mat::scale(&pauli(i), x0 * c(data.t[i], 0.0));
    }
    out
}

/// Choi matrix of a (t, T) channel.
pub fn choi_from_tt(data: &AffineChannelData) -> ChoiMatrix {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let block = apply_tt(data, &mat::ketbra(i, j));
            for a in 0..2 {
                for b in 0..2 {
                    m[(2 * i + a, 2 * j + b)] = block[(a, b)];
                }
            }
        }
    }
    let sym = (m + m.adjoint()) * c(0.5, 0.0);
    ChoiMatrix::new(sym).expect("symmetrized")
}

/// Kraus set of a (t, T) channel; fails when the map is not CP.
pub fn kraus_from_tt(data: &AffineChannelData) -> Result<KrausSet> {
    kraus_from_choi(&choi_from_tt(data))
}

/// Kraus set of N₂ ∘ N₁ (first N₁, then N₂): all pairwise products.
pub fn compose_kraus(second: &KrausSet, first: &KrausSet) -> KrausSet {
    let ops = second
        .ops
        .iter()
        .flat_map(|m2| first.ops.iter().map(move |m1| m2 * m1))
        .collect();
    KrausSet::new(ops).expect("composition of complete sets is complete")
}

/// Smallest Choi eigenvalue and the PSD verdict at threshold `CP_EIG_TOL`.
pub fn cp_check(choi: &ChoiMatrix) -> (bool, f64) {
    let (vals, _) = hermitian_eig4(&choi.m);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    (min >= CP_EIG_TOL, min)
}

fn check_unitary4(u: &Mat4) -> Result<()> {
    let dev = mat4_max_abs(&(u.adjoint() * u - Mat4::identity()));
    if dev > 1e-10 {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

fn check_density2(rho: &Mat2) -> Result<()> {
    if mat::max_abs_diff(&rho.adjoint(), rho) > 1e-10 {
        return Err(Error::InvalidDensity("not Hermitian".into()));
    }
    if (rho.trace().re - 1.0).abs() > 1e-10 || rho.trace().im.abs() > 1e-10 {
        return Err(Error::InvalidDensity("trace is not 1".into()));
    }
    let se = rho.symmetric_eigen();
    if se.eigenvalues.iter().any(|&l| l < -1e-10) {
        return Err(Error::InvalidDensity("negative eigenvalue".into()));
    }
    Ok(())
}

/// Spectral decomposition of a 2×2 density matrix with deterministic
/// ordering and phases.
fn density_eig2(rho: &Mat2) -> Vec<(f64, [Complex64; 2])> {
    let se = rho.symmetric_eigen();
    let mut out: Vec<(f64, [Complex64; 2])> = (0..2)
        .map(|k| {
            let col = se.eigenvectors.column(k);
            let phase = dominant_phase(col.iter());
            (
                se.eigenvalues[k].max(0.0),
                [col[0] * phase.conj(), col[1] * phase.conj()],
            )
        })
        .collect();
    out.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    out
}

/// Kraus operators of the system-output channel ρ ↦ Tr_E[U(ρ⊗ρ_E)U†]
/// of a physical representation.
pub fn channel_from_dilation(u: &Mat4, rho_e: &Mat2) -> Result<KrausSet> {
    dilation_kraus(u, rho_e, false)
}

/// Kraus operators of the weakly complementary channel
/// Ñ(ρ) = Tr_S[U(ρ⊗ρ_E)U†]; reduces to the complementary channel when
/// ρ_E is pure.
pub fn weak_complementary(u: &Mat4, rho_e: &Mat2) -> Result<KrausSet> {
    dilation_kraus(u, rho_e, true)
}

fn dilation_kraus(u: &Mat4, rho_e: &Mat2, env_output: bool) -> Result<KrausSet> {
    check_unitary4(u)?;
    check_density2(rho_e)?;
    let mut ops = Vec::new();
    for (p, v) in density_eig2(rho_e) {
        if p <= 1e-12 {
            continue;
        }
        let w = p.sqrt();
        // W[(j,k), m] = Σ_i ⟨jk|U|mi⟩ v_i : U applied to 𝟙_S ⊗ |v⟩_E
        if env_output {
            // trace out S: for each system output j, a map m ↦ k
            for j in 0..2 {
                let mut f = Mat2::zeros();
                for k in 0..2 {
                    for m in 0..2 {
                        let mut amp = c(0., 0.);
                        for i in 0..2 {
                            amp += u[(2 * j + k, 2 * m + i)] * v[i];
                        }
                        f[(k, m)] = amp * w;
                    }
                }
                ops.push(f);
            }
        } else {
            // trace out E: for each environment output k, a map m ↦ j
            for k in 0..2 {
                let mut f = Mat2::zeros();
                for j in 0..2 {
                    for m in 0..2 {
                        let mut amp = c(0., 0.);
                        for i in 0..2 {
                            amp += u[(2 * j + k, 2 * m + i)] * v[i];
                        }
                        f[(j, m)] = amp * w;
                    }
                }
                ops.push(f);
            }
        }
    }
    KrausSet::new(ops)
}

/// Direct evaluation of Tr_E or Tr_S of U(ρ⊗ρ_E)U† for cross-checks.
pub fn dilation_output(u: &Mat4, rho: &Mat2, rho_e: &Mat2, env_output: bool) -> Mat2 {
    let joint = kron2(rho, rho_e);
    let evolved = u * joint * u.adjoint();
    if env_output {
        partial_trace_system(&evolved)
    } else {
        partial_trace_env(&evolved)
    }
}

/// Kronecker product with system-major indexing: (A⊗B)[(2j+k),(2m+i)] = A[j,m]·B[k,i].
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for j in 0..2 {
        for k in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    m[(2 * j + k, 2 * p + q)] = a[(j, p)] * b[(k, q)];
                }
            }
        }
    }
    m
}

pub fn partial_trace_env(m: &Mat4) -> Mat2 {
    Mat2::from_fn(|j, p| (0..2).map(|k| m[(2 * j + k, 2 * p + k)]).sum())
}

pub fn partial_trace_system(m: &Mat4) -> Mat2 {
    Mat2::from_fn(|k, q| (0..2).map(|j| m[(2 * j + k, 2 * j + q)]).sum())
}

/// Residual of the degradation identity T ∘ N = Ñ: the max entry
/// difference of (Kx∘Kn)(E) and Kt(E) over the matrix-unit basis.
pub fn verify_degradation(kn: &KrausSet, kt: &KrausSet, kx: &KrausSet) -> f64 {
    let composed = compose_kraus(kx, kn);
    let mut residual = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let e = mat::ketbra(i, j);
            let lhs = apply_channel(&composed, &e);
            let rhs = apply_channel(kt, &e);
            residual = residual.max(mat::max_abs_diff(&lhs, &rhs));
        }
    }
    residual
}

/// Von Neumann entropy in bits; eigenvalues below `ENTROPY_EIG_TOL`
/// count as exact zeros.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> f64 {
    let se = rho.clone().symmetric_eigen();
    se.eigenvalues
        .iter()
        .filter(|&&l| l > ENTROPY_EIG_TOL)
        .map(|&l| -l * l.log2())
        .sum()
}

fn dmatrix_from_mat2(m: &Mat2) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |i, j| m[(i, j)])
}

/// Coherent information J(N, ρ) = S(N(ρ)) − S((N⊗I)(|ψ_ρ⟩⟨ψ_ρ|)) in
/// bits, with |ψ_ρ⟩ a purification of ρ over a qubit reference.
pub fn coherent_information(kraus: &KrausSet, rho: &Mat2) -> f64 {
    let general: Vec<DMatrix<Complex64>> =
        kraus.ops.iter().map(dmatrix_from_mat2).collect();
    coherent_information_general(&general, rho)
}

/// Coherent information for channels with arbitrary output dimension,
/// given as a list of (d×2) Kraus matrices.
pub fn coherent_information_general(kraus: &[DMatrix<Complex64>], rho: &Mat2) -> f64 {
    let d = kraus[0].nrows();
    // purification |ψ⟩ = Σ √p_i v_i ⊗ e_i over a qubit reference, S-major
    let eig = density_eig2(rho);
    let mut psi = DMatrix::<Complex64>::zeros(4, 1);
    for (r, (p, v)) in eig.iter().enumerate() {
        let w = p.sqrt();
        for s in 0..2 {
            psi[(2 * s + r, 0)] += v[s] * w;
        }
    }
    // (M_k ⊗ I_R)|ψ⟩, output index d·...: (out, r) ↦ 2·out + r? out dim d:
    // joint index out*2 + r.
    let mut joint = DMatrix::<Complex64>::zeros(2 * d, 2 * d);
    for m in kraus {
        let mut phi = DMatrix::<Complex64>::zeros(2 * d, 1);
        for out in 0..d {
            for r in 0..2 {
                let mut amp = c(0., 0.);
                for s in 0..2 {
                    amp += m[(out, s)] * psi[(2 * s + r, 0)];
                }
                phi[(2 * out + r, 0)] = amp;
            }
        }
        joint += &phi * phi.adjoint();
    }
    let mut out_state = DMatrix::<Complex64>::zeros(d, d);
    for m in kraus {
        out_state += m * dmatrix_from_mat2(rho) * m.adjoint();
    }
    von_neumann_entropy(&out_state) - von_neumann_entropy(&joint)
}
