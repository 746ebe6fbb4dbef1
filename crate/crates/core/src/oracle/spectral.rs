//! Spectral data of the twisted transfer matrix and the exact
//! finite-size counting statistics it implies.

use crate::error::{Error, Result};
use crate::num::{
    c, eig_biorthogonal, eig_pair_at, eigenvalues, order_key, poly_from_samples, CMatrix, CPoly,
    C64,
};
use crate::oracle::{counting_operator, hamiltonian_logderiv, transfer_matrix, ChainConfig};
use crate::twist::{CountingSpec, Twist};

/// Probe point for the joint diagonalization; generic with respect to the
/// real interpolation nodes.
const PROBE: C64 = c(0.4337, 0.6181);

/// One simultaneous eigenstate of t_K(u): its energy, the degree-L
/// eigenvalue polynomial of c^L t_K(u), and the bi-normalized vectors.
#[derive(Debug, Clone)]
pub struct OracleLine {
    pub energy: C64,
    /// eigenvalue of c^L · t_K(u) as a polynomial in u
    pub lambda_poly: CPoly,
    pub right: Vec<C64>,
    pub left: Vec<C64>,
}

impl OracleLine {
    pub fn lambda_at(&self, u: C64, cfg: &ChainConfig) -> C64 {
        self.lambda_poly.eval(u) / cfg.c.powu(cfg.len as u32)
    }
}

#[derive(Debug, Clone)]
pub struct TransferEigenData {
    pub cfg: ChainConfig,
    pub lines: Vec<OracleLine>,
}

fn row_times_mat_times_col(row: &[C64], m: &CMatrix, col: &[C64]) -> C64 {
    let n = row.len();
    let mut acc = c(0.0, 0.0);
    for i in 0..n {
        let mut s = c(0.0, 0.0);
        for j in 0..n {
            s += m[(i, j)] * col[j];
        }
        acc += row[i] * s;
    }
    acc
}

/// Diagonalize t_K at a generic probe point and extract the full family of
/// transfer eigenvalue polynomials in the shared eigenbasis, sorted by
/// energy. Requires the probe spectrum to be simple.
pub fn transfer_eigen_data(k: &Twist, cfg: &ChainConfig) -> Result<TransferEigenData> {
    k.require_generic()?;
    let n = cfg.dim();
    let t_probe = transfer_matrix(k, PROBE, cfg)?;
    let es = eig_biorthogonal(&t_probe.mat)?;
    let scale = t_probe.mat.norm_max().max(1.0);
    if es.min_gap < 1e-9 * scale {
        return Err(Error::NonGenericSpectrum(format!(
            "transfer spectrum at probe has gap {:.3e}",
            es.min_gap
        )));
    }

    let h = hamiltonian_logderiv(k, cfg)?;

    // energies: E_i = l_i · H · r_i
    let mut energies = Vec::with_capacity(n);
    for i in 0..n {
        let l: Vec<C64> = (0..n).map(|j| es.left_vectors[(i, j)]).collect();
        let r: Vec<C64> = (0..n).map(|j| es.right_vectors[(j, i)]).collect();
        energies.push(row_times_mat_times_col(&l, &h.mat, &r));
    }

    // eigenvalue samples at the L+1 interpolation nodes
    let nodes = cfg.nodes();
    let cl = cfg.c.powu(cfg.len as u32);
    let mut samples = vec![Vec::with_capacity(nodes.len()); n];
    for &node in &nodes {
        let t = transfer_matrix(k, node, cfg)?;
        let m = es.left_vectors.matmul(&t.mat).matmul(&es.right_vectors);
        let mut diag_max: f64 = 0.0;
        let mut off_max: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)].norm();
                if i == j {
                    diag_max = diag_max.max(v);
                } else {
                    off_max = off_max.max(v);
                }
            }
        }
        if off_max > 1e-6 * diag_max.max(1.0) {
            return Err(Error::NonGenericSpectrum(format!(
                "transfer family not simultaneously diagonal at node {node}: off-diag {off_max:.3e}"
            )));
        }
        for (i, s) in samples.iter_mut().enumerate() {
            s.push(m[(i, i)] * cl);
        }
    }

    let mut lines: Vec<OracleLine> = Vec::with_capacity(n);
    for i in 0..n {
        let lambda_poly = poly_from_samples(&nodes, &samples[i])?;
        let right: Vec<C64> = (0..n).map(|j| es.right_vectors[(j, i)]).collect();
        let left: Vec<C64> = (0..n).map(|j| es.left_vectors[(i, j)]).collect();
        lines.push(OracleLine { energy: energies[i], lambda_poly, right, left });
    }
    lines.sort_by(|a, b| {
        order_key(a.energy)
            .cmp(&order_key(b.energy))
            .then_with(|| order_key(a.lambda_poly.eval(PROBE)).cmp(&order_key(b.lambda_poly.eval(PROBE))))
    });
    Ok(TransferEigenData { cfg: *cfg, lines })
}

/// ⟨exp Q⟩ in the `state_index`-th H_K eigenstate (energies sorted by real
/// part, then imaginary part), computed by inverse iteration so a selected
/// simple eigenvalue works even when other levels are degenerate.
pub fn fcs_direct(
    k: &Twist,
    spec: &CountingSpec,
    state_index: usize,
    cfg: &ChainConfig,
) -> Result<C64> {
    let h = hamiltonian_logderiv(k, cfg)?;
    let evs = eigenvalues(&h.mat)?;
    if state_index >= evs.len() {
        return Err(Error::Invalid(format!("state index {state_index} out of range")));
    }
    let lam = evs[state_index];
    let scale = h.mat.norm_max().max(1.0);
    let gap = evs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != state_index)
        .map(|(_, &e)| (e - lam).norm())
        .fold(f64::INFINITY, f64::min);
    if gap < 1e-9 * scale {
        return Err(Error::NonGenericSpectrum(format!(
            "selected energy level is degenerate (gap {gap:.3e})"
        )));
    }
    let (right, left) = eig_pair_at(&h.mat, lam)?;
    let expq = counting_operator(spec, cfg)?;
    let num = row_times_mat_times_col(&left, &expq.mat, &right);
    let den: C64 = left.iter().zip(&right).map(|(&a, &b)| a * b).sum();
    if den.norm() < 1e-12 {
        return Err(Error::NonGenericSpectrum("left/right pairing vanished".into()));
    }
    Ok(num / den)
}
