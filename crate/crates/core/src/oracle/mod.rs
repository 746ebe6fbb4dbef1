//! Exact 2^L-dimensional realization of every operator in play: R-matrix,
//! monodromy blocks, (modified) transfer matrices, Hamiltonians, shift and
//! counting operators. Serves as the brute-force oracle the Bethe-ansatz
//! pipeline is validated against.

mod spectral;
#[cfg(test)]
mod tests;

pub use spectral::{fcs_direct, transfer_eigen_data, OracleLine, TransferEigenData};

use crate::error::{Error, Result};
use crate::num::{
    c, kron, lagrange_diff_weights, mat_exp_pauli, pauli_x, pauli_y, pauli_z, CMatrix, C64,
};
use crate::twist::{CountingSpec, SideParams, Twist};

/// Chain size and R-matrix scale. The Bethe-side eigenvalue expression is
/// sign-consistent with the transfer-matrix leading behavior only for even L,
/// so the validated pipeline keeps L even; the fields stay public for
/// small calibration experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    pub len: usize,
    pub c: C64,
}

impl ChainConfig {
    pub fn new(len: usize, c_scale: C64) -> Result<ChainConfig> {
        if len < 2 || len > 10 {
            return Err(Error::Invalid(format!("chain length {len} outside 2..=10")));
        }
        if len % 2 != 0 {
            return Err(Error::Invalid(format!("chain length {len} must be even")));
        }
        if c_scale.norm() == 0.0 {
            return Err(Error::Invalid("R-matrix scale c must be nonzero".into()));
        }
        Ok(ChainConfig { len, c: c_scale })
    }

    pub fn dim(&self) -> usize {
        1 << self.len
    }

    /// Vacuum eigenvalue of A: a(u) = ((u+c)/c)^L.
    pub fn a_fn(&self, u: C64) -> C64 {
        ((u + self.c) / self.c).powu(self.len as u32)
    }

    /// Vacuum eigenvalue of D: d(u) = (u/c)^L.
    pub fn d_fn(&self, u: C64) -> C64 {
        (u / self.c).powu(self.len as u32)
    }

    /// Interpolation nodes u_k = k - L/2 for degree-L matrix polynomials.
    pub fn nodes(&self) -> Vec<C64> {
        (0..=self.len)
            .map(|k| c(k as f64 - self.len as f64 / 2.0, 0.0))
            .collect()
    }
}

/// A full-space operator together with the chain it belongs to.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub mat: CMatrix,
    pub cfg: ChainConfig,
}

impl OperatorMatrix {
    fn new(mat: CMatrix, cfg: &ChainConfig) -> OperatorMatrix {
        debug_assert_eq!(mat.rows(), cfg.dim());
        OperatorMatrix { mat, cfg: *cfg }
    }
}

/// The four monodromy blocks in the auxiliary space.
#[derive(Debug, Clone)]
pub struct Monodromy {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c_op: CMatrix,
    pub d: CMatrix,
}

/// Which monodromy block to pick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    A,
    B,
    C,
    D,
}

/// The rational R-matrix (u/c)·I + P on a pair of spin-1/2 spaces.
pub fn r_matrix(u: C64, cfg: &ChainConfig) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    let x = u / cfg.c;
    // permutation operator
    for i in 0..2 {
        for j in 0..2 {
            m[(i * 2 + j, j * 2 + i)] += c(1.0, 0.0);
            m[(i * 2 + j, i * 2 + j)] += x;
        }
    }
    m
}

/// The 2x2 unit matrix E^{kl} (1-based in the usual notation, 0-based here).
fn unit2(k: usize, l: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(k, l)] = c(1.0, 0.0);
    m
}

/// Sequentially contract R_{a1}(u)···R_{aL}(u) over the auxiliary space.
pub fn monodromy(u: C64, cfg: &ChainConfig) -> Result<Monodromy> {
    let x = u / cfg.c;
    // site factor: aux block (i,k) = x·δ_ik·I2 + E^{ki}
    let site: Vec<Vec<CMatrix>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|k| {
                    let mut m = unit2(k, i);
                    if i == k {
                        m = m.add(&CMatrix::identity(2).scale(x));
                    }
                    m
                })
                .collect()
        })
        .collect();

    let mut blocks: Vec<Vec<CMatrix>> = site.clone();
    for _ in 1..cfg.len {
        let mut next: Vec<Vec<CMatrix>> = Vec::with_capacity(2);
        for i in 0..2 {
            let mut row = Vec::with_capacity(2);
            for l in 0..2 {
                let mut acc: Option<CMatrix> = None;
                for (k, blk) in blocks[i].iter().enumerate() {
                    let term = kron(blk, &site[k][l])?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term),
                    });
                }
                row.push(acc.unwrap());
            }
            next.push(row);
        }
        blocks = next;
    }
    let mut it = blocks.into_iter();
    let mut top = it.next().unwrap().into_iter();
    let mut bot = it.next().unwrap().into_iter();
    Ok(Monodromy {
        a: top.next().unwrap(),
        b: top.next().unwrap(),
        c_op: bot.next().unwrap(),
        d: bot.next().unwrap(),
    })
}

pub fn monodromy_entry(which: Block, u: C64, cfg: &ChainConfig) -> Result<OperatorMatrix> {
    let m = monodromy(u, cfg)?;
    let mat = match which {
        Block::A => m.a,
        Block::B => m.b,
        Block::C => m.c_op,
        Block::D => m.d,
    };
    Ok(OperatorMatrix::new(mat, cfg))
}

/// t_K(u) = tr_a(K_a T_a(u)) = κ1 A + κ+ C + κ− B + κ2 D.
pub fn transfer_matrix(k: &Twist, u: C64, cfg: &ChainConfig) -> Result<OperatorMatrix> {
    let m = monodromy(u, cfg)?;
    let mat = m
        .a
        .scale(k.k1)
        .add(&m.c_op.scale(k.kp))
        .add(&m.b.scale(k.km))
        .add(&m.d.scale(k.k2));
    Ok(OperatorMatrix::new(mat, cfg))
}

/// The modified monodromy T̄ = A·T·B for the side's BDA decomposition.
pub fn modified_monodromy(u: C64, side: &SideParams, cfg: &ChainConfig) -> Result<Monodromy> {
    side.twist.require_generic()?;
    let scale = 1.0 + side.twist.matrix().norm_max().powi(2) + side.rho1.norm() * side.rho2.norm();
    if side.constraint_residual() > 1e-12 * scale {
        return Err(Error::Invalid(
            "rho parameters do not satisfy the twist constraint".into(),
        ));
    }
    let (bm, _, am) = crate::twist::decompose_bda(&side.twist, side.rho1, side.rho2)?;
    let t = monodromy(u, cfg)?;
    let blk = |i: usize, k: usize| -> &CMatrix {
        match (i, k) {
            (0, 0) => &t.a,
            (0, 1) => &t.b,
            (1, 0) => &t.c_op,
            _ => &t.d,
        }
    };
    let entry = |i: usize, l: usize| -> CMatrix {
        let mut acc = CMatrix::zeros(cfg.dim(), cfg.dim());
        for k in 0..2 {
            for m in 0..2 {
                let coef = am[(i, k)] * bm[(m, l)];
                if coef.norm() == 0.0 {
                    continue;
                }
                acc = acc.add(&blk(k, m).scale(coef));
            }
        }
        acc
    };
    Ok(Monodromy { a: entry(0, 0), b: entry(0, 1), c_op: entry(1, 0), d: entry(1, 1) })
}

pub fn modified_entry(
    which: Block,
    u: C64,
    side: &SideParams,
    cfg: &ChainConfig,
) -> Result<OperatorMatrix> {
    let m = modified_monodromy(u, side, cfg)?;
    let mat = match which {
        Block::A => m.a,
        Block::B => m.b,
        Block::C => m.c_op,
        Block::D => m.d,
    };
    Ok(OperatorMatrix::new(mat, cfg))
}

/// Product B̄(u_1)···B̄(u_n) (the operators commute; order kept for
/// determinism).
pub fn modified_b_string(us: &[C64], side: &SideParams, cfg: &ChainConfig) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(cfg.dim());
    for &u in us {
        acc = acc.matmul(&modified_entry(Block::B, u, side, cfg)?.mat);
    }
    Ok(acc)
}

/// Product C̄(u_1)···C̄(u_n).
pub fn modified_c_string(us: &[C64], side: &SideParams, cfg: &ChainConfig) -> Result<CMatrix> {
    let mut acc = CMatrix::identity(cfg.dim());
    for &u in us {
        acc = acc.matmul(&modified_entry(Block::C, u, side, cfg)?.mat);
    }
    Ok(acc)
}

/// Vacuum expectation ⟨0|X|0⟩; the pseudo vacuum is the all-up basis state.
pub fn vacuum_expectation(x: &CMatrix) -> C64 {
    x[(0, 0)]
}

/// Cyclic shift operator U with X_i U = U X_{i+1}.
pub fn shift_operator(cfg: &ChainConfig) -> OperatorMatrix {
    let n = cfg.dim();
    let len = cfg.len;
    let mut m = CMatrix::zeros(n, n);
    for col in 0..n {
        // site 1 is the most significant bit; U|s1..sL> = |s2..sL s1>
        let msb = col >> (len - 1);
        let row = ((col << 1) & (n - 1)) | msb;
        m[(row, col)] = c(1.0, 0.0);
    }
    OperatorMatrix::new(m, cfg)
}

/// op acting on one site (0-based), identity elsewhere.
pub fn site_operator(op2: &CMatrix, site: usize, cfg: &ChainConfig) -> Result<CMatrix> {
    assert!(site < cfg.len);
    let left = CMatrix::identity(1 << site);
    let right = CMatrix::identity(1 << (cfg.len - site - 1));
    kron(&kron(&left, op2)?, &right)
}

/// exp(Q^(ℓ)(β̄)) built site by site with the closed-form 2x2 exponential.
pub fn counting_operator(spec: &CountingSpec, cfg: &ChainConfig) -> Result<OperatorMatrix> {
    if spec.ell > cfg.len {
        return Err(Error::Invalid(format!(
            "support length {} exceeds chain length {}",
            spec.ell, cfg.len
        )));
    }
    let site = mat_exp_pauli(spec.bx, spec.by, spec.bz, 1.0);
    let mut acc = CMatrix::identity(1);
    for _ in 0..spec.ell {
        acc = kron(&acc, &site)?;
    }
    let rest = CMatrix::identity(1 << (cfg.len - spec.ell));
    Ok(OperatorMatrix::new(kron(&acc, &rest)?, cfg))
}

/// H_K = c·t_K'(0)·t_K(0)^{-1} + (L/2)·I, with the derivative taken by exact
/// degree-L interpolation of the transfer matrix.
pub fn hamiltonian_logderiv(k: &Twist, cfg: &ChainConfig) -> Result<OperatorMatrix> {
    let nodes = cfg.nodes();
    let weights = lagrange_diff_weights(&nodes, c(0.0, 0.0));
    let mut deriv = CMatrix::zeros(cfg.dim(), cfg.dim());
    for (&node, &w) in nodes.iter().zip(&weights) {
        let t = transfer_matrix(k, node, cfg)?;
        deriv = deriv.add(&t.mat.scale(w));
    }
    let t0 = transfer_matrix(k, c(0.0, 0.0), cfg)?;
    let t0_inv = crate::num::inverse(&t0.mat)
        .map_err(|_| Error::Singular("t_K(0) singular (twist not invertible)".into()))?;
    let h = deriv
        .matmul(&t0_inv)
        .scale(cfg.c)
        .shift_diag(c(cfg.len as f64 / 2.0, 0.0));
    Ok(OperatorMatrix::new(h, cfg))
}

/// The 3x3 boundary map sending σ^α_{L+1} to combinations of σ^β_1.
pub fn boundary_map(k: &Twist) -> Result<CMatrix> {
    let g = k.gamma();
    if g.norm() == 0.0 {
        return Err(Error::NonGenericTwist("gamma = 0: boundary map undefined".into()));
    }
    let (k1, k2, kp, km) = (k.k1, k.k2, k.kp, k.km);
    let i = c(0.0, 1.0);
    let two_g = g * 2.0;
    Ok(CMatrix::from_rows(&[
        vec![
            (k1 * k1 + k2 * k2 - kp * kp - km * km) / two_g,
            (k1 * k1 - k2 * k2 + kp * kp - km * km) / (two_g * i),
            (k2 * km - k1 * kp) / g,
        ],
        vec![
            (k2 * k2 - k1 * k1 + kp * kp - km * km) / (two_g * i),
            (k1 * k1 + k2 * k2 + kp * kp + km * km) / two_g,
            (k2 * km + k1 * kp) / (i * g),
        ],
        vec![
            (k2 * kp - k1 * km) / g,
            i * (k1 * km + k2 * kp) / g,
            (k1 * k2 + kp * km) / g,
        ],
    ]))
}

/// J Σ_j σ_j·σ_{j+1} with the twisted boundary image at the seam; J = 1.
pub fn hamiltonian_boundary(k: &Twist, cfg: &ChainConfig) -> Result<OperatorMatrix> {
    let map = boundary_map(k)?;
    let paulis = [pauli_x(), pauli_y(), pauli_z()];
    let n = cfg.dim();
    let mut h = CMatrix::zeros(n, n);
    for j in 0..cfg.len - 1 {
        for p in &paulis {
            let left = site_operator(p, j, cfg)?;
            let right = site_operator(p, j + 1, cfg)?;
            h = h.add(&left.matmul(&right));
        }
    }
    // seam: sigma^alpha_L * sigma^alpha_{L+1}, the latter mapped back to site 1
    for (alpha, p) in paulis.iter().enumerate() {
        let left = site_operator(p, cfg.len - 1, cfg)?;
        let mut image = CMatrix::zeros(n, n);
        for (beta, q) in paulis.iter().enumerate() {
            let coef = map[(alpha, beta)];
            if coef.norm() == 0.0 {
                continue;
            }
            image = image.add(&site_operator(q, 0, cfg)?.scale(coef));
        }
        h = h.add(&left.matmul(&image));
    }
    Ok(OperatorMatrix::new(h, cfg))
}
