//! Twist-matrix algebra: the tilde twist, the BDA decomposition, and the
//! linked rho constraints shared by the two twists.

use crate::error::{Error, Result};
use crate::num::{c, mat_exp_pauli, pauli_combination, C64, CMatrix};
use serde::{Deserialize, Serialize};

/// 2x2 twist matrix [[k1, kp], [km, k2]].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Twist {
    pub k1: C64,
    pub k2: C64,
    pub kp: C64,
    pub km: C64,
}

impl Twist {
    pub fn new(k1: C64, k2: C64, kp: C64, km: C64) -> Twist {
        Twist { k1, k2, kp, km }
    }

    pub fn sigma_x() -> Twist {
        Twist::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0))
    }

    pub fn sigma_y() -> Twist {
        Twist::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0))
    }

    pub fn periodic() -> Twist {
        Twist::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
    }

    /// Determinant-like invariant gamma = k1 k2 - kp km.
    pub fn gamma(&self) -> C64 {
        self.k1 * self.k2 - self.kp * self.km
    }

    pub fn trace(&self) -> C64 {
        self.k1 + self.k2
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_rows(&[vec![self.k1, self.kp], vec![self.km, self.k2]])
    }

    pub fn from_matrix(m: &CMatrix) -> Twist {
        Twist::new(m[(0, 0)], m[(1, 1)], m[(0, 1)], m[(1, 0)])
    }

    /// Both off-diagonal entries nonzero, as the MABA construction requires.
    pub fn is_generic(&self) -> bool {
        self.kp.norm() > 0.0 && self.km.norm() > 0.0
    }

    pub fn require_generic(&self) -> Result<()> {
        if !self.is_generic() {
            return Err(Error::NonGenericTwist(
                "twist has a vanishing off-diagonal entry (kp or km = 0)".into(),
            ));
        }
        Ok(())
    }

    pub fn scale(&self, s: C64) -> Twist {
        Twist::new(self.k1 * s, self.k2 * s, self.kp * s, self.km * s)
    }
}

/// Counting field (bx, by, bz), support length ell, scalar r with
/// r² = bx² + by² + bz² on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingSpec {
    pub bx: C64,
    pub by: C64,
    pub bz: C64,
    pub ell: usize,
}

impl CountingSpec {
    pub fn new(bx: C64, by: C64, bz: C64, ell: usize) -> CountingSpec {
        CountingSpec { bx, by, bz, ell }
    }

    pub fn r(&self) -> C64 {
        crate::num::expq::counting_r(self.bx, self.by, self.bz)
    }

    pub fn is_zero_field(&self) -> bool {
        self.bx == c(0.0, 0.0) && self.by == c(0.0, 0.0) && self.bz == c(0.0, 0.0)
    }

    /// exp(sign·Q(β̄)) as a 2x2 matrix.
    pub fn site_exponential(&self, sign: f64) -> CMatrix {
        mat_exp_pauli(self.bx, self.by, self.bz, sign)
    }
}

/// One branch of the linked MABA parameters for a (K, K̃) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoData {
    pub rho1: C64,
    pub rho2: C64,
    pub rho1_tilde: C64,
    pub rho2_tilde: C64,
    pub mu: C64,
    pub mu_tilde: C64,
    pub branch_id: usize,
}

/// Which twist a side-dependent operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    K,
    KTilde,
}

/// The per-side parameters the Bethe/form-factor machinery consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideParams {
    pub twist: Twist,
    pub rho1: C64,
    pub rho2: C64,
    pub mu: C64,
}

impl SideParams {
    pub fn d1(&self) -> C64 {
        self.twist.k1 - self.rho1
    }

    pub fn d2(&self) -> C64 {
        self.twist.k2 - self.rho2
    }

    pub fn rho_sum(&self) -> C64 {
        self.rho1 + self.rho2
    }

    /// Residual of the quadratic constraint rho1 rho2 - (k2 rho1 + k1 rho2) + kp km.
    pub fn constraint_residual(&self) -> f64 {
        let t = &self.twist;
        (self.rho1 * self.rho2 - (t.k2 * self.rho1 + t.k1 * self.rho2) + t.kp * t.km).norm()
    }
}

impl RhoData {
    pub fn side(&self, which: Side, k: &Twist, k_tilde: &Twist) -> SideParams {
        match which {
            Side::K => SideParams { twist: *k, rho1: self.rho1, rho2: self.rho2, mu: self.mu },
            Side::KTilde => SideParams {
                twist: *k_tilde,
                rho1: self.rho1_tilde,
                rho2: self.rho2_tilde,
                mu: self.mu_tilde,
            },
        }
    }
}

/// K̃ = K·exp(−Q(β̄)) via the closed-form 2x2 exponential.
pub fn tilde_twist(k: &Twist, spec: &CountingSpec) -> Twist {
    let e = spec.site_exponential(-1.0);
    Twist::from_matrix(&k.matrix().matmul(&e))
}

/// The matrix K·Q(β̄) entering the explicit cosh/sinh form of the tilde twist.
pub fn q_tilde_matrix(k: &Twist, spec: &CountingSpec) -> CMatrix {
    k.matrix().matmul(&pauli_combination(spec.bx, spec.by, spec.bz))
}

fn mu_of(twist: &Twist, rho1: C64, rho2: C64) -> Option<C64> {
    let denom = c(1.0, 0.0) - rho1 * rho2 / (twist.kp * twist.km);
    if denom.norm() < 1e-12 {
        None
    } else {
        Some(c(1.0, 0.0) / denom)
    }
}

fn quadratic_roots(a: C64, b: C64, cc: C64) -> Vec<C64> {
    if a.norm() == 0.0 {
        if b.norm() == 0.0 {
            return vec![];
        }
        return vec![-cc / b];
    }
    let disc = (b * b - a * cc * 4.0).sqrt();
    // numerically stable pairing
    let q = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
    let q = q * -0.5;
    if q.norm() == 0.0 {
        vec![c(0.0, 0.0), c(0.0, 0.0)]
    } else {
        vec![q / a, cc / q]
    }
}

const CONSTRAINT_TOL: f64 = 1e-12;

fn assemble_branch(k: &Twist, kt: &Twist, rho1: C64, rho2: C64) -> Option<RhoData> {
    let s = kt.km / k.km;
    let rho1t = rho1 * s;
    let rho2t = rho2 * s;
    let mu = mu_of(k, rho1, rho2)?;
    let mu_tilde = mu_of(kt, rho1t, rho2t)?;
    let data = RhoData {
        rho1,
        rho2,
        rho1_tilde: rho1t,
        rho2_tilde: rho2t,
        mu,
        mu_tilde,
        branch_id: 0,
    };
    let scale = 1.0
        + [k.k1, k.k2, k.kp, k.km, rho1, rho2]
            .iter()
            .map(|z| z.norm_sqr())
            .fold(0.0, f64::max);
    let res_k = data.side(Side::K, k, kt).constraint_residual();
    let res_t = data.side(Side::KTilde, k, kt).constraint_residual();
    if res_k > CONSTRAINT_TOL * scale || res_t > CONSTRAINT_TOL * scale {
        return None;
    }
    Some(data)
}

/// Solve the two quadratic constraints together with the linking relations
/// rhõ_i = rho_i·(κ̃−/κ−). Returns every surviving branch, ordered by
/// (re, im) of rho1; branch_id follows that order.
pub fn solve_rho_link(k: &Twist, kt: &Twist) -> Result<Vec<RhoData>> {
    k.require_generic()?;
    kt.require_generic()?;
    let s = kt.km / k.km;

    // Substituting the linking relations into the tilde constraint and
    // eliminating rho1·rho2 via the K constraint leaves a linear relation
    // a·rho1 + b·rho2 + e = 0.
    let a = s * s * k.k2 - s * kt.k2;
    let b = s * s * k.k1 - s * kt.k1;
    let e = kt.kp * kt.km - s * s * k.kp * k.km;

    let mut candidates: Vec<(C64, C64)> = Vec::new();
    let tiny = 1e-13 * (1.0 + s.norm_sqr()) * (1.0 + k.matrix().norm_max().max(kt.matrix().norm_max()));
    if a.norm() <= tiny && b.norm() <= tiny {
        if e.norm() > tiny {
            return Err(Error::LinkingUnsolvable(
                "degenerate twist pair: linking relations reduce to a contradiction \
                 (try perturbing the counting field)"
                    .into(),
            ));
        }
        // Both constraints coincide (e.g. zero counting field). Calibration
        // choice: restrict to the symmetric line rho2 = rho1 and take the two
        // roots of the remaining quadratic.
        // rho1² - (k1 + k2) rho1 + kp km = 0
        for r in quadratic_roots(c(1.0, 0.0), -(k.k1 + k.k2), k.kp * k.km) {
            candidates.push((r, r));
        }
    } else if b.norm() <= tiny {
        // rho1 fixed by the linear relation, rho2 from the K constraint
        let rho1 = -e / a;
        let den = rho1 - k.k1;
        if den.norm() < 1e-13 {
            return Err(Error::LinkingUnsolvable("pole while back-substituting rho2".into()));
        }
        let rho2 = (k.k2 * rho1 - k.kp * k.km) / den;
        candidates.push((rho1, rho2));
    } else {
        // rho2 = -(a rho1 + e)/b into the K constraint gives a quadratic in rho1:
        // rho1·rho2 - k2 rho1 - k1 rho2 + kp km = 0
        // => -a/b rho1² + (-e/b - k2 + k1 a/b) rho1 + k1 e/b + kp km = 0
        let qa = -a / b;
        let qb = -e / b - k.k2 + k.k1 * a / b;
        let qc = k.k1 * e / b + k.kp * k.km;
        for rho1 in quadratic_roots(qa, qb, qc) {
            let rho2 = -(a * rho1 + e) / b;
            candidates.push((rho1, rho2));
        }
    }

    let mut out: Vec<RhoData> = candidates
        .into_iter()
        .filter_map(|(r1, r2)| assemble_branch(k, kt, r1, r2))
        .collect();
    if out.is_empty() {
        return Err(Error::LinkingUnsolvable(
            "no branch satisfies both constraints away from the mu pole".into(),
        ));
    }
    out.sort_by_key(|d| crate::num::eig::order_key(d.rho1));
    out.dedup_by(|x, y| (x.rho1 - y.rho1).norm() < 1e-12 && (x.rho2 - y.rho2).norm() < 1e-12);
    for (i, d) in out.iter_mut().enumerate() {
        d.branch_id = i;
    }
    Ok(out)
}

/// The MABA decomposition K = B·D·A. Returns (B, D, A).
pub fn decompose_bda(k: &Twist, rho1: C64, rho2: C64) -> Result<(CMatrix, CMatrix, CMatrix)> {
    k.require_generic()?;
    let mu = mu_of(k, rho1, rho2).ok_or_else(|| {
        Error::NonGenericTwist("mu undefined: rho1·rho2 = kp·km".into())
    })?;
    let sq = mu.sqrt();
    let a = CMatrix::from_rows(&[
        vec![sq, sq * rho2 / k.km],
        vec![sq * rho1 / k.kp, sq],
    ]);
    let b = CMatrix::from_rows(&[
        vec![sq, sq * rho1 / k.km],
        vec![sq * rho2 / k.kp, sq],
    ]);
    let d = CMatrix::from_rows(&[
        vec![k.k1 - rho1, c(0.0, 0.0)],
        vec![c(0.0, 0.0), k.k2 - rho2],
    ]);
    Ok((b, d, a))
}
