//! TQ-based extraction of Bethe rapidities from transfer eigenvalue
//! polynomials, Newton refinement, and admissibility classification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{c, least_squares, lu_decompose, poly_roots, CMatrix, CPoly, C64};
use crate::oracle::{transfer_eigen_data, ChainConfig, TransferEigenData};
use crate::twist::SideParams;

/// Classification of a rapidity set after refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootClass {
    Admissible,
    Spurious,
    Unresolved,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RapiditySet {
    pub roots: Vec<C64>,
    /// Normalized three-term Bethe residual, maximized over roots.
    pub residual: f64,
    pub class: RootClass,
}

/// One joint eigenstate: transfer eigenvalue polynomial, its Q-polynomial,
/// and the refined rapidities.
#[derive(Debug, Clone)]
pub struct SpectralLine {
    pub eigen_index: usize,
    pub energy: C64,
    /// eigenvalue of c^L t_K(u), degree <= L in u
    pub lambda_poly: CPoly,
    /// monic Q(u) = prod (u - u_i), degree L
    pub q_poly: CPoly,
    pub rapidities: RapiditySet,
}

fn root_scale(roots: &[C64], c_scale: C64) -> f64 {
    roots
        .iter()
        .map(|z| z.norm())
        .fold(c_scale.norm(), f64::max)
        .max(1.0)
}

/// The three TQ terms at point v for root set with Q given:
/// T1 = s1 (kappa1-rho1) (v+c)^L Q(v+c), T2 = s2 (kappa2-rho2) v^L Q(v-c),
/// T3 = (rho1+rho2) (v+c)^L v^L c^{n-L}, with s1 = (-1)^L, s2 = (-1)^n.
fn tq_terms(v: C64, q: &CPoly, side: &SideParams, len: usize, cs: C64) -> [C64; 3] {
    let n = q.degree();
    let s1 = if len % 2 == 0 { 1.0 } else { -1.0 };
    let s2 = if n % 2 == 0 { 1.0 } else { -1.0 };
    let ap = (v + cs).powu(len as u32);
    let dp = v.powu(len as u32);
    let cpow = cs.powi(n as i32 - len as i32);
    [
        side.d1() * ap * q.eval(v + cs) * s1,
        side.d2() * dp * q.eval(v - cs) * s2,
        side.rho_sum() * ap * dp * cpow,
    ]
}

/// c^{L+n} * Y(v | roots) as a polynomial in v, where Y is the function whose
/// zeros at the roots themselves are the Bethe equations.
pub fn y_poly(roots: &[C64], side: &SideParams, len: usize, cs: C64) -> CPoly {
    let n = roots.len();
    let q = CPoly::from_roots(roots);
    let s1 = if len % 2 == 0 { 1.0 } else { -1.0 };
    let s2 = if n % 2 == 0 { 1.0 } else { -1.0 };
    let ap = CPoly::from_roots(&vec![-cs; len]); // (v+c)^L
    let dp = CPoly::from_roots(&vec![c(0.0, 0.0); len]); // v^L
    let cpow = cs.powi(n as i32 - len as i32);
    let t1 = ap.mul(&q.shift(cs)).scale(side.d1() * s1);
    let t2 = dp.mul(&q.shift(-cs)).scale(side.d2() * s2);
    let t3 = ap.mul(&dp).scale(side.rho_sum() * cpow);
    t1.add(&t2).add(&t3)
}

/// Solve the TQ relation lambda_poly(v) Q(v) = Y-terms for a monic degree-L
/// Q, given the transfer eigenvalue polynomial (of c^L t(u)). Even L.
pub fn tq_solve(lambda_poly: &CPoly, side: &SideParams, cfg: &ChainConfig) -> Result<CPoly> {
    let len = cfg.len;
    let cs = cfg.c;
    let rows = 2 * len + 1;
    let ap = CPoly::from_roots(&vec![-cs; len]);
    let dp = CPoly::from_roots(&vec![c(0.0, 0.0); len]);

    // column k: coefficient polynomial multiplying q_k, k = 0..L-1
    // from Q(v) = v^L + sum q_k v^k:
    //   A_k(v) = d1 (v+c)^L (v+c)^k + d2 v^L (v-c)^k - lambda(v) v^k
    let mono_shift = |k: usize, h: C64| -> CPoly {
        CPoly::from_roots(&vec![-h; k]) // (v+h)^k
    };
    let mut mat = CMatrix::zeros(rows, len);
    let mut put = |col: usize, p: &CPoly| {
        for r in 0..rows {
            mat[(r, col)] = p.coeff(r);
        }
    };
    for k in 0..len {
        let a_k = ap
            .mul(&mono_shift(k, cs))
            .scale(side.d1())
            .add(&dp.mul(&mono_shift(k, -cs)).scale(side.d2()))
            .sub(&lambda_poly.mul(&mono_shift(k, c(0.0, 0.0))));
        put(k, &a_k);
    }
    // rhs: minus the monomial-v^L part of the same relation
    let rhs_poly = ap
        .mul(&mono_shift(len, cs))
        .scale(side.d1())
        .add(&dp.mul(&mono_shift(len, -cs)).scale(side.d2()))
        .add(&ap.mul(&dp).scale(side.rho_sum()))
        .sub(&lambda_poly.mul(&mono_shift(len, c(0.0, 0.0))))
        .scale(c(-1.0, 0.0));
    let rhs: Vec<C64> = (0..rows).map(|r| rhs_poly.coeff(r)).collect();

    let coef_scale = rhs
        .iter()
        .map(|z| z.norm())
        .chain((0..rows).flat_map(|r| (0..len).map(move |k| (r, k))).map(|(r, k)| mat[(r, k)].norm()))
        .fold(1.0_f64, f64::max);
    let (q_coeffs, resid) = least_squares(&mat, &rhs)
        .map_err(|e| Error::TqInconsistent(format!("TQ system rank-deficient: {e}")))?;
    if resid > 1e-8 * coef_scale {
        return Err(Error::TqInconsistent(format!(
            "TQ relation inconsistent: residual {resid:.3e} vs scale {coef_scale:.3e}"
        )));
    }
    let mut coeffs = q_coeffs;
    coeffs.push(c(1.0, 0.0));
    Ok(CPoly::from_coeffs(coeffs))
}

/// Normalized three-term Bethe residual, maximized over the roots.
pub fn bethe_residual(roots: &[C64], side: &SideParams, len: usize, cs: C64) -> f64 {
    let q = CPoly::from_roots(roots);
    let mut worst = 0.0_f64;
    for &u in roots {
        let t = tq_terms(u, &q, side, len, cs);
        let scale = t.iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max);
        worst = worst.max((t[0] + t[1] + t[2]).norm() / scale);
    }
    worst
}

/// dY/du_k as a function of v (the root-derivative part, no diagonal term):
/// G_k(v) = -s1 d1 (v+c)^L prod_{i != k}(v+c-u_i) - s2 d2 v^L prod_{i != k}(v-c-u_i).
fn y_root_grad(v: C64, roots: &[C64], k: usize, side: &SideParams, len: usize, cs: C64) -> C64 {
    let n = roots.len();
    let s1 = if len % 2 == 0 { 1.0 } else { -1.0 };
    let s2 = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut p1 = c(1.0, 0.0);
    let mut p2 = c(1.0, 0.0);
    for (i, &u) in roots.iter().enumerate() {
        if i == k {
            continue;
        }
        p1 *= v + cs - u;
        p2 *= v - cs - u;
    }
    let ap = (v + cs).powu(len as u32);
    let dp = v.powu(len as u32);
    -(side.d1() * ap * p1 * s1) - (side.d2() * dp * p2 * s2)
}

/// Jacobian of the on-shell system F_j = Y(u_j | u-bar) in the roots:
/// M[j][k] = G_k(u_j) + delta_jk Y'(u_j).
pub fn y_grad_matrix(roots: &[C64], side: &SideParams, len: usize, cs: C64) -> CMatrix {
    let n = roots.len();
    let y = y_poly(roots, side, len, cs);
    let dy = y.derivative();
    CMatrix::from_fn(n, n, |j, k| {
        let g = y_root_grad(roots[j], roots, k, side, len, cs);
        if j == k {
            g + dy.eval(roots[j])
        } else {
            g
        }
    })
}

/// Damped Newton refinement of the Bethe roots; returns refined roots and
/// the final residual.
pub fn newton_refine(
    roots: &[C64],
    side: &SideParams,
    len: usize,
    cs: C64,
) -> Result<(Vec<C64>, f64)> {
    let n = roots.len();
    let mut cur = roots.to_vec();
    let mut res = bethe_residual(&cur, side, len, cs);
    for _ in 0..50 {
        if res < 1e-13 {
            break;
        }
        let y = y_poly(&cur, side, len, cs);
        let f: Vec<C64> = cur.iter().map(|&u| y.eval(u)).collect();
        let jac = y_grad_matrix(&cur, side, len, cs);
        let lu = lu_decompose(&jac);
        if lu.is_singular() {
            break;
        }
        let step = lu.solve(&f)?;
        let mut damp = 1.0;
        let mut improved = false;
        for _ in 0..8 {
            let trial: Vec<C64> =
                cur.iter().zip(&step).map(|(&u, &s)| u - s * damp).collect();
            let trial_res = bethe_residual(&trial, side, len, cs);
            if trial_res < res {
                cur = trial;
                res = trial_res;
                improved = true;
                break;
            }
            damp *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Ok((cur, res))
}

/// Collision and vanishing-term checks plus the residual gate.
pub fn classify(roots: &[C64], residual: f64, side: &SideParams, len: usize, cs: C64) -> RootClass {
    let scale = root_scale(roots, cs);
    for i in 0..roots.len() {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < 1e-8 * scale {
                return RootClass::Spurious;
            }
        }
    }
    let q = CPoly::from_roots(roots);
    let term_scale = cs.norm().powi(2 * len as i32).max(1.0);
    for &u in roots {
        let t = tq_terms(u, &q, side, len, cs);
        if t.iter().all(|z| z.norm() < 1e-10 * term_scale) {
            return RootClass::Spurious;
        }
    }
    if residual <= 1e-10 {
        RootClass::Admissible
    } else {
        RootClass::Unresolved
    }
}

/// Full Bethe description of one transfer eigenvalue polynomial.
pub fn line_from_lambda(
    eigen_index: usize,
    energy: C64,
    lambda_poly: &CPoly,
    side: &SideParams,
    cfg: &ChainConfig,
) -> Result<SpectralLine> {
    let q = tq_solve(lambda_poly, side, cfg)?;
    let raw_roots = poly_roots(&q)?;
    let (roots, residual) = newton_refine(&raw_roots, side, cfg.len, cfg.c)?;
    let class = classify(&roots, residual, side, cfg.len, cfg.c);
    Ok(SpectralLine {
        eigen_index,
        energy,
        lambda_poly: lambda_poly.clone(),
        q_poly: CPoly::from_roots(&roots),
        rapidities: RapiditySet { roots, residual, class },
    })
}

/// Enumerate the full spectrum for one side: oracle eigen data, then per line
/// a TQ solve, root extraction, Newton polish, and classification.
pub fn enumerate_spectrum(
    data: &TransferEigenData,
    side: &SideParams,
) -> Result<Vec<SpectralLine>> {
    let cfg = data.cfg;
    data.lines
        .par_iter()
        .enumerate()
        .map(|(i, line)| line_from_lambda(i, line.energy, &line.lambda_poly, side, &cfg))
        .collect()
}

/// Convenience: eigen data plus spectrum in one call.
pub fn spectrum_for_side(side: &SideParams, cfg: &ChainConfig) -> Result<Vec<SpectralLine>> {
    let data = transfer_eigen_data(&side.twist, cfg)?;
    enumerate_spectrum(&data, side)
}
