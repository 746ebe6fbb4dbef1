//! Nonsymmetric complex eigensolver: Hessenberg reduction, shifted QR with
//! deflation, Schur vectors, and biorthogonal left/right eigenvector pairs.
//!
//! The pairing is bilinear (no conjugation): the left rows are the inverse of
//! the right eigenvector matrix, so `<l_i, r_j> = delta_ij` holds by
//! construction.

use crate::error::{Error, Result};
use crate::num::cmatrix::CMatrix;
use crate::num::solve::{inverse, lu_decompose};
use crate::num::{c, C64};

/// Rounding quantum used to make the eigenvalue ordering deterministic.
const ORDER_QUANTUM: f64 = 1e-10;

/// Right/left eigenvector pairs with bilinear biorthonormal pairing.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<C64>,
    /// Columns are right eigenvectors.
    pub right_vectors: CMatrix,
    /// Rows are left eigenvectors; `left * right = I`.
    pub left_vectors: CMatrix,
    /// Smallest gap between any two (sorted) eigenvalues.
    pub min_gap: f64,
}

pub fn order_key(z: C64) -> (i64, i64) {
    (
        (z.re / ORDER_QUANTUM).round() as i64,
        (z.im / ORDER_QUANTUM).round() as i64,
    )
}

/// Householder reduction to upper Hessenberg form; returns (H, Q) with
/// `A = Q H Q^H`.
fn hessenberg(a: &CMatrix) -> (CMatrix, CMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let mut nrm = 0.0;
        for i in k + 1..n {
            nrm += h[(i, k)].norm_sqr();
        }
        let nrm = nrm.sqrt();
        if nrm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { c(1.0, 0.0) };
        let alpha = -phase * nrm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // H <- P H
        for j in k..n {
            let mut dot = c(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + t, j)];
            }
            let f = dot * tau;
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= f * vi;
            }
        }
        // H <- H P
        for i in 0..n {
            let mut dot = c(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + t)] * vi;
            }
            let f = dot * tau;
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= f * vi.conj();
            }
        }
        // Q <- Q P
        for i in 0..n {
            let mut dot = c(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += q[(i, k + 1 + t)] * vi;
            }
            let f = dot * tau;
            for (t, vi) in v.iter().enumerate() {
                q[(i, k + 1 + t)] -= f * vi.conj();
            }
        }
    }
    (h, q)
}

#[inline]
fn givens(a: C64, b: C64) -> (f64, C64) {
    // returns (cos, sin) with [c, s; -conj(s), c]^H zeroing b against a
    let scale = a.norm().max(b.norm());
    if scale == 0.0 || b.norm() == 0.0 {
        return (1.0, c(0.0, 0.0));
    }
    let r = ((a / scale).norm_sqr() + (b / scale).norm_sqr()).sqrt() * scale;
    let cs = a.norm() / r;
    let phase = if a.norm() > 0.0 { a / a.norm() } else { c(1.0, 0.0) };
    let sn = phase * b.conj() / r;
    (cs, sn)
}

/// Eigenvalue of the 2x2 [[a,b],[c,d]] closest to d (Wilkinson shift).
fn wilkinson_shift(a: C64, b: C64, cc: C64, d: C64) -> C64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * cc;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Full complex Schur decomposition `A = Z T Z^H` (T upper triangular).
pub fn schur(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return Ok((a.clone(), a.clone()));
    }
    let (mut h, mut z) = hessenberg(a);
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iters_here = 0usize;
    let mut total_iters = 0usize;
    let max_total = 60 * n + 200;

    // Apply G (rows i,i+1) from the left over columns jlo..n and from the
    // right over rows 0..=min(i+2,hi), accumulating into z.
    macro_rules! rot {
        ($i:expr, $cs:expr, $sn:expr, $hi:expr) => {{
            let i = $i;
            let (cs, sn) = ($cs, $sn);
            let jlo = i.saturating_sub(1);
            for j in jlo..n {
                let x = h[(i, j)];
                let y = h[(i + 1, j)];
                h[(i, j)] = x * cs + y * sn;
                h[(i + 1, j)] = -x * sn.conj() + y * cs;
            }
            let top = (i + 2).min($hi);
            for r in 0..=top {
                let x = h[(r, i)];
                let y = h[(r, i + 1)];
                h[(r, i)] = x * cs + y * sn.conj();
                h[(r, i + 1)] = -x * sn + y * cs;
            }
            for r in 0..n {
                let x = z[(r, i)];
                let y = z[(r, i + 1)];
                z[(r, i)] = x * cs + y * sn.conj();
                z[(r, i + 1)] = -x * sn + y * cs;
            }
        }};
    }

    loop {
        // deflate converged trailing entries
        while hi > 0 {
            let s = h[(hi - 1, hi - 1)].norm() + h[(hi, hi)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(hi, hi - 1)].norm() <= eps * s {
                h[(hi, hi - 1)] = c(0.0, 0.0);
                hi -= 1;
                iters_here = 0;
            } else {
                break;
            }
        }
        if hi == 0 {
            break;
        }
        // active window start
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(lo, lo - 1)].norm() <= eps * s {
                h[(lo, lo - 1)] = c(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        total_iters += 1;
        iters_here += 1;
        if total_iters > max_total {
            return Err(Error::NonGenericSpectrum(
                "QR iteration failed to converge".into(),
            ));
        }
        let sigma = if iters_here % 12 == 0 {
            // exceptional shift to break stalls
            h[(hi, hi)] + c(1.5 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        // implicit single-shift bulge chase on [lo..=hi]
        let x = h[(lo, lo)] - sigma;
        let y = h[(lo + 1, lo)];
        let (cs, sn) = givens(x, y);
        rot!(lo, cs, sn, hi);
        for i in lo + 1..hi {
            let x = h[(i, i - 1)];
            let y = h[(i + 1, i - 1)];
            let (cs, sn) = givens(x, y);
            rot!(i, cs, sn, hi);
            h[(i + 1, i - 1)] = c(0.0, 0.0);
        }
    }
    Ok((h, z))
}

/// Eigenvalues only, sorted lexicographically by (re, im) with rounding.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let (t, _) = schur(a)?;
    let mut vals: Vec<C64> = (0..a.rows()).map(|i| t[(i, i)]).collect();
    vals.sort_by_key(|&z| order_key(z));
    Ok(vals)
}

/// Right eigenvector of the triangular factor for diagonal index k.
fn triangular_eigvec(t: &CMatrix, k: usize) -> Vec<C64> {
    let n = t.rows();
    let norm_t = t.norm_max().max(1.0);
    let lam = t[(k, k)];
    let mut y = vec![c(0.0, 0.0); n];
    y[k] = c(1.0, 0.0);
    for i in (0..k).rev() {
        let mut s = c(0.0, 0.0);
        for j in i + 1..=k {
            s += t[(i, j)] * y[j];
        }
        let mut den = t[(i, i)] - lam;
        if den.norm() < f64::EPSILON * norm_t {
            den = c(f64::EPSILON * norm_t, 0.0);
        }
        y[i] = -s / den;
    }
    y
}

/// Full biorthogonal eigendecomposition. Errors if the eigenvector matrix is
/// numerically singular (defective input).
pub fn eig_biorthogonal(a: &CMatrix) -> Result<EigenSystem> {
    let n = a.rows();
    let (t, z) = schur(a)?;
    let mut pairs: Vec<(C64, Vec<C64>)> = (0..n)
        .map(|k| {
            let y = triangular_eigvec(&t, k);
            let mut v = vec![c(0.0, 0.0); n];
            for (j, yj) in y.iter().enumerate() {
                if yj.norm() == 0.0 {
                    continue;
                }
                for i in 0..n {
                    v[i] += z[(i, j)] * yj;
                }
            }
            // deterministic normalization: unit norm, largest component real positive
            let nrm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let mut big = c(1.0, 0.0);
            let mut bigm = 0.0;
            for x in &v {
                if x.norm() > bigm {
                    bigm = x.norm();
                    big = *x;
                }
            }
            let phase = big / big.norm();
            for x in v.iter_mut() {
                *x /= phase * nrm;
            }
            (t[(k, k)], v)
        })
        .collect();
    pairs.sort_by_key(|(lam, _)| order_key(*lam));

    let eigenvalues: Vec<C64> = pairs.iter().map(|(l, _)| *l).collect();
    let right = CMatrix::from_fn(n, n, |i, j| pairs[j].1[i]);
    let left = inverse(&right).map_err(|_| {
        Error::NonGenericSpectrum("eigenvector matrix singular (defective spectrum)".into())
    })?;

    let mut min_gap = f64::INFINITY;
    for i in 1..n {
        min_gap = min_gap.min((eigenvalues[i] - eigenvalues[i - 1]).norm());
    }
    // adjacent-in-sort is not enough for complex values; scan all pairs for
    // small n, sampled windows otherwise
    if n <= 64 {
        for i in 0..n {
            for j in i + 1..n {
                min_gap = min_gap.min((eigenvalues[i] - eigenvalues[j]).norm());
            }
        }
    }
    Ok(EigenSystem {
        eigenvalues,
        right_vectors: right,
        left_vectors: left,
        min_gap,
    })
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn right(&self, i: usize) -> Vec<C64> {
        self.right_vectors.col(i)
    }

    pub fn left(&self, i: usize) -> Vec<C64> {
        self.left_vectors.row(i).to_vec()
    }

    /// Reconstruct the original matrix from the spectral data.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.n();
        let mut out = CMatrix::zeros(n, n);
        for k in 0..n {
            let lam = self.eigenvalues[k];
            for i in 0..n {
                let ri = self.right_vectors[(i, k)] * lam;
                for j in 0..n {
                    out[(i, j)] += ri * self.left_vectors[(k, j)];
                }
            }
        }
        out
    }
}

/// One eigenpair (right and left vectors) for a simple eigenvalue `lam` of
/// `a`, by inverse iteration on `a` and its transpose. Robust even when other
/// parts of the spectrum are degenerate.
pub fn eig_pair_at(a: &CMatrix, lam: C64) -> Result<(Vec<C64>, Vec<C64>)> {
    let n = a.rows();
    let scale = a.norm_max().max(1.0);
    let shifted = a.shift_diag(-lam - c(1e-13 * scale, 1e-14 * scale));
    let lu_r = lu_decompose(&shifted);
    let lu_l = lu_decompose(&shifted.transpose());
    let start: Vec<C64> = (0..n)
        .map(|i| c(1.0 + (i as f64 * 0.7311).sin() * 0.3, (i as f64 * 1.137).cos() * 0.3))
        .collect();
    let iterate = |lu: &crate::num::solve::Lu| -> Vec<C64> {
        let mut v = start.clone();
        for _ in 0..4 {
            v = lu.solve_unchecked(&v);
            let nrm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !(nrm.is_finite() && nrm > 0.0) {
                break;
            }
            for x in v.iter_mut() {
                *x /= nrm;
            }
        }
        v
    };
    let r = iterate(&lu_r);
    let l = iterate(&lu_l);
    // residual checks
    let res_r: f64 = {
        let av = a.matvec(&r);
        av.iter()
            .zip(&r)
            .map(|(&x, &y)| (x - lam * y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    if !res_r.is_finite() || res_r > 1e-8 * scale {
        return Err(Error::NonGenericSpectrum(format!(
            "inverse iteration residual {:.3e} at eigenvalue {}",
            res_r, lam
        )));
    }
    // bilinear pairing must be well away from zero for a simple eigenvalue
    let pair: C64 = l.iter().zip(&r).map(|(&x, &y)| x * y).sum();
    if pair.norm() < 1e-10 {
        return Err(Error::NonGenericSpectrum(
            "left/right pairing vanishes (defective or degenerate eigenvalue)".into(),
        ));
    }
    Ok((r, l))
}
