//! LU and QR based dense solvers.

use crate::error::{Error, Result};
use crate::num::cmatrix::CMatrix;
use crate::num::C64;

/// LU factorization with partial pivoting, kept packed in one matrix.
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
    /// Smallest pivot modulus over the elimination.
    pub min_pivot: f64,
    /// Largest pivot modulus.
    pub max_pivot: f64,
}

pub fn lu_decompose(m: &CMatrix) -> Lu {
    assert!(m.is_square(), "LU requires a square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut min_pivot = f64::INFINITY;
    let mut max_pivot = 0.0_f64;
    for k in 0..n {
        let mut p = k;
        let mut best = a[(k, k)].norm();
        for i in k + 1..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let piv = a[(k, k)];
        min_pivot = min_pivot.min(piv.norm());
        max_pivot = max_pivot.max(piv.norm());
        if piv.norm() == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            a[(i, k)] = f;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let akj = a[(k, j)];
                a[(i, j)] -= f * akj;
            }
        }
    }
    if n == 0 {
        min_pivot = 0.0;
    }
    Lu { lu: a, perm, sign, min_pivot, max_pivot }
}

impl Lu {
    pub fn det(&self) -> C64 {
        let n = self.lu.rows();
        let mut d = C64::new(self.sign, 0.0);
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn is_singular(&self) -> bool {
        let n = self.lu.rows() as f64;
        self.min_pivot <= self.max_pivot * 1e-14 * n || self.max_pivot == 0.0
    }

    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let n = self.lu.rows();
        assert_eq!(rhs.len(), n);
        if self.is_singular() {
            return Err(Error::Singular(format!(
                "rank-deficient system (pivot ratio {:.3e})",
                self.min_pivot / self.max_pivot.max(f64::MIN_POSITIVE)
            )));
        }
        let mut x: Vec<C64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let f = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= f * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let f = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= f * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solve without the singularity gate; used by inverse iteration where a
    /// nearly singular factor is the whole point.
    pub fn solve_unchecked(&self, rhs: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let f = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= f * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let f = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= f * xj;
            }
            let piv = self.lu[(i, i)];
            let guard = if piv.norm() < 1e-300 { C64::new(1e-300, 0.0) } else { piv };
            x[i] /= guard;
        }
        x
    }
}

/// Determinant via pivoted elimination; singular input returns zero.
pub fn determinant(m: &CMatrix) -> C64 {
    lu_decompose(m).det()
}

pub fn solve_linear(m: &CMatrix, rhs: &[C64]) -> Result<Vec<C64>> {
    lu_decompose(m).solve(rhs)
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    let n = m.rows();
    let lu = lu_decompose(m);
    if lu.is_singular() {
        return Err(Error::Singular("matrix not invertible".into()));
    }
    let mut out = CMatrix::zeros(n, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        let col = lu.solve(&e)?;
        for i in 0..n {
            out[(i, j)] = col[i];
        }
        e[j] = C64::new(0.0, 0.0);
    }
    Ok(out)
}

/// Householder QR least squares for `m x = rhs`, `m` with rows >= cols.
/// Returns the minimizer and the residual norm.
pub fn least_squares(m: &CMatrix, rhs: &[C64]) -> Result<(Vec<C64>, f64)> {
    let rows = m.rows();
    let cols = m.cols();
    assert_eq!(rhs.len(), rows);
    assert!(rows >= cols, "least_squares expects rows >= cols");
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    let mut rdiag_max = 0.0_f64;
    let mut rdiag_min = f64::INFINITY;
    for k in 0..cols {
        // Householder reflector for column k
        let mut nrm = 0.0;
        for i in k..rows {
            nrm += a[(i, k)].norm_sqr();
        }
        let nrm = nrm.sqrt();
        if nrm == 0.0 {
            rdiag_min = 0.0;
            continue;
        }
        let akk = a[(k, k)];
        let phase = if akk.norm() > 0.0 { akk / akk.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * nrm;
        // v = x - alpha e1
        let mut v: Vec<C64> = (k..rows).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 > 0.0 {
            for j in k..cols {
                let mut dot = C64::new(0.0, 0.0);
                for (t, vi) in v.iter().enumerate() {
                    dot += vi.conj() * a[(k + t, j)];
                }
                let f = dot * (2.0 / vnorm2);
                for (t, vi) in v.iter().enumerate() {
                    a[(k + t, j)] -= f * vi;
                }
            }
            let mut dot = C64::new(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * b[k + t];
            }
            let f = dot * (2.0 / vnorm2);
            for (t, vi) in v.iter().enumerate() {
                b[k + t] -= f * vi;
            }
        }
        a[(k, k)] = alpha;
        rdiag_max = rdiag_max.max(alpha.norm());
        rdiag_min = rdiag_min.min(alpha.norm());
    }
    if rdiag_min <= rdiag_max * 1e-13 {
        return Err(Error::Singular("least_squares: rank deficient to tolerance".into()));
    }
    // Back substitution on the triangular factor
    let mut x = vec![C64::new(0.0, 0.0); cols];
    for i in (0..cols).rev() {
        let mut s = b[i];
        for j in i + 1..cols {
            s -= a[(i, j)] * x[j];
        }
        x[i] = s / a[(i, i)];
    }
    let residual: f64 = b[cols..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok((x, residual))
}
