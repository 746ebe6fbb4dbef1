//! Complex polynomials in one variable, ascending-coefficient storage.

use crate::error::{Error, Result};
use crate::num::cmatrix::CMatrix;
use crate::num::eig::eigenvalues;
use crate::num::{c, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    /// Ascending degree; trailing exact zeros trimmed.
    coeffs: Vec<C64>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly { coeffs: vec![] }
    }

    pub fn constant(a: C64) -> Self {
        CPoly::from_coeffs(vec![a])
    }

    pub fn from_coeffs(mut coeffs: Vec<C64>) -> Self {
        while let Some(&last) = coeffs.last() {
            if last == c(0.0, 0.0) {
                coeffs.pop();
            } else {
                break;
            }
        }
        CPoly { coeffs }
    }

    /// Trim trailing coefficients that are negligible relative to the largest.
    pub fn trimmed(&self, rel_eps: f64) -> CPoly {
        let scale = self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut coeffs = self.coeffs.clone();
        while let Some(&last) = coeffs.last() {
            if last.norm() <= rel_eps * scale {
                coeffs.pop();
            } else {
                break;
            }
        }
        CPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn is_monic(&self, tol: f64) -> bool {
        (self.leading() - c(1.0, 0.0)).norm() <= tol
    }

    pub fn eval(&self, u: C64) -> C64 {
        let mut acc = c(0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            acc = acc * u + a;
        }
        acc
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        CPoly::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        CPoly::from_coeffs((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, s: C64) -> CPoly {
        CPoly::from_coeffs(self.coeffs.iter().map(|&a| a * s).collect())
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        if self.is_zero() || other.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![c(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::from_coeffs(out)
    }

    /// p(u + h) by repeated synthetic division at h (Taylor shift).
    pub fn shift(&self, h: C64) -> CPoly {
        let n = self.coeffs.len();
        if n == 0 {
            return CPoly::zero();
        }
        let mut work = self.coeffs.clone();
        let mut out = vec![c(0.0, 0.0); n];
        for slot in out.iter_mut() {
            let m = work.len();
            if m == 0 {
                break;
            }
            let mut rem = work[m - 1];
            let mut quot = vec![c(0.0, 0.0); m - 1];
            for i in (0..m - 1).rev() {
                quot[i] = rem;
                rem = work[i] + rem * h;
            }
            *slot = rem;
            work = quot;
        }
        CPoly::from_coeffs(out)
    }

    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::zero();
        }
        CPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &a)| a * c((k + 1) as f64, 0.0))
                .collect(),
        )
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C64]) -> CPoly {
        let mut p = CPoly::constant(c(1.0, 0.0));
        for &r in roots {
            p = p.mul(&CPoly::from_coeffs(vec![-r, c(1.0, 0.0)]));
        }
        p
    }

    /// Polynomial division: self = q * d + r with deg r < deg d.
    pub fn div_rem(&self, d: &CPoly) -> (CPoly, CPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dn = d.coeffs.len();
        if rem.len() < dn {
            return (CPoly::zero(), self.clone());
        }
        let mut q = vec![c(0.0, 0.0); rem.len() - dn + 1];
        let lead = d.coeffs[dn - 1];
        for k in (0..q.len()).rev() {
            let f = rem[k + dn - 1] / lead;
            q[k] = f;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= f * dc;
            }
        }
        rem.truncate(dn - 1);
        (CPoly::from_coeffs(q), CPoly::from_coeffs(rem))
    }
}

/// Unique interpolating polynomial through (nodes[i], values[i]) by Newton
/// divided differences.
pub fn poly_from_samples(nodes: &[C64], values: &[C64]) -> Result<CPoly> {
    let n = nodes.len();
    if n == 0 || values.len() != n {
        return Err(Error::Invalid("poly_from_samples: need equal, nonzero counts".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if (nodes[i] - nodes[j]).norm() == 0.0 {
                return Err(Error::Invalid(format!(
                    "poly_from_samples: coincident nodes at indices {i}, {j}"
                )));
            }
        }
    }
    // divided-difference table
    let mut dd = values.to_vec();
    let mut coefs = vec![dd[0]];
    for order in 1..n {
        for i in 0..n - order {
            dd[i] = (dd[i + 1] - dd[i]) / (nodes[i + order] - nodes[i]);
        }
        coefs.push(dd[0]);
    }
    // expand Newton form
    let mut p = CPoly::zero();
    let mut basis = CPoly::constant(c(1.0, 0.0));
    for (k, &a) in coefs.iter().enumerate() {
        p = p.add(&basis.scale(a));
        if k + 1 < n {
            basis = basis.mul(&CPoly::from_coeffs(vec![-nodes[k], c(1.0, 0.0)]));
        }
    }
    // interpolation through noisy degree-deficient data leaves tiny trailing
    // coefficients; trim them relative to the largest
    Ok(p.trimmed(1e-12))
}

/// All roots with multiplicity via companion-matrix eigenvalues plus Newton
/// polishing on the input polynomial.
pub fn poly_roots(p: &CPoly) -> Result<Vec<C64>> {
    if p.is_zero() {
        return Err(Error::Invalid("poly_roots: zero polynomial".into()));
    }
    let p = p.trimmed(0.0);
    let n = p.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = p.leading();
    let comp = CMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -p.coeff(i) / lead
        } else if i == j + 1 {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let mut roots = eigenvalues(&comp)?;
    // Newton polishing
    let dp = p.derivative();
    let coef_scale = p.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
    for r in roots.iter_mut() {
        let mut z = *r;
        for _ in 0..40 {
            let pv = p.eval(z);
            if pv.norm() <= 1e-13 * coef_scale {
                break;
            }
            let dv = dp.eval(z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = pv / dv;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            // keep multiple roots from oscillating: accept only improving steps
            let z_new = z - step;
            if p.eval(z_new).norm() <= pv.norm() {
                z = z_new;
            } else {
                break;
            }
        }
        *r = z;
    }
    roots.sort_by_key(|&z| crate::num::eig::order_key(z));
    Ok(roots)
}

/// Lagrange differentiation weights: d/du at `at` of the interpolating
/// polynomial through `nodes` equals sum_k w_k * f(nodes[k]).
pub fn lagrange_diff_weights(nodes: &[C64], at: C64) -> Vec<C64> {
    let n = nodes.len();
    let mut w = vec![c(0.0, 0.0); n];
    for k in 0..n {
        // l_k'(at) = sum_{m != k} prod_{j != k, m} (at - x_j) / prod_{j != k}(x_k - x_j)
        let mut den = c(1.0, 0.0);
        for j in 0..n {
            if j != k {
                den *= nodes[k] - nodes[j];
            }
        }
        let mut num = c(0.0, 0.0);
        for m in 0..n {
            if m == k {
                continue;
            }
            let mut prod = c(1.0, 0.0);
            for j in 0..n {
                if j != k && j != m {
                    prod *= at - nodes[j];
                }
            }
            num += prod;
        }
        w[k] = num / den;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolate_linear() {
        let p = poly_from_samples(&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(p.degree(), 1);
        assert!((p.coeff(0) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((p.coeff(1) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn interpolate_constant_gives_degree_zero() {
        let nodes = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        let vals = [c(4.0, -1.0); 3];
        let p = poly_from_samples(&nodes, &vals).unwrap();
        assert_eq!(p.degree(), 0);
        assert!((p.coeff(0) - c(4.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn interpolation_roundtrip_degree4() {
        let p = CPoly::from_coeffs(vec![
            c(1.0, 0.5),
            c(-2.0, 0.0),
            c(0.25, -1.0),
            c(3.0, 3.0),
            c(-0.5, 0.1),
        ]);
        let nodes: Vec<C64> = (0..5).map(|k| c(k as f64 - 2.0, 0.0)).collect();
        let vals: Vec<C64> = nodes.iter().map(|&u| p.eval(u)).collect();
        let q = poly_from_samples(&nodes, &vals).unwrap();
        for k in 0..5 {
            assert!((p.coeff(k) - q.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn coincident_nodes_error() {
        let r = poly_from_samples(&[c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(r.is_err());
    }

    #[test]
    fn roots_of_quadratic() {
        let p = CPoly::from_coeffs(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]); // u^2 - 1
        let roots = poly_roots(&p).unwrap();
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn triple_root_clusters() {
        // (u - 3)^3
        let p = CPoly::from_roots(&[c(3.0, 0.0); 3]);
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!((r - c(3.0, 0.0)).norm() < 1e-4, "cluster tolerance: {r}");
        }
    }

    #[test]
    fn roots_reconstruct_degree8() {
        let coeffs: Vec<C64> = (0..8)
            .map(|k| {
                let t = k as f64;
                c((t * 1.3).sin() * 2.0, (t * 0.7).cos())
            })
            .chain(std::iter::once(c(1.0, 0.0)))
            .collect();
        let p = CPoly::from_coeffs(coeffs);
        let roots = poly_roots(&p).unwrap();
        let q = CPoly::from_roots(&roots);
        let scale = p.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
        for k in 0..=8 {
            assert!((p.coeff(k) - q.coeff(k)).norm() < 1e-8 * scale);
        }
    }

    #[test]
    fn zero_poly_roots_error() {
        assert!(poly_roots(&CPoly::zero()).is_err());
    }

    #[test]
    fn shift_matches_eval() {
        let p = CPoly::from_coeffs(vec![c(1.0, 1.0), c(2.0, -1.0), c(0.5, 0.0), c(1.0, 0.25)]);
        let h = c(0.7, -0.3);
        let q = p.shift(h);
        for k in 0..6 {
            let u = c(k as f64 * 0.3 - 1.0, 0.1 * k as f64);
            assert!((q.eval(u) - p.eval(u + h)).norm() < 1e-12);
        }
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = CPoly::from_coeffs(vec![c(1.0, 0.0), c(2.0, 1.0), c(-1.0, 0.5), c(3.0, 0.0)]);
        let d = CPoly::from_coeffs(vec![c(-0.5, 0.2), c(1.0, 0.0)]);
        let (q, r) = a.div_rem(&d);
        let back = q.mul(&d).add(&r);
        for k in 0..4 {
            assert!((back.coeff(k) - a.coeff(k)).norm() < 1e-13);
        }
        assert!(r.degree() < d.degree() || r.is_zero());
    }

    #[test]
    fn diff_weights_exact_for_cubic() {
        let p = CPoly::from_coeffs(vec![c(1.0, 0.0), c(-1.0, 2.0), c(0.5, 0.0), c(2.0, -1.0)]);
        let nodes: Vec<C64> = (0..4).map(|k| c(k as f64 - 1.5, 0.0)).collect();
        let w = lagrange_diff_weights(&nodes, c(0.0, 0.0));
        let d: C64 = nodes.iter().zip(&w).map(|(&u, &wk)| p.eval(u) * wk).sum();
        let expect = p.derivative().eval(c(0.0, 0.0));
        assert!((d - expect).norm() < 1e-12);
    }
}
