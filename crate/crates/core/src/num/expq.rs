//! Closed-form exponential of a Pauli combination.
//!
//! exp(s·(bx σx + by σy + bz σz)) = cosh(s r) I + sinh(s r)/r · (bx σx + ...),
//! with r² = bx² + by² + bz² (complex scalar); r = 0 uses the analytic limit
//! sinh(r)/r → 1.

use crate::num::cmatrix::CMatrix;
use crate::num::{c, C64};

pub fn pauli_x() -> CMatrix {
    CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]])
}

/// bx σx + by σy + bz σz as a 2x2 matrix.
pub fn pauli_combination(bx: C64, by: C64, bz: C64) -> CMatrix {
    pauli_x()
        .scale(bx)
        .add(&pauli_y().scale(by))
        .add(&pauli_z().scale(bz))
}

/// Principal square root branch of the counting scalar, re ≥ 0.
pub fn counting_r(bx: C64, by: C64, bz: C64) -> C64 {
    let r = (bx * bx + by * by + bz * bz).sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

fn sinh_over(x: C64) -> C64 {
    if x.norm() < 1e-6 {
        // series: 1 + x²/6 + x⁴/120
        let x2 = x * x;
        c(1.0, 0.0) + x2 * (1.0 / 6.0) + x2 * x2 * (1.0 / 120.0)
    } else {
        x.sinh() / x
    }
}

/// exp(sign · Q(β̄)) with Q = bx σx + by σy + bz σz, sign = ±1.
pub fn mat_exp_pauli(bx: C64, by: C64, bz: C64, sign: f64) -> CMatrix {
    let r = counting_r(bx, by, bz);
    let s = c(sign, 0.0);
    let cosh = r.cosh();
    let shr = sinh_over(r) * s;
    CMatrix::identity(2)
        .scale(cosh)
        .add(&pauli_combination(bx, by, bz).scale(shr))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scaling-and-squaring matrix exponential, the independent oracle.
    fn expm(m: &CMatrix) -> CMatrix {
        let scale = m.norm_max();
        let k = (scale.log2().ceil().max(0.0) as u32) + 6;
        let small = m.scale(c(1.0 / (1u64 << k) as f64, 0.0));
        let mut term = CMatrix::identity(2);
        let mut acc = CMatrix::identity(2);
        for j in 1..25 {
            term = term.matmul(&small).scale(c(1.0 / j as f64, 0.0));
            acc = acc.add(&term);
        }
        let mut out = acc;
        for _ in 0..k {
            out = out.matmul(&out);
        }
        out
    }

    #[test]
    fn z_direction_diagonal() {
        let m = mat_exp_pauli(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), -1.0);
        assert!((m[(0, 0)] - c((-1.0f64).exp(), 0.0)).norm() < 1e-14);
        assert!((m[(1, 1)] - c(1.0f64.exp(), 0.0)).norm() < 1e-14);
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn x_direction_closed_form() {
        let m = mat_exp_pauli(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), -1.0);
        let expect = CMatrix::identity(2)
            .scale(c(1.0f64.cosh(), 0.0))
            .sub(&pauli_x().scale(c(1.0f64.sinh(), 0.0)));
        assert!(m.sub(&expect).norm_max() < 1e-14);
    }

    #[test]
    fn general_direction_matches_series_oracle() {
        let (bx, by, bz) = (c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let m = mat_exp_pauli(bx, by, bz, 1.0);
        let oracle = expm(&pauli_combination(bx, by, bz));
        assert!(m.sub(&oracle).norm_max() < 1e-12);
    }

    #[test]
    fn inverse_pairing() {
        let (bx, by, bz) = (c(0.3, 0.1), c(-0.7, 0.2), c(1.1, -0.4));
        let p = mat_exp_pauli(bx, by, bz, 1.0);
        let m = mat_exp_pauli(bx, by, bz, -1.0);
        assert!(p.matmul(&m).sub(&CMatrix::identity(2)).norm_max() < 1e-12);
    }

    #[test]
    fn zero_field_is_identity() {
        let m = mat_exp_pauli(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), 1.0);
        assert!(m.sub(&CMatrix::identity(2)).norm_max() < 1e-15);
    }
}
