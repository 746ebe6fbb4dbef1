//! Minimal double-double ("two-float") complex arithmetic, ~32 significant
//! digits. Used only by the near-collision fallback in the form-factor sum.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from(q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo: lo + q3 }
    }

    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: DdC = DdC { re: Dd { hi: 1.0, lo: 0.0 }, im: Dd::ZERO };

    pub fn from_c64(z: crate::num::C64) -> DdC {
        DdC { re: Dd::from(z.re), im: Dd::from(z.im) }
    }

    pub fn to_c64(self) -> crate::num::C64 {
        crate::num::c(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: DdC) -> DdC {
        DdC { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn sub(self, o: DdC) -> DdC {
        DdC { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    pub fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn div(self, o: DdC) -> DdC {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let num = self.mul(DdC { re: o.re, im: Dd { hi: -o.im.hi, lo: -o.im.lo } });
        DdC { re: num.re.div(den), im: num.im.div(den) }
    }

    pub fn norm(self) -> f64 {
        self.to_c64().norm()
    }
}

/// Determinant of an n×n matrix stored row-major, pivoted elimination in
/// double-double precision.
pub fn det_ddc(entries: &mut [DdC], n: usize) -> DdC {
    assert_eq!(entries.len(), n * n);
    let mut det = DdC::ONE;
    for k in 0..n {
        let mut p = k;
        let mut best = entries[k * n + k].norm();
        for i in k + 1..n {
            let v = entries[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return DdC::ZERO;
        }
        if p != k {
            for j in 0..n {
                entries.swap(k * n + j, p * n + j);
            }
            det = DdC::ZERO.sub(det);
        }
        let piv = entries[k * n + k];
        det = det.mul(piv);
        for i in k + 1..n {
            let f = entries[i * n + k].div(piv);
            for j in k + 1..n {
                let t = entries[k * n + j].mul(f);
                entries[i * n + j] = entries[i * n + j].sub(t);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::c;

    #[test]
    fn dd_mul_keeps_extra_digits() {
        // (1 + 2^-40)² = 1 + 2^-39 + 2^-80; plain f64 drops the last term
        let x = Dd::from(1.0).add(Dd::from((2.0f64).powi(-40)));
        let sq = x.mul(x);
        let err = sq.sub(Dd::from(1.0)).sub(Dd::from((2.0f64).powi(-39)));
        assert!((err.to_f64() - (2.0f64).powi(-80)).abs() < 1e-40);
    }

    #[test]
    fn dd_div_roundtrip() {
        let a = Dd::from(3.1415926535897931).add(Dd::from(1e-20));
        let b = Dd::from(2.7182818284590452);
        let q = a.div(b);
        let back = q.mul(b).sub(a);
        assert!(back.to_f64().abs() < 1e-30);
    }

    #[test]
    fn ddc_det_matches_f64_for_benign_matrix() {
        let vals = [
            c(2.0, 1.0), c(0.5, -0.25), c(1.0, 0.0),
            c(-1.0, 0.5), c(3.0, 0.0), c(0.25, 0.25),
            c(0.0, 1.0), c(1.0, -1.0), c(2.0, 2.0),
        ];
        let mut dd: Vec<DdC> = vals.iter().map(|&z| DdC::from_c64(z)).collect();
        let det_dd = det_ddc(&mut dd, 3).to_c64();
        let m = crate::num::cmatrix::CMatrix::from_fn(3, 3, |i, j| vals[i * 3 + j]);
        let det = crate::num::solve::determinant(&m);
        assert!((det_dd - det).norm() < 1e-12 * det.norm());
    }
}
