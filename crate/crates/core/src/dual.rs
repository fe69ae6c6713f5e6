//! Truncated second-order Taylor arithmetic in two variables.
//!
//! Surface evaluators are written once, generically over [`Scalar`]. Evaluated
//! with `f64` they give positions; evaluated with [`Dual2`] seeded on the two
//! parameters they give exact first and second partial derivatives.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::elliptic::{jacobi, EllipticModulus};

/// Numeric type accepted by generic surface evaluators.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
    + std::fmt::Debug
{
    fn cst(v: f64) -> Self;
    fn value(self) -> f64;
    /// Applies a univariate function given its value and first two derivatives
    /// at `self.value()`.
    fn lift(self, f: f64, df: f64, d2f: f64) -> Self;

    fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.lift(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.lift(c, -s, -c)
    }
    fn exp(self) -> Self {
        let e = self.value().exp();
        self.lift(e, e, e)
    }
    fn ln(self) -> Self {
        let x = self.value();
        self.lift(x.ln(), 1.0 / x, -1.0 / (x * x))
    }
    fn sqrt(self) -> Self {
        let x = self.value();
        let r = x.sqrt();
        self.lift(r, 0.5 / r, -0.25 / (r * x))
    }
    fn tanh(self) -> Self {
        let t = self.value().tanh();
        let d = 1.0 - t * t;
        self.lift(t, d, -2.0 * t * d)
    }
    fn atanh(self) -> Self {
        let x = self.value();
        let d = 1.0 / (1.0 - x * x);
        self.lift(x.atanh(), d, 2.0 * x * d * d)
    }
    fn cosh(self) -> Self {
        let x = self.value();
        self.lift(x.cosh(), x.sinh(), x.cosh())
    }
    fn sinh(self) -> Self {
        let x = self.value();
        self.lift(x.sinh(), x.cosh(), x.sinh())
    }
    fn powi(self, n: i32) -> Self {
        let x = self.value();
        let nf = n as f64;
        self.lift(
            x.powi(n),
            nf * x.powi(n - 1),
            nf * (nf - 1.0) * x.powi(n - 2),
        )
    }
    /// Jacobi amplitude functions `(sn, cn, dn)` with closed-form derivatives.
    fn jacobi(self, m: EllipticModulus) -> (Self, Self, Self) {
        let j = jacobi(self.value(), m);
        let p2 = m.p() * m.p();
        let (sn, cn, dn) = (j.sn, j.cn, j.dn);
        (
            self.lift(sn, cn * dn, -sn * (dn * dn + p2 * cn * cn)),
            self.lift(cn, -sn * dn, -cn * dn * dn + p2 * sn * sn * cn),
            self.lift(dn, -p2 * sn * cn, -p2 * dn * (cn * cn - sn * sn)),
        )
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn lift(self, f: f64, _df: f64, _d2f: f64) -> Self {
        f
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    fn atanh(self) -> Self {
        f64::atanh(self)
    }
    fn jacobi(self, m: EllipticModulus) -> (Self, Self, Self) {
        let j = jacobi(self, m);
        (j.sn, j.cn, j.dn)
    }
}

/// Value, gradient and Hessian of a function of `(t, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual2 {
    pub v: f64,
    /// `[∂_t, ∂_s]`
    pub d: [f64; 2],
    /// `[∂_tt, ∂_ts, ∂_ss]`
    pub h: [f64; 3],
}

impl Dual2 {
    pub fn var_t(t: f64) -> Self {
        Self { v: t, d: [1.0, 0.0], h: [0.0; 3] }
    }
    pub fn var_s(s: f64) -> Self {
        Self { v: s, d: [0.0, 1.0], h: [0.0; 3] }
    }
    /// Seeds both parameters at `(t, s)`.
    pub fn params(t: f64, s: f64) -> (Self, Self) {
        (Self::var_t(t), Self::var_s(s))
    }
}

impl Add for Dual2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1]],
            h: [self.h[0] + o.h[0], self.h[1] + o.h[1], self.h[2] + o.h[2]],
        }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Dual2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            v: -self.v,
            d: [-self.d[0], -self.d[1]],
            h: [-self.h[0], -self.h[1], -self.h[2]],
        }
    }
}

impl Mul for Dual2 {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self {
            v: a.v * b.v,
            d: [a.d[0] * b.v + a.v * b.d[0], a.d[1] * b.v + a.v * b.d[1]],
            h: [
                a.h[0] * b.v + 2.0 * a.d[0] * b.d[0] + a.v * b.h[0],
                a.h[1] * b.v + a.d[0] * b.d[1] + a.d[1] * b.d[0] + a.v * b.h[1],
                a.h[2] * b.v + 2.0 * a.d[1] * b.d[1] + a.v * b.h[2],
            ],
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let x = o.v;
        self * o.lift(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }
}

impl Add<f64> for Dual2 {
    type Output = Self;
    #[inline]
    fn add(mut self, o: f64) -> Self {
        self.v += o;
        self
    }
}

impl Sub<f64> for Dual2 {
    type Output = Self;
    #[inline]
    fn sub(mut self, o: f64) -> Self {
        self.v -= o;
        self
    }
}

impl Mul<f64> for Dual2 {
    type Output = Self;
    #[inline]
    fn mul(self, o: f64) -> Self {
        Self {
            v: self.v * o,
            d: [self.d[0] * o, self.d[1] * o],
            h: [self.h[0] * o, self.h[1] * o, self.h[2] * o],
        }
    }
}

impl Div<f64> for Dual2 {
    type Output = Self;
    #[inline]
    fn div(self, o: f64) -> Self {
        self * (1.0 / o)
    }
}

impl AddAssign for Dual2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Dual2 {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Scalar for Dual2 {
    fn cst(v: f64) -> Self {
        Self { v, ..Default::default() }
    }
    fn value(self) -> f64 {
        self.v
    }
    fn lift(self, f: f64, df: f64, d2f: f64) -> Self {
        let d = self.d;
        Self {
            v: f,
            d: [df * d[0], df * d[1]],
            h: [
                d2f * d[0] * d[0] + df * self.h[0],
                d2f * d[0] * d[1] + df * self.h[1],
                d2f * d[1] * d[1] + df * self.h[2],
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: impl Fn(Dual2, Dual2) -> Dual2, g: impl Fn(f64, f64) -> f64, t: f64, s: f64) {
        let (dt, ds) = Dual2::params(t, s);
        let r = f(dt, ds);
        let h = 1e-4;
        let ft = (g(t + h, s) - g(t - h, s)) / (2.0 * h);
        let fs = (g(t, s + h) - g(t, s - h)) / (2.0 * h);
        let h2 = 1e-3;
        let ftt = (g(t + h2, s) - 2.0 * g(t, s) + g(t - h2, s)) / (h2 * h2);
        let fss = (g(t, s + h2) - 2.0 * g(t, s) + g(t, s - h2)) / (h2 * h2);
        let fts = (g(t + h2, s + h2) - g(t + h2, s - h2) - g(t - h2, s + h2)
            + g(t - h2, s - h2))
            / (4.0 * h2 * h2);
        assert!((r.v - g(t, s)).abs() < 1e-14);
        assert!((r.d[0] - ft).abs() < 1e-7, "{} {}", r.d[0], ft);
        assert!((r.d[1] - fs).abs() < 1e-7);
        assert!((r.h[0] - ftt).abs() < 1e-5, "{} {}", r.h[0], ftt);
        assert!((r.h[1] - fts).abs() < 1e-5);
        assert!((r.h[2] - fss).abs() < 1e-5);
    }

    #[test]
    fn composite_expression_matches_finite_differences() {
        fd_check(
            |t, s| (t * s).sin() * (t - s * 0.5).exp() / (t * t + 1.0).sqrt(),
            |t, s| (t * s).sin() * (t - s * 0.5).exp() / (t * t + 1.0).sqrt(),
            0.3,
            -0.7,
        );
        fd_check(
            |t, s| (t * 0.4).atanh() + (s * t).tanh().ln().cos() - s.powi(3),
            |t, s| (t * 0.4).atanh() + (s * t).tanh().ln().cos() - s.powi(3),
            0.9,
            0.8,
        );
    }

    #[test]
    fn jacobi_lift_matches_finite_differences() {
        let m = EllipticModulus::klein();
        for which in 0..3 {
            let pick = move |x: (f64, f64, f64)| match which {
                0 => x.0,
                1 => x.1,
                _ => x.2,
            };
            fd_check(
                move |t, s| {
                    let (a, b, c) = (t * 1.3 + s * 0.2).jacobi(m);
                    match which {
                        0 => a,
                        1 => b,
                        _ => c,
                    }
                },
                move |t, s| pick(Scalar::jacobi(t * 1.3 + s * 0.2, m)),
                0.41,
                1.7,
            );
        }
    }
}
