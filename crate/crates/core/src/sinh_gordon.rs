//! The sinh-Gordon equation `v_zz̄ + sinh(2v)/2 = 0` and the minimal
//! Lagrangian data `(u, C)` it encodes through `e^{2u} = 4 cosh 2v`,
//! `2C = tanh 2v`.

use std::io::Write;

use crate::dual::{Dual2, Scalar};
use crate::elliptic::{complete_k, EllipticModulus};
use crate::error::{Error, Result};

/// Samples of `v` on a uniform rectangle grid, `s`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SGField {
    pub nt: usize,
    pub ns: usize,
    pub t0: f64,
    pub s0: f64,
    pub dt: f64,
    pub ds: f64,
    /// Wrap stencils around both axes instead of skipping boundary nodes.
    pub periodic: bool,
    pub values: Vec<f64>,
}

impl SGField {
    pub fn new(
        nt: usize,
        ns: usize,
        (t0, dt): (f64, f64),
        (s0, ds): (f64, f64),
        periodic: bool,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != nt * ns {
            return Err(Error::Input(format!(
                "field has {} values for a {nt}x{ns} grid",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("field value {bad} is not finite")));
        }
        Ok(Self { nt, ns, t0, s0, dt, ds, periodic, values })
    }

    /// Samples `f` at the nodes `(t0 + i dt, s0 + j ds)`.
    pub fn sample(
        nt: usize,
        ns: usize,
        (t0, dt): (f64, f64),
        (s0, ds): (f64, f64),
        periodic: bool,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(nt * ns);
        for j in 0..ns {
            for i in 0..nt {
                values.push(f(t0 + i as f64 * dt, s0 + j as f64 * ds));
            }
        }
        Self::new(nt, ns, (t0, dt), (s0, ds), periodic, values)
    }

    /// A single row along `t`.
    pub fn line(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(n, 1, (t0, dt), (0.0, 1.0), false, values)
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nt + i]
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn s(&self, j: usize) -> f64 {
        self.s0 + j as f64 * self.ds
    }

    fn check_size(&self) -> Result<()> {
        let ok = |n: usize| n == 1 || n >= 5;
        if self.nt < 5 && self.ns < 5 || !ok(self.nt) || !ok(self.ns) {
            return Err(Error::Domain(format!(
                "{}x{} grid is too small for the difference stencils",
                self.nt, self.ns
            )));
        }
        Ok(())
    }

    /// Nodes whose full stencil lies inside the grid (or all nodes, periodically).
    fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let range = |n: usize| {
            if n == 1 || self.periodic {
                0..n
            } else {
                2..n - 2
            }
        };
        range(self.ns).flat_map(move |j| range(self.nt).map(move |i| (i, j)))
    }
}

/// Fourth-order central first and second differences of `f` at node `(i, j)`
/// along both axes; an axis with one node contributes zeros.
fn derivatives(f: &SGField, vals: &[f64], i: usize, j: usize) -> ([f64; 2], [f64; 2]) {
    let get = |a: isize, b: isize| {
        let wrap = |k: isize, n: usize| k.rem_euclid(n as isize) as usize;
        vals[wrap(b, f.ns) * f.nt + wrap(a, f.nt)]
    };
    let (i, j) = (i as isize, j as isize);
    let axis = |n: usize, h: f64, step: &dyn Fn(isize) -> f64| -> (f64, f64) {
        if n == 1 {
            return (0.0, 0.0);
        }
        let (m2, m1, c, p1, p2) = (step(-2), step(-1), step(0), step(1), step(2));
        (
            (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
            (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h),
        )
    };
    let (vt, vtt) = axis(f.nt, f.dt, &|k| get(i + k, j));
    let (vs, vss) = axis(f.ns, f.ds, &|k| get(i, j + k));
    ([vt, vs], [vtt, vss])
}

/// `max |(v_tt + v_ss)/4 + sinh(2v)/2|` over interior nodes, by differences.
pub fn sg_residual(f: &SGField) -> Result<f64> {
    f.check_size()?;
    let mut worst: f64 = 0.0;
    for (i, j) in f.interior() {
        let (_, [vtt, vss]) = derivatives(f, &f.values, i, j);
        let v = f.at(i, j);
        worst = worst.max((0.25 * (vtt + vss) + 0.5 * (2.0 * v).sinh()).abs());
    }
    Ok(worst)
}

/// Same residual with exact derivatives of a closed-form `v`, at given points.
pub fn sg_residual_analytic(
    v: impl Fn(Dual2, Dual2) -> Dual2,
    points: impl IntoIterator<Item = (f64, f64)>,
) -> f64 {
    points
        .into_iter()
        .map(|(t, s)| {
            let (a, b) = Dual2::params(t, s);
            let x = v(a, b);
            (0.25 * (x.h[0] + x.h[2]) + 0.5 * (2.0 * x.v).sinh()).abs()
        })
        .fold(0.0, f64::max)
}

/// `v(t) = log(√3 dn(√3 t))` with modulus `2√2/3`.
pub fn lawson_solution<S: Scalar>(t: S) -> S {
    let r3 = 3f64.sqrt();
    let (_, _, dn) = (t * r3).jacobi(EllipticModulus::klein());
    (dn * r3).ln()
}

/// Period `2K/√3` of [`lawson_solution`].
pub fn lawson_period() -> f64 {
    2.0 * complete_k(EllipticModulus::klein()) / 3f64.sqrt()
}

/// Conserved quantity `(v')²/2 + cosh 2v` of `v'' = −2 sinh 2v`.
pub fn first_integral(v: f64, dv: f64) -> f64 {
    0.5 * dv * dv + (2.0 * v).cosh()
}

/// Samples of a solution of the reduced equation `v'' = −2 sinh 2v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSolution {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub dv: Vec<f64>,
}

impl ReducedSolution {
    /// Largest deviation of the first integral from its initial value.
    pub fn first_integral_drift(&self) -> f64 {
        let e0 = first_integral(self.v[0], self.dv[0]);
        self.v
            .iter()
            .zip(&self.dv)
            .map(|(&v, &dv)| (first_integral(v, dv) - e0).abs())
            .fold(0.0, f64::max)
    }

    /// The samples as a one-row field (uniform spacing).
    pub fn field(&self) -> Result<SGField> {
        let dt = if self.t.len() > 1 { self.t[1] - self.t[0] } else { 1.0 };
        SGField::line(self.t[0], dt, self.v.clone())
    }
}

/// Classical fourth-order Runge–Kutta for `v'' = −2 sinh 2v` on `[0, T]`
/// with a step no larger than `h` (adjusted to land on `T`).
pub fn integrate_reduced(v0: f64, dv0: f64, t_end: f64, h: f64) -> Result<ReducedSolution> {
    if !(h > 0.0) || !(t_end > 0.0) || !h.is_finite() || !t_end.is_finite() {
        return Err(Error::Domain(format!("need h > 0 and T > 0, got h = {h}, T = {t_end}")));
    }
    let n = (t_end / h).ceil() as usize;
    let h = t_end / n as f64;
    let rhs = |v: f64, dv: f64| (dv, -2.0 * (2.0 * v).sinh());
    let mut out = ReducedSolution {
        t: Vec::with_capacity(n + 1),
        v: Vec::with_capacity(n + 1),
        dv: Vec::with_capacity(n + 1),
    };
    let (mut v, mut dv) = (v0, dv0);
    for k in 0..=n {
        let t = k as f64 * h;
        if !(v.abs() <= 50.0) {
            return Err(Error::Divergence { t, value: v.abs() });
        }
        out.t.push(t);
        out.v.push(v);
        out.dv.push(dv);
        if k == n {
            break;
        }
        let k1 = rhs(v, dv);
        let k2 = rhs(v + 0.5 * h * k1.0, dv + 0.5 * h * k1.1);
        let k3 = rhs(v + 0.5 * h * k2.0, dv + 0.5 * h * k2.1);
        let k4 = rhs(v + h * k3.0, dv + h * k3.1);
        v += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dv += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    Ok(out)
}

/// `(u, C)` grids rebuilt from `v` and the residuals of the two
/// compatibility equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub u: Vec<f64>,
    pub c: Vec<f64>,
    /// `max |2u_zz̄ + e^{2u}C² − e^{4u}|C_z|²/4|` over interior nodes.
    pub gauss_codazzi: f64,
    /// `max |1 − 4C² − 16e^{−4u}|`
    pub algebraic: f64,
}

impl Reconstruction {
    pub fn compat_residual(&self) -> f64 {
        self.gauss_codazzi.max(self.algebraic)
    }
}

pub fn reconstruct_u(v: f64) -> f64 {
    0.5 * (4.0 * (2.0 * v).cosh()).ln()
}

pub fn reconstruct_c(v: f64) -> f64 {
    0.5 * (2.0 * v).tanh()
}

pub fn reconstruct(f: &SGField) -> Result<Reconstruction> {
    f.check_size()?;
    let u: Vec<f64> = f.values.iter().map(|&v| reconstruct_u(v)).collect();
    let c: Vec<f64> = f.values.iter().map(|&v| reconstruct_c(v)).collect();
    let algebraic = u
        .iter()
        .zip(&c)
        .map(|(&u, &c)| (1.0 - 4.0 * c * c - 16.0 * (-4.0 * u).exp()).abs())
        .fold(0.0, f64::max);
    let mut gauss_codazzi: f64 = 0.0;
    for (i, j) in f.interior() {
        let (_, [utt, uss]) = derivatives(f, &u, i, j);
        let ([ct, cs], _) = derivatives(f, &c, i, j);
        let k = j * f.nt + i;
        let e2u = (2.0 * u[k]).exp();
        let r = 0.5 * (utt + uss) + e2u * c[k] * c[k] - e2u * e2u * (ct * ct + cs * cs) / 16.0;
        gauss_codazzi = gauss_codazzi.max(r.abs());
    }
    Ok(Reconstruction { u, c, gauss_codazzi, algebraic })
}

/// Writes `t,s,v,u,C` rows (`s`-major) at 17 significant digits.
pub fn write_csv<W: Write>(mut w: W, f: &SGField) -> std::io::Result<()> {
    writeln!(w, "t,s,v,u,C")?;
    for j in 0..f.ns {
        for i in 0..f.nt {
            let v = f.at(i, j);
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                f.t(i),
                f.s(j),
                v,
                reconstruct_u(v),
                reconstruct_c(v)
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_a_solution() {
        let f = SGField::sample(8, 8, (0.0, 0.1), (0.0, 0.1), true, |_, _| 0.0).unwrap();
        assert_eq!(sg_residual(&f).unwrap(), 0.0);
        let r = reconstruct(&f).unwrap();
        assert!(r.compat_residual() <= 8.0 * f64::EPSILON);
        assert!((r.u[0] - 0.5 * 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn constant_one_is_not() {
        let f = SGField::line(0.0, 0.1, vec![1.0; 16]).unwrap();
        assert!((sg_residual(&f).unwrap() - 2f64.sinh() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn tiny_grids_rejected() {
        let f = SGField::line(0.0, 0.1, vec![0.0; 3]).unwrap();
        assert!(matches!(sg_residual(&f), Err(Error::Domain(_))));
        assert!(SGField::line(0.0, 0.1, vec![f64::NAN; 8]).is_err());
    }

    #[test]
    fn equilibrium_stays_put() {
        let sol = integrate_reduced(0.0, 0.0, 1.0, 1e-3).unwrap();
        assert!(sol.v.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn blow_up_reported() {
        assert!(matches!(integrate_reduced(0.0, 1e6, 1.0, 1e-3), Err(Error::Divergence { .. })));
    }
}
