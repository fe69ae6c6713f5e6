//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! All routines use the *modulus* convention: `K(p) = ∫₀^{π/2} dθ/√(1 − p² sin²θ)`.
//! Callers holding the parameter `m = p²` must take the square root first.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Descending-modulus threshold for the AGM / Landen iterations.
const LANDEN_EPS: f64 = 1e-14;
/// Hard cap on AGM steps; convergence is quadratic so this is never reached
/// for moduli below 1.
const MAX_AGM_STEPS: usize = 64;

/// Elliptic modulus `p ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "elliptic modulus must lie in [0, 1), got {p}"
            )));
        }
        Ok(Self(p))
    }

    /// The modulus `2√2/3` of the Klein bottle and Lawson's τ₃,₁ torus.
    pub fn klein() -> Self {
        Self(2.0 * std::f64::consts::SQRT_2 / 3.0)
    }

    #[inline]
    pub fn p(self) -> f64 {
        self.0
    }

    /// Complementary modulus `p' = √(1 − p²)`.
    #[inline]
    pub fn complementary(self) -> f64 {
        (1.0 - self.0 * self.0).sqrt()
    }
}

/// Values of the three amplitude functions at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Arithmetic–geometric mean sequence `(a_n, b_n, c_n)` started from `(1, p', p)`.
fn agm_sequence(m: EllipticModulus) -> Vec<(f64, f64, f64)> {
    let mut seq = Vec::with_capacity(8);
    let (mut a, mut b, mut c) = (1.0_f64, m.complementary(), m.p());
    seq.push((a, b, c));
    while c.abs() >= LANDEN_EPS && seq.len() < MAX_AGM_STEPS {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c = 0.5 * (a - b);
        a = a_next;
        b = b_next;
        seq.push((a, b, c));
    }
    seq
}

/// Complete elliptic integral of the first kind, `K(p) = π / (2 AGM(1, p'))`.
pub fn complete_k(m: EllipticModulus) -> f64 {
    let seq = agm_sequence(m);
    let a = seq.last().map(|s| s.0).unwrap_or(1.0);
    FRAC_PI_2 / a
}

/// Complete elliptic integral of the second kind via the AGM with the
/// Gauss correction series `E = K (1 − Σ 2^{n−1} c_n²)`.
pub fn complete_e(m: EllipticModulus) -> f64 {
    let seq = agm_sequence(m);
    let a = seq.last().map(|s| s.0).unwrap_or(1.0);
    let k = FRAC_PI_2 / a;
    let mut weight = 0.5;
    let mut sum = 0.0;
    for &(_, _, c) in &seq {
        sum += weight * c * c;
        weight *= 2.0;
    }
    k * (1.0 - sum)
}

/// `(sn, cn, dn)` at `x` by the descending Landen transformation.
pub fn jacobi(x: f64, m: EllipticModulus) -> JacobiTriple {
    let seq = agm_sequence(m);
    let n = seq.len() - 1;
    if n == 0 {
        let (s, c) = x.sin_cos();
        return JacobiTriple { sn: s, cn: c, dn: 1.0 };
    }
    // φ_N = 2^N a_N x, then φ_{k-1} = (φ_k + asin(c_k sin φ_k / a_k)) / 2.
    let mut phi = x * seq[n].0 * (1u64 << n) as f64;
    for k in (1..=n).rev() {
        let (a, _, c) = seq[k];
        phi = 0.5 * (phi + (c * phi.sin() / a).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn ≥ p' > 0 on the real line, so the square root has no cancellation;
    // the Landen ratio cn / cos(φ₁ − φ₀) is 0/0 at odd multiples of K.
    let p = m.p();
    let dn = (1.0 - p * p * sn * sn).sqrt();
    JacobiTriple { sn, cn, dn }
}

/// Closed-form first derivatives `(cn·dn, −sn·dn, −p²·sn·cn)`.
pub fn jacobi_derivatives(x: f64, m: EllipticModulus) -> (f64, f64, f64) {
    let JacobiTriple { sn, cn, dn } = jacobi(x, m);
    let p2 = m.p() * m.p();
    (cn * dn, -sn * dn, -p2 * sn * cn)
}
