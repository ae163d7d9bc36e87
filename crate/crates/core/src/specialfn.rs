//! Gamma function, Pochhammer symbols, terminating Kummer series and
//! associated Laguerre polynomials.
//!
//! Polynomial evaluations use finite sums and recurrences only; Gamma
//! quotients appear in normalization constants and in the unit-argument
//! Gauss series.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Scalar;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

fn lanczos_gamma(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((x + 0.5) * t.ln() - t).exp() * sum
}

pub fn gamma_fn(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::PoleAtNonPositiveInteger(x));
    }
    if x.fract() == 0.0 && x <= 171.0 {
        // exact factorial for integer arguments
        let mut f = 1.0;
        for k in 2..(x as u64) {
            f *= k as f64;
        }
        return Ok(f);
    }
    if x < 0.5 {
        Ok(PI / ((PI * x).sin() * lanczos_gamma(1.0 - x)))
    } else {
        Ok(lanczos_gamma(x))
    }
}

/// `1/Gamma(x)`, which is entire: zero at the non-positive integers.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        gamma_fn(x).map(f64::recip).unwrap_or(0.0)
    }
}

/// Rising factorial `(s)_n = s (s+1) ... (s+n-1)`.
pub fn pochhammer(s: f64, n: usize) -> f64 {
    (0..n).map(|k| s + k as f64).product()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// A degree-`n` terminating confluent hypergeometric series `1F1(-n; gamma; y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KummerPoly {
    pub n: usize,
    pub gamma: f64,
}

impl KummerPoly {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::InvalidParameter(format!("Kummer lower parameter {gamma} must be positive")));
        }
        Ok(Self { n, gamma })
    }

    pub fn eval<T: Scalar>(&self, y: T) -> T {
        kummer_generic(self.n, self.gamma, y)
    }

    /// Power-series coefficients `(-n)_k / ((gamma)_k k!)`, `k = 0..=n`.
    pub fn coefficients(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n + 1);
        let mut t = 1.0;
        out.push(t);
        for k in 1..=self.n {
            let kf = k as f64;
            t *= (kf - 1.0 - self.n as f64) / ((self.gamma + kf - 1.0) * kf);
            out.push(t);
        }
        out
    }
}

pub fn kummer(n: usize, gamma: f64, y: f64) -> f64 {
    kummer_generic(n, gamma, y)
}

/// Finite-sum evaluation with the running-term recurrence
/// `t_k = t_{k-1} (k - 1 - n) y / ((gamma + k - 1) k)`.
pub fn kummer_generic<T: Scalar>(n: usize, gamma: f64, y: T) -> T {
    let mut term = y.lift(1.0);
    let mut sum = term;
    for k in 1..=n {
        let kf = k as f64;
        term = term * y * ((kf - 1.0 - n as f64) / ((gamma + kf - 1.0) * kf));
        sum = sum + term;
    }
    sum
}

pub fn laguerre(n: usize, beta: f64, t: f64) -> f64 {
    laguerre_generic(n, beta, t)
}

/// Associated Laguerre polynomial `L_n^beta(t)` by the three-term recurrence.
pub fn laguerre_generic<T: Scalar>(n: usize, beta: f64, t: T) -> T {
    let l0 = t.lift(1.0);
    if n == 0 {
        return l0;
    }
    let mut prev = l0;
    let mut cur = -t + (beta + 1.0);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((-t + (2.0 * kf - 1.0 + beta)) * cur - prev * (kf - 1.0 + beta)) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gauss series at unit argument by the Chu-Vandermonde closed form
/// `Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))`.
///
/// Poles in the denominator give zero; poles in the numerator are rejected.
pub fn gauss2f1_unit(a: f64, b: f64, c: f64) -> Result<f64> {
    if is_nonpositive_integer(c) || is_nonpositive_integer(c - a - b) {
        return Err(Error::PoleConfiguration { a, b, c });
    }
    if a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    let num = gamma_fn(c)? * gamma_fn(c - a - b)?;
    Ok(num * reciprocal_gamma(c - a) * reciprocal_gamma(c - b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    #[test]
    fn gamma_classical_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-15);
        assert!(rel(gamma_fn(2.5).unwrap(), 1.5 * 0.5 * PI.sqrt()) < 1e-14);
        assert!((gamma_fn(2.5).unwrap() - 1.329_340_388_2).abs() < 1e-10);
        assert_eq!(gamma_fn(6.0).unwrap(), 120.0);
    }

    #[test]
    fn gamma_poles_rejected() {
        assert_eq!(gamma_fn(0.0), Err(Error::PoleAtNonPositiveInteger(0.0)));
        assert!(gamma_fn(-3.0).is_err());
        assert!(gamma_fn(-2.5).is_ok());
    }

    #[test]
    fn gamma_half_integers_to_fifty() {
        // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!) built by the recurrence from sqrt(pi)
        let mut g = PI.sqrt();
        for k in 0..50 {
            let x = k as f64 + 0.5;
            let got = gamma_fn(x).unwrap();
            assert!((got - g).abs() <= 1e-13 * g, "x = {x}: {got} vs {g}");
            g *= x;
        }
    }

    #[test]
    fn gamma_recurrence_on_a_grid() {
        for i in 1..500 {
            let x = i as f64 * 0.0987;
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs(), "x = {x}");
        }
    }

    #[test]
    fn pochhammer_cases() {
        assert_eq!(pochhammer(7.3, 0), 1.0);
        assert_eq!(pochhammer(2.5, 2), 8.75);
        assert_eq!(pochhammer(-3.0, 5), 0.0);
        let q = gamma_fn(4.7).unwrap() / gamma_fn(1.7).unwrap();
        assert!(rel(pochhammer(1.7, 3), q) < 1e-13);
    }

    #[test]
    fn kummer_cases() {
        assert_eq!(kummer(0, 3.3, 17.0), 1.0);
        assert_eq!(kummer(1, 2.5, 2.5), 0.0);
        // 1 - 2/2.5 + 2/(2.5 * 3.5 * 2) = 1 - 4/5 + 4/35 = 11/35
        assert!((kummer(2, 2.5, 1.0) - 11.0 / 35.0).abs() < 1e-15);
        let poly = KummerPoly::new(2, 2.5).unwrap();
        assert_eq!(poly.coefficients(), vec![1.0, -0.8, 2.0 / (2.5 * 3.5 * 2.0)]);
        assert!(KummerPoly::new(1, 0.0).is_err());
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 0.3, 5.0), 1.0);
        assert_eq!(laguerre(1, 0.3, 5.0), 0.3 + 1.0 - 5.0);
        // L_2^b(t) = (t^2 - 2(b+2)t + (b+1)(b+2)) / 2
        let (b, t) = (1.5f64, 2.0f64);
        let want = (t * t - 2.0 * (b + 2.0) * t + (b + 1.0) * (b + 2.0)) / 2.0;
        assert!((laguerre(2, b, t) - want).abs() < 1e-14);
    }

    #[test]
    fn laguerre_kummer_cross_oracle() {
        let via_kummer = pochhammer(2.5, 3) / factorial(3) * kummer(3, 2.5, 2.0);
        assert!(rel(laguerre(3, 1.5, 2.0), via_kummer) < 1e-14);
    }

    #[test]
    fn laguerre_on_jets_differentiates() {
        // d/dt L_n^b = -L_{n-1}^{b+1}
        let t = Jet::variable(1.7, 2);
        let l = laguerre_generic(4, 0.8, t);
        assert!(rel(l.derivative(1), -laguerre(3, 1.8, 1.7)) < 1e-13);
    }

    #[test]
    fn chu_vandermonde_cases() {
        assert_eq!(gauss2f1_unit(0.0, 1.3, 2.2).unwrap(), 1.0);
        assert!((gauss2f1_unit(-1.0, 1.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        let g = 2.5;
        // terminating series at a = -2
        let mut series = 0.0;
        for k in 0..=2 {
            series += pochhammer(-2.0, k) * pochhammer(g + 1.0, k) / (pochhammer(g, k) * factorial(k));
        }
        assert!((gauss2f1_unit(-2.0, g + 1.0, g).unwrap() - series).abs() < 1e-12);
        assert!(gauss2f1_unit(1.0, 1.0, 2.0).is_err());
    }
}
