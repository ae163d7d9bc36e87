//! Truncated Taylor jets.
//!
//! A [`Jet`] of order `K` stores the normalized Taylor coefficients
//! `f(x), f'(x), f''(x)/2!, ..., f^(K)(x)/K!` of a scalar function at a point.
//! Arithmetic follows the truncated power-series rules exactly, so evaluating
//! any closed-form expression on [`Jet::variable`] yields its derivatives to
//! rounding error.
//!
//! The [`Scalar`] trait lets the same closed-form code run on plain `f64`
//! values and on jets.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest jet order supported by the fixed-size storage.
pub const MAX_JET_ORDER: usize = 11;

/// Default jet order for coefficient evaluation.
pub const DEFAULT_JET_ORDER: usize = 4;

const CAP: usize = MAX_JET_ORDER + 1;

#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [f64; CAP],
    order: usize,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("order", &self.order)
            .field("taylor", &self.taylor())
            .finish()
    }
}

impl Jet {
    /// Constant function of the given order.
    pub fn constant(value: f64, order: usize) -> Self {
        assert!(order <= MAX_JET_ORDER, "jet order {order} exceeds {MAX_JET_ORDER}");
        let mut coeffs = [0.0; CAP];
        coeffs[0] = value;
        Self { coeffs, order }
    }

    /// The independent variable `t -> t` expanded at `x`.
    pub fn variable(x: f64, order: usize) -> Self {
        let mut jet = Self::constant(x, order);
        if order >= 1 {
            jet.coeffs[1] = 1.0;
        }
        jet
    }

    /// Builds a jet from normalized Taylor coefficients; the order is `len - 1`.
    pub fn from_taylor(taylor: &[f64]) -> Self {
        assert!(!taylor.is_empty() && taylor.len() <= CAP);
        let mut coeffs = [0.0; CAP];
        coeffs[..taylor.len()].copy_from_slice(taylor);
        Self { coeffs, order: taylor.len() - 1 }
    }

    /// Builds a jet from derivative values `f, f', f'', ...`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        let mut taylor = derivs.to_vec();
        let mut fact = 1.0;
        for (k, t) in taylor.iter_mut().enumerate().skip(1) {
            fact *= k as f64;
            *t /= fact;
        }
        Self::from_taylor(&taylor)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Normalized Taylor coefficients `f^(k)/k!` for `k = 0..=order`.
    pub fn taylor(&self) -> &[f64] {
        &self.coeffs[..=self.order]
    }

    /// The `k`-th derivative, `k! * c_k`. Zero beyond the jet order.
    pub fn derivative(&self, k: usize) -> f64 {
        if k > self.order {
            return 0.0;
        }
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        fact * self.coeffs[k]
    }

    /// Jet of the derivative function, one order lower.
    ///
    /// Panics on an order-zero jet.
    pub fn differentiate(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let mut coeffs = [0.0; CAP];
        for k in 0..self.order {
            coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Self { coeffs, order: self.order - 1 }
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut coeffs = [0.0; CAP];
        coeffs[..=order].copy_from_slice(&self.coeffs[..=order]);
        Self { coeffs, order }
    }

    /// A constant carrying this jet's order.
    pub fn lift(&self, value: f64) -> Self {
        Self::constant(value, self.order)
    }

    pub fn is_finite(&self) -> bool {
        self.taylor().iter().all(|c| c.is_finite())
    }

    pub fn recip(self) -> Self {
        self.lift(1.0) / self
    }

    pub fn exp(self) -> Self {
        let f = &self.coeffs;
        let mut e = [0.0; CAP];
        e[0] = f[0].exp();
        for k in 1..=self.order {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * f[j] * e[k - j];
            }
            e[k] = s / k as f64;
        }
        Self { coeffs: e, order: self.order }
    }

    pub fn ln(self) -> Self {
        let f = &self.coeffs;
        let mut l = [0.0; CAP];
        l[0] = f[0].ln();
        for k in 1..=self.order {
            let mut s = 0.0;
            for j in 1..k {
                s += j as f64 * l[j] * f[k - j];
            }
            l[k] = (f[k] - s / k as f64) / f[0];
        }
        Self { coeffs: l, order: self.order }
    }

    /// Real power `f^p`; requires `f(x) > 0` unless `p` is an integer.
    pub fn powf(self, p: f64) -> Self {
        if p.fract() == 0.0 && p.abs() < 64.0 {
            return self.powi(p as i32);
        }
        let f = &self.coeffs;
        let mut g = [0.0; CAP];
        g[0] = f[0].powf(p);
        for k in 1..=self.order {
            let mut s = 0.0;
            for j in 1..=k {
                s += ((p + 1.0) * j as f64 - k as f64) * f[j] * g[k - j];
            }
            g[k] = s / (k as f64 * f[0]);
        }
        Self { coeffs: g, order: self.order }
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = self.lift(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; CAP];
        for k in 0..=order {
            coeffs[k] = self.coeffs[k] + rhs.coeffs[k];
        }
        Jet { coeffs, order }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; CAP];
        for k in 0..=order {
            coeffs[k] = self.coeffs[k] - rhs.coeffs[k];
        }
        Jet { coeffs, order }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut coeffs = [0.0; CAP];
        for k in 0..=order {
            let mut s = 0.0;
            for j in 0..=k {
                s += self.coeffs[j] * rhs.coeffs[k - j];
            }
            coeffs[k] = s;
        }
        Jet { coeffs, order }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let g = &rhs.coeffs;
        let mut q = [0.0; CAP];
        for k in 0..=order {
            let mut s = self.coeffs[k];
            for j in 1..=k {
                s -= g[j] * q[k - j];
            }
            q[k] = s / g[0];
        }
        Jet { coeffs: q, order }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        for c in self.coeffs[..=self.order].iter_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self * rhs.recip()
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Div<Jet> for f64 {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        rhs.lift(self) / rhs
    }
}

/// Numbers closed-form expressions can be evaluated on: `f64` or [`Jet`].
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
{
    fn value(&self) -> f64;
    /// A constant of the same kind (and jet order) as `self`.
    fn lift(&self, c: f64) -> Self;
    fn recip(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn powf(self, p: f64) -> Self;
    fn powi(self, n: i32) -> Self;
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn lift(&self, c: f64) -> Self {
        c
    }
    fn recip(self) -> Self {
        f64::recip(self)
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
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

impl Scalar for Jet {
    fn value(&self) -> f64 {
        Jet::value(self)
    }
    fn lift(&self, c: f64) -> Self {
        Jet::lift(self, c)
    }
    fn recip(self) -> Self {
        Jet::recip(self)
    }
    fn exp(self) -> Self {
        Jet::exp(self)
    }
    fn ln(self) -> Self {
        Jet::ln(self)
    }
    fn sqrt(self) -> Self {
        Jet::sqrt(self)
    }
    fn powf(self, p: f64) -> Self {
        Jet::powf(self, p)
    }
    fn powi(self, n: i32) -> Self {
        Jet::powi(self, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn variable_has_unit_slope() {
        let x = Jet::variable(1.5, 4);
        assert_eq!(x.value(), 1.5);
        assert_eq!(x.derivative(1), 1.0);
        assert_eq!(x.derivative(2), 0.0);
    }

    #[test]
    fn polynomial_derivatives_are_exact() {
        // f = x^3 - 2x at x = 2: f = 4, f' = 10, f'' = 12, f''' = 6
        let x = Jet::variable(2.0, 4);
        let f = x * x * x - x * 2.0;
        assert_eq!(f.value(), 4.0);
        assert_eq!(f.derivative(1), 10.0);
        assert_eq!(f.derivative(2), 12.0);
        assert_eq!(f.derivative(3), 6.0);
        assert_eq!(f.derivative(4), 0.0);
    }

    #[test]
    fn exp_ln_and_division() {
        let x = Jet::variable(0.7, 5);
        let e = x.exp();
        for k in 0..=5 {
            assert!(close(e.derivative(k), 0.7f64.exp(), 1e-14));
        }
        let l = x.ln();
        // d^k/dx^k ln x = (-1)^(k-1) (k-1)! / x^k
        let mut fact = 1.0;
        for k in 1..=5 {
            let expect = if k % 2 == 1 { 1.0 } else { -1.0 } * fact / 0.7f64.powi(k as i32);
            assert!(close(l.derivative(k), expect, 1e-12));
            fact *= k as f64;
        }
        let r = 1.0 / x;
        assert!(close(r.derivative(2), 2.0 / 0.7f64.powi(3), 1e-13));
    }

    #[test]
    fn powf_matches_power_rule() {
        let x = Jet::variable(1.3, 4);
        let p = 2.7;
        let f = x.powf(p);
        let expect = [
            1.3f64.powf(p),
            p * 1.3f64.powf(p - 1.0),
            p * (p - 1.0) * 1.3f64.powf(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * 1.3f64.powf(p - 3.0),
        ];
        for (k, e) in expect.iter().enumerate() {
            assert!(close(f.derivative(k), *e, 1e-13), "k = {k}");
        }
    }

    #[test]
    fn powi_handles_negative_exponent() {
        let x = Jet::variable(-2.0, 3);
        let f = x.powi(-2);
        assert!(close(f.value(), 0.25, 1e-15));
        assert!(close(f.derivative(1), -2.0 * (-2.0f64).powi(-3), 1e-15));
        assert!(close(f.derivative(2), 6.0 * (-2.0f64).powi(-4), 1e-15));
    }

    #[test]
    fn differentiate_shifts_orders() {
        let x = Jet::variable(0.5, 4);
        let f = x.exp() * x;
        let df = f.differentiate();
        assert_eq!(df.order(), 3);
        for k in 0..=3 {
            assert!(close(df.derivative(k), f.derivative(k + 1), 1e-14));
        }
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = Jet::variable(1.0, 5);
        let b = Jet::variable(1.0, 2);
        assert_eq!((a * b).order(), 2);
        assert_eq!((a + b).order(), 2);
    }

    #[test]
    fn from_derivatives_round_trips() {
        let j = Jet::from_derivatives(&[1.0, 2.0, 6.0, 24.0]);
        assert_eq!(j.taylor(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(j.derivative(3), 24.0);
    }
}
