//! Coefficient rings and dense one-variable truncated power series over them.
//!
//! Two coefficient rings are used throughout the crate: exact rationals and
//! [`QSeries`](crate::series::QSeries). The [`Coeff`] trait is the small
//! amount of ring structure the engines need; [`PowerSeries`] is a dense
//! truncated series `c_0 + c_1 t + ... + c_cap t^cap` over any such ring.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `n` for integers and `n/d` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// The ring operations the series and class engines rely on.
///
/// `Ctx` carries whatever a ring element needs beyond its value to build
/// constants (the truncation order for q-series, nothing for rationals).
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    type Ctx: Copy + PartialEq + fmt::Debug;

    fn ctx(&self) -> Self::Ctx;
    fn constant(r: &Rational, ctx: Self::Ctx) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn try_inverse(&self) -> Option<Self>;

    fn zero_in(ctx: Self::Ctx) -> Self {
        Self::constant(&Rational::zero(), ctx)
    }

    fn one_in(ctx: Self::Ctx) -> Self {
        Self::constant(&Rational::one(), ctx)
    }

    fn negate(&self) -> Self {
        self.scale(&-Rational::one())
    }

    fn is_one_elem(&self) -> bool {
        *self == Self::one_in(self.ctx())
    }
}

impl Coeff for Rational {
    type Ctx = ();

    fn ctx(&self) {}

    fn constant(r: &Rational, _: ()) -> Self {
        r.clone()
    }

    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Dense truncated power series `sum_{i <= cap} c_i t^i`.
#[derive(Clone, PartialEq, Debug)]
pub struct PowerSeries<C: Coeff> {
    coeffs: Vec<C>,
    ctx: C::Ctx,
}

impl<C: Coeff> PowerSeries<C> {
    pub fn zero(cap: usize, ctx: C::Ctx) -> Self {
        PowerSeries {
            coeffs: vec![C::zero_in(ctx); cap + 1],
            ctx,
        }
    }

    pub fn one(cap: usize, ctx: C::Ctx) -> Self {
        let mut s = Self::zero(cap, ctx);
        s.coeffs[0] = C::one_in(ctx);
        s
    }

    /// Builds a series from leading coefficients; missing ones are zero and
    /// extra ones beyond `cap` are dropped.
    pub fn from_coeffs(coeffs: Vec<C>, cap: usize, ctx: C::Ctx) -> Self {
        let mut s = Self::zero(cap, ctx);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn from_fn(cap: usize, ctx: C::Ctx, f: impl Fn(usize) -> C) -> Self {
        PowerSeries {
            coeffs: (0..=cap).map(f).collect(),
            ctx,
        }
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, c: C) {
        self.coeffs[i] = c;
    }

    pub fn map<D: Coeff>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> PowerSeries<D> {
        PowerSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            ctx,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let cap = self.cap().min(rhs.cap());
        Self::from_fn(cap, self.ctx, |i| self.coeffs[i].plus(&rhs.coeffs[i]))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let cap = self.cap().min(rhs.cap());
        Self::from_fn(cap, self.ctx, |i| self.coeffs[i].minus(&rhs.coeffs[i]))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_fn(self.cap(), self.ctx, |i| self.coeffs[i].scale(r))
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        Self::from_fn(self.cap(), self.ctx, |i| self.coeffs[i].times(c))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let cap = self.cap().min(rhs.cap());
        let mut out = Self::zero(cap, self.ctx);
        for (i, a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(cap + 1 - i) {
                if b.is_zero_elem() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].plus(&a.times(b));
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].try_inverse().ok_or(Error::NonUnitDivisor)?;
        let cap = self.cap();
        let mut out = Self::zero(cap, self.ctx);
        out.coeffs[0] = inv0.clone();
        for n in 1..=cap {
            let mut acc = C::zero_in(self.ctx);
            for k in 1..=n {
                if self.coeffs[k].is_zero_elem() {
                    continue;
                }
                acc = acc.plus(&self.coeffs[k].times(&out.coeffs[n - k]));
            }
            out.coeffs[n] = acc.times(&inv0).negate();
        }
        Ok(out)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// Logarithm of a series with constant term exactly one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one_elem() {
            return Err(Error::NonUnitLog);
        }
        let cap = self.cap();
        let mut out = Self::zero(cap, self.ctx);
        // n L_n = n f_n - sum_{k=1}^{n-1} k L_k f_{n-k}
        for n in 1..=cap {
            let mut acc = self.coeffs[n].scale(&int(n as i64));
            for k in 1..n {
                if out.coeffs[k].is_zero_elem() || self.coeffs[n - k].is_zero_elem() {
                    continue;
                }
                acc = acc.minus(&out.coeffs[k].times(&self.coeffs[n - k]).scale(&int(k as i64)));
            }
            out.coeffs[n] = acc.scale(&rat(1, n as i64));
        }
        Ok(out)
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero_elem() {
            return Err(Error::NonNilpotentExp);
        }
        let cap = self.cap();
        let mut out = Self::one(cap, self.ctx);
        // n E_n = sum_{k=1}^{n} k a_k E_{n-k}
        for n in 1..=cap {
            let mut acc = C::zero_in(self.ctx);
            for k in 1..=n {
                if self.coeffs[k].is_zero_elem() {
                    continue;
                }
                acc = acc.plus(&self.coeffs[k].times(&out.coeffs[n - k]).scale(&int(k as i64)));
            }
            out.coeffs[n] = acc.scale(&rat(1, n as i64));
        }
        Ok(out)
    }

    /// True when every odd-index coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.first_odd_nonzero().is_none()
    }

    pub fn first_odd_nonzero(&self) -> Option<usize> {
        (1..self.coeffs.len())
            .step_by(2)
            .find(|&i| !self.coeffs[i].is_zero_elem())
    }
}

impl PowerSeries<Rational> {
    /// `exp(a t)` truncated at `cap`.
    pub fn exp_linear(a: &Rational, cap: usize) -> Self {
        Self::from_fn(cap, (), |n| {
            let mut c = Rational::one();
            for _ in 0..n {
                c *= a;
            }
            c / Rational::from_integer(factorial(n as u32))
        })
    }

    /// `sinh(t)/t` truncated at `cap`.
    pub fn sinh_over_t(cap: usize) -> Self {
        Self::from_fn(cap, (), |n| {
            if n % 2 == 1 {
                Rational::zero()
            } else {
                Rational::new(BigInt::one(), factorial(n as u32 + 1))
            }
        })
    }

    /// `cosh(t)` truncated at `cap`.
    pub fn cosh(cap: usize) -> Self {
        Self::from_fn(cap, (), |n| {
            if n % 2 == 1 {
                Rational::zero()
            } else {
                Rational::new(BigInt::one(), factorial(n as u32))
            }
        })
    }

    /// Substitutes `t -> a t`.
    pub fn rescale(&self, a: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = &*c * &pow;
            pow *= a;
        }
        out
    }

    pub fn is_nonneg_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[i64]) -> PowerSeries<Rational> {
        PowerSeries::from_coeffs(v.iter().map(|&x| int(x)).collect(), v.len() - 1, ())
    }

    #[test]
    fn geometric_inverse() {
        let inv = ps(&[1, -1, 0, 0]).inverse().unwrap();
        assert_eq!(inv, ps(&[1, 1, 1, 1]));
    }

    #[test]
    fn log_exp_inverse_pair() {
        let f = ps(&[1, 3, -2, 7, 5]);
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
        assert_eq!(ps(&[0, 1, 0]).exp().unwrap().coeff(2), &rat(1, 2));
    }

    #[test]
    fn errors() {
        assert_eq!(ps(&[0, 1]).inverse(), Err(Error::NonUnitDivisor));
        assert_eq!(ps(&[2, 1]).log(), Err(Error::NonUnitLog));
        assert_eq!(ps(&[1, 1]).exp(), Err(Error::NonNilpotentExp));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&rat(-48, 1)), "-48");
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(parse_rational("3/2"), Some(rat(3, 2)));
        assert_eq!(parse_rational(" -7 "), Some(int(-7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn elementary_series() {
        let e = PowerSeries::exp_linear(&int(-1), 3);
        assert_eq!(e.coeffs(), &[int(1), int(-1), rat(1, 2), rat(-1, 6)]);
        let s = PowerSeries::sinh_over_t(4);
        assert_eq!(s.coeffs(), &[int(1), int(0), rat(1, 6), int(0), rat(1, 120)]);
    }
}
