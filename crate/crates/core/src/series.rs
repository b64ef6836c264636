//! Truncated q-series with exact rational coefficients.
//!
//! Exponents are stored in half units: the key `n` stands for `q^{n/2}`, so
//! series in `q^{1/2}` and in `q` share one ring. Coefficients at half
//! exponents `>= trunc` are unknown and never reported.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{format_rational, int, Coeff, PowerSeries, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    coeffs: BTreeMap<u32, Rational>,
    trunc: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QSeries {
    pub fn zero(trunc: u32) -> Self {
        QSeries {
            coeffs: BTreeMap::new(),
            trunc,
        }
    }

    pub fn constant(r: Rational, trunc: u32) -> Self {
        Self::monomial(0, r, trunc)
    }

    pub fn one(trunc: u32) -> Self {
        Self::constant(int(1), trunc)
    }

    /// `c * q^{half_exp/2}`, or zero when the exponent is beyond truncation.
    pub fn monomial(half_exp: u32, c: Rational, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        if half_exp < trunc && !c.is_zero() {
            s.coeffs.insert(half_exp, c);
        }
        s
    }

    /// Builds from (half exponent, coefficient) pairs; repeated exponents add.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Rational)>, trunc: u32) -> Self {
        let mut dense = vec![Rational::zero(); trunc as usize];
        for (e, c) in terms {
            if e < trunc {
                dense[e as usize] += c;
            }
        }
        Self::from_dense(dense, trunc)
    }

    pub fn from_dense(dense: Vec<Rational>, trunc: u32) -> Self {
        let coeffs = dense
            .into_iter()
            .take(trunc as usize)
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c))
            .collect();
        QSeries { coeffs, trunc }
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut dense = vec![Rational::zero(); self.trunc as usize];
        for (&e, c) in &self.coeffs {
            dense[e as usize] = c.clone();
        }
        dense
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    /// Coefficient of `q^{half_exp/2}`; `None` when the exponent is at or
    /// beyond the truncation and therefore unknown.
    pub fn coeff(&self, half_exp: u32) -> Option<Rational> {
        if half_exp >= self.trunc {
            return None;
        }
        Some(self.coeffs.get(&half_exp).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0).unwrap_or_else(Rational::zero)
    }

    /// Stored (nonzero) terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when only integer powers of q occur.
    pub fn has_integer_powers_only(&self) -> bool {
        self.coeffs.keys().all(|e| e % 2 == 0)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Drops everything at half exponents `>= trunc`; `trunc` may only shrink.
    pub fn truncate(&self, trunc: u32) -> Self {
        let trunc = trunc.min(self.trunc);
        QSeries {
            coeffs: self.coeffs.range(..trunc).map(|(&e, c)| (e, c.clone())).collect(),
            trunc,
        }
    }

    /// Substitutes `q^{1/2} -> -q^{1/2}` (negates odd half exponents).
    pub fn flip_half(&self) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e, if e % 2 == 1 { -c } else { c.clone() }))
                .collect(),
            trunc: self.trunc,
        }
    }

    fn check_trunc(&self, rhs: &Self) -> Result<()> {
        if self.trunc != rhs.trunc {
            return Err(Error::TruncMismatch {
                left: self.trunc,
                right: rhs.trunc,
            });
        }
        Ok(())
    }

    /// Exact truncated ring arithmetic; both operands must share `trunc`.
    pub fn arith(&self, rhs: &Self, op: SeriesOp) -> Result<Self> {
        self.check_trunc(rhs)?;
        Ok(match op {
            SeriesOp::Add => self.add(rhs),
            SeriesOp::Sub => self.sub(rhs),
            SeriesOp::Mul => self.mul(rhs),
            SeriesOp::Div => self.mul(&rhs.inverse()?),
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut coeffs: BTreeMap<u32, Rational> = self.coeffs.range(..trunc).map(|(&e, c)| (e, c.clone())).collect();
        for (&e, c) in rhs.coeffs.range(..trunc) {
            let entry = coeffs.entry(e).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&e);
            }
        }
        QSeries { coeffs, trunc }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale_by(&int(-1)))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(trunc);
        }
        let mut dense = vec![Rational::zero(); trunc as usize];
        for (&ea, ca) in self.coeffs.range(..trunc) {
            for (&eb, cb) in rhs.coeffs.range(..trunc - ea) {
                dense[(ea + eb) as usize] += ca * cb;
            }
        }
        Self::from_dense(dense, trunc)
    }

    pub fn scale_by(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.trunc);
        }
        QSeries {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * r)).collect(),
            trunc: self.trunc,
        }
    }

    fn to_power_series(&self) -> PowerSeries<Rational> {
        PowerSeries::from_coeffs(self.to_dense(), self.trunc as usize - 1, ())
    }

    fn from_power_series(p: &PowerSeries<Rational>, trunc: u32) -> Self {
        Self::from_dense(p.coeffs().to_vec(), trunc)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.trunc == 0 {
            return Ok(self.clone());
        }
        let inv = self.to_power_series().inverse()?;
        Ok(Self::from_power_series(&inv, self.trunc))
    }

    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != int(1) || self.trunc == 0 {
            return Err(Error::NonUnitLog);
        }
        Ok(Self::from_power_series(&self.to_power_series().log()?, self.trunc))
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonNilpotentExp);
        }
        if self.trunc == 0 {
            return Ok(self.clone());
        }
        Ok(Self::from_power_series(&self.to_power_series().exp()?, self.trunc))
    }

    /// `sum c_n q^{n/2}` in double precision, with `q^{1/2}` the principal root.
    pub fn eval(&self, q: Complex64) -> Result<Complex64> {
        if q.norm() >= 1.0 || !q.norm().is_finite() {
            return Err(Error::DivergentEvaluation(q.norm()));
        }
        let root = q.sqrt();
        let mut total = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut at = 0u32;
        for (&e, c) in &self.coeffs {
            while at < e {
                pow *= root;
                at += 1;
            }
            total += pow * c.to_f64().unwrap_or(f64::NAN);
        }
        Ok(total)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = format_rational(c);
            match e {
                0 => write!(f, "{c}")?,
                2 => write!(f, "({c})q")?,
                e if e % 2 == 0 => write!(f, "({c})q^{}", e / 2)?,
                e => write!(f, "({c})q^({e}/2)")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.trunc % 2 == 0 {
            write!(f, " + O(q^{})", self.trunc / 2)
        } else {
            write!(f, " + O(q^({}/2))", self.trunc)
        }
    }
}

impl Coeff for QSeries {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.trunc
    }

    fn constant(r: &Rational, trunc: u32) -> Self {
        QSeries::constant(r.clone(), trunc)
    }

    fn is_zero_elem(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn plus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.trunc, rhs.trunc);
        self.add(rhs)
    }

    fn minus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.trunc, rhs.trunc);
        self.sub(rhs)
    }

    fn times(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.trunc, rhs.trunc);
        self.mul(rhs)
    }

    fn scale(&self, r: &Rational) -> Self {
        self.scale_by(r)
    }

    fn try_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn q(terms: &[(u32, i64)], trunc: u32) -> QSeries {
        QSeries::from_terms(terms.iter().map(|&(e, c)| (e, int(c))), trunc)
    }

    #[test]
    fn difference_of_squares() {
        let a = q(&[(0, 1), (2, 1)], 6);
        let b = q(&[(0, 1), (2, -1)], 6);
        let p = a.arith(&b, SeriesOp::Mul).unwrap();
        let stored: Vec<_> = p.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(stored, vec![(0, int(1)), (4, int(-1))]);
    }

    #[test]
    fn geometric_division() {
        // trunc q^3 is half exponent 6
        let one = QSeries::one(6);
        let d = q(&[(0, 1), (2, -1)], 6);
        let r = one.arith(&d, SeriesOp::Div).unwrap();
        assert_eq!(r, q(&[(0, 1), (2, 1), (4, 1)], 6));
    }

    #[test]
    fn arith_errors() {
        let a = QSeries::one(6);
        assert_eq!(
            a.arith(&QSeries::one(8), SeriesOp::Add),
            Err(Error::TruncMismatch { left: 6, right: 8 })
        );
        assert_eq!(a.arith(&q(&[(2, 1)], 6), SeriesOp::Div), Err(Error::NonUnitDivisor));
    }

    #[test]
    fn log_and_exp_examples() {
        assert!(QSeries::one(10).log().unwrap().is_zero());
        let l = q(&[(0, 1), (2, -1)], 6).log().unwrap();
        assert_eq!(l, QSeries::from_terms([(2, int(-1)), (4, rat(-1, 2))], 6));
        let e = q(&[(2, 1)], 6).exp().unwrap();
        assert_eq!(e, QSeries::from_terms([(0, int(1)), (2, int(1)), (4, rat(1, 2))], 6));
        let back = QSeries::from_terms([(2, int(-1)), (4, rat(-1, 2))], 6).exp().unwrap();
        assert_eq!(back, q(&[(0, 1), (2, -1)], 6));
        let f = q(&[(0, 1), (2, 240)], 10);
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
        assert!(QSeries::zero(4).exp().unwrap().is_one_elem());
    }

    #[test]
    fn log_exp_errors() {
        assert_eq!(q(&[(0, 2)], 4).log(), Err(Error::NonUnitLog));
        assert_eq!(q(&[(0, 1)], 4).exp(), Err(Error::NonNilpotentExp));
    }

    #[test]
    fn numeric_evaluation() {
        let seven = QSeries::constant(int(7), 10);
        assert_eq!(seven.eval(Complex64::new(0.1, 0.0)).unwrap(), Complex64::new(7.0, 0.0));
        let a = q(&[(0, 1), (2, 1)], 10);
        assert!((a.eval(Complex64::new(0.25, 0.0)).unwrap().re - 1.25).abs() < 1e-15);
        let h = q(&[(1, 1)], 10);
        assert!((h.eval(Complex64::new(0.25, 0.0)).unwrap().re - 0.5).abs() < 1e-15);
        assert!(matches!(a.eval(Complex64::new(1.0, 0.0)), Err(Error::DivergentEvaluation(_))));
    }

    #[test]
    fn never_reports_beyond_truncation() {
        let a = q(&[(0, 1), (5, 3), (9, 4)], 6);
        assert_eq!(a.coeff(5), Some(int(3)));
        assert_eq!(a.coeff(6), None);
        assert_eq!(a.terms().count(), 2);
    }

    #[test]
    fn display() {
        let a = QSeries::from_terms([(0, int(2)), (1, rat(1, 2)), (2, int(-48))], 6);
        assert_eq!(a.to_string(), "2 + (1/2)q^(1/2) + (-48)q + O(q^3)");
    }
}
