//! Eisenstein series, the E₄/E₆ decomposition of the Witten genus, and a
//! numeric check of the level-2 relation between Ell₁ and Ell₂.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::elliptic::{elliptic_genus, EllipticKind};
use crate::error::{Error, Result};
use crate::manifold::ManifoldData;
use crate::ring::{int, Rational};
use crate::series::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinKind {
    E4,
    E6,
}

impl fmt::Display for EisensteinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EisensteinKind::E4 => "E4",
            EisensteinKind::E6 => "E6",
        })
    }
}

impl FromStr for EisensteinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "E4" => Ok(EisensteinKind::E4),
            "E6" => Ok(EisensteinKind::E6),
            other => Err(Error::InvalidArgument(format!("unknown Eisenstein series `{other}`"))),
        }
    }
}

fn sigma(n: u32, power: u32) -> Rational {
    let total: num_bigint::BigInt = (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| num_bigint::BigInt::from(d).pow(power))
        .sum();
    Rational::from_integer(total)
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ` or `E₆ = 1 - 504 Σ σ₅(n) qⁿ`, with `trunc` in
/// half units like every [`QSeries`].
pub fn eisenstein(kind: EisensteinKind, trunc: u32) -> Result<QSeries> {
    if trunc < 2 {
        return Err(Error::InvalidArgument(format!("truncation {trunc} must be at least 2")));
    }
    let (c, power) = match kind {
        EisensteinKind::E4 => (240, 3),
        EisensteinKind::E6 => (-504, 5),
    };
    let terms = std::iter::once((0, int(1))).chain((1..).take_while(|n| 2 * n < trunc).map(|n| (2 * n, int(c) * sigma(n, power))));
    Ok(QSeries::from_terms(terms, trunc))
}

/// Exact decomposition `W(M) = Σ a_ij E₄^i E₆^j` over `4i + 6j = 2m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularFit {
    pub weight: u32,
    pub coefficients: BTreeMap<(u32, u32), Rational>,
    /// Every coefficient of the residual below `checked_order` vanishes.
    pub residual_ok: bool,
    /// Half-exponent truncation the residual was checked to.
    pub checked_order: u32,
    /// First nonzero residual coefficient as (half exponent, value).
    pub first_residual: Option<(u32, Rational)>,
}

/// `(i, j)` with `4i + 6j = weight`, in increasing `j`.
pub fn monomial_exponents(weight: u32) -> Vec<(u32, u32)> {
    (0..=weight / 6)
        .filter(|j| (weight - 6 * j) % 4 == 0)
        .map(|j| ((weight - 6 * j) / 4, j))
        .collect()
}

fn power(s: &QSeries, e: u32) -> QSeries {
    (0..e).fold(QSeries::one(s.trunc()), |acc, _| acc.mul(s))
}

/// Solves `A x = b` exactly; `None` when `A` is singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
                let sub = &f * &b[col];
                b[r] -= sub;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Fits the Witten genus of `m` against `E₄^i E₆^j`.
///
/// The `r` unknowns are fixed by the q⁰..q^{r-1} coefficients; every later
/// coefficient below `q_order` is then compared. A nonzero residual is a
/// result, not an error: non-string manifolds are expected to produce one.
pub fn witten_fit(m: &ManifoldData, q_order: u32) -> Result<ModularFit> {
    let weight = m.real_dim / 2;
    let monos = monomial_exponents(weight);
    if m.real_dim % 4 != 0 || monos.is_empty() {
        return Err(Error::DimensionError(format!(
            "{}: no monomials E4^i E6^j of weight {weight}",
            m.name
        )));
    }
    let r = monos.len() as u32;
    if q_order < r {
        return Err(Error::FitError(format!(
            "{r} unknowns need at least {r} q-coefficients, q_order is {q_order}"
        )));
    }
    let trunc = 2 * q_order;
    let w = elliptic_genus(m, EllipticKind::Witten, q_order)?.series;
    let e4 = eisenstein(EisensteinKind::E4, trunc)?;
    let e6 = eisenstein(EisensteinKind::E6, trunc)?;
    let basis: Vec<QSeries> = monos.iter().map(|&(i, j)| power(&e4, i).mul(&power(&e6, j))).collect();
    let coeff = |s: &QSeries, n: u32| s.coeff(2 * n).unwrap_or_else(Rational::zero);
    let a = (0..r).map(|n| basis.iter().map(|b| coeff(b, n)).collect()).collect();
    let rhs = (0..r).map(|n| coeff(&w, n)).collect();
    let x = solve(a, rhs).ok_or_else(|| Error::FitError(format!("leading system of weight {weight} is singular")))?;
    let fitted = basis
        .iter()
        .zip(&x)
        .fold(QSeries::zero(trunc), |acc, (b, c)| acc.add(&b.scale_by(c)));
    let residual = w.sub(&fitted);
    let first_residual = residual.terms().next().map(|(e, c)| (e, c.clone()));
    Ok(ModularFit {
        weight,
        coefficients: monos.into_iter().zip(x).collect(),
        residual_ok: first_residual.is_none(),
        checked_order: trunc,
        first_residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModularCheck {
    pub tau_im: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
    pub pass: bool,
}

/// Compares `Ell₁(-1/τ)` with `(2τ)^{2m} Ell₂(τ)` at `τ = i·tau_im`.
///
/// Both sides are real there: `q = e^{-2π tau_im}` and `q' = e^{-2π/tau_im}`.
pub fn modular_relation_check(m: &ManifoldData, tau_im: f64, q_order: u32, tol: f64) -> Result<ModularCheck> {
    if !(tau_im > 1.0) || !tau_im.is_finite() {
        return Err(Error::ConvergenceRisk(tau_im));
    }
    let two_m = (m.real_dim / 2) as i32;
    let ell1 = elliptic_genus(m, EllipticKind::Ell1, q_order)?.series;
    let ell2 = elliptic_genus(m, EllipticKind::Ell2, q_order)?.series;
    let two_pi = 2.0 * std::f64::consts::PI;
    let q = Complex64::new((-two_pi * tau_im).exp(), 0.0);
    let q_dual = Complex64::new((-two_pi / tau_im).exp(), 0.0);
    let lhs = ell1.eval(q_dual)?;
    let rhs = Complex64::new(0.0, 2.0 * tau_im).powi(two_m) * ell2.eval(q)?;
    let abs_error = (lhs - rhs).norm();
    Ok(ModularCheck {
        tau_im,
        lhs: lhs.re,
        rhs: rhs.re,
        abs_error,
        pass: abs_error < tol,
    })
}

/// Numeric value of a rational, for reports.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
