//! The explicit analytic constants: the root `C(b)`, the Moser iteration
//! constant and the dimension bound for spaces of sections.
//!
//! Unlike the rest of the crate this module works in binary64.

use serde::Serialize;

use crate::error::{Error, Result};

/// Inputs of the bound; see [`BoundParams::new`] for the defaults.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundParams {
    pub m: u32,
    pub p: f64,
    pub lambda: f64,
    pub diam: f64,
    pub b: f64,
    /// The unspecified constant `C(m, p)`; an explicit input, default 1.
    pub cmp: f64,
    /// `None` picks the default: `m/2` for `m > 2`, `(1 + p)/2` for `m = 2`.
    pub v: Option<f64>,
    /// Bundle rank for the dimension bound.
    pub l: u64,
}

impl BoundParams {
    pub fn new(m: u32, p: f64, lambda: f64, diam: f64, b: f64) -> Self {
        BoundParams {
            m,
            p,
            lambda,
            diam,
            b,
            cmp: 1.0,
            v: None,
            l: 1,
        }
    }

    /// The auxiliary exponent actually used.
    pub fn effective_v(&self) -> Result<f64> {
        if self.m > 2 {
            let forced = self.m as f64 / 2.0;
            match self.v {
                Some(v) if v != forced => Err(Error::DomainError(format!("v is fixed to m/2 = {forced} when m > 2, got {v}"))),
                _ => Ok(forced),
            }
        } else {
            let v = self.v.unwrap_or((1.0 + self.p) / 2.0);
            // v < p is the exponent condition, reported by moser_constant
            if !(v > 1.0) {
                return Err(Error::DomainError(format!("need v > 1 for m = 2, got v = {v}")));
            }
            Ok(v)
        }
    }

    /// Checks everything except `p > m/2` (equivalently `v < p`), which
    /// [`moser_constant`] reports as [`Error::ExponentDomainError`].
    pub fn validate(&self) -> Result<()> {
        let positive = [("p", self.p), ("diam", self.diam), ("b", self.b), ("cmp", self.cmp)];
        if self.m < 2 {
            return Err(Error::DomainError(format!("m = {} must be at least 2", self.m)));
        }
        for (name, x) in positive {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::DomainError(format!("{name} = {x} must be finite and positive")));
            }
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::DomainError(format!("lambda = {} must be finite and >= 0", self.lambda)));
        }
        if self.l == 0 {
            return Err(Error::DomainError("rank l must be at least 1".into()));
        }
        self.effective_v().map(|_| ())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub mu: f64,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
    #[serde(rename = "B")]
    pub b_term: f64,
    pub c_of_b: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub constant: f64,
    pub inputs: BoundParams,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute accuracy `eps`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(&f, a, b, fa, fm, fb, whole, eps, 50)
}

/// `∫₀^π sin^{m-1} t dt`.
pub fn sine_integral(m: u32) -> f64 {
    integrate(|t| t.sin().powi(m as i32 - 1), 0.0, std::f64::consts::PI, 1e-14)
}

/// `x ∫₀^b (cosh t + x sinh t)^{m-1} dt - ∫₀^π sin^{m-1} t dt`, increasing in `x > 0`.
fn c_equation(m: u32, b: f64, rhs: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        let inner = |t: f64| (t.cosh() + x * t.sinh()).powi(m as i32 - 1);
        let scale = (b.cosh() + x * b.sinh()).powi(m as i32 - 1) * b;
        x * integrate(inner, 0.0, b, 1e-15 * scale.max(1.0)) - rhs
    }
}

fn check_cb_args(m: u32, b: f64) -> Result<()> {
    if m < 2 {
        return Err(Error::DomainError(format!("m = {m} must be at least 2")));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::DomainError(format!("b = {b} must be finite and positive")));
    }
    Ok(())
}

fn bracket(f: &impl Fn(f64) -> f64, m: u32, b: f64) -> Result<(f64, f64)> {
    let mut hi = 1.0;
    for _ in 0..200 {
        let v = f(hi);
        if !v.is_finite() {
            break;
        }
        if v > 0.0 {
            return Ok((0.0, hi));
        }
        hi *= 2.0;
    }
    Err(Error::RootNotBracketed(format!("no sign change for m = {m}, b = {b}")))
}

/// The unique positive root `C(b)` of
/// `x ∫₀^b (cosh t + x sinh t)^{m-1} dt = ∫₀^π sin^{m-1} t dt`, by bisection.
pub fn c_of_b(m: u32, b: f64) -> Result<f64> {
    check_cb_args(m, b)?;
    let f = c_equation(m, b, sine_integral(m));
    let (mut lo, mut hi) = bracket(&f, m, b)?;
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Same root by the secant method started from the bisection bracket; an
/// independent cross-check of [`c_of_b`].
pub fn c_of_b_secant(m: u32, b: f64) -> Result<f64> {
    check_cb_args(m, b)?;
    let f = c_equation(m, b, sine_integral(m));
    let (_, hi) = bracket(&f, m, b)?;
    let (mut x0, mut x1) = (hi / 2.0, hi);
    let (mut f0, mut f1) = (f(x0), f(x1));
    for _ in 0..100 {
        if f1 == f0 {
            break;
        }
        let x2 = (x1 - f1 * (x1 - x0) / (f1 - f0)).max(f64::MIN_POSITIVE);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
        if (x1 - x0).abs() <= 1e-14 * x1 {
            break;
        }
    }
    Ok(x1)
}

/// `μ`, `K₁ = Σ_{i≥1} i μ^{-i}` and `K₂ = Σ_{i≥1} μ^{-i}` in closed form.
pub fn mu_k1_k2(v: f64) -> (f64, f64, f64) {
    let mu = v / (v - 1.0);
    (mu, mu / ((mu - 1.0) * (mu - 1.0)), 1.0 / (mu - 1.0))
}

/// The Moser iteration constant
/// `C = μ^{2K₁ e} B^{2K₂}` with `e = p(μ-1)/(μ(p-1)-p)` and
/// `B = C(m,p) Λ^{(μ-1)/(2(μ(p-1)-p))} R^e + 2`, `R = diam/(b C(b))`.
pub fn moser_constant(params: &BoundParams) -> Result<BoundReport> {
    params.validate()?;
    let v = params.effective_v()?;
    let (mu, k1, k2) = mu_k1_k2(v);
    let p = params.p;
    let denom = mu * (p - 1.0) - p;
    if !(denom > 0.0) {
        return Err(Error::ExponentDomainError(denom));
    }
    let e = p * (mu - 1.0) / denom;
    let cb = c_of_b(params.m, params.b)?;
    let r = params.diam / (params.b * cb);
    let lambda_term = if params.lambda == 0.0 {
        0.0
    } else {
        params.cmp * params.lambda.powf(0.5 * (mu - 1.0) / denom) * r.powf(e)
    };
    let b_term = lambda_term + 2.0;
    let constant = mu.powf(2.0 * k1 * e) * b_term.powf(2.0 * k2);
    if !constant.is_finite() {
        return Err(Error::DomainError(format!("constant overflowed for {params:?}")));
    }
    Ok(BoundReport {
        mu,
        k1,
        k2,
        b_term,
        c_of_b: cb,
        r,
        constant,
        inputs: params.clone(),
    })
}

/// `dim F <= l * sup L(s)`.
pub fn berard_dim_bound(l: u64, l_sup: f64) -> Result<f64> {
    if l == 0 {
        return Err(Error::DomainError("rank l must be at least 1".into()));
    }
    if !(l_sup >= 1.0) {
        return Err(Error::DomainError(format!("sup L = {l_sup} is below 1, impossible for L(s) >= 1")));
    }
    Ok(l as f64 * l_sup)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexBoundReport {
    #[serde(flatten)]
    pub moser: BoundReport,
    /// The dimension bound `l * C`; it bounds every twisted index.
    pub bound: f64,
}

/// Chains [`moser_constant`] into [`berard_dim_bound`] with rank `params.l`.
pub fn index_bound_report(params: &BoundParams) -> Result<IndexBoundReport> {
    let moser = moser_constant(params)?;
    let bound = berard_dim_bound(params.l, moser.constant)?;
    Ok(IndexBoundReport { moser, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic_root(b: f64) -> f64 {
        let (s, c) = (b.sinh(), b.cosh() - 1.0);
        (-s + (s * s + 8.0 * c).sqrt()) / (2.0 * c)
    }

    #[test]
    fn cb_matches_quadratic_for_m2() {
        for b in [0.5, 1.0, 2.0, 5.0] {
            let x = c_of_b(2, b).unwrap();
            let exact = quadratic_root(b);
            assert!(((x - exact) / exact).abs() < 1e-10, "b={b}: {x} vs {exact}");
        }
        assert!(c_of_b(2, 20.0).unwrap() < c_of_b(2, 1.0).unwrap());
    }

    #[test]
    fn secant_agrees() {
        for (m, b) in [(2, 1.0), (3, 0.7), (4, 2.0), (6, 1.3)] {
            let (x, y) = (c_of_b(m, b).unwrap(), c_of_b_secant(m, b).unwrap());
            assert!((x - y).abs() < 1e-9 * x, "{m} {b}: {x} {y}");
        }
    }

    #[test]
    fn rhs_integral() {
        assert!((sine_integral(2) - 2.0).abs() < 1e-13);
        assert!((sine_integral(3) - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn mu_two() {
        let (mu, k1, k2) = mu_k1_k2(2.0);
        assert_eq!((mu, k1, k2), (2.0, 2.0, 1.0));
    }

    #[test]
    fn domain_errors() {
        let mut p = BoundParams::new(2, 1.5, 1.0, 1.0, 1.0);
        p.v = Some(1.4);
        // mu = 3.5, mu(p-1) - p = 0.25 > 0
        assert!(moser_constant(&p).is_ok());
        p.v = Some(1.6);
        assert!(matches!(moser_constant(&p), Err(Error::ExponentDomainError(_))));
        assert!(berard_dim_bound(1, 0.5).is_err());
        assert!(c_of_b(1, 1.0).is_err());
        assert!(matches!(
            moser_constant(&BoundParams::new(4, 2.0, 1.0, 1.0, 1.0)),
            Err(Error::ExponentDomainError(_))
        ));
        assert!(moser_constant(&BoundParams::new(4, 5.0, -1.0, 1.0, 1.0)).is_err());
    }
}
