//! Elliptic genera Ell₁, Ell₂ and the Witten genus as q-expansions.
//!
//! Two independent routes lead to the same series:
//!
//! * the theta route: per-root factors built from the Jacobi theta products
//!   ([`theta_ratio`]) or from their closed-form reduction
//!   ([`elliptic_factor`]), fed through the multiplicative-sequence engine;
//! * the bundle route: Chern characters of the Witten bundles Θ, Θ₁, Θ₂
//!   ([`witten_bundle_ch`]) multiplied by the Â-class in the class ring, read
//!   off coefficient by coefficient as twisted Dirac indices
//!   ([`twisted_indices`]).
//!
//! Throughout, `y = 2πi·x` so that `e^{2πi x} = e^y`, `sin(πx) = sinh(y/2)/i`
//! and `cos(πx) = cosh(y/2)`; all coefficients stay rational. `q_order`
//! counts integer powers of q: half exponents below `2 * q_order` are kept.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;

use crate::charpoly::{CharClassPoly, GeneratorKind};
use crate::error::{Error, Result};
use crate::genus::{ahat_series, genus_class, lhat_half_series, multiplicative_class, pontryagin_data};
use crate::manifold::{GenusKind, ManifoldData};
use crate::ring::{factorial, int, rat, Coeff, PowerSeries, Rational};
use crate::series::QSeries;

/// Even series in `y` with q-series coefficients.
pub type CharSeries = PowerSeries<QSeries>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaKind {
    Theta,
    Theta1,
    Theta2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EllipticKind {
    Ell1,
    Ell2,
    Witten,
}

impl EllipticKind {
    pub const ALL: [EllipticKind; 3] = [EllipticKind::Ell1, EllipticKind::Ell2, EllipticKind::Witten];

    pub fn name(self) -> &'static str {
        match self {
            EllipticKind::Ell1 => "ell1",
            EllipticKind::Ell2 => "ell2",
            EllipticKind::Witten => "witten",
        }
    }
}

impl fmt::Display for EllipticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EllipticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ell1" => Ok(EllipticKind::Ell1),
            "ell2" => Ok(EllipticKind::Ell2),
            "witten" => Ok(EllipticKind::Witten),
            other => Err(Error::InvalidArgument(format!("unknown elliptic genus `{other}`"))),
        }
    }
}

/// The Witten bundles Θ, Θ₁, Θ₂ of the reduced complexified tangent bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bundle {
    Theta,
    Theta1,
    Theta2,
}

/// Index families: `B_k` from `Θ ⊗ Θ₂` (indexed by half powers of q),
/// `W_j` from `Θ` (indexed by integer powers).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexFamily {
    B,
    W,
}

impl FromStr for IndexFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(IndexFamily::B),
            "W" | "w" => Ok(IndexFamily::W),
            other => Err(Error::InvalidArgument(format!("unknown index family `{other}`"))),
        }
    }
}

fn check_caps(y_cap: usize, q_order: u32) -> Result<()> {
    if y_cap < 2 || q_order < 1 {
        return Err(Error::InvalidArgument(format!(
            "need y_cap >= 2 and q_order >= 1, got {y_cap} and {q_order}"
        )));
    }
    Ok(())
}

fn lift(p: &PowerSeries<Rational>, trunc: u32) -> CharSeries {
    p.map(trunc, |c| QSeries::constant(c.clone(), trunc))
}

/// `1 + sign * q^{half_exp/2} * e^{y_sign * y}`.
fn exp_factor(sign: i64, half_exp: u32, y_sign: i64, y_cap: usize, trunc: u32) -> CharSeries {
    let e = PowerSeries::exp_linear(&int(y_sign), y_cap);
    let mut out = e.map(trunc, |c| QSeries::monomial(half_exp, c * int(sign), trunc));
    out.set_coeff(0, out.coeff(0).add(&QSeries::one(trunc)));
    out
}

/// `N(y) / N(0)` where `N(0)` is the `y^0` coefficient.
fn normalize_at_zero(n: &CharSeries) -> Result<CharSeries> {
    let n0 = n.coeff(0).inverse()?;
    Ok(n.mul_coeff(&n0))
}

/// Per-root theta quotients evaluated straight from the product formulas:
/// `x θ'(0,τ)/θ(x,τ)`, `θ₁(x,τ)/θ₁(0,τ)` or `θ₂(x,τ)/θ₂(0,τ)`.
///
/// Every constant (`2q^{1/8}`, `π`, factors of `i`) cancels in the ratio, so
/// each quotient is `N(y)/N(0)` (or its reciprocal for θ) for the
/// corresponding product `N` with the trigonometric prefactor written in `y`.
pub fn theta_ratio(kind: ThetaKind, y_cap: usize, q_order: u32) -> Result<CharSeries> {
    check_caps(y_cap, q_order)?;
    let trunc = 2 * q_order;
    let mut n = match kind {
        // θ(x)/x ∝ (sinh(y/2)/(y/2)) ∏ (1-q^j)(1-e^y q^j)(1-e^{-y} q^j)
        ThetaKind::Theta => lift(&PowerSeries::sinh_over_t(y_cap).rescale(&rat(1, 2)), trunc),
        // θ₁(x) ∝ cosh(y/2) ∏ (1-q^j)(1+e^y q^j)(1+e^{-y} q^j)
        ThetaKind::Theta1 => lift(&PowerSeries::cosh(y_cap).rescale(&rat(1, 2)), trunc),
        // θ₂(x) = ∏ (1-q^j)(1-e^y q^{j-1/2})(1-e^{-y} q^{j-1/2})
        ThetaKind::Theta2 => CharSeries::one(y_cap, trunc),
    };
    for j in 1..=q_order {
        let h = 2 * j;
        let eta = QSeries::one(trunc).sub(&QSeries::monomial(h, int(1), trunc));
        n = n.mul_coeff(&eta);
        let (sign, half) = match kind {
            ThetaKind::Theta => (-1, h),
            ThetaKind::Theta1 => (1, h),
            ThetaKind::Theta2 => (-1, h - 1),
        };
        n = n.mul(&exp_factor(sign, half, 1, y_cap, trunc));
        n = n.mul(&exp_factor(sign, half, -1, y_cap, trunc));
    }
    let ratio = normalize_at_zero(&n)?;
    match kind {
        ThetaKind::Theta => ratio.inverse(),
        _ => Ok(ratio),
    }
}

/// The theta route combined: `xθ'/θ · θ₁/θ₁(0)` (Ell₁), `xθ'/θ · θ₂/θ₂(0)`
/// (Ell₂), `xθ'/θ` (Witten).
pub fn theta_route_factor(kind: EllipticKind, y_cap: usize, q_order: u32) -> Result<CharSeries> {
    let base = theta_ratio(ThetaKind::Theta, y_cap, q_order)?;
    Ok(match kind {
        EllipticKind::Witten => base,
        EllipticKind::Ell1 => base.mul(&theta_ratio(ThetaKind::Theta1, y_cap, q_order)?),
        EllipticKind::Ell2 => base.mul(&theta_ratio(ThetaKind::Theta2, y_cap, q_order)?),
    })
}

/// `sum_{k>=1} (n y)^{2k}/(2k)! = cosh(n y) - 1`, scaled by `c`.
fn cosh_minus_one(n: u32, c: &Rational, y_cap: usize) -> PowerSeries<Rational> {
    PowerSeries::from_fn(y_cap, (), |i| {
        if i == 0 || i % 2 == 1 {
            Rational::zero()
        } else {
            let pow: Rational = int(n as i64).pow(i as i32);
            c * pow / Rational::from_integer(factorial(i as u32))
        }
    })
}

/// Adds `q^{half_exp/2} * s(y)` to a char series.
fn add_term(acc: &mut CharSeries, half_exp: u32, s: &PowerSeries<Rational>) {
    let trunc = acc.ctx();
    for i in 0..=acc.cap().min(s.cap()) {
        let c = s.coeff(i);
        if !c.is_zero() {
            let updated = acc.coeff(i).add(&QSeries::monomial(half_exp, c.clone(), trunc));
            acc.set_coeff(i, updated);
        }
    }
}

/// Closed-form per-root factors:
///
/// * Ell₁: `(y/2)coth(y/2) ∏ (1-q^j)²(1+e^y q^j)(1+e^{-y}q^j) / ((1+q^j)²(1-e^y q^j)(1-e^{-y}q^j))`
/// * Ell₂: `(y/2)/sinh(y/2) ∏ (1-q^j)²(1-e^y q^{j-1/2})(1-e^{-y}q^{j-1/2}) / ((1-q^{j-1/2})²(1-e^y q^j)(1-e^{-y}q^j))`
/// * Witten: `(y/2)/sinh(y/2) ∏ (1-q^j)² / ((1-e^y q^j)(1-e^{-y}q^j))`
///
/// Evaluated through their logarithms: expanding `log(1 ∓ u)` turns each
/// product into a divisor sum of `cosh(n y) - 1` terms, e.g. for Witten
/// `sum_N q^N sum_{n | N} (2/n)(cosh(n y) - 1)`.
pub fn elliptic_factor(kind: EllipticKind, y_cap: usize, q_order: u32) -> Result<CharSeries> {
    check_caps(y_cap, q_order)?;
    let trunc = 2 * q_order;
    let head = match kind {
        EllipticKind::Ell1 => lhat_half_series(y_cap),
        _ => ahat_series(y_cap),
    };
    let mut log = lift(&head.log()?, trunc);
    for big_n in 1..q_order {
        for n in (1..=big_n).filter(|n| big_n % n == 0) {
            let c = match kind {
                EllipticKind::Ell1 if n % 2 == 1 => rat(4, n as i64),
                EllipticKind::Ell1 => continue,
                _ => rat(2, n as i64),
            };
            add_term(&mut log, 2 * big_n, &cosh_minus_one(n, &c, y_cap));
        }
    }
    if kind == EllipticKind::Ell2 {
        // sum_j log(1 - e^{±y} q^{j-1/2}) - 2 log(1 - q^{j-1/2})
        for h in 1..trunc {
            for n in (1..=h).filter(|&n| h % n == 0 && (h / n).is_odd()) {
                add_term(&mut log, h, &cosh_minus_one(n, &rat(-2, n as i64), y_cap));
            }
        }
    }
    log.exp()
}

/// Per-root Chern-character factor of a Witten bundle, from
/// `ch S_t(E) = ∏ 1/(1 - t e^{r})` and `ch Λ_t(E) = ∏ (1 + t e^{r})` over the
/// roots `r = ±y`, with the rank normalization of `E - C^{rk}` spread evenly
/// over the roots.
pub fn witten_bundle_factor(bundle: Bundle, y_cap: usize, q_order: u32) -> Result<CharSeries> {
    check_caps(y_cap, q_order)?;
    let trunc = 2 * q_order;
    let mut out = CharSeries::one(y_cap, trunc);
    for k in 1..=q_order {
        let (sign, half) = match bundle {
            Bundle::Theta => (-1, 2 * k),
            Bundle::Theta1 => (1, 2 * k),
            Bundle::Theta2 => (-1, 2 * k - 1),
        };
        let pair = exp_factor(sign, half, 1, y_cap, trunc).mul(&exp_factor(sign, half, -1, y_cap, trunc));
        let rank_fix = QSeries::one(trunc).add(&QSeries::monomial(half, int(sign), trunc));
        let rank_fix = rank_fix.mul(&rank_fix);
        match bundle {
            Bundle::Theta => out = out.mul(&pair.inverse()?).mul_coeff(&rank_fix),
            _ => out = out.mul(&pair).mul_coeff(&rank_fix.inverse()?),
        }
    }
    Ok(out)
}

/// `ch(bundle(T_C M))` for a manifold of real dimension `real_dim`, as a
/// polynomial in Pontryagin classes with q-series coefficients.
pub fn witten_bundle_ch(bundle: Bundle, real_dim: u32, q_order: u32) -> Result<CharClassPoly<QSeries>> {
    let w = quarter(real_dim)?;
    let factor = witten_bundle_factor(bundle, (2 * w as usize).max(2), q_order)?;
    multiplicative_class(&factor, GeneratorKind::Pontryagin, w, Some(2 * w))
}

fn quarter(real_dim: u32) -> Result<u32> {
    if real_dim == 0 || real_dim % 4 != 0 {
        return Err(Error::DimensionError(format!(
            "elliptic genera need real dimension divisible by 4, got {real_dim}"
        )));
    }
    Ok(real_dim / 4)
}

/// An elliptic genus as a q-series.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusSeries {
    pub kind: EllipticKind,
    pub manifold: String,
    pub q_order: u32,
    pub series: QSeries,
}

fn full_pontryagin(m: &ManifoldData) -> Result<(u32, std::collections::BTreeMap<crate::Partition, i64>)> {
    let w = quarter(m.real_dim)?;
    let pont = pontryagin_data(m)?.ok_or_else(|| {
        Error::InsufficientData(format!(
            "{} carries only asserted values; elliptic genera need characteristic numbers",
            m.name
        ))
    })?;
    Ok((w, pont))
}

fn pow2(e: u32) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(1) << e)
}

/// Pairs a per-root factor against the manifold, applying the `2^{2m}`
/// normalization Ell₁ needs to start with the signature.
fn pair_factor(m: &ManifoldData, kind: EllipticKind, factor: &CharSeries) -> Result<QSeries> {
    let (w, pont) = full_pontryagin(m)?;
    let class = multiplicative_class(factor, GeneratorKind::Pontryagin, w, None)?;
    let value = class.pair(w, &pont);
    Ok(match kind {
        EllipticKind::Ell1 => value.scale(&pow2(2 * w)),
        _ => value,
    })
}

/// Ell₁, Ell₂ or W of `m` through the closed-form factors.
pub fn elliptic_genus(m: &ManifoldData, kind: EllipticKind, q_order: u32) -> Result<GenusSeries> {
    let (w, _) = full_pontryagin(m)?;
    let factor = elliptic_factor(kind, (2 * w as usize).max(2), q_order)?;
    Ok(GenusSeries {
        kind,
        manifold: m.name.clone(),
        q_order,
        series: pair_factor(m, kind, &factor)?,
    })
}

/// Same genus through the literal theta products; used as a cross-check.
pub fn elliptic_genus_theta_route(m: &ManifoldData, kind: EllipticKind, q_order: u32) -> Result<GenusSeries> {
    let (w, _) = full_pontryagin(m)?;
    let factor = theta_route_factor(kind, (2 * w as usize).max(2), q_order)?;
    Ok(GenusSeries {
        kind,
        manifold: m.name.clone(),
        q_order,
        series: pair_factor(m, kind, &factor)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedIndex {
    pub family: IndexFamily,
    /// Half-exponent for `B`, integer exponent for `W`.
    pub k: u32,
    pub value: Rational,
    /// Set when the manifold is spin but the value is not an integer, which
    /// the index theorem forbids: the input data must be wrong.
    pub non_integral: bool,
}

/// Coefficient bundles of the family as Pontryagin polynomials with q-series
/// coefficients: `ch(Θ ⊗ Θ₂)` for `B`, `ch(Θ)` for `W`.
fn family_ch(family: IndexFamily, real_dim: u32, q_order: u32) -> Result<CharClassPoly<QSeries>> {
    let theta = witten_bundle_ch(Bundle::Theta, real_dim, q_order)?;
    Ok(match family {
        IndexFamily::W => theta,
        IndexFamily::B => theta.mul(&witten_bundle_ch(Bundle::Theta2, real_dim, q_order)?),
    })
}

/// Twisted indices `ind(D ⊗ B_k)` for `k < 2 * q_order`, or
/// `ind(D ⊗ W_j)` for `j < q_order`, each `<Â(TM) ch(bundle), [M]>`.
pub fn twisted_indices(m: &ManifoldData, family: IndexFamily, q_order: u32) -> Result<Vec<TwistedIndex>> {
    let (w, pont) = full_pontryagin(m)?;
    if q_order < 1 {
        return Err(Error::InvalidArgument("q_order must be at least 1".into()));
    }
    let ch = family_ch(family, m.real_dim, q_order)?;
    let (_, ahat) = genus_class(GenusKind::Ahat, w);
    let (count, step) = match family {
        IndexFamily::B => (2 * q_order, 1),
        IndexFamily::W => (q_order, 2),
    };
    Ok((0..count)
        .map(|k| {
            let bundle = ch.map_coeffs((), |s| s.coeff(k * step).unwrap_or_else(Rational::zero));
            let value = ahat.mul(&bundle).pair(w, &pont);
            let non_integral = m.spin && !value.is_integer();
            TwistedIndex {
                family,
                k,
                value,
                non_integral,
            }
        })
        .collect())
}

/// A single twisted index; see [`twisted_indices`].
pub fn twisted_index(m: &ManifoldData, family: IndexFamily, k: u32) -> Result<TwistedIndex> {
    let q_order = match family {
        IndexFamily::B => k / 2 + 1,
        IndexFamily::W => k + 1,
    };
    let all = twisted_indices(m, family, q_order)?;
    Ok(all.into_iter().nth(k as usize).expect("q_order covers k"))
}

/// Reassembles `sum_k ind_k q^{k/2}` (B) or `sum_j ind_j q^j` (W).
pub fn index_series(indices: &[TwistedIndex], q_order: u32) -> QSeries {
    let trunc = 2 * q_order;
    QSeries::from_terms(
        indices.iter().map(|t| {
            let e = match t.family {
                IndexFamily::B => t.k,
                IndexFamily::W => 2 * t.k,
            };
            (e, t.value.clone())
        }),
        trunc,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus::signature_series;
    use crate::manifold::{builtin, Builtin};

    fn at_q0(s: &CharSeries) -> PowerSeries<Rational> {
        s.map((), |c| c.constant_term())
    }

    #[test]
    fn theta_quotients_at_q0() {
        let t = theta_ratio(ThetaKind::Theta, 8, 4).unwrap();
        assert_eq!(at_q0(&t), ahat_series(8));
        let t1 = theta_ratio(ThetaKind::Theta1, 8, 4).unwrap();
        assert_eq!(at_q0(&t1), PowerSeries::cosh(8).rescale(&rat(1, 2)));
        let t2 = theta_ratio(ThetaKind::Theta2, 8, 4).unwrap();
        assert!(t2.coeff(0).is_one_elem());
    }

    #[test]
    fn closed_form_leading_terms() {
        let e2 = elliptic_factor(EllipticKind::Ell2, 8, 4).unwrap();
        assert_eq!(at_q0(&e2), ahat_series(8));
        let w = elliptic_factor(EllipticKind::Witten, 8, 4).unwrap();
        assert_eq!(at_q0(&w), ahat_series(8));
        let e1 = elliptic_factor(EllipticKind::Ell1, 8, 4).unwrap();
        // twice this is the L̂ factor y/tanh(y/2)
        assert_eq!(at_q0(&e1).scale(&int(2)), signature_series(8).rescale(&rat(1, 2)).scale(&int(2)));
        assert!(e2.is_even() && w.is_even() && e1.is_even());
    }

    #[test]
    fn closed_form_matches_theta_products() {
        for kind in EllipticKind::ALL {
            assert_eq!(
                elliptic_factor(kind, 8, 6).unwrap(),
                theta_route_factor(kind, 8, 6).unwrap(),
                "{kind}"
            );
        }
    }

    #[test]
    fn witten_bundle_leading_terms() {
        let ch = witten_bundle_ch(Bundle::Theta, 8, 3).unwrap();
        let q0 = ch.map_coeffs((), |s| s.constant_term());
        assert_eq!(q0, CharClassPoly::one(GeneratorKind::Pontryagin, 2, ()));
    }

    #[test]
    fn k3_examples() {
        let k3 = builtin(Builtin::K3).unwrap();
        let w = elliptic_genus(&k3, EllipticKind::Witten, 4).unwrap().series;
        assert_eq!(w.coeff(0), Some(int(2)));
        assert_eq!(w.coeff(2), Some(int(-48)));
        assert_eq!(twisted_index(&k3, IndexFamily::W, 0).unwrap().value, int(2));
        assert_eq!(twisted_index(&k3, IndexFamily::W, 1).unwrap().value, int(-48));
        assert_eq!(twisted_index(&k3, IndexFamily::B, 1).unwrap().value, int(48));
        let e2 = elliptic_genus(&k3, EllipticKind::Ell2, 3).unwrap().series;
        assert_eq!(e2.coeff(0), Some(int(2)));
    }

    #[test]
    fn dimension_and_data_errors() {
        let cp3 = builtin(Builtin::Cp(3)).unwrap();
        assert!(matches!(
            elliptic_genus(&cp3, EllipticKind::Witten, 3),
            Err(Error::DimensionError(_))
        ));
        let mut b8 = ManifoldData::new("B8", 8);
        b8.asserted.insert(GenusKind::Ahat, int(1));
        assert!(matches!(
            elliptic_genus(&b8, EllipticKind::Ell2, 3),
            Err(Error::InsufficientData(_))
        ));
        assert!(theta_ratio(ThetaKind::Theta, 1, 3).is_err());
    }
}
