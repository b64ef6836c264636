//! Hirzebruch multiplicative sequences and the genus calculus on
//! characteristic numbers.
//!
//! Roots are normalized so that the formal Chern roots of `TM ⊗ C` are
//! `±y_j`; every factor series then has rational coefficients:
//!
//! | genus     | per-root factor          |
//! |-----------|--------------------------|
//! | Â         | `(y/2)/sinh(y/2)`        |
//! | L̂         | `y/tanh(y/2)`            |
//! | signature | `y/tanh(y)`              |
//! | Todd      | `z/(1-e^{-z})`           |
//!
//! The L̂ factor has constant term 2; it is handled as `2 * (y/2)/tanh(y/2)`
//! with the `2^{real_dim/2}` pulled out of the product over the
//! `real_dim/2` roots.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};

use crate::charpoly::{CharClassPoly, GeneratorKind};
use crate::error::{Error, Result};
use crate::manifold::{GenusKind, ManifoldData};
use crate::partition::{partitions_of, Partition};
use crate::ring::{factorial, int, rat, Coeff, PowerSeries, Rational};

/// `prod_j Q(y_j)` rewritten in the generators, truncated at `weight_cap`.
///
/// For [`GeneratorKind::Pontryagin`] the factor is a series in `y` that must
/// be even, and `p_i` are the elementary symmetric functions of `y_j^2`; for
/// [`GeneratorKind::Chern`] the factor is a series in `z` and `c_i = e_i(z_j)`.
/// The product is formed as `exp(sum_n a_n s_n)`, with `log Q = sum a_n t^n`
/// and `s_n` the power sums written through Newton's identities.
///
/// `roots` limits the number of formal roots (generators beyond it vanish);
/// `None` means as many as needed, which is what every caller wants.
pub fn multiplicative_class<C: Coeff>(
    factor: &PowerSeries<C>,
    kind: GeneratorKind,
    weight_cap: u32,
    roots: Option<u32>,
) -> Result<CharClassPoly<C>> {
    if weight_cap == 0 {
        return Err(Error::InvalidArgument("weight_cap must be at least 1".into()));
    }
    let ctx = factor.ctx();
    let step = match kind {
        GeneratorKind::Pontryagin => 2,
        GeneratorKind::Chern => 1,
    };
    let needed = step * weight_cap as usize;
    if factor.cap() < needed {
        return Err(Error::InvalidArgument(format!(
            "factor series known to degree {} but weight {} needs degree {}",
            factor.cap(),
            weight_cap,
            needed
        )));
    }
    if kind == GeneratorKind::Pontryagin {
        if let Some(i) = factor.first_odd_nonzero().filter(|&i| i <= needed) {
            return Err(Error::ParityError(i));
        }
    }
    let reduced = PowerSeries::from_fn(weight_cap as usize, ctx, |n| factor.coeff(step * n).clone());
    let log = reduced.log()?;
    let sums = CharClassPoly::<Rational>::power_sums(kind, weight_cap, roots);
    let mut exponent = CharClassPoly::zero(kind, weight_cap, ctx);
    for (n, s) in sums.iter().enumerate() {
        let a = log.coeff(n + 1);
        if a.is_zero_elem() {
            continue;
        }
        exponent = exponent.add(&s.map_coeffs(ctx, |r| a.scale(r)));
    }
    Ok(exponent.exp_nilpotent())
}

/// `(y/2)/sinh(y/2)` to degree `cap` in `y`.
pub fn ahat_series(cap: usize) -> PowerSeries<Rational> {
    PowerSeries::sinh_over_t(cap)
        .rescale(&rat(1, 2))
        .inverse()
        .expect("sinh(t)/t is a unit")
}

/// `y/tanh(y)` to degree `cap`.
pub fn signature_series(cap: usize) -> PowerSeries<Rational> {
    PowerSeries::cosh(cap)
        .div(&PowerSeries::sinh_over_t(cap))
        .expect("sinh(t)/t is a unit")
}

/// `(y/2)/tanh(y/2)`, i.e. the L̂ factor `y/tanh(y/2)` divided by 2.
pub fn lhat_half_series(cap: usize) -> PowerSeries<Rational> {
    signature_series(cap).rescale(&rat(1, 2))
}

/// `z/(1-e^{-z})` to degree `cap`.
pub fn todd_series(cap: usize) -> PowerSeries<Rational> {
    // (1 - e^{-z})/z = sum (-1)^n z^n/(n+1)!
    let denom = PowerSeries::from_fn(cap, (), |n| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        Rational::new(sign.into(), factorial(n as u32 + 1))
    });
    denom.inverse().expect("constant term is 1")
}

/// Characteristic class of a genus, truncated at `weight_cap`, together with
/// the per-root constant pulled out of the factor (2 for L̂, 1 otherwise).
pub fn genus_class(kind: GenusKind, weight_cap: u32) -> (Rational, CharClassPoly<Rational>) {
    let cap = 2 * weight_cap as usize;
    let (scale, series, gens) = match kind {
        GenusKind::Todd => (int(1), todd_series(weight_cap as usize), GeneratorKind::Chern),
        GenusKind::Ahat => (int(1), ahat_series(cap), GeneratorKind::Pontryagin),
        GenusKind::Lhat => (int(2), lhat_half_series(cap), GeneratorKind::Pontryagin),
        GenusKind::Signature => (int(1), signature_series(cap), GeneratorKind::Pontryagin),
    };
    let class = multiplicative_class(&series, gens, weight_cap, None).expect("genus factors are valid");
    (scale, class)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenusValue {
    pub value: Rational,
    /// The value was taken from asserted data, not computed.
    pub asserted: bool,
}

/// Pontryagin numbers of `m`, converting from Chern numbers if needed.
pub fn pontryagin_data(m: &ManifoldData) -> Result<Option<BTreeMap<Partition, i64>>> {
    if let Some(p) = &m.pontryagin_numbers {
        return Ok(Some(p.clone()));
    }
    if m.chern_numbers.is_some() {
        return Ok(chern_to_pontryagin(m)?.pontryagin_numbers);
    }
    Ok(None)
}

fn computed_genus(m: &ManifoldData, kind: GenusKind) -> Result<Option<Rational>> {
    match kind {
        GenusKind::Todd => {
            let Some(n) = m.complex_dim else {
                return Err(Error::DimensionError(format!("{} is not complex; Todd genus undefined", m.name)));
            };
            let Some(chern) = &m.chern_numbers else {
                return Ok(None);
            };
            let (_, class) = genus_class(kind, n);
            Ok(Some(class.pair(n, chern)))
        }
        _ => {
            let Some(pont) = pontryagin_data(m)? else {
                return Ok(None);
            };
            // degree reasons: no top Pontryagin classes unless 4 | dim
            let Some(w) = m.quarter_dim() else {
                return Ok(Some(Rational::zero()));
            };
            let (scale, class) = genus_class(kind, w);
            let roots = 2 * w;
            Ok(Some(class.pair(w, &pont) * pow(&scale, roots)))
        }
    }
}

fn pow(r: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * r)
}

/// Genus of `m`: computed from characteristic numbers when present,
/// otherwise the asserted value.
pub fn genus_value(m: &ManifoldData, kind: GenusKind) -> Result<GenusValue> {
    let asserted = m.asserted.get(&kind);
    let computed = match computed_genus(m, kind) {
        Ok(v) => v,
        Err(e @ Error::DimensionError(_)) => {
            return asserted
                .map(|v| GenusValue {
                    value: v.clone(),
                    asserted: true,
                })
                .ok_or(e)
        }
        Err(e) => return Err(e),
    };
    match (computed, asserted) {
        (Some(value), _) => Ok(GenusValue { value, asserted: false }),
        (None, Some(v)) => Ok(GenusValue {
            value: v.clone(),
            asserted: true,
        }),
        (None, None) => Err(Error::InsufficientData(format!(
            "{} has neither characteristic numbers nor an asserted {kind} value",
            m.name
        ))),
    }
}

/// `p_1, ..., p_{n/2}` as polynomials in the Chern classes of a complex
/// manifold of complex dimension `n`, from
/// `sum (-1)^i p_i = (sum (-1)^i c_i)(sum c_i)`.
pub fn pontryagin_in_chern(n: u32) -> Vec<CharClassPoly<Rational>> {
    let kind = GeneratorKind::Chern;
    let mut plus = CharClassPoly::one(kind, n, ());
    let mut minus = CharClassPoly::one(kind, n, ());
    for i in 1..=n {
        let c = CharClassPoly::generator(i, kind, n, ());
        plus = plus.add(&c);
        minus = if i % 2 == 0 { minus.add(&c) } else { minus.sub(&c) };
    }
    let total = plus.mul(&minus);
    (1..=n / 2)
        .map(|i| {
            let part = total.component(2 * i);
            if i % 2 == 0 {
                part
            } else {
                part.scale(&int(-1))
            }
        })
        .collect()
}

/// Fills in Pontryagin numbers from Chern numbers.
pub fn chern_to_pontryagin(m: &ManifoldData) -> Result<ManifoldData> {
    let (Some(n), Some(chern)) = (m.complex_dim, &m.chern_numbers) else {
        return Err(Error::InsufficientData(format!("{} has no Chern numbers", m.name)));
    };
    let mut numbers = BTreeMap::new();
    if let Some(w) = m.quarter_dim() {
        let p = pontryagin_in_chern(n);
        for lambda in partitions_of(w) {
            let mono = lambda
                .parts()
                .iter()
                .fold(CharClassPoly::one(GeneratorKind::Chern, n, ()), |acc, &i| {
                    acc.mul(&p[i as usize - 1])
                });
            let value = mono.pair(n, chern);
            let value = value
                .to_integer()
                .to_i64()
                .filter(|_| value.is_integer())
                .ok_or_else(|| Error::InconsistentData(format!("{}: Pontryagin number overflow", m.name)))?;
            numbers.insert(lambda, value);
        }
    }
    if let Some(existing) = &m.pontryagin_numbers {
        for lambda in numbers.keys().chain(existing.keys()) {
            let a = numbers.get(lambda).copied().unwrap_or(0);
            let b = existing.get(lambda).copied().unwrap_or(0);
            if a != b {
                return Err(Error::InconsistentData(format!(
                    "{}: Pontryagin number \"{lambda}\" is {b} but Chern numbers give {a}",
                    m.name
                )));
            }
        }
    }
    let mut out = m.clone();
    out.pontryagin_numbers = Some(numbers);
    Ok(out)
}

/// Characteristic numbers of a product from those of the factors.
///
/// A generator of the product splits as `g_k = sum_{a+b=k} g_a ⊗ g_b`; a
/// monomial number on `M x N` is the sum over all splittings whose degrees
/// match `M` and `N` of the product of factor numbers. `None` weights mean
/// the factor has no top classes at all, so every product number vanishes.
pub fn convolve_numbers(
    total: u32,
    a: &BTreeMap<Partition, i64>,
    a_weight: Option<u32>,
    b: &BTreeMap<Partition, i64>,
    b_weight: Option<u32>,
) -> Result<BTreeMap<Partition, i64>> {
    let mut out = BTreeMap::new();
    for lambda in partitions_of(total) {
        let (Some(wa), Some(wb)) = (a_weight, b_weight) else {
            out.insert(lambda, 0);
            continue;
        };
        let mut splits: BTreeMap<(Partition, Partition), i128> =
            BTreeMap::from([((Partition::empty(), Partition::empty()), 1)]);
        for &k in lambda.parts() {
            let mut next = BTreeMap::new();
            for ((ma, mb), c) in &splits {
                for left in 0..=k {
                    let na = if left > 0 { ma.with_part(left) } else { ma.clone() };
                    let nb = if k > left { mb.with_part(k - left) } else { mb.clone() };
                    if na.weight() > wa || nb.weight() > wb {
                        continue;
                    }
                    *next.entry((na, nb)).or_insert(0i128) += c;
                }
            }
            splits = next;
        }
        let mut value: i128 = 0;
        for ((ma, mb), c) in splits {
            if ma.weight() != wa || mb.weight() != wb {
                continue;
            }
            let x = a.get(&ma).copied().unwrap_or(0) as i128;
            let y = b.get(&mb).copied().unwrap_or(0) as i128;
            value = c
                .checked_mul(x)
                .and_then(|v| v.checked_mul(y))
                .and_then(|v| v.checked_add(value))
                .ok_or_else(|| Error::InconsistentData("characteristic number overflow".into()))?;
        }
        let value = i64::try_from(value).map_err(|_| Error::InconsistentData("characteristic number overflow".into()))?;
        out.insert(lambda, value);
    }
    Ok(out)
}

/// Cartesian product `a x b`.
pub fn product(a: &ManifoldData, b: &ManifoldData) -> Result<ManifoldData> {
    for f in [a, b] {
        if !f.has_full_data() {
            return Err(Error::InsufficientData(format!(
                "{} carries only asserted values; products need characteristic numbers",
                f.name
            )));
        }
    }
    let mut out = ManifoldData::new(format!("{}x{}", a.name, b.name), a.real_dim + b.real_dim);
    out.spin = a.spin && b.spin;
    out.string = a.string && b.string;
    if let (Some(na), Some(nb), Some(ca), Some(cb)) = (a.complex_dim, b.complex_dim, &a.chern_numbers, &b.chern_numbers) {
        out.complex_dim = Some(na + nb);
        out.chern_numbers = Some(convolve_numbers(na + nb, ca, Some(na), cb, Some(nb))?);
    }
    if let (Some(pa), Some(pb)) = (pontryagin_data(a)?, pontryagin_data(b)?) {
        out.pontryagin_numbers = match out.quarter_dim() {
            Some(w) => Some(convolve_numbers(w, &pa, a.quarter_dim(), &pb, b.quarter_dim())?),
            None => Some(BTreeMap::new()),
        };
    }
    if !out.has_full_data() {
        return Err(Error::InsufficientData(format!(
            "{} and {} share no kind of characteristic numbers",
            a.name, b.name
        )));
    }
    out.validate()?;
    Ok(out)
}

/// Connected sum `a # b` of equal-dimensional manifolds.
///
/// Pontryagin numbers add; spheres contribute nothing so no correction term
/// appears. When either side is known only through asserted genera, the
/// result is asserted-only, carrying the sums of every genus available on
/// both sides.
pub fn connected_sum(a: &ManifoldData, b: &ManifoldData) -> Result<ManifoldData> {
    if a.real_dim != b.real_dim {
        return Err(Error::DimensionError(format!(
            "connected sum of dimensions {} and {}",
            a.real_dim, b.real_dim
        )));
    }
    let mut out = ManifoldData::new(format!("{}_sharp_{}", a.name, b.name), a.real_dim);
    out.spin = a.spin && b.spin;
    out.string = a.string && b.string;
    let pa = pontryagin_data(a)?;
    let pb = pontryagin_data(b)?;
    if let (Some(pa), Some(pb)) = (&pa, &pb) {
        let mut sum = pa.clone();
        for (k, v) in pb {
            let e = sum.entry(k.clone()).or_insert(0);
            *e = e
                .checked_add(*v)
                .ok_or_else(|| Error::InconsistentData("characteristic number overflow".into()))?;
        }
        out.pontryagin_numbers = Some(sum);
    }
    for kind in [GenusKind::Ahat, GenusKind::Lhat, GenusKind::Signature] {
        let on_both_asserted = a.asserted.contains_key(&kind) && b.asserted.contains_key(&kind);
        if out.pontryagin_numbers.is_some() && !on_both_asserted {
            continue;
        }
        if let (Ok(x), Ok(y)) = (genus_value(a, kind), genus_value(b, kind)) {
            out.asserted.insert(kind, x.value + y.value);
        }
    }
    if !out.has_full_data() && out.asserted.is_empty() {
        return Err(Error::InsufficientData(format!(
            "{} # {}: no genus is known on both summands",
            a.name, b.name
        )));
    }
    out.validate()?;
    Ok(out)
}

/// Todd genus of a smooth hypersurface `M` dual to a class `d` in an abelian
/// variety of complex dimension `n + 1`: `Td(TM) = (1 - e^{-d})/d`, so the
/// genus is `D` times the `d^n` coefficient of that series, `D = <d^n, [M]>`.
pub fn hypersurface_todd(n: i64, degree: i64) -> Result<Rational> {
    if n <= 0 {
        return Err(Error::DimensionError(format!("hypersurface dimension {n} must be positive")));
    }
    let n = n as usize;
    let one = PowerSeries::one(n + 1, ());
    let e = PowerSeries::exp_linear(&int(-1), n + 1);
    let numerator = one.sub(&e);
    // divide by d: shift down one degree
    let td = PowerSeries::from_fn(n, (), |i| numerator.coeff(i + 1).clone());
    Ok(td.coeff(n) * int(degree))
}
