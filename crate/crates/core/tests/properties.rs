use std::collections::BTreeMap;

use genus_forge::bounds::{moser_constant, BoundParams};
use genus_forge::catalog::Catalog;
use genus_forge::covering::{cover_diameter, TorusQuotientGraph, DEFAULT_VERTEX_CAP};
use genus_forge::elliptic::{elliptic_genus_theta_route, index_series};
use genus_forge::modular::witten_fit;
use genus_forge::partition::partitions_of;
use genus_forge::ring::{int, rat};
use genus_forge::{
    connected_sum, elliptic_genus, genus_value, multiplicative_class, product, twisted_indices, EllipticKind,
    GeneratorKind, GenusKind, IndexFamily, ManifoldData, Partition, PowerSeries, QSeries, Rational,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn qseries(trunc: u32) -> impl Strategy<Value = QSeries> {
    proptest::collection::vec(rational(), trunc as usize).prop_map(move |v| QSeries::from_dense(v, trunc))
}

fn pontryagin_data(name: &str, quarter: u32) -> impl Strategy<Value = ManifoldData> {
    let parts = partitions_of(quarter);
    let name = name.to_string();
    proptest::collection::vec(-300i64..=300, parts.len()).prop_map(move |vals| {
        let mut m = ManifoldData::new(name.clone(), 4 * quarter);
        m.pontryagin_numbers = Some(parts.iter().cloned().zip(vals).collect());
        m
    })
}

/// Data with every number involving `p₁` set to zero.
fn string_data(quarter: u32) -> impl Strategy<Value = ManifoldData> {
    pontryagin_data("S", quarter).prop_map(|mut m| {
        for (p, v) in m.pontryagin_numbers.as_mut().unwrap().iter_mut() {
            if p.parts().contains(&1) {
                *v = 0;
            }
        }
        m
    })
}

fn even_factor(cap: usize) -> impl Strategy<Value = PowerSeries<Rational>> {
    proptest::collection::vec(rational(), cap / 2).prop_map(move |v| {
        PowerSeries::from_fn(cap, (), |i| match i {
            0 => Rational::one(),
            _ if i % 2 == 1 => Rational::zero(),
            _ => v[i / 2 - 1].clone(),
        })
    })
}

fn elementary(roots: &[Rational], i: u32) -> Rational {
    let mut e = vec![Rational::one()];
    for t in roots {
        let mut next = e.clone();
        next.push(Rational::zero());
        for k in 1..next.len() {
            next[k] += &e[k - 1] * t;
        }
        e = next;
    }
    e.get(i as usize).cloned().unwrap_or_else(Rational::zero)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qseries_ring_axioms(a in qseries(7), b in qseries(7), c in qseries(7)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&QSeries::one(7)), a);
    }

    #[test]
    fn qseries_exp_log_inverse(a in qseries(8)) {
        let unit = QSeries::one(8).add(&a.sub(&QSeries::constant(a.constant_term(), 8)));
        prop_assert_eq!(unit.log().unwrap().exp().unwrap(), unit.clone());
        prop_assert_eq!(unit.mul(&unit.inverse().unwrap()), QSeries::one(8));
        let nil = a.sub(&QSeries::constant(a.constant_term(), 8));
        prop_assert_eq!(nil.exp().unwrap().log().unwrap(), nil);
    }

    /// The class evaluated at `p_i = e_i(t)` is `∏ Q(y_j)` with `y_j² = t_j`.
    #[test]
    fn multiplicative_class_explicit_roots(
        factor in even_factor(8),
        roots in proptest::collection::vec(rational(), 1..=3),
    ) {
        let class = multiplicative_class(&factor, GeneratorKind::Pontryagin, 4, None).unwrap();
        // ∏_j Σ_n q_n t_j^n ε^n, as a polynomial in ε
        let mut prod = vec![Rational::one(), Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
        for t in &roots {
            let q: Vec<Rational> = (0..=4).map(|n| factor.coeff(2 * n) * t.pow(n as i32)).collect();
            let mut next = vec![Rational::zero(); 5];
            for i in 0..=4 {
                for j in 0..=4 - i {
                    next[i + j] += &prod[i] * &q[j];
                }
            }
            prod = next;
        }
        for (w, expected) in prod.iter().enumerate() {
            let got: Rational = class
                .component(w as u32)
                .terms()
                .map(|(p, c)| p.parts().iter().fold(c.clone(), |acc, &i| acc * elementary(&roots, i)))
                .sum();
            prop_assert_eq!(&got, expected, "weight {}", w);
        }
    }

    #[test]
    fn class_cap_and_root_stability(factor in even_factor(10)) {
        let big = multiplicative_class(&factor, GeneratorKind::Pontryagin, 5, None).unwrap();
        let small = multiplicative_class(&factor, GeneratorKind::Pontryagin, 4, None).unwrap();
        prop_assert_eq!(big.with_cap(4), small.clone());
        let rooted = multiplicative_class(&factor, GeneratorKind::Pontryagin, 4, Some(4)).unwrap();
        prop_assert_eq!(rooted, small);
    }

    #[test]
    fn genera_multiply_and_add(a in pontryagin_data("A", 1), b in pontryagin_data("B", 2), c in pontryagin_data("C", 2)) {
        let ab = product(&a, &b).unwrap();
        let bc = connected_sum(&b, &c).unwrap();
        for kind in [GenusKind::Ahat, GenusKind::Lhat, GenusKind::Signature] {
            let g = |m: &ManifoldData| genus_value(m, kind).unwrap().value;
            prop_assert_eq!(g(&ab), g(&a) * g(&b));
            prop_assert_eq!(g(&bc), g(&b) + g(&c));
        }
    }

    #[test]
    fn lhat_is_signature(m in (1u32..=3).prop_flat_map(|w| pontryagin_data("M", w))) {
        prop_assert_eq!(
            genus_value(&m, GenusKind::Lhat).unwrap().value,
            genus_value(&m, GenusKind::Signature).unwrap().value
        );
    }

    #[test]
    fn elliptic_truncation_stable(m in pontryagin_data("M", 2), extra in 1u32..4) {
        for kind in EllipticKind::ALL {
            let short = elliptic_genus(&m, kind, 4).unwrap().series;
            let long = elliptic_genus(&m, kind, 4 + extra).unwrap().series;
            prop_assert_eq!(long.truncate(8), short);
        }
    }

    #[test]
    fn theta_route_and_indices_agree(m in (1u32..=2).prop_flat_map(|w| pontryagin_data("M", w))) {
        let order = 4;
        let ell2 = elliptic_genus_theta_route(&m, EllipticKind::Ell2, order).unwrap().series;
        let b = twisted_indices(&m, IndexFamily::B, order).unwrap();
        prop_assert_eq!(index_series(&b, order), ell2);
        let w = elliptic_genus_theta_route(&m, EllipticKind::Witten, order).unwrap().series;
        let wi = twisted_indices(&m, IndexFamily::W, order).unwrap();
        prop_assert_eq!(index_series(&wi, order), w);
        prop_assert_eq!(elliptic_genus(&m, EllipticKind::Ell1, order).unwrap().series.constant_term(),
            genus_value(&m, GenusKind::Signature).unwrap().value);
    }

    /// String data has a modular Witten genus.
    #[test]
    fn string_witten_genus_is_modular(m in (2u32..=4).prop_flat_map(string_data)) {
        let fit = witten_fit(&m, 8).unwrap();
        prop_assert!(fit.residual_ok, "{:?}", fit.first_residual);
        let refit = witten_fit(&m, 12).unwrap();
        prop_assert_eq!(refit.coefficients, fit.coefficients);
    }

    #[test]
    fn catalog_round_trip(m in (1u32..=3).prop_flat_map(|w| pontryagin_data("M", w)), spin: bool, ahat in rational()) {
        let mut m = m;
        m.spin = spin;
        let mut asserted = ManifoldData::new("Z", 8);
        asserted.asserted.insert(GenusKind::Ahat, ahat);
        let cat = Catalog::new(vec![m, asserted]).unwrap();
        let text = cat.to_json();
        let back = Catalog::from_json(&text).unwrap();
        prop_assert_eq!(&back, &cat);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn bfs_is_closed_form(moduli in proptest::collection::vec(1u64..=12, 1..=3)) {
        let g = TorusQuotientGraph::new(moduli).unwrap();
        prop_assert_eq!(g.bfs_diameter(DEFAULT_VERTEX_CAP).unwrap(), g.closed_form_diameter());
        prop_assert_eq!(g.length_diameter(DEFAULT_VERTEX_CAP).unwrap(), g.closed_form_length_diameter());
    }

    #[test]
    fn diameter_inequality(moduli in proptest::collection::vec(1u64..=6, 1..=3), factor in 1u64..=4) {
        prop_assert!(cover_diameter(&moduli, factor, DEFAULT_VERTEX_CAP).unwrap().inequality_holds);
    }

    #[test]
    fn moser_monotone(lambda in 0.0f64..5.0, diam in 0.1f64..5.0, cmp in 0.1f64..5.0, bump in 0.01f64..1.0) {
        let mut p = BoundParams::new(4, 5.0, lambda, diam, 1.0);
        p.cmp = cmp;
        let base = moser_constant(&p).unwrap().constant;
        for field in 0..3 {
            let mut q = p.clone();
            match field {
                0 => q.lambda += bump,
                1 => q.diam += bump,
                _ => q.cmp += bump,
            }
            prop_assert!(moser_constant(&q).unwrap().constant >= base);
        }
    }
}

#[test]
fn partition_keys_render_descending() {
    let m: BTreeMap<Partition, i64> = BTreeMap::from([(Partition::new(vec![1, 2, 1]), 3)]);
    assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"2,1,1":3}"#);
    assert_eq!(int(3), rat(6, 2));
}
