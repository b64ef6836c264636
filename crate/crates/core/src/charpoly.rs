//! Truncated polynomials in weighted characteristic-class generators.

use std::collections::BTreeMap;
use std::fmt;

use crate::partition::Partition;
use crate::ring::{format_rational, int, rat, Coeff, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// `p_i`, weight `i` (cohomological degree `4i`).
    Pontryagin,
    /// `c_i`, weight `i` (cohomological degree `2i`).
    Chern,
}

impl GeneratorKind {
    pub fn symbol(self) -> char {
        match self {
            GeneratorKind::Pontryagin => 'p',
            GeneratorKind::Chern => 'c',
        }
    }
}

/// Polynomial in `p_i` or `c_i` with every monomial of weight `<= weight_cap`.
#[derive(Clone, PartialEq, Debug)]
pub struct CharClassPoly<C: Coeff> {
    kind: GeneratorKind,
    weight_cap: u32,
    ctx: C::Ctx,
    terms: BTreeMap<Partition, C>,
}

impl<C: Coeff> CharClassPoly<C> {
    pub fn zero(kind: GeneratorKind, weight_cap: u32, ctx: C::Ctx) -> Self {
        CharClassPoly {
            kind,
            weight_cap,
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C, kind: GeneratorKind, weight_cap: u32) -> Self {
        let mut p = Self::zero(kind, weight_cap, c.ctx());
        p.insert(Partition::empty(), c);
        p
    }

    pub fn one(kind: GeneratorKind, weight_cap: u32, ctx: C::Ctx) -> Self {
        Self::constant(C::one_in(ctx), kind, weight_cap)
    }

    /// The single generator `p_i` / `c_i`.
    pub fn generator(i: u32, kind: GeneratorKind, weight_cap: u32, ctx: C::Ctx) -> Self {
        let mut p = Self::zero(kind, weight_cap, ctx);
        p.insert(Partition::new(vec![i]), C::one_in(ctx));
        p
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &C)> {
        self.terms.iter()
    }

    pub fn term(&self, monomial: &Partition) -> C {
        self.terms.get(monomial).cloned().unwrap_or_else(|| C::zero_in(self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c` to the coefficient of `monomial`, dropping it above the cap.
    pub fn insert(&mut self, monomial: Partition, c: C) {
        if monomial.weight() > self.weight_cap || c.is_zero_elem() {
            return;
        }
        let sum = match self.terms.get(&monomial) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if sum.is_zero_elem() {
            self.terms.remove(&monomial);
        } else {
            self.terms.insert(monomial, sum);
        }
    }

    fn check_compatible(&self, rhs: &Self) {
        assert_eq!(self.kind, rhs.kind, "mixing Pontryagin and Chern polynomials");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_compatible(rhs);
        let mut out = self.with_cap(self.weight_cap.min(rhs.weight_cap));
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&int(-1)))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_compatible(rhs);
        let cap = self.weight_cap.min(rhs.weight_cap);
        let mut out = Self::zero(self.kind, cap, self.ctx);
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            if wa > cap {
                continue;
            }
            for (mb, cb) in &rhs.terms {
                if wa + mb.weight() > cap {
                    continue;
                }
                out.insert(ma.merge(mb), ca.times(cb));
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.kind, self.weight_cap, self.ctx);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.scale(r));
        }
        out
    }

    pub fn mul_coeff(&self, k: &C) -> Self {
        let mut out = Self::zero(self.kind, self.weight_cap, self.ctx);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.times(k));
        }
        out
    }

    /// Re-truncates to a (not larger) weight cap.
    pub fn with_cap(&self, weight_cap: u32) -> Self {
        let weight_cap = weight_cap.min(self.weight_cap);
        CharClassPoly {
            kind: self.kind,
            weight_cap,
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= weight_cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of the given weight.
    pub fn component(&self, weight: u32) -> Self {
        CharClassPoly {
            kind: self.kind,
            weight_cap: self.weight_cap,
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == weight)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `exp` of a polynomial without constant term, as the finite sum
    /// `sum_{k <= cap} x^k / k!`.
    pub fn exp_nilpotent(&self) -> Self {
        assert!(
            !self.terms.contains_key(&Partition::empty()),
            "exp needs a polynomial without constant term"
        );
        let mut out = Self::one(self.kind, self.weight_cap, self.ctx);
        let mut power = out.clone();
        for k in 1..=self.weight_cap {
            power = power.mul(self).scale(&rat(1, k as i64));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        out
    }

    /// Pairs the weight-`weight` part with characteristic numbers:
    /// `sum_lambda coeff_lambda * numbers[lambda]`, absent numbers being zero.
    pub fn pair(&self, weight: u32, numbers: &BTreeMap<Partition, i64>) -> C {
        let mut acc = C::zero_in(self.ctx);
        for (m, c) in &self.terms {
            if m.weight() != weight {
                continue;
            }
            if let Some(&n) = numbers.get(m) {
                if n != 0 {
                    acc = acc.plus(&c.scale(&int(n)));
                }
            }
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> CharClassPoly<D> {
        let mut out = CharClassPoly::zero(self.kind, self.weight_cap, ctx);
        for (m, c) in &self.terms {
            out.insert(m.clone(), f(c));
        }
        out
    }
}

impl CharClassPoly<Rational> {
    /// Power sums `s_1, ..., s_cap` of the formal variables whose elementary
    /// symmetric functions are the generators (`t_j = y_j^2` for Pontryagin,
    /// `z_j` for Chern), via Newton's identities. With `roots = Some(n)` the
    /// generators of index above `n` are treated as zero.
    pub fn power_sums(kind: GeneratorKind, weight_cap: u32, roots: Option<u32>) -> Vec<Self> {
        let e = |i: u32| {
            if roots.is_some_and(|n| i > n) {
                Self::zero(kind, weight_cap, ())
            } else {
                Self::generator(i, kind, weight_cap, ())
            }
        };
        let mut s: Vec<Self> = vec![Self::zero(kind, weight_cap, ())];
        for n in 1..=weight_cap {
            // s_n = sum_{i=1}^{n-1} (-1)^{i-1} e_i s_{n-i} + (-1)^{n-1} n e_n
            let mut acc = e(n).scale(&int(if n % 2 == 1 { n as i64 } else { -(n as i64) }));
            for i in 1..n {
                let term = e(i).mul(&s[(n - i) as usize]);
                acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
            }
            s.push(acc);
        }
        s.remove(0);
        s
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl fmt::Display for CharClassPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let sym = self.kind.symbol();
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_rational(c))?;
            let mut parts = m.parts().to_vec();
            parts.dedup();
            for g in parts {
                let mult = m.parts().iter().filter(|&&x| x == g).count();
                if mult == 1 {
                    write!(f, "·{sym}{g}")?;
                } else {
                    write!(f, "·{sym}{g}^{mult}")?;
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> CharClassPoly<C> {
    /// True when no coefficient is zero-valued but stored (canonical form).
    pub fn is_canonical(&self) -> bool {
        self.terms.values().all(|c| !c.is_zero_elem())
            && self.terms.keys().all(|m| m.weight() <= self.weight_cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = CharClassPoly<Rational>;

    fn mono(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn newton_power_sums_low_weight() {
        let s = P::power_sums(GeneratorKind::Pontryagin, 3, None);
        // s1 = e1, s2 = e1^2 - 2 e2, s3 = e1^3 - 3 e1 e2 + 3 e3
        assert_eq!(s[0].term(&mono(&[1])), int(1));
        assert_eq!(s[1].term(&mono(&[1, 1])), int(1));
        assert_eq!(s[1].term(&mono(&[2])), int(-2));
        assert_eq!(s[2].term(&mono(&[1, 1, 1])), int(1));
        assert_eq!(s[2].term(&mono(&[2, 1])), int(-3));
        assert_eq!(s[2].term(&mono(&[3])), int(3));
    }

    #[test]
    fn multiplication_truncates() {
        let p1 = P::generator(1, GeneratorKind::Pontryagin, 2, ());
        let p2 = P::generator(2, GeneratorKind::Pontryagin, 2, ());
        assert!(p1.mul(&p2).is_zero());
        assert_eq!(p1.mul(&p1).term(&mono(&[1, 1])), int(1));
    }

    #[test]
    fn exp_of_generator() {
        let p1 = P::generator(1, GeneratorKind::Pontryagin, 3, ());
        let e = p1.exp_nilpotent();
        assert_eq!(e.term(&mono(&[1, 1, 1])), rat(1, 6));
        assert!(e.is_canonical());
    }

    #[test]
    fn pairing() {
        let mut p = P::zero(GeneratorKind::Pontryagin, 2, ());
        p.insert(mono(&[2]), rat(7, 45));
        p.insert(mono(&[1, 1]), rat(-1, 45));
        p.insert(mono(&[1]), int(5));
        let numbers = BTreeMap::from([(mono(&[2]), 7), (mono(&[1, 1]), 4)]);
        assert_eq!(p.pair(2, &numbers), int(1));
        assert_eq!(p.to_string(), "(5)·p1 + (-1/45)·p1^2 + (7/45)·p2");
    }
}
