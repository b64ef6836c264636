//! Discrete models of the covering-space lemmas: the `Z^k` subgroup tower,
//! diameters of torus quotient graphs, and normalized Betti numbers.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Rational;

pub const DEFAULT_VERTEX_CAP: u64 = 1_000_000;

/// Sublattices `L_j = (2^{j-1} Z)^k` for `j = 1..=depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tower {
    pub k: u32,
    /// `[L_1 : L_j] = 2^{(j-1)k}`.
    #[serde(serialize_with = "as_strings")]
    pub indices: Vec<BigUint>,
}

fn as_strings<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|n| n.to_string()))
}

pub fn tower(k: u32, depth: u32) -> Result<Tower> {
    if k == 0 || depth == 0 {
        return Err(Error::DomainError(format!("rank {k} and depth {depth} must be at least 1")));
    }
    let indices = (0..depth).map(|j| BigUint::one() << (j as u64 * k as u64)).collect();
    Ok(Tower { k, indices })
}

/// Cayley graph of `Z/n_1 x ... x Z/n_k` with generators `±e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusQuotientGraph {
    moduli: Vec<u64>,
}

impl TorusQuotientGraph {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(Error::DomainError(format!("moduli {moduli:?} must be nonempty and positive")));
        }
        Ok(TorusQuotientGraph { moduli })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn vertex_count(&self) -> u128 {
        self.moduli.iter().try_fold(1u128, |acc, &n| acc.checked_mul(n as u128)).unwrap_or(u128::MAX)
    }

    /// `Σ ⌊n_i / 2⌋`.
    pub fn closed_form_diameter(&self) -> u64 {
        self.moduli.iter().map(|n| n / 2).sum()
    }

    /// Distances from vertex 0, indexed in mixed radix (first coordinate
    /// fastest), plus the radix strides.
    fn distances_from_origin(&self, cap: u64) -> Result<(Vec<u64>, Vec<usize>)> {
        let count = self.vertex_count();
        if count > cap as u128 {
            return Err(Error::TooLarge { vertices: count, cap });
        }
        let count = count as usize;
        let strides: Vec<usize> = self
            .moduli
            .iter()
            .scan(1usize, |acc, &n| {
                let s = *acc;
                *acc *= n as usize;
                Some(s)
            })
            .collect();
        let mut dist = vec![u64::MAX; count];
        let mut queue = VecDeque::from([0usize]);
        dist[0] = 0;
        while let Some(v) = queue.pop_front() {
            let d = dist[v];
            for i in 0..strides.len() {
                for sign in [1, -1] {
                    let u = self.step(v, i, sign, &strides);
                    if dist[u] == u64::MAX {
                        dist[u] = d + 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        Ok((dist, strides))
    }

    /// Neighbour of `v` along `±e_i`.
    fn step(&self, v: usize, i: usize, sign: i64, strides: &[usize]) -> usize {
        let n = self.moduli[i] as usize;
        let s = strides[i];
        let c = (v / s) % n;
        let next = if sign > 0 { (c + 1) % n } else { (c + n - 1) % n };
        v - c * s + next * s
    }

    /// Eccentricity of vertex 0 by breadth-first search; this is the diameter
    /// since the graph is vertex-transitive.
    pub fn bfs_diameter(&self, cap: u64) -> Result<u64> {
        let (dist, _) = self.distances_from_origin(cap)?;
        Ok(dist.into_iter().max().unwrap_or(0))
    }

    /// Diameter of the metric graph: every edge `{v, v + e_i}` is a unit
    /// segment and points may sit anywhere along it. This is the length
    /// space the covering lemma talks about; on a cycle of length `n` it is
    /// `n/2`, not `⌊n/2⌋`.
    ///
    /// By vertex-transitivity one endpoint edge per direction suffices. For
    /// two edges the distance between interior points is the minimum of four
    /// affine functions, so its maximum sits on the quarter-grid.
    pub fn length_diameter(&self, cap: u64) -> Result<Rational> {
        let (dist, strides) = self.distances_from_origin(cap)?;
        let d = |v: usize| dist[v] as i64;
        let mut best4 = 0i64;
        for i in 0..self.moduli.len() {
            for c in 0..dist.len() {
                // distance from b to x equals distance from 0 to x - e_i
                let from_b = |x: usize| d(self.step(x, i, -1, &strides));
                for j in 0..self.moduli.len() {
                    let e = self.step(c, j, 1, &strides);
                    let (a4, b4, c4, d4) = (4 * d(c), 4 * d(e), 4 * from_b(c), 4 * from_b(e));
                    let same_edge = c == 0 && j == i;
                    for s in 0..=4i64 {
                        for t in 0..=4i64 {
                            let mut f = (s + t + a4)
                                .min(s + 4 - t + b4)
                                .min(4 - s + t + c4)
                                .min(8 - s - t + d4);
                            if same_edge {
                                f = f.min((s - t).abs());
                            }
                            best4 = best4.max(f);
                        }
                    }
                }
            }
        }
        Ok(Rational::new(BigInt::from(best4), BigInt::from(4)))
    }

    /// `Σ ⌊n_i/2⌋` plus a half for each of up to two odd moduli. A modulus of
    /// 1 is a loop, and two loop midpoints at distinct vertices gain a full
    /// unit even when no other modulus is odd.
    pub fn closed_form_length_diameter(&self) -> Rational {
        let base = self.closed_form_diameter() as i64;
        let odd = self.moduli.iter().filter(|n| *n % 2 == 1).count() as i64;
        let loops = self.moduli.contains(&1) && base > 0;
        let halves = if loops { 2 } else { odd.min(2) };
        Rational::new(BigInt::from(2 * base + halves), BigInt::from(2))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverDiameter {
    /// Vertex diameters (graph distance between vertices).
    pub base_diam: u64,
    pub cover_diam: u64,
    /// Metric-graph diameters.
    #[serde(serialize_with = "rational_as_string")]
    pub base_length_diam: Rational,
    #[serde(serialize_with = "rational_as_string")]
    pub cover_length_diam: Rational,
    #[serde(serialize_with = "big_as_string")]
    pub index: BigUint,
    /// `cover_length_diam <= index * base_length_diam`.
    pub inequality_holds: bool,
    /// The same comparison on vertex diameters. It can fail (odd cycles,
    /// single-vertex bases) because rounding to vertices is not scale
    /// invariant.
    pub vertex_inequality_holds: bool,
}

fn rational_as_string<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::ring::format_rational(v))
}

fn big_as_string<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Diameters of the base quotient and of the cover with moduli scaled by
/// `factor`, and whether `diam(cover) <= index * diam(base)`.
pub fn cover_diameter(base: &[u64], factor: u64, cap: u64) -> Result<CoverDiameter> {
    if factor == 0 {
        return Err(Error::DomainError("cover factor must be at least 1".into()));
    }
    let base_graph = TorusQuotientGraph::new(base.to_vec())?;
    let scaled: Option<Vec<u64>> = base.iter().map(|n| n.checked_mul(factor)).collect();
    let cover_graph = TorusQuotientGraph::new(scaled.ok_or(Error::TooLarge {
        vertices: u128::MAX,
        cap,
    })?)?;
    let base_diam = base_graph.bfs_diameter(cap)?;
    let cover_diam = cover_graph.bfs_diameter(cap)?;
    for (g, d) in [(&base_graph, base_diam), (&cover_graph, cover_diam)] {
        if d != g.closed_form_diameter() {
            return Err(Error::InconsistentData(format!(
                "BFS diameter {d} of {:?} disagrees with the closed form {}",
                g.moduli(),
                g.closed_form_diameter()
            )));
        }
    }
    let base_length_diam = base_graph.length_diameter(cap)?;
    let cover_length_diam = cover_graph.length_diameter(cap)?;
    let index = BigUint::from(factor).pow(base.len() as u32);
    let index_r = Rational::from_integer(BigInt::from(index.clone()));
    let inequality_holds = cover_length_diam <= &index_r * &base_length_diam;
    let vertex_inequality_holds = BigUint::from(cover_diam) <= &index * BigUint::from(base_diam);
    Ok(CoverDiameter {
        base_diam,
        cover_diam,
        base_length_diam,
        cover_length_diam,
        index,
        inequality_holds,
        vertex_inequality_holds,
    })
}

/// `b_p(T^k) / [L_1 : L_j] = binom(k, p) / 2^{(j-1)k}` for `j = 1..=depth`.
pub fn l2_betti_ratio(k: u32, p: u32, depth: u32) -> Result<Vec<Rational>> {
    if p > k {
        return Err(Error::DomainError(format!("degree {p} exceeds rank {k}")));
    }
    let t = tower(k, depth)?;
    let betti = binomial(k, p);
    Ok(t
        .indices
        .into_iter()
        .map(|ix| Rational::new(betti.clone(), BigInt::from(ix)))
        .collect())
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}
