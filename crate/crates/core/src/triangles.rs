//! Triangle enumeration and classification against a vertex subset.
//!
//! Triangles are listed once each by orienting every edge from lower to
//! higher (degree, id) rank and intersecting forward neighbour lists, which
//! costs O(m^{3/2}). Each triangle is then bucketed by how many of its
//! vertices lie in the subset.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::scalar::Count;

/// Triangles of a graph bucketed by `|triangle ∩ S|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TriangleCensus<C> {
    /// All three vertices in `S`: `i(S)`.
    pub inside: C,
    /// Exactly two vertices in `S`: `o(S)`.
    pub outbound: C,
    pub touching_one: C,
    pub outside: C,
}

impl<C: Count> TriangleCensus<C> {
    pub fn zero() -> Self {
        Self { inside: C::zero(), outbound: C::zero(), touching_one: C::zero(), outside: C::zero() }
    }

    pub fn total(&self) -> C {
        self.inside.clone() + self.outbound.clone() + self.touching_one.clone() + self.outside.clone()
    }

    pub fn from_buckets(buckets: [u64; 4]) -> Self {
        Self {
            outside: C::from_u64_exact(buckets[0]),
            touching_one: C::from_u64_exact(buckets[1]),
            outbound: C::from_u64_exact(buckets[2]),
            inside: C::from_u64_exact(buckets[3]),
        }
    }

    /// `self + delta`, failing if any bucket would go negative.
    pub fn apply(&self, delta: &CensusDelta) -> Result<Self> {
        fn shift<C: Count>(value: &C, by: i64) -> Option<C> {
            let mag = C::from_u64(by.unsigned_abs())?;
            if by >= 0 {
                value.checked_add(&mag)
            } else {
                value.checked_sub(&mag)
            }
        }
        let bad = || Error::Domain(format!("delta {delta:?} does not apply to this census"));
        Ok(Self {
            inside: shift(&self.inside, delta.d_inside).ok_or_else(bad)?,
            outbound: shift(&self.outbound, delta.d_outbound).ok_or_else(bad)?,
            touching_one: shift(&self.touching_one, delta.d_touching_one).ok_or_else(bad)?,
            outside: shift(&self.outside, delta.d_outside).ok_or_else(bad)?,
        })
    }
}

/// Change in each census bucket caused by moving one vertex into or out of `S`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CensusDelta {
    pub d_inside: i64,
    pub d_outbound: i64,
    pub d_touching_one: i64,
    pub d_outside: i64,
}

impl CensusDelta {
    /// Delta for inserting a vertex whose neighbourhood holds `in_in` edges
    /// with both ends in `S`, `in_out` edges with one end in `S`, and
    /// `out_out` edges with neither.
    fn insertion(in_in: u64, in_out: u64, out_out: u64) -> Self {
        let (a, b, c) = (in_in as i64, in_out as i64, out_out as i64);
        Self { d_inside: a, d_outbound: b - a, d_touching_one: c - b, d_outside: -c }
    }

    pub fn negate(self) -> Self {
        Self {
            d_inside: -self.d_inside,
            d_outbound: -self.d_outbound,
            d_touching_one: -self.d_touching_one,
            d_outside: -self.d_outside,
        }
    }
}

/// Calls `f(a, b, c)` once for every triangle of `g`.
pub fn for_each_triangle(g: &Graph, mut f: impl FnMut(usize, usize, usize)) {
    for u in 0..g.vertex_count() {
        let fu = g.forward_neighbors(u);
        for &v in fu {
            intersect_sorted(fu, g.forward_neighbors(v), |w| f(u, v, w));
        }
    }
}

/// Total number of triangles.
pub fn triangle_count(g: &Graph) -> u64 {
    let mut total = 0u64;
    for_each_triangle(g, |_, _, _| total += 1);
    total
}

#[inline]
fn intersect_sorted(a: &[usize], b: &[usize], mut f: impl FnMut(usize)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Classifies every triangle of `g` by its intersection with `s`.
pub fn census<C: Count>(g: &Graph, s: &VertexSet) -> Result<TriangleCensus<C>> {
    s.check_for(g)?;
    let mut buckets = [0u64; 4];
    let m = |v: usize| s.contains(v) as usize;
    for_each_triangle(g, |a, b, c| buckets[m(a) + m(b) + m(c)] += 1);
    Ok(TriangleCensus::from_buckets(buckets))
}

/// `Δ(uv) = |N(u) ∩ N(v)|`, the number of triangles through edge `uv`.
pub fn edge_triangle_count(g: &Graph, u: usize, v: usize) -> Result<u64> {
    if !g.has_edge(u, v) {
        return Err(Error::Domain(format!("({u}, {v}) is not an edge")));
    }
    let mut count = 0;
    intersect_sorted(g.neighbors(u), g.neighbors(v), |_| count += 1);
    Ok(count)
}

/// Counts edges inside `N(v)` by how many endpoints lie in `s`.
fn neighbourhood_edges(g: &Graph, s: &VertexSet, v: usize) -> (u64, u64, u64) {
    let nv = g.neighbors(v);
    let mut by = [0u64; 3];
    for &a in nv {
        intersect_sorted(nv, g.neighbors(a), |b| {
            if b > a {
                by[s.contains(a) as usize + s.contains(b) as usize] += 1;
            }
        });
    }
    (by[2], by[1], by[0])
}

/// Census change for `S → S ∪ {v}`.
pub fn add_vertex_delta(g: &Graph, s: &VertexSet, v: usize) -> Result<CensusDelta> {
    s.check_for(g)?;
    if v >= g.vertex_count() || s.contains(v) {
        return Err(Error::Domain(format!("vertex {v} is not addable")));
    }
    let (ii, io, oo) = neighbourhood_edges(g, s, v);
    Ok(CensusDelta::insertion(ii, io, oo))
}

/// Census change for `S → S \ {v}`.
pub fn remove_vertex_delta(g: &Graph, s: &VertexSet, v: usize) -> Result<CensusDelta> {
    s.check_for(g)?;
    if v >= g.vertex_count() || !s.contains(v) {
        return Err(Error::Domain(format!("vertex {v} is not a member")));
    }
    // v itself is not in its own neighbourhood, so membership of v is irrelevant
    let (ii, io, oo) = neighbourhood_edges(g, s, v);
    Ok(CensusDelta::insertion(ii, io, oo).negate())
}

/// Bitmask adjacency for graphs of at most 64 vertices, used by the
/// exhaustive searches. Subsets are plain `u64` masks.
#[derive(Clone, Debug)]
pub struct MaskGraph {
    adj: Vec<u64>,
}

impl MaskGraph {
    pub fn new(g: &Graph) -> Option<Self> {
        crate::graph::adjacency_masks(g).map(|adj| Self { adj })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// `(d_inside, d_outbound)` for adding `v ∉ s`.
    #[inline]
    pub fn add_delta(&self, s: u64, v: usize) -> (i64, i64) {
        let nv = self.adj[v];
        let mut in_nb = nv & s;
        let (mut twice_ii, mut io) = (0u32, 0u32);
        while in_nb != 0 {
            let a = in_nb.trailing_zeros() as usize;
            in_nb &= in_nb - 1;
            let common = self.adj[a] & nv;
            twice_ii += (common & s).count_ones();
            io += (common & !s).count_ones();
        }
        let ii = (twice_ii / 2) as i64;
        (ii, io as i64 - ii)
    }

    /// `(d_inside, d_outbound)` for removing `v ∈ s`.
    #[inline]
    pub fn remove_delta(&self, s: u64, v: usize) -> (i64, i64) {
        let (a, b) = self.add_delta(s & !(1 << v), v);
        (-a, -b)
    }

    /// `(i(S), o(S))` by direct counting.
    pub fn inside_outbound(&self, s: u64) -> (u64, u64) {
        let (mut inside, mut outbound) = (0u64, 0u64);
        let mut rest = s;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut later = self.adj[u] & s & above(u);
            while later != 0 {
                let v = later.trailing_zeros() as usize;
                later &= later - 1;
                let common = self.adj[u] & self.adj[v];
                inside += (common & s & above(v)).count_ones() as u64;
                outbound += (common & !s).count_ones() as u64;
            }
        }
        (inside, outbound)
    }

    /// Union of neighbourhoods of members of `s`.
    #[inline]
    pub fn neighborhood(&self, s: u64) -> u64 {
        let mut out = 0;
        let mut rest = s;
        while rest != 0 {
            out |= self.adj[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        out
    }

    pub fn is_connected(&self, s: u64) -> bool {
        if s == 0 {
            return true;
        }
        let mut seen = s & s.wrapping_neg();
        loop {
            let next = (seen | self.neighborhood(seen)) & s;
            if next == seen {
                return seen == s;
            }
            seen = next;
        }
    }
}

/// Mask of vertex ids strictly greater than `v`.
#[inline]
fn above(v: usize) -> u64 {
    u64::MAX.checked_shl(v as u32 + 1).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_bigint::BigUint;

    /// Independent oracle: every vertex triple checked directly.
    fn triple_loop(g: &Graph, s: &VertexSet) -> [u64; 4] {
        let n = g.vertex_count();
        let mut b = [0u64; 4];
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    if g.has_edge(x, y) && g.has_edge(y, z) && g.has_edge(x, z) {
                        b[s.contains(x) as usize + s.contains(y) as usize + s.contains(z) as usize] += 1;
                    }
                }
            }
        }
        b
    }

    #[test]
    fn square_example_square() {
        let (g, s) = fixtures::square_example();
        let c: TriangleCensus<u64> = census(&g, &s).unwrap();
        assert_eq!((c.inside, c.outbound, c.touching_one, c.outside), (2, 1, 0, 0));
    }

    #[test]
    fn k5_full_set() {
        let g = Graph::complete(5);
        let c: TriangleCensus<BigUint> = census(&g, &VertexSet::full(5)).unwrap();
        assert_eq!(c.inside, BigUint::from(10u32));
        assert_eq!(c.total(), BigUint::from(10u32));
        assert_eq!(c.outbound + c.touching_one + c.outside, BigUint::from(0u32));
    }

    #[test]
    fn empty_set_is_all_outside() {
        let g = Graph::complete(6);
        let c: TriangleCensus<u64> = census(&g, &VertexSet::new(6)).unwrap();
        assert_eq!((c.inside, c.outbound, c.touching_one, c.outside), (0, 0, 0, 20));
    }

    #[test]
    fn random_gnp8_matches_triple_loop() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let g = fixtures::gnp(8, 0.5, &mut rng);
            let s = VertexSet::from_mask(8, rng.gen::<u64>() & 0xff);
            let c: TriangleCensus<u64> = census(&g, &s).unwrap();
            let b = triple_loop(&g, &s);
            assert_eq!([c.outside, c.touching_one, c.outbound, c.inside], b);
        }
    }

    #[test]
    fn edge_counts() {
        let k3 = Graph::complete(3);
        assert_eq!(edge_triangle_count(&k3, 0, 1).unwrap(), 1);
        for n in 3..9 {
            assert_eq!(edge_triangle_count(&Graph::complete(n), 0, n - 1).unwrap(), n as u64 - 2);
        }
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(edge_triangle_count(&path, 0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn square_example_edges() {
        let (g, _) = fixtures::square_example();
        let id = |t: &str| g.vertex_by_label(t).unwrap();
        // top edge (0,2)-(2,2)
        assert_eq!(edge_triangle_count(&g, id("b"), id("d")).unwrap(), 1);
        // diagonal (0,0)-(2,2) and right edge (2,0)-(2,2)
        assert_eq!(edge_triangle_count(&g, id("a"), id("d")).unwrap(), 2);
        assert_eq!(edge_triangle_count(&g, id("c"), id("d")).unwrap(), 2);
        let sum: u64 = g.edges().map(|(u, v)| edge_triangle_count(&g, u, v).unwrap()).sum();
        assert_eq!(sum, 3 * triangle_count(&g));
    }

    #[test]
    fn add_delta_examples() {
        let g = Graph::complete(4);
        let s = VertexSet::from_members(4, [0, 1, 2]).unwrap();
        let d = add_vertex_delta(&g, &s, 3).unwrap();
        assert_eq!((d.d_inside, d.d_outbound), (3, -3));
        for v in 0..4 {
            let d = add_vertex_delta(&g, &VertexSet::new(4), v).unwrap();
            assert_eq!((d.d_inside, d.d_outbound), (0, 0));
        }
        assert!(matches!(add_vertex_delta(&g, &s, 0), Err(Error::Domain(_))));
        assert!(matches!(remove_vertex_delta(&g, &s, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn mask_graph_agrees_with_census() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let g = fixtures::gnp(n, 0.5, &mut rng);
            let mg = MaskGraph::new(&g).unwrap();
            let s = rng.gen::<u64>() & ((1 << n) - 1);
            let c: TriangleCensus<u64> = census(&g, &VertexSet::from_mask(n, s)).unwrap();
            assert_eq!(mg.inside_outbound(s), (c.inside, c.outbound));
            let v = rng.gen_range(0..n);
            let (di, dout) = if s >> v & 1 == 1 { mg.remove_delta(s, v) } else { mg.add_delta(s, v) };
            let after: TriangleCensus<u64> = census(&g, &VertexSet::from_mask(n, s ^ (1 << v))).unwrap();
            assert_eq!(c.inside as i64 + di, after.inside as i64);
            assert_eq!(c.outbound as i64 + dout, after.outbound as i64);
            assert_eq!(mg.is_connected(s), crate::graph::is_connected(&g, &VertexSet::from_mask(n, s)).unwrap());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn graph_and_set() -> impl Strategy<Value = (Graph, u64, usize)> {
            (1usize..=12).prop_flat_map(|n| {
                let pairs = n * (n - 1) / 2;
                (proptest::collection::vec(any::<bool>(), pairs), any::<u64>(), 0..n).prop_map(move |(bits, s, v)| {
                    let g = fixtures::graph_from_pair_bits(n, &bits);
                    (g, s & ((1u64 << n) - 1), v)
                })
            })
        }

        proptest! {
            #[test]
            fn census_matches_triple_loop((g, s, _) in graph_and_set()) {
                let set = VertexSet::from_mask(g.vertex_count(), s);
                let c: TriangleCensus<u64> = census(&g, &set).unwrap();
                prop_assert_eq!([c.outside, c.touching_one, c.outbound, c.inside], triple_loop(&g, &set));
            }

            #[test]
            fn delta_round_trip((g, s, v) in graph_and_set()) {
                let n = g.vertex_count();
                let mut set = VertexSet::from_mask(n, s);
                set.remove(v);
                let before: TriangleCensus<BigUint> = census(&g, &set).unwrap();
                let add = add_vertex_delta(&g, &set, v).unwrap();
                let mut grown = set.clone();
                grown.insert(v);
                let after = before.apply(&add).unwrap();
                prop_assert_eq!(&after, &census::<BigUint>(&g, &grown).unwrap());
                let remove = remove_vertex_delta(&g, &grown, v).unwrap();
                prop_assert_eq!(remove, add.negate());
                prop_assert_eq!(after.apply(&remove).unwrap(), before);
            }

            #[test]
            fn edge_counts_sum_to_three_per_triangle((g, _, _) in graph_and_set()) {
                let sum: u64 = g.edges().map(|(u, v)| edge_triangle_count(&g, u, v).unwrap()).sum();
                prop_assert_eq!(sum, 3 * triangle_count(&g));
            }
        }
    }
}
