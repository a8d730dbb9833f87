//! Clique → Connected-Cohesive instance transformation.
//!
//! Every missing edge `uv` of the input graph is added, and a fresh clique
//! (the gadget) is attached to both `u` and `v`. The original vertices end up
//! inducing `K_n`, so a `k`-clique of the input has cohesion exactly
//! `lambda_threshold(k, n)` in the transformed graph.
//!
//! The default gadget size `2 * C(n,3)^4` is far too large to build for any
//! interesting `n`, so instances above a vertex cap are kept virtual: counts
//! only, computed in closed form.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::cohesion::{cohesion, cohesion_of_set, lambda_threshold, CohesionValue};
use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph, VertexSet};
use crate::scalar::{choose2, choose3};
use crate::triangles::{census, TriangleCensus};
use crate::Cohesion;

pub const DEFAULT_MATERIALIZATION_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct ReduceOptions {
    /// Gadget clique size; `None` uses `2 * C(n,3)^4`.
    pub gadget_size: Option<BigUint>,
    /// Largest transformed vertex count that is built explicitly.
    pub materialization_cap: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self { gadget_size: None, materialization_cap: DEFAULT_MATERIALIZATION_CAP }
    }
}

impl ReduceOptions {
    pub fn with_gadget_size(size: u64) -> Self {
        Self { gadget_size: Some(BigUint::from(size)), ..Self::default() }
    }
}

#[derive(Clone, Debug)]
pub enum Transformed {
    Materialized(Graph),
    Virtual { vertices: BigUint, edges: BigUint },
}

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub original_n: usize,
    pub k: usize,
    pub lambda: Cohesion,
    pub gadget_size: BigUint,
    /// Missing pairs `(u, v)`, `u < v`, lexicographic; gadget `j` belongs to
    /// `non_edges[j]`.
    pub non_edges: Vec<(usize, usize)>,
    pub transformed: Transformed,
    /// Original vertex id → transformed vertex id.
    pub embedding: Vec<usize>,
}

/// `2 * C(n,3)^4`.
pub fn default_gadget_size(n: u64) -> BigUint {
    choose3(&BigUint::from(n)).pow(4) * 2u32
}

/// Transforms `(g, k)` into `(G', lambda)`.
pub fn reduce(g: &Graph, k: usize, opts: &ReduceOptions) -> Result<ReductionInstance> {
    let n = g.vertex_count();
    if n < 4 {
        return Err(Error::Domain(format!("need at least 4 vertices, got {n}")));
    }
    if k < 3 || k > n {
        return Err(Error::Domain(format!("need 3 <= k <= {n}, got k={k}")));
    }
    let components = g.components();
    if components.len() > 1 {
        return Err(Error::Disconnected { components });
    }
    let gadget_size = match &opts.gadget_size {
        Some(s) if s.is_zero() => return Err(Error::Domain("gadget size must be positive".into())),
        Some(s) => s.clone(),
        None => default_gadget_size(n as u64),
    };
    let non_edges = g.non_edges();
    let lambda = lambda_threshold(k as u64, n as u64)?;
    let vertices = expected_vertex_count(n, non_edges.len(), &gadget_size);
    let edges = expected_edge_count(n, non_edges.len(), &gadget_size);

    let transformed = match vertices.to_usize() {
        Some(total) if total <= opts.materialization_cap => {
            let gsize = gadget_size.to_usize().expect("bounded by vertex count");
            Transformed::Materialized(materialize(g, &non_edges, gsize)?)
        }
        _ => Transformed::Virtual { vertices, edges },
    };
    Ok(ReductionInstance { original_n: n, k, lambda, gadget_size, non_edges, transformed, embedding: (0..n).collect() })
}

/// `n + |non_edges| * gadget`.
pub fn expected_vertex_count(n: usize, non_edges: usize, gadget: &BigUint) -> BigUint {
    BigUint::from(n) + BigUint::from(non_edges) * gadget
}

/// `C(n,2) + |non_edges| * (C(gadget,2) + 2 * gadget)`.
pub fn expected_edge_count(n: usize, non_edges: usize, gadget: &BigUint) -> BigUint {
    choose2(&BigUint::from(n)) + BigUint::from(non_edges) * (choose2(gadget) + gadget * 2u32)
}

fn materialize(g: &Graph, non_edges: &[(usize, usize)], gadget: usize) -> Result<Graph> {
    let n = g.vertex_count();
    let total = n + non_edges.len() * gadget;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    for (j, &(u, v)) in non_edges.iter().enumerate() {
        let base = n + j * gadget;
        for a in base..base + gadget {
            edges.push((u, a));
            edges.push((v, a));
            for b in a + 1..base + gadget {
                edges.push((a, b));
            }
        }
    }
    let original: Vec<String> = (0..n).map(|v| g.label(v).into_owned()).collect();
    let taken: HashSet<&str> = original.iter().map(String::as_str).collect();
    let mut prefix = String::from("w");
    while taken.iter().any(|l| l.starts_with(prefix.as_str())) {
        prefix.insert(0, '_');
    }
    let mut labels = original.clone();
    for j in 0..non_edges.len() {
        for t in 0..gadget {
            labels.push(format!("{prefix}{j}.{t}"));
        }
    }
    debug_assert_eq!(labels.len(), total);
    Graph::from_edges(total, edges)?.with_labels(labels)
}

impl ReductionInstance {
    pub fn graph(&self) -> Option<&Graph> {
        match &self.transformed {
            Transformed::Materialized(g) => Some(g),
            Transformed::Virtual { .. } => None,
        }
    }

    pub fn is_materialized(&self) -> bool {
        self.graph().is_some()
    }

    /// Vertex count of `G'`: actual when materialized, closed form otherwise.
    pub fn transformed_vertices(&self) -> BigUint {
        match &self.transformed {
            Transformed::Materialized(g) => BigUint::from(g.vertex_count()),
            Transformed::Virtual { vertices, .. } => vertices.clone(),
        }
    }

    pub fn transformed_edges(&self) -> BigUint {
        match &self.transformed {
            Transformed::Materialized(g) => BigUint::from(g.edge_count()),
            Transformed::Virtual { edges, .. } => edges.clone(),
        }
    }

    /// Transformed ids of gadget `j`. Only meaningful when materialized.
    pub fn gadget_vertices(&self, j: usize) -> std::ops::Range<usize> {
        let g = self.gadget_size.to_usize().expect("materialized gadget size fits usize");
        let base = self.original_n + j * g;
        base..base + g
    }

    fn is_original_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.non_edges.binary_search(&(u.min(v), u.max(v))).is_err()
    }

    fn require_graph(&self) -> Result<&Graph> {
        self.graph().ok_or_else(|| Error::Unsupported("instance is virtual (not materialized)".into()))
    }
}

/// One structural check in a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Audits a materialized instance: closed-form counts, the `K_n` core, and
/// the exact neighbourhood of every gadget vertex.
pub fn verify_instance(inst: &ReductionInstance) -> Result<VerificationReport> {
    let g = inst.require_graph()?;
    let n = inst.original_n;
    let gsize = inst.gadget_size.to_usize().expect("materialized");
    let mut checks = Vec::with_capacity(4);

    let want_v = expected_vertex_count(n, inst.non_edges.len(), &inst.gadget_size);
    let have_v = BigUint::from(g.vertex_count());
    checks.push(Check {
        name: "vertex_count",
        passed: want_v == have_v,
        detail: format!("expected {want_v}, found {have_v}"),
    });

    let want_e = expected_edge_count(n, inst.non_edges.len(), &inst.gadget_size);
    let have_e = BigUint::from(g.edge_count());
    checks.push(Check {
        name: "edge_count",
        passed: want_e == have_e,
        detail: format!("expected {want_e}, found {have_e}"),
    });

    let mut missing = None;
    let image_ok = inst.embedding.len() == n
        && inst.embedding.iter().all(|&x| x < g.vertex_count())
        && inst.embedding.iter().collect::<HashSet<_>>().len() == n;
    if image_ok {
        'outer: for (a, &x) in inst.embedding.iter().enumerate() {
            for (b, &y) in inst.embedding.iter().enumerate().skip(a + 1) {
                if !g.has_edge(x, y) {
                    missing = Some((a, b));
                    break 'outer;
                }
            }
        }
    }
    checks.push(Check {
        name: "core_clique",
        passed: image_ok && missing.is_none(),
        detail: match (image_ok, missing) {
            (false, _) => "embedding is not an injection into the transformed graph".into(),
            (true, Some((a, b))) => format!("original vertices {a} and {b} are not adjacent"),
            (true, None) => format!("{n} original vertices induce K_{n}"),
        },
    });

    let mut bad = None;
    if g.vertex_count() >= n + inst.non_edges.len() * gsize && image_ok {
        'gadgets: for (j, &(u, v)) in inst.non_edges.iter().enumerate() {
            let range = inst.gadget_vertices(j);
            let (eu, ev) = (inst.embedding[u], inst.embedding[v]);
            for w in range.clone() {
                let nb = g.neighbors(w);
                let ok =
                    nb.len() == gsize + 1 && nb.iter().all(|&x| x == eu || x == ev || (range.contains(&x) && x != w));
                if !ok {
                    bad = Some((j, w));
                    break 'gadgets;
                }
            }
        }
    } else {
        bad = Some((usize::MAX, usize::MAX));
    }
    checks.push(Check {
        name: "gadget_adjacency",
        passed: bad.is_none(),
        detail: match bad {
            None => format!(
                "{} gadgets, each vertex sees {} peers and 2 endpoints",
                inst.non_edges.len(),
                gsize.saturating_sub(1)
            ),
            Some((usize::MAX, _)) => "gadget vertices missing from the transformed graph".into(),
            Some((j, w)) => format!("gadget {j}: vertex {w} has the wrong neighbourhood"),
        },
    });

    Ok(VerificationReport { passed: checks.iter().all(|c| c.passed), checks })
}

/// Image of an original clique and its cohesion in the transformed graph.
#[derive(Clone, Debug, Serialize)]
pub struct ForwardWitness {
    pub image: Vec<usize>,
    #[serde(serialize_with = "as_decimal")]
    pub inside: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub outbound: BigUint,
    pub cohesion: Cohesion,
    /// Whether the closed-form counts were confirmed by a census of `G'`.
    pub census_checked: bool,
}

fn as_decimal<S: Serializer>(v: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&v.to_string())
}

/// Maps a clique of the original graph into `G'`.
///
/// Inside the `K_n` core, a `c`-clique has `C(c,3)` inside triangles and
/// `C(c,2)(n-c)` outbound ones: each clique edge closes a triangle with every
/// other core vertex, and no gadget touches both ends of an original edge.
pub fn forward_witness(inst: &ReductionInstance, clique: &VertexSet) -> Result<ForwardWitness> {
    let n = inst.original_n;
    if clique.universe() != n {
        return Err(Error::Validation(format!(
            "clique is over {} vertices, original graph has {n}",
            clique.universe()
        )));
    }
    let members = clique.to_vec();
    for (i, &a) in members.iter().enumerate() {
        if let Some(&b) = members[i + 1..].iter().find(|&&b| !inst.is_original_edge(a, b)) {
            return Err(Error::WitnessInvalid(format!("{a} and {b} are not adjacent in the original graph")));
        }
    }
    let c = BigUint::from(members.len());
    let inside = choose3(&c);
    let outbound = choose2(&c) * BigUint::from(n - members.len());
    let value = cohesion(&c, &inside, &outbound)?;
    let image: Vec<usize> = members.iter().map(|&v| inst.embedding[v]).collect();

    let mut census_checked = false;
    if let Some(g) = inst.graph() {
        let set = VertexSet::from_members(g.vertex_count(), image.iter().copied())?;
        let measured: TriangleCensus<BigUint> = census(g, &set)?;
        if measured.inside != inside || measured.outbound != outbound {
            return Err(Error::Inconsistent(format!(
                "closed form gives i={inside}, o={outbound}; census gives i={}, o={}",
                measured.inside, measured.outbound
            )));
        }
        census_checked = true;
    }
    Ok(ForwardWitness { image, inside, outbound, cohesion: value, census_checked })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackwardWitness {
    /// `C(S) < lambda`.
    BelowThreshold { cohesion: Cohesion },
    /// `C(S) >= lambda` and `S` contains a `k`-clique of the original graph
    /// (the lexicographically smallest one is returned, in original ids).
    Clique { cohesion: Cohesion, clique: VertexSet },
    /// `C(S) >= lambda` but no `k`-clique of the original graph lies inside
    /// `S`: the gadgets failed to rule this set out.
    Spurious { cohesion: Cohesion, gadget_members: usize },
}

impl BackwardWitness {
    pub fn clique(&self) -> Option<&VertexSet> {
        match self {
            BackwardWitness::Clique { clique, .. } => Some(clique),
            _ => None,
        }
    }
}

/// Pulls a `k`-clique of the original graph out of a connected set of `G'`
/// whose cohesion reaches `lambda`.
pub fn backward_witness(inst: &ReductionInstance, s: &VertexSet) -> Result<BackwardWitness> {
    let g = inst.require_graph()?;
    if !is_connected(g, s)? {
        return Err(Error::Domain("set is not connected in the transformed graph".into()));
    }
    let value: Cohesion = cohesion_of_set(g, s)?;
    if value.compare(&inst.lambda) == Ordering::Less {
        return Ok(BackwardWitness::BelowThreshold { cohesion: value });
    }
    let mut back = vec![usize::MAX; g.vertex_count()];
    for (orig, &t) in inst.embedding.iter().enumerate() {
        back[t] = orig;
    }
    let mut core: Vec<usize> = s.iter().filter_map(|t| Some(back[t]).filter(|&o| o != usize::MAX)).collect();
    core.sort_unstable();
    let gadget_members = s.len() - core.len();
    let mut chosen = Vec::with_capacity(inst.k);
    if smallest_clique(inst, &core, inst.k, &mut chosen) {
        let clique = VertexSet::from_members(inst.original_n, chosen)?;
        Ok(BackwardWitness::Clique { cohesion: value, clique })
    } else {
        Ok(BackwardWitness::Spurious { cohesion: value, gadget_members })
    }
}

/// Lexicographically smallest `k`-subset of `candidates` (sorted) that is a
/// clique of the original graph.
fn smallest_clique(inst: &ReductionInstance, candidates: &[usize], k: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == k {
        return true;
    }
    let need = k - chosen.len();
    for (i, &v) in candidates.iter().enumerate() {
        if candidates.len() - i < need {
            break;
        }
        if chosen.iter().all(|&c| inst.is_original_edge(c, v)) {
            chosen.push(v);
            if smallest_clique(inst, &candidates[i + 1..], k, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Cohesion in `G'` of one gadget together with the two endpoints of its
/// missing edge. That set is a clique of `gadget + 2` vertices whose only
/// outbound triangles close the endpoint pair through the other `n - 2` core
/// vertices.
pub fn gadget_with_endpoints_cohesion(n: usize, gadget: &BigUint) -> Result<Cohesion> {
    let size = gadget + 2u32;
    let inside = choose3(&size);
    cohesion(&size, &inside, &BigUint::from(n.saturating_sub(2)))
}

/// `1 / (2 * C(n,3)^2)`: the ceiling that cohesion of any set using a
/// non-original edge would need to respect for gadget poisoning to work.
pub fn poison_bound(n: usize) -> Result<Cohesion> {
    let t = choose3(&BigUint::from(n));
    CohesionValue::new(BigUint::one(), t.pow(2) * 2u32)
}

struct Stats<'a>(&'a ReductionInstance);

impl Serialize for ReductionInstance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Stats(self).serialize(serializer)
    }
}

impl Serialize for Stats<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let inst = self.0;
        let non_edges: Vec<[usize; 2]> = inst.non_edges.iter().map(|&(u, v)| [u, v]).collect();
        let mut st = serializer.serialize_struct("ReductionInstance", 9)?;
        st.serialize_field("n", &inst.original_n)?;
        st.serialize_field("k", &inst.k)?;
        st.serialize_field("lambda", &inst.lambda)?;
        st.serialize_field("gadget_size", &inst.gadget_size.to_string())?;
        st.serialize_field("non_edges", &non_edges)?;
        st.serialize_field("materialized", &inst.is_materialized())?;
        st.serialize_field("transformed_vertices", &inst.transformed_vertices().to_string())?;
        st.serialize_field("transformed_edges", &inst.transformed_edges().to_string())?;
        st.serialize_field("embedding", &inst.embedding)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn small(g: &Graph, k: usize, gadget: u64) -> ReductionInstance {
        reduce(g, k, &ReduceOptions::with_gadget_size(gadget)).unwrap()
    }

    #[test]
    fn default_gadget_k4_minus_edge() {
        let g = fixtures::k4_minus_edge();
        let inst = reduce(&g, 3, &ReduceOptions::default()).unwrap();
        assert_eq!(inst.gadget_size, BigUint::from(512u32));
        assert_eq!(inst.transformed_vertices(), BigUint::from(516u32));
        assert_eq!(inst.lambda, lambda_threshold(3, 4).unwrap());
        assert_eq!(inst.lambda.to_string(), "1/4");
        assert!(inst.is_materialized());
        assert_eq!(inst.transformed_edges(), BigUint::from(6u32 + 130_816 + 1_024));
        assert!(verify_instance(&inst).unwrap().passed);
    }

    #[test]
    fn complete_graph_is_unchanged() {
        let inst = small(&Graph::complete(4), 4, 8);
        assert!(inst.non_edges.is_empty());
        assert_eq!(inst.graph().unwrap().edges().collect::<Vec<_>>(), Graph::complete(4).edges().collect::<Vec<_>>());
        assert_eq!(inst.lambda, CohesionValue::one());
        let report = verify_instance(&inst).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn cycle_has_five_gadgets() {
        let inst = small(&fixtures::cycle(5), 3, 6);
        assert_eq!(inst.non_edges.len(), 5);
        assert_eq!(inst.graph().unwrap().vertex_count(), 35);
        assert_eq!(inst.lambda.to_string(), "1/7");
    }

    #[test]
    fn big_instances_stay_virtual() {
        let g = fixtures::cycle(10);
        let inst = reduce(&g, 3, &ReduceOptions::default()).unwrap();
        assert!(!inst.is_materialized());
        let gadget = default_gadget_size(10);
        assert_eq!(gadget, BigUint::from(120u32).pow(4) * 2u32);
        assert_eq!(inst.transformed_vertices(), BigUint::from(10u32) + BigUint::from(35u32) * &gadget);
        assert!(matches!(verify_instance(&inst), Err(Error::Unsupported(_))));
        let capped =
            reduce(&g, 3, &ReduceOptions { gadget_size: Some(BigUint::from(4u32)), materialization_cap: 100 }).unwrap();
        assert!(!capped.is_materialized());
        assert_eq!(capped.transformed_vertices(), BigUint::from(150u32));
    }

    #[test]
    fn rejects_bad_input() {
        let g = fixtures::k4_minus_edge();
        assert!(matches!(reduce(&g, 2, &ReduceOptions::default()), Err(Error::Domain(_))));
        assert!(matches!(reduce(&g, 5, &ReduceOptions::default()), Err(Error::Domain(_))));
        assert!(matches!(reduce(&Graph::complete(3), 3, &ReduceOptions::default()), Err(Error::Domain(_))));
        let two = fixtures::disjoint_cliques(3);
        match reduce(&two, 3, &ReduceOptions::default()) {
            Err(Error::Disconnected { components }) => assert_eq!(components, vec![vec![0, 1, 2], vec![3, 4, 5]]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(reduce(&g, 3, &ReduceOptions::with_gadget_size(0)).is_err());
    }

    #[test]
    fn corrupted_spoke_fails_gadget_check() {
        let inst = small(&fixtures::k4_minus_edge(), 3, 8);
        assert!(verify_instance(&inst).unwrap().passed);
        let g = inst.graph().unwrap();
        let (u, _) = inst.non_edges[0];
        let spoke = (u, inst.gadget_vertices(0).start);
        let edges = g.edges().filter(|&e| e != spoke);
        let broken = Graph::from_edges(g.vertex_count(), edges).unwrap();
        let corrupted = ReductionInstance { transformed: Transformed::Materialized(broken), ..inst };
        let report = verify_instance(&corrupted).unwrap();
        assert!(!report.passed);
        let gadget = report.checks.iter().find(|c| c.name == "gadget_adjacency").unwrap();
        assert!(!gadget.passed);
        let core = report.checks.iter().find(|c| c.name == "core_clique").unwrap();
        assert!(core.passed);
    }

    #[test]
    fn forward_on_triangle() {
        let inst = small(&fixtures::k4_minus_edge(), 3, 8);
        let tri = VertexSet::from_members(4, [0, 1, 2]).unwrap();
        let w = forward_witness(&inst, &tri).unwrap();
        assert!(w.census_checked);
        assert_eq!(w.cohesion, inst.lambda);
        assert_eq!(w.cohesion.to_string(), "1/4");
        let virt =
            reduce(&fixtures::k4_minus_edge(), 3, &ReduceOptions { materialization_cap: 0, ..Default::default() })
                .unwrap();
        let w = forward_witness(&virt, &tri).unwrap();
        assert!(!w.census_checked);
        assert_eq!(w.cohesion, virt.lambda);
    }

    #[test]
    fn forward_whole_clique() {
        let inst = small(&Graph::complete(5), 5, 4);
        let w = forward_witness(&inst, &VertexSet::full(5)).unwrap();
        assert_eq!(w.cohesion, CohesionValue::one());
    }

    #[test]
    fn forward_rejects_non_clique() {
        let inst = small(&fixtures::k4_minus_edge(), 3, 4);
        let bad = VertexSet::from_members(4, [0, 2, 3]).unwrap();
        assert!(matches!(forward_witness(&inst, &bad), Err(Error::WitnessInvalid(_))));
    }

    #[test]
    fn backward_round_trip() {
        let inst = small(&fixtures::k4_minus_edge(), 3, 8);
        let tri = VertexSet::from_members(4, [0, 1, 3]).unwrap();
        let w = forward_witness(&inst, &tri).unwrap();
        let image = VertexSet::from_members(inst.graph().unwrap().vertex_count(), w.image).unwrap();
        let back = backward_witness(&inst, &image).unwrap();
        assert_eq!(back.clique(), Some(&tri));
    }

    #[test]
    fn backward_pair_is_below_threshold() {
        let inst = small(&fixtures::k4_minus_edge(), 3, 8);
        let nv = inst.graph().unwrap().vertex_count();
        let pair = VertexSet::from_members(nv, [0, 1]).unwrap();
        assert!(matches!(backward_witness(&inst, &pair).unwrap(), BackwardWitness::BelowThreshold { .. }));
        let apart = VertexSet::from_members(nv, [0, 4]).unwrap();
        assert!(matches!(backward_witness(&inst, &apart), Err(Error::Domain(_))));
    }

    #[test]
    fn gadget_with_endpoints_is_spurious() {
        // C5 has no triangle, yet a gadget plus its endpoints clears lambda
        for gadget in 1..=6u64 {
            let inst = small(&fixtures::cycle(5), 3, gadget);
            let g = inst.graph().unwrap();
            let (u, v) = inst.non_edges[0];
            let s = VertexSet::from_members(g.vertex_count(), inst.gadget_vertices(0).chain([u, v])).unwrap();
            let measured: Cohesion = cohesion_of_set(g, &s).unwrap();
            assert_eq!(measured, gadget_with_endpoints_cohesion(5, &inst.gadget_size).unwrap());
            match backward_witness(&inst, &s).unwrap() {
                BackwardWitness::Spurious { gadget_members, .. } => assert_eq!(gadget_members as u64, gadget),
                other => panic!("gadget {gadget}: {other:?}"),
            }
        }
    }

    #[test]
    fn json_stats() {
        let inst = small(&fixtures::k4_minus_edge(), 3, 2);
        let json = serde_json::to_string(&inst).unwrap();
        assert_eq!(
            json,
            r#"{"n":4,"k":3,"lambda":{"num":"1","den":"4","approx":0.25},"gadget_size":"2","non_edges":[[2,3]],"materialized":true,"transformed_vertices":"6","transformed_edges":"11","embedding":[0,1,2,3]}"#
        );
    }

    #[test]
    fn gadget_labels_avoid_collisions() {
        let g = crate::graph::parse_edge_list("w0.0 b\nb c\nc d\nd w0.0\nb d").unwrap();
        let inst = small(&g, 3, 2);
        let labels = inst.graph().unwrap().labels().unwrap();
        assert_eq!(labels[4], "_w0.0");
    }
}
