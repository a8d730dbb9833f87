//! Brute-force oracles and property suites.
//!
//! Everything here recomputes its answers from first principles (vertex
//! triples, all subsets, all `k`-subsets) so it can stand in judgement over
//! the optimized code paths. Suites are seeded and merge per-trial results in
//! trial order, so reports are reproducible under any worker count.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohesion::{lambda_threshold, CohesionValue};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{is_connected, Graph, VertexSet};
use crate::reduction::{
    backward_witness, default_gadget_size, forward_witness, gadget_with_endpoints_cohesion, poison_bound, reduce,
    verify_instance, BackwardWitness, ReduceOptions, ReductionInstance,
};
use crate::solvers::{solve_exact, SearchConfig};
use crate::triangles::{add_vertex_delta, census, remove_vertex_delta, MaskGraph, TriangleCensus};
use crate::Cohesion;

pub const NAIVE_CENSUS_GUARD: usize = 500;
/// Failures kept verbatim per report; the rest are only counted.
const KEEP_FAILURES: usize = 20;

/// Every property name accepted by [`run_suite`].
pub const PROPERTIES: [&str; 9] = [
    "census_oracle",
    "delta_roundtrip",
    "lambda",
    "lemma1",
    "theorem1",
    "reduction_structure",
    "theorem3_forward",
    "theorem3_iff",
    "gadget_poison",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// For reduction checks: `"logic failure"` or `"gadget too small"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    /// Replayable edge list.
    pub graph: String,
    pub subsets: Vec<Vec<usize>>,
    pub values: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub instances_checked: u64,
    pub failure_count: u64,
    /// The first few failures.
    pub failures: Vec<Counterexample>,
    /// Instances outside the statement's non-degenerate hypothesis (all
    /// cohesions zero); counted, not failed.
    pub degenerate: u64,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl PropertyReport {
    pub fn new(property: &str) -> Self {
        Self {
            property: property.to_owned(),
            instances_checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            degenerate: 0,
            notes: Vec::new(),
            passed: true,
        }
    }

    pub fn fail(&mut self, cx: Counterexample) {
        self.failure_count += 1;
        self.passed = false;
        if self.failures.len() < KEEP_FAILURES {
            self.failures.push(cx);
        }
    }

    /// Folds `other` (same property) into `self`.
    pub fn absorb(&mut self, other: PropertyReport) {
        self.instances_checked += other.instances_checked;
        self.degenerate += other.degenerate;
        self.failure_count += other.failure_count;
        self.passed &= other.passed;
        let room = KEEP_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        for note in other.notes {
            if !self.notes.contains(&note) {
                self.notes.push(note);
            }
        }
    }
}

fn cx(g: &Graph, subsets: Vec<Vec<usize>>, values: Vec<String>, detail: impl Into<String>) -> Counterexample {
    Counterexample { classification: None, graph: g.to_edge_list(), subsets, values, detail: detail.into() }
}

fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Triangle census by checking every vertex triple.
pub fn naive_census(g: &Graph, s: &VertexSet) -> Result<TriangleCensus<BigUint>> {
    let n = g.vertex_count();
    if n > NAIVE_CENSUS_GUARD {
        return Err(Error::Refused(format!("naive census is limited to {NAIVE_CENSUS_GUARD} vertices, got {n}")));
    }
    if s.universe() != n {
        return Err(Error::Validation("vertex set does not match graph".into()));
    }
    let mut buckets = [0u64; 4];
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    buckets[s.contains(a) as usize + s.contains(b) as usize + s.contains(c) as usize] += 1;
                }
            }
        }
    }
    Ok(TriangleCensus::from_buckets(buckets))
}

/// Unreduced cohesion `numer/denom` of one subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frac {
    numer: u128,
    denom: u128,
    inside: u64,
}

impl Frac {
    fn cmp_value(&self, other: &Self) -> Ordering {
        (self.numer * other.denom).cmp(&(other.numer * self.denom))
    }

    fn to_cohesion(self) -> Cohesion {
        CohesionValue::new(self.numer, self.denom).expect("positive denominator").to_big()
    }
}

/// Cohesion of every subset of a graph with at most 16 vertices, from its
/// triangle list found by a triple loop.
fn all_subset_cohesions(g: &Graph) -> Vec<Frac> {
    let n = g.vertex_count();
    assert!(n <= 16, "all-subsets oracle needs n <= 16");
    let mut triangles = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                    triangles.push((1u64 << a) | (1 << b) | (1 << c));
                }
            }
        }
    }
    (0..1u64 << n)
        .map(|mask| {
            let (mut i, mut o) = (0u64, 0u64);
            for &t in &triangles {
                match (t & mask).count_ones() {
                    3 => i += 1,
                    2 => o += 1,
                    _ => {}
                }
            }
            let s = mask.count_ones() as u128;
            if i == 0 || s < 3 {
                Frac { numer: 0, denom: 1, inside: i }
            } else {
                let triples = s * (s - 1) * (s - 2) / 6;
                Frac { numer: (i as u128).pow(2), denom: triples * (i + o) as u128, inside: i }
            }
        })
        .collect()
}

fn neighbour_masks(g: &Graph) -> Vec<u64> {
    (0..g.vertex_count()).map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect()
}

/// For every ordered pair of disjoint, mutually non-adjacent sets with at
/// least two vertices each: if `C(S1) <= C(S1 ∪ S2)` then `C(S2) > C(S1 ∪ S2)`.
///
/// Violations where neither part has an inside triangle (every cohesion
/// involved is 0) are counted as degenerate rather than failed.
pub fn check_lemma1(g: &Graph) -> Result<PropertyReport> {
    let n = g.vertex_count();
    if n > 10 {
        return Err(Error::Refused(format!("lemma 1 sweep is limited to 10 vertices, got {n}")));
    }
    let coh = all_subset_cohesions(g);
    let nb = neighbour_masks(g);
    let full = (1u64 << n) - 1;
    let mut report = PropertyReport::new("lemma1");
    let mut degenerate_example = None;
    for s1 in 1..=full {
        if s1.count_ones() < 2 {
            continue;
        }
        let reach = mask_members(s1).iter().fold(s1, |m, &v| m | nb[v]);
        let free = full & !reach;
        let mut s2 = free;
        while s2 != 0 {
            if s2.count_ones() >= 2 {
                report.instances_checked += 1;
                let (c1, c2, cu) = (coh[s1 as usize], coh[s2 as usize], coh[(s1 | s2) as usize]);
                let premise = c1.cmp_value(&cu) != Ordering::Greater;
                let conclusion = c2.cmp_value(&cu) == Ordering::Greater;
                if premise && !conclusion {
                    if c1.inside == 0 && c2.inside == 0 {
                        report.degenerate += 1;
                        degenerate_example.get_or_insert((s1, s2));
                    } else {
                        report.fail(cx(
                            g,
                            vec![mask_members(s1), mask_members(s2)],
                            vec![
                                c1.to_cohesion().to_string(),
                                c2.to_cohesion().to_string(),
                                cu.to_cohesion().to_string(),
                            ],
                            "C(S1) <= C(S1 ∪ S2) but C(S2) <= C(S1 ∪ S2)",
                        ));
                    }
                }
            }
            s2 = (s2 - 1) & free;
        }
    }
    if let Some((a, b)) = degenerate_example {
        report.notes.push(format!(
            "zero-triangle parts satisfy the premise but not the conclusion (0 <= 0, not 0 > 0), e.g. S1={:?} S2={:?}",
            mask_members(a),
            mask_members(b)
        ));
    }
    Ok(report)
}

/// Every all-subsets maximiser of cohesion is connected, and `solve_exact`
/// (connected subsets only) reaches the same maximum.
///
/// When the maximum is 0 the graph is triangle-free and every subset ties;
/// such graphs are counted as degenerate and only the value comparison runs.
pub fn check_theorem1(g: &Graph) -> Result<PropertyReport> {
    let n = g.vertex_count();
    if n > 8 {
        return Err(Error::Refused(format!("theorem 1 sweep is limited to 8 vertices, got {n}")));
    }
    let coh = all_subset_cohesions(g);
    let best = coh.iter().copied().reduce(|a, b| if b.cmp_value(&a) == Ordering::Greater { b } else { a }).unwrap();
    let mut report = PropertyReport::new("theorem1");
    report.instances_checked = 1;
    if best.numer == 0 {
        report.degenerate += 1;
        report.notes.push("triangle-free graphs: every subset ties at cohesion 0".into());
    } else {
        for (mask, c) in coh.iter().enumerate() {
            if c.cmp_value(&best) == Ordering::Equal {
                let set = VertexSet::from_mask(n, mask as u64);
                if !is_connected(g, &set)? {
                    report.fail(cx(g, vec![set.to_vec()], vec![c.to_cohesion().to_string()], "disconnected maximiser"));
                }
            }
        }
    }
    let exact = solve_exact(g, &SearchConfig::default())?;
    let oracle = best.to_cohesion();
    if exact.best_value != oracle {
        report.fail(cx(
            g,
            vec![exact.best_set.to_vec()],
            vec![exact.best_value.to_string(), oracle.to_string()],
            "connected-only search disagrees with the all-subsets maximum",
        ));
    }
    Ok(report)
}

/// All `k`-cliques, by testing every `k`-subset. `n <= 20`.
pub fn brute_force_cliques(g: &Graph, k: usize) -> Vec<VertexSet> {
    let n = g.vertex_count();
    assert!(n <= 20, "brute-force clique finder needs n <= 20");
    (0..1u64 << n)
        .filter(|m| m.count_ones() as usize == k)
        .filter(|&m| {
            let vs = mask_members(m);
            vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
        })
        .map(|m| VertexSet::from_mask(n, m))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem3Verdict {
    /// Both sides agree.
    Holds,
    /// A connected set of `G'` reaches `lambda` although the input has no
    /// `k`-clique.
    GadgetTooSmall,
    /// A `k`-clique of the input does not give a cohesion-`lambda` set.
    LogicFailure,
    /// The search budget ran out before deciding.
    Inconclusive,
}

impl Theorem3Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Theorem3Verdict::Holds => "holds",
            Theorem3Verdict::GadgetTooSmall => "gadget too small",
            Theorem3Verdict::LogicFailure => "logic failure",
            Theorem3Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem3Check {
    pub gadget_size: u64,
    pub transformed_vertices: usize,
    pub clique_exists: bool,
    pub cliques_checked: usize,
    /// A connected set of `G'` with cohesion >= lambda, when one was needed
    /// and found.
    pub cohesive_set: Option<Vec<usize>>,
    pub cohesive_value: Option<Cohesion>,
    pub explored: u64,
    pub verdict: Theorem3Verdict,
    pub detail: String,
}

/// Subsets explored before a reverse-direction search gives up.
pub const THEOREM3_SEARCH_BUDGET: u64 = 50_000_000;

/// Visits connected vertex subsets of a mask graph with their `(i, o)`
/// counts, each exactly once, until `visit` returns `false`. Returns whether
/// the walk finished.
pub fn visit_connected_subsets(mg: &MaskGraph, mut visit: impl FnMut(u64, u32, u64, u64) -> bool) -> bool {
    fn go(
        mg: &MaskGraph,
        allowed: u64,
        sub: u64,
        io: (u64, u64),
        mut ext: u64,
        seen: u64,
        visit: &mut dyn FnMut(u64, u32, u64, u64) -> bool,
    ) -> bool {
        if !visit(sub, sub.count_ones(), io.0, io.1) {
            return false;
        }
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let (di, dout) = mg.add_delta(sub, w);
            let nw = mg.neighbors(w);
            let next = ((io.0 as i64 + di) as u64, (io.1 as i64 + dout) as u64);
            if !go(mg, allowed, sub | 1 << w, next, ext | (nw & !seen & allowed), seen | nw, visit) {
                return false;
            }
        }
        true
    }
    let n = mg.vertex_count();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for a in 0..n {
        let allowed = u64::MAX.checked_shl(a as u32 + 1).unwrap_or(0) & full;
        let na = mg.neighbors(a);
        if !go(mg, allowed, 1 << a, (0, 0), na & allowed, na | 1 << a, &mut visit) {
            return false;
        }
    }
    true
}

/// Decides both sides of the Clique ↔ Connected-Cohesive equivalence for one
/// gadget size by brute force.
pub fn theorem3_at(g: &Graph, k: usize, gadget_size: u64, budget: u64) -> Result<Theorem3Check> {
    let n = g.vertex_count();
    if n > 7 {
        return Err(Error::Refused(format!("theorem 3 check is limited to 7 original vertices, got {n}")));
    }
    let inst = reduce(g, k, &ReduceOptions::with_gadget_size(gadget_size))?;
    let gp = inst.graph().ok_or_else(|| Error::Refused("transformed instance was not materialized".into()))?;
    let cliques = brute_force_cliques(g, k);
    let mut check = Theorem3Check {
        gadget_size,
        transformed_vertices: gp.vertex_count(),
        clique_exists: !cliques.is_empty(),
        cliques_checked: 0,
        cohesive_set: None,
        cohesive_value: None,
        explored: 0,
        verdict: Theorem3Verdict::Holds,
        detail: String::new(),
    };

    if !cliques.is_empty() {
        for clique in &cliques {
            check.cliques_checked += 1;
            let w = forward_witness(&inst, clique)?;
            let image = VertexSet::from_members(gp.vertex_count(), w.image.iter().copied())?;
            if w.cohesion != inst.lambda || !w.census_checked || !is_connected(gp, &image)? {
                check.verdict = Theorem3Verdict::LogicFailure;
                check.detail = format!("clique {:?} maps to cohesion {} (lambda {})", clique, w.cohesion, inst.lambda);
                return Ok(check);
            }
            if check.cohesive_set.is_none() {
                check.cohesive_set = Some(w.image.clone());
                check.cohesive_value = Some(w.cohesion.clone());
            }
        }
        check.detail = format!("{} {k}-clique(s) map to cohesion exactly {}", cliques.len(), inst.lambda);
        return Ok(check);
    }

    let Some(mg) = MaskGraph::new(gp) else {
        return Err(Error::Refused(format!(
            "transformed graph has {} vertices; brute-force search supports at most 64",
            gp.vertex_count()
        )));
    };
    let lambda = (inst.lambda.numer().to_u128().unwrap(), inst.lambda.denom().to_u128().unwrap());
    let mut found = None;
    let mut explored = 0u64;
    let finished = visit_connected_subsets(&mg, |set, size, i, o| {
        explored += 1;
        if size >= 3 && i > 0 {
            let s = size as u128;
            let (num, den) = ((i as u128).pow(2), s * (s - 1) * (s - 2) / 6 * (i + o) as u128);
            if num * lambda.1 >= lambda.0 * den {
                found = Some(set);
                return false;
            }
        }
        explored < budget
    });
    check.explored = explored;
    match found {
        Some(mask) => {
            let set = VertexSet::from_mask(gp.vertex_count(), mask);
            match backward_witness(&inst, &set)? {
                BackwardWitness::Spurious { cohesion, gadget_members } => {
                    check.verdict = Theorem3Verdict::GadgetTooSmall;
                    check.detail = format!(
                        "no {k}-clique in the input, yet a connected set with {gadget_members} gadget vertices has cohesion {cohesion} >= lambda {}",
                        inst.lambda
                    );
                    check.cohesive_value = Some(cohesion);
                }
                other => {
                    check.verdict = Theorem3Verdict::LogicFailure;
                    check.detail = format!("search and backward witness disagree: {other:?}");
                }
            }
            check.cohesive_set = Some(set.to_vec());
        }
        None if finished => {
            check.detail = format!("no connected set reaches lambda {} ({explored} subsets)", inst.lambda);
        }
        None => {
            check.verdict = Theorem3Verdict::Inconclusive;
            check.detail = format!("search budget of {budget} subsets exhausted");
        }
    }
    Ok(check)
}

/// Property-report form of [`theorem3_at`].
pub fn check_theorem3(g: &Graph, k: usize, gadget_size: u64) -> Result<PropertyReport> {
    let check = theorem3_at(g, k, gadget_size, THEOREM3_SEARCH_BUDGET)?;
    let mut report = PropertyReport::new("theorem3");
    report.instances_checked = 1;
    if check.verdict != Theorem3Verdict::Holds {
        let mut c = cx(
            g,
            check.cohesive_set.iter().cloned().collect(),
            check.cohesive_value.iter().map(|v| v.to_string()).collect(),
            format!("gadget size {}: {}", gadget_size, check.detail),
        );
        c.classification = Some(check.verdict.label().to_owned());
        report.fail(c);
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetFrontier {
    pub k: usize,
    pub n: usize,
    pub lambda: Cohesion,
    pub checks: Vec<Theorem3Check>,
    /// Smallest swept gadget size at which the equivalence held.
    pub frontier: Option<u64>,
    /// Sizes where the forward direction failed; must stay empty.
    pub logic_failures: Vec<u64>,
    /// Cohesion of one gadget plus its two endpoints at the default size
    /// `2 * C(n,3)^4`; `None` when the input has no missing edge.
    pub default_gadget_pair_cohesion: Option<Cohesion>,
}

/// Sweeps gadget sizes upward and records where the equivalence first holds.
pub fn gadget_frontier(g: &Graph, k: usize, sizes: impl IntoIterator<Item = u64>) -> Result<GadgetFrontier> {
    let n = g.vertex_count();
    let lambda = lambda_threshold(k as u64, n as u64)?;
    let mut checks = Vec::new();
    for size in sizes {
        checks.push(theorem3_at(g, k, size, THEOREM3_SEARCH_BUDGET)?);
    }
    let frontier = checks.iter().find(|c| c.verdict == Theorem3Verdict::Holds).map(|c| c.gadget_size);
    let logic_failures =
        checks.iter().filter(|c| c.verdict == Theorem3Verdict::LogicFailure).map(|c| c.gadget_size).collect();
    let default_gadget_pair_cohesion = if g.non_edges().is_empty() {
        None
    } else {
        Some(gadget_with_endpoints_cohesion(n, &default_gadget_size(n as u64))?)
    };
    Ok(GadgetFrontier { k, n, lambda, checks, frontier, logic_failures, default_gadget_pair_cohesion })
}

/// Gadget sizes swept by the `theorem3_iff` suite; C5 stays within 64
/// transformed vertices.
pub const IFF_SWEEP: std::ops::RangeInclusive<u64> = 2..=11;

fn trial_rng(rng_seed: u64, property: &str, trial: u64) -> ChaCha8Rng {
    // FNV-1a of the name keeps suites on distinct streams
    let salt = property.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ salt);
    rng.set_stream(trial);
    rng
}

fn random_graph(rng: &mut ChaCha8Rng, trial: u64, n_range: std::ops::RangeInclusive<usize>, connected: bool) -> Graph {
    let n = rng.gen_range(n_range);
    let p = fixtures::DENSITIES[(trial % 3) as usize];
    if connected {
        fixtures::connected_gnp(n, p, rng)
    } else {
        fixtures::gnp(n, p, rng)
    }
}

fn merge_trials(
    property: &str,
    trials: u64,
    f: impl Fn(u64) -> Result<PropertyReport> + Sync,
) -> Result<PropertyReport> {
    let parts: Vec<Result<PropertyReport>> = (0..trials).into_par_iter().map(&f).collect();
    let mut report = PropertyReport::new(property);
    for part in parts {
        report.absorb(part?);
    }
    Ok(report)
}

fn merge_graphs(
    property: &str,
    graphs: Vec<Graph>,
    f: impl Fn(&Graph) -> Result<PropertyReport> + Sync,
) -> Result<PropertyReport> {
    let parts: Vec<Result<PropertyReport>> = graphs.par_iter().map(&f).collect();
    let mut report = PropertyReport::new(property);
    for part in parts {
        report.absorb(part?);
    }
    Ok(report)
}

/// Optimized census equals the triple-loop census on every subset of `g`.
pub fn census_matches_oracle_all_subsets(g: &Graph) -> Result<PropertyReport> {
    let n = g.vertex_count();
    let mut report = PropertyReport::new("census_oracle");
    for mask in 0..1u64 << n {
        let s = VertexSet::from_mask(n, mask);
        census_pair(g, &s, &mut report)?;
    }
    Ok(report)
}

fn census_pair(g: &Graph, s: &VertexSet, report: &mut PropertyReport) -> Result<()> {
    report.instances_checked += 1;
    let fast: TriangleCensus<BigUint> = census(g, s)?;
    let slow = naive_census(g, s)?;
    if fast != slow {
        report.fail(cx(g, vec![s.to_vec()], vec![format!("{fast:?}"), format!("{slow:?}")], "census mismatch"));
    }
    Ok(())
}

/// Every connected labelled graph on `n` vertices.
pub fn all_connected_graphs(n: usize) -> Vec<Graph> {
    fixtures::all_graphs(n).filter(Graph::is_connected).collect()
}

/// Structural audit of one instance plus a comparison of its closed-form
/// counts against the materialized graph.
pub fn check_reduction_structure(g: &Graph, k: usize, gadget: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("reduction_structure");
    report.instances_checked = 1;
    let inst = reduce(g, k, &ReduceOptions::with_gadget_size(gadget))?;
    let audit = verify_instance(&inst)?;
    if !audit.passed {
        let failed: Vec<String> =
            audit.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
        report.fail(cx(g, vec![], vec![], format!("k={k} gadget={gadget}: {}", failed.join("; "))));
    }
    let m = inst.non_edges.len();
    let gs = gadget as usize;
    let gp = inst.graph().expect("small instance");
    let want_v = g.vertex_count() + m * gs;
    let want_e = g.vertex_count() * (g.vertex_count() - 1) / 2 + m * (gs * (gs - 1) / 2 + 2 * gs);
    if gp.vertex_count() != want_v || gp.edge_count() != want_e {
        report.fail(cx(
            g,
            vec![],
            vec![gp.vertex_count().to_string(), gp.edge_count().to_string()],
            format!("expected {want_v} vertices and {want_e} edges"),
        ));
    }
    Ok(report)
}

/// Forward direction on every `k`-clique for every `k` in `3..=n`.
pub fn check_theorem3_forward(g: &Graph, gadget: u64) -> Result<PropertyReport> {
    let n = g.vertex_count();
    let mut report = PropertyReport::new("theorem3_forward");
    for k in 3..=n {
        let inst = reduce(g, k, &ReduceOptions::with_gadget_size(gadget))?;
        for clique in brute_force_cliques(g, k) {
            report.instances_checked += 1;
            let w = forward_witness(&inst, &clique)?;
            if w.cohesion != inst.lambda || !w.census_checked {
                let mut c = cx(
                    g,
                    vec![clique.to_vec()],
                    vec![w.cohesion.to_string(), inst.lambda.to_string()],
                    format!("k={k}: forward witness misses lambda"),
                );
                c.classification = Some(Theorem3Verdict::LogicFailure.label().into());
                report.fail(c);
            }
        }
    }
    Ok(report)
}

fn iff_report() -> Result<PropertyReport> {
    let mut report = PropertyReport::new("theorem3_iff");
    for (name, g) in [("K4 minus an edge", fixtures::k4_minus_edge()), ("C5", fixtures::cycle(5))] {
        let sweep = gadget_frontier(&g, 3, IFF_SWEEP)?;
        report.instances_checked += sweep.checks.len() as u64;
        for c in sweep.checks.iter().filter(|c| c.verdict == Theorem3Verdict::LogicFailure) {
            let mut x = cx(&g, vec![], vec![], format!("{name}, gadget {}: {}", c.gadget_size, c.detail));
            x.classification = Some(Theorem3Verdict::LogicFailure.label().into());
            report.fail(x);
        }
        match sweep.frontier {
            Some(size) => report.notes.push(format!("{name}: equivalence holds from gadget size {size}")),
            None => {
                let last = sweep.checks.last().expect("non-empty sweep");
                let mut x = cx(
                    &g,
                    last.cohesive_set.iter().cloned().collect(),
                    last.cohesive_value.iter().map(|v| v.to_string()).collect(),
                    format!(
                        "{name}: no gadget size in {}..={} makes the equivalence hold; at {}: {}",
                        IFF_SWEEP.start(),
                        IFF_SWEEP.end(),
                        last.gadget_size,
                        last.detail
                    ),
                );
                x.classification = Some(last.verdict.label().into());
                report.fail(x);
                if let Some(v) = &sweep.default_gadget_pair_cohesion {
                    report.notes.push(format!(
                        "{name}: at the default gadget size a gadget plus its endpoints has cohesion ~{:.12} against lambda {}",
                        v.approx::<f64>(),
                        sweep.lambda
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Whether every set using a non-original edge stays below
/// `1 / (2 C(n,3)^2)`. Checked analytically at the default gadget size for
/// a gadget plus its endpoints, and measured on small materialized instances.
pub fn check_gadget_poison(n_range: std::ops::RangeInclusive<usize>) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("gadget_poison");
    for n in n_range {
        report.instances_checked += 1;
        let bound = poison_bound(n)?;
        let lambda: Cohesion = lambda_threshold(3, n as u64)?;
        let pair = gadget_with_endpoints_cohesion(n, &default_gadget_size(n as u64))?;
        if pair.compare(&bound) == Ordering::Greater {
            report.fail(cx(
                &fixtures::cycle(n),
                vec![],
                vec![pair.to_string(), bound.to_string(), lambda.to_string()],
                format!(
                    "n={n}: gadget plus endpoints has cohesion ~{:.6} above the bound ~{:.3e}",
                    pair.approx::<f64>(),
                    bound.approx::<f64>()
                ),
            ));
        }
    }
    // measured confirmation of the closed form on a small instance
    let inst: ReductionInstance = reduce(&fixtures::cycle(5), 3, &ReduceOptions::with_gadget_size(4))?;
    let gp = inst.graph().expect("small");
    let (u, v) = inst.non_edges[0];
    let set = VertexSet::from_members(gp.vertex_count(), inst.gadget_vertices(0).chain([u, v]))?;
    let measured: Cohesion = crate::cohesion::cohesion_of_set(gp, &set)?;
    report.instances_checked += 1;
    if measured != gadget_with_endpoints_cohesion(5, &inst.gadget_size)? {
        report.fail(cx(gp, vec![set.to_vec()], vec![measured.to_string()], "closed form disagrees with census"));
    }
    Ok(report)
}

fn lambda_report() -> Result<PropertyReport> {
    let mut report = PropertyReport::new("lambda");
    let spots: [(u64, u64, (u64, u64)); 3] = [(3, 4, (1, 4)), (4, 6, (1, 4)), (3, 5, (1, 7))];
    for (k, n, (a, b)) in spots {
        report.instances_checked += 1;
        let got: Cohesion = lambda_threshold(k, n)?;
        if got != CohesionValue::new(BigUint::from(a), BigUint::from(b))? {
            report.fail(cx(&Graph::empty(0), vec![], vec![got.to_string()], format!("lambda({k},{n}) != {a}/{b}")));
        }
    }
    for n in 3..=50u64 {
        report.instances_checked += 1;
        if lambda_threshold::<BigUint>(n, n)? != CohesionValue::one() {
            report.fail(cx(&Graph::empty(0), vec![], vec![], format!("lambda({n},{n}) != 1")));
        }
        for k in 3..n {
            report.instances_checked += 1;
            let (a, b): (Cohesion, Cohesion) = (lambda_threshold(k, n)?, lambda_threshold(k + 1, n)?);
            if a.compare(&b) != Ordering::Less {
                report.fail(cx(
                    &Graph::empty(0),
                    vec![],
                    vec![a.to_string(), b.to_string()],
                    format!("not increasing at k={k}, n={n}"),
                ));
            }
        }
    }
    Ok(report)
}

fn delta_trial(rng_seed: u64, trial: u64) -> Result<PropertyReport> {
    let mut rng = trial_rng(rng_seed, "delta_roundtrip", trial);
    let g = random_graph(&mut rng, trial, 1..=12, false);
    let n = g.vertex_count();
    let mut s = VertexSet::from_mask(n, rng.gen::<u64>() & ((1u64 << n) - 1));
    let v = rng.gen_range(0..n);
    s.remove(v);
    let mut report = PropertyReport::new("delta_roundtrip");
    report.instances_checked = 1;
    let before: TriangleCensus<BigUint> = census(&g, &s)?;
    let add = add_vertex_delta(&g, &s, v)?;
    let mut grown = s.clone();
    grown.insert(v);
    let after = before.apply(&add)?;
    let remove = remove_vertex_delta(&g, &grown, v)?;
    if after != naive_census(&g, &grown)? || after.apply(&remove)? != before {
        report.fail(cx(&g, vec![s.to_vec(), vec![v]], vec![], "incremental census drifted"));
    }
    Ok(report)
}

/// Runs named property suites. `trials` controls the randomized part of each
/// suite; exhaustive parts always run in full.
pub fn run_suite(names: &[&str], trials: u64, rng_seed: u64) -> Result<Vec<PropertyReport>> {
    if let Some(bad) = names.iter().find(|n| !PROPERTIES.contains(n)) {
        return Err(Error::UnknownProperty((*bad).to_owned()));
    }
    names.iter().map(|&name| run_property(name, trials, rng_seed)).collect()
}

fn run_property(name: &str, trials: u64, rng_seed: u64) -> Result<PropertyReport> {
    match name {
        "census_oracle" => {
            let graphs: Vec<Graph> = (0..=5).flat_map(fixtures::all_graphs).collect();
            let mut report = merge_graphs(name, graphs, census_matches_oracle_all_subsets)?;
            report.absorb(merge_trials(name, trials, |t| {
                let mut rng = trial_rng(rng_seed, name, t);
                let g = random_graph(&mut rng, t, 1..=12, false);
                let n = g.vertex_count();
                let s = VertexSet::from_mask(n, rng.gen::<u64>() & ((1u64 << n) - 1));
                let mut r = PropertyReport::new(name);
                census_pair(&g, &s, &mut r)?;
                Ok(r)
            })?);
            Ok(report)
        }
        "delta_roundtrip" => merge_trials(name, trials, |t| delta_trial(rng_seed, t)),
        "lambda" => lambda_report(),
        "lemma1" => {
            let graphs: Vec<Graph> = (4..=6).flat_map(fixtures::all_graphs).collect();
            let mut report = merge_graphs(name, graphs, check_lemma1)?;
            report.absorb(merge_trials(name, trials, |t| {
                let mut rng = trial_rng(rng_seed, name, t);
                check_lemma1(&random_graph(&mut rng, t, 4..=10, false))
            })?);
            Ok(report)
        }
        "theorem1" => merge_trials(name, trials, |t| {
            let mut rng = trial_rng(rng_seed, name, t);
            check_theorem1(&random_graph(&mut rng, t, 3..=8, false))
        }),
        "reduction_structure" => {
            let mut jobs = Vec::new();
            for n in 4..=5 {
                for g in all_connected_graphs(n) {
                    jobs.push(g);
                }
            }
            let mut report = merge_graphs(name, jobs, structure_sweep)?;
            report.absorb(merge_trials(name, trials, |t| {
                let mut rng = trial_rng(rng_seed, name, t);
                structure_sweep(&random_graph(&mut rng, t, 6..=6, true))
            })?);
            Ok(report)
        }
        "theorem3_forward" => merge_trials(name, trials, |t| {
            let mut rng = trial_rng(rng_seed, name, t);
            check_theorem3_forward(&random_graph(&mut rng, t, 4..=7, true), 4)
        }),
        "theorem3_iff" => iff_report(),
        "gadget_poison" => check_gadget_poison(4..=10),
        other => Err(Error::UnknownProperty(other.to_owned())),
    }
}

/// `k` in `3..=n` and gadget sizes 4, 8, 16 for one graph.
pub fn structure_sweep(g: &Graph) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("reduction_structure");
    for k in 3..=g.vertex_count() {
        for gadget in [4, 8, 16] {
            report.absorb(check_reduction_structure(g, k, gadget)?);
        }
    }
    Ok(report)
}
