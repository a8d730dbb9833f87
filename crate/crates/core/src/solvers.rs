//! Maximum-cohesion search.
//!
//! A maximum-cohesion set is always connected, so the exact solver only
//! walks connected subsets. Each one is produced exactly once by growing from
//! its smallest vertex (the anchor) through an extension frontier, with
//! triangle counts updated incrementally along the way. Anchors are
//! independent and run in parallel; results merge under a total order so the
//! answer does not depend on scheduling.
//!
//! Ties are broken by larger cohesion, then smaller size, then the
//! lexicographically smallest sorted member list.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohesion::{cohesion, cohesion_of_set, CohesionValue};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::triangles::{add_vertex_delta, census, edge_triangle_count, remove_vertex_delta, MaskGraph, TriangleCensus};
use crate::Cohesion;

/// Exact search refuses larger graphs unless forced.
pub const EXACT_VERTEX_GUARD: usize = 32;
/// Hard limit of the bitmask representation.
pub const EXACT_VERTEX_LIMIT: usize = 64;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_subset_size: Option<usize>,
    pub time_budget: Option<Duration>,
    /// Every candidate must contain these vertices.
    pub seed_set: Option<VertexSet>,
    pub heuristic_restarts: usize,
    pub rng_seed: u64,
    /// Lifts [`EXACT_VERTEX_GUARD`].
    pub force: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_subset_size: None,
            time_budget: None,
            seed_set: None,
            heuristic_restarts: 8,
            rng_seed: 0,
            force: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverResult {
    pub best_set: VertexSet,
    pub best_value: Cohesion,
    pub explored: u64,
    /// Wall time; kept out of JSON so identical runs serialize identically.
    #[serde(skip)]
    pub elapsed: Duration,
    pub exact: bool,
    /// Set when no candidate has positive cohesion (triangle-free search space).
    pub no_positive_cohesion: bool,
}

/// Candidate ordering: `Greater` means `a` is preferred.
fn prefer(a_val: &Cohesion, a_set: &VertexSet, b_val: &Cohesion, b_set: &VertexSet) -> Ordering {
    a_val.compare(b_val).then_with(|| b_set.len().cmp(&a_set.len())).then_with(|| b_set.iter().cmp(a_set.iter()))
}

#[derive(Clone, Copy, Debug)]
struct MaskScore {
    set: u64,
    size: u32,
    numer: u128,
    denom: u128,
}

impl MaskScore {
    fn new(set: u64, size: u32, inside: u64, outbound: u64) -> Self {
        if inside == 0 {
            return Self { set, size, numer: 0, denom: 1 };
        }
        let s = size as u128;
        let triples = s * (s - 1) * (s - 2) / 6;
        let i = inside as u128;
        Self { set, size, numer: i * i, denom: triples * (i + outbound as u128) }
    }

    /// `Greater` when `self` is preferred. For n <= 64 every cross product
    /// stays below 2^70, so u128 is exact.
    fn prefer(&self, other: &Self) -> Ordering {
        (self.numer * other.denom).cmp(&(other.numer * self.denom)).then_with(|| other.size.cmp(&self.size)).then_with(
            || {
                let diff = self.set ^ other.set;
                if diff == 0 {
                    Ordering::Equal
                } else if self.set >> diff.trailing_zeros() & 1 == 1 {
                    // equal sizes: owning the smallest differing vertex wins
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            },
        )
    }
}

struct AnchorSearch<'a> {
    mg: &'a MaskGraph,
    allowed: u64,
    seed: u64,
    cap: u32,
    best: Option<MaskScore>,
    explored: u64,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
}

impl AnchorSearch<'_> {
    fn extend(&mut self, sub: u64, size: u32, inside: u64, outbound: u64, mut ext: u64, seen: u64) {
        if self.abort.load(AtomicOrdering::Relaxed) {
            return;
        }
        if size >= 3 && sub & self.seed == self.seed {
            self.explored += 1;
            let score = MaskScore::new(sub, size, inside, outbound);
            if self.best.is_none_or(|b| score.prefer(&b) == Ordering::Greater) {
                self.best = Some(score);
            }
            if self.explored.is_multiple_of(4096) {
                if let Some(deadline) = self.deadline {
                    if Instant::now() >= deadline {
                        self.abort.store(true, AtomicOrdering::Relaxed);
                        return;
                    }
                }
            }
        }
        if size == self.cap {
            return;
        }
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let (di, dout) = self.mg.add_delta(sub, w);
            let nw = self.mg.neighbors(w);
            self.extend(
                sub | 1 << w,
                size + 1,
                (inside as i64 + di) as u64,
                (outbound as i64 + dout) as u64,
                ext | (nw & !seen & self.allowed),
                seen | nw,
            );
        }
    }
}

fn seed_mask(g: &Graph, cfg: &SearchConfig) -> Result<Option<VertexSet>> {
    let Some(seed) = cfg.seed_set.as_ref().filter(|s| !s.is_empty()) else {
        return Ok(None);
    };
    seed.check_for(g)?;
    let comps = g.components();
    let home = comps.iter().find(|c| c.binary_search(&seed.iter().next().unwrap()).is_ok()).unwrap();
    if !seed.iter().all(|v| home.binary_search(&v).is_ok()) {
        return Err(Error::Domain("seed vertices lie in different components".into()));
    }
    Ok(Some(seed.clone()))
}

/// Exhaustive maximum-cohesion search over connected subsets of size >= 3.
pub fn solve_exact(g: &Graph, cfg: &SearchConfig) -> Result<SolverResult> {
    let start = Instant::now();
    let n = g.vertex_count();
    if n > EXACT_VERTEX_LIMIT {
        return Err(Error::Refused(format!(
            "exact search supports at most {EXACT_VERTEX_LIMIT} vertices, graph has {n}"
        )));
    }
    if n > EXACT_VERTEX_GUARD && !cfg.force {
        return Err(Error::Refused(format!(
            "graph has {n} vertices; exact search above {EXACT_VERTEX_GUARD} needs an explicit override"
        )));
    }
    let seed = seed_mask(g, cfg)?;
    let seed_bits = seed.as_ref().map_or(0, |s| s.to_mask().expect("n <= 64"));
    let mg = MaskGraph::new(g).expect("n <= 64");
    let cap = cfg.max_subset_size.map_or(u32::MAX, |c| c as u32);
    let last_anchor = if seed_bits == 0 { n } else { seed_bits.trailing_zeros() as usize + 1 };
    let deadline = cfg.time_budget.map(|d| start + d);
    let abort = AtomicBool::new(false);

    let per_anchor: Vec<(Option<MaskScore>, u64)> = (0..last_anchor)
        .into_par_iter()
        .map(|a| {
            let allowed = u64::MAX.checked_shl(a as u32 + 1).unwrap_or(0) & full_mask(n);
            let mut search = AnchorSearch {
                mg: &mg,
                allowed,
                seed: seed_bits,
                cap,
                best: None,
                explored: 0,
                deadline,
                abort: &abort,
            };
            if cap >= 1 {
                let na = mg.neighbors(a);
                search.extend(1 << a, 1, 0, 0, na & allowed, na | 1 << a);
            }
            (search.best, search.explored)
        })
        .collect();

    let explored = per_anchor.iter().map(|r| r.1).sum();
    let best =
        per_anchor.iter().filter_map(|r| r.0).reduce(|a, b| if b.prefer(&a) == Ordering::Greater { b } else { a });
    let (best_set, best_value) = match best {
        Some(score) => {
            let set = VertexSet::from_mask(n, score.set);
            let value = cohesion_of_set(g, &set)?;
            (set, value)
        }
        None => (VertexSet::new(n), CohesionValue::zero()),
    };
    let timed_out = abort.load(AtomicOrdering::Relaxed);
    let result = SolverResult {
        no_positive_cohesion: best_value.is_zero(),
        best_set,
        best_value,
        explored,
        elapsed: start.elapsed(),
        exact: !timed_out,
    };
    if timed_out {
        return Err(Error::TimeBudgetExceeded { partial: Box::new(result) });
    }
    Ok(result)
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Lexicographically smallest connected vertex triple, if any.
pub fn first_connected_triple(g: &Graph) -> Option<[usize; 3]> {
    let n = g.vertex_count();
    for a in 0..n {
        let mut cands: Vec<usize> = g
            .neighbors(a)
            .iter()
            .flat_map(|&x| std::iter::once(x).chain(g.neighbors(x).iter().copied()))
            .filter(|&x| x > a)
            .collect();
        cands.sort_unstable();
        cands.dedup();
        for (i, &b) in cands.iter().enumerate() {
            let ab = g.has_edge(a, b);
            let c = cands[i + 1..].iter().copied().find(|&c| {
                let (ac, bc) = (g.has_edge(a, c), g.has_edge(b, c));
                (ab && (ac || bc)) || (ac && bc)
            });
            if let Some(c) = c {
                return Some([a, b, c]);
            }
        }
    }
    None
}

struct LocalState {
    set: VertexSet,
    census: TriangleCensus<BigUint>,
    value: Cohesion,
}

impl LocalState {
    fn new(g: &Graph, set: VertexSet) -> Result<Self> {
        let census = census(g, &set)?;
        let value = cohesion(&BigUint::from(set.len()), &census.inside, &census.outbound)?;
        Ok(Self { set, census, value })
    }
}

/// Steepest-ascent local search with single-vertex add/remove moves.
fn climb(g: &Graph, start: VertexSet, locked: Option<&VertexSet>, explored: &mut u64) -> Result<LocalState> {
    let mut state = LocalState::new(g, start)?;
    let mut frontier = VertexSet::new(g.vertex_count());
    loop {
        frontier.clone_from(&VertexSet::new(g.vertex_count()));
        for v in state.set.iter() {
            for &w in g.neighbors(v) {
                if !state.set.contains(w) {
                    frontier.insert(w);
                }
            }
        }
        let mut best: Option<(Cohesion, usize, bool, TriangleCensus<BigUint>)> = None;
        let adds = frontier.iter().map(|v| (v, true));
        let removes = state.set.iter().filter(|&v| locked.is_none_or(|l| !l.contains(v))).map(|v| (v, false));
        for (v, is_add) in adds.chain(removes) {
            *explored += 1;
            let delta =
                if is_add { add_vertex_delta(g, &state.set, v)? } else { remove_vertex_delta(g, &state.set, v)? };
            let next = state.census.apply(&delta)?;
            let size = if is_add { state.set.len() + 1 } else { state.set.len() - 1 };
            let value = cohesion(&BigUint::from(size), &next.inside, &next.outbound)?;
            if best.as_ref().is_none_or(|b| value.compare(&b.0) == Ordering::Greater) {
                best = Some((value, v, is_add, next));
            }
        }
        match best {
            Some((value, v, is_add, next)) if value.compare(&state.value) == Ordering::Greater => {
                if is_add {
                    state.set.insert(v);
                } else {
                    state.set.remove(v);
                }
                state.census = next;
                state.value = value;
            }
            _ => return Ok(state),
        }
    }
}

/// Top triangle: highest-Δ edge (smallest such edge), smallest common neighbour.
fn top_triangle(g: &Graph) -> Option<[usize; 3]> {
    let mut best: Option<(u64, usize, usize)> = None;
    for (u, v) in g.edges() {
        let d = edge_triangle_count(g, u, v).expect("edge");
        if d > 0 && best.is_none_or(|b| d > b.0) {
            best = Some((d, u, v));
        }
    }
    let (_, u, v) = best?;
    let w = g.neighbors(u).iter().copied().find(|&w| g.has_edge(v, w))?;
    Some([u, v, w])
}

fn random_triangle(g: &Graph, rng: &mut ChaCha8Rng) -> Option<[usize; 3]> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.is_empty() {
        return None;
    }
    // a handful of blind draws, then a scan of the shuffled edges
    for _ in 0..16 {
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        let common: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        if let Some(&w) = common.choose(rng) {
            return Some([u, v, w]);
        }
    }
    let mut order = edges;
    order.shuffle(rng);
    order.into_iter().find_map(|(u, v)| {
        let common: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        common.choose(rng).map(|&w| [u, v, w])
    })
}

/// Multi-restart local search. Never exact; deterministic for a fixed
/// `rng_seed` regardless of thread count.
pub fn solve_heuristic(g: &Graph, cfg: &SearchConfig) -> Result<SolverResult> {
    let start = Instant::now();
    let n = g.vertex_count();
    let seed = seed_mask(g, cfg)?;
    let restarts = cfg.heuristic_restarts.max(1);

    let runs: Vec<Result<(LocalState, u64)>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(r as u64);
            let triangle = if r == 0 { top_triangle(g) } else { random_triangle(g, &mut rng) };
            let mut set = seed.clone().unwrap_or_else(|| VertexSet::new(n));
            if seed.is_none() || r > 0 || set.len() < 3 {
                if let Some(t) = triangle {
                    t.iter().for_each(|&v| {
                        set.insert(v);
                    });
                }
            }
            let mut explored = 0;
            let state = climb(g, set, seed.as_ref(), &mut explored)?;
            Ok((state, explored))
        })
        .collect();

    let mut explored = 0;
    let mut best: Option<LocalState> = None;
    for run in runs {
        let (state, e) = run?;
        explored += e;
        let better =
            best.as_ref().is_none_or(|b| prefer(&state.value, &state.set, &b.value, &b.set) == Ordering::Greater);
        if better {
            best = Some(state);
        }
    }
    let mut best = best.expect("at least one restart");
    if best.value.is_zero() && seed.is_none() {
        let set = match first_connected_triple(g) {
            Some(t) => VertexSet::from_members(n, t)?,
            None => VertexSet::new(n),
        };
        best = LocalState::new(g, set)?;
    }
    Ok(SolverResult {
        no_positive_cohesion: best.value.is_zero(),
        best_set: best.set,
        best_value: best.value,
        explored,
        elapsed: start.elapsed(),
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    /// Independent all-subsets maximum (plain census per subset).
    fn brute_max(g: &Graph) -> Cohesion {
        let n = g.vertex_count();
        (0..1u64 << n).map(|m| cohesion_of_set::<BigUint>(g, &VertexSet::from_mask(n, m)).unwrap()).max().unwrap()
    }

    #[test]
    fn k5_exact() {
        let r = solve_exact(&Graph::complete(5), &cfg()).unwrap();
        assert_eq!(r.best_set, VertexSet::full(5));
        assert_eq!(r.best_value, CohesionValue::one());
        assert!(r.exact && !r.no_positive_cohesion);
        // connected subsets of K5 with >= 3 vertices
        assert_eq!(r.explored, 10 + 5 + 1);
    }

    #[test]
    fn c6_exact_is_zero() {
        let r = solve_exact(&fixtures::cycle(6), &cfg()).unwrap();
        assert!(r.best_value.is_zero());
        assert!(r.no_positive_cohesion);
        assert_eq!(r.best_set.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn exact_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 0..60 {
            let n = rng.gen_range(1..=7);
            let g = fixtures::gnp(n, fixtures::DENSITIES[t % 3], &mut rng);
            let r = solve_exact(&g, &cfg()).unwrap();
            assert_eq!(r.best_value, brute_max(&g), "trial {t}");
            assert!(crate::graph::is_connected(&g, &r.best_set).unwrap());
            assert_eq!(r.best_value, cohesion_of_set(&g, &r.best_set).unwrap());
        }
    }

    #[test]
    fn exact_counts_each_connected_subset_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let n = rng.gen_range(3..=9);
            let g = fixtures::gnp(n, 0.4, &mut rng);
            let mg = MaskGraph::new(&g).unwrap();
            let want = (0..1u64 << n).filter(|&m| m.count_ones() >= 3 && mg.is_connected(m)).count() as u64;
            assert_eq!(solve_exact(&g, &cfg()).unwrap().explored, want);
        }
    }

    #[test]
    fn guard_and_override() {
        let g = fixtures::cycle(33);
        assert!(matches!(solve_exact(&g, &cfg()), Err(Error::Refused(_))));
        let forced = SearchConfig { force: true, max_subset_size: Some(4), ..cfg() };
        assert!(solve_exact(&g, &forced).unwrap().no_positive_cohesion);
        let huge = fixtures::cycle(65);
        assert!(matches!(solve_exact(&huge, &SearchConfig { force: true, ..cfg() }), Err(Error::Refused(_))));
    }

    #[test]
    fn time_budget_returns_partial() {
        let g = Graph::complete(30);
        let c = SearchConfig { time_budget: Some(Duration::from_millis(20)), ..cfg() };
        match solve_exact(&g, &c) {
            Err(Error::TimeBudgetExceeded { partial }) => assert!(!partial.exact),
            other => panic!("expected timeout, got {other:?}"),
        }
    }

    #[test]
    fn seeded_exact() {
        let g = fixtures::bridged_cliques(4);
        let plain = solve_exact(&g, &cfg()).unwrap();
        assert_eq!(plain.best_set.to_vec(), vec![0, 1, 2, 3]);
        let seed = VertexSet::from_members(8, [5]).unwrap();
        let r = solve_exact(&g, &SearchConfig { seed_set: Some(seed.clone()), ..cfg() }).unwrap();
        assert_eq!(r.best_set.to_vec(), vec![4, 5, 6, 7]);
        // brute force over supersets of the seed
        let best = (0..256u64)
            .filter(|m| m >> 5 & 1 == 1 && m.count_ones() >= 3)
            .map(|m| cohesion_of_set::<BigUint>(&g, &VertexSet::from_mask(8, m)).unwrap())
            .max()
            .unwrap();
        assert_eq!(r.best_value, best);
        let split = VertexSet::from_members(6, [0, 4]).unwrap();
        let two = fixtures::disjoint_cliques(3);
        assert!(solve_exact(&two, &SearchConfig { seed_set: Some(split), ..cfg() }).is_err());
    }

    #[test]
    fn heuristic_examples() {
        let r = solve_heuristic(&Graph::complete(5), &cfg()).unwrap();
        assert_eq!(r.best_value, CohesionValue::one());
        assert!(!r.exact);

        let g = fixtures::bridged_cliques(5);
        let r = solve_heuristic(&g, &cfg()).unwrap();
        let union: Cohesion = cohesion_of_set(&g, &VertexSet::full(10)).unwrap();
        assert_eq!(union.to_string(), "1/6");
        assert_eq!(r.best_value, CohesionValue::one());
        let members = r.best_set.to_vec();
        assert!(members == (0..5).collect::<Vec<_>>() || members == (5..10).collect::<Vec<_>>());

        let r = solve_heuristic(&fixtures::cycle(6), &cfg()).unwrap();
        assert!(r.no_positive_cohesion);
        assert_eq!(r.best_set.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn heuristic_never_beats_exact_and_keeps_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for t in 0..60 {
            let n = rng.gen_range(3..=7);
            let g = fixtures::gnp(n, fixtures::DENSITIES[t % 3], &mut rng);
            let c = SearchConfig { rng_seed: t as u64, ..cfg() };
            let h = solve_heuristic(&g, &c).unwrap();
            let e = solve_exact(&g, &c).unwrap();
            assert!(h.best_value <= e.best_value);
            assert_eq!(h.best_value, cohesion_of_set(&g, &h.best_set).unwrap());
            let seed = VertexSet::from_members(n, [rng.gen_range(0..n)]).unwrap();
            let c = SearchConfig { seed_set: Some(seed.clone()), ..c };
            if let Ok(hs) = solve_heuristic(&g, &c) {
                assert!(seed.is_subset(&hs.best_set));
            }
        }
    }

    #[test]
    fn deterministic_results() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = fixtures::gnp(14, 0.5, &mut rng);
        let c = SearchConfig { rng_seed: 99, heuristic_restarts: 6, ..cfg() };
        let a = serde_json::to_string(&solve_heuristic(&g, &c).unwrap()).unwrap();
        let b = serde_json::to_string(&solve_heuristic(&g, &c).unwrap()).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| serde_json::to_string(&solve_exact(&g, &c).unwrap()).unwrap());
        assert_eq!(single, serde_json::to_string(&solve_exact(&g, &c).unwrap()).unwrap());
    }

    #[test]
    fn connected_triple_helper() {
        assert_eq!(first_connected_triple(&fixtures::cycle(6)), Some([0, 1, 2]));
        let star = Graph::from_edges(4, [(3, 0), (3, 1), (3, 2)]).unwrap();
        assert_eq!(first_connected_triple(&star), Some([0, 1, 3]));
        let matching = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(first_connected_triple(&matching), None);
    }
}
