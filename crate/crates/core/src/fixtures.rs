//! Named graphs and random graph generators shared by tests, the harness and
//! the CLI examples.

use rand::Rng;

use crate::graph::{parse_edge_list, Graph, VertexSet};

/// The five-vertex example with the four-vertex "square" set `S`: a unit
/// square with one diagonal plus an outer vertex joined to the right side.
/// Labels are `a`=(0,0), `b`=(0,2), `c`=(2,0), `d`=(2,2), `e`=(3.6,1).
pub fn square_example() -> (Graph, VertexSet) {
    let g = parse_edge_list(SQUARE_EXAMPLE).expect("valid fixture");
    let s =
        VertexSet::from_members(5, ["a", "b", "c", "d"].map(|t| g.vertex_by_label(t).unwrap())).expect("valid fixture");
    (g, s)
}

pub const SQUARE_EXAMPLE: &str = "a d\nd b\nb a\na c\nc e\ne d\nd c\n";

/// `K_4` with the edge `{2, 3}` removed.
pub fn k4_minus_edge() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Two vertex-disjoint copies of `K_k`, ids `0..k` and `k..2k`.
pub fn disjoint_cliques(k: usize) -> Graph {
    Graph::from_edges(2 * k, clique_pairs(0, k).chain(clique_pairs(k, k))).unwrap()
}

/// Two copies of `K_k` joined by the single edge `{k-1, k}`.
pub fn bridged_cliques(k: usize) -> Graph {
    Graph::from_edges(2 * k, clique_pairs(0, k).chain(clique_pairs(k, k)).chain(std::iter::once((k - 1, k)))).unwrap()
}

fn clique_pairs(offset: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..k).map(move |j| (offset + i, offset + j)))
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// `G(n, p)` resampled until connected.
pub fn connected_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let g = gnp(n, p, rng);
        if g.is_connected() {
            return g;
        }
    }
}

/// Graph whose edge set is given by one flag per pair `(u, v)`, `u < v`, in
/// lexicographic order.
pub fn graph_from_pair_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut it = bits.iter();
    for u in 0..n {
        for v in u + 1..n {
            if *it.next().expect("one flag per pair") {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Every labelled graph on `n` vertices (`2^C(n,2)` of them), indexed by the
/// pair bitmask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    assert!(pairs < 32, "too many graphs to enumerate");
    (0u32..1 << pairs).map(move |code| {
        let bits: Vec<bool> = (0..pairs).map(|i| code >> i & 1 == 1).collect();
        graph_from_pair_bits(n, &bits)
    })
}

/// Edge probabilities cycled through by the randomised suites.
pub const DENSITIES: [f64; 3] = [0.3, 0.5, 0.7];
