//! Simple undirected graphs with dense vertex ids, vertex subsets, and the
//! plain-text edge-list format.
//!
//! A [`Graph`] is immutable once built. Vertex ids are `0..n`; external
//! tokens from an edge-list file survive as labels.

use std::borrow::Cow;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::io::Read;

use fixedbitset::FixedBitSet;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comment line that pins the dense-id order of tokens (and keeps isolated
/// vertices) when a graph is written back out as an edge list.
pub const VERTEX_PRAGMA: &str = "#@vertices";

#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    /// Neighbours of higher (degree, id) rank, sorted by id.
    forward: Vec<Vec<usize>>,
    edge_count: usize,
    labels: Option<Vec<String>>,
    label_index: HashMap<String, usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj && self.labels == other.labels
    }
}

impl Eq for Graph {}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_adjacency(vec![Vec::new(); n], 0)
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect();
        Self::from_adjacency(adj, n * n.saturating_sub(1) / 2)
    }

    /// Builds a graph from an edge list. Self-loops, duplicates (in either
    /// orientation) and out-of-range endpoints are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop on vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("duplicate edge ({}, {})", v.min(w[0]), v.max(w[0]))));
            }
        }
        Ok(Self::from_adjacency(adj, m))
    }

    /// `adj` must already be symmetric, sorted and loop-free.
    fn from_adjacency(adj: Vec<Vec<usize>>, edge_count: usize) -> Self {
        let rank = |v: usize| (adj[v].len(), v);
        let forward = adj
            .iter()
            .enumerate()
            .map(|(u, list)| list.iter().copied().filter(|&w| rank(w) > rank(u)).collect())
            .collect();
        Self { adj, forward, edge_count, labels: None, label_index: HashMap::new() }
    }

    /// Attaches external names. Labels must be unique, one per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vertex_count() {
            return Err(Error::Validation(format!("{} labels for {} vertices", labels.len(), self.vertex_count())));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (v, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::Validation(format!("label {label:?} is not a single token")));
            }
            if index.insert(label.clone(), v).is_some() {
                return Err(Error::Validation(format!("duplicate label {label:?}")));
            }
        }
        self.labels = Some(labels);
        self.label_index = index;
        Ok(self)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbour list.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbours ranked above `v` in (degree, id) order, sorted by id. Every
    /// triangle is seen exactly once from its lowest-ranked vertex.
    #[inline]
    pub(crate) fn forward_neighbors(&self, v: usize) -> &[usize] {
        &self.forward[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.vertex_count() || v >= self.vertex_count() {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Pairs of distinct vertices that are not adjacent, `u < v`, lexicographic.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2 - self.edge_count);
        for u in 0..n {
            let mut it = self.adj[u].iter().copied().filter(|&v| v > u).peekable();
            for v in u + 1..n {
                if it.peek() == Some(&v) {
                    it.next();
                } else {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External name of `v`; the decimal id when the graph is unlabelled.
    pub fn label(&self, v: usize) -> Cow<'_, str> {
        match &self.labels {
            Some(labels) => Cow::Borrowed(labels[v].as_str()),
            None => Cow::Owned(v.to_string()),
        }
    }

    /// Resolves an external token. Unlabelled graphs accept decimal ids.
    pub fn vertex_by_label(&self, token: &str) -> Option<usize> {
        match &self.labels {
            Some(_) => self.label_index.get(token).copied(),
            None => token.parse().ok().filter(|&v| v < self.vertex_count()),
        }
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whole-graph connectivity (true for n <= 1).
    pub fn is_connected(&self) -> bool {
        let all = VertexSet::full(self.vertex_count());
        is_connected(self, &all).expect("full set is valid")
    }

    /// Writes the edge-list format, prefixed by a `#@vertices` pragma so that
    /// isolated vertices and id order survive a round trip.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        out.push_str(VERTEX_PRAGMA);
        for v in 0..self.vertex_count() {
            out.push(' ');
            out.push_str(&self.label(v));
        }
        out.push('\n');
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.label(u), self.label(v));
        }
        out
    }
}

/// Parses the edge-list text format.
///
/// One edge per line as two whitespace-separated tokens. Blank lines and lines
/// starting with `#` are skipped, except a leading `#@vertices t0 t1 ...`
/// pragma, which pre-registers tokens in order. Tokens are renumbered densely
/// in order of first appearance and kept as labels.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut intern = |tok: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&id) = index.get(tok) {
            return id;
        }
        let id = labels.len();
        index.insert(tok.to_owned(), id);
        labels.push(tok.to_owned());
        id
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if let Some(rest) = line.strip_prefix(VERTEX_PRAGMA) {
            if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                continue;
            }
            for tok in rest.split_whitespace() {
                let before = labels.len();
                intern(tok, &mut labels);
                if labels.len() == before {
                    return Err(Error::Parse { line: lineno, message: format!("vertex {tok:?} declared twice") });
                }
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let (a, b) = match (toks.next(), toks.next(), toks.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse { line: lineno, message: format!("expected two vertex tokens, got {line:?}") })
            }
        };
        let u = intern(a, &mut labels);
        let v = intern(b, &mut labels);
        edges.push((u, v, lineno));
    }

    let n = labels.len();
    let mut seen = std::collections::HashSet::with_capacity(edges.len());
    for &(u, v, lineno) in &edges {
        if u == v {
            return Err(Error::Validation(format!("line {lineno}: self-loop on {:?}", labels[u])));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::Validation(format!("line {lineno}: duplicate edge {:?} {:?}", labels[u], labels[v])));
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|(u, v, _)| (u, v)))?.with_labels(labels)
}

/// Reads and parses an edge list from any byte stream.
pub fn read_edge_list<R: Read>(mut reader: R) -> Result<Graph> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_edge_list(&text)
}

struct LabelMap<'a>(&'a [String]);

impl Serialize for LabelMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (v, label) in self.0.iter().enumerate() {
            map.serialize_entry(&v.to_string(), label)?;
        }
        map.end()
    }
}

/// `{"n": .., "edges": [[u, v], ..], "labels": {"0": .., ..}}` with `u < v`,
/// edges sorted, label keys in ascending numeric order.
impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let edges: Vec<[usize; 2]> = self.edges().map(|(u, v)| [u, v]).collect();
        let mut st = serializer.serialize_struct("Graph", 3)?;
        st.serialize_field("n", &self.vertex_count())?;
        st.serialize_field("edges", &edges)?;
        st.serialize_field("labels", &LabelMap(self.labels().unwrap_or(&[])))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            edges: Vec<[usize; 2]>,
            #[serde(default, deserialize_with = "labels_by_id")]
            labels: Vec<(usize, String)>,
        }

        fn labels_by_id<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(usize, String)>, D::Error> {
            struct V;
            impl<'de> Visitor<'de> for V {
                type Value = Vec<(usize, String)>;
                fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                    f.write_str("a map from vertex id to label")
                }
                fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                    let mut out = Vec::new();
                    while let Some((k, v)) = map.next_entry::<String, String>()? {
                        let id = k.parse().map_err(de::Error::custom)?;
                        out.push((id, v));
                    }
                    Ok(out)
                }
            }
            d.deserialize_map(V)
        }

        let raw = Raw::deserialize(deserializer)?;
        let g = Graph::from_edges(raw.n, raw.edges.into_iter().map(|[u, v]| (u, v))).map_err(de::Error::custom)?;
        if raw.labels.is_empty() {
            return Ok(g);
        }
        let mut labels = vec![None; raw.n];
        for (id, label) in raw.labels {
            let slot = labels.get_mut(id).ok_or_else(|| de::Error::custom(format!("label for unknown vertex {id}")))?;
            *slot = Some(label);
        }
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or_else(|| de::Error::custom(format!("vertex {v} has no label"))))
            .collect::<Result<Vec<_>, _>>()?;
        g.with_labels(labels).map_err(de::Error::custom)
    }
}

/// A subset of the vertices `0..universe` of some graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
    len: usize,
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        Self { bits: FixedBitSet::with_capacity(universe), len: 0 }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Self { bits, len: universe }
    }

    /// Collects members, rejecting ids `>= universe`. Repeated ids collapse.
    pub fn from_members<I>(universe: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = Self::new(universe);
        for v in members {
            if v >= universe {
                return Err(Error::Validation(format!("vertex {v} out of range for {universe} vertices")));
            }
            set.insert(v);
        }
        Ok(set)
    }

    /// Set of the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe >= 64 || mask >> universe == 0);
        let mut set = Self::new(universe);
        let mut rest = mask;
        while rest != 0 {
            set.insert(rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
        set
    }

    /// Bitmask form; `None` if any member is `>= 64`.
    pub fn to_mask(&self) -> Option<u64> {
        self.iter().try_fold(0u64, |acc, v| (v < 64).then(|| acc | 1 << v))
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    /// Returns whether `v` was newly added. Panics if `v >= universe`.
    pub fn insert(&mut self, v: usize) -> bool {
        let fresh = !self.bits.put(v);
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = v < self.universe() && self.bits.contains(v);
        if present {
            self.bits.set(v, false);
            self.len -= 1;
        }
        present
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub(crate) fn check_for(&self, g: &Graph) -> Result<()> {
        if self.universe() != g.vertex_count() {
            return Err(Error::Validation(format!(
                "vertex set over {} vertices used with a graph of {}",
                self.universe(),
                g.vertex_count()
            )));
        }
        Ok(())
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// `G[S]`, with vertices renumbered `0..|S|` in ascending order of their ids in
/// `g`. Labels carry over.
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<Graph> {
    s.check_for(g)?;
    let members = s.to_vec();
    let mut new_id = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in members.iter().enumerate() {
        new_id[v] = i;
    }
    let mut adj = Vec::with_capacity(members.len());
    let mut twice_m = 0;
    for &v in &members {
        let list: Vec<usize> = g.neighbors(v).iter().filter(|&&w| s.contains(w)).map(|&w| new_id[w]).collect();
        twice_m += list.len();
        adj.push(list);
    }
    let sub = Graph::from_adjacency(adj, twice_m / 2);
    match g.labels() {
        Some(labels) => sub.with_labels(members.iter().map(|&v| labels[v].clone()).collect()),
        None => Ok(sub),
    }
}

/// Whether `G[S]` has a single connected component. Empty and singleton sets
/// count as connected.
pub fn is_connected(g: &Graph, s: &VertexSet) -> Result<bool> {
    s.check_for(g)?;
    let Some(start) = s.iter().next() else {
        return Ok(true);
    };
    let mut seen = VertexSet::new(g.vertex_count());
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if s.contains(w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    Ok(seen.len() == s.len())
}

/// Neighbourhood bitmasks for graphs with at most 64 vertices.
pub fn adjacency_masks(g: &Graph) -> Option<Vec<u64>> {
    if g.vertex_count() > 64 {
        return None;
    }
    Some((0..g.vertex_count()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_triangle() {
        let g = parse_edge_list("0 1\n1 2\n0 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn parse_empty() {
        let g = parse_edge_list("").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (0, 0));
    }

    #[test]
    fn parse_rejects_reversed_duplicate() {
        let err = parse_edge_list("a b\nb a").unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("line 2")), "{err}");
    }

    #[test]
    fn parse_rejects_self_loop() {
        assert!(matches!(parse_edge_list("x x"), Err(Error::Validation(_))));
    }

    #[test]
    fn parse_reports_line_number() {
        match parse_edge_list("# header\n0 1\n\n1 2 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_edge_list("lonely"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn comments_and_pragma() {
        let g = parse_edge_list("#@vertices z y x\n# note\nx y\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.label(0), "z");
        assert_eq!(g.degree(0), 0);
        assert!(g.has_edge(1, 2));
        assert!(matches!(parse_edge_list("#@vertices a a"), Err(Error::Parse { .. })));
    }

    #[test]
    fn edge_list_round_trip_keeps_isolated_vertices() {
        let g = Graph::from_edges(5, [(0, 4), (1, 4)]).unwrap();
        let back = parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(back.vertex_count(), 5);
        assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn json_is_canonical() {
        let g = parse_edge_list("b a\nc a").unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":3,"edges":[[0,1],[1,2]],"labels":{"0":"b","1":"a","2":"c"}}"#);
        let back: Graph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        let plain = Graph::from_edges(2, [(1, 0)]).unwrap();
        assert_eq!(serde_json::to_string(&plain).unwrap(), r#"{"n":2,"edges":[[0,1]],"labels":{}}"#);
    }

    #[test]
    fn json_label_keys_sort_numerically() {
        let g = Graph::empty(11).with_labels((0..11).map(|i| format!("v{i}")).collect()).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.contains(r#""9":"v9","10":"v10""#), "{json}");
    }

    #[test]
    fn induced_clique() {
        let k4 = Graph::complete(4);
        let s = VertexSet::from_members(4, [0, 1, 2]).unwrap();
        let sub = induced_subgraph(&k4, &s).unwrap();
        assert_eq!((sub.vertex_count(), sub.edge_count()), (3, 3));
        let empty = induced_subgraph(&k4, &VertexSet::new(4)).unwrap();
        assert_eq!((empty.vertex_count(), empty.edge_count()), (0, 0));
    }

    #[test]
    fn induced_square_example_square() {
        let (g, s) = crate::fixtures::square_example();
        let sub = induced_subgraph(&g, &s).unwrap();
        assert_eq!(sub.edge_count(), 5);
        assert_eq!(sub.labels().unwrap(), ["a", "d", "b", "c"]);
    }

    #[test]
    fn out_of_range_members() {
        assert!(matches!(VertexSet::from_members(3, [3]), Err(Error::Validation(_))));
        let g = Graph::complete(4);
        assert!(induced_subgraph(&g, &VertexSet::new(5)).is_err());
    }

    #[test]
    fn connectivity_examples() {
        let k4 = Graph::complete(4);
        assert!(is_connected(&k4, &VertexSet::full(4)).unwrap());
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_connected(&two, &VertexSet::full(6)).unwrap());
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!is_connected(&path, &VertexSet::from_members(3, [0, 2]).unwrap()).unwrap());
        assert!(is_connected(&path, &VertexSet::new(3)).unwrap());
        assert!(is_connected(&path, &VertexSet::from_members(3, [2]).unwrap()).unwrap());
    }

    #[test]
    fn non_edges_complement_edges() {
        let c5 = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(c5.non_edges(), vec![(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]);
    }

    #[test]
    fn mask_round_trip() {
        let s = VertexSet::from_members(10, [1, 3, 9]).unwrap();
        assert_eq!(s.to_mask(), Some(0b10_0000_1010));
        assert_eq!(VertexSet::from_mask(10, 0b10_0000_1010), s);
    }
}
