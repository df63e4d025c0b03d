//! Finite directed multigraphs and the structural predicates used by the
//! classifier: sinks, cycles and exits, hereditary saturated subsets, and the
//! graph constructions (roses, matrix graphs, the Cuntz splice).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Index of a vertex in a graph's declaration order.
pub type VertexIndex = usize;

/// Largest vertex count accepted by [`Graph::hereditary_saturated_subsets`].
pub const HEREDITARY_SEARCH_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: VertexIndex,
    pub range: VertexIndex,
}

/// A finite directed graph with parallel edges and loops.
///
/// Vertices are named by strings and kept in declaration order; that order
/// is the canonical order for every element, matrix and report built on top
/// of the graph. Edges are stored as a list so each edge has an id (its
/// position).
#[derive(Clone, Debug)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, VertexIndex>,
    edges: Vec<Edge>,
    // ranges of s^{-1}(v), with multiplicity, in edge order
    out_ranges: Vec<Vec<VertexIndex>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// On-disk JSON form: `{"vertices": ["u","v"], "edges": [["u","v"],["v","v"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

/// A subset of a graph's vertices, stored sorted by vertex order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    members: Vec<VertexIndex>,
}

impl VertexSet {
    pub fn new(mut members: Vec<VertexIndex>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    fn from_mask(mask: u64, n: usize) -> Self {
        VertexSet {
            members: (0..n).filter(|&i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn members(&self) -> &[VertexIndex] {
        &self.members
    }

    pub fn contains(&self, v: VertexIndex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn names<'g>(&self, g: &'g Graph) -> Vec<&'g str> {
        self.members.iter().map(|&v| g.name(v)).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&v| other.contains(v))
                .collect(),
        }
    }
}

/// A simple cycle, as the list of its edge ids in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Vec<usize>,
}

impl Cycle {
    /// Vertices visited by the cycle, starting at the source of its first edge.
    pub fn vertices(&self, g: &Graph) -> Vec<VertexIndex> {
        self.edges.iter().map(|&e| g.edges[e].source).collect()
    }
}

impl Graph {
    /// Builds a graph from vertex names and `(source, range)` name pairs.
    pub fn new<S, T>(vertices: &[S], edges: &[(T, T)]) -> Result<Self, GraphError>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut names = Vec::with_capacity(vertices.len());
        let mut index = HashMap::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            if index.insert(v.to_string(), names.len()).is_some() {
                return Err(GraphError::DuplicateVertex(v.to_string()));
            }
            names.push(v.to_string());
        }
        let mut resolved = Vec::with_capacity(edges.len());
        for (s, r) in edges {
            let (s, r) = (s.as_ref(), r.as_ref());
            match (index.get(s), index.get(r)) {
                (Some(&source), Some(&range)) => resolved.push(Edge { source, range }),
                _ => {
                    return Err(GraphError::DanglingEdge {
                        from: s.to_string(),
                        to: r.to_string(),
                    })
                }
            }
        }
        Ok(Self::from_parts(names, index, resolved))
    }

    fn from_parts(
        names: Vec<String>,
        index: HashMap<String, VertexIndex>,
        edges: Vec<Edge>,
    ) -> Self {
        let mut out_ranges = vec![Vec::new(); names.len()];
        for e in &edges {
            out_ranges[e.source].push(e.range);
        }
        Graph {
            names,
            index,
            edges,
            out_ranges,
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self, GraphError> {
        Graph::new(&file.vertices, &file.edges)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| (self.names[e.source].clone(), self.names[e.range].clone()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        Graph::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph file always serializes")
    }

    /// One vertex carrying `n` loops.
    pub fn rose(n: usize) -> Self {
        Graph::new(&["u"], &vec![("u", "u"); n]).expect("rose graph is well formed")
    }

    /// Vertex `u` with `d - 1` parallel edges into `v`, which carries `n` loops.
    pub fn matrix_graph(d: usize, n: usize) -> Result<Self, GraphError> {
        if d < 2 || n < 2 {
            return Err(GraphError::InvalidParameter(format!(
                "matrix graph needs d >= 2 and n >= 2, got d={d}, n={n}"
            )));
        }
        let mut edges = vec![("u", "v"); d - 1];
        edges.extend(std::iter::repeat(("v", "v")).take(n));
        Graph::new(&["u", "v"], &edges)
    }

    /// Attaches two fresh vertices `p`, `q` at `at` with the edges
    /// `at→p, p→at, p→q, q→p, p→p, q→q`.
    ///
    /// The fresh vertices are named `v` and `w` when both names are free
    /// (so splicing E₂ at `u` yields the usual labelling), and
    /// `<at>_s1`, `<at>_s2` (primed until unused) otherwise.
    pub fn cuntz_splice(&self, at: &str) -> Result<Self, GraphError> {
        let at_idx = self.vertex(at)?;
        if !self.on_cycle(at_idx) {
            return Err(GraphError::VertexNotOnCycle(at.to_string()));
        }
        let (p, q) = if !self.index.contains_key("v") && !self.index.contains_key("w") {
            ("v".to_string(), "w".to_string())
        } else {
            (
                self.fresh_name(&format!("{at}_s1")),
                self.fresh_name(&format!("{at}_s2")),
            )
        };
        let mut names = self.names.clone();
        let mut index = self.index.clone();
        let p_idx = names.len();
        let q_idx = p_idx + 1;
        index.insert(p.clone(), p_idx);
        index.insert(q.clone(), q_idx);
        names.push(p);
        names.push(q);
        let mut edges = self.edges.clone();
        for (source, range) in [
            (at_idx, p_idx),
            (p_idx, at_idx),
            (p_idx, q_idx),
            (q_idx, p_idx),
            (p_idx, p_idx),
            (q_idx, q_idx),
        ] {
            edges.push(Edge { source, range });
        }
        Ok(Self::from_parts(names, index, edges))
    }

    fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        name
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexIndex) -> &str {
        &self.names[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, name: &str) -> Result<VertexIndex, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    /// Ranges of the edges leaving `v`, repeated per parallel edge.
    pub fn out_ranges(&self, v: VertexIndex) -> &[VertexIndex] {
        &self.out_ranges[v]
    }

    pub fn out_degree(&self, v: VertexIndex) -> usize {
        self.out_ranges[v].len()
    }

    pub fn is_sink(&self, v: VertexIndex) -> bool {
        self.out_ranges[v].is_empty()
    }

    /// Adjacency matrix: `A[u][v]` counts edges `u → v`.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertex_count();
        let mut a = vec![vec![0u64; n]; n];
        for e in &self.edges {
            a[e.source][e.range] += 1;
        }
        a
    }

    pub fn sinks(&self) -> VertexSet {
        VertexSet::new(
            (0..self.vertex_count())
                .filter(|&v| self.is_sink(v))
                .collect(),
        )
    }

    pub fn regular_vertices(&self) -> VertexSet {
        VertexSet::new(
            (0..self.vertex_count())
                .filter(|&v| !self.is_sink(v))
                .collect(),
        )
    }

    /// The graph is literally a rose: one vertex, every edge a loop. Returns
    /// the number of loops.
    pub fn rose_petals(&self) -> Option<usize> {
        (self.vertex_count() == 1).then_some(self.edge_count())
    }

    /// Same vertex names and the same edge multiset, ignoring declaration order.
    pub fn same_labeled_graph(&self, other: &Graph) -> bool {
        let mut a = self.names.clone();
        let mut b = other.names.clone();
        a.sort();
        b.sort();
        if a != b {
            return false;
        }
        fn multiset(g: &Graph) -> BTreeMap<(&str, &str), usize> {
            let mut m = BTreeMap::new();
            for e in &g.edges {
                *m.entry((g.name(e.source), g.name(e.range))).or_default() += 1;
            }
            m
        }
        multiset(self) == multiset(other)
    }

    pub fn is_hereditary(&self, set: &VertexSet) -> bool {
        self.edges
            .iter()
            .all(|e| !set.contains(e.source) || set.contains(e.range))
    }

    pub fn is_saturated(&self, set: &VertexSet) -> bool {
        (0..self.vertex_count()).all(|v| {
            set.contains(v)
                || self.is_sink(v)
                || !self.out_ranges[v].iter().all(|&r| set.contains(r))
        })
    }

    /// Smallest hereditary saturated set containing `seeds`: everything
    /// reachable, then every regular vertex whose ranges all lie inside,
    /// repeated until stable.
    pub fn hereditary_saturated_closure(&self, seeds: &[VertexIndex]) -> VertexSet {
        let n = self.vertex_count();
        let mut inside = vec![false; n];
        let mut stack: Vec<VertexIndex> = seeds.to_vec();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut inside[v], true) {
                stack.extend_from_slice(&self.out_ranges[v]);
            }
        }
        loop {
            let grew: Vec<VertexIndex> = (0..n)
                .filter(|&v| {
                    !inside[v] && !self.is_sink(v) && self.out_ranges[v].iter().all(|&r| inside[r])
                })
                .collect();
            if grew.is_empty() {
                break;
            }
            for v in grew {
                inside[v] = true;
            }
        }
        VertexSet::new((0..n).filter(|&v| inside[v]).collect())
    }

    /// Every hereditary saturated subset, found by exhaustive search over
    /// subsets. Ordered by size, then by the vertex-order bitmask.
    pub fn hereditary_saturated_subsets(&self) -> Result<Vec<VertexSet>, GraphError> {
        let n = self.vertex_count();
        if n > HEREDITARY_SEARCH_CAP {
            return Err(GraphError::TooManyVertices {
                count: n,
                cap: HEREDITARY_SEARCH_CAP,
            });
        }
        // bitmask form of the edges and out-neighbourhoods
        let out_mask: Vec<u64> = (0..n)
            .map(|v| self.out_ranges[v].iter().fold(0u64, |m, &r| m | 1 << r))
            .collect();
        let mut found: Vec<u64> = (0u64..1 << n)
            .filter(|&mask| {
                (0..n).all(|v| {
                    let inside = mask >> v & 1 == 1;
                    let closed_under_out = out_mask[v] & !mask == 0;
                    if inside {
                        closed_under_out
                    } else {
                        self.is_sink(v) || !closed_under_out
                    }
                })
            })
            .collect();
        found.sort_by_key(|m| (m.count_ones(), *m));
        Ok(found
            .into_iter()
            .map(|m| VertexSet::from_mask(m, n))
            .collect())
    }

    /// Vertices reachable from `start` by paths of length ≥ 0.
    pub fn reachable_from(&self, start: VertexIndex) -> VertexSet {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &r in &self.out_ranges[v] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        VertexSet::new((0..seen.len()).filter(|&v| seen[v]).collect())
    }

    /// `v` lies on some cycle (a loop counts).
    pub fn on_cycle(&self, v: VertexIndex) -> bool {
        self.out_ranges[v]
            .iter()
            .any(|&r| r == v || self.reachable_from(r).contains(v))
    }

    /// All simple cycles at the edge level: parallel edges give distinct
    /// cycles. Each cycle is reported once, starting at its smallest vertex.
    pub fn cycles(&self) -> Vec<Cycle> {
        let mut out = Vec::new();
        let edges_from: Vec<Vec<usize>> = {
            let mut m = vec![Vec::new(); self.vertex_count()];
            for (id, e) in self.edges.iter().enumerate() {
                m[e.source].push(id);
            }
            m
        };
        for start in 0..self.vertex_count() {
            let mut on_path = vec![false; self.vertex_count()];
            let mut path = Vec::new();
            self.cycle_dfs(start, start, &edges_from, &mut on_path, &mut path, &mut out);
        }
        out
    }

    fn cycle_dfs(
        &self,
        start: VertexIndex,
        at: VertexIndex,
        edges_from: &[Vec<usize>],
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        out: &mut Vec<Cycle>,
    ) {
        on_path[at] = true;
        for &id in &edges_from[at] {
            let r = self.edges[id].range;
            path.push(id);
            if r == start {
                out.push(Cycle {
                    edges: path.clone(),
                });
            } else if r > start && !on_path[r] {
                self.cycle_dfs(start, r, edges_from, on_path, path, out);
            }
            path.pop();
        }
        on_path[at] = false;
    }

    /// An exit is an edge leaving a cycle vertex other than the cycle's own
    /// edge at that vertex.
    pub fn cycle_has_exit(&self, cycle: &Cycle) -> bool {
        cycle.edges.iter().any(|&id| {
            let s = self.edges[id].source;
            self.edges
                .iter()
                .enumerate()
                .any(|(other, e)| other != id && e.source == s)
        })
    }

    /// Some cycle has no exit. Decided without enumerating cycles: such a
    /// cycle runs through vertices of out-degree one only.
    pub fn has_exitless_cycle(&self) -> bool {
        self.exitless_cycle().is_some()
    }

    /// Vertices of a cycle without exit, in traversal order from its
    /// smallest vertex.
    pub fn exitless_cycle(&self) -> Option<Vec<VertexIndex>> {
        (0..self.vertex_count()).find_map(|start| {
            let mut path = vec![start];
            let mut v = start;
            for _ in 0..self.vertex_count() {
                if self.out_degree(v) != 1 {
                    return None;
                }
                v = self.out_ranges[v][0];
                if v == start {
                    return Some(path);
                }
                path.push(v);
            }
            None
        })
    }

    pub fn has_cycle(&self) -> bool {
        (0..self.vertex_count()).any(|v| self.on_cycle(v))
    }

    /// Every vertex reaches some vertex lying on a cycle.
    pub fn every_vertex_connects_to_cycle(&self) -> bool {
        let cyclic: HashSet<VertexIndex> = (0..self.vertex_count())
            .filter(|&v| self.on_cycle(v))
            .collect();
        (0..self.vertex_count()).all(|v| {
            self.reachable_from(v)
                .members()
                .iter()
                .any(|r| cyclic.contains(r))
        })
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex34_2() -> Graph {
        Graph::new(
            &["v", "z"],
            &[("v", "v"), ("v", "z"), ("z", "z"), ("z", "z")],
        )
        .unwrap()
    }

    fn names(g: &Graph, sets: &[VertexSet]) -> Vec<Vec<String>> {
        sets.iter()
            .map(|s| s.names(g).into_iter().map(String::from).collect())
            .collect()
    }

    #[test]
    fn build_rejects_dangling_and_duplicates() {
        assert!(matches!(
            Graph::new(&["u"], &[("u", "v")]),
            Err(GraphError::DanglingEdge { .. })
        ));
        assert!(matches!(
            Graph::new(&["u", "u"], &[] as &[(&str, &str)]),
            Err(GraphError::DuplicateVertex(_))
        ));
        let g = Graph::new(&["u"], &[("u", "u"), ("u", "u")]).unwrap();
        assert_eq!(g, Graph::rose(2));
        assert_eq!(g.adjacency(), vec![vec![2]]);
    }

    #[test]
    fn rose_and_matrix_shapes() {
        for n in 0..5 {
            let g = Graph::rose(n);
            assert_eq!((g.vertex_count(), g.edge_count()), (1, n));
        }
        let g = Graph::matrix_graph(3, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 5));
        assert_eq!(g.out_ranges(0), &[1, 1]);
        assert!(matches!(
            Graph::matrix_graph(1, 2),
            Err(GraphError::InvalidParameter(_))
        ));
        assert!(Graph::matrix_graph(2, 1).is_err());
    }

    #[test]
    fn splice_of_e2() {
        let g = Graph::rose(2).cuntz_splice("u").unwrap();
        let expected = Graph::new(
            &["u", "v", "w"],
            &[
                ("u", "u"),
                ("u", "u"),
                ("u", "v"),
                ("v", "u"),
                ("v", "v"),
                ("v", "w"),
                ("w", "v"),
                ("w", "w"),
            ],
        )
        .unwrap();
        assert!(g.same_labeled_graph(&expected));
    }

    #[test]
    fn splice_avoids_name_collisions() {
        let g = Graph::new(&["u", "v"], &[("u", "v"), ("v", "u")]).unwrap();
        let s = g.cuntz_splice("u").unwrap();
        assert_eq!(s.names(), &["u", "v", "u_s1", "u_s2"]);
        assert_eq!(s.edge_count(), 8);
        let s1 = Graph::rose(1).cuntz_splice("u").unwrap();
        assert_eq!((s1.vertex_count(), s1.edge_count()), (3, 7));
        assert!(matches!(
            Graph::rose(0).cuntz_splice("u"),
            Err(GraphError::VertexNotOnCycle(_))
        ));
        assert!(matches!(
            Graph::rose(1).cuntz_splice("x"),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn sinks_partition() {
        assert!(Graph::rose(2).sinks().is_empty());
        assert_eq!(Graph::rose(0).sinks().members(), &[0]);
        assert!(ex34_2().sinks().is_empty());
        let g = Graph::new(&["w", "u"], &[("w", "u")]).unwrap();
        assert_eq!(g.sinks().members(), &[1]);
        assert_eq!(g.regular_vertices().members(), &[0]);
    }

    #[test]
    fn hereditary_saturated_examples() {
        let e2 = Graph::rose(2);
        assert_eq!(
            names(&e2, &e2.hereditary_saturated_subsets().unwrap()),
            vec![vec![], vec!["u".to_string()]]
        );
        let g = ex34_2();
        assert_eq!(
            names(&g, &g.hereditary_saturated_subsets().unwrap()),
            vec![
                vec![],
                vec!["z".to_string()],
                vec!["v".to_string(), "z".to_string()]
            ]
        );
        let e2m = Graph::rose(2).cuntz_splice("u").unwrap();
        assert_eq!(e2m.hereditary_saturated_subsets().unwrap().len(), 2);
        // {u} is hereditary but w emits only into it, so saturation adds w
        let g = Graph::new(&["w", "u"], &[("w", "u")]).unwrap();
        assert_eq!(g.hereditary_saturated_subsets().unwrap().len(), 2);
        let g = Graph::new(&["w", "u"], &[("w", "u"), ("w", "w")]).unwrap();
        assert_eq!(
            names(&g, &g.hereditary_saturated_subsets().unwrap()),
            vec![
                vec![],
                vec!["u".to_string()],
                vec!["w".to_string(), "u".to_string()]
            ]
        );
    }

    #[test]
    fn hereditary_search_is_capped() {
        let names: Vec<String> = (0..21).map(|i| format!("x{i}")).collect();
        let g = Graph::new(&names, &[] as &[(String, String)]).unwrap();
        assert!(matches!(
            g.hereditary_saturated_subsets(),
            Err(GraphError::TooManyVertices { count: 21, .. })
        ));
    }

    #[test]
    fn cycles_and_exits() {
        let e2 = Graph::rose(2);
        let cycles = e2.cycles();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| e2.cycle_has_exit(c)));

        let r1 = Graph::rose(1);
        assert_eq!(r1.cycles().len(), 1);
        assert!(!r1.cycle_has_exit(&r1.cycles()[0]));
        assert!(r1.has_exitless_cycle());

        let g = ex34_2();
        let at_v: Vec<_> = g
            .cycles()
            .into_iter()
            .filter(|c| c.vertices(&g) == vec![0])
            .collect();
        assert_eq!(at_v.len(), 1);
        assert!(g.cycle_has_exit(&at_v[0]));
        assert!(g.every_vertex_connects_to_cycle());
        assert!(!Graph::rose(0).every_vertex_connects_to_cycle());
    }

    #[test]
    fn exitless_shortcut_matches_enumeration() {
        let graphs = [
            Graph::rose(1),
            Graph::rose(3),
            ex34_2(),
            Graph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap(),
            Graph::new(
                &["a", "b", "c"],
                &[("a", "b"), ("b", "a"), ("b", "c"), ("c", "c")],
            )
            .unwrap(),
            Graph::rose(2).cuntz_splice("u").unwrap(),
        ];
        for g in &graphs {
            let by_enumeration = g.cycles().iter().any(|c| !g.cycle_has_exit(c));
            assert_eq!(g.has_exitless_cycle(), by_enumeration, "{g}");
        }
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::matrix_graph(3, 2).unwrap();
        assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
        assert!(matches!(
            Graph::from_json(r#"{"vertices": ["u"], "edges": [["u"]]}"#),
            Err(GraphError::Parse(_))
        ));
    }
}
