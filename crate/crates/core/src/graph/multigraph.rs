use serde::{Deserialize, Serialize};

use super::GraphError;

/// Undirected multigraph on vertices `0..n`. Parallel edges are repeated
/// entries; a loop is an entry `(v, v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for (k, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { edge: k, n });
            }
        }
        Ok(Multigraph { n, edges })
    }

    pub fn edgeless(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// `G ∖ e`
    pub fn delete_edge(&self, e: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Multigraph { n: self.n, edges }
    }

    /// `G / e`: the endpoints are merged, `e` disappears and every other
    /// edge between them becomes a loop. Contracting a loop deletes it.
    pub fn contract_edge(&self, e: usize) -> Self {
        let (u, v) = self.edges[e];
        self.delete_edge(e).merge_vertices(u, v)
    }

    /// Identifies `u` and `v`; the higher-numbered one is removed and the
    /// vertices above it shift down by one.
    pub fn merge_vertices(&self, u: usize, v: usize) -> Self {
        if u == v {
            return self.clone();
        }
        let (keep, gone) = (u.min(v), u.max(v));
        let map = |x: usize| {
            if x == gone {
                keep
            } else if x > gone {
                x - 1
            } else {
                x
            }
        };
        Multigraph { n: self.n - 1, edges: self.edges.iter().map(|&(a, b)| (map(a), map(b))).collect() }
    }

    /// Connected component label of every vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..self.n).map(|x| find(&mut parent, x)).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let c = self.components();
        c.iter().all(|&x| x == c[0])
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Multigraph) -> Self {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + self.n, b + self.n)));
        Multigraph { n: self.n + other.n, edges }
    }

    /// Multiplicity matrix, loops on the diagonal.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut a = vec![vec![0; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] += 1;
            if u != v {
                a[v][u] += 1;
            }
        }
        a
    }

    /// Edges with endpoints ordered and the list sorted.
    pub fn normalized(&self) -> Self {
        let mut edges: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        Multigraph { n: self.n, edges }
    }
}

/// A graph with distinct source and sink.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoTerminal {
    pub graph: Multigraph,
    pub s: usize,
    pub t: usize,
}

impl TwoTerminal {
    pub fn new(graph: Multigraph, s: usize, t: usize) -> Result<Self, GraphError> {
        if s == t {
            return Err(GraphError::EqualTerminals);
        }
        if s >= graph.n || t >= graph.n {
            return Err(GraphError::TerminalOutOfRange);
        }
        Ok(TwoTerminal { graph, s, t })
    }

    /// A single edge `s – t`.
    pub fn k2() -> Self {
        TwoTerminal { graph: Multigraph { n: 2, edges: vec![(0, 1)] }, s: 0, t: 1 }
    }

    /// Path with `k` edges from `s = 0` to `t = k`.
    pub fn path(k: usize) -> Self {
        assert!(k >= 1);
        TwoTerminal { graph: Multigraph { n: k + 1, edges: (0..k).map(|i| (i, i + 1)).collect() }, s: 0, t: k }
    }

    /// `k` parallel edges between the terminals.
    pub fn bundle(k: usize) -> Self {
        TwoTerminal { graph: Multigraph { n: 2, edges: vec![(0, 1); k] }, s: 0, t: 1 }
    }

    pub fn transpose(&self) -> Self {
        TwoTerminal { graph: self.graph.clone(), s: self.t, t: self.s }
    }

    /// `Ĝ`: source and sink merged.
    pub fn merge_terminals(&self) -> Multigraph {
        self.graph.merge_vertices(self.s, self.t)
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edges.len()
    }

    /// Series composition `G₁ ⋈ G₂ ⋈ ⋯`: each sink is glued to the next
    /// source.
    pub fn series(parts: &[TwoTerminal]) -> Self {
        assert!(!parts.is_empty(), "series of no parts");
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            let (g, map) = glue(&acc.graph, p, &[(p.s, acc.t)]);
            acc = TwoTerminal { graph: g, s: acc.s, t: map[p.t] };
        }
        acc
    }

    /// Parallel composition: all sources glued together, all sinks glued
    /// together.
    pub fn parallel(parts: &[TwoTerminal]) -> Self {
        assert!(!parts.is_empty(), "parallel of no parts");
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            let (g, _) = glue(&acc.graph, p, &[(p.s, acc.s), (p.t, acc.t)]);
            acc = TwoTerminal { graph: g, s: acc.s, t: acc.t };
        }
        acc
    }
}

/// Adds a copy of `part` to `host`, identifying the listed vertices of
/// `part` with host vertices. Returns the new graph and the vertex map of
/// `part`.
pub(crate) fn glue(host: &Multigraph, part: &TwoTerminal, ident: &[(usize, usize)]) -> (Multigraph, Vec<usize>) {
    let mut map = vec![usize::MAX; part.graph.n];
    for &(pv, hv) in ident {
        map[pv] = hv;
    }
    let mut n = host.n;
    for m in map.iter_mut() {
        if *m == usize::MAX {
            *m = n;
            n += 1;
        }
    }
    let mut edges = host.edges.clone();
    edges.extend(part.graph.edges.iter().map(|&(a, b)| (map[a], map[b])));
    (Multigraph { n, edges }, map)
}

/// What to splice into each edge of a host graph.
pub enum Assignment<'a> {
    One(usize, &'a TwoTerminal),
    All(&'a TwoTerminal),
    PerEdge(&'a [Option<TwoTerminal>]),
}

/// Replaces edges of `h` by gadget copies. The gadget source is glued to
/// the lower-numbered endpoint of the edge. The result keeps the vertices of
/// `h` first; remaining edges of `h` keep their relative order and come
/// before the gadget edges.
pub fn substitute(h: &Multigraph, a: Assignment<'_>) -> Result<Multigraph, GraphError> {
    let pick = |e: usize| -> Option<&TwoTerminal> {
        match &a {
            Assignment::One(k, g) => (*k == e).then_some(*g),
            Assignment::All(g) => Some(*g),
            Assignment::PerEdge(v) => v.get(e).and_then(|x| x.as_ref()),
        }
    };
    if let Assignment::PerEdge(v) = &a {
        if v.len() != h.edges.len() {
            return Err(GraphError::AssignmentLength { expected: h.edges.len(), got: v.len() });
        }
    }
    if let Assignment::One(k, _) = &a {
        if *k >= h.edges.len() {
            return Err(GraphError::EdgeOutOfRange(*k));
        }
    }
    let mut out = Multigraph { n: h.n, edges: Vec::new() };
    let mut spliced = Vec::new();
    for (e, &(u, v)) in h.edges.iter().enumerate() {
        match pick(e) {
            None => out.edges.push((u, v)),
            Some(g) => {
                if u == v {
                    return Err(GraphError::LoopSubstitution(e));
                }
                spliced.push((g, u.min(v), u.max(v)));
            }
        }
    }
    for (g, lo, hi) in spliced {
        let (ng, _) = glue(&out, g, &[(g.s, lo), (g.t, hi)]);
        out = ng;
    }
    Ok(out)
}
