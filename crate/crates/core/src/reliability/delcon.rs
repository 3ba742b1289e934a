use std::collections::{BTreeMap, HashMap};
use std::hash::{DefaultHasher, Hash, Hasher};

use num_bigint::BigInt;

use super::RelPair;
use crate::graph::{Multigraph, TwoTerminal};
use crate::numeric::{GaussInt, GaussianRational, Ring};

/// An edge with weights `(fail, work)`: `R(G) = fail·R(G∖e) + work·R(G/e)`.
/// The plain reliability polynomial uses `(p, 1−p)` on every edge.
pub type WEdge<T> = (usize, usize, T, T);

/// Counters describing one engine's work.
#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub calls: u64,
    pub branches: u64,
    pub memo_hits: u64,
    pub block_splits: u64,
}

/// Deletion–contraction with series, parallel, pendant, loop and block
/// reductions, memoised on a canonical form of the reduced weighted graph.
/// One engine per task; it is not shared between threads.
pub struct DelCon<T> {
    memo: HashMap<(usize, Vec<WEdge<T>>), T>,
    cap: usize,
    pub stats: Stats,
}

impl<T: Ring + Hash + Eq> Default for DelCon<T> {
    fn default() -> Self {
        Self::new(200_000)
    }
}

struct Work<T> {
    adj: Vec<BTreeMap<usize, (T, T)>>,
    alive: Vec<bool>,
    n_alive: usize,
    factor: T,
    queue: Vec<usize>,
}

fn parallel<T: Ring>(a: &(T, T), b: &(T, T)) -> (T, T) {
    let fail = a.0.mul(&b.0);
    let tot = a.0.add(&a.1).mul(&b.0.add(&b.1));
    let work = tot.sub(&fail);
    (fail, work)
}

fn series<T: Ring>(a: &(T, T), b: &(T, T)) -> (T, T) {
    (a.0.mul(&b.1).add(&a.1.mul(&b.0)), a.1.mul(&b.1))
}

impl<T: Ring> Work<T> {
    fn build(n: usize, edges: Vec<WEdge<T>>) -> Self {
        let mut w = Work {
            adj: (0..n).map(|_| BTreeMap::new()).collect(),
            alive: vec![true; n],
            n_alive: n,
            factor: T::ident(),
            queue: (0..n).collect(),
        };
        for (u, v, a, b) in edges {
            w.insert(u, v, (a, b));
        }
        w
    }

    fn insert(&mut self, u: usize, v: usize, e: (T, T)) {
        if u == v {
            self.factor = self.factor.mul(&e.0.add(&e.1));
            return;
        }
        let merged = match self.adj[u].get(&v) {
            Some(old) => {
                self.queue.push(u);
                self.queue.push(v);
                parallel(old, &e)
            }
            None => e,
        };
        self.adj[u].insert(v, merged.clone());
        self.adj[v].insert(u, merged);
    }

    fn remove_vertex(&mut self, v: usize) -> Vec<(usize, (T, T))> {
        let nb: Vec<(usize, (T, T))> = std::mem::take(&mut self.adj[v]).into_iter().collect();
        for (u, _) in &nb {
            self.adj[*u].remove(&v);
            self.queue.push(*u);
        }
        self.alive[v] = false;
        self.n_alive -= 1;
        nb
    }

    /// Applies degree ≤ 2 reductions until none applies. Returns false if
    /// the graph is certainly disconnected.
    fn reduce(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            if !self.alive[v] || self.n_alive == 1 {
                continue;
            }
            if self.factor.is_nil() {
                return false;
            }
            match self.adj[v].len() {
                0 => return false,
                1 => {
                    let nb = self.remove_vertex(v);
                    self.factor = self.factor.mul(&nb[0].1 .1);
                }
                2 => {
                    let nb = self.remove_vertex(v);
                    let e = series(&nb[0].1, &nb[1].1);
                    self.insert(nb[0].0, nb[1].0, e);
                }
                _ => {}
            }
        }
        !self.factor.is_nil()
    }

    /// Remaining graph relabelled to `0..n_alive`.
    fn compact(&self) -> (usize, Vec<WEdge<T>>) {
        let mut label = vec![usize::MAX; self.adj.len()];
        let mut k = 0;
        for v in 0..self.adj.len() {
            if self.alive[v] {
                label[v] = k;
                k += 1;
            }
        }
        let mut edges = Vec::new();
        for v in 0..self.adj.len() {
            if !self.alive[v] {
                continue;
            }
            for (&u, e) in &self.adj[v] {
                if v < u {
                    edges.push((label[v], label[u], e.0.clone(), e.1.clone()));
                }
            }
        }
        (k, edges)
    }
}

fn weight_hash<T: Hash>(a: &T, b: &T) -> u64 {
    let mut h = DefaultHasher::new();
    a.hash(&mut h);
    b.hash(&mut h);
    h.finish()
}

fn mix(xs: &[u64]) -> u64 {
    let mut h = DefaultHasher::new();
    xs.hash(&mut h);
    h.finish()
}

/// Canonical-ish relabelling: colour refinement on weighted degrees, then
/// exhaustive search over orderings of tied classes when there are few.
/// Any labelling is a sound memo key; canonicity only improves hit rates.
fn canonical<T: Ring + Hash>(n: usize, edges: &[WEdge<T>]) -> Vec<WEdge<T>> {
    let wh: Vec<u64> = edges.iter().map(|e| weight_hash(&e.2, &e.3)).collect();
    let mut inc: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        inc[e.0].push((e.1, wh[k]));
        inc[e.1].push((e.0, wh[k]));
    }
    let mut color: Vec<u64> = vec![0; n];
    let mut classes = 1;
    for _ in 0..n {
        let next: Vec<u64> = (0..n)
            .map(|v| {
                let mut sig: Vec<u64> = inc[v].iter().map(|&(u, w)| mix(&[color[u], w])).collect();
                sig.sort_unstable();
                sig.push(color[v]);
                mix(&sig)
            })
            .collect();
        let mut distinct = next.clone();
        distinct.sort_unstable();
        distinct.dedup();
        color = next;
        if distinct.len() == classes {
            break;
        }
        classes = distinct.len();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (color[v], v));
    // groups of tied vertices
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && color[order[j]] == color[order[i]] {
            j += 1;
        }
        groups.push((i, j));
        i = j;
    }
    let mut budget: u64 = 1;
    for &(a, b) in &groups {
        for k in 1..=(b - a) as u64 {
            budget = budget.saturating_mul(k);
        }
    }
    let encode = |ord: &[usize]| -> Vec<(usize, usize, u64)> {
        let mut pos = vec![0; n];
        for (k, &v) in ord.iter().enumerate() {
            pos[v] = k;
        }
        let mut enc: Vec<(usize, usize, u64)> = edges
            .iter()
            .zip(&wh)
            .map(|(e, &w)| {
                let (x, y) = (pos[e.0], pos[e.1]);
                (x.min(y), x.max(y), w)
            })
            .collect();
        enc.sort_unstable();
        enc
    };
    let best = if budget > 1 && budget <= 120 {
        let mut best_ord = order.clone();
        let mut best_enc = encode(&order);
        let mut cur = order.clone();
        permute_groups(&groups, 0, &mut cur, &mut |ord| {
            let enc = encode(ord);
            if enc < best_enc {
                best_enc = enc;
                best_ord = ord.to_vec();
            }
        });
        best_ord
    } else {
        order
    };
    let mut pos = vec![0; n];
    for (k, &v) in best.iter().enumerate() {
        pos[v] = k;
    }
    let mut out: Vec<WEdge<T>> = edges
        .iter()
        .map(|e| {
            let (x, y) = (pos[e.0], pos[e.1]);
            (x.min(y), x.max(y), e.2.clone(), e.3.clone())
        })
        .collect();
    out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    out
}

fn permute_groups(groups: &[(usize, usize)], g: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if g == groups.len() {
        f(cur);
        return;
    }
    let (a, b) = groups[g];
    heap_permute(cur, a, b, b - a, &mut |c| permute_groups(groups, g + 1, c, f));
}

fn heap_permute(cur: &mut Vec<usize>, a: usize, b: usize, k: usize, f: &mut impl FnMut(&mut Vec<usize>)) {
    if k <= 1 {
        f(cur);
        return;
    }
    for i in 0..k {
        heap_permute(cur, a, b, k - 1, f);
        let j = if k % 2 == 0 { a + i } else { a };
        if i + 1 < k {
            cur.swap(j, a + k - 1);
        }
    }
}

/// Edge sets of the biconnected components (Tarjan).
fn blocks<T>(n: usize, edges: &[WEdge<T>]) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        adj[e.0].push((e.1, k));
        adj[e.1].push((e.0, k));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut estack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    // iterative DFS: (vertex, parent edge, next neighbour index)
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            if *idx < adj[v].len() {
                let (u, k) = adj[v][*idx];
                *idx += 1;
                if k == pe {
                    continue;
                }
                if disc[u] == usize::MAX {
                    estack.push(k);
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    stack.push((u, k, 0));
                } else if disc[u] < disc[v] {
                    estack.push(k);
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&(w, _, _)) = stack.last() {
                    low[w] = low[w].min(low[v]);
                    if low[v] >= disc[w] {
                        let mut comp = Vec::new();
                        while let Some(k) = estack.pop() {
                            comp.push(k);
                            if k == pe {
                                break;
                            }
                        }
                        out.push(comp);
                    }
                }
            }
        }
    }
    out
}

fn connected<T>(n: usize, edges: &[WEdge<T>]) -> bool {
    let g = Multigraph { n, edges: edges.iter().map(|e| (e.0, e.1)).collect() };
    g.is_connected()
}

impl<T: Ring + Hash + Eq> DelCon<T> {
    pub fn new(cap: usize) -> Self {
        DelCon { memo: HashMap::new(), cap, stats: Stats::default() }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Weighted reliability of a graph given as a vertex count and edges.
    pub fn reliability(&mut self, n: usize, edges: Vec<WEdge<T>>) -> T {
        self.stats.calls += 1;
        if n == 0 {
            return T::ident();
        }
        let mut w = Work::build(n, edges);
        if !w.reduce() {
            return T::nil();
        }
        if w.n_alive == 1 {
            return w.factor;
        }
        let factor = w.factor.clone();
        let (n, edges) = w.compact();
        if !connected(n, &edges) {
            return T::nil();
        }
        let bl = blocks(n, &edges);
        if bl.len() > 1 {
            self.stats.block_splits += 1;
            let mut acc = factor;
            for comp in bl {
                let mut label: HashMap<usize, usize> = HashMap::new();
                let mut sub = Vec::with_capacity(comp.len());
                for k in comp {
                    let e = &edges[k];
                    let nl = label.len();
                    let a = *label.entry(e.0).or_insert(nl);
                    let nl = label.len();
                    let b = *label.entry(e.1).or_insert(nl);
                    sub.push((a, b, e.2.clone(), e.3.clone()));
                }
                let v = self.reliability(label.len(), sub);
                if v.is_nil() {
                    return v;
                }
                acc = acc.mul(&v);
            }
            return acc;
        }
        let key = (n, canonical(n, &edges));
        if let Some(v) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return factor.mul(v);
        }
        self.stats.branches += 1;
        let edges = key.1.clone();
        let mut deg = vec![0usize; n];
        for e in &edges {
            deg[e.0] += 1;
            deg[e.1] += 1;
        }
        let pick = (0..edges.len())
            .min_by_key(|&k| {
                let e = &edges[k];
                let (lo, hi) = (deg[e.0].min(deg[e.1]), deg[e.0].max(deg[e.1]));
                (lo, usize::MAX - hi, k)
            })
            .expect("branching on an edgeless graph");
        let (u, v, fail, work) = edges[pick].clone();
        let mut del = edges.clone();
        del.remove(pick);
        let keep = u.min(v);
        let gone = u.max(v);
        let relabel = |x: usize| {
            if x == gone {
                keep
            } else if x > gone {
                x - 1
            } else {
                x
            }
        };
        let con: Vec<WEdge<T>> = del.iter().map(|e| (relabel(e.0), relabel(e.1), e.2.clone(), e.3.clone())).collect();
        let rd = self.reliability(n, del);
        let rc = self.reliability(n - 1, con);
        let val = fail.mul(&rd).add(&work.mul(&rc));
        if self.memo.len() < self.cap {
            self.memo.insert(key, val.clone());
        }
        factor.mul(&val)
    }
}

/// `R(G)` with the same `(fail, work)` weights on every edge.
pub fn eval_weighted<T: Ring + Hash + Eq>(g: &Multigraph, fail: &T, work: &T, engine: &mut DelCon<T>) -> T {
    let edges = g.edges.iter().map(|&(u, v)| (u, v, fail.clone(), work.clone())).collect();
    engine.reliability(g.n, edges)
}

/// `R(G;p)` at a ring element `p`.
pub fn eval_delcon_in<T: Ring + Hash + Eq>(g: &Multigraph, p: &T) -> T {
    let w = T::ident().sub(p);
    eval_weighted(g, p, &w, &mut DelCon::default())
}

/// Homogeneous evaluation at `p = P/q`: returns `R̃ ∈ ℤ[i]` with
/// `R(G;p) = R̃ / q^{|E|}`.
pub fn eval_homogeneous(g: &Multigraph, num: &GaussInt, den: &BigInt, engine: &mut DelCon<GaussInt>) -> GaussInt {
    let q = GaussInt::new(den.clone(), BigInt::from(0));
    let work = q.sub(num);
    eval_weighted(g, num, &work, engine)
}

/// Exact `R(G;p)` for a Gaussian rational `p`.
pub fn eval_delcon(g: &Multigraph, p: &GaussianRational) -> GaussianRational {
    let (num, den) = p.to_homogeneous();
    let r = eval_homogeneous(g, &num, &den, &mut DelCon::default());
    GaussianRational::from_homogeneous(&r, &num_traits::pow(den, g.edges.len()))
}

/// Exact `(R, S)` of a two-terminal graph by deletion–contraction, with
/// `S = R(Ĝ) − R(G)`.
pub fn eval_pair_delcon(g: &TwoTerminal, p: &GaussianRational) -> RelPair<GaussianRational> {
    let (num, den) = p.to_homogeneous();
    let mut engine = DelCon::default();
    let r = eval_homogeneous(&g.graph, &num, &den, &mut engine);
    let merged = g.merge_terminals();
    let total = eval_homogeneous(&merged, &num, &den, &mut engine);
    let q = num_traits::pow(den, g.edge_count());
    let r = GaussianRational::from_homogeneous(&r, &q);
    let total = GaussianRational::from_homogeneous(&total, &q);
    RelPair { s: total.sub(&r), r }
}
