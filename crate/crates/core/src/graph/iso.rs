use super::multigraph::{Multigraph, TwoTerminal};

/// Brute-force isomorphism test for small multigraphs (backtracking over
/// degree-compatible vertex maps). `fixed` pins vertex pairs in advance.
pub fn isomorphic_with(a: &Multigraph, b: &Multigraph, fixed: &[(usize, usize)]) -> bool {
    if a.n != b.n || a.edges.len() != b.edges.len() {
        return false;
    }
    let (ma, mb) = (a.adjacency(), b.adjacency());
    let da: Vec<usize> = (0..a.n).map(|v| a.degree(v)).collect();
    let db: Vec<usize> = (0..b.n).map(|v| b.degree(v)).collect();
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let mut map = vec![usize::MAX; a.n];
    let mut used = vec![false; b.n];
    for &(x, y) in fixed {
        if da[x] != db[y] || used[y] {
            return false;
        }
        map[x] = y;
        used[y] = true;
    }
    fn consistent(ma: &[Vec<usize>], mb: &[Vec<usize>], map: &[usize], v: usize) -> bool {
        (0..ma.len()).all(|u| map[u] == usize::MAX || ma[v][u] == mb[map[v]][map[u]])
    }
    if !(0..a.n).all(|v| map[v] == usize::MAX || consistent(&ma, &mb, &map, v)) {
        return false;
    }
    // visit vertices breadth-first from the pinned ones so that every new
    // vertex is constrained by an already mapped neighbour
    let mut order: Vec<usize> = Vec::with_capacity(a.n);
    let mut seen = vec![false; a.n];
    let mut starts: Vec<usize> = fixed.iter().map(|&(x, _)| x).collect();
    starts.extend(0..a.n);
    for st in starts {
        if seen[st] {
            continue;
        }
        seen[st] = true;
        let mut queue = std::collections::VecDeque::from([st]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for u in 0..a.n {
                if !seen[u] && ma[v][u] > 0 {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        order: &[usize],
        ma: &[Vec<usize>],
        mb: &[Vec<usize>],
        da: &[usize],
        db: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        if map[v] != usize::MAX {
            return go(k + 1, order, ma, mb, da, db, map, used);
        }
        for w in 0..mb.len() {
            if used[w] || da[v] != db[w] {
                continue;
            }
            map[v] = w;
            if consistent(ma, mb, map, v) {
                used[w] = true;
                if go(k + 1, order, ma, mb, da, db, map, used) {
                    return true;
                }
                used[w] = false;
            }
            map[v] = usize::MAX;
        }
        false
    }
    go(0, &order, &ma, &mb, &da, &db, &mut map, &mut used)
}

pub fn isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    isomorphic_with(a, b, &[])
}

/// Isomorphism mapping source to source and sink to sink.
pub fn isomorphic_two_terminal(a: &TwoTerminal, b: &TwoTerminal) -> bool {
    isomorphic_with(&a.graph, &b.graph, &[(a.s, b.s), (a.t, b.t)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_paths() {
        let c6 = Multigraph { n: 6, edges: (0..6).map(|i| (i, (i + 1) % 6)).collect() };
        let c6b = Multigraph { n: 6, edges: vec![(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)] };
        assert!(isomorphic(&c6, &c6b));
        let two_triangles = Multigraph { n: 6, edges: vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] };
        assert!(!isomorphic(&c6, &two_triangles));
        let p = TwoTerminal::path(3);
        assert!(isomorphic_two_terminal(&p, &p.transpose()));
        let lop = TwoTerminal::new(Multigraph { n: 3, edges: vec![(0, 1), (1, 2), (1, 1)] }, 0, 1).unwrap();
        assert!(!isomorphic_two_terminal(&lop, &TwoTerminal::new(lop.graph.clone(), 0, 2).unwrap()));
    }
}
