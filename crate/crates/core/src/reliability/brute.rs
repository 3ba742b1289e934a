use crate::graph::TwoTerminal;
use crate::numeric::Ring;

use super::{RelPair, ReliabilityError};

/// Largest edge count accepted by subset enumeration.
pub const SUBSET_CAP: usize = 24;

/// Number of working-edge subsets of each size that leave the graph
/// connected (`r[k]`) or split into exactly the two terminal components
/// (`s[k]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCounts {
    pub r: Vec<u64>,
    pub s: Vec<u64>,
}

struct Dsu {
    p: Vec<u32>,
}

impl Dsu {
    fn reset(&mut self, n: usize) {
        self.p.clear();
        self.p.extend(0..n as u32);
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.p[x as usize] != x {
            let up = self.p[self.p[x as usize] as usize];
            self.p[x as usize] = up;
            x = up;
        }
        x
    }
    /// Returns true when two classes were merged.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.p[ra as usize] = rb;
        true
    }
}

/// What a subset of working edges does to the graph.
enum Outcome {
    Connected,
    Split,
    Other,
}

fn classify(g: &TwoTerminal, mask: u32, dsu: &mut Dsu) -> Outcome {
    let n = g.graph.n;
    dsu.reset(n);
    let mut comps = n;
    for (k, &(u, v)) in g.graph.edges.iter().enumerate() {
        if mask >> k & 1 == 1 && dsu.union(u as u32, v as u32) {
            comps -= 1;
        }
    }
    match comps {
        1 => Outcome::Connected,
        2 if dsu.find(g.s as u32) != dsu.find(g.t as u32) => Outcome::Split,
        _ => Outcome::Other,
    }
}

fn check_cap(m: usize) -> Result<(), ReliabilityError> {
    if m > SUBSET_CAP {
        return Err(ReliabilityError::CapExceeded { edges: m, cap: SUBSET_CAP });
    }
    Ok(())
}

pub fn subset_counts(g: &TwoTerminal) -> Result<SubsetCounts, ReliabilityError> {
    let m = g.edge_count();
    check_cap(m)?;
    let mut r = vec![0u64; m + 1];
    let mut s = vec![0u64; m + 1];
    let mut dsu = Dsu { p: Vec::new() };
    for mask in 0u32..(1u32 << m) {
        let k = mask.count_ones() as usize;
        match classify(g, mask, &mut dsu) {
            Outcome::Connected => r[k] += 1,
            Outcome::Split => s[k] += 1,
            Outcome::Other => {}
        }
    }
    Ok(SubsetCounts { r, s })
}

/// `Σ c_k (1−p)^k p^{m−k}` for a count vector.
pub fn eval_counts<T: Ring>(c: &[u64], p: &T) -> T {
    let m = c.len() - 1;
    let w = T::ident().sub(p);
    let mut acc = T::nil();
    for (k, &ck) in c.iter().enumerate() {
        if ck != 0 {
            let term = w.pow_n(k as u64).mul(&p.pow_n((m - k) as u64));
            acc = acc.add(&term.mul(&T::from_i64(ck as i64)));
        }
    }
    acc
}

/// Exact `(R, S)` by summing over all `2^|E|` edge subsets.
pub fn brute_force<T: Ring>(g: &TwoTerminal, p: &T) -> Result<RelPair<T>, ReliabilityError> {
    let c = subset_counts(g)?;
    Ok(RelPair { r: eval_counts(&c.r, p), s: eval_counts(&c.s, p) })
}

/// Multivariate `(R(G;𝐩), S(G;𝐩))` with one failure parameter per edge.
pub fn brute_force_multivariate<T: Ring>(g: &TwoTerminal, ps: &[T]) -> Result<RelPair<T>, ReliabilityError> {
    let m = g.edge_count();
    if ps.len() != m {
        return Err(ReliabilityError::ParameterCount { expected: m, got: ps.len() });
    }
    check_cap(m)?;
    let ws: Vec<T> = ps.iter().map(|p| T::ident().sub(p)).collect();
    let mut r = T::nil();
    let mut s = T::nil();
    let mut dsu = Dsu { p: Vec::new() };
    for mask in 0u32..(1u32 << m) {
        let target = match classify(g, mask, &mut dsu) {
            Outcome::Connected => &mut r,
            Outcome::Split => &mut s,
            Outcome::Other => continue,
        };
        let mut w = T::ident();
        for k in 0..m {
            w = w.mul(if mask >> k & 1 == 1 { &ws[k] } else { &ps[k] });
        }
        *target = target.add(&w);
    }
    Ok(RelPair { r, s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_sp;
    use crate::numeric::GaussianRational;

    #[test]
    fn small_cases() {
        let c = subset_counts(&TwoTerminal::k2()).unwrap();
        assert_eq!((c.r, c.s), (vec![0, 1], vec![1, 0]));
        let tri = parse_sp("(e*e)|e").unwrap().realize(&TwoTerminal::k2());
        let half = GaussianRational::from_frac(1, 2, 0, 1);
        assert_eq!(brute_force(&tri, &half).unwrap().r, half);
        let c = subset_counts(&TwoTerminal::path(2)).unwrap();
        // R = (1−p)², S = 2p(1−p)
        assert_eq!((c.r, c.s), (vec![0, 0, 1], vec![0, 2, 0]));
    }

    #[test]
    fn cap_enforced() {
        let big = TwoTerminal::bundle(25);
        assert!(matches!(subset_counts(&big), Err(ReliabilityError::CapExceeded { .. })));
    }
}
