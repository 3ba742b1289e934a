use crate::graph::TwoTerminal;
use crate::numeric::{RatPoly, Ring};

use super::brute::SUBSET_CAP;
use super::delcon::{eval_weighted, DelCon};
use super::{RelPolyPair, ReliabilityError};

/// Symbolic `(R, S)` with the same cap as subset enumeration.
pub fn symbolic(g: &TwoTerminal) -> Result<RelPolyPair, ReliabilityError> {
    if g.edge_count() > SUBSET_CAP {
        return Err(ReliabilityError::CapExceeded { edges: g.edge_count(), cap: SUBSET_CAP });
    }
    Ok(symbolic_uncapped(g))
}

/// Symbolic `(R, S)` by weighted deletion–contraction over `ℚ[p]`, with
/// `S = R(Ĝ) − R(G)`. No edge cap; cost depends on the graph's structure.
pub fn symbolic_uncapped(g: &TwoTerminal) -> RelPolyPair {
    let p = RatPoly::x();
    let w = RatPoly::ident().sub(&p);
    let mut engine = DelCon::default();
    let r = eval_weighted(&g.graph, &p, &w, &mut engine);
    let merged = eval_weighted(&g.merge_terminals(), &p, &w, &mut engine);
    let s = merged.sub(&r);
    RelPolyPair { r, s }
}
