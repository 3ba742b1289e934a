use crate::graph::SPExpr;
use crate::numeric::Ring;

use super::RelPair;

/// `(1−p, p)`, the pair of a single edge.
pub fn k2_pair<T: Ring>(p: &T) -> RelPair<T> {
    RelPair { r: T::ident().sub(p), s: p.clone() }
}

/// `(R, S)` of `expr` realised over a base gadget whose pair is `base`.
/// Cost is linear in the expression size.
pub fn eval_sp<T: Ring>(expr: &SPExpr, base: &RelPair<T>) -> RelPair<T> {
    match expr {
        SPExpr::Leaf | SPExpr::LeafTransposed => base.clone(),
        SPExpr::Series(cs) => {
            let mut it = cs.iter().map(|c| eval_sp(c, base));
            let first = it.next().expect("empty series");
            it.fold(first, |acc, x| acc.series(&x))
        }
        SPExpr::Parallel(cs) => {
            let mut it = cs.iter().map(|c| eval_sp(c, base));
            let first = it.next().expect("empty parallel");
            it.fold(first, |acc, x| acc.parallel(&x))
        }
    }
}
