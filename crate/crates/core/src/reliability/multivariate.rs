use std::hash::Hash;

use crate::graph::TwoTerminal;
use crate::numeric::Ring;

use super::brute::brute_force_multivariate;
use super::delcon::DelCon;
use super::{RelPair, ReliabilityError};

/// Multivariate `(R, S)` by subset enumeration, one failure parameter per
/// edge in edge order.
pub fn eval_multivariate<T: Ring>(g: &TwoTerminal, ps: &[T]) -> Result<RelPair<T>, ReliabilityError> {
    brute_force_multivariate(g, ps)
}

/// Multivariate `(R, S)` by weighted deletion–contraction. No edge cap.
pub fn eval_multivariate_delcon<T: Ring + Hash + Eq>(g: &TwoTerminal, ps: &[T]) -> Result<RelPair<T>, ReliabilityError> {
    let m = g.edge_count();
    if ps.len() != m {
        return Err(ReliabilityError::ParameterCount { expected: m, got: ps.len() });
    }
    let weighted = |edges: &[(usize, usize)]| -> Vec<(usize, usize, T, T)> {
        edges.iter().zip(ps).map(|(&(u, v), p)| (u, v, p.clone(), T::ident().sub(p))).collect()
    };
    let mut engine = DelCon::default();
    let r = engine.reliability(g.n(), weighted(&g.graph.edges));
    let merged = g.merge_terminals();
    let total = engine.reliability(merged.n, weighted(&merged.edges));
    Ok(RelPair { s: total.sub(&r), r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussianRational;

    #[test]
    fn path_of_two() {
        let p1 = GaussianRational::from_frac(1, 3, 0, 1);
        let p2 = GaussianRational::from_frac(1, 2, 1, 7);
        let ps = [p1.clone(), p2.clone()];
        let g = TwoTerminal::path(2);
        let a = eval_multivariate(&g, &ps).unwrap();
        let one = GaussianRational::ident();
        assert_eq!(a.r, one.sub(&p1).mul(&one.sub(&p2)));
        assert_eq!(eval_multivariate_delcon(&g, &ps).unwrap(), a);
        assert!(matches!(
            eval_multivariate(&g, &ps[..1]),
            Err(ReliabilityError::ParameterCount { expected: 2, got: 1 })
        ));
    }
}
