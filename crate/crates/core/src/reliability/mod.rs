//! Reliability and split reliability: subset enumeration, weighted
//! deletion–contraction, the series–parallel recursion, symbolic
//! polynomials and the multivariate polynomial.

pub mod brute;
pub mod delcon;
pub mod multivariate;
pub mod sp_eval;
pub mod symbolic;

use serde::{Deserialize, Serialize};

use crate::graph::GraphError;
use crate::numeric::{RatPoly, Ring};

pub use brute::{brute_force, brute_force_multivariate, subset_counts, SUBSET_CAP};
pub use delcon::{eval_delcon, eval_delcon_in, eval_pair_delcon, DelCon};
pub use multivariate::{eval_multivariate, eval_multivariate_delcon};
pub use sp_eval::{eval_sp, k2_pair};
pub use symbolic::{symbolic, symbolic_uncapped};

/// `(R(G;p), S(G;p))` at one parameter value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelPair<T> {
    pub r: T,
    pub s: T,
}

impl<T: Ring> RelPair<T> {
    pub fn new(r: T, s: T) -> Self {
        RelPair { r, s }
    }

    /// `R + S`, the reliability of the graph with its terminals merged.
    pub fn total(&self) -> T {
        self.r.add(&self.s)
    }

    pub fn series(&self, o: &Self) -> Self {
        RelPair { r: self.r.mul(&o.r), s: self.r.mul(&o.s).add(&o.r.mul(&self.s)) }
    }

    pub fn parallel(&self, o: &Self) -> Self {
        let r = self.r.mul(&o.s).add(&o.r.mul(&self.s)).add(&self.r.mul(&o.r));
        RelPair { r, s: self.s.mul(&o.s) }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> RelPair<U> {
        RelPair { r: f(&self.r), s: f(&self.s) }
    }
}

/// Symbolic `(R, S)` in `ℚ[p]`.
pub type RelPolyPair = RelPair<RatPoly>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReliabilityError {
    #[error("graph has {edges} edges; subset enumeration is capped at {cap}")]
    CapExceeded { edges: usize, cap: usize },
    #[error("expected {expected} edge parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random::{random_expr, random_gaussian, random_multigraph, random_two_terminal};
    use crate::graph::{substitute, Assignment, Multigraph, TwoTerminal};
    use crate::numeric::{Field, GaussianRational, Ring};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = GaussianRational;

    fn one() -> Q {
        Q::ident()
    }

    fn r_of(g: &Multigraph, p: &Q) -> Q {
        eval_delcon(g, p)
    }

    /// `ŷ = R/S + 1`
    fn y_hat(pair: &RelPair<Q>) -> Option<Q> {
        pair.r.div(&pair.s).map(|x| x.add(&one()))
    }

    /// Non-loop edge of `h`, if any.
    fn some_edge(rng: &mut ChaCha8Rng, h: &Multigraph) -> Option<usize> {
        let cands: Vec<usize> = (0..h.edges.len()).filter(|&e| !h.is_loop(e)).collect();
        (!cands.is_empty()).then(|| cands[rng.gen_range(0..cands.len())])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn evaluators_agree(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (n, m) = (rng.gen_range(2..=5), rng.gen_range(0..=8));
            let g = random_two_terminal(&mut rng, n, m);
            let p = random_gaussian(&mut rng, 9);
            let brute = brute_force(&g, &p).unwrap();
            prop_assert_eq!(&eval_pair_delcon(&g, &p), &brute);
            prop_assert_eq!(&eval_delcon_in(&g.graph, &p), &brute.r);
            let sym = symbolic(&g).unwrap();
            prop_assert_eq!(&sym.map(|f| f.eval(&p)), &brute);
            let ps: Vec<Q> = (0..m).map(|_| random_gaussian(&mut rng, 5)).collect();
            prop_assert_eq!(eval_multivariate(&g, &ps).unwrap(), eval_multivariate_delcon(&g, &ps).unwrap());
        }

        #[test]
        fn sp_recursion(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k0 = rng.gen_range(1..=12);
            let x = random_expr(&mut rng, k0);
            let base = random_two_terminal(&mut rng, 3, 3);
            let p = random_gaussian(&mut rng, 9);
            let via_sp = eval_sp(&x, &eval_pair_delcon(&base, &p));
            prop_assert_eq!(&via_sp, &eval_pair_delcon(&x.realize(&base), &p));
            let k2 = eval_sp(&x, &k2_pair(&p));
            prop_assert_eq!(k2, brute_force(&x.realize(&TwoTerminal::k2()), &p).unwrap());
        }

        #[test]
        fn single_substitution(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k0 = rng.gen_range(2..=4);
            let k1 = rng.gen_range(1..=5);
            let h = random_multigraph(&mut rng, k0, k1);
            let Some(e) = some_edge(&mut rng, &h) else { return Ok(()) };
            let k0 = rng.gen_range(2..=4);
            let k1 = rng.gen_range(0..=5);
            let g = random_two_terminal(&mut rng, k0, k1);
            let p = random_gaussian(&mut rng, 9);
            let pg = eval_pair_delcon(&g, &p);
            let he = substitute(&h, Assignment::One(e, &g)).unwrap();
            let lhs = r_of(&he, &p);
            let (del, con) = (r_of(&h.delete_edge(e), &p), r_of(&h.contract_edge(e), &p));
            prop_assert_eq!(&lhs, &pg.s.mul(&del).add(&pg.r.mul(&con)));
            if let Some(inv) = pg.r.inv() {
                let y = one().sub(&p).mul(&pg.s).mul(&inv).add(&one());
                let left = one().sub(&p).mul(&inv).mul(&lhs);
                let right = r_of(&h, &p).add(&y.sub(&p.add(&one())).mul(&del));
                prop_assert_eq!(left, right);
            }
            // both orientations give the same value
            let flipped = substitute(&h, Assignment::One(e, &g.transpose())).unwrap();
            prop_assert_eq!(r_of(&flipped, &p), lhs);
        }

        #[test]
        fn full_substitution(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let hn = rng.gen_range(2..=4);
            let k0 = rng.gen_range(1..=4);
            let h = Multigraph {
                n: hn,
                edges: random_multigraph(&mut rng, hn, k0)
                    .edges
                    .into_iter()
                    .filter(|&(a, b)| a != b)
                    .collect(),
            };
            let ht = TwoTerminal { graph: h.clone(), s: 0, t: 1 };
            let k0 = rng.gen_range(2..=3);
            let k1 = rng.gen_range(1..=4);
            let g = random_two_terminal(&mut rng, k0, k1);
            let p = random_gaussian(&mut rng, 9);
            let pg = eval_pair_delcon(&g, &p);
            let big = TwoTerminal { graph: substitute(&h, Assignment::All(&g)).unwrap(), s: 0, t: 1 };
            let pb = eval_pair_delcon(&big, &p);
            if let Some(yg) = y_hat(&pg) {
                if let Some(x) = yg.inv() {
                    let scale = pg.total().pow_n(h.edges.len() as u64);
                    let ph = eval_pair_delcon(&ht, &x);
                    prop_assert_eq!(&pb, &ph.map(|v| v.mul(&scale)));
                    if let (Some(a), Some(b)) = (y_hat(&pb), y_hat(&ph)) {
                        prop_assert_eq!(a, b);
                    }
                }
            }
        }

        #[test]
        fn multivariate_substitution(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = TwoTerminal {
                graph: Multigraph {
                    n: 3,
                    edges: random_multigraph(&mut rng, 3, 4).edges.into_iter().filter(|&(a, b)| a != b).collect(),
                },
                s: 0,
                t: 2,
            };
            let gs: Vec<TwoTerminal> =
                (0..h.edge_count()).map(|_| { let k = rng.gen_range(1..=3); random_two_terminal(&mut rng, 3, k) }).collect();
            let p = random_gaussian(&mut rng, 9);
            let mut ps = Vec::new();
            for g in &gs {
                match y_hat(&eval_pair_delcon(g, &p)).and_then(|y| y.inv()) {
                    Some(x) => ps.push(x),
                    None => return Ok(()),
                }
            }
            let per: Vec<Option<TwoTerminal>> = gs.iter().cloned().map(Some).collect();
            let big = TwoTerminal { graph: substitute(&h.graph, Assignment::PerEdge(&per)).unwrap(), s: 0, t: 2 };
            let lhs = y_hat(&eval_pair_delcon(&big, &p));
            let rhs = y_hat(&eval_multivariate(&h, &ps).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let k0 = rng.gen_range(2..=5);
            let k1 = rng.gen_range(0..=8);
            let g = random_two_terminal(&mut rng, k0, k1);
            let sym = symbolic(&g).unwrap();
            let zero = num_rational::BigRational::from_integer(0.into());
            let onep = num_rational::BigRational::from_integer(1.into());
            assert_eq!(sym.r.eval_rational(&onep), zero.clone());
            assert_eq!(sym.r.eval_rational(&zero) == onep, g.graph.is_connected());
            assert!(sym.r.degree().unwrap_or(0) <= g.edge_count());
            // all 2^m configurations are counted at most once
            let c = subset_counts(&g).unwrap();
            let total: u64 = c.r.iter().chain(&c.s).sum();
            assert!(total <= 1 << g.edge_count());
        }
    }
}
