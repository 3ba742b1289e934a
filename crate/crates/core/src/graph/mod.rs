//! Multigraphs, two-terminal graphs, the series–parallel expression
//! language and gadget substitution.

pub mod io;
pub mod iso;
pub mod multigraph;
pub mod sp;

pub use io::{format_adjacency, parse_adjacency, GraphFile};
pub use iso::{isomorphic, isomorphic_two_terminal};
pub use multigraph::{substitute, Assignment, Multigraph, TwoTerminal};
pub use sp::{parse_sp, SPExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {edge} has an endpoint outside 0..{n}")]
    VertexOutOfRange { edge: usize, n: usize },
    #[error("source and sink must differ")]
    EqualTerminals,
    #[error("terminal outside the vertex range")]
    TerminalOutOfRange,
    #[error("graph file lacks s and t")]
    MissingTerminals,
    #[error("edge {0} does not exist")]
    EdgeOutOfRange(usize),
    #[error("cannot substitute into loop edge {0}")]
    LoopSubstitution(usize),
    #[error("assignment has {got} entries for {expected} edges")]
    AssignmentLength { expected: usize, got: usize },
    #[error("empty expression")]
    EmptyExpression,
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("bad graph file: {0}")]
    Format(String),
}

/// Random expressions, graphs and parameters for tests and examples.
pub mod random {
    use super::{Multigraph, SPExpr, TwoTerminal};
    use crate::numeric::GaussianRational;
    use rand::Rng;

    /// Multigraph with `n` vertices and `m` uniformly random edges; loops
    /// and parallel edges allowed.
    pub fn random_multigraph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Multigraph {
        let edges = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        Multigraph { n, edges }
    }

    /// Random multigraph on at least two vertices with random distinct terminals.
    pub fn random_two_terminal<R: Rng>(rng: &mut R, n: usize, m: usize) -> TwoTerminal {
        let n = n.max(2);
        let g = random_multigraph(rng, n, m);
        let s = rng.gen_range(0..n);
        let t = (s + rng.gen_range(1..n)) % n;
        TwoTerminal { graph: g, s, t }
    }

    /// `a/b + (c/d)i` with `|a|, |c| ≤ k` and `1 ≤ b, d ≤ k`.
    pub fn random_gaussian<R: Rng>(rng: &mut R, k: i64) -> GaussianRational {
        GaussianRational::from_frac(rng.gen_range(-k..=k), rng.gen_range(1..=k), rng.gen_range(-k..=k), rng.gen_range(1..=k))
    }

    /// Uniformly shaped random binary split into `leaves` leaves; each leaf
    /// is transposed with probability 1/4.
    pub fn random_expr<R: Rng>(rng: &mut R, leaves: usize) -> SPExpr {
        if leaves == 1 {
            return if rng.gen_bool(0.25) { SPExpr::LeafTransposed } else { SPExpr::Leaf };
        }
        let k = rng.gen_range(1..leaves);
        let a = random_expr(rng, k);
        let b = random_expr(rng, leaves - k);
        if rng.gen_bool(0.5) {
            SPExpr::series(vec![a, b])
        } else {
            SPExpr::parallel(vec![a, b])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn fig1_g1() -> TwoTerminal {
        // s = 0, a = 1, b = 2, t = 3
        TwoTerminal::new(Multigraph::new(4, vec![(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)]).unwrap(), 0, 3).unwrap()
    }

    #[test]
    fn figure_one_compositions() {
        let g2 = TwoTerminal::path(3);
        let par = TwoTerminal::parallel(&[fig1_g1(), g2.clone()]);
        assert_eq!((par.n(), par.edge_count()), (6, 8));
        let ser = TwoTerminal::series(&[fig1_g1(), g2]);
        assert_eq!((ser.n(), ser.edge_count()), (7, 8));
        assert_eq!(ser.merge_terminals().n, 6);
    }

    #[test]
    fn triangle_of_paths_is_a_hexagon() {
        let tri = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let hex = substitute(&tri, Assignment::All(&TwoTerminal::path(2))).unwrap();
        let c6 = Multigraph::new(6, (0..6).map(|i| (i, (i + 1) % 6)).collect()).unwrap();
        assert!(isomorphic(&hex, &c6));
        let k2 = TwoTerminal::k2().graph;
        let id = substitute(&k2, Assignment::One(0, &TwoTerminal::path(2))).unwrap();
        assert!(isomorphic(&id, &TwoTerminal::path(2).graph));
    }

    fn expr_strategy() -> impl Strategy<Value = SPExpr> {
        (1usize..=12, any::<u64>()).prop_map(|(l, seed)| {
            random::random_expr(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), l)
        })
    }

    fn base_strategy() -> impl Strategy<Value = TwoTerminal> {
        prop_oneof![
            Just(TwoTerminal::k2()),
            Just(TwoTerminal::path(2)),
            Just(fig1_g1()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn print_parse_realize(x in expr_strategy(), base in base_strategy()) {
            let y = parse_sp(&x.to_string()).unwrap();
            prop_assert_eq!(&y, &x);
            let (gx, gy) = (x.realize(&base), y.realize(&base));
            prop_assert!(isomorphic_two_terminal(&gx, &gy));
            prop_assert_eq!(gx.edge_count(), x.leaves() * base.edge_count());
            prop_assert_eq!(gx.n(), x.vertex_count(base.n()));
        }

        #[test]
        fn transpose_closure(x in expr_strategy(), base in base_strategy()) {
            let a = x.transpose().realize(&base);
            let b = x.realize(&base).transpose();
            prop_assert!(isomorphic_two_terminal(&a, &b));
        }
    }
}
