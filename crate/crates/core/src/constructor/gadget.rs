use num_bigint::BigInt;
use num_complex::Complex;

use crate::graph::{SPExpr, TwoTerminal};
use crate::interactions::Ext;
use crate::numeric::{GaussInt, GaussianRational, Ring};
use crate::reliability::delcon::{eval_homogeneous, DelCon};
use crate::reliability::RelPair;

use super::ConstructError;

type Q = GaussianRational;

/// Expression over the base gadget together with its homogeneous pair
/// `(R̃, S̃) = q^{|E|}·(R, S)` where `p = P/q`.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub expr: SPExpr,
    pub hpair: RelPair<GaussInt>,
    pub leaves: usize,
}

/// The base gadget `G₀` at a fixed parameter.
#[derive(Clone, Debug)]
pub struct Base {
    pub g0: TwoTerminal,
    pub p: Q,
    pub num: GaussInt,
    pub den: BigInt,
    pub g0_hpair: RelPair<GaussInt>,
}

impl Base {
    pub fn new(g0: &TwoTerminal, p: &Q) -> Result<Self, ConstructError> {
        if p.is_nil() || p == &Q::ident() {
            return Err(ConstructError::InvalidParameter(format!("p = {} must avoid 0 and 1", p)));
        }
        let (num, den) = p.to_homogeneous();
        let mut engine = DelCon::default();
        let r = eval_homogeneous(&g0.graph, &num, &den, &mut engine);
        let total = eval_homogeneous(&g0.merge_terminals(), &num, &den, &mut engine);
        let s = total.sub(&r);
        if r.is_nil() {
            return Err(ConstructError::PreconditionFailed("R(G0;p) = 0".into()));
        }
        if s.is_nil() {
            return Err(ConstructError::PreconditionFailed("S(G0;p) = 0".into()));
        }
        Ok(Base { g0: g0.clone(), p: p.clone(), num, den, g0_hpair: RelPair { r, s } })
    }

    pub fn leaf(&self) -> Gadget {
        Gadget { expr: SPExpr::Leaf, hpair: self.g0_hpair.clone(), leaves: 1 }
    }

    pub fn series_into(&self, a: Gadget, b: &Gadget) -> Gadget {
        Gadget {
            hpair: a.hpair.series(&b.hpair),
            expr: SPExpr::series(vec![a.expr, b.expr.clone()]),
            leaves: a.leaves + b.leaves,
        }
    }

    pub fn parallel_into(&self, a: Gadget, b: &Gadget) -> Gadget {
        Gadget {
            hpair: a.hpair.parallel(&b.hpair),
            expr: SPExpr::parallel(vec![a.expr, b.expr.clone()]),
            leaves: a.leaves + b.leaves,
        }
    }

    pub fn series_pow(&self, a: &Gadget, n: usize) -> Gadget {
        let mut acc = a.clone();
        for _ in 1..n {
            acc = self.series_into(acc, a);
        }
        acc
    }

    pub fn parallel_pow(&self, a: &Gadget, n: usize) -> Gadget {
        let mut acc = a.clone();
        for _ in 1..n {
            acc = self.parallel_into(acc, a);
        }
        acc
    }

    pub fn edges(&self, g: &Gadget) -> usize {
        g.leaves * self.g0.edge_count()
    }

    fn q_gauss(&self) -> GaussInt {
        Complex::new(self.den.clone(), BigInt::from(0))
    }

    /// Exact `(R, S)` at `p`.
    pub fn pair(&self, g: &Gadget) -> RelPair<Q> {
        let scale = num_traits::pow(self.den.clone(), self.edges(g));
        g.hpair.map(|x| Q::from_homogeneous(x, &scale))
    }

    pub fn g0_pair_exact(&self) -> RelPair<Q> {
        self.pair(&self.leaf())
    }

    /// `y = (1−p)·S/R + 1`, infinite when `R = 0`.
    pub fn y(&self, g: &Gadget) -> Ext<Q> {
        let q = self.q_gauss();
        let num = q.sub(&self.num).mul(&g.hpair.s);
        let den = q.mul(&g.hpair.r);
        match Q::from_gauss_quotient(&num, &den) {
            Some(v) => Ext::Finite(v.add(&Q::ident())),
            None => Ext::Infinity,
        }
    }

    /// `ŷ = R/S + 1`.
    pub fn yhat(&self, g: &Gadget) -> Ext<Q> {
        match Q::from_gauss_quotient(&g.hpair.r, &g.hpair.s) {
            Some(v) => Ext::Finite(v.add(&Q::ident())),
            None => Ext::Infinity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random::random_expr;
    use crate::reliability::{eval_pair_delcon, eval_sp};
    use rand::SeedableRng;

    #[test]
    fn tracked_pairs_match_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g0 = TwoTerminal::path(2);
        let p = Q::from_frac(-1, 3, 1, 2);
        let base = Base::new(&g0, &p).unwrap();
        let leaf = base.leaf();
        for _ in 0..20 {
            let x = random_expr(&mut rng, 5);
            let y = random_expr(&mut rng, 4);
            let gx = Gadget { hpair: eval_sp(&x, &base.g0_hpair), expr: x, leaves: 5 };
            let gy = Gadget { hpair: eval_sp(&y, &base.g0_hpair), expr: y, leaves: 4 };
            let s = base.series_into(gx.clone(), &gy);
            let pp = base.parallel_into(base.parallel_into(gx, &gy), &leaf);
            for g in [s, pp] {
                assert_eq!(base.pair(&g), eval_pair_delcon(&g.expr.realize(&g0), &p));
                assert_eq!(g.leaves, g.expr.leaves());
            }
        }
        // two-edge path: R = (1−p)², S = 2p(1−p), so y = 2p + 1
        assert_eq!(base.y(&leaf), Ext::Finite(Q::from_int(2).mul(&p).add(&Q::ident())));
    }
}
