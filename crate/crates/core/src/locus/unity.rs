use std::sync::OnceLock;

use serde::Serialize;

use crate::graph::{parse_adjacency, GraphFile, TwoTerminal};
use crate::numeric::ball::root_of_unity;
use crate::numeric::{poly_gcd, Ball, BigFloat, Field, RatPoly, Ring};
use crate::reliability::{symbolic_uncapped, RelPolyPair};

use super::LocusError;

/// Edge multiplicities of the gadgets `G₅ … G₉`; the terminals are the
/// non-adjacent vertices 0 and 1.
const MATRICES: [&str; 5] = [
    "0 0 1 1 1 4
     0 0 1 1 1 4
     1 1 0 4 4 2
     1 1 4 0 4 2
     1 1 4 4 0 3
     4 4 2 2 3 0",
    "0 0 1 1 1 5
     0 0 1 1 1 5
     1 1 0 5 5 5
     1 1 5 0 5 2
     1 1 5 5 0 2
     5 5 5 2 2 0",
    "0 0 1 1 6
     0 0 1 1 6
     1 1 0 6 2
     1 1 6 0 2
     6 6 2 2 0",
    "0 0 1 1 7
     0 0 1 1 7
     1 1 0 7 2
     1 1 7 0 2
     7 7 2 2 0",
    "0 0 1 1 8
     0 0 1 1 8
     1 1 0 8 2
     1 1 8 0 2
     8 8 2 2 0",
];

const START_BITS: u32 = 256;
const MAX_BITS: u32 = 1024;

fn index(k: u32) -> Result<usize, LocusError> {
    if (5..=9).contains(&k) {
        Ok((k - 5) as usize)
    } else {
        Err(LocusError::InvalidK(k))
    }
}

/// The adjacency matrix of `G_k` as text rows.
pub fn unity_matrix(k: u32) -> Result<&'static str, LocusError> {
    Ok(MATRICES[index(k)?])
}

pub fn unity_gadget(k: u32) -> Result<TwoTerminal, LocusError> {
    let g = parse_adjacency(unity_matrix(k)?).expect("fixture matrices are valid");
    Ok(TwoTerminal::new(g, 0, 1).expect("terminals 0 and 1 exist"))
}

/// Symbolic `(R, S)` of `G_k`, computed once per process.
pub fn unity_polys(k: u32) -> Result<&'static RelPolyPair, LocusError> {
    static CACHE: [OnceLock<RelPolyPair>; 5] = [const { OnceLock::new() }; 5];
    let i = index(k)?;
    Ok(CACHE[i].get_or_init(|| symbolic_uncapped(&unity_gadget(k).expect("valid k"))))
}

#[derive(Clone, Debug, Serialize)]
pub struct UnityCertificate {
    pub k: u32,
    pub graph: GraphFile,
    pub edges: usize,
    pub r: RatPoly,
    pub s: RatPoly,
    /// `gcd(R, p^k − 1)`, monic.
    pub gcd: RatPoly,
    /// Enclosure of `|ŷ(e^{2πi/k})|`.
    pub yhat_abs_lower: f64,
    pub yhat_abs_upper: f64,
    /// Lower bound on `|R(e^{2πi/k})|`.
    pub r_abs_lower: f64,
    /// Working precision at which the bounds were certified.
    pub precision: u32,
}

impl UnityCertificate {
    /// Both claims hold: the gcd is `p − 1` and the modulus exceeds 1.
    pub fn holds(&self) -> bool {
        self.gcd == RatPoly::from_ints(&[-1, 1]) && self.yhat_abs_lower > 1.0 && self.r_abs_lower > 0.0
    }
}

/// Certifies `|ŷ_{G_k}(e^{2πi/k})| > 1` by ball arithmetic, doubling the
/// precision from 256 up to 1024 bits, and computes the gcd exactly.
pub fn verify_unity(k: u32) -> Result<UnityCertificate, LocusError> {
    let g = unity_gadget(k)?;
    let pair = unity_polys(k)?;
    let mut pk = vec![0i64; k as usize + 1];
    pk[0] = -1;
    pk[k as usize] = 1;
    let gcd = poly_gcd(&pair.r, &RatPoly::from_ints(&pk))?;
    let one = BigFloat::from_i64(1);
    let mut prec = START_BITS;
    loop {
        let z = root_of_unity(k, prec);
        let r = pair.r.eval_with(&z, |c| Ball::from_rational(c, prec));
        let s = pair.s.eval_with(&z, |c| Ball::from_rational(c, prec));
        let y = r.div(&s).map(|q| q.add(&Ball::ident()));
        if let Some(y) = y.filter(|y| y.abs_gt(&one) && !r.contains_zero()) {
            return Ok(UnityCertificate {
                k,
                graph: GraphFile::from_two_terminal(&g),
                edges: g.edge_count(),
                r: pair.r.clone(),
                s: pair.s.clone(),
                gcd,
                yhat_abs_lower: y.abs_lower().to_f64(),
                yhat_abs_upper: y.abs_upper().to_f64(),
                r_abs_lower: r.abs_lower().to_f64(),
                precision: prec,
            });
        }
        if prec >= MAX_BITS {
            return Err(LocusError::NotCertified { k, bits: prec, what: "|ŷ| > 1 not separated".into() });
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussianRational;
    use crate::reliability::{brute_force, eval_pair_delcon};
    use num_complex::Complex64;

    #[test]
    fn fixtures() {
        let edges: Vec<usize> = (5..=9).map(|k| unity_gadget(k).unwrap().edge_count()).collect();
        assert_eq!(edges, vec![33, 40, 26, 29, 32]);
        for k in 5..=9 {
            let g = unity_gadget(k).unwrap();
            assert!(g.graph.is_connected());
            assert!(!g.graph.edges.contains(&(0, 1)));
        }
        assert_eq!(unity_gadget(4).unwrap_err(), LocusError::InvalidK(4));
    }

    #[test]
    fn symbolic_matches_exact_evaluation() {
        // an independent evaluator at a few exact points
        let g = unity_gadget(7).unwrap();
        let pair = unity_polys(7).unwrap();
        for p in ["1/3", "-1/2+1/5i", "2/7i"] {
            let p: GaussianRational = p.parse().unwrap();
            let direct = eval_pair_delcon(&g, &p);
            assert_eq!(pair.r.eval(&p), direct.r);
            assert_eq!(pair.s.eval(&p), direct.s);
        }
        assert!(pair.r.eval(&GaussianRational::ident()).is_nil());
        assert!(pair.r.degree().unwrap() <= g.edge_count());
    }

    #[test]
    fn small_gadget_against_brute_force() {
        // the same pipeline on a 5-edge multigraph brute force can handle
        let g = TwoTerminal::new(parse_adjacency("0 0 1 1\n0 0 1 1\n1 1 0 1\n1 1 1 0").unwrap(), 0, 1).unwrap();
        let sym = symbolic_uncapped(&g);
        let p: GaussianRational = "1/4-2/3i".parse().unwrap();
        let bf = brute_force(&g, &p).unwrap();
        assert_eq!((sym.r.eval(&p), sym.s.eval(&p)), (bf.r, bf.s));
    }

    #[test]
    fn certificate_k5() {
        let c = verify_unity(5).unwrap();
        assert!(c.holds(), "{c:?}");
        assert_eq!(c.precision, START_BITS);
        // the reported bounds are rounded outward to 32 bits
        assert!(c.yhat_abs_upper - c.yhat_abs_lower < 1e-8);
        // float cross-check of the modulus
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        let ev = |q: &RatPoly| q.to_f64_coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |a, &x| a * z + x);
        let y = ev(&c.r) / ev(&c.s) + 1.0;
        assert!((y.norm() - c.yhat_abs_lower).abs() < 1e-9);
        assert!(matches!(verify_unity(10), Err(LocusError::InvalidK(10))));
    }
}
