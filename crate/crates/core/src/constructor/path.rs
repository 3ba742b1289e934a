use num_complex::Complex64;
use num_rational::BigRational;

use crate::interactions::{Ext, Mobius};
use crate::numeric::gauss::rat_to_f64;
use crate::numeric::height::log_big;
use crate::numeric::{BigComplex, GaussianRational, Ring};

use super::cover::CoverCertificate;
use super::ConstructError;

type Q = GaussianRational;

#[derive(Clone, Debug)]
pub struct PathResult {
    /// `i₁, …, i_k`: the target is approximated by `Φ_{i₁} ∘ ⋯ ∘ Φ_{i_k}(s)`.
    pub indices: Vec<usize>,
    /// The forward image of the start point.
    pub x: BigComplex,
    /// Forward orbit from `s` (first) to `x` (last).
    pub forward: Vec<BigComplex>,
}

fn big_map(m: &Mobius<Q>, prec: u32) -> Mobius<BigComplex> {
    let c = |z: &Q| BigComplex::from_gauss(z, prec);
    Mobius { a: c(&m.a), b: c(&m.b), c: c(&m.c), d: c(&m.d) }
}

fn apply(m: &Mobius<BigComplex>, z: &BigComplex) -> Option<BigComplex> {
    match m.apply_finite(z) {
        Ext::Finite(w) => Some(w),
        Ext::Infinity => None,
    }
}

fn ln_rat(x: &BigRational) -> f64 {
    log_big(x.numer()) - log_big(x.denom())
}

/// Backward orbit of the family from `target` until the start point is
/// close enough that the forward orbit lands within `eps`.
pub fn path_find(cert: &CoverCertificate, target: &Q, eps: &BigRational) -> Result<PathResult, ConstructError> {
    let one = Q::ident();
    if target.dist_sq(&one) > &cert.r * &cert.r {
        return Err(ConstructError::TargetOutsideDisk);
    }
    let ln_eps = ln_rat(eps);
    let prec = ((-ln_eps / std::f64::consts::LN_2).max(0.0) as u32) + 80;
    let fwd: Vec<Mobius<BigComplex>> = cert.family.iter().map(|m| big_map(&m.map, prec)).collect();
    let inv: Vec<Mobius<BigComplex>> = cert.family.iter().map(|m| big_map(&m.map.inverse(), prec)).collect();
    let det = cert.g_f64.det().norm();
    let (gc, gd) = (cert.g_f64.c, cert.g_f64.d);
    let deriv = |z: Complex64| det / (gc * z + gd).norm_sqr();
    let inv_f64: Vec<Mobius<Complex64>> = cert
        .family
        .iter()
        .map(|m| {
            let v = m.map.inverse();
            Mobius { a: v.a.to_c64(), b: v.b.to_c64(), c: v.c.to_c64(), d: v.d.to_c64() }
        })
        .collect();
    let s = BigComplex::from_gauss(&cert.start.y, prec);
    let s_f = s.to_c64();
    let t0 = BigComplex::from_gauss(target, prec);
    let big_one = BigComplex::from_i64(1);
    let rc = rat_to_f64(&cert.r_cover);
    let ln_alpha = rat_to_f64(&cert.alpha).ln();
    let max_steps = 64 + (4.0 * ln_eps / ln_alpha) as usize;
    let stop = |t: &BigComplex, ln_d: f64| {
        let gap = s.sub(t).abs_f64();
        gap == 0.0 || gap.ln() + ln_d + 0.05f64.ln_1p() <= ln_eps - std::f64::consts::LN_2
    };

    let mut indices = Vec::new();
    let mut t = t0.clone();
    let mut ln_d = 0.0;
    loop {
        if stop(&t, ln_d) {
            let mut x = s.clone();
            let mut forward = vec![x.clone()];
            for &i in indices.iter().rev() {
                x = apply(&fwd[i], &x).ok_or(ConstructError::OrbitEscaped(indices.len()))?;
                forward.push(x.clone());
            }
            let err = x.sub(&t0).abs_f64();
            if err == 0.0 || err.ln() < ln_eps + 0.999f64.ln() {
                return Ok(PathResult { indices, x, forward });
            }
        }
        if indices.len() >= max_steps {
            return Err(ConstructError::OrbitEscaped(indices.len()));
        }
        // screen candidates in f64 and confirm only the chosen one
        let tf = t.to_c64();
        let mut pick = None;
        if (s_f - tf).norm() > 1e-6 {
            let mut cands: Vec<(usize, Complex64)> = Vec::new();
            for (i, m) in inv_f64.iter().enumerate() {
                let z = (m.a * tf + m.b) / (m.c * tf + m.d);
                if z.is_finite() && (z - 1.0).norm() <= rc * (1.0 - 1e-9) {
                    cands.push((i, z));
                }
            }
            let likely = cands.iter().find(|(_, z)| {
                let g = (s_f - z).norm();
                g < 1e-12 || g.ln() + ln_d + deriv(*z).ln() <= ln_eps - std::f64::consts::LN_2 + 0.1
            });
            let order: Vec<usize> = likely.into_iter().chain(cands.iter()).map(|c| c.0).collect();
            for i in order {
                let Some(z) = apply(&inv[i], &t) else { continue };
                if z.sub(&big_one).abs_f64() > rc {
                    continue;
                }
                let nd = ln_d + deriv(z.to_c64()).ln();
                pick = Some((i, z, nd));
                break;
            }
        }
        if pick.is_none() {
            for (i, m) in inv.iter().enumerate() {
                let Some(z) = apply(m, &t) else { continue };
                if z.sub(&big_one).abs_f64() > rc {
                    continue;
                }
                let nd = ln_d + deriv(z.to_c64()).ln();
                if stop(&z, nd) {
                    pick = Some((i, z, nd));
                    break;
                }
                if pick.is_none() {
                    pick = Some((i, z, nd));
                }
            }
        }
        let Some((i, z, nd)) = pick else {
            return Err(ConstructError::OrbitEscaped(indices.len()));
        };
        indices.push(i);
        t = z;
        ln_d = nd;
    }
}
