//! Effective and virtual interactions, their Möbius relation and the
//! fixed points of the parallel map.

use netrel::interactions::{classify_fixed, classify_point, g_map, interactions_of};
use netrel::numeric::parse::parse_gaussian;
use netrel::reliability::{eval_sp, k2_pair};
use netrel::SPExpr;

fn main() {
    let p = parse_gaussian("1/2+1/2i").unwrap();
    for s in ["e", "e*e", "e|e", "(e|e)*e", "e*e*e|e"] {
        let x: SPExpr = s.parse().unwrap();
        let pair = eval_sp(&x, &k2_pair(&p));
        let ip = interactions_of(&pair, &p).unwrap();
        println!("{s:>10}: y = {}, ŷ = {}, {}", ip.y, ip.yhat, classify_point(&pair, false));
    }
    let y0 = interactions_of(&k2_pair(&p), &p).unwrap().y.finite().cloned().unwrap();
    let g = g_map(&p, &y0).unwrap();
    for fp in classify_fixed(&g).unwrap().points {
        println!("fixed point {} of the parallel map: {:?}, multiplier {}", fp.point, fp.kind, fp.multiplier);
    }
}
