//! The series-parallel recursion against the realized graph.

use netrel::graph::TwoTerminal;
use netrel::numeric::parse::parse_gaussian;
use netrel::reliability::{eval_pair_delcon, eval_sp, k2_pair};
use netrel::SPExpr;

fn main() {
    let mut args = std::env::args().skip(1);
    let expr: SPExpr = args.next().as_deref().unwrap_or("(e|e|e)*(e|e)").parse().unwrap();
    let p = parse_gaussian(args.next().as_deref().unwrap_or("1/2+1/3i")).unwrap();
    let fast = eval_sp(&expr, &k2_pair(&p));
    let g = expr.realize(&TwoTerminal::k2());
    println!("{expr}: {} leaves, {} vertices", expr.leaves(), g.n());
    println!("R = {}, S = {}", fast.r, fast.s);
    assert_eq!(fast, eval_pair_delcon(&g, &p));
}
