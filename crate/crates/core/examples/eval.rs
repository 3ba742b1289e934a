//! Exact and symbolic reliability of a small graph.

use netrel::graph::TwoTerminal;
use netrel::numeric::parse::parse_gaussian;
use netrel::reliability::{brute_force, eval_pair_delcon, symbolic};
use netrel::SPExpr;

fn main() {
    let p = parse_gaussian(std::env::args().nth(1).as_deref().unwrap_or("-1/2")).unwrap();
    // a triangle with adjacent terminals
    let tri: SPExpr = "e*e|e".parse().unwrap();
    let g = tri.realize(&TwoTerminal::k2());
    let pair = eval_pair_delcon(&g, &p);
    println!("R = {}, S = {} at p = {p}", pair.r, pair.s);
    assert_eq!(pair, brute_force(&g, &p).unwrap());
    let sym = symbolic(&g).unwrap();
    println!("R(p) = {}\nS(p) = {}", sym.r, sym.s);
}
