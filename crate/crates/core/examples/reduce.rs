//! Exact reliability from a simulated approximation oracle.

use netrel::graph::{Multigraph, TwoTerminal};
use netrel::numeric::parse::parse_gaussian;
use netrel::reduction::{simulated_oracle, OracleMode, Reducer};
use netrel::reliability::eval_delcon;

fn main() {
    let mut args = std::env::args().skip(1);
    let p = parse_gaussian(args.next().as_deref().unwrap_or("1/2i")).unwrap();
    let mode: OracleMode = args.next().as_deref().unwrap_or("arg").parse().unwrap();
    let f = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    let red = Reducer::new(&TwoTerminal::k2(), simulated_oracle(&p, mode, 7).unwrap()).unwrap();
    let (t, reports) = red.reduce(&f).unwrap();
    for (s, r) in t.steps.iter().zip(&reports) {
        println!("edge {:?} of {}: b = {}, r = {} ({:?}, {} queries)", s.edge, s.edges, s.b, s.r, r.outcome, r.queries);
    }
    println!("R = {} (exact {})", t.value, eval_delcon(&f, &p));
}
