//! Certificates for the root-of-unity gadgets.

use netrel::locus::verify_unity;

fn main() {
    for k in 5..=9 {
        let c = verify_unity(k).unwrap();
        println!(
            "k = {k}: {} edges, gcd(R, p^k - 1) = {}, {:.6} ≤ |ŷ| ≤ {:.6} at {} bits, holds: {}",
            c.edges, c.gcd, c.yhat_abs_lower, c.yhat_abs_upper, c.precision, c.holds()
        );
    }
}
