//! Anick chains of k<t>/(t^4), with interlace indices and overlapping positions.

use anick_model::anick::{enumerate_chains, overlapping_positions};
use anick_model::Presentation;

fn main() {
    let p = Presentation::parse("arrows t; relations t t t t").unwrap();
    for c in enumerate_chains(&p, 9) {
        let (a, b) = c.interlace();
        let o = overlapping_positions(&c);
        println!(
            "{:<16} len={} wt={} a={a:?} b={b:?} overlapping={:?} dual={:?}",
            c.render(&p),
            c.length(),
            c.weight(),
            o.overlapping,
            o.dual
        );
    }
}
