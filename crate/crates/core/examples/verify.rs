//! Cross-checks on a quiver with a single monomial relation.

use anick_model::model::{verify_b_squared, verify_transfer_equivalence};
use anick_model::verify::{betti_vs_homology, morse_oracle, retract_identities};
use anick_model::Presentation;

fn main() {
    let p = Presentation::parse("vertices 1, 2; arrows a: 1 -> 2, b: 2 -> 1; relations a b a").unwrap();
    let reports = [
        betti_vs_homology(&p, 8, 100_000).unwrap(),
        retract_identities(&p, 6),
        morse_oracle(&p, 5).unwrap(),
        verify_transfer_equivalence(&p, 8, 4),
        verify_b_squared(&p, 8),
    ];
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status} {} ({} checked)", r.suite, r.checked);
    }
}
