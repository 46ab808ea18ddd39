//! Chain counts agree with the homology of the normalized bar complex.

use anick_model::anick::betti;
use anick_model::barmorse::homology::homology_dims;
use anick_model::Presentation;

fn main() {
    let p = Presentation::parse("arrows x, y; relations x y x").unwrap();
    let w = 8;
    let chains = betti(&p, w);
    let homology = homology_dims(&p, w).unwrap();
    println!("n  w  chains  homology");
    for ((n, wt), count) in chains.iter() {
        println!("{n:<2} {wt:<2} {count:<7} {}", homology.get(n, wt));
    }
    assert_eq!(chains, homology);
}
