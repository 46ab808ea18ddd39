//! Hochschild cohomology of k<t>/(t^2) from the small twisted complex,
//! checked against the normalized bar cochains.

use anick_model::hochschild::{check_maurer_cartan, classical_hh_dims, hh_dims};
use anick_model::Presentation;

fn main() {
    let p = Presentation::parse("arrows t; relations t t").unwrap();
    let twisted = hh_dims(&p, 4, -6..=6).unwrap();
    let classical = classical_hh_dims(&p, 4, -6..=6).unwrap();
    for ((degree, shift), dim) in twisted.iter() {
        println!("HH^{degree} weight {shift:>2}: {dim}");
    }
    assert_eq!(twisted, classical);
    println!("Maurer–Cartan: {}", check_maurer_cartan(&p, 10).passed());
}
