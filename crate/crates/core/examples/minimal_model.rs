//! Differential of the minimal model on k<t>/(t^4), and b² = 0 with and
//! without a wrong sign rule.

use anick_model::anick::enumerate_chains;
use anick_model::model::{differential_b, sabotaged_b_sign, verify_b_squared, verify_b_squared_with};
use anick_model::tensor::render_tensor_element;
use anick_model::Presentation;

fn main() {
    let p = Presentation::parse("arrows t; relations t t t t").unwrap();
    for c in enumerate_chains(&p, 9) {
        let b = differential_b(&c, &p);
        println!("b {} = {}", c.render(&p), render_tensor_element(&b, &p));
    }
    println!("{} b² residuals", verify_b_squared(&p, 12).counterexamples.len());
    let bad = verify_b_squared_with(&p, 12, sabotaged_b_sign);
    if let Some(first) = bad.counterexamples.first() {
        println!("wrong sign rule: {first}");
    }
}
