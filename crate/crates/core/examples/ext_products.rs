//! Higher products on Ext of k<t>/(t^3): only μ₂ and μ₃ survive.

use anick_model::model::ext_table;
use anick_model::Presentation;

fn main() {
    let p = Presentation::parse("arrows t; relations t t t").unwrap();
    for e in ext_table(&p, 8, 5) {
        let args: Vec<String> = e.parts.iter().map(|c| format!("{}^∨", c.render(&p))).collect();
        let sign = if e.sign < 0 { "-" } else { "" };
        println!("μ{}({}) = {sign}{}^∨", e.parts.len(), args.join(", "), e.product.render(&p));
    }
}
