//! Tensor words of chains, the values of higher coproducts and of `b`.

use crate::anick::Chain;
use crate::lincomb::LinComb;
use crate::presentation::Presentation;

pub type TensorElement = LinComb<Vec<Chain>>;

pub fn render_tensor(parts: &[Chain], p: &Presentation) -> String {
    parts
        .iter()
        .map(|c| c.render(p))
        .collect::<Vec<_>>()
        .join("⊗")
}

pub fn render_tensor_element(e: &TensorElement, p: &Presentation) -> String {
    if e.is_zero() {
        return "0".into();
    }
    e.iter()
        .map(|(parts, c)| {
            let s = render_tensor(parts, p);
            match c {
                1 => format!("+{s}"),
                -1 => format!("-{s}"),
                c => format!("{c:+}·{s}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
