//! Bar construction, Morse matching, homotopy retract and transfer.

pub mod graph;
pub mod homology;
pub mod matching;
pub mod retract;
pub mod term;
pub mod transfer;

pub use graph::{build_morse_graph, MorseGraph};
pub use homology::homology_dims;
pub use matching::{classify, Matched};
pub use retract::{closed_form, homotopy_h, inclusion_i, projection_p, Retract};
pub use term::{bar_differential, deconcatenation, is_attached, BarElement, BarTerm};
pub use transfer::{transfer_delta_n, Transfer};
