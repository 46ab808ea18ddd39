//! Verification reports shared by the checking sweeps.

/// One failing instance, already rendered with the presentation's names.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Counterexample {
    pub chain: String,
    pub arity: Option<usize>,
    pub term: String,
    pub coefficient: i64,
}

impl std::fmt::Display for Counterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "chain {}", self.chain)?;
        if let Some(n) = self.arity {
            write!(f, " arity {n}")?;
        }
        write!(f, ": residual {:+} at {}", self.coefficient, self.term)
    }
}

/// Outcome of a verification sweep: passes iff no counterexample was found.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Report {
    pub suite: String,
    pub checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report {
            suite: suite.to_string(),
            checked: 0,
            counterexamples: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}
