//! Outcome of a bounded search.

use std::fmt;

/// A bounded check either holds up to its bound, fails with a witness, or
/// is inconclusive up to its bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds { bound: u32 },
    Fails { witness: W, bound: u32 },
    UnknownUpTo { bound: u32 },
}

impl<W> Verdict<W> {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn bound(&self) -> u32 {
        match self {
            Verdict::Holds { bound } | Verdict::Fails { bound, .. } | Verdict::UnknownUpTo { bound } => *bound,
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Fails { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "Holds",
            Verdict::Fails { .. } => "Fails",
            Verdict::UnknownUpTo { .. } => "UnknownUpTo",
        }
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds { bound } => Verdict::Holds { bound },
            Verdict::Fails { witness, bound } => Verdict::Fails { witness: f(witness), bound },
            Verdict::UnknownUpTo { bound } => Verdict::UnknownUpTo { bound },
        }
    }
}

impl<W> fmt::Display for Verdict<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (bound {})", self.status(), self.bound())
    }
}
