//! Error and validation-report types.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One structural defect found while validating a space or instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    EmptyDomain {
        var: usize,
    },
    NegativeProb {
        var: usize,
        value: u32,
    },
    UnnormalizedProbs {
        var: usize,
        sum: f64,
    },
    EmptyEvent {
        event: usize,
    },
    VariableOutOfRange {
        event: usize,
        var: u32,
    },
    ValueOutOfRange {
        event: usize,
        var: u32,
        value: u32,
    },
    /// Two values demanded for one variable: a contradictory atomic event.
    ContradictoryEvent {
        event: usize,
        var: u32,
    },
    /// Lopsidependent pair that does not disagree on a shared variable,
    /// or a recorded relation entry inconsistent with the events.
    InconsistentLopsidependency {
        first: usize,
        second: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyDomain { var } => write!(f, "variable {var} has an empty domain"),
            Violation::NegativeProb { var, value } => {
                write!(f, "variable {var} value {value} has a negative probability")
            }
            Violation::UnnormalizedProbs { var, sum } => {
                write!(f, "variable {var} probabilities sum to {sum}, not 1")
            }
            Violation::EmptyEvent { event } => write!(f, "event {event} is empty"),
            Violation::VariableOutOfRange { event, var } => {
                write!(f, "event {event} uses out-of-range variable {var}")
            }
            Violation::ValueOutOfRange { event, var, value } => {
                write!(
                    f,
                    "event {event} demands out-of-range value {value} on variable {var}"
                )
            }
            Violation::ContradictoryEvent { event, var } => {
                write!(f, "event {event} demands two values for variable {var}")
            }
            Violation::InconsistentLopsidependency { first, second } => {
                write!(
                    f,
                    "lopsidependency between events {first} and {second} is inconsistent"
                )
            }
        }
    }
}

/// Outcome of validating an instance; empty means well-formed.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for ValidationReport {}

/// Structural error from evaluating raw terms against an assignment/space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermError {
    VariableOutOfRange { var: u32 },
    ValueOutOfRange { var: u32, value: u32 },
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::VariableOutOfRange { var } => write!(f, "variable {var} out of range"),
            TermError::ValueOutOfRange { var, value } => {
                write!(f, "value {value} out of range for variable {var}")
            }
        }
    }
}

impl core::error::Error for TermError {}

/// Errors from criterion evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriterionError {
    /// Exact-kind subset enumeration exceeded the configured cap.
    EnumerationCapExceeded {
        cap: u64,
    },
    EventOutOfRange {
        event: usize,
    },
    MuLengthMismatch {
        expected: usize,
        got: usize,
    },
    InvalidMu {
        event: usize,
    },
}

impl fmt::Display for CriterionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriterionError::EnumerationCapExceeded { cap } => {
                write!(f, "subset enumeration exceeded cap of {cap}")
            }
            CriterionError::EventOutOfRange { event } => write!(f, "event {event} out of range"),
            CriterionError::MuLengthMismatch { expected, got } => {
                write!(
                    f,
                    "mu vector has {got} entries, instance has {expected} events"
                )
            }
            CriterionError::InvalidMu { event } => {
                write!(f, "mu entry for event {event} is negative or not finite")
            }
        }
    }
}

impl core::error::Error for CriterionError {}

/// Contract violations while running the resampling algorithm.
#[derive(Clone, Debug, PartialEq)]
pub enum RunError {
    /// The resample rule returned an event that is not currently true.
    RuleContract {
        step: u64,
        event: usize,
    },
    Criterion(CriterionError),
    Term(TermError),
    /// Precondition failure described by a message.
    Precondition(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::RuleContract { step, event } => {
                write!(
                    f,
                    "rule selected event {event} at step {step}, but it is not true"
                )
            }
            RunError::Criterion(e) => write!(f, "{e}"),
            RunError::Term(e) => write!(f, "{e}"),
            RunError::Precondition(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for RunError {}

impl From<CriterionError> for RunError {
    fn from(e: CriterionError) -> Self {
        RunError::Criterion(e)
    }
}

impl From<TermError> for RunError {
    fn from(e: TermError) -> Self {
        RunError::Term(e)
    }
}
