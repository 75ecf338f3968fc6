//! Descent of totally decomposable algebras with orthogonal involution from a
//! quadratic extension K/F to F, with verdicts and re-checkable certificates.

mod cert;
mod example;
mod insep;
mod sep;

pub use cert::{verify_certificate, CertAlgebra, DescentCertificate, ExtensionSpec, FactorWitness, SCHEMA};
pub use example::{paper_counterexample, phi_s_construct, square_class_meets_base, CounterexampleReport, PhiS};
pub use insep::{insep_descent_construct, insep_descent_test, insep_pfister_descent_test, insep_violation};
pub use sep::{k_derivative, quat_sep_descent, reslot, sep_descent, slot_convert};

use serde::{Deserialize, Serialize};

/// Largest supported number of quaternion factors.
pub const MAX_FACTORS: usize = 4;

/// A failed necessary condition, with the data needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// The corestriction to F is not split; `invariants` is its invariant vector.
    CorNonsplit { invariants: Vec<String> },
    /// No element of the Alt line squares into F: `residual` is not a square in F.
    SquareClass { slot: String, residual: String },
    /// The product of the slots in `subset` is not in F.
    InseparableSlot { subset: Vec<usize>, product: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Descends { certificate: Box<DescentCertificate> },
    NoDescent { obstruction: Obstruction },
    Unknown { stage: String, bound: usize },
}

impl Verdict {
    pub fn descends(&self) -> bool {
        matches!(self, Verdict::Descends { .. })
    }

    pub fn certificate(&self) -> Option<&DescentCertificate> {
        match self {
            Verdict::Descends { certificate } => Some(certificate),
            _ => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Descends { .. } => 0,
            Verdict::NoDescent { .. } => 1,
            Verdict::Unknown { .. } => 2,
        }
    }
}
