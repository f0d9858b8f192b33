//! Exact computational toolkit for finitely generated metabelian groups:
//! Smith normal form with unimodular witnesses, divisible-vector groups
//! and their two-generated overgroups, wreath-product embeddings, rigid
//! p-adic series systems, and unitriangular root extraction.

pub mod arith;
pub mod dvec;
pub mod fgab;
pub mod hall;
pub mod pqr;
pub mod rigid;
pub mod snf;
pub mod unitriangular;
pub mod verify;
pub mod wreath;

pub use arith::{ArithError, LocalizedRational, PrimeSet, Rational};
pub use dvec::{DVector, GWord, SElement};
pub use fgab::{OrdersSpec, PhiOrderInfo, SplitGroup};
pub use hall::{FlaggedGeneratingSet, HallCertificate};
pub use pqr::PqrSpec;
pub use rigid::{DigitStream, RigidSystemSpec};
pub use snf::{FgAbelianGroup, IntegerMatrix};
pub use unitriangular::UnitriangularMatrix;
pub use verify::{run_suite, CaseResult, Scale, VerificationReport};
pub use wreath::WreathElement;
