//! Exact verification machinery for the Zassenhaus conjecture (ZC1) on small
//! finite groups: partial-augmentation constraint systems built from induced
//! characters of abelian normal subgroups, solved by exhaustive integer
//! enumeration.

pub mod abelian;
pub mod catalog;
pub mod character;
pub mod constraints;
pub mod cyclotomic;
pub mod oracle;
pub mod solver;
pub mod verify;
pub mod group;

pub use cyclotomic::{CycNumber, Rat};
pub use group::{ConjugacyData, GroupTable, Subgroup};
pub use verify::{VerificationReport, Verdict, Verifier, VerifyConfig};
