//! Tree-level Møller scattering (e⁻e⁻ → e⁻e⁻) in 2+1 dimensional
//! electrodynamics with a Podolsky higher-derivative term.
//!
//! The crate is organised bottom-up:
//!
//! * [`kinematics`]: vectors, Mandelstam invariants, CM frame.
//! * [`clifford`]: 2×2 gamma matrices, two independent trace evaluators,
//!   spin projectors and spinors.
//! * [`amplitude`]: the `A`, `B`, `C` traces and the propagator bracket.
//! * [`cross_section`]: every differential cross-section formula, each kept
//!   separate and tagged with a [`FormulaId`].
//! * [`report`]: consistency audits, scenario tables and figure data.
//! * [`verify`]: the named invariant suite run by `moller verify`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
pub mod clifford;
pub mod cross_section;
pub mod error;
pub mod kinematics;
pub mod quadrature;
pub mod report;
pub mod verify;

pub use amplitude::{PhysicalParams, TraceSource, TraceTriple};
pub use clifford::{gamma_rep, ComplexMat2, GammaFactor, GammaRep};
pub use cross_section::{FormulaId, RegimeTag, XsecSample};
pub use error::{Error, Result};
pub use kinematics::{CmMomenta, CmState, LorentzVec3, MandelstamSet};
pub use report::{ConsistencyRecord, Figure1Dataset, GridSpec, ScenarioRow, Verdict};
pub use verify::{CheckResult, VerifyOptions};
