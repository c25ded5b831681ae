//! Exact verification of the automorphism group of a family of compact
//! complex 3-folds fibered over the projective line with Hopf surface fibers.
//!
//! All arithmetic is exact, in cyclotomic fields over `ℚ`.

pub mod autgrp;
pub mod bundle;
pub mod cyclo;
pub mod expr;
pub mod family;
pub mod hopf;
pub mod moebius;
pub mod poly;
pub mod report;
pub mod sample;
pub mod suite;

pub use autgrp::{AnsatzSolution, AutClass, AutElement, AutError, ComponentGroup};
pub use bundle::{BundleError, BundleMap, ChartMap, GlueStatus, ManifoldSpec, Obstruction, SpecError, Transition};
pub use cyclo::{CycloCtx, CycloError, CycloNum, Rational};
pub use family::{FamilyError, FamilyMap};
pub use hopf::HopfClass;
pub use moebius::{Moebius, MoebiusError, ProjPoint, SubgroupLabel};
pub use poly::{EpsPoly, LaurentPoly, PolyError, Var};
pub use report::{CheckResult, Report, Status};
