//! Influence analysis over labeled transition systems.
//!
//! A program (either written in a small C-like language or given directly as
//! an Aldebaran `.aut` file) is turned into an LTS whose labels record which
//! variables are tested, asserted and assigned. For every reachable state the
//! analysis decides which variables may still influence the property of
//! interest by resolving a projected boolean equation system on the fly.
//!
//! ```
//! use influence::{frontend, analysis, pbes::IaVariant};
//!
//! let lts = frontend::compile("int x, y; L0: while (x > 0) { L1: y = x; } L2:").unwrap();
//! let d = analysis::influence_analysis(&lts, &IaVariant::Ia1).unwrap();
//! assert_eq!(d.get(0).unwrap().len(), 1);
//! ```

pub mod analysis;
pub mod frontend;
pub mod lts;
pub mod pbes;
pub mod solver;

pub use analysis::{AnnotationMap, MatchingTable};
pub use lts::{ActionLabel, Lts, StateId, VarId};
pub use pbes::{BesNodeKey, IaVariant};
pub use solver::{Diagnostic, SolverStore};
