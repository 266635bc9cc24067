//! Conflict-driven nogood learning for ground normal logic programs.
//!
//! The solver searches for an answer set by unit propagation over the
//! completion nogoods of a program, records loop nogoods for unfounded
//! sets, and learns First-UIP nogoods from conflicts. Which antecedent is
//! used at each resolution step is chosen by a pluggable [`Heuristic`].

pub mod analyze;
pub mod bench;
pub mod cli;
pub mod error;
pub mod heuristics;
pub mod instance;
pub mod lit;
pub mod nogoods;
pub mod oracle;
pub mod program;
pub mod propagate;
pub mod solve;
pub mod stats;
pub mod trail;
pub mod ufs;

pub use analyze::{antecedents, export_conflict_graph, ConflictGraph, ConflictResult};
pub use error::{Error, Result};
pub use heuristics::Heuristic;
pub use instance::Instance;
pub use lit::{Lit, Var};
pub use nogoods::{Nogood, NogoodId, NogoodStore, Origin};
pub use program::{parse_program, AtomId, BodyId, Program, ProgramBuilder};
pub use solve::{
    check_model, solve, DeletionPolicy, Limit, Observer, Propagation, RestartPolicy, SolveOutcome, Solver,
    SolverConfig, Status,
};
pub use stats::ConflictStats;
pub use trail::{Antecedent, Trail};
