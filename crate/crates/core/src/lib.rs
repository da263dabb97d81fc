//! Reciprocal-reviewer nomination: pick one co-author per paper to serve
//! as reviewer so that the expected number of desk-rejected papers is
//! minimal, optionally with a hard or soft cap on how many papers may
//! nominate the same author.
//!
//! * [`greedy`]: exact per-paper argmin for the uncapped problem.
//! * [`flow`]: exact hard-cap solver via minimum-cost circulation.
//! * [`lp`]: bounded-variable simplex and the relaxed hard-cap program.
//! * [`soft`]: epigraph LP, rounding, and an exact soft-cap flow solver.
//! * [`baselines`]: sequential random and greedy heuristics.
//! * [`oracle`]: brute-force enumeration for verification.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod flow;
pub mod generate;
pub mod greedy;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod soft;

pub use error::{Error, Result};
pub use model::{Assignment, FractionalSolution, Instance, Solution, SolveReport, Status, Variant};
