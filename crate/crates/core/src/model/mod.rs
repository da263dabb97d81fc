//! Problem instances, nominations and the objective evaluators every
//! solver reports through.

mod assignment;
mod instance;
mod report;

pub use assignment::{
    author_loads, basic_objective, fractional_loads, fractional_objective, soft_objective, soft_objective_with,
    Assignment, FractionalSolution, SoftValue,
};
pub use instance::{Instance, Violation, FORMAT_VERSION};
pub use report::{Solution, SolveReport, Status, Variant};

/// Absolute tolerance used when comparing objective values in reports.
pub const REPORT_TOLERANCE: f64 = 1e-9;
