use std::fmt;

use crate::model::TaskId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A probability or rate outside the domain of a distribution function.
    #[error("{function}: argument {value} is outside the domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid instance:\n{}", render_issues(.0))]
    Invalid(Vec<ValidationIssue>),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// One or more tasks cannot fit into any station at the requested cycle time.
    #[error("cycle time {cycle} is shorter than the adjusted time of {}", render_tasks(.tasks))]
    Infeasible { cycle: f64, tasks: Vec<(TaskId, f64)> },

    #[error("{0}")]
    Config(String),
}

fn render_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  - {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn render_tasks(tasks: &[(TaskId, f64)]) -> String {
    tasks
        .iter()
        .map(|(id, t)| format!("task {id} ({t:.4})"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A single instance-invariant violation reported by [`crate::model::Instance::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    DuplicateId(TaskId),
    /// Task ids must run 1..=n in order; `found` sits where `expected` should.
    NonContiguousId { position: usize, expected: TaskId, found: TaskId },
    DanglingEdge { from: TaskId, to: TaskId, missing: TaskId },
    SelfLoop(TaskId),
    /// A witness cycle, first id repeated at the end.
    Cycle(Vec<TaskId>),
    NonPositiveLotSize(u64),
    BadTaskParameter { task: TaskId, field: &'static str, value: f64 },
    NoTasks,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::DuplicateId(id) => write!(f, "duplicate task id {id}"),
            ValidationIssue::NonContiguousId { position, expected, found } => write!(
                f,
                "task at position {position} has id {found}, expected {expected} (ids must be 1..=n)"
            ),
            ValidationIssue::DanglingEdge { from, to, missing } => {
                write!(f, "edge {from} -> {to} references unknown task {missing}")
            }
            ValidationIssue::SelfLoop(id) => write!(f, "edge {id} -> {id} is a self loop"),
            ValidationIssue::Cycle(ids) => {
                let path = ids
                    .iter()
                    .map(|id| id.to_string())
                    .collect::<Vec<_>>()
                    .join("→");
                write!(f, "precedence cycle {path}")
            }
            ValidationIssue::NonPositiveLotSize(l) => write!(f, "lot size must be >= 1, got {l}"),
            ValidationIssue::BadTaskParameter { task, field, value } => {
                write!(f, "task {task}: {field} = {value} is out of range")
            }
            ValidationIssue::NoTasks => write!(f, "instance has no tasks"),
        }
    }
}
