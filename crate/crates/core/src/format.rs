//! The `.alb` instance text format.
//!
//! ```text
//! # comment
//! name: hoffman9
//! lot_size: 50
//! provenance: reconstructed        (optional)
//! reference: 0.84 0.71 ...         (optional, published adjusted times)
//! tasks:
//! # id mean_proc sd_proc mean_dismantle sd_dismantle mean_defects_per_lot
//! 1 0.5 0.1 1.2 0.2 10
//! edges:
//! 1 -> 2
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Instance, TaskId, TaskSpec};
use crate::stats::NormalParams;

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Tasks,
    Edges,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parse instance text without validating the result.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut name: Option<String> = None;
    let mut lot_size: Option<u64> = None;
    let mut provenance: Option<String> = None;
    let mut reference: Option<(usize, Vec<f64>)> = None;
    let mut tasks = Vec::new();
    let mut edges = std::collections::BTreeSet::new();
    let mut section = Section::Header;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }

        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            let value = value.trim();
            let once = |present: bool| {
                if present {
                    Err(parse_err(line_no, format!("duplicate header `{key}`")))
                } else {
                    Ok(())
                }
            };
            match key {
                "name" => {
                    once(name.is_some())?;
                    name = Some(value.to_string());
                }
                "lot_size" => {
                    once(lot_size.is_some())?;
                    let l = value
                        .parse::<u64>()
                        .map_err(|_| parse_err(line_no, format!("lot_size `{value}` is not a nonnegative integer")))?;
                    lot_size = Some(l);
                }
                "provenance" => {
                    once(provenance.is_some())?;
                    provenance = Some(value.to_string());
                }
                "reference" => {
                    once(reference.is_some())?;
                    let values = value
                        .split_whitespace()
                        .map(|v| {
                            v.parse::<f64>()
                                .map_err(|_| parse_err(line_no, format!("reference value `{v}` is not a number")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    reference = Some((line_no, values));
                }
                "tasks" | "edges" => {
                    if !value.is_empty() {
                        return Err(parse_err(line_no, format!("`{key}:` takes no value")));
                    }
                    section = if key == "tasks" { Section::Tasks } else { Section::Edges };
                }
                other => return Err(parse_err(line_no, format!("unknown header key `{other}`"))),
            }
            continue;
        }

        match section {
            Section::Header => {
                return Err(parse_err(line_no, "expected `key: value` or a `tasks:`/`edges:` block"));
            }
            Section::Tasks => tasks.push(parse_task(line_no, line)?),
            Section::Edges => {
                edges.insert(parse_edge(line_no, line)?);
            }
        }
    }

    let name = name.ok_or_else(|| parse_err(last_line, "missing `name:` header"))?;
    let lot_size = lot_size.ok_or_else(|| parse_err(last_line, "missing `lot_size:` header"))?;
    let reference_adjusted = match reference {
        Some((line_no, values)) if values.len() != tasks.len() => {
            return Err(parse_err(
                line_no,
                format!("reference lists {} values for {} tasks", values.len(), tasks.len()),
            ))
        }
        Some((_, values)) => Some(values),
        None => None,
    };

    Ok(Instance {
        name,
        provenance,
        reference_adjusted,
        lot_size,
        tasks,
        edges,
    })
}

fn parse_task(line_no: usize, line: &str) -> Result<TaskSpec> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(parse_err(
            line_no,
            format!("task line needs 6 fields (id mean_proc sd_proc mean_dismantle sd_dismantle mean_defects), got {}", fields.len()),
        ));
    }
    let id: TaskId = fields[0]
        .parse()
        .map_err(|_| parse_err(line_no, format!("task id `{}` is not a positive integer", fields[0])))?;
    let mut nums = [0.0; 5];
    for (slot, field) in nums.iter_mut().zip(&fields[1..]) {
        *slot = field
            .parse()
            .map_err(|_| parse_err(line_no, format!("`{field}` is not a number")))?;
    }
    Ok(TaskSpec::new(
        id,
        NormalParams::new(nums[0], nums[1]),
        NormalParams::new(nums[2], nums[3]),
        nums[4],
    ))
}

fn parse_edge(line_no: usize, line: &str) -> Result<(TaskId, TaskId)> {
    let (a, b) = line
        .split_once("->")
        .ok_or_else(|| parse_err(line_no, format!("expected `i -> j`, got `{line}`")))?;
    let id = |s: &str| {
        s.trim()
            .parse::<TaskId>()
            .map_err(|_| parse_err(line_no, format!("`{}` is not a task id", s.trim())))
    };
    Ok((id(a)?, id(b)?))
}

/// Parse and validate.
pub fn load_instance(text: &str) -> Result<Instance> {
    parse_instance(text)?.validate()
}

pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", instance.name);
    let _ = writeln!(out, "lot_size: {}", instance.lot_size);
    if let Some(p) = &instance.provenance {
        let _ = writeln!(out, "provenance: {p}");
    }
    if let Some(r) = &instance.reference_adjusted {
        let values: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "reference: {}", values.join(" "));
    }
    out.push_str("tasks:\n");
    for t in &instance.tasks {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            t.id, t.proc.mean, t.proc.sd, t.dismantle.mean, t.dismantle.sd, t.mean_defects_per_lot
        );
    }
    out.push_str("edges:\n");
    for (a, b) in &instance.edges {
        let _ = writeln!(out, "{a} -> {b}");
    }
    out
}
