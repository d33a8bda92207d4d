//! Run statistics as key/value lines or JSON.

use std::fmt::Write as _;
use std::time::Duration;

use lff_core::learner::RunStats;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCounts {
    pub specialisation: usize,
    pub generalisation: usize,
    pub redundancy: usize,
}

/// Seconds as floats, so the document reads the same in both forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub schema: u32,
    pub task: String,
    pub musp_enabled: bool,
    pub solved: bool,
    pub programs_generated: usize,
    pub constraints_by_kind: ConstraintCounts,
    pub musps_found: usize,
    pub musp_capped: usize,
    pub total_time: f64,
    pub musp_time: f64,
    pub generate_time: f64,
    pub test_time: f64,
    pub solution_size: Option<usize>,
    pub last_size: usize,
    pub timed_out: bool,
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

impl StatsDoc {
    pub fn new(task: &str, musp_enabled: bool, s: &RunStats) -> StatsDoc {
        StatsDoc {
            schema: SCHEMA,
            task: task.to_string(),
            musp_enabled,
            solved: s.solution_size.is_some(),
            programs_generated: s.programs_generated,
            constraints_by_kind: ConstraintCounts {
                specialisation: s.specialisation_constraints,
                generalisation: s.generalisation_constraints,
                redundancy: s.redundancy_constraints,
            },
            musps_found: s.musps_found,
            musp_capped: s.musp_capped,
            total_time: secs(s.total_time),
            musp_time: secs(s.musp_time),
            generate_time: secs(s.generate_time),
            test_time: secs(s.test_time),
            solution_size: s.solution_size,
            last_size: s.last_size,
            timed_out: s.timed_out,
        }
    }

    /// One `key: value` line per field, nested keys joined with dots.
    pub fn to_kv(&self) -> String {
        let v = serde_json::to_value(self).expect("stats serialise");
        let mut out = String::new();
        flatten("", &v, &mut out);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialise")
    }

    /// JSON when the path ends in `.json`, key/value lines otherwise.
    pub fn render_for(&self, path: &std::path::Path) -> String {
        if path.extension().is_some_and(|e| e == "json") {
            self.to_json() + "\n"
        } else {
            self.to_kv()
        }
    }

    /// Fields that do not depend on timing.
    pub fn untimed(&self) -> StatsDoc {
        StatsDoc { total_time: 0.0, musp_time: 0.0, generate_time: 0.0, test_time: 0.0, ..self.clone() }
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut String) {
    match v {
        serde_json::Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        serde_json::Value::String(s) => {
            let _ = writeln!(out, "{prefix}: {s}");
        }
        serde_json::Value::Null => {
            let _ = writeln!(out, "{prefix}: none");
        }
        other => {
            let _ = writeln!(out, "{prefix}: {other}");
        }
    }
}

/// Reads back a key/value document.
pub fn parse_kv(src: &str) -> Result<StatsDoc, String> {
    let mut m = serde_json::Map::new();
    for line in src.lines().filter(|l| !l.trim().is_empty()) {
        let (k, v) = line.split_once(": ").ok_or_else(|| format!("bad line `{line}`"))?;
        let val = match v {
            "none" => serde_json::Value::Null,
            _ => serde_json::from_str(v).unwrap_or_else(|_| serde_json::Value::String(v.to_string())),
        };
        let mut parts: Vec<&str> = k.split('.').collect();
        let last = parts.pop().unwrap_or(k);
        let mut obj = &mut m;
        for p in parts {
            obj = obj
                .entry(p)
                .or_insert_with(|| serde_json::Value::Object(Default::default()))
                .as_object_mut()
                .ok_or_else(|| format!("`{k}` nests under a value"))?;
        }
        obj.insert(last.to_string(), val);
    }
    serde_json::from_value(serde_json::Value::Object(m)).map_err(|e| e.to_string())
}
