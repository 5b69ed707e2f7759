//! Structured result documents and their TSV rendering.

use std::collections::BTreeMap;
use std::fmt::Write;

use idm_core::model::WModel;
use idm_core::precedence::SeparationCertificate;
use idm_core::probability::{format_rational, round_half_up, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_FORMAT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub w_y: Vec<String>,
    pub w_z: Vec<String>,
    pub closure_y: Vec<String>,
    pub closure_z: Vec<String>,
}

impl CertificateJson {
    pub fn new(m: &WModel, c: &SeparationCertificate) -> Self {
        CertificateJson {
            w_y: m.agent_names(c.splitting.w_y),
            w_z: m.agent_names(c.splitting.w_z),
            closure_y: m.agent_names(c.closure_y),
            closure_z: m.agent_names(c.closure_z),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }
}

/// Display column (3 decimals, half-up) followed by the exact value.
pub fn prob_cells(p: &Rational) -> [String; 2] {
    [round_half_up(p, 3), format_rational(p)]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format_version: u32,
    pub command: String,
    pub model: Option<String>,
    pub query: BTreeMap<String, Value>,
    pub verdict: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub timing_ms: u64,
}

impl ReportFile {
    pub fn new(command: &str, model: Option<&WModel>) -> Self {
        ReportFile {
            format_version: REPORT_FORMAT_VERSION,
            command: command.into(),
            model: model.map(|m| m.name().to_string()),
            query: BTreeMap::new(),
            verdict: String::new(),
            exit_code: EXIT_OK,
            certificate: None,
            tables: Vec::new(),
            counterexamples: Vec::new(),
            details: Value::Null,
            timing_ms: 0,
        }
    }

    pub fn query(mut self, key: &str, v: impl Serialize) -> Self {
        self.query.insert(key.into(), serde_json::to_value(v).expect("serializable"));
        self
    }

    pub fn verdict(mut self, verdict: impl Into<String>, exit_code: i32) -> Self {
        self.verdict = verdict.into();
        self.exit_code = exit_code;
        self
    }

    /// Header comments, then each table as a tab-separated block.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command\t{}", self.command);
        let _ = writeln!(out, "# verdict\t{}", self.verdict);
        if let Some(c) = &self.certificate {
            let _ = writeln!(out, "# splitting\tW_Y={}\tW_Z={}", c.w_y.join(","), c.w_z.join(","));
            let _ = writeln!(out, "# closures\t{}\t{}", c.closure_y.join(","), c.closure_z.join(","));
        }
        for c in &self.counterexamples {
            let _ = writeln!(out, "# counterexample\t{c}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n# table\t{}", t.name);
            let _ = writeln!(out, "{}", t.columns.join("\t"));
            for r in &t.rows {
                let _ = writeln!(out, "{}", r.join("\t"));
            }
        }
        out
    }
}
