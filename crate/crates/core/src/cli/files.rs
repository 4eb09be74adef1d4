use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{AlphaKind, AlphaMap, CycError};
use crate::group::MaxClassGroup;
use crate::multiplier::{B0Report, Method};
use crate::zlinalg::to_u64;

pub const GROUP_SPEC_SCHEMA: &str = "maxclass.group-spec/1";
pub const REPORT_SCHEMA: &str = "maxclass.report/1";
pub const ALPHA_SOLUTIONS_SCHEMA: &str = "maxclass.alpha-solutions/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub u: usize,
    pub v: usize,
    pub digits: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlphaSpec {
    Canonical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<u32>,
    },
    Table { entries: Vec<TableEntry> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpecFile {
    #[serde(default = "group_spec_schema")]
    pub schema: String,
    pub p: u32,
    pub n: usize,
    pub m: usize,
    pub alpha: AlphaSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn group_spec_schema() -> String {
    GROUP_SPEC_SCHEMA.to_string()
}

impl GroupSpecFile {
    /// The canonical form of `alpha`: explicit `a` for canonical maps, nonzero
    /// entries in `(u, v)` order for tables.
    pub fn from_alpha(alpha: &AlphaMap, label: Option<String>) -> Self {
        let spec = match alpha.kind() {
            AlphaKind::Canonical { a, .. } => AlphaSpec::Canonical { a: Some(*a) },
            AlphaKind::Custom => AlphaSpec::Table {
                entries: alpha
                    .entries()
                    .filter(|(_, val)| !val.is_zero())
                    .map(|((u, v), val)| TableEntry {
                        u,
                        v,
                        digits: val.digits().to_vec(),
                    })
                    .collect(),
            },
        };
        GroupSpecFile {
            schema: GROUP_SPEC_SCHEMA.to_string(),
            p: alpha.p(),
            n: alpha.n(),
            m: alpha.m(),
            alpha: spec,
            label,
        }
    }

    pub fn to_alpha(&self) -> Result<AlphaMap, CycError> {
        if self.schema != GROUP_SPEC_SCHEMA {
            return Err(CycError::BadParameters(format!("unknown schema {:?}", self.schema)));
        }
        match &self.alpha {
            AlphaSpec::Canonical { a: None } => AlphaMap::canonical(self.p, self.m, self.n),
            AlphaSpec::Canonical { a: Some(a) } => AlphaMap::canonical_with_a(self.p, self.m, self.n, *a),
            AlphaSpec::Table { entries } => {
                let target = crate::cyclotomic::CycRing::new(self.p, self.n.saturating_sub(self.m))?;
                let mut vals = Vec::with_capacity(entries.len());
                for e in entries {
                    vals.push(((e.u, e.v), target.from_digits(e.digits.clone())?));
                }
                AlphaMap::from_table(self.p, self.m, self.n, vals)
            }
        }
    }

    pub fn canonicalize(&self) -> Result<Self, CycError> {
        Ok(Self::from_alpha(&self.to_alpha()?, self.label.clone()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub p: u32,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    pub method: String,
    pub invariants: Vec<u64>,
    pub rank: usize,
    pub exponent: u64,
    /// Degree of commutativity.
    pub doc: usize,
    pub theorem1: bool,
    pub agree_flags: BTreeMap<String, bool>,
    pub elapsed_ms: u64,
}

impl ReportRecord {
    pub fn from_report(r: &B0Report, g: &MaxClassGroup) -> Self {
        ReportRecord {
            p: r.p,
            n: r.n,
            m: r.m,
            a: r.a,
            method: r.method.as_str().to_string(),
            invariants: r.invariants.torsion.iter().map(to_u64).collect(),
            rank: r.rank(),
            exponent: to_u64(&r.exponent()),
            doc: g.degree_of_commutativity(),
            theorem1: g.theorem1_predicate(),
            agree_flags: BTreeMap::new(),
            elapsed_ms: r.elapsed.as_millis() as u64,
        }
    }

    pub fn method(&self) -> Option<Method> {
        match self.method.as_str() {
            "formula" => Some(Method::Formula),
            "coinvariants" => Some(Method::Coinvariants),
            "oracle" => Some(Method::Oracle),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedMethod {
    pub method: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema: String,
    pub records: Vec<ReportRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedMethod>,
}

impl ReportFile {
    pub fn new(records: Vec<ReportRecord>) -> Self {
        ReportFile {
            schema: REPORT_SCHEMA.to_string(),
            records,
            skipped: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaSolutionRecord {
    pub order: u64,
    pub surjective: bool,
    pub spec: GroupSpecFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaSolutionsFile {
    pub schema: String,
    pub p: u32,
    pub m: usize,
    pub n: usize,
    /// Number of maps in the solution group, as a decimal string.
    pub count: String,
    pub basis: Vec<AlphaSolutionRecord>,
    /// A surjective map, when one exists but no basis element is surjective.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surjective_example: Option<GroupSpecFile>,
}

/// One row of the grid comparison table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub x: usize,
    pub y: usize,
    pub formula_invariants: String,
    pub computed_invariants: String,
    pub agree: bool,
}

pub fn format_invariants(f: &[u64]) -> String {
    let inner: Vec<String> = f.iter().map(|d| d.to_string()).collect();
    format!("[{}]", inner.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_spec_round_trip() {
        let alpha = AlphaMap::canonical(5, 4, 6).unwrap();
        let spec = GroupSpecFile::from_alpha(&alpha, Some("example".into()));
        let text = spec.to_json();
        let back = GroupSpecFile::from_json(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.canonicalize().unwrap().to_json(), text);
        assert_eq!(back.to_alpha().unwrap(), alpha);
    }

    #[test]
    fn table_specs() {
        let alpha = AlphaMap::canonical(5, 4, 6).unwrap().as_custom();
        let spec = GroupSpecFile::from_alpha(&alpha, None);
        assert!(matches!(spec.alpha, AlphaSpec::Table { .. }));
        assert_eq!(spec.to_alpha().unwrap().table(), alpha.table());
        let text = r#"{"p": 5, "n": 6, "m": 4, "alpha": {"kind": "canonical"}}"#;
        let parsed = GroupSpecFile::from_json(text).unwrap();
        assert_eq!(parsed.canonicalize().unwrap().alpha, AlphaSpec::Canonical { a: Some(2) });
    }

    #[test]
    fn invariants_are_plain_integers() {
        assert_eq!(format_invariants(&[5, 25]), "[5,25]");
        assert_eq!(format_invariants(&[]), "[]");
    }
}
