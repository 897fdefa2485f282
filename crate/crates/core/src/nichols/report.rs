//! Serializable results.

use serde::{Deserialize, Serialize};

use crate::scalars::{Cyc, CyclotomicField};
use crate::tensorops::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    /// `B^{top_degree+1} = 0`.
    Terminated { top_degree: usize },
    /// Stopped at the requested maximum degree.
    Cutoff { degree: usize },
    /// The next degree would exceed the memory budget; `degree` is the
    /// last one computed.
    ResourceCapped { degree: usize },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Terminated { .. } => "terminated",
            Status::Cutoff { .. } => "cutoff",
            Status::ResourceCapped { .. } => "resource_capped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedReport {
    pub name: String,
    pub rank: usize,
    pub field: String,
    /// `d_0, d_1, ...`; a terminated report ends with its first zero.
    pub dims: Vec<u64>,
    /// New relation counts for degrees `2, 3, ...`; empty for truncated
    /// algebras.
    pub new_relations: Vec<u64>,
    pub status: Status,
    pub total_dim: Option<u64>,
    pub top_degree: Option<usize>,
    pub hilbert_prefix: String,
    pub primes: Vec<u64>,
    /// Highest degree also computed in exact arithmetic (0 if none).
    pub exact_through: usize,
    pub notes: Vec<String>,
}

pub const CSV_HEADER: &str = "name,rank,rel_deg2,higher_rels,dims_prefix,total_dim,top_degree,status";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl GradedReport {
    pub fn dim(&self, m: usize) -> Option<u64> {
        self.dims.get(m).copied()
    }

    pub fn new_relations_at(&self, m: usize) -> Option<u64> {
        m.checked_sub(2).and_then(|k| self.new_relations.get(k).copied())
    }

    /// Degrees above 2 with new relations, as `degree:count`.
    pub fn higher_relations(&self) -> Vec<(usize, u64)> {
        self.new_relations.iter().enumerate().skip(1).filter(|(_, &c)| c > 0).map(|(k, &c)| (k + 2, c)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn csv_row(&self) -> String {
        let higher = self.higher_relations();
        let higher = if higher.is_empty() {
            "none".to_string()
        } else {
            higher.iter().map(|(m, c)| format!("{m}:{c}")).collect::<Vec<_>>().join(";")
        };
        let dims = self.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
        let fields = [
            csv_field(&self.name),
            self.rank.to_string(),
            self.new_relations_at(2).map_or_else(String::new, |c| c.to_string()),
            higher,
            dims,
            self.total_dim.map_or_else(|| "cutoff".to_string(), |t| t.to_string()),
            self.top_degree.map_or_else(String::new, |t| t.to_string()),
            self.status.label().to_string(),
        ];
        fields.join(",")
    }
}

/// `1 + 3t + 4t^2 + ...`
pub fn hilbert_polynomial(dims: &[u64]) -> String {
    let terms: Vec<String> = dims
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(m, &d)| match (m, d) {
            (0, _) => d.to_string(),
            (1, 1) => "t".to_string(),
            (1, _) => format!("{d}t"),
            (_, 1) => format!("t^{m}"),
            _ => format!("{d}t^{m}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub word: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub terms: Vec<Term>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDump {
    pub degree: usize,
    pub count: usize,
    pub relations: Vec<Relation>,
    pub notes: Vec<String>,
}

impl RelationDump {
    pub fn new(field: &CyclotomicField, n: usize, degree: usize, vecs: &[Vec<(u64, Cyc)>], notes: Vec<String>) -> Self {
        let relations = vecs
            .iter()
            .map(|v| Relation {
                terms: v
                    .iter()
                    .map(|(w, c)| Term { word: Word::from_index(*w, n, degree).0, coeff: field.format(c) })
                    .collect(),
                text: format_element(field, n, degree, v),
            })
            .collect();
        RelationDump { degree, count: vecs.len(), relations, notes }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dump serialises")
    }
}

/// `x0 x1 x0 x1 + x1 x0 x1 x0`, with coefficients in front of words.
pub fn format_element(field: &CyclotomicField, n: usize, degree: usize, v: &[(u64, Cyc)]) -> String {
    let mut out = String::new();
    for (k, (w, c)) in v.iter().enumerate() {
        let word = Word::from_index(*w, n, degree).to_string();
        let s = field.format(c);
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) if field.as_rational(c).is_some() => (true, rest.to_string()),
            _ => (false, s),
        };
        let body = match mag.as_str() {
            "1" => word,
            _ if field.as_rational(c).is_some() => format!("{mag} {word}"),
            _ => format!("({mag}) {word}"),
        };
        match (k, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub q: String,
    pub dims: Vec<u64>,
    pub dual_dims: Vec<u64>,
    /// Coefficients of `H_B(t) · H_{B!}(−t)` through `checked_through`.
    pub product: Vec<i64>,
    pub checked_through: usize,
    pub holds: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmokeReport {
    pub parameters: Vec<Vec<String>>,
    pub report: GradedReport,
    /// Lowest degree with a relation, if any was found.
    pub first_relation_degree: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    #[test]
    fn hilbert_text() {
        assert_eq!(hilbert_polynomial(&[1, 3, 4, 3, 1, 0]), "1 + 3t + 4t^2 + 3t^3 + t^4");
        assert_eq!(hilbert_polynomial(&[1, 1]), "1 + t");
    }

    #[test]
    fn element_text() {
        let k = CyclotomicField::new(1).unwrap();
        let v = vec![(26, k.one()), (130, k.one())];
        assert_eq!(format_element(&k, 5, 4, &v), "x0 x1 x0 x1 + x1 x0 x1 x0");
        let v = vec![(1, k.from_i64(-1)), (2, k.rational(1, 2))];
        assert_eq!(format_element(&k, 2, 2, &v), "-x0 x1 + 1/2 x1 x0");
    }

    #[test]
    fn csv_columns() {
        let r = GradedReport {
            name: "fk3".into(),
            rank: 3,
            field: "Q".into(),
            dims: vec![1, 3, 4, 3, 1, 0],
            new_relations: vec![5, 0, 0, 0],
            status: Status::Terminated { top_degree: 4 },
            total_dim: Some(12),
            top_degree: Some(4),
            hilbert_prefix: String::new(),
            primes: vec![],
            exact_through: 5,
            notes: vec![],
        };
        assert_eq!(r.csv_row(), "fk3,3,5,none,1 3 4 3 1 0,12,4,terminated");
        assert_eq!(CSV_HEADER.split(',').count(), r.csv_row().split(',').count());
    }
}
