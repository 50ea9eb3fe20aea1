//! Conjunctive record filters and table output.

use std::fmt::Write;

use crate::analysis::{BaseChangeVerdict, CmVerdict, NewformRecord};
use crate::{Error, Result};

/// Inclusive integer range parsed from `a`, `a..b`, `a..` or `..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Range {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Range {
    fn parse(key: &str, s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<Option<i64>> {
            if t.is_empty() {
                Ok(None)
            } else {
                t.parse().map(Some).map_err(|_| Error::Precondition(format!("bad value '{s}' for {key}")))
            }
        };
        match s.split_once("..") {
            Some((a, b)) => Ok(Range { lo: num(a)?, hi: num(b)? }),
            None => {
                let v = num(s)?;
                Ok(Range { lo: v, hi: v })
            }
        }
    }

    fn contains(&self, x: i64) -> bool {
        self.lo.is_none_or(|lo| x >= lo) && self.hi.is_none_or(|hi| x <= hi)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Query {
    pub field: Option<String>,
    pub norm: Option<Range>,
    pub disc: Option<Range>,
    pub dim: Option<Range>,
    pub cm: Option<String>,
    pub bc: Option<String>,
}

pub const FILTER_KEYS: [&str; 6] = ["field", "norm", "disc", "dim", "cm", "bc"];

impl Query {
    /// Parses `key=value` filters.
    pub fn parse(filters: &[String]) -> Result<Self> {
        let mut q = Query::default();
        for f in filters {
            let (k, v) = f.split_once('=').ok_or_else(|| Error::Precondition(format!("filter '{f}' is not key=value")))?;
            match k {
                "field" => q.field = Some(v.to_string()),
                "norm" => q.norm = Some(Range::parse(k, v)?),
                "disc" => q.disc = Some(Range::parse(k, v)?),
                "dim" => q.dim = Some(Range::parse(k, v)?),
                "cm" | "bc" => {
                    let v = v.to_ascii_lowercase();
                    let ok: &[&str] = if k == "cm" {
                        &["not", "candidate", "untested"]
                    } else {
                        &["na", "not", "stage1", "unmatched", "matched"]
                    };
                    if !ok.contains(&v.as_str()) {
                        return Err(Error::Precondition(format!("{k} must be one of {}", ok.join(", "))));
                    }
                    if k == "cm" {
                        q.cm = Some(v);
                    } else {
                        q.bc = Some(v);
                    }
                }
                _ => return Err(Error::Precondition(format!("unknown filter key '{k}' (known: {})", FILTER_KEYS.join(", ")))),
            }
        }
        Ok(q)
    }

    pub fn matches(&self, r: &NewformRecord) -> bool {
        let cm = match r.cm {
            CmVerdict::NotCm => "not",
            CmVerdict::Candidate { .. } => "candidate",
            CmVerdict::Untested => "untested",
        };
        let bc = match r.base_change {
            BaseChangeVerdict::None => "na",
            BaseChangeVerdict::Not => "not",
            BaseChangeVerdict::Stage1 => "stage1",
            BaseChangeVerdict::Unmatched => "unmatched",
            BaseChangeVerdict::Matched { .. } => "matched",
        };
        self.field.as_ref().is_none_or(|f| *f == r.field)
            && self.norm.is_none_or(|x| x.contains(r.level[0]))
            && self.disc.is_none_or(|x| x.contains(r.disc[0]))
            && self.dim.is_none_or(|x| x.contains(r.dim() as i64))
            && self.cm.as_ref().is_none_or(|x| x == cm)
            && self.bc.as_ref().is_none_or(|x| x == bc)
    }

    /// Matching records in database order.
    pub fn run<'a>(&self, records: &'a [NewformRecord]) -> Vec<&'a NewformRecord> {
        records.iter().filter(|r| self.matches(r)).collect()
    }
}

const HEADER: [&str; 7] = ["label", "level", "dim", "heckefield", "AL", "cm", "bc"];

fn row(r: &NewformRecord) -> [String; 7] {
    let poly: Vec<String> = r.heckefield.iter().map(|c| c.to_string()).collect();
    let al: Vec<String> = r.al.iter().map(|(l, w)| format!("{l}:{w:+}")).collect();
    let cm = match &r.cm {
        CmVerdict::NotCm => "not".to_string(),
        CmVerdict::Candidate { disc, evidence } => format!("candidate {disc} ({evidence})"),
        CmVerdict::Untested => "untested".to_string(),
    };
    let bc = match &r.base_change {
        BaseChangeVerdict::None => "na".to_string(),
        BaseChangeVerdict::Not => "not".to_string(),
        BaseChangeVerdict::Stage1 => "stage1".to_string(),
        BaseChangeVerdict::Unmatched => "unmatched".to_string(),
        BaseChangeVerdict::Matched { form, evidence } => format!("heuristic {form} ({evidence})"),
    };
    [
        r.label(),
        format!("{}", r.level[0] * r.disc[0]),
        r.dim().to_string(),
        poly.join(" "),
        al.join(" "),
        cm,
        bc,
    ]
}

pub fn to_csv(records: &[&NewformRecord]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in records {
        out.push_str(&row(r).join(","));
        out.push('\n');
    }
    out
}

pub fn to_table(records: &[&NewformRecord]) -> String {
    let rows: Vec<[String; 7]> = records.iter().map(|r| row(r)).collect();
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.len()).collect();
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(HEADER.to_vec(), &mut out);
    for r in &rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}
