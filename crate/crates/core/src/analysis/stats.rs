//! Hecke-field discriminant statistics for quadratic constituents.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::analysis::record::NewformRecord;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeFieldStats {
    /// `(field label, fundamental discriminant) → count`
    pub counts: BTreeMap<(String, i64), usize>,
    /// Largest discriminant per field with the level norm where it occurs.
    pub max: BTreeMap<String, (i64, i64)>,
    pub real: usize,
    pub imaginary: usize,
}

impl HeckeFieldStats {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Associative merge for record-parallel aggregation.
    pub fn merge(mut self, other: HeckeFieldStats) -> HeckeFieldStats {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        for (f, m) in other.max {
            let e = self.max.entry(f).or_insert(m);
            if (m.0.abs(), -m.1) > (e.0.abs(), -e.1) {
                *e = m;
            }
        }
        self.real += other.real;
        self.imaginary += other.imaginary;
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("field_label,disc_E,count\n");
        for ((f, d), c) in &self.counts {
            let _ = writeln!(out, "{f},{d},{c}");
        }
        out
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "quadratic Hecke fields: {} (real {}, imaginary {})", self.total(), self.real, self.imaginary);
        for (f, (d, n)) in &self.max {
            let _ = writeln!(out, "{f}: max discriminant {d} at level norm {n}");
        }
        out
    }
}

fn single(r: &NewformRecord) -> HeckeFieldStats {
    let mut s = HeckeFieldStats::default();
    if r.dim() != 2 {
        return s;
    }
    let Some(d) = r.hecke_field().quadratic_fundamental_discriminant() else { return s };
    s.counts.insert((r.field.clone(), d), 1);
    s.max.insert(r.field.clone(), (d, r.level[0] * r.disc[0]));
    if d > 0 {
        s.real = 1;
    } else {
        s.imaginary = 1;
    }
    s
}

pub fn hecke_field_stats(records: &[NewformRecord]) -> HeckeFieldStats {
    crate::par::map(records, single).into_iter().fold(HeckeFieldStats::default(), HeckeFieldStats::merge)
}
