//! Field configuration files for the database builder:
//!
//! ```text
//! # F = Q(√5) with the icosian order
//! field = 5
//! algebra = icosian
//! ```
//!
//! `field` is a radicand or discriminant (`0` or `1` for `Q`). `algebra` is
//! `icosian`, `pizer <p>` over `Q`, or `file <path>` relative to the config.

use std::path::Path;

use crate::arith::BaseField;
use crate::quat::config::{load_algebra_config, pizer_config, ICOSIAN};
use crate::quat::QuaternionOrder;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct FieldConfig {
    pub field: BaseField,
    pub order: QuaternionOrder,
    /// Short description of the algebra, e.g. `pizer 11`.
    pub algebra: String,
}

impl FieldConfig {
    pub fn pizer(p: i64) -> Result<Self> {
        let field = BaseField::rationals();
        let (_, order) = load_algebra_config(&field, &pizer_config(p)?)?;
        Ok(FieldConfig { field, order, algebra: format!("pizer {p}") })
    }

    pub fn icosian() -> Result<Self> {
        let field = BaseField::new(5)?;
        let (_, order) = load_algebra_config(&field, ICOSIAN)?;
        Ok(FieldConfig { field, order, algebra: "icosian".into() })
    }

    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut field = None;
        let mut algebra = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", i + 1)))?;
            match k.trim() {
                "field" => {
                    let d: i64 = v.trim().parse().map_err(|_| Error::Config(format!("line {}: bad field '{}'", i + 1, v.trim())))?;
                    field = Some(if d == 0 || d == 1 { BaseField::rationals() } else { BaseField::new(d)? });
                }
                "algebra" => algebra = Some(v.trim().to_string()),
                other => return Err(Error::Config(format!("line {}: unknown key '{other}'", i + 1))),
            }
        }
        let field = field.ok_or_else(|| Error::Config("missing 'field'".into()))?;
        let algebra = algebra.ok_or_else(|| Error::Config("missing 'algebra'".into()))?;
        let words: Vec<&str> = algebra.split_whitespace().collect();
        let text = match words.as_slice() {
            ["icosian"] => ICOSIAN.to_string(),
            ["pizer", p] if field.is_rational() => {
                pizer_config(p.parse().map_err(|_| Error::Config(format!("bad prime '{p}'")))?)?
            }
            ["file", path] => {
                let full = base.map_or_else(|| Path::new(path).to_path_buf(), |b| b.join(path));
                std::fs::read_to_string(&full).map_err(|e| Error::Config(format!("{}: {e}", full.display())))?
            }
            _ => return Err(Error::Config(format!("unknown algebra '{algebra}' for field {}", field.label()))),
        };
        let (_, order) = load_algebra_config(&field, &text)?;
        Ok(FieldConfig { field, order, algebra })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }
}
