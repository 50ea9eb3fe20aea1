//! Line-oriented text format, one record per line:
//!
//! ```text
//! field=1.1.1.1;disc=[11,11,0,1];level=[1,1,0,1];index=0;dim=1;heckefield=[0,1];den=1;AL=[[11,-1]];primes=[2,3,5];eigenvalues=[[-2],[-1],[1]];cm=NOT;bc=NA;bound=5
//! ```
//!
//! Keys appear in this fixed order. Integers are decimal, lists use `[`,
//! `]` and `,` with no spaces, and an empty eigenvalue marks a prime of the
//! level.

use std::cmp::Ordering;
use std::fmt::Write;

use num_bigint::BigInt;

use crate::analysis::record::{BaseChangeVerdict, CmVerdict, NewformRecord};
use crate::{Error, Result};

const KEYS: [&str; 13] =
    ["field", "disc", "level", "index", "dim", "heckefield", "den", "AL", "primes", "eigenvalues", "cm", "bc", "bound"];

fn ints<T: std::fmt::Display>(xs: &[T]) -> String {
    let body: Vec<String> = xs.iter().map(T::to_string).collect();
    format!("[{}]", body.join(","))
}

fn cm_text(v: &CmVerdict) -> String {
    match v {
        CmVerdict::NotCm => "NOT".into(),
        CmVerdict::Candidate { disc, evidence } => format!("CAND:{disc}:{evidence}"),
        CmVerdict::Untested => "UNTESTED".into(),
    }
}

fn bc_text(v: &BaseChangeVerdict) -> String {
    match v {
        BaseChangeVerdict::None => "NA".into(),
        BaseChangeVerdict::Not => "NOT".into(),
        BaseChangeVerdict::Stage1 => "STAGE1".into(),
        BaseChangeVerdict::Unmatched => "UNMATCHED".into(),
        BaseChangeVerdict::Matched { form, evidence } => format!("MATCH:{form}:{evidence}"),
    }
}

pub fn serialize(r: &NewformRecord) -> String {
    let mut s = String::new();
    let _ = write!(s, "field={};disc={};level={};index={};dim={}", r.field, ints(&r.disc), ints(&r.level), r.index, r.dim());
    let _ = write!(s, ";heckefield={};den={}", ints(&r.heckefield), r.denominator);
    let al: Vec<String> = r.al.iter().map(|(l, w)| format!("[{l},{w}]")).collect();
    let _ = write!(s, ";AL=[{}];primes=[{}]", al.join(","), r.primes.join(","));
    let eig: Vec<String> = r.eigenvalues.iter().map(|v| ints(v)).collect();
    let _ = write!(s, ";eigenvalues=[{}];cm={};bc={};bound={}", eig.join(","), cm_text(&r.cm), bc_text(&r.base_change), r.prime_bound);
    s
}

/// Cursor over one line; positions in errors are byte offsets.
struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        let hit = self.peek() == Some(c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    /// Token up to the next delimiter.
    fn token(&mut self, stops: &[u8]) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if stops.contains(&c) {
                break;
            }
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn key(&mut self, name: &str) -> Result<()> {
        if self.pos > 0 {
            self.expect(b';')?;
        }
        let k = self.token(b"=;");
        if k != name {
            return self.err(format!("expected key '{name}', found '{k}'"));
        }
        self.expect(b'=')
    }

    fn int<T: std::str::FromStr>(&mut self) -> Result<T> {
        let start = self.pos;
        let t = self.token(b",];[");
        t.parse().map_err(|_| Error::Parse { pos: start, msg: format!("bad integer '{t}'") })
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.eat(b']') {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(b']') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }

    fn quad(&mut self) -> Result<[i64; 4]> {
        let start = self.pos;
        let v: Vec<i64> = self.list(|c| c.int())?;
        v.try_into().map_err(|_| Error::Parse { pos: start, msg: "expected four integers".into() })
    }
}

fn parse_cm(c: &Cursor, t: &str) -> Result<CmVerdict> {
    match t.split(':').collect::<Vec<_>>().as_slice() {
        ["NOT"] => Ok(CmVerdict::NotCm),
        ["UNTESTED"] => Ok(CmVerdict::Untested),
        ["CAND", d, e] => match (d.parse(), e.parse()) {
            (Ok(disc), Ok(evidence)) => Ok(CmVerdict::Candidate { disc, evidence }),
            _ => c.err(format!("bad CM flag '{t}'")),
        },
        _ => c.err(format!("bad CM flag '{t}'")),
    }
}

fn parse_bc(c: &Cursor, t: &str) -> Result<BaseChangeVerdict> {
    Ok(match t {
        "NA" => BaseChangeVerdict::None,
        "NOT" => BaseChangeVerdict::Not,
        "STAGE1" => BaseChangeVerdict::Stage1,
        "UNMATCHED" => BaseChangeVerdict::Unmatched,
        _ => {
            let Some(rest) = t.strip_prefix("MATCH:") else { return c.err(format!("bad base-change flag '{t}'")) };
            let Some((form, e)) = rest.rsplit_once(':') else { return c.err(format!("bad base-change flag '{t}'")) };
            let Ok(evidence) = e.parse() else { return c.err(format!("bad evidence '{e}'")) };
            BaseChangeVerdict::Matched { form: form.to_string(), evidence }
        }
    })
}

pub fn parse(line: &str) -> Result<NewformRecord> {
    if !line.is_ascii() {
        return Err(Error::Parse { pos: 0, msg: "record is not ASCII".into() });
    }
    let mut c = Cursor { text: line, pos: 0 };
    c.key(KEYS[0])?;
    let field = c.token(b";").to_string();
    c.key(KEYS[1])?;
    let disc = c.quad()?;
    c.key(KEYS[2])?;
    let level = c.quad()?;
    c.key(KEYS[3])?;
    let index = c.int()?;
    c.key(KEYS[4])?;
    let dim_pos = c.pos;
    let dim: usize = c.int()?;
    c.key(KEYS[5])?;
    let heckefield: Vec<BigInt> = c.list(|c| c.int())?;
    if heckefield.len() != dim + 1 {
        return Err(Error::Parse { pos: dim_pos, msg: format!("dim {dim} does not match the Hecke field degree") });
    }
    c.key(KEYS[6])?;
    let denominator = c.int()?;
    c.key(KEYS[7])?;
    let al = c.list(|c| {
        c.expect(b'[')?;
        let l = c.token(b",").to_string();
        c.expect(b',')?;
        let w: i8 = c.int()?;
        if w != 1 && w != -1 {
            return c.err("Atkin-Lehner sign must be 1 or -1");
        }
        c.expect(b']')?;
        Ok((l, w))
    })?;
    c.key(KEYS[8])?;
    let primes = c.list(|c| Ok(c.token(b",]").to_string()))?;
    c.key(KEYS[9])?;
    let eig_pos = c.pos;
    let eigenvalues: Vec<Vec<BigInt>> = c.list(|c| c.list(|c| c.int()))?;
    if eigenvalues.len() != primes.len() || eigenvalues.iter().any(|v| !v.is_empty() && v.len() != dim) {
        return Err(Error::Parse { pos: eig_pos, msg: "eigenvalues do not align with the prime table".into() });
    }
    c.key(KEYS[10])?;
    let t = c.token(b";");
    let cm = parse_cm(&c, t)?;
    c.key(KEYS[11])?;
    let t = c.token(b";");
    let base_change = parse_bc(&c, t)?;
    c.key(KEYS[12])?;
    let prime_bound = c.int()?;
    if c.pos != line.len() {
        return c.err("trailing characters");
    }
    Ok(NewformRecord {
        field,
        level,
        disc,
        index,
        heckefield,
        denominator,
        al,
        primes,
        eigenvalues,
        cm,
        base_change,
        prime_bound,
    })
}

/// Database order: field, discriminant, level norm, level Hermite form,
/// constituent index.
pub fn record_order(a: &NewformRecord, b: &NewformRecord) -> Ordering {
    (&a.field, a.disc, a.level, a.index).cmp(&(&b.field, b.disc, b.level, b.index))
}

pub fn write_database(records: &[NewformRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serialize(r));
        out.push('\n');
    }
    out
}

/// Parses a database; errors carry the line number.
pub fn read_database(text: &str) -> Result<Vec<NewformRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse(l).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("line {}: {msg}", i + 1) },
                other => other,
            })
        })
        .collect()
}
