//! Text formats for codes and constraint tables.
//!
//! Code file:
//!
//! ```text
//! cwcode 1
//! q=<q> n=<n> d=<d> w=<w>
//! <n space-separated entries per word>
//! ```
//!
//! Constraint file (rows in lexicographic subset order, 1-based indices):
//!
//! ```text
//! bassign 1
//! q=<q> n=<n> t=<t>
//! <i1> .. <it> <value>
//! ```
//!
//! Lines end with LF.

use std::fmt::Write as _;

use itertools::Itertools;

use crate::code::{Code, CodeWord};
use crate::constraints::BAssignment;
use crate::error::{Error, Result};
use crate::params::CodeParams;

const CODE_MAGIC: &str = "cwcode 1";
const B_MAGIC: &str = "bassign 1";

pub fn write_code(code: &Code) -> String {
    let mut out = String::new();
    writeln!(out, "{CODE_MAGIC}").unwrap();
    writeln!(out, "{}", code.params()).unwrap();
    for word in code.words() {
        writeln!(out, "{word}").unwrap();
    }
    out
}

fn lines(text: &str) -> Result<Vec<&str>> {
    if text.contains('\r') {
        return Err(Error::parse(1, "CR characters are not allowed"));
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    Ok(body.split('\n').collect())
}

/// Parses `key=value` fields in exactly the given order.
fn parse_header(line: &str, keys: &[&str], line_no: usize) -> Result<Vec<u64>> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != keys.len() {
        return Err(Error::parse(line_no, format!("expected {} header fields", keys.len())));
    }
    fields
        .iter()
        .zip(keys)
        .map(|(field, key)| {
            let value = field
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| Error::parse(line_no, format!("expected `{key}=`")))?;
            value.parse().map_err(|_| Error::parse(line_no, format!("bad value for {key}")))
        })
        .collect()
}

fn parse_numbers(line: &str, line_no: usize) -> Result<Vec<u32>> {
    line.split(' ')
        .map(|tok| tok.parse::<u32>().map_err(|_| Error::parse(line_no, format!("bad number `{tok}`"))))
        .collect()
}

pub fn read_code(text: &str) -> Result<Code> {
    let lines = lines(text)?;
    if lines.first() != Some(&CODE_MAGIC) {
        return Err(Error::parse(1, "missing `cwcode 1` header"));
    }
    let header = lines.get(1).ok_or_else(|| Error::parse(2, "missing parameter line"))?;
    let h = parse_header(header, &["q", "n", "d", "w"], 2)?;
    let q = u32::try_from(h[0]).map_err(|_| Error::parse(2, "q too large"))?;
    let params = CodeParams::new(q, h[1] as usize, h[2] as usize, h[3] as usize)
        .map_err(|e| Error::parse(2, e.to_string()))?;

    let mut words = Vec::with_capacity(lines.len().saturating_sub(2));
    for (k, line) in lines.iter().enumerate().skip(2) {
        let line_no = k + 1;
        let entries = parse_numbers(line, line_no)?;
        if entries.len() != params.n() {
            return Err(Error::parse(line_no, format!("expected {} entries, found {}", params.n(), entries.len())));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= params.q()) {
            return Err(Error::parse(line_no, format!("entry {bad} outside 0..{}", params.q())));
        }
        words.push(CodeWord::new(entries));
    }
    Code::new(params, words).map_err(|e| match e {
        Error::DuplicateWord(pos) => Error::parse(pos + 3, "duplicate word"),
        other => other,
    })
}

pub fn write_b_assignment(b: &BAssignment) -> String {
    let p = b.params();
    let mut out = String::new();
    writeln!(out, "{B_MAGIC}").unwrap();
    writeln!(out, "q={} n={} t={}", p.q(), p.n(), p.t()).unwrap();
    for (subset, value) in b.iter() {
        writeln!(out, "{} {}", subset.iter().map(|i| i + 1).join(" "), value).unwrap();
    }
    out
}

/// Reads a constraint table for the given code parameters; the header must
/// agree with their `q`, `n` and `t`.
pub fn read_b_assignment(text: &str, params: &CodeParams) -> Result<BAssignment> {
    let lines = lines(text)?;
    if lines.first() != Some(&B_MAGIC) {
        return Err(Error::parse(1, "missing `bassign 1` header"));
    }
    let header = lines.get(1).ok_or_else(|| Error::parse(2, "missing parameter line"))?;
    let h = parse_header(header, &["q", "n", "t"], 2)?;
    if h != [u64::from(params.q()), params.n() as u64, params.t() as u64] {
        return Err(Error::parse(2, format!("header does not match q={} n={} t={}", params.q(), params.n(), params.t())));
    }
    let t = params.t();
    let expected: Vec<Vec<usize>> = (0..params.n()).combinations(t).collect();
    let rows = &lines[2..];
    if rows.len() != expected.len() {
        return Err(Error::parse(3, format!("expected {} rows, found {}", expected.len(), rows.len())));
    }
    let mut values = Vec::with_capacity(rows.len());
    for (k, (line, subset)) in rows.iter().zip(&expected).enumerate() {
        let line_no = k + 3;
        let nums = parse_numbers(line, line_no)?;
        if nums.len() != t + 1 {
            return Err(Error::parse(line_no, format!("expected {} fields", t + 1)));
        }
        let indices: Vec<usize> = nums[..t].iter().map(|&i| (i as usize).wrapping_sub(1)).collect();
        if &indices != subset {
            return Err(Error::parse(line_no, "rows must list every t-subset once, in lexicographic order"));
        }
        let value = nums[t];
        if value < 1 || value >= params.q() {
            return Err(Error::parse(line_no, format!("value {value} outside 1..={}", params.q() - 1)));
        }
        values.push(value);
    }
    let mut next = values.into_iter();
    BAssignment::from_fn(params, |_| next.next().expect("row count checked"))
}
