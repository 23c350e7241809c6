//! Text formats for formulas.
//!
//! Native format:
//!
//! ```text
//! loci 4
//! 0_2 1_3
//! 0_1 1_2
//! ```
//!
//! DIMACS CNF restricted to 2-clauses. The clause `(a | b)` is the
//! incompatibility `(!a, !b)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Formula, Incompatibility, Literal};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_native(text: &str) -> Result<Formula> {
    let mut n = None;
    let mut clauses = Vec::new();
    for (ix, raw) in text.lines().enumerate() {
        let line_no = ix + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(loci) = n else {
            match tokens.as_slice() {
                ["loci", count] => {
                    let count: usize = count
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad locus count {count:?}")))?;
                    if count == 0 {
                        return Err(parse_err(line_no, "locus count must be at least 1"));
                    }
                    n = Some(count);
                    continue;
                }
                _ => return Err(parse_err(line_no, "expected header \"loci <n>\"")),
            }
        };
        let [a, b] = tokens.as_slice() else {
            return Err(parse_err(line_no, "expected two alleles per line"));
        };
        let a: Literal = a.parse().map_err(|e: String| parse_err(line_no, e))?;
        let b: Literal = b.parse().map_err(|e: String| parse_err(line_no, e))?;
        for x in [a, b] {
            if x.locus() >= loci {
                return Err(parse_err(
                    line_no,
                    format!("allele {x} out of range for {loci} loci"),
                ));
            }
        }
        clauses.push(Incompatibility::new(a, b).map_err(|e| parse_err(line_no, e.to_string()))?);
    }
    let n = n.ok_or_else(|| parse_err(1, "missing header \"loci <n>\""))?;
    Formula::new(n, clauses)
}

pub fn render_native(formula: &Formula) -> String {
    let mut out = format!("loci {}\n", formula.n());
    for c in formula.clauses() {
        let _ = writeln!(out, "{c}");
    }
    out
}

fn dimacs_literal(x: Literal) -> i64 {
    let v = x.locus() as i64 + 1;
    if x.allele() {
        v
    } else {
        -v
    }
}

pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<(i64, usize)> = Vec::new();
    let mut raw_count = 0usize;

    'lines: for (ix, raw) in text.lines().enumerate() {
        let line_no = ix + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(line_no, "duplicate header"));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let ["p", "cnf", vars, count] = tokens.as_slice() else {
                return Err(parse_err(line_no, "malformed header, expected \"p cnf <n> <m>\""));
            };
            let vars: usize = vars
                .parse()
                .map_err(|_| parse_err(line_no, "malformed header variable count"))?;
            let count: usize = count
                .parse()
                .map_err(|_| parse_err(line_no, "malformed header clause count"))?;
            if vars == 0 {
                return Err(parse_err(line_no, "variable count must be at least 1"));
            }
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(parse_err(line_no, "clause before header \"p cnf <n> <m>\""));
        };
        for tok in line.split_whitespace() {
            if tok == "%" {
                break 'lines;
            }
            let value: i64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad literal {tok:?}")))?;
            if value != 0 {
                if value.unsigned_abs() as usize > vars {
                    return Err(parse_err(
                        line_no,
                        format!("literal {value} out of range for {vars} variables"),
                    ));
                }
                pending.push((value, line_no));
                continue;
            }
            raw_count += 1;
            let start = pending.first().map_or(line_no, |p| p.1);
            let [(a, _), (b, _)] = pending.as_slice() else {
                return Err(parse_err(
                    start,
                    format!("clause has {} literals, only 2-clauses are supported", pending.len()),
                ));
            };
            let to_allele = |v: i64| Literal::new(v.unsigned_abs() as usize - 1, v < 0);
            let clause = Incompatibility::new(to_allele(*a), to_allele(*b))
                .map_err(|e| parse_err(start, e.to_string()))?;
            clauses.push(clause);
            pending.clear();
        }
    }
    let (vars, count) = header.ok_or_else(|| parse_err(1, "missing header \"p cnf <n> <m>\""))?;
    if !pending.is_empty() {
        return Err(parse_err(pending[0].1, "clause not terminated by 0"));
    }
    if raw_count != count {
        return Err(parse_err(
            1,
            format!("header declares {count} clauses, found {raw_count}"),
        ));
    }
    Formula::new(vars, clauses)
}

pub fn render_dimacs(formula: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.n(), formula.len());
    for c in formula.clauses() {
        let _ = writeln!(
            out,
            "{} {} 0",
            dimacs_literal(c.first().negate()),
            dimacs_literal(c.second().negate())
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaFormat {
    Native,
    Dimacs,
}

/// Picks the format from the first meaningful line.
pub fn detect_format(text: &str) -> Option<FormulaFormat> {
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        if line.starts_with("loci") {
            return Some(FormulaFormat::Native);
        }
        if line.starts_with('p') {
            return Some(FormulaFormat::Dimacs);
        }
        return None;
    }
    None
}

pub fn parse_formula(text: &str, format: Option<FormulaFormat>) -> Result<Formula> {
    match format.or_else(|| detect_format(text)) {
        Some(FormulaFormat::Native) => parse_native(text),
        Some(FormulaFormat::Dimacs) => parse_dimacs(text),
        None => Err(parse_err(1, "cannot tell format: expected \"loci <n>\" or \"p cnf <n> <m>\"")),
    }
}
