//! Line-oriented ASCII file formats.
//!
//! System files hold the ring and the four state-space matrices:
//!
//! ```text
//! p 2
//! r 2
//! delta 2
//! k 1
//! n 2
//! A
//! 1 1
//! 0 1
//! B
//! 0
//! 1
//! C
//! 1 0
//! D
//! 1
//! ```
//!
//! Matrix entries are arbitrary integers, reduced into the ring on load.
//! Sequence files carry one time step per line as n space-separated
//! integers, outputs before inputs, already in `[0, p^r)`. Message files
//! carry k integers per line. Pattern files carry `t component delta`
//! triples. Lines starting with `#` are comments everywhere.

use std::fmt;

use ringconv_core::channel::{ErrorEntry, ErrorPattern};
use ringconv_core::iso::{IsoSystem, Symbol};
use ringconv_core::linalg::{RingMatrix, RingVector};
use ringconv_core::ring::RingParams;

#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ints(line: &str, lineno: usize) -> Result<Vec<i64>, ParseError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| ParseError(format!("line {lineno}: `{tok}` is not an integer")))
        })
        .collect()
}

pub fn parse_system(text: &str) -> Result<IsoSystem, ParseError> {
    let mut lines = content_lines(text).peekable();
    let mut p = None;
    let mut r = None;
    let mut delta = None;
    let mut k = None;
    let mut n = None;

    // header: five scalar keys in any order
    while let Some(&(lineno, line)) = lines.peek() {
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap();
        if matches!(key, "A" | "B" | "C" | "D") {
            break;
        }
        let value: u64 = match toks.next().map(str::parse) {
            Some(Ok(v)) => v,
            _ => return err(format!("line {lineno}: expected `{key} <number>`")),
        };
        if toks.next().is_some() {
            return err(format!("line {lineno}: trailing tokens after `{key}`"));
        }
        match key {
            "p" => p = Some(value),
            "r" => r = Some(value as u32),
            "delta" => delta = Some(value as usize),
            "k" => k = Some(value as usize),
            "n" => n = Some(value as usize),
            other => return err(format!("line {lineno}: unknown key `{other}`")),
        }
        lines.next();
    }
    let (Some(p), Some(r), Some(delta), Some(k), Some(n)) = (p, r, delta, k, n) else {
        return err("system file must define p, r, delta, k and n before the matrices");
    };
    if k >= n {
        return err(format!("need k < n, got k = {k}, n = {n}"));
    }
    let params = RingParams::new(p, r).map_err(|e| ParseError(e.to_string()))?;

    let mut read_matrix = |name: &str, rows: usize, cols: usize| -> Result<RingMatrix, ParseError> {
        match lines.next() {
            Some((_, l)) if l == name => {}
            Some((lineno, l)) => {
                return err(format!("line {lineno}: expected matrix `{name}`, found `{l}`"))
            }
            None => return err(format!("missing matrix `{name}`")),
        }
        let mut data = Vec::with_capacity(rows);
        for _ in 0..rows {
            let Some((lineno, l)) = lines.next() else {
                return err(format!("matrix `{name}` is missing rows"));
            };
            let row = parse_ints(l, lineno)?;
            if row.len() != cols {
                return err(format!(
                    "line {lineno}: matrix `{name}` row has {} entries, expected {cols}",
                    row.len()
                ));
            }
            data.push(row);
        }
        let refs: Vec<&[i64]> = data.iter().map(|r| r.as_slice()).collect();
        Ok(RingMatrix::from_rows_i64(params, &refs))
    };

    let a = read_matrix("A", delta, delta)?;
    let b = read_matrix("B", delta, k)?;
    let c = read_matrix("C", n - k, delta)?;
    let d = read_matrix("D", n - k, k)?;
    if let Some((lineno, l)) = lines.next() {
        return err(format!("line {lineno}: unexpected trailing content `{l}`"));
    }
    IsoSystem::new(a, b, c, d).map_err(|e| ParseError(e.to_string()))
}

pub fn parse_message(text: &str, sys: &IsoSystem) -> Result<Vec<RingVector>, ParseError> {
    let k = sys.input_dim();
    let params = sys.params();
    let mut out = Vec::new();
    for (lineno, line) in content_lines(text) {
        let row = parse_ints(line, lineno)?;
        if row.len() != k {
            return err(format!(
                "line {lineno}: message line has {} entries, expected k = {k}",
                row.len()
            ));
        }
        out.push(RingVector::from_i64(params, &row));
    }
    if out.is_empty() {
        return err("message file is empty");
    }
    Ok(out)
}

pub fn parse_sequence(text: &str, sys: &IsoSystem) -> Result<Vec<Symbol>, ParseError> {
    let n = sys.symbol_dim();
    let q = sys.output_dim();
    let params = sys.params();
    let modulus = params.modulus() as i64;
    let mut out = Vec::new();
    for (lineno, line) in content_lines(text) {
        let row = parse_ints(line, lineno)?;
        if row.len() != n {
            return err(format!(
                "line {lineno}: sequence line has {} entries, expected n = {n}",
                row.len()
            ));
        }
        if let Some(v) = row.iter().find(|&&v| v < 0 || v >= modulus) {
            return err(format!(
                "line {lineno}: value {v} outside [0, {modulus})"
            ));
        }
        out.push(Symbol {
            y: RingVector::from_i64(params, &row[..q]),
            u: RingVector::from_i64(params, &row[q..]),
        });
    }
    if out.is_empty() {
        return err("sequence file is empty");
    }
    Ok(out)
}

pub fn format_sequence(symbols: &[Symbol]) -> String {
    let mut out = String::new();
    for s in symbols {
        let line: Vec<String> = s
            .y
            .values()
            .iter()
            .chain(s.u.values())
            .map(|v| v.to_string())
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_pattern(text: &str, modulus: u64) -> Result<ErrorPattern, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in content_lines(text) {
        let row = parse_ints(line, lineno)?;
        let [t, component, delta] = row[..] else {
            return err(format!(
                "line {lineno}: expected `t component delta`"
            ));
        };
        if t < 0 || component < 0 {
            return err(format!("line {lineno}: negative position"));
        }
        if delta <= 0 || delta as u64 >= modulus {
            return err(format!(
                "line {lineno}: delta must lie in [1, {modulus})"
            ));
        }
        out.push(ErrorEntry {
            t: t as usize,
            component: component as usize,
            delta: delta as u64,
        });
    }
    Ok(out)
}

pub fn format_pattern(pattern: &ErrorPattern) -> String {
    let mut out = String::from("# t component delta\n");
    for e in pattern {
        out.push_str(&format!("{} {} {}\n", e.t, e.component, e.delta));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCALAR: &str = "p 2\nr 2\ndelta 1\nk 1\nn 2\nA\n1\nB\n1\nC\n1\nD\n1\n";

    #[test]
    fn parse_round_trip() {
        let sys = parse_system(SCALAR).unwrap();
        assert_eq!(sys.state_dim(), 1);
        assert_eq!(sys.symbol_dim(), 2);
        let msg = parse_message("1\n2\n", &sys).unwrap();
        assert_eq!(msg.len(), 2);
        let traj = sys.encode(&msg, true).unwrap();
        let text = format_sequence(&traj.symbols());
        let back = parse_sequence(&text, &sys).unwrap();
        assert_eq!(back, traj.symbols());
    }

    #[test]
    fn negative_entries_reduce() {
        let text = SCALAR.replace("A\n1\n", "A\n-3\n");
        let sys = parse_system(&text).unwrap();
        assert_eq!(sys.a().get(0, 0).value(), 1);
    }

    #[test]
    fn rejects_malformed_system() {
        assert!(parse_system("p 2\nr 2\n").is_err());
        assert!(parse_system(&SCALAR.replace("p 2", "p 6")).is_err());
        assert!(parse_system(&SCALAR.replace("B\n1\n", "")).is_err());
        assert!(parse_system(&format!("{SCALAR}extra\n")).is_err());
    }

    #[test]
    fn sequence_range_is_strict() {
        let sys = parse_system(SCALAR).unwrap();
        assert!(parse_sequence("1 4\n", &sys).is_err());
        assert!(parse_sequence("1 -1\n", &sys).is_err());
        assert!(parse_sequence("1 3 0\n", &sys).is_err());
    }

    #[test]
    fn pattern_round_trip() {
        let pattern = vec![
            ErrorEntry { t: 3, component: 0, delta: 2 },
            ErrorEntry { t: 7, component: 1, delta: 1 },
        ];
        let text = format_pattern(&pattern);
        assert_eq!(parse_pattern(&text, 4).unwrap(), pattern);
        assert!(parse_pattern("1 0 0\n", 4).is_err());
        assert!(parse_pattern("1 0 4\n", 4).is_err());
    }
}
