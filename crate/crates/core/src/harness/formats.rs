//! Plain-text instance formats.
//!
//! Coupling files (benchmark-set convention, 1-based indices):
//!
//! ```text
//! n m
//! i j w      (m lines)
//! ```
//!
//! TSP files: the city count, then `n` rows of `n` distances with `-` for a
//! missing edge (diagonal entries are ignored), then optionally a line
//! `penalty A B`.
//!
//! Phase-retrieval files: `n m`, then `n` rows holding the `m` complex
//! entries of `A` as interleaved `re im` pairs, then one row of the `n`
//! measured magnitudes `b`.
//!
//! Blank lines and lines starting with `#` are skipped in all three.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonians::CouplingMatrix;
use crate::mappings::{PhaseRetrievalInstance, TspInstance};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

fn no_trailing<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(t) => Err(parse_err(line, format!("unexpected token `{t}`"))),
        None => Ok(()),
    }
}

pub fn parse_coupling(text: &str) -> Result<CouplingMatrix> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m`"))?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hl, "site count")?;
    let m: usize = field(toks.next(), hl, "edge count")?;
    no_trailing(toks, hl)?;
    if n == 0 {
        return Err(parse_err(hl, "site count must be positive"));
    }

    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        if edges.len() == m {
            return Err(parse_err(ln, format!("more than the declared {m} edges")));
        }
        let mut toks = line.split_whitespace();
        let i: usize = field(toks.next(), ln, "index i")?;
        let j: usize = field(toks.next(), ln, "index j")?;
        let w: f64 = field(toks.next(), ln, "weight")?;
        no_trailing(toks, ln)?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Data(format!("line {ln}: index out of range 1..={n}")));
        }
        if i == j {
            return Err(Error::Data(format!("line {ln}: self-loop on site {i}")));
        }
        if !w.is_finite() {
            return Err(Error::Data(format!("line {ln}: non-finite weight")));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::Data(format!("line {ln}: duplicate pair ({i}, {j})")));
        }
        edges.push((i - 1, j - 1, w));
    }
    if edges.len() != m {
        return Err(parse_err(text.lines().count().max(1), format!("expected {m} edges, found {}", edges.len())));
    }
    CouplingMatrix::new(n, edges)
}

pub fn load_coupling(path: impl AsRef<Path>) -> Result<CouplingMatrix> {
    parse_coupling(&std::fs::read_to_string(path)?)
}

/// Writes `J` with `i < j` in increasing order; weights use the shortest
/// representation that parses back to the same `f64`.
pub fn format_coupling(j: &CouplingMatrix) -> String {
    let mut out = format!("{} {}\n", j.n(), j.num_edges());
    for &(a, b, w) in j.edges() {
        writeln!(out, "{} {} {}", a + 1, b + 1, w).expect("writing to a String");
    }
    out
}

pub fn save_coupling(j: &CouplingMatrix, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_coupling(j))?;
    Ok(())
}

pub fn parse_tsp(text: &str) -> Result<TspInstance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing city count"))?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hl, "city count")?;
    no_trailing(toks, hl)?;

    let mut weights = Vec::with_capacity(n * n);
    for row in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| parse_err(hl, format!("missing distance row {}", row + 1)))?;
        let before = weights.len();
        for tok in line.split_whitespace() {
            if tok == "-" {
                weights.push(None);
            } else {
                weights.push(Some(field::<f64>(Some(tok), ln, "distance")?));
            }
        }
        if weights.len() - before != n {
            return Err(parse_err(ln, format!("expected {n} entries, found {}", weights.len() - before)));
        }
    }
    let mut penalties = None;
    if let Some((ln, line)) = lines.next() {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("penalty") {
            return Err(parse_err(ln, "expected `penalty A B` or end of file"));
        }
        let a: f64 = field(toks.next(), ln, "penalty A")?;
        let b: f64 = field(toks.next(), ln, "penalty B")?;
        no_trailing(toks, ln)?;
        penalties = Some((a, b));
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content after penalty line"));
        }
    }
    TspInstance::new(n, weights, penalties)
}

pub fn format_tsp(instance: &TspInstance) -> String {
    let n = instance.n_cities();
    let mut out = format!("{n}\n");
    for u in 0..n {
        let row: Vec<String> = (0..n)
            .map(|v| match (u == v, instance.weight(u, v)) {
                (true, _) => "0".to_string(),
                (false, Some(w)) => w.to_string(),
                (false, None) => "-".to_string(),
            })
            .collect();
        writeln!(out, "{}", row.join(" ")).expect("writing to a String");
    }
    writeln!(out, "penalty {} {}", instance.penalty_a(), instance.penalty_b()).expect("writing to a String");
    out
}

pub fn parse_phase_retrieval(text: &str) -> Result<PhaseRetrievalInstance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m`"))?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hl, "measurement count")?;
    let m: usize = field(toks.next(), hl, "signal length")?;
    no_trailing(toks, hl)?;

    let mut a = Vec::with_capacity(n * m);
    for row in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| parse_err(hl, format!("missing matrix row {}", row + 1)))?;
        let vals = line.split_whitespace().map(|t| field::<f64>(Some(t), ln, "matrix entry")).collect::<Result<Vec<_>>>()?;
        if vals.len() != 2 * m {
            return Err(parse_err(ln, format!("expected {} numbers, found {}", 2 * m, vals.len())));
        }
        a.extend(vals.chunks(2).map(|c| Complex64::new(c[0], c[1])));
    }
    let (ln, line) = lines.next().ok_or_else(|| parse_err(hl, "missing magnitude row"))?;
    let b = line.split_whitespace().map(|t| field::<f64>(Some(t), ln, "magnitude")).collect::<Result<Vec<_>>>()?;
    if b.len() != n {
        return Err(parse_err(ln, format!("expected {n} magnitudes, found {}", b.len())));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content after magnitude row"));
    }
    PhaseRetrievalInstance::new(n, m, a, b)
}

pub fn format_phase_retrieval(instance: &PhaseRetrievalInstance) -> String {
    let mut out = format!("{} {}\n", instance.n(), instance.m());
    for row in instance.a().chunks(instance.m()) {
        let vals: Vec<String> = row.iter().flat_map(|z| [z.re.to_string(), z.im.to_string()]).collect();
        writeln!(out, "{}", vals.join(" ")).expect("writing to a String");
    }
    let b: Vec<String> = instance.magnitudes().iter().map(f64::to_string).collect();
    writeln!(out, "{}", b.join(" ")).expect("writing to a String");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_edge() {
        let j = parse_coupling("2 1\n1 2 1.0").unwrap();
        assert_eq!(j.n(), 2);
        assert_eq!(j.weight(0, 1), 1.0);
        assert_eq!(j.weight(1, 0), 1.0);
    }

    #[test]
    fn parses_triangle() {
        let j = parse_coupling("3 3\n1 2 1\n2 3 1\n1 3 1\n").unwrap();
        assert_eq!(j.edges(), &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_coupling("1 1\n1 1 1.0"), Err(Error::Data(_))));
        assert!(matches!(parse_coupling("3 2\n1 2 1\n2 1 3"), Err(Error::Data(_))));
        assert!(matches!(parse_coupling("3 1\n1 4 1"), Err(Error::Data(_))));
        assert!(matches!(parse_coupling("3 1\n0 2 1"), Err(Error::Data(_))));
        assert!(matches!(parse_coupling("3 2\n1 2 1\n2 x 1"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_coupling("3 2\n1 2 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_coupling("3 1\n1 2 1\n2 3 1"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_coupling(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_coupling("2 1 9\n1 2 1"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn coupling_round_trip_is_exact() {
        let j = CouplingMatrix::new(4, [(0, 3, 0.1), (1, 2, -1.0 / 3.0), (2, 3, 1e-300)]).unwrap();
        assert_eq!(parse_coupling(&format_coupling(&j)).unwrap(), j);
    }

    #[test]
    fn tsp_round_trip() {
        let text = "# three cities\n3\n0 1 2\n1 0 -\n2 - 0\npenalty 50 1\n";
        let t = parse_tsp(text).unwrap();
        assert_eq!(t.weight(0, 2), Some(2.0));
        assert_eq!(t.weight(1, 2), None);
        assert_eq!((t.penalty_a(), t.penalty_b()), (50.0, 1.0));
        assert_eq!(parse_tsp(&format_tsp(&t)).unwrap(), t);
        assert!(matches!(parse_tsp("3\n0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_tsp("3\n0 1 1\n1 0 1\n1 1 0\nfoo\n"), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn phase_retrieval_round_trip() {
        let text = "2 1\n1 0\n0 1\n1 1\n";
        let p = parse_phase_retrieval(text).unwrap();
        assert_eq!(p.a()[1], Complex64::new(0.0, 1.0));
        assert_eq!(parse_phase_retrieval(&format_phase_retrieval(&p)).unwrap(), p);
        assert!(matches!(parse_phase_retrieval("2 1\n1 0\n0 1\n1\n"), Err(Error::Parse { line: 4, .. })));
    }
}
