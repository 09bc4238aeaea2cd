//! The `sts/1` text format and its name sidecar.
//!
//! ```text
//! sts 7
//! 0 1 2
//! 0 3 4
//! ...
//! ```
//!
//! The header is `pstss <n>` for partial systems. Triples are written sorted
//! within and across lines; on input any order is accepted. Blank lines and
//! lines starting with `#` are ignored. The sidecar has one
//! `point <index> = <name>` line per named point.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::system::{PartialTripleSystem, Point, Triple, TripleStructure, TripleSystem};

/// A parsed file: complete or partial, per its header.
#[derive(Debug, Clone)]
pub enum SystemFile {
    Steiner(TripleSystem),
    Partial(PartialTripleSystem),
}

impl SystemFile {
    pub fn as_partial(&self) -> &PartialTripleSystem {
        match self {
            SystemFile::Steiner(ts) => ts.as_partial(),
            SystemFile::Partial(p) => p,
        }
    }

    pub fn into_steiner(self) -> Result<TripleSystem> {
        match self {
            SystemFile::Steiner(ts) => Ok(ts),
            SystemFile::Partial(p) => TripleSystem::new(p.n_points(), p.triples().to_vec()),
        }
    }
}

fn write_triples<'a>(header: &str, n: usize, triples: impl Iterator<Item = &'a Triple>) -> String {
    let mut out = format!("{header} {n}\n");
    for t in triples {
        writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    out
}

pub fn write_sts(ts: &TripleSystem) -> String {
    write_triples("sts", ts.n_points(), ts.triples().iter())
}

pub fn write_pstss(ps: &PartialTripleSystem) -> String {
    write_triples("pstss", ps.n_points(), ps.triples().iter())
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - line.as_ptr() as usize + 1, tok))
}

pub fn parse(text: &str) -> Result<SystemFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_error(1, 1, "empty input; expected `sts <n>` or `pstss <n>`"))?;
    let head: Vec<(usize, &str)> = tokens(header).collect();
    let (partial, n) = match head.as_slice() {
        [(_, kind), (col, n)] if *kind == "sts" || *kind == "pstss" => {
            let n: usize = n.parse().map_err(|_| parse_error(hline, *col, "point count is not a number"))?;
            (*kind == "pstss", n)
        }
        [(col, kind), ..] if *kind != "sts" && *kind != "pstss" => {
            return Err(parse_error(hline, *col, format!("unknown header `{kind}`")));
        }
        _ => return Err(parse_error(hline, 1, "expected `sts <n>` or `pstss <n>`")),
    };
    if n > Point::MAX as usize {
        return Err(parse_error(hline, 1, "point count too large"));
    }
    let mut triples = Vec::new();
    for (lno, line) in lines {
        let toks: Vec<(usize, &str)> = tokens(line).collect();
        if toks.len() != 3 {
            let col = toks.get(3).map_or(line.len() + 1, |t| t.0);
            return Err(parse_error(lno, col, format!("expected 3 points, found {}", toks.len())));
        }
        let mut t: Triple = [0; 3];
        for (slot, (col, tok)) in t.iter_mut().zip(&toks) {
            let p: usize = tok.parse().map_err(|_| parse_error(lno, *col, format!("`{tok}` is not a point index")))?;
            if p >= n {
                return Err(parse_error(lno, *col, format!("point {p} out of range for {n} points")));
            }
            *slot = p as Point;
        }
        triples.push(t);
    }
    Ok(if partial {
        SystemFile::Partial(PartialTripleSystem::new(n, triples)?)
    } else {
        SystemFile::Steiner(TripleSystem::new(n, triples)?)
    })
}

pub fn write_names(names: &[String]) -> String {
    let mut out = String::new();
    for (i, name) in names.iter().enumerate() {
        writeln!(out, "point {i} = {name}").unwrap();
    }
    out
}

/// Parses a sidecar into a name per point of an `n`-point system.
pub fn parse_names(text: &str, n: usize) -> Result<Vec<Option<String>>> {
    let mut names = vec![None; n];
    for (i, line) in text.lines().enumerate() {
        let lno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = line
            .strip_prefix("point ")
            .ok_or_else(|| parse_error(lno, 1, "expected `point <index> = <name>`"))?;
        let (idx, name) = rest
            .split_once('=')
            .ok_or_else(|| parse_error(lno, 7, "missing `=`"))?;
        let idx: usize = idx.trim().parse().map_err(|_| parse_error(lno, 7, "index is not a number"))?;
        if idx >= n {
            return Err(parse_error(lno, 7, format!("point {idx} out of range for {n} points")));
        }
        names[idx] = Some(name.trim().to_string());
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::pg_sts;

    #[test]
    fn round_trip() {
        let ts = pg_sts(3).unwrap();
        let text = write_sts(&ts);
        assert!(text.starts_with("sts 15\n0 1 2\n"));
        let back = parse(&text).unwrap().into_steiner().unwrap();
        assert_eq!(back, ts);
    }

    #[test]
    fn diagnostics() {
        let err = parse("sts 7\n0 1 2\n0 3 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 5, .. }), "{err:?}");
        let err = parse("sts 7\n0 1 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 5, .. }));
        let err = parse("\n# comment\nsys 7\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 1, .. }));
        assert!(matches!(parse("sts 7\n0 1 2\n"), Err(Error::NotSteiner(_))));
        assert!(matches!(parse("pstss 5\n0 1 2\n0 1 3\n"), Err(Error::NotPartial(_))));
    }

    #[test]
    fn names() {
        let names = vec!["*".to_string(), "(0, 1)".to_string()];
        let parsed = parse_names(&write_names(&names), 3).unwrap();
        assert_eq!(parsed, vec![Some("*".into()), Some("(0, 1)".into()), None]);
    }
}
