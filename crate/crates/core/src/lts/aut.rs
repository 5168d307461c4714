//! Aldebaran `.aut` reading and writing.
//!
//! ```text
//! des (0, 2, 3)
//! (0, "BOOL x", 1)
//! (1, i, 2)
//! ```

use std::fmt::Write;

use thiserror::Error;

use super::{ActionLabel, Lts, LtsError, StateId, Transition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("line {line}: malformed header, expected `des (initial, transitions, states)`")]
    Header { line: usize },
    #[error("missing `des` header")]
    MissingHeader,
    #[error("line {line}: malformed transition {text:?}")]
    Transition { line: usize, text: String },
    #[error("line {line}: {source}")]
    Label { line: usize, source: LtsError },
    #[error("header announces {expected} transitions but {found} were given")]
    TransitionCount { expected: usize, found: usize },
    #[error(transparent)]
    Lts(#[from] LtsError),
}

fn parse_triple(inner: &str) -> Option<(&str, &str, &str)> {
    let first = inner.find(',')?;
    let last = inner.rfind(',')?;
    if first == last {
        return None;
    }
    Some((
        inner[..first].trim(),
        inner[first + 1..last].trim(),
        inner[last + 1..].trim(),
    ))
}

fn parenthesised(text: &str) -> Option<&str> {
    text.trim().strip_prefix('(')?.strip_suffix(')')
}

fn parse_label(raw: &str, line: usize) -> Result<ActionLabel, AutError> {
    let text = match raw.strip_prefix('"') {
        Some(rest) => rest.strip_suffix('"').ok_or_else(|| AutError::Transition {
            line,
            text: raw.to_string(),
        })?,
        None => raw,
    };
    text.parse()
        .map_err(|source| AutError::Label { line, source })
}

/// Parses an Aldebaran file. Whitespace around tokens and blank lines are
/// ignored; any label outside the BOOL/ASSIGN/ASSERT/`i` vocabulary is an
/// error.
pub fn read_aut(text: &str) -> Result<Lts, AutError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(AutError::MissingHeader)?;
    let header_err = || AutError::Header { line: hline };
    let triple = header
        .strip_prefix("des")
        .and_then(parenthesised)
        .and_then(parse_triple)
        .ok_or_else(header_err)?;
    let num = |s: &str| s.parse::<usize>().map_err(|_| header_err());
    let (initial, expected, num_states) = (num(triple.0)?, num(triple.1)?, num(triple.2)?);

    let mut transitions = Vec::with_capacity(expected);
    for (line, text) in lines {
        let bad = || AutError::Transition {
            line,
            text: text.to_string(),
        };
        let (from, label, to) = parenthesised(text).and_then(parse_triple).ok_or_else(bad)?;
        let from: StateId = from.parse().map_err(|_| bad())?;
        let to: StateId = to.parse().map_err(|_| bad())?;
        transitions.push(Transition::new(from, parse_label(label, line)?, to));
    }
    if transitions.len() != expected {
        return Err(AutError::TransitionCount {
            expected,
            found: transitions.len(),
        });
    }
    Ok(Lts::new(num_states, initial, transitions)?)
}

/// Canonical Aldebaran text: single spaces, LF line endings, transitions in
/// insertion order, `i` for the invisible action.
pub fn write_aut(l: &Lts) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "des ({}, {}, {})",
        l.initial(),
        l.transitions().len(),
        l.num_states()
    );
    for t in l.transitions() {
        let _ = match &t.label {
            ActionLabel::Tau => writeln!(out, "({}, i, {})", t.from, t.to),
            label => writeln!(out, "({}, \"{}\", {})", t.from, label, t.to),
        };
    }
    out
}
