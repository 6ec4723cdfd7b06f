//! DIMACS CNF reader and writer.
//!
//! Accepts `c` comment lines, one `p cnf <vars> <clauses>` header, and
//! zero-terminated clauses that may span lines. A lone `%` ends the input
//! (some benchmark archives append one).

use std::fmt::Write as _;

use crate::cnf::{CnfError, CnfFormula, Lit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("clause data before the `p cnf` header on line {0}")]
    MissingHeader(usize),
    #[error("line {line}: `{token}` is not an integer literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} is out of range 1..={num_vars}")]
    LiteralOutOfRange { line: usize, lit: i64, num_vars: u32 },
    #[error("line {line}: clause has more than 3 literals")]
    ClauseTooLong { line: usize },
    #[error("last clause is missing its terminating 0")]
    MissingTerminator,
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error(transparent)]
    Cnf(#[from] CnfError),
}

fn parse_header(line_no: usize, rest: &str) -> Result<(u32, usize), DimacsError> {
    let bad = |msg: &str| DimacsError::MalformedHeader { line: line_no, msg: msg.to_string() };
    let mut it = rest.split_whitespace();
    if it.next() != Some("cnf") {
        return Err(bad("expected `p cnf <vars> <clauses>`"));
    }
    let vars = it
        .next()
        .and_then(|t| t.parse::<u32>().ok())
        .ok_or_else(|| bad("variable count is not a non-negative integer"))?;
    let clauses = it
        .next()
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| bad("clause count is not a non-negative integer"))?;
    if it.next().is_some() {
        return Err(bad("trailing tokens"));
    }
    Ok((vars, clauses))
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line == "%" {
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader { line: line_no, msg: "second header".into() });
            }
            header = Some(parse_header(line_no, rest)?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::MissingHeader(line_no));
        };
        for token in line.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::BadToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() > num_vars as u64 {
                return Err(DimacsError::LiteralOutOfRange { line: line_no, lit, num_vars });
            }
            if current.len() == 3 {
                return Err(DimacsError::ClauseTooLong { line: line_no });
            }
            current.push(lit as Lit);
        }
    }

    let Some((num_vars, declared)) = header else {
        return Err(DimacsError::MalformedHeader { line: 0, msg: "no `p cnf` header".into() });
    };
    if !current.is_empty() {
        return Err(DimacsError::MissingTerminator);
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount { declared, found: clauses.len() });
    }
    Ok(CnfFormula::new(num_vars, clauses)?)
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f.num_vars, 2);
        assert_eq!(f.clauses, vec![vec![1, -2]]);
        let f = parse_dimacs("c comment\np cnf 1 1\n1 0").unwrap();
        assert_eq!(f.clauses, vec![vec![1]]);
    }

    #[test]
    fn clauses_span_lines() {
        let f = parse_dimacs("p cnf 3 2\n1 2\n-3 0 2\n0\n%\n0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, 2, -3], vec![2]]);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_dimacs("p cnf 1 1\n1 1 1 1 0"), Err(DimacsError::ClauseTooLong { line: 2 }));
        assert!(matches!(parse_dimacs("p cnf x 1\n1 0"), Err(DimacsError::MalformedHeader { line: 1, .. })));
        assert!(matches!(parse_dimacs("p dnf 1 1\n1 0"), Err(DimacsError::MalformedHeader { .. })));
        assert!(matches!(parse_dimacs("1 0\n"), Err(DimacsError::MissingHeader(1))));
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0"), Err(DimacsError::LiteralOutOfRange { lit: 2, .. })));
        assert_eq!(parse_dimacs("p cnf 2 1\n1 2"), Err(DimacsError::MissingTerminator));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 x 0"), Err(DimacsError::BadToken { .. })));
        assert_eq!(
            parse_dimacs("p cnf 2 2\n1 0"),
            Err(DimacsError::ClauseCount { declared: 2, found: 1 })
        );
        assert_eq!(parse_dimacs("p cnf 2 1\n1 1 0"), Err(DimacsError::Cnf(CnfError::RepeatedVariable(0, 1))));
        assert_eq!(parse_dimacs("p cnf 2 1\n0"), Err(DimacsError::Cnf(CnfError::EmptyClause(0))));
    }

    #[test]
    fn write_then_parse() {
        let f = CnfFormula::new(3, vec![vec![1, -2, 3], vec![-3]]).unwrap();
        let text = write_dimacs(&f);
        assert_eq!(text, "p cnf 3 2\n1 -2 3 0\n-3 0\n");
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }
}
