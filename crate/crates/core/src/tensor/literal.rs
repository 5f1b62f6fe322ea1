//! Plain-text tensor literals.
//!
//! ```text
//! # comments and blank lines are ignored
//! 2 4          <- order dim
//! 1 2 0.25     <- i1 .. iq value
//! 3 4 -0.25
//! ```
//!
//! An order-0 literal has a single line holding just the value.

use std::fmt;
use std::str::FromStr;

use super::SymmetricTensor;
use crate::error::{Error, Result};

impl FromStr for SymmetricTensor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing `order dim` header".into(),
        })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header must be `order dim`, got `{header}`"),
            });
        }
        let parse_usize = |tok: &str| {
            tok.parse::<usize>().map_err(|e| Error::Parse {
                line: hline,
                msg: format!("`{tok}`: {e}"),
            })
        };
        let order = parse_usize(head[0])?;
        let dim = parse_usize(head[1])?;

        let mut entries = Vec::new();
        for (lineno, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != order + 1 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {} indices and a value, got `{line}`", order),
                });
            }
            let idx = toks[..order]
                .iter()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: lineno,
                    msg: format!("bad index: {e}"),
                })?;
            let value = toks[order].parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad value `{}`: {e}", toks[order]),
            })?;
            entries.push((idx, value));
        }
        SymmetricTensor::from_entries(order, dim, entries)
    }
}

impl fmt::Display for SymmetricTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.order, self.dim)?;
        for (k, v) in &self.coeffs {
            for i in k.as_slice() {
                write!(f, "{i} ")?;
            }
            // `{:?}` on f64 prints the shortest string that round-trips.
            writeln!(f, "{v:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let text = "# counterexample form\n2 4\n1 2 0.25\n1 3 0.25 # trailing\n\n";
        let t: SymmetricTensor = text.parse().unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(t.dim(), 4);
        assert_eq!(t.get(&[3, 1]), 0.25);
        let again: SymmetricTensor = t.to_string().parse().unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn scalar_literal() {
        let t: SymmetricTensor = "0 3\n-1.5\n".parse().unwrap();
        assert_eq!(t.scalar(), Some(-1.5));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "2 3\n1 2\n".parse::<SymmetricTensor>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = "2\n".parse::<SymmetricTensor>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(matches!(
            "1 2\n5 1.0\n".parse::<SymmetricTensor>(),
            Err(Error::IndexOutOfRange { index: 5, dim: 2 })
        ));
        assert!("".parse::<SymmetricTensor>().is_err());
    }
}
