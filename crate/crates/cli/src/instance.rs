//! Plain-text instance files.
//!
//! ```text
//! # name: sample_5x7
//! # source: free text
//! 5 7
//! 1 0 0 0 1 1 1
//! ...
//! ```
//!
//! Lines starting with `#` are comments; `# name:` and `# source:` comments
//! are kept. The first data line holds `m p`, followed by exactly `m` rows of
//! `p` tokens, each `0` or `1`. Blank lines are accepted only after the matrix.

use std::fmt;
use std::path::Path;

use cfp_core::matrix::MAX_ELEMENTS;
use cfp_core::IncidenceMatrix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub name: String,
    pub matrix: IncidenceMatrix,
    pub source: String,
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based start columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - line.as_ptr() as usize + 1, t))
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut name = None;
    let mut source = None;
    let mut dims: Option<(usize, usize)> = None;
    let mut bits = Vec::new();
    let mut rows_read = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim_end();
        if let Some(comment) = line.trim_start().strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("name:") {
                name = Some(v.trim().to_string());
            } else if let Some(v) = comment.strip_prefix("source:") {
                source = Some(v.trim().to_string());
            }
            continue;
        }
        let complete = dims.is_some_and(|(m, _)| rows_read == m);
        if line.trim().is_empty() {
            if complete {
                continue;
            }
            return Err(err(line_no, 1, "blank line before the matrix is complete"));
        }
        match dims {
            None => {
                let toks: Vec<_> = tokens(line).collect();
                if toks.len() != 2 {
                    return Err(err(
                        line_no,
                        1,
                        format!("expected \"m p\", found {} tokens", toks.len()),
                    ));
                }
                let parse_dim = |(col, t): (usize, &str)| -> Result<usize, ParseError> {
                    match t.parse::<usize>() {
                        Ok(0) => Err(err(line_no, col, "dimension must be positive")),
                        Ok(v) => Ok(v),
                        Err(_) => Err(err(line_no, col, format!("invalid dimension {t:?}"))),
                    }
                };
                let m = parse_dim(toks[0])?;
                let p = parse_dim(toks[1])?;
                if m.checked_mul(p).is_none_or(|n| n > MAX_ELEMENTS) {
                    return Err(err(
                        line_no,
                        1,
                        format!("{m}x{p} exceeds the supported {MAX_ELEMENTS} elements"),
                    ));
                }
                bits.reserve(m * p);
                dims = Some((m, p));
            }
            Some((m, p)) => {
                if rows_read == m {
                    return Err(err(line_no, 1, format!("unexpected data after {m} matrix rows")));
                }
                let mut count = 0;
                for (col, t) in tokens(line) {
                    count += 1;
                    if count > p {
                        return Err(err(line_no, col, format!("row has more than {p} entries")));
                    }
                    match t {
                        "0" => bits.push(false),
                        "1" => bits.push(true),
                        _ => return Err(err(line_no, col, format!("expected 0 or 1, found {t:?}"))),
                    }
                }
                if count < p {
                    return Err(err(
                        line_no,
                        line.len() + 1,
                        format!("row has {count} entries, expected {p}"),
                    ));
                }
                rows_read += 1;
            }
        }
    }
    let Some((m, p)) = dims else {
        return Err(err(last_line.max(1), 1, "missing \"m p\" header"));
    };
    if rows_read < m {
        return Err(err(last_line + 1, 1, format!("expected {m} rows, found {rows_read}")));
    }
    let matrix = IncidenceMatrix::from_bits(m, p, bits).map_err(|e| err(1, 1, e.to_string()))?;
    Ok(InstanceFile {
        name: name.unwrap_or_else(|| "instance".into()),
        matrix,
        source: source.unwrap_or_default(),
    })
}

impl InstanceFile {
    /// Reads a file; without a `# name:` comment the file stem is used.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let mut inst = parse_instance(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        if !text.lines().any(|l| {
            l.trim_start()
                .strip_prefix('#')
                .is_some_and(|c| c.trim().starts_with("name:"))
        }) {
            if let Some(stem) = path.file_stem() {
                inst.name = stem.to_string_lossy().into_owned();
            }
        }
        Ok(inst)
    }
}

impl fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# name: {}", self.name)?;
        if !self.source.is_empty() {
            writeln!(f, "# source: {}", self.source)?;
        }
        writeln!(f, "{} {}", self.matrix.machines(), self.matrix.parts())?;
        for row in self.matrix.rows() {
            let line: Vec<&str> = row.iter().map(|&b| if b != 0 { "1" } else { "0" }).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_instance() {
        let inst = parse_instance("2 2\n1 0\n0 1\n").unwrap();
        assert_eq!(inst.matrix.machines(), 2);
        assert_eq!(inst.matrix.ones(), 2);
        assert_eq!(inst.name, "instance");
    }

    #[test]
    fn keeps_annotations_and_tolerates_trailing_whitespace() {
        let text = "# name: tiny\n# source: hand made\n# other note\n1 3 \n1 1 0\t\n\n  \n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.name, "tiny");
        assert_eq!(inst.source, "hand made");
        assert_eq!(parse_instance(&inst.to_string()).unwrap(), inst);
    }

    #[test]
    fn diagnostics_point_at_the_problem() {
        let e = parse_instance("2 2\n1 0\n0 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_instance("2 2\n1 0 1\n0 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse_instance("2 2\n1\n0 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_instance("2 2\n1 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_instance("2 2\n1 0\n0 1\n1 1\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_instance("2 x\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(parse_instance("2000 2000\n").unwrap_err().message.contains("exceeds"));
        assert!(parse_instance("0 3\n").is_err());
        assert!(parse_instance("# only comments\n").is_err());
        assert!(parse_instance("2 2 2\n").is_err());
        assert!(parse_instance("1 2\n\n1 0\n").is_err());
    }
}
