//! Edge-list parsing for the two common snapshot formats.
//!
//! Both formats are line-oriented: comment lines start with `#` (SNAP) or
//! `%` (KONECT), every other non-blank line must hold exactly two
//! whitespace-separated integer node labels forming a directed edge
//! `source target`. Duplicates and self-loops are kept verbatim here;
//! preprocessing decides what to do with them.

use std::collections::BTreeSet;
use std::io::BufRead;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeListFormat {
    Snap,
    Konect,
}

impl EdgeListFormat {
    fn comment_prefix(self) -> char {
        match self {
            EdgeListFormat::Snap => '#',
            EdgeListFormat::Konect => '%',
        }
    }
}

impl FromStr for EdgeListFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "snap" => Ok(EdgeListFormat::Snap),
            "konect" => Ok(EdgeListFormat::Konect),
            other => Err(Error::data(format!(
                "unknown edge list format {other:?} (expected \"snap\" or \"konect\")"
            ))),
        }
    }
}

/// A parsed edge list, exactly as it appeared in the input: duplicate edges
/// and self-loops are preserved and labels are the raw integers.
#[derive(Clone, Debug, Default)]
pub struct RawEdgeList {
    pub edges: Vec<(i64, i64)>,
}

impl RawEdgeList {
    /// Every label mentioned by at least one edge endpoint.
    pub fn labels(&self) -> BTreeSet<i64> {
        self.edges.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

/// Parse a directed edge list, reporting the 1-based line number of the
/// first malformed line.
pub fn parse_edge_list<R: BufRead>(reader: R, format: EdgeListFormat) -> Result<RawEdgeList> {
    let comment = format.comment_prefix();
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with(comment) {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (a, b, rest) = (tokens.next(), tokens.next(), tokens.next());
        let (a, b) = match (a, b, rest) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                let count = line.split_whitespace().count();
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected 2 whitespace-separated node labels, found {count}"),
                });
            }
        };
        let src = parse_label(a, idx + 1)?;
        let dst = parse_label(b, idx + 1)?;
        edges.push((src, dst));
    }
    Ok(RawEdgeList { edges })
}

fn parse_label(token: &str, line: usize) -> Result<i64> {
    token.parse::<i64>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid node label {token:?}"),
    })
}
