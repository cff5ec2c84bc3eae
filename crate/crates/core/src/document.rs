//! JSON interchange format for bipartite matrices.
//!
//! ```json
//! {"schema": 1, "m1": 1, "n1": 2, "m2": 1, "n2": 1,
//!  "blocks": [[[["1"]], [["-3/4"]]]]}
//! ```
//!
//! `blocks[i][j]` is the `m2×n2` block `(i, j)` as rows of rational strings.
//! Rationals are written in lowest terms, so serialization is canonical.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bipartite::{BipartiteMatrix, BipartiteShape};
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::Rational;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub schema: u32,
    pub m1: usize,
    pub n1: usize,
    pub m2: usize,
    pub n2: usize,
    pub blocks: Vec<Vec<Vec<Vec<String>>>>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &BipartiteMatrix) -> Self {
        let s = m.shape();
        let blocks = m
            .blocks()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|b| {
                        (0..b.rows())
                            .map(|i| b.row(i).iter().map(ToString::to_string).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            schema: SCHEMA_VERSION,
            m1: s.m1,
            n1: s.n1,
            m2: s.m2,
            n2: s.n2,
            blocks,
        }
    }

    pub fn to_matrix(&self) -> Result<BipartiteMatrix> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema {}", self.schema)));
        }
        let shape = BipartiteShape::new(self.m1, self.n1, self.m2, self.n2).map_err(|e| Error::Parse(e.to_string()))?;
        if self.blocks.len() != shape.m1 {
            return Err(Error::Parse(format!("expected {} block rows, found {}", shape.m1, self.blocks.len())));
        }
        let mut grid = Vec::with_capacity(shape.m1);
        for (i, row) in self.blocks.iter().enumerate() {
            if row.len() != shape.n1 {
                return Err(Error::Parse(format!("block row {i}: expected {} blocks, found {}", shape.n1, row.len())));
            }
            let mut out = Vec::with_capacity(shape.n1);
            for (j, block) in row.iter().enumerate() {
                out.push(parse_block(block, i, j, shape)?);
            }
            grid.push(out);
        }
        BipartiteMatrix::from_blocks(shape, &grid)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn parse_block(rows: &[Vec<String>], i: usize, j: usize, shape: BipartiteShape) -> Result<ExactMatrix> {
    if rows.len() != shape.m2 || rows.iter().any(|r| r.len() != shape.n2) {
        return Err(Error::Parse(format!("block ({i},{j}) is not {}x{}", shape.m2, shape.n2)));
    }
    let mut data = Vec::with_capacity(shape.m2 * shape.n2);
    for (a, row) in rows.iter().enumerate() {
        for (b, cell) in row.iter().enumerate() {
            data.push(parse_rational(cell).map_err(|why| {
                Error::Parse(format!("block ({i},{j}) entry ({a},{b}): {cell:?} {why}"))
            })?);
        }
    }
    ExactMatrix::from_vec(shape.m2, shape.n2, data)
}

/// Parses `"p"` or `"p/q"`; rejects a zero denominator.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let t = text.trim();
    if let Some((_, den)) = t.split_once('/') {
        if den.trim().trim_start_matches(['+', '-']).chars().all(|c| c == '0') && !den.trim().is_empty() {
            return Err("has a zero denominator".into());
        }
    }
    Rational::from_str(t).map_err(|e| format!("is not a rational: {e}"))
}

/// Parses a document from JSON text.
pub fn parse_document(text: &str) -> Result<BipartiteMatrix> {
    MatrixDocument::from_json(text)?.to_matrix()
}

pub fn serialize_document(m: &BipartiteMatrix) -> String {
    MatrixDocument::from_matrix(m).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::gen_full_schmidt_canonical;
    use crate::linalg::ratio;

    #[test]
    fn round_trip_is_exact() {
        let shape = BipartiteShape::new(2, 1, 1, 2).unwrap();
        let m = BipartiteMatrix::new(
            shape,
            ExactMatrix::from_fn(2, 2, |i, j| ratio(i as i64 * 7 - 3, j as i64 + 2)),
        )
        .unwrap();
        let text = serialize_document(&m);
        assert!(text.contains("\"-3/2\""));
        assert_eq!(parse_document(&text).unwrap(), m);
        assert_eq!(serialize_document(&parse_document(&text).unwrap()), text);
    }

    #[test]
    fn canonical_document_layout() {
        let doc = MatrixDocument::from_matrix(&gen_full_schmidt_canonical(2, 2, 1).unwrap());
        assert_eq!(doc.blocks[0][1], vec![vec!["0", "1"], vec!["0", "0"]]);
        assert_eq!(doc.schema, 1);
    }

    #[test]
    fn zero_denominator_names_the_entry() {
        let text = r#"{"schema":1,"m1":1,"n1":2,"m2":1,"n2":1,"blocks":[[[["1"]],[["1/0"]]]]}"#;
        let err = parse_document(text).unwrap_err().to_string();
        assert!(err.contains("block (0,1) entry (0,0)"), "{err}");
        assert!(err.contains("zero denominator"), "{err}");
    }

    #[test]
    fn malformed_documents() {
        for text in [
            r#"{"schema":1,"m1":1,"n1":1,"m2":1,"n2":1,"blocks":[[[["x"]]]]}"#,
            r#"{"schema":1,"m1":1,"n1":1,"m2":1,"n2":2,"blocks":[[[["1"]]]]}"#,
            r#"{"schema":1,"m1":2,"n1":1,"m2":1,"n2":1,"blocks":[[[["1"]]]]}"#,
            r#"{"schema":2,"m1":1,"n1":1,"m2":1,"n2":1,"blocks":[[[["1"]]]]}"#,
            r#"{"schema":1,"m1":0,"n1":1,"m2":1,"n2":1,"blocks":[]}"#,
            "not json",
        ] {
            assert!(matches!(parse_document(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn non_canonical_input_is_normalized() {
        let text = r#"{"schema":1,"m1":1,"n1":1,"m2":1,"n2":2,"blocks":[[[["2/4"," -6/3"]]]]}"#;
        let m = parse_document(text).unwrap();
        assert_eq!(MatrixDocument::from_matrix(&m).blocks[0][0][0], vec!["1/2", "-2"]);
    }
}
