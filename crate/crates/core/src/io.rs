//! Matrix file formats: `rows cols` followed by whitespace-separated rows, or
//! JSON `{"rows": r, "cols": c, "entries": [[...], ...]}`.

use std::path::Path;

use serde_json::Value;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, RationalMatrix};

fn is_json(s: &str) -> bool {
    s.trim_start().starts_with('{')
}

/// Entry tokens of a text or JSON matrix, as written.
fn tokens(s: &str) -> Result<(usize, usize, Vec<String>)> {
    if is_json(s) {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = |key: &str| -> Result<usize> {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("missing or invalid `{key}`")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `entries`".into()))?;
        if entries.len() != rows {
            return Err(Error::Parse(format!("{} rows listed, header says {rows}", entries.len())));
        }
        let mut out = Vec::with_capacity(rows * cols);
        for (i, row) in entries.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
            if row.len() != cols {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for x in row {
                out.push(match x {
                    Value::Number(n) => n.to_string(),
                    Value::String(s) => s.clone(),
                    other => return Err(Error::Parse(format!("entry {other} is not a number"))),
                });
            }
        }
        return Ok((rows, cols, out));
    }

    let mut lines = s
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse(format!("header `{header}` must be `rows cols`")));
    };
    let body: Vec<Vec<String>> = lines
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    if body.len() != rows {
        return Err(Error::Parse(format!("{} rows found, header says {rows}", body.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in body.into_iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        out.extend(row);
    }
    Ok((rows, cols, out))
}

pub fn parse_matrix(s: &str) -> Result<DenseMatrix> {
    let (rows, cols, toks) = tokens(s)?;
    let data = toks
        .iter()
        .map(|t| match t.parse::<f64>() {
            Ok(x) => Ok(x),
            // fractions are accepted in either format
            Err(_) => parse_rational(t).map(|r| crate::exact::rational_to_f64(&r)),
        })
        .collect::<Result<Vec<f64>>>()
        .map_err(|e| Error::Parse(e.to_string()))?;
    DenseMatrix::new(rows, cols, data)
}

/// Exact reading: every entry must be an integer, decimal or fraction literal.
pub fn parse_rational_matrix(s: &str) -> Result<RationalMatrix> {
    let (rows, cols, toks) = tokens(s)?;
    let data = toks.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>()?;
    RationalMatrix::new(rows, cols, data)
}

pub fn load_matrix(path: &Path) -> Result<DenseMatrix> {
    parse_matrix(&read(path)?)
}

pub fn load_rational_matrix(path: &Path) -> Result<RationalMatrix> {
    parse_rational_matrix(&read(path)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn format_matrix_text(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn format_matrix_json(m: &DenseMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn text_round_trip() {
        let m = DenseMatrix::from_rows(&[[1.0, -2.5], [0.125, 4.0]]).unwrap();
        let text = format_matrix_text(&m);
        assert_eq!(text, "2 2\n1 -2.5\n0.125 4\n");
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn json_round_trip() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0]]).unwrap();
        let json = format_matrix_json(&m);
        assert_eq!(json, r#"{"rows":1,"cols":3,"entries":[[1.0,2.0,3.0]]}"#);
        assert_eq!(parse_matrix(&json).unwrap(), m);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# pair\n2 2\n\n1 0  # first\n0 1\n";
        assert_eq!(parse_matrix(text).unwrap(), DenseMatrix::identity(2));
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "2\n1 2", "2 2\n1 2\n3", "2 2\n1 2\n3 x", "1 1\n1\n2", r#"{"rows":1,"cols":2,"entries":[[1]]}"#] {
            assert!(matches!(parse_matrix(bad), Err(Error::Parse(_))), "{bad:?}");
        }
        assert!(matches!(parse_matrix("1 1\nNaN"), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn exact_reading() {
        let m = parse_rational_matrix("2 2\n0.1 -9523/1002\n3 1e2\n").unwrap();
        assert_eq!(m.get(0, 0), &rat(1, 10));
        assert_eq!(m.get(0, 1), &rat(-9523, 1002));
        assert_eq!(m.get(1, 1), &rat(100, 1));
        let j = parse_rational_matrix(r#"{"rows":1,"cols":2,"entries":[[0.5,"1/3"]]}"#).unwrap();
        assert_eq!(j.get(0, 1), &rat(1, 3));
        assert!(matches!(parse_rational_matrix("1 1\nabc"), Err(Error::NotRational(_))));
    }
}
