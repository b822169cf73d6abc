//! Plain-text formats. Numbers use the shortest decimal that round-trips.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_row(values: &[f64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v:?}");
    }
    s
}

/// Block-structured snapshot file: one header, then per snapshot a
/// `# t=<value>` line followed by rows `t,<coordinate>,<fields...>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotBlock {
    pub t: f64,
    /// Columns after `t`, one vector per column.
    pub columns: Vec<Vec<f64>>,
}

pub fn write_snapshots(header: &[&str], blocks: &[SnapshotBlock]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for b in blocks {
        let _ = writeln!(out, "# t={:?}", b.t);
        let rows = b.columns.first().map_or(0, Vec::len);
        let mut vals = vec![0.0; b.columns.len() + 1];
        for i in 0..rows {
            vals[0] = b.t;
            for (j, c) in b.columns.iter().enumerate() {
                vals[j + 1] = c[i];
            }
            out.push_str(&csv_row(&vals));
            out.push('\n');
        }
    }
    out
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("'{}' is not a number", s.trim()),
    })
}

pub fn read_snapshots(text: &str, header: &[&str]) -> Result<Vec<SnapshotBlock>> {
    let mut lines = text.lines().enumerate();
    let want = header.join(",");
    match lines.next() {
        Some((_, h)) if h.trim() == want => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header '{want}'"),
            })
        }
    }
    let width = header.len();
    let mut blocks: Vec<SnapshotBlock> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# t=") {
            blocks.push(SnapshotBlock {
                t: parse_f64(rest, line_no)?,
                columns: vec![Vec::new(); width - 1],
            });
            continue;
        }
        let Some(block) = blocks.last_mut() else {
            return Err(Error::Parse {
                line: line_no,
                msg: "data row before the first '# t=' line".into(),
            });
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {width} fields, got {}", fields.len()),
            });
        }
        if parse_f64(fields[0], line_no)? != block.t {
            return Err(Error::Parse {
                line: line_no,
                msg: "row time differs from its block".into(),
            });
        }
        for (j, f) in fields[1..].iter().enumerate() {
            block.columns[j].push(parse_f64(f, line_no)?);
        }
    }
    Ok(blocks)
}

/// Numeric table with an optional header line.
pub fn read_table(path: &Path, width: usize) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    let mut cols = vec![Vec::new(); width];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if idx == 0 && fields[0].trim().parse::<f64>().is_err() {
            continue;
        }
        if fields.len() != width {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected {width} fields, got {}", fields.len()),
            });
        }
        for (j, f) in fields.iter().enumerate() {
            cols[j].push(parse_f64(f, idx + 1)?);
        }
    }
    Ok(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0, 1e-7, 35.0, 1.0 / 3.0, f64::MAX, -2.5e300] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(35.0), "35.0");
    }

    #[test]
    fn snapshot_round_trip() {
        let blocks = vec![
            SnapshotBlock {
                t: 0.0,
                columns: vec![vec![0.5, 1.5], vec![1.0, 1.1], vec![0.0, 0.2]],
            },
            SnapshotBlock {
                t: 0.25,
                columns: vec![vec![0.5, 1.5], vec![1.0 / 3.0, 1.0], vec![1e-9, 0.0]],
            },
        ];
        let text = write_snapshots(&["t", "r", "rho", "mom"], &blocks);
        assert!(text.starts_with("t,r,rho,mom\n# t=0.0\n0.0,0.5,1.0,0.0\n"));
        assert_eq!(read_snapshots(&text, &["t", "r", "rho", "mom"]).unwrap(), blocks);
        assert!(read_snapshots("t,x,w\n1,2,3\n", &["t", "x", "w"]).is_err());
    }
}
