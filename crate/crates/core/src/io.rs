//! CSV readers and writers for graphs and matrices.
//!
//! Edge lists have the header `source,target` (or `source,target,weight`
//! when some weight differs from 1) and one row per edge, naming vertices by
//! label. A row with an empty `target` only declares a vertex; the writer
//! emits such rows for isolated vertices and wherever they are needed to keep
//! the reader's first-appearance numbering equal to the original vertex
//! order. Vertices labelled exactly `0, 1, ..., n-1` read back unlabelled,
//! so writing and reading any graph gives the same graph back.
//!
//! Matrix grids are plain comma-separated numbers. Adjacency grids may carry
//! a header row and a leading label column.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrices::DenseMatrix;

fn fmt_num(x: f64) -> String {
    (x + 0.0).to_string()
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: {s:?} is not a number")))
}

pub fn write_edge_list<W: Write>(g: &Graph, out: W) -> Result<()> {
    let weighted = g.is_weighted();
    let mut w = csv::Writer::from_writer(out);
    if weighted {
        w.write_record(["source", "target", "weight"])?;
    } else {
        w.write_record(["source", "target"])?;
    }

    let n = g.n();
    let mut seen = vec![false; n];
    let declare = |w: &mut csv::Writer<W>, v: usize| -> Result<()> {
        let label = g.label(v);
        if weighted {
            w.write_record([label.as_str(), "", ""])?;
        } else {
            w.write_record([label.as_str(), ""])?;
        }
        Ok(())
    };

    for e in g.edges() {
        // Declare every unseen vertex below the row's largest new endpoint,
        // except a lower new endpoint that the row itself introduces in order.
        let mut fresh: Vec<usize> = Vec::new();
        for v in [e.source, e.target] {
            if !seen[v] && !fresh.contains(&v) {
                fresh.push(v);
            }
        }
        if let Some(&top) = fresh.iter().max() {
            let skip = match fresh.as_slice() {
                [lo, hi] if lo < hi && !(lo + 1..*hi).any(|v| !seen[v]) => Some(*lo),
                _ => None,
            };
            for v in 0..top {
                if !seen[v] && Some(v) != skip {
                    declare(&mut w, v)?;
                    seen[v] = true;
                }
            }
            for v in fresh {
                seen[v] = true;
            }
        }
        let (s, t) = (g.label(e.source), g.label(e.target));
        if weighted {
            w.write_record([s, t, fmt_num(e.weight)])?;
        } else {
            w.write_record([s, t])?;
        }
    }
    for v in 0..n {
        if !seen[v] {
            declare(&mut w, v)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads an edge list written by [`write_edge_list`] (or by hand). Vertex
/// indices follow first appearance.
pub fn read_edge_list<R: Read>(input: R, directed: bool) -> Result<Graph> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_lowercase).collect();
    let has_weight = match header.as_slice() {
        [s, t] if s == "source" && t == "target" => false,
        [s, t, w] if s == "source" && t == "target" && w == "weight" => true,
        _ => {
            return Err(Error::Parse(format!(
                "edge list header must be source,target[,weight], got {}",
                header.join(",")
            )))
        }
    };

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut intern = |label: &str| -> Result<usize> {
        if label.is_empty() {
            return Err(Error::Parse("empty vertex label".into()));
        }
        Ok(*index.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        }))
    };

    let mut edges = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = line + 2;
        let field = |i: usize| record.get(i).unwrap_or("");
        if record.len() > if has_weight { 3 } else { 2 } {
            return Err(Error::Parse(format!("row {row}: too many fields")));
        }
        let source = intern(field(0))?;
        if field(1).is_empty() {
            if has_weight && !field(2).is_empty() {
                return Err(Error::Parse(format!("row {row}: weight without target")));
            }
            continue;
        }
        let target = intern(field(1))?;
        let weight = if has_weight {
            parse_num(field(2), &format!("row {row} weight"))?
        } else {
            1.0
        };
        edges.push((source, target, weight));
    }

    let n = labels.len();
    let g = Graph::from_edges(n, directed, edges)?;
    let plain = labels.iter().enumerate().all(|(i, l)| *l == i.to_string());
    if plain {
        Ok(g)
    } else {
        g.with_labels(labels)
    }
}

/// Plain numeric grid, no labels.
pub fn write_matrix_csv<W: Write>(m: &DenseMatrix, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|&x| fmt_num(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Adjacency grid; when the matrix has row labels a header row (empty corner
/// cell, then the column labels) and a leading label column are added.
pub fn write_adjacency_csv<W: Write>(m: &DenseMatrix, out: W) -> Result<()> {
    let Some(row_labels) = m.row_labels() else {
        return write_matrix_csv(m, out);
    };
    let col_labels = m.col_labels().unwrap_or(row_labels);
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let mut header = vec![String::new()];
    header.extend(col_labels.iter().cloned());
    w.write_record(&header)?;
    for i in 0..m.rows() {
        let mut record = vec![row_labels[i].clone()];
        record.extend(m.row(i).iter().map(|&x| fmt_num(x)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a numeric grid with an optional label row and/or label column.
///
/// The first row is a header when any of its cells is not a number. Rows
/// carry a leading label when every data row starts with a non-number, or
/// when the header's corner cell is empty.
pub fn read_matrix_csv<R: Read>(input: R) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        rows.push(record?.iter().map(str::to_string).collect());
    }
    let is_num = |s: &str| s.parse::<f64>().is_ok();
    let header = match rows.first() {
        Some(first) if first.iter().any(|c| !is_num(c)) => Some(rows.remove(0)),
        _ => None,
    };
    let row_labelled = (!rows.is_empty() && rows.iter().all(|r| r.first().is_some_and(|c| !is_num(c))))
        || header.as_ref().is_some_and(|h| h.first().is_some_and(String::is_empty));

    let mut row_labels = Vec::new();
    let mut data = Vec::new();
    for (i, mut row) in rows.into_iter().enumerate() {
        if row_labelled {
            row_labels.push(row.remove(0));
        }
        let values = row
            .iter()
            .enumerate()
            .map(|(j, c)| parse_num(c, &format!("cell ({i}, {j})")))
            .collect::<Result<Vec<f64>>>()?;
        data.push(values);
    }
    let mut m = DenseMatrix::from_rows(data)?;
    if let Some(mut h) = header {
        if row_labelled {
            h.remove(0);
        }
        m = m.with_col_labels(h)?;
    }
    if row_labelled {
        m = m.with_row_labels(row_labels)?;
    }
    Ok(m)
}
