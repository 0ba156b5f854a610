//! Graph file formats.
//!
//! Edge list: an optional run of `#` comment lines, then a header `n m`,
//! then `m` lines `u v` with 0-based endpoints. DIMACS: `c` comment lines,
//! a `p edge n m` line, then `m` lines `e u v` with 1-based endpoints.

use crate::graph::{Graph, GraphError};
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dimacs,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    BadGraph { line: usize, source: GraphError },
}

fn parse_err(line: usize, msg: impl fmt::Display) -> IoError {
    IoError::Parse {
        line,
        msg: msg.to_string(),
    }
}

/// Pick a format from the file extension: `.col`/`.dimacs` mean DIMACS,
/// anything else is an edge list.
pub fn format_for_path(path: &Path) -> GraphFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("col") | Some("dimacs") => GraphFormat::Dimacs,
        _ => GraphFormat::EdgeList,
    }
}

pub fn load_graph_path(path: &Path) -> Result<Graph, IoError> {
    let file = std::fs::File::open(path)?;
    load_graph(BufReader::new(file), format_for_path(path))
}

pub fn load_graph<R: Read>(reader: R, format: GraphFormat) -> Result<Graph, IoError> {
    match format {
        GraphFormat::EdgeList => load_edge_list(reader),
        GraphFormat::Dimacs => load_dimacs(reader),
    }
}

fn parse_two(fields: &[&str], line: usize) -> Result<(usize, usize), IoError> {
    if fields.len() != 2 {
        return Err(parse_err(line, format!("expected two fields, got {}", fields.len())));
    }
    let u = fields[0]
        .parse()
        .map_err(|e| parse_err(line, format!("bad number {:?}: {e}", fields[0])))?;
    let v = fields[1]
        .parse()
        .map_err(|e| parse_err(line, format!("bad number {:?}: {e}", fields[1])))?;
    Ok((u, v))
}

fn load_edge_list<R: Read>(reader: R) -> Result<Graph, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut header_line = 0;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let pair = parse_two(&fields, lineno)?;
        if header.is_none() {
            header = Some(pair);
            header_line = lineno;
        } else {
            edges.push((pair, lineno));
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing `n m` header line"))?;
    if edges.len() != m {
        return Err(parse_err(
            header_line,
            format!("header declares {m} edges but file has {}", edges.len()),
        ));
    }
    let mut last_line = header_line;
    let pairs: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(p, l)| {
            last_line = l;
            p
        })
        .collect();
    Graph::from_edges(n, &pairs).map_err(|source| IoError::BadGraph {
        line: last_line,
        source,
    })
}

fn load_dimacs<R: Read>(reader: R) -> Result<Graph, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate p line"));
                }
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(parse_err(lineno, "expected `p edge n m`"));
                }
                header = Some(parse_two(&fields[2..], lineno)?);
            }
            "e" => {
                if header.is_none() {
                    return Err(parse_err(lineno, "e line before p line"));
                }
                let (u, v) = parse_two(&fields[1..], lineno)?;
                if u == 0 || v == 0 {
                    return Err(parse_err(lineno, "DIMACS vertex ids are 1-based"));
                }
                edges.push(((u - 1, v - 1), lineno));
            }
            other => return Err(parse_err(lineno, format!("unknown record {other:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing `p edge n m` line"))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("p line declares {m} edges but file has {}", edges.len()),
        ));
    }
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(p, _)| p).collect();
    let last_line = edges.last().map(|&(_, l)| l).unwrap_or(0);
    Graph::from_edges(n, &pairs).map_err(|source| IoError::BadGraph {
        line: last_line,
        source,
    })
}

pub fn save_graph<W: Write>(g: &Graph, mut w: W, format: GraphFormat) -> Result<(), IoError> {
    match format {
        GraphFormat::EdgeList => {
            writeln!(w, "{} {}", g.n(), g.m())?;
            for (u, v) in g.edges() {
                writeln!(w, "{u} {v}")?;
            }
        }
        GraphFormat::Dimacs => {
            writeln!(w, "p edge {} {}", g.n(), g.m())?;
            for (u, v) in g.edges() {
                writeln!(w, "e {} {}", u + 1, v + 1)?;
            }
        }
    }
    Ok(())
}

pub fn save_graph_path(g: &Graph, path: &Path) -> Result<(), IoError> {
    let file = std::fs::File::create(path)?;
    save_graph(g, std::io::BufWriter::new(file), format_for_path(path))
}
