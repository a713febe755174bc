use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

/// Diagnostics gathered while ingesting an edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub lines: usize,
    pub comments: usize,
    pub edges_read: usize,
    pub self_loops: usize,
    pub duplicates: usize,
    pub gzip: bool,
}

/// Parses a whitespace-separated edge list, gzip or plain.
///
/// Labels are arbitrary tokens. Dense ids follow the sorted label order
/// (numeric when every label is an unsigned integer), so the result does not
/// depend on line order.
pub fn load_edge_list<R: Read>(source: R, directed: bool) -> Result<(Graph, LoadReport)> {
    let mut reader = BufReader::new(source);
    let gzip = reader.fill_buf()?.starts_with(&GZIP_MAGIC);
    let reader: Box<dyn BufRead> = if gzip {
        Box::new(BufReader::new(MultiGzDecoder::new(reader)))
    } else {
        Box::new(reader)
    };

    let mut report = LoadReport { gzip, ..Default::default() };
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    let mut intern = |token: &str| -> u32 {
        if let Some(&id) = index.get(token) {
            return id;
        }
        let id = labels.len() as u32;
        labels.push(token.to_owned());
        index.insert(token.to_owned(), id);
        id
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        report.lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            report.comments += 1;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => arcs.push((intern(a), intern(b))),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected two tokens, got {:?}", trimmed),
                })
            }
        }
    }
    if arcs.is_empty() {
        return Err(Error::EmptyGraph);
    }
    report.edges_read = arcs.len();

    let order = canonical_order(&labels);
    let mut rank = vec![0u32; labels.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old as usize] = new as u32;
    }
    let sorted_labels: Vec<String> = order.iter().map(|&old| std::mem::take(&mut labels[old as usize])).collect();
    let n = sorted_labels.len();
    let remapped = arcs.into_iter().map(|(u, v)| (rank[u as usize], rank[v as usize]));
    let (graph, self_loops, duplicates) = Graph::build(n, remapped, directed)?;
    report.self_loops = self_loops;
    report.duplicates = duplicates;
    if self_loops + duplicates > 0 {
        log::info!("dropped {self_loops} self-loops and {duplicates} duplicate edges");
    }
    Ok((graph.with_labels(sorted_labels), report))
}

pub fn load_edge_list_path(path: impl AsRef<Path>, directed: bool) -> Result<(Graph, LoadReport)> {
    load_edge_list(File::open(path)?, directed)
}

fn canonical_order(labels: &[String]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..labels.len() as u32).collect();
    let numeric: Option<Vec<u64>> = labels.iter().map(|l| l.parse::<u64>().ok()).collect();
    match numeric {
        // Labels such as "01" and "1" parse equal; break ties on the text.
        Some(values) => order.sort_unstable_by(|&a, &b| {
            values[a as usize]
                .cmp(&values[b as usize])
                .then_with(|| labels[a as usize].cmp(&labels[b as usize]))
        }),
        None => order.sort_unstable_by(|&a, &b| labels[a as usize].cmp(&labels[b as usize])),
    }
    order
}
