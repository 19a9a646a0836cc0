//! Text formats: tab-separated edge lists and partition files.
//!
//! Edge list: one edge per line, `source<TAB>target<TAB>weight`, blank lines
//! and `#` comments ignored. Node IDs are either nonnegative integers (used
//! directly as indices) or double-quoted labels (assigned dense indices in
//! first-seen order); a file uses one kind or the other. A missing weight
//! means `1`. The comment `# nodes: N` declares the node count so isolated
//! trailing nodes survive a round trip.
//!
//! Partition: one group per line, whitespace-separated node IDs.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::coarse::Partition;
use crate::error::{Error, Result};
use crate::graph::Network;

const NODES_DIRECTIVE: &str = "nodes:";

#[derive(Debug, PartialEq)]
enum NodeId {
    Index(usize),
    Label(String),
}

fn parse_node(token: &str, line: usize) -> Result<NodeId> {
    let token = token.trim();
    if let Some(inner) = token.strip_prefix('"') {
        let label = inner.strip_suffix('"').ok_or_else(|| Error::Parse {
            line,
            msg: format!("unterminated label {token}"),
        })?;
        return Ok(NodeId::Label(label.to_string()));
    }
    token.parse::<usize>().map(NodeId::Index).map_err(|_| Error::Parse {
        line,
        msg: format!("node id {token:?} is neither a nonnegative integer nor a quoted label"),
    })
}

pub fn parse_edge_list(text: &str) -> Result<Network> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(NodeId, NodeId, f64, usize)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(count) = comment.trim().strip_prefix(NODES_DIRECTIVE) {
                let count = count.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad node count {:?}", count.trim()),
                })?;
                declared = Some(count);
            }
            continue;
        }
        let mut fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() < 2 && !trimmed.contains('"') {
            fields = trimmed.split_whitespace().collect();
        }
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line,
                msg: "expected source<TAB>target<TAB>weight".into(),
            });
        }
        let src = parse_node(fields[0], line)?;
        let dst = parse_node(fields[1], line)?;
        let weight = match fields.get(2) {
            Some(w) => w.trim().parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad weight {:?}", w.trim()),
            })?,
            None => 1.0,
        };
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Parse {
                line,
                msg: format!("weight must be finite and nonnegative, got {weight}"),
            });
        }
        edges.push((src, dst, weight, line));
    }

    let labeled = edges
        .iter()
        .any(|(a, b, _, _)| matches!(a, NodeId::Label(_)) || matches!(b, NodeId::Label(_)));
    if labeled {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut triples = Vec::with_capacity(edges.len());
        for (a, b, w, line) in edges {
            let mut resolve = |id: NodeId| -> Result<usize> {
                match id {
                    NodeId::Label(l) => Ok(*index.entry(l.clone()).or_insert_with(|| {
                        labels.push(l);
                        labels.len() - 1
                    })),
                    NodeId::Index(_) => Err(Error::Parse {
                        line,
                        msg: "mixes integer ids with quoted labels".into(),
                    }),
                }
            };
            let i = resolve(a)?;
            let j = resolve(b)?;
            triples.push((i, j, w, line));
        }
        let n = labels.len().max(declared.unwrap_or(0));
        while labels.len() < n {
            labels.push(labels.len().to_string());
        }
        build(n, triples)?.with_labels(labels)
    } else {
        let mut n = declared.unwrap_or(0);
        let mut triples = Vec::with_capacity(edges.len());
        for (a, b, w, line) in edges {
            let (NodeId::Index(i), NodeId::Index(j)) = (a, b) else {
                unreachable!()
            };
            n = n.max(i + 1).max(j + 1);
            triples.push((i, j, w, line));
        }
        if let Some(d) = declared {
            if d < n {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("declared {d} nodes but ids go up to {}", n - 1),
                });
            }
        }
        build(n, triples)
    }
}

fn build(n: usize, triples: Vec<(usize, usize, f64, usize)>) -> Result<Network> {
    let mut weights = vec![0.0; n * n];
    let mut seen = vec![false; n * n];
    for (i, j, w, line) in triples {
        if std::mem::replace(&mut seen[i * n + j], true) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate edge {i} -> {j}"),
            });
        }
        weights[i * n + j] = w;
    }
    Network::from_dense(n, weights)
}

fn quoted(net: &Network, i: usize) -> String {
    match net.labels() {
        Some(l) => format!("\"{}\"", l[i]),
        None => i.to_string(),
    }
}

pub fn format_edge_list(net: &Network) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {NODES_DIRECTIVE} {}", net.len());
    for i in 0..net.len() {
        for j in net.children(i) {
            let _ = writeln!(out, "{}\t{}\t{}", quoted(net, i), quoted(net, j), net.weight(i, j));
        }
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Network> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list(path: impl AsRef<Path>, net: &Network) -> Result<()> {
    std::fs::write(path, format_edge_list(net))?;
    Ok(())
}

/// Parses a partition of `net`'s nodes. Nodes not mentioned become
/// singletons; a node listed twice is an error.
pub fn parse_partition(text: &str, net: &Network) -> Result<Partition> {
    let n = net.len();
    let by_label: HashMap<&str, usize> = net
        .labels()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect())
        .unwrap_or_default();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut group = Vec::new();
        for token in trimmed.split_whitespace() {
            let bare = token.trim_matches('"');
            let node = match by_label.get(bare) {
                Some(&i) => i,
                None => bare.parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("unknown node {token}"),
                })?,
            };
            if node >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("node {node} out of range for {n} nodes"),
                });
            }
            if std::mem::replace(&mut seen[node], true) {
                return Err(Error::Parse {
                    line,
                    msg: format!("node {node} appears in more than one group"),
                });
            }
            group.push(node);
        }
        groups.push(group);
    }
    for (i, s) in seen.iter().enumerate() {
        if !s {
            groups.push(vec![i]);
        }
    }
    Partition::from_groups(n, &groups)
}

pub fn format_partition(part: &Partition, net: &Network) -> String {
    let mut out = String::new();
    for group in part.groups() {
        let names: Vec<String> = group.iter().map(|&i| quoted(net, i)).collect();
        let _ = writeln!(out, "{}", names.join(" "));
    }
    out
}

pub fn read_partition(path: impl AsRef<Path>, net: &Network) -> Result<Partition> {
    parse_partition(&std::fs::read_to_string(path)?, net)
}

pub fn write_partition(path: impl AsRef<Path>, part: &Partition, net: &Network) -> Result<()> {
    std::fs::write(path, format_partition(part, net))?;
    Ok(())
}
