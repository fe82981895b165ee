// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Text formats.
//!
//! Graphs are edge lists: one `u v` pair per line, whitespace separated,
//! with `#` starting a comment. Labels are arbitrary tokens and are mapped
//! to dense vertex ids in first-seen order. Colorings are one `u v c` line
//! per edge, where `c = 0` marks an uncolored or flagged edge.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::state::{Color, ColorSlot, ColoringState};

/// A graph together with the vertex labels it was read with.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl LabeledGraph {
    /// Labels each vertex with its decimal id.
    pub fn from_graph(graph: Graph) -> Self {
        let labels: Vec<String> = (0..graph.vertex_count()).map(|v| v.to_string()).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Self {
            graph,
            labels,
            index,
        }
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }
}

fn content(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_edge_list(text: &str) -> Result<LabeledGraph> {
    let mut labels = Vec::new();
    let mut index: HashMap<String, VertexId> = HashMap::new();
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let tokens: Vec<&str> = content(line).split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            [u, v] => {
                let mut id = |t: &str| {
                    *index.entry(t.to_string()).or_insert_with(|| {
                        labels.push(t.to_string());
                        labels.len() - 1
                    })
                };
                let (u, v) = (id(u), id(v));
                pairs.push((u, v));
            }
            _ => {
                return Err(Error::MalformedInput(format!(
                    "line {}: expected `u v`, found {} tokens",
                    lineno + 1,
                    tokens.len()
                )))
            }
        }
    }
    let graph = Graph::new(labels.len(), &pairs)?;
    Ok(LabeledGraph {
        graph,
        labels,
        index,
    })
}

pub fn read_edge_list(path: &Path) -> Result<LabeledGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list<W: Write>(out: &mut W, g: &LabeledGraph) -> Result<()> {
    for &(u, v) in g.graph.edges() {
        writeln!(out, "{} {}", g.labels[u], g.labels[v])?;
    }
    Ok(())
}

/// Writes one `u v c` line per edge in edge-id order.
pub fn write_coloring<W: Write>(
    out: &mut W,
    g: &LabeledGraph,
    state: &ColoringState<'_>,
) -> Result<()> {
    for (e, &(u, v)) in g.graph.edges().iter().enumerate() {
        let c = state.color_of(e).unwrap_or(0);
        writeln!(out, "{} {} {}", g.labels[u], g.labels[v], c)?;
    }
    Ok(())
}

/// Reads a coloring of `g`. Edges the file does not mention stay blank.
pub fn parse_coloring(text: &str, g: &LabeledGraph) -> Result<Vec<ColorSlot>> {
    let mut slots = vec![ColorSlot::Blank; g.graph.edge_count()];
    let mut seen = vec![false; g.graph.edge_count()];
    let bad =
        |lineno: usize, msg: String| Error::MalformedInput(format!("line {}: {msg}", lineno + 1));
    for (lineno, line) in text.lines().enumerate() {
        let tokens: Vec<&str> = content(line).split_whitespace().collect();
        let (u, v, c) = match tokens.as_slice() {
            [] => continue,
            [u, v, c] => (*u, *v, *c),
            _ => return Err(bad(lineno, "expected `u v c`".into())),
        };
        let vertex = |l: &str| {
            g.vertex(l)
                .ok_or_else(|| bad(lineno, format!("unknown vertex `{l}`")))
        };
        let (u, v) = (vertex(u)?, vertex(v)?);
        let e: EdgeId = g
            .graph
            .find_edge(u, v)
            .ok_or_else(|| bad(lineno, "not an edge of the graph".into()))?;
        let c: Color = c
            .parse()
            .map_err(|_| bad(lineno, format!("bad color `{c}`")))?;
        if std::mem::replace(&mut seen[e], true) {
            return Err(bad(lineno, "edge listed twice".into()));
        }
        slots[e] = if c == 0 {
            ColorSlot::Blank
        } else {
            ColorSlot::Color(c)
        };
    }
    Ok(slots)
}

/// Loads a coloring into a state without enforcing properness; the palette
/// is sized to the largest color present.
pub fn load_coloring<'g>(g: &'g LabeledGraph, text: &str) -> Result<ColoringState<'g>> {
    let slots = parse_coloring(text, g)?;
    let q = slots.iter().filter_map(|s| s.color()).max().unwrap_or(1);
    Ok(ColoringState::from_slots_unchecked(&g.graph, q, slots))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_map_in_first_seen_order() {
        let g = parse_edge_list("# a triangle\nb a\na  c # trailing\n\nc b\n").unwrap();
        assert_eq!(g.labels, vec!["b", "a", "c"]);
        assert_eq!(g.graph.edges(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(g.vertex("c"), Some(2));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(
            parse_edge_list("a b c\n"),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            parse_edge_list("a a\n"),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            parse_edge_list("a b\nb a\n"),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn coloring_round_trip() {
        let g = parse_edge_list("x y\ny z\nz x\n").unwrap();
        let mut s = ColoringState::new(&g.graph, 3);
        s.assign(0, 1).unwrap();
        s.assign(1, 2).unwrap();
        s.flag(2).unwrap();
        let mut buf = Vec::new();
        write_coloring(&mut buf, &g, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "x y 1\ny z 2\nz x 0\n");
        let loaded = load_coloring(&g, &text).unwrap();
        assert_eq!(loaded.color_of(0), Some(1));
        assert_eq!(loaded.slot(2), ColorSlot::Blank);
        assert!(loaded.validate_proper().is_proper());
    }

    #[test]
    fn coloring_errors() {
        let g = parse_edge_list("x y\ny z\n").unwrap();
        assert!(parse_coloring("x z 1\n", &g).is_err());
        assert!(parse_coloring("x w 1\n", &g).is_err());
        assert!(parse_coloring("x y one\n", &g).is_err());
        assert!(parse_coloring("x y 1\ny x 2\n", &g).is_err());
        // orientation does not matter
        let slots = parse_coloring("y x 4\n", &g).unwrap();
        assert_eq!(slots, vec![ColorSlot::Color(4), ColorSlot::Blank]);
    }

    #[test]
    fn corrupted_coloring_is_detected() {
        let g = parse_edge_list("x y\ny z\n").unwrap();
        let s = load_coloring(&g, "x y 1\ny z 1\n").unwrap();
        let r = s.validate_proper();
        assert_eq!(r.conflicts.len(), 1);
        assert_eq!(r.conflicts[0].vertex, g.vertex("y").unwrap());
    }
}
