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

//! Exhaustive ground truth for tiny graphs.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::state::{Color, ColorSlot, ColoringState};

/// Largest edge count the exhaustive searches accept.
pub const ORACLE_EDGE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub chromatic_index: Color,
    /// `witness[e]` is the color of edge `e` in an optimal coloring.
    pub witness: Vec<Color>,
}

/// Whether no two edges sharing an endpoint carry the same color. Uncolored
/// edges (`None`) are ignored. Pairwise check over adjacency lists.
pub fn is_proper_coloring(g: &Graph, colors: &[Option<Color>]) -> bool {
    assert_eq!(colors.len(), g.edge_count());
    (0..g.vertex_count()).all(|x| {
        let incident = g.neighbors(x);
        incident.iter().enumerate().all(|(i, &(_, e))| {
            incident[i + 1..]
                .iter()
                .all(|&(_, f)| colors[e].is_none() || colors[e] != colors[f])
        })
    })
}

fn guard(g: &Graph) -> Result<()> {
    if g.edge_count() > ORACLE_EDGE_LIMIT {
        return Err(Error::TooLarge {
            edges: g.edge_count(),
            limit: ORACLE_EDGE_LIMIT,
        });
    }
    Ok(())
}

/// Backtracking search for a proper `q`-coloring of the edges in `order`.
struct Search<'a> {
    g: &'a Graph,
    order: Vec<EdgeId>,
    q: Color,
    // bit c set when color c is used at the vertex
    used: Vec<u64>,
    colors: Vec<Option<Color>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, mut order: Vec<EdgeId>, q: Color) -> Self {
        order.sort_by_key(|&e| {
            let (u, v) = g.endpoints(e);
            std::cmp::Reverse(g.degree(u) + g.degree(v))
        });
        Self {
            g,
            order,
            q,
            used: vec![0; g.vertex_count()],
            colors: vec![None; g.edge_count()],
        }
    }

    fn run(mut self) -> Option<Vec<Option<Color>>> {
        self.extend(0).then_some(self.colors)
    }

    fn extend(&mut self, depth: usize) -> bool {
        let Some(&e) = self.order.get(depth) else {
            return true;
        };
        let (u, v) = self.g.endpoints(e);
        // colors are interchangeable, so the first edge may take color 1
        let top = if depth == 0 { 1.min(self.q) } else { self.q };
        for c in 1..=top {
            let bit = 1u64 << c;
            if (self.used[u] | self.used[v]) & bit != 0 {
                continue;
            }
            self.used[u] |= bit;
            self.used[v] |= bit;
            self.colors[e] = Some(c);
            if self.extend(depth + 1) {
                return true;
            }
            self.used[u] &= !bit;
            self.used[v] &= !bit;
            self.colors[e] = None;
        }
        false
    }
}

/// Exact chromatic index by exhaustive search, trying `q = Delta, Delta+1, ...`.
pub fn brute_chromatic_index(g: &Graph) -> Result<OracleResult> {
    guard(g)?;
    let m = g.edge_count();
    if m == 0 {
        return Ok(OracleResult {
            chromatic_index: 0,
            witness: Vec::new(),
        });
    }
    let all: Vec<EdgeId> = (0..m).collect();
    // The search does not assume Vizing's bound; it keeps going until it
    // finds a coloring, and m colors always suffice.
    for q in g.max_degree() as Color..=m as Color {
        if let Some(colors) = Search::new(g, all.clone(), q).run() {
            let witness: Vec<Color> = colors
                .into_iter()
                .map(|c| c.expect("all colored"))
                .collect();
            return Ok(OracleResult {
                chromatic_index: q,
                witness,
            });
        }
    }
    unreachable!("m distinct colors always give a proper coloring")
}

/// Whether the colored edges of `state` together with the blank edge `e`
/// admit some proper coloring from the state's palette.
pub fn check_extension_exists(state: &ColoringState<'_>, e: EdgeId) -> Result<bool> {
    let g = state.graph();
    guard(g)?;
    if state.slot(e) != ColorSlot::Blank {
        return Err(Error::EdgeNotBlank(e));
    }
    let edges: Vec<EdgeId> = (0..g.edge_count())
        .filter(|&f| f == e || state.color_of(f).is_some())
        .collect();
    Ok(Search::new(g, edges, state.q()).run().is_some())
}
