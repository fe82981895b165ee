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

//! Seeded graph generators.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Attempts the random regular generator makes before giving up.
pub const REGULAR_ATTEMPTS: u32 = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Gnp { n: usize, p: f64 },
    RandomRegular { n: usize, d: usize },
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    Hypercube { dim: u32 },
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Gnp { n, p } => write!(f, "gnp(n={n};p={p})"),
            Model::RandomRegular { n, d } => write!(f, "regular(n={n};d={d})"),
            Model::Complete { n } => write!(f, "complete(n={n})"),
            Model::CompleteBipartite { a, b } => write!(f, "bipartite(a={a};b={b})"),
            Model::Hypercube { dim } => write!(f, "hypercube(dim={dim})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub model: Model,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, seed: u64) -> Self {
        Self { model, seed }
    }

    pub fn validate(&self) -> Result<()> {
        match self.model {
            Model::Gnp { p, .. } if !(0.0..=1.0).contains(&p) => {
                Err(Error::InvalidSpec(format!("p = {p} is outside [0, 1]")))
            }
            Model::RandomRegular { n, d } if d >= n.max(1) && !(n == 0 && d == 0) => Err(
                Error::InvalidSpec(format!("degree {d} needs more than {n} vertices")),
            ),
            Model::RandomRegular { n, d } if (n * d) % 2 == 1 => {
                Err(Error::InvalidSpec(format!("n * d = {} is odd", n * d)))
            }
            Model::Hypercube { dim } if dim == 0 || dim > 24 => Err(Error::InvalidSpec(format!(
                "dimension {dim} outside 1..=24"
            ))),
            _ => Ok(()),
        }
    }
}

/// Generates the graph described by `spec`; identical specs give identical
/// graphs, edge order included.
pub fn generate(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.model {
        Model::Gnp { n, p } => Ok(gnp(n, p, &mut rng)),
        Model::RandomRegular { n, d } => random_regular(n, d, &mut rng),
        Model::Complete { n } => {
            let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
            Ok(Graph::from_simple_edges(n, edges))
        }
        Model::CompleteBipartite { a, b } => {
            let edges = (0..a)
                .flat_map(|u| (0..b).map(move |v| (u, a + v)))
                .collect();
            Ok(Graph::from_simple_edges(a + b, edges))
        }
        Model::Hypercube { dim } => {
            let n = 1usize << dim;
            let mut edges = Vec::with_capacity(n * dim as usize / 2);
            for u in 0..n {
                for bit in 0..dim {
                    let v = u ^ (1 << bit);
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
            Ok(Graph::from_simple_edges(n, edges))
        }
    }
}

/// G(n, p) with geometric skipping over the pairs `u < v`, O(n + m) expected.
fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    if p >= 1.0 {
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        return Graph::from_simple_edges(n, edges);
    }
    if p > 0.0 && n > 1 {
        let log_q = (1.0 - p).ln();
        // walk pairs (v, w) with w < v
        let (mut v, mut w): (usize, i64) = (1, -1);
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v));
            }
        }
    }
    Graph::from_simple_edges(n, edges)
}

/// Pairing model with per-pair rejection.
///
/// Each round shuffles the unmatched points and pairs them off, keeping a
/// pair unless it is a loop or repeats an edge; rejected points go back for
/// the next round. An attempt is abandoned when no admissible pair is left
/// among the remaining points.
fn random_regular<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<Graph> {
    if d == 0 || n == 0 {
        return Ok(Graph::empty(n));
    }
    for _ in 0..REGULAR_ATTEMPTS {
        if let Some(edges) = try_regular(n, d, rng) {
            return Ok(Graph::from_simple_edges(n, edges));
        }
    }
    Err(Error::RejectionExhausted(REGULAR_ATTEMPTS))
}

fn try_regular<R: Rng>(n: usize, d: usize, rng: &mut R) -> Option<Vec<(VertexId, VertexId)>> {
    let mut present: HashSet<(VertexId, VertexId)> = HashSet::with_capacity(n * d / 2);
    let mut edges = Vec::with_capacity(n * d / 2);
    let mut points: Vec<VertexId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !points.is_empty() {
        points.shuffle(rng);
        let mut rejected = Vec::new();
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u != v && present.insert((u, v)) {
                edges.push((u, v));
            } else {
                rejected.extend_from_slice(pair);
            }
        }
        if rejected.is_empty() {
            break;
        }
        if !has_admissible_pair(&rejected, &present) {
            return None;
        }
        points = rejected;
    }
    Some(edges)
}

fn has_admissible_pair(points: &[VertexId], present: &HashSet<(VertexId, VertexId)>) -> bool {
    let mut distinct: Vec<VertexId> = points.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.iter().enumerate().any(|(i, &u)| {
        distinct[i + 1..]
            .iter()
            .any(|&v| !present.contains(&(u, v)))
    })
}
