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

use crate::graph::{EdgeId, VertexId};
use crate::state::Color;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("color {color} is already used at vertex {vertex} (edge {edge})")]
    ImproperAssignment {
        edge: EdgeId,
        color: Color,
        vertex: VertexId,
    },

    #[error("color {color} is outside the palette [1, {q}]")]
    ColorOutOfRange { color: Color, q: Color },

    #[error("edge {0} is already colored or flagged")]
    AlreadyColored(EdgeId),

    #[error("edge {0} is not colored")]
    NotColored(EdgeId),

    #[error("edge {0} is not blank")]
    EdgeNotBlank(EdgeId),

    #[error("flipping the path would break properness: {0}")]
    ImproperFlip(String),

    #[error("shifting the fan would break properness: {0}")]
    ImproperShift(String),

    #[error("augmenting contract violated: {0}")]
    ImproperAugment(String),

    #[error("cannot sample from an empty palette")]
    EmptyPool,

    #[error("{available} colors are not enough for maximum degree {max_degree}")]
    InsufficientColors { available: Color, max_degree: usize },

    #[error("flagged subgraph has maximum degree {flagged_degree}, above the limit {limit:.3}")]
    FlaggedDegreeExceeded { flagged_degree: usize, limit: f64 },

    #[error("all {attempts} attempts failed and the greedy fallback is disabled")]
    Exhausted { attempts: u32 },

    #[error("graph has {edges} edges; exhaustive search is limited to {limit}")]
    TooLarge { edges: usize, limit: usize },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("random regular generator gave up after {0} attempts")]
    RejectionExhausted(u32),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
