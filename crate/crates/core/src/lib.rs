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

//! Edge coloring toolkit.
//!
//! The centerpiece is [`engine::edge_color`], a randomized two-stage
//! algorithm that properly colors the edges of a simple graph with at most
//! `ceil((1 + eps) * Delta)` colors. Stage one colors almost every edge with
//! `ceil((1 + eps/2) * Delta)` colors by building short Vizing chains from
//! small random palettes, and moves the uncolored edge down long alternating
//! paths instead of flipping them. Edges that cannot be handled cheaply are
//! flagged, and stage two colors the flagged subgraph with a disjoint palette
//! using the folklore random greedy colorer.
//!
//! Supporting modules:
//!
//! * [`graph`] and [`state`]: the graph and the partial coloring with O(1)
//!   missing-color tables, plus an independent validator.
//! * [`chain`]: fans, alternating paths, Vizing chains, shifting and flipping.
//! * [`oracle`]: exhaustive chromatic index and extension checks for tiny graphs.
//! * [`generate`], [`io`], [`bench`]: generators, file formats and the
//!   benchmark harness behind the `edgecolor` binary.

pub mod bench;
pub mod chain;
pub mod engine;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod state;
pub mod trace;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, VertexId};
pub use state::{Color, ColorSlot, ColoringState};
