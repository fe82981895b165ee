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

//! Structured events emitted by the chain operations when a sink is attached.

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::graph::{EdgeId, VertexId};
use crate::state::Color;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// An alternating path had its two colors interchanged.
    Flip {
        alpha: Color,
        beta: Color,
        edges: Vec<EdgeId>,
    },
    /// A fan was shifted; `edges[i]` took the old color of `edges[i + 1]`.
    Shift {
        pivot: VertexId,
        edges: Vec<EdgeId>,
    },
    /// A blank edge received its color at the end of an augmentation.
    Augment {
        edge: EdgeId,
        color: Color,
    },
    /// An edge on a long alternating path was uncolored to move the blank
    /// edge down the path.
    Cut {
        edge: EdgeId,
        color: Color,
    },
    Flag {
        edge: EdgeId,
    },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(edges: &[EdgeId]) -> String {
            edges
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        match self {
            TraceEvent::Flip { alpha, beta, edges } => {
                write!(f, "flip alpha={alpha} beta={beta} edges={}", list(edges))
            }
            TraceEvent::Shift { pivot, edges } => {
                write!(f, "shift pivot={pivot} edges={}", list(edges))
            }
            TraceEvent::Augment { edge, color } => write!(f, "augment edge={edge} color={color}"),
            TraceEvent::Cut { edge, color } => write!(f, "cut edge={edge} color={color}"),
            TraceEvent::Flag { edge } => write!(f, "flag edge={edge}"),
        }
    }
}

pub trait TraceSink {
    fn record(&mut self, event: TraceEvent);
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: TraceEvent) {
        self.push(event);
    }
}

impl<W: std::io::Write> TraceSink for std::io::LineWriter<W> {
    fn record(&mut self, event: TraceEvent) {
        // Write errors are dropped.
        let _ = std::io::Write::write_fmt(self, format_args!("{event}\n"));
    }
}

impl TraceSink for Arc<Mutex<Vec<TraceEvent>>> {
    fn record(&mut self, event: TraceEvent) {
        self.lock().expect("trace buffer poisoned").push(event);
    }
}
