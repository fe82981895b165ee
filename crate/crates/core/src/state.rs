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

//! Partial edge colorings with O(1) missing-color lookups.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::trace::{TraceEvent, TraceSink};

/// Colors are 1-based: a palette of size `q` is `{1, ..., q}`.
pub type Color = u32;

const NO_EDGE: u32 = u32::MAX;

/// An edge's endpoints next to its slot, so the random edge visits of the
/// coloring loop touch one cache line instead of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct EdgeRecord {
    ends: [u32; 2],
    slot: ColorSlot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorSlot {
    Blank,
    Flagged,
    Color(Color),
}

impl ColorSlot {
    pub fn color(self) -> Option<Color> {
        match self {
            ColorSlot::Color(c) => Some(c),
            _ => None,
        }
    }
}

/// A proper partial `q`-edge-coloring of a borrowed graph.
///
/// For every vertex `x` the state keeps a dense `q`-entry table whose entry
/// `c` holds the edge at `x` colored `c`, or nothing when `c` is missing at
/// `x`, plus a bitset of the colors in use at `x` so membership tests touch
/// a single cache line for moderate `q`. All mutating operations keep the
/// tables in sync with the slots and refuse writes that would put two edges
/// of the same color at a vertex.
pub struct ColoringState<'g> {
    graph: &'g Graph,
    q: Color,
    records: Vec<EdgeRecord>,
    // vertex x, color c -> edge id at offset x * q + (c - 1)
    table: Vec<u32>,
    // bit c - 1 of vertex x's block of `words` words is set when c is used at x
    used: Vec<u64>,
    words: usize,
    colored: usize,
    flagged: usize,
    trace: Option<Box<dyn TraceSink + Send + 'g>>,
}

impl<'g> ColoringState<'g> {
    /// All edges blank, every color missing everywhere.
    pub fn new(graph: &'g Graph, q: Color) -> Self {
        assert!(q >= 1, "palette size must be at least 1");
        assert!(
            graph.edge_count() < NO_EDGE as usize && graph.vertex_count() < NO_EDGE as usize,
            "vertex and edge ids must fit in 32 bits"
        );
        let words = (q as usize).div_ceil(64);
        Self {
            graph,
            q,
            records: graph
                .edges()
                .iter()
                .map(|&(u, v)| EdgeRecord {
                    ends: [u as u32, v as u32],
                    slot: ColorSlot::Blank,
                })
                .collect(),
            table: vec![NO_EDGE; graph.vertex_count() * q as usize],
            used: vec![0; graph.vertex_count() * words],
            words,
            colored: 0,
            flagged: 0,
            trace: None,
        }
    }

    /// Builds a state from raw slots without checking properness.
    ///
    /// When two edges at a vertex share a color the table keeps the later
    /// one. Meant for loading colorings of unknown quality, which should then
    /// go through [`ColoringState::validate_proper`].
    pub fn from_slots_unchecked(graph: &'g Graph, q: Color, slots: Vec<ColorSlot>) -> Self {
        assert_eq!(slots.len(), graph.edge_count());
        let mut state = Self::new(graph, q);
        for (e, slot) in slots.into_iter().enumerate() {
            state.set_slot_unchecked(e, slot);
            if let ColorSlot::Color(c) = slot {
                if (1..=q).contains(&c) {
                    let (u, v) = graph.endpoints(e);
                    state.write_entry(u, c, e as u32);
                    state.write_entry(v, c, e as u32);
                }
            }
        }
        state
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Palette size.
    pub fn q(&self) -> Color {
        self.q
    }

    #[inline]
    pub fn slot(&self, e: EdgeId) -> ColorSlot {
        self.records[e].slot
    }

    /// Snapshot of every slot in edge order.
    pub fn slots(&self) -> Vec<ColorSlot> {
        self.records.iter().map(|r| r.slot).collect()
    }

    /// Hints the CPU to start loading the record of `e`. No-op off x86-64.
    #[inline]
    pub fn prefetch_edge(&self, e: EdgeId) {
        #[cfg(target_arch = "x86_64")]
        if let Some(record) = self.records.get(e) {
            use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
            // SAFETY: a prefetch never faults and has no architectural effect.
            unsafe { _mm_prefetch::<_MM_HINT_T0>((record as *const EdgeRecord).cast()) }
        }
        #[cfg(not(target_arch = "x86_64"))]
        let _ = e;
    }

    /// Endpoints of `e`, read from the state's own edge records.
    #[inline]
    pub fn ends(&self, e: EdgeId) -> (VertexId, VertexId) {
        let [u, v] = self.records[e].ends;
        (u as VertexId, v as VertexId)
    }

    #[inline]
    pub fn color_of(&self, e: EdgeId) -> Option<Color> {
        self.records[e].slot.color()
    }

    pub fn colored_count(&self) -> usize {
        self.colored
    }

    pub fn flagged_count(&self) -> usize {
        self.flagged
    }

    pub fn blank_count(&self) -> usize {
        self.records.len() - self.colored - self.flagged
    }

    /// Largest color on any edge, 0 if nothing is colored.
    pub fn max_color_used(&self) -> Color {
        self.records
            .iter()
            .filter_map(|r| r.slot.color())
            .max()
            .unwrap_or(0)
    }

    #[inline]
    fn offset(&self, x: VertexId, c: Color) -> usize {
        debug_assert!(
            (1..=self.q).contains(&c),
            "color {c} outside [1, {}]",
            self.q
        );
        x * self.q as usize + (c as usize - 1)
    }

    #[inline]
    fn bit(&self, x: VertexId, c: Color) -> (usize, u64) {
        let i = c as usize - 1;
        (x * self.words + i / 64, 1u64 << (i % 64))
    }

    #[inline]
    fn write_entry(&mut self, x: VertexId, c: Color, e: u32) {
        let o = self.offset(x, c);
        self.table[o] = e;
        let (w, mask) = self.bit(x, c);
        if e == NO_EDGE {
            self.used[w] &= !mask;
        } else {
            self.used[w] |= mask;
        }
    }

    /// The edge at `x` colored `c`, if any.
    #[inline]
    pub fn edge_at(&self, x: VertexId, c: Color) -> Option<EdgeId> {
        let e = self.table[self.offset(x, c)];
        (e != NO_EDGE).then_some(e as EdgeId)
    }

    /// The edge at `x` colored `c` and its other endpoint, if any.
    #[inline]
    pub fn incident_at(&self, x: VertexId, c: Color) -> Option<(EdgeId, VertexId)> {
        self.edge_at(x, c).map(|e| {
            let (u, v) = self.ends(e);
            (e, if u == x { v } else { u })
        })
    }

    /// The neighbor `y` with `phi(xy) = c`, or `None` when `c` is missing at `x`.
    #[inline]
    pub fn missing_lookup(&self, x: VertexId, c: Color) -> Option<VertexId> {
        self.incident_at(x, c).map(|(_, y)| y)
    }

    #[inline]
    pub fn is_missing(&self, x: VertexId, c: Color) -> bool {
        debug_assert!(
            (1..=self.q).contains(&c),
            "color {c} outside [1, {}]",
            self.q
        );
        let (w, mask) = self.bit(x, c);
        self.used[w] & mask == 0
    }

    /// Colors missing at `x`, ascending. O(q).
    pub fn missing_colors(&self, x: VertexId) -> Vec<Color> {
        (1..=self.q).filter(|&c| self.is_missing(x, c)).collect()
    }

    fn check_color(&self, c: Color) -> Result<()> {
        if (1..=self.q).contains(&c) {
            Ok(())
        } else {
            Err(Error::ColorOutOfRange {
                color: c,
                q: self.q,
            })
        }
    }

    /// Colors the blank edge `e` with `c`.
    pub fn assign(&mut self, e: EdgeId, c: Color) -> Result<()> {
        if self.records[e].slot != ColorSlot::Blank {
            return Err(Error::AlreadyColored(e));
        }
        self.check_color(c)?;
        let (u, v) = self.ends(e);
        for x in [u, v] {
            if !self.is_missing(x, c) {
                return Err(Error::ImproperAssignment {
                    edge: e,
                    color: c,
                    vertex: x,
                });
            }
        }
        self.write_entry(u, c, e as u32);
        self.write_entry(v, c, e as u32);
        self.records[e].slot = ColorSlot::Color(c);
        self.colored += 1;
        Ok(())
    }

    /// Uncolors `e` and returns its former color.
    pub fn unassign(&mut self, e: EdgeId) -> Result<Color> {
        let ColorSlot::Color(c) = self.records[e].slot else {
            return Err(Error::NotColored(e));
        };
        let (u, v) = self.ends(e);
        self.write_entry(u, c, NO_EDGE);
        self.write_entry(v, c, NO_EDGE);
        self.records[e].slot = ColorSlot::Blank;
        self.colored -= 1;
        Ok(c)
    }

    /// Marks the blank edge `e` as flagged.
    pub fn flag(&mut self, e: EdgeId) -> Result<()> {
        if self.records[e].slot != ColorSlot::Blank {
            return Err(Error::AlreadyColored(e));
        }
        self.records[e].slot = ColorSlot::Flagged;
        self.flagged += 1;
        self.emit(|| TraceEvent::Flag { edge: e });
        Ok(())
    }

    /// Turns a flagged edge back into a blank one.
    pub(crate) fn unflag(&mut self, e: EdgeId) {
        debug_assert_eq!(self.records[e].slot, ColorSlot::Flagged);
        self.records[e].slot = ColorSlot::Blank;
        self.flagged -= 1;
    }

    /// Minimum color missing at both endpoints of the blank edge `e`. O(q).
    pub fn is_happy(&self, e: EdgeId) -> Result<Option<Color>> {
        if self.records[e].slot != ColorSlot::Blank {
            return Err(Error::EdgeNotBlank(e));
        }
        let (u, v) = self.ends(e);
        let (bu, bv) = (u * self.words, v * self.words);
        for w in 0..self.words {
            let free = !(self.used[bu + w] | self.used[bv + w]);
            if free != 0 {
                let c = (w * 64 + free.trailing_zeros() as usize + 1) as Color;
                return Ok((c <= self.q).then_some(c));
            }
        }
        Ok(None)
    }

    /// Grows the palette to `q` colors, keeping every slot.
    pub fn widen(&mut self, q: Color) {
        assert!(q >= self.q, "cannot shrink the palette");
        if q == self.q {
            return;
        }
        let (old, new) = (self.q as usize, q as usize);
        let mut table = vec![NO_EDGE; self.graph.vertex_count() * new];
        for x in 0..self.graph.vertex_count() {
            table[x * new..x * new + old].copy_from_slice(&self.table[x * old..(x + 1) * old]);
        }
        let words = new.div_ceil(64);
        let mut used = vec![0; self.graph.vertex_count() * words];
        for x in 0..self.graph.vertex_count() {
            used[x * words..x * words + self.words]
                .copy_from_slice(&self.used[x * self.words..(x + 1) * self.words]);
        }
        self.table = table;
        self.used = used;
        self.words = words;
        self.q = q;
    }

    /// Overwrites a slot without touching the missing tables.
    ///
    /// Only for building deliberately broken states in tests and for
    /// [`ColoringState::from_slots_unchecked`].
    pub fn set_slot_unchecked(&mut self, e: EdgeId, slot: ColorSlot) {
        let count = |s: ColorSlot| match s {
            ColorSlot::Blank => (0, 0),
            ColorSlot::Flagged => (0, 1),
            ColorSlot::Color(_) => (1, 0),
        };
        let (oc, of) = count(self.records[e].slot);
        let (nc, nf) = count(slot);
        self.colored = self.colored - oc + nc;
        self.flagged = self.flagged - of + nf;
        self.records[e].slot = slot;
    }

    /// Overwrites one missing-table entry. Test-only escape hatch.
    pub fn set_table_entry_unchecked(&mut self, x: VertexId, c: Color, e: Option<EdgeId>) {
        self.write_entry(x, c, e.map_or(NO_EDGE, |e| e as u32));
    }

    /// Attaches a sink that receives flip/shift/augment events.
    pub fn set_trace(&mut self, sink: Box<dyn TraceSink + Send + 'g>) {
        self.trace = Some(sink);
    }

    pub fn take_trace(&mut self) -> Option<Box<dyn TraceSink + Send + 'g>> {
        self.trace.take()
    }

    #[inline]
    pub(crate) fn tracing(&self) -> bool {
        self.trace.is_some()
    }

    #[inline]
    pub(crate) fn emit(&mut self, event: impl FnOnce() -> TraceEvent) {
        if let Some(sink) = self.trace.as_mut() {
            sink.record(event());
        }
    }

    /// Full rescan of the coloring.
    ///
    /// Properness is decided from the slots and adjacency lists alone; the
    /// missing tables are only compared against the rescan afterwards.
    pub fn validate_proper(&self) -> ValidationReport {
        let g = self.graph;
        let q = self.q as usize;
        let mut report = ValidationReport::default();
        for (e, record) in self.records.iter().enumerate() {
            match record.slot {
                ColorSlot::Blank => report.blank += 1,
                ColorSlot::Flagged => report.flagged += 1,
                ColorSlot::Color(c) => {
                    report.colored += 1;
                    report.max_color = report.max_color.max(c);
                    if c == 0 || c > self.q {
                        report.out_of_range.push(e);
                    }
                }
            }
        }

        let mut seen = vec![NO_EDGE; q + 1];
        for x in 0..g.vertex_count() {
            for &(_, e) in g.neighbors(x) {
                let Some(c) = self.records[e].slot.color() else {
                    continue;
                };
                if c == 0 || c > self.q {
                    continue;
                }
                let prev = seen[c as usize];
                if prev == NO_EDGE {
                    seen[c as usize] = e as u32;
                } else {
                    report.conflicts.push(Conflict {
                        vertex: x,
                        color: c,
                        edges: (prev as EdgeId, e),
                    });
                }
            }
            for c in 1..=self.q {
                let rescanned = seen[c as usize];
                let stored = self.table[x * q + c as usize - 1];
                let bit_agrees = self.is_missing(x, c) == (stored == NO_EDGE);
                let consistent = bit_agrees
                    && if rescanned == NO_EDGE {
                        stored == NO_EDGE
                    } else {
                        stored != NO_EDGE
                            && (stored as usize) < self.records.len()
                            && self.records[stored as usize].slot == ColorSlot::Color(c)
                            && {
                                let (a, b) = g.endpoints(stored as usize);
                                a == x || b == x
                            }
                    };
                if !consistent {
                    report.table_mismatches.push(TableMismatch {
                        vertex: x,
                        color: c,
                        stored: (stored != NO_EDGE).then_some(stored as EdgeId),
                        rescanned: (rescanned != NO_EDGE).then_some(rescanned as EdgeId),
                    });
                }
            }
            for &(_, e) in g.neighbors(x) {
                if let Some(c) = self.records[e].slot.color() {
                    if c as usize <= q {
                        seen[c as usize] = NO_EDGE;
                    }
                }
            }
        }
        report.counters_consistent =
            report.colored == self.colored && report.flagged == self.flagged;
        report
    }

    /// The subgraph G* formed by the flagged edges, on the same vertex set.
    pub fn flagged_subgraph(&self) -> FlaggedSubgraph {
        let mut parent_edges = Vec::with_capacity(self.flagged);
        let mut pairs = Vec::with_capacity(self.flagged);
        for (e, record) in self.records.iter().enumerate() {
            if record.slot == ColorSlot::Flagged {
                parent_edges.push(e);
                pairs.push(self.graph.endpoints(e));
            }
        }
        let graph = Graph::from_simple_edges(self.graph.vertex_count(), pairs);
        let max_degree = graph.max_degree();
        FlaggedSubgraph {
            graph,
            parent_edges,
            max_degree,
        }
    }
}

impl Clone for ColoringState<'_> {
    /// Clones the coloring; an attached trace sink is not carried over.
    fn clone(&self) -> Self {
        Self {
            graph: self.graph,
            q: self.q,
            records: self.records.clone(),
            table: self.table.clone(),
            used: self.used.clone(),
            words: self.words,
            colored: self.colored,
            flagged: self.flagged,
            trace: None,
        }
    }
}

impl fmt::Debug for ColoringState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoringState")
            .field("q", &self.q)
            .field("edges", &self.records.len())
            .field("colored", &self.colored)
            .field("flagged", &self.flagged)
            .finish_non_exhaustive()
    }
}

/// Two edges at `vertex` that share `color`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub vertex: VertexId,
    pub color: Color,
    pub edges: (EdgeId, EdgeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMismatch {
    pub vertex: VertexId,
    pub color: Color,
    pub stored: Option<EdgeId>,
    pub rescanned: Option<EdgeId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub conflicts: Vec<Conflict>,
    pub out_of_range: Vec<EdgeId>,
    pub table_mismatches: Vec<TableMismatch>,
    pub counters_consistent: bool,
    pub colored: usize,
    pub blank: usize,
    pub flagged: usize,
    pub max_color: Color,
}

impl ValidationReport {
    /// No conflicts, no out-of-range colors, tables and counters in sync.
    pub fn is_proper(&self) -> bool {
        self.conflicts.is_empty()
            && self.out_of_range.is_empty()
            && self.table_mismatches.is_empty()
            && self.counters_consistent
    }

    /// Proper, and every edge carries a color.
    pub fn is_complete(&self) -> bool {
        self.is_proper() && self.blank == 0 && self.flagged == 0
    }
}

#[derive(Debug, Clone)]
pub struct FlaggedSubgraph {
    pub graph: Graph,
    /// `parent_edges[i]` is the id in the original graph of edge `i` of `graph`.
    pub parent_edges: Vec<EdgeId>,
    pub max_degree: usize,
}
