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

//! Fans, alternating paths and Vizing chains.
//!
//! A fan `(x, y_0, ..., y_{k-1})` has a blank edge `x y_0` and each later
//! edge `x y_i` colored with a color missing at `y_{i-1}`. Shifting it moves
//! every color one step towards `y_0` and leaves `x y_{k-1}` blank. An
//! alternating path starts at `x` along color `alpha` and then alternates
//! `beta, alpha, ...`; flipping it interchanges the two colors. A Vizing
//! chain is a fan followed by an alternating path from its pivot, and
//! augmenting along it colors the fan's blank edge.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};
use crate::state::{Color, ColorSlot, ColoringState};
use crate::trace::TraceEvent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pivot: VertexId,
    leaves: Vec<VertexId>,
    // edges[i] joins pivot and leaves[i]
    edges: Vec<EdgeId>,
}

impl Fan {
    /// A fan of length 1 on the blank edge `e = (pivot, leaf)`.
    pub fn new(pivot: VertexId, leaf: VertexId, e: EdgeId) -> Self {
        Self {
            pivot,
            leaves: vec![leaf],
            edges: vec![e],
        }
    }

    /// Builds a fan from explicit leaves, looking up the pivot edges.
    ///
    /// Only the shape is checked here: distinct leaves, all adjacent to the
    /// pivot. Color conditions are checked by the operations using it.
    pub fn from_leaves(
        state: &ColoringState<'_>,
        pivot: VertexId,
        leaves: &[VertexId],
    ) -> Result<Self> {
        let g = state.graph();
        let mut edges = Vec::with_capacity(leaves.len());
        for (i, &y) in leaves.iter().enumerate() {
            if leaves[..i].contains(&y) {
                return Err(Error::MalformedInput(format!("fan leaf {y} repeated")));
            }
            let e = g.find_edge(pivot, y).ok_or_else(|| {
                Error::MalformedInput(format!("fan leaf {y} is not adjacent to pivot {pivot}"))
            })?;
            edges.push(e);
        }
        if leaves.is_empty() {
            return Err(Error::MalformedInput("fan needs at least one leaf".into()));
        }
        Ok(Self {
            pivot,
            leaves: leaves.to_vec(),
            edges,
        })
    }

    pub fn pivot(&self) -> VertexId {
        self.pivot
    }

    pub fn leaves(&self) -> &[VertexId] {
        &self.leaves
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.leaves[0]
    }

    pub fn end(&self) -> VertexId {
        self.leaves[self.leaves.len() - 1]
    }

    /// The fan `(x, y_0, ..., y_{len-1})`.
    pub fn prefix(&self, len: usize) -> Fan {
        Fan {
            pivot: self.pivot,
            leaves: self.leaves[..len].to_vec(),
            edges: self.edges[..len].to_vec(),
        }
    }

    fn position(&self, v: VertexId) -> Option<usize> {
        self.leaves.iter().position(|&y| y == v)
    }
}

/// An `alpha`/`beta` alternating path `x_0, ..., x_s` whose first edge is
/// colored `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltPath {
    alpha: Color,
    // 0 for a single-vertex path built without a second color
    beta: Color,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    truncated: bool,
}

impl AltPath {
    /// The single-vertex path `(x)`.
    pub fn trivial(x: VertexId, alpha: Color) -> Self {
        Self {
            alpha,
            beta: 0,
            vertices: vec![x],
            edges: Vec::new(),
            truncated: false,
        }
    }

    pub fn alpha(&self) -> Color {
        self.alpha
    }

    pub fn beta(&self) -> Color {
        self.beta
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Set when the walk stopped at the length cap while the path continued.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        self.vertices[self.vertices.len() - 1]
    }

    /// Color the `i`-th edge carries under the coloring the path was read from.
    pub fn color_of_edge(&self, i: usize) -> Color {
        if i.is_multiple_of(2) {
            self.alpha
        } else {
            self.beta
        }
    }

    /// The first `len` edges. The prefix counts as truncated iff it is
    /// shorter than this path or this path was truncated.
    pub fn prefix(&self, len: usize) -> AltPath {
        AltPath {
            alpha: self.alpha,
            beta: self.beta,
            vertices: self.vertices[..=len].to_vec(),
            edges: self.edges[..len].to_vec(),
            truncated: len < self.edges.len() || self.truncated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanResult {
    pub fan: Fan,
    /// A color missing at both `y_{k-1}` and `y_{index-1}`.
    pub color: Color,
    /// In `1..=fan.len()`; equal to `fan.len()` when `x y_{k-1}` becomes
    /// happy after shifting the fan.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VizingChain {
    pub fan: Fan,
    pub path: AltPath,
    pub color: Color,
}

/// Why a chain could not be built from the sampled palette.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainFailure {
    /// No palette color is missing at the fan's frontier vertex.
    Fan,
    /// No palette color is missing at the pivot.
    Pivot,
}

#[inline]
fn min_missing(state: &ColoringState<'_>, v: VertexId, palette: &[Color]) -> Option<Color> {
    palette.iter().copied().find(|&c| state.is_missing(v, c))
}

fn debug_check_palette(state: &ColoringState<'_>, palette: &[Color]) {
    debug_assert!(!palette.is_empty(), "palette must be nonempty");
    debug_assert!(
        palette.windows(2).all(|w| w[0] < w[1]),
        "palette must be strictly ascending"
    );
    debug_assert!(palette.iter().all(|&c| c >= 1 && c <= state.q()));
}

/// Grows a fan around `pivot` starting from the blank edge `e`.
///
/// `palette` must be strictly ascending. Runs in O(|palette|^2) time and
/// returns a fan of length at most `|palette| + 1`.
pub fn make_fan(
    state: &ColoringState<'_>,
    e: EdgeId,
    pivot: VertexId,
    palette: &[Color],
) -> Result<FanResult, ChainFailure> {
    debug_check_palette(state, palette);
    debug_assert_eq!(state.slot(e), ColorSlot::Blank);
    let (u, v) = state.ends(e);
    let mut fan = Fan::new(pivot, if u == pivot { v } else { u }, e);
    let mut frontier = fan.start();
    loop {
        let eta = min_missing(state, frontier, palette).ok_or(ChainFailure::Fan)?;
        let result = match state.incident_at(pivot, eta) {
            None => Some(fan.len()),
            Some((fe, z)) => match fan.position(z) {
                Some(j) => Some(j),
                None => {
                    fan.leaves.push(z);
                    fan.edges.push(fe);
                    frontier = z;
                    None
                }
            },
        };
        if let Some(index) = result {
            debug_assert!(index >= 1 && index <= fan.len());
            debug_assert!(state.is_missing(fan.end(), eta));
            debug_assert!(state.is_missing(fan.leaves[index - 1], eta));
            debug_assert!(fan.len() <= palette.len() + 1);
            return Ok(FanResult {
                fan,
                color: eta,
                index,
            });
        }
    }
}

/// Walks the `alpha`/`beta` path leaving `x` along `alpha`, for at most
/// `cap` edges. `beta` must be missing at `x`.
pub fn follow_path(
    state: &ColoringState<'_>,
    x: VertexId,
    alpha: Color,
    beta: Color,
    cap: usize,
) -> AltPath {
    debug_assert_ne!(alpha, beta);
    debug_assert!(
        state.is_missing(x, beta),
        "beta must be missing at the start"
    );
    let mut vertices = vec![x];
    let mut edges = Vec::new();
    let (mut current, mut color, mut other) = (x, alpha, beta);
    let mut truncated = false;
    while let Some((e, next)) = state.incident_at(current, color) {
        if edges.len() == cap {
            truncated = true;
            break;
        }
        current = next;
        vertices.push(current);
        edges.push(e);
        std::mem::swap(&mut color, &mut other);
    }
    AltPath {
        alpha,
        beta,
        vertices,
        edges,
        truncated,
    }
}

/// Builds a Vizing chain for the blank edge `e` with pivot `pivot`, using
/// only colors from `palette` and walking at most `cap` path edges.
pub fn vizing_chain(
    state: &ColoringState<'_>,
    e: EdgeId,
    pivot: VertexId,
    palette: &[Color],
    cap: usize,
) -> Result<VizingChain, ChainFailure> {
    let FanResult { fan, color, index } = make_fan(state, e, pivot, palette)?;
    if index == fan.len() {
        return Ok(VizingChain {
            fan,
            path: AltPath::trivial(pivot, color),
            color,
        });
    }
    let beta = min_missing(state, pivot, palette).ok_or(ChainFailure::Pivot)?;
    let path = follow_path(state, pivot, color, beta, cap);
    Ok(VizingChain { fan, path, color })
}

/// Interchanges the two colors along `path`.
///
/// On a contract breach the state is rolled back and `ImproperFlip` is
/// returned.
pub fn flip_path(state: &mut ColoringState<'_>, path: &AltPath) -> Result<()> {
    if path.is_empty() {
        return Ok(());
    }
    for (i, &e) in path.edges.iter().enumerate() {
        if state.color_of(e) != Some(path.color_of_edge(i)) {
            return Err(Error::ImproperFlip(format!(
                "edge {e} at position {i} is {:?}, expected color {}",
                state.slot(e),
                path.color_of_edge(i)
            )));
        }
    }
    for &e in &path.edges {
        state.unassign(e)?;
    }
    for (i, &e) in path.edges.iter().enumerate() {
        let target = path.color_of_edge(i + 1);
        if let Err(err) = state.assign(e, target) {
            for &done in &path.edges[..i] {
                state.unassign(done)?;
            }
            for (k, &f) in path.edges.iter().enumerate() {
                state.assign(f, path.color_of_edge(k))?;
            }
            return Err(Error::ImproperFlip(err.to_string()));
        }
    }
    if state.tracing() {
        let (alpha, beta, edges) = (path.alpha, path.beta, path.edges.clone());
        state.emit(|| TraceEvent::Flip { alpha, beta, edges });
    }
    Ok(())
}

/// Gives each `x y_i` the color of `x y_{i+1}` and blanks `x y_{k-1}`.
///
/// On a contract breach the state is rolled back and `ImproperShift` is
/// returned.
pub fn shift_fan(state: &mut ColoringState<'_>, fan: &Fan) -> Result<()> {
    if state.slot(fan.edges[0]) != ColorSlot::Blank {
        return Err(Error::ImproperShift(format!(
            "first fan edge {} is not blank",
            fan.edges[0]
        )));
    }
    let k = fan.len();
    if k == 1 {
        return Ok(());
    }
    let mut colors = Vec::with_capacity(k - 1);
    for &e in &fan.edges[1..] {
        colors.push(
            state
                .color_of(e)
                .ok_or_else(|| Error::ImproperShift(format!("fan edge {e} is not colored")))?,
        );
    }
    for &e in &fan.edges[1..] {
        state.unassign(e)?;
    }
    for i in 0..k - 1 {
        if let Err(err) = state.assign(fan.edges[i], colors[i]) {
            for &done in &fan.edges[..i] {
                state.unassign(done)?;
            }
            for (&e, &c) in fan.edges[1..].iter().zip(&colors) {
                state.assign(e, c)?;
            }
            return Err(Error::ImproperShift(err.to_string()));
        }
    }
    if state.tracing() {
        let (pivot, edges) = (fan.pivot, fan.edges.clone());
        state.emit(|| TraceEvent::Shift { pivot, edges });
    }
    Ok(())
}

fn augment_err(stage: &str, err: Error) -> Error {
    Error::ImproperAugment(format!("{stage}: {err}"))
}

/// Colors the chain's blank start edge by flipping its path and shifting
/// the appropriate part of its fan. Returns the start edge.
///
/// The chain must come from [`vizing_chain`] on the current state with a
/// path that was not truncated.
pub fn augment(state: &mut ColoringState<'_>, chain: &VizingChain) -> Result<EdgeId> {
    let VizingChain { fan, path, color } = chain;
    let start_edge = fan.edges[0];
    if path.truncated {
        return Err(Error::ImproperAugment("path was truncated".into()));
    }
    if path.start() != fan.pivot {
        return Err(Error::ImproperAugment(
            "path does not start at the fan pivot".into(),
        ));
    }
    let k = fan.len();
    // j with y_j = x_1; absent when the path is trivial
    let j = path.vertices.get(1).and_then(|&x1| fan.position(x1));
    let short_fan_end = match j {
        Some(0) => {
            return Err(Error::ImproperAugment(
                "path leaves the pivot through the blank fan edge".into(),
            ))
        }
        Some(j) => fan.leaves[j - 1],
        None => fan.end(),
    };

    flip_path(state, path).map_err(|e| augment_err("flip", e))?;
    let target = match j {
        Some(j) if path.end() != short_fan_end => {
            shift_fan(state, &fan.prefix(j)).map_err(|e| augment_err("shift", e))?;
            fan.edges[j - 1]
        }
        _ => {
            if j.is_none() && !path.is_empty() && path.end() != fan.end() {
                return Err(Error::ImproperAugment(
                    "path does not continue through a fan leaf".into(),
                ));
            }
            shift_fan(state, fan).map_err(|e| augment_err("shift", e))?;
            fan.edges[k - 1]
        }
    };
    state
        .assign(target, *color)
        .map_err(|e| augment_err("color", e))?;
    let c = *color;
    state.emit(|| TraceEvent::Augment {
        edge: target,
        color: c,
    });
    Ok(start_edge)
}

/// Moves the blank edge down a long path instead of flipping all of it.
///
/// Uncolors the `cut`-th path edge `x_{cut-1} x_cut` (1-based), flips the
/// `cut - 1` edges before it, shifts the fan prefix `(x, y_0, ..., y_{j-1})`
/// where `y_j = x_1`, and colors `x y_{j-1}` with the chain color. Returns
/// the new blank edge and its pivot `x_{cut-1}`.
pub fn shift_uncolored_edge(
    state: &mut ColoringState<'_>,
    chain: &VizingChain,
    cut: usize,
) -> Result<(EdgeId, VertexId)> {
    let VizingChain { fan, path, color } = chain;
    if cut == 0 || cut > path.len() {
        return Err(Error::ImproperAugment(format!(
            "cut position {cut} outside 1..={}",
            path.len()
        )));
    }
    let j = match fan.position(path.vertices[1]) {
        Some(j) if j >= 1 => j,
        _ => {
            return Err(Error::ImproperAugment(
                "first path edge is not a fan edge".into(),
            ))
        }
    };
    let cut_edge = path.edges[cut - 1];
    let old = state
        .unassign(cut_edge)
        .map_err(|e| augment_err("cut", e))?;
    state.emit(|| TraceEvent::Cut {
        edge: cut_edge,
        color: old,
    });
    flip_path(state, &path.prefix(cut - 1)).map_err(|e| augment_err("flip", e))?;
    shift_fan(state, &fan.prefix(j)).map_err(|e| augment_err("shift", e))?;
    let target = fan.edges[j - 1];
    state
        .assign(target, *color)
        .map_err(|e| augment_err("color", e))?;
    let c = *color;
    state.emit(|| TraceEvent::Augment {
        edge: target,
        color: c,
    });
    Ok((cut_edge, path.vertices[cut - 1]))
}
