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

//! The randomized drivers.
//!
//! [`edge_color`] runs the two-stage algorithm once: stage one calls
//! [`color_one`] on every edge in uniformly random order with a palette of
//! `q1 = ceil((1 + eps/2) * Delta)` colors, flagging the few edges it cannot
//! settle cheaply; stage two colors the flagged subgraph `G*` with
//! [`greedy_color`] using `3 * Delta(G*)` fresh colors placed above `q1`.
//! [`run_full`] wraps it with restarts and a greedy fallback so that every
//! input gets a proper coloring.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{augment, shift_uncolored_edge, vizing_chain, ChainFailure};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::state::{Color, ColorSlot, ColoringState};

/// Tunables for one coloring run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Slack over Delta; must lie in (0, 1).
    pub epsilon: f64,
    /// `kappa = ceil(kappa_const * ln(Delta) / epsilon)`, the number of
    /// samples per palette.
    pub kappa_const: f64,
    /// `ell = ceil(ell_const * kappa^2)`, the path length cap.
    pub ell_const: f64,
    /// `T = ceil(t_const * ln(Delta))`, the iteration budget of one
    /// [`color_one`] call.
    pub t_const: f64,
    pub seed: u64,
    pub max_restarts: u32,
    pub small_delta_fallback: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.5,
            kappa_const: 4.0,
            ell_const: 2.0,
            t_const: 100.0,
            seed: 0,
            max_restarts: 3,
            small_delta_fallback: true,
        }
    }
}

impl RunConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        for (name, v) in [
            ("kappa_const", self.kappa_const),
            ("ell_const", self.ell_const),
            ("t_const", self.t_const),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

// Absorbs float noise such as 1.05 * 100 = 105.00000000000001.
fn ceil_count(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Integer parameters derived from a [`RunConfig`] and the maximum degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub delta: usize,
    pub epsilon: f64,
    /// Stage-one palette size, `ceil((1 + eps/2) * Delta)`.
    pub q1: Color,
    /// Total color budget, `ceil((1 + eps) * Delta)`.
    pub budget: Color,
    pub kappa: usize,
    pub ell: usize,
    pub iterations: usize,
    /// Minimum pool size, `(1 + eps/100) * Delta`, required before sampling.
    pub palette_floor: f64,
    /// Stage two is attempted only when `Delta(G*) <= eps * Delta / 6`.
    pub flag_limit: f64,
}

impl Params {
    pub fn derive(delta: usize, cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let d = delta as f64;
        let ln_delta = if delta > 1 { d.ln() } else { 0.0 };
        let kappa = ceil_count(cfg.kappa_const * ln_delta / cfg.epsilon).max(1);
        let ell = ceil_count(cfg.ell_const * (kappa * kappa) as f64).max(2);
        let iterations = ceil_count(cfg.t_const * ln_delta).max(1);
        Ok(Self {
            delta,
            epsilon: cfg.epsilon,
            q1: ceil_count((1.0 + cfg.epsilon / 2.0) * d) as Color,
            budget: ceil_count((1.0 + cfg.epsilon) * d) as Color,
            kappa,
            ell,
            iterations,
            palette_floor: (1.0 + cfg.epsilon / 100.0) * d,
            flag_limit: cfg.epsilon * d / 6.0,
        })
    }
}

/// The shrinking color pool `Q` of one [`color_one`] call.
///
/// Holds a subset of `{1, ..., size}`. Resetting is O(1) amortized, which
/// keeps per-call overhead independent of the palette size.
#[derive(Debug, Clone)]
pub struct PalettePool {
    size: Color,
    removed_at: Vec<u32>,
    epoch: u32,
    removed: usize,
}

impl PalettePool {
    /// The full pool `{1, ..., size}`.
    pub fn new(size: Color) -> Self {
        Self {
            size,
            removed_at: vec![0; size as usize + 1],
            epoch: 1,
            removed: 0,
        }
    }

    /// A pool holding exactly `colors`, each within `1..=size`.
    pub fn from_colors(size: Color, colors: &[Color]) -> Self {
        let mut pool = Self::new(size);
        for c in 1..=size {
            if !colors.contains(&c) {
                pool.remove(c);
            }
        }
        pool
    }

    /// Restores the full pool.
    pub fn reset(&mut self) {
        self.removed = 0;
        if self.epoch == u32::MAX {
            self.removed_at.fill(0);
            self.epoch = 1;
        } else {
            self.epoch += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.size as usize - self.removed
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn contains(&self, c: Color) -> bool {
        c >= 1 && c <= self.size && self.removed_at[c as usize] != self.epoch
    }

    /// Removes `c`; returns whether it was present.
    pub fn remove(&mut self, c: Color) -> bool {
        if !self.contains(c) {
            return false;
        }
        self.removed_at[c as usize] = self.epoch;
        self.removed += 1;
        true
    }
}

/// Draws `kappa` colors uniformly with replacement from `pool` and returns
/// the distinct ones in ascending order. The pool itself is not modified.
pub fn sample_palette<R: Rng + ?Sized>(
    pool: &PalettePool,
    kappa: usize,
    rng: &mut R,
) -> Result<Vec<Color>> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let mut palette = Vec::with_capacity(kappa);
    for _ in 0..kappa {
        // rejection keeps the draw uniform over the pool
        let c = loop {
            let c = rng.random_range(1..=pool.size);
            if pool.contains(c) {
                break c;
            }
        };
        palette.push(c);
    }
    palette.sort_unstable();
    palette.dedup();
    Ok(palette)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlagReason {
    /// The fan frontier missed every sampled color.
    FanFail,
    /// The pivot missed every sampled color, or the pool fell below its floor.
    PivotFail,
    /// The blank edge was shifted `T` times without being colored.
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorOneOutcome {
    /// The input edge is now colored and no edge was flagged.
    Colored { iterations: usize },
    /// `edge` was flagged; it is either the input edge or an edge that was
    /// colored before the call.
    Flagged {
        edge: EdgeId,
        reason: FlagReason,
        iterations: usize,
    },
}

/// Counters collected over one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub epsilon: f64,
    pub q1: Color,
    pub kappa: usize,
    pub ell: usize,
    pub iterations: usize,
    pub seed: u64,
    pub colored_stage1: usize,
    pub flags_fan: usize,
    pub flags_pivot: usize,
    pub flags_max_iterations: usize,
    pub palette_floor_hits: usize,
    /// Blank-edge shifts along long paths.
    pub shifts: usize,
    /// Iterations used per [`color_one`] call.
    pub iteration_histogram: BTreeMap<usize, u64>,
    /// Path length of every Vizing chain built.
    pub path_length_histogram: BTreeMap<usize, u64>,
    /// Flags raised in each tenth of the stage-one loop.
    pub flags_by_decile: [u64; 10],
    pub flagged_degree: usize,
    pub flag_limit: f64,
    pub stage2_colors: Color,
    pub greedy_draws: u64,
    pub palette_size: Color,
    pub max_color: Color,
    pub restarts: u32,
    /// `Delta(G*)` of every attempt that failed the flag check.
    pub failed_flagged_degrees: Vec<usize>,
    pub fallback_used: bool,
    pub stage1_us: u64,
    pub stage2_us: u64,
}

impl RunStats {
    pub fn flagged(&self) -> usize {
        self.flags_fan + self.flags_pivot + self.flags_max_iterations
    }

    fn record(&mut self, outcome: &ColorOneOutcome, position: usize) {
        match *outcome {
            ColorOneOutcome::Colored { iterations } => {
                self.colored_stage1 += 1;
                *self.iteration_histogram.entry(iterations).or_default() += 1;
            }
            ColorOneOutcome::Flagged {
                reason, iterations, ..
            } => {
                match reason {
                    FlagReason::FanFail => self.flags_fan += 1,
                    FlagReason::PivotFail => self.flags_pivot += 1,
                    FlagReason::MaxIterations => self.flags_max_iterations += 1,
                }
                *self.iteration_histogram.entry(iterations).or_default() += 1;
                let decile = (position * 10 / self.m.max(1)).min(9);
                self.flags_by_decile[decile] += 1;
            }
        }
    }

    /// Flat `key=value` block. Timings are omitted unless asked for, so the
    /// default output is reproducible byte for byte.
    pub fn to_kv(&self, include_timing: bool) -> String {
        fn hist(h: &BTreeMap<usize, u64>) -> String {
            h.iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("n", self.n.to_string());
        kv("m", self.m.to_string());
        kv("delta", self.delta.to_string());
        kv("epsilon", self.epsilon.to_string());
        kv("q1", self.q1.to_string());
        kv("kappa", self.kappa.to_string());
        kv("ell", self.ell.to_string());
        kv("iterations", self.iterations.to_string());
        kv("seed", self.seed.to_string());
        kv("colored_stage1", self.colored_stage1.to_string());
        kv("flagged", self.flagged().to_string());
        kv("flags_fan", self.flags_fan.to_string());
        kv("flags_pivot", self.flags_pivot.to_string());
        kv(
            "flags_max_iterations",
            self.flags_max_iterations.to_string(),
        );
        kv("palette_floor_hits", self.palette_floor_hits.to_string());
        kv("shifts", self.shifts.to_string());
        kv("iteration_histogram", hist(&self.iteration_histogram));
        kv("path_length_histogram", hist(&self.path_length_histogram));
        kv(
            "flags_by_decile",
            self.flags_by_decile
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        kv("flagged_degree", self.flagged_degree.to_string());
        kv("flag_limit", format!("{:.6}", self.flag_limit));
        kv("stage2_colors", self.stage2_colors.to_string());
        kv("greedy_draws", self.greedy_draws.to_string());
        kv("palette_size", self.palette_size.to_string());
        kv("max_color", self.max_color.to_string());
        kv("restarts", self.restarts.to_string());
        kv(
            "failed_flagged_degrees",
            self.failed_flagged_degrees
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        kv("fallback_used", self.fallback_used.to_string());
        if include_timing {
            kv("stage1_us", self.stage1_us.to_string());
            kv("stage2_us", self.stage2_us.to_string());
        }
        out
    }
}

/// Tries to color the blank edge `e` with pivot `x`, shifting the blank edge
/// down long alternating paths at most `params.iterations` times.
///
/// On return either `e` is colored and nothing new is flagged, or exactly
/// one edge (the current blank edge) has been flagged and every other edge
/// keeps its colored/blank status.
pub fn color_one<R: Rng + ?Sized>(
    state: &mut ColoringState<'_>,
    e: EdgeId,
    x: VertexId,
    params: &Params,
    pool: &mut PalettePool,
    rng: &mut R,
    stats: &mut RunStats,
) -> Result<ColorOneOutcome> {
    if state.slot(e) != ColorSlot::Blank {
        return Err(Error::EdgeNotBlank(e));
    }
    let (mut e, mut x) = (e, x);
    pool.reset();
    for t in 1..=params.iterations {
        if pool.is_empty() || (pool.len() as f64) < params.palette_floor {
            stats.palette_floor_hits += 1;
            state.flag(e)?;
            return Ok(ColorOneOutcome::Flagged {
                edge: e,
                reason: FlagReason::PivotFail,
                iterations: t - 1,
            });
        }
        let palette = sample_palette(pool, params.kappa, rng)?;
        for &c in &palette {
            let fresh = pool.remove(c);
            debug_assert!(fresh, "palettes within one call must be disjoint");
        }
        match vizing_chain(state, e, x, &palette, params.ell) {
            Err(failure) => {
                state.flag(e)?;
                let reason = match failure {
                    ChainFailure::Fan => FlagReason::FanFail,
                    ChainFailure::Pivot => FlagReason::PivotFail,
                };
                return Ok(ColorOneOutcome::Flagged {
                    edge: e,
                    reason,
                    iterations: t,
                });
            }
            Ok(chain) => {
                *stats
                    .path_length_histogram
                    .entry(chain.path.len())
                    .or_default() += 1;
                if chain.path.len() < params.ell {
                    augment(state, &chain)?;
                    return Ok(ColorOneOutcome::Colored { iterations: t });
                }
                let cut = rng.random_range(1..=params.ell);
                (e, x) = shift_uncolored_edge(state, &chain, cut)?;
                stats.shifts += 1;
            }
        }
    }
    state.flag(e)?;
    Ok(ColorOneOutcome::Flagged {
        edge: e,
        reason: FlagReason::MaxIterations,
        iterations: params.iterations,
    })
}

#[derive(Debug, Clone)]
pub struct GreedyColoring<'g> {
    pub state: ColoringState<'g>,
    /// Total color draws, one or more per edge.
    pub draws: u64,
}

/// Colors every edge in order, redrawing a uniform color from
/// `1..=num_colors` until it is free at both endpoints.
pub fn greedy_color<'g, R: Rng + ?Sized>(
    g: &'g Graph,
    num_colors: Color,
    rng: &mut R,
) -> Result<GreedyColoring<'g>> {
    let delta = g.max_degree();
    if delta >= 1 && (num_colors as usize) < 2 * delta - 1 {
        return Err(Error::InsufficientColors {
            available: num_colors,
            max_degree: delta,
        });
    }
    let mut state = ColoringState::new(g, num_colors.max(1));
    let mut draws = 0u64;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        loop {
            draws += 1;
            let c = rng.random_range(1..=num_colors);
            if state.is_missing(u, c) && state.is_missing(v, c) {
                state.assign(e, c)?;
                break;
            }
        }
    }
    Ok(GreedyColoring { state, draws })
}

/// A proper coloring together with the statistics of the run producing it.
#[derive(Debug, Clone)]
pub struct EdgeColoring<'g> {
    pub state: ColoringState<'g>,
    pub stats: RunStats,
}

fn base_stats(g: &Graph, cfg: &RunConfig) -> RunStats {
    RunStats {
        n: g.vertex_count(),
        m: g.edge_count(),
        delta: g.max_degree(),
        epsilon: cfg.epsilon,
        seed: cfg.seed,
        ..RunStats::default()
    }
}

const PREFETCH_DISTANCE: usize = 4;

/// One run of the two-stage algorithm.
///
/// Fails with [`Error::FlaggedDegreeExceeded`] when the flagged subgraph has
/// maximum degree above `eps * Delta / 6`.
pub fn edge_color<'g, R: Rng + ?Sized>(
    g: &'g Graph,
    cfg: &RunConfig,
    rng: &mut R,
) -> Result<EdgeColoring<'g>> {
    cfg.validate()?;
    let mut stats = base_stats(g, cfg);
    let m = g.edge_count();
    if m == 0 {
        let state = ColoringState::new(g, 1);
        stats.palette_size = 1;
        return Ok(EdgeColoring { state, stats });
    }
    let params = Params::derive(g.max_degree(), cfg)?;
    stats.q1 = params.q1;
    stats.kappa = params.kappa;
    stats.ell = params.ell;
    stats.iterations = params.iterations;
    stats.flag_limit = params.flag_limit;

    let started = Instant::now();
    let mut state = ColoringState::new(g, params.q1);
    let mut pool = PalettePool::new(params.q1);
    // Repeatedly picking a uniform undecided edge is the same as walking a
    // uniform permutation, since no call ever touches an undecided edge.
    // Knowing the order lets the loop prefetch upcoming edge records.
    let mut order: Vec<u32> = (0..m as u32).collect();
    order.shuffle(rng);
    for (position, &e) in order.iter().enumerate() {
        if let Some(&ahead) = order.get(position + PREFETCH_DISTANCE) {
            state.prefetch_edge(ahead as EdgeId);
        }
        let e = e as EdgeId;
        debug_assert_eq!(state.slot(e), ColorSlot::Blank);
        let (u, v) = state.ends(e);
        let x = if rng.random_bool(0.5) { u } else { v };
        let outcome = color_one(&mut state, e, x, &params, &mut pool, rng, &mut stats)?;
        stats.record(&outcome, position);
    }
    assert_eq!(
        state.colored_count() + state.flagged_count(),
        m,
        "every edge must be colored or flagged after stage one"
    );
    stats.stage1_us = started.elapsed().as_micros() as u64;

    let started = Instant::now();
    let flagged = state.flagged_subgraph();
    stats.flagged_degree = flagged.max_degree;
    if flagged.max_degree as f64 > params.flag_limit {
        return Err(Error::FlaggedDegreeExceeded {
            flagged_degree: flagged.max_degree,
            limit: params.flag_limit,
        });
    }
    let stage2_colors = 3 * flagged.max_degree as Color;
    if stage2_colors > 0 {
        let stage2 = greedy_color(&flagged.graph, stage2_colors, rng)?;
        stats.greedy_draws = stage2.draws;
        state.widen(params.q1 + stage2_colors);
        for (i, &parent) in flagged.parent_edges.iter().enumerate() {
            let c = stage2.state.color_of(i).expect("greedy colors every edge");
            state.unflag(parent);
            state.assign(parent, params.q1 + c)?;
        }
    }
    assert!(
        params.q1 + stage2_colors <= params.budget,
        "palette {} + {} exceeds the budget {}",
        params.q1,
        stage2_colors,
        params.budget
    );
    stats.stage2_us = started.elapsed().as_micros() as u64;
    stats.stage2_colors = stage2_colors;
    stats.palette_size = state.q();
    stats.max_color = state.max_color_used();
    Ok(EdgeColoring { state, stats })
}

/// The generator for attempt `stream` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs [`edge_color`] up to `1 + max_restarts` times, then falls back to
/// [`greedy_color`] with `2 * Delta - 1` colors if enabled.
pub fn run_full<'g>(g: &'g Graph, cfg: &RunConfig) -> Result<EdgeColoring<'g>> {
    cfg.validate()?;
    let mut failed = Vec::new();
    for attempt in 0..=cfg.max_restarts {
        let mut rng = trial_rng(cfg.seed, attempt as u64);
        match edge_color(g, cfg, &mut rng) {
            Ok(mut coloring) => {
                coloring.stats.restarts = attempt;
                coloring.stats.failed_flagged_degrees = failed;
                return Ok(coloring);
            }
            Err(Error::FlaggedDegreeExceeded { flagged_degree, .. }) => failed.push(flagged_degree),
            Err(err) => return Err(err),
        }
    }
    if !cfg.small_delta_fallback {
        return Err(Error::Exhausted {
            attempts: cfg.max_restarts + 1,
        });
    }
    let started = Instant::now();
    let mut rng = trial_rng(cfg.seed, cfg.max_restarts as u64 + 1);
    let colors = (2 * g.max_degree()).saturating_sub(1).max(1) as Color;
    let greedy = greedy_color(g, colors, &mut rng)?;
    let mut stats = base_stats(g, cfg);
    stats.restarts = cfg.max_restarts;
    stats.failed_flagged_degrees = failed;
    stats.fallback_used = true;
    stats.greedy_draws = greedy.draws;
    stats.palette_size = greedy.state.q();
    stats.max_color = greedy.state.max_color_used();
    stats.stage2_us = started.elapsed().as_micros() as u64;
    Ok(EdgeColoring {
        state: greedy.state,
        stats,
    })
}
