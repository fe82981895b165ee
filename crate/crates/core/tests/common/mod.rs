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

//! Helpers shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use edgecolor::chain::{augment, flip_path, shift_fan, shift_uncolored_edge, vizing_chain};
use edgecolor::engine::{color_one, ColorOneOutcome, PalettePool, Params, RunStats};
use edgecolor::generate::{generate, GenSpec, Model};
use edgecolor::{Color, ColorSlot, ColoringState, EdgeId, Graph};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// A proper partial coloring: edges are visited in random order and each
/// gets a random free color with probability `density`.
pub fn random_partial<'g, R: Rng>(
    g: &'g Graph,
    q: Color,
    density: f64,
    rng: &mut R,
) -> ColoringState<'g> {
    let mut state = ColoringState::new(g, q);
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    for e in order {
        if !rng.random_bool(density) {
            continue;
        }
        let (u, v) = g.endpoints(e);
        let free: Vec<Color> = (1..=q)
            .filter(|&c| state.is_missing(u, c) && state.is_missing(v, c))
            .collect();
        if let Some(&c) = free.get(rng.random_range(0..free.len().max(1))) {
            state.assign(e, c).unwrap();
        }
    }
    state
}

pub fn random_graph<R: Rng>(rng: &mut R, max_n: usize) -> Graph {
    let n = rng.random_range(3..=max_n);
    let p = rng.random_range(0.1..0.9);
    generate(&GenSpec::new(Model::Gnp { n, p }, rng.random())).unwrap()
}

pub fn blank_edges(state: &ColoringState<'_>) -> Vec<EdgeId> {
    (0..state.graph().edge_count())
        .filter(|&e| state.slot(e) == ColorSlot::Blank)
        .collect()
}

fn edge_sets(state: &ColoringState<'_>) -> (BTreeSet<EdgeId>, BTreeSet<EdgeId>) {
    let mut dom = BTreeSet::new();
    let mut flg = BTreeSet::new();
    for (e, slot) in state.slots().iter().enumerate() {
        match slot {
            ColorSlot::Color(_) => {
                dom.insert(e);
            }
            ColorSlot::Flagged => {
                flg.insert(e);
            }
            ColorSlot::Blank => {}
        }
    }
    (dom, flg)
}

/// Which bookkeeping case a single-edge coloring call produced, decided only
/// from the colored and flagged sets before and after the call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractCase {
    /// `e` joined the colored set, nothing was flagged.
    Colored,
    /// `e` itself was flagged.
    FlaggedInput,
    /// `e` was colored and a previously colored edge `f` was flagged.
    FlaggedOther(EdgeId),
}

/// Returns every case consistent with the observed diff; a correct call
/// matches exactly one.
pub fn classify(
    before: &(BTreeSet<EdgeId>, BTreeSet<EdgeId>),
    after: &(BTreeSet<EdgeId>, BTreeSet<EdgeId>),
    e: EdgeId,
) -> Vec<ContractCase> {
    let (dom, flg) = before;
    let (dom2, flg2) = after;
    let mut cases = Vec::new();
    let mut with_e = dom.clone();
    with_e.insert(e);
    if *dom2 == with_e && flg2 == flg {
        cases.push(ContractCase::Colored);
    }
    let mut flg_e = flg.clone();
    flg_e.insert(e);
    if dom2 == dom && *flg2 == flg_e {
        cases.push(ContractCase::FlaggedInput);
    }
    let new_flags: Vec<_> = flg2.difference(flg).copied().collect();
    if let [f] = new_flags[..] {
        if f != e && dom.contains(&f) && flg.is_subset(flg2) {
            let mut expect = with_e.clone();
            expect.remove(&f);
            if *dom2 == expect {
                cases.push(ContractCase::FlaggedOther(f));
            }
        }
    }
    cases
}

/// Runs one single-edge coloring call on a random partial state and checks
/// the bookkeeping contract. Returns the matched case.
pub fn color_one_trial<R: Rng>(rng: &mut R, max_n: usize) -> Option<ContractCase> {
    let g = random_graph(rng, max_n);
    if g.edge_count() == 0 {
        return None;
    }
    let delta = g.max_degree();
    let q = delta as Color + rng.random_range(1..=3);
    let mut state = random_partial(&g, q, rng.random_range(0.3..0.95), rng);
    for e in blank_edges(&state) {
        if rng.random_bool(0.1) {
            state.flag(e).unwrap();
        }
    }
    let blanks = blank_edges(&state);
    let &e = blanks.choose(rng)?;
    let (u, v) = g.endpoints(e);
    let x = if rng.random_bool(0.5) { u } else { v };
    let kappa = rng.random_range(1..=q as usize);
    let params = Params {
        delta,
        epsilon: 0.5,
        q1: q,
        budget: q,
        kappa,
        // short caps force the shifting branch
        ell: rng.random_range(2..=4),
        iterations: rng.random_range(1..=6),
        palette_floor: 0.0,
        flag_limit: f64::INFINITY,
    };
    let before = edge_sets(&state);
    let mut pool = PalettePool::new(q);
    let mut stats = RunStats::default();
    let outcome = color_one(&mut state, e, x, &params, &mut pool, rng, &mut stats).unwrap();
    let report = state.validate_proper();
    assert!(
        report.conflicts.is_empty() && report.table_mismatches.is_empty(),
        "state corrupted: {report:?}"
    );
    let after = edge_sets(&state);
    let cases = classify(&before, &after, e);
    assert_eq!(cases.len(), 1, "outcome {outcome:?} matches {cases:?}");
    let case = cases[0];
    match (outcome, case) {
        (ColorOneOutcome::Colored { .. }, ContractCase::Colored) => {}
        (ColorOneOutcome::Flagged { edge, .. }, ContractCase::FlaggedInput) if edge == e => {}
        (ColorOneOutcome::Flagged { edge, .. }, ContractCase::FlaggedOther(f)) if edge == f => {}
        _ => panic!("reported {outcome:?} but the diff shows {case:?}"),
    }
    Some(case)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainOp {
    Flip,
    Shift,
    Augment,
    ShiftBlank,
}

fn assert_clean(state: &ColoringState<'_>, op: ChainOp) {
    let report = state.validate_proper();
    assert!(
        report.conflicts.is_empty()
            && report.table_mismatches.is_empty()
            && report.out_of_range.is_empty()
            && report.counters_consistent,
        "{op:?} left an invalid state: {report:?}"
    );
}

/// Builds a Vizing chain on a random partial state and applies one random
/// transformation to it. Returns the operation applied, if the chain could
/// be built.
pub fn chain_trial<R: Rng>(rng: &mut R, max_n: usize) -> Option<ChainOp> {
    let g = random_graph(rng, max_n);
    let q = g.max_degree() as Color + rng.random_range(1..=2);
    let mut state = random_partial(&g, q, rng.random_range(0.5..1.0), rng);
    let blanks = blank_edges(&state);
    let &e = blanks.choose(rng)?;
    let (u, v) = g.endpoints(e);
    let x = if rng.random_bool(0.5) { u } else { v };
    let mut palette: Vec<Color> = (1..=q).filter(|_| rng.random_bool(0.7)).collect();
    if palette.is_empty() {
        palette.push(rng.random_range(1..=q));
    }
    let cap = rng.random_range(1..=2 * g.vertex_count());
    let chain = vizing_chain(&state, e, x, &palette, cap).ok()?;
    let colored_before = state.colored_count();
    let snapshot = state.slots().to_vec();
    let op = match rng.random_range(0..4) {
        0 => ChainOp::Flip,
        1 => ChainOp::Shift,
        2 => ChainOp::Augment,
        _ => ChainOp::ShiftBlank,
    };
    match op {
        ChainOp::Flip => {
            // A path that stops at the cap may end on a conflict; the flip
            // must then be refused and leave the state untouched.
            if flip_path(&mut state, &chain.path).is_err() {
                assert!(chain.path.truncated());
                assert_eq!(state.slots(), snapshot);
            }
            assert_eq!(state.colored_count(), colored_before);
        }
        ChainOp::Shift => {
            // Each leaf misses the color of the next fan edge, so any
            // prefix can be shifted.
            let fan = chain.fan.prefix(rng.random_range(1..=chain.fan.len()));
            shift_fan(&mut state, &fan).unwrap();
            assert_eq!(state.colored_count(), colored_before);
        }
        ChainOp::Augment => {
            if chain.path.truncated() {
                assert!(augment(&mut state, &chain).is_err());
                assert_eq!(state.slots(), snapshot);
            } else {
                augment(&mut state, &chain).unwrap();
                assert_eq!(state.colored_count(), colored_before + 1);
                assert!(state.color_of(e).is_some());
            }
        }
        ChainOp::ShiftBlank => {
            if chain.path.is_empty() {
                return None;
            }
            let cut = rng.random_range(1..=chain.path.len());
            let (blank, pivot) = shift_uncolored_edge(&mut state, &chain, cut).unwrap();
            assert_eq!(state.slot(blank), ColorSlot::Blank);
            assert_eq!(chain.path.vertices()[cut - 1], pivot);
            assert_eq!(state.colored_count(), colored_before);
        }
    }
    assert_clean(&state, op);
    Some(op)
}
