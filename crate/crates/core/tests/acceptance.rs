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

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use edgecolor::bench::{bench_sweep, scaling_band, summarize, SweepConfig};
use edgecolor::engine::{greedy_color, run_full, trial_rng, RunConfig};
use edgecolor::generate::{generate, GenSpec, Model};
use edgecolor::io::{write_edge_list, LabeledGraph};
use edgecolor::oracle::{brute_chromatic_index, is_proper_coloring, ORACLE_EDGE_LIMIT};
use edgecolor::{Color, Graph};
use rand::Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: String) -> Verdict {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// A random graph from a random model with `n <= 2000` and `Delta <= 200`.
fn fuzzed_graph<R: Rng>(rng: &mut R) -> Graph {
    loop {
        let seed = rng.random();
        let model = match rng.random_range(0..5) {
            0 | 1 => {
                let n = rng.random_range(5..=2000);
                let avg = rng.random_range(1.0..150.0f64).min((n - 1) as f64);
                Model::Gnp {
                    n,
                    p: avg / (n - 1) as f64,
                }
            }
            2 => {
                let n = rng.random_range(10..=2000);
                let d = rng.random_range(1..=200.min(n - 1));
                Model::RandomRegular {
                    n: n + (n * d) % 2,
                    d,
                }
            }
            3 => Model::Complete {
                n: rng.random_range(2..=60),
            },
            _ => Model::CompleteBipartite {
                a: rng.random_range(1..=200),
                b: rng.random_range(1..=200),
            },
        };
        let g = generate(&GenSpec::new(model, seed)).unwrap();
        if g.max_degree() <= 200 && g.vertex_count() <= 2000 {
            return g;
        }
    }
}

fn correctness() -> Verdict {
    let started = Instant::now();
    let mut rng = trial_rng(1, 100);
    let epsilons = [0.1, 0.2, 0.5, 0.9];
    let mut violations = Vec::new();
    let mut fallbacks = 0;
    for i in 0..200 {
        let g = fuzzed_graph(&mut rng);
        let cfg = RunConfig {
            seed: rng.random(),
            ..RunConfig::with_epsilon(epsilons[i % 4])
        };
        let out = match run_full(&g, &cfg) {
            Ok(out) => out,
            Err(err) => {
                violations.push(format!("graph {i}: {err}"));
                continue;
            }
        };
        let delta = g.max_degree() as f64;
        let limit = if out.stats.fallback_used {
            fallbacks += 1;
            (2.0 * delta - 1.0).max(1.0)
        } else {
            ((1.0 + cfg.epsilon) * delta - 1e-9).ceil()
        };
        let report = out.state.validate_proper();
        let colors: Vec<Option<Color>> =
            (0..g.edge_count()).map(|e| out.state.color_of(e)).collect();
        if !report.is_complete() || !is_proper_coloring(&g, &colors) {
            violations.push(format!("graph {i}: improper or incomplete"));
        }
        if g.edge_count() > 0 && out.stats.max_color as f64 > limit {
            violations.push(format!(
                "graph {i}: {} colors over limit {limit}",
                out.stats.max_color
            ));
        }
    }
    let elapsed = started.elapsed();
    ensure(
        violations.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "200 graphs, {} violations {:?}, {fallbacks} fallbacks, {:.1}s",
            violations.len(),
            violations.iter().take(3).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    )
}

fn flagged_degree_bound() -> Verdict {
    let started = Instant::now();
    let mut first_try = 0;
    let mut fails = 0;
    let mut worst = 0;
    for seed in 0..20u64 {
        let g = generate(&GenSpec::new(
            Model::RandomRegular { n: 4000, d: 400 },
            500 + seed,
        ))
        .unwrap();
        let cfg = RunConfig {
            seed,
            max_restarts: 1,
            small_delta_fallback: false,
            ..RunConfig::with_epsilon(0.5)
        };
        match run_full(&g, &cfg) {
            Ok(out) => {
                if out.stats.restarts == 0 {
                    first_try += 1;
                }
                worst = worst.max(out.stats.flagged_degree);
                assert!(out.state.validate_proper().is_complete());
            }
            Err(_) => fails += 1,
        };
    }
    let elapsed = started.elapsed();
    ensure(
        first_try >= 19 && fails == 0 && elapsed < Duration::from_secs(300),
        format!(
            "bound met on first attempt {first_try}/20, FAIL after one restart {fails}, \
             worst flagged degree {worst} (limit {:.2}), {:.1}s",
            0.5 * 400.0 / 6.0,
            elapsed.as_secs_f64()
        ),
    )
}

fn near_linear_scaling() -> Verdict {
    let sweep = SweepConfig {
        // m = n * 100 / 2 for m in {2e4, 4e4, 8e4, 1.6e5}
        sizes: vec![400, 800, 1600, 3200],
        degree: 100,
        epsilons: vec![0.5],
        trials: 5,
        run: RunConfig {
            seed: 9,
            ..RunConfig::with_epsilon(0.5)
        },
        // timings must not compete for cores
        workers: 1,
    };
    let records = bench_sweep(&sweep);
    let summary = summarize(&records);
    let band = scaling_band(&summary, 0.5);
    let medians: Vec<String> = summary
        .iter()
        .map(|r| format!("m={}:{:.3}us", r.m, r.median_us_per_edge))
        .collect();
    let bad = records.iter().filter(|r| r.status != "ok").count();
    ensure(
        band <= 1.5 && bad == 0,
        format!(
            "median time/m {} band {band:.3} (tolerance 1.5)",
            medians.join(" ")
        ),
    )
}

fn color_one_contract() -> Verdict {
    let mut rng = trial_rng(3, 100);
    let mut counts = [0usize; 3];
    let mut calls = 0;
    while calls < 10_000 {
        if let Some(case) = common::color_one_trial(&mut rng, 16) {
            calls += 1;
            counts[match case {
                common::ContractCase::Colored => 0,
                common::ContractCase::FlaggedInput => 1,
                common::ContractCase::FlaggedOther(_) => 2,
            }] += 1;
        }
    }
    Ok(format!(
        "{calls} calls: colored {}, flagged input {}, flagged shifted edge {}",
        counts[0], counts[1], counts[2]
    ))
}

fn chain_primitives() -> Verdict {
    let mut rng = trial_rng(4, 100);
    let mut counts = [0usize; 4];
    let mut applied = 0;
    while applied < 10_000 {
        if let Some(op) = common::chain_trial(&mut rng, 16) {
            applied += 1;
            counts[op as usize] += 1;
        }
    }
    Ok(format!(
        "{applied} applications: flip {}, shift {}, augment {}, shift blank {}",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn fixture(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges).unwrap()
}

fn oracle_agreement() -> Verdict {
    let mut graphs = vec![
        (
            "K4",
            fixture(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        ),
        ("C5", fixture(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])),
        ("P4", fixture(4, &[(0, 1), (1, 2), (2, 3)])),
        (
            "K33",
            generate(&GenSpec::new(Model::CompleteBipartite { a: 3, b: 3 }, 0)).unwrap(),
        ),
    ];
    let mut rng = trial_rng(6, 100);
    while graphs.len() < 204 {
        let n = rng.random_range(2..=7);
        let g = generate(&GenSpec::new(
            Model::Gnp {
                n,
                p: rng.random_range(0.1..1.0),
            },
            rng.random(),
        ))
        .unwrap();
        if g.edge_count() <= ORACLE_EDGE_LIMIT {
            graphs.push(("random", g));
        }
    }
    let mut class_two = 0;
    for (name, g) in &graphs {
        let oracle = brute_chromatic_index(g).map_err(|e| format!("{name}: {e}"))?;
        let delta = g.max_degree() as Color;
        let chi = oracle.chromatic_index;
        if chi != delta && chi != delta + 1 {
            return Err(format!("{name}: chromatic index {chi} with Delta {delta}"));
        }
        class_two += usize::from(chi == delta + 1);
        let witness: Vec<_> = oracle.witness.iter().map(|&c| Some(c)).collect();
        if !is_proper_coloring(g, &witness) {
            return Err(format!("{name}: oracle witness improper"));
        }
        for eps in [0.1, 0.5, 0.9] {
            let cfg = RunConfig {
                seed: rng.random(),
                ..RunConfig::with_epsilon(eps)
            };
            let out = run_full(g, &cfg).map_err(|e| format!("{name}: {e}"))?;
            let colors: Vec<_> = (0..g.edge_count()).map(|e| out.state.color_of(e)).collect();
            if colors.iter().any(Option::is_none) || !is_proper_coloring(g, &colors) {
                return Err(format!("{name}: engine coloring rejected"));
            }
        }
    }
    Ok(format!(
        "{} graphs, chromatic index in {{Delta, Delta+1}} ({class_two} class two), \
         all engine colorings proper",
        graphs.len()
    ))
}

fn greedy_draws() -> Verdict {
    let mut rng = trial_rng(7, 100);
    let (mut draws, mut edges) = (0u64, 0u64);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = fuzzed_graph(&mut rng);
        if g.edge_count() == 0 {
            continue;
        }
        let q2 = 3 * g.max_degree() as Color;
        let out = greedy_color(&g, q2, &mut rng).map_err(|e| e.to_string())?;
        if !out.state.validate_proper().is_complete() {
            return Err("greedy coloring improper".into());
        }
        draws += out.draws;
        edges += g.edge_count() as u64;
        worst = worst.max(out.draws as f64 / g.edge_count() as f64);
    }
    let mean = draws as f64 / edges as f64;
    ensure(
        mean <= 3.5,
        format!("mean draws per edge {mean:.3} (tolerance 3.5), worst graph {worst:.3}"),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let graph_path = dir.path().join("graph.txt");
    let g = generate(&GenSpec::new(Model::Gnp { n: 1500, p: 0.05 }, 17)).unwrap();
    let mut file = std::fs::File::create(&graph_path).map_err(|e| e.to_string())?;
    write_edge_list(&mut file, &LabeledGraph::from_graph(g)).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for i in 0..2 {
        let coloring = dir.path().join(format!("coloring{i}"));
        let stats = dir.path().join(format!("stats{i}"));
        let status = Command::new(env!("CARGO_BIN_EXE_edgecolor"))
            .arg("color")
            .arg("--input")
            .arg(&graph_path)
            .args(["--epsilon", "0.3", "--seed", "7", "--output"])
            .arg(&coloring)
            .arg("--stats")
            .arg(&stats)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("run {i} exited with {status}"));
        }
        outputs.push((
            std::fs::read(&coloring).map_err(|e| e.to_string())?,
            std::fs::read(&stats).map_err(|e| e.to_string())?,
        ));
    }
    ensure(
        outputs[0] == outputs[1],
        format!(
            "two processes, coloring {} bytes, stats {} bytes, identical: {}",
            outputs[0].0.len(),
            outputs[0].1.len(),
            outputs[0] == outputs[1]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 correctness", correctness),
        ("2 flagged-degree bound", flagged_degree_bound),
        ("3 near-linear scaling", near_linear_scaling),
        ("4 single-edge contract", color_one_contract),
        ("5 chain primitives", chain_primitives),
        ("6 oracle agreement", oracle_agreement),
        ("7 greedy stage", greedy_draws),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
