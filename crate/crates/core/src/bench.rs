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

//! Benchmark sweeps over random regular graphs.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::engine::{run_full, Params, RunConfig};
use crate::error::Result;
use crate::generate::{generate, GenSpec, Model};

/// One benchmark run. Times are in microseconds and cover the coloring
/// algorithm only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub epsilon: f64,
    pub kappa: usize,
    pub ell: usize,
    pub iterations: usize,
    pub stage1_us: u64,
    pub stage2_us: u64,
    pub total_us: u64,
    pub flags_fan: usize,
    pub flags_pivot: usize,
    pub flags_max_iterations: usize,
    pub flagged_degree: usize,
    pub restarts: u32,
    pub fallback: bool,
    pub max_color: u32,
    pub budget: u32,
    /// `ok`, `fallback`, `invalid` or `error`.
    pub status: String,
}

pub const CSV_HEADER: [&str; 22] = [
    "instance",
    "trial",
    "seed",
    "n",
    "m",
    "delta",
    "epsilon",
    "kappa",
    "ell",
    "iterations",
    "stage1_us",
    "stage2_us",
    "total_us",
    "flags_fan",
    "flags_pivot",
    "flags_max_iterations",
    "flagged_degree",
    "restarts",
    "fallback",
    "max_color",
    "budget",
    "status",
];

impl BenchRecord {
    pub fn us_per_edge(&self) -> f64 {
        self.total_us as f64 / self.m.max(1) as f64
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Vertex counts; each size is a random `degree`-regular graph.
    pub sizes: Vec<usize>,
    pub degree: usize,
    pub epsilons: Vec<f64>,
    pub trials: usize,
    /// Template for every run; its seed is the base of all derived seeds.
    pub run: RunConfig,
    pub workers: usize,
}

fn derive_seed(base: u64, parts: [u64; 3]) -> u64 {
    // splitmix64 over the parts
    let mut z = base;
    for p in parts {
        z = z.wrapping_add(p.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

struct Job {
    size_index: usize,
    epsilon_index: usize,
    trial: usize,
}

fn run_job(cfg: &SweepConfig, job: &Job) -> BenchRecord {
    let n = cfg.sizes[job.size_index];
    let epsilon = cfg.epsilons[job.epsilon_index];
    let graph_seed = derive_seed(cfg.run.seed, [job.size_index as u64, job.trial as u64, 0]);
    let run_seed = derive_seed(
        cfg.run.seed,
        [
            job.size_index as u64,
            job.trial as u64,
            1 + job.epsilon_index as u64,
        ],
    );
    let model = Model::RandomRegular { n, d: cfg.degree };
    let mut record = BenchRecord {
        instance: model.to_string(),
        trial: job.trial,
        seed: run_seed,
        n,
        m: 0,
        delta: 0,
        epsilon,
        kappa: 0,
        ell: 0,
        iterations: 0,
        stage1_us: 0,
        stage2_us: 0,
        total_us: 0,
        flags_fan: 0,
        flags_pivot: 0,
        flags_max_iterations: 0,
        flagged_degree: 0,
        restarts: 0,
        fallback: false,
        max_color: 0,
        budget: 0,
        status: "error".into(),
    };
    let graph = match generate(&GenSpec::new(model, graph_seed)) {
        Ok(g) => g,
        Err(_) => return record,
    };
    record.m = graph.edge_count();
    record.delta = graph.max_degree();
    let run = RunConfig {
        epsilon,
        seed: run_seed,
        ..cfg.run.clone()
    };
    if let Ok(p) = Params::derive(record.delta, &run) {
        record.kappa = p.kappa;
        record.ell = p.ell;
        record.iterations = p.iterations;
        record.budget = p.budget;
    }
    let Ok(coloring) = run_full(&graph, &run) else {
        return record;
    };
    let s = &coloring.stats;
    record.stage1_us = s.stage1_us;
    record.stage2_us = s.stage2_us;
    record.total_us = s.stage1_us + s.stage2_us;
    record.flags_fan = s.flags_fan;
    record.flags_pivot = s.flags_pivot;
    record.flags_max_iterations = s.flags_max_iterations;
    record.flagged_degree = s.flagged_degree;
    record.restarts = s.restarts;
    record.fallback = s.fallback_used;
    record.max_color = s.max_color;
    record.status = if !coloring.state.validate_proper().is_complete() {
        "invalid"
    } else if s.fallback_used {
        "fallback"
    } else {
        "ok"
    }
    .into();
    record
}

/// Runs `trials` independent colorings for every (size, epsilon) pair.
///
/// Records come back ordered by size, then epsilon, then trial, whatever
/// the number of workers. Per-run failures are recorded in `status`.
pub fn bench_sweep(cfg: &SweepConfig) -> Vec<BenchRecord> {
    // Trials are interleaved across sizes so that slow drift in machine
    // speed affects every size alike rather than whichever runs last.
    let mut jobs = Vec::new();
    for trial in 0..cfg.trials {
        for size_index in 0..cfg.sizes.len() {
            for epsilon_index in 0..cfg.epsilons.len() {
                jobs.push(Job {
                    size_index,
                    epsilon_index,
                    trial,
                });
            }
        }
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, BenchRecord)>> = Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|scope| {
        for _ in 0..cfg.workers.clamp(1, jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let record = run_job(cfg, job);
                results
                    .lock()
                    .expect("collector poisoned")
                    .push((i, record));
            });
        }
    });
    let mut results = results.into_inner().expect("collector poisoned");
    results.sort_by_key(|(i, _)| {
        let job = &jobs[*i];
        (job.size_index, job.epsilon_index, job.trial)
    });
    results.into_iter().map(|(_, r)| r).collect()
}

/// Writes the fixed header followed by one row per record.
pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    wtr.write_record(CSV_HEADER)?;
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(crate::Error::MalformedInput(format!(
            "unexpected CSV header: {}",
            header.join(",")
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(crate::Error::from))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub runs: usize,
    /// Runs that needed a restart, fell back, or errored.
    pub failures: usize,
    pub median_us_per_edge: f64,
    pub median_flagged_degree: f64,
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Groups records by (n, epsilon) in first-seen order.
pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, u64), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.n, r.epsilon.to_bits()))
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .map(|rows| {
            let mut times: Vec<f64> = rows.iter().map(|r| r.us_per_edge()).collect();
            let mut degrees: Vec<f64> = rows.iter().map(|r| r.flagged_degree as f64).collect();
            SummaryRow {
                n: rows[0].n,
                m: rows[0].m,
                epsilon: rows[0].epsilon,
                runs: rows.len(),
                failures: rows
                    .iter()
                    .filter(|r| r.status != "ok" || r.restarts > 0)
                    .count(),
                median_us_per_edge: median(&mut times),
                median_flagged_degree: median(&mut degrees),
            }
        })
        .collect()
}

/// Largest over smallest median time per edge among rows with `epsilon`.
pub fn scaling_band(summary: &[SummaryRow], epsilon: f64) -> f64 {
    let times: Vec<f64> = summary
        .iter()
        .filter(|r| r.epsilon == epsilon)
        .map(|r| r.median_us_per_edge)
        .collect();
    let max = times.iter().copied().fold(f64::MIN, f64::max);
    let min = times.iter().copied().fold(f64::MAX, f64::min);
    max / min
}

pub fn format_summary(summary: &[SummaryRow]) -> String {
    let mut out =
        String::from("n,m,epsilon,runs,failures,median_us_per_edge,median_flagged_degree\n");
    for r in summary {
        out.push_str(&format!(
            "{},{},{},{},{},{:.4},{}\n",
            r.n, r.m, r.epsilon, r.runs, r.failures, r.median_us_per_edge, r.median_flagged_degree
        ));
    }
    out
}
