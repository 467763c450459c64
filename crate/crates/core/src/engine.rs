//! Monte Carlo estimation of the logical failure rate.
//!
//! Both pipelines share the sampler, the decoder, and the failure criterion;
//! they differ only in how a sampled fault becomes a syndrome. The
//! straightforward pipeline pushes the fault through the circuit and applies
//! the check rows to the outcome flips. The precomputed pipeline folds the
//! fault's sites through the incidence lists of the backpropagated rows and
//! never touches the circuit. Shot randomness is keyed by (seed, shot,
//! location), so results do not depend on the shard count.

use std::time::Instant;

use crate::bits::BitVec;
use crate::circuit::{CliffordCircuit, FaultSite};
use crate::decoder::{is_failure, Decoder};
use crate::error::{Error, Result};
use crate::noise::{NoiseSampler, NoiseSpec};
use crate::propagation::Propagator;
use crate::spacetime::{BackpropagatedSet, CheckSet, SyndromeScratch};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EngineKind {
    Naive,
    Abc,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Naive => "naive",
            EngineKind::Abc => "abc",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub shots: u64,
    pub seed: u64,
    pub shards: usize,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config("shots must be positive".into()));
        }
        if self.shards == 0 {
            return Err(Error::Config("shards must be positive".into()));
        }
        Ok(())
    }
}

/// Failure count with a Wilson 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateEstimate {
    pub shots: u64,
    pub failures: u64,
    pub rate: f64,
    pub wilson_ci_95: (f64, f64),
}

impl RateEstimate {
    pub fn from_counts(failures: u64, shots: u64) -> Self {
        RateEstimate {
            shots,
            failures,
            rate: failures as f64 / shots as f64,
            wilson_ci_95: wilson_ci_95(failures, shots),
        }
    }
}

pub fn wilson_ci_95(failures: u64, shots: u64) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    if shots == 0 {
        return (0.0, 1.0);
    }
    let n = shots as f64;
    let p = failures as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Wall time per phase, nanoseconds. Sampling, syndrome extraction, and
/// decoding are summed across shards; total is the whole run. Timings never
/// take part in equality comparisons of results.
#[derive(Clone, Copy, Debug, Default)]
pub struct Timings {
    pub sample_ns: u64,
    pub syndrome_ns: u64,
    pub decode_ns: u64,
    pub total_ns: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotResult {
    pub shot: u64,
    pub syndrome: BitVec,
    pub logical: BitVec,
    pub predicted: BitVec,
    pub failed: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub engine: EngineKind,
    pub estimate: RateEstimate,
    pub timings: Timings,
}

/// Everything a run needs, checked once up front.
pub struct Run<'a> {
    circuit: &'a CliffordCircuit,
    checks: &'a CheckSet,
    pre: Option<&'a BackpropagatedSet>,
    spec: NoiseSpec,
    decoder: &'a dyn Decoder,
}

impl<'a> Run<'a> {
    pub fn new(
        circuit: &'a CliffordCircuit,
        checks: &'a CheckSet,
        pre: Option<&'a BackpropagatedSet>,
        spec: NoiseSpec,
        decoder: &'a dyn Decoder,
    ) -> Result<Self> {
        spec.validate()?;
        if checks.num_outcomes() != circuit.num_outcomes() {
            return Err(Error::DimensionMismatch {
                context: "check set outcomes vs circuit outcomes",
                expected: circuit.num_outcomes(),
                got: checks.num_outcomes(),
            });
        }
        if let Some(pre) = pre {
            let same = pre.num_qubits() == circuit.num_qubits()
                && pre.num_slots() == circuit.num_slots()
                && pre.num_outcomes() == circuit.num_outcomes()
                && pre.num_syndrome_rows() == checks.num_syndrome_rows()
                && pre.num_logical_rows() == checks.num_logical_rows();
            if !same {
                return Err(Error::Config(
                    "precomputed rows do not match this circuit and check set".into(),
                ));
            }
        }
        if decoder.num_logical() != checks.num_logical_rows() {
            return Err(Error::DimensionMismatch {
                context: "decoder logical width vs check set",
                expected: checks.num_logical_rows(),
                got: decoder.num_logical(),
            });
        }
        Ok(Run {
            circuit,
            checks,
            pre,
            spec,
            decoder,
        })
    }

    fn require_pre(&self, engine: EngineKind) -> Result<()> {
        if engine == EngineKind::Abc && self.pre.is_none() {
            return Err(Error::Config(
                "the abc engine needs precomputed rows".into(),
            ));
        }
        Ok(())
    }

    /// Estimates the failure rate over `cfg.shots` shots.
    pub fn estimate(&self, engine: EngineKind, cfg: &RunConfig) -> Result<RunOutput> {
        cfg.validate()?;
        self.require_pre(engine)?;
        let sampler = NoiseSampler::new(self.circuit, &self.spec, cfg.seed)?;
        let started = Instant::now();
        let shards = shard_ranges(cfg.shots, cfg.shards);
        let results: Vec<(u64, Timings)> = std::thread::scope(|scope| {
            let handles: Vec<_> = shards
                .iter()
                .map(|&(lo, hi)| {
                    let sampler = &sampler;
                    scope.spawn(move || self.shard_counts(engine, sampler, lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut failures = 0u64;
        let mut timings = Timings::default();
        for (f, t) in results {
            failures += f;
            timings.sample_ns += t.sample_ns;
            timings.syndrome_ns += t.syndrome_ns;
            timings.decode_ns += t.decode_ns;
        }
        timings.total_ns = started.elapsed().as_nanos() as u64;
        Ok(RunOutput {
            engine,
            estimate: RateEstimate::from_counts(failures, cfg.shots),
            timings,
        })
    }

    /// Collects every shot's syndrome, truth, and prediction, in shot order.
    /// Meant for equivalence checks and small diagnostic runs.
    pub fn shots(&self, engine: EngineKind, cfg: &RunConfig) -> Result<Vec<ShotResult>> {
        cfg.validate()?;
        self.require_pre(engine)?;
        let sampler = NoiseSampler::new(self.circuit, &self.spec, cfg.seed)?;
        let shards = shard_ranges(cfg.shots, cfg.shards);
        let collected: Vec<Vec<ShotResult>> = std::thread::scope(|scope| {
            let handles: Vec<_> = shards
                .iter()
                .map(|&(lo, hi)| {
                    let sampler = &sampler;
                    scope.spawn(move || self.shard_shots(engine, sampler, lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        Ok(collected.into_iter().flatten().collect())
    }

    fn shard_counts(
        &self,
        engine: EngineKind,
        sampler: &NoiseSampler,
        lo: u64,
        hi: u64,
    ) -> (u64, Timings) {
        let mut failures = 0u64;
        let mut t = Timings::default();
        let mut sites: Vec<FaultSite> = Vec::new();
        let mut extractor = Extractor::new(engine, self);
        for shot in lo..hi {
            let t0 = Instant::now();
            sampler.sample_sites_into(shot, &mut sites);
            let t1 = Instant::now();
            let (syndrome, logical) = extractor.extract(&sites);
            let t2 = Instant::now();
            let predicted = self.decoder.decode(syndrome);
            if is_failure(&predicted, logical) {
                failures += 1;
            }
            let t3 = Instant::now();
            t.sample_ns += (t1 - t0).as_nanos() as u64;
            t.syndrome_ns += (t2 - t1).as_nanos() as u64;
            t.decode_ns += (t3 - t2).as_nanos() as u64;
        }
        (failures, t)
    }

    fn shard_shots(
        &self,
        engine: EngineKind,
        sampler: &NoiseSampler,
        lo: u64,
        hi: u64,
    ) -> Vec<ShotResult> {
        let mut out = Vec::with_capacity((hi - lo) as usize);
        let mut sites: Vec<FaultSite> = Vec::new();
        let mut extractor = Extractor::new(engine, self);
        for shot in lo..hi {
            sampler.sample_sites_into(shot, &mut sites);
            let (syndrome, logical) = extractor.extract(&sites);
            let predicted = self.decoder.decode(syndrome);
            let failed = is_failure(&predicted, logical);
            out.push(ShotResult {
                shot,
                syndrome: syndrome.clone(),
                logical: logical.clone(),
                predicted,
                failed,
            });
        }
        out
    }
}

/// Contiguous shot ranges, one per shard; never more shards than shots.
fn shard_ranges(shots: u64, shards: usize) -> Vec<(u64, u64)> {
    let shards = (shards as u64).min(shots).max(1);
    let chunk = shots.div_ceil(shards);
    (0..shards)
        .map(|i| (i * chunk, ((i + 1) * chunk).min(shots)))
        .filter(|(lo, hi)| lo < hi)
        .collect()
}

/// Per-thread syndrome extraction state for one engine kind.
enum Extractor<'a> {
    Naive {
        propagator: Propagator<'a>,
        checks: &'a CheckSet,
        syndrome: BitVec,
        logical: BitVec,
    },
    Abc {
        pre: &'a BackpropagatedSet,
        scratch: SyndromeScratch,
        logical: BitVec,
    },
}

impl<'a> Extractor<'a> {
    fn new(engine: EngineKind, run: &Run<'a>) -> Self {
        match engine {
            EngineKind::Naive => Extractor::Naive {
                propagator: Propagator::new(run.circuit),
                checks: run.checks,
                syndrome: BitVec::zeros(run.checks.num_syndrome_rows()),
                logical: BitVec::zeros(run.checks.num_logical_rows()),
            },
            EngineKind::Abc => {
                let pre = run.pre.expect("checked by require_pre");
                Extractor::Abc {
                    pre,
                    scratch: pre.scratch(),
                    logical: BitVec::zeros(pre.num_logical_rows()),
                }
            }
        }
    }

    fn extract(&mut self, sites: &[FaultSite]) -> (&BitVec, &BitVec) {
        match self {
            Extractor::Naive {
                propagator,
                checks,
                syndrome,
                logical,
            } => {
                let flips = propagator.measurement_flips(sites);
                *syndrome = checks
                    .syndrome_of_flips(flips)
                    .expect("widths checked at construction");
                *logical = checks
                    .logical_of_flips(flips)
                    .expect("widths checked at construction");
                (syndrome, logical)
            }
            Extractor::Abc {
                pre,
                scratch,
                logical,
            } => {
                pre.logical_into(sites, logical);
                (pre.syndrome_fold(sites, scratch), logical)
            }
        }
    }
}
