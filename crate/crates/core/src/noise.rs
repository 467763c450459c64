//! Circuit-level Pauli noise and counter-based sampling.
//!
//! A noise specification assigns an independent failure probability to every
//! location of the circuit: one location per gate (a uniform non-identity
//! Pauli on its support, placed right after it), one per measurement (a
//! classically equivalent flip of just that outcome, realized as a canceling
//! pair of identical single-qubit faults straddling the measurement level),
//! and, when idling noise is switched on, one per untouched qubit per level.
//!
//! Sampling is keyed, not sequential: the randomness for (seed, shot,
//! location) is a short counter stream derived from those three values alone.
//! Shot k looks identical whether it runs on one thread or sixteen, which is
//! what makes sharded runs byte-for-byte reproducible.

use crate::circuit::{CliffordCircuit, FaultOperator, FaultSite, Operation};
use crate::error::{Error, Result};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

/// Per-location failure probabilities. All in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub p_gate: f64,
    pub p_meas: f64,
    pub p_idle: f64,
}

impl NoiseSpec {
    pub fn new(p_gate: f64, p_meas: f64, p_idle: f64) -> Result<Self> {
        let spec = NoiseSpec {
            p_gate,
            p_meas,
            p_idle,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_gate", self.p_gate),
            ("p_meas", self.p_meas),
            ("p_idle", self.p_idle),
        ] {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::Config(format!("{name} = {p} is not in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// One independent noise location. Realizations are indexed so the decoder
/// can enumerate them deterministically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaultLocation {
    /// Uniform non-identity Pauli on `support`, at the slot after `level`.
    Gate { level: usize, support: Vec<usize> },
    /// Flip of `outcome` only: the anticommuting single-qubit Pauli (x, z)
    /// on `qubit`, injected at the slots before and after `level` so that it
    /// cancels out of all later propagation.
    Measurement {
        level: usize,
        outcome: usize,
        qubit: usize,
        x: bool,
        z: bool,
    },
    /// Uniform X/Y/Z on an idle qubit, at the slot after `level`.
    Idle { level: usize, qubit: usize },
}

impl FaultLocation {
    pub fn probability(&self, spec: &NoiseSpec) -> f64 {
        match self {
            FaultLocation::Gate { .. } => spec.p_gate,
            FaultLocation::Measurement { .. } => spec.p_meas,
            FaultLocation::Idle { .. } => spec.p_idle,
        }
    }

    /// Number of equally likely realizations, or None when it does not fit
    /// in a u64 (gates on more than 31 qubits).
    pub fn num_realizations(&self) -> Option<u64> {
        match self {
            FaultLocation::Gate { support, .. } => {
                let w = support.len();
                if w > 31 {
                    None
                } else {
                    Some((1u64 << (2 * w)) - 1)
                }
            }
            FaultLocation::Measurement { .. } => Some(1),
            FaultLocation::Idle { .. } => Some(3),
        }
    }

    /// The sites of realization `index`, appended to `out`. Indices run from
    /// 0 to `num_realizations() - 1`.
    pub fn realization_into(&self, index: u64, out: &mut Vec<FaultSite>) {
        match self {
            FaultLocation::Gate { level, support } => {
                // index + 1 encodes a non-identity Pauli string, two bits per
                // qubit: 01 = X, 10 = Z, 11 = Y.
                let code = index + 1;
                for (i, &q) in support.iter().enumerate() {
                    let letter = (code >> (2 * i)) & 3;
                    if letter != 0 {
                        out.push(FaultSite {
                            slot: (*level + 1) as u32,
                            qubit: q as u32,
                            x: letter & 1 == 1,
                            z: letter & 2 == 2,
                        });
                    }
                }
            }
            FaultLocation::Measurement {
                level,
                qubit,
                x,
                z,
                ..
            } => {
                debug_assert_eq!(index, 0);
                for slot in [*level, *level + 1] {
                    out.push(FaultSite {
                        slot: slot as u32,
                        qubit: *qubit as u32,
                        x: *x,
                        z: *z,
                    });
                }
            }
            FaultLocation::Idle { level, qubit } => {
                let letter = index + 1;
                out.push(FaultSite {
                    slot: (*level + 1) as u32,
                    qubit: *qubit as u32,
                    x: letter & 1 == 1,
                    z: letter & 2 == 2,
                });
            }
        }
    }

    /// A uniformly random realization.
    pub fn sample_into<R: Rng>(&self, rng: &mut R, out: &mut Vec<FaultSite>) {
        let k = self
            .num_realizations()
            .expect("sampled locations have enumerable realizations");
        let index = if k == 1 { 0 } else { rng.gen_range(0..k) };
        self.realization_into(index, out);
    }
}

/// All noise locations of a circuit under a spec, in a fixed order: levels
/// first, operations in textual order within a level, then idle qubits in
/// ascending order. Location kinds with probability zero are left out
/// entirely, so the list (and everything keyed by location index) is stable
/// under changes to the nonzero probabilities.
pub fn enumerate_locations(circuit: &CliffordCircuit, spec: &NoiseSpec) -> Vec<FaultLocation> {
    let mut out = Vec::new();
    for (level, ops) in circuit.levels().iter().enumerate() {
        let mut occupied = vec![false; circuit.num_qubits()];
        for op in ops {
            for q in op.support() {
                occupied[q] = true;
            }
            match op {
                Operation::Gate(g) => {
                    if spec.p_gate > 0.0 {
                        out.push(FaultLocation::Gate {
                            level,
                            support: g.support.clone(),
                        });
                    }
                }
                Operation::Measurement(m) => {
                    if spec.p_meas > 0.0 {
                        let q = m.observable.support()[0];
                        // Any single-qubit Pauli anticommuting with the
                        // observable's letter there flips the outcome; X
                        // works against Z and Y, Z works against X.
                        let (x, z) = if m.observable.z_bit(q) {
                            (true, false)
                        } else {
                            (false, true)
                        };
                        out.push(FaultLocation::Measurement {
                            level,
                            outcome: m.outcome_index,
                            qubit: q,
                            x,
                            z,
                        });
                    }
                }
            }
        }
        if spec.p_idle > 0.0 {
            for (q, used) in occupied.iter().enumerate() {
                if !used {
                    out.push(FaultLocation::Idle { level, qubit: q });
                }
            }
        }
    }
    out
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

/// splitmix64 finalizer; bijective on u64.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Counter-mode generator: output i is a hash of (key, i). Cheap to create,
/// no warm-up, and two generators with different keys are independent for
/// all practical purposes.
pub struct CounterRng {
    base: u64,
    counter: u64,
}

impl CounterRng {
    /// Key for one (seed, shot, location) cell.
    pub fn for_location(seed: u64, shot: u64, location: u64) -> Self {
        let k = mix64(seed ^ 0x243F_6A88_85A3_08D3);
        let k = mix64(k ^ shot.wrapping_mul(GOLDEN));
        let base = mix64(k ^ location.wrapping_mul(0xC2B2_AE3D_27D4_EB4F));
        CounterRng { base, counter: 0 }
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        self.next_u64() as u32
    }

    fn next_u64(&mut self) -> u64 {
        let out = mix64(self.base.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        self.counter += 1;
        out
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

/// Bound sampler: circuit locations plus probabilities plus a seed. Shots
/// are addressed by index; nothing is kept between shots.
pub struct NoiseSampler {
    locations: Vec<FaultLocation>,
    probabilities: Vec<f64>,
    seed: u64,
}

impl NoiseSampler {
    pub fn new(circuit: &CliffordCircuit, spec: &NoiseSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let locations = enumerate_locations(circuit, spec);
        for loc in &locations {
            if loc.num_realizations().is_none() {
                return Err(Error::ResourceLimit(
                    "gate locations wider than 31 qubits cannot be sampled".into(),
                ));
            }
        }
        let probabilities = locations.iter().map(|l| l.probability(spec)).collect();
        Ok(NoiseSampler {
            locations,
            probabilities,
            seed,
        })
    }

    pub fn locations(&self) -> &[FaultLocation] {
        &self.locations
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sites of shot `shot`, appended to a cleared `out`. Collisions between
    /// locations are possible and fine: everything downstream folds sites
    /// together by XOR.
    pub fn sample_sites_into(&self, shot: u64, out: &mut Vec<FaultSite>) {
        out.clear();
        for (i, loc) in self.locations.iter().enumerate() {
            let mut rng = CounterRng::for_location(self.seed, shot, i as u64);
            if rng.gen_bool(self.probabilities[i]) {
                loc.sample_into(&mut rng, out);
            }
        }
    }

    pub fn sample_sites(&self, shot: u64) -> Vec<FaultSite> {
        let mut out = Vec::new();
        self.sample_sites_into(shot, &mut out);
        out
    }

    /// The same shot as a whole fault operator.
    pub fn sample(&self, circuit: &CliffordCircuit, shot: u64) -> Result<FaultOperator> {
        FaultOperator::from_sites(circuit, &self.sample_sites(shot))
    }
}
