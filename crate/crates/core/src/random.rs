//! Seeded generators for circuits, faults and check rows. Test suites and the
//! benchmark harness share these; nothing here is used in a simulation hot
//! path.

use crate::bits::BitVec;
use crate::circuit::{CircuitBuilder, CliffordCircuit, FaultOperator, FaultSite, Operation};
use crate::pauli::{CliffordTableau, NamedGate, PauliOperator};
use rand::Rng;

pub fn random_pauli<R: Rng>(rng: &mut R, num_qubits: usize) -> PauliOperator {
    let sites: Vec<(usize, bool, bool)> = (0..num_qubits)
        .map(|q| (q, rng.gen_bool(0.5), rng.gen_bool(0.5)))
        .collect();
    PauliOperator::from_sites(num_qubits, &sites).unwrap()
}

/// Random Clifford as a composition of named gates; goes through the public
/// constructor so the symplectic check runs too.
pub fn random_tableau<R: Rng>(rng: &mut R, arity: usize) -> CliffordTableau {
    let mut t = CliffordTableau::identity(arity);
    for _ in 0..20 {
        let g = NamedGate::ALL[rng.gen_range(0..NamedGate::ALL.len())];
        if g.arity() > arity {
            continue;
        }
        let a = rng.gen_range(0..arity);
        let support: Vec<usize> = if g.arity() == 1 {
            vec![a]
        } else {
            let mut b = rng.gen_range(0..arity);
            while b == a {
                b = rng.gen_range(0..arity);
            }
            vec![a, b]
        };
        t = t.then(&g.tableau(), &support).unwrap();
    }
    CliffordTableau::new(arity, t.rows().to_vec()).expect("compositions stay symplectic")
}

#[derive(Clone, Copy, Debug)]
pub struct RandomCircuitConfig {
    pub min_qubits: usize,
    pub max_qubits: usize,
    pub min_depth: usize,
    pub max_depth: usize,
}

impl Default for RandomCircuitConfig {
    fn default() -> Self {
        RandomCircuitConfig {
            min_qubits: 1,
            max_qubits: 8,
            min_depth: 1,
            max_depth: 10,
        }
    }
}

const ONE_QUBIT: [NamedGate; 6] = [
    NamedGate::H,
    NamedGate::S,
    NamedGate::Sdg,
    NamedGate::X,
    NamedGate::Y,
    NamedGate::Z,
];
const TWO_QUBIT: [NamedGate; 3] = [NamedGate::Cx, NamedGate::Cz, NamedGate::Swap];

/// Uniform named gates and random Pauli-product measurements, one level at a
/// time with disjoint supports. Always contains at least one measurement.
pub fn random_circuit<R: Rng>(rng: &mut R, cfg: &RandomCircuitConfig) -> CliffordCircuit {
    let n = rng.gen_range(cfg.min_qubits..=cfg.max_qubits);
    let depth = rng.gen_range(cfg.min_depth..=cfg.max_depth);
    let mut b = CircuitBuilder::new(n);
    let mut measured = 0usize;
    for l in 0..depth {
        if l > 0 {
            b.tick();
        }
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in (1..qubits.len()).rev() {
            let j = rng.gen_range(0..=i);
            qubits.swap(i, j);
        }
        let mut idx = 0;
        while idx < qubits.len() {
            let remaining = qubits.len() - idx;
            match rng.gen_range(0..10u32) {
                0..=3 => {
                    b.gate(ONE_QUBIT[rng.gen_range(0..ONE_QUBIT.len())], &[qubits[idx]]);
                    idx += 1;
                }
                4..=6 if remaining >= 2 => {
                    b.gate(
                        TWO_QUBIT[rng.gen_range(0..TWO_QUBIT.len())],
                        &[qubits[idx], qubits[idx + 1]],
                    );
                    idx += 2;
                }
                7..=8 => {
                    let k = rng.gen_range(1..=remaining.min(3));
                    let sites: Vec<(usize, bool, bool)> = (0..k)
                        .map(|i| {
                            let letter = rng.gen_range(0..3u32); // X, Y, Z
                            (qubits[idx + i], letter != 2, letter != 0)
                        })
                        .collect();
                    b.measure_sites(&sites);
                    measured += 1;
                    idx += k;
                }
                _ => idx += 1, // idle
            }
        }
    }
    if measured == 0 {
        b.tick();
        b.measure_sites(&[(0, false, true)]);
    }
    b.finish().expect("random circuits are well-formed by construction")
}

/// Random circuit that is guaranteed to have deterministic outcome parities:
/// one measurement-bearing level is duplicated in place, so each duplicated
/// observable reads the same value twice in a row.
pub fn random_checked_circuit<R: Rng>(rng: &mut R, cfg: &RandomCircuitConfig) -> CliffordCircuit {
    let base = random_circuit(rng, cfg);
    let with_measurement: Vec<usize> = (0..base.depth())
        .filter(|&l| {
            base.levels()[l]
                .iter()
                .any(|op| matches!(op, Operation::Measurement(_)))
        })
        .collect();
    let pick = with_measurement[rng.gen_range(0..with_measurement.len())];
    let mut levels: Vec<Vec<Operation>> = base.levels().to_vec();
    let dup: Vec<Operation> = levels[pick]
        .iter()
        .filter(|op| matches!(op, Operation::Measurement(_)))
        .cloned()
        .collect();
    levels.insert(pick + 1, dup);
    let mut next = 0usize;
    for level in &mut levels {
        for op in level {
            if let Operation::Measurement(m) = op {
                m.outcome_index = next;
                next += 1;
            }
        }
    }
    CliffordCircuit::new(base.num_qubits(), levels, None)
        .expect("duplicating a measurement level keeps the circuit valid")
}

/// Sparse-ish random fault: each spacetime site carries a uniform non-identity
/// Pauli with probability 1/4.
pub fn random_fault<R: Rng>(rng: &mut R, circuit: &CliffordCircuit) -> FaultOperator {
    let mut sites = Vec::new();
    for slot in 0..circuit.num_slots() {
        for qubit in 0..circuit.num_qubits() {
            if rng.gen_bool(0.25) {
                let letter = rng.gen_range(0..3u32);
                sites.push(FaultSite {
                    slot: slot as u32,
                    qubit: qubit as u32,
                    x: letter != 2,
                    z: letter != 0,
                });
            }
        }
    }
    FaultOperator::from_sites(circuit, &sites).unwrap()
}

/// Non-empty random rows over the outcome register, for check-set inputs in
/// tests where validity of the checks does not matter.
pub fn random_rows<R: Rng>(rng: &mut R, num_outcomes: usize, count: usize) -> Vec<BitVec> {
    (0..count)
        .map(|_| loop {
            let mut row = BitVec::zeros(num_outcomes);
            for i in 0..num_outcomes {
                if rng.gen_bool(0.3) {
                    row.set(i, true);
                }
            }
            if !row.is_zero() {
                break row;
            }
        })
        .collect()
}
