//! Mixed-state stabilizer simulation with sign tracking.
//!
//! This is the oracle side of check derivation: it simulates a noiseless
//! circuit run and produces an outcome bit-string, making no assumption about
//! the input state (the stabilizer group starts empty, so initial
//! measurements are random). Unlike the rest of the crate it cannot work in
//! the phase-free quotient: whether a determinate outcome is 0 or 1 is
//! exactly a sign. Operators are kept as i^phase * X^x * Z^z with the X block
//! written left of the Z block; named gates use the standard unitaries, and a
//! custom tableau (which carries no sign data in the file format) is realized
//! with +1 signs on all basis images.

use crate::bits::{solve_combination, BitVec};
use crate::circuit::{CliffordCircuit, Gate, GateKind, Operation};
use crate::pauli::{NamedGate, PauliOperator};
use rand::Rng;

/// i^phase * X^x * Z^z. For Hermitian operators phase and |x & z| have equal
/// parity; the canonical representative of a measurement observable has
/// phase = |x & z| mod 4, and a recorded minus sign shows up as phase + 2.
#[derive(Clone, Debug)]
struct SignedPauli {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl SignedPauli {
    fn identity(n: usize) -> Self {
        SignedPauli {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    /// Canonical Hermitian form of a phase-free Pauli, sign +1.
    fn canonical(p: &PauliOperator) -> Self {
        let x = p.x_vec().clone();
        let z = p.z_vec().clone();
        let y_sites = x
            .words()
            .iter()
            .zip(z.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum::<usize>();
        SignedPauli {
            x,
            z,
            phase: (y_sites % 4) as u8,
        }
    }

    fn mul_assign(&mut self, other: &SignedPauli) {
        // Reordering X^x2 past Z^z1 costs (-1)^(z1 . x2).
        let cross = self.z.and_parity(&other.x);
        self.phase = (self.phase + other.phase + if cross { 2 } else { 0 }) & 3;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    fn anticommutes(&self, other: &SignedPauli) -> bool {
        self.x.and_parity(&other.z) ^ self.z.and_parity(&other.x)
    }

    /// Sign bit relative to the canonical Hermitian form.
    fn sign_bit(&self) -> bool {
        let y_sites = self
            .x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum::<usize>();
        let canonical = (y_sites % 4) as u8;
        debug_assert_eq!(
            (self.phase + 4 - canonical) & 1,
            0,
            "non-Hermitian operator in the stabilizer group"
        );
        ((self.phase + 4 - canonical) >> 1) & 1 == 1
    }
}

/// Signed image rows for one gate: (x, z, phase) per basis Pauli, local frame.
struct SignedImages {
    arity: usize,
    rows: Vec<(u64, u64, u8)>,
}

fn signed_images(gate: &Gate) -> SignedImages {
    let arity = gate.tableau.arity();
    let mut rows: Vec<(u64, u64, u8)> = gate
        .tableau
        .rows()
        .iter()
        .map(|r| {
            let y_sites = (r.x & r.z).count_ones() as u8;
            (r.x, r.z, y_sites & 3) // +1 sign on every image
        })
        .collect();
    if let GateKind::Named(named) = gate.kind {
        // Standard unitaries for the names whose images carry a minus sign.
        match named {
            NamedGate::Sdg => rows[0].2 = (rows[0].2 + 2) & 3, // X -> -Y
            NamedGate::X => rows[1].2 = (rows[1].2 + 2) & 3,   // Z -> -Z
            NamedGate::Y => {
                rows[0].2 = (rows[0].2 + 2) & 3; // X -> -X
                rows[1].2 = (rows[1].2 + 2) & 3; // Z -> -Z
            }
            NamedGate::Z => rows[0].2 = (rows[0].2 + 2) & 3, // X -> -X
            _ => {}
        }
    }
    SignedImages { arity, rows }
}

pub struct StabilizerSimulator {
    num_qubits: usize,
    generators: Vec<SignedPauli>,
}

impl StabilizerSimulator {
    /// Starts in the maximally mixed state: nothing is stabilized, every
    /// first measurement is a coin flip.
    pub fn new(num_qubits: usize) -> Self {
        StabilizerSimulator {
            num_qubits,
            generators: Vec::new(),
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        let images = signed_images(gate);
        let n = self.num_qubits;
        for g in &mut self.generators {
            let mut out = SignedPauli::identity(n);
            out.phase = g.phase;
            // X block then Z block, same order as the stored normal form.
            for q in 0..n {
                if g.x.get(q) {
                    mul_image(&mut out, q, false, &images, &gate.support, n);
                }
            }
            for q in 0..n {
                if g.z.get(q) {
                    mul_image(&mut out, q, true, &images, &gate.support, n);
                }
            }
            *g = out;
        }
    }

    /// Measures a Pauli product; deterministic outcomes come from the sign
    /// bookkeeping, indeterminate ones from `rng`. Measuring an operator that
    /// commutes with the whole group but is not in it records it (mixed-state
    /// semantics).
    pub fn measure<R: Rng>(&mut self, observable: &PauliOperator, rng: &mut R) -> bool {
        let target = SignedPauli::canonical(observable);
        let anti: Vec<usize> = (0..self.generators.len())
            .filter(|&i| self.generators[i].anticommutes(&target))
            .collect();
        if let Some(&pivot) = anti.first() {
            let outcome = rng.gen_bool(0.5);
            let pivot_gen = self.generators[pivot].clone();
            for &i in &anti[1..] {
                self.generators[i].mul_assign(&pivot_gen);
            }
            let mut recorded = target;
            if outcome {
                recorded.phase = (recorded.phase + 2) & 3;
            }
            self.generators[pivot] = recorded;
            return outcome;
        }
        // Commutes with everything: in the group (determinate) or new.
        let rows: Vec<BitVec> = self
            .generators
            .iter()
            .map(|g| concat_xz(&g.x, &g.z))
            .collect();
        let target_xz = concat_xz(&target.x, &target.z);
        match solve_combination(&rows, &target_xz) {
            Some(selector) => {
                let mut product = SignedPauli::identity(self.num_qubits);
                for i in selector.iter_ones() {
                    product.mul_assign(&self.generators[i]);
                }
                debug_assert_eq!(product.x, target.x);
                debug_assert_eq!(product.z, target.z);
                product.sign_bit()
            }
            None => {
                let outcome = rng.gen_bool(0.5);
                let mut recorded = target;
                if outcome {
                    recorded.phase = (recorded.phase + 2) & 3;
                }
                self.generators.push(recorded);
                outcome
            }
        }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }
}

fn concat_xz(x: &BitVec, z: &BitVec) -> BitVec {
    let n = x.len();
    let mut out = BitVec::zeros(2 * n);
    for i in x.iter_ones() {
        out.set(i, true);
    }
    for i in z.iter_ones() {
        out.set(n + i, true);
    }
    out
}

/// Multiplies the image of X_q (or Z_q when `z_basis`) into `out`.
fn mul_image(
    out: &mut SignedPauli,
    q: usize,
    z_basis: bool,
    images: &SignedImages,
    support: &[usize],
    n: usize,
) {
    match support.iter().position(|&s| s == q) {
        Some(local) => {
            let (lx, lz, phase) = images.rows[if z_basis {
                images.arity + local
            } else {
                local
            }];
            let mut img = SignedPauli::identity(n);
            img.phase = phase;
            for (i, &s) in support.iter().enumerate() {
                if (lx >> i) & 1 == 1 {
                    img.x.set(s, true);
                }
                if (lz >> i) & 1 == 1 {
                    img.z.set(s, true);
                }
            }
            out.mul_assign(&img);
        }
        None => {
            let mut img = SignedPauli::identity(n);
            if z_basis {
                img.z.set(q, true);
            } else {
                img.x.set(q, true);
            }
            out.mul_assign(&img);
        }
    }
}

/// One noiseless run of the whole circuit; returns the outcome bit-string.
pub fn run_shot<R: Rng>(circuit: &CliffordCircuit, rng: &mut R) -> BitVec {
    let mut sim = StabilizerSimulator::new(circuit.num_qubits());
    let mut outcomes = BitVec::zeros(circuit.num_outcomes());
    for level in circuit.levels() {
        for op in level {
            match op {
                Operation::Gate(g) => sim.apply_gate(g),
                Operation::Measurement(m) => {
                    if sim.measure(&m.observable, rng) {
                        outcomes.set(m.outcome_index, true);
                    }
                }
            }
        }
    }
    outcomes
}
