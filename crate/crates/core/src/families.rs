//! Built-in circuits with known check sets.
//!
//! Two families cover most tests and the benchmark: a five-qubit gadget with
//! two rounds of CZ-coupled ancilla extraction, and a three-qubit repetition
//! memory with a declared periodic section that scales to arbitrary depth.

use crate::circuit::{CircuitBuilder, CliffordCircuit, PeriodDecl};
use crate::pauli::NamedGate;
use crate::spacetime::CheckSet;

/// Five qubits, twelve outcomes. Qubits 4 and 5 are X-basis ancillas coupled
/// to the three data qubits by two CZ layers per round; data qubits are
/// prepared by Z measurements and read out in the X basis. The four syndrome
/// rows compare each ancilla readout with what the earlier records predict;
/// the logical row is the first data readout.
pub fn cz_ladder() -> (CliffordCircuit, CheckSet) {
    let mut b = CircuitBuilder::new(5);
    for q in 0..3 {
        b.measure_sites(&[(q, false, true)]);
    }
    for q in 3..5 {
        b.measure_sites(&[(q, true, false)]);
    }
    b.tick();
    b.gate(NamedGate::Cz, &[3, 0]);
    b.gate(NamedGate::Cz, &[4, 1]);
    b.tick();
    b.gate(NamedGate::Cz, &[3, 1]);
    b.gate(NamedGate::Cz, &[4, 2]);
    b.tick();
    b.measure_sites(&[(3, true, false)]);
    b.measure_sites(&[(4, true, false)]);
    b.tick();
    b.gate(NamedGate::Cz, &[3, 0]);
    b.gate(NamedGate::Cz, &[4, 1]);
    b.tick();
    b.gate(NamedGate::Cz, &[3, 1]);
    b.gate(NamedGate::Cz, &[4, 2]);
    b.tick();
    for q in 0..5 {
        b.measure_sites(&[(q, true, false)]);
    }
    let circuit = b.finish().expect("ladder circuit is valid");
    let checks = CheckSet::from_indices(
        12,
        &[&[0, 1, 3, 5], &[1, 2, 4, 6], &[0, 1, 5, 10], &[1, 2, 6, 11]],
        &[&[7]],
    )
    .expect("ladder checks are valid");
    (circuit, checks)
}

/// Three-qubit repetition memory: Z prep, `rounds` repetitions of the two
/// parity levels Z1*Z2 and Z2*Z3, Z readout. Interior syndrome rows compare
/// consecutive readings of the same parity, which keeps every row supported
/// on two adjacent repetitions; prep and readout rows touch outcomes outside
/// the repeated band, so the periodic precompute handles them directly.
pub fn repetition_memory(rounds: usize) -> (CliffordCircuit, CheckSet) {
    assert!(rounds >= 1, "repetition memory needs at least one round");
    let mut b = CircuitBuilder::new(3);
    for q in 0..3 {
        b.measure_sites(&[(q, false, true)]);
    }
    b.tick();
    for _ in 0..rounds {
        b.measure_sites(&[(0, false, true), (1, false, true)]);
        b.tick();
        b.measure_sites(&[(1, false, true), (2, false, true)]);
        b.tick();
    }
    for q in 0..3 {
        b.measure_sites(&[(q, false, true)]);
    }
    b.period(PeriodDecl {
        first_level: 1,
        num_levels: 2,
        repetitions: rounds,
    });
    let circuit = b.finish().expect("repetition circuit is valid");

    let n_m = 2 * rounds + 6;
    let mut syndrome: Vec<Vec<usize>> = vec![vec![0, 1, 3], vec![1, 2, 4]];
    for i in 1..rounds {
        syndrome.push(vec![1 + 2 * i, 3 + 2 * i]);
        syndrome.push(vec![2 + 2 * i, 4 + 2 * i]);
    }
    syndrome.push(vec![1 + 2 * rounds, 3 + 2 * rounds, 4 + 2 * rounds]);
    syndrome.push(vec![2 + 2 * rounds, 4 + 2 * rounds, 5 + 2 * rounds]);
    let logical = vec![vec![0, 3 + 2 * rounds]];
    let checks = CheckSet::from_index_rows(n_m, &syndrome, &logical)
        .expect("repetition checks are valid");
    (circuit, checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_shape() {
        let (c, checks) = cz_ladder();
        assert_eq!(c.num_qubits(), 5);
        assert_eq!(c.depth(), 7);
        assert_eq!(c.num_outcomes(), 12);
        assert_eq!(checks.num_syndrome_rows(), 4);
        assert_eq!(checks.num_logical_rows(), 1);
    }

    #[test]
    fn repetition_shape() {
        for rounds in [1, 2, 5] {
            let (c, checks) = repetition_memory(rounds);
            assert_eq!(c.depth(), 2 * rounds + 2);
            assert_eq!(c.num_outcomes(), 2 * rounds + 6);
            assert_eq!(checks.num_syndrome_rows(), 2 * rounds + 2);
            assert!(c.period().is_some());
        }
    }
}
