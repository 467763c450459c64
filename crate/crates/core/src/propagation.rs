//! Forward and backward fault cumulants.
//!
//! The forward cumulant of a fault operator F accumulates, slot by slot, the
//! image of everything injected so far: slice(0) = F(0), and
//! slice(s+1) = level_s(slice(s)) * F(s+1). A measurement in level L flips
//! iff its observable anticommutes with slice(L). The backward cumulant is
//! the same walk run top-down through the inverted levels; the two are
//! adjoint to each other with respect to the spacetime commutator, which is
//! what lets syndrome extraction skip propagation altogether.

use crate::bits::BitVec;
use crate::circuit::{CliffordCircuit, FaultOperator, FaultSite, Operation};
use crate::error::{Error, Result};
use crate::pauli::{CliffordTableau, PauliOperator, MAX_TABLEAU_ARITY};

/// A fault operator whose slice at each slot is the accumulated-and-pushed
/// image of a source fault. Same register as `FaultOperator`; the wrapper
/// only marks intent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cumulant(pub FaultOperator);

fn check_fault_dims(circuit: &CliffordCircuit, fault: &FaultOperator) -> Result<()> {
    if fault.num_qubits() != circuit.num_qubits() || fault.num_slots() != circuit.num_slots() {
        return Err(Error::DimensionMismatch {
            context: "fault operator vs circuit register",
            expected: circuit.num_qubits() * circuit.num_slots(),
            got: fault.num_qubits() * fault.num_slots(),
        });
    }
    Ok(())
}

fn apply_level(level: &[Operation], slice: &mut PauliOperator) {
    for op in level {
        if let Operation::Gate(g) = op {
            g.tableau.conjugate_in_place(slice, &g.support);
        }
    }
}

/// Materialized forward cumulant, O(n) memory per slot.
pub fn cumulant(circuit: &CliffordCircuit, fault: &FaultOperator) -> Result<Cumulant> {
    check_fault_dims(circuit, fault)?;
    let mut out = FaultOperator::identity(circuit);
    let mut slice = fault.slice(0);
    out.xor_slice(0, &slice);
    for (s, level) in circuit.levels().iter().enumerate() {
        apply_level(level, &mut slice);
        slice.mul_assign(&fault.slice(s + 1));
        out.xor_slice(s + 1, &slice);
    }
    Ok(Cumulant(out))
}

/// Streaming forward walk: visits the cumulant slice at every slot without
/// materializing the whole operator. `visit(s, slice)` sees slot s before
/// level s acts.
pub fn cumulant_stream<Visit>(
    circuit: &CliffordCircuit,
    fault: &FaultOperator,
    mut visit: Visit,
) -> Result<()>
where
    Visit: FnMut(usize, &PauliOperator),
{
    check_fault_dims(circuit, fault)?;
    let mut slice = fault.slice(0);
    visit(0, &slice);
    for (s, level) in circuit.levels().iter().enumerate() {
        apply_level(level, &mut slice);
        slice.mul_assign(&fault.slice(s + 1));
        visit(s + 1, &slice);
    }
    Ok(())
}

/// Backward cumulant: slice(depth) = F(depth), and
/// slice(s) = inverse_level_s(slice(s+1)) * F(s).
pub fn back_cumulant(circuit: &CliffordCircuit, fault: &FaultOperator) -> Result<Cumulant> {
    check_fault_dims(circuit, fault)?;
    let inverted = invert_levels(circuit);
    Ok(back_cumulant_with(circuit, &inverted, fault))
}

/// Pre-inverted gate list for repeated backward walks over one circuit.
pub fn invert_levels(circuit: &CliffordCircuit) -> Vec<Vec<(CliffordTableau, Vec<usize>)>> {
    circuit
        .levels()
        .iter()
        .map(|level| {
            level
                .iter()
                .filter_map(|op| match op {
                    Operation::Gate(g) => Some((g.tableau.invert(), g.support.clone())),
                    Operation::Measurement(_) => None,
                })
                .collect()
        })
        .collect()
}

pub fn back_cumulant_with(
    circuit: &CliffordCircuit,
    inverted_levels: &[Vec<(CliffordTableau, Vec<usize>)>],
    fault: &FaultOperator,
) -> Cumulant {
    let depth = circuit.depth();
    let mut out = FaultOperator::identity(circuit);
    let mut slice = fault.slice(depth);
    out.xor_slice(depth, &slice);
    for s in (0..depth).rev() {
        for (tableau, support) in &inverted_levels[s] {
            tableau.conjugate_in_place(&mut slice, support);
        }
        slice.mul_assign(&fault.slice(s));
        out.xor_slice(s, &slice);
    }
    Cumulant(out)
}

/// Full effect of a fault: which outcomes flip, and what is left on the data
/// register after the last level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Effect {
    /// Bit j set iff outcome j flips.
    pub measurement_flips: BitVec,
    /// Cumulant slice at the top slot.
    pub residual: PauliOperator,
}

/// Outcome flips only.
pub fn effect_on_measurements(
    circuit: &CliffordCircuit,
    fault: &FaultOperator,
) -> Result<BitVec> {
    Ok(effect(circuit, fault)?.measurement_flips)
}

pub fn effect(circuit: &CliffordCircuit, fault: &FaultOperator) -> Result<Effect> {
    check_fault_dims(circuit, fault)?;
    let mut flips = BitVec::zeros(circuit.num_outcomes());
    let mut slice = fault.slice(0);
    for (s, level) in circuit.levels().iter().enumerate() {
        // Measurements read the slice before their own level acts; gates in
        // the same level have disjoint support, so the order inside the level
        // cannot matter.
        for op in level {
            if let Operation::Measurement(m) = op {
                if slice.commutator_unchecked(&m.observable) {
                    flips.flip(m.outcome_index);
                }
            }
        }
        apply_level(level, &mut slice);
        slice.mul_assign(&fault.slice(s + 1));
    }
    Ok(Effect {
        measurement_flips: flips,
        residual: slice,
    })
}

/// Allocation-light forward walker for the sampling hot path. Reuses its
/// working slice and flip buffer across shots; faults come in as sparse site
/// lists.
pub struct Propagator<'c> {
    circuit: &'c CliffordCircuit,
    slice: PauliOperator,
    flips: BitVec,
    sorted: Vec<FaultSite>,
}

impl<'c> Propagator<'c> {
    pub fn new(circuit: &'c CliffordCircuit) -> Self {
        Propagator {
            circuit,
            slice: PauliOperator::identity(circuit.num_qubits()),
            flips: BitVec::zeros(circuit.num_outcomes()),
            sorted: Vec::new(),
        }
    }

    /// Measurement flips of the fault given by `sites` (duplicates XOR out).
    pub fn measurement_flips(&mut self, sites: &[FaultSite]) -> &BitVec {
        self.sorted.clear();
        self.sorted.extend_from_slice(sites);
        self.sorted.sort_by_key(|s| s.slot);
        self.slice = PauliOperator::identity(self.circuit.num_qubits());
        self.flips.clear();
        let mut next = 0usize;
        let absorb = |slot: u32, slice: &mut PauliOperator, next: &mut usize| {
            while *next < self.sorted.len() && self.sorted[*next].slot == slot {
                let s = self.sorted[*next];
                slice.flip_xz(s.qubit as usize, s.x, s.z);
                *next += 1;
            }
        };
        absorb(0, &mut self.slice, &mut next);
        for (s, level) in self.circuit.levels().iter().enumerate() {
            for op in level {
                if let Operation::Measurement(m) = op {
                    if self.slice.commutator_unchecked(&m.observable) {
                        self.flips.flip(m.outcome_index);
                    }
                }
            }
            apply_level(level, &mut self.slice);
            absorb(s as u32 + 1, &mut self.slice, &mut next);
        }
        &self.flips
    }
}

/// Whole-level tableaux on the full register, an alternative to per-gate
/// conjugation. Only available up to 64 qubits (images are packed words).
pub fn level_tableaux(circuit: &CliffordCircuit) -> Result<Vec<CliffordTableau>> {
    let n = circuit.num_qubits();
    if n > MAX_TABLEAU_ARITY {
        return Err(Error::ResourceLimit(format!(
            "dense level tableaux need <= {MAX_TABLEAU_ARITY} qubits, circuit has {n}"
        )));
    }
    let mut out = Vec::with_capacity(circuit.depth());
    for level in circuit.levels() {
        let mut t = CliffordTableau::identity(n);
        for op in level {
            if let Operation::Gate(g) = op {
                t = t.then(&g.tableau, &g.support)?;
            }
        }
        out.push(t);
    }
    Ok(out)
}

/// Forward cumulant using one dense tableau per level.
pub fn cumulant_dense(
    circuit: &CliffordCircuit,
    levels: &[CliffordTableau],
    fault: &FaultOperator,
) -> Result<Cumulant> {
    check_fault_dims(circuit, fault)?;
    if levels.len() != circuit.depth() {
        return Err(Error::DimensionMismatch {
            context: "dense level tableaux",
            expected: circuit.depth(),
            got: levels.len(),
        });
    }
    let n = circuit.num_qubits();
    let support: Vec<usize> = (0..n).collect();
    let mut out = FaultOperator::identity(circuit);
    let mut slice = fault.slice(0);
    out.xor_slice(0, &slice);
    for (s, t) in levels.iter().enumerate() {
        t.conjugate_in_place(&mut slice, &support);
        slice.mul_assign(&fault.slice(s + 1));
        out.xor_slice(s + 1, &slice);
    }
    Ok(Cumulant(out))
}
