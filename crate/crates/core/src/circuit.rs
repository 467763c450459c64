//! Clifford circuits as leveled sequences of gates and Pauli-product
//! measurements, plus fault operators on the spacetime register.
//!
//! Conventions, used everywhere downstream:
//! - levels are 0-based internally; text formats and error messages are
//!   1-based.
//! - fault slots sit between levels: slot s is after level s-1 and before
//!   level s, for s in 0..=depth. In 1-based time units slot s reads "s + 0.5".
//! - a measurement in level L is affected by fault slots <= L (it reads the
//!   cumulant at slot L, before its own level acts).
//! - the flat spacetime index of (slot s, qubit q) is s * n + q, 0-based.

use crate::error::{CircuitIssue, Error, Result};
use crate::pauli::{CliffordTableau, NamedGate, PauliOperator};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GateKind {
    Named(NamedGate),
    Custom,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gate {
    pub kind: GateKind,
    pub tableau: CliffordTableau,
    /// 0-based qubit indices, in tableau order.
    pub support: Vec<usize>,
}

impl Gate {
    pub fn named(gate: NamedGate, support: Vec<usize>) -> Self {
        Gate {
            kind: GateKind::Named(gate),
            tableau: gate.tableau(),
            support,
        }
    }

    pub fn custom(tableau: CliffordTableau, support: Vec<usize>) -> Self {
        Gate {
            kind: GateKind::Custom,
            tableau,
            support,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Measurement {
    /// Pauli product on the full register; never identity.
    pub observable: PauliOperator,
    /// 0-based position in the global outcome order.
    pub outcome_index: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Operation {
    Gate(Gate),
    Measurement(Measurement),
}

impl Operation {
    /// Qubits the operation occupies in its level.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Operation::Gate(g) => g.support.clone(),
            Operation::Measurement(m) => m.observable.support(),
        }
    }
}

/// Declared repetition structure: levels
/// `first_level .. first_level + num_levels` (0-based) repeat back to back
/// `repetitions` times in total. Never inferred; always written in the
/// circuit file.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PeriodDecl {
    pub first_level: usize,
    pub num_levels: usize,
    pub repetitions: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CliffordCircuit {
    num_qubits: usize,
    levels: Vec<Vec<Operation>>,
    num_outcomes: usize,
    period: Option<PeriodDecl>,
}

impl CliffordCircuit {
    /// Builds and fully validates. Returns every violation, not just the
    /// first.
    pub fn new(
        num_qubits: usize,
        levels: Vec<Vec<Operation>>,
        period: Option<PeriodDecl>,
    ) -> Result<Self> {
        let num_outcomes = levels
            .iter()
            .flatten()
            .filter(|op| matches!(op, Operation::Measurement(_)))
            .count();
        let c = CliffordCircuit {
            num_qubits,
            levels,
            num_outcomes,
            period,
        };
        let issues = c.validate();
        if issues.is_empty() {
            Ok(c)
        } else {
            Err(Error::InvalidCircuit(issues))
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn num_slots(&self) -> usize {
        self.levels.len() + 1
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    pub fn levels(&self) -> &[Vec<Operation>] {
        &self.levels
    }

    pub fn period(&self) -> Option<PeriodDecl> {
        self.period
    }

    /// Structural checks; empty result means well-formed. Works on any input
    /// without panicking.
    pub fn validate(&self) -> Vec<CircuitIssue> {
        let mut issues = Vec::new();
        let mut push = |level: Option<usize>, op_index: Option<usize>, message: String| {
            issues.push(CircuitIssue {
                level,
                op_index,
                message,
            });
        };
        if self.num_qubits == 0 {
            push(None, None, "circuit has no qubits".into());
        }
        let mut next_outcome = 0usize;
        for (l, level) in self.levels.iter().enumerate() {
            let mut occupied: Vec<Option<usize>> = vec![None; self.num_qubits];
            for (o, op) in level.iter().enumerate() {
                match op {
                    Operation::Gate(g) => {
                        if g.support.len() != g.tableau.arity() {
                            push(
                                Some(l + 1),
                                Some(o + 1),
                                format!(
                                    "gate support size {} does not match tableau arity {}",
                                    g.support.len(),
                                    g.tableau.arity()
                                ),
                            );
                        }
                        let mut seen = std::collections::HashSet::new();
                        for &q in &g.support {
                            if q >= self.num_qubits {
                                push(
                                    Some(l + 1),
                                    Some(o + 1),
                                    format!("qubit {} out of range 1..={}", q + 1, self.num_qubits),
                                );
                            } else if !seen.insert(q) {
                                push(
                                    Some(l + 1),
                                    Some(o + 1),
                                    format!("qubit {} repeated in gate support", q + 1),
                                );
                            }
                        }
                    }
                    Operation::Measurement(m) => {
                        if m.observable.num_qubits() != self.num_qubits {
                            push(
                                Some(l + 1),
                                Some(o + 1),
                                format!(
                                    "observable is on {} qubits, circuit has {}",
                                    m.observable.num_qubits(),
                                    self.num_qubits
                                ),
                            );
                        }
                        if m.observable.is_identity() {
                            push(
                                Some(l + 1),
                                Some(o + 1),
                                "measurement of the identity operator".into(),
                            );
                        }
                        if m.outcome_index != next_outcome {
                            push(
                                Some(l + 1),
                                Some(o + 1),
                                format!(
                                    "outcome index {} out of order, expected {}",
                                    m.outcome_index + 1,
                                    next_outcome + 1
                                ),
                            );
                        }
                        next_outcome += 1;
                    }
                }
                // Disjoint supports within the level.
                for q in op.support() {
                    if q >= self.num_qubits {
                        continue; // already reported above
                    }
                    if let Some(prev) = occupied[q] {
                        push(
                            Some(l + 1),
                            Some(o + 1),
                            format!(
                                "qubit {} already used by op {} in the same level",
                                q + 1,
                                prev + 1
                            ),
                        );
                    } else {
                        occupied[q] = Some(o);
                    }
                }
            }
        }
        if let Some(p) = self.period {
            self.validate_period(p, &mut issues);
        }
        issues
    }

    fn validate_period(&self, p: PeriodDecl, issues: &mut Vec<CircuitIssue>) {
        let mut push = |message: String| {
            issues.push(CircuitIssue {
                level: None,
                op_index: None,
                message,
            });
        };
        if p.num_levels == 0 || p.repetitions == 0 {
            push("period must cover at least one level and one repetition".into());
            return;
        }
        let end = p.first_level + p.num_levels * p.repetitions;
        if end > self.levels.len() {
            push(format!(
                "period declaration covers levels {}..{} but the circuit has {}",
                p.first_level + 1,
                end,
                self.levels.len()
            ));
            return;
        }
        // Every repetition must be structurally identical to the first one;
        // only measurement outcome indices may differ, and those must differ
        // by a fixed per-period stride.
        let stride = self.outcomes_in_levels(p.first_level, p.num_levels);
        for rep in 1..p.repetitions {
            let base = p.first_level;
            let shifted = p.first_level + rep * p.num_levels;
            for dl in 0..p.num_levels {
                let (a, b) = (&self.levels[base + dl], &self.levels[shifted + dl]);
                if a.len() != b.len() {
                    push(format!(
                        "period repetition {}: level {} has {} ops, base level {} has {}",
                        rep + 1,
                        shifted + dl + 1,
                        b.len(),
                        base + dl + 1,
                        a.len()
                    ));
                    continue;
                }
                for (oi, (oa, ob)) in a.iter().zip(b).enumerate() {
                    let same = match (oa, ob) {
                        (Operation::Gate(ga), Operation::Gate(gb)) => ga == gb,
                        (Operation::Measurement(ma), Operation::Measurement(mb)) => {
                            ma.observable == mb.observable
                                && mb.outcome_index == ma.outcome_index + rep * stride
                        }
                        _ => false,
                    };
                    if !same {
                        push(format!(
                            "period repetition {}: op {} of level {} does not match the base block",
                            rep + 1,
                            oi + 1,
                            shifted + dl + 1
                        ));
                    }
                }
            }
        }
    }

    fn outcomes_in_levels(&self, first: usize, count: usize) -> usize {
        self.levels[first..first + count]
            .iter()
            .flatten()
            .filter(|op| matches!(op, Operation::Measurement(_)))
            .count()
    }

    /// Measurements in outcome order as (0-based level, measurement).
    pub fn measurements(&self) -> Vec<(usize, &Measurement)> {
        let mut out = Vec::with_capacity(self.num_outcomes);
        for (l, level) in self.levels.iter().enumerate() {
            for op in level {
                if let Operation::Measurement(m) = op {
                    out.push((l, m));
                }
            }
        }
        out
    }

    /// Level and observable of outcome `j` (0-based).
    pub fn measurement_meta(&self, j: usize) -> Result<(usize, &Measurement)> {
        self.measurements()
            .get(j)
            .copied()
            .ok_or(Error::OutcomeOutOfRange {
                index: j + 1,
                num_outcomes: self.num_outcomes,
            })
    }

    /// Embeds an n-qubit Pauli at one time slot of the spacetime register.
    pub fn eta(&self, slot: usize, p: &PauliOperator) -> Result<FaultOperator> {
        if slot >= self.num_slots() {
            return Err(Error::SlotOutOfRange {
                slot,
                max_slot: self.depth(),
            });
        }
        if p.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                context: "eta embedding",
                expected: self.num_qubits,
                got: p.num_qubits(),
            });
        }
        let op = p.embedded(self.num_qubits * self.num_slots(), slot * self.num_qubits)?;
        Ok(FaultOperator {
            op,
            num_qubits: self.num_qubits,
            num_slots: self.num_slots(),
        })
    }
}

/// One non-trivial site of a fault operator.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct FaultSite {
    pub slot: u32,
    pub qubit: u32,
    pub x: bool,
    pub z: bool,
}

impl FaultSite {
    #[inline]
    pub fn flat(&self, num_qubits: usize) -> usize {
        self.slot as usize * num_qubits + self.qubit as usize
    }
}

/// A Pauli on the spacetime register: one n-qubit slice per fault slot,
/// n * (depth + 1) qubits in total.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaultOperator {
    op: PauliOperator,
    num_qubits: usize,
    num_slots: usize,
}

impl FaultOperator {
    pub fn identity(circuit: &CliffordCircuit) -> Self {
        FaultOperator {
            op: PauliOperator::identity(circuit.num_qubits() * circuit.num_slots()),
            num_qubits: circuit.num_qubits(),
            num_slots: circuit.num_slots(),
        }
    }

    pub fn from_operator(circuit: &CliffordCircuit, op: PauliOperator) -> Result<Self> {
        let expected = circuit.num_qubits() * circuit.num_slots();
        if op.num_qubits() != expected {
            return Err(Error::DimensionMismatch {
                context: "fault operator register",
                expected,
                got: op.num_qubits(),
            });
        }
        Ok(FaultOperator {
            op,
            num_qubits: circuit.num_qubits(),
            num_slots: circuit.num_slots(),
        })
    }

    pub fn from_sites(circuit: &CliffordCircuit, sites: &[FaultSite]) -> Result<Self> {
        Self::from_raw_sites(circuit.num_qubits(), circuit.num_slots(), sites)
    }

    /// Like `from_sites` without a circuit in hand; artifact parsing knows
    /// only the register dimensions.
    pub fn from_raw_sites(
        num_qubits: usize,
        num_slots: usize,
        sites: &[FaultSite],
    ) -> Result<Self> {
        let mut f = FaultOperator {
            op: PauliOperator::identity(num_qubits * num_slots),
            num_qubits,
            num_slots,
        };
        for s in sites {
            if s.slot as usize >= f.num_slots {
                return Err(Error::SlotOutOfRange {
                    slot: s.slot as usize,
                    max_slot: f.num_slots - 1,
                });
            }
            if s.qubit as usize >= f.num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: s.qubit as usize + 1,
                    num_qubits: f.num_qubits,
                });
            }
            f.op.flip_xz(s.flat(f.num_qubits), s.x, s.z);
        }
        Ok(f)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn operator(&self) -> &PauliOperator {
        &self.op
    }

    pub fn weight(&self) -> usize {
        self.op.weight()
    }

    pub fn mul_assign(&mut self, other: &FaultOperator) {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        debug_assert_eq!(self.num_slots, other.num_slots);
        self.op.mul_assign(&other.op);
    }

    pub fn commutator(&self, other: &FaultOperator) -> Result<bool> {
        self.op.commutator(&other.op)
    }

    /// The n-qubit restriction at one slot.
    pub fn slice(&self, slot: usize) -> PauliOperator {
        let mut p = PauliOperator::identity(self.num_qubits);
        let base = slot * self.num_qubits;
        for q in 0..self.num_qubits {
            p.set_xz(q, self.op.x_bit(base + q), self.op.z_bit(base + q));
        }
        p
    }

    /// Multiplies an n-qubit Pauli into the slice at `slot`.
    pub fn xor_slice(&mut self, slot: usize, p: &PauliOperator) {
        debug_assert_eq!(p.num_qubits(), self.num_qubits);
        let base = slot * self.num_qubits;
        for q in 0..self.num_qubits {
            self.op.flip_xz(base + q, p.x_bit(q), p.z_bit(q));
        }
    }

    /// Non-trivial sites, ascending by flat index.
    pub fn sites(&self) -> Vec<FaultSite> {
        let mut out = Vec::new();
        for s in 0..self.num_slots {
            for q in 0..self.num_qubits {
                let i = s * self.num_qubits + q;
                let (x, z) = (self.op.x_bit(i), self.op.z_bit(i));
                if x || z {
                    out.push(FaultSite {
                        slot: s as u32,
                        qubit: q as u32,
                        x,
                        z,
                    });
                }
            }
        }
        out
    }
}

/// Builds levels where measurement outcome indices are assigned automatically
/// in level-then-textual order. Input measurements carry only observables.
pub struct CircuitBuilder {
    num_qubits: usize,
    levels: Vec<Vec<Operation>>,
    next_outcome: usize,
    period: Option<PeriodDecl>,
}

impl CircuitBuilder {
    pub fn new(num_qubits: usize) -> Self {
        CircuitBuilder {
            num_qubits,
            levels: vec![Vec::new()],
            next_outcome: 0,
            period: None,
        }
    }

    /// Closes the current level.
    pub fn tick(&mut self) -> &mut Self {
        self.levels.push(Vec::new());
        self
    }

    pub fn gate(&mut self, gate: NamedGate, support: &[usize]) -> &mut Self {
        self.levels
            .last_mut()
            .unwrap()
            .push(Operation::Gate(Gate::named(gate, support.to_vec())));
        self
    }

    pub fn custom_gate(&mut self, tableau: CliffordTableau, support: &[usize]) -> &mut Self {
        self.levels
            .last_mut()
            .unwrap()
            .push(Operation::Gate(Gate::custom(tableau, support.to_vec())));
        self
    }

    pub fn measure(&mut self, observable: PauliOperator) -> &mut Self {
        let m = Measurement {
            observable,
            outcome_index: self.next_outcome,
        };
        self.next_outcome += 1;
        self.levels.last_mut().unwrap().push(Operation::Measurement(m));
        self
    }

    /// Convenience: measure a product given (0-based qubit, x, z) sites.
    pub fn measure_sites(&mut self, sites: &[(usize, bool, bool)]) -> &mut Self {
        let obs = PauliOperator::from_sites(self.num_qubits, sites)
            .expect("builder sites within range");
        self.measure(obs)
    }

    pub fn period(&mut self, decl: PeriodDecl) -> &mut Self {
        self.period = Some(decl);
        self
    }

    pub fn finish(&mut self) -> Result<CliffordCircuit> {
        let mut levels = std::mem::take(&mut self.levels);
        while levels.last().is_some_and(|l| l.is_empty()) && levels.len() > 1 {
            levels.pop();
        }
        CliffordCircuit::new(self.num_qubits, levels, self.period)
    }
}
