//! Check sets and propagation-free syndrome extraction.
//!
//! A check set holds two kinds of rows over the outcome bit-string: syndrome
//! rows, parities that come out even on every noiseless run, and logical
//! rows, the readouts whose flip counts as failure. The straightforward
//! engine pushes a sampled fault through the circuit and applies the rows to
//! the resulting flip vector. The precomputed engine turns each row into a
//! spacetime probe operator once, ahead of time: the probe for row u is the
//! backward cumulant of F(u), the product of the measured observables of u
//! placed at their read slots. A fault's syndrome bit for row u is then the
//! spacetime commutator of the fault with the probe, which only ever looks
//! at the fault's own sites. Incidence lists indexed by flat slot-qubit
//! position make the whole syndrome cost proportional to the fault weight.

use std::collections::BTreeMap;

use crate::bits::{kernel_basis, BitVec};
use crate::circuit::{CliffordCircuit, FaultOperator, FaultSite};
use crate::error::{Error, Result};
use crate::propagation::{back_cumulant_with, invert_levels};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Syndrome and logical rows over outcome indices. Rows need no structural
/// annotations: the periodic precompute classifies a row as translatable by
/// whether its support lies inside the repeated outcome band, which the
/// circuit's period declaration already determines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSet {
    num_outcomes: usize,
    syndrome_rows: Vec<BitVec>,
    logical_rows: Vec<BitVec>,
}

impl CheckSet {
    pub fn new(
        num_outcomes: usize,
        syndrome_rows: Vec<BitVec>,
        logical_rows: Vec<BitVec>,
    ) -> Result<Self> {
        for (what, rows) in [("syndrome", &syndrome_rows), ("logical", &logical_rows)] {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != num_outcomes {
                    return Err(Error::DimensionMismatch {
                        context: "check row width vs outcome count",
                        expected: num_outcomes,
                        got: row.len(),
                    });
                }
                if row.is_zero() {
                    return Err(Error::InvalidTableau(format!(
                        "{what} row {} is empty",
                        i + 1
                    )));
                }
            }
        }
        Ok(CheckSet {
            num_outcomes,
            syndrome_rows,
            logical_rows,
        })
    }

    /// Convenience constructor from 0-based outcome index lists.
    pub fn from_indices(
        num_outcomes: usize,
        syndrome: &[&[usize]],
        logical: &[&[usize]],
    ) -> Result<Self> {
        let syn: Vec<BitVec> = syndrome
            .iter()
            .map(|r| BitVec::from_indices(num_outcomes, r))
            .collect();
        let log: Vec<BitVec> = logical
            .iter()
            .map(|r| BitVec::from_indices(num_outcomes, r))
            .collect();
        Self::new(num_outcomes, syn, log)
    }

    /// Like `from_indices` with owned rows.
    pub fn from_index_rows(
        num_outcomes: usize,
        syndrome: &[Vec<usize>],
        logical: &[Vec<usize>],
    ) -> Result<Self> {
        let syn: Vec<BitVec> = syndrome
            .iter()
            .map(|r| BitVec::from_indices(num_outcomes, r))
            .collect();
        let log: Vec<BitVec> = logical
            .iter()
            .map(|r| BitVec::from_indices(num_outcomes, r))
            .collect();
        Self::new(num_outcomes, syn, log)
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    pub fn num_syndrome_rows(&self) -> usize {
        self.syndrome_rows.len()
    }

    pub fn num_logical_rows(&self) -> usize {
        self.logical_rows.len()
    }

    pub fn syndrome_rows(&self) -> &[BitVec] {
        &self.syndrome_rows
    }

    pub fn logical_rows(&self) -> &[BitVec] {
        &self.logical_rows
    }

    /// Applies the syndrome rows to an outcome-flip vector.
    pub fn syndrome_of_flips(&self, flips: &BitVec) -> Result<BitVec> {
        self.apply_rows(&self.syndrome_rows, flips)
    }

    /// Applies the logical rows to an outcome-flip vector.
    pub fn logical_of_flips(&self, flips: &BitVec) -> Result<BitVec> {
        self.apply_rows(&self.logical_rows, flips)
    }

    fn apply_rows(&self, rows: &[BitVec], flips: &BitVec) -> Result<BitVec> {
        if flips.len() != self.num_outcomes {
            return Err(Error::DimensionMismatch {
                context: "flip vector vs outcome count",
                expected: self.num_outcomes,
                got: flips.len(),
            });
        }
        let mut out = BitVec::zeros(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.and_parity(flips) {
                out.set(i, true);
            }
        }
        Ok(out)
    }
}

/// F(u): the measured observables selected by row u, each placed at the slot
/// its measurement reads. Products collapse to sitewise XOR here because
/// fault operators carry no phase.
pub fn f_of_u(circuit: &CliffordCircuit, row: &BitVec) -> Result<FaultOperator> {
    if row.len() != circuit.num_outcomes() {
        return Err(Error::DimensionMismatch {
            context: "check row width vs circuit outcomes",
            expected: circuit.num_outcomes(),
            got: row.len(),
        });
    }
    let mut f = FaultOperator::identity(circuit);
    for j in row.iter_ones() {
        let (level, m) = circuit.measurement_meta(j)?;
        f.xor_slice(level, &m.observable);
    }
    Ok(f)
}

/// Backpropagated probe operators for every check row, with incidence lists
/// over flat slot-qubit positions for the syndrome rows. `max_incidence` is
/// the largest number of (row, component) pairs any single position touches,
/// which bounds the per-site syndrome work.
///
/// The incidence lists are stored compressed: `rows[off[flat]..off[flat+1]]`
/// are the syndrome rows toggled by a fault component at `flat`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackpropagatedSet {
    num_qubits: usize,
    num_slots: usize,
    num_outcomes: usize,
    syndrome_ops: Vec<FaultOperator>,
    logical_ops: Vec<FaultOperator>,
    inc_x_off: Vec<u32>,
    inc_x_rows: Vec<u32>,
    inc_z_off: Vec<u32>,
    inc_z_rows: Vec<u32>,
    max_incidence: usize,
}

/// Reusable syndrome buffer: folding records which rows it flipped, and the
/// next fold starts by putting exactly those back to zero, so no step ever
/// pays for the total row count.
#[derive(Clone, Debug)]
pub struct SyndromeScratch {
    bits: BitVec,
    touched: Vec<u32>,
}

impl BackpropagatedSet {
    /// Backpropagates every row directly.
    pub fn precompute(circuit: &CliffordCircuit, checks: &CheckSet) -> Result<Self> {
        check_outcomes(circuit, checks)?;
        let inverted = invert_levels(circuit);
        let back = |row: &BitVec| -> Result<FaultOperator> {
            let f = f_of_u(circuit, row)?;
            Ok(back_cumulant_with(circuit, &inverted, &f).0)
        };
        let syndrome_ops: Vec<FaultOperator> =
            checks.syndrome_rows().iter().map(back).collect::<Result<_>>()?;
        let logical_ops: Vec<FaultOperator> =
            checks.logical_rows().iter().map(back).collect::<Result<_>>()?;
        Ok(Self::assemble(
            circuit.num_qubits(),
            circuit.num_slots(),
            checks.num_outcomes(),
            syndrome_ops,
            logical_ops,
        ))
    }

    /// Builds the incidence structure from already-computed probe rows; used
    /// by the periodic path and by artifact deserialization.
    pub fn assemble(
        num_qubits: usize,
        num_slots: usize,
        num_outcomes: usize,
        syndrome_ops: Vec<FaultOperator>,
        logical_ops: Vec<FaultOperator>,
    ) -> Self {
        let positions = num_qubits * num_slots;
        // An X fault component anticommutes with the probe's Z bits and vice
        // versa, so the X incidence comes from the rows' z vectors.
        let (inc_x_off, inc_x_rows) =
            compress_incidence(positions, &syndrome_ops, |p| p.z_vec());
        let (inc_z_off, inc_z_rows) =
            compress_incidence(positions, &syndrome_ops, |p| p.x_vec());
        let max_incidence = (0..positions)
            .map(|f| {
                (inc_x_off[f + 1] - inc_x_off[f]) as usize
                    + (inc_z_off[f + 1] - inc_z_off[f]) as usize
            })
            .max()
            .unwrap_or(0);
        BackpropagatedSet {
            num_qubits,
            num_slots,
            num_outcomes,
            syndrome_ops,
            logical_ops,
            inc_x_off,
            inc_x_rows,
            inc_z_off,
            inc_z_rows,
            max_incidence,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    pub fn num_syndrome_rows(&self) -> usize {
        self.syndrome_ops.len()
    }

    pub fn num_logical_rows(&self) -> usize {
        self.logical_ops.len()
    }

    pub fn syndrome_ops(&self) -> &[FaultOperator] {
        &self.syndrome_ops
    }

    pub fn logical_ops(&self) -> &[FaultOperator] {
        &self.logical_ops
    }

    pub fn max_incidence(&self) -> usize {
        self.max_incidence
    }

    /// Syndrome of a fault given as sites, by folding incidence lists.
    pub fn syndrome(&self, sites: &[FaultSite]) -> BitVec {
        let mut scratch = self.scratch();
        self.syndrome_fold(sites, &mut scratch);
        scratch.bits
    }

    pub fn scratch(&self) -> SyndromeScratch {
        SyndromeScratch {
            bits: BitVec::zeros(self.syndrome_ops.len()),
            touched: Vec::new(),
        }
    }

    /// Folds a fault into the scratch buffer and returns the syndrome. Work
    /// is proportional to the incidence of the current and previous fault's
    /// sites, never to the number of rows.
    pub fn syndrome_fold<'s>(
        &self,
        sites: &[FaultSite],
        scratch: &'s mut SyndromeScratch,
    ) -> &'s BitVec {
        debug_assert_eq!(scratch.bits.len(), self.syndrome_ops.len());
        for &r in &scratch.touched {
            scratch.bits.set(r as usize, false);
        }
        scratch.touched.clear();
        for site in sites {
            let flat = site.flat(self.num_qubits);
            if site.x {
                let (lo, hi) = (self.inc_x_off[flat], self.inc_x_off[flat + 1]);
                for &r in &self.inc_x_rows[lo as usize..hi as usize] {
                    scratch.bits.flip(r as usize);
                    scratch.touched.push(r);
                }
            }
            if site.z {
                let (lo, hi) = (self.inc_z_off[flat], self.inc_z_off[flat + 1]);
                for &r in &self.inc_z_rows[lo as usize..hi as usize] {
                    scratch.bits.flip(r as usize);
                    scratch.touched.push(r);
                }
            }
        }
        &scratch.bits
    }

    /// Logical flips of a fault given as sites, probing each logical probe
    /// row at the fault's own positions.
    pub fn logical(&self, sites: &[FaultSite]) -> BitVec {
        let mut out = BitVec::zeros(self.logical_ops.len());
        self.logical_into(sites, &mut out);
        out
    }

    pub fn logical_into(&self, sites: &[FaultSite], out: &mut BitVec) {
        debug_assert_eq!(out.len(), self.logical_ops.len());
        out.clear();
        for (i, op) in self.logical_ops.iter().enumerate() {
            let p = op.operator();
            let mut bit = false;
            for site in sites {
                let flat = site.flat(self.num_qubits);
                bit ^= (site.x && p.z_vec().get(flat)) ^ (site.z && p.x_vec().get(flat));
            }
            if bit {
                out.set(i, true);
            }
        }
    }

    /// Same syndrome through the full spacetime commutator; slower, kept as
    /// an internal cross-check of the incidence bookkeeping.
    pub fn syndrome_by_commutator(&self, fault: &FaultOperator) -> Result<BitVec> {
        let mut out = BitVec::zeros(self.syndrome_ops.len());
        for (i, op) in self.syndrome_ops.iter().enumerate() {
            if fault.commutator(op)? {
                out.set(i, true);
            }
        }
        Ok(out)
    }
}

/// CSR over flat positions: for each syndrome row, every set bit of the
/// selected component vector contributes one (position, row) pair.
fn compress_incidence<'o, F>(
    positions: usize,
    ops: &'o [FaultOperator],
    component: F,
) -> (Vec<u32>, Vec<u32>)
where
    F: Fn(&'o crate::pauli::PauliOperator) -> &'o BitVec,
{
    let mut counts = vec![0u32; positions + 1];
    for op in ops {
        for flat in component(op.operator()).iter_ones() {
            counts[flat + 1] += 1;
        }
    }
    for i in 0..positions {
        counts[i + 1] += counts[i];
    }
    let mut rows = vec![0u32; *counts.last().unwrap() as usize];
    let mut cursor = counts.clone();
    for (r, op) in ops.iter().enumerate() {
        for flat in component(op.operator()).iter_ones() {
            rows[cursor[flat] as usize] = r as u32;
            cursor[flat] += 1;
        }
    }
    (counts, rows)
}

fn check_outcomes(circuit: &CliffordCircuit, checks: &CheckSet) -> Result<()> {
    if checks.num_outcomes() != circuit.num_outcomes() {
        return Err(Error::DimensionMismatch {
            context: "check set outcomes vs circuit outcomes",
            expected: circuit.num_outcomes(),
            got: checks.num_outcomes(),
        });
    }
    Ok(())
}

/// Derives a basis of the space of outcome parities that are even on every
/// noiseless run, by sampling runs on the mixed initial state. At least
/// `num_outcomes + 64` runs are always taken, so a spurious parity survives
/// with probability at most 2^-64.
pub fn derive_checks(circuit: &CliffordCircuit, shots: usize, seed: u64) -> Vec<BitVec> {
    let n_m = circuit.num_outcomes();
    let shots = shots.max(n_m + 64);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let rows: Vec<BitVec> = (0..shots)
        .map(|_| crate::stabilizer::run_shot(circuit, &mut rng))
        .collect();
    kernel_basis(&rows, n_m)
}

/// Periodic-aware precompute. Rows supported inside the declared periodic
/// band are grouped into translation classes; one representative per class
/// is backpropagated directly and the rest are produced by shifting its
/// sites whole repetitions forward. Boundary-flagged rows, rows reaching
/// outside the band, and rows whose probe support leaks out of the band all
/// fall back to the direct computation, so the result is always equal to
/// `BackpropagatedSet::precompute`.
pub fn precompute_periodic(
    circuit: &CliffordCircuit,
    checks: &CheckSet,
) -> Result<BackpropagatedSet> {
    check_outcomes(circuit, checks)?;
    let period = circuit
        .period()
        .ok_or_else(|| Error::PeriodMismatch("circuit declares no periodic section".into()))?;
    let f0 = period.first_level;
    let m = period.num_levels;
    let t = period.repetitions;

    // Outcome prefix sums per level boundary.
    let mut prefix = vec![0usize; circuit.depth() + 1];
    for (l, level) in circuit.levels().iter().enumerate() {
        let count = level
            .iter()
            .filter(|op| matches!(op, crate::circuit::Operation::Measurement(_)))
            .count();
        prefix[l + 1] = prefix[l] + count;
    }
    let band_first = prefix[f0];
    let band_end = prefix[f0 + m * t];
    let stride_o = (band_end - band_first) / t.max(1);

    let inverted = invert_levels(circuit);
    let direct = |row: &BitVec| -> Result<FaultOperator> {
        let f = f_of_u(circuit, row)?;
        Ok(back_cumulant_with(circuit, &inverted, &f).0)
    };

    let n_rows = checks.num_syndrome_rows();
    let mut syndrome_ops: Vec<Option<FaultOperator>> = vec![None; n_rows];
    // normal form of the outcome set -> (repetition shift, row index)
    let mut classes: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();

    for (i, row) in checks.syndrome_rows().iter().enumerate() {
        let indices: Vec<usize> = row.iter_ones().collect();
        // Rows whose support leaves the repeated band (prep and readout
        // checks) are the boundary rows; they get the direct treatment.
        let translatable =
            stride_o > 0 && indices.iter().all(|&j| j >= band_first && j < band_end);
        if !translatable {
            syndrome_ops[i] = Some(direct(row)?);
            continue;
        }
        let k = (indices[0] - band_first) / stride_o;
        let normal: Vec<usize> = indices.iter().map(|&j| j - k * stride_o).collect();
        classes.entry(normal).or_default().push((k, i));
    }

    for members in classes.values_mut() {
        members.sort_unstable();
        let (rep_k, rep_i) = members[0];
        let rep_op = direct(&checks.syndrome_rows()[rep_i])?;
        let sites = rep_op.sites();
        let span = sites
            .iter()
            .fold(None::<(usize, usize)>, |acc, s| match acc {
                None => Some((s.slot as usize, s.slot as usize)),
                Some((lo, hi)) => Some((lo.min(s.slot as usize), hi.max(s.slot as usize))),
            });
        for &(k, i) in members.iter() {
            let dk = k - rep_k;
            let shifted_ok = match span {
                None => true,
                Some((lo, hi)) => {
                    // Every level the walk passes through must be a template
                    // copy, for the representative and for the shifted row.
                    lo >= f0 && hi + dk * m <= f0 + m * t
                }
            };
            if !shifted_ok {
                syndrome_ops[i] = Some(direct(&checks.syndrome_rows()[i])?);
                continue;
            }
            if dk == 0 {
                syndrome_ops[i] = Some(rep_op.clone());
            } else {
                let moved: Vec<FaultSite> = sites
                    .iter()
                    .map(|s| FaultSite {
                        slot: s.slot + (dk * m) as u32,
                        qubit: s.qubit,
                        x: s.x,
                        z: s.z,
                    })
                    .collect();
                syndrome_ops[i] = Some(FaultOperator::from_sites(circuit, &moved)?);
            }
        }
    }

    let syndrome_ops: Vec<FaultOperator> = syndrome_ops
        .into_iter()
        .map(|o| o.expect("every syndrome row was filled"))
        .collect();
    let logical_ops: Vec<FaultOperator> = checks
        .logical_rows()
        .iter()
        .map(direct)
        .collect::<Result<_>>()?;
    Ok(BackpropagatedSet::assemble(
        circuit.num_qubits(),
        circuit.num_slots(),
        checks.num_outcomes(),
        syndrome_ops,
        logical_ops,
    ))
}
