//! Phase-free Pauli operators and Clifford tableaux over GF(2).
//!
//! A Pauli on n qubits is a pair of n-bit vectors (x, z); global phases are
//! quotiented out, so multiplication is plain XOR and the only invariant that
//! survives is the commutator `[a, b] = a.x . b.z + a.z . b.x (mod 2)`.
//!
//! A Clifford gate is the binary symplectic matrix listing the images of
//! X_1..X_w, Z_1..Z_w. That is all the engine ever needs; signs only matter to
//! the stabilizer oracle, which keeps its own bookkeeping.

use crate::bits::BitVec;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    num_qubits: usize,
    x: BitVec,
    z: BitVec,
}

impl PauliOperator {
    pub fn identity(num_qubits: usize) -> Self {
        PauliOperator {
            num_qubits,
            x: BitVec::zeros(num_qubits),
            z: BitVec::zeros(num_qubits),
        }
    }

    pub fn from_xz(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                context: "pauli x/z vectors",
                expected: x.len(),
                got: z.len(),
            });
        }
        Ok(PauliOperator {
            num_qubits: x.len(),
            x,
            z,
        })
    }

    /// Builds from (qubit, has_x, has_z) entries, 0-based qubits.
    pub fn from_sites(num_qubits: usize, sites: &[(usize, bool, bool)]) -> Result<Self> {
        let mut p = Self::identity(num_qubits);
        for &(q, x, z) in sites {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q + 1,
                    num_qubits,
                });
            }
            if x {
                p.x.flip(q);
            }
            if z {
                p.z.flip(q);
            }
        }
        Ok(p)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        self.x.get(q)
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        self.z.get(q)
    }

    #[inline]
    pub fn set_xz(&mut self, q: usize, x: bool, z: bool) {
        self.x.set(q, x);
        self.z.set(q, z);
    }

    /// XORs a single-site Pauli into the operator.
    #[inline]
    pub fn flip_xz(&mut self, q: usize, x: bool, z: bool) {
        if x {
            self.x.flip(q);
        }
        if z {
            self.z.flip(q);
        }
    }

    pub fn x_vec(&self) -> &BitVec {
        &self.x
    }

    pub fn z_vec(&self) -> &BitVec {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Qubits acted on non-trivially, ascending, 0-based.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .collect()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dims(other, "pauli product")?;
        let mut out = self.clone();
        out.mul_assign(other);
        Ok(out)
    }

    /// In-place product. Dimensions must already match.
    #[inline]
    pub fn mul_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.num_qubits, other.num_qubits);
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn commutator(&self, other: &Self) -> Result<bool> {
        self.check_dims(other, "pauli commutator")?;
        Ok(self.commutator_unchecked(other))
    }

    /// Symplectic form: true iff the operators anticommute.
    #[inline]
    pub fn commutator_unchecked(&self, other: &Self) -> bool {
        self.x.and_parity(&other.z) ^ self.z.and_parity(&other.x)
    }

    /// Embeds into a register of `total` qubits starting at `offset`.
    pub fn embedded(&self, total: usize, offset: usize) -> Result<Self> {
        if offset + self.num_qubits > total {
            return Err(Error::DimensionMismatch {
                context: "pauli embedding",
                expected: total,
                got: offset + self.num_qubits,
            });
        }
        let mut out = Self::identity(total);
        for q in 0..self.num_qubits {
            out.set_xz(offset + q, self.x.get(q), self.z.get(q));
        }
        Ok(out)
    }

    fn check_dims(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for PauliOperator {
    /// Sparse 1-based label like "Y1*Z4", or "I".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for q in 0..self.num_qubits {
            let letter = match (self.x.get(q), self.z.get(q)) {
                (false, false) => continue,
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            if !first {
                write!(f, "*")?;
            }
            write!(f, "{letter}{}", q + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl std::fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

/// A Pauli packed into a single pair of machine words; local frame for gate
/// images (arity <= 64).
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct LocalPauli {
    pub x: u64,
    pub z: u64,
}

impl LocalPauli {
    pub const IDENTITY: LocalPauli = LocalPauli { x: 0, z: 0 };

    #[inline]
    pub fn commutator(self, other: LocalPauli) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() & 1 == 1
    }

    #[inline]
    pub fn mul_assign(&mut self, other: LocalPauli) {
        self.x ^= other.x;
        self.z ^= other.z;
    }
}

pub const MAX_TABLEAU_ARITY: usize = 64;

/// Binary symplectic tableau for a Clifford gate on `arity` qubits.
/// `rows[i]` is the image of X_{i+1}, `rows[arity + i]` the image of Z_{i+1}.
/// Immutable once constructed; construction checks the symplectic condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CliffordTableau {
    arity: usize,
    rows: Vec<LocalPauli>,
}

impl CliffordTableau {
    pub fn new(arity: usize, rows: Vec<LocalPauli>) -> Result<Self> {
        if arity == 0 || arity > MAX_TABLEAU_ARITY {
            return Err(Error::InvalidTableau(format!(
                "arity {arity} outside 1..={MAX_TABLEAU_ARITY}"
            )));
        }
        if rows.len() != 2 * arity {
            return Err(Error::InvalidTableau(format!(
                "expected {} image rows, got {}",
                2 * arity,
                rows.len()
            )));
        }
        let mask = if arity == 64 {
            u64::MAX
        } else {
            (1u64 << arity) - 1
        };
        for (i, r) in rows.iter().enumerate() {
            if r.x & !mask != 0 || r.z & !mask != 0 {
                return Err(Error::InvalidTableau(format!(
                    "row {i} has bits beyond arity {arity}"
                )));
            }
        }
        let t = CliffordTableau { arity, rows };
        t.check_symplectic()?;
        Ok(t)
    }

    pub fn identity(arity: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * arity);
        for i in 0..arity {
            rows.push(LocalPauli { x: 1 << i, z: 0 });
        }
        for i in 0..arity {
            rows.push(LocalPauli { x: 0, z: 1 << i });
        }
        CliffordTableau { arity, rows }
    }

    fn check_symplectic(&self) -> Result<()> {
        let w = self.arity;
        for i in 0..2 * w {
            for j in i..2 * w {
                let expect = j == i + w && i < w; // [X_i, Z_i] = 1, everything else 0
                if self.rows[i].commutator(self.rows[j]) != expect {
                    return Err(Error::InvalidTableau(format!(
                        "images of basis rows {i} and {j} break the symplectic form"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[LocalPauli] {
        &self.rows
    }

    pub fn x_image(&self, i: usize) -> LocalPauli {
        self.rows[i]
    }

    pub fn z_image(&self, i: usize) -> LocalPauli {
        self.rows[self.arity + i]
    }

    /// Image of a local operator under conjugation.
    #[inline]
    pub fn apply_local(&self, p: LocalPauli) -> LocalPauli {
        let mut acc = LocalPauli::IDENTITY;
        let mut xbits = p.x;
        while xbits != 0 {
            let i = xbits.trailing_zeros() as usize;
            xbits &= xbits - 1;
            acc.mul_assign(self.rows[i]);
        }
        let mut zbits = p.z;
        while zbits != 0 {
            let i = zbits.trailing_zeros() as usize;
            zbits &= zbits - 1;
            acc.mul_assign(self.rows[self.arity + i]);
        }
        acc
    }

    /// Conjugates `p` through the gate applied on `support` (0-based global
    /// qubit indices, in tableau order). Qubits outside the support are left
    /// alone.
    pub fn conjugate(&self, p: &PauliOperator, support: &[usize]) -> Result<PauliOperator> {
        self.check_support(p.num_qubits(), support)?;
        let mut out = p.clone();
        self.conjugate_in_place(&mut out, support);
        Ok(out)
    }

    /// Unchecked hot-path version of [`conjugate`](Self::conjugate).
    #[inline]
    pub fn conjugate_in_place(&self, p: &mut PauliOperator, support: &[usize]) {
        debug_assert_eq!(support.len(), self.arity);
        let mut local = LocalPauli::IDENTITY;
        for (i, &q) in support.iter().enumerate() {
            local.x |= (p.x_bit(q) as u64) << i;
            local.z |= (p.z_bit(q) as u64) << i;
        }
        let image = self.apply_local(local);
        for (i, &q) in support.iter().enumerate() {
            p.set_xz(q, (image.x >> i) & 1 == 1, (image.z >> i) & 1 == 1);
        }
    }

    fn check_support(&self, num_qubits: usize, support: &[usize]) -> Result<()> {
        if support.len() != self.arity {
            return Err(Error::DimensionMismatch {
                context: "gate support",
                expected: self.arity,
                got: support.len(),
            });
        }
        for &q in support {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q + 1,
                    num_qubits,
                });
            }
        }
        Ok(())
    }

    /// The tableau of "this gate, then `gate` applied at `positions`"
    /// (indices within this tableau's frame). Every image row is conjugated
    /// by the later gate.
    pub fn then(&self, gate: &CliffordTableau, positions: &[usize]) -> Result<Self> {
        if positions.len() != gate.arity {
            return Err(Error::DimensionMismatch {
                context: "tableau composition support",
                expected: gate.arity,
                got: positions.len(),
            });
        }
        for &p in positions {
            if p >= self.arity {
                return Err(Error::QubitOutOfRange {
                    qubit: p + 1,
                    num_qubits: self.arity,
                });
            }
        }
        let mut rows = self.rows.clone();
        for row in &mut rows {
            let mut local = LocalPauli::IDENTITY;
            for (i, &q) in positions.iter().enumerate() {
                local.x |= ((row.x >> q) & 1) << i;
                local.z |= ((row.z >> q) & 1) << i;
            }
            let image = gate.apply_local(local);
            for (i, &q) in positions.iter().enumerate() {
                row.x = (row.x & !(1 << q)) | (((image.x >> i) & 1) << q);
                row.z = (row.z & !(1 << q)) | (((image.z >> i) & 1) << q);
            }
        }
        Ok(CliffordTableau {
            arity: self.arity,
            rows,
        })
    }

    /// Tableau of the inverse gate. For a symplectic M with the (x|z) column
    /// convention used here, M^-1 = L M^T L where L swaps the x and z halves.
    pub fn invert(&self) -> Self {
        let w = self.arity;
        let get = |row: usize, col: usize| -> bool {
            let r = self.rows[row];
            if col < w {
                (r.x >> col) & 1 == 1
            } else {
                (r.z >> (col - w)) & 1 == 1
            }
        };
        let swap_half = |k: usize| (k + w) % (2 * w);
        let mut rows = vec![LocalPauli::IDENTITY; 2 * w];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..2 * w {
                if get(swap_half(j), swap_half(i)) {
                    if j < w {
                        row.x |= 1 << j;
                    } else {
                        row.z |= 1 << (j - w);
                    }
                }
            }
        }
        // Inverse of a symplectic matrix is symplectic; skip re-validation.
        CliffordTableau { arity: w, rows }
    }
}

/// The built-in gate set. SDG coincides with S and the Pauli gates with the
/// identity once phases are quotiented out, but they stay distinct names so
/// circuit files round-trip.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum NamedGate {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    Cx,
    Cz,
    Swap,
}

impl NamedGate {
    pub const ALL: [NamedGate; 9] = [
        NamedGate::H,
        NamedGate::S,
        NamedGate::Sdg,
        NamedGate::X,
        NamedGate::Y,
        NamedGate::Z,
        NamedGate::Cx,
        NamedGate::Cz,
        NamedGate::Swap,
    ];

    pub fn arity(self) -> usize {
        match self {
            NamedGate::H
            | NamedGate::S
            | NamedGate::Sdg
            | NamedGate::X
            | NamedGate::Y
            | NamedGate::Z => 1,
            NamedGate::Cx | NamedGate::Cz | NamedGate::Swap => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedGate::H => "H",
            NamedGate::S => "S",
            NamedGate::Sdg => "SDG",
            NamedGate::X => "X",
            NamedGate::Y => "Y",
            NamedGate::Z => "Z",
            NamedGate::Cx => "CX",
            NamedGate::Cz => "CZ",
            NamedGate::Swap => "SWAP",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        NamedGate::ALL.iter().copied().find(|g| g.name() == name)
    }

    pub fn tableau(self) -> CliffordTableau {
        let p = |x: u64, z: u64| LocalPauli { x, z };
        let rows = match self {
            NamedGate::H => vec![p(0, 1), p(1, 0)],
            NamedGate::S | NamedGate::Sdg => vec![p(1, 1), p(0, 1)],
            NamedGate::X | NamedGate::Y | NamedGate::Z => vec![p(1, 0), p(0, 1)],
            // support order: [control, target] for CX; symmetric otherwise
            NamedGate::Cx => vec![p(0b11, 0), p(0b10, 0), p(0, 0b01), p(0, 0b11)],
            NamedGate::Cz => vec![p(0b01, 0b10), p(0b10, 0b01), p(0, 0b01), p(0, 0b10)],
            NamedGate::Swap => vec![p(0b10, 0), p(0b01, 0), p(0, 0b10), p(0, 0b01)],
        };
        let arity = self.arity();
        CliffordTableau { arity, rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_pauli, random_tableau};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn product_drops_phase() {
        let x = PauliOperator::from_sites(2, &[(0, true, false)]).unwrap();
        let z = PauliOperator::from_sites(2, &[(0, false, true)]).unwrap();
        let y = PauliOperator::from_sites(2, &[(0, true, true)]).unwrap();
        assert_eq!(x.multiply(&z).unwrap(), y);
        assert_eq!(z.multiply(&x).unwrap(), y);
        assert!(x.multiply(&x).unwrap().is_identity());
    }

    #[test]
    fn commutator_basics() {
        let x1 = PauliOperator::from_sites(2, &[(0, true, false)]).unwrap();
        let z1 = PauliOperator::from_sites(2, &[(0, false, true)]).unwrap();
        let z2 = PauliOperator::from_sites(2, &[(1, false, true)]).unwrap();
        assert!(x1.commutator(&z1).unwrap());
        assert!(!x1.commutator(&z2).unwrap());
        assert!(!x1.commutator(&x1).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = PauliOperator::identity(2);
        let b = PauliOperator::identity(3);
        assert!(a.multiply(&b).is_err());
        assert!(a.commutator(&b).is_err());
    }

    #[test]
    fn bilinearity_of_commutator() {
        let mut rng = ChaCha12Rng::seed_from_u64(2024);
        for _ in 0..1200 {
            let n = rng.gen_range(1..12);
            let a = random_pauli(&mut rng, n);
            let b = random_pauli(&mut rng, n);
            let c = random_pauli(&mut rng, n);
            let ab = a.multiply(&b).unwrap();
            assert_eq!(
                ab.commutator(&c).unwrap(),
                a.commutator(&c).unwrap() ^ b.commutator(&c).unwrap()
            );
        }
    }

    #[test]
    fn weight_subadditive() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..500 {
            let n = rng.gen_range(1..20);
            let a = random_pauli(&mut rng, n);
            let b = random_pauli(&mut rng, n);
            let prod = a.multiply(&b).unwrap();
            assert!(prod.weight() <= a.weight() + b.weight());
        }
    }

    #[test]
    fn named_gate_actions() {
        let h = NamedGate::H.tableau();
        let n = 3;
        let x2 = PauliOperator::from_sites(n, &[(1, true, false)]).unwrap();
        let z2 = PauliOperator::from_sites(n, &[(1, false, true)]).unwrap();
        assert_eq!(h.conjugate(&x2, &[1]).unwrap(), z2);
        assert_eq!(h.conjugate(&z2, &[1]).unwrap(), x2);

        let s = NamedGate::S.tableau();
        let y2 = PauliOperator::from_sites(n, &[(1, true, true)]).unwrap();
        assert_eq!(s.conjugate(&x2, &[1]).unwrap(), y2);

        let cx = NamedGate::Cx.tableau();
        let x1 = PauliOperator::from_sites(n, &[(0, true, false)]).unwrap();
        let x1x2 = PauliOperator::from_sites(n, &[(0, true, false), (1, true, false)]).unwrap();
        assert_eq!(cx.conjugate(&x1, &[0, 1]).unwrap(), x1x2);

        let cz = NamedGate::Cz.tableau();
        let x1z2 = PauliOperator::from_sites(n, &[(0, true, false), (1, false, true)]).unwrap();
        assert_eq!(cz.conjugate(&x1, &[0, 1]).unwrap(), x1z2);
    }

    #[test]
    fn conjugation_leaves_non_support_alone() {
        let cx = NamedGate::Cx.tableau();
        let p = PauliOperator::from_sites(4, &[(0, true, false), (3, false, true)]).unwrap();
        let out = cx.conjugate(&p, &[0, 2]).unwrap();
        assert!(out.z_bit(3));
        assert!(!out.x_bit(1) && !out.z_bit(1));
    }

    #[test]
    fn conjugation_preserves_commutators() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..300 {
            let w = rng.gen_range(1..6);
            let t = random_tableau(&mut rng, w);
            let n = w + rng.gen_range(0..3);
            let support: Vec<usize> = (0..w).collect();
            let a = random_pauli(&mut rng, n);
            let b = random_pauli(&mut rng, n);
            let ua = t.conjugate(&a, &support).unwrap();
            let ub = t.conjugate(&b, &support).unwrap();
            assert_eq!(
                a.commutator(&b).unwrap(),
                ua.commutator(&ub).unwrap()
            );
        }
    }

    #[test]
    fn invert_is_involutive_and_undoes_conjugation() {
        let mut rng = ChaCha12Rng::seed_from_u64(123);
        for _ in 0..200 {
            let w = rng.gen_range(1..6);
            let t = random_tableau(&mut rng, w);
            let inv = t.invert();
            assert_eq!(inv.invert(), t);
            let support: Vec<usize> = (0..w).collect();
            let p = random_pauli(&mut rng, w);
            let roundtrip = inv.conjugate(&t.conjugate(&p, &support).unwrap(), &support).unwrap();
            assert_eq!(roundtrip, p);
        }
    }

    #[test]
    fn invert_s_sends_y_to_x() {
        let s = NamedGate::S.tableau();
        let y = PauliOperator::from_sites(1, &[(0, true, true)]).unwrap();
        let x = PauliOperator::from_sites(1, &[(0, true, false)]).unwrap();
        assert_eq!(s.invert().conjugate(&y, &[0]).unwrap(), x);
    }

    #[test]
    fn non_symplectic_rejected() {
        // Both basis images X: the X/Z pairing is destroyed.
        let rows = vec![LocalPauli { x: 1, z: 0 }, LocalPauli { x: 1, z: 0 }];
        assert!(matches!(
            CliffordTableau::new(1, rows),
            Err(Error::InvalidTableau(_))
        ));
    }

    #[test]
    fn arity_limits() {
        assert!(CliffordTableau::new(0, vec![]).is_err());
        assert!(CliffordTableau::new(65, vec![LocalPauli::IDENTITY; 130]).is_err());
    }

    #[test]
    fn display_labels() {
        let p = PauliOperator::from_sites(4, &[(0, true, true), (3, false, true)]).unwrap();
        assert_eq!(format!("{p}"), "Y1*Z4");
        assert_eq!(format!("{}", PauliOperator::identity(2)), "I");
    }
}
