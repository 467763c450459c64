//! Text formats, digests, and machine-readable outputs.
//!
//! Everything that leaves or enters the process goes through here. The two
//! hand-written formats (circuits and check matrices) are line oriented, use
//! 1-based qubit, level, and outcome numbers, and treat `#` as a comment to
//! end of line. Serializers are canonical: parsing a file and serializing it
//! again is idempotent, and digests are taken over the canonical form, so
//! formatting differences never change a digest.
//!
//! Precompute artifacts and lookup caches are deterministic too; their
//! headers carry the digests of the inputs they were built from, which is
//! how stale artifacts are caught before a run.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bench::BenchRecord;
use crate::bits::BitVec;
use crate::circuit::{
    CircuitBuilder, CliffordCircuit, FaultOperator, FaultSite, GateKind, Operation, PeriodDecl,
};
use crate::decoder::{Decoder, LookupDecoder};
use crate::engine::{RateEstimate, Timings};
use crate::error::{Error, Result};
use crate::noise::NoiseSpec;
use crate::pauli::{CliffordTableau, LocalPauli, NamedGate, PauliOperator};
use crate::spacetime::{BackpropagatedSet, CheckSet};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// Pauli labels: X3, Y1*Z4, ...

fn write_pauli_label(out: &mut String, p: &PauliOperator) {
    let mut first = true;
    for q in p.support() {
        if !first {
            out.push('*');
        }
        first = false;
        let letter = match (p.x_bit(q), p.z_bit(q)) {
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
            (false, false) => unreachable!("support() only yields non-identity sites"),
        };
        let _ = write!(out, "{}{}", letter, q + 1);
    }
    if first {
        out.push('I');
    }
}

fn parse_site(token: &str, num_qubits: usize, line: usize) -> Result<(usize, bool, bool)> {
    let (letter, digits) = token.split_at(1);
    let (x, z) = match letter {
        "X" => (true, false),
        "Y" => (true, true),
        "Z" => (false, true),
        _ => return Err(parse_err(line, format!("unknown Pauli letter in '{token}'"))),
    };
    let q: usize = digits
        .parse()
        .map_err(|_| parse_err(line, format!("bad qubit number in '{token}'")))?;
    if q == 0 || q > num_qubits {
        return Err(parse_err(
            line,
            format!("qubit {q} out of range 1..={num_qubits}"),
        ));
    }
    Ok((q - 1, x, z))
}

fn parse_pauli_label(label: &str, num_qubits: usize, line: usize) -> Result<PauliOperator> {
    let mut sites = Vec::new();
    for token in label.split('*') {
        if token.is_empty() {
            return Err(parse_err(line, "empty factor in Pauli product"));
        }
        let site = parse_site(token, num_qubits, line)?;
        if sites.iter().any(|s: &(usize, bool, bool)| s.0 == site.0) {
            return Err(parse_err(
                line,
                format!("qubit {} appears twice in one product", site.0 + 1),
            ));
        }
        sites.push(site);
    }
    PauliOperator::from_sites(num_qubits, &sites)
}

// ---------------------------------------------------------------------------
// Circuit format
//
//   QUBITS 5
//   MPP Z1              # one measurement, outcome numbers follow file order
//   TICK                # level separator
//   CZ 4 1
//   TABLEAU 1 11 01 ON 2
//   PERIOD 2 2 100      # levels 2..3 repeat 100 times (1-based first level)
//
// A TABLEAU line carries the gate arity w, then 2w rows (images of
// X1..Xw, Z1..Zw) of 2w bits each: the first w bits are the image's x part
// on local qubits 1..w, the last w its z part.

pub fn serialize_circuit(c: &CliffordCircuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "QUBITS {}", c.num_qubits());
    for (l, level) in c.levels().iter().enumerate() {
        if l > 0 {
            out.push_str("TICK\n");
        }
        for op in level {
            match op {
                Operation::Gate(g) => match g.kind {
                    GateKind::Named(named) => {
                        out.push_str(named.name());
                        for &q in &g.support {
                            let _ = write!(out, " {}", q + 1);
                        }
                        out.push('\n');
                    }
                    GateKind::Custom => {
                        let w = g.tableau.arity();
                        let _ = write!(out, "TABLEAU {w}");
                        for row in g.tableau.rows() {
                            out.push(' ');
                            for i in 0..w {
                                out.push(if (row.x >> i) & 1 == 1 { '1' } else { '0' });
                            }
                            for i in 0..w {
                                out.push(if (row.z >> i) & 1 == 1 { '1' } else { '0' });
                            }
                        }
                        out.push_str(" ON");
                        for &q in &g.support {
                            let _ = write!(out, " {}", q + 1);
                        }
                        out.push('\n');
                    }
                },
                Operation::Measurement(m) => {
                    out.push_str("MPP ");
                    write_pauli_label(&mut out, &m.observable);
                    out.push('\n');
                }
            }
        }
    }
    if let Some(p) = c.period() {
        let _ = writeln!(
            out,
            "PERIOD {} {} {}",
            p.first_level + 1,
            p.num_levels,
            p.repetitions
        );
    }
    out
}

fn parse_tableau_row(token: &str, w: usize, line: usize) -> Result<LocalPauli> {
    if token.len() != 2 * w {
        return Err(parse_err(
            line,
            format!("tableau row '{token}' must have {} bits", 2 * w),
        ));
    }
    let mut p = LocalPauli::IDENTITY;
    for (i, ch) in token.chars().enumerate() {
        let bit = match ch {
            '0' => false,
            '1' => true,
            _ => return Err(parse_err(line, format!("bad bit '{ch}' in tableau row"))),
        };
        if bit {
            if i < w {
                p.x |= 1 << i;
            } else {
                p.z |= 1 << (i - w);
            }
        }
    }
    Ok(p)
}

fn parse_qubit_1based(token: &str, num_qubits: usize, line: usize) -> Result<usize> {
    let q: usize = token
        .parse()
        .map_err(|_| parse_err(line, format!("bad qubit '{token}'")))?;
    if q == 0 || q > num_qubits {
        return Err(parse_err(
            line,
            format!("qubit {q} out of range 1..={num_qubits}"),
        ));
    }
    Ok(q - 1)
}

pub fn parse_circuit(text: &str) -> Result<CliffordCircuit> {
    let mut num_qubits: Option<usize> = None;
    let mut builder: Option<CircuitBuilder> = None;
    let mut period: Option<PeriodDecl> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let mut parts = stripped.split_whitespace();
        let head = parts.next().unwrap();
        if head == "QUBITS" {
            if num_qubits.is_some() {
                return Err(parse_err(line, "QUBITS given twice"));
            }
            let n: usize = parts
                .next()
                .ok_or_else(|| parse_err(line, "QUBITS needs a count"))?
                .parse()
                .map_err(|_| parse_err(line, "bad qubit count"))?;
            if parts.next().is_some() {
                return Err(parse_err(line, "trailing tokens after QUBITS"));
            }
            num_qubits = Some(n);
            builder = Some(CircuitBuilder::new(n));
            continue;
        }
        let n = num_qubits.ok_or_else(|| parse_err(line, "QUBITS must come first"))?;
        let b = builder.as_mut().unwrap();
        if period.is_some() {
            return Err(parse_err(line, "PERIOD must be the last line"));
        }
        match head {
            "TICK" => {
                if parts.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after TICK"));
                }
                b.tick();
            }
            "MPP" => {
                let label = parts
                    .next()
                    .ok_or_else(|| parse_err(line, "MPP needs a Pauli product"))?;
                if parts.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after MPP"));
                }
                let obs = parse_pauli_label(label, n, line)?;
                b.measure(obs);
            }
            "PERIOD" => {
                let nums: Vec<usize> = parts
                    .map(|t| {
                        t.parse()
                            .map_err(|_| parse_err(line, format!("bad number '{t}'")))
                    })
                    .collect::<Result<_>>()?;
                if nums.len() != 3 {
                    return Err(parse_err(
                        line,
                        "PERIOD needs: first-level num-levels repetitions",
                    ));
                }
                if nums[0] == 0 {
                    return Err(parse_err(line, "PERIOD levels are 1-based"));
                }
                period = Some(PeriodDecl {
                    first_level: nums[0] - 1,
                    num_levels: nums[1],
                    repetitions: nums[2],
                });
            }
            "TABLEAU" => {
                let w: usize = parts
                    .next()
                    .ok_or_else(|| parse_err(line, "TABLEAU needs an arity"))?
                    .parse()
                    .map_err(|_| parse_err(line, "bad tableau arity"))?;
                if w == 0 || w > 31 {
                    return Err(parse_err(line, "tableau arity must be in 1..=31"));
                }
                let mut rows = Vec::with_capacity(2 * w);
                for _ in 0..2 * w {
                    let token = parts
                        .next()
                        .ok_or_else(|| parse_err(line, format!("expected {} rows", 2 * w)))?;
                    rows.push(parse_tableau_row(token, w, line)?);
                }
                match parts.next() {
                    Some("ON") => {}
                    _ => return Err(parse_err(line, "TABLEAU rows must end with ON")),
                }
                let support: Vec<usize> = parts
                    .map(|t| parse_qubit_1based(t, n, line))
                    .collect::<Result<_>>()?;
                if support.len() != w {
                    return Err(parse_err(
                        line,
                        format!("ON lists {} qubits, arity is {w}", support.len()),
                    ));
                }
                let tableau =
                    CliffordTableau::new(w, rows).map_err(|e| parse_err(line, e.to_string()))?;
                b.custom_gate(tableau, &support);
            }
            name => match NamedGate::from_name(name) {
                Some(gate) => {
                    let qubits: Vec<usize> = parts
                        .map(|t| parse_qubit_1based(t, n, line))
                        .collect::<Result<_>>()?;
                    if qubits.len() != gate.arity() {
                        return Err(parse_err(
                            line,
                            format!("{name} takes {} qubits", gate.arity()),
                        ));
                    }
                    b.gate(gate, &qubits);
                }
                None => return Err(parse_err(line, format!("unknown directive '{name}'"))),
            },
        }
    }
    let mut b = builder.ok_or_else(|| parse_err(text.lines().count(), "no QUBITS line"))?;
    if let Some(p) = period {
        b.period(p);
    }
    b.finish()
}

// ---------------------------------------------------------------------------
// Check matrix format: one row per line, space-separated 1-based outcome
// numbers. Syndrome and logical matrices live in separate files of the same
// shape, so a derived check matrix is directly usable as a syndrome file.

pub fn serialize_check_rows(rows: &[BitVec]) -> String {
    let mut out = String::new();
    for row in rows {
        let mut first = true;
        for j in row.iter_ones() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{}", j + 1);
        }
        out.push('\n');
    }
    out
}

pub fn parse_check_rows(text: &str, num_outcomes: usize) -> Result<Vec<BitVec>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let mut row = BitVec::zeros(num_outcomes);
        for t in stripped.split_whitespace() {
            let j: usize = t
                .parse()
                .map_err(|_| parse_err(line, format!("bad outcome number '{t}'")))?;
            if j == 0 || j > num_outcomes {
                return Err(parse_err(
                    line,
                    format!("outcome {j} out of range 1..={num_outcomes}"),
                ));
            }
            if row.get(j - 1) {
                return Err(parse_err(line, format!("outcome {j} repeated")));
            }
            row.set(j - 1, true);
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn serialize_syndrome(checks: &CheckSet) -> String {
    serialize_check_rows(checks.syndrome_rows())
}

pub fn serialize_logical(checks: &CheckSet) -> String {
    serialize_check_rows(checks.logical_rows())
}

pub fn parse_checks(
    syndrome_text: &str,
    logical_text: &str,
    num_outcomes: usize,
) -> Result<CheckSet> {
    let syndrome = parse_check_rows(syndrome_text, num_outcomes)?;
    let logical = parse_check_rows(logical_text, num_outcomes)?;
    CheckSet::new(num_outcomes, syndrome, logical)
}

// ---------------------------------------------------------------------------
// Digests

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Digest of the canonical circuit serialization.
pub fn circuit_digest(c: &CliffordCircuit) -> String {
    sha256_hex(serialize_circuit(c).as_bytes())
}

/// Digest over both matrices of the canonical check serialization.
pub fn checks_digest(c: &CheckSet) -> String {
    let combined = format!(
        "OUTCOMES {}\nSYNDROME\n{}LOGICAL\n{}",
        c.num_outcomes(),
        serialize_syndrome(c),
        serialize_logical(c)
    );
    sha256_hex(combined.as_bytes())
}

// ---------------------------------------------------------------------------
// Precompute artifact
//
//   ABCSIM PRE v1
//   CIRCUIT <hex>
//   CHECKS <hex>
//   REGISTER <qubits> <slots> <outcomes>
//   SYNDROME <count>
//   ROW <flat>:<x>:<z> ...     # flat spacetime index = slot * qubits + qubit
//   LOGICAL <count>
//   ROW ...

pub struct PrecomputeArtifact {
    pub circuit_digest: String,
    pub checks_digest: String,
    pub set: BackpropagatedSet,
}

fn write_op_row(out: &mut String, op: &FaultOperator, num_qubits: usize) {
    out.push_str("ROW");
    for site in op.sites() {
        let _ = write!(
            out,
            " {}:{}:{}",
            site.flat(num_qubits),
            site.x as u8,
            site.z as u8
        );
    }
    out.push('\n');
}

pub fn serialize_precompute(
    set: &BackpropagatedSet,
    circuit_digest: &str,
    checks_digest: &str,
) -> String {
    let mut out = String::new();
    out.push_str("ABCSIM PRE v1\n");
    let _ = writeln!(out, "CIRCUIT {circuit_digest}");
    let _ = writeln!(out, "CHECKS {checks_digest}");
    let _ = writeln!(
        out,
        "REGISTER {} {} {}",
        set.num_qubits(),
        set.num_slots(),
        set.num_outcomes()
    );
    let _ = writeln!(out, "SYNDROME {}", set.num_syndrome_rows());
    for op in set.syndrome_ops() {
        write_op_row(&mut out, op, set.num_qubits());
    }
    let _ = writeln!(out, "LOGICAL {}", set.num_logical_rows());
    for op in set.logical_ops() {
        write_op_row(&mut out, op, set.num_qubits());
    }
    out
}

pub fn parse_precompute(text: &str) -> Result<PrecomputeArtifact> {
    let mut lines = text.lines().enumerate();
    let mut expect = |what: &'static str| -> Result<(usize, String)> {
        for (i, raw) in lines.by_ref() {
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            return Ok((i + 1, stripped.to_string()));
        }
        Err(parse_err(0, format!("missing {what}")))
    };

    let (line, header) = expect("header")?;
    if header != "ABCSIM PRE v1" {
        return Err(parse_err(line, "not a precompute artifact (bad header)"));
    }
    let take_field = |line: usize, text: &str, key: &str| -> Result<String> {
        text.strip_prefix(key)
            .map(|r| r.trim().to_string())
            .ok_or_else(|| parse_err(line, format!("expected {key}")))
    };
    let (line, t) = expect("CIRCUIT line")?;
    let circuit_digest = take_field(line, &t, "CIRCUIT")?;
    let (line, t) = expect("CHECKS line")?;
    let checks_digest = take_field(line, &t, "CHECKS")?;
    let (line, t) = expect("REGISTER line")?;
    let dims: Vec<usize> = take_field(line, &t, "REGISTER")?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, "bad REGISTER")))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(parse_err(line, "REGISTER needs three numbers"));
    }
    let (num_qubits, num_slots, num_outcomes) = (dims[0], dims[1], dims[2]);
    let positions = num_qubits * num_slots;

    let mut read_rows = |key: &'static str| -> Result<Vec<FaultOperator>> {
        let (line, t) = expect(key)?;
        let count: usize = take_field(line, &t, key)?
            .parse()
            .map_err(|_| parse_err(line, "bad row count"))?;
        let mut ops = Vec::with_capacity(count);
        for _ in 0..count {
            let (line, t) = expect("ROW line")?;
            let rest = t
                .strip_prefix("ROW")
                .ok_or_else(|| parse_err(line, "expected ROW"))?;
            let mut sites = Vec::new();
            for token in rest.split_whitespace() {
                let fields: Vec<&str> = token.split(':').collect();
                if fields.len() != 3 {
                    return Err(parse_err(line, format!("bad entry '{token}'")));
                }
                let flat: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(line, "bad flat index"))?;
                if flat >= positions {
                    return Err(parse_err(
                        line,
                        format!("flat index {flat} out of range 0..{positions}"),
                    ));
                }
                let parse_bit = |s: &str| -> Result<bool> {
                    match s {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        _ => Err(parse_err(line, format!("bad bit '{s}'"))),
                    }
                };
                let x = parse_bit(fields[1])?;
                let z = parse_bit(fields[2])?;
                if !x && !z {
                    return Err(parse_err(line, format!("identity entry '{token}'")));
                }
                sites.push(FaultSite {
                    slot: (flat / num_qubits) as u32,
                    qubit: (flat % num_qubits) as u32,
                    x,
                    z,
                });
            }
            ops.push(FaultOperator::from_raw_sites(num_qubits, num_slots, &sites)?);
        }
        Ok(ops)
    };
    let syndrome_ops = read_rows("SYNDROME")?;
    let logical_ops = read_rows("LOGICAL")?;
    Ok(PrecomputeArtifact {
        circuit_digest,
        checks_digest,
        set: BackpropagatedSet::assemble(
            num_qubits,
            num_slots,
            num_outcomes,
            syndrome_ops,
            logical_ops,
        ),
    })
}

// ---------------------------------------------------------------------------
// Lookup cache, a small binary format:
//
//   magic "ABCLK1\n", two 64-byte hex digests, three little-endian f64
//   probabilities, then u32 w_max, u32 syndrome width, u32 logical width,
//   u64 entry count, and per entry the syndrome and logical bits packed
//   little-endian into ceil(width/8) bytes each.

const LOOKUP_MAGIC: &[u8] = b"ABCLK1\n";

fn pack_bits(b: &BitVec, out: &mut Vec<u8>) {
    let mut byte = 0u8;
    for i in 0..b.len() {
        if b.get(i) {
            byte |= 1 << (i % 8);
        }
        if i % 8 == 7 {
            out.push(byte);
            byte = 0;
        }
    }
    if b.len() % 8 != 0 {
        out.push(byte);
    }
}

fn unpack_bits(bytes: &[u8], len: usize) -> BitVec {
    let mut b = BitVec::zeros(len);
    for i in 0..len {
        if (bytes[i / 8] >> (i % 8)) & 1 == 1 {
            b.set(i, true);
        }
    }
    b
}

pub struct LookupArtifact {
    pub circuit_digest: String,
    pub checks_digest: String,
    pub noise: NoiseSpec,
    pub decoder: LookupDecoder,
}

pub fn serialize_lookup(
    decoder: &LookupDecoder,
    circuit_digest: &str,
    checks_digest: &str,
    noise: &NoiseSpec,
) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(LOOKUP_MAGIC);
    out.extend_from_slice(circuit_digest.as_bytes());
    out.extend_from_slice(checks_digest.as_bytes());
    for p in [noise.p_gate, noise.p_meas, noise.p_idle] {
        out.extend_from_slice(&p.to_le_bytes());
    }
    out.extend_from_slice(&(decoder.w_max() as u32).to_le_bytes());
    out.extend_from_slice(&(decoder.num_syndrome() as u32).to_le_bytes());
    out.extend_from_slice(&(decoder.num_logical() as u32).to_le_bytes());
    out.extend_from_slice(&(decoder.len() as u64).to_le_bytes());
    for (s, l) in decoder.entries() {
        pack_bits(s, &mut out);
        pack_bits(l, &mut out);
    }
    out
}

pub fn parse_lookup(bytes: &[u8]) -> Result<LookupArtifact> {
    let bad = |message: &str| parse_err(0, format!("lookup cache: {message}"));
    let mut at = 0usize;
    let mut take = |n: usize| -> Result<&[u8]> {
        if at + n > bytes.len() {
            return Err(bad("truncated"));
        }
        let slice = &bytes[at..at + n];
        at += n;
        Ok(slice)
    };
    if take(LOOKUP_MAGIC.len())? != LOOKUP_MAGIC {
        return Err(bad("bad magic"));
    }
    let hex = |raw: &[u8]| -> Result<String> {
        let s = std::str::from_utf8(raw).map_err(|_| bad("digest not utf-8"))?;
        if !s.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(bad("digest not hex"));
        }
        Ok(s.to_string())
    };
    let circuit_digest = hex(take(64)?)?;
    let checks_digest = hex(take(64)?)?;
    let mut probs = [0f64; 3];
    for p in probs.iter_mut() {
        *p = f64::from_le_bytes(take(8)?.try_into().unwrap());
    }
    let noise = NoiseSpec::new(probs[0], probs[1], probs[2])?;
    let mut u32_at = || -> Result<u32> { Ok(u32::from_le_bytes(take(4)?.try_into().unwrap())) };
    let w_max = u32_at()? as usize;
    let num_syndrome = u32_at()? as usize;
    let num_logical = u32_at()? as usize;
    let count = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
    let s_bytes = num_syndrome.div_ceil(8);
    let l_bytes = num_logical.div_ceil(8);
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        let s = unpack_bits(take(s_bytes)?, num_syndrome);
        let l = unpack_bits(take(l_bytes)?, num_logical);
        entries.push((s, l));
    }
    if at != bytes.len() {
        return Err(bad("trailing bytes"));
    }
    let decoder = LookupDecoder::from_entries(num_syndrome, num_logical, w_max, entries)?;
    Ok(LookupArtifact {
        circuit_digest,
        checks_digest,
        noise,
        decoder,
    })
}

// ---------------------------------------------------------------------------
// Results JSON

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ResultsJson {
    pub format_version: u32,
    pub engine: String,
    pub circuit_digest: String,
    pub checks_digest: String,
    pub noise: NoiseSpec,
    pub seed: u64,
    pub n_samples: u64,
    pub n_fail: u64,
    pub rate: f64,
    pub wilson_ci_95: [f64; 2],
    pub timings: TimingsJson,
}

/// Nanoseconds per phase; the only fields determinism tests must ignore.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TimingsJson {
    pub sample: u64,
    pub syndrome: u64,
    pub decode: u64,
    pub total: u64,
}

impl From<Timings> for TimingsJson {
    fn from(t: Timings) -> Self {
        TimingsJson {
            sample: t.sample_ns,
            syndrome: t.syndrome_ns,
            decode: t.decode_ns,
            total: t.total_ns,
        }
    }
}

impl ResultsJson {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("results always serialize");
        s.push('\n');
        s
    }

    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        engine: &str,
        circuit_digest: String,
        checks_digest: String,
        noise: NoiseSpec,
        seed: u64,
        estimate: &RateEstimate,
        timings: Timings,
    ) -> Self {
        ResultsJson {
            format_version: 1,
            engine: engine.to_string(),
            circuit_digest,
            checks_digest,
            noise,
            seed,
            n_samples: estimate.shots,
            n_fail: estimate.failures,
            rate: estimate.rate,
            wilson_ci_95: [estimate.wilson_ci_95.0, estimate.wilson_ci_95.1],
            timings: timings.into(),
        }
    }
}

// ---------------------------------------------------------------------------
// Benchmark CSV

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(
        "rounds,engine,syndrome_ns_per_shot,depth,num_outcomes,num_syndrome_rows,\
         max_incidence,sites_per_shot,shots,precompute_direct_ns,precompute_periodic_ns\n",
    );
    for r in records {
        for (engine, ns) in [("naive", r.naive_ns_per_shot), ("abc", r.abc_ns_per_shot)] {
            let _ = writeln!(
                out,
                "{},{},{:.1},{},{},{},{},{},{},{},{}",
                r.rounds,
                engine,
                ns,
                r.depth,
                r.num_outcomes,
                r.num_syndrome_rows,
                r.max_incidence,
                r.sites_per_shot,
                r.shots,
                r.precompute_direct_ns,
                r.precompute_periodic_ns
            );
        }
    }
    out
}
