//! Syndrome decoders.
//!
//! A decoder maps a syndrome to a prediction of the logical flips; a shot
//! counts as a failure when the prediction disagrees with the truth. The
//! trivial decoder always predicts no flip. The lookup decoder enumerates
//! every fault combination up to a weight bound ahead of time, keeps the
//! most likely one per syndrome, and answers by table lookup, with unseen
//! syndromes decoded as no flip.

use std::collections::BTreeMap;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::noise::{FaultLocation, NoiseSpec};
use crate::spacetime::BackpropagatedSet;

pub trait Decoder: Send + Sync {
    /// Predicted logical flips for one syndrome.
    fn decode(&self, syndrome: &BitVec) -> BitVec;

    fn num_logical(&self) -> usize;
}

/// Predicts no logical flip, whatever the syndrome says.
pub struct TrivialDecoder {
    num_logical: usize,
}

impl TrivialDecoder {
    pub fn new(num_logical: usize) -> Self {
        TrivialDecoder { num_logical }
    }
}

impl Decoder for TrivialDecoder {
    fn decode(&self, _syndrome: &BitVec) -> BitVec {
        BitVec::zeros(self.num_logical)
    }

    fn num_logical(&self) -> usize {
        self.num_logical
    }
}

/// Most-likely-fault table over all combinations of at most `w_max` firing
/// locations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LookupDecoder {
    num_syndrome: usize,
    num_logical: usize,
    w_max: usize,
    table: BTreeMap<BitVec, BitVec>,
}

impl LookupDecoder {
    pub fn num_syndrome(&self) -> usize {
        self.num_syndrome
    }

    pub fn w_max(&self) -> usize {
        self.w_max
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BitVec, &BitVec)> {
        self.table.iter()
    }

    /// Rebuilds a table from serialized entries.
    pub fn from_entries(
        num_syndrome: usize,
        num_logical: usize,
        w_max: usize,
        entries: Vec<(BitVec, BitVec)>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (s, l) in entries {
            if s.len() != num_syndrome || l.len() != num_logical {
                return Err(Error::DimensionMismatch {
                    context: "lookup table entry width",
                    expected: num_syndrome,
                    got: s.len(),
                });
            }
            if table.insert(s, l).is_some() {
                return Err(Error::Config("duplicate syndrome in lookup table".into()));
            }
        }
        Ok(LookupDecoder {
            num_syndrome,
            num_logical,
            w_max,
            table,
        })
    }
}

impl Decoder for LookupDecoder {
    fn decode(&self, syndrome: &BitVec) -> BitVec {
        debug_assert_eq!(syndrome.len(), self.num_syndrome);
        match self.table.get(syndrome) {
            Some(l) => l.clone(),
            None => BitVec::zeros(self.num_logical),
        }
    }

    fn num_logical(&self) -> usize {
        self.num_logical
    }
}

/// Bit-string order: the first differing index decides.
fn lex_less(a: &BitVec, b: &BitVec) -> bool {
    for i in 0..a.len() {
        match (a.get(i), b.get(i)) {
            (false, true) => return true,
            (true, false) => return false,
            _ => {}
        }
    }
    false
}

/// Builds the most-likely-fault table. Likelihood of a combination is the
/// product over its firing locations of p/(k(1-p)), with k the number of
/// realizations of that location, accumulated in log space; ties prefer the
/// lexicographically smallest logical prediction, so builds are reproducible.
/// The total number of combinations is counted first and must not exceed
/// `max_combinations`.
pub fn build_lookup(
    pre: &BackpropagatedSet,
    locations: &[FaultLocation],
    spec: &NoiseSpec,
    w_max: usize,
    max_combinations: u64,
) -> Result<LookupDecoder> {
    spec.validate()?;
    let mut realizations = Vec::with_capacity(locations.len());
    let mut log_odds = Vec::with_capacity(locations.len());
    for loc in locations {
        let k = loc.num_realizations().ok_or_else(|| {
            Error::ResourceLimit("location with non-enumerable realizations".into())
        })?;
        let p = loc.probability(spec);
        if p >= 1.0 {
            return Err(Error::Config(
                "lookup tables need location probabilities below 1".into(),
            ));
        }
        realizations.push(k);
        log_odds.push(p.ln() - (k as f64).ln() - (1.0 - p).ln());
    }

    let total = count_combinations(&realizations, w_max);
    if total > max_combinations as u128 {
        return Err(Error::ResourceLimit(format!(
            "lookup enumeration needs {total} combinations, cap is {max_combinations}"
        )));
    }

    let mut best: BTreeMap<BitVec, (f64, BitVec)> = BTreeMap::new();
    let mut sites = Vec::new();
    let mut stack: Vec<(usize, u64)> = Vec::new(); // (location, realization)

    // Depth-first over subsets of locations in index order; for each subset,
    // all realization choices.
    fn visit(
        start: usize,
        remaining: usize,
        score: f64,
        stack: &mut Vec<(usize, u64)>,
        sites: &mut Vec<crate::circuit::FaultSite>,
        realizations: &[u64],
        log_odds: &[f64],
        locations: &[FaultLocation],
        pre: &BackpropagatedSet,
        best: &mut BTreeMap<BitVec, (f64, BitVec)>,
    ) {
        sites.clear();
        for &(loc, idx) in stack.iter() {
            locations[loc].realization_into(idx, sites);
        }
        let syndrome = pre.syndrome(sites);
        let logical = pre.logical(sites);
        match best.get_mut(&syndrome) {
            None => {
                best.insert(syndrome, (score, logical));
            }
            Some((s, l)) => {
                if score > *s || (score == *s && lex_less(&logical, l)) {
                    *s = score;
                    *l = logical;
                }
            }
        }
        if remaining == 0 {
            return;
        }
        for loc in start..locations.len() {
            for idx in 0..realizations[loc] {
                stack.push((loc, idx));
                visit(
                    loc + 1,
                    remaining - 1,
                    score + log_odds[loc],
                    stack,
                    sites,
                    realizations,
                    log_odds,
                    locations,
                    pre,
                    best,
                );
                stack.pop();
            }
        }
    }

    visit(
        0,
        w_max,
        0.0,
        &mut stack,
        &mut sites,
        &realizations,
        &log_odds,
        locations,
        pre,
        &mut best,
    );

    let table: BTreeMap<BitVec, BitVec> =
        best.into_iter().map(|(s, (_, l))| (s, l)).collect();
    Ok(LookupDecoder {
        num_syndrome: pre.num_syndrome_rows(),
        num_logical: pre.num_logical_rows(),
        w_max,
        table,
    })
}

/// Number of fault combinations with at most `w_max` firing locations.
fn count_combinations(realizations: &[u64], w_max: usize) -> u128 {
    // dp[w] = combinations using exactly w locations among those seen so far.
    let mut dp = vec![0u128; w_max + 1];
    dp[0] = 1;
    for &k in realizations {
        for w in (1..=w_max).rev() {
            dp[w] = dp[w].saturating_add(dp[w - 1].saturating_mul(k as u128));
        }
    }
    dp.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// A shot fails when the prediction and the truth disagree.
pub fn is_failure(predicted: &BitVec, actual: &BitVec) -> bool {
    predicted != actual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::repetition_memory;
    use crate::noise::enumerate_locations;

    fn d3_setup(p_idle: f64) -> (BackpropagatedSet, Vec<FaultLocation>, NoiseSpec) {
        let (c, checks) = repetition_memory(2);
        let pre = BackpropagatedSet::precompute(&c, &checks).unwrap();
        let spec = NoiseSpec::new(1e-3, 1e-3, p_idle).unwrap();
        let locations = enumerate_locations(&c, &spec);
        (pre, locations, spec)
    }

    #[test]
    fn trivial_decoder_predicts_nothing() {
        let d = TrivialDecoder::new(2);
        let s = BitVec::from_indices(5, &[0, 3]);
        assert!(d.decode(&s).is_zero());
        assert_eq!(d.num_logical(), 2);
    }

    #[test]
    fn lookup_corrects_every_weight_one_fault() {
        let (pre, locations, spec) = d3_setup(1e-3);
        let d = build_lookup(&pre, &locations, &spec, 1, 1 << 20).unwrap();
        for loc in &locations {
            for idx in 0..loc.num_realizations().unwrap() {
                let mut sites = Vec::new();
                loc.realization_into(idx, &mut sites);
                let syndrome = pre.syndrome(&sites);
                let truth = pre.logical(&sites);
                assert_eq!(
                    d.decode(&syndrome),
                    truth,
                    "location {loc:?} realization {idx}"
                );
            }
        }
    }

    #[test]
    fn empty_fault_maps_zero_to_zero() {
        let (pre, locations, spec) = d3_setup(0.0);
        let d = build_lookup(&pre, &locations, &spec, 1, 1 << 20).unwrap();
        let zero = BitVec::zeros(pre.num_syndrome_rows());
        assert!(d.decode(&zero).is_zero());
    }

    #[test]
    fn unknown_syndromes_decode_to_zero() {
        let (pre, locations, spec) = d3_setup(0.0);
        let d = build_lookup(&pre, &locations, &spec, 1, 1 << 20).unwrap();
        let mut odd = BitVec::zeros(pre.num_syndrome_rows());
        for i in 0..odd.len() {
            odd.set(i, true);
        }
        assert!(!d.entries().any(|(s, _)| *s == odd));
        assert!(d.decode(&odd).is_zero());
    }

    #[test]
    fn builds_are_reproducible() {
        let (pre, locations, spec) = d3_setup(1e-3);
        let a = build_lookup(&pre, &locations, &spec, 2, 1 << 24).unwrap();
        let b = build_lookup(&pre, &locations, &spec, 2, 1 << 24).unwrap();
        assert_eq!(a, b);
        assert!(a.len() > 1);
    }

    #[test]
    fn combination_cap_is_enforced() {
        let (pre, locations, spec) = d3_setup(1e-3);
        match build_lookup(&pre, &locations, &spec, 2, 10) {
            Err(Error::ResourceLimit(_)) => {}
            other => panic!("expected a resource limit, got {other:?}"),
        }
    }

    #[test]
    fn count_combinations_small_example() {
        // Two locations with 3 and 1 realizations, w_max 2:
        // 1 empty + (3 + 1) singletons + 3*1 pairs.
        assert_eq!(count_combinations(&[3, 1], 2), 8);
        assert_eq!(count_combinations(&[3, 1], 1), 5);
    }

    #[test]
    fn roundtrip_through_entries() {
        let (pre, locations, spec) = d3_setup(0.0);
        let d = build_lookup(&pre, &locations, &spec, 1, 1 << 20).unwrap();
        let entries: Vec<(BitVec, BitVec)> = d
            .entries()
            .map(|(s, l)| (s.clone(), l.clone()))
            .collect();
        let rebuilt =
            LookupDecoder::from_entries(d.num_syndrome(), d.num_logical(), d.w_max(), entries)
                .unwrap();
        assert_eq!(d, rebuilt);
    }
}
