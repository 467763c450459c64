//! The acceptance gate. Each test checks one shipping criterion end to end
//! and prints a single summary line on success; a failed assertion is a
//! failed criterion, never papered over. Run with --nocapture to see the
//! summary lines.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use abcsim_core::bench::{benchmark_repetition, BenchConfig};
use abcsim_core::bits::{row_space_equal, BitVec};
use abcsim_core::circuit::{FaultOperator, FaultSite};
use abcsim_core::decoder::{build_lookup, is_failure, Decoder, TrivialDecoder};
use abcsim_core::engine::{EngineKind, Run, RunConfig};
use abcsim_core::families::{cz_ladder, repetition_memory};
use abcsim_core::noise::{enumerate_locations, NoiseSpec};
use abcsim_core::propagation::{back_cumulant, cumulant, effect, effect_on_measurements};
use abcsim_core::random::{
    random_checked_circuit, random_circuit, random_fault, random_rows, RandomCircuitConfig,
};
use abcsim_core::spacetime::{derive_checks, f_of_u, BackpropagatedSet, CheckSet};
use abcsim_core::stabilizer::run_shot;

/// Criterion 1: the adjoint identity [cum(F), G] = [F, back(G)] holds exactly
/// on 10^4 random fault pairs spread over 20 random circuits, inside a
/// minute.
#[test]
fn acceptance_1_adjoint_identity() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let cfg = RandomCircuitConfig::default(); // up to 8 qubits, depth 10
    let circuits: Vec<_> = (0..20).map(|_| random_circuit(&mut rng, &cfg)).collect();
    let mut pairs = 0u32;
    'outer: loop {
        for c in &circuits {
            let f = random_fault(&mut rng, c);
            let g = random_fault(&mut rng, c);
            let forward = cumulant(c, &f).unwrap().0;
            let backward = back_cumulant(c, &g).unwrap().0;
            assert_eq!(
                forward.commutator(&g).unwrap(),
                f.commutator(&backward).unwrap(),
                "adjoint identity broken"
            );
            pairs += 1;
            if pairs >= 10_000 {
                break 'outer;
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "adjoint sweep took {elapsed:?}, budget is one minute"
    );
    println!(
        "acceptance 1 PASS: adjoint identity exact on {pairs} pairs over {} circuits ({elapsed:?})",
        circuits.len()
    );
}

/// Criterion 2: the flip parity of any outcome subset u equals the
/// commutator of the fault with the backpropagated probe of u, for 10^4
/// random faults over random circuits and random rows.
#[test]
fn acceptance_2_probe_commutator_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(202);
    let cfg = RandomCircuitConfig::default();
    let mut faults = 0u32;
    let mut checked = 0u64;
    'outer: while faults < 10_000 {
        let c = random_circuit(&mut rng, &cfg);
        let rows = random_rows(&mut rng, c.num_outcomes(), 4);
        let probes: Vec<FaultOperator> = rows
            .iter()
            .map(|u| {
                let probe = f_of_u(&c, u).unwrap();
                back_cumulant(&c, &probe).unwrap().0
            })
            .collect();
        for _ in 0..50 {
            let fault = random_fault(&mut rng, &c);
            let flips = effect_on_measurements(&c, &fault).unwrap();
            for (u, probe) in rows.iter().zip(&probes) {
                assert_eq!(
                    flips.and_parity(u),
                    fault.commutator(probe).unwrap(),
                    "probe commutator disagrees with propagated flips"
                );
                checked += 1;
            }
            faults += 1;
            if faults >= 10_000 {
                break 'outer;
            }
        }
    }
    println!(
        "acceptance 2 PASS: flip parity equals probe commutator on {faults} faults ({checked} parities)"
    );
}

/// Criterion 3: the worked micro-example. The outcome-flip vector with bits
/// 6 and 8 set (1-based) yields syndrome (1,0,1,0) and logical flips (1) by
/// the naive matrix product, and the fault that causes it (Y on qubit 1
/// between levels 1 and 2) reproduces the same answers through both paths.
#[test]
fn acceptance_3_golden_fixture() {
    let (c, checks) = cz_ladder();

    let mut flips = BitVec::zeros(c.num_outcomes());
    flips.set(5, true);
    flips.set(7, true);
    let syndrome = checks.syndrome_of_flips(&flips).unwrap();
    let logical = checks.logical_of_flips(&flips).unwrap();
    let expect_syndrome = BitVec::from_indices(4, &[0, 2]);
    assert_eq!(syndrome, expect_syndrome, "naive syndrome != (1,0,1,0)");
    assert_eq!(logical, BitVec::from_indices(1, &[0]), "logical flips != (1)");

    let fault = FaultOperator::from_sites(
        &c,
        &[FaultSite {
            slot: 1,
            qubit: 0,
            x: true,
            z: true,
        }],
    )
    .unwrap();
    let eff = effect(&c, &fault).unwrap();
    assert_eq!(eff.measurement_flips, flips, "propagated flips != e6+e8");

    let pre = BackpropagatedSet::precompute(&c, &checks).unwrap();
    let sites = fault.sites();
    assert_eq!(pre.syndrome(&sites), expect_syndrome, "abc syndrome != (1,0,1,0)");
    assert_eq!(pre.logical(&sites), BitVec::from_indices(1, &[0]));
    println!(
        "acceptance 3 PASS: fixture fault gives syndrome (1,0,1,0) and logical (1) on both paths"
    );
}

fn shot_streams_match(
    c: &abcsim_core::circuit::CliffordCircuit,
    checks: &CheckSet,
    spec: NoiseSpec,
    shots: u64,
    seed: u64,
) {
    let pre = BackpropagatedSet::precompute(c, checks).unwrap();
    let decoder = TrivialDecoder::new(checks.num_logical_rows());
    let run = Run::new(c, checks, Some(&pre), spec, &decoder).unwrap();
    let cfg = RunConfig {
        shots,
        seed,
        shards: 4,
    };
    let naive = run.shots(EngineKind::Naive, &cfg).unwrap();
    let abc = run.shots(EngineKind::Abc, &cfg).unwrap();
    assert_eq!(naive, abc, "per-shot streams differ between engines");
    let est_naive = run.estimate(EngineKind::Naive, &cfg).unwrap().estimate;
    let est_abc = run.estimate(EngineKind::Abc, &cfg).unwrap().estimate;
    assert_eq!(est_naive, est_abc, "rate estimates differ between engines");
}

/// Criterion 4: the naive and abc engines produce bit-identical per-shot
/// (syndrome, logical, verdict) streams and identical rate estimates for the
/// same seed: 10^4 shots on the fixture and on 20 random circuits.
#[test]
fn acceptance_4_engine_equivalence() {
    let spec = NoiseSpec::new(0.02, 0.02, 0.01).unwrap();
    let (c, checks) = cz_ladder();
    shot_streams_match(&c, &checks, spec, 10_000, 404);

    let mut rng = ChaCha12Rng::seed_from_u64(405);
    let cfg = RandomCircuitConfig::default();
    for i in 0..20 {
        let c = random_circuit(&mut rng, &cfg);
        let syndrome = random_rows(&mut rng, c.num_outcomes(), 3);
        let logical = random_rows(&mut rng, c.num_outcomes(), 1);
        let checks = CheckSet::new(c.num_outcomes(), syndrome, logical).unwrap();
        shot_streams_match(&c, &checks, spec, 10_000, 500 + i);
    }
    println!(
        "acceptance 4 PASS: engines bit-identical over 10^4 shots on the fixture and 20 random circuits"
    );
}

/// Criterion 5: derive_checks on the fixture recovers exactly the row space
/// of its four syndrome checks; on 20 random circuits every derived check
/// has zero parity on 10^3 fresh noiseless runs.
#[test]
fn acceptance_5_check_derivation_oracle() {
    let (c, checks) = cz_ladder();
    let derived = derive_checks(&c, 4096, 515);
    assert!(
        row_space_equal(&derived, checks.syndrome_rows()),
        "derived checks span a different row space than the fixture checks"
    );

    let mut rng = ChaCha12Rng::seed_from_u64(505);
    let cfg = RandomCircuitConfig::default();
    let mut nontrivial = 0usize;
    for i in 0..20u64 {
        let c = random_checked_circuit(&mut rng, &cfg);
        let derived = derive_checks(&c, 2048, 900 + i);
        if !derived.is_empty() {
            nontrivial += 1;
        }
        let mut fresh = ChaCha12Rng::seed_from_u64(7000 + i);
        for _ in 0..1000 {
            let outcomes = run_shot(&c, &mut fresh);
            for row in &derived {
                assert!(
                    !row.and_parity(&outcomes),
                    "derived check fired on a noiseless run"
                );
            }
        }
    }
    assert!(
        nontrivial >= 15,
        "only {nontrivial}/20 circuits produced any checks; oracle under-exercised"
    );
    println!(
        "acceptance 5 PASS: fixture row space recovered; derived checks quiet on 10^3 fresh runs x 20 circuits ({nontrivial} with checks)"
    );
}

/// Criterion 6: scaling on the repetition family with a fixed fault count
/// per shot. Going from depth 10 (4 rounds) to depth 1000 (499 rounds), the
/// abc per-shot syndrome cost stays under 2x while the naive path grows at
/// least 10x. The periodic precompute beats the direct one at 100+ rounds,
/// and the incidence bound does not grow with size. Budget: five minutes.
#[test]
fn acceptance_6_ldpc_scaling() {
    let started = Instant::now();
    let cfg = BenchConfig {
        rounds: vec![4, 100, 499],
        shots: 2000,
        sites_per_shot: 8,
        repeats: 3,
        seed: 606,
    };
    let records = benchmark_repetition(&cfg).unwrap();
    assert_eq!(records[0].depth, 10);
    assert_eq!(records[2].depth, 1000);

    let abc_ratio = records[2].abc_ns_per_shot / records[0].abc_ns_per_shot;
    let naive_ratio = records[2].naive_ns_per_shot / records[0].naive_ns_per_shot;
    assert!(
        abc_ratio < 2.0,
        "abc per-shot syndrome time grew {abc_ratio:.2}x from depth 10 to 1000 (limit 2x)"
    );
    assert!(
        naive_ratio >= 10.0,
        "naive per-shot time grew only {naive_ratio:.2}x from depth 10 to 1000 (expected >= 10x)"
    );
    for r in &records[1..] {
        assert!(
            r.precompute_periodic_ns < r.precompute_direct_ns,
            "periodic precompute not faster at {} rounds",
            r.rounds
        );
    }
    let incidences: Vec<usize> = records.iter().map(|r| r.max_incidence).collect();
    assert!(
        incidences.windows(2).all(|w| w[1] == w[0]),
        "per-location incidence grew with size: {incidences:?}"
    );
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(300), "benchmark took {elapsed:?}");
    println!(
        "acceptance 6 PASS: abc {:.0}->{:.0} ns/shot ({abc_ratio:.2}x), naive {:.0}->{:.0} ns/shot ({naive_ratio:.1}x), periodic precompute {}us vs direct {}us at 499 rounds, incidence {} throughout ({elapsed:?})",
        records[0].abc_ns_per_shot,
        records[2].abc_ns_per_shot,
        records[0].naive_ns_per_shot,
        records[2].naive_ns_per_shot,
        records[2].precompute_periodic_ns / 1000,
        records[2].precompute_direct_ns / 1000,
        incidences[0]
    );
}

/// Criterion 7: decoder sanity on the distance-3 repetition fixture. The
/// weight-1 lookup corrects every single-location fault realization
/// exhaustively, and the end-to-end failure rate at p = 1e-2 sits more than
/// three standard errors below the rate at p = 5e-2 with 10^5 shots each.
#[test]
fn acceptance_7_decoder_sanity() {
    let (c, checks) = repetition_memory(2);
    let pre = BackpropagatedSet::precompute(&c, &checks).unwrap();
    let spec = NoiseSpec::new(1e-3, 1e-3, 1e-3).unwrap();
    let locations = enumerate_locations(&c, &spec);
    let decoder = build_lookup(&pre, &locations, &spec, 1, 1 << 24).unwrap();
    let mut corrected = 0u32;
    let mut sites = Vec::new();
    for loc in &locations {
        for r in 0..loc.num_realizations().unwrap() {
            sites.clear();
            loc.realization_into(r, &mut sites);
            let syndrome = pre.syndrome(&sites);
            let predicted = decoder.decode(&syndrome);
            let actual = pre.logical(&sites);
            assert!(
                !is_failure(&predicted, &actual),
                "weight-1 fault at {loc:?} realization {r} decoded wrongly"
            );
            corrected += 1;
        }
    }

    let rate_at = |p: f64, seed: u64| {
        let spec = NoiseSpec::new(p, p, p).unwrap();
        let locations = enumerate_locations(&c, &spec);
        let decoder = build_lookup(&pre, &locations, &spec, 1, 1 << 24).unwrap();
        let run = Run::new(&c, &checks, Some(&pre), spec, &decoder).unwrap();
        let cfg = RunConfig {
            shots: 100_000,
            seed,
            shards: 8,
        };
        run.estimate(EngineKind::Abc, &cfg).unwrap().estimate
    };
    let low = rate_at(1e-2, 700);
    let high = rate_at(5e-2, 701);
    let sigma = |e: &abcsim_core::engine::RateEstimate| {
        (e.rate * (1.0 - e.rate) / e.shots as f64).sqrt()
    };
    let gap = high.rate - low.rate;
    let three_sigma = 3.0 * (sigma(&low).powi(2) + sigma(&high).powi(2)).sqrt();
    assert!(
        low.rate < high.rate && gap > three_sigma,
        "rates not separated: {:.4} vs {:.4} (3 sigma = {three_sigma:.4})",
        low.rate,
        high.rate
    );
    println!(
        "acceptance 7 PASS: {corrected} weight-1 realizations corrected; rate {:.4} at p=1e-2 < {:.4} at p=5e-2 by {:.1} sigma",
        low.rate,
        high.rate,
        3.0 * gap / three_sigma
    );
}

/// Criterion 8 (library half): the shard count changes scheduling only.
/// The CLI half, byte-identical output files, lives in the cli crate's
/// acceptance tests.
#[test]
fn acceptance_8_shard_invariance() {
    let (c, checks) = repetition_memory(3);
    let pre = BackpropagatedSet::precompute(&c, &checks).unwrap();
    let spec = NoiseSpec::new(5e-3, 5e-3, 1e-3).unwrap();
    let decoder = TrivialDecoder::new(checks.num_logical_rows());
    let run = Run::new(&c, &checks, Some(&pre), spec, &decoder).unwrap();
    let reference = run
        .estimate(
            EngineKind::Abc,
            &RunConfig {
                shots: 20_000,
                seed: 808,
                shards: 1,
            },
        )
        .unwrap()
        .estimate;
    for shards in [4, 16] {
        let est = run
            .estimate(
                EngineKind::Abc,
                &RunConfig {
                    shots: 20_000,
                    seed: 808,
                    shards,
                },
            )
            .unwrap()
            .estimate;
        assert_eq!(est, reference, "estimate changed with {shards} shards");
    }
    println!("acceptance 8 PASS: estimates identical at 1, 4, and 16 shards");
}

/// Not a numbered criterion: a fault whose weight-1 realizations all sample
/// from enumerate_locations must match what the sampler draws, tying the
/// census used by the lookup decoder to the one used by the engines.
#[test]
fn acceptance_census_consistency() {
    let (c, _) = cz_ladder();
    let spec = NoiseSpec::new(1e-2, 1e-2, 1e-2).unwrap();
    let locations = enumerate_locations(&c, &spec);
    assert_eq!(locations.len(), 27);
    let sampler = abcsim_core::noise::NoiseSampler::new(&c, &spec, 1).unwrap();
    assert_eq!(sampler.locations().len(), locations.len());
    let mut rng = ChaCha12Rng::seed_from_u64(9);
    let mut out = Vec::new();
    let mut scratch = Vec::new();
    for loc in &locations {
        out.clear();
        loc.sample_into(&mut rng, &mut out);
        let k = loc.num_realizations().unwrap();
        let mut seen = false;
        for r in 0..k {
            scratch.clear();
            loc.realization_into(r, &mut scratch);
            if scratch == out {
                seen = true;
                break;
            }
        }
        assert!(seen, "sampled realization not in the enumeration for {loc:?}");
    }
    println!("acceptance extra PASS: sampler draws live inside the enumerated realization sets");
}
