//! The committed fixture files are exactly the canonical serializations of
//! the built-in families. Regenerate with the gen_fixtures example if a
//! deliberate format change lands.

use std::fs;
use std::path::PathBuf;

use abcsim_core::families::{cz_ladder, repetition_memory};
use abcsim_core::io::{parse_checks, parse_circuit, serialize_circuit, serialize_logical,
    serialize_syndrome};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn fixtures_are_canonical() {
    for (name, (circuit, checks)) in [
        ("ladder", cz_ladder()),
        ("repetition_r3", repetition_memory(3)),
    ] {
        assert_eq!(
            fixture(&format!("{name}.circuit")),
            serialize_circuit(&circuit),
            "{name}.circuit drifted from the generator"
        );
        assert_eq!(fixture(&format!("{name}.syndrome")), serialize_syndrome(&checks));
        assert_eq!(fixture(&format!("{name}.logical")), serialize_logical(&checks));

        let parsed = parse_circuit(&fixture(&format!("{name}.circuit"))).unwrap();
        assert_eq!(parsed, circuit);
        let parsed_checks = parse_checks(
            &fixture(&format!("{name}.syndrome")),
            &fixture(&format!("{name}.logical")),
            circuit.num_outcomes(),
        )
        .unwrap();
        assert_eq!(parsed_checks, checks);
    }
}
