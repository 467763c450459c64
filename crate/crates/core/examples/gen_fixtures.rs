//! Regenerates the committed fixture files from the built-in families.
//! Run from anywhere inside the workspace:
//!
//!   cargo run -p abcsim-core --example gen_fixtures

use std::fs;
use std::path::PathBuf;

use abcsim_core::families::{cz_ladder, repetition_memory};
use abcsim_core::io::{serialize_circuit, serialize_logical, serialize_syndrome};

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    fs::create_dir_all(&root).expect("create fixtures dir");
    for (name, (circuit, checks)) in [
        ("ladder", cz_ladder()),
        ("repetition_r3", repetition_memory(3)),
    ] {
        fs::write(
            root.join(format!("{name}.circuit")),
            serialize_circuit(&circuit),
        )
        .unwrap();
        fs::write(
            root.join(format!("{name}.syndrome")),
            serialize_syndrome(&checks),
        )
        .unwrap();
        fs::write(
            root.join(format!("{name}.logical")),
            serialize_logical(&checks),
        )
        .unwrap();
        println!("wrote fixtures/{name}.{{circuit,syndrome,logical}}");
    }
}
