//! Shared helpers for the integration suites.
#![allow(dead_code)] // each suite uses its own subset

use std::path::PathBuf;

use dendrite::specfile::parse_spec;
use dendrite::system::PolygonalSystem;

pub fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

pub fn load(name: &str) -> PolygonalSystem {
    let text = std::fs::read_to_string(spec_path(name)).expect("committed spec file");
    parse_spec(&text).expect("committed spec file parses")
}

/// Run the CLI in-process, capturing stdout bytes and the exit code.
pub fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut full = vec!["dendrite"];
    full.extend_from_slice(args);
    let mut out = Vec::new();
    let code = dendrite::cli::run(full.iter().map(|s| s.to_string()), &mut out);
    (code, out)
}
