//! Byte-for-byte comparison of generated artifacts with the versioned copies.
//! Set `UPDATE_GOLDEN=1` to rewrite them.

mod common;

use std::fs;
use std::path::{Path, PathBuf};

use resmatch::e2sat::E2SatInstance;
use resmatch::reduction::{dot_diagram, reduce, Theorem};

fn check(path: PathBuf, fresh: &str) {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, fresh).unwrap();
        return;
    }
    let stored = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDEN=1", path.display()));
    assert!(
        stored == fresh,
        "{} differs from the generated artifact",
        path.display()
    );
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[test]
fn n2_corpus_artifacts() {
    for (idx, inst) in common::n2_corpus().iter().enumerate() {
        check(
            golden_dir().join(format!("n2_{idx:02}.cnf")),
            &inst.to_dimacs(),
        );
        for th in [Theorem::One, Theorem::Two] {
            let art = reduce(inst, 1, th).unwrap();
            let name = format!("n2_{idx:02}_t{}.json", th.number());
            check(golden_dir().join(name), &art.to_json());
        }
    }
}

#[test]
fn wiring_diagrams() {
    let docs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs");
    let inst = E2SatInstance::from_codes(2, &[(1, 2), (-1, 2)]).unwrap();
    for th in [Theorem::One, Theorem::Two] {
        let art = reduce(&inst, 1, th).unwrap();
        check(
            docs.join(format!("wiring_t{}.dot", th.number())),
            &dot_diagram(&art),
        );
    }
}
