//! Runs the binary on fixed inputs and compares stdout and the exit code
//! with `tests/golden/<case>.txt`. Set `SEGREKIT_BLESS=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::Command;

const CASES: &[(&str, &[&str], i32)] = &[
    ("verify_manifold_quadric", &["verify-manifold", "quadric"], 0),
    ("verify_map_quadric_embedding_a2", &["verify-map", "quadric_embedding_a2"], 0),
    ("segre_type_quadric", &["segre-type", "quadric"], 0),
    ("minimality_levi_flat", &["minimality", "levi_flat"], 0),
    ("classify_map_id_bidegree", &["classify-map", "id_bidegree"], 0),
    ("classify_map_quartic_embedding", &["classify-map", "quartic_embedding"], 0),
    ("classify_map_quadric_embedding_a2", &["classify-map", "quadric_embedding_a2"], 0),
    ("classify_manifold_rational_graph", &["classify-manifold", "rational_graph"], 0),
    ("reflect_id_quadric", &["reflect", "id_quadric", "--beta-bound", "2"], 0),
    ("check_prop51_id_bidegree", &["check-prop51", "id_bidegree", "--order", "6", "--beta-bound", "2"], 0),
    ("propagate_id_quadric", &["propagate", "id_quadric", "--order", "20", "--k-max", "3", "--kappa", "2"], 0),
    ("determine_id_quadric", &["determine", "id_quadric"], 0),
    ("artin_check_id_quadric", &["artin-check", "id_quadric"], 0),
    ("input_file_id_quadric", &["classify-map", "id_quadric", "-i", "data/id_quadric.sgk"], 0),
    ("unknown_subject", &["classify-map", "nosuch"], 3),
    ("determine_needs_quadric_target", &["determine", "quadric_embedding_a2"], 3),
    ("undeclared_manifold", &["verify-map", "x", "-i", "crates/core/tests/golden/undeclared.sgk"], 2),
];

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("SEGREKIT_BLESS").is_some();
    let mut failures = Vec::new();
    for (case, args, code) in CASES {
        let out = Command::new(env!("CARGO_BIN_EXE_segrekit")).args(*args).current_dir(root()).output().unwrap();
        let got = format!("{}{}exit={}\n", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr), out.status.code().unwrap_or(-1));
        let path = root().join("crates/core/tests/golden").join(format!("{case}.txt"));
        if bless {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_default();
        if got != want || out.status.code() != Some(*code) {
            failures.push(format!("{case}:\n--- want\n{want}--- got\n{got}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
