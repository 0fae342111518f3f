#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.extend(["tests", "fixtures", name]);
    p.display().to_string()
}

pub fn golden_path(name: &str) -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.extend(["tests", "golden", &format!("{name}.json")]);
    p
}

pub fn torricelli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torricelli"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Golden reports: (name, args). Fixture names are resolved by `fixture`.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let c = |cmd: &str, file: &str, extra: &[&str]| {
        let mut v = vec![cmd.to_string(), fixture(file)];
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    vec![
        ("solve_equilateral", c("solve", "equilateral.json", &[])),
        ("solve_dominant", c("solve", "dominant.json", &[])),
        ("solve_tetrahedron", c("solve", "tetrahedron.json", &[])),
        ("solve_single", c("solve", "single.json", &[])),
        (
            "sphere_symmetric",
            c("sphere-solve", "sphere_symmetric.json", &[]),
        ),
        (
            "sphere_vectors",
            c("sphere-solve", "sphere_vectors.json", &[]),
        ),
    ]
}

/// (description, args, expected exit code), covering every command and every
/// error path.
pub fn exit_matrix() -> Vec<(String, Vec<String>, i32)> {
    let mut rows: Vec<(String, Vec<String>, i32)> = Vec::new();
    let mut add = |args: &[&str], want: i32| {
        let args: Vec<String> = args
            .iter()
            .map(|a| {
                if a.ends_with(".json") && !a.starts_with('/') {
                    fixture(a)
                } else {
                    a.to_string()
                }
            })
            .collect();
        rows.push((args.join(" "), args, want));
    };
    // solve
    add(&["solve", "equilateral.json"], 0);
    add(&["solve", "dominant.json"], 0);
    add(&["solve", "single.json"], 0);
    add(&["solve", "tetrahedron.json"], 0);
    add(&["solve", "sphere_vectors.json"], 0);
    add(&["solve", "skewed.json", "--max-iter", "1"], 2);
    add(&["solve", "malformed.json"], 1);
    add(&["solve", "does_not_exist.json"], 1);
    add(&["solve", "equilateral.json", "--tolerance", "-1"], 1);
    add(&["solve", "equilateral.json", "--tolerance", "abc"], 1);
    add(&["solve", "equilateral.json", "--max-iter", "0"], 1);
    add(&["solve", "equilateral.json", "--bogus"], 1);
    add(&["solve"], 1);
    for bad in [
        "bad_version",
        "bad_dimension",
        "negative_weight",
        "coord_length",
        "latlon_in_plane",
        "empty_points",
        "zero_weights",
        "wrong_type",
        "unknown_field",
        "zero_vector",
        "not_hemisphere",
        "bad_options",
    ] {
        let f = format!("invalid/{bad}.json");
        add(&["solve", &f], 1);
    }
    // verify
    add(&["verify", "equilateral.json", "--at", "0.5,0.28867513"], 0);
    add(&["verify", "equilateral.json", "--at", "0.9,0.9"], 3);
    add(&["verify", "equilateral.json", "--at", "1,0"], 4);
    add(&["verify", "equilateral.json", "--at", "1,0,0"], 1);
    add(&["verify", "equilateral.json", "--at", "x,y"], 1);
    add(&["verify", "equilateral.json"], 1);
    add(
        &[
            "verify",
            "equilateral.json",
            "--at",
            "0.5,0.3",
            "--tolerance",
            "0",
        ],
        1,
    );
    add(&["verify", "tetrahedron.json", "--at", "0,0,0"], 0);
    add(&["verify", "tetrahedron.json", "--at", "-1,-1,1"], 4);
    add(&["verify", "sphere_symmetric.json", "--at", "0,0,1"], 0);
    add(&["verify", "sphere_symmetric.json", "--at", "0,0.3,1"], 3);
    add(&["verify", "sphere_vectors.json", "--at", "1,0,0.2"], 4);
    add(&["verify", "sphere_symmetric.json", "--at", "0,0"], 1);
    add(&["verify", "malformed.json", "--at", "0,0"], 1);
    // classify
    add(&["classify", "equilateral.json"], 0);
    add(&["classify", "dominant.json"], 0);
    add(&["classify", "single.json"], 0);
    add(&["classify", "sphere_vectors.json"], 0);
    add(&["classify", "malformed.json"], 1);
    add(&["classify", "invalid/negative_weight.json"], 1);
    // sphere-solve
    add(&["sphere-solve", "sphere_symmetric.json"], 0);
    add(&["sphere-solve", "sphere_vectors.json"], 0);
    add(
        &["sphere-solve", "sphere_vectors.json", "--max-iter", "1"],
        2,
    );
    add(&["sphere-solve", "equilateral.json"], 1);
    add(&["sphere-solve", "malformed.json"], 1);
    add(&["sphere-solve", "invalid/not_hemisphere.json"], 1);
    // oracle-compare
    add(&["oracle-compare", "equilateral.json", "--levels", "6"], 0);
    add(&["oracle-compare", "dominant.json"], 0);
    add(&["oracle-compare", "tetrahedron.json"], 0);
    add(&["oracle-compare", "sphere_vectors.json"], 0);
    add(&["oracle-compare", "skewed.json", "--max-iter", "1"], 3);
    add(&["oracle-compare", "equilateral.json", "--levels", "0"], 1);
    add(
        &["oracle-compare", "equilateral.json", "--per-level", "2"],
        1,
    );
    add(&["oracle-compare", "malformed.json"], 1);
    // no command at all
    add(&[], 1);
    add(&["frobnicate", "equilateral.json"], 1);
    rows
}
