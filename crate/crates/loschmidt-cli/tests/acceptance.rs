//! CLI acceptance: golden fixtures for the three reference phase-diagram
//! runs reproduce byte-identically, and the exit-status contract holds for a
//! matrix of good and bad invocations.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use loschmidt_cli::emit::JsonDiagram;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loschmidt"))
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_exit(args: &[&str], expected: i32) {
    let out = run(args);
    let code = out.status.code().expect("no signal");
    assert_eq!(
        code,
        expected,
        "args {args:?}: expected exit {expected}, got {code}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

const FIG1: &[&str] = &[
    "scan",
    "--model",
    "creutz",
    "--param",
    "m=0.5",
    "--param",
    "Theta=1.0471975511965976",
    "--param",
    "k_points=512",
    "--axis",
    "T:0.05:1.5:25",
    "--axis",
    "m:0.1:1.9:20",
    "--mode",
    "closed-form",
];

const FIG2: &[&str] = &[
    "scan",
    "--model",
    "three-level",
    "--param",
    "R=1",
    "--param",
    "theta=0.6283185307179586",
    "--param",
    "phi=0",
    "--param",
    "beta=1",
    "--axis",
    "T:0.5:6:19",
    "--axis",
    "t:0.25:9.75:39",
    "--mode",
    "closed-form",
];

const FIG3: &[&str] = &[
    "uhlmann",
    "--model",
    "three-level",
    "--param",
    "R=1",
    "--param",
    "theta=1.5707963267948966",
    "--param",
    "phi=0",
    "--param",
    "beta=1",
    "--axis",
    "T:0.25:3:56",
    "--mode",
    "closed-form",
];

fn check_golden(name: &str, base_args: &[&str], format: &str, golden: &[u8]) {
    let out_path = tmp(&format!("{name}.{format}"));
    let out_str = out_path.to_str().unwrap().to_string();
    let mut args: Vec<&str> = base_args.to_vec();
    args.extend_from_slice(&["--format", format, "--out", &out_str]);
    assert_exit(&args, 0);
    let produced = std::fs::read(&out_path).expect("output written");
    assert!(
        produced == golden,
        "{name}.{format} differs from the golden fixture ({} vs {} bytes)",
        produced.len(),
        golden.len()
    );
}

#[test]
fn acceptance_9_golden_fixtures() {
    check_golden("fig1", FIG1, "csv", include_bytes!("golden/fig1.csv"));
    check_golden("fig1", FIG1, "json", include_bytes!("golden/fig1.json"));
    check_golden("fig2", FIG2, "csv", include_bytes!("golden/fig2.csv"));
    check_golden("fig2", FIG2, "json", include_bytes!("golden/fig2.json"));
    check_golden("fig3", FIG3, "csv", include_bytes!("golden/fig3.csv"));
    check_golden("fig3", FIG3, "json", include_bytes!("golden/fig3.json"));
    println!("acceptance 9a (golden fixtures byte-identical): PASS (6 fixtures)");
}

#[test]
fn acceptance_9_exit_status_contract() {
    // 0: successful scan and verify
    let ok_out = tmp("ok.csv");
    let ok_out = ok_out.to_str().unwrap();
    assert_exit(
        &[
            "quasistatic",
            "--model",
            "two-level",
            "--param",
            "Rx=0",
            "--param",
            "Ry=0",
            "--param",
            "Rz=1",
            "--param",
            "beta=1",
            "--axis",
            "t:0:6:32",
            "--out",
            ok_out,
        ],
        0,
    );
    assert_exit(
        &[
            "verify",
            "--model",
            "two-level",
            "--param",
            "Rx=0.3",
            "--param",
            "Ry=0.1",
            "--param",
            "Rz=0.9",
            "--param",
            "beta=0.8",
        ],
        0,
    );

    // 2: usage errors name the offending flag or requirement
    assert_exit(&["scan", "--axis", "T:0.1:1:8", "--axis", "m:0:2:8"], 2);
    let out = run(&["scan", "--model", "creutz", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("frobnicate"));
    assert_exit(
        &["scan", "--model", "creutz", "--param", "m=0.5", "--param", "Theta=1.0", "--axis", "T:2:1:8", "--axis", "m:0:2:8"],
        2,
    );
    // wrong axis count for the command
    assert_exit(
        &["scan", "--model", "creutz", "--param", "m=0.5", "--param", "Theta=1.0", "--axis", "T:0.1:1:8"],
        2,
    );
    // missing required parameter
    assert_exit(
        &["quasistatic", "--model", "two-level", "--param", "Rx=1", "--axis", "t:0:1:8"],
        2,
    );

    // 3: domain errors from model validation
    assert_exit(
        &[
            "verify",
            "--model",
            "three-level",
            "--param",
            "R=1",
            "--param",
            "theta=1.6",
            "--param",
            "phi=0",
            "--param",
            "beta=1",
        ],
        3,
    );
    let bad_theta = tmp("bad_theta.csv");
    assert_exit(
        &[
            "uhlmann",
            "--model",
            "creutz",
            "--param",
            "m=0.5",
            "--param",
            "Theta=0",
            "--axis",
            "T:0.1:1:8",
            "--out",
            bad_theta.to_str().unwrap(),
        ],
        3,
    );

    // 4: unwritable output path
    assert_exit(
        &[
            "uhlmann",
            "--model",
            "three-level",
            "--param",
            "R=1",
            "--param",
            "theta=1.5707963267948966",
            "--param",
            "phi=0",
            "--param",
            "beta=1",
            "--axis",
            "T:0.5:1:8",
            "--mode",
            "closed-form",
            "--out",
            "/nonexistent-dir/diagram.csv",
        ],
        4,
    );

    println!("acceptance 9b (exit-status contract): PASS");
}

#[test]
fn trivial_grid_emits_five_line_csv() {
    let out_path = tmp("trivial.csv");
    let out_str = out_path.to_str().unwrap();
    assert_exit(
        &[
            "quasistatic",
            "--model",
            "two-level",
            "--param",
            "Rx=0",
            "--param",
            "Ry=0",
            "--param",
            "Rz=1",
            "--param",
            "beta=1",
            "--axis",
            "T:1:2:2",
            "--axis",
            "t:0:1:2",
            "--out",
            out_str,
        ],
        0,
    );
    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5, "header plus four cells");
    assert_eq!(lines[0], "x1,x2,G_re,G_im,echo,phase,rate,divergent");
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn json_output_roundtrips() {
    let out_path = tmp("roundtrip.json");
    let out_str = out_path.to_str().unwrap().to_string();
    let mut args: Vec<&str> = FIG3.to_vec();
    args.extend_from_slice(&["--format", "json", "--out", &out_str]);
    assert_exit(&args, 0);
    let text = std::fs::read_to_string(&out_path).unwrap();
    let parsed: JsonDiagram = serde_json::from_str(&text).expect("parses back");
    let mut reserialized = serde_json::to_string_pretty(&parsed).unwrap();
    reserialized.push('\n');
    assert_eq!(text, reserialized, "parse -> serialize is not the identity");
    // the lone critical sits at the known transition temperature
    assert_eq!(parsed.criticals.len(), 1);
    assert!((parsed.criticals[0][0] - 0.7338).abs() < 5e-4);
}

#[test]
fn canonical_scan_invocation_parses() {
    // the documented reference invocation: sweeping an axis that is also a
    // fixed parameter is valid (the axis takes precedence cell by cell)
    let out_path = tmp("canonical.csv");
    let out_str = out_path.to_str().unwrap();
    assert_exit(
        &[
            "scan",
            "--model",
            "creutz",
            "--param",
            "m=0.5",
            "--param",
            "Theta=1.0471975512",
            "--axis",
            "T:0.01:2:20",
            "--axis",
            "m:0:2:21",
            "--mode",
            "closed-form",
            "--out",
            out_str,
        ],
        0,
    );
}
