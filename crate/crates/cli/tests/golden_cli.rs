//! Golden transcripts for the `wlmap` binary.
//!
//! Each case runs the binary inside `tests/golden/` and compares stdout and
//! stderr byte for byte against `<case>.stdout` / `<case>.stderr`, plus the
//! exit code. Set `WLMAP_BLESS=1` to rewrite the expected files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    code: i32,
}

const CASES: &[Case] = &[
    Case { name: "fit_all", args: &["fit", "--input", "fits.csv", "--all"], code: 0 },
    Case { name: "fit_pair_full", args: &["fit", "--input", "fits.csv", "--pair", "R1:W1", "--precision", "full"], code: 0 },
    Case { name: "fit_perfect", args: &["fit", "--input", "fits.csv", "--pair", "R2:W1"], code: 0 },
    Case { name: "fit_singular", args: &["fit", "--input", "observations.csv", "--pair", "R3:W1"], code: 1 },
    Case { name: "fit_all_singular", args: &["fit", "--input", "observations.csv", "--all"], code: 1 },
    Case { name: "fit_insufficient", args: &["fit", "--input", "observations.csv", "--pair", "R5:W1"], code: 1 },
    Case { name: "fit_missing_file", args: &["fit", "--input", "missing.csv", "--all"], code: 2 },
    Case { name: "fit_no_selection", args: &["fit", "--input", "fits.csv"], code: 2 },
    Case { name: "fit_bad_pair", args: &["fit", "--input", "fits.csv", "--pair", "R1W1"], code: 2 },
    Case { name: "fit_bad_csv", args: &["fit", "--input", "bad.csv", "--all"], code: 2 },
    Case { name: "residuals", args: &["residuals", "--input", "fits.csv", "--pair", "R1:W1"], code: 0 },
    Case { name: "residuals_perfect", args: &["residuals", "--input", "fits.csv", "--pair", "R2:W1"], code: 0 },
    Case { name: "residuals_unknown", args: &["residuals", "--input", "fits.csv", "--pair", "R9:W1"], code: 1 },
    Case {
        name: "allocate_table1",
        args: &["allocate", "--input", "table1.csv", "--at", "5", "--resources", "R1,R2,R3,R4,R5,R6,R7", "--workloads", "W1,W2,W3,W4,W5,W6,W7"],
        code: 0,
    },
    Case { name: "allocate_single", args: &["allocate", "--input", "fits.csv", "--at", "3", "--resources", "R1", "--workloads", "W1"], code: 0 },
    Case {
        name: "allocate_constant",
        args: &["allocate", "--input", "constant.csv", "--at", "-2.5", "--resources", "N3,N1,N2", "--workloads", "J1,J2,J3"],
        code: 0,
    },
    Case {
        name: "allocate_rectangular",
        args: &["allocate", "--input", "table1.csv", "--at", "5", "--resources", "R1,R4", "--workloads", "W1,W2,W3"],
        code: 0,
    },
    Case { name: "allocate_missing_model", args: &["allocate", "--input", "fits.csv", "--at", "1", "--resources", "R1,R2", "--workloads", "W1,W2"], code: 1 },
    Case { name: "allocate_singular", args: &["allocate", "--input", "observations.csv", "--at", "1", "--resources", "R3", "--workloads", "W1"], code: 1 },
    Case { name: "allocate_duplicate_list", args: &["allocate", "--input", "fits.csv", "--at", "1", "--resources", "R1,R1", "--workloads", "W1"], code: 2 },
    Case { name: "replay_worked_example", args: &["replay", "--script", "worked_example.replay"], code: 0 },
    Case { name: "replay_duplicate", args: &["replay", "--script", "duplicate.replay"], code: 0 },
    Case { name: "replay_bad_expect", args: &["replay", "--script", "bad_expect.replay"], code: 1 },
    Case { name: "replay_malformed", args: &["replay", "--script", "malformed.replay"], code: 2 },
];

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn run(args: &[&str]) -> (Vec<u8>, Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_wlmap"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("failed to run wlmap");
    (out.stdout, out.stderr, out.status.code().unwrap_or(-1))
}

fn check(expected: &Path, actual: &[u8], bless: bool) -> Result<(), String> {
    if bless {
        fs::write(expected, actual).unwrap();
        return Ok(());
    }
    let want = fs::read(expected).map_err(|e| format!("{}: {e}", expected.display()))?;
    if want != actual {
        return Err(format!(
            "{} differs\n--- expected\n{}\n--- actual\n{}",
            expected.display(),
            String::from_utf8_lossy(&want),
            String::from_utf8_lossy(actual)
        ));
    }
    Ok(())
}

#[test]
fn golden_transcripts() {
    let bless = std::env::var_os("WLMAP_BLESS").is_some();
    let dir = golden_dir();
    let mut failures = Vec::new();
    for case in CASES {
        let (stdout, stderr, code) = run(case.args);
        if code != case.code {
            failures.push(format!("{}: exit {code}, expected {}", case.name, case.code));
        }
        for (ext, bytes) in [("stdout", &stdout), ("stderr", &stderr)] {
            if let Err(e) = check(&dir.join(format!("{}.{ext}", case.name)), bytes, bless) {
                failures.push(format!("{}: {e}", case.name));
            }
        }
        // stderr carries errors only
        if code == 0 {
            assert!(stderr.is_empty(), "{}: unexpected stderr", case.name);
        } else {
            assert!(!stderr.is_empty(), "{}: missing error message", case.name);
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn transcripts_are_deterministic() {
    for case in CASES {
        assert_eq!(run(case.args), run(case.args), "{}", case.name);
    }
}

#[test]
fn allocate_writes_snapshot() {
    let tmp = tempfile::tempdir().unwrap();
    let snap = tmp.path().join("state.json");
    let (_, _, code) = run(&[
        "allocate", "--input", "table1.csv", "--at", "5",
        "--resources", "R1,R2,R3,R4,R5,R6,R7",
        "--workloads", "W1,W2,W3,W4,W5,W6,W7",
        "--snapshot", snap.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        fs::read_to_string(&snap).unwrap(),
        "{\"allocation\":{\"R1\":\"W2\",\"R2\":\"W3\",\"R3\":\"W5\",\"R4\":\"W1\",\"R5\":\"W4\",\"R6\":\"W6\",\"R7\":\"W7\"}}\n"
    );
}

#[test]
fn replay_writes_snapshot_only_on_success() {
    let tmp = tempfile::tempdir().unwrap();
    let ok = tmp.path().join("ok.json");
    let (_, _, code) = run(&["replay", "--script", "worked_example.replay", "--snapshot-out", ok.to_str().unwrap()]);
    assert_eq!(code, 0);
    let bytes = fs::read(&ok).unwrap();
    assert_eq!(
        String::from_utf8(bytes.clone()).unwrap(),
        "{\"allocation\":{\"Res1\":\"Cloudworkload3\",\"Res2\":\"Cloudworkload2\",\"Res3\":\"Cloudworkload1\"}}\n"
    );
    let state = wlmap_core::trace_io::read_state(&bytes).unwrap();
    assert_eq!(state.len(), 3);

    let bad = tmp.path().join("bad.json");
    let (_, _, code) = run(&["replay", "--script", "bad_expect.replay", "--snapshot-out", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(!bad.exists());
}

#[test]
fn residual_column_sums_to_zero() {
    let (stdout, _, code) = run(&["residuals", "--input", "fits.csv", "--pair", "R1:W2", "--precision", "full"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(stdout).unwrap();
    let sum: f64 = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!(sum.abs() < 1e-12, "{sum}");
}
