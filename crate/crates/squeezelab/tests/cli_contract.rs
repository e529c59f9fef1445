//! End-to-end checks of the command-line interface: exit codes, output
//! determinism, CSV/JSON round-tripping, and the documented file shapes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_squeezelab")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should launch")
}

fn stdout_of(args: &[&str]) -> String {
    let output = run(args);
    assert!(
        output.status.success(),
        "{args:?} exited with {:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("output should be UTF-8")
}

fn csv_records(path: &Path) -> Vec<csv::StringRecord> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .expect("CSV should open");
    reader.records().map(|r| r.expect("CSV should parse")).collect()
}

#[test]
fn vacuum_state_is_a_single_row() {
    let text = stdout_of(&["state", "--dim", "64"]);
    let data_lines: Vec<&str> = text
        .lines()
        .filter(|line| !line.starts_with('#'))
        .collect();
    assert_eq!(data_lines[0], "n,re,im,prob");
    assert_eq!(data_lines[1], "0,1.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0");
    assert_eq!(data_lines.len(), 2);
}

#[test]
fn unit_displacement_ground_amplitude() {
    let text = stdout_of(&["state", "--alpha-re", "1", "--dim", "64"]);
    let first_row = text
        .lines()
        .find(|line| line.starts_with("0,"))
        .expect("row for n = 0");
    let re: f64 = first_row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((re - 0.606_530_659_712_633_4).abs() < 1e-12);
}

#[test]
fn state_output_is_deterministic() {
    for format in ["csv", "json"] {
        let args = ["state", "--alpha-re", "1", "--alpha-im", "-0.5", "--r", "0.3", "--dim", "64", "--format", format];
        assert_eq!(run(&args).stdout, run(&args).stdout, "{format} reruns differ");
    }
}

#[test]
fn state_json_matches_csv_values() {
    let json = stdout_of(&["state", "--alpha-re", "1", "--dim", "64", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&json).expect("JSON should parse");
    assert_eq!(parsed["metadata"]["dim"], 64);
    let rows = parsed["rows"].as_array().expect("rows array");
    let csv_text = stdout_of(&["state", "--alpha-re", "1", "--dim", "64"]);
    let first_csv_re: f64 = csv_text
        .lines()
        .find(|line| line.starts_with("0,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(rows[0]["re"].as_f64().unwrap(), first_csv_re);
}

#[test]
fn evolve_csv_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("evolve.csv");
    let status = Command::new(bin())
        .args(["evolve", "--r", "0.5", "--steps", "16", "--dim", "96", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());

    let records = csv_records(&path);
    assert_eq!(records.len(), 16);
    for record in &records {
        assert_eq!(record.len(), 10);
        for field in record {
            let value: f64 = field.parse().expect("numeric field");
            assert_eq!(format!("{value:.16e}"), field, "field does not round-trip");
        }
    }
    let first_t: f64 = records[0][0].parse().unwrap();
    let last_t: f64 = records[15][0].parse().unwrap();
    assert_eq!(first_t, 0.0);
    assert_eq!(last_t, std::f64::consts::TAU);

    let text = std::fs::read_to_string(&path).unwrap();
    let footer = text
        .lines()
        .find(|line| line.starts_with("# max_kennard_x_deviation"))
        .expect("footer line");
    let deviation: f64 = footer.rsplit('=').next().unwrap().trim().parse().unwrap();
    assert!(deviation < 1e-8, "footer deviation {deviation:.3e}");
}

#[test]
fn unsqueezed_evolve_rows_are_round() {
    let text = stdout_of(&["evolve", "--alpha-re", "1", "--steps", "4", "--dim", "64"]);
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with('t')) {
        let fields: Vec<&str> = line.split(',').collect();
        let var_x: f64 = fields[3].parse().unwrap();
        let var_p: f64 = fields[4].parse().unwrap();
        let product4: f64 = fields[6].parse().unwrap();
        assert!((var_x - 0.5).abs() < 1e-9);
        assert!((var_p - 0.5).abs() < 1e-9);
        assert!((product4 - 1.0).abs() < 1e-8);
    }
}

#[test]
fn grid_samples_ground_state_density_at_origin() {
    let text = stdout_of(&["grid", "--points", "2049", "--dim", "32"]);
    let row = text
        .lines()
        .find(|line| line.starts_with("0.0000000000000000e0,"))
        .expect("row at x = 0");
    let fock_prob: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert!((fock_prob - 0.564_189_583_547_756_3).abs() < 1e-12); // pi^{-1/2}
}

#[test]
fn grid_deviation_stays_in_envelope() {
    let text = stdout_of(&[
        "grid", "--alpha-re", "1", "--r", "0.5", "--phi", "1.0", "--points", "512",
    ]);
    let footer = text
        .lines()
        .find(|line| line.starts_with("# max_deviation"))
        .expect("footer line");
    let deviation: f64 = footer.rsplit('=').next().unwrap().trim().parse().unwrap();
    assert!(deviation < 1e-6, "max deviation {deviation:.3e}");
}

#[test]
fn verify_single_suite_filters_rows() {
    let text = stdout_of(&["verify", "--suite", "dynamics-kennard"]);
    let mut data_rows = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("suite,")) {
        assert!(line.starts_with("dynamics-kennard,"), "unexpected row {line}");
        data_rows += 1;
    }
    assert_eq!(data_rows, 6);
}

#[test]
fn verify_json_reruns_byte_identical() {
    let args = ["verify", "--suite", "uncertainty", "--format", "json"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(parsed["metadata"]["failures"], 0);
    assert_eq!(parsed["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn exit_codes_follow_the_contract() {
    // 1: a verification failure forced by an unreachable tolerance.
    let tight = run(&["verify", "--suite", "uncertainty", "--tol", "compare=1e-20"]);
    assert_eq!(tight.status.code(), Some(1));

    // 2: configuration and envelope errors.
    for args in [
        vec!["verify", "--suite", "no-such-suite"],
        vec!["state", "--alpha-re", "7"],
        vec!["state", "--r", "-1"],
        vec!["grid", "--x-min", "3", "--x-max", "-3"],
        vec!["grid", "--points", "4"],
        vec!["evolve", "--steps", "1"],
        vec!["evolve", "--t-max", "-2"],
        vec!["state", "--tol", "exp"],
        vec!["state", "--tol", "bogus=1"],
        vec!["state", "--tol", "tail=abc"],
        vec!["no-such-command"],
    ] {
        let output = run(&args);
        assert_eq!(
            output.status.code(),
            Some(2),
            "{args:?} should exit 2, stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    }
}

#[test]
fn tolerance_overrides_reach_the_guard() {
    // Loosening the tail bound admits a state the default would reject.
    let strict = run(&["state", "--r", "1.8", "--dim", "64"]);
    assert_eq!(strict.status.code(), Some(2));
    let relaxed = run(&["state", "--r", "1.8", "--dim", "64", "--tol", "tail=1e-2"]);
    assert_eq!(relaxed.status.code(), Some(0));
}
