//! End-to-end tests of the binary: flags, config files, output schemas,
//! reproducibility and exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_typicality-lab")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("typicality-cli-tests").join(tag);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(args: &[&str]) {
    let status = Command::new(binary()).args(args).status().unwrap();
    assert!(status.success(), "command failed: {args:?}");
}

fn parse_csv_floats(line: &str) -> Vec<f64> {
    line.split(',').map(|f| f.parse().unwrap()).collect()
}

/// Minimal structural validator covering the subset of JSON Schema used by
/// the files in schemas/: type(s), required, properties, items, enum,
/// additionalProperties: false, minItems.
fn validate(schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(allowed) = schema.get("enum") {
        let found = allowed.as_array().unwrap().iter().any(|v| v == value);
        if !found {
            return Err(format!("{path}: {value} not in enum"));
        }
        return Ok(());
    }
    if let Some(kind) = schema.get("type") {
        let kinds: Vec<&str> = match kind {
            Value::String(s) => vec![s.as_str()],
            Value::Array(list) => list.iter().map(|s| s.as_str().unwrap()).collect(),
            _ => panic!("bad schema type at {path}"),
        };
        let matches = kinds.iter().any(|k| match *k {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "number" => value.is_number(),
            "integer" => value.is_i64() || value.is_u64(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            other => panic!("unhandled schema type {other}"),
        });
        if !matches {
            return Err(format!("{path}: expected {kinds:?}, got {value}"));
        }
    }
    if let Some(object) = value.as_object() {
        if let Some(required) = schema.get("required") {
            for key in required.as_array().unwrap() {
                let key = key.as_str().unwrap();
                if !object.contains_key(key) {
                    return Err(format!("{path}: missing required '{key}'"));
                }
            }
        }
        let properties = schema.get("properties").and_then(|p| p.as_object());
        if let Some(props) = properties {
            for (key, sub) in object {
                match props.get(key) {
                    Some(sub_schema) => validate(sub_schema, sub, &format!("{path}.{key}"))?,
                    None => {
                        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                            return Err(format!("{path}: unexpected property '{key}'"));
                        }
                    }
                }
            }
        }
    }
    if let Some(array) = value.as_array() {
        if let Some(min_items) = schema.get("minItems").and_then(|m| m.as_u64()) {
            if (array.len() as u64) < min_items {
                return Err(format!("{path}: fewer than {min_items} items"));
            }
        }
        if let Some(item_schema) = schema.get("items") {
            for (i, item) in array.iter().enumerate() {
                validate(item_schema, item, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn assert_valid(schema_file: &str, payload: &Path) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(schema_file);
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let value: Value = serde_json::from_str(&std::fs::read_to_string(payload).unwrap()).unwrap();
    if let Err(problem) = validate(&schema, &value, "$") {
        panic!("{} does not validate: {problem}", payload.display());
    }
}

#[test]
fn form_factor_noninteracting_odd_periods() {
    let dir = workdir("ff");
    let out = dir.join("ff.csv");
    run_ok(&[
        "form-factor",
        "--n",
        "8",
        "--J",
        "0",
        "--h",
        "0",
        "--b",
        "pi/4",
        "--t-max",
        "10",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,k_t");
    let rows: Vec<Vec<f64>> = lines.map(parse_csv_floats).collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][1], 256.0, "K(0) = N exactly");
    for t in [1usize, 3, 5, 7, 9] {
        assert!(
            (rows[t][1] - 1.0).abs() < 1e-10,
            "K({t}) = {} on the pi/2-rotation chain",
            rows[t][1]
        );
    }

    let json_out = dir.join("ff.json");
    run_ok(&[
        "form-factor",
        "--n",
        "8",
        "--J",
        "0",
        "--h",
        "0",
        "--b",
        "pi/4",
        "--t-max",
        "10",
        "--seed",
        "1",
        "--format",
        "json",
        "--out",
        json_out.to_str().unwrap(),
    ]);
    assert_valid("form-factor.schema.json", &json_out);
    assert_valid("meta.schema.json", &dir.join("ff.json.meta.json"));
}

#[test]
fn rho_solve_zero_target() {
    let dir = workdir("rho");
    let out = dir.join("rho.csv");
    run_ok(&[
        "rho-solve",
        "--n",
        "8",
        "--m-z",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m_z,y,purity,effective_dimension,p_min,p_max"
    );
    let row = parse_csv_floats(lines.next().unwrap());
    assert_eq!(row[1], 0.0, "y = 0 at the spectral mean");
    assert!((row[2] - 1.0 / 256.0).abs() < 1e-15, "purity 1/N");
    assert!((row[3] - 256.0).abs() < 1e-9);

    let json_out = dir.join("rho.json");
    run_ok(&[
        "rho-solve",
        "--n",
        "8",
        "--m-z",
        "0.5",
        "--format",
        "json",
        "--out",
        json_out.to_str().unwrap(),
    ]);
    assert_valid("rho-solve.schema.json", &json_out);
}

#[test]
fn scan_rows_track_the_closed_form() {
    let dir = workdir("scan");
    let out = dir.join("scan.csv");
    run_ok(&[
        "fixed-overlap-scan",
        "--n",
        "6",
        "--J",
        "pi/4",
        "--h",
        "pi/5",
        "--b",
        "pi/4",
        "--z-grid",
        "7",
        "--samples",
        "4000",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta,abs_z,analytic_mean,analytic_std,mc_mean,mc_std,mc_std_error,n_samples"
    );
    let mut count = 0;
    for line in lines {
        let row = parse_csv_floats(line);
        let (theta, abs_z) = (row[0], row[1]);
        assert!((abs_z - theta.cos()).abs() < 1e-12);
        let (analytic_mean, mc_mean, mc_se) = (row[2], row[4], row[6]);
        assert!(
            (mc_mean - analytic_mean).abs() <= 3.0 * mc_se + 1e-12,
            "theta {theta}: {mc_mean} vs {analytic_mean}"
        );
        count += 1;
    }
    assert_eq!(count, 7);
}

#[test]
fn floats_round_trip_at_seventeen_digits() {
    let dir = workdir("roundtrip-floats");
    let out = dir.join("scan.csv");
    run_ok(&[
        "full-average-scan",
        "--n",
        "4",
        "--J",
        "pi/4",
        "--h",
        "pi/5",
        "--b",
        "pi/4",
        "--z-grid",
        "3",
        "--samples",
        "200",
        "--seed",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    for line in text.lines().skip(1) {
        for field in line.split(',') {
            let value: f64 = field.parse().unwrap();
            if field.contains('e') {
                assert_eq!(
                    format!("{value:.16e}"),
                    field,
                    "17-significant-digit field must round-trip"
                );
            }
        }
    }
}

#[test]
fn config_echo_reproduces_the_run() {
    let dir = workdir("roundtrip");
    let out = dir.join("first.csv");
    run_ok(&[
        "nonuniform-fixed-scan",
        "--n",
        "5",
        "--J",
        "pi/4",
        "--h",
        "2pi/5",
        "--b",
        "pi/4",
        "--m-z",
        "1.5",
        "--z-grid",
        "5",
        "--samples",
        "1000",
        "--seed",
        "33",
        "--out",
        out.to_str().unwrap(),
    ]);
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("first.csv.meta.json")).unwrap())
            .unwrap();
    assert_valid("meta.schema.json", &dir.join("first.csv.meta.json"));

    // Re-run purely from the echoed config, redirected to a second file.
    let mut config = meta["config"].clone();
    let second = dir.join("second.csv");
    config["output"] = Value::String(second.to_str().unwrap().to_string());
    let config_path = dir.join("rerun.json");
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    run_ok(&[
        "nonuniform-fixed-scan",
        "--config",
        config_path.to_str().unwrap(),
    ]);

    let first = std::fs::read(&out).unwrap();
    let second = std::fs::read(&second).unwrap();
    assert_eq!(
        first, second,
        "echoed config must reproduce the CSV exactly"
    );
}

#[test]
fn flags_override_config_file() {
    let dir = workdir("override");
    let config_path = dir.join("base.json");
    std::fs::write(
        &config_path,
        r#"{
            "chain": { "n": 4, "J": "pi/4", "h": "pi/5", "b": "pi/4" },
            "theta_grid": 4,
            "samples": 300,
            "seed": 5,
            "output": "ignored.csv"
        }"#,
    )
    .unwrap();
    let out = dir.join("actual.csv");
    run_ok(&[
        "fixed-overlap-scan",
        "--config",
        config_path.to_str().unwrap(),
        "--seed",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("actual.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["config"]["seed"], 6, "flag must override the file");
    assert_eq!(meta["config"]["samples"], 300, "file value must survive");
    assert_eq!(
        meta["config"]["chain"]["J"].as_f64().unwrap(),
        std::f64::consts::FRAC_PI_4
    );
}

#[test]
fn scan_json_output_validates() {
    let dir = workdir("schema");
    let out = dir.join("scan.json");
    run_ok(&[
        "nonuniform-full-scan",
        "--n",
        "5",
        "--J",
        "pi/4",
        "--h",
        "2pi/5",
        "--b",
        "pi/4",
        "--m-z",
        "0.5",
        "--m-z-prime",
        "-0.3",
        "--z-grid",
        "4",
        "--samples",
        "500",
        "--seed",
        "3",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_valid("scan.schema.json", &out);
    // The spread column is genuinely null for this experiment.
    let records: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(records[0]["analytic_std"].is_null());

    let hist_out = dir.join("hist.json");
    run_ok(&[
        "histogram",
        "--n",
        "6",
        "--J",
        "pi/4",
        "--h",
        "pi/5",
        "--b",
        "pi/4",
        "--theta",
        "pi/2",
        "--samples",
        "2000",
        "--bins",
        "25",
        "--seed",
        "4",
        "--format",
        "json",
        "--out",
        hist_out.to_str().unwrap(),
    ]);
    assert_valid("histogram.schema.json", &hist_out);
    let hist: Value = serde_json::from_str(&std::fs::read_to_string(&hist_out).unwrap()).unwrap();
    assert!(
        hist["ks_statistic"].is_number(),
        "KS present at theta = pi/2"
    );
}

#[test]
fn exit_codes_follow_the_error_contract() {
    let dir = workdir("exits");
    let out = dir.join("never.csv");

    // Config error: missing required magnetization.
    let status = Command::new(binary())
        .args([
            "nonuniform-fixed-scan",
            "--n",
            "4",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    // Config error: unparsable angle literal.
    let status = Command::new(binary())
        .args([
            "fixed-overlap-scan",
            "--n",
            "4",
            "--J",
            "tau/2",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    // Config error: unknown flag (usage).
    let status = Command::new(binary())
        .args(["fixed-overlap-scan", "--frobnicate"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    // Numeric error: magnetization outside the spectral range.
    let status = Command::new(binary())
        .args([
            "rho-solve",
            "--n",
            "8",
            "--m-z",
            "8",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    let message = String::from_utf8_lossy(&status.stderr);
    assert!(
        message.contains("outside the open spectral range"),
        "{message}"
    );

    assert!(!out.exists(), "failed runs must not leave output files");
}

#[test]
fn histogram_csv_shape() {
    let dir = workdir("hist-csv");
    let out = dir.join("hist.csv");
    run_ok(&[
        "histogram",
        "--n",
        "4",
        "--J",
        "0",
        "--h",
        "0",
        "--b",
        "pi/4",
        "--theta",
        "pi/2",
        "--samples",
        "1000",
        "--bins",
        "20",
        "--seed",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "bin_left,bin_right,count");
    let rows: Vec<Vec<f64>> = lines.map(parse_csv_floats).collect();
    assert_eq!(rows.len(), 20);
    let total: f64 = rows.iter().map(|r| r[2]).sum();
    assert_eq!(total, 1000.0);
}
