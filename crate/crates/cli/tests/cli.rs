//! Binary-level contract tests: exit codes, output schemas, and
//! determinism, exercised through the real executable.

use std::process::{Command, Output};

fn ellip2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellip2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn exit(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

#[test]
fn eval_degenerate_point_prints_quarter_pi_squared() {
    let o = ellip2(&["eval", "--k1", "0", "--k2", "0", "--method", "f4"]);
    assert_eq!(exit(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("2.4674011002723395"), "{out}");
    assert!(out.contains("f4_closed"), "{out}");
}

#[test]
fn eval_single_modulus_by_quadrature_factorizes() {
    let o = ellip2(&["eval", "--k1", "0.6", "--k2", "0", "--method", "quad"]);
    assert_eq!(exit(&o), 0);
    let out = stdout(&o);
    // (π/2)·E(0.6) = 2.2275201870888944…; quadrature reproduces ~12 digits
    assert!(out.contains("= 2.22752018708889"), "{out}");
    assert!(out.contains("quadrature"), "{out}");
}

#[test]
fn eval_rejects_moduli_outside_the_quarter_disc() {
    let o = ellip2(&["eval", "--k1", "0.71", "--k2", "0.71", "--method", "f4"]);
    assert_eq!(exit(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("1/sqrt(2)"), "{err}");
}

#[test]
fn eval_equal_modulus_shortcut_matches_reference() {
    let o = ellip2(&["eval", "--k1", "0.5", "--k-equal", "--method", "f4"]);
    assert_eq!(exit(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let value: f64 = out
        .lines()
        .next()
        .and_then(|l| l.split(" = ").nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 2.129_261_354_284_658).abs() < 1e-12, "{value}");
}

#[test]
fn eval_reports_non_convergence_when_starved_of_terms() {
    let o = ellip2(&[
        "eval", "--k1", "0.5", "--k2", "0.5", "--method", "series", "--max-terms", "1",
    ]);
    assert_eq!(exit(&o), 3, "{}", stderr(&o));
}

#[test]
fn eval_rejects_modulus_at_or_above_one() {
    let o = ellip2(&["eval", "--k1", "1.0", "--k2", "0"]);
    assert_eq!(exit(&o), 2);
}

#[test]
fn verify_passes_on_an_interior_grid() {
    let o = ellip2(&[
        "verify", "--k1", "0:0.6:10", "--k2", "0:0.6:10", "--tol", "1e-8",
    ]);
    assert_eq!(exit(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("PASS"), "{out}");
    assert!(out.contains("max pairwise deviation"), "{out}");
}

#[test]
fn verify_fails_with_exit_one_on_unreachable_tolerance() {
    let o = ellip2(&[
        "verify", "--k1", "0.2:0.6:4", "--k2", "0.2:0.6:4", "--tol", "1e-16",
    ]);
    assert_eq!(exit(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_rejects_a_lone_route() {
    let o = ellip2(&["verify", "--k1", "0.5", "--k2", "0.5", "--method", "quad"]);
    assert_eq!(exit(&o), 2);
}

#[test]
fn verify_rejects_an_empty_admissible_grid() {
    let o = ellip2(&["verify", "--k1", "0.8:0.95:3", "--k2", "0.8:0.95:3"]);
    assert_eq!(exit(&o), 2);
    assert!(stderr(&o).contains("no admissible grid points"));
}

#[test]
fn verify_covers_the_product_formula_for_k() {
    let o = ellip2(&[
        "verify", "--k1", "0:0.7:5", "--k2", "0:0.7:5", "--method", "product",
    ]);
    assert_eq!(exit(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("K product formula vs quadrature"));
}

#[test]
fn verify_reports_skipped_grid_points() {
    let o = ellip2(&["verify", "--k1", "0:0.9:4", "--k2", "0:0.9:4"]);
    assert_eq!(exit(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("skipped (k1^2 + k2^2 >= 1)"));
}

#[test]
fn export_csv_has_the_fixed_header_and_row_count() {
    let path = std::env::temp_dir().join("ellip2_export_3x3.csv");
    let o = ellip2(&[
        "export", "--k1", "0:0.5:3", "--k2", "0:0.5:3", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 0, "{}", stderr(&o));
    let body = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "k1,k2,method,value,error_estimate,work,status");
    assert_eq!(lines.len(), 10, "header plus 9 data rows");
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
}

#[test]
fn export_json_round_trips_against_csv_bit_for_bit() {
    let dir = std::env::temp_dir();
    let csv_path = dir.join("ellip2_roundtrip.csv");
    let json_path = dir.join("ellip2_roundtrip.json");
    let grid = ["--k1", "0:0.9:4", "--k2", "0:0.9:4"];
    let o = ellip2(
        &[&["export"], &grid[..], &["--out", csv_path.to_str().unwrap()]].concat(),
    );
    assert_eq!(exit(&o), 0, "{}", stderr(&o));
    let o = ellip2(
        &[
            &["export"],
            &grid[..],
            &["--format", "json", "--out", json_path.to_str().unwrap()],
        ]
        .concat(),
    );
    assert_eq!(exit(&o), 0, "{}", stderr(&o));

    let json_body = std::fs::read_to_string(&json_path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&json_body).unwrap();
    let rows = parsed.as_array().unwrap();
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let csv_rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), csv_rows.len());

    // Bit-for-bit: the decimal strings themselves must match, one JSON
    // object per line zipped against one CSV record.
    let obj_lines: Vec<&str> = json_body
        .lines()
        .filter(|l| l.trim_start().starts_with('{'))
        .collect();
    assert_eq!(obj_lines.len(), csv_rows.len());
    for (jline, cline) in obj_lines.iter().zip(&csv_rows) {
        let fields: Vec<&str> = cline.split(',').collect();
        let get = |key: &str| {
            let pat = format!("\"{key}\": ");
            let rest = &jline[jline.find(&pat).unwrap() + pat.len()..];
            rest.split([',', '}']).next().unwrap().trim()
        };
        assert_eq!(get("method"), format!("\"{}\"", fields[2]));
        assert_eq!(get("status"), format!("\"{}\"", fields[6]));
        if fields[6] == "ok" {
            assert_eq!(get("value"), fields[3]);
            assert_eq!(get("error_estimate"), fields[4]);
            assert_eq!(get("work"), fields[5]);
        } else {
            assert_eq!(get("value"), "null");
            assert!(fields[3].is_empty());
        }
    }
    // the straddling grid must contain both outcomes
    assert!(csv.contains(",ok\n") && csv.contains(",domain_skip\n"), "{csv}");
}

#[test]
fn export_is_byte_identical_across_runs() {
    let dir = std::env::temp_dir();
    let a = dir.join("ellip2_det_a.csv");
    let b = dir.join("ellip2_det_b.csv");
    for path in [&a, &b] {
        let o = ellip2(&[
            "export", "--k1", "0:0.7:5", "--k2", "0:0.7:5", "--method", "quad,series,f4",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(exit(&o), 0, "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn export_sweeps_the_equal_modulus_diagonal() {
    let path = std::env::temp_dir().join("ellip2_diag.csv");
    let o = ellip2(&[
        "export", "--k1", "0:0.7:8", "--k-equal", "--method", "f4", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit(&o), 0, "{}", stderr(&o));
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count(), 9);
    assert!(body.contains("f4_closed"));
}

#[test]
fn export_rejects_an_inadmissible_range_endpoint() {
    let o = ellip2(&["export", "--k1", "0:1.2:3", "--k2", "0", "--out", "/dev/null"]);
    assert_eq!(exit(&o), 2); // clap value parser rejects moduli ≥ 1
}
