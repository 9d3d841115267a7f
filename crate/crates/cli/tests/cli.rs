use std::path::Path;
use std::process::{Command, Output};

use bnlab_cli::config::ScenarioConfig;

fn bnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnlab")).args(args).env_remove("BNLAB_CONFIG").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn table(p: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(p).unwrap();
    let head = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (head, rows)
}

fn col(head: &[String], name: &str) -> usize {
    head.iter().position(|h| h == name).unwrap_or_else(|| panic!("missing column {name}"))
}

#[test]
fn default_verify_passes_with_complete_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = bnlab(&["verify", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = read_json(&out.join("report.json"));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"], "PASS");
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() >= 200, "{} checks", checks.len());
    assert_eq!(r["summary"]["total"].as_u64().unwrap() as usize, checks.len());
    let families = [
        "fock.ccr",
        "fock.positivity",
        "kernel.chi_identity",
        "fields.closed_form",
        "fields.decomposition",
        "fields.localization",
        "states.gauss_deviation",
        "states.subsidiary",
        "asymptotics.out_limit",
        "states.ir_stabilization",
        "states.charge_class",
        "fields.free_wave",
    ];
    for f in families {
        assert!(checks.iter().any(|c| c["invariant"] == f), "no check for {f}");
    }
    for c in checks {
        assert!(["exact", "closed-form", "quadrature", "extrapolated"].contains(&c["provenance"].as_str().unwrap()));
        assert!(c["id"].as_str().unwrap().starts_with(c["invariant"].as_str().unwrap()));
    }
    let (head, rows) = table(&out.join("checks.csv"));
    assert_eq!(rows.len(), checks.len());
    assert!(rows.iter().all(|r| r[col(&head, "schema_version")] == "1"));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = out.to_str().unwrap();
    let mut snapshots = Vec::new();
    for jobs in ["0", "1"] {
        assert_eq!(code(&bnlab(&["verify", "--out", o, "--seed", "11", "--jobs", jobs])), 0);
        snapshots.push((std::fs::read(out.join("report.json")).unwrap(), std::fs::read(out.join("checks.csv")).unwrap()));
    }
    assert!(snapshots[0] == snapshots[1]);
    // A different seed moves the sampled points.
    assert_eq!(code(&bnlab(&["verify", "--out", o, "--seed", "12"])), 0);
    assert!(std::fs::read(out.join("report.json")).unwrap() != snapshots[0].0);
}

#[test]
fn zero_width_form_factor_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[kernel]\nsigma = 0.0\n").unwrap();
    let o = bnlab(&["verify", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("kernel.sigma"), "{}", stderr(&o));
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn unknown_keys_are_rejected_with_line_and_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("typo.toml");
    std::fs::write(&cfg, "[kernel]\nsigma = 0.1\n\n[states]\ndirac_radius = [2.0, 4.0]\n").unwrap();
    let o = bnlab(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let e = stderr(&o);
    assert!(e.contains("line 5") && e.contains("dirac_radius"), "{e}");
    let e = ScenarioConfig::parse("[nonsense]\n").unwrap_err().to_string();
    assert!(e.contains("nonsense"), "{e}");
}

#[test]
fn config_round_trips_and_validates() {
    let d = ScenarioConfig::default();
    let text = toml::to_string(&d).unwrap();
    assert_eq!(ScenarioConfig::parse(&text).unwrap(), d);
    assert!(ScenarioConfig::parse("[tolerances]\ngauss = -1.0\n").is_err());
    assert!(ScenarioConfig::parse("[fields]\nv_out = [0.0, 1.2, 0.0]\n").is_err());
    assert!(ScenarioConfig::parse("[states]\nlw_velocities = [[1.0, 0.0, 0.0]]\n").is_err());
    assert!(ScenarioConfig::parse("[asymptotics]\nx0 = [3.0, 2.0, 4.0, 5.0]\n").is_err());
    assert!(ScenarioConfig::parse("[probes]\nfield = \"magnetic\"\n").is_err());
}

#[test]
fn config_is_read_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("env.toml");
    std::fs::write(&cfg, "[kernel]\nsigma = -2.0\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bnlab")).args(["scan", "field-profile"]).env("BNLAB_CONFIG", &cfg).output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("env.toml"));
}

#[test]
fn tightened_tolerances_fail_checks_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = bnlab(&["verify", "--out", dir.path().to_str().unwrap(), "--tolerance-scale", "1e-9"]);
    assert_eq!(code(&o), 1);
    let r = read_json(&dir.path().join("report.json"));
    assert_eq!(r["status"], "FAIL");
    assert!(r["summary"]["failed"].as_u64().unwrap() > 0);
    assert_eq!(code(&bnlab(&["verify", "--tolerance-scale", "0"])), 2);
}

#[test]
fn unconverged_limits_exit_with_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("early.toml");
    // x₀ far too small: the packet still overlaps the charge.
    std::fs::write(&cfg, "[asymptotics]\nx0 = [2.0, 3.0, 4.0, 5.0]\n").unwrap();
    let o = bnlab(&["verify", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let r = read_json(&dir.path().join("report.json"));
    assert!(r["checks"].as_array().unwrap().iter().any(|c| c["numeric_failure"] == true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&bnlab(&["scan", "temperature"])), 2);
    assert_eq!(code(&bnlab(&["frobnicate"])), 2);
    assert_eq!(code(&bnlab(&["charged-state", "--kind", "lw", "--x", "1", "0", "0", "--t", "1"])), 2);
    assert_eq!(code(&bnlab(&["charged-state", "--kind", "lw", "--c", "1.5", "0", "0", "--x", "1", "0", "0", "--t", "1"])), 2);
    assert_eq!(code(&bnlab(&["--version"])), 0);
}

#[test]
fn exterior_profile_vanishes_inside_the_cone_and_is_minus_coulomb_outside() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("late.toml");
    std::fs::write(&cfg, "[probes]\ntime = 2.5\n").unwrap();
    let o = bnlab(&["scan", "field-profile", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let (head, rows) = table(&dir.path().join("field-profile.csv"));
    assert_eq!(rows.len(), 81);
    let (ir, ia, it) = (col(&head, "region"), col(&head, "a0"), col(&head, "r"));
    let ff = bnlab::FormFactor::gaussian(0.1).unwrap();
    let (mut inside, mut outside) = (0, 0);
    for row in &rows {
        let a0: f64 = row[ia].parse().unwrap();
        let r: f64 = row[it].parse().unwrap();
        match row[ir].as_str() {
            "interior" => {
                inside += 1;
                assert!(a0.abs() < 1e-10, "r={r}: {a0}");
            }
            "spacelike" => {
                outside += 1;
                assert!((a0 + ff.coulomb(r)).abs() < 1e-8, "r={r}: {a0}");
            }
            _ => {}
        }
    }
    assert!(inside > 10 && outside > 10);
}

#[test]
fn convergence_table_carries_decay_exponents() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&bnlab(&["scan", "asymptotic-convergence", "--out", dir.path().to_str().unwrap()])), 0);
    let (head, rows) = table(&dir.path().join("asymptotic-convergence.csv"));
    let (ie, is) = (col(&head, "decay_exponent"), col(&head, "limit_status"));
    // Two packets, three times, five x₀ values each.
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().all(|r| r[is] == "Converged"));
    assert!(rows.iter().any(|r| !r[ie].is_empty()));
}

#[test]
fn subsidiary_scan_records_a_trend_per_state() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&bnlab(&["scan", "subsidiary-vs-sigma", "--out", dir.path().to_str().unwrap()])), 0);
    let (head, rows) = table(&dir.path().join("subsidiary-vs-sigma.csv"));
    let (is, it, iv) = (col(&head, "state"), col(&head, "trend"), col(&head, "residual"));
    assert_eq!(rows.len(), 4 * 4);
    assert!(rows.iter().all(|r| ["decreasing", "increasing", "mixed"].contains(&r[it].as_str())));
    for r in rows.iter().filter(|r| r[is] == "COULOMB") {
        assert!(r[iv].parse::<f64>().unwrap().abs() < 1e-8);
    }
}

#[test]
fn charge_class_scan_separates_fock_and_non_fock() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&bnlab(&["scan", "charge-class", "--out", dir.path().to_str().unwrap()])), 0);
    let (head, rows) = table(&dir.path().join("charge-class.csv"));
    let (is, ir, iv) = (col(&head, "state"), col(&head, "region"), col(&head, "verdict"));
    // Every state is Fock towards O±. At spacelike infinity the out shift
    // −C_v + C_c vanishes only for the Coulomb state and LW(c = v = 0).
    for r in &rows {
        let cancels = r[is] == "COULOMB" || r[is] == "LW(0.000,0.000,0.000)";
        let want = if r[ir] != "spacelike" || cancels { "Fock" } else { "NonFock" };
        assert_eq!(r[iv], want, "{r:?}");
    }
    assert!(rows.iter().any(|r| r[is] == "GUPTA" && r[ir] == "spacelike"));
}

#[test]
fn chi_identity_point_and_grid() {
    let o = bnlab(&["chi-identity", "--x", "0.3", "0", "0", "--t", "1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let want = (0.5 * std::f64::consts::PI).sqrt() / 0.3;
    assert!((v["rhs"].as_f64().unwrap() - want).abs() < 1e-12);
    assert!(v["abs_error"].as_f64().unwrap() < 1e-6);
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&bnlab(&["chi-identity", "--out", dir.path().to_str().unwrap()])), 0);
    let (head, rows) = table(&dir.path().join("chi-identity.csv"));
    let ie = col(&head, "abs_error");
    assert!(rows.len() > 100);
    assert!(rows.iter().all(|r| r[ie].parse::<f64>().unwrap() < 1e-6));
}

#[test]
fn charged_state_reports_coulomb_tail_of_the_out_field() {
    let o = bnlab(&["charged-state", "--kind", "gupta", "--x", "2", "0", "0", "--t", "0.5"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["region"], "spacelike");
    let ff = bnlab::FormFactor::gaussian(0.1).unwrap();
    let want = -0.7 * ff.coulomb(2.0);
    assert!((v["out_potential"][0].as_f64().unwrap() - want).abs() < 1e-10);
    assert!(v["potential"][0].as_f64().unwrap().abs() < 1e-10);
    let o = bnlab(&["charged-state", "--kind", "coulomb", "--x", "2", "0", "0", "--t", "0.5"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["out_potential"][0].as_f64().unwrap().abs() < 1e-10);
    assert!(v["potential"][0].as_f64().unwrap() > 0.0);
}
