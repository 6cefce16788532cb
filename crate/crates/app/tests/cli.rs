use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn orbitsieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitsieve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const CONE: &str = r#"
[group]
preset = "pythagorean_full"

[family]
t_min = 10.0
t_max = 1000.0
points = 5
"#;

#[test]
fn orbit_cache_is_reproducible_and_matches_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONE);
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for (out, workers) in [(&a, "1"), (&b, "4")] {
        let o = orbitsieve(&["orbit", "--config", &config, "--out", out.to_str().unwrap(), "--workers", workers]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let cache = std::fs::read(a.join("orbit.txt")).unwrap();
    assert_eq!(cache, std::fs::read(b.join("orbit.txt")).unwrap());
    let text = String::from_utf8(cache).unwrap();
    assert!(text.starts_with("orbitsieve-orbit "));

    let o = orbitsieve(&["count", "--config", &config, "--out", c.to_str().unwrap()]);
    assert!(o.status.success());
    let counts = std::fs::read_to_string(c.join("counts.csv")).unwrap();
    let last: u64 = counts.lines().last().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(a.join("orbit_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["count"].as_u64(), Some(last));
    assert_eq!(last as usize, text.lines().count() - 1);

    let m = manifest(&a);
    assert_eq!(m["status"], "ok");
    assert_eq!(m["subcommand"], "orbit");
    assert_eq!(m["config_sha256"], manifest(&b)["config_sha256"]);
    assert_eq!(m["artifacts"][0]["path"], "orbit.txt");
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[group]\npreset = \"pythagorean_full\"\nw0 = [3, 4]\n");
    let o = orbitsieve(&["orbit", "--config", &config, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("group.w0"));

    let config = write_config(dir.path(), "[group\n");
    let o = orbitsieve(&["count", "--config", &config]);
    assert_eq!(o.status.code(), Some(2));

    let out = dir.path().join("ps");
    let config = write_config(dir.path(), "[group]\npreset = \"sl2z_spin\"\n[family]\nsource = \"ball\"\n");
    let o = orbitsieve(&["ps", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(manifest(&out)["status"], "config_error");
}

#[test]
fn budget_overruns_exit_with_code_three_and_flag_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{CONE}\n[budgets]\nmax_points = 50\n");
    let config = write_config(dir.path(), &text);
    let out = dir.path().join("out");
    let o = orbitsieve(&["orbit", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let m = manifest(&out);
    assert_eq!(m["status"], "budget_exceeded");
    assert_eq!(m["artifacts"][0]["path"], "orbit.partial.txt");
    assert_eq!(m["artifacts"][0]["partial"], true);
    assert!(out.join("orbit.partial.txt").exists());
    assert!(!out.join("orbit.txt").exists());

    let text = format!("{CONE}\n[budgets]\nmax_depth = 3\n");
    let config = write_config(dir.path(), &text);
    let o = orbitsieve(&["sieve-run", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sieve_subcommands_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{CONE}\n[sieve]\nt = 1000.0\nprimes_max = 50\n");
    let config = write_config(dir.path(), &text);
    for (sub, files) in [
        ("sieve-local", &["local_density.csv", "sieve_local.json"][..]),
        ("sieve-run", &["sieve_run.json"][..]),
        ("almost-prime", &["almost_prime.csv", "almost_prime.json"][..]),
        ("oracle", &["oracle_fp.csv", "oracle_quadric.txt", "oracle_orbit.txt", "oracle_prime_hypotenuse.json"][..]),
        ("exponent", &["exponent.json"][..]),
    ] {
        let out = dir.path().join(sub);
        let o = orbitsieve(&[sub, "--config", &config, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{sub}: {}", String::from_utf8_lossy(&o.stderr));
        for f in files {
            assert!(out.join(f).exists(), "{sub} wrote no {f}");
        }
    }
    let local = std::fs::read_to_string(dir.path().join("sieve-local/local_density.csv")).unwrap();
    assert!(local.starts_with("d,O_d,O_F_d,g_num,g_den\n1,1,1,1,1\n"));
    assert!(local.contains("\n5,24,8,1,3\n"));

    // The engine orbit and the Euclid fixture have the same rows.
    let out = dir.path().join("orbit");
    assert!(orbitsieve(&["orbit", "--config", &config, "--out", out.to_str().unwrap()]).status.success());
    let engine = std::fs::read_to_string(out.join("orbit.txt")).unwrap();
    let fixture = std::fs::read_to_string(dir.path().join("oracle/oracle_orbit.txt")).unwrap();
    let rows = |s: &str| s.lines().skip(1).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(rows(&engine), rows(&fixture));

    let fp = std::fs::read_to_string(dir.path().join("oracle/oracle_fp.csv")).unwrap();
    assert!(fp.contains("\n5,24,8\n"));
}

#[test]
fn lattice_sector_report() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
[group]
preset = "sl2z_spin"

[family]
kind = "sector"
source = "ball"
windows = [[[0, 90]], [[90, 180]], [[180, 360]]]
t_min = 10.0
t_max = 1000.0
points = 7

[ps]
delta = 1.0
"#;
    let config = write_config(dir.path(), text);
    let out = dir.path().join("ps");
    let o = orbitsieve(&["ps", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(out.join("ps_report.csv")).unwrap();
    assert!(report.starts_with("window_id,T,count,ratio,target_ratio,verdict\n"));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out.join("ps_measure.json")).unwrap()).unwrap();
    assert_eq!(summary["delta_fitted"], false);
    let histogram = std::fs::read_to_string(out.join("ps_histogram.csv")).unwrap();
    assert_eq!(histogram.lines().count(), 73);
    let total: f64 = histogram
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-6);
}
