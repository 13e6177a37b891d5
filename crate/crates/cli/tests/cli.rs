use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn stochlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochlab")).current_dir(dir).args(args).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn parrondo_config_reproduces_mixed_rate() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m3.toml"), "M = 3\np = [0.295, 0.62, 0.62]\nq = [0.705, 0.38, 0.38]\n").unwrap();
    let o = stochlab(dir.path(), &["parrondo", "--config", "m3.toml", "--t", "200", "--emit", "pmf.csv,summary.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&dir.path().join("out/summary.json"));
    assert!((s["r"].as_f64().unwrap() - 0.005234741795).abs() < 1e-9);
    assert!(dir.path().join("out/pmf.csv").exists());
    assert!(!dir.path().join("out/rate.csv").exists());
    let m = json(&dir.path().join("out/manifest.json"));
    assert_eq!(m["subcommand"], "parrondo");
    assert_eq!(m["artifacts"], serde_json::json!(["pmf.csv", "summary.json"]));
}

#[test]
fn preset_matches_explicit_mixture() {
    let dir = tempfile::tempdir().unwrap();
    let o = stochlab(dir.path(), &["parrondo", "--preset", "mix", "--t", "100,200", "--out-dir", "a"]);
    assert!(o.status.success());
    let s = json(&dir.path().join("a/summary.json"));
    assert!((s["r"].as_f64().unwrap() - 0.005234741795).abs() < 1e-9);
    for peak in s["peaks"].as_array().unwrap() {
        let t = peak["t"].as_f64().unwrap();
        assert!((peak["n"].as_f64().unwrap() - 0.0052 * t).abs() <= 2.0);
    }
}

#[test]
fn ar1_mutual_information_near_gaussian_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = stochlab(dir.path(), &["mi", "--ar1", "a=0.8", "--n", "1000", "--k", "5", "--seeds", "20"]);
    assert!(o.status.success());
    let s = json(&dir.path().join("out/summary.json"));
    let r = &s["results"][0];
    for m in ["knn1", "knn2"] {
        assert!((r["methods"][m]["mean"].as_f64().unwrap() - 0.5108).abs() < 0.1);
    }
    let fig = fs::read_to_string(dir.path().join("out/fig1.csv")).unwrap();
    assert!(fig.starts_with("a,analytic,histogram,knn1,knn2\n"));
}

#[test]
fn production_reports_tanh_variance() {
    let dir = tempfile::tempdir().unwrap();
    let o = stochlab(dir.path(), &["production", "--g", "0.2", "--sigma", "0.05", "--t", "400", "--emit", "voldist.csv"]);
    assert!(o.status.success());
    let s = json(&dir.path().join("out/summary.json"));
    assert!((s["var_delta"].as_f64().unwrap() / 2.49e-4 - 1.0).abs() < 0.02);
    let v = fs::read_to_string(dir.path().join("out/voldist.csv")).unwrap();
    assert!(v.starts_with("x,density\n") && v.lines().count() > 100);
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["production", "--g", "0.2", "--sigma", "0.3", "--t", "30", "--paths", "10000", "--snapshots", "5,30"],
        &["asymmetry", "--synthetic", "night_to_day", "--days", "300"],
        &["mi", "--ar1", "a=0.2:0.6:0.2", "--seeds", "3", "--n", "300"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut outs = Vec::new();
        for (j, threads) in ["1", "4"].iter().enumerate() {
            let sub = format!("r{i}_{j}");
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--seed", "7", "--out-dir", &sub]);
            let o = Command::new(env!("CARGO_BIN_EXE_stochlab"))
                .current_dir(dir.path())
                .env("STOCHLAB_THREADS", threads)
                .args(&full)
                .output()
                .unwrap();
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            outs.push(files(&dir.path().join(&sub)));
        }
        let strip = |v: &Vec<(String, Vec<u8>)>| -> Vec<(String, Vec<u8>)> {
            v.iter().filter(|(n, _)| n != "manifest.json").cloned().collect()
        };
        assert_eq!(strip(&outs[0]), strip(&outs[1]), "run {i}");
    }
}

#[test]
fn manifests_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..2 {
        assert!(stochlab(dir.path(), &["envelope", "--t", "50", "--out-dir", "e"]).status.success());
        fs::rename(dir.path().join("e"), dir.path().join(format!("e{i}"))).unwrap();
    }
    assert_eq!(files(&dir.path().join("e0")), files(&dir.path().join("e1")));
}

#[test]
fn every_csv_has_a_header_and_a_manifest_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 5] = [
        &["vol", "--synthetic", "independent", "--days", "200", "--out-dir", "v"],
        &["envelope", "--t", "20", "--out-dir", "e"],
        &["parrondo", "--preset", "capital", "--t", "50", "--out-dir", "p"],
        &["asymmetry", "--synthetic", "day_to_night", "--days", "200", "--out-dir", "a"],
        &["selfcheck", "--specs", "10", "--out-dir", "s"],
    ];
    for args in runs {
        let o = stochlab(dir.path(), args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let out = dir.path().join(args[args.len() - 1]);
        assert!(out.join("manifest.json").exists());
        for (name, bytes) in files(&out) {
            if name.ends_with(".csv") {
                let first = String::from_utf8(bytes).unwrap().lines().next().unwrap_or("").to_string();
                assert!(first.chars().next().is_some_and(|c| c.is_ascii_alphabetic()), "{name}: {first}");
            }
        }
    }
}

#[test]
fn json_format_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("env.toml"), "p1 = 0.5\np2 = 0.5\nt = 10\nformat = \"json\"\nout_dir = \"cfg\"\n").unwrap();
    let o = stochlab(dir.path(), &["envelope", "--config", "env.toml", "--p1", "0.2", "--p2", "0.3"]);
    assert!(o.status.success());
    let s = json(&dir.path().join("cfg/summary.json"));
    assert!((s["r"].as_f64().unwrap() - 1.45).abs() < 1e-12);
    let g = json(&dir.path().join("cfg/growth.json"));
    assert_eq!(g["rows"].as_array().unwrap().len(), 10);
    let m = json(&dir.path().join("cfg/manifest.json"));
    assert_eq!(m["config"]["envelope"]["p1"], 0.2);
    assert_eq!(m["config"]["common"]["format"], "json");
}

#[test]
fn ohlc_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("Day;Open;Close\n");
    let mut price: f64 = 100.0;
    for i in 0..120u32 {
        let open = price * (1.0 + 0.003 * ((i * 7 % 11) as f64 - 5.0) / 5.0);
        let close = open * (1.0 + 0.004 * ((i * 5 % 13) as f64 - 6.0) / 6.0);
        csv.push_str(&format!("{:02}/{:02}/2021;{open};{close}\n", 1 + i % 28, 1 + i / 28));
        price = close;
    }
    fs::write(dir.path().join("px.csv"), csv.replace(';', ",")).unwrap();
    let o = stochlab(
        dir.path(),
        &["asymmetry", "--input", "px.csv", "--columns", "Day,Open,Close", "--date-format", "%d/%m/%Y", "--methods", "spearman,pearson"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&dir.path().join("out/summary.json"));
    assert_eq!(s["report"]["days"], 119);
    assert_eq!(s["load"]["rows_read"], 120);
}

#[test]
fn validation_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "preset = \"mix\"\nbogus = 1\n").unwrap();
    let cases: [&[&str]; 7] = [
        &["asymmetry", "--input", "missing.csv"],
        &["parrondo", "--config", "bad.toml"],
        &["parrondo", "--config", "absent.toml"],
        &["parrondo", "--preset", "mix", "--emit", "nope.csv"],
        &["production", "--g", "0.2"],
        &["mi", "--ar1", "a=1.5"],
        &["no-such-command"],
    ];
    for args in cases {
        let o = stochlab(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn selfcheck_prints_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = stochlab(dir.path(), &["selfcheck", "--specs", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().filter(|l| l.contains("  PASS  ")).count() >= 10);
    assert!(!text.contains("FAIL"));
}
