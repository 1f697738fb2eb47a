use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mini() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/mini")
}

fn xlstr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xlstr"))
        .args(args)
        .env_remove("XLSTR_DATA_ROOT")
        .output()
        .expect("binary runs")
}

fn with_data(args: &[&str]) -> Output {
    let root = mini();
    let mut all = vec!["--data-root", root.to_str().unwrap()];
    all.extend_from_slice(args);
    xlstr(&all)
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_cfg(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

const QUICK: &str = "max_epochs=3\neval_every=4\n";

#[test]
fn stats_totals_match_manifest() {
    let out = stdout(&with_data(&["stats"]));
    let totals: Vec<&str> = out
        .lines()
        .map(|l| l.split_whitespace().last().unwrap())
        .skip(1)
        .collect();
    assert_eq!(totals, ["601", "127", "306"]);
}

#[test]
fn reference_stats_need_no_data() {
    let out = stdout(&xlstr(&["stats", "--reference"]));
    assert!(out.lines().any(|l| l.starts_with("Train") && l.ends_with("15,123")));
    assert!(out.lines().any(|l| l.starts_with("Test") && l.ends_with("7,667")));
}

#[test]
fn select_prints_sources() {
    let out = stdout(&xlstr(&["select", "kin", "--strategy", "knn+eng", "--k", "2", "--feature", "cellstate"]));
    assert_eq!(out.lines().next(), Some("eng hau esp"));

    let json = stdout(&xlstr(&["--format", "json", "select", "arb", "--strategy", "ms-fam"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["sources"], serde_json::json!(["amh", "arq", "ary", "hau"]));
}

#[test]
fn empty_selection_is_a_stage_error() {
    let o = with_data(&["select", "ind", "--strategy", "ms-fam"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ind"));
}

#[test]
fn bad_flags_are_config_errors() {
    let o = xlstr(&["select", "kin", "--strategy", "knn+eng", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = xlstr(&["select", "xx1", "--strategy", "eng"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn similarity_dump_has_every_row() {
    let out = stdout(&xlstr(&["similarity", "cellstate"]));
    for l in ["afr", "kin", "hin"] {
        assert!(out.contains(l), "{l} missing");
    }
}

#[test]
fn translit_text() {
    assert_eq!(stdout(&xlstr(&["translit", "--text", "नमस्ते"])).trim(), "namaste");
    assert_eq!(stdout(&xlstr(&["translit", "--text", "ሰላም"])).trim(), "selam");
}

#[test]
fn augment_is_balanced() {
    let out = stdout(&with_data(&["augment", "--langs", "eng,hau,kin"]));
    let rows: Vec<(&str, &str)> = out.lines().filter_map(|l| l.split_once('\t')).collect();
    // 220 + 69 + 31 originals, each language ends up with all of them.
    assert!(rows.contains(&("eng", "320")) && rows.contains(&("hau", "320")) && rows.contains(&("kin", "320")));
    assert!(rows.contains(&("total", "960")));
}

#[test]
fn train_then_evaluate() {
    let out = tempfile::tempdir().unwrap();
    let o = with_data(&[
        "--out",
        out.path().to_str().unwrap(),
        "train",
        "kin",
        "--strategy",
        "eng",
        "--max-epochs",
        "3",
        "--eval-every",
        "4",
    ]);
    stdout(&o);
    let ckpt = out.path().join("checkpoint.txt");
    assert!(ckpt.is_file());
    let config = fs::read_to_string(out.path().join("config.txt")).unwrap();
    assert!(config.starts_with("# config_hash="));

    let json = stdout(&with_data(&["--format", "json", "evaluate", "kin", "--checkpoint", ckpt.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["target"], "kin");
    let rho = v["rho"].as_f64().unwrap();
    assert!((-1.0..=1.0).contains(&rho));
}

#[test]
fn run_writes_hashed_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("kin.cfg");
    fs::write(&cfg, format!("target=kin\nstrategy=knn+eng\nk=2\nfeature=cellstate\naugment=true\n{QUICK}")).unwrap();
    let o = with_data(&["--out", out.to_str().unwrap(), "--format", "json", "run", cfg.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let hash = report["config_hash"].as_str().unwrap();
    let artifacts = out.join(hash);
    for f in ["config.txt", "trainset.tsv", "trainset.json", "checkpoint.txt", "trace.tsv", "report.json", "audit.json"] {
        let text = fs::read_to_string(artifacts.join(f)).unwrap_or_else(|e| panic!("{f}: {e}"));
        assert!(text.contains(hash), "{f} lacks the hash");
    }
}

#[test]
fn malformed_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "target=kin\nstrategy=eng\nlearning_rat=0.1\n").unwrap();
    let o = with_data(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("learning_rat"));
}

#[test]
fn missing_data_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("kin.cfg");
    fs::write(&cfg, "target=kin\nstrategy=eng\n").unwrap();
    let o = xlstr(&["--data-root", dir.path().join("nowhere").to_str().unwrap(), "run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn suite_is_deterministic_across_parallelism() {
    let dir = tempfile::tempdir().unwrap();
    write_cfg(dir.path(), "a_eng.cfg", &format!("target=kin,hau,amh\nstrategy=eng\n{QUICK}"));
    write_cfg(dir.path(), "b_fam.cfg", &format!("target=hin,ind\nstrategy=ms-fam\nromanize=true\n{QUICK}"));
    write_cfg(
        dir.path(),
        "c_knn.cfg",
        &format!("target=kin\nstrategy=knn+eng\nk=2\nfeature=cellstate\naugment=true\n{QUICK}"),
    );
    let d = dir.path().to_str().unwrap();
    let a = stdout(&with_data(&["--format", "json", "suite", d, "--parallelism", "1"]));
    let b = stdout(&with_data(&["--format", "json", "suite", d, "--parallelism", "4"]));
    let c = stdout(&with_data(&["--format", "json", "--sequential", "suite", d]));
    assert_eq!(a, b);
    assert_eq!(a, c);

    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let statuses: Vec<&str> = v.as_array().unwrap().iter().map(|o| o["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["ok", "ok", "ok", "ok", "failed", "ok"]);

    let table = stdout(&with_data(&["suite", d]));
    assert!(table.contains("errors:"));
    assert!(table.contains("ms-fam+tl / ind"));
}

#[test]
fn synth_reproduces_the_bundled_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let o = xlstr(&["synth", dir.path().to_str().unwrap()]);
    stdout(&o);
    let fresh = fs::read_to_string(dir.path().join("manifest.tsv")).unwrap();
    let bundled = fs::read_to_string(mini().join("manifest.tsv")).unwrap();
    assert_eq!(fresh, bundled);
    for lang in ["amh", "eng", "kin"] {
        assert_eq!(
            fs::read(dir.path().join(lang).join("train.csv")).unwrap(),
            fs::read(mini().join(lang).join("train.csv")).unwrap(),
            "{lang}"
        );
    }
}
