use gradedcm::cli::main_with_args;
use std::path::Path;

const CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/main-example.toml");

fn run(args: &[&str]) -> i32 {
    let mut all = vec!["gradedcm"];
    all.extend_from_slice(args);
    main_with_args(all)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = r#"
[ring.X]
vars = ["x0", "x1"]
[ring.Y]
vars = ["y0", "y1", "y2"]
[module.omega]
a = "X"
b = "Y"
shift = 1
"#;

#[test]
fn shipped_config_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run(&["--config", CONFIG, "--out", a.to_str().unwrap()]), 0);
    assert_eq!(run(&["--config", CONFIG, "run", "--job", "quiver", "--out", b.to_str().unwrap()]), 0);
    assert_eq!(std::fs::read(a.join("quiver.json")).unwrap(), std::fs::read(b.join("quiver.json")).unwrap());
    assert!(std::fs::read_to_string(a.join("quiver.dot")).unwrap().starts_with("digraph"));
    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["jobs"].as_array().unwrap().len(), 10);
}

#[test]
fn usage_and_failure_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    assert_eq!(run(&[]), 2);
    assert_eq!(run(&["run"]), 2);
    let empty = write(dir.path(), "empty.toml", SMALL);
    assert_eq!(run(&["--config", &empty, "--out", out]), 2);
    assert_eq!(run(&["--config", CONFIG, "run", "--job", "nope", "--out", out]), 2);
    let broken = write(dir.path(), "broken.toml", "[ring.X\nvars = 1\n");
    assert_eq!(run(&["--config", &broken, "--out", out]), 2);
    let dangling = write(dir.path(), "dangling.toml", &format!("{SMALL}[[job]]\nname = \"r\"\nkind = \"resolve\"\nmodule = \"eta\"\n"));
    assert_eq!(run(&["--config", &dangling, "--out", out]), 2);
    let wrong = write(
        dir.path(),
        "wrong.toml",
        &format!("{SMALL}[[job]]\nname = \"r\"\nkind = \"resolve\"\nmodule = \"omega\"\nexpect = {{ ranks = [1] }}\n"),
    );
    assert_eq!(run(&["--config", &wrong, "--out", out]), 1);
    assert_eq!(run(&["reproduce-paper", "--section", "4", "--out", out]), 2);
    assert_eq!(run(&["--window", "0", "reproduce-paper", "--out", out]), 2);
    assert_eq!(run(&["--field", "prime:4", "reproduce-paper", "--out", out]), 2);
}

#[test]
fn certification_gap_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    // resolving six steps deep inside degrees [.., 5] cannot certify the last generators
    let gap = write(
        dir.path(),
        "gap.toml",
        &format!("{SMALL}[[job]]\nname = \"r\"\nkind = \"resolve\"\nmodule = \"omega\"\nwindow = 1\ndepth = 6\n"),
    );
    assert_eq!(run(&["--config", &gap, "--out", out.to_str().unwrap()]), 3);
}

#[test]
fn numsgp_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(run(&["numsgp", "--group", "2,2", "--gens", "1:00,1:10,1:01", "--out", out.to_str().unwrap()]), 0);
    let j: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("numsgp.json")).unwrap()).unwrap();
    assert_eq!(j["frobenius"], 1);
    assert_eq!(j["twists"], serde_json::json!(["11"]));
    assert_eq!(run(&["numsgp", "--group", "2,2", "--out", out.to_str().unwrap()]), 2);
}
