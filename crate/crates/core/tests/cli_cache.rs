//! Kept apart from the other CLI tests because it sets the cache variable
//! for the whole process.

use gradedcm::cli::{main_with_args, CACHE_ENV};
use std::path::Path;

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
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let config = write(
        dir.path(),
        "c.toml",
        &format!("{SMALL}[[job]]\nname = \"r\"\nkind = \"resolve\"\nmodule = \"omega\"\nexpect = {{ ranks = [2, 3, 6] }}\n"),
    );
    std::env::set_var(CACHE_ENV, &cache);
    let outs: Vec<_> = (0..3).map(|k| dir.path().join(format!("o{k}"))).collect();
    assert_eq!(run(&["--config", &config, "--out", outs[0].to_str().unwrap()]), 0);
    let entries: Vec<_> = std::fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    assert_eq!(run(&["--config", &config, "--out", outs[1].to_str().unwrap()]), 0);
    let raw = std::fs::read_to_string(&entries[0]).unwrap();
    std::fs::write(&entries[0], &raw[..raw.len() / 2]).unwrap();
    assert_eq!(run(&["--config", &config, "--out", outs[2].to_str().unwrap()]), 0);
    assert_eq!(std::fs::read_to_string(&entries[0]).unwrap(), raw);
    let first = std::fs::read(outs[0].join("r.json")).unwrap();
    for o in &outs[1..] {
        assert_eq!(std::fs::read(o.join("r.json")).unwrap(), first);
    }
    assert_eq!(run(&["--config", &config, "--window", "4", "--out", outs[0].to_str().unwrap()]), 0);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);
    std::env::remove_var(CACHE_ENV);
}
