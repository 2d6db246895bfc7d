use std::process::Command;

use gl2_ekr::cli::{run, Outcome, EXIT_CONFIG, EXIT_OK, EXIT_RESOURCE};

fn ekr(args: &str) -> Outcome {
    run(std::iter::once("ekr").chain(args.split_whitespace()))
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ekr");
    let ok = Command::new(bin).args(["verify", "--p", "3", "--d", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("omega = 6"));
    let bad = Command::new(bin).args(["verify", "--p", "5", "--d", "3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_CONFIG));
    let capped = Command::new(bin)
        .args(["maximal", "--p", "3", "--d", "2", "--max-enum", "5"])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(EXIT_RESOURCE));
}

#[test]
fn verify_examples() {
    for (args, omega) in [("--p 3 --k 1 --d 2", 6), ("--p 2 --k 2 --d 3", 12)] {
        let o = ekr(&format!("verify {args} --format json"));
        assert_eq!(o.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["schema"], 1);
        let run = &v["runs"][0];
        assert_eq!(run["verify"]["omega"], omega);
        assert_eq!(run["verify"]["omega_matches_qd"], true);
        assert_eq!(run["verify"]["no_clique_of_size_qd_plus_one"], true);
        let members: Vec<u64> = run["verify"]["witness"]["members"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .collect();
        assert!(members.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(members[0], 0);
    }
}

#[test]
fn maximal_histogram() {
    let o = ekr("maximal --p 3 --k 1 --d 2 --format json");
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["runs"][0]["maximal"]["sizes"], serde_json::json!({"6": 64}));
}

#[test]
fn lemmas_example() {
    let o = ekr("lemmas --p 7 --k 1 --d 3 --seed 42");
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert!(o.stdout.contains("status: Pass"));
}

#[test]
fn dimacs_export() {
    let o = ekr("export --p 3 --k 1 --d 2 --format dimacs");
    assert_eq!(o.code, EXIT_OK);
    let mut lines = o.stdout.lines().filter(|l| !l.starts_with('c'));
    let header: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
    assert_eq!(&header[..3], ["p", "edge", "48"]);
    let m: usize = header[3].parse().unwrap();
    let edges: Vec<(usize, usize)> = lines
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            assert_eq!(t[0], "e");
            (t[1].parse().unwrap(), t[2].parse().unwrap())
        })
        .collect();
    assert_eq!(edges.len(), m);
    assert!(edges.iter().all(|&(u, v)| 1 <= u && u < v && v <= 48));
    // every vertex has the same degree as the identity
    let mut deg = [0usize; 49];
    for &(u, v) in &edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    assert!(deg[1..].iter().all(|&x| x == deg[1]));
}

#[test]
fn export_json_metadata() {
    let o = ekr("export --p 2 --k 2 --d 3 --format json");
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["group_size"], 180);
    assert_eq!(v["elements"].as_array().unwrap().len(), 180);
    assert_eq!(v["elements"][0], serde_json::json!([1, 0, 0, 1]));
}

#[test]
fn d1_runs_are_marked_in_text_and_json() {
    let o = ekr("extend --p 5 --d 1 --samples 20");
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("outside the theorem's hypothesis"));
    let o = ekr("export --p 5 --d 1");
    assert!(o.stdout.contains("outside the theorem's hypothesis"));
}

#[test]
fn out_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = ekr(&format!("classify --p 3 --d 2 --format json --out {}", path.display()));
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert_eq!(v["runs"][0]["classify"]["histogram"]["other"], 0);
}
