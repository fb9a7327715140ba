use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monodromy")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).unwrap())
}

/// Table rows as (degree, nilp column).
fn nilp_column(table: &str) -> Vec<(usize, String)> {
    table
        .lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            let degree = it.next()?.parse().ok()?;
            let _dims = it.next()?;
            Some((degree, it.next()?.to_string()))
        })
        .collect()
}

#[test]
fn hilb_nilp_column() {
    let o = run(&["hilb", "--preset", "k3-typeII", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let col = nilp_column(&stdout(&o));
    let first: Vec<&str> = col.iter().take(7).map(|(_, v)| v.as_str()).collect();
    assert_eq!(first, ["0", "—", "1", "—", "2", "—", "3"]);
}

#[test]
fn kummer_degree_four() {
    let (code, v) = json(&["kummer", "--l", "1", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["degrees"][4]["degree"], 4);
    assert_eq!(v["degrees"][4]["nilp"], 2);
    assert_eq!(v["degrees"][2]["dims"], 7);
}

#[test]
fn chain_fixture_is_rejected() {
    let o = run(&["snc-check", "--complex", &fixture("chain4.dc"), "--n", "2", "--jordan", "2,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: REJECT"));
    let (code, v) = json(&["snc-check", "--complex", &fixture("chain4.dc"), "--n", "2", "--jordan", "2,1"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "REJECT");
}

#[test]
fn type_two_chain_is_accepted_for_surfaces() {
    let o = run(&["snc-check", "--complex", &fixture("chain4.dc"), "--n", "1", "--jordan", "2,1x20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: ACCEPT"));
}

#[test]
fn stratum_budget() {
    let kum = fixture("kum2-l1.json");
    let chain = run(&["snc-check", "--complex", &fixture("chain4.dc"), "--n", "2", "--profile", &kum]);
    assert_eq!(chain.status.code(), Some(1));
    assert!(stdout(&chain).contains("stratum budget: fail"));
    let tri = run(&["snc-check", "--complex", &fixture("triangle-strata.dc"), "--n", "2", "--profile", &kum]);
    assert_eq!(tri.status.code(), Some(0), "{}", stdout(&tri));
    assert!(stdout(&tri).contains("stratum budget: pass"));
}

#[test]
fn validate_flags_violations() {
    let dir = std::env::temp_dir().join(format!("monodromy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gap.txt");
    std::fs::write(&path, "degree 0: 1\ndegree 2: 2,1\ndegree 4: 2,1x5\n").unwrap();
    let o = run(&["validate", "--profile", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation"));
    let (code, v) = json(&["validate", "--profile", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["violations"][0]["kind"], "middle_gap");
    let o = run(&["validate", "--profile", &fixture("abelian-l2.txt"), "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_input_exits_two_with_location() {
    let o = run(&["snc-check", "--complex", &fixture("bad-complex.dc"), "--n", "2", "--jordan", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad-complex.dc:4:"), "{err}");

    let dir = std::env::temp_dir().join(format!("monodromy-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    std::fs::write(&path, "kind: k3\ndegree 0: 1\ndegree 2: 2,one\n").unwrap();
    let o = run(&["hilb", "--fixture", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("bad.txt:3:"));

    assert_eq!(run(&["hilb", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["hilb", "--preset", "k3-typeIV", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let definite = dir.join("definite.txt");
    std::fs::write(&definite, "2 1\n1 2\n").unwrap();
    assert_eq!(run(&["verbitsky", "--gram", definite.to_str().unwrap(), "--n", "1"]).status.code(), Some(2));
}

#[test]
fn output_is_reproducible() {
    for args in [
        vec!["hilb", "--preset", "k3-typeIII", "--n", "3"],
        vec!["kummer", "--preset", "abelian-l2", "--n", "2"],
        vec!["symprod", "--l", "1", "--a", "3"],
        vec!["snc-check", "--staircase", "3", "--n", "2", "--jordan", "3,1"],
        vec!["verbitsky", "--b2", "4", "--n", "2", "--seed", "5"],
    ] {
        for format in ["table", "json"] {
            let mut full = vec!["--format", format];
            full.extend(args.iter().copied());
            let a = run(&full);
            let b = run(&full);
            assert_eq!(a.stdout, b.stdout, "{full:?}");
            assert!(!a.stdout.is_empty());
        }
    }
}

#[test]
fn table_and_json_agree() {
    for args in [
        vec!["hilb", "--preset", "k3-typeII", "--n", "3"],
        vec!["kummer", "--l", "2", "--n", "3"],
        vec!["kummer", "--l", "1", "--n", "2", "--product"],
        vec!["symprod", "--preset", "k3-typeIII", "--a", "2"],
    ] {
        let table = stdout(&run(&args));
        let (_, v) = json(&args);
        let col = nilp_column(&table);
        let degrees = v["degrees"].as_array().unwrap();
        assert_eq!(col.len(), degrees.len(), "{args:?}");
        for ((degree, nilp), rec) in col.iter().zip(degrees) {
            assert_eq!(rec["degree"], *degree as u64);
            match rec["nilp"].as_u64() {
                Some(x) => assert_eq!(nilp, &x.to_string()),
                None => assert_eq!(nilp, "—"),
            }
        }
        for (line, rec) in table.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).zip(degrees) {
            let dims: u64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
            assert_eq!(rec["dims"].as_u64().unwrap(), dims);
        }
    }
}

#[test]
fn verbitsky_table() {
    let o = run(&["verbitsky", "--gram", &fixture("gram-u-2a3.txt"), "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, v) = json(&["verbitsky", "--b2", "5", "--n", "2"]);
    let dims: Vec<u64> = v["degrees"].as_array().unwrap().iter().map(|r| r["dims"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 5, 15, 5, 1]);
    assert_eq!(v["palindromic"], true);
    let starved = run(&["verbitsky", "--b2", "5", "--n", "2", "--k", "3", "--samples", "2"]);
    assert_eq!(starved.status.code(), Some(1));
}

#[test]
fn emitted_profiles_validate() {
    let dir = std::env::temp_dir().join(format!("monodromy-cli-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hilb.txt");
    let o = run(&["hilb", "--preset", "k3-typeIII", "--n", "2", "--emit"]);
    std::fs::write(&path, &o.stdout).unwrap();
    let v = run(&["validate", "--profile", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    let path = dir.join("kum.json");
    let (_, doc) = json(&["kummer", "--l", "1", "--n", "3"]);
    std::fs::write(&path, doc.to_string()).unwrap();
    assert_eq!(run(&["validate", "--profile", path.to_str().unwrap(), "--n", "3"]).status.code(), Some(0));
}
