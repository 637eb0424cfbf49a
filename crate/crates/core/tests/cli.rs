use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn isx(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_isx"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("isx starts");
    {
        let mut input = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            input.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("isx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn fixture_file() -> PathBuf {
    let path = tmp("pinched-torus.json");
    let o = isx(&["fixture", "pinched-torus", "--out", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path
}

#[test]
fn fixture_piped_into_validate() {
    for name in ["pinched-torus", "empty"] {
        let f = isx(&["fixture", name], None);
        assert_eq!(f.status.code(), Some(0));
        let v = isx(&["validate", "-"], Some(&f.stdout));
        assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));
        assert!(stdout(&v).contains("valid"));
    }
}

#[test]
fn homology_table() {
    let path = fixture_file();
    let o = isx(&["homology", path.to_str().unwrap(), "--witt-approx"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let dims: Vec<usize> = stdout(&o)
        .lines()
        .filter_map(|l| {
            let cols: Vec<&str> = l.split_whitespace().collect();
            let degree: i32 = cols.first()?.parse().ok()?;
            (0..=3).contains(&degree).then(|| cols[1].parse().unwrap())
        })
        .collect();
    assert_eq!(dims, vec![0, 1, 0, 1]);
}

#[test]
fn json_outputs_parse() {
    let path = fixture_file();
    let p = path.to_str().unwrap();
    for cmd in [
        vec!["validate", p],
        vec!["approx", p],
        vec!["approx", p, "--witt-approx"],
        vec!["obstructions", p],
        vec!["homology", p, "--witt-approx"],
        vec!["signature", p],
    ] {
        let args: Vec<&str> = ["--format", "json"].into_iter().chain(cmd.iter().copied()).collect();
        let o = isx(&args, None);
        assert_eq!(o.status.code(), Some(0), "{cmd:?}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{cmd:?}: {e}"));
        assert!(v.is_object(), "{cmd:?}");
    }
    let o = isx(&["--format", "json", "signature", p], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equal"], serde_json::Value::Bool(true));
    assert_eq!(v["sigma_ix"], 0);
}

#[test]
fn missing_file() {
    let o = isx(&["signature", "/nonexistent/missing.json"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.json"));
}

#[test]
fn malformed_json_reports_location() {
    let path = tmp("bad.json");
    std::fs::write(&path, "{\n  \"name\": 3\n}").unwrap();
    let o = isx(&["validate", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn usage_errors() {
    assert_eq!(isx(&["validate", "x.json", "--bogus"], None).status.code(), Some(2));
    assert_eq!(isx(&["fixture", "torus"], None).status.code(), Some(2));
    assert_eq!(isx(&["gen", "--seed", "x"], None).status.code(), Some(2));
    assert_eq!(isx(&["--help"], None).status.code(), Some(0));
}

#[test]
fn generator_is_deterministic_and_valid() {
    let a = isx(&["gen", "--seed", "5", "--dimension", "8", "--adversarial"], None);
    let b = isx(&["gen", "--seed", "5", "--dimension", "8", "--adversarial"], None);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v = isx(&["validate", "-"], Some(&a.stdout));
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    let s = isx(&["signature", "-"], Some(&a.stdout));
    assert_eq!(s.status.code(), Some(0), "{}", stderr(&s));

    let odd = isx(&["gen", "--seed", "1", "--dimension", "5"], None);
    assert_eq!(odd.status.code(), Some(1));
}

#[test]
fn obstructed_input_is_reported() {
    for seed in 0..40 {
        let seed = seed.to_string();
        let g = isx(&["gen", "--seed", &seed, "--dimension", "4", "--adversarial"], None);
        let o = isx(&["--format", "json", "obstructions", "-"], Some(&g.stdout));
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        if v["all_vanish"] == false {
            let w = isx(&["--format", "json", "obstructions", "-", "--witt-approx"], Some(&g.stdout));
            let wv: serde_json::Value = serde_json::from_str(&stdout(&w)).unwrap();
            assert_eq!(wv["all_vanish"], true, "{wv}");
            return;
        }
    }
    panic!("no obstructed instance among 40 adversarial seeds");
}
