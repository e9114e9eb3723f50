use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn geomrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geomrec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn classify_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "z.txt", "<a | >\n");
    let out = geomrec(&["classify", &f, "--oracle", "abelian", "--budget", "200000", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["overall"]["Geometry"], "S2xR");
    let s2xr = &v["classes"][1]["certificate"];
    assert_eq!(s2xr["side"], "member");
    assert_eq!(s2xr["kind"], "iso");
    assert!(s2xr["basis"].as_str().unwrap().contains("Z"));
    assert_eq!(s2xr["promises_used"][0], "oracle-sound");
}

#[test]
fn undecided_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f2.txt", "<a,b | >");
    let out = geomrec(&["classify", &f, "--oracle", "free", "--budget", "1000000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("overall: Undecided"));
}

#[test]
fn not_geometric_with_complete_reps() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f2.txt", "<a,b | >");
    let reps = write(dir.path(), "reps.json", "[]");
    let out = geomrec(&[
        "classify", &f, "--oracle", "free", "--budget", "1000000", "--reps", &reps, "--reps-complete",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corpus_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z.txt", "<a | >");
    let good = write(dir.path(), "good.manifest", "z.txt abelian - 100000 S2xR\n");
    let out = geomrec(&["corpus", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1/1 rows match"));
    let bad = write(dir.path(), "bad.manifest", "z.txt abelian - 100000 Nil\n");
    assert_eq!(geomrec(&["corpus", &bad]).status.code(), Some(1));
    let empty = write(dir.path(), "empty.manifest", "# nothing\n");
    let out = geomrec(&["corpus", &empty]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0/0 rows match"));
}

#[test]
fn word_problem() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "g.txt", "<a,b,z | [a,b] z^-3, [a,z], [b,z]>");
    let pc = write(
        dir.path(),
        "g.json",
        r#"{"generators": ["a","b","z"], "relative_orders": [0,0,0],
            "conjugates": [{"by":0,"gen":1,"value":[0,1,-3]},{"by":0,"gen":1,"value":[0,1,3],"inverse":true}]}"#,
    );
    let oracle = format!("pc:{pc}");
    let out = geomrec(&["wp", &f, "--oracle", &oracle, "[a,b]"]);
    assert_eq!(stdout(&out).trim(), "nontrivial");
    let out = geomrec(&["wp", &f, "--oracle", &oracle, "[a,b] z^-3"]);
    assert_eq!(stdout(&out).trim(), "trivial");
}

#[test]
fn utility_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f2.txt", "<a,b | >");
    let out = geomrec(&["subgroups", &f, "--index", "2"]);
    assert!(stdout(&out).contains("index 2: 3 classes"));
    let g = write(dir.path(), "h.txt", "<a,b | a^4, b^6>");
    assert_eq!(stdout(&geomrec(&["abelianize", &g])).trim(), "Z/2 x Z/12");
    let out = geomrec(&["repvar", &f]);
    // header plus nine constraints per generator
    assert_eq!(stdout(&out).lines().count(), 1 + 18);
    let out = geomrec(&["nq2", &f]);
    assert!(stdout(&out).contains("hirsch"));
}

#[test]
fn errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "z.txt", "<a | >");
    let out = geomrec(&["classify", &f, "--oracle", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = geomrec(&["classify", &f, "--oracle", "free", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = geomrec(&["abelianize", "/nonexistent/file"]);
    assert_eq!(out.status.code(), Some(1));
}
