use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn samples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn annotate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annotate"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn p1_table() {
    let mc = samples().join("p1.mc");
    let o = annotate(&[p(&mc), "--ia", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for s in 0..3 {
        assert!(text.contains(&format!("{s}  keep: x   hide: y\n")));
    }
    for s in 3..5 {
        assert!(text.contains(&format!("{s}  keep: -   hide: x,y\n")));
    }
}

#[test]
fn outputs_are_deterministic_and_independent_of_the_oracle() {
    let aut = samples().join("p1.aut");
    let a = annotate(&[p(&aut), "--ia", "2", "--format", "json"]);
    let b = annotate(&[p(&aut), "--ia", "2", "--format", "json"]);
    let c = annotate(&[p(&aut), "--ia", "2", "--format", "json", "--oracle"]);
    let d = annotate(&[p(&aut), "--ia", "2", "--format", "json", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(a.stdout, d.stdout);
    assert_eq!(c.status.code(), Some(0));
}

#[test]
fn empty_lts() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("empty.aut");
    fs::write(&path, "des (0, 0, 1)\n").unwrap();
    let o = annotate(&[p(&path), "--ia", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "# IA1  universe: -\n0  keep: -   hide: -\n");
}

#[test]
fn artifacts() {
    let dir = TempDir::new().unwrap();
    let blk = dir.path().join("p1.blk");
    let aut = dir.path().join("p1.aut");
    let mc = samples().join("p1.mc");
    let o = annotate(&[
        p(&mc),
        "--emit-blk",
        p(&blk),
        "--blk-eval",
        "x",
        "--emit-aut",
        p(&aut),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&aut).unwrap(),
        fs::read_to_string(samples().join("p1.aut")).unwrap()
    );
    let blk = fs::read_to_string(&blk).unwrap();
    assert!(blk.starts_with("block mu B is\n"));
    assert!(blk.contains("Y4_x = < \"ASSIGN y x\" > Y1_y"));
    assert!(blk.ends_with("eval B:Y1_x\n"));
}

#[test]
fn diagnose_appends_dot() {
    let mc = samples().join("p1.mc");
    let o = annotate(&[p(&mc), "--diagnose", "0:x"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let dot = &text[text.find("digraph").unwrap()..];
    assert!(dot.contains("\"Y_0_x\" -> TRUE;"));
}

#[test]
fn random_instances_pass_the_oracle() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("random.aut");
    // small linear congruential walk over label shapes
    let labels = [
        "i",
        "\"BOOL a\"",
        "\"ASSERT b\"",
        "\"ASSIGN a b\"",
        "\"ASSIGN b a\"",
        "\"ASSIGN c\"",
    ];
    let mut seed: u64 = 7;
    for _ in 0..20 {
        let n = 6;
        let mut lines = Vec::new();
        for _ in 0..12 {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let (f, l, t) = (
                (seed >> 33) % n,
                (seed >> 40) as usize % labels.len(),
                (seed >> 50) % n,
            );
            lines.push(format!("({f}, {}, {t})", labels[l]));
        }
        fs::write(
            &path,
            format!("des (0, {}, {n})\n{}\n", lines.len(), lines.join("\n")),
        )
        .unwrap();
        for ia in ["1", "2", "3"] {
            let o = annotate(&[p(&path), "--ia", ia, "--oracle"]);
            assert_eq!(
                o.status.code(),
                Some(0),
                "{}",
                String::from_utf8_lossy(&o.stderr)
            );
        }
        let o = annotate(&[p(&path), "--ia", "4", "--property-vars", "a", "--oracle"]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let mc = samples().join("p1.mc");
    let broken = dir.path().join("broken.mc");
    fs::write(&broken, "int x;\nx = z;\n").unwrap();
    let o = annotate(&[p(&broken)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:5"));

    let bad_aut = dir.path().join("bad.aut");
    fs::write(&bad_aut, "des (0, 1, 2)\n(0, \"JUMP x\", 1)\n").unwrap();
    assert_eq!(annotate(&[p(&bad_aut)]).status.code(), Some(1));
    assert_eq!(
        annotate(&[p(&dir.path().join("missing.mc"))]).status.code(),
        Some(1)
    );
    assert_eq!(
        annotate(&[p(&mc), "--ia", "4", "--property-vars", "q"])
            .status
            .code(),
        Some(1)
    );

    assert_eq!(annotate(&[p(&mc), "--ia", "5"]).status.code(), Some(64));
    assert_eq!(
        annotate(&[p(&mc), "--property-vars", "x"]).status.code(),
        Some(64)
    );
    assert_eq!(
        annotate(&[p(&mc), "--diagnose", "zero"]).status.code(),
        Some(64)
    );
    assert_eq!(annotate(&[p(&mc), "--bogus"]).status.code(), Some(64));
    assert_eq!(
        annotate(&[p(&dir.path().join("x.txt"))]).status.code(),
        Some(64)
    );
    assert_eq!(annotate(&["--help"]).status.code(), Some(0));

    let as_aut = annotate(&[p(&mc), "--kind", "aut"]);
    assert_eq!(as_aut.status.code(), Some(1));
}
