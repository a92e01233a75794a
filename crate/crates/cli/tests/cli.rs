use std::path::PathBuf;
use std::process::{Command, Output};

use idgroupoid::kernel::{parse_telescope, parse_term, parse_type, Signature};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idgroupoid"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn core_file(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", rel]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

#[test]
fn paste_boundary() {
    let o = run(&["paste", "boundary", "[[*],[*,*]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[*,*]\n");
}

#[test]
fn paste_subst_and_enum() {
    let o = run(&["paste", "subst", "[[],[*]]", "[*]", "[[*],[*]]"]);
    assert_eq!(stdout(&o), "[[],[*],[*]]\n");
    let o = run(&[
        "--format", "machine", "paste", "enum", "--dim", "2", "--leaves", "2",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 8);
    // Labels whose faces disagree.
    let o = run(&["paste", "subst", "[[*,*]]", "[[*]]", "[[],[]]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["paste", "boundary", "[[*]"][..],
        &["synth", "[*,*]", "--source", "m7(id1"],
        &["coherence", "nonsense"],
        &["frobnicate"],
        &["sweep", "--dim", "9"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_synthesis_exits_1() {
    let o = run(&[
        "synth",
        "[[*],[*,*]]",
        "--source",
        "m1(m1, id1)",
        "--target",
        "m1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

/// Printed contexts, terms and types parse back and typecheck.
#[test]
fn synthesized_terms_round_trip() {
    let sig = Signature::with_base("A");
    let cases: [&[&str]; 4] = [
        &["synth", "[*,*]"],
        &[
            "synth",
            "[[*],[*,*]]",
            "--source",
            "m1",
            "--target",
            "m1",
            "--order",
            "witness",
        ],
        &[
            "synth",
            "[[*],[*],[*]]",
            "--source",
            "m1(m1, id1)",
            "--target",
            "m1(id1, m1)",
        ],
        &["coherence", "eckmannHiltonProbe"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let out = stdout(&o);
        let tel = parse_telescope(&sig, field(&out, "context")).unwrap();
        let term = parse_term(&sig, tel.names(), field(&out, "term")).unwrap();
        let ty = parse_type(&sig, tel.names(), field(&out, "type")).unwrap();
        sig.check(tel.types(), &term, &ty).unwrap();
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &[
            "synth",
            "[[*],[*,*]]",
            "--source",
            "m1",
            "--target",
            "m1",
            "--normalize",
        ][..],
        &[
            "--format",
            "machine",
            "sweep",
            "--dim",
            "2",
            "--leaves",
            "3",
            "--depth",
            "1",
            "--verbose",
        ],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn sweep_passes_and_sequential_agrees() {
    let o = run(&["sweep", "--dim", "2", "--leaves", "3", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let par = stdout(&o);
    assert!(par.starts_with("PASS sweep"), "{par}");
    let o = run(&[
        "sweep",
        "--dim",
        "2",
        "--leaves",
        "3",
        "--depth",
        "1",
        "--sequential",
    ]);
    assert_eq!(stdout(&o), par);
}

#[test]
fn check_corpus_and_golden() {
    let o = run(&[
        "check",
        "--const",
        "a0=A",
        &core_file("data/kernel_corpus.txt"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["check", &core_file("data/kernel_rejects.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("FAIL judgement"))
            .count()
            >= 8
    );
    let o = run(&["check", &core_file("golden/operations.txt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_globular() {
    let dir = std::env::temp_dir().join(format!("idgroupoid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    let bad = dir.join("bad.txt");
    std::fs::write(&good, "0 a - -\n0 b - -\n1 f a b\n1 g a b\n2 u f g\n").unwrap();
    std::fs::write(&bad, "0 a - -\n0 b - -\n1 f a b\n1 g b a\n2 u f g\n").unwrap();
    assert_eq!(
        run(&["check", "--globular", good.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let o = run(&["check", "--globular", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL globular u"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("idgroupoid-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cli.conf");
    std::fs::write(
        &cfg,
        "# defaults\nformat = machine\ndim = 1\nleaves = 2\nbase = B\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["--config", c, "paste", "enum"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 3);
    let o = run(&[
        "--config", c, "--format", "text", "paste", "enum", "--leaves", "1",
    ]);
    assert_eq!(stdout(&o), "[]\n[*]\n");
    let o = run(&["--config", c, "synth", "[*]"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["type"], "Id(B, x0, x1)");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(
        run(&["--config", c, "paste", "enum"]).status.code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
