use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coauthor-rank"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn two_authors_tie() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write(dir.path(), "e.tsv", "Glanzel, W\tSchubert, A\t2\n");
    let out = run(&["rank", "--edges", edges.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# ranking\nrank,author,score\n1,\"Glanzel, W\",0.5\n1,\"Schubert, A\",0.5\n"));
}

#[test]
fn zero_damping_reproduces_citation_shares() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write(dir.path(), "e.tsv", "A\tB\nB\tC\n");
    let cites = write(dir.path(), "c.tsv", "A\t10\nB\t30\nC\t60\n");
    let out = run(&[
        "rank",
        "--edges",
        edges.to_str().unwrap(),
        "--citations",
        cites.to_str().unwrap(),
        "--teleport",
        "citations",
        "--damping",
        "0",
        "--format",
        "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("rank\tauthor\tscore\n1\tC\t0.6\n2\tB\t0.3\n3\tA\t0.1\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write(dir.path(), "e.tsv", "A\tB\t1\nB\tC\t5\nC\tD\t1\n");
    let e = edges.to_str().unwrap();

    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["rank"]).status.code(), Some(3));
    assert_eq!(
        run(&["rank", "--edges", e, "--damping", "1"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["rank", "--edges", e, "--mode", "sideways"]).status.code(),
        Some(3)
    );

    let missing = run(&["rank", "--edges", "/nonexistent/e.tsv"]);
    assert_eq!(missing.status.code(), Some(1));
    let line = stderr(&missing);
    let json: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(json["error"]["stage"], "parse");
    assert_eq!(json["error"]["kind"], "io_error");

    let stuck = run(&["rank", "--edges", e, "--max-iter", "2"]);
    assert_eq!(stuck.status.code(), Some(2));
    assert!(stderr(&stuck).contains("non_convergence"));

    let no_cites = run(&["correlate", "--edges", e]);
    assert_eq!(no_cites.status.code(), Some(3));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write(dir.path(), "e.tsv", "A\tB\nB\tC\nC\tD\n");
    let config = write(dir.path(), "run.conf", "damping = 0.5\nformat = markdown\n");
    let e = edges.to_str().unwrap();
    let c = config.to_str().unwrap();

    let from_file = stdout(&run(&["rank", "--edges", e, "--config", c]));
    assert!(from_file.starts_with("### run\n"));
    assert!(from_file.contains("| 4 | 0.5 | uniform | weighted |"));

    let overridden = stdout(&run(&[
        "rank",
        "--edges",
        e,
        "--config",
        c,
        "--damping",
        "0.85",
        "--format",
        "csv",
    ]));
    assert!(overridden.starts_with("# run\n"));
    assert!(overridden.contains("4,0.85,uniform,weighted,"));
}

#[test]
fn writes_output_file_and_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write(dir.path(), "e.tsv", "A\tB\nbroken\nB\tC\nX\tY\n");
    let cites = write(dir.path(), "c.tsv", "A\t3\t2,1,1\nB\t9\t5,4\nC\t1\t1\n");
    let awards = write(dir.path(), "w.txt", "B\nNobody\n");
    let pc = write(dir.path(), "pc.tsv", "A\t4\nC\t1\n");
    let report = dir.path().join("report.csv");
    let out = run(&[
        "compare",
        "--edges",
        edges.to_str().unwrap(),
        "--citations",
        cites.to_str().unwrap(),
        "--awards",
        awards.to_str().unwrap(),
        "--extra",
        &format!("pc_member={}", pc.display()),
        "--compare",
        "0.85",
        "-o",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let warnings = stderr(&out);
    assert!(warnings.contains("warning: ") && warnings.contains("line 2"));
    assert!(warnings.contains("Nobody"));

    let text = std::fs::read_to_string(report).unwrap();
    assert!(text.contains("author,PR_W(0.85),PR(0.85),citations,h_index,pc_member,winner\n"));
    assert!(text.contains("# prefix_recall\n"));
    assert!(text.contains("citations,1,1,1\n"));
    assert!(text.contains("# unmatched_winners\nauthor\nNobody\n"));
}

#[test]
fn every_command_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut edges = String::new();
    let mut cites = String::new();
    for i in 0..40 {
        edges.push_str(&format!("a{i:02}\ta{:02}\t{}\n", (i + 1) % 40, 1 + i % 3));
        edges.push_str(&format!("a{i:02}\ta{:02}\t1\n", (i * 7 + 3) % 40));
        cites.push_str(&format!("a{i:02}\t{}\n", (i * 37) % 101));
    }
    let edges = write(dir.path(), "e.tsv", &edges);
    let cites = write(dir.path(), "c.tsv", &cites);
    for cmd in [
        "component",
        "rank",
        "sweep",
        "correlate",
        "fit",
        "deltas",
        "compare",
    ] {
        let out = run(&[
            cmd,
            "--edges",
            edges.to_str().unwrap(),
            "--citations",
            cites.to_str().unwrap(),
            "--levels",
            "10,20",
        ]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", stderr(&out));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn sweep_output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut edges = String::new();
    for i in 0..50 {
        edges.push_str(&format!("n{i:02}\tn{:02}\t{}\n", (i + 1) % 50, 1 + i % 4));
        edges.push_str(&format!("n{i:02}\tn{:02}\t2\n", (i * 11 + 5) % 50));
    }
    let edges = write(dir.path(), "e.tsv", &edges);
    let sweep = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_coauthor-rank"))
            .args(["sweep", "--edges", edges.to_str().unwrap()])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        out.stdout
    };
    let single = sweep("1");
    let text = String::from_utf8(single.clone()).unwrap();
    assert_eq!(text.matches("# top_20_d").count(), 8);
    assert!(text.contains("# cross_damping_spearman\n"));
    assert_eq!(single, sweep("4"));
    assert_eq!(single, sweep("4"));
}
