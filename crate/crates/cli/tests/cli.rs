use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

const QDISCO: &str = env!("CARGO_BIN_EXE_qdisco");

fn cx_params() -> String {
    let cx = [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0];
    cx.iter()
        .map(|x| format!("{x} 0"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Alice and Bob, an identity and a flipping adjective, the dense pair
/// red/big and a CNOT verb.
fn fixture() -> TempDir {
    let dir = TempDir::new().unwrap();
    let emb = format!(
        "wire_dim\t2\nprecision\t52\n\
         word\tAlice\tPN\t1\teuler\t1\t0 0 0\n\
         word\tBob\tPN\t1\teuler\t1\t0 0 0\n\
         word\thappy\tADJ\t1\teuler\t1\t0 0 0\n\
         word\tsad\tADJ\t1\teuler\t1\t0 {PI} 0\n\
         word\tred\tADJ\t1\teuler\t1\t{} 0 0\n\
         word\tbig\tADJ\t1\teuler\t1\t0 {} 0\n\
         word\tlikes\tTV\t2\tdense\t1\t{}\n",
        2f64.sqrt(),
        3f64.sqrt(),
        cx_params()
    );
    let files = [
        ("emb.tsv", emb.as_str()),
        ("run.toml", "[paths]\nembeddings = \"emb.tsv\"\n"),
        ("context.txt", "# one sentence\nAlice is happy.\n"),
        ("happy.txt", "Alice is happy.\n"),
        ("sad.txt", "Alice is sad.\n"),
        ("empty.txt", "# nothing here\n"),
    ];
    for (name, body) in files {
        std::fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

fn qdisco(dir: &Path, args: &[&str]) -> i32 {
    let out = Command::new(QDISCO)
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    out.status.code().expect("exited normally")
}

fn read(p: PathBuf) -> String {
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// CSV body after the run line.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    r.records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&read(dir.join("manifest.json"))).unwrap()
}

#[test]
fn qa_on_alice_happy_sad() {
    let d = fixture();
    let code = qdisco(
        d.path(),
        &[
            "--config",
            "run.toml",
            "--out",
            "out",
            "qa",
            "context.txt",
            "happy.txt",
            "sad.txt",
            "--about",
            "Alice",
        ],
    );
    assert_eq!(code, 0);
    let rows = csv_rows(&read(d.path().join("out/qa.csv")));
    assert_eq!(rows.len(), 2);
    let score = |i: usize| rows[i][3].parse::<f64>().unwrap();
    assert!((score(0) - 1.0).abs() < 1e-12);
    assert!(score(1).abs() < 1e-12);
    assert!(rows.iter().all(|r| r[6] == "1"));
}

#[test]
fn check_embeddings_passes_on_cx_and_dense_rotations() {
    let d = fixture();
    assert_eq!(
        qdisco(
            d.path(),
            &["--config", "run.toml", "--out", "out", "check-embeddings"]
        ),
        0
    );
    let report = read(d.path().join("out/check.txt"));
    assert!(report.lines().any(|l| l == "overall\tpass"), "{report}");
    assert!(report
        .lines()
        .any(|l| l.starts_with("verb\tlikes\tentangling")));
    assert!(report
        .lines()
        .any(|l| l.starts_with("pair\tbig\tred\tdense")));
}

#[test]
fn check_embeddings_reports_failure_with_task_exit() {
    let d = fixture();
    std::fs::write(
        d.path().join("weak.tsv"),
        "wire_dim\t2\nprecision\t52\nword\tfoo\tADJ\t1\teuler\t1\t0 0 0\nword\tbar\tADJ\t1\teuler\t1\t1 0 0\n",
    )
    .unwrap();
    std::fs::write(
        d.path().join("weak.toml"),
        "[paths]\nembeddings = \"weak.tsv\"\n",
    )
    .unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &["--config", "weak.toml", "--out", "out", "check-embeddings"]
        ),
        3
    );
    let report = read(d.path().join("out/check.txt"));
    assert!(report.lines().any(|l| l == "overall\tfail"));
}

#[test]
fn parse_then_compile_empty_corpus() {
    let d = fixture();
    assert_eq!(qdisco(d.path(), &["--out", "p", "parse", "empty.txt"]), 0);
    let circ = read(d.path().join("p/empty.circ"));
    let body: Vec<&str> = circ.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["WIRES", "IN", "OUT"]);
    assert_eq!(
        qdisco(d.path(), &["--out", "c", "compile", "p/empty.circ"]),
        0
    );
    let dump = read(d.path().join("c/empty.dump"));
    assert!(dump.lines().any(|l| l == "qubits\t0"), "{dump}");
    assert!(!dump.lines().any(|l| l.starts_with("register")));
}

#[test]
fn compiled_corpus_matches_compiled_circuit_file() {
    let d = fixture();
    assert_eq!(
        qdisco(
            d.path(),
            &["--config", "run.toml", "--out", "p", "parse", "context.txt"]
        ),
        0
    );
    assert_eq!(
        qdisco(
            d.path(),
            &[
                "--config",
                "run.toml",
                "--out",
                "a",
                "compile",
                "context.txt"
            ]
        ),
        0
    );
    assert_eq!(
        qdisco(
            d.path(),
            &[
                "--config",
                "run.toml",
                "--out",
                "b",
                "compile",
                "p/context.circ"
            ]
        ),
        0
    );
    let body = |p: &str| {
        read(d.path().join(p))
            .lines()
            .skip(1)
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(body("a/context.dump"), body("b/context.dump"));
}

#[test]
fn identical_runs_write_identical_artifacts() {
    let d = fixture();
    let args = |out: &'static str, seed: &'static str| {
        vec![
            "--config",
            "run.toml",
            "--mode",
            "sampled",
            "--seed",
            seed,
            "--out",
            out,
            "qa",
            "context.txt",
            "happy.txt",
            "sad.txt",
            "--about",
            "Alice",
        ]
    };
    assert_eq!(qdisco(d.path(), &args("r1", "7")), 0);
    assert_eq!(qdisco(d.path(), &args("r2", "7")), 0);
    assert_eq!(qdisco(d.path(), &args("r3", "8")), 0);
    let a = read(d.path().join("r1/qa.csv"));
    assert_eq!(a, read(d.path().join("r2/qa.csv")));
    assert_ne!(a, read(d.path().join("r3/qa.csv")));
    let rows = csv_rows(&a);
    assert!(rows
        .iter()
        .all(|r| r[2] == "sampled" && r[5].parse::<u64>().unwrap() > 0));
}

#[test]
fn artifacts_carry_the_manifest_hash() {
    let d = fixture();
    assert_eq!(
        qdisco(
            d.path(),
            &[
                "--config",
                "run.toml",
                "--out",
                "out",
                "sample-corpus",
                "--k",
                "3",
                "--count",
                "3"
            ]
        ),
        0
    );
    let m = manifest(&d.path().join("out"));
    let hash = m["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert_eq!(m["exit_code"], 0);
    let artifacts = m["artifacts"].as_array().unwrap();
    assert_eq!(artifacts.len(), 4);
    for a in artifacts {
        let text = read(d.path().join("out").join(a.as_str().unwrap()));
        assert_eq!(text.lines().next().unwrap(), format!("# run: {hash}"));
    }
    let rows = csv_rows(&read(d.path().join("out/samples.csv")));
    assert!(rows.iter().all(|r| r[3] == "3" && r[6] == "true"));
}

#[test]
fn bad_config_exits_2_and_still_writes_a_manifest() {
    let d = fixture();
    assert_eq!(
        qdisco(d.path(), &["--epsilon", "2", "--out", "out", "count-gates"]),
        2
    );
    let m = manifest(&d.path().join("out"));
    assert_eq!(m["exit_code"], 2);
    assert!(m["error"].as_str().unwrap().contains("epsilon"));

    std::fs::write(d.path().join("typo.toml"), "[task]\nepsilonn = 0.1\n").unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &["--config", "typo.toml", "--out", "out", "count-gates"]
        ),
        2
    );
    std::fs::write(d.path().join("dim.toml"), "[dims]\nwire_dim = 3\n").unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &["--config", "dim.toml", "--out", "out", "count-gates"]
        ),
        2
    );
    std::fs::write(
        d.path().join("bad.tsv"),
        "wire_dim\t2\nprecision\t8\nword\tAlice\tPN\t1\teuler\t1\t0 0\n",
    )
    .unwrap();
    std::fs::write(
        d.path().join("bad.toml"),
        "[paths]\nembeddings = \"bad.tsv\"\n",
    )
    .unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &["--config", "bad.toml", "--out", "out", "check-embeddings"]
        ),
        2
    );
}

#[test]
fn flags_override_the_config_file() {
    let d = fixture();
    std::fs::write(
        d.path().join("s.toml"),
        "[paths]\nembeddings = \"emb.tsv\"\n[task]\nseed = 3\nepsilon = 0.2\n",
    )
    .unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &[
                "--config",
                "s.toml",
                "--seed",
                "11",
                "--out",
                "out",
                "arc",
                "context.txt",
                "--noun",
                "Alice"
            ]
        ),
        0
    );
    let m = manifest(&d.path().join("out"));
    assert_eq!(m["seed"], 11);
    assert_eq!(m["config"]["task"]["epsilon"], 0.2);
}

#[test]
fn mixed_on_both_sides_exits_4() {
    let d = fixture();
    // Alice and Bob are prepared and Bob is discarded
    let circ = "WIRES Alice Bob\nIN\nSTATE Alice -> 0\nSTATE Bob -> 1\nDISCARD 1 ->\nOUT 0\n";
    std::fs::write(d.path().join("a.circ"), circ).unwrap();
    std::fs::write(d.path().join("b.circ"), circ).unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &[
                "--config",
                "run.toml",
                "--out",
                "out",
                "similarity",
                "a.circ",
                "b.circ"
            ]
        ),
        4
    );
    assert_eq!(manifest(&d.path().join("out"))["exit_code"], 4);
}

#[test]
fn unknown_word_is_a_task_error() {
    let d = fixture();
    std::fs::write(d.path().join("odd.txt"), "Carol is happy.\n").unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &["--config", "run.toml", "--out", "out", "parse", "odd.txt"]
        ),
        3
    );
}

#[test]
fn reduction_outputs_answer_the_source_circuit() {
    let d = fixture();
    // X then CNOT leaves qubit 0 in |1⟩, so the second question should win
    std::fs::write(d.path().join("c.txt"), "qubits 2\nX 0\nVERB 0 1\n").unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &["--config", "run.toml", "--out", "r", "reduce", "c.txt", "--solve"]
        ),
        0
    );
    let report = read(d.path().join("r/reduction.txt"));
    assert!(report.lines().any(|l| l == "promise\tOne"), "{report}");
    assert!(report.lines().any(|l| l == "expected\t2"));
    let rows = csv_rows(&read(d.path().join("r/qa.csv")));
    assert_eq!(rows[0][6], "2");

    // the written files are a complete instance on their own
    std::fs::write(
        d.path().join("r.toml"),
        "[paths]\nembeddings = \"r/embeddings.tsv\"\nvocabulary = \"r/vocabulary.tsv\"\n",
    )
    .unwrap();
    let queried = report
        .lines()
        .find_map(|l| l.strip_prefix("queried\t"))
        .unwrap();
    let mut args = vec![
        "--config",
        "r.toml",
        "--out",
        "q",
        "qa",
        "r/context.txt",
        "r/question_1.txt",
        "r/question_2.txt",
    ];
    for n in queried.split(',') {
        args.extend(["--about", n]);
    }
    let code = qdisco(d.path(), &args);
    assert_eq!(code, 0);
    let again = csv_rows(&read(d.path().join("q/qa.csv")));
    for (a, b) in rows.iter().zip(&again) {
        let (x, y) = (a[3].parse::<f64>().unwrap(), b[3].parse::<f64>().unwrap());
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
    assert_eq!(again[0][6], "2");
}

#[test]
fn synth_oracle_verifies_against_compilation() {
    let d = fixture();
    let corpus = d.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    std::fs::write(corpus.join("a.txt"), "Alice is red.\nAlice likes Bob.\n").unwrap();
    std::fs::write(corpus.join("b.txt"), "Bob likes Alice.\n").unwrap();
    std::fs::write(
        d.path().join("rot.tsv"),
        "wire_dim\t2\nprecision\t6\n\
         word\tAlice\tPN\t1\teuler\t1\t0.5 1 1.5\n\
         word\tBob\tPN\t1\teuler\t1\t2 0.25 1\n\
         word\tred\tADJ\t1\teuler\t1\t0.75 0.5 0.25\n\
         word\tlikes\tTV\t2\tsim9\t1\t1.25 0.5\n",
    )
    .unwrap();
    // these angles are off the table grid c·π/2^6, so fidelity is held to the rounding bound
    std::fs::write(
        d.path().join("rot.toml"),
        "[paths]\nembeddings = \"rot.tsv\"\n[dims]\nprecision = 6\n",
    )
    .unwrap();
    assert_eq!(
        qdisco(
            d.path(),
            &[
                "--config",
                "rot.toml",
                "--out",
                "w",
                "synth-oracle",
                "corpus"
            ]
        ),
        0
    );
    let rows = csv_rows(&read(d.path().join("w/verification.csv")));
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let fid: f64 = r[1].parse().unwrap();
        let clean: f64 = r[2].parse().unwrap();
        let bound: f64 = r[3].parse().unwrap();
        assert!(fid >= bound - 1e-9 && clean > 1.0 - 1e-10, "{r:?}");
    }
    let counts = read(d.path().join("w/gate_counts.txt"));
    assert!(counts
        .lines()
        .any(|l| l.starts_with("predict") && l.ends_with("ok")));
}

#[test]
fn count_gates_writes_exact_primitive_counts() {
    let d = fixture();
    assert_eq!(
        qdisco(
            d.path(),
            &[
                "--out",
                "g",
                "count-gates",
                "--nouns",
                "2,4,8",
                "--boxes",
                "1,2,3"
            ]
        ),
        0
    );
    let prim = csv_rows(&read(d.path().join("g/primitives.csv")));
    assert!(!prim.is_empty());
    assert!(prim.iter().all(|r| r[6] == "true"), "{prim:?}");
    let w = csv_rows(&read(d.path().join("g/oracle_w_sweep.csv")));
    let totals: Vec<u64> = w.iter().take(3).map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(totals[1] - totals[0], totals[2] - totals[1]);
}
