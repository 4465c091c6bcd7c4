//! Command-line surface and the subcommand implementations.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use qdiscocirc::compiler::{compile_with, CompiledText, WordEmbeddingSet};
use qdiscocirc::hardness::{
    build_reduction, check_embeddings, reduction_approximator, ReductionParams, DEFAULT_BUDGET,
};
use qdiscocirc::ir::{hapax_fraction, sample_dk, validate, TextCircuit};
use qdiscocirc::oracle::{
    build_qram_tables_with, corpus_dims, fit_growth, fit_linear, gate_count, multiplexer_sweep,
    oracle_w_sweep, synth_multiplexer, synth_oracle_w, synth_pcrz, synth_unary_iteration,
    verify_oracle_w, AnsatzFamily, MuxVariant, OracleDims, Primitive,
};
use qdiscocirc::parser::{parse_text, Vocabulary};
use qdiscocirc::qsim::Simulator;
use qdiscocirc::tasks::{character_arc, question_answer, text_similarity, QaInstance};

use crate::config::{ModeName, Overrides, RunConfig};
use crate::formats::{
    corpus_lines, dump_circuit, dump_compiled, parse_circuit, parse_embeddings,
    parse_reduction_circuit, parse_vocabulary, print_circuit, print_embeddings, print_vocabulary,
};
use crate::manifest::Run;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qdisco",
    version,
    about = "Text circuits, tasks, hardness checks and oracle synthesis"
)]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeName>,
    /// Output directory (default `out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Parse a corpus file, or every `.txt` file in a directory, into
    /// circuit files.
    Parse { input: PathBuf },
    /// Compile circuit (`.circ`) or corpus files to gate-level dumps.
    Compile { input: PathBuf },
    /// Similarity of two texts.
    Similarity { first: PathBuf, second: PathBuf },
    /// Score each question against the context and pick the best.
    Qa {
        context: PathBuf,
        #[arg(required = true)]
        questions: Vec<PathBuf>,
        /// Nouns the questions are about; repeat for several.
        #[arg(long, required = true)]
        about: Vec<String>,
    },
    /// Character arc of one noun, or from one noun to another.
    Arc {
        text: PathBuf,
        #[arg(long, required = true, num_args = 1)]
        noun: Vec<String>,
        #[arg(long)]
        traced: bool,
    },
    /// Check the embeddings against the hardness conditions.
    CheckEmbeddings {
        /// Group elements to enumerate per adjective pair.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Turn a circuit into a question-answering instance over the
    /// configured embeddings.
    Reduce {
        circuit: PathBuf,
        /// Word-table covering radius for the adjective approximations.
        #[arg(long, default_value_t = 0.004)]
        approx_epsilon: f64,
        #[arg(long, default_value_t = 1 << 17)]
        max_words: usize,
        /// Allowed score error; defaults to 1/30.
        #[arg(long)]
        epsilon_prime: Option<f64>,
        /// Also answer the instance with the configured mode.
        #[arg(long)]
        solve: bool,
    },
    /// Draw random text circuits on `k` nouns.
    SampleCorpus {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Build oracle W over every text in a directory and count its gates.
    SynthOracle { corpus: PathBuf },
    /// Gate-count sweeps and growth fits for the oracle primitives.
    CountGates {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4, 8, 16, 32])]
        nouns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4])]
        wire_dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3, 4, 5, 6, 8])]
        boxes: Vec<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Compile { .. } => "compile",
            Command::Similarity { .. } => "similarity",
            Command::Qa { .. } => "qa",
            Command::Arc { .. } => "arc",
            Command::CheckEmbeddings { .. } => "check-embeddings",
            Command::Reduce { .. } => "reduce",
            Command::SampleCorpus { .. } => "sample-corpus",
            Command::SynthOracle { .. } => "synth-oracle",
            Command::CountGates { .. } => "count-gates",
        }
    }
}

/// Run one command, write its manifest and return the exit status.
pub fn run(cli: Cli) -> i32 {
    let o = Overrides {
        seed: cli.seed,
        epsilon: cli.epsilon,
        delta: cli.delta,
        mode: cli.mode,
        out: cli.out.clone(),
    };
    let args = serde_json::to_value(&cli.command).expect("commands serialize");
    let (run, result) = match RunConfig::load(cli.config.as_deref(), &o) {
        Ok(config) => {
            let mut run = Run::new(cli.command.name(), args, config);
            let r = dispatch(&cli.command, &mut run);
            (run, r)
        }
        Err(e) => {
            // still leave a manifest behind, under whatever output dir the
            // flags name
            let mut config = RunConfig::default();
            config.paths.out = cli.out.clone();
            (Run::new(cli.command.name(), args, config), Err(e))
        }
    };
    if let Err(e) = &result {
        eprintln!("qdisco: {e}");
    }
    if let Err(e) = run.finish(&result) {
        eprintln!("qdisco: could not write the manifest: {e}");
        return result.err().unwrap_or(e).exit_code();
    }
    result.map_or_else(|e| e.exit_code(), |_| 0)
}

fn dispatch(cmd: &Command, run: &mut Run) -> Result<(), CliError> {
    match cmd {
        Command::Parse { input } => parse(run, input),
        Command::Compile { input } => compile_cmd(run, input),
        Command::Similarity { first, second } => similarity(run, first, second),
        Command::Qa {
            context,
            questions,
            about,
        } => qa(run, context, questions, about),
        Command::Arc { text, noun, traced } => arc(run, text, noun, *traced),
        Command::CheckEmbeddings { budget } => check(run, *budget),
        Command::Reduce {
            circuit,
            approx_epsilon,
            max_words,
            epsilon_prime,
            solve,
        } => reduce(
            run,
            circuit,
            *approx_epsilon,
            *max_words,
            *epsilon_prime,
            *solve,
        ),
        Command::SampleCorpus { k, count } => sample(run, *k, *count),
        Command::SynthOracle { corpus } => synth(run, corpus),
        Command::CountGates {
            nouns,
            wire_dims,
            boxes,
        } => count_gates(run, nouns, wire_dims, boxes),
    }
}

// ---------------------------------------------------------------------------
// input loading

fn with_path<T>(p: &Path, r: Result<T, crate::formats::FormatError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
}

/// The configured embeddings, or an empty set at the configured wire
/// dimension when none are named.
fn embeddings(run: &mut Run) -> Result<WordEmbeddingSet, CliError> {
    match run.config.paths.embeddings.clone() {
        Some(p) => {
            let text = run.read(&p)?;
            let v = with_path(&p, parse_embeddings(&text))?;
            if v.wire_dim != run.config.dims.wire_dim {
                return Err(CliError::Config(format!(
                    "{} has wire_dim {}, config says {}",
                    p.display(),
                    v.wire_dim,
                    run.config.dims.wire_dim
                )));
            }
            Ok(v)
        }
        None => Ok(WordEmbeddingSet::new(run.config.dims.wire_dim, 52)),
    }
}

fn require_embeddings(run: &mut Run) -> Result<WordEmbeddingSet, CliError> {
    if run.config.paths.embeddings.is_none() {
        return Err(CliError::Config("paths.embeddings is not set".into()));
    }
    embeddings(run)
}

/// The configured vocabulary, else the one the embeddings imply.
fn vocabulary(run: &mut Run, v: &WordEmbeddingSet) -> Result<Vocabulary, CliError> {
    match run.config.paths.vocabulary.clone() {
        Some(p) => {
            let text = run.read(&p)?;
            with_path(&p, parse_vocabulary(&text))
        }
        None => Ok(v.vocabulary()),
    }
}

fn is_circuit_file(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "circ")
}

/// A `.circ` file is read as a circuit, anything else as a corpus.
fn load_text(run: &mut Run, p: &Path, vocab: &Vocabulary) -> Result<TextCircuit, CliError> {
    let text = run.read(p)?;
    if is_circuit_file(p) {
        with_path(p, parse_circuit(&text))
    } else {
        parse_text(&corpus_lines(&text), vocab)
            .map_err(|e| CliError::Task(format!("{}: {e}", p.display())))
    }
}

/// `p` itself, or the matching files of directory `p` in name order.
fn input_files(p: &Path, exts: &[&str]) -> Result<Vec<PathBuf>, CliError> {
    if !p.is_dir() {
        if !p.is_file() {
            return Err(CliError::Config(format!("{} does not exist", p.display())));
        }
        return Ok(vec![p.to_path_buf()]);
    }
    let rd = std::fs::read_dir(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
    let mut files: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|f| {
            f.is_file()
                && f.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| exts.contains(&e))
        })
        .collect();
    files.sort();
    Ok(files)
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "text".into())
}

fn name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn compile_text(
    run: &Run,
    c: &TextCircuit,
    v: &WordEmbeddingSet,
) -> Result<CompiledText, CliError> {
    Ok(compile_with(c, v, run.config.dims.d_max)?)
}

fn f(x: f64) -> String {
    format!("{x}")
}

// ---------------------------------------------------------------------------
// subcommands

fn parse(run: &mut Run, input: &Path) -> Result<(), CliError> {
    let files = input_files(input, &["txt"])?;
    let vocab = match run.config.paths.vocabulary.clone() {
        Some(_) => vocabulary(run, &WordEmbeddingSet::new(2, 52))?,
        None => {
            let v = embeddings(run)?;
            v.vocabulary()
        }
    };
    let mut texts = Vec::new();
    for p in &files {
        texts.push((p.clone(), load_text(run, p, &vocab)?));
    }
    let mut rows = Vec::new();
    for (p, c) in &texts {
        let out = format!("{}.circ", stem(p));
        run.write(&out, &print_circuit(c)?)?;
        rows.push(vec![
            name(p),
            out,
            c.nouns().len().to_string(),
            c.nodes().len().to_string(),
        ]);
    }
    run.write_csv(
        "parse.csv",
        &["source", "circuit", "nouns", "generators"],
        &rows,
    )
}

fn compile_cmd(run: &mut Run, input: &Path) -> Result<(), CliError> {
    let files = input_files(input, &["circ", "txt"])?;
    let v = embeddings(run)?;
    let vocab = if files.iter().all(|p| is_circuit_file(p)) {
        Vocabulary::new()
    } else {
        vocabulary(run, &v)?
    };
    let mut texts = Vec::new();
    for p in &files {
        texts.push((p.clone(), load_text(run, p, &vocab)?));
    }
    let mut rows = Vec::new();
    for (p, c) in &texts {
        let ct = compile_text(run, c, &v)?;
        let out = format!("{}.dump", stem(p));
        run.write(&out, &dump_compiled(&ct))?;
        rows.push(vec![
            name(p),
            out,
            ct.circuit.qubit_count.to_string(),
            ct.circuit.gates.len().to_string(),
            ct.is_pure.to_string(),
        ]);
    }
    run.write_csv(
        "compile.csv",
        &["source", "dump", "qubits", "gates", "pure"],
        &rows,
    )
}

fn similarity(run: &mut Run, a: &Path, b: &Path) -> Result<(), CliError> {
    let v = embeddings(run)?;
    let vocab = vocabulary_for(run, &v, &[a, b])?;
    let ta = load_text(run, a, &vocab)?;
    let tb = load_text(run, b, &vocab)?;
    let mode = run.config.mode(run.seed("tasks", "similarity"));
    let s = text_similarity(&ta, &tb, &v, mode, &Simulator::default())?;
    run.write_csv(
        "similarity.csv",
        &["first", "second", "mode", "score", "raw", "shots"],
        &[vec![
            name(a),
            name(b),
            mode.name().into(),
            f(s.value),
            f(s.raw),
            s.shots.to_string(),
        ]],
    )
}

/// Vocabulary only when some input is a corpus file.
fn vocabulary_for(
    run: &mut Run,
    v: &WordEmbeddingSet,
    files: &[&Path],
) -> Result<Vocabulary, CliError> {
    if files.iter().all(|p| is_circuit_file(p)) {
        Ok(Vocabulary::new())
    } else {
        vocabulary(run, v)
    }
}

fn qa(
    run: &mut Run,
    context: &Path,
    questions: &[PathBuf],
    about: &[String],
) -> Result<(), CliError> {
    let v = embeddings(run)?;
    let mut all: Vec<&Path> = vec![context];
    all.extend(questions.iter().map(PathBuf::as_path));
    let vocab = vocabulary_for(run, &v, &all)?;
    let ctx = load_text(run, context, &vocab)?;
    let mut qs = Vec::new();
    for q in questions {
        qs.push(load_text(run, q, &vocab)?);
    }
    let inst = QaInstance {
        context: ctx,
        questions: qs,
        queried: about.to_vec(),
    };
    let mode = run.config.mode(run.seed("tasks", "qa"));
    let r = question_answer(&inst, &v, mode, &Simulator::default())?;
    write_qa(
        run,
        "qa.csv",
        questions.iter().map(|p| name(p)).collect(),
        &r,
    )
}

/// One row per question, 1-based, with the winner marked.
fn write_qa(
    run: &mut Run,
    file: &str,
    sources: Vec<String>,
    r: &qdiscocirc::tasks::TaskResult,
) -> Result<(), CliError> {
    let rows: Vec<Vec<String>> = sources
        .into_iter()
        .enumerate()
        .map(|(i, src)| {
            vec![
                (i + 1).to_string(),
                src,
                r.mode.name().into(),
                f(r.scores[i]),
                f(r.raw[i]),
                r.shots[i].to_string(),
                (r.chosen + 1).to_string(),
                r.below_resolution.map(f).unwrap_or_default(),
            ]
        })
        .collect();
    run.write_csv(
        file,
        &[
            "index",
            "question",
            "mode",
            "score",
            "raw",
            "shots",
            "chosen",
            "below_resolution",
        ],
        &rows,
    )
}

fn arc(run: &mut Run, text: &Path, nouns: &[String], traced: bool) -> Result<(), CliError> {
    let v = embeddings(run)?;
    let vocab = vocabulary_for(run, &v, &[text])?;
    let t = load_text(run, text, &vocab)?;
    let ns: Vec<&str> = nouns.iter().map(String::as_str).collect();
    let score = character_arc(&t, &ns, traced, &v, &Simulator::default())?;
    let last = nouns.last().cloned().unwrap_or_default();
    run.write_csv(
        "arc.csv",
        &["text", "from", "to", "traced", "score"],
        &[vec![
            name(text),
            nouns[0].clone(),
            last,
            traced.to_string(),
            f(score),
        ]],
    )
}

fn check(run: &mut Run, budget: usize) -> Result<(), CliError> {
    let v = require_embeddings(run)?;
    let report = check_embeddings(&v, budget);
    run.write("check.txt", &report.render())?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Task(format!(
            "embeddings fail the hardness conditions: {}",
            report.failures.join("; ")
        )))
    }
}

fn reduce(
    run: &mut Run,
    circuit: &Path,
    approx_epsilon: f64,
    max_words: usize,
    epsilon_prime: Option<f64>,
    solve: bool,
) -> Result<(), CliError> {
    let text = run.read(circuit)?;
    let c = with_path(circuit, parse_reduction_circuit(&text))?;
    let base = require_embeddings(run)?;
    let mut params = ReductionParams {
        epsilon: run.config.task.epsilon,
        ..ReductionParams::default()
    };
    if let Some(e) = epsilon_prime {
        params.epsilon_prime = e;
    }
    let ap = reduction_approximator(&base, approx_epsilon, max_words)?;
    let r = build_reduction(&c, &base, params, &ap)?;

    let lines = |s: &[String]| s.iter().map(|l| format!("{l}\n")).collect::<String>();
    run.write("context.txt", &lines(&r.context))?;
    run.write("question_1.txt", &lines(&r.questions[0]))?;
    run.write("question_2.txt", &lines(&r.questions[1]))?;
    run.write("vocabulary.tsv", &print_vocabulary(&r.vocabulary))?;
    run.write("embeddings.tsv", &print_embeddings(&r.embeddings))?;
    let expected = r
        .promise
        .expected_answer()
        .map_or("none".into(), |i| (i + 1).to_string());
    let report = format!(
        "qubits\t{}\ngates\t{}\nnouns\t{}\nqueried\t{}\nadjectives\t{}\t{}\nverb\t{}\np_zero\t{}\npromise\t{:?}\nexpected\t{expected}\nepsilon\t{}\nepsilon_prime\t{}\nepsilon_prime_bound\t{}\noperator_distance\t{}\nsentences\t{}\n",
        c.qubits,
        c.gates.len(),
        r.nouns.join(","),
        r.instance.queried.join(","),
        r.adjectives[0],
        r.adjectives[1],
        r.verb,
        r.p_zero,
        r.promise,
        params.epsilon,
        r.epsilon_prime,
        params.epsilon_prime,
        r.operator_distance,
        r.context.len(),
    );
    run.write("reduction.txt", &report)?;
    if solve {
        let mode = run.config.mode(run.seed("tasks", "reduce"));
        let res = question_answer(&r.instance, &r.embeddings, mode, &Simulator::default())?;
        write_qa(
            run,
            "qa.csv",
            vec!["question_1.txt".into(), "question_2.txt".into()],
            &res,
        )?;
    }
    Ok(())
}

fn sample(run: &mut Run, k: usize, count: usize) -> Result<(), CliError> {
    let params = run.config.sampler_params();
    let mut rows = Vec::new();
    for i in 0..count {
        let seed = run.seed("sampler", &format!("sample-{i}"));
        let c = sample_dk(k, &params, seed)?;
        let file = format!("sample-{i:04}.circ");
        run.write(&file, &print_circuit(&c)?)?;
        rows.push(vec![
            i.to_string(),
            file,
            seed.to_string(),
            c.count_kind("STATE").to_string(),
            c.count_kind("BOX").to_string(),
            f(hapax_fraction(&c)),
            validate(&c, params.d_max).is_empty().to_string(),
        ]);
    }
    run.write_csv(
        "samples.csv",
        &[
            "index",
            "circuit",
            "seed",
            "states",
            "boxes",
            "hapax_fraction",
            "valid",
        ],
        &rows,
    )
}

fn synth(run: &mut Run, dir: &Path) -> Result<(), CliError> {
    if !dir.is_dir() {
        return Err(CliError::Config(format!(
            "{} is not a directory",
            dir.display()
        )));
    }
    let files = input_files(dir, &["circ", "txt"])?;
    let v = require_embeddings(run)?;
    let vocab = vocabulary_for(
        run,
        &v,
        &files.iter().map(PathBuf::as_path).collect::<Vec<_>>(),
    )?;
    let mut corpus = Vec::new();
    for p in &files {
        let t = load_text(run, p, &vocab)?;
        corpus.push(compile_text(run, &t, &v)?);
    }
    let mut dims = corpus_dims(&corpus, run.config.dims.precision)?;
    if let Some(m) = run.config.synthesis.texts {
        dims.texts = m;
    }
    if let Some(w) = run.config.synthesis.boxes {
        dims.boxes = w;
    }
    let family = AnsatzFamily::from_corpus(&corpus)?;
    let tables = build_qram_tables_with(&corpus, dims, family.clone())?;
    let (qc, lay) = synth_oracle_w(&tables)?;
    let report = gate_count(
        &qc,
        &Primitive::OracleW { dims, family },
        lay.ancillas().len(),
    );

    let range = |r: &std::ops::Range<usize>| format!("{}..{}", r.start, r.end);
    let mut head = format!(
        "texts\t{}\nboxes\t{}\nnouns\t{}\narity\t{}\nwire_dim\t{}\nprecision\t{}\n",
        dims.texts, dims.boxes, dims.nouns, dims.arity, dims.wire_dim, dims.precision
    );
    for (n, r) in [
        ("text_idx", &lay.text_idx),
        ("nouns", &lay.nouns),
        ("idx", &lay.idx),
        ("angle", &lay.angle),
        ("width", &lay.width),
        ("ui", &lay.ui),
    ] {
        head.push_str(&format!("layout\t{n}\t{}\n", range(r)));
    }
    run.write("oracle_w.dump", &(head.clone() + &dump_circuit(&qc)))?;
    let note = "note\tindex register holds ceil(log2 n) multiplexer level bits per argument\n";
    run.write("gate_counts.txt", &(head + &report.render() + note))?;
    let mut rows: Vec<Vec<String>> = report
        .counts
        .iter()
        .map(|(k, c)| vec!["count".into(), k.clone(), c.to_string(), String::new()])
        .collect();
    rows.push(vec![
        "total".into(),
        String::new(),
        report.total.to_string(),
        String::new(),
    ]);
    rows.push(vec![
        "cost".into(),
        String::new(),
        f(report.cost),
        String::new(),
    ]);
    for p in &report.predictions {
        rows.push(vec![
            "predicted".into(),
            p.name.clone(),
            f(p.predicted),
            p.holds().to_string(),
        ]);
    }
    run.write_csv(
        "gate_counts.csv",
        &["kind", "name", "value", "holds"],
        &rows,
    )?;

    let limit = run.config.synthesis.verify_qubits.unwrap_or(16);
    if lay.qubits() <= limit {
        let checks = verify_oracle_w(&tables, &qc, &lay, &corpus, &Simulator::default())?;
        let rows: Vec<Vec<String>> = checks
            .iter()
            .map(|c| {
                vec![
                    name(&files[c.text]),
                    f(c.fidelity),
                    f(c.clean),
                    f(c.rounding_bound),
                ]
            })
            .collect();
        run.write_csv(
            "verification.csv",
            &["text", "fidelity", "clean", "rounding_bound"],
            &rows,
        )?;
    }
    Ok(())
}

fn count_gates(
    run: &mut Run,
    nouns: &[usize],
    wire_dims: &[usize],
    boxes: &[usize],
) -> Result<(), CliError> {
    let bad = |m: &str| Err(CliError::Config(m.into()));
    if nouns.iter().any(|n| *n < 2) || nouns.is_empty() {
        return bad("--nouns needs values of at least 2");
    }
    if wire_dims.iter().any(|d| *d < 2 || !d.is_power_of_two()) || wire_dims.is_empty() {
        return bad("--wire-dims needs powers of two");
    }
    if boxes.is_empty() {
        return bad("--boxes needs at least one value");
    }
    let p = run.config.dims.precision;

    let mut prim = Vec::new();
    let mut push = |what: &str, size: usize, r: &qdiscocirc::oracle::GateCountReport| {
        for pr in &r.predictions {
            prim.push(vec![
                what.to_string(),
                size.to_string(),
                pr.name.clone(),
                f(pr.predicted),
                f(pr.actual),
                pr.constant.map(f).unwrap_or_else(|| "exact".into()),
                pr.holds().to_string(),
            ]);
        }
    };
    for bits in 1..=p {
        push(
            "pcrz",
            bits as usize,
            &gate_count(&synth_pcrz(bits), &Primitive::Pcrz { precision: bits }, 0),
        );
    }
    for &n in nouns {
        for &dim in wire_dims {
            for variant in [MuxVariant::Binary, MuxVariant::Naive] {
                let qc = synth_multiplexer(n, dim, variant);
                let r = gate_count(
                    &qc,
                    &Primitive::Multiplexer {
                        nouns: n,
                        wire_dim: dim,
                        variant,
                    },
                    variant.ancillas(n),
                );
                push(&format!("mux-{}-N{dim}", variant.name()), n, &r);
            }
        }
    }
    for c in 1..=4 {
        let (qc, lay) = synth_unary_iteration(c, &vec![Vec::new(); 1 << c]);
        let anc = lay.qubits() - c;
        push(
            "unary-iteration",
            c,
            &gate_count(&qc, &Primitive::UnaryIteration { controls: c }, anc),
        );
    }

    let sweep = multiplexer_sweep(nouns, wire_dims);
    let mux_rows: Vec<Vec<String>> = sweep
        .iter()
        .map(|r| {
            vec![
                r.variant.name().into(),
                r.nouns.to_string(),
                r.wire_dim.to_string(),
                r.total.to_string(),
                f(r.linear_size()),
                f(r.superlinear_size()),
            ]
        })
        .collect();
    let mut growth = Vec::new();
    for &dim in wire_dims {
        for g in fit_growth(&sweep, dim) {
            growth.push(vec![
                g.variant.name().into(),
                dim.to_string(),
                f(g.linear.slope),
                f(g.linear.intercept),
                f(g.linear.r2),
                f(g.superlinear.slope),
                f(g.superlinear.intercept),
                f(g.superlinear.r2),
                g.normalized_increasing().to_string(),
            ]);
        }
    }

    let dims = OracleDims {
        texts: run.config.synthesis.texts.unwrap_or(4),
        boxes: 1,
        nouns: 4,
        arity: 2,
        wire_dim: run.config.dims.wire_dim,
        precision: p,
    };
    if dims.texts == 0 {
        return bad("synthesis.texts must be positive");
    }
    let family = AnsatzFamily::standard(dims.max_width());
    let w = oracle_w_sweep(dims, &family, boxes);
    let mut w_rows: Vec<Vec<String>> = w
        .iter()
        .map(|(b, total, cost)| vec![b.to_string(), total.to_string(), f(*cost)])
        .collect();
    let xs: Vec<f64> = w.iter().map(|r| r.0 as f64).collect();
    let fit = fit_linear(&xs, &w.iter().map(|r| r.1 as f64).collect::<Vec<_>>());
    w_rows.push(vec![
        "fit".into(),
        format!("slope={} intercept={}", fit.slope, fit.intercept),
        format!("r2={}", fit.r2),
    ]);

    run.write_csv(
        "primitives.csv",
        &[
            "primitive",
            "size",
            "prediction",
            "predicted",
            "actual",
            "constant",
            "holds",
        ],
        &prim,
    )?;
    run.write_csv(
        "mux_sweep.csv",
        &[
            "variant",
            "nouns",
            "wire_dim",
            "total",
            "n_log_n_dim",
            "n_log_n_dim_log_n",
        ],
        &mux_rows,
    )?;
    run.write_csv(
        "mux_growth.csv",
        &[
            "variant",
            "wire_dim",
            "linear_slope",
            "linear_intercept",
            "linear_r2",
            "superlinear_slope",
            "superlinear_intercept",
            "superlinear_r2",
            "normalized_increasing",
        ],
        &growth,
    )?;
    run.write_csv("oracle_w_sweep.csv", &["boxes", "total", "cost"], &w_rows)
}
