//! Text formats: circuit files, vocabularies, embeddings, compiled-circuit
//! dumps and reduction circuits. Lines starting with `#` are comments
//! everywhere, so artifact headers never get in the way of reading a file
//! back.

use std::fmt::Write as _;

use qdiscocirc::compiler::{AnsatzInstance, AnsatzKind, CompiledText, WordEmbeddingSet};
use qdiscocirc::hardness::{ReductionCircuit, ReductionGate};
use qdiscocirc::ir::{Generator, Hole, TextCircuit};
use qdiscocirc::linalg::{hadamard, pauli_x, phase_s, rx, ry, rz, Matrix};
use qdiscocirc::parser::{Pos, Vocabulary};
use qdiscocirc::qsim::{u3_matrix, Gate, QuantumCircuit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        msg: msg.into(),
    })
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(s: &str) -> Vec<(usize, &str)> {
    s.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn token_ok(t: &str) -> bool {
    !t.is_empty()
        && !t.chars().any(char::is_whitespace)
        && !matches!(t, "{" | "}" | "->")
        && !t.starts_with('#')
}

// ---------------------------------------------------------------------------
// circuit files

/// Serialize a text circuit. Wires are listed by noun in id order, then one
/// generator per line as `KIND [word] in... -> out...`; daggers are a `*`
/// suffix on the kind and frames carry their holes in nested blocks.
pub fn print_circuit(c: &TextCircuit) -> Result<String, FormatError> {
    let mut s = String::new();
    write_block(c, 0, &mut s)?;
    Ok(s)
}

fn ids(ws: &[usize]) -> String {
    ws.iter().map(|w| format!(" {w}")).collect()
}

fn write_block(c: &TextCircuit, depth: usize, s: &mut String) -> Result<(), FormatError> {
    let pad = "  ".repeat(depth);
    for w in c.wires() {
        if !token_ok(&w.noun) {
            return err(
                0,
                format!("noun {:?} cannot be written as a single token", w.noun),
            );
        }
    }
    let nouns: String = c.wires().iter().map(|w| format!(" {}", w.noun)).collect();
    let _ = writeln!(s, "{pad}WIRES{nouns}");
    let _ = writeln!(s, "{pad}IN{}", ids(c.inputs()));
    for n in c.nodes() {
        let g = &n.generator;
        let star = if g.is_dagger() { "*" } else { "" };
        let word = match g.word() {
            Some(w) if token_ok(w) => format!(" {w}"),
            Some(w) => return err(0, format!("word {w:?} cannot be written as a single token")),
            None => String::new(),
        };
        let head = format!(
            "{pad}{}{star}{word}{} ->{}",
            g.kind(),
            ids(&n.inputs),
            ids(&n.outputs)
        );
        match g {
            Generator::Frame { holes, .. } => {
                let _ = writeln!(s, "{head} {{");
                for h in holes {
                    let _ = writeln!(s, "{pad}  HOLE{} {{", ids(&h.assignment));
                    write_block(&h.content, depth + 2, s)?;
                    let _ = writeln!(s, "{pad}  }}");
                }
                let _ = writeln!(s, "{pad}}}");
            }
            _ => {
                let _ = writeln!(s, "{head}");
            }
        }
    }
    let _ = writeln!(s, "{pad}OUT{}", ids(c.outputs()));
    Ok(())
}

pub fn parse_circuit(s: &str) -> Result<TextCircuit, FormatError> {
    let lines = content_lines(s);
    let mut pos = 0;
    let c = read_block(&lines, &mut pos)?;
    if let Some((line, _)) = lines.get(pos) {
        return err(*line, "trailing content after OUT");
    }
    Ok(c)
}

fn parse_ids(line: usize, toks: &[&str], wires: usize) -> Result<Vec<usize>, FormatError> {
    toks.iter()
        .map(|t| match t.parse::<usize>() {
            Ok(w) if w < wires => Ok(w),
            _ => err(line, format!("bad wire id {t:?}")),
        })
        .collect()
}

fn next_line<'a>(
    lines: &[(usize, &'a str)],
    pos: &mut usize,
    what: &str,
) -> Result<(usize, Vec<&'a str>), FormatError> {
    let Some((line, l)) = lines.get(*pos) else {
        return err(
            lines.last().map_or(0, |x| x.0),
            format!("expected {what}, found end of input"),
        );
    };
    *pos += 1;
    Ok((*line, l.split_whitespace().collect()))
}

fn read_block(lines: &[(usize, &str)], pos: &mut usize) -> Result<TextCircuit, FormatError> {
    let next = |p: &mut usize, what: &str| next_line(lines, p, what);
    let (line, toks) = next(pos, "WIRES")?;
    if toks.first() != Some(&"WIRES") {
        return err(line, "expected WIRES");
    }
    let mut c = TextCircuit::empty();
    for n in &toks[1..] {
        c.add_wire(n);
    }
    let nw = toks.len() - 1;
    let (line, toks) = next(pos, "IN")?;
    if toks.first() != Some(&"IN") {
        return err(line, "expected IN");
    }
    c.set_inputs(parse_ids(line, &toks[1..], nw)?);
    loop {
        let (line, toks) = next(pos, "a generator or OUT")?;
        let (kind, dagger) = match toks[0].strip_suffix('*') {
            Some(k) => (k, true),
            None => (toks[0], false),
        };
        if kind == "OUT" {
            c.set_outputs(parse_ids(line, &toks[1..], nw)?);
            return Ok(c);
        }
        let worded = matches!(kind, "STATE" | "EFFECT" | "BOX" | "FRAME");
        let body = &toks[1 + worded as usize..];
        let word = if worded {
            match toks.get(1) {
                Some(w) => w.to_string(),
                None => return err(line, "missing word"),
            }
        } else {
            String::new()
        };
        let opens_block = body.last() == Some(&"{");
        let body = if opens_block {
            &body[..body.len() - 1]
        } else {
            body
        };
        let Some(arrow) = body.iter().position(|t| *t == "->") else {
            return err(line, "missing ->");
        };
        let inputs = parse_ids(line, &body[..arrow], nw)?;
        let outputs = parse_ids(line, &body[arrow + 1..], nw)?;
        if dagger && !matches!(kind, "BOX" | "FRAME") {
            return err(line, format!("{kind} has no dagger form"));
        }
        if (kind == "FRAME") != opens_block {
            return err(line, "only frames open a block");
        }
        let generator = match kind {
            "STATE" => Generator::State { word },
            "EFFECT" => Generator::Effect { word },
            "BOX" => Generator::Box { word, dagger },
            "ID" => Generator::Identity,
            "SWAP" => Generator::Swap,
            "DISCARD" => Generator::Discard,
            "CAP" => Generator::Cap,
            "CUP" => Generator::Cup,
            "FRAME" => {
                let mut holes = Vec::new();
                loop {
                    let (hl, ht) = next(pos, "HOLE or }")?;
                    if ht == ["}"] {
                        break;
                    }
                    if ht.first() != Some(&"HOLE") || ht.last() != Some(&"{") {
                        return err(hl, "expected HOLE ... {");
                    }
                    let assignment = ht[1..ht.len() - 1]
                        .iter()
                        .map(|t| {
                            t.parse::<usize>()
                                .or_else(|_| err(hl, format!("bad port {t:?}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let content = read_block(lines, pos)?;
                    let (cl, ct) = next(pos, "}")?;
                    if ct != ["}"] {
                        return err(cl, "expected } closing the hole");
                    }
                    holes.push(Hole {
                        content,
                        assignment,
                    });
                }
                Generator::Frame {
                    word,
                    holes,
                    dagger,
                }
            }
            other => return err(line, format!("unknown generator {other:?}")),
        };
        c.add_node(generator, inputs, outputs);
    }
}

// ---------------------------------------------------------------------------
// vocabulary and corpora

/// `word<TAB>POS` lines.
pub fn parse_vocabulary(s: &str) -> Result<Vocabulary, FormatError> {
    let mut v = Vocabulary::new();
    for (line, l) in content_lines(s) {
        let Some((word, tag)) = l.rsplit_once('\t') else {
            return err(line, "expected word<TAB>POS");
        };
        let pos = Pos::from_tag(tag.trim()).ok_or_else(|| FormatError {
            line,
            msg: format!("unknown POS {tag:?}"),
        })?;
        if !v.insert(word.trim(), pos) {
            return err(line, format!("{word:?} listed twice"));
        }
    }
    Ok(v)
}

pub fn print_vocabulary(v: &Vocabulary) -> String {
    v.iter()
        .map(|(w, p)| format!("{w}\t{}\n", p.tag()))
        .collect()
}

/// Sentences of a corpus file, comments and blank lines dropped.
pub fn corpus_lines(s: &str) -> Vec<String> {
    content_lines(s)
        .into_iter()
        .map(|(_, l)| l.to_string())
        .collect()
}

// ---------------------------------------------------------------------------
// embeddings

fn params_text(p: &[f64]) -> String {
    p.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Header lines `wire_dim` and `precision`, then one record per entry:
/// `word<TAB>word<TAB>POS<TAB>arity<TAB>ansatz<TAB>layers<TAB>params` or
/// `frame<TAB>word<TAB>POS<TAB>layer<TAB>width<TAB>ansatz<TAB>layers<TAB>params`.
pub fn print_embeddings(v: &WordEmbeddingSet) -> String {
    let mut s = format!("wire_dim\t{}\nprecision\t{}\n", v.wire_dim, v.precision);
    for ((w, a), e) in &v.entries {
        let x = &e.ansatz;
        let _ = writeln!(
            s,
            "word\t{w}\t{}\t{a}\t{}\t{}\t{}",
            e.pos.tag(),
            x.kind.name(),
            x.layers,
            params_text(&x.params)
        );
    }
    for ((w, layer, width), e) in &v.frame_entries {
        let x = &e.ansatz;
        let _ = writeln!(
            s,
            "frame\t{w}\t{}\t{layer}\t{width}\t{}\t{}\t{}",
            e.pos.tag(),
            x.kind.name(),
            x.layers,
            params_text(&x.params)
        );
    }
    s
}

/// Inverse of [`print_embeddings`]. Rotation angles are rounded to the
/// file's precision on load, and the set is checked for shape errors.
pub fn parse_embeddings(s: &str) -> Result<WordEmbeddingSet, FormatError> {
    let mut wire_dim = None;
    let mut precision = None;
    let mut records = Vec::new();
    for (line, l) in content_lines(s) {
        let f: Vec<&str> = l.split('\t').map(str::trim).collect();
        match f[0] {
            "wire_dim" | "precision" if f.len() == 2 => {
                let x: u64 = f[1]
                    .parse()
                    .or_else(|_| err(line, format!("bad {}", f[0])))?;
                if f[0] == "wire_dim" {
                    wire_dim = Some(x as usize);
                } else {
                    precision = Some(x as u32);
                }
            }
            "word" | "frame" => records.push((line, f)),
            _ => return err(line, "expected wire_dim, precision, word or frame"),
        }
    }
    let wire_dim = wire_dim.ok_or(FormatError {
        line: 0,
        msg: "missing wire_dim".into(),
    })?;
    let precision = precision.ok_or(FormatError {
        line: 0,
        msg: "missing precision".into(),
    })?;
    if precision > 52 {
        return err(0, "precision above 52 bits");
    }
    let mut v = WordEmbeddingSet::new(wire_dim, precision);
    for (line, f) in records {
        let frame = f[0] == "frame";
        let want = if frame { 8 } else { 7 };
        if f.len() != want && f.len() != want - 1 {
            return err(line, format!("expected {want} tab-separated fields"));
        }
        let num = |i: usize| {
            f[i].parse::<usize>()
                .or_else(|_| err(line, format!("bad integer {:?}", f[i])))
        };
        let pos = Pos::from_tag(f[2]).ok_or_else(|| FormatError {
            line,
            msg: format!("unknown POS {:?}", f[2]),
        })?;
        let k = if frame { 5 } else { 4 };
        let kind = AnsatzKind::from_name(f[k]).ok_or_else(|| FormatError {
            line,
            msg: format!("unknown ansatz {:?}", f[k]),
        })?;
        let params = f
            .get(k + 2)
            .map_or("", |p| p)
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .or_else(|_| err(line, format!("bad parameter {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ansatz = AnsatzInstance::new(kind, num(k + 1)?, params);
        if frame {
            v.insert_frame(f[1], num(3)?, num(4)?, pos, ansatz);
        } else {
            v.insert(f[1], num(3)?, pos, ansatz);
        }
    }
    v.check().or_else(|e| err(0, e.to_string()))?;
    v.quantize();
    Ok(v)
}

// ---------------------------------------------------------------------------
// compiled circuits

fn num(x: f64) -> String {
    format!("{x}")
}

fn list(qs: &[usize]) -> String {
    qs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn qubits_line(qs: impl IntoIterator<Item = usize>) -> String {
    qs.into_iter().map(|q| format!(" {q}")).collect()
}

/// One gate per line, `NAME qubits... [angles]`.
pub fn gate_line(g: &Gate) -> String {
    let name = g.name();
    match g {
        Gate::Rz { target, theta } => format!("{name} {target} {}", num(*theta)),
        Gate::U3 {
            target,
            theta,
            phi,
            lambda,
        } => format!(
            "{name} {target} {} {} {}",
            num(*theta),
            num(*phi),
            num(*lambda)
        ),
        Gate::Crz {
            control,
            target,
            theta,
        } => format!("{name} {control} {target} {}", num(*theta)),
        Gate::Ccrz {
            controls,
            target,
            theta,
        } => format!(
            "{name} {} {} {target} {}",
            controls[0],
            controls[1],
            num(*theta)
        ),
        Gate::Unitary {
            controls,
            targets,
            matrix,
        } => {
            let m: Vec<String> = matrix
                .data()
                .iter()
                .map(|z| format!("{},{}", num(z.re), num(z.im)))
                .collect();
            format!(
                "{name} controls={} targets={} matrix={}",
                list(controls),
                list(targets),
                m.join(";")
            )
        }
        Gate::Lookup {
            address,
            target,
            table,
        } => {
            let t: Vec<String> = table.iter().map(ToString::to_string).collect();
            format!(
                "{name} address={} target={} table={}",
                list(address),
                list(target),
                t.join(",")
            )
        }
        _ => format!("{name}{}", qubits_line(g.qubits())),
    }
}

/// Header (qubit count, outputs, discards, post-selections), then gates.
pub fn dump_circuit(qc: &QuantumCircuit) -> String {
    let mut s = format!(
        "qubits\t{}\noutputs\t{}\n",
        qc.qubit_count,
        list(&qc.outputs)
    );
    let d: Vec<usize> = qc.discards.iter().copied().collect();
    let _ = writeln!(s, "discard\t{}", list(&d));
    let p: Vec<String> = qc
        .postselect
        .iter()
        .map(|(q, b)| format!("{q}={}", *b as u8))
        .collect();
    let _ = writeln!(s, "postselect\t{}", p.join(","));
    for g in &qc.gates {
        s.push_str(&gate_line(g));
        s.push('\n');
    }
    s
}

/// Circuit dump preceded by the register map of a compiled text.
pub fn dump_compiled(c: &CompiledText) -> String {
    let mut s = String::new();
    for r in &c.registers {
        let _ = writeln!(
            s,
            "register\t{}\t{}..{}",
            r.noun, r.qubits.start, r.qubits.end
        );
    }
    let _ = writeln!(s, "pure\t{}", c.is_pure);
    s + &dump_circuit(&c.circuit)
}

// ---------------------------------------------------------------------------
// reduction circuits

/// `qubits n`, then one gate per line: `H q`, `X q`, `S q`, `RX q θ`,
/// `RY q θ`, `RZ q θ`, `U3 q θ φ λ` for one-qubit gates and `VERB a b` for
/// the vocabulary's entangling verb.
pub fn parse_reduction_circuit(s: &str) -> Result<ReductionCircuit, FormatError> {
    let lines = content_lines(s);
    let Some((first, head)) = lines.first() else {
        return err(0, "empty circuit file");
    };
    let qubits = match head.split_whitespace().collect::<Vec<_>>()[..] {
        ["qubits", n] => n
            .parse::<usize>()
            .or_else(|_| err(*first, "bad qubit count"))?,
        _ => return err(*first, "expected `qubits n`"),
    };
    if qubits == 0 {
        return err(*first, "need at least one qubit");
    }
    let mut gates = Vec::new();
    for (line, l) in &lines[1..] {
        let t: Vec<&str> = l.split_whitespace().collect();
        let q = |i: usize| match t.get(i).and_then(|x| x.parse::<usize>().ok()) {
            Some(q) if q < qubits => Ok(q),
            _ => err(*line, "bad qubit"),
        };
        let a = |i: usize| {
            t.get(i)
                .and_then(|x| x.parse::<f64>().ok())
                .ok_or(FormatError {
                    line: *line,
                    msg: "bad angle".into(),
                })
        };
        let arity = match t[0] {
            "H" | "X" | "S" => 2,
            "RX" | "RY" | "RZ" | "VERB" => 3,
            "U3" => 5,
            other => return err(*line, format!("unknown gate {other:?}")),
        };
        if t.len() != arity {
            return err(*line, format!("{} takes {} operands", t[0], arity - 1));
        }
        let single = |m: Matrix| -> Result<ReductionGate, FormatError> {
            Ok(ReductionGate::Single {
                qubit: q(1)?,
                matrix: m,
            })
        };
        gates.push(match t[0] {
            "H" => single(hadamard())?,
            "X" => single(pauli_x())?,
            "S" => single(phase_s())?,
            "RX" => single(rx(a(2)?))?,
            "RY" => single(ry(a(2)?))?,
            "RZ" => single(rz(a(2)?))?,
            "U3" => single(u3_matrix(a(2)?, a(3)?, a(4)?))?,
            _ => {
                let (first, second) = (q(1)?, q(2)?);
                if first == second {
                    return err(*line, "VERB needs two distinct qubits");
                }
                ReductionGate::Verb { first, second }
            }
        });
    }
    Ok(ReductionCircuit { qubits, gates })
}
