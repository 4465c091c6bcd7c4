//! Templated English to text circuits, and back.
//!
//! Supported sentence shapes (a trailing `~` on a word marks its inverse):
//!
//! ```text
//! <PN> is <Adj>.            <PN> is not <Adj>.
//! <PN> <IV>.                <PN> <TV> <PN>.
//! <PN> <Adv> <TV> <PN>.     <PN> does not <TV> <PN>.
//! ```
//!
//! Entries may span several words ("goes to"); an article `the` before a
//! proper noun is dropped.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ir::{Builder, Generator, Hole, IrError, TextCircuit};

/// Marker appended to a word to denote its inverse.
pub const INVERSE_MARKER: char = '~';

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    ProperNoun,
    Adjective,
    IntransitiveVerb,
    TransitiveVerb,
    Adverb,
    Negation,
}

impl Pos {
    pub fn tag(self) -> &'static str {
        match self {
            Pos::ProperNoun => "PN",
            Pos::Adjective => "ADJ",
            Pos::IntransitiveVerb => "IV",
            Pos::TransitiveVerb => "TV",
            Pos::Adverb => "ADV",
            Pos::Negation => "NEG",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Pos> {
        Some(match tag {
            "PN" => Pos::ProperNoun,
            "ADJ" => Pos::Adjective,
            "IV" => Pos::IntransitiveVerb,
            "TV" => Pos::TransitiveVerb,
            "ADV" => Pos::Adverb,
            "NEG" => Pos::Negation,
            _ => return None,
        })
    }

    /// Arity of the box a word of this part of speech labels.
    pub fn box_arity(self) -> Option<usize> {
        match self {
            Pos::ProperNoun | Pos::Adjective | Pos::IntransitiveVerb => Some(1),
            Pos::TransitiveVerb => Some(2),
            Pos::Adverb | Pos::Negation => None,
        }
    }

    pub fn is_frame(self) -> bool {
        matches!(self, Pos::Adverb | Pos::Negation)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    entries: BTreeMap<String, Pos>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Vocabulary::default()
    }

    /// Insert a word; returns false if it was already present with another
    /// part of speech (the entry is left unchanged).
    pub fn insert(&mut self, word: &str, pos: Pos) -> bool {
        match self.entries.get(word) {
            Some(p) => *p == pos,
            None => {
                self.entries.insert(word.to_string(), pos);
                true
            }
        }
    }

    pub fn with(mut self, word: &str, pos: Pos) -> Self {
        self.insert(word, pos);
        self
    }

    pub fn get(&self, word: &str) -> Option<Pos> {
        self.entries.get(word).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Pos)> {
        self.entries.iter().map(|(w, p)| (w.as_str(), *p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Negation is usable only when `not` is declared.
    pub fn has_negation(&self) -> bool {
        self.get("not") == Some(Pos::Negation)
    }

    fn longest_entry(&self) -> usize {
        self.entries
            .keys()
            .map(|w| w.split_whitespace().count())
            .max()
            .unwrap_or(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownWord(String),
    TemplateMismatch(String),
    PosMismatch {
        word: String,
        expected: Pos,
        found: Pos,
    },
    /// A sentence names the same noun in two argument slots.
    RepeatedNoun(String),
    Circuit(IrError),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownWord(w) => write!(f, "unknown word `{}`", w),
            ParseErrorKind::TemplateMismatch(s) => write!(f, "no template matches `{}`", s),
            ParseErrorKind::PosMismatch {
                word,
                expected,
                found,
            } => {
                write!(
                    f,
                    "`{}` is {} but the template needs {}",
                    word, found, expected
                )
            }
            ParseErrorKind::RepeatedNoun(n) => write!(f, "noun `{}` fills two slots", n),
            ParseErrorKind::Circuit(e) => write!(f, "{}", e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Item {
    Word {
        word: String,
        pos: Pos,
        inverse: bool,
    },
    Literal(String),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Lit(&'static str),
    P(Pos),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Template {
    Adj,
    NotAdj,
    Iv,
    Tv,
    AdvTv,
    NotTv,
}

const TEMPLATES: [(Template, &[Slot]); 6] = {
    use Pos::*;
    use Slot::*;
    [
        (Template::Adj, &[P(ProperNoun), Lit("is"), P(Adjective)]),
        (
            Template::NotAdj,
            &[P(ProperNoun), Lit("is"), P(Negation), P(Adjective)],
        ),
        (Template::Iv, &[P(ProperNoun), P(IntransitiveVerb)]),
        (
            Template::Tv,
            &[P(ProperNoun), P(TransitiveVerb), P(ProperNoun)],
        ),
        (
            Template::AdvTv,
            &[P(ProperNoun), P(Adverb), P(TransitiveVerb), P(ProperNoun)],
        ),
        (
            Template::NotTv,
            &[
                P(ProperNoun),
                Lit("does"),
                P(Negation),
                P(TransitiveVerb),
                P(ProperNoun),
            ],
        ),
    ]
};

fn is_literal(tok: &str) -> bool {
    matches!(tok, "is" | "does")
}

fn segment(sentence: &str, vocab: &Vocabulary) -> Result<Vec<Item>, ParseErrorKind> {
    let tokens: Vec<&str> = sentence.split_whitespace().collect();
    let longest = vocab.longest_entry();
    let mut items = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut matched = None;
        for len in (1..=longest.min(tokens.len() - i)).rev() {
            let mut phrase = tokens[i..i + len].join(" ");
            let inverse = phrase.ends_with(INVERSE_MARKER);
            if inverse {
                phrase.pop();
            }
            if let Some(pos) = vocab.get(&phrase) {
                // "is"/"does" only become vocabulary words as part of a longer entry
                if len == 1 && is_literal(&phrase) && !inverse {
                    break;
                }
                matched = Some((
                    len,
                    Item::Word {
                        word: phrase,
                        pos,
                        inverse,
                    },
                ));
                break;
            }
        }
        match matched {
            Some((len, item)) => {
                items.push(item);
                i += len;
            }
            None => {
                let tok = tokens[i];
                if is_literal(tok) {
                    items.push(Item::Literal(tok.to_string()));
                } else if tok == "not" {
                    // negation must be declared in the vocabulary
                    return Err(ParseErrorKind::UnknownWord(tok.to_string()));
                } else if tok.eq_ignore_ascii_case("the") {
                    // the article only precedes a noun; drop it
                } else {
                    return Err(ParseErrorKind::UnknownWord(tok.to_string()));
                }
                i += 1;
            }
        }
    }
    Ok(items)
}

fn match_template(items: &[Item], sentence: &str) -> Result<Template, ParseErrorKind> {
    let mut pos_error = None;
    for (t, slots) in TEMPLATES.iter() {
        if slots.len() != items.len() {
            continue;
        }
        let literals_fit = slots.iter().zip(items).all(|(s, it)| match (s, it) {
            (Slot::Lit(l), Item::Literal(x)) => l == x,
            (Slot::P(_), Item::Word { .. }) => true,
            _ => false,
        });
        if !literals_fit {
            continue;
        }
        let bad = slots.iter().zip(items).find_map(|(s, it)| match (s, it) {
            (Slot::P(want), Item::Word { word, pos, .. }) if want != pos => {
                Some((word.clone(), *want, *pos))
            }
            _ => None,
        });
        match bad {
            None => return Ok(*t),
            Some((word, expected, found)) => {
                pos_error.get_or_insert(ParseErrorKind::PosMismatch {
                    word,
                    expected,
                    found,
                });
            }
        }
    }
    Err(pos_error.unwrap_or_else(|| ParseErrorKind::TemplateMismatch(sentence.to_string())))
}

fn word_of(it: &Item) -> (&str, bool) {
    match it {
        Item::Word { word, inverse, .. } => (word, *inverse),
        Item::Literal(l) => (l, false),
    }
}

fn noun_state(b: &mut Builder, noun: &str) -> Result<(), IrError> {
    if !b.is_live(noun) {
        b.state(noun, noun)?;
    }
    Ok(())
}

fn one_hole(box_word: &str, nouns: &[&str], dagger: bool) -> Result<Hole, IrError> {
    let mut inner = Builder::new();
    for n in nouns {
        inner.input(n)?;
    }
    inner.boxed_dagger(box_word, nouns, dagger)?;
    Ok(Hole {
        content: inner.finish(),
        assignment: (0..nouns.len()).collect(),
    })
}

/// Parse a corpus, one sentence per entry. Blank lines are skipped.
pub fn parse_text<S: AsRef<str>>(
    lines: &[S],
    vocab: &Vocabulary,
) -> Result<TextCircuit, ParseError> {
    let mut b = Builder::new();
    for (idx, raw) in lines.iter().enumerate() {
        let line = idx + 1;
        let err = |kind| ParseError { line, kind };
        let text = raw.as_ref().trim();
        if text.is_empty() {
            continue;
        }
        let sentence = text
            .strip_suffix('.')
            .ok_or_else(|| err(ParseErrorKind::TemplateMismatch(text.to_string())))?;
        let items = segment(sentence, vocab).map_err(err)?;
        let template = match_template(&items, text).map_err(err)?;
        let circ = |e| ParseError {
            line,
            kind: ParseErrorKind::Circuit(e),
        };
        let subject = word_of(&items[0]).0;
        let object = match template {
            Template::Tv => Some(word_of(&items[2]).0),
            Template::AdvTv => Some(word_of(&items[3]).0),
            Template::NotTv => Some(word_of(&items[4]).0),
            _ => None,
        };
        if object == Some(subject) {
            return Err(err(ParseErrorKind::RepeatedNoun(subject.to_string())));
        }
        noun_state(&mut b, subject).map_err(circ)?;
        if let Some(o) = object {
            noun_state(&mut b, o).map_err(circ)?;
        }
        match template {
            Template::Adj | Template::Iv => {
                let (w, inv) = word_of(&items[items.len() - 1]);
                b.boxed_dagger(w, &[subject], inv).map_err(circ)?;
            }
            Template::Tv => {
                let (w, inv) = word_of(&items[1]);
                b.boxed_dagger(w, &[subject, object.unwrap()], inv)
                    .map_err(circ)?;
            }
            Template::NotAdj => {
                let (neg, ninv) = word_of(&items[2]);
                let (w, inv) = word_of(&items[3]);
                let hole = one_hole(w, &[subject], inv).map_err(circ)?;
                b.frame(neg, &[subject], vec![hole], ninv).map_err(circ)?;
            }
            Template::AdvTv | Template::NotTv => {
                let at = if template == Template::AdvTv { 1 } else { 2 };
                let (fw, finv) = word_of(&items[at]);
                let (w, inv) = word_of(&items[at + 1]);
                let nouns = [subject, object.unwrap()];
                let hole = one_hole(w, &nouns, inv).map_err(circ)?;
                b.frame(fw, &nouns, vec![hole], finv).map_err(circ)?;
            }
        }
    }
    Ok(b.finish())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("node {node} ({kind}) has no sentence form")]
    Unrepresentable { node: usize, kind: &'static str },
    #[error("word `{0}` is missing from the vocabulary")]
    UnknownWord(String),
    #[error("word `{word}` is {pos} and cannot label a {arity}-ary box")]
    PosMismatch {
        word: String,
        pos: Pos,
        arity: usize,
    },
    #[error("noun `{0}` is prepared but never acted on")]
    LoneState(String),
}

fn render(word: &str, dagger: bool) -> String {
    if dagger {
        format!("{}{}", word, INVERSE_MARKER)
    } else {
        word.to_string()
    }
}

/// Sentences whose parse is connectivity-equal to `c` (up to the order of
/// open outputs, which parsing fixes by first mention).
pub fn generate_text(c: &TextCircuit, vocab: &Vocabulary) -> Result<Vec<String>, GenerateError> {
    let lookup = |w: &str| {
        vocab
            .get(w)
            .ok_or_else(|| GenerateError::UnknownWord(w.to_string()))
    };
    let mut out = Vec::new();
    let mut touched: BTreeMap<&str, bool> = BTreeMap::new();
    for (i, n) in c.nodes().iter().enumerate() {
        let nouns: Vec<&str> = n.inputs.iter().map(|w| c.noun(*w)).collect();
        let unrep = || GenerateError::Unrepresentable {
            node: i,
            kind: n.generator.kind(),
        };
        match &n.generator {
            Generator::State { word } => {
                let noun = c.noun(n.outputs[0]);
                if word != noun {
                    return Err(unrep());
                }
                touched.entry(noun).or_insert(false);
            }
            Generator::Identity => {}
            Generator::Box { word, dagger } => {
                let pos = lookup(word)?;
                let w = render(word, *dagger);
                let s = match (pos, nouns.len()) {
                    (Pos::Adjective, 1) => format!("{} is {}.", nouns[0], w),
                    (Pos::IntransitiveVerb, 1) => format!("{} {}.", nouns[0], w),
                    (Pos::TransitiveVerb, 2) => format!("{} {} {}.", nouns[0], w, nouns[1]),
                    _ => {
                        return Err(GenerateError::PosMismatch {
                            word: word.clone(),
                            pos,
                            arity: nouns.len(),
                        })
                    }
                };
                out.push(s);
            }
            Generator::Frame {
                word,
                holes,
                dagger,
            } => {
                let [hole] = &holes[..] else {
                    return Err(unrep());
                };
                let inner = &hole.content;
                let [node] = inner.nodes() else {
                    return Err(unrep());
                };
                let Generator::Box {
                    word: bw,
                    dagger: bd,
                } = &node.generator
                else {
                    return Err(unrep());
                };
                let inner_nouns: Vec<&str> = hole
                    .assignment
                    .iter()
                    .map(|p| nouns.get(*p).copied().unwrap_or(""))
                    .collect();
                let box_nouns: Vec<&str> = node.inputs.iter().map(|w| inner.noun(*w)).collect();
                if box_nouns != inner.input_nouns()
                    || inner_nouns != nouns
                    || hole.assignment.len() != nouns.len()
                {
                    return Err(unrep());
                }
                let fpos = lookup(word)?;
                let bpos = lookup(bw)?;
                let (f, b) = (render(word, *dagger), render(bw, *bd));
                let s = match (fpos, bpos, nouns.len()) {
                    (Pos::Adverb, Pos::TransitiveVerb, 2) => {
                        format!("{} {} {} {}.", nouns[0], f, b, nouns[1])
                    }
                    (Pos::Negation, Pos::TransitiveVerb, 2) if word == "not" => {
                        format!("{} does {} {} {}.", nouns[0], f, b, nouns[1])
                    }
                    (Pos::Negation, Pos::Adjective, 1) if word == "not" => {
                        format!("{} is {} {}.", nouns[0], f, b)
                    }
                    _ => return Err(unrep()),
                };
                out.push(s);
            }
            _ => return Err(unrep()),
        }
        if matches!(n.generator, Generator::Box { .. } | Generator::Frame { .. }) {
            for noun in &nouns {
                touched.insert(noun, true);
            }
        }
    }
    if let Some((noun, _)) = touched.iter().find(|(_, t)| !**t) {
        return Err(GenerateError::LoneState(noun.to_string()));
    }
    if !c.inputs().is_empty() {
        return Err(GenerateError::Unrepresentable {
            node: usize::MAX,
            kind: "open input",
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{connectivity_equal, validate};

    fn vocab() -> Vocabulary {
        Vocabulary::new()
            .with("Alice", Pos::ProperNoun)
            .with("Bob", Pos::ProperNoun)
            .with("John", Pos::ProperNoun)
            .with("bedroom", Pos::ProperNoun)
            .with("happy", Pos::Adjective)
            .with("runs", Pos::IntransitiveVerb)
            .with("greets", Pos::TransitiveVerb)
            .with("goes to", Pos::TransitiveVerb)
            .with("quickly", Pos::Adverb)
            .with("not", Pos::Negation)
    }

    #[test]
    fn adjective_sentence() {
        let c = parse_text(&["Alice is happy."], &vocab()).unwrap();
        assert_eq!(c.count_kind("STATE"), 1);
        assert_eq!(c.count_kind("BOX"), 1);
        assert_eq!(c.output_nouns(), vec!["Alice"]);
    }

    #[test]
    fn multiword_verb_with_article() {
        let c = parse_text(&["John goes to the bedroom."], &vocab()).unwrap();
        assert_eq!(c.count_kind("STATE"), 2);
        let b = c
            .nodes()
            .iter()
            .find(|n| n.generator.kind() == "BOX")
            .unwrap();
        assert_eq!(b.generator.word(), Some("goes to"));
        assert_eq!(b.inputs.len(), 2);
    }

    #[test]
    fn adverb_makes_a_frame() {
        let c = parse_text(&["Alice quickly greets Bob."], &vocab()).unwrap();
        assert_eq!(c.count_kind("FRAME"), 1);
        assert!(validate(&c, 3).is_empty());
        let c = parse_text(&["Alice does not greet Bob."], &vocab());
        assert!(matches!(
            c,
            Err(ParseError {
                line: 1,
                kind: ParseErrorKind::UnknownWord(_)
            })
        ));
        let c = parse_text(
            &["Alice does not greets Bob.", "Alice is not happy."],
            &vocab(),
        )
        .unwrap();
        assert_eq!(c.count_kind("FRAME"), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_text(&["Alice is happy.", "Alice is Bob."], &vocab()).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::PosMismatch { .. }));
        let e = parse_text(&["Alice is."], &vocab()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::TemplateMismatch(_)));
        let e = parse_text(&["Zed runs."], &vocab()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownWord("Zed".into()));
    }

    #[test]
    fn coreference_reuses_wires() {
        let c = parse_text(
            &["Alice runs.", "Alice greets Bob.", "Bob is happy."],
            &vocab(),
        )
        .unwrap();
        assert_eq!(c.outputs().len(), 2);
        assert_eq!(c.count_kind("STATE"), 2);
    }

    #[test]
    fn inverse_marker() {
        let c = parse_text(&["Alice is happy~."], &vocab()).unwrap();
        assert!(c.nodes().iter().any(|n| n.generator.is_dagger()));
        let text = generate_text(&c, &vocab()).unwrap();
        assert_eq!(text, vec!["Alice is happy~."]);
    }

    #[test]
    fn generate_round_trip() {
        let lines = [
            "Alice quickly greets Bob.",
            "Bob runs.",
            "Alice does not greets Bob.",
            "Bob is not happy.",
        ];
        let c = parse_text(&lines, &vocab()).unwrap();
        let text = generate_text(&c, &vocab()).unwrap();
        assert_eq!(text, lines);
        let back = parse_text(&text, &vocab()).unwrap();
        assert!(connectivity_equal(&c, &back));
        assert!(generate_text(&TextCircuit::empty(), &vocab())
            .unwrap()
            .is_empty());
    }
}
