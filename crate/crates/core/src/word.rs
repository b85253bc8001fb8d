//! Free-group words over named generators.
//!
//! A [`Word`] is a plain sequence of signed generator letters. Words are
//! immutable values: every operation returns a fresh word. Text I/O uses a
//! deliberately small grammar:
//!
//! ```text
//! word := atom (WS atom)* | ε
//! atom := name | name "^" int
//! name := [A-Za-z][A-Za-z0-9_]*
//! int  := "-"? [1-9][0-9]*
//! ```
//!
//! [`expand_power_sugar`] additionally accepts parenthesised powers
//! `( ... )^k` and rewrites them into the core grammar.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid generator name {0:?}")]
    InvalidName(String),
    #[error("unknown generator {name:?} at byte {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error("malformed exponent in {atom:?} at byte {pos}")]
    MalformedExponent { atom: String, pos: usize },
    #[error("empty atom at byte {pos}")]
    EmptyAtom { pos: usize },
    #[error("unbalanced parenthesis at byte {pos}")]
    Unbalanced { pos: usize },
    #[error("generator {0} is not mapped")]
    Unmapped(Generator),
}

/// A generator name. Case-sensitive, ASCII only.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<str>);

impl Generator {
    pub fn new(name: &str) -> Result<Self, WordError> {
        if is_valid_name(name) {
            Ok(Generator(Arc::from(name)))
        } else {
            Err(WordError::InvalidName(name.to_string()))
        }
    }

    /// For names built by this crate from fixed patterns.
    pub(crate) fn known(name: &str) -> Self {
        Self::new(name).unwrap_or_else(|_| panic!("bad built-in generator name {name:?}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl serde::Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Builds a list of generators from literal names.
pub fn generators<'a>(names: impl IntoIterator<Item = &'a str>) -> Vec<Generator> {
    names.into_iter().map(Generator::known).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inverted(&self) -> Self {
        Letter { generator: self.generator.clone(), inverse: !self.inverse }
    }

    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Wraps letters as-is, without reduction.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn generator(g: &Generator) -> Self {
        Word { letters: vec![Letter::new(g.clone(), false)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverted).collect() }
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// `self^k` by repetition; negative `k` repeats the inverse.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let reps = k.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * reps);
        for _ in 0..reps {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    /// The commutator `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    pub fn free_reduce(&self) -> Word {
        free_reduce(self)
    }

    /// Freely and cyclically reduced representative of the conjugacy class.
    pub fn cyclically_reduce(&self) -> Word {
        let reduced = free_reduce(self);
        let letters = &reduced.letters;
        let (mut lo, mut hi) = (0, letters.len());
        while hi - lo >= 2 && letters[lo].cancels(&letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Word { letters: letters[lo..hi].to_vec() }
    }

    /// Cyclic rotation so that the word starts at letter `k`.
    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(k % self.letters.len());
        }
        Word { letters }
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.letters.iter().map(|l| l.generator.clone()).collect()
    }

    pub fn mentions(&self, g: &Generator) -> bool {
        self.letters.iter().any(|l| &l.generator == g)
    }

    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.letters.iter().filter(|l| &l.generator == g).map(Letter::sign).sum()
    }

    pub fn total_exponent(&self) -> i64 {
        self.letters.iter().map(Letter::sign).sum()
    }

    /// Keeps only the letters whose generator satisfies `keep`.
    pub fn project(&self, mut keep: impl FnMut(&Generator) -> bool) -> Word {
        Word { letters: self.letters.iter().filter(|l| keep(&l.generator)).cloned().collect() }
    }

    /// Renders fully expanded: one token per letter, `^-1` for inverses.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.generator)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl Mul for &Word {
    type Output = Word;

    /// Reduced product.
    fn mul(self, rhs: &Word) -> Word {
        free_reduce(&self.concat(rhs))
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for l in &w.letters {
        if out.last().is_some_and(|top| top.cancels(l)) {
            out.pop();
        } else {
            out.push(l.clone());
        }
    }
    Word { letters: out }
}

/// Parses a word in the core grammar against `context`, returning it freely
/// reduced.
pub fn parse_word(text: &str, context: &[Generator]) -> Result<Word, WordError> {
    let mut letters = Vec::new();
    for (pos, atom) in atoms(text) {
        let (name, exp) = split_atom(atom, pos)?;
        let generator = context
            .iter()
            .find(|g| g.as_str() == name)
            .cloned()
            .ok_or_else(|| WordError::UnknownGenerator { name: name.to_string(), pos })?;
        for _ in 0..exp.unsigned_abs() {
            letters.push(Letter::new(generator.clone(), exp < 0));
        }
    }
    Ok(free_reduce(&Word { letters }))
}

/// Like [`parse_word`], but first expands `( ... )^k` sugar.
pub fn parse_word_sugared(text: &str, context: &[Generator]) -> Result<Word, WordError> {
    parse_word(&expand_power_sugar(text)?, context)
}

fn atoms(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_ascii_whitespace().map(move |atom| {
        // split_ascii_whitespace yields subslices of `text`
        let pos = atom.as_ptr() as usize - text.as_ptr() as usize;
        (pos, atom)
    })
}

fn split_atom(atom: &str, pos: usize) -> Result<(&str, i64), WordError> {
    let (name, exp) = match atom.split_once('^') {
        None => (atom, 1),
        Some((name, exp)) => (name, parse_exponent(exp).ok_or_else(|| WordError::MalformedExponent {
            atom: atom.to_string(),
            pos,
        })?),
    };
    if name.is_empty() {
        return Err(WordError::EmptyAtom { pos });
    }
    if !is_valid_name(name) {
        return Err(WordError::InvalidName(name.to_string()));
    }
    Ok((name, exp))
}

fn parse_exponent(s: &str) -> Option<i64> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let mut chars = digits.chars();
    match chars.next() {
        Some('1'..='9') => {}
        _ => return None,
    }
    if !chars.all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[derive(Debug, Clone)]
enum SugarNode {
    Atom(String, i64),
    Group(Vec<SugarNode>, i64),
}

/// Expands parenthesised powers into the core grammar, e.g.
/// `"(a1 b)^-2 c"` becomes `"b^-1 a1^-1 b^-1 a1^-1 c"`.
pub fn expand_power_sugar(text: &str) -> Result<String, WordError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let nodes = parse_group(text, bytes, &mut pos, 0)?;
    if pos < bytes.len() {
        return Err(WordError::Unbalanced { pos });
    }
    let mut out = Vec::new();
    for node in &nodes {
        flatten(node, false, &mut out);
    }
    Ok(out
        .into_iter()
        .map(|(name, e)| if e == 1 { name } else { format!("{name}^{e}") })
        .collect::<Vec<_>>()
        .join(" "))
}

fn parse_group(
    text: &str,
    bytes: &[u8],
    pos: &mut usize,
    depth: usize,
) -> Result<Vec<SugarNode>, WordError> {
    let mut nodes = Vec::new();
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos >= bytes.len() {
            if depth > 0 {
                return Err(WordError::Unbalanced { pos: *pos });
            }
            return Ok(nodes);
        }
        match bytes[*pos] {
            b'(' => {
                let open = *pos;
                *pos += 1;
                let inner = parse_group(text, bytes, pos, depth + 1)?;
                if *pos >= bytes.len() || bytes[*pos] != b')' {
                    return Err(WordError::Unbalanced { pos: open });
                }
                *pos += 1;
                let exp = parse_suffix_exponent(text, bytes, pos, open)?;
                nodes.push(SugarNode::Group(inner, exp));
            }
            b')' => {
                if depth == 0 {
                    return Err(WordError::Unbalanced { pos: *pos });
                }
                return Ok(nodes);
            }
            _ => {
                let start = *pos;
                while *pos < bytes.len()
                    && !bytes[*pos].is_ascii_whitespace()
                    && !matches!(bytes[*pos], b'(' | b')')
                {
                    *pos += 1;
                }
                let (name, exp) = split_atom(&text[start..*pos], start)?;
                nodes.push(SugarNode::Atom(name.to_string(), exp));
            }
        }
    }
}

fn parse_suffix_exponent(
    text: &str,
    bytes: &[u8],
    pos: &mut usize,
    open: usize,
) -> Result<i64, WordError> {
    if *pos >= bytes.len() || bytes[*pos] != b'^' {
        return Ok(1);
    }
    *pos += 1;
    let start = *pos;
    while *pos < bytes.len() && (bytes[*pos] == b'-' || bytes[*pos].is_ascii_digit()) {
        *pos += 1;
    }
    parse_exponent(&text[start..*pos]).ok_or_else(|| WordError::MalformedExponent {
        atom: text[open..*pos].to_string(),
        pos: open,
    })
}

fn flatten(node: &SugarNode, invert: bool, out: &mut Vec<(String, i64)>) {
    match node {
        SugarNode::Atom(name, e) => out.push((name.clone(), if invert { -e } else { *e })),
        SugarNode::Group(children, e) => {
            let inv = invert ^ (*e < 0);
            for _ in 0..e.unsigned_abs() {
                if inv {
                    for child in children.iter().rev() {
                        flatten(child, true, out);
                    }
                } else {
                    for child in children {
                        flatten(child, false, out);
                    }
                }
            }
        }
    }
}

/// A substitution of words for generators.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneratorMap {
    assignments: BTreeMap<Generator, Word>,
}

impl GeneratorMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity_on<'a>(gens: impl IntoIterator<Item = &'a Generator>) -> Self {
        let mut map = Self::new();
        for g in gens {
            map.insert(g.clone(), Word::generator(g));
        }
        map
    }

    pub fn insert(&mut self, g: Generator, image: Word) -> Option<Word> {
        self.assignments.insert(g, image)
    }

    pub fn with(mut self, g: &Generator, image: Word) -> Self {
        self.insert(g.clone(), image);
        self
    }

    pub fn get(&self, g: &Generator) -> Option<&Word> {
        self.assignments.get(g)
    }

    pub fn remove(&mut self, g: &Generator) -> Option<Word> {
        self.assignments.remove(g)
    }

    pub fn source(&self) -> impl Iterator<Item = &Generator> {
        self.assignments.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Generator, &Word)> {
        self.assignments.iter()
    }

    /// Substitutes every letter and freely reduces.
    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for l in w.letters() {
            let image = self
                .assignments
                .get(&l.generator)
                .ok_or_else(|| WordError::Unmapped(l.generator.clone()))?;
            if l.inverse {
                letters.extend(image.letters.iter().rev().map(Letter::inverted));
            } else {
                letters.extend_from_slice(&image.letters);
            }
        }
        Ok(free_reduce(&Word { letters }))
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &GeneratorMap) -> Result<GeneratorMap, WordError> {
        let mut out = GeneratorMap::new();
        for (g, w) in &self.assignments {
            out.insert(g.clone(), other.apply(w)?);
        }
        Ok(out)
    }
}

impl serde::Serialize for GeneratorMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.assignments.len()))?;
        for (g, w) in &self.assignments {
            map.serialize_entry(g.as_str(), &w.render())?;
        }
        map.end()
    }
}

pub fn apply_map(m: &GeneratorMap, w: &Word) -> Result<Word, WordError> {
    m.apply(w)
}
