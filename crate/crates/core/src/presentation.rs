//! Finitely presented groups and the Tietze moves used by the certificates.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::smith;
use crate::word::{free_reduce, parse_word_sugared, Generator, GeneratorMap, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(Generator),
    #[error("relator {relator:?} uses generator {generator} outside the presentation")]
    ForeignGenerator { relator: String, generator: Generator },
    #[error("generator {0} is not in the presentation")]
    MissingGenerator(Generator),
    #[error("defining word for {0} mentions {0} itself")]
    SelfReferentialDefinition(Generator),
    #[error("no relator witnesses {generator} = {defining}")]
    NoWitness { generator: Generator, defining: String },
    #[error("generator names clash across factors: {0}")]
    NameClash(Generator),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// `⟨generators | relators⟩`. Relators are stored freely and cyclically
/// reduced; a relation `u = v` is stored as `u v^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    /// Invariant factors ≥ 2, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 || self.torsion.is_empty() {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

impl Presentation {
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.clone()) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        let mut stored = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(g) = r.letters().iter().map(|l| &l.generator).find(|g| !seen.contains(*g)) {
                return Err(PresentationError::ForeignGenerator {
                    relator: r.render(),
                    generator: g.clone(),
                });
            }
            stored.push(r.cyclically_reduce());
        }
        Ok(Presentation { generators, relators: stored })
    }

    pub fn free(generators: Vec<Generator>) -> Result<Self, PresentationError> {
        Self::new(generators, Vec::new())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn has_generator(&self, g: &Generator) -> bool {
        self.generators.contains(g)
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.as_str() == name)
    }

    /// Parses a word (with power sugar) over this presentation's generators.
    pub fn word(&self, text: &str) -> Result<Word, WordError> {
        parse_word_sugared(text, &self.generators)
    }

    pub fn normalized(&self) -> Presentation {
        normalize_relators(self)
    }

    /// Normalized relator set as canonical representatives.
    pub fn relator_set(&self) -> BTreeSet<Word> {
        self.relators.iter().map(canonical_relator).filter(|w| !w.is_empty()).collect()
    }

    pub fn contains_relator(&self, w: &Word) -> bool {
        let c = canonical_relator(w);
        self.relators.iter().any(|r| canonical_relator(r) == c)
    }

    pub fn eliminate_generator(&self, g: &Generator, defining: &Word) -> Result<Presentation, PresentationError> {
        eliminate_generator(self, g, defining)
    }

    pub fn quotient_by_words(&self, ws: &[Word]) -> Result<Presentation, PresentationError> {
        quotient_by_words(self, ws)
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        abelianization(self)
    }

    /// Text format: a `gens:` header then one relator per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("gens: ");
        out.push_str(&self.generators.iter().map(Generator::as_str).collect::<Vec<_>>().join(", "));
        out.push('\n');
        for r in &self.relators {
            out.push_str(&r.render());
            out.push('\n');
        }
        out
    }

    /// Reads the text format. Blank lines and `#` comments are ignored; a
    /// relation line `u = v` is stored as `u v^-1`. Power sugar is accepted.
    pub fn from_text(text: &str) -> Result<Presentation, PresentationError> {
        let mut generators: Option<Vec<Generator>> = None;
        let mut relators = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: String| PresentationError::Syntax { line: i + 1, msg };
            match &generators {
                None => {
                    let list = line
                        .strip_prefix("gens:")
                        .ok_or_else(|| syntax("expected `gens:` header".into()))?;
                    let gens = list
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(Generator::new)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| syntax(e.to_string()))?;
                    generators = Some(gens);
                }
                Some(gens) => {
                    let word = match line.split_once('=') {
                        Some((lhs, rhs)) => {
                            let u = parse_word_sugared(lhs, gens).map_err(|e| syntax(e.to_string()))?;
                            let v = parse_word_sugared(rhs, gens).map_err(|e| syntax(e.to_string()))?;
                            &u * &v.inverse()
                        }
                        None => parse_word_sugared(line, gens).map_err(|e| syntax(e.to_string()))?,
                    };
                    relators.push(word);
                }
            }
        }
        let generators = generators.ok_or(PresentationError::Syntax { line: 0, msg: "missing `gens:` header".into() })?;
        Presentation::new(generators, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Ordering key: length first, then the rendered text.
fn relator_key(w: &Word) -> (usize, String) {
    (w.len(), w.render())
}

/// The representative of `w` up to cyclic rotation and inversion that is
/// least by (length, rendered text). Empty if `w` is trivial.
pub fn canonical_relator(w: &Word) -> Word {
    let base = w.cyclically_reduce();
    if base.is_empty() {
        return base;
    }
    let inv = base.inverse();
    let mut best: Option<(String, Word)> = None;
    for candidate in [&base, &inv] {
        for k in 0..candidate.len() {
            let rotated = candidate.rotate(k);
            let text = rotated.render();
            if best.as_ref().is_none_or(|(b, _)| text < *b) {
                best = Some((text, rotated));
            }
        }
    }
    best.map(|(_, w)| w).unwrap_or_default()
}

pub fn normalize_relators(p: &Presentation) -> Presentation {
    let mut set: Vec<Word> = p.relator_set().into_iter().collect();
    set.sort_by_cached_key(relator_key);
    Presentation { generators: p.generators.clone(), relators: set }
}

/// Tietze elimination of `g` via a relator witnessing `g = defining`.
pub fn eliminate_generator(
    p: &Presentation,
    g: &Generator,
    defining: &Word,
) -> Result<Presentation, PresentationError> {
    if !p.has_generator(g) {
        return Err(PresentationError::MissingGenerator(g.clone()));
    }
    let defining = free_reduce(defining);
    if defining.mentions(g) {
        return Err(PresentationError::SelfReferentialDefinition(g.clone()));
    }
    let remaining: Vec<Generator> = p.generators.iter().filter(|h| *h != g).cloned().collect();
    if let Some(h) = defining.generators().into_iter().find(|h| !remaining.contains(h)) {
        return Err(PresentationError::ForeignGenerator { relator: defining.render(), generator: h });
    }
    let witness = canonical_relator(&Word::generator(g).concat(&defining.inverse()));
    let used = p
        .relators
        .iter()
        .position(|r| canonical_relator(r) == witness)
        .ok_or_else(|| PresentationError::NoWitness { generator: g.clone(), defining: defining.render() })?;
    let subst = GeneratorMap::identity_on(&remaining).with(g, defining);
    let mut relators = Vec::with_capacity(p.relators.len() - 1);
    for (i, r) in p.relators.iter().enumerate() {
        if i != used {
            relators.push(subst.apply(r)?);
        }
    }
    Ok(normalize_relators(&Presentation::new(remaining, relators)?))
}

/// Direct product: disjoint union plus all cross-factor commutators.
pub fn direct_product(ps: &[Presentation]) -> Result<Presentation, PresentationError> {
    let mut generators: Vec<Generator> = Vec::new();
    let mut relators = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        for g in &p.generators {
            if generators.contains(g) {
                return Err(PresentationError::NameClash(g.clone()));
            }
        }
        for earlier in &ps[..i] {
            for x in &earlier.generators {
                for y in &p.generators {
                    relators.push(Word::commutator(&Word::generator(x), &Word::generator(y)));
                }
            }
        }
        generators.extend(p.generators.iter().cloned());
        relators.extend(p.relators.iter().cloned());
    }
    if ps.len() == 1 {
        return Ok(ps[0].clone());
    }
    Presentation::new(generators, relators).map(|p| normalize_relators(&p))
}

pub fn quotient_by_words(p: &Presentation, ws: &[Word]) -> Result<Presentation, PresentationError> {
    let mut relators = p.relators.clone();
    relators.extend(ws.iter().cloned());
    Presentation::new(p.generators.clone(), relators).map(|q| normalize_relators(&q))
}

/// Exponent-sum relation matrix; rows are relators, columns generators.
pub fn relation_matrix(p: &Presentation) -> Vec<Vec<BigInt>> {
    p.relators
        .iter()
        .map(|r| p.generators.iter().map(|g| BigInt::from(r.exponent_sum(g))).collect())
        .collect()
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let factors = smith::invariant_factors(relation_matrix(p), p.generators.len());
    let rank = p.generators.len() - factors.len();
    let torsion = factors.into_iter().filter(|d| !d.is_one()).collect();
    AbelianInvariants { rank, torsion }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::generators;
    use proptest::prelude::*;

    fn pres(gens: &[&str], rels: &[&str]) -> Presentation {
        let g = generators(gens.iter().copied());
        let r = rels
            .iter()
            .map(|t| match t.split_once('=') {
                Some((u, v)) => {
                    parse_word_sugared(u, &g).unwrap().concat(&parse_word_sugared(v, &g).unwrap().inverse())
                }
                None => parse_word_sugared(t, &g).unwrap(),
            })
            .collect();
        Presentation::new(g, r).unwrap()
    }

    #[test]
    fn normalization_merges_inverse_rotations() {
        let p = pres(&["a", "b"], &["a b a^-1 b^-1", "b a b^-1 a^-1"]);
        assert_eq!(p.normalized().relators().len(), 1);
        let q = pres(&["x", "y"], &["x y x^-1"]);
        assert_eq!(q.normalized().relators()[0].render(), "y");
        let e = pres(&["x"], &["", "x x^-1"]);
        assert!(e.normalized().relators().is_empty());
    }

    #[test]
    fn normalization_orders_by_length_then_text() {
        let p = pres(&["a", "b"], &["a b a b^-1", "b^2", "a^3"]);
        let rendered: Vec<_> = p.normalized().relators().iter().map(Word::render).collect();
        assert_eq!(rendered, ["b b", "a a a", "a b a b^-1"]);
    }

    #[test]
    fn rejects_foreign_generators() {
        let g = generators(["a"]);
        let w = Word::generator(&Generator::known("b"));
        assert!(matches!(Presentation::new(g, vec![w]), Err(PresentationError::ForeignGenerator { .. })));
    }

    #[test]
    fn eliminate_rename() {
        let p = pres(&["x", "y"], &["x y^-1"]);
        let y = Word::generator(&Generator::known("y"));
        let q = p.eliminate_generator(&Generator::known("x"), &y).unwrap();
        assert_eq!(q.generators(), &generators(["y"])[..]);
        assert!(q.relators().is_empty());
    }

    #[test]
    fn eliminate_errors() {
        let p = pres(&["x", "y"], &["x y^-1"]);
        let x = Generator::known("x");
        let z = Generator::known("z");
        let y = p.word("y").unwrap();
        assert_eq!(p.eliminate_generator(&z, &y), Err(PresentationError::MissingGenerator(z)));
        assert!(matches!(
            p.eliminate_generator(&x, &p.word("x y").unwrap()),
            Err(PresentationError::SelfReferentialDefinition(_))
        ));
        assert!(matches!(p.eliminate_generator(&x, &p.word("y^2").unwrap()), Err(PresentationError::NoWitness { .. })));
    }

    #[test]
    fn eliminate_witness_up_to_rotation_and_inversion() {
        // defining^-1 g form, inverted
        let p = pres(&["x", "y", "z"], &["y^-1 z^-1 x", "x z x^-1 z^-1"]);
        let q = p.eliminate_generator(&Generator::known("x"), &p.word("z y").unwrap()).unwrap();
        assert_eq!(q.relators().len(), 1);
        assert_eq!(q.relators()[0], canonical_relator(&q.word("z y z y^-1 z^-1 z^-1").unwrap()));
    }

    #[test]
    fn product_examples() {
        let a = pres(&["a"], &[]);
        let b = pres(&["b"], &[]);
        let ab = direct_product(&[a.clone(), b]).unwrap();
        assert_eq!(ab.generators().len(), 2);
        assert_eq!(ab.relators().len(), 1);
        assert_eq!(abelianization(&ab), AbelianInvariants { rank: 2, torsion: vec![] });
        assert_eq!(direct_product(std::slice::from_ref(&a)).unwrap(), a);
        assert!(matches!(direct_product(&[a.clone(), a]), Err(PresentationError::NameClash(_))));
    }

    #[test]
    fn quotient_example() {
        let a = pres(&["a"], &[]);
        let q = a.quotient_by_words(&[a.word("a^3").unwrap()]).unwrap();
        assert_eq!(q.relators()[0].render(), "a a a");
        assert_eq!(q.abelianization().torsion, vec![BigInt::from(3)]);
        let bad = Word::generator(&Generator::known("b"));
        assert!(a.quotient_by_words(&[bad]).is_err());
    }

    #[test]
    fn abelianization_examples() {
        let z2 = pres(&["a", "b"], &["a b a^-1 b^-1"]);
        assert_eq!(z2.abelianization(), AbelianInvariants { rank: 2, torsion: vec![] });
        let b4 = pres(&["a1", "b", "a2"], &["a1 b a1 = b a1 b", "a2 b a2 = b a2 b", "a1 a2 = a2 a1"]);
        assert_eq!(b4.abelianization(), AbelianInvariants { rank: 1, torsion: vec![] });
        let z6 = pres(&["a", "b"], &["a^2", "b^3", "a b a^-1 b^-1"]);
        assert_eq!(z6.abelianization(), AbelianInvariants { rank: 0, torsion: vec![BigInt::from(6)] });
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# demo\ngens: a, b\na b = b a  # commute\n(a b)^2\n";
        let p = Presentation::from_text(text).unwrap();
        assert_eq!(p.relators().len(), 2);
        assert_eq!(Presentation::from_text(&p.to_text()).unwrap(), p);
        assert!(matches!(Presentation::from_text("a b\n"), Err(PresentationError::Syntax { line: 1, .. })));
        assert!(matches!(Presentation::from_text("gens: a\nc\n"), Err(PresentationError::Syntax { line: 2, .. })));
    }

    fn arb_presentation() -> impl Strategy<Value = Presentation> {
        let names = ["a", "b", "c"];
        let word = prop::collection::vec((0..3usize, -2i64..=2), 1..6);
        prop::collection::vec(word, 0..5).prop_map(move |rels| {
            let g = generators(names);
            let rels = rels
                .into_iter()
                .map(|atoms| {
                    atoms.into_iter().fold(Word::identity(), |acc, (i, e)| {
                        acc.concat(&Word::generator(&g[i]).pow(e))
                    })
                })
                .collect();
            Presentation::new(g, rels).unwrap()
        })
    }

    proptest! {
        #[test]
        fn abelianization_is_invariant(p in arb_presentation(), seed in any::<u64>()) {
            let ab = p.abelianization();
            prop_assert_eq!(&p.normalized().abelianization(), &ab);
            let mut rels = p.relators().to_vec();
            let n = rels.len().max(1);
            rels.rotate_left((seed as usize) % n);
            rels.reverse();
            let permuted = Presentation::new(p.generators().to_vec(), rels).unwrap();
            prop_assert_eq!(&permuted.abelianization(), &ab);
            // Tietze: add d = word, then eliminate it again
            let d = Generator::known("d");
            let def = Word::generator(&p.generators()[0]).concat(&Word::generator(&p.generators()[1]));
            let mut gens = p.generators().to_vec();
            gens.push(d.clone());
            let mut rels = p.relators().to_vec();
            rels.push(Word::generator(&d).concat(&def.inverse()));
            let bigger = Presentation::new(gens, rels).unwrap();
            prop_assert_eq!(&bigger.abelianization(), &ab);
            let back = bigger.eliminate_generator(&d, &def).unwrap();
            prop_assert_eq!(back.abelianization(), ab);
            prop_assert_eq!(back.relator_set(), p.relator_set());
        }

        #[test]
        fn product_abelianization_adds(p in arb_presentation(), q in arb_presentation()) {
            let rename = |g: &Generator| Generator::new(&format!("{}2", g)).unwrap();
            let map: GeneratorMap = q.generators().iter().fold(GeneratorMap::new(), |m, g| {
                m.with(g, Word::generator(&rename(g)))
            });
            let q2 = Presentation::new(
                q.generators().iter().map(rename).collect(),
                q.relators().iter().map(|r| map.apply(r).unwrap()).collect(),
            ).unwrap();
            let prod = direct_product(&[p.clone(), q2]).unwrap().abelianization();
            let (a, b) = (p.abelianization(), q.abelianization());
            prop_assert_eq!(prod.rank, a.rank + b.rank);
            let mut merged: Vec<BigInt> = a.torsion.iter().chain(&b.torsion).cloned().collect();
            merged.sort();
            let mut got = prod.torsion.clone();
            got.sort();
            // same finite part up to re-grouping of invariant factors
            prop_assert_eq!(merged.iter().product::<BigInt>(), got.iter().product::<BigInt>());
        }
    }
}
