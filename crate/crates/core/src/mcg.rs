//! Surface-indexed group constructions: Gervais presentations in genus one,
//! boundary capping, pure braid groups, and word-problem oracles for
//! composite group expressions.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem};
use crate::garside::{self, GarsideError};
use crate::linrep::{self, LinrepError, PolyMatrix, Representation};
use crate::presentation::{direct_product, Presentation, PresentationError};
use crate::word::{generators, parse_word_sugared, Generator, GeneratorMap, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McgError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed group expression: {0}")]
    Malformed(String),
    #[error("{word} is not central in {group}")]
    NotCentral { word: String, group: String },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Garside(#[from] GarsideError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Linrep(#[from] LinrepError),
}

/// `Σ_{g,b,n}`: genus, boundary components, punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SurfaceTriple {
    pub g: u32,
    pub b: u32,
    pub n: u32,
}

impl SurfaceTriple {
    pub fn new(g: u32, b: u32, n: u32) -> Self {
        SurfaceTriple { g, b, n }
    }

    pub fn is_supported(&self) -> bool {
        match self.g {
            0 => self.b >= 1,
            1 => self.b + self.n <= 3,
            _ => false,
        }
    }
}

impl fmt::Display for SurfaceTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.g, self.b, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupExpr {
    /// The braid group on `n` strands with the given atom names.
    ArtinA { n: usize, atoms: Vec<Generator> },
    ArtinD4 { atoms: Vec<Generator> },
    FreeAbelian { gens: Vec<Generator> },
    PureBraid { k: usize },
    Product(Vec<GroupExpr>),
    CentralQuotient(Box<GroupExpr>, Word),
}

impl GroupExpr {
    pub fn braid(n: usize) -> Self {
        let names: Vec<String> = (1..n).map(|i| format!("s{i}")).collect();
        GroupExpr::ArtinA { n, atoms: generators(names.iter().map(String::as_str)) }
    }

    /// `B4` on the path `a1 – b – a2`.
    pub fn b4() -> Self {
        GroupExpr::ArtinA { n: 4, atoms: generators(["a1", "b", "a2"]) }
    }

    pub fn d4() -> Self {
        GroupExpr::ArtinD4 { atoms: generators(["a1", "a2", "a3", "b"]) }
    }

    pub fn free_abelian(names: &[&str]) -> Self {
        GroupExpr::FreeAbelian { gens: generators(names.iter().copied()) }
    }

    /// `Z^k` on `z1 … zk`.
    pub fn free_abelian_rank(k: usize) -> Self {
        let names: Vec<String> = (1..=k).map(|i| format!("z{i}")).collect();
        GroupExpr::FreeAbelian { gens: generators(names.iter().map(String::as_str)) }
    }

    pub fn product(children: Vec<GroupExpr>) -> Self {
        GroupExpr::Product(children)
    }

    pub fn quotient(child: GroupExpr, centre: Word) -> Self {
        GroupExpr::CentralQuotient(Box::new(child), centre)
    }

    /// Quotient with the centre word given as text over the child's alphabet.
    pub fn quotient_text(child: GroupExpr, centre: &str) -> Result<Self, McgError> {
        let w = parse_word_sugared(centre, &child.generators())?;
        Ok(GroupExpr::quotient(child, w))
    }

    pub fn generators(&self) -> Vec<Generator> {
        match self {
            GroupExpr::ArtinA { atoms, .. } | GroupExpr::ArtinD4 { atoms } => atoms.clone(),
            GroupExpr::FreeAbelian { gens } => gens.clone(),
            GroupExpr::PureBraid { k } => pure_braid_generators(*k),
            GroupExpr::Product(cs) => cs.iter().flat_map(GroupExpr::generators).collect(),
            GroupExpr::CentralQuotient(c, _) => c.generators(),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            GroupExpr::ArtinA { .. } => "ArtinA",
            GroupExpr::ArtinD4 { .. } => "ArtinD4",
            GroupExpr::FreeAbelian { .. } => "FreeAbelian",
            GroupExpr::PureBraid { .. } => "PureBraid",
            GroupExpr::Product(_) => "Product",
            GroupExpr::CentralQuotient(..) => "CentralQuotient",
        }
    }

    /// `{"kind", "children", "param", "gens"}`.
    pub fn to_json(&self) -> Value {
        let names = |gs: &[Generator]| gs.iter().map(|g| g.as_str().to_string()).collect::<Vec<_>>();
        match self {
            GroupExpr::ArtinA { n, atoms } => json!({"kind": self.kind_name(), "children": [], "param": n, "gens": names(atoms)}),
            GroupExpr::ArtinD4 { atoms } => json!({"kind": self.kind_name(), "children": [], "param": 4, "gens": names(atoms)}),
            GroupExpr::FreeAbelian { gens } => {
                json!({"kind": self.kind_name(), "children": [], "param": gens.len(), "gens": names(gens)})
            }
            GroupExpr::PureBraid { k } => json!({"kind": self.kind_name(), "children": [], "param": k}),
            GroupExpr::Product(cs) => {
                json!({"kind": self.kind_name(), "children": cs.iter().map(GroupExpr::to_json).collect::<Vec<_>>()})
            }
            GroupExpr::CentralQuotient(c, z) => {
                json!({"kind": self.kind_name(), "children": [c.to_json()], "param": z.render()})
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, McgError> {
        let bad = |m: &str| McgError::Malformed(m.to_string());
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing kind"))?;
        let children = || -> Result<Vec<GroupExpr>, McgError> {
            v.get("children")
                .and_then(Value::as_array)
                .map(|cs| cs.iter().map(GroupExpr::from_json).collect())
                .unwrap_or_else(|| Ok(Vec::new()))
        };
        let param_int = || v.get("param").and_then(Value::as_u64).map(|k| k as usize);
        let gens = || -> Result<Option<Vec<Generator>>, McgError> {
            match v.get("gens").and_then(Value::as_array) {
                None => Ok(None),
                Some(xs) => xs
                    .iter()
                    .map(|x| Generator::new(x.as_str().unwrap_or("")).map_err(McgError::from))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Some),
            }
        };
        match kind {
            "ArtinA" => {
                let n = param_int().ok_or_else(|| bad("ArtinA needs an integer param"))?;
                Ok(match gens()? {
                    Some(atoms) => GroupExpr::ArtinA { n, atoms },
                    None => GroupExpr::braid(n),
                })
            }
            "ArtinD4" => Ok(match gens()? {
                Some(atoms) => GroupExpr::ArtinD4 { atoms },
                None => GroupExpr::d4(),
            }),
            "FreeAbelian" => match gens()? {
                Some(gens) => Ok(GroupExpr::FreeAbelian { gens }),
                None => Ok(GroupExpr::free_abelian_rank(param_int().ok_or_else(|| bad("FreeAbelian needs a rank"))?)),
            },
            "PureBraid" => Ok(GroupExpr::PureBraid { k: param_int().ok_or_else(|| bad("PureBraid needs k"))? }),
            "Product" => Ok(GroupExpr::Product(children()?)),
            "CentralQuotient" => {
                let mut cs = children()?;
                if cs.len() != 1 {
                    return Err(bad("CentralQuotient needs exactly one child"));
                }
                let child = cs.remove(0);
                let text = v.get("param").and_then(Value::as_str).ok_or_else(|| bad("centre word missing"))?;
                GroupExpr::quotient_text(child, text)
            }
            other => Err(McgError::Malformed(format!("unknown kind {other}"))),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::ArtinA { n, .. } => write!(f, "B{n}"),
            GroupExpr::ArtinD4 { .. } => f.write_str("A(D4)"),
            GroupExpr::FreeAbelian { gens } => match gens.len() {
                1 => f.write_str("Z"),
                k => write!(f, "Z^{k}"),
            },
            GroupExpr::PureBraid { k } => write!(f, "PB{k}"),
            GroupExpr::Product(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                f.write_str(&parts.join(" × "))
            }
            GroupExpr::CentralQuotient(c, z) => match **c {
                GroupExpr::Product(_) => write!(f, "({c})/⟨{z}⟩"),
                _ => write!(f, "{c}/⟨{z}⟩"),
            },
        }
    }
}

impl Serialize for GroupExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

pub fn pure_braid_generators(k: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for j in 2..=k {
        for i in 1..j {
            out.push(pure_braid_generator(i, j));
        }
    }
    out
}

fn pure_braid_generator(i: usize, j: usize) -> Generator {
    Generator::new(&format!("A{i}{j}")).expect("valid name")
}

/// Largest pure braid group with two-digit generator names.
pub const MAX_PURE_STRANDS: usize = 9;

/// Standard pure braid presentation on `A_ij` and its embedding into the
/// braid atoms `s1 … s_{k-1}`: `A_ij ↦ s_{j-1}⋯s_{i+1} s_i² s_{i+1}⁻¹⋯s_{j-1}⁻¹`.
pub fn pure_braid_presentation(k: usize) -> Result<(Presentation, GeneratorMap), McgError> {
    if k < 1 {
        return Err(McgError::Unsupported("pure braid groups need k ≥ 1".into()));
    }
    if k > MAX_PURE_STRANDS {
        return Err(McgError::Unsupported(format!("pure braid groups need k ≤ {MAX_PURE_STRANDS}")));
    }
    let a = |i: usize, j: usize| Word::generator(&pure_braid_generator(i, j));
    let mut relators = Vec::new();
    for r in 1..=k {
        for s in r + 1..=k {
            for i in 1..=k {
                for j in i + 1..=k {
                    if (r, s) == (i, j) {
                        continue;
                    }
                    let rhs = if s < i || j < r || (i < r && s < j) {
                        a(i, j)
                    } else if s == i {
                        a(r, j).concat(&a(i, j)).concat(&a(r, j).inverse())
                    } else if i == r && s < j {
                        let c = a(r, j).concat(&a(s, j));
                        c.concat(&a(i, j)).concat(&c.inverse())
                    } else if r < i && i < s && s < j {
                        let c = Word::commutator(&a(r, j), &a(s, j));
                        c.concat(&a(i, j)).concat(&c.inverse())
                    } else {
                        continue;
                    };
                    let lhs = a(r, s).inverse().concat(&a(i, j)).concat(&a(r, s));
                    relators.push(lhs.concat(&rhs.inverse()));
                }
            }
        }
    }
    let gens = pure_braid_generators(k);
    let p = Presentation::new(gens.clone(), relators)?.normalized();
    let atoms: Vec<Generator> = (1..k).map(|i| Generator::new(&format!("s{i}")).expect("valid name")).collect();
    let s = |i: usize| Word::generator(&atoms[i - 1]);
    let mut map = GeneratorMap::new();
    for j in 2..=k {
        for i in 1..j {
            let pre = (i + 1..j).rev().fold(Word::identity(), |acc, m| acc.concat(&s(m)));
            map.insert(pure_braid_generator(i, j), pre.concat(&s(i).pow(2)).concat(&pre.inverse()));
        }
    }
    Ok((p, map))
}

/// `(A12)(A13 A23)(A14 A24 A34)⋯`.
pub fn full_twist(k: usize) -> Word {
    let mut w = Word::identity();
    for j in 2..=k {
        for i in 1..j {
            w = w.concat(&Word::generator(&pure_braid_generator(i, j)));
        }
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveRole {
    CentralB,
    HandleA(u8),
    BoundaryC(u8, u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GervaisData {
    pub presentation: Presentation,
    pub curve_roles: BTreeMap<Generator, CurveRole>,
}

pub type Triple = (u8, u8, u8);

/// The triple-admissibility rule: cyclically non-decreasing, not constant.
pub fn is_good_triple((i, j, k): Triple) -> bool {
    let cyclic = (i <= j && j <= k) || (j <= k && k <= i) || (k <= i && i <= j);
    cyclic && !(i == j && j == k)
}

/// Good triples over `{1..k}` with `i ≤ j < k`, which suffice for the stars.
pub fn good_triples(k: u8) -> Result<Vec<Triple>, McgError> {
    if !(2..=3).contains(&k) {
        return Err(McgError::Unsupported(format!("good triples over {{1..{k}}}")));
    }
    let mut out = Vec::new();
    for i in 1..=k {
        for j in i..=k {
            for l in j + 1..=k {
                out.push((i, j, l));
            }
        }
    }
    Ok(out)
}

fn gen(name: &str) -> Generator {
    Generator::new(name).expect("valid name")
}

fn c_name(i: u8, j: u8) -> Generator {
    gen(&format!("c{i}{j}"))
}

fn a_name(i: u8) -> Generator {
    gen(&format!("a{i}"))
}

/// Fundamental-element word for a triple: `(a_i a_j a_k b)^3` when distinct,
/// else the rewritten degenerate form `(a_i b a_j)^4`.
pub fn star_lhs((i, j, k): Triple) -> Word {
    let a = |x: u8| Word::generator(&a_name(x));
    let b = Word::generator(&gen("b"));
    if i != j && j != k && k != i {
        a(i).concat(&a(j)).concat(&a(k)).concat(&b).pow(3)
    } else {
        let mut idx = [i, j, k];
        idx.sort();
        let (lo, hi) = (idx[0], idx[2]);
        a(lo).concat(&b).concat(&a(hi)).pow(4)
    }
}

/// `c_ij c_jk c_ki` with `c_ll = 1`.
pub fn star_rhs((i, j, k): Triple) -> Word {
    [(i, j), (j, k), (k, i)]
        .into_iter()
        .filter(|(x, y)| x != y)
        .fold(Word::identity(), |acc, (x, y)| acc.concat(&Word::generator(&c_name(x, y))))
}

/// Star relator `c_ij c_jk c_ki · Δ⁻¹`.
pub fn star_relator(t: Triple) -> Word {
    star_rhs(t).concat(&star_lhs(t).inverse())
}

/// Two curves are disjoint; `None` means a single intersection (braid).
fn gervais_commute(x: CurveRole, y: CurveRole, boundaries: u8) -> Option<bool> {
    use CurveRole::*;
    let special = |i: u8, j: u8| boundaries == 2 || [(1, 2), (2, 3), (3, 1)].contains(&(i, j));
    match (x, y) {
        (HandleA(_), HandleA(_)) => Some(true),
        (CentralB, HandleA(_)) | (HandleA(_), CentralB) => None,
        (CentralB, BoundaryC(..)) | (BoundaryC(..), CentralB) => Some(true),
        (HandleA(l), BoundaryC(i, j)) | (BoundaryC(i, j), HandleA(l)) => {
            Some(boundaries == 2 || (i, j) != excluded_for(l))
        }
        (BoundaryC(i, j), BoundaryC(k, l)) => Some(special(i, j) || special(k, l)),
        (CentralB, CentralB) => Some(true),
    }
}

fn excluded_for(l: u8) -> (u8, u8) {
    match l {
        1 => (3, 2),
        2 => (1, 3),
        _ => (2, 1),
    }
}

/// Gervais presentation of `PMod(1,3,0)` or `PMod(1,2,0)`.
pub fn gervais_presentation(t: SurfaceTriple) -> Result<GervaisData, McgError> {
    let boundaries: u8 = match (t.g, t.b, t.n) {
        (1, 3, 0) => 3,
        (1, 2, 0) => 2,
        _ => return Err(McgError::Unsupported(format!("no Gervais presentation for {t}"))),
    };
    let mut roles: Vec<(Generator, CurveRole)> = vec![(gen("b"), CurveRole::CentralB)];
    for i in 1..=boundaries {
        roles.push((a_name(i), CurveRole::HandleA(i)));
    }
    let pairs: &[(u8, u8)] =
        if boundaries == 3 { &[(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)] } else { &[(1, 2), (2, 1)] };
    for &(i, j) in pairs {
        roles.push((c_name(i, j), CurveRole::BoundaryC(i, j)));
    }
    let mut relators = Vec::new();
    for (x, (gx, rx)) in roles.iter().enumerate() {
        for (gy, ry) in &roles[x + 1..] {
            let (u, v) = (Word::generator(gx), Word::generator(gy));
            match gervais_commute(*rx, *ry, boundaries) {
                Some(true) => relators.push(Word::commutator(&u, &v)),
                Some(false) => {}
                None => relators.push(u.concat(&v).concat(&u).concat(&v.concat(&u).concat(&v).inverse())),
            }
        }
    }
    for tr in good_triples(boundaries)? {
        relators.push(star_relator(tr));
    }
    let gens = roles.iter().map(|(g, _)| g.clone()).collect();
    Ok(GervaisData {
        presentation: Presentation::new(gens, relators)?.normalized(),
        curve_roles: roles.into_iter().collect(),
    })
}

/// Kills the boundary twist `c` and drops it from the generators.
pub fn cap_boundary(p: &Presentation, c: &Generator) -> Result<Presentation, McgError> {
    if !p.has_generator(c) {
        return Err(PresentationError::MissingGenerator(c.clone()).into());
    }
    let q = p.quotient_by_words(&[Word::generator(c)])?;
    Ok(q.eliminate_generator(c, &Word::identity())?)
}

/// A word-problem oracle for a [`GroupExpr`].
#[derive(Debug, Clone)]
pub struct ComputableGroup {
    expr: GroupExpr,
    node: Node,
}

#[derive(Debug, Clone)]
enum Node {
    Artin(CoxeterSystem),
    FreeAbelian(Vec<Generator>),
    PureBraid { sys: CoxeterSystem, embedding: GeneratorMap },
    Product(Vec<ComputableGroup>),
    Quotient { inner: Box<ComputableGroup>, centre: Word, rule: PowerRule },
}

/// How to find the exponent `m` with `w = z^m` in a central quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PowerRule {
    /// Artin leaf with `z = Δ^d`.
    DeltaPower(i64),
    /// Total exponent sum is a homomorphism with `ℓ(z) ≠ 0`.
    ExponentSum(i64),
    /// Bounded search over `|m| ≤ len(w) / len(z)`.
    Search,
}

impl ComputableGroup {
    pub fn new(expr: GroupExpr) -> Result<Self, McgError> {
        let node = match &expr {
            GroupExpr::ArtinA { n, atoms } => Node::Artin(CoxeterSystem::type_a_named(*n, atoms.clone())?),
            GroupExpr::ArtinD4 { atoms } => Node::Artin(CoxeterSystem::d4_named(atoms.clone())?),
            GroupExpr::FreeAbelian { gens } => Node::FreeAbelian(gens.clone()),
            GroupExpr::PureBraid { k } => {
                let (_, embedding) = pure_braid_presentation(*k)?;
                Node::PureBraid { sys: CoxeterSystem::type_a(*k)?, embedding }
            }
            GroupExpr::Product(cs) => {
                let parts = cs.iter().cloned().map(ComputableGroup::new).collect::<Result<Vec<_>, _>>()?;
                let mut seen = Vec::new();
                for g in parts.iter().flat_map(|p| p.generators()) {
                    if seen.contains(&g) {
                        return Err(McgError::Malformed(format!("generator {g} appears in two factors")));
                    }
                    seen.push(g);
                }
                Node::Product(parts)
            }
            GroupExpr::CentralQuotient(child, centre) => {
                let inner = ComputableGroup::new((**child).clone())?;
                let gens = inner.generators();
                if let Some(g) = centre.generators().into_iter().find(|g| !gens.contains(g)) {
                    return Err(McgError::Malformed(format!("centre word uses foreign generator {g}")));
                }
                if !inner.is_central(centre)? {
                    return Err(McgError::NotCentral { word: centre.render(), group: child.to_string() });
                }
                let rule = match &inner.node {
                    Node::Artin(sys) => match garside::delta_power_of(sys, centre)? {
                        Some(d) => PowerRule::DeltaPower(d),
                        None => PowerRule::Search,
                    },
                    _ if inner.is_balanced() && centre.total_exponent() != 0 => {
                        PowerRule::ExponentSum(centre.total_exponent())
                    }
                    _ => PowerRule::Search,
                };
                Node::Quotient { inner: Box::new(inner), centre: centre.clone(), rule }
            }
        };
        Ok(ComputableGroup { expr, node })
    }

    pub fn expr(&self) -> &GroupExpr {
        &self.expr
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.expr.generators()
    }

    /// Parses a word over this group's generators (power sugar allowed).
    pub fn word(&self, text: &str) -> Result<Word, McgError> {
        Ok(parse_word_sugared(text, &self.generators())?)
    }

    /// The defining presentation of the expression.
    pub fn presentation(&self) -> Result<Presentation, McgError> {
        Ok(match &self.node {
            Node::Artin(sys) => sys.artin_presentation().normalized(),
            Node::FreeAbelian(gens) => {
                let mut rels = Vec::new();
                for (i, x) in gens.iter().enumerate() {
                    for y in &gens[i + 1..] {
                        rels.push(Word::commutator(&Word::generator(x), &Word::generator(y)));
                    }
                }
                Presentation::new(gens.clone(), rels)?.normalized()
            }
            Node::PureBraid { sys, .. } => pure_braid_presentation(sys.rank() + 1)?.0,
            Node::Product(parts) => {
                let ps = parts.iter().map(ComputableGroup::presentation).collect::<Result<Vec<_>, _>>()?;
                direct_product(&ps)?.normalized()
            }
            Node::Quotient { inner, centre, .. } => inner.presentation()?.quotient_by_words(std::slice::from_ref(centre))?,
        })
    }

    /// Every defining relator has total exponent zero.
    fn is_balanced(&self) -> bool {
        match &self.node {
            Node::Artin(_) | Node::FreeAbelian(_) | Node::PureBraid { .. } => true,
            Node::Product(parts) => parts.iter().all(ComputableGroup::is_balanced),
            Node::Quotient { .. } => false,
        }
    }

    fn check_alphabet(&self, w: &Word) -> Result<(), McgError> {
        let gens = self.generators();
        match w.generators().into_iter().find(|g| !gens.contains(g)) {
            Some(g) => Err(McgError::Malformed(format!("{g} is not a generator of {}", self.expr))),
            None => Ok(()),
        }
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool, McgError> {
        self.check_alphabet(w)?;
        match &self.node {
            Node::Artin(sys) => Ok(garside::is_trivial(sys, w)?),
            Node::FreeAbelian(gens) => Ok(gens.iter().all(|g| w.exponent_sum(g) == 0)),
            Node::PureBraid { sys, embedding } => Ok(garside::is_trivial(sys, &embedding.apply(w)?)?),
            Node::Product(parts) => {
                for p in parts {
                    let gens = p.generators();
                    if !p.is_trivial(&w.project(|g| gens.contains(g)))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Node::Quotient { inner, centre, rule } => match *rule {
                PowerRule::DeltaPower(d) => {
                    let Node::Artin(sys) = &inner.node else { unreachable!("Δ rule only on Artin leaves") };
                    Ok(match garside::delta_power_of(sys, w)? {
                        None => false,
                        Some(p) if d == 0 => p == 0,
                        Some(p) => p % d == 0,
                    })
                }
                PowerRule::ExponentSum(lz) => {
                    let lw = w.total_exponent();
                    if lw % lz != 0 {
                        return Ok(false);
                    }
                    inner.is_trivial(&w.concat(&centre.pow(-(lw / lz))))
                }
                PowerRule::Search => {
                    let bound = if centre.is_empty() { 0 } else { (w.len() / centre.len()) as i64 + 1 };
                    for m in -bound..=bound {
                        if inner.is_trivial(&w.concat(&centre.pow(-m)))? {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                }
            },
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool, McgError> {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// `w` commutes with every generator.
    pub fn is_central(&self, w: &Word) -> Result<bool, McgError> {
        if let Node::Artin(sys) = &self.node {
            self.check_alphabet(w)?;
            return Ok(garside::is_central(sys, w)?);
        }
        for g in self.generators() {
            let g = Word::generator(&g);
            if !self.equal(&w.concat(&g), &g.concat(w))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Faithful block representations mirroring the expression tree.
    pub fn matrix_model(&self) -> Result<MatrixModel, McgError> {
        Ok(match &self.node {
            Node::Artin(sys) => match sys.kind() {
                crate::coxeter::CoxeterKind::TypeD4 => MatrixModel::Leaf(linrep::cw_representation_on(sys)?),
                crate::coxeter::CoxeterKind::TypeA(_) => MatrixModel::Leaf(linrep::lk_representation_on(sys)?),
            },
            Node::FreeAbelian(gens) => MatrixModel::Leaf(linrep::free_abelian_representation(gens)),
            Node::PureBraid { sys, embedding } => {
                let gens = self.generators();
                if gens.is_empty() {
                    MatrixModel::Leaf(linrep::free_abelian_representation(&[]))
                } else {
                    let lk = linrep::lk_representation_on(sys)?;
                    MatrixModel::Leaf(lk.pullback(&gens, embedding)?)
                }
            }
            Node::Product(parts) => MatrixModel::Product(
                parts
                    .iter()
                    .map(|p| Ok((p.generators(), p.matrix_model()?)))
                    .collect::<Result<Vec<_>, McgError>>()?,
            ),
            Node::Quotient { inner, centre, rule } => {
                let model = inner.matrix_model()?;
                let lz = match rule {
                    PowerRule::DeltaPower(_) | PowerRule::ExponentSum(_) => centre.total_exponent(),
                    PowerRule::Search => 0,
                };
                if lz == 0 {
                    return Err(McgError::Unsupported(format!("matrix model for {}", self.expr)));
                }
                let image = model.evaluate(centre)?;
                MatrixModel::Quotient { inner: Box::new(model), centre: centre.clone(), centre_image: image, weight: lz }
            }
        })
    }
}

/// Equality mode of a matrix model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EqualityMode {
    Exact,
    Projective,
}

#[derive(Debug, Clone)]
pub enum MatrixModel {
    Leaf(Representation),
    Product(Vec<(Vec<Generator>, MatrixModel)>),
    /// Trivial iff the image is a power of the central image.
    Quotient { inner: Box<MatrixModel>, centre: Word, centre_image: PolyMatrix, weight: i64 },
}

impl MatrixModel {
    pub fn mode(&self) -> EqualityMode {
        match self {
            MatrixModel::Leaf(_) => EqualityMode::Exact,
            MatrixModel::Product(parts) => {
                if parts.iter().any(|(_, m)| m.mode() == EqualityMode::Projective) {
                    EqualityMode::Projective
                } else {
                    EqualityMode::Exact
                }
            }
            MatrixModel::Quotient { .. } => EqualityMode::Projective,
        }
    }

    /// The block-diagonal representation of the underlying (unquotiented) group.
    pub fn flatten(&self) -> Result<Representation, McgError> {
        Ok(match self {
            MatrixModel::Leaf(r) => r.clone(),
            MatrixModel::Product(parts) => {
                let reps = parts.iter().map(|(_, m)| m.flatten()).collect::<Result<Vec<_>, _>>()?;
                Representation::direct_sum(&reps)?
            }
            MatrixModel::Quotient { inner, .. } => inner.flatten()?,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            MatrixModel::Leaf(r) => r.dim(),
            MatrixModel::Product(parts) => parts.iter().map(|(_, m)| m.dim()).sum(),
            MatrixModel::Quotient { inner, .. } => inner.dim(),
        }
    }

    pub fn convention(&self) -> String {
        match self {
            MatrixModel::Leaf(r) => r.convention().to_string(),
            MatrixModel::Product(parts) => parts.iter().map(|(_, m)| m.convention()).collect::<Vec<_>>().join(" ⊕ "),
            MatrixModel::Quotient { inner, .. } => format!("{} mod centre", inner.convention()),
        }
    }

    /// Image of `w` in the underlying block representation.
    pub fn evaluate(&self, w: &Word) -> Result<PolyMatrix, McgError> {
        Ok(match self {
            MatrixModel::Leaf(r) => r.evaluate(w)?,
            MatrixModel::Product(parts) => {
                let blocks = parts
                    .iter()
                    .map(|(gens, m)| m.evaluate(&w.project(|g| gens.contains(g))))
                    .collect::<Result<Vec<_>, _>>()?;
                PolyMatrix::block_diagonal(&blocks)
            }
            MatrixModel::Quotient { inner, .. } => inner.evaluate(w)?,
        })
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool, McgError> {
        match self {
            MatrixModel::Leaf(r) => Ok(r.evaluate(w)?.is_identity()),
            MatrixModel::Product(parts) => {
                for (gens, m) in parts {
                    if !m.is_trivial(&w.project(|g| gens.contains(g)))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            MatrixModel::Quotient { inner, centre, centre_image, weight } => {
                let lw = w.total_exponent();
                if lw % weight != 0 {
                    return Ok(false);
                }
                let m = lw / weight;
                let image = inner.evaluate(w)?;
                if let (Some(u), Some((s, dq, dt))) = (image.monomial_scalar_of(), centre_image.monomial_scalar_of()) {
                    // both scalar: compare units directly
                    let sign = if m % 2 == 0 { 1 } else { s };
                    return Ok(u == (sign, dq * m as i32, dt * m as i32));
                }
                inner.is_trivial(&w.concat(&centre.pow(-m)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn good_triple_lists() {
        assert_eq!(good_triples(3).unwrap(), vec![(1, 1, 2), (1, 1, 3), (1, 2, 3), (2, 2, 3)]);
        assert_eq!(good_triples(2).unwrap(), vec![(1, 1, 2)]);
        assert!(good_triples(4).is_err());
        assert!(is_good_triple((1, 2, 3)));
        assert!(is_good_triple((2, 3, 1)));
        assert!(!is_good_triple((2, 1, 3)));
        assert!(!is_good_triple((1, 1, 1)));
    }

    #[test]
    fn gervais_shapes() {
        let g130 = gervais_presentation(SurfaceTriple::new(1, 3, 0)).unwrap();
        assert_eq!(g130.presentation.generators().len(), 10);
        assert_eq!(g130.presentation.relators().len(), 43);
        let star = g130.presentation.word("c12 c23 c31 ((a1 a2 a3 b)^3)^-1").unwrap();
        assert!(g130.presentation.contains_relator(&star));
        let a1c32 = g130.presentation.word("a1 c32 a1^-1 c32^-1").unwrap();
        assert!(!g130.presentation.contains_relator(&a1c32));
        let g120 = gervais_presentation(SurfaceTriple::new(1, 2, 0)).unwrap();
        assert_eq!(g120.presentation.generators().len(), 5);
        assert_eq!(g120.presentation.relators().len(), 11);
        let star = g120.presentation.word("c12 c21 (a1 b a2)^-4").unwrap();
        assert!(g120.presentation.contains_relator(&star));
        assert!(gervais_presentation(SurfaceTriple::new(1, 1, 1)).is_err());
    }

    #[test]
    fn gervais_is_stable() {
        let t = SurfaceTriple::new(1, 3, 0);
        let a = gervais_presentation(t).unwrap().presentation;
        let b = gervais_presentation(t).unwrap().presentation;
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.normalized(), a);
    }

    #[test]
    fn capping() {
        let p = Presentation::from_text("gens: x, y, c\nx y = y x\n").unwrap();
        let capped = cap_boundary(&p, &gen("c")).unwrap();
        assert_eq!(capped.generators(), &generators(["x", "y"])[..]);
        assert_eq!(capped.relators().len(), 1);
        assert!(cap_boundary(&p, &gen("d")).is_err());
        let g120 = gervais_presentation(SurfaceTriple::new(1, 2, 0)).unwrap().presentation;
        let once = cap_boundary(&g120, &gen("c21")).unwrap();
        assert_eq!(cap_boundary(&g120.normalized(), &gen("c21")).unwrap(), once.normalized());
    }

    #[test]
    fn pure_braids() {
        let (p1, m1) = pure_braid_presentation(1).unwrap();
        assert!(p1.generators().is_empty());
        assert_eq!(m1.source().count(), 0);
        let (p2, m2) = pure_braid_presentation(2).unwrap();
        assert_eq!(p2.generators().len(), 1);
        assert!(p2.relators().is_empty());
        assert_eq!(m2.get(&gen("A12")).unwrap().render(), "s1 s1");
        for k in 3..=5 {
            let (p, m) = pure_braid_presentation(k).unwrap();
            let sys = CoxeterSystem::type_a(k).unwrap();
            assert_eq!(p.generators().len(), k * (k - 1) / 2);
            for r in p.relators() {
                assert!(garside::is_trivial(&sys, &m.apply(r).unwrap()).unwrap(), "{r}");
            }
            assert_eq!(garside::delta_power_of(&sys, &m.apply(&full_twist(k)).unwrap()).unwrap(), Some(2));
            assert_eq!(p.abelianization().rank, k * (k - 1) / 2);
        }
        assert!(pure_braid_presentation(0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let q = ComputableGroup::new(GroupExpr::quotient_text(GroupExpr::b4(), "(a1 b a2)^4").unwrap()).unwrap();
        assert!(q.is_trivial(&q.word("(a1 b a2)^4").unwrap()).unwrap());
        assert!(q.is_trivial(&q.word("(a1 b a2)^-8").unwrap()).unwrap());
        assert!(!q.is_trivial(&q.word("(a1 b a2)^2").unwrap()).unwrap());
        let p = ComputableGroup::new(GroupExpr::product(vec![GroupExpr::d4(), GroupExpr::free_abelian_rank(2)])).unwrap();
        assert!(p.is_trivial(&p.word("z1 a1 z1^-1 a1^-1").unwrap()).unwrap());
        assert!(!p.is_trivial(&p.word("z1 a1 z2^-1 a1^-1").unwrap()).unwrap());
        let pb = ComputableGroup::new(GroupExpr::PureBraid { k: 3 }).unwrap();
        let sys = CoxeterSystem::type_a(3).unwrap();
        let (_, emb) = pure_braid_presentation(3).unwrap();
        let ft = emb.apply(&pb.word("A12 A13 A23").unwrap()).unwrap();
        assert!(garside::equal_words(&sys, &ft, &parse_word_sugared("(s1 s2)^3", sys.atoms()).unwrap()).unwrap());
        assert!(pb.is_central(&full_twist(3)).unwrap());
        assert!(!pb.is_central(&pb.word("A12").unwrap()).unwrap());
    }

    #[test]
    fn quotient_rejects_non_central_words() {
        let err = ComputableGroup::new(GroupExpr::quotient_text(GroupExpr::b4(), "b").unwrap()).unwrap_err();
        assert!(matches!(err, McgError::NotCentral { .. }));
        let foreign = GroupExpr::quotient(GroupExpr::b4(), Word::generator(&gen("z9")));
        assert!(matches!(ComputableGroup::new(foreign), Err(McgError::Malformed(_))));
    }

    #[test]
    fn product_quotient_uses_exponent_sums() {
        let inner = GroupExpr::product(vec![GroupExpr::d4(), GroupExpr::free_abelian(&["c12", "c23", "c31"])]);
        let g = ComputableGroup::new(GroupExpr::quotient_text(inner, "c12 c23 c31 (a1 a2 a3 b)^-3").unwrap()).unwrap();
        assert!(g.equal(&g.word("c12 c23 c31").unwrap(), &g.word("(a1 a2 a3 b)^3").unwrap()).unwrap());
        assert!(!g.equal(&g.word("c12 c23").unwrap(), &g.word("(a1 a2 a3 b)^3").unwrap()).unwrap());
        let model = g.matrix_model().unwrap();
        assert_eq!(model.mode(), EqualityMode::Projective);
        assert!(model.is_trivial(&g.word("c12 c23 c31 (a1 a2 a3 b)^-3").unwrap()).unwrap());
        assert!(!model.is_trivial(&g.word("c12 (a1 a2 a3 b)^-3").unwrap()).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let e = GroupExpr::product(vec![
            GroupExpr::free_abelian_rank(2),
            GroupExpr::quotient(GroupExpr::PureBraid { k: 3 }, full_twist(3)),
        ]);
        assert_eq!(GroupExpr::from_json(&e.to_json()).unwrap(), e);
        assert_eq!(e.to_string(), "Z^2 × PB3/⟨A12 A13 A23⟩");
        assert!(GroupExpr::from_json(&json!({"kind": "Nope"})).is_err());
    }
}
