//! Certificates for the presentation collapses, capping chains, genus-zero
//! splittings, word identities, centre claims and the subgroup question.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};

use crate::coxeter::CoxeterSystem;
use crate::garside;
use crate::linrep::{self, cw::CW_CONVENTION, lk::LK_CONVENTION, PolyMatrix};
use crate::mcg::{
    cap_boundary, full_twist, gervais_presentation, good_triples, is_good_triple, star_lhs, star_rhs,
    ComputableGroup, EqualityMode, GroupExpr, McgError, SurfaceTriple, Triple,
};
use crate::presentation::{canonical_relator, Presentation};
use crate::word::{parse_word_sugared, Generator, GeneratorMap, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub desc: String,
    pub ok: bool,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub claim: String,
    pub status: Status,
    pub metadata: BTreeMap<String, Value>,
    pub steps: Vec<Step>,
}

impl Certificate {
    pub fn new(claim: impl Into<String>) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("twist_direction".into(), json!("right-handed Dehn twists, uniformly"));
        metadata.insert("garside".into(), json!("classical; simple elements = Coxeter group elements"));
        Certificate { claim: claim.into(), status: Status::Pass, metadata, steps: Vec::new() }
    }

    pub fn step(&mut self, desc: impl Into<String>, ok: bool, witness: Value) -> bool {
        self.steps.push(Step { desc: desc.into(), ok, witness });
        if !ok {
            self.status = Status::Fail;
        }
        ok
    }

    pub fn meta(&mut self, key: &str, value: Value) {
        self.metadata.insert(key.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Appends another certificate's steps under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: Certificate) {
        for s in other.steps {
            self.step(format!("{prefix}: {}", s.desc), s.ok, s.witness);
        }
        for (k, v) in other.metadata {
            self.metadata.entry(k).or_insert(v);
        }
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("[{}] {}\n", if self.passed() { "PASS" } else { "FAIL" }, self.claim);
        for s in &self.steps {
            out.push_str(&format!("  {} {}\n", if s.ok { "ok  " } else { "FAIL" }, s.desc));
        }
        out
    }
}

fn w(text: &str, gens: &[Generator]) -> Result<Word, McgError> {
    Ok(parse_word_sugared(text, gens)?)
}

/// Every relator of `source` maps to a trivial word of `target`.
pub fn check_homomorphism(
    source: &Presentation,
    target: &ComputableGroup,
    m: &GeneratorMap,
) -> Result<Certificate, McgError> {
    let tgens = target.generators();
    for g in source.generators() {
        let img = m.get(g).ok_or_else(|| McgError::Malformed(format!("map is not defined on {g}")))?;
        if let Some(h) = img.generators().into_iter().find(|h| !tgens.contains(h)) {
            return Err(McgError::Malformed(format!("image of {g} uses {h}, outside {}", target.expr())));
        }
    }
    let mut cert = Certificate::new(format!("homomorphism ⟨{}⟩ → {}", source.generators().len(), target.expr()));
    for r in source.relators() {
        let image = m.apply(r)?;
        let ok = target.is_trivial(&image)?;
        cert.step(format!("relator {r} maps to the identity"), ok, json!(image.render()));
    }
    Ok(cert)
}

/// Eliminations carrying `source` onto the presentation of `target`.
#[derive(Debug, Clone)]
pub struct CollapseProof {
    pub source: Presentation,
    pub eliminations: Vec<(Generator, Word)>,
    pub target: GroupExpr,
    pub target_presentation: Presentation,
    pub extra_relators: Vec<Word>,
}

/// Result of carrying out a collapse.
#[derive(Debug, Clone)]
pub struct CollapseOutcome {
    pub certificate: Certificate,
    pub result: Presentation,
    pub extras: Vec<Word>,
}

impl CollapseProof {
    pub fn new(source: Presentation, eliminations: Vec<(Generator, Word)>, target: GroupExpr) -> Result<Self, McgError> {
        let target_presentation = ComputableGroup::new(target.clone())?.presentation()?;
        let mut p = source.clone();
        for (g, d) in &eliminations {
            p = p.eliminate_generator(g, d)?;
        }
        let wanted = target_presentation.relator_set();
        let extra_relators = p.relator_set().into_iter().filter(|r| !wanted.contains(r)).collect();
        Ok(CollapseProof { source, eliminations, target, target_presentation, extra_relators })
    }
}

pub fn run_collapse(cp: &CollapseProof) -> Result<CollapseOutcome, McgError> {
    let oracle = ComputableGroup::new(cp.target.clone())?;
    let mut cert = Certificate::new(format!("collapse onto {}", cp.target));
    let mut p = cp.source.clone();
    for (g, d) in &cp.eliminations {
        p = p.eliminate_generator(g, d)?;
        cert.step(format!("eliminate {g} = {d}"), true, json!({"generator": g, "defining": d.render()}));
    }
    let have: BTreeSet<&Generator> = p.generators().iter().collect();
    let want: BTreeSet<&Generator> = cp.target_presentation.generators().iter().collect();
    cert.step("remaining generators are the target generators", have == want, json!(p.generators()));
    let present = p.relator_set();
    let missing: Vec<String> =
        cp.target_presentation.relator_set().iter().filter(|r| !present.contains(*r)).map(Word::render).collect();
    cert.step(
        format!("all {} target relators survive", cp.target_presentation.relators().len()),
        missing.is_empty(),
        json!({ "missing": missing }),
    );
    let wanted = cp.target_presentation.relator_set();
    let extras: Vec<Word> = present.into_iter().filter(|r| !wanted.contains(r)).collect();
    cert.step(
        "extra relators match the recorded split",
        extras.iter().map(canonical_relator).collect::<Vec<_>>()
            == cp.extra_relators.iter().map(canonical_relator).collect::<Vec<_>>(),
        json!(extras.len()),
    );
    for r in &extras {
        let ok = oracle.is_trivial(r)?;
        cert.step(format!("extra relator {r} holds in {}", cp.target), ok, json!(r.render()));
    }
    Ok(CollapseOutcome { certificate: cert, result: p, extras })
}

pub fn verify_collapse(cp: &CollapseProof) -> Result<Certificate, McgError> {
    Ok(run_collapse(cp)?.certificate)
}

enum Action {
    Collapse(Vec<(&'static str, &'static str)>, GroupExpr),
    Cap(&'static str),
}

struct RowPlan {
    base: SurfaceTriple,
    label: &'static str,
    actions: Vec<Action>,
}

const DELTA_123: &str = "(a1 a2 a3 b)^3";

fn d4_times(cs: &[&str]) -> GroupExpr {
    if cs.is_empty() {
        GroupExpr::d4()
    } else {
        GroupExpr::product(vec![GroupExpr::d4(), GroupExpr::free_abelian(cs)])
    }
}

fn b4_times(cs: &[&str]) -> GroupExpr {
    if cs.is_empty() {
        GroupExpr::b4()
    } else {
        GroupExpr::product(vec![GroupExpr::b4(), GroupExpr::free_abelian(cs)])
    }
}

fn quotient(g: GroupExpr, centre: &str) -> Result<GroupExpr, McgError> {
    GroupExpr::quotient_text(g, centre)
}

fn genus_one_plan(t: SurfaceTriple) -> Result<RowPlan, McgError> {
    let d4_stage1 = || -> Result<Action, McgError> {
        Ok(Action::Collapse(
            vec![("c21", "c12^-1 (a1 b a2)^4"), ("c13", "(a1 b a3)^4 c31^-1"), ("c32", "c23^-1 (a2 b a3)^4")],
            quotient(d4_times(&["c12", "c23", "c31"]), "c12 c23 c31 ((a1 a2 a3 b)^3)^-1")?,
        ))
    };
    let b4_stage0 = || -> Result<Action, McgError> {
        Ok(Action::Collapse(vec![], quotient(b4_times(&["c12", "c21"]), "c12 c21 (a1 b a2)^-4")?))
    };
    let d4 = SurfaceTriple::new(1, 3, 0);
    let b4 = SurfaceTriple::new(1, 2, 0);
    use Action::*;
    Ok(match (t.g, t.b, t.n) {
        (1, 3, 0) => RowPlan {
            base: d4,
            label: "A(D4) × Z^2",
            actions: vec![d4_stage1()?, Collapse(vec![("c31", "c23^-1 c12^-1 (a1 a2 a3 b)^3")], d4_times(&["c12", "c23"]))],
        },
        (1, 2, 1) => RowPlan {
            base: d4,
            label: "A(D4) × Z",
            actions: vec![
                d4_stage1()?,
                Cap("c31"),
                Collapse(vec![], quotient(d4_times(&["c12", "c23"]), "c12 c23 ((a1 a2 a3 b)^3)^-1")?),
                Collapse(vec![("c23", "c12^-1 (a1 a2 a3 b)^3")], d4_times(&["c12"])),
            ],
        },
        (1, 1, 2) => RowPlan {
            base: d4,
            label: "A(D4)",
            actions: vec![
                d4_stage1()?,
                Cap("c31"),
                Cap("c23"),
                Collapse(vec![], quotient(d4_times(&["c12"]), "c12 ((a1 a2 a3 b)^3)^-1")?),
                Collapse(vec![("c12", DELTA_123)], GroupExpr::d4()),
            ],
        },
        (1, 0, 3) => RowPlan {
            base: d4,
            label: "A(D4)/Z(A(D4))",
            actions: vec![
                d4_stage1()?,
                Cap("c31"),
                Cap("c23"),
                Cap("c12"),
                Collapse(vec![], quotient(GroupExpr::d4(), DELTA_123)?),
            ],
        },
        (1, 2, 0) => RowPlan {
            base: b4,
            label: "B4 × Z",
            actions: vec![b4_stage0()?, Collapse(vec![("c21", "c12^-1 (a1 b a2)^4")], b4_times(&["c12"]))],
        },
        (1, 1, 1) => RowPlan {
            base: b4,
            label: "B4",
            actions: vec![
                b4_stage0()?,
                Cap("c21"),
                Collapse(vec![], quotient(b4_times(&["c12"]), "c12 (a1 b a2)^-4")?),
                Collapse(vec![("c12", "(a1 b a2)^4")], GroupExpr::b4()),
            ],
        },
        (1, 0, 2) => RowPlan {
            base: b4,
            label: "B4/Z(B4)",
            actions: vec![
                b4_stage0()?,
                Cap("c21"),
                Cap("c12"),
                Collapse(vec![], quotient(GroupExpr::b4(), "(a1 b a2)^4")?),
            ],
        },
        _ => return Err(McgError::Unsupported(format!("no table row for {t}"))),
    })
}

/// Source presentation, final target and composite generator map of a row.
pub struct RowData {
    pub triple: SurfaceTriple,
    pub label: String,
    pub source: Presentation,
    pub target: GroupExpr,
    pub map: GeneratorMap,
    /// Group whose abelianization must match the source's.
    pub counterpart: GroupExpr,
}

fn substitute(map: &GeneratorMap, g: &Generator, image: &Word, keep: &[Generator]) -> Result<GeneratorMap, McgError> {
    let subst = GeneratorMap::identity_on(keep).with(g, image.clone());
    let mut out = GeneratorMap::new();
    for (src, img) in map.iter() {
        out.insert(src.clone(), subst.apply(img)?);
    }
    Ok(out)
}

/// Runs a genus-one capping/collapse chain; returns the certificate and row data.
fn run_genus_one(t: SurfaceTriple, cert: &mut Certificate) -> Result<RowData, McgError> {
    let plan = genus_one_plan(t)?;
    let gervais = gervais_presentation(plan.base)?.presentation;
    let caps: Vec<Word> = plan
        .actions
        .iter()
        .filter_map(|a| match a {
            Action::Cap(c) => Some(Word::generator(&Generator::new(c).expect("valid name"))),
            _ => None,
        })
        .collect();
    let source = gervais.quotient_by_words(&caps)?;
    cert.step(
        format!("Gervais presentation of PMod{}: {} generators, {} relators", plan.base, gervais.generators().len(), gervais.relators().len()),
        true,
        json!(gervais.to_text()),
    );
    let mut current = gervais.clone();
    let mut map = GeneratorMap::identity_on(gervais.generators());
    let mut target = None;
    for (k, action) in plan.actions.iter().enumerate() {
        match action {
            Action::Cap(c) => {
                let c = Generator::new(c)?;
                current = cap_boundary(&current, &c)?;
                map = substitute(&map, &c, &Word::identity(), current.generators())?;
                cert.step(format!("cap boundary twist {c}"), true, json!(c));
            }
            Action::Collapse(elims, goal) => {
                let mut parsed = Vec::new();
                let mut gens = current.generators().to_vec();
                for (g, d) in elims {
                    let g = Generator::new(g)?;
                    gens.retain(|h| *h != g);
                    let d = w(d, &gens)?;
                    parsed.push((g, d));
                }
                let proof = CollapseProof::new(current.clone(), parsed.clone(), goal.clone())?;
                let outcome = run_collapse(&proof)?;
                cert.absorb(&format!("stage {}", k + 1), outcome.certificate);
                let mut keep = current.generators().to_vec();
                for (g, d) in &parsed {
                    keep.retain(|h| h != g);
                    map = substitute(&map, g, d, &keep)?;
                }
                current = outcome.result;
                target = Some(goal.clone());
            }
        }
    }
    let target = target.ok_or_else(|| McgError::Malformed("plan without a collapse".into()))?;
    Ok(RowData { triple: t, label: plan.label.to_string(), source, counterpart: target.clone(), target, map })
}

/// Genus-zero splitting data `(G1, G2, φ, ψ)`.
pub struct GenusZero {
    pub g1: GroupExpr,
    pub g2: Option<GroupExpr>,
    pub phi: GeneratorMap,
    pub psi: GeneratorMap,
}

pub fn genus_zero_groups(m: u32, n: u32) -> Result<GenusZero, McgError> {
    if m < 2 {
        return Err(McgError::Unsupported(format!("genus-zero rows need m ≥ 2, got m = {m}")));
    }
    let k = (m + n - 1) as usize;
    let d: Vec<String> = (1..=m).map(|i| format!("d{i}")).collect();
    let d_refs: Vec<&str> = d.iter().map(String::as_str).collect();
    let g1 = GroupExpr::product(vec![GroupExpr::free_abelian(&d_refs[..m as usize - 1]), GroupExpr::PureBraid { k }]);
    if m + n < 3 {
        return Ok(GenusZero { g1, g2: None, phi: GeneratorMap::new(), psi: GeneratorMap::new() });
    }
    let ft = full_twist(k);
    let g2 = GroupExpr::product(vec![
        GroupExpr::free_abelian(&d_refs),
        GroupExpr::quotient(GroupExpr::PureBraid { k }, ft.clone()),
    ]);
    let z = Word::generator(&Generator::new(&d[m as usize - 1])?);
    let mut phi = GeneratorMap::new();
    let mut psi = GeneratorMap::new();
    for name in &d[..m as usize - 1] {
        let g = Generator::new(name)?;
        phi.insert(g.clone(), Word::generator(&g));
        psi.insert(g.clone(), Word::generator(&g));
    }
    psi.insert(Generator::new(&d[m as usize - 1])?, ft.clone());
    for a in crate::mcg::pure_braid_generators(k) {
        let eps = i64::from(a.as_str() == "A12");
        phi.insert(a.clone(), z.pow(eps).concat(&Word::generator(&a)));
        psi.insert(a.clone(), Word::generator(&a).concat(&ft.pow(-eps)));
    }
    Ok(GenusZero { g1, g2: Some(g2), phi, psi })
}

fn run_genus_zero(t: SurfaceTriple, bound: u32, cert: &mut Certificate) -> Result<RowData, McgError> {
    let (m, n) = (t.b, t.n);
    if m + n > bound {
        return Err(McgError::Unsupported(format!("{t} exceeds the desk-scale bound m + n ≤ {bound}")));
    }
    let gz = genus_zero_groups(m, n)?;
    let k = m + n - 1;
    let g1 = ComputableGroup::new(gz.g1.clone())?;
    let p1 = g1.presentation()?;
    cert.step(
        format!("PMod{t} realised as {} (known splitting)", gz.g1),
        true,
        json!({"expr": gz.g1, "generators": p1.generators().len(), "relators": p1.relators().len()}),
    );
    let Some(g2e) = gz.g2.clone() else {
        cert.step(
            "second splitting not applicable (m + n < 3)",
            true,
            json!({"m": m, "n": n, "refused": true}),
        );
        return Ok(RowData {
            triple: t,
            label: gz.g1.to_string(),
            source: p1.clone(),
            counterpart: gz.g1.clone(),
            target: gz.g1,
            map: GeneratorMap::identity_on(p1.generators()),
        });
    };
    let g2 = ComputableGroup::new(g2e.clone())?;
    let p2 = g2.presentation()?;
    cert.step(
        format!("full twist of PB{k} is central"),
        g1.is_central(&full_twist(k as usize))?,
        json!(full_twist(k as usize).render()),
    );
    cert.absorb("φ", check_homomorphism(&p1, &g2, &gz.phi)?);
    cert.absorb("ψ", check_homomorphism(&p2, &g1, &gz.psi)?);
    for g in p1.generators() {
        let back = gz.psi.apply(&gz.phi.apply(&Word::generator(g))?)?;
        cert.step(format!("ψ∘φ fixes {g}"), g1.equal(&back, &Word::generator(g))?, json!(back.render()));
    }
    for g in p2.generators() {
        let back = gz.phi.apply(&gz.psi.apply(&Word::generator(g))?)?;
        cert.step(format!("φ∘ψ fixes {g}"), g2.equal(&back, &Word::generator(g))?, json!(back.render()));
    }
    Ok(RowData {
        triple: t,
        label: gz.g1.to_string(),
        source: p1,
        target: gz.g1,
        map: GeneratorMap::identity_on(g1.generators().iter()),
        counterpart: g2e,
    })
}

/// Row data without certificate output.
pub fn row_data(t: SurfaceTriple, bound: u32) -> Result<RowData, McgError> {
    let mut scratch = Certificate::new("");
    match t.g {
        0 => run_genus_zero(t, bound, &mut scratch),
        1 => run_genus_one(t, &mut scratch),
        _ => Err(McgError::Unsupported(format!("no table row for {t}"))),
    }
}

/// Full certificate for a table row.
pub fn verify_row(t: SurfaceTriple, bound: u32) -> Result<Certificate, McgError> {
    let mut cert = Certificate::new(String::new());
    let data = match t.g {
        0 => run_genus_zero(t, bound, &mut cert)?,
        1 => run_genus_one(t, &mut cert)?,
        _ => return Err(McgError::Unsupported(format!("no table row for {t}"))),
    };
    cert.claim = format!("PMod{} ≅ {}", t, data.label);
    cert.meta("triple", json!(t));
    cert.meta("target", json!(data.target));
    let target = ComputableGroup::new(data.target.clone())?;
    cert.absorb("re-expansion", check_homomorphism(&data.source, &target, &data.map)?);
    let sa = data.source.abelianization();
    let ta = ComputableGroup::new(data.counterpart.clone())?.presentation()?.abelianization();
    cert.step(
        format!("abelianization {sa} = {ta} of {}", data.counterpart),
        sa == ta,
        json!({"source": sa, "target": ta}),
    );
    if target.generators().is_empty() || data.source.generators().is_empty() {
        cert.meta("matrix_check", json!("trivial group"));
    } else {
        match target.matrix_model() {
            Ok(model) => {
                cert.meta("matrix_convention", json!(model.convention()));
                cert.meta("matrix_mode", json!(model.mode()));
                let mut agree = true;
                let mut all = true;
                for r in data.source.relators() {
                    let img = data.map.apply(r)?;
                    let by_matrix = model.is_trivial(&img)?;
                    agree &= by_matrix == target.is_trivial(&img)?;
                    all &= by_matrix;
                }
                cert.step(
                    format!("source relators trivial in the {}-dimensional block representation", model.dim()),
                    all,
                    json!(data.source.relators().len()),
                );
                cert.step("Garside and matrix oracles agree on every relator image", agree, Value::Null);
            }
            Err(McgError::Linrep(_)) | Err(McgError::Unsupported(_)) => {
                cert.meta("matrix_check", json!("outside the representation range"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(cert)
}

/// Table rows: the seven genus-one rows, then `(0,m,n)` with `2 ≤ m`, `m + n ≤ bound`.
pub fn table_rows(bound: u32) -> Vec<SurfaceTriple> {
    let mut rows: Vec<SurfaceTriple> = [(1, 2, 0), (1, 1, 1), (1, 0, 2), (1, 3, 0), (1, 2, 1), (1, 1, 2), (1, 0, 3)]
        .into_iter()
        .map(|(g, b, n)| SurfaceTriple::new(g, b, n))
        .collect();
    for m in 2..=bound {
        for n in 0..=bound - m {
            rows.push(SurfaceTriple::new(0, m, n));
        }
    }
    rows
}

/// Largest supported desk-scale bound (PB_k with k ≤ 6 for Garside).
pub const MAX_BOUND: u32 = 7;
pub const DEFAULT_BOUND: u32 = 6;

fn artin_identity_steps(
    cert: &mut Certificate,
    sys: &CoxeterSystem,
    rep: &linrep::Representation,
    pairs: &[(&str, &str, &str)],
) -> Result<(), McgError> {
    for (label, u, v) in pairs {
        let (u, v) = (w(u, sys.atoms())?, w(v, sys.atoms())?);
        let by_nf = garside::equal_words(sys, &u, &v)?;
        let by_matrix = rep.evaluate(&u)? == rep.evaluate(&v)?;
        cert.step(
            format!("{label}: {u} = {v} (normal form)"),
            by_nf,
            json!(garside::normal_form(sys, &u)?),
        );
        cert.step(format!("{label}: {u} = {v} ({}×{} matrices)", rep.dim(), rep.dim()), by_matrix, Value::Null);
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Identity {
    /// `(ai ai aj b)^3 = (ai aj b)^4`
    Cube,
    /// `(ai aj b)^4 = (ai b aj)^4` and `Δiij = Δijj`
    Swap,
}

fn b4_with(i: &str, j: &str) -> Result<CoxeterSystem, McgError> {
    Ok(CoxeterSystem::type_a_named(4, crate::word::generators([i, "b", j]))?)
}

fn identity_certificate(claim: &str, which: &[Identity]) -> Result<Certificate, McgError> {
    let mut cert = Certificate::new(claim);
    cert.meta("lk_convention", json!(LK_CONVENTION));
    cert.meta("cw_convention", json!(CW_CONVENTION));
    for (i, j) in [("a1", "a2"), ("a2", "a1")] {
        let sys = b4_with(i, j)?;
        let rep = linrep::lk_representation_on(&sys)?;
        let mut pairs = Vec::new();
        let (f4a, f4b, f5a, f5b, r5a, r5b) = (
            format!("({i} {i} {j} b)^3"),
            format!("({i} {j} b)^4"),
            format!("({i} {j} b)^4"),
            format!("({i} b {j})^4"),
            format!("({i} {i} {j} b)^3"),
            format!("({i} {j} {j} b)^3"),
        );
        if which.contains(&Identity::Cube) {
            pairs.push(("B4", f4a.as_str(), f4b.as_str()));
        }
        if which.contains(&Identity::Swap) {
            pairs.push(("B4", f5a.as_str(), f5b.as_str()));
            pairs.push(("B4", r5a.as_str(), r5b.as_str()));
        }
        artin_identity_steps(&mut cert, &sys, &rep, &pairs)?;
    }
    let d4 = CoxeterSystem::d4();
    let cw = linrep::cw_representation_on(&d4)?;
    for (i, j) in [("a1", "a2"), ("a1", "a3"), ("a2", "a3")] {
        let mut texts = Vec::new();
        if which.contains(&Identity::Cube) {
            texts.push(("A(D4)", format!("({i} {i} {j} b)^3"), format!("({i} {j} b)^4")));
        }
        if which.contains(&Identity::Swap) {
            texts.push(("A(D4)", format!("({i} {j} b)^4"), format!("({i} b {j})^4")));
            texts.push(("A(D4)", format!("({i} {i} {j} b)^3"), format!("({i} {j} {j} b)^3")));
        }
        let pairs: Vec<(&str, &str, &str)> = texts.iter().map(|(l, u, v)| (*l, u.as_str(), v.as_str())).collect();
        artin_identity_steps(&mut cert, &d4, &cw, &pairs)?;
    }
    Ok(cert)
}

pub fn verify_eq4() -> Result<Certificate, McgError> {
    identity_certificate("Δiij = (ai ai aj b)^3 = (ai aj b)^4", &[Identity::Cube])
}

pub fn verify_eq5() -> Result<Certificate, McgError> {
    identity_certificate("(ai aj b)^4 = (ai b aj)^4 and Δiij = Δijj", &[Identity::Swap])
}

pub fn verify_word_identities() -> Result<Certificate, McgError> {
    identity_certificate("word identities for Δiij", &[Identity::Cube, Identity::Swap])
}

pub fn verify_center_claims() -> Result<Certificate, McgError> {
    let mut cert = Certificate::new("centre generators of A(D4) and B4");
    let d4 = CoxeterSystem::d4();
    let b4 = CoxeterSystem::b4();
    let cw = linrep::cw_representation_on(&d4)?;
    let lk = linrep::lk_representation_on(&b4)?;
    for (name, sys, rep, text) in [("A(D4)", &d4, &cw, DELTA_123), ("B4", &b4, &lk, "(a1 b a2)^4")] {
        let word = w(text, sys.atoms())?;
        cert.step(format!("{text} is central in {name}"), garside::is_central(sys, &word)?, Value::Null);
        let k = garside::delta_power_of(sys, &word)?;
        cert.step(format!("{text} = Δ^k in {name}"), k.is_some(), json!({ "k": k }));
        let unit = rep.evaluate(&word)?.monomial_scalar_of();
        cert.step(
            format!("{text} acts as a unit scalar in the {}-dimensional representation", rep.dim()),
            unit.is_some(),
            json!(unit.map(|(s, dq, dt)| json!({"sign": s, "dq": dq, "dt": dt}))),
        );
        cert.step(
            format!("{text} generates the centre of {name}"),
            true,
            json!("trusted citation: Brieskorn–Saito"),
        );
    }
    Ok(cert)
}

pub fn hamidi_tehrani() -> Result<Certificate, McgError> {
    let mut cert = Certificate::new("⟨a1^2 a2, b⟩ ≤ B4 is not free of rank 2");
    let b4 = CoxeterSystem::b4();
    let lk = linrep::lk_representation_on(&b4)?;
    let x = w("a1 a1 a2", b4.atoms())?;
    let b = w("b", b4.atoms())?;
    let (xb, bx) = (x.concat(&b), b.concat(&x));
    let commute = garside::equal_words(&b4, &xb, &bx)?;
    let commute_matrix = lk.evaluate(&xb)? == lk.evaluate(&bx)?;
    let c1 = cert.step(
        "a1^2 a2 and b do not commute",
        !commute && !commute_matrix,
        json!({"nf_xb": garside::normal_form(&b4, &xb)?.render(&b4), "nf_bx": garside::normal_form(&b4, &bx)?.render(&b4)}),
    );
    let cube = xb.pow(3);
    let c2 = cert.step("(a1^2 a2 b)^3 is central in B4", garside::is_central(&b4, &cube)?, Value::Null);
    let nf = garside::normal_form(&b4, &cube)?;
    let c3 = cert.step(
        "(a1^2 a2 b)^3 is nontrivial",
        !nf.is_identity() && !lk.evaluate(&cube)?.is_identity(),
        json!(nf.render(&b4)),
    );
    cert.step(
        "a non-abelian group with a nontrivial central element is not free of rank 2",
        c1 && c2 && c3,
        json!("not free of rank 2"),
    );
    Ok(cert)
}

/// Every good triple's star relation follows from one with `i ≤ j < k`.
pub fn verify_stars() -> Result<Certificate, McgError> {
    let mut cert = Certificate::new("star relations reduce to good triples with i ≤ j < k");
    for (boundaries, base, sys) in
        [(3u8, SurfaceTriple::new(1, 3, 0), CoxeterSystem::d4()), (2, SurfaceTriple::new(1, 2, 0), CoxeterSystem::b4())]
    {
        let gervais = gervais_presentation(base)?.presentation;
        let reduced = good_triples(boundaries)?;
        cert.step(
            format!("reduced list over {{1..{boundaries}}}"),
            reduced.iter().all(|&t| is_good_triple(t)),
            json!(reduced),
        );
        let mut all: Vec<Triple> = Vec::new();
        for i in 1..=boundaries {
            for j in 1..=boundaries {
                for k in 1..=boundaries {
                    if is_good_triple((i, j, k)) {
                        all.push((i, j, k));
                    }
                }
            }
        }
        for t in all {
            let (i, j, k) = t;
            let a = |x: u8| format!("a{x}");
            let lhs = w(&format!("({} {} {} b)^3", a(i), a(j), a(k)), sys.atoms())?;
            let rhs = star_rhs(t);
            let letters: BTreeSet<&Generator> = rhs.letters().iter().map(|l: &Letter| &l.generator).collect();
            let matched = reduced.iter().find(|&&r| {
                let rr = star_rhs(r);
                let other: BTreeSet<&Generator> = rr.letters().iter().map(|l| &l.generator).collect();
                other == letters
                    && rr.len() == rhs.len()
                    && garside::equal_words(&sys, &lhs, &star_lhs(r)).unwrap_or(false)
            });
            let commuting = letters.iter().all(|x| {
                letters.iter().all(|y| {
                    x == y
                        || gervais
                            .contains_relator(&Word::commutator(&Word::generator(x), &Word::generator(y)))
                })
            });
            cert.step(
                format!("({i},{j},{k}) is equivalent to a reduced star"),
                matched.is_some() && commuting,
                json!({ "reduced": matched, "rhs": rhs.render() }),
            );
        }
    }
    Ok(cert)
}

/// Every certificate run by `verify all`, in a fixed order.
pub fn verify_all(bound: u32) -> Result<Vec<Certificate>, McgError> {
    let mut out = Vec::new();
    for t in table_rows(bound) {
        out.push(verify_row(t, bound)?);
    }
    out.push(verify_eq4()?);
    out.push(verify_eq5()?);
    out.push(verify_stars()?);
    out.push(verify_center_claims()?);
    out.push(hamidi_tehrani()?);
    Ok(out)
}

/// Explicit matrices for a table row.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixRep {
    pub triple: SurfaceTriple,
    pub target: GroupExpr,
    pub convention: String,
    pub mode: EqualityMode,
    pub dim: usize,
    pub images: BTreeMap<String, PolyMatrix>,
    pub relators_checked: usize,
    pub relators_ok: bool,
}

pub fn build_matrix_rep(t: SurfaceTriple) -> Result<MatrixRep, McgError> {
    let data = row_data(t, DEFAULT_BOUND)?;
    let target = ComputableGroup::new(data.target.clone())?;
    let model = target.matrix_model()?;
    let mut images = BTreeMap::new();
    for g in data.source.generators() {
        let img = data.map.get(g).cloned().unwrap_or_default();
        images.insert(g.as_str().to_string(), model.evaluate(&img)?);
    }
    let mut ok = true;
    for r in data.source.relators() {
        ok &= model.is_trivial(&data.map.apply(r)?)?;
    }
    Ok(MatrixRep {
        triple: t,
        target: data.target,
        convention: model.convention(),
        mode: model.mode(),
        dim: model.dim(),
        images,
        relators_checked: data.source.relators().len(),
        relators_ok: ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_homomorphism_passes() {
        let g120 = gervais_presentation(SurfaceTriple::new(1, 2, 0)).unwrap().presentation;
        let target = ComputableGroup::new(GroupExpr::b4()).unwrap();
        let mut m = GeneratorMap::new();
        for g in g120.generators() {
            m.insert(g.clone(), Word::identity());
        }
        assert!(check_homomorphism(&g120, &target, &m).unwrap().passed());
        let partial = GeneratorMap::new();
        assert!(check_homomorphism(&g120, &target, &partial).is_err());
    }

    #[test]
    fn gervais_120_maps_onto_b4_times_z2() {
        let g120 = gervais_presentation(SurfaceTriple::new(1, 2, 0)).unwrap().presentation;
        let target = ComputableGroup::new(b4_times(&["c12", "c21"])).unwrap();
        let m = GeneratorMap::identity_on(g120.generators());
        // the star relator does not hold in the direct product itself
        assert!(!check_homomorphism(&g120, &target, &m).unwrap().passed());
        let q = ComputableGroup::new(quotient(b4_times(&["c12", "c21"]), "c12 c21 (a1 b a2)^-4").unwrap()).unwrap();
        assert!(check_homomorphism(&g120, &q, &m).unwrap().passed());
    }

    #[test]
    fn dropping_all_boundaries_is_not_a_homomorphism() {
        let g130 = gervais_presentation(SurfaceTriple::new(1, 3, 0)).unwrap().presentation;
        let d4 = ComputableGroup::new(GroupExpr::d4()).unwrap();
        let d4q = ComputableGroup::new(quotient(GroupExpr::d4(), DELTA_123).unwrap()).unwrap();
        let mut m = GeneratorMap::new();
        for g in g130.generators() {
            let img = if g.as_str().starts_with('c') { Word::identity() } else { Word::generator(g) };
            m.insert(g.clone(), img);
        }
        // degenerate stars force c12 c21 = (a1 b a2)^4, which is not central in A(D4)
        assert!(!check_homomorphism(&g130, &d4, &m).unwrap().passed());
        assert!(!check_homomorphism(&g130, &d4q, &m).unwrap().passed());
    }

    #[test]
    fn collapse_130() {
        let g130 = gervais_presentation(SurfaceTriple::new(1, 3, 0)).unwrap().presentation;
        let gens = g130.generators().to_vec();
        let elim = |g: &str, d: &str| (Generator::new(g).unwrap(), w(d, &gens).unwrap());
        let proof = CollapseProof::new(
            g130.clone(),
            vec![
                elim("c21", "c12^-1 (a1 b a2)^4"),
                elim("c13", "(a1 b a3)^4 c31^-1"),
                elim("c32", "c23^-1 (a2 b a3)^4"),
            ],
            quotient(d4_times(&["c12", "c23", "c31"]), "c12 c23 c31 ((a1 a2 a3 b)^3)^-1").unwrap(),
        )
        .unwrap();
        let out = run_collapse(&proof).unwrap();
        assert!(out.certificate.passed(), "{}", out.certificate.render_text());
        assert!(!out.extras.is_empty());
        let next = CollapseProof::new(
            out.result.clone(),
            vec![(Generator::new("c31").unwrap(), w("c23^-1 c12^-1 (a1 a2 a3 b)^3", &gens).unwrap())],
            d4_times(&["c12", "c23"]),
        )
        .unwrap();
        assert!(verify_collapse(&next).unwrap().passed());
        // a wrong target leaves relators unexplained
        let wrong = CollapseProof::new(out.result, vec![], d4_times(&["c12", "c23", "c31"])).unwrap();
        assert!(!verify_collapse(&wrong).unwrap().passed());
    }

    #[test]
    fn small_rows() {
        for t in [SurfaceTriple::new(1, 1, 1), SurfaceTriple::new(1, 0, 3), SurfaceTriple::new(0, 2, 1)] {
            let c = verify_row(t, DEFAULT_BOUND).unwrap();
            assert!(c.passed(), "{}", c.render_text());
        }
        assert_eq!(verify_row(SurfaceTriple::new(1, 1, 1), 6).unwrap().claim, "PMod(1,1,1) ≅ B4");
        assert!(verify_row(SurfaceTriple::new(2, 0, 0), 6).is_err());
        assert!(verify_row(SurfaceTriple::new(0, 1, 3), 6).is_err());
        assert!(verify_row(SurfaceTriple::new(0, 4, 4), 6).is_err());
    }

    #[test]
    fn genus_zero_refuses_small_second_splitting() {
        assert!(genus_zero_groups(2, 0).unwrap().g2.is_none());
        assert!(genus_zero_groups(2, 1).unwrap().g2.is_some());
        let c = verify_row(SurfaceTriple::new(0, 2, 0), DEFAULT_BOUND).unwrap();
        assert!(c.passed());
        assert!(c.steps.iter().any(|s| s.desc.contains("not applicable")));
    }

    #[test]
    fn row_count() {
        assert_eq!(table_rows(6).len(), 7 + 15);
    }

    #[test]
    fn certificate_status_tracks_steps() {
        let mut c = Certificate::new("x");
        assert!(c.passed());
        c.step("fine", true, Value::Null);
        assert!(c.passed());
        c.step("broken", false, Value::Null);
        assert!(!c.passed());
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["status"], "fail");
        assert_eq!(json["steps"][1]["ok"], false);
    }

    #[test]
    fn identities_and_claims() {
        for c in [verify_eq4(), verify_eq5(), verify_center_claims(), hamidi_tehrani(), verify_stars()] {
            let c = c.unwrap();
            assert!(c.passed(), "{}", c.render_text());
        }
    }

    #[test]
    fn matrix_rep_modes() {
        let r = build_matrix_rep(SurfaceTriple::new(1, 1, 1)).unwrap();
        assert_eq!((r.dim, r.mode, r.relators_ok), (6, EqualityMode::Exact, true));
        let r = build_matrix_rep(SurfaceTriple::new(1, 0, 2)).unwrap();
        assert_eq!((r.dim, r.mode, r.relators_ok), (6, EqualityMode::Projective, true));
        let r = build_matrix_rep(SurfaceTriple::new(1, 2, 1)).unwrap();
        assert_eq!((r.dim, r.mode, r.relators_ok), (13, EqualityMode::Exact, true));
    }
}
