//! Left-greedy Garside normal form for the spherical Artin groups whose
//! simple elements are the Coxeter group elements of a [`CoxeterSystem`].

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{CoxElement, CoxeterSystem, ElementId};
use crate::word::{Generator, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GarsideError {
    #[error("generator {0} is not an atom of the Artin group")]
    UnknownAtom(Generator),
}

/// `Δ^inf · f1 ⋯ fk` with left-weighted simple factors, none trivial or Δ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GarsideElement {
    pub inf: i64,
    pub factors: Vec<CoxElement>,
}

impl GarsideElement {
    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// Number of non-Δ factors.
    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    /// Renders as `Δ^k · [w1, w2, …]` with each factor as a reduced atom word.
    pub fn render(&self, sys: &CoxeterSystem) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| sys.id_of(f).map(|id| sys.reduced_word_text(id)).unwrap_or_else(|_| format!("{:?}", f.table())))
            .collect();
        format!("Δ^{} · [{}]", self.inf, parts.join(", "))
    }

    /// A word representing this element: the Δ power then each factor.
    pub fn to_word(&self, sys: &CoxeterSystem) -> Word {
        let mut w = delta_word(sys).pow(self.inf);
        for f in &self.factors {
            let id = sys.id_of(f).expect("factor belongs to the system");
            w = w.concat(&sys.reduced_word_letters(id));
        }
        w
    }
}

impl fmt::Display for GarsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{} · {:?}", self.inf, self.factors.iter().map(CoxElement::table).collect::<Vec<_>>())
    }
}

/// Positive word for Δ (the lift of w0).
pub fn delta_word(sys: &CoxeterSystem) -> Word {
    sys.reduced_word_letters(sys.w0_id())
}

/// `(x, y)` is left-weighted iff every left descent of `y` is a right descent of `x`.
pub fn is_left_weighted(sys: &CoxeterSystem, x: ElementId, y: ElementId) -> bool {
    sys.left_descents(y) & !sys.right_descents(x) == 0
}

/// Normal form as element ids; see [`normal_form`].
pub fn normal_form_ids(sys: &CoxeterSystem, w: &Word) -> Result<(i64, Vec<ElementId>), GarsideError> {
    let w0 = sys.w0_id();
    let mut inf = 0i64;
    let mut factors: Vec<ElementId> = Vec::with_capacity(w.len());
    for Letter { generator, inverse } in w.letters() {
        let a = sys.atom_index(generator).ok_or_else(|| GarsideError::UnknownAtom(generator.clone()))?;
        if *inverse {
            // a⁻¹ = (a·w0) Δ⁻¹, then move Δ⁻¹ to the front
            factors.push(sys.product_ids(sys.atom_id(a), w0));
            for f in factors.iter_mut() {
                *f = sys.conjugate_by_w0(*f);
            }
            inf -= 1;
        } else {
            factors.push(sys.atom_id(a));
        }
    }
    left_weight(sys, &mut factors);
    let lead = factors.iter().take_while(|&&f| f == w0).count();
    inf += lead as i64;
    factors.drain(..lead);
    while factors.last() == Some(&sys.identity_id()) {
        factors.pop();
    }
    Ok((inf, factors))
}

fn left_weight(sys: &CoxeterSystem, factors: &mut [ElementId]) {
    loop {
        let mut changed = false;
        for i in 1..factors.len() {
            let (x, y) = (factors[i - 1], factors[i]);
            let movable = sys.left_descents(y) & !sys.right_descents(x);
            if movable == 0 {
                continue;
            }
            let (mut x, mut y) = (x, y);
            let mut mask = movable;
            while mask != 0 {
                let s = mask.trailing_zeros() as usize;
                x = sys.mul_atom_right(x, s);
                y = sys.mul_atom_left(s, y);
                mask = sys.left_descents(y) & !sys.right_descents(x);
            }
            factors[i - 1] = x;
            factors[i] = y;
            changed = true;
        }
        if !changed {
            break;
        }
    }
}

pub fn normal_form(sys: &CoxeterSystem, w: &Word) -> Result<GarsideElement, GarsideError> {
    let (inf, ids) = normal_form_ids(sys, w)?;
    Ok(GarsideElement { inf, factors: ids.into_iter().map(|id| sys.element(id).clone()).collect() })
}

pub fn equal_words(sys: &CoxeterSystem, u: &Word, v: &Word) -> Result<bool, GarsideError> {
    Ok(normal_form_ids(sys, u)? == normal_form_ids(sys, v)?)
}

pub fn is_trivial(sys: &CoxeterSystem, w: &Word) -> Result<bool, GarsideError> {
    let (inf, factors) = normal_form_ids(sys, w)?;
    Ok(inf == 0 && factors.is_empty())
}

/// `Some(k)` iff `w = Δ^k`.
pub fn delta_power_of(sys: &CoxeterSystem, w: &Word) -> Result<Option<i64>, GarsideError> {
    let (inf, factors) = normal_form_ids(sys, w)?;
    Ok(factors.is_empty().then_some(inf))
}

/// `w` commutes with every atom.
pub fn is_central(sys: &CoxeterSystem, w: &Word) -> Result<bool, GarsideError> {
    for a in sys.atoms() {
        let a = Word::generator(a);
        if !equal_words(sys, &w.concat(&a), &a.concat(w))? {
            return Ok(false);
        }
    }
    Ok(true)
}
