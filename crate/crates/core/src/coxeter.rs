//! Finite Coxeter groups W(A_{n-1}) = S_n and W(D4) in permutation models.
//!
//! Elements are (signed) permutations `w` of `{1..n}` stored as image tables,
//! `w[i-1] = w(i)`. Products compose as functions: `(x·y)(i) = x(y(i))`, so a
//! word `s1 s2 … sk` denotes `s1 ∘ s2 ∘ … ∘ sk`.
//!
//! A [`CoxeterSystem`] enumerates its whole group once at construction and
//! keeps the tables (products, lengths, descents, reduced words) read-only
//! afterwards. The closed-form length statistic is checked against the BFS
//! distance of every element before the system is handed out.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{generators, Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("unsupported Coxeter type {0}")]
    Unsupported(String),
    #[error("expected {expected} atom names, got {got}")]
    AtomCount { expected: usize, got: usize },
    #[error("element {0:?} does not belong to this Coxeter system")]
    ModelMismatch(Vec<i8>),
    #[error("closed-form length disagrees with BFS distance at {perm:?}: {closed} vs {bfs}")]
    LengthMismatch { perm: Vec<i8>, closed: u32, bfs: u32 },
    #[error("conjugation by the longest element does not permute the atoms")]
    TauNotAtomic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoxeterKind {
    /// W(A_{n-1}) = S_n, the Coxeter group of the braid group on `n` strands.
    TypeA(usize),
    TypeD4,
}

impl fmt::Display for CoxeterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterKind::TypeA(n) => write!(f, "A{}", n.saturating_sub(1)),
            CoxeterKind::TypeD4 => f.write_str("D4"),
        }
    }
}

/// An element of W as a signed permutation table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CoxElement(Vec<i8>);

impl CoxElement {
    pub fn identity(n: usize) -> Self {
        CoxElement((1..=n as i8).collect())
    }

    pub fn from_table(table: Vec<i8>) -> Self {
        CoxElement(table)
    }

    pub fn table(&self) -> &[i8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `(self · other)(i) = self(other(i))`.
    pub fn compose(&self, other: &CoxElement) -> CoxElement {
        CoxElement(
            other
                .0
                .iter()
                .map(|&v| {
                    let img = self.0[v.unsigned_abs() as usize - 1];
                    if v < 0 {
                        -img
                    } else {
                        img
                    }
                })
                .collect(),
        )
    }

    pub fn inverse(&self) -> CoxElement {
        let mut inv = vec![0i8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            let target = v.unsigned_abs() as usize - 1;
            let src = (i + 1) as i8;
            inv[target] = if v < 0 { -src } else { src };
        }
        CoxElement(inv)
    }

    /// `#{i<j : w(i) > w(j)}`.
    pub fn inversions(&self) -> u32 {
        let w = &self.0;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `#{i<j : w(i) + w(j) < 0}`.
    pub fn negative_sum_pairs(&self) -> u32 {
        let w = &self.0;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if (w[i] as i16) + (w[j] as i16) < 0 {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn negative_entries(&self) -> usize {
        self.0.iter().filter(|&&v| v < 0).count()
    }
}

/// Index of an element in a system's enumeration.
pub type ElementId = usize;

#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    kind: CoxeterKind,
    atoms: Vec<Generator>,
    matrix: Vec<Vec<u8>>,
    atom_perms: Vec<CoxElement>,
    elements: Vec<CoxElement>,
    index: HashMap<CoxElement, ElementId>,
    lengths: Vec<u32>,
    left_descents: Vec<u32>,
    right_descents: Vec<u32>,
    /// `right_mul[x * rank + a] = x · a`
    right_mul: Vec<u16>,
    /// `left_mul[x * rank + a] = a · x`
    left_mul: Vec<u16>,
    reduced_words: Vec<Vec<u8>>,
    w0: ElementId,
    tau: Vec<usize>,
}

/// Largest symmetric group handled (720 elements).
pub const MAX_STRANDS: usize = 6;

impl CoxeterSystem {
    /// W(A_{n-1}) with atoms `s1 … s_{n-1}`.
    pub fn type_a(n: usize) -> Result<Self, CoxeterError> {
        let names: Vec<String> = (1..n).map(|i| format!("s{i}")).collect();
        Self::type_a_named(n, generators(names.iter().map(String::as_str)))
    }

    /// W(A_{n-1}) with atom `k` (0-based) the transposition `(k+1 k+2)`.
    pub fn type_a_named(n: usize, atoms: Vec<Generator>) -> Result<Self, CoxeterError> {
        if n == 0 || n > MAX_STRANDS {
            return Err(CoxeterError::Unsupported(format!("A{}", n as i64 - 1)));
        }
        if atoms.len() != n - 1 {
            return Err(CoxeterError::AtomCount { expected: n - 1, got: atoms.len() });
        }
        let atom_perms = (0..n - 1)
            .map(|k| {
                let mut t: Vec<i8> = (1..=n as i8).collect();
                t.swap(k, k + 1);
                CoxElement(t)
            })
            .collect();
        Self::build(CoxeterKind::TypeA(n), atoms, atom_perms)
    }

    /// The A3 system of B4 on the path `a1 – b – a2`.
    pub fn b4() -> Self {
        Self::type_a_named(4, generators(["a1", "b", "a2"])).expect("static A3 data")
    }

    /// W(D4) with atoms `(a1, a2, a3, b)`; `b` is the centre of the star.
    pub fn d4() -> Self {
        Self::d4_named(generators(["a1", "a2", "a3", "b"])).expect("static D4 data")
    }

    pub fn d4_named(atoms: Vec<Generator>) -> Result<Self, CoxeterError> {
        if atoms.len() != 4 {
            return Err(CoxeterError::AtomCount { expected: 4, got: atoms.len() });
        }
        // leaves: (1 2), (3 4), and the sign-changing (1 2); centre (2 3)
        let atom_perms = vec![
            CoxElement(vec![2, 1, 3, 4]),
            CoxElement(vec![1, 2, 4, 3]),
            CoxElement(vec![-2, -1, 3, 4]),
            CoxElement(vec![1, 3, 2, 4]),
        ];
        Self::build(CoxeterKind::TypeD4, atoms, atom_perms)
    }

    fn build(kind: CoxeterKind, atoms: Vec<Generator>, atom_perms: Vec<CoxElement>) -> Result<Self, CoxeterError> {
        let rank = atoms.len();
        let degree = match kind {
            CoxeterKind::TypeA(n) => n,
            CoxeterKind::TypeD4 => 4,
        };
        // breadth-first enumeration, multiplying atoms on the right
        let identity = CoxElement::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut lengths = vec![0u32];
        let mut reduced_words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (a, s) in atom_perms.iter().enumerate() {
                let y = elements[x].compose(s);
                if !index.contains_key(&y) {
                    let id = elements.len();
                    index.insert(y.clone(), id);
                    elements.push(y);
                    lengths.push(lengths[x] + 1);
                    let mut rw = reduced_words[x].clone();
                    rw.push(a as u8);
                    reduced_words.push(rw);
                    queue.push_back(id);
                }
            }
        }
        let order = elements.len();
        let mut right_mul = vec![0u16; order * rank];
        let mut left_mul = vec![0u16; order * rank];
        for (x, e) in elements.iter().enumerate() {
            for (a, s) in atom_perms.iter().enumerate() {
                right_mul[x * rank + a] = index[&e.compose(s)] as u16;
                left_mul[x * rank + a] = index[&s.compose(e)] as u16;
            }
        }
        let mut left_descents = vec![0u32; order];
        let mut right_descents = vec![0u32; order];
        for x in 0..order {
            for a in 0..rank {
                if lengths[right_mul[x * rank + a] as usize] < lengths[x] {
                    right_descents[x] |= 1 << a;
                }
                if lengths[left_mul[x * rank + a] as usize] < lengths[x] {
                    left_descents[x] |= 1 << a;
                }
            }
        }
        let w0 = (0..order).max_by_key(|&x| lengths[x]).expect("nonempty group");
        let mut matrix = vec![vec![1u8; rank]; rank];
        for a in 0..rank {
            for b in 0..rank {
                if a != b {
                    matrix[a][b] = element_order(&atom_perms[a].compose(&atom_perms[b])) as u8;
                }
            }
        }
        let mut sys = CoxeterSystem {
            kind,
            atoms,
            matrix,
            atom_perms,
            elements,
            index,
            lengths,
            left_descents,
            right_descents,
            right_mul,
            left_mul,
            reduced_words,
            w0,
            tau: Vec::new(),
        };
        for x in 0..order {
            let closed = sys.closed_form_length(&sys.elements[x]);
            if closed != sys.lengths[x] {
                return Err(CoxeterError::LengthMismatch {
                    perm: sys.elements[x].0.clone(),
                    closed,
                    bfs: sys.lengths[x],
                });
            }
        }
        let w0e = sys.elements[w0].clone();
        let mut tau = Vec::with_capacity(rank);
        for s in &sys.atom_perms {
            let conj = w0e.compose(s).compose(&w0e.inverse());
            tau.push(sys.atom_perms.iter().position(|t| *t == conj).ok_or(CoxeterError::TauNotAtomic)?);
        }
        sys.tau = tau;
        Ok(sys)
    }

    pub fn kind(&self) -> CoxeterKind {
        self.kind
    }

    pub fn atoms(&self) -> &[Generator] {
        &self.atoms
    }

    pub fn rank(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_index(&self, g: &Generator) -> Option<usize> {
        self.atoms.iter().position(|a| a == g)
    }

    /// Entry `m(a,b)`: 1 on the diagonal, 3 for joined atoms, 2 otherwise.
    pub fn coxeter_matrix(&self) -> &[Vec<u8>] {
        &self.matrix
    }

    /// Braid relators `aba⋯ = bab⋯` of length `m(a,b)`, one per pair `a < b`.
    pub fn artin_relators(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for a in 0..self.rank() {
            for b in a + 1..self.rank() {
                let (x, y) = (Word::generator(&self.atoms[a]), Word::generator(&self.atoms[b]));
                let m = self.matrix[a][b] as usize;
                let alt = |first: &Word, second: &Word| {
                    (0..m).fold(Word::identity(), |acc, i| acc.concat(if i % 2 == 0 { first } else { second }))
                };
                out.push(alt(&x, &y).concat(&alt(&y, &x).inverse()));
            }
        }
        out
    }

    pub fn artin_presentation(&self) -> Presentation {
        Presentation::new(self.atoms.clone(), self.artin_relators()).expect("atoms are distinct")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, id: ElementId) -> &CoxElement {
        &self.elements[id]
    }

    pub fn id_of(&self, x: &CoxElement) -> Result<ElementId, CoxeterError> {
        self.index.get(x).copied().ok_or_else(|| CoxeterError::ModelMismatch(x.0.clone()))
    }

    pub fn atom_element(&self, a: usize) -> &CoxElement {
        &self.atom_perms[a]
    }

    pub fn atom_id(&self, a: usize) -> ElementId {
        self.right_mul[a] as usize
    }

    pub fn identity_id(&self) -> ElementId {
        0
    }

    pub fn w0_id(&self) -> ElementId {
        self.w0
    }

    /// Conjugation by the longest element on atom indices.
    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn length(&self, id: ElementId) -> u32 {
        self.lengths[id]
    }

    /// Bitmask of atoms `a` with `ℓ(a·x) < ℓ(x)`.
    pub fn left_descents(&self, id: ElementId) -> u32 {
        self.left_descents[id]
    }

    /// Bitmask of atoms `a` with `ℓ(x·a) < ℓ(x)`.
    pub fn right_descents(&self, id: ElementId) -> u32 {
        self.right_descents[id]
    }

    pub fn mul_atom_right(&self, id: ElementId, a: usize) -> ElementId {
        self.right_mul[id * self.rank() + a] as usize
    }

    pub fn mul_atom_left(&self, a: usize, id: ElementId) -> ElementId {
        self.left_mul[id * self.rank() + a] as usize
    }

    pub fn product_ids(&self, x: ElementId, y: ElementId) -> ElementId {
        self.reduced_words[y].iter().fold(x, |acc, &a| self.mul_atom_right(acc, a as usize))
    }

    pub fn inverse_id(&self, x: ElementId) -> ElementId {
        self.reduced_words[x].iter().fold(0, |acc, &a| self.mul_atom_left(a as usize, acc))
    }

    /// `w0 · x · w0`.
    pub fn conjugate_by_w0(&self, x: ElementId) -> ElementId {
        self.reduced_words[x].iter().fold(0, |acc, &a| self.mul_atom_right(acc, self.tau[a as usize]))
    }

    /// A reduced word for `x` as atom indices (shortlex-first from BFS).
    pub fn reduced_word(&self, x: ElementId) -> &[u8] {
        &self.reduced_words[x]
    }

    pub fn reduced_word_text(&self, x: ElementId) -> String {
        self.reduced_words[x].iter().map(|&a| self.atoms[a as usize].as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn reduced_word_letters(&self, x: ElementId) -> Word {
        Word::from_letters(
            self.reduced_words[x]
                .iter()
                .map(|&a| crate::word::Letter::new(self.atoms[a as usize].clone(), false))
                .collect(),
        )
    }

    /// Length from the permutation statistic alone: inversions for type A,
    /// inversions plus negative-sum pairs for type D.
    pub fn closed_form_length(&self, x: &CoxElement) -> u32 {
        match self.kind {
            CoxeterKind::TypeA(_) => x.inversions(),
            CoxeterKind::TypeD4 => x.inversions() + x.negative_sum_pairs(),
        }
    }

    pub fn contains(&self, x: &CoxElement) -> bool {
        self.index.contains_key(x)
    }

    pub fn cox_product(&self, x: &CoxElement, y: &CoxElement) -> Result<CoxElement, CoxeterError> {
        for e in [x, y] {
            if !self.contains(e) {
                return Err(CoxeterError::ModelMismatch(e.0.clone()));
            }
        }
        Ok(x.compose(y))
    }

    pub fn length_and_descents(&self, x: &CoxElement) -> Result<(u32, Vec<Generator>, Vec<Generator>), CoxeterError> {
        let id = self.id_of(x)?;
        let pick = |mask: u32| {
            (0..self.rank()).filter(|a| mask & (1 << a) != 0).map(|a| self.atoms[a].clone()).collect()
        };
        Ok((self.lengths[id], pick(self.left_descents[id]), pick(self.right_descents[id])))
    }

    /// Group order, longest element, and τ(a) = w0·a·w0⁻¹ as atom names.
    pub fn enumerate_with_w0(&self) -> (usize, CoxElement, Vec<Generator>) {
        (
            self.order(),
            self.elements[self.w0].clone(),
            self.tau.iter().map(|&t| self.atoms[t].clone()).collect(),
        )
    }

    /// BFS distances from the identity recomputed directly from the atom
    /// permutations, independent of the cached tables.
    pub fn bfs_distances(&self) -> HashMap<CoxElement, u32> {
        let id = CoxElement::identity(self.elements[0].degree());
        let mut dist = HashMap::from([(id.clone(), 0u32)]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            for s in &self.atom_perms {
                let y = s.compose(&x);
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

fn element_order(x: &CoxElement) -> usize {
    let id = CoxElement::identity(x.degree());
    let mut acc = x.clone();
    let mut k = 1;
    while acc != id {
        acc = acc.compose(x);
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_d4_model() {
        let d4 = CoxeterSystem::d4();
        assert_eq!(d4.order(), 192);
        assert_eq!(d4.length(d4.w0_id()), 12);
        assert_eq!(d4.element(d4.w0_id()).table(), &[-1, -2, -3, -4]);
        assert_eq!(d4.tau(), &[0, 1, 2, 3]);
        assert!((0..d4.order()).all(|x| d4.element(x).negative_entries() % 2 == 0));
        // star graph with centre b
        let m = d4.coxeter_matrix();
        for a in 0..3 {
            assert_eq!(m[a][3], 3);
            for b in 0..3 {
                if a != b {
                    assert_eq!(m[a][b], 2);
                }
            }
        }
    }

    #[test]
    fn type_a_models() {
        let b4 = CoxeterSystem::b4();
        let (order, w0, tau) = b4.enumerate_with_w0();
        assert_eq!(order, 24);
        assert_eq!(w0.table(), &[4, 3, 2, 1]);
        assert_eq!(tau, generators(["a2", "b", "a1"]));
        assert_eq!(b4.coxeter_matrix()[0][1], 3);
        assert_eq!(b4.coxeter_matrix()[0][2], 2);

        let a1 = CoxeterSystem::type_a(2).unwrap();
        let (order, w0, tau) = a1.enumerate_with_w0();
        assert_eq!(order, 2);
        assert_eq!(&w0, a1.atom_element(0));
        assert_eq!(tau, generators(["s1"]));

        assert_eq!(CoxeterSystem::type_a(1).unwrap().order(), 1);
        assert_eq!(CoxeterSystem::type_a(5).unwrap().order(), 120);
        assert!(CoxeterSystem::type_a(7).is_err());
        assert!(CoxeterSystem::type_a(0).is_err());
    }

    #[test]
    fn products_and_involutions() {
        let d4 = CoxeterSystem::d4();
        let a1 = d4.atom_element(0).clone();
        let id = CoxElement::identity(4);
        assert_eq!(d4.cox_product(&a1, &a1).unwrap(), id);
        let x = d4.element(57).clone();
        assert_eq!(d4.cox_product(&x, &x.inverse()).unwrap(), id);
        assert_eq!(d4.cox_product(&id, &x).unwrap(), x);
        // (a1 b)^3 = 1 on the path a1 – b
        let b4 = CoxeterSystem::b4();
        let ab = b4.atom_element(0).compose(b4.atom_element(1));
        assert_eq!(ab.compose(&ab).compose(&ab), CoxElement::identity(4));
        let odd = CoxElement::from_table(vec![-1, 2, 3, 4]);
        assert!(matches!(d4.cox_product(&odd, &id), Err(CoxeterError::ModelMismatch(_))));
    }

    #[test]
    fn lengths_and_descents() {
        let d4 = CoxeterSystem::d4();
        let (l, left, right) = d4.length_and_descents(&CoxElement::identity(4)).unwrap();
        assert_eq!((l, left.len(), right.len()), (0, 0, 0));
        for a in 0..4 {
            let (l, left, right) = d4.length_and_descents(d4.atom_element(a)).unwrap();
            assert_eq!(l, 1);
            assert_eq!(left, vec![d4.atoms()[a].clone()]);
            assert_eq!(right, left);
        }
        let (l, left, right) = d4.length_and_descents(d4.element(d4.w0_id())).unwrap();
        assert_eq!(l, 12);
        assert_eq!(left.len(), 4);
        assert_eq!(right.len(), 4);
    }

    #[test]
    fn longest_element_complements() {
        for sys in [CoxeterSystem::b4(), CoxeterSystem::d4(), CoxeterSystem::type_a(5).unwrap()] {
            let w0 = sys.w0_id();
            let top = sys.length(w0);
            for x in 0..sys.order() {
                let complement = sys.product_ids(sys.inverse_id(x), w0);
                assert_eq!(sys.length(x) + sys.length(complement), top);
                assert_eq!(sys.product_ids(x, sys.inverse_id(x)), sys.identity_id());
            }
        }
    }

    #[test]
    fn tau_is_a_graph_automorphism() {
        for sys in [CoxeterSystem::b4(), CoxeterSystem::d4(), CoxeterSystem::type_a(5).unwrap()] {
            let m = sys.coxeter_matrix();
            let tau = sys.tau();
            for a in 0..sys.rank() {
                for b in 0..sys.rank() {
                    assert_eq!(m[tau[a]][tau[b]], m[a][b]);
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_independent_bfs() {
        for sys in [CoxeterSystem::b4(), CoxeterSystem::d4()] {
            let dist = sys.bfs_distances();
            assert_eq!(dist.len(), sys.order());
            for (x, d) in dist {
                assert_eq!(sys.closed_form_length(&x), d);
            }
        }
    }

    #[test]
    fn descent_atom_shortens_by_one() {
        let d4 = CoxeterSystem::d4();
        for x in 0..d4.order() {
            for a in 0..4 {
                let y = d4.mul_atom_right(x, a);
                let diff = d4.length(x) as i64 - d4.length(y) as i64;
                assert_eq!(diff.abs(), 1);
                assert_eq!(diff == 1, d4.right_descents(x) & (1 << a) != 0);
            }
        }
    }
}
