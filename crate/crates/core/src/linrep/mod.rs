//! Exact linear representations over `Z[q^±1, t^±1]`.

pub mod cw;
pub mod laurent;
pub mod lk;
pub mod matrix;

use thiserror::Error;

use crate::coxeter::{CoxeterKind, CoxeterSystem};
use crate::word::{Generator, GeneratorMap, Letter, Word};

pub use laurent::{Int, LaurentPoly};
pub use matrix::{PolyMatrix, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinrepError {
    #[error("generator {0} has no image in this representation")]
    UnknownAtom(Generator),
    #[error("image of {0} is not invertible over the Laurent ring")]
    NotInvertible(Generator),
    #[error("relator {0} does not evaluate to the identity")]
    RelationFailed(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("blocks share generator {0}")]
    NameClash(Generator),
}

#[derive(Debug, Clone)]
pub struct Representation {
    convention: String,
    dim: usize,
    atoms: Vec<Generator>,
    images: Vec<SparseMatrix>,
    inverse_images: Vec<SparseMatrix>,
}

impl Representation {
    /// Checks invertibility and that every relator maps to the identity.
    pub fn new(
        convention: impl Into<String>,
        atoms: Vec<Generator>,
        images: Vec<PolyMatrix>,
        relators: &[Word],
    ) -> Result<Self, LinrepError> {
        let dim = images.first().map(PolyMatrix::dim).unwrap_or(1);
        let mut inverse_images = Vec::with_capacity(images.len());
        for (a, m) in atoms.iter().zip(&images) {
            let inv = m.inverse().ok_or_else(|| LinrepError::NotInvertible(a.clone()))?;
            if !m.mul(&inv).is_identity() {
                return Err(LinrepError::NotInvertible(a.clone()));
            }
            inverse_images.push(inv.to_sparse());
        }
        let rep = Representation {
            convention: convention.into(),
            dim,
            atoms,
            images: images.iter().map(PolyMatrix::to_sparse).collect(),
            inverse_images,
        };
        for r in relators {
            if !rep.evaluate(r)?.is_identity() {
                return Err(LinrepError::RelationFailed(r.render()));
            }
        }
        Ok(rep)
    }

    pub fn convention(&self) -> &str {
        &self.convention
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Generator] {
        &self.atoms
    }

    pub fn image(&self, g: &Generator) -> Option<PolyMatrix> {
        self.atoms.iter().position(|a| a == g).map(|i| self.images[i].to_dense())
    }

    pub fn inverse_image(&self, g: &Generator) -> Option<PolyMatrix> {
        self.atoms.iter().position(|a| a == g).map(|i| self.inverse_images[i].to_dense())
    }

    /// Ordered product of the letter images.
    pub fn evaluate(&self, w: &Word) -> Result<PolyMatrix, LinrepError> {
        let mut m = PolyMatrix::identity(self.dim);
        for Letter { generator, inverse } in w.letters() {
            let i = self
                .atoms
                .iter()
                .position(|a| a == generator)
                .ok_or_else(|| LinrepError::UnknownAtom(generator.clone()))?;
            m = m.mul_sparse(if *inverse { &self.inverse_images[i] } else { &self.images[i] });
        }
        Ok(m)
    }

    /// Block sum; each generator acts on its own block and trivially elsewhere.
    pub fn direct_sum(parts: &[Representation]) -> Result<Representation, LinrepError> {
        let mut atoms: Vec<Generator> = Vec::new();
        for p in parts {
            for a in &p.atoms {
                if atoms.contains(a) {
                    return Err(LinrepError::NameClash(a.clone()));
                }
                atoms.push(a.clone());
            }
        }
        let ident: Vec<PolyMatrix> = parts.iter().map(|p| PolyMatrix::identity(p.dim)).collect();
        let mut images = Vec::new();
        let mut inverse_images = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            for i in 0..p.atoms.len() {
                let lift = |m: PolyMatrix| {
                    let mut blocks = ident.clone();
                    blocks[k] = m;
                    PolyMatrix::block_diagonal(&blocks).to_sparse()
                };
                images.push(lift(p.images[i].to_dense()));
                inverse_images.push(lift(p.inverse_images[i].to_dense()));
            }
        }
        let convention = parts.iter().map(|p| p.convention.as_str()).collect::<Vec<_>>().join(" ⊕ ");
        Ok(Representation {
            convention,
            dim: parts.iter().map(|p| p.dim).sum(),
            atoms,
            images,
            inverse_images,
        })
    }

    /// Representation of a source alphabet through a generator map into this
    /// representation's alphabet.
    pub fn pullback(&self, sources: &[Generator], map: &GeneratorMap) -> Result<Representation, LinrepError> {
        let mut images = Vec::with_capacity(sources.len());
        let mut inverse_images = Vec::with_capacity(sources.len());
        for g in sources {
            let w = map.get(g).ok_or_else(|| LinrepError::UnknownAtom(g.clone()))?;
            images.push(self.evaluate(w)?.to_sparse());
            inverse_images.push(self.evaluate(&w.inverse())?.to_sparse());
        }
        Ok(Representation {
            convention: self.convention.clone(),
            dim: self.dim,
            atoms: sources.to_vec(),
            images,
            inverse_images,
        })
    }
}

/// Lawrence–Krammer representation of `B_n`, atoms `s1 … s_{n-1}`.
pub fn lk_representation(n: usize) -> Result<Representation, LinrepError> {
    if !(2..=5).contains(&n) {
        return Err(LinrepError::Unsupported(format!("Lawrence–Krammer needs 2 ≤ n ≤ 5, got {n}")));
    }
    let sys = CoxeterSystem::type_a(n).map_err(|e| LinrepError::Unsupported(e.to_string()))?;
    lk_representation_on(&sys)
}

/// Lawrence–Krammer representation on the atoms of a type-A system.
pub fn lk_representation_on(sys: &CoxeterSystem) -> Result<Representation, LinrepError> {
    let CoxeterKind::TypeA(n) = sys.kind() else {
        return Err(LinrepError::Unsupported(format!("{} is not of type A", sys.kind())));
    };
    if !(2..=5).contains(&n) {
        return Err(LinrepError::Unsupported(format!("Lawrence–Krammer needs 2 ≤ n ≤ 5, got {n}")));
    }
    let images = (1..n).map(|k| lk::lk_generator(n, k)).collect();
    Representation::new(lk::LK_CONVENTION, sys.atoms().to_vec(), images, &sys.artin_relators())
}

/// The positive-root representation of `A(D4)`, atoms `a1, a2, a3, b`.
pub fn cw_representation_d4() -> Result<Representation, LinrepError> {
    cw_representation_on(&CoxeterSystem::d4())
}

pub fn cw_representation_on(sys: &CoxeterSystem) -> Result<Representation, LinrepError> {
    if sys.kind() != CoxeterKind::TypeD4 {
        return Err(LinrepError::Unsupported(format!("{} is not D4", sys.kind())));
    }
    let images = (0..4).map(cw::cw_generator).collect();
    Representation::new(cw::CW_CONVENTION, sys.atoms().to_vec(), images, &sys.artin_relators())
}

/// `Z^k` acting diagonally, generator `i` as `q` in slot `i`.
pub fn free_abelian_representation(gens: &[Generator]) -> Representation {
    let k = gens.len();
    let diag = |i: usize, e: i32| {
        PolyMatrix::from_fn(k.max(1), |r, c| {
            if r != c {
                LaurentPoly::zero()
            } else if r == i {
                LaurentPoly::monomial(1, e, 0)
            } else {
                LaurentPoly::one()
            }
        })
        .to_sparse()
    };
    Representation {
        convention: format!("free-abelian-diagonal-q/{k}"),
        dim: k.max(1),
        atoms: gens.to_vec(),
        images: (0..k).map(|i| diag(i, 1)).collect(),
        inverse_images: (0..k).map(|i| diag(i, -1)).collect(),
    }
}

pub fn evaluate_word_matrix(r: &Representation, w: &Word) -> Result<PolyMatrix, LinrepError> {
    r.evaluate(w)
}

pub fn monomial_scalar_of(m: &PolyMatrix) -> Option<(i64, i32, i32)> {
    m.monomial_scalar_of()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word_sugared;

    #[test]
    fn lk_small_cases() {
        let r2 = lk_representation(2).unwrap();
        assert_eq!(r2.dim(), 1);
        let r4 = lk_representation(4).unwrap();
        assert_eq!(r4.dim(), 6);
        assert!(lk_representation(6).is_err());
        assert!(lk_representation(1).is_err());
        let lk5 = lk_representation(5).unwrap();
        assert_eq!(lk5.dim(), 10);
    }

    #[test]
    fn evaluation_and_scalars() {
        let sys = CoxeterSystem::b4();
        let rep = lk_representation_on(&sys).unwrap();
        let w = |t: &str| parse_word_sugared(t, sys.atoms()).unwrap();
        assert!(rep.evaluate(&Word::identity()).unwrap().is_identity());
        assert!(rep.evaluate(&w("a1 a1^-1")).unwrap().is_identity());
        let centre = rep.evaluate(&w("(a1 b a2)^4")).unwrap();
        assert!(centre.monomial_scalar_of().is_some());
        assert!(rep.evaluate(&w("a1")).unwrap().monomial_scalar_of().is_none());
        let z = rep.evaluate(&w("(a1 a1 a2 b)^3")).unwrap();
        for a in sys.atoms() {
            let m = rep.image(a).unwrap();
            assert_eq!(z.mul(&m), m.mul(&z));
        }
        let unknown = Generator::new("c").unwrap();
        assert_eq!(rep.evaluate(&Word::generator(&unknown)).unwrap_err(), LinrepError::UnknownAtom(unknown));
    }

    #[test]
    fn d4_representation() {
        let rep = cw_representation_d4().unwrap();
        assert_eq!(rep.dim(), 12);
        let sys = CoxeterSystem::d4();
        let delta = rep.evaluate(&parse_word_sugared("(a1 a2 a3 b)^3", sys.atoms()).unwrap()).unwrap();
        assert!(delta.monomial_scalar_of().is_some());
    }

    #[test]
    fn broken_images_are_rejected() {
        let sys = CoxeterSystem::type_a(3).unwrap();
        let s1 = lk::lk_generator(3, 1);
        let swapped = vec![s1.clone(), s1.mul(&s1)];
        let err = Representation::new("bad", sys.atoms().to_vec(), swapped, &sys.artin_relators());
        assert!(matches!(err, Err(LinrepError::RelationFailed(_))));
    }

    #[test]
    fn direct_sum_blocks() {
        let sys = CoxeterSystem::b4();
        let lk = lk_representation_on(&sys).unwrap();
        let z = free_abelian_representation(&crate::word::generators(["z1", "z2"]));
        let sum = Representation::direct_sum(&[lk, z]).unwrap();
        assert_eq!(sum.dim(), 8);
        let w = parse_word_sugared("z1 a1 z1^-1 a1^-1", sum.atoms()).unwrap();
        assert!(sum.evaluate(&w).unwrap().is_identity());
        let w = parse_word_sugared("z1 z2 z1^-1", sum.atoms()).unwrap();
        assert!(!sum.evaluate(&w).unwrap().is_identity());
    }
}
