//! Square matrices over [`LaurentPoly`].

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::laurent::LaurentPoly;

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<LaurentPoly>,
}

/// Column-compressed form used for the (sparse) generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    /// `cols[j]` lists `(row, entry)` for the nonzero entries of column `j`.
    cols: Vec<Vec<(usize, LaurentPoly)>>,
}

impl PolyMatrix {
    pub fn zero(dim: usize) -> Self {
        PolyMatrix { dim, entries: vec![LaurentPoly::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, LaurentPoly::one())
    }

    pub fn scalar(dim: usize, c: LaurentPoly) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c.clone();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        PolyMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let p = a * b;
                        out.entries[i * n + j].add_assign_ref(&p);
                    }
                }
            }
        }
        out
    }

    /// `self · s` with `s` sparse.
    pub fn mul_sparse(&self, s: &SparseMatrix) -> PolyMatrix {
        assert_eq!(self.dim, s.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zero(n);
        for (j, col) in s.cols.iter().enumerate() {
            for (k, g) in col {
                for i in 0..n {
                    let a = self.get(i, *k);
                    if !a.is_zero() {
                        let p = a * g;
                        out.entries[i * n + j].add_assign_ref(&p);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect();
        PolyMatrix { dim: self.dim, entries }
    }

    pub fn scale(&self, c: &LaurentPoly) -> PolyMatrix {
        PolyMatrix { dim: self.dim, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn trace(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for i in 0..self.dim {
            acc.add_assign_ref(self.get(i, i));
        }
        acc
    }

    /// `Some((sign, dq, dt))` iff `self = ±q^dq t^dt · I`.
    pub fn monomial_scalar_of(&self) -> Option<(i64, i32, i32)> {
        let unit = self.get(0, 0).as_unit()?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = self.get(i, j);
                let ok = if i == j { e.as_unit() == Some(unit) } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(unit)
    }

    /// `Some(u)` iff `self = u · other` for a unit `u = ±q^a t^b`.
    pub fn unit_ratio(&self, other: &PolyMatrix) -> Option<(i64, i32, i32)> {
        if self.dim != other.dim {
            return None;
        }
        let k = self.entries.iter().position(|e| !e.is_zero())?;
        let (a, b) = (&self.entries[k], &other.entries[k]);
        if b.is_zero() || a.terms().len() != b.terms().len() {
            return None;
        }
        let ((qa, ta), ca) = &a.terms()[0];
        let ((qb, tb), cb) = &b.terms()[0];
        let sign = ca.signum() * cb.signum();
        let (dq, dt) = (qa - qb, ta - tb);
        let equal = self.entries.iter().zip(&other.entries).all(|(x, y)| *x == y.shift(sign, dq, dt));
        equal.then_some((sign, dq, dt))
    }

    pub fn projectively_equal(&self, other: &PolyMatrix) -> bool {
        self.unit_ratio(other).is_some()
    }

    /// Exact inverse via the Faddeev–LeVerrier recursion; `None` unless the
    /// determinant is a unit.
    pub fn inverse(&self) -> Option<PolyMatrix> {
        let n = self.dim;
        let mut m = PolyMatrix::zero(n);
        let mut c = LaurentPoly::one();
        for k in 1..=n {
            m = self.mul(&m).add(&PolyMatrix::scalar(n, c.clone()));
            let am = self.mul(&m);
            c = (-am.trace()).div_int(k as i64)?;
        }
        // c is now (-1)^n det, and A·M = -c·I
        let inv_c = c.unit_inverse()?;
        Some(m.scale(&(-inv_c)))
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let n = self.dim;
        let cols = (0..n)
            .map(|j| (0..n).filter(|&i| !self.get(i, j).is_zero()).map(|i| (i, self.get(i, j).clone())).collect())
            .collect();
        SparseMatrix { dim: n, cols }
    }

    /// Block-diagonal matrix with the given blocks in order.
    pub fn block_diagonal(blocks: &[PolyMatrix]) -> PolyMatrix {
        let n = blocks.iter().map(PolyMatrix::dim).sum();
        let mut out = PolyMatrix::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    out.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.dim;
        }
        out
    }
}

impl SparseMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_dense(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zero(self.dim);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, e) in col {
                m.set(*i, j, e.clone());
            }
        }
        m
    }

    pub fn nonzeros(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `{"dim": n, "entries": [[poly, …], …]}` with polys as term lists.
impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[LaurentPoly]> = self.entries.chunks(self.dim.max(1)).collect();
        let mut st = s.serialize_struct("PolyMatrix", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PolyMatrix {
        // [[q, 1], [t, 0]] has determinant -t
        PolyMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => LaurentPoly::q(),
            (0, 1) => LaurentPoly::one(),
            (1, 0) => LaurentPoly::t(),
            _ => LaurentPoly::zero(),
        })
    }

    #[test]
    fn inverse_and_identity() {
        let a = sample();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
        assert!(PolyMatrix::identity(3).is_identity());
        assert_eq!(PolyMatrix::identity(3).monomial_scalar_of(), Some((1, 0, 0)));
        let singular = PolyMatrix::from_fn(2, |_, _| LaurentPoly::one());
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn sparse_product_matches_dense() {
        let a = sample();
        let b = a.inverse().unwrap();
        assert_eq!(a.mul_sparse(&b.to_sparse()), a.mul(&b));
        assert_eq!(b.to_sparse().to_dense(), b);
    }

    #[test]
    fn unit_ratio_detects_scalars() {
        let a = sample();
        let scaled = a.scale(&LaurentPoly::monomial(-1, 2, -1));
        assert_eq!(scaled.unit_ratio(&a), Some((-1, 2, -1)));
        assert!(a.unit_ratio(&a.scale(&(&LaurentPoly::q() + &LaurentPoly::one()))).is_none());
        assert_eq!(PolyMatrix::scalar(2, LaurentPoly::monomial(-1, 0, 3)).monomial_scalar_of(), Some((-1, 0, 3)));
        assert!(a.monomial_scalar_of().is_none());
    }

    #[test]
    fn block_diagonal_layout() {
        let m = PolyMatrix::block_diagonal(&[sample(), PolyMatrix::scalar(1, LaurentPoly::q())]);
        assert_eq!(m.dim(), 3);
        assert_eq!(m.get(2, 2), &LaurentPoly::q());
        assert!(m.get(0, 2).is_zero());
    }
}
