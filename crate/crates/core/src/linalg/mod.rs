//! Dense n x n matrices over exact finite fields (n <= 16), their
//! canonical-form invariants and the module-theoretic searches used by the
//! classification pipeline.

mod canonical;
mod modrep;
mod poly;

pub use canonical::{centralizer_dim, char_poly, similarity_invariants, SimilarityInvariants};
pub use modrep::{
    cubic_rep, enveloping_dim, invariant_subspace, sym_fixed_dim, SubspaceWitness,
};
pub use poly::Poly;

use crate::gf::{Embedding, Field, FieldElement};
use std::fmt;
use thiserror::Error;

pub const MAX_DIM: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("the two computation routes disagree: {0}")]
    InternalMismatch(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("operation requires characteristic other than 2 and 3")]
    BadCharacteristic,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension {0} out of range")]
    BadDimension(usize),
}

/// Row-major dense matrix with entries in a single field.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixN {
    n: usize,
    field: Field,
    entries: Vec<FieldElement>,
}

impl MatrixN {
    pub fn zero(field: &Field, n: usize) -> MatrixN {
        MatrixN {
            n,
            field: field.clone(),
            entries: vec![field.zero(); n * n],
        }
    }

    pub fn identity(field: &Field, n: usize) -> MatrixN {
        let mut m = MatrixN::zero(field, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, c: &FieldElement) -> MatrixN {
        let mut m = MatrixN::zero(field, n);
        for i in 0..n {
            *m.at_mut(i, i) = c.clone();
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> MatrixN {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        MatrixN {
            n,
            field: field.clone(),
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer entries reduced into the field; convenient for the printed
    /// matrices.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> MatrixN {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            for &c in r.iter() {
                entries.push(field.from_int(c));
            }
        }
        MatrixN {
            n,
            field: field.clone(),
            entries,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut FieldElement {
        &mut self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn add(&self, other: &MatrixN) -> MatrixN {
        assert_eq!(self.n, other.n);
        MatrixN {
            n: self.n,
            field: self.field.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &MatrixN) -> MatrixN {
        assert_eq!(self.n, other.n);
        MatrixN {
            n: self.n,
            field: self.field.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> MatrixN {
        MatrixN {
            n: self.n,
            field: self.field.clone(),
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &MatrixN) -> MatrixN {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = MatrixN::zero(&self.field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    *out.at_mut(i, j) = &*out.at(i, j) + &t;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> MatrixN {
        MatrixN {
            n: self.n,
            field: self.field.clone(),
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.n {
                    if !self.at(i, j).is_zero() && !v[j].is_zero() {
                        acc = &acc + &(self.at(i, j) * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> MatrixN {
        let n = self.n;
        let mut out = MatrixN::zero(&self.field, n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn trace(&self) -> FieldElement {
        let mut acc = self.field.zero();
        for i in 0..self.n {
            acc = &acc + self.at(i, i);
        }
        acc
    }

    pub fn det(&self) -> FieldElement {
        let mut m = self.clone();
        let n = self.n;
        let mut det = self.field.one();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m.at(r, col).is_zero());
            let piv = match piv {
                Some(p) => p,
                None => return self.field.zero(),
            };
            if piv != col {
                for j in 0..n {
                    let tmp = m.at(piv, j).clone();
                    *m.at_mut(piv, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                }
                det = -&det;
            }
            let pv = m.at(col, col).clone();
            det = &det * &pv;
            let pvi = pv.inv();
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let f = &m.at(r, col).clone() * &pvi;
                for j in col..n {
                    let sub = &f * m.at(col, j);
                    *m.at_mut(r, j) = &*m.at(r, j) - &sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<MatrixN> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = MatrixN::identity(&self.field, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !m.at(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    let tmp = m.at(piv, j).clone();
                    *m.at_mut(piv, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                    let tmp = inv.at(piv, j).clone();
                    *inv.at_mut(piv, j) = inv.at(col, j).clone();
                    *inv.at_mut(col, j) = tmp;
                }
            }
            let pvi = m.at(col, col).inv();
            for j in 0..n {
                *m.at_mut(col, j) = &*m.at(col, j) * &pvi;
                *inv.at_mut(col, j) = &*inv.at(col, j) * &pvi;
            }
            for r in 0..n {
                if r == col || m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col).clone();
                for j in 0..n {
                    let s = &f * m.at(col, j);
                    *m.at_mut(r, j) = &*m.at(r, j) - &s;
                    let s = &f * inv.at(col, j);
                    *inv.at_mut(r, j) = &*inv.at(r, j) - &s;
                }
            }
        }
        Some(inv)
    }

    pub fn pow(&self, e: u64) -> MatrixN {
        let mut acc = MatrixN::identity(&self.field, self.n);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn pow_i(&self, e: i64) -> MatrixN {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inverse()
                .expect("matrix not invertible")
                .pow(e.unsigned_abs())
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == MatrixN::identity(&self.field, self.n)
    }

    /// Some(lambda) when the matrix is lambda * I.
    pub fn scalar_value(&self) -> Option<FieldElement> {
        let lambda = self.at(0, 0).clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j {
                    lambda.clone()
                } else {
                    self.field.zero()
                };
                if *self.at(i, j) != want {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    pub fn is_scalar(&self) -> bool {
        self.scalar_value().is_some()
    }

    /// Entry-wise field automorphism x -> x^(p^i).
    pub fn frobenius(&self, i: usize) -> MatrixN {
        MatrixN {
            n: self.n,
            field: self.field.clone(),
            entries: self.entries.iter().map(|e| e.frobenius(i)).collect(),
        }
    }

    /// Map entries into an extension field.
    pub fn lift(&self, emb: &Embedding) -> MatrixN {
        MatrixN {
            n: self.n,
            field: emb.ext().clone(),
            entries: self.entries.iter().map(|e| emb.embed(e)).collect(),
        }
    }

    /// Rank via Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank_of_rows(
            &self.field,
            (0..self.n).map(|i| self.row(i).to_vec()).collect(),
        )
    }

    /// Projective equality: other = lambda * self for some lambda != 0.
    pub fn proportional_to(&self, other: &MatrixN) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut ratio: Option<FieldElement> = None;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                _ => {
                    let r = b * &a.inv();
                    match &ratio {
                        None => ratio = Some(r),
                        Some(r0) if *r0 == r => {}
                        _ => return false,
                    }
                }
            }
        }
        ratio.is_some()
    }
}

/// Rank of a list of vectors over `field` (vectors are consumed).
pub fn rank_of_rows(field: &Field, mut rows: Vec<Vec<FieldElement>>) -> usize {
    let _ = field;
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let piv = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv();
        for j in col..width {
            rows[rank][j] = &rows[rank][j] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for j in col..width {
                    let s = &f * &rows[rank][j];
                    rows[r][j] = &rows[r][j] - &s;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Basis of the right null space of the linear system given by `rows`
/// (each of length `n`).
pub fn null_space(field: &Field, rows: &[Vec<FieldElement>], n: usize) -> Vec<Vec<FieldElement>> {
    let mut mat: Vec<Vec<FieldElement>> = rows.to_vec();
    let m = mat.len();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let piv = (rank..m).find(|&r| !mat[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        mat.swap(rank, piv);
        let inv = mat[rank][col].inv();
        for j in col..n {
            mat[rank][j] = &mat[rank][j] * &inv;
        }
        for r in 0..m {
            if r != rank && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for j in col..n {
                    let s = &f * &mat[rank][j];
                    mat[r][j] = &mat[r][j] - &s;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    let mut basis = Vec::new();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    for &fc in &free_cols {
        let mut v = vec![field.zero(); n];
        v[fc] = field.one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -&mat[r][fc];
        }
        basis.push(v);
    }
    basis
}

impl fmt::Debug for MatrixN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{}", self.at(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn inverse_and_det() {
        let f = Field::new(7, 1).unwrap();
        let m = MatrixN::from_ints(
            &f,
            &[&[1, 2, 0, 1], &[0, 1, 1, 0], &[3, 0, 1, 2], &[1, 1, 1, 1]],
        );
        let d = m.det();
        assert!(!d.is_zero());
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let m2 = MatrixN::from_ints(
            &f,
            &[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
        );
        assert_eq!(m.mul(&m2).det(), &d * &f.from_int(2));
    }

    #[test]
    fn null_space_dims() {
        let f = Field::new(3, 1).unwrap();
        let rows = vec![vec![f.one(), f.one(), f.one()]];
        let ns = null_space(&f, &rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s = &(&v[0] + &v[1]) + &v[2];
            assert!(s.is_zero());
        }
    }

    #[test]
    fn proportionality() {
        let f = Field::new(5, 1).unwrap();
        let m = MatrixN::from_ints(&f, &[&[1, 2], &[0, 3]]);
        assert!(m.proportional_to(&m.scale(&f.from_int(4))));
        assert!(!m.proportional_to(&MatrixN::identity(&f, 2)));
    }
}
