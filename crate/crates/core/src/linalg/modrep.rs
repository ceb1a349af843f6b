//! Module-theoretic computations: enveloping-algebra dimension (Burnside
//! irreducibility test), invariant-subspace search, fixed spaces on the
//! symmetric square, and the cubic-polynomial representation of SL2.

use std::sync::Arc;

use super::{char_poly, null_space, rank_of_rows, LinalgError, MatrixN};
use crate::gf::{extension, Embedding, Field, FieldElement, FieldTable};

/// Dimension of the span of all words in the generators, computed by
/// closing a basis under left multiplication. Equals n^2 iff the generated
/// group is absolutely irreducible.
pub fn enveloping_dim(gens: &[MatrixN]) -> usize {
    assert!(!gens.is_empty());
    let n = gens[0].n();
    let field = gens[0].field().clone();
    let nn = n * n;

    // reduced basis rows with their pivot columns
    let mut basis: Vec<(usize, Vec<FieldElement>)> = Vec::new();
    let mut queue: Vec<MatrixN> = vec![MatrixN::identity(&field, n)];

    let reduce = |basis: &Vec<(usize, Vec<FieldElement>)>, mut v: Vec<FieldElement>| {
        for (piv, row) in basis {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    let s = &f * r;
                    *x = &*x - &s;
                }
            }
        }
        v
    };

    while let Some(m) = queue.pop() {
        let v = reduce(&basis, m.entries().to_vec());
        let piv = match v.iter().position(|c| !c.is_zero()) {
            Some(p) => p,
            None => continue,
        };
        let inv = v[piv].inv();
        let row: Vec<FieldElement> = v.iter().map(|c| c * &inv).collect();
        // keep earlier rows reduced against the new one
        for (_, r) in basis.iter_mut() {
            if !r[piv].is_zero() {
                let f = r[piv].clone();
                for (x, nr) in r.iter_mut().zip(&row) {
                    let s = &f * nr;
                    *x = &*x - &s;
                }
            }
        }
        basis.push((piv, row));
        if basis.len() == nn {
            return nn;
        }
        for g in gens {
            queue.push(g.mul(&m));
        }
    }
    basis.len()
}

/// A common invariant subspace, possibly defined over an extension field.
pub struct SubspaceWitness {
    pub field: Field,
    pub embedding: Option<Arc<Embedding>>,
    pub basis: Vec<Vec<FieldElement>>,
}

impl SubspaceWitness {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Re-check invariance of the spanned subspace under all generators
    /// (lifted to the witness field if necessary).
    pub fn verify(&self, gens: &[MatrixN]) -> bool {
        let lifted: Vec<MatrixN> = gens
            .iter()
            .map(|g| match &self.embedding {
                Some(e) => g.lift(e),
                None => g.clone(),
            })
            .collect();
        let d = self.basis.len();
        if rank_of_rows(&self.field, self.basis.clone()) != d {
            return false;
        }
        for g in &lifted {
            let mut rows = self.basis.clone();
            for b in &self.basis {
                rows.push(g.mul_vec(b));
            }
            if rank_of_rows(&self.field, rows) != d {
                return false;
            }
        }
        true
    }
}

fn lift_all(gens: &[MatrixN], emb: &Option<Arc<Embedding>>) -> Vec<MatrixN> {
    match emb {
        None => gens.to_vec(),
        Some(e) => gens.iter().map(|g| g.lift(e)).collect(),
    }
}

/// Extension degree needed to split the characteristic polynomials of all
/// generators.
fn splitting_degree(gens: &[MatrixN]) -> usize {
    let mut l = 1usize;
    for g in gens {
        for d in char_poly(g).irreducible_factor_degrees() {
            l = l / gcd(l, d) * d;
        }
    }
    l
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

const ROOT_ENUM_CAP: u64 = 1 << 20;

/// Common invariant subspace of the given dimension, or certified absence.
///
/// Dimensions 1 and n-1 use common-eigenvector computation over the (lazy)
/// splitting extension; dimension 2 tries seeded candidates first and
/// falls back to exhaustive enumeration over the quadratic extension.
pub fn invariant_subspace(
    gens: &[MatrixN],
    dim: usize,
) -> Result<Option<SubspaceWitness>, LinalgError> {
    assert!(!gens.is_empty());
    let n = gens[0].n();
    if dim == 0 || dim >= n {
        return Err(LinalgError::BadDimension(dim));
    }
    if dim == 1 {
        return common_eigenline(gens).map(|o| {
            o.map(|(field, embedding, v)| SubspaceWitness {
                field,
                embedding,
                basis: vec![v],
            })
        });
    }
    if dim == n - 1 {
        let dual: Vec<MatrixN> = gens.iter().map(|g| g.transpose()).collect();
        let hit = common_eigenline(&dual)?;
        return Ok(hit.map(|(field, embedding, w)| {
            // basis of the hyperplane annihilated by w
            let basis = null_space(&field, &[w], n);
            SubspaceWitness {
                field,
                embedding,
                basis,
            }
        }));
    }
    if dim == 2 && n == 4 {
        return invariant_plane(gens);
    }
    Err(LinalgError::BadDimension(dim))
}

/// Search for a line fixed by every generator. Complete: works over the
/// splitting field of the generators' characteristic polynomials.
#[allow(clippy::type_complexity)]
fn common_eigenline(
    gens: &[MatrixN],
) -> Result<Option<(Field, Option<Arc<Embedding>>, Vec<FieldElement>)>, LinalgError> {
    let base = gens[0].field().clone();
    let e = splitting_degree(gens);
    let (field, emb) = if e == 1 {
        (base.clone(), None)
    } else {
        let emb = extension(&base, e)
            .map_err(|err| LinalgError::TooLarge(format!("splitting field: {err}")))?;
        (emb.ext().clone(), Some(emb))
    };
    if field.size() > ROOT_ENUM_CAP {
        return Err(LinalgError::TooLarge(format!(
            "eigenvalue enumeration over GF({})",
            field.size()
        )));
    }
    let lifted = lift_all(gens, &emb);
    let n = lifted[0].n();

    // eigenvalues of each generator over the splitting field
    let eigs: Vec<Vec<FieldElement>> = lifted
        .iter()
        .map(|g| char_poly(g).lift_roots(&field))
        .collect();

    // depth-first refinement of kernel intersections
    fn refine(
        field: &Field,
        lifted: &[MatrixN],
        eigs: &[Vec<FieldElement>],
        idx: usize,
        rows: &mut Vec<Vec<FieldElement>>,
        n: usize,
    ) -> Option<Vec<FieldElement>> {
        if idx == lifted.len() {
            let ns = null_space(field, rows, n);
            return ns.into_iter().next();
        }
        for lam in &eigs[idx] {
            let g = &lifted[idx];
            let before = rows.len();
            for i in 0..n {
                let mut row = g.row(i).to_vec();
                row[i] = &row[i] - lam;
                rows.push(row);
            }
            // quick prune: if intersection empty skip recursion
            if null_space(field, rows, n).is_empty() {
                rows.truncate(before);
                continue;
            }
            if let Some(v) = refine(field, lifted, eigs, idx + 1, rows, n) {
                return Some(v);
            }
            rows.truncate(before);
        }
        None
    }

    let mut rows = Vec::new();
    let hit = refine(&field, &lifted, &eigs, 0, &mut rows, n);
    Ok(hit.map(|v| (field.clone(), emb, v)))
}

const PLANE_ENUM_CAP: u64 = 2_000_000;

/// 2-dimensional invariant subspaces of a 4-dimensional module: seeded
/// candidates (spans of a fixed vector and its images; images of g - 1),
/// then exhaustive enumeration over the quadratic extension.
fn invariant_plane(gens: &[MatrixN]) -> Result<Option<SubspaceWitness>, LinalgError> {
    let base = gens[0].field().clone();
    let emb = extension(&base, 2)
        .map_err(|err| LinalgError::TooLarge(format!("quadratic extension: {err}")))?;
    let field = emb.ext().clone();
    let lifted = lift_all(gens, &Some(emb.clone()));
    let n = 4usize;

    let invariant = |basis: &[Vec<FieldElement>]| -> bool {
        for g in &lifted {
            let mut rows = basis.to_vec();
            for b in basis {
                rows.push(g.mul_vec(b));
            }
            if rank_of_rows(&field, rows) != 2 {
                return false;
            }
        }
        true
    };

    // seeds: lines of Fix(g) paired with generator images, and Im(g - 1)
    let id = MatrixN::identity(&field, n);
    for g in &lifted {
        let gm1 = g.sub(&id);
        let fix_rows: Vec<Vec<FieldElement>> = (0..n).map(|i| gm1.row(i).to_vec()).collect();
        let fix = null_space(&field, &fix_rows, n);
        for v in lines_of(&field, &fix) {
            for h in &lifted {
                let w = h.mul_vec(&v);
                let basis = vec![v.clone(), w];
                if rank_of_rows(&field, basis.clone()) == 2 && invariant(&basis) {
                    return Ok(Some(SubspaceWitness {
                        field,
                        embedding: Some(emb),
                        basis,
                    }));
                }
            }
        }
        // image of g - 1
        let im_rows: Vec<Vec<FieldElement>> = (0..n).map(|j| {
            (0..n).map(|i| gm1.at(i, j).clone()).collect()
        }).collect();
        let mut im = im_rows;
        let r = rank_of_rows(&field, im.clone());
        if r == 2 {
            // reduce to a basis
            im = reduce_to_basis(&field, im);
            if invariant(&im) {
                return Ok(Some(SubspaceWitness {
                    field,
                    embedding: Some(emb),
                    basis: im,
                }));
            }
        }
    }

    // exhaustive enumeration via dense tables
    let q2 = field.size();
    let count = (q2 * q2 + 1) * (q2 * q2 + q2 + 1);
    if field.size() > 256 || count > PLANE_ENUM_CAP {
        return Err(LinalgError::TooLarge(format!(
            "2-subspace enumeration over GF({q2}): {count} candidates"
        )));
    }
    let table = FieldTable::new(&field).map_err(|e| LinalgError::TooLarge(e.to_string()))?;
    let tg: Vec<[u8; 16]> = lifted
        .iter()
        .map(|g| {
            let mut m = [0u8; 16];
            for i in 0..4 {
                for j in 0..4 {
                    m[i * 4 + j] = g.at(i, j).index() as u8;
                }
            }
            m
        })
        .collect();
    if let Some(basis) = enumerate_planes(&table, &tg) {
        let basis = basis
            .iter()
            .map(|r| r.iter().map(|&c| field.element_from_index(c as u64)).collect())
            .collect();
        return Ok(Some(SubspaceWitness {
            field,
            embedding: Some(emb),
            basis,
        }));
    }
    Ok(None)
}

fn reduce_to_basis(_field: &Field, rows: Vec<Vec<FieldElement>>) -> Vec<Vec<FieldElement>> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut basis: Vec<(usize, Vec<FieldElement>)> = Vec::new();
    for row in rows {
        let mut v = row;
        for (piv, b) in &basis {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (x, bb) in v.iter_mut().zip(b) {
                    let s = &f * bb;
                    *x = &*x - &s;
                }
            }
        }
        if let Some(piv) = (0..width).find(|&c| !v[c].is_zero()) {
            let inv = v[piv].inv();
            let v: Vec<FieldElement> = v.iter().map(|c| c * &inv).collect();
            basis.push((piv, v));
        }
    }
    basis.into_iter().map(|(_, v)| v).collect()
}

/// All lines of the span of `space_basis`, one representative vector each.
fn lines_of(field: &Field, space_basis: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let basis = reduce_to_basis(field, space_basis.to_vec());
    let d = basis.len();
    if d == 0 {
        return vec![];
    }
    let n = basis[0].len();
    let q = field.size();
    let mut out = Vec::new();
    // projective representatives: first nonzero coordinate = 1
    for lead in 0..d {
        let mut idxs = vec![0u64; d - lead - 1];
        loop {
            let mut v = basis[lead].clone();
            for (k, &ix) in idxs.iter().enumerate() {
                let c = field.element_from_index(ix);
                for j in 0..n {
                    let s = &c * &basis[lead + 1 + k][j];
                    v[j] = &v[j] + &s;
                }
            }
            out.push(v);
            // increment
            let mut pos = 0;
            loop {
                if pos == idxs.len() {
                    break;
                }
                idxs[pos] += 1;
                if idxs[pos] < q {
                    break;
                }
                idxs[pos] = 0;
                pos += 1;
            }
            if pos == idxs.len() {
                break;
            }
        }
        if d - lead - 1 == 0 {
            // single vector handled once
        }
    }
    out
}

/// Exhaustive enumeration of 2-dimensional subspaces in reduced row
/// echelon form over a table field; returns the first invariant one.
fn enumerate_planes(t: &FieldTable, gens: &[[u8; 16]]) -> Option<[[u8; 4]; 2]> {
    let q = t.m as u64;
    // pivot column pairs (c0 < c1); free entries fill the rest
    for c0 in 0..4usize {
        for c1 in c0 + 1..4usize {
            let free_cols: Vec<usize> = (0..4).filter(|&c| c != c0 && c != c1).collect();
            // row 0 has free entries in columns > c0 excluding c1;
            // row 1 has free entries in columns > c1
            let f0: Vec<usize> = free_cols.iter().cloned().filter(|&c| c > c0).collect();
            let f1: Vec<usize> = free_cols.iter().cloned().filter(|&c| c > c1).collect();
            let nfree = f0.len() + f1.len();
            let total = q.pow(nfree as u32);
            for mut code in 0..total {
                let mut r0 = [0u8; 4];
                let mut r1 = [0u8; 4];
                r0[c0] = 1;
                r1[c1] = 1;
                for &c in &f0 {
                    r0[c] = (code % q) as u8;
                    code /= q;
                }
                for &c in &f1 {
                    r1[c] = (code % q) as u8;
                    code /= q;
                }
                if plane_invariant(t, gens, &r0, &r1, c0, c1) {
                    return Some([r0, r1]);
                }
            }
        }
    }
    None
}

fn plane_invariant(
    t: &FieldTable,
    gens: &[[u8; 16]],
    r0: &[u8; 4],
    r1: &[u8; 4],
    c0: usize,
    c1: usize,
) -> bool {
    let mat_vec = |m: &[u8; 16], v: &[u8; 4]| -> [u8; 4] {
        let mut out = [0u8; 4];
        for i in 0..4 {
            let mut acc = 0u8;
            for j in 0..4 {
                acc = t.add(acc, t.mul(m[i * 4 + j], v[j]));
            }
            out[i] = acc;
        }
        out
    };
    for g in gens {
        for v in [r0, r1] {
            let mut w = mat_vec(g, v);
            // reduce against the echelon basis
            let f = w[c0];
            if f != 0 {
                for j in 0..4 {
                    w[j] = t.sub(w[j], t.mul(f, r0[j]));
                }
            }
            let f = w[c1];
            if f != 0 {
                for j in 0..4 {
                    w[j] = t.sub(w[j], t.mul(f, r1[j]));
                }
            }
            if w != [0, 0, 0, 0] {
                return false;
            }
        }
    }
    true
}

/// Dimension of the space of matrices fixed by m -> g m g^T on symmetric
/// matrices (dual = false), or by the dual of that action (dual = true),
/// intersected over all generators.
pub fn sym_fixed_dim(gens: &[MatrixN], dual: bool) -> usize {
    assert!(!gens.is_empty());
    let field = gens[0].field().clone();
    let n = gens[0].n();
    let dim = n * (n + 1) / 2;
    // basis: E_ii, then E_ij + E_ji for i < j
    let mut pairs = Vec::with_capacity(dim);
    for i in 0..n {
        pairs.push((i, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for g in gens {
        let mut action = vec![vec![field.zero(); dim]; dim];
        for (col, &(i, j)) in pairs.iter().enumerate() {
            // image of basis element under m -> g m g^T
            let mut img = MatrixN::zero(&field, n);
            for r in 0..n {
                for c in 0..n {
                    // (g (E_ij + E_ji) g^T)_{rc} = g_ri g_cj + g_rj g_ci  (i != j)
                    // (g E_ii g^T)_{rc} = g_ri g_ci
                    let v = if i == j {
                        g.at(r, i) * g.at(c, i)
                    } else {
                        &(g.at(r, i) * g.at(c, j)) + &(g.at(r, j) * g.at(c, i))
                    };
                    *img.at_mut(r, c) = v;
                }
            }
            for (rowi, &(r, c)) in pairs.iter().enumerate() {
                action[rowi][col] = img.at(r, c).clone();
            }
        }
        let action_mat = MatrixN::from_rows(&field, action);
        let effective = if dual {
            action_mat
                .inverse()
                .expect("invertible generator action")
                .transpose()
        } else {
            action_mat
        };
        // rows of (A - I)
        for i in 0..dim {
            let mut row = effective.row(i).to_vec();
            row[i] = &row[i] - &field.one();
            rows.push(row);
        }
    }
    null_space(&field, &rows, dim).len()
}

/// The action of a 2x2 matrix of determinant 1 on cubic forms in two
/// variables, on the basis t1^3, t1^2 t2, t1 t2^2, t2^3. Multiplicative:
/// cubic_rep(gh) = cubic_rep(g) * cubic_rep(h).
pub fn cubic_rep(g: &MatrixN) -> Result<MatrixN, LinalgError> {
    assert_eq!(g.n(), 2);
    let field = g.field().clone();
    if field.p() == 2 || field.p() == 3 {
        return Err(LinalgError::BadCharacteristic);
    }
    debug_assert!(g.det().is_one(), "cubic_rep expects determinant 1");
    // variables transform as (t1, t2) -> (a t1 + c t2, b t1 + d t2)
    let a = g.at(0, 0);
    let b = g.at(0, 1);
    let c = g.at(1, 0);
    let d = g.at(1, 1);
    // homogeneous degree-m polynomials as coefficient vectors over
    // t1^(m-i) t2^i
    let lin1 = vec![a.clone(), c.clone()];
    let lin2 = vec![b.clone(), d.clone()];
    let mul_h = |x: &[FieldElement], y: &[FieldElement]| -> Vec<FieldElement> {
        let mut out = vec![field.zero(); x.len() + y.len() - 1];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                out[i + j] = &out[i + j] + &(xi * yj);
            }
        }
        out
    };
    let mut out = MatrixN::zero(&field, 4);
    for j in 0..4usize {
        // image of t1^(3-j) t2^j
        let mut img = vec![field.one()];
        for _ in 0..3 - j {
            img = mul_h(&img, &lin1);
        }
        for _ in 0..j {
            img = mul_h(&img, &lin2);
        }
        for i in 0..4 {
            *out.at_mut(i, j) = img[i].clone();
        }
    }
    Ok(out)
}

impl super::Poly {
    /// Roots over a given (extension) field: coefficients are mapped in by
    /// the canonical embedding when the fields differ.
    pub fn lift_roots(&self, field: &Field) -> Vec<FieldElement> {
        if field == self.field() {
            return self.roots();
        }
        let factor = field.degree() / self.field().degree();
        let emb = extension(self.field(), factor).expect("compatible extension");
        assert!(emb.ext() == field);
        self.lift(&emb).roots()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn enveloping_identity_only() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(enveloping_dim(&[MatrixN::identity(&f, 4)]), 1);
    }

    #[test]
    fn enveloping_full_matrix_algebra() {
        // elementary transvection + cyclic permutation generate all of M_3
        let f = Field::new(2, 1).unwrap();
        let a = MatrixN::from_ints(&f, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let b = MatrixN::from_ints(&f, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(enveloping_dim(&[a, b]), 9);
    }

    #[test]
    fn line_search_finds_eigenline() {
        let f = Field::new(7, 1).unwrap();
        // upper triangular: e1 spans an invariant line
        let g = MatrixN::from_ints(&f, &[&[2, 1, 0, 0], &[0, 3, 1, 0], &[0, 0, 1, 1], &[0, 0, 0, 4]]);
        let w = invariant_subspace(&[g.clone()], 1).unwrap().unwrap();
        assert!(w.verify(&[g]));
    }

    #[test]
    fn hyperplane_search() {
        let f = Field::new(5, 1).unwrap();
        let g = MatrixN::from_ints(&f, &[&[1, 0, 0, 1], &[0, 2, 0, 2], &[0, 0, 3, 3], &[0, 0, 0, 4]]);
        // e4-row is not invariant, but the span of e1,e2,e3 is g-invariant? No:
        // g e3 = 3 e3, g e4 = e1 + 2e2 + 3e3 + 4e4 -> <e1,e2,e3> is invariant.
        let w = invariant_subspace(&[g.clone()], 3).unwrap().unwrap();
        assert_eq!(w.dim(), 3);
        assert!(w.verify(&[g]));
    }

    #[test]
    fn sym_fixed_identity() {
        let f = Field::new(5, 1).unwrap();
        let id = MatrixN::identity(&f, 4);
        assert_eq!(sym_fixed_dim(&[id.clone()], false), 10);
        assert_eq!(sym_fixed_dim(&[id], true), 10);
    }

    #[test]
    fn cubic_rep_matches_printed_matrix() {
        let f = Field::new(7, 1).unwrap();
        let x2 = MatrixN::from_ints(&f, &[&[0, -1], &[1, 0]]);
        let want = MatrixN::from_ints(
            &f,
            &[&[0, 0, 0, -1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[1, 0, 0, 0]],
        );
        assert_eq!(cubic_rep(&x2).unwrap(), want);
        assert!(cubic_rep(&MatrixN::identity(&f, 2)).unwrap().is_identity());
    }

    #[test]
    fn cubic_rep_is_homomorphism() {
        let f = Field::new(11, 1).unwrap();
        let g = MatrixN::from_ints(&f, &[&[2, 3], &[3, 5]]); // det 10-9=1
        assert!(g.det().is_one());
        let h = MatrixN::from_ints(&f, &[&[1, 4], &[2, 9]]); // det 9-8=1
        assert!(h.det().is_one());
        let lhs = cubic_rep(&g.mul(&h)).unwrap();
        let rhs = cubic_rep(&g).unwrap().mul(&cubic_rep(&h).unwrap());
        assert_eq!(lhs, rhs);
        assert!(cubic_rep(&g).unwrap().det().is_one());
    }
}
