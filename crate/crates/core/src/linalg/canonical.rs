//! Characteristic polynomials, similarity invariants (Smith normal form of
//! tI - M over F_q[t]) and centralizer dimensions.

use super::poly::Poly;
use super::{null_space, LinalgError, MatrixN};
use std::fmt;

/// The invariant-factor chain d_1 | d_2 | ... | d_r of tI - M, monic and
/// nonconstant, with product the characteristic polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct SimilarityInvariants(pub Vec<Poly>);

impl SimilarityInvariants {
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    /// The minimal polynomial: the last invariant.
    pub fn minimal_poly(&self) -> &Poly {
        self.0.last().expect("nonempty invariant chain")
    }
    pub fn char_poly(&self) -> Poly {
        let f = self.0[0].field();
        self.0.iter().fold(Poly::one(f), |acc, d| acc.mul(d))
    }
}

impl fmt::Debug for SimilarityInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| format!("{p}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn char_matrix(m: &MatrixN) -> Vec<Vec<Poly>> {
    let f = m.field();
    let n = m.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -m.at(i, j);
                    if i == j {
                        Poly::new(f, vec![c, f.one()])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect()
}

/// det(tI - M), monic of degree n, by fraction-free (Bareiss) elimination
/// over F_q[t].
pub fn char_poly(m: &MatrixN) -> Poly {
    let f = m.field();
    let n = m.n();
    let mut a = char_matrix(m);
    let mut sign_flip = false;
    let mut prev = Poly::one(f);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let piv = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match piv {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Poly::zero(f),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = a[i][j].mul(&a[k][k]);
                let t2 = a[i][k].mul(&a[k][j]);
                a[i][j] = t1.sub(&t2).div_exact(&prev);
            }
        }
        for i in k + 1..n {
            a[i][k] = Poly::zero(f);
        }
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if sign_flip {
        det = det.neg();
    }
    det.make_monic()
}

/// Smith normal form of tI - M over F_q[t] with smallest-degree pivot
/// first; returns the monic nonconstant diagonal entries in divisibility
/// order.
pub fn similarity_invariants(m: &MatrixN) -> SimilarityInvariants {
    let f = m.field().clone();
    let n = m.n();
    let mut a = char_matrix(m);
    let mut diag = Vec::new();
    for k in 0..n {
        'outer: loop {
            // smallest-degree nonzero pivot in the trailing block,
            // ties broken by (row, col)
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if let Some(d) = a[i][j].degree() {
                        if best.map_or(true, |(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let (_, pi, pj) = match best {
                Some(b) => b,
                None => {
                    // trailing block is zero
                    for _ in k..n {
                        diag.push(Poly::zero(&f));
                    }
                    return finish(diag);
                }
            };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(k, pj);
                }
            }
            // clear column k
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let (q, r) = a[i][k].divmod(&a[k][k]);
                if !r.is_zero() {
                    // reduce and re-pivot
                    for j in k..n {
                        let s = q.mul(&a[k][j]);
                        a[i][j] = a[i][j].sub(&s);
                    }
                    continue 'outer;
                }
                for j in k..n {
                    let s = q.mul(&a[k][j]);
                    a[i][j] = a[i][j].sub(&s);
                }
            }
            // clear row k
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let (q, r) = a[k][j].divmod(&a[k][k]);
                if !r.is_zero() {
                    for i in k..n {
                        let s = q.mul(&a[i][k]);
                        a[i][j] = a[i][j].sub(&s);
                    }
                    continue 'outer;
                }
                for i in k..n {
                    let s = q.mul(&a[i][k]);
                    a[i][j] = a[i][j].sub(&s);
                }
            }
            // divisibility: pivot must divide the rest of the block
            for i in k + 1..n {
                for j in k + 1..n {
                    if !a[k][k].divides(&a[i][j]) {
                        // fold the offending row into row k and restart
                        for col in k..n {
                            let t = a[i][col].clone();
                            a[k][col] = a[k][col].add(&t);
                        }
                        continue 'outer;
                    }
                }
            }
            diag.push(a[k][k].clone());
            break;
        }
    }
    finish(diag)
}

fn finish(diag: Vec<Poly>) -> SimilarityInvariants {
    let invs: Vec<Poly> = diag
        .into_iter()
        .filter(|d| d.degree().unwrap_or(0) > 0)
        .map(|d| d.make_monic())
        .collect();
    SimilarityInvariants(invs)
}

/// dim of the centralizer of M in Mat_n, computed by the Frobenius formula
/// sum min(deg d_i, deg d_j) and cross-checked by solving MZ = ZM.
pub fn centralizer_dim(m: &MatrixN) -> Result<usize, LinalgError> {
    let invs = similarity_invariants(m);
    let degs: Vec<usize> = invs.0.iter().map(|d| d.degree().unwrap()).collect();
    let mut formula = 0usize;
    for &di in &degs {
        for &dj in &degs {
            formula += di.min(dj);
        }
    }

    // linear route: nullity of Z -> MZ - ZM
    let f = m.field();
    let n = m.n();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![f.zero(); n * n];
            // (MZ)_{ij} = sum_k M_{ik} Z_{kj}; (ZM)_{ij} = sum_l Z_{il} M_{lj}
            for k in 0..n {
                row[k * n + j] = &row[k * n + j] + m.at(i, k);
            }
            for l in 0..n {
                row[i * n + l] = &row[i * n + l] - m.at(l, j);
            }
            rows.push(row);
        }
    }
    let nullity = null_space(f, &rows, n * n).len();
    if nullity != formula {
        return Err(LinalgError::InternalMismatch(format!(
            "centralizer dim: invariant formula {formula} vs linear solve {nullity}"
        )));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn char_poly_identity() {
        let f = Field::new(5, 1).unwrap();
        let id = MatrixN::identity(&f, 4);
        // (t-1)^4
        let want = Poly::from_ints(&f, &[-1, 1]).pow(4);
        assert_eq!(char_poly(&id), want);
    }

    #[test]
    fn scalar_invariants() {
        let f = Field::new(7, 1).unwrap();
        let m = MatrixN::scalar(&f, 4, &f.from_int(3));
        let inv = similarity_invariants(&m);
        assert_eq!(inv.len(), 4);
        let lin = Poly::from_ints(&f, &[-3, 1]);
        for d in &inv.0 {
            assert_eq!(*d, lin);
        }
        assert_eq!(centralizer_dim(&m).unwrap(), 16);
    }

    #[test]
    fn cayley_hamilton_random() {
        // char_poly(M)(M) = 0 over GF(2), GF(9), GF(25)
        for (p, a) in [(2u64, 1usize), (3, 2), (5, 2)] {
            let f = Field::new(p, a).unwrap();
            let mut seed = 0x9e3779b9u64;
            for _ in 0..10 {
                let mut m = MatrixN::zero(&f, 4);
                for i in 0..4 {
                    for j in 0..4 {
                        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        *m.at_mut(i, j) = f.element_from_index(seed % f.size());
                    }
                }
                let cp = char_poly(&m);
                assert_eq!(cp.degree(), Some(4));
                assert!(cp.is_monic());
                // evaluate at the matrix
                let mut acc = MatrixN::zero(&f, 4);
                let mut pw = MatrixN::identity(&f, 4);
                for c in cp.coeffs() {
                    acc = acc.add(&pw.scale(c));
                    pw = pw.mul(&m);
                }
                assert_eq!(acc, MatrixN::zero(&f, 4));
                // char poly = product of similarity invariants
                let si = similarity_invariants(&m);
                assert_eq!(si.char_poly(), cp);
            }
        }
    }

    #[test]
    fn centralizer_routes_agree_random() {
        for (p, a) in [(2u64, 1usize), (3, 1), (3, 2)] {
            let f = Field::new(p, a).unwrap();
            let mut seed = 0xabcdef12u64;
            for _ in 0..50 {
                let mut m = MatrixN::zero(&f, 4);
                for i in 0..4 {
                    for j in 0..4 {
                        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(99991);
                        *m.at_mut(i, j) = f.element_from_index(seed % f.size());
                    }
                }
                centralizer_dim(&m).unwrap();
            }
        }
    }
}
