//! Exact order computation for matrix groups acting on the nonzero vectors
//! of F^4, via a deterministic Schreier-Sims chain with base e1..e4, plus
//! scalar-subgroup and element-order utilities.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::genpair::GeneratorPair;
use crate::gf::{Field, FieldElement, FieldTable, GfError};
use crate::linalg::MatrixN;

pub const DEFAULT_MAX_POINTS: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupOrderError {
    #[error("action domain of {0} nonzero vectors exceeds the cap {1}")]
    TooLarge(u64, u64),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("generators must be invertible 4x4 matrices over one field")]
    BadGenerators,
    #[error("{0} is not a valid field for this classical group")]
    BadTarget(String),
}

/// 4x4 matrix in table-index form.
type CMat = [u8; 16];

fn cmat_from(m: &MatrixN) -> CMat {
    let mut out = [0u8; 16];
    for i in 0..4 {
        for j in 0..4 {
            out[i * 4 + j] = m.at(i, j).index() as u8;
        }
    }
    out
}

fn cmat_to(m: &CMat, field: &Field) -> MatrixN {
    let rows = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| field.element_from_index(m[i * 4 + j] as u64))
                .collect()
        })
        .collect();
    MatrixN::from_rows(field, rows)
}

const CMAT_ID: CMat = [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1];

#[inline]
fn cmat_mul(t: &FieldTable, a: &CMat, b: &CMat) -> CMat {
    let mut out = [0u8; 16];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0u8;
            for k in 0..4 {
                acc = t.add(acc, t.mul(a[i * 4 + k], b[k * 4 + j]));
            }
            out[i * 4 + j] = acc;
        }
    }
    out
}

fn cmat_inv(t: &FieldTable, a: &CMat) -> Option<CMat> {
    let mut m = *a;
    let mut inv = CMAT_ID;
    for col in 0..4 {
        let piv = (col..4).find(|&r| m[r * 4 + col] != 0)?;
        if piv != col {
            for j in 0..4 {
                m.swap(piv * 4 + j, col * 4 + j);
                inv.swap(piv * 4 + j, col * 4 + j);
            }
        }
        let pv = t.inv(m[col * 4 + col]);
        for j in 0..4 {
            m[col * 4 + j] = t.mul(m[col * 4 + j], pv);
            inv[col * 4 + j] = t.mul(inv[col * 4 + j], pv);
        }
        for r in 0..4 {
            if r == col || m[r * 4 + col] == 0 {
                continue;
            }
            let f = m[r * 4 + col];
            for j in 0..4 {
                let s = t.mul(f, m[col * 4 + j]);
                m[r * 4 + j] = t.sub(m[r * 4 + j], s);
                let s = t.mul(f, inv[col * 4 + j]);
                inv[r * 4 + j] = t.sub(inv[r * 4 + j], s);
            }
        }
    }
    Some(inv)
}

#[inline]
fn cmat_vec(t: &FieldTable, a: &CMat, v: &[u8; 4]) -> [u8; 4] {
    let mut out = [0u8; 4];
    for i in 0..4 {
        let mut acc = 0u8;
        for j in 0..4 {
            acc = t.add(acc, t.mul(a[i * 4 + j], v[j]));
        }
        out[i] = acc;
    }
    out
}

#[inline]
fn enc(m: u64, v: &[u8; 4]) -> u64 {
    ((v[3] as u64 * m + v[2] as u64) * m + v[1] as u64) * m + v[0] as u64
}

#[inline]
fn dec(m: u64, mut pt: u64) -> [u8; 4] {
    let mut v = [0u8; 4];
    for x in v.iter_mut() {
        *x = (pt % m) as u8;
        pt /= m;
    }
    v
}

enum PosMap {
    Dense(Vec<i32>),
    Sparse(HashMap<u64, u32>),
}

impl PosMap {
    fn new(domain: u64) -> PosMap {
        if domain <= 1 << 22 {
            PosMap::Dense(vec![-1; domain as usize])
        } else {
            PosMap::Sparse(HashMap::new())
        }
    }
    #[inline]
    fn get(&self, pt: u64) -> Option<u32> {
        match self {
            PosMap::Dense(v) => {
                let x = v[pt as usize];
                (x >= 0).then_some(x as u32)
            }
            PosMap::Sparse(h) => h.get(&pt).copied(),
        }
    }
    #[inline]
    fn set(&mut self, pt: u64, slot: u32) {
        match self {
            PosMap::Dense(v) => v[pt as usize] = slot as i32,
            PosMap::Sparse(h) => {
                h.insert(pt, slot);
            }
        }
    }
}

struct Level {
    base_enc: u64,
    orbit: Vec<u64>,
    pos: PosMap,
    transversal: Vec<CMat>,
    transversal_inv: Vec<CMat>,
    /// generators of the stabilizer of the previous base points
    s_gens: Vec<CMat>,
    /// per orbit slot: how many of s_gens have been expanded
    done: Vec<usize>,
}

impl Level {
    fn new(base_index: usize, domain: u64, m: u64) -> Level {
        let mut base = [0u8; 4];
        base[base_index] = 1;
        let base_enc = enc(m, &base);
        let mut pos = PosMap::new(domain);
        pos.set(base_enc, 0);
        Level {
            base_enc,
            orbit: vec![base_enc],
            pos,
            transversal: vec![CMAT_ID],
            transversal_inv: vec![CMAT_ID],
            s_gens: Vec::new(),
            done: vec![0],
        }
    }

    fn has_pending(&self) -> bool {
        self.done.iter().any(|&d| d < self.s_gens.len())
    }
}

/// Base and strong generating set for a subgroup of GL4(q), with exact
/// order and membership testing.
pub struct Bsgs {
    pub field: Field,
    table: FieldTable,
    levels: Vec<Level>,
    pub order: BigUint,
}

impl Bsgs {
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<MatrixN> {
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.s_gens {
                let m = cmat_to(g, &self.field);
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        out
    }

    fn strip(&self, g: CMat) -> (CMat, usize) {
        let m = self.field.size();
        let mut g = g;
        for (i, level) in self.levels.iter().enumerate() {
            let img = enc(m, &cmat_vec(&self.table, &g, &dec(m, level.base_enc)));
            if img == level.base_enc {
                continue;
            }
            match level.pos.get(img) {
                None => return (g, i),
                Some(slot) => {
                    g = cmat_mul(&self.table, &level.transversal_inv[slot as usize], &g);
                }
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &MatrixN) -> bool {
        let (residue, _) = self.strip(cmat_from(g));
        residue == CMAT_ID
    }
}

/// Deterministic Schreier-Sims on the action on nonzero vectors of F^4.
pub fn schreier_sims(gens: &[MatrixN], max_points: u64) -> Result<Bsgs, GroupOrderError> {
    if gens.is_empty() || gens.iter().any(|g| g.n() != 4) {
        return Err(GroupOrderError::BadGenerators);
    }
    let field = gens[0].field().clone();
    let m = field.size();
    let domain = m
        .checked_pow(4)
        .ok_or(GroupOrderError::TooLarge(u64::MAX, max_points))?;
    if domain - 1 > max_points {
        return Err(GroupOrderError::TooLarge(domain - 1, max_points));
    }
    let table = FieldTable::new(&field)?;
    for g in gens {
        if g.inverse().is_none() {
            return Err(GroupOrderError::BadGenerators);
        }
    }

    let mut levels: Vec<Level> = (0..4).map(|i| Level::new(i, domain, m)).collect();

    // first level whose base point the generator moves
    let fml = |g: &CMat, t: &FieldTable| -> Option<usize> {
        for i in 0..4 {
            let mut base = [0u8; 4];
            base[i] = 1;
            if cmat_vec(t, g, &base) != base {
                return Some(i);
            }
        }
        None
    };

    let mut pending_gens: Vec<CMat> = gens.iter().map(cmat_from).collect();

    loop {
        // install any pending generators
        while let Some(g) = pending_gens.pop() {
            if let Some(j) = fml(&g, &table) {
                for level in levels.iter_mut().take(j + 1) {
                    level.s_gens.push(g);
                }
            }
        }
        // deepest level with pending (slot, gen) pairs
        let lvl = match (0..4).rev().find(|&l| levels[l].has_pending()) {
            Some(l) => l,
            None => break,
        };
        // process pending pairs at this level until a new generator appears
        'scan: loop {
            let mut advanced = false;
            let mut slot = 0;
            while slot < levels[lvl].orbit.len() {
                while levels[lvl].done[slot] < levels[lvl].s_gens.len() {
                    let gi = levels[lvl].done[slot];
                    levels[lvl].done[slot] = gi + 1;
                    advanced = true;
                    let s = levels[lvl].s_gens[gi];
                    let pt = levels[lvl].orbit[slot];
                    let img = enc(m, &cmat_vec(&table, &s, &dec(m, pt)));
                    match levels[lvl].pos.get(img) {
                        None => {
                            // tree edge: extend orbit, Schreier generator trivial
                            let t_new = cmat_mul(&table, &s, &levels[lvl].transversal[slot]);
                            let t_inv = cmat_inv(&table, &t_new).expect("invertible transversal");
                            let new_slot = levels[lvl].orbit.len() as u32;
                            levels[lvl].orbit.push(img);
                            levels[lvl].pos.set(img, new_slot);
                            levels[lvl].transversal.push(t_new);
                            levels[lvl].transversal_inv.push(t_inv);
                            levels[lvl].done.push(0);
                        }
                        Some(islot) => {
                            let h = cmat_mul(
                                &table,
                                &levels[lvl].transversal_inv[islot as usize],
                                &cmat_mul(&table, &s, &levels[lvl].transversal[slot]),
                            );
                            if h != CMAT_ID {
                                // sift through deeper levels
                                let mut r = h;
                                let mut failed_at = None;
                                for deeper in lvl + 1..4 {
                                    let level = &levels[deeper];
                                    let img =
                                        enc(m, &cmat_vec(&table, &r, &dec(m, level.base_enc)));
                                    if img == level.base_enc {
                                        continue;
                                    }
                                    match level.pos.get(img) {
                                        None => {
                                            failed_at = Some(deeper);
                                            break;
                                        }
                                        Some(sl) => {
                                            r = cmat_mul(
                                                &table,
                                                &level.transversal_inv[sl as usize],
                                                &r,
                                            );
                                        }
                                    }
                                }
                                if r != CMAT_ID {
                                    let j = fml(&r, &table).expect("non-identity residue");
                                    debug_assert!(j > lvl);
                                    let _ = failed_at;
                                    for level in levels.iter_mut().take(j + 1).skip(lvl + 1) {
                                        level.s_gens.push(r);
                                    }
                                    // deeper level is now pending; restart scheduling
                                    break 'scan;
                                }
                            }
                        }
                    }
                }
                slot += 1;
            }
            if !advanced {
                break;
            }
        }
    }

    let mut order = BigUint::one();
    for l in &levels {
        order *= BigUint::from(l.orbit.len() as u64);
    }
    Ok(Bsgs {
        field,
        table,
        levels,
        order,
    })
}

/// q^6 (q^2-1)(q^3-1)(q^4-1) for SL4(q); q^4 (q^2-1)(q^4-1) for Sp4(q);
/// q^6 (q^2-1)(q^3+1)(q^4-1) for SU4(q^2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ClassicalGroup {
    SL4,
    Sp4,
    SU4,
}

pub fn classical_order(name: ClassicalGroup, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let one = BigUint::one();
    let q2 = &q * &q;
    let q3 = &q2 * &q;
    let q4 = &q3 * &q;
    let q6 = &q4 * &q2;
    match name {
        ClassicalGroup::SL4 => q6 * (&q2 - &one) * (&q3 - &one) * (&q4 - &one),
        ClassicalGroup::Sp4 => q4.clone() * (&q2 - &one) * (&q4 - &one),
        ClassicalGroup::SU4 => q6 * (&q2 - &one) * (&q3 + &one) * (&q4 - &one),
    }
}

/// The natural-module field of the target group for a pair over `field`:
/// SU4 requires a square field (the form field is GF(q) with q^2 the pair
/// field size).
pub fn classical_order_over(name: ClassicalGroup, field: &Field) -> Result<BigUint, GroupOrderError> {
    match name {
        ClassicalGroup::SL4 | ClassicalGroup::Sp4 => Ok(classical_order(name, field.size())),
        ClassicalGroup::SU4 => {
            if field.degree() % 2 != 0 {
                return Err(GroupOrderError::BadTarget(format!(
                    "SU4 needs a square field, got GF({})",
                    field.size()
                )));
            }
            let q = field.p().pow((field.degree() / 2) as u32);
            Ok(classical_order(name, q))
        }
    }
}

/// All scalars lambda with lambda I in the group (lambda^4 = 1 candidates,
/// confirmed by membership).
pub fn scalars_in(bsgs: &Bsgs, field: &Field) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for i in 1..field.size() {
        let lam = field.element_from_index(i);
        if !lam.pow(4).is_one() {
            continue;
        }
        let m = MatrixN::scalar(field, 4, &lam);
        if bsgs.contains(&m) {
            out.push(lam);
        }
    }
    out
}

/// Order summary of a generated group.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GroupReport {
    #[serde(serialize_with = "ser_biguint")]
    pub order: BigUint,
    pub scalar_order: u64,
    #[serde(serialize_with = "ser_biguint")]
    pub projective_order: BigUint,
}

pub fn ser_biguint<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn group_report(bsgs: &Bsgs) -> GroupReport {
    let scalars = scalars_in(bsgs, &bsgs.field);
    let scalar_order = scalars.len() as u64 + 0;
    let scalar_order = scalar_order.max(1);
    let projective_order = &bsgs.order / BigUint::from(scalar_order);
    GroupReport {
        order: bsgs.order.clone(),
        scalar_order,
        projective_order,
    }
}

/// Multiplicative and projective order of an invertible matrix.
pub fn element_order(g: &MatrixN) -> (u64, u64) {
    let field = g.field();
    let q = field.size();
    assert!(q <= 1 << 16, "element_order supports fields up to 2^16");
    // exponent bound: p-part for unipotents times lcm(q^i - 1)
    let p = field.p();
    let mut ppart = 1u64;
    while ppart < 4 {
        ppart *= p;
    }
    let mut bound = ppart;
    for i in 1..=4u32 {
        let d = q.pow(i) - 1;
        bound = lcm(bound, d);
    }
    let mut ord = bound;
    for (l, _) in factorize(bound) {
        while ord % l == 0 && g.pow(ord / l).is_identity() {
            ord /= l;
        }
    }
    debug_assert!(g.pow(ord).is_identity());
    // projective order: least divisor h of ord with g^h scalar
    let mut divisors = divisors_of(ord);
    divisors.sort_unstable();
    let proj = divisors
        .into_iter()
        .find(|&h| g.pow(h).is_scalar())
        .unwrap_or(ord);
    (ord, proj)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn divisors_of(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (l, e) in factorize(n) {
        let snapshot = out.clone();
        let mut pw = 1u64;
        for _ in 0..e {
            pw *= l;
            for d in &snapshot {
                out.push(d * pw);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    /// order equals the classical group's order
    Full,
    /// strictly smaller
    Proper,
    /// strictly larger (the pair is not inside the target at all)
    Larger,
}

/// Exact-order comparison of <x, y> against the named classical group.
pub fn verdict(
    pair: &GeneratorPair,
    target: ClassicalGroup,
    max_points: u64,
) -> Result<(Verdict, BigUint), GroupOrderError> {
    let bsgs = schreier_sims(&pair.gens(), max_points)?;
    let expected = classical_order_over(target, &pair.field)?;
    let v = match bsgs.order.cmp(&expected) {
        std::cmp::Ordering::Equal => Verdict::Full,
        std::cmp::Ordering::Less => Verdict::Proper,
        std::cmp::Ordering::Greater => Verdict::Larger,
    };
    Ok((v, bsgs.order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genpair::make_pair;
    use crate::gf::Field;

    #[test]
    fn classical_order_values() {
        assert_eq!(classical_order(ClassicalGroup::SL4, 2), BigUint::from(20160u64));
        assert_eq!(
            classical_order(ClassicalGroup::SL4, 3),
            BigUint::from(12_130_560u64)
        );
        assert_eq!(classical_order(ClassicalGroup::Sp4, 3), BigUint::from(51840u64));
        assert_eq!(
            classical_order(ClassicalGroup::SU4, 3),
            BigUint::from(13_063_680u64)
        );
    }

    #[test]
    fn trivial_and_cyclic_groups() {
        let f = Field::new(3, 1).unwrap();
        let id = MatrixN::identity(&f, 4);
        let bsgs = schreier_sims(&[id], DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(bsgs.order, BigUint::one());

        // x alone: order 2 for d = 1, order 4 for d = -1 (p odd)
        let pair = make_pair(&f, 3, 1, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        let bsgs = schreier_sims(&[pair.x.clone()], DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(bsgs.order, BigUint::from(2u32));
        let pair = make_pair(&f, 3, -1, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        let bsgs = schreier_sims(&[pair.x.clone()], DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(bsgs.order, BigUint::from(4u32));
    }

    #[test]
    fn sl4_2_generated() {
        // SL4(2) is (2,4)-generated: q=2, k=4, r=(0,0,0,1)
        let f = Field::new(2, 1).unwrap();
        let pair = make_pair(&f, 4, 1, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        let (v, ord) = verdict(&pair, ClassicalGroup::SL4, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(ord, BigUint::from(20160u64));
        assert_eq!(v, Verdict::Full);
    }

    #[test]
    fn sl4_3_generated_and_scalars() {
        let f = Field::new(3, 1).unwrap();
        let pair = make_pair(&f, 3, 1, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        let bsgs = schreier_sims(&pair.gens(), DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(bsgs.order, BigUint::from(12_130_560u64));
        let sc = scalars_in(&bsgs, &f);
        assert_eq!(sc.len(), 2); // ±1
        let rep = group_report(&bsgs);
        assert_eq!(rep.projective_order * BigUint::from(rep.scalar_order), rep.order);
    }

    #[test]
    fn bsgs_invariant_under_conjugation_and_order() {
        let f = Field::new(3, 1).unwrap();
        let pair = make_pair(&f, 4, -1, [f.zero(), f.one(), f.zero(), f.one()]).unwrap();
        let b1 = schreier_sims(&[pair.x.clone(), pair.y.clone()], DEFAULT_MAX_POINTS).unwrap();
        let b2 = schreier_sims(&[pair.y.clone(), pair.x.clone()], DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(b1.order, b2.order);
        let c = MatrixN::from_ints(&f, &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 2], &[0, 0, 0, 1]]);
        let ci = c.inverse().unwrap();
        let conj: Vec<MatrixN> = pair.gens().iter().map(|g| ci.mul(g).mul(&c)).collect();
        let b3 = schreier_sims(&conj, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(b1.order, b3.order);
    }

    #[test]
    fn membership_test() {
        let f = Field::new(3, 1).unwrap();
        let pair = make_pair(&f, 3, 1, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        let bsgs = schreier_sims(&pair.gens(), DEFAULT_MAX_POINTS).unwrap();
        // SL4(3): determinant-1 matrices are members, others not
        assert!(bsgs.contains(&pair.xy()));
        assert!(bsgs.contains(&MatrixN::scalar(&f, 4, &f.from_int(-1))));
        let non_sl = MatrixN::from_ints(&f, &[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(!bsgs.contains(&non_sl));
    }

    #[test]
    fn element_orders() {
        let f = Field::new(7, 1).unwrap();
        let pair = make_pair(&f, 3, 1, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        assert_eq!(element_order(&pair.y), (3, 3));
        let mi = MatrixN::scalar(&f, 4, &f.from_int(-1));
        assert_eq!(element_order(&mi), (2, 1));
        // s = -1, r4^2 = d, r2 = r4: projective order of xy is 5
        let pair5 = make_pair(&f, 3, 1, [f.zero(), f.one(), f.zero(), f.one()]).unwrap();
        let (_, proj) = element_order(&pair5.xy());
        assert_eq!(proj, 5);
    }

    #[test]
    fn domain_cap() {
        let f = Field::new(5, 2).unwrap();
        let pair = make_pair(&f, 3, 1, [f.zero(), f.zero(), f.zero(), f.one()]).unwrap();
        assert!(matches!(
            schreier_sims(&pair.gens(), 1000),
            Err(GroupOrderError::TooLarge(_, 1000))
        ));
    }
}
