//! Exact arithmetic in GF(p^a).
//!
//! Elements are residue classes of polynomials over F_p modulo a fixed
//! primitive modulus, so the residue class of `t` always generates the
//! multiplicative group. The modulus is chosen deterministically (see
//! [`Field::new`]), which pins down every named constant used elsewhere
//! (roots of unity, square roots, embedded algebraic numbers).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Degree cap for extension fields.
pub const MAX_DEGREE: usize = 12;
/// Field size cap: enumeration-based operations stay desk-scale.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree {0} out of range 1..={MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("field size {0} exceeds cap {MAX_FIELD_SIZE}")]
    FieldTooLarge(u64),
    #[error("no primitive polynomial found (internal error)")]
    NoPrimitivePolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("no element of multiplicative order {0} in GF({1})")]
    OrderUnavailable(u64, u64),
    #[error("modulus polynomial is not irreducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("modulus polynomial is not primitive over F_{0}")]
    NonPrimitiveModulus(u64),
    #[error("invalid field or element literal: {0}")]
    BadLiteral(String),
}

// ---------------------------------------------------------------------------
// arithmetic over F_p (u64 representatives)

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
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

/// Dense polynomials over F_p, constant term first. Used only for modulus
/// bookkeeping; field elements carry their own reduced representation.
mod fp_poly {
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        rem(&mut prod, m, p);
        prod
    }

    /// Reduce `v` modulo the monic polynomial `m` in place.
    pub fn rem(v: &mut Vec<u64>, m: &[u64], p: u64) {
        let dm = m.len() - 1;
        while v.len() > dm {
            let lead = *v.last().unwrap() % p;
            let shift = v.len() - 1 - dm;
            if lead != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = i + shift;
                    v[idx] = (v[idx] + (p - lead % p) * mi) % p;
                }
            }
            v.pop();
        }
        trim(v);
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = base.to_vec();
        rem(&mut b, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            // a mod b, with b made monic on the fly
            let lead_inv = inv_mod_p(*b.last().unwrap(), p);
            let bm: Vec<u64> = b.iter().map(|&c| c * lead_inv % p).collect();
            rem(&mut a, &bm, p);
            std::mem::swap(&mut a, &mut b);
        }
        if let Some(&l) = a.last() {
            let li = inv_mod_p(l, p);
            for c in a.iter_mut() {
                *c = *c * li % p;
            }
        }
        a
    }

    pub fn inv_mod_p(x: u64, p: u64) -> u64 {
        // p is small and prime; Fermat
        super::pow_mod_p(x % p, p - 2, p)
    }
}

fn pow_mod_p(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn modulus_is_irreducible(m: &[u64], p: u64) -> bool {
    let a = m.len() - 1;
    if a == 1 {
        return true;
    }
    // t^(p^a) == t mod m, and gcd(t^(p^(a/l)) - t, m) = 1 for prime l | a
    let t = vec![0u64, 1];
    let mut tp = t.clone();
    for _ in 0..a {
        tp = fp_poly::pow_mod(&tp, p, m, p);
    }
    if tp != t {
        return false;
    }
    for (l, _) in factorize(a as u64) {
        let d = a / l as usize;
        let mut td = t.clone();
        for _ in 0..d {
            td = fp_poly::pow_mod(&td, p, m, p);
        }
        // td - t
        let mut diff = td;
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        fp_poly::trim(&mut diff);
        let g = fp_poly::gcd(&diff, m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn modulus_is_primitive(m: &[u64], p: u64, size: u64, factors: &[(u64, u32)]) -> bool {
    if !modulus_is_irreducible(m, p) {
        return false;
    }
    let t = vec![0u64, 1];
    let n = size - 1;
    if m.len() == 2 {
        // a = 1: the "root" is -c0; its order must be p-1
        let root = (p - m[0] % p) % p;
        if root == 0 {
            return false;
        }
        return factors.iter().all(|&(l, _)| pow_mod_p(root, n / l, p) != 1);
    }
    for &(l, _) in factors {
        let e = fp_poly::pow_mod(&t, n / l, m, p);
        if e == vec![1] {
            return false;
        }
    }
    true
}

/// Canonical modulus: the monic primitive polynomial of degree `a` that is
/// minimal for the word order on (w_{a-1},...,w_0), where w_i is the
/// representative of (-1)^(a-i) c_i in 0..p. This ordering reproduces the
/// moduli behind the constants used in the worked examples: t^2-t-1 for
/// GF(9), t^2-t+2 for GF(25), t^4+t+1 for GF(16), and t - g_0 with g_0 the
/// least primitive root for prime fields.
fn canonical_modulus(p: u64, a: usize, size: u64, factors: &[(u64, u32)]) -> Option<Vec<u64>> {
    let mut digits = vec![0u64; a];
    loop {
        // digits holds (w_{a-1}, ..., w_0) big-endian in lex order
        let mut m = vec![0u64; a + 1];
        m[a] = 1;
        for i in 0..a {
            let w = digits[a - 1 - i]; // w_i
            let c = if (a - i) % 2 == 0 { w } else { (p - w) % p };
            m[i] = c;
        }
        if m[0] != 0 && modulus_is_primitive(&m, p, size, factors) {
            return Some(m);
        }
        // increment digits
        let mut k = a;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// FieldSpec / Field

/// Immutable description of GF(p^a): prime, degree and primitive modulus.
#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    a: usize,
    /// monic, constant term first, length a+1
    modulus: Vec<u64>,
    size: u64,
    /// prime factorization of p^a - 1
    unit_order_factors: Vec<(u64, u32)>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.a == other.a && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

/// Shared handle to a [`FieldSpec`]. Cloning is cheap; equality is
/// structural.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.size)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.a == 1 {
            write!(f, "{}", self.0.p)
        } else {
            write!(f, "{}^{}", self.0.p, self.0.a)
        }
    }
}

fn field_registry() -> &'static Mutex<HashMap<(u64, usize), Field>> {
    static REG: OnceLock<Mutex<HashMap<(u64, usize), Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// GF(p^a) with the canonical primitive modulus. Deterministic and
    /// cached per (p, a).
    pub fn new(p: u64, a: usize) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NonPrime(p));
        }
        if a == 0 || a > MAX_DEGREE {
            return Err(GfError::DegreeTooLarge(a));
        }
        let mut size = 1u64;
        for _ in 0..a {
            size = size.saturating_mul(p);
            if size > MAX_FIELD_SIZE {
                return Err(GfError::FieldTooLarge(size));
            }
        }
        if let Some(f) = field_registry().lock().unwrap().get(&(p, a)) {
            return Ok(f.clone());
        }
        let factors = factorize(size - 1);
        let modulus =
            canonical_modulus(p, a, size, &factors).ok_or(GfError::NoPrimitivePolynomial)?;
        let field = Field(Arc::new(FieldSpec {
            p,
            a,
            modulus,
            size,
            unit_order_factors: factors,
        }));
        field_registry()
            .lock()
            .unwrap()
            .insert((p, a), field.clone());
        Ok(field)
    }

    /// GF(p^a) with an explicit modulus (constant first, monic, length a+1).
    /// The modulus must be primitive.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NonPrime(p));
        }
        let a = modulus.len().saturating_sub(1);
        if a == 0 || a > MAX_DEGREE {
            return Err(GfError::DegreeTooLarge(a));
        }
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        if *modulus.last().unwrap() != 1 {
            return Err(GfError::BadLiteral("modulus must be monic".into()));
        }
        let mut size = 1u64;
        for _ in 0..a {
            size = size.saturating_mul(p);
            if size > MAX_FIELD_SIZE {
                return Err(GfError::FieldTooLarge(size));
            }
        }
        let factors = factorize(size - 1);
        if !modulus_is_irreducible(&modulus, p) {
            return Err(GfError::ReducibleModulus(p));
        }
        if !modulus_is_primitive(&modulus, p, size, &factors) {
            return Err(GfError::NonPrimitiveModulus(p));
        }
        Ok(Field(Arc::new(FieldSpec {
            p,
            a,
            modulus,
            size,
            unit_order_factors: factors,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn degree(&self) -> usize {
        self.0.a
    }
    pub fn size(&self) -> u64 {
        self.0.size
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub fn characteristic_is(&self, p: u64) -> bool {
        self.0.p == p
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.0.a],
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.0.p as i64;
        let r = ((n % p) + p) % p;
        let mut coeffs = vec![0; self.0.a];
        coeffs[0] = r as u64;
        FieldElement {
            coeffs,
            field: self.clone(),
        }
    }

    /// The canonical generator: the residue class of t (for a = 1 the least
    /// primitive root mod p).
    pub fn generator(&self) -> FieldElement {
        if self.0.a == 1 {
            let g0 = (self.0.p - self.0.modulus[0]) % self.0.p;
            return self.from_int(g0 as i64);
        }
        let mut coeffs = vec![0; self.0.a];
        coeffs[1] = 1;
        FieldElement {
            coeffs,
            field: self.clone(),
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % self.0.p).collect();
        c.resize(self.0.a, 0);
        FieldElement {
            coeffs: c,
            field: self.clone(),
        }
    }

    /// Bijection 0..size -> elements via base-p digits (constant coefficient
    /// is the least significant digit).
    pub fn element_from_index(&self, mut idx: u64) -> FieldElement {
        let mut coeffs = vec![0; self.0.a];
        for c in coeffs.iter_mut() {
            *c = idx % self.0.p;
            idx /= self.0.p;
        }
        FieldElement {
            coeffs,
            field: self.clone(),
        }
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        let mut idx = 0u64;
        for &c in x.coeffs.iter().rev() {
            idx = idx * self.0.p + c;
        }
        idx
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.size).map(move |i| self.element_from_index(i))
    }

    /// A deterministic primitive k-th root of unity.
    ///
    /// For gcd(k,p)=1 and k | p^a-1 this is g^((p^a-1)/k) with g the
    /// canonical generator; for k = p it is 1 and for k = 2p it is -1.
    pub fn root_of_unity(&self, k: u64) -> Result<FieldElement, GfError> {
        let p = self.0.p;
        if k == p {
            return Ok(self.one());
        }
        if k == 2 * p {
            return Ok(-&self.one());
        }
        if k % p != 0 && (self.0.size - 1) % k == 0 {
            return Ok(self.generator().pow((self.0.size - 1) / k));
        }
        Err(GfError::OrderUnavailable(k, self.0.size))
    }

    /// Degree over F_p of F_p[elems], as the lcm of the degrees of the
    /// minimal polynomials of the elements.
    pub fn generated_subfield(&self, elems: &[FieldElement]) -> usize {
        let mut l = 1usize;
        for e in elems {
            let d = e.minimal_degree();
            l = l / gcd_usize(l, d) * d;
        }
        l
    }

    /// Number of r != 0 with F_p[r^2] a proper subfield of GF(p^a).
    pub fn count_defective(&self) -> u64 {
        let mut n = 0;
        for i in 1..self.0.size {
            let r = self.element_from_index(i);
            let sq = &r * &r;
            if sq.minimal_degree() < self.0.a {
                n += 1;
            }
        }
        n
    }

    /// All roots of `poly` (constant first, coefficients as elements of this
    /// field) found by enumeration, ascending by element index.
    pub fn roots_of(&self, poly: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = Vec::new();
        for i in 0..self.0.size {
            let x = self.element_from_index(i);
            let mut acc = self.zero();
            for c in poly.iter().rev() {
                acc = &(&acc * &x) + c;
            }
            if acc.is_zero() {
                out.push(x);
            }
        }
        out
    }

    /// A root in this field of a polynomial with F_p coefficients
    /// (constant first), least by element index.
    pub fn embed_root(&self, poly_fp: &[i64]) -> Option<FieldElement> {
        let poly: Vec<FieldElement> = poly_fp.iter().map(|&c| self.from_int(c)).collect();
        self.roots_of(&poly).into_iter().next()
    }
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// FieldElement

/// An element of GF(p^a): reduced coefficient vector plus a handle to the
/// owning field. Equality is coefficient-wise within the same field.
#[derive(Clone)]
pub struct FieldElement {
    coeffs: Vec<u64>,
    field: Field,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}
impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.size().hash(state);
        self.coeffs.hash(state);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic entry point; the operator impls assume matching
/// fields and panic otherwise.
pub fn arith(x: &FieldElement, y: &FieldElement, op: ArithOp) -> Result<FieldElement, GfError> {
    if x.field != y.field {
        return Err(GfError::FieldMismatch);
    }
    match op {
        ArithOp::Add => Ok(x + y),
        ArithOp::Sub => Ok(x - y),
        ArithOp::Mul => Ok(x * y),
        ArithOp::Div => {
            if y.is_zero() {
                Err(GfError::DivisionByZero)
            } else {
                Ok(x * &y.inv())
            }
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn index(&self) -> u64 {
        self.field.index_of(self)
    }

    pub fn inv(&self) -> FieldElement {
        assert!(!self.is_zero(), "inverse of zero");
        self.pow(self.field.size() - 2)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    pub fn pow_i(&self, e: i64) -> FieldElement {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().pow(e.unsigned_abs())
        }
    }

    /// x^(p^i); `frobenius(x, a) = x`.
    pub fn frobenius(&self, i: usize) -> FieldElement {
        let i = i % self.field.degree();
        let mut x = self.clone();
        for _ in 0..i {
            x = x.pow(self.field.p());
        }
        x
    }

    /// Degree over F_p of F_p[self]: least d | a with x^(p^d) = x.
    pub fn minimal_degree(&self) -> usize {
        let a = self.field.degree();
        for d in 1..=a {
            if a % d == 0 && self.frobenius(d) == *self {
                return d;
            }
        }
        a
    }

    pub fn multiplicative_order(&self) -> u64 {
        assert!(!self.is_zero());
        let spec = &self.field.0;
        let mut ord = spec.size - 1;
        for &(l, e) in &spec.unit_order_factors {
            for _ in 0..e {
                if ord % l == 0 && self.pow(ord / l).is_one() {
                    ord /= l;
                } else {
                    break;
                }
            }
        }
        ord
    }

    /// Whether the element is a square in its own field.
    pub fn is_square(&self) -> bool {
        if self.is_zero() || self.field.p() == 2 {
            return true;
        }
        self.pow((self.field.size() - 1) / 2).is_one()
    }

    /// Square root within the field; `None` when the element is a
    /// non-square (odd characteristic). Deterministic: the root with the
    /// smaller element index is returned.
    pub fn sqrt(&self) -> Option<FieldElement> {
        let f = &self.field;
        if self.is_zero() {
            return Some(f.zero());
        }
        if f.p() == 2 {
            // squaring is bijective: x^(2^(a-1)) squares to x^(2^a) = x
            let mut acc = self.clone();
            for _ in 0..f.degree() - 1 {
                acc = &acc * &acc;
            }
            return Some(acc);
        }
        if !self.is_square() {
            return None;
        }
        let root = self.tonelli_shanks();
        let neg = -&root;
        Some(if root.index() <= neg.index() { root } else { neg })
    }

    fn tonelli_shanks(&self) -> FieldElement {
        let f = &self.field;
        let q = f.size();
        let mut s = 0u32;
        let mut m = q - 1;
        while m % 2 == 0 {
            m /= 2;
            s += 1;
        }
        // generator is a non-square since it is primitive
        let z = f.generator().pow(m);
        let mut c = z;
        let mut t = self.pow(m);
        let mut r = self.pow((m + 1) / 2);
        let mut e = s;
        while !t.is_one() {
            let mut i = 0u32;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = &t2 * &t2;
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(e - i - 1) {
                b = &b * &b;
            }
            r = &r * &b;
            c = &b * &b;
            t = &t * &c;
            e = i;
        }
        r
    }
}

/// A square root of `x`, in the base field when possible, otherwise in the
/// canonical quadratic extension. The flag is true when the root lies in
/// the base field. Both signs are valid; the returned one is deterministic.
pub fn sqrt_in_closure(x: &FieldElement) -> Result<(FieldElement, bool), GfError> {
    if let Some(r) = x.sqrt() {
        return Ok((r, true));
    }
    let ext = quadratic_extension(x.field())?;
    let lifted = ext.embed(x);
    let r = lifted.sqrt().expect("square in quadratic extension");
    Ok((r, false))
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl<'a, 'b> std::ops::$trait<&'b FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'b FieldElement) -> FieldElement {
                assert!(self.field == rhs.field, "field mismatch");
                $impl_fn(self, rhs)
            }
        }
    };
}

fn add_impl(a: &FieldElement, b: &FieldElement) -> FieldElement {
    let p = a.field.p();
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| (x + y) % p)
        .collect();
    FieldElement {
        coeffs,
        field: a.field.clone(),
    }
}

fn sub_impl(a: &FieldElement, b: &FieldElement) -> FieldElement {
    let p = a.field.p();
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| (x + p - y) % p)
        .collect();
    FieldElement {
        coeffs,
        field: a.field.clone(),
    }
}

fn mul_impl(a: &FieldElement, b: &FieldElement) -> FieldElement {
    let spec = &a.field.0;
    let p = spec.p;
    if spec.a == 1 {
        return FieldElement {
            coeffs: vec![a.coeffs[0] * b.coeffs[0] % p],
            field: a.field.clone(),
        };
    }
    let mut prod = vec![0u64; 2 * spec.a - 1];
    for (i, &ai) in a.coeffs.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.coeffs.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    fp_poly::rem(&mut prod, &spec.modulus, p);
    prod.resize(spec.a, 0);
    FieldElement {
        coeffs: prod,
        field: a.field.clone(),
    }
}

impl_binop!(Add, add, add_impl);
impl_binop!(Sub, sub, sub_impl);
impl_binop!(Mul, mul, mul_impl);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p();
        FieldElement {
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
            field: self.field.clone(),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    /// Polynomial in the canonical generator g: "0", "2", "g", "2g+1",
    /// "g^2+g+2".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}g^{i}"),
            };
            terms.push(t);
        }
        write!(f, "{}", terms.join("+"))
    }
}

/// Parse an element literal: a decimal integer is taken as an element
/// index (base-p digits become coefficients; for prime fields this is the
/// usual residue), and "g^k" / "-g^k" denote generator powers.
pub fn parse_element(field: &Field, s: &str) -> Result<FieldElement, GfError> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let val = if body == "g" {
        field.generator()
    } else if let Some(exp) = body.strip_prefix("g^") {
        let e: u64 = exp
            .parse()
            .map_err(|_| GfError::BadLiteral(s.to_string()))?;
        field.generator().pow(e)
    } else {
        let idx: u64 = body
            .parse()
            .map_err(|_| GfError::BadLiteral(s.to_string()))?;
        if idx >= field.size() {
            return Err(GfError::BadLiteral(format!("{s}: index out of range")));
        }
        field.element_from_index(idx)
    };
    Ok(if neg { -&val } else { val })
}

/// Parse "p^a" or "p^a:c0,c1,...,ca" (explicit modulus, constant first).
pub fn parse_field(s: &str) -> Result<Field, GfError> {
    let (base, modulus) = match s.split_once(':') {
        Some((b, m)) => (b, Some(m)),
        None => (s, None),
    };
    let (p, a) = match base.split_once('^') {
        Some((p, a)) => (
            p.trim()
                .parse::<u64>()
                .map_err(|_| GfError::BadLiteral(s.into()))?,
            a.trim()
                .parse::<usize>()
                .map_err(|_| GfError::BadLiteral(s.into()))?,
        ),
        None => (
            base.trim()
                .parse::<u64>()
                .map_err(|_| GfError::BadLiteral(s.into()))?,
            1,
        ),
    };
    match modulus {
        None => Field::new(p, a),
        Some(m) => {
            let coeffs: Result<Vec<u64>, _> = m.split(',').map(|c| c.trim().parse()).collect();
            let coeffs = coeffs.map_err(|_| GfError::BadLiteral(s.into()))?;
            if coeffs.len() != a + 1 {
                return Err(GfError::BadLiteral(format!(
                    "{s}: modulus must have {} coefficients",
                    a + 1
                )));
            }
            Field::with_modulus(p, coeffs)
        }
    }
}

// ---------------------------------------------------------------------------
// quadratic extension + embedding

/// An F_p-algebra embedding of one field into an extension, determined by
/// the image of the canonical generator (the least root of the base
/// modulus in the extension).
pub struct Embedding {
    base: Field,
    ext: Field,
    /// beta^0..beta^(a-1) where beta is the chosen root of the base modulus
    gen_powers: Vec<FieldElement>,
}

impl Embedding {
    fn new(base: &Field, ext: &Field) -> Option<Embedding> {
        let poly: Vec<FieldElement> = base
            .modulus()
            .iter()
            .map(|&c| ext.from_int(c as i64))
            .collect();
        let beta = ext.roots_of(&poly).into_iter().next()?;
        let a = base.degree();
        let mut gen_powers = Vec::with_capacity(a);
        let mut acc = ext.one();
        for _ in 0..a {
            gen_powers.push(acc.clone());
            acc = &acc * &beta;
        }
        Some(Embedding {
            base: base.clone(),
            ext: ext.clone(),
            gen_powers,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }
    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        assert!(*x.field() == self.base, "embed: wrong base field");
        let mut acc = self.ext.zero();
        for (i, &c) in x.coeffs().iter().enumerate() {
            if c != 0 {
                let term = &self.gen_powers[i] * &self.ext.from_int(c as i64);
                acc = &acc + &term;
            }
        }
        acc
    }

    /// Preimage under the embedding, if the element lies in the image.
    pub fn retract(&self, y: &FieldElement) -> Option<FieldElement> {
        assert!(*y.field() == self.ext, "retract: wrong extension field");
        let p = self.ext.p();
        let b = self.ext.degree();
        let a = self.base.degree();
        // solve gen_powers * c = y over F_p
        let mut coeffs = vec![0u64; a];
        let mut mat: Vec<Vec<u64>> = (0..b)
            .map(|row| {
                let mut r: Vec<u64> =
                    (0..a).map(|col| self.gen_powers[col].coeffs()[row]).collect();
                r.push(y.coeffs()[row]);
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut used = vec![false; b];
        for col in 0..a {
            let piv = (0..b).find(|&r| !used[r] && mat[r][col] != 0)?;
            used[piv] = true;
            let inv = fp_poly::inv_mod_p(mat[piv][col], p);
            for x in mat[piv].iter_mut() {
                *x = *x * inv % p;
            }
            let pivot_row = mat[piv].clone();
            for (r, row) in mat.iter_mut().enumerate() {
                if r != piv && row[col] != 0 {
                    let f = row[col];
                    for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                        *x = (*x + (p - f) * pv) % p;
                    }
                }
            }
            pivots.push((piv, col));
        }
        // consistency: non-pivot rows must have zero rhs
        for (r, row) in mat.iter().enumerate() {
            if !used[r] && row[a] != 0 {
                return None;
            }
        }
        for &(piv, col) in &pivots {
            coeffs[col] = mat[piv][a];
        }
        Some(self.base.from_coeffs(&coeffs))
    }
}

fn embedding_registry() -> &'static Mutex<HashMap<(u64, usize, usize), Arc<Embedding>>> {
    static REG: OnceLock<Mutex<HashMap<(u64, usize, usize), Arc<Embedding>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The canonical degree-`factor` extension of `base` together with its
/// embedding, cached per (p, a, factor).
pub fn extension(base: &Field, factor: usize) -> Result<Arc<Embedding>, GfError> {
    let key = (base.p(), base.degree(), factor);
    if let Some(e) = embedding_registry().lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let ext = Field::new(base.p(), base.degree() * factor)?;
    let emb = Embedding::new(base, &ext).ok_or(GfError::NoPrimitivePolynomial)?;
    let emb = Arc::new(emb);
    embedding_registry().lock().unwrap().insert(key, emb.clone());
    Ok(emb)
}

/// The canonical quadratic extension GF(p^(2a)) with embedding.
pub fn quadratic_extension(base: &Field) -> Result<Arc<Embedding>, GfError> {
    extension(base, 2)
}

// ---------------------------------------------------------------------------
// FieldTable: dense arithmetic tables for the order engine and sweeps

/// Dense lookup tables over a field of size <= 256. Elements are u8
/// indices compatible with [`Field::element_from_index`].
pub struct FieldTable {
    pub field: Field,
    pub m: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FieldTable {
    pub fn new(field: &Field) -> Result<FieldTable, GfError> {
        let m = field.size();
        if m > 256 {
            return Err(GfError::FieldTooLarge(m));
        }
        let m = m as usize;
        let els: Vec<FieldElement> = field.elements().collect();
        let mut add = vec![0u8; m * m];
        let mut mul = vec![0u8; m * m];
        let mut neg = vec![0u8; m];
        let mut inv = vec![0u8; m];
        for i in 0..m {
            neg[i] = (-&els[i]).index() as u8;
            if i > 0 {
                inv[i] = els[i].inv().index() as u8;
            }
            for j in 0..m {
                add[i * m + j] = (&els[i] + &els[j]).index() as u8;
                mul[i * m + j] = (&els[i] * &els[j]).index() as u8;
            }
        }
        Ok(FieldTable {
            field: field.clone(),
            m,
            add,
            mul,
            neg,
            inv,
        })
    }

    #[inline(always)]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.m + b as usize]
    }
    #[inline(always)]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.m + b as usize]
    }
    #[inline(always)]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
    #[inline(always)]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
    #[inline(always)]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn to_index(&self, x: &FieldElement) -> u8 {
        x.index() as u8
    }
    pub fn to_element(&self, i: u8) -> FieldElement {
        self.field.element_from_index(i as u64)
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli_match_named_constants() {
        // GF(9): t^2 - t - 1, so xi^2 = xi + 1
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[2, 2, 1]);
        let xi = f9.generator();
        assert_eq!(&xi * &xi, &xi + &f9.one());
        // GF(25): alpha^2 - alpha + 2 = 0
        let f25 = Field::new(5, 2).unwrap();
        assert_eq!(f25.modulus(), &[2, 4, 1]);
        let al = f25.generator();
        assert_eq!(&al * &al, &al - &f25.from_int(2));
        // GF(16): alpha^4 + alpha + 1 = 0
        let f16 = Field::new(2, 4).unwrap();
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]);
        // GF(2): t - 1 convention
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[1, 1]);
        assert!(f2.generator().is_one());
    }

    #[test]
    fn arith_examples() {
        let f9 = Field::new(3, 2).unwrap();
        let xi = f9.generator();
        // xi * xi = xi + 1 (forced by the modulus)
        assert_eq!(
            arith(&xi, &xi, ArithOp::Mul).unwrap(),
            &xi + &f9.one()
        );
        // GF(7): 3 * 5 = 1
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(
            arith(&f7.from_int(3), &f7.from_int(5), ArithOp::Mul).unwrap(),
            f7.one()
        );
        // GF(9): xi^4 = -1 (xi has multiplicative order 8)
        assert_eq!(xi.pow(4), -&f9.one());
        assert_eq!(xi.multiplicative_order(), 8);
        // errors
        assert_eq!(
            arith(&f7.one(), &f7.zero(), ArithOp::Div),
            Err(GfError::DivisionByZero)
        );
        assert_eq!(
            arith(&f7.one(), &f9.one(), ArithOp::Add),
            Err(GfError::FieldMismatch)
        );
    }

    #[test]
    fn frobenius_examples() {
        let f9 = Field::new(3, 2).unwrap();
        let xi = f9.generator();
        assert_eq!(xi.frobenius(1), xi.pow(3));
        assert_eq!(xi.frobenius(0), xi);
        let f25 = Field::new(5, 2).unwrap();
        let al = f25.generator();
        assert_eq!(al.frobenius(2), al);
    }

    #[test]
    fn frobenius_is_automorphism() {
        let f = Field::new(3, 3).unwrap();
        for i in 0..f.size() {
            let x = f.element_from_index(i);
            let y = f.element_from_index((i * 7 + 3) % f.size());
            assert_eq!((&x * &y).frobenius(1), &x.frobenius(1) * &y.frobenius(1));
            assert_eq!((&x + &y).frobenius(1), &x.frobenius(1) + &y.frobenius(1));
        }
    }

    #[test]
    fn roots_of_unity() {
        // GF(7), k=3: canonical generator 3, eps = 3^2 = 2
        let f7 = Field::new(7, 1).unwrap();
        let eps = f7.root_of_unity(3).unwrap();
        assert_eq!(eps, f7.from_int(2));
        let s = &eps + &eps.inv();
        assert_eq!(s, -&f7.one());
        // k = p: eps = 1
        let f5 = Field::new(5, 1).unwrap();
        assert!(f5.root_of_unity(5).unwrap().is_one());
        // k = 2p: eps = -1
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.root_of_unity(6).unwrap(), -&f3.one());
        // unavailable
        assert!(f7.root_of_unity(5).is_err());
        // exact order when coprime to p
        let f9 = Field::new(3, 2).unwrap();
        for k in [4u64, 8] {
            assert_eq!(f9.root_of_unity(k).unwrap().multiplicative_order(), k);
        }
    }

    #[test]
    fn lagrange_all_small_fields() {
        for (p, a) in [(2, 1), (2, 4), (3, 2), (5, 2), (7, 1)] {
            let f = Field::new(p, a).unwrap();
            for i in 1..f.size() {
                assert!(f.element_from_index(i).pow(f.size() - 1).is_one());
            }
        }
    }

    #[test]
    fn generated_subfield_examples() {
        let f9 = Field::new(3, 2).unwrap();
        let xi = f9.generator();
        assert_eq!(f9.generated_subfield(&[xi.clone()]), 2);
        assert_eq!(f9.generated_subfield(&[-&f9.one()]), 1);
        let f25 = Field::new(5, 2).unwrap();
        let al2 = f25.generator().pow(2);
        assert_eq!(f25.generated_subfield(&[al2]), 2);
    }

    #[test]
    fn count_defective_examples() {
        // GF(4): only r = 1
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.count_defective(), 1);
        // GF(9): brute force, bound 2(p-1) = 4
        let f9 = Field::new(3, 2).unwrap();
        let n = f9.count_defective();
        assert!(n <= 4);
        // prime field: always 0
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.count_defective(), 0);
    }

    #[test]
    fn sqrt_examples() {
        let f7 = Field::new(7, 1).unwrap();
        let (r, in_base) = sqrt_in_closure(&f7.from_int(2)).unwrap();
        assert!(in_base);
        assert_eq!(&r * &r, f7.from_int(2));
        // -1 is a non-square mod 7
        let (r, in_base) = sqrt_in_closure(&(-&f7.one())).unwrap();
        assert!(!in_base);
        assert_eq!(&r * &r, -&r.field().one());
        // GF(9): -1 = xi^4 = (xi^2)^2, in base
        let f9 = Field::new(3, 2).unwrap();
        let (r, in_base) = sqrt_in_closure(&(-&f9.one())).unwrap();
        assert!(in_base);
        assert_eq!(&r * &r, -&f9.one());
        // char 2
        let f16 = Field::new(2, 4).unwrap();
        for i in 0..16 {
            let x = f16.element_from_index(i);
            let (r, in_base) = sqrt_in_closure(&x).unwrap();
            assert!(in_base);
            assert_eq!(&r * &r, x);
        }
    }

    #[test]
    fn sqrt_squares_back() {
        for (p, a) in [(3, 2), (5, 2), (7, 1), (11, 1), (3, 4)] {
            let f = Field::new(p, a).unwrap();
            for i in 0..f.size().min(200) {
                let x = f.element_from_index(i);
                let (r, _) = sqrt_in_closure(&x).unwrap();
                let x_lift = if *r.field() == f {
                    x.clone()
                } else {
                    quadratic_extension(&f).unwrap().embed(&x)
                };
                assert_eq!(&r * &r, x_lift);
            }
        }
    }

    #[test]
    fn embedding_roundtrip() {
        let f9 = Field::new(3, 2).unwrap();
        let emb = quadratic_extension(&f9).unwrap();
        for i in 0..9 {
            let x = f9.element_from_index(i);
            let up = emb.embed(&x);
            assert_eq!(emb.retract(&up), Some(x.clone()));
            // homomorphism
            let y = f9.element_from_index((i + 5) % 9);
            assert_eq!(emb.embed(&(&x * &y)), &emb.embed(&x) * &emb.embed(&y));
        }
        // something outside the image has no retract
        let ext = emb.ext().clone();
        let outside = ext.generator();
        assert_eq!(outside.minimal_degree(), 4);
        assert!(emb.retract(&outside).is_none());
    }

    #[test]
    fn field_parsing() {
        let f = parse_field("3^2").unwrap();
        assert_eq!(f.size(), 9);
        let f = parse_field("7").unwrap();
        assert_eq!(f.size(), 7);
        let f = parse_field("3^2:2,2,1").unwrap();
        assert_eq!(f.modulus(), &[2, 2, 1]);
        assert!(parse_field("3^2:1,0,1").is_err()); // t^2+1 not primitive
        assert!(parse_field("4^1").is_err());
        let f9 = parse_field("3^2").unwrap();
        assert_eq!(parse_element(&f9, "g^3").unwrap(), f9.generator().pow(3));
        assert_eq!(parse_element(&f9, "-1").unwrap(), -&f9.one());
        assert_eq!(parse_element(&f9, "4").unwrap(), f9.element_from_index(4));
    }

    #[test]
    fn table_matches_field() {
        let f = Field::new(5, 2).unwrap();
        let t = FieldTable::new(&f).unwrap();
        for i in 0..25u8 {
            for j in 0..25u8 {
                let x = f.element_from_index(i as u64);
                let y = f.element_from_index(j as u64);
                assert_eq!(t.add(i, j) as u64, (&x + &y).index());
                assert_eq!(t.mul(i, j) as u64, (&x * &y).index());
            }
        }
    }

    #[test]
    fn subfield_count_respects_lemma_bounds() {
        // checked in full in the acceptance suite; spot check here
        for (p, a) in [(2u64, 2usize), (3, 2), (5, 2), (3, 3)] {
            let f = Field::new(p, a).unwrap();
            let n = f.count_defective();
            let bound = if a == 2 {
                2 * (p - 1)
            } else {
                let g = if (p - 1) % 2 == 0 { 2 } else { 1 };
                g * p * (p.pow((a / 2) as u32) - 1) / (p - 1)
            };
            assert!(n <= bound, "GF({}^{}): {} > {}", p, a, n, bound);
        }
    }
}
