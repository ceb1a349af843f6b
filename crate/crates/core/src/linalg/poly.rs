//! Dense univariate polynomials over a [`Field`], constant term first.

use crate::gf::{Field, FieldElement};
use std::fmt;

/// Polynomial with coefficients in one field; no trailing zeros (the zero
/// polynomial has an empty coefficient vector).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, vec![])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::new(field, vec![field.one()])
    }

    pub fn constant(c: FieldElement) -> Poly {
        let f = c.field().clone();
        Poly::new(&f, vec![c])
    }

    /// The monomial t.
    pub fn t(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().map_or(false, |c| c.is_one())
    }

    pub fn make_monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let li = l.inv();
                Poly::new(
                    &self.field,
                    self.coeffs.iter().map(|c| c * &li).collect(),
                )
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &other.coeff(i));
        }
        Poly::new(&self.field, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) - &other.coeff(i));
        }
        Poly::new(&self.field, out)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Quotient and remainder; the divisor's leading coefficient must be
    /// invertible (any nonzero divisor over a field).
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dlead = divisor.lead().unwrap().inv();
        let dd = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &dlead;
            if !c.is_zero() {
                quot[k] = c.clone();
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    let idx = i + k;
                    rem[idx] = &rem[idx] - &(&c * d);
                }
            }
            rem.pop();
        }
        (Poly::new(&self.field, quot), Poly::new(&self.field, rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divmod(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divmod(self).1.is_zero()
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divmod(&b).1;
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Map coefficients into an extension field.
    pub fn lift(&self, emb: &crate::gf::Embedding) -> Poly {
        Poly::new(
            emb.ext(),
            self.coeffs.iter().map(|c| emb.embed(c)).collect(),
        )
    }

    /// Distinct-degree factor profile: degrees d (with multiplicity of the
    /// product split off) such that the squarefree part has a factor of
    /// degree d. Used to size the splitting field.
    pub fn irreducible_factor_degrees(&self) -> Vec<usize> {
        let f = self.make_monic();
        let n = match f.degree() {
            None | Some(0) => return vec![],
            Some(n) => n,
        };
        let q = self.field.size();
        let mut rest = f.clone();
        let mut degrees = Vec::new();
        // strip repeated factors crudely: gcd with derivative
        loop {
            let der = rest.derivative();
            if der.is_zero() {
                // perfect p-th power in char p: every root repeated; take p-th root
                // structure by recursing on exponents divisible by p
                let p = self.field.p() as usize;
                let mut shrunk = Vec::new();
                for (i, c) in rest.coeffs.iter().enumerate() {
                    if i % p == 0 {
                        // coefficient of t^(i/p) is the p^(a-1) power (inverse Frobenius)
                        let mut r = c.clone();
                        for _ in 0..self.field.degree().saturating_sub(1) {
                            r = r.pow(self.field.p());
                        }
                        shrunk.push(r);
                    } else if !c.is_zero() {
                        shrunk.clear();
                        break;
                    }
                }
                if shrunk.is_empty() {
                    break;
                }
                rest = Poly::new(&self.field, shrunk);
                continue;
            }
            let g = rest.gcd(&der);
            if g.degree() == Some(0) {
                break;
            }
            rest = rest.div_exact(&g);
        }
        // distinct-degree on the squarefree rest
        let mut sf = rest;
        let mut tq = Poly::t(&self.field); // t^(q^d) mod sf, built up
        for d in 1..=n {
            if sf.degree() == Some(0) {
                break;
            }
            tq = tq.pow_mod(q, &sf);
            let diff = tq.sub(&Poly::t(&self.field));
            let g = diff.gcd(&sf);
            if g.degree().unwrap_or(0) > 0 {
                degrees.push(d);
                sf = sf.div_exact(&g);
                tq = tq.divmod(&sf.make_monic_or_one()).1;
            }
        }
        if sf.degree().unwrap_or(0) > 0 {
            degrees.push(sf.degree().unwrap());
        }
        degrees
    }

    fn make_monic_or_one(&self) -> Poly {
        if self.is_zero() {
            Poly::one(&self.field)
        } else {
            self.make_monic()
        }
    }

    fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let m = m.make_monic();
        let mut acc = Poly::one(&self.field).divmod(&m).1;
        let mut b = self.divmod(&m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).divmod(&m).1;
            }
            b = b.mul(&b).divmod(&m).1;
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_int(i as i64))
            .collect();
        Poly::new(&self.field, out)
    }

    /// Roots in the coefficient field, by enumeration.
    pub fn roots(&self) -> Vec<FieldElement> {
        self.field.roots_of(&self.coeffs)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{c}");
            let needs_parens = cs.contains('+') || cs.contains('g');
            let coeff_str = if needs_parens {
                format!("({cs})")
            } else {
                cs.clone()
            };
            let t = match i {
                0 => coeff_str,
                1 if c.is_one() => "t".into(),
                1 => format!("{coeff_str}*t"),
                _ if c.is_one() => format!("t^{i}"),
                _ => format!("{coeff_str}*t^{i}"),
            };
            terms.push(t);
        }
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    #[test]
    fn divmod_roundtrip() {
        let f = Field::new(7, 1).unwrap();
        let a = Poly::from_ints(&f, &[1, 2, 3, 4, 5]);
        let b = Poly::from_ints(&f, &[2, 0, 1]);
        let (q, r) = a.divmod(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_products() {
        let f = Field::new(5, 1).unwrap();
        let a = Poly::from_ints(&f, &[1, 1]); // t+1
        let b = Poly::from_ints(&f, &[2, 1]); // t+2
        let c = Poly::from_ints(&f, &[3, 1]); // t+3
        let g = a.mul(&b).gcd(&a.mul(&c));
        assert_eq!(g, a.make_monic());
    }

    #[test]
    fn factor_degrees() {
        let f = Field::new(3, 1).unwrap();
        // (t^2+1)(t+1): degrees {1, 2}
        let p = Poly::from_ints(&f, &[1, 0, 1]).mul(&Poly::from_ints(&f, &[1, 1]));
        let mut d = p.irreducible_factor_degrees();
        d.sort();
        assert_eq!(d, vec![1, 2]);
        // (t-1)^4: squarefree part is t-1
        let p = Poly::from_ints(&f, &[-1, 1]).pow(4);
        assert_eq!(p.irreducible_factor_degrees(), vec![1]);
    }
}
