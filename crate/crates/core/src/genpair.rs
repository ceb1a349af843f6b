//! The uniform generator pairs: an involution-like x with x^2 = dI and an
//! order-k element y depending on s = eps + eps^-1 and four parameters
//! r1..r4, together with every closed-form condition attached to them
//! (reducibility, scalar powers, the exceptional-parameter ledger).

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{quadratic_extension, sqrt_in_closure, Embedding, Field, FieldElement, GfError};
use crate::linalg::{char_poly, MatrixN, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenPairError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("k = {0} is not realizable over GF({1}) with s in the base field")]
    OrderUnavailable(u64, u64),
    #[error("k must be at least 3, got {0}")]
    BadOrder(u64),
    #[error("degenerate y: s = 2 and (r1, r3) = (r2, r4)")]
    DegenerateY,
    #[error("d must be 1 or -1")]
    BadD,
    #[error("operation requires the specialization r1 = r3 = 0")]
    RequiresSpecialization,
    #[error("epsilon = 1 (k = p), so y has no eigenvalue distinct from 1")]
    EpsilonIsOne,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Where the k-th root of unity lives: the pair's field or its quadratic
/// extension (the case k | q+1).
#[derive(Clone)]
pub struct EpsilonData {
    pub value: FieldElement,
    pub field: Field,
    pub embedding: Option<Arc<Embedding>>,
}

impl EpsilonData {
    /// Lift a base-field element into the field containing epsilon.
    pub fn lift(&self, x: &FieldElement) -> FieldElement {
        match &self.embedding {
            None => x.clone(),
            Some(e) => e.embed(x),
        }
    }
}

/// A realized generator pair over F_q (or F_{q^2} in the unitary regime).
#[derive(Clone)]
pub struct GeneratorPair {
    pub field: Field,
    pub k: u64,
    pub d_sign: i8,
    pub d: FieldElement,
    pub eps: EpsilonData,
    pub s: FieldElement,
    pub r: [FieldElement; 4],
    pub x: MatrixN,
    pub y: MatrixN,
}

impl std::fmt::Debug for GeneratorPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pair(q={}, k={}, d={}, r=[{},{},{},{}])",
            self.field, self.k, self.d_sign, self.r[0], self.r[1], self.r[2], self.r[3]
        )
    }
}

fn resolve_epsilon(field: &Field, k: u64) -> Result<(EpsilonData, FieldElement), GenPairError> {
    let p = field.p();
    if k < 3 {
        return Err(GenPairError::BadOrder(k));
    }
    if k % p == 0 {
        let eps = if k == p {
            field.one()
        } else if k == 2 * p {
            -&field.one()
        } else {
            return Err(GenPairError::OrderUnavailable(k, field.size()));
        };
        let s = &eps + &eps.inv();
        return Ok((
            EpsilonData {
                value: eps,
                field: field.clone(),
                embedding: None,
            },
            s,
        ));
    }
    if (field.size() - 1) % k == 0 {
        let eps = field.root_of_unity(k)?;
        let s = &eps + &eps.inv();
        return Ok((
            EpsilonData {
                value: eps,
                field: field.clone(),
                embedding: None,
            },
            s,
        ));
    }
    let emb = quadratic_extension(field)?;
    let ext = emb.ext().clone();
    if (ext.size() - 1) % k != 0 {
        return Err(GenPairError::OrderUnavailable(k, field.size()));
    }
    let eps = ext.root_of_unity(k)?;
    let s_ext = &eps + &eps.inv();
    let s = emb
        .retract(&s_ext)
        .ok_or(GenPairError::OrderUnavailable(k, field.size()))?;
    Ok((
        EpsilonData {
            value: eps,
            field: ext,
            embedding: Some(emb),
        },
        s,
    ))
}

/// Build the pair with the canonical epsilon for (field, k).
pub fn make_pair(
    field: &Field,
    k: u64,
    d: i8,
    r: [FieldElement; 4],
) -> Result<GeneratorPair, GenPairError> {
    let (eps, s) = resolve_epsilon(field, k)?;
    assemble(field, k, d, eps, s, r)
}

/// Build the pair with an explicit primitive k-th root of unity (used when
/// a table row pins a specific s among several of the same order).
pub fn make_pair_with_eps(
    field: &Field,
    k: u64,
    eps: FieldElement,
    d: i8,
    r: [FieldElement; 4],
) -> Result<GeneratorPair, GenPairError> {
    let (eps_data, s) = if *eps.field() == *field {
        let s = &eps + &eps.inv();
        (
            EpsilonData {
                value: eps,
                field: field.clone(),
                embedding: None,
            },
            s,
        )
    } else {
        let emb = quadratic_extension(field)?;
        assert!(*eps.field() == *emb.ext(), "epsilon in unexpected field");
        let s_ext = &eps + &eps.inv();
        let s = emb
            .retract(&s_ext)
            .ok_or(GenPairError::OrderUnavailable(k, field.size()))?;
        (
            EpsilonData {
                value: eps,
                field: emb.ext().clone(),
                embedding: Some(emb),
            },
            s,
        )
    };
    assemble(field, k, d, eps_data, s, r)
}

fn assemble(
    field: &Field,
    k: u64,
    d: i8,
    eps: EpsilonData,
    s: FieldElement,
    r: [FieldElement; 4],
) -> Result<GeneratorPair, GenPairError> {
    if d != 1 && d != -1 {
        return Err(GenPairError::BadD);
    }
    let d_elem = field.from_int(d as i64);
    if s == field.from_int(2) && r[0] == r[1] && r[2] == r[3] {
        return Err(GenPairError::DegenerateY);
    }
    let zero = field.zero();
    let one = field.one();
    let x = MatrixN::from_rows(
        field,
        vec![
            vec![zero.clone(), zero.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), zero.clone(), one.clone()],
            vec![d_elem.clone(), zero.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), d_elem.clone(), zero.clone(), zero.clone()],
        ],
    );
    let y = MatrixN::from_rows(
        field,
        vec![
            vec![one.clone(), zero.clone(), r[0].clone(), r[1].clone()],
            vec![zero.clone(), one.clone(), r[2].clone(), r[3].clone()],
            vec![zero.clone(), zero.clone(), zero.clone(), -&one],
            vec![zero.clone(), zero.clone(), one.clone(), s.clone()],
        ],
    );
    // y and its projective image must have order exactly k
    let mut pw = MatrixN::identity(field, 4);
    for m in 1..=k {
        pw = pw.mul(&y);
        if m < k && pw.is_scalar() {
            return Err(GenPairError::Internal(format!(
                "y^{m} is scalar but k = {k}"
            )));
        }
    }
    if !pw.is_identity() {
        return Err(GenPairError::Internal(format!("y^{k} != I")));
    }
    Ok(GeneratorPair {
        field: field.clone(),
        k,
        d_sign: d,
        d: d_elem,
        eps,
        s,
        r,
        x,
        y,
    })
}

impl GeneratorPair {
    pub fn xy(&self) -> MatrixN {
        self.x.mul(&self.y)
    }

    pub fn gens(&self) -> [MatrixN; 2] {
        [self.x.clone(), self.y.clone()]
    }

    pub fn is_specialized(&self) -> bool {
        self.r[0].is_zero() && self.r[2].is_zero()
    }

    /// chi_xy(t) = t^4 - d(r1+r4) t^3 + (r1 r4 - r2 r3 - ds) t^2
    ///           + (r1 s - r2 + r3) t + 1, never computed from the matrix.
    pub fn xy_char_poly_closed(&self) -> Poly {
        let f = &self.field;
        let [r1, r2, r3, r4] = &self.r;
        let c3 = -&(&self.d * &(r1 + r4));
        let c2 = &(&(r1 * r4) - &(r2 * r3)) - &(&self.d * &self.s);
        let c1 = &(&(r1 * &self.s) - r2) + r3;
        Poly::new(f, vec![f.one(), c1, c2, c3, f.one()])
    }

    /// chi_{(xy)^-1}(t) = t^4 + (r1 s - r2 + r3) t^3 + (r1 r4 - r2 r3 - ds) t^2
    ///                  - d(r1+r4) t + 1.
    pub fn xy_inv_char_poly_closed(&self) -> Poly {
        let f = &self.field;
        let [r1, r2, r3, r4] = &self.r;
        let c1 = -&(&self.d * &(r1 + r4));
        let c2 = &(&(r1 * r4) - &(r2 * r3)) - &(&self.d * &self.s);
        let c3 = &(&(r1 * &self.s) - r2) + r3;
        Poly::new(f, vec![f.one(), c1, c2, c3, f.one()])
    }

    /// Both reducibility conditions, evaluated exactly (in the quadratic
    /// extension where epsilon or sqrt(d) require it).
    pub fn reducibility(&self) -> ReducibilityReport {
        let [r1, r2, r3, r4] = &self.r;
        // condition (i): r4 = r1 - eps^j r2 + eps^-j r3 for some j = ±1
        let e = &self.eps;
        let (l1, l2, l3, l4) = (e.lift(r1), e.lift(r2), e.lift(r3), e.lift(r4));
        let mut cond_i_hits = Vec::new();
        for j in [1i8, -1] {
            let ej = e.value.pow_i(j as i64);
            let eji = e.value.pow_i(-(j as i64));
            let rhs = &(&l1 - &(&ej * &l2)) + &(&eji * &l3);
            if l4 == rhs {
                cond_i_hits.push(j);
            }
        }
        // condition (ii): Delta(delta) = 0 for some delta = ±sqrt(d)
        let (delta0, in_base) = sqrt_in_closure(&self.d).expect("sqrt of ±1");
        let (s, d, m1, m2, m3, m4) = if in_base {
            (
                self.s.clone(),
                self.d.clone(),
                r1.clone(),
                r2.clone(),
                r3.clone(),
                r4.clone(),
            )
        } else {
            let emb = quadratic_extension(&self.field).expect("quadratic extension");
            (
                emb.embed(&self.s),
                emb.embed(&self.d),
                emb.embed(r1),
                emb.embed(r2),
                emb.embed(r3),
                emb.embed(r4),
            )
        };
        let df = delta0.field().clone();
        let two_minus_s = &df.from_int(2) - &s;
        let s_minus_one = &s - &df.one();
        let delta_at = |delta: &FieldElement| -> FieldElement {
            let lin = &(&(&(&s_minus_one * &m1) - &m2) + &m3) - &m4;
            let mut acc = &(&m1 * &m4) - &(&m2 * &m3);
            acc = &acc + &(&delta.inv() * &lin);
            &acc + &(&two_minus_s * &d)
        };
        let dv0 = delta_at(&delta0);
        let dv1 = delta_at(&(-&delta0));
        let mut cond_ii_hits = Vec::new();
        if dv0.is_zero() {
            cond_ii_hits.push(1i8);
        }
        if dv1.is_zero() {
            cond_ii_hits.push(-1i8);
        }
        let reducible = !cond_i_hits.is_empty() || !cond_ii_hits.is_empty();
        ReducibilityReport {
            cond_i_hits,
            cond_ii_hits,
            delta_values: [dv0, dv1],
            reducible,
        }
    }

    /// The eigenvector u of y for eigenvalue eps^j, in the field of eps.
    pub fn y_eigenvector(&self, j: i8) -> Result<Vec<FieldElement>, GenPairError> {
        let e = &self.eps;
        if e.value.is_one() {
            return Err(GenPairError::EpsilonIsOne);
        }
        let [r1, r2, r3, r4] = &self.r;
        let ej = e.value.pow_i(j as i64);
        let e2j = &ej * &ej;
        let one = e.field.one();
        let u = vec![
            &e.lift(r1) - &(&ej * &e.lift(r2)),
            &e.lift(r3) - &(&ej * &e.lift(r4)),
            &ej - &one,
            &ej - &e2j,
        ];
        // defining property, checked by multiplication
        let y_l = match &e.embedding {
            None => self.y.clone(),
            Some(emb) => self.y.lift(emb),
        };
        let yu = y_l.mul_vec(&u);
        let want: Vec<FieldElement> = u.iter().map(|c| c * &ej).collect();
        if yu != want {
            return Err(GenPairError::Internal("y u != eps^j u".into()));
        }
        Ok(u)
    }

    /// Degree over F_p of F_p[s, (r1+r4)^2]: any field the pair can be
    /// conjugated into (mod scalars) contains this subfield.
    pub fn field_lower_bound(&self) -> usize {
        let sum = &self.r[0] + &self.r[3];
        self.field
            .generated_subfield(&[self.s.clone(), &sum * &sum])
    }

    /// rho if (xy)^h = rho I, else None.
    pub fn scalar_power(&self, h: u64) -> Option<FieldElement> {
        self.xy().pow(h).scalar_value()
    }

    /// The three h = 8 relations (with scalar rho): all must hold for
    /// (xy)^8 = rho I under the r1 = r3 = 0 specialization.
    pub fn powers_h8_relations(&self, rho: &FieldElement) -> bool {
        let f = &self.field;
        let r2 = &self.r[1];
        let r4 = &self.r[3];
        let (d, s) = (&self.d, &self.s);
        let r2sq = r2 * r2;
        let r4sq = r4 * r4;
        let one = f.one();
        // r4^2 + rho r2^2 = -ds(1 + rho)
        let lhs1 = &r4sq + &(rho * &r2sq);
        let rhs1 = -&(&(d * s) * &(&one + rho));
        // s d r4^2 + d(1 - rho) r2 r4 = -s^2 - rho + 1
        let lhs2 = &(&(s * d) * &r4sq) + &(&(d * &(&one - rho)) * &(r2 * r4));
        let rhs2 = &(&(-&(s * s)) - rho) + &one;
        // -rho r2^4 - 3 d s rho r2^2 - 2 d rho r2 r4 = rho s^2 - rho + 1
        let lhs3 = &(&(-&(rho * &(&r2sq * &r2sq)))
            - &(&(&f.from_int(3) * &(&(d * s) * rho)) * &r2sq))
            - &(&(&f.from_int(2) * &(d * rho)) * &(r2 * r4));
        let rhs3 = &(&(rho * &(s * s)) - rho) + &one;
        lhs1 == rhs1 && lhs2 == rhs2 && lhs3 == rhs3
    }

    /// Every exceptional-parameter row the pair satisfies (requires the
    /// r1 = r3 = 0 specialization).
    pub fn exceptional_match(&self) -> Result<Vec<Table4Match>, GenPairError> {
        if !self.is_specialized() {
            return Err(GenPairError::RequiresSpecialization);
        }
        let mut hits = Vec::new();
        for row in table4_rows() {
            if let Some(detail) = row.matches(self) {
                hits.push(Table4Match {
                    id: row.id,
                    quotient: row.quotient,
                    detail,
                });
            }
        }
        Ok(hits)
    }
}

/// The reducibility verdict of a pair; reducible iff some hit list is
/// nonempty.
#[derive(Debug, Clone)]
pub struct ReducibilityReport {
    pub cond_i_hits: Vec<i8>,
    pub cond_ii_hits: Vec<i8>,
    pub delta_values: [FieldElement; 2],
    pub reducible: bool,
}

// ---------------------------------------------------------------------------
// Exceptional-parameter ledger (one row per table line, conditions as data)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Table4RowId {
    ReducibleEps,
    ReducibleSqrt,
    Alt5Power,
    CspPower,
    C6Alt5,
    C6Order576,
    A7,
    PSp43,
    Psl2Cubic,
}

#[derive(Debug, Clone)]
pub struct Table4Match {
    pub id: Table4RowId,
    pub quotient: &'static str,
    pub detail: String,
}

/// Algebraic condition of one ledger row.
pub enum RowCond {
    /// r2 = -eps^{±1} r4
    EpsMultiple,
    /// r2 + r4 = ±(2 - s) sqrt(d)
    SqrtSum,
    /// r2 = c2 * r4 and r4^2 = c4 * d, at a pinned s
    SquareDiag { r2_vs_r4: i64, r4sq_vs_d: i64 },
    /// r4 = d i^h (±sqrt(-7)+1)/2, r2 = -i^{3h} (±sqrt(-7)-1)/2, ds = i^{2h}
    SeventhRoots,
    /// r2 = i^{-h} w, r4 = d i^h w^2 for a primitive cube root w
    CubeRoots,
    /// r2 = -r4 and r4^4 = -3 (with d = -1)
    CubicImage,
}

pub struct Table4Row {
    pub id: Table4RowId,
    pub source: &'static str,
    pub quotient: &'static str,
    /// characteristics where the row does not apply
    pub excluded_p: &'static [u64],
    /// pinned value of s (as an integer), when the row fixes it
    pub s_value: Option<i64>,
    /// pinned value of d, when the row fixes it
    pub d_value: Option<i8>,
    pub cond: RowCond,
}

pub fn table4_rows() -> &'static [Table4Row] {
    static ROWS: &[Table4Row] = &[
        Table4Row {
            id: Table4RowId::ReducibleEps,
            source: "reducibility (i)",
            quotient: "reducible",
            excluded_p: &[],
            s_value: None,
            d_value: None,
            cond: RowCond::EpsMultiple,
        },
        Table4Row {
            id: Table4RowId::ReducibleSqrt,
            source: "reducibility (ii)",
            quotient: "reducible",
            excluded_p: &[],
            s_value: None,
            d_value: None,
            cond: RowCond::SqrtSum,
        },
        Table4Row {
            id: Table4RowId::Alt5Power,
            source: "(xy)^5 scalar",
            quotient: "Alt(5)",
            excluded_p: &[],
            s_value: Some(-1),
            d_value: None,
            cond: RowCond::SquareDiag {
                r2_vs_r4: 1,
                r4sq_vs_d: 1,
            },
        },
        Table4Row {
            id: Table4RowId::CspPower,
            source: "(xy)^5 scalar, s = 1",
            quotient: "<= CSp4",
            excluded_p: &[],
            s_value: Some(1),
            d_value: None,
            cond: RowCond::SquareDiag {
                r2_vs_r4: -1,
                r4sq_vs_d: -1,
            },
        },
        Table4Row {
            id: Table4RowId::C6Alt5,
            source: "symplectic-type normalizer, order-5 image",
            quotient: "Alt(5)",
            excluded_p: &[2],
            s_value: Some(-1),
            d_value: None,
            cond: RowCond::SquareDiag {
                r2_vs_r4: 1,
                r4sq_vs_d: 1,
            },
        },
        Table4Row {
            id: Table4RowId::C6Order576,
            source: "symplectic-type normalizer, order-6 image",
            quotient: "group of order 2^6 3^2",
            excluded_p: &[2],
            s_value: Some(-1),
            d_value: None,
            cond: RowCond::SquareDiag {
                r2_vs_r4: 1,
                r4sq_vs_d: 2,
            },
        },
        Table4Row {
            id: Table4RowId::A7,
            source: "Alt(7)-type maximal",
            quotient: "PSL(2,7)",
            excluded_p: &[2],
            s_value: Some(-1),
            d_value: None,
            cond: RowCond::SeventhRoots,
        },
        Table4Row {
            id: Table4RowId::PSp43,
            source: "PSp(4,3)-type maximal",
            quotient: "<= PSp(4,3)-normalizer",
            excluded_p: &[2, 3],
            s_value: Some(0),
            d_value: None,
            cond: RowCond::CubeRoots,
        },
        Table4Row {
            id: Table4RowId::Psl2Cubic,
            source: "cubic representation of SL2",
            quotient: "PSL(2,q)",
            excluded_p: &[2, 3],
            s_value: Some(-1),
            d_value: Some(-1),
            cond: RowCond::CubicImage,
        },
    ];
    ROWS
}

impl Table4Row {
    /// Some(detail) when the pair satisfies this row's condition.
    pub fn matches(&self, pair: &GeneratorPair) -> Option<String> {
        let f = &pair.field;
        if self.excluded_p.contains(&f.p()) {
            return None;
        }
        if let Some(sv) = self.s_value {
            if pair.s != f.from_int(sv) {
                return None;
            }
        }
        if let Some(dv) = self.d_value {
            if pair.d_sign != dv {
                return None;
            }
        }
        let r2 = &pair.r[1];
        let r4 = &pair.r[3];
        let d = &pair.d;
        match &self.cond {
            RowCond::EpsMultiple => {
                let e = &pair.eps;
                for j in [1i64, -1] {
                    let rhs = -&(&e.value.pow_i(j) * &e.lift(r4));
                    if e.lift(r2) == rhs {
                        return Some(format!("r2 = -eps^{j} r4"));
                    }
                }
                None
            }
            RowCond::SqrtSum => {
                let (delta, in_base) = sqrt_in_closure(d).expect("sqrt of ±1");
                let (sum, coeff) = if in_base {
                    (r2 + r4, &f.from_int(2) - &pair.s)
                } else {
                    let emb = quadratic_extension(f).expect("quadratic extension");
                    (
                        &emb.embed(r2) + &emb.embed(r4),
                        &delta.field().from_int(2) - &emb.embed(&pair.s),
                    )
                };
                for sign in [1i64, -1] {
                    let rhs = &(&coeff * &delta) * &delta.field().from_int(sign);
                    if sum == rhs {
                        return Some(format!("r2 + r4 = {sign}(2-s) sqrt(d)"));
                    }
                }
                None
            }
            RowCond::SquareDiag { r2_vs_r4, r4sq_vs_d } => {
                let ok = *r2 == r4.clone().scale_int(f, *r2_vs_r4)
                    && (r4 * r4) == d.clone().scale_int(f, *r4sq_vs_d);
                ok.then(|| {
                    format!(
                        "r2 = {} r4, r4^2 = {} d",
                        r2_vs_r4, r4sq_vs_d
                    )
                })
            }
            RowCond::SeventhRoots => {
                let emb = quadratic_extension(f).expect("quadratic extension");
                let ext = emb.ext().clone();
                let i = (-&ext.one()).sqrt().expect("i in quadratic extension");
                let s7 = ext.from_int(-7).sqrt().expect("sqrt(-7) in quadratic extension");
                let half = ext.from_int(2).inv();
                let one = ext.one();
                let (l2, l4, ld, ls) = (
                    emb.embed(r2),
                    emb.embed(r4),
                    emb.embed(d),
                    emb.embed(&pair.s),
                );
                for h in 0..4i64 {
                    let ih = i.pow_i(h);
                    if &ld * &ls != &ih * &ih {
                        continue;
                    }
                    let i3h = i.pow_i(3 * h);
                    for sign in [1i64, -1] {
                        let sq = &s7 * &ext.from_int(sign);
                        let want4 = &(&ld * &ih) * &(&(&sq + &one) * &half);
                        let want2 = -&(&i3h * &(&(&sq - &one) * &half));
                        if l4 == want4 && l2 == want2 {
                            return Some(format!("h = {h}, sign = {sign}"));
                        }
                    }
                }
                None
            }
            RowCond::CubeRoots => {
                let emb = quadratic_extension(f).expect("quadratic extension");
                let ext = emb.ext().clone();
                let i = (-&ext.one()).sqrt().expect("i in quadratic extension");
                let w0 = ext.root_of_unity(3).expect("cube root in quadratic extension");
                let (l2, l4, ld) = (emb.embed(r2), emb.embed(r4), emb.embed(d));
                for h in 0..4i64 {
                    for w in [w0.clone(), &w0 * &w0] {
                        let want2 = &i.pow_i(-h) * &w;
                        let want4 = &(&ld * &i.pow_i(h)) * &(&w * &w);
                        if l2 == want2 && l4 == want4 {
                            return Some(format!("h = {h}"));
                        }
                    }
                }
                None
            }
            RowCond::CubicImage => {
                let ok = *r2 == -r4 && r4.pow(4) == f.from_int(-3);
                ok.then(|| "r2 = -r4, r4^4 = -3".to_string())
            }
        }
    }
}

trait ScaleInt {
    fn scale_int(self, f: &Field, c: i64) -> FieldElement;
}
impl ScaleInt for FieldElement {
    fn scale_int(self, f: &Field, c: i64) -> FieldElement {
        &self * &f.from_int(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::linalg::enveloping_dim;

    fn pair_ints(
        field: &Field,
        k: u64,
        d: i8,
        r: [i64; 4],
    ) -> Result<GeneratorPair, GenPairError> {
        make_pair(field, k, d, r.map(|c| field.from_int(c)))
    }

    #[test]
    fn make_pair_basic_shapes() {
        let f7 = Field::new(7, 1).unwrap();
        let p = pair_ints(&f7, 3, 1, [0, 0, 0, 1]).unwrap();
        assert_eq!(p.s, -&f7.one());
        assert!(p.x.pow(2).is_identity());
        assert!(p.x.det().is_one());
        assert!(p.y.det().is_one());
        // x, y shapes as printed
        assert_eq!(*p.x.at(2, 0), f7.one());
        assert_eq!(*p.y.at(3, 3), p.s);
        assert_eq!(*p.y.at(2, 3), -&f7.one());

        // k = p case: s = 2, eps = 1; (1,0) != (0,0) so valid
        let f5 = Field::new(5, 1).unwrap();
        let p = pair_ints(&f5, 5, 1, [1, 0, 0, 0]).unwrap();
        assert_eq!(p.s, f5.from_int(2));
        assert!(p.eps.value.is_one());

        // degenerate rejected
        assert_eq!(
            pair_ints(&f5, 5, 1, [0, 0, 0, 0]).unwrap_err(),
            GenPairError::DegenerateY
        );

        // GF(9), k = 4: eps of order 4, s = 0
        let f9 = Field::new(3, 2).unwrap();
        let xi = f9.generator();
        let p = make_pair(&f9, 4, 1, [xi.clone(), xi.clone(), xi.pow(7), f9.zero()]).unwrap();
        assert!(p.s.is_zero());
        assert_eq!(p.eps.value.multiplicative_order(), 4);
    }

    #[test]
    fn epsilon_in_quadratic_extension() {
        // k = 3 over GF(2): eps lives in GF(4), s = 1
        let f2 = Field::new(2, 1).unwrap();
        let p = pair_ints(&f2, 3, 1, [0, 1, 0, 1]).unwrap();
        assert!(p.eps.embedding.is_some());
        assert_eq!(p.s, f2.one());
        // k = 3 over GF(8): eps in GF(64), s = 1
        let f8 = Field::new(2, 3).unwrap();
        let p = pair_ints(&f8, 3, 1, [0, 0, 0, 1]).unwrap();
        assert_eq!(p.s, f8.one());
        // k = 5 over GF(7): 5 divides neither 6 nor 8
        assert!(matches!(
            pair_ints(&Field::new(7, 1).unwrap(), 5, 1, [0, 0, 0, 1]),
            Err(GenPairError::OrderUnavailable(5, 7))
        ));
    }

    #[test]
    fn closed_char_poly_matches_matrix() {
        for (p, a) in [(2u64, 1usize), (3, 1), (2, 2), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let f = Field::new(p, a).unwrap();
            let ks: Vec<u64> = [3u64, 4, 5, 6, 7, 8, 10, 14]
                .into_iter()
                .filter(|&k| resolve_epsilon(&f, k).is_ok())
                .collect();
            let mut seed = 12345u64;
            for k in ks {
                for d in [1i8, -1] {
                    for _ in 0..8 {
                        let mut r = [0i64; 4];
                        for x in r.iter_mut() {
                            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(97);
                            *x = (seed % f.size()) as i64;
                        }
                        let r = r.map(|c| f.element_from_index(c as u64));
                        let pair = match make_pair(&f, k, d, r) {
                            Ok(p) => p,
                            Err(GenPairError::DegenerateY) => continue,
                            Err(e) => panic!("{e}"),
                        };
                        assert_eq!(pair.xy_char_poly_closed(), char_poly(&pair.xy()));
                        assert_eq!(
                            pair.xy_inv_char_poly_closed(),
                            char_poly(&pair.xy().inverse().unwrap())
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn specialized_char_poly_shape() {
        // r1 = r3 = 0: t^4 - d r4 t^3 - d s t^2 - r2 t + 1
        let f7 = Field::new(7, 1).unwrap();
        let pair = pair_ints(&f7, 3, 1, [0, 2, 0, 3]).unwrap();
        let cp = pair.xy_char_poly_closed();
        assert_eq!(cp.coeff(3), -&(&pair.d * &pair.r[3]));
        assert_eq!(cp.coeff(2), -&(&pair.d * &pair.s));
        assert_eq!(cp.coeff(1), -&pair.r[1]);
        // all r = 0, s = -1, d = 1: t^4 + t^2 + 1
        let pair = pair_ints(&f7, 3, 1, [0, 0, 0, 0]).unwrap();
        assert_eq!(
            pair.xy_char_poly_closed(),
            Poly::from_ints(&f7, &[1, 0, 1, 0, 1])
        );
    }

    #[test]
    fn reducibility_examples() {
        // q = 9, k = 3 (= p, eps = 1), r2 = -r4: condition (i)
        let f9 = Field::new(3, 2).unwrap();
        let xi = f9.generator();
        let pair = make_pair(&f9, 3, 1, [f9.zero(), -&xi, f9.zero(), xi.clone()]).unwrap();
        let rep = pair.reducibility();
        assert!(rep.reducible && !rep.cond_i_hits.is_empty());

        // q = 7, k = 3, d = 1: r2 + r4 = 3 = (2 - s) sqrt(d): condition (ii)
        let f7 = Field::new(7, 1).unwrap();
        let pair = pair_ints(&f7, 3, 1, [0, 1, 0, 2]).unwrap();
        let rep = pair.reducibility();
        assert!(rep.reducible && !rep.cond_ii_hits.is_empty());

        // q = 7, k = 3, d = 1, (0,0,0,1): irreducible, enveloping dim 16
        let pair = pair_ints(&f7, 3, 1, [0, 0, 0, 1]).unwrap();
        assert!(!pair.reducibility().reducible);
        assert_eq!(enveloping_dim(&pair.gens()), 16);
    }

    #[test]
    fn eigenvector_of_y() {
        let f7 = Field::new(7, 1).unwrap();
        let pair = pair_ints(&f7, 3, 1, [0, 0, 0, 1]).unwrap();
        for j in [1i8, -1] {
            pair.y_eigenvector(j).unwrap();
        }
        // k = 2p: eps = -1, the two eigenvectors coincide
        let f5 = Field::new(5, 1).unwrap();
        let pair = pair_ints(&f5, 10, 1, [0, 0, 0, 1]).unwrap();
        let u1 = pair.y_eigenvector(1).unwrap();
        let u2 = pair.y_eigenvector(-1).unwrap();
        assert_eq!(u1, u2);
        // eps = 1 errors
        let pair = pair_ints(&f5, 5, 1, [1, 0, 0, 0]).unwrap();
        assert_eq!(pair.y_eigenvector(1).unwrap_err(), GenPairError::EpsilonIsOne);
    }

    #[test]
    fn field_lower_bound_examples() {
        let f9 = Field::new(3, 2).unwrap();
        let xi = f9.generator();
        // s = -1 (k = 3 = p), r1 = 0, r4 = xi: F_3[xi^2] = GF(9)
        let pair = make_pair(&f9, 3, 1, [f9.zero(), f9.zero(), f9.zero(), xi]).unwrap();
        assert_eq!(pair.field_lower_bound(), 2);
        // r1 + r4 = 0: degree of F_p[s]
        let pair = pair_ints(&f9, 3, 1, [0, 1, 0, 0]);
        assert_eq!(pair.unwrap().field_lower_bound(), 1);
    }

    #[test]
    fn scalar_powers() {
        // s = -1, r4^2 = d, r2 = r4: (xy)^5 = -d r4 I
        let f7 = Field::new(7, 1).unwrap();
        let pair = pair_ints(&f7, 3, 1, [0, 1, 0, 1]).unwrap();
        for h in 1..=4 {
            assert!(pair.scalar_power(h).is_none(), "h = {h}");
        }
        assert_eq!(pair.scalar_power(5), Some(-&f7.one()));

        // s = 0, r2 = -d r4^3, r4^4 = -1: h = 6 scalar but pair reducible
        let f9 = Field::new(3, 2).unwrap();
        let xi = f9.generator();
        let pair = make_pair(&f9, 4, 1, [f9.zero(), -&xi.pow(3), f9.zero(), xi.clone()]).unwrap();
        assert_eq!(xi.pow(4), -&f9.one());
        assert!(pair.scalar_power(6).is_some());
        assert!(pair.reducibility().reducible);
    }

    #[test]
    fn table4_matching() {
        // s = -1, d = 1, r2 = r4 = 1: Alt(5) row (and the first C6 row)
        let f7 = Field::new(7, 1).unwrap();
        let pair = pair_ints(&f7, 3, 1, [0, 1, 0, 1]).unwrap();
        let hits = pair.exceptional_match().unwrap();
        let ids: Vec<Table4RowId> = hits.iter().map(|h| h.id).collect();
        assert!(ids.contains(&Table4RowId::Alt5Power));
        assert!(ids.contains(&Table4RowId::C6Alt5));

        // p = q = 7, d = -1, r2 = -r4, r4 = 3: the Alt(7)-row parameters
        let pair = pair_ints(&f7, 3, -1, [0, 4, 0, 3]).unwrap();
        let ids: Vec<Table4RowId> = pair
            .exceptional_match()
            .unwrap()
            .iter()
            .map(|h| h.id)
            .collect();
        assert!(ids.contains(&Table4RowId::A7), "{ids:?}");
        // r4^4 = 81 = 4 = -3 mod 7: the cubic row fires too
        assert!(ids.contains(&Table4RowId::Psl2Cubic));

        // s = 0 over GF(7): omega in F_7; PSp(4,3) row
        let pair = pair_ints(&f7, 4, 1, [0, 2, 0, 4]).unwrap();
        let ids: Vec<Table4RowId> = pair
            .exceptional_match()
            .unwrap()
            .iter()
            .map(|h| h.id)
            .collect();
        assert!(ids.contains(&Table4RowId::PSp43), "{ids:?}");

        // specialization required
        let pair = pair_ints(&f7, 3, 1, [1, 0, 0, 1]).unwrap();
        assert!(matches!(
            pair.exceptional_match(),
            Err(GenPairError::RequiresSpecialization)
        ));
    }

    #[test]
    fn h8_relations_hold_when_power_is_scalar() {
        // find specialized pairs with (xy)^8 scalar and check the relations
        let f9 = Field::new(3, 2).unwrap();
        let mut found = 0;
        for k in [4u64, 8] {
            for d in [1i8, -1] {
                for i2 in 0..9u64 {
                    for i4 in 0..9u64 {
                        let r = [
                            f9.zero(),
                            f9.element_from_index(i2),
                            f9.zero(),
                            f9.element_from_index(i4),
                        ];
                        let pair = match make_pair(&f9, k, d, r) {
                            Ok(p) => p,
                            Err(_) => continue,
                        };
                        if let Some(rho) = pair.scalar_power(8) {
                            assert!(pair.powers_h8_relations(&rho));
                            found += 1;
                        }
                    }
                }
            }
        }
        assert!(found > 0);
    }
}
