//! Algebraic representations into `SL(2)` and certificates that a
//! representation is not discrete, faithful, irreducible and all-loxodromic.
//!
//! Everything is exact: entries live in `Q` or a quadratic field.

mod quad;
mod repvar;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::meter::Meter;
use crate::oracle::{Decision, OracleHandle};
use crate::presentation::{enumerate_words, FinitePresentation, Word};

pub use quad::{parse_rational, squarefree_decomposition, QuadElement, QuadError};
pub use repvar::{emit_repvar_polynomials, Polynomial, RepVarSystem};

/// `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: QuadElement,
    pub b: QuadElement,
    pub c: QuadElement,
    pub d: QuadElement,
}

/// `[[e, f, g], [h, i, j], [k, l, m]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat3 {
    pub e: QuadElement,
    pub f: QuadElement,
    pub g: QuadElement,
    pub h: QuadElement,
    pub i: QuadElement,
    pub j: QuadElement,
    pub k: QuadElement,
    pub l: QuadElement,
    pub m: QuadElement,
}

impl Mat2 {
    pub fn new(a: QuadElement, b: QuadElement, c: QuadElement, d: QuadElement) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(e: [[i64; 2]; 2]) -> Self {
        Mat2::new(
            QuadElement::from_int(e[0][0]),
            QuadElement::from_int(e[0][1]),
            QuadElement::from_int(e[1][0]),
            QuadElement::from_int(e[1][1]),
        )
    }

    pub fn identity() -> Self {
        Mat2::from_ints([[1, 0], [0, 1]])
    }

    pub fn det(&self) -> QuadElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> QuadElement {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    /// Adjugate; the inverse when the determinant is 1.
    pub fn adjugate(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        let id = Mat2::identity();
        *self == id || *self == id.neg()
    }

    pub fn apply(&self, v: &[QuadElement; 2]) -> [QuadElement; 2] {
        [
            &(&self.a * &v[0]) + &(&self.b * &v[1]),
            &(&self.c * &v[0]) + &(&self.d * &v[1]),
        ]
    }
}

impl Mat3 {
    pub fn identity() -> Self {
        let (o, z) = (QuadElement::one(), QuadElement::zero());
        Mat3::from_rows([
            [o.clone(), z.clone(), z.clone()],
            [z.clone(), o.clone(), z.clone()],
            [z.clone(), z, o],
        ])
    }

    pub fn from_rows(r: [[QuadElement; 3]; 3]) -> Self {
        let [[e, f, g], [h, i, j], [k, l, m]] = r;
        Mat3 { e, f, g, h, i, j, k, l, m }
    }

    pub fn rows(&self) -> [[&QuadElement; 3]; 3] {
        [
            [&self.e, &self.f, &self.g],
            [&self.h, &self.i, &self.j],
            [&self.k, &self.l, &self.m],
        ]
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        let (x, y) = (self.rows(), o.rows());
        let entry = |r: usize, c: usize| {
            (0..3).fold(QuadElement::zero(), |acc, t| &acc + &(x[r][t] * y[t][c]))
        };
        Mat3::from_rows([
            [entry(0, 0), entry(0, 1), entry(0, 2)],
            [entry(1, 0), entry(1, 1), entry(1, 2)],
            [entry(2, 0), entry(2, 1), entry(2, 2)],
        ])
    }

    pub fn det(&self) -> QuadElement {
        let minor = |a: &QuadElement, b: &QuadElement, c: &QuadElement, d: &QuadElement| &(a * d) - &(b * c);
        let t1 = &self.e * &minor(&self.i, &self.j, &self.l, &self.m);
        let t2 = &self.f * &minor(&self.h, &self.j, &self.k, &self.m);
        let t3 = &self.g * &minor(&self.h, &self.i, &self.k, &self.l);
        &(&t1 - &t2) + &t3
    }

    pub fn trace(&self) -> QuadElement {
        &(&self.e + &self.i) + &self.m
    }
}

/// Second symmetric power of the standard representation.
pub fn sym2(x: &Mat2) -> Mat3 {
    let two = QuadElement::from_int(2);
    let (a, b, c, d) = (&x.a, &x.b, &x.c, &x.d);
    Mat3::from_rows([
        [a * a, a * b, b * b],
        [&two * &(a * c), &(a * d) + &(b * c), &two * &(b * d)],
        [c * c, c * d, d * d],
    ])
}

/// The nine polynomial constraints cutting out the image of `sym2` on `SL(2)`.
pub fn v_constraints(x: &Mat3) -> [QuadElement; 9] {
    let n = QuadElement::from_int;
    let Mat3 { e, f, g, h, i, j, k, l, m } = x;
    [
        &(h * h) - &(&n(4) * &(e * k)),
        &(j * j) - &(&n(4) * &(g * m)),
        &(f * f) - &(e * g),
        &(l * l) - &(k * m),
        &(&n(4) * &(f * l)) - &(h * j),
        &(&(&n(2) * &(l * i)) - &(h * m)) - &(k * j),
        &(&(&(i * i) - &(e * m)) - &(g * k)) - &(&n(2) * &(f * l)),
        &(&(&(e * m) + &(g * k)) - &(&n(2) * &(f * l))) - &n(1),
        &x.det() - &n(1),
    ]
}

pub fn v_membership(x: &Mat3) -> bool {
    v_constraints(x).iter().all(QuadElement::is_zero)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HyperbolicError {
    #[error("representation has {got} matrices for {expected} generators")]
    Arity { expected: usize, got: usize },
    #[error("image of generator {0} does not have determinant 1")]
    Determinant(usize),
    #[error("direction vector is zero")]
    ZeroVector,
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// One matrix in `SL(2)` per generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicRep {
    pub images: Vec<Mat2>,
}

impl AlgebraicRep {
    pub fn new(images: Vec<Mat2>) -> Result<Self, HyperbolicError> {
        common_field(images.iter().flat_map(Mat2::entries))?;
        for (g, m) in images.iter().enumerate() {
            if m.det() != QuadElement::one() {
                return Err(HyperbolicError::Determinant(g));
            }
        }
        Ok(AlgebraicRep { images })
    }

    pub fn trivial(n: usize) -> Self {
        AlgebraicRep {
            images: vec![Mat2::identity(); n],
        }
    }

    pub fn eval(&self, w: &Word) -> Mat2 {
        w.letters().iter().fold(Mat2::identity(), |acc, l| {
            let m = &self.images[l.generator()];
            if l.is_inverse() {
                acc.mul(&m.adjugate())
            } else {
                acc.mul(m)
            }
        })
    }
}

/// Every relator maps to `I` or `-I`.
pub fn check_rep(p: &FinitePresentation, r: &AlgebraicRep) -> Result<bool, HyperbolicError> {
    if r.images.len() != p.num_generators() {
        return Err(HyperbolicError::Arity {
            expected: p.num_generators(),
            got: r.images.len(),
        });
    }
    common_field(r.images.iter().flat_map(Mat2::entries))?;
    if let Some(g) = r.images.iter().position(|m| m.det() != QuadElement::one()) {
        return Err(HyperbolicError::Determinant(g));
    }
    Ok(p.relators().iter().all(|w| r.eval(w).is_plus_minus_identity()))
}

fn nontrivial(o: &OracleHandle, w: &Word) -> bool {
    matches!(o.decide(w), Ok(Decision::Nontrivial))
}

/// `w` is nontrivial in the group but trivial in `PSL(2)`.
pub fn cert_kernel(o: &OracleHandle, r: &AlgebraicRep, w: &Word) -> bool {
    nontrivial(o, w) && r.eval(w).is_plus_minus_identity()
}

/// The single nonrational field among `xs`, `1` if all are rational.
fn common_field<'a>(xs: impl IntoIterator<Item = &'a QuadElement>) -> Result<i64, QuadError> {
    let mut field = 1;
    for x in xs {
        match (field, x.field()) {
            (_, 1) => {}
            (1, f) => field = f,
            (a, b) if a == b => {}
            (a, b) => return Err(QuadError::FieldMismatch(a, b)),
        }
    }
    Ok(field)
}

impl Mat2 {
    fn entries(&self) -> [&QuadElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

/// Every generator image maps `v` to a multiple of `v`.
pub fn cert_reducible(r: &AlgebraicRep, v: &[QuadElement; 2]) -> Result<bool, HyperbolicError> {
    if v[0].is_zero() && v[1].is_zero() {
        return Err(HyperbolicError::ZeroVector);
    }
    common_field(r.images.iter().flat_map(Mat2::entries).chain(v.iter()))?;
    Ok(r.images.iter().all(|m| {
        let u = m.apply(v);
        (&(&u[0] * &v[1]) - &(&u[1] * &v[0])).is_zero()
    }))
}

/// `w` is nontrivial and its image has real trace in `[-2, 2]`.
pub fn cert_elliptic_or_parabolic(o: &OracleHandle, r: &AlgebraicRep, w: &Word) -> bool {
    if !nontrivial(o, w) {
        return false;
    }
    let t = r.eval(w).trace();
    let lo = t.cmp_real(&QuadElement::from_int(-2));
    let hi = t.cmp_real(&QuadElement::from_int(2));
    matches!(lo, Some(Ordering::Greater | Ordering::Equal)) && matches!(hi, Some(Ordering::Less | Ordering::Equal))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum NonDfilCertificate {
    Kernel { w: Word },
    Reducible { direction: [QuadElement; 2] },
    EllipticOrParabolic { w: Word },
}

impl NonDfilCertificate {
    pub fn verify(&self, o: &OracleHandle, r: &AlgebraicRep) -> bool {
        match self {
            NonDfilCertificate::Kernel { w } => cert_kernel(o, r, w),
            NonDfilCertificate::Reducible { direction } => cert_reducible(r, direction).unwrap_or(false),
            NonDfilCertificate::EllipticOrParabolic { w } => cert_elliptic_or_parabolic(o, r, w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducibleSearch {
    Found([QuadElement; 2]),
    Irreducible,
    /// An eigenvector needs a field extension that cannot be represented.
    Inconclusive,
}

/// Eigenvectors of `m`, or `None` if they leave the representable fields.
fn eigenvectors(m: &Mat2) -> Option<Vec<[QuadElement; 2]>> {
    let t = m.trace();
    let disc = &(&t * &t) - &QuadElement::from_int(4);
    let root = match disc.as_rational() {
        Some(_) => disc.sqrt_of()?,
        None => return None,
    };
    common_field(m.entries().into_iter().chain([&root])).ok()?;
    let half = QuadElement::from_ratio(1, 2);
    let lambdas = if root.is_zero() {
        vec![&half * &t]
    } else {
        vec![&half * &(&t + &root), &half * &(&t - &root)]
    };
    let mut out = Vec::new();
    for lambda in lambdas {
        if !m.b.is_zero() {
            out.push([m.b.clone(), &lambda - &m.a]);
        } else if !m.c.is_zero() {
            out.push([&lambda - &m.d, m.c.clone()]);
        } else {
            out.push([QuadElement::one(), QuadElement::zero()]);
            out.push([QuadElement::zero(), QuadElement::one()]);
            break;
        }
    }
    Some(out)
}

/// Looks for a common eigenvector among the eigenvectors of the first
/// generator image that is not `+-I`.
pub fn find_reducible_direction(r: &AlgebraicRep) -> ReducibleSearch {
    let Some(m) = r.images.iter().find(|m| !m.is_plus_minus_identity()) else {
        return ReducibleSearch::Found([QuadElement::one(), QuadElement::zero()]);
    };
    let Some(candidates) = eigenvectors(m) else {
        return ReducibleSearch::Inconclusive;
    };
    for v in candidates {
        match cert_reducible(r, &v) {
            Ok(true) => return ReducibleSearch::Found(v),
            Ok(false) => {}
            Err(_) => return ReducibleSearch::Inconclusive,
        }
    }
    ReducibleSearch::Irreducible
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonDfilSearch {
    Found(NonDfilCertificate),
    Exhausted,
}

/// Searches for a certificate that `r` is not DFIL: a common eigenvector
/// first, then words in shortlex order checked for kernel and trace.
pub fn search_nondfil(
    p: &FinitePresentation,
    o: &OracleHandle,
    r: &AlgebraicRep,
    max_word_len: usize,
    meter: &mut Meter,
) -> NonDfilSearch {
    if meter.charge(1).is_err() {
        return NonDfilSearch::Exhausted;
    }
    if let ReducibleSearch::Found(direction) = find_reducible_direction(r) {
        return NonDfilSearch::Found(NonDfilCertificate::Reducible { direction });
    }
    for w in enumerate_words(p.num_generators(), max_word_len).skip(1) {
        if meter.charge(1 + w.len() as u64).is_err() {
            return NonDfilSearch::Exhausted;
        }
        let image = r.eval(&w);
        if image.is_plus_minus_identity() {
            if nontrivial(o, &w) {
                return NonDfilSearch::Found(NonDfilCertificate::Kernel { w });
            }
            continue;
        }
        if cert_elliptic_or_parabolic(o, r, &w) {
            return NonDfilSearch::Found(NonDfilCertificate::EllipticOrParabolic { w });
        }
    }
    NonDfilSearch::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{abelian_oracle, free_oracle};
    use crate::presentation::parse_presentation;
    use crate::abelian::relation_matrix;

    fn q(n: i64, m: i64) -> QuadElement {
        QuadElement::from_ratio(n, m)
    }

    fn diag(n: i64, m: i64) -> Mat2 {
        Mat2::new(q(n, m), q(0, 1), q(0, 1), q(m, n))
    }

    #[test]
    fn sym2_examples() {
        assert_eq!(sym2(&Mat2::identity()), Mat3::identity());
        let s = sym2(&diag(3, 1));
        assert_eq!((s.e.clone(), s.i.clone(), s.m.clone()), (q(9, 1), q(1, 1), q(1, 9)));
        let u = sym2(&Mat2::from_ints([[1, 1], [0, 1]]));
        let expected = Mat3::from_rows([
            [q(1, 1), q(1, 1), q(1, 1)],
            [q(0, 1), q(1, 1), q(2, 1)],
            [q(0, 1), q(0, 1), q(1, 1)],
        ]);
        assert_eq!(u, expected);
    }

    #[test]
    fn membership_examples() {
        assert!(v_membership(&Mat3::identity()));
        let mut bad = Mat3::identity();
        bad.e = q(2, 1);
        assert!(!v_membership(&bad));
        let not_sl = Mat2::new(q(2, 1), q(0, 1), q(0, 1), q(1, 1));
        assert!(!v_membership(&sym2(&not_sl)));
    }

    #[test]
    fn check_rep_examples() {
        let free = parse_presentation("<a | >").unwrap();
        assert!(check_rep(&free, &AlgebraicRep::new(vec![diag(5, 3)]).unwrap()).unwrap());
        let p = parse_presentation("<a | a^2>").unwrap();
        let rot = AlgebraicRep::new(vec![Mat2::from_ints([[0, 1], [-1, 0]])]).unwrap();
        assert!(check_rep(&p, &rot).unwrap());
        let par = AlgebraicRep::new(vec![Mat2::from_ints([[1, 1], [0, 1]])]).unwrap();
        assert!(!check_rep(&p, &par).unwrap());
        assert!(AlgebraicRep::new(vec![Mat2::from_ints([[2, 0], [0, 1]])]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let o = free_oracle(1);
        let a = Word::generator(0);
        assert!(cert_kernel(&o, &AlgebraicRep::trivial(1), &a));
        let faithful = AlgebraicRep::new(vec![diag(2, 1)]).unwrap();
        for k in [-3, -1, 1, 2, 5] {
            assert!(!cert_kernel(&o, &faithful, &a.pow(k)));
        }
        assert!(!cert_kernel(&o, &AlgebraicRep::trivial(1), &a.concat(&a.inverse())));
    }

    #[test]
    fn reducible_examples() {
        let upper = AlgebraicRep::new(vec![
            Mat2::from_ints([[1, 1], [0, 1]]),
            Mat2::new(q(2, 1), q(7, 3), q(0, 1), q(1, 2)),
        ])
        .unwrap();
        assert!(cert_reducible(&upper, &[q(1, 1), q(0, 1)]).unwrap());
        assert!(cert_reducible(&upper, &[q(0, 1), q(0, 1)]).is_err());

        let rot = AlgebraicRep::new(vec![Mat2::from_ints([[0, 1], [-1, 0]])]).unwrap();
        let i = QuadElement::sqrt(-1).unwrap();
        assert!(cert_reducible(&rot, &[q(1, 1), i.clone()]).unwrap());
        assert!(cert_reducible(&rot, &[q(1, 1), -&i]).unwrap());
        match find_reducible_direction(&rot) {
            ReducibleSearch::Found(v) => assert!(cert_reducible(&rot, &v).unwrap()),
            other => panic!("{other:?}"),
        }

        // diag(2, 1/2) and [[1,1],[0,1]] share the eigenvector (1, 0).
        let triangular = AlgebraicRep::new(vec![diag(2, 1), Mat2::from_ints([[1, 1], [0, 1]])]).unwrap();
        assert_eq!(
            find_reducible_direction(&triangular),
            ReducibleSearch::Found([q(1, 1), q(0, 1)])
        );
        let irreducible = AlgebraicRep::new(vec![diag(2, 1), Mat2::from_ints([[1, 1], [1, 2]])]).unwrap();
        assert_eq!(find_reducible_direction(&irreducible), ReducibleSearch::Irreducible);
        assert!(!cert_reducible(&irreducible, &[q(1, 1), q(0, 1)]).unwrap());
        assert!(!cert_reducible(&irreducible, &[q(0, 1), q(1, 1)]).unwrap());
    }

    #[test]
    fn trace_examples() {
        let o = free_oracle(1);
        let a = Word::generator(0);
        let rep = |m: Mat2| AlgebraicRep::new(vec![m]).unwrap();
        assert!(cert_elliptic_or_parabolic(&o, &rep(Mat2::from_ints([[1, 1], [0, 1]])), &a));
        assert!(cert_elliptic_or_parabolic(&o, &rep(Mat2::from_ints([[0, 1], [-1, 0]])), &a));
        assert!(!cert_elliptic_or_parabolic(&o, &rep(diag(2, 1)), &a));
        // sqrt(2) is real and inside [-2, 2]; sqrt(5) is not.
        let s2 = QuadElement::sqrt(2).unwrap();
        let half = q(1, 2);
        let elliptic = Mat2::new(&half * &s2, &half * &s2, -&(&half * &s2), &half * &s2);
        assert!(cert_elliptic_or_parabolic(&o, &rep(elliptic), &a));
    }

    #[test]
    fn search_on_z2() {
        let p = parse_presentation("<a,b | [a,b]>").unwrap();
        let o = abelian_oracle(&relation_matrix(&p));
        let r = AlgebraicRep::new(vec![Mat2::from_ints([[1, 1], [0, 1]]), Mat2::from_ints([[1, 2], [0, 1]])]).unwrap();
        assert!(check_rep(&p, &r).unwrap());
        match search_nondfil(&p, &o, &r, 3, &mut Meter::new(1000)) {
            NonDfilSearch::Found(c) => assert!(c.verify(&o, &r)),
            NonDfilSearch::Exhausted => panic!("no certificate"),
        }
        let trivial = AlgebraicRep::trivial(2);
        let c = NonDfilCertificate::Kernel { w: Word::generator(0) };
        assert!(c.verify(&o, &trivial));
    }
}
