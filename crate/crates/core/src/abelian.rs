//! Exact integer linear algebra and abelian invariants.
//!
//! Smith normal form over arbitrary-precision integers, abelianization of
//! finite presentations, and recognition of abelian groups given a word
//! problem oracle.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::oracle::OracleHandle;
use crate::presentation::{FinitePresentation, Word};

/// Dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, x) in r.iter().enumerate() {
                m.data[i * cols + j] = x.clone().into();
            }
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m.data[i * n + i] = x.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination. Square matrices only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// row[i] += q * row[j]
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = &self.data[j * self.cols + c] * q;
            self.data[i * self.cols + c] += v;
        }
    }

    /// col[i] += q * col[j]
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + j] * q;
            self.data[r * self.cols + i] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -&self.data[i * self.cols + c];
            self.data[i * self.cols + c] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal with a
/// nonnegative divisor chain.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form, pivoting on the entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = a.get(i, j);
                if !x.is_zero() && pivot.map_or(true, |(pi, pj)| x.abs() < a.get(pi, pj).abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / a.get(t, t));
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j) / a.get(t, t));
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a remainder is smaller than the pivot: move it into place
                let mut best = (t, t);
                for i in t + 1..r {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            let p = a.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { d: a, u, v }
}

/// Basis of `{x : x * m = 0}` (integer left kernel), as rows.
pub fn left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    (rank..m.rows).map(|i| snf.u.row(i).to_vec()).collect()
}

/// Some integer `a` with `a * m == t`, if one exists.
pub fn solve_left(m: &IntMatrix, t: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(t.len(), m.cols, "vector length mismatch");
    let snf = smith_normal_form(m);
    let tv: Vec<BigInt> = (0..m.cols)
        .map(|j| (0..m.cols).map(|i| &t[i] * snf.v.get(i, j)).sum())
        .collect();
    let diag = snf.diagonal();
    let mut b = vec![BigInt::zero(); m.rows];
    for (j, y) in tv.iter().enumerate() {
        let d = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !y.is_zero() {
                return None;
            }
        } else if y.is_multiple_of(&d) {
            b[j] = y / &d;
        } else {
            return None;
        }
    }
    Some(
        (0..m.rows)
            .map(|j| (0..m.rows).map(|i| &b[i] * snf.u.get(i, j)).sum())
            .collect(),
    )
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    assert_eq!(m.rows, m.cols, "square matrix expected");
    // u m v = I, so m^-1 = v u
    let snf = smith_normal_form(m);
    assert!(
        snf.diagonal().iter().all(|d| d.is_one()),
        "matrix is not unimodular"
    );
    snf.v.mul(&snf.u)
}

/// A basis (as rows) of the lattice spanned by the rows of `m`.
pub fn lattice_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let vinv = unimodular_inverse(&snf.v);
    let diag = snf.diagonal();
    let rows: Vec<Vec<BigInt>> = (0..rank)
        .map(|i| vinv.row(i).iter().map(|x| x * &diag[i]).collect())
        .collect();
    IntMatrix::from_rows(m.cols, &rows)
}

/// Decides membership in the row lattice of an integer matrix.
#[derive(Debug, Clone)]
pub struct RowLattice {
    diag: Vec<BigInt>,
    v: IntMatrix,
}

impl RowLattice {
    pub fn new(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        RowLattice {
            diag: snf.diagonal(),
            v: snf.v,
        }
    }

    /// `x` lies in the row span iff `x * V` is divisible coordinatewise by
    /// the Smith diagonal (zero beyond the rank).
    pub fn contains(&self, x: &[i64]) -> bool {
        let n = self.v.rows;
        assert_eq!(x.len(), n, "vector length mismatch");
        for j in 0..n {
            let mut y = BigInt::zero();
            for (i, &xi) in x.iter().enumerate() {
                if xi != 0 {
                    y += self.v.get(i, j) * BigInt::from(xi);
                }
            }
            let d = self.diag.get(j).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                if !y.is_zero() {
                    return false;
                }
            } else if !y.is_multiple_of(&d) {
                return false;
            }
        }
        true
    }
}

/// Isomorphism type of a finitely generated abelian group:
/// `Z^free_rank x Z/d1 x ... x Z/dk` with `d1 | d2 | ... | dk`, all `di >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigUint>,
}

impl AbelianInvariants {
    /// Canonicalizes arbitrary cyclic orders (`0` means infinite cyclic).
    pub fn from_orders(orders: &[u64]) -> Self {
        let snf = smith_normal_form(&IntMatrix::diagonal(
            &orders.iter().map(|&o| BigInt::from(o)).collect::<Vec<_>>(),
        ));
        Self::from_diagonal(&snf.diagonal(), orders.len())
    }

    /// `Z^free_rank x Z/factors...`; factors are canonicalized.
    pub fn new(free_rank: usize, factors: &[u64]) -> Self {
        let mut orders: Vec<u64> = factors.to_vec();
        orders.extend(std::iter::repeat(0).take(free_rank));
        Self::from_orders(&orders)
    }

    pub fn trivial() -> Self {
        AbelianInvariants {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    fn from_diagonal(diag: &[BigInt], num_generators: usize) -> Self {
        let rank = diag.iter().filter(|x| !x.is_zero()).count();
        let invariant_factors = diag
            .iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .map(|x| x.magnitude().clone())
            .collect();
        AbelianInvariants {
            free_rank: num_generators - rank,
            invariant_factors,
        }
    }

    pub fn is_free_abelian(&self, k: usize) -> bool {
        self.free_rank == k && self.invariant_factors.is_empty()
    }

    pub fn torsion_order(&self) -> BigUint {
        self.invariant_factors.iter().product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn factors_u64(&self) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|x| x.to_u64().unwrap_or(u64::MAX))
            .collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl fmt::Debug for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One row per relator: the exponent sums.
pub fn relation_matrix(p: &FinitePresentation) -> IntMatrix {
    let n = p.num_generators();
    let rows: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_sums(n)).collect();
    IntMatrix::from_rows(n, &rows)
}

pub fn abelianization(p: &FinitePresentation) -> AbelianInvariants {
    let m = relation_matrix(p);
    let snf = smith_normal_form(&m);
    AbelianInvariants::from_diagonal(&snf.diagonal(), p.num_generators())
}

/// Generator-level commutator test. Sufficient: if all generators commute
/// the group is abelian.
pub fn is_abelian(p: &FinitePresentation, o: &OracleHandle) -> bool {
    let n = p.num_generators();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            o.is_trivial(&Word::commutator(&Word::generator(i), &Word::generator(j)))
        })
    })
}

/// Decides `G = Z^k` given the word problem.
pub fn recognize_free_abelian(p: &FinitePresentation, o: &OracleHandle, k: usize) -> bool {
    is_abelian(p, o) && abelianization(p).is_free_abelian(k)
}

pub fn abelian_iso(x: &AbelianInvariants, y: &AbelianInvariants) -> bool {
    x == y
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{abelian_oracle, free_oracle};
    use crate::presentation::parse_presentation;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solve_left_examples() {
        let m = IntMatrix::from_rows(2, &[vec![2, 0], vec![1, 3]]);
        let a = solve_left(&m, &big(&[3, 3])).unwrap();
        assert_eq!(a, big(&[1, 1]));
        assert!(solve_left(&m, &big(&[1, 0])).is_none());
        let z = IntMatrix::zeros(0, 2);
        assert_eq!(solve_left(&z, &big(&[0, 0])), Some(vec![]));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = IntMatrix::from_rows(2, &[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.mul(&unimodular_inverse(&m)), IntMatrix::identity(2));
    }

    #[test]
    fn lattice_basis_spans_same_lattice() {
        let m = IntMatrix::from_rows(2, &[vec![2, 4], vec![4, 2], vec![6, 6]]);
        let b = lattice_basis(&m);
        assert_eq!(b.rows(), 2);
        assert_eq!(b.determinant().abs(), BigInt::from(12));
        let l = RowLattice::new(&m);
        for i in 0..2 {
            let r: Vec<i64> = b.row(i).iter().map(|x| x.to_i64().unwrap()).collect();
            assert!(l.contains(&r));
        }
    }

    fn snf_diag(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
        let m = IntMatrix::from_rows(cols, rows);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        s.diagonal().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf_diag(&[vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
        assert_eq!(snf_diag(&[vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        assert_eq!(snf_diag(&[vec![0, 0, 0], vec![0, 0, 0]], 3), vec![0, 0]);
    }

    #[test]
    fn snf_empty_shapes() {
        let m = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&m);
        assert_eq!(s.v, IntMatrix::identity(3));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(3, &[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]);
        assert_eq!(m.determinant(), BigInt::from(0 * 1 + 2 * (3 - 2) - 0 + 1 * (1 - 3)));
        let m = IntMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
    }

    #[test]
    fn abelianization_examples() {
        let f2 = parse_presentation("<a,b|>").unwrap();
        assert_eq!(abelianization(&f2), AbelianInvariants::new(2, &[]));
        for e in 1..=5u64 {
            let g = parse_presentation(&format!("<a,b,z | [a,b] z^-{e}, [a,z], [b,z]>")).unwrap();
            assert_eq!(abelianization(&g), AbelianInvariants::new(2, &[e]));
        }
        let tb = parse_presentation("<a,b,t | [a,b], t a t^-1 = a^2 b, t b t^-1 = a b>").unwrap();
        assert_eq!(abelianization(&tb), AbelianInvariants::new(1, &[]));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(AbelianInvariants::new(0, &[3, 4]), AbelianInvariants::new(0, &[12]));
        assert!(!abelian_iso(&AbelianInvariants::new(0, &[2, 6]), &AbelianInvariants::new(0, &[12])));
        assert!(abelian_iso(&AbelianInvariants::new(2, &[6]), &AbelianInvariants::new(2, &[6])));
        assert_eq!(AbelianInvariants::new(1, &[1, 2]).to_string(), "Z^1 x Z/2");
    }

    #[test]
    fn abelian_predicates() {
        let z2 = parse_presentation("<a,b | [a,b]>").unwrap();
        let o = abelian_oracle(&relation_matrix(&z2));
        assert!(is_abelian(&z2, &o));
        assert!(recognize_free_abelian(&z2, &o, 2));
        let f2 = parse_presentation("<a,b|>").unwrap();
        assert!(!is_abelian(&f2, &free_oracle(2)));
        let c5 = parse_presentation("<a | a^5>").unwrap();
        assert!(is_abelian(&c5, &abelian_oracle(&relation_matrix(&c5))));
        let zz2 = parse_presentation("<a,b | [a,b], a^2>").unwrap();
        assert!(!recognize_free_abelian(&zz2, &abelian_oracle(&relation_matrix(&zz2)), 1));
    }

    #[test]
    fn left_kernel_annihilates() {
        let m = IntMatrix::from_rows(2, &[vec![1, 2], vec![2, 4], vec![0, 0]]);
        let k = left_kernel(&m);
        assert_eq!(k.len(), 2);
        for row in k {
            let x = IntMatrix::from_rows(3, &[row]);
            assert_eq!(x.mul(&m), IntMatrix::zeros(1, 2));
        }
    }
}
