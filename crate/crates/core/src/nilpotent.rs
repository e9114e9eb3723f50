//! Class-2 nilpotent quotients and recognition of the groups `Gamma_e`.
//!
//! `Gamma_e = <a, b, z | [a,b] z^-e, [a,z], [b,z]>` is the fundamental group
//! of the circle bundle over the torus with Euler number `e`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{
    abelianization, lattice_basis, left_kernel, relation_matrix, smith_normal_form, solve_left,
    unimodular_inverse, AbelianInvariants, IntMatrix,
};
use crate::isomorphism::{gamma_e_entry, search_iso, IsoCertificate, IsoSearch};
use crate::meter::Meter;
use crate::oracle::OracleHandle;
use crate::presentation::{FinitePresentation, Word};

/// The class-2 quotient `G / gamma_3(G)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pc2Data {
    pub h1: AbelianInvariants,
    pub gamma2: AbelianInvariants,
    /// `structure[i][j]`: coordinates of `[x_i, x_j]` in the free part of
    /// `gamma_2`, measured in a basis of its isolator modulo torsion.
    pub structure: Vec<Vec<Vec<i64>>>,
    pub hirsch: usize,
}

/// Element of the free class-2 nilpotent group, in the normal form
/// `x_0^v0 ... x_{n-1}^v{n-1} * prod_{j>i} [x_j, x_i]^c(j,i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Free2 {
    v: Vec<BigInt>,
    c: Vec<BigInt>,
}

fn pair_index(j: usize, i: usize) -> usize {
    debug_assert!(j > i);
    j * (j - 1) / 2 + i
}

fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl Free2 {
    fn identity(n: usize) -> Self {
        Free2 {
            v: vec![BigInt::zero(); n],
            c: vec![BigInt::zero(); num_pairs(n)],
        }
    }

    /// Sum over `j > i` of `a_j * b_i`, spread over commutator coordinates.
    fn cross(a: &[BigInt], b: &[BigInt], out: &mut [BigInt]) {
        for j in 0..a.len() {
            if a[j].is_zero() {
                continue;
            }
            for i in 0..j {
                if !b[i].is_zero() {
                    out[pair_index(j, i)] += &a[j] * &b[i];
                }
            }
        }
    }

    fn mul(&self, other: &Free2) -> Free2 {
        let v: Vec<BigInt> = self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect();
        let mut c: Vec<BigInt> = self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect();
        // x_j^a x_i^b = x_i^b x_j^a [x_j, x_i]^{ab}
        Free2::cross(&self.v, &other.v, &mut c);
        Free2 { v, c }
    }

    fn pow(&self, k: &BigInt) -> Free2 {
        let v: Vec<BigInt> = self.v.iter().map(|a| a * k).collect();
        let mut c: Vec<BigInt> = self.c.iter().map(|a| a * k).collect();
        let binom = k * (k - BigInt::one()) / 2;
        let mut q = vec![BigInt::zero(); self.c.len()];
        Free2::cross(&self.v, &self.v, &mut q);
        for (ci, qi) in c.iter_mut().zip(q) {
            *ci += qi * &binom;
        }
        Free2 { v, c }
    }

    fn inverse(&self) -> Free2 {
        self.pow(&BigInt::from(-1))
    }

    fn from_word(n: usize, w: &Word) -> Free2 {
        let mut acc = Free2::identity(n);
        for l in w.letters() {
            let mut g = Free2::identity(n);
            g.v[l.generator()] = BigInt::from(l.sign());
            acc = acc.mul(&g);
        }
        acc
    }
}

/// Commutator coordinates of `[x, x_m]` for `x` with exponent vector `v`.
fn commutator_with_generator(v: &[BigInt], m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); num_pairs(v.len())];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() || i == m {
            continue;
        }
        if i > m {
            out[pair_index(i, m)] += vi;
        } else {
            out[pair_index(m, i)] -= vi;
        }
    }
    out
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("structure constant fits in i64")
}

/// Computes `G / gamma_3(G)`.
pub fn nq2(p: &FinitePresentation) -> Pc2Data {
    let n = p.num_generators();
    let cpairs = num_pairs(n);
    let h1 = abelianization(p);
    let m = relation_matrix(p);
    let rels: Vec<Free2> = p.relators().iter().map(|r| Free2::from_word(n, r)).collect();

    let product = |a: &[BigInt]| -> Free2 {
        let mut acc = Free2::identity(n);
        for (r, ak) in rels.iter().zip(a) {
            if !ak.is_zero() {
                acc = acc.mul(&r.pow(ak));
            }
        }
        acc
    };

    // generators of (normal closure of relators) intersected with gamma_2
    let mut k_rows: Vec<Vec<BigInt>> = Vec::new();
    for r in &rels {
        for g in 0..n {
            let row = commutator_with_generator(&r.v, g);
            if row.iter().any(|x| !x.is_zero()) {
                k_rows.push(row);
            }
        }
    }
    for a in left_kernel(&m) {
        let prod = product(&a);
        debug_assert!(prod.v.iter().all(Zero::is_zero));
        if prod.c.iter().any(|x| !x.is_zero()) {
            k_rows.push(prod.c);
        }
    }
    let kmat = IntMatrix::from_rows(cpairs, &k_rows);
    let snf2 = smith_normal_form(&kmat);
    let rank2 = snf2.rank();
    let diag2 = snf2.diagonal();
    let mut orders: Vec<u64> = (0..cpairs)
        .map(|i| {
            diag2
                .get(i)
                .map_or(0, |d| d.magnitude().to_u64().expect("small torsion"))
        })
        .collect();
    orders.retain(|&d| d != 1);
    let gamma2 = AbelianInvariants::from_orders(&orders);
    let rho = cpairs - rank2;

    let free_part = |c: &[BigInt]| -> Vec<BigInt> {
        (rank2..cpairs)
            .map(|j| (0..cpairs).map(|i| &c[i] * snf2.v.get(i, j)).sum())
            .collect()
    };

    // roots of torsion lifts from h1 that land in gamma_2
    let snf1 = smith_normal_form(&m);
    let v1inv = unimodular_inverse(&snf1.v);
    let mut roots: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    if rho > 0 {
        for (i, d) in snf1.diagonal().iter().enumerate() {
            if d.is_zero() || d.is_one() {
                continue;
            }
            let g = Free2 {
                v: v1inv.row(i).to_vec(),
                c: vec![BigInt::zero(); cpairs],
            };
            let gd = g.pow(d);
            let a = solve_left(&m, &gd.v).expect("power of a torsion lift lies in the relation lattice");
            let central = gd.mul(&product(&a).inverse());
            debug_assert!(central.v.iter().all(Zero::is_zero));
            roots.push((d.clone(), free_part(&central.c)));
        }
    }
    let denom = roots.iter().fold(BigInt::one(), |acc, (d, _)| acc.lcm(d));
    let mut gens: Vec<Vec<BigInt>> = (0..rho)
        .map(|k| {
            let mut e = vec![BigInt::zero(); rho];
            e[k] = denom.clone();
            e
        })
        .collect();
    for (d, y) in &roots {
        let s = &denom / d;
        gens.push(y.iter().map(|x| x * &s).collect());
    }
    let basis = lattice_basis(&IntMatrix::from_rows(rho, &gens));

    let mut structure = vec![vec![vec![0i64; rho]; n]; n];
    if rho > 0 {
        for j in 0..n {
            for i in 0..j {
                // [x_i, x_j] = [x_j, x_i]^-1
                let mut c = vec![BigInt::zero(); cpairs];
                c[pair_index(j, i)] = BigInt::from(-1);
                let y: Vec<BigInt> = free_part(&c).iter().map(|x| x * &denom).collect();
                let coords = solve_left(&basis, &y).expect("gamma_2 lies in its isolator");
                for t in 0..rho {
                    structure[i][j][t] = to_i64(&coords[t]);
                    structure[j][i][t] = -structure[i][j][t];
                }
            }
        }
        if rho == 1 {
            let first = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| structure[i][j][0])
                .find(|&x| x != 0);
            if first.is_some_and(|x| x < 0) {
                for row in structure.iter_mut() {
                    for entry in row.iter_mut() {
                        entry[0] = -entry[0];
                    }
                }
            }
        }
    }

    Pc2Data {
        hirsch: h1.free_rank + gamma2.free_rank,
        h1,
        gamma2,
        structure,
    }
}

/// Largest absolute structure constant between two generators, for a
/// one-dimensional `gamma_2`.
pub fn structure_constant(d: &Pc2Data) -> Option<i64> {
    if d.gamma2.free_rank != 1 {
        return None;
    }
    d.structure
        .iter()
        .flat_map(|row| row.iter().map(|v| v[0].abs()))
        .max()
}

/// True iff every `[[x_i, x_j], x_k]` is trivial, which forces `gamma_3 = 1`.
pub fn is_class2(p: &FinitePresentation, o: &OracleHandle) -> bool {
    let n = p.num_generators();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let c = Word::commutator(&Word::generator(i), &Word::generator(j));
            (0..n).all(|k| o.is_trivial(&Word::commutator(&c, &Word::generator(k))))
        })
    })
}

/// Why a group is not of the form `Gamma_e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NilObstruction {
    NotClass2,
    Hirsch(usize),
    Gamma2(AbelianInvariants),
    H1(AbelianInvariants),
}

#[derive(Debug, Clone)]
pub enum GammaSearch {
    Found { e: u64, certificate: IsoCertificate },
    NotBundle(NilObstruction),
    Exhausted,
}

/// The candidate Euler number read from the invariants, or the failed invariant.
pub fn gamma_e_candidate(p: &FinitePresentation, o: &OracleHandle) -> Result<u64, NilObstruction> {
    if !is_class2(p, o) {
        return Err(NilObstruction::NotClass2);
    }
    let d = nq2(p);
    if d.hirsch != 3 {
        return Err(NilObstruction::Hirsch(d.hirsch));
    }
    if !d.gamma2.is_free_abelian(1) {
        return Err(NilObstruction::Gamma2(d.gamma2));
    }
    if d.h1.free_rank != 2 || d.h1.invariant_factors.len() > 1 {
        return Err(NilObstruction::H1(d.h1));
    }
    Ok(d.h1.factors_u64().first().copied().unwrap_or(1))
}

/// Recognizes `Gamma_e` with a verified isomorphism certificate.
pub fn recognize_gamma_e(
    p: &FinitePresentation,
    o: &OracleHandle,
    max_word_len: usize,
    meter: &mut Meter,
) -> GammaSearch {
    let e = match gamma_e_candidate(p, o) {
        Ok(e) => e,
        Err(obstruction) => return GammaSearch::NotBundle(obstruction),
    };
    let Ok(entry) = gamma_e_entry(e) else {
        return GammaSearch::Exhausted;
    };
    match search_iso(p, o, &entry, max_word_len, meter) {
        IsoSearch::Found(certificate) => GammaSearch::Found { e, certificate },
        IsoSearch::Exhausted => GammaSearch::Exhausted,
    }
}
