//! Polycyclic presentations and collection to normal form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// An element in collected form `g_0^{e_0} ... g_{m-1}^{e_{m-1}}`.
pub type PcElement = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PcError {
    #[error("relation for g{0} is not contained in the subgroup generated by later generators")]
    NotTail(usize),
    #[error("exponent vector has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("infinite generator g{by} needs an inverse conjugation relation for g{gen}")]
    MissingInverse { by: usize, gen: usize },
    #[error("generator index {0} out of range")]
    Index(usize),
    #[error("presentation is inconsistent: {0}")]
    Inconsistent(String),
    #[error("exponent overflow during collection")]
    Overflow,
}

/// A relation `g_gen^{g_by} = value` (or `g_by g_gen g_by^-1 = value` when `inverse`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateRelation {
    pub by: usize,
    pub gen: usize,
    pub value: Vec<i64>,
    #[serde(default)]
    pub inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerRelation {
    pub gen: usize,
    pub value: Vec<i64>,
}

/// Serialized form of a polycyclic presentation.
///
/// `relative_orders[i] == 0` marks an infinite relative order. A missing
/// power relation means `g_i^{n_i} = 1`; a missing conjugation relation means
/// the two generators commute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcSpec {
    pub generators: Vec<String>,
    pub relative_orders: Vec<u64>,
    #[serde(default)]
    pub powers: Vec<PowerRelation>,
    #[serde(default)]
    pub conjugates: Vec<ConjugateRelation>,
    /// Images of the generators of an ambient presentation, as collected words.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<Vec<i64>>>,
}

/// A consistent polycyclic presentation with a collector.
#[derive(Debug, Clone)]
pub struct PcPresentation {
    names: Vec<String>,
    orders: Vec<u64>,
    powers: Vec<PcElement>,
    conj: Vec<Vec<PcElement>>,
    conj_inv: Vec<Vec<PcElement>>,
    commutes: Vec<Vec<bool>>,
}

impl PcPresentation {
    pub fn from_spec(spec: &PcSpec) -> Result<Self, PcError> {
        let m = spec.generators.len();
        if spec.relative_orders.len() != m {
            return Err(PcError::Length {
                got: spec.relative_orders.len(),
                expected: m,
            });
        }
        let unit = |j: usize| -> PcElement {
            let mut v = vec![0; m];
            v[j] = 1;
            v
        };
        let check_vec = |v: &Vec<i64>, after: usize| -> Result<(), PcError> {
            if v.len() != m {
                return Err(PcError::Length {
                    got: v.len(),
                    expected: m,
                });
            }
            if v[..=after].iter().any(|&x| x != 0) {
                return Err(PcError::NotTail(after));
            }
            Ok(())
        };
        let mut powers = vec![vec![0; m]; m];
        for p in &spec.powers {
            if p.gen >= m {
                return Err(PcError::Index(p.gen));
            }
            check_vec(&p.value, p.gen)?;
            powers[p.gen] = p.value.clone();
        }
        let mut conj: Vec<Vec<PcElement>> = (0..m).map(|_| (0..m).map(unit).collect()).collect();
        let mut conj_inv = conj.clone();
        let mut has_inv = vec![vec![false; m]; m];
        for c in &spec.conjugates {
            if c.by >= m || c.gen >= m || c.by >= c.gen {
                return Err(PcError::Index(c.by.max(c.gen)));
            }
            check_vec(&c.value, c.by)?;
            if c.inverse {
                conj_inv[c.by][c.gen] = c.value.clone();
                has_inv[c.by][c.gen] = true;
            } else {
                conj[c.by][c.gen] = c.value.clone();
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if spec.relative_orders[i] == 0 && conj[i][j] != unit(j) && !has_inv[i][j] {
                    return Err(PcError::MissingInverse { by: i, gen: j });
                }
            }
        }
        let commutes = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| j > i && conj[i][j] == unit(j) && conj_inv[i][j] == unit(j))
                    .collect()
            })
            .collect();
        let mut pc = PcPresentation {
            names: spec.generators.clone(),
            orders: spec.relative_orders.clone(),
            powers,
            conj,
            conj_inv,
            commutes,
        };
        // finite generators: inverse conjugation is derived, mark commuting only if derived agrees
        for i in 0..m {
            if pc.orders[i] != 0 {
                for j in i + 1..m {
                    if pc.commutes[i][j] {
                        pc.commutes[i][j] = false;
                        let u = unit(j);
                        let v = pc.conj_step(&u, i, -1)?;
                        pc.commutes[i][j] = v == u;
                    }
                }
            }
        }
        pc.check_consistency()?;
        Ok(pc)
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relative_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn power(&self, i: usize) -> &PcElement {
        &self.powers[i]
    }

    pub fn conjugate(&self, by: usize, gen: usize) -> &PcElement {
        &self.conj[by][gen]
    }

    pub fn identity(&self) -> PcElement {
        vec![0; self.len()]
    }

    pub fn generator(&self, i: usize) -> PcElement {
        let mut v = self.identity();
        v[i] = 1;
        v
    }

    /// Collected form of a word given as `(generator, exponent)` syllables.
    pub fn collect(&self, syllables: &[(usize, i64)]) -> PcElement {
        self.try_collect(syllables).expect("exponent overflow")
    }

    pub fn try_collect(&self, syllables: &[(usize, i64)]) -> Result<PcElement, PcError> {
        let mut v = self.identity();
        for &(g, e) in syllables {
            self.mul_gen(&mut v, g, e)?;
        }
        Ok(v)
    }

    /// `v := v * g_k^s`.
    fn mul_gen(&self, v: &mut PcElement, k: usize, s: i64) -> Result<(), PcError> {
        if s == 0 {
            return Ok(());
        }
        let m = self.len();
        let mut tail = vec![0; m];
        tail[k + 1..].copy_from_slice(&v[k + 1..]);
        let tail_trivial = tail.iter().all(|&x| x == 0);
        let central = (k + 1..m).all(|j| tail[j] == 0 || self.commutes[k][j]);
        if !tail_trivial && !central {
            let step = s.signum();
            for _ in 0..s.unsigned_abs() {
                tail = self.conj_step(&tail, k, step)?;
            }
        }
        let e = v[k].checked_add(s).ok_or(PcError::Overflow)?;
        for x in v[k + 1..].iter_mut() {
            *x = 0;
        }
        let n = self.orders[k] as i64;
        if n == 0 {
            v[k] = e;
            v[k + 1..].copy_from_slice(&tail[k + 1..]);
        } else {
            let q = e.div_euclid(n);
            v[k] = e.rem_euclid(n);
            let rest = if q == 0 {
                tail
            } else {
                let p = self.try_pow(&self.powers[k], q)?;
                self.try_mul(&p, &tail)?
            };
            v[k + 1..].copy_from_slice(&rest[k + 1..]);
        }
        Ok(())
    }

    /// `t^{g_k^{sign}}` for `t` in the subgroup generated by `g_{k+1}, ...`.
    fn conj_step(&self, t: &PcElement, k: usize, sign: i64) -> Result<PcElement, PcError> {
        let m = self.len();
        if sign > 0 || self.orders[k] == 0 {
            let table = if sign > 0 { &self.conj[k] } else { &self.conj_inv[k] };
            let mut r = self.identity();
            for j in k + 1..m {
                if t[j] != 0 {
                    let img = self.try_pow(&table[j], t[j])?;
                    r = self.try_mul(&r, &img)?;
                }
            }
            Ok(r)
        } else {
            // g_k^-1 = g_k^{n-1} P^-1, so t^{g_k^-1} = P (t^{g_k^{n-1}}) P^-1
            let mut x = t.clone();
            for _ in 0..self.orders[k] - 1 {
                x = self.conj_step(&x, k, 1)?;
            }
            let p = &self.powers[k];
            let y = self.try_mul(p, &x)?;
            self.try_mul(&y, &self.try_inverse(p)?)
        }
    }

    pub fn mul(&self, x: &PcElement, y: &PcElement) -> PcElement {
        self.try_mul(x, y).expect("exponent overflow")
    }

    pub fn inverse(&self, x: &PcElement) -> PcElement {
        self.try_inverse(x).expect("exponent overflow")
    }

    pub fn pow(&self, x: &PcElement, e: i64) -> PcElement {
        self.try_pow(x, e).expect("exponent overflow")
    }

    /// Product, or [`PcError::Overflow`] if an exponent leaves `i64`.
    pub fn try_mul(&self, x: &PcElement, y: &PcElement) -> Result<PcElement, PcError> {
        let mut r = x.clone();
        for (j, &e) in y.iter().enumerate() {
            if e != 0 {
                self.mul_gen(&mut r, j, e)?;
            }
        }
        Ok(r)
    }

    pub fn try_inverse(&self, x: &PcElement) -> Result<PcElement, PcError> {
        let mut r = self.identity();
        for j in (0..self.len()).rev() {
            if x[j] != 0 {
                self.mul_gen(&mut r, j, x[j].checked_neg().ok_or(PcError::Overflow)?)?;
            }
        }
        Ok(r)
    }

    pub fn try_pow(&self, x: &PcElement, e: i64) -> Result<PcElement, PcError> {
        let (mut base, mut e) = if e < 0 {
            (self.try_inverse(x)?, e.unsigned_abs())
        } else {
            (x.clone(), e as u64)
        };
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.try_mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.try_mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_identity(&self, x: &PcElement) -> bool {
        x.iter().all(|&e| e == 0)
    }

    fn check_consistency(&self) -> Result<(), PcError> {
        let m = self.len();
        let bad = |msg: String| Err(PcError::Inconsistent(msg));
        for k in 0..m {
            let n = self.orders[k];
            if n != 0 && self.collect(&[(k, n as i64)]) != self.powers[k] {
                return bad(format!("g{k}^{n} does not collect to its power relation"));
            }
            for j in k + 1..m {
                if self.collect(&[(k, -1), (j, 1), (k, 1)]) != self.conj[k][j] {
                    return bad(format!("g{j}^g{k} does not collect to its relation"));
                }
                let back = self.collect(&[(k, 1), (j, 1), (k, -1)]);
                if self.orders[k] == 0 && back != self.conj_inv[k][j] {
                    return bad(format!("g{k} g{j} g{k}^-1 does not collect to its relation"));
                }
                // conjugation must be invertible
                let round = self.conj_step(&self.conj_step(&self.generator(j), k, 1)?, k, -1)?;
                if round != self.generator(j) {
                    return bad(format!("conjugation by g{k} is not inverted on g{j}"));
                }
            }
        }
        let mut test: Vec<PcElement> = Vec::new();
        for k in 0..m {
            test.push(self.generator(k));
            test.push(self.inverse(&self.generator(k)));
            if self.orders[k] > 1 {
                let mut v = self.identity();
                v[k] = self.orders[k] as i64 - 1;
                test.push(v);
            }
        }
        for x in &test {
            if !self.is_identity(&self.mul(x, &self.inverse(x))) {
                return bad(format!("{x:?} times its inverse is not trivial"));
            }
            for y in &test {
                let xy = self.mul(x, y);
                for z in &test {
                    if self.mul(&xy, z) != self.mul(x, &self.mul(y, z)) {
                        return bad(format!("associativity fails on {x:?}, {y:?}, {z:?}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Defining relators `g_i^{n_i} P_i^-1` and `g_i^-1 g_j g_i C_ij^-1`
    /// as syllable lists, for building a finite presentation of the group.
    pub fn relator_syllables(&self) -> Vec<Vec<(usize, i64)>> {
        let m = self.len();
        let syll = |v: &PcElement| -> Vec<(usize, i64)> {
            v.iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| (j, e))
                .collect()
        };
        let inv = |s: Vec<(usize, i64)>| -> Vec<(usize, i64)> {
            s.into_iter().rev().map(|(j, e)| (j, -e)).collect()
        };
        let mut out = Vec::new();
        for i in 0..m {
            if self.orders[i] != 0 {
                let mut r = vec![(i, self.orders[i] as i64)];
                r.extend(inv(syll(&self.powers[i])));
                out.push(r);
            }
            for j in i + 1..m {
                let mut r = vec![(i, -1), (j, 1), (i, 1)];
                r.extend(inv(syll(&self.conj[i][j])));
                out.push(r);
            }
        }
        out
    }

    pub fn to_spec(&self) -> PcSpec {
        let m = self.len();
        let mut powers = Vec::new();
        let mut conjugates = Vec::new();
        for i in 0..m {
            if self.orders[i] != 0 && !self.is_identity(&self.powers[i]) {
                powers.push(PowerRelation {
                    gen: i,
                    value: self.powers[i].clone(),
                });
            }
            for j in i + 1..m {
                if self.conj[i][j] != self.generator(j) {
                    conjugates.push(ConjugateRelation {
                        by: i,
                        gen: j,
                        value: self.conj[i][j].clone(),
                        inverse: false,
                    });
                }
                if self.orders[i] == 0 && self.conj_inv[i][j] != self.generator(j) {
                    conjugates.push(ConjugateRelation {
                        by: i,
                        gen: j,
                        value: self.conj_inv[i][j].clone(),
                        inverse: true,
                    });
                }
            }
        }
        PcSpec {
            generators: self.names.clone(),
            relative_orders: self.orders.clone(),
            powers,
            conjugates,
            images: None,
        }
    }
}

/// Convenience builder used by the catalogs.
#[derive(Debug, Clone, Default)]
pub struct PcBuilder {
    names: Vec<String>,
    orders: Vec<u64>,
    powers: BTreeMap<usize, Vec<i64>>,
    conj: Vec<ConjugateRelation>,
}

impl PcBuilder {
    pub fn new(names: &[&str], orders: &[u64]) -> Self {
        PcBuilder {
            names: names.iter().map(|s| s.to_string()).collect(),
            orders: orders.to_vec(),
            ..Default::default()
        }
    }

    pub fn power(mut self, gen: usize, value: &[i64]) -> Self {
        self.powers.insert(gen, value.to_vec());
        self
    }

    /// `g_gen^{g_by} = value`.
    pub fn conj(mut self, by: usize, gen: usize, value: &[i64]) -> Self {
        self.conj.push(ConjugateRelation {
            by,
            gen,
            value: value.to_vec(),
            inverse: false,
        });
        self
    }

    /// `g_by g_gen g_by^-1 = value`.
    pub fn conj_inv(mut self, by: usize, gen: usize, value: &[i64]) -> Self {
        self.conj.push(ConjugateRelation {
            by,
            gen,
            value: value.to_vec(),
            inverse: true,
        });
        self
    }

    pub fn spec(self) -> PcSpec {
        PcSpec {
            generators: self.names,
            relative_orders: self.orders,
            powers: self
                .powers
                .into_iter()
                .map(|(gen, value)| PowerRelation { gen, value })
                .collect(),
            conjugates: self.conj,
            images: None,
        }
    }

    pub fn build(self) -> Result<PcPresentation, PcError> {
        PcPresentation::from_spec(&self.spec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg(e: i64) -> PcPresentation {
        // b^a = a^-1 b a = b z^e  (so [a,b] = a b a^-1 b^-1 = z^e under a b = b a z^-e ...)
        PcBuilder::new(&["a", "b", "z"], &[0, 0, 0])
            .conj(0, 1, &[0, 1, e])
            .conj_inv(0, 1, &[0, 1, -e])
            .build()
            .unwrap()
    }

    #[test]
    fn heisenberg_collects() {
        let h = heisenberg(1);
        let x = h.collect(&[(1, 1), (0, 1)]);
        assert_eq!(x, vec![1, 1, 1]);
        let y = h.collect(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        assert_eq!(h.mul(&y, &h.inverse(&y)), h.identity());
    }

    #[test]
    fn inconsistent_rejected() {
        // a^2 = 1 but a acts on infinite b with b -> b^2 (not an automorphism)
        let r = PcBuilder::new(&["a", "b"], &[2, 0]).conj(0, 1, &[0, 2]).build();
        assert!(r.is_err());
    }

    #[test]
    fn finite_cyclic_power() {
        let c = PcBuilder::new(&["a"], &[5]).build().unwrap();
        assert_eq!(c.collect(&[(0, 7)]), vec![2]);
        assert_eq!(c.collect(&[(0, -1)]), vec![4]);
    }

    #[test]
    fn torus_bundle_large_exponents() {
        // t a t^-1 = a^2 b, t b t^-1 = a b
        let tb = PcBuilder::new(&["t", "a", "b"], &[0, 0, 0])
            .conj_inv(0, 1, &[0, 2, 1])
            .conj_inv(0, 2, &[0, 1, 1])
            .conj(0, 1, &[0, 1, -1])
            .conj(0, 2, &[0, -1, 2])
            .build()
            .unwrap();
        let x = tb.collect(&[(0, 30), (1, 1), (0, -30)]);
        assert_eq!(x[0], 0);
        assert!(x[1] > 1_000_000);
    }
}
