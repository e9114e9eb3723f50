//! Certificates that a group has a nontrivial element of finite order.
//!
//! A certificate is a word `w`, an exponent `n >= 2` and a permutation
//! representation of the group in which `w` acts with order exactly `n`.
//! Together with `w^n = 1` in the group this shows `<w>` is cyclic of order
//! `n`.

use serde::{Deserialize, Serialize};

use crate::cosets::{low_index_subgroups_metered, CosetError, CosetTable};
use crate::meter::{Exhausted, Meter};
use crate::oracle::OracleHandle;
use crate::presentation::{enumerate_words, FinitePresentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub w: Word,
    pub n: u64,
    /// Image of each generator as a permutation of `0..m`.
    pub quotient: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TorsionError {
    #[error("quotient has {got} permutations for {expected} generators")]
    Arity { expected: usize, got: usize },
    #[error("image of generator {0} is not a permutation")]
    NotPermutation(usize),
    #[error("word uses a generator outside the presentation")]
    WordOutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionSearch {
    Found(TorsionCertificate),
    Exhausted,
}

fn check_permutations(perms: &[Vec<usize>], ngens: usize) -> Result<usize, TorsionError> {
    if perms.len() != ngens {
        return Err(TorsionError::Arity {
            expected: ngens,
            got: perms.len(),
        });
    }
    let m = perms.first().map_or(1, Vec::len);
    for (g, p) in perms.iter().enumerate() {
        let mut seen = vec![false; m];
        if p.len() != m {
            return Err(TorsionError::NotPermutation(g));
        }
        for &x in p {
            if x >= m || seen[x] {
                return Err(TorsionError::NotPermutation(g));
            }
            seen[x] = true;
        }
    }
    Ok(m)
}

/// Permutation of a word under generator images `perms` (inverses computed).
fn word_permutation(perms: &[Vec<usize>], inverses: &[Vec<usize>], m: usize, w: &Word) -> Vec<usize> {
    (0..m)
        .map(|start| {
            w.letters().iter().fold(start, |c, l| {
                if l.is_inverse() {
                    inverses[l.generator()][c]
                } else {
                    perms[l.generator()][c]
                }
            })
        })
        .collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Order of a permutation.
pub fn permutation_order(p: &[usize]) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut order: u64 = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            c = p[c];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

/// Checks the certificate: the permutations define a homomorphism, `w` maps
/// to an element of order exactly `n >= 2`, and `w^n` is trivial per the oracle.
pub fn verify_torsion_cert(
    p: &FinitePresentation,
    o: &OracleHandle,
    c: &TorsionCertificate,
) -> Result<bool, TorsionError> {
    let m = check_permutations(&c.quotient, p.num_generators())?;
    if c.w.max_generator().is_some_and(|g| g >= p.num_generators()) {
        return Err(TorsionError::WordOutOfRange);
    }
    if c.n < 2 {
        return Ok(false);
    }
    let inverses: Vec<Vec<usize>> = c.quotient.iter().map(|q| invert(q)).collect();
    let identity: Vec<usize> = (0..m).collect();
    for r in p.relators() {
        if word_permutation(&c.quotient, &inverses, m, r) != identity {
            return Ok(false);
        }
    }
    if permutation_order(&word_permutation(&c.quotient, &inverses, m, &c.w)) != c.n {
        return Ok(false);
    }
    Ok(o.is_trivial(&c.w.pow(c.n as i64)))
}

/// Search limits for [`search_torsion_cert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorsionSearchConfig {
    pub max_index: usize,
    pub max_word_len: usize,
}

impl Default for TorsionSearchConfig {
    fn default() -> Self {
        TorsionSearchConfig {
            max_index: 6,
            max_word_len: 8,
        }
    }
}

/// Tests every word of length exactly `len` in each table's action.
fn scan_tables(
    p: &FinitePresentation,
    o: &OracleHandle,
    tables: &[CosetTable],
    len: usize,
    meter: &mut Meter,
) -> Result<Option<TorsionCertificate>, Exhausted> {
    if tables.iter().all(|t| t.index() < 2) {
        return Ok(None);
    }
    let words: Vec<Word> = enumerate_words(p.num_generators(), len)
        .filter(|w| w.len() == len)
        .collect();
    meter.charge(words.len() as u64 / 8)?;
    for t in tables {
        if t.index() < 2 {
            continue;
        }
        let perms = t.permutations();
        let inverses: Vec<Vec<usize>> = perms.iter().map(|q| invert(q)).collect();
        for w in words.iter().cloned() {
            meter.charge(1)?;
            let n = permutation_order(&word_permutation(&perms, &inverses, t.index(), &w));
            if n < 2 {
                continue;
            }
            // oracle calls cost about one step per letter
            meter.charge(1 + (n as usize * len) as u64)?;
            if o.is_trivial(&w.pow(n as i64)) {
                return Ok(Some(TorsionCertificate {
                    w,
                    n,
                    quotient: perms,
                }));
            }
        }
    }
    Ok(None)
}

/// Searches coset actions of low-index subgroups for a torsion certificate,
/// short words first; the index bound grows with the word length.
pub fn search_torsion_cert(
    p: &FinitePresentation,
    o: &OracleHandle,
    config: TorsionSearchConfig,
    meter: &mut Meter,
) -> TorsionSearch {
    if o.promises().torsion_free {
        return TorsionSearch::Exhausted;
    }
    let mut tables: Vec<CosetTable> = Vec::new();
    let mut loaded_index = 0;
    for len in 1..=config.max_word_len {
        let k = (len + 1).min(config.max_index);
        if k > loaded_index {
            match low_index_subgroups_metered(p, k, meter) {
                Ok(t) => tables = t,
                Err(CosetError::Exhausted(_)) => return TorsionSearch::Exhausted,
                Err(_) => return TorsionSearch::Exhausted,
            }
            loaded_index = k;
        }
        match scan_tables(p, o, &tables, len, meter) {
            Ok(Some(c)) => {
                debug_assert_eq!(verify_torsion_cert(p, o, &c), Ok(true));
                return TorsionSearch::Found(c);
            }
            Ok(None) => {}
            Err(_) => return TorsionSearch::Exhausted,
        }
    }
    TorsionSearch::Exhausted
}

/// Torsion search restricted to given coset tables.
pub fn torsion_from_tables(
    p: &FinitePresentation,
    o: &OracleHandle,
    tables: &[CosetTable],
    max_word_len: usize,
    meter: &mut Meter,
) -> TorsionSearch {
    if o.promises().torsion_free {
        return TorsionSearch::Exhausted;
    }
    for len in 1..=max_word_len {
        match scan_tables(p, o, tables, len, meter) {
            Ok(Some(c)) => return TorsionSearch::Found(c),
            Ok(None) => {}
            Err(_) => return TorsionSearch::Exhausted,
        }
    }
    TorsionSearch::Exhausted
}
