//! Word problem for central extensions of closed orientable surface groups,
//! `<a_1, b_1, ..., a_g, b_g, z | prod [a_i, b_i] z^-e, z central>`.
//!
//! Generators are ordered `a_1, b_1, ..., a_g, b_g, z`. The surface relator is
//! C'(1/6) for `g >= 2`, so greedy Dehn reduction decides the surface part.

use crate::presentation::{Letter, Word};

/// `prod_i [a_i, b_i]` with `[x, y] = x y x^-1 y^-1`.
pub fn surface_relator(genus: usize) -> Word {
    let mut w = Word::empty();
    for i in 0..genus {
        let a = Letter::pos(2 * i);
        let b = Letter::pos(2 * i + 1);
        w.push(a);
        w.push(b);
        w.push(a.inverse());
        w.push(b.inverse());
    }
    w
}

/// Dehn reduction state for one genus.
#[derive(Debug, Clone)]
pub struct DehnReducer {
    relator_len: usize,
    /// Cyclic conjugates of the relator and its inverse with their orientation.
    rotations: Vec<(Vec<Letter>, i64)>,
}

impl DehnReducer {
    pub fn new(genus: usize) -> Self {
        assert!(genus >= 2, "Dehn reduction needs genus at least 2");
        let r = surface_relator(genus);
        let mut rotations = Vec::new();
        for (base, sign) in [(r.clone(), 1), (r.inverse(), -1)] {
            for k in 0..base.len() {
                rotations.push((base.rotate(k).into_letters(), sign));
            }
        }
        DehnReducer {
            relator_len: r.len(),
            rotations,
        }
    }

    /// Reduces a surface word. Returns the Dehn-reduced word and the signed
    /// number of relator applications used.
    pub fn reduce(&self, w: &Word) -> (Word, i64) {
        let mut cur = w.free_reduce().into_letters();
        let mut count = 0i64;
        let half = self.relator_len / 2;
        loop {
            let mut best: Option<(usize, usize, Vec<Letter>, i64)> = None;
            'outer: for i in 0..cur.len() {
                for (rho, sign) in &self.rotations {
                    let m = cur[i..]
                        .iter()
                        .zip(rho)
                        .take_while(|(a, b)| a == b)
                        .count();
                    if m <= half {
                        continue;
                    }
                    let replacement: Vec<Letter> =
                        rho[m..].iter().rev().map(|l| l.inverse()).collect();
                    let better = match &best {
                        None => true,
                        Some((_, bm, brep, _)) => m > *bm || (m == *bm && replacement < *brep),
                    };
                    if better {
                        best = Some((i, m, replacement, *sign));
                    }
                }
                if best.is_some() {
                    break 'outer;
                }
            }
            match best {
                None => break,
                Some((i, m, replacement, sign)) => {
                    let mut next = cur[..i].to_vec();
                    next.extend(replacement);
                    next.extend_from_slice(&cur[i + m..]);
                    cur = Word::from_letters(next).free_reduce().into_letters();
                    count += sign;
                }
            }
        }
        (Word::from_letters(cur), count)
    }
}

/// Decides triviality in `Gamma_{g,e}`.
#[derive(Debug, Clone)]
pub struct SurfaceCentral {
    genus: usize,
    euler: i64,
    dehn: DehnReducer,
}

impl SurfaceCentral {
    pub fn new(genus: usize, euler: i64) -> Self {
        SurfaceCentral {
            genus,
            euler,
            dehn: DehnReducer::new(genus),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }

    /// Splits off the central generator: returns (surface word, z exponent).
    pub fn split(&self, w: &Word) -> (Word, i64) {
        let z = 2 * self.genus;
        let mut m = 0;
        let surface = w
            .letters()
            .iter()
            .filter(|l| {
                if l.generator() == z {
                    m += l.sign();
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (surface, m)
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        let (surface, m) = self.split(w);
        let (rest, c) = self.dehn.reduce(&surface);
        // the surface word equals R^c = z^{e c}
        rest.is_empty() && m + self.euler * c == 0
    }

    pub fn reducer(&self) -> &DehnReducer {
        &self.dehn
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn relator_reduces_with_count_one() {
        let d = DehnReducer::new(2);
        let (w, c) = d.reduce(&surface_relator(2));
        assert!(w.is_empty());
        assert_eq!(c, 1);
        let (w, c) = d.reduce(&surface_relator(2).inverse());
        assert!(w.is_empty());
        assert_eq!(c, -1);
    }

    #[test]
    fn generators_are_nontrivial() {
        let s = SurfaceCentral::new(2, 1);
        for g in 0..5 {
            assert!(!s.is_trivial(&Word::generator(g)));
        }
    }

    #[test]
    fn products_of_conjugates_track_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = DehnReducer::new(3);
        let r = surface_relator(3);
        for _ in 0..50 {
            let mut w = Word::empty();
            let mut expected = 0;
            for _ in 0..3 {
                let conj: Word = (0..rng.gen_range(0..6))
                    .map(|_| Letter::new(rng.gen_range(0..6), rng.gen_bool(0.5)))
                    .collect();
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                expected += sign;
                w = w.concat(&r.pow(sign).conjugate_by(&conj));
            }
            let (rest, c) = d.reduce(&w);
            assert!(rest.is_empty(), "{w:?}");
            assert_eq!(c, expected);
        }
    }
}
