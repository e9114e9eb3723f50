//! Word problem oracles.
//!
//! An [`OracleHandle`] is a total decision procedure for the word problem of
//! one group, together with the promises under which its answers are taken
//! to be correct. Every recognizer is parameterized by one.

pub mod polycyclic;
pub mod surface;

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{relation_matrix, IntMatrix, RowLattice};
use crate::cosets::{permutation_image_from, todd_coxeter, CosetTable};
use crate::presentation::{FinitePresentation, Letter, Word};

pub use polycyclic::{PcBuilder, PcElement, PcError, PcPresentation, PcSpec};
pub use surface::{surface_relator, DehnReducer, SurfaceCentral};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    Trivial,
    Nontrivial,
}

/// Declared assumptions conditioning a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PromiseSet {
    pub oracle_sound: bool,
    pub torsion_free: bool,
    pub three_manifold: bool,
}

impl PromiseSet {
    pub fn sound() -> Self {
        PromiseSet {
            oracle_sound: true,
            ..Default::default()
        }
    }

    pub fn with_torsion_free(mut self) -> Self {
        self.torsion_free = true;
        self
    }

    pub fn with_three_manifold(mut self) -> Self {
        self.three_manifold = true;
        self
    }

    pub fn is_subset_of(&self, other: &PromiseSet) -> bool {
        (!self.oracle_sound || other.oracle_sound)
            && (!self.torsion_free || other.torsion_free)
            && (!self.three_manifold || other.three_manifold)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.oracle_sound {
            v.push("oracle-sound");
        }
        if self.torsion_free {
            v.push("torsion-free");
        }
        if self.three_manifold {
            v.push("three-manifold");
        }
        v
    }

    /// Parses a CLI promise name.
    pub fn add(&mut self, name: &str) -> Result<(), OracleError> {
        match name {
            "torsion-free" => self.torsion_free = true,
            "three-manifold" => self.three_manifold = true,
            "oracle-sound" => self.oracle_sound = true,
            other => return Err(OracleError::Spec(format!("unknown promise {other:?}"))),
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("generator index {index} out of range for an oracle on {num_generators} generators")]
    OutOfRange { index: usize, num_generators: usize },
    #[error("coset enumeration did not close within {0} cosets; group not proven finite at this bound")]
    Overflow(usize),
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error("oracle has {oracle} generators but the presentation has {presentation}")]
    Arity { oracle: usize, presentation: usize },
    #[error("bad oracle spec: {0}")]
    Spec(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing polycyclic file: {0}")]
    Json(#[from] serde_json::Error),
}

/// The decision function behind an oracle.
pub trait WordProblem: Send + Sync {
    fn is_trivial(&self, w: &Word) -> bool;

    /// Like `is_trivial`, but may report that the word is beyond the
    /// oracle's capacity.
    fn try_is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        Ok(self.is_trivial(w))
    }
}

impl<F: Fn(&Word) -> bool + Send + Sync> WordProblem for F {
    fn is_trivial(&self, w: &Word) -> bool {
        self(w)
    }
}

/// Adapter for decision functions that can fail.
struct Fallible<F>(F);

impl<F: Fn(&Word) -> Result<bool, OracleError> + Send + Sync> WordProblem for Fallible<F> {
    fn is_trivial(&self, w: &Word) -> bool {
        (self.0)(w).expect("word within oracle capacity")
    }

    fn try_is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        (self.0)(w)
    }
}

#[derive(Clone)]
pub struct OracleHandle {
    inner: Arc<dyn WordProblem>,
    num_generators: usize,
    promises: PromiseSet,
    description: String,
}

impl fmt::Debug for OracleHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleHandle")
            .field("num_generators", &self.num_generators)
            .field("promises", &self.promises)
            .field("description", &self.description)
            .finish()
    }
}

/// Result of [`OracleHandle::order_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementOrder {
    Finite(u64),
    ExceedsBound,
}

impl OracleHandle {
    pub fn new(
        num_generators: usize,
        description: impl Into<String>,
        decide: impl WordProblem + 'static,
    ) -> Self {
        OracleHandle {
            inner: Arc::new(decide),
            num_generators,
            promises: PromiseSet::sound(),
            description: description.into(),
        }
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn promises(&self) -> PromiseSet {
        self.promises
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Adds user-declared promises. `OracleSound` is always kept.
    pub fn with_promises(mut self, promises: PromiseSet) -> Self {
        self.promises = PromiseSet {
            oracle_sound: true,
            torsion_free: promises.torsion_free,
            three_manifold: promises.three_manifold,
        };
        self
    }

    pub fn decide(&self, w: &Word) -> Result<Decision, OracleError> {
        if let Some(g) = w.max_generator() {
            if g >= self.num_generators {
                return Err(OracleError::OutOfRange {
                    index: g,
                    num_generators: self.num_generators,
                });
            }
        }
        Ok(if self.inner.try_is_trivial(&w.free_reduce())? {
            Decision::Trivial
        } else {
            Decision::Nontrivial
        })
    }

    /// Like [`decide`](Self::decide), panicking on out-of-range generators
    /// or words beyond the oracle's capacity.
    pub fn is_trivial(&self, w: &Word) -> bool {
        self.decide(w).expect("word decidable by the oracle") == Decision::Trivial
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// Least `n <= bound` with `w^n = 1`, scanning linearly.
    pub fn order_of(&self, w: &Word, bound: u64) -> ElementOrder {
        let w = w.free_reduce();
        let mut acc = Word::empty();
        for n in 1..=bound {
            acc = acc.concat(&w);
            if self.is_trivial(&acc) {
                return ElementOrder::Finite(n);
            }
        }
        ElementOrder::ExceedsBound
    }

    /// Oracle for the subgroup generated by `embedding`: a word in the
    /// subgroup generators is decided through its image in the ambient group.
    pub fn induced(&self, embedding: Vec<Word>) -> OracleHandle {
        let parent = self.clone();
        let n = embedding.len();
        let description = format!("induced from {}", self.description);
        let promises = self.promises;
        let emb = embedding;
        OracleHandle::new(
            n,
            description,
            Fallible(move |w: &Word| Ok(parent.decide(&w.substitute(&emb))? == Decision::Trivial)),
        )
        .with_promises(promises)
    }
}

/// Word problem of the free group of rank `n`.
pub fn free_oracle(n: usize) -> OracleHandle {
    OracleHandle::new(n, format!("free group of rank {n}"), |w: &Word| {
        w.free_reduce().is_empty()
    })
}

/// Word problem of the abelian group presented by the rows of `m`.
pub fn abelian_oracle(m: &IntMatrix) -> OracleHandle {
    let n = m.cols();
    let lattice = RowLattice::new(m);
    OracleHandle::new(n, format!("abelian group with {} relations", m.rows()), move |w: &Word| {
        lattice.contains(&w.exponent_sums(n))
    })
}

/// Word problem of a finite group via its regular coset table.
pub fn finite_oracle(p: &FinitePresentation, max_cosets: usize) -> Result<OracleHandle, OracleError> {
    let table = todd_coxeter(p, &[], max_cosets).map_err(|_| OracleError::Overflow(max_cosets))?;
    let description = format!("finite group of order {}", table.index());
    Ok(regular_oracle(table, description))
}

/// Oracle from a regular (trivial-subgroup) coset table.
pub fn regular_oracle(table: CosetTable, description: String) -> OracleHandle {
    let n = table.num_generators();
    let table = Arc::new(table);
    OracleHandle::new(n, description, move |w: &Word| {
        permutation_image_from(&table, 0, w) == 0
    })
}

/// Word problem of a polycyclic group. `images[i]` is the collected image of
/// the `i`-th presentation generator; `None` means the pc generators themselves.
pub fn polycyclic_oracle(pc: PcPresentation, images: Option<Vec<PcElement>>) -> OracleHandle {
    let images = images.unwrap_or_else(|| (0..pc.len()).map(|i| pc.generator(i)).collect());
    let inverses: Vec<PcElement> = images.iter().map(|x| pc.inverse(x)).collect();
    let n = images.len();
    let description = format!("polycyclic group on {}", pc.names().join(","));
    OracleHandle::new(
        n,
        description,
        Fallible(move |w: &Word| {
            let mut acc = pc.identity();
            for l in w.letters() {
                let x = if l.is_inverse() {
                    &inverses[l.generator()]
                } else {
                    &images[l.generator()]
                };
                acc = pc.try_mul(&acc, x)?;
            }
            Ok(pc.is_identity(&acc))
        }),
    )
}

/// Word problem of `Gamma_{g,e}`.
pub fn surface_central_oracle(genus: usize, euler: i64) -> OracleHandle {
    let s = SurfaceCentral::new(genus, euler);
    OracleHandle::new(
        2 * genus + 1,
        format!("central extension of the genus-{genus} surface group, Euler number {euler}"),
        move |w: &Word| s.is_trivial(w),
    )
}

/// Parsed CLI oracle specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleSpec {
    Free,
    /// `None`: relation matrix of the input presentation.
    Abelian(Option<Vec<Vec<i64>>>),
    Finite(usize),
    Pc(String),
    Surface(usize, i64),
    SelfFinite,
}

impl OracleSpec {
    pub fn parse(s: &str) -> Result<Self, OracleError> {
        let bad = || OracleError::Spec(s.to_string());
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("free", None) => Ok(OracleSpec::Free),
            ("self", None) => Ok(OracleSpec::SelfFinite),
            ("abelian", None) => Ok(OracleSpec::Abelian(None)),
            ("abelian", Some(a)) => {
                let rows = a
                    .split(';')
                    .map(str::trim)
                    .filter(|r| !r.is_empty())
                    .map(|r| {
                        r.split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|x| !x.is_empty())
                            .map(|x| x.parse::<i64>().map_err(|_| bad()))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(OracleSpec::Abelian(Some(rows)))
            }
            ("finite", Some(a)) => Ok(OracleSpec::Finite(a.trim().parse().map_err(|_| bad())?)),
            ("pc", Some(a)) => Ok(OracleSpec::Pc(a.to_string())),
            ("surface", Some(a)) => {
                let (g, e) = a.split_once(',').ok_or_else(bad)?;
                let g: usize = g.trim().parse().map_err(|_| bad())?;
                let e: i64 = e.trim().parse().map_err(|_| bad())?;
                if g < 2 {
                    return Err(OracleError::Spec("surface oracle needs genus >= 2".into()));
                }
                Ok(OracleSpec::Surface(g, e))
            }
            _ => Err(bad()),
        }
    }

    /// Builds the oracle for `p`. Relative `pc:` paths resolve against `base`.
    pub fn build(&self, p: &FinitePresentation, base: Option<&Path>) -> Result<OracleHandle, OracleError> {
        let o = match self {
            OracleSpec::Free => free_oracle(p.num_generators()),
            OracleSpec::Abelian(None) => abelian_oracle(&relation_matrix(p)),
            OracleSpec::Abelian(Some(rows)) => {
                let n = p.num_generators();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(OracleError::Spec(format!(
                        "abelian matrix rows must have {n} entries"
                    )));
                }
                abelian_oracle(&IntMatrix::from_rows(n, rows))
            }
            OracleSpec::Finite(max) => finite_oracle(p, *max)?,
            OracleSpec::SelfFinite => finite_oracle(p, crate::cosets::DEFAULT_MAX_COSETS)?,
            OracleSpec::Pc(path) => {
                let full = match base {
                    Some(b) if Path::new(path).is_relative() => b.join(path),
                    _ => Path::new(path).to_path_buf(),
                };
                let text = std::fs::read_to_string(&full).map_err(|source| OracleError::Io {
                    path: full.display().to_string(),
                    source,
                })?;
                let spec: PcSpec = serde_json::from_str(&text)?;
                let pc = PcPresentation::from_spec(&spec)?;
                polycyclic_oracle(pc, spec.images.clone())
            }
            OracleSpec::Surface(g, e) => surface_central_oracle(*g, *e),
        };
        if o.num_generators() != p.num_generators() {
            return Err(OracleError::Arity {
                oracle: o.num_generators(),
                presentation: p.num_generators(),
            });
        }
        Ok(o)
    }
}

/// Randomized consistency checks every oracle must pass: `u u^-1 = 1`,
/// decisions invariant under inversion and conjugation, relators trivial.
pub fn self_test(o: &OracleHandle, p: Option<&FinitePresentation>, seed: u64, pairs: usize) -> Result<(), String> {
    let n = o.num_generators();
    if !o.is_trivial(&Word::empty()) {
        return Err("empty word is not trivial".into());
    }
    if let Some(p) = p {
        for r in p.relators() {
            if !o.is_trivial(r) {
                return Err(format!("relator {} is not trivial", p.format_word(r)));
            }
        }
    }
    if n == 0 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_word = |rng: &mut ChaCha8Rng, max: usize| -> Word {
        let len = rng.gen_range(0..=max);
        (0..len)
            .map(|_| Letter::new(rng.gen_range(0..n), rng.gen_bool(0.5)))
            .collect()
    };
    for _ in 0..pairs {
        let u = random_word(&mut rng, 8);
        let g = random_word(&mut rng, 4);
        if !o.is_trivial(&u.concat(&u.inverse())) {
            return Err(format!("{u:?} times its inverse is not trivial"));
        }
        let d = o.is_trivial(&u);
        if d != o.is_trivial(&u.inverse()) {
            return Err(format!("decision differs on {u:?} and its inverse"));
        }
        if d != o.is_trivial(&u.conjugate_by(&g)) {
            return Err(format!("decision differs on {u:?} and its conjugate by {g:?}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn w(v: &[i32]) -> Word {
        Word::from_signed(v)
    }

    #[test]
    fn free_examples() {
        let o = free_oracle(2);
        assert_eq!(o.decide(&w(&[1, 2, -1, -2])).unwrap(), Decision::Nontrivial);
        assert_eq!(o.decide(&w(&[1, 2, -2, -1])).unwrap(), Decision::Trivial);
        assert_eq!(free_oracle(0).decide(&Word::empty()).unwrap(), Decision::Trivial);
        assert!(matches!(o.decide(&w(&[3])), Err(OracleError::OutOfRange { index: 2, .. })));
    }

    #[test]
    fn abelian_examples() {
        let z2 = abelian_oracle(&IntMatrix::zeros(0, 2));
        assert!(z2.is_trivial(&w(&[1, 2, -1, -2])));
        let c5 = abelian_oracle(&IntMatrix::from_rows(1, &[vec![5]]));
        assert!(!c5.is_trivial(&Word::generator(0).pow(7)));
        assert!(c5.is_trivial(&Word::generator(0).pow(10)));
        let zz2 = abelian_oracle(&IntMatrix::from_rows(2, &[vec![0, 2]]));
        assert!(zz2.is_trivial(&w(&[2, 2])));
        assert!(!zz2.is_trivial(&w(&[1, 2, 2])));
    }

    #[test]
    fn finite_examples() {
        let c5 = parse_presentation("<a | a^5>").unwrap();
        let o = finite_oracle(&c5, 100).unwrap();
        assert!(o.is_trivial(&Word::generator(0).pow(5)));
        assert!(!o.is_trivial(&Word::generator(0).pow(3)));
        let q8 = parse_presentation("<a,b | a^4, a^2 b^-2, b^-1 a b a>").unwrap();
        let o = finite_oracle(&q8, 100).unwrap();
        assert!(o.is_trivial(&w(&[1, 1, -2, -2])));
        let f2 = parse_presentation("<a,b|>").unwrap();
        assert!(matches!(finite_oracle(&f2, 1000), Err(OracleError::Overflow(_))));
    }

    #[test]
    fn order_examples() {
        let o = free_oracle(1);
        assert_eq!(o.order_of(&Word::generator(0), 100), ElementOrder::ExceedsBound);
        let c5 = abelian_oracle(&IntMatrix::from_rows(1, &[vec![5]]));
        assert_eq!(c5.order_of(&Word::generator(0).pow(2), 10), ElementOrder::Finite(5));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(OracleSpec::parse("free").unwrap(), OracleSpec::Free);
        assert_eq!(OracleSpec::parse("surface:2,3").unwrap(), OracleSpec::Surface(2, 3));
        assert_eq!(
            OracleSpec::parse("abelian:0,2").unwrap(),
            OracleSpec::Abelian(Some(vec![vec![0, 2]]))
        );
        assert_eq!(OracleSpec::parse("finite:500").unwrap(), OracleSpec::Finite(500));
        assert!(OracleSpec::parse("surface:1,0").is_err());
        assert!(OracleSpec::parse("magic").is_err());
    }

    #[test]
    fn promises() {
        let mut p = PromiseSet::sound();
        p.add("torsion-free").unwrap();
        assert!(p.torsion_free);
        assert!(p.add("bogus").is_err());
        assert!(PromiseSet::sound().is_subset_of(&p));
        assert!(!p.is_subset_of(&PromiseSet::sound()));
    }
}
