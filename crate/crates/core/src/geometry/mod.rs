//! Per-geometry recognizers.
//!
//! Each class has a membership searcher and a non-membership searcher. A
//! searcher either finishes with a certificate, gives up for good, or runs
//! out of steps. Certificates are re-verified from scratch before they are
//! reported.

mod search;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::AbelianInvariants;
use crate::cosets::{rs_presentation, CosetTable, SubgroupRecord};
use crate::hyperbolic::{AlgebraicRep, NonDfilCertificate};
use crate::isomorphism::{
    bieberbach_catalog, circle_bundle_entry, gamma_e_entry, s2r_catalog, spherical_catalog, torus_bundle_entry,
    CatalogEntry, IsoCertificate,
};
use crate::meter::{Exhausted, Meter};
use crate::nilpotent::NilObstruction;
use crate::oracle::{OracleHandle, PromiseSet};
use crate::presentation::{FinitePresentation, Word};
use crate::torsion::TorsionCertificate;

pub use search::{member_search, nonmember_search};
pub use verify::{basis, promises_used, verify_certificate};

/// The eight Thurston geometries, as classes of groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassId {
    Spherical,
    S2xR,
    Euclidean,
    Nil,
    Sol,
    H2xR,
    SL2R,
    Hyperbolic,
}

impl ClassId {
    pub const ALL: [ClassId; 8] = [
        ClassId::Spherical,
        ClassId::S2xR,
        ClassId::Euclidean,
        ClassId::Nil,
        ClassId::Sol,
        ClassId::H2xR,
        ClassId::SL2R,
        ClassId::Hyperbolic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassId::Spherical => "Spherical",
            ClassId::S2xR => "S2xR",
            ClassId::Euclidean => "Euclidean",
            ClassId::Nil => "Nil",
            ClassId::Sol => "Sol",
            ClassId::H2xR => "H2xR",
            ClassId::SL2R => "SL2R",
            ClassId::Hyperbolic => "Hyperbolic",
        }
    }

    pub fn parse(s: &str) -> Option<ClassId> {
        ClassId::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// Index bound for the finite-index subgroup searches of this class.
    pub fn index_bound(self) -> usize {
        match self {
            ClassId::Spherical => 240,
            ClassId::S2xR => 2,
            ClassId::Euclidean | ClassId::Nil => 12,
            ClassId::Sol => 8,
            ClassId::H2xR | ClassId::SL2R | ClassId::Hyperbolic => 1,
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Member,
    NonMember,
}

/// A finite-index subgroup, stored as the coset action of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupRef {
    pub permutations: Vec<Vec<usize>>,
}

impl SubgroupRef {
    pub fn from_table(t: &CosetTable) -> Self {
        SubgroupRef {
            permutations: t.permutations(),
        }
    }

    pub fn index(&self) -> usize {
        self.permutations.first().map_or(1, Vec::len)
    }

    /// Reidemeister–Schreier presentation and induced oracle, or `None` if
    /// the permutations do not define a coset action of `p`.
    pub fn rebuild(&self, p: &FinitePresentation, o: &OracleHandle) -> Option<(SubgroupRecord, OracleHandle)> {
        let table = if p.num_generators() == 0 {
            crate::cosets::todd_coxeter(p, &[], 1).ok()?
        } else {
            CosetTable::from_permutations(&self.permutations).ok()?
        };
        if table.num_generators() != p.num_generators() || !table.satisfies(p) {
            return None;
        }
        let record = rs_presentation(p, &table).ok()?;
        let induced = o.induced(record.embedding.clone());
        Some((record, induced))
    }
}

/// A model group that a certificate maps to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CatalogRef {
    Spherical { order: u64, id: String },
    S2xR { id: String },
    Bieberbach { id: String },
    GammaE { e: u64 },
    TorusBundle { monodromy: [[i64; 2]; 2] },
    CircleBundle { genus: usize, euler: i64 },
}

impl CatalogRef {
    /// Rebuilds the catalog entry from its parameters.
    pub fn resolve(&self) -> Option<CatalogEntry> {
        match self {
            CatalogRef::Spherical { order, id } => spherical_catalog(*order).into_iter().find(|e| &e.id == id),
            CatalogRef::S2xR { id } => s2r_catalog().into_iter().find(|e| &e.id == id),
            CatalogRef::Bieberbach { id } => bieberbach_catalog().into_iter().find(|e| &e.id == id),
            CatalogRef::GammaE { e } => gamma_e_entry(*e).ok(),
            CatalogRef::TorusBundle { monodromy } => torus_bundle_entry(*monodromy).ok(),
            CatalogRef::CircleBundle { genus, euler } => circle_bundle_entry(*genus, *euler).ok(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CatalogRef::Spherical { id, .. } => format!("the spherical group {id}"),
            CatalogRef::S2xR { id } => format!("the S2xR group {id}"),
            CatalogRef::Bieberbach { id } => format!("the flat manifold group {id}"),
            CatalogRef::GammaE { e } => format!("Gamma_{e}"),
            CatalogRef::TorusBundle { monodromy: a } => {
                format!("the torus bundle with monodromy [[{},{}],[{},{}]]", a[0][0], a[0][1], a[1][0], a[1][1])
            }
            CatalogRef::CircleBundle { genus, euler } => {
                format!("the circle bundle over the genus {genus} surface with Euler number {euler}")
            }
        }
    }
}

/// Shape of a commutator of powers that vanishes in every group with a
/// subgroup of the given kind and bounded index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerLaw {
    /// `[x, y]`
    Abelian,
    /// `[[x, y], z]`
    Class2,
    /// `[[x, y], [u, v]]`
    Metabelian,
}

impl PowerLaw {
    pub fn arity(self) -> usize {
        match self {
            PowerLaw::Abelian => 2,
            PowerLaw::Class2 => 3,
            PowerLaw::Metabelian => 4,
        }
    }

    /// The commutator word applied to `words`.
    pub fn word(self, words: &[Word]) -> Word {
        match self {
            PowerLaw::Abelian => Word::commutator(&words[0], &words[1]),
            PowerLaw::Class2 => Word::commutator(&Word::commutator(&words[0], &words[1]), &words[2]),
            PowerLaw::Metabelian => Word::commutator(
                &Word::commutator(&words[0], &words[1]),
                &Word::commutator(&words[2], &words[3]),
            ),
        }
    }
}

/// `lcm(1..=n)`: every element has this power inside any subgroup of index
/// at most `n`.
pub fn index_exponent(n: u64) -> u64 {
    (1..=n).fold(1, num_integer::lcm)
}

/// Invariant-based reasons for non-membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "obstruction", rename_all = "snake_case")]
pub enum Obstruction {
    InfiniteAbelianization { free_rank: usize },
    FiniteNotCatalogued { order: u64 },
    /// The law applied to the `exponent`-th powers of `words` is nontrivial.
    PowerCommutator { law: PowerLaw, exponent: u64, words: Vec<Word> },
    /// A finite-index subgroup that is abelian (`class = 1`) or nilpotent of
    /// class at most 2.
    VirtuallyNilpotent { subgroup: SubgroupRef, class: u8 },
    Deficiency { deficiency: i64 },
    AbelianizationPattern { h1: AbelianInvariants },
}

/// Why one subgroup class fails the class-specific test in a survey.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    NotFreeAbelian { rank: usize },
    FreeRank { free_rank: usize },
    NotMetabelian { words: Vec<Word> },
    NotBundle { obstruction: NilObstruction },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "snake_case")]
pub enum Certificate {
    /// The group, or a finite-index subgroup, is isomorphic to a model.
    Iso {
        target: CatalogRef,
        subgroup: Option<SubgroupRef>,
        map: IsoCertificate,
    },
    /// A finite-index subgroup is free abelian of the given rank.
    FreeAbelianSubgroup { subgroup: SubgroupRef, rank: usize },
    Torsion(TorsionCertificate),
    Obstruction(Obstruction),
    /// Every subgroup class of index at most `index_bound`, in the canonical
    /// low-index order, fails the class test.
    Survey { index_bound: usize, rejections: Vec<Rejection> },
    /// One non-DFIL certificate per supplied representation.
    NonDfil {
        reps: Vec<AlgebraicRep>,
        certificates: Vec<NonDfilCertificate>,
    },
}

impl Certificate {
    /// Coarse kind used in serialized reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Iso { .. } | Certificate::FreeAbelianSubgroup { .. } => "iso",
            Certificate::Torsion(_) => "torsion",
            Certificate::Obstruction(_) | Certificate::Survey { .. } => "invariant",
            Certificate::NonDfil { .. } => "nondfil",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Member { certificate: Certificate },
    NonMember { certificate: Certificate },
    Exhausted { steps: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub class: ClassId,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub assumed: PromiseSet,
    pub basis: Option<String>,
    pub steps: u64,
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self.outcome, Outcome::Member { .. })
    }

    pub fn is_nonmember(&self) -> bool {
        matches!(self.outcome, Outcome::NonMember { .. })
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.outcome, Outcome::Exhausted { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Outcome::Member { certificate } | Outcome::NonMember { certificate } => Some(certificate),
            Outcome::Exhausted { .. } => None,
        }
    }

    pub fn side(&self) -> Option<Side> {
        match self.outcome {
            Outcome::Member { .. } => Some(Side::Member),
            Outcome::NonMember { .. } => Some(Side::NonMember),
            Outcome::Exhausted { .. } => None,
        }
    }

    /// Short label: `Member`, `NonMember` or `Exhausted`.
    pub fn label(&self) -> &'static str {
        match self.outcome {
            Outcome::Member { .. } => "Member",
            Outcome::NonMember { .. } => "NonMember",
            Outcome::Exhausted { .. } => "Exhausted",
        }
    }
}

/// Everything a searcher may look at.
#[derive(Debug, Clone)]
pub struct Context {
    pub presentation: FinitePresentation,
    pub oracle: OracleHandle,
    /// Independent oracle instance used to re-verify certificates.
    pub verifier: OracleHandle,
    pub reps: Vec<AlgebraicRep>,
    pub reps_complete: bool,
}

impl Context {
    pub fn new(presentation: FinitePresentation, oracle: OracleHandle) -> Self {
        Context {
            presentation,
            verifier: oracle.clone(),
            oracle,
            reps: Vec::new(),
            reps_complete: false,
        }
    }

    pub fn with_verifier(mut self, verifier: OracleHandle) -> Self {
        self.verifier = verifier;
        self
    }

    pub fn with_reps(mut self, reps: Vec<AlgebraicRep>, complete: bool) -> Self {
        self.reps = reps;
        self.reps_complete = complete;
        self
    }
}

/// Result of one bounded searcher run: a certificate, a definite failure
/// (more steps would not help), or exhaustion.
pub type SearchResult = Result<Option<Certificate>, Exhausted>;

/// Step budget: total steps and the first per-searcher allowance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub total_steps: u64,
    pub quantum: u64,
}

impl Budget {
    pub fn new(total_steps: u64) -> Self {
        Budget {
            total_steps,
            quantum: (total_steps / 4096).max(256),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SearcherState {
    Live,
    Done,
}

/// Deterministic interleaving of the searchers of `classes`.
///
/// Rounds give every live searcher an allowance of `quantum * 2^r` steps
/// and rerun it from scratch; the non-membership side of a class goes
/// first. A certificate ends its class once it re-verifies; a searcher that
/// finishes without one drops out. Scheduling stops at the first searcher
/// whose allowance no longer fits in the remaining budget, so a larger
/// budget only extends the sequence of runs.
pub fn run_schedule(ctx: &Context, classes: &[ClassId], budget: Budget) -> Vec<Verdict> {
    let quantum = budget.quantum.max(1);
    let mut searchers: Vec<(ClassId, Side, SearcherState)> = classes
        .iter()
        .flat_map(|&c| [(c, Side::NonMember, SearcherState::Live), (c, Side::Member, SearcherState::Live)])
        .collect();
    let mut resolved: Vec<Option<(Side, Certificate)>> = vec![None; classes.len()];
    let mut steps = vec![0u64; classes.len()];
    let mut used = 0u64;
    'rounds: for round in 0..64 {
        let Some(allowance) = quantum.checked_shl(round).filter(|a| a >> round == quantum) else {
            break;
        };
        let mut any_live = false;
        for (class, side, state) in searchers.iter_mut() {
            let ci = classes.iter().position(|c| c == class).expect("listed class");
            if *state == SearcherState::Done || resolved[ci].is_some() {
                continue;
            }
            if used.saturating_add(allowance) > budget.total_steps {
                break 'rounds;
            }
            any_live = true;
            let mut meter = Meter::new(allowance);
            let result = match side {
                Side::Member => member_search(*class, ctx, &mut meter),
                Side::NonMember => nonmember_search(*class, ctx, &mut meter),
            };
            let spent = meter.used().min(allowance);
            used += spent;
            steps[ci] += spent;
            match result {
                Ok(Some(cert)) => {
                    if verify_certificate(ctx, *class, *side, &cert) {
                        resolved[ci] = Some((*side, cert));
                    } else {
                        *state = SearcherState::Done;
                    }
                }
                Ok(None) => *state = SearcherState::Done,
                Err(_) => {}
            }
        }
        if !any_live {
            break;
        }
    }
    classes
        .iter()
        .zip(resolved)
        .zip(steps)
        .map(|((&class, r), steps)| match r {
            Some((side, certificate)) => {
                let assumed = promises_used(class, &certificate);
                let basis = Some(basis(&ctx.presentation, class, &certificate));
                let outcome = match side {
                    Side::Member => Outcome::Member { certificate },
                    Side::NonMember => Outcome::NonMember { certificate },
                };
                Verdict {
                    class,
                    outcome,
                    assumed,
                    basis,
                    steps,
                }
            }
            None => Verdict {
                class,
                outcome: Outcome::Exhausted { steps },
                assumed: PromiseSet::default(),
                basis: None,
                steps,
            },
        })
        .collect()
}

/// Runs both searchers of one class under `budget`.
pub fn recognize(class: ClassId, ctx: &Context, budget: u64) -> Verdict {
    run_schedule(ctx, &[class], Budget::new(budget))
        .pop()
        .expect("one verdict per class")
}

pub fn recognize_spherical(p: &FinitePresentation, o: &OracleHandle, budget: u64) -> Verdict {
    recognize(ClassId::Spherical, &Context::new(p.clone(), o.clone()), budget)
}

pub fn recognize_s2xr(p: &FinitePresentation, o: &OracleHandle, budget: u64) -> Verdict {
    recognize(ClassId::S2xR, &Context::new(p.clone(), o.clone()), budget)
}

pub fn recognize_euclidean(p: &FinitePresentation, o: &OracleHandle, budget: u64) -> Verdict {
    recognize(ClassId::Euclidean, &Context::new(p.clone(), o.clone()), budget)
}

pub fn recognize_nil(p: &FinitePresentation, o: &OracleHandle, budget: u64) -> Verdict {
    recognize(ClassId::Nil, &Context::new(p.clone(), o.clone()), budget)
}

pub fn recognize_sol(p: &FinitePresentation, o: &OracleHandle, budget: u64) -> Verdict {
    recognize(ClassId::Sol, &Context::new(p.clone(), o.clone()), budget)
}

/// Circle-bundle recognizer for `H2xR` (`euler_zero`) or `SL2R`.
pub fn recognize_sf_minus(p: &FinitePresentation, o: &OracleHandle, euler_zero: bool, budget: u64) -> Verdict {
    let class = if euler_zero { ClassId::H2xR } else { ClassId::SL2R };
    recognize(class, &Context::new(p.clone(), o.clone()), budget)
}

pub fn recognize_hyperbolic(
    p: &FinitePresentation,
    o: &OracleHandle,
    reps: Vec<AlgebraicRep>,
    reps_complete: bool,
    budget: u64,
) -> Verdict {
    let ctx = Context::new(p.clone(), o.clone()).with_reps(reps, reps_complete);
    recognize(ClassId::Hyperbolic, &ctx, budget)
}
