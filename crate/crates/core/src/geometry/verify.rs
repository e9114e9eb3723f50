//! Independent re-verification of certificates, and their descriptions.

use crate::abelian::{abelianization, is_abelian, recognize_free_abelian};
use crate::cosets::{low_index_subgroups, todd_coxeter, CosetTable};
use crate::hyperbolic::check_rep;
use crate::isomorphism::{finite_table_iso, spherical_catalog, verify_iso};
use crate::nilpotent::{gamma_e_candidate, is_class2};
use crate::torsion::verify_torsion_cert;

use super::search::bundle_pattern;
use super::*;

/// Coset cap used when re-enumerating a finite group.
const FINITE_VERIFY_CAP: usize = 1 << 20;

/// Re-checks `cert` as evidence for `side` of `class`, using the verifier
/// oracle of `ctx` only.
pub fn verify_certificate(ctx: &Context, class: ClassId, side: Side, cert: &Certificate) -> bool {
    let p = &ctx.presentation;
    let o = &ctx.verifier;
    let torsion_free = o.promises().torsion_free;
    match (side, cert) {
        (Side::Member, Certificate::Iso { target, subgroup, map }) => {
            let Some(entry) = target.resolve() else {
                return false;
            };
            if entry.geometry != class {
                return false;
            }
            if class == ClassId::Sol && entry.param("sol") != Some(1) {
                return false;
            }
            match subgroup {
                None => verify_iso(p, o, &entry, map).unwrap_or(false),
                Some(s) => {
                    let deep = s.index() > 1;
                    if deep
                        && !(torsion_free
                            && matches!(class, ClassId::Euclidean | ClassId::Nil | ClassId::Sol)
                            && s.index() <= class.index_bound())
                    {
                        return false;
                    }
                    let Some((record, so)) = s.rebuild(p, o) else {
                        return false;
                    };
                    verify_iso(&record.presentation, &so, &entry, map).unwrap_or(false)
                }
            }
        }
        (Side::Member, Certificate::FreeAbelianSubgroup { subgroup, rank }) => {
            let allowed = match class {
                ClassId::S2xR => *rank == 1 && subgroup.index() <= 2,
                ClassId::Euclidean => {
                    *rank == 3 && subgroup.index() <= class.index_bound() && (torsion_free || subgroup.index() == 1)
                }
                _ => false,
            };
            allowed
                && subgroup
                    .rebuild(p, o)
                    .is_some_and(|(record, so)| recognize_free_abelian(&record.presentation, &so, *rank))
        }
        (Side::NonMember, Certificate::Torsion(c)) => {
            matches!(
                class,
                ClassId::Euclidean | ClassId::Nil | ClassId::Sol | ClassId::H2xR | ClassId::SL2R
            ) && verify_torsion_cert(p, o, c) == Ok(true)
        }
        (Side::NonMember, Certificate::Obstruction(ob)) => verify_obstruction(ctx, class, ob),
        (Side::NonMember, Certificate::Survey { index_bound, rejections }) => {
            verify_survey(ctx, class, *index_bound, rejections)
        }
        (Side::NonMember, Certificate::NonDfil { reps, certificates }) => {
            class == ClassId::Hyperbolic
                && ctx.reps_complete
                && reps == &ctx.reps
                && reps.len() == certificates.len()
                && reps
                    .iter()
                    .zip(certificates)
                    .all(|(r, c)| check_rep(p, r).unwrap_or(false) && c.verify(o, r))
        }
        _ => false,
    }
}

fn verify_obstruction(ctx: &Context, class: ClassId, ob: &Obstruction) -> bool {
    let p = &ctx.presentation;
    let o = &ctx.verifier;
    match ob {
        Obstruction::InfiniteAbelianization { free_rank } => {
            class == ClassId::Spherical && *free_rank > 0 && abelianization(p).free_rank == *free_rank
        }
        Obstruction::FiniteNotCatalogued { order } => {
            class == ClassId::Spherical && finite_not_catalogued(p, *order)
        }
        Obstruction::PowerCommutator { law, exponent, words } => {
            let (expected, bound) = match class {
                ClassId::Euclidean => (PowerLaw::Abelian, ClassId::Euclidean.index_bound()),
                ClassId::Nil => (PowerLaw::Class2, ClassId::Nil.index_bound()),
                ClassId::Sol => (PowerLaw::Metabelian, ClassId::Sol.index_bound()),
                _ => return false,
            };
            if *law != expected || words.len() != law.arity() || *exponent == 0 {
                return false;
            }
            if exponent % index_exponent(bound as u64) != 0 {
                return false;
            }
            if words.iter().flat_map(|w| w.letters()).any(|l| l.generator() >= p.num_generators()) {
                return false;
            }
            let Ok(e) = i64::try_from(*exponent) else {
                return false;
            };
            let powers: Vec<Word> = words.iter().map(|w| w.pow(e)).collect();
            o.decide(&law.word(&powers)).is_ok_and(|d| d == crate::oracle::Decision::Nontrivial)
        }
        Obstruction::VirtuallyNilpotent { subgroup, class: c } => {
            let excluded = match c {
                1 => matches!(class, ClassId::Nil | ClassId::Sol | ClassId::H2xR | ClassId::SL2R),
                2 => matches!(class, ClassId::Sol | ClassId::H2xR | ClassId::SL2R),
                _ => false,
            };
            excluded
                && subgroup.rebuild(p, o).is_some_and(|(record, so)| {
                    if *c == 1 {
                        is_abelian(&record.presentation, &so)
                    } else {
                        is_class2(&record.presentation, &so)
                    }
                })
        }
        Obstruction::Deficiency { deficiency } => {
            matches!(class, ClassId::H2xR | ClassId::SL2R) && *deficiency >= 2 && p.deficiency() == *deficiency
        }
        Obstruction::AbelianizationPattern { h1 } => {
            matches!(class, ClassId::H2xR | ClassId::SL2R)
                && o.promises().three_manifold
                && abelianization(p) == *h1
                && bundle_pattern(class, h1).is_none()
        }
    }
}

/// The group is finite of order `order` and matches no catalogued spherical
/// group of that order.
fn finite_not_catalogued(p: &FinitePresentation, order: u64) -> bool {
    let Ok(table) = todd_coxeter(p, &[], FINITE_VERIFY_CAP) else {
        return false;
    };
    if table.index() as u64 != order {
        return false;
    }
    let h1 = abelianization(p);
    spherical_catalog(order).iter().all(|entry| {
        if entry.expected_abelianization != h1 {
            return true;
        }
        let Ok(target) = todd_coxeter(&entry.presentation, &[], FINITE_VERIFY_CAP) else {
            return false;
        };
        matches!(finite_table_iso(&table, &target, &mut Meter::unlimited()), Ok(None))
    })
}

fn verify_survey(ctx: &Context, class: ClassId, index_bound: usize, rejections: &[Rejection]) -> bool {
    if index_bound != class.index_bound() {
        return false;
    }
    let shape_ok = |r: &Rejection| match class {
        ClassId::S2xR => matches!(r, Rejection::NotFreeAbelian { rank: 1 }),
        ClassId::Euclidean => matches!(r, Rejection::NotFreeAbelian { rank: 3 }),
        ClassId::Nil => matches!(r, Rejection::NotBundle { .. }),
        ClassId::Sol => matches!(r, Rejection::FreeRank { .. } | Rejection::NotMetabelian { .. }),
        _ => false,
    };
    if !rejections.iter().all(shape_ok) {
        return false;
    }
    let p = &ctx.presentation;
    let o = &ctx.verifier;
    let Ok(tables) = low_index_subgroups(p, index_bound) else {
        return false;
    };
    tables.len() == rejections.len()
        && tables.iter().zip(rejections).all(|(t, r)| recheck_rejection(p, o, t, r))
}

fn recheck_rejection(p: &FinitePresentation, o: &OracleHandle, t: &CosetTable, r: &Rejection) -> bool {
    let Some((record, so)) = SubgroupRef::from_table(t).rebuild(p, o) else {
        return false;
    };
    let sp = &record.presentation;
    match r {
        Rejection::NotFreeAbelian { rank } => !recognize_free_abelian(sp, &so, *rank),
        Rejection::FreeRank { free_rank } => *free_rank != 1 && abelianization(sp).free_rank == *free_rank,
        Rejection::NotMetabelian { words } => {
            words.len() == 4
                && words
                    .iter()
                    .flat_map(|w| w.letters())
                    .all(|l| l.generator() < sp.num_generators())
                && !so.is_trivial(&PowerLaw::Metabelian.word(words))
        }
        Rejection::NotBundle { obstruction } => gamma_e_candidate(sp, &so).as_ref() == Err(obstruction),
    }
}

/// Promises a verified certificate relies on.
pub fn promises_used(_class: ClassId, cert: &Certificate) -> PromiseSet {
    let base = PromiseSet::sound();
    match cert {
        Certificate::Iso {
            subgroup: Some(s), ..
        } if s.index() > 1 => base.with_torsion_free(),
        Certificate::FreeAbelianSubgroup { rank: 3, .. } => base.with_torsion_free(),
        Certificate::Obstruction(Obstruction::AbelianizationPattern { .. }) => base.with_three_manifold(),
        _ => base,
    }
}

fn s2xr_name(p: &FinitePresentation) -> &'static str {
    let h1 = abelianization(p);
    match (h1.free_rank, h1.factors_u64().as_slice()) {
        (1, []) => "Z",
        (1, [2]) => "Z x Z/2",
        _ => "D_inf",
    }
}

/// One-line description of the fact a certificate establishes.
pub fn basis(p: &FinitePresentation, class: ClassId, cert: &Certificate) -> String {
    match cert {
        Certificate::Iso {
            target,
            subgroup: None,
            ..
        } => format!("isomorphic to {}", target.describe()),
        Certificate::Iso {
            target,
            subgroup: Some(s),
            ..
        } => format!(
            "torsion-free with a subgroup of index {} isomorphic to {}",
            s.index(),
            target.describe()
        ),
        Certificate::FreeAbelianSubgroup { subgroup, rank } if class == ClassId::S2xR => format!(
            "virtually infinite cyclic (subgroup of index {}), hence {}",
            subgroup.index(),
            s2xr_name(p)
        ),
        Certificate::FreeAbelianSubgroup { subgroup, rank } => format!(
            "torsion-free with a free abelian subgroup of rank {rank} and index {}",
            subgroup.index()
        ),
        Certificate::Torsion(c) => format!(
            "has an element of order {}, while groups of this geometry are torsion-free",
            c.n
        ),
        Certificate::Obstruction(ob) => match ob {
            Obstruction::InfiniteAbelianization { free_rank } => {
                format!("abelianization has free rank {free_rank}, so the group is infinite")
            }
            Obstruction::FiniteNotCatalogued { order } => {
                format!("finite of order {order} and not isomorphic to any catalogued spherical group")
            }
            Obstruction::PowerCommutator { law, exponent, .. } => format!(
                "a {} law fails on {exponent}-th powers, so no subgroup of bounded index satisfies it",
                match law {
                    PowerLaw::Abelian => "commutative",
                    PowerLaw::Class2 => "class-2 nilpotent",
                    PowerLaw::Metabelian => "metabelian",
                }
            ),
            Obstruction::VirtuallyNilpotent { subgroup, class: 1 } => {
                format!("has an abelian subgroup of index {}", subgroup.index())
            }
            Obstruction::VirtuallyNilpotent { subgroup, .. } => {
                format!("has a nilpotent subgroup of class at most 2 and index {}", subgroup.index())
            }
            Obstruction::Deficiency { deficiency } => {
                format!("presentation has deficiency {deficiency}, above what a closed aspherical 3-manifold allows")
            }
            Obstruction::AbelianizationPattern { .. } => {
                "abelianization matches no circle bundle of this kind".to_string()
            }
        },
        Certificate::Survey { index_bound, rejections } => format!(
            "none of the {} subgroup classes of index at most {index_bound} has the required form",
            rejections.len()
        ),
        Certificate::NonDfil { reps, .. } => format!(
            "each of the {} supplied representations is non-discrete, non-faithful or has a non-loxodromic image",
            reps.len()
        ),
    }
}
