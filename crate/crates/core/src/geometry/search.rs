//! The membership and non-membership searchers of each class.

use crate::abelian::{abelianization, is_abelian, recognize_free_abelian};
use crate::cosets::{low_index_subgroups_metered, rs_presentation, todd_coxeter_metered, CosetError, CosetTable};
use crate::hyperbolic::{search_nondfil, NonDfilSearch};
use crate::isomorphism::{
    bieberbach_catalog, circle_bundle_entry, finite_table_iso, search_iso, search_iso_seeded, spherical_catalog,
    torus_bundle_entry, verify_iso, CatalogEntry, IsoSearch,
};
use crate::nilpotent::{gamma_e_candidate, is_class2, recognize_gamma_e, GammaSearch};
use crate::presentation::{enumerate_words, FinitePresentation, Word};
use crate::torsion::{permutation_order, search_torsion_cert, TorsionCertificate, TorsionSearch, TorsionSearchConfig};

use crate::oracle::Decision;

use super::*;

/// Longest image word tried by blind isomorphism searches.
const ISO_WORD_LEN: usize = 3;
const NONDFIL_WORD_LEN: usize = 6;
const POWER_TUPLE_CAP: usize = 48;
const MONODROMY_BOUND: i64 = 20;
/// Coset cap of the regular-representation attempt in the torsion stage.
const TORSION_TC_CAP: usize = 2048;

pub fn member_search(class: ClassId, ctx: &Context, meter: &mut Meter) -> SearchResult {
    match class {
        ClassId::Spherical => spherical_member(ctx, meter),
        ClassId::S2xR => s2xr_member(ctx, meter),
        ClassId::Euclidean => euclidean_member(ctx, meter),
        ClassId::Nil => nil_member(ctx, meter),
        ClassId::Sol => sol_member(ctx, meter),
        ClassId::H2xR | ClassId::SL2R => sf_minus_member(class, ctx, meter),
        // Positive hyperbolic certification is out of reach of this crate.
        ClassId::Hyperbolic => Ok(None),
    }
}

pub fn nonmember_search(class: ClassId, ctx: &Context, meter: &mut Meter) -> SearchResult {
    match class {
        ClassId::Spherical => spherical_nonmember(ctx, meter),
        ClassId::S2xR => s2xr_nonmember(ctx, meter),
        ClassId::Euclidean => euclidean_nonmember(ctx, meter),
        ClassId::Nil => nil_nonmember(ctx, meter),
        ClassId::Sol => sol_nonmember(ctx, meter),
        ClassId::H2xR | ClassId::SL2R => sf_minus_nonmember(class, ctx, meter),
        ClassId::Hyperbolic => hyperbolic_nonmember(ctx, meter),
    }
}

fn out_of_steps(meter: &Meter) -> Exhausted {
    Exhausted { limit: meter.limit() }
}

/// Conjugacy class representatives of subgroups of index at most `k`;
/// `None` if the enumeration fails for a reason other than the meter.
fn subgroup_tables(p: &FinitePresentation, k: usize, meter: &mut Meter) -> Result<Option<Vec<CosetTable>>, Exhausted> {
    match low_index_subgroups_metered(p, k, meter) {
        Ok(t) => Ok(Some(t)),
        Err(CosetError::Exhausted(e)) => Err(e),
        Err(_) => Ok(None),
    }
}

fn tables_of_index(p: &FinitePresentation, k: usize, meter: &mut Meter) -> Result<Vec<CosetTable>, Exhausted> {
    Ok(subgroup_tables(p, k, meter)?
        .unwrap_or_default()
        .into_iter()
        .filter(|t| t.index() == k)
        .collect())
}

/// Subgroup presentation and induced oracle for a coset table.
fn subgroup(
    ctx: &Context,
    t: &CosetTable,
    meter: &mut Meter,
) -> Result<Option<(FinitePresentation, OracleHandle, Vec<Word>)>, Exhausted> {
    let p = &ctx.presentation;
    meter.charge(1 + (t.index() * (p.num_generators() + p.total_length())) as u64 / 4)?;
    let Ok(record) = rs_presentation(p, t) else {
        return Ok(None);
    };
    let induced = ctx.oracle.induced(record.embedding.clone());
    Ok(Some((record.presentation, induced, record.embedding)))
}

fn index_one(p: &FinitePresentation) -> SubgroupRef {
    SubgroupRef {
        permutations: vec![vec![0]; p.num_generators()],
    }
}

fn charge_pairs(n: usize, meter: &mut Meter) -> Result<(), Exhausted> {
    meter.charge(1 + (n * n) as u64)
}

/// Interprets an iso search outcome, separating exhaustion from failure.
fn iso_outcome(r: IsoSearch, meter: &Meter) -> Result<Option<IsoCertificate>, Exhausted> {
    match r {
        IsoSearch::Found(c) => Ok(Some(c)),
        IsoSearch::Exhausted if meter.is_exhausted() => Err(out_of_steps(meter)),
        IsoSearch::Exhausted => Ok(None),
    }
}

/// Seeded isomorphism attempts against every entry, then full searches.
fn catalog_iso(
    p: &FinitePresentation,
    o: &OracleHandle,
    entries: &[(CatalogRef, CatalogEntry)],
    meter: &mut Meter,
) -> Result<Option<(CatalogRef, IsoCertificate)>, Exhausted> {
    let h1 = abelianization(p);
    let matching: Vec<&(CatalogRef, CatalogEntry)> =
        entries.iter().filter(|(_, e)| e.expected_abelianization == h1).collect();
    for (r, e) in &matching {
        if let Some(c) = search_iso_seeded(p, o, e, meter)? {
            return Ok(Some((r.clone(), c)));
        }
    }
    for (r, e) in &matching {
        if let Some(c) = iso_outcome(search_iso(p, o, e, ISO_WORD_LEN, meter), meter)? {
            return Ok(Some((r.clone(), c)));
        }
    }
    Ok(None)
}

// ---- torsion and power laws ----

/// Torsion certificate from the regular representation of a small finite
/// group.
fn regular_torsion(ctx: &Context, meter: &mut Meter) -> Result<Option<TorsionCertificate>, Exhausted> {
    let p = &ctx.presentation;
    if ctx.oracle.promises().torsion_free || p.num_generators() == 0 {
        return Ok(None);
    }
    match todd_coxeter_metered(p, &[], TORSION_TC_CAP, meter) {
        Ok(t) if t.index() > 1 => {
            let perms = t.permutations();
            for g in 0..p.num_generators() {
                let n = permutation_order(&perms[g]);
                if n >= 2 {
                    return Ok(Some(TorsionCertificate {
                        w: Word::generator(g),
                        n,
                        quotient: perms,
                    }));
                }
            }
            Ok(None)
        }
        Err(CosetError::Exhausted(e)) => Err(e),
        _ => Ok(None),
    }
}

/// Torsion certificate from coset actions of low-index subgroups.
fn coset_torsion(ctx: &Context, meter: &mut Meter) -> Result<Option<TorsionCertificate>, Exhausted> {
    let (p, o) = (&ctx.presentation, &ctx.oracle);
    if o.promises().torsion_free || p.num_generators() == 0 {
        return Ok(None);
    }
    match search_torsion_cert(p, o, TorsionSearchConfig::default(), meter) {
        TorsionSearch::Found(c) => Ok(Some(c)),
        TorsionSearch::Exhausted if meter.is_exhausted() => Err(out_of_steps(meter)),
        TorsionSearch::Exhausted => Ok(None),
    }
}

fn torsion_stage(ctx: &Context, meter: &mut Meter) -> Result<Option<TorsionCertificate>, Exhausted> {
    match regular_torsion(ctx, meter)? {
        Some(c) => Ok(Some(c)),
        None => coset_torsion(ctx, meter),
    }
}

/// Generators, then products of two distinct generators.
fn power_candidates(n: usize) -> Vec<Word> {
    let mut out: Vec<Word> = (0..n).map(Word::generator).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Word::generator(i).concat(&Word::generator(j)));
        }
    }
    out
}

/// Index tuples for a law, in a fixed order, capped.
fn law_tuples(law: PowerLaw, m: usize) -> Vec<Vec<usize>> {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let tuples: Vec<Vec<usize>> = match law {
        PowerLaw::Abelian => pairs.iter().map(|&(i, j)| vec![i, j]).collect(),
        PowerLaw::Class2 => pairs
            .iter()
            .flat_map(|&(i, j)| (0..m).map(move |k| vec![i, j, k]))
            .collect(),
        PowerLaw::Metabelian => pairs
            .iter()
            .enumerate()
            .flat_map(|(a, &(i, j))| pairs[a + 1..].iter().map(move |&(k, l)| vec![i, j, k, l]))
            .collect(),
    };
    tuples.into_iter().take(POWER_TUPLE_CAP).collect()
}

/// Looks for a nontrivial law word in high powers of short words.
fn power_law_search(ctx: &Context, law: PowerLaw, index: u64, meter: &mut Meter) -> Result<Option<Obstruction>, Exhausted> {
    let exponent = index_exponent(index);
    let words = power_candidates(ctx.presentation.num_generators());
    let powers: Vec<Word> = words.iter().map(|w| w.pow(exponent as i64)).collect();
    for t in law_tuples(law, words.len()) {
        let args: Vec<Word> = t.iter().map(|&i| powers[i].clone()).collect();
        let w = law.word(&args);
        meter.charge(1 + w.len() as u64 / 4)?;
        // Words beyond the oracle's capacity give no evidence either way.
        if ctx.oracle.decide(&w).is_ok_and(|d| d == Decision::Nontrivial) {
            return Ok(Some(Obstruction::PowerCommutator {
                law,
                exponent,
                words: t.iter().map(|&i| words[i].clone()).collect(),
            }));
        }
    }
    Ok(None)
}

fn torsion_or_power(ctx: &Context, law: PowerLaw, index: u64, meter: &mut Meter) -> SearchResult {
    if let Some(c) = regular_torsion(ctx, meter)? {
        return Ok(Some(Certificate::Torsion(c)));
    }
    if let Some(ob) = power_law_search(ctx, law, index, meter)? {
        return Ok(Some(Certificate::Obstruction(ob)));
    }
    Ok(coset_torsion(ctx, meter)?.map(Certificate::Torsion))
}

/// Abelian or class-2 whole group, as a subgroup of index one.
fn nilpotent_whole_group(ctx: &Context, max_class: u8, meter: &mut Meter) -> Result<Option<Obstruction>, Exhausted> {
    let (p, o) = (&ctx.presentation, &ctx.oracle);
    charge_pairs(p.num_generators(), meter)?;
    if is_abelian(p, o) {
        return Ok(Some(Obstruction::VirtuallyNilpotent {
            subgroup: index_one(p),
            class: 1,
        }));
    }
    if max_class >= 2 {
        meter.charge((p.num_generators().pow(3)) as u64)?;
        if is_class2(p, o) {
            return Ok(Some(Obstruction::VirtuallyNilpotent {
                subgroup: index_one(p),
                class: 2,
            }));
        }
    }
    Ok(None)
}

// ---- spherical ----

enum FiniteMatch {
    Matched(CatalogRef, IsoCertificate),
    NoMatch(u64),
}

/// Enumerates the group with growing coset caps and compares it with the
/// spherical catalog of its order.
fn finite_match(ctx: &Context, meter: &mut Meter) -> Result<Option<FiniteMatch>, Exhausted> {
    let (p, o) = (&ctx.presentation, &ctx.oracle);
    let mut cap = 256usize;
    let table = loop {
        match todd_coxeter_metered(p, &[], cap, meter) {
            Ok(t) => break t,
            Err(CosetError::Overflow { .. }) => cap = cap.saturating_mul(4),
            Err(CosetError::Exhausted(e)) => return Err(e),
            Err(_) => return Ok(None),
        }
    };
    let order = table.index() as u64;
    let h1 = abelianization(p);
    for entry in spherical_catalog(order) {
        meter.charge(order)?;
        if entry.expected_abelianization != h1 {
            continue;
        }
        let target_cap = (16 * order as usize).max(1024);
        let target = match todd_coxeter_metered(&entry.presentation, &[], target_cap, meter) {
            Ok(t) => t,
            Err(CosetError::Exhausted(e)) => return Err(e),
            Err(_) => continue,
        };
        if let Some(c) = finite_table_iso(&table, &target, meter)? {
            if verify_iso(p, o, &entry, &c).unwrap_or(false) {
                return Ok(Some(FiniteMatch::Matched(
                    CatalogRef::Spherical { order, id: entry.id },
                    c,
                )));
            }
        }
    }
    Ok(Some(FiniteMatch::NoMatch(order)))
}

fn spherical_member(ctx: &Context, meter: &mut Meter) -> SearchResult {
    if abelianization(&ctx.presentation).free_rank > 0 {
        return Ok(None);
    }
    Ok(match finite_match(ctx, meter)? {
        Some(FiniteMatch::Matched(target, map)) => Some(Certificate::Iso {
            target,
            subgroup: None,
            map,
        }),
        _ => None,
    })
}

fn spherical_nonmember(ctx: &Context, meter: &mut Meter) -> SearchResult {
    let p = &ctx.presentation;
    meter.charge(1 + p.total_length() as u64)?;
    let h1 = abelianization(p);
    if h1.free_rank > 0 {
        return Ok(Some(Certificate::Obstruction(Obstruction::InfiniteAbelianization {
            free_rank: h1.free_rank,
        })));
    }
    Ok(match finite_match(ctx, meter)? {
        Some(FiniteMatch::NoMatch(order)) => Some(Certificate::Obstruction(Obstruction::FiniteNotCatalogued { order })),
        _ => None,
    })
}

// ---- S2xR ----

/// For each subgroup of index at most two: whether it is infinite cyclic.
fn index_two_scan(ctx: &Context, meter: &mut Meter) -> Result<Option<Vec<(CosetTable, bool)>>, Exhausted> {
    let Some(tables) = subgroup_tables(&ctx.presentation, 2, meter)? else {
        return Ok(None);
    };
    let mut out = Vec::new();
    for t in tables {
        let Some((sp, so, _)) = subgroup(ctx, &t, meter)? else {
            return Ok(None);
        };
        charge_pairs(sp.num_generators(), meter)?;
        let is_z = recognize_free_abelian(&sp, &so, 1);
        out.push((t, is_z));
    }
    Ok(Some(out))
}

fn s2xr_member(ctx: &Context, meter: &mut Meter) -> SearchResult {
    let Some(scan) = index_two_scan(ctx, meter)? else {
        return Ok(None);
    };
    Ok(scan.into_iter().find(|(_, z)| *z).map(|(t, _)| Certificate::FreeAbelianSubgroup {
        subgroup: SubgroupRef::from_table(&t),
        rank: 1,
    }))
}

fn s2xr_nonmember(ctx: &Context, meter: &mut Meter) -> SearchResult {
    let Some(scan) = index_two_scan(ctx, meter)? else {
        return Ok(None);
    };
    if scan.iter().any(|(_, z)| *z) {
        return Ok(None);
    }
    Ok(Some(Certificate::Survey {
        index_bound: 2,
        rejections: scan.iter().map(|_| Rejection::NotFreeAbelian { rank: 1 }).collect(),
    }))
}

// ---- Euclidean ----

fn euclidean_member(ctx: &Context, meter: &mut Meter) -> SearchResult {
    let (p, o) = (&ctx.presentation, &ctx.oracle);
    if o.promises().torsion_free {
        for k in 1..=ClassId::Euclidean.index_bound() {
            for t in tables_of_index(p, k, meter)? {
                let Some((sp, so, _)) = subgroup(ctx, &t, meter)? else {
                    continue;
                };
                charge_pairs(sp.num_generators(), meter)?;
                if recognize_free_abelian(&sp, &so, 3) {
                    return Ok(Some(Certificate::FreeAbelianSubgroup {
                        subgroup: SubgroupRef::from_table(&t),
                        rank: 3,
                    }));
                }
            }
        }
    }
    let entries: Vec<(CatalogRef, CatalogEntry)> = bieberbach_catalog()
        .into_iter()
        .map(|e| (CatalogRef::Bieberbach { id: e.id.clone() }, e))
        .collect();
    Ok(catalog_iso(p, o, &entries, meter)?.map(|(target, map)| Certificate::Iso {
        target,
        subgroup: None,
        map,
    }))
}

fn euclidean_nonmember(ctx: &Context, meter: &mut Meter) -> SearchResult {
    let bound = ClassId::Euclidean.index_bound();
    if let Some(c) = torsion_or_power(ctx, PowerLaw::Abelian, bound as u64, meter)? {
        return Ok(Some(c));
    }
    let Some(tables) = subgroup_tables(&ctx.presentation, bound, meter)? else {
        return Ok(None);
    };
    let mut rejections = Vec::new();
    for t in &tables {
        let Some((sp, so, _)) = subgroup(ctx, t, meter)? else {
            return Ok(None);
        };
        charge_pairs(sp.num_generators(), meter)?;
        if recognize_free_abelian(&sp, &so, 3) {
            return Ok(None);
        }
        rejections.push(Rejection::NotFreeAbelian { rank: 3 });
    }
    Ok(Some(Certificate::Survey {
        index_bound: bound,
        rejections,
    }))
}

// ---- Nil ----

fn nil_member(ctx: &Context, meter: &mut Meter) -> SearchResult {
    let (p, o) = (&ctx.presentation, &ctx.oracle);
    match recognize_gamma_e(p, o, ISO_WORD_LEN, meter) {
        GammaSearch::Found { e, certificate } => {
            return Ok(Some(Certificate::Iso {
                target: CatalogRef::GammaE { e },
                subgroup: None,
                map: certificate,
            }))
        }
        GammaSearch::Exhausted if meter.is_exhausted() => return Err(out_of_steps(meter)),
        _ => {}
    }
    if !o.promises().torsion_free {
        return Ok(None);
    }
    for k in 2..=ClassId::Nil.index_bound() {
        for t in tables_of_index(p, k, meter)? {
            let Some((sp, so, _)) = subgroup(ctx, &t, meter)? else {
                continue;
            };
            match recognize_gamma_e(&sp, &so, ISO_WORD_LEN, meter) {
                GammaSearch::Found { e, certificate } => {
                    return Ok(Some(Certificate::Iso {
                        target: CatalogRef::GammaE { e },
                        subgroup: Some(SubgroupRef::from_table(&t)),
                        map: certificate,
                    }))
                }
                GammaSearch::Exhausted if meter.is_exhausted() => return Err(out_of_steps(meter)),
                _ => {}
            }
        }
    }
    Ok(None)
}

fn nil_nonmember(ctx: &Context, meter: &mut Meter) -> SearchResult {
    if let Some(ob) = nilpotent_whole_group(ctx, 1, meter)? {
        return Ok(Some(Certificate::Obstruction(ob)));
    }
    let bound = ClassId::Nil.index_bound();
    if let Some(c) = torsion_or_power(ctx, PowerLaw::Class2, bound as u64, meter)? {
        return Ok(Some(c));
    }
    let Some(tables) = subgroup_tables(&ctx.presentation, bound, meter)? else {
        return Ok(None);
    };
    let mut rejections = Some(Vec::new());
    for t in &tables {
        let Some((sp, so, _)) = subgroup(ctx, t, meter)? else {
            return Ok(None);
        };
        charge_pairs(sp.num_generators(), meter)?;
        if is_abelian(&sp, &so) {
            return Ok(Some(Certificate::Obstruction(Obstruction::VirtuallyNilpotent {
                subgroup: SubgroupRef::from_table(t),
                class: 1,
            })));
        }
        meter.charge(1 + (sp.num_generators().pow(3) + sp.total_length()) as u64)?;
        match gamma_e_candidate(&sp, &so) {
            Err(obstruction) => {
                if let Some(r) = rejections.as_mut() {
                    r.push(Rejection::NotBundle { obstruction });
                }
            }
            Ok(_) => rejections = None,
        }
    }
    Ok(rejections.map(|rejections| Certificate::Survey {
        index_bound: bound,
        rejections,
    }))
}

// ---- Sol ----

/// Matrices of determinant 1 and trace `tr` with entries bounded by `bound`,
/// ordered by largest entry and then lexicographically.
fn monodromies(tr: i64, bound: i64) -> Vec<[[i64; 2]; 2]> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        let d = tr - a;
        if d.abs() > bound {
            continue;
        }
        let n = a * d - 1;
        for b in -bound..=bound {
            if b == 0 {
                if n == 0 {
                    for c in -bound..=bound {
                        out.push([[a, 0], [c, d]]);
                    }
                }
                continue;
            }
            if n % b == 0 && (n / b).abs() <= bound {
                out.push([[a, b], [n / b, d]]);
            }
        }
    }
    let height = |m: &[[i64; 2]; 2]| m.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
    out.sort_by_key(|m| (height(m), *m));
    out
}

/// Traces of infinite-order monodromies whose `A - I` has cokernel of order `t`.
fn sol_traces(t: u64) -> Vec<i64> {
    let t = t as i64;
    [2 + t, 2 - t].into_iter().filter(|tr| tr.abs() > 2).collect()
}

fn sol_member(ctx: &Context, meter: &mut Meter) -> SearchResult {
    let p = &ctx.presentation;
    let max_index = if ctx.oracle.promises().torsion_free {
        ClassId::Sol.index_bound()
    } else {
        1
    };
    for k in 1..=max_index {
        for t in tables_of_index(p, k, meter)? {
            let Some((sp, so, _)) = subgroup(ctx, &t, meter)? else {
                continue;
            };
            let h1 = abelianization(&sp);
            if h1.free_rank != 1 {
                continue;
            }
            let torsion: u64 = h1.factors_u64().iter().product();
            let mut entries = Vec::new();
            for tr in sol_traces(torsion) {
                for a in monodromies(tr, MONODROMY_BOUND) {
                    meter.charge(1)?;
                    if let Ok(e) = torus_bundle_entry(a) {
                        if e.expected_abelianization == h1 {
                            entries.push((CatalogRef::TorusBundle { monodromy: a }, e));
                        }
                    }
                }
            }
            if let Some((target, map)) = catalog_iso(&sp, &so, &entries, meter)? {
                let subgroup = (k > 1).then(|| SubgroupRef::from_table(&t));
                return Ok(Some(Certificate::Iso { target, subgroup, map }));
            }
        }
    }
    Ok(None)
}

/// A second-derived word in the subgroup generators that is nontrivial.
fn not_metabelian(p: &FinitePresentation, o: &OracleHandle, meter: &mut Meter) -> Result<Option<Vec<Word>>, Exhausted> {
    let words: Vec<Word> = enumerate_words(p.num_generators(), 1).skip(1).collect();
    for t in law_tuples(PowerLaw::Metabelian, words.len()) {
        let args: Vec<Word> = t.iter().map(|&i| words[i].clone()).collect();
        meter.charge(2)?;
        if !o.is_trivial(&PowerLaw::Metabelian.word(&args)) {
            return Ok(Some(args));
        }
    }
    Ok(None)
}

fn sol_nonmember(ctx: &Context, meter: &mut Meter) -> SearchResult {
    if let Some(ob) = nilpotent_whole_group(ctx, 2, meter)? {
        return Ok(Some(Certificate::Obstruction(ob)));
    }
    let bound = ClassId::Sol.index_bound();
    if let Some(c) = torsion_or_power(ctx, PowerLaw::Metabelian, bound as u64, meter)? {
        return Ok(Some(c));
    }
    let Some(tables) = subgroup_tables(&ctx.presentation, bound, meter)? else {
        return Ok(None);
    };
    let mut rejections = Some(Vec::new());
    for t in &tables {
        let Some((sp, so, _)) = subgroup(ctx, t, meter)? else {
            return Ok(None);
        };
        meter.charge(1 + sp.num_generators().pow(3) as u64)?;
        if is_class2(&sp, &so) {
            let class = if is_abelian(&sp, &so) { 1 } else { 2 };
            return Ok(Some(Certificate::Obstruction(Obstruction::VirtuallyNilpotent {
                subgroup: SubgroupRef::from_table(t),
                class,
            })));
        }
        let Some(r) = rejections.as_mut() else {
            continue;
        };
        let free_rank = abelianization(&sp).free_rank;
        if free_rank != 1 {
            r.push(Rejection::FreeRank { free_rank });
        } else if let Some(words) = not_metabelian(&sp, &so, meter)? {
            r.push(Rejection::NotMetabelian { words });
        } else {
            rejections = None;
        }
    }
    Ok(rejections.map(|rejections| Certificate::Survey {
        index_bound: bound,
        rejections,
    }))
}

// ---- circle bundles over hyperbolic surfaces ----

/// `(genus, euler)` of the circle bundle whose abelianization is `h1`, for
/// the given class.
pub(super) fn bundle_pattern(class: ClassId, h1: &AbelianInvariants) -> Option<(usize, i64)> {
    let factors = h1.factors_u64();
    match class {
        ClassId::H2xR => (factors.is_empty() && h1.free_rank >= 5 && h1.free_rank % 2 == 1)
            .then(|| ((h1.free_rank - 1) / 2, 0)),
        ClassId::SL2R => {
            if h1.free_rank < 4 || h1.free_rank % 2 == 1 {
                return None;
            }
            let e = match factors.as_slice() {
                [] => 1,
                [e] => *e as i64,
                _ => return None,
            };
            Some((h1.free_rank / 2, e))
        }
        _ => None,
    }
}

fn sf_minus_member(class: ClassId, ctx: &Context, meter: &mut Meter) -> SearchResult {
    let p = &ctx.presentation;
    meter.charge(1 + p.total_length() as u64)?;
    let Some((genus, euler)) = bundle_pattern(class, &abelianization(p)) else {
        return Ok(None);
    };
    let Ok(entry) = circle_bundle_entry(genus, euler) else {
        return Ok(None);
    };
    let entries = vec![(CatalogRef::CircleBundle { genus, euler }, entry)];
    Ok(catalog_iso(p, &ctx.oracle, &entries, meter)?.map(|(target, map)| Certificate::Iso {
        target,
        subgroup: None,
        map,
    }))
}

fn sf_minus_nonmember(class: ClassId, ctx: &Context, meter: &mut Meter) -> SearchResult {
    let p = &ctx.presentation;
    meter.charge(1 + p.total_length() as u64)?;
    let deficiency = p.deficiency();
    if deficiency >= 2 {
        return Ok(Some(Certificate::Obstruction(Obstruction::Deficiency { deficiency })));
    }
    if let Some(ob) = nilpotent_whole_group(ctx, 2, meter)? {
        return Ok(Some(Certificate::Obstruction(ob)));
    }
    if let Some(c) = torsion_stage(ctx, meter)? {
        return Ok(Some(Certificate::Torsion(c)));
    }
    let h1 = abelianization(p);
    if ctx.oracle.promises().three_manifold && bundle_pattern(class, &h1).is_none() {
        return Ok(Some(Certificate::Obstruction(Obstruction::AbelianizationPattern { h1 })));
    }
    Ok(None)
}

// ---- hyperbolic ----

fn hyperbolic_nonmember(ctx: &Context, meter: &mut Meter) -> SearchResult {
    if !ctx.reps_complete {
        return Ok(None);
    }
    let mut certificates = Vec::new();
    for r in &ctx.reps {
        match search_nondfil(&ctx.presentation, &ctx.oracle, r, NONDFIL_WORD_LEN, meter) {
            NonDfilSearch::Found(c) => certificates.push(c),
            NonDfilSearch::Exhausted if meter.is_exhausted() => return Err(out_of_steps(meter)),
            NonDfilSearch::Exhausted => return Ok(None),
        }
    }
    Ok(Some(Certificate::NonDfil {
        reps: ctx.reps.clone(),
        certificates,
    }))
}
