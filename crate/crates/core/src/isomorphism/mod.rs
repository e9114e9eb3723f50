//! Verified isomorphism certificates and catalogs of model groups.
//!
//! A certificate is a pair of word maps. [`verify_iso`] checks that both are
//! homomorphisms and that they are mutually inverse, using the word problem
//! on each side; nothing else about a certificate is trusted.

mod bieberbach;
mod catalog;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::abelian::{abelianization, AbelianInvariants};
use crate::cosets::{todd_coxeter_metered, CosetTable};
use crate::geometry::ClassId;
use crate::meter::{Exhausted, Meter};
use crate::oracle::OracleHandle;
use crate::presentation::{enumerate_words, tietze_simplify, FinitePresentation, Letter, Word};

pub use bieberbach::{bieberbach_catalog, bieberbach_specs, AffineGenerator, BieberbachSpec};
pub use catalog::{
    circle_bundle_entry, gamma_e_entry, pc_relator_presentation, s2r_catalog, spherical_catalog,
    spherical_orders_up_to, torus_bundle_entry,
};

/// Word maps between an input presentation `P` and a catalog group `T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsoCertificate {
    /// Image of each target generator, as a word in the input generators.
    pub forward: Vec<Word>,
    /// Image of each input generator, as a word in the target generators.
    pub backward: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsoError {
    #[error("certificate arity mismatch: expected {expected_forward} forward and {expected_backward} backward words")]
    Arity {
        expected_forward: usize,
        expected_backward: usize,
    },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("catalog entry {id} failed validation: {reason}")]
    Validation { id: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoSearch {
    Found(IsoCertificate),
    Exhausted,
}

/// A model group with a word problem solution.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub presentation: FinitePresentation,
    pub oracle: OracleHandle,
    pub geometry: ClassId,
    pub params: BTreeMap<String, i64>,
    pub expected_abelianization: AbelianInvariants,
}

impl CatalogEntry {
    pub fn param(&self, key: &str) -> Option<i64> {
        self.params.get(key).copied()
    }

    /// Checks the stored abelianization and that the oracle kills every relator.
    pub fn validate(&self) -> Result<(), IsoError> {
        let fail = |reason: String| IsoError::Validation {
            id: self.id.clone(),
            reason,
        };
        let h1 = abelianization(&self.presentation);
        if h1 != self.expected_abelianization {
            return Err(fail(format!(
                "abelianization {h1}, expected {}",
                self.expected_abelianization
            )));
        }
        if self.oracle.num_generators() != self.presentation.num_generators() {
            return Err(fail("oracle arity differs from the presentation".into()));
        }
        if let Some(r) = self.presentation.relators().iter().find(|r| !self.oracle.is_trivial(r)) {
            return Err(fail(format!(
                "relator {} is not trivial in the model",
                self.presentation.format_word(r)
            )));
        }
        Ok(())
    }
}

fn trivial(o: &OracleHandle, w: &Word, meter: &mut Meter) -> Result<bool, Exhausted> {
    meter.charge(1 + w.len() as u64)?;
    Ok(o.is_trivial(w))
}

fn check_arity(p: &FinitePresentation, t: &CatalogEntry, c: &IsoCertificate) -> Result<(), IsoError> {
    if c.forward.len() != t.presentation.num_generators()
        || c.backward.len() != p.num_generators()
        || c.forward.iter().any(|w| w.max_generator().is_some_and(|g| g >= p.num_generators()))
        || c.backward
            .iter()
            .any(|w| w.max_generator().is_some_and(|g| g >= t.presentation.num_generators()))
    {
        return Err(IsoError::Arity {
            expected_forward: t.presentation.num_generators(),
            expected_backward: p.num_generators(),
        });
    }
    Ok(())
}

fn verify_metered(
    p: &FinitePresentation,
    o: &OracleHandle,
    t: &CatalogEntry,
    c: &IsoCertificate,
    meter: &mut Meter,
) -> Result<bool, Exhausted> {
    // (1) forward is a homomorphism T -> P
    for r in t.presentation.relators() {
        if !trivial(o, &r.substitute(&c.forward), meter)? {
            return Ok(false);
        }
    }
    // (2) backward is a homomorphism P -> T
    for r in p.relators() {
        if !trivial(&t.oracle, &r.substitute(&c.backward), meter)? {
            return Ok(false);
        }
    }
    // (3) backward after forward is the identity on T
    for (i, f) in c.forward.iter().enumerate() {
        let w = f.substitute(&c.backward).concat(&Word::generator(i).inverse());
        if !trivial(&t.oracle, &w, meter)? {
            return Ok(false);
        }
    }
    // (4) forward after backward is the identity on P
    for (j, b) in c.backward.iter().enumerate() {
        let w = b.substitute(&c.forward).concat(&Word::generator(j).inverse());
        if !trivial(o, &w, meter)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the four conditions witnessing mutually inverse homomorphisms.
pub fn verify_iso(
    p: &FinitePresentation,
    o: &OracleHandle,
    t: &CatalogEntry,
    c: &IsoCertificate,
) -> Result<bool, IsoError> {
    check_arity(p, t, c)?;
    Ok(verify_metered(p, o, t, c, &mut Meter::unlimited()).expect("unlimited meter"))
}

/// Generator relabelings: permutations with sign changes, identity first.
fn relabelings(n: usize) -> Vec<Vec<Letter>> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        perms = next;
    }
    perms.sort();
    let mut out = Vec::new();
    for signs in 0..(1u32 << n) {
        for p in &perms {
            out.push(
                p.iter()
                    .enumerate()
                    .map(|(i, &g)| Letter::new(g, signs >> i & 1 == 1))
                    .collect(),
            );
        }
    }
    // identity relabeling first
    out.sort_by_key(|v: &Vec<Letter>| {
        let moved = v.iter().enumerate().filter(|(i, l)| l.generator() != *i || l.is_inverse()).count();
        moved
    });
    out
}

/// Forward/backward maps for a relabeling `t_i -> x_{pi(i)}^{+-1}`.
fn relabel_certificate(map: &[Letter]) -> IsoCertificate {
    let forward: Vec<Word> = map.iter().map(|&l| Word::from_letters(vec![l])).collect();
    let mut backward = vec![Word::empty(); map.len()];
    for (i, &l) in map.iter().enumerate() {
        backward[l.generator()] = Word::from_letters(vec![Letter::new(i, l.is_inverse())]);
    }
    IsoCertificate { forward, backward }
}

/// A presentation of one side with dictionaries to the original generators.
struct Side {
    presentation: FinitePresentation,
    /// Original generator -> word in `presentation`'s generators.
    to_simple: Vec<Word>,
    /// `presentation` generator -> word in original generators.
    from_simple: Vec<Word>,
}

fn sides(p: &FinitePresentation) -> Vec<Side> {
    let identity: Vec<Word> = (0..p.num_generators()).map(Word::generator).collect();
    let mut out = vec![Side {
        presentation: p.clone(),
        to_simple: identity.clone(),
        from_simple: identity,
    }];
    let t = tietze_simplify(p, 10_000);
    if t.moves > 0 {
        out.push(Side {
            presentation: t.presentation,
            to_simple: t.forward,
            from_simple: t.backward,
        });
    }
    out
}

const MAX_RELABEL_GENERATORS: usize = 5;

fn seeded_candidates(p: &FinitePresentation, t: &FinitePresentation) -> Vec<IsoCertificate> {
    let mut out = Vec::new();
    for ps in sides(p) {
        for ts in sides(t) {
            let n = ps.presentation.num_generators();
            if n != ts.presentation.num_generators() || n > MAX_RELABEL_GENERATORS {
                continue;
            }
            for map in relabelings(n) {
                let inner = relabel_certificate(&map);
                // target gen -> simple target word -> simple input word -> input word
                let forward = ts
                    .to_simple
                    .iter()
                    .map(|w| w.substitute(&inner.forward).substitute(&ps.from_simple).free_reduce())
                    .collect();
                let backward = ps
                    .to_simple
                    .iter()
                    .map(|w| w.substitute(&inner.backward).substitute(&ts.from_simple).free_reduce())
                    .collect();
                out.push(IsoCertificate { forward, backward });
            }
        }
    }
    out
}

/// Nonempty freely reduced words of length at most `max_len`, capped in number.
fn word_list(n: usize, max_len: usize, cap: usize) -> Vec<Word> {
    enumerate_words(n, max_len)
        .filter(|w| !w.is_empty())
        .take(cap)
        .collect()
}

/// Shortest word `u` over `n` letters with `images(u) = target` in `o`.
fn solve_word(
    n: usize,
    images: &[Word],
    target: &Word,
    o: &OracleHandle,
    max_len: usize,
    meter: &mut Meter,
) -> Result<Option<Word>, Exhausted> {
    for u in enumerate_words(n, max_len).take(SOLVE_CAP) {
        let w = u.substitute(images).concat(&target.inverse());
        if trivial(o, &w, meter)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

const SOLVE_CAP: usize = 20_000;
const TUPLE_WORD_CAP: usize = 4_000;

/// Enumerates tuples of image words of bounded length for the side with
/// fewer generators, then solves for the inverse map generator by generator.
fn blind_search(
    p: &FinitePresentation,
    o: &OracleHandle,
    t: &CatalogEntry,
    max_len: usize,
    meter: &mut Meter,
) -> Result<Option<IsoCertificate>, Exhausted> {
    let np = p.num_generators();
    let nt = t.presentation.num_generators();
    for len in 1..=max_len {
        let fw = word_list(np, len, TUPLE_WORD_CAP);
        let bw = word_list(nt, len, TUPLE_WORD_CAP);
        let forward_space = (fw.len() as f64).powi(nt as i32);
        let backward_space = (bw.len() as f64).powi(np as i32);
        let forward_first = forward_space <= backward_space;
        let (words, slots) = if forward_first { (&fw, nt) } else { (&bw, np) };
        if words.is_empty() && slots > 0 {
            continue;
        }
        let mut idx = vec![0usize; slots];
        loop {
            let tuple: Vec<Word> = idx.iter().map(|&i| words[i].clone()).collect();
            // only tuples reaching the current length are new
            if tuple.iter().any(|w| w.len() == len) || slots == 0 {
                if let Some(c) = complete_tuple(p, o, t, tuple, forward_first, max_len + 3, meter)? {
                    return Ok(Some(c));
                }
            }
            let mut k = 0;
            while k < slots {
                idx[k] += 1;
                if idx[k] < words.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == slots {
                break;
            }
        }
    }
    Ok(None)
}

fn complete_tuple(
    p: &FinitePresentation,
    o: &OracleHandle,
    t: &CatalogEntry,
    tuple: Vec<Word>,
    forward_first: bool,
    solve_len: usize,
    meter: &mut Meter,
) -> Result<Option<IsoCertificate>, Exhausted> {
    let np = p.num_generators();
    let nt = t.presentation.num_generators();
    if forward_first {
        for r in t.presentation.relators() {
            if !trivial(o, &r.substitute(&tuple), meter)? {
                return Ok(None);
            }
        }
        let mut backward = Vec::new();
        for j in 0..np {
            match solve_word(nt, &tuple, &Word::generator(j), o, solve_len, meter)? {
                Some(u) => backward.push(u),
                None => return Ok(None),
            }
        }
        let c = IsoCertificate {
            forward: tuple,
            backward,
        };
        Ok(verify_metered(p, o, t, &c, meter)?.then_some(c))
    } else {
        for r in p.relators() {
            if !trivial(&t.oracle, &r.substitute(&tuple), meter)? {
                return Ok(None);
            }
        }
        let mut forward = Vec::new();
        for i in 0..nt {
            match solve_word(np, &tuple, &Word::generator(i), &t.oracle, solve_len, meter)? {
                Some(u) => forward.push(u),
                None => return Ok(None),
            }
        }
        let c = IsoCertificate {
            forward,
            backward: tuple,
        };
        Ok(verify_metered(p, o, t, &c, meter)?.then_some(c))
    }
}

/// Searches for a verified certificate `P ~= T`: abelianization prefilter,
/// then relabelings of the given and Tietze-simplified presentations, then
/// bounded image enumeration with inverse solving.
pub fn search_iso(
    p: &FinitePresentation,
    o: &OracleHandle,
    t: &CatalogEntry,
    max_word_len: usize,
    meter: &mut Meter,
) -> IsoSearch {
    if o.num_generators() != p.num_generators() || abelianization(p) != t.expected_abelianization {
        return IsoSearch::Exhausted;
    }
    let mut run = || -> Result<Option<IsoCertificate>, Exhausted> {
        for c in seeded_candidates(p, &t.presentation) {
            if verify_metered(p, o, t, &c, meter)? {
                return Ok(Some(c));
            }
        }
        if let Some(order) = t.param("order") {
            if let Some(c) = finite_iso(p, o, t, order as usize, meter)? {
                return Ok(Some(c));
            }
        }
        blind_search(p, o, t, max_word_len, meter)
    };
    match run() {
        Ok(Some(c)) => IsoSearch::Found(c),
        _ => IsoSearch::Exhausted,
    }
}

/// Only the relabeling stage of [`search_iso`]: cheap, and enough when the
/// input is a renamed or Tietze-equivalent copy of the target.
pub fn search_iso_seeded(
    p: &FinitePresentation,
    o: &OracleHandle,
    t: &CatalogEntry,
    meter: &mut Meter,
) -> Result<Option<IsoCertificate>, Exhausted> {
    if o.num_generators() != p.num_generators() || abelianization(p) != t.expected_abelianization {
        return Ok(None);
    }
    for c in seeded_candidates(p, &t.presentation) {
        if verify_metered(p, o, t, &c, meter)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Breadth-first words from coset 0 to every coset of a regular table.
fn element_words(t: &CosetTable) -> Vec<Word> {
    let n = t.index();
    let mut words: Vec<Option<Word>> = vec![None; n];
    words[0] = Some(Word::empty());
    let mut queue = VecDeque::from([0]);
    while let Some(c) = queue.pop_front() {
        for x in 0..2 * t.num_generators() {
            let l = Letter::from_key(x);
            let d = t.act(c, l);
            if words[d].is_none() {
                let mut w = words[c].clone().expect("visited");
                w.push(l);
                words[d] = Some(w);
                queue.push_back(d);
            }
        }
    }
    words.into_iter().map(|w| w.expect("transitive")).collect()
}

fn element_order(t: &CosetTable, w: &Word) -> usize {
    let mut c = t.trace(0, w);
    let mut k = 1;
    while c != 0 {
        c = t.trace(c, w);
        k += 1;
    }
    k
}

/// Multiplication-table isomorphism between two finite groups given by
/// regular coset tables, returned as a word certificate.
pub fn finite_table_iso(
    input: &CosetTable,
    target: &CosetTable,
    meter: &mut Meter,
) -> Result<Option<IsoCertificate>, Exhausted> {
    let n = input.index();
    if n != target.index() {
        return Ok(None);
    }
    let in_words = element_words(input);
    let t_words = element_words(target);
    let k = target.num_generators();
    let in_orders: Vec<usize> = in_words.iter().map(|w| element_order(input, w)).collect();
    meter.charge(n as u64)?;
    let candidates: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            let ord = element_order(target, &Word::generator(i));
            (0..n).filter(|&e| in_orders[e] == ord).collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut idx = vec![0usize; k];
    loop {
        meter.charge(n as u64)?;
        let images: Vec<usize> = (0..k).map(|i| candidates[i][idx[i]]).collect();
        if let Some(phi) = extend_map(input, target, &images, &in_words) {
            let forward = images.iter().map(|&e| in_words[e].clone()).collect();
            let mut inv = vec![0; n];
            for (a, &b) in phi.iter().enumerate() {
                inv[b] = a;
            }
            let backward = (0..input.num_generators())
                .map(|j| t_words[inv[input.act(0, Letter::pos(j))]].clone())
                .collect();
            return Ok(Some(IsoCertificate { forward, backward }));
        }
        let mut i = 0;
        while i < k {
            idx[i] += 1;
            if idx[i] < candidates[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == k {
            return Ok(None);
        }
    }
}

/// Extends `t_i -> images[i]` along the target's Cayley graph; `Some` iff the
/// result is a well-defined bijective homomorphism.
fn extend_map(input: &CosetTable, target: &CosetTable, images: &[usize], in_words: &[Word]) -> Option<Vec<usize>> {
    let n = target.index();
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    phi[0] = 0;
    used[0] = true;
    let img_words: Vec<&Word> = images.iter().map(|&e| &in_words[e]).collect();
    let mut queue = VecDeque::from([0]);
    while let Some(c) = queue.pop_front() {
        for (i, w) in img_words.iter().enumerate() {
            let d = target.act(c, Letter::pos(i));
            let image = input.trace(phi[c], w);
            if phi[d] == usize::MAX {
                if used[image] {
                    return None;
                }
                phi[d] = image;
                used[image] = true;
                queue.push_back(d);
            } else if phi[d] != image {
                return None;
            }
        }
    }
    phi.iter().all(|&x| x != usize::MAX).then_some(phi)
}

/// Table isomorphism seed for finite targets of known order.
fn finite_iso(
    p: &FinitePresentation,
    o: &OracleHandle,
    t: &CatalogEntry,
    order: usize,
    meter: &mut Meter,
) -> Result<Option<IsoCertificate>, Exhausted> {
    let Ok(input) = todd_coxeter_metered(p, &[], order + 1, meter) else {
        return Ok(None);
    };
    if input.index() != order {
        return Ok(None);
    }
    let Ok(target) = todd_coxeter_metered(&t.presentation, &[], order + 1, meter) else {
        return Ok(None);
    };
    match finite_table_iso(&input, &target, meter)? {
        Some(c) if verify_metered(p, o, t, &c, meter)? => Ok(Some(c)),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{finite_oracle, free_oracle, surface_central_oracle};
    use crate::presentation::parse_presentation;

    fn entry(p: &str, o: OracleHandle) -> CatalogEntry {
        let presentation = parse_presentation(p).unwrap();
        CatalogEntry {
            id: p.into(),
            expected_abelianization: abelianization(&presentation),
            presentation,
            oracle: o,
            geometry: ClassId::S2xR,
            params: BTreeMap::new(),
        }
    }

    #[test]
    fn verify_examples() {
        let z = entry("<z | >", free_oracle(1));
        let p = parse_presentation("<a,b | ab>").unwrap();
        // a -> 1, b -> -1 in Z
        let o = crate::oracle::OracleHandle::new(2, "ab=1", |w: &Word| {
            w.letters()
                .iter()
                .map(|l| if l.generator() == 0 { l.sign() } else { -l.sign() })
                .sum::<i64>()
                == 0
        });
        let c = IsoCertificate {
            forward: vec![Word::generator(0)],
            backward: vec![Word::generator(0), Word::generator(0).inverse()],
        };
        assert!(verify_iso(&p, &o, &z, &c).unwrap());
        let bad = IsoCertificate {
            forward: vec![Word::generator(0)],
            backward: vec![Word::generator(0), Word::generator(0)],
        };
        assert!(!verify_iso(&p, &o, &z, &bad).unwrap());
        let short = IsoCertificate {
            forward: vec![],
            backward: vec![],
        };
        assert!(verify_iso(&p, &o, &z, &short).is_err());
    }

    #[test]
    fn identity_certificate() {
        let p = parse_presentation("<a,b,z | [a,b] z^-1, [a,z], [b,z]>").unwrap();
        let t = gamma_e_entry(1).unwrap();
        let o = t.oracle.clone();
        let c = IsoCertificate {
            forward: (0..3).map(Word::generator).collect(),
            backward: (0..3).map(Word::generator).collect(),
        };
        assert!(verify_iso(&p, &o, &t, &c).unwrap());
        assert_eq!(search_iso(&p, &o, &t, 2, &mut Meter::new(100_000)), IsoSearch::Found(c));
    }

    #[test]
    fn gamma1_is_not_gamma2() {
        let t2 = gamma_e_entry(2).unwrap();
        let t1 = gamma_e_entry(1).unwrap();
        let c = IsoCertificate {
            forward: (0..3).map(Word::generator).collect(),
            backward: (0..3).map(Word::generator).collect(),
        };
        assert!(!verify_iso(&t1.presentation, &t1.oracle, &t2, &c).unwrap());
        assert_eq!(
            search_iso(&t1.presentation, &t1.oracle, &t2, 2, &mut Meter::new(10_000)),
            IsoSearch::Exhausted
        );
    }

    #[test]
    fn cyclic_found_at_length_one() {
        let p = parse_presentation("<x | x^5>").unwrap();
        let o = finite_oracle(&p, 10).unwrap();
        let t = &spherical_catalog(5)[0];
        assert!(matches!(search_iso(&p, &o, t, 1, &mut Meter::new(10_000)), IsoSearch::Found(_)));
    }

    #[test]
    fn prefilter_rejects_z3_vs_gamma1() {
        let p = parse_presentation("<a,b,c | [a,b],[a,c],[b,c]>").unwrap();
        let o = crate::oracle::abelian_oracle(&crate::abelian::relation_matrix(&p));
        let mut m = Meter::new(1_000);
        assert_eq!(search_iso(&p, &o, &gamma_e_entry(1).unwrap(), 3, &mut m), IsoSearch::Exhausted);
        assert_eq!(m.used(), 0);
    }

    #[test]
    fn scrambled_surface_group_found() {
        // Gamma_{2,0} with an extra generator c = a1 b1
        let p = parse_presentation(
            "<a,b,c,d,z,y | y = a b, [a,b][c,d], [a,z],[b,z],[c,z],[d,z]>",
        )
        .unwrap();
        let t = circle_bundle_entry(2, 0).unwrap();
        let inner = surface_central_oracle(2, 0);
        let emb = vec![
            Word::generator(0),
            Word::generator(1),
            Word::generator(2),
            Word::generator(3),
            Word::generator(4),
            Word::from_signed(&[1, 2]),
        ];
        let o = OracleHandle::new(6, "scrambled", move |w: &Word| {
            inner.is_trivial(&w.substitute(&emb))
        });
        match search_iso(&p, &o, &t, 1, &mut Meter::new(1_000_000)) {
            IsoSearch::Found(c) => assert!(verify_iso(&p, &o, &t, &c).unwrap()),
            IsoSearch::Exhausted => panic!("no certificate"),
        }
    }

    #[test]
    fn table_iso_between_q8_presentations() {
        let a = parse_presentation("<a,b | a^4, a^2 b^-2, b^-1 a b a>").unwrap();
        let b = parse_presentation("<i,j | i^2 = j^2, i j i = j>").unwrap();
        let ta = crate::cosets::todd_coxeter(&a, &[], 100).unwrap();
        let tb = crate::cosets::todd_coxeter(&b, &[], 100).unwrap();
        assert_eq!(tb.index(), 8);
        let c = finite_table_iso(&ta, &tb, &mut Meter::unlimited()).unwrap().unwrap();
        let target = CatalogEntry {
            id: "q8".into(),
            expected_abelianization: abelianization(&b),
            oracle: finite_oracle(&b, 100).unwrap(),
            presentation: b,
            geometry: ClassId::Spherical,
            params: BTreeMap::new(),
        };
        assert!(verify_iso(&a, &finite_oracle(&a, 100).unwrap(), &target, &c).unwrap());
    }

    #[test]
    fn relabelings_count_and_order() {
        let r = relabelings(3);
        assert_eq!(r.len(), 48);
        assert_eq!(r[0], vec![Letter::pos(0), Letter::pos(1), Letter::pos(2)]);
    }
}
