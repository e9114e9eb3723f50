//! Todd–Coxeter coset enumeration, low-index subgroups and
//! Reidemeister–Schreier rewriting.
//!
//! Columns of a coset table are indexed by [`Letter::key`]: column `2g` is the
//! action of generator `g`, column `2g + 1` the action of its inverse.
//! Cosets are numbered from 0; coset 0 is the subgroup itself.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::meter::{Exhausted, Meter};
use crate::presentation::{tietze_simplify, FinitePresentation, Letter, PresentationError, Word};

pub const DEFAULT_MAX_COSETS: usize = 50_000;
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CosetError {
    #[error("coset enumeration not closed within {max_cosets} live cosets")]
    Overflow { max_cosets: usize },
    #[error("low-index search exceeded its node budget of {budget}")]
    NodeBudget { budget: u64 },
    #[error(transparent)]
    Exhausted(#[from] Exhausted),
    #[error("table is not a valid closed coset table: {0}")]
    Invalid(String),
}

/// A closed coset table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetTable {
    num_generators: usize,
    rows: Vec<Vec<usize>>,
}

impl CosetTable {
    /// Builds a table from generator permutations (`perms[g][c]` is the image
    /// of coset `c` under generator `g`), checking bijectivity and
    /// transitivity. Coset 0 is the base point.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self, CosetError> {
        let n = perms.first().map_or(1, |p| p.len());
        if n == 0 {
            return Err(CosetError::Invalid("empty permutation".into()));
        }
        let mut rows = vec![vec![NONE; 2 * perms.len()]; n];
        for (g, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(CosetError::Invalid("permutations of different degrees".into()));
            }
            for (c, &d) in p.iter().enumerate() {
                if d >= n || rows[d][2 * g + 1] != NONE {
                    return Err(CosetError::Invalid(format!("generator {g} is not a permutation")));
                }
                rows[c][2 * g] = d;
                rows[d][2 * g + 1] = c;
            }
        }
        let t = CosetTable {
            num_generators: perms.len(),
            rows,
        };
        if !t.is_transitive() {
            return Err(CosetError::Invalid("action is not transitive".into()));
        }
        Ok(t)
    }

    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn act(&self, coset: usize, l: Letter) -> usize {
        self.rows[coset][l.key()]
    }

    /// Image of `coset` under the word `w`.
    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    pub fn generator_permutation(&self, g: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[2 * g]).collect()
    }

    pub fn permutations(&self) -> Vec<Vec<usize>> {
        (0..self.num_generators)
            .map(|g| self.generator_permutation(g))
            .collect()
    }

    fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.index()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for &d in &self.rows[c] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks that every relator of `p` acts trivially on every coset.
    pub fn satisfies(&self, p: &FinitePresentation) -> bool {
        p.num_generators() == self.num_generators
            && (0..self.index()).all(|c| p.relators().iter().all(|r| self.trace(c, r) == c))
    }

    /// Renumbers cosets in breadth-first order from coset `base`.
    pub fn standardize_from(&self, base: usize) -> CosetTable {
        let n = self.index();
        let mut new_of = vec![NONE; n];
        let mut order = vec![base];
        new_of[base] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for &d in &self.rows[c] {
                if new_of[d] == NONE {
                    new_of[d] = order.len();
                    order.push(d);
                }
            }
        }
        let rows = order
            .iter()
            .map(|&c| self.rows[c].iter().map(|&d| new_of[d]).collect())
            .collect();
        CosetTable {
            num_generators: self.num_generators,
            rows,
        }
    }

    pub fn standardize(&self) -> CosetTable {
        self.standardize_from(0)
    }

    /// Least standardized form over all base points; equal for tables of
    /// conjugate subgroups.
    pub fn conjugacy_canonical(&self) -> CosetTable {
        (0..self.index())
            .map(|b| self.standardize_from(b))
            .min()
            .expect("nonempty table")
    }
}

/// The right-coset action of `w` as a permutation of `0..index`.
pub fn permutation_image(t: &CosetTable, w: &Word) -> Vec<usize> {
    (0..t.index()).map(|c| t.trace(c, w)).collect()
}

/// Image of one coset under `w`.
pub fn permutation_image_from(t: &CosetTable, coset: usize, w: &Word) -> usize {
    t.trace(coset, w)
}

/// Working state of an HLT enumeration.
struct Enumerator {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    live: usize,
    max_live: usize,
}

enum Fill {
    Done,
    NeedSpace,
}

impl Enumerator {
    fn new(num_generators: usize, max_live: usize) -> Self {
        let cols = 2 * num_generators;
        Enumerator {
            cols,
            table: vec![NONE; cols.max(1)],
            parent: vec![0],
            live: 1,
            max_live,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.cols + x] = d;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, ()> {
        if self.live >= self.max_live {
            return Err(());
        }
        let d = self.len();
        self.parent.push(d);
        self.table.extend(std::iter::repeat(NONE).take(self.cols));
        self.live += 1;
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(d)
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (k, l) = if a < b { (a, b) } else { (b, a) };
        self.parent[l] = k;
        self.live -= 1;
        queue.push(l);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                if self.get(f, x ^ 1) == e {
                    self.set(f, x ^ 1, NONE);
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.get(e1, x) != NONE {
                    let t = self.get(e1, x);
                    self.merge(f1, t, &mut queue);
                } else if self.get(f1, x ^ 1) != NONE {
                    let t = self.get(f1, x ^ 1);
                    self.merge(e1, t, &mut queue);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, x ^ 1, e1);
                }
            }
        }
    }

    /// Traces `w` from `c` in both directions; fills one-entry gaps and
    /// processes coincidences. With `fill`, defines new cosets to close the
    /// gap.
    fn scan(&mut self, c: usize, w: &[usize], fill: bool) -> Fill {
        if w.is_empty() {
            return Fill::Done;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len();
        loop {
            while i < j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Fill::Done;
            }
            while j > i && self.get(b, w[j - 1] ^ 1) != NONE {
                b = self.get(b, w[j - 1] ^ 1);
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Fill::Done;
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Fill::Done;
            }
            if !fill {
                return Fill::Done;
            }
            match self.define(f, w[i]) {
                Ok(_) => {}
                Err(()) => return Fill::NeedSpace,
            }
        }
    }

    /// Scans every relator at every live coset without defining anything.
    fn lookahead(&mut self, relators: &[Vec<usize>]) {
        let mut c = 0;
        while c < self.len() {
            for r in relators {
                if !self.is_live(c) {
                    break;
                }
                self.scan(c, r, false);
            }
            c += 1;
        }
    }

    /// Renumbers live cosets consecutively, preserving their order.
    fn compact(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut new_of = vec![NONE; n];
        let mut next = 0;
        for (c, slot) in new_of.iter_mut().enumerate() {
            if self.parent[c] == c {
                *slot = next;
                next += 1;
            }
        }
        let mut table = vec![NONE; next * self.cols];
        for c in 0..n {
            if new_of[c] == NONE {
                continue;
            }
            for x in 0..self.cols {
                let d = self.get(c, x);
                if d != NONE {
                    table[new_of[c] * self.cols + x] = new_of[d];
                }
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        new_of
    }
}

fn keys(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.key()).collect()
}

/// HLT coset enumeration with lookahead.
pub fn todd_coxeter(
    p: &FinitePresentation,
    subgroup_gens: &[Word],
    max_cosets: usize,
) -> Result<CosetTable, CosetError> {
    todd_coxeter_metered(p, subgroup_gens, max_cosets, &mut Meter::unlimited())
}

/// [`todd_coxeter`] charging one step per coset processed and per definition.
pub fn todd_coxeter_metered(
    p: &FinitePresentation,
    subgroup_gens: &[Word],
    max_cosets: usize,
    meter: &mut Meter,
) -> Result<CosetTable, CosetError> {
    let max_cosets = max_cosets.max(1);
    let ngens = p.num_generators();
    if ngens == 0 {
        return Ok(CosetTable {
            num_generators: 0,
            rows: vec![vec![]],
        });
    }
    let relators: Vec<Vec<usize>> = p.relators().iter().map(keys).collect();
    let subgroup: Vec<Vec<usize>> = subgroup_gens.iter().map(|w| keys(&w.free_reduce())).collect();
    let mut e = Enumerator::new(ngens, max_cosets);
    let overflow = CosetError::Overflow { max_cosets };

    // the subgroup generators fix coset 0
    for h in &subgroup {
        loop {
            match e.scan(0, h, true) {
                Fill::Done => break,
                Fill::NeedSpace => {
                    let before = e.live;
                    e.lookahead(&relators);
                    if e.live >= before {
                        return Err(overflow);
                    }
                }
            }
        }
        meter.charge(1)?;
    }

    let mut c = 0;
    while c < e.len() {
        if e.is_live(c) {
            meter.charge(1)?;
            let mut retry = true;
            while retry {
                retry = false;
                for r in &relators {
                    if !e.is_live(c) {
                        break;
                    }
                    if let Fill::NeedSpace = e.scan(c, r, true) {
                        retry = true;
                        break;
                    }
                }
                if !retry && e.is_live(c) {
                    for x in 0..e.cols {
                        if e.get(c, x) == NONE && e.define(c, x).is_err() {
                            retry = true;
                            break;
                        }
                    }
                }
                if retry {
                    let before = e.live;
                    e.lookahead(&relators);
                    if e.live >= before {
                        return Err(overflow);
                    }
                    meter.charge(e.len() as u64)?;
                    if !e.is_live(c) {
                        break;
                    }
                }
            }
        }
        c += 1;
        if e.len() > 4 * max_cosets + 1024 && e.len() > 2 * e.live {
            // drop dead cosets; everything before `c` stays before it
            let new_of = e.compact();
            c = new_of[..c].iter().filter(|&&v| v != NONE).count();
        }
    }

    e.compact();
    let rows: Vec<Vec<usize>> = (0..e.len())
        .map(|c| (0..e.cols).map(|x| e.get(c, x)).collect())
        .collect();
    let table = CosetTable {
        num_generators: ngens,
        rows,
    }
    .standardize();
    if table.rows.iter().flatten().any(|&d| d == NONE)
        || !table.satisfies(p)
        || subgroup_gens.iter().any(|h| table.trace(0, h) != 0)
    {
        return Err(CosetError::Invalid("enumeration ended with an incomplete table".into()));
    }
    Ok(table)
}

/// Order of the group if Todd–Coxeter over the trivial subgroup closes.
pub fn group_order(p: &FinitePresentation, max_cosets: usize) -> Option<usize> {
    todd_coxeter(p, &[], max_cosets).ok().map(|t| t.index())
}

/// Partial table used by the low-index backtrack.
#[derive(Clone)]
struct Partial {
    cols: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl Partial {
    fn first_undefined(&self) -> Option<(usize, usize)> {
        for c in 0..self.n {
            for x in 0..self.cols {
                if self.rows[c][x] == NONE {
                    return Some((c, x));
                }
            }
        }
        None
    }

    /// Sets an entry and propagates deductions from relator rotations.
    fn assign(&mut self, c: usize, x: usize, d: usize, rotations: &[Vec<usize>]) -> bool {
        if self.rows[c][x] != NONE || self.rows[d][x ^ 1] != NONE {
            return self.rows[c][x] == d && self.rows[d][x ^ 1] == c;
        }
        self.rows[c][x] = d;
        self.rows[d][x ^ 1] = c;
        let mut queue = vec![c, d];
        while let Some(s) = queue.pop() {
            for w in rotations {
                let mut f = s;
                let mut i = 0;
                let mut j = w.len();
                while i < j && self.rows[f][w[i]] != NONE {
                    f = self.rows[f][w[i]];
                    i += 1;
                }
                if i == j {
                    if f != s {
                        return false;
                    }
                    continue;
                }
                let mut b = s;
                while j > i && self.rows[b][w[j - 1] ^ 1] != NONE {
                    b = self.rows[b][w[j - 1] ^ 1];
                    j -= 1;
                }
                if j == i + 1 {
                    let y = w[i];
                    if self.rows[f][y] != NONE || self.rows[b][y ^ 1] != NONE {
                        return false;
                    }
                    self.rows[f][y] = b;
                    self.rows[b][y ^ 1] = f;
                    queue.push(f);
                    queue.push(b);
                }
            }
        }
        true
    }

    /// False if some other base point yields a lexicographically smaller
    /// standardized table on the already-defined part.
    fn is_canonical(&self) -> bool {
        let n = self.n;
        let mut mu = vec![NONE; n];
        let mut nu = vec![NONE; n];
        'base: for b in 1..n {
            mu.iter_mut().for_each(|v| *v = NONE);
            mu[b] = 0;
            nu[0] = b;
            let mut next = 1;
            let mut row = 0;
            while row < next {
                let old = nu[row];
                for x in 0..self.cols {
                    let t0 = self.rows[row][x];
                    let tb = self.rows[old][x];
                    if t0 == NONE || tb == NONE {
                        continue 'base;
                    }
                    if mu[tb] == NONE {
                        mu[tb] = next;
                        nu[next] = tb;
                        next += 1;
                    }
                    match mu[tb].cmp(&t0) {
                        std::cmp::Ordering::Less => return false,
                        std::cmp::Ordering::Greater => continue 'base,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                row += 1;
            }
        }
        true
    }
}

/// One closed table per conjugacy class of subgroups of index at most `k`,
/// sorted by index and then by table.
pub fn low_index_subgroups(p: &FinitePresentation, k: usize) -> Result<Vec<CosetTable>, CosetError> {
    low_index_subgroups_budget(p, k, DEFAULT_NODE_BUDGET)
}

pub fn low_index_subgroups_budget(
    p: &FinitePresentation,
    k: usize,
    budget: u64,
) -> Result<Vec<CosetTable>, CosetError> {
    let mut meter = Meter::new(budget);
    low_index_subgroups_metered(p, k, &mut meter).map_err(|e| match e {
        CosetError::Exhausted(_) => CosetError::NodeBudget { budget },
        other => other,
    })
}

/// Sims-style backtrack; each search node costs steps proportional to its
/// partial table.
pub fn low_index_subgroups_metered(
    p: &FinitePresentation,
    k: usize,
    meter: &mut Meter,
) -> Result<Vec<CosetTable>, CosetError> {
    let ngens = p.num_generators();
    let cols = 2 * ngens;
    if ngens == 0 || k == 0 {
        return Ok(if k == 0 {
            vec![]
        } else {
            vec![CosetTable {
                num_generators: 0,
                rows: vec![vec![]],
            }]
        });
    }
    let mut rotations: Vec<Vec<usize>> = Vec::new();
    for r in p.relators() {
        for base in [r.clone(), r.inverse()] {
            for i in 0..base.len() {
                let rot = keys(&base.rotate(i));
                if !rotations.contains(&rot) {
                    rotations.push(rot);
                }
            }
        }
    }
    let start = Partial {
        cols,
        n: 1,
        rows: vec![vec![NONE; cols]; k],
    };
    let mut out = Vec::new();
    let mut stack = vec![start];
    while let Some(t) = stack.pop() {
        // cloning and canonicity checks scale with the partial table
        meter.charge(1 + (t.n * cols) as u64)?;
        match t.first_undefined() {
            None => {
                let table = CosetTable {
                    num_generators: ngens,
                    rows: t.rows[..t.n].to_vec(),
                };
                debug_assert!(table.satisfies(p));
                out.push(table);
            }
            Some((c, x)) => {
                // push in reverse so that smaller targets are explored first
                let mut children = Vec::new();
                for d in 0..t.n {
                    if t.rows[d][x ^ 1] != NONE {
                        continue;
                    }
                    let mut child = t.clone();
                    if child.assign(c, x, d, &rotations) && child.is_canonical() {
                        children.push(child);
                    }
                }
                if t.n < k {
                    let mut child = t.clone();
                    child.n += 1;
                    if child.assign(c, x, t.n, &rotations) && child.is_canonical() {
                        children.push(child);
                    }
                }
                stack.extend(children.into_iter().rev());
            }
        }
    }
    out.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.rows.cmp(&b.rows)));
    Ok(out)
}

/// A finite-index subgroup with a presentation and its embedding.
#[derive(Debug, Clone)]
pub struct SubgroupRecord {
    pub table: CosetTable,
    pub presentation: FinitePresentation,
    /// Each subgroup generator as a word in the ambient generators.
    pub embedding: Vec<Word>,
    pub index: usize,
    /// Number of Schreier generators before simplification.
    pub schreier_generators: usize,
}

/// Reidemeister–Schreier presentation of the subgroup stabilizing coset 0.
pub fn rs_presentation(p: &FinitePresentation, t: &CosetTable) -> Result<SubgroupRecord, PresentationError> {
    let n = t.index();
    let ngens = p.num_generators();
    // breadth-first spanning tree
    let mut rep: Vec<Option<Word>> = vec![None; n];
    let mut tree_edge = vec![vec![false; ngens]; n];
    rep[0] = Some(Word::empty());
    let mut queue = VecDeque::from([0]);
    while let Some(c) = queue.pop_front() {
        for x in 0..2 * ngens {
            let l = Letter::from_key(x);
            let d = t.act(c, l);
            if rep[d].is_none() {
                let mut w = rep[c].clone().expect("visited");
                w.push(l);
                rep[d] = Some(w);
                if l.is_inverse() {
                    tree_edge[d][l.generator()] = true;
                } else {
                    tree_edge[c][l.generator()] = true;
                }
                queue.push_back(d);
            }
        }
    }
    let rep: Vec<Word> = rep.into_iter().map(|w| w.expect("transitive table")).collect();
    let mut schreier = vec![vec![NONE; ngens]; n];
    let mut embedding = Vec::new();
    for c in 0..n {
        for g in 0..ngens {
            if tree_edge[c][g] {
                continue;
            }
            let d = t.act(c, Letter::pos(g));
            schreier[c][g] = embedding.len();
            embedding.push(
                rep[c]
                    .concat(&Word::generator(g))
                    .concat(&rep[d].inverse())
                    .free_reduce(),
            );
        }
    }
    let mut relators = Vec::new();
    for r in p.relators() {
        for c in 0..n {
            let mut e = c;
            let mut out = Word::empty();
            for &l in r.letters() {
                let g = l.generator();
                if l.is_inverse() {
                    let f = t.act(e, l);
                    if schreier[f][g] != NONE {
                        out.push(Letter::neg(schreier[f][g]));
                    }
                    e = f;
                } else {
                    if schreier[e][g] != NONE {
                        out.push(Letter::pos(schreier[e][g]));
                    }
                    e = t.act(e, l);
                }
            }
            relators.push(out);
        }
    }
    let count = embedding.len();
    let raw = FinitePresentation::new(count, relators)?;
    let simplified = tietze_simplify(&raw, 10_000);
    let embedding = simplified
        .backward
        .iter()
        .map(|w| w.substitute(&embedding).free_reduce())
        .collect();
    Ok(SubgroupRecord {
        table: t.clone(),
        presentation: simplified.presentation,
        embedding,
        index: n,
        schreier_generators: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::abelianization;
    use crate::presentation::parse_presentation;

    fn pres(s: &str) -> FinitePresentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(group_order(&pres("<a | a^5>"), 100), Some(5));
        assert_eq!(group_order(&pres("<a,b | a^2, b^2, (ab)^3>"), 100), Some(6));
        assert_eq!(group_order(&pres("<a,b | a^4, a^2 b^-2, b^-1 a b a>"), 100), Some(8));
        assert_eq!(group_order(&pres("<a,b | a^3 b^-3, (ab)^2 b^-3>"), 1000), Some(24));
        assert_eq!(group_order(&pres("<a | >"), 100), None);
        assert!(matches!(
            todd_coxeter(&pres("<a,b | >"), &[], 10_000),
            Err(CosetError::Overflow { .. })
        ));
    }

    #[test]
    fn subgroup_index() {
        let p = pres("<a,b | a^2, b^2, (ab)^3>");
        let t = todd_coxeter(&p, &[Word::generator(0)], 100).unwrap();
        assert_eq!(t.index(), 3);
        assert_eq!(t.trace(0, &Word::generator(0)), 0);
        let z = pres("<a | >");
        assert_eq!(todd_coxeter(&z, &[Word::generator(0).pow(7)], 100).unwrap().index(), 7);
    }

    #[test]
    fn permutation_images() {
        let p = pres("<a | a^5>");
        let t = todd_coxeter(&p, &[], 100).unwrap();
        let a = permutation_image(&t, &Word::generator(0));
        let mut c = 0;
        for _ in 0..5 {
            c = a[c];
        }
        assert_eq!(c, 0);
        assert!(a.iter().enumerate().all(|(i, &j)| i != j));
        assert_eq!(permutation_image(&t, &Word::empty()), vec![0, 1, 2, 3, 4]);
        assert_eq!(permutation_image(&t, &p.relators()[0]), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn low_index_examples() {
        let idx = |p: &str, k| -> Vec<usize> {
            low_index_subgroups(&pres(p), k)
                .unwrap()
                .iter()
                .map(|t| t.index())
                .collect()
        };
        assert_eq!(idx("<a,b | >", 2), vec![1, 2, 2, 2]);
        assert_eq!(idx("<a | >", 3), vec![1, 2, 3]);
        assert_eq!(idx("<a | a^5>", 5), vec![1, 5]);
        // S3: index 1, 2 (A3), 3 (three conjugate order-2 subgroups), 6
        assert_eq!(idx("<a,b | a^2, b^2, (ab)^3>", 6), vec![1, 2, 3, 6]);
    }

    #[test]
    fn node_budget_reported() {
        assert!(matches!(
            low_index_subgroups_budget(&pres("<a,b | >"), 6, 50),
            Err(CosetError::NodeBudget { budget: 50 })
        ));
    }

    #[test]
    fn rs_examples() {
        let f2 = pres("<a,b | >");
        for t in low_index_subgroups(&f2, 2).unwrap().iter().filter(|t| t.index() == 2) {
            let s = rs_presentation(&f2, t).unwrap();
            assert_eq!(s.schreier_generators, 3);
            assert_eq!(s.presentation.num_generators(), 3);
            assert!(s.presentation.relators().is_empty());
            for w in &s.embedding {
                assert_eq!(t.trace(0, w), 0);
            }
        }
        let z = pres("<a | >");
        let t3 = todd_coxeter(&z, &[Word::generator(0).pow(3)], 10).unwrap();
        let s = rs_presentation(&z, &t3).unwrap();
        assert_eq!(s.presentation.num_generators(), 1);
        assert_eq!(s.embedding, vec![Word::generator(0).pow(3)]);

        let p = pres("<a,b | [a,b], b^2>");
        let t = todd_coxeter(&p, &[Word::generator(0)], 10).unwrap();
        let s = rs_presentation(&p, &t).unwrap();
        assert_eq!(s.presentation.num_generators(), 1);
        assert!(abelianization(&s.presentation).is_free_abelian(1));
    }

    #[test]
    fn from_permutations_validates() {
        assert!(CosetTable::from_permutations(&[vec![1, 0]]).is_ok());
        assert!(CosetTable::from_permutations(&[vec![0, 0]]).is_err());
        assert!(CosetTable::from_permutations(&[vec![0, 1]]).is_err());
    }
}
