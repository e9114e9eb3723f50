//! Words in free groups, finite presentations, the presentation grammar,
//! bounded Tietze simplification and shortlex word enumeration.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Maximum number of generators a presentation may have.
pub const MAX_GENERATORS: usize = 64;
/// Maximum total relator length of a presentation.
pub const MAX_TOTAL_LENGTH: usize = 1_000_000;

/// A generator or its inverse. Stored as `±(index + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "(usize, i8)", try_from = "(usize, i8)")]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        let v = generator as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn pos(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    #[inline]
    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// `+1` or `-1`.
    #[inline]
    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Column index in a coset table: `2g` for `g`, `2g + 1` for `g^-1`.
    #[inline]
    pub fn key(self) -> usize {
        2 * self.generator() + self.is_inverse() as usize
    }

    #[inline]
    pub fn from_key(key: usize) -> Self {
        Letter::new(key / 2, key % 2 == 1)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.generator())
        } else {
            write!(f, "x{}", self.generator())
        }
    }
}

impl From<Letter> for (usize, i8) {
    fn from(l: Letter) -> Self {
        (l.generator(), l.sign() as i8)
    }
}

impl TryFrom<(usize, i8)> for Letter {
    type Error = String;
    fn try_from((g, s): (usize, i8)) -> Result<Self, Self::Error> {
        match s {
            1 => Ok(Letter::pos(g)),
            -1 => Ok(Letter::neg(g)),
            _ => Err(format!("letter sign must be 1 or -1, got {s}")),
        }
    }
}

/// A word in the generators of a free group. Not necessarily reduced.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from signed 1-based integers (`2` is `x1`, `-1` is `x0^-1`).
    pub fn from_signed(v: &[i32]) -> Self {
        Word(
            v.iter()
                .map(|&x| {
                    assert!(x != 0, "zero is not a letter");
                    Letter::new(x.unsigned_abs() as usize - 1, x < 0)
                })
                .collect(),
        )
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        self.concat(other).free_reduce()
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// `g self g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }

    /// The unique freely reduced word equal to `self` in the free group.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Free and cyclic reduction.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.free_reduce().0;
        let mut i = 0;
        let mut j = w.len();
        while j >= i + 2 && w[i] == w[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, num_generators: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_generators];
        for l in &self.0 {
            v[l.generator()] += l.sign();
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    pub fn count_generator(&self, g: usize) -> usize {
        self.0.iter().filter(|l| l.generator() == g).count()
    }

    /// Replaces every letter `x_g^{±1}` with `images[g]^{±1}`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut v = Vec::new();
        for l in &self.0 {
            let img = &images[l.generator()];
            if l.is_inverse() {
                v.extend(img.0.iter().rev().map(|x| x.inverse()));
            } else {
                v.extend_from_slice(&img.0);
            }
        }
        Word(v)
    }

    /// Shortlex comparison: length first, then letter keys.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// Canonical representative of the cyclic word `{rotations of w, w^-1}`.
    /// Expects a cyclically reduced word.
    pub fn cyclic_canonical(&self) -> Word {
        let mut best = self.clone();
        for base in [self.clone(), self.inverse()] {
            for k in 0..base.len() {
                let r = base.rotate(k);
                if r.0 < best.0 {
                    best = r;
                }
            }
        }
        best
    }

    /// Formats using `names` for generators.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            let name = names
                .get(l.generator())
                .cloned()
                .unwrap_or_else(|| format!("x{}", l.generator()));
            if run == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{run}"));
            }
            i = j;
        }
        parts.join(" ")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&default_names(self.max_generator().map_or(0, |g| g + 1))))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Default generator names: `a, b, c, ...` for up to 26 generators, `x0, x1, ...` beyond.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("undeclared generator {name:?} at byte {position}")]
    Undeclared { name: String, position: usize },
    #[error("relators given but the generator list is empty")]
    EmptyGenerators,
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("too many generators: {0} (limit {MAX_GENERATORS})")]
    TooManyGenerators(usize),
    #[error("total relator length {0} exceeds {MAX_TOTAL_LENGTH}")]
    TooLong(usize),
    #[error("relator uses generator {generator} but only {num_generators} exist")]
    GeneratorOutOfRange { generator: usize, num_generators: usize },
    #[error("expected {expected} generator names, got {got}")]
    NameCount { expected: usize, got: usize },
}

/// A finite presentation `<x_0, ..., x_{n-1} | r_1, ..., r_s>`.
///
/// Relators are kept freely and cyclically reduced, each replaced by the
/// least rotation of itself or its inverse, deduplicated and sorted.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinitePresentation {
    num_generators: usize,
    relators: Vec<Word>,
    names: Vec<String>,
}

impl FinitePresentation {
    pub fn new(num_generators: usize, relators: Vec<Word>) -> Result<Self, PresentationError> {
        Self::with_names(num_generators, relators, default_names(num_generators))
    }

    pub fn with_names(
        num_generators: usize,
        relators: Vec<Word>,
        names: Vec<String>,
    ) -> Result<Self, PresentationError> {
        if num_generators > MAX_GENERATORS {
            return Err(PresentationError::TooManyGenerators(num_generators));
        }
        if names.len() != num_generators {
            return Err(PresentationError::NameCount {
                expected: num_generators,
                got: names.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(PresentationError::DuplicateName(n.clone()));
            }
        }
        let total: usize = relators.iter().map(|r| r.len()).sum();
        if total > MAX_TOTAL_LENGTH {
            return Err(PresentationError::TooLong(total));
        }
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= num_generators {
                    return Err(PresentationError::GeneratorOutOfRange {
                        generator: g,
                        num_generators,
                    });
                }
            }
        }
        Ok(FinitePresentation {
            num_generators,
            relators: normalize_relators(relators),
            names,
        })
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// Generators minus relators.
    pub fn deficiency(&self) -> i64 {
        self.num_generators as i64 - self.relators.len() as i64
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.format_with(&self.names)
    }

    /// Parses a word over this presentation's generator names.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        let mut p = Parser::new(text, &self.names);
        let w = p.word()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(w)
    }

    /// Same group, generators renamed to the defaults.
    pub fn with_default_names(&self) -> Self {
        FinitePresentation {
            names: default_names(self.num_generators),
            ..self.clone()
        }
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "<{} | {}>", self.names.join(", "), rels.join(", "))
    }
}

impl fmt::Debug for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn normalize_relators(relators: Vec<Word>) -> Vec<Word> {
    let set: BTreeSet<Vec<Letter>> = relators
        .into_iter()
        .map(|r| r.cyclic_reduce())
        .filter(|r| !r.is_empty())
        .map(|r| r.cyclic_canonical().0)
        .collect();
    let mut v: Vec<Word> = set.into_iter().map(Word).collect();
    v.sort_by(|a, b| a.shortlex_cmp(b));
    v
}

/// Parses the presentation grammar `<names | relators>`.
pub fn parse_presentation(text: &str) -> Result<FinitePresentation, PresentationError> {
    let mut p = Parser::new(text, &[]);
    p.expect('<')?;
    let mut names = Vec::new();
    p.skip_ws();
    if p.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
        loop {
            let (start, name) = p.ident()?;
            if names.contains(&name) {
                return Err(PresentationError::Syntax {
                    position: start,
                    message: format!("generator {name:?} declared twice"),
                });
            }
            names.push(name);
            p.skip_ws();
            if p.peek() == Some(',') {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.names = names.clone();
    let mut relators = Vec::new();
    p.skip_ws();
    if p.peek() == Some('|') {
        p.bump();
        loop {
            p.skip_ws();
            match p.peek() {
                Some('>') => break,
                Some(',') | Some(';') => {
                    p.bump();
                    continue;
                }
                None => return Err(p.err("unterminated presentation, expected '>'")),
                _ => {}
            }
            if names.is_empty() {
                return Err(PresentationError::EmptyGenerators);
            }
            let lhs = p.word()?;
            p.skip_ws();
            if p.peek() == Some('=') {
                p.bump();
                let rhs = p.word()?;
                relators.push(lhs.concat(&rhs.inverse()));
            } else {
                relators.push(lhs);
            }
            p.skip_ws();
            match p.peek() {
                Some(',') | Some(';') => {
                    p.bump();
                }
                Some('>') => {}
                _ => return Err(p.err("expected ',', ';' or '>'")),
            }
        }
    }
    p.expect('>')?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    let n = names.len();
    FinitePresentation::with_names(n, relators, names)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, names: &[String]) -> Self {
        Parser {
            src,
            pos: 0,
            names: names.to_vec(),
        }
    }

    fn err(&self, message: &str) -> PresentationError {
        PresentationError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PresentationError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<(usize, String), PresentationError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => self.bump(),
            _ => return Err(self.err("expected identifier")),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        Ok((start, self.src[start..self.pos].to_string()))
    }

    fn int(&mut self) -> Result<i64, PresentationError> {
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some('-') {
            neg = true;
            self.bump();
            self.skip_ws();
        } else if self.peek() == Some('+') {
            self.bump();
            self.skip_ws();
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err("expected integer exponent"));
        }
        let v: i64 = self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        if v > 1_000_000 {
            return Err(self.err("exponent out of range"));
        }
        Ok(if neg { -v } else { v })
    }

    /// Resolves an identifier either as a declared name or as a greedy
    /// longest-match concatenation of declared names.
    fn resolve(&self, start: usize, ident: &str) -> Result<Vec<Letter>, PresentationError> {
        if let Some(i) = self.names.iter().position(|n| n == ident) {
            return Ok(vec![Letter::pos(i)]);
        }
        let mut out = Vec::new();
        let mut rest = ident;
        while !rest.is_empty() {
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    out.push(Letter::pos(i));
                    rest = &rest[n.len()..];
                }
                None => {
                    return Err(PresentationError::Undeclared {
                        name: ident.to_string(),
                        position: start,
                    })
                }
            }
        }
        Ok(out)
    }

    fn word(&mut self) -> Result<Word, PresentationError> {
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    continue;
                }
                Some(c) if c.is_ascii_alphabetic() || c == '[' || c == '(' || c == '1' => {
                    letters.extend(self.factor()?.into_letters());
                }
                _ => break,
            }
        }
        Ok(Word(letters))
    }

    fn factor(&mut self) -> Result<Word, PresentationError> {
        self.skip_ws();
        // `prefix` is the part of a segmented identifier the exponent does not bind to.
        let (prefix, atom) = match self.peek() {
            Some('[') => {
                self.bump();
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                (Word::empty(), Word::commutator(&u, &v))
            }
            Some('(') => {
                self.bump();
                let w = self.word()?;
                self.expect(')')?;
                (Word::empty(), w)
            }
            Some('1') => {
                self.bump();
                (Word::empty(), Word::empty())
            }
            _ => {
                let (start, id) = self.ident()?;
                let mut letters = self.resolve(start, &id)?;
                let last = letters.pop().expect("nonempty identifier");
                (Word(letters), Word(vec![last]))
            }
        };
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            let k = self.int()?;
            Ok(prefix.concat(&atom.pow(k)))
        } else {
            Ok(prefix.concat(&atom))
        }
    }
}

/// Outcome of [`tietze_simplify`].
#[derive(Debug, Clone)]
pub struct TietzeResult {
    pub presentation: FinitePresentation,
    /// For each input generator, a word in the output generators.
    pub forward: Vec<Word>,
    /// For each output generator, a word in the input generators.
    pub backward: Vec<Word>,
    /// Number of moves performed.
    pub moves: usize,
}

/// Bounded Tietze simplification: drops trivial relators, eliminates
/// generators that occur exactly once in a relator (always for relators of
/// length at most 2, otherwise only when the total relator length does not
/// grow), and shortens relators by substituting more than half of another
/// relator with its complement.
pub fn tietze_simplify(p: &FinitePresentation, effort: usize) -> TietzeResult {
    let mut n = p.num_generators();
    let mut rels: Vec<Word> = p.relators().to_vec();
    let mut forward: Vec<Word> = (0..n).map(Word::generator).collect();
    // current generator index -> original generator index
    let mut origin: Vec<usize> = (0..n).collect();
    let mut moves = 0;

    while moves < effort {
        rels = normalize_relators(rels);
        if let Some((ri, g, image)) = find_elimination(&rels) {
            let mut images: Vec<Word> = (0..n).map(Word::generator).collect();
            images[g] = image;
            rels.remove(ri);
            let relabel = |w: &Word| -> Word {
                w.substitute(&images)
                    .free_reduce()
                    .letters()
                    .iter()
                    .map(|l| {
                        let h = l.generator();
                        Letter::new(if h > g { h - 1 } else { h }, l.is_inverse())
                    })
                    .collect()
            };
            rels = rels.iter().map(relabel).collect();
            forward = forward.iter().map(relabel).collect();
            origin.remove(g);
            n -= 1;
            moves += 1;
            continue;
        }
        if rels.len() <= 200 && shorten_by_substitution(&mut rels) {
            moves += 1;
            continue;
        }
        break;
    }
    let rels = normalize_relators(rels);
    let names: Vec<String> = origin.iter().map(|&i| p.names()[i].clone()).collect();
    let presentation = FinitePresentation::with_names(n, rels, names)
        .expect("simplification never grows a presentation");
    let backward = origin.iter().map(|&i| Word::generator(i)).collect();
    TietzeResult {
        presentation,
        forward,
        backward,
        moves,
    }
}

/// Finds `(relator index, generator, image)` for an admissible elimination.
fn find_elimination(rels: &[Word]) -> Option<(usize, usize, Word)> {
    let total: usize = rels.iter().map(|r| r.len()).sum();
    let mut order: Vec<usize> = (0..rels.len()).collect();
    order.sort_by_key(|&i| rels[i].len());
    for &ri in &order {
        let r = &rels[ri];
        let mut gens: Vec<usize> = r.letters().iter().map(|l| l.generator()).collect();
        gens.sort_unstable();
        gens.dedup();
        for g in gens {
            if r.count_generator(g) != 1 {
                continue;
            }
            let pos = r.letters().iter().position(|l| l.generator() == g).unwrap();
            let rot = r.rotate(pos);
            let rest = Word(rot.letters()[1..].to_vec());
            // rot = x^e rest  =>  x = rest^-1 (e = +1) or x = rest (e = -1)
            let image = if rot.letters()[0].is_inverse() {
                rest
            } else {
                rest.inverse()
            };
            if r.len() <= 2 {
                return Some((ri, g, image));
            }
            let mut images: Vec<Word> = (0..=g).map(Word::generator).collect();
            images[g] = image.clone();
            let new_total: usize = rels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != ri)
                .map(|(_, w)| {
                    if w.count_generator(g) == 0 {
                        w.len()
                    } else {
                        let full: Vec<Word> = (0..w.max_generator().unwrap().max(g) + 1)
                            .map(|h| if h == g { image.clone() } else { Word::generator(h) })
                            .collect();
                        w.substitute(&full).cyclic_reduce().len()
                    }
                })
                .sum();
            if new_total <= total {
                return Some((ri, g, image));
            }
        }
    }
    None
}

/// Replaces, in some relator `s`, a cyclic subword that is more than half of
/// a cyclic conjugate of another relator `r^{±1}` by the shorter complement.
fn shorten_by_substitution(rels: &mut [Word]) -> bool {
    for ri in 0..rels.len() {
        let r = rels[ri].clone();
        let len = r.len();
        if len == 0 {
            continue;
        }
        let mut rotations = Vec::with_capacity(2 * len);
        for base in [r.clone(), r.inverse()] {
            for k in 0..len {
                rotations.push(base.rotate(k));
            }
        }
        for si in 0..rels.len() {
            if si == ri || rels[si].len() < len / 2 + 1 {
                continue;
            }
            let s = rels[si].clone();
            for sk in 0..s.len() {
                let srot = s.rotate(sk);
                for rho in &rotations {
                    let m = srot
                        .letters()
                        .iter()
                        .zip(rho.letters())
                        .take_while(|(a, b)| a == b)
                        .count();
                    if 2 * m > len && m <= srot.len() {
                        // srot = u t with u = rho[..m]; u = (rho[m..])^-1
                        let complement = Word(rho.letters()[m..].to_vec()).inverse();
                        let tail = Word(srot.letters()[m..].to_vec());
                        let new = complement.concat(&tail).cyclic_reduce();
                        if new.len() < s.len() {
                            rels[si] = new;
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Shortlex enumeration of the freely reduced words over `n` generators of
/// length at most `max_length`: by length, then generator index, with `x`
/// before `x^-1`.
pub fn enumerate_words(num_generators: usize, max_length: usize) -> WordEnumerator {
    WordEnumerator {
        keys: 2 * num_generators,
        max_length,
        current: None,
        done: false,
    }
}

pub struct WordEnumerator {
    keys: usize,
    max_length: usize,
    current: Option<Vec<usize>>,
    done: bool,
}

impl WordEnumerator {
    fn min_after(&self, prev: Option<usize>) -> Option<usize> {
        (0..self.keys).find(|&d| prev.map_or(true, |p| d != p ^ 1))
    }

    fn first_of_length(&self, len: usize) -> Option<Vec<usize>> {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            let d = self.min_after(v.last().copied())?;
            v.push(d);
        }
        Some(v)
    }

    fn advance(&self, cur: &[usize]) -> Option<Vec<usize>> {
        let mut v = cur.to_vec();
        for i in (0..v.len()).rev() {
            let prev = if i == 0 { None } else { Some(v[i - 1]) };
            let next = (v[i] + 1..self.keys).find(|&d| prev.map_or(true, |p| d != p ^ 1));
            if let Some(d) = next {
                v[i] = d;
                for j in i + 1..v.len() {
                    v[j] = self.min_after(Some(v[j - 1]))?;
                }
                return Some(v);
            }
        }
        let len = cur.len() + 1;
        if len > self.max_length {
            None
        } else {
            self.first_of_length(len)
        }
    }
}

impl Iterator for WordEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let next = match &self.current {
            None => Some(Vec::new()),
            Some(cur) => self.advance(cur),
        };
        match next {
            Some(v) => {
                let w = v.iter().map(|&k| Letter::from_key(k)).collect();
                self.current = Some(v);
                Some(w)
            }
            None => {
                self.done = true;
                None
            }
        }
    }
}
