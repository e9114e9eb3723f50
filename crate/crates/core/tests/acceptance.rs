//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the run
//! exits nonzero if any criterion fails.

use std::collections::HashSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geomrec_core::abelian::{smith_normal_form, IntMatrix};
use geomrec_core::driver::{classify_row, parse_manifest, ManifestRow, Report};
use geomrec_core::hyperbolic::{emit_repvar_polynomials, sym2, v_membership, Mat2, Mat3};
use geomrec_core::oracle::surface_central_oracle;
use geomrec_core::hyperbolic::QuadElement;
use geomrec_core::torsion::{search_torsion_cert, verify_torsion_cert, TorsionSearch, TorsionSearchConfig};
use geomrec_core::{
    abelianization, low_index_subgroups, FinitePresentation, parse_presentation, rs_presentation, todd_coxeter, ClassId, Letter, Meter,
    OracleSpec, Overall, PromiseSet, Word,
};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

fn report(id: usize, name: &str, tolerance: &str, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = run();
    let status = if o.ok { "PASS" } else { "FAIL" };
    println!(
        "[{status}] {id}. {name} ({tolerance}): {} [{:.2}s]",
        o.detail,
        start.elapsed().as_secs_f64()
    );
    o.ok
}

// ---------- 1. Smith normal form ----------

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-10..=10)).collect()).collect()
}

fn det3(m: &[Vec<i64>]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinantal divisors of a 3x3 matrix: gcds of all k-minors.
fn determinantal_divisors(m: &[Vec<i64>]) -> [i64; 3] {
    let d1 = m.iter().flatten().fold(0i64, |g, &x| g.gcd(&x));
    let mut d2 = 0i64;
    for r in [(0, 1), (0, 2), (1, 2)] {
        for c in [(0, 1), (0, 2), (1, 2)] {
            let minor = m[r.0][c.0] * m[r.1][c.1] - m[r.0][c.1] * m[r.1][c.0];
            d2 = d2.gcd(&minor);
        }
    }
    [d1, d2, det3(m).abs()]
}

fn snf_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..500 {
        let (r, c) = if case < 100 { (3, 3) } else { (rng.gen_range(1..=6), rng.gen_range(1..=6)) };
        let rows = random_matrix(&mut rng, r, c);
        let m = IntMatrix::from_rows(c, &rows);
        let s = smith_normal_form(&m);
        if s.u.mul(&m).mul(&s.v) != s.d {
            return Outcome::new(false, format!("case {case}: U M V != D"));
        }
        if s.u.determinant().abs() != BigInt::from(1) || s.v.determinant().abs() != BigInt::from(1) {
            return Outcome::new(false, format!("case {case}: transform not unimodular"));
        }
        for i in 0..r {
            for j in 0..c {
                if i != j && !s.d.get(i, j).is_zero() {
                    return Outcome::new(false, format!("case {case}: D not diagonal"));
                }
            }
        }
        let diag = s.diagonal();
        if diag.iter().any(|x| x.is_negative()) {
            return Outcome::new(false, format!("case {case}: negative divisor"));
        }
        for w in diag.windows(2) {
            let chain = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            if !chain {
                return Outcome::new(false, format!("case {case}: divisor chain broken"));
            }
        }
        if r == c {
            let prod: BigInt = diag.iter().product();
            if prod != m.determinant().abs() {
                return Outcome::new(false, format!("case {case}: |det| not preserved"));
            }
        }
        if r == 3 && c == 3 {
            let dd = determinantal_divisors(&rows);
            let mut acc = BigInt::from(1);
            for k in 0..3 {
                acc *= &diag[k];
                if acc != BigInt::from(dd[k]) {
                    return Outcome::new(false, format!("case {case}: determinantal divisor {k} differs"));
                }
            }
        }
    }
    Outcome::new(true, "500 matrices, 100 checked against determinantal divisors")
}

// ---------- 2. Coset enumeration ----------

type M2 = [[i64; 2]; 2];

fn mat_mul(x: &M2, y: &M2, q: i64) -> M2 {
    let mut r = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = (x[i][0] * y[0][j] + x[i][1] * y[1][j]).rem_euclid(q);
        }
    }
    r
}

/// Inverse of a determinant-one matrix mod `q`.
fn mat_inv(x: &M2, q: i64) -> M2 {
    [[x[1][1], (-x[0][1]).rem_euclid(q)], [(-x[1][0]).rem_euclid(q), x[0][0]]]
}

/// Order of the matrix group generated by `gens` mod `q`, provided the
/// generators satisfy every relator of `p`.
fn matrix_group_order(p: &FinitePresentation, gens: &[M2], q: i64) -> Option<usize> {
    let id: M2 = [[1, 0], [0, 1]];
    for r in p.relators() {
        let v = r.letters().iter().fold(id, |acc, l| {
            let g = gens[l.generator()];
            mat_mul(&acc, &if l.is_inverse() { mat_inv(&g, q) } else { g }, q)
        });
        if v != id {
            return None;
        }
    }
    let mut seen = HashSet::from([id]);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = mat_mul(&x, g, q);
            if seen.insert(y) {
                queue.push(y);
            }
        }
    }
    Some(seen.len())
}

fn coset_orders() -> Outcome {
    // faithful images in SL(2, q): the brute-force closure gives the order
    let cases: [(&str, &str, Vec<M2>, i64); 4] = [
        ("Z/5", "<a | a^5>", vec![[[1, 1], [0, 1]]], 5),
        ("S3", "<a,b | a^2, b^2, (ab)^3>", vec![[[0, 1], [1, 0]], [[1, 1], [0, 1]]], 2),
        ("Q8", "<x,y | x^4, x^2 y^-2, x y x y^-1>", vec![[[0, 2], [1, 0]], [[1, 1], [1, 2]]], 3),
        ("2T", "<a,b | a^3 b^-3, (ab)^2 b^-3>", vec![[[2, 2], [0, 2]], [[2, 0], [2, 2]]], 3),
    ];
    let mut parts = Vec::new();
    for (name, text, gens, q) in cases {
        let p = parse_presentation(text).unwrap();
        let Some(order) = matrix_group_order(&p, &gens, q) else {
            return Outcome::new(false, format!("{name}: reference matrices violate a relator"));
        };
        let start = Instant::now();
        let got = todd_coxeter(&p, &[], 1 << 16).map(|t| t.index());
        let elapsed = start.elapsed();
        if got != Ok(order) || elapsed > Duration::from_secs(1) {
            return Outcome::new(false, format!("{name}: got {got:?}, reference {order}, in {elapsed:?}"));
        }
        parts.push(format!("{name}={order}"));
    }
    Outcome::new(true, parts.join(" "))
}

// ---------- 3. Low-index subgroups ----------

fn low_index_f2() -> Outcome {
    let f2 = parse_presentation("<a,b | >").unwrap();
    let tables = low_index_subgroups(&f2, 2).unwrap();
    let index_two: Vec<_> = tables.iter().filter(|t| t.index() == 2).collect();
    if index_two.len() != 3 {
        return Outcome::new(false, format!("{} index-2 classes", index_two.len()));
    }
    for t in index_two {
        let r = rs_presentation(&f2, t).unwrap();
        let p = &r.presentation;
        if p.num_generators() != 3 || !p.relators().is_empty() || abelianization(p).free_rank != 3 {
            return Outcome::new(false, format!("subgroup presentation {p}"));
        }
    }
    Outcome::new(true, "3 classes, each free of rank 3")
}

// ---------- 4, 5, 9. Golden corpus ----------

fn manifest() -> Vec<ManifestRow> {
    let text = std::fs::read_to_string(data_dir().join("golden.manifest")).unwrap();
    parse_manifest(&text).unwrap()
}

struct CorpusRun {
    reports: Vec<(ManifestRow, Report, Duration)>,
}

fn run_corpus_timed(rows: &[ManifestRow]) -> CorpusRun {
    let base = data_dir();
    let reports = rows
        .iter()
        .map(|row| {
            let start = Instant::now();
            let r = classify_row(row, &base).unwrap();
            (row.clone(), r, start.elapsed())
        })
        .collect();
    CorpusRun { reports }
}

fn golden_corpus(first: &CorpusRun, second: &CorpusRun) -> Outcome {
    let slow = Duration::from_secs(60);
    let mut mismatches = Vec::new();
    for ((row, a, t), (_, b, _)) in first.reports.iter().zip(&second.reports) {
        if a.overall != row.expected {
            mismatches.push(format!("{}: {} (expected {})", row.file.display(), a.overall, row.expected));
        }
        if *t > slow {
            mismatches.push(format!("{}: took {t:?}", row.file.display()));
        }
        if a != b {
            mismatches.push(format!("{}: reports differ between runs", row.file.display()));
        }
    }
    let slowest = first.reports.iter().map(|r| r.2).max().unwrap_or_default();
    if mismatches.is_empty() {
        Outcome::new(
            true,
            format!("{}/{} rows match, deterministic, slowest {:.2}s", first.reports.len(), first.reports.len(), slowest.as_secs_f64()),
        )
    } else {
        Outcome::new(false, mismatches.join("; "))
    }
}

fn mutual_exclusion(run: &CorpusRun) -> Outcome {
    for (row, r, _) in &run.reports {
        let members = r.classes.iter().filter(|c| c.verdict == "Member").count();
        if members > 1 {
            return Outcome::new(false, format!("{}: {members} Member verdicts", row.file.display()));
        }
    }
    Outcome::new(true, format!("{} rows, at most one Member each", run.reports.len()))
}

fn promise_discipline(rows: &[ManifestRow]) -> Outcome {
    let base = data_dir();
    let mut parts = Vec::new();
    for row in rows.iter().filter(|r| r.expected == Overall::Geometry(ClassId::Nil)) {
        let mut plain = row.clone();
        plain.promises = PromiseSet::sound();
        let r = classify_row(&plain, &base).unwrap();
        let nil = r.classes.iter().find(|c| c.class == ClassId::Nil).unwrap();
        let name = row.file.display().to_string();
        // a Member verdict without the promise must rest on a whole-group isomorphism
        let ok = match nil.verdict.as_str() {
            "Member" => nil.certificate.as_ref().is_some_and(|c| {
                c.kind == "iso" && c.payload["subgroup"].is_null() && !c.promises_used.iter().any(|p| p == "torsion-free")
            }),
            "Exhausted" => true,
            _ => false,
        };
        if !ok {
            return Outcome::new(false, format!("{name}: {} without promise", nil.verdict));
        }
        parts.push(format!("{name}={}", nil.verdict));
    }
    let twisted_ok = parts.iter().any(|p| p == "twisted_gamma2.txt=Exhausted");
    Outcome::new(twisted_ok && parts.len() == 3, parts.join(" "))
}

// ---------- 6. Symmetric square ----------

fn random_sl2(rng: &mut ChaCha8Rng) -> Mat2 {
    let mut x = Mat2::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let k = rng.gen_range(-3..=3);
        let e = if rng.gen_bool(0.5) { [[1, k], [0, 1]] } else { [[1, 0], [k, 1]] };
        x = x.mul(&Mat2::from_ints(e));
    }
    if rng.gen_bool(0.3) {
        // a rational diagonal factor
        let q = rng.gen_range(2..=5);
        let d = Mat2::new(
            QuadElement::from_ratio(q, 1),
            QuadElement::zero(),
            QuadElement::zero(),
            QuadElement::from_ratio(1, q),
        );
        x = x.mul(&d);
    }
    x
}

fn sym2_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let one = QuadElement::one();
    for case in 0..200 {
        let (x, y) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let (sx, sy) = (sym2(&x), sym2(&y));
        if sym2(&x.mul(&y)) != sx.mul(&sy) {
            return Outcome::new(false, format!("case {case}: not multiplicative"));
        }
        if !v_membership(&sx) || sym2(&x.neg()) != sx {
            return Outcome::new(false, format!("case {case}: image outside V"));
        }
        let t = x.trace();
        if sx.trace() != &(&t * &t) - &one {
            return Outcome::new(false, format!("case {case}: trace identity fails"));
        }
        if !x.is_plus_minus_identity() && sx == Mat3::identity() {
            return Outcome::new(false, format!("case {case}: nontrivial kernel"));
        }
    }
    // a determinant-one matrix outside the image
    let off = Mat3 {
        e: QuadElement::from_int(2),
        f: QuadElement::zero(),
        g: QuadElement::zero(),
        h: QuadElement::zero(),
        i: QuadElement::from_ratio(1, 2),
        j: QuadElement::zero(),
        k: QuadElement::zero(),
        l: QuadElement::zero(),
        m: QuadElement::one(),
    };
    if v_membership(&off) {
        return Outcome::new(false, "diag(2, 1/2, 1) accepted");
    }
    for _ in 0..10 {
        let n = rng.gen_range(1..=4usize);
        let s = rng.gen_range(0..=4usize);
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let rels: Vec<String> = (0..s)
            .map(|_| {
                (0..rng.gen_range(1..=6))
                    .map(|_| format!("{}^{}", names[rng.gen_range(0..n)], if rng.gen_bool(0.5) { 1 } else { -1 }))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let p = parse_presentation(&format!("<{} | {}>", names.join(","), rels.join(", "))).unwrap();
        let count = emit_repvar_polynomials(&p).polynomials.len();
        let expected = 9 * p.num_generators() + 9 * p.relators().len();
        if count != expected {
            return Outcome::new(false, format!("{p}: {count} polynomials, expected {expected}"));
        }
    }
    Outcome::new(true, "200 random pairs, 10 polynomial systems")
}

// ---------- 7. Torsion certificates ----------

fn infinite_order_word(rng: &mut ChaCha8Rng, dinf: bool) -> Word {
    let k = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    if dinf {
        // (ab)^k is a nontrivial translation
        Word::from_letters(vec![Letter::pos(0), Letter::pos(1)]).pow(k)
    } else {
        // a^k b^j has infinite order for k != 0
        Word::generator(0).pow(k).concat(&Word::generator(1).pow(rng.gen_range(0..2)))
    }
}

fn torsion_suite() -> Outcome {
    let base = data_dir();
    let cases = [
        ("D_inf", "<a,b | a^2, b^2>", "pc:dinf.json", true),
        ("Z x Z/2", "<a,b | [a,b], b^2>", "abelian", false),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rejected = 0;
    for (name, text, spec, dinf) in cases {
        let p = parse_presentation(text).unwrap();
        let o = OracleSpec::parse(spec).unwrap().build(&p, Some(&base)).unwrap();
        let start = Instant::now();
        let found = search_torsion_cert(&p, &o, TorsionSearchConfig::default(), &mut Meter::new(1_000_000));
        let elapsed = start.elapsed();
        let TorsionSearch::Found(cert) = found else {
            return Outcome::new(false, format!("{name}: no certificate"));
        };
        if elapsed > Duration::from_secs(1) || verify_torsion_cert(&p, &o, &cert) != Ok(true) {
            return Outcome::new(false, format!("{name}: certificate not accepted in {elapsed:?}"));
        }
        for trial in 0..50 {
            let mut bad = cert.clone();
            match trial % 5 {
                0 => bad.n = rng.gen_range(0..2),
                1 => bad.n = cert.n * rng.gen_range(2..5),
                2 => bad.w = infinite_order_word(&mut rng, dinf),
                3 => {
                    let g = rng.gen_range(0..bad.quotient.len());
                    let m = bad.quotient[g].len();
                    let i = rng.gen_range(0..m);
                    bad.quotient[g][i] = (bad.quotient[g][i] + 1) % m.max(2);
                    if m == 1 {
                        bad.quotient[g].push(0);
                    }
                }
                _ => {
                    if rng.gen_bool(0.5) {
                        bad.quotient.pop();
                    } else {
                        bad.w = Word::generator(p.num_generators());
                    }
                }
            }
            if verify_torsion_cert(&p, &o, &bad) == Ok(true) {
                return Outcome::new(false, format!("{name}: corruption {trial} accepted"));
            }
            rejected += 1;
        }
    }
    Outcome::new(true, format!("both found, {rejected} corruptions rejected"))
}

// ---------- 8. Surface central oracle ----------

fn random_word(rng: &mut ChaCha8Rng, ngens: usize, len: usize) -> Word {
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..ngens), rng.gen_bool(0.5))).collect())
}

fn surface_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let genus = 2;
    let z = 2 * genus;
    for e in [0i64, 1, 3] {
        let o = surface_central_oracle(genus, e);
        let p = parse_presentation(&format!(
            "<a1,b1,a2,b2,z | [a1,b1][a2,b2] z^-{e}, [a1,z], [b1,z], [a2,z], [b2,z]>"
        ))
        .unwrap();
        let relator = p.relators()[0].clone();
        if !o.is_trivial(&relator) || o.is_trivial(&Word::generator(z)) {
            return Outcome::new(false, format!("e={e}: relator or z misjudged"));
        }
        for case in 0..200 {
            let mut w = Word::empty();
            for _ in 0..rng.gen_range(1..=4) {
                let len = rng.gen_range(0..=6);
                let g = random_word(&mut rng, z + 1, len);
                let r = if rng.gen_bool(0.5) { relator.clone() } else { relator.inverse() };
                w = w.concat(&r.conjugate_by(&g));
            }
            if !o.is_trivial(&w) {
                return Outcome::new(false, format!("e={e} case {case}: product of conjugates judged nontrivial"));
            }
            // shifting by a nonzero central power leaves a nontrivial element
            let k = rng.gen_range(1..=3);
            if o.is_trivial(&w.concat(&Word::generator(z).pow(k))) {
                return Outcome::new(false, format!("e={e} case {case}: z^{k} judged trivial"));
            }
            // a surface letter with nonzero exponent sum is nontrivial in H1
            let g = rng.gen_range(0..z);
            if o.is_trivial(&w.concat(&Word::generator(g))) {
                return Outcome::new(false, format!("e={e} case {case}: generator judged trivial"));
            }
        }
    }
    Outcome::new(true, "600 products of conjugates, genus 2, e in {0, 1, 3}")
}

fn main() {
    let rows = manifest();
    let mut results = Vec::new();
    results.push(report(1, "Smith normal form suite", "exact, < 10s", || {
        let start = Instant::now();
        let o = snf_suite();
        Outcome::new(o.ok && start.elapsed() < Duration::from_secs(10), o.detail)
    }));
    results.push(report(2, "Coset enumeration orders", "exact, < 1s each", coset_orders));
    results.push(report(3, "Low-index subgroups of F2", "exact", low_index_f2));
    let mut first = None;
    results.push(report(4, "Golden corpus", "budget 1e6, < 60s per row, 2 runs", || {
        let a = run_corpus_timed(&rows);
        let o = golden_corpus(&a, &run_corpus_timed(&rows));
        first = Some(a);
        o
    }));
    let first = first.expect("corpus ran");
    results.push(report(5, "Mutual exclusion", "exact", || mutual_exclusion(&first)));
    results.push(report(6, "Symmetric square suite", "exact, < 5s", || {
        let start = Instant::now();
        let o = sym2_suite();
        Outcome::new(o.ok && start.elapsed() < Duration::from_secs(5), o.detail)
    }));
    results.push(report(7, "Torsion certificates", "< 1s each, 100 corruptions", torsion_suite));
    results.push(report(8, "Surface central oracle", "exact", surface_suite));
    results.push(report(9, "Promise discipline", "exact", || promise_discipline(&rows)));
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
