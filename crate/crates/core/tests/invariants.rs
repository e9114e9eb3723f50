use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use geomrec_core::abelian::{smith_normal_form, AbelianInvariants, IntMatrix};
use geomrec_core::isomorphism::{bieberbach_catalog, bieberbach_specs};
use geomrec_core::oracle::{abelian_oracle, free_oracle, surface_central_oracle, surface_relator};
use geomrec_core::{abelianization, low_index_subgroups, parse_presentation, todd_coxeter, Letter, Word};

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r))
}

fn word(ngens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..ngens, any::<bool>()), 0..=max_len)
        .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect()))
}

fn exponent_sums(w: &Word, n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    for l in w.letters() {
        v[l.generator()] += l.sign();
    }
    v
}

/// Number of subgroups of index `n` in `Z^2`: the sum of the divisors of `n`.
fn sigma(n: usize) -> usize {
    (1..=n).filter(|d| n % d == 0).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_equivalent_and_divisible(rows in matrix()) {
        let m = IntMatrix::from_rows(rows[0].len(), &rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        let d = s.diagonal();
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
        // the transpose has the same invariants
        prop_assert_eq!(smith_normal_form(&m.transpose()).diagonal(), d);
    }

    #[test]
    fn smith_rank_matches_square_determinant(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 4)) {
        let m = IntMatrix::from_rows(4, &rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.rank() == 4, !m.determinant().is_zero());
        let prod: BigInt = s.diagonal().iter().product();
        prop_assert_eq!(prod, m.determinant().abs());
    }

    #[test]
    fn free_reduction_is_idempotent_and_inverse_cancels(w in word(3, 20)) {
        let r = w.free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn free_oracle_agrees_with_reduction(w in word(2, 16)) {
        let o = free_oracle(2);
        prop_assert_eq!(o.is_trivial(&w), w.free_reduce().is_empty());
    }

    #[test]
    fn free_abelian_oracle_reads_exponent_sums(w in word(3, 16)) {
        let o = abelian_oracle(&IntMatrix::zeros(0, 3));
        prop_assert_eq!(o.is_trivial(&w), exponent_sums(&w, 3).iter().all(|&x| x == 0));
    }

    #[test]
    fn cyclic_products_have_the_right_order(m in 1usize..=12, n in 1usize..=12) {
        let p = parse_presentation(&format!("<a,b | a^{m}, b^{n}, [a,b]>")).unwrap();
        let t = todd_coxeter(&p, &[], 1 << 12).unwrap();
        prop_assert_eq!(t.index(), m * n);
        prop_assert!(t.satisfies(&p));
    }

    #[test]
    fn surface_oracle_respects_the_central_relation(g in word(5, 10), e in 0i64..=4, k in -3i64..=3) {
        let o = surface_central_oracle(2, e);
        let z = Word::generator(4);
        let relator = surface_relator(2).concat(&z.pow(-e));
        prop_assert!(o.is_trivial(&relator.conjugate_by(&g)));
        // z is central
        prop_assert!(o.is_trivial(&Word::commutator(&g, &z)));
        prop_assert_eq!(o.is_trivial(&z.pow(k)), k == 0);
    }
}

#[test]
fn z2_subgroup_counts() {
    let z2 = parse_presentation("<a,b | [a,b]>").unwrap();
    let tables = low_index_subgroups(&z2, 6).unwrap();
    for n in 1..=6 {
        assert_eq!(tables.iter().filter(|t| t.index() == n).count(), sigma(n), "index {n}");
    }
}

#[test]
fn bieberbach_groups() {
    let specs = bieberbach_specs();
    assert_eq!(specs.len(), 10);
    assert_eq!(specs.iter().filter(|s| s.orientable).count(), 6);
    let mut holonomy: Vec<u64> = specs.iter().filter(|s| s.orientable).map(|s| s.holonomy_order()).collect();
    holonomy.sort();
    assert_eq!(holonomy, vec![1, 2, 3, 4, 4, 6]);
    assert!(specs.iter().all(|s| s.is_torsion_free()));

    let mut h1: Vec<String> = specs
        .iter()
        .filter(|s| s.orientable)
        .map(|s| s.expected_abelianization.to_string())
        .collect();
    h1.sort();
    let mut known: Vec<String> = [
        AbelianInvariants::new(3, &[]),
        AbelianInvariants::new(1, &[2, 2]),
        AbelianInvariants::new(1, &[3]),
        AbelianInvariants::new(1, &[2]),
        AbelianInvariants::new(1, &[]),
        AbelianInvariants::new(0, &[4, 4]),
    ]
    .iter()
    .map(ToString::to_string)
    .collect();
    known.sort();
    assert_eq!(h1, known);

    for e in bieberbach_catalog() {
        assert_eq!(abelianization(&e.presentation), e.expected_abelianization, "{}", e.id);
        for r in e.presentation.relators() {
            assert!(e.oracle.is_trivial(r), "{}: relator {r:?} nontrivial", e.id);
        }
        for g in 0..e.presentation.num_generators() {
            assert!(!e.oracle.is_trivial(&Word::generator(g)), "{}: generator {g} trivial", e.id);
        }
    }
}
