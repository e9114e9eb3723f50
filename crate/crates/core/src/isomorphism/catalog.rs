//! Model groups for the spherical, S2xR, Nil, Sol and Seifert classes.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::abelian::{smith_normal_form, AbelianInvariants, IntMatrix};
use crate::geometry::ClassId;
use crate::oracle::{abelian_oracle, finite_oracle, polycyclic_oracle, surface_central_oracle, PcBuilder, PcPresentation};
use crate::presentation::{parse_presentation, FinitePresentation, Letter, Word};

use super::{CatalogEntry, IsoError};

/// The defining relators of a polycyclic presentation as a finite presentation
/// on the polycyclic generators.
pub fn pc_relator_presentation(pc: &PcPresentation) -> FinitePresentation {
    let relators = pc
        .relator_syllables()
        .into_iter()
        .map(|syl| {
            let mut w = Word::empty();
            for (g, e) in syl {
                for _ in 0..e.unsigned_abs() {
                    w.push(Letter::new(g, e < 0));
                }
            }
            w
        })
        .collect();
    FinitePresentation::with_names(pc.len(), relators, pc.names().to_vec())
        .expect("polycyclic relators form a valid presentation")
}

fn params(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Appends a central cyclic factor of order `m` to a presentation string body.
fn times_cyclic(gens: &[&str], relators: &[String], m: u64) -> String {
    let mut gens: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
    let mut rels = relators.to_vec();
    if m > 1 {
        for g in &gens {
            rels.push(format!("[{g},c]"));
        }
        rels.push(format!("c^{m}"));
        gens.push("c".into());
    }
    format!("<{} | {}>", gens.join(","), rels.join(", "))
}

fn spherical_entry(id: String, text: String, order: u64, h1: AbelianInvariants) -> Option<CatalogEntry> {
    let presentation = parse_presentation(&text).expect("catalog presentation parses");
    let cap = (order as usize * 16).max(1024);
    let oracle = finite_oracle(&presentation, cap).ok()?;
    let entry = CatalogEntry {
        id,
        presentation,
        oracle,
        geometry: ClassId::Spherical,
        params: params(&[("order", order as i64)]),
        expected_abelianization: h1,
    };
    // self-validation: the enumeration closes at exactly the stated order
    let closed = crate::cosets::todd_coxeter(&entry.presentation, &[], cap).ok()?;
    (closed.index() as u64 == order && entry.validate().is_ok()).then_some(entry)
}

fn with_cyclic(h1: &[u64], m: u64) -> AbelianInvariants {
    let mut orders = h1.to_vec();
    if m > 1 {
        orders.push(m);
    }
    AbelianInvariants::new(0, &orders)
}

/// All finite groups of the given order acting freely on the 3-sphere:
/// cyclic groups, dicyclic groups, the groups `D'`, `T'`, and the binary
/// octahedral and icosahedral groups, each times a coprime cyclic factor.
pub fn spherical_catalog(order: u64) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    if order == 0 {
        return out;
    }
    let suffix = |m: u64| if m > 1 { format!("xC{m}") } else { String::new() };

    out.extend(spherical_entry(
        format!("C{order}"),
        format!("<a | a^{order}>"),
        order,
        AbelianInvariants::new(0, &[order]),
    ));

    // dicyclic Q_{4n}, n >= 2
    for n in 2..=order / 4 {
        let q = 4 * n;
        if order % q != 0 {
            continue;
        }
        let m = order / q;
        if q.gcd(&m) != 1 {
            continue;
        }
        let rels = vec![format!("x^{}", 2 * n), format!("y^2 x^-{n}"), "y^-1 x y x".to_string()];
        let h1: &[u64] = if n % 2 == 0 { &[2, 2] } else { &[4] };
        out.extend(spherical_entry(
            format!("Q{q}{}", suffix(m)),
            times_cyclic(&["x", "y"], &rels, m),
            order,
            with_cyclic(h1, m),
        ));
    }

    // D'_{2^k (2n+1)}, k >= 3, n >= 1
    let mut two_k = 8;
    while two_k * 3 <= order {
        let mut odd = 3;
        while two_k * odd <= order {
            let base = two_k * odd;
            if order % base == 0 {
                let m = order / base;
                if m.gcd(&(2 * odd)) == 1 {
                    let rels = vec![format!("x^{two_k}"), format!("y^{odd}"), "x y x^-1 y".to_string()];
                    out.extend(spherical_entry(
                        format!("D'{two_k}.{odd}{}", suffix(m)),
                        times_cyclic(&["x", "y"], &rels, m),
                        order,
                        with_cyclic(&[two_k], m),
                    ));
                }
            }
            odd += 2;
        }
        two_k *= 2;
    }

    // T'_{8 3^k}, k >= 1
    let mut three_k = 3;
    while 8 * three_k <= order {
        let base = 8 * three_k;
        if order % base == 0 {
            let m = order / base;
            if m.gcd(&6) == 1 {
                let rels = vec![
                    "x^2 y^-2".to_string(),
                    "(x y)^2 y^-2".to_string(),
                    "z x z^-1 y^-1".to_string(),
                    "z y z^-1 (x y)^-1".to_string(),
                    format!("z^{three_k}"),
                ];
                out.extend(spherical_entry(
                    format!("T'{base}{}", suffix(m)),
                    times_cyclic(&["x", "y", "z"], &rels, m),
                    order,
                    with_cyclic(&[three_k], m),
                ));
            }
        }
        three_k *= 3;
    }

    // binary octahedral and icosahedral
    for (base, top, coprime, h1, name) in [(48u64, 4, 6u64, &[2u64][..], "O*"), (120, 5, 30, &[][..], "I*")] {
        if order % base == 0 {
            let m = order / base;
            if m.gcd(&coprime) == 1 {
                let rels = vec!["(s t)^2 s^-3".to_string(), format!("s^3 t^-{top}")];
                out.extend(spherical_entry(
                    format!("{name}{}", suffix(m)),
                    times_cyclic(&["s", "t"], &rels, m),
                    order,
                    with_cyclic(h1, m),
                ));
            }
        }
    }
    out
}

/// Orders up to `bound` with at least one catalog entry besides the cyclic group.
pub fn spherical_orders_up_to(bound: u64) -> Vec<u64> {
    (1..=bound).filter(|&n| spherical_catalog(n).len() > 1).collect()
}

/// `Gamma_e`: the circle bundle over the torus with Euler number `e >= 1`.
pub fn gamma_e_entry(e: u64) -> Result<CatalogEntry, IsoError> {
    if e == 0 {
        return Err(IsoError::Parameter("Gamma_e needs e >= 1".into()));
    }
    let ei = e as i64;
    // [a,b] = a b a^-1 b^-1 = z^e
    let pc = PcBuilder::new(&["a", "b", "z"], &[0, 0, 0])
        .conj(0, 1, &[0, 1, -ei])
        .conj_inv(0, 1, &[0, 1, ei])
        .build()
        .expect("Heisenberg-type presentation is consistent");
    let presentation = parse_presentation(&format!("<a,b,z | [a,b] z^-{e}, [a,z], [b,z]>")).expect("parses");
    let entry = CatalogEntry {
        id: format!("Gamma{e}"),
        presentation,
        oracle: polycyclic_oracle(pc, None),
        geometry: ClassId::Nil,
        params: params(&[("e", ei)]),
        expected_abelianization: AbelianInvariants::new(2, &[e]),
    };
    entry.validate()?;
    Ok(entry)
}

/// The torus bundle with monodromy `a` (column `j` is the image of the `j`-th
/// fiber generator).
pub fn torus_bundle_entry(a: [[i64; 2]; 2]) -> Result<CatalogEntry, IsoError> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det != 1 && det != -1 {
        return Err(IsoError::Parameter(format!("monodromy determinant {det} is not +-1")));
    }
    let trace = a[0][0] + a[1][1];
    // t^-1 x t is the inverse monodromy
    let inv = [[det * a[1][1], -det * a[0][1]], [-det * a[1][0], det * a[0][0]]];
    let pc = PcBuilder::new(&["t", "a", "b"], &[0, 0, 0])
        .conj_inv(0, 1, &[0, a[0][0], a[1][0]])
        .conj_inv(0, 2, &[0, a[0][1], a[1][1]])
        .conj(0, 1, &[0, inv[0][0], inv[1][0]])
        .conj(0, 2, &[0, inv[0][1], inv[1][1]])
        .build()
        .map_err(|e| IsoError::Parameter(e.to_string()))?;
    let text = format!(
        "<a,b,t | [a,b], t a t^-1 = a^{} b^{}, t b t^-1 = a^{} b^{}>",
        a[0][0], a[1][0], a[0][1], a[1][1]
    );
    let presentation = parse_presentation(&text).expect("parses");
    let images = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
    // H1 = Z + coker(A - I)
    let snf = smith_normal_form(&IntMatrix::from_rows(
        2,
        &[vec![a[0][0] - 1, a[1][0]], vec![a[0][1], a[1][1] - 1]],
    ));
    let mut orders: Vec<u64> = snf
        .diagonal()
        .iter()
        .map(|d| d.magnitude().try_into().unwrap_or(u64::MAX))
        .collect();
    orders.push(0);
    let sol = det == 1 && trace.abs() > 2;
    let entry = CatalogEntry {
        id: format!("T[{},{};{},{}]", a[0][0], a[0][1], a[1][0], a[1][1]),
        presentation,
        oracle: polycyclic_oracle(pc, Some(images)),
        geometry: ClassId::Sol,
        params: params(&[
            ("a11", a[0][0]),
            ("a12", a[0][1]),
            ("a21", a[1][0]),
            ("a22", a[1][1]),
            ("det", det),
            ("trace", trace),
            ("sol", i64::from(sol)),
        ]),
        expected_abelianization: AbelianInvariants::from_orders(&orders),
    };
    entry.validate()?;
    Ok(entry)
}

/// `Gamma_{g,e}`: the circle bundle over the genus-`g` surface with Euler number `e`.
pub fn circle_bundle_entry(genus: usize, euler: i64) -> Result<CatalogEntry, IsoError> {
    if genus < 2 || euler < 0 {
        return Err(IsoError::Parameter(format!(
            "circle bundles need genus >= 2 and e >= 0, got ({genus}, {euler})"
        )));
    }
    let mut gens: Vec<String> = Vec::new();
    for i in 1..=genus {
        gens.push(format!("a{i}"));
        gens.push(format!("b{i}"));
    }
    let mut rel: String = (1..=genus).map(|i| format!("[a{i},b{i}]")).collect();
    if euler != 0 {
        rel.push_str(&format!(" z^-{euler}"));
    }
    let mut rels = vec![rel];
    rels.extend(gens.iter().map(|g| format!("[{g},z]")));
    gens.push("z".into());
    let presentation = parse_presentation(&format!("<{} | {}>", gens.join(","), rels.join(", "))).expect("parses");
    let torsion: Vec<u64> = if euler > 0 { vec![euler as u64] } else { vec![] };
    let free = if euler > 0 { 2 * genus } else { 2 * genus + 1 };
    let entry = CatalogEntry {
        id: format!("Gamma({genus},{euler})"),
        presentation,
        oracle: surface_central_oracle(genus, euler),
        geometry: if euler == 0 { ClassId::H2xR } else { ClassId::SL2R },
        params: params(&[("g", genus as i64), ("e", euler)]),
        expected_abelianization: AbelianInvariants::new(free, &torsion),
    };
    entry.validate()?;
    Ok(entry)
}

/// The three groups of closed S2xR manifolds: Z, Z x Z/2 and Z/2 * Z/2.
pub fn s2r_catalog() -> Vec<CatalogEntry> {
    let z = parse_presentation("<t | >").expect("parses");
    let z2 = parse_presentation("<t,s | [t,s], s^2>").expect("parses");
    let dinf = parse_presentation("<a,b | a^2, b^2>").expect("parses");
    // D_inf as <a> acting on <t = ab> by inversion
    let pc = PcBuilder::new(&["a", "t"], &[2, 0])
        .conj(0, 1, &[0, -1])
        .build()
        .expect("infinite dihedral presentation is consistent");
    let entries = vec![
        CatalogEntry {
            id: "Z".into(),
            oracle: abelian_oracle(&crate::abelian::relation_matrix(&z)),
            presentation: z,
            geometry: ClassId::S2xR,
            params: params(&[]),
            expected_abelianization: AbelianInvariants::new(1, &[]),
        },
        CatalogEntry {
            id: "ZxZ/2".into(),
            oracle: abelian_oracle(&crate::abelian::relation_matrix(&z2)),
            presentation: z2,
            geometry: ClassId::S2xR,
            params: params(&[]),
            expected_abelianization: AbelianInvariants::new(1, &[2]),
        },
        CatalogEntry {
            id: "D_inf".into(),
            oracle: polycyclic_oracle(pc, Some(vec![vec![1, 0], vec![1, 1]])),
            presentation: dinf,
            geometry: ClassId::S2xR,
            params: params(&[]),
            expected_abelianization: AbelianInvariants::new(0, &[2, 2]),
        },
    ];
    for e in &entries {
        e.validate().expect("S2xR catalog validates");
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::abelianization;
    use crate::oracle::self_test;

    fn ids(order: u64) -> Vec<String> {
        spherical_catalog(order).into_iter().map(|e| e.id).collect()
    }

    #[test]
    fn spherical_small_orders() {
        assert_eq!(ids(7), vec!["C7"]);
        assert_eq!(ids(8), vec!["C8", "Q8"]);
        let mut o24 = ids(24);
        o24.sort();
        assert_eq!(o24, vec!["C24", "D'8.3", "Q24", "Q8xC3", "T'24"]);
        assert!(ids(48).contains(&"O*".to_string()));
        assert!(ids(120).contains(&"I*".to_string()));
        assert_eq!(ids(1), vec!["C1"]);
    }

    #[test]
    fn spherical_entries_validate() {
        for n in 1..=48 {
            for e in spherical_catalog(n) {
                assert_eq!(e.param("order"), Some(n as i64));
                e.validate().unwrap();
            }
        }
    }

    #[test]
    fn torus_bundles() {
        let t = torus_bundle_entry([[2, 1], [1, 1]]).unwrap();
        assert_eq!(t.param("sol"), Some(1));
        assert_eq!(t.param("trace"), Some(3));
        self_test(&t.oracle, Some(&t.presentation), 1, 200).unwrap();
        let id = torus_bundle_entry([[1, 0], [0, 1]]).unwrap();
        assert_eq!(id.param("sol"), Some(0));
        assert_eq!(id.expected_abelianization, AbelianInvariants::new(3, &[]));
        let rot = torus_bundle_entry([[0, -1], [1, 0]]).unwrap();
        assert_eq!(rot.param("sol"), Some(0));
        assert!(torus_bundle_entry([[2, 0], [0, 1]]).is_err());
        // det -1 monodromy is accepted but never Sol
        assert_eq!(torus_bundle_entry([[1, 1], [1, 0]]).unwrap().param("sol"), Some(0));
    }

    #[test]
    fn circle_bundles_and_gamma() {
        let c = circle_bundle_entry(2, 3).unwrap();
        assert_eq!(abelianization(&c.presentation), AbelianInvariants::new(4, &[3]));
        assert_eq!(c.geometry, ClassId::SL2R);
        let c0 = circle_bundle_entry(2, 0).unwrap();
        assert_eq!(abelianization(&c0.presentation), AbelianInvariants::new(5, &[]));
        assert!(circle_bundle_entry(1, 0).is_err());
        let g = gamma_e_entry(2).unwrap();
        assert_eq!(abelianization(&g.presentation), AbelianInvariants::new(2, &[2]));
        self_test(&g.oracle, Some(&g.presentation), 2, 200).unwrap();
        assert!(gamma_e_entry(0).is_err());
    }

    #[test]
    fn s2r_entries() {
        let cat = s2r_catalog();
        assert_eq!(cat.len(), 3);
        assert_eq!(cat[2].expected_abelianization, AbelianInvariants::new(0, &[2, 2]));
        for e in &cat {
            self_test(&e.oracle, Some(&e.presentation), 3, 200).unwrap();
        }
    }
}
