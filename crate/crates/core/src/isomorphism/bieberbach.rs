//! The ten closed flat 3-manifold groups, built from affine generators.
//!
//! Each group is `<g_1, ..., g_k, Z^3>` where the `g_i` are affine maps
//! `x -> M x + s` in lattice coordinates lifting a polycyclic series of the
//! holonomy group. The polycyclic presentation is derived by exact rational
//! arithmetic, so only the affine data is transcribed by hand.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::Zero;

use crate::abelian::{AbelianInvariants, IntMatrix, RowLattice};
use crate::geometry::ClassId;
use crate::oracle::{polycyclic_oracle, PcBuilder, PcElement, PcPresentation};

use super::catalog::pc_relator_presentation;
use super::{CatalogEntry, IsoError};

type Mat3 = [[i64; 3]; 3];

const IDENTITY: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0; 3]; 3];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn mat_det(a: &Mat3) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Inverse of a matrix with determinant +-1.
fn mat_inv(a: &Mat3) -> Mat3 {
    let d = mat_det(a);
    assert!(d == 1 || d == -1, "holonomy matrix must be unimodular");
    let mut inv = [[0; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            // cofactor of (j, i)
            let r: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let minor = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]];
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *x = sign * minor * d;
        }
    }
    inv
}

fn mat_vec(a: &Mat3, v: &[Rational64; 3]) -> [Rational64; 3] {
    let mut out = [Rational64::zero(); 3];
    for (i, o) in out.iter_mut().enumerate() {
        for (k, vk) in v.iter().enumerate() {
            *o += Rational64::from(a[i][k]) * vk;
        }
    }
    out
}

/// The affine map `x -> m x + s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineGenerator {
    pub matrix: Mat3,
    pub shift: [Rational64; 3],
}

impl AffineGenerator {
    fn identity() -> Self {
        AffineGenerator {
            matrix: IDENTITY,
            shift: [Rational64::zero(); 3],
        }
    }

    fn translation(v: [i64; 3]) -> Self {
        AffineGenerator {
            matrix: IDENTITY,
            shift: v.map(Rational64::from),
        }
    }

    /// Composition `self` after `other`.
    fn then(&self, other: &AffineGenerator) -> AffineGenerator {
        let ms = mat_vec(&self.matrix, &other.shift);
        AffineGenerator {
            matrix: mat_mul(&self.matrix, &other.matrix),
            shift: [ms[0] + self.shift[0], ms[1] + self.shift[1], ms[2] + self.shift[2]],
        }
    }

    fn inverse(&self) -> AffineGenerator {
        let mi = mat_inv(&self.matrix);
        let s = mat_vec(&mi, &self.shift);
        AffineGenerator {
            matrix: mi,
            shift: [-s[0], -s[1], -s[2]],
        }
    }

    fn pow(&self, k: u64) -> AffineGenerator {
        (0..k).fold(AffineGenerator::identity(), |acc, _| acc.then(self))
    }
}

/// Affine description of one flat manifold group.
#[derive(Debug, Clone)]
pub struct BieberbachSpec {
    pub id: &'static str,
    /// Holonomy lifts with their relative orders, a polycyclic series.
    pub generators: Vec<(AffineGenerator, u64)>,
    pub orientable: bool,
    pub expected_abelianization: AbelianInvariants,
}

fn diag(a: i64, b: i64, c: i64) -> Mat3 {
    [[a, 0, 0], [0, b, 0], [0, 0, c]]
}

fn shift(x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> [Rational64; 3] {
    [
        Rational64::new(x.0, x.1),
        Rational64::new(y.0, y.1),
        Rational64::new(z.0, z.1),
    ]
}

fn gen(matrix: Mat3, shift: [Rational64; 3], order: u64) -> (AffineGenerator, u64) {
    (AffineGenerator { matrix, shift }, order)
}

/// The affine data of all ten groups.
pub fn bieberbach_specs() -> Vec<BieberbachSpec> {
    let o = (0, 1);
    let h = (1, 2);
    let ab = |free: usize, torsion: &[u64]| AbelianInvariants::new(free, torsion);
    vec![
        BieberbachSpec {
            id: "torus",
            generators: vec![],
            orientable: true,
            expected_abelianization: ab(3, &[]),
        },
        BieberbachSpec {
            id: "dicosm",
            generators: vec![gen(diag(-1, -1, 1), shift(o, o, h), 2)],
            orientable: true,
            expected_abelianization: ab(1, &[2, 2]),
        },
        BieberbachSpec {
            id: "tricosm",
            generators: vec![gen([[0, -1, 0], [1, -1, 0], [0, 0, 1]], shift(o, o, (1, 3)), 3)],
            orientable: true,
            expected_abelianization: ab(1, &[3]),
        },
        BieberbachSpec {
            id: "tetracosm",
            generators: vec![gen([[0, -1, 0], [1, 0, 0], [0, 0, 1]], shift(o, o, (1, 4)), 4)],
            orientable: true,
            expected_abelianization: ab(1, &[2]),
        },
        BieberbachSpec {
            id: "hexacosm",
            generators: vec![gen([[1, -1, 0], [1, 0, 0], [0, 0, 1]], shift(o, o, (1, 6)), 6)],
            orientable: true,
            expected_abelianization: ab(1, &[]),
        },
        BieberbachSpec {
            id: "hantzsche-wendt",
            generators: vec![
                gen(diag(1, -1, -1), shift(h, h, o), 2),
                gen(diag(-1, 1, -1), shift(o, h, h), 2),
            ],
            orientable: true,
            expected_abelianization: ab(0, &[4, 4]),
        },
        BieberbachSpec {
            id: "first-amphicosm",
            generators: vec![gen(diag(1, 1, -1), shift(h, o, o), 2)],
            orientable: false,
            expected_abelianization: ab(2, &[2]),
        },
        BieberbachSpec {
            id: "second-amphicosm",
            generators: vec![gen([[1, 0, 0], [0, 0, 1], [0, 1, 0]], shift(h, o, o), 2)],
            orientable: false,
            expected_abelianization: ab(2, &[]),
        },
        BieberbachSpec {
            id: "first-amphidicosm",
            generators: vec![
                gen(diag(1, 1, -1), shift(o, h, o), 2),
                gen(diag(1, -1, 1), shift(h, o, o), 2),
            ],
            orientable: false,
            expected_abelianization: ab(1, &[2, 2]),
        },
        BieberbachSpec {
            id: "second-amphidicosm",
            generators: vec![
                gen(diag(1, 1, -1), shift(o, h, o), 2),
                gen(diag(1, -1, 1), shift(h, o, h), 2),
            ],
            orientable: false,
            expected_abelianization: ab(1, &[4]),
        },
    ]
}

impl BieberbachSpec {
    /// Holonomy elements `g^e` for all exponent vectors, in lexicographic order.
    fn holonomy(&self) -> Vec<(Vec<u64>, AffineGenerator)> {
        let mut out = vec![(vec![], AffineGenerator::identity())];
        for (g, order) in &self.generators {
            let mut next = Vec::new();
            for (e, a) in &out {
                for k in 0..*order {
                    let mut e2 = e.clone();
                    e2.push(k);
                    next.push((e2, a.then(&g.pow(k))));
                }
            }
            out = next;
        }
        out
    }

    /// Collected exponents of an affine element of the group, if it is one.
    fn normal_form(&self, x: &AffineGenerator) -> Option<PcElement> {
        for (e, a) in self.holonomy() {
            if a.matrix != x.matrix {
                continue;
            }
            let d = [x.shift[0] - a.shift[0], x.shift[1] - a.shift[1], x.shift[2] - a.shift[2]];
            let v = mat_vec(&mat_inv(&a.matrix), &d);
            if v.iter().any(|c| !c.is_integer()) {
                return None;
            }
            let mut out: PcElement = e.iter().map(|&k| k as i64).collect();
            out.extend(v.iter().map(|c| c.to_integer()));
            return Some(out);
        }
        None
    }

    fn all_generators(&self) -> Vec<AffineGenerator> {
        let mut gens: Vec<AffineGenerator> = self.generators.iter().map(|(g, _)| *g).collect();
        gens.extend([[1, 0, 0], [0, 1, 0], [0, 0, 1]].map(AffineGenerator::translation));
        gens
    }

    pub fn polycyclic(&self) -> Result<PcPresentation, IsoError> {
        let fail = |reason: String| IsoError::Validation {
            id: self.id.to_string(),
            reason,
        };
        let k = self.generators.len();
        let names: Vec<String> = (0..k)
            .map(|i| ["a", "b"].get(i).map_or(format!("g{i}"), |s| s.to_string()))
            .chain(["x", "y", "z"].map(String::from))
            .collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut orders: Vec<u64> = self.generators.iter().map(|(_, o)| *o).collect();
        orders.extend([0, 0, 0]);
        let holonomy = self.holonomy();
        let mut mats: Vec<Mat3> = holonomy.iter().map(|(_, a)| a.matrix).collect();
        mats.sort();
        mats.dedup();
        if mats.len() != holonomy.len() {
            return Err(fail("holonomy lifts do not form a polycyclic series".into()));
        }
        let gens = self.all_generators();
        let mut b = PcBuilder::new(&name_refs, &orders);
        for i in 0..k {
            let p = self
                .normal_form(&gens[i].pow(orders[i]))
                .ok_or_else(|| fail(format!("power of generator {i} leaves the group")))?;
            b = b.power(i, &p);
            for j in i + 1..gens.len() {
                let c = gens[i].inverse().then(&gens[j]).then(&gens[i]);
                let v = self
                    .normal_form(&c)
                    .ok_or_else(|| fail(format!("conjugate of generator {j} leaves the group")))?;
                b = b.conj(i, j, &v);
            }
        }
        b.build().map_err(|e| fail(e.to_string()))
    }

    /// No nontrivial element has finite order: for every holonomy element
    /// `(M, s)` of order `m` with norm `N = sum M^i`, `N s` avoids `N Z^3`.
    pub fn is_torsion_free(&self) -> bool {
        for (e, a) in self.holonomy() {
            if e.iter().all(|&x| x == 0) {
                continue;
            }
            if a.matrix == IDENTITY {
                return false;
            }
            let mut norm = [[0i64; 3]; 3];
            let mut p = IDENTITY;
            loop {
                for i in 0..3 {
                    for j in 0..3 {
                        norm[i][j] += p[i][j];
                    }
                }
                p = mat_mul(&p, &a.matrix);
                if p == IDENTITY {
                    break;
                }
            }
            let ns = mat_vec(&norm, &a.shift);
            if ns.iter().all(|c| c.is_integer()) {
                let cols: Vec<Vec<i64>> = (0..3).map(|j| (0..3).map(|i| norm[i][j]).collect()).collect();
                let lattice = RowLattice::new(&IntMatrix::from_rows(3, &cols));
                let target: Vec<i64> = ns.iter().map(|c| c.to_integer()).collect();
                if lattice.contains(&target) {
                    return false;
                }
            }
        }
        true
    }

    /// Index of the translation subgroup (the holonomy order).
    pub fn holonomy_order(&self) -> u64 {
        self.generators.iter().map(|(_, o)| o).product()
    }

    pub fn entry(&self) -> Result<CatalogEntry, IsoError> {
        let pc = self.polycyclic()?;
        let presentation = pc_relator_presentation(&pc);
        let oracle = polycyclic_oracle(pc, None);
        let mut params = BTreeMap::new();
        params.insert("holonomy_order".to_string(), self.holonomy_order() as i64);
        params.insert("orientable".to_string(), i64::from(self.orientable));
        let entry = CatalogEntry {
            id: self.id.to_string(),
            presentation,
            oracle,
            geometry: ClassId::Euclidean,
            params,
            expected_abelianization: self.expected_abelianization.clone(),
        };
        entry.validate()?;
        Ok(entry)
    }
}

/// The six orientable and four non-orientable flat 3-manifold groups.
pub fn bieberbach_catalog() -> Vec<CatalogEntry> {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG
        .get_or_init(|| {
            bieberbach_specs()
                .iter()
                .map(|s| s.entry().expect("shipped flat manifold data validates"))
                .collect()
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::abelian::abelianization;
    use num_integer::Integer;

fn denominators_lcm(s: &[Rational64; 3]) -> i64 {
    s.iter().fold(1, |acc, c| acc.lcm(c.denom()))
}

    #[test]
    fn ten_entries_with_expected_homology() {
        let cat = bieberbach_catalog();
        assert_eq!(cat.len(), 10);
        let orientable = cat.iter().filter(|e| e.param("orientable") == Some(1)).count();
        assert_eq!(orientable, 6);
        for e in &cat {
            assert_eq!(abelianization(&e.presentation), e.expected_abelianization, "{}", e.id);
        }
    }

    #[test]
    fn all_torsion_free() {
        for s in bieberbach_specs() {
            assert!(s.is_torsion_free(), "{}", s.id);
        }
    }

    #[test]
    fn torsion_detected() {
        // Z^3 extended by -1 has fixed points
        let s = BieberbachSpec {
            id: "minus-one",
            generators: vec![gen(diag(-1, -1, -1), [Rational64::zero(); 3], 2)],
            orientable: false,
            expected_abelianization: AbelianInvariants::new(0, &[2, 2, 2, 2]),
        };
        assert!(!s.is_torsion_free());
    }

    #[test]
    fn shifts_have_small_denominators() {
        for s in bieberbach_specs() {
            for (g, order) in &s.generators {
                assert_eq!(*order as i64 % denominators_lcm(&g.shift), 0, "{}", s.id);
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let g = AffineGenerator {
            matrix: [[1, -1, 0], [1, 0, 0], [0, 0, 1]],
            shift: [Rational64::zero(), Rational64::zero(), Rational64::new(1, 6)],
        };
        assert_eq!(g.then(&g.inverse()), AffineGenerator::identity());
        assert_eq!(g.pow(6).matrix, IDENTITY);
        assert!(g.pow(6).shift[2].is_one());
    }
}
