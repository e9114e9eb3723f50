//! Polynomial systems whose solutions are representations into the image
//! of `sym2`.
//!
//! Generator `g` gets nine variables `g<g>_<r><c>` (`r`, `c` in `1..=3`) for
//! the entries of its 3x3 image. Inverses are written as adjugates, which is
//! exact on the determinant-one locus.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::presentation::FinitePresentation;

/// Sorted `(variable, exponent)` pairs.
type Monomial = Vec<(usize, u32)>;

/// Sparse polynomial with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Vec::new(), BigInt::from(c));
        p
    }

    pub fn var(v: usize) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(vec![(v, 1)], BigInt::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: i64) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.add(&o.scale(-1))
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(mul_monomials(m1, m2), c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (m, c)| {
            let t = m
                .iter()
                .fold(BigRational::from_integer(c.clone()), |t, &(v, e)| t * values[v].pow(e as i32));
            acc + t
        })
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Highest total degree first reads naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| std::cmp::Reverse(m.iter().map(|&(_, e)| e).sum::<u32>()));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let abs = c.abs();
            let factors: Vec<String> = m
                .iter()
                .map(|&(v, e)| if e == 1 { names[v].clone() } else { format!("{}^{e}", names[v]) })
                .collect();
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("{abs}*{}", factors.join("*")));
            }
        }
        out
    }
}

/// The emitted system: nine constraints per generator, then nine entry
/// equations per relator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepVarSystem {
    pub variables: Vec<String>,
    pub polynomials: Vec<Polynomial>,
}

impl RepVarSystem {
    /// Substitutes rational values, in variable order.
    pub fn eval(&self, values: &[BigRational]) -> Vec<BigRational> {
        self.polynomials.iter().map(|p| p.eval(values)).collect()
    }
}

impl fmt::Display for RepVarSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# variables: {}", self.variables.join(" "))?;
        for p in &self.polynomials {
            writeln!(f, "{}", p.format_with(&self.variables))?;
        }
        Ok(())
    }
}

type PolyMat = [[Polynomial; 3]; 3];

fn generator_matrix(g: usize) -> PolyMat {
    std::array::from_fn(|r| std::array::from_fn(|c| Polynomial::var(9 * g + 3 * r + c)))
}

fn identity() -> PolyMat {
    std::array::from_fn(|r| std::array::from_fn(|c| Polynomial::constant(i64::from(r == c))))
}

fn mat_mul(x: &PolyMat, y: &PolyMat) -> PolyMat {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| (0..3).fold(Polynomial::zero(), |acc, t| acc.add(&x[r][t].mul(&y[t][c]))))
    })
}

fn adjugate(x: &PolyMat) -> PolyMat {
    // adj(x)[r][c] is the (c, r) cofactor
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let rows: Vec<usize> = (0..3).filter(|&i| i != c).collect();
            let cols: Vec<usize> = (0..3).filter(|&j| j != r).collect();
            let minor = x[rows[0]][cols[0]]
                .mul(&x[rows[1]][cols[1]])
                .sub(&x[rows[0]][cols[1]].mul(&x[rows[1]][cols[0]]));
            if (r + c) % 2 == 0 {
                minor
            } else {
                minor.scale(-1)
            }
        })
    })
}

fn determinant(x: &PolyMat) -> Polynomial {
    let adj = adjugate(x);
    (0..3).fold(Polynomial::zero(), |acc, t| acc.add(&x[0][t].mul(&adj[t][0])))
}

fn variety_constraints(x: &PolyMat) -> Vec<Polynomial> {
    let [[e, f, g], [h, i, j], [k, l, m]] = x;
    vec![
        h.mul(h).sub(&e.mul(k).scale(4)),
        j.mul(j).sub(&g.mul(m).scale(4)),
        f.mul(f).sub(&e.mul(g)),
        l.mul(l).sub(&k.mul(m)),
        f.mul(l).scale(4).sub(&h.mul(j)),
        l.mul(i).scale(2).sub(&h.mul(m)).sub(&k.mul(j)),
        i.mul(i).sub(&e.mul(m)).sub(&g.mul(k)).sub(&f.mul(l).scale(2)),
        e.mul(m).add(&g.mul(k)).sub(&f.mul(l).scale(2)).sub(&Polynomial::constant(1)),
        determinant(x).sub(&Polynomial::constant(1)),
    ]
}

/// Emits `9n + 9s` polynomials for `n` generators and `s` relators.
pub fn emit_repvar_polynomials(p: &FinitePresentation) -> RepVarSystem {
    let n = p.num_generators();
    let variables = (0..n)
        .flat_map(|g| (1..=3).flat_map(move |r| (1..=3).map(move |c| format!("g{g}_{r}{c}"))))
        .collect();
    let gens: Vec<PolyMat> = (0..n).map(generator_matrix).collect();
    let invs: Vec<PolyMat> = gens.iter().map(adjugate).collect();
    let mut polynomials = Vec::with_capacity(9 * (n + p.relators().len()));
    for g in &gens {
        polynomials.extend(variety_constraints(g));
    }
    for rel in p.relators() {
        let product = rel.letters().iter().fold(identity(), |acc, l| {
            let m = if l.is_inverse() { &invs[l.generator()] } else { &gens[l.generator()] };
            mat_mul(&acc, m)
        });
        let id = identity();
        for r in 0..3 {
            for c in 0..3 {
                polynomials.push(product[r][c].sub(&id[r][c]));
            }
        }
    }
    RepVarSystem { variables, polynomials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{sym2, Mat2};
    use crate::presentation::parse_presentation;

    fn values_of(mats: &[Mat2]) -> Vec<BigRational> {
        mats.iter()
            .flat_map(|m| {
                let s = sym2(m);
                s.rows()
                    .into_iter()
                    .flatten()
                    .map(|x| x.as_rational().unwrap().clone())
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    #[test]
    fn counts() {
        let p = parse_presentation("<a | >").unwrap();
        let s = emit_repvar_polynomials(&p);
        assert_eq!((s.polynomials.len(), s.variables.len()), (9, 9));
        let p = parse_presentation("<a,b | [a,b]>").unwrap();
        assert_eq!(emit_repvar_polynomials(&p).polynomials.len(), 27);
    }

    #[test]
    fn commuting_pair_is_a_solution() {
        let p = parse_presentation("<a,b | [a,b]>").unwrap();
        let s = emit_repvar_polynomials(&p);
        let a = Mat2::from_ints([[1, 1], [0, 1]]);
        let b = Mat2::from_ints([[-1, 3], [0, -1]]);
        assert!(s.eval(&values_of(&[a.clone(), b])).iter().all(Zero::is_zero));
        // A noncommuting pair violates a relator equation but not the variety.
        let c = Mat2::from_ints([[1, 0], [1, 1]]);
        let vals = s.eval(&values_of(&[a, c]));
        assert!(vals[..18].iter().all(Zero::is_zero));
        assert!(vals[18..].iter().any(|v| !v.is_zero()));
    }

    #[test]
    fn text_format() {
        let p = parse_presentation("<a | a>").unwrap();
        let text = emit_repvar_polynomials(&p).to_string();
        assert!(text.starts_with("# variables: g0_11 g0_12"));
        assert!(text.lines().nth(1).unwrap() == "-4*g0_11*g0_31 + g0_21^2");
        assert_eq!(text.lines().count(), 1 + 18);
        assert!(text.lines().last().unwrap().contains("g0_33 - 1"));
    }
}
