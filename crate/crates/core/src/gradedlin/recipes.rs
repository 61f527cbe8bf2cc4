//! The explicit complexes of the worked examples, built from Koszul complexes
//! by truncation, tensor products, cones and hand-written maps, together with
//! the homology each one is expected to have.
//!
//! Each recipe is a bigraded [`FreeComplex`] plus the diagonal shift at which it
//! is read. Expected homology is listed as `((position, degree), dim)`.

use super::complex::{FreeComplex, GenMap, Summand, Term};
use super::graded::{GradedComplex, HomologyTable};
use super::poly::{poly_mul, poly_term, var_mono, PolyMatrix, PolyRing};
use super::{diff_free_complex, Result};
use crate::hilbert::{DegreeVector, FieldSpec, WeightedRingSpec};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Recipe {
    pub name: String,
    pub complex: FreeComplex,
    pub shift: i64,
    pub expected: Vec<((usize, i64), usize)>,
}

/// Outcome of checking a recipe on a window.
#[derive(Clone, Debug)]
pub struct RecipeCheck {
    pub name: String,
    pub labels: Vec<String>,
    pub homology: HomologyTable,
    pub passed: bool,
}

impl Recipe {
    pub fn graded(&self, window: (i64, i64), field: FieldSpec) -> Result<GradedComplex> {
        GradedComplex::diagonal(&self.complex, self.shift, window, field)
    }

    /// Computes homology on `[-d, d]` and compares with the expected table
    /// restricted to that window.
    pub fn check(&self, d: i64, field: FieldSpec) -> Result<RecipeCheck> {
        let g = self.graded((-d, d), field)?;
        let homology = g.homology()?;
        let expected: Vec<_> =
            self.expected.iter().copied().filter(|&((_, j), _)| (-d..=d).contains(&j)).collect();
        let mut labels = g.labels().to_vec();
        labels.reverse();
        Ok(RecipeCheck { name: self.name.clone(), labels, passed: homology.equals(&expected), homology })
    }
}

fn ring(names: &[&str], weights: &[i64]) -> Arc<PolyRing> {
    PolyRing::new(WeightedRingSpec::weighted(names, weights).expect("ring spec")).expect("ring")
}

/// `k[x0,x1]`, the first factor of the ring of the main example.
pub fn x_ring() -> Arc<PolyRing> {
    ring(&["x0", "x1"], &[1, 1])
}

/// `k[y0,y1,y2]`, the second factor of the ring of the main example.
pub fn y_ring() -> Arc<PolyRing> {
    ring(&["y0", "y1", "y2"], &[1, 1, 1])
}

fn n_choose_2(n: i64) -> usize {
    if n < 2 {
        0
    } else {
        (n * (n - 1) / 2) as usize
    }
}

/// Koszul complex of the `x` variables over `k[x0,x1,y0,y1,y2]`, read at shift `i`.
/// It resolves `k[y]`, so the cokernel is `k[y]_{-i}` in degree `-i`.
pub fn kos_x(i: i64) -> Result<Recipe> {
    let c = FreeComplex::koszul(x_ring()).tensor(&FreeComplex::unit(y_ring()))?;
    let dim = if i <= 0 { n_choose_2(-i + 2) } else { 0 };
    Ok(Recipe { name: format!("kos (1) at i = {i}"), complex: c, shift: i, expected: vec![((0, -i), dim)] })
}

/// Koszul complex of the `y` variables, read at shift `i`; the cokernel
/// `k[x]_i` sits in degree 0.
pub fn kos_y(i: i64) -> Result<Recipe> {
    let c = FreeComplex::unit(x_ring()).tensor(&FreeComplex::koszul(y_ring()))?;
    let dim = if i >= 0 { (i + 1) as usize } else { 0 };
    Ok(Recipe { name: format!("kos (2) at i = {i}"), complex: c, shift: i, expected: vec![((0, 0), dim)] })
}

/// `0 -> M2(-3) -> ω(-2)³ -> R(-1)³ -> M_{-1} -> 0`, whose middle image is `Ω²ω`.
pub fn omega_two() -> Result<Recipe> {
    let mut r = kos_y(-1)?;
    r.name = "Ω²ω sequence".into();
    Ok(r)
}

fn split_pair(
    a: &FreeComplex,
    ta: i64,
    b: &FreeComplex,
    tb: i64,
) -> Result<FreeComplex> {
    let (xa, ya, fa) = a.truncate_split(|d| d.entries()[0] >= ta)?;
    let (xb, yb, fb) = b.truncate_split(|d| d.entries()[0] >= tb)?;
    let x = xa.tensor(&xb)?;
    let y = ya.tensor(&yb)?;
    let f = fa.tensor(&fb, (&xa, &ya), (&xb, &yb))?;
    f.check(&x, &y)?;
    f.cone(&x, &y)
}

fn twisted(c: FreeComplex, t: i64) -> FreeComplex {
    if t == 0 {
        c
    } else {
        c.twist(&DegreeVector::scalar(t))
    }
}

/// The three 3-almost split sequences over `k[x,y,z] # k[u,v]` (weights
/// `1,1,1` and `1,2`), ending at `R`, `M1` and `M_{-1}`.
pub fn three_ar() -> Result<Vec<Recipe>> {
    let a = FreeComplex::koszul(ring(&["x", "y", "z"], &[1, 1, 1]));
    let b = FreeComplex::koszul(ring(&["u", "v"], &[1, 2]));
    let cases = [("R", 0, 2, 0, 2, true), ("M1", 1, 2, 0, 1, false), ("M-1", -1, 2, 0, 3, false)];
    build_ar("3AR", &a, &b, &cases)
}

/// The three 4-almost split sequences over `k[x0,x1,x2] # k[y0,y1,y2]`.
pub fn four_ar() -> Result<Vec<Recipe>> {
    let a = FreeComplex::koszul(ring(&["x0", "x1", "x2"], &[1, 1, 1]));
    let b = FreeComplex::koszul(ring(&["y0", "y1", "y2"], &[1, 1, 1]));
    let cases = [("R", 0, 2, 0, 2, true), ("M1", 1, 2, 0, 1, false), ("M-1", 0, 1, 1, 2, false)];
    build_ar("4AR", &a, &b, &cases)
}

fn build_ar(
    tag: &str,
    a: &FreeComplex,
    b: &FreeComplex,
    cases: &[(&str, i64, i64, i64, i64, bool)],
) -> Result<Vec<Recipe>> {
    cases
        .iter()
        .map(|&(at, twa, ta, twb, tb, projective)| {
            let c = split_pair(&twisted(a.clone(), twa), ta, &twisted(b.clone(), twb), tb)?;
            // ending at R the sequence is the fundamental one, with cokernel k
            let expected = if projective { vec![((0, 0), 1)] } else { vec![] };
            Ok(Recipe { name: format!("{tag} ending at {at}"), complex: c, shift: 0, expected })
        })
        .collect()
}

fn bigraded_ring() -> Arc<PolyRing> {
    x_ring().tensor(&y_ring()).expect("tensor ring")
}

/// Generator degree of `S(-a,-b)`.
fn deg(a: i64, b: i64) -> DegreeVector {
    DegreeVector::new(vec![a, b]).expect("rank 2")
}

fn y_koszul_maps() -> Vec<PolyMatrix> {
    // y-variables sit after x0, x1 in the bigraded ring
    let k = FreeComplex::koszul(y_ring());
    (1..k.len())
        .map(|i| {
            let mut m = k.diff(i).clone();
            for p in m.entries.values_mut() {
                *p = super::poly::poly_shift_vars(p, 2);
            }
            m
        })
        .collect()
}

fn x_var(v: usize, c: i64) -> super::poly::Poly {
    poly_term(var_mono(v), c)
}

fn y_var(v: usize, c: i64) -> super::poly::Poly {
    poly_term(var_mono(v + 2), c)
}

/// Sink sequence `0 -> Ω²ω -> R(-1)³ -> R² -> ω -> 0`, read at shift 1.
pub fn claim_one() -> Result<Recipe> {
    let s = bigraded_ring();
    let ky = y_koszul_maps();
    let omega2 = Term {
        summands: vec![Summand::free(deg(2, 1)); 3],
        gens: Some(GenMap { source: vec![Summand::free(deg(2, 2)); 3], map: ky[1].clone() }),
        name: Some("Ω²ω".into()),
    };
    let terms = vec![
        Term::free(vec![deg(0, 0)]),
        Term::free(vec![deg(1, 0); 2]),
        Term::free(vec![deg(2, 1); 3]),
        omega2,
    ];
    let mut d1 = PolyMatrix::zero(1, 2);
    d1.set(0, 0, x_var(0, 1));
    d1.set(0, 1, x_var(1, 1));
    let mut d2 = PolyMatrix::zero(2, 3);
    for b in 0..3 {
        d2.set(0, b, poly_mul(&x_var(1, -1), &y_var(b, 1))?);
        d2.set(1, b, poly_mul(&x_var(0, 1), &y_var(b, 1))?);
    }
    let c = FreeComplex::new(s, terms, vec![d1, d2, PolyMatrix::identity(3)])?;
    Ok(Recipe { name: "Claim 1 sink sequence".into(), complex: c, shift: 1, expected: vec![] })
}

/// `0 -> R(-3) -> ω(-3)² -> ω(-2)³ -> Ω²ω -> 0`, read at shift -1.
pub fn claim_two() -> Result<Recipe> {
    let s = bigraded_ring();
    let ky = y_koszul_maps();
    let omega2 = Term {
        summands: vec![Summand::free(deg(0, 1)); 3],
        gens: Some(GenMap { source: vec![Summand::free(deg(0, 2)); 3], map: ky[1].clone() }),
        name: Some("Ω²ω".into()),
    };
    let terms = vec![
        omega2,
        Term::free(vec![deg(0, 2); 3]),
        Term::free(vec![deg(1, 3); 2]),
        Term::free(vec![deg(2, 3)]),
    ];
    let mut d2 = PolyMatrix::zero(3, 2);
    for a in 0..2 {
        for (r, p) in ky[2].by_column()[0].iter() {
            d2.set(*r, a, poly_mul(&x_var(a, 1), p)?);
        }
    }
    let mut d3 = PolyMatrix::zero(2, 1);
    d3.set(0, 0, x_var(1, -1));
    d3.set(1, 0, x_var(0, 1));
    let c = FreeComplex::new(s, terms, vec![ky[1].clone(), d2, d3])?;
    Ok(Recipe { name: "Claim 2 sink sequence".into(), complex: c, shift: -1, expected: vec![] })
}

/// `0 -> M3(-3) -> ω(-1)⁶ -> Ω²ω(1)³ -> R -> k -> 0`: the differential-operator
/// complex in three variables, extended to `k[x0,x1]` and read at shift 0.
pub fn claim_three() -> Result<Recipe> {
    let d = diff_free_complex(y_ring())?;
    let c = FreeComplex::unit(x_ring()).tensor(&d)?.named(2, "ω(-1)^6").named(1, "Ω²ω(1)^3");
    Ok(Recipe { name: "Claim 3 core sequence".into(), complex: c, shift: 0, expected: vec![((0, 0), 1)] })
}

/// Every building-block sequence of the main example and the almost split sequences.
pub fn all() -> Result<Vec<Recipe>> {
    let mut out = Vec::new();
    for i in -2..=3 {
        out.push(kos_x(i)?);
        out.push(kos_y(i)?);
    }
    out.push(omega_two()?);
    out.extend(three_ar()?);
    out.extend(four_ar()?);
    out.push(claim_one()?);
    out.push(claim_two()?);
    out.push(claim_three()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_recipe_has_its_expected_homology() {
        for r in all().unwrap() {
            let c = r.check(4, FieldSpec::Rational).unwrap();
            assert!(c.passed, "{}: {}", c.name, c.homology);
        }
    }

    #[test]
    fn displayed_shapes() {
        let labels = |r: &Recipe| {
            let mut l = r.graded((0, 0), FieldSpec::Rational).unwrap().labels().to_vec();
            l.reverse();
            l
        };
        let ar3 = three_ar().unwrap();
        assert_eq!(
            labels(&ar3[0]),
            vec!["R(-3)", "M1(-3)^3+M-1(-2)", "R(-2)^3+R(-1)^3", "M1(-1)+M-1^3", "R"]
        );
        let ar4 = four_ar().unwrap();
        assert_eq!(labels(&ar4[1]), vec!["M1(-3)", "R(-2)^3", "M-1(-1)^3", "M-1^3", "R^3", "M1"]);
        assert_eq!(labels(&omega_two().unwrap()), vec!["M2(-3)", "M1(-2)^3", "R(-1)^3", "M-1"]);
        assert_eq!(labels(&claim_three().unwrap())[0], "M3(-3)");
    }

    #[test]
    fn claim_three_terms_are_the_named_modules() {
        let w = (-3, 4);
        let dims = claim_three().unwrap().graded(w, FieldSpec::Rational).unwrap().term_dims().unwrap();
        // Ω²ω as the image term of the Claim 1 sequence, and ω = M1
        let c1 = claim_one().unwrap().graded((-4, 5), FieldSpec::Rational).unwrap().term_dims().unwrap();
        let s = bigraded_ring();
        let m1 = |j: i64| s.dim_at(&DegreeVector::new(vec![1 + j, j]).unwrap());
        for j in w.0..=w.1 {
            assert_eq!(dims[&j][2], 6 * m1(j - 1), "ω(-1)^6 at {j}");
            assert_eq!(dims[&j][1], 3 * c1[&(j + 1)][3], "Ω²ω(1)^3 at {j}");
        }
    }
}
