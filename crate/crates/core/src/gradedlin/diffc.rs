//! The complex `0 -> S⊗∧ⁿV -> Diff^{n-1}⊗D(Sym^{n-1}V) -> ... -> Diff⊗DV -> S`
//! over `S = k[y_1..y_n]`, with `Diff^i` realized as the image of the Koszul
//! differential `S⊗∧^{i+1}V -> S⊗∧^iV`.

use super::complex::{subsets, FreeComplex, GenMap, Summand, Term};
use super::graded::GradedComplex;
use super::poly::{mono_div, poly_term, var_mono, Mono, PolyMatrix, PolyRing};
use super::{GradedError, Result};
use crate::hilbert::{DegreeVector, WeightedRingSpec};
use std::sync::Arc;

/// Polynomial form of the complex. `S` may carry any grading whose variables
/// all have the same weight; the construction only uses the variables.
pub fn diff_free_complex(ring: Arc<PolyRing>) -> Result<FreeComplex> {
    let n = ring.nvars();
    if n == 0 {
        return Err(GradedError::Invalid("need at least one variable".into()));
    }
    let w = ring.weight(0).clone();
    if (1..n).any(|v| ring.weight(v) != &w) {
        return Err(GradedError::Invalid("variables must share one weight".into()));
    }
    let zero = DegreeVector::zero(ring.rank());
    let sets: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets(n, k)).collect();
    // E^i: monomials of degree i in the variables
    let monos: Vec<Vec<Mono>> = (0..=n).map(|i| ring.basis(&w.scale(i as i64)).monos.clone()).collect();
    let idx = |set: &Vec<usize>, i: usize| sets[i].iter().position(|x| x == set).expect("subset");

    let mut terms = vec![Term::free(vec![zero.clone()])];
    for i in 1..n {
        let e = monos[i].len();
        let ambient = Term::free(vec![zero.clone(); sets[i].len() * e]).summands;
        let source = vec![Summand::free(w.clone()); sets[i + 1].len() * e];
        // d_{i+1} ⊗ 1
        let mut g = PolyMatrix::zero(ambient.len(), source.len());
        for (c, set) in sets[i + 1].iter().enumerate() {
            for t in 0..set.len() {
                let mut rest = set.clone();
                let v = rest.remove(t);
                let r = idx(&rest, i);
                let sign = if t % 2 == 0 { 1 } else { -1 };
                for m in 0..e {
                    g.set(r * e + m, c * e + m, poly_term(var_mono(v), sign));
                }
            }
        }
        terms.push(Term {
            summands: ambient,
            gens: Some(GenMap { source, map: g }),
            name: Some(format!("Diff^{i}⊗D(Sym^{i}V)")),
        });
    }
    terms.push(Term::free(vec![w.scale(n as i64)]));

    let mut diffs = Vec::new();
    // 1 ⊗ α between the middle terms, and the pairing onto S at the right end
    for i in 1..n {
        let (e, e1) = (monos[i].len(), monos[i - 1].len());
        let mut d = PolyMatrix::zero(sets[i - 1].len() * e1, sets[i].len() * e);
        for (c, set) in sets[i].iter().enumerate() {
            for (m, &mu) in monos[i].iter().enumerate() {
                for (s, &v) in set.iter().enumerate() {
                    let Some(q) = mono_div(mu, var_mono(v)) else { continue };
                    let mut rest = set.clone();
                    rest.remove(s);
                    let r = idx(&rest, i - 1);
                    let qi = monos[i - 1].iter().position(|&x| x == q).expect("monomial");
                    let sign = if s % 2 == 0 { 1 } else { -1 };
                    d.add_to(r * e1 + qi, c * e + m, &poly_term(0, sign));
                }
            }
        }
        diffs.push(d);
    }
    // ω ↦ Σ m·d_n(e_[n]) ⊗ μ_m over monomials m of degree n-1
    let e = monos[n - 1].len();
    let mut top = PolyMatrix::zero(sets[n - 1].len() * e, 1);
    let full: Vec<usize> = (0..n).collect();
    for t in 0..n {
        let mut rest = full.clone();
        let v = rest.remove(t);
        let r = idx(&rest, n - 1);
        let sign = if t % 2 == 0 { 1 } else { -1 };
        for (m, &mu) in monos[n - 1].iter().enumerate() {
            top.set(r * e + m, 0, poly_term(mu + var_mono(v), sign));
        }
    }
    diffs.push(top);
    FreeComplex::new(ring, terms, diffs)
}

/// The complex in internal degrees `lo..=hi` over `k[y_1..y_n]`, standard grading.
pub fn diff_complex(spec: &WeightedRingSpec, window: (i64, i64)) -> Result<GradedComplex> {
    if spec.rank() != 1 || spec.variables().iter().any(|v| v.weight != DegreeVector::scalar(1)) {
        return Err(GradedError::Invalid("diff_complex needs a standard graded ring".into()));
    }
    let ring = PolyRing::new(spec.clone())?;
    let c = diff_free_complex(ring)?;
    let labels = c.terms().iter().map(|t| t.name.clone().unwrap_or_else(|| t.label())).collect();
    GradedComplex::from_free(&c, DegreeVector::scalar, window, spec.field(), labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> WeightedRingSpec {
        let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        WeightedRingSpec::standard(&names).unwrap()
    }

    #[test]
    fn cokernel_is_the_residue_field() {
        for n in 1..=3 {
            let h = diff_complex(&spec(n), (-1, 6)).unwrap().homology().unwrap();
            assert!(h.equals(&[((0, 0), 1)]), "n = {n}: {h}");
        }
    }

    #[test]
    fn n_one_is_koszul() {
        let c = diff_free_complex(PolyRing::new(spec(1)).unwrap()).unwrap();
        assert_eq!(c.ranks(), vec![1, 1]);
        assert_eq!(c.term(1).summands[0].degree, DegreeVector::scalar(1));
        assert!(c.terms().iter().all(|t| t.gens.is_none()));
    }
}
