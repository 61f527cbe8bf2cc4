//! Monomials, sparse polynomials and cached monomial bases of graded pieces.

use super::{GradedError, Result};
use crate::hilbert::{DegreeVector, Variable, WeightedRingSpec};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

/// Exponent vector packed eight bits per variable.
pub type Mono = u128;

pub const MAX_VARS: usize = 16;
const MAX_EXP: u128 = 0xff;

pub fn exponent(m: Mono, v: usize) -> u32 {
    ((m >> (8 * v)) & MAX_EXP) as u32
}

pub fn var_mono(v: usize) -> Mono {
    1 << (8 * v)
}

pub fn mono_from_exps(e: &[u32]) -> Mono {
    e.iter().enumerate().fold(0, |m, (v, &k)| m | ((k as u128) << (8 * v)))
}

pub fn mono_mul(a: Mono, b: Mono) -> Mono {
    // exponents stay far below 256 on desk-scale windows
    debug_assert!((0..MAX_VARS).all(|v| exponent(a, v) + exponent(b, v) <= MAX_EXP as u32));
    a + b
}

/// `a / b` when `b` divides `a`.
pub fn mono_div(a: Mono, b: Mono) -> Option<Mono> {
    (0..MAX_VARS).all(|v| exponent(a, v) >= exponent(b, v)).then(|| a - b)
}

/// Monomials of one degree, in descending lexicographic order of exponents.
#[derive(Debug)]
pub struct Basis {
    pub monos: Vec<Mono>,
    index: HashMap<Mono, u32>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn index(&self, m: Mono) -> Option<u32> {
        self.index.get(&m).copied()
    }
}

/// A weighted polynomial ring together with a cache of its graded pieces.
#[derive(Debug)]
pub struct PolyRing {
    spec: WeightedRingSpec,
    bases: RwLock<HashMap<DegreeVector, Arc<Basis>>>,
}

impl PolyRing {
    pub fn new(spec: WeightedRingSpec) -> Result<Arc<Self>> {
        if spec.dim() > MAX_VARS {
            return Err(GradedError::TooManyVariables(spec.dim()));
        }
        Ok(Arc::new(Self { spec, bases: RwLock::new(HashMap::new()) }))
    }

    pub fn spec(&self) -> &WeightedRingSpec {
        &self.spec
    }

    pub fn nvars(&self) -> usize {
        self.spec.dim()
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn weight(&self, v: usize) -> &DegreeVector {
        &self.spec.variables()[v].weight
    }

    pub fn degree(&self, m: Mono) -> DegreeVector {
        (0..self.nvars()).fold(DegreeVector::zero(self.rank()), |acc, v| {
            acc.add(&self.weight(v).scale(exponent(m, v) as i64))
        })
    }

    /// Monomial basis of the degree `d` piece.
    pub fn basis(&self, d: &DegreeVector) -> Arc<Basis> {
        if let Some(b) = self.bases.read().expect("basis cache").get(d) {
            return b.clone();
        }
        let mut monos = Vec::new();
        if d.entries().iter().all(|&x| x >= 0) {
            let mut exps = vec![0u32; self.nvars()];
            self.enumerate(0, d.entries().to_vec(), &mut exps, &mut monos);
        }
        let index = monos.iter().enumerate().map(|(k, &m)| (m, k as u32)).collect();
        let b = Arc::new(Basis { monos, index });
        self.bases.write().expect("basis cache").insert(d.clone(), b.clone());
        b
    }

    fn enumerate(&self, v: usize, rest: Vec<i64>, exps: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if v == self.nvars() {
            if rest.iter().all(|&x| x == 0) {
                out.push(mono_from_exps(exps));
            }
            return;
        }
        let w = self.weight(v).entries();
        // largest exponent first gives descending lex order
        let max = w
            .iter()
            .zip(&rest)
            .filter(|(&wi, _)| wi > 0)
            .map(|(&wi, &r)| r / wi)
            .min()
            .unwrap_or(0);
        for k in (0..=max).rev() {
            let r: Vec<i64> = rest.iter().zip(w).map(|(&r, &wi)| r - k * wi).collect();
            exps[v] = k as u32;
            self.enumerate(v + 1, r, exps, out);
        }
        exps[v] = 0;
    }

    pub fn dim_at(&self, d: &DegreeVector) -> usize {
        self.basis(d).len()
    }

    pub fn format_mono(&self, m: Mono) -> String {
        let mut parts = Vec::new();
        for (v, var) in self.spec.variables().iter().enumerate() {
            match exponent(m, v) {
                0 => {}
                1 => parts.push(var.name.clone()),
                e => parts.push(format!("{}^{e}", var.name)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// The ring `self ⊗ other`, graded by `Z^(r+s)`; variables of `self` come first.
    pub fn tensor(&self, other: &PolyRing) -> Result<Arc<PolyRing>> {
        let (r, s) = (self.rank(), other.rank());
        let mut vars: Vec<Variable> = Vec::new();
        for v in self.spec.variables() {
            let mut w = v.weight.entries().to_vec();
            w.extend(std::iter::repeat_n(0, s));
            vars.push(Variable { name: v.name.clone(), weight: DegreeVector::new(w)? });
        }
        for v in other.spec.variables() {
            let mut w = vec![0; r];
            w.extend_from_slice(v.weight.entries());
            vars.push(Variable { name: v.name.clone(), weight: DegreeVector::new(w)? });
        }
        PolyRing::new(WeightedRingSpec::new(vars, self.spec.field())?)
    }
}

/// Sparse polynomial: `(monomial, coefficient)` sorted by monomial.
pub type Poly = Vec<(Mono, i64)>;

pub fn poly_term(m: Mono, c: i64) -> Poly {
    if c == 0 {
        Vec::new()
    } else {
        vec![(m, c)]
    }
}

pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut acc: BTreeMap<Mono, i64> = a.iter().copied().collect();
    for &(m, c) in b {
        *acc.entry(m).or_insert(0) += c;
    }
    acc.into_iter().filter(|e| e.1 != 0).collect()
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    let mut acc: BTreeMap<Mono, i64> = BTreeMap::new();
    for &(m, c) in a {
        for &(n, d) in b {
            let p = c.checked_mul(d).ok_or(GradedError::Overflow)?;
            *acc.entry(mono_mul(m, n)).or_insert(0) += p;
        }
    }
    Ok(acc.into_iter().filter(|e| e.1 != 0).collect())
}

pub fn poly_scale(a: &Poly, k: i64) -> Poly {
    if k == 0 {
        return Vec::new();
    }
    a.iter().map(|&(m, c)| (m, c * k)).collect()
}

/// Shifts variable indices by `by` (used when embedding into a tensor ring).
pub fn poly_shift_vars(a: &Poly, by: usize) -> Poly {
    a.iter().map(|&(m, c)| (m << (8 * by), c)).collect()
}

/// Matrix of polynomials, `(row, col) -> entry`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: BTreeMap<(usize, usize), Poly>,
}

impl PolyMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, poly_term(0, 1));
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        if p.is_empty() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), p);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, p: &Poly) {
        let cur = self.entries.remove(&(r, c)).unwrap_or_default();
        self.set(r, c, poly_add(&cur, p));
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Poly> {
        self.entries.get(&(r, c))
    }

    /// Entries grouped by column.
    pub fn by_column(&self) -> Vec<Vec<(usize, &Poly)>> {
        let mut cols = vec![Vec::new(); self.ncols];
        for (&(r, c), p) in &self.entries {
            cols[c].push((r, p));
        }
        cols
    }

    /// `self * other` (first `other`).
    pub fn compose(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        let mut out = PolyMatrix::zero(self.nrows, other.ncols);
        let rows_of: Vec<Vec<(usize, &Poly)>> = self.by_column();
        for (&(k, j), q) in &other.entries {
            for &(i, p) in &rows_of[k] {
                out.add_to(i, j, &poly_mul(p, q)?);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: i64, k: i64) -> usize {
        if k < 0 || k > n {
            return 0;
        }
        (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1)) as usize
    }

    #[test]
    fn bases_have_expected_sizes() {
        let r = PolyRing::new(WeightedRingSpec::standard(&["x", "y", "z"]).unwrap()).unwrap();
        for d in 0..6 {
            assert_eq!(r.dim_at(&DegreeVector::scalar(d)), binom(d + 2, 2));
        }
        assert_eq!(r.dim_at(&DegreeVector::scalar(-1)), 0);
        let b = r.basis(&DegreeVector::scalar(2));
        assert_eq!(r.format_mono(b.monos[0]), "x^2");
        assert_eq!(r.format_mono(b.monos[5]), "z^2");
        let w = PolyRing::new(WeightedRingSpec::weighted(&["u", "v"], &[1, 2]).unwrap()).unwrap();
        let dims: Vec<usize> = (0..6).map(|d| w.dim_at(&DegreeVector::scalar(d))).collect();
        assert_eq!(dims, vec![1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn tensor_ring_bigraded() {
        let a = PolyRing::new(WeightedRingSpec::standard(&["x0", "x1"]).unwrap()).unwrap();
        let b = PolyRing::new(WeightedRingSpec::standard(&["y0", "y1", "y2"]).unwrap()).unwrap();
        let s = a.tensor(&b).unwrap();
        for j in 0..4 {
            let d = DegreeVector::new(vec![j, j]).unwrap();
            assert_eq!(s.dim_at(&d), (j as usize + 1) * binom(j + 2, 2));
        }
        let m = mono_from_exps(&[1, 0, 0, 2, 0]);
        assert_eq!(s.degree(m), DegreeVector::new(vec![1, 2]).unwrap());
        assert_eq!(mono_div(m, var_mono(3)), Some(mono_from_exps(&[1, 0, 0, 1, 0])));
        assert_eq!(mono_div(m, var_mono(2)), None);
    }

    #[test]
    fn matrix_compose() {
        let x = poly_term(var_mono(0), 1);
        let mut a = PolyMatrix::zero(1, 2);
        a.set(0, 0, x.clone());
        a.set(0, 1, poly_scale(&x, -1));
        let mut b = PolyMatrix::zero(2, 1);
        b.set(0, 0, x.clone());
        b.set(1, 0, x);
        assert!(a.compose(&b).unwrap().is_zero());
    }
}
