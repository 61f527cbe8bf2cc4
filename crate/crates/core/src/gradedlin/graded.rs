//! Complexes of finite dimensional vector spaces, one per internal degree.

use super::complex::{subsets, FreeComplex, Term};
use super::linalg::{collect_sparse, rank, IntMatrix, SparseVec};
use super::poly::{mono_div, var_mono, PolyMatrix, PolyRing};
use super::{par_map, GradedError, Result};
use crate::hilbert::{DegreeVector, FieldSpec, WeightedRingSpec};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// The complex in one internal degree. Position `k` has an ambient space of
/// dimension `dims[k]`; when `gens[k]` is present the actual term is its
/// column span.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreePiece {
    pub dims: Vec<usize>,
    pub gens: Vec<Option<IntMatrix>>,
    pub diffs: Vec<IntMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedComplex {
    labels: Vec<String>,
    field: FieldSpec,
    pieces: BTreeMap<i64, DegreePiece>,
}

/// Nonzero homology dimensions keyed by `(position, internal degree)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub positions: usize,
    pub window: (i64, i64),
    #[serde(serialize_with = "super::triples")]
    pub dims: BTreeMap<(usize, i64), usize>,
}

impl HomologyTable {
    pub fn at(&self, position: usize, degree: i64) -> usize {
        self.dims.get(&(position, degree)).copied().unwrap_or(0)
    }

    pub fn total(&self, position: usize) -> usize {
        self.dims.iter().filter(|e| e.0 .0 == position).map(|e| e.1).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// True when the only nonzero entries are exactly `expected`.
    pub fn equals(&self, expected: &[((usize, i64), usize)]) -> bool {
        let e: BTreeMap<(usize, i64), usize> =
            expected.iter().copied().filter(|e| e.1 > 0).collect();
        self.dims == e
    }

    /// Vanishing at every position strictly between the two ends.
    pub fn inner_exact(&self) -> bool {
        self.dims.keys().all(|&(k, _)| k == 0 || k + 1 == self.positions)
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dims.is_empty() {
            return write!(f, "exact on [{}, {}]", self.window.0, self.window.1);
        }
        let parts: Vec<String> =
            self.dims.iter().map(|(&(k, j), &d)| format!("H_{k}[{j}] = {d}")).collect();
        write!(f, "{} on [{}, {}]", parts.join(", "), self.window.0, self.window.1)
    }
}

/// Matrix of a polynomial map between `⊕ S(-d_s)` pieces at total degree `e`.
fn piece_matrix(
    ring: &PolyRing,
    m: &PolyMatrix,
    rows: &[DegreeVector],
    cols: &[DegreeVector],
    e: &DegreeVector,
) -> Result<(IntMatrix, usize)> {
    let row_bases: Vec<_> = rows.iter().map(|d| ring.basis(&e.sub(d))).collect();
    let mut row_off = vec![0usize; rows.len() + 1];
    for (i, b) in row_bases.iter().enumerate() {
        row_off[i + 1] = row_off[i] + b.len();
    }
    let by_col = m.by_column();
    let mut out = Vec::new();
    for (c, d) in cols.iter().enumerate() {
        let basis = ring.basis(&e.sub(d));
        for &mu in &basis.monos {
            let mut acc: Vec<(u32, i64)> = Vec::new();
            for &(r, p) in &by_col[c] {
                for &(mono, coef) in p {
                    let idx = row_bases[r]
                        .index(mono + mu)
                        .ok_or(GradedError::Inhomogeneous { row: r, col: c })?;
                    acc.push(((row_off[r] + idx as usize) as u32, coef));
                }
            }
            out.push(collect_sparse(acc)?);
        }
    }
    Ok((IntMatrix::from_cols(row_off[rows.len()], out), row_off[rows.len()]))
}

fn degrees(t: &[super::complex::Summand]) -> Vec<DegreeVector> {
    t.iter().map(|s| s.degree.clone()).collect()
}

impl GradedComplex {
    pub fn new(labels: Vec<String>, field: FieldSpec, pieces: BTreeMap<i64, DegreePiece>) -> Self {
        Self { labels, field, pieces }
    }

    /// Restricts `c` to the degrees `embed(j)` for `j` in `lo..=hi`.
    pub fn from_free(
        c: &FreeComplex,
        embed: impl Fn(i64) -> DegreeVector + Sync,
        (lo, hi): (i64, i64),
        field: FieldSpec,
        labels: Vec<String>,
    ) -> Result<Self> {
        let ring = c.ring().clone();
        let js: Vec<i64> = (lo..=hi).collect();
        let pieces = par_map(js, |j| -> Result<(i64, DegreePiece)> {
            let e = embed(j);
            let mut dims = Vec::new();
            let mut gens = Vec::new();
            let mut diffs = Vec::new();
            for (k, t) in c.terms().iter().enumerate() {
                let amb = degrees(&t.summands);
                let dim: usize = amb.iter().map(|d| ring.dim_at(&e.sub(d))).sum();
                dims.push(dim);
                gens.push(match &t.gens {
                    Some(g) => {
                        let (mut m, _) = piece_matrix(&ring, &g.map, &amb, &degrees(&g.source), &e)?;
                        m.reduce(&field);
                        Some(m)
                    }
                    None => None,
                });
                let mut d = if k == 0 {
                    IntMatrix::zero(0, dim)
                } else {
                    let tgt = degrees(&c.terms()[k - 1].summands);
                    piece_matrix(&ring, c.diff(k), &tgt, &amb, &e)?.0
                };
                d.reduce(&field);
                diffs.push(d);
            }
            Ok((j, DegreePiece { dims, gens, diffs }))
        })
        .into_iter()
        .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self { labels, field, pieces })
    }

    /// Rank-one restriction `e(j) = j`.
    pub fn from_free_rank_one(c: &FreeComplex, window: (i64, i64), field: FieldSpec) -> Result<Self> {
        let labels = c.terms().iter().map(Term::label).collect();
        Self::from_free(c, DegreeVector::scalar, window, field, labels)
    }

    /// Diagonal part `e(j) = (i + j, j)` of a bigraded complex: the summand
    /// `S(-a,-b)` becomes `M_{i+b-a}(-b)`.
    pub fn diagonal(c: &FreeComplex, shift: i64, window: (i64, i64), field: FieldSpec) -> Result<Self> {
        if c.ring().rank() != 2 {
            return Err(GradedError::Shape("diagonal part needs a bigraded ring".into()));
        }
        let labels = c.terms().iter().map(|t| diagonal_label(t, shift)).collect();
        Self::from_free(
            c,
            |j| DegreeVector::new(vec![shift + j, j]).expect("rank 2"),
            window,
            field,
            labels,
        )
    }

    /// Labels from the right end (position 0) to the left.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn positions(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn pieces(&self) -> &BTreeMap<i64, DegreePiece> {
        &self.pieces
    }

    pub fn window(&self) -> (i64, i64) {
        let lo = self.pieces.keys().next().copied().unwrap_or(0);
        let hi = self.pieces.keys().next_back().copied().unwrap_or(-1);
        (lo, hi)
    }

    /// Dimension of each term (the image dimension for generated terms) per degree.
    pub fn term_dims(&self) -> Result<BTreeMap<i64, Vec<usize>>> {
        let field = self.field;
        let items: Vec<(i64, &DegreePiece)> = self.pieces.iter().map(|(j, p)| (*j, p)).collect();
        Ok(par_map(items, |(j, p)| {
            let dims = (0..p.dims.len())
                .map(|k| p.gens[k].as_ref().map_or(p.dims[k], |g| rank(g, &field)))
                .collect();
            (j, dims)
        })
        .into_iter()
        .collect())
    }

    /// Exact homology dimensions on the window; fails hard if `d∘d != 0`.
    pub fn homology(&self) -> Result<HomologyTable> {
        let field = self.field;
        let items: Vec<(i64, &DegreePiece)> = self.pieces.iter().map(|(j, p)| (*j, p)).collect();
        let per = par_map(items, |(j, p)| -> Result<Vec<(usize, i64, usize)>> {
            let n = p.dims.len();
            // a[k] = d_k restricted to the term at k
            let mut a = Vec::with_capacity(n);
            let mut u = Vec::with_capacity(n);
            for k in 0..n {
                match &p.gens[k] {
                    Some(g) => {
                        let mut m = p.diffs[k].compose(g)?;
                        m.reduce(&field);
                        u.push(rank(g, &field));
                        a.push(m);
                    }
                    None => {
                        u.push(p.dims[k]);
                        a.push(p.diffs[k].clone());
                    }
                }
            }
            for k in 2..n {
                let mut dd = p.diffs[k - 1].compose(&a[k])?;
                dd.reduce(&field);
                if !dd.is_zero() {
                    return Err(GradedError::NotAComplex { position: k, at: format!("degree {j}") });
                }
            }
            // the incoming differential must land inside an image term
            for k in 0..n.saturating_sub(1) {
                if let Some(g) = &p.gens[k] {
                    let mut cols = g.cols().to_vec();
                    cols.extend(a[k + 1].cols().iter().cloned());
                    if rank(&IntMatrix::from_cols(g.nrows(), cols), &field) != u[k] {
                        return Err(GradedError::Shape(format!(
                            "differential into position {k} leaves its image term in degree {j}"
                        )));
                    }
                }
            }
            let ranks: Vec<usize> = a.iter().map(|m| rank(m, &field)).collect();
            let mut out = Vec::new();
            for k in 0..n {
                let incoming = if k + 1 < n { ranks[k + 1] } else { 0 };
                let h = u[k] - ranks[k] - incoming;
                if h > 0 {
                    out.push((k, j, h));
                }
            }
            Ok(out)
        });
        let mut dims = BTreeMap::new();
        for r in per {
            for (k, j, h) in r? {
                dims.insert((k, j), h);
            }
        }
        Ok(HomologyTable { positions: self.positions(), window: self.window(), dims })
    }

    /// JSON with term labels, per-degree dimensions and, optionally, the
    /// differentials as `(row, col, value)` triplets.
    pub fn to_json(&self, with_matrices: bool) -> serde_json::Value {
        let degrees: Vec<serde_json::Value> = self
            .pieces
            .iter()
            .map(|(j, p)| {
                let mut v = serde_json::json!({"degree": j, "ambient_dims": p.dims});
                if with_matrices {
                    v["differentials"] =
                        serde_json::json!(p.diffs.iter().map(IntMatrix::triplets).collect::<Vec<_>>());
                    v["generators"] = serde_json::json!(p
                        .gens
                        .iter()
                        .map(|g| g.as_ref().map(IntMatrix::triplets))
                        .collect::<Vec<_>>());
                }
                v
            })
            .collect();
        serde_json::json!({
            "convention": "position k maps to position k-1; position 0 is the right end",
            "labels": self.labels,
            "field": self.field.to_string(),
            "degrees": degrees,
        })
    }
}

/// `R`, `M2(-3)`, `M-1`, ... for the summand `S(-a,-b)` at diagonal shift `i`.
pub fn segre_label(i: i64, a: i64, b: i64) -> String {
    let k = i + b - a;
    let base = if k == 0 { "R".to_string() } else { format!("M{k}") };
    if b == 0 {
        base
    } else {
        format!("{base}({})", -b)
    }
}

fn diagonal_label(t: &Term, shift: i64) -> String {
    if let Some(n) = &t.name {
        return n.clone();
    }
    if t.summands.is_empty() {
        return "0".into();
    }
    let mut groups: Vec<(String, usize)> = Vec::new();
    for s in &t.summands {
        let e = s.degree.entries();
        let l = segre_label(shift, e[0], e[1]);
        match groups.iter_mut().find(|g| g.0 == l) {
            Some(g) => g.1 += 1,
            None => groups.push((l, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(l, m)| if m == 1 { l } else { format!("{l}^{m}") })
        .collect::<Vec<_>>()
        .join("+")
}

/// The contraction complex `∧^l V ⊗ D(Sym^{m+l} V)`, `l = n, ..., 0`, all in
/// internal degree `-m`, with
/// `α(e_J ⊗ μ_p) = Σ_s (-1)^(s-1) e_{J - j_s} ⊗ μ_{p / x_{j_s}}`.
pub fn alpha_complex(n: usize, m: i64, field: FieldSpec) -> Result<GradedComplex> {
    if n == 0 {
        return Err(GradedError::Invalid("alpha complex needs n >= 1".into()));
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = PolyRing::new(WeightedRingSpec::standard(&names)?)?;
    let sets: Vec<Vec<Vec<usize>>> = (0..=n).map(|l| subsets(n, l)).collect();
    let bases: Vec<_> =
        (0..=n).map(|l| ring.basis(&DegreeVector::scalar(m + l as i64))).collect();
    let dims: Vec<usize> = (0..=n).map(|l| sets[l].len() * bases[l].len()).collect();
    let mut diffs = vec![IntMatrix::zero(0, dims[0])];
    for l in 1..=n {
        let (b, b1) = (&bases[l], &bases[l - 1]);
        let mut cols: Vec<SparseVec> = Vec::new();
        for set in &sets[l] {
            for &mu in &b.monos {
                let mut acc = Vec::new();
                for (s, &v) in set.iter().enumerate() {
                    let Some(q) = mono_div(mu, var_mono(v)) else { continue };
                    let mut rest = set.clone();
                    rest.remove(s);
                    let r = sets[l - 1].iter().position(|x| *x == rest).expect("face");
                    let idx = b1.index(q).expect("basis") as usize;
                    let sign = if s % 2 == 0 { 1 } else { -1 };
                    acc.push(((r * b1.len() + idx) as u32, sign));
                }
                cols.push(collect_sparse(acc)?);
            }
        }
        let mut d = IntMatrix::from_cols(dims[l - 1], cols);
        d.reduce(&field);
        diffs.push(d);
    }
    let labels = (0..=n).map(|l| format!("∧^{l}V⊗D(Sym^{}V)", m + l as i64)).collect();
    let piece = DegreePiece { dims, gens: vec![None; n + 1], diffs };
    Ok(GradedComplex::new(labels, field, [(-m, piece)].into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedlin::FreeComplex;
    use std::sync::Arc;

    fn ring(names: &[&str], w: &[i64]) -> Arc<PolyRing> {
        PolyRing::new(WeightedRingSpec::weighted(names, w).unwrap()).unwrap()
    }

    #[test]
    fn koszul_homology_only_at_right_end() {
        for (names, w) in [
            (vec!["x0", "x1"], vec![1, 1]),
            (vec!["u", "v"], vec![1, 2]),
            (vec!["y0", "y1", "y2"], vec![1, 1, 1]),
        ] {
            let k = FreeComplex::koszul(ring(&names, &w));
            let g = GradedComplex::from_free_rank_one(&k, (-2, 8), FieldSpec::Rational).unwrap();
            assert!(g.homology().unwrap().equals(&[((0, 0), 1)]));
        }
    }

    #[test]
    fn alpha_dims_and_exactness() {
        let a = alpha_complex(3, 0, FieldSpec::Rational).unwrap();
        let p = &a.pieces()[&0];
        assert_eq!(p.dims, vec![1, 9, 18, 10]);
        assert!(a.homology().unwrap().is_zero());
        let a = alpha_complex(2, -2, FieldSpec::Rational).unwrap();
        assert!(a.homology().unwrap().equals(&[((2, 2), 1)]));
        for m in 0..4 {
            let a = alpha_complex(1, m, FieldSpec::Rational).unwrap();
            assert_eq!(a.pieces()[&-m].dims, vec![1, 1]);
            assert!(a.homology().unwrap().is_zero());
        }
    }

    #[test]
    fn diagonal_labels() {
        assert_eq!(segre_label(0, 2, 3), "M1(-3)");
        assert_eq!(segre_label(0, 0, 0), "R");
        assert_eq!(segre_label(1, 2, 0), "M-1");
    }
}
