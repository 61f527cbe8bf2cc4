//! Complexes of graded free modules over a polynomial ring, with polynomial differentials.
//!
//! Positions are numbered from the right: `terms[0]` is the rightmost term and
//! `diffs[k]` maps `terms[k]` to `terms[k - 1]`. A term may be the image of a
//! map from another free module (see [`GenMap`]); only its ambient free module
//! takes part in the differentials.

use super::poly::{
    mono_from_exps, poly_mul, poly_scale, poly_shift_vars, poly_term, var_mono, Poly,
    PolyMatrix, PolyRing,
};
use super::{GradedError, Result};
use crate::hilbert::DegreeVector;
use std::sync::Arc;

/// One free summand `S(-d)`, recorded by its generator degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub degree: DegreeVector,
    pub label: String,
}

impl Summand {
    pub fn free(degree: DegreeVector) -> Self {
        let label = free_label(&degree);
        Self { degree, label }
    }
}

/// `S`, `S(-2)`, `S(-1,-3)`, ...
pub fn free_label(d: &DegreeVector) -> String {
    if d.is_zero() {
        return "S".into();
    }
    let parts: Vec<String> = d.entries().iter().map(|x| (-x).to_string()).collect();
    format!("S({})", parts.join(","))
}

/// The term is the image of `map: ⊕ source -> ambient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMap {
    pub source: Vec<Summand>,
    pub map: PolyMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub summands: Vec<Summand>,
    pub gens: Option<GenMap>,
    pub name: Option<String>,
}

impl Term {
    pub fn free(degrees: Vec<DegreeVector>) -> Self {
        Self { summands: degrees.into_iter().map(Summand::free).collect(), gens: None, name: None }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Sources of the generating map, or the summands themselves.
    pub fn source(&self) -> &[Summand] {
        self.gens.as_ref().map_or(&self.summands, |g| &g.source)
    }

    pub fn label(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        if self.summands.is_empty() {
            return "0".into();
        }
        let mut groups: Vec<(String, usize)> = Vec::new();
        for s in &self.summands {
            match groups.iter_mut().find(|g| g.0 == s.label) {
                Some(g) => g.1 += 1,
                None => groups.push((s.label.clone(), 1)),
            }
        }
        groups
            .into_iter()
            .map(|(l, m)| if m == 1 { l } else { format!("{l}^{m}") })
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Clone, Debug)]
pub struct FreeComplex {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
    diffs: Vec<PolyMatrix>,
}

/// Degree-preserving chain map given by one matrix per position.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub maps: Vec<PolyMatrix>,
}

fn check_homogeneous(
    ring: &PolyRing,
    m: &PolyMatrix,
    rows: &[Summand],
    cols: &[Summand],
) -> Result<()> {
    if m.nrows != rows.len() || m.ncols != cols.len() {
        return Err(GradedError::Shape(format!(
            "{}x{} matrix between terms of ranks {} and {}",
            m.nrows,
            m.ncols,
            rows.len(),
            cols.len()
        )));
    }
    for (&(r, c), p) in &m.entries {
        let want = cols[c].degree.sub(&rows[r].degree);
        if p.iter().any(|&(mono, _)| ring.degree(mono) != want) {
            return Err(GradedError::Inhomogeneous { row: r, col: c });
        }
    }
    Ok(())
}

fn restrict(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> PolyMatrix {
    let mut out = PolyMatrix::zero(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            if let Some(p) = m.get(r, c) {
                out.set(i, j, p.clone());
            }
        }
    }
    out
}

fn negate(m: &PolyMatrix) -> PolyMatrix {
    let mut out = m.clone();
    for p in out.entries.values_mut() {
        *p = poly_scale(p, -1);
    }
    out
}

/// Lexicographically ordered `k`-subsets of `0..n`.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl FreeComplex {
    /// Validates shapes, homogeneity and `d∘d = 0` (on the images of generating maps).
    pub fn new(ring: Arc<PolyRing>, terms: Vec<Term>, mut diffs: Vec<PolyMatrix>) -> Result<Self> {
        if terms.is_empty() {
            return Err(GradedError::Shape("a complex needs at least one term".into()));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(GradedError::Shape(format!(
                "{} terms need {} differentials",
                terms.len(),
                terms.len() - 1
            )));
        }
        diffs.insert(0, PolyMatrix::zero(0, terms[0].len()));
        for k in 1..terms.len() {
            check_homogeneous(&ring, &diffs[k], &terms[k - 1].summands, &terms[k].summands)?;
        }
        for t in &terms {
            if let Some(g) = &t.gens {
                check_homogeneous(&ring, &g.map, &t.summands, &g.source)?;
            }
        }
        let c = Self { ring, terms, diffs };
        for k in 2..c.terms.len() {
            let mut dd = c.diffs[k - 1].compose(&c.diffs[k])?;
            if let Some(g) = &c.terms[k].gens {
                dd = dd.compose(&g.map)?;
            }
            if !dd.is_zero() {
                return Err(GradedError::NotAComplex { position: k, at: "polynomial level".into() });
            }
        }
        Ok(c)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, k: usize) -> &Term {
        &self.terms[k]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(Term::is_empty)
    }

    /// Differential out of position `k` (zero for `k = 0`).
    pub fn diff(&self, k: usize) -> &PolyMatrix {
        &self.diffs[k]
    }

    /// Ranks of the terms from left to right.
    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().rev().map(Term::len).collect()
    }

    /// Labels of the terms from left to right.
    pub fn labels(&self) -> Vec<String> {
        self.terms.iter().rev().map(Term::label).collect()
    }

    /// The single term `S`.
    pub fn unit(ring: Arc<PolyRing>) -> Self {
        let t = Term::free(vec![DegreeVector::zero(ring.rank())]);
        Self::new(ring, vec![t], vec![]).expect("unit complex")
    }

    /// Koszul complex on all variables: `d(e_I) = sum_t (-1)^t x_{i_t} e_{I - i_t}`.
    pub fn koszul(ring: Arc<PolyRing>) -> Self {
        let n = ring.nvars();
        let sets: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets(n, k)).collect();
        let degree_of = |s: &[usize]| {
            s.iter().fold(DegreeVector::zero(ring.rank()), |acc, &v| acc.add(ring.weight(v)))
        };
        let terms: Vec<Term> =
            sets.iter().map(|ss| Term::free(ss.iter().map(|s| degree_of(s)).collect())).collect();
        let mut diffs = Vec::new();
        for k in 1..=n {
            let mut m = PolyMatrix::zero(sets[k - 1].len(), sets[k].len());
            for (c, s) in sets[k].iter().enumerate() {
                for t in 0..s.len() {
                    let mut rest = s.clone();
                    let v = rest.remove(t);
                    let r = sets[k - 1].iter().position(|x| *x == rest).expect("face");
                    let sign = if t % 2 == 0 { 1 } else { -1 };
                    m.set(r, c, poly_term(var_mono(v), sign));
                }
            }
            diffs.push(m);
        }
        Self::new(ring, terms, diffs).expect("Koszul complex")
    }

    /// `C(t)`: every generator degree drops by `t`.
    pub fn twist(&self, t: &DegreeVector) -> Self {
        let shift = |ss: &[Summand]| -> Vec<Summand> {
            ss.iter().map(|s| Summand::free(s.degree.sub(t))).collect()
        };
        let terms = self
            .terms
            .iter()
            .map(|term| Term {
                summands: shift(&term.summands),
                gens: term.gens.as_ref().map(|g| GenMap { source: shift(&g.source), map: g.map.clone() }),
                name: term.name.clone(),
            })
            .collect();
        Self { ring: self.ring.clone(), terms, diffs: self.diffs.clone() }
    }

    /// Names the term at position `k`, used as its label in diagonal parts.
    pub fn named(mut self, k: usize, name: &str) -> Self {
        self.terms[k].name = Some(name.to_string());
        self
    }

    /// Removes empty terms at the left end.
    pub fn trim(mut self) -> Self {
        while self.terms.len() > 1 && self.terms.last().is_some_and(Term::is_empty) {
            self.terms.pop();
            self.diffs.pop();
        }
        self
    }

    fn require_free(&self) -> Result<()> {
        if self.terms.iter().any(|t| t.gens.is_some()) {
            return Err(GradedError::Shape("operation needs free terms".into()));
        }
        Ok(())
    }

    /// Splits `self` as the cone of a chain map `f: X -> Y`, where `X` collects
    /// the summands whose generator degree satisfies `high` (shifted one step
    /// to the right) and `Y` the rest.
    pub fn truncate_split(
        &self,
        high: impl Fn(&DegreeVector) -> bool,
    ) -> Result<(FreeComplex, FreeComplex, ChainMap)> {
        self.require_free()?;
        let parts: Vec<(Vec<usize>, Vec<usize>)> = self
            .terms
            .iter()
            .map(|t| (0..t.len()).partition(|&i| high(&t.summands[i].degree)))
            .collect();
        if parts.first().is_some_and(|p| !p.0.is_empty()) {
            return Err(GradedError::NonContiguousSplit(0));
        }
        for k in 1..self.terms.len() {
            let (hi_t, _) = &parts[k - 1];
            let (_, lo_s) = &parts[k];
            if !restrict(&self.diffs[k], hi_t, lo_s).is_zero() {
                return Err(GradedError::NonContiguousSplit(k));
            }
        }
        let pick = |k: usize, idx: &[usize]| Term {
            summands: idx.iter().map(|&i| self.terms[k].summands[i].clone()).collect(),
            gens: None,
            name: None,
        };
        let n = self.terms.len();
        let x_terms: Vec<Term> = (1..n).map(|k| pick(k, &parts[k].0)).collect();
        let y_terms: Vec<Term> = (0..n).map(|k| pick(k, &parts[k].1)).collect();
        let x_diffs: Vec<PolyMatrix> = (2..n)
            .map(|k| negate(&restrict(&self.diffs[k], &parts[k - 1].0, &parts[k].0)))
            .collect();
        let y_diffs: Vec<PolyMatrix> =
            (1..n).map(|k| restrict(&self.diffs[k], &parts[k - 1].1, &parts[k].1)).collect();
        let maps: Vec<PolyMatrix> =
            (1..n).map(|k| restrict(&self.diffs[k], &parts[k - 1].1, &parts[k].0)).collect();
        let (x, y) = if n == 1 {
            (FreeComplex::new(self.ring.clone(), vec![Term::free(vec![])], vec![])?, self.clone())
        } else {
            (
                FreeComplex::new(self.ring.clone(), x_terms, x_diffs)?,
                FreeComplex::new(self.ring.clone(), y_terms, y_diffs)?.trim(),
            )
        };
        let f = ChainMap { maps: if n == 1 { vec![PolyMatrix::zero(1, 0)] } else { maps } };
        f.check(&x, &y)?;
        Ok((x, y, f))
    }

    /// Total complex of `self ⊗ other` over the tensor ring, with
    /// `d(a⊗b) = da⊗b + (-1)^p a⊗db`.
    pub fn tensor(&self, other: &FreeComplex) -> Result<FreeComplex> {
        let ring = self.ring.tensor(&other.ring)?;
        let nv = self.ring.nvars();
        let la = layout(&self.terms, &other.terms);
        let mut terms = Vec::new();
        for n in 0..la.len() {
            let mut summands = Vec::new();
            let mut any_gens = false;
            let mut source = Vec::new();
            let mut gmap_blocks = Vec::new();
            for &(p, q, _) in &la[n] {
                let (a, b) = (&self.terms[p], &other.terms[q]);
                for sa in &a.summands {
                    for sb in &b.summands {
                        summands.push(Summand::free(concat(&sa.degree, &sb.degree)));
                    }
                }
                any_gens |= a.gens.is_some() || b.gens.is_some();
                let src_off = source.len();
                for sa in a.source() {
                    for sb in b.source() {
                        source.push(Summand::free(concat(&sa.degree, &sb.degree)));
                    }
                }
                gmap_blocks.push((p, q, src_off));
            }
            let gens = if any_gens {
                let mut map = PolyMatrix::zero(summands.len(), source.len());
                for (&(p, q, off), &(_, _, src_off)) in la[n].iter().zip(&gmap_blocks) {
                    let ga = gen_matrix(&self.terms[p]);
                    let gb = gen_matrix(&other.terms[q]);
                    for (&(ra, ca), pa) in &ga.entries {
                        for (&(rb, cb), pb) in &gb.entries {
                            let e = poly_mul(pa, &poly_shift_vars(pb, nv))?;
                            map.add_to(off + ra * gb.nrows + rb, src_off + ca * gb.ncols + cb, &e);
                        }
                    }
                }
                Some(GenMap { source, map })
            } else {
                None
            };
            terms.push(Term { summands, gens, name: None });
        }
        let mut diffs = Vec::new();
        for n in 1..la.len() {
            let mut m = PolyMatrix::zero(terms[n - 1].len(), terms[n].len());
            for &(p, q, off) in &la[n] {
                let nb = other.terms[q].len();
                let na = self.terms[p].len();
                if p > 0 {
                    let tgt = block_offset(&la[n - 1], p - 1, q);
                    for (&(ra, ca), pa) in &self.diffs[p].entries {
                        for ib in 0..nb {
                            m.add_to(tgt + ra * nb + ib, off + ca * nb + ib, pa);
                        }
                    }
                }
                if q > 0 {
                    let tgt = block_offset(&la[n - 1], p, q - 1);
                    let nb1 = other.terms[q - 1].len();
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    for (&(rb, cb), pb) in &other.diffs[q].entries {
                        let e = poly_scale(&poly_shift_vars(pb, nv), sign);
                        for ia in 0..na {
                            m.add_to(tgt + ia * nb1 + rb, off + ia * nb + cb, &e);
                        }
                    }
                }
            }
            diffs.push(m);
        }
        FreeComplex::new(ring, terms, diffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ring = &self.ring;
        let fmt_poly = |p: &Poly| {
            p.iter()
                .map(|&(m, c)| format!("{c}*{}", ring.format_mono(m)))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let diff: Vec<serde_json::Value> = self.diffs[k]
                    .entries
                    .iter()
                    .map(|(&(r, c), p)| serde_json::json!([r, c, fmt_poly(p)]))
                    .collect();
                serde_json::json!({
                    "position": k,
                    "label": t.label(),
                    "generator_degrees": t.summands.iter().map(|s| s.degree.entries().to_vec()).collect::<Vec<_>>(),
                    "image_of": t.gens.as_ref().map(|g| g.source.len()),
                    "differential": diff,
                })
            })
            .collect();
        serde_json::json!({"ring": ring.spec().to_string(), "terms": terms})
    }
}

fn concat(a: &DegreeVector, b: &DegreeVector) -> DegreeVector {
    let mut v = a.entries().to_vec();
    v.extend_from_slice(b.entries());
    DegreeVector::new(v).expect("nonempty degree")
}

fn gen_matrix(t: &Term) -> PolyMatrix {
    t.gens.as_ref().map_or_else(|| PolyMatrix::identity(t.len()), |g| g.map.clone())
}

/// For each total position `n`, the blocks `(p, q, offset)` with `p + q = n`, `p` ascending.
fn layout(a: &[Term], b: &[Term]) -> Vec<Vec<(usize, usize, usize)>> {
    let len = a.len() + b.len() - 1;
    (0..len)
        .map(|n| {
            let mut off = 0;
            let mut blocks = Vec::new();
            for p in 0..a.len() {
                if p > n || n - p >= b.len() {
                    continue;
                }
                let q = n - p;
                blocks.push((p, q, off));
                off += a[p].len() * b[q].len();
            }
            blocks
        })
        .collect()
}

fn block_offset(blocks: &[(usize, usize, usize)], p: usize, q: usize) -> usize {
    blocks.iter().find(|b| b.0 == p && b.1 == q).map(|b| b.2).expect("block present")
}

impl ChainMap {
    /// Checks `d_Y f_k = f_{k-1} d_X` on every position.
    pub fn check(&self, x: &FreeComplex, y: &FreeComplex) -> Result<()> {
        if self.maps.len() != x.len() {
            return Err(GradedError::Shape("chain map length".into()));
        }
        for k in 0..x.len() {
            let m = &self.maps[k];
            let rows = if k < y.len() { y.terms[k].len() } else { 0 };
            if m.ncols != x.terms[k].len() || m.nrows != rows {
                return Err(GradedError::Shape(format!("chain map at position {k}")));
            }
            if k >= 1 && k < y.len() {
                let lhs = y.diffs[k].compose(m)?;
                let rhs = self.maps[k - 1].compose(&x.diffs[k])?;
                let diff = lhs.entries.keys().chain(rhs.entries.keys()).any(|key| {
                    lhs.entries.get(key).map(|p| p.as_slice()).unwrap_or(&[])
                        != rhs.entries.get(key).map(|p| p.as_slice()).unwrap_or(&[])
                });
                if diff {
                    return Err(GradedError::NotAChainMap(k));
                }
            }
        }
        Ok(())
    }

    /// `f ⊗ g` between tensor complexes (no sign: both maps have degree 0).
    pub fn tensor(
        &self,
        g: &ChainMap,
        (xa, ya): (&FreeComplex, &FreeComplex),
        (xb, yb): (&FreeComplex, &FreeComplex),
    ) -> Result<ChainMap> {
        let nv = xa.ring.nvars();
        let src = layout(&xa.terms, &xb.terms);
        let tgt = layout(&ya.terms, &yb.terms);
        let mut maps = Vec::new();
        for n in 0..src.len() {
            let nrows: usize = tgt.get(n).map_or(0, |bl| {
                bl.iter().map(|&(p, q, _)| ya.terms[p].len() * yb.terms[q].len()).sum()
            });
            let ncols: usize =
                src[n].iter().map(|&(p, q, _)| xa.terms[p].len() * xb.terms[q].len()).sum();
            let mut m = PolyMatrix::zero(nrows, ncols);
            for &(p, q, off) in &src[n] {
                if p >= ya.len() || q >= yb.len() {
                    continue;
                }
                let toff = block_offset(&tgt[n], p, q);
                let (fa, fb) = (&self.maps[p], &g.maps[q]);
                let (nxb, nyb) = (xb.terms[q].len(), yb.terms[q].len());
                for (&(ra, ca), pa) in &fa.entries {
                    for (&(rb, cb), pb) in &fb.entries {
                        let e = poly_mul(pa, &poly_shift_vars(pb, nv))?;
                        m.add_to(toff + ra * nyb + rb, off + ca * nxb + cb, &e);
                    }
                }
            }
            maps.push(m);
        }
        Ok(ChainMap { maps })
    }

    /// `Cone_n = X_{n-1} ⊕ Y_n` with `d = [[-d_X, 0], [f, d_Y]]`, X block first.
    pub fn cone(&self, x: &FreeComplex, y: &FreeComplex) -> Result<FreeComplex> {
        x.require_free()?;
        y.require_free()?;
        let len = (x.len() + 1).max(y.len());
        let xs = |n: usize| -> usize { if n >= 1 && n - 1 < x.len() { x.terms[n - 1].len() } else { 0 } };
        let ys = |n: usize| -> usize { if n < y.len() { y.terms[n].len() } else { 0 } };
        let mut terms = Vec::new();
        for n in 0..len {
            let mut s = Vec::new();
            if xs(n) > 0 {
                s.extend(x.terms[n - 1].summands.iter().cloned());
            }
            if ys(n) > 0 {
                s.extend(y.terms[n].summands.iter().cloned());
            }
            terms.push(Term { summands: s, gens: None, name: None });
        }
        let mut diffs = Vec::new();
        for n in 1..len {
            let mut m = PolyMatrix::zero(terms[n - 1].len(), terms[n].len());
            let (xo_t, yo_t) = (0, xs(n - 1));
            let (xo_s, yo_s) = (0, xs(n));
            if n >= 2 && xs(n) > 0 {
                for (&(r, c), p) in &x.diffs[n - 1].entries {
                    m.set(xo_t + r, xo_s + c, poly_scale(p, -1));
                }
            }
            if xs(n) > 0 && n - 1 < y.len() {
                for (&(r, c), p) in &self.maps[n - 1].entries {
                    m.set(yo_t + r, xo_s + c, p.clone());
                }
            }
            if ys(n) > 0 {
                for (&(r, c), p) in &y.diffs[n].entries {
                    m.set(yo_t + r, yo_s + c, p.clone());
                }
            }
            diffs.push(m);
        }
        Ok(FreeComplex::new(y.ring.clone(), terms, diffs)?.trim())
    }
}

/// `x^e` as a polynomial, for building maps by hand.
pub fn monomial(exps: &[u32], c: i64) -> Poly {
    poly_term(mono_from_exps(exps), c)
}

/// Variable `v` of the ring, for building maps by hand.
pub fn var(v: usize, c: i64) -> Poly {
    poly_term(var_mono(v), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::WeightedRingSpec;

    fn ring(names: &[&str], w: &[i64]) -> Arc<PolyRing> {
        PolyRing::new(WeightedRingSpec::weighted(names, w).unwrap()).unwrap()
    }

    fn degs(c: &FreeComplex) -> Vec<Vec<i64>> {
        c.terms
            .iter()
            .rev()
            .map(|t| t.summands.iter().map(|s| s.degree.entries()[0]).collect())
            .collect()
    }

    #[test]
    fn koszul_shapes() {
        let k = FreeComplex::koszul(ring(&["x0", "x1"], &[1, 1]));
        assert_eq!(k.ranks(), vec![1, 2, 1]);
        assert_eq!(k.labels(), vec!["S(-2)", "S(-1)^2", "S"]);
        let k = FreeComplex::koszul(ring(&["u", "v"], &[1, 2]));
        assert_eq!(degs(&k), vec![vec![3], vec![1, 2], vec![0]]);
        let k = FreeComplex::koszul(ring(&["y0", "y1", "y2"], &[1, 1, 1]));
        assert_eq!(k.ranks(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn split_matches_displayed_pieces() {
        let k = FreeComplex::koszul(ring(&["x", "y", "z"], &[1, 1, 1]));
        let (x, y, _) = k.truncate_split(|d| d.entries()[0] >= 2).unwrap();
        assert_eq!(x.labels(), vec!["S(-3)", "S(-2)^3", "0"]);
        assert_eq!(y.labels(), vec!["S(-1)^3", "S"]);
        let k = FreeComplex::koszul(ring(&["u", "v"], &[1, 2]));
        let (x, y, _) = k.truncate_split(|d| d.entries()[0] >= 2).unwrap();
        assert_eq!(x.labels(), vec!["S(-3)", "S(-2)"]);
        assert_eq!(y.labels(), vec!["S(-1)", "S"]);
        // trivial split
        let (x, y, _) = k.truncate_split(|_| false).unwrap();
        assert!(x.ranks().iter().all(|&r| r == 0));
        assert_eq!(y.labels(), k.labels());
        assert!(k.truncate_split(|_| true).is_err());
    }

    #[test]
    fn cone_of_split_restores_ranks() {
        let k = FreeComplex::koszul(ring(&["x", "y", "z"], &[1, 1, 1]));
        for t in 1..5 {
            let (x, y, f) = k.truncate_split(|d| d.entries()[0] >= t).unwrap();
            let c = f.cone(&x, &y).unwrap();
            assert_eq!(c.ranks(), k.ranks());
        }
    }

    #[test]
    fn tensor_ranks_and_unit() {
        let a = FreeComplex::koszul(ring(&["x0", "x1"], &[1, 1]));
        let b = FreeComplex::koszul(ring(&["y0", "y1", "y2"], &[1, 1, 1]));
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.ranks(), vec![1, 5, 10, 10, 5, 1]);
        let u = FreeComplex::unit(ring(&["y"], &[1]));
        let t = a.tensor(&u).unwrap();
        assert_eq!(t.ranks(), a.ranks());
    }

    #[test]
    fn bad_split_rejected() {
        let k = FreeComplex::koszul(ring(&["x"], &[1]));
        // the right end cannot move into X
        assert_eq!(
            k.truncate_split(|d| d.entries()[0] == 0).unwrap_err(),
            GradedError::NonContiguousSplit(0)
        );
    }

    #[test]
    fn four_dimensional_split_tensor() {
        let a = FreeComplex::koszul(ring(&["x0", "x1", "x2"], &[1, 1, 1]));
        let b = FreeComplex::koszul(ring(&["y0", "y1", "y2"], &[1, 1, 1]));
        let (xa, _, _) = a.truncate_split(|d| d.entries()[0] >= 2).unwrap();
        let (xb, _, _) = b.truncate_split(|d| d.entries()[0] >= 2).unwrap();
        let t = xa.tensor(&xb).unwrap();
        assert_eq!(t.labels(), vec!["S(-3,-3)", "S(-2,-3)^3+S(-3,-2)^3", "S(-2,-2)^9", "0", "0"]);
    }
}
