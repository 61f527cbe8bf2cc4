//! Sparse exact elimination over the fields of [`super::field`].
//!
//! Matrices enter and leave as integer column lists; the field is picked at
//! runtime from a [`FieldSpec`]. Over a prime field the integers are residues.

use super::field::{integerize, Field, Fp, Q};
use super::{GradedError, Result};
use crate::hilbert::FieldSpec;
use serde::Serialize;

/// Sorted `(index, value)` pairs with no zero values.
pub type SparseVec = Vec<(u32, i64)>;

/// A sparse integer matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    nrows: usize,
    cols: Vec<SparseVec>,
}

impl IntMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Self { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn from_cols(nrows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().flatten().all(|&(i, v)| (i as usize) < nrows && v != 0));
        Self { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn cols(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut rows = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                rows[i as usize].push((j as u32, v));
            }
        }
        IntMatrix { nrows: self.cols.len(), cols: rows }
    }

    /// Applies the matrix to a sparse vector. Over a prime field the caller
    /// reduces the result.
    pub fn apply(&self, v: &SparseVec) -> Result<SparseVec> {
        let mut acc: Vec<(u32, i64)> = Vec::new();
        for &(j, a) in v {
            for &(i, b) in &self.cols[j as usize] {
                let p = a.checked_mul(b).ok_or(GradedError::Overflow)?;
                acc.push((i, p));
            }
        }
        collect_sparse(acc)
    }

    /// `self * other`, i.e. first `other`, then `self`.
    pub fn compose(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let cols = other.cols.iter().map(|c| self.apply(c)).collect::<Result<_>>()?;
        Ok(IntMatrix { nrows: self.nrows, cols })
    }

    /// Reduces entries modulo `p` (no-op for the rationals).
    pub fn reduce(&mut self, field: &FieldSpec) {
        if let FieldSpec::Prime(p) = field {
            for c in &mut self.cols {
                reduce_mod(c, *p);
            }
        }
    }

    /// Coordinate triples `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> Vec<(u32, u32, i64)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |&(i, v)| (i, j as u32, v)))
            .collect()
    }
}

pub(crate) fn reduce_mod(v: &mut SparseVec, p: u32) {
    for e in v.iter_mut() {
        e.1 = e.1.rem_euclid(p as i64);
    }
    v.retain(|e| e.1 != 0);
}

/// Sorts, merges duplicates and drops zeros.
pub(crate) fn collect_sparse(mut acc: Vec<(u32, i64)>) -> Result<SparseVec> {
    acc.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(acc.len());
    for (i, v) in acc {
        match out.last_mut() {
            Some(last) if last.0 == i => {
                last.1 = last.1.checked_add(v).ok_or(GradedError::Overflow)?;
            }
            _ => out.push((i, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    Ok(out)
}

type FVec<F> = Vec<(u32, F)>;

fn lift<F: Field>(v: &SparseVec, ctx: F::Ctx) -> FVec<F> {
    v.iter()
        .map(|&(i, x)| (i, F::from_i64(x, ctx)))
        .filter(|e| !e.1.is_zero())
        .collect()
}

/// `a - c*b` for sparse vectors.
fn axpy<F: Field>(a: &FVec<F>, c: &F, b: &FVec<F>, ctx: F::Ctx) -> FVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(u32::MAX, |e| e.0);
        let kb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, c.mul(&b[j].1, ctx).neg(ctx)));
            j += 1;
        } else {
            let v = a[i].1.sub(&c.mul(&b[j].1, ctx), ctx);
            if !v.is_zero() {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale<F: Field>(v: &mut FVec<F>, c: &F, ctx: F::Ctx) {
    for e in v.iter_mut() {
        e.1 = e.1.mul(c, ctx);
    }
}

/// Semi-echelon form: every stored row has leading coefficient 1 at an index
/// that no other row leads with. Optionally remembers each row as a
/// combination of the inserted vectors.
struct Echelon<F: Field> {
    ctx: F::Ctx,
    rows: Vec<FVec<F>>,
    combos: Vec<FVec<F>>,
    pivot_of: Vec<u32>,
    track: bool,
}

const NONE: u32 = u32::MAX;

impl<F: Field> Echelon<F> {
    fn new(dim: usize, ctx: F::Ctx, track: bool) -> Self {
        Self { ctx, rows: Vec::new(), combos: Vec::new(), pivot_of: vec![NONE; dim], track }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Head reduction; with `full` every entry at a pivot index is cleared.
    fn reduce(&self, mut v: FVec<F>, mut combo: FVec<F>, full: bool) -> (FVec<F>, FVec<F>) {
        let mut k = 0;
        while k < v.len() {
            let r = self.pivot_of[v[k].0 as usize];
            if r == NONE {
                if !full {
                    break;
                }
                k += 1;
                continue;
            }
            let c = v[k].1.clone();
            v = axpy(&v, &c, &self.rows[r as usize], self.ctx);
            if self.track {
                combo = axpy(&combo, &c, &self.combos[r as usize], self.ctx);
            }
        }
        (v, combo)
    }

    /// Inserts `v`; returns the dependency combination when `v` reduces to zero.
    fn insert(&mut self, v: FVec<F>, tag: u32) -> Option<FVec<F>> {
        let combo = if self.track { vec![(tag, F::from_i64(1, self.ctx))] } else { Vec::new() };
        let (mut v, mut combo) = self.reduce(v, combo, false);
        if v.is_empty() {
            return Some(combo);
        }
        if !v[0].1.is_one() {
            let inv = v[0].1.inv(self.ctx);
            scale(&mut v, &inv, self.ctx);
            scale(&mut combo, &inv, self.ctx);
        }
        self.pivot_of[v[0].0 as usize] = self.rows.len() as u32;
        self.rows.push(v);
        if self.track {
            self.combos.push(combo);
        }
        None
    }

    /// Brings the rows to reduced echelon form.
    fn back_reduce(&mut self) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        for r in order {
            let row = std::mem::take(&mut self.rows[r]);
            let (head, rest) = row.split_at(1);
            // temporarily hide this row's own pivot
            let p = head[0].0 as usize;
            self.pivot_of[p] = NONE;
            let (rest, _) = self.reduce(rest.to_vec(), Vec::new(), true);
            self.pivot_of[p] = r as u32;
            let mut row = head.to_vec();
            row.extend(rest);
            self.rows[r] = row;
        }
    }
}

fn rank_generic<F: Field>(m: &IntMatrix, ctx: F::Ctx) -> usize {
    let t;
    let m = if m.nrows() < m.ncols() {
        t = m.transpose();
        &t
    } else {
        m
    };
    let mut e = Echelon::<F>::new(m.nrows(), ctx, false);
    for c in m.cols() {
        if e.rank() == m.nrows() {
            break;
        }
        e.insert(lift(c, ctx), 0);
    }
    e.rank()
}

/// Kernel basis read off the reduced row echelon form of `m`; one vector per
/// non-pivot column, in increasing column order.
fn kernel_generic<F: Field>(m: &IntMatrix, ctx: F::Ctx) -> Vec<FVec<F>> {
    let rows = m.transpose();
    let mut e = Echelon::<F>::new(m.ncols(), ctx, false);
    for r in rows.cols() {
        e.insert(lift(r, ctx), 0);
    }
    e.back_reduce();
    let mut ker: Vec<FVec<F>> = vec![Vec::new(); m.ncols()];
    let mut is_pivot = vec![false; m.ncols()];
    for row in &e.rows {
        is_pivot[row[0].0 as usize] = true;
    }
    for row in &e.rows {
        let p = row[0].0;
        for (f, c) in &row[1..] {
            ker[*f as usize].push((p, c.neg(ctx)));
        }
    }
    let mut out = Vec::new();
    for (f, mut v) in ker.into_iter().enumerate() {
        if is_pivot[f] {
            continue;
        }
        v.push((f as u32, F::from_i64(1, ctx)));
        v.sort_unstable_by_key(|x| x.0);
        out.push(v);
    }
    out
}

pub fn rank(m: &IntMatrix, field: &FieldSpec) -> usize {
    if m.is_zero() {
        return 0;
    }
    match field {
        FieldSpec::Rational => rank_generic::<Q>(m, ()),
        FieldSpec::Prime(p) => rank_generic::<Fp>(m, *p),
    }
}

fn to_ints_fp(v: &FVec<Fp>) -> SparseVec {
    v.iter().map(|(i, x)| (*i, x.0 as i64)).collect()
}

/// Kernel basis as primitive integer vectors (residues over a prime field).
pub fn kernel(m: &IntMatrix, field: &FieldSpec) -> Result<Vec<SparseVec>> {
    match field {
        FieldSpec::Rational => kernel_generic::<Q>(m, ())
            .iter()
            .map(|v| integerize(v).ok_or(GradedError::Overflow))
            .collect(),
        FieldSpec::Prime(p) => Ok(kernel_generic::<Fp>(m, *p).iter().map(to_ints_fp).collect()),
    }
}

enum SpanImpl {
    Q(Echelon<Q>),
    P(Echelon<Fp>),
}

/// Incrementally built subspace of `k^dim`.
pub struct Span {
    inner: SpanImpl,
}

impl Span {
    pub fn new(dim: usize, field: &FieldSpec) -> Self {
        let inner = match field {
            FieldSpec::Rational => SpanImpl::Q(Echelon::new(dim, (), false)),
            FieldSpec::Prime(p) => SpanImpl::P(Echelon::new(dim, *p, false)),
        };
        Self { inner }
    }

    /// Adds `v`; true when it was not already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        match &mut self.inner {
            SpanImpl::Q(e) => e.insert(lift(v, ()), 0).is_none(),
            SpanImpl::P(e) => {
                let ctx = e.ctx;
                e.insert(lift(v, ctx), 0).is_none()
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        match &self.inner {
            SpanImpl::Q(e) => e.reduce(lift(v, ()), Vec::new(), false).0.is_empty(),
            SpanImpl::P(e) => e.reduce(lift(v, e.ctx), Vec::new(), false).0.is_empty(),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            SpanImpl::Q(e) => e.rank(),
            SpanImpl::P(e) => e.rank(),
        }
    }
}

/// Solves `A x = b` for many right-hand sides against a fixed `A`.
pub struct Solver {
    inner: SpanImpl,
}

impl Solver {
    pub fn new(a: &IntMatrix, field: &FieldSpec) -> Self {
        fn build<F: Field>(a: &IntMatrix, ctx: F::Ctx) -> Echelon<F> {
            let mut e = Echelon::new(a.nrows(), ctx, true);
            for (j, c) in a.cols().iter().enumerate() {
                e.insert(lift(c, ctx), j as u32);
            }
            e
        }
        let inner = match field {
            FieldSpec::Rational => SpanImpl::Q(build(a, ())),
            FieldSpec::Prime(p) => SpanImpl::P(build(a, *p)),
        };
        Self { inner }
    }

    /// Some `(x, d)` with `A x = d b`, `d > 0`; `None` when `b` is outside the image.
    pub fn solve(&self, b: &SparseVec) -> Result<Option<(SparseVec, i64)>> {
        fn go<F: Field>(e: &Echelon<F>, b: &SparseVec) -> Option<FVec<F>> {
            let ctx = e.ctx;
            let mut v = lift(b, ctx);
            let mut x: FVec<F> = Vec::new();
            while let Some((i, c)) = v.first().cloned() {
                let r = e.pivot_of[i as usize];
                if r == NONE {
                    return None;
                }
                v = axpy(&v, &c, &e.rows[r as usize], ctx);
                // x += c * combo
                x = axpy(&x, &c.neg(ctx), &e.combos[r as usize], ctx);
            }
            Some(x)
        }
        match &self.inner {
            SpanImpl::Q(e) => match go(e, b) {
                None => Ok(None),
                Some(x) => {
                    let mut l = num_bigint::BigInt::from(1);
                    for (_, q) in &x {
                        l = num_integer::Integer::lcm(&l, &q.numer_denom().1);
                    }
                    let d = num_traits::ToPrimitive::to_i64(&l).ok_or(GradedError::Overflow)?;
                    let xs = x
                        .iter()
                        .map(|(i, q)| {
                            let (n, den) = q.numer_denom();
                            num_traits::ToPrimitive::to_i64(&(n * (&l / den)))
                                .map(|n| (*i, n))
                                .ok_or(GradedError::Overflow)
                        })
                        .collect::<Result<_>>()?;
                    Ok(Some((xs, d)))
                }
            },
            SpanImpl::P(e) => Ok(go(e, b).map(|x| (to_ints_fp(&x), 1))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(m: &IntMatrix) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; m.ncols()]; m.nrows()];
        for (i, j, v) in m.triplets() {
            d[i as usize][j as usize] = v;
        }
        d
    }

    /// Fraction-free Bareiss rank on a dense copy, independent of the sparse code.
    fn bareiss_rank(m: &IntMatrix) -> usize {
        let mut a: Vec<Vec<i128>> =
            dense(m).into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let (n, k) = (m.nrows(), m.ncols());
        let (mut r, mut prev) = (0, 1i128);
        for c in 0..k {
            let Some(p) = (r..n).find(|&i| a[i][c] != 0) else { continue };
            a.swap(r, p);
            for i in r + 1..n {
                for j in c + 1..k {
                    a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
                }
                a[i][c] = 0;
            }
            prev = a[r][c];
            r += 1;
        }
        r
    }

    fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..7, 1usize..7).prop_flat_map(|(n, k)| {
            prop::collection::vec(prop::collection::vec(-2i64..3, n), k).prop_map(move |cols| {
                let cols = cols
                    .into_iter()
                    .map(|c| {
                        c.into_iter()
                            .enumerate()
                            .filter(|e| e.1 != 0)
                            .map(|(i, v)| (i as u32, v))
                            .collect()
                    })
                    .collect();
                IntMatrix::from_cols(n, cols)
            })
        })
    }

    #[test]
    fn small_kernel() {
        // columns (1,1), (1,1), (0,1)
        let m = IntMatrix::from_cols(2, vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, 1)], vec![(1, 1)]]);
        assert_eq!(rank(&m, &FieldSpec::Rational), 2);
        assert_eq!(kernel(&m, &FieldSpec::Rational).unwrap(), vec![vec![(0, 1), (1, -1)]]);
        // over F_2 the matrix [[1,1],[1,-1]] drops rank
        let m = IntMatrix::from_cols(2, vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, -1)]]);
        assert_eq!(rank(&m, &FieldSpec::Prime(2)), 1);
        assert_eq!(rank(&m, &FieldSpec::Rational), 2);
    }

    proptest! {
        #[test]
        fn rank_matches_bareiss(m in arb_matrix()) {
            prop_assert_eq!(rank(&m, &FieldSpec::Rational), bareiss_rank(&m));
        }

        #[test]
        fn kernel_is_kernel(m in arb_matrix()) {
            let ker = kernel(&m, &FieldSpec::Rational).unwrap();
            prop_assert_eq!(ker.len() + rank(&m, &FieldSpec::Rational), m.ncols());
            for v in &ker {
                prop_assert!(m.apply(v).unwrap().is_empty());
            }
            for p in [2u32, 3, 32003] {
                let f = FieldSpec::Prime(p);
                for v in kernel(&m, &f).unwrap() {
                    let mut w = m.apply(&v).unwrap();
                    reduce_mod(&mut w, p);
                    prop_assert!(w.is_empty());
                }
            }
        }

        #[test]
        fn solve_roundtrip(m in arb_matrix(), x in prop::collection::vec(-3i64..4, 6)) {
            let x: SparseVec = x.into_iter().take(m.ncols()).enumerate()
                .filter(|e| e.1 != 0).map(|(i, v)| (i as u32, v)).collect();
            let b = m.apply(&x).unwrap();
            let s = Solver::new(&m, &FieldSpec::Rational);
            let (y, d) = s.solve(&b).unwrap().unwrap();
            let mut db = b.clone();
            for e in db.iter_mut() { e.1 *= d; }
            prop_assert_eq!(m.apply(&y).unwrap(), db);
            let mut span = Span::new(m.nrows(), &FieldSpec::Rational);
            for c in m.cols() { span.insert(c); }
            prop_assert!(span.contains(&b));
            prop_assert_eq!(span.rank(), rank(&m, &FieldSpec::Rational));
        }
    }
}
