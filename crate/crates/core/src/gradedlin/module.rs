//! Graded modules over a Segre-type ring `R = ⊕_n S_{n·g}` and their minimal
//! free resolutions, Hom spaces and Ext groups, computed one degree at a time.
//!
//! A module is a sum of rank-one pieces `N_n = ⊕_k S_{o_k + n·g}` (the
//! ambient), or the submodule of such a sum generated by finitely many
//! homogeneous elements. Elements are sparse vectors in the monomial basis of
//! the ambient piece. `M_i` is the rank-one piece with offset `(i, 0)`, and the
//! free module `R(-d)` has offset `-d·g`.

use super::linalg::{kernel, rank, IntMatrix, Solver, Span, SparseVec};
use super::poly::{mono_div, mono_mul, Basis, Mono, PolyRing};
use super::{collect_sparse, par_map, GradedError, Result};
use crate::hilbert::{DegreeVector, FieldSpec, WeightedRingSpec};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex, RwLock};

/// `R = ⊕_n S_{n·g}` for a bigraded polynomial ring `S` and a step `g > 0`.
pub struct SegreRing {
    ring: Arc<PolyRing>,
    step: DegreeVector,
    field: FieldSpec,
    /// Monomials generating `R` as an algebra, with their degrees.
    alg_gens: Vec<(i64, Mono)>,
}

impl fmt::Debug for SegreRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SegreRing({}, step {:?})", self.ring.spec(), self.step.entries())
    }
}

impl SegreRing {
    pub fn new(ring: Arc<PolyRing>, step: DegreeVector, field: FieldSpec) -> Result<Arc<Self>> {
        if ring.rank() != 2 || step.rank() != 2 || step.entries().iter().any(|&s| s <= 0) {
            return Err(GradedError::Invalid("need a bigraded ring and a positive step".into()));
        }
        for v in 0..ring.nvars() {
            let w = ring.weight(v).entries();
            if w.iter().any(|&x| x < 0) || w.iter().filter(|&&x| x > 0).count() != 1 {
                return Err(GradedError::Invalid(
                    "each variable must have degree (w, 0) or (0, w) with w > 0".into(),
                ));
            }
        }
        let max = |e: usize| (0..ring.nvars()).map(|v| ring.weight(v).entries()[e]).max().unwrap_or(1);
        let bound = max(0).max(1) * max(1).max(1) * step.entries().iter().max().copied().unwrap_or(1);
        let mut alg_gens = Vec::new();
        for m in 1..=bound {
            for &mono in &ring.basis(&step.scale(m)).monos {
                let decomposable = (1..m).any(|k| {
                    ring.basis(&step.scale(k)).monos.iter().any(|&d| mono_div(mono, d).is_some())
                });
                if !decomposable {
                    alg_gens.push((m, mono));
                }
            }
        }
        Ok(Arc::new(Self { ring, step, field, alg_gens }))
    }

    /// `A # B` with `A` graded by `(w, 0)` and `B` by `(0, w)`, step `(1, 1)`.
    pub fn segre(a: &WeightedRingSpec, b: &WeightedRingSpec) -> Result<Arc<Self>> {
        let field = a.field();
        let s = PolyRing::new(a.clone())?.tensor(&*PolyRing::new(b.clone())?)?;
        Self::new(s, DegreeVector::new(vec![1, 1])?, field)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn step(&self) -> &DegreeVector {
        &self.step
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Same ring over another field.
    pub fn with_field(&self, field: FieldSpec) -> Arc<Self> {
        Arc::new(Self { ring: self.ring.clone(), step: self.step.clone(), field, alg_gens: self.alg_gens.clone() })
    }

    pub fn algebra_generators(&self) -> &[(i64, Mono)] {
        &self.alg_gens
    }

    /// Monomial basis of `R_n`.
    pub fn piece(&self, n: i64) -> Arc<Basis> {
        self.ring.basis(&self.step.scale(n))
    }

    pub fn dim(&self, n: i64) -> usize {
        self.piece(n).len()
    }
}

type SpaceCache = Arc<RwLock<BTreeMap<i64, Arc<Vec<SparseVec>>>>>;

/// A homogeneous element: its degree and ambient coordinates.
pub type Element = (i64, SparseVec);

#[derive(Clone)]
pub struct RModule {
    ring: Arc<SegreRing>,
    name: String,
    offsets: Vec<DegreeVector>,
    gens: Option<Vec<Element>>,
    cache: SpaceCache,
}

impl fmt::Debug for RModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RModule({}, {} ambient pieces", self.name, self.offsets.len())?;
        if let Some(g) = &self.gens {
            write!(f, ", {} generators", g.len())?;
        }
        write!(f, ")")
    }
}

impl RModule {
    /// `⊕_k S_{o_k + n·g}`.
    pub fn full(ring: &Arc<SegreRing>, name: &str, offsets: Vec<DegreeVector>) -> Self {
        Self { ring: ring.clone(), name: name.into(), offsets, gens: None, cache: SpaceCache::default() }
    }

    /// The submodule of `⊕_k S_{o_k + n·g}` generated by `gens`.
    pub fn submodule(ring: &Arc<SegreRing>, name: &str, offsets: Vec<DegreeVector>, gens: Vec<Element>) -> Self {
        Self { ring: ring.clone(), name: name.into(), offsets, gens: Some(gens), cache: SpaceCache::default() }
    }

    /// `M_i = ⊕_j S_{(i, 0) + j·g}`; `R = M_0` and, for the main example, `ω = M_1`.
    pub fn diagonal(ring: &Arc<SegreRing>, i: i64) -> Self {
        let name = match i {
            0 => "R".to_string(),
            _ => format!("M{i}"),
        };
        Self::full(ring, &name, vec![DegreeVector::new(vec![i, 0]).expect("rank 2")])
    }

    /// `⊕ R(-d)` over the given generator degrees.
    pub fn free(ring: &Arc<SegreRing>, degrees: &[i64]) -> Self {
        let name = free_name(degrees);
        Self::full(ring, &name, degrees.iter().map(|&d| ring.step.scale(-d)).collect())
    }

    /// `N(t)`, with `N(t)_n = N_{n+t}`.
    pub fn twist(&self, t: i64) -> Self {
        let off = self.ring.step.scale(t);
        Self {
            ring: self.ring.clone(),
            name: if t == 0 { self.name.clone() } else { format!("{}({t})", self.name) },
            offsets: self.offsets.iter().map(|o| o.add(&off)).collect(),
            gens: self.gens.as_ref().map(|g| g.iter().map(|(d, v)| (d - t, v.clone())).collect()),
            cache: SpaceCache::default(),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &Arc<SegreRing> {
        &self.ring
    }

    pub fn offsets(&self) -> &[DegreeVector] {
        &self.offsets
    }

    pub fn is_free_ambient(&self) -> bool {
        self.gens.is_none()
    }

    /// Lowest degree in which the module can be nonzero.
    pub fn low_degree(&self) -> i64 {
        if let Some(g) = &self.gens {
            return g.iter().map(|e| e.0).min().unwrap_or(0);
        }
        let g = self.ring.step.entries();
        self.offsets
            .iter()
            .map(|o| {
                o.entries()
                    .iter()
                    .zip(g)
                    .map(|(&oi, &gi)| (-oi).div_euclid(gi) + i64::from((-oi).rem_euclid(gi) != 0))
                    .max()
                    .unwrap_or(0)
            })
            .min()
            .unwrap_or(0)
    }

    fn pieces(&self, n: i64) -> Vec<Arc<Basis>> {
        let ng = self.ring.step.scale(n);
        self.offsets.iter().map(|o| self.ring.ring.basis(&o.add(&ng))).collect()
    }

    pub fn ambient_dim(&self, n: i64) -> usize {
        self.pieces(n).iter().map(|b| b.len()).sum()
    }

    /// Multiplies ambient vectors of degree `n` by monomials of `R`.
    fn multiplier(&self, n: i64) -> Multiplier {
        Multiplier { module: self.clone(), n, from: self.pieces(n), to: HashMap::new() }
    }

    /// A basis of `N_n` in ambient coordinates.
    pub fn space(&self, n: i64) -> Result<Arc<Vec<SparseVec>>> {
        if let Some(s) = self.cache.read().expect("space cache").get(&n) {
            return Ok(s.clone());
        }
        let dim = self.ambient_dim(n);
        let basis: Vec<SparseVec> = match &self.gens {
            None => (0..dim).map(|i| vec![(i as u32, 1)]).collect(),
            Some(_) => {
                let mut span = Span::new(dim, &self.ring.field);
                let mut out = Vec::new();
                for c in self.epsilon(n)?.cols() {
                    if span.insert(c) {
                        out.push(c.clone());
                    }
                }
                out
            }
        };
        let basis = Arc::new(basis);
        self.cache.write().expect("space cache").insert(n, basis.clone());
        Ok(basis)
    }

    pub fn dim(&self, n: i64) -> Result<usize> {
        Ok(self.space(n)?.len())
    }

    /// The map `⊕ R(-deg g) -> N`, `(g, ν) ↦ ν·g`, in degree `n`.
    fn epsilon(&self, n: i64) -> Result<IntMatrix> {
        let gens = self.gens.as_deref().unwrap_or(&[]);
        epsilon_of(self, gens, n)
    }
}

fn free_name(degrees: &[i64]) -> String {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &d in degrees {
        *counts.entry(d).or_insert(0) += 1;
    }
    if counts.is_empty() {
        return "0".into();
    }
    counts
        .iter()
        .map(|(&d, &m)| {
            let base = if d == 0 { "R".to_string() } else { format!("R({})", -d) };
            if m == 1 {
                base
            } else {
                format!("{base}^{m}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// `(g, ν) ↦ ν·g` for `ν` running over the monomials of `R_{n - deg g}`.
fn epsilon_of(target: &RModule, gens: &[Element], n: i64) -> Result<IntMatrix> {
    let dim = target.ambient_dim(n);
    let mut cols = Vec::new();
    let mut mults: HashMap<i64, Multiplier> = HashMap::new();
    for (d, v) in gens {
        if *d > n {
            continue;
        }
        let m = mults.entry(*d).or_insert_with(|| target.multiplier(*d));
        for &nu in &target.ring.piece(n - d).monos {
            cols.push(m.mul(v, nu, n - d)?);
        }
    }
    Ok(IntMatrix::from_cols(dim, cols))
}

struct Multiplier {
    module: RModule,
    n: i64,
    from: Vec<Arc<Basis>>,
    to: HashMap<i64, Vec<Arc<Basis>>>,
}

impl Multiplier {
    /// `ν·v` for `v` of degree `n` and `ν ∈ R_m`.
    fn mul(&mut self, v: &SparseVec, nu: Mono, m: i64) -> Result<SparseVec> {
        let n = self.n;
        let module = &self.module;
        let to = self.to.entry(m).or_insert_with(|| module.pieces(n + m));
        let mut acc = Vec::with_capacity(v.len());
        let (mut k, mut off, mut toff) = (0usize, 0usize, 0usize);
        for &(i, c) in v {
            let i = i as usize;
            while i >= off + self.from[k].len() {
                off += self.from[k].len();
                toff += to[k].len();
                k += 1;
            }
            let mono = mono_mul(self.from[k].monos[i - off], nu);
            let j = to[k].index(mono).expect("product lies in the target piece") as usize;
            acc.push(((toff + j) as u32, c));
        }
        collect_sparse(acc)
    }
}

/// Minimal generators of a graded subspace family `V_n ⊆ N_n` closed under
/// `R`: in each degree, a complement of `Σ_μ μ·V_{n - deg μ}` inside `V_n`.
fn minimal_generators(
    module: &RModule,
    spaces: &BTreeMap<i64, Arc<Vec<SparseVec>>>,
) -> Result<Vec<Element>> {
    let field = module.ring.field;
    let degrees: Vec<i64> = spaces.keys().copied().collect();
    let per = par_map(degrees, |n| -> Result<Vec<Element>> {
        let mut span = Span::new(module.ambient_dim(n), &field);
        for &(m, mu) in &module.ring.alg_gens {
            if let Some(lower) = spaces.get(&(n - m)) {
                let mut mult = module.multiplier(n - m);
                for v in lower.iter() {
                    span.insert(&mult.mul(v, mu, m)?);
                }
            }
        }
        let mut out = Vec::new();
        for v in spaces[&n].iter() {
            if span.insert(v) {
                out.push((n, v.clone()));
            }
        }
        Ok(out)
    });
    let mut gens = Vec::new();
    for r in per {
        gens.extend(r?);
    }
    Ok(gens)
}

/// Minimal graded free resolution `... -> F_1 -> F_0 -> M`, computed in
/// degrees up to `top`.
#[derive(Clone, Debug)]
pub struct Resolution {
    module: RModule,
    /// `gens[0]` generate `M` (ambient coordinates of `M`); `gens[i]` generate
    /// the `i`-th syzygy inside `F_{i-1}`.
    gens: Vec<Vec<Element>>,
    frees: Vec<RModule>,
    top: i64,
}

impl Resolution {
    /// Resolves `m` to homological depth `depth` using degrees `<= top`.
    ///
    /// Fails with a certification gap when a generator shows up within
    /// `margin` degrees of `top`, since then generators above `top` cannot be
    /// ruled out.
    pub fn compute(m: &RModule, depth: usize, top: i64) -> Result<Self> {
        let margin = m.ring.alg_gens.iter().map(|g| g.0).max().unwrap_or(1);
        let lo = m.low_degree();
        let degrees: Vec<i64> = (lo..=top).collect();
        let spaces: BTreeMap<i64, Arc<Vec<SparseVec>>> = par_map(degrees, |n| m.space(n).map(|s| (n, s)))
            .into_iter()
            .collect::<Result<_>>()?;
        let g0 = minimal_generators(m, &spaces)?;
        certify(&g0, top, margin, 0, m.name())?;
        let mut gens = vec![g0];
        let mut frees = Vec::new();
        for i in 0..depth {
            let ambient = if i == 0 { m } else { &frees[i - 1] };
            let g = &gens[i];
            let degs: Vec<i64> = g.iter().map(|e| e.0).collect();
            let free = RModule::free(&m.ring, &degs);
            let lo = degs.iter().copied().min().unwrap_or(top + 1);
            let field = m.ring.field;
            let kernels: BTreeMap<i64, Arc<Vec<SparseVec>>> = par_map((lo..=top).collect(), |n| {
                let eps = epsilon_of(ambient, g, n)?;
                Ok((n, Arc::new(kernel(&eps, &field)?)))
            })
            .into_iter()
            .collect::<Result<_>>()?;
            let next = minimal_generators(&free, &kernels)?;
            certify(&next, top, margin, i + 1, m.name())?;
            frees.push(free);
            gens.push(next);
        }
        Ok(Self { module: m.clone(), gens, frees, top })
    }

    pub fn module(&self) -> &RModule {
        &self.module
    }

    pub fn depth(&self) -> usize {
        self.frees.len()
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    /// Generator degrees of `F_i`.
    pub fn degrees(&self, i: usize) -> Vec<i64> {
        self.gens[i].iter().map(|e| e.0).collect()
    }

    /// Betti numbers: for each `i`, degree ↦ number of generators of `F_i`.
    pub fn betti(&self) -> Vec<BTreeMap<i64, usize>> {
        self.gens
            .iter()
            .map(|g| {
                let mut t = BTreeMap::new();
                for e in g {
                    *t.entry(e.0).or_insert(0) += 1;
                }
                t
            })
            .collect()
    }

    /// The free module `F_i`.
    pub fn free(&self, i: usize) -> RModule {
        RModule::free(&self.module.ring, &self.degrees(i))
    }

    /// `Ω^k M` as the submodule of `F_{k-1}` generated by the `k`-th syzygies.
    pub fn syzygy(&self, k: usize) -> Result<RModule> {
        if k == 0 {
            return Ok(self.module.clone());
        }
        if k > self.depth() {
            return Err(GradedError::Invalid(format!("resolution only has depth {}", self.depth())));
        }
        let name = match k {
            1 => format!("Ω{}", self.module.name),
            _ => format!("Ω^{k}{}", self.module.name),
        };
        let f = &self.frees[k - 1];
        Ok(RModule::submodule(&self.module.ring, &name, f.offsets.clone(), self.gens[k].clone()))
    }

    /// Every differential has entries in `R_+`: no generator of `F_{i+1}`
    /// has a nonzero scalar coefficient on a generator of `F_i`.
    pub fn is_minimal(&self) -> bool {
        (1..self.gens.len()).all(|i| {
            let f = &self.frees[i - 1];
            self.gens[i].iter().all(|(d, v)| {
                // coordinates of a degree-d element on generators of degree d are scalars
                let pieces = f.pieces(*d);
                let mut off = 0;
                let mut scalar_cols = Vec::new();
                for (k, b) in pieces.iter().enumerate() {
                    if self.gens[i - 1][k].0 == *d {
                        scalar_cols.extend(off..off + b.len());
                    }
                    off += b.len();
                }
                v.iter().all(|&(j, _)| !scalar_cols.contains(&(j as usize)))
            })
        })
    }
}

fn certify(gens: &[Element], top: i64, margin: i64, step: usize, name: &str) -> Result<()> {
    if let Some(e) = gens.iter().find(|e| e.0 > top - margin) {
        return Err(GradedError::CertificationGap(format!(
            "{name}: generator of F_{step} in degree {} is within {margin} of the top degree {top}",
            e.0
        )));
    }
    Ok(())
}

/// `Ext^i_R(M, N)_d` for `(i, d)` in the given ranges; only nonzero entries are kept.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub source: String,
    pub target: String,
    pub window: (i64, i64),
    #[serde(serialize_with = "super::triples")]
    pub dims: BTreeMap<(usize, i64), usize>,
}

impl ExtTable {
    pub fn at(&self, i: usize, d: i64) -> usize {
        self.dims.get(&(i, d)).copied().unwrap_or(0)
    }

    pub fn total(&self, i: usize) -> usize {
        self.dims.iter().filter(|e| e.0 .0 == i).map(|e| e.1).sum()
    }
}

impl fmt::Display for ExtTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({}, {}) on [{}, {}]:", self.source, self.target, self.window.0, self.window.1)?;
        if self.dims.is_empty() {
            return write!(f, " 0");
        }
        for (&(i, d), &v) in &self.dims {
            write!(f, " Ext^{i}[{d}] = {v}")?;
        }
        Ok(())
    }
}

/// The cochain map `Hom(F_i, N)_d -> Hom(F_{i+1}, N)_d` with source in
/// `N`-basis coordinates and target in ambient coordinates of `N`.
fn hom_differential(res: &Resolution, i: usize, target: &RModule, d: i64) -> Result<IntMatrix> {
    let src = &res.gens[i];
    let rels: &[Element] = res.gens.get(i + 1).map_or(&[], |v| v.as_slice());
    // split every relation into (generator of F_i, R-monomial, coefficient)
    let free = &res.frees[i];
    let mut split: Vec<Vec<(usize, Mono, i64, i64)>> = Vec::new();
    for (e, v) in rels {
        let pieces = free.pieces(*e);
        let mut out = Vec::new();
        let (mut k, mut off) = (0usize, 0usize);
        for &(j, c) in v {
            let j = j as usize;
            while j >= off + pieces[k].len() {
                off += pieces[k].len();
                k += 1;
            }
            out.push((k, pieces[k].monos[j - off], e - src[k].0, c));
        }
        split.push(out);
    }
    let mut row_off = Vec::with_capacity(rels.len() + 1);
    row_off.push(0usize);
    for (e, _) in rels {
        row_off.push(row_off.last().expect("nonempty") + target.ambient_dim(d + e));
    }
    let nrows = *row_off.last().expect("nonempty");
    let mut cols = Vec::new();
    for (k, (eg, _)) in src.iter().enumerate() {
        let basis = target.space(d + eg)?;
        let mut mult = target.multiplier(d + eg);
        for b in basis.iter() {
            let mut acc = Vec::new();
            for (h, terms) in split.iter().enumerate() {
                for &(g, nu, m, c) in terms {
                    if g != k {
                        continue;
                    }
                    for (r, x) in mult.mul(b, nu, m)? {
                        let v = x.checked_mul(c).ok_or(GradedError::Overflow)?;
                        acc.push(((row_off[h] + r as usize) as u32, v));
                    }
                }
            }
            cols.push(collect_sparse(acc)?);
        }
    }
    let mut m = IntMatrix::from_cols(nrows, cols);
    m.reduce(&target.ring.field);
    Ok(m)
}

/// Graded Ext dimensions from the resolution of the first argument.
pub fn ext_dims(
    res: &Resolution,
    target: &RModule,
    i_range: RangeInclusive<usize>,
    window: (i64, i64),
) -> Result<ExtTable> {
    let (i0, i1) = (*i_range.start(), *i_range.end());
    if i1 + 1 > res.depth() {
        return Err(GradedError::CertificationGap(format!(
            "Ext^{i1} needs a resolution of depth {}, have {}",
            i1 + 1,
            res.depth()
        )));
    }
    let field = target.ring.field;
    let jobs: Vec<(usize, i64)> =
        (i0.saturating_sub(1)..=i1).flat_map(|i| (window.0..=window.1).map(move |d| (i, d))).collect();
    let ranks: HashMap<(usize, i64), (usize, usize)> = par_map(jobs, |(i, d)| {
        let m = hom_differential(res, i, target, d)?;
        Ok(((i, d), (m.ncols(), rank(&m, &field))))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mut dims = BTreeMap::new();
    for i in i0..=i1 {
        for d in window.0..=window.1 {
            let (cols, r) = ranks[&(i, d)];
            let prev = if i == 0 { 0 } else { ranks[&(i - 1, d)].1 };
            let v = cols - r - prev;
            if v > 0 {
                dims.insert((i, d), v);
            }
        }
    }
    Ok(ExtTable { source: res.module.name.clone(), target: target.name.clone(), window, dims })
}

/// A homogeneous map `M -> N` of degree `degree`, given by the images of the
/// generators of `M` (ambient coordinates of `N`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomMap {
    pub degree: i64,
    pub images: Vec<SparseVec>,
}

/// A basis of `Hom_R(M, N)_d`.
pub struct HomSpace {
    pub degree: i64,
    pub maps: Vec<HomMap>,
    layout: Vec<usize>,
}

impl HomSpace {
    pub fn compute(res: &Resolution, target: &RModule, d: i64) -> Result<Self> {
        if res.depth() < 1 {
            return Err(GradedError::Invalid("Hom needs the first syzygies".into()));
        }
        let field = target.ring.field;
        let phi = hom_differential(res, 0, target, d)?;
        let spaces: Vec<Arc<Vec<SparseVec>>> =
            res.gens[0].iter().map(|(e, _)| target.space(d + e)).collect::<Result<_>>()?;
        let layout: Vec<usize> = res.gens[0].iter().map(|(e, _)| target.ambient_dim(d + e)).collect();
        let mut maps = Vec::new();
        for v in kernel(&phi, &field)? {
            // kernel coordinates run over the N-bases of the generator targets
            let mut images = vec![Vec::new(); spaces.len()];
            let mut bounds = Vec::with_capacity(spaces.len());
            let mut acc = 0;
            for s in &spaces {
                bounds.push(acc);
                acc += s.len();
            }
            let mut per: Vec<Vec<(u32, i64)>> = vec![Vec::new(); spaces.len()];
            for (j, c) in v {
                let j = j as usize;
                let k = bounds.partition_point(|&b| b <= j) - 1;
                for &(r, x) in &spaces[k][j - bounds[k]] {
                    per[k].push((r, x.checked_mul(c).ok_or(GradedError::Overflow)?));
                }
            }
            for (k, p) in per.into_iter().enumerate() {
                let mut s = collect_sparse(p)?;
                if let FieldSpec::Prime(q) = field {
                    super::linalg::reduce_mod(&mut s, q);
                }
                images[k] = s;
            }
            maps.push(HomMap { degree: d, images });
        }
        Ok(Self { degree: d, maps, layout })
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// Total ambient length of a flattened map.
    pub fn flat_dim(&self) -> usize {
        self.layout.iter().sum()
    }

    /// All generator images concatenated, for span computations.
    pub fn flatten(&self, f: &HomMap) -> SparseVec {
        let mut out = Vec::new();
        let mut off = 0u32;
        for (k, img) in f.images.iter().enumerate() {
            out.extend(img.iter().map(|&(r, c)| (r + off, c)));
            off += self.layout[k] as u32;
        }
        out
    }
}

/// Expresses elements of a module through its generators, for composing maps.
pub struct Composer {
    target: RModule,
    gens: Vec<Element>,
    solvers: Mutex<HashMap<i64, Arc<Solver>>>,
}

impl Composer {
    /// `res` resolves the middle module `N` of a composite `M -> N -> P`.
    pub fn new(res: &Resolution) -> Self {
        Self { target: res.module.clone(), gens: res.gens[0].clone(), solvers: Mutex::new(HashMap::new()) }
    }

    fn solver(&self, n: i64) -> Result<Arc<Solver>> {
        if let Some(s) = self.solvers.lock().expect("solver cache").get(&n) {
            return Ok(s.clone());
        }
        let eps = epsilon_of(&self.target, &self.gens, n)?;
        let s = Arc::new(Solver::new(&eps, &self.target.ring.field));
        self.solvers.lock().expect("solver cache").insert(n, s.clone());
        Ok(s)
    }

    /// `ψ∘φ` up to a nonzero scalar, where `φ: M -> N` and `ψ: N -> P`;
    /// `source_degrees` are the generator degrees of `M`, `p` is `P`.
    pub fn compose(&self, phi: &HomMap, psi: &HomMap, source_degrees: &[i64], p: &RModule) -> Result<HomMap> {
        let field = self.target.ring.field;
        let mut scaled = Vec::with_capacity(phi.images.len());
        for (k, v) in phi.images.iter().enumerate() {
            let e = source_degrees[k] + phi.degree;
            let (x, den) = self
                .solver(e)?
                .solve(v)?
                .ok_or_else(|| GradedError::Invalid("image outside the middle module".into()))?;
            // x runs over (generator j of N, monomial ν ∈ R_{e - deg n_j})
            let mut acc = Vec::new();
            let mut bounds = Vec::new();
            let mut off = 0usize;
            for (d, _) in &self.gens {
                bounds.push(off);
                if *d <= e {
                    off += self.target.ring.dim(e - d);
                }
            }
            let mut mults: HashMap<i64, Multiplier> = HashMap::new();
            for (j, c) in x {
                let j = j as usize;
                let g = bounds.partition_point(|&b| b <= j) - 1;
                let dg = self.gens[g].0;
                let nu = self.target.ring.piece(e - dg).monos[j - bounds[g]];
                let m = mults.entry(dg + psi.degree).or_insert_with(|| p.multiplier(dg + psi.degree));
                for (r, y) in m.mul(&psi.images[g], nu, e - dg)? {
                    acc.push((r, y.checked_mul(c).ok_or(GradedError::Overflow)?));
                }
            }
            scaled.push((collect_sparse(acc)?, den));
        }
        // bring all generator images to a common denominator
        let images = match field {
            FieldSpec::Rational => {
                let l = scaled.iter().try_fold(1i64, |l, (_, d)| {
                    let g = num_integer::gcd(l, *d);
                    (l / g).checked_mul(*d).ok_or(GradedError::Overflow)
                })?;
                scaled
                    .into_iter()
                    .map(|(v, d)| {
                        v.into_iter()
                            .map(|(r, x)| x.checked_mul(l / d).map(|x| (r, x)).ok_or(GradedError::Overflow))
                            .collect::<Result<SparseVec>>()
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            FieldSpec::Prime(q) => scaled
                .into_iter()
                .map(|(v, d)| {
                    let inv = mod_inverse(d.rem_euclid(q as i64), q as i64);
                    let mut v: SparseVec = v.into_iter().map(|(r, x)| (r, x.rem_euclid(q as i64) * inv)).collect();
                    super::linalg::reduce_mod(&mut v, q);
                    v
                })
                .collect(),
        };
        Ok(HomMap { degree: phi.degree + psi.degree, images })
    }
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    let (mut r, mut e, mut b) = (1i64, p - 2, a % p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Degrees of a minimal generating set, with multiplicities.
pub fn generation_degrees(m: &RModule, top: i64) -> Result<BTreeMap<i64, usize>> {
    let r = Resolution::compute(m, 0, top)?;
    Ok(r.betti().swap_remove(0))
}

/// Degreewise check of `Hom_R(M_i, M_j) ≅ M_{j-i}` on `window`.
pub fn hom_segre_check(ring: &Arc<SegreRing>, i: i64, j: i64, window: (i64, i64)) -> Result<bool> {
    let mi = RModule::diagonal(ring, i);
    let mj = RModule::diagonal(ring, j);
    let mji = RModule::diagonal(ring, j - i);
    let top = mi.low_degree().max(0) + window.1.max(0) + 2 * ring.alg_gens.iter().map(|g| g.0).max().unwrap_or(1) + 2;
    let res = Resolution::compute(&mi, 1, top)?;
    for d in window.0..=window.1 {
        if ext_dims(&res, &mj, 0..=0, (d, d))?.at(0, d) != mji.dim(d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn main_ring() -> Arc<SegreRing> {
        SegreRing::segre(
            &WeightedRingSpec::standard(&["x0", "x1"]).unwrap(),
            &WeightedRingSpec::standard(&["y0", "y1", "y2"]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn algebra_generators() {
        let r = main_ring();
        assert_eq!(r.algebra_generators().len(), 6);
        assert!(r.algebra_generators().iter().all(|g| g.0 == 1));
        let w = SegreRing::segre(
            &WeightedRingSpec::standard(&["x", "y", "z"]).unwrap(),
            &WeightedRingSpec::weighted(&["u", "v"], &[1, 2]).unwrap(),
        )
        .unwrap();
        // x_a u in degree 1 and x_a x_b v in degree 2
        let by_deg = |d| w.algebra_generators().iter().filter(|g| g.0 == d).count();
        assert_eq!((by_deg(1), by_deg(2)), (3, 6));
    }

    #[test]
    fn generators_of_diagonal_modules() {
        let r = main_ring();
        let g = |i| generation_degrees(&RModule::diagonal(&r, i), 6).unwrap();
        assert_eq!(g(0), [(0, 1)].into_iter().collect());
        assert_eq!(g(1), [(0, 2)].into_iter().collect());
        assert_eq!(g(-1), [(1, 3)].into_iter().collect());
        assert_eq!(g(2), [(0, 3)].into_iter().collect());
    }

    #[test]
    fn free_module_resolution_stops() {
        let r = main_ring();
        let res = Resolution::compute(&RModule::diagonal(&r, 0), 2, 6).unwrap();
        assert_eq!(res.degrees(1), Vec::<i64>::new());
        assert!(res.is_minimal());
    }

    #[test]
    fn first_syzygy_of_omega() {
        let r = main_ring();
        let res = Resolution::compute(&RModule::diagonal(&r, 1), 2, 7).unwrap();
        assert!(res.is_minimal());
        assert_eq!(res.degrees(0), vec![0, 0]);
        let om = res.syzygy(1).unwrap();
        for n in 0..5 {
            assert_eq!(om.dim(n).unwrap(), RModule::diagonal(&r, -1).dim(n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn hom_identifications() {
        let r = main_ring();
        assert!(hom_segre_check(&r, 0, 1, (-2, 3)).unwrap());
        assert!(hom_segre_check(&r, 1, 0, (-2, 3)).unwrap());
        assert!(hom_segre_check(&r, -1, 1, (-2, 3)).unwrap());
    }

    #[test]
    fn ext_of_free_vanishes() {
        let r = main_ring();
        let res = Resolution::compute(&RModule::diagonal(&r, 0), 2, 6).unwrap();
        let t = ext_dims(&res, &RModule::diagonal(&r, 1), 1..=1, (-3, 3)).unwrap();
        assert_eq!(t.total(1), 0);
    }
}
