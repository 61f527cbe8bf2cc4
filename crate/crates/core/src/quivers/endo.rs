//! Quivers of graded endomorphism rings `End_R(⊕ T_a)`: arrows `a -> b` count
//! `rad/rad²` between the summands, degree by degree.

use super::{Quiver, QuiverError, Result};
use crate::gradedlin::linalg::Span;
use crate::gradedlin::{par_map, Composer, GradedError, HomSpace, RModule, Resolution, SegreRing};
use crate::hilbert::{DegreeVector, WeightedRingSpec};
use std::collections::BTreeMap;
use std::sync::Arc;

impl From<GradedError> for QuiverError {
    fn from(e: GradedError) -> Self {
        match e {
            GradedError::CertificationGap(s) => QuiverError::Certification(s),
            e => QuiverError::Linear(e.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EndoOptions {
    /// Degrees of the maps taken into account.
    pub window: (i64, i64),
    /// Top degree used to resolve the summands; derived from the window when absent.
    pub top: Option<i64>,
}

impl Default for EndoOptions {
    fn default() -> Self {
        Self { window: (-4, 4), top: None }
    }
}

/// The quiver together with the Hom data it was read from.
pub struct EndoQuiver {
    pub quiver: Quiver,
    pub window: (i64, i64),
    modules: Vec<RModule>,
    resolutions: Vec<Resolution>,
    composers: Vec<Composer>,
    homs: BTreeMap<(usize, usize, i64), HomSpace>,
}

impl EndoQuiver {
    pub fn labels(&self) -> &[String] {
        self.quiver.vertices()
    }

    pub fn hom_dim(&self, a: usize, b: usize, d: i64) -> usize {
        self.homs.get(&(a, b, d)).map_or(0, HomSpace::dim)
    }

    /// `dim Hom(a, b)_d` minus the maps factoring through the `free` vertices.
    pub fn stable_hom_dim(&self, a: usize, b: usize, d: i64, free: &[usize]) -> Result<usize> {
        let all = self.hom_dim(a, b, d);
        let through = self.composite_rank(a, b, d, &[], free, all)?;
        Ok(all - through)
    }

    /// Total stable Hom dimension over the window.
    pub fn stable_hom_total(&self, a: usize, b: usize, free: &[usize]) -> Result<usize> {
        (self.window.0..=self.window.1).map(|d| self.stable_hom_dim(a, b, d, free)).sum()
    }

    fn rad(&self, a: usize, b: usize, d: i64) -> &[crate::gradedlin::HomMap] {
        if a == b && d == 0 {
            return &[];
        }
        self.homs.get(&(a, b, d)).map_or(&[], |h| h.maps.as_slice())
    }

    fn all(&self, a: usize, b: usize, d: i64) -> &[crate::gradedlin::HomMap] {
        self.homs.get(&(a, b, d)).map_or(&[], |h| h.maps.as_slice())
    }

    /// Rank of the span of `ψ∘φ` for radical maps through `rad_via` and
    /// arbitrary maps through `any_via`; stops once `cap` is reached.
    fn composite_rank(
        &self,
        a: usize,
        b: usize,
        d: i64,
        rad_via: &[usize],
        any_via: &[usize],
        cap: usize,
    ) -> Result<usize> {
        let Some(space) = self.homs.get(&(a, b, d)) else { return Ok(0) };
        if cap == 0 {
            return Ok(0);
        }
        let field = self.modules[b].ring().field();
        let mut span = Span::new(space.flat_dim(), &field);
        let src = self.resolutions[a].degrees(0);
        let (lo, hi) = self.window;
        let vias = rad_via.iter().map(|&c| (c, true)).chain(any_via.iter().map(|&c| (c, false)));
        for (c, radical) in vias {
            for d1 in lo..=hi {
                let d2 = d - d1;
                if d2 < lo || d2 > hi {
                    continue;
                }
                let (left, right) = if radical {
                    (self.rad(a, c, d1), self.rad(c, b, d2))
                } else {
                    (self.all(a, c, d1), self.all(c, b, d2))
                };
                for phi in left {
                    for psi in right {
                        let f = self.composers[c].compose(phi, psi, &src, &self.modules[b])?;
                        span.insert(&space.flatten(&f));
                        if span.rank() == cap {
                            return Ok(cap);
                        }
                    }
                }
            }
        }
        Ok(span.rank())
    }
}

/// Endomorphism quiver of `⊕ modules` with maps of degree in `window`.
pub fn endo_quiver(modules: &[RModule], window: (i64, i64)) -> Result<EndoQuiver> {
    endo_quiver_with(modules, &EndoOptions { window, top: None })
}

pub fn endo_quiver_with(modules: &[RModule], opts: &EndoOptions) -> Result<EndoQuiver> {
    let (lo, hi) = opts.window;
    let quiver = Quiver::new(modules.iter().map(|m| m.name().to_string()).collect())?;
    let top = opts.top.unwrap_or_else(|| {
        let low = modules.iter().map(RModule::low_degree).max().unwrap_or(0);
        let margin = modules
            .first()
            .map_or(1, |m| m.ring().algebra_generators().iter().map(|g| g.0).max().unwrap_or(1));
        low + 3 * margin + 3
    });
    let resolutions: Vec<Resolution> = modules
        .iter()
        .map(|m| Resolution::compute(m, 1, top))
        .collect::<std::result::Result<_, _>>()?;
    let composers = resolutions.iter().map(Composer::new).collect();
    let n = modules.len();
    let jobs: Vec<(usize, usize, i64)> =
        (0..n).flat_map(|a| (0..n).flat_map(move |b| (lo..=hi).map(move |d| (a, b, d)))).collect();
    let homs = par_map(jobs, |(a, b, d)| {
        HomSpace::compute(&resolutions[a], &modules[b], d).map(|h| ((a, b, d), h))
    })
    .into_iter()
    .collect::<std::result::Result<BTreeMap<_, _>, _>>()?;
    for a in 0..n {
        let dim = homs.get(&(a, a, 0)).map_or(0, HomSpace::dim);
        if dim != 1 {
            return Err(QuiverError::NonLocal { label: modules[a].name().to_string(), dim });
        }
    }
    let mut eq = EndoQuiver { quiver, window: opts.window, modules: modules.to_vec(), resolutions, composers, homs };
    let everything: Vec<usize> = (0..n).collect();
    let counts = arrow_counts(&eq, &everything, &everything, &[])?;
    for ((a, b, d), k) in counts {
        eq.quiver.add_graded_arrows(a, b, d, k);
    }
    Ok(eq)
}

/// `dim rad_d(a,b) - dim (rad² + maps through free vertices)_d` for the pairs
/// `a, b` in `vertices`, composing through `rad_via` and `free`.
fn arrow_counts(
    eq: &EndoQuiver,
    vertices: &[usize],
    rad_via: &[usize],
    free: &[usize],
) -> Result<BTreeMap<(usize, usize, i64), usize>> {
    let (lo, hi) = eq.window;
    let jobs: Vec<(usize, usize, i64)> = vertices
        .iter()
        .flat_map(|&a| vertices.iter().flat_map(move |&b| (lo..=hi).map(move |d| (a, b, d))))
        .collect();
    par_map(jobs, |(a, b, d)| {
        let r = eq.rad(a, b, d).len();
        let sq = eq.composite_rank(a, b, d, rad_via, free, r)?;
        Ok(((a, b, d), r - sq))
    })
    .into_iter()
    .collect()
}

/// Quiver of the stable endomorphism ring: the `free` vertices are removed
/// and maps factoring through them are divided out before taking `rad/rad²`.
pub fn stable_reduce(eq: &EndoQuiver, free: &[&str]) -> Result<Quiver> {
    let free_idx: Vec<usize> = free.iter().map(|l| eq.quiver.index_of(l)).collect::<Result<_>>()?;
    let keep: Vec<usize> = (0..eq.quiver.vertex_count()).filter(|v| !free_idx.contains(v)).collect();
    let counts = arrow_counts(eq, &keep, &keep, &free_idx)?;
    let mut q = Quiver::new(keep.iter().map(|&v| eq.quiver.vertices()[v].clone()).collect())?;
    let pos = |v: usize| keep.iter().position(|&k| k == v).expect("kept vertex");
    for ((a, b, d), k) in counts {
        q.add_graded_arrows(pos(a), pos(b), d, k);
    }
    Ok(q)
}

/// Non-free summands of one term of a sequence, read from its label
/// (`"M1(-1)+M-1^3"` gives `{M-1: 3, M1: 1}`); twists are ignored.
pub fn middle_multiplicities(labels: &[String], position: usize, free: &str) -> Result<BTreeMap<String, usize>> {
    let term = labels
        .get(position)
        .ok_or_else(|| QuiverError::UnknownVertex(format!("position {position}")))?;
    let mut out = BTreeMap::new();
    for part in term.split('+') {
        let (base, mult) = match part.rsplit_once('^') {
            Some((b, m)) => (b, m.parse::<usize>().map_err(|_| QuiverError::UnknownVertex(part.into()))?),
            None => (part, 1),
        };
        let name = base.split('(').next().unwrap_or(base).trim();
        if name.is_empty() || name == "0" || name == free {
            continue;
        }
        *out.entry(name.to_string()).or_insert(0) += mult;
    }
    Ok(out)
}

/// Quiver of the `p`-Segre product of `A^(qa)` and `B^(qb)` with their
/// standard cluster tilting modules: the summands of `S` with offsets
/// `(qa·l + r', r'')`, `0 <= l < p`, `0 <= r' < qa`, `0 <= r'' < qb`, over the
/// Veronese-type ring with step `(qa, qb)`.
pub fn p_segre_quiver(
    a: &WeightedRingSpec,
    qa: i64,
    b: &WeightedRingSpec,
    qb: i64,
    p: usize,
    opts: &EndoOptions,
) -> Result<EndoQuiver> {
    if p == 0 || qa <= 0 || qb <= 0 {
        return Err(QuiverError::Linear("p, qa and qb must be positive".into()));
    }
    let s = crate::gradedlin::PolyRing::new(a.clone())?.tensor(&*crate::gradedlin::PolyRing::new(b.clone())?)?;
    let step = DegreeVector::new(vec![qa, qb]).map_err(GradedError::from)?;
    let ring: Arc<SegreRing> = SegreRing::new(s, step, a.field())?;
    let mut modules = Vec::new();
    for l in 0..p as i64 {
        for r1 in 0..qa {
            for r2 in 0..qb {
                let o1 = qa * l + r1;
                let name = if qa == 1 && qb == 1 {
                    if o1 == 0 { "R".to_string() } else { format!("M{o1}") }
                } else {
                    format!("P({o1},{r2})")
                };
                let off = DegreeVector::new(vec![o1, r2]).map_err(GradedError::from)?;
                modules.push(RModule::full(&ring, &name, vec![off]));
            }
        }
    }
    endo_quiver_with(&modules, opts)
}
