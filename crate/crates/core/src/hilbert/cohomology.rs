use super::series::{graded_dual, hadamard, ring_series, twist};
use super::{DegreeVector, HilbertError, HilbertSeries, Result, WeightedRingSpec, Window};
use serde::Serialize;

/// Known global support of a singly graded module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Support {
    Zero,
    Bounded { lower: Option<i64>, upper: Option<i64> },
}

impl Support {
    pub fn above(lower: i64) -> Self {
        Support::Bounded {
            lower: Some(lower),
            upper: None,
        }
    }

    pub fn below(upper: i64) -> Self {
        Support::Bounded {
            lower: None,
            upper: Some(upper),
        }
    }

    /// Support of a coefficientwise product.
    pub fn meet(self, o: Support) -> Support {
        match (self, o) {
            (Support::Zero, _) | (_, Support::Zero) => Support::Zero,
            (
                Support::Bounded { lower: l1, upper: u1 },
                Support::Bounded { lower: l2, upper: u2 },
            ) => {
                let lower = match (l1, l2) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                };
                let upper = match (u1, u2) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                if let (Some(l), Some(u)) = (lower, upper) {
                    if l > u {
                        return Support::Zero;
                    }
                }
                Support::Bounded { lower, upper }
            }
        }
    }

    /// Support of a direct sum.
    pub fn join(self, o: Support) -> Support {
        match (self, o) {
            (Support::Zero, s) | (s, Support::Zero) => s,
            (
                Support::Bounded { lower: l1, upper: u1 },
                Support::Bounded { lower: l2, upper: u2 },
            ) => Support::Bounded {
                lower: l1.zip(l2).map(|(a, b)| a.min(b)),
                upper: u1.zip(u2).map(|(a, b)| a.max(b)),
            },
        }
    }
}

/// How a vanishing claim is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Vanishing {
    /// Zero for a structural reason (a zero factor or disjoint supports).
    Certified,
    /// Zero on the computed window only.
    ZeroOnWindow,
    NonZero,
}

#[derive(Clone, Debug)]
pub struct CohomologyTerm {
    pub series: HilbertSeries,
    pub support: Support,
    pub vanishing: Vanishing,
}

impl CohomologyTerm {
    fn zero(window: &Window) -> Self {
        Self {
            series: HilbertSeries::zero(window.clone()),
            support: Support::Zero,
            vanishing: Vanishing::Certified,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.vanishing != Vanishing::NonZero
    }
}

/// `H^p_m(M)` for `p = 0..=ring_dim`.
#[derive(Clone, Debug)]
pub struct LocalCohomologyProfile {
    pub ring_dim: usize,
    pub per_degree: Vec<CohomologyTerm>,
}

impl LocalCohomologyProfile {
    /// Smallest `p` with nonzero `H^p` on the window.
    pub fn depth(&self) -> usize {
        self.per_degree
            .iter()
            .position(|t| !t.is_zero())
            .unwrap_or(self.ring_dim + 1)
    }

    pub fn is_cm(&self) -> bool {
        self.depth() >= self.ring_dim
    }

    /// Top degree of the highest local cohomology.
    pub fn a_invariant(&self) -> Option<i64> {
        self.per_degree[self.ring_dim].series.top_degree()
    }
}

/// A module together with its series, support and local cohomology.
#[derive(Clone, Debug)]
pub struct ModuleCohomology {
    pub series: HilbertSeries,
    pub support: Support,
    pub profile: LocalCohomologyProfile,
}

fn rank_one(spec: &WeightedRingSpec) -> Result<i64> {
    let w = spec.scalar_weights()?;
    Ok(w.iter().sum())
}

/// Local cohomology of `S(shift)` via graded local duality: only `H^d` survives and
/// `H^d(S(s))_e = S_{-e-s-sum(w)}`.
pub fn local_cohomology_poly(
    spec: &WeightedRingSpec,
    shift: i64,
    window: &Window,
) -> Result<LocalCohomologyProfile> {
    let sw = rank_one(spec)?;
    if window.rank() != 1 {
        return Err(HilbertError::NeedsRankOne);
    }
    let d = spec.dim();
    let off = sw + shift;
    let need = Window::interval(-window.hi()[0] - off, -window.lo()[0] - off);
    let top = twist(
        &graded_dual(&ring_series(spec, &need)?),
        &DegreeVector::scalar(off),
    );
    let mut per_degree: Vec<CohomologyTerm> = (0..d).map(|_| CohomologyTerm::zero(window)).collect();
    per_degree.push(CohomologyTerm {
        vanishing: if top.is_zero() {
            Vanishing::ZeroOnWindow
        } else {
            Vanishing::NonZero
        },
        series: top,
        support: Support::below(-off),
    });
    Ok(LocalCohomologyProfile {
        ring_dim: d,
        per_degree,
    })
}

/// `S(shift)` with its local cohomology.
pub fn poly_module(spec: &WeightedRingSpec, shift: i64, window: &Window) -> Result<ModuleCohomology> {
    let profile = local_cohomology_poly(spec, shift, window)?;
    let series = twist(
        &ring_series(spec, &window.translated(&DegreeVector::scalar(shift)))?,
        &DegreeVector::scalar(shift),
    );
    Ok(ModuleCohomology {
        series,
        support: Support::above(-shift),
        profile,
    })
}

fn product_term(
    a: &HilbertSeries,
    sa: Support,
    za: bool,
    b: &HilbertSeries,
    sb: Support,
    zb: bool,
) -> Result<CohomologyTerm> {
    let support = sa.meet(sb);
    if za || zb || support == Support::Zero {
        let w = a.window().intersect(b.window())?;
        return Ok(CohomologyTerm::zero(&w));
    }
    let series = hadamard(a, b)?;
    let vanishing = if series.is_zero() {
        Vanishing::ZeroOnWindow
    } else {
        Vanishing::NonZero
    };
    Ok(CohomologyTerm {
        series,
        support,
        vanishing,
    })
}

fn sum_terms(window: &Window, terms: Vec<CohomologyTerm>) -> Result<CohomologyTerm> {
    let mut acc = CohomologyTerm::zero(window);
    for t in terms {
        if t.vanishing == Vanishing::Certified {
            continue;
        }
        acc.series = acc.series.plus(&t.series)?;
        acc.support = acc.support.join(t.support);
        acc.vanishing = Vanishing::ZeroOnWindow;
    }
    if acc.vanishing != Vanishing::Certified && !acc.series.is_zero() {
        acc.vanishing = Vanishing::NonZero;
    }
    Ok(acc)
}

/// Local cohomology of `M # N` over the Segre product, assuming `H^0(M) = H^1(M) = 0`:
/// `H^p = H^p(M)#N + M#H^p(N) + sum_{i=1..p} H^i(M)#H^{p+1-i}(N)`.
pub fn gw_segre_cohomology(m: &ModuleCohomology, n: &ModuleCohomology) -> Result<LocalCohomologyProfile> {
    for p in 0..2.min(m.profile.per_degree.len()) {
        if m.profile.per_degree[p].vanishing == Vanishing::NonZero {
            return Err(HilbertError::Hypothesis(p));
        }
    }
    let dm = m.profile.ring_dim;
    let dn = n.profile.ring_dim;
    if dm < 2 {
        return Err(HilbertError::TooSmall(dm));
    }
    let dim = dm + dn - 1;
    let window = m.series.window().intersect(n.series.window())?;
    let hm = |p: usize| &m.profile.per_degree[p];
    let hn = |p: usize| &n.profile.per_degree[p];
    let mut per_degree = Vec::with_capacity(dim + 1);
    for p in 0..=dim {
        let mut terms = Vec::new();
        if p <= dm {
            let h = hm(p);
            terms.push(product_term(
                &h.series,
                h.support,
                h.vanishing == Vanishing::Certified,
                &n.series,
                n.support,
                false,
            )?);
        }
        if p <= dn {
            let h = hn(p);
            terms.push(product_term(
                &m.series,
                m.support,
                false,
                &h.series,
                h.support,
                h.vanishing == Vanishing::Certified,
            )?);
        }
        for i in 1..=p {
            let j = p + 1 - i;
            if i > dm || j > dn {
                continue;
            }
            let (a, b) = (hm(i), hn(j));
            terms.push(product_term(
                &a.series,
                a.support,
                a.vanishing == Vanishing::Certified,
                &b.series,
                b.support,
                b.vanishing == Vanishing::Certified,
            )?);
        }
        per_degree.push(sum_terms(&window, terms)?);
    }
    Ok(LocalCohomologyProfile {
        ring_dim: dim,
        per_degree,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub shift: i64,
    pub cohen_macaulay: bool,
    pub depth: usize,
    /// Lowest degree and dimension of the first nonvanishing lower cohomology, if any.
    pub obstruction: Option<(usize, i64, i64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SegreReport {
    pub ring_a: String,
    pub ring_b: String,
    pub dim: usize,
    pub a_invariant: i64,
    pub a_inputs: (i64, i64),
    pub window: (i64, i64),
    pub ring_dims: Vec<i64>,
    pub canonical_dims: Vec<i64>,
    pub top_cohomology: Vec<(i64, i64)>,
    pub lower_cohomology_certified: bool,
    pub gorenstein: bool,
    pub gorenstein_shift: Option<i64>,
    pub shifts: Vec<ShiftReport>,
}

/// Dimension, a-invariant, canonical module and Gorenstein property of `A # B`,
/// plus CM/depth data for `A(i) # B` at each requested shift.
pub fn segre_report(
    a: &WeightedRingSpec,
    b: &WeightedRingSpec,
    shifts: &[i64],
    d: i64,
) -> Result<SegreReport> {
    let aa = -rank_one(a)?;
    let ab = -rank_one(b)?;
    for (spec, av) in [(a, aa), (b, ab)] {
        if av >= 0 {
            return Err(HilbertError::NonNegativeA {
                ring: spec.to_string(),
                a: av,
            });
        }
    }
    if a.dim() < 2 {
        return Err(HilbertError::TooSmall(a.dim()));
    }
    let w = Window::interval(-d, d);
    let ring = gw_segre_cohomology(&poly_module(a, 0, &w)?, &poly_module(b, 0, &w)?)?;
    let dim = ring.ring_dim;
    let a_inv = ring.a_invariant().ok_or(HilbertError::WindowTooSmall { lo: -d, hi: d })?;
    let top = &ring.per_degree[dim].series;
    if top.at(-d) != 0 && a_inv == -d {
        return Err(HilbertError::WindowTooSmall { lo: -d, hi: d });
    }

    let ha = ring_series(a, &w)?;
    let hb = ring_series(b, &w)?;
    let r = hadamard(&ha, &hb)?;
    let omega = hadamard(
        &twist(&ring_series(a, &Window::interval(-d + aa, d + aa))?, &DegreeVector::scalar(aa)),
        &twist(&ring_series(b, &Window::interval(-d + ab, d + ab))?, &DegreeVector::scalar(ab)),
    )?;
    // omega = R(s) on the window
    let shift = (-d..=d).find(|&s| {
        let mut overlap = false;
        for e in -d..=d {
            if (-d..=d).contains(&(e + s)) {
                if omega.at(e) != r.at(e + s) {
                    return false;
                }
                overlap |= omega.at(e) != 0;
            }
        }
        overlap
    });
    let by_series = shift.is_some();
    let by_criterion = aa == ab;
    if by_series != by_criterion {
        return Err(HilbertError::GorensteinMismatch {
            series: by_series,
            criterion: by_criterion,
        });
    }

    let mut reports = Vec::new();
    for &i in shifts {
        let prof = gw_segre_cohomology(&poly_module(a, i, &w)?, &poly_module(b, 0, &w)?)?;
        let depth = prof.depth();
        let obstruction = (depth < dim).then(|| {
            let s = &prof.per_degree[depth].series;
            let e = s.top_degree().unwrap_or(0);
            (depth, e, s.at(e))
        });
        reports.push(ShiftReport {
            shift: i,
            cohen_macaulay: prof.is_cm(),
            depth: depth.min(dim),
            obstruction,
        });
    }
    Ok(SegreReport {
        ring_a: a.to_string(),
        ring_b: b.to_string(),
        dim,
        a_invariant: a_inv,
        a_inputs: (aa, ab),
        window: (-d, d),
        ring_dims: r.range(0, d),
        canonical_dims: omega.range(0, d),
        top_cohomology: (-d..=d)
            .map(|e| (e, top.at(e)))
            .filter(|(_, v)| *v != 0)
            .collect(),
        lower_cohomology_certified: ring.per_degree[..dim]
            .iter()
            .all(|t| t.vanishing == Vanishing::Certified),
        gorenstein: by_series,
        gorenstein_shift: shift,
        shifts: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(names: &[&str]) -> WeightedRingSpec {
        WeightedRingSpec::standard(names).unwrap()
    }

    /// Expansion of `prod 1/(1 - t^w)` around infinity, times `(-1)^d`.
    fn top_cohomology_oracle(weights: &[i64], e: i64) -> i64 {
        // each factor expands to -sum_{k>=1} t^{-wk}
        let mut poly: std::collections::BTreeMap<i64, i64> = [(0, 1)].into_iter().collect();
        for &w in weights {
            let mut next = std::collections::BTreeMap::new();
            for (&deg, &c) in &poly {
                let mut k = 1;
                while deg - w * k >= e - 1 {
                    *next.entry(deg - w * k).or_insert(0) -= c;
                    k += 1;
                }
            }
            poly = next;
        }
        let sign = if weights.len().is_multiple_of(2) { 1 } else { -1 };
        sign * poly.get(&e).copied().unwrap_or(0)
    }

    #[test]
    fn local_duality_matches_expansion_at_infinity() {
        let w = Window::interval(-10, 3);
        for weights in [vec![1, 1], vec![1, 2], vec![1, 1, 1], vec![2, 3]] {
            let names: Vec<String> = (0..weights.len()).map(|i| format!("z{i}")).collect();
            let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let spec = WeightedRingSpec::weighted(&names, &weights).unwrap();
            let prof = local_cohomology_poly(&spec, 0, &w).unwrap();
            let top = &prof.per_degree[spec.dim()].series;
            for e in -10..=3 {
                assert_eq!(top.at(e), top_cohomology_oracle(&weights, e), "{weights:?} at {e}");
            }
        }
    }

    #[test]
    fn poly_cohomology_examples() {
        let w = Window::interval(-8, 8);
        let p = local_cohomology_poly(&std(&["x0", "x1"]), 0, &w).unwrap();
        assert_eq!(p.a_invariant(), Some(-2));
        assert_eq!(p.per_degree[2].series.at(-2), 1);
        assert_eq!(p.per_degree[2].series.at(-3), 2);
        assert!(p.per_degree[0].is_zero() && p.per_degree[1].is_zero());
        let uv = WeightedRingSpec::weighted(&["u", "v"], &[1, 2]).unwrap();
        assert_eq!(local_cohomology_poly(&uv, 0, &w).unwrap().a_invariant(), Some(-3));
        let p = local_cohomology_poly(&std(&["x"]), 0, &w).unwrap();
        assert!((-8..=-1).all(|e| p.per_degree[1].series.at(e) == 1));
        assert!((0..=8).all(|e| p.per_degree[1].series.at(e) == 0));
    }

    #[test]
    fn gw_for_two_by_three() {
        let w = Window::interval(-8, 8);
        let a = std(&["x0", "x1"]);
        let b = std(&["y0", "y1", "y2"]);
        let r = gw_segre_cohomology(&poly_module(&a, 0, &w).unwrap(), &poly_module(&b, 0, &w).unwrap())
            .unwrap();
        assert_eq!(r.ring_dim, 4);
        for p in 0..4 {
            assert_eq!(r.per_degree[p].vanishing, Vanishing::Certified);
        }
        let top = &r.per_degree[4].series;
        assert_eq!(top.top_degree(), Some(-3));
        assert_eq!((top.at(-3), top.at(-4), top.at(-5)), (2, 9, 24));
        // (j-1) * C(j-1, 2) at degree -j
        for j in 3..=8i64 {
            assert_eq!(top.at(-j), (j - 1) * (j - 1) * (j - 2) / 2);
        }

        let m3 = gw_segre_cohomology(&poly_module(&a, 3, &w).unwrap(), &poly_module(&b, 0, &w).unwrap())
            .unwrap();
        assert!(!m3.is_cm());
        assert_eq!(m3.depth(), 3);
        assert_eq!(m3.per_degree[3].series.at(-3), 1);
        for i in -1..=2 {
            let m = gw_segre_cohomology(&poly_module(&a, i, &w).unwrap(), &poly_module(&b, 0, &w).unwrap())
                .unwrap();
            assert!(m.is_cm(), "shift {i}");
        }
    }

    #[test]
    fn gw_rejects_low_depth_first_factor() {
        let w = Window::interval(-6, 6);
        let k = std(&["x"]);
        let r = gw_segre_cohomology(&poly_module(&k, 0, &w).unwrap(), &poly_module(&k, 0, &w).unwrap());
        assert_eq!(r.unwrap_err(), HilbertError::Hypothesis(1));
    }

    #[test]
    fn segre_reports() {
        let xyz = std(&["x", "y", "z"]);
        let uv = WeightedRingSpec::weighted(&["u", "v"], &[1, 2]).unwrap();
        let r = segre_report(&xyz, &uv, &[0], 8).unwrap();
        assert!(r.gorenstein);
        assert_eq!((r.a_invariant, r.dim), (-3, 4));
        let r = segre_report(&xyz, &xyz, &[0], 8).unwrap();
        assert!(r.gorenstein);
        assert_eq!((r.a_invariant, r.dim), (-3, 5));
        let r = segre_report(&std(&["x0", "x1"]), &std(&["y0", "y1", "y2"]), &[-1, 0, 1, 2, 3], 8).unwrap();
        assert!(!r.gorenstein);
        assert_eq!((r.a_invariant, r.dim), (-3, 4));
        assert_eq!(&r.canonical_dims[3..5], &[2, 9]);
        assert_eq!(&r.ring_dims[..3], &[1, 6, 18]);
        let cm: Vec<bool> = r.shifts.iter().map(|s| s.cohen_macaulay).collect();
        assert_eq!(cm, vec![true, true, true, true, false]);
        assert_eq!(r.shifts[4].obstruction, Some((3, -3, 1)));
    }
}
