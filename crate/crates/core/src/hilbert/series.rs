use super::{DegreeVector, ExactForm, HilbertError, HilbertSeries, Result, WeightedRingSpec, Window};
use std::collections::BTreeMap;

/// Hilbert series of a weighted polynomial ring on `window`.
pub fn ring_series(spec: &WeightedRingSpec, window: &Window) -> Result<HilbertSeries> {
    if spec.rank() != window.rank() {
        return Err(HilbertError::RankMismatch {
            left: spec.rank(),
            right: window.rank(),
        });
    }
    let form = ExactForm {
        numerator: [(DegreeVector::zero(spec.rank()), 1)].into_iter().collect(),
        denominator: spec.variables().iter().map(|v| v.weight.clone()).collect(),
    };
    let coeffs = form.expand(window);
    Ok(HilbertSeries::from_counts(window.clone(), coeffs).with_form(form))
}

impl HilbertSeries {
    fn with_form(self, form: ExactForm) -> Self {
        HilbertSeries(self.0.with_exact_form(form))
    }
}

/// Coefficientwise product on the common window.
pub fn hadamard(a: &HilbertSeries, b: &HilbertSeries) -> Result<HilbertSeries> {
    if a.rank() != b.rank() {
        return Err(HilbertError::RankMismatch {
            left: a.rank(),
            right: b.rank(),
        });
    }
    let w = a.window().intersect(b.window())?;
    let mut c = BTreeMap::new();
    for (d, x) in a.nonzero() {
        if w.contains(d) {
            let y = b.coeff(d);
            if y != 0 {
                c.insert(d.clone(), x * y);
            }
        }
    }
    Ok(HilbertSeries::from_counts(w, c))
}

/// `M(s)`: the coefficient at `d` becomes the old coefficient at `d + s`.
pub fn twist(a: &HilbertSeries, s: &DegreeVector) -> HilbertSeries {
    let w = a.window().translated(&s.neg());
    let c = a.nonzero().iter().map(|(d, v)| (d.sub(s), *v)).collect();
    let mut out = HilbertSeries::from_counts(w, c);
    if let Some(f) = a.exact_form() {
        let form = ExactForm {
            numerator: f.numerator.iter().map(|(d, v)| (d.sub(s), *v)).collect(),
            denominator: f.denominator.clone(),
        };
        out = out.with_form(form);
    }
    out
}

/// `D M`: reflect degrees.
pub fn graded_dual(a: &HilbertSeries) -> HilbertSeries {
    let w = a.window().negated();
    let c = a.nonzero().iter().map(|(d, v)| (d.neg(), *v)).collect();
    HilbertSeries::from_counts(w, c)
}

fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let (a, b) = (m[rank][col], m[r][col]);
                for c in 0..ncols {
                    m[r][c] = a * m[r][c] - b * m[rank][c];
                }
                let g = m[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Restriction to `shift + L` for the lattice `L` spanned by `gens`, in lattice coordinates.
pub fn veronese(a: &HilbertSeries, gens: &[DegreeVector], shift: &DegreeVector) -> Result<HilbertSeries> {
    let r = a.rank();
    for g in gens.iter().chain(std::iter::once(shift)) {
        if g.rank() != r {
            return Err(HilbertError::RankMismatch {
                left: r,
                right: g.rank(),
            });
        }
    }
    let k = gens.len();
    let rows: Vec<Vec<i64>> = gens.iter().map(|g| g.entries().to_vec()).collect();
    if k == 0 || integer_rank(&rows) < k {
        return Err(HilbertError::DependentLattice);
    }
    let image = |c: &DegreeVector| -> DegreeVector {
        let mut p = shift.clone();
        for (ci, g) in c.entries().iter().zip(gens) {
            p = p.add(&g.scale(*ci));
        }
        p
    };
    // Lattice coordinates are bounded by the window extent times a Cramer factor.
    let span = a
        .window()
        .lo()
        .iter()
        .chain(a.window().hi())
        .chain(shift.entries())
        .map(|x| x.abs())
        .max()
        .unwrap_or(0)
        * 2
        + 1;
    let gmax = gens
        .iter()
        .flat_map(|g| g.entries())
        .map(|x| x.abs())
        .max()
        .unwrap_or(1)
        .max(1);
    let fact: i64 = (1..=k as i64).product();
    let bound = span * fact * gmax.pow(k as u32 - 1);
    let search = Window::cube(k, -bound, bound);
    let inside: Vec<DegreeVector> = search
        .points()
        .into_iter()
        .filter(|c| a.window().contains(&image(c)))
        .collect();
    if inside.is_empty() {
        return Err(HilbertError::DisjointWindows);
    }
    let mut lo = inside[0].entries().to_vec();
    let mut hi = lo.clone();
    for c in &inside {
        for j in 0..k {
            lo[j] = lo[j].min(c.entries()[j]);
            hi[j] = hi[j].max(c.entries()[j]);
        }
    }
    let w = Window::new(lo, hi)?;
    let pts = w.points();
    if pts.len() != inside.len() {
        return Err(HilbertError::NonBoxRestriction);
    }
    let c = pts
        .into_iter()
        .map(|c| {
            let v = a.coeff(&image(&c));
            (c, v)
        })
        .collect();
    Ok(HilbertSeries::from_counts(w, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str], w: &[i64]) -> WeightedRingSpec {
        WeightedRingSpec::weighted(names, w).unwrap()
    }

    // Independent count: enumerate exponent vectors directly.
    fn count_monomials(weights: &[i64], d: i64) -> i64 {
        fn go(w: &[i64], d: i64) -> i64 {
            match w.split_first() {
                None => (d == 0) as i64,
                Some((&a, rest)) => (0..=d.max(-1) / a).map(|e| go(rest, d - a * e)).sum(),
            }
        }
        if d < 0 {
            0
        } else {
            go(weights, d)
        }
    }

    #[test]
    fn ring_series_examples() {
        let s = ring_series(&ring(&["x0", "x1"], &[1, 1]), &Window::interval(0, 4)).unwrap();
        assert_eq!(s.range(0, 4), vec![1, 2, 3, 4, 5]);
        let s = ring_series(&ring(&["u", "v"], &[1, 2]), &Window::interval(0, 5)).unwrap();
        assert_eq!(s.range(0, 5), vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(s.exact_form().unwrap().to_string(), "1/((1-t)(1-t^2))");
        let s = ring_series(&ring(&["y0", "y1", "y2"], &[1, 1, 1]), &Window::interval(-3, 3)).unwrap();
        assert_eq!(s.at(3), 10);
        assert_eq!(s.at(-2), 0);
        assert!(s.exact_form_consistent());
    }

    #[test]
    fn ring_series_matches_enumeration() {
        for w in [vec![1, 1], vec![1, 2], vec![2, 3, 5], vec![1, 1, 1, 1]] {
            let names: Vec<String> = (0..w.len()).map(|i| format!("z{i}")).collect();
            let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let s = ring_series(&ring(&names, &w), &Window::interval(-2, 12)).unwrap();
            for d in -2..=12 {
                assert_eq!(s.at(d), count_monomials(&w, d), "weights {w:?} degree {d}");
            }
        }
    }

    #[test]
    fn hadamard_examples() {
        let a = ring_series(&ring(&["x0", "x1"], &[1, 1]), &Window::interval(0, 3)).unwrap();
        let b = ring_series(&ring(&["y0", "y1", "y2"], &[1, 1, 1]), &Window::interval(0, 3)).unwrap();
        assert_eq!(hadamard(&a, &b).unwrap().range(0, 3), vec![1, 6, 18, 40]);
        let z = HilbertSeries::zero(Window::interval(0, 3));
        assert!(hadamard(&a, &z).unwrap().is_zero());
        // supports (-inf,-3] and [0,inf) never meet
        let neg = graded_dual(&twist(&a, &DegreeVector::scalar(-3)));
        let wide = ring_series(&ring(&["x0", "x1"], &[1, 1]), &Window::interval(-8, 8)).unwrap();
        assert!(neg.top_degree().unwrap() <= -3);
        assert!(hadamard(&neg, &wide).unwrap().is_zero());
        let bi = ring_series(
            &WeightedRingSpec::new(
                vec![super::super::Variable {
                    name: "x".into(),
                    weight: DegreeVector::new(vec![1, 0]).unwrap(),
                }],
                Default::default(),
            )
            .unwrap(),
            &Window::cube(2, 0, 1),
        )
        .unwrap();
        assert!(matches!(hadamard(&a, &bi), Err(HilbertError::RankMismatch { .. })));
    }

    #[test]
    fn veronese_examples() {
        let s = ring_series(&ring(&["x", "y", "z", "w"], &[1, 1, 1, 1]), &Window::interval(0, 4)).unwrap();
        let v = veronese(&s, &[DegreeVector::scalar(2)], &DegreeVector::scalar(0)).unwrap();
        assert_eq!(v.range(0, 2), vec![1, 10, 35]);

        let bi = |names: &[&str], slot: usize| -> Vec<super::super::Variable> {
            names
                .iter()
                .map(|n| {
                    let mut e = vec![0, 0];
                    e[slot] = 1;
                    super::super::Variable {
                        name: n.to_string(),
                        weight: DegreeVector::new(e).unwrap(),
                    }
                })
                .collect()
        };
        let mut vars = bi(&["x", "y"], 0);
        vars.extend(bi(&["u", "v"], 1));
        let spec = WeightedRingSpec::new(vars, Default::default()).unwrap();
        let s = ring_series(&spec, &Window::cube(2, 0, 6)).unwrap();
        let diag = DegreeVector::new(vec![1, 1]).unwrap();
        let m1 = veronese(&s, std::slice::from_ref(&diag), &DegreeVector::new(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(m1.range(0, 2), vec![2, 6, 12]);

        let kx = WeightedRingSpec::new(bi(&["x"], 0), Default::default()).unwrap();
        let s = ring_series(&kx, &Window::cube(2, 0, 6)).unwrap();
        let off = veronese(&s, std::slice::from_ref(&diag), &DegreeVector::new(vec![0, 1]).unwrap()).unwrap();
        assert!(off.is_zero());

        let dep = veronese(&s, &[diag.clone(), diag.scale(2)], &DegreeVector::zero(2));
        assert_eq!(dep, Err(HilbertError::DependentLattice));
    }

    #[test]
    fn dual_and_twist() {
        let s = ring_series(&ring(&["x", "y"], &[1, 1]), &Window::interval(-5, 5)).unwrap();
        assert_eq!(graded_dual(&s).at(-2), 3);
        assert_eq!(graded_dual(&graded_dual(&s)), HilbertSeries::from_counts(s.window().clone(), s.nonzero().clone()));
        let y = ring_series(&ring(&["y0", "y1", "y2"], &[1, 1, 1]), &Window::interval(-8, 8)).unwrap();
        let top = twist(&graded_dual(&y), &DegreeVector::scalar(3));
        assert_eq!(top.at(-4), 3);
        assert_eq!(top.at(-3), 1);
        assert_eq!(top.at(-2), 0);
        let t = twist(&s, &DegreeVector::scalar(2));
        assert_eq!(t.at(-2), 1);
        assert_eq!(t.at(0), 3);
        assert!(t.exact_form_consistent());
    }
}
