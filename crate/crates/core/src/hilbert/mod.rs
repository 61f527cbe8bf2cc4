//! Degree lattices, windowed Hilbert series and local cohomology of Segre products.
//!
//! Series are stored as exact integer tables on a finite box of degrees. An
//! optional rational form `numerator / prod(1 - t^w)` can ride along, but only
//! the table is ever trusted.

mod cohomology;
mod series;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub use cohomology::{
    gw_segre_cohomology, local_cohomology_poly, poly_module, segre_report, CohomologyTerm,
    LocalCohomologyProfile, ModuleCohomology, SegreReport, ShiftReport, Support, Vanishing,
};
pub use series::{graded_dual, hadamard, ring_series, twist, veronese};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("degree vectors must have rank at least 1")]
    ZeroRank,
    #[error("window bounds have different lengths")]
    BadWindow,
    #[error("windows do not intersect")]
    DisjointWindows,
    #[error("variable {0} has a negative or zero weight")]
    BadWeight(String),
    #[error("variable name {0} used twice")]
    DuplicateVariable(String),
    #[error("lattice generators are linearly dependent")]
    DependentLattice,
    #[error("the restricted window is not a box in lattice coordinates")]
    NonBoxRestriction,
    #[error("negative coefficient {value} at degree {degree}")]
    NegativeCoefficient { degree: DegreeVector, value: i64 },
    #[error("H^{0} of the first factor does not vanish")]
    Hypothesis(usize),
    #[error("ring {ring} has a-invariant {a}, expected a negative value")]
    NonNegativeA { ring: String, a: i64 },
    #[error("operation needs singly graded input")]
    NeedsRankOne,
    #[error("ring of Krull dimension {0} is too small for this operation")]
    TooSmall(usize),
    #[error("Gorenstein tests disagree: series says {series}, criterion says {criterion}")]
    GorensteinMismatch { series: bool, criterion: bool },
    #[error("window [{lo}, {hi}] is too small to see the top degree of local cohomology")]
    WindowTooSmall { lo: i64, hi: i64 },
}

pub type Result<T> = std::result::Result<T, HilbertError>;

/// An element of `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeVector(Vec<i64>);

impl DegreeVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(HilbertError::ZeroRank);
        }
        Ok(Self(entries))
    }

    pub fn scalar(d: i64) -> Self {
        Self(vec![d])
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank.max(1)])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn delta(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
pub enum FieldSpec {
    #[default]
    Rational,
    Prime(u32),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub weight: DegreeVector,
}

/// A polynomial ring over a field with a positive grading by `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedRingSpec {
    variables: Vec<Variable>,
    field: FieldSpec,
    rank: usize,
}

impl WeightedRingSpec {
    pub fn new(variables: Vec<Variable>, field: FieldSpec) -> Result<Self> {
        let rank = variables.first().map(|v| v.weight.rank()).unwrap_or(1);
        for (k, v) in variables.iter().enumerate() {
            if v.weight.rank() != rank {
                return Err(HilbertError::RankMismatch {
                    left: rank,
                    right: v.weight.rank(),
                });
            }
            if !v.weight.is_nonneg() || v.weight.is_zero() {
                return Err(HilbertError::BadWeight(v.name.clone()));
            }
            if variables[..k].iter().any(|u| u.name == v.name) {
                return Err(HilbertError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Self {
            variables,
            field,
            rank,
        })
    }

    /// Singly graded ring with the given names and positive weights.
    pub fn weighted(names: &[&str], weights: &[i64]) -> Result<Self> {
        let vars = names
            .iter()
            .zip(weights)
            .map(|(n, &w)| Variable {
                name: n.to_string(),
                weight: DegreeVector::scalar(w),
            })
            .collect();
        Self::new(vars, FieldSpec::Rational)
    }

    pub fn standard(names: &[&str]) -> Result<Self> {
        Self::weighted(names, &vec![1; names.len()])
    }

    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Krull dimension.
    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn weight_sum(&self) -> DegreeVector {
        self.variables
            .iter()
            .fold(DegreeVector::zero(self.rank), |acc, v| acc.add(&v.weight))
    }

    /// Scalar weights of a singly graded ring.
    pub fn scalar_weights(&self) -> Result<Vec<i64>> {
        if self.rank != 1 {
            return Err(HilbertError::NeedsRankOne);
        }
        Ok(self.variables.iter().map(|v| v.weight.0[0]).collect())
    }

    pub fn is_standard(&self) -> bool {
        self.rank == 1 && self.variables.iter().all(|v| v.weight.0[0] == 1)
    }

    pub fn names(&self) -> Vec<&str> {
        self.variables.iter().map(|v| v.name.as_str()).collect()
    }
}

impl fmt::Display for WeightedRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k[")?;
        for (k, v) in self.variables.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v.name)?;
        }
        write!(f, "]")?;
        if !self.is_standard() {
            let w: Vec<String> = self.variables.iter().map(|v| v.weight.to_string()).collect();
            write!(f, " wts {}", w.join(","))?;
        }
        Ok(())
    }
}

/// A box `lo <= d <= hi` in `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(HilbertError::BadWindow);
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(rank: usize, lo: i64, hi: i64) -> Self {
        Self {
            lo: vec![lo; rank.max(1)],
            hi: vec![hi; rank.max(1)],
        }
    }

    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::cube(1, lo, hi)
    }

    pub fn symmetric(rank: usize, d: i64) -> Self {
        Self::cube(rank, -d, d)
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a > b)
    }

    pub fn contains(&self, d: &DegreeVector) -> bool {
        d.rank() == self.rank()
            && d.0
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn intersect(&self, o: &Window) -> Result<Window> {
        if self.rank() != o.rank() {
            return Err(HilbertError::RankMismatch {
                left: self.rank(),
                right: o.rank(),
            });
        }
        let w = Window {
            lo: self.lo.iter().zip(&o.lo).map(|(a, b)| *a.max(b)).collect(),
            hi: self.hi.iter().zip(&o.hi).map(|(a, b)| *a.min(b)).collect(),
        };
        if w.is_empty() {
            return Err(HilbertError::DisjointWindows);
        }
        Ok(w)
    }

    pub fn negated(&self) -> Window {
        Window {
            lo: self.hi.iter().map(|x| -x).collect(),
            hi: self.lo.iter().map(|x| -x).collect(),
        }
    }

    pub fn translated(&self, by: &DegreeVector) -> Window {
        Window {
            lo: self.lo.iter().zip(&by.0).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(&by.0).map(|(a, b)| a + b).collect(),
        }
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> Vec<DegreeVector> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = self.lo.clone();
        loop {
            out.push(DegreeVector(cur.clone()));
            let mut k = cur.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < self.hi[k] {
                    cur[k] += 1;
                    for j in k + 1..cur.len() {
                        cur[j] = self.lo[j];
                    }
                    break;
                }
            }
        }
    }
}

/// `numerator / prod_w (1 - t^w)` as a formal annotation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactForm {
    pub numerator: BTreeMap<DegreeVector, i64>,
    pub denominator: Vec<DegreeVector>,
}

impl ExactForm {
    /// Power-series expansion on `window`; denominators must have non-negative weights.
    pub fn expand(&self, window: &Window) -> BTreeMap<DegreeVector, i64> {
        let r = window.rank();
        let mut lo = window.lo.clone();
        for d in self.numerator.keys() {
            for k in 0..r {
                lo[k] = lo[k].min(d.0[k]);
            }
        }
        let big = Window {
            lo,
            hi: window.hi.clone(),
        };
        let pts = big.points();
        let mut c: BTreeMap<DegreeVector, i64> = BTreeMap::new();
        for (d, v) in &self.numerator {
            if big.contains(d) {
                *c.entry(d.clone()).or_insert(0) += v;
            }
        }
        for w in &self.denominator {
            // lexicographic order visits d - w before d
            for p in &pts {
                let q = p.sub(w);
                if let Some(&v) = c.get(&q) {
                    if v != 0 {
                        *c.entry(p.clone()).or_insert(0) += v;
                    }
                }
            }
        }
        c.into_iter()
            .filter(|(d, v)| *v != 0 && window.contains(d))
            .collect()
    }
}

fn monomial_string(d: &DegreeVector) -> String {
    if d.rank() == 1 {
        return match d.0[0] {
            0 => "1".to_string(),
            1 => "t".to_string(),
            e => format!("t^{e}"),
        };
    }
    let parts: Vec<String> = d
        .0
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(k, e)| {
            if *e == 1 {
                format!("t{}", k + 1)
            } else {
                format!("t{}^{}", k + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for ExactForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = String::new();
        for (k, (d, c)) in self.numerator.iter().enumerate() {
            let m = monomial_string(d);
            let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let a = c.abs();
            num.push_str(sign);
            if a != 1 && m != "1" {
                num.push_str(&format!("{a}*{m}"));
            } else if a != 1 {
                num.push_str(&a.to_string());
            } else {
                num.push_str(&m);
            }
        }
        if num.is_empty() {
            num.push('0');
        }
        if self.numerator.len() > 1 {
            num = format!("({num})");
        }
        if self.denominator.is_empty() {
            return write!(f, "{num}");
        }
        let den: String = self
            .denominator
            .iter()
            .map(|w| format!("(1-{})", monomial_string(w)))
            .collect();
        write!(f, "{num}/({den})")
    }
}

/// Integer coefficient table on a window, possibly with negative entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSeries {
    window: Window,
    coeffs: BTreeMap<DegreeVector, i64>,
    exact_form: Option<ExactForm>,
}

impl SignedSeries {
    /// Entries outside the window are dropped; zeros are not stored.
    pub fn new(window: Window, coeffs: BTreeMap<DegreeVector, i64>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(d, v)| *v != 0 && window.contains(d))
            .collect();
        Self {
            window,
            coeffs,
            exact_form: None,
        }
    }

    pub fn zero(window: Window) -> Self {
        Self::new(window, BTreeMap::new())
    }

    pub fn with_exact_form(mut self, form: ExactForm) -> Self {
        self.exact_form = Some(form);
        self
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn rank(&self) -> usize {
        self.window.rank()
    }

    pub fn exact_form(&self) -> Option<&ExactForm> {
        self.exact_form.as_ref()
    }

    pub fn coeff(&self, d: &DegreeVector) -> i64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    /// Coefficient of a singly graded series.
    pub fn at(&self, d: i64) -> i64 {
        self.coeff(&DegreeVector::scalar(d))
    }

    pub fn nonzero(&self) -> &BTreeMap<DegreeVector, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest degree with a nonzero coefficient (singly graded).
    pub fn top_degree(&self) -> Option<i64> {
        self.coeffs.keys().map(|d| d.0[0]).max()
    }

    pub fn bottom_degree(&self) -> Option<i64> {
        self.coeffs.keys().map(|d| d.0[0]).min()
    }

    pub fn plus(&self, o: &SignedSeries) -> Result<SignedSeries> {
        let w = self.window.intersect(&o.window)?;
        let mut c = BTreeMap::new();
        for p in w.points() {
            c.insert(p.clone(), self.coeff(&p) + o.coeff(&p));
        }
        Ok(SignedSeries::new(w, c))
    }

    /// Coefficients of a singly graded series between `lo` and `hi`.
    pub fn range(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).map(|d| self.at(d)).collect()
    }

    /// Checks the exact form, if any, against the table.
    pub fn exact_form_consistent(&self) -> bool {
        match &self.exact_form {
            None => true,
            Some(f) => f.expand(&self.window) == self.coeffs,
        }
    }
}

/// A signed series whose coefficients are all non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries(SignedSeries);

impl HilbertSeries {
    pub fn new(s: SignedSeries) -> Result<Self> {
        if let Some((d, v)) = s.coeffs.iter().find(|(_, v)| **v < 0) {
            return Err(HilbertError::NegativeCoefficient {
                degree: d.clone(),
                value: *v,
            });
        }
        Ok(Self(s))
    }

    pub fn zero(window: Window) -> Self {
        Self(SignedSeries::zero(window))
    }

    pub fn signed(&self) -> &SignedSeries {
        &self.0
    }

    pub fn into_signed(self) -> SignedSeries {
        self.0
    }

    pub(crate) fn from_counts(window: Window, coeffs: BTreeMap<DegreeVector, i64>) -> Self {
        Self(SignedSeries::new(window, coeffs))
    }

    pub fn plus(&self, o: &HilbertSeries) -> Result<HilbertSeries> {
        Ok(HilbertSeries(self.0.plus(&o.0)?))
    }

    /// Degree/coefficient table, one line per window point.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for p in self.window().points() {
            out.push_str(&format!("{:>10}  {}\n", p.to_string(), self.coeff(&p)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .window()
            .points()
            .into_iter()
            .map(|p| serde_json::json!([p.entries(), self.coeff(&p)]))
            .collect();
        serde_json::json!({
            "window": {"lo": self.window().lo(), "hi": self.window().hi()},
            "coeffs": coeffs,
            "exact_form": self.exact_form().map(|f| f.to_string()),
        })
    }
}

impl std::ops::Deref for HilbertSeries {
    type Target = SignedSeries;
    fn deref(&self) -> &SignedSeries {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_spec_validation() {
        assert!(WeightedRingSpec::weighted(&["x", "x"], &[1, 1]).is_err());
        assert!(WeightedRingSpec::weighted(&["x", "y"], &[1, 0]).is_err());
        assert!(WeightedRingSpec::weighted(&["x", "y"], &[1, -2]).is_err());
        let r = WeightedRingSpec::weighted(&["u", "v"], &[1, 2]).unwrap();
        assert_eq!(r.weight_sum(), DegreeVector::scalar(3));
        assert_eq!(r.to_string(), "k[u,v] wts 1,2");
    }

    #[test]
    fn window_points_are_lexicographic() {
        let w = Window::new(vec![0, -1], vec![1, 0]).unwrap();
        let pts: Vec<Vec<i64>> = w.points().iter().map(|p| p.entries().to_vec()).collect();
        assert_eq!(pts, vec![vec![0, -1], vec![0, 0], vec![1, -1], vec![1, 0]]);
        assert!(Window::interval(3, 2).points().is_empty());
    }

    #[test]
    fn exact_form_rendering() {
        let f = ExactForm {
            numerator: [(DegreeVector::scalar(0), 1)].into_iter().collect(),
            denominator: vec![DegreeVector::scalar(1), DegreeVector::scalar(2)],
        };
        assert_eq!(f.to_string(), "1/((1-t)(1-t^2))");
        let g = ExactForm {
            numerator: [(DegreeVector::new(vec![1, 0]).unwrap(), 1)]
                .into_iter()
                .collect(),
            denominator: vec![DegreeVector::new(vec![1, 0]).unwrap()],
        };
        assert_eq!(g.to_string(), "t1/((1-t1))");
    }

    #[test]
    fn hilbert_series_rejects_negative() {
        let w = Window::interval(0, 2);
        let s = SignedSeries::new(w, [(DegreeVector::scalar(1), -1)].into_iter().collect());
        assert!(HilbertSeries::new(s).is_err());
    }
}
