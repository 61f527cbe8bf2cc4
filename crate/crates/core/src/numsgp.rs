//! Extended numerical semigroups: cofinite submonoids of `N x L` for a finite
//! abelian group `L`.
//!
//! A semigroup is stored by its conductor `c` and a membership table on
//! `[0, c) x L`; every `(n, l)` with `n >= c` is a member.

use crate::hilbert::{DegreeVector, HilbertSeries, SignedSeries, Window};
use crate::quivers::Quiver;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumSgpError {
    #[error("cyclic orders must be at least 1")]
    BadOrder,
    #[error("no generators given")]
    NoGenerators,
    #[error("element {0} is not in the group")]
    BadElement(String),
    #[error("complement is infinite: ({degree}, {element}) and its translates are never reached")]
    InfiniteComplement { degree: u32, element: String },
    #[error("(0, identity) cannot be a gap")]
    IdentityGap,
    #[error("not closed: ({}, {}) + ({}, {}) lands on the gap ({}, {})", .a.0, .a.1, .b.0, .b.1, .sum.0, .sum.1)]
    NotClosed {
        a: (u32, String),
        b: (u32, String),
        sum: (u32, String),
    },
    #[error("semigroup is not of the subspace-quiver form: {0}")]
    NotInFamily(String),
    #[error("characteristic {0} divides the group order")]
    CharacteristicDivides(u32),
    #[error("k[L] is not asserted to split")]
    NotSplit,
    #[error("cannot parse element {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, NumSgpError>;

/// `Z/o_1 x ... x Z/o_k`, elements indexed in mixed radix (first coordinate slowest).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u32>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(NumSgpError::BadOrder);
        }
        Ok(Self { orders })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn trivial() -> Self {
        Self { orders: vec![] }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&o| o as usize).product()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u32> {
        let mut c = vec![0; self.orders.len()];
        for k in (0..self.orders.len()).rev() {
            let o = self.orders[k] as usize;
            c[k] = (idx % o) as u32;
            idx /= o;
        }
        c
    }

    pub fn index(&self, coords: &[u32]) -> Result<usize> {
        if coords.len() != self.orders.len() {
            return Err(NumSgpError::BadElement(format!("{coords:?}")));
        }
        let mut idx = 0usize;
        for (c, &o) in coords.iter().zip(&self.orders) {
            if *c >= o {
                return Err(NumSgpError::BadElement(format!("{coords:?}")));
            }
            idx = idx * o as usize + *c as usize;
        }
        Ok(idx)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let mut idx = 0usize;
        for k in 0..self.orders.len() {
            let o = self.orders[k];
            idx = idx * o as usize + ((ca[k] + cb[k]) % o) as usize;
        }
        idx
    }

    pub fn neg(&self, a: usize) -> usize {
        let ca = self.coords(a);
        let mut idx = 0usize;
        for k in 0..self.orders.len() {
            let o = self.orders[k];
            idx = idx * o as usize + ((o - ca[k]) % o) as usize;
        }
        idx
    }

    /// Digits of the coordinates, `.`-separated when some order exceeds 10.
    pub fn label(&self, a: usize) -> String {
        let c = self.coords(a);
        if c.is_empty() {
            return "e".to_string();
        }
        if self.orders.iter().all(|&o| o <= 10) {
            c.iter().map(|d| d.to_string()).collect()
        } else {
            c.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
        }
    }

    /// Parses a coordinate string: one digit per factor, or `.`-separated numbers.
    pub fn parse(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        if self.orders.is_empty() {
            return match s {
                "" | "e" | "0" => Ok(0),
                _ => Err(NumSgpError::Parse(s.to_string())),
            };
        }
        let digits: Vec<u32> = if s.contains('.') {
            s.split('.')
                .map(|t| t.parse().map_err(|_| NumSgpError::Parse(s.to_string())))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|ch| ch.to_digit(10).ok_or_else(|| NumSgpError::Parse(s.to_string())))
                .collect::<Result<_>>()?
        };
        self.index(&digits)
    }

    /// Parses `degree:element`.
    pub fn parse_pair(&self, s: &str) -> Result<(u32, usize)> {
        let (n, e) = s
            .split_once(':')
            .ok_or_else(|| NumSgpError::Parse(s.to_string()))?;
        let n = n.trim().parse().map_err(|_| NumSgpError::Parse(s.to_string()))?;
        Ok((n, self.parse(e)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtNumSemigroup {
    group: FiniteAbelianGroup,
    conductor: u32,
    member: Vec<bool>,
    generators: Option<Vec<(u32, usize)>>,
}

fn full_row(row: &[bool]) -> bool {
    row.iter().all(|&b| b)
}

impl ExtNumSemigroup {
    /// Monoid closure of the generators.
    pub fn from_generators(group: FiniteAbelianGroup, gens: &[(u32, usize)]) -> Result<Self> {
        if gens.is_empty() {
            return Err(NumSgpError::NoGenerators);
        }
        let ord = group.order();
        if let Some(&(_, l)) = gens.iter().find(|&&(_, l)| l >= ord) {
            return Err(NumSgpError::BadElement(l.to_string()));
        }
        let zero_gens: Vec<usize> = gens.iter().filter(|g| g.0 == 0).map(|g| g.1).collect();
        let pos_gens: Vec<(u32, usize)> = gens.iter().filter(|g| g.0 > 0).copied().collect();
        let close_row = |row: &mut Vec<bool>| loop {
            let mut changed = false;
            for l in 0..ord {
                if row[l] {
                    for &z in &zero_gens {
                        let s = group.add(l, z);
                        if !row[s] {
                            row[s] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        };
        let mut rows: Vec<Vec<bool>> = Vec::new();
        let mut first = vec![false; ord];
        first[0] = true;
        close_row(&mut first);
        rows.push(first);
        let Some(maxdeg) = pos_gens.iter().map(|g| g.0 as usize).max() else {
            let l = rows[0].iter().position(|&b| !b).unwrap_or(0);
            return Err(NumSgpError::InfiniteComplement {
                degree: 1,
                element: group.label(l),
            });
        };
        // Each row depends only on the previous maxdeg rows, so a repeated state
        // that is not all full means the gaps recur forever.
        let mut seen: HashSet<Vec<Vec<bool>>> = HashSet::new();
        loop {
            let n = rows.len();
            if n >= maxdeg && rows[n - maxdeg..].iter().all(|r| full_row(r)) {
                break;
            }
            if n >= maxdeg {
                let state = rows[n - maxdeg..].to_vec();
                if !seen.insert(state) {
                    let (deg, row) = rows
                        .iter()
                        .enumerate()
                        .rev()
                        .find(|(_, r)| !full_row(r))
                        .expect("some row is not full");
                    let l = row.iter().position(|&b| !b).unwrap();
                    return Err(NumSgpError::InfiniteComplement {
                        degree: deg as u32,
                        element: group.label(l),
                    });
                }
            }
            let mut row = vec![false; ord];
            for &(d, g) in &pos_gens {
                let d = d as usize;
                if d <= n {
                    for l in 0..ord {
                        if rows[n - d][l] {
                            row[group.add(l, g)] = true;
                        }
                    }
                }
            }
            close_row(&mut row);
            rows.push(row);
        }
        let conductor = rows.iter().rposition(|r| !full_row(r)).map_or(0, |k| k + 1);
        let member = rows[..conductor].iter().flatten().copied().collect();
        Ok(Self {
            group,
            conductor: conductor as u32,
            member,
            generators: Some(gens.to_vec()),
        })
    }

    /// The semigroup with the given finite complement, after checking closure.
    pub fn from_complement(group: FiniteAbelianGroup, gaps: &[(u32, usize)]) -> Result<Self> {
        let ord = group.order();
        if gaps.iter().any(|&(n, l)| n == 0 && l == group.identity()) {
            return Err(NumSgpError::IdentityGap);
        }
        if let Some(&(_, l)) = gaps.iter().find(|&&(_, l)| l >= ord) {
            return Err(NumSgpError::BadElement(l.to_string()));
        }
        let conductor = gaps.iter().map(|g| g.0 + 1).max().unwrap_or(0);
        let mut member = vec![true; conductor as usize * ord];
        for &(n, l) in gaps {
            member[n as usize * ord + l] = false;
        }
        let s = Self {
            group,
            conductor,
            member,
            generators: None,
        };
        for (n1, l1) in s.elements_below(conductor) {
            for (n2, l2) in s.elements_below(conductor - n1) {
                let (n, l) = (n1 + n2, s.group.add(l1, l2));
                if !s.contains(n as i64, l) {
                    let g = &s.group;
                    return Err(NumSgpError::NotClosed {
                        a: (n1, g.label(l1)),
                        b: (n2, g.label(l2)),
                        sum: (n, g.label(l)),
                    });
                }
            }
        }
        Ok(s)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn generators(&self) -> Option<&[(u32, usize)]> {
        self.generators.as_deref()
    }

    pub fn contains(&self, n: i64, l: usize) -> bool {
        if n < 0 {
            return false;
        }
        if n >= self.conductor as i64 {
            return true;
        }
        self.member[n as usize * self.group.order() + l]
    }

    /// Members with degree below `bound`.
    pub fn elements_below(&self, bound: u32) -> Vec<(u32, usize)> {
        let ord = self.group.order();
        (0..bound)
            .flat_map(|n| (0..ord).map(move |l| (n, l)))
            .filter(|&(n, l)| self.contains(n as i64, l))
            .collect()
    }

    pub fn gaps(&self) -> Vec<(u32, usize)> {
        let ord = self.group.order();
        (0..self.conductor)
            .flat_map(|n| (0..ord).map(move |l| (n, l)))
            .filter(|&(n, l)| !self.contains(n as i64, l))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        (1..self.group.order()).all(|l| !self.contains(0, l))
    }

    /// Largest degree of a gap, `-1` when there is none.
    pub fn frobenius(&self) -> i64 {
        self.gaps().iter().map(|g| g.0 as i64).max().unwrap_or(-1)
    }

    /// Read off the numerator `(1 - t) HS(t)`: its top degree is one more than `a`.
    pub fn a_invariant(&self) -> i64 {
        let ord = self.group.order();
        let count = |n: i64| (0..ord).filter(|&l| self.contains(n, l)).count() as i64;
        let top = (0..=self.conductor as i64 + 1)
            .filter(|&n| count(n) - count(n - 1) != 0)
            .max()
            .unwrap_or(0);
        top - 1
    }

    /// Every `tau` with `(Z x L) \ S = (a, tau) - S`.
    pub fn twisted_symmetric(&self) -> Vec<usize> {
        let a = self.a_invariant();
        let c = self.conductor as i64;
        let g = &self.group;
        (0..g.order())
            .filter(|&tau| {
                (-c - 1..=2 * c).all(|n| {
                    (0..g.order()).all(|l| {
                        let other = g.add(tau, g.neg(l));
                        self.contains(n, l) != self.contains(a - n, other)
                    })
                })
            })
            .collect()
    }

    pub fn gorenstein(&self) -> bool {
        !self.twisted_symmetric().is_empty()
    }

    /// Degrees of the canonical module, `-((Z x L) \ S)`, with `n` in `[lo, hi]`.
    pub fn canonical_degrees(&self, lo: i64, hi: i64) -> BTreeSet<(i64, usize)> {
        let g = &self.group;
        (lo..=hi)
            .flat_map(|n| (0..g.order()).map(move |l| (n, l)))
            .filter(|&(n, l)| !self.contains(-n, g.neg(l)))
            .collect()
    }

    pub fn reduced(&self, characteristic: u32) -> bool {
        characteristic == 0 || !self.group.order().is_multiple_of(characteristic as usize)
    }

    /// `coeffs[n] = #{l : (n, l) in S}`.
    pub fn semigroup_series(&self, lo: i64, hi: i64) -> HilbertSeries {
        let ord = self.group.order();
        let c = (lo..=hi)
            .map(|n| {
                let v = (0..ord).filter(|&l| self.contains(n, l)).count() as i64;
                (DegreeVector::scalar(n), v)
            })
            .collect();
        HilbertSeries::new(SignedSeries::new(Window::interval(lo, hi), c)).expect("counts are non-negative")
    }

    /// Star quiver with one source and `|L|` sinks, for the conductor-two family
    /// whose only positive-degree gap is a single `(1, l)`.
    pub fn subspace_quiver_data(&self, characteristic: u32, splitting: bool) -> Result<Quiver> {
        let ord = self.group.order();
        if !self.is_connected() {
            return Err(NumSgpError::NotInFamily("not connected".into()));
        }
        if self.conductor != 2 {
            return Err(NumSgpError::NotInFamily(format!("conductor {}", self.conductor)));
        }
        let missing: Vec<usize> = (0..ord).filter(|&l| !self.contains(1, l)).collect();
        if missing.len() != 1 || missing[0] == self.group.identity() {
            return Err(NumSgpError::NotInFamily("degree-one row must miss one non-identity element".into()));
        }
        if !self.reduced(characteristic) {
            return Err(NumSgpError::CharacteristicDivides(characteristic));
        }
        if !splitting {
            return Err(NumSgpError::NotSplit);
        }
        let mut q = Quiver::new((0..=ord).map(|k| k.to_string()).collect()).expect("distinct labels");
        for k in 1..=ord {
            q.add_arrows(0, k, 1);
        }
        Ok(q)
    }

    /// Bullet table: one row per degree up to the conductor, one column per element.
    pub fn gap_table(&self) -> String {
        let g = &self.group;
        let ord = g.order();
        let labels: Vec<String> = (0..ord).map(|l| g.label(l)).collect();
        let w = labels.iter().map(|s| s.chars().count()).max().unwrap_or(1).max(1);
        let mut out = format!("{:>3} |", "n");
        for l in &labels {
            out.push_str(&format!(" {l:>w$}"));
        }
        out.push('\n');
        for n in 0..=self.conductor as i64 {
            out.push_str(&format!("{n:>3} |"));
            for l in 0..ord {
                let mark = if self.contains(n, l) { "•" } else { " " };
                out.push_str(&format!(" {mark:>w$}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn report(&self, characteristic: u32) -> NumSgpReport {
        let g = &self.group;
        NumSgpReport {
            orders: g.orders().to_vec(),
            conductor: self.conductor,
            gaps: self.gaps().iter().map(|&(n, l)| (n, g.label(l))).collect(),
            connected: self.is_connected(),
            frobenius: self.frobenius(),
            a_invariant: self.a_invariant(),
            twists: self.twisted_symmetric().iter().map(|&t| g.label(t)).collect(),
            gorenstein: self.gorenstein(),
            characteristic,
            reduced: self.reduced(characteristic),
            series: self.semigroup_series(0, self.conductor as i64 + 2).range(0, self.conductor as i64 + 2),
            table: self.gap_table(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumSgpReport {
    pub orders: Vec<u32>,
    pub conductor: u32,
    pub gaps: Vec<(u32, String)>,
    pub connected: bool,
    pub frobenius: i64,
    pub a_invariant: i64,
    pub twists: Vec<String>,
    pub gorenstein: bool,
    pub characteristic: u32,
    pub reduced: bool,
    pub series: Vec<i64>,
    pub table: String,
}

impl fmt::Display for NumSgpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group orders   {:?}", self.orders)?;
        write!(f, "{}", self.table)?;
        writeln!(f, "connected      {}", self.connected)?;
        writeln!(f, "frobenius      {}", self.frobenius)?;
        writeln!(f, "a-invariant    {}", self.a_invariant)?;
        writeln!(f, "twists         {:?}", self.twists)?;
        writeln!(f, "gorenstein     {}", self.gorenstein)?;
        writeln!(f, "reduced (p={}) {}", self.characteristic, self.reduced)
    }
}

/// `L = Z/n` with gaps `(0, l)` for `l != 0` and `(1, lambda)`.
pub fn subspace_family(n: u32, lambda: u32) -> Result<ExtNumSemigroup> {
    let g = FiniteAbelianGroup::cyclic(n)?;
    let mut gaps: Vec<(u32, usize)> = (1..n as usize).map(|l| (0, l)).collect();
    gaps.push((1, g.index(&[lambda])?));
    ExtNumSemigroup::from_complement(g, &gaps)
}

/// The Klein four-group semigroup generated by `(1,1)`, `(1,lambda)`, `(1,mu)`.
pub fn klein_example() -> ExtNumSemigroup {
    let g = FiniteAbelianGroup::new(vec![2, 2]).expect("valid orders");
    let gens = [(1, 0), (1, 2), (1, 1)];
    ExtNumSemigroup::from_generators(g, &gens).expect("finite complement")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn klein() -> (FiniteAbelianGroup, ExtNumSemigroup) {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let gens: Vec<(u32, usize)> = ["1:00", "1:10", "1:01"]
            .iter()
            .map(|s| g.parse_pair(s).unwrap())
            .collect();
        (g.clone(), ExtNumSemigroup::from_generators(g, &gens).unwrap())
    }

    #[test]
    fn klein_group_example() {
        let (g, s) = klein();
        let nu = g.parse("11").unwrap();
        let gaps: BTreeSet<(u32, usize)> = s.gaps().into_iter().collect();
        let want: BTreeSet<(u32, usize)> = [(0, 1), (0, 2), (0, 3), (1, nu)].into_iter().collect();
        assert_eq!(gaps, want);
        assert!(s.is_connected());
        assert_eq!(s.frobenius(), 1);
        assert_eq!(s.a_invariant(), 1);
        assert_eq!(s.twisted_symmetric(), vec![nu]);
        assert!(!s.reduced(2));
        assert!(s.reduced(3) && s.reduced(0));
        assert!(s.canonical_degrees(-2, 2).contains(&(-1, nu)));
        assert_eq!(s, klein_example());
    }

    #[test]
    fn classical_semigroups() {
        let t = FiniteAbelianGroup::trivial();
        let s = ExtNumSemigroup::from_generators(t.clone(), &[(2, 0), (3, 0)]).unwrap();
        assert_eq!(s.gaps(), vec![(1, 0)]);
        assert_eq!(s.frobenius(), 1);
        assert_eq!(s.twisted_symmetric(), vec![0]);
        let err = ExtNumSemigroup::from_generators(t.clone(), &[(2, 0)]).unwrap_err();
        assert!(matches!(err, NumSgpError::InfiniteComplement { .. }));
        let s = ExtNumSemigroup::from_generators(t, &[(3, 0), (5, 0)]).unwrap();
        assert_eq!(s.frobenius(), 7);
        assert!(s.gorenstein());
    }

    #[test]
    fn proper_subgroup_generators_fail() {
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        let err = ExtNumSemigroup::from_generators(g, &[(1, 2), (1, 0)]).unwrap_err();
        assert!(matches!(err, NumSgpError::InfiniteComplement { .. }));
    }

    #[test]
    fn complement_constructor() {
        let s = subspace_family(3, 1).unwrap();
        assert_eq!(s.conductor(), 2);
        let full = ExtNumSemigroup::from_complement(FiniteAbelianGroup::cyclic(3).unwrap(), &[]).unwrap();
        assert_eq!(full.frobenius(), -1);
        assert_eq!(full.a_invariant(), -1);
        assert!(!full.is_connected());
        assert_eq!(
            ExtNumSemigroup::from_complement(FiniteAbelianGroup::cyclic(3).unwrap(), &[(0, 0)]),
            Err(NumSgpError::IdentityGap)
        );
        let bad = ExtNumSemigroup::from_complement(FiniteAbelianGroup::trivial(), &[(2, 0)]);
        assert!(matches!(bad, Err(NumSgpError::NotClosed { .. })));
    }

    #[test]
    fn subspace_family_properties() {
        for n in 2..=6u32 {
            for lambda in 1..n {
                let s = subspace_family(n, lambda).unwrap();
                assert!(s.is_connected());
                assert_eq!(s.frobenius(), 1);
                assert_eq!(s.twisted_symmetric(), vec![lambda as usize]);
                let series = s.semigroup_series(0, 6);
                assert_eq!(series.at(0), 1);
                assert_eq!(series.at(1), n as i64 - 1);
                assert!((2..=6).all(|d| series.at(d) == n as i64));
            }
        }
        let s = subspace_family(4, 1).unwrap();
        assert_eq!(s.semigroup_series(0, 3).range(0, 3), vec![1, 3, 4, 4]);
        for n in [2u32, 3, 4] {
            let q = subspace_family(n, 1).unwrap().subspace_quiver_data(0, true).unwrap();
            assert_eq!(q.vertex_count(), n as usize + 1);
            assert_eq!(q.arrow_count(), n as usize);
            assert!((1..=n as usize).all(|k| q.multiplicity(0, k) == 1));
        }
        let s = subspace_family(4, 2).unwrap();
        assert_eq!(s.subspace_quiver_data(2, true), Err(NumSgpError::CharacteristicDivides(2)));
        assert_eq!(s.subspace_quiver_data(3, false), Err(NumSgpError::NotSplit));
        let (_, k) = klein();
        assert_eq!(k.subspace_quiver_data(3, true).unwrap().arrow_count(), 4);
        let c = ExtNumSemigroup::from_generators(FiniteAbelianGroup::trivial(), &[(2, 0), (3, 0)]).unwrap();
        assert!(matches!(c.subspace_quiver_data(0, true), Err(NumSgpError::NotInFamily(_))));
    }

    #[test]
    fn gap_table_rendering() {
        let (_, s) = klein();
        let t = s.gap_table();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "  n | 00 01 10 11");
        assert_eq!(lines[1], "  0 |  •         ");
        assert_eq!(lines[2], "  1 |  •  •  •   ");
        assert_eq!(lines[3], "  2 |  •  •  •  •");
    }

    fn arb_semigroup() -> impl Strategy<Value = ExtNumSemigroup> {
        (prop::sample::select(vec![vec![], vec![2], vec![3], vec![2, 2], vec![4], vec![2, 3]]),
         prop::collection::vec((1u32..5, 0usize..12), 1..5))
            .prop_filter_map("finite complement", |(orders, raw)| {
                let g = FiniteAbelianGroup::new(orders).unwrap();
                let ord = g.order();
                let mut gens: Vec<(u32, usize)> = raw.into_iter().map(|(n, l)| (n, l % ord)).collect();
                // make cofiniteness likely: all of L in degrees 3 and 4
                gens.extend((0..ord).flat_map(|l| [(3, l), (4, l)]));
                ExtNumSemigroup::from_generators(g, &gens).ok()
            })
    }

    proptest! {
        #[test]
        fn closure_up_to_twice_conductor(s in arb_semigroup()) {
            let c = s.conductor().max(1);
            let ord = s.group().order();
            for (n1, l1) in s.elements_below(2 * c) {
                for (n2, l2) in s.elements_below(2 * c) {
                    prop_assert!(s.contains((n1 + n2) as i64, s.group().add(l1, l2)));
                }
            }
            prop_assert!(s.contains(0, 0));
            prop_assert!((0..ord).all(|l| s.contains(c as i64, l)));
        }

        #[test]
        fn complement_round_trip(s in arb_semigroup()) {
            let back = ExtNumSemigroup::from_complement(s.group().clone(), &s.gaps()).unwrap();
            prop_assert_eq!(back.gaps(), s.gaps());
            prop_assert_eq!(back.conductor(), s.conductor());
        }

        #[test]
        fn a_invariant_is_frobenius(s in arb_semigroup()) {
            prop_assert_eq!(s.a_invariant(), s.frobenius());
        }

        #[test]
        fn gorenstein_shift(s in arb_semigroup()) {
            let a = s.a_invariant();
            let g = s.group().clone();
            let c = s.conductor() as i64;
            for tau in s.twisted_symmetric() {
                let omega = s.canonical_degrees(-c - 2, c + 2);
                for n in -c - 2..=c + 2 {
                    for l in 0..g.order() {
                        prop_assert_eq!(omega.contains(&(n, l)), s.contains(n + a, g.add(l, tau)));
                    }
                }
            }
        }
    }
}
