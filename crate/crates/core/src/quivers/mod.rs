//! Quivers with arrow multiplicities, endomorphism quivers of module sums, and the
//! doubling/tripling folding constructions.

mod endo;

pub use endo::{
    endo_quiver, endo_quiver_with, middle_multiplicities, p_segre_quiver, stable_reduce, EndoOptions,
    EndoQuiver,
};

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("vertex label {0} used twice")]
    DuplicateVertex(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("multiplicity table is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("vertex {label} is not local: degree-0 endomorphisms have dimension {dim}")]
    NonLocal { label: String, dim: usize },
    #[error("linear algebra: {0}")]
    Linear(String),
    #[error("certification gap: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, QuiverError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: BTreeMap<(usize, usize), usize>,
    /// Degrees of the arrows in each bundle, when known.
    degrees: BTreeMap<(usize, usize), BTreeMap<i64, usize>>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>) -> Result<Self> {
        for (k, v) in vertices.iter().enumerate() {
            if vertices[..k].contains(v) {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        Ok(Self {
            vertices,
            arrows: BTreeMap::new(),
            degrees: BTreeMap::new(),
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| QuiverError::UnknownVertex(label.to_string()))
    }

    pub fn add_arrows(&mut self, s: usize, t: usize, k: usize) {
        if k > 0 {
            *self.arrows.entry((s, t)).or_insert(0) += k;
        }
    }

    pub fn add_graded_arrows(&mut self, s: usize, t: usize, degree: i64, k: usize) {
        if k > 0 {
            self.add_arrows(s, t, k);
            *self.degrees.entry((s, t)).or_default().entry(degree).or_insert(0) += k;
        }
    }

    pub fn multiplicity(&self, s: usize, t: usize) -> usize {
        self.arrows.get(&(s, t)).copied().unwrap_or(0)
    }

    /// Multiplicity between labelled vertices; unknown labels count as zero.
    pub fn arrows_between(&self, s: &str, t: &str) -> usize {
        match (self.index_of(s), self.index_of(t)) {
            (Ok(a), Ok(b)) => self.multiplicity(a, b),
            _ => 0,
        }
    }

    pub fn arrows(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.arrows
    }

    pub fn arrow_degrees(&self, s: usize, t: usize) -> Option<&BTreeMap<i64, usize>> {
        self.degrees.get(&(s, t))
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.values().sum()
    }

    /// Multiset of bundle sizes, sorted.
    pub fn bundle_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.arrows.values().copied().collect();
        v.sort_unstable();
        v
    }

    /// Full subquiver on the vertices for which `keep` holds.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Quiver {
        let idx: Vec<usize> = (0..self.vertices.len()).filter(|&v| keep(v)).collect();
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut q = Quiver::new(idx.iter().map(|&v| self.vertices[v].clone()).collect())
            .expect("labels stay distinct");
        for (&(s, t), &m) in &self.arrows {
            if let (Some(&a), Some(&b)) = (pos.get(&s), pos.get(&t)) {
                q.add_arrows(a, b, m);
                if let Some(d) = self.degrees.get(&(s, t)) {
                    q.degrees.insert((a, b), d.clone());
                }
            }
        }
        q
    }

    /// Graphviz source; a bundle of `m` arrows is drawn as `m` parallel edges carrying `count=m`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{k} [label=\"{v}\"];");
        }
        for (&(s, t), &m) in &self.arrows {
            for _ in 0..m {
                let _ = writeln!(out, "  v{s} -> v{t} [count={m}];");
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arrows: Vec<serde_json::Value> = self
            .arrows
            .iter()
            .map(|(&(s, t), &m)| {
                let mut a = serde_json::json!({
                    "source": self.vertices[s],
                    "target": self.vertices[t],
                    "count": m,
                });
                if let Some(d) = self.degrees.get(&(s, t)) {
                    let d: Vec<(i64, usize)> = d.iter().map(|(&k, &v)| (k, v)).collect();
                    a["degrees"] = serde_json::json!(d);
                }
                a
            })
            .collect();
        serde_json::json!({"vertices": self.vertices, "arrows": arrows})
    }
}

/// Two copies of `q` plus `n[(i, j)]` arrows from the first copy of `i` to the second copy of `j`.
pub fn fold_d3(q: &Quiver, n: &BTreeMap<(usize, usize), usize>) -> Result<Quiver> {
    for (&(i, j), &m) in n {
        if n.get(&(j, i)).copied().unwrap_or(0) != m {
            return Err(QuiverError::Asymmetric(i, j));
        }
    }
    let v = q.vertex_count();
    let mut labels: Vec<String> = q.vertices.iter().map(|s| format!("{s}^1")).collect();
    labels.extend(q.vertices.iter().map(|s| format!("{s}^2")));
    let mut out = Quiver::new(labels)?;
    for (&(s, t), &m) in &q.arrows {
        out.add_arrows(s, t, m);
        out.add_arrows(s + v, t + v, m);
    }
    for (&(i, j), &m) in n {
        out.add_arrows(i, j + v, m);
    }
    Ok(out)
}

/// Vertices `(i, a)` for `a = 1, 2, 3` with `m[(i, j)]` arrows
/// `(i,1) -> (j,2)`, `(i,2) -> (j,3)` and `(j,1) -> (i,3)`.
pub fn fold_d4(labels: &[String], m: &BTreeMap<(usize, usize), usize>) -> Result<Quiver> {
    let n = labels.len();
    let names = (1..=3)
        .flat_map(|a| labels.iter().map(move |s| format!("{s}^{a}")))
        .collect();
    let mut out = Quiver::new(names)?;
    let at = |i: usize, a: usize| (a - 1) * n + i;
    for (&(i, j), &k) in m {
        out.add_arrows(at(i, 1), at(j, 2), k);
        out.add_arrows(at(i, 2), at(j, 3), k);
        out.add_arrows(at(j, 1), at(i, 3), k);
    }
    Ok(out)
}
