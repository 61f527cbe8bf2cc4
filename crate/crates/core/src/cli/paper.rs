//! Built-in reproduction checks, grouped by the section of the worked
//! examples they belong to. Reports contain no timings, so two runs with the
//! same options give byte-identical JSON.

use super::{CliError, Options, Result};
use crate::gradedlin::recipes::{self, Recipe};
use crate::gradedlin::{alpha_complex, diff_complex, ext_dims, HomologyTable, RModule, Resolution, SegreRing};
use crate::hilbert::{segre_report, FieldSpec, WeightedRingSpec};
use crate::kronecker::{classification_report, degree_one_dims, rigid_pairs, DimVector, ExtEvidence, KroneckerContext};
use crate::numsgp::{klein_example, subspace_family};
use crate::quivers::{endo_quiver, fold_d3, fold_d4, middle_multiplicities, p_segre_quiver, stable_reduce, EndoOptions, Quiver};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub section: u32,
    /// Degree window `[-D, D]` the check was certified on.
    pub window: Option<(i64, i64)>,
    pub passed: bool,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperReport {
    pub version: String,
    pub field: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl PaperReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let w = c.window.map_or(String::new(), |(lo, hi)| format!(" [{lo}, {hi}]"));
            let _ = writeln!(s, "{:<4} {:<26} {}{w}", c.section, c.id, if c.passed { "pass" } else { "FAIL" });
        }
        let _ = writeln!(s, "{}", if self.passed { "all checks pass" } else { "some checks FAILED" });
        s
    }

    pub fn to_json_string(&self) -> String {
        super::pretty(&serde_json::to_value(self).expect("report serializes"))
    }
}

pub const SECTIONS: [u32; 5] = [2, 3, 5, 6, 7];

/// Runs every check, or those of one section (8 is accepted for 7).
pub fn reproduce(section: Option<u32>, opts: &Options) -> Result<PaperReport> {
    let wanted = match section {
        None => SECTIONS.to_vec(),
        Some(8) => vec![7],
        Some(s) if SECTIONS.contains(&s) => vec![s],
        Some(s) => return Err(CliError::Usage(format!("no checks for section {s}; sections are 2, 3, 5, 6, 7"))),
    };
    let mut checks = Vec::new();
    for s in wanted {
        match s {
            2 => {
                checks.push(segre_cohomology(opts)?);
                checks.push(gorenstein_segre(opts)?);
            }
            3 => checks.push(weighted_p_segre(opts)?),
            5 => {
                checks.push(sequences("three-ar", 5, &recipes::three_ar()?, opts.d(5), opts.field)?);
                checks.push(sequences("four-ar", 5, &recipes::four_ar()?, opts.d(5), opts.field)?);
                checks.push(veronese_segre(opts)?);
                checks.push(fold_three(opts)?);
                checks.push(fold_four(opts)?);
            }
            6 => {
                checks.push(numsgp_family(opts));
                checks.push(klein(opts));
            }
            7 => {
                checks.push(alpha(opts)?);
                checks.push(diff(opts)?);
                let kos: Vec<Recipe> =
                    (-2..=3).map(|i| Ok(vec![recipes::kos_x(i)?, recipes::kos_y(i)?])).collect::<Result<Vec<_>>>()?.concat();
                checks.push(sequences("kos", 7, &kos, opts.d(6), opts.field)?);
                checks.push(sequences("omega-two", 7, &[recipes::omega_two()?], opts.d(6), opts.field)?);
                checks.push(main_quiver(opts)?);
                let claims = [recipes::claim_one()?, recipes::claim_two()?, recipes::claim_three()?];
                checks.push(sequences("claims", 7, &claims, opts.d(5), opts.field)?);
                checks.push(ext_table(opts)?);
                checks.push(kronecker(opts)?);
            }
            _ => unreachable!("section list is fixed"),
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(PaperReport { version: env!("CARGO_PKG_VERSION").into(), field: opts.field.to_string(), checks, passed })
}

fn spec(names: &[&str], weights: &[i64], field: FieldSpec) -> Result<WeightedRingSpec> {
    Ok(WeightedRingSpec::weighted(names, weights)?.with_field(field))
}

fn std_spec(names: &[&str], field: FieldSpec) -> Result<WeightedRingSpec> {
    spec(names, &vec![1; names.len()], field)
}

fn check(id: &str, section: u32, window: Option<i64>, passed: bool, details: Value) -> Check {
    Check { id: id.into(), section, window: window.map(|d| (-d, d)), passed, details }
}

fn segre_cohomology(opts: &Options) -> Result<Check> {
    let d = opts.d(8);
    let f = opts.field;
    let r = segre_report(&std_spec(&["x0", "x1"], f)?, &std_spec(&["y0", "y1", "y2"], f)?, &[-1, 0, 1, 2, 3], d)?;
    let top: BTreeMap<i64, i64> = r.top_cohomology.iter().copied().collect();
    let h4: Vec<i64> = [-3, -4, -5].iter().map(|k| top.get(k).copied().unwrap_or(0)).collect();
    let cm: Vec<bool> = r.shifts.iter().map(|s| s.cohen_macaulay).collect();
    let passed = r.dim == 4
        && r.lower_cohomology_certified
        && h4 == [2, 9, 24]
        && !r.gorenstein
        && cm == [true, true, true, true, false]
        && r.shifts[4].obstruction.map(|(p, k, _)| (p, k)) == Some((3, -3));
    Ok(check("segre-cohomology", 2, Some(d), passed, serde_json::to_value(&r).expect("serializes")))
}

fn gorenstein_segre(opts: &Options) -> Result<Check> {
    let d = opts.d(8);
    let f = opts.field;
    let xyz = std_spec(&["x", "y", "z"], f)?;
    let uv = spec(&["u", "v"], &[1, 2], f)?;
    let r1 = segre_report(&xyz, &uv, &[0], d)?;
    let r2 = segre_report(&xyz, &std_spec(&["u", "v", "w"], f)?, &[0], d)?;
    let passed = r1.gorenstein && r2.gorenstein && (r1.a_invariant, r1.dim) == (-3, 4) && (r2.a_invariant, r2.dim) == (-3, 5);
    let row = |r: &crate::hilbert::SegreReport| json!({"ring_a": r.ring_a, "ring_b": r.ring_b, "dim": r.dim, "a": r.a_invariant, "gorenstein": r.gorenstein});
    Ok(check("gorenstein-segre", 2, Some(d), passed, json!([row(&r1), row(&r2)])))
}

fn arrows_json(q: &Quiver) -> Value {
    q.to_json()
}

fn weighted_p_segre(opts: &Options) -> Result<Check> {
    let d = opts.d(4);
    let f = opts.field;
    let eq = p_segre_quiver(
        &spec(&["x", "y"], &[1, 2], f)?,
        1,
        &spec(&["u", "v"], &[1, 2], f)?,
        1,
        3,
        &EndoOptions { window: (-d, d), top: None },
    )?;
    let q = &eq.quiver;
    let passed = q.arrow_count() == 7
        && q.arrows_between("M1", "M1") == 1
        && [("R", "M1"), ("M1", "M2"), ("M2", "R"), ("M1", "R"), ("M2", "M1"), ("R", "M2")]
            .iter()
            .all(|(s, t)| q.arrows_between(s, t) == 1);
    Ok(check("weighted-p-segre-quiver", 3, Some(d), passed, arrows_json(q)))
}

fn homology_json(h: &HomologyTable) -> Value {
    serde_json::to_value(h).expect("serializes")
}

/// Checks a list of sequences against their expected homology.
pub fn sequences(id: &str, section: u32, list: &[Recipe], d: i64, field: FieldSpec) -> Result<Check> {
    let mut rows = Vec::new();
    let mut passed = true;
    for r in list {
        let c = r.check(d, field)?;
        passed &= c.passed;
        rows.push(json!({"name": c.name, "terms": c.labels, "homology": homology_json(&c.homology), "passed": c.passed}));
    }
    Ok(check(id, section, Some(d), passed, Value::Array(rows)))
}

fn veronese_segre(opts: &Options) -> Result<Check> {
    let d = opts.d(4);
    let f = opts.field;
    let eq = p_segre_quiver(
        &std_spec(&["x", "y"], f)?,
        2,
        &std_spec(&["u", "v"], f)?,
        2,
        1,
        &EndoOptions { window: (-d, d), top: None },
    )?;
    let st = stable_reduce(&eq, &["P(0,0)"])?;
    let passed = eq.quiver.arrow_count() == 12
        && eq.quiver.bundle_sizes() == [2, 2, 2, 2, 4]
        && st.bundle_sizes() == [2, 2]
        && st.arrows_between("P(1,0)", "P(1,1)") == 2
        && st.arrows_between("P(0,1)", "P(1,1)") == 2;
    Ok(check("veronese-segre-quiver", 5, Some(d), passed, json!({"quiver": arrows_json(&eq.quiver), "stable": arrows_json(&st)})))
}

/// Multiplicities `n[(i, j)]` read off the designated term of the sequence ending at each vertex.
pub fn fold_multiplicities(
    list: &[Recipe],
    tag: &str,
    vertices: &[String],
    position: usize,
    free: &str,
) -> Result<BTreeMap<(usize, usize), usize>> {
    let mut n = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        let name = format!("{tag} ending at {v}");
        let r = list.iter().find(|r| r.name == name).ok_or_else(|| CliError::Reference(name.clone()))?;
        let mut labels = r.graded((0, 0), FieldSpec::Rational)?.labels().to_vec();
        labels.reverse();
        for (m, k) in middle_multiplicities(&labels, position, free)? {
            let j = vertices.iter().position(|u| *u == m).ok_or_else(|| CliError::Reference(m.clone()))?;
            n.insert((i, j), k);
        }
    }
    Ok(n)
}

/// Endo quiver of `M_{-1}, R, M_1` over `a # b` with `R` divided out.
pub fn stable_diagonal_quiver(a: &WeightedRingSpec, b: &WeightedRingSpec, d: i64) -> Result<Quiver> {
    let ring = SegreRing::segre(a, b)?;
    let mods: Vec<RModule> = [-1, 0, 1].iter().map(|&i| RModule::diagonal(&ring, i)).collect();
    let eq = endo_quiver(&mods, (-d, d))?;
    Ok(stable_reduce(&eq, &["R"])?)
}

fn fold_three(opts: &Options) -> Result<Check> {
    let d = opts.d(4);
    let f = opts.field;
    let st = stable_diagonal_quiver(&std_spec(&["x", "y", "z"], f)?, &spec(&["u", "v"], &[1, 2], f)?, d)?;
    let n = fold_multiplicities(&recipes::three_ar()?, "3AR", st.vertices(), 2, "R")?;
    let q = fold_d3(&st, &n)?;
    let passed = st.bundle_sizes() == [1] && q.vertex_count() == 4 && q.bundle_sizes() == [1, 1, 3, 3];
    let n_json: Vec<_> = n.iter().map(|(&(i, j), &k)| (i, j, k)).collect();
    Ok(check("fold-d3", 5, Some(d), passed, json!({"stable": arrows_json(&st), "n": n_json, "folded": arrows_json(&q)})))
}

fn fold_four(opts: &Options) -> Result<Check> {
    let d = opts.d(4);
    let f = opts.field;
    let st = stable_diagonal_quiver(&std_spec(&["x", "y", "z"], f)?, &std_spec(&["u", "v", "w"], f)?, d)?;
    let m = fold_multiplicities(&recipes::four_ar()?, "4AR", st.vertices(), 2, "R")?;
    let q = fold_d4(st.vertices(), &m)?;
    let passed = st.arrow_count() == 0 && q.vertex_count() == 6 && q.bundle_sizes() == [3; 6];
    let m_json: Vec<_> = m.iter().map(|(&(i, j), &k)| (i, j, k)).collect();
    Ok(check("fold-d4", 5, Some(d), passed, json!({"stable": arrows_json(&st), "m": m_json, "folded": arrows_json(&q)})))
}

fn numsgp_family(opts: &Options) -> Check {
    let p = opts.field.characteristic();
    let mut rows = Vec::new();
    let mut passed = true;
    for n in 3..=6u32 {
        for lambda in 1..n {
            let row = match subspace_family(n, lambda) {
                Ok(s) => {
                    let reduced = s.reduced(p);
                    let star = s.subspace_quiver_data(p, true);
                    let sinks = star.as_ref().ok().map(|q| q.arrow_count());
                    let ok = s.is_connected()
                        && s.frobenius() == 1
                        && s.twisted_symmetric() == [lambda as usize]
                        && s.gorenstein()
                        && reduced == (p == 0 || n % p != 0)
                        && (sinks == Some(n as usize)) == reduced;
                    passed &= ok;
                    json!({"n": n, "lambda": lambda, "frobenius": s.frobenius(), "reduced": reduced, "sinks": sinks, "passed": ok})
                }
                Err(e) => {
                    passed = false;
                    json!({"n": n, "lambda": lambda, "error": e.to_string()})
                }
            };
            rows.push(row);
        }
    }
    check("numsgp-family", 6, None, passed, Value::Array(rows))
}

fn klein(opts: &Options) -> Check {
    let s = klein_example();
    let nu = s.group().parse("11").expect("label of the Klein group");
    let passed = s.frobenius() == 1 && s.twisted_symmetric() == [nu] && !s.reduced(2) && s.is_connected();
    let report = s.report(opts.field.characteristic());
    check("klein", 6, None, passed, serde_json::to_value(report).expect("serializes"))
}

fn alpha(opts: &Options) -> Result<Check> {
    let mut rows = Vec::new();
    let mut passed = true;
    for n in 1..=3usize {
        for m in -5..=5i64 {
            let h = alpha_complex(n, m, opts.field)?.homology()?;
            let ok = if m == -(n as i64) {
                h.dims.len() == 1 && h.at(n, -m) == 1
            } else {
                h.is_zero()
            };
            passed &= ok;
            rows.push(json!({"n": n, "m": m, "homology": homology_json(&h), "passed": ok}));
        }
    }
    Ok(check("alpha-complex", 7, None, passed, Value::Array(rows)))
}

fn diff(opts: &Options) -> Result<Check> {
    let d = opts.d(5);
    let mut rows = Vec::new();
    let mut passed = true;
    for n in 1..=3usize {
        let names: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let h = diff_complex(&std_spec(&names, opts.field)?, (-d, d))?.homology()?;
        let ok = h.total(0) == 1 && h.dims.len() == 1;
        passed &= ok;
        rows.push(json!({"n": n, "homology": homology_json(&h), "passed": ok}));
    }
    Ok(check("diff-complex", 7, Some(d), passed, Value::Array(rows)))
}

/// `R`, `ω = M_1` and its syzygies over `k[x0,x1] # k[y0,y1,y2]`.
pub struct MainExample {
    pub ring: Arc<SegreRing>,
    pub r: RModule,
    pub omega: RModule,
    syzygies: Vec<RModule>,
}

impl MainExample {
    pub fn new(field: FieldSpec) -> Result<Self> {
        let ring = SegreRing::segre(&std_spec(&["x0", "x1"], field)?, &std_spec(&["y0", "y1", "y2"], field)?)?;
        let omega = RModule::diagonal(&ring, 1).named("ω");
        let res = Resolution::compute(&omega, 3, 9)?;
        let names = ["Ωω", "Ω²ω", "Ω³ω"];
        let syzygies = (1..=3).map(|k| Ok(res.syzygy(k)?.named(names[k - 1]))).collect::<Result<_>>()?;
        Ok(Self { r: RModule::diagonal(&ring, 0), ring, omega, syzygies })
    }

    /// `Ω^k ω` for `k = 1, 2, 3`.
    pub fn syzygy(&self, k: usize) -> &RModule {
        &self.syzygies[k - 1]
    }

    pub fn diagonal(&self, i: i64) -> RModule {
        RModule::diagonal(&self.ring, i)
    }
}

/// Total of `Ext^1(a, b)_d` over `d` in `[-d, d]`.
pub fn ext1_total(a: &RModule, b: &RModule, d: i64) -> Result<usize> {
    let res = Resolution::compute(a, 2, d + 4)?;
    Ok(ext_dims(&res, b, 1..=1, (-d, d))?.total(1))
}

/// `Ext^1(X, X)` total for `X` the sum of `parts`.
pub fn self_ext1_total(parts: &[&RModule], d: i64) -> Result<usize> {
    let mut total = 0;
    for a in parts {
        let res = Resolution::compute(a, 2, d + 4)?;
        for b in parts {
            total += ext_dims(&res, b, 1..=1, (-d, d))?.total(1);
        }
    }
    Ok(total)
}

fn ext_table(opts: &Options) -> Result<Check> {
    let d = opts.d(5);
    let ex = MainExample::new(opts.field)?;
    let o2 = ex.syzygy(2);
    let x = self_ext1_total(&[&ex.r, &ex.omega, o2], d)?;
    let m2 = ext1_total(o2, &ex.diagonal(2), d)?;
    let m3 = ext1_total(o2, &ex.diagonal(3), d)?;
    let eq = endo_quiver(&[ex.r.clone(), ex.omega.clone()], (-d, d))?;
    let stable_end = eq.stable_hom_total(1, 1, &[0])?;
    let passed = x == 0 && m2 == 1 && m3 == 2 && stable_end == 1;
    Ok(check(
        "ext-table",
        7,
        Some(d),
        passed,
        json!({"ext1_X_X": x, "ext1_omega2_M2": m2, "ext1_omega2_M3": m3, "stable_end_omega": stable_end}),
    ))
}

fn main_quiver(opts: &Options) -> Result<Check> {
    let d = opts.d(4);
    let ex = MainExample::new(opts.field)?;
    let mods = [ex.r.clone(), ex.omega.clone(), ex.syzygy(2).clone()];
    let small = endo_quiver(&mods, (-d, d))?;
    let large = endo_quiver(&mods, (-d - 2, d + 2))?;
    let q = &small.quiver;
    let expected = q.arrows_between("R", "ω") == 2
        && q.arrows_between("ω", "Ω²ω") == 3
        && q.arrows_between("Ω²ω", "R") == 3
        && q.arrow_count() == 8;
    let stable = small.quiver.arrows() == large.quiver.arrows();
    Ok(check(
        "endo-quiver",
        7,
        Some(d),
        expected && stable,
        json!({"quiver": arrows_json(q), "window_stable_to": d + 2, "stable": stable}),
    ))
}

/// Windowed `Ext^1` evidence for the rigid and non-rigid modules of the main example.
pub fn classification_evidence(d: i64, field: FieldSpec) -> Result<Vec<ExtEvidence>> {
    let ex = MainExample::new(field)?;
    let m2 = ex.diagonal(2);
    let sets: [(&str, Vec<&RModule>); 4] = [
        ("R⊕ω⊕Ω²ω", vec![&ex.r, &ex.omega, ex.syzygy(2)]),
        ("R⊕Ωω", vec![&ex.r, ex.syzygy(1)]),
        ("ω⊕M₂", vec![&ex.omega, &m2]),
        ("Ω³ω", vec![ex.syzygy(3)]),
    ];
    sets.iter()
        .map(|(name, parts)| {
            Ok(ExtEvidence { module: name.to_string(), window: (-d, d), ext1_total: self_ext1_total(parts, d)? })
        })
        .collect()
}

fn kronecker(opts: &Options) -> Result<Check> {
    let d = opts.d(5);
    let ctx = KroneckerContext::new(3)?;
    let p: Vec<DimVector> = (1..=20).map(|i| ctx.preprojective(i)).collect::<std::result::Result<_, _>>()?;
    let first = [DimVector::new(0, 1), DimVector::new(1, 3), DimVector::new(3, 8), DimVector::new(8, 21)];
    let ds: Vec<i128> = (1..=4).map(degree_one_dims).collect::<std::result::Result<_, _>>()?;
    let pairs = rigid_pairs(&ctx, 10)?;
    let report = classification_report(&classification_evidence(d, opts.field)?, 10)?;
    let passed = p[..4] == first
        && p.iter().all(|v| ctx.quadratic(*v) == 1)
        && ds == [3, 12, 33, 87]
        && pairs.all_candidates_rigid()
        && pairs.all_skips_rejected()
        && report.pass;
    let pv: Vec<String> = p[..4].iter().map(|v| v.to_string()).collect();
    Ok(check(
        "kronecker",
        7,
        Some(d),
        passed,
        json!({"preprojective": pv, "degree_one": ds.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "classification": report}),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_section_is_usage() {
        assert_eq!(reproduce(Some(4), &Options::default()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn numerical_semigroup_section() {
        let r = reproduce(Some(6), &Options::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks.len(), 2);
        let p2 = Options { field: FieldSpec::Prime(2), ..Options::default() };
        let r = reproduce(Some(6), &p2).unwrap();
        assert!(r.passed, "{}", r.text());
    }
}
