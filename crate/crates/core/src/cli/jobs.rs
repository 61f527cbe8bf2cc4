use super::config::{Config, Expect, JobDecl, JobKind, ModuleKind, SemigroupDecl};
use super::{paper, parse_field, Cache, CliError, Options, Result};
use crate::gradedlin::{recipes, RModule, Resolution, SegreRing};
use crate::hilbert::{segre_report, FieldSpec};
use crate::kronecker::{classification_report, rigid_pairs, KroneckerContext};
use crate::numsgp::{ExtNumSemigroup, FiniteAbelianGroup};
use crate::quivers::{endo_quiver, fold_d3, fold_d4, middle_multiplicities, stable_reduce, Quiver};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JobOutcome {
    pub name: String,
    pub kind: String,
    pub passed: bool,
    pub window: Option<(i64, i64)>,
    pub report: Value,
    pub text: String,
    pub dot: Option<String>,
}

/// Rings and modules built so far, shared between the jobs of one run.
pub struct Session<'a> {
    config: &'a Config,
    opts: Options,
    cache: Cache,
    rings: BTreeMap<(String, String, FieldSpec), Arc<SegreRing>>,
}

impl<'a> Session<'a> {
    pub fn new(config: &'a Config, opts: Options, cache: Cache) -> Self {
        Self { config, opts, cache, rings: BTreeMap::new() }
    }

    fn ring(&mut self, a: &str, b: &str, field: FieldSpec) -> Result<Arc<SegreRing>> {
        let key = (a.to_string(), b.to_string(), field);
        if let Some(r) = self.rings.get(&key) {
            return Ok(r.clone());
        }
        let spec = |n: &str| -> Result<_> {
            let d = self.config.ring.get(n).ok_or_else(|| CliError::Reference(format!("ring {n}")))?;
            Ok(d.spec()?.with_field(field))
        };
        let r = SegreRing::segre(&spec(a)?, &spec(b)?)?;
        self.rings.insert(key, r.clone());
        Ok(r)
    }

    fn module(&mut self, name: &str, field: FieldSpec, top: i64) -> Result<RModule> {
        let decl = self.config.module.get(name).ok_or_else(|| CliError::Reference(format!("module {name}")))?.clone();
        match decl.kind {
            ModuleKind::Diagonal => {
                let (a, b) = self.config.module_rings(name)?;
                let ring = self.ring(&a, &b, field)?;
                Ok(RModule::diagonal(&ring, decl.shift.unwrap_or(0)).named(name))
            }
            ModuleKind::Syzygy => {
                let of = decl.of.as_deref().expect("validated");
                let k = decl.k.unwrap_or(1);
                let base = self.module(of, field, top)?;
                Ok(Resolution::compute(&base, k, top)?.syzygy(k)?.named(name))
            }
        }
    }

    /// The `R`/`M_i` label of a diagonal module, as used in sequence terms.
    fn term_label(&self, name: &str) -> Result<String> {
        let decl = &self.config.module[name];
        match decl.kind {
            ModuleKind::Diagonal => Ok(crate::gradedlin::segre_label(decl.shift.unwrap_or(0), 0, 0)),
            ModuleKind::Syzygy => Err(CliError::Usage(format!("module {name} does not occur in built-in sequences"))),
        }
    }
}

struct Effective {
    d: Option<i64>,
    depth: Option<usize>,
    field: FieldSpec,
}

impl Effective {
    fn d(&self, default: i64) -> i64 {
        self.d.unwrap_or(default)
    }
}

fn need<'j, T>(v: &'j Option<T>, what: &str, job: &JobDecl) -> Result<&'j T> {
    v.as_ref().ok_or_else(|| CliError::Usage(format!("job {} ({}) needs `{what}`", job.name, job.kind.as_str())))
}

/// Runs one job through the cache.
pub fn run_job(session: &mut Session<'_>, job: &JobDecl) -> Result<JobOutcome> {
    let field = match &job.field {
        Some(f) => parse_field(f).map_err(CliError::Usage)?,
        None => session.opts.field,
    };
    let eff = Effective { d: job.window.or(session.opts.window), depth: job.depth.or(session.opts.depth), field };
    let key = Cache::key(&json!({
        "inputs": session.config.inputs_of(job),
        "window": eff.d,
        "depth": eff.depth,
        "field": eff.field.to_string(),
    }));
    let cache = session.cache.clone();
    let (payload, _) = cache.get_or_compute(&key, || {
        let outcome = compute(session, job, &eff)?;
        Ok(serde_json::to_string(&outcome).expect("outcome serializes"))
    })?;
    match serde_json::from_str(&payload) {
        Ok(o) => Ok(o),
        Err(_) => {
            eprintln!("warning: cache entry {key} does not decode; recomputing");
            compute(session, job, &eff)
        }
    }
}

fn outcome(job: &JobDecl, passed: bool, window: Option<i64>, report: Value, text: String, dot: Option<String>) -> JobOutcome {
    JobOutcome {
        name: job.name.clone(),
        kind: job.kind.as_str().into(),
        passed,
        window: window.map(|d| (-d, d)),
        report,
        text,
        dot,
    }
}

fn compute(session: &mut Session<'_>, job: &JobDecl, eff: &Effective) -> Result<JobOutcome> {
    let ex = &job.expect;
    match job.kind {
        JobKind::SegreReport => {
            let d = eff.d(8);
            let spec = |n: &str| -> Result<_> { Ok(session.config.ring[n].spec()?.with_field(eff.field)) };
            let shifts = job.shifts.clone().unwrap_or_else(|| vec![0]);
            let r = segre_report(&spec(need(&job.a, "a", job)?)?, &spec(need(&job.b, "b", job)?)?, &shifts, d)?;
            let cm: Vec<bool> = r.shifts.iter().map(|s| s.cohen_macaulay).collect();
            let passed = ex.gorenstein.is_none_or(|g| g == r.gorenstein)
                && ex.a.is_none_or(|a| a == r.a_invariant)
                && ex.dim.is_none_or(|k| k == r.dim)
                && ex.cm.as_ref().is_none_or(|c| *c == cm);
            let mut text = format!("{} # {}\ndim {}  a {}  gorenstein {}\n", r.ring_a, r.ring_b, r.dim, r.a_invariant, r.gorenstein);
            let _ = writeln!(text, "top cohomology (degree, dim): {:?}", r.top_cohomology);
            for s in &r.shifts {
                let _ = writeln!(text, "shift {:>3}  CM {:<5}  depth {}", s.shift, s.cohen_macaulay, s.depth);
            }
            Ok(outcome(job, passed, Some(d), serde_json::to_value(&r).expect("serializes"), text, None))
        }
        JobKind::Numsgp => {
            let name = need(&job.semigroup, "semigroup", job)?;
            let s = semigroup(&session.config.semigroup[name.as_str()])?;
            let r = s.report(eff.field.characteristic());
            let passed = numsgp_expectations(ex, &s, eff.field);
            Ok(outcome(job, passed, None, serde_json::to_value(&r).expect("serializes"), r.to_string(), None))
        }
        JobKind::Resolve => {
            let d = eff.d(5);
            let depth = eff.depth.unwrap_or(2);
            let m = session.module(need(&job.module, "module", job)?, eff.field, d + 4)?;
            let res = Resolution::compute(&m, depth, d + 4)?;
            let betti = res.betti();
            let ranks: Vec<usize> = betti.iter().map(|b| b.values().sum()).collect();
            let passed = ex.ranks.as_ref().is_none_or(|r| *r == ranks);
            let mut text = String::new();
            for (i, b) in betti.iter().enumerate() {
                let _ = writeln!(text, "F{i}: {}", b.iter().map(|(g, n)| format!("R(-{g})^{n}")).collect::<Vec<_>>().join(" + "));
            }
            let rows: Vec<Vec<(i64, usize)>> = betti.iter().map(|b| b.iter().map(|(&g, &n)| (g, n)).collect()).collect();
            let report = json!({"module": m.name(), "depth": depth, "top": d + 4, "betti": rows, "ranks": ranks, "minimal": res.is_minimal()});
            Ok(outcome(job, passed, Some(d), report, text, None))
        }
        JobKind::SequenceCheck => {
            let d = eff.d(5);
            let list = builtin_sequences(need(&job.sequences, "sequences", job)?)?;
            let c = paper::sequences(&job.name, 0, &list, d, eff.field)?;
            let mut text = String::new();
            for row in c.details.as_array().expect("rows") {
                let _ = writeln!(text, "{}: {}  {}", row["name"].as_str().unwrap_or(""), row["terms"], if row["passed"] == true { "exact as expected" } else { "FAIL" });
            }
            Ok(outcome(job, c.passed, Some(d), c.details, text, None))
        }
        JobKind::EndoQuiver => {
            let d = eff.d(4);
            let names = need(&job.modules, "modules", job)?;
            let mods = names.iter().map(|n| session.module(n, eff.field, d + 4)).collect::<Result<Vec<_>>>()?;
            let eq = endo_quiver(&mods, (-d, d))?;
            let stable = match &job.free {
                Some(free) => Some(stable_reduce(&eq, &free.iter().map(String::as_str).collect::<Vec<_>>())?),
                None => None,
            };
            let passed = ex.arrows.as_ref().is_none_or(|want| bundles_match(&eq.quiver, want));
            let mut text = quiver_text(&eq.quiver);
            if let Some(s) = &stable {
                text.push_str("stable:\n");
                text.push_str(&quiver_text(s));
            }
            let report = json!({"quiver": eq.quiver.to_json(), "stable": stable.as_ref().map(Quiver::to_json)});
            Ok(outcome(job, passed, Some(d), report, text, Some(eq.quiver.to_dot(&job.name))))
        }
        JobKind::Fold => {
            let d = eff.d(4);
            let names = need(&job.modules, "modules", job)?;
            let free = need(&job.free, "free", job)?;
            let mods = names.iter().map(|n| session.module(n, eff.field, d + 4)).collect::<Result<Vec<_>>>()?;
            let eq = endo_quiver(&mods, (-d, d))?;
            let st = stable_reduce(&eq, &free.iter().map(String::as_str).collect::<Vec<_>>())?;
            let [free_one] = free.as_slice() else {
                return Err(CliError::Usage(format!("job {}: fold needs exactly one free module", job.name)));
            };
            let free_label = session.term_label(free_one)?;
            let labels: Vec<String> = st.vertices().iter().map(|v| session.term_label(v)).collect::<Result<_>>()?;
            let list = builtin_sequences(need(&job.sequences, "sequences", job)?)?;
            let position = *need(&job.position, "position", job)?;
            let mut n = BTreeMap::new();
            for (i, v) in labels.iter().enumerate() {
                let r = list
                    .iter()
                    .find(|r| r.name.ends_with(&format!("ending at {v}")))
                    .ok_or_else(|| CliError::Reference(format!("sequence ending at {v}")))?;
                let mut terms = r.graded((0, 0), FieldSpec::Rational)?.labels().to_vec();
                terms.reverse();
                for (m, k) in middle_multiplicities(&terms, position, &free_label)? {
                    let j = labels.iter().position(|u| *u == m).ok_or_else(|| CliError::Reference(m.clone()))?;
                    n.insert((i, j), k);
                }
            }
            let folded = match need(&job.variant, "variant", job)?.as_str() {
                "d3" => fold_d3(&st, &n)?,
                "d4" => fold_d4(st.vertices(), &n)?,
                v => return Err(CliError::Usage(format!("unknown fold variant {v}; use d3 or d4"))),
            };
            let passed = ex.bundles.as_ref().is_none_or(|b| *b == folded.bundle_sizes());
            let text = format!("stable:\n{}folded:\n{}", quiver_text(&st), quiver_text(&folded));
            let nj: Vec<_> = n.iter().map(|(&(i, j), &k)| (i, j, k)).collect();
            let report = json!({"stable": st.to_json(), "multiplicities": nj, "folded": folded.to_json()});
            Ok(outcome(job, passed, Some(d), report, text, Some(folded.to_dot(&job.name))))
        }
        JobKind::Kronecker => {
            let n = job.n.unwrap_or(3);
            let bound = job.bound.unwrap_or(10);
            let ctx = KroneckerContext::new(n)?;
            let pairs = rigid_pairs(&ctx, bound)?;
            let mut passed = pairs.all_candidates_rigid() && pairs.all_skips_rejected();
            let mut text = String::new();
            for i in 1..=bound {
                let _ = writeln!(text, "P{i} = {}  I{i} = {}", ctx.preprojective(i)?, ctx.preinjective(i)?);
            }
            let mut report = json!({"n": n, "rigid_pairs": pairs});
            let mut window = None;
            if n == 3 {
                let d = eff.d(5);
                window = Some(d);
                let cr = classification_report(&paper::classification_evidence(d, eff.field)?, bound)?;
                for l in &cr.lines {
                    let _ = writeln!(text, "{:<10} Ext1 total {}  {}", l.module, l.ext1_total, l.status);
                }
                passed &= cr.pass;
                report["classification"] = serde_json::to_value(&cr).expect("serializes");
            }
            Ok(outcome(job, passed, window, report, text, Some(crate::kronecker::fringe_dot(&ctx, bound))))
        }
        JobKind::ReproducePaper => {
            let opts = Options { window: eff.d, depth: eff.depth, field: eff.field };
            let r = paper::reproduce(job.section, &opts)?;
            Ok(outcome(job, r.passed, None, serde_json::to_value(&r).expect("serializes"), r.text(), None))
        }
    }
}

fn bundles_match(q: &Quiver, want: &[(String, String, usize)]) -> bool {
    let total: usize = want.iter().map(|w| w.2).sum();
    total == q.arrow_count() && want.iter().all(|(s, t, k)| q.arrows_between(s, t) == *k)
}

fn quiver_text(q: &Quiver) -> String {
    let mut s = String::new();
    for (&(a, b), &m) in q.arrows() {
        let degs = q
            .arrow_degrees(a, b)
            .map(|d| d.iter().map(|(k, v)| format!("{v}@{k}")).collect::<Vec<_>>().join(","))
            .unwrap_or_default();
        let _ = writeln!(s, "  {} -> {}  x{m}  {degs}", q.vertices()[a], q.vertices()[b]);
    }
    s
}

fn builtin_sequences(names: &[String]) -> Result<Vec<recipes::Recipe>> {
    let all = recipes::all()?;
    names
        .iter()
        .map(|n| {
            all.iter().find(|r| r.name == *n).cloned().ok_or_else(|| {
                let known: Vec<&str> = all.iter().map(|r| r.name.as_str()).collect();
                CliError::Reference(format!("sequence {n:?}; known: {}", known.join("; ")))
            })
        })
        .collect()
}

fn numsgp_expectations(ex: &Expect, s: &ExtNumSemigroup, field: FieldSpec) -> bool {
    ex.frobenius.is_none_or(|f| f == s.frobenius())
        && ex.gorenstein.is_none_or(|g| g == s.gorenstein())
        && ex.connected.is_none_or(|c| c == s.is_connected())
        && ex.reduced.is_none_or(|r| r == s.reduced(field.characteristic()))
}

fn parse_orders(group: &str) -> Result<Vec<u32>> {
    group
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad group order {s:?}"))))
        .collect()
}

fn semigroup(decl: &SemigroupDecl) -> Result<ExtNumSemigroup> {
    let g = FiniteAbelianGroup::new(decl.group.clone())?;
    let pairs = |xs: &[String]| -> Result<Vec<(u32, usize)>> { xs.iter().map(|x| Ok(g.parse_pair(x)?)).collect() };
    match (&decl.gens, &decl.gaps) {
        (Some(gens), None) => Ok(ExtNumSemigroup::from_generators(g.clone(), &pairs(gens)?)?),
        (None, Some(gaps)) => Ok(ExtNumSemigroup::from_complement(g.clone(), &pairs(gaps)?)?),
        _ => Err(CliError::Usage("a semigroup needs exactly one of gens and gaps".into())),
    }
}

/// The `numsgp` subcommand: a report as JSON and as text.
pub fn numsgp_from_strings(group: &str, gens: Option<&str>, gaps: Option<&str>, opts: &Options) -> Result<(Value, String)> {
    let split = |s: &str| s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect::<Vec<_>>();
    let decl = SemigroupDecl { group: parse_orders(group)?, gens: gens.map(split), gaps: gaps.map(split) };
    let s = semigroup(&decl)?;
    let r = s.report(opts.field.characteristic());
    Ok((serde_json::to_value(&r).expect("serializes"), r.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_from_strings() {
        let (j, text) = numsgp_from_strings("2,2", Some("1:00,1:10,1:01"), None, &Options::default()).unwrap();
        assert_eq!(j["frobenius"], 1);
        assert!(text.contains("frobenius      1"));
        let p2 = Options { field: FieldSpec::Prime(2), ..Options::default() };
        let (j, _) = numsgp_from_strings("2,2", Some("1:00,1:10,1:01"), None, &p2).unwrap();
        assert_eq!(j["reduced"], false);
        assert!(numsgp_from_strings("2,2", None, None, &Options::default()).is_err());
        assert!(numsgp_from_strings("2,x", Some("1:00"), None, &Options::default()).is_err());
    }

    #[test]
    fn jobs_run_and_cache() {
        let text = r#"
[ring.A]
vars = ["x0", "x1"]
[ring.B]
vars = ["y0", "y1", "y2"]
[module.R]
a = "A"
b = "B"
[module.omega]
a = "A"
b = "B"
shift = 1
[semigroup.s]
group = [3]
gaps = ["0:1", "0:2", "1:1"]

[[job]]
name = "gw"
kind = "segre-report"
a = "A"
b = "B"
shifts = [0, 3]
expect = { gorenstein = false, a = -3, cm = [true, false] }

[[job]]
name = "res"
kind = "resolve"
module = "omega"
window = 3
expect = { ranks = [2, 3, 6] }

[[job]]
name = "q"
kind = "endo-quiver"
modules = ["R", "omega"]
window = 3
expect = { arrows = [["R", "omega", 2], ["omega", "R", 3]] }

[[job]]
name = "sg"
kind = "numsgp"
semigroup = "s"
expect = { frobenius = 1, gorenstein = true }
"#;
        let config = Config::parse(text).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let mut s = Session::new(&config, Options::default(), cache.clone());
        let first: Vec<JobOutcome> = config.job.iter().map(|j| run_job(&mut s, j).unwrap()).collect();
        for o in &first {
            assert!(o.passed, "{}: {}", o.name, o.text);
        }
        let mut again = Session::new(&config, Options::default(), cache);
        let second: Vec<JobOutcome> = config.job.iter().map(|j| run_job(&mut again, j).unwrap()).collect();
        assert_eq!(first, second);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);
    }
}
