use super::{CliError, Result};
use crate::hilbert::WeightedRingSpec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub ring: BTreeMap<String, RingDecl>,
    #[serde(default)]
    pub semigroup: BTreeMap<String, SemigroupDecl>,
    #[serde(default)]
    pub module: BTreeMap<String, ModuleDecl>,
    #[serde(default)]
    pub job: Vec<JobDecl>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RingDecl {
    pub vars: Vec<String>,
    /// Positive integer weights, all 1 when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
}

impl RingDecl {
    pub fn spec(&self) -> Result<WeightedRingSpec> {
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let weights = self.weights.clone().unwrap_or_else(|| vec![1; names.len()]);
        if weights.len() != names.len() {
            return Err(CliError::Usage(format!("{} variables but {} weights", names.len(), weights.len())));
        }
        WeightedRingSpec::weighted(&names, &weights).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SemigroupDecl {
    /// Cyclic orders of the group `L`; empty for classical semigroups.
    #[serde(default)]
    pub group: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gens: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaps: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleKind {
    /// `M_i = A(i) # B` over `A # B`.
    #[default]
    Diagonal,
    /// `k`-th syzygy of another declared module.
    Syzygy,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModuleDecl {
    #[serde(default)]
    pub kind: ModuleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub of: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum JobKind {
    SegreReport,
    Numsgp,
    Resolve,
    SequenceCheck,
    EndoQuiver,
    Fold,
    Kronecker,
    ReproducePaper,
}

impl JobKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            JobKind::SegreReport => "segre-report",
            JobKind::Numsgp => "numsgp",
            JobKind::Resolve => "resolve",
            JobKind::SequenceCheck => "sequence-check",
            JobKind::EndoQuiver => "endo-quiver",
            JobKind::Fold => "fold",
            JobKind::Kronecker => "kronecker",
            JobKind::ReproducePaper => "reproduce-paper",
        }
    }
}

/// Asserted values; each job kind reads the keys that apply to it.
#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gorenstein: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cm: Option<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<bool>,
    /// Ranks of the free modules of a resolution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<usize>>,
    /// Every arrow bundle as `[source, target, count]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<(String, String, usize)>>,
    /// Sorted bundle sizes of a folded quiver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundles: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct JobDecl {
    pub name: String,
    pub kind: JobKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modules: Option<Vec<String>>,
    /// Vertices divided out for stable quivers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<Vec<String>>,
    /// Built-in sequence names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequences: Option<Vec<String>>,
    /// Term of each sequence read by `fold`, counted from the left.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    /// `d3` or `d4`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default)]
    pub expect: Expect,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn need<'a>(v: &'a Option<String>, what: &str, job: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("job {job} needs `{what}`")))
}

impl Config {
    /// Parses and checks that every reference resolves.
    pub fn parse(text: &str) -> Result<Self> {
        let config: Config = toml::from_str(text).map_err(|e| {
            let (line, col) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            CliError::Parse { line, col, msg: e.message().to_string() }
        })?;
        config.validate()?;
        Ok(config)
    }

    fn ring_ref(&self, name: &str) -> Result<&RingDecl> {
        self.ring.get(name).ok_or_else(|| CliError::Reference(format!("ring {name}")))
    }

    fn module_ref(&self, name: &str) -> Result<&ModuleDecl> {
        self.module.get(name).ok_or_else(|| CliError::Reference(format!("module {name}")))
    }

    /// The pair of rings a module lives over, following syzygy chains.
    pub fn module_rings(&self, name: &str) -> Result<(String, String)> {
        let mut cur = name;
        for _ in 0..=self.module.len() {
            let m = self.module_ref(cur)?;
            match m.kind {
                ModuleKind::Diagonal => {
                    let a = need(&m.a, "a", cur)?;
                    let b = need(&m.b, "b", cur)?;
                    return Ok((a.to_string(), b.to_string()));
                }
                ModuleKind::Syzygy => cur = need(&m.of, "of", cur)?,
            }
        }
        Err(CliError::Reference(format!("module {name} refers to itself")))
    }

    fn validate(&self) -> Result<()> {
        for decl in self.ring.values() {
            decl.spec()?;
        }
        for (name, m) in &self.module {
            match m.kind {
                ModuleKind::Diagonal => {
                    self.ring_ref(need(&m.a, "a", name)?)?;
                    self.ring_ref(need(&m.b, "b", name)?)?;
                }
                ModuleKind::Syzygy => {
                    self.module_ref(need(&m.of, "of", name)?)?;
                    if m.k.unwrap_or(1) == 0 {
                        return Err(CliError::Usage(format!("module {name}: k must be positive")));
                    }
                }
            }
            self.module_rings(name)?;
        }
        let mut seen = std::collections::BTreeSet::new();
        for job in &self.job {
            if !seen.insert(job.name.as_str()) {
                return Err(CliError::Usage(format!("job name {} used twice", job.name)));
            }
            if job.name.is_empty() || job.name.contains(['/', '\\']) || job.name.starts_with('.') {
                return Err(CliError::Usage(format!("job name {:?} is not a plain file name", job.name)));
            }
            for r in [&job.a, &job.b].into_iter().flatten() {
                self.ring_ref(r)?;
            }
            if let Some(s) = &job.semigroup {
                if !self.semigroup.contains_key(s) {
                    return Err(CliError::Reference(format!("semigroup {s}")));
                }
            }
            let mods = job.module.iter().chain(job.modules.iter().flatten()).chain(job.free.iter().flatten());
            for m in mods {
                self.module_ref(m)?;
            }
            if let Some(w) = job.window {
                if !(1..=12).contains(&w) {
                    return Err(CliError::Usage(format!("job {}: window {w} outside 1..=12", job.name)));
                }
            }
            if let Some(d) = job.depth {
                if !(1..=6).contains(&d) {
                    return Err(CliError::Usage(format!("job {}: depth {d} outside 1..=6", job.name)));
                }
            }
            if let Some(f) = &job.field {
                super::parse_field(f).map_err(CliError::Usage)?;
            }
        }
        Ok(())
    }

    /// Everything a job depends on, as JSON; the cache key is derived from it.
    pub fn inputs_of(&self, job: &JobDecl) -> serde_json::Value {
        let mut rings = BTreeMap::new();
        let mut modules = BTreeMap::new();
        for r in [&job.a, &job.b].into_iter().flatten() {
            if let Some(d) = self.ring.get(r) {
                rings.insert(r.clone(), d.clone());
            }
        }
        let mut stack: Vec<String> =
            job.module.iter().chain(job.modules.iter().flatten()).chain(job.free.iter().flatten()).cloned().collect();
        while let Some(m) = stack.pop() {
            let Some(d) = self.module.get(&m) else { continue };
            for r in [&d.a, &d.b].into_iter().flatten() {
                if let Some(rd) = self.ring.get(r) {
                    rings.insert(r.clone(), rd.clone());
                }
            }
            if let Some(of) = &d.of {
                stack.push(of.clone());
            }
            modules.insert(m, d.clone());
        }
        let semigroup = job.semigroup.as_ref().and_then(|s| self.semigroup.get(s));
        serde_json::json!({"job": job, "rings": rings, "modules": modules, "semigroup": semigroup})
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
[ring.A]
vars = ["x0", "x1"]

[ring.B]
vars = ["y0", "y1", "y2"]

[module.omega]
a = "A"
b = "B"
shift = 1

[module.omega2]
kind = "syzygy"
of = "omega"
k = 2

[[job]]
name = "q"
kind = "endo-quiver"
modules = ["omega", "omega2"]
expect = { arrows = [["omega", "omega2", 3]] }
"#;

    #[test]
    fn parses_and_resolves() {
        let c = Config::parse(GOOD).unwrap();
        assert_eq!(c.job[0].kind, JobKind::EndoQuiver);
        assert_eq!(c.module_rings("omega2").unwrap(), ("A".to_string(), "B".to_string()));
        assert_eq!(c.job[0].expect.arrows.as_ref().unwrap()[0].2, 3);
        let inputs = c.inputs_of(&c.job[0]);
        assert!(inputs["modules"]["omega"].is_object());
        assert!(inputs["rings"]["B"].is_object());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let bad = "[ring.A]\nvars = [\"x\"\n";
        match Config::parse(bad) {
            Err(CliError::Parse { line, .. }) => assert!(line >= 2),
            other => panic!("{other:?}"),
        }
        match Config::parse("[[job]]\nname = \"a\"\nkind = \"explode\"\n") {
            Err(CliError::Parse { line, col, .. }) => assert_eq!((line, col), (3, 8)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unresolved_references() {
        let t = GOOD.replace("of = \"omega\"", "of = \"nope\"");
        assert!(matches!(Config::parse(&t), Err(CliError::Reference(_))));
        let t = GOOD.replace("b = \"B\"", "b = \"C\"");
        assert!(matches!(Config::parse(&t), Err(CliError::Reference(_))));
        let t = GOOD.replace("modules = [\"omega\", \"omega2\"]", "modules = [\"omega3\"]");
        assert!(matches!(Config::parse(&t), Err(CliError::Reference(_))));
        let t = GOOD.replace("of = \"omega\"", "of = \"omega2\"");
        assert!(matches!(Config::parse(&t), Err(CliError::Reference(_))));
    }

    #[test]
    fn option_ranges() {
        let t = format!("{GOOD}window = 40\n");
        assert!(matches!(Config::parse(&t), Err(CliError::Usage(_))));
        let t = format!("{GOOD}field = \"prime:9\"\n");
        assert!(matches!(Config::parse(&t), Err(CliError::Usage(_))));
    }
}
