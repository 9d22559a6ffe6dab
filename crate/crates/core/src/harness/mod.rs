//! Verification campaigns: run the known structural results for the model
//! over a corpus of (seed graph, sequence, step) instances and report a
//! verdict per check.

mod checks;

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ilm::{generate, snapshot, Limits};
use crate::io::fmt_float;
use crate::named;
use crate::params::{DEFAULT_COLORING_BUDGET, DEFAULT_DOMINATION_CAP};
use crate::sequence::Sequence;
use crate::structure::HamiltonOptions;

/// Stable check identifiers, in campaign order.
pub const THEOREM_IDS: &[&str] = &[
    "op-edge-recurrence",
    "thm-density",
    "thm-even",
    "thm-chrom",
    "lem-chi+1",
    "lem-radius3",
    "thm-dom3",
    "thm-dom2-class",
    "lem-partition-pair",
    "lem-lat-disconnect",
    "thm-diam3",
    "thm-specgap",
    "lem-mix",
    "lem-cluster-lt",
    "lem-cluster-lat",
    "thm-cluster-boundedgap",
    "thm-hamilton",
    "lem-complement-dirac",
    "lem-paired-matching",
    "thm-zeta-star",
    "thm-induced-universal",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
    RecordedOnly,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
            Verdict::RecordedOnly => "recorded-only",
        }
    }

    pub fn from_check(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Enough to rebuild the instance: `ILM_t(graph, sequence)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub graph: String,
    pub sequence: Option<String>,
    pub t: Option<usize>,
    /// Extra operation applied to `ILM_t`, such as `LT` or `LAT`.
    pub op: Option<String>,
}

impl Instance {
    pub fn new(graph: &str, sequence: Option<&Sequence>, t: Option<usize>) -> Instance {
        Instance {
            graph: graph.to_string(),
            sequence: sequence.map(Sequence::to_string),
            t,
            op: None,
        }
    }

    pub fn with_op(mut self, op: &str) -> Instance {
        self.op = Some(op.to_string());
        self
    }

    /// Rebuilds `ILM_t(graph, sequence)`, then applies `op` when present.
    pub fn replay(&self, limits: &Limits) -> Result<Graph> {
        let g0 = named::parse(&self.graph)?;
        let g = match (&self.sequence, self.t) {
            (Some(s), Some(t)) => generate(&g0, &Sequence::parse(s)?, t, limits)?.0,
            (None, None | Some(0)) => g0,
            _ => return Err(Error::usage("instance needs both a sequence and a step")),
        };
        match self.op.as_deref() {
            None => Ok(g),
            Some("LT") => crate::ilm::lt_step(&g),
            Some("LAT") => crate::ilm::lat_step(&g),
            Some(other) => Err(Error::usage(format!("unknown instance operation {other:?}"))),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G={}", self.graph)?;
        if let Some(s) = &self.sequence {
            write!(f, " S={s}")?;
        }
        if let Some(t) = self.t {
            write!(f, " t={t}")?;
        }
        if let Some(op) = &self.op {
            write!(f, " op={op}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub instance: Instance,
    pub measured: String,
    pub expected: String,
    pub verdict: Verdict,
    /// Counterexample or context for anything other than a plain pass.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl TheoremReport {
    pub fn new(theorem: &str, instance: Instance, measured: impl Into<String>, expected: impl Into<String>, verdict: Verdict) -> Self {
        TheoremReport {
            theorem: theorem.to_string(),
            instance,
            measured: measured.into(),
            expected: expected.into(),
            verdict,
            detail: None,
            runtime_ms: None,
        }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// Size caps and solver budgets applied by every check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    pub max_vertices: usize,
    pub spectral_max_vertices: usize,
    /// One extra eigensolve at this order checks the residual bound.
    pub residual_check_vertices: usize,
    pub coloring_max_vertices: usize,
    pub coloring_budget: u64,
    pub domination_max_vertices: usize,
    pub exact_domination_max_vertices: usize,
    pub domination_cap: usize,
    pub mixing_max_vertices: usize,
    pub mixing_samples: usize,
    pub clustering_max_vertices: usize,
    pub lemma_max_vertices: usize,
    pub hamilton_max_vertices: usize,
    pub hamilton: HamiltonOptions,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vertices: 1024,
            spectral_max_vertices: 1024,
            residual_check_vertices: 1024,
            coloring_max_vertices: 40,
            coloring_budget: DEFAULT_COLORING_BUDGET,
            domination_max_vertices: 256,
            exact_domination_max_vertices: 64,
            domination_cap: DEFAULT_DOMINATION_CAP,
            mixing_max_vertices: 1024,
            mixing_samples: 200,
            clustering_max_vertices: 512,
            lemma_max_vertices: 256,
            hamilton_max_vertices: 1024,
            hamilton: HamiltonOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    /// Graph names accepted by [`named::parse`], including seeded `G(n,p,seed)`.
    pub graphs: Vec<String>,
    pub sequences: Vec<String>,
    /// Largest step considered; instances stop earlier at `caps.max_vertices`.
    pub max_steps: usize,
    pub seed: u64,
    pub caps: Caps,
    /// Wall-clock per instance; off by default because it breaks
    /// byte-identical output.
    pub record_runtime: bool,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec::builtin()
    }
}

impl CorpusSpec {
    pub fn builtin() -> CorpusSpec {
        let graphs = [
            "K1", "K2", "2K1", "C4", "C5", "P4", "K_{1,3}", "K2+K3", "Petersen", "K1+P4", "G(8,0.4,11)", "G(12,0.3,5)",
        ];
        let sequences = ["(1)*", "(0)*", "(01)*", "(10)*", "1(100)*", "00(1)*", "0(1)*", "(011)*"];
        CorpusSpec {
            graphs: graphs.iter().map(|s| s.to_string()).collect(),
            sequences: sequences.iter().map(|s| s.to_string()).collect(),
            max_steps: 10,
            seed: 20_240_601,
            caps: Caps::default(),
            record_runtime: false,
        }
    }

    pub fn from_json(text: &str) -> Result<CorpusSpec> {
        let spec: CorpusSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.graphs {
            named::parse(g)?;
        }
        for s in &self.sequences {
            let seq = Sequence::parse(s)?;
            if seq.tail().is_none() {
                return Err(Error::usage(format!("corpus sequence {s} must be infinite")));
            }
        }
        if self.caps.max_vertices == 0 {
            return Err(Error::usage("max_vertices must be positive"));
        }
        Ok(())
    }
}

/// `ILM_0 ..= ILM_T` for one seed and sequence, with `T` the last step that
/// fits `max_vertices`.
pub(crate) struct Run {
    pub name: String,
    pub g0: Graph,
    pub seq: Sequence,
    pub snaps: Vec<Graph>,
}

impl Run {
    pub fn build(name: &str, seq: &Sequence, max_steps: usize, max_vertices: usize) -> Result<Run> {
        let g0 = named::parse(name)?;
        let steps = (0..=max_steps)
            .take_while(|&t| g0.n().checked_shl(t as u32).is_some_and(|n| n <= max_vertices))
            .last()
            .unwrap_or(0);
        let (top, _) = generate(&g0, seq, steps, &Limits { max_vertices })?;
        let snaps = (0..=steps).map(|t| snapshot(&top, t)).collect::<Result<Vec<_>>>()?;
        Ok(Run {
            name: name.to_string(),
            g0,
            seq: seq.clone(),
            snaps,
        })
    }

    pub fn instance(&self, t: usize) -> Instance {
        Instance::new(&self.name, Some(&self.seq), Some(t))
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<TheoremReport> + Send + Sync + 'a>;

pub fn resolve_theorems(list: &str) -> Result<Vec<String>> {
    if list.trim() == "all" {
        return Ok(THEOREM_IDS.iter().map(|s| s.to_string()).collect());
    }
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|id| {
            THEOREM_IDS
                .contains(&id)
                .then(|| id.to_string())
                .ok_or_else(|| Error::usage(format!("unknown theorem id {id:?}")))
        })
        .collect()
}

/// Runs every requested check on the corpus. Jobs run on the rayon pool and
/// are merged in submission order; a panicking job becomes a `fail` report.
pub fn run_campaign(corpus: &CorpusSpec, theorems: &[String]) -> Result<Vec<TheoremReport>> {
    corpus.validate()?;
    for id in theorems {
        if !THEOREM_IDS.contains(&id.as_str()) {
            return Err(Error::usage(format!("unknown theorem id {id:?}")));
        }
    }
    let ctx = checks::Ctx::new(corpus)?;
    let mut jobs: Vec<(String, Instance, Job)> = Vec::new();
    for id in theorems {
        jobs.extend(checks::jobs(&ctx, id));
    }
    let record = corpus.record_runtime;
    let reports = jobs
        .par_iter()
        .map(|(id, inst, job)| {
            let start = Instant::now();
            let mut out = match catch_unwind(AssertUnwindSafe(job)) {
                Ok(r) => r,
                Err(panic) => {
                    let msg = panic
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "panic".to_string());
                    vec![TheoremReport::new(id, inst.clone(), "panic", "completion", Verdict::Fail).detail(msg)]
                }
            };
            if record {
                let ms = start.elapsed().as_secs_f64() * 1e3;
                for r in &mut out {
                    r.runtime_ms = Some(ms);
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(reports)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::usage(format!("unknown format {other:?}; expected json, csv or text"))),
        }
    }
}

pub const CSV_HEADER: [&str; 6] = ["theorem", "instance", "measured", "expected", "verdict", "runtime_ms"];

pub fn export(reports: &[TheoremReport], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            // Round-tripping through Value sorts object keys.
            let v = serde_json::to_value(reports)?;
            let mut s = serde_json::to_string_pretty(&v)?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(csv_error)?;
            for r in reports {
                let runtime = r.runtime_ms.map(fmt_float).unwrap_or_default();
                w.write_record([
                    r.theorem.as_str(),
                    &r.instance.to_string(),
                    &r.measured,
                    &r.expected,
                    r.verdict.as_str(),
                    &runtime,
                ])
                .map_err(csv_error)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                s.push_str(&format!(
                    "[{}] {} {}: measured {}, expected {}",
                    r.verdict, r.theorem, r.instance, r.measured, r.expected
                ));
                if let Some(d) = &r.detail {
                    s.push_str(&format!(" ({d})"));
                }
                s.push('\n');
            }
            let s_ = summary(reports);
            s.push_str(&format!(
                "not-applicable {}, recorded-only {}, fail {}\n",
                s_.not_applicable, s_.recorded_only, s_.fail
            ));
            s.push_str(&format!("PASS {}/{}\n", s_.pass, s_.pass + s_.fail));
            Ok(s.into_bytes())
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn parse_json_report(bytes: &[u8]) -> Result<Vec<TheoremReport>> {
    Ok(serde_json::from_slice(bytes)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub recorded_only: usize,
}

pub fn summary(reports: &[TheoremReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.verdict {
            Verdict::Pass => s.pass += 1,
            Verdict::Fail => s.fail += 1,
            Verdict::NotApplicable => s.not_applicable += 1,
            Verdict::RecordedOnly => s.recorded_only += 1,
        }
    }
    s
}

/// Plot-ready series per seed and sequence: density, clustering and gap
/// against `t`.
pub fn plot_series(corpus: &CorpusSpec) -> Result<Vec<(String, String)>> {
    checks::plot_series(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> CorpusSpec {
        CorpusSpec {
            graphs: vec!["C4".into(), "K1".into()],
            sequences: vec!["(01)*".into(), "(1)*".into()],
            max_steps: 4,
            ..CorpusSpec::builtin()
        }
    }

    #[test]
    fn ids_resolve() {
        assert_eq!(resolve_theorems("all").unwrap().len(), THEOREM_IDS.len());
        assert_eq!(resolve_theorems("thm-even, lem-mix").unwrap(), vec!["thm-even", "lem-mix"]);
        assert!(resolve_theorems("thm-nope").is_err());
    }

    #[test]
    fn exports_are_stable() {
        let reports = run_campaign(&tiny(), &resolve_theorems("op-edge-recurrence,thm-dom3").unwrap()).unwrap();
        assert!(!reports.is_empty());
        let json = export(&reports, Format::Json).unwrap();
        assert_eq!(parse_json_report(&json).unwrap(), reports);
        let csv = String::from_utf8(export(&reports, Format::Csv).unwrap()).unwrap();
        assert!(csv.starts_with("theorem,instance,measured,expected,verdict,runtime_ms\n"));
        let text = String::from_utf8(export(&reports, Format::Text).unwrap()).unwrap();
        let last = text.lines().last().unwrap();
        assert!(last.starts_with("PASS "), "{last}");
        assert!("xml".parse::<Format>().is_err());
        let again = run_campaign(&tiny(), &resolve_theorems("op-edge-recurrence,thm-dom3").unwrap()).unwrap();
        assert_eq!(export(&again, Format::Json).unwrap(), json);
    }

    #[test]
    fn instances_replay() {
        let inst = Instance::new("C4", Some(&Sequence::parse("(01)*").unwrap()), Some(3)).with_op("LT");
        let g = inst.replay(&Limits::default()).unwrap();
        assert_eq!(g.n(), 64);
        assert_eq!(inst.to_string(), "G=C4 S=(01)* t=3 op=LT");
    }

    #[test]
    fn corpus_json_round_trips() {
        let spec = CorpusSpec::builtin();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(CorpusSpec::from_json(&text).unwrap(), spec);
        let partial = CorpusSpec::from_json(r#"{"graphs": ["C5"], "max_steps": 3}"#).unwrap();
        assert_eq!(partial.sequences, CorpusSpec::builtin().sequences);
        assert!(CorpusSpec::from_json(r#"{"sequences": ["0101"]}"#).is_err());
    }
}
