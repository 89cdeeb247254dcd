//! Subcommand implementations. Each returns its exit code and output
//! instead of printing, so the binary and the tests share one code path.
//!
//! Exit codes: 0 ok, 1 parse, 2 invalid spec or structure, 3 horizon or
//! search bounds, 4 certificate violation, 5 resource.

use std::fs;
use std::path::{Path, PathBuf};

use monounion::exec::{with_threads, Exec};
use monounion::fixtures::{search_fixtures, SearchParams, SurvivorSummary};
use monounion::growth::enumerate_balls;
use monounion::pipeline::{analyze, certify_growth, run_validation, Config, FailureKind, PipelineError};
use monounion::{Engine, Rational, SemigroupSpec};

use crate::format::{
    balls_csv, parse_spec, spec_digest, spec_to_doc, to_json, AnalysisDoc, CertificateDoc, ValidationDoc,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_HORIZON: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;
pub const EXIT_RESOURCE: i32 = 5;

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub core: Config,
    /// Worker threads; 1 runs the sequential path, 0 uses every core.
    pub threads: usize,
    /// Machine-readable document (report, analysis or certificate).
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn new() -> Self {
        RunConfig {
            threads: 1,
            ..Default::default()
        }
    }

    fn core(&self) -> Config {
        Config {
            exec: if self.threads == 1 {
                Exec::Sequential
            } else {
                Exec::Parallel
            },
            ..self.core
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CmdOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub document: Option<String>,
    pub csv: Option<String>,
}

impl CmdOutput {
    fn fail(code: i32, msg: impl Into<String>) -> Self {
        CmdOutput {
            code,
            stderr: msg.into(),
            ..Default::default()
        }
    }

    fn write_files(mut self, cfg: &RunConfig) -> Self {
        let targets = [(&cfg.output, self.document.clone()), (&cfg.csv, self.csv.clone())];
        for (path, body) in targets {
            let (Some(p), Some(b)) = (path, body) else { continue };
            if let Err(e) = fs::write(p, b) {
                self.stderr.push_str(&format!("cannot write {}: {e}\n", p.display()));
                if self.code == EXIT_OK {
                    self.code = EXIT_RESOURCE;
                }
            }
        }
        self
    }
}

fn exit_code(kind: FailureKind) -> i32 {
    match kind {
        FailureKind::Invalid => EXIT_INVALID,
        FailureKind::Horizon => EXIT_HORIZON,
        FailureKind::Certificate => EXIT_CERTIFICATE,
        FailureKind::Resource => EXIT_RESOURCE,
    }
}

fn frac(r: Rational) -> String {
    format!("{r} ({:.3})", r.to_f64())
}

struct Loaded {
    spec: SemigroupSpec,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded, CmdOutput> {
    let bytes =
        fs::read(path).map_err(|e| CmdOutput::fail(EXIT_PARSE, format!("cannot read {}: {e}\n", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CmdOutput::fail(EXIT_PARSE, format!("{} is not UTF-8\n", path.display())))?;
    let spec = parse_spec(&text).map_err(|e| CmdOutput::fail(EXIT_PARSE, format!("{}: {e}\n", path.display())))?;
    Ok(Loaded {
        spec,
        digest: spec_digest(&bytes),
    })
}

const MAX_LISTED: usize = 10;

fn describe_failure(spec: &SemigroupSpec, err: &PipelineError) -> String {
    let mut out = format!("error: {err}\n");
    match err {
        PipelineError::Invalid(r) => {
            for v in r.associativity_violations.iter().take(MAX_LISTED) {
                out.push_str(&format!(
                    "  associativity fails at ({}, {}, {}): left {} vs right {}\n",
                    spec.named(v.u),
                    spec.named(v.v),
                    spec.named(v.w),
                    spec.named(v.left),
                    spec.named(v.right)
                ));
            }
            let rest = r.associativity_violations.len().saturating_sub(MAX_LISTED);
            if rest > 0 {
                out.push_str(&format!("  ... and {rest} more\n"));
            }
        }
        PipelineError::Structural(vs) | PipelineError::Bounds(vs) => {
            for v in vs {
                out.push_str(&format!("  {}\n", v.describe(spec)));
            }
            if matches!(err, PipelineError::Bounds(_)) {
                out.push_str("  hint: raise --t-max/--q-max or --horizon\n");
            }
        }
        PipelineError::Weights(vs) => {
            for v in vs {
                out.push_str(&format!("  {v:?}\n"));
            }
        }
        PipelineError::KWindow(vs) => {
            for v in vs {
                out.push_str(&format!(
                    "  defect {} at ({}, {}, i = {})\n",
                    v.defect,
                    spec.name(v.x),
                    spec.name(v.y),
                    v.i
                ));
            }
        }
        PipelineError::Core(monounion::Error::HorizonExhausted { .. }) => {
            out.push_str("  hint: raise --horizon\n");
        }
        PipelineError::Core(_) => {}
    }
    out
}

fn validation_summary(spec: &SemigroupSpec, r: &monounion::validate::ValidationReport) -> String {
    let mut s = format!(
        "window {} depth bound {}: {} associativity violations, {} monotonicity violations, {} reduction failures\n",
        r.window,
        r.depth_bound,
        r.associativity_violations.len(),
        r.monotonicity_violations.len(),
        r.depth_failures.len()
    );
    if let Some(v) = r.associativity_violations.first() {
        s.push_str(&format!(
            "first witness ({}, {}, {}): left {} vs right {}\n",
            spec.named(v.u),
            spec.named(v.v),
            spec.named(v.w),
            spec.named(v.left),
            spec.named(v.right)
        ));
    }
    if let Some(v) = r.monotonicity_violations.first() {
        s.push_str(&format!(
            "first monotonicity failure: {}^{}·{}^{} = {}^{}\n",
            spec.name(v.x),
            v.i,
            spec.name(v.y),
            v.j,
            spec.name(v.x),
            v.k
        ));
    }
    s.push_str(if r.accepted() { "accepted\n" } else { "rejected\n" });
    s
}

pub fn cmd_validate(path: &Path, cfg: &RunConfig) -> CmdOutput {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(out) => return out,
    };
    let core = cfg.core();
    let engine = core.engine(loaded.spec.clone());
    let report = with_threads(cfg.threads, || run_validation(&engine, &core));
    let doc = ValidationDoc::new(&loaded.spec, loaded.digest, &report);
    CmdOutput {
        code: if report.accepted() { EXIT_OK } else { EXIT_INVALID },
        stdout: validation_summary(&loaded.spec, &report),
        document: Some(to_json(&doc)),
        ..Default::default()
    }
    .write_files(cfg)
}

fn gate(engine: &Engine, core: &Config, spec: &SemigroupSpec) -> Result<(), CmdOutput> {
    let report = run_validation(engine, core);
    if report.accepted() {
        return Ok(());
    }
    let mut out = CmdOutput::fail(EXIT_INVALID, "spec rejected by validation\n");
    out.stdout = validation_summary(spec, &report);
    Err(out)
}

pub fn cmd_analyze(path: &Path, cfg: &RunConfig) -> CmdOutput {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(out) => return out,
    };
    let spec = &loaded.spec;
    let core = cfg.core();
    let engine = core.engine(spec.clone());
    let result = with_threads(cfg.threads, || {
        gate(&engine, &core, spec)?;
        analyze(&engine, &core).map_err(|e| CmdOutput::fail(exit_code(e.kind()), describe_failure(spec, &e)))
    });
    let analysis = match result {
        Ok(a) => a,
        Err(out) => return out,
    };
    let mut stdout = String::new();
    for (&(y, z), e) in &analysis.graph.edges {
        stdout.push_str(&format!(
            "edge {} -> {}: M = {}  witness {}^{}·{}^{} = {}^{}\n",
            spec.name(y),
            spec.name(z),
            frac(e.m),
            spec.name(z),
            e.witness.t,
            spec.name(y),
            e.witness.q,
            spec.name(z),
            e.witness.s
        ));
    }
    let c = &analysis.condensation;
    let names = |ci: usize| -> String {
        let members: Vec<&str> = c.classes[ci].iter().map(|&g| spec.name(g)).collect();
        format!("{{{}}}", members.join(","))
    };
    for &(a, b) in &c.dag_edges {
        stdout.push_str(&format!("class {} -> {}\n", names(a), names(b)));
    }
    let sinks: Vec<String> = c.sinks.iter().map(|&s| names(s)).collect();
    stdout.push_str(&format!("sinks: {}\n", sinks.join(" ")));
    let weights: Vec<String> = spec
        .gens()
        .map(|g| format!("{}={}", spec.name(g), analysis.weights.get(g)))
        .collect();
    stdout.push_str(&format!("weights: {}\n", weights.join(" ")));
    CmdOutput {
        code: EXIT_OK,
        stdout,
        document: Some(to_json(&AnalysisDoc::new(spec, loaded.digest, &analysis))),
        ..Default::default()
    }
    .write_files(cfg)
}

pub fn cmd_certify(path: &Path, cfg: &RunConfig) -> CmdOutput {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(out) => return out,
    };
    let spec = &loaded.spec;
    let core = cfg.core();
    let engine = core.engine(spec.clone());
    let result = with_threads(cfg.threads, || {
        gate(&engine, &core, spec)?;
        let fail = |e: PipelineError| CmdOutput::fail(exit_code(e.kind()), describe_failure(spec, &e));
        let analysis = analyze(&engine, &core).map_err(fail)?;
        let cert = certify_growth(&engine, &core, &analysis).map_err(fail)?;
        Ok((analysis, cert))
    });
    let (analysis, cert) = match result {
        Ok(v) => v,
        Err(out) => return out,
    };
    let doc = CertificateDoc::new(spec, loaded.digest, &core, &analysis, &cert);
    let rows: Vec<(u64, u64, Option<u64>)> = cert.balls.iter().map(|r| (r.m, r.count, Some(r.bound))).collect();
    let mut stdout = format!(
        "K = {}\nL = {}\nL·K = {}\n",
        cert.k.k,
        frac(cert.l),
        frac(cert.bound_coefficient)
    );
    for r in &cert.balls {
        stdout.push_str(&format!(
            "m = {:>3}  |J(m)| = {:>6}  bound = {:>6}\n",
            r.m, r.count, r.bound
        ));
    }
    stdout.push_str("linear growth certified\n");
    CmdOutput {
        code: EXIT_OK,
        stdout,
        document: Some(to_json(&doc)),
        csv: Some(balls_csv(&rows)),
        ..Default::default()
    }
    .write_files(cfg)
}

/// Ball counts only, no certificate machinery.
pub fn cmd_growth(path: &Path, max_len: u64, cfg: &RunConfig) -> CmdOutput {
    let loaded = match load(path) {
        Ok(l) => l,
        Err(out) => return out,
    };
    let core = cfg.core();
    let engine = core.engine(loaded.spec.clone());
    let ball = with_threads(cfg.threads, || {
        enumerate_balls(&engine, max_len.max(1), core.frontier_cap, core.exec)
    });
    match ball {
        Ok(ball) => {
            let counts: Vec<String> = ball.counts.iter().map(|c| c.to_string()).collect();
            let rows: Vec<(u64, u64, Option<u64>)> = ball
                .counts
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as u64 + 1, c as u64, None))
                .collect();
            CmdOutput {
                code: EXIT_OK,
                stdout: format!("{}\n", counts.join(",")),
                csv: Some(balls_csv(&rows)),
                ..Default::default()
            }
            .write_files(cfg)
        }
        Err(e) => {
            let kind = PipelineError::from(e.clone()).kind();
            CmdOutput::fail(exit_code(kind), format!("error: {e}\n"))
        }
    }
}

pub fn cmd_search(params: &SearchParams, cfg: &RunConfig) -> CmdOutput {
    let exec = cfg.core().exec;
    let survivors = match with_threads(cfg.threads, || search_fixtures(params, exec)) {
        Ok(s) => s,
        Err(e) => {
            let kind = PipelineError::from(e.clone()).kind();
            let code = match e {
                monounion::Error::InvalidParameter(_) => EXIT_PARSE,
                _ => exit_code(kind),
            };
            return CmdOutput::fail(code, format!("error: {e}\n"));
        }
    };
    let mut stdout = format!("{} survivors up to renaming and reversal\n", survivors.len());
    let mut docs = Vec::new();
    for s in &survivors {
        let table: Vec<String> = s
            .spec
            .products()
            .into_iter()
            .map(|(x, y, e)| format!("{}{}={}", s.spec.name(x), s.spec.name(y), s.spec.named(e)))
            .collect();
        let status = match &s.summary {
            SurvivorSummary::Certified { d, k, l, .. } => {
                format!("certified d={d:?} K={k} L={}", frac(*l))
            }
            SurvivorSummary::Failed(msg) => format!("not certified: {msg}"),
        };
        stdout.push_str(&format!("{}  {status}\n", table.join(" ")));
        docs.push(spec_to_doc(&s.spec));
    }
    CmdOutput {
        code: EXIT_OK,
        stdout,
        document: Some(to_json(&docs)),
        ..Default::default()
    }
    .write_files(cfg)
}

/// Prints a built-in fixture as a spec document.
pub fn cmd_fixture(name: &str) -> CmdOutput {
    match monounion::fixtures::get_fixture(name) {
        Ok(f) => {
            let doc = to_json(&spec_to_doc(&f.spec));
            CmdOutput {
                code: EXIT_OK,
                stdout: doc.clone(),
                document: Some(doc),
                ..Default::default()
            }
        }
        Err(e) => CmdOutput::fail(EXIT_PARSE, format!("error: {e}\n")),
    }
}
