//! JSON documents for specs, validation reports, analyses and certificates.
//!
//! Every document carries `format: 1`. Rationals are always written as
//! integer numerator/denominator pairs.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use monounion::growth::GrowthCertificate;
use monounion::persistence::TrajectoryRecord;
use monounion::pipeline::{Analysis, Config};
use monounion::validate::ValidationReport;
use monounion::{Element, Gen, SemigroupSpec, SpecError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub left: String,
    pub right: String,
    pub result_gen: String,
    pub result_exp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub format: u32,
    pub generators: Vec<String>,
    pub products: Vec<ProductDoc>,
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("unknown generator `{0}` in products")]
    UnknownName(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

pub fn parse_spec(text: &str) -> Result<SemigroupSpec, ParseError> {
    let doc: SpecDoc = serde_json::from_str(text)?;
    if doc.format != FORMAT_VERSION {
        return Err(ParseError::Version(doc.format));
    }
    spec_from_doc(&doc)
}

pub fn spec_from_doc(doc: &SpecDoc) -> Result<SemigroupSpec, ParseError> {
    let lookup = |name: &str| {
        doc.generators
            .iter()
            .position(|g| g == name)
            .map(|i| Gen(i as u16))
            .ok_or_else(|| ParseError::UnknownName(name.to_string()))
    };
    let products = doc
        .products
        .iter()
        .map(|p| {
            Ok((
                lookup(&p.left)?,
                lookup(&p.right)?,
                Element {
                    gen: lookup(&p.result_gen)?,
                    exp: p.result_exp,
                },
            ))
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(SemigroupSpec::new(&doc.generators, &products)?)
}

pub fn spec_to_doc(spec: &SemigroupSpec) -> SpecDoc {
    SpecDoc {
        format: FORMAT_VERSION,
        generators: spec.names().to_vec(),
        products: spec
            .products()
            .into_iter()
            .map(|(x, y, e)| ProductDoc {
                left: spec.name(x).to_string(),
                right: spec.name(y).to_string(),
                result_gen: spec.name(e.gen).to_string(),
                result_exp: e.exp,
            })
            .collect(),
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn spec_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn el(spec: &SemigroupSpec, e: Element) -> String {
    spec.named(e).to_string()
}

#[derive(Debug, Serialize)]
pub struct AssocDoc {
    pub u: String,
    pub v: String,
    pub w: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Serialize)]
pub struct MonoDoc {
    pub x: String,
    pub y: String,
    pub i: u64,
    pub j: u64,
    pub k: u64,
}

#[derive(Debug, Serialize)]
pub struct DepthDoc {
    pub operands: Vec<String>,
    pub error: String,
}

#[derive(Debug, Serialize)]
pub struct ValidationDoc {
    pub format: u32,
    pub spec_digest: String,
    pub window: u64,
    pub depth_bound: u64,
    pub accepted: bool,
    pub associativity_violations: Vec<AssocDoc>,
    pub monotonicity_violations: Vec<MonoDoc>,
    pub depth_failures: Vec<DepthDoc>,
}

impl ValidationDoc {
    pub fn new(spec: &SemigroupSpec, digest: String, r: &ValidationReport) -> Self {
        ValidationDoc {
            format: FORMAT_VERSION,
            spec_digest: digest,
            window: r.window,
            depth_bound: r.depth_bound,
            accepted: r.accepted(),
            associativity_violations: r
                .associativity_violations
                .iter()
                .map(|v| AssocDoc {
                    u: el(spec, v.u),
                    v: el(spec, v.v),
                    w: el(spec, v.w),
                    left: el(spec, v.left),
                    right: el(spec, v.right),
                })
                .collect(),
            monotonicity_violations: r
                .monotonicity_violations
                .iter()
                .map(|v| MonoDoc {
                    x: spec.name(v.x).to_string(),
                    y: spec.name(v.y).to_string(),
                    i: v.i,
                    j: v.j,
                    k: v.k,
                })
                .collect(),
            depth_failures: r
                .depth_failures
                .iter()
                .map(|f| DepthDoc {
                    operands: f.operands.iter().map(|&e| el(spec, e)).collect(),
                    error: f.error.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub t: u64,
    pub q: u64,
    pub s: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub y: String,
    pub z: String,
    pub m_num: i128,
    pub m_den: i128,
    pub witness: WitnessDoc,
}

#[derive(Debug, Serialize)]
pub struct TargetDoc {
    pub z: String,
    pub i0: u64,
    pub n0: u64,
    pub r: u64,
    pub m_num: i128,
    pub m_den: i128,
    pub hits: usize,
}

#[derive(Debug, Serialize)]
pub struct PeriodDoc {
    pub start: u64,
    pub length: u64,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryDoc {
    pub x: String,
    pub y: String,
    pub horizon: u64,
    pub targets: Vec<TargetDoc>,
    pub period: Option<PeriodDoc>,
}

#[derive(Debug, Serialize)]
pub struct CondensationDoc {
    pub classes: Vec<Vec<String>>,
    pub dag_edges: Vec<[usize; 2]>,
    pub sinks: Vec<usize>,
    pub topo_order: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisDoc {
    pub format: u32,
    pub spec_digest: String,
    pub generators: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    pub condensation: CondensationDoc,
    pub weights: IndexMap<String, u64>,
    pub trajectories: Vec<TrajectoryDoc>,
}

pub fn edge_docs(spec: &SemigroupSpec, analysis: &Analysis) -> Vec<EdgeDoc> {
    analysis
        .graph
        .edges
        .iter()
        .map(|(&(y, z), e)| EdgeDoc {
            y: spec.name(y).to_string(),
            z: spec.name(z).to_string(),
            m_num: e.m.numer(),
            m_den: e.m.denom(),
            witness: WitnessDoc {
                t: e.witness.t,
                q: e.witness.q,
                s: e.witness.s,
            },
        })
        .collect()
}

pub fn weight_map(spec: &SemigroupSpec, d: &[u64]) -> IndexMap<String, u64> {
    spec.gens().map(|g| (spec.name(g).to_string(), d[g.index()])).collect()
}

fn trajectory_doc(spec: &SemigroupSpec, rec: &TrajectoryRecord) -> TrajectoryDoc {
    TrajectoryDoc {
        x: el(spec, rec.x),
        y: spec.name(rec.y).to_string(),
        horizon: rec.horizon,
        targets: rec
            .targets
            .iter()
            .map(|t| TargetDoc {
                z: spec.name(t.z).to_string(),
                i0: t.i0,
                n0: t.n0,
                r: t.r,
                m_num: t.m.numer(),
                m_den: t.m.denom(),
                hits: t.hits.len(),
            })
            .collect(),
        period: rec.period.map(|p| PeriodDoc {
            start: p.start,
            length: p.length,
        }),
    }
}

impl AnalysisDoc {
    pub fn new(spec: &SemigroupSpec, digest: String, a: &Analysis) -> Self {
        let c = &a.condensation;
        AnalysisDoc {
            format: FORMAT_VERSION,
            spec_digest: digest,
            generators: spec.names().to_vec(),
            edges: edge_docs(spec, a),
            condensation: CondensationDoc {
                classes: c
                    .classes
                    .iter()
                    .map(|cl| cl.iter().map(|&g| spec.name(g).to_string()).collect())
                    .collect(),
                dag_edges: c.dag_edges.iter().map(|&(a, b)| [a, b]).collect(),
                sinks: c.sinks.clone(),
                topo_order: c.topo_order.clone(),
            },
            weights: weight_map(spec, &a.weights.d),
            trajectories: a.trajectories.iter().map(|r| trajectory_doc(spec, r)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub window: u64,
    pub depth_bound: u64,
    pub horizon: u64,
    pub t_max: u64,
    pub q_max: u64,
    pub m_max: u64,
}

impl From<&Config> for ConfigDoc {
    fn from(c: &Config) -> Self {
        ConfigDoc {
            window: c.window,
            depth_bound: c.depth_bound,
            horizon: c.horizon,
            t_max: c.t_max,
            q_max: c.q_max,
            m_max: c.m_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectDoc {
    pub x: String,
    pub y: String,
    pub max_defect: i128,
    pub at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetBoundDoc {
    pub x: String,
    pub y: String,
    pub z: String,
    pub bound: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KDetailsDoc {
    pub defects: Vec<DefectDoc>,
    pub target_bounds: Vec<TargetBoundDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallDoc {
    pub m: u64,
    pub count: u64,
    pub bound: u64,
}

pub const VERDICT_CERTIFIED: &str = "linear-growth-certified";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub format: u32,
    pub spec_digest: String,
    pub generators: Vec<String>,
    pub config: ConfigDoc,
    pub edges: Vec<EdgeDoc>,
    pub weights: IndexMap<String, u64>,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "K_details")]
    pub k_details: KDetailsDoc,
    pub horizon_used: u64,
    #[serde(rename = "L_num")]
    pub l_num: i128,
    #[serde(rename = "L_den")]
    pub l_den: i128,
    #[serde(rename = "LK_num")]
    pub lk_num: i128,
    #[serde(rename = "LK_den")]
    pub lk_den: i128,
    pub balls: Vec<BallDoc>,
    pub verdict: String,
}

impl CertificateDoc {
    pub fn new(
        spec: &SemigroupSpec,
        digest: String,
        cfg: &Config,
        analysis: &Analysis,
        cert: &GrowthCertificate,
    ) -> Self {
        let name = |g: Gen| spec.name(g).to_string();
        CertificateDoc {
            format: FORMAT_VERSION,
            spec_digest: digest,
            generators: spec.names().to_vec(),
            config: cfg.into(),
            edges: edge_docs(spec, analysis),
            weights: weight_map(spec, &cert.d.d),
            k: cert.k.k,
            k_details: KDetailsDoc {
                defects: cert
                    .k
                    .defects
                    .iter()
                    .map(|r| DefectDoc {
                        x: name(r.x),
                        y: name(r.y),
                        max_defect: r.max_defect,
                        at: r.at,
                    })
                    .collect(),
                target_bounds: cert
                    .k
                    .target_bounds
                    .iter()
                    .map(|b| TargetBoundDoc {
                        x: name(b.x),
                        y: name(b.y),
                        z: name(b.z),
                        bound: b.bound,
                    })
                    .collect(),
            },
            horizon_used: cert.horizon_used,
            l_num: cert.l.numer(),
            l_den: cert.l.denom(),
            lk_num: cert.bound_coefficient.numer(),
            lk_den: cert.bound_coefficient.denom(),
            balls: cert
                .balls
                .iter()
                .map(|r| BallDoc {
                    m: r.m,
                    count: r.count,
                    bound: r.bound,
                })
                .collect(),
            verdict: VERDICT_CERTIFIED.to_string(),
        }
    }
}

/// Ball table as CSV with header `m,count,bound`; a `None` bound is left empty.
pub fn balls_csv(rows: &[(u64, u64, Option<u64>)]) -> String {
    let mut out = String::from("m,count,bound\n");
    for &(m, count, bound) in rows {
        match bound {
            Some(b) => out.push_str(&format!("{m},{count},{b}\n")),
            None => out.push_str(&format!("{m},{count},\n")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_doc_roundtrip() {
        let spec = SemigroupSpec::parse_compact("ab; ab=a^3, ba=a^3").unwrap();
        let text = to_json(&spec_to_doc(&spec));
        assert_eq!(parse_spec(&text).unwrap(), spec);
    }

    #[test]
    fn parse_failures() {
        assert!(matches!(parse_spec("{\"format\": 1,"), Err(ParseError::Json(_))));
        assert!(matches!(
            parse_spec(r#"{"format": 2, "generators": ["a"], "products": []}"#),
            Err(ParseError::Version(2))
        ));
        let missing = r#"{"format": 1, "generators": ["a", "b"],
            "products": [{"left": "a", "right": "b", "result_gen": "a", "result_exp": 2}]}"#;
        assert!(matches!(
            parse_spec(missing),
            Err(ParseError::Spec(SpecError::MissingProduct { .. }))
        ));
        let unknown = r#"{"format": 1, "generators": ["a", "b"],
            "products": [{"left": "a", "right": "c", "result_gen": "a", "result_exp": 2}]}"#;
        assert!(matches!(parse_spec(unknown), Err(ParseError::UnknownName(_))));
    }

    #[test]
    fn csv_header_is_exact() {
        let csv = balls_csv(&[(1, 2, Some(3)), (2, 5, None)]);
        assert_eq!(csv, "m,count,bound\n1,2,3\n2,5,\n");
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(spec_digest(b"abc"), spec_digest(b"abc"));
        assert!(spec_digest(b"abc").starts_with("sha256:ba7816bf"));
    }
}
