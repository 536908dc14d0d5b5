//! JSON schemas for the external interfaces: gate sets, ansatzes,
//! experiment plans, simulation results, learnability and estimation
//! reports. All maps are ordered so identical inputs serialize to
//! byte-identical outputs.

use crate::clifford::{builtin, tensor_parallel, Clifford, GateSet, SignedPauli, SqLayer};
use crate::design::{ExperimentSpec, Layer, Plan, TargetEntry, TargetKind};
use crate::estimate::EstimationReport;
use crate::learn::LearnabilityReport;
use crate::linalg::SparseVec;
use crate::model::{Ansatz, Embedding};
use crate::pauli::{FactorSet, Pattern, Pauli};
use crate::scalar::{rat_parse, rat_string};
use crate::sim::SimResult;
use crate::space::ParamIndex;
use crate::{Error, Rat, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize, Debug)]
pub struct GateSetFile {
    pub n: usize,
    pub gates: Vec<GateEntry>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct GateEntry {
    pub name: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tableau: Option<TableauEntry>,
    /// Parallel layers: several builtins/tableaus on disjoint placements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<MemberEntry>>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct MemberEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tableau: Option<TableauEntry>,
    pub placement: Vec<usize>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct TableauEntry {
    /// Signed images of X_1..X_k as strings like "+XZ" / "-ZY".
    pub x_images: Vec<String>,
    pub z_images: Vec<String>,
}

fn parse_signed(s: &str) -> Result<SignedPauli> {
    let (sign, rest) = match s.as_bytes().first() {
        Some(b'+') => (1i8, &s[1..]),
        Some(b'-') => (-1i8, &s[1..]),
        _ => (1i8, s),
    };
    Ok(SignedPauli { sign, label: rest.parse()? })
}

fn tableau_to_gate(name: &str, t: &TableauEntry) -> Result<Clifford> {
    let x_images =
        t.x_images.iter().map(|s| parse_signed(s)).collect::<Result<Vec<_>>>()?;
    let z_images =
        t.z_images.iter().map(|s| parse_signed(s)).collect::<Result<Vec<_>>>()?;
    Clifford::from_images(name, x_images, z_images)
}

fn member_gate(m: &MemberEntry) -> Result<(Clifford, Vec<usize>)> {
    let gate = match (&m.builtin, &m.tableau) {
        (Some(b), None) => builtin(b)?,
        (None, Some(t)) => tableau_to_gate("member", t)?,
        _ => return Err(Error::Parse("member needs exactly one of builtin/tableau".into())),
    };
    Ok((gate, m.placement.clone()))
}

pub fn gate_set_from_file(file: &GateSetFile) -> Result<GateSet> {
    let n = file.n;
    let mut gates = Vec::with_capacity(file.gates.len());
    for entry in &file.gates {
        let gate = match entry.kind.as_str() {
            "builtin" => {
                let b = entry
                    .builtin
                    .as_ref()
                    .ok_or_else(|| Error::Parse("builtin kind needs a builtin name".into()))?;
                let placement = entry
                    .placement
                    .as_ref()
                    .ok_or_else(|| Error::Parse("builtin kind needs a placement".into()))?;
                tensor_parallel(n, &[(builtin(b)?, placement.clone())], entry.name.clone())?
            }
            "tableau" => {
                let t = entry
                    .tableau
                    .as_ref()
                    .ok_or_else(|| Error::Parse("tableau kind needs a tableau".into()))?;
                let local = tableau_to_gate(&entry.name, t)?;
                let placement = entry
                    .placement
                    .clone()
                    .unwrap_or_else(|| (1..=local.n()).collect());
                tensor_parallel(n, &[(local, placement)], entry.name.clone())?
            }
            "parallel" => {
                let members = entry
                    .members
                    .as_ref()
                    .ok_or_else(|| Error::Parse("parallel kind needs members".into()))?;
                let parts =
                    members.iter().map(member_gate).collect::<Result<Vec<_>>>()?;
                tensor_parallel(n, &parts, entry.name.clone())?
            }
            other => return Err(Error::Parse(format!("unknown gate kind {other:?}"))),
        };
        gates.push(gate);
    }
    GateSet::new(n, gates)
}

#[derive(Serialize, Deserialize, Debug)]
pub struct AnsatzFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_s_max: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_m_max: Option<Vec<Vec<usize>>>,
    /// Maximal factors per gate name; the downward closure is computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_gate_max: Option<BTreeMap<String, Vec<Vec<usize>>>>,
}

fn factors(n: usize, maximal: &[Vec<usize>]) -> Result<FactorSet> {
    let patterns: Vec<Pattern> =
        maximal.iter().map(|qs| Pattern::from_qubits(n, qs)).collect();
    FactorSet::from_maximal(n, &patterns)
}

pub fn ansatz_from_file(file: &AnsatzFile, gs: &GateSet) -> Result<Ansatz> {
    let n = gs.n();
    match file.kind.as_str() {
        "complete" => Ok(Ansatz::Complete),
        "fully_local" => Ok(Ansatz::FullyLocal),
        "quasi_local" => {
            let need = |o: &Option<Vec<Vec<usize>>>, what: &str| {
                o.clone().ok_or_else(|| Error::Parse(format!("quasi_local needs {what}")))
            };
            let omega_s = factors(n, &need(&file.omega_s_max, "omega_s_max")?)?;
            let omega_m = factors(n, &need(&file.omega_m_max, "omega_m_max")?)?;
            let per_gate = file
                .omega_gate_max
                .as_ref()
                .ok_or_else(|| Error::Parse("quasi_local needs omega_gate_max".into()))?;
            let omega_gates = gs
                .gates()
                .iter()
                .map(|g| {
                    per_gate
                        .get(g.name())
                        .ok_or_else(|| {
                            Error::Parse(format!("missing factor set for gate {:?}", g.name()))
                        })
                        .and_then(|maximal| factors(n, maximal))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Ansatz::QuasiLocal { omega_s, omega_m, omega_gates })
        }
        other => Err(Error::Parse(format!("unknown ansatz kind {other:?}"))),
    }
}

pub fn ansatz_to_file(ansatz: &Ansatz, gs: &GateSet) -> AnsatzFile {
    let qubits = |p: &Pattern| p.qubits();
    match ansatz {
        Ansatz::Complete => AnsatzFile {
            kind: "complete".into(),
            omega_s_max: None,
            omega_m_max: None,
            omega_gate_max: None,
        },
        Ansatz::FullyLocal => AnsatzFile {
            kind: "fully_local".into(),
            omega_s_max: None,
            omega_m_max: None,
            omega_gate_max: None,
        },
        Ansatz::QuasiLocal { omega_s, omega_m, omega_gates } => AnsatzFile {
            kind: "quasi_local".into(),
            omega_s_max: Some(omega_s.maximal().iter().map(&qubits).collect()),
            omega_m_max: Some(omega_m.maximal().iter().map(&qubits).collect()),
            omega_gate_max: Some(
                gs.gates()
                    .iter()
                    .zip(omega_gates.iter())
                    .map(|(g, om)| {
                        (g.name().to_string(), om.maximal().iter().map(&qubits).collect())
                    })
                    .collect(),
            ),
        },
        Ansatz::Custom { .. } => AnsatzFile {
            kind: "custom".into(),
            omega_s_max: None,
            omega_m_max: None,
            omega_gate_max: None,
        },
    }
}

#[derive(Serialize, Deserialize, Debug)]
pub struct PlanFile {
    pub experiments: Vec<ExperimentEntry>,
    pub targets: Vec<TargetFileEntry>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct ExperimentEntry {
    pub prep: String,
    pub layers: Vec<LayerEntry>,
    pub meas: String,
    pub m: u32,
    pub sign: i8,
    /// Sparse reduced covector: index string -> rational string.
    pub target: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(untagged)]
pub enum LayerEntry {
    Sq { u1: Vec<String> },
    Gate { gate: String },
}

#[derive(Serialize, Deserialize, Debug)]
pub struct TargetFileEntry {
    pub covector: BTreeMap<String, String>,
    pub kind: TargetKindEntry,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(untagged)]
pub enum TargetKindEntry {
    Single { single: usize },
    Germ { germ: Vec<(u32, usize)> },
}

pub fn covector_to_map(emb: &Embedding, v: &SparseVec<Rat>) -> BTreeMap<String, String> {
    v.iter()
        .map(|(c, val)| (emb.reduced().at(*c).display(emb.gate_set()), rat_string(val)))
        .collect()
}

pub fn covector_from_map(
    emb: &Embedding,
    map: &BTreeMap<String, String>,
) -> Result<SparseVec<Rat>> {
    let mut entries = Vec::with_capacity(map.len());
    for (key, val) in map {
        let idx = ParamIndex::parse(key, emb.gate_set())?;
        let col = emb
            .reduced()
            .col(&idx)
            .ok_or_else(|| Error::Parse(format!("index {key:?} not in the reduced space")))?;
        let v = rat_parse(val).ok_or_else(|| Error::Parse(format!("bad rational {val:?}")))?;
        entries.push((col, v));
    }
    Ok(SparseVec::from_entries(entries))
}

pub fn plan_to_file(emb: &Embedding, plan: &Plan) -> PlanFile {
    let experiments = plan
        .specs
        .iter()
        .map(|spec| ExperimentEntry {
            prep: spec.prep.to_string(),
            layers: spec
                .layers
                .iter()
                .map(|l| match l {
                    Layer::Sq(sq) => LayerEntry::Sq { u1: sq.names() },
                    Layer::Gate(g) => {
                        LayerEntry::Gate { gate: emb.gate_set().gate(*g).name().to_string() }
                    }
                })
                .collect(),
            meas: spec.meas.to_string(),
            m: spec.m,
            sign: spec.expected_sign,
            target: covector_to_map(emb, &spec.target),
        })
        .collect();
    let targets = plan
        .targets
        .iter()
        .map(|t| TargetFileEntry {
            covector: covector_to_map(emb, &t.covector),
            kind: match &t.kind {
                TargetKind::Single(i) => TargetKindEntry::Single { single: *i },
                TargetKind::Germ(family) => TargetKindEntry::Germ { germ: family.clone() },
            },
        })
        .collect();
    PlanFile { experiments, targets }
}

pub fn plan_from_file(emb: &Embedding, file: &PlanFile) -> Result<Plan> {
    let mut specs = Vec::with_capacity(file.experiments.len());
    for entry in &file.experiments {
        let layers = entry
            .layers
            .iter()
            .map(|l| match l {
                LayerEntry::Sq { u1 } => Ok(Layer::Sq(SqLayer::from_names(u1)?)),
                LayerEntry::Gate { gate } => emb
                    .gate_set()
                    .index_of(gate)
                    .map(Layer::Gate)
                    .ok_or_else(|| Error::Parse(format!("unknown gate {gate:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        specs.push(ExperimentSpec {
            prep: entry.prep.parse::<Pauli>()?,
            layers,
            meas: entry.meas.parse::<Pauli>()?,
            expected_sign: entry.sign,
            m: entry.m,
            target: covector_from_map(emb, &entry.target)?,
        });
    }
    let targets = file
        .targets
        .iter()
        .map(|t| {
            Ok(TargetEntry {
                covector: covector_from_map(emb, &t.covector)?,
                kind: match &t.kind {
                    TargetKindEntry::Single { single } => TargetKind::Single(*single),
                    TargetKindEntry::Germ { germ } => TargetKind::Germ(germ.clone()),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Plan { specs, targets })
}

#[derive(Serialize, Deserialize, Debug)]
pub struct ResultLine {
    pub index: usize,
    pub exact_expectation: f64,
    pub shots: u64,
    pub sampled_mean: f64,
    pub seed: u64,
}

pub fn results_to_jsonl(results: &[SimResult]) -> String {
    let mut out = String::new();
    for r in results {
        let line = ResultLine {
            index: r.index,
            exact_expectation: r.exact,
            shots: r.shots,
            sampled_mean: r.mean,
            seed: r.seed,
        };
        out.push_str(&serde_json::to_string(&line).expect("serializable"));
        out.push('\n');
    }
    out
}

pub fn results_from_jsonl(text: &str) -> Result<Vec<SimResult>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: ResultLine =
            serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
        out.push(SimResult {
            index: parsed.index,
            exact: parsed.exact_expectation,
            shots: parsed.shots,
            mean: parsed.sampled_mean,
            seed: parsed.seed,
        });
    }
    out.sort_by_key(|r| r.index);
    Ok(out)
}

#[derive(Serialize, Deserialize, Debug)]
pub struct LearnabilityFile {
    pub dims: DimsEntry,
    pub method: String,
    pub gauge_basis: Vec<BTreeMap<String, String>>,
    pub learnable_basis: Vec<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct DimsEntry {
    pub x_r: u32,
    pub l_r: u32,
    pub t_r: u32,
    pub x_r_gate: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_r_gate: Option<u32>,
}

pub fn learnability_to_file(emb: &Embedding, report: &LearnabilityReport) -> LearnabilityFile {
    LearnabilityFile {
        dims: DimsEntry {
            x_r: report.dim_x_r,
            l_r: report.dim_l_r,
            t_r: report.dim_t_r,
            x_r_gate: report.dim_x_r_gate,
            l_r_gate: report.dim_l_r_gate,
        },
        method: report.method.as_str().to_string(),
        gauge_basis: report.gauge_basis.iter().map(|v| covector_to_map(emb, v)).collect(),
        learnable_basis: report
            .learnable_basis
            .iter()
            .map(|v| covector_to_map(emb, v))
            .collect(),
    }
}

#[derive(Serialize, Deserialize, Debug)]
pub struct EstimationFile {
    pub shots: u64,
    pub seed: u64,
    pub elements: Vec<EstimationElementEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge_fixed: Option<BTreeMap<String, f64>>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct EstimationElementEntry {
    pub target: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub flagged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_infidelity_error: Option<f64>,
}

pub fn estimation_to_file(emb: &Embedding, report: &EstimationReport) -> EstimationFile {
    EstimationFile {
        shots: report.shots,
        seed: report.seed,
        elements: report
            .elements
            .iter()
            .map(|e| EstimationElementEntry {
                target: e.target,
                estimate: e.estimate,
                stderr: e.stderr,
                flagged: e.flagged,
                lambda_hat: e.lambda_hat,
                truth: e.truth,
                abs_error: e.abs_error,
                rel_infidelity_error: e.rel_infidelity_error,
            })
            .collect(),
        gauge_fixed: report.gauge_fixed.as_ref().map(|r| {
            emb.reduced()
                .iter()
                .map(|(c, idx)| (idx.display(emb.gate_set()), r[c as usize]))
                .collect()
        }),
    }
}

/// CSV summary: one row per estimated element.
pub fn estimation_to_csv(report: &EstimationReport) -> String {
    let mut out =
        String::from("target,estimate,stderr,flagged,lambda_hat,truth,abs_error,rel_infidelity_error\n");
    for e in &report.elements {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            e.target,
            e.estimate,
            e.stderr,
            e.flagged,
            opt(e.lambda_hat),
            opt(e.truth),
            opt(e.abs_error),
            opt(e.rel_infidelity_error),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::plan_simple;
    use crate::model::NoiseModel;
    use crate::sim::run_plan;

    fn ring_file(n: usize) -> GateSetFile {
        GateSetFile {
            n,
            gates: (1..=n)
                .map(|i| {
                    let j = i % n + 1;
                    GateEntry {
                        name: format!("CZ_{i}{j}"),
                        kind: "builtin".into(),
                        builtin: Some("CZ".into()),
                        placement: Some(vec![i, j]),
                        tableau: None,
                        members: None,
                    }
                })
                .collect(),
        }
    }

    #[test]
    fn gate_set_round_trip() {
        let gs = gate_set_from_file(&ring_file(4)).unwrap();
        assert_eq!(gs.len(), 4);
        assert_eq!(gs.gate(0).support().to_string(), "1100");
        // Tableau entry: a CZ written out by images.
        let file = GateSetFile {
            n: 2,
            gates: vec![GateEntry {
                name: "myCZ".into(),
                kind: "tableau".into(),
                builtin: None,
                placement: None,
                tableau: Some(TableauEntry {
                    x_images: vec!["+XZ".into(), "+ZX".into()],
                    z_images: vec!["+ZI".into(), "+IZ".into()],
                }),
                members: None,
            }],
        };
        let gs2 = gate_set_from_file(&file).unwrap();
        let cz = builtin("CZ").unwrap();
        for a in crate::pauli::Pauli::enumerate(2) {
            assert_eq!(gs2.gate(0).apply(&a), cz.apply(&a));
        }
        // Parallel layer.
        let file = GateSetFile {
            n: 4,
            gates: vec![GateEntry {
                name: "Ge".into(),
                kind: "parallel".into(),
                builtin: None,
                placement: None,
                tableau: None,
                members: Some(vec![
                    MemberEntry { builtin: Some("CZ".into()), tableau: None, placement: vec![1, 2] },
                    MemberEntry { builtin: Some("CZ".into()), tableau: None, placement: vec![3, 4] },
                ]),
            }],
        };
        let gs3 = gate_set_from_file(&file).unwrap();
        assert_eq!(gs3.gate(0).blocks().len(), 2);
    }

    #[test]
    fn ansatz_round_trip() {
        let gs = gate_set_from_file(&ring_file(3)).unwrap();
        let file = AnsatzFile {
            kind: "quasi_local".into(),
            omega_s_max: Some(vec![vec![1, 2], vec![2, 3], vec![3, 1]]),
            omega_m_max: Some(vec![vec![1, 2], vec![2, 3], vec![3, 1]]),
            omega_gate_max: Some(
                gs.gates()
                    .iter()
                    .map(|g| (g.name().to_string(), vec![vec![1, 2], vec![2, 3], vec![3, 1]]))
                    .collect(),
            ),
        };
        let ansatz = ansatz_from_file(&file, &gs).unwrap();
        let back = ansatz_to_file(&ansatz, &gs);
        assert_eq!(back.kind, "quasi_local");
        assert_eq!(back.omega_s_max.unwrap().len(), 3);
    }

    #[test]
    fn plan_and_results_round_trip() {
        let gs = gate_set_from_file(&ring_file(3)).unwrap();
        let emb = Embedding::new(gs, Ansatz::FullyLocal, 6).unwrap();
        let plan = plan_simple(&emb, 6).unwrap();
        let file = plan_to_file(&emb, &plan);
        let json = serde_json::to_string_pretty(&file).unwrap();
        let parsed: PlanFile = serde_json::from_str(&json).unwrap();
        let back = plan_from_file(&emb, &parsed).unwrap();
        assert_eq!(back.specs.len(), plan.specs.len());
        for (a, b) in plan.specs.iter().zip(back.specs.iter()) {
            assert_eq!(a.prep, b.prep);
            assert_eq!(a.layers, b.layers);
            assert_eq!(a.meas, b.meas);
            assert_eq!(a.target, b.target);
        }
        // Results JSONL round trip.
        let model = NoiseModel::random(&emb, 3, 0.1);
        let results = run_plan(&emb, &model, &plan, 100, 7).unwrap();
        let text = results_to_jsonl(&results);
        let back = results_from_jsonl(&text).unwrap();
        assert_eq!(back.len(), results.len());
        assert_eq!(back[5].mean, results[5].mean);
    }
}
