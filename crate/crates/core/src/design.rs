//! Compiles learnable-basis covectors into executable experiment
//! specifications: single-use rooted-cycle experiments and germ-repetition
//! families for relative precision.

use crate::clifford::{single_qubit_connector, SignedPauli, SqLayer};
use crate::learn::{
    reduced_cycle_basis_gates, reduced_spaces, well_conditioned_quasi_local, Walk,
};
use crate::linalg::{Echelon, SparseVec};
use crate::model::{Ansatz, Embedding};
use crate::pauli::{Pattern, Pauli};
use crate::scalar::rat_int;
use crate::space::ParamIndex;
use crate::{Error, Rat, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// One circuit layer: either a layer of single-qubit Cliffords or one gate
/// from the gate set (by index).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Layer {
    Sq(SqLayer),
    Gate(usize),
}

/// An executable experiment: prepare the +1 eigenstate of `prep`, apply the
/// layers, measure `meas`. The ideal (noiseless) expectation is
/// `expected_sign`; `m` records the germ power (0 = SPAM only, 1 = one pass).
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub prep: Pauli,
    pub layers: Vec<Layer>,
    pub meas: Pauli,
    pub expected_sign: i8,
    pub m: u32,
    /// The reduced covector this experiment measures:
    /// `-log(expected_sign * E) = target(r)` for every model `r`.
    pub target: SparseVec<Rat>,
}

impl ExperimentSpec {
    pub fn gate_layer_count(&self) -> usize {
        self.layers.iter().filter(|l| matches!(l, Layer::Gate(_))).count()
    }
}

/// How a plan target is determined from its experiments.
#[derive(Clone, Debug)]
pub enum TargetKind {
    /// One experiment; value = -log of its sign-compensated mean.
    Single(usize),
    /// A germ family of (power, spec index) pairs; value from the ratio
    /// estimator.
    Germ(Vec<(u32, usize)>),
}

#[derive(Clone, Debug)]
pub struct TargetEntry {
    pub covector: SparseVec<Rat>,
    pub kind: TargetKind,
}

/// An experiment plan: the specs plus the map from learnable-basis elements
/// to the experiments that determine them. The targets of a plan always
/// form a basis of the reduced learnable space.
#[derive(Clone, Debug)]
pub struct Plan {
    pub specs: Vec<ExperimentSpec>,
    pub targets: Vec<TargetEntry>,
}

impl Plan {
    pub fn target_basis(&self) -> Vec<SparseVec<Rat>> {
        self.targets.iter().map(|t| t.covector.clone()).collect()
    }
}

/// Compiles a rooted flow-conserving cycle (nonnegative integer entries,
/// exactly one prep and one meas edge) into an experiment. The edge
/// multiset is ordered into an Euler trail; single-qubit connector layers
/// absorb all Clifford signs except the final one, which is recorded.
pub fn compile_rooted_cycle(
    emb: &Embedding,
    cycle: &[(ParamIndex, Rat)],
) -> Result<ExperimentSpec> {
    let n = emb.n();
    let mut prep_pattern: Option<Pattern> = None;
    let mut meas_pattern: Option<Pattern> = None;
    let mut gate_edges: Vec<(usize, Pauli)> = Vec::new();
    for (idx, coeff) in cycle {
        if coeff.is_zero() {
            continue;
        }
        if !coeff.is_integer() || *coeff < rat_int(0) {
            return Err(Error::NotARootedCycle(format!(
                "edge multiplicity {coeff} is not a nonnegative integer"
            )));
        }
        let mult: i64 = num_traits::ToPrimitive::to_i64(coeff.numer())
            .ok_or_else(|| Error::NotARootedCycle("edge multiplicity overflow".into()))?;
        match idx {
            ParamIndex::Prep(u) => {
                if prep_pattern.is_some() || mult != 1 {
                    return Err(Error::NotARootedCycle(
                        "rooted cycles visit the root exactly once".into(),
                    ));
                }
                prep_pattern = Some(*u);
            }
            ParamIndex::Meas(u) => {
                if meas_pattern.is_some() || mult != 1 {
                    return Err(Error::NotARootedCycle(
                        "rooted cycles visit the root exactly once".into(),
                    ));
                }
                meas_pattern = Some(*u);
            }
            ParamIndex::Gate(g, a) => {
                for _ in 0..mult {
                    gate_edges.push((*g, *a));
                }
            }
        }
    }
    let (Some(u0), Some(um)) = (prep_pattern, meas_pattern) else {
        return Err(Error::NotARootedCycle("missing prep or meas edge".into()));
    };

    // Flow conservation over all vertices.
    let mut net: BTreeMap<u32, i64> = BTreeMap::new();
    *net.entry(u0.bits()).or_default() += 1;
    *net.entry(um.bits()).or_default() -= 1;
    for (g, a) in &gate_edges {
        let to = emb.gate_set().gate(*g).apply(a).label.pattern();
        *net.entry(a.pattern().bits()).or_default() -= 1;
        *net.entry(to.bits()).or_default() += 1;
    }
    if net.values().any(|&v| v != 0) {
        return Err(Error::NotARootedCycle("flow is not conserved".into()));
    }

    // Euler trail from u0 to um over the gate edges (Hierholzer).
    gate_edges.sort_by_key(|(g, a)| (*g, a.key()));
    let mut adj: BTreeMap<u32, Vec<(usize, Pauli)>> = BTreeMap::new();
    for (g, a) in &gate_edges {
        adj.entry(a.pattern().bits()).or_default().push((*g, *a));
    }
    let mut cursor: BTreeMap<u32, usize> = BTreeMap::new();
    let mut stack: Vec<(u32, Option<(usize, Pauli)>)> = vec![(u0.bits(), None)];
    let mut trail_rev: Vec<(usize, Pauli)> = Vec::new();
    while let Some(&(v, in_edge)) = stack.last() {
        let cur = cursor.entry(v).or_insert(0);
        let out = adj.get(&v).map(|es| es.len()).unwrap_or(0);
        if *cur < out {
            let (g, a) = adj[&v][*cur];
            *cur += 1;
            let to = emb.gate_set().gate(g).apply(&a).label.pattern().bits();
            stack.push((to, Some((g, a))));
        } else {
            stack.pop();
            if let Some(e) = in_edge {
                trail_rev.push(e);
            }
        }
    }
    if trail_rev.len() != gate_edges.len() {
        return Err(Error::NotARootedCycle("gate edges are not connected to the trail".into()));
    }
    trail_rev.reverse();
    let trail = trail_rev;

    // Assemble the circuit. With no gates this is the SPAM pair experiment.
    let target = emb.pullback(cycle);
    if trail.is_empty() {
        if u0 != um {
            return Err(Error::NotARootedCycle("prep and meas patterns differ".into()));
        }
        let z = Pauli::new(n, 0, u0.bits());
        return Ok(ExperimentSpec {
            prep: z,
            layers: Vec::new(),
            meas: z,
            expected_sign: 1,
            m: 0,
            target,
        });
    }
    let prep = trail[0].1;
    if prep.pattern() != u0 {
        return Err(Error::NotARootedCycle("trail does not start at the prep pattern".into()));
    }
    let mut layers = Vec::new();
    let mut current = SignedPauli::plus(prep);
    for (i, (g, a)) in trail.iter().enumerate() {
        debug_assert_eq!(current.label, *a);
        debug_assert_eq!(current.sign, 1);
        layers.push(Layer::Gate(*g));
        let image = emb.gate_set().gate(*g).apply_signed(&current);
        if i + 1 < trail.len() {
            let next = SignedPauli::plus(trail[i + 1].1);
            let conn = single_qubit_connector(&image, &next)?;
            if !conn.is_identity() {
                layers.push(Layer::Sq(conn));
            }
            current = next;
        } else {
            current = image;
        }
    }
    if current.label.pattern() != um {
        return Err(Error::NotARootedCycle("trail does not end at the meas pattern".into()));
    }
    Ok(ExperimentSpec {
        prep,
        layers,
        meas: current.label,
        expected_sign: current.sign,
        m: 1,
        target,
    })
}

/// Compiles a germ-power experiment from a closed gate-edge walk: prepare
/// the walk's first label, repeat the germ (gates with sign-normalizing
/// connectors) `m` times, and measure the first label again. The measured
/// covector is `prep/meas SPAM pair + m * (walk pullback)`.
pub fn compile_germ(emb: &Embedding, walk: &Walk, m: u32) -> Result<ExperimentSpec> {
    crate::learn::verify_walk(emb, walk)?;
    let first = walk
        .steps
        .first()
        .ok_or_else(|| Error::NotARootedCycle("empty germ walk".into()))?;
    let prep = first.1;
    let mut germ: Vec<Layer> = Vec::new();
    let mut current = SignedPauli::plus(prep);
    for (i, (g, a)) in walk.steps.iter().enumerate() {
        debug_assert_eq!(current.label, *a);
        germ.push(Layer::Gate(*g));
        let image = emb.gate_set().gate(*g).apply_signed(&current);
        let next_label = if i + 1 < walk.steps.len() { walk.steps[i + 1].1 } else { prep };
        let next = SignedPauli::plus(next_label);
        let conn = single_qubit_connector(&image, &next)?;
        if !conn.is_identity() {
            germ.push(Layer::Sq(conn));
        }
        current = next;
    }
    let mut layers = Vec::with_capacity(germ.len() * m as usize);
    for _ in 0..m {
        layers.extend(germ.iter().cloned());
    }
    // Target: alpha + m*g where alpha is the SPAM pair at the anchor.
    let u = prep.pattern();
    let mut edges: Vec<(ParamIndex, Rat)> =
        vec![(ParamIndex::Prep(u), rat_int(1)), (ParamIndex::Meas(u), rat_int(1))];
    for (g, a) in &walk.steps {
        edges.push((ParamIndex::Gate(*g, *a), rat_int(m as i64)));
    }
    let target = emb.pullback(&edges);
    Ok(ExperimentSpec { prep, layers, meas: prep, expected_sign: 1, m, target })
}

/// The simple plan: `dim(L_R)` experiments, each applying at most one
/// gate once. Recognized ansatzes get their closed-form cycle subsets;
/// anything else falls back to a greedy rank-complete subset of the rooted
/// cycle basis (capped enumeration).
pub fn plan_simple(emb: &Embedding, n_max: usize) -> Result<Plan> {
    let n = emb.n();
    let report = reduced_spaces(emb, n_max)?;
    let mut cycles: Vec<Vec<(ParamIndex, Rat)>> = Vec::new();
    match emb.ansatz() {
        Ansatz::Complete => {
            for u in Pattern::enumerate_nonzero(n) {
                cycles.push(spam_pair(u));
            }
            for (g, gate) in emb.gate_set().gates().iter().enumerate() {
                for a in Pauli::enumerate_nonidentity(n) {
                    cycles.push(gate_cycle(g, a, gate.apply(&a).label));
                }
            }
        }
        Ansatz::FullyLocal
            if emb
                .gate_set()
                .gates()
                .iter()
                .all(crate::clifford::connected_pattern_subgraph) =>
        {
            for q in 1..=n {
                cycles.push(spam_pair(Pattern::from_qubits(n, &[q])));
            }
            for (g, gate) in emb.gate_set().gates().iter().enumerate() {
                for a in emb.reduced().gate_labels(g).collect::<Vec<_>>() {
                    cycles.push(gate_cycle(g, a, gate.apply(&a).label));
                }
            }
        }
        Ansatz::QuasiLocal { omega_m, omega_gates, .. }
            if well_conditioned_quasi_local(emb).is_ok() =>
        {
            for mu in omega_m.members() {
                cycles.push(spam_pair(mu));
            }
            for (g, gate) in emb.gate_set().gates().iter().enumerate() {
                for a in Pauli::enumerate_consistent(&omega_gates[g]) {
                    cycles.push(gate_cycle(g, a, gate.apply(&a).label));
                }
            }
        }
        _ => {
            // Greedy subset of the rooted cycle basis.
            if n > n_max {
                return Err(Error::CapExceeded { n, n_max });
            }
            let mut ech: Echelon<Rat> = Echelon::new();
            let mut all: Vec<Vec<(ParamIndex, Rat)>> = Vec::new();
            for u in Pattern::enumerate_nonzero(n) {
                all.push(spam_pair(u));
            }
            for (g, gate) in emb.gate_set().gates().iter().enumerate() {
                for a in Pauli::enumerate_nonidentity(n) {
                    all.push(gate_cycle(g, a, gate.apply(&a).label));
                }
            }
            for cycle in all {
                if (ech.rank() as u32) == report.dim_l_r {
                    break;
                }
                if ech.insert(emb.pullback(&cycle)).is_some() {
                    cycles.push(cycle);
                }
            }
        }
    }
    let mut specs = Vec::with_capacity(cycles.len());
    let mut targets = Vec::with_capacity(cycles.len());
    let mut ech: Echelon<Rat> = Echelon::new();
    for cycle in &cycles {
        let spec = compile_rooted_cycle(emb, cycle)?;
        ech.insert(spec.target.clone());
        targets.push(TargetEntry { covector: spec.target.clone(), kind: TargetKind::Single(specs.len()) });
        specs.push(spec);
    }
    if ech.rank() as u32 != report.dim_l_r || cycles.len() != report.dim_l_r as usize {
        return Err(Error::RankDeficient);
    }
    Ok(Plan { specs, targets })
}

fn spam_pair(u: Pattern) -> Vec<(ParamIndex, Rat)> {
    vec![(ParamIndex::Prep(u), rat_int(1)), (ParamIndex::Meas(u), rat_int(1))]
}

fn gate_cycle(g: usize, a: Pauli, image: Pauli) -> Vec<(ParamIndex, Rat)> {
    vec![
        (ParamIndex::Prep(a.pattern()), rat_int(1)),
        (ParamIndex::Gate(g, a), rat_int(1)),
        (ParamIndex::Meas(image.pattern()), rat_int(1)),
    ]
}

/// The relative-precision plan: one germ family per reduced gate cycle
/// (powers from `m_values`), plus single-use rooted-cycle supplements
/// extending the gate cycles to a basis of the learnable space.
pub fn plan_relative(emb: &Embedding, m_values: &[u32], n_max: usize) -> Result<Plan> {
    if m_values.is_empty() {
        return Err(Error::Unsupported("m_values must be non-empty".into()));
    }
    let gate_cycles = reduced_cycle_basis_gates(emb)?;
    let report = reduced_spaces(emb, n_max)?;
    let mut specs: Vec<ExperimentSpec> = Vec::new();
    let mut targets: Vec<TargetEntry> = Vec::new();
    let mut ech: Echelon<Rat> = Echelon::new();
    for cycle in &gate_cycles {
        let mut family = Vec::with_capacity(m_values.len());
        for &m in m_values {
            let spec = compile_germ(emb, &cycle.witness, m)?;
            family.push((m, specs.len()));
            specs.push(spec);
        }
        ech.insert(cycle.covector.clone());
        targets.push(TargetEntry { covector: cycle.covector.clone(), kind: TargetKind::Germ(family) });
    }
    // Supplement with rooted-cycle singles until the learnable space is
    // covered.
    let n = emb.n();
    if (ech.rank() as u32) < report.dim_l_r {
        if n > n_max {
            return Err(Error::CapExceeded { n, n_max });
        }
        let mut all: Vec<Vec<(ParamIndex, Rat)>> = Vec::new();
        for u in Pattern::enumerate_nonzero(n) {
            all.push(spam_pair(u));
        }
        for (g, gate) in emb.gate_set().gates().iter().enumerate() {
            for a in Pauli::enumerate_nonidentity(n) {
                all.push(gate_cycle(g, a, gate.apply(&a).label));
            }
        }
        for cycle in all {
            if (ech.rank() as u32) == report.dim_l_r {
                break;
            }
            let pulled = emb.pullback(&cycle);
            if ech.insert(pulled.clone()).is_some() {
                let spec = compile_rooted_cycle(emb, &cycle)?;
                targets.push(TargetEntry {
                    covector: spec.target.clone(),
                    kind: TargetKind::Single(specs.len()),
                });
                specs.push(spec);
            }
        }
    }
    if ech.rank() as u32 != report.dim_l_r {
        return Err(Error::RankDeficient);
    }
    Ok(Plan { specs, targets })
}

/// Germ-depth search: returns the first `m` from {1, 2, 4, ...} (capped)
/// whose probed estimate falls to `threshold` of the depth-0 estimate,
/// together with a flag marking that the cap was hit.
pub fn search_depth(
    f_hat_0: f64,
    mut probe: impl FnMut(u32) -> f64,
    threshold: f64,
    cap: u32,
) -> (u32, bool) {
    assert!(threshold > 0.0 && threshold < 1.0, "threshold must be in (0,1)");
    let mut m = 1u32;
    while m <= cap {
        if probe(m) / f_hat_0 <= threshold {
            return (m, false);
        }
        m = m.saturating_mul(2);
    }
    (cap, true)
}
