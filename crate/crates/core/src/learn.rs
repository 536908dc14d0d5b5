//! Learnable and gauge subspaces for complete and reduced noise models.
//!
//! The generic ("brute force") path computes the reduced gauge space as the
//! exact kernel of the rooted-cycle-basis matrix pulled back through the
//! embedding; the analytic paths construct the gauge basis directly from
//! subsystem depolarizing gauges when the ansatz satisfies the relevant
//! theorem hypotheses, and are cross-verified against the kernel whenever
//! the register is small enough to enumerate.

use crate::clifford::connected_pattern_subgraph;
use crate::linalg::{Echelon, SparseVec};
use crate::model::{extended_support, is_covariant, Ansatz, Embedding};
use crate::pauli::{FactorSet, Pattern, Pauli};
use crate::ptg::Ptg;
use crate::scalar::rat_int;
use crate::space::ParamIndex;
use crate::{Error, Rat, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    Analytic,
    BruteForce,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::BruteForce => "brute_force",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LearnabilityReport {
    pub dim_x_r: u32,
    pub dim_l_r: u32,
    pub dim_t_r: u32,
    pub dim_x_r_gate: u32,
    /// Computed only when the register permits brute-force enumeration.
    pub dim_l_r_gate: Option<u32>,
    pub method: Method,
    /// Basis of the reduced gauge space (reduced coordinates).
    pub gauge_basis: Vec<SparseVec<Rat>>,
    /// Basis of the reduced learnable space (reduced coordinates).
    pub learnable_basis: Vec<SparseVec<Rat>>,
}

/// Learnable and gauge spaces of the complete model: the rooted cycle basis
/// and the SDG basis of the pattern transfer graph.
pub struct CompleteSpaces {
    pub cycles: Vec<SparseVec<Rat>>,
    pub cuts: Vec<SparseVec<Rat>>,
}

pub fn complete_spaces(ptg: &Ptg) -> CompleteSpaces {
    CompleteSpaces { cycles: ptg.rooted_cycle_basis(), cuts: ptg.sdg_basis() }
}

/// The pulled-back rooted cycle basis rows, generated lazily in canonical
/// order. Enumerates `4^n` labels per gate; callers guard the cap.
pub fn pulled_back_cycle_rows(emb: &Embedding) -> impl Iterator<Item = SparseVec<Rat>> + '_ {
    let n = emb.n();
    let spam = Pattern::enumerate_nonzero(n).map(move |u| {
        let mut row = emb.pullback_unit(&ParamIndex::Prep(u));
        row.add(&emb.pullback_unit(&ParamIndex::Meas(u)));
        row
    });
    let gates = (0..emb.gate_set().len()).flat_map(move |g| {
        Pauli::enumerate_nonidentity(n).map(move |a| {
            let image = emb.gate_set().gate(g).apply(&a).label;
            let mut row = emb.pullback_unit(&ParamIndex::Prep(a.pattern()));
            row.add(&emb.pullback_unit(&ParamIndex::Gate(g, a)));
            row.add(&emb.pullback_unit(&ParamIndex::Meas(image.pattern())));
            row
        })
    });
    spam.chain(gates)
}

/// Brute-force reduced spaces: the learnable space is the row space of the
/// pulled-back rooted cycle basis, the gauge space its exact kernel.
pub fn reduced_spaces_brute(emb: &Embedding, n_max: usize) -> Result<LearnabilityReport> {
    let n = emb.n();
    if n > n_max {
        return Err(Error::CapExceeded { n, n_max });
    }
    let mut ech: Echelon<Rat> = Echelon::new();
    for row in pulled_back_cycle_rows(emb) {
        ech.insert(row);
    }
    let dim_x_r = emb.dim();
    let dim_l_r = ech.rank() as u32;
    let gauge_basis = ech.kernel(dim_x_r);
    let learnable_basis = ech.rows().to_vec();
    Ok(LearnabilityReport {
        dim_x_r,
        dim_l_r,
        dim_t_r: dim_x_r - dim_l_r,
        dim_x_r_gate: emb.reduced().gate_dim_total(),
        dim_l_r_gate: Some(gate_learnable_dim(emb, n_max)?),
        method: Method::BruteForce,
        gauge_basis,
        learnable_basis,
    })
}

/// Reduced spaces via the analytic gauge basis when a recognized ansatz
/// satisfies its theorem hypotheses, falling back to brute force (subject
/// to the cap) otherwise.
pub fn reduced_spaces(emb: &Embedding, n_max: usize) -> Result<LearnabilityReport> {
    match analytic_gauge_basis(emb) {
        Ok(gauge_basis) => {
            if emb.n() <= n_max {
                verify_in_kernel(emb, &gauge_basis)?;
            }
            let dim_x_r = emb.dim();
            let mut ech: Echelon<Rat> = Echelon::new();
            for v in &gauge_basis {
                ech.insert(v.clone());
            }
            let dim_t_r = ech.rank() as u32;
            assert_eq!(dim_t_r as usize, gauge_basis.len(), "analytic gauge basis is independent");
            let learnable_basis = ech.kernel(dim_x_r);
            let dim_l_r_gate =
                if emb.n() <= n_max { Some(gate_learnable_dim(emb, n_max)?) } else { None };
            Ok(LearnabilityReport {
                dim_x_r,
                dim_l_r: dim_x_r - dim_t_r,
                dim_t_r,
                dim_x_r_gate: emb.reduced().gate_dim_total(),
                dim_l_r_gate,
                method: Method::Analytic,
                gauge_basis,
                learnable_basis,
            })
        }
        Err(Error::HypothesesNotMet(_)) => reduced_spaces_brute(emb, n_max),
        Err(e) => Err(e),
    }
}

fn verify_in_kernel(emb: &Embedding, basis: &[SparseVec<Rat>]) -> Result<()> {
    for row in pulled_back_cycle_rows(emb) {
        for v in basis {
            if !row.dot(v).is_zero() {
                return Err(Error::Unsupported(
                    "analytic gauge vector is not orthogonal to a learnable row".into(),
                ));
            }
        }
    }
    Ok(())
}

/// True iff the reduced covector is orthogonal to every gauge basis vector.
pub fn is_learnable(report: &LearnabilityReport, f: &SparseVec<Rat>) -> bool {
    report.gauge_basis.iter().all(|t| f.dot(t).is_zero())
}

/// Analytic reduced gauge basis:
/// - complete ansatz: pullbacks of all SDGs;
/// - fully local (all gates with connected pattern subgraphs): pullbacks of
///   the single-qubit SDGs;
/// - well-conditioned quasi-local: pullbacks of the SDGs over the state
///   preparation factor set;
/// - nearest-neighbor parallel-CZ rings: single-qubit SDGs.
///
/// Refuses with `HypothesesNotMet` otherwise.
pub fn analytic_gauge_basis(emb: &Embedding) -> Result<Vec<SparseVec<Rat>>> {
    let n = emb.n();
    match emb.ansatz() {
        Ansatz::Complete => {
            Ok(Pattern::enumerate_nonzero(n).map(|s| sdg_pullback(emb, &s)).collect())
        }
        Ansatz::FullyLocal => {
            for gate in emb.gate_set().gates() {
                if !connected_pattern_subgraph(gate) {
                    return Err(Error::HypothesesNotMet(format!(
                        "gate {:?} has a disconnected pattern transfer subgraph",
                        gate.name()
                    )));
                }
            }
            Ok((1..=n).map(|q| sdg_pullback(emb, &Pattern::from_qubits(n, &[q]))).collect())
        }
        Ansatz::QuasiLocal { omega_s, .. } => {
            if well_conditioned_quasi_local(emb).is_ok() {
                Ok(omega_s.members().map(|nu| sdg_pullback(emb, &nu)).collect())
            } else if nn_cz_structure(emb).is_some() {
                Ok((1..=n).map(|q| sdg_pullback(emb, &Pattern::from_qubits(n, &[q]))).collect())
            } else {
                Err(Error::HypothesesNotMet(
                    "quasi-local ansatz is neither well-conditioned nor a \
                     nearest-neighbor parallel-CZ ring"
                        .into(),
                ))
            }
        }
        Ansatz::Custom { .. } => {
            Err(Error::HypothesesNotMet("custom ansatz has no analytic gauge theorem".into()))
        }
    }
}

/// Reduced preimage of the subsystem depolarizing gauge `d_s`, computed
/// blockwise from the inverse parameter transforms (no `4^n` enumeration).
fn sdg_pullback(emb: &Embedding, s: &Pattern) -> SparseVec<Rat> {
    let reduced = emb.reduced();
    let mut entries: Vec<(u32, Rat)> = Vec::new();
    match emb.ansatz() {
        Ansatz::Complete | Ansatz::FullyLocal => {
            for u in reduced.prep_patterns().collect::<Vec<_>>() {
                if u.intersects(s) {
                    entries.push((reduced.col(&ParamIndex::Prep(u)).unwrap(), rat_int(1)));
                }
            }
            for u in reduced.meas_patterns().collect::<Vec<_>>() {
                if u.intersects(s) {
                    entries.push((reduced.col(&ParamIndex::Meas(u)).unwrap(), rat_int(-1)));
                }
            }
            for (g, gate) in emb.gate_set().gates().iter().enumerate() {
                for a in reduced.gate_labels(g).collect::<Vec<_>>() {
                    let v = i64::from(gate.apply(&a).label.pattern().intersects(s))
                        - i64::from(a.pattern().intersects(s));
                    if v != 0 {
                        entries.push((reduced.col(&ParamIndex::Gate(g, a)).unwrap(), rat_int(v)));
                    }
                }
            }
        }
        Ansatz::QuasiLocal { omega_s, omega_m, .. } => {
            let x_spam = |mu: Pattern| -> Rat { rat_int(i64::from(mu.intersects(s))) };
            for nu in omega_s.members() {
                let r = crate::model::mobius_inverse_spam(&x_spam, &nu);
                if !r.is_zero() {
                    entries.push((reduced.col(&ParamIndex::Prep(nu)).unwrap(), r));
                }
            }
            for nu in omega_m.members() {
                let r = crate::model::mobius_inverse_spam(&x_spam, &nu);
                if !r.is_zero() {
                    entries.push((reduced.col(&ParamIndex::Meas(nu)).unwrap(), -r));
                }
            }
            for (g, gate) in emb.gate_set().gates().iter().enumerate() {
                let x_gate = |a: &Pauli| -> Rat {
                    rat_int(
                        i64::from(gate.apply(a).label.pattern().intersects(s))
                            - i64::from(a.pattern().intersects(s)),
                    )
                };
                for b in reduced.gate_labels(g).collect::<Vec<_>>() {
                    let r = crate::model::mobius_inverse_gate(&x_gate, &b);
                    if !r.is_zero() {
                        entries.push((reduced.col(&ParamIndex::Gate(g, b)).unwrap(), r));
                    }
                }
            }
        }
        Ansatz::Custom { .. } => unreachable!("no analytic path for custom ansatzes"),
    }
    SparseVec::from_entries(entries)
}

/// Checks the hypotheses of the well-conditioned quasi-local gauge theorem:
/// the prep factor set is contained in the measurement one, every gate
/// factor set passes the extended-support covariance certificate, and every
/// prep factor either lies in each gate's factor set or is closed under the
/// gate's extended support map.
pub fn well_conditioned_quasi_local(emb: &Embedding) -> Result<()> {
    let Ansatz::QuasiLocal { omega_s, omega_m, omega_gates } = emb.ansatz() else {
        return Err(Error::HypothesesNotMet("not a quasi-local ansatz".into()));
    };
    if !omega_s.is_subset_of(omega_m) {
        return Err(Error::HypothesesNotMet(
            "prep factor set is not contained in the measurement factor set".into(),
        ));
    }
    for (g, gate) in emb.gate_set().gates().iter().enumerate() {
        if !is_covariant(&omega_gates[g], gate) {
            return Err(Error::HypothesesNotMet(format!(
                "factor set for gate {:?} fails the covariance certificate",
                gate.name()
            )));
        }
        for nu in omega_s.members() {
            if !omega_gates[g].contains(&nu) && extended_support(gate, &nu) != nu {
                return Err(Error::HypothesesNotMet(format!(
                    "prep factor {nu} is neither in gate {:?}'s factor set nor closed \
                     under its extended support",
                    gate.name()
                )));
            }
        }
    }
    Ok(())
}

/// Recognizes the nearest-neighbor parallel-CZ ring configuration: two
/// alternating layers of CZs covering an even ring, with every factor set
/// equal to the ring's nearest-neighbor pairs. Returns the (even, odd)
/// gate indices, "even" being the layer containing the pair {1,2}.
pub fn nn_cz_structure(emb: &Embedding) -> Option<(usize, usize)> {
    let n = emb.n();
    if n < 6 || !n.is_multiple_of(2) {
        return None;
    }
    let Ansatz::QuasiLocal { omega_s, omega_m, omega_gates } = emb.ansatz() else {
        return None;
    };
    let nn = FactorSet::nn_ring(n);
    if *omega_s != nn || *omega_m != nn || omega_gates.iter().any(|om| *om != nn) {
        return None;
    }
    let gs = emb.gate_set();
    if gs.len() != 2 {
        return None;
    }
    let ring_pair = |block: &Pattern| -> Option<(usize, usize)> {
        let qs = block.qubits();
        if qs.len() != 2 {
            return None;
        }
        let (a, b) = (qs[0], qs[1]);
        if b == a + 1 || (a == 1 && b == n) {
            Some((a, b))
        } else {
            None
        }
    };
    let mut pair_sets: Vec<Vec<(usize, usize)>> = Vec::new();
    for gate in gs.gates() {
        let blocks = gate.blocks();
        if blocks.len() != n / 2 {
            return None;
        }
        let mut covered = Pattern::empty(n);
        let mut pairs = Vec::new();
        for block in blocks {
            let pair = ring_pair(block)?;
            if covered.intersects(block) {
                return None;
            }
            covered = covered.union(block);
            pairs.push(pair);
            // The block restriction must act exactly as a CZ.
            let (p, q) = (block.qubits()[0], block.qubits()[1]);
            let expect = [
                (Pauli::x_at(n, p), Pauli::x_at(n, p).mul_label(&Pauli::z_at(n, q))),
                (Pauli::x_at(n, q), Pauli::z_at(n, p).mul_label(&Pauli::x_at(n, q))),
                (Pauli::z_at(n, p), Pauli::z_at(n, p)),
                (Pauli::z_at(n, q), Pauli::z_at(n, q)),
            ];
            for (input, want) in expect {
                let out = gate.apply(&input);
                if out.sign != 1 || out.label != want {
                    return None;
                }
            }
        }
        if covered.weight() as usize != n {
            return None;
        }
        pairs.sort_unstable();
        pair_sets.push(pairs);
    }
    // Together the two layers must cover every ring pair exactly once.
    let mut all: Vec<(usize, usize)> = pair_sets.concat();
    all.sort_unstable();
    all.dedup();
    if all.len() != n {
        return None;
    }
    let first_has_12 = pair_sets[0].contains(&(1, 2));
    Some(if first_has_12 { (0, 1) } else { (1, 0) })
}

/// Dimension of the gate-parameter learnable space via the identity
/// `dim Q^T(Ker d) = rank [d; Q^T] - rank d`, where `d` is the vertex
/// incidence map of the gate-edge subgraph. Rows are per-edge and short,
/// which keeps the exact elimination fast.
pub fn gate_learnable_dim(emb: &Embedding, n_max: usize) -> Result<u32> {
    let n = emb.n();
    if n > n_max {
        return Err(Error::CapExceeded { n, n_max });
    }
    let vcount = (1u32 << n) - 1;
    let mut ech: Echelon<Rat> = Echelon::new();
    let mut parent: Vec<u32> = (0..vcount).collect();
    fn find(parent: &mut Vec<u32>, i: u32) -> u32 {
        if parent[i as usize] != i {
            let root = find(parent, parent[i as usize]);
            parent[i as usize] = root;
        }
        parent[i as usize]
    }
    let mut touched = vec![false; vcount as usize];
    for (g, gate) in emb.gate_set().gates().iter().enumerate() {
        for a in Pauli::enumerate_nonidentity(n) {
            let from = a.pattern().bits() - 1;
            let to = gate.apply(&a).label.pattern().bits() - 1;
            let mut entries: Vec<(u32, Rat)> = Vec::new();
            if from != to {
                entries.push((from, rat_int(1)));
                entries.push((to, rat_int(-1)));
            }
            for (c, v) in emb.pullback_unit(&ParamIndex::Gate(g, a)).iter() {
                entries.push((vcount + c, v.clone()));
            }
            ech.insert(SparseVec::from_entries(entries));
            touched[from as usize] = true;
            touched[to as usize] = true;
            let (rf, rt) = (find(&mut parent, from), find(&mut parent, to));
            if rf != rt {
                parent[rf as usize] = rt;
            }
        }
    }
    let touched_count = touched.iter().filter(|&&t| t).count() as u32;
    let mut roots: Vec<u32> =
        (0..vcount).filter(|&v| touched[v as usize]).map(|v| find(&mut parent, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    let incidence_rank = touched_count - roots.len() as u32;
    Ok(ech.rank() as u32 - incidence_rank)
}

/// Basis of the gate-parameter learnable space: the flow space of the
/// gate-edge subgraph (fundamental cycles over a spanning forest, plus the
/// self loops) pulled back through the embedding and row-reduced.
pub fn gate_learnable_space(emb: &Embedding, n_max: usize) -> Result<Vec<SparseVec<Rat>>> {
    let n = emb.n();
    if n > n_max {
        return Err(Error::CapExceeded { n, n_max });
    }
    let mut edges: Vec<(usize, Pauli, u32, u32)> = Vec::new();
    for (g, gate) in emb.gate_set().gates().iter().enumerate() {
        for a in Pauli::enumerate_nonidentity(n) {
            let from = a.pattern().bits();
            let to = gate.apply(&a).label.pattern().bits();
            edges.push((g, a, from, to));
        }
    }
    let vmax = 1usize << n;
    // Spanning forest as parent pointers; fundamental cycle per non-tree edge.
    let mut parent: Vec<Option<(u32, usize, bool)>> = vec![None; vmax];
    let mut depth: Vec<u32> = vec![0; vmax];
    fn comp_root(parent: &[Option<(u32, usize, bool)>], mut v: u32) -> u32 {
        while let Some((p, _, _)) = parent[v as usize] {
            v = p;
        }
        v
    }
    let mut ech: Echelon<Rat> = Echelon::new();
    for idx in 0..edges.len() {
        let (_, _, from, to) = edges[idx];
        if from == to {
            ech.insert(pullback_gate_edge(emb, &edges[idx]));
            continue;
        }
        let (rf, rt) = (comp_root(&parent, from), comp_root(&parent, to));
        if rf != rt {
            // Tree edge: re-root `from`'s component at `from`, hang it below `to`.
            reroot(&mut parent, from);
            parent[from as usize] = Some((to, idx, true));
            refresh_depths(&parent, &mut depth, vmax);
        } else {
            // Non-tree edge: cycle = edge + tree path from `to` back to `from`.
            let mut cycle: Vec<(usize, bool)> = vec![(idx, true)];
            tree_path(&parent, &depth, to, from, &mut cycle);
            let mut pulled: SparseVec<Rat> = SparseVec::new();
            for &(eidx, forward) in &cycle {
                let row = pullback_gate_edge(emb, &edges[eidx]);
                pulled.add_scaled(&row, &rat_int(if forward { 1 } else { -1 }));
            }
            ech.insert(pulled);
        }
    }
    return Ok(ech.rows().to_vec());

    fn reroot(parent: &mut [Option<(u32, usize, bool)>], v: u32) {
        let mut chain = Vec::new();
        let mut cur = v;
        while let Some((p, e, fwd)) = parent[cur as usize] {
            chain.push((cur, p, e, fwd));
            cur = p;
        }
        for &(child, p, e, fwd) in &chain {
            parent[p as usize] = Some((child, e, !fwd));
        }
        parent[v as usize] = None;
    }

    fn refresh_depths(parent: &[Option<(u32, usize, bool)>], depth: &mut [u32], vmax: usize) {
        for v in 0..vmax as u32 {
            let mut d = 0;
            let mut cur = v;
            while let Some((p, _, _)) = parent[cur as usize] {
                cur = p;
                d += 1;
            }
            depth[v as usize] = d;
        }
    }

    fn tree_path(
        parent: &[Option<(u32, usize, bool)>],
        depth: &[u32],
        mut a: u32,
        mut b: u32,
        out: &mut Vec<(usize, bool)>,
    ) {
        let mut tail: Vec<(usize, bool)> = Vec::new();
        while depth[a as usize] > depth[b as usize] {
            let (p, e, fwd) = parent[a as usize].unwrap();
            out.push((e, fwd));
            a = p;
        }
        while depth[b as usize] > depth[a as usize] {
            let (p, e, fwd) = parent[b as usize].unwrap();
            tail.push((e, !fwd));
            b = p;
        }
        while a != b {
            let (pa, ea, fa) = parent[a as usize].unwrap();
            out.push((ea, fa));
            a = pa;
            let (pb, eb, fb) = parent[b as usize].unwrap();
            tail.push((eb, !fb));
            b = pb;
        }
        tail.reverse();
        out.extend(tail);
    }
}

fn pullback_gate_edge(emb: &Embedding, edge: &(usize, Pauli, u32, u32)) -> SparseVec<Rat> {
    emb.pullback_unit(&ParamIndex::Gate(edge.0, edge.1))
}

/// Boundary operator for fully-local models with 2-qubit gates: maps a
/// gate-block reduced vector to the prep-block imbalance its pattern
/// transfers create. Zero boundary characterizes the learnable gate
/// combinations.
pub fn boundary(emb: &Embedding, gate_vec: &SparseVec<Rat>) -> Result<SparseVec<Rat>> {
    require_fully_local_two_qubit(emb)?;
    let n = emb.n();
    let reduced = emb.reduced();
    let mut entries: Vec<(u32, Rat)> = Vec::new();
    for (col, v) in gate_vec.iter() {
        let ParamIndex::Gate(g, a) = reduced.at(*col) else {
            return Err(Error::Unsupported("boundary input must be gate-block only".into()));
        };
        let gate = emb.gate_set().gate(g);
        let image = gate.apply(&a).label;
        for q in gate.support().qubits() {
            let d = i64::from(a.pattern().contains_qubit(q))
                - i64::from(image.pattern().contains_qubit(q));
            if d != 0 {
                let target =
                    reduced.col(&ParamIndex::Prep(Pattern::from_qubits(n, &[q]))).unwrap();
                entries.push((target, v.clone() * rat_int(d)));
            }
        }
    }
    Ok(SparseVec::from_entries(entries))
}

fn require_fully_local_two_qubit(emb: &Embedding) -> Result<()> {
    if !matches!(emb.ansatz(), Ansatz::FullyLocal)
        || emb.gate_set().gates().iter().any(|g| g.support().weight() != 2)
    {
        return Err(Error::NotFullyLocalTwoQubit);
    }
    Ok(())
}

/// A directed closed walk on the gate-edge subgraph: the witness cycle for
/// a reduced gate-parameter covector. Every step applies one gate to the
/// running label's pattern.
#[derive(Clone, Debug)]
pub struct Walk {
    pub start: Pattern,
    pub steps: Vec<(usize, Pauli)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CycleKind {
    SelfLoop,
    ReversedPair,
    Triangle,
    PairedType1,
    Chain,
    Loop,
}

#[derive(Clone, Debug)]
pub struct GateCycle {
    pub covector: SparseVec<Rat>,
    pub witness: Walk,
    pub kind: CycleKind,
}

struct MiniEdge {
    gate: usize,
    /// Full-register label supported inside the gate's support.
    label: Pauli,
    /// Mini patterns over the 2-qubit support: 2 = low qubit only,
    /// 1 = high qubit only, 3 = both.
    from: u8,
    to: u8,
}

/// An anchor edge surviving stage 1, with its reverse-direction partner.
#[derive(Clone, Debug)]
struct Anchor {
    gate: usize,
    label: Pauli,
    /// Qubits losing (+1) or gaining (-1) pattern weight along the anchor.
    boundary: Vec<(usize, i8)>,
    partner_gate: usize,
    partner_label: Pauli,
    support: Pattern,
}

/// Two-stage search for a reduced cycle basis of the gate-parameter
/// learnable space (fully-local ansatz, 2-qubit gates). Stage 1 emits a
/// per-support-subgraph cycle basis containing a reversed-pair 2-cycle
/// through every edge; stage 2 resolves cross-support dependencies by
/// chasing boundaries, emitting paired, chain or loop witnesses padded
/// with X on the bystander qubits of the participating supports.
pub fn reduced_cycle_basis_gates(emb: &Embedding) -> Result<Vec<GateCycle>> {
    require_fully_local_two_qubit(emb)?;
    let n = emb.n();
    let reduced = emb.reduced();
    let mut out: Vec<GateCycle> = Vec::new();

    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (g, gate) in emb.gate_set().gates().iter().enumerate() {
        groups.entry(gate.support().bits()).or_default().push(g);
    }

    let unit = |g: usize, a: &Pauli| -> SparseVec<Rat> {
        SparseVec::unit(reduced.col(&ParamIndex::Gate(g, *a)).unwrap())
    };

    let mut anchors: Vec<Anchor> = Vec::new();

    for (&supp_bits, gate_ids) in &groups {
        let supp = Pattern::new(n, supp_bits);
        let qs = supp.qubits();
        let (qlow, qhigh) = (qs[0], qs[1]);
        let mini = |pat: Pattern| -> u8 {
            (u8::from(pat.contains_qubit(qlow)) << 1) | u8::from(pat.contains_qubit(qhigh))
        };
        let mut loops: Vec<MiniEdge> = Vec::new();
        let mut pairs: BTreeMap<(u8, u8), (Vec<MiniEdge>, Vec<MiniEdge>)> = BTreeMap::new();
        for &g in gate_ids {
            let gate = emb.gate_set().gate(g);
            for a in reduced.gate_labels(g).collect::<Vec<_>>() {
                let from = mini(a.pattern());
                let to = mini(gate.apply(&a).label.pattern());
                let edge = MiniEdge { gate: g, label: a, from, to };
                if from == to {
                    loops.push(edge);
                } else {
                    let key = (from.min(to), from.max(to));
                    let slot = pairs.entry(key).or_default();
                    if from == key.0 {
                        slot.0.push(edge); // forward: low mini vertex -> high
                    } else {
                        slot.1.push(edge);
                    }
                }
            }
        }
        // Stage 1a: self loops.
        for e in &loops {
            out.push(GateCycle {
                covector: unit(e.gate, &e.label),
                witness: Walk { start: e.label.pattern(), steps: vec![(e.gate, e.label)] },
                kind: CycleKind::SelfLoop,
            });
        }
        // Stage 1b: reversed pairs. Emit b_j + f_0 (j >= 1) then f_i + b_0,
        // keeping b_0 as the anchor for the vertex pair.
        let mut group_anchors: BTreeMap<(u8, u8), &MiniEdge> = BTreeMap::new();
        for (key, (fwd, bwd)) in &pairs {
            if fwd.is_empty() || bwd.is_empty() || fwd.len() != bwd.len() {
                return Err(Error::Unsupported(
                    "unbalanced pattern-transfer multi-edges".into(),
                ));
            }
            for b in bwd.iter().skip(1) {
                out.push(two_cycle(b, &fwd[0], unit(b.gate, &b.label), unit(fwd[0].gate, &fwd[0].label)));
            }
            for f in fwd.iter() {
                out.push(two_cycle(f, &bwd[0], unit(f.gate, &f.label), unit(bwd[0].gate, &bwd[0].label)));
            }
            group_anchors.insert(*key, &bwd[0]);
        }
        // Stage 1c: with all three vertex pairs connected a directed
        // triangle completes the subgraph flow space; it consumes the
        // anchor between mini vertices 1 and 2.
        let has_triangle =
            [(1u8, 2u8), (1, 3), (2, 3)].iter().all(|k| group_anchors.contains_key(k));
        if has_triangle {
            let e32 = group_anchors[&(2, 3)]; // 3 -> 2
            let e21 = group_anchors[&(1, 2)]; // 2 -> 1
            let e13 = &pairs[&(1, 3)].0[0]; // 1 -> 3
            let mut cov = unit(e32.gate, &e32.label);
            cov.add(&unit(e21.gate, &e21.label));
            cov.add(&unit(e13.gate, &e13.label));
            out.push(GateCycle {
                covector: cov,
                witness: Walk {
                    start: e32.label.pattern(),
                    steps: vec![
                        (e32.gate, e32.label),
                        (e21.gate, e21.label),
                        (e13.gate, e13.label),
                    ],
                },
                kind: CycleKind::Triangle,
            });
            group_anchors.remove(&(1, 2));
        }
        // Register surviving anchors for stage 2.
        for (key, edge) in group_anchors {
            let has = |m: u8, q: usize| -> i8 {
                let bit = if q == qlow { 2 } else { 1 };
                i8::from(m & bit != 0)
            };
            let bnd: Vec<(usize, i8)> = [qlow, qhigh]
                .into_iter()
                .filter_map(|q| {
                    let d = has(edge.from, q) - has(edge.to, q);
                    (d != 0).then_some((q, d))
                })
                .collect();
            let partner = &pairs[&key].0[0];
            anchors.push(Anchor {
                gate: edge.gate,
                label: edge.label,
                boundary: bnd,
                partner_gate: partner.gate,
                partner_label: partner.label,
                support: supp,
            });
        }
    }

    // Stage 2: fundamental cycles of the anchor graph. Nodes are qubits
    // plus a virtual ground 0; a type-1 anchor grounds its boundary qubit,
    // a type-2 anchor connects its two boundary qubits.
    anchors.sort_by_key(|a| (a.gate, a.label.key()));
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let mut tree: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 1];
    let mut nontree: Vec<usize> = Vec::new();
    let hplus_ends = |a: &Anchor| -> (usize, usize) {
        match a.boundary.as_slice() {
            [(q, _)] => (0, *q),
            [(q1, _), (q2, _)] => (*q1, *q2),
            _ => unreachable!("anchors have type-1 or type-2 boundaries"),
        }
    };
    for (i, a) in anchors.iter().enumerate() {
        let (u, v) = hplus_ends(a);
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            tree[u].push((v, i));
            tree[v].push((u, i));
        } else {
            nontree.push(i);
        }
    }
    for &i in &nontree {
        let ids = hplus_cycle(&tree, i, hplus_ends(&anchors[i]), n);
        out.push(emit_stage2(emb, &anchors, &ids, unit)?);
    }

    Ok(out)
}

fn two_cycle(
    first: &MiniEdge,
    second: &MiniEdge,
    cov1: SparseVec<Rat>,
    cov2: SparseVec<Rat>,
) -> GateCycle {
    let mut cov = cov1;
    cov.add(&cov2);
    GateCycle {
        covector: cov,
        witness: Walk {
            start: first.label.pattern(),
            steps: vec![(first.gate, first.label), (second.gate, second.label)],
        },
        kind: CycleKind::ReversedPair,
    }
}

/// Fundamental cycle of a non-tree anchor edge: the extra edge followed by
/// the tree path between its endpoints.
fn hplus_cycle(
    tree: &[Vec<(usize, usize)>],
    extra: usize,
    ends: (usize, usize),
    n: usize,
) -> Vec<usize> {
    let (from, to) = ends;
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n + 1];
    let mut visited = vec![false; n + 1];
    let mut queue = std::collections::VecDeque::new();
    visited[to] = true;
    queue.push_back(to);
    while let Some(v) = queue.pop_front() {
        if v == from {
            break;
        }
        for &(w, e) in &tree[v] {
            if !visited[w] {
                visited[w] = true;
                prev[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    let mut cycle = vec![extra];
    let mut cur = from;
    while let Some((p, e)) = prev[cur] {
        cycle.push(e);
        cur = p;
    }
    cycle
}

/// Builds the stage-2 witness for anchors forming a cycle in the ground
/// graph, classifying it as paired-type-1, chain, or loop.
fn emit_stage2(
    emb: &Embedding,
    anchors: &[Anchor],
    ids: &[usize],
    unit: impl Fn(usize, &Pauli) -> SparseVec<Rat>,
) -> Result<GateCycle> {
    let n = emb.n();
    let type1: Vec<usize> =
        ids.iter().copied().filter(|&i| anchors[i].boundary.len() == 1).collect();
    let type2: Vec<usize> =
        ids.iter().copied().filter(|&i| anchors[i].boundary.len() == 2).collect();
    let mut union = Pattern::empty(n);
    for &i in ids {
        union = union.union(&anchors[i].support);
    }
    // X padding on the bystander qubits of the participating supports.
    let pad = |a: &Pauli, supp: &Pattern| -> Pauli {
        let extra = union.bits() & !supp.bits();
        Pauli::new(n, a.x_bits() | extra, a.z_bits())
    };

    let mut steps: Vec<(usize, Pauli)> = Vec::new();
    let mut cov: SparseVec<Rat> = SparseVec::new();
    let kind;
    if type1.len() == 2 {
        // Ground-to-ground chain: drop the first grounded qubit, walk the
        // hole along the type-2 supports, refill at the second.
        let lead = type1[0];
        let tail = type1[1];
        let q_start = anchors[lead].boundary[0].0;
        let q_end = anchors[tail].boundary[0].0;
        steps.push((anchors[lead].gate, pad(&anchors[lead].label, &anchors[lead].support)));
        cov.add(&unit(anchors[lead].gate, &anchors[lead].label));
        let mut remaining: Vec<usize> = type2.clone();
        let mut hole = q_start;
        while hole != q_end || !remaining.is_empty() {
            let pos = remaining
                .iter()
                .position(|&i| anchors[i].boundary.iter().any(|&(q, _)| q == hole))
                .ok_or_else(|| {
                    Error::Unsupported("broken chain in stage-2 boundary chasing".into())
                })?;
            let i = remaining.remove(pos);
            let a = &anchors[i];
            let other = a.boundary.iter().find(|&&(q, _)| q != hole).map(|&(q, _)| q).unwrap();
            let (gate, label) = oriented_t2(a, hole);
            steps.push((gate, pad(&label, &a.support)));
            cov.add(&unit(gate, &label));
            hole = other;
        }
        steps.push((
            anchors[tail].partner_gate,
            pad(&anchors[tail].partner_label, &anchors[tail].support),
        ));
        cov.add(&unit(anchors[tail].partner_gate, &anchors[tail].partner_label));
        kind = if type2.is_empty() { CycleKind::PairedType1 } else { CycleKind::Chain };
    } else if type1.is_empty() {
        // Loop of type-2 anchors: the hole travels around the cycle.
        let first = type2[0];
        let mut hole = anchors[first].boundary[0].0;
        let start_hole = hole;
        let mut remaining: Vec<usize> = type2.clone();
        loop {
            let pos = remaining
                .iter()
                .position(|&i| anchors[i].boundary.iter().any(|&(q, _)| q == hole));
            let Some(pos) = pos else { break };
            let i = remaining.remove(pos);
            let a = &anchors[i];
            let other = a.boundary.iter().find(|&&(q, _)| q != hole).map(|&(q, _)| q).unwrap();
            let (gate, label) = oriented_t2(a, hole);
            steps.push((gate, pad(&label, &a.support)));
            cov.add(&unit(gate, &label));
            hole = other;
        }
        if hole != start_hole || !remaining.is_empty() {
            return Err(Error::Unsupported("broken loop in stage-2 boundary chasing".into()));
        }
        kind = CycleKind::Loop;
    } else {
        return Err(Error::Unsupported(
            "stage-2 cycle must contain zero or two type-1 anchors".into(),
        ));
    }

    let start = steps[0].1.pattern();
    let walk = Walk { start, steps };
    verify_walk(emb, &walk)?;
    debug_assert_eq!(cov, emb.pullback(&walk_edges(&walk)));
    Ok(GateCycle { covector: cov, witness: walk, kind })
}

/// Orients a type-2 anchor so the hole currently at `hole` moves to the
/// support's other qubit.
fn oriented_t2(a: &Anchor, hole: usize) -> (usize, Pauli) {
    if !a.label.pattern().contains_qubit(hole) {
        (a.gate, a.label)
    } else {
        (a.partner_gate, a.partner_label)
    }
}

fn walk_edges(walk: &Walk) -> Vec<(ParamIndex, Rat)> {
    walk.steps.iter().map(|(g, a)| (ParamIndex::Gate(*g, *a), rat_int(1))).collect()
}

/// Checks that a walk's patterns chain and close.
pub fn verify_walk(emb: &Embedding, walk: &Walk) -> Result<()> {
    let mut cur = walk.start;
    for (g, a) in &walk.steps {
        if a.pattern() != cur {
            return Err(Error::NotARootedCycle(format!(
                "walk step label {a} has pattern {} but the walk is at {cur}",
                a.pattern()
            )));
        }
        cur = emb.gate_set().gate(*g).apply(a).label.pattern();
    }
    if cur != walk.start {
        return Err(Error::NotARootedCycle("walk does not close".into()));
    }
    Ok(())
}

/// The explicit cycle families of the nearest-neighbor parallel-CZ ring
/// model, as complete-space vectors: 13n + 9n + n gate cycles and the 4n
/// SPAM-completing rooted cycles.
pub struct NnCzFixtures {
    pub gate_cycles: Vec<Vec<(ParamIndex, Rat)>>,
    pub supplement: Vec<Vec<(ParamIndex, Rat)>>,
}

/// Builds the fixture families for an even ring of `n >= 6` qubits with
/// layers `ge` (pairs {2k-1,2k}) and `go` (pairs {2k,2k+1}).
pub fn nn_cz_fixture_bases(
    n: usize,
    ge: usize,
    go: usize,
    gs: &crate::clifford::GateSet,
) -> Result<NnCzFixtures> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::Unsupported("fixtures require an even ring of at least 6".into()));
    }
    let wrap = |q: usize| -> usize { (q - 1) % n + 1 };
    let at = |label: &str, placement: &[usize]| -> Pauli {
        crate::clifford::embed_label(&label.parse().unwrap(), placement, n)
    };
    let one = rat_int(1);
    let mut gate_cycles: Vec<Vec<(ParamIndex, Rat)>> = Vec::new();

    // Single-window families: the 13 cycles of a lone CZ, per layer window.
    let mut thirteen = |gate: usize, w: [usize; 2]| {
        for lbl in ["IZ", "ZI", "ZZ", "XX", "YY", "XY", "YX"] {
            gate_cycles.push(vec![(ParamIndex::Gate(gate, at(lbl, &w)), one.clone())]);
        }
        for (a, b) in
            [("XI", "XZ"), ("YI", "YZ"), ("XI", "YZ"), ("IX", "ZX"), ("IY", "ZY"), ("IX", "ZY")]
        {
            gate_cycles.push(vec![
                (ParamIndex::Gate(gate, at(a, &w)), one.clone()),
                (ParamIndex::Gate(gate, at(b, &w)), one.clone()),
            ]);
        }
    };
    for k in 1..=n / 2 {
        thirteen(ge, [2 * k - 1, 2 * k]);
        thirteen(go, [2 * k, wrap(2 * k + 1)]);
    }

    // Straddling weight-2 pairs: a and its image under the layer.
    let mut straddle = |gate: usize, w: [usize; 2]| {
        for p in ["X", "Y", "Z"] {
            for q in ["X", "Y", "Z"] {
                let a = at(&format!("{p}{q}"), &w);
                let a2 = gs.gate(gate).apply(&a).label;
                gate_cycles.push(vec![
                    (ParamIndex::Gate(gate, a), one.clone()),
                    (ParamIndex::Gate(gate, a2), one.clone()),
                ]);
            }
        }
    };
    for k in 1..=n / 2 {
        straddle(ge, [2 * k, wrap(2 * k + 1)]);
        straddle(go, [wrap(2 * k + 1), wrap(2 * k + 2)]);
    }

    // Two-gate four-term cycles over five-qubit windows.
    for k in 1..=n / 2 {
        let w: Vec<usize> = (0..5).map(|d| wrap(2 * k - 1 + d)).collect();
        gate_cycles.push(vec![
            (ParamIndex::Gate(go, at("IXIXI", &w)), one.clone()),
            (ParamIndex::Gate(ge, at("IXZXZ", &w)), one.clone()),
            (ParamIndex::Gate(go, at("ZXIXZ", &w)), one.clone()),
            (ParamIndex::Gate(ge, at("ZXZXI", &w)), one.clone()),
        ]);
        let w2: Vec<usize> = (0..5).map(|d| wrap(2 * k + d)).collect();
        gate_cycles.push(vec![
            (ParamIndex::Gate(go, at("IXIXI", &w2)), one.clone()),
            (ParamIndex::Gate(ge, at("ZXZXI", &w2)), one.clone()),
            (ParamIndex::Gate(go, at("ZXIXZ", &w2)), one.clone()),
            (ParamIndex::Gate(ge, at("IXZXZ", &w2)), one.clone()),
        ]);
    }

    // SPAM-completing rooted cycles.
    let pat = |qs: &[usize]| -> Pattern {
        let qs: Vec<usize> = qs.iter().map(|&q| wrap(q)).collect();
        Pattern::from_qubits(n, &qs)
    };
    let mut supplement: Vec<Vec<(ParamIndex, Rat)>> = Vec::new();
    for k in 1..=n / 2 {
        for q in [2 * k - 1, 2 * k] {
            if k == 1 && q == 1 {
                continue; // the removed element of this family
            }
            supplement.push(vec![
                (ParamIndex::Prep(pat(&[q])), one.clone()),
                (ParamIndex::Gate(ge, at("X", &[q])), one.clone()),
                (ParamIndex::Meas(pat(&[2 * k - 1, 2 * k])), one.clone()),
            ]);
        }
    }
    for k in 1..=n / 2 {
        for q in [2 * k, 2 * k + 1] {
            supplement.push(vec![
                (ParamIndex::Prep(pat(&[wrap(q)])), one.clone()),
                (ParamIndex::Gate(go, at("X", &[wrap(q)])), one.clone()),
                (ParamIndex::Meas(pat(&[2 * k, 2 * k + 1])), one.clone()),
            ]);
        }
    }
    for k in 1..=n {
        supplement.push(vec![
            (ParamIndex::Prep(pat(&[k, k + 1])), one.clone()),
            (ParamIndex::Meas(pat(&[k, k + 1])), one.clone()),
        ]);
    }
    for k in 1..=n {
        supplement.push(vec![
            (ParamIndex::Prep(pat(&[k])), one.clone()),
            (ParamIndex::Meas(pat(&[k])), one.clone()),
        ]);
    }
    supplement.push(vec![
        (ParamIndex::Prep(pat(&[n, 3])), one.clone()),
        (ParamIndex::Gate(go, at("XX", &[n, 3])), one.clone()),
        (ParamIndex::Meas(pat(&[n, 1, 2, 3])), one.clone()),
    ]);

    assert_eq!(gate_cycles.len(), 13 * n + 9 * n + n);
    assert_eq!(supplement.len(), 4 * n);
    Ok(NnCzFixtures { gate_cycles, supplement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{builtin, tensor_parallel, GateSet};
    use crate::linalg::same_span;

    fn cz_single() -> Embedding {
        let gs = GateSet::new(2, vec![builtin("CZ").unwrap()]).unwrap();
        Embedding::new(gs, Ansatz::Complete, 6).unwrap()
    }

    fn cz_ring_fully_local(n: usize) -> Embedding {
        let gates = (1..=n)
            .map(|i| {
                let j = i % n + 1;
                tensor_parallel(n, &[(builtin("CZ").unwrap(), vec![i, j])], format!("CZ_{i}{j}"))
                    .unwrap()
            })
            .collect();
        let gs = GateSet::new(n, gates).unwrap();
        Embedding::new(gs, Ansatz::FullyLocal, 6).unwrap()
    }

    #[test]
    fn complete_cz_dimensions() {
        let emb = cz_single();
        let report = reduced_spaces_brute(&emb, 6).unwrap();
        assert_eq!(
            (report.dim_x_r, report.dim_l_r, report.dim_x_r_gate, report.dim_l_r_gate),
            (21, 18, 15, Some(13))
        );
        assert_eq!(report.dim_t_r, 3);
        let analytic = reduced_spaces(&emb, 6).unwrap();
        assert_eq!(analytic.method, Method::Analytic);
        assert_eq!(analytic.dim_t_r, 3);
        assert!(same_span(&analytic.gauge_basis, &report.gauge_basis));
    }

    #[test]
    fn fully_local_ring_dimensions() {
        for n in [3usize, 4] {
            let emb = cz_ring_fully_local(n);
            let report = reduced_spaces(&emb, 6).unwrap();
            assert_eq!(report.method, Method::Analytic);
            assert_eq!(report.dim_x_r as usize, 17 * n);
            assert_eq!(report.dim_t_r as usize, n);
            assert_eq!(report.dim_l_r as usize, 16 * n);
            assert_eq!(report.dim_l_r_gate, Some(14 * n as u32));
            let brute = reduced_spaces_brute(&emb, 6).unwrap();
            assert!(same_span(&report.gauge_basis, &brute.gauge_basis));
            assert!(same_span(&report.learnable_basis, &brute.learnable_basis));
        }
    }

    #[test]
    fn swap_gate_forces_brute_force() {
        let gs = GateSet::new(2, vec![builtin("SWAP").unwrap()]).unwrap();
        let emb = Embedding::new(gs, Ansatz::FullyLocal, 6).unwrap();
        assert!(matches!(analytic_gauge_basis(&emb), Err(Error::HypothesesNotMet(_))));
        let report = reduced_spaces(&emb, 6).unwrap();
        assert_eq!(report.method, Method::BruteForce);
        // The SPAM blocks still pin the gauge space to the two singleton
        // depolarizing directions; SWAP changes the gate-learnable count.
        assert_eq!(report.dim_t_r, 2);
        assert_eq!(report.dim_l_r_gate, Some(14));
    }

    #[test]
    fn learnability_queries() {
        let emb = cz_ring_fully_local(4);
        let report = reduced_spaces(&emb, 6).unwrap();
        let reduced = emb.reduced();
        let j = Pattern::from_qubits(4, &[2]);
        let prep = SparseVec::<Rat>::unit(reduced.col(&ParamIndex::Prep(j)).unwrap());
        let mut pair = prep.clone();
        pair.add(&SparseVec::unit(reduced.col(&ParamIndex::Meas(j)).unwrap()));
        assert!(is_learnable(&report, &pair));
        assert!(!is_learnable(&report, &prep));
        assert!(is_learnable(&report, &SparseVec::new()));
    }

    #[test]
    fn boundary_examples() {
        let emb = cz_ring_fully_local(4);
        let reduced = emb.reduced();
        let g12 = emb.gate_set().index_of("CZ_12").unwrap();
        let col = |g: usize, lbl: &str, place: &[usize]| {
            let a = crate::clifford::embed_label(&lbl.parse().unwrap(), place, 4);
            reduced.col(&ParamIndex::Gate(g, a)).unwrap()
        };
        // CZ_{12}, a = XI: pattern 10 -> 11 gains weight on qubit 2:
        // boundary = -theta^S_2.
        let b = boundary(&emb, &SparseVec::unit(col(g12, "XI", &[1, 2]))).unwrap();
        let s2 = reduced.col(&ParamIndex::Prep(Pattern::from_qubits(4, &[2]))).unwrap();
        assert_eq!(b, SparseVec::from_entries(vec![(s2, rat_int(-1))]));
        // ZZ is fixed by CZ: zero boundary.
        let b = boundary(&emb, &SparseVec::unit(col(g12, "ZZ", &[1, 2]))).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn boundary_of_swap_edge() {
        let swap12 =
            tensor_parallel(3, &[(builtin("SWAP").unwrap(), vec![1, 2])], "SWAP_12").unwrap();
        let gs = GateSet::new(3, vec![swap12]).unwrap();
        let emb = Embedding::new(gs, Ansatz::FullyLocal, 6).unwrap();
        let reduced = emb.reduced();
        let a = crate::clifford::embed_label(&"XI".parse().unwrap(), &[1, 2], 3);
        let b = boundary(&emb, &SparseVec::unit(reduced.col(&ParamIndex::Gate(0, a)).unwrap()))
            .unwrap();
        let s1 = reduced.col(&ParamIndex::Prep(Pattern::from_qubits(3, &[1]))).unwrap();
        let s2 = reduced.col(&ParamIndex::Prep(Pattern::from_qubits(3, &[2]))).unwrap();
        assert_eq!(b, SparseVec::from_entries(vec![(s1, rat_int(1)), (s2, rat_int(-1))]));
    }

    #[test]
    fn single_qubit_sdgs_lie_in_the_fully_local_image() {
        // Singleton depolarizing directions have exact preimages under the
        // fully-local embedding, and their gate-block entries vanish for
        // subsets containing or disjoint from a gate's support.
        let n = 4;
        let emb = cz_ring_fully_local(n);
        let ptg = crate::ptg::build_ptg(emb.gate_set(), 6).unwrap();
        for q in 1..=n {
            let d = ptg.sdg(&Pattern::from_qubits(n, &[q]));
            assert!(emb.q_inverse(&d, 6).is_ok(), "singleton SDG not in the image");
        }
        let g12 = emb.gate_set().index_of("CZ_12").unwrap();
        let block = ptg.space().gate_block(g12);
        for s in [
            Pattern::from_qubits(n, &[1, 2]),
            Pattern::from_qubits(n, &[1, 2, 3]),
            Pattern::from_qubits(n, &[3, 4]),
            Pattern::from_qubits(n, &[3]),
        ] {
            let d = ptg.sdg(&s);
            let gate_part: Vec<_> =
                d.iter().filter(|(c, _)| block.contains(c)).collect();
            assert!(gate_part.is_empty(), "SDG at {s} touches the CZ_12 block");
        }
    }

    #[test]
    fn single_cz_reduced_cycles_match_gate_learnable_space() {
        let gs = GateSet::new(2, vec![builtin("CZ").unwrap()]).unwrap();
        let emb = Embedding::new(gs, Ansatz::FullyLocal, 6).unwrap();
        let cycles = reduced_cycle_basis_gates(&emb).unwrap();
        assert_eq!(cycles.len(), 13);
        let direct = gate_learnable_space(&emb, 6).unwrap();
        let covs: Vec<SparseVec<Rat>> = cycles.iter().map(|c| c.covector.clone()).collect();
        assert!(same_span(&covs, &direct));
        assert_eq!(gate_learnable_dim(&emb, 6).unwrap(), 13);
        for c in &cycles {
            verify_walk(&emb, &c.witness).unwrap();
            assert!(boundary(&emb, &c.covector).unwrap().is_zero());
        }
    }

    #[test]
    fn cz_ring_two_gate_cycles() {
        let n = 4;
        let emb = cz_ring_fully_local(n);
        let cycles = reduced_cycle_basis_gates(&emb).unwrap();
        assert_eq!(cycles.len(), 14 * n);
        let covs: Vec<SparseVec<Rat>> = cycles.iter().map(|c| c.covector.clone()).collect();
        let direct = gate_learnable_space(&emb, 6).unwrap();
        assert!(same_span(&covs, &direct));
        // The paired-type-1 family theta^{G_i}_{XI} + theta^{G_{i+1}}_{ZX}.
        let reduced = emb.reduced();
        let g1 = emb.gate_set().index_of("CZ_12").unwrap();
        let g2 = emb.gate_set().index_of("CZ_23").unwrap();
        let xi = crate::clifford::embed_label(&"XI".parse().unwrap(), &[1, 2], n);
        let zx = crate::clifford::embed_label(&"ZX".parse().unwrap(), &[2, 3], n);
        let mut expect: SparseVec<Rat> =
            SparseVec::unit(reduced.col(&ParamIndex::Gate(g1, xi)).unwrap());
        expect.add(&SparseVec::unit(reduced.col(&ParamIndex::Gate(g2, zx)).unwrap()));
        assert!(cycles.iter().any(|c| c.covector == expect), "missing the 2-gate chain cycle");
        let n_pairs = cycles.iter().filter(|c| c.kind == CycleKind::PairedType1).count();
        assert_eq!(n_pairs, n);
    }

    #[test]
    fn swap_ring_loop_case() {
        // A ring of SWAPs exercises the stage-2 loop construction.
        let n = 3;
        let gates: Vec<_> = (1..=n)
            .map(|i| {
                let j = i % n + 1;
                tensor_parallel(
                    n,
                    &[(builtin("SWAP").unwrap(), vec![i, j])],
                    format!("SWAP_{i}{j}"),
                )
                .unwrap()
            })
            .collect();
        let gs = GateSet::new(n, gates).unwrap();
        let emb = Embedding::new(gs, Ansatz::FullyLocal, 6).unwrap();
        let cycles = reduced_cycle_basis_gates(&emb).unwrap();
        let covs: Vec<SparseVec<Rat>> = cycles.iter().map(|c| c.covector.clone()).collect();
        let direct = gate_learnable_space(&emb, 6).unwrap();
        assert!(same_span(&covs, &direct));
        assert!(cycles.iter().any(|c| c.kind == CycleKind::Loop));
        for c in &cycles {
            verify_walk(&emb, &c.witness).unwrap();
        }
    }

    #[test]
    fn mixed_swap_iswap_chain_case() {
        // CZ and SWAP chains with an iSWAP: all three subgraph shapes and
        // the chain-terminated stage-2 case.
        let n = 4;
        let mk = |name: &str, a: usize, b: usize| {
            tensor_parallel(n, &[(builtin(name).unwrap(), vec![a, b])], format!("{name}_{a}{b}"))
                .unwrap()
        };
        let gs =
            GateSet::new(n, vec![mk("CZ", 1, 2), mk("SWAP", 2, 3), mk("ISWAP", 3, 4)]).unwrap();
        let emb = Embedding::new(gs, Ansatz::FullyLocal, 6).unwrap();
        let cycles = reduced_cycle_basis_gates(&emb).unwrap();
        let covs: Vec<SparseVec<Rat>> = cycles.iter().map(|c| c.covector.clone()).collect();
        let direct = gate_learnable_space(&emb, 6).unwrap();
        assert!(same_span(&covs, &direct));
        assert_eq!(covs.len(), gate_learnable_dim(&emb, 6).unwrap() as usize);
        assert!(cycles.iter().any(|c| c.kind == CycleKind::Chain));
        assert!(cycles.iter().any(|c| c.kind == CycleKind::Triangle));
        for c in &cycles {
            verify_walk(&emb, &c.witness).unwrap();
            assert!(boundary(&emb, &c.covector).unwrap().is_zero());
        }
    }
}
