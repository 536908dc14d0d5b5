//! Independent oracles for the acceptance suite. Nothing here reuses the
//! library's tableau propagation or graph algebra: expectations come from
//! dense Pauli-transfer-matrix multiplication over complex unitaries, and
//! the cycle/cut oracles are the textbook spanning-tree and single-vertex
//! constructions.

#![allow(dead_code)]

use gatenoise::clifford::{builtin, tensor_parallel, Clifford, GateSet, SqCatalog};
use gatenoise::design::{ExperimentSpec, Layer};
use gatenoise::linalg::SparseVec;
use gatenoise::model::{Embedding, NoiseModel};
use gatenoise::pauli::{Pattern, Pauli};
use gatenoise::ptg::{Ptg, ROOT};
use gatenoise::scalar::rat_int;
use gatenoise::space::ParamIndex;
use gatenoise::Rat;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

// ---------------------------------------------------------------------
// Complex matrices.

pub type C = (f64, f64);

fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn conj(a: C) -> C {
    (a.0, -a.1)
}

#[derive(Clone)]
pub struct CMat {
    pub dim: usize,
    pub data: Vec<C>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        CMat { dim, data: vec![(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMat::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = (1.0, 0.0);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        let d = self.dim;
        let mut out = CMat::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a.0 == 0.0 && a.1 == 0.0 {
                    continue;
                }
                for c in 0..d {
                    let v = cmul(a, other.get(k, c));
                    out.data[r * d + c] = cadd(out.data[r * d + c], v);
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CMat {
        let d = self.dim;
        let mut out = CMat::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.set(r, c, conj(self.get(c, r)));
            }
        }
        out
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let d1 = self.dim;
        let d2 = other.dim;
        let mut out = CMat::zeros(d1 * d2);
        for r1 in 0..d1 {
            for c1 in 0..d1 {
                let a = self.get(r1, c1);
                for r2 in 0..d2 {
                    for c2 in 0..d2 {
                        out.set(r1 * d2 + r2, c1 * d2 + c2, cmul(a, other.get(r2, c2)));
                    }
                }
            }
        }
        out
    }
}

pub fn single_pauli_matrix(site: (u8, u8)) -> CMat {
    let zero = (0.0, 0.0);
    let one = (1.0, 0.0);
    let mut m = CMat::zeros(2);
    match site {
        (0, 0) => {
            m.set(0, 0, one);
            m.set(1, 1, one);
        }
        (1, 0) => {
            m.set(0, 1, one);
            m.set(1, 0, one);
        }
        (1, 1) => {
            m.set(0, 1, (0.0, -1.0));
            m.set(1, 0, (0.0, 1.0));
        }
        (0, 1) => {
            m.set(0, 0, one);
            m.set(1, 1, (-1.0, 0.0));
        }
        _ => unreachable!(),
    }
    let _ = zero;
    m
}

pub fn pauli_matrix(p: &Pauli) -> CMat {
    let mut out = single_pauli_matrix(p.site(1));
    for q in 2..=p.n() {
        out = out.kron(&single_pauli_matrix(p.site(q)));
    }
    out
}

fn letter_matrix(ch: char) -> CMat {
    let mut m = CMat::zeros(2);
    let one = (1.0, 0.0);
    match ch {
        'I' => return CMat::identity(2),
        'X' => {
            m.set(0, 1, one);
            m.set(1, 0, one);
        }
        'Y' => {
            m.set(0, 1, (0.0, -1.0));
            m.set(1, 0, (0.0, 1.0));
        }
        'Z' => {
            m.set(0, 0, one);
            m.set(1, 1, (-1.0, 0.0));
        }
        'H' => {
            let s = 1.0 / 2.0f64.sqrt();
            m.set(0, 0, (s, 0.0));
            m.set(0, 1, (s, 0.0));
            m.set(1, 0, (s, 0.0));
            m.set(1, 1, (-s, 0.0));
        }
        'S' => {
            m.set(0, 0, one);
            m.set(1, 1, (0.0, 1.0));
        }
        _ => panic!("unknown single-qubit gate letter {ch}"),
    }
    m
}

/// Unitary of a named single-qubit Clifford: the name is a product of
/// letters applied as a matrix product (e.g. "XH" = X * H).
pub fn sq_unitary_from_name(name: &str) -> CMat {
    let mut out = CMat::identity(2);
    for ch in name.chars() {
        out = out.mul(&letter_matrix(ch));
    }
    out
}

/// Two-qubit gate matrix embedded at 1-based qubits (p, q) of n.
pub fn embed_two_qubit(m: &CMat, p: usize, q: usize, n: usize) -> CMat {
    assert_eq!(m.dim, 4);
    let dim = 1usize << n;
    let mut out = CMat::zeros(dim);
    let bit = |r: usize, j: usize| r >> (n - j) & 1;
    for r in 0..dim {
        for c in 0..dim {
            let same_elsewhere = (1..=n)
                .filter(|&j| j != p && j != q)
                .all(|j| bit(r, j) == bit(c, j));
            if !same_elsewhere {
                continue;
            }
            let mr = (bit(r, p) << 1) | bit(r, q);
            let mc = (bit(c, p) << 1) | bit(c, q);
            out.set(r, c, m.get(mr, mc));
        }
    }
    out
}

pub fn cz_matrix() -> CMat {
    let mut m = CMat::identity(4);
    m.set(3, 3, (-1.0, 0.0));
    m
}

/// Pauli-transfer matrix of a unitary: `PTM[b][a] = Tr[P_b U P_a U^dag]/2^n`.
pub fn ptm_from_unitary(u: &CMat, n: usize) -> Vec<f64> {
    let dim4 = 1usize << (2 * n);
    let dim = 1usize << n;
    let ud = u.dagger();
    let paulis: Vec<CMat> = (0..dim4 as u64).map(|k| pauli_matrix(&Pauli::from_key(n, k))).collect();
    let mut ptm = vec![0.0f64; dim4 * dim4];
    for (a, pa) in paulis.iter().enumerate() {
        let conj_a = u.mul(pa).mul(&ud);
        for (b, pb) in paulis.iter().enumerate() {
            let mut tr = (0.0, 0.0);
            for r in 0..dim {
                for k in 0..dim {
                    tr = cadd(tr, cmul(pb.get(r, k), conj_a.get(k, r)));
                }
            }
            ptm[b * dim4 + a] = tr.0 / dim as f64;
        }
    }
    ptm
}

/// Builds the unitary of one circuit layer. Gate unitaries are supplied by
/// the caller (built from known dense matrices, not from the tableau code).
pub fn layer_unitary(layer: &Layer, n: usize, gate_unitaries: &[CMat]) -> CMat {
    match layer {
        Layer::Sq(sq) => {
            let cat = SqCatalog::get();
            let mut out = sq_unitary_from_name(cat.name(sq.ids[0]));
            for q in 2..=n {
                out = out.kron(&sq_unitary_from_name(cat.name(sq.ids[q - 1])));
            }
            out
        }
        Layer::Gate(g) => gate_unitaries[*g].clone(),
    }
}

/// Dense oracle for the expectation of a spec: evolves the full Pauli
/// coefficient vector of the completed product stabilizer state through
/// diagonal noise channels and PTM conjugations.
pub fn dense_expectation(
    emb: &Embedding,
    model: &NoiseModel,
    spec: &ExperimentSpec,
    gate_unitaries: &[CMat],
) -> f64 {
    let n = emb.n();
    let dim4 = 1usize << (2 * n);
    // Completed prep: identity sites carry Z; the stabilizer group has 2^n
    // elements, all with + sign.
    let mut coeff = vec![0.0f64; dim4];
    let gens: Vec<Pauli> = (1..=n)
        .map(|q| {
            let (x, z) = spec.prep.site(q);
            if (x, z) == (0, 0) {
                Pauli::z_at(n, q)
            } else {
                Pauli::new(1, x as u32, z as u32).embed(&Pattern::from_qubits(n, &[q]))
            }
        })
        .collect();
    for subset in 0..(1u32 << n) {
        let mut label = Pauli::identity(n);
        for (j, g) in gens.iter().enumerate() {
            if subset >> j & 1 == 1 {
                label = label.mul_label(g);
            }
        }
        coeff[label.key() as usize] = 1.0;
    }
    // State preparation noise: diagonal in the pattern.
    for (key, c) in coeff.iter_mut().enumerate() {
        let p = Pauli::from_key(n, key as u64);
        *c *= model.lambda_prep(emb, &p.pattern());
    }
    for layer in &spec.layers {
        if let Layer::Gate(g) = layer {
            for (key, c) in coeff.iter_mut().enumerate() {
                let p = Pauli::from_key(n, key as u64);
                *c *= model.lambda_gate(emb, *g, &p);
            }
        }
        let u = layer_unitary(layer, n, gate_unitaries);
        let ptm = ptm_from_unitary(&u, n);
        let mut next = vec![0.0f64; dim4];
        for b in 0..dim4 {
            let mut acc = 0.0;
            for a in 0..dim4 {
                let v = ptm[b * dim4 + a];
                if v != 0.0 {
                    acc += v * coeff[a];
                }
            }
            next[b] = acc;
        }
        coeff = next;
    }
    let meas_key = spec.meas.key() as usize;
    model.lambda_meas(emb, &spec.meas.pattern()) * coeff[meas_key]
}

// ---------------------------------------------------------------------
// Textbook graph oracles.

/// Fundamental cycles over a BFS spanning tree of the (undirected) PTG:
/// one +/-1 vector per non-tree edge.
pub fn spanning_tree_cycles(ptg: &Ptg) -> Vec<SparseVec<Rat>> {
    let nv = 1usize << ptg.n();
    // parent[v] = (parent vertex, edge id, true if edge points parent->v).
    let mut parent: Vec<Option<(u32, u32, bool)>> = vec![None; nv];
    let mut visited = vec![false; nv];
    let mut adj: Vec<Vec<(u32, u32, bool)>> = vec![Vec::new(); nv];
    for e in 0..ptg.edge_count() as u32 {
        let (from, to) = ptg.endpoints(e);
        if from != to {
            adj[from as usize].push((to, e, true));
            adj[to as usize].push((from, e, false));
        }
    }
    let mut tree_edges = vec![false; ptg.edge_count()];
    let mut queue = std::collections::VecDeque::new();
    visited[ROOT as usize] = true;
    queue.push_back(ROOT);
    while let Some(v) = queue.pop_front() {
        for &(w, e, fwd) in &adj[v as usize] {
            if !visited[w as usize] {
                visited[w as usize] = true;
                parent[w as usize] = Some((v, e, fwd));
                tree_edges[e as usize] = true;
                queue.push_back(w);
            }
        }
    }
    let depth_of = |mut v: u32| {
        let mut d = 0;
        while let Some((p, _, _)) = parent[v as usize] {
            v = p;
            d += 1;
        }
        d
    };
    let mut out = Vec::new();
    for e in 0..ptg.edge_count() as u32 {
        if tree_edges[e as usize] {
            continue;
        }
        let (from, to) = ptg.endpoints(e);
        if from == to {
            out.push(SparseVec::from_entries(vec![(e, rat_int(1))]));
            continue;
        }
        // Cycle: e plus the tree path to -> from. A tree edge used along
        // the walking direction из `to` toward `from` enters with +1 when
        // its orientation agrees.
        let mut entries = vec![(e, rat_int(1))];
        let (mut a, mut b) = (to, from);
        let (mut da, mut db) = (depth_of(a), depth_of(b));
        while da > db {
            let (p, te, fwd) = parent[a as usize].unwrap();
            entries.push((te, rat_int(if fwd { -1 } else { 1 })));
            a = p;
            da -= 1;
        }
        while db > da {
            let (p, te, fwd) = parent[b as usize].unwrap();
            entries.push((te, rat_int(if fwd { 1 } else { -1 })));
            b = p;
            db -= 1;
        }
        while a != b {
            let (pa, ea, fa) = parent[a as usize].unwrap();
            entries.push((ea, rat_int(if fa { -1 } else { 1 })));
            a = pa;
            let (pb, eb, fb) = parent[b as usize].unwrap();
            entries.push((eb, rat_int(if fb { 1 } else { -1 })));
            b = pb;
        }
        out.push(SparseVec::from_entries(entries));
    }
    out
}

/// Single-vertex cuts of every pattern vertex: +1 on out-edges, -1 on
/// in-edges.
pub fn single_vertex_cuts(ptg: &Ptg) -> Vec<SparseVec<Rat>> {
    let mut out = Vec::new();
    for v in 1..(1u32 << ptg.n()) {
        let mut entries = Vec::new();
        for e in 0..ptg.edge_count() as u32 {
            let (from, to) = ptg.endpoints(e);
            if from == to {
                continue;
            }
            if from == v {
                entries.push((e, rat_int(1)));
            } else if to == v {
                entries.push((e, rat_int(-1)));
            }
        }
        out.push(SparseVec::from_entries(entries));
    }
    out
}

// ---------------------------------------------------------------------
// Randomized inputs.

/// A random n-qubit Clifford layer built by composing random catalog
/// single-qubit gates and random builtin two-qubit gates.
pub fn random_clifford(n: usize, rng: &mut ChaCha12Rng, name: &str) -> Clifford {
    let cat = SqCatalog::get();
    let mut gate = Clifford::identity(n);
    let steps = 3 + (rng.random::<u32>() % 5) as usize;
    for step in 0..steps {
        let next = if n >= 2 && rng.random::<bool>() {
            let two = ["CZ", "CNOT", "SWAP", "ISWAP"][(rng.random::<u32>() % 4) as usize];
            let p = (rng.random::<u32>() as usize % n) + 1;
            let mut q = (rng.random::<u32>() as usize % n) + 1;
            while q == p {
                q = (rng.random::<u32>() as usize % n) + 1;
            }
            tensor_parallel(n, &[(builtin(two).unwrap(), vec![p, q])], format!("s{step}"))
                .unwrap()
        } else {
            let idx = (rng.random::<u32>() % 24) as u16;
            let q = (rng.random::<u32>() as usize % n) + 1;
            tensor_parallel(n, &[(cat.gate(idx).clone(), vec![q])], format!("s{step}")).unwrap()
        };
        gate = next.compose(&gate, name).unwrap();
    }
    gate
}

pub fn random_gate_set(n: usize, n_gates: usize, seed: u64) -> GateSet {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let gates = (0..n_gates)
        .map(|i| random_clifford(n, &mut rng, &format!("R{i}")))
        .collect();
    GateSet::new(n, gates).unwrap()
}

/// A random executable spec: random prep label, random alternating layers,
/// measurement set to the ideal propagated label.
pub fn random_spec(
    emb: &Embedding,
    rng: &mut ChaCha12Rng,
    max_gates: usize,
) -> ExperimentSpec {
    let n = emb.n();
    let cat = SqCatalog::get();
    let key = rng.random::<u64>() % (1 << (2 * n));
    let prep = Pauli::from_key(n, key);
    let mut layers = Vec::new();
    let n_layers = 1 + (rng.random::<u32>() as usize % max_gates);
    for _ in 0..n_layers {
        if rng.random::<bool>() {
            let ids = (0..n).map(|_| (rng.random::<u32>() % 24) as u16).collect();
            layers.push(Layer::Sq(gatenoise::clifford::SqLayer { ids }));
        }
        let g = rng.random::<u32>() as usize % emb.gate_set().len();
        layers.push(Layer::Gate(g));
    }
    let _ = cat;
    // Propagate to find the measured label and ideal sign.
    let mut cur = gatenoise::clifford::SignedPauli::plus(prep);
    for layer in &layers {
        cur = match layer {
            Layer::Sq(sq) => sq.apply_signed(&cur),
            Layer::Gate(g) => emb.gate_set().gate(*g).apply_signed(&cur),
        };
    }
    ExperimentSpec {
        prep,
        layers,
        meas: cur.label,
        expected_sign: cur.sign,
        m: 1,
        target: SparseVec::new(),
    }
}

/// Dense unitaries for a gate set whose gates are parallel CZ layers,
/// reconstructed from placement blocks and the known CZ matrix.
pub fn cz_layer_unitaries(gs: &GateSet) -> Vec<CMat> {
    let n = gs.n();
    gs.gates()
        .iter()
        .map(|gate| {
            let mut u = CMat::identity(1 << n);
            for block in gate.blocks() {
                let qs = block.qubits();
                assert_eq!(qs.len(), 2, "cz_layer_unitaries expects CZ blocks");
                u = u.mul(&embed_two_qubit(&cz_matrix(), qs[0], qs[1], n));
            }
            u
        })
        .collect()
}

/// Pulls a complete-space vector given as (index, value) pairs back
/// through the embedding.
pub fn pullback(emb: &Embedding, v: &[(ParamIndex, Rat)]) -> SparseVec<Rat> {
    emb.pullback(v)
}
