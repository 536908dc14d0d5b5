//! The pattern transfer graph and its distinguished vector families.
//!
//! Vertices are the root (id 0) plus one vertex per non-empty pattern
//! (id = pattern bits). Each complete-space parameter index owns exactly
//! one directed edge, so edge ids coincide with the columns of the
//! complete [`Space`]: prep edges run root -> pattern, meas edges pattern
//! -> root, and a gate edge runs from the pattern of its label to the
//! pattern of the label's image.

use crate::clifford::GateSet;
use crate::linalg::SparseVec;
use crate::pauli::{Pattern, Pauli};
use crate::scalar::rat_int;
use crate::space::{ParamIndex, Space};
use crate::{Error, Rat, Result};
use std::collections::BTreeMap;

pub const ROOT: u32 = 0;

#[derive(Clone, Debug)]
pub struct Ptg {
    gate_names: Vec<String>,
    space: Space,
    /// (from, to) per edge, aligned with the complete-space columns.
    endpoints: Vec<(u32, u32)>,
}

/// Builds the PTG for a gate set. Enumerates all `4^n` labels per gate, so
/// it is guarded by `n_max`.
pub fn build_ptg(gs: &GateSet, n_max: usize) -> Result<Ptg> {
    let n = gs.n();
    if n > n_max {
        return Err(Error::CapExceeded { n, n_max });
    }
    let space = Space::complete(n, gs.len());
    let mut endpoints = Vec::with_capacity(space.dim() as usize);
    for u in Pattern::enumerate_nonzero(n) {
        endpoints.push((ROOT, u.bits()));
    }
    for u in Pattern::enumerate_nonzero(n) {
        endpoints.push((u.bits(), ROOT));
    }
    for gate in gs.gates() {
        for a in Pauli::enumerate_nonidentity(n) {
            let from = a.pattern().bits();
            let to = gate.apply(&a).label.pattern().bits();
            endpoints.push((from, to));
        }
    }
    Ok(Ptg {
        gate_names: gs.gates().iter().map(|g| g.name().to_string()).collect(),
        space,
        endpoints,
    })
}

impl Ptg {
    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n()
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self, edge: u32) -> (u32, u32) {
        self.endpoints[edge as usize]
    }

    pub fn gate_names(&self) -> &[String] {
        &self.gate_names
    }

    /// Net flow per vertex of an edge-space vector: out-weight minus
    /// in-weight. Flow-conserving vectors return an empty map.
    pub fn flow_imbalance(&self, v: &SparseVec<Rat>) -> BTreeMap<u32, Rat> {
        let mut net: BTreeMap<u32, Rat> = BTreeMap::new();
        for (edge, w) in v.iter() {
            let (from, to) = self.endpoints(*edge);
            *net.entry(from).or_insert_with(|| rat_int(0)) += w.clone();
            *net.entry(to).or_insert_with(|| rat_int(0)) -= w.clone();
        }
        net.retain(|_, w| !num_traits::Zero::is_zero(w));
        net
    }

    pub fn is_flow_conserving(&self, v: &SparseVec<Rat>) -> bool {
        self.flow_imbalance(v).is_empty()
    }

    /// Total weight of edges leaving the root (each rooted cycle has root
    /// out-weight exactly 1).
    pub fn root_out_weight(&self, v: &SparseVec<Rat>) -> Rat {
        let mut acc = rat_int(0);
        for (edge, w) in v.iter() {
            if self.endpoints(*edge).0 == ROOT {
                acc += w.clone();
            }
        }
        acc
    }

    /// The rooted cycle basis: one 2-edge cycle per pattern and one 3-edge
    /// cycle per (gate, label), in canonical order.
    pub fn rooted_cycle_basis(&self) -> Vec<SparseVec<Rat>> {
        let n = self.n();
        let mut out = Vec::new();
        for u in Pattern::enumerate_nonzero(n) {
            out.push(self.spam_pair_cycle(&u));
        }
        for g in 0..self.space.n_gates() {
            for a in Pauli::enumerate_nonidentity(n) {
                out.push(self.gate_cycle(g, &a));
            }
        }
        out
    }

    /// The 2-edge rooted cycle prep(u) + meas(u).
    pub fn spam_pair_cycle(&self, u: &Pattern) -> SparseVec<Rat> {
        let s = self.space.col(&ParamIndex::prep(*u)).unwrap();
        let m = self.space.col(&ParamIndex::meas(*u)).unwrap();
        SparseVec::from_entries(vec![(s, rat_int(1)), (m, rat_int(1))])
    }

    /// The 3-edge rooted cycle prep(pt(a)) + gate(g, a) + meas(pt(G(a))).
    pub fn gate_cycle(&self, gate: usize, a: &Pauli) -> SparseVec<Rat> {
        let e = self.space.col(&ParamIndex::gate(gate, *a)).unwrap();
        let (from, to) = self.endpoints(e);
        let s = self.space.col(&ParamIndex::prep(Pattern::new(self.n(), from))).unwrap();
        let m = self.space.col(&ParamIndex::meas(Pattern::new(self.n(), to))).unwrap();
        SparseVec::from_entries(vec![(s, rat_int(1)), (m, rat_int(1)), (e, rat_int(1))])
    }

    /// Subsystem depolarizing gauge for a non-empty pattern `s`: the cut
    /// vector of the bipartition separating the patterns that intersect `s`
    /// from those that do not (the latter side keeping the root).
    pub fn sdg(&self, s: &Pattern) -> SparseVec<Rat> {
        assert!(!s.is_empty(), "sdg requires a non-empty pattern");
        let mut entries = Vec::new();
        for (col, idx) in self.space.iter() {
            let val = match idx {
                ParamIndex::Prep(u) => i64::from(u.intersects(s)),
                ParamIndex::Meas(u) => -i64::from(u.intersects(s)),
                ParamIndex::Gate(..) => {
                    let (from, to) = self.endpoints(col);
                    i64::from(Pattern::new(self.n(), to).intersects(s))
                        - i64::from(Pattern::new(self.n(), from).intersects(s))
                }
            };
            if val != 0 {
                entries.push((col, rat_int(val)));
            }
        }
        SparseVec::from_entries(entries)
    }

    /// Cut vector for the single-vertex partition `V_0 = {v_u}`.
    pub fn canonical_cut(&self, u: &Pattern) -> SparseVec<Rat> {
        assert!(!u.is_empty());
        let target = u.bits();
        let mut entries = Vec::new();
        for (col, &(from, to)) in self.endpoints.iter().enumerate() {
            if from == to {
                continue;
            }
            if from == target {
                entries.push((col as u32, rat_int(1)));
            } else if to == target {
                entries.push((col as u32, rat_int(-1)));
            }
        }
        SparseVec::from_entries(entries)
    }

    /// All SDGs in canonical pattern order (a basis of the gauge space).
    pub fn sdg_basis(&self) -> Vec<SparseVec<Rat>> {
        Pattern::enumerate_nonzero(self.n()).map(|s| self.sdg(&s)).collect()
    }

    /// GraphViz DOT export with multi-edges merged into one arrow carrying
    /// all labels, and the root highlighted.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let n = self.n();
        let vname = |v: u32| {
            if v == ROOT {
                "root".to_string()
            } else {
                format!("p{}", Pattern::new(n, v))
            }
        };
        let mut grouped: BTreeMap<(u32, u32), Vec<String>> = BTreeMap::new();
        let gs_names = &self.gate_names;
        for (col, &(from, to)) in self.endpoints.iter().enumerate() {
            let label = match self.space.at(col as u32) {
                ParamIndex::Prep(u) => format!("S:{u}"),
                ParamIndex::Meas(u) => format!("M:{u}"),
                ParamIndex::Gate(g, a) => format!("{}:{a}", gs_names[g]),
            };
            grouped.entry((from, to)).or_default().push(label);
        }
        let mut out = String::new();
        writeln!(out, "digraph ptg {{").unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  root [shape=doublecircle, style=filled, fillcolor=lightgray];").unwrap();
        for v in 1..(1u32 << n) {
            writeln!(out, "  {} [label=\"{}\"];", vname(v), Pattern::new(n, v)).unwrap();
        }
        for ((from, to), labels) in grouped {
            writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                vname(from),
                vname(to),
                labels.join("\\n")
            )
            .unwrap();
        }
        writeln!(out, "}}").unwrap();
        out
    }
}
