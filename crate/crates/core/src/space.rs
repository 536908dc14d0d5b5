//! Index spaces for noise parameters.
//!
//! A [`ParamIndex`] names one noise parameter: a state-preparation or
//! measurement pattern, or a (gate, Pauli label) pair. A [`Space`] is an
//! ordered list of such indices with O(log) lookup, defining the column
//! order of every matrix built on top of it. Block order is prep, meas,
//! then gates in gate-set order; within blocks the canonical integer order
//! of patterns and `(x_bits, z_bits)` label keys.

use crate::clifford::GateSet;
use crate::linalg::SparseVec;
use crate::pauli::{Pattern, Pauli};
use crate::scalar::{rat_string, Scalar};
use crate::{Error, Rat, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ParamIndex {
    /// State-preparation parameter for a non-empty pattern.
    Prep(Pattern),
    /// Measurement parameter for a non-empty pattern.
    Meas(Pattern),
    /// Gate parameter: gate position in the gate set and a non-identity label.
    Gate(usize, Pauli),
}

impl ParamIndex {
    pub fn prep(p: Pattern) -> Self {
        assert!(!p.is_empty(), "trivial prep index");
        ParamIndex::Prep(p)
    }

    pub fn meas(p: Pattern) -> Self {
        assert!(!p.is_empty(), "trivial meas index");
        ParamIndex::Meas(p)
    }

    pub fn gate(idx: usize, label: Pauli) -> Self {
        assert!(!label.is_identity(), "trivial gate index");
        ParamIndex::Gate(idx, label)
    }

    pub fn display(&self, gs: &GateSet) -> String {
        match self {
            ParamIndex::Prep(u) => format!("S:{u}"),
            ParamIndex::Meas(u) => format!("M:{u}"),
            ParamIndex::Gate(i, a) => format!("G:{}:{a}", gs.gate(*i).name()),
        }
    }

    pub fn parse(s: &str, gs: &GateSet) -> Result<Self> {
        let bad = || Error::Parse(format!("bad parameter index {s:?}"));
        if let Some(rest) = s.strip_prefix("S:") {
            return Ok(ParamIndex::Prep(rest.parse()?));
        }
        if let Some(rest) = s.strip_prefix("M:") {
            return Ok(ParamIndex::Meas(rest.parse()?));
        }
        if let Some(rest) = s.strip_prefix("G:") {
            let (name, label) = rest.rsplit_once(':').ok_or_else(bad)?;
            let idx = gs
                .index_of(name)
                .ok_or_else(|| Error::Parse(format!("unknown gate {name:?}")))?;
            return Ok(ParamIndex::Gate(idx, label.parse()?));
        }
        Err(bad())
    }
}

/// An ordered index set for either the complete parameter space or a
/// reduced one.
#[derive(Clone, Debug)]
pub struct Space {
    n: usize,
    prep: Vec<u32>,
    meas: Vec<u32>,
    gates: Vec<Vec<u64>>,
    gate_offsets: Vec<u32>,
    dim: u32,
}

impl Space {
    pub fn build(
        n: usize,
        prep: Vec<Pattern>,
        meas: Vec<Pattern>,
        gates: Vec<Vec<Pauli>>,
    ) -> Self {
        let mut prep: Vec<u32> = prep.iter().map(Pattern::bits).collect();
        prep.sort_unstable();
        prep.dedup();
        let mut meas: Vec<u32> = meas.iter().map(Pattern::bits).collect();
        meas.sort_unstable();
        meas.dedup();
        let gates: Vec<Vec<u64>> = gates
            .into_iter()
            .map(|labels| {
                let mut keys: Vec<u64> = labels.iter().map(Pauli::key).collect();
                keys.sort_unstable();
                keys.dedup();
                keys
            })
            .collect();
        let mut gate_offsets = Vec::with_capacity(gates.len());
        let mut dim = (prep.len() + meas.len()) as u64;
        for g in &gates {
            gate_offsets.push(u32::try_from(dim).expect("space too large"));
            dim += g.len() as u64;
        }
        let dim = u32::try_from(dim).expect("space too large");
        Space { n, prep, meas, gates, gate_offsets, dim }
    }

    /// The complete parameter space: all non-empty patterns for SPAM and
    /// all non-identity labels for each gate.
    pub fn complete(n: usize, n_gates: usize) -> Self {
        let patterns: Vec<Pattern> = Pattern::enumerate_nonzero(n).collect();
        let labels: Vec<Pauli> = Pauli::enumerate_nonidentity(n).collect();
        Space::build(n, patterns.clone(), patterns, vec![labels; n_gates])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn n_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn prep_dim(&self) -> u32 {
        self.prep.len() as u32
    }

    pub fn meas_dim(&self) -> u32 {
        self.meas.len() as u32
    }

    pub fn gate_dim(&self, gate: usize) -> u32 {
        self.gates[gate].len() as u32
    }

    /// Total dimension of the gate blocks.
    pub fn gate_dim_total(&self) -> u32 {
        self.gates.iter().map(|g| g.len() as u32).sum()
    }

    pub fn prep_patterns(&self) -> impl Iterator<Item = Pattern> + '_ {
        self.prep.iter().map(|&bits| Pattern::new(self.n, bits))
    }

    pub fn meas_patterns(&self) -> impl Iterator<Item = Pattern> + '_ {
        self.meas.iter().map(|&bits| Pattern::new(self.n, bits))
    }

    pub fn gate_labels(&self, gate: usize) -> impl Iterator<Item = Pauli> + '_ {
        self.gates[gate].iter().map(move |&key| Pauli::from_key(self.n, key))
    }

    pub fn col(&self, idx: &ParamIndex) -> Option<u32> {
        match idx {
            ParamIndex::Prep(u) => {
                self.prep.binary_search(&u.bits()).ok().map(|i| i as u32)
            }
            ParamIndex::Meas(u) => self
                .meas
                .binary_search(&u.bits())
                .ok()
                .map(|i| self.prep.len() as u32 + i as u32),
            ParamIndex::Gate(g, a) => {
                let block = self.gates.get(*g)?;
                block
                    .binary_search(&a.key())
                    .ok()
                    .map(|i| self.gate_offsets[*g] + i as u32)
            }
        }
    }

    pub fn at(&self, col: u32) -> ParamIndex {
        let col = col as usize;
        if col < self.prep.len() {
            return ParamIndex::Prep(Pattern::new(self.n, self.prep[col]));
        }
        let col2 = col - self.prep.len();
        if col2 < self.meas.len() {
            return ParamIndex::Meas(Pattern::new(self.n, self.meas[col2]));
        }
        let mut rest = col2 - self.meas.len();
        for (g, block) in self.gates.iter().enumerate() {
            if rest < block.len() {
                return ParamIndex::Gate(g, Pauli::from_key(self.n, block[rest]));
            }
            rest -= block.len();
        }
        panic!("column {col} out of range");
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, ParamIndex)> + '_ {
        (0..self.dim).map(move |c| (c, self.at(c)))
    }

    /// Column range of one gate's block.
    pub fn gate_block(&self, gate: usize) -> std::ops::Range<u32> {
        let start = self.gate_offsets[gate];
        start..start + self.gates[gate].len() as u32
    }

    pub fn is_gate_col(&self, col: u32) -> bool {
        col >= self.prep.len() as u32 + self.meas.len() as u32
    }

    /// Projection onto the gate blocks (zeroes SPAM components).
    pub fn project_gates<S: Scalar>(&self, v: &SparseVec<S>) -> SparseVec<S> {
        SparseVec::from_entries(
            v.iter().filter(|(c, _)| self.is_gate_col(*c)).map(|(c, v)| (*c, v.clone())).collect(),
        )
    }

    /// Human-readable sparse map for JSON output.
    pub fn labeled(&self, v: &SparseVec<Rat>, gs: &GateSet) -> Vec<(String, String)> {
        v.iter().map(|(c, val)| (self.at(*c).display(gs), rat_string(val))).collect()
    }
}
