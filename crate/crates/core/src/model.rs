//! Reduced parameter spaces, ansatz embedding maps, parameter transforms,
//! Pauli-Lindblad conversions, covariance checks and ground-truth models.

use crate::clifford::{Clifford, GateSet};
use crate::linalg::{Echelon, SparseVec, TrackedEchelon};
use crate::pauli::{FactorSet, Pattern, Pauli};
use crate::scalar::{rat_int, Scalar};
use crate::space::{ParamIndex, Space};
use crate::{Error, Rat, Result};
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;

/// Noise ansatz: how reduced parameters specify the complete Pauli channels.
#[derive(Clone, Debug)]
pub enum Ansatz {
    /// The identity embedding: one reduced parameter per complete parameter.
    Complete,
    /// Qubit-wise independent SPAM noise; per-gate noise supported on the
    /// gate's support with no crosstalk.
    FullyLocal,
    /// Pauli eigenvalues factorize over downward-closed factor sets, one
    /// per layer (gate entries are indexed in gate-set order).
    QuasiLocal { omega_s: FactorSet, omega_m: FactorSet, omega_gates: Vec<FactorSet> },
    /// Explicit sparse columns, one per reduced index tag.
    Custom { columns: Vec<(ParamIndex, Vec<(ParamIndex, Rat)>)> },
}

/// An injective linear map from a reduced parameter space into the complete
/// one, together with the reduced index layout.
#[derive(Clone, Debug)]
pub struct Embedding {
    gs: GateSet,
    ansatz: Ansatz,
    reduced: Space,
    /// For Custom only: columns over the complete space, aligned with the
    /// reduced columns, plus the transposed rows for fast pullback.
    custom: Option<CustomTables>,
}

#[derive(Clone, Debug)]
struct CustomTables {
    complete: Space,
    columns: Vec<SparseVec<Rat>>,
    transpose: Vec<SparseVec<Rat>>,
}

impl Embedding {
    /// Builds the embedding map for a gate set and ansatz. Injectivity is
    /// checked by exact rank for Custom columns; the structural ansatzes
    /// carry an explicit left inverse (the Möbius inverse), which is
    /// round-trip checked when the register is small enough.
    pub fn new(gs: GateSet, ansatz: Ansatz, n_max: usize) -> Result<Self> {
        let n = gs.n();
        let reduced = match &ansatz {
            Ansatz::Complete => {
                if n > n_max {
                    return Err(Error::CapExceeded { n, n_max });
                }
                Space::complete(n, gs.len())
            }
            Ansatz::FullyLocal => {
                let singles: Vec<Pattern> =
                    (1..=n).map(|q| Pattern::from_qubits(n, &[q])).collect();
                let gates: Vec<Vec<Pauli>> = gs
                    .gates()
                    .iter()
                    .map(|g| {
                        Pauli::enumerate_in(&g.support())
                            .into_iter()
                            .filter(|a| !a.is_identity())
                            .collect()
                    })
                    .collect();
                Space::build(n, singles.clone(), singles, gates)
            }
            Ansatz::QuasiLocal { omega_s, omega_m, omega_gates } => {
                if omega_gates.len() != gs.len() {
                    return Err(Error::InvalidFactorSet(format!(
                        "expected {} gate factor sets, got {}",
                        gs.len(),
                        omega_gates.len()
                    )));
                }
                for om in [omega_s, omega_m].into_iter().chain(omega_gates.iter()) {
                    if om.n() != n {
                        return Err(Error::DimensionMismatch(om.n(), n));
                    }
                }
                let gates: Vec<Vec<Pauli>> =
                    omega_gates.iter().map(Pauli::enumerate_consistent).collect();
                Space::build(
                    n,
                    omega_s.members().collect(),
                    omega_m.members().collect(),
                    gates,
                )
            }
            Ansatz::Custom { columns } => {
                if n > n_max {
                    return Err(Error::CapExceeded { n, n_max });
                }
                let mut prep = Vec::new();
                let mut meas = Vec::new();
                let mut gates: Vec<Vec<Pauli>> = vec![Vec::new(); gs.len()];
                for (tag, _) in columns {
                    match tag {
                        ParamIndex::Prep(u) => prep.push(*u),
                        ParamIndex::Meas(u) => meas.push(*u),
                        ParamIndex::Gate(g, a) => {
                            if *g >= gs.len() {
                                return Err(Error::InvalidGate(format!(
                                    "gate index {g} out of range"
                                )));
                            }
                            gates[*g].push(*a);
                        }
                    }
                }
                Space::build(n, prep, meas, gates)
            }
        };
        let custom = if let Ansatz::Custom { columns } = &ansatz {
            let complete = Space::complete(n, gs.len());
            if columns.len() != reduced.dim() as usize {
                return Err(Error::InvalidGate("duplicate reduced index tags".into()));
            }
            let mut cols = vec![SparseVec::new(); reduced.dim() as usize];
            for (tag, entries) in columns {
                let rcol = reduced.col(tag).unwrap();
                let entries = entries
                    .iter()
                    .map(|(idx, v)| {
                        complete
                            .col(idx)
                            .map(|c| (c, v.clone()))
                            .ok_or_else(|| Error::Parse("bad complete index".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                cols[rcol as usize] = SparseVec::from_entries(entries);
            }
            // Injectivity: exact column rank.
            let mut ech: Echelon<Rat> = Echelon::new();
            for c in &cols {
                ech.insert(c.clone());
            }
            if ech.rank() != cols.len() {
                return Err(Error::NotInjective);
            }
            let mut transpose = vec![Vec::new(); complete.dim() as usize];
            for (rcol, col) in cols.iter().enumerate() {
                for (ccol, v) in col.iter() {
                    transpose[*ccol as usize].push((rcol as u32, v.clone()));
                }
            }
            Some(CustomTables {
                complete,
                columns: cols,
                transpose: transpose.into_iter().map(SparseVec::from_entries).collect(),
            })
        } else {
            None
        };
        let emb = Embedding { gs, ansatz, reduced, custom };
        if matches!(emb.ansatz, Ansatz::FullyLocal | Ansatz::QuasiLocal { .. }) && n <= n_max {
            debug_assert!(emb.spot_check_left_inverse());
        }
        Ok(emb)
    }

    fn spot_check_left_inverse(&self) -> bool {
        // inverse(embed(unit)) == unit for the first index of each block.
        let dim = self.reduced.dim();
        let mut picks = vec![0u32];
        picks.push(self.reduced.prep_dim());
        for g in 0..self.gs.len() {
            picks.push(self.reduced.gate_block(g).start);
        }
        picks.retain(|&c| c < dim);
        for c in picks {
            let unit: SparseVec<Rat> = SparseVec::unit(c);
            let x = self.embed_cvec(&unit);
            match self.q_inverse_cvec(&x) {
                Ok(r) if r == unit => {}
                _ => return false,
            }
        }
        true
    }

    pub fn gate_set(&self) -> &GateSet {
        &self.gs
    }

    pub fn ansatz(&self) -> &Ansatz {
        &self.ansatz
    }

    pub fn n(&self) -> usize {
        self.gs.n()
    }

    pub fn reduced(&self) -> &Space {
        &self.reduced
    }

    pub fn dim(&self) -> u32 {
        self.reduced.dim()
    }

    /// Layer-uncorrelated ansatzes decompose blockwise; Custom columns may
    /// couple layers.
    pub fn is_layer_uncorrelated(&self) -> bool {
        match &self.ansatz {
            Ansatz::Custom { .. } => {
                let tables = self.custom.as_ref().unwrap();
                tables.columns.iter().enumerate().all(|(rcol, col)| {
                    let tag = self.reduced.at(rcol as u32);
                    col.iter().all(|(ccol, _)| {
                        matches!(
                            (&tag, tables.complete.at(*ccol)),
                            (ParamIndex::Prep(_), ParamIndex::Prep(_))
                                | (ParamIndex::Meas(_), ParamIndex::Meas(_))
                                | (ParamIndex::Gate(..), ParamIndex::Gate(..))
                        )
                    })
                })
            }
            _ => true,
        }
    }

    /// Adjoint action on one complete standard-basis covector, expressed in
    /// reduced coordinates. This is computable from the column structure
    /// without touching the rest of the complete space.
    pub fn pullback_unit(&self, idx: &ParamIndex) -> SparseVec<Rat> {
        let mut entries: Vec<(u32, Rat)> = Vec::new();
        match &self.ansatz {
            Ansatz::Complete => {
                if let Some(c) = self.reduced.col(idx) {
                    entries.push((c, rat_int(1)));
                }
            }
            Ansatz::FullyLocal => match idx {
                ParamIndex::Prep(u) | ParamIndex::Meas(u) => {
                    let n = self.n();
                    for q in 1..=n {
                        if u.contains_qubit(q) {
                            let single = Pattern::from_qubits(n, &[q]);
                            let tag = match idx {
                                ParamIndex::Prep(_) => ParamIndex::Prep(single),
                                _ => ParamIndex::Meas(single),
                            };
                            entries.push((self.reduced.col(&tag).unwrap(), rat_int(1)));
                        }
                    }
                }
                ParamIndex::Gate(g, b) => {
                    let supp = self.gs.gate(*g).support();
                    let masked = Pauli::new(
                        self.n(),
                        b.x_bits() & supp.bits(),
                        b.z_bits() & supp.bits(),
                    );
                    if !masked.is_identity() {
                        let tag = ParamIndex::Gate(*g, masked);
                        entries.push((self.reduced.col(&tag).unwrap(), rat_int(1)));
                    }
                }
            },
            Ansatz::QuasiLocal { omega_s, omega_m, omega_gates } => match idx {
                ParamIndex::Prep(mu) => {
                    for nu in mu.subsets() {
                        if !nu.is_empty() && omega_s.contains(&nu) {
                            entries.push((
                                self.reduced.col(&ParamIndex::Prep(nu)).unwrap(),
                                rat_int(1),
                            ));
                        }
                    }
                }
                ParamIndex::Meas(mu) => {
                    for nu in mu.subsets() {
                        if !nu.is_empty() && omega_m.contains(&nu) {
                            entries.push((
                                self.reduced.col(&ParamIndex::Meas(nu)).unwrap(),
                                rat_int(1),
                            ));
                        }
                    }
                }
                ParamIndex::Gate(g, a) => {
                    let omega = &omega_gates[*g];
                    for b in a.majorized_labels() {
                        if !b.is_identity() && b.consistent_with(omega) {
                            entries.push((
                                self.reduced.col(&ParamIndex::Gate(*g, b)).unwrap(),
                                rat_int(1),
                            ));
                        }
                    }
                }
            },
            Ansatz::Custom { .. } => {
                let tables = self.custom.as_ref().unwrap();
                if let Some(c) = tables.complete.col(idx) {
                    return tables.transpose[c as usize].clone();
                }
            }
        }
        SparseVec::from_entries(entries)
    }

    /// Pullback of a complete covector given as (index, value) pairs.
    pub fn pullback(&self, v: &[(ParamIndex, Rat)]) -> SparseVec<Rat> {
        let mut out = SparseVec::new();
        for (idx, val) in v {
            out.add_scaled(&self.pullback_unit(idx), val);
        }
        out
    }

    /// Pullback of a complete-space vector in column form.
    pub fn pullback_cols(&self, complete: &Space, v: &SparseVec<Rat>) -> SparseVec<Rat> {
        let mut out = SparseVec::new();
        for (col, val) in v.iter() {
            out.add_scaled(&self.pullback_unit(&complete.at(*col)), val);
        }
        out
    }

    /// Value of the embedded vector `Q(r)` at a single complete index.
    /// Costs `O(2^w)` for quasi-local gate labels of weight `w` and `O(1)`
    /// to `O(n)` elsewhere, so it scales to long circuits at large `n`.
    pub fn x_at<S: Scalar>(&self, r: &[S], idx: &ParamIndex) -> S {
        let mut acc = S::zero();
        match &self.ansatz {
            Ansatz::Custom { .. } => {
                let tables = self.custom.as_ref().unwrap();
                if let Some(c) = tables.complete.col(idx) {
                    for (rcol, v) in tables.transpose[c as usize].iter() {
                        acc = acc + S::from_rat(v) * r[*rcol as usize].clone();
                    }
                }
            }
            _ => {
                for (rcol, v) in self.pullback_unit(idx).iter() {
                    acc = acc + S::from_rat(v) * r[*rcol as usize].clone();
                }
            }
        }
        acc
    }

    /// Materializes `Q(r)` over the complete space (sparse vector form).
    pub fn embed(&self, r: &SparseVec<Rat>, n_max: usize) -> Result<(Space, SparseVec<Rat>)> {
        let n = self.n();
        if n > n_max {
            return Err(Error::CapExceeded { n, n_max });
        }
        Ok((Space::complete(n, self.gs.len()), self.embed_cvec(r)))
    }

    fn embed_cvec(&self, r: &SparseVec<Rat>) -> SparseVec<Rat> {
        let complete = Space::complete(self.n(), self.gs.len());
        let dense: Vec<Rat> = {
            let mut v = vec![rat_int(0); self.reduced.dim() as usize];
            for (c, val) in r.iter() {
                v[*c as usize] = val.clone();
            }
            v
        };
        let mut entries = Vec::new();
        for (col, idx) in complete.iter() {
            let x = self.x_at(&dense, &idx);
            if !x.is_zero() {
                entries.push((col, x));
            }
        }
        SparseVec::from_entries(entries)
    }

    /// Exact preimage under the embedding. Fails with the number of
    /// complete indices on which the input misses the ansatz image.
    pub fn q_inverse(&self, x: &SparseVec<Rat>, n_max: usize) -> Result<SparseVec<Rat>> {
        let n = self.n();
        if n > n_max {
            return Err(Error::CapExceeded { n, n_max });
        }
        self.q_inverse_cvec(x)
    }

    fn q_inverse_cvec(&self, x: &SparseVec<Rat>) -> Result<SparseVec<Rat>> {
        let complete = Space::complete(self.n(), self.gs.len());
        let r = match &self.ansatz {
            Ansatz::Complete => x.clone(),
            Ansatz::FullyLocal => {
                let n = self.n();
                let mut entries = Vec::new();
                for q in 1..=n {
                    let single = Pattern::from_qubits(n, &[q]);
                    for (tag, full) in [
                        (ParamIndex::Prep(single), ParamIndex::Prep(single)),
                        (ParamIndex::Meas(single), ParamIndex::Meas(single)),
                    ] {
                        let v = x.coeff(complete.col(&full).unwrap());
                        if !v.is_zero() {
                            entries.push((self.reduced.col(&tag).unwrap(), v));
                        }
                    }
                }
                for (g, gate) in self.gs.gates().iter().enumerate() {
                    let _ = gate;
                    for b in self.reduced.gate_labels(g).collect::<Vec<_>>() {
                        let v = x.coeff(complete.col(&ParamIndex::Gate(g, b)).unwrap());
                        if !v.is_zero() {
                            entries
                                .push((self.reduced.col(&ParamIndex::Gate(g, b)).unwrap(), v));
                        }
                    }
                }
                SparseVec::from_entries(entries)
            }
            Ansatz::QuasiLocal { omega_s, omega_m, omega_gates } => {
                let mut entries = Vec::new();
                for nu in omega_s.members() {
                    let r = mobius_inverse_spam(
                        &|mu| x.coeff(complete.col(&ParamIndex::Prep(mu)).unwrap()),
                        &nu,
                    );
                    if !r.is_zero() {
                        entries.push((self.reduced.col(&ParamIndex::Prep(nu)).unwrap(), r));
                    }
                }
                for nu in omega_m.members() {
                    let r = mobius_inverse_spam(
                        &|mu| x.coeff(complete.col(&ParamIndex::Meas(mu)).unwrap()),
                        &nu,
                    );
                    if !r.is_zero() {
                        entries.push((self.reduced.col(&ParamIndex::Meas(nu)).unwrap(), r));
                    }
                }
                debug_assert_eq!(omega_gates.len(), self.gs.len());
                for g in 0..self.gs.len() {
                    for b in self.reduced.gate_labels(g).collect::<Vec<_>>() {
                        let r = mobius_inverse_gate(
                            &|a| x.coeff(complete.col(&ParamIndex::Gate(g, *a)).unwrap()),
                            &b,
                        );
                        if !r.is_zero() {
                            entries
                                .push((self.reduced.col(&ParamIndex::Gate(g, b)).unwrap(), r));
                        }
                    }
                }
                SparseVec::from_entries(entries)
            }
            Ansatz::Custom { .. } => {
                let tables = self.custom.as_ref().unwrap();
                let mut tracked: TrackedEchelon<Rat> = TrackedEchelon::new();
                for col in &tables.columns {
                    tracked.insert(col.clone());
                }
                return tracked.express(x).ok_or(Error::NotInAnsatzImage(usize::MAX));
            }
        };
        // Residual check: the candidate must reproduce x exactly.
        let back = self.embed_cvec(&r);
        let mut residual = back.clone();
        residual.add_scaled(x, &rat_int(-1));
        if residual.is_zero() {
            Ok(r)
        } else {
            Err(Error::NotInAnsatzImage(residual.len()))
        }
    }
}

/// Möbius inverse on the subset lattice:
/// `r_nu = sum_{0 != mu <= nu} (-1)^(|nu|-|mu|) x_mu`.
pub fn mobius_inverse_spam<S: Scalar>(x: &dyn Fn(Pattern) -> S, nu: &Pattern) -> S {
    let mut acc = S::zero();
    for mu in nu.subsets() {
        if mu.is_empty() {
            continue;
        }
        let term = x(mu);
        if (nu.weight() - mu.weight()).is_multiple_of(2) {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

/// Zeta transform (inverse of the above): `x_mu = sum_{nu <= mu, nu in omega} r_nu`.
pub fn zeta_spam<S: Scalar>(r: &dyn Fn(Pattern) -> S, omega: &FactorSet, mu: &Pattern) -> S {
    let mut acc = S::zero();
    for nu in mu.subsets() {
        if !nu.is_empty() && omega.contains(&nu) {
            acc = acc + r(nu);
        }
    }
    acc
}

/// Möbius inverse on the majorization lattice:
/// `r_b = sum_{a majorized by b, a != I} (-1)^(w(b)-w(a)) x_a`.
pub fn mobius_inverse_gate<S: Scalar>(x: &dyn Fn(&Pauli) -> S, b: &Pauli) -> S {
    let mut acc = S::zero();
    for a in b.majorized_labels() {
        if a.is_identity() {
            continue;
        }
        let term = x(&a);
        if (b.weight() - a.weight()).is_multiple_of(2) {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

/// Zeta transform on the majorization lattice restricted to a factor set.
pub fn zeta_gate<S: Scalar>(r: &dyn Fn(&Pauli) -> S, omega: &FactorSet, a: &Pauli) -> S {
    let mut acc = S::zero();
    for b in a.majorized_labels() {
        if !b.is_identity() && b.consistent_with(omega) {
            acc = acc + r(&b);
        }
    }
    acc
}

/// `tau = -log(1 - 2*eta)`; requires `eta < 1/2`.
pub fn eta_to_tau(eta: f64) -> Result<f64> {
    if eta >= 0.5 {
        return Err(Error::Unsupported(format!("eta = {eta} must be < 1/2")));
    }
    Ok(-(1.0 - 2.0 * eta).ln())
}

pub fn tau_to_eta(tau: f64) -> f64 {
    (1.0 - (-tau).exp()) / 2.0
}

/// Fidelity exponent of a Pauli-Lindblad generator set:
/// `x_a = sum_b <a,b> tau_b`.
pub fn lindblad_to_fidelity<S: Scalar>(tau: &[(Pauli, S)], a: &Pauli) -> S {
    let mut acc = S::zero();
    for (b, t) in tau {
        if a.symplectic(b) == 1 {
            acc = acc + t.clone();
        }
    }
    acc
}

#[derive(Clone, Debug)]
pub struct LindbladDecomposition<S> {
    /// Generators on labels consistent with the factor set.
    pub tau: Vec<(Pauli, S)>,
    /// Nonzero generators outside the factor set: exactly zero iff the
    /// input channel is local to the factor set.
    pub residual: Vec<(Pauli, S)>,
}

/// Walsh-Hadamard extraction of Lindblad generators from fidelity
/// exponents: `tau_b = -(2/4^n) * sum_a (-1)^(<a,b>) x_a` for `b != I`.
/// Enumerates all of `4^n`, so it is guarded by `n_max`.
pub fn fidelity_to_lindblad<S: Scalar>(
    x: &dyn Fn(&Pauli) -> S,
    n: usize,
    omega: &FactorSet,
    n_max: usize,
) -> Result<LindbladDecomposition<S>> {
    if n > n_max {
        return Err(Error::CapExceeded { n, n_max });
    }
    let xs: Vec<(Pauli, S)> = Pauli::enumerate_nonidentity(n).map(|a| (a, x(&a))).collect();
    let scale = S::from_ratio(-2, 1 << (2 * n));
    let mut tau = Vec::new();
    let mut residual = Vec::new();
    for b in Pauli::enumerate_nonidentity(n) {
        let mut acc = S::zero();
        for (a, xa) in &xs {
            if a.symplectic(&b) == 1 {
                acc = acc - xa.clone();
            } else {
                acc = acc + xa.clone();
            }
        }
        let t = scale.clone() * acc;
        if b.consistent_with(omega) {
            tau.push((b, t));
        } else if !t.is_zero() {
            residual.push((b, t));
        }
    }
    Ok(LindbladDecomposition { tau, residual })
}

/// Walsh-Hadamard error rates `p_a = 4^-n sum_b lambda_b (-1)^(<a,b>)`.
/// Test utility; guarded by `n_max`.
pub fn error_rates<S: Scalar>(
    lambda: &dyn Fn(&Pauli) -> S,
    n: usize,
    n_max: usize,
) -> Result<Vec<(Pauli, S)>> {
    if n > n_max {
        return Err(Error::CapExceeded { n, n_max });
    }
    let ls: Vec<(Pauli, S)> = Pauli::enumerate(n).map(|b| (b, lambda(&b))).collect();
    let scale = S::from_ratio(1, 1 << (2 * n));
    Ok(Pauli::enumerate(n)
        .map(|a| {
            let mut acc = S::zero();
            for (b, l) in &ls {
                if a.symplectic(b) == 1 {
                    acc = acc - l.clone();
                } else {
                    acc = acc + l.clone();
                }
            }
            (a, scale.clone() * acc)
        })
        .collect())
}

/// Extended support map: grows `s` by the supports of all parallel
/// sub-gates it touches.
pub fn extended_support(gate: &Clifford, s: &Pattern) -> Pattern {
    let mut out = *s;
    for block in gate.blocks() {
        if block.intersects(s) {
            out = out.union(block);
        }
    }
    out
}

/// Sufficient covariance test: every factor's extended support stays in
/// the factor set.
pub fn is_covariant(omega: &FactorSet, gate: &Clifford) -> bool {
    omega.members().all(|s| {
        let ext = extended_support(gate, &s);
        ext == s || omega.contains(&ext)
    })
}

/// Exhaustive conjugation-based covariance check: conjugating any label
/// consistent with the factor set (in either direction) stays consistent.
pub fn is_covariant_exhaustive(
    omega: &FactorSet,
    gate: &Clifford,
    n_max: usize,
) -> Result<bool> {
    let n = gate.n();
    if n > n_max {
        return Err(Error::CapExceeded { n, n_max });
    }
    let inv = gate.inverse(format!("{}_inv", gate.name()));
    for b in Pauli::enumerate_consistent(omega) {
        if !gate.apply(&b).label.consistent_with(omega)
            || !inv.apply(&b).label.consistent_with(omega)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ground-truth noise model: reduced parameter values in the embedding's
/// reduced space. Fidelities are derived on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    values: Vec<f64>,
}

impl NoiseModel {
    pub fn zero(emb: &Embedding) -> Self {
        NoiseModel { values: vec![0.0; emb.dim() as usize] }
    }

    pub fn from_values(emb: &Embedding, values: Vec<f64>) -> Result<Self> {
        if values.len() != emb.dim() as usize {
            return Err(Error::DimensionMismatch(values.len(), emb.dim() as usize));
        }
        Ok(NoiseModel { values })
    }

    /// Draws a model with nonnegative reduced generators in `[0, scale]`.
    /// Quasi-local gate blocks draw Pauli-Lindblad generators and convert,
    /// so the resulting channels are completely positive; every fidelity is
    /// in (0, 1].
    pub fn random(emb: &Embedding, seed: u64, scale: f64) -> Self {
        assert!(scale >= 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let dim = emb.dim() as usize;
        let mut values = vec![0.0f64; dim];
        match emb.ansatz() {
            Ansatz::QuasiLocal { omega_gates, .. } => {
                let spam_dim = (emb.reduced().prep_dim() + emb.reduced().meas_dim()) as usize;
                for v in values.iter_mut().take(spam_dim) {
                    *v = rng.random::<f64>() * scale;
                }
                debug_assert_eq!(omega_gates.len(), emb.gate_set().len());
                for g in 0..emb.gate_set().len() {
                    let labels: Vec<Pauli> = emb.reduced().gate_labels(g).collect();
                    let tau: Vec<(Pauli, f64)> =
                        labels.iter().map(|b| (*b, rng.random::<f64>() * scale)).collect();
                    let x = |a: &Pauli| lindblad_to_fidelity(&tau, a);
                    for b in &labels {
                        let r = mobius_inverse_gate(&x, b);
                        let col = emb.reduced().col(&ParamIndex::Gate(g, *b)).unwrap();
                        values[col as usize] = r;
                    }
                }
            }
            _ => {
                for v in values.iter_mut() {
                    *v = rng.random::<f64>() * scale;
                }
            }
        }
        NoiseModel { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, col: u32) -> f64 {
        self.values[col as usize]
    }

    /// Fidelity exponent `x` at a complete parameter index.
    pub fn x_at(&self, emb: &Embedding, idx: &ParamIndex) -> f64 {
        emb.x_at(&self.values, idx)
    }

    /// Pauli fidelity `lambda = exp(-x)` at a complete parameter index.
    pub fn lambda(&self, emb: &Embedding, idx: &ParamIndex) -> f64 {
        (-self.x_at(emb, idx)).exp()
    }

    pub fn lambda_prep(&self, emb: &Embedding, u: &Pattern) -> f64 {
        if u.is_empty() {
            1.0
        } else {
            self.lambda(emb, &ParamIndex::Prep(*u))
        }
    }

    pub fn lambda_meas(&self, emb: &Embedding, u: &Pattern) -> f64 {
        if u.is_empty() {
            1.0
        } else {
            self.lambda(emb, &ParamIndex::Meas(*u))
        }
    }

    pub fn lambda_gate(&self, emb: &Embedding, gate: usize, a: &Pauli) -> f64 {
        if a.is_identity() {
            1.0
        } else {
            self.lambda(emb, &ParamIndex::Gate(gate, *a))
        }
    }

    /// Evaluates a reduced covector on this model.
    pub fn covector_value(&self, covector: &SparseVec<Rat>) -> f64 {
        covector.iter().map(|(c, v)| v.to_f64() * self.values[*c as usize]).sum()
    }
}

/// Shifts a model along a complete-space gauge direction: `x' = x + eta*d`.
/// The direction must lie in the embedded image (callers verify gauge
/// membership via the learnability module).
pub fn gauge_transform(
    emb: &Embedding,
    model: &NoiseModel,
    direction: &SparseVec<Rat>,
    eta: f64,
    n_max: usize,
) -> Result<NoiseModel> {
    let rdir = emb.q_inverse(direction, n_max).map_err(|e| match e {
        Error::NotInAnsatzImage(_) => Error::NotAGaugeDirection,
        other => other,
    })?;
    let mut values = model.values.clone();
    for (c, v) in rdir.iter() {
        values[*c as usize] += eta * v.to_f64();
    }
    Ok(NoiseModel { values })
}

/// Shifts a model along a reduced-space direction: `r' = r + eta*t`.
pub fn gauge_transform_reduced(
    model: &NoiseModel,
    direction: &SparseVec<Rat>,
    eta: f64,
) -> NoiseModel {
    let mut values = model.values.clone();
    for (c, v) in direction.iter() {
        values[*c as usize] += eta * v.to_f64();
    }
    NoiseModel { values }
}

/// Serializes a model as a map from reduced-index strings to values.
pub fn model_to_map(emb: &Embedding, model: &NoiseModel) -> BTreeMap<String, f64> {
    emb.reduced()
        .iter()
        .map(|(c, idx)| (idx.display(emb.gate_set()), model.value(c)))
        .collect()
}

pub fn model_from_map(emb: &Embedding, map: &BTreeMap<String, f64>) -> Result<NoiseModel> {
    let mut values = vec![0.0; emb.dim() as usize];
    for (key, v) in map {
        let idx = ParamIndex::parse(key, emb.gate_set())?;
        let col = emb
            .reduced()
            .col(&idx)
            .ok_or_else(|| Error::Parse(format!("index {key:?} not in the reduced space")))?;
        values[col as usize] = *v;
    }
    NoiseModel::from_values(emb, values)
}
