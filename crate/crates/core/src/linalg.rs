//! Sparse vectors over a generic scalar and exact incremental row reduction.
//!
//! Rows are kept sorted by column index with no explicit zeros. The echelon
//! structure maintains fully reduced pivot rows (leading coefficient 1,
//! pivot columns cleared from every other row), inserted in caller order
//! with the pivot always at the first nonzero column. This makes every
//! rank, kernel and span computation deterministic given the canonical
//! index order.

use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseVec<S> {
    entries: Vec<(u32, S)>,
}

impl<S: Scalar> Default for SparseVec<S> {
    fn default() -> Self {
        SparseVec::new()
    }
}

impl<S: Scalar> SparseVec<S> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(col: u32) -> Self {
        SparseVec { entries: vec![(col, S::one())] }
    }

    /// Builds from unsorted entries, combining duplicates and dropping zeros.
    pub fn from_entries(mut entries: Vec<(u32, S)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(u32, S)> = Vec::with_capacity(entries.len());
        for (col, val) in entries {
            match out.last_mut() {
                Some(last) if last.0 == col => {
                    last.1 = last.1.clone() + val;
                }
                _ => out.push((col, val)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(u32, S)> {
        self.entries.iter()
    }

    pub fn leading(&self) -> Option<&(u32, S)> {
        self.entries.first()
    }

    pub fn get(&self, col: u32) -> Option<&S> {
        self.entries
            .binary_search_by_key(&col, |e| e.0)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn coeff(&self, col: u32) -> S {
        self.get(col).cloned().unwrap_or_else(S::zero)
    }

    pub fn scale(&mut self, factor: &S) {
        if factor.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v = v.clone() * factor.clone();
        }
    }

    pub fn scaled(&self, factor: &S) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&(S::zero() - S::one()))
    }

    /// `self += factor * other`, merging sorted entry lists.
    pub fn add_scaled(&mut self, other: &SparseVec<S>, factor: &S) {
        if factor.is_zero() || other.is_empty() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = self.entries.iter();
        let mut b = other.entries.iter();
        let mut na = a.next();
        let mut nb = b.next();
        loop {
            match (na, nb) {
                (Some(&(ca, ref va)), Some(&(cb, ref vb))) => {
                    if ca < cb {
                        out.push((ca, va.clone()));
                        na = a.next();
                    } else if cb < ca {
                        let v = vb.clone() * factor.clone();
                        if !v.is_zero() {
                            out.push((cb, v));
                        }
                        nb = b.next();
                    } else {
                        let v = va.clone() + vb.clone() * factor.clone();
                        if !v.is_zero() {
                            out.push((ca, v));
                        }
                        na = a.next();
                        nb = b.next();
                    }
                }
                (Some(&(ca, ref va)), None) => {
                    out.push((ca, va.clone()));
                    na = a.next();
                }
                (None, Some(&(cb, ref vb))) => {
                    let v = vb.clone() * factor.clone();
                    if !v.is_zero() {
                        out.push((cb, v));
                    }
                    nb = b.next();
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn add(&mut self, other: &SparseVec<S>) {
        self.add_scaled(other, &S::one());
    }

    pub fn dot(&self, other: &SparseVec<S>) -> S {
        let mut acc = S::zero();
        let (short, long) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        for (col, v) in short.iter() {
            if let Some(w) = long.get(*col) {
                acc = acc + v.clone() * w.clone();
            }
        }
        acc
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseVec<T> {
        SparseVec { entries: self.entries.iter().map(|(c, v)| (*c, f(v))).collect() }
    }

    pub fn into_entries(self) -> Vec<(u32, S)> {
        self.entries
    }
}

/// Incrementally maintained reduced row echelon form.
pub struct Echelon<S> {
    rows: Vec<SparseVec<S>>,
    pivot_cols: Vec<u32>,
    by_col: BTreeMap<u32, usize>,
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Echelon::new()
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new(), pivot_cols: Vec::new(), by_col: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<S>] {
        &self.rows
    }

    pub fn pivot_cols(&self) -> &[u32] {
        &self.pivot_cols
    }

    /// Fully reduces `v` against the current pivot rows.
    pub fn reduce(&self, v: &mut SparseVec<S>) {
        let mut idx = 0;
        while idx < v.entries.len() {
            let col = v.entries[idx].0;
            if let Some(&ri) = self.by_col.get(&col) {
                let coef = S::zero() - v.entries[idx].1.clone();
                v.add_scaled(&self.rows[ri], &coef);
                // The entry at `col` cancelled exactly; entries before idx
                // are untouched because the pivot row leads at `col`.
            } else {
                idx += 1;
            }
        }
    }

    /// Reduces and inserts if independent. Returns the new pivot column.
    pub fn insert(&mut self, mut v: SparseVec<S>) -> Option<u32> {
        self.reduce(&mut v);
        let (col, lead) = match v.leading() {
            Some((c, l)) => (*c, l.clone()),
            None => return None,
        };
        let inv = S::one() / lead;
        v.scale(&inv);
        // Clear the new pivot column from existing rows to keep full RREF.
        let new_idx = self.rows.len();
        for row in &mut self.rows {
            if let Some(c) = row.get(col) {
                let coef = S::zero() - c.clone();
                row.add_scaled(&v, &coef);
            }
        }
        self.rows.push(v);
        self.pivot_cols.push(col);
        self.by_col.insert(col, new_idx);
        Some(col)
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Kernel basis of the matrix whose row space this echelon represents,
    /// over the ambient column range `0..ncols`. One vector per free column,
    /// in ascending free-column order.
    pub fn kernel(&self, ncols: u32) -> Vec<SparseVec<S>> {
        let mut out = Vec::new();
        for free in 0..ncols {
            if self.by_col.contains_key(&free) {
                continue;
            }
            let mut entries = vec![(free, S::one())];
            for (&pcol, &ri) in &self.by_col {
                if let Some(v) = self.rows[ri].get(free) {
                    entries.push((pcol, S::zero() - v.clone()));
                }
            }
            out.push(SparseVec::from_entries(entries));
        }
        out
    }
}

/// Echelon with coefficient tracking: expresses reduced/inserted vectors as
/// combinations of the originally inserted rows.
pub struct TrackedEchelon<S> {
    rows: Vec<(SparseVec<S>, SparseVec<S>)>,
    by_col: BTreeMap<u32, usize>,
    inserted: u32,
}

impl<S: Scalar> Default for TrackedEchelon<S> {
    fn default() -> Self {
        TrackedEchelon::new()
    }
}

impl<S: Scalar> TrackedEchelon<S> {
    pub fn new() -> Self {
        TrackedEchelon { rows: Vec::new(), by_col: BTreeMap::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracked(&self, v: &mut SparseVec<S>, t: &mut SparseVec<S>) {
        let mut idx = 0;
        while idx < v.entries.len() {
            let col = v.entries[idx].0;
            if let Some(&ri) = self.by_col.get(&col) {
                let coef = S::zero() - v.entries[idx].1.clone();
                v.add_scaled(&self.rows[ri].0, &coef);
                t.add_scaled(&self.rows[ri].1, &coef);
            } else {
                idx += 1;
            }
        }
    }

    /// Inserts the vector; its tracked identity is the insertion index.
    pub fn insert(&mut self, v: SparseVec<S>) -> Option<u32> {
        let id = self.inserted;
        self.inserted += 1;
        let mut v = v;
        let mut t = SparseVec::unit(id);
        self.reduce_tracked(&mut v, &mut t);
        let (col, lead) = match v.leading() {
            Some((c, l)) => (*c, l.clone()),
            None => return None,
        };
        let inv = S::one() / lead;
        v.scale(&inv);
        t.scale(&inv);
        let idx = self.rows.len();
        for (row, track) in &mut self.rows {
            if let Some(c) = row.get(col) {
                let coef = S::zero() - c.clone();
                row.add_scaled(&v, &coef);
                track.add_scaled(&t, &coef);
            }
        }
        self.rows.push((v, t));
        self.by_col.insert(col, idx);
        Some(col)
    }

    /// If `v` lies in the span of the inserted rows, returns coefficients
    /// indexed by insertion order such that `v = sum coef_i * row_i`.
    pub fn express(&self, v: &SparseVec<S>) -> Option<SparseVec<S>> {
        let mut w = v.clone();
        let mut t = SparseVec::new();
        self.reduce_tracked(&mut w, &mut t);
        if w.is_zero() {
            Some(t.neg())
        } else {
            None
        }
    }
}

/// Rank of an iterator of rows.
pub fn rank_of<S: Scalar>(rows: impl IntoIterator<Item = SparseVec<S>>) -> usize {
    let mut ech = Echelon::new();
    for row in rows {
        ech.insert(row);
    }
    ech.rank()
}

/// True iff the two row sets span the same subspace.
pub fn same_span<S: Scalar>(a: &[SparseVec<S>], b: &[SparseVec<S>]) -> bool {
    let mut ea = Echelon::new();
    for row in a {
        ea.insert(row.clone());
    }
    let mut eb = Echelon::new();
    for row in b {
        eb.insert(row.clone());
    }
    ea.rank() == eb.rank() && b.iter().all(|r| ea.contains(r)) && a.iter().all(|r| eb.contains(r))
}
