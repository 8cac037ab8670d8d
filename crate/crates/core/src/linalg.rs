//! Exact row reduction over the rationals for sparse vectors.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::Zero;

use crate::fock::{FockState, FockVector};
use crate::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// An echelon basis: each stored row has a distinct pivot (its largest key)
/// with coefficient one.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone + Hash> {
    rows: HashMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone + Hash> Default for Echelon<K> {
    fn default() -> Self {
        Self { rows: HashMap::new() }
    }
}

impl<K: Ord + Clone + Hash> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut rem = v.clone();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => rem.keys().next_back().cloned(),
                Some(c) => rem.range(..c.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { break };
            if let Some(row) = self.rows.get(&key) {
                let factor = rem[&key].clone();
                for (k, x) in row {
                    let entry = rem.entry(k.clone()).or_insert_with(Rational::zero);
                    *entry -= &factor * x;
                    if entry.is_zero() {
                        rem.remove(k);
                    }
                }
            }
            cursor = Some(key);
        }
        rem
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let rem = self.reduce(v);
        let Some((pivot, lead)) = rem.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let row = rem.into_iter().map(|(k, c)| (k, c / &lead)).collect();
        self.rows.insert(pivot, row);
        true
    }
}

pub fn fock_sparse(v: &FockVector) -> SparseVec<FockState> {
    v.terms().map(|(s, c)| (s.clone(), c.clone())).collect()
}

/// Exact rank of a family of lattice-model vectors.
pub fn rank(vectors: &[FockVector]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(&fock_sparse(v));
    }
    ech.rank()
}

pub fn span_of(vectors: &[FockVector]) -> Echelon<FockState> {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(&fock_sparse(v));
    }
    ech
}

pub fn in_span(span: &Echelon<FockState>, v: &FockVector) -> bool {
    span.contains(&fock_sparse(v))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Slot {
    Tag(usize),
    Coord(FockState),
}

/// Coefficients `c` with `Σ c_i columns_i = target`, if the target is in the span.
pub fn solve(columns: &[FockVector], target: &FockVector) -> Option<Vec<Rational>> {
    let mut ech = Echelon::new();
    for (i, col) in columns.iter().enumerate() {
        let mut row: SparseVec<Slot> = col.terms().map(|(s, c)| (Slot::Coord(s.clone()), c.clone())).collect();
        row.insert(Slot::Tag(i), crate::rational::int(1));
        ech.insert(&row);
    }
    let aug: SparseVec<Slot> = target.terms().map(|(s, c)| (Slot::Coord(s.clone()), c.clone())).collect();
    let rem = ech.reduce(&aug);
    if rem.keys().any(|k| matches!(k, Slot::Coord(_))) {
        return None;
    }
    Some((0..columns.len()).map(|i| rem.get(&Slot::Tag(i)).map(|c| -c).unwrap_or_else(Rational::zero)).collect())
}
