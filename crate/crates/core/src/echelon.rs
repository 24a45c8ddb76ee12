//! Sparse reduced row echelon form over an exact field.

use std::collections::BTreeMap;

use crate::lincomb::{Basis, LinComb};
use crate::scalar::Field;

/// Fully reduced echelon basis: every row has pivot coefficient 1 and no row
/// mentions another row's pivot. The rows therefore depend only on the span.
#[derive(Clone, Debug)]
pub struct Echelon<K: Basis, F: Field> {
    rows: BTreeMap<K, LinComb<K, F>>,
}

impl<K: Basis, F: Field> Default for Echelon<K, F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Basis, F: Field> Echelon<K, F> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    /// Remainder of `v` modulo the span.
    pub fn reduce(&self, v: &LinComb<K, F>) -> LinComb<K, F> {
        let hits: Vec<(K, F)> = v
            .iter()
            .filter(|(k, _)| self.rows.contains_key(k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        let mut out = v.clone();
        // rows carry no foreign pivots, so the order of subtraction is irrelevant
        for (k, c) in hits {
            out.add_scaled(&self.rows[&k], &-c);
        }
        out
    }

    pub fn contains(&self, v: &LinComb<K, F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &LinComb<K, F>) -> bool {
        let r = self.reduce(v);
        let Some((p, c)) = r.leading() else {
            return false;
        };
        let p = p.clone();
        let inv = c.inv().expect("leading coefficient is nonzero");
        let r = r.scaled(&inv);
        for row in self.rows.values_mut() {
            if let Some(c) = row.coeff(&p).cloned() {
                row.add_scaled(&r, &-c);
            }
        }
        self.rows.insert(p, r);
        true
    }

    /// Rows in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &LinComb<K, F>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn into_rows(self) -> Vec<LinComb<K, F>> {
        self.rows.into_values().collect()
    }
}

/// Dimension of the span of `vs`.
pub fn rank<'a, K: Basis, F: Field>(vs: impl IntoIterator<Item = &'a LinComb<K, F>>) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e.rank()
}
