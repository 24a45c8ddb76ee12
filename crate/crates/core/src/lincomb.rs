//! Sparse exact linear combinations over an ordered basis.

use std::collections::btree_map::{self, BTreeMap, Entry};
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};

use crate::scalar::Field;

/// A basis label of some ℤ₂-graded vector space.
///
/// The `Ord` implementation is the global term order; the least key of a
/// nonzero vector is its echelon pivot.
pub trait Basis: Ord + Clone + Hash + Debug + Send + Sync + 'static {
    /// 0 for even, 1 for odd.
    fn parity(&self) -> u8;

    /// Largest Grassmann variable index the label refers to, if any.
    fn max_index(&self) -> Option<usize> {
        None
    }

    /// Whether every variable index in the label is `< n`.
    fn within(&self, n: usize) -> bool {
        self.max_index().map_or(true, |m| m < n)
    }
}

/// `(-1)^e`.
#[inline]
pub fn sign<F: Field>(e: u32) -> F {
    if e % 2 == 0 {
        F::one()
    } else {
        -F::one()
    }
}

/// Finite linear combination; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb<K: Basis, F: Field> {
    terms: BTreeMap<K, F>,
}

impl<K: Basis, F: Field> Default for LinComb<K, F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Basis, F: Field> Debug for LinComb<K, F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<K: Basis, F: Field> LinComb<K, F> {
    pub fn zero() -> Self {
        LinComb { terms: BTreeMap::new() }
    }

    pub fn term(key: K, coeff: F) -> Self {
        let mut v = Self::zero();
        v.add_term(key, coeff);
        v
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, F::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, F> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, F> {
        self.terms.keys()
    }

    pub fn coeff(&self, key: &K) -> Option<&F> {
        self.terms.get(key)
    }

    /// Least term in the global order.
    pub fn leading(&self) -> Option<(&K, &F)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, key: K, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k.clone(), v.clone() * c.clone());
        }
    }

    pub fn scaled(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// `(even part, odd part)`.
    pub fn split_parity(&self) -> [Self; 2] {
        let mut parts = [Self::zero(), Self::zero()];
        for (k, v) in self.iter() {
            parts[k.parity() as usize].terms.insert(k.clone(), v.clone());
        }
        parts
    }

    /// Parity if the vector is nonzero and ℤ₂-homogeneous.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.keys().map(Basis::parity);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.parity().is_some()
    }

    /// Keep only terms whose label satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        LinComb {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Relabel every term; colliding labels are summed.
    pub fn map_keys<K2: Basis>(&self, mut f: impl FnMut(&K) -> K2) -> LinComb<K2, F> {
        let mut out = LinComb::zero();
        for (k, v) in self.iter() {
            out.add_term(f(k), v.clone());
        }
        out
    }

    /// Relabel with a fallible, possibly signed or vanishing, map.
    pub fn try_map_terms<K2: Basis, E>(
        &self,
        mut f: impl FnMut(&K) -> Result<Option<(K2, F)>, E>,
    ) -> Result<LinComb<K2, F>, E> {
        let mut out = LinComb::zero();
        for (k, v) in self.iter() {
            if let Some((k2, c)) = f(k)? {
                out.add_term(k2, c * v.clone());
            }
        }
        Ok(out)
    }

    /// Largest variable index appearing in any term.
    pub fn max_index(&self) -> Option<usize> {
        self.keys().filter_map(Basis::max_index).max()
    }

    /// Bilinear extension of a product given on pairs of basis labels.
    pub fn bilinear<K2: Basis, K3: Basis>(
        &self,
        other: &LinComb<K2, F>,
        mut f: impl FnMut(&K, &K2, &mut dyn FnMut(K3, F)),
    ) -> LinComb<K3, F> {
        let mut out = LinComb::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                let c = ca.clone() * cb.clone();
                f(a, b, &mut |k, s| out.add_term(k, s * c.clone()));
            }
        }
        out
    }
}

impl<K: Basis, F: Field> FromIterator<(K, F)> for LinComb<K, F> {
    fn from_iter<I: IntoIterator<Item = (K, F)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

impl<'a, K: Basis, F: Field> IntoIterator for &'a LinComb<K, F> {
    type Item = (&'a K, &'a F);
    type IntoIter = btree_map::Iter<'a, K, F>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<K: Basis, F: Field> Add for &LinComb<K, F> {
    type Output = LinComb<K, F>;
    fn add(self, o: Self) -> LinComb<K, F> {
        let mut out = self.clone();
        out.add_scaled(o, &F::one());
        out
    }
}

impl<K: Basis, F: Field> Sub for &LinComb<K, F> {
    type Output = LinComb<K, F>;
    fn sub(self, o: Self) -> LinComb<K, F> {
        let mut out = self.clone();
        out.add_scaled(o, &-F::one());
        out
    }
}

impl<K: Basis, F: Field> Add for LinComb<K, F> {
    type Output = LinComb<K, F>;
    fn add(mut self, o: Self) -> LinComb<K, F> {
        self.add_scaled(&o, &F::one());
        self
    }
}

impl<K: Basis, F: Field> Sub for LinComb<K, F> {
    type Output = LinComb<K, F>;
    fn sub(mut self, o: Self) -> LinComb<K, F> {
        self.add_scaled(&o, &-F::one());
        self
    }
}

impl<K: Basis, F: Field> Neg for LinComb<K, F> {
    type Output = LinComb<K, F>;
    fn neg(self) -> LinComb<K, F> {
        self.scaled(&-F::one())
    }
}

impl<K: Basis, F: Field> Neg for &LinComb<K, F> {
    type Output = LinComb<K, F>;
    fn neg(self) -> LinComb<K, F> {
        self.scaled(&-F::one())
    }
}

/// Tensor product label `a ⊗ b`; parity is additive.
impl<A: Basis, B: Basis> Basis for (A, B) {
    fn parity(&self) -> u8 {
        (self.0.parity() + self.1.parity()) % 2
    }
    fn max_index(&self) -> Option<usize> {
        self.0.max_index().max(self.1.max_index())
    }
}
