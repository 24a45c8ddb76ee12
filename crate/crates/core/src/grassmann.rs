//! The truncated Grassmann superalgebra Λ(N).
//!
//! A basis monomial is a set of variable indices stored as a bitset; its
//! canonical form is the ascending product `x_{i1} x_{i2} ... x_{ik}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lincomb::{sign, Basis, LinComb};
use crate::scalar::Field;

/// Hard limit on the number of Grassmann variables (one `u64` bitset).
pub const MAX_VARS: usize = 64;

/// Ascending set of variable indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS, "variable index {i} out of range");
        Monomial(1 << i)
    }

    /// Builds the canonical monomial from a set of indices (order ignored).
    pub fn from_indices(indices: &[usize]) -> Self {
        indices.iter().fold(Monomial::ONE, |m, &i| Monomial(m.0 | Monomial::var(i).0))
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_VARS && self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn max_var(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Number of indices in the monomial strictly below `i`.
    pub fn count_below(self, i: usize) -> u32 {
        (self.0 & ((1u64 << i) - 1)).count_ones()
    }

    /// Shift every index by `by`; `None` if an index would reach `n`.
    pub fn shifted(self, by: usize, n: usize) -> Option<Self> {
        match self.max_var() {
            None => Some(self),
            Some(m) if m + by < n => Some(Monomial(self.0 << by)),
            Some(_) => None,
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<usize> = self.indices().collect();
        write!(f, "x{idx:?}")
    }
}

impl Ord for Monomial {
    /// Degree first, then lexicographic on the ascending index sequence.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                std::cmp::Ordering::Equal
            } else if self.0 >> diff.trailing_zeros() & 1 == 1 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Basis for Monomial {
    fn parity(&self) -> u8 {
        (self.degree() % 2) as u8
    }
    fn max_index(&self) -> Option<usize> {
        self.max_var()
    }
}

/// Product of two monomials: `None` if they share a variable, otherwise the
/// sign of the merge permutation and the merged monomial.
#[inline]
pub fn mono_mul(a: Monomial, b: Monomial) -> Option<(bool, Monomial)> {
    if a.0 & b.0 != 0 {
        return None;
    }
    // inversions: pairs (i in a, j in b) with i > j
    let mut inversions = 0u32;
    let mut bits = b.0;
    while bits != 0 {
        let j = bits.trailing_zeros();
        inversions += (a.0 >> j).count_ones();
        bits &= bits - 1;
    }
    Some((inversions % 2 == 1, Monomial(a.0 | b.0)))
}

/// Left superderivative ∂_i on a monomial: `None` if `x_i` is absent,
/// otherwise `(negative, m \ {i})` with sign `(-1)^{#indices below i}`.
#[inline]
pub fn mono_partial(i: usize, m: Monomial) -> Option<(bool, Monomial)> {
    if !m.contains(i) {
        return None;
    }
    Some((m.count_below(i) % 2 == 1, Monomial(m.0 & !(1 << i))))
}

/// Bilinear product of raw Grassmann linear combinations.
pub fn mul_terms<F: Field>(a: &LinComb<Monomial, F>, b: &LinComb<Monomial, F>) -> LinComb<Monomial, F> {
    a.bilinear(b, |&x, &y, emit| {
        if let Some((neg, m)) = mono_mul(x, y) {
            emit(m, sign(neg as u32));
        }
    })
}

/// ∂_i applied to a raw linear combination.
pub fn partial_terms<F: Field>(i: usize, f: &LinComb<Monomial, F>) -> LinComb<Monomial, F> {
    let mut out = LinComb::zero();
    for (m, c) in f {
        if let Some((neg, rest)) = mono_partial(i, *m) {
            out.add_term(rest, if neg { -c.clone() } else { c.clone() });
        }
    }
    out
}

/// Which letter family a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    X,
    Y,
    Z,
    BigX,
    BigY,
    BigZ,
}

impl Family {
    fn letter(self) -> &'static str {
        match self {
            Family::X => "x",
            Family::Y => "y",
            Family::Z => "z",
            Family::BigX => "X",
            Family::BigY => "Y",
            Family::BigZ => "Z",
        }
    }
}

/// The naming schemes a [`VarTable`] can be built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "size", rename_all = "snake_case")]
pub enum VarLayout {
    Standard(usize),
    Triples(usize),
    PoissonTriples(usize),
    Hamiltonian(usize),
}

/// Names and families of the variables of Λ(N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarTable {
    layout: VarLayout,
    names: Vec<String>,
    deriv_names: Vec<String>,
    families: Vec<Family>,
    /// (family, level) for each index.
    levels: Vec<usize>,
    /// Index distance between a variable and its image under the shift τ.
    stride: usize,
    lookup: HashMap<String, usize>,
    deriv_lookup: HashMap<String, usize>,
}

impl VarTable {
    fn build(
        layout: VarLayout,
        entries: Vec<(Family, usize, String, String)>,
        stride: usize,
    ) -> Result<Self> {
        // an empty table carries algebras given by structure constants
        if entries.len() > MAX_VARS {
            return Err(Error::Config(format!(
                "number of variables must be at most {MAX_VARS}, got {}",
                entries.len()
            )));
        }
        let mut t = VarTable {
            layout,
            names: vec![],
            deriv_names: vec![],
            families: vec![],
            levels: vec![],
            stride,
            lookup: HashMap::new(),
            deriv_lookup: HashMap::new(),
        };
        for (i, (fam, level, name, dname)) in entries.into_iter().enumerate() {
            if t.lookup.insert(name.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate variable name {name}")));
            }
            t.deriv_lookup.insert(dname.clone(), i);
            t.names.push(name);
            t.deriv_names.push(dname);
            t.families.push(fam);
            t.levels.push(level);
        }
        Ok(t)
    }

    /// `x0 .. x_{n-1}` with derivatives written `d0 .. d_{n-1}`.
    pub fn standard(n: usize) -> Result<Arc<Self>> {
        let entries = (0..n)
            .map(|i| (Family::X, i, format!("x{i}"), format!("d{i}")))
            .collect();
        Ok(Arc::new(Self::build(VarLayout::Standard(n), entries, 1)?))
    }

    /// Interleaved `x_i, y_i, z_i` at flat indices `3i, 3i+1, 3i+2`.
    pub fn triples(levels: usize) -> Result<Arc<Self>> {
        let mut entries = vec![];
        for i in 0..levels {
            for fam in [Family::X, Family::Y, Family::Z] {
                let l = fam.letter();
                entries.push((fam, i, format!("{l}{i}"), format!("d{l}{i}")));
            }
        }
        Ok(Arc::new(Self::build(VarLayout::Triples(levels), entries, 3)?))
    }

    /// `x_i, y_i, z_i, X_i, Y_i, Z_i` at flat indices `6i .. 6i+5`.
    pub fn poisson_triples(levels: usize) -> Result<Arc<Self>> {
        let mut entries = vec![];
        for i in 0..levels {
            for fam in [Family::X, Family::Y, Family::Z, Family::BigX, Family::BigY, Family::BigZ] {
                let l = fam.letter();
                entries.push((fam, i, format!("{l}{i}"), format!("d{l}{i}")));
            }
        }
        Ok(Arc::new(Self::build(VarLayout::PoissonTriples(levels), entries, 6)?))
    }

    /// `x1..xn, y1..yn` (indices `0..n` and `n..2n`), the carrier of H_n.
    pub fn hamiltonian(n: usize) -> Result<Arc<Self>> {
        let mut entries = vec![];
        for fam in [Family::X, Family::Y] {
            for i in 1..=n {
                let l = fam.letter();
                entries.push((fam, i, format!("{l}{i}"), format!("d{l}{i}")));
            }
        }
        Ok(Arc::new(Self::build(VarLayout::Hamiltonian(n), entries, n.max(1))?))
    }

    pub fn from_layout(layout: VarLayout) -> Result<Arc<Self>> {
        match layout {
            VarLayout::Standard(n) => Self::standard(n),
            VarLayout::Triples(l) => Self::triples(l),
            VarLayout::PoissonTriples(l) => Self::poisson_triples(l),
            VarLayout::Hamiltonian(n) => Self::hamiltonian(n),
        }
    }

    pub fn layout(&self) -> VarLayout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn deriv_name(&self, i: usize) -> &str {
        &self.deriv_names[i]
    }

    pub fn family(&self, i: usize) -> Family {
        self.families[i]
    }

    pub fn level(&self, i: usize) -> usize {
        self.levels[i]
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn deriv_index_of(&self, name: &str) -> Option<usize> {
        self.deriv_lookup.get(name).copied()
    }

    /// Flat index of a family member at a level, if it exists.
    pub fn find(&self, family: Family, level: usize) -> Option<usize> {
        (0..self.len()).find(|&i| self.families[i] == family && self.levels[i] == level)
    }
}

pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::Structural(format!(
            "operands use different variable tables (N = {} vs N = {})",
            a.len(),
            b.len()
        )))
    }
}

/// Element of Λ(N) together with the variable table it lives over.
#[derive(Clone, PartialEq, Eq)]
pub struct GrassmannElement<F: Field> {
    vars: Arc<VarTable>,
    terms: LinComb<Monomial, F>,
}

impl<F: Field> fmt::Debug for GrassmannElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_lincomb(&self.terms, &self.vars))
    }
}

impl<F: Field> fmt::Display for GrassmannElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_lincomb(&self.terms, &self.vars))
    }
}

impl<F: Field> GrassmannElement<F> {
    /// Wraps raw terms; every variable must lie below N.
    pub fn new(vars: Arc<VarTable>, terms: LinComb<Monomial, F>) -> Result<Self> {
        if let Some(m) = terms.max_index() {
            if m >= vars.len() {
                return Err(Error::Overflow { index: m, n: vars.len() });
            }
        }
        Ok(GrassmannElement { vars, terms })
    }

    pub fn zero(vars: Arc<VarTable>) -> Self {
        GrassmannElement { vars, terms: LinComb::zero() }
    }

    pub fn one(vars: Arc<VarTable>) -> Self {
        Self::monomial(vars, Monomial::ONE, F::one())
    }

    pub fn var(vars: Arc<VarTable>, i: usize) -> Result<Self> {
        if i >= vars.len() {
            return Err(Error::Overflow { index: i, n: vars.len() });
        }
        Ok(Self::monomial(vars, Monomial::var(i), F::one()))
    }

    pub fn monomial(vars: Arc<VarTable>, m: Monomial, c: F) -> Self {
        GrassmannElement { vars, terms: LinComb::term(m, c) }
    }

    pub fn parse(vars: Arc<VarTable>, s: &str) -> Result<Self> {
        let terms = crate::text::parse_lincomb(s, &vars)?;
        Self::new(vars, terms)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> &LinComb<Monomial, F> {
        &self.terms
    }

    pub fn into_terms(self) -> LinComb<Monomial, F> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn parity(&self) -> Option<u8> {
        self.terms.parity()
    }

    pub fn scaled(&self, c: &F) -> Self {
        GrassmannElement { vars: self.vars.clone(), terms: self.terms.scaled(c) }
    }

    /// Supercommutative associative product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_table(&self.vars, &other.vars)?;
        Ok(GrassmannElement { vars: self.vars.clone(), terms: mul_terms(&self.terms, &other.terms) })
    }

    /// The odd superderivative ∂_i.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.vars.len() {
            return Err(Error::Overflow { index: i, n: self.vars.len() });
        }
        Ok(GrassmannElement { vars: self.vars.clone(), terms: partial_terms(i, &self.terms) })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        same_table(&self.vars, &other.vars)?;
        Ok(GrassmannElement { vars: self.vars.clone(), terms: &self.terms + &other.terms })
    }
}

impl<F: Field> Add for &GrassmannElement<F> {
    type Output = GrassmannElement<F>;
    /// Panics if the operands use different variable tables.
    fn add(self, o: Self) -> GrassmannElement<F> {
        self.checked_add(o).expect("adding elements of different Grassmann algebras")
    }
}

impl<F: Field> Sub for &GrassmannElement<F> {
    type Output = GrassmannElement<F>;
    fn sub(self, o: Self) -> GrassmannElement<F> {
        self.checked_add(&-o).expect("subtracting elements of different Grassmann algebras")
    }
}

impl<F: Field> Neg for &GrassmannElement<F> {
    type Output = GrassmannElement<F>;
    fn neg(self) -> GrassmannElement<F> {
        GrassmannElement { vars: self.vars.clone(), terms: -&self.terms }
    }
}

/// Product in a graded tensor product `A ⊗ B` following Kaplansky's rule
/// `(a1⊗b1)(a2⊗b2) = (-1)^{|b1||a2|} a1a2 ⊗ b1b2`, extended bilinearly.
pub fn kaplansky_mul<A: Basis, B: Basis, F: Field>(
    x: &LinComb<(A, B), F>,
    y: &LinComb<(A, B), F>,
    mul_a: impl Fn(&A, &A) -> LinComb<A, F>,
    mul_b: impl Fn(&B, &B) -> LinComb<B, F>,
) -> LinComb<(A, B), F> {
    x.bilinear(y, |(a1, b1), (a2, b2), emit| {
        let s: F = sign((b1.parity() * a2.parity()) as u32);
        let pa = mul_a(a1, a2);
        if pa.is_zero() {
            return;
        }
        let pb = mul_b(b1, b2);
        for (ka, ca) in &pa {
            for (kb, cb) in &pb {
                emit((ka.clone(), kb.clone()), s.clone() * ca.clone() * cb.clone());
            }
        }
    })
}

/// Grassmann product of two basis monomials as a linear combination.
pub fn mono_product<F: Field>(a: &Monomial, b: &Monomial) -> LinComb<Monomial, F> {
    match mono_mul(*a, *b) {
        Some((neg, m)) => LinComb::term(m, sign(neg as u32)),
        None => LinComb::zero(),
    }
}
