//! Poisson superalgebras and the doubling constructions built on them:
//! trivial Poisson algebras `P(L) = ⟨1⟩ ⊕ L`, Hamiltonian algebras, Poisson
//! tensor products, Kantor doubles, Jordan doubles, the map `D` and the
//! wreath-type product on `H ⊗ J`.
//!
//! Products are given on pairs of basis labels and extended bilinearly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{GenerationMode, GradedBasis, MultiDegree, SCHEMA_VERSION};
use crate::grassmann::{mono_mul, mono_partial, Monomial, VarTable};
use crate::lincomb::{sign, Basis, LinComb};
use crate::operators::{derivation_bracket_terms, DerTerm};
use crate::scalar::Field;
use crate::text::{self, ElementText, TermText};

/// Callback receiving the terms of a product of two basis labels.
pub type Emit<'a, K, F> = &'a mut dyn FnMut(K, F);

/// A Poisson superalgebra: supercommutative associative product with unit,
/// plus a Lie super-bracket, tied by the super-Leibniz rule.
pub trait PoissonAlgebra<F: Field>: Send + Sync {
    type Key: Basis;

    fn unit(&self) -> Self::Key;
    fn dot_basis(&self, a: &Self::Key, b: &Self::Key, emit: Emit<'_, Self::Key, F>);
    fn bracket_basis(&self, a: &Self::Key, b: &Self::Key, emit: Emit<'_, Self::Key, F>);
    fn describe(&self) -> String;

    /// Full basis for small algebras.
    fn finite_basis(&self) -> Option<Vec<Self::Key>> {
        None
    }

    fn dot(&self, a: &LinComb<Self::Key, F>, b: &LinComb<Self::Key, F>) -> LinComb<Self::Key, F> {
        a.bilinear(b, |x, y, emit| self.dot_basis(x, y, emit))
    }

    fn bracket(&self, a: &LinComb<Self::Key, F>, b: &LinComb<Self::Key, F>) -> LinComb<Self::Key, F> {
        a.bilinear(b, |x, y, emit| self.bracket_basis(x, y, emit))
    }
}

/// `[a·b, {a,b}]`, for closures under both Poisson operations.
pub fn poisson_products<F: Field, P: PoissonAlgebra<F>>(
    p: &P,
    a: &LinComb<P::Key, F>,
    b: &LinComb<P::Key, F>,
) -> Vec<LinComb<P::Key, F>> {
    vec![p.dot(a, b), p.bracket(a, b)]
}

/// A (possibly nonassociative) superalgebra given by a product on basis labels.
pub trait JordanAlgebra<F: Field>: Send + Sync {
    type Key: Basis;

    fn mul_basis(&self, a: &Self::Key, b: &Self::Key, emit: Emit<'_, Self::Key, F>);
    fn describe(&self) -> String;

    /// The odd map `D`, if the algebra carries one.
    fn d_basis(&self, _a: &Self::Key, _emit: Emit<'_, Self::Key, F>) -> Result<()> {
        Err(Error::Structural(format!("{} has no D-map", self.describe())))
    }

    fn finite_basis(&self) -> Option<Vec<Self::Key>> {
        None
    }

    fn mul(&self, a: &LinComb<Self::Key, F>, b: &LinComb<Self::Key, F>) -> LinComb<Self::Key, F> {
        a.bilinear(b, |x, y, emit| self.mul_basis(x, y, emit))
    }

    fn d_map(&self, a: &LinComb<Self::Key, F>) -> Result<LinComb<Self::Key, F>> {
        let mut out = LinComb::zero();
        for (k, c) in a {
            let mut err = Ok(());
            let mut emit = |key, s: F| out.add_term(key, s * c.clone());
            if let Err(e) = self.d_basis(k, &mut emit) {
                err = Err(e);
            }
            err?;
        }
        Ok(out)
    }
}

/// Label of `⟨1⟩ ⊕ L`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitKey<K> {
    One,
    El(K),
}

impl<K: fmt::Debug> fmt::Debug for UnitKey<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitKey::One => write!(f, "1"),
            UnitKey::El(k) => write!(f, "{k:?}"),
        }
    }
}

impl<K: Basis> Basis for UnitKey<K> {
    fn parity(&self) -> u8 {
        match self {
            UnitKey::One => 0,
            UnitKey::El(k) => k.parity(),
        }
    }
    fn max_index(&self) -> Option<usize> {
        match self {
            UnitKey::One => None,
            UnitKey::El(k) => k.max_index(),
        }
    }
}

/// The unit is written with no factors, i.e. as a bare coefficient.
impl<K: TermText> TermText for UnitKey<K> {
    fn write_factors(&self, vars: &VarTable, out: &mut Vec<String>) {
        if let UnitKey::El(k) = self {
            k.write_factors(vars, out);
        }
    }
    fn parse_factors(tokens: &[&str], vars: &VarTable) -> Result<Option<(bool, Self)>> {
        if tokens.is_empty() {
            return Ok(Some((false, UnitKey::One)));
        }
        Ok(K::parse_factors(tokens, vars)?.map(|(s, k)| (s, UnitKey::El(k))))
    }
}

/// Label of a Kantor double `A ⊕ Ā`; `|ā| = 1 - |a|`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KanKey<K> {
    Plain(K),
    Bar(K),
}

impl<K> KanKey<K> {
    pub fn inner(&self) -> &K {
        match self {
            KanKey::Plain(k) | KanKey::Bar(k) => k,
        }
    }

    pub fn is_bar(&self) -> bool {
        matches!(self, KanKey::Bar(_))
    }
}

impl<K: fmt::Debug> fmt::Debug for KanKey<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KanKey::Plain(k) => write!(f, "{k:?}"),
            KanKey::Bar(k) => write!(f, "bar({k:?})"),
        }
    }
}

impl<K: Basis> Basis for KanKey<K> {
    fn parity(&self) -> u8 {
        match self {
            KanKey::Plain(k) => k.parity(),
            KanKey::Bar(k) => 1 - k.parity(),
        }
    }
    fn max_index(&self) -> Option<usize> {
        self.inner().max_index()
    }
}

/// Basis labels with a distinguished unit label.
pub trait UnitBasis: TermText {
    fn unit_key() -> Self;
}

impl UnitBasis for Monomial {
    fn unit_key() -> Self {
        Monomial::ONE
    }
}

impl<K: TermText> UnitBasis for UnitKey<K> {
    fn unit_key() -> Self {
        UnitKey::One
    }
}

/// Text form `c1*1 + <plain part> + c2*1b + b(<plain part>)`.
impl<K: UnitBasis> ElementText for KanKey<K> {
    fn format_element<F: Field>(v: &LinComb<Self, F>, vars: &VarTable) -> String {
        let unit = K::unit_key();
        let plain = LinComb::from_iter(v.iter().filter_map(|(k, c)| match k {
            KanKey::Plain(p) if *p != unit => Some((p.clone(), c.clone())),
            _ => None,
        }));
        let bar = LinComb::from_iter(v.iter().filter_map(|(k, c)| match k {
            KanKey::Bar(p) if *p != unit => Some((p.clone(), c.clone())),
            _ => None,
        }));
        text::format_double_pieces(
            v.coeff(&KanKey::Plain(unit.clone())),
            &plain,
            v.coeff(&KanKey::Bar(unit.clone())),
            &bar,
            vars,
        )
    }

    fn parse_element<F: Field>(s: &str, vars: &VarTable) -> Result<LinComb<Self, F>> {
        if s.trim() == "0" {
            return Ok(LinComb::zero());
        }
        let mut out = LinComb::zero();
        for piece in text::parse_double_pieces::<K, F>(s, vars)? {
            match piece {
                text::DoublePiece::Unit(c) => out.add_term(KanKey::Plain(K::unit_key()), c),
                text::DoublePiece::UnitBar(c) => out.add_term(KanKey::Bar(K::unit_key()), c),
                text::DoublePiece::Plain(v) => {
                    for (k, c) in &v {
                        out.add_term(KanKey::Plain(k.clone()), c.clone());
                    }
                }
                text::DoublePiece::Bar(v) => {
                    for (k, c) in &v {
                        out.add_term(KanKey::Bar(k.clone()), c.clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Hamiltonian Poisson superalgebra on a Grassmann algebra with a list of
/// conjugate variable pairs `(p, q)`:
/// `{f,g} = (-1)^{|f|+1} Σ (∂_p f ∂_q g + ∂_q f ∂_p g)`.
#[derive(Clone, Debug)]
pub struct Hamiltonian<F: Field> {
    vars: Arc<VarTable>,
    pairs: Vec<(usize, usize)>,
    name: String,
    _field: std::marker::PhantomData<F>,
}

impl<F: Field> Hamiltonian<F> {
    /// `H_n` on `x1..xn, y1..yn` with `{x_i, y_j} = δ_ij`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("H_n needs n >= 1".into()));
        }
        let vars = VarTable::hamiltonian(n)?;
        let mut h = Self::with_pairs(vars, (0..n).map(|i| (i, n + i)).collect())?;
        h.name = format!("H{n}");
        Ok(h)
    }

    pub fn with_pairs(vars: Arc<VarTable>, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for &(p, q) in &pairs {
            if p >= vars.len() || q >= vars.len() {
                return Err(Error::Overflow { index: p.max(q), n: vars.len() });
            }
            if p == q || !seen.insert(p) || !seen.insert(q) {
                return Err(Error::InvalidArgument("conjugate pairs must be disjoint".into()));
            }
        }
        let name = format!("Hamiltonian({} pairs)", pairs.len());
        Ok(Hamiltonian { vars, pairs, name, _field: std::marker::PhantomData })
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn dot_terms(&self, a: &LinComb<Monomial, F>, b: &LinComb<Monomial, F>) -> LinComb<Monomial, F> {
        self.dot(a, b)
    }

    pub fn bracket_terms(&self, a: &LinComb<Monomial, F>, b: &LinComb<Monomial, F>) -> LinComb<Monomial, F> {
        self.bracket(a, b)
    }

    pub fn parse(&self, s: &str) -> Result<LinComb<Monomial, F>> {
        text::parse_lincomb(s, &self.vars)
    }
}

impl<F: Field> PoissonAlgebra<F> for Hamiltonian<F> {
    type Key = Monomial;

    fn unit(&self) -> Monomial {
        Monomial::ONE
    }

    fn dot_basis(&self, a: &Monomial, b: &Monomial, emit: Emit<'_, Monomial, F>) {
        if let Some((neg, m)) = mono_mul(*a, *b) {
            emit(m, sign(neg as u32));
        }
    }

    fn bracket_basis(&self, f: &Monomial, g: &Monomial, emit: Emit<'_, Monomial, F>) {
        let outer = (f.degree() + 1) % 2 == 1;
        for &(p, q) in &self.pairs {
            for (u, v) in [(p, q), (q, p)] {
                let (Some((s1, df)), Some((s2, dg))) = (mono_partial(u, *f), mono_partial(v, *g)) else {
                    continue;
                };
                if let Some((s3, m)) = mono_mul(df, dg) {
                    emit(m, sign((outer ^ s1 ^ s2 ^ s3) as u32));
                }
            }
        }
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn finite_basis(&self) -> Option<Vec<Monomial>> {
        let n = self.vars.len();
        (n <= 12).then(|| {
            let mut all: Vec<Monomial> = (0..1u64 << n).map(Monomial).collect();
            all.sort();
            all
        })
    }
}

type LieBracket<K, F> = dyn Fn(&K, &K, Emit<'_, K, F>) + Send + Sync;

/// `P(L) = ⟨1⟩ ⊕ L` with `1·x = x`, `x·y = 0` and `{x,y} = [x,y]` on `L`.
#[derive(Clone)]
pub struct TrivialPoisson<K: Basis, F: Field> {
    bracket: Arc<LieBracket<K, F>>,
    basis: Option<Vec<K>>,
    name: String,
}

impl<F: Field> TrivialPoisson<DerTerm, F> {
    /// Over the Lie superalgebra of all superderivations of Λ(N).
    pub fn derivations() -> Self {
        TrivialPoisson {
            bracket: Arc::new(|a: &DerTerm, b: &DerTerm, emit: Emit<'_, DerTerm, F>| {
                let r = derivation_bracket_terms::<F>(&LinComb::basis(*a), &LinComb::basis(*b));
                for (k, c) in &r {
                    emit(*k, c.clone());
                }
            }),
            basis: None,
            name: "P(Der)".into(),
        }
    }
}

impl<F: Field> TrivialPoisson<TableKey, F> {
    /// Over a Lie superalgebra given by a structure table.
    pub fn from_lie_table(table: Arc<StructureTable<F>>) -> Self {
        let basis = Some(table.keys());
        let name = format!("P({})", table.name);
        TrivialPoisson {
            bracket: Arc::new(move |a: &TableKey, b: &TableKey, emit: Emit<'_, TableKey, F>| {
                table.bracket_basis_raw(a, b, emit)
            }),
            basis,
            name,
        }
    }
}

impl<K: Basis, F: Field> TrivialPoisson<K, F> {
    pub fn lie_bracket(&self, a: &LinComb<K, F>, b: &LinComb<K, F>) -> LinComb<K, F> {
        a.bilinear(b, |x, y, emit| (self.bracket)(x, y, emit))
    }
}

impl<K: Basis, F: Field> PoissonAlgebra<F> for TrivialPoisson<K, F> {
    type Key = UnitKey<K>;

    fn unit(&self) -> UnitKey<K> {
        UnitKey::One
    }

    fn dot_basis(&self, a: &UnitKey<K>, b: &UnitKey<K>, emit: Emit<'_, UnitKey<K>, F>) {
        match (a, b) {
            (UnitKey::One, k) | (k, UnitKey::One) => emit(k.clone(), F::one()),
            _ => {}
        }
    }

    fn bracket_basis(&self, a: &UnitKey<K>, b: &UnitKey<K>, emit: Emit<'_, UnitKey<K>, F>) {
        if let (UnitKey::El(x), UnitKey::El(y)) = (a, b) {
            (self.bracket)(x, y, &mut |k, c| emit(UnitKey::El(k), c));
        }
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn finite_basis(&self) -> Option<Vec<UnitKey<K>>> {
        self.basis.as_ref().map(|b| {
            std::iter::once(UnitKey::One).chain(b.iter().cloned().map(UnitKey::El)).collect()
        })
    }
}

/// `A ⊗ P` with the Kaplansky product and
/// `{a⊗v, b⊗w} = (-1)^{|v||b|} ({a,b}⊗vw + ab⊗{v,w})`.
pub struct TensorPoisson<A, B> {
    pub left: A,
    pub right: B,
}

impl<F: Field, A: PoissonAlgebra<F>, B: PoissonAlgebra<F>> PoissonAlgebra<F> for TensorPoisson<A, B> {
    type Key = (A::Key, B::Key);

    fn unit(&self) -> Self::Key {
        (self.left.unit(), self.right.unit())
    }

    fn dot_basis(&self, (a, v): &Self::Key, (b, w): &Self::Key, emit: Emit<'_, Self::Key, F>) {
        let s: F = sign((v.parity() * b.parity()) as u32);
        let ab = collect(|e| self.left.dot_basis(a, b, e));
        if ab.is_zero() {
            return;
        }
        let vw = collect(|e| self.right.dot_basis(v, w, e));
        tensor_emit(&ab, &vw, &s, emit);
    }

    fn bracket_basis(&self, (a, v): &Self::Key, (b, w): &Self::Key, emit: Emit<'_, Self::Key, F>) {
        let s: F = sign((v.parity() * b.parity()) as u32);
        let ab_br = collect(|e| self.left.bracket_basis(a, b, e));
        if !ab_br.is_zero() {
            tensor_emit(&ab_br, &collect(|e| self.right.dot_basis(v, w, e)), &s, emit);
        }
        let ab = collect(|e| self.left.dot_basis(a, b, e));
        if !ab.is_zero() {
            tensor_emit(&ab, &collect(|e| self.right.bracket_basis(v, w, e)), &s, emit);
        }
    }

    fn describe(&self) -> String {
        format!("{} ⊗ {}", self.left.describe(), self.right.describe())
    }

    fn finite_basis(&self) -> Option<Vec<Self::Key>> {
        let l = self.left.finite_basis()?;
        let r = self.right.finite_basis()?;
        Some(l.iter().flat_map(|a| r.iter().map(move |b| (a.clone(), b.clone()))).collect())
    }
}

fn collect<K: Basis, F: Field>(f: impl FnOnce(Emit<'_, K, F>)) -> LinComb<K, F> {
    let mut out = LinComb::zero();
    f(&mut |k, c| out.add_term(k, c));
    out
}

fn tensor_emit<A: Basis, B: Basis, F: Field>(
    x: &LinComb<A, F>,
    y: &LinComb<B, F>,
    s: &F,
    emit: Emit<'_, (A, B), F>,
) {
    for (ka, ca) in x {
        for (kb, cb) in y {
            emit((ka.clone(), kb.clone()), s.clone() * ca.clone() * cb.clone());
        }
    }
}

/// Kantor double `Kan(A) = A ⊕ Ā` of a Poisson superalgebra:
/// `a•b = ab`, `ā•b = (-1)^{|b|} (ab)‾`, `a•b̄ = (ab)‾`, `ā•b̄ = (-1)^{|b|} {a,b}`.
pub struct Kantor<P> {
    pub poisson: P,
}

impl<P> Kantor<P> {
    pub fn new(poisson: P) -> Self {
        Kantor { poisson }
    }
}

pub fn kantor_mul_basis<F: Field, P: PoissonAlgebra<F>>(
    p: &P,
    a: &KanKey<P::Key>,
    b: &KanKey<P::Key>,
    emit: Emit<'_, KanKey<P::Key>, F>,
) {
    match (a, b) {
        (KanKey::Plain(x), KanKey::Plain(y)) => p.dot_basis(x, y, &mut |k, c| emit(KanKey::Plain(k), c)),
        (KanKey::Bar(x), KanKey::Plain(y)) => {
            let s: F = sign(y.parity() as u32);
            p.dot_basis(x, y, &mut |k, c| emit(KanKey::Bar(k), s.clone() * c))
        }
        (KanKey::Plain(x), KanKey::Bar(y)) => p.dot_basis(x, y, &mut |k, c| emit(KanKey::Bar(k), c)),
        (KanKey::Bar(x), KanKey::Bar(y)) => {
            let s: F = sign(y.parity() as u32);
            p.bracket_basis(x, y, &mut |k, c| emit(KanKey::Plain(k), s.clone() * c))
        }
    }
}

pub fn kantor_mul<F: Field, P: PoissonAlgebra<F>>(
    p: &P,
    u: &LinComb<KanKey<P::Key>, F>,
    v: &LinComb<KanKey<P::Key>, F>,
) -> LinComb<KanKey<P::Key>, F> {
    u.bilinear(v, |a, b, emit| kantor_mul_basis(p, a, b, emit))
}

/// `D(a) = 0`, `D(ā) = (-1)^{|a|} a`.
pub fn d_map_basis<K: Basis, F: Field>(a: &KanKey<K>, emit: Emit<'_, KanKey<K>, F>) {
    if let KanKey::Bar(k) = a {
        emit(KanKey::Plain(k.clone()), sign(k.parity() as u32));
    }
}

pub fn d_map<K: Basis, F: Field>(u: &LinComb<KanKey<K>, F>) -> LinComb<KanKey<K>, F> {
    let mut out = LinComb::zero();
    for (k, c) in u {
        d_map_basis(k, &mut |key, s: F| out.add_term(key, s * c.clone()));
    }
    out
}

impl<F: Field, P: PoissonAlgebra<F>> JordanAlgebra<F> for Kantor<P> {
    type Key = KanKey<P::Key>;

    fn mul_basis(&self, a: &Self::Key, b: &Self::Key, emit: Emit<'_, Self::Key, F>) {
        kantor_mul_basis(&self.poisson, a, b, emit)
    }

    fn describe(&self) -> String {
        format!("Kan({})", self.poisson.describe())
    }

    fn d_basis(&self, a: &Self::Key, emit: Emit<'_, Self::Key, F>) -> Result<()> {
        d_map_basis(a, emit);
        Ok(())
    }

    fn finite_basis(&self) -> Option<Vec<Self::Key>> {
        let b = self.poisson.finite_basis()?;
        Some(b.iter().cloned().map(KanKey::Plain).chain(b.iter().cloned().map(KanKey::Bar)).collect())
    }
}

/// Which sign rule the Jordan double uses on `x̄•ȳ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JorRule {
    /// `x̄•ȳ = (-1)^{|y|} [x,y]`: the Kantor double of `P(L)`.
    Kantor,
    /// `x̄•ȳ = [x,y]` taken verbatim; not supercommutative when `x`, `y`
    /// have different parities, kept for comparison.
    Literal,
}

/// Product of `Jor(L) = ⟨1⟩ ⊕ L ⊕ ⟨1̄⟩ ⊕ L̄`: the unit, `x•1̄ = x̄`,
/// `1̄•x = (-1)^{|x|} x̄`, `x̄•ȳ` per `rule`, all other products zero.
pub fn jordan_double_mul<K: Basis, F: Field>(
    l: &TrivialPoisson<K, F>,
    rule: JorRule,
    u: &LinComb<KanKey<UnitKey<K>>, F>,
    v: &LinComb<KanKey<UnitKey<K>>, F>,
) -> LinComb<KanKey<UnitKey<K>>, F> {
    use KanKey::*;
    use UnitKey::*;
    u.bilinear(v, |a, b, emit| match (a, b) {
        (Plain(One), k) | (k, Plain(One)) => emit(k.clone(), F::one()),
        (Plain(El(x)), Bar(One)) => emit(Bar(El(x.clone())), F::one()),
        (Bar(One), Plain(El(x))) => emit(Bar(El(x.clone())), sign(x.parity() as u32)),
        (Bar(El(x)), Bar(El(y))) => {
            let s: F = match rule {
                JorRule::Kantor => sign(y.parity() as u32),
                JorRule::Literal => F::one(),
            };
            (l.bracket)(x, y, &mut |k, c| emit(Plain(El(k)), s.clone() * c));
        }
        _ => {}
    })
}

/// `H ⊗ J` with `(x⊗f)•(y⊗g) = (-1)^{|f||y|} (x·y ⊗ f∘g + (-1)^{|f|+1} {x,y} ⊗ D(f)∘D(g))`.
pub struct Wreath<H, J> {
    pub h: H,
    pub j: J,
}

impl<H, J> Wreath<H, J> {
    /// Fails when `J` carries no `D`.
    pub fn new<F: Field>(h: H, j: J) -> Result<Self>
    where
        H: PoissonAlgebra<F>,
        J: JordanAlgebra<F>,
    {
        if let Some(b) = j.finite_basis() {
            if let Some(k) = b.first() {
                j.d_basis(k, &mut |_, _| {})?;
            }
        }
        Ok(Wreath { h, j })
    }
}

impl<F: Field, H: PoissonAlgebra<F>, J: JordanAlgebra<F>> JordanAlgebra<F> for Wreath<H, J> {
    type Key = (H::Key, J::Key);

    fn mul_basis(&self, (x, f): &Self::Key, (y, g): &Self::Key, emit: Emit<'_, Self::Key, F>) {
        let s: F = sign((f.parity() * y.parity()) as u32);
        let xy = collect(|e| self.h.dot_basis(x, y, e));
        if !xy.is_zero() {
            let fg = collect(|e| self.j.mul_basis(f, g, e));
            tensor_emit(&xy, &fg, &s, emit);
        }
        let br = collect(|e| self.h.bracket_basis(x, y, e));
        if !br.is_zero() {
            let df = collect(|e| {
                self.j.d_basis(f, e).expect("D checked at construction");
            });
            let dg = collect(|e| {
                self.j.d_basis(g, e).expect("D checked at construction");
            });
            let prod = self.j.mul(&df, &dg);
            let s2 = s * sign::<F>(f.parity() as u32 + 1);
            tensor_emit(&br, &prod, &s2, emit);
        }
    }

    fn describe(&self) -> String {
        format!("{} ≀ {}", self.h.describe(), self.j.describe())
    }

    fn finite_basis(&self) -> Option<Vec<Self::Key>> {
        let l = self.h.finite_basis()?;
        let r = self.j.finite_basis()?;
        Some(l.iter().flat_map(|a| r.iter().map(move |b| (a.clone(), b.clone()))).collect())
    }
}

/// `wreath_mul` on explicit elements.
pub fn wreath_mul<F: Field, H: PoissonAlgebra<F>, J: JordanAlgebra<F>>(
    w: &Wreath<H, J>,
    u: &LinComb<(H::Key, J::Key), F>,
    v: &LinComb<(H::Key, J::Key), F>,
) -> LinComb<(H::Key, J::Key), F> {
    w.mul(u, v)
}

/// `A⁺`: an associative superalgebra with `a∘b = ½(ab + (-1)^{|a||b|} ba)`.
pub struct Symmetrized<K: Basis, F: Field> {
    mul: Arc<LieBracket<K, F>>,
    basis: Option<Vec<K>>,
    name: String,
}

impl<K: Basis, F: Field> Symmetrized<K, F> {
    pub fn new(
        name: impl Into<String>,
        basis: Option<Vec<K>>,
        mul: impl Fn(&K, &K, Emit<'_, K, F>) + Send + Sync + 'static,
    ) -> Result<Self> {
        if F::CHARACTERISTIC == 2 {
            return Err(Error::Config("A+ needs characteristic other than 2".into()));
        }
        Ok(Symmetrized { mul: Arc::new(mul), basis, name: name.into() })
    }
}

impl<K: Basis, F: Field> JordanAlgebra<F> for Symmetrized<K, F> {
    type Key = K;

    fn mul_basis(&self, a: &K, b: &K, emit: Emit<'_, K, F>) {
        let half = F::from_i64(2).inv().expect("characteristic is not 2");
        let s: F = sign((a.parity() * b.parity()) as u32);
        (self.mul)(a, b, &mut |k, c| emit(k, half.clone() * c));
        (self.mul)(b, a, &mut |k, c| emit(k, half.clone() * s.clone() * c));
    }

    fn describe(&self) -> String {
        format!("{}+", self.name)
    }

    fn finite_basis(&self) -> Option<Vec<K>> {
        self.basis.clone()
    }
}

/// Basis label of an explicit structure table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableKey {
    pub index: u32,
    pub parity: u8,
}

impl fmt::Debug for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.index)
    }
}

impl Basis for TableKey {
    fn parity(&self) -> u8 {
        self.parity
    }
}

/// Structure constants of a small superalgebra: a basis with parities, an
/// optional unit, and the products `dot` and `bracket` on basis pairs
/// (missing pairs are zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable<F: Field> {
    pub name: String,
    pub names: Vec<String>,
    pub parities: Vec<u8>,
    pub unit: Option<u32>,
    pub dot: BTreeMap<(u32, u32), LinComb<TableKey, F>>,
    pub bracket: BTreeMap<(u32, u32), LinComb<TableKey, F>>,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    a: u32,
    b: u32,
    /// `[basis index, coefficient]` pairs.
    value: Vec<(u32, String)>,
}

#[derive(Serialize, Deserialize)]
struct TableRecord {
    schema_version: u32,
    name: String,
    field: String,
    basis: Vec<String>,
    parities: Vec<u8>,
    unit: Option<u32>,
    dot: Vec<EntryRecord>,
    bracket: Vec<EntryRecord>,
}

impl<F: Field> StructureTable<F> {
    pub fn key(&self, i: u32) -> TableKey {
        TableKey { index: i, parity: self.parities[i as usize] }
    }

    pub fn keys(&self) -> Vec<TableKey> {
        (0..self.parities.len() as u32).map(|i| self.key(i)).collect()
    }

    fn bracket_basis_raw(&self, a: &TableKey, b: &TableKey, emit: Emit<'_, TableKey, F>) {
        if let Some(v) = self.bracket.get(&(a.index, b.index)) {
            for (k, c) in v {
                emit(*k, c.clone());
            }
        }
    }

    /// Materializes the products of a finite Poisson algebra.
    pub fn from_poisson<P: PoissonAlgebra<F>>(
        p: &P,
        name_of: impl Fn(&P::Key) -> String,
    ) -> Result<Self> {
        let basis = p
            .finite_basis()
            .ok_or_else(|| Error::InvalidArgument(format!("{} is not finite", p.describe())))?;
        let index: BTreeMap<P::Key, u32> = basis.iter().cloned().zip(0..).collect();
        let mut t = StructureTable {
            name: p.describe(),
            names: basis.iter().map(&name_of).collect(),
            parities: basis.iter().map(Basis::parity).collect(),
            unit: index.get(&p.unit()).copied(),
            dot: BTreeMap::new(),
            bracket: BTreeMap::new(),
        };
        for (a, &ia) in &index {
            for (b, &ib) in &index {
                for (is_dot, map) in [(true, &mut t.dot), (false, &mut t.bracket)] {
                    let mut v = LinComb::zero();
                    let mut emit = |k: P::Key, c: F| v.add_term(TableKey { index: index[&k], parity: k.parity() }, c);
                    if is_dot {
                        p.dot_basis(a, b, &mut emit);
                    } else {
                        p.bracket_basis(a, b, &mut emit);
                    }
                    if !v.is_zero() {
                        map.insert((ia, ib), v);
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        let entries = |m: &BTreeMap<(u32, u32), LinComb<TableKey, F>>| {
            m.iter()
                .map(|(&(a, b), v)| EntryRecord {
                    a,
                    b,
                    value: v.iter().map(|(k, c)| (k.index, c.to_string())).collect(),
                })
                .collect()
        };
        let rec = TableRecord {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            field: F::label(),
            basis: self.names.clone(),
            parities: self.parities.clone(),
            unit: self.unit,
            dot: entries(&self.dot),
            bracket: entries(&self.bracket),
        };
        serde_json::to_string_pretty(&rec).expect("tables always serialize")
    }

    /// Loads a table, checking indices and that every product is parity
    /// homogeneous of the expected parity.
    pub fn from_json(s: &str) -> Result<Self> {
        let rec: TableRecord =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("structure table JSON: {e}")))?;
        if rec.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", rec.schema_version)));
        }
        if rec.field != F::label() {
            return Err(Error::Parse(format!("table is over {}, expected {}", rec.field, F::label())));
        }
        let n = rec.parities.len();
        if rec.basis.len() != n || n > u32::MAX as usize {
            return Err(Error::Parse("basis names and parities differ in length".into()));
        }
        if rec.parities.iter().any(|&p| p > 1) {
            return Err(Error::Parse("parities must be 0 or 1".into()));
        }
        if let Some(u) = rec.unit {
            if u as usize >= n || rec.parities[u as usize] != 0 {
                return Err(Error::Parse("unit must be an even basis element".into()));
            }
        }
        let parities = rec.parities.clone();
        let key = |i: u32| -> Result<TableKey> {
            parities
                .get(i as usize)
                .map(|&parity| TableKey { index: i, parity })
                .ok_or_else(|| Error::Parse(format!("basis index {i} out of range")))
        };
        let load = |entries: &[EntryRecord]| -> Result<BTreeMap<(u32, u32), LinComb<TableKey, F>>> {
            let mut out = BTreeMap::new();
            for e in entries {
                let (ka, kb) = (key(e.a)?, key(e.b)?);
                let mut v = LinComb::zero();
                for (i, c) in &e.value {
                    let k = key(*i)?;
                    if k.parity != (ka.parity + kb.parity) % 2 {
                        return Err(Error::Parse(format!("product e{} e{} has the wrong parity", e.a, e.b)));
                    }
                    v.add_term(k, F::parse(c)?);
                }
                if out.insert((e.a, e.b), v).is_some() {
                    return Err(Error::Parse(format!("duplicate entry for e{} e{}", e.a, e.b)));
                }
            }
            Ok(out)
        };
        Ok(StructureTable {
            name: rec.name,
            names: rec.basis,
            parities: rec.parities,
            unit: rec.unit,
            dot: load(&rec.dot)?,
            bracket: load(&rec.bracket)?,
        })
    }
}

impl<F: Field> PoissonAlgebra<F> for StructureTable<F> {
    type Key = TableKey;

    /// Panics if the table has no unit.
    fn unit(&self) -> TableKey {
        self.key(self.unit.expect("structure table has no unit"))
    }

    fn dot_basis(&self, a: &TableKey, b: &TableKey, emit: Emit<'_, TableKey, F>) {
        if let Some(v) = self.dot.get(&(a.index, b.index)) {
            for (k, c) in v {
                emit(*k, c.clone());
            }
        }
    }

    fn bracket_basis(&self, a: &TableKey, b: &TableKey, emit: Emit<'_, TableKey, F>) {
        self.bracket_basis_raw(a, b, emit)
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn finite_basis(&self) -> Option<Vec<TableKey>> {
        Some(self.keys())
    }
}

/// A two-step nilpotent Lie superalgebra: odd `e0, e1`, even `e2`, with
/// `[e0,e0] = [e1,e1] = e2` and `[e0,e1] = [e1,e0] = 0`.
pub fn toy_lie_table<F: Field>() -> StructureTable<F> {
    let k = |i: u32, p: u8| TableKey { index: i, parity: p };
    let mut bracket = BTreeMap::new();
    bracket.insert((0, 0), LinComb::basis(k(2, 0)));
    bracket.insert((1, 1), LinComb::basis(k(2, 0)));
    StructureTable {
        name: "toy".into(),
        names: vec!["e0".into(), "e1".into(), "e2".into()],
        parities: vec![1, 1, 0],
        unit: None,
        dot: BTreeMap::new(),
        bracket,
    }
}

/// `H_n` graded by polynomial degree (degree 0 omitted).
pub fn hamiltonian_basis<F: Field>(n: usize, d: u32) -> Result<GradedBasis<Monomial, F>> {
    let h = Hamiltonian::<F>::new(n)?;
    let mut comps: BTreeMap<MultiDegree, Vec<LinComb<Monomial, F>>> = BTreeMap::new();
    for m in h.finite_basis().expect("small") {
        let t = m.degree();
        if t >= 1 && t <= d {
            comps.entry(MultiDegree::new(vec![t])).or_default().push(LinComb::basis(m));
        }
    }
    let gens = (0..h.vars().len()).map(|i| (h.vars().name(i).to_string(), MultiDegree::new(vec![1]))).collect();
    Ok(GradedBasis::from_components(h.vars().clone(), gens, d, 0, GenerationMode::Multidegree, comps))
}

/// `Kan(H_n)` with `a` and `ā` both placed at the polynomial degree of `a`.
pub fn kantor_hamiltonian_basis<F: Field>(n: usize, d: u32) -> Result<GradedBasis<KanKey<Monomial>, F>> {
    let h = Hamiltonian::<F>::new(n)?;
    let mut comps: BTreeMap<MultiDegree, Vec<LinComb<KanKey<Monomial>, F>>> = BTreeMap::new();
    for m in h.finite_basis().expect("small") {
        let t = m.degree();
        if t >= 1 && t <= d {
            let c = comps.entry(MultiDegree::new(vec![t])).or_default();
            c.push(LinComb::basis(KanKey::Plain(m)));
            c.push(LinComb::basis(KanKey::Bar(m)));
        }
    }
    for c in comps.values_mut() {
        c.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    }
    let gens = (0..h.vars().len()).map(|i| (h.vars().name(i).to_string(), MultiDegree::new(vec![1]))).collect();
    Ok(GradedBasis::from_components(h.vars().clone(), gens, d, 0, GenerationMode::Multidegree, comps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type Q = Rational;

    fn h(n: usize) -> Hamiltonian<Q> {
        Hamiltonian::new(n).unwrap()
    }

    fn m(idx: &[usize]) -> LinComb<Monomial, Q> {
        LinComb::basis(Monomial::from_indices(idx))
    }

    #[test]
    fn hamiltonian_brackets() {
        let h2 = h(2);
        // x1 = 0, x2 = 1, y1 = 2, y2 = 3
        assert_eq!(h2.bracket(&m(&[0]), &m(&[2])), m(&[]));
        assert!(h2.bracket(&m(&[0]), &m(&[1])).is_zero());
        assert!(h2.bracket(&m(&[0]), &m(&[3])).is_zero());
        assert_eq!(h2.bracket(&m(&[2]), &m(&[0])), m(&[]));
        assert_eq!(h2.parse("x1^ y1^").unwrap(), m(&[0, 2]));
    }

    fn kan_basis(n: usize) -> Vec<KanKey<Monomial>> {
        Kantor::new(h(n)).finite_basis().unwrap()
    }

    #[test]
    fn kantor_cases() {
        let k = Kantor::new(h(1));
        let one_bar: LinComb<KanKey<Monomial>, Q> = LinComb::basis(KanKey::Bar(Monomial::ONE));
        assert!(k.mul(&one_bar, &one_bar).is_zero());
        // ā•b with |b| odd gives -(ab)‾
        let a = LinComb::basis(KanKey::Bar(Monomial::var(0)));
        let b = LinComb::basis(KanKey::Plain(Monomial::var(1)));
        assert_eq!(k.mul(&a, &b), LinComb::term(KanKey::Bar(Monomial::from_indices(&[0, 1])), -Q::one()));
    }

    #[test]
    fn kantor_supercommutative_on_h2() {
        let k = Kantor::new(h(2));
        let basis = kan_basis(2);
        for a in &basis {
            for b in &basis {
                let ab = k.mul(&LinComb::basis(*a), &LinComb::basis(*b));
                let ba = k.mul(&LinComb::basis(*b), &LinComb::basis(*a));
                assert_eq!(ab, ba.scaled(&sign((a.parity() * b.parity()) as u32)), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn jordan_double_rules() {
        let p = TrivialPoisson::<TableKey, Q>::from_lie_table(Arc::new(toy_lie_table()));
        let e = |i: u32, par: u8| TableKey { index: i, parity: par };
        let bar = |i, par| LinComb::<_, Q>::basis(KanKey::Bar(UnitKey::El(e(i, par))));
        let plain = |i, par| LinComb::<_, Q>::basis(KanKey::Plain(UnitKey::El(e(i, par))));
        let one = LinComb::<_, Q>::basis(KanKey::Plain(UnitKey::One));
        let one_bar = LinComb::<_, Q>::basis(KanKey::Bar(UnitKey::One));
        for rule in [JorRule::Kantor, JorRule::Literal] {
            let mul = |a: &_, b: &_| jordan_double_mul(&p, rule, a, b);
            assert_eq!(mul(&one, &bar(0, 1)), bar(0, 1));
            assert!(mul(&plain(0, 1), &bar(1, 1)).is_zero());
            assert_eq!(mul(&plain(0, 1), &one_bar), bar(0, 1));
            assert_eq!(mul(&one_bar, &plain(0, 1)), -bar(0, 1));
        }
        let kan = Kantor::new(p.clone());
        let all = kan.finite_basis().unwrap();
        for a in &all {
            for b in &all {
                let (x, y) = (LinComb::basis(a.clone()), LinComb::basis(b.clone()));
                assert_eq!(kan.mul(&x, &y), jordan_double_mul(&p, JorRule::Kantor, &x, &y));
            }
        }
        // odd e0: ē0•ē0 = -[e0,e0] under Kantor signs, +[e0,e0] literally
        let sq = jordan_double_mul(&p, JorRule::Literal, &bar(0, 1), &bar(0, 1));
        assert_eq!(sq, plain(2, 0));
        assert_eq!(jordan_double_mul(&p, JorRule::Kantor, &bar(0, 1), &bar(0, 1)), -plain(2, 0));
    }

    #[test]
    fn literal_rule_is_not_supercommutative_on_mixed_parities() {
        // e2 even, e0 odd, [e2, e0] = 0 in the toy algebra, so use Der instead
        let p = TrivialPoisson::<DerTerm, Q>::derivations();
        let even = LinComb::basis(KanKey::Bar(UnitKey::El(DerTerm::new(Monomial::var(0), 0))));
        let odd = LinComb::basis(KanKey::Bar(UnitKey::El(DerTerm::new(Monomial::ONE, 0))));
        let lit = |a: &_, b: &_| jordan_double_mul(&p, JorRule::Literal, a, b);
        let kan = |a: &_, b: &_| jordan_double_mul(&p, JorRule::Kantor, a, b);
        // x̄ odd (x even), ȳ even (y odd): supercommutativity says x̄•ȳ = ȳ•x̄
        assert_eq!(kan(&even, &odd), kan(&odd, &even));
        assert_ne!(lit(&even, &odd), lit(&odd, &even));
    }

    #[test]
    fn d_map_properties() {
        let k = Kantor::new(h(2));
        let basis = kan_basis(2);
        for a in &basis {
            let x = LinComb::basis(*a);
            assert!(d_map(&d_map(&x)).is_zero());
            for b in &basis {
                let y = LinComb::basis(*b);
                let lhs = d_map(&k.mul(&x, &y));
                let rhs = &k.mul(&d_map(&x), &y) + &k.mul(&x, &d_map(&y)).scaled(&sign(a.parity() as u32));
                assert_eq!(lhs, rhs, "{a:?} {b:?}");
            }
        }
        // D(ā) = a for even a
        let even = KanKey::Bar(Monomial::from_indices(&[0, 1]));
        assert_eq!(d_map::<_, Q>(&LinComb::basis(even)), LinComb::basis(KanKey::Plain(Monomial::from_indices(&[0, 1]))));
    }

    /// Embeds `Λ(x1,y1) ⊗ Λ(x1,y1)` into `H_2` via `x1 ↦ x1, y1 ↦ y1`,
    /// `x1' ↦ x2, y1' ↦ y2`: both Poisson structures agree.
    #[test]
    fn tensor_poisson_matches_h2() {
        let t = TensorPoisson { left: h(1), right: h(1) };
        let h2 = h(2);
        let embed = |(a, b): &(Monomial, Monomial)| -> (bool, Monomial) {
            let map = |m: Monomial, off: usize| {
                Monomial::from_indices(&m.indices().map(|i| if i == 0 { off } else { 2 + off }).collect::<Vec<_>>())
            };
            let (neg, r) = mono_mul(map(*a, 0), map(*b, 1)).unwrap();
            (neg, r)
        };
        let lift = |v: &LinComb<(Monomial, Monomial), Q>| -> LinComb<Monomial, Q> {
            v.iter()
                .map(|(k, c)| {
                    let (neg, m) = embed(k);
                    (m, if neg { -c.clone() } else { c.clone() })
                })
                .collect()
        };
        let basis = t.finite_basis().unwrap();
        for a in &basis {
            for b in &basis {
                let (x, y) = (LinComb::basis(*a), LinComb::basis(*b));
                assert_eq!(lift(&t.dot(&x, &y)), h2.dot(&lift(&x), &lift(&y)));
                assert_eq!(lift(&t.bracket(&x, &y)), h2.bracket(&lift(&x), &lift(&y)));
            }
        }
        let one = Monomial::ONE;
        let x = LinComb::basis((Monomial::var(0), one));
        let bx = LinComb::basis((Monomial::var(1), one));
        assert_eq!(t.bracket(&x, &bx), LinComb::basis((one, one)));
    }

    #[test]
    fn wreath_agrees_with_kantor_of_tensor() {
        let w = Wreath::new(h(1), Kantor::new(h(1))).unwrap();
        let k = Kantor::new(TensorPoisson { left: h(1), right: h(1) });
        let phi = |v: &LinComb<(Monomial, KanKey<Monomial>), Q>| -> LinComb<KanKey<(Monomial, Monomial)>, Q> {
            v.map_keys(|(x, f)| match f {
                KanKey::Plain(a) => KanKey::Plain((*x, *a)),
                KanKey::Bar(a) => KanKey::Bar((*x, *a)),
            })
        };
        let basis = w.finite_basis().unwrap();
        for a in &basis {
            for b in &basis {
                let (x, y) = (LinComb::basis(*a), LinComb::basis(*b));
                assert_eq!(phi(&wreath_mul(&w, &x, &y)), k.mul(&phi(&x), &phi(&y)), "{a:?} {b:?}");
            }
        }
        // units recover J1's product
        let one = Monomial::ONE;
        let f = KanKey::Bar(Monomial::var(0));
        let g = KanKey::Plain(Monomial::var(1));
        let lhs = wreath_mul(&w, &LinComb::basis((one, f)), &LinComb::basis((one, g)));
        let j1 = Kantor::new(h(1)).mul(&LinComb::basis(f), &LinComb::basis(g));
        assert_eq!(lhs, j1.map_keys(|k| (one, *k)));
    }

    #[test]
    fn wreath_needs_d() {
        let inner = Wreath::new(h(1), Kantor::new(h(1))).unwrap();
        assert!(Wreath::new(h(1), inner).is_err());
    }

    #[test]
    fn table_round_trip() {
        let h1 = h(1);
        let vars = h1.vars().clone();
        let t = StructureTable::from_poisson(&h1, |m| text::format_lincomb(&LinComb::<_, Q>::basis(*m), &vars)).unwrap();
        assert_eq!(t.names.len(), 4);
        let s = t.to_json();
        let back = StructureTable::<Q>::from_json(&s).unwrap();
        assert_eq!(back, t);
        assert!(StructureTable::<Q>::from_json("{").is_err());
        let broken = s.replace("\"parities\": [\n    0,", "\"parities\": [\n    1,");
        assert!(StructureTable::<Q>::from_json(&broken).is_err());
    }

    #[test]
    fn double_text_round_trip() {
        let vars = VarTable::standard(4).unwrap();
        let s = "2*1 + 1 * x0^ d1 + -1*1b + b(1 * d0 - 3 * x1^ x2^ d3)";
        let v = KanKey::<UnitKey<DerTerm>>::parse_element::<Q>(s, &vars).unwrap();
        assert_eq!(v.len(), 5);
        let out = KanKey::<UnitKey<DerTerm>>::format_element(&v, &vars);
        assert_eq!(out, "2*1 + 1 * x0^ d1 + -1*1b + b(1 * d0 - 3 * x1^ x2^ d3)");
        assert_eq!(KanKey::<UnitKey<DerTerm>>::parse_element::<Q>(&out, &vars).unwrap(), v);
        assert!(KanKey::<UnitKey<DerTerm>>::parse_element::<Q>("b(1 * d0", &vars).is_err());
        let zero = LinComb::<KanKey<UnitKey<DerTerm>>, Q>::zero();
        assert_eq!(KanKey::<UnitKey<DerTerm>>::format_element(&zero, &vars), "0");
    }

    proptest! {
        #[test]
        fn hamiltonian_leibniz(a in 0u64..16, b in 0u64..16, c in 0u64..16) {
            let h2 = h(2);
            let (a, b, c) = (Monomial(a), Monomial(b), Monomial(c));
            let (x, y, z) = (LinComb::<_, Q>::basis(a), LinComb::basis(b), LinComb::basis(c));
            let lhs = h2.bracket(&h2.dot(&x, &y), &z);
            let rhs = &h2.dot(&x, &h2.bracket(&y, &z))
                + &h2.dot(&h2.bracket(&x, &z), &y).scaled(&sign(b.parity() as u32 * c.parity() as u32));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
