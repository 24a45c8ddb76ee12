//! Normal-ordered operators on Λ(N) and superderivations.
//!
//! An operator term `x_S ∂_T` means: apply the partials of `T` (largest index
//! first, i.e. `∂_T = ∂_{t1} ∘ ... ∘ ∂_{tk}` with `t1 < ... < tk`), then
//! multiply on the left by `x_S`. Every operator on Λ(N) has a unique
//! expansion in these terms, so equality of term maps is equality of maps.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::generate::{GradedBasis, MultiDegree};
use crate::grassmann::{mono_mul, mono_partial, same_table, GrassmannElement, Monomial, VarTable};
use crate::lincomb::{sign, Basis, LinComb};
use crate::scalar::Field;
use crate::text::{self, TermText};

/// Normal-ordered term `x_S ∂_T`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpTerm {
    pub x: Monomial,
    pub d: Monomial,
}

impl OpTerm {
    pub fn new(x: Monomial, d: Monomial) -> Self {
        OpTerm { x, d }
    }

    pub fn degree(&self) -> u32 {
        self.x.degree() + self.d.degree()
    }
}

impl fmt::Debug for OpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}d{:?}", self.x, self.d.indices().collect::<Vec<_>>())
    }
}

impl Ord for OpTerm {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.x.cmp(&o.x))
            .then_with(|| self.d.cmp(&o.d))
    }
}

impl PartialOrd for OpTerm {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Basis for OpTerm {
    fn parity(&self) -> u8 {
        (self.degree() % 2) as u8
    }
    fn max_index(&self) -> Option<usize> {
        self.x.max_var().max(self.d.max_var())
    }
}

/// Superderivation term `x_S ∂_j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct DerTerm {
    pub x: Monomial,
    pub var: u8,
}

impl DerTerm {
    pub fn new(x: Monomial, var: usize) -> Self {
        assert!(var < crate::grassmann::MAX_VARS);
        DerTerm { x, var: var as u8 }
    }

    pub fn as_op(&self) -> OpTerm {
        OpTerm::new(self.x, Monomial::var(self.var as usize))
    }
}

impl fmt::Debug for DerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}d{}", self.x, self.var)
    }
}

impl Ord for DerTerm {
    /// Same order as the corresponding [`OpTerm`].
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.x
            .degree()
            .cmp(&o.x.degree())
            .then_with(|| self.x.cmp(&o.x))
            .then_with(|| self.var.cmp(&o.var))
    }
}

impl PartialOrd for DerTerm {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Basis for DerTerm {
    fn parity(&self) -> u8 {
        ((self.x.degree() + 1) % 2) as u8
    }
    fn max_index(&self) -> Option<usize> {
        Some(self.x.max_var().map_or(self.var as usize, |m| m.max(self.var as usize)))
    }
}

impl TermText for OpTerm {
    fn write_factors(&self, vars: &VarTable, out: &mut Vec<String>) {
        text::write_monomial(self.x, vars, out);
        out.extend(self.d.indices().map(|i| vars.deriv_name(i).to_string()));
    }

    fn parse_factors(tokens: &[&str], vars: &VarTable) -> Result<Option<(bool, Self)>> {
        let (xs, ds) = text::split_factors(tokens);
        if ds.iter().any(|t| t.ends_with('^')) {
            return Err(Error::Parse("variables must precede derivatives".into()));
        }
        let Some((sx, x)) = text::parse_monomial(&xs, vars)? else {
            return Ok(None);
        };
        let Some((sd, d)) = text::parse_derivs(&ds, vars)? else {
            return Ok(None);
        };
        Ok(Some((sx ^ sd, OpTerm::new(x, d))))
    }
}

impl TermText for DerTerm {
    fn write_factors(&self, vars: &VarTable, out: &mut Vec<String>) {
        self.as_op().write_factors(vars, out);
    }

    fn parse_factors(tokens: &[&str], vars: &VarTable) -> Result<Option<(bool, Self)>> {
        match OpTerm::parse_factors(tokens, vars)? {
            None => Ok(None),
            Some((s, t)) if t.d.degree() == 1 => {
                Ok(Some((s, DerTerm::new(t.x, t.d.max_var().unwrap()))))
            }
            Some(_) => Err(Error::Parse("a derivation term needs exactly one derivative".into())),
        }
    }
}

/// `∂_T ∘ x_U` rewritten as signed normal-ordered pairs `(x_{U'}, ∂_{T'})`.
fn move_partials_past(t: Monomial, u: Monomial) -> Vec<(bool, Monomial, Monomial)> {
    let mut states = vec![(false, u, Monomial::ONE)];
    let ts: Vec<usize> = t.indices().collect();
    for &ti in ts.iter().rev() {
        let mut next = Vec::with_capacity(states.len() * 2);
        for (neg, u, tt) in states {
            // ∂_t x_u = ∂_t(x_u) + (-1)^{|u|} x_u ∂_t
            if let Some((s, rest)) = mono_partial(ti, u) {
                next.push((neg ^ s, rest, tt));
            }
            next.push((neg ^ (u.degree() % 2 == 1), u, Monomial(tt.0 | 1 << ti)));
        }
        states = next;
    }
    states
}

/// Composition of normal-ordered operators, `(a ∘ b)(f) = a(b(f))`.
pub fn compose_terms<F: Field>(a: &LinComb<OpTerm, F>, b: &LinComb<OpTerm, F>) -> LinComb<OpTerm, F> {
    a.bilinear(b, |l, r, emit| {
        for (neg, u, tt) in move_partials_past(l.d, r.x) {
            let Some((s1, x)) = mono_mul(l.x, u) else { continue };
            let Some((s2, d)) = mono_mul(tt, r.d) else { continue };
            emit(OpTerm::new(x, d), sign((neg ^ s1 ^ s2) as u32));
        }
    })
}

/// Supercommutator `[a,b] = ab - (-1)^{|a||b|} ba`, extended bilinearly.
pub fn supercommutator_terms<F: Field>(
    a: &LinComb<OpTerm, F>,
    b: &LinComb<OpTerm, F>,
) -> LinComb<OpTerm, F> {
    let mut out = LinComb::zero();
    for pa in a.split_parity() {
        for pb in b.split_parity() {
            let (Some(p), Some(q)) = (pa.parity(), pb.parity()) else { continue };
            out.add_scaled(&compose_terms(&pa, &pb), &F::one());
            out.add_scaled(&compose_terms(&pb, &pa), &-sign::<F>((p * q) as u32));
        }
    }
    out
}

/// Action of a single normal-ordered term on a monomial.
fn apply_term(t: &OpTerm, m: Monomial) -> Option<(bool, Monomial)> {
    let mut neg = false;
    let mut cur = m;
    let ds: Vec<usize> = t.d.indices().collect();
    for &i in ds.iter().rev() {
        let (s, rest) = mono_partial(i, cur)?;
        neg ^= s;
        cur = rest;
    }
    let (s, out) = mono_mul(t.x, cur)?;
    Some((neg ^ s, out))
}

pub fn apply_terms<F: Field>(e: &LinComb<OpTerm, F>, f: &LinComb<Monomial, F>) -> LinComb<Monomial, F> {
    e.bilinear(f, |t, m, emit| {
        if let Some((neg, r)) = apply_term(t, *m) {
            emit(r, sign(neg as u32));
        }
    })
}

/// Superderivation `Σ f_j ∂_j` applied to a Grassmann element: `Σ f_j ∂_j(g)`.
pub fn apply_derivation_terms<F: Field>(
    e: &LinComb<DerTerm, F>,
    g: &LinComb<Monomial, F>,
) -> LinComb<Monomial, F> {
    e.bilinear(g, |t, m, emit| {
        if let Some((s1, rest)) = mono_partial(t.var as usize, *m) {
            if let Some((s2, r)) = mono_mul(t.x, rest) {
                emit(r, sign((s1 ^ s2) as u32));
            }
        }
    })
}

/// Bracket of superderivations computed on generator images:
/// `[E,F](x_j) = E(F(x_j)) - (-1)^{|E||F|} F(E(x_j))`.
pub fn derivation_bracket_terms<F: Field>(
    a: &LinComb<DerTerm, F>,
    b: &LinComb<DerTerm, F>,
) -> LinComb<DerTerm, F> {
    let mut out = LinComb::zero();
    let mut half = |e: &LinComb<DerTerm, F>, f: &LinComb<DerTerm, F>, swap: bool| {
        for (te, ce) in e {
            let pe = te.parity();
            for (tf, cf) in f {
                // te applied to the image coefficient of tf
                let Some((s1, rest)) = mono_partial(te.var as usize, tf.x) else { continue };
                let Some((s2, x)) = mono_mul(te.x, rest) else { continue };
                let mut neg = s1 ^ s2;
                if swap {
                    neg ^= !(pe == 1 && tf.parity() == 1);
                }
                let c = ce.clone() * cf.clone();
                out.add_term(DerTerm::new(x, tf.var as usize), if neg { -c } else { c });
            }
        }
    };
    half(a, b, false);
    half(b, a, true);
    out
}

/// A normal-ordered endomorphism of Λ(N).
#[derive(Clone, PartialEq, Eq)]
pub struct Operator<F: Field> {
    vars: Arc<VarTable>,
    terms: LinComb<OpTerm, F>,
}

impl<F: Field> fmt::Debug for Operator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> fmt::Display for Operator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::format_lincomb(&self.terms, &self.vars))
    }
}

fn check_within<K: Basis, F: Field>(vars: &VarTable, terms: &LinComb<K, F>) -> Result<()> {
    match terms.max_index() {
        Some(m) if m >= vars.len() => Err(Error::Overflow { index: m, n: vars.len() }),
        _ => Ok(()),
    }
}

impl<F: Field> Operator<F> {
    pub fn new(vars: Arc<VarTable>, terms: LinComb<OpTerm, F>) -> Result<Self> {
        check_within(&vars, &terms)?;
        Ok(Operator { vars, terms })
    }

    pub fn zero(vars: Arc<VarTable>) -> Self {
        Operator { vars, terms: LinComb::zero() }
    }

    pub fn identity(vars: Arc<VarTable>) -> Self {
        Operator { vars, terms: LinComb::basis(OpTerm::new(Monomial::ONE, Monomial::ONE)) }
    }

    /// Left multiplication by `x_i`.
    pub fn mul_var(vars: Arc<VarTable>, i: usize) -> Result<Self> {
        Self::new(vars, LinComb::basis(OpTerm::new(Monomial::var(i), Monomial::ONE)))
    }

    /// Left multiplication by a Grassmann element.
    pub fn left_mul(g: &GrassmannElement<F>) -> Self {
        Operator {
            vars: g.vars().clone(),
            terms: g.terms().map_keys(|m| OpTerm::new(*m, Monomial::ONE)),
        }
    }

    /// The partial superderivative ∂_i.
    pub fn partial(vars: Arc<VarTable>, i: usize) -> Result<Self> {
        Self::new(vars, LinComb::basis(OpTerm::new(Monomial::ONE, Monomial::var(i))))
    }

    pub fn parse(vars: Arc<VarTable>, s: &str) -> Result<Self> {
        let terms = text::parse_lincomb(s, &vars)?;
        Self::new(vars, terms)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> &LinComb<OpTerm, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn parity(&self) -> Option<u8> {
        self.terms.parity()
    }

    pub fn scaled(&self, c: &F) -> Self {
        Operator { vars: self.vars.clone(), terms: self.terms.scaled(c) }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        same_table(&self.vars, &other.vars)?;
        Ok(Operator { vars: self.vars.clone(), terms: compose_terms(&self.terms, &other.terms) })
    }

    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        same_table(&self.vars, &other.vars)?;
        Ok(Operator {
            vars: self.vars.clone(),
            terms: supercommutator_terms(&self.terms, &other.terms),
        })
    }

    pub fn apply(&self, f: &GrassmannElement<F>) -> Result<GrassmannElement<F>> {
        same_table(&self.vars, f.vars())?;
        GrassmannElement::new(self.vars.clone(), apply_terms(&self.terms, f.terms()))
    }

    /// Reads the operator as a superderivation; fails if some term carries
    /// zero or several partials.
    pub fn to_derivation(&self) -> Result<SuperDerivation<F>> {
        let terms = self.terms.try_map_terms(|t| {
            if t.d.degree() == 1 {
                Ok(Some((DerTerm::new(t.x, t.d.max_var().unwrap()), F::one())))
            } else {
                Err(Error::InvalidArgument(format!(
                    "operator term {t:?} is not of the form f ∂_j"
                )))
            }
        })?;
        Ok(SuperDerivation { vars: self.vars.clone(), terms })
    }

    fn checked_add(&self, o: &Self) -> Result<Self> {
        same_table(&self.vars, &o.vars)?;
        Ok(Operator { vars: self.vars.clone(), terms: &self.terms + &o.terms })
    }
}

impl<F: Field> Add for &Operator<F> {
    type Output = Operator<F>;
    /// Panics if the operands use different variable tables.
    fn add(self, o: Self) -> Operator<F> {
        self.checked_add(o).expect("adding operators on different Grassmann algebras")
    }
}

impl<F: Field> Sub for &Operator<F> {
    type Output = Operator<F>;
    fn sub(self, o: Self) -> Operator<F> {
        self.checked_add(&-o).expect("subtracting operators on different Grassmann algebras")
    }
}

impl<F: Field> Neg for &Operator<F> {
    type Output = Operator<F>;
    fn neg(self) -> Operator<F> {
        Operator { vars: self.vars.clone(), terms: -&self.terms }
    }
}

/// Superderivation `Σ_j f_j ∂_j`, determined by its generator images `f_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperDerivation<F: Field> {
    vars: Arc<VarTable>,
    terms: LinComb<DerTerm, F>,
}

impl<F: Field> fmt::Debug for SuperDerivation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> fmt::Display for SuperDerivation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::format_lincomb(&self.terms, &self.vars))
    }
}

impl<F: Field> SuperDerivation<F> {
    pub fn new(vars: Arc<VarTable>, terms: LinComb<DerTerm, F>) -> Result<Self> {
        check_within(&vars, &terms)?;
        Ok(SuperDerivation { vars, terms })
    }

    pub fn zero(vars: Arc<VarTable>) -> Self {
        SuperDerivation { vars, terms: LinComb::zero() }
    }

    pub fn partial(vars: Arc<VarTable>, i: usize) -> Result<Self> {
        Self::new(vars, LinComb::basis(DerTerm::new(Monomial::ONE, i)))
    }

    /// Builds a derivation from images of the generators (`x_j ↦ images[j]`).
    pub fn from_images(vars: Arc<VarTable>, images: &[(usize, GrassmannElement<F>)]) -> Result<Self> {
        let mut terms = LinComb::zero();
        for (j, f) in images {
            same_table(&vars, f.vars())?;
            if *j >= vars.len() {
                return Err(Error::Overflow { index: *j, n: vars.len() });
            }
            for (m, c) in f.terms() {
                terms.add_term(DerTerm::new(*m, *j), c.clone());
            }
        }
        Ok(SuperDerivation { vars, terms })
    }

    pub fn parse(vars: Arc<VarTable>, s: &str) -> Result<Self> {
        let terms = text::parse_lincomb(s, &vars)?;
        Self::new(vars, terms)
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> &LinComb<DerTerm, F> {
        &self.terms
    }

    pub fn into_terms(self) -> LinComb<DerTerm, F> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn parity(&self) -> Option<u8> {
        self.terms.parity()
    }

    /// The image `D(x_j)`.
    pub fn image(&self, j: usize) -> GrassmannElement<F> {
        let terms = self
            .terms
            .iter()
            .filter(|(t, _)| t.var as usize == j)
            .map(|(t, c)| (t.x, c.clone()))
            .collect();
        GrassmannElement::new(self.vars.clone(), terms).expect("images stay inside Λ(N)")
    }

    pub fn scaled(&self, c: &F) -> Self {
        SuperDerivation { vars: self.vars.clone(), terms: self.terms.scaled(c) }
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        same_table(&self.vars, &other.vars)?;
        Ok(SuperDerivation {
            vars: self.vars.clone(),
            terms: derivation_bracket_terms(&self.terms, &other.terms),
        })
    }

    pub fn apply(&self, g: &GrassmannElement<F>) -> Result<GrassmannElement<F>> {
        same_table(&self.vars, g.vars())?;
        GrassmannElement::new(self.vars.clone(), apply_derivation_terms(&self.terms, g.terms()))
    }

    pub fn to_operator(&self) -> Operator<F> {
        Operator { vars: self.vars.clone(), terms: self.terms.map_keys(DerTerm::as_op) }
    }

    /// Left multiplication by a Grassmann element, `g · D`.
    pub fn left_mul(&self, g: &GrassmannElement<F>) -> Result<Self> {
        same_table(&self.vars, g.vars())?;
        let terms = g.terms().bilinear(&self.terms, |m, t, emit| {
            if let Some((neg, x)) = mono_mul(*m, t.x) {
                emit(DerTerm::new(x, t.var as usize), sign(neg as u32));
            }
        });
        Ok(SuperDerivation { vars: self.vars.clone(), terms })
    }

    fn checked_add(&self, o: &Self) -> Result<Self> {
        same_table(&self.vars, &o.vars)?;
        Ok(SuperDerivation { vars: self.vars.clone(), terms: &self.terms + &o.terms })
    }
}

impl<F: Field> Add for &SuperDerivation<F> {
    type Output = SuperDerivation<F>;
    /// Panics if the operands use different variable tables.
    fn add(self, o: Self) -> SuperDerivation<F> {
        self.checked_add(o).expect("adding derivations of different Grassmann algebras")
    }
}

impl<F: Field> Sub for &SuperDerivation<F> {
    type Output = SuperDerivation<F>;
    fn sub(self, o: Self) -> SuperDerivation<F> {
        self.checked_add(&-o).expect("subtracting derivations of different Grassmann algebras")
    }
}

impl<F: Field> Neg for &SuperDerivation<F> {
    type Output = SuperDerivation<F>;
    fn neg(self) -> SuperDerivation<F> {
        SuperDerivation { vars: self.vars.clone(), terms: -&self.terms }
    }
}

/// Result of probing ad-nilpotency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilIndex {
    /// Smallest `k` with `(ad a)^k` vanishing on every probed basis element.
    Index(usize),
    /// Some iterate left the reliable window (or exceeded the power bound)
    /// before vanishing.
    Inconclusive,
}

/// Smallest `k <= max_power` such that `(ad a)^k b = 0` for every basis
/// element `b` of a reliable component. Vanishing only counts as evidence
/// while every iterate stays inside the reliable window of `basis`.
pub fn ad_nil_index<K, F, B>(
    a: &LinComb<K, F>,
    a_degree: &MultiDegree,
    basis: &GradedBasis<K, F>,
    bracket: B,
    max_power: usize,
) -> NilIndex
where
    K: Basis,
    F: Field,
    B: Fn(&LinComb<K, F>, &LinComb<K, F>) -> LinComb<K, F>,
{
    let mut worst = 1usize;
    for (deg, comp) in basis.components() {
        if !comp.reliable {
            continue;
        }
        for b in &comp.elements {
            let mut cur = b.clone();
            let mut cur_deg = deg.clone();
            let mut k = 0;
            while !cur.is_zero() {
                if k == max_power {
                    return NilIndex::Inconclusive;
                }
                cur = bracket(a, &cur);
                cur_deg = cur_deg.add(a_degree);
                k += 1;
                if !basis.is_reliable_degree(cur_deg.coords()) {
                    return NilIndex::Inconclusive;
                }
            }
            worst = worst.max(k);
        }
    }
    NilIndex::Index(worst)
}
