//! Exact checks of graded identities on samples of homogeneous elements.
//!
//! A check evaluates the defect (an exact element) of an identity on every
//! sampled tuple; the identity holds on the sample iff every defect is zero.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::doubles::{JordanAlgebra, KanKey, PoissonAlgebra, UnitKey};
use crate::echelon::Echelon;
use crate::error::{Error, Result};
use crate::generate::{GradedBasis, SCHEMA_VERSION};
use crate::grassmann::VarTable;
use crate::lincomb::{sign, Basis, LinComb};
use crate::scalar::Field;
use crate::text::ElementText;

/// Exhaustive sampling is used up to this many tuples.
pub const EXHAUSTIVE_LIMIT: usize = 10_000;
/// Tuples drawn when sampling at random by default.
pub const DEFAULT_RANDOM_COUNT: usize = 1000;
/// Witnesses kept in a report; the total count is always recorded.
pub const MAX_WITNESSES: usize = 16;

type Product<'a, K, F> = Box<dyn Fn(&LinComb<K, F>, &LinComb<K, F>) -> LinComb<K, F> + Send + Sync + 'a>;
type Show<'a, K, F> = Box<dyn Fn(&LinComb<K, F>) -> String + Send + Sync + 'a>;

/// A bilinear product together with a printer for witnesses.
pub struct ProductHandle<'a, K: Basis, F: Field> {
    description: String,
    mul: Product<'a, K, F>,
    show: Show<'a, K, F>,
}

impl<'a, K: Basis, F: Field> ProductHandle<'a, K, F> {
    pub fn new(
        description: impl Into<String>,
        mul: impl Fn(&LinComb<K, F>, &LinComb<K, F>) -> LinComb<K, F> + Send + Sync + 'a,
    ) -> Self {
        ProductHandle { description: description.into(), mul: Box::new(mul), show: Box::new(|v| format!("{v:?}")) }
    }

    pub fn from_jordan<J: JordanAlgebra<F, Key = K>>(j: &'a J) -> Self {
        Self::new(j.describe(), move |a, b| j.mul(a, b))
    }

    /// Print witnesses in the text format of `vars`.
    pub fn with_text(mut self, vars: &'a VarTable) -> Self
    where
        K: ElementText,
    {
        self.show = Box::new(move |v| K::format_element(v, vars));
        self
    }

    pub fn with_show(mut self, show: impl Fn(&LinComb<K, F>) -> String + Send + Sync + 'a) -> Self {
        self.show = Box::new(show);
        self
    }

    pub fn describe(&self) -> &str {
        &self.description
    }

    pub fn mul(&self, a: &LinComb<K, F>, b: &LinComb<K, F>) -> LinComb<K, F> {
        (self.mul)(a, b)
    }
}

/// The two products of a Poisson superalgebra.
pub struct PoissonHandle<'a, K: Basis, F: Field> {
    pub dot: ProductHandle<'a, K, F>,
    pub bracket: ProductHandle<'a, K, F>,
}

impl<'a, K: Basis, F: Field> PoissonHandle<'a, K, F> {
    pub fn from_poisson<P: PoissonAlgebra<F, Key = K>>(p: &'a P) -> Self {
        PoissonHandle {
            dot: ProductHandle::new(p.describe(), move |a, b| p.dot(a, b)),
            bracket: ProductHandle::new(p.describe(), move |a, b| p.bracket(a, b)),
        }
    }

    pub fn with_show(mut self, show: impl Fn(&LinComb<K, F>) -> String + Clone + Send + Sync + 'a) -> Self {
        self.dot = self.dot.with_show(show.clone());
        self.bracket = self.bracket.with_show(show);
        self
    }
}

/// Requested sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Exhaustive when the tuple count is at most [`EXHAUSTIVE_LIMIT`],
    /// otherwise [`DEFAULT_RANDOM_COUNT`] seeded random tuples.
    Auto { seed: u64 },
    Exhaustive,
    Random { count: usize, seed: u64 },
}

/// Sampling actually performed, as recorded in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleStrategy {
    /// All tuples over a pool of `pool` elements.
    Exhaustive { pool: usize },
    /// Random homogeneous combinations of up to three pool elements.
    Random { count: usize, seed: u64, pool: usize },
}

impl Sampling {
    fn resolve(self, pool: usize, arity: usize) -> SampleStrategy {
        match self {
            Sampling::Exhaustive => SampleStrategy::Exhaustive { pool },
            Sampling::Random { count, seed } => SampleStrategy::Random { count, seed, pool },
            Sampling::Auto { seed } => {
                let tuples = (0..arity).try_fold(1usize, |acc, _| acc.checked_mul(pool));
                match tuples {
                    Some(t) if t <= EXHAUSTIVE_LIMIT => SampleStrategy::Exhaustive { pool },
                    _ => SampleStrategy::Random { count: DEFAULT_RANDOM_COUNT, seed, pool },
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnSample,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub args: Vec<String>,
    pub defect: String,
    /// Whether recomputing the terms and summing them in reverse order also
    /// gives a nonzero defect.
    pub confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub schema_version: u32,
    pub identity: String,
    pub algebra: String,
    pub field: String,
    pub strategy: SampleStrategy,
    pub tested: usize,
    pub violation_count: usize,
    pub violations: Vec<Witness>,
    pub verdict: Verdict,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnSample
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn summary(&self) -> String {
        let how = match &self.strategy {
            SampleStrategy::Exhaustive { pool } => format!("exhaustive over {pool} elements"),
            SampleStrategy::Random { count, seed, pool } => format!("{count} random tuples from {pool} elements, seed {seed}"),
        };
        let verdict = match self.verdict {
            Verdict::HoldsOnSample => "holds on sample".to_string(),
            Verdict::Counterexample => format!("{} counterexamples", self.violation_count),
        };
        format!("{} on {} [{}; {} tested]: {}", self.identity, self.algebra, how, self.tested, verdict)
    }
}

fn require_characteristic<F: Field>(excluded: &[u64], identity: &str) -> Result<()> {
    if excluded.contains(&F::CHARACTERISTIC) {
        return Err(Error::Config(format!("{identity} is not checked in characteristic {}", F::CHARACTERISTIC)));
    }
    Ok(())
}

fn require_homogeneous<K: Basis, F: Field>(pool: &[LinComb<K, F>]) -> Result<()> {
    match pool.iter().position(|v| !v.is_zero() && !v.is_homogeneous()) {
        Some(i) => Err(Error::InvalidArgument(format!("sample element {i} is not parity homogeneous"))),
        None => Ok(()),
    }
}

fn parity_of<K: Basis, F: Field>(v: &LinComb<K, F>) -> u32 {
    v.parity().unwrap_or(0) as u32
}

fn random_coeff<F: Field>(rng: &mut ChaCha8Rng) -> F {
    let c = rng.gen_range(1..=3i64);
    F::from_i64(if rng.gen_bool(0.5) { c } else { -c })
}

/// A random combination of one to three pool elements of one parity.
fn random_homogeneous<K: Basis, F: Field>(by_parity: &[Vec<&LinComb<K, F>>], rng: &mut ChaCha8Rng) -> LinComb<K, F> {
    let groups: Vec<&Vec<&LinComb<K, F>>> = by_parity.iter().filter(|g| !g.is_empty()).collect();
    let group = groups[rng.gen_range(0..groups.len())];
    let mut out = LinComb::zero();
    for _ in 0..rng.gen_range(1..=group.len().min(3)) {
        let v = group.choose(rng).expect("group is nonempty");
        out.add_scaled(v, &random_coeff(rng));
    }
    out
}

fn tuples<K: Basis, F: Field>(pool: &[LinComb<K, F>], arity: usize, strategy: &SampleStrategy) -> Vec<Vec<LinComb<K, F>>> {
    match *strategy {
        SampleStrategy::Exhaustive { .. } => {
            let mut out = vec![Vec::new()];
            for _ in 0..arity {
                out = out
                    .into_iter()
                    .flat_map(|t| {
                        pool.iter().map(move |v| {
                            let mut t = t.clone();
                            t.push(v.clone());
                            t
                        })
                    })
                    .collect();
            }
            out
        }
        SampleStrategy::Random { count, seed, .. } => {
            let mut by_parity = vec![Vec::new(), Vec::new()];
            for v in pool.iter().filter(|v| !v.is_zero()) {
                by_parity[parity_of(v) as usize].push(v);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| (0..arity).map(|_| random_homogeneous(&by_parity, &mut rng)).collect()).collect()
        }
    }
}

fn sum_terms<K: Basis, F: Field>(terms: impl IntoIterator<Item = LinComb<K, F>>) -> LinComb<K, F> {
    terms.into_iter().fold(LinComb::zero(), |acc, t| acc + t)
}

/// Evaluates `terms` on every tuple; the defect is their sum.
fn evaluate<K: Basis, F: Field>(
    identity: &str,
    algebra: &str,
    strategy: SampleStrategy,
    tuples: Vec<Vec<LinComb<K, F>>>,
    show: &(dyn Fn(&LinComb<K, F>) -> String + Sync),
    terms: impl Fn(&[LinComb<K, F>]) -> Vec<LinComb<K, F>> + Sync,
) -> IdentityReport {
    let defects: Vec<Option<LinComb<K, F>>> = tuples
        .par_iter()
        .map(|t| {
            let d = sum_terms(terms(t));
            (!d.is_zero()).then_some(d)
        })
        .collect();
    let bad: Vec<(usize, LinComb<K, F>)> =
        defects.into_iter().enumerate().filter_map(|(i, d)| d.map(|d| (i, d))).collect();
    let violations = bad
        .iter()
        .take(MAX_WITNESSES)
        .map(|(i, d)| {
            let t = &tuples[*i];
            let again = sum_terms(terms(t).into_iter().rev());
            Witness { args: t.iter().map(show).collect(), defect: show(d), confirmed: !again.is_zero() }
        })
        .collect();
    IdentityReport {
        schema_version: SCHEMA_VERSION,
        identity: identity.into(),
        algebra: algebra.into(),
        field: F::label(),
        strategy,
        tested: tuples.len(),
        violation_count: bad.len(),
        verdict: if bad.is_empty() { Verdict::HoldsOnSample } else { Verdict::Counterexample },
        violations,
    }
}

fn check<K: Basis, F: Field>(
    identity: &str,
    h: &ProductHandle<'_, K, F>,
    pool: &[LinComb<K, F>],
    sampling: Sampling,
    arity: usize,
    terms: impl Fn(&[LinComb<K, F>]) -> Vec<LinComb<K, F>> + Sync,
) -> Result<IdentityReport> {
    require_homogeneous(pool)?;
    if pool.iter().all(LinComb::is_zero) {
        return Err(Error::InvalidArgument("sample pool is empty".into()));
    }
    let strategy = sampling.resolve(pool.len(), arity);
    let ts = tuples(pool, arity, &strategy);
    Ok(evaluate(identity, &h.description, strategy, ts, &*h.show, terms))
}

/// `[a,b] + (-1)^{|a||b|} [b,a] = 0`.
pub fn check_super_anticomm<K: Basis, F: Field>(
    h: &ProductHandle<'_, K, F>,
    pool: &[LinComb<K, F>],
    sampling: Sampling,
) -> Result<IdentityReport> {
    require_characteristic::<F>(&[2, 3], "super-anticommutativity")?;
    check("super-anticommutativity", h, pool, sampling, 2, |t| {
        let (a, b) = (&t[0], &t[1]);
        let s: F = sign(parity_of(a) * parity_of(b));
        vec![h.mul(a, b), h.mul(b, a).scaled(&s)]
    })
}

/// `ab - (-1)^{|a||b|} ba = 0`.
pub fn check_super_comm<K: Basis, F: Field>(
    h: &ProductHandle<'_, K, F>,
    pool: &[LinComb<K, F>],
    sampling: Sampling,
) -> Result<IdentityReport> {
    require_characteristic::<F>(&[2], "supercommutativity")?;
    check("supercommutativity", h, pool, sampling, 2, |t| {
        let (a, b) = (&t[0], &t[1]);
        let s: F = sign(parity_of(a) * parity_of(b) + 1);
        vec![h.mul(a, b), h.mul(b, a).scaled(&s)]
    })
}

/// `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]`.
pub fn check_super_jacobi<K: Basis, F: Field>(
    h: &ProductHandle<'_, K, F>,
    pool: &[LinComb<K, F>],
    sampling: Sampling,
) -> Result<IdentityReport> {
    require_characteristic::<F>(&[2, 3], "super Jacobi")?;
    check("super Jacobi", h, pool, sampling, 3, |t| {
        let (x, y, z) = (&t[0], &t[1], &t[2]);
        let s: F = sign(parity_of(x) * parity_of(y) + 1);
        vec![h.mul(x, &h.mul(y, z)), -h.mul(&h.mul(x, y), z), h.mul(y, &h.mul(x, z)).scaled(&s)]
    })
}

/// The linearized Jordan superidentity
/// `(ab)(cd) + (-1)^{|b||c|}(ac)(bd) + (-1)^{(|b|+|c|)|d|}(ad)(bc)
///  = ((ab)c)d + (-1)^{|b|(|c|+|d|)+|c||d|}((ad)c)b + (-1)^{|a|(|b|+|c|+|d|)+|c||d|}((bd)c)a`.
pub fn check_jordan_super<K: Basis, F: Field>(
    h: &ProductHandle<'_, K, F>,
    pool: &[LinComb<K, F>],
    sampling: Sampling,
) -> Result<IdentityReport> {
    require_characteristic::<F>(&[2], "Jordan superidentity")?;
    check("Jordan superidentity", h, pool, sampling, 4, |t| {
        let (a, b, c, d) = (&t[0], &t[1], &t[2], &t[3]);
        let [pa, pb, pc, pd] = [a, b, c, d].map(parity_of);
        let m = |x: &LinComb<K, F>, y: &LinComb<K, F>| h.mul(x, y);
        let s = |e: u32| sign::<F>(e);
        vec![
            m(&m(a, b), &m(c, d)),
            m(&m(a, c), &m(b, d)).scaled(&s(pb * pc)),
            m(&m(a, d), &m(b, c)).scaled(&s((pb + pc) * pd)),
            -m(&m(&m(a, b), c), d),
            m(&m(&m(a, d), c), b).scaled(&s(pb * (pc + pd) + pc * pd + 1)),
            m(&m(&m(b, d), c), a).scaled(&s(pa * (pb + pc + pd) + pc * pd + 1)),
        ]
    })
}

/// `{a·b, c} = a·{b,c} + (-1)^{|b||c|} {a,c}·b`.
pub fn check_leibniz<K: Basis, F: Field>(
    p: &PoissonHandle<'_, K, F>,
    pool: &[LinComb<K, F>],
    sampling: Sampling,
) -> Result<IdentityReport> {
    require_characteristic::<F>(&[2, 3], "super-Leibniz")?;
    check("super-Leibniz", &p.bracket, pool, sampling, 3, |t| {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        let (dot, br) = (&p.dot, &p.bracket);
        let s: F = sign(parity_of(b) * parity_of(c) + 1);
        vec![br.mul(&dot.mul(a, b), c), -dot.mul(a, &br.mul(b, c)), dot.mul(&br.mul(a, c), b).scaled(&s)]
    })
}

/// `D(ab) = D(a)b + (-1)^{|a|} a D(b)` for an odd map `D`.
pub fn check_odd_derivation<K: Basis, F: Field>(
    h: &ProductHandle<'_, K, F>,
    d: impl Fn(&LinComb<K, F>) -> LinComb<K, F> + Sync,
    pool: &[LinComb<K, F>],
    sampling: Sampling,
) -> Result<IdentityReport> {
    check("odd superderivation", h, pool, sampling, 2, |t| {
        let (a, b) = (&t[0], &t[1]);
        let s: F = sign(parity_of(a) + 1);
        vec![d(&h.mul(a, b)), -h.mul(&d(a), b), h.mul(a, &d(b)).scaled(&s)]
    })
}

/// `D(D(a)) = 0`, plus `D` flipping parity.
pub fn check_square_zero_odd<K: Basis, F: Field>(
    h: &ProductHandle<'_, K, F>,
    d: impl Fn(&LinComb<K, F>) -> LinComb<K, F> + Sync,
    pool: &[LinComb<K, F>],
) -> Result<IdentityReport> {
    check("D odd with D^2 = 0", h, pool, Sampling::Exhaustive, 1, |t| {
        let da = d(&t[0]);
        // a parity mismatch is reported as a defect equal to D(a)
        let odd = da.is_zero() || da.parity().map(|p| p as u32) == Some((parity_of(&t[0]) + 1) % 2);
        vec![d(&da), if odd { LinComb::zero() } else { da }]
    })
}

fn has_unit<K: Basis, F: Field>(a: &LinComb<KanKey<UnitKey<K>>, F>) -> bool {
    a.coeff(&KanKey::Plain(UnitKey::One)).is_some()
}

/// `(a²)² = 0` for `a` in the ideal without unit of a Jordan double. Random
/// samples mix parities and components freely.
pub fn check_square_square<K: Basis, F: Field>(
    h: &ProductHandle<'_, KanKey<UnitKey<K>>, F>,
    pool: &[LinComb<KanKey<UnitKey<K>>, F>],
    sampling: Sampling,
) -> Result<IdentityReport> {
    require_characteristic::<F>(&[2], "(a^2)^2 = 0")?;
    if pool.iter().any(has_unit) {
        return Err(Error::InvalidArgument("(a^2)^2 = 0 is checked without the unit component".into()));
    }
    let elements: Vec<_> = match sampling {
        Sampling::Exhaustive | Sampling::Auto { .. } if pool.len() <= EXHAUSTIVE_LIMIT => pool.to_vec(),
        Sampling::Exhaustive => pool.to_vec(),
        Sampling::Auto { seed } | Sampling::Random { seed, .. } => {
            let count = match sampling {
                Sampling::Random { count, .. } => count,
                _ => DEFAULT_RANDOM_COUNT,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nonzero: Vec<_> = pool.iter().filter(|v| !v.is_zero()).collect();
            if nonzero.is_empty() {
                return Err(Error::InvalidArgument("sample pool is empty".into()));
            }
            (0..count)
                .map(|_| {
                    let mut a = LinComb::zero();
                    for _ in 0..rng.gen_range(1..=nonzero.len().min(5)) {
                        a.add_scaled(nonzero.choose(&mut rng).expect("nonempty"), &random_coeff(&mut rng));
                    }
                    a
                })
                .collect()
        }
    };
    let strategy = match sampling {
        Sampling::Random { count, seed } => SampleStrategy::Random { count, seed, pool: pool.len() },
        Sampling::Auto { seed } if pool.len() > EXHAUSTIVE_LIMIT => {
            SampleStrategy::Random { count: DEFAULT_RANDOM_COUNT, seed, pool: pool.len() }
        }
        _ => SampleStrategy::Exhaustive { pool: pool.len() },
    };
    let ts = elements.into_iter().map(|a| vec![a]).collect();
    Ok(evaluate("(a^2)^2 = 0", &h.description, strategy, ts, &*h.show, |t| {
        let sq = h.mul(&t[0], &t[0]);
        vec![h.mul(&sq, &sq)]
    }))
}

/// `a²·a = a·a² = 0` for homogeneous elements of every graded component of
/// a Jordan double (the unit excluded). Each basis element is tested, and
/// the sum of the basis when a component has dimension above one.
pub fn check_homogeneous_nil_cube<K: Basis, F: Field>(
    h: &ProductHandle<'_, KanKey<UnitKey<K>>, F>,
    basis: &GradedBasis<KanKey<UnitKey<K>>, F>,
    max_total: u32,
) -> Result<IdentityReport> {
    require_characteristic::<F>(&[2], "a^2 a = a a^2 = 0")?;
    let mut ts = Vec::new();
    for (deg, comp) in basis.components() {
        if deg.total() == 0 || deg.total() > max_total {
            continue;
        }
        for e in &comp.elements {
            ts.push(vec![e.clone()]);
        }
        if comp.elements.len() > 1 {
            ts.push(vec![sum_terms(comp.elements.iter().cloned())]);
        }
    }
    if ts.iter().any(|t| has_unit(&t[0])) {
        return Err(Error::InvalidArgument("graded basis contains the unit outside degree 0".into()));
    }
    let pool = ts.len();
    Ok(evaluate("a^2 a = a a^2 = 0", &h.description, SampleStrategy::Exhaustive { pool }, ts, &*h.show, |t| {
        let a = &t[0];
        let sq = h.mul(a, a);
        vec![h.mul(&sq, a), h.mul(a, &sq)]
    }))
}

/// Dimensions of `S, S², (S²)², ...` where `S` is the span of `spanning`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    pub schema_version: u32,
    pub algebra: String,
    pub field: String,
    /// `dims[0]` is the dimension of the span of the input.
    pub dims: Vec<usize>,
    /// First `k` with the `k`-th derived square zero, if within the steps taken.
    pub length: Option<usize>,
}

/// Derived series `S_{k+1} = span{ab : a, b ∈ S_k}`, up to `steps` squarings.
pub fn derived_series<K: Basis, F: Field>(
    h: &ProductHandle<'_, K, F>,
    spanning: &[LinComb<K, F>],
    steps: usize,
) -> SolvabilityReport {
    let span = |vs: &[LinComb<K, F>]| {
        let mut e = Echelon::new();
        for v in vs {
            e.insert(v);
        }
        e.into_rows()
    };
    let mut cur = span(spanning);
    let mut dims = vec![cur.len()];
    let mut length = cur.is_empty().then_some(0);
    for k in 1..=steps {
        if length.is_some() {
            break;
        }
        let products: Vec<_> = cur
            .par_iter()
            .flat_map_iter(|a| cur.iter().map(move |b| h.mul(a, b)))
            .collect();
        cur = span(&products);
        dims.push(cur.len());
        if cur.is_empty() {
            length = Some(k);
        }
    }
    SolvabilityReport { schema_version: SCHEMA_VERSION, algebra: h.description.clone(), field: F::label(), dims, length }
}

/// Every basis element of the graded basis up to `max_total`, plus extras.
pub fn basis_pool<K: Basis, F: Field>(
    basis: &GradedBasis<K, F>,
    max_total: u32,
    extra: impl IntoIterator<Item = LinComb<K, F>>,
) -> Vec<LinComb<K, F>> {
    let mut out: Vec<_> = basis.elements_up_to(max_total).into_iter().map(|(_, v)| v.clone()).collect();
    out.extend(extra);
    out
}

/// Wrap a product so that one basis pair gets the wrong sign; used as a
/// negative control for every checker.
pub fn corrupt_product<'a, K: Basis, F: Field>(
    h: ProductHandle<'a, K, F>,
    a: K,
    b: K,
) -> ProductHandle<'a, K, F> {
    let description = format!("{} (corrupted at {a:?}, {b:?})", h.description);
    let ProductHandle { mul, show, .. } = h;
    let mul = move |x: &LinComb<K, F>, y: &LinComb<K, F>| {
        let mut out = mul(x, y);
        if let (Some(cx), Some(cy)) = (x.coeff(&a), y.coeff(&b)) {
            let wrong = mul(&LinComb::basis(a.clone()), &LinComb::basis(b.clone()));
            out.add_scaled(&wrong, &(F::from_i64(-2) * cx.clone() * cy.clone()));
        }
        out
    };
    ProductHandle { description, mul: Box::new(mul), show }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doubles::{Hamiltonian, Kantor, TensorPoisson};
    use crate::grassmann::Monomial;
    use crate::operators::{derivation_bracket_terms, DerTerm};
    use crate::scalar::Rational;

    type Q = Rational;

    fn kan_h2() -> Kantor<Hamiltonian<Q>> {
        Kantor::new(Hamiltonian::new(2).unwrap())
    }

    fn basis_of<J: JordanAlgebra<Q>>(j: &J) -> Vec<LinComb<J::Key, Q>> {
        j.finite_basis().unwrap().into_iter().map(LinComb::basis).collect()
    }

    #[test]
    fn single_even_element_has_zero_defect() {
        let lie = ProductHandle::<DerTerm, Q>::new("Der", |a, b| derivation_bracket_terms(a, b));
        let x = vec![LinComb::basis(DerTerm::new(Monomial::var(0), 0))];
        assert!(check_super_jacobi(&lie, &x, Sampling::Exhaustive).unwrap().holds());
        assert!(check_super_anticomm(&lie, &x, Sampling::Exhaustive).unwrap().holds());
    }

    #[test]
    fn kantor_double_is_jordan() {
        let k = kan_h2();
        let h = ProductHandle::from_jordan(&k);
        let pool = basis_of(&k);
        let r = check_jordan_super(&h, &pool, Sampling::Random { count: 300, seed: 3 }).unwrap();
        assert!(r.holds(), "{}", r.to_json());
        assert!(check_super_comm(&h, &pool, Sampling::Auto { seed: 0 }).unwrap().holds());
    }

    #[test]
    fn corrupted_products_are_caught() {
        let k = kan_h2();
        let pool = basis_of(&k);
        let a = KanKey::Bar(Monomial::var(0));
        let b = KanKey::Bar(Monomial::var(2));
        let bad = corrupt_product(ProductHandle::from_jordan(&k), a, b);
        let r = check_super_comm(&bad, &pool, Sampling::Exhaustive).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);
        assert!(r.violations.iter().all(|w| w.confirmed));
        let r = check_jordan_super(&bad, &pool, Sampling::Random { count: 2000, seed: 1 }).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);

        let lie = ProductHandle::<DerTerm, Q>::new("Der", |a, b| derivation_bracket_terms(a, b));
        let d = |x: u64, v: usize| LinComb::basis(DerTerm::new(Monomial(x), v));
        let pool = vec![d(0, 0), d(1, 0), d(1, 1), d(3, 1), d(2, 0)];
        assert!(check_super_jacobi(&lie, &pool, Sampling::Exhaustive).unwrap().holds());
        let bad = corrupt_product(lie, DerTerm::new(Monomial(0), 0), DerTerm::new(Monomial(1), 0));
        assert!(!check_super_anticomm(&bad, &pool, Sampling::Exhaustive).unwrap().holds());
    }

    #[test]
    fn leibniz_on_hamiltonian_and_tensor() {
        let h1 = Hamiltonian::<Q>::new(1).unwrap();
        let pool: Vec<_> = h1.finite_basis().unwrap().into_iter().map(LinComb::basis).collect();
        let p = PoissonHandle::from_poisson(&h1);
        let r = check_leibniz(&p, &pool, Sampling::Exhaustive).unwrap();
        assert!(r.holds());
        assert_eq!(r.tested, 64);

        let t = TensorPoisson { left: Hamiltonian::<Q>::new(1).unwrap(), right: Hamiltonian::<Q>::new(1).unwrap() };
        let pool: Vec<_> = t.finite_basis().unwrap().into_iter().map(LinComb::basis).collect();
        let p = PoissonHandle::from_poisson(&t);
        assert!(check_leibniz(&p, &pool, Sampling::Random { count: 300, seed: 9 }).unwrap().holds());
        let bad = PoissonHandle {
            dot: p.dot,
            bracket: corrupt_product(p.bracket, (Monomial::var(0), Monomial::ONE), (Monomial::var(1), Monomial::ONE)),
        };
        assert!(!check_leibniz(&bad, &pool, Sampling::Exhaustive).unwrap().holds());
    }

    #[test]
    fn inhomogeneous_samples_are_rejected() {
        let k = kan_h2();
        let h = ProductHandle::from_jordan(&k);
        let mixed = LinComb::basis(KanKey::Plain(Monomial::ONE)) + LinComb::basis(KanKey::Plain(Monomial::var(0)));
        assert!(check_jordan_super(&h, &[mixed], Sampling::Exhaustive).is_err());
    }

    #[test]
    fn d_map_checks() {
        let k = kan_h2();
        let h = ProductHandle::from_jordan(&k);
        let pool = basis_of(&k);
        let d = |v: &LinComb<_, Q>| crate::doubles::d_map(v);
        assert!(check_odd_derivation(&h, d, &pool, Sampling::Exhaustive).unwrap().holds());
        assert!(check_square_zero_odd(&h, d, &pool).unwrap().holds());
        // the identity map is even and squares to itself
        let r = check_square_zero_odd(&h, |v: &LinComb<KanKey<Monomial>, Q>| v.clone(), &pool).unwrap();
        assert_eq!(r.violation_count, pool.len());
    }

    #[test]
    fn reports_are_reproducible() {
        let k = kan_h2();
        let h = ProductHandle::from_jordan(&k);
        let pool = basis_of(&k);
        let a = check_jordan_super(&h, &pool, Sampling::Random { count: 50, seed: 11 }).unwrap();
        let b = check_jordan_super(&h, &pool, Sampling::Random { count: 50, seed: 11 }).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let back: IdentityReport = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn auto_sampling_switches_to_random() {
        assert_eq!(Sampling::Auto { seed: 1 }.resolve(10, 4), SampleStrategy::Exhaustive { pool: 10 });
        assert_eq!(
            Sampling::Auto { seed: 1 }.resolve(11, 4),
            SampleStrategy::Random { count: DEFAULT_RANDOM_COUNT, seed: 1, pool: 11 }
        );
    }
}
