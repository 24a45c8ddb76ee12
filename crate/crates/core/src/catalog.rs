//! Named example algebras: pivot elements, the shift τ, recursive
//! presentations, and the builders used by the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::doubles::{self, Hamiltonian, KanKey, StructureTable, TableKey, TrivialPoisson, UnitKey};
use crate::error::{Error, Result};
use crate::generate::{
    dimension_table, generate, generate_assoc, generate_lie, ClosureStrategy, DimensionTable,
    GenerateOptions, GenerationMode, Generator, GradedBasis, MultiDegree, SCHEMA_VERSION,
};
use crate::grassmann::{Family, Monomial, VarTable};
use crate::lincomb::{Basis, LinComb};
use crate::operators::{compose_terms, derivation_bracket_terms, DerTerm, OpTerm, SuperDerivation};
use crate::scalar::Field;
use crate::series::{self, TransferReport, TruncatedSeries, Variables};
use crate::text::ordered_product;

/// Labels that the shift τ acts on by moving every index by a fixed stride.
pub trait Shift: Basis {
    fn shifted(&self, by: usize, n: usize) -> Option<Self>;
}

impl Shift for Monomial {
    fn shifted(&self, by: usize, n: usize) -> Option<Self> {
        Monomial::shifted(*self, by, n)
    }
}

impl Shift for DerTerm {
    fn shifted(&self, by: usize, n: usize) -> Option<Self> {
        let v = self.var as usize + by;
        (v < n).then(|| Some(DerTerm::new(self.x.shifted(by, n)?, v)))?
    }
}

impl Shift for OpTerm {
    fn shifted(&self, by: usize, n: usize) -> Option<Self> {
        Some(OpTerm::new(self.x.shifted(by, n)?, self.d.shifted(by, n)?))
    }
}

/// τ with the given stride. Shifting preserves the relative order of
/// indices, so no signs appear; any index reaching `n` is an error.
pub fn shift_tau<K: Shift, F: Field>(e: &LinComb<K, F>, stride: usize, n: usize) -> Result<LinComb<K, F>> {
    e.try_map_terms(|k| match k.shifted(stride, n) {
        Some(s) => Ok(Some((s, F::one()))),
        None => Err(Error::Overflow { index: k.max_index().unwrap_or(0) + stride, n }),
    })
}

/// Terms `x_i x_{i+1} ... x_{i+2k-1} ∂_{i+2k}` of `v_i`, kept while `i+2k < n`.
pub fn pivot_v_terms<F: Field>(i: usize, n: usize) -> LinComb<DerTerm, F> {
    let mut out = LinComb::zero();
    let mut k = 0;
    while i + 2 * k < n {
        let x = Monomial::from_indices(&(i..i + 2 * k).collect::<Vec<_>>());
        out.add_term(DerTerm::new(x, i + 2 * k), F::one());
        k += 1;
    }
    out
}

pub fn pivot_v<F: Field>(vars: &Arc<VarTable>, i: usize) -> Result<SuperDerivation<F>> {
    if i >= vars.len() {
        return Err(Error::Overflow { index: i, n: vars.len() });
    }
    SuperDerivation::new(vars.clone(), pivot_v_terms(i, vars.len()))
}

/// One of the three cyclic pivot families of the triple construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
    C,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::A, Letter::B, Letter::C];

    /// `(first factor, second factor, differentiated family)`: a:(y,x,x),
    /// b:(z,y,y), c:(x,z,z).
    fn pattern(self) -> (usize, usize, usize) {
        match self {
            Letter::A => (1, 0, 0),
            Letter::B => (2, 1, 1),
            Letter::C => (0, 2, 2),
        }
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Letter::A),
            "b" | "B" => Ok(Letter::B),
            "c" | "C" => Ok(Letter::C),
            _ => Err(Error::InvalidArgument(format!("unknown pivot letter `{s}`"))),
        }
    }
}

/// Signed monomial `(p_i q_i)(p_{i+1} q_{i+1}) ... (p_{j-1} q_{j-1})`, optionally
/// followed by a head variable, with `width` variables per level.
fn nested_prefix(letter: Letter, from: usize, to: usize, width: usize, head: Option<usize>) -> Option<(bool, Monomial)> {
    let (p, q, _) = letter.pattern();
    let mut idx = vec![];
    for l in from..to {
        idx.push(width * l + p);
        idx.push(width * l + q);
    }
    idx.extend(head);
    ordered_product(&idx)
}

fn signed<F: Field>(neg: bool) -> F {
    if neg {
        -F::one()
    } else {
        F::one()
    }
}

/// Terms of `a_i`, `b_i` or `c_i` over interleaved triples, truncated at
/// `levels`.
pub fn pivot_abc_terms<F: Field>(letter: Letter, i: usize, levels: usize) -> LinComb<DerTerm, F> {
    let (_, _, d) = letter.pattern();
    let mut out = LinComb::zero();
    for j in i..levels {
        let (neg, x) = nested_prefix(letter, i, j, 3, None).expect("distinct indices");
        out.add_term(DerTerm::new(x, 3 * j + d), signed(neg));
    }
    out
}

pub fn pivot_abc<F: Field>(vars: &Arc<VarTable>, letter: Letter, i: usize) -> Result<SuperDerivation<F>> {
    if vars.stride() != 3 || vars.find(Family::X, 0) != Some(0) {
        return Err(Error::Structural("pivot letters need the interleaved triple table".into()));
    }
    let levels = vars.len() / 3;
    if i >= levels {
        return Err(Error::Overflow { index: 3 * i, n: vars.len() });
    }
    SuperDerivation::new(vars.clone(), pivot_abc_terms(letter, i, levels))
}

/// `A_i`, `B_i`, `C_i`: the pivot letters with each derivative replaced by the
/// matching capital variable, in the six-per-level Poisson carrier.
pub fn poisson_abc_terms<F: Field>(letter: Letter, i: usize, levels: usize) -> LinComb<Monomial, F> {
    let (_, _, d) = letter.pattern();
    let mut out = LinComb::zero();
    for j in i..levels {
        let (neg, m) = nested_prefix(letter, i, j, 6, Some(6 * j + 3 + d)).expect("distinct indices");
        out.add_term(m, signed(neg));
    }
    out
}

/// The Poisson carrier for `levels` letter-triples with `{X_i,x_i} = 1` etc.
pub fn poisson_carrier<F: Field>(levels: usize) -> Result<Hamiltonian<F>> {
    let vars = VarTable::poisson_triples(levels)?;
    let pairs = (0..levels)
        .flat_map(|l| (0..3).map(move |f| (6 * l + 3 + f, 6 * l + f)))
        .collect();
    Hamiltonian::with_pairs(vars, pairs)
}

/// Outcome of one recursion identity check.
#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub identity: String,
    pub n: usize,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

fn report<K: crate::text::TermText, F: Field>(
    identity: String,
    vars: &VarTable,
    lhs: &LinComb<K, F>,
    rhs: &LinComb<K, F>,
) -> RecursionReport {
    RecursionReport {
        identity,
        n: vars.len(),
        holds: lhs == rhs,
        lhs: crate::text::format_lincomb(lhs, vars),
        rhs: crate::text::format_lincomb(rhs, vars),
    }
}

/// `g · D` for a monomial `g` and derivation terms `D`.
fn left_mul_der<F: Field>(g: Monomial, c: F, d: &LinComb<DerTerm, F>) -> LinComb<DerTerm, F> {
    LinComb::term(g, c).bilinear(d, |m, t, emit| {
        if let Some((neg, x)) = crate::grassmann::mono_mul(*m, t.x) {
            emit(DerTerm::new(x, t.var as usize), crate::lincomb::sign(neg as u32));
        }
    })
}

/// `v_i = ∂_i + x_i x_{i+1} v_{i+2}` at truncation `n`.
pub fn recursion_check_v<F: Field>(i: usize, n: usize) -> Result<RecursionReport> {
    let vars = VarTable::standard(n)?;
    if i + 2 >= n {
        return Err(Error::Overflow { index: i + 2, n });
    }
    let lhs = pivot_v_terms::<F>(i, n);
    let tail = left_mul_der(Monomial::from_indices(&[i, i + 1]), F::one(), &pivot_v_terms(i + 2, n));
    let rhs = &LinComb::basis(DerTerm::new(Monomial::ONE, i)) + &tail;
    Ok(report(format!("v{i} = d{i} + x{i} x{} v{}", i + 1, i + 2), &vars, &lhs, &rhs))
}

/// `τ(v_i) = v_{i+1}` where `v_i` is cut one index early.
pub fn shift_check_v<F: Field>(i: usize, n: usize) -> Result<RecursionReport> {
    let vars = VarTable::standard(n)?;
    let lhs = shift_tau(&pivot_v_terms::<F>(i, n - 1), 1, n)?;
    let rhs = pivot_v_terms(i + 1, n);
    Ok(report(format!("tau(v{i}) = v{}", i + 1), &vars, &lhs, &rhs))
}

/// `a_0 = ∂_{x_0} + y_0 x_0 τ(a_0)` and its cyclic analogues at `levels`
/// letter-triples; `τ(a_0)` is formed from `a_0` cut one level early.
pub fn recursion_check_q<F: Field>(letter: Letter, levels: usize) -> Result<RecursionReport> {
    let vars = VarTable::triples(levels)?;
    if levels < 2 {
        return Err(Error::InvalidArgument("need at least two letter-triples".into()));
    }
    let (p, q, d) = letter.pattern();
    let lhs = pivot_abc_terms::<F>(letter, 0, levels);
    let shifted = shift_tau(&pivot_abc_terms::<F>(letter, 0, levels - 1), 3, vars.len())?;
    let (neg, g) = ordered_product(&[p, q]).expect("distinct letters");
    let c = signed(neg);
    let rhs = &LinComb::basis(DerTerm::new(Monomial::ONE, d)) + &left_mul_der(g, c, &shifted);
    let name = ["a", "b", "c"][d];
    Ok(report(
        format!("{name}0 = d{} + {}0 {}0 tau({name}0)", vars.name(d), letter_name(p), letter_name(q)),
        &vars,
        &lhs,
        &rhs,
    ))
}

fn letter_name(f: usize) -> &'static str {
    ["x", "y", "z"][f]
}

/// `A_0 = X_0 + y_0 x_0 τ(A_0)` and its cyclic analogues.
pub fn recursion_check_p<F: Field>(letter: Letter, levels: usize) -> Result<RecursionReport> {
    let vars = VarTable::poisson_triples(levels)?;
    if levels < 2 {
        return Err(Error::InvalidArgument("need at least two letter-triples".into()));
    }
    let (p, q, d) = letter.pattern();
    let lhs = poisson_abc_terms::<F>(letter, 0, levels);
    let shifted = shift_tau(&poisson_abc_terms::<F>(letter, 0, levels - 1), 6, vars.len())?;
    let (neg, g) = ordered_product(&[p, q]).expect("distinct letters");
    let c = signed(neg);
    let head = LinComb::basis(Monomial::var(3 + d));
    let rhs = &head + &crate::grassmann::mul_terms(&LinComb::term(g, c), &shifted);
    let name = ["A", "B", "C"][d];
    Ok(report(
        format!("{name}0 = {} + {}0 {}0 tau({name}0)", vars.name(3 + d), letter_name(p), letter_name(q)),
        &vars,
        &lhs,
        &rhs,
    ))
}

/// `v_n ∘ v_n = x_{n+1} v_{n+2}` in End Λ(N), hence `[v_n, v_n] = 2 x_{n+1} v_{n+2}`.
pub fn pivot_square_check<F: Field>(i: usize, n: usize) -> Result<Vec<RecursionReport>> {
    let vars = VarTable::standard(n)?;
    if i + 2 >= n {
        return Err(Error::Overflow { index: i + 2, n });
    }
    let v = pivot_v_terms::<F>(i, n);
    let target = left_mul_der(Monomial::var(i + 1), F::one(), &pivot_v_terms(i + 2, n));
    let vop = v.map_keys(DerTerm::as_op);
    let square = compose_terms(&vop, &vop);
    let bracket = derivation_bracket_terms(&v, &v);
    Ok(vec![
        report(
            format!("v{i} v{i} = x{} v{}", i + 1, i + 2),
            &vars,
            &square,
            &target.map_keys(DerTerm::as_op),
        ),
        report(
            format!("[v{i}, v{i}] = 2 x{} v{}", i + 1, i + 2),
            &vars,
            &bracket,
            &target.scaled(&F::from_i64(2)),
        ),
    ])
}

/// All recursion identities of one family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecursionFamily {
    R,
    Q,
    P,
}

pub fn recursion_check<F: Field>(which: RecursionFamily, size: usize) -> Result<Vec<RecursionReport>> {
    match which {
        RecursionFamily::R => {
            let mut out = vec![];
            for i in 0..4.min(size.saturating_sub(3)) {
                out.push(recursion_check_v::<F>(i, size)?);
                out.push(shift_check_v::<F>(i, size)?);
            }
            Ok(out)
        }
        RecursionFamily::Q => Letter::ALL.iter().map(|&l| recursion_check_q::<F>(l, size)).collect(),
        RecursionFamily::P => Letter::ALL.iter().map(|&l| recursion_check_p::<F>(l, size)).collect(),
    }
}

/// Result of comparing `Alg(∂_0, x_0)` with the 2×2 matrix units.
#[derive(Clone, Debug, Serialize)]
pub struct M11Report {
    pub dimension: usize,
    pub table_matches: bool,
    pub parity_matches: bool,
    pub mismatches: Vec<String>,
}

/// Normal forms of `E11 = x0 d0`, `E12 = x0`, `E21 = d0`, `E22 = d0 x0 = 1 - x0 d0`.
pub fn matrix_units<F: Field>() -> [[LinComb<OpTerm, F>; 2]; 2] {
    let t = |x: &[usize], d: &[usize]| OpTerm::new(Monomial::from_indices(x), Monomial::from_indices(d));
    let e11 = LinComb::basis(t(&[0], &[0]));
    let e22 = &LinComb::basis(t(&[], &[])) - &e11;
    [[e11, LinComb::basis(t(&[0], &[]))], [LinComb::basis(t(&[], &[0])), e22]]
}

/// Generates `Alg(∂_0, x_0)` and checks it against the matrix-unit table.
pub fn m11_check<F: Field>() -> Result<(GradedBasis<OpTerm, F>, M11Report)> {
    let vars = VarTable::standard(1)?;
    let t = |x: &[usize], d: &[usize]| OpTerm::new(Monomial::from_indices(x), Monomial::from_indices(d));
    let gens = [
        Generator::new("d0", LinComb::basis(t(&[], &[0])), MultiDegree::unit(2, 0)),
        Generator::new("x0", LinComb::basis(t(&[0], &[])), MultiDegree::unit(2, 1)),
    ];
    let opts = GenerateOptions { mode: GenerationMode::Filtered, ..GenerateOptions::assoc(4, 0) };
    let basis = generate(vars, &gens, compose_terms, &opts)?;
    let e = matrix_units::<F>();
    let mut mismatches = vec![];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let got = compose_terms(&e[i][j], &e[k][l]);
                    let want = if j == k { e[i][l].clone() } else { LinComb::zero() };
                    if got != want {
                        mismatches.push(format!("E{}{} E{}{}", i + 1, j + 1, k + 1, l + 1));
                    }
                }
            }
        }
    }
    let mut ech = crate::echelon::Echelon::new();
    for (_, el) in basis.elements() {
        ech.insert(el);
    }
    let spans_units = e.iter().flatten().all(|u| ech.contains(u));
    let dimension = ech.rank();
    let parity_matches = (0..2).all(|i| {
        (0..2).all(|j| e[i][j].parity() == Some(u8::from(i != j)))
    });
    Ok((
        basis,
        M11Report { dimension, table_matches: mismatches.is_empty() && spans_units, parity_matches, mismatches },
    ))
}

/// Index band dropped by the reliability projection for `R`.
pub const R_MARGIN: usize = 2;
/// Index band for the triple examples: one full letter-triple.
pub const Q_MARGIN: usize = 3;

pub fn r_generators<F: Field>(n: usize) -> Vec<Generator<DerTerm, F>> {
    (0..2)
        .map(|i| Generator::new(format!("v{i}"), pivot_v_terms(i, n), MultiDegree::unit(2, i)))
        .collect()
}

pub fn q_generators<F: Field>(levels: usize) -> Vec<Generator<DerTerm, F>> {
    Letter::ALL
        .iter()
        .enumerate()
        .map(|(i, &l)| Generator::new(["a0", "b0", "c0"][i], pivot_abc_terms(l, 0, levels), MultiDegree::unit(3, i)))
        .collect()
}

/// `R = Lie(v0, v1)` inside Der Λ(n).
pub fn build_r<F: Field>(n: usize, d: u32) -> Result<GradedBasis<DerTerm, F>> {
    generate_lie(VarTable::standard(n)?, &r_generators(n), &GenerateOptions::lie(d, R_MARGIN))
}

/// `A(R) = Alg(v0, v1)` inside End Λ(n).
pub fn build_ar<F: Field>(n: usize, d: u32) -> Result<GradedBasis<OpTerm, F>> {
    let gens = to_operator_gens(r_generators::<F>(n));
    let opts = GenerateOptions { strategy: ClosureStrategy::GeneratorsOnly, ..GenerateOptions::assoc(d, R_MARGIN) };
    generate_assoc(VarTable::standard(n)?, &gens, &opts)
}

/// `Q = Lie(a0, b0, c0)` over `levels` letter-triples.
pub fn build_q<F: Field>(levels: usize, d: u32) -> Result<GradedBasis<DerTerm, F>> {
    generate_lie(VarTable::triples(levels)?, &q_generators(levels), &GenerateOptions::lie(d, Q_MARGIN))
}

pub fn build_aq<F: Field>(levels: usize, d: u32) -> Result<GradedBasis<OpTerm, F>> {
    let gens = to_operator_gens(q_generators::<F>(levels));
    let opts = GenerateOptions { strategy: ClosureStrategy::GeneratorsOnly, ..GenerateOptions::assoc(d, Q_MARGIN) };
    generate_assoc(VarTable::triples(levels)?, &gens, &opts)
}

fn to_operator_gens<F: Field>(gens: Vec<Generator<DerTerm, F>>) -> Vec<Generator<OpTerm, F>> {
    gens.into_iter()
        .map(|g| Generator::new(g.name, g.element.map_keys(DerTerm::as_op), g.degree))
        .collect()
}

/// Poisson subalgebra generated by `A_0, B_0, C_0` (closed under both the
/// product and the bracket), margin of one level.
pub fn build_pq<F: Field>(levels: usize, d: u32) -> Result<GradedBasis<Monomial, F>> {
    let h = poisson_carrier::<F>(levels)?;
    let gens: Vec<_> = Letter::ALL
        .iter()
        .enumerate()
        .map(|(i, &l)| Generator::new(["A0", "B0", "C0"][i], poisson_abc_terms(l, 0, levels), MultiDegree::unit(3, i)))
        .collect();
    // both products are additive in the multidegree
    let both = |a: &LinComb<Monomial, F>, b: &LinComb<Monomial, F>| doubles::poisson_products(&h, a, b);
    crate::generate::generate_multi(h.vars().clone(), &gens, both, &GenerateOptions::lie(d, 6))
}

/// Keys of the Jordan double `Jor(Der Λ) = Kan(P(Der Λ))`.
pub type JorKey = KanKey<UnitKey<DerTerm>>;

/// `Jor(L)` generated by `X ∪ {1̄}` for the generators `X` of `L`; the unit
/// component `J_0 = ⟨1⟩` is not generated and is accounted for separately.
pub fn build_jor<F: Field>(
    vars: Arc<VarTable>,
    lie_gens: &[Generator<DerTerm, F>],
    d: u32,
    margin: usize,
) -> Result<GradedBasis<JorKey, F>> {
    build_jor_with(vars, &TrivialPoisson::derivations(), lie_gens, d, margin)
}

/// `Jor(L)` for `L` given by the bracket of a trivial Poisson algebra.
pub fn build_jor_with<K: Basis, F: Field>(
    vars: Arc<VarTable>,
    p: &TrivialPoisson<K, F>,
    lie_gens: &[Generator<K, F>],
    d: u32,
    margin: usize,
) -> Result<GradedBasis<KanKey<UnitKey<K>>, F>> {
    let k = lie_gens.first().map_or(0, |g| g.degree.len());
    let mut gens: Vec<Generator<KanKey<UnitKey<K>>, F>> = lie_gens
        .iter()
        .map(|g| {
            let mut deg = g.degree.coords().to_vec();
            deg.push(0);
            let element = g.element.map_keys(|t| KanKey::Plain(UnitKey::El(t.clone())));
            Generator::new(g.name.clone(), element, MultiDegree::new(deg))
        })
        .collect();
    gens.push(Generator::new("1b", LinComb::basis(KanKey::Bar(UnitKey::One)), MultiDegree::unit(k + 1, k)));
    let product = |a: &LinComb<_, F>, b: &LinComb<_, F>| doubles::kantor_mul(p, a, b);
    generate(vars, &gens, product, &GenerateOptions::lie(d, margin))
}

pub fn build_jor_r<F: Field>(n: usize, d: u32) -> Result<GradedBasis<JorKey, F>> {
    build_jor(VarTable::standard(n)?, &r_generators(n), d, R_MARGIN)
}

pub fn build_jor_q<F: Field>(levels: usize, d: u32) -> Result<GradedBasis<JorKey, F>> {
    build_jor(VarTable::triples(levels)?, &q_generators(levels), d, Q_MARGIN)
}

/// The named examples addressable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExampleName {
    R,
    AR,
    Q,
    AQ,
    PQ,
    H(usize),
    KanH(usize),
    JorR,
    JorQ,
    M11,
    Toy,
    Empty,
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleName::R => write!(f, "R"),
            ExampleName::AR => write!(f, "AR"),
            ExampleName::Q => write!(f, "Q"),
            ExampleName::AQ => write!(f, "AQ"),
            ExampleName::PQ => write!(f, "PQ"),
            ExampleName::H(n) => write!(f, "H{n}"),
            ExampleName::KanH(n) => write!(f, "KanH{n}"),
            ExampleName::JorR => write!(f, "JorR"),
            ExampleName::JorQ => write!(f, "JorQ"),
            ExampleName::M11 => write!(f, "M11"),
            ExampleName::Toy => write!(f, "Toy"),
            ExampleName::Empty => write!(f, "Empty"),
        }
    }
}

impl FromStr for ExampleName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let small = |rest: &str| -> Result<usize> {
            match rest.parse::<usize>() {
                Ok(n) if (1..=3).contains(&n) => Ok(n),
                _ => Err(Error::Config(format!("`{s}`: Hamiltonian rank must be 1, 2 or 3"))),
            }
        };
        Ok(match s {
            "R" => ExampleName::R,
            "AR" | "A(R)" => ExampleName::AR,
            "Q" => ExampleName::Q,
            "AQ" | "A(Q)" => ExampleName::AQ,
            "PQ" | "P(Q)" => ExampleName::PQ,
            "JorR" | "Jor(R)" => ExampleName::JorR,
            "JorQ" | "Jor(Q)" => ExampleName::JorQ,
            "M11" | "M(1|1)" => ExampleName::M11,
            "Toy" => ExampleName::Toy,
            "Empty" => ExampleName::Empty,
            _ => {
                if let Some(rest) = s.strip_prefix("KanH") {
                    ExampleName::KanH(small(rest)?)
                } else if let Some(rest) = s.strip_prefix('H') {
                    ExampleName::H(small(rest)?)
                } else {
                    return Err(Error::Config(format!("unknown example `{s}`; see `catalog list`")));
                }
            }
        })
    }
}

/// A named example with its truncation and degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleSpec {
    pub name: String,
    pub description: String,
    /// Number of Grassmann variables.
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub grading: String,
    #[serde(skip)]
    pub example: ExampleName,
}

impl ExampleName {
    pub const LISTED: [ExampleName; 14] = [
        ExampleName::R,
        ExampleName::AR,
        ExampleName::Q,
        ExampleName::AQ,
        ExampleName::PQ,
        ExampleName::H(1),
        ExampleName::H(2),
        ExampleName::KanH(1),
        ExampleName::KanH(2),
        ExampleName::JorR,
        ExampleName::JorQ,
        ExampleName::M11,
        ExampleName::Toy,
        ExampleName::Empty,
    ];

    pub fn description(self) -> String {
        match self {
            ExampleName::R => "Lie superalgebra generated by the pivot derivations v0, v1".into(),
            ExampleName::AR => "associative hull Alg(v0, v1) in End of the Grassmann algebra".into(),
            ExampleName::Q => "Lie superalgebra generated by the pivot letters a0, b0, c0".into(),
            ExampleName::AQ => "associative hull Alg(a0, b0, c0)".into(),
            ExampleName::PQ => "Poisson superalgebra generated by A0, B0, C0 (capital-letter lift)".into(),
            ExampleName::H(1) => "Hamiltonian Poisson superalgebra on x1, y1".into(),
            ExampleName::H(n) => format!("Hamiltonian Poisson superalgebra on x1..x{n}, y1..y{n}"),
            ExampleName::KanH(n) => format!("Kantor double of H{n}"),
            ExampleName::JorR => "Jordan double of R, generated by v0, v1 and 1b".into(),
            ExampleName::JorQ => "Jordan double of Q, generated by a0, b0, c0 and 1b".into(),
            ExampleName::M11 => "Alg(d0, x0) on one Grassmann variable, the matrix superalgebra M(1|1)".into(),
            ExampleName::Toy => "two-step nilpotent Lie superalgebra: odd e0, e1 with [e0,e0] = [e1,e1] = e2".into(),
            ExampleName::Empty => "the zero Lie superalgebra".into(),
        }
    }

    /// Default `(N, D)`; for the triple examples `N` counts variables, so it
    /// is three times the number of letter-triples.
    pub fn defaults(self) -> (usize, u32) {
        match self {
            ExampleName::R => (24, 20),
            ExampleName::AR => (16, 10),
            ExampleName::Q | ExampleName::JorQ => (24, 8),
            ExampleName::AQ => (15, 6),
            ExampleName::PQ => (30, 6),
            ExampleName::H(n) | ExampleName::KanH(n) => (2 * n, 4 * n as u32),
            ExampleName::JorR => (24, 59),
            ExampleName::M11 => (1, 4),
            ExampleName::Toy | ExampleName::Empty => (0, 4),
        }
    }

    pub fn grading(self) -> &'static str {
        match self {
            ExampleName::R | ExampleName::AR => "Z2",
            ExampleName::Q | ExampleName::AQ | ExampleName::PQ | ExampleName::JorR => "Z3",
            ExampleName::JorQ => "Z4",
            ExampleName::H(_) | ExampleName::KanH(_) | ExampleName::Toy | ExampleName::Empty => "total",
            ExampleName::M11 => "filtered",
        }
    }

    /// Validates `(N, D)` for this example and returns the resolved `ExampleSpec`.
    pub fn spec(self, n: Option<usize>, d: Option<u32>) -> Result<ExampleSpec> {
        let (n0, d0) = self.defaults();
        let n = n.unwrap_or(n0);
        let d = d.unwrap_or(d0);
        if d < 1 {
            return Err(Error::Config("D must be at least 1".into()));
        }
        let bad = |msg: String| Err(Error::Config(msg));
        match self {
            ExampleName::R | ExampleName::AR | ExampleName::JorR if n < 2 + R_MARGIN || n > 64 => {
                return bad(format!("{self}: N must be in {}..=64", 2 + R_MARGIN))
            }
            ExampleName::Q | ExampleName::AQ | ExampleName::JorQ
                if n % 3 != 0 || n < 3 + Q_MARGIN || n > 63 =>
            {
                return bad(format!("{self}: N must be a multiple of 3 in 6..=63"))
            }
            ExampleName::PQ if n % 6 != 0 || n < 12 || n > 60 => {
                return bad(format!("{self}: N must be a multiple of 6 in 12..=60"))
            }
            ExampleName::H(k) | ExampleName::KanH(k) if n != 2 * k => {
                return bad(format!("{self}: N is fixed to {}", 2 * k))
            }
            ExampleName::M11 if n != 1 => return bad("M11: N is fixed to 1".into()),
            ExampleName::Toy | ExampleName::Empty if n != 0 => {
                return bad(format!("{self}: uses no Grassmann variables, N is fixed to 0"))
            }
            _ => {}
        }
        Ok(ExampleSpec {
            name: self.to_string(),
            description: self.description(),
            n,
            d,
            grading: self.grading().into(),
            example: self,
        })
    }
}

pub fn catalog_list() -> Vec<ExampleSpec> {
    ExampleName::LISTED.iter().map(|e| e.spec(None, None).expect("defaults are valid")).collect()
}

/// Dimension table of an example; for `JorR`/`JorQ` and the Hamiltonian
/// examples the unit's degree-0 component is omitted like every other
/// degree-0 piece.
pub fn example_dims<F: Field>(spec: &ExampleSpec) -> Result<DimensionTable> {
    let name = spec.name.as_str();
    let (n, d) = (spec.n, spec.d);
    Ok(match spec.example {
        ExampleName::R => dimension_table(&build_r::<F>(n, d)?, name),
        ExampleName::AR => dimension_table(&build_ar::<F>(n, d)?, name),
        ExampleName::Q => dimension_table(&build_q::<F>(n / 3, d)?, name),
        ExampleName::AQ => dimension_table(&build_aq::<F>(n / 3, d)?, name),
        ExampleName::PQ => dimension_table(&build_pq::<F>(n / 6, d)?, name),
        ExampleName::JorR => dimension_table(&build_jor_r::<F>(n, d)?, name),
        ExampleName::JorQ => dimension_table(&build_jor_q::<F>(n / 3, d)?, name),
        ExampleName::H(k) => dimension_table(&doubles::hamiltonian_basis::<F>(k, d)?, name),
        ExampleName::KanH(k) => dimension_table(&doubles::kantor_hamiltonian_basis::<F>(k, d)?, name),
        ExampleName::M11 => dimension_table(&m11_check::<F>()?.0, name),
        ExampleName::Toy => dimension_table(&build_toy::<F>(d)?, name),
        ExampleName::Empty => dimension_table(&build_empty::<F>(d)?, name),
    })
}

impl ExampleName {
    /// Whether the example is a Lie superalgebra with a Jordan double in
    /// [`series_bundle`].
    pub fn has_jordan_double(self) -> bool {
        matches!(self, ExampleName::R | ExampleName::Q | ExampleName::Toy | ExampleName::Empty)
    }
}

fn toy_poisson<F: Field>() -> TrivialPoisson<TableKey, F> {
    TrivialPoisson::from_lie_table(Arc::new(doubles::toy_lie_table()))
}

fn empty_poisson<F: Field>() -> TrivialPoisson<TableKey, F> {
    let table = StructureTable {
        name: "0".into(),
        names: vec![],
        parities: vec![],
        unit: None,
        dot: BTreeMap::new(),
        bracket: BTreeMap::new(),
    };
    TrivialPoisson::from_lie_table(Arc::new(table))
}

fn toy_generators<F: Field>() -> Vec<Generator<TableKey, F>> {
    (0..2)
        .map(|i| Generator::new(format!("e{i}"), LinComb::basis(TableKey { index: i, parity: 1 }), MultiDegree::new(vec![1])))
        .collect()
}

/// The toy algebra, generated by `e0, e1` in degree 1.
pub fn build_toy<F: Field>(d: u32) -> Result<GradedBasis<TableKey, F>> {
    let p = toy_poisson::<F>();
    let bracket = |a: &LinComb<TableKey, F>, b: &LinComb<TableKey, F>| p.lie_bracket(a, b);
    generate(VarTable::standard(0)?, &toy_generators(), bracket, &GenerateOptions::lie(d, 0))
}

pub fn build_jor_toy<F: Field>(d: u32) -> Result<GradedBasis<KanKey<UnitKey<TableKey>>, F>> {
    build_jor_with(VarTable::standard(0)?, &toy_poisson(), &toy_generators(), d, 0)
}

pub fn build_empty<F: Field>(d: u32) -> Result<GradedBasis<TableKey, F>> {
    if d < 1 {
        return Err(Error::InvalidArgument("maximal degree D must be at least 1".into()));
    }
    Ok(GradedBasis::from_components(VarTable::standard(0)?, vec![], d, 0, GenerationMode::Multidegree, BTreeMap::new()))
}

/// `Jor(0) = ⟨1⟩ ⊕ ⟨1̄⟩`, generated by `1̄` alone.
pub fn build_jor_empty<F: Field>(d: u32) -> Result<GradedBasis<KanKey<UnitKey<TableKey>>, F>> {
    build_jor_with(VarTable::standard(0)?, &empty_poisson(), &[], d, 0)
}

/// Bivariate comparison of the transfer formula with direct counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BivariateSeries {
    pub direct: TruncatedSeries,
    pub formula: TruncatedSeries,
    /// `(exponent, formula, direct)` wherever they differ on the common window.
    pub diff: Vec<(Vec<i64>, i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanSeries {
    /// Degree bound used for the Jordan double, `3D - 1`.
    #[serde(rename = "D")]
    pub d: u32,
    pub direct: TruncatedSeries,
    pub formula: TruncatedSeries,
    pub transfer: TransferReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bivariate: Option<BivariateSeries>,
}

impl JordanSeries {
    pub fn holds(&self) -> bool {
        self.transfer.holds && self.bivariate.as_ref().map_or(true, |b| b.diff.is_empty())
    }
}

/// Hilbert series of an example and, for Lie examples, of its Jordan double
/// computed both directly and through the transfer formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesBundle {
    pub schema_version: u32,
    pub algebra: String,
    pub field: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub hilbert: TruncatedSeries,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan: Option<JordanSeries>,
}

fn jordan_series<K: Basis, F: Field>(
    l: &GradedBasis<K, F>,
    j: &GradedBasis<KanKey<UnitKey<K>>, F>,
    bivariate: bool,
) -> Result<JordanSeries> {
    let (lt, jt) = (dimension_table(l, "L"), dimension_table(j, "Jor(L)"));
    let transfer = series::transfer_consistency(&lt, &jt)?;
    let formula = series::jordan_transfer(&series::hilbert_from_table(&lt))?;
    let mut direct = series::hilbert_from_table(&jt);
    direct.add(vec![0], 1);
    let bivariate = if bivariate {
        let formula = series::jordan_transfer_bivariate(&series::hilbert(l, Variables::One))?;
        let mut direct = series::hilbert(j, Variables::Two);
        direct.add(vec![0, 0], 1);
        let window = formula.truncation().min(direct.truncation());
        let (f, d) = (formula.truncate(window), direct.truncate(window));
        let mut keys: Vec<&Vec<i64>> = f.terms().chain(d.terms()).map(|(e, _)| e).collect();
        keys.sort();
        keys.dedup();
        let diff = keys
            .into_iter()
            .filter(|e| f.coeff(e) != d.coeff(e))
            .map(|e| (e.clone(), f.coeff(e), d.coeff(e)))
            .collect();
        Some(BivariateSeries { direct, formula, diff })
    } else {
        None
    };
    Ok(JordanSeries { d: j.max_degree(), direct, formula, transfer, bivariate })
}

pub fn series_bundle<F: Field>(spec: &ExampleSpec, bivariate: bool) -> Result<SeriesBundle> {
    let (n, d) = (spec.n, spec.d);
    let dj = 3 * d - 1;
    let (hilbert, jordan) = match spec.example {
        ExampleName::R => {
            let l = build_r::<F>(n, d)?;
            (series::hilbert(&l, Variables::One), Some(jordan_series(&l, &build_jor_r(n, dj)?, bivariate)?))
        }
        ExampleName::Q => {
            let l = build_q::<F>(n / 3, d)?;
            (series::hilbert(&l, Variables::One), Some(jordan_series(&l, &build_jor_q(n / 3, dj)?, bivariate)?))
        }
        ExampleName::Toy => {
            let l = build_toy::<F>(d)?;
            (series::hilbert(&l, Variables::One), Some(jordan_series(&l, &build_jor_toy(dj)?, bivariate)?))
        }
        ExampleName::Empty => {
            let l = build_empty::<F>(d)?;
            (series::hilbert(&l, Variables::One), Some(jordan_series(&l, &build_jor_empty(dj)?, bivariate)?))
        }
        _ => (series::hilbert_from_table(&example_dims::<F>(spec)?), None),
    };
    Ok(SeriesBundle {
        schema_version: SCHEMA_VERSION,
        algebra: spec.name.clone(),
        field: F::label(),
        n,
        d,
        hilbert,
        jordan,
    })
}

/// Dimension table of the Jordan double of a Lie example up to degree `d`,
/// or `None` when the example has no Jordan double.
pub fn jordan_double_dims<F: Field>(spec: &ExampleSpec, d: u32) -> Result<Option<DimensionTable>> {
    let name = format!("Jor({})", spec.name);
    Ok(Some(match spec.example {
        ExampleName::R => dimension_table(&build_jor_r::<F>(spec.n, d)?, &name),
        ExampleName::Q => dimension_table(&build_jor_q::<F>(spec.n / 3, d)?, &name),
        ExampleName::Toy => dimension_table(&build_jor_toy::<F>(d)?, &name),
        ExampleName::Empty => dimension_table(&build_jor_empty::<F>(d)?, &name),
        _ => return Ok(None),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanGrowth {
    #[serde(rename = "D")]
    pub d: u32,
    /// `γ_J(n)` for `n = 0..=D`, unit included.
    pub gamma: Vec<u64>,
    pub inequalities: Vec<series::GrowthRow>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub schema_version: u32,
    pub algebra: String,
    pub field: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub reliable_degree: u32,
    /// `dim A_n` for `n = 1..=D`.
    pub dims: Vec<usize>,
    /// `γ(n)` for `n = 0..=D`, with `γ(0) = 0`.
    pub gamma: Vec<u64>,
    /// `γ(n)/n` for `n = 1..=D`.
    pub ratio: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<series::SlopeEstimate>,
    /// Smallest period of `dims` when it has at least 9 terms and one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan: Option<JordanGrowth>,
}

impl GrowthReport {
    pub fn holds(&self) -> bool {
        self.jordan.as_ref().map_or(true, |j| j.holds)
    }
}

/// Growth function, slope estimate and, for Lie examples with a Jordan
/// double, the inequalities between `γ_L` and `γ_J` (double built to `3D - 1`).
/// Without an explicit window the slope is fitted on `[max(2, D/2), D]`
/// when that window is valid.
pub fn growth_report<F: Field>(spec: &ExampleSpec, window: Option<[usize; 2]>) -> Result<GrowthReport> {
    let table = example_dims::<F>(spec)?;
    let gamma = crate::generate::growth_function(&table);
    let d = table.d as usize;
    let slope = match window {
        Some(w) => Some(series::gk_slope(&gamma, w)?),
        None if d >= 3 => series::gk_slope(&gamma, [(d / 2).max(2), d]).ok(),
        None => None,
    };
    let dims = table.total_dims();
    let period = crate::generate::periodicity_probe(&dims).ok().flatten();
    let jordan = match jordan_double_dims::<F>(spec, 3 * spec.d - 1)? {
        Some(j) => {
            let gj = series::jordan_growth(&j);
            let inequalities = series::growth_inequalities(&gamma, &gj);
            let holds = inequalities.iter().all(|r| r.holds);
            Some(JordanGrowth { d: j.d, gamma: gj, inequalities, holds })
        }
        None => None,
    };
    Ok(GrowthReport {
        schema_version: SCHEMA_VERSION,
        algebra: spec.name.clone(),
        field: F::label(),
        n: spec.n,
        d: spec.d,
        reliable_degree: table.reliable_degree,
        ratio: (1..=d).map(|n| gamma[n] as f64 / n as f64).collect(),
        dims,
        gamma,
        slope,
        period,
        jordan,
    })
}

/// Dimensions of the components flagged reliable at both truncations that
/// disagree between `N` and `N + 2`.
pub fn stability_diff(a: &DimensionTable, b: &DimensionTable) -> Vec<(Vec<u32>, usize, usize)> {
    let index = |t: &DimensionTable| -> BTreeMap<Vec<u32>, (usize, bool)> {
        t.components.iter().map(|c| (c.deg.clone(), (c.dim, c.reliable))).collect()
    };
    let (ia, ib) = (index(a), index(b));
    let window = a.reliable_degree.min(b.reliable_degree).min(a.d).min(b.d);
    let mut keys: Vec<&Vec<u32>> = ia.keys().chain(ib.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|k| k.iter().sum::<u32>() <= window)
        .filter_map(|k| {
            let (da, ra) = ia.get(k).copied().unwrap_or((0, true));
            let (db, rb) = ib.get(k).copied().unwrap_or((0, true));
            (ra && rb && da != db).then(|| (k.clone(), da, db))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::text::format_lincomb;

    type Q = Rational;

    #[test]
    fn pivot_v_truncations() {
        let vars = VarTable::standard(6).unwrap();
        assert_eq!(format_lincomb(&pivot_v_terms::<Q>(0, 2), &vars), "1 * d0");
        assert_eq!(format_lincomb(&pivot_v_terms::<Q>(1, 5), &vars), "1 * d1 + 1 * x1^ x2^ d3");
        assert_eq!(
            format_lincomb(&pivot_v_terms::<Q>(0, 6), &vars),
            "1 * d0 + 1 * x0^ x1^ d2 + 1 * x0^ x1^ x2^ x3^ d4"
        );
        assert_eq!(pivot_v_terms::<Q>(0, 6).parity(), Some(1));
    }

    #[test]
    fn pivot_v_acts_on_x0() {
        let vars = VarTable::standard(8).unwrap();
        let v0 = pivot_v::<Q>(&vars, 0).unwrap();
        let x0 = crate::grassmann::GrassmannElement::var(vars.clone(), 0).unwrap();
        assert_eq!(v0.apply(&x0).unwrap().to_string(), "1");
        let x4 = crate::grassmann::GrassmannElement::var(vars.clone(), 4).unwrap();
        assert_eq!(v0.apply(&x4).unwrap().to_string(), "1 * x0^ x1^ x2^ x3^");
    }

    #[test]
    fn pivot_letters_by_hand() {
        let vars = VarTable::triples(3).unwrap();
        // y0 x0 = -x0 y0
        assert_eq!(
            format_lincomb(&pivot_abc_terms::<Q>(Letter::A, 0, 2), &vars),
            "1 * dx0 - 1 * x0^ y0^ dx1"
        );
        assert_eq!(
            format_lincomb(&pivot_abc_terms::<Q>(Letter::B, 0, 2), &vars),
            "1 * dy0 - 1 * y0^ z0^ dy1"
        );
        assert_eq!(
            format_lincomb(&pivot_abc_terms::<Q>(Letter::C, 0, 2), &vars),
            "1 * dz0 + 1 * x0^ z0^ dz1"
        );
        assert_eq!(format_lincomb(&pivot_abc_terms::<Q>(Letter::A, 0, 1), &vars), "1 * dx0");
        let a1 = pivot_abc_terms::<Q>(Letter::A, 0, 3);
        assert_eq!(
            a1.coeff(&DerTerm::new(Monomial::from_indices(&[0, 1, 3, 4]), 6)),
            Some(&Q::from_i64(1))
        );
    }

    #[test]
    fn poisson_letters_by_hand() {
        let vars = VarTable::poisson_triples(2).unwrap();
        assert_eq!(
            format_lincomb(&poisson_abc_terms::<Q>(Letter::A, 0, 2), &vars),
            "1 * X0^ - 1 * x0^ y0^ X1^"
        );
        let h = poisson_carrier::<Q>(2).unwrap();
        let a0 = poisson_abc_terms::<Q>(Letter::A, 0, 2);
        let x0 = LinComb::basis(Monomial::var(0));
        let lead = LinComb::basis(Monomial::var(3));
        assert_eq!(h.bracket_terms(&lead, &x0), LinComb::basis(Monomial::ONE));
        assert_eq!(h.bracket_terms(&a0, &x0), LinComb::basis(Monomial::ONE));
    }

    #[test]
    fn shift_examples() {
        let d0: LinComb<DerTerm, Q> = LinComb::basis(DerTerm::new(Monomial::ONE, 0));
        assert_eq!(shift_tau(&d0, 1, 4).unwrap(), LinComb::basis(DerTerm::new(Monomial::ONE, 1)));
        let x3: LinComb<Monomial, Q> = LinComb::basis(Monomial::var(3));
        assert_eq!(shift_tau(&x3, 1, 4), Err(Error::Overflow { index: 4, n: 4 }));
        assert!(shift_check_v::<Q>(0, 10).unwrap().holds);
    }

    #[test]
    fn shift_commutes_with_brackets() {
        let n = 12;
        let u = pivot_v_terms::<Q>(0, n - 1);
        let w = pivot_v_terms::<Q>(1, n - 1);
        let lhs = shift_tau(&derivation_bracket_terms(&u, &w), 1, n).unwrap();
        let rhs = derivation_bracket_terms(&shift_tau(&u, 1, n).unwrap(), &shift_tau(&w, 1, n).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn recursions_hold() {
        for r in recursion_check::<Q>(RecursionFamily::R, 12).unwrap() {
            assert!(r.holds, "{}", r.identity);
        }
        for r in recursion_check::<Q>(RecursionFamily::Q, 5).unwrap() {
            assert!(r.holds, "{}: {} vs {}", r.identity, r.lhs, r.rhs);
        }
        for r in recursion_check::<Q>(RecursionFamily::P, 5).unwrap() {
            assert!(r.holds, "{}: {} vs {}", r.identity, r.lhs, r.rhs);
        }
    }

    #[test]
    fn pivot_square() {
        for n in 0..3 {
            for r in pivot_square_check::<Q>(n, n + 10).unwrap() {
                assert!(r.holds, "{}: {} vs {}", r.identity, r.lhs, r.rhs);
            }
        }
    }

    #[test]
    fn m11() {
        let (b, rep) = m11_check::<Q>().unwrap();
        assert_eq!(rep.dimension, 4);
        assert!(rep.table_matches && rep.parity_matches, "{:?}", rep.mismatches);
        assert_eq!(dimension_table(&b, "M11").total_dims(), vec![2, 2, 0, 0]);
    }

    #[test]
    fn small_r_window() {
        let b = build_r::<Q>(12, 6).unwrap();
        let t = dimension_table(&b, "R");
        assert_eq!(t.total(1), 2);
        assert!(t.max_component_dim() <= 1);
    }

    #[test]
    fn example_names_round_trip() {
        for e in ExampleName::LISTED {
            assert_eq!(e.to_string().parse::<ExampleName>().unwrap(), e);
        }
        assert!("H9".parse::<ExampleName>().is_err());
        assert!("nope".parse::<ExampleName>().is_err());
        assert!(ExampleName::R.spec(Some(24), Some(0)).is_err());
        assert!(ExampleName::Q.spec(Some(25), None).is_err());
    }

    #[test]
    fn toy_and_empty_transfer() {
        let toy = series_bundle::<Q>(&ExampleName::Toy.spec(None, Some(4)).unwrap(), true).unwrap();
        assert_eq!(toy.hilbert.dense().unwrap(), vec![0, 2, 1, 0, 0]);
        let j = toy.jordan.unwrap();
        assert!(j.holds(), "{:?}", j.transfer);
        assert_eq!(j.direct.dense().unwrap()[..7], [1, 3, 2, 0, 1, 1, 0]);

        let empty = series_bundle::<Q>(&ExampleName::Empty.spec(None, Some(3)).unwrap(), true).unwrap();
        let j = empty.jordan.unwrap();
        assert!(j.holds());
        assert_eq!(j.direct.to_string(), "1 + t + O(deg 9)");
        assert!(j.transfer.gamma.iter().all(|r| r.gamma_j == [2, 2, 2]));
    }

    #[test]
    fn small_r_series_transfer() {
        let b = series_bundle::<Q>(&ExampleName::R.spec(Some(12), Some(6)).unwrap(), true).unwrap();
        let j = b.jordan.unwrap();
        assert!(j.holds(), "{:?}", j.transfer.diff);
        assert_eq!(j.transfer.window, 17);
        // γ_J(3) = 2 + 2 dim R_1
        assert_eq!(j.transfer.gamma[0].gamma_j[2], 6);
    }
}
