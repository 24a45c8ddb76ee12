//! Verification suites over catalog examples, as run by `verify`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog::{self, ExampleName, ExampleSpec, RecursionFamily, RecursionReport};
use crate::doubles::{self, StructureTable, Hamiltonian, JordanAlgebra, KanKey, Kantor, PoissonAlgebra, TensorPoisson, TrivialPoisson, UnitKey, Wreath};
use crate::error::{Error, Result};
use crate::generate::{GradedBasis, SCHEMA_VERSION};
use crate::identities::{self as id, IdentityReport, PoissonHandle, ProductHandle, Sampling, SolvabilityReport};
use crate::lincomb::{Basis, LinComb};
use crate::operators::{ad_nil_index, derivation_bracket_terms, NilIndex};
use crate::scalar::Field;
use crate::text::ElementText;

/// Lie identities are checked on basis elements up to this total degree.
pub const LIE_DEGREE: u32 = 8;
/// Random Jordan quadruples are drawn from basis elements up to this degree.
pub const JORDAN_POOL_DEGREE: u32 = 24;
/// Random quadruples per Jordan check.
pub const JORDAN_SAMPLES: usize = 1000;
/// Random elements for `(a²)² = 0`.
pub const SQUARE_SQUARE_SAMPLES: usize = 500;
/// Components probed for `a²a = aa² = 0`.
pub const NIL_CUBE_DEGREE: u32 = 12;
/// Spanning set for the derived series.
pub const SOLVABLE_DEGREE: u32 = 8;
/// Truncation and size for the recursion identities.
pub const RECURSION_N: usize = 16;
pub const RECURSION_LEVELS: usize = 5;
pub const PIVOT_SQUARES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lie,
    Jordan,
    Poisson,
    Nil,
    Recursion,
    All,
}

impl Suite {
    const PARTS: [Suite; 5] = [Suite::Lie, Suite::Jordan, Suite::Poisson, Suite::Nil, Suite::Recursion];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Lie => "lie",
            Suite::Jordan => "jordan",
            Suite::Poisson => "poisson",
            Suite::Nil => "nil",
            Suite::Recursion => "recursion",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lie" => Suite::Lie,
            "jordan" => Suite::Jordan,
            "poisson" => Suite::Poisson,
            "nil" => Suite::Nil,
            "recursion" => Suite::Recursion,
            "all" => Suite::All,
            _ => return Err(Error::Config(format!("unknown suite `{s}` (lie, jordan, poisson, nil, recursion, all)"))),
        })
    }
}

/// Everything a verification run produced.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub algebra: String,
    pub field: String,
    pub seed: u64,
    pub identities: Vec<IdentityReport>,
    /// Checks of conjectured identities; reported, never part of the verdict.
    pub probes: Vec<IdentityReport>,
    pub solvability: Vec<SolvabilityReport>,
    pub recursions: Vec<RecursionReport>,
    /// Diagnostics that never decide the verdict.
    pub notes: BTreeMap<String, String>,
}

impl SuiteReport {
    fn new<F: Field>(suite: Suite, algebra: &str, seed: u64) -> Self {
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            algebra: algebra.into(),
            field: F::label(),
            seed,
            identities: vec![],
            probes: vec![],
            solvability: vec![],
            recursions: vec![],
            notes: BTreeMap::new(),
        }
    }

    /// Every identity holds on its sample, every derived series reaches zero
    /// within three squarings, and every recursion holds.
    pub fn holds(&self) -> bool {
        self.identities.iter().all(IdentityReport::holds)
            && self.solvability.iter().all(|s| s.length.is_some_and(|l| l <= 3))
            && self.recursions.iter().all(|r| r.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// One line per check.
    pub fn summary(&self) -> Vec<String> {
        let mut out: Vec<String> = self.identities.iter().map(IdentityReport::summary).collect();
        out.extend(self.probes.iter().map(|p| format!("probe: {}", p.summary())));
        for s in &self.solvability {
            let verdict = match s.length {
                Some(l) => format!("solvable of length {l}"),
                None => "not solvable within the steps taken".into(),
            };
            out.push(format!("derived series on {}: dims {:?}, {verdict}", s.algebra, s.dims));
        }
        for r in &self.recursions {
            out.push(format!("{} at N = {}: {}", r.identity, r.n, if r.holds { "holds" } else { "FAILS" }));
        }
        out.extend(self.notes.iter().map(|(k, v)| format!("note: {k}: {v}")));
        out
    }
}

/// Runs `suite` on the example; errors if no part of the suite applies.
pub fn run_suite<F: Field>(suite: Suite, spec: &ExampleSpec, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new::<F>(suite, &spec.name, seed);
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    let mut applied = false;
    for part in parts {
        applied |= match part {
            Suite::Lie => lie_part::<F>(spec, seed, &mut rep)?,
            Suite::Jordan => jordan_part::<F>(spec, seed, &mut rep)?,
            Suite::Poisson => poisson_part::<F>(spec, &mut rep)?,
            Suite::Nil => nil_part::<F>(spec, seed, &mut rep)?,
            Suite::Recursion => recursion_part::<F>(&mut rep)?,
            Suite::All => unreachable!("expanded above"),
        };
    }
    if !applied {
        return Err(Error::Config(format!("suite `{suite}` does not apply to {}", spec.name)));
    }
    Ok(rep)
}

fn pool<K: Basis, F: Field>(b: &GradedBasis<K, F>, max_total: u32) -> Vec<LinComb<K, F>> {
    id::basis_pool(b, max_total.min(b.reliable_total_degree()), [])
}

fn finite_pool<K: Basis, F: Field>(keys: Option<Vec<K>>) -> Vec<LinComb<K, F>> {
    keys.unwrap_or_default().into_iter().map(LinComb::basis).collect()
}

fn lie_checks<K: Basis, F: Field>(h: &ProductHandle<'_, K, F>, pool: &[LinComb<K, F>], seed: u64, rep: &mut SuiteReport) -> Result<()> {
    rep.identities.push(id::check_super_anticomm(h, pool, Sampling::Auto { seed })?);
    rep.identities.push(id::check_super_jacobi(h, pool, Sampling::Auto { seed })?);
    Ok(())
}

fn lie_part<F: Field>(spec: &ExampleSpec, seed: u64, rep: &mut SuiteReport) -> Result<bool> {
    let d = spec.d.min(LIE_DEGREE);
    match spec.example {
        ExampleName::R | ExampleName::Q => {
            let b = if spec.example == ExampleName::R {
                catalog::build_r::<F>(spec.n, d)?
            } else {
                catalog::build_q::<F>(spec.n / 3, d)?
            };
            let h = ProductHandle::new(spec.name.clone(), derivation_bracket_terms).with_text(b.vars());
            lie_checks(&h, &pool(&b, d), seed, rep)?;
        }
        ExampleName::Toy => {
            let b = catalog::build_toy::<F>(d)?;
            let p = TrivialPoisson::from_lie_table(std::sync::Arc::new(doubles::toy_lie_table()));
            let h = ProductHandle::new("Toy", |a, b| p.lie_bracket(a, b));
            lie_checks(&h, &pool(&b, d), seed, rep)?;
        }
        ExampleName::H(k) => {
            let hk = Hamiltonian::<F>::new(k)?;
            let h = ProductHandle::new(format!("bracket of {}", hk.describe()), |a, b| hk.bracket(a, b)).with_text(hk.vars());
            lie_checks(&h, &finite_pool(hk.finite_basis()), seed, rep)?;
        }
        ExampleName::PQ => {
            let b = catalog::build_pq::<F>(spec.n / 6, d.min(3))?;
            let carrier = catalog::poisson_carrier::<F>(spec.n / 6)?;
            let h = ProductHandle::new("bracket of PQ", |a, b| carrier.bracket(a, b)).with_text(carrier.vars());
            lie_checks(&h, &pool(&b, d.min(3)), seed, rep)?;
        }
        _ => return Ok(false),
    }
    Ok(true)
}

fn jordan_checks<K: Basis, F: Field>(h: &ProductHandle<'_, K, F>, pool: &[LinComb<K, F>], seed: u64, rep: &mut SuiteReport) -> Result<()> {
    rep.identities.push(id::check_super_comm(h, pool, Sampling::Auto { seed })?);
    rep.identities.push(id::check_jordan_super(h, pool, Sampling::Random { count: JORDAN_SAMPLES, seed })?);
    Ok(())
}

fn with_unit<K: Basis, F: Field>(mut pool: Vec<LinComb<KanKey<UnitKey<K>>, F>>) -> Vec<LinComb<KanKey<UnitKey<K>>, F>> {
    pool.insert(0, LinComb::basis(KanKey::Plain(UnitKey::One)));
    pool
}

/// The Jordan double of a Lie example, with the truncation the example uses.
fn jor_of<F: Field>(spec: &ExampleSpec, d: u32) -> Result<Option<JorBasis<F>>> {
    Ok(match spec.example {
        ExampleName::JorR => Some(JorBasis::Der(catalog::build_jor_r(spec.n, d)?)),
        ExampleName::JorQ => Some(JorBasis::Der(catalog::build_jor_q(spec.n / 3, d)?)),
        ExampleName::Toy => Some(JorBasis::Table(catalog::build_jor_toy(3 * d - 1)?)),
        _ => None,
    })
}

enum JorBasis<F: Field> {
    Der(GradedBasis<catalog::JorKey, F>),
    Table(GradedBasis<KanKey<UnitKey<doubles::TableKey>>, F>),
}

fn jordan_part<F: Field>(spec: &ExampleSpec, seed: u64, rep: &mut SuiteReport) -> Result<bool> {
    if let ExampleName::KanH(k) = spec.example {
        let kan = Kantor::new(Hamiltonian::<F>::new(k)?);
        let vars = kan.poisson.vars().clone();
        let h = ProductHandle::from_jordan(&kan).with_text(&vars);
        jordan_checks(&h, &finite_pool(kan.finite_basis()), seed, rep)?;
        if k == 1 {
            let w = Wreath::new(Hamiltonian::<F>::new(1)?, Kantor::new(Hamiltonian::<F>::new(1)?))?;
            let h = ProductHandle::from_jordan(&w);
            let pool = finite_pool(w.finite_basis());
            rep.probes.push(id::check_jordan_super(&h, &pool, Sampling::Random { count: JORDAN_SAMPLES, seed })?);
        }
        return Ok(true);
    }
    match jor_of::<F>(spec, spec.d)? {
        Some(JorBasis::Der(b)) => {
            let p = TrivialPoisson::derivations();
            let h = ProductHandle::new(spec.name.clone(), |x, y| doubles::kantor_mul(&p, x, y))
                .with_show(|v| catalog::JorKey::format_element(v, b.vars()));
            jordan_checks(&h, &with_unit(pool(&b, JORDAN_POOL_DEGREE)), seed, rep)?;
        }
        Some(JorBasis::Table(b)) => {
            let p = TrivialPoisson::from_lie_table(std::sync::Arc::new(doubles::toy_lie_table()));
            let h = ProductHandle::new("Jor(Toy)", |x, y| doubles::kantor_mul(&p, x, y));
            jordan_checks(&h, &with_unit(pool(&b, JORDAN_POOL_DEGREE)), seed, rep)?;
        }
        None => return Ok(false),
    }
    Ok(true)
}

fn poisson_checks<K: Basis, F: Field>(p: &PoissonHandle<'_, K, F>, pool: &[LinComb<K, F>], seed: u64, rep: &mut SuiteReport) -> Result<()> {
    rep.identities.push(id::check_leibniz(p, pool, Sampling::Auto { seed })?);
    rep.identities.push(id::check_super_comm(&p.dot, pool, Sampling::Auto { seed })?);
    rep.identities.push(id::check_super_jacobi(&p.bracket, pool, Sampling::Auto { seed })?);
    Ok(())
}

fn poisson_part<F: Field>(spec: &ExampleSpec, rep: &mut SuiteReport) -> Result<bool> {
    let seed = rep.seed;
    match spec.example {
        ExampleName::H(k) => {
            let hk = Hamiltonian::<F>::new(k)?;
            let vars = hk.vars().clone();
            let show = move |v: &LinComb<_, F>| <crate::grassmann::Monomial as ElementText>::format_element(v, &vars);
            let p = PoissonHandle::from_poisson(&hk).with_show(show);
            poisson_checks(&p, &finite_pool(hk.finite_basis()), seed, rep)?;
            if k == 1 {
                let t = TensorPoisson { left: Hamiltonian::<F>::new(1)?, right: Hamiltonian::<F>::new(1)? };
                let p = PoissonHandle::from_poisson(&t);
                poisson_checks(&p, &finite_pool(t.finite_basis()), seed, rep)?;
            }
        }
        ExampleName::PQ => {
            let d = spec.d.min(3);
            let b = catalog::build_pq::<F>(spec.n / 6, d)?;
            let carrier = catalog::poisson_carrier::<F>(spec.n / 6)?;
            let vars = carrier.vars().clone();
            let show = move |v: &LinComb<_, F>| <crate::grassmann::Monomial as ElementText>::format_element(v, &vars);
            let p = PoissonHandle::from_poisson(&carrier).with_show(show);
            poisson_checks(&p, &pool(&b, d), seed, rep)?;
        }
        _ => return Ok(false),
    }
    Ok(true)
}

fn nil_checks<K: Basis, F: Field>(h: &ProductHandle<'_, KanKey<UnitKey<K>>, F>, b: &GradedBasis<KanKey<UnitKey<K>>, F>, seed: u64, rep: &mut SuiteReport) -> Result<()> {
    let sample = Sampling::Random { count: SQUARE_SQUARE_SAMPLES, seed };
    rep.identities.push(id::check_square_square(h, &pool(b, b.max_degree()), sample)?);
    rep.identities.push(id::check_homogeneous_nil_cube(h, b, NIL_CUBE_DEGREE.min(b.reliable_total_degree()))?);
    rep.solvability.push(id::derived_series(h, &pool(b, SOLVABLE_DEGREE), 3));
    Ok(())
}

fn nil_part<F: Field>(spec: &ExampleSpec, seed: u64, rep: &mut SuiteReport) -> Result<bool> {
    match spec.example {
        ExampleName::R | ExampleName::Q => {
            // ad-nilpotency can only be seen inside the truncation window, so
            // it is reported and never asserted
            let d = spec.d.min(3);
            let b = if spec.example == ExampleName::R {
                catalog::build_r::<F>(spec.n, spec.d)?
            } else {
                catalog::build_q::<F>(spec.n / 3, spec.d)?
            };
            for (deg, a) in b.elements_up_to(d) {
                let idx = match ad_nil_index(a, deg, &b, derivation_bracket_terms, 64) {
                    NilIndex::Index(k) => format!("(ad a)^{k} = 0 on the reliable window"),
                    NilIndex::Inconclusive => "inconclusive within the window".into(),
                };
                let name = <crate::operators::DerTerm as ElementText>::format_element(a, b.vars());
                rep.notes.insert(format!("ad-nil {name}"), idx);
            }
            return Ok(true);
        }
        _ => {}
    }
    match jor_of::<F>(spec, spec.d)? {
        Some(JorBasis::Der(b)) => {
            let p = TrivialPoisson::derivations();
            let h = ProductHandle::new(spec.name.clone(), |x, y| doubles::kantor_mul(&p, x, y))
                .with_show(|v| catalog::JorKey::format_element(v, b.vars()));
            nil_checks(&h, &b, seed, rep)?;
        }
        Some(JorBasis::Table(b)) => {
            let p = TrivialPoisson::from_lie_table(std::sync::Arc::new(doubles::toy_lie_table()));
            let h = ProductHandle::new("Jor(Toy)", |x, y| doubles::kantor_mul(&p, x, y));
            nil_checks(&h, &b, seed, rep)?;
        }
        None => return Ok(false),
    }
    Ok(true)
}

fn recursion_part<F: Field>(rep: &mut SuiteReport) -> Result<bool> {
    rep.recursions.extend(catalog::recursion_check::<F>(RecursionFamily::R, RECURSION_N)?);
    for i in 0..PIVOT_SQUARES {
        rep.recursions.extend(catalog::pivot_square_check::<F>(i, RECURSION_N)?);
    }
    rep.recursions.extend(catalog::recursion_check::<F>(RecursionFamily::Q, RECURSION_LEVELS)?);
    rep.recursions.extend(catalog::recursion_check::<F>(RecursionFamily::P, RECURSION_LEVELS)?);
    Ok(true)
}

/// Runs the table-based parts of `suite` on a Poisson superalgebra given by
/// structure constants: `lie` on its bracket, `poisson` on both products,
/// `jordan` on its Kantor double.
pub fn run_table_suite<F: Field>(suite: Suite, table: &StructureTable<F>, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new::<F>(suite, &table.name, seed);
    let name_of = |k: &doubles::TableKey| table.names[k.index as usize].clone();
    let show = |v: &LinComb<doubles::TableKey, F>| {
        let terms: Vec<String> = v.iter().map(|(k, c)| format!("{c}*{}", name_of(k))).collect();
        if terms.is_empty() { "0".into() } else { terms.join(" + ") }
    };
    let pool = finite_pool(table.finite_basis());
    if pool.is_empty() {
        return Err(Error::InvalidArgument("structure table has an empty basis".into()));
    }
    let parts = match suite {
        Suite::All => vec![Suite::Lie, Suite::Poisson, Suite::Jordan],
        Suite::Lie | Suite::Poisson | Suite::Jordan => vec![suite],
        _ => return Err(Error::Config(format!("suite `{suite}` does not apply to structure tables"))),
    };
    for part in parts {
        match part {
            Suite::Lie => {
                let h = ProductHandle::new(table.name.clone(), |a, b| table.bracket(a, b)).with_show(show);
                lie_checks(&h, &pool, seed, &mut rep)?;
            }
            Suite::Poisson => {
                if table.unit.is_none() {
                    rep.notes.insert("poisson".into(), "table has no unit; unit axioms not checked".into());
                }
                let p = PoissonHandle::from_poisson(table).with_show(show);
                poisson_checks(&p, &pool, seed, &mut rep)?;
            }
            _ => {
                let kan = Kantor::new(table.clone());
                let kpool = finite_pool(kan.finite_basis());
                let h = ProductHandle::from_jordan(&kan).with_show(|v: &LinComb<KanKey<doubles::TableKey>, F>| {
                    let terms: Vec<String> = v
                        .iter()
                        .map(|(k, c)| match k {
                            KanKey::Plain(t) => format!("{c}*{}", name_of(t)),
                            KanKey::Bar(t) => format!("{c}*bar({})", name_of(t)),
                        })
                        .collect();
                    if terms.is_empty() { "0".into() } else { terms.join(" + ") }
                });
                jordan_checks(&h, &kpool, seed, &mut rep)?;
            }
        }
    }
    Ok(rep)
}
