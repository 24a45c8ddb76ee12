//! Graded closure of generator sets under a bilinear product.
//!
//! Components are processed in increasing total degree; within one total
//! degree the targets are independent and are closed concurrently. Each
//! component is stored in reduced echelon form, so the output depends only on
//! the spans and never on scheduling.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::echelon::{rank, Echelon};
use crate::error::{Error, Result};
use crate::grassmann::{VarLayout, VarTable};
use crate::lincomb::{Basis, LinComb};
use crate::scalar::Field;
use crate::text::ElementText;

pub const SCHEMA_VERSION: u32 = 1;

/// Occurrence counts of each generator. Ordered by total degree, then
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(coords: Vec<u32>) -> Self {
        MultiDegree(coords)
    }

    /// The `i`-th unit vector of length `k`.
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        MultiDegree(v)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        MultiDegree(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiDegree)
    }
}

impl Ord for MultiDegree {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.total().cmp(&o.total()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for MultiDegree {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// How the closure is organised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationMode {
    /// Components keyed by multidegree; requires products to respect it.
    Multidegree,
    /// Cumulative word-length filtration: component `t` holds the canonical
    /// complement of the span of words of length `< t` inside that of length
    /// `<= t`. Used when the generators satisfy non-homogeneous relations.
    Filtered,
}

/// Which products feed a new component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureStrategy {
    /// Products of all pairs of lower components.
    AllPairs,
    /// Only products `g * b` with `g` a generator. Spans the same space for
    /// Lie and associative closures, since left-normed words suffice.
    GeneratorsOnly,
}

#[derive(Clone, Debug)]
pub struct GenerateOptions {
    pub max_degree: u32,
    /// Width of the index band dropped by the reliability projection.
    pub margin: usize,
    pub mode: GenerationMode,
    pub strategy: ClosureStrategy,
    /// The product is super-(anti)commutative, so `(b, a)` repeats `(a, b)`.
    pub symmetric: bool,
}

impl GenerateOptions {
    pub fn lie(max_degree: u32, margin: usize) -> Self {
        GenerateOptions {
            max_degree,
            margin,
            mode: GenerationMode::Multidegree,
            strategy: ClosureStrategy::AllPairs,
            symmetric: true,
        }
    }

    pub fn assoc(max_degree: u32, margin: usize) -> Self {
        GenerateOptions { symmetric: false, ..Self::lie(max_degree, margin) }
    }
}

#[derive(Clone, Debug)]
pub struct Generator<K: Basis, F: Field> {
    pub name: String,
    pub element: LinComb<K, F>,
    pub degree: MultiDegree,
}

impl<K: Basis, F: Field> Generator<K, F> {
    pub fn new(name: impl Into<String>, element: LinComb<K, F>, degree: MultiDegree) -> Self {
        Generator { name: name.into(), element, degree }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component<K: Basis, F: Field> {
    pub elements: Vec<LinComb<K, F>>,
    /// Projection away from the top `margin` indices keeps the full rank.
    pub reliable: bool,
}

impl<K: Basis, F: Field> Component<K, F> {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Echelonized graded basis of a generated subalgebra.
#[derive(Clone, Debug)]
pub struct GradedBasis<K: Basis, F: Field> {
    vars: Arc<VarTable>,
    generators: Vec<(String, MultiDegree)>,
    max_degree: u32,
    margin: usize,
    mode: GenerationMode,
    components: BTreeMap<MultiDegree, Component<K, F>>,
}

impl<K: Basis, F: Field> PartialEq for GradedBasis<K, F> {
    fn eq(&self, o: &Self) -> bool {
        self.vars == o.vars
            && self.generators == o.generators
            && self.max_degree == o.max_degree
            && self.margin == o.margin
            && self.mode == o.mode
            && self.components == o.components
    }
}

impl<K: Basis, F: Field> GradedBasis<K, F> {
    /// Assembles a basis from precomputed components; reliability flags are
    /// recomputed.
    pub fn from_components(
        vars: Arc<VarTable>,
        generators: Vec<(String, MultiDegree)>,
        max_degree: u32,
        margin: usize,
        mode: GenerationMode,
        components: BTreeMap<MultiDegree, Vec<LinComb<K, F>>>,
    ) -> Self {
        let n = vars.len();
        let components = components
            .into_iter()
            .filter(|(_, els)| !els.is_empty())
            .map(|(d, els)| {
                let reliable = projection_keeps_rank(&els, n, margin);
                (d, Component { elements: els, reliable })
            })
            .collect();
        GradedBasis { vars, generators, max_degree, margin, mode, components }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    /// The truncation `N`.
    pub fn truncation(&self) -> usize {
        self.vars.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn mode(&self) -> GenerationMode {
        self.mode
    }

    pub fn generators(&self) -> &[(String, MultiDegree)] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.first().map_or(1, |g| g.1.len())
    }

    /// Nonempty components in increasing multidegree order.
    pub fn components(&self) -> impl Iterator<Item = (&MultiDegree, &Component<K, F>)> {
        self.components.iter()
    }

    pub fn component(&self, d: &MultiDegree) -> Option<&Component<K, F>> {
        self.components.get(d)
    }

    pub fn dim(&self, d: &MultiDegree) -> usize {
        self.component(d).map_or(0, Component::dim)
    }

    /// Total dimension in total degree `t`.
    pub fn total_dim(&self, t: u32) -> usize {
        self.components
            .iter()
            .filter(|(d, _)| d.total() == t)
            .map(|(_, c)| c.dim())
            .sum()
    }

    /// Largest `t <= D` such that every component of total degree `<= t` is
    /// reliable.
    pub fn reliable_total_degree(&self) -> u32 {
        self.components
            .iter()
            .find(|(_, c)| !c.reliable)
            .map_or(self.max_degree, |(d, _)| d.total() - 1)
    }

    /// Whether a degree lies in the window where truncation is trusted.
    /// Degrees without a component count as reliable below the first
    /// unreliable total degree.
    pub fn is_reliable_degree(&self, d: &[u32]) -> bool {
        let t: u32 = d.iter().sum();
        if t > self.reliable_total_degree() {
            return false;
        }
        self.components.get(&MultiDegree(d.to_vec())).map_or(true, |c| c.reliable)
    }

    /// All basis elements with their degrees, in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = (&MultiDegree, &LinComb<K, F>)> {
        self.components.iter().flat_map(|(d, c)| c.elements.iter().map(move |e| (d, e)))
    }

    /// Basis elements of total degree `<= t`.
    pub fn elements_up_to(&self, t: u32) -> Vec<(&MultiDegree, &LinComb<K, F>)> {
        self.elements().filter(|(d, _)| d.total() <= t).collect()
    }
}

fn projection_keeps_rank<K: Basis, F: Field>(els: &[LinComb<K, F>], n: usize, margin: usize) -> bool {
    let cut = n.saturating_sub(margin);
    let projected: Vec<_> = els.iter().map(|e| e.filter(|k| k.within(cut))).collect();
    rank(&projected) == els.len()
}

fn validate<K: Basis, F: Field>(
    vars: &VarTable,
    gens: &[Generator<K, F>],
    opts: &GenerateOptions,
) -> Result<()> {
    if opts.max_degree < 1 {
        return Err(Error::InvalidArgument("maximal degree D must be at least 1".into()));
    }
    let Some(first) = gens.first() else {
        return Err(Error::InvalidArgument("no generators".into()));
    };
    for g in gens {
        if g.degree.len() != first.degree.len() {
            return Err(Error::InvalidArgument("generator degrees differ in length".into()));
        }
        if g.degree.total() == 0 {
            return Err(Error::InvalidArgument(format!("generator {} has degree zero", g.name)));
        }
        if !g.element.is_homogeneous() {
            return Err(Error::InvalidArgument(format!(
                "generator {} is not homogeneous in parity",
                g.name
            )));
        }
        if let Some(m) = g.element.max_index() {
            if m >= vars.len() {
                return Err(Error::Overflow { index: m, n: vars.len() });
            }
        }
    }
    Ok(())
}

/// Closure of `gens` under `product` up to total degree `D`.
pub fn generate<K, F, P>(
    vars: Arc<VarTable>,
    gens: &[Generator<K, F>],
    product: P,
    opts: &GenerateOptions,
) -> Result<GradedBasis<K, F>>
where
    K: Basis,
    F: Field,
    P: Fn(&LinComb<K, F>, &LinComb<K, F>) -> LinComb<K, F> + Sync,
{
    generate_multi(vars, gens, |a, b| vec![product(a, b)], opts)
}

/// Closure under several bilinear products at once (`products(a, b)` returns
/// one value per product); all of them must be additive in the degree.
pub fn generate_multi<K, F, P>(
    vars: Arc<VarTable>,
    gens: &[Generator<K, F>],
    products: P,
    opts: &GenerateOptions,
) -> Result<GradedBasis<K, F>>
where
    K: Basis,
    F: Field,
    P: Fn(&LinComb<K, F>, &LinComb<K, F>) -> Vec<LinComb<K, F>> + Sync,
{
    validate(&vars, gens, opts)?;
    let comps = match opts.mode {
        GenerationMode::Multidegree => close_graded(gens, &products, opts),
        GenerationMode::Filtered => close_filtered(gens, &products, opts),
    };
    let meta = gens.iter().map(|g| (g.name.clone(), g.degree.clone())).collect();
    Ok(GradedBasis::from_components(vars, meta, opts.max_degree, opts.margin, opts.mode, comps))
}

type Comps<K, F> = BTreeMap<MultiDegree, Vec<LinComb<K, F>>>;

/// Index pairs `(a, b)` of existing elements whose product lands in `m`.
fn jobs_for<'a, K: Basis, F: Field>(
    m: &MultiDegree,
    comps: &'a Comps<K, F>,
    gens: &'a [Generator<K, F>],
    opts: &GenerateOptions,
) -> Vec<(&'a LinComb<K, F>, &'a LinComb<K, F>)> {
    let mut jobs = vec![];
    match opts.strategy {
        ClosureStrategy::AllPairs => {
            for (m1, b1) in comps {
                if m1.total() >= m.total() {
                    break;
                }
                let Some(m2) = m.checked_sub(m1) else { continue };
                if opts.symmetric && *m1 > m2 {
                    continue;
                }
                let Some(b2) = comps.get(&m2) else { continue };
                for (i, a) in b1.iter().enumerate() {
                    for (j, b) in b2.iter().enumerate() {
                        if opts.symmetric && *m1 == m2 && j < i {
                            continue;
                        }
                        jobs.push((a, b));
                    }
                }
            }
        }
        ClosureStrategy::GeneratorsOnly => {
            for g in gens {
                let Some(m2) = m.checked_sub(&g.degree) else { continue };
                if let Some(b2) = comps.get(&m2) {
                    jobs.extend(b2.iter().map(|b| (&g.element, b)));
                }
            }
        }
    }
    jobs
}

fn targets_at<K: Basis, F: Field>(
    t: u32,
    comps: &Comps<K, F>,
    gens: &[Generator<K, F>],
    opts: &GenerateOptions,
) -> BTreeSet<MultiDegree> {
    let mut out: BTreeSet<_> = gens.iter().filter(|g| g.degree.total() == t).map(|g| g.degree.clone()).collect();
    let lefts: Vec<&MultiDegree> = match opts.strategy {
        ClosureStrategy::AllPairs => comps.keys().collect(),
        ClosureStrategy::GeneratorsOnly => gens.iter().map(|g| &g.degree).collect(),
    };
    for m1 in lefts {
        for m2 in comps.keys() {
            if m1.total() + m2.total() == t {
                out.insert(m1.add(m2));
            }
        }
    }
    out
}

fn close_graded<K, F, P>(gens: &[Generator<K, F>], product: &P, opts: &GenerateOptions) -> Comps<K, F>
where
    K: Basis,
    F: Field,
    P: Fn(&LinComb<K, F>, &LinComb<K, F>) -> Vec<LinComb<K, F>> + Sync,
{
    let mut comps: Comps<K, F> = BTreeMap::new();
    for t in 1..=opts.max_degree {
        let targets: Vec<_> = targets_at(t, &comps, gens, opts).into_iter().collect();
        let done: Vec<(MultiDegree, Vec<LinComb<K, F>>)> = targets
            .par_iter()
            .map(|m| {
                let jobs = jobs_for(m, &comps, gens, opts);
                let products: Vec<_> = jobs.par_iter().flat_map_iter(|(a, b)| product(a, b)).collect();
                let mut ech = Echelon::new();
                for g in gens.iter().filter(|g| &g.degree == m) {
                    ech.insert(&g.element);
                }
                for p in &products {
                    ech.insert(p);
                }
                (m.clone(), ech.into_rows())
            })
            .collect();
        for (m, rows) in done {
            if !rows.is_empty() {
                comps.insert(m, rows);
            }
        }
    }
    comps
}

fn close_filtered<K, F, P>(gens: &[Generator<K, F>], product: &P, opts: &GenerateOptions) -> Comps<K, F>
where
    K: Basis,
    F: Field,
    P: Fn(&LinComb<K, F>, &LinComb<K, F>) -> Vec<LinComb<K, F>> + Sync,
{
    let level = |t: u32| MultiDegree(vec![t]);
    let gens: Vec<Generator<K, F>> = gens
        .iter()
        .map(|g| Generator::new(g.name.clone(), g.element.clone(), level(g.degree.total())))
        .collect();
    let mut comps: Comps<K, F> = BTreeMap::new();
    let mut global: Echelon<K, F> = Echelon::new();
    for t in 1..=opts.max_degree {
        let m = level(t);
        let jobs = jobs_for(&m, &comps, &gens, opts);
        let products: Vec<_> = jobs.par_iter().flat_map_iter(|(a, b)| product(a, b)).collect();
        let old: BTreeSet<K> = global.pivots().cloned().collect();
        for g in gens.iter().filter(|g| g.degree == m) {
            global.insert(&g.element);
        }
        for p in &products {
            global.insert(p);
        }
        let rows: Vec<_> = global
            .pivots()
            .zip(global.rows())
            .filter(|(p, _)| !old.contains(p))
            .map(|(_, r)| r.clone())
            .collect();
        if !rows.is_empty() {
            comps.insert(m, rows);
        }
    }
    comps
}

/// Lie superalgebra generated by superderivations.
pub fn generate_lie<F: Field>(
    vars: Arc<VarTable>,
    gens: &[Generator<crate::operators::DerTerm, F>],
    opts: &GenerateOptions,
) -> Result<GradedBasis<crate::operators::DerTerm, F>> {
    generate(vars, gens, crate::operators::derivation_bracket_terms, opts)
}

/// Associative (non-unital) algebra generated by operators.
pub fn generate_assoc<F: Field>(
    vars: Arc<VarTable>,
    gens: &[Generator<crate::operators::OpTerm, F>],
    opts: &GenerateOptions,
) -> Result<GradedBasis<crate::operators::OpTerm, F>> {
    generate(vars, gens, crate::operators::compose_terms, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDim {
    pub deg: Vec<u32>,
    pub dim: usize,
    pub reliable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalDim {
    pub degree: u32,
    pub dim: usize,
    pub reliable: bool,
}

/// Exact dimensions per multidegree and per total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionTable {
    pub schema_version: u32,
    pub algebra: String,
    pub field: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub grading: String,
    pub components: Vec<ComponentDim>,
    pub totals: Vec<TotalDim>,
    /// Largest total-degree dimension over degrees `>= 1`.
    pub width: usize,
    pub reliable_degree: u32,
}

impl DimensionTable {
    pub fn total(&self, t: u32) -> usize {
        self.totals.iter().find(|r| r.degree == t).map_or(0, |r| r.dim)
    }

    /// Dimensions of total degrees `1..=D`.
    pub fn total_dims(&self) -> Vec<usize> {
        (1..=self.d).map(|t| self.total(t)).collect()
    }

    /// Set of values taken by the total-degree dimensions on `from..=to`.
    pub fn value_set(&self, from: u32, to: u32) -> BTreeSet<usize> {
        (from..=to).map(|t| self.total(t)).collect()
    }

    pub fn max_component_dim(&self) -> usize {
        self.components.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,degree,dim,reliable\n");
        for c in &self.components {
            let deg: Vec<String> = c.deg.iter().map(u32::to_string).collect();
            out.push_str(&format!("component,{},{},{}\n", deg.join(" "), c.dim, c.reliable));
        }
        for t in &self.totals {
            out.push_str(&format!("total,{},{},{}\n", t.degree, t.dim, t.reliable));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} over {} (N = {}, D = {}, {} grading)\n",
            self.algebra, self.field, self.n, self.d, self.grading
        );
        for t in &self.totals {
            let flag = if t.reliable { "" } else { "  (unreliable)" };
            out.push_str(&format!("  degree {:>3}: {}{}\n", t.degree, t.dim, flag));
        }
        out.push_str(&format!("  width: {}\n", self.width));
        out
    }
}

pub fn grading_label(rank: usize, mode: GenerationMode) -> String {
    match mode {
        GenerationMode::Filtered => "filtered".into(),
        GenerationMode::Multidegree if rank == 1 => "total".into(),
        GenerationMode::Multidegree => format!("Z{rank}"),
    }
}

pub fn dimension_table<K: Basis, F: Field>(b: &GradedBasis<K, F>, algebra: &str) -> DimensionTable {
    let reliable_degree = b.reliable_total_degree();
    let components = b
        .components()
        .map(|(d, c)| ComponentDim { deg: d.coords().to_vec(), dim: c.dim(), reliable: c.reliable })
        .collect();
    let totals: Vec<TotalDim> = (1..=b.max_degree())
        .map(|t| TotalDim { degree: t, dim: b.total_dim(t), reliable: t <= reliable_degree })
        .collect();
    DimensionTable {
        schema_version: SCHEMA_VERSION,
        algebra: algebra.into(),
        field: F::label(),
        n: b.truncation(),
        d: b.max_degree(),
        grading: grading_label(b.rank(), b.mode()),
        width: totals.iter().map(|t| t.dim).max().unwrap_or(0),
        components,
        totals,
        reliable_degree,
    }
}

/// `γ(n) = Σ_{k<=n} dim_k` for `n = 0..=D` (no unit, so `γ(0) = 0`).
pub fn growth_function(table: &DimensionTable) -> Vec<u64> {
    let mut acc = 0u64;
    let mut out = vec![0];
    for t in 1..=table.d {
        acc += table.total(t) as u64;
        out.push(acc);
    }
    out
}

/// Smallest `p <= L/3` with `dims[i] = dims[i+p]` on the whole sequence.
pub fn periodicity_probe<T: PartialEq>(dims: &[T]) -> Result<Option<usize>> {
    if dims.len() < 9 {
        return Err(Error::InvalidArgument(format!(
            "periodicity probe needs at least 9 terms, got {}",
            dims.len()
        )));
    }
    Ok((1..=dims.len() / 3).find(|&p| (0..dims.len() - p).all(|i| dims[i] == dims[i + p])))
}

#[derive(Serialize, Deserialize)]
struct GeneratorRecord {
    name: String,
    degree: MultiDegree,
}

#[derive(Serialize, Deserialize)]
struct ComponentRecord {
    deg: MultiDegree,
    reliable: bool,
    elements: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct BasisRecord {
    schema_version: u32,
    field: String,
    variables: VarLayout,
    generators: Vec<GeneratorRecord>,
    #[serde(rename = "D")]
    d: u32,
    margin: usize,
    mode: GenerationMode,
    components: Vec<ComponentRecord>,
}

impl<K: ElementText, F: Field> GradedBasis<K, F> {
    /// Cacheable JSON form; elements use the text format.
    pub fn to_json(&self) -> String {
        let rec = BasisRecord {
            schema_version: SCHEMA_VERSION,
            field: F::label(),
            variables: self.vars.layout(),
            generators: self
                .generators
                .iter()
                .map(|(n, d)| GeneratorRecord { name: n.clone(), degree: d.clone() })
                .collect(),
            d: self.max_degree,
            margin: self.margin,
            mode: self.mode,
            components: self
                .components
                .iter()
                .map(|(d, c)| ComponentRecord {
                    deg: d.clone(),
                    reliable: c.reliable,
                    elements: c.elements.iter().map(|e| K::format_element(e, &self.vars)).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("basis records always serialize")
    }

    /// Loads a cached basis, re-checking echelon form and reliability flags.
    pub fn from_json(s: &str) -> Result<Self> {
        let rec: BasisRecord =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("graded basis JSON: {e}")))?;
        if rec.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", rec.schema_version)));
        }
        if rec.field != F::label() {
            return Err(Error::Parse(format!("basis is over {}, expected {}", rec.field, F::label())));
        }
        let vars = VarTable::from_layout(rec.variables)?;
        let k = rec.generators.first().map_or(0, |g| g.degree.len());
        if rec.generators.iter().any(|g| g.degree.len() != k)
            || rec.components.iter().any(|c| c.deg.len() != k)
        {
            return Err(Error::Parse("inconsistent degree lengths".into()));
        }
        let mut comps = BTreeMap::new();
        for c in rec.components {
            let els = c
                .elements
                .iter()
                .map(|e| K::parse_element::<F>(e, &vars))
                .collect::<Result<Vec<_>>>()?;
            let mut ech = Echelon::new();
            for e in &els {
                if let Some(m) = e.max_index() {
                    if m >= vars.len() {
                        return Err(Error::Overflow { index: m, n: vars.len() });
                    }
                }
                ech.insert(e);
            }
            if ech.into_rows() != els {
                return Err(Error::Parse(format!("component {:?} is not in reduced echelon form", c.deg)));
            }
            if comps.insert(c.deg.clone(), els).is_some() {
                return Err(Error::Parse(format!("duplicate component {:?}", c.deg)));
            }
        }
        let generators = rec.generators.into_iter().map(|g| (g.name, g.degree)).collect();
        Ok(GradedBasis::from_components(vars, generators, rec.d, rec.margin, rec.mode, comps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::Monomial;
    use crate::operators::{compose_terms, derivation_bracket_terms, DerTerm, OpTerm};
    use crate::scalar::Rational;
    use crate::text;

    type Q = Rational;

    fn der(vars: &Arc<VarTable>, s: &str) -> LinComb<DerTerm, Q> {
        text::parse_lincomb(s, vars).unwrap()
    }

    #[test]
    fn single_odd_partial_is_one_dimensional() {
        let vars = VarTable::standard(4).unwrap();
        let gens = [Generator::new("d0", der(&vars, "d0"), MultiDegree::unit(1, 0))];
        let b = generate_lie(vars, &gens, &GenerateOptions::lie(6, 0)).unwrap();
        let t = dimension_table(&b, "toy");
        assert_eq!(t.total_dims(), vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(t.width, 1);
        assert_eq!(growth_function(&t), vec![0, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn nilpotent_multiplication_generator() {
        let vars = VarTable::standard(3).unwrap();
        let x0: LinComb<OpTerm, Q> = LinComb::basis(OpTerm::new(Monomial::var(0), Monomial::ONE));
        let gens = [Generator::new("x0", x0, MultiDegree::unit(1, 0))];
        let b = generate_assoc(vars, &gens, &GenerateOptions::assoc(5, 0)).unwrap();
        assert_eq!(dimension_table(&b, "x0").total_dims(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn heisenberg_like_closure() {
        // [d0 + x1^ d2, d1] = d2 up to sign, then everything vanishes
        let vars = VarTable::standard(4).unwrap();
        let gens = [
            Generator::new("a", der(&vars, "x1^ x3^ d2 + d0"), MultiDegree::unit(2, 0)),
            Generator::new("b", der(&vars, "d1"), MultiDegree::unit(2, 1)),
        ];
        let b = generate_lie(vars.clone(), &gens, &GenerateOptions::lie(4, 0)).unwrap();
        assert_eq!(b.dim(&MultiDegree::new(vec![1, 1])), 1);
        let bracket = derivation_bracket_terms(&gens[0].element, &gens[1].element);
        assert!(b.component(&MultiDegree::new(vec![1, 1])).unwrap().elements[0] == bracket
            || b.component(&MultiDegree::new(vec![1, 1])).unwrap().elements[0] == -&bracket);
    }

    #[test]
    fn strategies_agree_and_workers_do_not_matter() {
        let vars = VarTable::standard(8).unwrap();
        let gens = [
            Generator::new("u", der(&vars, "d0 + x0^ x1^ d2 + x0^ x1^ x2^ x3^ d4"), MultiDegree::unit(2, 0)),
            Generator::new("w", der(&vars, "d1 + x1^ x2^ d3 + x1^ x2^ x3^ x4^ d5"), MultiDegree::unit(2, 1)),
        ];
        let all = generate_lie(vars.clone(), &gens, &GenerateOptions::lie(7, 2)).unwrap();
        let opts = GenerateOptions { strategy: ClosureStrategy::GeneratorsOnly, ..GenerateOptions::lie(7, 2) };
        let left = generate_lie(vars.clone(), &gens, &opts).unwrap();
        assert_eq!(all, left);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| generate_lie(vars.clone(), &gens, &GenerateOptions::lie(7, 2)).unwrap());
        assert_eq!(serial.to_json(), all.to_json());
    }

    #[test]
    fn filtered_mode_handles_non_homogeneous_relations() {
        let vars = VarTable::standard(2).unwrap();
        let op = |s: &str| -> LinComb<OpTerm, Q> { text::parse_lincomb(s, &vars).unwrap() };
        let gens = [
            Generator::new("d0", op("d0"), MultiDegree::unit(2, 0)),
            Generator::new("x0", op("x0^"), MultiDegree::unit(2, 1)),
        ];
        let opts = GenerateOptions { mode: GenerationMode::Filtered, ..GenerateOptions::assoc(6, 0) };
        let b = generate(vars.clone(), &gens, compose_terms, &opts).unwrap();
        let dims = dimension_table(&b, "pair").total_dims();
        assert_eq!(dims, vec![2, 2, 0, 0, 0, 0]);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let vars = VarTable::standard(6).unwrap();
        let gens = [
            Generator::new("u", der(&vars, "d0 + x0^ x1^ d2"), MultiDegree::unit(2, 0)),
            Generator::new("w", der(&vars, "d1 + x1^ x2^ d3"), MultiDegree::unit(2, 1)),
        ];
        let b = generate_lie(vars, &gens, &GenerateOptions::lie(5, 1)).unwrap();
        let s = b.to_json();
        let back = GradedBasis::<DerTerm, Q>::from_json(&s).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.to_json(), s);
        assert!(GradedBasis::<DerTerm, crate::scalar::Fp<7>>::from_json(&s).is_err());
        assert!(GradedBasis::<DerTerm, Q>::from_json("{}").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let vars = VarTable::standard(3).unwrap();
        let g = [Generator::new("d0", der(&vars, "d0"), MultiDegree::unit(1, 0))];
        assert!(generate_lie(vars.clone(), &g, &GenerateOptions::lie(0, 0)).is_err());
        let mixed = [Generator::new("m", der(&vars, "d0 + x0^ d1"), MultiDegree::unit(1, 0))];
        assert!(generate_lie(vars.clone(), &mixed, &GenerateOptions::lie(3, 0)).is_err());
        assert!(generate_lie::<Q>(vars, &[], &GenerateOptions::lie(3, 0)).is_err());
    }

    #[test]
    fn periodicity_examples() {
        assert_eq!(periodicity_probe(&[3; 9]).unwrap(), Some(1));
        assert_eq!(periodicity_probe(&[2, 3, 2, 3, 2, 3, 2, 3, 2, 3]).unwrap(), Some(2));
        assert_eq!(periodicity_probe(&[1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap(), None);
        assert!(periodicity_probe(&[1, 1, 1]).is_err());
    }

    #[test]
    fn multidegree_order() {
        let a = MultiDegree::new(vec![2, 0]);
        let b = MultiDegree::new(vec![0, 3]);
        let c = MultiDegree::new(vec![1, 1]);
        assert!(a > c && b > a);
        assert_eq!(a.add(&c), MultiDegree::new(vec![3, 1]));
        assert_eq!(a.checked_sub(&c), None);
    }
}
