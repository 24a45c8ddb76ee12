//! Truncated Hilbert series, the transfer formula from a Lie superalgebra
//! `L` to its Jordan double, growth comparisons and slope estimates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{growth_function, DimensionTable, GradedBasis, SCHEMA_VERSION};
use crate::lincomb::Basis;
use crate::scalar::Field;

/// Integer series in one or two variables, possibly with negative exponents.
/// Coefficients are exact for total exponent `<= truncation`; terms above it
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SeriesRecord", try_from = "SeriesRecord")]
pub struct TruncatedSeries {
    variables: usize,
    truncation: i64,
    coeffs: BTreeMap<Vec<i64>, i64>,
}

#[derive(Clone, Serialize, Deserialize)]
struct TermRecord {
    exp: Vec<i64>,
    coeff: i64,
}

#[derive(Clone, Serialize, Deserialize)]
struct SeriesRecord {
    schema_version: u32,
    variables: usize,
    truncation: i64,
    terms: Vec<TermRecord>,
}

impl TruncatedSeries {
    pub fn zero(variables: usize, truncation: i64) -> Result<Self> {
        if !(1..=2).contains(&variables) {
            return Err(Error::InvalidArgument(format!("series have 1 or 2 variables, not {variables}")));
        }
        Ok(TruncatedSeries { variables, truncation, coeffs: BTreeMap::new() })
    }

    /// Univariate series from `coeffs[k]` = coefficient of `t^k`.
    pub fn from_coeffs(coeffs: &[i64], truncation: i64) -> Self {
        let mut s = TruncatedSeries { variables: 1, truncation, coeffs: BTreeMap::new() };
        for (k, &c) in coeffs.iter().enumerate() {
            s.add(vec![k as i64], c);
        }
        s
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Adds `c·t^exp`; terms above the truncation are dropped.
    pub fn add(&mut self, exp: Vec<i64>, c: i64) {
        debug_assert_eq!(exp.len(), self.variables);
        if c == 0 || exp.iter().sum::<i64>() > self.truncation {
            return;
        }
        let e = self.coeffs.entry(exp.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: &[i64]) -> i64 {
        self.coeffs.get(exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, i64)> {
        self.coeffs.iter().map(|(e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lowest_total(&self) -> Option<i64> {
        self.coeffs.keys().map(|e| e.iter().sum()).min()
    }

    /// Substitute `t1 = t2 = t`.
    pub fn collapse(&self) -> TruncatedSeries {
        let mut out = TruncatedSeries { variables: 1, truncation: self.truncation, coeffs: BTreeMap::new() };
        for (e, c) in self.terms() {
            out.add(vec![e.iter().sum()], c);
        }
        out
    }

    /// Univariate coefficients for exponents `0..=truncation`.
    pub fn dense(&self) -> Result<Vec<i64>> {
        if self.variables != 1 {
            return Err(Error::InvalidArgument("dense form needs a univariate series".into()));
        }
        if self.lowest_total().is_some_and(|l| l < 0) {
            return Err(Error::InvalidArgument("series has negative exponents".into()));
        }
        Ok((0..=self.truncation.max(-1)).map(|k| self.coeff(&[k])).collect())
    }

    /// Both series restricted to the smaller truncation.
    pub fn truncate(&self, truncation: i64) -> TruncatedSeries {
        let mut out = TruncatedSeries { variables: self.variables, truncation, coeffs: BTreeMap::new() };
        for (e, c) in self.terms() {
            out.add(e.clone(), c);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("series JSON: {e}")))
    }
}

impl From<TruncatedSeries> for SeriesRecord {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRecord {
            schema_version: SCHEMA_VERSION,
            variables: s.variables,
            truncation: s.truncation,
            terms: s.terms().map(|(e, c)| TermRecord { exp: e.clone(), coeff: c }).collect(),
        }
    }
}

impl TryFrom<SeriesRecord> for TruncatedSeries {
    type Error = Error;

    fn try_from(rec: SeriesRecord) -> Result<Self> {
        if rec.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", rec.schema_version)));
        }
        let mut out = Self::zero(rec.variables, rec.truncation).map_err(|e| Error::Parse(e.to_string()))?;
        for t in rec.terms {
            if t.exp.len() != rec.variables {
                return Err(Error::Parse("exponent length differs from the number of variables".into()));
            }
            if t.exp.iter().sum::<i64>() > rec.truncation {
                return Err(Error::Parse("term above the truncation".into()));
            }
            out.add(t.exp, t.coeff);
        }
        Ok(out)
    }
}

/// `1 + 3t + 2t^2 + O(t^9)`, or `t1*t2^2 + ...` in two variables.
impl std::fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let (neg, a) = (c < 0, c.abs());
            if i == 0 {
                out.push_str(if neg { "-" } else { "" });
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let names: &[&str] = if self.variables == 1 { &["t"] } else { &["t1", "t2"] };
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(&k, _)| k != 0)
                .map(|(&k, n)| if k == 1 { n.to_string() } else { format!("{n}^{k}") })
                .collect();
            match (a, mono.is_empty()) {
                (_, true) => write!(out, "{a}")?,
                (1, false) => out.push_str(&mono.join("*")),
                _ => write!(out, "{a}*{}", mono.join("*"))?,
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out} + O(deg {})", self.truncation + 1)
    }
}

/// Number of series variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variables {
    /// By total degree.
    One,
    /// `(sum of all coordinates but the last, last coordinate)`; for a Jordan
    /// double this is (degree in `X`, degree in `1̄`).
    Two,
}

/// Hilbert series of a graded basis, exact up to its reliable total degree.
/// Degree 0 is not part of generated bases; add units with [`TruncatedSeries::add`].
pub fn hilbert<K: Basis, F: Field>(b: &GradedBasis<K, F>, variables: Variables) -> TruncatedSeries {
    let truncation = b.reliable_total_degree().min(b.max_degree()) as i64;
    let n = match variables {
        Variables::One => 1,
        Variables::Two => 2,
    };
    let mut s = TruncatedSeries { variables: n, truncation, coeffs: BTreeMap::new() };
    for (deg, comp) in b.components() {
        let c = deg.coords();
        let exp = match variables {
            Variables::One => vec![deg.total() as i64],
            Variables::Two => {
                let (last, rest) = c.split_last().expect("gradings have rank >= 1");
                vec![rest.iter().map(|&x| x as i64).sum(), *last as i64]
            }
        };
        s.add(exp, comp.dim() as i64);
    }
    s
}

/// Univariate Hilbert series from a dimension table.
pub fn hilbert_from_table(table: &DimensionTable) -> TruncatedSeries {
    let truncation = table.reliable_degree.min(table.d) as i64;
    let mut s = TruncatedSeries { variables: 1, truncation, coeffs: BTreeMap::new() };
    for t in &table.totals {
        s.add(vec![t.degree as i64], t.dim as i64);
    }
    s
}

fn check_transfer_input(hl: &TruncatedSeries) -> Result<()> {
    if hl.variables != 1 {
        return Err(Error::InvalidArgument("the transfer takes a univariate series of L".into()));
    }
    if hl.lowest_total().is_some_and(|l| l <= 0) {
        return Err(Error::InvalidArgument("H(L,t) must have zero constant term and no negative powers".into()));
    }
    Ok(())
}

/// `H(J,t) = 1 + t + (1/t + 1/t²) H(L,t³)`, exact up to `3·D_L - 1`.
pub fn jordan_transfer(hl: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_transfer_input(hl)?;
    let truncation = 3 * hl.truncation - 1;
    let mut out = TruncatedSeries { variables: 1, truncation: truncation.max(1), coeffs: BTreeMap::new() };
    out.add(vec![0], 1);
    out.add(vec![1], 1);
    for (e, c) in hl.terms() {
        out.add(vec![3 * e[0] - 1], c);
        out.add(vec![3 * e[0] - 2], c);
    }
    Ok(out)
}

/// `H(J,t1,t2) = 1 + t2 + (1/t2 + 1/t2²) H(L, t1·t2²)`, exact up to total
/// degree `3·D_L - 1`.
pub fn jordan_transfer_bivariate(hl: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_transfer_input(hl)?;
    let truncation = 3 * hl.truncation - 1;
    let mut out = TruncatedSeries { variables: 2, truncation: truncation.max(1), coeffs: BTreeMap::new() };
    out.add(vec![0, 0], 1);
    out.add(vec![0, 1], 1);
    for (e, c) in hl.terms() {
        let n = e[0];
        out.add(vec![n, 2 * n - 1], c);
        out.add(vec![n, 2 * n - 2], c);
    }
    Ok(out)
}

/// The three counting identities at one `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRow {
    pub m: u32,
    pub gamma_l: u64,
    pub dim_l: u64,
    /// `γ_J(3m-2), γ_J(3m-1), γ_J(3m)`, counted directly.
    pub gamma_j: [u64; 3],
    /// The same three values from the formulas.
    pub expected: [u64; 3],
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub schema_version: u32,
    /// Coefficients compared for exponents `0..=window`.
    pub window: i64,
    pub formula: Vec<i64>,
    pub direct: Vec<i64>,
    /// `(exponent, formula, direct)` wherever they differ.
    pub diff: Vec<(i64, i64, i64)>,
    pub gamma: Vec<GammaRow>,
    pub holds: bool,
}

/// Growth of a Jordan double including its unit: `γ_J(n) = 1 + Σ_{1<=k<=n} dim J_k`.
pub fn jordan_growth(j: &DimensionTable) -> Vec<u64> {
    growth_function(j).into_iter().map(|g| g + 1).collect()
}

/// Compares the transfer formula with directly counted dimensions of the
/// Jordan double, coefficientwise and through the growth identities
/// `γ_J(3m) = γ_J(3m-1) = 2 + 2γ_L(m)`, `γ_J(3m-2) = 2 + 2γ_L(m) - dim L_m`.
pub fn transfer_consistency(l: &DimensionTable, j: &DimensionTable) -> Result<TransferReport> {
    let hl = hilbert_from_table(l);
    let formula = jordan_transfer(&hl)?;
    let mut direct = hilbert_from_table(j);
    direct.add(vec![0], 1);
    let window = formula.truncation.min(direct.truncation);
    let (f, d) = (formula.truncate(window).dense()?, direct.truncate(window).dense()?);
    let diff = (0..=window)
        .filter(|&k| f[k as usize] != d[k as usize])
        .map(|k| (k, f[k as usize], d[k as usize]))
        .collect::<Vec<_>>();
    let gl = growth_function(l);
    let gj = jordan_growth(j);
    let mut gamma = Vec::new();
    let mut m = 1u32;
    while (3 * m as i64) <= window && (m as usize) < gl.len() {
        let g = gl[m as usize];
        let dim_l = l.total(m) as u64;
        let gamma_j = [gj[3 * m as usize - 2], gj[3 * m as usize - 1], gj[3 * m as usize]];
        let expected = [2 + 2 * g - dim_l, 2 + 2 * g, 2 + 2 * g];
        gamma.push(GammaRow { m, gamma_l: g, dim_l, gamma_j, expected, holds: gamma_j == expected });
        m += 1;
    }
    let holds = diff.is_empty() && gamma.iter().all(|r| r.holds);
    Ok(TransferReport { schema_version: SCHEMA_VERSION, window, formula: f, direct: d, diff, gamma, holds })
}

/// The inequalities `γ_J(n) <= 2 + 2γ_L(n)` and `γ_L(n) <= γ_J(3n)` at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub gamma_l: u64,
    pub gamma_j: u64,
    pub gamma_j_3n: u64,
    pub holds: bool,
}

/// Checks both inequalities for every `n >= 1` with `3n` inside `gamma_j`.
pub fn growth_inequalities(gamma_l: &[u64], gamma_j: &[u64]) -> Vec<GrowthRow> {
    (1..gamma_l.len())
        .take_while(|&n| 3 * n < gamma_j.len())
        .map(|n| {
            let (gl, gj, gj3) = (gamma_l[n], gamma_j[n], gamma_j[3 * n]);
            GrowthRow { n, gamma_l: gl, gamma_j: gj, gamma_j_3n: gj3, holds: gj <= 2 + 2 * gl && gl <= gj3 }
        })
        .collect()
}

/// Least-squares slope of `ln γ(n)` against `ln n` over a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub window: [usize; 2],
    pub slope: f64,
}

/// `gamma[n]` is `γ(n)`; the window `[n0, n1]` must satisfy `2 <= n0 < n1 < len`.
pub fn gk_slope(gamma: &[u64], window: [usize; 2]) -> Result<SlopeEstimate> {
    let [n0, n1] = window;
    if n0 < 2 || n1 <= n0 || n1 >= gamma.len() {
        return Err(Error::InvalidArgument(format!(
            "slope window [{n0}, {n1}] must satisfy 2 <= n0 < n1 <= {}",
            gamma.len().saturating_sub(1)
        )));
    }
    if let Some(n) = (n0..=n1).find(|&n| gamma[n] == 0) {
        return Err(Error::InvalidArgument(format!("γ({n}) = 0 inside the slope window")));
    }
    let pts: Vec<(f64, f64)> = (n0..=n1).map(|n| ((n as f64).ln(), (gamma[n] as f64).ln())).collect();
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(SlopeEstimate { window, slope: sxy / sxx })
}
