//! Textual element formats.
//!
//! A linear combination is written as signed terms `c * f1 f2 ...` joined by
//! ` + ` / ` - `. Grassmann variables carry a trailing `^` (`x3^`), partial
//! derivatives are written by their derivative name (`d1`, `dy0`), and
//! coefficients use `p/q` for rationals. `0` is the zero element.
//!
//! Double-algebra elements add `c*1` (unit), `c*1b` (barred unit) and
//! `b(<inner>)` (barred part) to the grammar.

use crate::error::{Error, Result};
use crate::grassmann::{mono_mul, Monomial, VarTable};
use crate::lincomb::{Basis, LinComb};
use crate::scalar::Field;

/// A basis label with a textual factor representation.
pub trait TermText: Basis {
    fn write_factors(&self, vars: &VarTable, out: &mut Vec<String>);

    /// Parses the factor tokens of one term. `Ok(None)` means the product of
    /// the factors vanishes (e.g. a repeated odd variable); otherwise the
    /// returned flag says whether reordering introduced a minus sign.
    fn parse_factors(tokens: &[&str], vars: &VarTable) -> Result<Option<(bool, Self)>>;
}

fn parse_var(tok: &str, vars: &VarTable) -> Result<usize> {
    let name = tok
        .strip_suffix('^')
        .ok_or_else(|| Error::Parse(format!("expected Grassmann variable, got `{tok}`")))?;
    vars.index_of(name)
        .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))
}

fn parse_deriv(tok: &str, vars: &VarTable) -> Result<usize> {
    vars.deriv_index_of(tok)
        .ok_or_else(|| Error::Parse(format!("unknown factor `{tok}`")))
}

/// Multiplies variables in the given order into a canonical monomial.
pub(crate) fn ordered_product(indices: &[usize]) -> Option<(bool, Monomial)> {
    let mut neg = false;
    let mut m = Monomial::ONE;
    for &i in indices {
        let (s, next) = mono_mul(m, Monomial::var(i))?;
        neg ^= s;
        m = next;
    }
    Some((neg, m))
}

pub(crate) fn split_factors<'a>(tokens: &[&'a str]) -> (Vec<&'a str>, Vec<&'a str>) {
    let k = tokens.iter().position(|t| !t.ends_with('^')).unwrap_or(tokens.len());
    (tokens[..k].to_vec(), tokens[k..].to_vec())
}

pub(crate) fn write_monomial(m: Monomial, vars: &VarTable, out: &mut Vec<String>) {
    out.extend(m.indices().map(|i| format!("{}^", vars.name(i))));
}

pub(crate) fn parse_monomial(tokens: &[&str], vars: &VarTable) -> Result<Option<(bool, Monomial)>> {
    let idx = tokens.iter().map(|t| parse_var(t, vars)).collect::<Result<Vec<_>>>()?;
    Ok(ordered_product(&idx))
}

pub(crate) fn parse_derivs(tokens: &[&str], vars: &VarTable) -> Result<Option<(bool, Monomial)>> {
    let idx = tokens.iter().map(|t| parse_deriv(t, vars)).collect::<Result<Vec<_>>>()?;
    Ok(ordered_product(&idx))
}

impl TermText for Monomial {
    fn write_factors(&self, vars: &VarTable, out: &mut Vec<String>) {
        write_monomial(*self, vars, out);
    }

    fn parse_factors(tokens: &[&str], vars: &VarTable) -> Result<Option<(bool, Self)>> {
        parse_monomial(tokens, vars)
    }
}

fn format_coeff<F: Field>(c: &F, first: bool) -> String {
    if c.is_negative_display() {
        let abs = -c.clone();
        if first {
            format!("-{abs}")
        } else {
            format!(" - {abs}")
        }
    } else if first {
        c.to_string()
    } else {
        format!(" + {c}")
    }
}

/// Writes a term with an explicit coefficient; `body` is appended after `*`.
fn push_term<F: Field>(out: &mut String, c: &F, body: &str, sep: &str) {
    let first = out.is_empty();
    out.push_str(&format_coeff(c, first));
    if !body.is_empty() {
        out.push_str(sep);
        out.push_str(body);
    }
}

pub fn format_lincomb<K: TermText, F: Field>(v: &LinComb<K, F>, vars: &VarTable) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in v {
        let mut factors = vec![];
        k.write_factors(vars, &mut factors);
        push_term(&mut out, c, &factors.join(" "), " * ");
    }
    out
}

/// One signed term of the input: sign, optional coefficient, factor tokens.
struct RawTerm<'a> {
    negative: bool,
    coeff: Option<&'a str>,
    factors: Vec<&'a str>,
}

fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut toks = vec![];
    let mut cur = String::new();
    let flush = |cur: &mut String, toks: &mut Vec<String>| {
        if !cur.is_empty() {
            toks.push(std::mem::take(cur));
        }
    };
    for ch in s.chars() {
        match ch {
            c if c.is_whitespace() => flush(&mut cur, &mut toks),
            '+' | '-' | '*' => {
                flush(&mut cur, &mut toks);
                toks.push(ch.to_string());
            }
            '^' => {
                cur.push('^');
                flush(&mut cur, &mut toks);
            }
            c if c.is_ascii_alphanumeric() || c == '/' || c == '_' => cur.push(c),
            c => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    flush(&mut cur, &mut toks);
    Ok(toks)
}

fn looks_numeric(t: &str) -> bool {
    t.bytes().next().is_some_and(|b| b.is_ascii_digit())
}

fn split_terms(toks: &[String]) -> Result<Vec<RawTerm<'_>>> {
    let mut terms = vec![];
    let mut i = 0;
    if toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    while i < toks.len() {
        let mut negative = false;
        let mut saw_sign = false;
        while i < toks.len() && (toks[i] == "+" || toks[i] == "-") {
            negative ^= toks[i] == "-";
            saw_sign = true;
            i += 1;
        }
        if !saw_sign && !terms.is_empty() {
            return Err(Error::Parse(format!("missing `+`/`-` before `{}`", toks[i])));
        }
        let start = i;
        while i < toks.len() && toks[i] != "+" && toks[i] != "-" {
            i += 1;
        }
        let body = &toks[start..i];
        if body.is_empty() {
            return Err(Error::Parse("dangling sign".into()));
        }
        let (coeff, rest) = if looks_numeric(&body[0]) {
            match body.get(1).map(String::as_str) {
                Some("*") => {
                    if body.len() == 2 {
                        return Err(Error::Parse("`*` without factors".into()));
                    }
                    (Some(body[0].as_str()), &body[2..])
                }
                _ => (Some(body[0].as_str()), &body[1..]),
            }
        } else {
            (None, body)
        };
        if rest.iter().any(|t| t == "*") {
            return Err(Error::Parse("unexpected `*`".into()));
        }
        terms.push(RawTerm { negative, coeff, factors: rest.iter().map(String::as_str).collect() });
    }
    Ok(terms)
}

pub fn parse_lincomb<K: TermText, F: Field>(s: &str, vars: &VarTable) -> Result<LinComb<K, F>> {
    let toks = tokenize(s)?;
    let mut out = LinComb::zero();
    for t in split_terms(&toks)? {
        let mut c = match t.coeff {
            Some(c) => F::parse(c)?,
            None => F::one(),
        };
        if t.negative {
            c = -c;
        }
        if c.is_zero() && t.factors.is_empty() {
            continue;
        }
        if let Some((neg, k)) = K::parse_factors(&t.factors, vars)? {
            out.add_term(k, if neg { -c } else { c });
        }
    }
    Ok(out)
}

/// Whole-element text form; plain terms use [`format_lincomb`], double
/// algebras use the `c*1 + ... + c*1b + b(...)` grammar.
pub trait ElementText: Basis {
    fn format_element<F: Field>(v: &LinComb<Self, F>, vars: &VarTable) -> String;
    fn parse_element<F: Field>(s: &str, vars: &VarTable) -> Result<LinComb<Self, F>>;
}

impl<T: TermText> ElementText for T {
    fn format_element<F: Field>(v: &LinComb<Self, F>, vars: &VarTable) -> String {
        format_lincomb(v, vars)
    }
    fn parse_element<F: Field>(s: &str, vars: &VarTable) -> Result<LinComb<Self, F>> {
        parse_lincomb(s, vars)
    }
}

/// Splits at top level (outside parentheses) into signed chunks.
fn split_top_level(s: &str) -> Result<Vec<(bool, String)>> {
    let mut parts = vec![];
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev_sig: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse("unbalanced `)`".into()));
                }
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && prev_sig != Some('*') && prev_sig != Some('/') => {
                if cur.trim().is_empty() {
                    if ch == '-' {
                        neg = !neg;
                    }
                } else {
                    parts.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                }
            }
            _ => cur.push(ch),
        }
        if !ch.is_whitespace() {
            prev_sig = Some(ch);
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced `(`".into()));
    }
    if cur.trim().is_empty() {
        if !parts.is_empty() || neg {
            return Err(Error::Parse("dangling sign".into()));
        }
    } else {
        parts.push((neg, cur));
    }
    if parts.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    Ok(parts)
}

/// A piece of a double-algebra element.
pub(crate) enum DoublePiece<K: Basis, F: Field> {
    Unit(F),
    UnitBar(F),
    Plain(LinComb<K, F>),
    Bar(LinComb<K, F>),
}

pub(crate) fn parse_double_pieces<K: TermText, F: Field>(
    s: &str,
    vars: &VarTable,
) -> Result<Vec<DoublePiece<K, F>>> {
    let mut pieces = vec![];
    for (neg, chunk) in split_top_level(s)? {
        let chunk = chunk.trim();
        let flip = |c: F| if neg { -c } else { c };
        let flipv = |v: LinComb<K, F>| if neg { -v } else { v };
        if let Some(inner) = chunk.strip_prefix("b(") {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse("unterminated `b(`".into()))?;
            pieces.push(DoublePiece::Bar(flipv(parse_lincomb(inner, vars)?)));
        } else if let Some(c) = chunk.strip_suffix("*1b") {
            pieces.push(DoublePiece::UnitBar(flip(F::parse(c)?)));
        } else if let Some(c) = chunk.strip_suffix("*1") {
            pieces.push(DoublePiece::Unit(flip(F::parse(c)?)));
        } else if chunk.contains('(') || chunk.contains(')') {
            return Err(Error::Parse(format!("unexpected parenthesis in `{chunk}`")));
        } else {
            pieces.push(DoublePiece::Plain(flipv(parse_lincomb(chunk, vars)?)));
        }
    }
    Ok(pieces)
}

pub(crate) fn format_double_pieces<K: TermText, F: Field>(
    unit: Option<&F>,
    plain: &LinComb<K, F>,
    unit_bar: Option<&F>,
    bar: &LinComb<K, F>,
    vars: &VarTable,
) -> String {
    let mut out = String::new();
    let sep = |out: &mut String| {
        if !out.is_empty() {
            out.push_str(" + ");
        }
    };
    if let Some(c) = unit {
        sep(&mut out);
        out.push_str(&format!("{c}*1"));
    }
    if !plain.is_zero() {
        sep(&mut out);
        out.push_str(&format_lincomb(plain, vars));
    }
    if let Some(c) = unit_bar {
        sep(&mut out);
        out.push_str(&format!("{c}*1b"));
    }
    if !bar.is_zero() {
        sep(&mut out);
        out.push_str(&format!("b({})", format_lincomb(bar, vars)));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational};

    type Q = Rational;

    #[test]
    fn grassmann_round_trip() {
        let vars = VarTable::standard(6).unwrap();
        let s = "3/2 * x0^ x3^ - 1 * x5^ + 7";
        let v: LinComb<Monomial, Q> = parse_lincomb(s, &vars).unwrap();
        assert_eq!(v.len(), 3);
        let printed = format_lincomb(&v, &vars);
        assert_eq!(printed, "7 - 1 * x5^ + 3/2 * x0^ x3^");
        let again: LinComb<Monomial, Q> = parse_lincomb(&printed, &vars).unwrap();
        assert_eq!(again, v);
    }

    #[test]
    fn reordering_and_vanishing() {
        let vars = VarTable::standard(4).unwrap();
        let v: LinComb<Monomial, Q> = parse_lincomb("x1^ x0^", &vars).unwrap();
        assert_eq!(v, LinComb::term(Monomial::from_indices(&[0, 1]), -Q::one()));
        let z: LinComb<Monomial, Q> = parse_lincomb("2 * x1^ x1^", &vars).unwrap();
        assert!(z.is_zero());
        let z: LinComb<Monomial, Q> = parse_lincomb("0", &vars).unwrap();
        assert!(z.is_zero());
        let compact: LinComb<Monomial, Q> = parse_lincomb("-x0^x1^+2*x2^", &vars).unwrap();
        assert_eq!(compact.len(), 2);
    }

    #[test]
    fn rejects_garbage() {
        let vars = VarTable::standard(4).unwrap();
        for bad in ["", "+", "x9^", "1 *", "x0^ 2", "1 * * x0^", "x0^ x1^ -", "(x0^)", "q^", "1/0 * x0^", "x0^ x1^ x2^ 3"] {
            let r: Result<LinComb<Monomial, Q>> = parse_lincomb(bad, &vars);
            assert!(r.is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn prime_field_coefficients() {
        let vars = VarTable::standard(2).unwrap();
        let v: LinComb<Monomial, Fp<7>> = parse_lincomb("-1 * x0^", &vars).unwrap();
        assert_eq!(format_lincomb(&v, &vars), "6 * x0^");
    }
}
