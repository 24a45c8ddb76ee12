//! Properties every parser and decoder must satisfy on arbitrary input:
//! never panic, and whatever is accepted survives a print/parse round trip.
//! Shared by the fuzz targets and by the corpus replay test in the core crate.
#![allow(dead_code)]

use std::str::FromStr;

use superalg::catalog::JorKey;
use superalg::doubles::{KanKey, StructureTable};
use superalg::generate::GradedBasis;
use superalg::grassmann::{Monomial, VarTable};
use superalg::operators::{DerTerm, OpTerm};
use superalg::scalar::{Field, FieldSpec, Fp, Rational};
use superalg::series::TruncatedSeries;
use superalg::text::ElementText;

fn round_trip<K: ElementText, F: Field>(s: &str, vars: &VarTable) {
    if let Ok(v) = K::parse_element::<F>(s, vars) {
        let text = K::format_element(&v, vars);
        let back = K::parse_element::<F>(&text, vars).expect("printed element parses");
        assert_eq!(back, v, "round trip of {text:?}");
    }
}

fn elements<F: Field>(s: &str, vars: &VarTable) {
    round_trip::<Monomial, F>(s, vars);
    round_trip::<OpTerm, F>(s, vars);
    round_trip::<DerTerm, F>(s, vars);
    round_trip::<KanKey<Monomial>, F>(s, vars);
    round_trip::<JorKey, F>(s, vars);
}

pub fn parse_element(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for vars in [VarTable::standard(8), VarTable::triples(2)].into_iter().flatten() {
        elements::<Rational>(s, &vars);
        elements::<Fp<7>>(s, &vars);
    }
}

fn basis<K: ElementText>(s: &str) {
    if let Ok(b) = GradedBasis::<K, Rational>::from_json(s) {
        let text = b.to_json();
        let back = GradedBasis::<K, Rational>::from_json(&text).expect("written basis loads");
        assert_eq!(back.to_json(), text);
    }
}

pub fn graded_basis_json(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    basis::<DerTerm>(s);
    basis::<OpTerm>(s);
    basis::<Monomial>(s);
}

fn table<F: Field>(s: &str) {
    if let Ok(t) = StructureTable::<F>::from_json(s) {
        let back = StructureTable::<F>::from_json(&t.to_json()).expect("written table loads");
        assert_eq!(back, t);
    }
}

pub fn structure_table_json(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    table::<Rational>(s);
    table::<Fp<7>>(s);
}

pub fn series_json(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = TruncatedSeries::from_json(s) {
        let back = TruncatedSeries::from_json(&t.to_json()).expect("written series loads");
        assert_eq!(back, t);
        let _ = t.to_string();
    }
}

fn scalar<F: Field>(s: &str) {
    if let Ok(x) = F::parse(s) {
        assert_eq!(F::parse(&x.to_string()).expect("printed scalar parses"), x);
    }
}

pub fn scalar_parse(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = FieldSpec::from_str(s) {
        assert_eq!(FieldSpec::from_str(&f.label()).expect("label parses"), f);
    }
    scalar::<Rational>(s);
    scalar::<Fp<7>>(s);
    scalar::<Fp<2147483647>>(s);
}
