//! Canonical JSON and CSV renderings. Terms are emitted in ascending mask
//! order with decimal-string coefficients, so output is byte-stable.

use matchlattice_core::approx::RationalPoly;
use matchlattice_core::{FourierPoly, MCLattice, Result, SparseMultilinearPoly};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub mask: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyJson {
    pub n_vars: usize,
    pub basis: &'static str,
    pub terms: Vec<TermJson>,
}

fn hex(mask: u64) -> String {
    format!("0x{mask:X}")
}

fn build<'a, C: ToString + 'a>(n_vars: usize, basis: &'static str, terms: impl Iterator<Item = (&'a u64, &'a C)>) -> PolyJson {
    PolyJson {
        n_vars,
        basis,
        terms: terms.map(|(&m, c)| TermJson { mask: hex(m), coeff: c.to_string() }).collect(),
    }
}

pub fn poly_json(p: &SparseMultilinearPoly) -> PolyJson {
    build(p.n_vars(), "01", p.terms().iter())
}

pub fn fourier_json(p: &FourierPoly) -> PolyJson {
    build(p.n_vars(), "pm1", p.terms().iter())
}

pub fn rational_json(p: &RationalPoly) -> PolyJson {
    build(p.n_vars(), "01", p.terms().iter())
}

impl PolyJson {
    pub fn to_text(&self) -> String {
        let mut out = format!("n_vars={} basis={} terms={}\n", self.n_vars, self.basis, self.terms.len());
        for t in &self.terms {
            out.push_str(&format!("{} {}\n", t.mask, t.coeff));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        to_csv(&self.terms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McRecord {
    pub n: usize,
    pub mask: String,
    pub chi: usize,
    pub rank: usize,
    pub permanent: u64,
}

/// One record per matching-covered graph, ascending mask order (0̂ excluded).
pub fn mc_records(lattice: &MCLattice) -> Result<Vec<McRecord>> {
    lattice
        .mc_elements()
        .map(|g| {
            Ok(McRecord {
                n: lattice.n(),
                mask: hex(g.mask()),
                chi: g.cyclomatic(),
                rank: lattice.rank_of(&g)?,
                permanent: g.permanent(),
            })
        })
        .collect()
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable report")
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat record");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}
