//! JSON records and CSV/text renderings of results.

use std::fmt::Write as _;

use pstwalk_core::cones::CylindricalNoPst;
use pstwalk_core::partitions::EquitablePartition;
use pstwalk_core::products::ConditionReport;
use pstwalk_core::pst::{
    FidelitySeries, NumericVerdict, PiMultiple, PstCertificate, ScanResult, TableRow,
};
use serde::{Deserialize, Serialize};

/// `a·π/b · scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactTime {
    pub a: i64,
    pub b: i64,
    pub scale: f64,
}

impl From<PiMultiple> for ExactTime {
    fn from(t: PiMultiple) -> Self {
        Self {
            a: t.num,
            b: t.den,
            scale: t.scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub verdict: String,
    pub time_num: Option<f64>,
    pub time_exact: Option<ExactTime>,
    pub support: Vec<usize>,
    pub signs: Vec<u8>,
    pub reason: String,
}

impl From<&PstCertificate> for CertificateRecord {
    fn from(c: &PstCertificate) -> Self {
        Self {
            verdict: c.verdict.as_str().into(),
            time_num: c.time.map(|t| t.value()),
            time_exact: c.time.map(ExactTime::from),
            support: c.support.clone(),
            signs: c.signs.clone(),
            reason: c.reason.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub expected: String,
    pub verdict: String,
    pub time_num: Option<f64>,
    pub time_exact: Option<ExactTime>,
    pub support: Vec<usize>,
    pub signs: Vec<u8>,
    pub reason: String,
    pub method: String,
    pub fmax: Option<f64>,
    pub matches: bool,
}

impl From<&TableRow> for TableRecord {
    fn from(r: &TableRow) -> Self {
        Self {
            name: r.name.clone(),
            source: r.source,
            target: r.target,
            expected: r.expected.as_str().into(),
            verdict: r.observed.as_str().into(),
            time_num: r.time.map(|t| t.value()),
            time_exact: r.time.map(ExactTime::from),
            support: r.certificate.support.clone(),
            signs: r.certificate.signs.clone(),
            reason: r.certificate.reason.clone(),
            method: r.method.clone(),
            fmax: r.fmax,
            matches: r.matches,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub source: usize,
    pub target: usize,
    pub t_max: f64,
    pub steps: usize,
    pub t_star: f64,
    pub fmax: f64,
    pub verdict: String,
}

impl ScanRecord {
    pub fn new(source: usize, target: usize, t_max: f64, steps: usize, r: &ScanResult) -> Self {
        let verdict = match r.verdict() {
            NumericVerdict::Pst => "pst",
            NumericVerdict::Inconclusive => "inconclusive",
            NumericVerdict::NoPst => "no-pst",
        };
        Self {
            source,
            target,
            t_max,
            steps,
            t_star: r.t_star,
            fmax: r.fmax,
            verdict: verdict.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

pub fn series_points(s: &FidelitySeries) -> Vec<FidelityPoint> {
    s.times
        .iter()
        .zip(&s.amplitudes)
        .map(|(&t, z)| FidelityPoint {
            t,
            re: z.re,
            im: z.im,
            abs: z.norm(),
        })
        .collect()
}

pub fn series_csv(s: &FidelitySeries) -> String {
    let mut out = String::from("t,re,im,abs\n");
    for p in series_points(s) {
        writeln!(
            out,
            "{:.17e},{:.17e},{:.17e},{:.17e}",
            p.t, p.re, p.im, p.abs
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub integral: bool,
}

pub fn spectrum_csv(eigenvalues: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, l) in eigenvalues.iter().enumerate() {
        writeln!(out, "{i},{l:.17e}").unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub name: String,
    pub value: f64,
    pub p: Option<i64>,
    pub q: Option<i64>,
    pub class: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub condition: String,
    pub holds: bool,
    pub witness: Vec<f64>,
    pub ratios: Vec<RatioRecord>,
    pub time_num: Option<f64>,
    pub time_exact: Option<ExactTime>,
    pub secondary: Option<bool>,
    pub detail: String,
}

impl ConditionRecord {
    pub fn new(condition: &str, r: &ConditionReport) -> Self {
        Self {
            condition: condition.into(),
            holds: r.holds,
            witness: r.witness.clone(),
            ratios: r
                .ratios
                .iter()
                .map(|x| RatioRecord {
                    name: x.name.clone(),
                    value: x.value,
                    p: x.class.map(|c| c.p),
                    q: x.class.map(|c| c.q),
                    class: x.class.map(|c| c.class.to_string()),
                })
                .collect(),
            time_num: r.time.map(|t| t.value()),
            time_exact: r.time.map(ExactTime::from),
            secondary: r.secondary,
            detail: r.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylindricalRecord {
    pub condition: String,
    pub n: u64,
    pub k: u64,
    pub m: u64,
    pub verdict: String,
    pub case: String,
    pub descent_steps: u32,
    pub requirements: Vec<String>,
    pub product_argument: String,
    pub witness: Option<String>,
    pub instance_trace: Option<String>,
    pub trace: Vec<String>,
}

impl From<&CylindricalNoPst> for CylindricalRecord {
    fn from(p: &CylindricalNoPst) -> Self {
        Self {
            condition: "cylcone".into(),
            n: p.n,
            k: p.k,
            m: p.m,
            verdict: p.verdict.as_str().into(),
            case: format!("{:?}", p.case),
            descent_steps: p.descent_steps,
            requirements: p.requirements.clone(),
            product_argument: p.product_argument.clone(),
            witness: p.witness.as_ref().map(|(name, c)| format!("{name} = {c}")),
            instance_trace: p.instance_trace.clone(),
            trace: p.trace.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseRecord {
    pub cells: Vec<Vec<usize>>,
    pub degrees: Vec<Vec<f64>>,
    pub quotient: String,
    pub intertwining_residual: f64,
    pub max_deviation: Option<f64>,
}

/// `cell <j>: v v v` per line.
pub fn partition_text(p: &EquitablePartition) -> String {
    let mut out = String::new();
    for (j, cell) in p.cells().iter().enumerate() {
        let vs: Vec<String> = cell.iter().map(usize::to_string).collect();
        writeln!(out, "cell {j}: {}", vs.join(" ")).unwrap();
    }
    out
}

pub fn table_text(rows: &[TableRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let time = r.time.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "{:<52} {:>3} -> {:<3} expected {:<3} observed {:<7} t = {:<14} {} [{}]",
            r.name,
            r.source,
            r.target,
            r.expected.as_str(),
            r.observed.as_str(),
            time,
            if r.matches { "ok" } else { "MISMATCH" },
            r.method
        )
        .unwrap();
    }
    out
}
