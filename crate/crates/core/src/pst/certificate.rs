//! Strong cospectrality and exact PST certificates.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::align::{align_phases, AlignmentOutcome, PiMultiple};
use super::scan::NUMERIC_PST;
use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::spectral::{
    default_group_tol, eigendecompose, spectral_projectors, EigenDecomposition, SpectralProjectors,
    TransferKernel,
};

/// Relation between `E_j|a>` and `E_j|b>` for one eigenspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CospectralSign {
    /// Both projections vanish.
    Unsupported,
    Plus,
    Minus,
}

impl CospectralSign {
    /// `σ_j`: 0 for `+`, 1 for `−`.
    pub fn bit(self) -> Option<u8> {
        match self {
            CospectralSign::Unsupported => None,
            CospectralSign::Plus => Some(0),
            CospectralSign::Minus => Some(1),
        }
    }
}

/// Per-eigenspace signs if `a` and `b` are strongly cospectral, else `None`.
pub fn strong_cospectrality(
    g: &Graph,
    a: VertexId,
    b: VertexId,
    tol: f64,
) -> Result<Option<Vec<CospectralSign>>> {
    let d = eigendecompose(g)?;
    let p = spectral_projectors(&d, default_group_tol(&d))?;
    strong_cospectrality_with(&p, a, b, tol, g.n())
}

pub fn strong_cospectrality_with(
    projectors: &SpectralProjectors,
    a: VertexId,
    b: VertexId,
    tol: f64,
    n: usize,
) -> Result<Option<Vec<CospectralSign>>> {
    let (a, b) = (a.check(n)?, b.check(n)?);
    let mut signs = Vec::with_capacity(projectors.groups.len());
    for group in &projectors.groups {
        let e = &group.projector;
        let (mut na, mut nb, mut diff, mut sum) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for r in 0..n {
            let (xa, xb) = (e[(r, a)], e[(r, b)]);
            na = na.max(xa.abs());
            nb = nb.max(xb.abs());
            diff = diff.max((xa - xb).abs());
            sum = sum.max((xa + xb).abs());
        }
        let sign = if na <= tol && nb <= tol {
            CospectralSign::Unsupported
        } else if diff <= tol {
            CospectralSign::Plus
        } else if sum <= tol {
            CospectralSign::Minus
        } else {
            return Ok(None);
        };
        signs.push(sign);
    }
    Ok(Some(signs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PstCertificate {
    pub verdict: Verdict,
    pub time: Option<PiMultiple>,
    /// Indices of supported eigenvalue clusters (descending eigenvalue order).
    pub support: Vec<usize>,
    pub support_eigenvalues: Vec<f64>,
    /// `σ_j` for each supported cluster.
    pub signs: Vec<u8>,
    pub reason: String,
    /// `|F(t*)|` evaluated on the full spectral sum when a time was found.
    pub fidelity_at_time: Option<f64>,
}

impl PstCertificate {
    fn no(reason: String) -> Self {
        Self {
            verdict: Verdict::No,
            time: None,
            support: Vec::new(),
            support_eigenvalues: Vec::new(),
            signs: Vec::new(),
            reason,
            fidelity_at_time: None,
        }
    }
}

/// Decides PST from `a` to `b` exactly when the supported spectrum reduces to
/// scaled integers; otherwise reports `Unknown`.
pub fn pst_certificate(g: &Graph, a: VertexId, b: VertexId) -> Result<PstCertificate> {
    let d = eigendecompose(g)?;
    pst_certificate_with(&d, a, b, integer_weight_unit(g))
}

/// A `c > 0` such that every weight of `g` is an integer multiple of `c`.
pub fn integer_weight_unit(g: &Graph) -> Option<f64> {
    let n = g.n();
    let weights: Vec<f64> = (0..n)
        .flat_map(|u| (u..n).map(move |v| (u, v)))
        .map(|(u, v)| g.weight(u, v))
        .filter(|w| *w != 0.0)
        .collect();
    let smallest = weights.iter().fold(f64::INFINITY, |m, w| m.min(w.abs()));
    if !smallest.is_finite() {
        return Some(1.0);
    }
    (1..=12).map(|q| smallest / q as f64).find(|c| {
        weights.iter().all(|w| {
            let x = w / c;
            (x - x.round()).abs() <= 1e-9 * (1.0 + x.abs())
        })
    })
}

/// With all weights in `c·ℤ`, PST forces the supported eigenvalues to be `c(a + b_j√Δ)/2`
/// for fixed integers `a`, `Δ`, so every `4((λ_j − λ_k)/c)²` is an integer.
fn quadratic_integer_obstruction(eigenvalues: &[f64], c: f64) -> Option<(usize, usize, f64)> {
    for j in 0..eigenvalues.len() {
        for k in j + 1..eigenvalues.len() {
            let x = 4.0 * ((eigenvalues[j] - eigenvalues[k]) / c).powi(2);
            if (x - x.round()).abs() > 1e-6 * (1.0 + x) {
                return Some((j, k, x));
            }
        }
    }
    None
}

/// `weight_unit`: when every edge weight is an integer multiple of this value,
/// incommensurate spectra are decided by the quadratic-integer obstruction.
pub fn pst_certificate_with(
    d: &EigenDecomposition,
    a: VertexId,
    b: VertexId,
    weight_unit: Option<f64>,
) -> Result<PstCertificate> {
    let n = d.source_dim();
    a.check(n)?;
    b.check(n)?;
    if a == b {
        return Ok(PstCertificate::no(
            "source and target coincide; transfer needs distinct vertices".into(),
        ));
    }
    let projectors = spectral_projectors(d, default_group_tol(d))?;
    let Some(signs) = strong_cospectrality_with(&projectors, a, b, 1e-8, n)? else {
        return Ok(PstCertificate::no(format!(
            "vertices {} and {} are not strongly cospectral",
            a.index(),
            b.index()
        )));
    };

    let mut support = Vec::new();
    let mut support_eigenvalues = Vec::new();
    let mut bits = Vec::new();
    for (j, s) in signs.iter().enumerate() {
        if let Some(bit) = s.bit() {
            support.push(j);
            support_eigenvalues.push(projectors.groups[j].eigenvalue);
            bits.push(bit);
        }
    }
    let minus: Vec<bool> = bits.iter().map(|&b| b == 1).collect();
    let mut cert = PstCertificate {
        verdict: Verdict::Unknown,
        time: None,
        support,
        support_eigenvalues,
        signs: bits,
        reason: String::new(),
        fidelity_at_time: None,
    };

    match align_phases(&cert.support_eigenvalues, &minus) {
        AlignmentOutcome::Feasible { system, time } => {
            let kernel = TransferKernel::new(d, a, b)?;
            let f = kernel.amplitude(time.value()).norm();
            cert.fidelity_at_time = Some(f);
            cert.time = Some(time);
            if f >= NUMERIC_PST {
                cert.verdict = Verdict::Yes;
                cert.reason = format!(
                    "phases align at t = {time}: unit r = {}, steps {:?}, parity targets {:?}, gcd {}",
                    system.unit,
                    system.steps,
                    bit_vec(&system.targets),
                    system.gcd
                );
            } else {
                cert.reason = format!(
                    "alignment predicted t = {time} but |F(t)| = {f}; numeric confirmation failed"
                );
            }
        }
        AlignmentOutcome::ParityObstruction { system, conflict } => {
            cert.verdict = Verdict::No;
            let m = system.steps[conflict] / system.gcd;
            cert.reason = format!(
                "parity obstruction: unit r = {}, steps {:?}, targets {:?}, gcd {}; cluster {} needs parity {} but \
                 m/g = {m} for every admissible time",
                system.unit,
                system.steps,
                bit_vec(&system.targets),
                system.gcd,
                cert.support[conflict],
                u8::from(system.targets[conflict]),
            );
        }
        AlignmentOutcome::Incommensurate { detail } => {
            let obstruction = weight_unit
                .and_then(|c| quadratic_integer_obstruction(&cert.support_eigenvalues, c));
            match (obstruction, weight_unit) {
                (Some((j, k, x)), Some(c)) => {
                    cert.verdict = Verdict::No;
                    cert.reason = format!(
                        "weights lie in {c}·ℤ but 4((λ_{} − λ_{})/{c})² = {x} is not an integer, so the supported \
                         eigenvalues are not quadratic integers over a common √Δ",
                        cert.support[j], cert.support[k]
                    );
                }
                _ => {
                    cert.reason =
                        format!("supported spectrum does not reduce to scaled integers: {detail}")
                }
            }
        }
        AlignmentOutcome::Degenerate => {
            cert.reason = "fewer than two supported eigenvalues".into();
        }
    }
    Ok(cert)
}

fn bit_vec(v: &[bool]) -> Vec<u8> {
    v.iter().map(|&b| u8::from(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, empty, hypercube, join};
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    #[test]
    fn q3_signs_alternate() {
        let q3 = hypercube(3).unwrap();
        let s = strong_cospectrality(&q3, VertexId(0), VertexId(7), 1e-8)
            .unwrap()
            .unwrap();
        let bits: Vec<_> = s.iter().map(|x| x.bit().unwrap()).collect();
        assert_eq!(bits, vec![0, 1, 0, 1]);
    }

    #[test]
    fn k3_not_strongly_cospectral() {
        assert_eq!(
            strong_cospectrality(&complete(3).unwrap(), VertexId(0), VertexId(1), 1e-8).unwrap(),
            None
        );
    }

    #[test]
    fn c4_antipodes() {
        let s = strong_cospectrality(&cycle(4).unwrap(), VertexId(0), VertexId(2), 1e-8)
            .unwrap()
            .unwrap();
        assert_eq!(
            s,
            vec![
                CospectralSign::Plus,
                CospectralSign::Minus,
                CospectralSign::Plus
            ]
        );
    }

    #[test]
    fn certificates() {
        let c = pst_certificate(&hypercube(3).unwrap(), VertexId(0), VertexId(7)).unwrap();
        assert_eq!(c.verdict, Verdict::Yes);
        let t = c.time.unwrap();
        assert_eq!((t.num, t.den), (1, 2));
        assert!((t.value() - FRAC_PI_2).abs() < 1e-15);
        assert!(c.fidelity_at_time.unwrap() >= 1.0 - 1e-8);

        let c = pst_certificate(&complete(3).unwrap(), VertexId(0), VertexId(1)).unwrap();
        assert_eq!(c.verdict, Verdict::No);
        assert!(c.reason.contains("not strongly cospectral"));

        let k5e = join(&empty(2).unwrap(), &complete(3).unwrap());
        let c = pst_certificate(&k5e, VertexId(0), VertexId(1)).unwrap();
        assert_eq!(c.verdict, Verdict::No);
        assert!(c.reason.contains("quadratic integers"));
        assert_eq!(c.signs.len(), 3);

        let p5 = pst_certificate(
            &crate::graph::unweighted_path(5).unwrap(),
            VertexId(0),
            VertexId(4),
        )
        .unwrap();
        assert_eq!(p5.verdict, Verdict::No);
        let scaled = pst_certificate(
            &k5e.scaled(0.5f64.sqrt()).unwrap(),
            VertexId(0),
            VertexId(1),
        )
        .unwrap();
        assert_eq!(scaled.verdict, Verdict::No);
        let mixed = crate::graph::path(&[1.0, 2.0f64.sqrt(), 1.0], &[0.0; 4]).unwrap();
        let c = pst_certificate(&mixed, VertexId(0), VertexId(3)).unwrap();
        assert_eq!(c.verdict, Verdict::Unknown);

        let same = pst_certificate(&complete(2).unwrap(), VertexId(1), VertexId(1)).unwrap();
        assert_eq!(same.verdict, Verdict::No);
    }
}
