//! Reproduces the catalogue of PST / no-PST families.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::cones::{
    cylindrical_no_pst_check, double_cone, glued_double_cone, layered_join, DoubleConeSpec,
    GluedConeSpec,
};
use crate::error::Result;
use crate::graph::{circulant, complete, empty, hypercube, unweighted_path, Graph};
use crate::products::{lexicographic, weak};

#[allow(unused_imports)]
use num_traits::Float;

use super::{
    max_fidelity_scan, pst_certificate, NumericVerdict, PiMultiple, PstCertificate, Verdict,
};

/// Scan window used when the certificate is inconclusive.
pub const TABLE_SCAN_TMAX: f64 = 200.0;
pub const TABLE_SCAN_STEPS: usize = 200_001;

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub expected: Verdict,
    pub observed: Verdict,
    pub time: Option<PiMultiple>,
    /// Largest `|F|` seen when a scan was needed.
    pub fmax: Option<f64>,
    pub method: String,
    pub matches: bool,
    pub certificate: PstCertificate,
}

struct Entry {
    name: &'static str,
    graph: Graph,
    source: usize,
    target: usize,
    expected: Verdict,
    cylindrical: Option<(u64, u64, u64)>,
}

fn entries() -> Result<Vec<Entry>> {
    let k1 = complete(1)?;
    let k3 = complete(3)?;
    let q2 = hypercube(2)?;
    let cone = double_cone(&DoubleConeSpec {
        base: k3.scaled(2f64.sqrt())?,
        b: 0,
        alpha: 3f64.sqrt(),
    })?;
    let glued = glued_double_cone(&GluedConeSpec {
        g1: circulant(15, &[1, 2, 4])?,
        g2: circulant(15, &[1, 2, 4])?,
        connection: circulant(15, &[1, 2, 4, 7])?.adjacency().clone(),
    })?;
    let half_join = layered_join(&[&k1, &k3, &k3, &k1]);
    let cyl = layered_join(&[&k1, &k3, &empty(2)?, &k3, &k1]);
    let e = |name, graph: Graph, source, target, expected, cylindrical| Entry {
        name,
        graph,
        source,
        target,
        expected,
        cylindrical,
    };
    Ok(vec![
        e(
            "weighted double cone K̄2 + √2·K3 (α = √3)",
            cone,
            0,
            1,
            Verdict::Yes,
            None,
        ),
        e("path P5", unweighted_path(5)?, 0, 4, Verdict::No, None),
        e(
            "glued cones Circ(15,{1,2,4}) via Circ(15,{1,2,4,7})",
            glued,
            0,
            31,
            Verdict::Yes,
            None,
        ),
        e(
            "K1 + K3 + K3 + K1",
            half_join.clone(),
            0,
            half_join.n() - 1,
            Verdict::No,
            None,
        ),
        e(
            "cylindrical cone K1 + K3 + K̄2 + K3 + K1",
            cyl.clone(),
            0,
            cyl.n() - 1,
            Verdict::No,
            Some((3, 2, 2)),
        ),
        e("hypercube Q4", hypercube(4)?, 0, 15, Verdict::Yes, None),
        e(
            "weak product Q2 × K4",
            weak(&q2, &complete(4)?),
            0,
            12,
            Verdict::Yes,
            None,
        ),
        e(
            "lexicographic K2[Q2]",
            lexicographic(&complete(2)?, &q2),
            0,
            3,
            Verdict::Yes,
            None,
        ),
    ])
}

/// Certificate first; scan over `[0, 200]` at step `1e-3` when it is inconclusive.
pub fn pst_table() -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for entry in entries()? {
        let cert = pst_certificate(&entry.graph, entry.source.into(), entry.target.into())?;
        let (observed, fmax, mut method) = match cert.verdict {
            Verdict::Unknown => {
                let scan = max_fidelity_scan(
                    &entry.graph,
                    entry.source.into(),
                    entry.target.into(),
                    TABLE_SCAN_TMAX,
                    TABLE_SCAN_STEPS,
                    60,
                )?;
                let v = match scan.verdict() {
                    NumericVerdict::Pst => Verdict::Yes,
                    NumericVerdict::NoPst => Verdict::No,
                    NumericVerdict::Inconclusive => Verdict::Unknown,
                };
                (
                    v,
                    Some(scan.fmax),
                    format!(
                        "scan (max |F| = {:.6} on [0, {TABLE_SCAN_TMAX}])",
                        scan.fmax
                    ),
                )
            }
            v => (v, None, "certificate".to_string()),
        };
        if let Some((n, k, m)) = entry.cylindrical {
            let proof = cylindrical_no_pst_check(n, k, m)?;
            method += " + parity proof";
            debug_assert_eq!(proof.verdict, Verdict::No);
        }
        rows.push(TableRow {
            name: entry.name.into(),
            source: entry.source,
            target: entry.target,
            expected: entry.expected,
            observed,
            time: cert.time.filter(|_| observed == Verdict::Yes),
            fmax,
            method,
            matches: observed == entry.expected,
            certificate: cert,
        });
    }
    Ok(rows)
}
