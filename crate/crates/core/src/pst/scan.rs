//! Numeric fidelity series and maximum scans.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::spectral::{eigendecompose, Amplitude, EigenDecomposition, TransferKernel};

/// Above this magnitude a scan reports numeric PST.
pub const NUMERIC_PST: f64 = 1.0 - 1e-8;
/// Below this magnitude a scan reports no PST; in between is inconclusive.
pub const NUMERIC_NO_PST: f64 = 1.0 - 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySeries {
    pub source: VertexId,
    pub target: VertexId,
    pub times: Vec<f64>,
    pub amplitudes: Vec<Amplitude>,
}

impl FidelitySeries {
    pub fn magnitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|z| z.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub t_star: f64,
    pub fmax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericVerdict {
    Pst,
    /// Close to 1 but not within the PST threshold (possibly pretty-good transfer).
    Inconclusive,
    NoPst,
}

impl ScanResult {
    pub fn verdict(&self) -> NumericVerdict {
        if self.fmax >= NUMERIC_PST {
            NumericVerdict::Pst
        } else if self.fmax >= NUMERIC_NO_PST {
            NumericVerdict::Inconclusive
        } else {
            NumericVerdict::NoPst
        }
    }
}

fn grid(t_max: f64, steps: usize) -> impl Iterator<Item = f64> {
    let last = steps.saturating_sub(1).max(1) as f64;
    (0..steps).map(move |i| t_max * i as f64 / last)
}

/// Amplitudes on `steps` equally spaced times covering `[0, t_max]`.
pub fn fidelity_series(
    g: &Graph,
    a: VertexId,
    b: VertexId,
    t_max: f64,
    steps: usize,
) -> Result<FidelitySeries> {
    let d = eigendecompose(g)?;
    fidelity_series_with(&d, a, b, t_max, steps)
}

pub fn fidelity_series_with(
    d: &EigenDecomposition,
    a: VertexId,
    b: VertexId,
    t_max: f64,
    steps: usize,
) -> Result<FidelitySeries> {
    let kernel = TransferKernel::new(d, a, b)?;
    let times: Vec<f64> = if steps == 1 {
        alloc::vec![0.0]
    } else {
        grid(t_max, steps).collect()
    };
    let amplitudes = times.iter().map(|&t| kernel.amplitude(t)).collect();
    Ok(FidelitySeries {
        source: a,
        target: b,
        times,
        amplitudes,
    })
}

/// Grid maximum of `|F|` followed by golden-section refinement around the
/// best grid point, then a derivative-root polish of the peak location.
pub fn max_fidelity_scan(
    g: &Graph,
    a: VertexId,
    b: VertexId,
    t_max: f64,
    steps: usize,
    refine_iters: usize,
) -> Result<ScanResult> {
    let d = eigendecompose(g)?;
    max_fidelity_scan_with(&TransferKernel::new(&d, a, b)?, t_max, steps, refine_iters)
}

/// The earliest grid peak whose refined height matches the global maximum
/// (within `1e-10`) is reported, so periodic transfer yields its first time.
pub fn max_fidelity_scan_with(
    kernel: &TransferKernel,
    t_max: f64,
    steps: usize,
    refine_iters: usize,
) -> Result<ScanResult> {
    if steps < 2 {
        return Err(Error::InvalidArgument(
            "a scan needs at least two grid points".into(),
        ));
    }
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::InvalidArgument(
            "scan horizon must be positive".into(),
        ));
    }
    let h = t_max / (steps - 1) as f64;
    let values: Vec<f64> = grid(t_max, steps)
        .map(|t| kernel.amplitude(t).norm())
        .collect();
    let (best_i, best) = values
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &f)| if f > acc.1 { (i, f) } else { acc },
        );
    let top = refine(kernel, best_i, best, h, steps, refine_iters);
    if refine_iters == 0 {
        return Ok(top);
    }

    // A grid point within h/2 of a peak sits at most ½·spread²·(h/2)² below it.
    let (lo, hi) = kernel
        .terms()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, u), &(x, _)| {
            (l.min(x), u.max(x))
        });
    let spread = (hi - lo).max(0.0);
    let slack = 0.5 * spread * spread * (h / 2.0) * (h / 2.0) + 1e-12;
    let peaks = (0..steps).filter(|&i| {
        let f = values[i];
        f >= top.fmax - slack
            && (i == 0 || values[i - 1] <= f)
            && (i + 1 == steps || values[i + 1] <= f)
    });
    for i in peaks.take(MAX_PEAK_CANDIDATES) {
        if i >= best_i {
            break;
        }
        let r = refine(kernel, i, values[i], h, steps, refine_iters);
        if r.fmax >= top.fmax - 1e-10 {
            return Ok(ScanResult {
                t_star: r.t_star,
                fmax: r.fmax.max(top.fmax),
            });
        }
    }
    Ok(top)
}

const MAX_PEAK_CANDIDATES: usize = 64;

/// Golden-section search on the two grid cells around `i`, then a bisection
/// on the root of d|F|²/dt (|F| is flat at its peak).
fn refine(
    kernel: &TransferKernel,
    i: usize,
    f_i: f64,
    h: f64,
    steps: usize,
    iters: usize,
) -> ScanResult {
    let mag = |t: f64| kernel.amplitude(t).norm();
    let t_max = (steps - 1) as f64 * h;
    let (mut best, mut t_star) = (f_i, i as f64 * h);
    if iters == 0 {
        return ScanResult { t_star, fmax: best };
    }
    let mut lo = (i as f64 - 1.0).max(0.0) * h;
    let mut hi = ((i + 1).min(steps - 1)) as f64 * h;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - inv_phi * (hi - lo), lo + inv_phi * (hi - lo));
    let (mut f1, mut f2) = (mag(x1), mag(x2));
    for _ in 0..iters {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = mag(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = mag(x2);
        }
    }
    for (t, f) in [(x1, f1), (x2, f2)] {
        if f > best {
            best = f;
            t_star = t;
        }
    }

    let w = (t_star * 1e-6).max(h * 1e-3).max(1e-9);
    let (mut l, mut r) = ((t_star - w).max(0.0), (t_star + w).min(t_max));
    if kernel.magnitude_sq_slope(l) > 0.0 && kernel.magnitude_sq_slope(r) < 0.0 {
        for _ in 0..80 {
            let m = 0.5 * (l + r);
            if kernel.magnitude_sq_slope(m) > 0.0 {
                l = m;
            } else {
                r = m;
            }
        }
        let root = 0.5 * (l + r);
        let f = mag(root);
        if f >= best - 1e-14 {
            best = best.max(f);
            t_star = root;
        }
    }
    ScanResult { t_star, fmax: best }
}
