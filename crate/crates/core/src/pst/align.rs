//! Exact phase alignment for commensurable spectra.
//!
//! A walk transfers perfectly between strongly cospectral vertices exactly
//! when every supported eigenphase `e^{-itλ_j}` equals a common phase up to
//! the sign `σ_j` relating `E_j|a>` and `E_j|b>`. Differencing against a
//! reference cluster removes the global phase and leaves
//!
//! ```text
//! t·(λ_j − λ_ref) ∈ π·(2ℤ + (σ_j xor σ_ref))   for every supported j.
//! ```
//!
//! When all differences are integer multiples `m_j` of one unit `r`, this is
//! a parity problem over the integers: with `g = gcd(m_j)` it is solvable iff
//! every `m_j / g` has the required parity, and the least time is `π/(r·g)`
//! (or `2π/(r·g)` when no sign flips are required).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use super::rational::{gcd, rational_reconstruct};

/// Largest subdivision of the smallest eigenvalue gap tried when searching
/// for a common unit.
pub const MAX_SUBDIVISIONS: i64 = 64;
/// Tolerance for `Δλ / r` to count as an integer.
pub const INTEGRALITY_TOL: f64 = 1e-7;

/// A time `num·π/den · scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiMultiple {
    pub num: i64,
    pub den: i64,
    pub scale: f64,
}

impl PiMultiple {
    pub fn value(&self) -> f64 {
        self.num as f64 * PI / self.den as f64 * self.scale
    }

    /// `c·π/u`, written exactly when `u` is a small-denominator rational.
    pub fn over(c: i64, u: f64) -> Self {
        match rational_reconstruct(u, 10_000, 1e-10) {
            Some((p, q)) if p > 0 => {
                let g = gcd(c * q, p);
                PiMultiple {
                    num: c * q / g,
                    den: p / g,
                    scale: 1.0,
                }
            }
            _ => PiMultiple {
                num: c,
                den: 1,
                scale: 1.0 / u,
            },
        }
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match (self.num, self.den) {
            (1, 1) => String::from("π"),
            (n, 1) => format!("{n}π"),
            (1, d) => format!("π/{d}"),
            (n, d) => format!("{n}π/{d}"),
        };
        if self.scale == 1.0 {
            f.write_str(&head)
        } else {
            write!(f, "{head}·{}", self.scale)
        }
    }
}

/// Integer form of the alignment problem.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerSystem {
    /// Common unit `r`: `λ_j − λ_ref = r·steps[j]`.
    pub unit: f64,
    pub steps: Vec<i64>,
    /// Required parity of `t·(λ_j − λ_ref)/π`.
    pub targets: Vec<bool>,
    pub gcd: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlignmentOutcome {
    Feasible {
        system: IntegerSystem,
        time: PiMultiple,
    },
    /// Integer system with no solution; `conflict` indexes a violated cluster.
    ParityObstruction {
        system: IntegerSystem,
        conflict: usize,
    },
    /// The eigenvalue differences admit no common unit.
    Incommensurate { detail: String },
    /// Fewer than two distinct supported eigenvalues.
    Degenerate,
}

/// Finds a unit `r` with every `δ` an integer multiple of it.
pub fn common_unit(diffs: &[f64]) -> Option<(f64, Vec<i64>)> {
    let smallest = diffs
        .iter()
        .map(|d| d.abs())
        .filter(|d| *d > 1e-12)
        .fold(f64::INFINITY, f64::min);
    if !smallest.is_finite() {
        return None;
    }
    for q in 1..=MAX_SUBDIVISIONS {
        let r = smallest / q as f64;
        let mut steps = Vec::with_capacity(diffs.len());
        let mut ok = true;
        for d in diffs {
            let x = d / r;
            if x.abs() > 1e9 || (x - x.round()).abs() > INTEGRALITY_TOL {
                ok = false;
                break;
            }
            steps.push(x.round() as i64);
        }
        if ok {
            return Some((r, steps));
        }
    }
    None
}

/// Solves the alignment system for `eigenvalues[j]` with sign flags
/// `minus[j]` (true when `E_j|a> = −E_j|b>`). Index 0 is the reference.
pub fn align_phases(eigenvalues: &[f64], minus: &[bool]) -> AlignmentOutcome {
    assert_eq!(eigenvalues.len(), minus.len(), "one sign per eigenvalue");
    if eigenvalues.len() < 2 {
        return AlignmentOutcome::Degenerate;
    }
    let diffs: Vec<f64> = eigenvalues.iter().map(|l| l - eigenvalues[0]).collect();
    let Some((unit, steps)) = common_unit(&diffs) else {
        return AlignmentOutcome::Incommensurate {
            detail: format!(
                "eigenvalue differences {diffs:?} share no common unit (tried gap/1..gap/{MAX_SUBDIVISIONS})"
            ),
        };
    };
    let targets: Vec<bool> = minus.iter().map(|&s| s ^ minus[0]).collect();
    let g = steps.iter().fold(0, |acc, &m| gcd(acc, m));
    if g == 0 {
        return AlignmentOutcome::Degenerate;
    }
    let system = IntegerSystem {
        unit,
        steps,
        targets,
        gcd: g,
    };
    if system.targets.iter().all(|t| !t) {
        let time = PiMultiple::over(2, unit * g as f64);
        return AlignmentOutcome::Feasible { system, time };
    }
    let conflict = system
        .steps
        .iter()
        .zip(&system.targets)
        .position(|(m, &target)| ((m / g).rem_euclid(2) == 1) != target);
    match conflict {
        None => {
            let time = PiMultiple::over(1, unit * g as f64);
            AlignmentOutcome::Feasible { system, time }
        }
        Some(conflict) => AlignmentOutcome::ParityObstruction { system, conflict },
    }
}
