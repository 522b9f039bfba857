//! Cone families: weighted double cones, glued double cones, cylindrical
//! cones and the weighted path `P4(γ; κ)`, with their closed-form
//! amplitudes and PST conditions.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{path, Graph};
use crate::matrix::Matrix;
use crate::products::{ConditionReport, RatioCheck};
use crate::pst::rational::{classify_real, perfect_sqrt};
use crate::pst::{
    align_phases, classify_rational, AlignmentOutcome, ParityClass, PiMultiple, RationalClass,
    Verdict,
};
use crate::spectral::{perron_vector, Amplitude};

const OPPOSITE: [ParityClass; 2] = [ParityClass::Q01, ParityClass::Q10];

/// Builds `L_0 + L_1 + … + L_r` where only consecutive layers are joined.
pub fn layered_join(layers: &[&Graph]) -> Graph {
    let sizes: Vec<usize> = layers.iter().map(|g| g.n()).collect();
    let total: usize = sizes.iter().sum();
    let mut adj = Matrix::zeros(total, total);
    let mut offset = 0;
    for (i, layer) in layers.iter().enumerate() {
        adj.set_block(offset, offset, layer.adjacency());
        if let Some(&next) = sizes.get(i + 1) {
            let ones = Matrix::ones(layer.n(), next);
            adj.set_block(offset, offset + layer.n(), &ones);
            adj.set_block(offset + layer.n(), offset, &ones.transpose());
        }
        offset += layer.n();
    }
    Graph::from_matrix(adj).expect("block-symmetric assembly")
}

fn regular_params(g: &Graph) -> Result<(usize, f64)> {
    g.is_regular()
        .map(|k| (g.n(), k))
        .ok_or_else(|| Error::InvalidArgument("layer graph must be regular".into()))
}

fn ratio(name: &str, value: f64) -> RatioCheck {
    RatioCheck {
        name: name.into(),
        value,
        class: classify_real(value),
    }
}

fn class_text(r: &RatioCheck) -> String {
    match &r.class {
        Some(c) => format!("{} = {}", r.name, c),
        None => format!("{} = {} (irrational)", r.name, r.value),
    }
}

fn in_classes(r: &RatioCheck, classes: &[ParityClass]) -> bool {
    r.class.is_some_and(|c| c.is_in(classes))
}

// ---------------------------------------------------------------------------
// Weighted double cone

/// `K2^b + G` with cone edges weighted by `α·x0`.
#[derive(Debug, Clone)]
pub struct DoubleConeSpec {
    pub base: Graph,
    /// 0 for `K̄2` apexes, 1 for `K2`.
    pub b: u8,
    pub alpha: f64,
}

/// Apexes `A`, `B` at 0 and 1, base vertices after.
pub fn double_cone(spec: &DoubleConeSpec) -> Result<Graph> {
    if spec.b > 1 {
        return Err(Error::InvalidArgument(format!(
            "apex edge weight b must be 0 or 1, got {}",
            spec.b
        )));
    }
    if !(spec.alpha > 0.0 && spec.alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "cone scale α must be positive, got {}",
            spec.alpha
        )));
    }
    let (_, x0) = perron_vector(&spec.base)?;
    let n = spec.base.n();
    let mut adj = Matrix::zeros(n + 2, n + 2);
    adj.set_block(2, 2, spec.base.adjacency());
    let b = f64::from(spec.b);
    adj[(0, 1)] = b;
    adj[(1, 0)] = b;
    for (u, x) in x0.iter().enumerate() {
        let w = spec.alpha * x;
        for apex in 0..2 {
            adj[(apex, u + 2)] = w;
            adj[(u + 2, apex)] = w;
        }
    }
    let g = Graph::from_matrix(adj)?;
    match spec.base.labels() {
        Some(labels) => {
            let mut all = vec![String::from("A"), String::from("B")];
            all.extend(labels.iter().cloned());
            g.with_labels(all)
        }
        None => Ok(g),
    }
}

/// `(λ̃⁺, λ̃⁻, Δ)` for the double cone.
pub fn double_cone_params(lambda0: f64, b: u8, alpha: f64) -> (f64, f64, f64) {
    let b = f64::from(b);
    let plus = (lambda0 + b) / 2.0;
    let minus = (lambda0 - b) / 2.0;
    (plus, minus, (minus * minus + 2.0 * alpha * alpha).sqrt())
}

/// Apex-to-apex amplitude
/// `½{e^{-itλ̃⁺}[cos tΔ + i(λ̃⁻/Δ) sin tΔ] − e^{itb}}`.
///
/// The antisymmetric apex vector has eigenvalue `−b`, hence the `e^{itb}`
/// term; for `b = 0` it is the constant 1.
pub fn double_cone_fidelity(lambda0: f64, b: u8, alpha: f64, t: f64) -> Amplitude {
    let (plus, minus, delta) = double_cone_params(lambda0, b, alpha);
    let bracket = Complex64::new((t * delta).cos(), minus / delta * (t * delta).sin());
    let apex = Complex64::from_polar(1.0, t * f64::from(b));
    (Complex64::from_polar(1.0, -t * plus) * bracket - apex) * 0.5
}

/// PST test for the double cone: `(λ̃⁺ + b)/Δ ∈ Q01 ∪ Q10`, time `qπ/Δ`.
///
/// For `b = 0` this is `λ̃⁺/Δ`. For `b = 1` the ratio `λ̃⁺/Δ` is reported
/// alongside for comparison.
pub fn double_cone_pst_condition(lambda0: f64, b: u8, alpha: f64) -> Result<ConditionReport> {
    if b > 1 || alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidArgument("need b ∈ {0,1} and α > 0".into()));
    }
    let (plus, _, delta) = double_cone_params(lambda0, b, alpha);
    let main = ratio("(λ̃⁺+b)/Δ", (plus + f64::from(b)) / delta);
    let holds = in_classes(&main, &OPPOSITE);
    let mut detail = format!("λ̃⁺ = {plus}, Δ = {delta}; {}", class_text(&main));
    let mut ratios = vec![main.clone()];
    if b == 1 {
        let literal = ratio("λ̃⁺/Δ", plus / delta);
        let lit_holds = in_classes(&literal, &OPPOSITE);
        detail += &format!("; {}", class_text(&literal));
        if lit_holds != holds {
            detail += " (the λ̃⁺/Δ test disagrees: the apex pair sits at eigenvalue −1, not 0)";
        }
        ratios.push(literal);
    }
    detail += if holds {
        " ∈ Q01 ∪ Q10: PST"
    } else {
        ": condition fails"
    };
    let mut report = ConditionReport::new(holds, vec![plus, delta], detail);
    report.ratios = ratios;
    if holds {
        let q = main.class.expect("holds implies rational").q;
        report.time = Some(PiMultiple::over(q, delta));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Glued double cones

/// `K1 + G1 ∘ G2 + K1` with the copies connected through `C`.
#[derive(Debug, Clone)]
pub struct GluedConeSpec {
    pub g1: Graph,
    pub g2: Graph,
    /// Symmetric 0/1 `n×n` connection matrix.
    pub connection: Matrix,
}

impl GluedConeSpec {
    /// Validates the spec and returns `(n, k, γ)`.
    pub fn parameters(&self) -> Result<(usize, f64, f64)> {
        let (n, k) = regular_params(&self.g1)?;
        let (n2, k2) = regular_params(&self.g2)?;
        if n != n2 || k != k2 {
            return Err(Error::InvalidArgument(format!(
                "G1 is ({n},{k})-regular but G2 is ({n2},{k2})-regular"
            )));
        }
        let c = &self.connection;
        if c.rows() != n || c.cols() != n {
            return Err(Error::InvalidArgument(format!(
                "connection must be {n}×{n}"
            )));
        }
        if !c.is_symmetric_exact() || c.as_slice().iter().any(|&x| x != 0.0 && x != 1.0) {
            return Err(Error::InvalidArgument(
                "connection must be a symmetric 0/1 matrix".into(),
            ));
        }
        let gamma: f64 = c.row(0).iter().sum();
        if (0..n).any(|i| c.row(i).iter().sum::<f64>() != gamma) {
            return Err(Error::InvalidArgument(
                "connection rows must have a constant sum γ".into(),
            ));
        }
        for g in [&self.g1, &self.g2] {
            let residual = g.adjacency().commutator_residual(c);
            if residual > 1e-10 {
                return Err(Error::NonCommuting { residual });
            }
        }
        Ok((n, k, gamma))
    }
}

/// Apex `A` at 0, `G1` at `1..=n`, `G2` at `n+1..=2n`, apex `B` at `2n+1`.
pub fn glued_double_cone(spec: &GluedConeSpec) -> Result<Graph> {
    let (n, _, _) = spec.parameters()?;
    let mut adj = Matrix::zeros(2 * n + 2, 2 * n + 2);
    adj.set_block(1, 1, spec.g1.adjacency());
    adj.set_block(n + 1, n + 1, spec.g2.adjacency());
    adj.set_block(1, n + 1, &spec.connection);
    adj.set_block(n + 1, 1, &spec.connection);
    for u in 0..n {
        adj[(0, 1 + u)] = 1.0;
        adj[(1 + u, 0)] = 1.0;
        adj[(2 * n + 1, n + 1 + u)] = 1.0;
        adj[(n + 1 + u, 2 * n + 1)] = 1.0;
    }
    Graph::from_matrix(adj)
}

/// `√x` for a rational `p/q`, when it is again rational.
fn rational_sqrt(p: u128, q: u128) -> Option<(u128, u128)> {
    let g = crate::pst::rational::gcd_u128(p, q);
    let (p, q) = (p / g, q / g);
    Some((perfect_sqrt(p)?, perfect_sqrt(q)?))
}

fn exact_ratio(name: &str, p: i128, q: i128) -> Result<RatioCheck> {
    let (p, q) = (i64::try_from(p), i64::try_from(q));
    match (p, q) {
        (Ok(p), Ok(q)) => {
            let class = classify_rational(p, q)?;
            Ok(RatioCheck {
                name: name.into(),
                value: class.value(),
                class: Some(class),
            })
        }
        _ => Err(Error::NumericFailure(format!(
            "{name} exceeds 64-bit range"
        ))),
    }
}

/// Glued-cone test with `k± = (k±γ)/2`, `Δ±² = k±² + n`: PST when
/// `Δ+/Δ− ∈ Q01 ∪ Q10` and `γ/Δ+` or `γ/Δ−` lies in `Q01`. Evaluated in exact
/// integer arithmetic via `D± = 4Δ±² = (k±γ)² + 4n`.
pub fn glued_cone_pst_condition(n: u64, k: u64, gamma: u64) -> Result<ConditionReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let (n, k, gamma) = (n as i128, k as i128, gamma as i128);
    let d_plus = (k + gamma).pow(2) + 4 * n;
    let d_minus = (k - gamma).pow(2) + 4 * n;
    let delta_p = (d_plus as f64).sqrt() / 2.0;
    let delta_m = (d_minus as f64).sqrt() / 2.0;
    let mut ratios = Vec::new();
    let mut notes = vec![format!("Δ+² = {d_plus}/4, Δ−² = {d_minus}/4")];

    let quotient = match rational_sqrt(d_plus as u128, d_minus as u128) {
        Some((p, q)) => exact_ratio("Δ+/Δ−", p as i128, q as i128)?,
        None => RatioCheck {
            name: "Δ+/Δ−".into(),
            value: delta_p / delta_m,
            class: None,
        },
    };
    // γ/Δ± = 2γ/√D±
    let gamma_ratio = |name: &str, d: i128, delta: f64| -> Result<RatioCheck> {
        match perfect_sqrt(d as u128) {
            Some(s) => exact_ratio(name, 2 * gamma, s as i128),
            None => Ok(RatioCheck {
                name: name.into(),
                value: gamma as f64 / delta,
                class: None,
            }),
        }
    };
    let gp = gamma_ratio("γ/Δ+", d_plus, delta_p)?;
    let gm = gamma_ratio("γ/Δ−", d_minus, delta_m)?;
    let first = in_classes(&quotient, &OPPOSITE);
    let second = in_classes(&gp, &[ParityClass::Q01]) || in_classes(&gm, &[ParityClass::Q01]);
    let holds = first && second;
    for r in [&quotient, &gp, &gm] {
        notes.push(class_text(r));
    }
    ratios.extend([quotient, gp, gm]);

    let kp = (k + gamma) as f64 / 2.0;
    let km = (k - gamma) as f64 / 2.0;
    let eigen = [kp + delta_p, kp - delta_p, km + delta_m, km - delta_m];
    let mut report = ConditionReport::new(holds, eigen.to_vec(), String::new());
    if holds {
        notes.push("Δ+/Δ− ∈ Q01 ∪ Q10 and γ/Δ± ∈ Q01: PST".into());
        report.time = alignment_time(&eigen, &[false, false, true, true], &mut notes);
    } else if ratios.iter().any(|r| r.class.is_none()) && !first {
        notes.push("condition fails (irrational)".into());
    } else {
        notes.push("condition fails (parity class)".into());
    }
    report.ratios = ratios;
    report.detail = notes.join("; ");
    Ok(report)
}

fn alignment_time(eigen: &[f64], minus: &[bool], notes: &mut Vec<String>) -> Option<PiMultiple> {
    match align_phases(eigen, minus) {
        AlignmentOutcome::Feasible { time, .. } => {
            notes.push(format!("least time t = {time}"));
            Some(time)
        }
        other => {
            notes.push(format!("phase equations have no solution: {other:?}"));
            None
        }
    }
}

/// `(n, k, γ) = (15·4^{a−2}, 3·2^{a−1}, 4·2^{a−1})` for `a ≥ 2`.
pub fn glued_cone_family(a: u32) -> Result<(u64, u64, u64)> {
    if !(2..=20).contains(&a) {
        return Err(Error::InvalidArgument(format!(
            "family index must be in 2..=20, got {a}"
        )));
    }
    Ok((
        15 * 4u64.pow(a - 2),
        3 * 2u64.pow(a - 1),
        4 * 2u64.pow(a - 1),
    ))
}

/// Closed-form apex data of a glued cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GluedConeEigendata {
    /// `α± = k+ ± Δ+`
    pub alpha: [f64; 2],
    /// `β± = k− ± Δ−`
    pub beta: [f64; 2],
    /// `1/L±²` with `L±² = (2/n)(n + α±²)`
    pub alpha_weights: [f64; 2],
    /// `1/M±²` with `M±² = (2/n)(n + β±²)`
    pub beta_weights: [f64; 2],
}

pub fn glued_cone_eigendata(n: f64, k: f64, gamma: f64) -> GluedConeEigendata {
    let (kp, km) = ((k + gamma) / 2.0, (k - gamma) / 2.0);
    let (dp, dm) = ((kp * kp + n).sqrt(), (km * km + n).sqrt());
    let alpha = [kp + dp, kp - dp];
    let beta = [km + dm, km - dm];
    let w = |x: f64| n / (2.0 * (n + x * x));
    GluedConeEigendata {
        alpha,
        beta,
        alpha_weights: [w(alpha[0]), w(alpha[1])],
        beta_weights: [w(beta[0]), w(beta[1])],
    }
}

/// `Σ e^{-itα±}/L±² − Σ e^{-itβ±}/M±²`.
pub fn glued_cone_fidelity(n: f64, k: f64, gamma: f64, t: f64) -> Amplitude {
    let e = glued_cone_eigendata(n, k, gamma);
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        total += Complex64::from_polar(e.alpha_weights[i], -t * e.alpha[i]);
        total -= Complex64::from_polar(e.beta_weights[i], -t * e.beta[i]);
    }
    total
}

// ---------------------------------------------------------------------------
// Cylindrical cones

/// `K1 + G1 + K̄m + G2 + K1`.
#[derive(Debug, Clone)]
pub struct CylindricalConeSpec {
    pub g1: Graph,
    pub middle: Graph,
    pub g2: Graph,
}

impl CylindricalConeSpec {
    /// Checks the hypotheses of the no-PST argument, returning `(n, k, m)`.
    pub fn parameters(&self) -> Result<(usize, f64, usize)> {
        let (n, k) = regular_params(&self.g1)?;
        let (n2, k2) = regular_params(&self.g2)?;
        if n != n2 || k != k2 {
            return Err(Error::InvalidArgument("G1 and G2 must share (n, k)".into()));
        }
        if self.middle.adjacency().max_abs() != 0.0 {
            return Err(Error::InvalidArgument("middle layer must be empty".into()));
        }
        Ok((n, k, self.middle.n()))
    }

    pub fn graph(&self) -> Graph {
        cylindrical_cone(&self.g1, &self.middle, &self.g2)
    }
}

/// Apex `A` at 0, then `G1`, the middle layer, `G2`, and apex `B` last.
pub fn cylindrical_cone(g1: &Graph, middle: &Graph, g2: &Graph) -> Graph {
    let k1 = Graph::from_matrix(Matrix::zeros(1, 1)).expect("K1");
    layered_join(&[&k1, g1, middle, g2, &k1])
}

/// Which branch of the parity case analysis applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CylindricalCase {
    /// `k² + 4n` or `k² + 4(2m+1)n` is not a perfect square.
    IrrationalRoots,
    /// `k` odd: `Δ`, `Γ` are half-integers.
    HalfIntegral,
    /// `k̃` odd, `n` odd (after descent).
    OddOdd,
    /// `k̃` even, `n` odd (after descent).
    EvenOdd,
    /// `k̃` odd, `n` even (after descent).
    OddEven,
}

/// The no-PST argument for one `(n, k, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylindricalNoPst {
    pub n: u64,
    pub k: u64,
    pub m: u64,
    pub verdict: Verdict,
    /// Phase requirements at the apexes.
    pub requirements: Vec<String>,
    /// Contradiction valid for every `(n, k, m)`.
    pub product_argument: String,
    pub case: CylindricalCase,
    /// Number of halvings `(k̃, Δ, Γ, n) → (k̃/2, Δ/2, Γ/2, n/4)`.
    pub descent_steps: u32,
    /// A quotient that must lie in `Q10` but does not.
    pub witness: Option<(String, RationalClass)>,
    /// Concrete contradiction for small integral instances.
    pub instance_trace: Option<String>,
    pub trace: Vec<String>,
}

impl CylindricalNoPst {
    pub fn report(&self) -> String {
        let mut lines = vec![format!(
            "K1 + G1 + K̄{} + G2 + K1 with G1, G2 ({},{})-regular: no PST",
            self.m, self.n, self.k
        )];
        lines.extend(self.requirements.iter().map(|r| format!("requires {r}")));
        lines.push(self.product_argument.clone());
        lines.extend(self.trace.iter().cloned());
        if let Some((name, class)) = &self.witness {
            lines.push(format!("witness: {name} = {class}, not in Q10"));
        }
        if let Some(t) = &self.instance_trace {
            lines.push(t.clone());
        }
        lines.join("\n")
    }
}

/// Proof object for the cylindrical-cone no-PST argument. Always `Verdict::No`.
pub fn cylindrical_no_pst_check(n: u64, k: u64, m: u64) -> Result<CylindricalNoPst> {
    if n == 0 || k >= n || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "need n ≥ 1, 0 ≤ k < n, m ≥ 1; got ({n},{k},{m})"
        )));
    }
    let (ni, ki, mi) = (n as i128, k as i128, m as i128);
    let requirements = vec![
        String::from("t(k̃ ± Δ) ∈ (2ℤ+1)π with k̃ = k/2, Δ² = k̃² + n"),
        String::from("t(k̃ ± Γ) ∈ 2ℤπ with Γ² = k̃² + (2m+1)n"),
    ];
    let product_argument = String::from(
        "with x = t/π: (xλ+)(xλ−) = −x²n is a product of odd integers, so x²n is odd; \
         (xμ+)(xμ−) = −x²(2m+1)n is a product of even integers, so x²(2m+1)n ≡ 0 (mod 4), \
         yet it equals (2m+1)·x²n, which is odd",
    );
    let d1 = ki * ki + 4 * ni;
    let d2 = ki * ki + 4 * (2 * mi + 1) * ni;
    let (s1, s2) = (perfect_sqrt(d1 as u128), perfect_sqrt(d2 as u128));
    let mut trace = Vec::new();
    let mut descent_steps = 0;
    let mut witness = None;
    let mut instance_trace = None;

    let case = match (s1, s2) {
        (Some(s1), Some(s2)) => {
            // Work in half units: 2k̃ = k, 2Δ = s1, 2Γ = s2.
            let (s1, s2) = (s1 as i128, s2 as i128);
            let lambdas = [(ki + s1) / 2, (ki - s1) / 2];
            let mus = [(ki + s2) / 2, (ki - s2) / 2];
            trace.push(format!(
                "λ± = {}, {}; μ± = {}, {}",
                lambdas[0], lambdas[1], mus[0], mus[1]
            ));
            for (name, num, den) in [
                ("(k̃+Δ)/(k̃+Γ)", ki + s1, ki + s2),
                ("(k̃−Δ)/(k̃−Γ)", ki - s1, ki - s2),
                ("(k̃+Δ)/(k̃−Γ)", ki + s1, ki - s2),
                ("(k̃−Δ)/(k̃+Γ)", ki - s1, ki + s2),
            ] {
                if let (Ok(p), Ok(q)) = (i64::try_from(num), i64::try_from(den)) {
                    let c = classify_rational(p, q)?;
                    if c.class != ParityClass::Q10 {
                        witness = Some((String::from(name), c));
                        break;
                    }
                }
            }
            instance_trace = unit_trace(&lambdas, &mus);
            if ki % 2 == 1 {
                trace.push(format!(
                    "k = {k} odd: Δ = {s1}/2 and Γ = {s2}/2 are half-integers"
                ));
                CylindricalCase::HalfIntegral
            } else {
                let (mut kt, mut delta, mut big_gamma, mut nn) = (ki / 2, s1 / 2, s2 / 2, ni);
                trace.push(format!(
                    "k̃ = {kt}, Δ = {delta}, Γ = {big_gamma} are integers"
                ));
                while kt % 2 == 0 && nn % 2 == 0 {
                    kt /= 2;
                    delta /= 2;
                    big_gamma /= 2;
                    nn /= 4;
                    descent_steps += 1;
                    trace.push(format!(
                        "k̃ and n even: halve to k̃' = {kt}, Δ' = {delta}, Γ' = {big_gamma}, n' = {nn} (same conditions)"
                    ));
                }
                match (kt % 2 == 1, nn % 2 == 1) {
                    (true, true) => {
                        trace.push("k̃ odd, n odd: Δ, Γ even, so both quotients lie in Q11".into());
                        CylindricalCase::OddOdd
                    }
                    (false, true) => {
                        trace.push("k̃ even, n odd: Δ, Γ odd, so both quotients lie in Q11".into());
                        CylindricalCase::EvenOdd
                    }
                    _ => {
                        trace.push(
                            "k̃ odd, n even: numerator and denominator of some quotient are ≡ 2 (mod 4), \
                             so it lies in Q11"
                                .into(),
                        );
                        CylindricalCase::OddEven
                    }
                }
            }
        }
        _ => {
            trace.push(format!(
                "k² + 4n = {d1}{} and k² + 4(2m+1)n = {d2}{}: the quotients are not rational",
                if s1.is_some() { "" } else { " (not a square)" },
                if s2.is_some() { "" } else { " (not a square)" },
            ));
            CylindricalCase::IrrationalRoots
        }
    };
    Ok(CylindricalNoPst {
        n,
        k,
        m,
        verdict: Verdict::No,
        requirements,
        product_argument,
        case,
        descent_steps,
        witness,
        instance_trace,
        trace,
    })
}

/// If some `λ± = ±1`, then `t` is an odd multiple of π and any odd `μ` breaks
/// the even requirement.
fn unit_trace(lambdas: &[i128; 2], mus: &[i128; 2]) -> Option<String> {
    let unit = lambdas.iter().find(|l| l.abs() == 1)?;
    let odd = mus.iter().find(|m| m.rem_euclid(2) == 1)?;
    Some(format!(
        "t·({unit}) must be an odd multiple of π, forcing t = (2a+1)π; then t·{odd} = {odd}(2a+1)π is an odd \
         multiple of π but must be even"
    ))
}

// ---------------------------------------------------------------------------
// Weighted P4

/// Path `0–1–2–3` with outer weights 1, middle weight `γ` and loops `κ` on
/// the internal vertices.
pub fn weighted_p4(gamma: f64, kappa: f64) -> Result<Graph> {
    if gamma == 0.0 {
        return Err(Error::InvalidArgument(
            "middle weight γ must be nonzero".into(),
        ));
    }
    path(&[1.0, gamma, 1.0], &[0.0, kappa, kappa, 0.0])
}

/// `P4(γ; κ)` test with `Δ± = ½√((κ±γ)² + 4)`.
///
/// `κ ≠ 0`: `Δ+/Δ− ∈ Q01 ∪ Q10` and some `γ/Δ±` in `Q01 ∪ Q11`.
/// `κ = 0`: both `γ/Δ±` in `Q11`, or both in `Q10`.
pub fn p4_pst_condition(gamma: f64, kappa: f64) -> Result<ConditionReport> {
    if gamma == 0.0 || !gamma.is_finite() || !kappa.is_finite() {
        return Err(Error::InvalidArgument(
            "γ must be nonzero and finite, κ finite".into(),
        ));
    }
    let dp = 0.5 * ((kappa + gamma).powi(2) + 4.0).sqrt();
    let dm = 0.5 * ((kappa - gamma).powi(2) + 4.0).sqrt();
    let gp = ratio("γ/Δ+", gamma / dp);
    let gm = ratio("γ/Δ−", gamma / dm);
    let mut notes = vec![format!("Δ+ = {dp}, Δ− = {dm}")];
    let (holds, mut ratios) = if kappa != 0.0 {
        let q = ratio("Δ+/Δ−", dp / dm);
        let holds = in_classes(&q, &OPPOSITE)
            && (in_classes(&gp, &[ParityClass::Q01, ParityClass::Q11])
                || in_classes(&gm, &[ParityClass::Q01, ParityClass::Q11]));
        notes.push(String::from("case κ ≠ 0"));
        (holds, vec![q, gp, gm])
    } else {
        let both = |c: ParityClass| in_classes(&gp, &[c]) && in_classes(&gm, &[c]);
        notes.push(String::from("case κ = 0"));
        (
            both(ParityClass::Q11) || both(ParityClass::Q10),
            vec![gp, gm],
        )
    };
    notes.extend(ratios.iter().map(class_text));
    let kp = (kappa + gamma) / 2.0;
    let km = (kappa - gamma) / 2.0;
    let eigen = [kp + dp, kp - dp, km + dm, km - dm];
    let mut report = ConditionReport::new(holds, vec![dp, dm], String::new());
    if holds {
        notes.push(String::from("condition holds: PST"));
        report.time = alignment_time(&eigen, &[false, false, true, true], &mut notes);
    } else if ratios.iter().all(|r| r.class.is_none()) {
        notes.push(String::from("condition fails (irrational)"));
    } else {
        notes.push(String::from("condition fails"));
    }
    report.ratios = core::mem::take(&mut ratios);
    report.detail = notes.join("; ");
    Ok(report)
}

/// `P4(γ)` weights from the two integer families
/// (`K` odd, `L` even, `L > K`: `γ = 2K/√(L²−K²)`;
/// `K` odd, `2L > K`: `γ = 2K/√(4L²−K²)`, giving `γ/Δ = K/L`).
pub fn p4_family_weight(big_k: u32, big_l: u32) -> Result<f64> {
    let (k, l) = (f64::from(big_k), f64::from(big_l));
    match (big_k % 2, big_l % 2) {
        (1, 0) if big_l > big_k => Ok(2.0 * k / (l * l - k * k).sqrt()),
        (1, _) if 2 * big_l > big_k => Ok(2.0 * k / (4.0 * l * l - k * k).sqrt()),
        _ => Err(Error::InvalidArgument(format!(
            "(K, L) = ({big_k}, {big_l}) is not in either family"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circulant, complete, empty, unweighted_path};
    use crate::pst::{max_fidelity_scan, pst_certificate};
    use crate::spectral::{eigendecompose, fidelity};
    use core::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    fn k3_scaled(c: f64) -> Graph {
        complete(3).unwrap().scaled(c).unwrap()
    }

    #[test]
    fn double_cone_weights() {
        let g = double_cone(&DoubleConeSpec {
            base: k3_scaled(1.0),
            b: 0,
            alpha: 3f64.sqrt(),
        })
        .unwrap();
        for u in 2..5 {
            assert!((g.weight(0, u) - 1.0).abs() < 1e-12);
            assert!((g.weight(1, u) - 1.0).abs() < 1e-12);
        }
        assert_eq!(g.weight(0, 1), 0.0);
        let p = double_cone(&DoubleConeSpec {
            base: unweighted_path(3).unwrap(),
            b: 0,
            alpha: 3f64.sqrt(),
        })
        .unwrap();
        let expect = [1.0, SQRT_2, 1.0].map(|x| 3f64.sqrt() * x / 2.0);
        for (u, w) in expect.iter().enumerate() {
            assert!((p.weight(0, u + 2) - w).abs() < 1e-12);
        }
        let disconnected = DoubleConeSpec {
            base: empty(2).unwrap(),
            b: 0,
            alpha: 1.0,
        };
        assert_eq!(double_cone(&disconnected), Err(Error::NotConnected));
    }

    #[test]
    fn double_cone_closed_form() {
        let alpha = 3f64.sqrt();
        assert!(double_cone_fidelity(2.0, 0, alpha, 0.0).norm() < 1e-15);
        let f = double_cone_fidelity(2.0 * SQRT_2, 0, alpha, PI / SQRT_2);
        assert!((f - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        for (c, b) in [(1.0, 0u8), (SQRT_2, 0), (1.0, 1), (0.7, 1)] {
            let base = k3_scaled(c);
            let g = double_cone(&DoubleConeSpec { base, b, alpha }).unwrap();
            let d = eigendecompose(&g).unwrap();
            for i in 0..200 {
                let t = i as f64 * 0.05;
                let full = fidelity(&d, 0.into(), 1.into(), t).unwrap();
                let closed = double_cone_fidelity(2.0 * c, b, alpha, t);
                assert!((full - closed).norm() < 1e-10, "c={c} b={b} t={t}");
            }
        }
    }

    #[test]
    fn double_cone_conditions() {
        for n in [1.0, 3.0, 5.0] {
            let r = double_cone_pst_condition((8.0 * n / 3.0).sqrt(), 0, f64::sqrt(n)).unwrap();
            assert!(r.holds, "{}", r.detail);
            assert_eq!(r.ratios[0].class.unwrap().q, 2);
        }
        let r = double_cone_pst_condition(2.0, 0, 3f64.sqrt()).unwrap();
        assert!(!r.holds);
        assert!(r.detail.contains("irrational"));
        let r = double_cone_pst_condition(2.0 * SQRT_2, 0, 3f64.sqrt()).unwrap();
        assert!(r.holds);
        assert!((r.time.unwrap().value() - PI / SQRT_2).abs() < 1e-12);
        // K2 + K2 = K4: the apexes never reach each other perfectly.
        let r = double_cone_pst_condition(1.0, 1, SQRT_2).unwrap();
        assert!(!r.holds, "{}", r.detail);
        assert!(r.detail.contains("disagrees"));
    }

    fn circ15_spec() -> GluedConeSpec {
        let g = circulant(15, &[1, 2, 4]).unwrap();
        let c = circulant(15, &[1, 2, 4, 7]).unwrap().adjacency().clone();
        GluedConeSpec {
            g1: g.clone(),
            g2: g,
            connection: c,
        }
    }

    #[test]
    fn glued_cone_graph() {
        let spec = circ15_spec();
        assert_eq!(spec.parameters().unwrap(), (15, 6.0, 8.0));
        let g = glued_double_cone(&spec).unwrap();
        assert_eq!(g.n(), 32);
        let cert = pst_certificate(&g, 0.into(), 31.into()).unwrap();
        assert_eq!(cert.verdict, Verdict::Yes);
        assert!((cert.time.unwrap().value() - FRAC_PI_4).abs() < 1e-12);

        let k3 = complete(3).unwrap();
        let id = GluedConeSpec {
            g1: k3.clone(),
            g2: k3.clone(),
            connection: Matrix::identity(3),
        };
        assert_eq!(id.parameters().unwrap().2, 1.0);
        let j = GluedConeSpec {
            g1: k3.clone(),
            g2: k3.clone(),
            connection: Matrix::ones(3, 3),
        };
        assert_eq!(j.parameters().unwrap().2, 3.0);
        let p3 = unweighted_path(3).unwrap();
        let bad = GluedConeSpec {
            g1: k3.clone(),
            g2: k3,
            connection: p3.adjacency().clone(),
        };
        assert!(matches!(bad.parameters(), Err(Error::InvalidArgument(_))));
        // distinct circulants from the same family
        let other = GluedConeSpec {
            g2: circulant(15, &[1, 2, 3]).unwrap(),
            ..circ15_spec()
        };
        assert_eq!(glued_double_cone(&other).unwrap().n(), 32);
    }

    #[test]
    fn glued_cone_conditions() {
        let r = glued_cone_pst_condition(15, 6, 8).unwrap();
        assert!(r.holds, "{}", r.detail);
        assert_eq!(
            r.time.unwrap(),
            PiMultiple {
                num: 1,
                den: 4,
                scale: 1.0
            }
        );
        assert!(glued_cone_pst_condition(60, 12, 16).unwrap().holds);
        let r = glued_cone_pst_condition(4, 2, 1).unwrap();
        assert!(!r.holds);
        assert!(r.detail.contains("irrational"));
        assert_eq!(glued_cone_family(2).unwrap(), (15, 6, 8));
        assert_eq!(glued_cone_family(3).unwrap(), (60, 12, 16));
        assert_eq!(glued_cone_family(4).unwrap(), (240, 24, 32));
        for a in 2..8 {
            let (n, k, g) = glued_cone_family(a).unwrap();
            assert!(glued_cone_pst_condition(n, k, g).unwrap().holds);
        }
    }

    #[test]
    fn glued_cone_eigendata_values() {
        let e = glued_cone_eigendata(15.0, 6.0, 8.0);
        assert_eq!(e.alpha, [15.0, -1.0]);
        assert_eq!(e.beta, [3.0, -5.0]);
        let close =
            |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15;
        assert!(close(e.alpha_weights, [1.0 / 32.0, 15.0 / 32.0]));
        assert!(close(e.beta_weights, [5.0 / 16.0, 3.0 / 16.0]));
        assert!((glued_cone_fidelity(15.0, 6.0, 8.0, FRAC_PI_4).norm() - 1.0).abs() < 1e-12);
        let g = glued_double_cone(&circ15_spec()).unwrap();
        let d = eigendecompose(&g).unwrap();
        for i in 0..100 {
            let t = i as f64 * 0.037;
            let full = fidelity(&d, 0.into(), 31.into(), t).unwrap();
            assert!((full - glued_cone_fidelity(15.0, 6.0, 8.0, t)).norm() < 1e-10);
        }
    }

    #[test]
    fn cylindrical_shapes() {
        let k1 = complete(1).unwrap();
        assert_eq!(cylindrical_cone(&k1, &k1, &k1), unweighted_path(5).unwrap());
        let k3 = complete(3).unwrap();
        let g = cylindrical_cone(&k3, &empty(2).unwrap(), &k3);
        assert_eq!(g.n(), 10);
        assert_eq!(g.degrees()[0], 3.0);
        assert_eq!(g.degrees()[4], 6.0);
        let spec = CylindricalConeSpec {
            g1: k3.clone(),
            middle: empty(2).unwrap(),
            g2: k3,
        };
        assert_eq!(spec.parameters().unwrap(), (3, 2.0, 2));
    }

    #[test]
    fn cylindrical_proof_objects() {
        let p = cylindrical_no_pst_check(3, 2, 2).unwrap();
        assert_eq!(p.verdict, Verdict::No);
        assert_eq!(p.case, CylindricalCase::OddOdd);
        assert!(p.witness.is_some());
        let trace = p.instance_trace.clone().unwrap();
        assert!(trace.contains("(-1)") && trace.contains("t·5"), "{trace}");
        assert!(
            cylindrical_no_pst_check(3, 2, 1).unwrap().case == CylindricalCase::IrrationalRoots
        );
        for n in 1..20 {
            for k in 0..n {
                for m in 1..6 {
                    let p = cylindrical_no_pst_check(n, k, m).unwrap();
                    assert_eq!(p.verdict, Verdict::No);
                    if p.case != CylindricalCase::IrrationalRoots {
                        assert!(p.witness.is_some(), "({n},{k},{m})");
                    }
                }
            }
        }
        assert!(cylindrical_no_pst_check(3, 3, 1).is_err());
    }

    #[test]
    fn p4_conditions() {
        let g = 2.0 / 3f64.sqrt();
        let r = p4_pst_condition(g, 0.0).unwrap();
        assert!(r.holds, "{}", r.detail);
        let t = r.time.unwrap().value();
        let d = eigendecompose(&weighted_p4(g, 0.0).unwrap()).unwrap();
        assert!(fidelity(&d, 0.into(), 3.into(), t).unwrap().norm() >= 1.0 - 1e-8);
        let r = p4_pst_condition(1.0, 0.0).unwrap();
        assert!(!r.holds);
        assert!(r.detail.contains("irrational"));
        assert!((p4_family_weight(1, 2).unwrap() - g).abs() < 1e-15);
        let g = p4_family_weight(3, 2).unwrap();
        assert!((g - 6.0 / 7f64.sqrt()).abs() < 1e-15);
        let r = p4_pst_condition(g, 0.0).unwrap();
        assert!(r.holds, "{}", r.detail);
        let d = eigendecompose(&weighted_p4(g, 0.0).unwrap()).unwrap();
        assert!(
            fidelity(&d, 0.into(), 3.into(), r.time.unwrap().value())
                .unwrap()
                .norm()
                >= 1.0 - 1e-8
        );
        let scan = max_fidelity_scan(
            &weighted_p4(1.0, 0.0).unwrap(),
            0.into(),
            3.into(),
            50.0,
            5000,
            60,
        )
        .unwrap();
        assert!(scan.fmax < 1.0 - 1e-3);
    }
}
