//! The explicit constants of the equivalence theorems, in tower arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tower::TowerNumber;
use crate::error::{Error, Result};

/// Which formula to evaluate. Inputs are named reals; see [`ConstantKind::inputs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstantKind {
    /// δ = 50 C⁶ (3 + C)², hyperbolicity from Gehring–Hayman and ball separation.
    #[serde(rename = "delta_from_C")]
    DeltaFromC,
    /// δ = 50 C⁶ (1 + C)², thinness of geodesic triangles.
    #[serde(rename = "delta_geodesic")]
    DeltaGeodesic,
    /// τ = e^{(4δ)^{192n(1+δ)}} for domains in Rⁿ.
    #[serde(rename = "euclid_tau")]
    EuclidTau,
    /// C = e^{(9τ)^{n+1}} with τ from [`ConstantKind::EuclidTau`].
    #[serde(rename = "euclid_C")]
    EuclidC,
    /// τ = e^{(2δQ)^{192(1+δ)}} for Q-doubling metric spaces.
    #[serde(rename = "metric_tau")]
    MetricTau,
    /// C = e^{5τ Q^{log₂ 9τ}} with τ from [`ConstantKind::MetricTau`].
    #[serde(rename = "metric_C")]
    MetricC,
    /// C₂ = (210 c₀ C)^{2n² + 5n}.
    #[serde(rename = "C2_llc")]
    C2Llc,
    /// C₁ = e^{C₂^{3 + 4C₂²}} with C₂ from [`ConstantKind::C2Llc`].
    #[serde(rename = "C1_llc")]
    C1Llc,
    /// B = 128 A⁴ e^{(4A)⁶}.
    #[serde(rename = "bhk_B")]
    BhkB,
    /// Ball separation constant of the counterexample, e^{(4/sin(π/24))⁸}.
    #[serde(rename = "counterexample_bs")]
    CounterexampleBs,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 10] = [
        ConstantKind::DeltaFromC,
        ConstantKind::DeltaGeodesic,
        ConstantKind::EuclidTau,
        ConstantKind::EuclidC,
        ConstantKind::MetricTau,
        ConstantKind::MetricC,
        ConstantKind::C2Llc,
        ConstantKind::C1Llc,
        ConstantKind::BhkB,
        ConstantKind::CounterexampleBs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstantKind::DeltaFromC => "delta_from_C",
            ConstantKind::DeltaGeodesic => "delta_geodesic",
            ConstantKind::EuclidTau => "euclid_tau",
            ConstantKind::EuclidC => "euclid_C",
            ConstantKind::MetricTau => "metric_tau",
            ConstantKind::MetricC => "metric_C",
            ConstantKind::C2Llc => "C2_llc",
            ConstantKind::C1Llc => "C1_llc",
            ConstantKind::BhkB => "bhk_B",
            ConstantKind::CounterexampleBs => "counterexample_bs",
        }
    }

    /// Required input names.
    pub fn inputs(self) -> &'static [&'static str] {
        match self {
            ConstantKind::DeltaFromC | ConstantKind::DeltaGeodesic => &["C"],
            ConstantKind::EuclidTau | ConstantKind::EuclidC => &["delta", "n"],
            ConstantKind::MetricTau | ConstantKind::MetricC => &["delta", "Q"],
            ConstantKind::C2Llc | ConstantKind::C1Llc => &["c0", "C", "n"],
            ConstantKind::BhkB => &["A"],
            ConstantKind::CounterexampleBs => &[],
        }
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstantKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<ConstantKind> {
        ConstantKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown constant kind {s}")))
    }
}

fn t(v: f64) -> TowerNumber {
    TowerNumber::from(v)
}

fn get(inputs: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    let v = *inputs.get(key).ok_or_else(|| Error::InvalidInput(format!("missing input {key}")))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidInput(format!("input {key} must be positive, got {v}")));
    }
    Ok(v)
}

fn dimension(inputs: &BTreeMap<String, f64>) -> Result<f64> {
    let n = get(inputs, "n")?;
    if n < 2.0 || n.fract() != 0.0 {
        return Err(Error::InvalidInput(format!("n must be an integer ≥ 2, got {n}")));
    }
    Ok(n)
}

fn euclid_tau(delta: f64, n: f64) -> TowerNumber {
    t(4.0 * delta).pow(&t(192.0 * n * (1.0 + delta))).exp()
}

fn metric_tau(delta: f64, q: f64) -> TowerNumber {
    t(2.0 * delta * q).pow(&t(192.0 * (1.0 + delta))).exp()
}

fn c2_llc(c0: f64, c: f64, n: f64) -> TowerNumber {
    t(210.0 * c0 * c).pow(&t(2.0 * n * n + 5.0 * n))
}

/// Evaluate one formula. Never overflows; values that fit a double come
/// back at depth 0.
pub fn eval_constants(kind: ConstantKind, inputs: &BTreeMap<String, f64>) -> Result<TowerNumber> {
    for key in inputs.keys() {
        if !kind.inputs().contains(&key.as_str()) {
            return Err(Error::InvalidInput(format!("{kind} does not take input {key}")));
        }
    }
    Ok(match kind {
        ConstantKind::DeltaFromC | ConstantKind::DeltaGeodesic => {
            let c = get(inputs, "C")?;
            let shift = if kind == ConstantKind::DeltaFromC { 3.0 } else { 1.0 };
            t(50.0).mul(&t(c).pow(&t(6.0))).mul(&t(shift + c).pow(&t(2.0)))
        }
        ConstantKind::EuclidTau => euclid_tau(get(inputs, "delta")?, dimension(inputs)?),
        ConstantKind::EuclidC => {
            let n = dimension(inputs)?;
            let tau = euclid_tau(get(inputs, "delta")?, n);
            t(9.0).mul(&tau).pow(&t(n + 1.0)).exp()
        }
        ConstantKind::MetricTau => metric_tau(get(inputs, "delta")?, get(inputs, "Q")?),
        ConstantKind::MetricC => {
            let q = get(inputs, "Q")?;
            let tau = metric_tau(get(inputs, "delta")?, q);
            let log2 = t(9.0).mul(&tau).ln().mul(&t(std::f64::consts::LOG2_E));
            t(5.0).mul(&tau).mul(&t(q).pow(&log2)).exp()
        }
        ConstantKind::C2Llc => c2_llc(get(inputs, "c0")?, get(inputs, "C")?, dimension(inputs)?),
        ConstantKind::C1Llc => {
            let c2 = c2_llc(get(inputs, "c0")?, get(inputs, "C")?, dimension(inputs)?);
            let e = t(3.0).add(&t(4.0).mul(&c2.pow(&t(2.0))));
            c2.pow(&e).exp()
        }
        ConstantKind::BhkB => {
            let a = get(inputs, "A")?;
            t(128.0).mul(&t(a).pow(&t(4.0))).mul(&t(4.0 * a).pow(&t(6.0)).exp())
        }
        ConstantKind::CounterexampleBs => {
            let s = (std::f64::consts::PI / 24.0).sin();
            t(4.0 / s).pow(&t(8.0)).exp()
        }
    })
}
