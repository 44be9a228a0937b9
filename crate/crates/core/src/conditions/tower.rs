//! Positive reals too large for a double, as exp^depth(value).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Values at or below this are exponentiated during normalization.
pub const EXP_LIMIT: f64 = 700.0;

/// exp applied `depth` times to `value`: v, e^v, e^{e^v}, …
///
/// Normalized form: whenever depth > 0 the value exceeds [`EXP_LIMIT`].
/// Numbers of depth ≥ 1 are positive; depth-0 values may have any sign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawTower", from = "RawTower")]
pub struct TowerNumber {
    depth: u32,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct RawTower {
    depth: u32,
    value: f64,
}

impl From<RawTower> for TowerNumber {
    fn from(r: RawTower) -> Self {
        TowerNumber::new(r.depth, r.value)
    }
}

impl From<TowerNumber> for RawTower {
    fn from(t: TowerNumber) -> Self {
        RawTower { depth: t.depth, value: t.value }
    }
}

impl From<f64> for TowerNumber {
    fn from(v: f64) -> Self {
        TowerNumber::new(0, v)
    }
}

impl TowerNumber {
    pub fn new(depth: u32, value: f64) -> TowerNumber {
        let mut t = TowerNumber { depth, value };
        while t.depth > 0 && t.value <= EXP_LIMIT {
            t.value = t.value.exp();
            t.depth -= 1;
        }
        t
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// The value as a double, if it is one.
    pub fn to_f64(&self) -> Option<f64> {
        match self.depth {
            0 => Some(self.value),
            1 if self.value < f64::MAX.ln() => Some(self.value.exp()),
            _ => None,
        }
    }

    /// Natural logarithm. Requires a positive number.
    pub fn ln(&self) -> TowerNumber {
        match self.depth {
            0 => TowerNumber::new(0, self.value.ln()),
            d => TowerNumber { depth: d - 1, value: self.value },
        }
    }

    pub fn exp(&self) -> TowerNumber {
        if self.depth == 0 && self.value <= EXP_LIMIT {
            return TowerNumber::new(0, self.value.exp());
        }
        TowerNumber { depth: self.depth + 1, value: self.value }
    }

    /// log₁₀, for display.
    pub fn log10(&self) -> TowerNumber {
        self.ln().mul(&TowerNumber::from(std::f64::consts::LOG10_E))
    }

    fn is_positive(&self) -> bool {
        self.depth > 0 || self.value > 0.0
    }

    pub fn add(&self, o: &TowerNumber) -> TowerNumber {
        if self.depth == 0 && o.depth == 0 {
            let s = self.value + o.value;
            if s.is_finite() {
                return TowerNumber::from(s);
            }
        }
        let (big, small) = if self.total_cmp(o) == Ordering::Less { (o, self) } else { (self, o) };
        if !big.is_positive() {
            return TowerNumber::from(big.value + small.value);
        }
        let lb = big.ln();
        if small.value == 0.0 && small.depth == 0 {
            return *big;
        }
        let ls = if small.is_positive() { small.ln() } else { TowerNumber::from(small.value.abs()).ln() };
        match (lb.depth, ls.depth) {
            (0, 0) => {
                let r = (ls.value - lb.value).exp();
                let r = if small.is_positive() { r.ln_1p() } else { (-r).ln_1p() };
                TowerNumber::from(lb.value + r).exp()
            }
            // The smaller term is below the precision of the larger one.
            _ => *big,
        }
    }

    pub fn mul(&self, o: &TowerNumber) -> TowerNumber {
        if self.depth == 0 && o.depth == 0 {
            let p = self.value * o.value;
            if p.is_finite() {
                return TowerNumber::from(p);
            }
        }
        // Both factors positive here: one of them is astronomically large.
        self.ln().add(&o.ln()).exp()
    }

    /// self^e for a positive base.
    pub fn pow(&self, e: &TowerNumber) -> TowerNumber {
        if self.depth == 0 && e.depth == 0 {
            let p = self.value.powf(e.value);
            if p.is_finite() {
                return TowerNumber::from(p);
            }
        }
        if self.depth == 0 && self.value <= 1.0 {
            // A huge power of a base ≤ 1 underflows.
            return TowerNumber::from(if self.value == 1.0 { 1.0 } else { 0.0 });
        }
        e.mul(&self.ln()).exp()
    }

    /// Total order consistent with the represented reals.
    pub fn total_cmp(&self, o: &TowerNumber) -> Ordering {
        if self.depth == o.depth {
            return self.value.total_cmp(&o.value);
        }
        if self.depth > 0 && o.depth > 0 {
            return self.ln().total_cmp(&o.ln());
        }
        if self.depth == 0 {
            if self.value <= 0.0 {
                return Ordering::Less;
            }
            return self.ln().total_cmp(&o.ln());
        }
        o.total_cmp(self).reverse()
    }
}

impl PartialOrd for TowerNumber {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.total_cmp(o))
    }
}

impl fmt::Display for TowerNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.depth {
            f.write_str("exp(")?;
        }
        if self.value.abs() >= 1e16 {
            write!(f, "{:e}", self.value)?;
        } else {
            write!(f, "{}", self.value)?;
        }
        for _ in 0..self.depth {
            f.write_str(")")?;
        }
        Ok(())
    }
}
