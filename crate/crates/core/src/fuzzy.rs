//! Triangular fuzzy numbers, membership, alpha-cuts and defuzzification.
//!
//! A [`Tfn`] `(a, b, c)` has linear membership rising from `a` to the mode
//! `b` and falling back to zero at `c`. Terms sitting at the edge of a
//! universe may carry a [`Shoulder`], in which case membership stays at 1
//! beyond the mode on the open side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Triangular fuzzy number with support `[a, c]` and mode `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tfn {
    a: f64,
    b: f64,
    c: f64,
}

impl Tfn {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a > b || b > c {
            return Err(Error::InvalidFuzzyNumber { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    /// A crisp value viewed as a degenerate fuzzy number.
    pub fn crisp(value: f64) -> Result<Self> {
        Self::new(value, value, value)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mode(&self) -> f64 {
        self.b
    }

    pub fn support(&self) -> Interval {
        Interval {
            lo: self.a,
            hi: self.c,
        }
    }

    /// Plain triangular membership, no shoulder.
    pub fn membership(&self, x: f64) -> f64 {
        membership(self, Shoulder::None, x)
    }

    /// The crisp interval `[a + (b - a)α, c - (c - b)α]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        // Pin the endpoints so that α = 0 and α = 1 are exact.
        let (lo, hi) = if alpha == 0.0 {
            (self.a, self.c)
        } else if alpha == 1.0 {
            (self.b, self.b)
        } else {
            (
                self.a + (self.b - self.a) * alpha,
                self.c - (self.c - self.b) * alpha,
            )
        };
        Ok(Interval {
            lo: lo.min(self.b),
            hi: hi.max(self.b),
        })
    }

    /// Vertex-mean centroid `(a + b + c) / 3`.
    pub fn centroid(&self) -> f64 {
        ((self.a + self.b + self.c) / 3.0).clamp(self.a, self.c)
    }

    /// Multiply every vertex by a non-negative factor.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor >= 0.0) {
            return Err(Error::Invalid(format!(
                "scale factor must be finite and non-negative, got {factor}"
            )));
        }
        Self::new(self.a * factor, self.b * factor, self.c * factor)
    }
}

/// Closed real interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::Invalid(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

/// Whether membership plateaus at 1 beyond the mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shoulder {
    #[default]
    None,
    /// Membership is 1 for every `x <= b`; requires `a == b`.
    Left,
    /// Membership is 1 for every `x >= b`; requires `b == c`.
    Right,
}

/// A triangular term together with its shoulder flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzySet {
    tfn: Tfn,
    shoulder: Shoulder,
}

impl FuzzySet {
    pub fn new(tfn: Tfn, shoulder: Shoulder) -> Result<Self> {
        match shoulder {
            Shoulder::Left if tfn.a != tfn.b => Err(Error::InvalidShoulder(format!(
                "left shoulder requires a == b, got {tfn:?}"
            ))),
            Shoulder::Right if tfn.b != tfn.c => Err(Error::InvalidShoulder(format!(
                "right shoulder requires b == c, got {tfn:?}"
            ))),
            _ => Ok(Self { tfn, shoulder }),
        }
    }

    pub fn tfn(&self) -> &Tfn {
        &self.tfn
    }

    pub fn shoulder(&self) -> Shoulder {
        self.shoulder
    }

    pub fn membership(&self, x: f64) -> f64 {
        membership(&self.tfn, self.shoulder, x)
    }
}

/// Membership of `x` in `tfn`, honouring the shoulder flag.
///
/// Total: NaN maps to 0, the result is always in `[0, 1]`.
pub fn membership(tfn: &Tfn, shoulder: Shoulder, x: f64) -> f64 {
    let Tfn { a, b, c } = *tfn;
    if x.is_nan() {
        return 0.0;
    }
    match shoulder {
        Shoulder::Left if x <= b => return 1.0,
        Shoulder::Right if x >= b => return 1.0,
        _ => {}
    }
    let mu = if x == b {
        1.0
    } else if x < a || x > c {
        0.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (c - x) / (c - b)
    };
    mu.clamp(0.0, 1.0)
}

/// Scale non-negative values so that they sum to one.
pub fn normalize(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Normalize("no values".into()));
    }
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Normalize(format!(
            "values must be finite and non-negative, got {bad}"
        )));
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Err(Error::Normalize("all values are zero".into()));
    }
    Ok(values.iter().map(|v| v / total).collect())
}
