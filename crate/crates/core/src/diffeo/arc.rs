use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduces `t` into `[0, 2π)`.
#[inline]
pub fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A proper open arc `(a, b)` of the circle, stored lifted with
/// `0 ≤ a < 2π` and `a < b < a + 2π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalArc {
    a: f64,
    b: f64,
}

impl IntervalArc {
    /// Builds the arc running counter-clockwise from `a` to `b`. An end point
    /// below the start point is read as wrapping once around the circle.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Geometry(format!(
                "non-finite arc end points ({a}, {b})"
            )));
        }
        let len = if b > a { b - a } else { b + TAU - a };
        if !(len > 0.0 && len < TAU) {
            return Err(Error::Geometry(format!(
                "arc ({a}, {b}) must be non-empty and proper (length {len})"
            )));
        }
        let a = wrap(a);
        Ok(Self { a, b: a + len })
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// Representative of `t` in `[a, a + 2π)`.
    pub fn lift(&self, t: f64) -> f64 {
        self.a + wrap(t - self.a)
    }

    /// Open containment.
    pub fn contains(&self, t: f64) -> bool {
        let x = self.lift(t);
        x > self.a && x < self.b
    }

    /// Closed containment.
    pub fn contains_closed(&self, t: f64) -> bool {
        self.lift(t) <= self.b
    }

    /// `other ⊆ self`, comparing closed arcs.
    pub fn contains_arc(&self, other: &IntervalArc) -> bool {
        let s = self.lift(other.a);
        s + other.length() <= self.b
    }

    /// Arc widened by `d` on both sides; `None` once it would cover the circle.
    pub fn dilate(&self, d: f64) -> Option<IntervalArc> {
        IntervalArc::new(self.a - d, self.b + d)
            .ok()
            .filter(|_| self.length() + 2.0 * d < TAU)
    }

    /// Connected components of `self ∩ other`.
    pub fn intersect(&self, other: &IntervalArc) -> Vec<IntervalArc> {
        let mut out = Vec::new();
        for shift in [-TAU, 0.0, TAU] {
            let (oa, ob) = (other.a + shift, other.b + shift);
            let lo = self.a.max(oa);
            let hi = self.b.min(ob);
            if hi > lo {
                if let Ok(arc) = IntervalArc::new(lo, hi) {
                    out.push(arc);
                }
            }
        }
        out
    }
}

/// The three-interval cover `{I_j}` with inner intervals `{Î_j}`.
///
/// Valid configurations satisfy the chain
/// `0 < a₁ < â₁ < b̂₃ < b₃ < a₂ < â₂ < b̂₁ < b₁ < a₃ < â₃ < b̂₂ < b₂ < 2π`
/// (with `b̂₃, b₃` reduced mod 2π), so `0` lies in `I₃ \ (I₁ ∪ I₂)`, no point
/// is in more than two intervals and the inner intervals still cover.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverConfig {
    outer: [IntervalArc; 3],
    inner: [IntervalArc; 3],
    margin: f64,
}

#[derive(Serialize, Deserialize)]
struct CoverJson {
    #[serde(rename = "I")]
    outer: [[f64; 2]; 3],
    #[serde(rename = "Ihat")]
    inner: [[f64; 2]; 3],
    margin: f64,
}

impl Default for CoverConfig {
    fn default() -> Self {
        let arc = |(a, b): (f64, f64)| IntervalArc::new(a, b).expect("default cover is valid");
        Self::new(
            [(0.3, 2.6), (2.2, 4.7), (4.3, TAU + 0.7)].map(arc),
            [(0.45, 2.45), (2.35, 4.55), (4.45, TAU + 0.55)].map(arc),
            0.1,
        )
        .expect("default cover satisfies the ordering chain")
    }
}

impl CoverConfig {
    pub fn new(outer: [IntervalArc; 3], inner: [IntervalArc; 3], margin: f64) -> Result<Self> {
        if !(margin > 0.0 && margin < 0.5) {
            return Err(Error::Geometry(format!(
                "margin {margin} must lie in (0, 1/2)"
            )));
        }
        let cover = Self {
            outer,
            inner,
            margin,
        };
        let chain = cover.ordering_chain();
        if chain[0] <= 0.0 || chain[11] >= TAU || chain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Geometry(format!(
                "end points violate the ordering chain a1 < â1 < b̂3 < b3 < a2 < â2 < b̂1 < b1 < a3 < â3 < b̂2 < b2: {chain:?}"
            )));
        }
        let (lo, hi) = coverage_bounds(&cover.outer);
        if lo < 1 || hi > 2 {
            return Err(Error::Geometry(format!(
                "outer intervals must cover the circle at most twice (multiplicity {lo}..{hi})"
            )));
        }
        if coverage_bounds(&cover.inner).0 < 1 {
            return Err(Error::Geometry(
                "inner intervals do not cover the circle".into(),
            ));
        }
        Ok(cover)
    }

    /// Parses `{"I":[[a1,b1],[a2,b2],[a3,b3]],"Ihat":[...],"margin":0.1}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CoverJson = serde_json::from_str(text)
            .map_err(|e| Error::Geometry(format!("malformed cover configuration: {e}")))?;
        let arcs = |v: [[f64; 2]; 3]| -> Result<[IntervalArc; 3]> {
            Ok([
                IntervalArc::new(v[0][0], v[0][1])?,
                IntervalArc::new(v[1][0], v[1][1])?,
                IntervalArc::new(v[2][0], v[2][1])?,
            ])
        };
        Self::new(arcs(raw.outer)?, arcs(raw.inner)?, raw.margin)
    }

    pub fn to_json(&self) -> String {
        let pairs = |v: &[IntervalArc; 3]| v.map(|a| [a.start(), a.end()]);
        serde_json::to_string(&CoverJson {
            outer: pairs(&self.outer),
            inner: pairs(&self.inner),
            margin: self.margin,
        })
        .expect("cover serializes")
    }

    /// `I_j` for `j = 1, 2, 3`.
    pub fn outer(&self, j: usize) -> IntervalArc {
        self.outer[j - 1]
    }

    /// `Î_j` for `j = 1, 2, 3`.
    pub fn inner(&self, j: usize) -> IntervalArc {
        self.inner[j - 1]
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// The twelve end points in the order the chain requires.
    pub fn ordering_chain(&self) -> [f64; 12] {
        let [i1, i2, i3] = self.outer;
        let [h1, h2, h3] = self.inner;
        [
            i1.start(),
            h1.start(),
            wrap(h3.end()),
            wrap(i3.end()),
            i2.start(),
            h2.start(),
            h1.end(),
            i1.end(),
            i3.start(),
            h3.start(),
            h2.end(),
            i2.end(),
        ]
    }

    /// Largest number of outer intervals containing a common point.
    pub fn max_multiplicity(&self) -> usize {
        coverage_bounds(&self.outer).1
    }

    pub fn inner_covers(&self) -> bool {
        coverage_bounds(&self.inner).0 >= 1
    }
}

/// Min and max number of arcs over the points of the circle (checked on the
/// open gaps between consecutive end points, which is exact for open arcs
/// once end points are checked too).
fn coverage_bounds(arcs: &[IntervalArc]) -> (usize, usize) {
    let mut ends: Vec<f64> = arcs
        .iter()
        .flat_map(|a| [wrap(a.start()), wrap(a.end())])
        .collect();
    ends.sort_by(f64::total_cmp);
    let mut probes: Vec<f64> = ends.clone();
    for (i, &e) in ends.iter().enumerate() {
        let next = if i + 1 < ends.len() {
            ends[i + 1]
        } else {
            ends[0] + TAU
        };
        probes.push(0.5 * (e + next));
    }
    let count = |t: f64| arcs.iter().filter(|a| a.contains(t)).count();
    probes.iter().fold((usize::MAX, 0), |(lo, hi), &t| {
        let c = count(t);
        (lo.min(c), hi.max(c))
    })
}
