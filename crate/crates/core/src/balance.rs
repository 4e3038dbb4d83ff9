//! Balancedness of per-color counts and halfspace tallies.

use crate::geometry::{side_of, ColoredInstance, GeometryError, PointD, RationalHyperplane, Sign};

/// Number of points of each color inside some region.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountVector {
    pub counts: Vec<usize>,
    pub d: usize,
}

impl CountVector {
    pub fn new(counts: Vec<usize>, d: usize) -> Self {
        CountVector { counts, d }
    }

    pub fn zeros(colors: usize, d: usize) -> Self {
        CountVector {
            counts: vec![0; colors],
            d,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Every color holds at most a 1/d share: `d · counts[i] ≤ Σ counts`.
    pub fn is_balanced(&self) -> bool {
        let total = self.total();
        self.counts.iter().all(|&c| self.d * c <= total)
    }
}

pub fn is_balanced(cv: &CountVector) -> bool {
    cv.is_balanced()
}

/// Exact per-color counts on both open sides of a hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfspaceTally {
    pub negative: CountVector,
    pub positive: CountVector,
    /// `(color, point)` pairs lying on the hyperplane itself.
    pub on_hyperplane: Vec<(usize, PointD)>,
}

pub fn halfspace_tally(
    inst: &ColoredInstance,
    h: &RationalHyperplane,
) -> Result<HalfspaceTally, GeometryError> {
    let colors = inst.num_colors();
    let mut tally = HalfspaceTally {
        negative: CountVector::zeros(colors, inst.d()),
        positive: CountVector::zeros(colors, inst.d()),
        on_hyperplane: Vec::new(),
    };
    for (color, p) in inst.points() {
        match side_of(h, p)? {
            Sign::Negative => tally.negative.counts[color] += 1,
            Sign::Positive => tally.positive.counts[color] += 1,
            Sign::Zero => tally.on_hyperplane.push((color, p.clone())),
        }
    }
    Ok(tally)
}
