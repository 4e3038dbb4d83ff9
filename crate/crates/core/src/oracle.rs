//! Brute-force ground truth used to cross-check the fast paths.
//!
//! Nothing here shares code with the candidate scan in [`crate::cuts`]:
//! cut validity is decided by enumerating every bipartition and testing
//! strict linear separability with an exact rational LP.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::cuts::Bipartition;
use crate::geometry::{ColoredInstance, PointD, Rational};
use crate::measures::{ColorMeasure, Halfspace, MeasureModel};
use crate::partition::RainbowSimplex;

/// Largest instance `brute_force_cuts` accepts by default.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Name of the generator behind [`monte_carlo_halfspace_mass`].
pub const MONTE_CARLO_RNG: &str = "ChaCha8Rng";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{points} points exceeds the brute-force limit of {limit}")]
    TooLarge { points: usize, limit: usize },
}

/// Phase-one simplex with Bland's rule: is `{x ≥ 0 : A x = b}` nonempty?
fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // Tableau columns: structural, artificial, rhs.
    let width = cols + rows + 1;
    let mut t: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row = Vec::with_capacity(width);
            for v in &a[i] {
                row.push(if flip { -v } else { v.clone() });
            }
            for j in 0..rows {
                row.push(if i == j { Rational::one() } else { Rational::zero() });
            }
            row.push(b[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    // Reduced costs of the phase-one objective Σ artificials.
    let mut cost: Vec<Rational> = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..cols {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }

    while let Some(enter) = (0..cols + rows).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so an entering column always has a pivot.
        let (pivot_row, _) = leave.expect("bounded phase-one objective");
        let pivot = t[pivot_row][enter].clone();
        for v in t[pivot_row].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[pivot_row].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pivot_row && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (v, p) in cost.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
        basis[pivot_row] = enter;
    }
    cost[width - 1].is_zero()
}

/// Exact test of `conv(a) ∩ conv(b) = ∅`. Empty sets are disjoint from everything.
pub fn hulls_disjoint(a: &[PointD], b: &[PointD]) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    let d = a[0].dim();
    // Separated bounding boxes settle most pairs without the LP.
    for axis in 0..d {
        let range = |s: &[PointD]| {
            let vals = s.iter().map(|p| &p.coords()[axis]);
            (vals.clone().min().unwrap().clone(), vals.max().unwrap().clone())
        };
        let (alo, ahi) = range(a);
        let (blo, bhi) = range(b);
        if ahi < blo || bhi < alo {
            return true;
        }
    }
    // Σλ_i a_i − Σμ_j b_j = 0, Σλ = 1, Σμ = 1, λ, μ ≥ 0.
    let cols = a.len() + b.len();
    let mut rows: Vec<Vec<Rational>> = (0..d)
        .map(|axis| {
            a.iter()
                .map(|p| p.coords()[axis].clone())
                .chain(b.iter().map(|q| -&q.coords()[axis]))
                .collect()
        })
        .collect();
    rows.push((0..cols).map(|j| if j < a.len() { Rational::one() } else { Rational::zero() }).collect());
    rows.push((0..cols).map(|j| if j < a.len() { Rational::zero() } else { Rational::one() }).collect());
    let mut rhs = vec![Rational::zero(); d];
    rhs.push(Rational::one());
    rhs.push(Rational::one());
    !feasible(&rows, &rhs)
}

pub fn simplices_disjoint_exact(s1: &RainbowSimplex, s2: &RainbowSimplex) -> bool {
    hulls_disjoint(&s1.points(), &s2.points())
}

/// Every bipartition of `inst` that some hyperplane avoiding all points
/// induces and that satisfies the cut conditions.
pub fn brute_force_cuts(inst: &ColoredInstance) -> Result<BTreeSet<Bipartition>, OracleError> {
    brute_force_cuts_with_limit(inst, BRUTE_FORCE_LIMIT)
}

pub fn brute_force_cuts_with_limit(
    inst: &ColoredInstance,
    limit: usize,
) -> Result<BTreeSet<Bipartition>, OracleError> {
    let n_pts = inst.num_points();
    if n_pts > limit || n_pts > 63 {
        return Err(OracleError::TooLarge {
            points: n_pts,
            limit: limit.min(63),
        });
    }
    let d = inst.d();
    let colors: Vec<usize> = inst.points().map(|(c, _)| c).collect();
    let pts: Vec<PointD> = inst.points().map(|(_, p)| p.clone()).collect();
    let mut found = BTreeSet::new();
    if n_pts < 2 {
        return Ok(found);
    }
    let side_ok = |members: &[usize]| {
        let mut counts = vec![0usize; inst.num_colors()];
        for &i in members {
            counts[colors[i]] += 1;
        }
        let total = members.len();
        total > 0 && total.is_multiple_of(d) && counts.iter().all(|&c| d * c <= total)
    };
    // Point 0 always stays on the first side; bit i of `mask` moves point i+1 across.
    for mask in 1u64..1u64 << (n_pts - 1) {
        let (second, first): (Vec<usize>, Vec<usize>) =
            (0..n_pts).partition(|&i| i > 0 && mask >> (i - 1) & 1 == 1);
        if !side_ok(&first) || !side_ok(&second) {
            continue;
        }
        let a: Vec<PointD> = first.iter().map(|&i| pts[i].clone()).collect();
        let b: Vec<PointD> = second.iter().map(|&i| pts[i].clone()).collect();
        if hulls_disjoint(&a, &b) {
            found.insert(Bipartition::new(first, second));
        }
    }
    Ok(found)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    /// Estimated `μ_i(H⁻)` per color.
    pub mass: Vec<f64>,
    pub std_error: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub rng: &'static str,
}

impl MonteCarloEstimate {
    /// Largest standardized deviation from `analytic`. Each color uses the
    /// larger of the analytic and the empirical standard error.
    pub fn max_z_score(&self, analytic: &[f64], masses: &[f64]) -> f64 {
        let n = self.samples as f64;
        analytic
            .iter()
            .zip(&self.mass)
            .zip(&self.std_error)
            .zip(masses)
            .map(|(((&y, &est), &se), &w)| {
                let p = if w > 0.0 { (y / w).clamp(0.0, 1.0) } else { 0.0 };
                let sigma = (w * (p * (1.0 - p) / n).sqrt()).max(se);
                let diff = (y - est).abs();
                if sigma > 0.0 {
                    diff / sigma
                } else if diff <= 1e-12 * w.max(1.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

fn sample_point(measure: &ColorMeasure, d: usize, pick: &WeightedIndex<f64>, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match measure {
        ColorMeasure::Balls { centers, radius, .. } => {
            let center = &centers[pick.sample(rng)];
            let dir: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
            center.iter().zip(&dir).map(|(c, x)| c + r * x / norm).collect()
        }
        ColorMeasure::Grid { origin, cell_size, shape, .. } => {
            let mut cell = pick.sample(rng);
            let mut index = vec![0usize; d];
            for axis in (0..d).rev() {
                index[axis] = cell % shape[axis];
                cell /= shape[axis];
            }
            (0..d)
                .map(|axis| origin[axis] + cell_size * (index[axis] as f64 + rng.random::<f64>()))
                .collect()
        }
    }
}

/// Monte Carlo estimate of `μ_i(H⁻)` for every color, with standard errors.
/// Color `i` draws from stream `i` of a ChaCha8 generator seeded by `seed`.
pub fn monte_carlo_halfspace_mass(
    measure: &MeasureModel,
    h: &Halfspace,
    samples: usize,
    seed: u64,
) -> MonteCarloEstimate {
    let samples = samples.max(1);
    let d = measure.d();
    let mut mass = Vec::new();
    let mut std_error = Vec::new();
    for (color, cm) in measure.colors().iter().enumerate() {
        let total = cm.mass();
        let weights = cm.weights();
        if total <= 0.0 {
            mass.push(0.0);
            std_error.push(0.0);
            continue;
        }
        let pick = WeightedIndex::new(weights.iter().copied()).expect("positive total weight");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(color as u64);
        let hits = (0..samples)
            .filter(|_| h.contains_below(&sample_point(cm, d, &pick, &mut rng)))
            .count();
        let p = hits as f64 / samples as f64;
        mass.push(total * p);
        std_error.push(total * (p * (1.0 - p) / samples as f64).sqrt());
    }
    MonteCarloEstimate {
        mass,
        std_error,
        samples,
        seed,
        rng: MONTE_CARLO_RNG,
    }
}
