//! Seeded random instances in general position.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{ColoredInstance, PointD};

/// Coordinates are `a/q` with `|a| ≤ NUMERATOR_BOUND` and `1 ≤ q ≤ DENOMINATOR_BOUND`.
pub const NUMERATOR_BOUND: i64 = 1000;
pub const DENOMINATOR_BOUND: i64 = 8;
/// lcm(1, …, 8): every generated coordinate times this is an integer.
const LATTICE: i128 = 840;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("dimension {0} is below 2")]
    DimensionTooSmall(usize),
    #[error("invalid size vector: {0}")]
    InvalidSizes(String),
}

/// Checks `sizes` against `d` and `n`: `d+1` entries, each at most `n`,
/// summing to `d·n`.
pub fn check_sizes(d: usize, n: usize, sizes: &[usize]) -> Result<(), GeneratorError> {
    if d < 2 {
        return Err(GeneratorError::DimensionTooSmall(d));
    }
    if sizes.len() != d + 1 {
        return Err(GeneratorError::InvalidSizes(format!(
            "expected {} sizes, got {}",
            d + 1,
            sizes.len()
        )));
    }
    if let Some((i, &s)) = sizes.iter().enumerate().find(|(_, &s)| s > n) {
        return Err(GeneratorError::InvalidSizes(format!("class {i} has {s} points, more than n = {n}")));
    }
    let total: usize = sizes.iter().sum();
    if total != d * n || n == 0 {
        return Err(GeneratorError::InvalidSizes(format!(
            "sizes sum to {total}, expected d·n = {}",
            d * n
        )));
    }
    Ok(())
}

/// Uniformly random unit-by-unit split of `total` into `parts` entries of
/// at most `cap` each. `None` when `parts · cap < total`.
pub fn random_capped_composition<R: Rng + ?Sized>(
    total: usize,
    parts: usize,
    cap: usize,
    rng: &mut R,
) -> Option<Vec<usize>> {
    if parts * cap < total {
        return None;
    }
    let mut out = vec![0; parts];
    for _ in 0..total {
        let open: Vec<usize> = (0..parts).filter(|&i| out[i] < cap).collect();
        out[open[rng.random_range(0..open.len())]] += 1;
    }
    Some(out)
}

/// Random class sizes satisfying the cut hypotheses for `d` and `n`.
pub fn random_admissible_sizes<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Vec<usize> {
    random_capped_composition(d * n, d + 1, n, rng).expect("(d+1)·n ≥ d·n")
}

fn det_i128(m: &mut [Vec<i128>]) -> i128 {
    match m.len() {
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => {
            // Bareiss elimination stays exact and keeps entries small.
            let k = m.len();
            let mut sign = 1;
            let mut prev = 1i128;
            for i in 0..k - 1 {
                if m[i][i] == 0 {
                    match (i + 1..k).find(|&r| m[r][i] != 0) {
                        Some(r) => {
                            m.swap(i, r);
                            sign = -sign;
                        }
                        None => return 0,
                    }
                }
                for r in i + 1..k {
                    for c in i + 1..k {
                        m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
                    }
                }
                prev = m[i][i];
            }
            sign * m[k - 1][k - 1]
        }
    }
}

/// Does `p` together with some `d` earlier points lie on a hyperplane?
fn breaks_general_position(points: &[Vec<i128>], p: &[i128], d: usize) -> bool {
    if points.iter().any(|q| q.as_slice() == p) {
        return true;
    }
    if points.len() < d {
        // Fewer than d+1 points in total: check affine independence of all.
        let mut all: Vec<&[i128]> = points.iter().map(Vec::as_slice).collect();
        all.push(p);
        return !independent(&all, d);
    }
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let mut m: Vec<Vec<i128>> = idx.iter().map(|&i| (0..d).map(|k| points[i][k] - p[k]).collect()).collect();
        if det_i128(&mut m) == 0 {
            return true;
        }
        // Next d-combination of 0..points.len().
        let mut i = d;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < points.len() - d + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Rank test for fewer than `d+1` points via Gaussian elimination over `i128`.
fn independent(pts: &[&[i128]], d: usize) -> bool {
    let mut rows: Vec<Vec<i128>> = pts[1..].iter().map(|q| (0..d).map(|k| q[k] - pts[0][k]).collect()).collect();
    let mut rank = 0;
    for col in 0..d {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, r);
        let pivot = rows[rank].clone();
        for row in rows[rank + 1..].iter_mut() {
            let (a, b) = (pivot[col], row[col]);
            row.iter_mut().zip(&pivot).for_each(|(x, p)| *x = *x * a - p * b);
            let g = row.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
            if g > 1 {
                row.iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank == rows.len()
}

/// Random instance with the given class sizes, coordinates `a/q` with small
/// denominators, resampled point by point until general position holds.
/// The same `seed` always yields the same instance.
pub fn random_instance(d: usize, n: usize, sizes: &[usize], seed: u64) -> Result<ColoredInstance, GeneratorError> {
    check_sizes(d, n, sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = sizes.iter().sum();
    let mut lattice: Vec<Vec<i128>> = Vec::with_capacity(total);
    let mut coords: Vec<Vec<(i64, i64)>> = Vec::with_capacity(total);
    while lattice.len() < total {
        let c: Vec<(i64, i64)> = (0..d)
            .map(|_| {
                let q = rng.random_range(1..=DENOMINATOR_BOUND);
                (rng.random_range(-NUMERATOR_BOUND..=NUMERATOR_BOUND), q)
            })
            .collect();
        let p: Vec<i128> = c.iter().map(|&(a, q)| a as i128 * (LATTICE / q as i128)).collect();
        if !breaks_general_position(&lattice, &p, d) {
            lattice.push(p);
            coords.push(c);
        }
    }
    let mut points = coords.into_iter().map(|c| {
        PointD::new(
            c.into_iter()
                .map(|(a, q)| BigRational::new(BigInt::from(a), BigInt::from(q)))
                .collect(),
        )
        .expect("d ≥ 2")
    });
    let classes = sizes.iter().map(|&s| points.by_ref().take(s).collect()).collect();
    Ok(ColoredInstance::new(d, classes).expect("shape checked above"))
}

/// Random `n` and admissible sizes drawn from `seed`, then the instance.
pub fn random_hypothesis_instance(d: usize, n_range: std::ops::RangeInclusive<usize>, seed: u64) -> ColoredInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.random_range(n_range);
    let sizes = random_admissible_sizes(d, n, &mut rng);
    random_instance(d, n, &sizes, seed).expect("admissible sizes")
}
