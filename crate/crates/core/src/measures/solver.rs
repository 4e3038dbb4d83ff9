use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::model::{dot, eval_f, Halfspace, MeasureModel, SphereParam};
use super::target::{in_truncated_target, target_spec, TargetSpec};
use super::MeasureError;
use crate::oracle::{monte_carlo_halfspace_mass, MonteCarloEstimate};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Accept a start once the residual drops to this.
    pub tol: f64,
    pub seed: u64,
    /// Starts through `d` support atoms (ball centers, cell centers),
    /// heaviest atoms first.
    pub structured_starts: usize,
    pub low_discrepancy_starts: usize,
    pub random_starts: usize,
    /// Starts run in parallel batches of this size; the search stops after
    /// the first batch that reaches `tol`.
    pub batch_size: usize,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-6,
            seed: 0,
            structured_starts: 32,
            low_discrepancy_starts: 16,
            random_starts: 16,
            batch_size: 8,
            max_iterations: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSolution {
    pub u: SphereParam,
    /// `f(u)` for the normalized model.
    pub y: Vec<f64>,
    /// Distance from `y` to the target line.
    pub residual: f64,
    pub start_index: usize,
    pub target: TargetSpec<f64>,
    /// Orthonormal basis of the complement of the target line; the
    /// residual is `f(u) − b` expressed in it.
    pub basis: Vec<Vec<f64>>,
}

/// Maps hyperplanes between the model's coordinates and a frame in which
/// every support fits in the unit ball.
struct Frame {
    center: Vec<f64>,
    scale: f64,
}

impl Frame {
    fn to_model(&self, v: &[f64]) -> Vec<f64> {
        let n = &v[1..];
        let mut u = vec![v[0] * self.scale + dot(n, &self.center)];
        u.extend_from_slice(n);
        u
    }
}

/// Orthonormal basis of the complement of `w` (unit) in `R^k`.
fn complement_basis(w: &[f64]) -> Vec<Vec<f64>> {
    let k = w.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k - 1);
    for i in 0..k {
        let mut v = vec![0.0; k];
        v[i] = 1.0;
        for q in std::iter::once(w).chain(basis.iter().map(Vec::as_slice)) {
            let p = dot(&v, q);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= p * y);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
            if basis.len() == k - 1 {
                break;
            }
        }
    }
    basis
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Directions on `S^{d-1}` from a Halton sequence, rejecting points of the
/// cube outside the unit ball.
fn halton_directions(d: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut i = 1;
    while out.len() < count {
        let v: Vec<f64> = (0..d).map(|k| 2.0 * radical_inverse(i, PRIMES[k]) - 1.0).collect();
        i += 1;
        let r2 = dot(&v, &v);
        if r2 <= 1.0 && r2 > 1e-4 {
            let mut v = v;
            normalize(&mut v);
            out.push(v);
        }
    }
    out
}

enum Start {
    /// A full parameter vector in frame coordinates.
    Through(Vec<f64>),
    /// A unit normal; the offset is chosen to halve the total mass.
    Direction(Vec<f64>),
}

/// Normal of the hyperplane through `pts` (`d` points in `R^d`) from the
/// signed maximal minors of the difference matrix.
fn normal_through(pts: &[&[f64]]) -> Vec<f64> {
    let d = pts.len();
    let diffs = DMatrix::from_fn(d - 1, d, |i, k| pts[i + 1][k] - pts[0][k]);
    (0..d)
        .map(|k| {
            let minor = diffs.clone().remove_column(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * minor.determinant()
        })
        .collect()
}

struct Problem<'a> {
    model: &'a MeasureModel,
    frame: Frame,
    offset_b: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl Problem<'_> {
    fn residual(&self, v: &[f64]) -> Vec<f64> {
        let u = match SphereParam::new(self.frame.to_model(v)) {
            Ok(u) => u,
            Err(_) => return vec![f64::INFINITY; self.basis.len()],
        };
        let f = eval_f(self.model, &u);
        let diff: Vec<f64> = f.iter().zip(&self.offset_b).map(|(x, b)| x - b).collect();
        self.basis.iter().map(|q| dot(q, &diff)).collect()
    }

    /// Hyperplanes through `d` atoms at a time, in lex order over atoms
    /// sorted by descending weight.
    fn atom_hyperplanes(&self, limit: usize) -> Vec<Start> {
        let d = self.basis.len();
        let mut atoms = self.model.atoms();
        atoms.sort_by(|a, b| b.1.total_cmp(&a.1));
        let atoms: Vec<Vec<f64>> = atoms
            .into_iter()
            .map(|(p, _)| p.iter().zip(&self.frame.center).map(|(x, c)| (x - c) / self.frame.scale).collect())
            .collect();
        let mut out = Vec::new();
        for combo in (0..atoms.len()).combinations(d) {
            if out.len() >= limit {
                break;
            }
            let pts: Vec<&[f64]> = combo.iter().map(|&i| atoms[i].as_slice()).collect();
            let n = normal_through(&pts);
            let len = dot(&n, &n).sqrt();
            if len < 1e-9 {
                continue;
            }
            let mut v = vec![dot(&n, pts[0]) / len];
            v.extend(n.iter().map(|x| x / len));
            normalize(&mut v);
            out.push(Start::Through(v));
        }
        out
    }

    /// Offset along `normal` splitting the total mass in half.
    fn median_start(&self, normal: &[f64]) -> Vec<f64> {
        let total = |o: f64| {
            let mut v = vec![o];
            v.extend_from_slice(normal);
            match SphereParam::new(self.frame.to_model(&v)) {
                Ok(u) => eval_f(self.model, &u).iter().sum::<f64>(),
                Err(_) => 0.5,
            }
        };
        let (mut lo, mut hi) = (-1.5, 1.5);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if total(mid) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut v = vec![0.5 * (lo + hi)];
        v.extend_from_slice(normal);
        normalize(&mut v);
        v
    }

    /// Levenberg–Marquardt on the sphere in tangent coordinates, retracting
    /// by normalization.
    fn refine(&self, mut v: Vec<f64>, goal: f64, max_iterations: usize) -> (Vec<f64>, f64) {
        let d = self.basis.len();
        let norm = |r: &[f64]| dot(r, r).sqrt();
        let mut r = self.residual(&v);
        let mut current = norm(&r);
        let mut mu = 1e-3;
        let h = 1e-7;
        for _ in 0..max_iterations {
            if current <= goal || !current.is_finite() {
                break;
            }
            let tangent = complement_basis(&v);
            let step = |z: &[f64]| {
                let mut w = v.clone();
                for (t, zk) in tangent.iter().zip(z) {
                    w.iter_mut().zip(t).for_each(|(x, y)| *x += zk * y);
                }
                normalize(&mut w);
                w
            };
            let mut jac = DMatrix::<f64>::zeros(d, d);
            for k in 0..d {
                let mut e = vec![0.0; d];
                e[k] = h;
                let plus = self.residual(&step(&e));
                e[k] = -h;
                let minus = self.residual(&step(&e));
                for i in 0..d {
                    jac[(i, k)] = (plus[i] - minus[i]) / (2.0 * h);
                }
            }
            let res = DVector::from_vec(r.clone());
            let jtj = jac.transpose() * &jac;
            let grad = jac.transpose() * res;
            let scale = jtj.trace() / d as f64;
            if scale.is_nan() || scale <= 0.0 {
                break;
            }
            let mut improved = false;
            while mu < 1e10 {
                let system = &jtj + DMatrix::identity(d, d) * (mu * scale);
                let Some(delta) = system.lu().solve(&(-&grad)) else {
                    mu *= 4.0;
                    continue;
                };
                let len = delta.norm();
                let delta = if len > 0.5 { delta * (0.5 / len) } else { delta };
                let cand = step(delta.as_slice());
                let rc = self.residual(&cand);
                let nc = norm(&rc);
                if nc < current {
                    v = cand;
                    r = rc;
                    current = nc;
                    mu = (mu / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        (v, current)
    }
}

pub fn solve_hamburger(model: &MeasureModel, tol: f64, seed: u64) -> Result<MeasureSolution, MeasureError> {
    solve_hamburger_with(model, &SolverOptions { tol, seed, ..SolverOptions::default() })
}

/// Finds `u` with `f(u)` on the target line, masses rescaled to total 1.
pub fn solve_hamburger_with(model: &MeasureModel, opts: &SolverOptions) -> Result<MeasureSolution, MeasureError> {
    let model = model.normalized();
    let d = model.d();
    let target = target_spec(&model.masses(), d)?;
    let mut w: Vec<f64> = target.c.iter().zip(&target.a).map(|(c, a)| c - a).collect();
    if dot(&w, &w).sqrt() < 1e-12 {
        // The segment collapses to a point; any line through it works.
        w = vec![0.0; d + 1];
        w[target.order[d]] = 1.0;
    }
    normalize(&mut w);
    let (center, radius) = model.bounding_ball();
    let problem = Problem {
        model: &model,
        frame: Frame { center, scale: radius },
        offset_b: target.b.clone(),
        basis: complement_basis(&w),
    };

    let mut starts: Vec<Start> = problem.atom_hyperplanes(opts.structured_starts);
    starts.extend(halton_directions(d, opts.low_discrepancy_starts).into_iter().map(Start::Direction));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        normalize(&mut v);
        starts.push(Start::Direction(v));
    }

    let goal = (opts.tol * 1e-3).max(1e-14);
    let mut best: Option<(usize, Vec<f64>, f64)> = None;
    for (batch_index, batch) in starts.chunks(opts.batch_size.max(1)).enumerate() {
        let results: Vec<(usize, Vec<f64>, f64)> = batch
            .par_iter()
            .enumerate()
            .map(|(k, start)| {
                let start = match start {
                    Start::Through(v) => v.clone(),
                    Start::Direction(dir) => problem.median_start(dir),
                };
                let (v, res) = problem.refine(start, goal, opts.max_iterations);
                (batch_index * opts.batch_size.max(1) + k, v, res)
            })
            .collect();
        for cand in results {
            let better = match &best {
                None => true,
                Some((i, _, r)) => cand.2 < *r || (cand.2 == *r && cand.0 < *i),
            };
            if better {
                best = Some(cand);
            }
        }
        if best.as_ref().is_some_and(|b| b.2 <= opts.tol) {
            break;
        }
    }
    let starts = starts.len();
    let best_residual = best.as_ref().map_or(f64::INFINITY, |b| b.2);
    let Some((start_index, v, residual)) = best.filter(|b| b.2 <= opts.tol) else {
        return Err(MeasureError::ConvergenceFailure { best_residual, starts });
    };
    let u = SphereParam::new(problem.frame.to_model(&v))?;
    let y = eval_f(&model, &u);
    Ok(MeasureSolution { u, y, residual, start_index, target, basis: problem.basis.clone() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureCutReport {
    /// `f(u)` and `f(−u)` for the normalized model.
    pub below: Vec<f64>,
    pub above: Vec<f64>,
    pub total_below: f64,
    pub total_above: f64,
    pub bound: f64,
    pub balanced_below: bool,
    pub balanced_above: bool,
    pub bound_ok: bool,
    pub in_target: bool,
    pub monte_carlo: MonteCarloEstimate,
    pub max_z: f64,
    pub monte_carlo_ok: bool,
}

impl MeasureCutReport {
    pub fn passed(&self) -> bool {
        self.balanced_below && self.balanced_above && self.bound_ok && self.monte_carlo_ok
    }
}

pub const DEFAULT_VERIFY_SAMPLES: usize = 100_000;

pub fn verify_measure_cut(model: &MeasureModel, u: &SphereParam, tol: f64) -> Result<MeasureCutReport, MeasureError> {
    verify_measure_cut_with(model, u, tol, DEFAULT_VERIFY_SAMPLES, 0)
}

/// Checks both sides of `u` analytically, then cross-checks `f(u)` against
/// a Monte Carlo estimate at four standard errors.
pub fn verify_measure_cut_with(
    model: &MeasureModel,
    u: &SphereParam,
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<MeasureCutReport, MeasureError> {
    let model = model.normalized();
    let d = model.d();
    if u.d() != d {
        return Err(MeasureError::InvalidSphereParam);
    }
    let masses = model.masses();
    let target = target_spec(&masses, d)?;
    let below = eval_f(&model, u);
    let above = eval_f(&model, &u.antipode());
    let total_below: f64 = below.iter().sum();
    let total_above: f64 = above.iter().sum();
    let balanced = |y: &[f64], s: f64| y.iter().all(|&x| x <= s / d as f64 + tol);
    let balanced_below = balanced(&below, total_below);
    let balanced_above = balanced(&above, total_above);
    let bound_ok = total_below >= target.bound - tol && total_above >= target.bound - tol;
    let in_target = in_truncated_target(&below, &target, &tol);
    let h: Halfspace = u.halfspace();
    let monte_carlo = monte_carlo_halfspace_mass(&model, &h, samples, seed);
    let max_z = monte_carlo.max_z_score(&below, &masses);
    Ok(MeasureCutReport {
        below,
        above,
        total_below,
        total_above,
        bound: target.bound,
        balanced_below,
        balanced_above,
        bound_ok,
        in_target,
        monte_carlo,
        max_z,
        monte_carlo_ok: max_z <= 4.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::ColorMeasure;

    fn ball(c: &[f64], r: f64) -> ColorMeasure {
        ColorMeasure::Balls { centers: vec![c.to_vec()], weights: vec![1.0], radius: r }
    }

    fn triangle() -> MeasureModel {
        MeasureModel::new(
            2,
            vec![ball(&[0.0, 0.0], 1.0), ball(&[10.0, 0.0], 1.0), ball(&[5.0, 8.0], 1.0)],
        )
        .unwrap()
    }

    fn check(model: &MeasureModel, sol: &MeasureSolution) {
        let rep = verify_measure_cut_with(model, &sol.u, 1e-6, 20_000, 5).unwrap();
        assert!(sol.residual <= 1e-6);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.in_target);
    }

    #[test]
    fn three_separated_discs() {
        let m = triangle();
        let sol = solve_hamburger(&m, 1e-6, 1).unwrap();
        check(&m, &sol);
        assert!(sol.y.iter().sum::<f64>() >= 1.0 / 3.0 - 1e-6);
    }

    #[test]
    fn tiny_discs_at_triangle_vertices() {
        let h = 3f64.sqrt() / 2.0;
        let m = MeasureModel::new(
            2,
            vec![ball(&[0.0, 0.0], 0.01), ball(&[1.0, 0.0], 0.01), ball(&[0.5, h], 0.01)],
        )
        .unwrap();
        let sol = solve_hamburger(&m, 1e-6, 0).unwrap();
        check(&m, &sol);
        let below: f64 = sol.y.iter().sum();
        assert!(below.min(1.0 - below) >= 1.0 / 3.0 - 1e-6);
    }

    #[test]
    fn empty_color_reduces_to_ham_sandwich() {
        let m = MeasureModel::new(
            2,
            vec![
                ball(&[0.0, 0.0], 1.0),
                ball(&[6.0, 1.0], 2.0),
                ColorMeasure::Balls { centers: vec![], weights: vec![], radius: 1.0 },
            ],
        )
        .unwrap();
        let sol = solve_hamburger(&m, 1e-6, 0).unwrap();
        check(&m, &sol);
        // Both discs are bisected.
        assert!((sol.y[0] - 0.25).abs() < 1e-6 && (sol.y[1] - 0.25).abs() < 1e-6);
        assert_eq!(sol.basis.len(), 2);
    }

    #[test]
    fn concentric_discs() {
        let m = MeasureModel::new(
            2,
            vec![ball(&[0.0, 0.0], 1.0), ball(&[0.0, 0.0], 1.0), ball(&[0.0, 0.0], 1.0)],
        )
        .unwrap();
        let sol = solve_hamburger(&m, 1e-6, 0).unwrap();
        check(&m, &sol);
    }

    #[test]
    fn unequal_masses_and_grid() {
        let m = MeasureModel::new(
            2,
            vec![
                ColorMeasure::Balls { centers: vec![vec![0.0, 0.0], vec![3.0, 1.0]], weights: vec![0.25, 0.15], radius: 0.8 },
                ColorMeasure::Grid { origin: vec![-2.0, 2.0], cell_size: 0.5, shape: vec![2, 3], weights: vec![0.05; 6] },
                ColorMeasure::Balls { centers: vec![vec![1.0, -2.0]], weights: vec![0.25], radius: 0.5 },
            ],
        )
        .unwrap();
        let sol = solve_hamburger(&m, 1e-6, 3).unwrap();
        check(&m, &sol);
        assert!(sol.y.iter().sum::<f64>() >= 0.5 - 1e-6);
    }

    #[test]
    fn three_dimensional() {
        let m = MeasureModel::new(
            3,
            vec![
                ball(&[0.0, 0.0, 0.0], 1.0),
                ball(&[4.0, 0.0, 0.0], 1.0),
                ball(&[0.0, 4.0, 0.0], 1.0),
                ball(&[0.0, 0.0, 4.0], 1.0),
            ],
        )
        .unwrap();
        let sol = solve_hamburger(&m, 1e-6, 0).unwrap();
        check(&m, &sol);
        assert!(sol.y.iter().sum::<f64>() >= 0.25 - 1e-6);
    }

    #[test]
    fn verify_flags_everything_on_one_side() {
        let m = triangle();
        let u = SphereParam::new(vec![100.0, 1.0, 0.0]).unwrap();
        let rep = verify_measure_cut(&m, &u, 1e-6).unwrap();
        assert!(!rep.bound_ok);
        assert!(!rep.passed());
    }

    #[test]
    fn unbalanced_model_is_rejected() {
        let m = MeasureModel::new(
            2,
            vec![
                ColorMeasure::Balls { centers: vec![vec![0.0, 0.0]], weights: vec![0.8], radius: 1.0 },
                ColorMeasure::Balls { centers: vec![vec![3.0, 0.0]], weights: vec![0.1], radius: 1.0 },
                ColorMeasure::Balls { centers: vec![vec![0.0, 3.0]], weights: vec![0.1], radius: 1.0 },
            ],
        )
        .unwrap();
        assert!(matches!(solve_hamburger(&m, 1e-6, 0), Err(MeasureError::Unbalanced { color: 0, .. })));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let m = triangle();
        assert_eq!(solve_hamburger(&m, 1e-6, 7).unwrap(), solve_hamburger(&m, 1e-6, 7).unwrap());
    }

    #[test]
    fn complement_basis_is_orthonormal() {
        let mut w = vec![1.0, -2.0, 0.5, 3.0];
        normalize(&mut w);
        let b = complement_basis(&w);
        assert_eq!(b.len(), 3);
        for (i, p) in b.iter().enumerate() {
            assert!(dot(p, &w).abs() < 1e-12);
            for (j, q) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(p, q) - want).abs() < 1e-12);
            }
        }
    }
}
