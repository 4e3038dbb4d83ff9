//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use hamburger::instances::{random_capped_composition, random_hypothesis_instance, random_instance};
use hamburger::oracle::{brute_force_cuts, monte_carlo_halfspace_mass, simplices_disjoint_exact};
use hamburger::{
    eval_f, hamburger_cut, rainbow_partition, solve_hamburger, target_spec, verify_cut, verify_measure_cut,
    verify_partition, ColorMeasure, ColoredInstance, ColoredPoint, MeasureModel, Sign, SphereParam,
};
use num_rational::Ratio;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    println!(
        "[{}] {id:>2} {name}: {} ({:.1} s)",
        if out.passed { "PASS" } else { "FAIL" },
        out.detail,
        start.elapsed().as_secs_f64()
    );
    out.passed
}

/// Side sizes and balance recomputed from the separator alone.
fn cut_is_valid(inst: &ColoredInstance, cut: &hamburger::CutResult) -> bool {
    let d = inst.d();
    let mut neg = vec![0usize; d + 1];
    let mut pos = vec![0usize; d + 1];
    for (c, p) in inst.points() {
        match hamburger::side_of(&cut.separator, p).unwrap() {
            Sign::Negative => neg[c] += 1,
            Sign::Positive => pos[c] += 1,
            Sign::Zero => return false,
        }
    }
    [neg, pos].iter().all(|side| {
        let total: usize = side.iter().sum();
        total > 0 && total.is_multiple_of(d) && side.iter().all(|&c| d * c <= total)
    }) && verify_cut(inst, cut).is_empty()
}

fn existence(d: usize, count: u64, n: std::ops::RangeInclusive<usize>, seed_base: u64) -> Outcome {
    let ok = (0..count)
        .into_par_iter()
        .filter(|&i| {
            let inst = random_hypothesis_instance(d, n.clone(), seed_base + i);
            hamburger_cut(&inst).is_ok_and(|cut| cut_is_valid(&inst, &cut))
        })
        .count();
    Outcome { passed: ok as u64 == count, detail: format!("{ok}/{count} instances with a verified cut") }
}

/// Exactly `n` rainbow simplices, pairwise disjoint, using every point once.
fn partition_is_valid(inst: &ColoredInstance) -> bool {
    let Ok(pr) = rainbow_partition(inst) else { return false };
    let d = inst.d();
    let n = inst.num_points() / d;
    let mut used: Vec<ColoredPoint> = pr.simplices.iter().flat_map(|s| s.vertices.clone()).collect();
    let mut all: Vec<ColoredPoint> = inst.points().map(|(c, p)| ColoredPoint::new(c, p.clone())).collect();
    used.sort();
    all.sort();
    let disjoint = (0..pr.simplices.len()).all(|i| {
        (i + 1..pr.simplices.len()).all(|j| simplices_disjoint_exact(&pr.simplices[i], &pr.simplices[j]))
    });
    pr.simplices.len() == n
        && pr.simplices.iter().all(|s| s.vertices.len() == d && s.is_rainbow())
        && used == all
        && disjoint
        && verify_partition(inst, &pr).passed()
}

fn partitions(d: usize, count: u64, n: std::ops::RangeInclusive<usize>, seed_base: u64) -> Outcome {
    let ok = (0..count)
        .into_par_iter()
        .filter(|&i| partition_is_valid(&random_hypothesis_instance(d, n.clone(), seed_base + i)))
        .count();
    Outcome { passed: ok as u64 == count, detail: format!("{ok}/{count} partitions verified") }
}

fn oracle_equivalence() -> Outcome {
    let cases: Vec<(usize, u64)> = (0..100).map(|i| (2, i)).chain((0..100).map(|i| (3, i))).collect();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|&(d, i)| {
            let max_n = 12 / d;
            let inst = random_hypothesis_instance(d, 2..=max_n, 50_000 + 1000 * d as u64 + i);
            let brute = brute_force_cuts(&inst).ok()?;
            let fail = |why: &str| Some(format!("d={d} seed {i}: {why}"));
            if brute.is_empty() {
                return fail("oracle found no cut");
            }
            match hamburger_cut(&inst) {
                Ok(cut) if brute.contains(&cut.bipartition(&inst)) => None,
                Ok(_) => fail("cut not among oracle cuts"),
                Err(e) => fail(&e.to_string()),
            }
        })
        .collect();
    Outcome {
        passed: failures.is_empty(),
        detail: format!("{}/200 instances agree with the brute-force oracle {:?}", 200 - failures.len(), failures),
    }
}

fn ham_sandwich() -> Outcome {
    let ok = (0..100u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(70_000 + i);
            let n = rng.random_range(1..=30);
            let inst = random_instance(2, n, &[n, n, 0], 70_000 + i).unwrap();
            let Ok(pr) = rainbow_partition(&inst) else { return false };
            let red_blue = pr.simplices.iter().all(|s| {
                let mut c: Vec<usize> = s.vertices.iter().map(|v| v.color).collect();
                c.sort();
                c == [0, 1]
            });
            red_blue && partition_is_valid(&inst)
        })
        .count();
    Outcome { passed: ok == 100, detail: format!("{ok}/100 noncrossing red-blue perfect matchings") }
}

/// Masses summing to 1 with every entry at most `1/d`.
fn balanced_masses(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..=d).map(|_| -rng.random::<f64>().ln()).collect();
        let s: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|x| x / s).collect();
        if w.iter().all(|&x| x <= 1.0 / d as f64) {
            return w;
        }
    }
}

fn random_ball_model(d: usize, omega: &[f64], rng: &mut ChaCha8Rng) -> MeasureModel {
    let colors = omega
        .iter()
        .map(|&mass| {
            let k = rng.random_range(1..=3);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
            let s: f64 = raw.iter().sum();
            ColorMeasure::Balls {
                centers: (0..k).map(|_| (0..d).map(|_| rng.random_range(-4.0..4.0)).collect()).collect(),
                weights: raw.iter().map(|w| w / s * mass).collect(),
                radius: rng.random_range(0.3..1.2),
            }
        })
        .collect();
    MeasureModel::new(d, colors).unwrap()
}

fn distance_to_segment(y: &[f64], a: &[f64], c: &[f64]) -> f64 {
    let w: Vec<f64> = c.iter().zip(a).map(|(c, a)| c - a).collect();
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let t = if ww > 0.0 {
        (y.iter().zip(a).zip(&w).map(|((y, a), w)| (y - a) * w).sum::<f64>() / ww).clamp(0.0, 1.0)
    } else {
        0.0
    };
    y.iter().zip(a).zip(&w).map(|((y, a), w)| (y - a - t * w).powi(2)).sum::<f64>().sqrt()
}

fn measure_solver() -> Outcome {
    let failures: Vec<String> = (0..50u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(80_000 + i);
            let d = if i % 2 == 0 { 2 } else { 3 };
            let omega = balanced_masses(d, &mut rng);
            let model = random_ball_model(d, &omega, &mut rng);
            let sol = match solve_hamburger(&model, 1e-6, i) {
                Ok(s) => s,
                Err(e) => return Some(format!("model {i}: {e}")),
            };
            let rep = verify_measure_cut(&model, &sol.u, 1e-6).unwrap();
            let spec = target_spec(&model.normalized().masses(), d).unwrap();
            let bound = (0.5f64).min(1.0 - d as f64 * spec.omega_min);
            let dist = distance_to_segment(&sol.y, &spec.a, &spec.c);
            let ok = sol.residual <= 1e-6
                && rep.passed()
                && rep.total_below >= bound - 1e-6
                && rep.total_above >= bound - 1e-6
                && dist <= 1e-6;
            (!ok).then(|| format!("model {i}: residual {:e}, distance {dist:e}, report ok {}", sol.residual, rep.passed()))
        })
        .collect();
    Outcome {
        passed: failures.is_empty(),
        detail: format!("{}/50 models solved and verified {:?}", 50 - failures.len(), failures),
    }
}

fn tightness() -> Outcome {
    let r = 0.01;
    let centers = [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
    let model = MeasureModel::new(
        2,
        centers
            .iter()
            .map(|c| ColorMeasure::Balls { centers: vec![c.to_vec()], weights: vec![1.0 / 3.0], radius: r })
            .collect(),
    )
    .unwrap();
    let scan_tol = 1e-3;
    let balanced = |y: &[f64]| {
        let s: f64 = y.iter().sum();
        y.iter().all(|&x| x <= s / 2.0 + scan_tol)
    };
    // Unoriented directions; both sides are examined for each hyperplane.
    let (found, best) = (0..10_000)
        .into_par_iter()
        .map(|k| {
            let theta = PI * k as f64 / 10_000.0;
            let n = [theta.cos(), theta.sin()];
            let proj: Vec<f64> = centers.iter().map(|c| n[0] * c[0] + n[1] * c[1]).collect();
            let lo = proj.iter().cloned().fold(f64::INFINITY, f64::min) - r;
            let hi = proj.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
            let mut offsets: Vec<f64> = (0..=400).map(|j| lo + (hi - lo) * j as f64 / 400.0).collect();
            for p in &proj {
                offsets.extend((0..=40).map(|j| p - r + 2.0 * r * j as f64 / 40.0));
            }
            let mut found = 0usize;
            let mut best = 0.0f64;
            for o in offsets {
                let u = SphereParam::new(vec![o, n[0], n[1]]).unwrap();
                let below = eval_f(&model, &u);
                let above = eval_f(&model, &u.antipode());
                let min_side = below.iter().sum::<f64>().min(above.iter().sum());
                // Missing every disc leaves one side empty, which is balanced but void.
                if min_side > scan_tol && balanced(&below) && balanced(&above) {
                    found += 1;
                    best = best.max(min_side);
                }
            }
            (found, best)
        })
        .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    let solved = solve_hamburger(&model, 1e-6, 0).map(|sol| {
        let below: f64 = sol.y.iter().sum();
        below.min(1.0 - below)
    });
    let achieved = solved.as_ref().map_or(f64::NAN, |&v| v);
    Outcome {
        passed: found > 0 && best <= 1.0 / 3.0 + 0.05 && achieved >= 1.0 / 3.0 - 1e-6,
        detail: format!(
            "{found} balanced hyperplanes with two nonempty sides, best min side {best:.6}, solver min side {achieved:.9}"
        ),
    }
}

type Q = Ratio<i128>;

/// Both halfspace conditions, the box and the total bounds, written out
/// directly rather than through the library predicate.
fn satisfies_target(y: &[Q], omega: &[Q], d: usize, bound: Q) -> bool {
    let zero = Q::from_integer(0);
    let one = Q::from_integer(1);
    let dq = Q::from_integer(d as i128);
    let total: Q = y.iter().sum();
    let rest: Vec<Q> = omega.iter().zip(y).map(|(w, x)| w - x).collect();
    let rest_total: Q = rest.iter().sum();
    y.iter().zip(omega).all(|(x, w)| *x >= zero && x <= w)
        && y.iter().all(|x| dq * x <= total)
        && rest.iter().all(|x| dq * x <= rest_total)
        && total >= bound
        && total <= one - bound
}

fn target_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(90_000);
    let mut failures = 0usize;
    for _ in 0..100_000 {
        let d = rng.random_range(2..=5usize);
        let k = rng.random_range(1..=60usize);
        // d·k units over d+1 colors, at most k each: every entry ≤ 1/d.
        let units = random_capped_composition(d * k, d + 1, k, &mut rng).unwrap();
        let denom = (d * k) as i128;
        let omega: Vec<Q> = units.iter().map(|&u| Q::new(u as i128, denom)).collect();
        let Ok(spec) = target_spec(&omega, d) else {
            failures += 1;
            continue;
        };
        let two = Q::from_integer(2);
        let sum_ok = spec.a.iter().zip(&spec.c).zip(&spec.b).all(|((a, c), b)| a + c == two * b);
        let b_ok = spec.b.iter().zip(&omega).all(|(b, w)| two * b == *w);
        let bound_ok = spec.bound >= Q::new(1, d as i128 + 1);
        if !(sum_ok
            && b_ok
            && bound_ok
            && satisfies_target(&spec.a, &omega, d, spec.bound)
            && satisfies_target(&spec.c, &omega, d, spec.bound))
        {
            failures += 1;
        }
    }
    Outcome { passed: failures == 0, detail: format!("{}/100000 mass vectors pass", 100_000 - failures) }
}

fn random_mixed_model(d: usize, rng: &mut ChaCha8Rng) -> MeasureModel {
    let colors = (0..=d)
        .map(|_| {
            if rng.random_bool(0.5) {
                let k = rng.random_range(1..=3);
                ColorMeasure::Balls {
                    centers: (0..k).map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).collect(),
                    weights: (0..k).map(|_| rng.random_range(0.1..1.0)).collect(),
                    radius: rng.random_range(0.3..1.5),
                }
            } else {
                let shape: Vec<usize> = (0..d).map(|_| rng.random_range(1..=3)).collect();
                let cells: usize = shape.iter().product();
                ColorMeasure::Grid {
                    origin: (0..d).map(|_| rng.random_range(-2.0..0.5)).collect(),
                    cell_size: rng.random_range(0.3..1.0),
                    shape,
                    weights: (0..cells).map(|_| rng.random_range(0.0..1.0)).collect(),
                }
            }
        })
        .collect();
    MeasureModel::new(d, colors).unwrap()
}

fn eval_vs_monte_carlo() -> Outcome {
    let results: Vec<(f64, f64)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(100_000 + i);
            let d = if i % 2 == 0 { 2 } else { 3 };
            let model = random_mixed_model(d, &mut rng);
            // A hyperplane through the support: random normal, offset near the origin.
            let n: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
            let offset = rng.random_range(-1.5..1.5) * len;
            let mut u = vec![offset];
            u.extend(n);
            let u = SphereParam::new(u).unwrap();
            let f = eval_f(&model, &u);
            let g = eval_f(&model, &u.antipode());
            let masses = model.masses();
            let anti = f.iter().zip(&g).zip(&masses).map(|((x, y), w)| (x + y - w).abs()).fold(0.0, f64::max);
            let est = monte_carlo_halfspace_mass(&model, &u.halfspace(), 1_000_000, 200_000 + i);
            (est.max_z_score(&f, &masses), anti)
        })
        .collect();
    let max_z = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let max_anti = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Outcome {
        passed: max_z <= 4.0 && max_anti <= 1e-9,
        detail: format!("100 pairs, max |z| {max_z:.3}, max antipodality error {max_anti:.2e}"),
    }
}

fn main() {
    let results = [
        run(1, "cut existence, d=2, 500 instances, n in [2,30]", || existence(2, 500, 2..=30, 10_000)),
        run(2, "cut existence, d=3, 200 instances, n in [2,10]", || existence(3, 200, 2..=10, 20_000)),
        run(3, "rainbow partition, d=2, 500 instances", || partitions(2, 500, 1..=30, 30_000)),
        run(4, "rainbow partition, d=3, 200 instances, n <= 10", || partitions(3, 200, 1..=10, 40_000)),
        run(5, "oracle equivalence, 200 instances with N <= 12", oracle_equivalence),
        run(6, "ham sandwich matchings, 100 instances", ham_sandwich),
        run(7, "measure solver, 50 ball mixtures at 1e-6", measure_solver),
        run(8, "tightness on three small discs", tightness),
        run(9, "target algebra, 1e5 mass vectors, d <= 5", target_algebra),
        run(10, "eval_f against 1e6-sample Monte Carlo", eval_vs_monte_carlo),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
