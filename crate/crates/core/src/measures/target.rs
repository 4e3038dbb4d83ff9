use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

use super::MeasureError;

/// Scalars the target construction works over: `f64` in the solver and
/// exact rationals in tests.
pub trait Scalar: Clone + PartialOrd + Num + FromPrimitive + Debug {}
impl<T: Clone + PartialOrd + Num + FromPrimitive + Debug> Scalar for T {}

/// The segment the solver aims for and the box it lives in.
///
/// All vectors are indexed by the original color order. `order` lists the
/// colors by descending mass, so `order[d]` is a color of minimal mass.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetSpec<T> {
    pub d: usize,
    pub omega: Vec<T>,
    pub order: Vec<usize>,
    pub omega_min: T,
    pub t: T,
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub c: Vec<T>,
    /// Guaranteed lower bound on the total mass of each side.
    pub bound: T,
}

fn num<T: Scalar>(k: usize) -> T {
    T::from_usize(k).expect("small integers are representable")
}

/// Builds the target for masses `omega` (summing to 1) of a balanced model.
pub fn target_spec<T: Scalar>(omega: &[T], d: usize) -> Result<TargetSpec<T>, MeasureError> {
    if omega.len() != d + 1 || d < 2 {
        return Err(MeasureError::WrongColorCount { expected: d + 1, found: omega.len() });
    }
    let slack = T::from_f64(1e-9).unwrap_or_else(T::zero);
    let one = T::one();
    let dd: T = num(d);
    let sum = omega.iter().cloned().fold(T::zero(), |s, x| s + x);
    let diff = if sum > one { sum.clone() - one.clone() } else { one.clone() - sum.clone() };
    if diff > slack {
        return Err(MeasureError::NotNormalized(format!("{sum:?}")));
    }
    for (color, w) in omega.iter().enumerate() {
        if *w < T::zero() || dd.clone() * w.clone() > one.clone() + slack.clone() {
            return Err(MeasureError::Unbalanced { color, mass: format!("{w:?}") });
        }
    }

    let mut order: Vec<usize> = (0..=d).collect();
    // Stable, so equal masses keep their color order.
    order.sort_by(|&i, &j| omega[j].partial_cmp(&omega[i]).expect("masses are comparable"));
    let min_color = order[d];
    let omega_min = omega[min_color].clone();

    let half = one.clone() / num(2);
    let inv_d = one.clone() / dd.clone();
    let t1 = one.clone() / num(2 * d);
    let t2 = inv_d - omega_min.clone();
    let t = if t1 < t2 { t1 } else { t2 };

    let mut a = vec![T::zero(); d + 1];
    let mut c = vec![T::zero(); d + 1];
    for color in 0..=d {
        if color == min_color {
            c[color] = omega_min.clone();
        } else {
            a[color] = t.clone();
            c[color] = omega[color].clone() - t.clone();
        }
    }
    let b = omega.iter().map(|w| w.clone() / num(2)).collect();
    let other = one - dd * omega_min.clone();
    let bound = if half < other { half } else { other };
    Ok(TargetSpec { d, omega: omega.to_vec(), order, omega_min, t, a, b, c, bound })
}

/// Is `y` a balanced split with a balanced complement, inside the box
/// `0 ≤ y ≤ ω`, and with total between `bound` and `1 − bound`? Every
/// inequality is relaxed by `tol`.
pub fn in_truncated_target<T: Scalar>(y: &[T], spec: &TargetSpec<T>, tol: &T) -> bool {
    if y.len() != spec.omega.len() {
        return false;
    }
    let dd: T = num(spec.d);
    let sum = |v: &mut dyn Iterator<Item = T>| v.fold(T::zero(), |s, x| s + x);
    let total = sum(&mut y.iter().cloned());
    let rest: Vec<T> = spec.omega.iter().zip(y).map(|(w, x)| w.clone() - x.clone()).collect();
    let rest_total = sum(&mut rest.iter().cloned());
    let in_box = y
        .iter()
        .zip(&spec.omega)
        .all(|(x, w)| *x >= T::zero() - tol.clone() && *x <= w.clone() + tol.clone());
    let balanced = y.iter().all(|x| *x <= total.clone() / dd.clone() + tol.clone());
    let co_balanced = rest.iter().all(|x| *x <= rest_total.clone() / dd.clone() + tol.clone());
    let one = T::one();
    let sized = total >= spec.bound.clone() - tol.clone()
        && total <= one - spec.bound.clone() + tol.clone();
    in_box && balanced && co_balanced && sized
}
