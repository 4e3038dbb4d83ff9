//! Exact rational points, hyperplanes and orientation predicates.
//!
//! Every predicate here is decided in exact arithmetic. Internally the
//! points involved are scaled by the least common multiple of their
//! denominators, so that determinants are evaluated over plain integers;
//! positive scaling preserves every sign the predicates report.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational used for all combinatorial data.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("expected {expected} points, got {found}")]
    WrongPointCount { expected: String, found: usize },
    #[error("points are affinely dependent")]
    AffinelyDependent,
    #[error("hyperplane normal must be nonzero")]
    ZeroNormal,
    #[error("expected {expected} color classes, got {found}")]
    WrongClassCount { expected: usize, found: usize },
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
}

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(x: &T) -> Sign {
        if x.is_positive() {
            Sign::Positive
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Negative),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Positive),
            _ => None,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self.flip()
    }
}

/// Parses `"p/q"`, integers and decimal literals (optionally with an
/// exponent, e.g. `"-1.25e3"`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, GeometryError> {
    let err = || GeometryError::InvalidRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().map_err(|_| err())?);
    let shift = exponent - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    let power = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    Ok(if negative { -value } else { value })
}

/// Formats a rational as `"p"` or `"p/q"`; the inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A point of R^d with exact rational coordinates, d >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointD {
    coords: Vec<Rational>,
}

impl PointD {
    pub fn new(coords: Vec<Rational>) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::DimensionTooSmall(coords.len()));
        }
        Ok(PointD { coords })
    }

    /// Integer point; panics on fewer than two coordinates.
    pub fn from_i64(coords: &[i64]) -> Self {
        PointD::new(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
            .expect("points need at least two coordinates")
    }

    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self, GeometryError> {
        let coords = coords
            .iter()
            .map(|c| parse_rational(c.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        PointD::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rational_to_f64).collect()
    }
}

impl fmt::Display for PointD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coords.iter().map(format_rational).join(", "))
    }
}

/// The hyperplane `normal · x = offset` together with its two open sides
/// `H⁻ = {normal · x < offset}` and `H⁺ = {normal · x > offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalHyperplane {
    normal: Vec<Rational>,
    offset: Rational,
}

impl RationalHyperplane {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self, GeometryError> {
        if normal.len() < 2 {
            return Err(GeometryError::DimensionTooSmall(normal.len()));
        }
        if normal.iter().all(Zero::is_zero) {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(RationalHyperplane { normal, offset })
    }

    pub(crate) fn from_integers(normal: Vec<BigInt>, offset: BigInt) -> Self {
        RationalHyperplane {
            normal: normal.into_iter().map(Rational::from_integer).collect(),
            offset: Rational::from_integer(offset),
        }
        .normalized()
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// Same hyperplane with the two open sides exchanged.
    pub fn negate(&self) -> Self {
        RationalHyperplane {
            normal: self.normal.iter().map(|c| -c).collect(),
            offset: -&self.offset,
        }
    }

    /// `normal · p − offset`; dimensions are not checked.
    pub(crate) fn eval(&self, p: &PointD) -> Rational {
        let dot = self
            .normal
            .iter()
            .zip(p.coords())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
        dot - &self.offset
    }

    /// Rescales by a positive factor so that all coefficients are coprime
    /// integers. The two open sides are unchanged.
    pub fn normalized(&self) -> Self {
        let lcm = self
            .normal
            .iter()
            .chain(std::iter::once(&self.offset))
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .normal
            .iter()
            .chain(std::iter::once(&self.offset))
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let mut scaled: Vec<Rational> = ints
            .into_iter()
            .map(|c| Rational::from_integer(c / &gcd))
            .collect();
        let offset = scaled.pop().expect("offset present");
        RationalHyperplane {
            normal: scaled,
            offset,
        }
    }
}

impl fmt::Display for RationalHyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]·x = {}",
            self.normal.iter().map(format_rational).join(", "),
            format_rational(&self.offset)
        )
    }
}

/// d+1 disjoint color classes of points in R^d; color `i` is class index `i`.
///
/// Points are addressed by a global index running over the classes in
/// order (all points of color 0 first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredInstance {
    d: usize,
    classes: Vec<Vec<PointD>>,
}

impl ColoredInstance {
    pub fn new(d: usize, classes: Vec<Vec<PointD>>) -> Result<Self, GeometryError> {
        if d < 2 {
            return Err(GeometryError::DimensionTooSmall(d));
        }
        if classes.len() != d + 1 {
            return Err(GeometryError::WrongClassCount {
                expected: d + 1,
                found: classes.len(),
            });
        }
        for p in classes.iter().flatten() {
            if p.dim() != d {
                return Err(GeometryError::DimensionMismatch {
                    expected: d,
                    found: p.dim(),
                });
            }
        }
        Ok(ColoredInstance { d, classes })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn classes(&self) -> &[Vec<PointD>] {
        &self.classes
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    pub fn num_points(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// `(color, point)` pairs in global index order.
    pub fn points(&self) -> impl Iterator<Item = (usize, &PointD)> + '_ {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(color, class)| class.iter().map(move |p| (color, p)))
    }

    /// Color of every point in global index order.
    pub fn colors(&self) -> Vec<usize> {
        self.points().map(|(c, _)| c).collect()
    }

    pub fn point(&self, index: usize) -> Option<(usize, &PointD)> {
        self.points().nth(index)
    }

    /// Builds the sub-instance consisting of the given global indices.
    pub fn subset(&self, indices: &[usize]) -> ColoredInstance {
        let all: Vec<(usize, &PointD)> = self.points().collect();
        let mut classes = vec![Vec::new(); self.num_colors()];
        for &i in indices {
            let (c, p) = all[i];
            classes[c].push(p.clone());
        }
        ColoredInstance { d: self.d, classes }
    }
}

/// A point tagged with its color class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredPoint {
    pub color: usize,
    pub point: PointD,
}

impl ColoredPoint {
    pub fn new(color: usize, point: PointD) -> Self {
        ColoredPoint { color, point }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralPositionReport {
    Ok,
    /// Global indices of d+1 points lying on a common hyperplane.
    Violation { indices: Vec<usize>, points: Vec<PointD> },
}

impl GeneralPositionReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, GeneralPositionReport::Ok)
    }
}

fn check_dims(pts: &[PointD], d: usize) -> Result<(), GeometryError> {
    for p in pts {
        if p.dim() != d {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
    }
    Ok(())
}

/// Sign of `det[p_1 − p_0; …; p_d − p_0]`, i.e. of the homogeneous
/// (d+1)×(d+1) determinant with rows `(1, p_i)`.
pub fn orientation(pts: &[PointD]) -> Result<Sign, GeometryError> {
    let d = pts.first().map(PointD::dim).unwrap_or(0);
    if pts.len() != d + 1 || d < 2 {
        return Err(GeometryError::WrongPointCount {
            expected: "d+1".into(),
            found: pts.len(),
        });
    }
    check_dims(pts, d)?;
    let lattice = lattice::Lattice::new(pts.iter());
    let refs: Vec<&[BigInt]> = lattice.points.iter().map(Vec::as_slice).collect();
    Ok(Sign::of(&lattice::orientation_det(&refs)))
}

/// Which open side of `h` the point lies on.
pub fn side_of(h: &RationalHyperplane, p: &PointD) -> Result<Sign, GeometryError> {
    if h.dim() != p.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: h.dim(),
            found: p.dim(),
        });
    }
    Ok(Sign::of(&h.eval(p)))
}

/// Hyperplane through `1 ≤ k ≤ d` affinely independent points.
///
/// The normal is the generalized cross product: `normal · x = det[x; v_1;
/// …; v_{d−1}]` with `v_j = p_j − p_0`. When `k < d` the direction list is
/// completed with the lexicographically first standard basis vectors that
/// keep it independent. The result is scaled to coprime integers.
pub fn hyperplane_through(pts: &[PointD]) -> Result<RationalHyperplane, GeometryError> {
    let d = pts.first().map(PointD::dim).ok_or(GeometryError::WrongPointCount {
        expected: "1..=d".into(),
        found: 0,
    })?;
    if pts.len() > d {
        return Err(GeometryError::WrongPointCount {
            expected: format!("1..={d}"),
            found: pts.len(),
        });
    }
    check_dims(pts, d)?;
    let lattice = lattice::Lattice::new(pts.iter());
    let refs: Vec<&[BigInt]> = lattice.points.iter().map(Vec::as_slice).collect();
    let (normal, offset) =
        lattice::hyperplane_through(&refs, d).ok_or(GeometryError::AffinelyDependent)?;
    // In lattice coordinates x' = s·x, so normal·x' = offset reads (s·normal)·x = offset.
    let normal = normal.into_iter().map(|c| c * &lattice.scale).collect();
    Ok(RationalHyperplane::from_integers(normal, offset))
}

/// Checks that no d+1 points of the union lie on a common hyperplane.
pub fn validate_general_position(inst: &ColoredInstance) -> GeneralPositionReport {
    let d = inst.d();
    let pts: Vec<&PointD> = inst.points().map(|(_, p)| p).collect();
    let lattice = lattice::Lattice::new(pts.iter().copied());
    let refs: Vec<&[BigInt]> = lattice.points.iter().map(Vec::as_slice).collect();
    for combo in (0..pts.len()).combinations(d + 1) {
        let chosen: Vec<&[BigInt]> = combo.iter().map(|&i| refs[i]).collect();
        if lattice::orientation_det(&chosen).is_zero() {
            return GeneralPositionReport::Violation {
                points: combo.iter().map(|&i| pts[i].clone()).collect(),
                indices: combo,
            };
        }
    }
    GeneralPositionReport::Ok
}

/// Integer-lattice arithmetic shared by the predicates and the cut search.
pub(crate) mod lattice {
    use super::*;

    /// Points scaled by the lcm of all coordinate denominators.
    pub(crate) struct Lattice {
        pub scale: BigInt,
        pub points: Vec<Vec<BigInt>>,
    }

    impl Lattice {
        pub fn new<'a>(pts: impl Iterator<Item = &'a PointD> + Clone) -> Lattice {
            let scale = pts
                .clone()
                .flat_map(|p| p.coords().iter())
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let s = Rational::from_integer(scale.clone());
            let points = pts
                .map(|p| p.coords().iter().map(|c| (c * &s).to_integer()).collect())
                .collect();
            Lattice { scale, points }
        }
    }

    pub(crate) fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        match n {
            0 => return BigInt::one(),
            1 => return m[0][0].clone(),
            2 => return &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
            3 => {
                return &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                    - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                    + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
            }
            _ => {}
        }
        // Bareiss fraction-free elimination.
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// `det[p_1 − p_0; …; p_d − p_0]`.
    pub(crate) fn orientation_det(pts: &[&[BigInt]]) -> BigInt {
        let base = pts[0];
        let rows = pts[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        det(rows)
    }

    /// Cofactor normal of d−1 direction rows in R^d.
    fn cross(rows: &[Vec<BigInt>], d: usize) -> Vec<BigInt> {
        (0..d)
            .map(|i| {
                let minor = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let m = det(minor);
                if i % 2 == 0 {
                    m
                } else {
                    -m
                }
            })
            .collect()
    }

    /// Integer hyperplane through `1 ≤ k ≤ d` lattice points, canonically
    /// completed; `None` if the points are affinely dependent.
    pub(crate) fn hyperplane_through(pts: &[&[BigInt]], d: usize) -> Option<(Vec<BigInt>, BigInt)> {
        let k = pts.len();
        if k == 0 || k > d {
            return None;
        }
        let base = pts[0];
        let mut rows: Vec<Vec<BigInt>> = pts[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let missing = d - k;
        let given = rows.len();
        for axes in (0..d).combinations(missing) {
            rows.truncate(given);
            for &axis in &axes {
                let mut e = vec![BigInt::zero(); d];
                e[axis] = BigInt::one();
                rows.push(e);
            }
            let normal = cross(&rows, d);
            if normal.iter().any(|c| !c.is_zero()) {
                let offset = dot(&normal, base);
                return Some((normal, offset));
            }
        }
        None
    }

    pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn line_x1_eq_1() -> RationalHyperplane {
        RationalHyperplane::new(vec![q("1"), q("0")], q("1")).unwrap()
    }

    #[test]
    fn parse_decimals_exactly() {
        assert_eq!(q("0.1"), Rational::new(1.into(), 10.into()));
        assert_eq!(q("-2.50"), Rational::new((-5).into(), 2.into()));
        assert_eq!(q("3/6"), Rational::new(1.into(), 2.into()));
        assert_eq!(q("1.5e2"), Rational::from_integer(150.into()));
        assert_eq!(q("25e-2"), Rational::new(1.into(), 4.into()));
        assert_eq!(q(".5"), Rational::new(1.into(), 2.into()));
        for bad in ["", "1/0", "abc", "1.2.3", "-", "1e", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
        assert_eq!(format_rational(&q("-6/4")), "-3/2");
        assert_eq!(format_rational(&q("7")), "7");
    }

    #[test]
    fn orientation_examples() {
        let tri = [PointD::from_i64(&[0, 0]), PointD::from_i64(&[1, 0]), PointD::from_i64(&[0, 1])];
        assert_eq!(orientation(&tri).unwrap(), Sign::Positive);
        let line = [PointD::from_i64(&[0, 0]), PointD::from_i64(&[1, 1]), PointD::from_i64(&[2, 2])];
        assert_eq!(orientation(&line).unwrap(), Sign::Zero);
        let simplex = [
            PointD::from_i64(&[0, 0, 0]),
            PointD::from_i64(&[1, 0, 0]),
            PointD::from_i64(&[0, 1, 0]),
            PointD::from_i64(&[0, 0, 1]),
        ];
        assert_eq!(orientation(&simplex).unwrap(), Sign::Positive);
    }

    #[test]
    fn orientation_rejects_bad_input() {
        let mixed = [PointD::from_i64(&[0, 0]), PointD::from_i64(&[1, 0, 0]), PointD::from_i64(&[0, 1])];
        assert!(matches!(orientation(&mixed), Err(GeometryError::DimensionMismatch { .. })));
        let short = [PointD::from_i64(&[0, 0]), PointD::from_i64(&[1, 0])];
        assert!(orientation(&short).is_err());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m: Vec<Vec<BigInt>> = vec![
            vec![2.into(), 0.into(), 1.into(), 3.into()],
            vec![0.into(), 0.into(), 4.into(), 1.into()],
            vec![1.into(), 5.into(), 0.into(), 2.into()],
            vec![3.into(), 1.into(), 2.into(), 0.into()],
        ];
        // Laplace expansion along the first row, by hand.
        let minor = |skip: usize| -> BigInt {
            let rows = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, v)| v.clone()).collect())
                .collect();
            lattice::det(rows)
        };
        let expected: BigInt = (0..4)
            .map(|j| {
                let t = &m[0][j] * minor(j);
                if j % 2 == 0 { t } else { -t }
            })
            .sum();
        assert_eq!(lattice::det(m.clone()), expected);
    }

    #[test]
    fn side_of_examples() {
        let h = line_x1_eq_1();
        assert_eq!(side_of(&h, &PointD::from_i64(&[0, 0])).unwrap(), Sign::Negative);
        assert_eq!(side_of(&h, &PointD::from_i64(&[1, 5])).unwrap(), Sign::Zero);
        assert_eq!(side_of(&h.negate(), &PointD::from_i64(&[0, 0])).unwrap(), Sign::Positive);
        assert!(side_of(&h, &PointD::from_i64(&[0, 0, 0])).is_err());
    }

    #[test]
    fn hyperplane_through_examples() {
        let h = hyperplane_through(&[PointD::from_i64(&[0, 0]), PointD::from_i64(&[2, 2])]).unwrap();
        assert_eq!(h.normal(), &[q("1"), q("-1")]);
        assert_eq!(h.offset(), &q("0"));

        let h = hyperplane_through(&[
            PointD::from_i64(&[1, 0, 0]),
            PointD::from_i64(&[0, 1, 0]),
            PointD::from_i64(&[0, 0, 1]),
        ])
        .unwrap();
        assert_eq!(h.normal(), &[q("1"), q("1"), q("1")]);
        assert_eq!(h.offset(), &q("1"));

        let dup = hyperplane_through(&[PointD::from_i64(&[0, 0]), PointD::from_i64(&[0, 0])]);
        assert_eq!(dup, Err(GeometryError::AffinelyDependent));
    }

    #[test]
    fn canonical_completion_uses_first_basis_vectors() {
        // One point in the plane: completed by e_1, so the line is horizontal.
        let h = hyperplane_through(&[PointD::parse(&["1/2", "3"]).unwrap()]).unwrap();
        assert_eq!(h.normal(), &[q("0"), q("-1")]);
        assert_eq!(h.offset(), &q("-3"));
        // Two points in R^3 whose span contains e_1: completion skips it and uses e_2.
        let h = hyperplane_through(&[PointD::from_i64(&[0, 0, 0]), PointD::from_i64(&[1, 0, 0])]).unwrap();
        assert_eq!(h.normal(), &[q("0"), q("0"), q("1")]);
    }

    #[test]
    fn normalization_preserves_sides() {
        let h = RationalHyperplane::new(vec![q("2/3"), q("-4/9")], q("2")).unwrap();
        let n = h.normalized();
        assert_eq!(n.normal(), &[q("3"), q("-2")]);
        assert_eq!(n.offset(), &q("9"));
        let p = PointD::from_i64(&[7, 1]);
        assert_eq!(side_of(&h, &p), side_of(&n, &p));
    }

    #[test]
    fn general_position_examples() {
        let ok = ColoredInstance::new(
            2,
            vec![vec![PointD::from_i64(&[0, 0])], vec![PointD::from_i64(&[1, 0])], vec![PointD::from_i64(&[0, 1])]],
        )
        .unwrap();
        assert!(validate_general_position(&ok).is_ok());

        let bad = ColoredInstance::new(
            2,
            vec![
                vec![PointD::from_i64(&[0, 0]), PointD::from_i64(&[5, 1])],
                vec![PointD::from_i64(&[1, 1])],
                vec![PointD::from_i64(&[2, 2])],
            ],
        )
        .unwrap();
        match validate_general_position(&bad) {
            GeneralPositionReport::Violation { indices, .. } => assert_eq!(indices, vec![0, 2, 3]),
            GeneralPositionReport::Ok => panic!("collinear triple not reported"),
        }

        let coplanar = ColoredInstance::new(
            3,
            vec![
                vec![PointD::from_i64(&[0, 0, 0]), PointD::from_i64(&[1, 0, 0])],
                vec![PointD::from_i64(&[0, 1, 0])],
                vec![PointD::from_i64(&[3, 5, 0])],
                vec![PointD::from_i64(&[0, 0, 1])],
            ],
        )
        .unwrap();
        assert!(!validate_general_position(&coplanar).is_ok());
    }

    #[test]
    fn instance_shape_is_checked() {
        assert!(matches!(
            ColoredInstance::new(2, vec![vec![], vec![]]),
            Err(GeometryError::WrongClassCount { expected: 3, found: 2 })
        ));
        assert!(matches!(
            ColoredInstance::new(2, vec![vec![PointD::from_i64(&[0, 0, 0])], vec![], vec![]]),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        assert!(ColoredInstance::new(1, vec![vec![], vec![]]).is_err());
    }
}
