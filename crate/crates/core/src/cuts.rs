//! Discrete hamburger cuts.
//!
//! A cut is searched among hyperplanes spanned by at most d input points.
//! Each such hyperplane comes with every assignment of its spanning points
//! to one of the two open sides; an assignment is turned into an actual
//! hyperplane avoiding all points by an exact perturbation
//! ([`realize_strict_separator`]). Any bipartition realizable by a
//! hyperplane is reached this way, so the scan is complete.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::balance::CountVector;
use crate::geometry::{
    lattice::{self, Lattice},
    side_of, validate_general_position, ColoredInstance, ColoredPoint, GeneralPositionReport,
    GeometryError, PointD, Rational, RationalHyperplane, Sign,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("points {indices:?} lie on a common hyperplane")]
    NotInGeneralPosition { indices: Vec<usize> },
    #[error("no hamburger cut exists for {points} points in dimension {d}")]
    NotFound { points: usize, d: usize },
    #[error("assignment cannot be realized: {0}")]
    Unrealizable(String),
}

/// Side chosen for each spanning point, keyed by global point index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SideAssignment {
    pub sides: Vec<(usize, Sign)>,
}

impl SideAssignment {
    /// Bit `j` of `mask` sends `spanning[j]` to `H⁺`, otherwise to `H⁻`.
    pub fn from_mask(spanning: &[usize], mask: u32) -> Self {
        SideAssignment {
            sides: spanning
                .iter()
                .enumerate()
                .map(|(j, &i)| {
                    let side = if mask >> j & 1 == 1 { Sign::Positive } else { Sign::Negative };
                    (i, side)
                })
                .collect(),
        }
    }

    pub fn side_of(&self, index: usize) -> Option<Sign> {
        self.sides.iter().find(|(i, _)| *i == index).map(|&(_, s)| s)
    }
}

/// One hyperplane candidate: spanning subset, its hyperplane and a side assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub spanning: Vec<usize>,
    pub hyperplane: RationalHyperplane,
    pub assignment: SideAssignment,
}

/// Unordered pair of point sets, stored with the side containing the
/// smallest global index first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Bipartition {
    pub fn new(mut a: Vec<usize>, mut b: Vec<usize>) -> Self {
        a.sort_unstable();
        b.sort_unstable();
        if b.first() < a.first() && !b.is_empty() || a.is_empty() {
            std::mem::swap(&mut a, &mut b);
        }
        Bipartition { first: a, second: b }
    }

    fn from_signs(signs: &[i8]) -> Self {
        let (neg, pos): (Vec<usize>, Vec<usize>) = (0..signs.len()).partition(|&i| signs[i] < 0);
        Bipartition::new(neg, pos)
    }
}

/// Spanning points and side assignment from which a separator was realized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningCertificate {
    pub hyperplane: RationalHyperplane,
    pub spanning: Vec<(ColoredPoint, Sign)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    /// Hyperplane containing none of the input points.
    pub separator: RationalHyperplane,
    pub negative: Vec<ColoredPoint>,
    pub positive: Vec<ColoredPoint>,
    pub negative_counts: CountVector,
    pub positive_counts: CountVector,
    pub certificate: SpanningCertificate,
}

impl CutResult {
    /// Bipartition in terms of the global indices of `inst`.
    pub fn bipartition(&self, inst: &ColoredInstance) -> Bipartition {
        let index_of = |cp: &ColoredPoint| {
            inst.points()
                .position(|(c, p)| c == cp.color && *p == cp.point)
                .expect("cut point belongs to the instance")
        };
        Bipartition::new(
            self.negative.iter().map(index_of).collect(),
            self.positive.iter().map(index_of).collect(),
        )
    }
}

/// Independent re-check of every property a cut must have. Returns the
/// list of violated properties (empty when the cut is valid).
pub fn verify_cut(inst: &ColoredInstance, cut: &CutResult) -> Vec<String> {
    let mut failures = Vec::new();
    let d = inst.d();
    let mut neg = vec![0usize; inst.num_colors()];
    let mut pos = vec![0usize; inst.num_colors()];
    for (color, p) in inst.points() {
        match side_of(&cut.separator, p) {
            Ok(Sign::Negative) => neg[color] += 1,
            Ok(Sign::Positive) => pos[color] += 1,
            Ok(Sign::Zero) => failures.push(format!("point {p} lies on the separator")),
            Err(e) => failures.push(e.to_string()),
        }
    }
    for (label, side, expected) in [
        ("negative", &cut.negative, Sign::Negative),
        ("positive", &cut.positive, Sign::Positive),
    ] {
        for cp in side {
            if side_of(&cut.separator, &cp.point).ok() != Some(expected) {
                failures.push(format!("{label} side lists {} which is not on that side", cp.point));
            }
        }
    }
    if neg != cut.negative_counts.counts || pos != cut.positive_counts.counts {
        failures.push("recorded tallies differ from the separator's sides".into());
    }
    for (label, counts) in [("negative", &neg), ("positive", &pos)] {
        let total: usize = counts.iter().sum();
        if total == 0 || !total.is_multiple_of(d) {
            failures.push(format!("{label} side holds {total} points, not a positive multiple of {d}"));
        }
        if counts.iter().any(|&c| d * c > total) {
            failures.push(format!("{label} side is not balanced: {counts:?}"));
        }
    }
    let sizes = inst.class_sizes();
    if neg.iter().zip(&pos).map(|(a, b)| a + b).ne(sizes.iter().copied()) {
        failures.push("tallies do not sum to the class sizes".into());
    }
    failures
}

/// Subsets of `0..n` of size `1..=max_k` in lexicographic order of their
/// (increasing) index sequences.
struct LexSubsets {
    n: usize,
    max_k: usize,
    current: Vec<usize>,
    started: bool,
}

impl LexSubsets {
    fn new(n: usize, max_k: usize) -> Self {
        LexSubsets {
            n,
            max_k,
            current: Vec::new(),
            started: false,
        }
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            if self.n == 0 || self.max_k == 0 {
                return None;
            }
            self.current.push(0);
            return Some(&self.current);
        }
        let last = *self.current.last()?;
        if self.current.len() < self.max_k && last + 1 < self.n {
            self.current.push(last + 1);
            return Some(&self.current);
        }
        while let Some(last) = self.current.pop() {
            if last + 1 < self.n {
                self.current.push(last + 1);
                return Some(&self.current);
            }
        }
        None
    }
}

/// Lazily enumerates every candidate of an instance in deterministic order.
pub struct Candidates<'a> {
    inst: &'a ColoredInstance,
    lattice: Lattice,
    subsets: LexSubsets,
    pending: VecDeque<Candidate>,
}

impl Iterator for Candidates<'_> {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        loop {
            if let Some(c) = self.pending.pop_front() {
                return Some(c);
            }
            let subset = self.subsets.advance()?.to_vec();
            let refs: Vec<&[BigInt]> = subset.iter().map(|&i| self.lattice.points[i].as_slice()).collect();
            let Some((normal, offset)) = lattice::hyperplane_through(&refs, self.inst.d()) else {
                continue;
            };
            let hyperplane = lattice_to_rational(&self.lattice, normal, offset);
            for mask in 0..1u32 << subset.len() {
                self.pending.push_back(Candidate {
                    spanning: subset.clone(),
                    hyperplane: hyperplane.clone(),
                    assignment: SideAssignment::from_mask(&subset, mask),
                });
            }
        }
    }
}

/// Every affinely independent subset of 1..=d points, its canonically
/// completed hyperplane and all 2^k side assignments.
pub fn enumerate_candidates(inst: &ColoredInstance) -> Candidates<'_> {
    let pts: Vec<&PointD> = inst.points().map(|(_, p)| p).collect();
    Candidates {
        inst,
        lattice: Lattice::new(pts.iter().copied()),
        subsets: LexSubsets::new(pts.len(), inst.d()),
        pending: VecDeque::new(),
    }
}

fn lattice_to_rational(lattice: &Lattice, normal: Vec<BigInt>, offset: BigInt) -> RationalHyperplane {
    let normal = normal.into_iter().map(|c| c * &lattice.scale).collect();
    RationalHyperplane::from_integers(normal, offset)
}

/// Solves a small dense rational system; `None` if singular.
fn solve_rational(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        let pivot_rhs = b[col].clone();
        for (r, (row, rhs)) in a.iter_mut().zip(b.iter_mut()).enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = &row[col] / &pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &factor * p;
                }
                *rhs -= &factor * &pivot_rhs;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Perturbs `h` into a hyperplane that avoids every point of `inst`, keeps
/// every off-hyperplane point on its side, and puts each spanning point on
/// the side named by `assignment`.
///
/// With `φ(x) = normal·x − offset` the result is `φ + λψ`, where `ψ` is the
/// affine function with `ψ(s) = ±1` on the spanning points whose gradient
/// lies in their span. A uniform assignment gives a constant `ψ` (a
/// parallel shift); a mixed one tilts `h` about the flat where `ψ = 0`
/// inside it. `λ` is half the smallest blocking value `|φ(p)/ψ(p)|`.
pub fn realize_strict_separator(
    h: &RationalHyperplane,
    assignment: &SideAssignment,
    inst: &ColoredInstance,
) -> Result<RationalHyperplane, CutError> {
    let d = inst.d();
    if h.dim() != d {
        return Err(GeometryError::DimensionMismatch {
            expected: d,
            found: h.dim(),
        }
        .into());
    }
    let pts: Vec<&PointD> = inst.points().map(|(_, p)| p).collect();
    let mut spanning: Vec<(&PointD, Rational)> = Vec::new();
    for &(i, side) in &assignment.sides {
        let p = pts
            .get(i)
            .ok_or_else(|| CutError::Unrealizable(format!("point index {i} out of range")))?;
        if !h.eval(p).is_zero() {
            return Err(CutError::Unrealizable(format!("spanning point {p} is not on the hyperplane")));
        }
        let sigma = match side {
            Sign::Negative => -Rational::one(),
            Sign::Positive => Rational::one(),
            Sign::Zero => return Err(CutError::Unrealizable(format!("point {p} assigned to no side"))),
        };
        spanning.push((p, sigma));
    }
    if spanning.is_empty() {
        return Err(CutError::Unrealizable("empty assignment".into()));
    }

    let values: Vec<Rational> = pts.iter().map(|p| h.eval(p)).collect();
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() && assignment.side_of(i).is_none() {
            return Err(CutError::Unrealizable(format!(
                "point {} lies on the hyperplane without an assigned side",
                pts[i]
            )));
        }
    }

    // ψ(x) = m·x − κ with ψ(s_j) = σ_j and m in the span of s_j − s_0.
    let (s0, sigma0) = (spanning[0].0, spanning[0].1.clone());
    let dirs: Vec<Vec<Rational>> = spanning[1..]
        .iter()
        .map(|(p, _)| p.coords().iter().zip(s0.coords()).map(|(a, b)| a - b).collect())
        .collect();
    let mut m = vec![Rational::zero(); d];
    if spanning.iter().any(|(_, s)| *s != sigma0) {
        let gram = dirs.iter().map(|u| dirs.iter().map(|v| dot(u, v)).collect()).collect();
        let rhs = spanning[1..].iter().map(|(_, s)| s - &sigma0).collect();
        let alpha = solve_rational(gram, rhs)
            .ok_or_else(|| CutError::Unrealizable("spanning points are affinely dependent".into()))?;
        for (a, v) in alpha.iter().zip(&dirs) {
            for (mi, vi) in m.iter_mut().zip(v) {
                *mi += a * vi;
            }
        }
    }
    let kappa = dot(&m, s0.coords()) - &sigma0;

    let mut lambda: Option<Rational> = None;
    for (i, p) in pts.iter().enumerate() {
        if assignment.side_of(i).is_some() {
            continue;
        }
        let psi = dot(&m, p.coords()) - &kappa;
        if psi.is_zero() {
            continue;
        }
        let ratio = (&values[i] / psi).abs();
        if lambda.as_ref().is_none_or(|l| ratio < *l) {
            lambda = Some(ratio);
        }
    }
    let lambda = lambda.map_or_else(Rational::one, |l| l / Rational::from_integer(2.into()));

    let normal = h.normal().iter().zip(&m).map(|(n, mi)| n + &lambda * mi).collect();
    let offset = h.offset() + &lambda * kappa;
    let result = RationalHyperplane::new(normal, offset)?.normalized();
    debug_assert!(pts.iter().enumerate().all(|(i, p)| {
        let s = Sign::of(&result.eval(p));
        match assignment.side_of(i) {
            Some(side) => s == side,
            None => s == Sign::of(&values[i]),
        }
    }));
    Ok(result)
}

/// A valid candidate found by the scan, before realization.
struct Hit {
    spanning: Vec<usize>,
    normal: Vec<BigInt>,
    offset: BigInt,
    mask: u32,
    signs: Vec<i8>,
}

/// Scans all candidates, calling `visit` for each one whose realized cut is
/// valid (both sides balanced, sizes positive multiples of d). `visit`
/// returns `false` to stop the scan.
fn scan_valid(inst: &ColoredInstance, mut visit: impl FnMut(Hit, usize) -> bool) {
    let d = inst.d();
    let colors = inst.colors();
    let n_pts = colors.len();
    let pts: Vec<&PointD> = inst.points().map(|(_, p)| p).collect();
    let lat = Lattice::new(pts.iter().copied());
    let mut subsets = LexSubsets::new(n_pts, d);
    let mut signs = vec![0i8; n_pts];
    while let Some(subset) = subsets.advance() {
        let refs: Vec<&[BigInt]> = subset.iter().map(|&i| lat.points[i].as_slice()).collect();
        let Some((normal, offset)) = lattice::hyperplane_through(&refs, d) else {
            continue;
        };
        let mut neg = vec![0usize; inst.num_colors()];
        let mut pos = neg.clone();
        let mut extra_on_plane = false;
        for (i, p) in lat.points.iter().enumerate() {
            let v = lattice::dot(&normal, p) - &offset;
            signs[i] = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            match signs[i] {
                1 => pos[colors[i]] += 1,
                -1 => neg[colors[i]] += 1,
                _ => extra_on_plane |= !subset.contains(&i),
            }
        }
        if extra_on_plane {
            continue;
        }
        for mask in 0..1u32 << subset.len() {
            let mut neg = neg.clone();
            let mut pos = pos.clone();
            for (j, &i) in subset.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    pos[colors[i]] += 1;
                } else {
                    neg[colors[i]] += 1;
                }
            }
            let (tn, tp): (usize, usize) = (neg.iter().sum(), pos.iter().sum());
            let valid = tn > 0
                && tp > 0
                && tn % d == 0
                && tp % d == 0
                && neg.iter().all(|&c| d * c <= tn)
                && pos.iter().all(|&c| d * c <= tp);
            if !valid {
                continue;
            }
            let mut hit_signs = signs.clone();
            for (j, &i) in subset.iter().enumerate() {
                hit_signs[i] = if mask >> j & 1 == 1 { 1 } else { -1 };
            }
            let hit = Hit {
                spanning: subset.to_vec(),
                normal: normal.clone(),
                offset: offset.clone(),
                mask,
                signs: hit_signs,
            };
            if !visit(hit, tn.abs_diff(tp)) {
                return;
            }
        }
    }
}

/// Bipartitions of all valid cuts reachable from the candidate family.
pub fn valid_cut_bipartitions(inst: &ColoredInstance) -> BTreeSet<Bipartition> {
    let mut found = BTreeSet::new();
    scan_valid(inst, |hit, _| {
        found.insert(Bipartition::from_signs(&hit.signs));
        true
    });
    found
}

/// Finds a discrete hamburger cut of a (d+1)-colored instance in general
/// position: a hyperplane avoiding all points whose open sides are both
/// balanced and hold positive multiples of d points.
///
/// Among all valid cuts the one with the smallest size difference between
/// the sides wins; ties go to the lexicographically first spanning subset.
pub fn hamburger_cut(inst: &ColoredInstance) -> Result<CutResult, CutError> {
    if let GeneralPositionReport::Violation { indices, .. } = validate_general_position(inst) {
        return Err(CutError::NotInGeneralPosition { indices });
    }
    hamburger_cut_in_general_position(inst)
}

/// [`hamburger_cut`] without the general position check.
pub(crate) fn hamburger_cut_in_general_position(inst: &ColoredInstance) -> Result<CutResult, CutError> {
    let d = inst.d();
    let n_pts = inst.num_points();
    let best_possible = if n_pts.is_multiple_of(d) { d * ((n_pts / d) % 2) } else { 0 };
    let mut best: Option<(usize, Hit)> = None;
    scan_valid(inst, |hit, diff| {
        if best.as_ref().is_none_or(|(b, _)| diff < *b) {
            best = Some((diff, hit));
        }
        diff > best_possible
    });
    let (_, hit) = best.ok_or(CutError::NotFound { points: n_pts, d })?;

    let pts: Vec<&PointD> = inst.points().map(|(_, p)| p).collect();
    let lat = Lattice::new(pts.iter().copied());
    let hyperplane = lattice_to_rational(&lat, hit.normal, hit.offset);
    let assignment = SideAssignment::from_mask(&hit.spanning, hit.mask);
    let separator = realize_strict_separator(&hyperplane, &assignment, inst)?;
    Ok(build_cut(inst, separator, hyperplane, &assignment))
}

fn build_cut(
    inst: &ColoredInstance,
    separator: RationalHyperplane,
    hyperplane: RationalHyperplane,
    assignment: &SideAssignment,
) -> CutResult {
    let d = inst.d();
    let mut negative = Vec::new();
    let mut positive = Vec::new();
    let mut negative_counts = CountVector::zeros(inst.num_colors(), d);
    let mut positive_counts = CountVector::zeros(inst.num_colors(), d);
    let mut spanning = Vec::new();
    for (i, (color, p)) in inst.points().enumerate() {
        let cp = ColoredPoint::new(color, p.clone());
        if let Some(side) = assignment.side_of(i) {
            spanning.push((cp.clone(), side));
        }
        if Sign::of(&separator.eval(p)) == Sign::Negative {
            negative_counts.counts[color] += 1;
            negative.push(cp);
        } else {
            positive_counts.counts[color] += 1;
            positive.push(cp);
        }
    }
    CutResult {
        separator,
        negative,
        positive,
        negative_counts,
        positive_counts,
        certificate: SpanningCertificate { hyperplane, spanning },
    }
}
