//! Recursive rainbow-simplex partitions and the planar color-merging reduction.

use thiserror::Error;

use crate::cuts::{hamburger_cut_in_general_position, CutError, CutResult};
use crate::geometry::{
    hyperplane_through, side_of, validate_general_position, ColoredInstance, ColoredPoint,
    GeneralPositionReport, GeometryError, PointD, Sign,
};
use crate::oracle::simplices_disjoint_exact;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("instance violates the partition hypotheses: {0}")]
    Hypothesis(String),
}

/// d points of d distinct colors, spanning a (d−1)-simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowSimplex {
    pub vertices: Vec<ColoredPoint>,
}

impl RainbowSimplex {
    pub fn is_rainbow(&self) -> bool {
        let mut colors: Vec<usize> = self.vertices.iter().map(|v| v.color).collect();
        colors.sort_unstable();
        colors.windows(2).all(|w| w[0] != w[1])
    }

    pub fn points(&self) -> Vec<PointD> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }
}

/// The cuts performed by the recursion; leaves are the emitted simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutTree {
    Leaf(RainbowSimplex),
    Node {
        cut: Box<CutResult>,
        negative: Box<CutTree>,
        positive: Box<CutTree>,
    },
}

impl CutTree {
    /// Leaves in tree order, negative subtree first.
    pub fn simplices(&self) -> Vec<RainbowSimplex> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<RainbowSimplex>) {
        match self {
            CutTree::Leaf(s) => out.push(s.clone()),
            CutTree::Node { negative, positive, .. } => {
                negative.collect(out);
                positive.collect(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CutTree::Leaf(_) => 0,
            CutTree::Node { negative, positive, .. } => 1 + negative.depth().max(positive.depth()),
        }
    }

    fn vertices(&self) -> Vec<ColoredPoint> {
        self.simplices().into_iter().flat_map(|s| s.vertices).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    pub simplices: Vec<RainbowSimplex>,
    pub cut_tree: CutTree,
}

/// Checks `Σ|X_i| = dn` with `n ≥ 1`, `|X_i| ≤ n`, distinct points and
/// general position.
pub fn check_hypotheses(inst: &ColoredInstance) -> Result<(), PartitionError> {
    let d = inst.d();
    let total = inst.num_points();
    if total == 0 || !total.is_multiple_of(d) {
        return Err(PartitionError::Hypothesis(format!(
            "{total} points is not a positive multiple of d = {d}"
        )));
    }
    let n = total / d;
    if let Some((color, size)) = inst.class_sizes().into_iter().enumerate().find(|&(_, s)| s > n) {
        return Err(PartitionError::Hypothesis(format!(
            "color {color} has {size} points, more than n = {n}"
        )));
    }
    let mut pts: Vec<&PointD> = inst.points().map(|(_, p)| p).collect();
    pts.sort();
    if pts.windows(2).any(|w| w[0] == w[1]) {
        return Err(PartitionError::Hypothesis("color classes share a point".into()));
    }
    if let GeneralPositionReport::Violation { points, .. } = validate_general_position(inst) {
        let listed: Vec<String> = points.iter().map(ToString::to_string).collect();
        return Err(PartitionError::Hypothesis(format!(
            "points {} lie on a common hyperplane",
            listed.join(", ")
        )));
    }
    Ok(())
}

/// Partitions `dn` points of d+1 colors into n pairwise disjoint rainbow
/// (d−1)-simplices by recursive hamburger cuts.
pub fn rainbow_partition(inst: &ColoredInstance) -> Result<PartitionResult, PartitionError> {
    check_hypotheses(inst)?;
    let cut_tree = partition_rec(inst)?;
    Ok(PartitionResult {
        simplices: cut_tree.simplices(),
        cut_tree,
    })
}

fn sub_instance(d: usize, colors: usize, points: &[ColoredPoint]) -> ColoredInstance {
    let mut classes = vec![Vec::new(); colors];
    for cp in points {
        classes[cp.color].push(cp.point.clone());
    }
    ColoredInstance::new(d, classes).expect("sub-instance of a valid instance")
}

fn partition_rec(inst: &ColoredInstance) -> Result<CutTree, PartitionError> {
    let d = inst.d();
    if inst.num_points() == d {
        let simplex = RainbowSimplex {
            vertices: inst.points().map(|(c, p)| ColoredPoint::new(c, p.clone())).collect(),
        };
        if !simplex.is_rainbow() {
            return Err(PartitionError::Hypothesis("base case is not rainbow".into()));
        }
        return Ok(CutTree::Leaf(simplex));
    }
    let cut = hamburger_cut_in_general_position(inst)?;
    let neg = sub_instance(d, inst.num_colors(), &cut.negative);
    let pos = sub_instance(d, inst.num_colors(), &cut.positive);
    let (negative, positive) = if neg.num_points() <= pos.num_points() {
        rayon::join(|| partition_rec(&neg), || partition_rec(&pos))
    } else {
        let (p, n) = rayon::join(|| partition_rec(&pos), || partition_rec(&neg));
        (n, p)
    };
    Ok(CutTree::Node {
        cut: Box::new(cut),
        negative: Box::new(negative?),
        positive: Box::new(positive?),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionFailure {
    WrongCount { expected: usize, found: usize },
    VerticesDiffer,
    NotRainbow { simplex: usize },
    Degenerate { simplex: usize },
    Intersecting { first: usize, second: usize },
    SeparatorViolated { depth: usize },
}

impl std::fmt::Display for PartitionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartitionFailure::WrongCount { expected, found } => {
                write!(f, "expected {expected} simplices, found {found}")
            }
            PartitionFailure::VerticesDiffer => write!(f, "simplex vertices are not the input points"),
            PartitionFailure::NotRainbow { simplex } => write!(f, "simplex {simplex} repeats a color"),
            PartitionFailure::Degenerate { simplex } => write!(f, "simplex {simplex} is affinely dependent"),
            PartitionFailure::Intersecting { first, second } => {
                write!(f, "simplices {first} and {second} intersect")
            }
            PartitionFailure::SeparatorViolated { depth } => {
                write!(f, "cut at depth {depth} does not separate its subtrees")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionReport {
    pub failures: Vec<PartitionFailure>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Independent check of a partition: simplex count, vertex multiset,
/// rainbow property, nondegeneracy, exact pairwise disjointness, and that
/// every recorded cut separates the simplices of its two subtrees.
pub fn verify_partition(inst: &ColoredInstance, pr: &PartitionResult) -> PartitionReport {
    let mut failures = Vec::new();
    let d = inst.d();
    let expected = inst.num_points() / d;
    if !inst.num_points().is_multiple_of(d) || pr.simplices.len() != expected {
        failures.push(PartitionFailure::WrongCount {
            expected,
            found: pr.simplices.len(),
        });
    }

    let mut given: Vec<ColoredPoint> = inst.points().map(|(c, p)| ColoredPoint::new(c, p.clone())).collect();
    let mut used: Vec<ColoredPoint> = pr.simplices.iter().flat_map(|s| s.vertices.iter().cloned()).collect();
    given.sort();
    used.sort();
    if given != used {
        failures.push(PartitionFailure::VerticesDiffer);
    }

    for (i, s) in pr.simplices.iter().enumerate() {
        if s.vertices.len() != d || !s.is_rainbow() {
            failures.push(PartitionFailure::NotRainbow { simplex: i });
        }
        if s.vertices.len() <= d && hyperplane_through(&s.points()).is_err() {
            failures.push(PartitionFailure::Degenerate { simplex: i });
        }
    }

    for i in 0..pr.simplices.len() {
        for j in i + 1..pr.simplices.len() {
            if !simplices_disjoint_exact(&pr.simplices[i], &pr.simplices[j]) {
                failures.push(PartitionFailure::Intersecting { first: i, second: j });
            }
        }
    }

    check_tree(&pr.cut_tree, 0, &mut failures);
    PartitionReport { failures }
}

fn check_tree(tree: &CutTree, depth: usize, failures: &mut Vec<PartitionFailure>) {
    if let CutTree::Node { cut, negative, positive } = tree {
        let on = |t: &CutTree, side: Sign| {
            t.vertices()
                .iter()
                .all(|v| side_of(&cut.separator, &v.point).ok() == Some(side))
        };
        if !on(negative, Sign::Negative) || !on(positive, Sign::Positive) {
            failures.push(PartitionFailure::SeparatorViolated { depth });
        }
        check_tree(negative, depth + 1, failures);
        check_tree(positive, depth + 1, failures);
    }
}

/// Result of merging r > 3 planar color classes down to three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedClasses {
    pub instance: ColoredInstance,
    /// Original colors that make up each merged color.
    pub groups: Vec<Vec<usize>>,
}

/// Repeatedly merges the two smallest classes (ties by position) until
/// three remain. Fewer than three classes are padded with empty ones.
pub fn merge_color_classes_2d(
    classes: &[Vec<PointD>],
    n: usize,
) -> Result<MergedClasses, PartitionError> {
    let total: usize = classes.iter().map(Vec::len).sum();
    if total != 2 * n {
        return Err(PartitionError::Hypothesis(format!("{total} points is not 2n = {}", 2 * n)));
    }
    if let Some(big) = classes.iter().position(|c| c.len() > n) {
        return Err(PartitionError::Hypothesis(format!(
            "color {big} has {} points, more than n = {n}",
            classes[big].len()
        )));
    }
    let mut groups: Vec<(Vec<usize>, Vec<PointD>)> =
        classes.iter().cloned().enumerate().map(|(i, c)| (vec![i], c)).collect();
    while groups.len() < 3 {
        groups.push((Vec::new(), Vec::new()));
    }
    while groups.len() > 3 {
        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by_key(|&i| (groups[i].1.len(), i));
        let (a, b) = (order[0].min(order[1]), order[0].max(order[1]));
        let (colors, pts) = groups.remove(b);
        groups[a].0.extend(colors);
        groups[a].1.extend(pts);
    }
    let (groups, merged): (Vec<_>, Vec<_>) = groups.into_iter().unzip();
    let instance = ColoredInstance::new(2, merged)?;
    Ok(MergedClasses { instance, groups })
}

/// One edge of a planar matching, with the original colors of its ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingEdge {
    pub ends: [PointD; 2],
    pub original_colors: [usize; 2],
    pub merged_colors: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredMatching {
    pub edges: Vec<MatchingEdge>,
    /// Indices of edges whose ends share an original color.
    pub same_original_color: Vec<usize>,
    pub partition: PartitionResult,
    pub merged: MergedClasses,
}

/// Noncrossing perfect matching of r-colored planar points with no edge
/// inside a color: merge to three classes, then partition.
pub fn noncrossing_matching(classes: &[Vec<PointD>], n: usize) -> Result<ColoredMatching, PartitionError> {
    let merged = merge_color_classes_2d(classes, n)?;
    let partition = rainbow_partition(&merged.instance)?;
    let original = |p: &PointD| {
        classes
            .iter()
            .position(|c| c.contains(p))
            .expect("matched point comes from the input")
    };
    let edges: Vec<MatchingEdge> = partition
        .simplices
        .iter()
        .map(|s| {
            let (a, b) = (&s.vertices[0], &s.vertices[1]);
            MatchingEdge {
                ends: [a.point.clone(), b.point.clone()],
                original_colors: [original(&a.point), original(&b.point)],
                merged_colors: [a.color, b.color],
            }
        })
        .collect();
    let same_original_color = edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.original_colors[0] == e.original_colors[1])
        .map(|(i, _)| i)
        .collect();
    Ok(ColoredMatching {
        edges,
        same_original_color,
        partition,
        merged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_point() -> ColoredInstance {
        ColoredInstance::new(
            2,
            vec![
                vec![PointD::from_i64(&[0, 0]), PointD::from_i64(&[9, 7])],
                vec![PointD::from_i64(&[1, 5])],
                vec![PointD::from_i64(&[8, 2])],
            ],
        )
        .unwrap()
    }

    fn seg(a: (usize, [i64; 2]), b: (usize, [i64; 2])) -> RainbowSimplex {
        RainbowSimplex {
            vertices: vec![
                ColoredPoint::new(a.0, PointD::from_i64(&a.1)),
                ColoredPoint::new(b.0, PointD::from_i64(&b.1)),
            ],
        }
    }

    #[test]
    fn four_point_partition() {
        let inst = four_point();
        let pr = rainbow_partition(&inst).unwrap();
        assert_eq!(pr.simplices.len(), 2);
        assert!(verify_partition(&inst, &pr).passed());
        assert!(pr.simplices.iter().all(RainbowSimplex::is_rainbow));
        assert_eq!(pr.cut_tree.depth(), 1);
    }

    #[test]
    fn base_cases() {
        let seg_inst = ColoredInstance::new(
            2,
            vec![vec![PointD::from_i64(&[0, 0])], vec![PointD::from_i64(&[1, 1])], vec![]],
        )
        .unwrap();
        let pr = rainbow_partition(&seg_inst).unwrap();
        assert_eq!(pr.simplices, vec![seg((0, [0, 0]), (1, [1, 1]))]);

        let tri = ColoredInstance::new(
            3,
            vec![
                vec![PointD::from_i64(&[0, 0, 0])],
                vec![],
                vec![PointD::from_i64(&[1, 0, 0])],
                vec![PointD::from_i64(&[0, 1, 0])],
            ],
        )
        .unwrap();
        let pr = rainbow_partition(&tri).unwrap();
        assert_eq!(pr.simplices.len(), 1);
        assert_eq!(pr.simplices[0].vertices.len(), 3);
        assert!(matches!(pr.cut_tree, CutTree::Leaf(_)));
    }

    #[test]
    fn hypotheses_are_enforced() {
        let too_big = ColoredInstance::new(
            2,
            vec![
                vec![PointD::from_i64(&[0, 0]), PointD::from_i64(&[5, 1]), PointD::from_i64(&[2, 7])],
                vec![PointD::from_i64(&[1, 3])],
                vec![],
            ],
        )
        .unwrap();
        assert!(matches!(rainbow_partition(&too_big), Err(PartitionError::Hypothesis(_))));
        let odd = ColoredInstance::new(
            2,
            vec![vec![PointD::from_i64(&[0, 0])], vec![PointD::from_i64(&[1, 3])], vec![PointD::from_i64(&[4, 1])]],
        )
        .unwrap();
        assert!(matches!(rainbow_partition(&odd), Err(PartitionError::Hypothesis(_))));
    }

    #[test]
    fn verify_reports_crossing_segments() {
        let inst = ColoredInstance::new(
            2,
            vec![
                vec![PointD::from_i64(&[0, 0]), PointD::from_i64(&[0, 2])],
                vec![PointD::from_i64(&[2, 2]), PointD::from_i64(&[2, 0])],
                vec![],
            ],
        )
        .unwrap();
        let crossing = vec![seg((0, [0, 0]), (1, [2, 2])), seg((0, [0, 2]), (1, [2, 0]))];
        let pr = PartitionResult {
            cut_tree: CutTree::Leaf(crossing[0].clone()),
            simplices: crossing,
        };
        let report = verify_partition(&inst, &pr);
        assert!(report.failures.contains(&PartitionFailure::Intersecting { first: 0, second: 1 }));
    }

    #[test]
    fn verify_reports_repeated_color() {
        let inst = ColoredInstance::new(
            2,
            vec![vec![PointD::from_i64(&[0, 0]), PointD::from_i64(&[3, 1])], vec![], vec![]],
        )
        .unwrap();
        let s = seg((0, [0, 0]), (0, [3, 1]));
        let pr = PartitionResult {
            cut_tree: CutTree::Leaf(s.clone()),
            simplices: vec![s],
        };
        let report = verify_partition(&inst, &pr);
        assert!(report.failures.contains(&PartitionFailure::NotRainbow { simplex: 0 }));
    }

    #[test]
    fn verify_reports_missing_vertices() {
        let inst = four_point();
        let mut pr = rainbow_partition(&inst).unwrap();
        pr.simplices.pop();
        let report = verify_partition(&inst, &pr);
        assert!(report.failures.contains(&PartitionFailure::VerticesDiffer));
        assert!(report.failures.contains(&PartitionFailure::WrongCount { expected: 2, found: 1 }));
    }

    fn dummy_classes(sizes: &[usize]) -> Vec<Vec<PointD>> {
        let mut k = 0i64;
        sizes
            .iter()
            .map(|&s| {
                (0..s)
                    .map(|_| {
                        k += 1;
                        PointD::from_i64(&[k, k * k])
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn merge_examples() {
        let m = merge_color_classes_2d(&dummy_classes(&[2, 2, 2, 2, 2]), 5).unwrap();
        assert_eq!(m.instance.class_sizes(), vec![4, 4, 2]);
        assert_eq!(m.groups, vec![vec![0, 1], vec![2, 3], vec![4]]);

        let m = merge_color_classes_2d(&dummy_classes(&[3, 3]), 3).unwrap();
        assert_eq!(m.instance.class_sizes(), vec![3, 3, 0]);

        assert!(merge_color_classes_2d(&dummy_classes(&[4, 1, 1]), 3).is_err());
        assert!(merge_color_classes_2d(&dummy_classes(&[2, 2]), 3).is_err());
    }

    /// All size vectors with `2n ≤ 16` points, r ≥ 4 classes, each ≤ n.
    fn size_vectors(total: usize, cap: usize, parts: usize) -> Vec<Vec<usize>> {
        if parts == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 0..=cap.min(total) {
            for mut rest in size_vectors(total - first, cap, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn merge_never_exceeds_n() {
        let mut checked = 0;
        for n in 1..=8 {
            for r in 4..=7 {
                for sizes in size_vectors(2 * n, n, r) {
                    let m = merge_color_classes_2d(&dummy_classes(&sizes), n).unwrap();
                    let merged = m.instance.class_sizes();
                    assert!(merged.iter().all(|&s| s <= n), "{sizes:?} -> {merged:?}");
                    assert_eq!(merged.iter().sum::<usize>(), 2 * n);
                    let mut colors: Vec<usize> = m.groups.concat();
                    colors.sort_unstable();
                    assert_eq!(colors, (0..r).collect::<Vec<_>>());
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000);
    }
}
