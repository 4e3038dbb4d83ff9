use statrs::function::beta::beta_reg;

use super::MeasureError;

/// One color's measure. Either a weighted mixture of uniform balls sharing
/// one radius, or a piecewise-constant density on a grid of cubic cells.
#[derive(Clone, Debug, PartialEq)]
pub enum ColorMeasure {
    Balls {
        centers: Vec<Vec<f64>>,
        weights: Vec<f64>,
        radius: f64,
    },
    /// `weights` is row-major over `shape`, last axis fastest; each entry
    /// is the total mass of that cell.
    Grid {
        origin: Vec<f64>,
        cell_size: f64,
        shape: Vec<usize>,
        weights: Vec<f64>,
    },
}

impl ColorMeasure {
    pub fn weights(&self) -> &[f64] {
        match self {
            ColorMeasure::Balls { weights, .. } | ColorMeasure::Grid { weights, .. } => weights,
        }
    }

    pub fn mass(&self) -> f64 {
        self.weights().iter().sum()
    }

    fn validate(&self, d: usize) -> Result<(), MeasureError> {
        let bad = |msg: String| Err(MeasureError::InvalidModel(msg));
        if self.weights().iter().any(|w| !w.is_finite() || *w < 0.0) {
            return bad("weights must be finite and nonnegative".into());
        }
        match self {
            ColorMeasure::Balls { centers, weights, radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return bad(format!("radius {radius} must be positive"));
                }
                if centers.len() != weights.len() {
                    return bad(format!("{} centers but {} weights", centers.len(), weights.len()));
                }
                if centers.iter().any(|c| c.len() != d || c.iter().any(|x| !x.is_finite())) {
                    return bad(format!("centers must be finite points in dimension {d}"));
                }
            }
            ColorMeasure::Grid { origin, cell_size, shape, weights } => {
                if d > 3 {
                    return Err(MeasureError::UnsupportedGridDimension(d));
                }
                if origin.len() != d || shape.len() != d || origin.iter().any(|x| !x.is_finite()) {
                    return bad(format!("grid origin and shape must have {d} entries"));
                }
                if !(cell_size.is_finite() && *cell_size > 0.0) {
                    return bad(format!("cell size {cell_size} must be positive"));
                }
                let cells: usize = shape.iter().product();
                if cells != weights.len() {
                    return bad(format!("grid has {cells} cells but {} weights", weights.len()));
                }
            }
        }
        Ok(())
    }
}

/// `d+1` finite measures on `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureModel {
    d: usize,
    colors: Vec<ColorMeasure>,
}

impl MeasureModel {
    pub fn new(d: usize, colors: Vec<ColorMeasure>) -> Result<Self, MeasureError> {
        if d < 2 {
            return Err(MeasureError::InvalidModel(format!("dimension {d} is below 2")));
        }
        if colors.len() != d + 1 {
            return Err(MeasureError::WrongColorCount { expected: d + 1, found: colors.len() });
        }
        for c in &colors {
            c.validate(d)?;
        }
        if colors.iter().map(ColorMeasure::mass).sum::<f64>() <= 0.0 {
            return Err(MeasureError::InvalidModel("total mass is zero".into()));
        }
        Ok(MeasureModel { d, colors })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn colors(&self) -> &[ColorMeasure] {
        &self.colors
    }

    pub fn masses(&self) -> Vec<f64> {
        self.colors.iter().map(ColorMeasure::mass).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses().iter().sum()
    }

    /// Same shapes with every weight divided by the total mass.
    pub fn normalized(&self) -> Self {
        let total = self.total_mass();
        let colors = self
            .colors
            .iter()
            .map(|c| {
                let mut c = c.clone();
                match &mut c {
                    ColorMeasure::Balls { weights, .. } | ColorMeasure::Grid { weights, .. } => {
                        weights.iter_mut().for_each(|w| *w /= total)
                    }
                }
                c
            })
            .collect();
        MeasureModel { d: self.d, colors }
    }

    /// Centers and weights of every ball and grid cell with positive mass.
    pub(crate) fn atoms(&self) -> Vec<(Vec<f64>, f64)> {
        let mut out = Vec::new();
        for c in &self.colors {
            match c {
                ColorMeasure::Balls { centers, weights, .. } => {
                    out.extend(centers.iter().zip(weights).filter(|(_, w)| **w > 0.0).map(|(p, w)| (p.clone(), *w)));
                }
                ColorMeasure::Grid { origin, cell_size, shape, weights } => {
                    let d = origin.len();
                    for (cell, &w) in weights.iter().enumerate().filter(|(_, w)| **w > 0.0) {
                        let mut rest = cell;
                        let mut p = vec![0.0; d];
                        for k in (0..d).rev() {
                            p[k] = origin[k] + cell_size * ((rest % shape[k]) as f64 + 0.5);
                            rest /= shape[k];
                        }
                        out.push((p, w));
                    }
                }
            }
        }
        out
    }

    /// Center and radius of a ball containing every support.
    pub(crate) fn bounding_ball(&self) -> (Vec<f64>, f64) {
        let mut lo = vec![f64::INFINITY; self.d];
        let mut hi = vec![f64::NEG_INFINITY; self.d];
        let mut grow = |p: &[f64], pad: f64| {
            for k in 0..p.len() {
                lo[k] = lo[k].min(p[k] - pad);
                hi[k] = hi[k].max(p[k] + pad);
            }
        };
        for c in &self.colors {
            match c {
                ColorMeasure::Balls { centers, weights, radius } => {
                    for (p, w) in centers.iter().zip(weights) {
                        if *w > 0.0 {
                            grow(p, *radius);
                        }
                    }
                }
                ColorMeasure::Grid { origin, cell_size, shape, .. } => {
                    grow(origin, 0.0);
                    let far: Vec<f64> =
                        origin.iter().zip(shape).map(|(o, &s)| o + cell_size * s as f64).collect();
                    grow(&far, 0.0);
                }
            }
        }
        let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2.0).collect();
        let radius = lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a) / 4.0).sum::<f64>().sqrt();
        (center, radius.max(f64::MIN_POSITIVE))
    }
}

/// The open halfspace `{x : normal · x < offset}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn contains_below(&self, x: &[f64]) -> bool {
        dot(&self.normal, x) < self.offset
    }
}

/// A unit vector `u = (u₀, u₁, …, u_d)` on `S^d` standing for
/// `H⁻(u) = {x : u₁x₁ + … + u_d x_d < u₀}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereParam {
    u: Vec<f64>,
}

impl SphereParam {
    /// Normalizes `u`; fails on a zero or non-finite vector.
    pub fn new(u: Vec<f64>) -> Result<Self, MeasureError> {
        let norm = dot(&u, &u).sqrt();
        if u.len() < 3 || !norm.is_finite() || norm == 0.0 {
            return Err(MeasureError::InvalidSphereParam);
        }
        Ok(SphereParam { u: u.into_iter().map(|x| x / norm).collect() })
    }

    pub fn from_halfspace(h: &Halfspace) -> Result<Self, MeasureError> {
        let mut u = vec![h.offset];
        u.extend_from_slice(&h.normal);
        Self::new(u)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.u
    }

    pub fn d(&self) -> usize {
        self.u.len() - 1
    }

    pub fn antipode(&self) -> Self {
        SphereParam { u: self.u.iter().map(|x| -x).collect() }
    }

    pub fn halfspace(&self) -> Halfspace {
        Halfspace { normal: self.u[1..].to_vec(), offset: self.u[0] }
    }

    /// True at the two points where the halfspace degenerates to all of
    /// `R^d` or to the empty set.
    pub fn is_pole(&self) -> bool {
        self.u[1..].iter().all(|&x| x == 0.0)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fraction of a `d`-ball of radius `r` inside a halfspace whose boundary
/// lies at signed distance `s` from the center, positive when the center
/// is inside.
pub(crate) fn ball_fraction_below(s: f64, r: f64, d: usize) -> f64 {
    if s >= r {
        return 1.0;
    }
    if s <= -r {
        return 0.0;
    }
    let x = 1.0 - (s / r) * (s / r);
    let cap = 0.5 * beta_reg((d as f64 + 1.0) / 2.0, 0.5, x);
    if s >= 0.0 {
        1.0 - cap
    } else {
        cap
    }
}

/// Volume fraction of `{φ < 0}` in a simplex, where `φ` is affine with the
/// given values at the `k+1` vertices (`k` = 2 or 3).
pub(crate) fn simplex_fraction_below(phi: &[f64]) -> f64 {
    let neg: Vec<usize> = (0..phi.len()).filter(|&i| phi[i] < 0.0).collect();
    let pos: Vec<usize> = (0..phi.len()).filter(|&i| phi[i] >= 0.0).collect();
    if neg.is_empty() {
        return 0.0;
    }
    if pos.is_empty() {
        return 1.0;
    }
    // Fraction of the corner at `apex` cut off by the plane.
    let corner = |apex: usize, others: &[usize]| -> f64 {
        others.iter().map(|&j| phi[apex] / (phi[apex] - phi[j])).product()
    };
    match (phi.len(), neg.len()) {
        (_, 1) => corner(neg[0], &pos),
        (n, k) if k == n - 1 => 1.0 - corner(pos[0], &neg),
        (4, 2) => prism_fraction(phi, [neg[0], neg[1]], [pos[0], pos[1]]),
        _ => unreachable!("simplices of dimension 2 or 3 only"),
    }
}

/// Tetrahedron split two against two: the negative part is a prism with
/// triangles `(A, P_AC, P_AD)` and `(B, P_BC, P_BD)`, cut into three
/// tetrahedra whose volumes come from barycentric determinants.
fn prism_fraction(phi: &[f64], [a, b]: [usize; 2], [c, e]: [usize; 2]) -> f64 {
    let vertex = |i: usize| {
        let mut w = [0.0; 4];
        w[i] = 1.0;
        w
    };
    let on_edge = |i: usize, j: usize| {
        let t = phi[i] / (phi[i] - phi[j]);
        let mut w = [0.0; 4];
        w[i] = 1.0 - t;
        w[j] = t;
        w
    };
    let a0 = vertex(a);
    let a1 = on_edge(a, c);
    let a2 = on_edge(a, e);
    let b0 = vertex(b);
    let b1 = on_edge(b, c);
    let b2 = on_edge(b, e);
    [[a0, a1, a2, b2], [a0, a1, b1, b2], [a0, b0, b1, b2]]
        .iter()
        .map(|m| det4(m).abs())
        .sum()
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let minor = |r: [usize; 3], c: [usize; 3]| {
        m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
            - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
            + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
    };
    let rows = [1, 2, 3];
    m[0][0] * minor(rows, [1, 2, 3]) - m[0][1] * minor(rows, [0, 2, 3]) + m[0][2] * minor(rows, [0, 1, 3])
        - m[0][3] * minor(rows, [0, 1, 2])
}

/// Vertex chains of the Kuhn triangulation of the unit cube: one simplex
/// per axis permutation, walking from the origin to the far corner.
fn kuhn_simplices(d: usize) -> Vec<Vec<usize>> {
    let perms: Vec<Vec<usize>> = match d {
        2 => vec![vec![0, 1], vec![1, 0]],
        3 => vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ],
        _ => unreachable!("grid cells are validated to d ≤ 3"),
    };
    perms
        .into_iter()
        .map(|perm| {
            let mut v = 0usize;
            let mut chain = vec![v];
            for axis in perm {
                v |= 1 << axis;
                chain.push(v);
            }
            chain
        })
        .collect()
}

/// Fraction of the unit cube where `a · y < b`.
pub(crate) fn cube_fraction_below(a: &[f64], b: f64, simplices: &[Vec<usize>]) -> f64 {
    let d = a.len();
    let values: Vec<f64> = (0..1usize << d)
        .map(|v| (0..d).filter(|k| v >> k & 1 == 1).map(|k| a[k]).sum::<f64>() - b)
        .collect();
    if values.iter().all(|&x| x < 0.0) {
        return 1.0;
    }
    if values.iter().all(|&x| x >= 0.0) {
        return 0.0;
    }
    let total: f64 = simplices
        .iter()
        .map(|s| simplex_fraction_below(&s.iter().map(|&v| values[v]).collect::<Vec<_>>()))
        .sum();
    total / simplices.len() as f64
}

/// `μ_i(H⁻)` for a single color.
pub(crate) fn color_mass_below(cm: &ColorMeasure, h: &Halfspace) -> f64 {
    let norm = dot(&h.normal, &h.normal).sqrt();
    if norm == 0.0 {
        // Pole of the sphere: the halfspace is everything or nothing.
        return if h.offset > 0.0 { cm.mass() } else { 0.0 };
    }
    match cm {
        ColorMeasure::Balls { centers, weights, radius } => {
            let d = h.normal.len();
            centers
                .iter()
                .zip(weights)
                .filter(|(_, w)| **w > 0.0)
                .map(|(c, w)| w * ball_fraction_below((h.offset - dot(&h.normal, c)) / norm, *radius, d))
                .sum()
        }
        ColorMeasure::Grid { origin, cell_size, shape, weights } => {
            let d = origin.len();
            let simplices = kuhn_simplices(d);
            let a: Vec<f64> = h.normal.iter().map(|n| n * cell_size).collect();
            let base = h.offset - dot(&h.normal, origin);
            let mut index = vec![0usize; d];
            let mut sum = 0.0;
            for &w in weights {
                if w > 0.0 {
                    let shift: f64 = (0..d).map(|k| a[k] * index[k] as f64).sum();
                    sum += w * cube_fraction_below(&a, base - shift, &simplices);
                }
                for k in (0..d).rev() {
                    index[k] += 1;
                    if index[k] < shape[k] {
                        break;
                    }
                    index[k] = 0;
                }
            }
            sum
        }
    }
}

/// The vector `(μ_1(H⁻(u)), …, μ_{d+1}(H⁻(u)))`.
pub fn eval_f(measure: &MeasureModel, u: &SphereParam) -> Vec<f64> {
    assert_eq!(u.d(), measure.d(), "sphere parameter dimension");
    let h = u.halfspace();
    measure.colors().iter().map(|c| color_mass_below(c, &h)).collect()
}

impl From<&crate::geometry::RationalHyperplane> for Halfspace {
    fn from(h: &crate::geometry::RationalHyperplane) -> Self {
        Halfspace {
            normal: h.normal().iter().map(crate::geometry::rational_to_f64).collect(),
            offset: crate::geometry::rational_to_f64(h.offset()),
        }
    }
}
