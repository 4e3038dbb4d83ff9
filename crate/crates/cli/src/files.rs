//! JSON documents read and written by the command-line tool.
//!
//! Coordinates are exact. They are written as `"p/q"` strings and read from
//! strings or JSON numbers, both parsed without rounding.

use hamburger::{
    format_rational, parse_rational, ColorMeasure, ColoredInstance, ColoredPoint, CountVector, CutResult, CutTree,
    MeasureModel, PartitionResult, PointD, RainbowSimplex, Rational, RationalHyperplane, Sign, SpanningCertificate,
};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Text(String),
    Number(serde_json::Number),
}

impl Coord {
    fn parse(&self) -> Result<Rational, Failure> {
        let text = match self {
            Coord::Text(s) => s.clone(),
            Coord::Number(n) => n.to_string(),
        };
        parse_rational(&text).map_err(|e| Failure::Input(format!("coordinate {text:?}: {e}")))
    }
}

impl From<&Rational> for Coord {
    fn from(r: &Rational) -> Self {
        Coord::Text(format_rational(r))
    }
}

fn parse_point(coords: &[Coord]) -> Result<PointD, Failure> {
    let c = coords.iter().map(Coord::parse).collect::<Result<Vec<_>, _>>()?;
    PointD::new(c).map_err(|e| Failure::Input(e.to_string()))
}

fn point_dto(p: &PointD) -> Vec<Coord> {
    p.coords().iter().map(Coord::from).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub d: usize,
    /// One list of points per color.
    pub classes: Vec<Vec<Vec<Coord>>>,
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<ColoredInstance, Failure> {
        let classes = self
            .classes
            .iter()
            .map(|class| class.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        ColoredInstance::new(self.d, classes).map_err(|e| Failure::Input(e.to_string()))
    }
}

impl From<&ColoredInstance> for InstanceFile {
    fn from(inst: &ColoredInstance) -> Self {
        InstanceFile {
            d: inst.d(),
            classes: inst.classes().iter().map(|c| c.iter().map(point_dto).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneDto {
    pub normal: Vec<Coord>,
    pub offset: Coord,
}

impl HyperplaneDto {
    fn parse(&self) -> Result<RationalHyperplane, Failure> {
        let normal = self.normal.iter().map(Coord::parse).collect::<Result<Vec<_>, _>>()?;
        RationalHyperplane::new(normal, self.offset.parse()?).map_err(|e| Failure::Input(e.to_string()))
    }
}

impl From<&RationalHyperplane> for HyperplaneDto {
    fn from(h: &RationalHyperplane) -> Self {
        HyperplaneDto { normal: h.normal().iter().map(Coord::from).collect(), offset: h.offset().into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoredPointDto {
    pub color: usize,
    pub point: Vec<Coord>,
}

impl ColoredPointDto {
    fn parse(&self) -> Result<ColoredPoint, Failure> {
        Ok(ColoredPoint::new(self.color, parse_point(&self.point)?))
    }
}

impl From<&ColoredPoint> for ColoredPointDto {
    fn from(p: &ColoredPoint) -> Self {
        ColoredPointDto { color: p.color, point: point_dto(&p.point) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideDto {
    Negative,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanningPointDto {
    pub color: usize,
    pub point: Vec<Coord>,
    pub side: SideDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDto {
    pub hyperplane: HyperplaneDto,
    pub spanning: Vec<SpanningPointDto>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutFile {
    pub d: usize,
    pub separator: HyperplaneDto,
    pub negative: Vec<ColoredPointDto>,
    pub positive: Vec<ColoredPointDto>,
    pub negative_counts: Vec<usize>,
    pub positive_counts: Vec<usize>,
    pub certificate: CertificateDto,
}

impl CutFile {
    pub fn new(d: usize, cut: &CutResult) -> Self {
        CutFile {
            d,
            separator: (&cut.separator).into(),
            negative: cut.negative.iter().map(Into::into).collect(),
            positive: cut.positive.iter().map(Into::into).collect(),
            negative_counts: cut.negative_counts.counts.clone(),
            positive_counts: cut.positive_counts.counts.clone(),
            certificate: CertificateDto {
                hyperplane: (&cut.certificate.hyperplane).into(),
                spanning: cut
                    .certificate
                    .spanning
                    .iter()
                    .map(|(p, s)| SpanningPointDto {
                        color: p.color,
                        point: point_dto(&p.point),
                        side: if *s == Sign::Negative { SideDto::Negative } else { SideDto::Positive },
                    })
                    .collect(),
            },
        }
    }

    pub fn to_cut(&self) -> Result<CutResult, Failure> {
        let points = |v: &[ColoredPointDto]| v.iter().map(ColoredPointDto::parse).collect::<Result<Vec<_>, _>>();
        let spanning = self
            .certificate
            .spanning
            .iter()
            .map(|s| {
                let side = match s.side {
                    SideDto::Negative => Sign::Negative,
                    SideDto::Positive => Sign::Positive,
                };
                Ok((ColoredPoint::new(s.color, parse_point(&s.point)?), side))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        Ok(CutResult {
            separator: self.separator.parse()?,
            negative: points(&self.negative)?,
            positive: points(&self.positive)?,
            negative_counts: CountVector::new(self.negative_counts.clone(), self.d),
            positive_counts: CountVector::new(self.positive_counts.clone(), self.d),
            certificate: SpanningCertificate { hyperplane: self.certificate.hyperplane.parse()?, spanning },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CutTreeDto {
    Leaf { simplex: Vec<ColoredPointDto> },
    Node { cut: Box<CutFile>, negative: Box<CutTreeDto>, positive: Box<CutTreeDto> },
}

impl CutTreeDto {
    fn new(d: usize, tree: &CutTree) -> Self {
        match tree {
            CutTree::Leaf(s) => CutTreeDto::Leaf { simplex: s.vertices.iter().map(Into::into).collect() },
            CutTree::Node { cut, negative, positive } => CutTreeDto::Node {
                cut: Box::new(CutFile::new(d, cut)),
                negative: Box::new(CutTreeDto::new(d, negative)),
                positive: Box::new(CutTreeDto::new(d, positive)),
            },
        }
    }

    fn to_tree(&self) -> Result<CutTree, Failure> {
        Ok(match self {
            CutTreeDto::Leaf { simplex } => CutTree::Leaf(parse_simplex(simplex)?),
            CutTreeDto::Node { cut, negative, positive } => CutTree::Node {
                cut: Box::new(cut.to_cut()?),
                negative: Box::new(negative.to_tree()?),
                positive: Box::new(positive.to_tree()?),
            },
        })
    }
}

fn parse_simplex(v: &[ColoredPointDto]) -> Result<RainbowSimplex, Failure> {
    Ok(RainbowSimplex { vertices: v.iter().map(ColoredPointDto::parse).collect::<Result<_, _>>()? })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    pub d: usize,
    pub simplices: Vec<Vec<ColoredPointDto>>,
    pub cut_tree: CutTreeDto,
}

impl PartitionFile {
    pub fn new(d: usize, pr: &PartitionResult) -> Self {
        PartitionFile {
            d,
            simplices: pr.simplices.iter().map(|s| s.vertices.iter().map(Into::into).collect()).collect(),
            cut_tree: CutTreeDto::new(d, &pr.cut_tree),
        }
    }

    pub fn to_partition(&self) -> Result<PartitionResult, Failure> {
        Ok(PartitionResult {
            simplices: self.simplices.iter().map(|s| parse_simplex(s)).collect::<Result<_, _>>()?,
            cut_tree: self.cut_tree.to_tree()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ColorMeasureDto {
    Balls { centers: Vec<Vec<f64>>, weights: Vec<f64>, radius: f64 },
    Grid { origin: Vec<f64>, cell_size: f64, shape: Vec<usize>, weights: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub d: usize,
    pub colors: Vec<ColorMeasureDto>,
}

impl MeasureFile {
    pub fn to_model(&self) -> Result<MeasureModel, Failure> {
        let colors = self
            .colors
            .iter()
            .map(|c| match c.clone() {
                ColorMeasureDto::Balls { centers, weights, radius } => ColorMeasure::Balls { centers, weights, radius },
                ColorMeasureDto::Grid { origin, cell_size, shape, weights } => {
                    ColorMeasure::Grid { origin, cell_size, shape, weights }
                }
            })
            .collect();
        MeasureModel::new(self.d, colors).map_err(|e| Failure::Input(e.to_string()))
    }
}

impl From<&MeasureModel> for MeasureFile {
    fn from(m: &MeasureModel) -> Self {
        MeasureFile {
            d: m.d(),
            colors: m
                .colors()
                .iter()
                .map(|c| match c.clone() {
                    ColorMeasure::Balls { centers, weights, radius } => {
                        ColorMeasureDto::Balls { centers, weights, radius }
                    }
                    ColorMeasure::Grid { origin, cell_size, shape, weights } => {
                        ColorMeasureDto::Grid { origin, cell_size, shape, weights }
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDto {
    pub omega: Vec<f64>,
    pub t: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureReportDto {
    pub passed: bool,
    pub below: Vec<f64>,
    pub above: Vec<f64>,
    pub total_below: f64,
    pub total_above: f64,
    pub balanced_below: bool,
    pub balanced_above: bool,
    pub bound_ok: bool,
    pub monte_carlo_mass: Vec<f64>,
    pub monte_carlo_std_error: Vec<f64>,
    pub monte_carlo_samples: usize,
    pub monte_carlo_rng: String,
    pub max_z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSolutionFile {
    /// `(u₀, u₁, …, u_d)`: the halfspace `u₁x₁ + … + u_d x_d < u₀`.
    pub u: Vec<f64>,
    pub y: Vec<f64>,
    pub residual: f64,
    pub start_index: usize,
    pub target: TargetDto,
    /// Basis of the complement of the target line used for the residual.
    pub basis: Vec<Vec<f64>>,
    pub report: MeasureReportDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub passed: bool,
    pub kind: String,
    pub failures: Vec<String>,
}
