use anyhow::Result;
use hamburger::instances::{random_admissible_sizes, random_instance};
use hamburger::{
    hamburger_cut, rainbow_partition, solve_hamburger_with, verify_cut, verify_partition, CutError, MeasureError,
    PartitionError, SolverOptions,
};
use hamburger::measures::verify_measure_cut_with;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;

use crate::files::{
    CutFile, InstanceFile, MeasureFile, MeasureReportDto, MeasureSolutionFile, PartitionFile, TargetDto, VerifyReport,
};
use crate::render::{render_svg, Overlay};
use crate::Failure;

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("{what}: {e}")).into())
}

pub fn read_json<T: DeserializeOwned>(path: &std::path::Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text, what)
}

fn cut_failure(e: CutError) -> Failure {
    match e {
        CutError::NotFound { .. } => Failure::NotFound(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn partition_failure(e: PartitionError) -> Failure {
    match e {
        PartitionError::Cut(c) => cut_failure(c),
        other => Failure::Input(other.to_string()),
    }
}

/// Random instance in general position. Without `sizes`, an admissible
/// size vector is drawn from `seed`.
pub fn gen(d: usize, n: usize, sizes: Option<&[usize]>, seed: u64) -> Result<InstanceFile> {
    let sizes = match sizes {
        Some(s) => s.to_vec(),
        None => {
            if d < 2 {
                return Err(Failure::Input(format!("dimension {d} is below 2")).into());
            }
            random_admissible_sizes(d, n, &mut ChaCha8Rng::seed_from_u64(seed))
        }
    };
    let inst = random_instance(d, n, &sizes, seed).map_err(|e| Failure::Input(e.to_string()))?;
    Ok((&inst).into())
}

pub fn cut(file: &InstanceFile) -> Result<CutFile> {
    let inst = file.to_instance()?;
    let cut = hamburger_cut(&inst).map_err(cut_failure)?;
    Ok(CutFile::new(inst.d(), &cut))
}

pub fn partition(file: &InstanceFile) -> Result<PartitionFile> {
    let inst = file.to_instance()?;
    let pr = rainbow_partition(&inst).map_err(partition_failure)?;
    Ok(PartitionFile::new(inst.d(), &pr))
}

/// Checks a partition or cut document against its instance.
pub fn verify(file: &InstanceFile, result: &str) -> Result<VerifyReport> {
    let inst = file.to_instance()?;
    if let Ok(p) = serde_json::from_str::<PartitionFile>(result) {
        let pr = p.to_partition()?;
        let failures = verify_partition(&inst, &pr).failures.iter().map(ToString::to_string).collect::<Vec<_>>();
        return Ok(VerifyReport { passed: failures.is_empty(), kind: "partition".into(), failures });
    }
    let c: CutFile = parse_json(result, "result is neither a partition nor a cut document")?;
    let failures = verify_cut(&inst, &c.to_cut()?);
    Ok(VerifyReport { passed: failures.is_empty(), kind: "cut".into(), failures })
}

pub fn measure_cut(file: &MeasureFile, tol: f64, seed: u64, samples: usize) -> Result<MeasureSolutionFile> {
    let model = file.to_model()?;
    let opts = SolverOptions { tol, seed, ..SolverOptions::default() };
    let sol = solve_hamburger_with(&model, &opts).map_err(|e| match e {
        MeasureError::ConvergenceFailure { .. } => Failure::NotFound(e.to_string()),
        other => Failure::Input(other.to_string()),
    })?;
    let rep = verify_measure_cut_with(&model, &sol.u, tol, samples, seed)
        .map_err(|e| Failure::Input(e.to_string()))?;
    let t = &sol.target;
    Ok(MeasureSolutionFile {
        u: sol.u.as_slice().to_vec(),
        y: sol.y.clone(),
        residual: sol.residual,
        start_index: sol.start_index,
        target: TargetDto {
            omega: t.omega.clone(),
            t: t.t,
            a: t.a.clone(),
            b: t.b.clone(),
            c: t.c.clone(),
            bound: t.bound,
        },
        basis: sol.basis.clone(),
        report: MeasureReportDto {
            passed: rep.passed(),
            below: rep.below.clone(),
            above: rep.above.clone(),
            total_below: rep.total_below,
            total_above: rep.total_above,
            balanced_below: rep.balanced_below,
            balanced_above: rep.balanced_above,
            bound_ok: rep.bound_ok,
            monte_carlo_mass: rep.monte_carlo.mass.clone(),
            monte_carlo_std_error: rep.monte_carlo.std_error.clone(),
            monte_carlo_samples: rep.monte_carlo.samples,
            monte_carlo_rng: rep.monte_carlo.rng.to_string(),
            max_z: rep.max_z,
        },
    })
}

/// SVG drawing, optionally overlaid with a cut or partition document.
pub fn render(file: &InstanceFile, overlay: Option<&str>) -> Result<String> {
    let inst = file.to_instance()?;
    let svg = match overlay {
        None => render_svg(&inst, Overlay::None)?,
        Some(text) => {
            if let Ok(p) = serde_json::from_str::<PartitionFile>(text) {
                render_svg(&inst, Overlay::Partition(&p.to_partition()?))?
            } else {
                let c: CutFile = parse_json(text, "overlay is neither a partition nor a cut document")?;
                render_svg(&inst, Overlay::Cut(&c.to_cut()?))?
            }
        }
    };
    Ok(svg)
}
