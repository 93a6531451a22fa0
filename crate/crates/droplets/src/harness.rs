//! Experiment orchestration: convergence sweeps over lattice sizes, seeds
//! and fields; comparison of simulated droplets against limit shapes;
//! result persistence with a versioned schema and atomic writes.
//!
//! The harness owns the time-rescaling conventions: configurations carry
//! rescaled times, and the conversion to natural units is `t L^2` at zero
//! field, `t L` at infinite field, and `t L coth(h)` in between. Simulation
//! modules only ever see natural time.

use crate::clock::ClockField;
use crate::dynamics::{run_graphical, run_kmc, Trajectory};
use crate::geometry::{PlanarShape, Point, SupportFunction};
use crate::lattice::{BoundaryRule, FieldParameter, SpinConfiguration};
use crate::limits::{evolve_flow, square_limit_shape, weak_solution_shape};
use crate::stats::{mean_std, standard_error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const RESULT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown result schema version {0}")]
    UnknownSchemaVersion(u32),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
    #[error(transparent)]
    Dynamics(#[from] crate::dynamics::DynamicsError),
    #[error(transparent)]
    Limits(#[from] crate::limits::LimitsError),
    #[error(transparent)]
    Export(#[from] crate::export::ExportError),
}

/// Serialize non-finite fields as the string `"inf"`.
pub mod serde_field {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => match t.trim().to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
                other => other.parse::<f64>().map_err(de::Error::custom),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeSpec {
    /// The square `[-1, 1]^2`.
    Square,
    /// Disk of the given radius (at most 1) centered at the origin.
    Disk { radius: f64 },
    /// Polygon vertices in rescaled units.
    Polygon { vertices: Vec<(f64, f64)> },
    /// Polygon CSV file path.
    PolygonFile { path: PathBuf },
}

impl ShapeSpec {
    pub fn build(&self) -> Result<PlanarShape, HarnessError> {
        match self {
            ShapeSpec::Square => Ok(PlanarShape::square(1.0)),
            ShapeSpec::Disk { radius } => {
                Ok(PlanarShape::circle(Point::new(0.0, 0.0), *radius, 2048))
            }
            ShapeSpec::Polygon { vertices } => Ok(PlanarShape::new(
                vertices.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            )),
            ShapeSpec::PolygonFile { path } => {
                let text = std::fs::read_to_string(path)?;
                Ok(crate::export::shape_from_csv(&text)?)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum EngineChoice {
    Graphical,
    Kmc,
}

/// What the simulated droplets are compared against.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CompareTarget {
    /// The explicit four-corner shape of the square (strong field only).
    SquareExplicit,
    /// Drift-flow weak solution from the initial shape's support function.
    DriftFlow,
    /// Anisotropic curve-shortening flow (zero field; needs a strictly
    /// convex start).
    CurveShortening,
    #[default]
    None,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub shape: ShapeSpec,
    pub l_values: Vec<i64>,
    #[serde(with = "serde_field")]
    pub h: f64,
    #[serde(with = "serde_field", default = "default_beta")]
    pub beta: f64,
    pub seeds: Vec<u64>,
    /// Rescaled sample times.
    pub sample_times: Vec<f64>,
    pub engine: EngineChoice,
    #[serde(default)]
    pub compare: CompareTarget,
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_beta() -> f64 {
    f64::INFINITY
}

fn default_angles() -> usize {
    4096
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.l_values.is_empty() {
            return Err(HarnessError::InvalidConfig("need at least one L".into()));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::InvalidConfig("need at least one seed".into()));
        }
        if self.l_values.iter().any(|&l| l <= 0) {
            return Err(HarnessError::InvalidConfig("L must be positive".into()));
        }
        if self.sample_times.iter().any(|&t| t < 0.0) {
            return Err(HarnessError::InvalidConfig("sample times must be nonnegative".into()));
        }
        let mut sorted = self.sample_times.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted != self.sample_times {
            return Err(HarnessError::InvalidConfig("sample times must be sorted".into()));
        }
        if self.h < 0.0 || self.h.is_nan() {
            return Err(HarnessError::InvalidConfig("field must be nonnegative".into()));
        }
        if self.compare == CompareTarget::SquareExplicit && self.shape != ShapeSpec::Square {
            return Err(HarnessError::InvalidConfig(
                "square-explicit comparison requires the square shape".into(),
            ));
        }
        Ok(())
    }

    /// Natural-time horizon of one replica at window size `l`.
    pub fn natural_time(&self, l: i64, rescaled: f64) -> f64 {
        rescaled * time_scale(self.h, l)
    }
}

/// Rescaled-to-natural time factor: `L^2` at `h = 0`, `L` at `h = inf`,
/// `L coth(h)` in between.
pub fn time_scale(h: f64, l: i64) -> f64 {
    let lf = l as f64;
    if h == 0.0 {
        lf * lf
    } else if h.is_infinite() {
        lf
    } else {
        lf / h.tanh()
    }
}

/// One replica's record in the result bundle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplicaRecord {
    pub l: i64,
    pub seed: u64,
    pub engine: EngineChoice,
    pub wall_ms: u64,
    pub event_count: u64,
    pub overflow_count: u64,
    pub overflow_first_time: Option<f64>,
    /// Extinction time in natural units; `None` when censored.
    pub tau_plus: Option<f64>,
    pub censored: bool,
    /// Per sampled rescaled time: Hausdorff distance of the rescaled
    /// droplet to the comparison target (absent without a target; infinite
    /// distances are stored as `None`).
    pub hausdorff: Vec<(f64, Option<f64>)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TimeAggregate {
    pub l: i64,
    pub t: f64,
    pub mean_hausdorff: f64,
    pub std_hausdorff: f64,
    pub max_hausdorff: f64,
    pub replicas: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TauAggregate {
    pub l: i64,
    /// Mean of `tau_plus / time_scale`, i.e. the rescaled extinction time.
    pub mean_rescaled_tau: f64,
    pub std_rescaled_tau: f64,
    pub censored: usize,
    pub replicas: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub replicas: Vec<ReplicaRecord>,
    pub time_aggregates: Vec<TimeAggregate>,
    pub tau_aggregates: Vec<TauAggregate>,
}

/// Comparison shapes per sampled time, built once per experiment.
fn build_targets(cfg: &ExperimentConfig) -> Result<Option<Vec<PlanarShape>>, HarnessError> {
    let shape = cfg.shape.build()?;
    match cfg.compare {
        CompareTarget::None => Ok(None),
        CompareTarget::SquareExplicit => {
            let targets = cfg
                .sample_times
                .iter()
                .map(|&t| square_limit_shape(t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Some(targets))
        }
        CompareTarget::DriftFlow => {
            let h0 = SupportFunction::from_shape(&shape, cfg.angles);
            Ok(Some(cfg.sample_times.iter().map(|&t| weak_solution_shape(&h0, t)).collect()))
        }
        CompareTarget::CurveShortening => {
            let h0 = SupportFunction::from_shape(&shape, cfg.angles);
            let mut targets = Vec::with_capacity(cfg.sample_times.len());
            let mut cur = h0;
            let mut reached = 0.0;
            for &t in &cfg.sample_times {
                let res = evolve_flow(&cur, 0.0, t - reached, None)?;
                cur = res.support.clone();
                reached += res.reached_time;
                if res.stop.is_some() && reached < t {
                    targets.push(PlanarShape::empty());
                } else {
                    targets.push(cur.to_shape());
                }
            }
            Ok(Some(targets))
        }
    }
}

fn run_replica(
    cfg: &ExperimentConfig,
    shape: &PlanarShape,
    targets: Option<&[PlanarShape]>,
    l: i64,
    seed: u64,
) -> Result<ReplicaRecord, HarnessError> {
    let started = std::time::Instant::now();
    let params = FieldParameter::new(cfg.h, cfg.beta);
    let config = SpinConfiguration::init_from_shape(shape, l, BoundaryRule::AllPlus)?;
    let natural_samples: Vec<f64> =
        cfg.sample_times.iter().map(|&t| cfg.natural_time(l, t)).collect();
    // generous horizon: covers the sampled window and the rescaled
    // extinction constants (Area/2 at zero field, 4 at strong field); the
    // engine stops at extinction anyway once the state is absorbing
    let last = cfg.sample_times.last().copied().unwrap_or(0.0);
    let horizon = cfg.natural_time(l, (1.5 * last).max(6.0));
    let traj: Trajectory = match cfg.engine {
        EngineChoice::Kmc => run_kmc(&config, &params, horizon, seed, &natural_samples)?,
        EngineChoice::Graphical => {
            run_graphical(&config, &ClockField::new(seed), &params, horizon, &natural_samples)?
        }
    };
    let mut hausdorff = Vec::new();
    if let Some(targets) = targets {
        for ((snap, &t), target) in
            traj.snapshots.iter().zip(&cfg.sample_times).zip(targets.iter())
        {
            let droplet = snap.droplet();
            let d = droplet.hausdorff_to(&target.scaled(l as f64)) / l as f64;
            hausdorff.push((t, d.is_finite().then_some(d)));
        }
    }
    Ok(ReplicaRecord {
        l,
        seed,
        engine: cfg.engine,
        wall_ms: started.elapsed().as_millis() as u64,
        event_count: traj.event_count,
        overflow_count: traj.overflow.count,
        overflow_first_time: traj.overflow.first_time,
        tau_plus: traj.extinction_time,
        censored: traj.extinction_time.is_none(),
        hausdorff,
    })
}

/// Runs every `(L, seed)` replica (in parallel), extracts rescaled droplets
/// at the sampled times, compares against the configured limit target, and
/// aggregates. Censored extinctions and window-overflow events are recorded
/// per replica, never dropped.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    cfg.validate()?;
    let shape = cfg.shape.build()?;
    let targets = build_targets(cfg)?;
    let jobs: Vec<(i64, u64)> = cfg
        .l_values
        .iter()
        .flat_map(|&l| cfg.seeds.iter().map(move |&s| (l, s)))
        .collect();
    let replicas: Vec<ReplicaRecord> = jobs
        .par_iter()
        .map(|&(l, seed)| run_replica(cfg, &shape, targets.as_deref(), l, seed))
        .collect::<Result<Vec<_>, _>>()?;

    let mut time_aggregates = Vec::new();
    let mut tau_aggregates = Vec::new();
    for &l in &cfg.l_values {
        let of_l: Vec<&ReplicaRecord> = replicas.iter().filter(|r| r.l == l).collect();
        for (k, &t) in cfg.sample_times.iter().enumerate() {
            let ds: Vec<f64> =
                of_l.iter().filter_map(|r| r.hausdorff.get(k).and_then(|&(_, d)| d)).collect();
            if ds.is_empty() {
                continue;
            }
            let (mean, std) = mean_std(&ds);
            time_aggregates.push(TimeAggregate {
                l,
                t,
                mean_hausdorff: mean,
                std_hausdorff: std,
                max_hausdorff: ds.iter().copied().fold(0.0, f64::max),
                replicas: ds.len(),
            });
        }
        let scale = time_scale(cfg.h, l);
        let taus: Vec<f64> = of_l.iter().filter_map(|r| r.tau_plus).map(|t| t / scale).collect();
        let censored = of_l.iter().filter(|r| r.censored).count();
        if !taus.is_empty() {
            let (mean, std) = mean_std(&taus);
            tau_aggregates.push(TauAggregate {
                l,
                mean_rescaled_tau: mean,
                std_rescaled_tau: std,
                censored,
                replicas: of_l.len(),
            });
        }
    }

    let result = ExperimentResult {
        schema_version: RESULT_SCHEMA_VERSION,
        config: cfg.clone(),
        replicas,
        time_aggregates,
        tau_aggregates,
    };
    if let Some(dir) = &cfg.out_dir {
        save_results(&result, dir)?;
    }
    Ok(result)
}

/// One row of the convergence table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub l: i64,
    pub mean_hausdorff: f64,
    pub hausdorff_se: f64,
    /// `|mean rescaled tau - expected|` when an expected value applies.
    pub tau_error: Option<f64>,
    pub tau_se: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Errors non-increasing in L within one combined standard error.
    pub hausdorff_nonincreasing: bool,
    pub tau_error_nonincreasing: bool,
}

/// Runs the experiment across its `L` list and reports whether the errors
/// shrink with `L`. `expected_tau` is the rescaled extinction constant to
/// compare against (e.g. `area / 2` at zero field), when extinction is part
/// of the experiment.
pub fn convergence_sweep(
    cfg: &ExperimentConfig,
    expected_tau: Option<f64>,
) -> Result<(ExperimentResult, SweepTable), HarnessError> {
    if cfg.l_values.len() < 2 {
        return Err(HarnessError::InvalidConfig("a sweep needs at least two L values".into()));
    }
    let result = run_experiment(cfg)?;
    let mut rows = Vec::new();
    for &l in &cfg.l_values {
        let ds: Vec<f64> = result
            .replicas
            .iter()
            .filter(|r| r.l == l)
            .flat_map(|r| r.hausdorff.iter().filter_map(|&(_, d)| d))
            .collect();
        let (mean_h, _) = mean_std(&ds);
        let se_h = standard_error(&ds);
        let (tau_error, tau_se) = match expected_tau {
            None => (None, None),
            Some(expect) => {
                let scale = time_scale(cfg.h, l);
                let taus: Vec<f64> = result
                    .replicas
                    .iter()
                    .filter(|r| r.l == l)
                    .filter_map(|r| r.tau_plus)
                    .map(|t| t / scale)
                    .collect();
                let (mean_tau, _) = mean_std(&taus);
                (Some((mean_tau - expect).abs()), Some(standard_error(&taus)))
            }
        };
        rows.push(SweepRow {
            l,
            mean_hausdorff: if ds.is_empty() { f64::NAN } else { mean_h },
            hausdorff_se: if ds.is_empty() { f64::NAN } else { se_h },
            tau_error,
            tau_se,
        });
    }
    let non_increasing = |vals: &[(f64, f64)]| -> bool {
        vals.windows(2).all(|w| {
            let (e0, s0) = w[0];
            let (e1, s1) = w[1];
            e1 <= e0 + (s0 * s0 + s1 * s1).sqrt().max(1e-12)
        })
    };
    let h_pairs: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.mean_hausdorff.is_finite())
        .map(|r| (r.mean_hausdorff, r.hausdorff_se))
        .collect();
    let tau_pairs: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.tau_error.map(|e| (e, r.tau_se.unwrap_or(0.0))))
        .collect();
    let table = SweepTable {
        hausdorff_nonincreasing: h_pairs.len() < 2 || non_increasing(&h_pairs),
        tau_error_nonincreasing: tau_pairs.len() < 2 || non_increasing(&tau_pairs),
        rows,
    };
    Ok((result, table))
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

/// Writes `results.json` and `replicas.csv` into `dir` (created if absent),
/// atomically (write-temp-then-rename). Identical configs produce
/// byte-identical files.
pub fn save_results(result: &ExperimentResult, dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir)?;
    let json = serde_json::to_vec_pretty(result)?;
    atomic_write(&dir.join("results.json"), &json)?;
    atomic_write(&dir.join("replicas.csv"), replicas_csv(result).as_bytes())?;
    Ok(())
}

pub fn load_results(path: &Path) -> Result<ExperimentResult, HarnessError> {
    #[derive(Deserialize)]
    struct VersionProbe {
        schema_version: u32,
    }
    let bytes = std::fs::read(path)?;
    let probe: VersionProbe = serde_json::from_slice(&bytes)?;
    if probe.schema_version != RESULT_SCHEMA_VERSION {
        return Err(HarnessError::UnknownSchemaVersion(probe.schema_version));
    }
    Ok(serde_json::from_slice(&bytes)?)
}

/// One row per replica and sampled time:
/// `l,seed,engine,t,hausdorff,tau_plus,censored,events,overflow`.
pub fn replicas_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("l,seed,engine,t,hausdorff,tau_plus,censored,events,overflow\n");
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.9e}")).unwrap_or_default();
    for r in &result.replicas {
        let engine = match r.engine {
            EngineChoice::Kmc => "kmc",
            EngineChoice::Graphical => "graphical",
        };
        if r.hausdorff.is_empty() {
            out.push_str(&format!(
                "{},{},{},,,{},{},{},{}\n",
                r.l,
                r.seed,
                engine,
                fmt(r.tau_plus),
                r.censored,
                r.event_count,
                r.overflow_count
            ));
        }
        for &(t, d) in &r.hausdorff {
            out.push_str(&format!(
                "{},{},{},{:.6},{},{},{},{},{}\n",
                r.l,
                r.seed,
                engine,
                t,
                fmt(d),
                fmt(r.tau_plus),
                r.censored,
                r.event_count,
                r.overflow_count
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Mean-interface validation against the heat equation
// ---------------------------------------------------------------------------

/// Result of comparing seed-averaged interfaces to the Dirichlet heat
/// solver (the validation mode of the heat solver: the mean height obeys
/// the discrete-Laplacian drift identity, so on the diffusive scale it
/// must track the PDE).
#[derive(Clone, Debug)]
pub struct SsepHeatReport {
    pub sup_error: f64,
    pub seeds: usize,
    pub l: i64,
}

/// Runs the zero-field interface dynamics from the staircase closest to
/// `L v0(x / L)` on the segment `[-2L, 2L]` for `seeds` replicas, averages
/// the rescaled interfaces at diffusive time `t`, and reports the sup
/// distance to the heat solution with the same initial data.
pub fn validate_ssep_heat(
    v0: &crate::limits::Profile1D,
    l: i64,
    t: f64,
    seeds: u64,
) -> Result<SsepHeatReport, HarnessError> {
    use crate::particles::{sep_occupation_from_height, simulate_exclusion, ClockKeying};
    let span = 2 * l;
    let eta0 = staircase_from_profile(v0, l);
    let occ0 = sep_occupation_from_height(&eta0);
    let params = FieldParameter::zero_temperature(0.0);
    let horizon = t * (l * l) as f64;
    let sums: Vec<f64> = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let clocks = ClockField::new(0x5eed_0000 + seed);
            let traj = simulate_exclusion(
                &occ0,
                &params,
                &clocks,
                horizon,
                &[horizon],
                ClockKeying::Columns,
            )
            .expect("valid sample times");
            traj.heights[0].values().iter().map(|&v| v as f64).collect::<Vec<f64>>()
        })
        .reduce(
            || vec![0.0; (2 * span + 1) as usize],
            |mut acc, vals| {
                for (a, v) in acc.iter_mut().zip(vals) {
                    *a += v;
                }
                acc
            },
        );
    let heat = crate::limits::heat_dirichlet(v0, t)?;
    let mut sup = 0.0f64;
    for (k, &s) in sums.iter().enumerate() {
        let x = (k as i64 - span) as f64 / l as f64;
        let mean = s / seeds as f64 / l as f64;
        sup = sup.max((mean - heat.sample(x)).abs());
    }
    Ok(SsepHeatReport { sup_error: sup, seeds: seeds as usize, l })
}

/// Parity-respecting staircase approximation of `L v0(x / L)` on the
/// interface segment `[-2L, 2L]`, pinned to zero at both ends.
pub fn staircase_from_profile(
    v0: &crate::limits::Profile1D,
    l: i64,
) -> crate::particles::HeightFunction {
    let span = 2 * l;
    let lf = l as f64;
    let n = (2 * span + 1) as usize;
    let mut values = vec![0i64; n];
    for (k, v) in values.iter_mut().enumerate() {
        let a = k as i64 - span;
        let target = lf * v0.sample(a as f64 / lf);
        // round to the parity grid eta(a) = a mod 2
        let base = target.round() as i64;
        *v = if (base - a).rem_euclid(2) == 0 {
            base
        } else if target > base as f64 {
            base + 1
        } else {
            base - 1
        };
    }
    values[0] = -span % 2 + span; // pinned ends: eta(+-2L) = 0 parity-adjusted
    values[0] = 0;
    values[n - 1] = 0;
    // enforce the +-1 step constraint with clamping sweeps
    for k in 1..n {
        values[k] = values[k].clamp(values[k - 1] - 1, values[k - 1] + 1);
        if (values[k] - values[k - 1]).abs() != 1 {
            values[k] = values[k - 1] + 1;
        }
    }
    for k in (0..n - 1).rev() {
        values[k] = values[k].clamp(values[k + 1] - 1, values[k + 1] + 1);
        if (values[k] - values[k + 1]).abs() != 1 {
            values[k] = values[k + 1] + 1;
        }
    }
    crate::particles::HeightFunction::new(-span, values).expect("staircase construction")
}
