//! One runner per experiment kind. Each returns its CSV tables and a JSON
//! metrics object; nothing here touches the file system.

use num_complex::Complex64;
use rmt_core::ensembles::{truncate, AtomVariable, TruncatedAtom};
use rmt_core::isotropic::{
    coordinate_vector, isotropic_deviations, least_singular_values, random_orthonormal_pair, resolvent_norms,
    uniform_vector,
};
use rmt_core::linalg::eigenvalues;
use rmt_core::linearization::{verify_linearization, BlockCycle};
use rmt_core::outliers::{predict_outliers, run_scenario, OutlierReport};
use rmt_core::par::Execution;
use rmt_core::pathgraphs::{
    class_table, exact_moment_bruteforce, exact_moment_by_classes, MomentMethod, BRUTE_FORCE_LIMIT,
};
use rmt_core::rng::derive_seed;
use rmt_core::spectra::{limit_radial_cdf, EmpiricalSpectrum};
use serde_json::{json, Map, Value};

use crate::config::{EnsembleConfig, ExperimentConfig, ExperimentKind, MomentVectors, VectorChoice};
use crate::error::LabError;

/// Number of reference points on the unit circle in figure data.
pub const CIRCLE_POINTS: usize = 256;

/// Index of the stream family used for random test vectors, kept apart
/// from the factor streams of the same trial.
const VECTOR_SEED_INDEX: u64 = u64::MAX;

/// A CSV table: file name, header and string cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub metrics: Map<String, Value>,
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

pub fn run(config: &ExperimentConfig, execution: Execution) -> Result<RunOutput, LabError> {
    config.validate()?;
    match config.experiment {
        ExperimentKind::Spectrum | ExperimentKind::Outliers => scenario_experiment(config, execution),
        ExperimentKind::Radial => radial(config, execution),
        ExperimentKind::Isotropic => isotropic(config, execution),
        ExperimentKind::Lsv => lsv(config, execution),
        ExperimentKind::Moments => moments(config, execution),
        ExperimentKind::Linearize => linearize(config, execution),
    }
}

fn scenario_experiment(config: &ExperimentConfig, execution: Execution) -> Result<RunOutput, LabError> {
    let sc = config.scenario.as_ref().expect("validated").build()?;
    let predicted = predict_outliers(&sc)?;
    let run = run_scenario(&sc, config.seed, config.trials, execution)?;
    let threshold = sc.detection_threshold();

    let mut figure = Table::new("figure.csv", &["eig_re", "eig_im", "kind"]);
    for z in run.spectra[0].eigenvalues() {
        let kind = if z.norm() >= threshold { "outlier" } else { "bulk" };
        figure.push(vec![num(z.re), num(z.im), kind.into()]);
    }
    for z in &predicted {
        figure.push(vec![num(z.re), num(z.im), "cross".into()]);
    }
    for j in 0..CIRCLE_POINTS {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / CIRCLE_POINTS as f64);
        figure.push(vec![num(z.re), num(z.im), "circle".into()]);
    }

    let mut trials = Table::new(
        "trials.csv",
        &[
            "trial",
            "spectral_radius",
            "radial_ks",
            "detected",
            "matched",
            "max_distance",
        ],
    );
    for (t, (report, spectrum)) in run.reports.iter().zip(&run.spectra).enumerate() {
        trials.push(vec![
            t.to_string(),
            num(spectrum.spectral_radius()),
            num(spectrum.radial_ks()),
            report.observed.len().to_string(),
            report.pairs.len().to_string(),
            num(report.max_distance()),
        ]);
    }

    let mut metrics = Map::new();
    metrics.insert("regime".into(), json!(sc.regime().name()));
    metrics.insert("sigma".into(), json!(sc.sigma()));
    metrics.insert("threshold".into(), json!(threshold));
    metrics.insert("predicted".into(), json!(predicted.len()));
    metrics.insert(
        "detected".into(),
        json!(run.reports.iter().map(|r| r.observed.len()).collect::<Vec<_>>()),
    );
    metrics.insert(
        "radial_ks".into(),
        json!(run.spectra.iter().map(|s| s.radial_ks()).collect::<Vec<_>>()),
    );
    metrics.insert(
        "spectral_radius".into(),
        json!(run.spectra.iter().map(|s| s.spectral_radius()).collect::<Vec<_>>()),
    );
    let mut tables = vec![figure, trials];
    if config.experiment == ExperimentKind::Outliers {
        // fewest matched pairs and largest distance over all trials
        let matched = run.reports.iter().map(|r| r.pairs.len()).min().unwrap_or(0);
        metrics.insert("matched_pairs".into(), json!(matched));
        metrics.insert(
            "max_match_distance".into(),
            json!(max_of(run.reports.iter().map(OutlierReport::max_distance))),
        );
        metrics.insert(
            "complete".into(),
            json!(run.reports.iter().all(OutlierReport::is_complete)),
        );
        tables.push(matches_table(&run.reports));
    }
    Ok(RunOutput { tables, metrics })
}

fn matches_table(reports: &[OutlierReport]) -> Table {
    let mut table = Table::new(
        "matches.csv",
        &[
            "trial",
            "predicted_re",
            "predicted_im",
            "observed_re",
            "observed_im",
            "distance",
        ],
    );
    let blank = || String::new();
    for (t, r) in reports.iter().enumerate() {
        for p in &r.pairs {
            let (a, b) = (r.predicted[p.predicted], r.observed[p.observed]);
            table.push(vec![
                t.to_string(),
                num(a.re),
                num(a.im),
                num(b.re),
                num(b.im),
                num(p.distance),
            ]);
        }
        for a in &r.unmatched_predicted {
            table.push(vec![t.to_string(), num(a.re), num(a.im), blank(), blank(), blank()]);
        }
        for b in &r.unmatched_observed {
            table.push(vec![t.to_string(), blank(), blank(), num(b.re), num(b.im), blank()]);
        }
    }
    table
}

fn radial(config: &ExperimentConfig, execution: Execution) -> Result<RunOutput, LabError> {
    let sc = config.scenario.as_ref().expect("validated").build()?;
    let spectra = execution.try_map(config.trials, |t| -> Result<EmpiricalSpectrum, rmt_core::Error> {
        let p = sc.realize(derive_seed(config.seed, t as u64));
        EmpiricalSpectrum::from_spectrum(eigenvalues(&p)?, sc.m(), sc.sigma())
    })?;
    let mut cdf = Table::new("radial.csv", &["modulus", "empirical_cdf", "limit_cdf"]);
    let mut moduli: Vec<f64> = spectra[0].eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let count = moduli.len() as f64;
    for (i, r) in moduli.iter().enumerate() {
        cdf.push(vec![
            num(*r),
            num((i + 1) as f64 / count),
            num(limit_radial_cdf(*r, sc.sigma(), sc.m())),
        ]);
    }
    let mut trials = Table::new("trials.csv", &["trial", "radial_ks", "spectral_radius"]);
    for (t, s) in spectra.iter().enumerate() {
        trials.push(vec![t.to_string(), num(s.radial_ks()), num(s.spectral_radius())]);
    }
    let ks: Vec<f64> = spectra.iter().map(|s| s.radial_ks()).collect();
    let mut metrics = Map::new();
    metrics.insert("sigma".into(), json!(sc.sigma()));
    metrics.insert("max_radial_ks".into(), json!(max_of(ks.iter().copied())));
    metrics.insert("radial_ks".into(), json!(ks));
    Ok(RunOutput {
        tables: vec![cdf, trials],
        metrics,
    })
}

/// Blocks `X_k / sqrt(n)` for trial seed `seed`, truncated when requested.
fn block_cycle(ens: &EnsembleConfig, seed: u64) -> Result<BlockCycle, LabError> {
    let atoms = ens.atoms()?;
    let bc = match ens.truncation {
        None => {
            let refs: Vec<&AtomVariable> = atoms.iter().collect();
            BlockCycle::scaled_iid(&refs, ens.n, seed)?
        }
        Some(level) => {
            let laws = atoms
                .iter()
                .map(|a| truncate(a, level))
                .collect::<Result<Vec<TruncatedAtom>, _>>()
                .map_err(|e| LabError::Usage(format!("invalid truncation: {e}")))?;
            let refs: Vec<&TruncatedAtom> = laws.iter().collect();
            BlockCycle::scaled_iid(&refs, ens.n, seed)?
        }
    };
    Ok(bc)
}

fn isotropic(config: &ExperimentConfig, execution: Execution) -> Result<RunOutput, LabError> {
    let ens = config.ensemble.as_ref().expect("validated");
    let grid = config.grid()?;
    let nodes = grid.nodes();
    let dim = ens.m * ens.n;
    let mut table = Table::new("isotropic.csv", &["trial", "vectors", "z_re", "z_im", "deviation"]);
    let mut worst = Map::new();
    for t in 0..config.trials {
        let trial_seed = derive_seed(config.seed, t as u64);
        let y = block_cycle(ens, trial_seed)?.materialize();
        for choice in &config.vectors {
            let (u, v) = match choice {
                VectorChoice::Coordinate => (coordinate_vector(dim, 0), coordinate_vector(dim, 0)),
                VectorChoice::Uniform => (uniform_vector(dim), uniform_vector(dim)),
                VectorChoice::Random => random_orthonormal_pair(dim, derive_seed(trial_seed, VECTOR_SEED_INDEX)),
            };
            let devs = isotropic_deviations(&y, &u, &v, &grid, execution)?;
            for (z, d) in nodes.iter().zip(&devs) {
                table.push(vec![t.to_string(), choice.name().into(), num(z.re), num(z.im), num(*d)]);
            }
            let entry = worst.entry(choice.name()).or_insert(json!(0.0));
            *entry = json!(entry.as_f64().unwrap_or(0.0).max(max_of(devs)));
        }
    }
    let overall = max_of(worst.values().filter_map(Value::as_f64));
    let mut metrics = Map::new();
    metrics.insert("max_deviation".into(), json!(overall));
    metrics.insert("max_deviation_by_vectors".into(), Value::Object(worst));
    Ok(RunOutput {
        tables: vec![table],
        metrics,
    })
}

fn lsv(config: &ExperimentConfig, execution: Execution) -> Result<RunOutput, LabError> {
    let ens = config.ensemble.as_ref().expect("validated");
    let grid = config.grid()?;
    let nodes = grid.nodes();
    let mut table = Table::new("lsv.csv", &["trial", "z_re", "z_im", "s_min", "resolvent_norm"]);
    let (mut inf, mut sup) = (f64::INFINITY, 0.0f64);
    for t in 0..config.trials {
        let y = block_cycle(ens, derive_seed(config.seed, t as u64))?.materialize();
        let smins = least_singular_values(&y, &grid, execution)?;
        let norms = resolvent_norms(&y, &grid, execution)?;
        for ((z, s), r) in nodes.iter().zip(&smins).zip(&norms) {
            table.push(vec![t.to_string(), num(z.re), num(z.im), num(*s), num(*r)]);
            inf = inf.min(*s);
            sup = sup.max(*r);
        }
    }
    let mut metrics = Map::new();
    metrics.insert("least_singular_inf".into(), json!(inf));
    metrics.insert("resolvent_norm_sup".into(), json!(sup));
    Ok(RunOutput {
        tables: vec![table],
        metrics,
    })
}

fn moments(config: &ExperimentConfig, execution: Execution) -> Result<RunOutput, LabError> {
    let mc = config.moments.as_ref().expect("validated");
    let ens = EnsembleConfig {
        m: mc.m,
        n: mc.n,
        atoms: mc.atoms.clone(),
        truncation: None,
    };
    let atoms = ens.atoms()?;
    if mc.start_color == 0 || mc.start_color > mc.m {
        return Err(LabError::Usage(format!(
            "start color {} is not in 1..={}",
            mc.start_color, mc.m
        )));
    }
    let dim = mc.m * mc.n;
    let u = match mc.vectors {
        MomentVectors::Coordinate => coordinate_vector(dim, 0),
        MomentVectors::Uniform => uniform_vector(dim),
    };
    let mut values = Table::new(
        "moments.csv",
        &[
            "k",
            "value_re",
            "value_im",
            "method",
            "bruteforce_re",
            "bruteforce_im",
            "abs_diff",
        ],
    );
    let mut classes = Table::new(
        "classes.csv",
        &[
            "k",
            "representative",
            "height",
            "parallel_pairs",
            "contribution_re",
            "contribution_im",
        ],
    );
    let mut worst = 0.0f64;
    for k in 0..=mc.k_max {
        let by_classes = exact_moment_by_classes(&u, &u, &atoms, mc.n, mc.m, k, execution)?;
        let method = match by_classes.method {
            MomentMethod::Classes => "classes",
            MomentMethod::BruteForceFallback => "bruteforce_fallback",
        };
        let work = mc.m as f64 * (mc.n as f64).powi(k as i32 + 1);
        let mut row = vec![
            k.to_string(),
            num(by_classes.value.re),
            num(by_classes.value.im),
            method.into(),
        ];
        if work <= BRUTE_FORCE_LIMIT {
            let bf = exact_moment_bruteforce(&u, &u, &atoms, mc.n, mc.m, k)?;
            let diff = (bf - by_classes.value).norm();
            worst = worst.max(diff);
            row.extend([num(bf.re), num(bf.im), num(diff)]);
        } else {
            row.extend([String::new(), String::new(), String::new()]);
        }
        values.push(row);
        for c in class_table(mc.m, k, mc.start_color, &atoms)? {
            let pairs: Vec<String> = c.parallel_pairs.iter().map(|(s, t)| format!("{s}-{t}")).collect();
            classes.push(vec![
                k.to_string(),
                c.representative.to_string(),
                c.height.to_string(),
                pairs.join(" "),
                num(c.contribution.re),
                num(c.contribution.im),
            ]);
        }
    }
    let mut metrics = Map::new();
    metrics.insert("max_abs_diff".into(), json!(worst));
    Ok(RunOutput {
        tables: vec![values, classes],
        metrics,
    })
}

fn linearize(config: &ExperimentConfig, execution: Execution) -> Result<RunOutput, LabError> {
    let ens = config.ensemble.as_ref().expect("validated");
    let reports = execution.try_map(config.trials, |t| -> Result<_, LabError> {
        let bc = block_cycle(ens, derive_seed(config.seed, t as u64))?;
        Ok(verify_linearization(&bc, config.tolerance)?)
    })?;
    let mut table = Table::new("linearize.csv", &["trial", "max_distance", "ok"]);
    for (t, r) in reports.iter().enumerate() {
        table.push(vec![t.to_string(), num(r.max_distance), r.ok.to_string()]);
    }
    let mut metrics = Map::new();
    metrics.insert("all_ok".into(), json!(reports.iter().all(|r| r.ok)));
    metrics.insert(
        "max_distance".into(),
        json!(max_of(reports.iter().map(|r| r.max_distance))),
    );
    Ok(RunOutput {
        tables: vec![table],
        metrics,
    })
}
