use super::predict::{detect_outliers, predict_outliers};
use super::report::{match_outliers, OutlierReport};
use super::scenario::{Noise, PerturbationScenario};
use crate::error::Result;
use crate::linalg::eigenvalues;
use crate::par::Execution;
use crate::rng::derive_seed;
use crate::spectra::EmpiricalSpectrum;

/// Per-trial results, in trial order.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioRun {
    pub reports: Vec<OutlierReport>,
    pub spectra: Vec<EmpiricalSpectrum>,
}

/// Realizes `trials` independent copies of the scenario (trial `t` uses seed
/// `derive_seed(seed, t)`), detects eigenvalues beyond the detection
/// threshold and matches them against the prediction.
pub fn run_scenario(sc: &PerturbationScenario, seed: u64, trials: usize, execution: Execution) -> Result<ScenarioRun> {
    run_scenario_with(sc, seed, trials, Noise::Sampled, execution)
}

pub fn run_scenario_with(
    sc: &PerturbationScenario,
    seed: u64,
    trials: usize,
    noise: Noise,
    execution: Execution,
) -> Result<ScenarioRun> {
    let predicted = predict_outliers(sc)?;
    let threshold = sc.detection_threshold();
    let results = execution.try_map(trials, |t| -> Result<(OutlierReport, EmpiricalSpectrum)> {
        let p = sc.realize_with(derive_seed(seed, t as u64), noise);
        let spectrum = EmpiricalSpectrum::from_spectrum(eigenvalues(&p)?, sc.m(), sc.sigma())?;
        let observed = detect_outliers(&spectrum, threshold);
        Ok((
            match_outliers(&predicted, &observed).with_threshold(threshold),
            spectrum,
        ))
    })?;
    let (reports, spectra) = results.into_iter().unzip();
    Ok(ScenarioRun { reports, spectra })
}
