//! JSON experiment configuration.
//!
//! Complex numbers are written as `[re, im]`. Matrices are given by a
//! [`MatrixSpec`] and sized from the surrounding section's `n`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rmt_core::ensembles::AtomVariable;
use rmt_core::isotropic::AnnulusGrid;
use rmt_core::outliers::{FactorToken, PerturbationScenario, Regime, ScenarioOptions};
use rmt_core::ComplexMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Spectrum,
    Outliers,
    Isotropic,
    Lsv,
    Moments,
    Radial,
    Linearize,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Spectrum => "spectrum",
            ExperimentKind::Outliers => "outliers",
            ExperimentKind::Isotropic => "isotropic",
            ExperimentKind::Lsv => "lsv",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Radial => "radial",
            ExperimentKind::Linearize => "linearize",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `[re, im]` on the wire.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cplx(pub Complex64);

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cplx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Cplx(Complex64::new(re, im)))
    }
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx(z)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixSpec {
    /// `diag(entries, 0, ..., 0)`.
    Diag {
        entries: Vec<Cplx>,
    },
    /// Full `n x n` matrix, row by row.
    Dense {
        rows: Vec<Vec<Cplx>>,
    },
    Zero,
}

impl MatrixSpec {
    pub fn build(&self, n: usize) -> Result<ComplexMatrix, LabError> {
        match self {
            MatrixSpec::Zero => Ok(ComplexMatrix::zeros(n, n)),
            MatrixSpec::Diag { entries } => {
                let head: Vec<Complex64> = entries.iter().map(|c| c.0).collect();
                ComplexMatrix::padded_diag(&head, n).map_err(|e| LabError::Usage(e.to_string()))
            }
            MatrixSpec::Dense { rows } => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(LabError::Usage(format!("dense perturbation must be {n}x{n}")));
                }
                let data = rows.iter().flatten().map(|c| c.0).collect();
                ComplexMatrix::new(n, n, data).map_err(|e| LabError::Usage(e.to_string()))
            }
        }
    }
}

/// A factor token written as `"X1"` (random factor 1) or `"A2"`
/// (deterministic factor `I + A_2`), 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token(pub FactorToken);

impl FromStr for Token {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, rest) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let index: usize = rest
            .parse()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| format!("bad factor token {s:?}"))?;
        match head {
            "X" => Ok(Token(FactorToken::Random(index - 1))),
            "A" => Ok(Token(FactorToken::Deterministic(index - 1))),
            _ => Err(format!("bad factor token {s:?}, expected X<k> or A<k>")),
        }
    }
}

impl Serialize for Token {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let text = match self.0 {
            FactorToken::Random(k) => format!("X{}", k + 1),
            FactorToken::Deterministic(j) => format!("A{}", j + 1),
        };
        s.serialize_str(&text)
    }
}

impl<'de> Deserialize<'de> for Token {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegimeConfig {
    PureProduct,
    Multiplicative { interleaving: Vec<Token> },
    AdditiveToProduct,
    NonzeroMean { mu: Cplx, gamma: f64 },
    PerturbedFactors,
    RepeatedMultiplicative { interleaving: Vec<Token> },
    RepeatedAdditive,
    RepeatedFactors,
}

impl RegimeConfig {
    fn to_regime(&self) -> Regime {
        let tokens = |ts: &[Token]| ts.iter().map(|t| t.0).collect();
        match self {
            RegimeConfig::PureProduct => Regime::PureProduct,
            RegimeConfig::Multiplicative { interleaving } => Regime::Multiplicative {
                interleaving: tokens(interleaving),
            },
            RegimeConfig::AdditiveToProduct => Regime::AdditiveToProduct,
            RegimeConfig::NonzeroMean { mu, gamma } => Regime::NonzeroMean {
                mu: mu.0,
                gamma: *gamma,
            },
            RegimeConfig::PerturbedFactors => Regime::PerturbedFactors,
            RegimeConfig::RepeatedMultiplicative { interleaving } => Regime::RepeatedMultiplicative {
                interleaving: tokens(interleaving),
            },
            RegimeConfig::RepeatedAdditive => Regime::RepeatedAdditive,
            RegimeConfig::RepeatedFactors => Regime::RepeatedFactors,
        }
    }
}

fn default_epsilon() -> f64 {
    ScenarioOptions::default().epsilon
}

fn default_rank_bound() -> usize {
    ScenarioOptions::default().rank_bound
}

fn default_norm_bound() -> f64 {
    ScenarioOptions::default().norm_bound
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub regime: RegimeConfig,
    pub m: usize,
    pub n: usize,
    /// One atom per factor; a single atom is reused for every factor.
    pub atoms: Vec<AtomVariable>,
    #[serde(default)]
    pub perturbations: Vec<MatrixSpec>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_rank_bound")]
    pub rank_bound: usize,
    #[serde(default = "default_norm_bound")]
    pub norm_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
}

impl ScenarioConfig {
    pub fn build(&self) -> Result<PerturbationScenario, LabError> {
        let regime = self.regime.to_regime();
        let atoms = if !regime.is_repeated() && self.atoms.len() == 1 {
            vec![self.atoms[0].clone(); self.m]
        } else {
            self.atoms.clone()
        };
        let perturbations = self
            .perturbations
            .iter()
            .map(|p| p.build(self.n))
            .collect::<Result<Vec<_>, _>>()?;
        let options = ScenarioOptions {
            epsilon: self.epsilon,
            rank_bound: self.rank_bound,
            norm_bound: self.norm_bound,
            truncation: self.truncation,
        };
        PerturbationScenario::new(regime, self.m, self.n, atoms, perturbations, options)
            .map_err(|e| LabError::Usage(format!("invalid scenario: {e}")))
    }
}

/// Linearized block-cycle ensemble with blocks `X_k / sqrt(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub m: usize,
    pub n: usize,
    /// One atom per block; a single atom is reused for every block.
    pub atoms: Vec<AtomVariable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
}

impl EnsembleConfig {
    pub fn atoms(&self) -> Result<Vec<AtomVariable>, LabError> {
        if self.m == 0 || self.n == 0 {
            return Err(LabError::Usage("ensemble needs m >= 1 and n >= 1".into()));
        }
        let atoms = match self.atoms.len() {
            1 => vec![self.atoms[0].clone(); self.m],
            k if k == self.m => self.atoms.clone(),
            k => return Err(LabError::Usage(format!("{k} atoms for m = {}", self.m))),
        };
        for a in &atoms {
            a.validate().map_err(|e| LabError::Usage(e.to_string()))?;
        }
        Ok(atoms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub radial_points: usize,
    pub angular_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = AnnulusGrid::default();
        Self {
            inner_radius: g.inner_radius(),
            outer_radius: g.outer_radius(),
            radial_points: g.radial_points(),
            angular_points: g.angular_points(),
        }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<AnnulusGrid, LabError> {
        AnnulusGrid::new(
            self.inner_radius,
            self.outer_radius,
            self.radial_points,
            self.angular_points,
        )
        .map_err(|e| LabError::Usage(e.to_string()))
    }
}

/// Test vectors for the isotropic experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorChoice {
    /// `u = v = e_1`.
    Coordinate,
    /// `u = v = (1, ..., 1) / sqrt(mn)`.
    Uniform,
    /// A seeded random orthonormal pair.
    Random,
}

impl VectorChoice {
    pub fn name(self) -> &'static str {
        match self {
            VectorChoice::Coordinate => "coordinate",
            VectorChoice::Uniform => "uniform",
            VectorChoice::Random => "random",
        }
    }
}

/// Boundary vectors of the moment experiment, block by block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentVectors {
    Coordinate,
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    pub m: usize,
    pub n: usize,
    pub k_max: usize,
    /// One atom per color; a single atom is reused for every color.
    pub atoms: Vec<AtomVariable>,
    pub vectors: MomentVectors,
    /// Start color of the per-class table.
    #[serde(default = "one")]
    pub start_color: usize,
}

fn one() -> usize {
    1
}

fn default_tolerance() -> f64 {
    1e-7
}

fn default_vectors() -> Vec<VectorChoice> {
    vec![VectorChoice::Coordinate, VectorChoice::Random]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default = "default_vectors")]
    pub vectors: Vec<VectorChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentsConfig>,
    /// Matching tolerance of the linearization check.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, LabError> {
        let config: Self = serde_json::from_str(text).map_err(|e| LabError::Usage(format!("invalid config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks that the section the experiment needs is present.
    pub fn validate(&self) -> Result<(), LabError> {
        if self.trials == 0 {
            return Err(LabError::Usage("trials must be at least 1".into()));
        }
        let missing = |what: &str| LabError::Usage(format!("{} experiment needs a `{what}` section", self.experiment));
        match self.experiment {
            ExperimentKind::Spectrum | ExperimentKind::Outliers | ExperimentKind::Radial => {
                self.scenario.as_ref().ok_or_else(|| missing("scenario"))?;
            }
            ExperimentKind::Isotropic | ExperimentKind::Lsv | ExperimentKind::Linearize => {
                self.ensemble.as_ref().ok_or_else(|| missing("ensemble"))?.atoms()?;
            }
            ExperimentKind::Moments => {
                self.moments.as_ref().ok_or_else(|| missing("moments"))?;
            }
        }
        if self.experiment == ExperimentKind::Isotropic && self.vectors.is_empty() {
            return Err(LabError::Usage(
                "isotropic experiment needs at least one vector choice".into(),
            ));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(LabError::Usage(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<AnnulusGrid, LabError> {
        self.grid.clone().unwrap_or_default().build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_parse_and_print() {
        let t: Token = "X3".parse().unwrap();
        assert_eq!(t.0, FactorToken::Random(2));
        assert_eq!(
            serde_json::to_string(&Token(FactorToken::Deterministic(0))).unwrap(),
            "\"A1\""
        );
        assert!("X0".parse::<Token>().is_err());
        assert!("B1".parse::<Token>().is_err());
    }

    #[test]
    fn complex_numbers_are_pairs() {
        let m: MatrixSpec = serde_json::from_str(r#"{"kind":"diag","entries":[[1,2],[-3,0.5]]}"#).unwrap();
        let built = m.build(3).unwrap();
        assert_eq!(built[(0, 0)], Complex64::new(1.0, 2.0));
        assert_eq!(built[(1, 1)], Complex64::new(-3.0, 0.5));
        assert_eq!(built[(2, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn missing_section_is_a_usage_error() {
        let e = ExperimentConfig::from_json(r#"{"experiment":"outliers","seed":1}"#).unwrap_err();
        assert!(matches!(e, LabError::Usage(_)));
        let e = ExperimentConfig::from_json(r#"{"experiment":"outliers","bogus":1}"#).unwrap_err();
        assert!(matches!(e, LabError::Usage(_)));
    }
}
