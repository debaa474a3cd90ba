use num_complex::Complex64;
use rand::RngCore;

use crate::ensembles::{sample_iid_matrix_on_stream, truncate, AtomVariable, EntryLaw, TruncatedAtom};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, svd, ComplexMatrix};

/// One factor of a multiplicative product: a random factor `X_k / sqrt(n)`
/// or a deterministic factor `I + A_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorToken {
    Random(usize),
    Deterministic(usize),
}

impl FactorToken {
    /// `X_1 (I + A_1) X_2 (I + A_2) ... X_m (I + A_m)`.
    pub fn alternating(m: usize) -> Vec<FactorToken> {
        (0..m)
            .flat_map(|k| [FactorToken::Random(k), FactorToken::Deterministic(k)])
            .collect()
    }

    /// Alternating layout with a single repeated random matrix.
    pub fn alternating_repeated(m: usize) -> Vec<FactorToken> {
        (0..m)
            .flat_map(|k| [FactorToken::Random(0), FactorToken::Deterministic(k)])
            .collect()
    }
}

/// The perturbation regimes. Repeated regimes use one random matrix `X` in
/// every factor.
#[derive(Clone, Debug, PartialEq)]
pub enum Regime {
    /// `n^{-m/2} X_1 ... X_m`.
    PureProduct,
    /// Random factors interleaved with `I + A_j` in the given order.
    Multiplicative { interleaving: Vec<FactorToken> },
    /// `n^{-m/2} X_1 ... X_m + A`.
    AdditiveToProduct,
    /// `n^{-m/2} X_1 ... X_m + mu n^gamma phi phi^*` with `phi = (1, ..., 1)/sqrt(n)`.
    NonzeroMean { mu: Complex64, gamma: f64 },
    /// `prod_k (X_k / sqrt(n) + A_k)`.
    PerturbedFactors,
    /// `m` copies of `X / sqrt(n)` interleaved with `I + A_j`.
    RepeatedMultiplicative { interleaving: Vec<FactorToken> },
    /// `n^{-m/2} X^m + A`.
    RepeatedAdditive,
    /// `prod_k (X / sqrt(n) + A_k)`.
    RepeatedFactors,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::PureProduct => "pure_product",
            Regime::Multiplicative { .. } => "multiplicative",
            Regime::AdditiveToProduct => "additive_to_product",
            Regime::NonzeroMean { .. } => "nonzero_mean",
            Regime::PerturbedFactors => "perturbed_factors",
            Regime::RepeatedMultiplicative { .. } => "repeated_multiplicative",
            Regime::RepeatedAdditive => "repeated_additive",
            Regime::RepeatedFactors => "repeated_factors",
        }
    }

    pub fn is_repeated(&self) -> bool {
        matches!(
            self,
            Regime::RepeatedMultiplicative { .. } | Regime::RepeatedAdditive | Regime::RepeatedFactors
        )
    }
}

/// Whether random factors are sampled or replaced by zero. The zero variant
/// exposes the deterministic limit exactly and exists for testing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Noise {
    #[default]
    Sampled,
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioOptions {
    /// Width parameter of the outlier bands.
    pub epsilon: f64,
    /// Largest accepted rank of a perturbation.
    pub rank_bound: usize,
    /// Largest accepted operator norm of a perturbation.
    pub norm_bound: f64,
    /// Sample from truncated atoms at this level.
    pub truncation: Option<f64>,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            rank_bound: 10,
            norm_bound: 10.0,
            truncation: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Law {
    Plain(AtomVariable),
    Truncated(TruncatedAtom),
}

impl EntryLaw for Law {
    fn sample_entry(&self, rng: &mut dyn RngCore) -> Complex64 {
        match self {
            Law::Plain(a) => a.sample(rng),
            Law::Truncated(t) => t.sample(rng),
        }
    }

    fn entry_variance(&self) -> f64 {
        match self {
            Law::Plain(a) => a.variance(),
            Law::Truncated(t) => t.entry_variance(),
        }
    }
}

/// A fully specified, validated perturbation scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationScenario {
    regime: Regime,
    m: usize,
    n: usize,
    atoms: Vec<AtomVariable>,
    laws: Vec<Law>,
    perturbations: Vec<ComplexMatrix>,
    options: ScenarioOptions,
}

impl PerturbationScenario {
    /// `atoms` has one entry per factor, or exactly one for repeated regimes.
    pub fn new(
        regime: Regime,
        m: usize,
        n: usize,
        atoms: Vec<AtomVariable>,
        perturbations: Vec<ComplexMatrix>,
        options: ScenarioOptions,
    ) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("scenario needs m >= 1 and n >= 1".into()));
        }
        let expected_atoms = if regime.is_repeated() { 1 } else { m };
        if atoms.len() != expected_atoms {
            return Err(Error::InvalidArgument(format!(
                "{} regime needs {expected_atoms} atom(s), got {}",
                regime.name(),
                atoms.len()
            )));
        }
        for a in &atoms {
            a.validate()?;
        }
        if !(options.epsilon.is_finite() && options.epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {}",
                options.epsilon
            )));
        }
        let expected_perturbations = match &regime {
            Regime::PureProduct | Regime::NonzeroMean { .. } => Some(0),
            Regime::AdditiveToProduct | Regime::RepeatedAdditive => Some(1),
            Regime::PerturbedFactors | Regime::RepeatedFactors => Some(m),
            Regime::Multiplicative { .. } | Regime::RepeatedMultiplicative { .. } => None,
        };
        if let Some(k) = expected_perturbations {
            if perturbations.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "{} regime needs {k} perturbation(s), got {}",
                    regime.name(),
                    perturbations.len()
                )));
            }
        }
        match &regime {
            Regime::Multiplicative { interleaving } => check_interleaving(interleaving, m, perturbations.len(), false)?,
            Regime::RepeatedMultiplicative { interleaving } => {
                check_interleaving(interleaving, m, perturbations.len(), true)?
            }
            Regime::NonzeroMean { mu, gamma } => {
                if mu.norm() == 0.0 || !mu.re.is_finite() || !mu.im.is_finite() {
                    return Err(Error::InvalidArgument("nonzero-mean regime needs mu != 0".into()));
                }
                if !(gamma.is_finite() && *gamma > 0.0) {
                    return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
                }
            }
            _ => {}
        }
        for (j, a) in perturbations.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Dimension(format!(
                    "perturbation {} is {}x{}, expected {n}x{n}",
                    j + 1,
                    a.rows(),
                    a.cols()
                )));
            }
            let (_, core) = support_submatrix(a);
            let sv = if core.is_empty() {
                Vec::new()
            } else {
                svd(&core)?.singular_values
            };
            let norm = sv.first().copied().unwrap_or(0.0);
            let rank = sv.iter().filter(|&&s| s > 1e-12 * (1.0 + norm)).count();
            if rank > options.rank_bound || norm > options.norm_bound * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "perturbation {} has rank {rank} and norm {norm:.6}, bounds are {} and {}",
                    j + 1,
                    options.rank_bound,
                    options.norm_bound
                )));
            }
        }
        let laws = atoms
            .iter()
            .map(|a| match options.truncation {
                Some(level) => truncate(a, level).map(Law::Truncated),
                None => Ok(Law::Plain(a.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            regime,
            m,
            n,
            atoms,
            laws,
            perturbations,
            options,
        })
    }

    pub fn regime(&self) -> &Regime {
        &self.regime
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[AtomVariable] {
        &self.atoms
    }

    pub fn perturbations(&self) -> &[ComplexMatrix] {
        &self.perturbations
    }

    pub fn options(&self) -> &ScenarioOptions {
        &self.options
    }

    pub fn epsilon(&self) -> f64 {
        self.options.epsilon
    }

    /// Product of the factor standard deviations: `sigma_1 ... sigma_m`, or
    /// `sigma^m` for repeated regimes. Truncated atoms have unit variance.
    pub fn sigma(&self) -> f64 {
        let sds: Vec<f64> = self.laws.iter().map(|l| l.entry_variance().sqrt()).collect();
        if self.regime.is_repeated() {
            sds[0].powi(self.m as i32)
        } else {
            sds.iter().product()
        }
    }

    /// `sigma + 2 epsilon`.
    pub fn detection_threshold(&self) -> f64 {
        self.sigma() + 2.0 * self.epsilon()
    }

    /// The realized `n x n` matrix for `seed`. Factor `k` is drawn from stream
    /// `k` of `seed`. Multiplicative products are realized in their
    /// normalized form (see [`normalized_interleaving`]), which is a cyclic
    /// rotation of the requested order and has the same spectrum.
    pub fn realize(&self, seed: u64) -> ComplexMatrix {
        self.realize_with(seed, Noise::Sampled)
    }

    pub fn realize_with(&self, seed: u64, noise: Noise) -> ComplexMatrix {
        let n = self.n;
        let scale = 1.0 / (n as f64).sqrt();
        let random = |k: usize| match noise {
            Noise::Sampled => sample_iid_matrix_on_stream(&self.laws[k], n, seed, k as u64).scale_real(scale),
            Noise::Zero => ComplexMatrix::zeros(n, n),
        };
        let product = |factors: Vec<ComplexMatrix>| {
            factors
                .into_iter()
                .reduce(|acc, f| acc.matmul(&f))
                .expect("at least one factor")
        };
        match &self.regime {
            Regime::PureProduct => product((0..self.m).map(random).collect()),
            Regime::AdditiveToProduct => &product((0..self.m).map(random).collect()) + &self.perturbations[0],
            Regime::NonzeroMean { mu, gamma } => {
                let spike = *mu * (n as f64).powf(*gamma) / n as f64;
                let mut p = product((0..self.m).map(random).collect());
                p.as_mut_slice().iter_mut().for_each(|z| *z += spike);
                p
            }
            Regime::PerturbedFactors => product((0..self.m).map(|k| &random(k) + &self.perturbations[k]).collect()),
            Regime::RepeatedAdditive => {
                let x = random(0);
                &product(vec![x; self.m]) + &self.perturbations[0]
            }
            Regime::RepeatedFactors => {
                let x = random(0);
                product(self.perturbations.iter().map(|a| &x + a).collect())
            }
            Regime::Multiplicative { interleaving } | Regime::RepeatedMultiplicative { interleaving } => {
                let form = normalized_interleaving(interleaving, &self.perturbations, n);
                let repeated = self.regime.is_repeated();
                let shared = if repeated { Some(random(0)) } else { None };
                let mut factors = Vec::with_capacity(2 * form.len());
                for (pert, k) in form {
                    factors.push(&ComplexMatrix::identity(n) + &pert);
                    factors.push(match &shared {
                        Some(x) => x.clone(),
                        None => random(k),
                    });
                }
                product(factors)
            }
        }
    }

    /// The deterministic matrix whose eigenvalues outside the bulk the
    /// outliers follow, when the regime has one.
    pub fn deterministic_limit(&self) -> Option<ComplexMatrix> {
        match &self.regime {
            Regime::AdditiveToProduct | Regime::RepeatedAdditive => Some(self.perturbations[0].clone()),
            Regime::PerturbedFactors | Regime::RepeatedFactors => {
                self.perturbations.iter().cloned().reduce(|acc, a| acc.matmul(&a))
            }
            _ => None,
        }
    }
}

fn check_interleaving(tokens: &[FactorToken], m: usize, s: usize, repeated: bool) -> Result<()> {
    let mut random_seen = vec![0usize; m];
    let mut det_seen = vec![0usize; s];
    let mut randoms = 0;
    for t in tokens {
        match *t {
            FactorToken::Random(k) => {
                if repeated && k != 0 {
                    return Err(Error::InvalidArgument(
                        "repeated regimes use a single random matrix, Random(0)".into(),
                    ));
                }
                if k >= m {
                    return Err(Error::InvalidArgument(format!("random factor {k} out of range")));
                }
                random_seen[k] += 1;
                randoms += 1;
            }
            FactorToken::Deterministic(j) => {
                if j >= s {
                    return Err(Error::InvalidArgument(format!(
                        "deterministic factor {j} out of range ({s} perturbations)"
                    )));
                }
                det_seen[j] += 1;
            }
        }
    }
    let random_ok = if repeated {
        randoms == m
    } else {
        random_seen.iter().all(|&c| c == 1)
    };
    if !random_ok || det_seen.iter().any(|&c| c != 1) || s == 0 {
        return Err(Error::InvalidArgument(
            "interleaving must use each random factor once (m copies when repeated), \
             and each of at least one perturbation exactly once"
                .into(),
        ));
    }
    Ok(())
}

/// Normal form `(I + B_1) Y_{r_1} (I + B_2) Y_{r_2} ...` of an interleaving:
/// adjacent deterministic factors (cyclically) are merged through
/// `(I + A)(I + B) = I + (A + B + AB)`, a zero perturbation separates
/// adjacent random factors, and the sequence is rotated to start with a
/// deterministic factor. Returns `(B_i, r_i)` pairs; the product is a cyclic
/// rotation of the original one.
pub fn normalized_interleaving(
    tokens: &[FactorToken],
    perturbations: &[ComplexMatrix],
    n: usize,
) -> Vec<(ComplexMatrix, usize)> {
    let Some(first_random) = tokens.iter().position(|t| matches!(t, FactorToken::Random(_))) else {
        return Vec::new();
    };
    // rotate so the sequence starts just after a random factor; then every
    // random factor closes one (merged) deterministic run
    let len = tokens.len();
    let start = (first_random + 1) % len;
    let mut out = Vec::new();
    let mut pending = ComplexMatrix::zeros(n, n);
    for t in (0..len).map(|i| tokens[(start + i) % len]) {
        match t {
            FactorToken::Deterministic(j) => {
                let a = &perturbations[j];
                pending = &(&pending + a) + &pending.matmul(a);
            }
            FactorToken::Random(k) => {
                out.push((std::mem::replace(&mut pending, ComplexMatrix::zeros(n, n)), k));
            }
        }
    }
    out
}

/// Indices of nonzero rows or columns and the principal submatrix on them.
/// All nonzero rank, norm and eigenvalue information of `a` lives there.
pub(crate) fn support_submatrix(a: &ComplexMatrix) -> (Vec<usize>, ComplexMatrix) {
    let n = a.rows();
    let zero = |z: &Complex64| z.re == 0.0 && z.im == 0.0;
    let support: Vec<usize> = (0..n)
        .filter(|&i| !a.row(i).iter().all(zero) || !(0..n).all(|r| zero(&a[(r, i)])))
        .collect();
    let core = ComplexMatrix::from_fn(support.len(), support.len(), |i, j| a[(support[i], support[j])]);
    (support, core)
}

/// Eigenvalues of `a`, computed on its support and padded with zeros.
pub(crate) fn sparse_aware_eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let (support, core) = support_submatrix(a);
    let mut vals = if core.is_empty() {
        Vec::new()
    } else {
        eigenvalues(&core)?.into_vec()
    };
    vals.resize(a.rows().max(support.len()), Complex64::new(0.0, 0.0));
    Ok(vals)
}
