//! Monte Carlo hypothesis tests and estimators that check the asymptotic
//! rates against finite-sample behaviour.
//!
//! Trials are split into fixed-size chunks; chunk `c` of purpose `s`
//! draws from `seed.derive(s).rng(c)`. Chunks run in parallel on the rayon
//! pool and are reduced in chunk order, so an outcome depends only on the
//! [`TestSpec`], never on the thread count.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circular::{CircularDensity, Family, PhaseSample};
use crate::divergences::fisher_information;
use crate::error::{invalid, Result};
use crate::numerics::{minimize_unimodal, QuadratureGrid};
use crate::schemes::SchemeChannel;
use crate::seed::RngSeed;

pub const MIN_TRIALS: usize = 100;
/// Trials per parallel work unit.
const CHUNK: usize = 250;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.96;
const MLE_TOL: f64 = 1e-8;

/// Stream purposes.
const CALIBRATION: u64 = 0;
const EVALUATION: u64 = 1;

/// What the test optimizes: a prior on the null for Bayes tests, or a
/// type-I level for Neyman–Pearson tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    Prior(f64),
    Level(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestSpec {
    pub criterion: Criterion,
    /// Samples per trial.
    pub n: usize,
    pub trials: usize,
    pub seed: RngSeed,
}

impl TestSpec {
    pub fn bayes(prior: f64, n: usize, trials: usize, seed: impl Into<RngSeed>) -> Result<Self> {
        TestSpec { criterion: Criterion::Prior(prior), n, trials, seed: seed.into() }.validated()
    }

    pub fn neyman_pearson(level: f64, n: usize, trials: usize, seed: impl Into<RngSeed>) -> Result<Self> {
        TestSpec { criterion: Criterion::Level(level), n, trials, seed: seed.into() }.validated()
    }

    fn validated(self) -> Result<Self> {
        let (what, v) = match self.criterion {
            Criterion::Prior(v) => ("prior", v),
            Criterion::Level(v) => ("level", v),
        };
        if !(v > 0.0 && v < 1.0) {
            return invalid(format!("{what} must lie in (0, 1), got {v}"));
        }
        if self.n == 0 {
            return invalid("need at least one sample per trial");
        }
        if self.trials < MIN_TRIALS {
            return invalid(format!("need at least {MIN_TRIALS} trials, got {}", self.trials));
        }
        Ok(self)
    }

    fn prior(&self) -> Result<f64> {
        match self.criterion {
            Criterion::Prior(l) => Ok(l),
            Criterion::Level(_) => invalid("a Bayes test needs a prior, not a level"),
        }
    }

    fn level(&self) -> Result<f64> {
        match self.criterion {
            Criterion::Level(e) => Ok(e),
            Criterion::Prior(_) => invalid("a Neyman–Pearson test needs a level, not a prior"),
        }
    }
}

/// Estimated error probabilities of one test, with 95% half-widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    /// Type I: deciding `q` when `p` is true.
    pub alpha_hat: f64,
    /// Type II: deciding `p` when `q` is true.
    pub beta_hat: f64,
    pub alpha_ci: f64,
    pub beta_ci: f64,
    /// The log-likelihood-ratio threshold `t`: the test decides `p` iff
    /// `Σ ln(p/q) ≥ t`.
    pub achieved_threshold: f64,
    pub trials: usize,
}

impl TestOutcome {
    /// `λα̂ + (1−λ)β̂`.
    pub fn average_error(&self, prior: f64) -> f64 {
        prior * self.alpha_hat + (1.0 - prior) * self.beta_hat
    }

    /// 95% half-width of [`Self::average_error`] (the two estimates are
    /// independent).
    pub fn average_ci(&self, prior: f64) -> f64 {
        (prior * prior * self.alpha_ci * self.alpha_ci + (1.0 - prior) * (1.0 - prior) * self.beta_ci * self.beta_ci)
            .sqrt()
    }
}

fn binomial_half_width(p: f64, trials: usize) -> f64 {
    Z95 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Runs `body(trial_count, rng)` once per chunk and returns the chunk
/// results in chunk order.
fn chunked<T, F>(trials: usize, seed: RngSeed, purpose: u64, body: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    let seed = seed.derive(purpose);
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let m = CHUNK.min(trials - c * CHUNK);
            body(m, &mut seed.rng(c as u64))
        })
        .collect()
}

/// `Σ_{i≤n} llr(xᵢ)` for `n` fresh draws.
fn llr_sum<D, L>(n: usize, draw: &D, llr: &L, rng: &mut ChaCha8Rng) -> Result<f64>
where
    D: Fn(&mut ChaCha8Rng) -> Result<f64>,
    L: Fn(f64) -> f64,
{
    let mut s = 0.0;
    for _ in 0..n {
        s += llr(draw(rng)?);
    }
    Ok(s)
}

fn threshold_test<Dp, Dq, L>(draw_p: Dp, draw_q: Dq, llr: L, spec: &TestSpec, threshold: f64) -> Result<TestOutcome>
where
    Dp: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
    Dq: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
    L: Fn(f64) -> f64 + Sync,
{
    let count = |draw: &(dyn Fn(&mut ChaCha8Rng) -> Result<f64> + Sync), purpose, wrong_if_accept: bool| {
        let parts = chunked(spec.trials, spec.seed, purpose, |m, rng| {
            let mut wrong = 0usize;
            for _ in 0..m {
                let accept = llr_sum(spec.n, &draw, &llr, rng)? >= threshold;
                wrong += usize::from(accept == wrong_if_accept);
            }
            Ok(wrong)
        })?;
        Ok::<f64, crate::error::Error>(parts.iter().sum::<usize>() as f64 / spec.trials as f64)
    };
    let alpha_hat = count(&draw_p, CALIBRATION, false)?;
    let beta_hat = count(&draw_q, EVALUATION, true)?;
    Ok(TestOutcome {
        alpha_hat,
        beta_hat,
        alpha_ci: binomial_half_width(alpha_hat, spec.trials),
        beta_ci: binomial_half_width(beta_hat, spec.trials),
        achieved_threshold: threshold,
        trials: spec.trials,
    })
}

fn bayes_threshold(prior: f64) -> f64 {
    ((1.0 - prior) / prior).ln()
}

/// Likelihood-ratio test with prior `λ`: decide `p` iff
/// `ln λ + Σ ln p(xᵢ) ≥ ln(1−λ) + Σ ln q(xᵢ)`. Trials under `p` use stream
/// purpose 0, trials under `q` purpose 1.
pub fn bayes_test(p: &CircularDensity, q: &CircularDensity, spec: &TestSpec) -> Result<TestOutcome> {
    bayes_test_with_threshold(p, q, spec, bayes_threshold(spec.prior()?))
}

/// [`bayes_test`] with an arbitrary log-likelihood-ratio threshold; used to
/// confirm that no other threshold beats the likelihood-ratio rule.
pub fn bayes_test_with_threshold(
    p: &CircularDensity,
    q: &CircularDensity,
    spec: &TestSpec,
    threshold: f64,
) -> Result<TestOutcome> {
    spec.prior()?;
    p.cdf_table();
    q.cdf_table();
    threshold_test(|r| Ok(p.draw(r)), |r| Ok(q.draw(r)), |x| p.log_pdf(x) - q.log_pdf(x), spec, threshold)
}

/// Neyman–Pearson test at level `ε` on the log-likelihood ratio
/// `S = Σ ln(p/q)`.
///
/// The threshold is the empirical `ε`-quantile of `S` over `trials`
/// calibration draws under `p` (purpose 0); the test rejects `p` below it.
/// Ties in `S` — which only occur when `p = q` — are broken by an
/// independent uniform key, so the level is met without a randomized
/// boundary rule.
///
/// The evaluation draws (purpose 1) are taken under `p` only: `α̂` counts
/// rejections and `β̂ = E_p[e^{−S} 1{accept}]` is the exact
/// change-of-measure estimate of `P_q(accept)`. Type-II errors of interest
/// are far too small to count under `q` directly.
pub fn neyman_pearson(p: &CircularDensity, q: &CircularDensity, spec: &TestSpec) -> Result<TestOutcome> {
    let eps = spec.level()?;
    p.cdf_table();
    let llr = |x: f64| p.log_pdf(x) - q.log_pdf(x);
    let draw = |r: &mut ChaCha8Rng| Ok(p.draw(r));
    let keyed = |r: &mut ChaCha8Rng| -> Result<(f64, f64)> {
        let s = llr_sum(spec.n, &draw, &llr, r)?;
        Ok((s, r.random::<f64>()))
    };

    let mut calib: Vec<(f64, f64)> =
        chunked(spec.trials, spec.seed, CALIBRATION, |m, r| (0..m).map(|_| keyed(r)).collect::<Result<Vec<_>>>())?
            .into_iter()
            .flatten()
            .collect();
    calib.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let cut = calib[((eps * spec.trials as f64).floor() as usize).min(spec.trials - 1)];
    let rejects = |k: (f64, f64)| k.0 < cut.0 || (k.0 == cut.0 && k.1 < cut.1);

    let parts = chunked(spec.trials, spec.seed, EVALUATION, |m, r| {
        let (mut rej, mut w, mut w2) = (0usize, 0.0, 0.0);
        for _ in 0..m {
            let k = keyed(r)?;
            if rejects(k) {
                rej += 1;
            } else {
                let lr = (-k.0).exp();
                w += lr;
                w2 += lr * lr;
            }
        }
        Ok((rej, w, w2))
    })?;
    let t = spec.trials as f64;
    let (rej, w, w2) = parts.iter().fold((0usize, 0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let alpha_hat = rej as f64 / t;
    let beta_hat = (w / t).min(1.0);
    let var = (w2 / t - (w / t).powi(2)).max(0.0);
    Ok(TestOutcome {
        alpha_hat,
        beta_hat,
        alpha_ci: binomial_half_width(alpha_hat, spec.trials),
        beta_ci: Z95 * (var / t).sqrt(),
        achieved_threshold: cut.0,
        trials: spec.trials,
    })
}

/// The Bayes test run on scheme outputs: each sample draws `φ` from the
/// channel density, then `φ̂` from the scheme's conditional law, and the
/// decision uses the induced densities (built on `panels` panels).
pub fn scheme_end_to_end(
    scheme: &SchemeChannel,
    p: &CircularDensity,
    q: &CircularDensity,
    spec: &TestSpec,
    panels: usize,
) -> Result<TestOutcome> {
    let prior = spec.prior()?;
    let ip = scheme.induce(p, panels)?;
    let iq = scheme.induce(q, panels)?;
    p.cdf_table();
    q.cdf_table();
    threshold_test(
        |r| scheme.sample_output(p.draw(r), r),
        |r| scheme.sample_output(q.draw(r), r),
        |x| ip.log_pdf(x) - iq.log_pdf(x),
        spec,
        bayes_threshold(prior),
    )
}

/// Maximum-likelihood spread parameter by golden-section search on
/// `bracket`.
///
/// The log-likelihood of these families is unimodal in the spread for
/// typical samples. Degenerate samples (e.g. one sample at the mode) push
/// the estimate to the lower end of the bracket.
pub fn mle_estimate(family: Family, samples: &[PhaseSample], bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return invalid(format!("bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"));
    }
    if samples.is_empty() {
        return invalid("no samples");
    }
    let m = minimize_unimodal(
        |theta| match family.density(theta) {
            Ok(d) => -samples.iter().map(|s| d.log_pdf(s.value())).sum::<f64>(),
            Err(_) => f64::INFINITY,
        },
        lo,
        hi,
        MLE_TOL,
    )?;
    Ok(m.argmin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cost {
    Quadratic,
    Absolute,
}

impl Cost {
    pub fn eval(self, estimate: f64, truth: f64) -> f64 {
        match self {
            Cost::Quadratic => (estimate - truth).powi(2),
            Cost::Absolute => (estimate - truth).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub risk: f64,
    /// Standard error of `risk`.
    pub std_error: f64,
    /// `1/(n F(θ))`; only a bound for the quadratic cost.
    pub cramer_rao: Option<f64>,
}

/// Monte Carlo risk of the MLE from `n` samples at `theta`, searched on the
/// default bracket `(θ/10, 10θ)`.
pub fn estimation_risk(
    family: Family,
    theta: f64,
    n: usize,
    trials: usize,
    seed: RngSeed,
    cost: Cost,
    grid: &QuadratureGrid,
) -> Result<RiskReport> {
    if n == 0 || trials < 2 {
        return invalid("need n ≥ 1 and at least two trials");
    }
    let truth = family.density(theta)?;
    truth.cdf_table();
    let bracket = (theta / 10.0, 10.0 * theta);
    let parts = chunked(trials, seed, EVALUATION, |m, r| {
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..m {
            let samples = truth.sample_with(r, n);
            let c = cost.eval(mle_estimate(family, &samples, bracket)?, theta);
            s += c;
            s2 += c * c;
        }
        Ok((s, s2))
    })?;
    let (s, s2) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let t = trials as f64;
    let risk = s / t;
    let var = (s2 / t - risk * risk).max(0.0) * t / (t - 1.0);
    let cramer_rao = match cost {
        Cost::Quadratic => Some(1.0 / (n as f64 * fisher_information(family, theta, grid)?)),
        Cost::Absolute => None,
    };
    Ok(RiskReport { risk, std_error: (var / t).sqrt(), cramer_rao })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergences::{bayes_error_exact_n1, chernoff};

    fn wn(g: f64) -> CircularDensity {
        Family::WrappedNormal.density(g).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(TestSpec::bayes(0.0, 1, 1000, 1).is_err());
        assert!(TestSpec::bayes(0.5, 0, 1000, 1).is_err());
        assert!(TestSpec::bayes(0.5, 1, 99, 1).is_err());
        assert!(TestSpec::neyman_pearson(1.0, 1, 1000, 1).is_err());
        let s = TestSpec::neyman_pearson(0.1, 1, 1000, 1).unwrap();
        assert!(bayes_test(&wn(1.0), &wn(2.0), &s).is_err());
    }

    #[test]
    fn identical_hypotheses_are_coin_flips() {
        let p = wn(1.0);
        let spec = TestSpec::bayes(0.5, 1, 4000, 3).unwrap();
        let o = bayes_test(&p, &p, &spec).unwrap();
        assert!((o.average_error(0.5) - 0.5).abs() <= o.average_ci(0.5) + 1e-12);
        let np = neyman_pearson(&p, &p, &TestSpec::neyman_pearson(0.05, 3, 4000, 3).unwrap()).unwrap();
        assert!((np.alpha_hat - 0.05).abs() <= np.alpha_ci);
        assert!((np.beta_hat - 0.95).abs() <= np.beta_ci + np.alpha_ci);
    }

    #[test]
    fn one_shot_bayes_matches_quadrature() {
        let (p, q) = (wn(1.0), wn(3.0));
        let exact = bayes_error_exact_n1(&p, &q, 0.5, &QuadratureGrid::default()).unwrap();
        let o = bayes_test(&p, &q, &TestSpec::bayes(0.5, 1, 50_000, 11).unwrap()).unwrap();
        let se = o.average_ci(0.5) / Z95;
        assert!((o.average_error(0.5) - exact).abs() <= 3.0 * se, "{} vs {exact}", o.average_error(0.5));
    }

    #[test]
    fn likelihood_ratio_threshold_is_optimal() {
        let (p, q) = (wn(1.0), wn(3.0));
        let spec = TestSpec::bayes(0.5, 5, 5000, 2).unwrap();
        let best = bayes_test(&p, &q, &spec).unwrap();
        let mut rng = RngSeed(9).rng(0);
        for _ in 0..10 {
            let t: f64 = rng.random_range(-2.0..2.0);
            let o = bayes_test_with_threshold(&p, &q, &spec, t).unwrap();
            assert!(o.average_error(0.5) >= best.average_error(0.5) - best.average_ci(0.5) - o.average_ci(0.5));
        }
    }

    #[test]
    fn reproducible_and_within_bounds() {
        let (p, q) = (wn(1.0), wn(2.0));
        let spec = TestSpec::bayes(0.3, 4, 1000, 42).unwrap();
        let a = bayes_test(&p, &q, &spec).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| bayes_test(&p, &q, &spec))
            .unwrap();
        assert_eq!(a, b);
        for v in [a.alpha_hat, a.beta_hat] {
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(a.alpha_ci >= 0.0 && a.beta_ci >= 0.0);
    }

    #[test]
    fn half_widths_shrink_with_trials() {
        let (p, q) = (wn(1.0), wn(3.0));
        let small = bayes_test(&p, &q, &TestSpec::bayes(0.5, 1, 2000, 5).unwrap()).unwrap();
        let large = bayes_test(&p, &q, &TestSpec::bayes(0.5, 1, 8000, 5).unwrap()).unwrap();
        let ratio = small.alpha_ci / large.alpha_ci;
        assert!((ratio - 2.0).abs() < 0.4, "{ratio}");
    }

    // ½ e^{−nC} bounds the error at λ = ½ for every n, so the finite-n
    // exponent sits above C + ln 2 / n and reaches C from above
    #[test]
    fn exponents_bracket_chernoff() {
        let (p, q) = (wn(1.0), wn(3.0));
        let c = chernoff(&p, &q, &QuadratureGrid::default()).unwrap().value;
        let mut last = f64::INFINITY;
        for n in [5, 10, 20] {
            let o = bayes_test(&p, &q, &TestSpec::bayes(0.5, n, 4000, 8).unwrap()).unwrap();
            let err = o.average_error(0.5);
            assert!(err - o.average_ci(0.5) <= 0.5 * (-(n as f64) * c).exp(), "n={n}: {err}");
            let e = -err.ln() / n as f64;
            assert!(e <= c + 3.0 / n as f64, "n={n}: {e} vs {c}");
            assert!(e < last);
            last = e;
        }
    }

    #[test]
    fn uninformative_scheme_gives_prior_error() {
        let (p, q) = (wn(1.0), wn(3.0));
        let scheme = SchemeChannel::rician(0.0).unwrap();
        for prior in [0.3, 0.5, 0.8] {
            let o = scheme_end_to_end(&scheme, &p, &q, &TestSpec::bayes(prior, 3, 500, 1).unwrap(), 64).unwrap();
            assert!((o.average_error(prior) - prior.min(1.0 - prior)).abs() < 1e-12);
        }
    }

    #[test]
    fn mle_behaviour() {
        let d = wn(1.0);
        let samples = d.sample(RngSeed(4), 10_000);
        let est = mle_estimate(Family::WrappedNormal, &samples, (0.1, 10.0)).unwrap();
        assert!((est - 1.0).abs() < 0.1, "{est}");
        assert_eq!(est, mle_estimate(Family::WrappedNormal, &samples, (0.1, 10.0)).unwrap());
        let one = [PhaseSample::new(0.0)];
        let degenerate = mle_estimate(Family::WrappedNormal, &one, (0.01, 10.0)).unwrap();
        assert!((degenerate - 0.01).abs() < 1e-12);
        assert!(mle_estimate(Family::WrappedNormal, &one, (1.0, 0.5)).is_err());
        assert!(mle_estimate(Family::WrappedNormal, &[], (0.1, 1.0)).is_err());
    }

    #[test]
    fn absolute_cost_has_no_bound() {
        let grid = QuadratureGrid::default();
        let r = estimation_risk(Family::VonMises, 1.0, 50, 200, RngSeed(1), Cost::Absolute, &grid).unwrap();
        assert!(r.risk > 0.0 && r.cramer_rao.is_none());
        let q = estimation_risk(Family::VonMises, 1.0, 50, 200, RngSeed(1), Cost::Quadratic, &grid).unwrap();
        assert!(q.cramer_rao.unwrap() > 0.0);
    }
}
