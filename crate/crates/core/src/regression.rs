//! Simple linear regression by ordinary least squares.
//!
//! A resource measure `r` is modelled as a linear function of a workload
//! measure `w` plus an error term. The estimated line is
//!
//! ```text
//! r'_a = mu0_hat + mu1_hat * w_a
//! ```
//!
//! and the coefficients minimise the sum of squared residuals. Setting both
//! partial derivatives of the SSR to zero gives the normal equations, whose
//! joint solution is
//!
//! ```text
//! mu1_hat = (Σ w_a r_a − r̄ Σ w_a) / (Σ w_a² − w̄ Σ w_a)
//! mu0_hat = r̄ − mu1_hat w̄
//! ```
//!
//! All sums run in index order with Neumaier compensated summation so the
//! results are reproducible bit for bit.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegressionError {
    #[error("insufficient data: need at least 2 observations, got {n}")]
    InsufficientData { n: usize },
    #[error("singular design: all w values are equal")]
    SingularDesign,
    #[error("constant response: total sum of squares is zero")]
    ConstantResponse,
    #[error("non-finite observation at index {index}")]
    NonFinite { index: usize },
    #[error("empty dataset")]
    Empty,
}

/// Relative threshold below which the centred sum of squares of `w` is
/// treated as zero.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// One data pair: workload measure `w` and resource measure `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub w: f64,
    pub r: f64,
}

impl Observation {
    pub fn new(w: f64, r: f64) -> Option<Self> {
        (w.is_finite() && r.is_finite()).then_some(Observation { w, r })
    }
}

/// Observations indexed `a = 1..n` in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    observations: Vec<Observation>,
}

impl Dataset {
    pub fn new(observations: Vec<Observation>) -> Result<Self, RegressionError> {
        if let Some(index) = observations
            .iter()
            .position(|o| !(o.w.is_finite() && o.r.is_finite()))
        {
            return Err(RegressionError::NonFinite { index });
        }
        Ok(Dataset { observations })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self, RegressionError> {
        Self::new(pairs.iter().map(|&(w, r)| Observation { w, r }).collect())
    }

    pub fn push(&mut self, obs: Observation) -> Result<(), RegressionError> {
        if !(obs.w.is_finite() && obs.r.is_finite()) {
            return Err(RegressionError::NonFinite {
                index: self.observations.len(),
            });
        }
        self.observations.push(obs);
        Ok(())
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn mean_w(&self) -> f64 {
        compensated_sum(self.observations.iter().map(|o| o.w)) / self.len() as f64
    }

    pub fn mean_r(&self) -> f64 {
        compensated_sum(self.observations.iter().map(|o| o.r)) / self.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionModel {
    pub mu0_hat: f64,
    pub mu1_hat: f64,
    pub ssr: f64,
    pub n: usize,
    /// `SSR / (n − 2)`, only defined for `n > 2`.
    pub sigma2_hat: Option<f64>,
}

impl RegressionModel {
    /// A model with the given coefficients and no fit diagnostics.
    pub fn with_coefficients(mu0_hat: f64, mu1_hat: f64) -> Self {
        RegressionModel {
            mu0_hat,
            mu1_hat,
            ssr: 0.0,
            n: 0,
            sigma2_hat: None,
        }
    }

    pub fn predict(&self, w: f64) -> f64 {
        self.mu0_hat + self.mu1_hat * w
    }

    pub fn residuals(&self, data: &Dataset) -> Vec<f64> {
        residuals(self, data)
    }
}

/// Fits `r = mu0 + mu1 * w` to `data` by ordinary least squares.
pub fn fit(data: &Dataset) -> Result<RegressionModel, RegressionError> {
    let n = data.len();
    if n < 2 {
        return Err(RegressionError::InsufficientData { n });
    }
    let obs = data.observations();
    let nf = n as f64;

    let sum_w = compensated_sum(obs.iter().map(|o| o.w));
    let sum_r = compensated_sum(obs.iter().map(|o| o.r));
    let sum_wr = compensated_sum(obs.iter().map(|o| o.w * o.r));
    let sum_ww = compensated_sum(obs.iter().map(|o| o.w * o.w));
    let mean_w = sum_w / nf;
    let mean_r = sum_r / nf;

    let centred_ss = compensated_sum(obs.iter().map(|o| (o.w - mean_w) * (o.w - mean_w)));
    if centred_ss < SINGULARITY_THRESHOLD * sum_ww.max(1.0) {
        return Err(RegressionError::SingularDesign);
    }

    let numerator = sum_wr - mean_r * sum_w;
    let denominator = sum_ww - mean_w * sum_w;
    if denominator == 0.0 {
        return Err(RegressionError::SingularDesign);
    }
    let mu1_hat = numerator / denominator;
    let mu0_hat = mean_r - mu1_hat * mean_w;

    let mut model = RegressionModel {
        mu0_hat,
        mu1_hat,
        ssr: 0.0,
        n,
        sigma2_hat: None,
    };
    model.ssr = ssr(&model, data);
    model.sigma2_hat = (n > 2).then(|| model.ssr / (nf - 2.0));
    Ok(model)
}

pub fn predict(model: &RegressionModel, w: f64) -> f64 {
    model.predict(w)
}

/// `c'_a = r_a − (mu0_hat + mu1_hat w_a)`, in dataset order.
pub fn residuals(model: &RegressionModel, data: &Dataset) -> Vec<f64> {
    data.observations()
        .iter()
        .map(|o| o.r - model.predict(o.w))
        .collect()
}

/// Sum of squared residuals of `model` over `data`.
pub fn ssr(model: &RegressionModel, data: &Dataset) -> f64 {
    compensated_sum(residuals(model, data).into_iter().map(|c| c * c))
}

/// Total sum of squares `Σ (r_a − r̄)²`.
pub fn sst(data: &Dataset) -> f64 {
    let mean_r = data.mean_r();
    compensated_sum(data.observations().iter().map(|o| (o.r - mean_r) * (o.r - mean_r)))
}

/// Coefficient of determination `R² = 1 − SSR/SST`.
///
/// Lies in `[0, 1]` when `model` was fit to `data`; an arbitrary model can
/// score below zero.
pub fn goodness_of_fit(model: &RegressionModel, data: &Dataset) -> Result<f64, RegressionError> {
    let obs = data.observations();
    let first = obs.first().ok_or(RegressionError::Empty)?;
    if obs.iter().all(|o| o.r == first.r) {
        return Err(RegressionError::ConstantResponse);
    }
    let total = sst(data);
    if total == 0.0 {
        return Err(RegressionError::ConstantResponse);
    }
    Ok(1.0 - ssr(model, data) / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(pairs: &[(f64, f64)]) -> Dataset {
        Dataset::from_pairs(pairs).unwrap()
    }

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let scale = expected.abs().max(f64::MIN_POSITIVE);
        assert!(
            (actual - expected).abs() <= tol * scale,
            "{actual} != {expected} (rel tol {tol})"
        );
    }

    #[test]
    fn exact_line_through_origin() {
        let m = fit(&ds(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)])).unwrap();
        assert_eq!(m.mu0_hat, 0.0);
        assert_eq!(m.mu1_hat, 1.0);
        assert_eq!(m.ssr, 0.0);
        assert_eq!(m.n, 3);
        assert_eq!(m.sigma2_hat, Some(0.0));
    }

    #[test]
    fn three_point_example() {
        let data = ds(&[(1.0, 2.0), (2.0, 3.0), (3.0, 5.0)]);
        let m = fit(&data).unwrap();
        assert_rel(m.mu1_hat, 1.5, 1e-12);
        assert_rel(m.mu0_hat, 1.0 / 3.0, 1e-12);
        assert_rel(m.ssr, 1.0 / 6.0, 1e-12);
        assert_rel(m.sigma2_hat.unwrap(), 1.0 / 6.0, 1e-12);

        let c = residuals(&m, &data);
        for (got, want) in c.iter().zip([1.0 / 6.0, -1.0 / 3.0, 1.0 / 6.0]) {
            assert_rel(*got, want, 1e-12);
        }
        assert!(compensated_sum(c.iter().copied()).abs() < 1e-14);
        assert!(compensated_sum(c.iter().zip([1.0, 2.0, 3.0]).map(|(c, w)| c * w)).abs() < 1e-14);

        assert_rel(predict(&m, 2.0), 10.0 / 3.0, 1e-12);
        assert_rel(goodness_of_fit(&m, &data).unwrap(), 27.0 / 28.0, 1e-12);
        assert_rel(sst(&data), 42.0 / 9.0, 1e-12);
    }

    #[test]
    fn singular_design() {
        assert_eq!(fit(&ds(&[(1.0, 4.0), (1.0, 6.0)])), Err(RegressionError::SingularDesign));
        assert_eq!(
            fit(&ds(&[(0.1, 4.0), (0.1, 6.0), (0.1, 1.0)])),
            Err(RegressionError::SingularDesign)
        );
    }

    #[test]
    fn insufficient_data() {
        assert_eq!(fit(&ds(&[])), Err(RegressionError::InsufficientData { n: 0 }));
        assert_eq!(fit(&ds(&[(1.0, 1.0)])), Err(RegressionError::InsufficientData { n: 1 }));
    }

    #[test]
    fn two_points_interpolate() {
        let m = fit(&ds(&[(1.0, 3.0), (3.0, 7.0)])).unwrap();
        assert_eq!((m.mu0_hat, m.mu1_hat, m.ssr), (1.0, 2.0, 0.0));
        assert_eq!(m.sigma2_hat, None);
    }

    #[test]
    fn constant_response() {
        let data = ds(&[(0.0, 5.0), (1.0, 5.0), (2.0, 5.0)]);
        let m = fit(&data).unwrap();
        assert_eq!((m.mu0_hat, m.mu1_hat, m.ssr), (5.0, 0.0, 0.0));
        assert_eq!(goodness_of_fit(&m, &data), Err(RegressionError::ConstantResponse));
        // r̄ of 0.1s is not exactly 0.1, but the response is still constant
        let data = ds(&[(0.0, 0.1), (1.0, 0.1), (2.0, 0.1)]);
        assert_eq!(goodness_of_fit(&fit(&data).unwrap(), &data), Err(RegressionError::ConstantResponse));
    }

    #[test]
    fn perfect_fit_has_unit_r2() {
        let data = ds(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        assert_eq!(goodness_of_fit(&fit(&data).unwrap(), &data), Ok(1.0));
    }

    #[test]
    fn predict_examples() {
        assert_eq!(RegressionModel::with_coefficients(0.0, 1.0).predict(7.0), 7.0);
        assert_eq!(RegressionModel::with_coefficients(5.0, 0.0).predict(-123.5), 5.0);
    }

    #[test]
    fn single_point_residual() {
        let m = RegressionModel::with_coefficients(1.0, 2.0);
        assert_eq!(residuals(&m, &ds(&[(3.0, 10.0)])), vec![3.0]);
        assert_eq!(ssr(&m, &ds(&[(3.0, 10.0)])), 9.0);
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            Dataset::from_pairs(&[(1.0, 1.0), (f64::NAN, 2.0)]),
            Err(RegressionError::NonFinite { index: 1 })
        );
        assert!(Observation::new(1.0, f64::INFINITY).is_none());
        let mut d = Dataset::default();
        assert!(d.push(Observation { w: 1.0, r: f64::NEG_INFINITY }).is_err());
        assert!(d.is_empty());
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let xs = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(xs), 1.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }
}
