use super::SimLog;

/// Summary of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub rms_error: f64,
    pub max_abs_error: f64,
    pub control_variance: f64,
    /// `None` when the error never settles inside the band.
    pub settling_time: Option<f64>,
}

pub fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Population variance.
pub fn variance(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
}

/// Variance of the sample-to-sample increments, which isolates the
/// high-frequency part of a signal from its slow trend.
pub fn increment_variance(values: &[f64]) -> f64 {
    let inc: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    variance(&inc)
}

/// First time after which `|e|` stays strictly below `band` for the rest
/// of the record.
pub fn settling_time(t: &[f64], e: &[f64], band: f64) -> Option<f64> {
    match e.iter().rposition(|v| v.abs() >= band) {
        None => t.first().copied(),
        Some(i) if i + 1 < t.len() => Some(t[i + 1]),
        Some(_) => None,
    }
}

/// Metrics over the whole log; the settling band is 2% of `span`.
pub fn metrics(log: &SimLog, span: f64) -> Metrics {
    Metrics {
        rms_error: rms(&log.e),
        max_abs_error: max_abs(&log.e),
        control_variance: variance(&log.u),
        settling_time: settling_time(&log.t, &log.e, 0.02 * span),
    }
}

/// Metrics restricted to rows with `t >= from`.
pub fn metrics_from(log: &SimLog, span: f64, from: f64) -> Metrics {
    let i = log.index_from(from);
    Metrics {
        rms_error: rms(&log.e[i..]),
        max_abs_error: max_abs(&log.e[i..]),
        control_variance: variance(&log.u[i..]),
        settling_time: settling_time(&log.t[i..], &log.e[i..], 0.02 * span),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_error() {
        let z = vec![0.0; 10];
        assert_eq!(rms(&z), 0.0);
        assert_eq!(max_abs(&z), 0.0);
        assert_eq!(settling_time(&[0.0, 1.0], &[0.0, 0.0], 0.1), Some(0.0));
    }

    #[test]
    fn sine_rms() {
        let n = 100_000;
        let e: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * 3.0 * i as f64 / n as f64).sin())
            .collect();
        assert_relative_eq!(rms(&e), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-9);
    }

    #[test]
    fn settling() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0];
        let e = [1.0, 0.5, 0.01, 0.2, 0.01];
        assert_eq!(settling_time(&t, &e, 0.1), Some(4.0));
        assert_eq!(settling_time(&t, &[1.0; 5], 0.1), None);
    }

    #[test]
    fn variances() {
        assert_relative_eq!(variance(&[1.0, 3.0]), 1.0);
        assert_eq!(increment_variance(&[0.0, 1.0, 2.0, 3.0]), 0.0);
    }
}
