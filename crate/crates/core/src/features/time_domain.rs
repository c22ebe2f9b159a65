//! Per-channel time-domain statistics.

/// `(value, missing)` pair; missing values get imputed downstream.
pub type Feature = (f64, bool);

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn central_moment(x: &[f64], mu: f64, k: i32) -> f64 {
    x.iter().map(|v| (v - mu).powi(k)).sum::<f64>() / x.len() as f64
}

/// Unbiased (ddof = 1) sample standard deviation.
pub fn sample_std(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let mu = mean(x);
    (x.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

/// Moment-based skewness m3 / m2^(3/2); flagged 0 for zero variance.
pub fn skewness(x: &[f64]) -> Feature {
    let mu = mean(x);
    let m2 = central_moment(x, mu, 2);
    if m2 <= 0.0 {
        return (0.0, true);
    }
    (central_moment(x, mu, 3) / m2.powf(1.5), false)
}

/// Moment-based excess kurtosis m4 / m2^2 - 3; flagged 0 for zero variance.
pub fn excess_kurtosis(x: &[f64]) -> Feature {
    let mu = mean(x);
    let m2 = central_moment(x, mu, 2);
    if m2 <= 0.0 {
        return (0.0, true);
    }
    (central_moment(x, mu, 4) / (m2 * m2) - 3.0, false)
}

pub fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Sign-change crossings divided by (len - 1).
pub fn zero_crossing_rate(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let crossings = x.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    crossings as f64 / (x.len() - 1) as f64
}

pub fn median(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if v.len() % 2 == 1 {
        v[v.len() / 2]
    } else {
        0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2])
    }
}

/// Median absolute deviation around the median.
pub fn median_abs_dev(x: &[f64]) -> f64 {
    let med = median(x);
    let devs: Vec<f64> = x.iter().map(|v| (v - med).abs()).collect();
    median(&devs)
}

/// Linear-interpolation quantile, q in [0, 1].
pub fn quantile(x: &[f64], q: f64) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        v[lo]
    } else {
        v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
    }
}

fn variance(x: &[f64]) -> f64 {
    let mu = mean(x);
    central_moment(x, mu, 2)
}

fn diff(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Hjorth mobility sqrt(var(dx)/var(x)); flagged for zero variance.
pub fn hjorth_mobility(x: &[f64]) -> Feature {
    let v = variance(x);
    if v <= 0.0 || x.len() < 3 {
        return (0.0, true);
    }
    ((variance(&diff(x)) / v).sqrt(), false)
}

/// Hjorth complexity mobility(dx)/mobility(x); flagged when degenerate.
pub fn hjorth_complexity(x: &[f64]) -> Feature {
    if x.len() < 4 {
        return (0.0, true);
    }
    let (m_x, miss_x) = hjorth_mobility(x);
    if miss_x || m_x <= 0.0 {
        return (0.0, true);
    }
    let (m_dx, miss_dx) = hjorth_mobility(&diff(x));
    if miss_dx {
        return (0.0, true);
    }
    (m_dx / m_x, false)
}

pub fn line_length(x: &[f64]) -> f64 {
    diff(x).iter().map(|d| d.abs()).sum()
}

pub fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// The canonical 10-stat block: mean, std, skew, kurt, rms, zcr, max, min,
/// ptp, mad (registry order).
pub fn time_domain_features(x: &[f64]) -> Vec<Feature> {
    let max = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
    vec![
        (mean(x), false),
        (sample_std(x), false),
        skewness(x),
        excess_kurtosis(x),
        (rms(x), false),
        (zero_crossing_rate(x), false),
        (max, false),
        (min, false),
        (max - min, false),
        (median_abs_dev(x), false),
    ]
}

/// The extra 7-stat block: q25, q75, iqr, hjorth mobility/complexity,
/// line length, energy (registry order).
pub fn extra_shape_features(x: &[f64]) -> Vec<Feature> {
    let q25 = quantile(x, 0.25);
    let q75 = quantile(x, 0.75);
    vec![
        (q25, false),
        (q75, false),
        (q75 - q25, false),
        hjorth_mobility(x),
        hjorth_complexity(x),
        (line_length(x), false),
        (energy(x), false),
    ]
}
