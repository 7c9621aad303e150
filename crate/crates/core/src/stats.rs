//! Small numeric helpers shared by the estimators and the replication engine.

/// Pairwise (cascade) summation. The result depends only on the order of
/// `values`, never on how the caller produced them.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn mean(values: &[f64]) -> f64 {
    pairwise_sum(values) / values.len() as f64
}

/// Unbiased sample variance (denominator `n − 1`), two-pass.
pub fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    pairwise_sum(&sq) / (values.len() as f64 - 1.0)
}

/// Centered sum of squares below which a column counts as constant.
pub(crate) fn is_effectively_constant(centered_ss: f64, values: &[f64]) -> bool {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = values.len() as f64 * (8.0 * f64::EPSILON * scale).powi(2);
    centered_ss <= floor
}

/// Pearson correlation; `None` when either series is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len());
    let ma = mean(a);
    let mb = mean(b);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let dx = x - ma;
        let dy = y - mb;
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if is_effectively_constant(saa, a) || is_effectively_constant(sbb, b) {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Leave-one-out sample variances of `values`, computed in O(n) from the
/// full-sample mean and centered sum of squares.
pub fn leave_one_out_variances(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let m = mean(values);
    let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    let ss = pairwise_sum(&sq);
    values
        .iter()
        .map(|v| {
            let d = v - m;
            let ss_loo = (ss - d * d * n / (n - 1.0)).max(0.0);
            ss_loo / (n - 2.0)
        })
        .collect()
}

/// Jackknife standard error from leave-one-out replicates of a statistic.
pub fn jackknife_stderr(replicates: &[f64]) -> f64 {
    let n = replicates.len() as f64;
    let m = mean(replicates);
    let sq: Vec<f64> = replicates.iter().map(|v| (v - m) * (v - m)).collect();
    ((n - 1.0) / n * pairwise_sum(&sq)).sqrt()
}

/// Jackknife standard error of `var(num) / var(den)`, where both series are
/// paired per replication.
pub fn variance_ratio_stderr(num: &[f64], den: &[f64]) -> f64 {
    assert_eq!(num.len(), den.len());
    if num.len() < 3 {
        return f64::NAN;
    }
    let a = leave_one_out_variances(num);
    let b = leave_one_out_variances(den);
    let ratios: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x / y).collect();
    jackknife_stderr(&ratios)
}
