//! Rank-based tests: Mann-Whitney U, Kruskal-Wallis H and Spearman's rho.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("sample `{0}` is empty")]
    EmptySample(String),
    #[error("at least two groups are required, got {0}")]
    InsufficientGroups(usize),
    #[error("samples must have equal length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("unknown alternative `{0}` (expected two-sided, less or greater)")]
    UnknownAlternative(String),
}

/// Alternative hypothesis, stated for the first sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    #[default]
    TwoSided,
    /// The first sample tends to be smaller.
    Less,
    /// The first sample tends to be larger.
    Greater,
}

impl FromStr for Alternative {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two-sided" => Ok(Alternative::TwoSided),
            "less" => Ok(Alternative::Less),
            "greater" => Ok(Alternative::Greater),
            _ => Err(StatsError::UnknownAlternative(s.into())),
        }
    }
}

/// Outcome of a test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatResult {
    pub test_name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub group_labels: Vec<String>,
    pub n_per_group: Vec<usize>,
    /// `exact` or `normal` for Mann-Whitney, `chi-squared` for Kruskal-Wallis.
    pub method: String,
    pub alternative: Alternative,
    /// Fraction of attempted trials that succeeded, per group, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<Vec<f64>>,
}

/// Largest combined sample size handled by the exact null distribution.
pub const EXACT_MAX_N: usize = 16;

/// Midranks (1-based) of `values`, and the tie-group sizes.
pub fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

fn check(label: &str, sample: &[f64]) -> Result<(), StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample(label.into()));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    Ok(())
}

/// Number of rank arrangements giving each value of `U` for samples of sizes
/// `n1` and `n2` without ties: `counts[u]` for `u = 0..=n1·n2`.
pub fn mann_whitney_null_counts(n1: usize, n2: usize) -> Vec<u64> {
    // f[i][j][u]: arrangements of i first-sample and j second-sample items
    // with statistic u. The largest item either belongs to the first sample
    // (beating all j others) or to the second.
    let max_u = n1 * n2;
    let mut prev: Vec<Vec<u64>> = vec![vec![0; max_u + 1]; n2 + 1];
    for row in prev.iter_mut() {
        row[0] = 1;
    }
    for _i in 1..=n1 {
        let mut cur: Vec<Vec<u64>> = vec![vec![0; max_u + 1]; n2 + 1];
        cur[0][0] = 1;
        for j in 1..=n2 {
            for u in 0..=max_u {
                let from_first = if u >= j { prev[j][u - j] } else { 0 };
                cur[j][u] = from_first + cur[j - 1][u];
            }
        }
        prev = cur;
    }
    prev.swap_remove(n2)
}

/// Two-sample Mann-Whitney U test of `a` against `b`.
///
/// The statistic is `U` of the first sample (pairs with `a > b`, ties
/// counting one half). With `n1 + n2 ≤ 16` and no ties the p-value comes from
/// the exact null distribution; otherwise from the normal approximation with
/// tie-corrected variance and a continuity correction. The two-sided p is
/// `min(1, 2·min(P(U ≤ u), P(U ≥ u)))`.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alternative: Alternative) -> Result<StatResult, StatsError> {
    mann_whitney_u_labeled(a, b, alternative, ["a", "b"])
}

pub fn mann_whitney_u_labeled(
    a: &[f64],
    b: &[f64],
    alternative: Alternative,
    labels: [&str; 2],
) -> Result<StatResult, StatsError> {
    check(labels[0], a)?;
    check(labels[1], b)?;
    let (n1, n2) = (a.len(), b.len());
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&all);
    let r1: f64 = ranks[..n1].iter().sum();
    let u = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let n = n1 + n2;

    let (p_value, method) = if n <= EXACT_MAX_N && ties.is_empty() {
        let counts = mann_whitney_null_counts(n1, n2);
        let total: u64 = counts.iter().sum();
        let u_int = u.round() as usize;
        let below: u64 = counts[..=u_int].iter().sum();
        let above: u64 = counts[u_int..].iter().sum();
        let (cdf, sf) = (below as f64 / total as f64, above as f64 / total as f64);
        let p = match alternative {
            Alternative::TwoSided => (2.0 * cdf.min(sf)).min(1.0),
            Alternative::Less => cdf,
            Alternative::Greater => sf,
        };
        (p, "exact")
    } else {
        let mu = (n1 * n2) as f64 / 2.0;
        let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * (n - 1)) as f64;
        let var = (n1 * n2) as f64 / 12.0 * ((n + 1) as f64 - tie_term);
        let p = if var <= 0.0 {
            1.0
        } else {
            let sd = var.sqrt();
            let normal = Normal::standard();
            match alternative {
                Alternative::TwoSided => {
                    let z = ((u - mu).abs() - 0.5).max(0.0) / sd;
                    (2.0 * normal.sf(z)).min(1.0)
                }
                Alternative::Less => normal.cdf((u - mu + 0.5) / sd),
                Alternative::Greater => normal.sf((u - mu - 0.5) / sd),
            }
        };
        (p, "normal")
    };
    Ok(StatResult {
        test_name: "mann-whitney".into(),
        statistic: u,
        p_value: p_value.clamp(0.0, 1.0),
        group_labels: labels.iter().map(|s| s.to_string()).collect(),
        n_per_group: vec![n1, n2],
        method: method.into(),
        alternative,
        success_rate: None,
    })
}

/// H statistic with tie correction; 0 when every observation is tied.
pub fn kruskal_wallis_h(groups: &[&[f64]]) -> f64 {
    let all: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = all.len() as f64;
    let (ranks, ties) = midranks(&all);
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
    let correction = 1.0 - ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * n * n - n);
    if correction <= 0.0 {
        0.0
    } else {
        (h / correction).max(0.0)
    }
}

/// Kruskal-Wallis test; p from the chi-squared distribution with `k − 1`
/// degrees of freedom.
pub fn kruskal_wallis(groups: &[&[f64]], labels: &[&str]) -> Result<StatResult, StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::InsufficientGroups(groups.len()));
    }
    for (i, g) in groups.iter().enumerate() {
        check(labels.get(i).copied().unwrap_or("group"), g)?;
    }
    let h = kruskal_wallis_h(groups);
    let chi = ChiSquared::new((groups.len() - 1) as f64).expect("k - 1 >= 1 degrees of freedom");
    Ok(StatResult {
        test_name: "kruskal-wallis".into(),
        statistic: h,
        p_value: chi.sf(h).clamp(0.0, 1.0),
        group_labels: (0..groups.len()).map(|i| labels.get(i).map_or_else(|| format!("g{i}"), |s| s.to_string())).collect(),
        n_per_group: groups.iter().map(|g| g.len()).collect(),
        method: "chi-squared".into(),
        alternative: Alternative::TwoSided,
        success_rate: None,
    })
}

/// Spearman's rank correlation (Pearson correlation of midranks); 0 when
/// either variable is constant.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    check("x", x)?;
    check("y", y)?;
    let (rx, _) = midranks(x);
    let (ry, _) = midranks(y);
    let m = (x.len() + 1) as f64 / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - m) * (b - m);
        sxx += (a - m) * (a - m);
        syy += (b - m) * (b - m);
    }
    Ok(if sxx == 0.0 || syy == 0.0 { 0.0 } else { sxy / (sxx * syy).sqrt() })
}
