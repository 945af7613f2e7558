use crate::error::{Error, Result};

use super::EvaluationRecord;

fn check(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("scores must be finite".into()));
    }
    Ok(())
}

/// Sample Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        let r = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Fraction of records whose prediction error exceeds the 95% CI half-width.
pub fn outlier_ratio(records: &[EvaluationRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let mut outside = 0usize;
    for r in records {
        let ci = r.ci95.ok_or(Error::MissingConfidenceIntervals)?;
        if (r.predicted - r.mos).abs() > ci {
            outside += 1;
        }
    }
    Ok(outside as f64 / records.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(predicted: f64, mos: f64, ci95: Option<f64>) -> EvaluationRecord {
        EvaluationRecord {
            excerpt_id: "e".into(),
            condition: "c".into(),
            is_anchor: false,
            predicted,
            mos,
            ci95,
        }
    }

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1., 2., 3.], &[2., 4., 6.]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&[1., 2., 3.], &[3., 2., 1.]).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&[1., 2., 3., 4.], &[1., 3., 2., 4.]).unwrap(), 0.8);
    }

    #[test]
    fn spearman_examples() {
        assert_eq!(spearman(&[1., 5., 9., 10.], &[0.1, 0.2, 7.0, 70.0]).unwrap(), 1.0);
        assert_eq!(spearman(&[1., 2., 3., 4.], &[1., 3., 2., 4.]).unwrap(), 0.8);
        assert_eq!(average_ranks(&[1., 2., 2., 3.]), vec![1.0, 2.5, 2.5, 4.0]);
        assert!((spearman(&[1., 2., 2., 3.], &[10., 20., 20., 30.]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn statistic_errors() {
        assert!(matches!(pearson(&[1., 1., 1.], &[1., 2., 3.]), Err(Error::ZeroVariance)));
        assert!(matches!(spearman(&[1., 2., 3.], &[4., 4., 4.]), Err(Error::ZeroVariance)));
        assert!(matches!(pearson(&[1., 2.], &[1., 2.]), Err(Error::TooShort { .. })));
        assert!(matches!(pearson(&[1., 2., 3.], &[1., 2.]), Err(Error::LengthMismatch(3, 2))));
    }

    #[test]
    fn outlier_examples() {
        let same = [rec(10., 10., Some(1.)), rec(20., 20., Some(0.))];
        assert_eq!(outlier_ratio(&same).unwrap(), 0.0);
        let half = [rec(50., 50., Some(5.)), rec(60., 70., Some(5.))];
        assert_eq!(outlier_ratio(&half).unwrap(), 0.5);
        let missing = [rec(50., 50., Some(5.)), rec(60., 70., None)];
        assert!(matches!(outlier_ratio(&missing), Err(Error::MissingConfidenceIntervals)));
    }

    proptest! {
        #[test]
        fn pearson_affine_invariant(
            xy in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40),
            a in 0.01f64..50.0,
            b in -100.0f64..100.0,
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
            if let Ok(r) = pearson(&x, &y) {
                let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                prop_assert!((pearson(&xs, &y).unwrap() - r).abs() < 1e-12);
            }
        }

        #[test]
        fn spearman_rank_invariant(
            xy in prop::collection::vec((-5.0f64..5.0, -100.0f64..100.0), 3..40),
            k in 0.1f64..3.0,
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
            if let Ok(r) = spearman(&x, &y) {
                let xs: Vec<f64> = x.iter().map(|v| (k * v).exp() + v.powi(3)).collect();
                prop_assert_eq!(spearman(&xs, &y).unwrap(), r);
            }
        }
    }
}
