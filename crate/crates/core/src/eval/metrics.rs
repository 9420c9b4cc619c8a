use serde::{Deserialize, Serialize};

use super::{ConfusionCounts, EvalError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when any ratio had a zero denominator and was taken as 0.
    pub degenerate: bool,
}

fn ratio(num: f64, den: f64, degenerate: &mut bool) -> f64 {
    if den == 0.0 {
        *degenerate = true;
        0.0
    } else {
        num / den
    }
}

pub fn precision_recall_f1(c: ConfusionCounts) -> Prf {
    let mut degenerate = false;
    let tp = c.tp as f64;
    let precision = ratio(tp, tp + c.fp as f64, &mut degenerate);
    let recall = ratio(tp, tp + c.fn_ as f64, &mut degenerate);
    let f1 = ratio(2.0 * precision * recall, precision + recall, &mut degenerate);
    Prf { precision, recall, f1, degenerate }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub mslne: f64,
    pub mdae: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// MAE, MSE, RMSE, mean squared log error over `ln(1 + y)`, and median absolute error.
pub fn error_metrics(truth: &[f64], predicted: &[f64]) -> Result<ErrorMetrics, EvalError> {
    if truth.len() != predicted.len() {
        return Err(EvalError::LengthMismatch(truth.len(), predicted.len()));
    }
    if truth.is_empty() {
        return Err(EvalError::TooShort { needed: 1, got: 0 });
    }
    if let Some(&bad) = truth.iter().chain(predicted).find(|x| !x.is_finite() || **x <= -1.0) {
        return Err(EvalError::InvalidValue(bad));
    }
    let n = truth.len() as f64;
    let abs: Vec<f64> = truth.iter().zip(predicted).map(|(y, p)| (y - p).abs()).collect();
    let mae = abs.iter().sum::<f64>() / n;
    let mse = abs.iter().map(|e| e * e).sum::<f64>() / n;
    let mslne = truth
        .iter()
        .zip(predicted)
        .map(|(y, p)| (y.ln_1p() - p.ln_1p()).powi(2))
        .sum::<f64>()
        / n;
    Ok(ErrorMetrics { mae, mse, rmse: mse.sqrt(), mslne, mdae: median(abs) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prf_values() {
        let p = precision_recall_f1(ConfusionCounts::new(2, 1, 1));
        assert!((p.precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((p.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((p.f1 - 2.0 / 3.0).abs() < 1e-12);
        assert!(!p.degenerate);
        assert_eq!(
            precision_recall_f1(ConfusionCounts::new(0, 0, 0)),
            Prf { precision: 0.0, recall: 0.0, f1: 0.0, degenerate: true }
        );
        let p = precision_recall_f1(ConfusionCounts::new(212, 61, 4));
        assert!((p.precision - 0.7766).abs() < 5e-5);
        assert!((p.recall - 0.9815).abs() < 5e-5);
        assert!((p.f1 - 0.8671).abs() < 5e-5);
    }

    #[test]
    fn error_values() {
        let m = error_metrics(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert_eq!((m.mae, m.mse, m.rmse, m.mdae), (0.5, 0.25, 0.5, 0.5));
        let z = error_metrics(&[0.3, 0.7, 0.1], &[0.3, 0.7, 0.1]).unwrap();
        assert_eq!(z, ErrorMetrics { mae: 0.0, mse: 0.0, rmse: 0.0, mslne: 0.0, mdae: 0.0 });
        let l = error_metrics(&[std::f64::consts::E - 1.0], &[0.0]).unwrap();
        assert!((l.mslne - 1.0).abs() < 1e-12);
        assert!((error_metrics(&[0.1, 0.2, 0.9], &[0.1, 0.3, 0.1]).unwrap().mdae - 0.1).abs() < 1e-12);
    }

    #[test]
    fn error_inputs() {
        assert_eq!(error_metrics(&[1.0], &[1.0, 2.0]), Err(EvalError::LengthMismatch(1, 2)));
        assert_eq!(error_metrics(&[], &[]), Err(EvalError::TooShort { needed: 1, got: 0 }));
        assert_eq!(error_metrics(&[-1.0], &[0.0]), Err(EvalError::InvalidValue(-1.0)));
        assert!(error_metrics(&[f64::NAN], &[0.0]).is_err());
    }
}
