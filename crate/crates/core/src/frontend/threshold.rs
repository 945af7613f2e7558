use crate::error::{Error, Result};

/// Absolute threshold of hearing in dB SPL (Terhardt's approximation).
pub fn threshold_in_quiet(f: f64) -> Result<f64> {
    if !(20.0..=20000.0).contains(&f) {
        return Err(Error::FrequencyOutOfRange(f));
    }
    let k = f / 1000.0;
    Ok(3.64 * k.powf(-0.8) - 6.5 * (-0.6 * (k - 3.3).powi(2)).exp() + 1e-3 * k.powi(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let t1k = 3.64 - 6.5 * (-0.6f64 * 5.29).exp() + 0.001;
        assert!((threshold_in_quiet(1000.0).unwrap() - t1k).abs() < 1e-12);
        assert!((t1k - 3.37).abs() < 0.005);
        assert!((threshold_in_quiet(100.0).unwrap() - 22.9).abs() < 0.1);
    }

    #[test]
    fn dip_near_3k3() {
        let at = threshold_in_quiet(3300.0).unwrap();
        for f in [2500.0, 3000.0, 3600.0, 4000.0] {
            assert!(threshold_in_quiet(f).unwrap() > at);
        }
    }

    #[test]
    fn out_of_range() {
        assert!(threshold_in_quiet(10.0).is_err());
        assert!(threshold_in_quiet(20001.0).is_err());
    }
}
