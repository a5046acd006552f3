use super::CodecError;

/// Quantizer settings; `qstep = round(2^(qp/6))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantParams {
    qp: u8,
    qstep: i64,
}

impl QuantParams {
    pub fn new(qp: u8) -> Result<Self, CodecError> {
        if qp > 51 {
            return Err(CodecError::InvalidQp(qp));
        }
        let qstep = (2f64.powf(qp as f64 / 6.0)).round() as i64;
        Ok(Self { qp, qstep })
    }

    pub fn qp(&self) -> u8 {
        self.qp
    }

    pub fn qstep(&self) -> i64 {
        self.qstep
    }
}

/// Dead-zone quantizer: `sign(c) * floor(|c| / qstep)`.
pub fn quantize(coeff: i64, q: QuantParams) -> i64 {
    coeff.signum() * (coeff.abs() / q.qstep)
}

/// Bin-center reconstruction. Saturates instead of overflowing on scrambled levels.
pub fn dequantize(level: i64, q: QuantParams) -> i64 {
    if level == 0 {
        return 0;
    }
    let mag = level
        .unsigned_abs()
        .saturating_mul(q.qstep as u64)
        .saturating_add(q.qstep as u64 / 2)
        .min(i64::MAX as u64) as i64;
    level.signum() * mag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn qstep_table_points() {
        assert_eq!(QuantParams::new(32).unwrap().qstep(), 40);
        assert_eq!(QuantParams::new(24).unwrap().qstep(), 16);
        assert_eq!(QuantParams::new(0).unwrap().qstep(), 1);
        assert!(QuantParams::new(52).is_err());
        for qp in 0..=51 {
            assert!(QuantParams::new(qp).unwrap().qstep() >= 1);
        }
    }

    #[test]
    fn formula_examples() {
        let q = QuantParams::new(32).unwrap();
        assert_eq!(quantize(100, q), 2);
        assert_eq!(dequantize(2, q), 100);
        assert_eq!(quantize(-30, q), 0);
        assert_eq!(dequantize(0, q), 0);
        assert_eq!(quantize(-100, q), -2);
        assert_eq!(dequantize(-2, q), -100);
    }

    #[test]
    fn saturates() {
        let q = QuantParams::new(51).unwrap();
        assert_eq!(dequantize(i64::MAX, q), i64::MAX);
        assert_eq!(dequantize(i64::MIN + 1, q), -i64::MAX);
    }

    proptest! {
        #[test]
        fn error_within_one_step(c in -20_000i64..20_000, qp in 0u8..=51) {
            let q = QuantParams::new(qp).unwrap();
            prop_assert!((dequantize(quantize(c, q), q) - c).abs() <= q.qstep());
        }
    }
}
