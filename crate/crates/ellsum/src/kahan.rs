//! Compensated (Kahan-Babuska) summation for series loops.

/// Running compensated sum. Neumaier's variant: also captures the case where
/// the addend is larger in magnitude than the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_low_bits() {
        let mut s = KahanSum::new();
        s.add(1.0);
        s.add(1e-16);
        s.add(-1.0);
        assert_eq!(s.value(), 1e-16);
    }

    #[test]
    fn matches_naive_on_benign_input() {
        let mut s = KahanSum::new();
        for i in 1..=1000 {
            s.add(1.0 / i as f64);
        }
        let naive: f64 = (1..=1000).map(|i| 1.0 / i as f64).sum();
        assert!((s.value() - naive).abs() < 1e-12);
    }
}
