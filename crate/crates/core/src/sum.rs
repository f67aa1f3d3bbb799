//! Error-free compensated summation.
//!
//! [`ExactSum`] keeps the running sum as a list of non-overlapping partials
//! (Shewchuk's expansion arithmetic, the algorithm behind Python's
//! `math.fsum`). The represented value is the exact real sum of every term
//! added so far; [`ExactSum::value`] rounds it once, correctly. Because the
//! state is exact, results do not depend on how terms were grouped, which is
//! what makes shell-parallel evaluation reproducible.

use num_complex::Complex64;

#[derive(Debug, Clone, Default)]
pub struct ExactSum {
    partials: Vec<f64>,
    // Infinities and NaNs bypass the expansion.
    special: f64,
    count: usize,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, mut x: f64) {
        self.count += 1;
        if !x.is_finite() {
            self.special += x;
            return;
        }
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            if !hi.is_finite() {
                // Intermediate overflow; fall back to the IEEE result.
                self.special += hi;
                self.partials.truncate(i);
                return;
            }
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    /// Adds the exact value held by another accumulator.
    pub fn add_sum(&mut self, other: &ExactSum) {
        for &p in &other.partials {
            self.add(p);
        }
        self.count = self.count - other.partials.len() + other.count;
        self.special += other.special;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn partials(&self) -> &[f64] {
        &self.partials
    }

    /// Correctly rounded value of the exact sum.
    pub fn value(&self) -> f64 {
        if self.special != 0.0 || self.special.is_nan() {
            return self.special;
        }
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // Round-half-even correction when the tail sits exactly on a tie.
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            let yr = x - hi;
            if y == yr {
                hi = x;
            }
        }
        hi
    }

    /// True when `self` equals `a + b` exactly as real numbers.
    pub fn is_exact_sum_of(&self, a: &ExactSum, b: &ExactSum) -> bool {
        if self.special != 0.0 || a.special != 0.0 || b.special != 0.0 {
            return false;
        }
        let mut diff = a.clone();
        diff.add_sum(b);
        for &p in &self.partials {
            diff.add(-p);
        }
        diff.value() == 0.0
    }
}

impl FromIterator<f64> for ExactSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = ExactSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Exact summation of a slice, rounded once.
pub fn exact_sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<ExactSum>().value()
}

/// Componentwise exact summation of complex terms.
#[derive(Debug, Clone, Default)]
pub struct ComplexSum {
    re: ExactSum,
    im: ExactSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancels_catastrophic_terms() {
        let v = [1e100, 1.0, -1e100, 1e-30];
        assert_eq!(exact_sum(&v), 1.0 + 1e-30);
        let w = [0.1; 10];
        assert_eq!(exact_sum(&w), 1.0);
    }

    #[test]
    fn grouping_does_not_matter() {
        let terms: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1000) as f64 * 1e-3 - 0.37).collect();
        let whole = exact_sum(&terms);
        let mut a = ExactSum::new();
        let mut b = ExactSum::new();
        for (i, &t) in terms.iter().enumerate() {
            if i % 3 == 0 {
                a.add(t)
            } else {
                b.add(t)
            }
        }
        let all: ExactSum = terms.iter().copied().collect();
        assert!(all.is_exact_sum_of(&a, &b));
        let mut merged = b.clone();
        merged.add_sum(&a);
        assert_eq!(merged.value(), whole);
        assert_eq!(merged.count(), terms.len());
    }

    #[test]
    fn non_finite_terms_propagate() {
        let mut s = ExactSum::new();
        s.add(1.0);
        s.add(f64::INFINITY);
        assert_eq!(s.value(), f64::INFINITY);
        s.add(f64::NEG_INFINITY);
        assert!(s.value().is_nan());
    }
}
