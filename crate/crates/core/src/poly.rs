//! Small dense bivariate polynomials, enough for exact derivative checks.

use rand::Rng;

const N: usize = 6;

/// Σ c[i][j] xⁱ yʲ with i, j < 6.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Poly2 {
    pub c: [[f64; N]; N],
}

impl Poly2 {
    pub fn constant(v: f64) -> Self {
        let mut p = Self::default();
        p.c[0][0] = v;
        p
    }

    /// Random polynomial of total degree ≤ `degree` with coefficients in (−1, 1).
    pub fn random<R: Rng>(rng: &mut R, degree: usize) -> Self {
        let mut p = Self::default();
        for i in 0..=degree.min(N - 1) {
            for j in 0..=(degree - i).min(N - 1) {
                p.c[i][j] = rng.gen_range(-1.0..1.0);
            }
        }
        p
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for i in (0..N).rev() {
            let mut row = 0.0;
            for j in (0..N).rev() {
                row = row * y + self.c[i][j];
            }
            acc = acc * x + row;
        }
        acc
    }

    pub fn dx(&self) -> Self {
        let mut p = Self::default();
        for i in 1..N {
            for j in 0..N {
                p.c[i - 1][j] = i as f64 * self.c[i][j];
            }
        }
        p
    }

    pub fn dy(&self) -> Self {
        let mut p = Self::default();
        for i in 0..N {
            for j in 1..N {
                p.c[i][j - 1] = j as f64 * self.c[i][j];
            }
        }
        p
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut p = *self;
        p.c.iter_mut().flatten().for_each(|v| *v *= s);
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = *self;
        p.c.iter_mut().flatten().zip(other.c.iter().flatten()).for_each(|(a, b)| *a += b);
        p
    }

    pub fn max_coeff(&self) -> f64 {
        self.c.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives() {
        // p = 1 + 2x + 3xy² + x³
        let mut p = Poly2::default();
        p.c[0][0] = 1.0;
        p.c[1][0] = 2.0;
        p.c[1][2] = 3.0;
        p.c[3][0] = 1.0;
        assert_eq!(p.eval(2.0, -1.0), 1.0 + 4.0 + 6.0 + 8.0);
        assert_eq!(p.dx().eval(2.0, -1.0), 2.0 + 3.0 + 12.0);
        assert_eq!(p.dy().eval(2.0, -1.0), -12.0);
        assert_eq!(p.dx().dy().eval(0.5, 2.0), 12.0);
    }
}
