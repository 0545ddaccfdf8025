//! Bernoulli numbers and polynomials, convention `B_1 = -1/2`.

use super::poly::Poly;
use super::scalar::ExactScalar;

/// Bernoulli numbers `B_0, ..., B_n` by the Akiyama–Tanigawa transform.
pub fn bernoulli_numbers<T: ExactScalar>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    let mut row: Vec<T> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(T::one() / T::from_int(m as i64 + 1));
        for j in (1..=m).rev() {
            let diff = row[j - 1].clone() - row[j].clone();
            row[j - 1] = T::from_int(j as i64) * diff;
        }
        // The transform produces B_1 = +1/2.
        if m == 1 {
            out.push(-row[0].clone());
        } else {
            out.push(row[0].clone());
        }
    }
    out
}

/// Coefficients of `B_k(x)` in ascending degree.
pub fn bernoulli_poly<T: ExactScalar>(k: usize) -> Vec<T> {
    BernoulliTable::new(k).poly(k).coeffs().to_vec()
}

/// Precomputed Bernoulli numbers and polynomials up to a fixed index.
#[derive(Clone, Debug)]
pub struct BernoulliTable<T> {
    numbers: Vec<T>,
    polys: Vec<Poly<T>>,
}

impl<T: ExactScalar> BernoulliTable<T> {
    pub fn new(max_k: usize) -> Self {
        let numbers = bernoulli_numbers::<T>(max_k);
        let polys = (0..=max_k)
            .map(|k| {
                // B_k(x) = sum_j C(k, j) B_j x^{k-j}
                let mut coeffs = vec![T::zero(); k + 1];
                let mut binom = T::one();
                for j in 0..=k {
                    coeffs[k - j] = binom.clone() * numbers[j].clone();
                    binom = binom * T::from_int((k - j) as i64) / T::from_int(j as i64 + 1);
                }
                Poly::new(coeffs)
            })
            .collect();
        BernoulliTable { numbers, polys }
    }

    pub fn max_k(&self) -> usize {
        self.numbers.len() - 1
    }

    pub fn number(&self, k: usize) -> &T {
        &self.numbers[k]
    }

    pub fn poly(&self, k: usize) -> &Poly<T> {
        &self.polys[k]
    }

    pub fn eval(&self, k: usize, x: &T) -> T {
        self.polys[k].eval(x)
    }
}
