use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{round_div, IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Default Lovász parameter.
pub fn default_delta() -> BigRational {
    BigRational::new(99.into(), 100.into())
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integral LLL state: `d[i]` is the Gram determinant of the first `i`
/// vectors and `lam[i][j] = d[j+1] * mu[i][j]` for `j < i`.
struct IntegralLll {
    b: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl IntegralLll {
    fn new(b: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = b.len();
        let mut d = vec![BigInt::zero(); n + 1];
        d[0] = BigInt::one();
        let mut lam = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut u = dot(&b[i], &b[j]);
                for l in 0..j {
                    u = (&d[l + 1] * &u - &lam[i][l] * &lam[j][l]) / &d[l];
                }
                if j < i {
                    lam[i][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(Error::Singular);
                    }
                    d[i + 1] = u;
                }
            }
        }
        Ok(IntegralLll { b, d, lam })
    }

    fn reduce(&mut self, k: usize, l: usize) {
        let two_lam: BigInt = &self.lam[k][l] * 2;
        if two_lam.abs() <= self.d[l + 1] {
            return;
        }
        let q = round_div(&self.lam[k][l], &self.d[l + 1]);
        let (head, tail) = self.b.split_at_mut(k);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            *x -= &q * y;
        }
        self.lam[k][l] -= &q * &self.d[l + 1];
        for i in 0..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize) {
        let n = self.b.len();
        self.b.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let bnew = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..n {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k + 1] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k];
            self.lam[i][k - 1] = (&bnew * &t + &lam * &self.lam[i][k]) / &self.d[k + 1];
        }
        self.d[k] = bnew;
    }

    fn run(&mut self, delta: &BigRational) {
        let n = self.b.len();
        let (p, q) = (delta.numer().clone(), delta.denom().clone());
        let mut k = 1;
        while k < n {
            self.reduce(k, k - 1);
            let lhs = &q * &self.d[k + 1] * &self.d[k - 1];
            let rhs = &p * &self.d[k] * &self.d[k] - &q * &self.lam[k][k - 1] * &self.lam[k][k - 1];
            if lhs < rhs {
                self.swap(k);
                k = k.saturating_sub(1).max(1);
            } else {
                for l in (0..k - 1).rev() {
                    self.reduce(k, l);
                }
                k += 1;
            }
        }
    }
}

/// LLL-reduces an integer basis (rows) with exact integral Gram-Schmidt data.
pub fn lll_reduce_int(b: &IntMatrix, delta: &BigRational) -> Result<IntMatrix> {
    check_delta(delta)?;
    if b.rows() > b.cols() {
        return Err(Error::Singular);
    }
    let mut state = IntegralLll::new(b.row_vecs())?;
    state.run(delta);
    Ok(IntMatrix::from_row_vecs(state.b, b.cols()))
}

/// LLL-reduces a rational basis of a full-rank lattice. The basis is scaled
/// to an integer one, reduced, and scaled back.
pub fn lll_reduce(b: &RatMatrix, delta: &BigRational) -> Result<RatMatrix> {
    let d = b.common_denominator();
    let reduced = lll_reduce_int(&b.scaled_to_int(&d), delta)?;
    Ok(reduced.to_rat().scale(&BigRational::new(BigInt::one(), d)))
}

fn check_delta(delta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(1.into(), 4.into());
    if *delta <= quarter || *delta >= BigRational::one() {
        return Err(Error::DimensionMismatch(format!("LLL delta {delta} outside (1/4, 1)")));
    }
    Ok(())
}

/// Exact rational Gram-Schmidt data of the rows of `b`: the coefficients
/// `mu[i][j]` (j < i) and squared norms of the orthogonalized vectors.
pub fn gram_schmidt(b: &RatMatrix) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.rows();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = b.row(i).to_vec();
        for j in 0..i {
            if norms[j] == BigRational::zero() {
                continue;
            }
            let m: BigRational =
                b.row(i).iter().zip(&star[j]).map(|(x, y)| x * y).sum::<BigRational>() / &norms[j];
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &m * y;
            }
            mu[i][j] = m;
        }
        let nn: BigRational = v.iter().map(|x| x * x).sum();
        norms.push(nn);
        star.push(v);
    }
    (mu, norms)
}

/// Checks the size-reduction and Lovász conditions.
pub fn is_lll_reduced(b: &RatMatrix, delta: &BigRational) -> bool {
    let (mu, norms) = gram_schmidt(b);
    let half = BigRational::new(1.into(), 2.into());
    for i in 0..b.rows() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let m = &mu[i][i - 1];
            if norms[i] < (delta - m * m) * &norms[i - 1] {
                return false;
            }
        }
    }
    true
}
