use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::lll::gram_schmidt;
use super::matrix::RatMatrix;
use crate::error::{Error, Result};

/// All nonzero lattice vectors of squared norm at most `bound`, one per
/// `±` pair (the one whose first nonzero coefficient is positive), given as
/// coefficient vectors with respect to the rows of `b`.
///
/// Depth-first Fincke-Pohst search over the Gram-Schmidt tree with exact
/// rational radii. The output order is deterministic.
pub fn enumerate_short_vectors(b: &RatMatrix, bound: &BigRational) -> Result<Vec<Vec<BigInt>>> {
    let n = b.rows();
    if n == 0 || bound.is_negative() {
        return Ok(Vec::new());
    }
    let (mu, norms) = gram_schmidt(b);
    if norms.iter().any(|x| x.is_zero()) {
        return Err(Error::Singular);
    }
    let mut out = Vec::new();
    let mut coeffs = vec![BigInt::zero(); n];
    search(n - 1, bound.clone(), &mu, &norms, &mut coeffs, &mut out);
    Ok(out)
}

fn search(
    level: usize,
    remaining: BigRational,
    mu: &[Vec<BigRational>],
    norms: &[BigRational],
    coeffs: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    let n = coeffs.len();
    let center: BigRational = -(level + 1..n)
        .map(|j| &mu[j][level] * BigRational::from_integer(coeffs[j].clone()))
        .sum::<BigRational>();
    let start = center.numer().div_floor(center.denom());
    let cost = |x: &BigInt| {
        let diff = BigRational::from_integer(x.clone()) - &center;
        &norms[level] * &diff * &diff
    };
    let visit = |x: BigInt, c: BigRational, coeffs: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>| {
        coeffs[level] = x;
        let rem = &remaining - c;
        if level == 0 {
            if let Some(first) = coeffs.iter().find(|v| !v.is_zero()) {
                if first.is_positive() {
                    out.push(coeffs.clone());
                }
            }
        } else {
            search(level - 1, rem, mu, norms, coeffs, out);
        }
    };
    // Walk downward from floor(center), then upward from floor(center)+1;
    // the cost is convex in x so each walk stops at the first overshoot.
    let mut x = start.clone();
    loop {
        let c = cost(&x);
        if c > remaining {
            break;
        }
        visit(x.clone(), c, coeffs, out);
        x -= 1;
    }
    let mut x = start + 1;
    loop {
        let c = cost(&x);
        if c > remaining {
            break;
        }
        visit(x.clone(), c, coeffs, out);
        x += 1;
    }
    coeffs[level] = BigInt::zero();
}

/// Lattice vector `coeffs * b`.
pub fn combine(b: &RatMatrix, coeffs: &[BigInt]) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); b.cols()];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = BigRational::from_integer(c.clone());
        for (x, y) in v.iter_mut().zip(b.row(i)) {
            *x += &c * y;
        }
    }
    v
}

pub fn norm_sq(v: &[BigRational]) -> BigRational {
    v.iter().map(|x| x * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn coeffs(v: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> =
            v.iter().map(|c| c.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        out.sort();
        out
    }

    #[test]
    fn identity_examples() {
        let id = RatMatrix::identity(2);
        assert_eq!(coeffs(&enumerate_short_vectors(&id, &q(1)).unwrap()), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(
            coeffs(&enumerate_short_vectors(&id, &q(2)).unwrap()),
            vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]
        );
        assert!(enumerate_short_vectors(&id, &q(0)).unwrap().is_empty());
    }

    #[test]
    fn scaled_rotation_has_two_minimal_pairs() {
        let g = RatMatrix::from_frac_rows(&[vec![(3, 5), (4, 5)], vec![(-4, 5), (3, 5)]]).scale(&q(5));
        let found = enumerate_short_vectors(&g, &q(25)).unwrap();
        assert_eq!(found.len(), 2);
        for c in &found {
            assert_eq!(norm_sq(&combine(&g, c)), q(25));
        }
    }

    #[test]
    fn singular_input_is_rejected() {
        let b = RatMatrix::from_i64_rows(&[vec![1, 1], vec![2, 2]]);
        assert_eq!(enumerate_short_vectors(&b, &q(4)), Err(Error::Singular));
    }
}
