use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

/// A permutation of `0..n`, stored as the image of each point.
///
/// Acting on a row vector, coordinate `i` moves to position `self[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// `self` after `other`: `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&j| self.0[j]).collect())
    }

    /// `y[self(i)] = x[i]`.
    pub fn apply<T: Clone>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.0.len());
        let mut y = x.to_vec();
        for (i, v) in x.iter().enumerate() {
            y[self.0[i]] = v.clone();
        }
        y
    }

    /// All permutations of `0..n` in lexicographic order of image vectors.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some((0..n).collect::<Vec<_>>());
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let mut p = cur.clone();
            if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
                let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
                p.swap(i - 1, j);
                p[i..].reverse();
                next = Some(p);
            }
            Some(Permutation(cur))
        })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::from_images(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// A signed permutation `(sigma, signs)`: coordinate `i` is multiplied by
/// `signs[i]` and moved to position `sigma(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPerm {
    pub sigma: Permutation,
    pub signs: Vec<i8>,
}

impl SignedPerm {
    pub fn new(sigma: Permutation, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != sigma.len() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parse("signs must be a +1/-1 vector matching sigma".into()));
        }
        Ok(SignedPerm { sigma, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm { sigma: Permutation::identity(n), signs: vec![1; n] }
    }

    pub fn from_permutation(p: Permutation) -> Self {
        let n = p.len();
        SignedPerm { sigma: p, signs: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &SignedPerm) -> Self {
        let n = self.len();
        let mut signs = vec![1i8; n];
        for (i, s) in signs.iter_mut().enumerate() {
            *s = other.signs[i] * self.signs[other.sigma.image(i)];
        }
        SignedPerm { sigma: self.sigma.compose(&other.sigma), signs }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.sigma.inverse();
        let signs = (0..self.len()).map(|j| self.signs[inv.image(j)]).collect();
        SignedPerm { sigma: inv, signs }
    }

    /// The matrix `M` with `x * M = self(x)` for row vectors.
    pub fn row_matrix(&self) -> RatMatrix {
        let n = self.len();
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, self.sigma.image(i))] = BigRational::from_integer(BigInt::from(self.signs[i]));
        }
        m
    }

    /// All `2^n * n!` signed permutations: permutations in lexicographic
    /// order, and for each, sign vectors in binary order with `+1` first.
    pub fn all(n: usize) -> impl Iterator<Item = SignedPerm> {
        Permutation::all(n).flat_map(move |p| {
            (0u64..1 << n).map(move |mask| SignedPerm {
                sigma: p.clone(),
                signs: (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 }).collect(),
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_enumeration() {
        let all: Vec<Vec<usize>> = Permutation::all(3).map(|p| p.0).collect();
        assert_eq!(all, vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]);
        assert_eq!(SignedPerm::all(3).count(), 48);
        assert_eq!(SignedPerm::all(2).next().unwrap(), SignedPerm::identity(2));
    }

    #[test]
    fn composition_matches_action() {
        let s = SignedPerm::new(Permutation::from_images(vec![2, 0, 1]).unwrap(), vec![1, -1, -1]).unwrap();
        let t = SignedPerm::new(Permutation::from_images(vec![1, 2, 0]).unwrap(), vec![-1, 1, -1]).unwrap();
        let x = RatMatrix::from_i64_rows(&[vec![3, 5, 7]]);
        let via_compose = x.mul(&s.compose(&t).row_matrix());
        let sequential = x.mul(&t.row_matrix()).mul(&s.row_matrix());
        assert_eq!(via_compose, sequential);
        assert_eq!(s.compose(&s.inverse()), SignedPerm::identity(3));
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(serde_json::from_str::<Permutation>("[1,2]").is_err());
        assert!(SignedPerm::new(Permutation::identity(2), vec![1, 0]).is_err());
    }
}
