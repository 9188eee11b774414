//! Recovering the rotation behind a lattice promised to be `k O Z^n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattices::{lattice_equal, rotate, LatticeBasis, RationalOrthogonal};
use crate::linalg::{combine, default_delta, enumerate_short_vectors, lll_reduce, norm_sq, RatMatrix};

/// Node cap for the orthogonal assembly backtracking.
pub const ASSEMBLY_NODE_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZlipMethod {
    Lll,
    Enumeration,
}

/// `rotate(B, o_hat)` is exactly `k Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZlipSolution {
    pub o_hat: RationalOrthogonal,
    pub method: ZlipMethod,
}

/// Finds `o_hat` with `rotate(B, o_hat) = k Z^n`.
///
/// An LLL-reduced basis of `k O Z^n` is almost always `k` times a signed
/// permutation of the rows of `O`; when it is not, the vectors of norm `k`
/// are enumerated and an orthogonal frame is assembled from them.
pub fn solve_scaled_zlip(b: &LatticeBasis, k: u64) -> Result<ZlipSolution> {
    if k == 0 {
        return Err(Error::NotARotation("k must be positive".into()));
    }
    let n = b.n();
    let kq = BigRational::from_integer(BigInt::from(k));
    let k2 = &kq * &kq;
    let target = RatMatrix::identity(n).scale(&k2);
    let r = lll_reduce(b.basis(), &default_delta())?;
    if r.gram() == target {
        return finish(b, &r, &kq, ZlipMethod::Lll);
    }
    solve_by_enumeration(b, &r, &kq)
}

/// Enumeration fallback, searching with the (ideally reduced) basis `r`
/// of the same lattice as `b`.
fn solve_by_enumeration(b: &LatticeBasis, r: &RatMatrix, kq: &BigRational) -> Result<ZlipSolution> {
    let n = b.n();
    let k2 = kq * kq;
    let mut frame = Vec::new();
    for c in enumerate_short_vectors(r, &k2)? {
        let v = combine(r, &c);
        let nn = norm_sq(&v);
        if nn < k2 {
            return Err(Error::NotARotation(format!("lattice has a vector of norm^2 {nn} below {k2}")));
        }
        frame.push(v);
    }
    let chosen = assemble(&frame, n).ok_or_else(|| {
        Error::NotARotation(format!("{} vectors of norm^2 {k2} contain no orthogonal frame of size {n}", frame.len()))
    })?;
    let rows: Vec<Vec<BigRational>> = chosen.into_iter().map(|i| frame[i].clone()).collect();
    finish(b, &RatMatrix::from_row_vecs(rows, n), kq, ZlipMethod::Enumeration)
}

fn finish(b: &LatticeBasis, r: &RatMatrix, k: &BigRational, method: ZlipMethod) -> Result<ZlipSolution> {
    let o_hat = RationalOrthogonal::new(r.scale(&k.recip()))?;
    let image = rotate(b, &o_hat)?;
    if !lattice_equal(&image, &LatticeBasis::scaled_identity(b.n(), k)) {
        return Err(Error::NotARotation("orthogonal frame does not span the lattice".into()));
    }
    Ok(ZlipSolution { o_hat, method })
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Depth-first choice of `n` pairwise orthogonal vectors, in discovery
/// order, bounded by [`ASSEMBLY_NODE_CAP`].
fn assemble(vectors: &[Vec<BigRational>], n: usize) -> Option<Vec<usize>> {
    let m = vectors.len();
    let orth: Vec<Vec<bool>> =
        (0..m).map(|i| (0..m).map(|j| i != j && dot(&vectors[i], &vectors[j]).is_zero()).collect()).collect();
    let mut chosen = Vec::with_capacity(n);
    let mut nodes = 0u64;
    fn go(orth: &[Vec<bool>], n: usize, start: usize, chosen: &mut Vec<usize>, nodes: &mut u64) -> bool {
        if chosen.len() == n {
            return true;
        }
        for i in start..orth.len() {
            if *nodes >= ASSEMBLY_NODE_CAP {
                return false;
            }
            *nodes += 1;
            if chosen.iter().all(|&j| orth[i][j]) {
                chosen.push(i);
                if go(orth, n, i + 1, chosen, nodes) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    go(&orth, n, 0, &mut chosen, &mut nodes).then_some(chosen)
}
