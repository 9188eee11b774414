use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{floor_div, IntMatrix, RatMatrix};
use crate::error::{Error, Result};

/// Extended gcd returning `(g, s, t)` with `s*a + t*b = g` and `g >= 0`.
pub(crate) fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Row-style Hermite normal form of the integer row span of `b`.
///
/// Zero rows are dropped, pivots are positive, and entries above each
/// pivot are reduced into `[0, pivot)`.
pub fn hnf(b: &IntMatrix) -> IntMatrix {
    let cols = b.cols();
    let mut rows = b.row_vecs();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            if rows[r][c].is_zero() {
                rows.swap(r, i);
                continue;
            }
            let a = rows[r][c].clone();
            let bb = rows[i][c].clone();
            let (g, s, t) = egcd(&a, &bb);
            let u = -(&bb / &g);
            let v = &a / &g;
            let (top, bot) = {
                let (head, tail) = rows.split_at_mut(i);
                (&mut head[r], &mut tail[0])
            };
            for j in c..cols {
                let x = top[j].clone();
                let y = bot[j].clone();
                top[j] = &s * &x + &t * &y;
                bot[j] = &u * &x + &v * &y;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = rows[r][c].clone();
        for i in 0..r {
            let q = floor_div(&rows[i][c], &pivot);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(r);
            for j in c..cols {
                let d = &q * &tail[0][j];
                head[i][j] -= d;
            }
        }
        r += 1;
    }
    rows.truncate(r);
    IntMatrix::from_row_vecs(rows, cols)
}

/// Hermite normal form of a full-rank lattice containing `d Z^n`, with all
/// intermediate entries kept below the running modulus.
pub fn hnf_mod(b: &IntMatrix, d: &BigInt) -> IntMatrix {
    let n = b.cols();
    let mut r = d.abs();
    assert!(!r.is_zero(), "modulus must be nonzero");
    let reduce = |row: &mut Vec<BigInt>, r: &BigInt| row.iter_mut().for_each(|x| *x = x.mod_floor(r));
    let mut rows = b.row_vecs();
    rows.iter_mut().for_each(|row| reduce(row, &r));
    while rows.len() < n {
        rows.push(vec![BigInt::zero(); n]);
    }
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for c in 0..n {
        for i in c + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            if rows[c][c].is_zero() {
                rows.swap(c, i);
                continue;
            }
            let (g, s, t) = egcd(&rows[c][c], &rows[i][c]);
            let u = -(&rows[i][c] / &g);
            let v = &rows[c][c] / &g;
            let (head, tail) = rows.split_at_mut(i);
            let (top, bot) = (&mut head[c], &mut tail[0]);
            for j in c..n {
                let x = top[j].clone();
                let y = bot[j].clone();
                top[j] = (&s * &x + &t * &y).mod_floor(&r);
                bot[j] = (&u * &x + &v * &y).mod_floor(&r);
            }
        }
        let (g, s, _) = egcd(&rows[c][c], &r);
        let mut w: Vec<BigInt> = rows[c].iter().map(|x| (&s * x).mod_floor(&r)).collect();
        w[c] = g.clone();
        r = &r / &g;
        for row in rows.iter_mut().skip(c + 1) {
            reduce(row, &r);
        }
        out.push(w);
    }
    for j in 0..n {
        let (head, tail) = out.split_at_mut(j);
        let pivot = &tail[0];
        for row in head.iter_mut() {
            let q = floor_div(&row[j], &pivot[j]);
            if q.is_zero() {
                continue;
            }
            for l in j..n {
                row[l] -= &q * &pivot[l];
            }
        }
    }
    IntMatrix::from_row_vecs(out, n)
}

/// `|det|` of the leading square block when it is nonsingular; the
/// lattice spanned by `m` then contains that multiple of `Z^n`.
fn leading_det(m: &IntMatrix) -> Option<BigInt> {
    let n = m.cols();
    if n == 0 || m.rows() < n {
        return None;
    }
    let top = IntMatrix::from_row_vecs(m.row_vecs().into_iter().take(n).collect(), n);
    let d = det_int(&top).ok()?.abs();
    (!d.is_zero()).then_some(d)
}

/// True when `v` lies in the integer row span of the HNF matrix `h`.
pub fn hnf_contains(h: &IntMatrix, v: &[BigInt]) -> bool {
    assert_eq!(h.cols(), v.len());
    let mut v = v.to_vec();
    let mut c = 0;
    for i in 0..h.rows() {
        let row = h.row(i);
        while c < row.len() && row[c].is_zero() {
            if !v[c].is_zero() {
                return false;
            }
            c += 1;
        }
        if c == row.len() {
            break;
        }
        if !(&v[c] % &row[c]).is_zero() {
            return false;
        }
        let q = &v[c] / &row[c];
        for j in c..v.len() {
            v[j] -= &q * &row[j];
        }
        c += 1;
    }
    v.iter().all(Zero::is_zero)
}

/// Determinant of an integer matrix by Bareiss fraction-free elimination.
pub fn det_int(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.row_vecs();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Exact determinant of a rational matrix.
pub fn det(m: &RatMatrix) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let d = m.common_denominator();
    let scaled = det_int(&m.scaled_to_int(&d))?;
    Ok(BigRational::new(scaled, num_traits::pow(d, m.rows())))
}

/// Basis of the dual lattice: the matrix `D` with `D * B^T = I`.
pub fn dual_basis(b: &RatMatrix) -> Result<RatMatrix> {
    if !b.is_square() {
        return Err(Error::NonSquare { rows: b.rows(), cols: b.cols() });
    }
    b.transpose().inverse()
}

/// Canonical basis of the lattice spanned by the rows of `b`:
/// `hnf(d * b) / d` for any `d` clearing the denominators. Independent of
/// the choice of `d`, so equal lattices give equal matrices.
pub fn canonical_basis(b: &RatMatrix) -> RatMatrix {
    let d = b.common_denominator();
    let m = b.scaled_to_int(&d);
    let h = match leading_det(&m) {
        Some(det) => hnf_mod(&m, &det),
        None => hnf(&m),
    };
    h.to_rat().scale(&BigRational::new(BigInt::one(), d))
}

/// Basis of `L1 ∩ L2`, computed as the dual of `L1* + L2*`.
pub fn lattice_intersect(b1: &RatMatrix, b2: &RatMatrix) -> Result<RatMatrix> {
    if b1.cols() != b2.cols() {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            b1.cols(),
            b2.cols()
        )));
    }
    let d1 = dual_basis(b1)?;
    let d2 = dual_basis(b2)?;
    let sum = canonical_basis(&d1.vstack(&d2));
    if sum.rows() != b1.cols() {
        return Err(Error::Singular);
    }
    Ok(canonical_basis(&dual_basis(&sum)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn rm(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(&im(&[vec![2, 0], vec![0, 2]])), im(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(hnf(&im(&[vec![1, 1], vec![0, 2], vec![2, 0]])), im(&[vec![1, 1], vec![0, 2]]));
        assert_eq!(hnf(&im(&[vec![0, 1], vec![1, 0]])), im(&[vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn hnf_stacked_example_matches_box_membership() {
        // Oracle: a vector of [0,4)^2 is in the span iff it is an integer
        // combination of the three generators with small coefficients.
        let gens = [[1i64, 1], [0, 2], [2, 0]];
        let h = hnf(&im(&[vec![1, 1], vec![0, 2], vec![2, 0]]));
        for x in 0..4i64 {
            for y in 0..4i64 {
                let mut member = false;
                for a in -4..=4i64 {
                    for b in -4..=4i64 {
                        for c in -4..=4i64 {
                            let v = [
                                a * gens[0][0] + b * gens[1][0] + c * gens[2][0],
                                a * gens[0][1] + b * gens[1][1] + c * gens[2][1],
                            ];
                            member |= v == [x, y];
                        }
                    }
                }
                assert_eq!(hnf_contains(&h, &[x.into(), y.into()]), member, "({x},{y})");
            }
        }
    }

    #[test]
    fn hnf_handles_rank_deficiency_and_negatives() {
        let h = hnf(&im(&[vec![-2, 4, 6], vec![1, -2, -3], vec![0, 0, 0]]));
        assert_eq!(h, im(&[vec![1, -2, -3]]));
        assert_eq!(hnf(&IntMatrix::zeros(2, 3)).rows(), 0);
    }

    #[test]
    fn modular_hnf_agrees_with_plain_hnf() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(1..=5);
            let rows = n + rng.gen_range(0..=n);
            let m = IntMatrix::from_i64_rows(
                &(0..rows).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect::<Vec<Vec<i64>>>(),
            );
            let Some(d) = leading_det(&m) else { continue };
            assert_eq!(hnf_mod(&m, &d), hnf(&m), "{m:?}");
            let multiple = &d * BigInt::from(rng.gen_range(1..=6));
            assert_eq!(hnf_mod(&m, &multiple), hnf(&m));
            checked += 1;
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&RatMatrix::identity(3)).unwrap(), BigRational::one());
        assert_eq!(det(&rm(&[vec![2]])).unwrap(), BigRational::from_integer(2.into()));
        let g = RatMatrix::from_frac_rows(&[vec![(3, 5), (4, 5)], vec![(-4, 5), (3, 5)]]);
        assert_eq!(det(&g).unwrap(), BigRational::one());
        assert!(matches!(det(&rm(&[vec![1, 2]])), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn det_agrees_with_cofactor_expansion() {
        fn cofactor(m: &[Vec<i64>]) -> i64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * cofactor(&minor)
                })
                .sum()
        }
        let m = vec![vec![0, 2, -1, 3], vec![4, 0, 5, 1], vec![-2, 3, 0, 0], vec![1, 1, 1, -7]];
        assert_eq!(det_int(&im(&m)).unwrap(), BigInt::from(cofactor(&m)));
    }

    #[test]
    fn dual_basis_examples() {
        assert_eq!(dual_basis(&RatMatrix::identity(3)).unwrap(), RatMatrix::identity(3));
        assert_eq!(
            dual_basis(&rm(&[vec![2, 0], vec![0, 2]])).unwrap(),
            RatMatrix::from_frac_rows(&[vec![(1, 2), (0, 1)], vec![(0, 1), (1, 2)]])
        );
        let d = dual_basis(&rm(&[vec![1, 1], vec![0, 2]])).unwrap();
        assert_eq!(d, RatMatrix::from_frac_rows(&[vec![(1, 1), (0, 1)], vec![(-1, 2), (1, 2)]]));
        // Every pairwise product with the primal basis is integral.
        let b = rm(&[vec![1, 1], vec![0, 2]]);
        assert!(d.mul(&b.transpose()).is_integral());
        assert_eq!(dual_basis(&rm(&[vec![1, 1], vec![1, 1]])), Err(Error::Singular));
    }

    #[test]
    fn intersection_examples() {
        let b = rm(&[vec![1, 1], vec![0, 2]]);
        assert_eq!(lattice_intersect(&b, &b).unwrap(), canonical_basis(&b));
        let z2 = RatMatrix::identity(2);
        let two = rm(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(lattice_intersect(&z2, &two).unwrap(), two);
        let b2 = rm(&[vec![2, 0], vec![0, 1]]);
        let got = lattice_intersect(&b, &b2).unwrap();
        assert_eq!(got, two);
        // Oracle: membership over the box [-4,4]^2.
        let hb = hnf(&b.to_int().unwrap());
        let hb2 = hnf(&b2.to_int().unwrap());
        let hg = hnf(&got.to_int().unwrap());
        for x in -4..=4i64 {
            for y in -4..=4i64 {
                let v = [BigInt::from(x), BigInt::from(y)];
                assert_eq!(hnf_contains(&hg, &v), hnf_contains(&hb, &v) && hnf_contains(&hb2, &v));
            }
        }
    }
}
