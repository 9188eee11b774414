//! Matrix algebra over Z/kZ for composite k.
//!
//! Row modules are kept in Howell normal form, which is the canonical
//! generating set for submodules of (Z/kZ)^n: pivots are divisors of `k`,
//! entries above a pivot are reduced below it, and the span of the rows
//! with `j` leading zeros is exactly the part of the module with `j`
//! leading zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{det_int, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModMatrix {
    k: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

pub(crate) fn mul_mod(a: u64, b: u64, k: u64) -> u64 {
    ((a as u128 * b as u128) % k as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, k: u64) -> u64 {
    ((a as u128 + b as u128) % k as u128) as u64
}

pub(crate) fn neg_mod(a: u64, k: u64) -> u64 {
    if a == 0 {
        0
    } else {
        k - a
    }
}

/// Reduces a signed integer into `[0, k)`.
pub(crate) fn reduce_i128(x: i128, k: u64) -> u64 {
    x.rem_euclid(k as i128) as u64
}

fn egcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `k`, if it exists.
pub fn inv_mod(a: u64, k: u64) -> Option<u64> {
    if k == 1 {
        return Some(0);
    }
    let (g, s, _) = egcd_i128((a % k) as i128, k as i128);
    (g == 1).then(|| reduce_i128(s, k))
}

pub fn is_unit(a: u64, k: u64) -> bool {
    a.gcd(&k) == 1
}

/// A unit `u` with `u * a ≡ gcd(a, k) (mod k)`.
fn normalizing_unit(a: u64, k: u64) -> u64 {
    let g = a.gcd(&k);
    let kp = k / g;
    let ap = (a / g) % kp;
    let u0 = if kp == 1 { 0 } else { inv_mod(ap, kp).expect("a/g is a unit mod k/g") };
    (0..g)
        .map(|t| u0 + t * kp)
        .find(|&u| is_unit(u, k))
        .expect("a unit lift always exists")
}

/// Unimodular 2x2 transform `[[s, t], [u, v]]` sending `(a, b)` to `(gcd, 0)`.
fn gcd_transform(a: u64, b: u64) -> (i128, i128, i128, i128) {
    if a != 0 && b % a == 0 {
        return (1, 0, -((b / a) as i128), 1);
    }
    let (g, s, t) = egcd_i128(a as i128, b as i128);
    (s, t, -(b as i128) / g, (a as i128) / g)
}

fn combine_rows(x: &mut [u64], y: &mut [u64], tr: (i128, i128, i128, i128), k: u64, from: usize) {
    let (s, t, u, v) = tr;
    for j in from..x.len() {
        let (a, b) = (x[j] as i128, y[j] as i128);
        let kk = k as i128;
        x[j] = ((s.rem_euclid(kk) * a + t.rem_euclid(kk) * b) % kk) as u64;
        y[j] = ((u.rem_euclid(kk) * a + v.rem_euclid(kk) * b) % kk) as u64;
    }
}

impl ModMatrix {
    /// Builds a matrix, reducing every entry into `[0, k)`.
    pub fn new(k: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert!(k >= 2, "modulus must be at least 2");
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        ModMatrix { k, rows, cols, data: data.into_iter().map(|x| x % k).collect() }
    }

    pub fn from_i64_rows(k: u64, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_i64_rows_with_cols(k, rows, cols)
    }

    pub fn from_i64_rows_with_cols(k: u64, rows: &[Vec<i64>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| reduce_i128(x as i128, k)));
        }
        ModMatrix { k, rows: rows.len(), cols, data }
    }

    pub fn from_row_vecs(k: u64, rows: Vec<Vec<u64>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row.into_iter().map(|x| x % k));
        }
        ModMatrix { k, rows: r, cols, data }
    }

    /// Reduces an integer matrix modulo `k`.
    pub fn from_int(k: u64, m: &IntMatrix) -> Self {
        let kb = BigInt::from(k);
        let data = m
            .entries()
            .iter()
            .map(|x| x.mod_floor(&kb).to_u64().expect("residue fits in u64"))
            .collect();
        ModMatrix { k, rows: m.rows(), cols: m.cols(), data }
    }

    pub fn zeros(k: u64, rows: usize, cols: usize) -> Self {
        ModMatrix::new(k, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(k: u64, n: usize) -> Self {
        let mut m = Self::zeros(k, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % k;
        }
        m
    }

    pub fn modulus(&self) -> u64 {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.k;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.k, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.k, other.k, "moduli differ");
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let k = self.k as u128;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: u128 = 0;
                for l in 0..self.cols {
                    acc = (acc + self.get(i, l) as u128 * other.get(l, j) as u128) % k;
                }
                out[i * other.cols + j] = acc as u64;
            }
        }
        ModMatrix { k: self.k, rows: self.rows, cols: other.cols, data: out }
    }

    /// Product with an integer matrix whose entries are reduced mod k first.
    pub fn mul_int(&self, other: &IntMatrix) -> ModMatrix {
        self.mul(&ModMatrix::from_int(self.k, other))
    }

    pub fn scale(&self, s: u64) -> ModMatrix {
        let k = self.k;
        ModMatrix { data: self.data.iter().map(|&x| mul_mod(x, s % k, k)).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!((self.k, self.rows, self.cols), (other.k, other.rows, other.cols));
        let k = self.k;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, neg_mod(b, k), k)).collect();
        ModMatrix { data, ..self.clone() }
    }

    pub fn vstack(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.k, other.k, "moduli differ");
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        ModMatrix { k: self.k, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Integer lift with entries in `[0, k)`.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// `v * self` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let k = self.k as u128;
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(0u128, |acc, i| (acc + v[i] as u128 * self.get(i, j) as u128) % k) as u64
            })
            .collect()
    }

    /// Number of elements in the row module of a matrix in Howell form.
    pub fn howell_module_size(&self) -> BigInt {
        let mut size = BigInt::one();
        for i in 0..self.rows {
            if let Some(&p) = self.row(i).iter().find(|&&x| x != 0) {
                size *= self.k / p.gcd(&self.k);
            }
        }
        size
    }

    /// Membership in the row module, assuming `self` is in Howell form.
    pub fn howell_contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.cols);
        let k = self.k;
        let mut v = v.to_vec();
        for i in 0..self.rows {
            let row = self.row(i);
            let Some(c) = row.iter().position(|&x| x != 0) else { continue };
            if v[..c].iter().any(|&x| x != 0) {
                return false;
            }
            let p = row[c];
            if v[c] % p != 0 {
                return false;
            }
            let q = v[c] / p;
            for j in c..v.len() {
                v[j] = add_mod(v[j], neg_mod(mul_mod(q, row[j], k), k), k);
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

/// Howell normal form of the row module of `m`; zero rows are dropped.
pub fn howell_form(m: &ModMatrix) -> ModMatrix {
    let k = m.k;
    let cols = m.cols;
    let mut a: Vec<Vec<u64>> = m.row_vecs().into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut r = 0;
    for c in 0..cols {
        if r >= a.len() {
            break;
        }
        let mut i = r + 1;
        while i < a.len() {
            if a[i][c] != 0 {
                if a[r][c] == 0 {
                    a.swap(r, i);
                } else {
                    let tr = gcd_transform(a[r][c], a[i][c]);
                    let (head, tail) = a.split_at_mut(i);
                    combine_rows(&mut head[r], &mut tail[0], tr, k, c);
                }
            }
            i += 1;
        }
        if a[r][c] == 0 {
            continue;
        }
        let u = normalizing_unit(a[r][c], k);
        for x in a[r][c..].iter_mut() {
            *x = mul_mod(*x, u, k);
        }
        let p = a[r][c];
        for i in 0..r {
            let q = a[i][c] / p;
            if q == 0 {
                continue;
            }
            let (head, tail) = a.split_at_mut(r);
            for j in c..cols {
                head[i][j] = add_mod(head[i][j], neg_mod(mul_mod(q, tail[0][j], k), k), k);
            }
        }
        let ann = k / p;
        let extra: Vec<u64> = a[r].iter().map(|&x| mul_mod(x, ann, k)).collect();
        if extra.iter().any(|&x| x != 0) {
            a.push(extra);
        }
        r += 1;
    }
    a.truncate(r);
    debug_assert!(a.iter().all(|row| row.iter().any(|&x| x != 0)));
    ModMatrix::from_row_vecs(k, a, cols)
}

/// Howell-form generator of `{x : x * m^T = 0}`.
pub fn kernel_mod(m: &ModMatrix) -> ModMatrix {
    let k = m.k;
    let (r, n) = (m.rows, m.cols);
    let mut aug = ModMatrix::zeros(k, n, r + n);
    for i in 0..n {
        for j in 0..r {
            aug.set(i, j, m.get(j, i));
        }
        aug.set(i, r + i, 1);
    }
    let h = howell_form(&aug);
    let tails: Vec<Vec<u64>> =
        h.row_vecs().into_iter().filter(|row| row[..r].iter().all(|&x| x == 0)).map(|row| row[r..].to_vec()).collect();
    howell_form(&ModMatrix::from_row_vecs(k, tails, n))
}

/// Exact determinant of the integer lift reduced modulo `k`.
pub fn det_mod(m: &ModMatrix) -> Result<u64> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let d = det_int(&m.lift())?;
    Ok(d.mod_floor(&BigInt::from(m.k)).to_u64().expect("residue fits"))
}

/// True iff `gcd(det(lift(m)), k) = 1`.
pub fn is_unit_det(m: &ModMatrix) -> Result<bool> {
    Ok(is_unit(det_mod(m)?, m.k))
}

/// Inverse modulo `k`: Gaussian elimination with unit pivots, falling back
/// to the adjugate when a column has no unit pivot.
pub fn inverse_mod(m: &ModMatrix) -> Result<ModMatrix> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let k = m.k;
    let n = m.rows;
    let mut a = m.row_vecs();
    let mut inv = ModMatrix::identity(k, n).row_vecs();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| is_unit(a[r][c], k)) else {
            return inverse_by_adjugate(m);
        };
        a.swap(p, c);
        inv.swap(p, c);
        let u = inv_mod(a[c][c], k).expect("unit pivot");
        for j in 0..n {
            a[c][j] = mul_mod(a[c][j], u, k);
            inv[c][j] = mul_mod(inv[c][j], u, k);
        }
        for r in 0..n {
            if r == c || a[r][c] == 0 {
                continue;
            }
            let f = neg_mod(a[r][c], k);
            for j in 0..n {
                a[r][j] = add_mod(a[r][j], mul_mod(f, a[c][j], k), k);
                inv[r][j] = add_mod(inv[r][j], mul_mod(f, inv[c][j], k), k);
            }
        }
    }
    Ok(ModMatrix::from_row_vecs(k, inv, n))
}

fn inverse_by_adjugate(m: &ModMatrix) -> Result<ModMatrix> {
    let k = m.k;
    let lift = m.lift();
    let d = det_int(&lift)?;
    let dm = d.mod_floor(&BigInt::from(k)).to_u64().expect("residue fits");
    let dinv = inv_mod(dm, k).ok_or(Error::NotAUnit { k })?;
    let inv = lift.to_rat().inverse()?;
    let adj = inv.scale_int(&d).to_int().expect("adjugate is integral");
    Ok(ModMatrix::from_int(k, &adj).scale(dinv))
}

/// Diagonal form over Z/kZ: invariant ideals `gcd(d_i, k)` (a value of `k`
/// means the zero ideal), ordered by divisibility, together with `V^{-1}`
/// for a factorization `U * m * V = diag(d)`.
///
/// The rows of `U * m` are `d_i` times the rows of `V^{-1}`.
#[derive(Debug, Clone)]
pub struct ModSmith {
    pub invariants: Vec<u64>,
    pub v_inv: ModMatrix,
}

pub fn smith_mod(m: &ModMatrix) -> ModSmith {
    let k = m.k;
    let (r, c) = (m.rows, m.cols);
    let mut a = m.row_vecs();
    let mut v_inv = ModMatrix::identity(k, c).row_vecs();
    let mut invariants = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if a[i][j] != 0 {
                    let g = a[i][j].gcd(&k);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            v_inv.swap(t, pj);
        }
        loop {
            loop {
                for i in t + 1..r {
                    if a[i][t] != 0 {
                        let tr = gcd_transform(a[t][t], a[i][t]);
                        let (head, tail) = a.split_at_mut(i);
                        combine_rows(&mut head[t], &mut tail[0], tr, k, 0);
                    }
                }
                for j in t + 1..c {
                    if a[t][j] != 0 {
                        let (s, tt, u, v) = gcd_transform(a[t][t], a[t][j]);
                        // Columns (t, j) times [[s, u], [tt, v]]; V^{-1} gets the
                        // inverse [[v, -u], [-tt, s]] applied to rows (t, j).
                        for row in a.iter_mut() {
                            let (mut x, mut y) = (row[t], row[j]);
                            combine_rows(
                                std::slice::from_mut(&mut x),
                                std::slice::from_mut(&mut y),
                                (s, tt, u, v),
                                k,
                                0,
                            );
                            row[t] = x;
                            row[j] = y;
                        }
                        let (head, tail) = v_inv.split_at_mut(j);
                        combine_rows(&mut head[t], &mut tail[0], (v, -u, -tt, s), k, 0);
                    }
                }
                if (t + 1..r).all(|i| a[i][t] == 0) {
                    break;
                }
            }
            let g = a[t][t].gcd(&k);
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| a[i][j] % g != 0));
            match offender {
                Some(i) => {
                    for j in 0..c {
                        a[t][j] = add_mod(a[t][j], a[i][j], k);
                    }
                }
                None => break,
            }
        }
        invariants.push(a[t][t].gcd(&k));
        t += 1;
    }
    while invariants.len() < r.min(c) {
        invariants.push(k);
    }
    ModSmith { invariants, v_inv: ModMatrix::from_row_vecs(k, v_inv, c) }
}

/// True iff the row module of `m` is free of rank equal to its row count.
pub fn is_free_rows(m: &ModMatrix) -> bool {
    if m.rows > m.cols {
        return false;
    }
    smith_mod(m).invariants.iter().all(|&g| g == 1)
}

/// Rank of the row module when it is free, else `None`.
pub fn free_rank(m: &ModMatrix) -> Option<usize> {
    let s = smith_mod(m);
    s.invariants.iter().all(|&g| g == 1 || g == m.k).then(|| s.invariants.iter().filter(|&&g| g == 1).count())
}

/// A linearly independent generating set of a free row module.
pub fn free_basis(m: &ModMatrix) -> Option<ModMatrix> {
    let s = smith_mod(m);
    if !s.invariants.iter().all(|&g| g == 1 || g == m.k) {
        return None;
    }
    let rows: Vec<Vec<u64>> = s
        .invariants
        .iter()
        .enumerate()
        .filter(|&(_, &g)| g == 1)
        .map(|(i, _)| s.v_inv.row(i).to_vec())
        .collect();
    Some(ModMatrix::from_row_vecs(m.k, rows, m.cols))
}

#[derive(Serialize, Deserialize)]
struct ModMatrixJson {
    k: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl Serialize for ModMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModMatrixJson { k: self.k, rows: self.rows, cols: self.cols, entries: self.data.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ModMatrixJson::deserialize(d)?;
        if j.k < 2 {
            return Err(D::Error::custom("modulus must be at least 2"));
        }
        if j.entries.len() != j.rows * j.cols {
            return Err(D::Error::custom("entry count does not match shape"));
        }
        if j.entries.iter().any(|&x| x >= j.k) {
            return Err(D::Error::custom("entry outside [0, k)"));
        }
        Ok(ModMatrix { k: j.k, rows: j.rows, cols: j.cols, data: j.entries })
    }
}
