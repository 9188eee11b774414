use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Dense rational matrix. Entries are `BigRational`, which keeps every
/// value in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

macro_rules! dense_common {
    ($ty:ident, $elem:ty) => {
        impl $ty {
            pub fn zeros(rows: usize, cols: usize) -> Self {
                $ty { rows, cols, data: vec![<$elem>::zero(); rows * cols] }
            }

            pub fn identity(n: usize) -> Self {
                let mut m = Self::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = <$elem>::one();
                }
                m
            }

            /// Builds a matrix from row-major data; panics if the length is wrong.
            pub fn from_vec(rows: usize, cols: usize, data: Vec<$elem>) -> Self {
                assert_eq!(data.len(), rows * cols, "data length does not match shape");
                $ty { rows, cols, data }
            }

            pub fn from_row_vecs(rows: Vec<Vec<$elem>>, cols: usize) -> Self {
                let r = rows.len();
                let mut data = Vec::with_capacity(r * cols);
                for row in rows {
                    assert_eq!(row.len(), cols, "ragged rows");
                    data.extend(row);
                }
                $ty { rows: r, cols, data }
            }

            pub fn rows(&self) -> usize {
                self.rows
            }

            pub fn cols(&self) -> usize {
                self.cols
            }

            pub fn is_square(&self) -> bool {
                self.rows == self.cols
            }

            pub fn row(&self, i: usize) -> &[$elem] {
                &self.data[i * self.cols..(i + 1) * self.cols]
            }

            pub fn row_mut(&mut self, i: usize) -> &mut [$elem] {
                &mut self.data[i * self.cols..(i + 1) * self.cols]
            }

            pub fn row_vecs(&self) -> Vec<Vec<$elem>> {
                (0..self.rows).map(|i| self.row(i).to_vec()).collect()
            }

            pub fn entries(&self) -> &[$elem] {
                &self.data
            }

            pub fn transpose(&self) -> Self {
                let mut t = Self::zeros(self.cols, self.rows);
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        t[(j, i)] = self[(i, j)].clone();
                    }
                }
                t
            }

            pub fn mul(&self, other: &Self) -> Self {
                assert_eq!(self.cols, other.rows, "inner dimensions differ");
                let mut out = Self::zeros(self.rows, other.cols);
                for i in 0..self.rows {
                    for l in 0..self.cols {
                        let a = &self[(i, l)];
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..other.cols {
                            let b = &other[(l, j)];
                            if !b.is_zero() {
                                out[(i, j)] += a * b;
                            }
                        }
                    }
                }
                out
            }

            pub fn scale(&self, s: &$elem) -> Self {
                $ty {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().map(|x| x * s).collect(),
                }
            }

            /// Stacks `self` on top of `other`.
            pub fn vstack(&self, other: &Self) -> Self {
                assert_eq!(self.cols, other.cols, "column counts differ");
                let mut data = self.data.clone();
                data.extend(other.data.iter().cloned());
                $ty { rows: self.rows + other.rows, cols: self.cols, data }
            }

            pub fn is_zero(&self) -> bool {
                self.data.iter().all(|x| x.is_zero())
            }

            pub fn is_symmetric(&self) -> bool {
                self.is_square()
                    && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
            }
        }

        impl Index<(usize, usize)> for $ty {
            type Output = $elem;
            fn index(&self, (i, j): (usize, usize)) -> &$elem {
                debug_assert!(i < self.rows && j < self.cols);
                &self.data[i * self.cols + j]
            }
        }

        impl IndexMut<(usize, usize)> for $ty {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut $elem {
                debug_assert!(i < self.rows && j < self.cols);
                &mut self.data[i * self.cols + j]
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "[")?;
                for i in 0..self.rows {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "[")?;
                    for j in 0..self.cols {
                        if j > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{}", self[(i, j)])?;
                    }
                    write!(f, "]")?;
                }
                write!(f, "]")
            }
        }
    };
}

dense_common!(IntMatrix, BigInt);
dense_common!(RatMatrix, BigRational);

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        IntMatrix::from_row_vecs(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }
}

impl RatMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        IntMatrix::from_i64_rows(rows).to_rat()
    }

    /// Builds from `(numerator, denominator)` pairs.
    pub fn from_frac_rows(rows: &[Vec<(i64, i64)>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        RatMatrix::from_row_vecs(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| BigRational::new(p.into(), q.into())).collect())
                .collect(),
            cols,
        )
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Multiplies by `scale` and returns the integer matrix; panics if a
    /// product is not integral.
    pub fn scaled_to_int(&self, scale: &BigInt) -> IntMatrix {
        let data = self
            .data
            .iter()
            .map(|x| {
                let y = x * BigRational::from_integer(scale.clone());
                assert!(y.is_integer(), "scale does not clear denominators");
                y.to_integer()
            })
            .collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Integer matrix of an integral rational matrix.
    pub fn to_int(&self) -> Result<IntMatrix> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        Ok(self.scaled_to_int(&BigInt::one()))
    }

    pub fn scale_int(&self, s: &BigInt) -> RatMatrix {
        self.scale(&BigRational::from_integer(s.clone()))
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero()).ok_or(Error::Singular)?;
            if p != c {
                a.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            let piv = a[(c, c)].recip();
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] * &piv;
                inv[(c, j)] = &inv[(c, j)] * &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let da = &f * &a[(c, j)];
                    a[(r, j)] -= da;
                    let di = &f * &inv[(c, j)];
                    inv[(r, j)] -= di;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `self * self^T`.
    pub fn gram(&self) -> RatMatrix {
        self.mul(&self.transpose())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Wire form shared by integer and rational matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl MatrixJson {
    fn check_len(&self) -> Result<()> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "matrix has {} entries, expected {}x{}",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(())
    }
}

impl From<RatMatrix> for MatrixJson {
    fn from(m: RatMatrix) -> Self {
        MatrixJson { rows: m.rows, cols: m.cols, entries: m.data.iter().map(format_rational).collect() }
    }
}

impl TryFrom<MatrixJson> for RatMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        j.check_len()?;
        let data = j.entries.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix { rows: j.rows, cols: j.cols, data })
    }
}

impl From<IntMatrix> for MatrixJson {
    fn from(m: IntMatrix) -> Self {
        MatrixJson { rows: m.rows, cols: m.cols, entries: m.data.iter().map(|x| x.to_string()).collect() }
    }
}

impl TryFrom<MatrixJson> for IntMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        j.check_len()?;
        let data = j
            .entries
            .iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid integer {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { rows: j.rows, cols: j.cols, data })
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        RatMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        IntMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Integer floor division.
pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Nearest integer to `p/q` (q > 0), ties rounded up.
pub(crate) fn round_div(p: &BigInt, q: &BigInt) -> BigInt {
    debug_assert!(q.is_positive());
    let two = BigInt::from(2);
    (p * &two + q).div_floor(&(q * &two))
}
