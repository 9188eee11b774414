//! Construction A lattices, s-hulls and exact rational rotations.
//!
//! Vectors are rows; a rotation `O` acts on a basis `B` as `B O^T`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::equiv::{Permutation, SignedPerm};
use crate::error::{Error, Result};
use crate::linalg::{canonical_basis, det, dual_basis, hnf, lattice_intersect, IntMatrix, MatrixJson, RatMatrix};
use crate::modring::ModMatrix;

/// Pythagorean cosine/sine pairs used for random rotations.
pub const PYTHAGOREAN_TABLE: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// A full-rank lattice given by an exact square row basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    basis: RatMatrix,
}

impl LatticeBasis {
    pub fn new(basis: RatMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::NonSquare { rows: basis.rows(), cols: basis.cols() });
        }
        if det(&basis)?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(LatticeBasis { basis })
    }

    pub fn from_int(basis: &IntMatrix) -> Result<Self> {
        Self::new(basis.to_rat())
    }

    /// `s * Z^n`.
    pub fn scaled_identity(n: usize, s: &BigRational) -> Self {
        LatticeBasis { basis: RatMatrix::identity(n).scale(s) }
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    /// Least common denominator of the basis entries.
    pub fn denominator(&self) -> BigInt {
        self.basis.common_denominator()
    }

    /// HNF-based canonical basis; equal lattices give equal matrices.
    pub fn canonical(&self) -> LatticeBasis {
        LatticeBasis { basis: canonical_basis(&self.basis) }
    }

    /// Covolume `|det B|`.
    pub fn covolume(&self) -> BigRational {
        det(&self.basis).expect("square").abs()
    }

    pub fn gram(&self) -> RatMatrix {
        self.basis.gram()
    }

    pub fn dual(&self) -> LatticeBasis {
        LatticeBasis { basis: dual_basis(&self.basis).expect("full rank") }
    }

    pub fn scale(&self, s: &BigRational) -> LatticeBasis {
        LatticeBasis { basis: self.basis.scale(s) }
    }

    /// Membership test: `v B^{-1}` is integral.
    pub fn contains(&self, v: &[BigRational]) -> bool {
        let inv = self.basis.inverse().expect("full rank");
        let row = RatMatrix::from_row_vecs(vec![v.to_vec()], v.len());
        row.mul(&inv).is_integral()
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    n: usize,
    #[serde(flatten)]
    basis: MatrixJson,
}

impl Serialize for LatticeBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson { n: self.n(), basis: self.basis.clone().into() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = LatticeJson::deserialize(d)?;
        let basis = RatMatrix::try_from(j.basis).map_err(D::Error::custom)?;
        if basis.rows() != j.n {
            return Err(D::Error::custom("n does not match the basis shape"));
        }
        LatticeBasis::new(basis).map_err(D::Error::custom)
    }
}

/// An exact orthonormal matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(into = "RatMatrix")]
pub struct RationalOrthogonal {
    matrix: RatMatrix,
}

impl RationalOrthogonal {
    pub fn new(matrix: RatMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        if matrix.gram() != RatMatrix::identity(matrix.rows()) {
            return Err(Error::NotARotation("matrix is not orthogonal".into()));
        }
        Ok(RationalOrthogonal { matrix })
    }

    pub fn identity(n: usize) -> Self {
        RationalOrthogonal { matrix: RatMatrix::identity(n) }
    }

    /// The rotation whose action `v -> v O^T` is the signed permutation `s`.
    pub fn from_signed_perm(s: &SignedPerm) -> Self {
        RationalOrthogonal { matrix: s.row_matrix().transpose() }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn transpose(&self) -> Self {
        RationalOrthogonal { matrix: self.matrix.transpose() }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &RationalOrthogonal) -> Self {
        RationalOrthogonal { matrix: self.matrix.mul(&other.matrix) }
    }
}

impl From<RationalOrthogonal> for RatMatrix {
    fn from(o: RationalOrthogonal) -> Self {
        o.matrix
    }
}

impl<'de> Deserialize<'de> for RationalOrthogonal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RationalOrthogonal::new(RatMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `C + kZ^n` in Hermite normal form.
pub fn construction_a(c: &LinearCode) -> LatticeBasis {
    let k = BigInt::from(c.modulus());
    let n = c.len();
    let stacked = c.generator().lift().vstack(&IntMatrix::identity(n).scale(&k));
    LatticeBasis::from_int(&hnf(&stacked)).expect("contains kZ^n, so full rank")
}

/// `L ∩ s L*`.
pub fn s_hull(l: &LatticeBasis, s: &BigRational) -> Result<LatticeBasis> {
    if s.is_zero() {
        return Err(Error::Singular);
    }
    let scaled_dual = dual_basis(&l.basis)?.scale(s);
    LatticeBasis::new(lattice_intersect(&l.basis, &scaled_dual)?)
}

/// The lattice `{ v O^T : v ∈ L }`.
pub fn rotate(l: &LatticeBasis, o: &RationalOrthogonal) -> Result<LatticeBasis> {
    if l.n() != o.n() {
        return Err(Error::DimensionMismatch(format!("lattice of dimension {} and rotation of size {}", l.n(), o.n())));
    }
    Ok(LatticeBasis { basis: l.basis.mul(&o.matrix.transpose()) })
}

/// Givens rotation in the `(i, j)` plane with `[i][i] = [j][j] = c`,
/// `[i][j] = s`, `[j][i] = -s`.
pub fn givens(n: usize, i: usize, j: usize, c: &BigRational, s: &BigRational) -> Result<RationalOrthogonal> {
    if i == j || i >= n || j >= n {
        return Err(Error::DimensionMismatch(format!("plane ({i}, {j}) in dimension {n}")));
    }
    let mut m = RatMatrix::identity(n);
    m[(i, i)] = c.clone();
    m[(j, j)] = c.clone();
    m[(i, j)] = s.clone();
    m[(j, i)] = -s.clone();
    RationalOrthogonal::new(m)
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// A random signed permutation from `rng`.
pub fn random_signed_perm<R: Rng>(rng: &mut R, n: usize) -> SignedPerm {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    let signs = (0..n).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
    SignedPerm::new(Permutation::from_images(images).expect("shuffled identity"), signs).expect("valid signs")
}

/// Product of `depth` random Givens rotations with Pythagorean angles,
/// followed by a random signed permutation.
pub fn random_rational_orthogonal(n: usize, seed: u64, depth: usize) -> RationalOrthogonal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut o = RationalOrthogonal::identity(n);
    if n >= 2 {
        for _ in 0..depth {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let (a, b, c) = PYTHAGOREAN_TABLE[rng.gen_range(0..PYTHAGOREAN_TABLE.len())];
            let g = givens(n, i, j, &ratio(a, c), &ratio(b, c)).expect("valid plane");
            o = o.compose(&g);
        }
    }
    o.compose(&RationalOrthogonal::from_signed_perm(&random_signed_perm(&mut rng, n)))
}

/// The code `{ v mod k : v ∈ L }` of an integral lattice containing `kZ^n`.
pub fn mod_reduce_to_code(l: &LatticeBasis, k: u64) -> Result<LinearCode> {
    let b = l.basis.to_int().map_err(|_| Error::NotIntegral)?;
    let kb = BigRational::from_integer(BigInt::from(k));
    if !l.basis.inverse()?.scale(&kb).is_integral() {
        return Err(Error::DoesNotContainKZn { k });
    }
    Ok(LinearCode::from_generator(&ModMatrix::from_int(k, &b)))
}

/// True iff both bases span the same point set.
pub fn lattice_equal(l1: &LatticeBasis, l2: &LatticeBasis) -> bool {
    l1.n() == l2.n() && canonical_basis(&l1.basis) == canonical_basis(&l2.basis)
}
