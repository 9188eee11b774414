//! Linear codes over Z/kZ.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equiv::{Permutation, SignedPerm};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::modring::{free_basis, free_rank, howell_form, inverse_mod, is_unit_det, kernel_mod, ModMatrix};

/// Draw cap for [`random_free_lcd`].
pub const DEFAULT_DRAW_CAP: usize = 10_000;

/// A submodule of `(Z/kZ)^n`, held by its Howell-form generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCode {
    k: u64,
    n: usize,
    gen: ModMatrix,
    free_rank: Option<usize>,
}

impl LinearCode {
    pub fn from_generator(g: &ModMatrix) -> Self {
        let gen = howell_form(g);
        let free_rank = free_rank(&gen);
        LinearCode { k: g.modulus(), n: g.cols(), gen, free_rank }
    }

    pub fn zero(k: u64, n: usize) -> Self {
        Self::from_generator(&ModMatrix::zeros(k, 0, n))
    }

    pub fn full(k: u64, n: usize) -> Self {
        Self::from_generator(&ModMatrix::identity(k, n))
    }

    pub fn modulus(&self) -> u64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Howell-form generator.
    pub fn generator(&self) -> &ModMatrix {
        &self.gen
    }

    pub fn free_rank(&self) -> Option<usize> {
        self.free_rank
    }

    /// Linearly independent generator, when the code is free.
    pub fn free_generator(&self) -> Option<ModMatrix> {
        free_basis(&self.gen)
    }

    pub fn is_zero(&self) -> bool {
        self.gen.rows() == 0
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.gen.howell_contains(v)
    }

    /// Number of codewords.
    pub fn size(&self) -> BigInt {
        self.gen.howell_module_size()
    }

    /// Every codeword, each exactly once. Exponential in the rank.
    pub fn codewords(&self) -> Vec<Vec<u64>> {
        let k = self.k;
        let mut out = vec![vec![0u64; self.n]];
        for row in self.gen.row_vecs() {
            let p = row.iter().copied().find(|&x| x != 0).expect("Howell rows are nonzero");
            let order = k / num_integer::gcd(p, k);
            let mut next = Vec::with_capacity(out.len() * order as usize);
            for c in 0..order {
                for w in &out {
                    next.push(w.iter().zip(&row).map(|(&a, &b)| ((a as u128 + c as u128 * b as u128) % k as u128) as u64).collect());
                }
            }
            out = next;
        }
        out
    }
}

/// Euclidean inner product modulo `k`.
pub fn dot_mod(x: &[u64], y: &[u64], k: u64) -> u64 {
    (x.iter().zip(y).fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % k as u128)) as u64
}

/// `C^⊥`.
pub fn dual(c: &LinearCode) -> LinearCode {
    LinearCode::from_generator(&kernel_mod(&c.gen))
}

/// `C ∩ C^⊥`, as the dual of `C + C^⊥`.
pub fn hull(c: &LinearCode) -> LinearCode {
    let d = dual(c);
    LinearCode::from_generator(&kernel_mod(&c.gen.vstack(&d.gen)))
}

pub fn is_lcd(c: &LinearCode) -> bool {
    hull(c).is_zero()
}

/// True iff a linearly independent generator `G` of `C` exists with
/// `G G^T` invertible over `Z_k`.
pub fn is_free_lcd(c: &LinearCode) -> bool {
    match c.free_generator() {
        Some(g) if g.rows() == 0 => true,
        Some(g) => is_unit_det(&g.mul(&g.transpose())).expect("Gram matrix is square"),
        None => false,
    }
}

/// Closure matrices for length `n`: `T` (n x 2n), its left inverse `T'`
/// (2n x n), and `T_m = [T | m I]` when the modulus is `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureMatrices {
    pub t: IntMatrix,
    pub t_prime: IntMatrix,
    pub t_m: Option<IntMatrix>,
}

impl ClosureMatrices {
    pub fn new(n: usize, k: u64) -> Self {
        let mut t = IntMatrix::zeros(n, 2 * n);
        let mut t_prime = IntMatrix::zeros(2 * n, n);
        for i in 0..n {
            t[(i, 2 * i)] = BigInt::from(1);
            t[(i, 2 * i + 1)] = BigInt::from(-1);
            t_prime[(2 * i, i)] = BigInt::from(1);
        }
        let t_m = (k % 4 == 2).then(|| {
            let m = BigInt::from(k / 2);
            let mut t_m = IntMatrix::zeros(n, 3 * n);
            for i in 0..n {
                t_m[(i, 2 * i)] = BigInt::from(1);
                t_m[(i, 2 * i + 1)] = BigInt::from(-1);
                t_m[(i, 2 * n + i)] = m.clone();
            }
            t_m
        });
        ClosureMatrices { t, t_prime, t_m }
    }
}

/// `C^±`: each coordinate followed by its negation.
pub fn signed_closure(c: &LinearCode) -> LinearCode {
    let cm = ClosureMatrices::new(c.n, c.k);
    LinearCode::from_generator(&c.gen.mul_int(&cm.t))
}

/// `C^e`, generated by `G T_m`; defined for `k = 2m` with `m` odd.
pub fn extended_signed_closure(c: &LinearCode) -> Result<LinearCode> {
    if c.k % 4 != 2 {
        return Err(Error::BadModulus { k: c.k });
    }
    let cm = ClosureMatrices::new(c.n, c.k);
    Ok(LinearCode::from_generator(&c.gen.mul_int(cm.t_m.as_ref().expect("k = 2 mod 4"))))
}

/// `G^T (G G^T)^{-1} G` for a free generator `G`.
pub fn projection_matrix(c: &LinearCode) -> Result<ModMatrix> {
    let g = c.free_generator().ok_or(Error::NotFreeLcd)?;
    if g.rows() == 0 {
        return Ok(ModMatrix::zeros(c.k, c.n, c.n));
    }
    let inv = inverse_mod(&g.mul(&g.transpose())).map_err(|_| Error::NotFreeLcd)?;
    Ok(g.transpose().mul(&inv).mul(&g))
}

/// The code `{ c D P : c ∈ C }`.
pub fn apply_signed_perm(c: &LinearCode, s: &SignedPerm) -> Result<LinearCode> {
    if s.len() != c.n {
        return Err(Error::DimensionMismatch(format!("signed permutation on {} points, code length {}", s.len(), c.n)));
    }
    Ok(LinearCode::from_generator(&signed_perm_rows(&c.gen, s)))
}

/// The code `{ c P : c ∈ C }`.
pub fn apply_permutation(c: &LinearCode, p: &Permutation) -> Result<LinearCode> {
    apply_signed_perm(c, &SignedPerm::from_permutation(p.clone()))
}

pub(crate) fn signed_perm_rows(g: &ModMatrix, s: &SignedPerm) -> ModMatrix {
    let k = g.modulus();
    let mut out = ModMatrix::zeros(k, g.rows(), g.cols());
    for r in 0..g.rows() {
        for i in 0..g.cols() {
            let x = g.get(r, i);
            let v = if s.signs[i] < 0 { (k - x) % k } else { x };
            out.set(r, s.sigma.image(i), v);
        }
    }
    out
}

/// True iff `s` maps `c2` onto `c1`, without recomputing a Howell form.
pub fn maps_onto(c1: &LinearCode, c2: &LinearCode, s: &SignedPerm) -> bool {
    c1.k == c2.k
        && c1.n == c2.n
        && s.len() == c1.n
        && c1.size() == c2.size()
        && signed_perm_rows(&c2.gen, s).row_vecs().iter().all(|r| c1.contains(r))
}

/// Uniform `rows x n` matrix over `Z_k`.
pub fn random_matrix<R: Rng>(rng: &mut R, k: u64, rows: usize, n: usize) -> ModMatrix {
    ModMatrix::new(k, rows, n, (0..rows * n).map(|_| rng.gen_range(0..k)).collect())
}

/// Rejection-samples a free LCD code of rank `m`.
pub fn random_free_lcd(k: u64, n: usize, m: usize, seed: u64) -> Result<LinearCode> {
    random_free_lcd_capped(k, n, m, seed, DEFAULT_DRAW_CAP)
}

pub fn random_free_lcd_capped(k: u64, n: usize, m: usize, seed: u64, cap: usize) -> Result<LinearCode> {
    if k < 2 {
        return Err(Error::BadModulus { k });
    }
    if m == 0 || m > n {
        return Err(Error::DimensionMismatch(format!("rank {m} outside 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cap {
        let g = random_matrix(&mut rng, k, m, n);
        if is_unit_det(&g.mul(&g.transpose()))? {
            return Ok(LinearCode::from_generator(&g));
        }
    }
    Err(Error::Timeout { draws: cap })
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    k: u64,
    n: usize,
    gen: ModMatrix,
}

impl Serialize for LinearCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CodeJson { k: self.k, n: self.n, gen: self.gen.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = CodeJson::deserialize(d)?;
        if j.gen.modulus() != j.k || j.gen.cols() != j.n {
            return Err(D::Error::custom("generator does not match k and n"));
        }
        Ok(LinearCode::from_generator(&j.gen))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::tests::all_vectors;
    use std::collections::BTreeSet;

    fn code(k: u64, rows: &[Vec<i64>]) -> LinearCode {
        LinearCode::from_generator(&ModMatrix::from_i64_rows(k, rows))
    }

    fn set(c: &LinearCode) -> BTreeSet<Vec<u64>> {
        c.codewords().into_iter().collect()
    }

    /// Span of the generator rows by scanning every coefficient vector.
    fn brute_span(k: u64, rows: &[Vec<u64>], n: usize) -> BTreeSet<Vec<u64>> {
        all_vectors(k, rows.len())
            .into_iter()
            .map(|a| (0..n).map(|j| rows.iter().zip(&a).map(|(r, &c)| c * r[j]).sum::<u64>() % k).collect())
            .collect()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(code(5, &[vec![1, 0], vec![0, 1]]), LinearCode::full(5, 2));
        let c = code(3, &[vec![1, 1]]);
        assert_eq!(set(&c), [vec![0, 0], vec![1, 1], vec![2, 2]].into_iter().collect());
        assert_eq!(code(3, &[vec![1, 1], vec![2, 2]]), c);
        assert_eq!(c.free_rank(), Some(1));
        assert_eq!(code(4, &[vec![2, 0]]).free_rank(), None);
    }

    #[test]
    fn codewords_are_distinct_and_complete() {
        for (k, rows) in [(6u64, vec![vec![2, 3, 1], vec![0, 3, 3]]), (8, vec![vec![4, 2, 6], vec![2, 0, 2]])] {
            let g = ModMatrix::from_i64_rows(k, &rows);
            let c = LinearCode::from_generator(&g);
            let words = c.codewords();
            assert_eq!(BigInt::from(words.len()), c.size());
            assert_eq!(words.iter().cloned().collect::<BTreeSet<_>>(), brute_span(k, &g.row_vecs(), 3));
        }
    }

    #[test]
    fn dual_examples() {
        assert!(dual(&LinearCode::full(4, 3)).is_zero());
        assert_eq!(dual(&code(3, &[vec![1, 1]])), code(3, &[vec![1, 2]]));
        assert_eq!(dual(&code(2, &[vec![1, 1]])), code(2, &[vec![1, 1]]));
        assert_eq!(dual(&LinearCode::zero(6, 2)), LinearCode::full(6, 2));
    }

    #[test]
    fn dual_matches_orthogonality_scan() {
        let c = code(6, &[vec![2, 3, 1]]);
        let expected: BTreeSet<Vec<u64>> = all_vectors(6, 3)
            .into_iter()
            .filter(|x| c.codewords().iter().all(|w| dot_mod(x, w, 6) == 0))
            .collect();
        assert_eq!(set(&dual(&c)), expected);
    }

    #[test]
    fn hull_and_lcd_examples() {
        let c3 = code(3, &[vec![1, 1]]);
        let c2 = code(2, &[vec![1, 1]]);
        assert!(hull(&c3).is_zero());
        assert_eq!(hull(&c2), c2);
        assert!(hull(&LinearCode::zero(5, 3)).is_zero());
        assert!(is_lcd(&c3));
        assert!(!is_lcd(&c2));
        assert!(is_lcd(&LinearCode::full(6, 2)));
        assert!(is_free_lcd(&c3));
        assert!(!is_free_lcd(&c2));
        assert!(is_free_lcd(&LinearCode::full(6, 3)));
        // LCD but not free over Z_6.
        let c = code(6, &[vec![2, 0]]);
        assert!(is_lcd(&c));
        assert!(!is_free_lcd(&c));
    }

    #[test]
    fn closure_examples() {
        let cm = ClosureMatrices::new(3, 6);
        assert_eq!(cm.t.mul(&cm.t_prime), IntMatrix::identity(3));
        let x = ModMatrix::from_i64_rows(3, &[vec![1, 2]]);
        assert_eq!(x.mul_int(&ClosureMatrices::new(2, 3).t).row(0), &[1, 2, 2, 1]);
        assert!(signed_closure(&LinearCode::zero(3, 2)).is_zero());
        assert_eq!(signed_closure(&LinearCode::zero(3, 2)).len(), 4);
        assert_eq!(signed_closure(&code(3, &[vec![1, 1]])), code(3, &[vec![1, 2, 1, 2]]));
        let e = extended_signed_closure(&code(6, &[vec![1, 0]])).unwrap();
        assert!(e.contains(&[1, 5, 0, 0, 3, 0]));
        assert_eq!(e, code(6, &[vec![1, 5, 0, 0, 3, 0]]));
        assert_eq!(extended_signed_closure(&LinearCode::zero(6, 2)).unwrap().len(), 6);
        assert_eq!(extended_signed_closure(&LinearCode::zero(12, 2)), Err(Error::BadModulus { k: 12 }));
        assert_eq!(extended_signed_closure(&LinearCode::zero(3, 2)), Err(Error::BadModulus { k: 3 }));
    }

    #[test]
    fn projection_examples() {
        assert_eq!(projection_matrix(&LinearCode::full(6, 3)).unwrap(), ModMatrix::identity(6, 3));
        let p = projection_matrix(&code(3, &[vec![1, 1]])).unwrap();
        assert_eq!(p, ModMatrix::from_i64_rows(3, &[vec![2, 2], vec![2, 2]]));
        assert_eq!(p.mul(&p), p);
        assert_eq!(ModMatrix::from_i64_rows(3, &[vec![1, 1]]).mul(&p).row(0), &[1, 1]);
        assert_eq!(
            projection_matrix(&code(5, &[vec![1, 0]])).unwrap(),
            ModMatrix::from_i64_rows(5, &[vec![1, 0], vec![0, 0]])
        );
        assert_eq!(projection_matrix(&code(2, &[vec![1, 1]])), Err(Error::NotFreeLcd));
    }

    #[test]
    fn signed_perm_examples() {
        let c = code(3, &[vec![1, 2]]);
        assert_eq!(apply_signed_perm(&c, &SignedPerm::identity(2)).unwrap(), c);
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        assert_eq!(apply_permutation(&c, &swap).unwrap(), code(3, &[vec![2, 1]]));
        let neg2 = SignedPerm::new(Permutation::identity(2), vec![1, -1]).unwrap();
        assert_eq!(apply_signed_perm(&code(3, &[vec![1, 1]]), &neg2).unwrap(), code(3, &[vec![1, 2]]));
        assert!(apply_signed_perm(&c, &SignedPerm::identity(3)).is_err());
        assert!(maps_onto(&code(3, &[vec![1, 2]]), &code(3, &[vec![1, 1]]), &neg2));
        assert!(!maps_onto(&code(3, &[vec![1, 1]]), &code(3, &[vec![1, 1]]), &neg2));
    }

    #[test]
    fn random_free_lcd_examples() {
        let c = random_free_lcd(3, 2, 1, 7).unwrap();
        assert!(is_free_lcd(&c));
        assert_eq!(random_free_lcd(2, 1, 1, 0).unwrap(), LinearCode::full(2, 1));
        assert_eq!(random_free_lcd(15, 6, 3, 42).unwrap(), random_free_lcd(15, 6, 3, 42).unwrap());
        assert!(random_free_lcd(3, 2, 3, 0).is_err());
        assert_eq!(random_free_lcd_capped(2, 2, 1, 0, 0), Err(Error::Timeout { draws: 0 }));
    }

    #[test]
    fn json_round_trip() {
        let c = code(6, &[vec![2, 3, 1]]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<LinearCode>(&s).unwrap(), c);
        assert!(serde_json::from_str::<LinearCode>(r#"{"k":3,"n":3,"gen":{"k":3,"rows":1,"cols":2,"entries":[1,1]}}"#).is_err());
    }
}
