//! Exact LLL reduction and short vector enumeration.
//!
//!     cargo run --example reduction

use hullattack::linalg::{combine, default_delta, enumerate_short_vectors, is_lll_reduced, lll_reduce, norm_sq, RatMatrix};
use num_rational::BigRational;

fn main() {
    let b = RatMatrix::from_i64_rows(&[vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]);
    let r = lll_reduce(&b, &default_delta()).unwrap();
    println!("reduced {r:?}, reduced = {}", is_lll_reduced(&r, &default_delta()));

    let skew = RatMatrix::from_frac_rows(&[vec![(1, 2), (7, 3)], vec![(0, 1), (5, 6)]]);
    let bound = BigRational::new(4.into(), 1.into());
    for c in enumerate_short_vectors(&skew, &bound).unwrap() {
        let v = combine(&skew, &c);
        println!("coeffs {c:?} -> norm^2 {}", norm_sq(&v));
    }
}
