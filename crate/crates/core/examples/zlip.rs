//! Undoing a hidden rational rotation of k Z^n.
//!
//!     cargo run --example zlip -- 10 7

use hullattack::lattices::{random_rational_orthogonal, rotate, LatticeBasis};
use hullattack::zlip::solve_scaled_zlip;
use num_rational::BigRational;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().unwrap());
    let n = args.next().unwrap_or(10) as usize;
    let k = args.next().unwrap_or(7);
    let o = random_rational_orthogonal(n, 42, 3 * n);
    let lattice = rotate(&LatticeBasis::scaled_identity(n, &BigRational::from_integer(k.into())), &o).unwrap();
    println!("public basis denominator: {}", lattice.denominator());
    let sol = solve_scaled_zlip(&lattice, k).unwrap();
    println!("solved by {:?}", sol.method);
    let image = rotate(&lattice, &sol.o_hat).unwrap();
    println!("image basis {:?}", image.canonical().basis());
}
