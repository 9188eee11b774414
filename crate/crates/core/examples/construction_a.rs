//! Construction A lattices, their duals and s-hulls.
//!
//!     cargo run --example construction_a

use hullattack::codes::{dual, hull, is_lcd, LinearCode};
use hullattack::lattices::{construction_a, lattice_equal, s_hull};
use hullattack::modring::ModMatrix;
use num_rational::BigRational;

fn show(name: &str, c: &LinearCode) {
    let l = construction_a(c);
    println!("{name}: k = {}, |C| = {}, lcd = {}", c.modulus(), c.size(), is_lcd(c));
    println!("  basis {:?}", l.basis());
    println!("  covolume {}", l.covolume());
    let k = BigRational::from_integer(c.modulus().into());
    let h = s_hull(&l, &k).unwrap();
    println!("  H_k(L) {:?}", h.basis());
    println!("  H_k(L) = A(hull(C)): {}", lattice_equal(&h, &construction_a(&hull(c))));
    println!("  A(dual(C)) = k L*: {}", lattice_equal(&construction_a(&dual(c)), &l.dual().scale(&k)));
}

fn main() {
    let lcd = LinearCode::from_generator(&ModMatrix::from_i64_rows(5, &[vec![1, 0, 2, 1], vec![0, 1, 1, 3]]));
    show("free LCD over Z_5", &lcd);
    let self_dual = LinearCode::from_generator(&ModMatrix::from_i64_rows(3, &[vec![1, 1, 1, 0], vec![0, 1, 2, 1]]));
    show("tetracode over Z_3", &self_dual);
}
