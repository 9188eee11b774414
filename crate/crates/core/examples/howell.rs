//! Row modules over Z/kZ: Howell form, kernels, Smith form and freeness.
//!
//!     cargo run --example howell

use hullattack::modring::{free_basis, free_rank, howell_form, kernel_mod, smith_mod, ModMatrix};

fn main() {
    let k = 12;
    let m = ModMatrix::from_i64_rows(k, &[vec![2, 4, 6], vec![3, 3, 0], vec![6, 0, 6]]);
    println!("M = {m:?}");
    let h = howell_form(&m);
    println!("Howell form {h:?}, module size {}", h.howell_module_size());
    let ker = kernel_mod(&m);
    println!("annihilator rows {ker:?}, size {}", ker.howell_module_size());
    let s = smith_mod(&m);
    println!("invariants {:?}", s.invariants);
    println!("free rank {:?}", free_rank(&m));

    let f = ModMatrix::from_i64_rows(k, &[vec![1, 5, 7], vec![0, 1, 11]]);
    println!("F = {f:?}: free rank {:?}, basis {:?}", free_rank(&f), free_basis(&f));
}
