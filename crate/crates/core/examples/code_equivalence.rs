//! Permutation and signed permutation equivalence of free LCD codes via
//! weighted graph isomorphism on projection matrices.
//!
//!     cargo run --example code_equivalence

use hullattack::codes::{apply_signed_perm, projection_matrix, random_free_lcd, signed_closure};
use hullattack::equiv::{graph_from_projection, pep, spep, Permutation, SignedPerm};

fn main() {
    let c = random_free_lcd(7, 6, 3, 1).unwrap();
    let secret = SignedPerm::new(Permutation::from_images(vec![3, 0, 5, 1, 2, 4]).unwrap(), vec![1, -1, -1, 1, 1, -1]).unwrap();
    let moved = apply_signed_perm(&c, &secret).unwrap();
    println!("projection of C: {:?}", projection_matrix(&c).unwrap());
    println!("graph order {}", graph_from_projection(&projection_matrix(&c).unwrap()).unwrap().order());
    println!("closure length {}", signed_closure(&c).len());

    let r = spep(&moved, &c).unwrap();
    let found = r.found().unwrap().as_signed();
    println!("spep: {found:?} after {:?}", r.stats);
    println!("same action as the secret: {}", apply_signed_perm(&c, &found).unwrap() == moved);

    let plain = apply_signed_perm(&c, &SignedPerm::from_permutation(secret.sigma.clone())).unwrap();
    println!("pep: {:?}", pep(&plain, &c).unwrap().found());
    let other = random_free_lcd(7, 6, 3, 2).unwrap();
    println!("unrelated code: {:?}", spep(&other, &c).unwrap().outcome);
}
