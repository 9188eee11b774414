//! Recovering k from the covolume when it is not supplied.
//!
//!     cargo run --example modulus_recovery

use hullattack::attack::{hull_attack, recover_modulus, AttackInstance};
use hullattack::codes::random_free_lcd;
use hullattack::lattices::{construction_a, random_rational_orthogonal, rotate};

fn main() {
    // k = 3, n = 6, m = 2: covolume 81 = 3^4 = 9^2 = 81^1.
    let c = random_free_lcd(3, 6, 2, 9).unwrap();
    let l = construction_a(&c);
    println!("candidates {:?}", recover_modulus(&l).unwrap());
    let l1 = rotate(&l, &random_rational_orthogonal(6, 1, 12)).unwrap();
    let l2 = rotate(&l, &random_rational_orthogonal(6, 2, 12)).unwrap();
    let r = hull_attack(&AttackInstance::new(l1, l2, None).unwrap()).unwrap();
    println!("{}", serde_json::to_string_pretty(&r.transcript.steps[0]).unwrap());
}
