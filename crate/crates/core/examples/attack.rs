//! End-to-end hull attack on a generated instance.
//!
//!     cargo run --release --example attack -- 5 12 4
//!     cargo run --release --example attack -- 10 12 4

use std::time::Instant;

use hullattack::attack::{hull_attack, verify_isomorphism, Step};
use hullattack::cli::gen_instance;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().unwrap());
    let k = args.next().unwrap_or(5);
    let n = args.next().unwrap_or(8) as usize;
    let m = args.next().unwrap_or(3) as usize;
    let inst = gen_instance(k, n, m, 2024, 2 * n).unwrap();
    let ai = inst.attack_instance(None);
    let start = Instant::now();
    let r = match hull_attack(&ai) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("attack failed: {f}");
            std::process::exit(3);
        }
    };
    println!("attack took {:?}", start.elapsed());
    for s in &r.transcript.steps {
        match s {
            Step::Modulus { covolume, candidates, validated, .. } => {
                println!("covolume {covolume}, candidates {candidates:?}, validated {validated:?}")
            }
            Step::Zlip { lattice, solution } => println!("lattice {lattice}: ZLIP by {:?}", solution.method),
            Step::DetReading { m, covolume_matches, gram_matches, .. } => {
                println!("rank {m:?}: covolume reading {covolume_matches}, Gram reading {gram_matches}")
            }
            Step::Spep { mode, stats, signed_perm } => println!("{mode:?}: {stats:?}, {signed_perm:?}"),
            _ => {}
        }
    }
    println!("verified: {}", verify_isomorphism(&ai.l1, &ai.l2, &r.o_star));
    println!("replay matches: {}", r.transcript.replay().unwrap() == r.o_star);
}
