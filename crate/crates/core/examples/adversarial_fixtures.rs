//! Writes the negative-control fixture set: instance files that must be
//! rejected (plus two positive controls), and `expected.json` naming the
//! outcome each one must produce.
//!
//!     cargo run --example adversarial_fixtures -- crates/core/tests/fixtures/adversarial

use std::path::PathBuf;

use hullattack::cli::{gen_instance, write_json, InstanceFile, PublicLattices, SecretRotations};
use hullattack::codes::{is_lcd, random_free_lcd, random_matrix, LinearCode};
use hullattack::lattices::{construction_a, random_rational_orthogonal, rotate, LatticeBasis};
use hullattack::modring::ModMatrix;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn rotated(code: &LinearCode, l2_code: Option<&LinearCode>, seed: u64) -> InstanceFile {
    let n = code.len();
    let o1 = random_rational_orthogonal(n, seed, 2 * n);
    let o2 = random_rational_orthogonal(n, seed + 1, 2 * n);
    let l1 = rotate(&construction_a(code), &o1).unwrap().canonical();
    let l2 = rotate(&construction_a(l2_code.unwrap_or(code)), &o2).unwrap().canonical();
    InstanceFile {
        k: code.modulus(),
        n,
        m: code.generator().rows(),
        code: code.clone(),
        public: PublicLattices { l1, l2 },
        secret: Some(SecretRotations { o1, o2, seed }),
    }
}

fn code(k: u64, rows: &[Vec<i64>]) -> LinearCode {
    LinearCode::from_generator(&ModMatrix::from_i64_rows(k, rows))
}

fn random_non_lcd(k: u64, n: usize, seed: u64) -> LinearCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows = rng.gen_range(1..n);
        let c = LinearCode::from_generator(&random_matrix(&mut rng, k, rows, n));
        if !c.is_zero() && !is_lcd(&c) {
            return c;
        }
    }
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "adversarial".into()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut cases: Vec<(String, InstanceFile, Option<u64>, &str)> = Vec::new();
    let mut add = |name: &str, inst: InstanceFile, k: Option<u64>, expect: &'static str| {
        cases.push((name.to_string(), inst, k, expect));
    };

    add("nonlcd_z2_self_dual", rotated(&code(2, &[vec![1, 1]]), None, 1), None, "HullNotTrivial");
    add("nonlcd_z2_self_dual_k2", rotated(&code(2, &[vec![1, 1]]), None, 3), Some(2), "HullNotTrivial");
    add("nonlcd_z3_all_ones", rotated(&code(3, &[vec![1, 1, 1]]), None, 5), None, "HullNotTrivial");
    add("nonlcd_z5_isotropic", rotated(&code(5, &[vec![1, 2]]), None, 7), None, "HullNotTrivial");
    add("nonlcd_z6_hull_33", rotated(&code(6, &[vec![1, 1]]), None, 9), None, "HullNotTrivial");
    let tetracode = code(3, &[vec![1, 1, 1, 0], vec![0, 1, 2, 1]]);
    add("nonlcd_z3_tetracode", rotated(&tetracode, None, 11), None, "HullNotTrivial");
    let z5_self_dual = code(5, &[vec![1, 2, 0, 0], vec![0, 0, 1, 2]]);
    add("nonlcd_z5_self_dual", rotated(&z5_self_dual, None, 13), None, "HullNotTrivial");
    for (i, (k, n)) in [(3u64, 5usize), (5, 5), (7, 4), (9, 5), (10, 4), (15, 4), (6, 5), (2, 6)].into_iter().enumerate() {
        let c = random_non_lcd(k, n, 100 + i as u64);
        add(&format!("nonlcd_random_k{k}_n{n}"), rotated(&c, None, 200 + 2 * i as u64), None, "HullNotTrivial");
    }

    for (k, n, m) in [(4u64, 4usize, 2usize), (8, 4, 2), (12, 4, 2)] {
        let c = random_free_lcd(k, n, m, k).unwrap();
        add(&format!("modulus_k{k}"), rotated(&c, None, 300 + k), Some(k), "BadModulus");
    }
    let c = code(4, &[vec![1, 0]]);
    add("modulus_k4_recovered", rotated(&c, None, 320), None, "BadModulus");
    add("modulus_override_12", gen_instance(3, 5, 2, 7, 10).unwrap(), Some(12), "BadModulus");

    let n = 4;
    let z = LatticeBasis::scaled_identity(n, &BigRational::from_integer(1.into()));
    let mut zn = rotated(&LinearCode::full(3, n), None, 330);
    zn.public.l1 = rotate(&z, &random_rational_orthogonal(n, 331, 8)).unwrap().canonical();
    zn.public.l2 = rotate(&z, &random_rational_orthogonal(n, 332, 8)).unwrap().canonical();
    zn.secret = None;
    add("rotated_zn", zn, None, "NoCandidate");

    let (a, b) = (random_free_lcd(5, 5, 2, 1).unwrap(), random_free_lcd(5, 5, 3, 2).unwrap());
    add("covolume_mismatch", rotated(&a, Some(&b), 340), None, "NotIsomorphic");
    let (a, b) = (random_free_lcd(5, 6, 3, 3).unwrap(), random_free_lcd(5, 6, 3, 4).unwrap());
    add("inequivalent_codes_k5", rotated(&a, Some(&b), 350), None, "SpepFailed");
    let (a, b) = (random_free_lcd(6, 5, 2, 5).unwrap(), random_free_lcd(6, 5, 2, 6).unwrap());
    add("inequivalent_codes_k6", rotated(&a, Some(&b), 360), None, "SpepFailed");

    add("control_k3", gen_instance(3, 6, 3, 11, 12).unwrap(), None, "verified");
    add("control_k10", gen_instance(10, 6, 2, 12, 12).unwrap(), None, "verified");

    let mut expected = Vec::new();
    for (name, inst, k, expect) in &cases {
        let file = format!("{name}.json");
        write_json(&dir.join(&file), inst).unwrap();
        expected.push(json!({ "file": file, "k_override": k, "expect": expect }));
    }
    write_json(&dir.join("expected.json"), &expected).unwrap();
    println!("wrote {} fixtures to {}", cases.len(), dir.display());
}
