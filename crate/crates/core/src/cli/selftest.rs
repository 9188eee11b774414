use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attack::{hull_attack, verify_isomorphism};
use crate::codes::{
    apply_permutation, apply_signed_perm, dot_mod, dual, extended_signed_closure, hull, is_free_lcd, is_lcd,
    maps_onto, projection_matrix, random_free_lcd, random_matrix, signed_closure, ClosureMatrices, LinearCode,
};
use crate::equiv::{brute_force_pep, brute_force_spep, closure_permutation, pep, spep, ClosureMode, SignedPerm};
use crate::lattices::{construction_a, lattice_equal, random_signed_perm, s_hull};
use crate::modring::{free_basis, is_unit_det, ModMatrix};

use super::{gen_instance, EXIT_OK, EXIT_UNVERIFIED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

struct Params {
    k_max: u64,
    n_max: usize,
    samples: usize,
    e2e: &'static [(usize, usize)],
}

impl Level {
    fn params(self) -> Params {
        match self {
            Level::Quick => Params { k_max: 6, n_max: 3, samples: 40, e2e: &[(4, 2)] },
            Level::Full => Params { k_max: 9, n_max: 4, samples: 150, e2e: &[(4, 3), (8, 3), (12, 2)] },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub elapsed_ms: u128,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub level: Level,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_OK
        } else {
            EXIT_UNVERIFIED
        }
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24} {:>7} {:>8} {:>9}  status", "suite", "cases", "failures", "ms")?;
        for s in &self.suites {
            let status = if s.passed() { "pass" } else { "FAIL" };
            writeln!(f, "{:<24} {:>7} {:>8} {:>9}  {status}", s.name, s.cases, s.failures, s.elapsed_ms)?;
            if let Some(d) = &s.first_failure {
                writeln!(f, "    first failure: {d}")?;
            }
        }
        Ok(())
    }
}

struct Suite {
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Suite {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(detail);
        }
    }
}

fn run(name: &'static str, body: impl FnOnce(&mut Suite)) -> SuiteResult {
    let start = Instant::now();
    let mut s = Suite { cases: 0, failures: 0, first_failure: None };
    body(&mut s);
    SuiteResult {
        name,
        cases: s.cases,
        failures: s.failures,
        elapsed_ms: start.elapsed().as_millis(),
        first_failure: s.first_failure,
    }
}

fn random_code(rng: &mut ChaCha8Rng, k: u64, n: usize) -> LinearCode {
    let rows = rng.gen_range(1..=n);
    LinearCode::from_generator(&random_matrix(rng, k, rows, n))
}

fn random_code_upto(rng: &mut ChaCha8Rng, k: u64, n_max: usize) -> LinearCode {
    let n = rng.gen_range(1..=n_max);
    random_code(rng, k, n)
}

fn random_lcd_pair(rng: &mut ChaCha8Rng, k: u64, n_max: usize, signed: bool) -> Option<(LinearCode, LinearCode)> {
    let n = rng.gen_range(1..=n_max);
    let m = rng.gen_range(1..=n);
    let c1 = random_free_lcd(k, n, m, rng.gen()).ok()?;
    let c2 = if rng.gen_bool(0.5) {
        let s = random_signed_perm(rng, n);
        let s = if signed { s } else { SignedPerm::from_permutation(s.sigma) };
        apply_signed_perm(&c1, &s).ok()?
    } else {
        random_free_lcd(k, n, m, rng.gen()).ok()?
    };
    Some((c1, c2))
}

fn all_vectors(k: u64, n: usize) -> Vec<Vec<u64>> {
    (0..k.pow(n as u32))
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let d = x % k;
                    x /= k;
                    d
                })
                .collect()
        })
        .collect()
}

fn times(v: &[u64], t: &crate::linalg::IntMatrix, k: u64) -> Vec<u64> {
    ModMatrix::from_row_vecs(k, vec![v.to_vec()], v.len()).mul_int(t).row(0).to_vec()
}

/// Runs the suites with `closure` standing in for the signed closure, so
/// that a broken closure can be shown to be caught.
pub fn selftest_with(level: Level, closure: fn(&LinearCode) -> LinearCode) -> SelftestReport {
    let p = level.params();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut seed = move || rng.gen::<u64>();
    let ks: Vec<u64> = (2..=p.k_max).collect();
    let mut suites = Vec::new();

    let mut r = ChaCha8Rng::seed_from_u64(seed());
    suites.push(run("hull_lattice", |s| {
        for _ in 0..p.samples {
            let k = ks[r.gen_range(0..ks.len())];
            let c = random_code_upto(&mut r, k, p.n_max);
            let kq = BigRational::from_integer(BigInt::from(k));
            let got = s_hull(&construction_a(&c), &kq).map(|h| lattice_equal(&h, &construction_a(&hull(&c))));
            s.check(got == Ok(true), || format!("k = {k}, code {:?}", c.generator()));
        }
    }));

    let mut r = ChaCha8Rng::seed_from_u64(seed());
    suites.push(run("dual_lattice", |s| {
        for _ in 0..p.samples {
            let k = ks[r.gen_range(0..ks.len())];
            let c = random_code_upto(&mut r, k, p.n_max);
            let kq = BigRational::from_integer(BigInt::from(k));
            let ok = lattice_equal(&construction_a(&dual(&c)), &construction_a(&c).dual().scale(&kq));
            s.check(ok, || format!("k = {k}, code {:?}", c.generator()));
        }
    }));

    let mut r = ChaCha8Rng::seed_from_u64(seed());
    suites.push(run("signed_closure", |s| {
        let odd: Vec<u64> = ks.iter().copied().filter(|k| k % 2 == 1).collect();
        for _ in 0..p.samples {
            let k = odd[r.gen_range(0..odd.len())];
            let n = r.gen_range(1..=p.n_max);
            let c = random_code(&mut r, k, n);
            let cl = closure(&c);
            s.check(is_free_lcd(&c) == is_free_lcd(&cl), || format!("LCD status differs, k = {k}, {:?}", c.generator()));
            let sp = random_signed_perm(&mut r, n);
            let moved = closure(&apply_signed_perm(&c, &sp).expect("same length"));
            let tau = closure_permutation(&sp, ClosureMode::Signed2n);
            let ok = apply_permutation(&cl, &tau).is_ok_and(|x| x == moved);
            s.check(ok, || format!("closure does not intertwine {sp:?}, k = {k}, {:?}", c.generator()));
        }
    }));

    let mut r = ChaCha8Rng::seed_from_u64(seed());
    suites.push(run("extended_closure", |s| {
        let even: Vec<u64> = ks.iter().copied().filter(|k| k % 4 == 2).collect();
        for _ in 0..p.samples {
            let k = even[r.gen_range(0..even.len())];
            let n = r.gen_range(1..=p.n_max);
            let c = random_code(&mut r, k, n);
            let cl = extended_signed_closure(&c).expect("k = 2 mod 4");
            s.check(is_free_lcd(&c) == is_free_lcd(&cl), || format!("LCD status differs, k = {k}, {:?}", c.generator()));
            let sp = random_signed_perm(&mut r, n);
            let moved = extended_signed_closure(&apply_signed_perm(&c, &sp).expect("same length")).expect("k = 2 mod 4");
            let tau = closure_permutation(&sp, ClosureMode::Extended3n);
            let ok = apply_permutation(&cl, &tau).is_ok_and(|x| x == moved);
            s.check(ok, || format!("extended closure does not intertwine {sp:?}, k = {k}"));
        }
    }));

    suites.push(run("closure_inner_product", |s| {
        for &k in &ks {
            let n = if k <= 6 { 2 } else { 1 };
            let cm = ClosureMatrices::new(n, k);
            let vs = all_vectors(k, n);
            let imgs: Vec<Vec<u64>> = vs.iter().map(|v| times(v, &cm.t, k)).collect();
            let ext: Option<Vec<Vec<u64>>> = cm.t_m.as_ref().map(|t| vs.iter().map(|v| times(v, t, k)).collect());
            let m = k / 2;
            for (i, x) in vs.iter().enumerate() {
                for (j, y) in vs.iter().enumerate() {
                    let d = dot_mod(x, y, k);
                    s.check(dot_mod(&imgs[i], &imgs[j], k) == 2 * d % k, || format!("signed, k = {k}, {x:?}, {y:?}"));
                    if let Some(e) = &ext {
                        let want = (m * m + 2) % k * d % k;
                        s.check(dot_mod(&e[i], &e[j], k) == want, || format!("extended, k = {k}, {x:?}, {y:?}"));
                    }
                }
            }
        }
    }));

    let mut r = ChaCha8Rng::seed_from_u64(seed());
    suites.push(run("pep_oracle", |s| {
        let kk = [2u64, 3, 5, 6];
        let mut done = 0;
        while done < p.samples / 2 {
            let k = kk[r.gen_range(0..kk.len())];
            let Some((c1, c2)) = random_lcd_pair(&mut r, k, p.n_max, false) else { continue };
            done += 1;
            let (fast, slow) = (pep(&c1, &c2), brute_force_pep(&c1, &c2));
            let ok = match (&fast, &slow) {
                (Ok(a), Ok(b)) => {
                    a.is_equivalent() == b.is_equivalent()
                        && a.found().is_none_or(|e| maps_onto(&c1, &c2, &e.as_signed()))
                }
                _ => false,
            };
            s.check(ok, || format!("k = {k}: {:?} vs {:?}", fast.map(|x| x.outcome), slow.map(|x| x.outcome)));
        }
    }));

    let mut r = ChaCha8Rng::seed_from_u64(seed());
    suites.push(run("spep_oracle", |s| {
        let kk: Vec<u64> = ks.iter().copied().filter(|k| k % 4 != 0 && [3, 5, 6].contains(k)).collect();
        let mut done = 0;
        while done < p.samples / 2 {
            let k = kk[r.gen_range(0..kk.len())];
            let Some((c1, c2)) = random_lcd_pair(&mut r, k, p.n_max, true) else { continue };
            done += 1;
            let (fast, slow) = (spep(&c1, &c2), brute_force_spep(&c1, &c2));
            let ok = match (&fast, &slow) {
                (Ok(a), Ok(b)) => {
                    a.is_equivalent() == b.is_equivalent()
                        && a.found().is_none_or(|e| apply_signed_perm(&c2, &e.as_signed()).is_ok_and(|x| x == c1))
                }
                _ => false,
            };
            s.check(ok, || format!("k = {k}: {:?} vs {:?}", fast.map(|x| x.outcome), slow.map(|x| x.outcome)));
        }
    }));

    let mut r = ChaCha8Rng::seed_from_u64(seed());
    suites.push(run("projection", |s| {
        for _ in 0..p.samples {
            let k = ks[r.gen_range(0..ks.len())];
            let n = r.gen_range(1..=p.n_max);
            let Ok(c) = random_free_lcd(k, n, r.gen_range(1..=n), r.gen()) else { continue };
            let pm = projection_matrix(&c).expect("free LCD");
            let g = free_basis(c.generator()).expect("free");
            let ok = pm.mul(&pm) == pm
                && pm.is_symmetric()
                && g.mul(&pm) == g
                && LinearCode::from_generator(&pm) == c;
            s.check(ok, || format!("k = {k}, code {:?}", c.generator()));
        }
    }));

    let mut r = ChaCha8Rng::seed_from_u64(seed());
    suites.push(run("prime_power_lcd", |s| {
        let pp: &[u64] = if level == Level::Quick { &[3, 5, 9] } else { &[3, 9, 27, 5, 25] };
        let mut done = 0;
        while done < p.samples {
            let k = pp[r.gen_range(0..pp.len())];
            let c = random_code_upto(&mut r, k, p.n_max);
            if c.is_zero() || !is_lcd(&c) {
                continue;
            }
            done += 1;
            let ok = free_basis(c.generator()).is_some_and(|g| is_unit_det(&g.mul(&g.transpose())) == Ok(true));
            s.check(ok, || format!("k = {k}, code {:?}", c.generator()));
        }
    }));

    suites.push(run("end_to_end", |s| {
        for &(n, per_k) in p.e2e {
            for k in [3u64, 5, 9, 15, 2, 6, 10] {
                for i in 0..per_k {
                    let sd = seed();
                    let inst = gen_instance(k, n, (n / 2).max(1), sd, 2 * n).expect("valid parameters");
                    let ai = inst.attack_instance(None);
                    let res = hull_attack(&ai);
                    let ok = res.as_ref().is_ok_and(|r| verify_isomorphism(&ai.l1, &ai.l2, &r.o_star));
                    s.check(ok, || {
                        format!("k = {k}, n = {n}, instance {i}: {:?}", res.err().map(|f| f.error.to_string()))
                    });
                }
            }
        }
    }));

    SelftestReport { level, suites }
}

pub fn cmd_selftest(level: Level) -> SelftestReport {
    selftest_with(level, signed_closure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unsigned_closure(c: &LinearCode) -> LinearCode {
        let t = ClosureMatrices::new(c.len(), c.modulus()).t;
        let mut doubled = crate::linalg::IntMatrix::zeros(t.rows(), t.cols());
        for i in 0..t.rows() {
            for j in 0..t.cols() {
                doubled[(i, j)] = t[(i, j)].clone() * t[(i, j)].clone();
            }
        }
        LinearCode::from_generator(&c.generator().mul_int(&doubled))
    }

    #[test]
    fn broken_closure_sign_is_caught() {
        let report = selftest_with(Level::Quick, unsigned_closure);
        assert!(!report.suite("signed_closure").unwrap().passed());
        assert!(report.suite("hull_lattice").unwrap().passed());
    }
}
