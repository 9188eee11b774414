//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::HashSet;
use std::path::Path;
use std::time::{Duration, Instant};

use hullattack::cli::{attack_file, gen_instance, AttackOutput, InstanceFile, ResultFile};
use hullattack::codes::{
    apply_permutation, apply_signed_perm, dual, extended_signed_closure, hull, is_free_lcd, projection_matrix,
    random_free_lcd, random_matrix, signed_closure, ClosureMatrices, LinearCode,
};
use hullattack::equiv::{pep, spep, Permutation, SignedPerm};
use hullattack::lattices::{construction_a, lattice_equal, rotate, s_hull, LatticeBasis, RationalOrthogonal};
use hullattack::linalg::{det_int, RatMatrix};
use hullattack::modring::{free_basis, ModMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Words = HashSet<Vec<u64>>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn span(rows: &[Vec<u64>], k: u64, n: usize) -> Words {
    let mut set: Words = HashSet::from([vec![0; n]]);
    let mut frontier = vec![vec![0; n]];
    while let Some(v) = frontier.pop() {
        for r in rows {
            let w: Vec<u64> = v.iter().zip(r).map(|(a, b)| (a + b) % k).collect();
            if set.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    set
}

fn words(c: &LinearCode) -> Words {
    span(&c.generator().row_vecs(), c.modulus(), c.len())
}

fn dot(x: &[u64], y: &[u64], k: u64) -> u64 {
    x.iter().zip(y).map(|(a, b)| a * b % k).sum::<u64>() % k
}

fn orthogonal_part(ws: &Words, gens: &[Vec<u64>], k: u64) -> Words {
    ws.iter().filter(|w| gens.iter().all(|g| dot(w, g, k) == 0)).cloned().collect()
}

fn lcd_brute(c: &LinearCode) -> bool {
    let k = c.modulus();
    orthogonal_part(&words(c), &c.generator().row_vecs(), k).len() == 1
}

fn prime_powers(k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let (mut k, mut p) = (k, 2);
    while k > 1 {
        let mut a = 0;
        while k % p == 0 {
            k /= p;
            a += 1;
        }
        if a > 0 {
            out.push((p, a));
        }
        p += 1;
    }
    out
}

/// A finite `Z_k`-module is free iff each `p`-primary part `M_p`
/// satisfies `|M_p| = p^(a r_p)` with `p^(r_p) = |p^(a-1) M_p|`, and all
/// the ranks `r_p` agree.
fn free_brute(ws: &Words, k: u64) -> bool {
    let mut ranks = HashSet::new();
    let all_primary_free = prime_powers(k).into_iter().all(|(p, a)| {
        let pa = p.pow(a);
        let primary: Words = ws.iter().map(|w| w.iter().map(|x| x * (k / pa) % k).collect()).collect();
        let top: Words = primary.iter().map(|w| w.iter().map(|x| x * p.pow(a - 1) % k).collect()).collect();
        let r = top.len().ilog(p as usize);
        ranks.insert(r);
        primary.len() == top.len().pow(a)
    });
    all_primary_free && ranks.len() == 1
}

fn random_code(rng: &mut ChaCha8Rng, k: u64, n_max: usize) -> LinearCode {
    let n = rng.gen_range(1..=n_max);
    let rows = rng.gen_range(1..=n);
    LinearCode::from_generator(&random_matrix(rng, k, rows, n))
}

fn q(k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut v = p.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// `{ y : y[sigma(i)] = eps_i x_i }` applied to every generator row of `c2`
/// lands in `c1`, and the sizes agree.
fn maps_brute(c1: &Words, c2: &LinearCode, sigma: &[usize], signs: &[i64]) -> bool {
    let k = c2.modulus();
    c2.generator().row_vecs().iter().all(|r| {
        let mut y = vec![0; r.len()];
        for i in 0..r.len() {
            y[sigma[i]] = if signs[i] < 0 { (k - r[i]) % k } else { r[i] };
        }
        c1.contains(&y)
    })
}

fn equivalent_brute(c1: &LinearCode, c2: &LinearCode, signed: bool) -> bool {
    let w1 = words(c1);
    if w1.len() != words(c2).len() {
        return false;
    }
    let n = c1.len();
    let sign_sets: Vec<Vec<i64>> = if signed {
        (0..1u32 << n).map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
    } else {
        vec![vec![1; n]]
    };
    permutations(n).iter().any(|s| sign_sets.iter().any(|e| maps_brute(&w1, c2, s, e)))
}

fn lcd_pair(rng: &mut ChaCha8Rng, k: u64, n_max: usize, signed: bool) -> Option<(LinearCode, LinearCode)> {
    let n = rng.gen_range(1..=n_max);
    let m = rng.gen_range(1..=n);
    let c1 = random_free_lcd(k, n, m, rng.gen()).ok()?;
    let c2 = if rng.gen_bool(0.5) {
        let mut sigma: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            sigma.swap(i, rng.gen_range(0..=i));
        }
        let signs = (0..n).map(|_| if signed && rng.gen_bool(0.5) { -1 } else { 1 }).collect();
        let s = SignedPerm::new(Permutation::from_images(sigma).unwrap(), signs).unwrap();
        apply_signed_perm(&c1, &s).unwrap()
    } else {
        random_free_lcd(k, n, m, rng.gen()).ok()?
    };
    Some((c1, c2))
}

fn ac1_ac2(sample: &[LinearCode]) -> (Outcome, Outcome) {
    let mut bad1 = 0;
    let mut bad2 = 0;
    for c in sample {
        let k = c.modulus();
        let ws = words(c);
        let hull_words = orthogonal_part(&ws, &c.generator().row_vecs(), k);
        let h = hull(c);
        if words(&h) != hull_words || !lattice_equal(&s_hull(&construction_a(c), &q(k)).unwrap(), &construction_a(&h)) {
            bad1 += 1;
        }
        let d = dual(c);
        let all = span(&ModMatrix::identity(k, c.len()).row_vecs(), k, c.len());
        if words(&d) != orthogonal_part(&all, &c.generator().row_vecs(), k)
            || !lattice_equal(&construction_a(&d), &construction_a(c).dual().scale(&q(k)))
        {
            bad2 += 1;
        }
    }
    (
        outcome(bad1 == 0 && sample.len() >= 500, format!("{} codes, {bad1} failures", sample.len())),
        outcome(bad2 == 0 && sample.len() >= 500, format!("{} codes, {bad2} failures", sample.len())),
    )
}

fn ac3(corpus: &mut Vec<LinearCode>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut detail = Vec::new();
    let mut ok = true;
    for (name, ks) in [("odd", &[3u64, 5, 7, 9, 15][..]), ("extended", &[2u64, 6, 10][..])] {
        let (mut agree, mut t, mut f, mut oracle_bad) = (0, 0, 0, 0);
        for i in 0..300 {
            let k = ks[i % ks.len()];
            let c = random_code(&mut rng, k, 4);
            let cl = if name == "odd" { signed_closure(&c) } else { extended_signed_closure(&c).unwrap() };
            let (a, b) = (is_free_lcd(&c), is_free_lcd(&cl));
            agree += usize::from(a == b);
            if a {
                t += 1;
                corpus.push(c.clone());
            } else {
                f += 1;
            }
            let ws = words(&c);
            let brute = free_brute(&ws, k) && lcd_brute(&c);
            let cl_words = words(&cl);
            let brute_cl = free_brute(&cl_words, k)
                && orthogonal_part(&cl_words, &cl.generator().row_vecs(), k).len() == 1;
            oracle_bad += usize::from(brute != a || brute_cl != b);
        }
        ok &= agree == 300 && t > 0 && f > 0 && oracle_bad == 0;
        detail.push(format!("{name}: {agree}/300 agree ({t} free LCD, {f} not), {oracle_bad} oracle mismatches"));
    }
    outcome(ok, detail.join("; "))
}

fn ac4() -> Outcome {
    let (mut pairs, mut bad) = (0u64, 0u64);
    for k in 2..=10u64 {
        let m = k / 2;
        let extended = k % 4 == 2;
        if extended && (m * m + 2).gcd(&(2 * m)) != 1 {
            bad += 1;
        }
        for n in 1..=3usize {
            let all: Vec<Vec<u64>> = span(&ModMatrix::identity(k, n).row_vecs(), k, n).into_iter().collect();
            let cm = ClosureMatrices::new(n, k);
            let lift = |x: &[u64], t: &hullattack::linalg::IntMatrix| {
                ModMatrix::from_row_vecs(k, vec![x.to_vec()], n).mul_int(t).row(0).to_vec()
            };
            let cl: Vec<Vec<u64>> = all
                .iter()
                .map(|x| x.iter().flat_map(|&v| [v, (k - v) % k]).collect())
                .collect();
            let ext: Vec<Vec<u64>> = all
                .iter()
                .zip(&cl)
                .map(|(x, c)| c.iter().copied().chain(x.iter().map(|v| v * m % k)).collect())
                .collect();
            for (i, x) in all.iter().enumerate() {
                if lift(x, &cm.t) != cl[i] || (extended && lift(x, cm.t_m.as_ref().unwrap()) != ext[i]) {
                    bad += 1;
                }
            }
            for (i, x) in all.iter().enumerate() {
                for (j, y) in all.iter().enumerate() {
                    pairs += 1;
                    let d = dot(x, y, k);
                    bad += u64::from(dot(&cl[i], &cl[j], k) != 2 * d % k);
                    if extended {
                        bad += u64::from(dot(&ext[i], &ext[j], k) != (m * m + 2) * d % k);
                    }
                }
            }
        }
    }
    outcome(bad == 0, format!("{pairs} vector pairs, {bad} failures"))
}

fn ac5(corpus: &mut Vec<LinearCode>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ks = [2u64, 3, 5, 6];
    let (mut total, mut bad, mut yes, mut no) = (0, 0, 0, 0);
    while total < 240 {
        let k = ks[total % ks.len()];
        let Some((c1, c2)) = lcd_pair(&mut rng, k, 5, false) else { continue };
        total += 1;
        let truth = equivalent_brute(&c1, &c2, false);
        if truth {
            yes += 1;
        } else {
            no += 1;
        }
        let r = pep(&c1, &c2).unwrap();
        let sound = r.found().is_none_or(|e| {
            let s = e.as_signed();
            apply_permutation(&c2, &s.sigma).unwrap() == c1
        });
        bad += usize::from(r.is_equivalent() != truth || !sound);
        corpus.push(c1);
        corpus.push(c2);
    }
    outcome(bad == 0 && yes > 0 && no > 0, format!("{total} pairs ({yes} equivalent, {no} not), {bad} disagreements"))
}

fn ac6(corpus: &mut Vec<LinearCode>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ks = [3u64, 5, 6];
    let (mut total, mut bad, mut yes, mut no) = (0, 0, 0, 0);
    while total < 240 {
        let k = ks[total % ks.len()];
        let Some((c1, c2)) = lcd_pair(&mut rng, k, 4, true) else { continue };
        total += 1;
        let truth = equivalent_brute(&c1, &c2, true);
        if truth {
            yes += 1;
        } else {
            no += 1;
        }
        let r = spep(&c1, &c2).unwrap();
        let sound = r.found().is_none_or(|e| apply_signed_perm(&c2, &e.as_signed()).unwrap() == c1);
        bad += usize::from(r.is_equivalent() != truth || !sound);
        corpus.push(c1);
        corpus.push(c2);
    }
    outcome(bad == 0 && yes > 0 && no > 0, format!("{total} pairs ({yes} equivalent, {no} not), {bad} disagreements"))
}

fn ac7(corpus: &[LinearCode]) -> Outcome {
    let mut bad = 0;
    for c in corpus {
        let k = c.modulus();
        let p = projection_matrix(c).unwrap();
        let ws = words(c);
        let idempotent = p.mul(&p) == p;
        let symmetric = p.transpose() == p;
        let fixes = ws.iter().all(|w| &p.left_mul_vec(w) == w);
        let image = span(&p.row_vecs(), k, c.len()) == ws;
        bad += usize::from(!(idempotent && symmetric && fixes && image));
    }
    outcome(bad == 0 && !corpus.is_empty(), format!("{} free LCD codes, {bad} failures", corpus.len()))
}

fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ks = [3u64, 9, 27, 5, 25];
    let (mut sampled, mut bad) = (0, 0);
    let mut i = 0;
    while sampled < 250 {
        let k = ks[i % ks.len()];
        i += 1;
        let c = random_code(&mut rng, k, 4);
        if !lcd_brute(&c) {
            continue;
        }
        sampled += 1;
        let unit = free_basis(c.generator()).is_some_and(|g| {
            let gram = g.mul(&g.transpose()).lift();
            det_int(&gram).unwrap().gcd(&BigInt::from(k)).is_one()
        });
        bad += usize::from(!unit);
    }
    outcome(bad == 0, format!("{sampled} LCD codes, {bad} without a unit Gram determinant"))
}

/// Exact check independent of canonical forms: `rows(L2 O^T) = U rows(L1)`
/// with `U` integral and unimodular.
fn unimodular_image(l1: &LatticeBasis, l2: &LatticeBasis, o: &RatMatrix) -> bool {
    if o.mul(&o.transpose()) != RatMatrix::identity(o.rows()) {
        return false;
    }
    let u = l2.basis().mul(&o.transpose()).mul(&l1.basis().inverse().unwrap());
    u.to_int().is_ok_and(|u| det_int(&u).unwrap().abs().is_one())
}

fn ac9() -> Outcome {
    let ks = [3u64, 5, 9, 15, 2, 6, 10];
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [8usize, 12] {
        let jobs: Vec<(u64, u64)> = ks.iter().flat_map(|&k| (0..50u64).map(move |s| (k, s))).collect();
        let results: Vec<(u64, bool, Duration, String)> = jobs
            .par_iter()
            .map(|&(k, seed)| {
                let start = Instant::now();
                let m = 1 + (seed as usize) % (n / 2);
                let inst = gen_instance(k, n, m, 1000 * n as u64 + seed, 2 * n).unwrap();
                let text = serde_json::to_string(&inst).unwrap();
                let parsed: InstanceFile = serde_json::from_str(&text).unwrap();
                let (passed, why) = match attack_file(&parsed, None) {
                    AttackOutput::Result(r) => {
                        let back: ResultFile = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
                        let o = RationalOrthogonal::new(back.o_star.clone()).ok();
                        let exact = o.as_ref().is_some_and(|o| {
                            lattice_equal(&rotate(&parsed.public.l2, o).unwrap(), &parsed.public.l1)
                        });
                        let independent = unimodular_image(&parsed.public.l1, &parsed.public.l2, &back.o_star);
                        (back.verified && exact && independent, String::new())
                    }
                    AttackOutput::Error(e) => (false, format!("{}: {}", e.error.kind, e.error.message)),
                };
                (k, passed, start.elapsed(), why)
            })
            .collect();
        for &k in &ks {
            let mine: Vec<_> = results.iter().filter(|r| r.0 == k).collect();
            let wins = mine.iter().filter(|r| r.1).count();
            let worst = mine.iter().map(|r| r.2).max().unwrap();
            let limit = if n == 8 { Duration::from_secs(10) } else { Duration::from_secs(120) };
            let good = wins == mine.len() && mine.len() >= 50 && worst <= limit;
            ok &= good;
            let first_error = mine.iter().find(|r| !r.1).map(|r| format!(" first error: {}", r.3)).unwrap_or_default();
            lines.push(format!("n={n} k={k}: {wins}/{} (max {:.2}s){first_error}", mine.len(), worst.as_secs_f64()));
        }
    }
    outcome(ok, lines.join("; "))
}

fn ac10() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/adversarial");
    let expected: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(dir.join("expected.json")).unwrap()).unwrap();
    let (mut negatives, mut bad, mut unverified) = (0, Vec::new(), 0);
    for e in &expected {
        let file = e["file"].as_str().unwrap();
        let want = e["expect"].as_str().unwrap();
        let k = e["k_override"].as_u64();
        let inst: InstanceFile = serde_json::from_str(&std::fs::read_to_string(dir.join(file)).unwrap()).unwrap();
        let got = match attack_file(&inst, k) {
            AttackOutput::Result(r) => {
                let really = unimodular_image(&inst.public.l1, &inst.public.l2, &r.o_star);
                if !(r.verified && really) {
                    unverified += 1;
                }
                "verified".to_string()
            }
            AttackOutput::Error(err) => err.error.kind,
        };
        if want != "verified" {
            negatives += 1;
        }
        if got != want {
            bad.push(format!("{file}: wanted {want}, got {got}"));
        }
    }
    let hull_cases = expected.iter().filter(|e| e["expect"] == "HullNotTrivial").count();
    let modulus_cases = expected.iter().filter(|e| e["expect"] == "BadModulus").count();
    outcome(
        bad.is_empty() && unverified == 0 && negatives >= 20 && hull_cases > 0 && modulus_cases > 0,
        format!(
            "{} files ({negatives} negative: {hull_cases} HullNotTrivial, {modulus_cases} BadModulus), {} mismatches, {unverified} unverified outputs{}",
            expected.len(),
            bad.len(),
            bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()
        ),
    )
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sample: Vec<LinearCode> = (0..520).map(|i| random_code(&mut rng, 2 + (i % 8) as u64, 4)).collect();
    let mut corpus = Vec::new();

    let mut report: Vec<(&str, Outcome, Duration, Duration)> = Vec::new();
    let start = Instant::now();
    let (o1, o2) = ac1_ac2(&sample);
    let t = start.elapsed();
    report.push(("AC1 s-hull of Construction A equals Construction A of the hull", o1, t, Duration::from_secs(60)));
    report.push(("AC2 Construction A of the dual equals k times the dual lattice", o2, t, Duration::from_secs(60)));
    let mut timed = |name, limit: u64, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        report.push((name, o, start.elapsed(), Duration::from_secs(limit)));
    };
    timed("AC3 closures preserve free LCD in both directions", 120, &mut || ac3(&mut corpus));
    timed("AC4 closure inner-product identities", 60, &mut ac4);
    timed("AC5 pep agrees with brute-force permutation search", 300, &mut || ac5(&mut corpus));
    timed("AC6 spep agrees with brute-force signed search", 300, &mut || ac6(&mut corpus));
    let projection_corpus: Vec<LinearCode> = corpus.iter().filter(|c| is_free_lcd(c)).cloned().collect();
    timed("AC7 projection laws", 60, &mut || ac7(&projection_corpus));
    timed("AC8 LCD codes over odd prime powers have unit Gram determinant", 60, &mut ac8);
    timed("AC9 end-to-end gen, attack, verify at n = 8 and n = 12", 7 * 50 * (10 + 120), &mut ac9);
    timed("AC10 negative controls on the adversarial fixtures", 60, &mut ac10);

    let mut all = true;
    for (name, o, elapsed, limit) in &report {
        let passed = o.passed && elapsed <= limit;
        all &= passed;
        let status = if passed { "PASS" } else { "FAIL" };
        println!("{status} {name} [{:.1}s] {}", elapsed.as_secs_f64(), o.detail);
    }
    let seconds: f64 = report.iter().skip(1).map(|r| r.2.as_secs_f64()).sum();
    println!("{} of {} criteria passed in {seconds:.1}s", report.iter().filter(|r| r.1.passed && r.2 <= r.3).count(), report.len());
    if !all {
        std::process::exit(1);
    }
}
