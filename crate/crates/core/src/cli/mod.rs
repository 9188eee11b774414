//! File formats and commands behind the `hullattack` binary.

mod selftest;

use std::fs;
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attack::{hull_attack, verify_isomorphism, verify_matrix, AttackInstance, Transcript};
use crate::codes::{random_free_lcd, LinearCode};
use crate::error::{Error, Result};
use crate::lattices::{construction_a, lattice_equal, random_rational_orthogonal, rotate, LatticeBasis, RationalOrthogonal};
use crate::linalg::RatMatrix;

pub use selftest::{cmd_selftest, selftest_with, Level, SelftestReport, SuiteResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_ATTACK_FAILED: i32 = 3;
pub const EXIT_UNVERIFIED: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicLattices {
    #[serde(rename = "L1")]
    pub l1: LatticeBasis,
    #[serde(rename = "L2")]
    pub l2: LatticeBasis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretRotations {
    #[serde(rename = "O1")]
    pub o1: RationalOrthogonal,
    #[serde(rename = "O2")]
    pub o2: RationalOrthogonal,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub k: u64,
    pub n: usize,
    pub m: usize,
    pub code: LinearCode,
    pub public: PublicLattices,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<SecretRotations>,
}

impl InstanceFile {
    /// Structural checks on a parsed file.
    pub fn validate(&self) -> Result<()> {
        let (l1, l2) = (&self.public.l1, &self.public.l2);
        if l1.n() != self.n || l2.n() != self.n {
            return Err(Error::Parse(format!("n = {} but lattices have dimension {} and {}", self.n, l1.n(), l2.n())));
        }
        if let Some(s) = &self.secret {
            if s.o1.n() != self.n || s.o2.n() != self.n {
                return Err(Error::Parse("secret rotations have the wrong size".into()));
            }
        }
        Ok(())
    }

    /// True when the secret rotations reproduce the public lattices.
    pub fn secret_consistent(&self) -> Option<bool> {
        let s = self.secret.as_ref()?;
        let base = construction_a(&self.code);
        let ok = |o: &RationalOrthogonal, l: &LatticeBasis| rotate(&base, o).is_ok_and(|r| lattice_equal(&r, l));
        Some(ok(&s.o1, &self.public.l1) && ok(&s.o2, &self.public.l2))
    }

    pub fn attack_instance(&self, k_override: Option<u64>) -> AttackInstance {
        AttackInstance { k: k_override, l1: self.public.l1.clone(), l2: self.public.l2.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub o_star: RatMatrix,
    pub verified: bool,
    pub transcript: Transcript,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo { kind: e.kind().into(), message: e.to_string() }
    }
}

/// Written in place of a [`ResultFile`] when the attack fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub error: ErrorInfo,
    pub transcript: Transcript,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AttackOutput {
    Result(ResultFile),
    Error(ErrorRecord),
}

impl AttackOutput {
    pub fn exit_code(&self) -> i32 {
        match self {
            AttackOutput::Result(r) if r.verified => EXIT_OK,
            AttackOutput::Result(_) => EXIT_UNVERIFIED,
            AttackOutput::Error(_) => EXIT_ATTACK_FAILED,
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let inst: InstanceFile = read_json(path)?;
    inst.validate()?;
    Ok(inst)
}

/// Deterministic instance: a random free LCD code and two random rotations
/// of its Construction A lattice, published in canonical form.
pub fn gen_instance(k: u64, n: usize, m: usize, seed: u64, depth: usize) -> Result<InstanceFile> {
    if k < 2 || k % 4 == 0 {
        return Err(Error::BadModulus { k });
    }
    if m == 0 || m > n {
        return Err(Error::DimensionMismatch(format!("rank {m} outside 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (code_seed, o1_seed, o2_seed) = (rng.next_u64(), rng.next_u64(), rng.next_u64());
    let code = random_free_lcd(k, n, m, code_seed)?;
    let base = construction_a(&code);
    let o1 = random_rational_orthogonal(n, o1_seed, depth);
    let o2 = random_rational_orthogonal(n, o2_seed, depth);
    let l1 = rotate(&base, &o1)?.canonical();
    let l2 = rotate(&base, &o2)?.canonical();
    Ok(InstanceFile {
        k,
        n,
        m,
        code,
        public: PublicLattices { l1, l2 },
        secret: Some(SecretRotations { o1, o2, seed }),
    })
}

pub fn cmd_gen(k: u64, n: usize, m: usize, seed: u64, depth: usize, out: &Path) -> Result<InstanceFile> {
    let inst = gen_instance(k, n, m, seed, depth)?;
    write_json(out, &inst)?;
    Ok(inst)
}

/// Attacks a parsed instance; the secret part is never consulted.
pub fn attack_file(inst: &InstanceFile, k_override: Option<u64>) -> AttackOutput {
    let ai = inst.attack_instance(k_override);
    match hull_attack(&ai) {
        Ok(r) => {
            let verified = verify_isomorphism(&ai.l1, &ai.l2, &r.o_star);
            AttackOutput::Result(ResultFile { o_star: r.o_star.into(), verified, transcript: r.transcript })
        }
        Err(f) => AttackOutput::Error(ErrorRecord { error: ErrorInfo::from(&f.error), transcript: f.transcript }),
    }
}

/// Reads, attacks and writes; parse and I/O problems are the only errors.
pub fn cmd_attack(in_path: &Path, out_path: &Path, k_override: Option<u64>) -> Result<AttackOutput> {
    let inst = read_instance(in_path)?;
    let out = attack_file(&inst, k_override);
    match &out {
        AttackOutput::Result(r) => write_json(out_path, r)?,
        AttackOutput::Error(e) => write_json(out_path, e)?,
    }
    Ok(out)
}

pub fn cmd_verify(instance_path: &Path, result_path: &Path) -> Result<bool> {
    let inst = read_instance(instance_path)?;
    let result: ResultFile = read_json(result_path)?;
    let o = &result.o_star;
    if o.rows() != inst.n || o.cols() != inst.n {
        return Err(Error::Parse(format!("o_star is {}x{} for an instance of dimension {}", o.rows(), o.cols(), inst.n)));
    }
    Ok(verify_matrix(&inst.public.l1, &inst.public.l2, o))
}

/// Attacks each input on a pool of `jobs` threads, writing
/// `<stem>.result.json` into `out_dir`. Returns the exit code per input.
pub fn cmd_attack_batch(
    inputs: &[PathBuf],
    out_dir: &Path,
    k_override: Option<u64>,
    jobs: usize,
) -> Result<Vec<(PathBuf, i32)>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(pool.install(|| {
        inputs
            .par_iter()
            .map(|p| {
                let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let out = out_dir.join(format!("{stem}.result.json"));
                let code = match cmd_attack(p, &out, k_override) {
                    Ok(o) => o.exit_code(),
                    Err(_) => EXIT_BAD_INPUT,
                };
                (p.clone(), code)
            })
            .collect()
    }))
}
