//! The hull attack: from two rotated Construction A lattices to an exact
//! isomorphism between them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::equiv::{spep, ClosureMode, Outcome, SearchStats, SignedPerm};
use crate::error::{Error, Result};
use crate::lattices::{lattice_equal, mod_reduce_to_code, rotate, s_hull, LatticeBasis, RationalOrthogonal};
use crate::linalg::RatMatrix;
use crate::zlip::{solve_scaled_zlip, ZlipSolution};

/// A pair of lattices to be matched, with the modulus optionally supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackInstance {
    pub k: Option<u64>,
    pub l1: LatticeBasis,
    pub l2: LatticeBasis,
}

impl AttackInstance {
    pub fn new(l1: LatticeBasis, l2: LatticeBasis, k: Option<u64>) -> Result<Self> {
        if l1.n() != l2.n() {
            return Err(Error::DimensionMismatch(format!("lattices of dimension {} and {}", l1.n(), l2.n())));
        }
        Ok(AttackInstance { k, l1, l2 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub k: u64,
    pub m: usize,
}

/// One record of the attack transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Modulus {
        covolume: String,
        gram_determinant: String,
        supplied: Option<u64>,
        candidates: Vec<Candidate>,
        validated: Vec<u64>,
    },
    Hull {
        lattice: u8,
        k: u64,
        basis: LatticeBasis,
    },
    Zlip {
        lattice: u8,
        solution: ZlipSolution,
    },
    Code {
        lattice: u8,
        code: LinearCode,
    },
    /// Which determinant reading matches `k^(n-m)` for the recovered code.
    DetReading {
        k: u64,
        m: Option<usize>,
        covolume_matches: bool,
        gram_matches: bool,
    },
    Spep {
        mode: ClosureMode,
        stats: SearchStats,
        signed_perm: SignedPerm,
    },
    Compose {
        o_star: RationalOrthogonal,
        verified: bool,
    },
    Failure {
        k: Option<u64>,
        kind: String,
        message: String,
    },
}

/// Ordered record of an attack run; serializes as a JSON array.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transcript {
    pub steps: Vec<Step>,
}

impl Transcript {
    fn push(&mut self, s: Step) {
        self.steps.push(s);
    }

    /// Recomputes `o_star` from the last recorded rotations and signed
    /// permutation, checking it against the recorded value.
    pub fn replay(&self) -> Result<RationalOrthogonal> {
        let mut o_hat: [Option<&RationalOrthogonal>; 2] = [None, None];
        let mut signed = None;
        let mut recorded = None;
        for s in &self.steps {
            match s {
                Step::Zlip { lattice, solution } => o_hat[(*lattice - 1) as usize] = Some(&solution.o_hat),
                Step::Spep { signed_perm, .. } => signed = Some(signed_perm),
                Step::Compose { o_star, .. } => recorded = Some(o_star),
                _ => {}
            }
        }
        let missing = |what: &str| Error::Parse(format!("transcript has no {what}"));
        let o1 = o_hat[0].ok_or_else(|| missing("rotation for lattice 1"))?;
        let o2 = o_hat[1].ok_or_else(|| missing("rotation for lattice 2"))?;
        let s = signed.ok_or_else(|| missing("signed permutation"))?;
        let o_star = compose_isomorphism(o1, o2, s);
        match recorded {
            Some(r) if *r == o_star => Ok(o_star),
            Some(_) => Err(Error::VerificationFailed("replayed o_star differs from the recorded one".into())),
            None => Err(missing("composed isomorphism")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackResult {
    pub o_star: RationalOrthogonal,
    pub transcript: Transcript,
}

/// An attack error together with the transcript up to the failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackFailure {
    pub error: Error,
    pub transcript: Transcript,
}

impl fmt::Display for AttackFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for AttackFailure {}

impl From<AttackFailure> for Error {
    fn from(f: AttackFailure) -> Self {
        f.error
    }
}

fn big_pow(k: u64, e: usize) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(k), e))
}

/// All `(k, m)` with `k^(n-m) = |det L|`, `k >= 2`, `0 <= m < n`, by
/// increasing `k`.
pub fn recover_modulus(l: &LatticeBasis) -> Result<Vec<Candidate>> {
    let d = l.covolume();
    if !d.is_integer() {
        return Err(Error::NoCandidate(format!("covolume {d} is not an integer")));
    }
    let d = d.to_integer();
    if d.is_one() {
        return Err(Error::NoCandidate("covolume is 1, the lattice is a rotation of Z^n".into()));
    }
    let n = l.n();
    let mut out: Vec<Candidate> = (1..=n)
        .filter_map(|e| {
            let r = d.nth_root(e as u32);
            (num_traits::pow(r.clone(), e) == d).then_some(r)?.to_u64().map(|k| Candidate { k, m: n - e })
        })
        .filter(|c| c.k >= 2)
        .collect();
    out.sort_by_key(|c| c.k);
    if out.is_empty() {
        return Err(Error::NoCandidate(format!("covolume {d} is not a perfect power")));
    }
    Ok(out)
}

/// `H_k(L)` when its covolume is `k^n` (the hull of the code is zero).
fn hull_signature(l: &LatticeBasis, k: u64) -> Result<Option<LatticeBasis>> {
    let h = s_hull(l, &BigRational::from_integer(BigInt::from(k)))?;
    Ok((h.covolume() == big_pow(k, l.n())).then_some(h))
}

/// `O1^T Q O2`, where `Q` realizes the signed permutation: maps
/// `rotate(L2, O2)` to `rotate(L1, O1)` and then back to `L1`.
pub fn compose_isomorphism(o1: &RationalOrthogonal, o2: &RationalOrthogonal, s: &SignedPerm) -> RationalOrthogonal {
    o1.transpose().compose(&RationalOrthogonal::from_signed_perm(s)).compose(o2)
}

/// True iff `O O^T = I` and `rotate(L2, O) = L1`.
pub fn verify_isomorphism(l1: &LatticeBasis, l2: &LatticeBasis, o: &RationalOrthogonal) -> bool {
    verify_matrix(l1, l2, o.matrix())
}

/// [`verify_isomorphism`] for a matrix not yet known to be orthogonal.
pub fn verify_matrix(l1: &LatticeBasis, l2: &LatticeBasis, o: &RatMatrix) -> bool {
    let n = l1.n();
    if l2.n() != n || o.rows() != n || o.cols() != n || o.gram() != RatMatrix::identity(n) {
        return false;
    }
    let o = RationalOrthogonal::new(o.clone()).expect("checked orthogonal");
    rotate(l2, &o).is_ok_and(|img| lattice_equal(&img, l1))
}

/// Runs the attack; on failure the partial transcript is returned with
/// the error.
pub fn hull_attack(inst: &AttackInstance) -> std::result::Result<AttackResult, AttackFailure> {
    let mut transcript = Transcript::default();
    match run(inst, &mut transcript) {
        Ok(o_star) => Ok(AttackResult { o_star, transcript }),
        Err(error) => Err(AttackFailure { error, transcript }),
    }
}

fn run(inst: &AttackInstance, t: &mut Transcript) -> Result<RationalOrthogonal> {
    let (l1, l2) = (&inst.l1, &inst.l2);
    let n = l1.n();
    if l2.n() != n {
        return Err(Error::DimensionMismatch(format!("lattices of dimension {n} and {}", l2.n())));
    }
    let covolume = l1.covolume();
    if l2.covolume() != covolume {
        return Err(Error::NotIsomorphic(format!("covolumes {covolume} and {} differ", l2.covolume())));
    }
    let gram_det = &covolume * &covolume;
    let candidates = match inst.k {
        Some(k) => {
            if k < 2 || k % 4 == 0 {
                return Err(Error::BadModulus { k });
            }
            recover_modulus(l1).unwrap_or_default()
        }
        None => recover_modulus(l1)?,
    };
    let to_try: Vec<u64> = match inst.k {
        Some(k) => vec![k],
        None => candidates.iter().map(|c| c.k).collect(),
    };
    let step = t.steps.len();
    t.push(Step::Modulus {
        covolume: covolume.to_string(),
        gram_determinant: gram_det.to_string(),
        supplied: inst.k,
        candidates,
        validated: Vec::new(),
    });
    let mut first_error = None;
    for &k in &to_try {
        let (Some(h1), Some(h2)) = (hull_signature(l1, k)?, hull_signature(l2, k)?) else {
            continue;
        };
        if let Step::Modulus { validated, .. } = &mut t.steps[step] {
            validated.push(k);
        }
        let outcome = if k % 4 == 0 { Err(Error::BadModulus { k }) } else { attempt(l1, l2, k, [h1, h2], &covolume, t) };
        match outcome {
            Ok(o) => return Ok(o),
            Err(e) => {
                t.push(Step::Failure { k: Some(k), kind: e.kind().into(), message: e.to_string() });
                first_error.get_or_insert(e);
            }
        }
    }
    Err(first_error.unwrap_or_else(|| {
        Error::HullNotTrivial(format!("no modulus among {to_try:?} gives an s-hull of covolume k^{n}"))
    }))
}

fn attempt(
    l1: &LatticeBasis,
    l2: &LatticeBasis,
    k: u64,
    hulls: [LatticeBasis; 2],
    covolume: &BigRational,
    t: &mut Transcript,
) -> Result<RationalOrthogonal> {
    let mode = ClosureMode::for_modulus(k)?;
    let n = l1.n();
    let mut o_hat = Vec::with_capacity(2);
    let mut codes = Vec::with_capacity(2);
    for (i, (l, h)) in [l1, l2].into_iter().zip(hulls).enumerate() {
        let lattice = i as u8 + 1;
        t.push(Step::Hull { lattice, k, basis: h.clone() });
        let z = solve_scaled_zlip(&h, k).map_err(|e| Error::ZlipFailed(format!("hull of lattice {lattice}: {e}")))?;
        t.push(Step::Zlip { lattice, solution: z.clone() });
        let rotated = rotate(l, &z.o_hat)?;
        let code = mod_reduce_to_code(&rotated, k)
            .map_err(|e| Error::ZlipFailed(format!("rotated lattice {lattice}: {e}")))?;
        t.push(Step::Code { lattice, code: code.clone() });
        o_hat.push(z.o_hat);
        codes.push(code);
    }
    let m = codes[0].free_rank();
    t.push(Step::DetReading {
        k,
        m,
        covolume_matches: m.is_some_and(|m| *covolume == big_pow(k, n - m)),
        gram_matches: m.is_some_and(|m| covolume * covolume == big_pow(k, n - m)),
    });
    let r = spep(&codes[0], &codes[1]).map_err(|e| match e {
        Error::NotFreeLcd | Error::BadModulus { .. } | Error::ExtractionExhausted(_) => e,
        other => Error::SpepFailed(other.to_string()),
    })?;
    let s = match r.outcome {
        Outcome::Found(eq) => eq.as_signed(),
        Outcome::NotEquivalent => {
            return Err(Error::SpepFailed("recovered codes are not signed-permutation equivalent".into()))
        }
        Outcome::Inconclusive(reason) => return Err(Error::SpepFailed(reason)),
    };
    t.push(Step::Spep { mode, stats: r.stats, signed_perm: s.clone() });
    let o_star = compose_isomorphism(&o_hat[0], &o_hat[1], &s);
    let verified = verify_isomorphism(l1, l2, &o_star);
    t.push(Step::Compose { o_star: o_star.clone(), verified });
    if !verified {
        return Err(Error::VerificationFailed("composed isomorphism does not map L2 onto L1".into()));
    }
    Ok(o_star)
}
