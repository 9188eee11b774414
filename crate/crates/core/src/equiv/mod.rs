//! Code equivalence: permutation equivalence through weighted graph
//! isomorphism of projection matrices, and signed permutation equivalence
//! through the signed and extended signed closures.

mod graph;
mod perm;

use serde::{Deserialize, Serialize};

pub use graph::{
    graph_from_projection, is_isomorphism, solve_weighted_gi, GiSolutions, PartialMap, WeightedGraph,
    DEFAULT_NODE_CAP,
};
pub use perm::{Permutation, SignedPerm};

use crate::codes::{extended_signed_closure, is_free_lcd, maps_onto, projection_matrix, signed_closure, LinearCode};
use crate::error::{Error, Result};

/// Cap on GI solutions rejected by extraction before giving up.
pub const DEFAULT_RETRY_CAP: u64 = 10_000;

/// Largest length accepted by [`brute_force_spep`].
pub const BRUTE_FORCE_SPEP_LIMIT: usize = 6;

/// Largest length accepted by [`brute_force_pep`].
pub const BRUTE_FORCE_PEP_LIMIT: usize = 8;

/// Which closure carries a signed-permutation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureMode {
    /// `C^±`, length `2n`, for odd `k`.
    Signed2n,
    /// `C^e`, length `3n`, for `k = 2 mod 4`.
    Extended3n,
}

impl ClosureMode {
    pub fn for_modulus(k: u64) -> Result<Self> {
        match k % 4 {
            0 => Err(Error::BadModulus { k }),
            2 => Ok(ClosureMode::Extended3n),
            _ => Ok(ClosureMode::Signed2n),
        }
    }

    pub fn closure_len(self, n: usize) -> usize {
        match self {
            ClosureMode::Signed2n => 2 * n,
            ClosureMode::Extended3n => 3 * n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Permutation(Permutation),
    Signed(SignedPerm),
}

impl Equivalence {
    pub fn as_signed(&self) -> SignedPerm {
        match self {
            Equivalence::Permutation(p) => SignedPerm::from_permutation(p.clone()),
            Equivalence::Signed(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(Equivalence),
    NotEquivalent,
    Inconclusive(String),
}

/// Search effort behind an [`EquivResult`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub gi_nodes: u64,
    pub gi_leaves: u64,
    pub solutions_tried: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "EquivJson", try_from = "EquivJson")]
pub struct EquivResult {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

impl EquivResult {
    fn new(outcome: Outcome, stats: SearchStats) -> Self {
        EquivResult { outcome, stats }
    }

    pub fn found(&self) -> Option<&Equivalence> {
        match &self.outcome {
            Outcome::Found(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        self.found().is_some()
    }
}

#[derive(Serialize, Deserialize)]
struct EquivJson {
    outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<Permutation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signs: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(default)]
    stats: SearchStats,
}

impl From<EquivResult> for EquivJson {
    fn from(r: EquivResult) -> Self {
        let mut j = EquivJson { outcome: String::new(), sigma: None, signs: None, reason: None, stats: r.stats };
        match r.outcome {
            Outcome::Found(Equivalence::Permutation(p)) => {
                j.outcome = "found".into();
                j.sigma = Some(p);
            }
            Outcome::Found(Equivalence::Signed(s)) => {
                j.outcome = "found".into();
                j.sigma = Some(s.sigma);
                j.signs = Some(s.signs);
            }
            Outcome::NotEquivalent => j.outcome = "not_equivalent".into(),
            Outcome::Inconclusive(reason) => {
                j.outcome = "inconclusive".into();
                j.reason = Some(reason);
            }
        }
        j
    }
}

impl TryFrom<EquivJson> for EquivResult {
    type Error = Error;
    fn try_from(j: EquivJson) -> Result<Self> {
        let outcome = match (j.outcome.as_str(), j.sigma, j.signs) {
            ("found", Some(p), None) => Outcome::Found(Equivalence::Permutation(p)),
            ("found", Some(p), Some(signs)) => Outcome::Found(Equivalence::Signed(SignedPerm::new(p, signs)?)),
            ("not_equivalent", None, None) => Outcome::NotEquivalent,
            ("inconclusive", None, None) => Outcome::Inconclusive(j.reason.unwrap_or_default()),
            (o, _, _) => return Err(Error::Parse(format!("malformed equivalence result with outcome {o:?}"))),
        };
        Ok(EquivResult { outcome, stats: j.stats })
    }
}

fn check_shapes(c1: &LinearCode, c2: &LinearCode) -> Result<()> {
    if c1.modulus() != c2.modulus() || c1.len() != c2.len() {
        return Err(Error::DimensionMismatch(format!(
            "codes of length {} over Z_{} and length {} over Z_{}",
            c1.len(),
            c1.modulus(),
            c2.len(),
            c2.modulus()
        )));
    }
    Ok(())
}

fn projection_graph(c: &LinearCode) -> Result<WeightedGraph> {
    if !is_free_lcd(c) {
        return Err(Error::NotFreeLcd);
    }
    graph_from_projection(&projection_matrix(c)?)
}

/// Permutation equivalence of free LCD codes: a permutation `p` with
/// `C1 = C2 P`, found as an isomorphism between the projection graphs.
pub fn pep(c1: &LinearCode, c2: &LinearCode) -> Result<EquivResult> {
    check_shapes(c1, c2)?;
    let (g1, g2) = (projection_graph(c1)?, projection_graph(c2)?);
    let mut sols = GiSolutions::new(&g1, &g2);
    let first = sols.next();
    let stats = SearchStats { gi_nodes: sols.nodes(), gi_leaves: sols.leaves(), solutions_tried: first.is_some() as u64 };
    match first {
        Some(p) => {
            if !maps_onto(c1, c2, &SignedPerm::from_permutation(p.clone())) {
                return Err(Error::VerificationFailed(format!("graph isomorphism {p:?} does not map the codes")));
            }
            Ok(EquivResult::new(Outcome::Found(Equivalence::Permutation(p)), stats))
        }
        None if sols.capped() => {
            Ok(EquivResult::new(Outcome::Inconclusive(format!("search stopped after {} nodes", stats.gi_nodes)), stats))
        }
        None => Ok(EquivResult::new(Outcome::NotEquivalent, stats)),
    }
}

/// Reads a signed permutation off a closure-level permutation `tau`, or
/// `None` if `tau` breaks a coordinate pair (or, in extended mode, the
/// split between the first `2n` and last `n` coordinates).
pub fn extract_signed_perm(tau: &Permutation, n: usize, mode: ClosureMode) -> Option<SignedPerm> {
    if tau.len() != mode.closure_len(n) {
        return None;
    }
    if mode == ClosureMode::Extended3n && (2 * n..3 * n).any(|i| tau.image(i) < 2 * n) {
        return None;
    }
    let mut sigma = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (tau.image(2 * i), tau.image(2 * i + 1));
        if a / 2 != b / 2 || a >= 2 * n {
            return None;
        }
        sigma.push(a / 2);
        signs.push(if a % 2 == 0 { 1 } else { -1 });
    }
    Some(SignedPerm { sigma: Permutation::from_images(sigma).ok()?, signs })
}

/// The closure-level permutation induced by `s`.
pub fn closure_permutation(s: &SignedPerm, mode: ClosureMode) -> Permutation {
    let n = s.len();
    let mut images = vec![0; mode.closure_len(n)];
    for i in 0..n {
        let j = s.sigma.image(i);
        let flip = usize::from(s.signs[i] < 0);
        images[2 * i] = 2 * j + flip;
        images[2 * i + 1] = 2 * j + 1 - flip;
        if mode == ClosureMode::Extended3n {
            images[2 * n + i] = 2 * n + j;
        }
    }
    Permutation::from_images(images).expect("valid closure permutation")
}

/// True when the forced part of a closure-level map can still extend to a
/// pair-respecting (and block-respecting) permutation.
fn closure_consistent(map: &PartialMap, n: usize) -> bool {
    map.iter().enumerate().all(|(b, a)| {
        let Some(a) = *a else { return true };
        if (a < 2 * n) != (b < 2 * n) {
            return false;
        }
        b >= 2 * n || map[b ^ 1].is_none_or(|a2| a2 == a ^ 1)
    })
}

/// Signed permutation equivalence: `(sigma, signs)` with
/// `C1 = apply_signed_perm(C2, (sigma, signs))`.
///
/// Odd moduli use the signed closure, `k = 2 mod 4` the extended signed
/// closure; `4 | k` is refused.
pub fn spep(c1: &LinearCode, c2: &LinearCode) -> Result<EquivResult> {
    spep_with_caps(c1, c2, DEFAULT_NODE_CAP, DEFAULT_RETRY_CAP)
}

pub fn spep_with_caps(c1: &LinearCode, c2: &LinearCode, node_cap: u64, retry_cap: u64) -> Result<EquivResult> {
    check_shapes(c1, c2)?;
    let mode = ClosureMode::for_modulus(c1.modulus())?;
    let n = c1.len();
    let closure = |c: &LinearCode| match mode {
        ClosureMode::Signed2n => Ok(signed_closure(c)),
        ClosureMode::Extended3n => extended_signed_closure(c),
    };
    let (e1, e2) = (closure(c1)?, closure(c2)?);
    let (g1, g2) = (projection_graph(&e1)?, projection_graph(&e2)?);
    let mut sols =
        GiSolutions::new(&g1, &g2).with_node_cap(node_cap).with_prune(move |m: &PartialMap| closure_consistent(m, n));
    let mut tried = 0u64;
    while let Some(tau) = sols.next() {
        tried += 1;
        if let Some(s) = extract_signed_perm(&tau, n, mode) {
            if maps_onto(c1, c2, &s) {
                let stats = SearchStats { gi_nodes: sols.nodes(), gi_leaves: sols.leaves(), solutions_tried: tried };
                return Ok(EquivResult::new(Outcome::Found(Equivalence::Signed(s)), stats));
            }
        }
        if tried >= retry_cap {
            return Err(Error::ExtractionExhausted(format!("{tried} closure isomorphisms rejected")));
        }
    }
    let stats = SearchStats { gi_nodes: sols.nodes(), gi_leaves: sols.leaves(), solutions_tried: tried };
    if sols.capped() {
        return Ok(EquivResult::new(Outcome::Inconclusive(format!("search stopped after {} nodes", stats.gi_nodes)), stats));
    }
    if tried > 0 {
        return Err(Error::ExtractionExhausted(format!("all {tried} closure isomorphisms rejected")));
    }
    Ok(EquivResult::new(Outcome::NotEquivalent, stats))
}

/// Over `Z_2` signs are trivial, so signed equivalence is plain
/// permutation equivalence of the codes themselves.
pub fn spep_binary(c1: &LinearCode, c2: &LinearCode) -> Result<EquivResult> {
    if c1.modulus() != 2 {
        return Err(Error::BadModulus { k: c1.modulus() });
    }
    let mut r = pep(c1, c2)?;
    if let Outcome::Found(Equivalence::Permutation(p)) = r.outcome {
        r.outcome = Outcome::Found(Equivalence::Signed(SignedPerm::from_permutation(p)));
    }
    Ok(r)
}

/// Exhaustive signed-permutation search, first match in the order of
/// [`SignedPerm::all`].
pub fn brute_force_spep(c1: &LinearCode, c2: &LinearCode) -> Result<EquivResult> {
    check_shapes(c1, c2)?;
    let n = c1.len();
    if n > BRUTE_FORCE_SPEP_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_SPEP_LIMIT });
    }
    let mut stats = SearchStats::default();
    for s in SignedPerm::all(n) {
        stats.solutions_tried += 1;
        if maps_onto(c1, c2, &s) {
            return Ok(EquivResult::new(Outcome::Found(Equivalence::Signed(s)), stats));
        }
    }
    Ok(EquivResult::new(Outcome::NotEquivalent, stats))
}

/// Exhaustive permutation search, first match in lexicographic order.
pub fn brute_force_pep(c1: &LinearCode, c2: &LinearCode) -> Result<EquivResult> {
    check_shapes(c1, c2)?;
    let n = c1.len();
    if n > BRUTE_FORCE_PEP_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_PEP_LIMIT });
    }
    let mut stats = SearchStats::default();
    for p in Permutation::all(n) {
        stats.solutions_tried += 1;
        if maps_onto(c1, c2, &SignedPerm::from_permutation(p.clone())) {
            return Ok(EquivResult::new(Outcome::Found(Equivalence::Permutation(p)), stats));
        }
    }
    Ok(EquivResult::new(Outcome::NotEquivalent, stats))
}
