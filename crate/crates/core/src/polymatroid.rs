//! Base-set enumeration, the discrete-polymatroid exchange axiom, rank
//! functions, and transversal recognition.
//!
//! Recognition reconstructs the candidate multiset of presentation sets from
//! the rank function (the counts `#{k : C_k ⊆ T}` determine it through
//! Möbius inversion over the subset lattice) and then validates by
//! re-enumeration. An exhaustive multiset search with the same contract
//! serves as the independent oracle at small sizes.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hashing::PackedBuildHasher;
use crate::types::{IndexSet, LatticeVector, Presentation};

/// Hard guard on the `2^n` subset sweep in [`recognize_transversal`].
pub const MAX_RECOGNITION_GROUND_SET: usize = 20;

/// Guard on the exhaustive multiset search in [`exhaustive_recognize`].
pub const MAX_EXHAUSTIVE_GROUND_SET: usize = 5;

/// A deduplicated, lexicographically sorted set of lattice points.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct BaseSet {
    n: usize,
    points: Vec<LatticeVector>,
}

impl BaseSet {
    pub fn new(n: usize, mut points: Vec<LatticeVector>) -> Result<Self> {
        for p in &points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.dim(),
                });
            }
        }
        points.sort();
        points.dedup();
        Ok(BaseSet { n, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticeVector] {
        &self.points
    }

    pub fn contains(&self, point: &LatticeVector) -> bool {
        self.points.binary_search(point).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticeVector> {
        self.points.iter()
    }

    /// Set intersection with another base set over the same ground set.
    pub fn intersect(&self, other: &BaseSet) -> Result<BaseSet> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let points = self
            .points
            .iter()
            .filter(|p| other.contains(p))
            .cloned()
            .collect();
        Ok(BaseSet {
            n: self.n,
            points,
        })
    }

    /// The common modulus of all points, or an error when they mix.
    pub fn modulus(&self) -> Result<i64> {
        let mut iter = self.points.iter();
        let first = match iter.next() {
            Some(p) => p.modulus(),
            None => return Ok(0),
        };
        for p in iter {
            if p.modulus() != first {
                return Err(Error::MixedModuli(first, p.modulus()));
            }
        }
        Ok(first)
    }
}

impl std::fmt::Debug for BaseSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BaseSet(n={}, {} points)", self.n, self.points.len())
    }
}

impl<'de> serde::Deserialize<'de> for BaseSet {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Wire {
            n: usize,
            points: Vec<LatticeVector>,
        }
        let wire = Wire::deserialize(deserializer)?;
        BaseSet::new(wire.n, wire.points).map_err(serde::de::Error::custom)
    }
}

/// All vectors `Σ_k e_{j_k}` with `j_k` drawn from the k-th set: the base set
/// of the transversal polymatroid presented by `P`. Plain depth-first product
/// traversal with deduplication at the leaves.
pub fn enumerate_bases(p: &Presentation) -> BaseSet {
    let n = p.n();
    // Coordinates are bounded by the number of sets, so a byte per coordinate
    // suffices for n <= 8 and the point packs into one u64.
    if n <= 8 {
        let mut seen: HashSet<u64, PackedBuildHasher> = HashSet::default();
        fn walk(
            sets: &[IndexSet],
            pos: usize,
            acc: u64,
            seen: &mut HashSet<u64, PackedBuildHasher>,
        ) {
            if pos == sets.len() {
                seen.insert(acc);
                return;
            }
            for j in sets[pos].iter() {
                walk(sets, pos + 1, acc + (1u64 << (8 * (j - 1))), seen);
            }
        }
        walk(p.sets(), 0, 0, &mut seen);
        let points = seen
            .into_iter()
            .map(|packed| {
                LatticeVector::from_raw(
                    (0..n).map(|k| ((packed >> (8 * k)) & 0xff) as i64).collect(),
                )
            })
            .collect();
        BaseSet::new(n, points).expect("dimensions agree by construction")
    } else {
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut acc = vec![0i64; n];
        fn walk(sets: &[IndexSet], pos: usize, acc: &mut Vec<i64>, seen: &mut HashSet<Vec<i64>>) {
            if pos == sets.len() {
                seen.insert(acc.clone());
                return;
            }
            for j in sets[pos].iter() {
                acc[j - 1] += 1;
                walk(sets, pos + 1, acc, seen);
                acc[j - 1] -= 1;
            }
        }
        walk(p.sets(), 0, &mut acc, &mut seen);
        let points = seen.into_iter().map(LatticeVector::from_raw).collect();
        BaseSet::new(n, points).expect("dimensions agree by construction")
    }
}

/// Outcome of the symmetric base-exchange check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExchangeOutcome {
    Pass,
    /// `u_a > v_a` but no index `b` with `u_b < v_b` and `u − e_a + e_b` in
    /// the set. `index` is 1-based.
    Violation {
        u: LatticeVector,
        v: LatticeVector,
        index: usize,
    },
}

/// Checks the discrete-polymatroid base axiom: for all `u, v` in the set and
/// every `a` with `u_a > v_a` there is `b` with `u_b < v_b` such that
/// `u − e_a + e_b` stays in the set. Scans points in lexicographic order and
/// indices ascending, so the first violation reported is deterministic.
pub fn check_base_exchange(bases: &BaseSet) -> Result<ExchangeOutcome> {
    bases.modulus()?;
    let n = bases.n();
    let lookup: HashSet<&[i64]> = bases.iter().map(|p| p.coords()).collect();
    let mut candidate = vec![0i64; n];
    for u in bases.iter() {
        for v in bases.iter() {
            for a in 0..n {
                if u.coords()[a] <= v.coords()[a] {
                    continue;
                }
                let mut exchanged = false;
                for b in 0..n {
                    if u.coords()[b] >= v.coords()[b] {
                        continue;
                    }
                    candidate.copy_from_slice(u.coords());
                    candidate[a] -= 1;
                    candidate[b] += 1;
                    if lookup.contains(candidate.as_slice()) {
                        exchanged = true;
                        break;
                    }
                }
                if !exchanged {
                    return Ok(ExchangeOutcome::Violation {
                        u: u.clone(),
                        v: v.clone(),
                        index: a + 1,
                    });
                }
            }
        }
    }
    Ok(ExchangeOutcome::Pass)
}

/// Polymatroid rank of `S`: the maximum of `Σ_{j∈S} α_j` over the base set.
pub fn rank_of(bases: &BaseSet, set: &IndexSet) -> i64 {
    bases.iter().map(|p| p.sum_over(set)).max().unwrap_or(0)
}

/// Why recognition rejected a point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RecognitionCertificate {
    /// Möbius inversion produced a negative multiplicity for this subset.
    NegativeMultiplicity { set: IndexSet, value: i64 },
    /// The empty set received a nonzero multiplicity.
    EmptySetMultiplicity { value: i64 },
    /// Multiplicities do not add up to `n` sets.
    TotalMismatch { total: i64 },
    /// The reconstructed candidate enumerates to a different point set.
    BaseMismatch {
        missing: Vec<LatticeVector>,
        extra: Vec<LatticeVector>,
    },
    /// The exhaustive multiset search ran out of candidates.
    SearchExhausted,
}

/// Result of transversal recognition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecognitionResult {
    pub transversal: bool,
    pub witness: Option<Presentation>,
    pub certificate: Option<RecognitionCertificate>,
}

impl RecognitionResult {
    fn yes(witness: Presentation) -> Self {
        RecognitionResult {
            transversal: true,
            witness: Some(witness),
            certificate: None,
        }
    }

    fn no(certificate: RecognitionCertificate) -> Self {
        RecognitionResult {
            transversal: false,
            witness: None,
            certificate: Some(certificate),
        }
    }
}

fn check_recognition_input(bases: &BaseSet) -> Result<usize> {
    let n = bases.n();
    if bases.is_empty() {
        return Err(Error::InvalidParameter(
            "recognition needs a nonempty point set".into(),
        ));
    }
    let modulus = bases.modulus()?;
    if modulus != n as i64 {
        return Err(Error::InvalidParameter(format!(
            "recognition needs modulus {n} (candidate presentations have {n} sets), got {modulus}"
        )));
    }
    Ok(n)
}

/// Decides whether the point set is the base set of a transversal polymatroid
/// presented by `n` sets, producing either a presentation or a certificate.
///
/// For every subset `T`, `f(T) = n − rank([n]∖T)` counts the candidate sets
/// contained in `T`; Möbius inversion over the subset lattice recovers the
/// multiplicity of each subset, and re-enumeration settles the answer.
pub fn recognize_transversal(bases: &BaseSet) -> Result<RecognitionResult> {
    let n = check_recognition_input(bases)?;
    if n > MAX_RECOGNITION_GROUND_SET {
        return Err(Error::CapacityExceeded(format!(
            "recognition sweeps 2^n subsets; n = {n} exceeds {MAX_RECOGNITION_GROUND_SET}"
        )));
    }

    let full = (1u64 << n) - 1;
    // rank[mask] = max over points of the sum on mask.
    let mut rank = vec![0i64; 1 << n];
    let mut sums = vec![0i64; 1 << n];
    for p in bases.iter() {
        for mask in 1..=full {
            let low = mask & mask.wrapping_neg();
            sums[mask as usize] =
                sums[(mask ^ low) as usize] + p.coords()[low.trailing_zeros() as usize];
            if sums[mask as usize] > rank[mask as usize] {
                rank[mask as usize] = sums[mask as usize];
            }
        }
    }

    // multiplicity[T] = Σ_{U ⊆ T} (−1)^{|T∖U|} f(U) with f(T) = n − rank([n]∖T).
    let mut multiplicity: Vec<i64> = (0..=full)
        .map(|mask| n as i64 - rank[(full ^ mask) as usize])
        .collect();
    for bit in 0..n {
        for mask in 0..=full {
            if mask & (1 << bit) != 0 {
                multiplicity[mask as usize] -= multiplicity[(mask ^ (1 << bit)) as usize];
            }
        }
    }

    for mask in 0..=full {
        if multiplicity[mask as usize] < 0 {
            return Ok(RecognitionResult::no(
                RecognitionCertificate::NegativeMultiplicity {
                    set: IndexSet::from_bits(mask),
                    value: multiplicity[mask as usize],
                },
            ));
        }
    }
    if multiplicity[0] != 0 {
        return Ok(RecognitionResult::no(
            RecognitionCertificate::EmptySetMultiplicity {
                value: multiplicity[0],
            },
        ));
    }
    let total: i64 = multiplicity.iter().sum();
    if total != n as i64 {
        return Ok(RecognitionResult::no(RecognitionCertificate::TotalMismatch { total }));
    }

    let mut sets = Vec::with_capacity(n);
    for mask in 1..=full {
        for _ in 0..multiplicity[mask as usize] {
            sets.push(IndexSet::from_bits(mask));
        }
    }
    let candidate = Presentation::new(n, sets).expect("multiplicities yield n nonempty sets");
    finish_with_candidate(bases, candidate)
}

fn finish_with_candidate(bases: &BaseSet, candidate: Presentation) -> Result<RecognitionResult> {
    let enumerated = enumerate_bases(&candidate);
    if &enumerated == bases {
        Ok(RecognitionResult::yes(candidate))
    } else {
        let missing = bases
            .iter()
            .filter(|p| !enumerated.contains(p))
            .cloned()
            .collect();
        let extra = enumerated
            .iter()
            .filter(|p| !bases.contains(p))
            .cloned()
            .collect();
        Ok(RecognitionResult::no(RecognitionCertificate::BaseMismatch {
            missing,
            extra,
        }))
    }
}

/// Same contract as [`recognize_transversal`], by pruned exhaustive search
/// over multisets of `n` nonempty subsets of `[n]`. Independent of the
/// rank-reconstruction path; intended as a test oracle at small `n`.
pub fn exhaustive_recognize(bases: &BaseSet) -> Result<RecognitionResult> {
    let n = check_recognition_input(bases)?;
    if n > MAX_EXHAUSTIVE_GROUND_SET {
        return Err(Error::CapacityExceeded(format!(
            "exhaustive recognition searches multisets of subsets; n = {n} exceeds {MAX_EXHAUSTIVE_GROUND_SET}"
        )));
    }

    // In a transversal presentation, #{k : j ∈ C_k} = rank({j}); sets must
    // also avoid elements of rank zero.
    let required: Vec<i64> = (1..=n)
        .map(|j| rank_of(bases, &IndexSet::singleton(j)))
        .collect();
    let support: u64 = (0..n)
        .filter(|&j| required[j] > 0)
        .map(|j| 1u64 << j)
        .fold(0, |a, b| a | b);

    let mut counts = vec![0i64; n];
    let mut chosen: Vec<u64> = Vec::with_capacity(n);

    fn search(
        bases: &BaseSet,
        n: usize,
        support: u64,
        required: &[i64],
        counts: &mut Vec<i64>,
        chosen: &mut Vec<u64>,
        min_mask: u64,
    ) -> Option<Presentation> {
        if chosen.len() == n {
            if counts != required {
                return None;
            }
            let sets = chosen.iter().map(|&m| IndexSet::from_bits(m)).collect();
            let candidate = Presentation::new(n, sets).ok()?;
            if enumerate_bases(&candidate) == *bases {
                return Some(candidate);
            }
            return None;
        }
        let remaining = (n - chosen.len()) as i64;
        for j in 0..n {
            if counts[j] + remaining < required[j] {
                return None;
            }
        }
        for mask in min_mask..=support {
            if mask == 0 || mask & !support != 0 {
                continue;
            }
            let mut feasible = true;
            for j in 0..n {
                if mask & (1 << j) != 0 && counts[j] + 1 > required[j] {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    counts[j] += 1;
                }
            }
            chosen.push(mask);
            if let Some(found) = search(bases, n, support, required, counts, chosen, mask) {
                return Some(found);
            }
            chosen.pop();
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    counts[j] -= 1;
                }
            }
        }
        None
    }

    match search(bases, n, support, &required, &mut counts, &mut chosen, 1) {
        Some(witness) => Ok(RecognitionResult::yes(witness)),
        None => Ok(RecognitionResult::no(RecognitionCertificate::SearchExhausted)),
    }
}
