//! Ground types: index sets over `[n]`, lattice vectors, presentations,
//! family parameters, cyclic windows and facet normals.
//!
//! Ground elements are 1-indexed everywhere in the public interface; the
//! bitmask inside [`IndexSet`] is an internal detail.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground-set size (index sets live in one machine word).
pub const MAX_GROUND_SET: usize = 62;

pub(crate) fn check_ground_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ground-set size must be at least 2, got {n}"
        )));
    }
    if n > MAX_GROUND_SET {
        return Err(Error::CapacityExceeded(format!(
            "ground-set size {n} exceeds the supported maximum {MAX_GROUND_SET}"
        )));
    }
    Ok(())
}

/// A subset of the ground set `{1, …, n}`, stored as a bitmask.
///
/// The total order (by mask value) is the fixed order used to canonicalize
/// multisets of sets.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    bits: u64,
}

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet { bits: 0 }
    }

    /// The full set `[n]`. Caller guarantees `n <= MAX_GROUND_SET`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND_SET);
        IndexSet {
            bits: (1u64 << n) - 1,
        }
    }

    pub fn singleton(element: usize) -> Self {
        debug_assert!((1..=MAX_GROUND_SET).contains(&element));
        IndexSet {
            bits: 1u64 << (element - 1),
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut bits = 0u64;
        for j in members {
            if j == 0 || j > MAX_GROUND_SET {
                return Err(Error::InvalidParameter(format!(
                    "ground element {j} out of range 1..={MAX_GROUND_SET}"
                )));
            }
            bits |= 1u64 << (j - 1);
        }
        Ok(IndexSet { bits })
    }

    pub(crate) fn from_bits(bits: u64) -> Self {
        IndexSet { bits }
    }

    pub(crate) fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, element: usize) -> bool {
        element >= 1 && element <= MAX_GROUND_SET && self.bits & (1u64 << (element - 1)) != 0
    }

    pub fn insert(&mut self, element: usize) {
        debug_assert!((1..=MAX_GROUND_SET).contains(&element));
        self.bits |= 1u64 << (element - 1);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet {
            bits: self.bits & other.bits,
        }
    }

    /// Complement within `[n]`.
    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet {
            bits: IndexSet::full(n).bits & !self.bits,
        }
    }

    /// Members in ascending order (1-indexed).
    pub fn members(&self) -> Vec<usize> {
        (1..=MAX_GROUND_SET).filter(|&j| self.contains(j)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.bits;
        (1..=MAX_GROUND_SET).filter(move |&j| bits & (1u64 << (j - 1)) != 0)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        IndexSet::from_members(members).map_err(D::Error::custom)
    }
}

/// A nonnegative integer vector, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if let Some(&c) = coords.iter().find(|&&c| c < 0) {
            return Err(Error::InvalidParameter(format!(
                "lattice vector coordinate {c} is negative"
            )));
        }
        Ok(LatticeVector { coords })
    }

    /// Constructor for enumeration kernels that guarantee nonnegativity.
    pub(crate) fn from_raw(coords: Vec<i64>) -> Self {
        debug_assert!(coords.iter().all(|&c| c >= 0));
        LatticeVector { coords }
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector {
            coords: vec![0; dim],
        }
    }

    pub fn unit(dim: usize, element: usize) -> Self {
        debug_assert!((1..=dim).contains(&element));
        let mut coords = vec![0; dim];
        coords[element - 1] = 1;
        LatticeVector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// `|α| = α₁ + … + α_n`.
    pub fn modulus(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.dim(), other.dim());
        LatticeVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Sum over the 1-indexed members of `set`.
    pub fn sum_over(&self, set: &IndexSet) -> i64 {
        set.iter().map(|j| self.coords[j - 1]).sum()
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<i64>::deserialize(deserializer)?;
        LatticeVector::new(coords).map_err(D::Error::custom)
    }
}

/// An ordered list of exactly `n` nonempty subsets of `[n]`.
///
/// The base set it presents does not depend on the order of the sets, so
/// multiset comparison is provided alongside plain equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Presentation {
    n: usize,
    sets: Vec<IndexSet>,
}

impl Presentation {
    pub fn new(n: usize, sets: Vec<IndexSet>) -> Result<Self> {
        check_ground_size(n)?;
        if sets.len() != n {
            return Err(Error::InvalidPresentation(format!(
                "expected exactly {n} sets, got {}",
                sets.len()
            )));
        }
        let full = IndexSet::full(n);
        for (k, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidPresentation(format!(
                    "set {} is empty",
                    k + 1
                )));
            }
            if !set.is_subset_of(&full) {
                return Err(Error::InvalidPresentation(format!(
                    "set {} has a member outside [{n}]",
                    k + 1
                )));
            }
        }
        Ok(Presentation { n, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The sets in positional order; position `k` (0-indexed) holds `A_{k+1}`.
    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }

    /// The multiset of sets in the fixed canonical order.
    pub fn canonical_multiset(&self) -> Vec<IndexSet> {
        let mut sets = self.sets.clone();
        sets.sort();
        sets
    }

    /// Equality as multisets of sets (base sets agree iff presentations agree
    /// up to reordering is *not* true in general, but multiset equality is the
    /// canonical-form comparison).
    pub fn multiset_eq(&self, other: &Presentation) -> bool {
        self.n == other.n && self.canonical_multiset() == other.canonical_multiset()
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation(n={}, {:?})", self.n, self.sets)
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationWire {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationWire {
            n: self.n,
            sets: self.sets.iter().map(|s| s.members()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = PresentationWire::deserialize(deserializer)?;
        let sets = wire
            .sets
            .into_iter()
            .map(IndexSet::from_members)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Presentation::new(wire.n, sets).map_err(D::Error::custom)
    }
}

/// The triple `(n, i, t)` indexing the rotated-window presentation family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyParams {
    n: usize,
    i: usize,
    t: usize,
}

impl FamilyParams {
    pub fn new(n: usize, i: usize, t: usize) -> Result<Self> {
        check_ground_size(n)?;
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "family presentations need n >= 3, got {n}"
            )));
        }
        check_window_params(n, t, i)?;
        Ok(FamilyParams { n, i, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Window length.
    pub fn i(&self) -> usize {
        self.i
    }

    /// Rotation offset.
    pub fn t(&self) -> usize {
        self.t
    }
}

pub(crate) fn check_window_params(n: usize, t: usize, i: usize) -> Result<()> {
    if i < 1 || i > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "window length {i} out of range 1..={}",
            n - 1
        )));
    }
    if t > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "rotation offset {t} out of range 0..={}",
            n - 1
        )));
    }
    Ok(())
}

/// The cyclic window `σ^t[i] = {t+1, …, t+i} (mod n)` together with the
/// membership bound `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicWindow {
    n: usize,
    t: usize,
    i: usize,
}

impl CyclicWindow {
    pub(crate) fn new_unchecked(n: usize, t: usize, i: usize) -> Self {
        CyclicWindow { n, t, i }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.i
    }

    /// The membership bound `i + 1` on the window sum.
    pub fn bound(&self) -> i64 {
        self.i as i64 + 1
    }

    /// Whether the interval wraps past `n` (strictly, `i + t > n`).
    pub fn is_wrapping(&self) -> bool {
        self.i + self.t > self.n
    }

    /// The window as an index set.
    pub fn indices(&self) -> IndexSet {
        let mut set = IndexSet::empty();
        for k in 1..=self.i {
            set.insert(((k + self.t - 1) % self.n) + 1);
        }
        set
    }

    /// Window sum of a coordinate vector.
    pub fn sum(&self, coords: &[i64]) -> i64 {
        debug_assert_eq!(coords.len(), self.n);
        self.indices().iter().map(|j| coords[j - 1]).sum()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// An integer facet normal together with its content `d` and primitive form.
///
/// For the window normal of `(n, t, i)` the content equals `gcd(n, i+1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FacetNormal {
    nu: Vec<i64>,
    d: i64,
    primitive: Vec<i64>,
}

impl FacetNormal {
    /// Builds a normal from a raw integer vector, reducing by the gcd of the
    /// entries.
    pub fn from_vector(nu: Vec<i64>) -> Result<Self> {
        let d = nu.iter().fold(0i64, |g, &c| gcd(g, c));
        if d == 0 {
            return Err(Error::InvalidParameter(
                "facet normal must be a nonzero vector".into(),
            ));
        }
        let primitive = nu.iter().map(|&c| c / d).collect();
        Ok(FacetNormal { nu, d, primitive })
    }

    pub fn dim(&self) -> usize {
        self.nu.len()
    }

    pub fn nu(&self) -> &[i64] {
        &self.nu
    }

    /// The content divisor (`gcd(n, i+1)` for family window normals).
    pub fn divisor(&self) -> i64 {
        self.d
    }

    pub fn primitive(&self) -> &[i64] {
        &self.primitive
    }

    /// Dot product of the primitive form with raw coordinates.
    pub fn evaluate_coords(&self, coords: &[i64]) -> i64 {
        debug_assert_eq!(coords.len(), self.primitive.len());
        self.primitive
            .iter()
            .zip(coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// A coordinate halfspace `x_k >= 0`: primitive form is a unit vector.
    pub fn is_coordinate(&self) -> bool {
        let mut nonzero = 0usize;
        let mut unit = false;
        for &c in &self.primitive {
            if c != 0 {
                nonzero += 1;
                unit = c == 1;
            }
        }
        nonzero == 1 && unit
    }

    /// The 1-indexed axis of a coordinate normal, if it is one.
    pub fn coordinate_axis(&self) -> Option<usize> {
        if self.is_coordinate() {
            self.primitive.iter().position(|&c| c == 1).map(|k| k + 1)
        } else {
            None
        }
    }
}

impl fmt::Debug for FacetNormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FacetNormal(nu={:?}, d={})", self.nu, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_set_roundtrip() {
        let s = IndexSet::from_members([1, 3, 4]).unwrap();
        assert_eq!(s.members(), vec![1, 3, 4]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3));
        assert!(!s.contains(2));
        assert_eq!(s.complement(4).members(), vec![2]);
    }

    #[test]
    fn index_set_rejects_out_of_range() {
        assert!(IndexSet::from_members([0]).is_err());
        assert!(IndexSet::from_members([63]).is_err());
    }

    #[test]
    fn presentation_requires_nonempty_sets() {
        let err = Presentation::new(
            3,
            vec![IndexSet::full(3), IndexSet::empty(), IndexSet::full(3)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidPresentation(_)));
    }

    #[test]
    fn presentation_requires_exactly_n_sets() {
        assert!(Presentation::new(3, vec![IndexSet::full(3); 2]).is_err());
        assert!(Presentation::new(3, vec![IndexSet::full(3); 3]).is_ok());
    }

    #[test]
    fn presentation_rejects_members_outside_ground_set() {
        let s = IndexSet::from_members([1, 4]).unwrap();
        assert!(Presentation::new(3, vec![s, s, s]).is_err());
    }

    #[test]
    fn presentation_json_shape() {
        let p = Presentation::new(
            4,
            vec![
                IndexSet::full(4),
                IndexSet::from_members([2, 3, 4]).unwrap(),
                IndexSet::from_members([2, 3, 4]).unwrap(),
                IndexSet::full(4),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"n":4,"sets":[[1,2,3,4],[2,3,4],[2,3,4],[1,2,3,4]]}"#
        );
        let back: Presentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn lattice_vector_rejects_negatives() {
        assert!(LatticeVector::new(vec![1, -1]).is_err());
        let v = LatticeVector::new(vec![2, 0, 1, 1]).unwrap();
        assert_eq!(v.modulus(), 4);
    }

    #[test]
    fn window_wrapping_uses_strict_inequality() {
        // i + t = n stays in the non-wrapping form.
        let w = CyclicWindow::new_unchecked(4, 2, 2);
        assert!(!w.is_wrapping());
        assert_eq!(w.indices().members(), vec![3, 4]);
        let w = CyclicWindow::new_unchecked(4, 3, 2);
        assert!(w.is_wrapping());
        assert_eq!(w.indices().members(), vec![1, 4]);
    }

    #[test]
    fn facet_normal_content_reduction() {
        let nu = FacetNormal::from_vector(vec![-2, 2, 2, 2]).unwrap();
        assert_eq!(nu.divisor(), 2);
        assert_eq!(nu.primitive(), &[-1, 1, 1, 1]);
        assert!(!nu.is_coordinate());
        let e4 = FacetNormal::from_vector(vec![0, 0, 0, 4]).unwrap();
        assert!(e4.is_coordinate());
        assert_eq!(e4.coordinate_axis(), Some(4));
    }

    #[test]
    fn facet_normal_rejects_zero_vector() {
        assert!(FacetNormal::from_vector(vec![0, 0]).is_err());
    }
}
