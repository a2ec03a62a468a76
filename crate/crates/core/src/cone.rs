//! H-representations of the intersection cones, lattice sections by degree,
//! exact rank, and verification that the stored normal sets are irredundant
//! facet descriptions.
//!
//! All arithmetic is exact: coordinate work stays in bounded `i64`, the rank
//! computation runs fraction-free over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::nu_vector;
use crate::types::{check_ground_size, FacetNormal, FamilyParams, LatticeVector};

/// A cone given by facet normals: the window normals of the participating
/// families plus the `n` coordinate halfspaces, deduplicated by primitive
/// form and sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct ConeDescription {
    n: usize,
    normals: Vec<FacetNormal>,
}

impl ConeDescription {
    /// Builds a cone directly from normal vectors (reduced to primitive form,
    /// deduplicated, sorted). `build_cone` is the family-aware constructor.
    pub fn from_normals(n: usize, normals: Vec<FacetNormal>) -> Result<Self> {
        check_ground_size(n)?;
        for normal in &normals {
            if normal.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: normal.dim(),
                });
            }
        }
        let mut normals = normals;
        normals.sort_by(|a, b| a.primitive().cmp(b.primitive()));
        normals.dedup_by(|a, b| a.primitive() == b.primitive());
        Ok(ConeDescription { n, normals })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn normals(&self) -> &[FacetNormal] {
        &self.normals
    }

    /// The non-coordinate normals (window functionals).
    pub fn window_normals(&self) -> impl Iterator<Item = &FacetNormal> {
        self.normals.iter().filter(|nu| !nu.is_coordinate())
    }

    pub fn without_normal(&self, index: usize) -> ConeDescription {
        let mut normals = self.normals.clone();
        normals.remove(index);
        ConeDescription {
            n: self.n,
            normals,
        }
    }
}

impl std::fmt::Debug for ConeDescription {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ConeDescription(n={}, {} normals)", self.n, self.normals.len())
    }
}

#[derive(Serialize, Deserialize)]
struct ConeWire {
    n: usize,
    normals: Vec<Vec<i64>>,
}

impl Serialize for ConeDescription {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ConeWire {
            n: self.n,
            normals: self.normals.iter().map(|nu| nu.primitive().to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConeDescription {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ConeWire::deserialize(deserializer)?;
        let normals = wire
            .normals
            .into_iter()
            .map(FacetNormal::from_vector)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        ConeDescription::from_normals(wire.n, normals).map_err(serde::de::Error::custom)
    }
}

/// The lattice points of the cone at grading level `d` (total degree `d·n`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSection {
    pub degree: usize,
    pub points: Vec<LatticeVector>,
}

/// The intersection cone of the given families: one window normal per family
/// plus the coordinate normals `ν_{σ^k[n−1]}`, which reduce to the unit
/// vectors.
pub fn build_cone(families: &[FamilyParams], n: usize) -> Result<ConeDescription> {
    if families.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one family is required".into(),
        ));
    }
    for f in families {
        if f.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.n(),
            });
        }
    }
    let mut normals = Vec::with_capacity(families.len() + n);
    for f in families {
        normals.push(nu_vector(n, f.t(), f.i())?);
    }
    for k in 0..n {
        normals.push(nu_vector(n, k, n - 1)?);
    }
    ConeDescription::from_normals(n, normals)
}

/// Exact dot product of the primitive normal with a lattice vector.
pub fn evaluate(normal: &FacetNormal, v: &LatticeVector) -> Result<i64> {
    if normal.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: normal.dim(),
            got: v.dim(),
        });
    }
    Ok(normal.evaluate_coords(v.coords()))
}

/// Enumerates nonnegative vectors with coordinate sum `total` satisfying all
/// normals, pruning on the best possible completion of every partial dot
/// product. Visits in lexicographic order.
fn walk_section(n: usize, total: i64, primitives: &[&[i64]], visit: impl FnMut(&[i64])) {
    let offsets = vec![0i64; primitives.len()];
    walk_section_offset(n, total, primitives, &offsets, visit);
}

/// All lattice points with `|α| = d·n` on the nonnegative side of every
/// normal. `d = 0` yields the origin alone.
pub fn cone_section(cone: &ConeDescription, degree: usize) -> DegreeSection {
    let n = cone.n();
    let total = (degree * n) as i64;
    let primitives: Vec<&[i64]> = cone.normals().iter().map(|nu| nu.primitive()).collect();
    let mut points = Vec::new();
    walk_section(n, total, &primitives, |coords| {
        points.push(LatticeVector::from_raw(coords.to_vec()));
    });
    DegreeSection { degree, points }
}

fn section_len(cone: &ConeDescription, degree: usize) -> usize {
    let n = cone.n();
    let total = (degree * n) as i64;
    let primitives: Vec<&[i64]> = cone.normals().iter().map(|nu| nu.primitive()).collect();
    let mut count = 0usize;
    walk_section(n, total, &primitives, |_| count += 1);
    count
}

/// Rank over the rationals of a set of lattice vectors, via fraction-free
/// (Bareiss) elimination over arbitrary-precision integers.
pub fn rank_exact(vectors: &[LatticeVector]) -> usize {
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.coords().iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    rank_exact_rows(rows)
}

fn rank_exact_rows(mut m: Vec<Vec<BigInt>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let nrows = m.len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot_row) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            let factor = m[r][col].clone();
            for c in col + 1..ncols {
                let num = &pivot * &m[r][c] - &factor * &m[rank][c];
                debug_assert!((&num % &prev).is_zero());
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Per-normal facet verification report.
#[derive(Clone, Debug, Serialize)]
pub struct NormalCheck {
    /// Primitive form of the normal under test.
    pub normal: Vec<i64>,
    /// (a) every generator lies on the nonnegative side.
    pub supports_generators: bool,
    /// Rank of the generators lying on the hyperplane.
    pub hyperplane_rank: usize,
    /// (b) that rank equals `n − 1`.
    pub rank_ok: bool,
    /// (c) level at which dropping the normal enlarges the lattice section,
    /// if one was found by the escalation bound.
    pub enlarged_at: Option<usize>,
}

impl NormalCheck {
    pub fn pass(&self) -> bool {
        self.supports_generators && self.rank_ok && self.enlarged_at.is_some()
    }
}

/// Facet verification summary.
#[derive(Clone, Debug, Serialize)]
pub struct FacetReport {
    pub n: usize,
    pub checks: Vec<NormalCheck>,
    pub pass: bool,
}

/// Degree levels tried by the irredundancy check: a removed facet is expected
/// to admit an integer witness by level 2; level 3 is the escalation step.
const IRREDUNDANCY_LEVELS: usize = 3;

/// Searches for a lattice point of level `d` that satisfies every normal of
/// `cone` but has coordinate `axis` strictly negative. Certifies that the
/// dropped coordinate halfspace bounded the cone.
fn coordinate_drop_witness(cone: &ConeDescription, axis: usize, degree: usize) -> bool {
    let n = cone.n();
    let total = (degree * n) as i64;
    let reduced: Vec<Vec<i64>> = cone
        .normals()
        .iter()
        .map(|nu| {
            nu.primitive()
                .iter()
                .enumerate()
                .filter(|(k, _)| k + 1 != axis)
                .map(|(_, &c)| c)
                .collect()
        })
        .collect();
    let reduced_refs: Vec<&[i64]> = reduced.iter().map(|r| r.as_slice()).collect();
    for deficit in 1..=total + n as i64 {
        // Fix α_axis = −deficit; the rest are nonnegative with sum
        // total + deficit, checked against the remaining normals.
        let offsets: Vec<i64> = cone
            .normals()
            .iter()
            .map(|nu| -deficit * nu.primitive()[axis - 1])
            .collect();
        let mut found = false;
        walk_section_offset(n - 1, total + deficit, &reduced_refs, &offsets, |_| {
            found = true;
        });
        if found {
            return true;
        }
    }
    false
}

/// `walk_section` with initial dot-product offsets (used when one coordinate
/// has been fixed beforehand).
fn walk_section_offset(
    n: usize,
    total: i64,
    primitives: &[&[i64]],
    offsets: &[i64],
    mut visit: impl FnMut(&[i64]),
) {
    // suffix_max[m][k] = max of primitive m over coordinates k..n.
    let suffix_max: Vec<Vec<i64>> = primitives
        .iter()
        .map(|p| {
            let mut sm = vec![i64::MIN; n + 1];
            for k in (0..n).rev() {
                sm[k] = sm[k + 1].max(p[k]);
            }
            sm
        })
        .collect();
    let mut coords = vec![0i64; n];
    let mut dots = offsets.to_vec();

    fn rec(
        pos: usize,
        remaining: i64,
        coords: &mut Vec<i64>,
        dots: &mut Vec<i64>,
        primitives: &[&[i64]],
        suffix_max: &[Vec<i64>],
        visit: &mut impl FnMut(&[i64]),
    ) {
        let n = coords.len();
        if pos == n {
            if dots.iter().all(|&d| d >= 0) {
                visit(coords);
            }
            return;
        }
        // Bound: even the most favorable completion cannot rescue the dot.
        for (m, &dot) in dots.iter().enumerate() {
            let best = suffix_max[m][pos];
            if dot + if best > 0 { best * remaining } else { 0 } < 0 {
                return;
            }
        }
        let min_here = if pos + 1 == n { remaining } else { 0 };
        for v in min_here..=remaining {
            coords[pos] = v;
            for (m, p) in primitives.iter().enumerate() {
                dots[m] += p[pos] * v;
            }
            rec(pos + 1, remaining - v, coords, dots, primitives, suffix_max, visit);
            for (m, p) in primitives.iter().enumerate() {
                dots[m] -= p[pos] * v;
            }
            coords[pos] = 0;
        }
    }

    rec(0, total, &mut coords, &mut dots, primitives, &suffix_max, &mut visit);
}

/// Verifies that every stored normal is an irredundant facet of the cone:
/// (a) all degree-1 generators satisfy it, (b) the generators on its
/// hyperplane span rank `n − 1`, and (c) dropping it strictly enlarges some
/// lattice section at low level.
pub fn verify_facets(cone: &ConeDescription, generators: &DegreeSection) -> FacetReport {
    let n = cone.n();
    let mut checks = Vec::with_capacity(cone.normals().len());
    for (idx, normal) in cone.normals().iter().enumerate() {
        let supports_generators = generators
            .points
            .iter()
            .all(|p| normal.evaluate_coords(p.coords()) >= 0);

        let on_hyperplane: Vec<LatticeVector> = generators
            .points
            .iter()
            .filter(|p| normal.evaluate_coords(p.coords()) == 0)
            .cloned()
            .collect();
        let hyperplane_rank = rank_exact(&on_hyperplane);
        let rank_ok = hyperplane_rank == n - 1;

        let without = cone.without_normal(idx);
        let mut enlarged_at = None;
        for d in 1..=IRREDUNDANCY_LEVELS {
            let grew = match normal.coordinate_axis() {
                Some(axis) => coordinate_drop_witness(&without, axis, d),
                None => section_len(&without, d) > section_len(cone, d),
            };
            if grew {
                enlarged_at = Some(d);
                break;
            }
        }

        checks.push(NormalCheck {
            normal: normal.primitive().to_vec(),
            supports_generators,
            hyperplane_rank,
            rank_ok,
            enlarged_at,
        });
    }
    let pass = checks.iter().all(NormalCheck::pass);
    FacetReport { n, checks, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::family_presentation;
    use crate::polymatroid::enumerate_bases;

    fn fam(n: usize, i: usize, t: usize) -> FamilyParams {
        FamilyParams::new(n, i, t).unwrap()
    }

    #[test]
    fn single_family_cone_has_five_normals() {
        let cone = build_cone(&[fam(4, 1, 0)], 4).unwrap();
        assert_eq!(cone.normals().len(), 5);
        let primitives: Vec<&[i64]> = cone.normals().iter().map(|nu| nu.primitive()).collect();
        assert!(primitives.contains(&[-1i64, 1, 1, 1].as_slice()));
        assert!(primitives.contains(&[1i64, 0, 0, 0].as_slice()));
        assert!(primitives.contains(&[0i64, 0, 0, 1].as_slice()));
    }

    #[test]
    fn pair_cone_has_six_normals() {
        let cone = build_cone(&[fam(4, 2, 0), fam(4, 2, 1)], 4).unwrap();
        assert_eq!(cone.normals().len(), 6);
    }

    #[test]
    fn duplicate_families_dedup() {
        let once = build_cone(&[fam(4, 1, 0)], 4).unwrap();
        let twice = build_cone(&[fam(4, 1, 0), fam(4, 1, 0)], 4).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn build_cone_rejects_mismatched_n() {
        assert!(build_cone(&[fam(4, 1, 0), fam(5, 1, 0)], 4).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let nu = FacetNormal::from_vector(vec![-2, 2, 2, 2]).unwrap();
        let ones = LatticeVector::new(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(evaluate(&nu, &ones).unwrap(), 2);

        let e1 = FacetNormal::from_vector(vec![1, 0, 0, 0]).unwrap();
        let v = LatticeVector::new(vec![0, 4, 0, 0]).unwrap();
        assert_eq!(evaluate(&e1, &v).unwrap(), 0);

        let nu = FacetNormal::from_vector(vec![-1, 2, 2]).unwrap();
        let v = LatticeVector::new(vec![3, 0, 0]).unwrap();
        assert_eq!(evaluate(&nu, &v).unwrap(), -3);
    }

    #[test]
    fn evaluate_rejects_dimension_mismatch() {
        let nu = FacetNormal::from_vector(vec![1, 0]).unwrap();
        let v = LatticeVector::new(vec![1, 1, 1]).unwrap();
        assert!(evaluate(&nu, &v).is_err());
    }

    #[test]
    fn section_degree_zero_is_origin() {
        let cone = build_cone(&[fam(3, 1, 0)], 3).unwrap();
        let s = cone_section(&cone, 0);
        assert_eq!(s.points, vec![LatticeVector::zero(3)]);
    }

    #[test]
    fn section_counts_for_n3_family() {
        let cone = build_cone(&[fam(3, 1, 0)], 3).unwrap();
        // 10 weak compositions of 3, one of which (3,0,0) violates the window.
        assert_eq!(cone_section(&cone, 1).points.len(), 9);
        // 28 compositions of 6 minus the three with α₁ ≥ 5.
        assert_eq!(cone_section(&cone, 2).points.len(), 25);
    }

    #[test]
    fn degree_one_section_equals_base_set() {
        for n in 3..=6usize {
            for i in 1..n {
                for t in 0..n {
                    let params = fam(n, i, t);
                    let cone = build_cone(&[params], n).unwrap();
                    let section = cone_section(&cone, 1);
                    let bases = enumerate_bases(&family_presentation(&params));
                    assert_eq!(section.points, bases.points(), "n={n} i={i} t={t}");
                }
            }
        }
    }

    #[test]
    fn pair_sections_match_base_intersections() {
        for n in 4..=5usize {
            for i1 in 1..=n - 2 {
                for i2 in 1..=n - 2 {
                    for t2 in 0..n {
                        let f1 = fam(n, i1, 0);
                        let f2 = fam(n, i2, t2);
                        let cone = build_cone(&[f1, f2], n).unwrap();
                        let section = cone_section(&cone, 1);
                        let a = enumerate_bases(&family_presentation(&f1));
                        let b = enumerate_bases(&family_presentation(&f2));
                        let both = a.intersect(&b).unwrap();
                        assert_eq!(section.points, both.points(), "n={n} i1={i1} i2={i2} t2={t2}");
                    }
                }
            }
        }
    }

    #[test]
    fn rank_of_unit_vectors() {
        let units: Vec<LatticeVector> = (1..=4).map(|k| LatticeVector::unit(4, k)).collect();
        assert_eq!(rank_exact(&units), 4);
    }

    #[test]
    fn rank_of_degree_one_generators_is_full() {
        let cone = build_cone(&[fam(4, 1, 0)], 4).unwrap();
        let gens = cone_section(&cone, 1);
        assert_eq!(rank_exact(&gens.points), 4);
    }

    #[test]
    fn rank_on_window_hyperplane_is_three() {
        let cone = build_cone(&[fam(4, 1, 0)], 4).unwrap();
        let gens = cone_section(&cone, 1);
        let nu = nu_vector(4, 0, 1).unwrap();
        let on: Vec<LatticeVector> = gens
            .points
            .into_iter()
            .filter(|p| nu.evaluate_coords(p.coords()) == 0)
            .collect();
        assert!(!on.is_empty());
        assert_eq!(rank_exact(&on), 3);
    }

    #[test]
    fn verify_facets_single_family() {
        let cone = build_cone(&[fam(4, 1, 0)], 4).unwrap();
        let gens = cone_section(&cone, 1);
        let report = verify_facets(&cone, &gens);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.checks.len(), 5);
    }

    #[test]
    fn verify_facets_pair() {
        let cone = build_cone(&[fam(4, 2, 0), fam(4, 2, 1)], 4).unwrap();
        let gens = cone_section(&cone, 1);
        let report = verify_facets(&cone, &gens);
        assert!(report.pass, "{report:?}");
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn redundant_normal_fails_enlargement() {
        let mut normals: Vec<FacetNormal> = build_cone(&[fam(4, 1, 0)], 4)
            .unwrap()
            .normals()
            .to_vec();
        // e₁ + e₂ scaled: implied by the coordinate halfspaces.
        normals.push(FacetNormal::from_vector(vec![3, 3, 0, 0]).unwrap());
        let cone = ConeDescription::from_normals(4, normals).unwrap();
        let gens = cone_section(&cone, 1);
        let report = verify_facets(&cone, &gens);
        assert!(!report.pass);
        let doubled = report
            .checks
            .iter()
            .find(|c| c.normal == vec![1, 1, 0, 0])
            .unwrap();
        assert_eq!(doubled.enlarged_at, None);
    }

    #[test]
    fn cone_json_uses_sorted_primitives() {
        let cone = build_cone(&[fam(4, 1, 0)], 4).unwrap();
        let json = serde_json::to_string(&cone).unwrap();
        assert_eq!(
            json,
            r#"{"n":4,"normals":[[-1,1,1,1],[0,0,0,1],[0,0,1,0],[0,1,0,0],[1,0,0,0]]}"#
        );
        let back: ConeDescription = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cone);
    }
}
