//! Projective space `P^{m-1}(F_q)`, the left action `v -> Q^{-1} v` of
//! `GL_m(F_q)` on it, and permutation cycle-type machinery.
//!
//! Points are kept in canonical form (first nonzero coordinate scaled to 1)
//! and enumerated in a fixed lexicographic order, so permutations realized
//! over that enumeration compare index-wise across runs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fq::{Field, FieldElem};
use crate::fqmat::MatFq;

/// A point of `P^{m-1}(F_q)` in canonical form: not the zero vector, first
/// nonzero coordinate equal to 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<FieldElem>,
}

impl ProjPoint {
    /// Canonicalize a nonzero vector by scaling so its first nonzero
    /// coordinate is 1.
    pub fn new(coords: Vec<FieldElem>) -> Result<ProjPoint> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::domain("zero vector has no projective class"))?;
        if lead.is_one() {
            return Ok(ProjPoint { coords });
        }
        let inv = lead.inverse()?;
        let coords = coords.iter().map(|c| c * &inv).collect();
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

type PointCache = Mutex<HashMap<(u64, u32, usize), Arc<Vec<ProjPoint>>>>;

fn point_cache() -> &'static PointCache {
    static CACHE: OnceLock<PointCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All `(q^m - 1)/(q - 1)` canonical points of `P^{m-1}(F_q)`, sorted
/// lexicographically by coordinates. Results are cached per `(field, m)`;
/// concurrent fills are idempotent.
pub fn enumerate_points(field: &Field, m: usize) -> Arc<Vec<ProjPoint>> {
    let key = (field.characteristic(), field.extension_degree(), m);
    if let Some(points) = point_cache().lock().unwrap().get(&key) {
        return points.clone();
    }
    let elems = field.elements(); // already in lex order
    let mut points = Vec::new();
    // leading zeros descending: (0,..,0,1,*) sorts before (1,*,..)
    for lead in (0..m).rev() {
        let free = m - lead - 1;
        let mut idx = vec![0usize; free];
        loop {
            let mut coords = vec![field.zero(); lead];
            coords.push(field.one());
            coords.extend(idx.iter().map(|&i| elems[i].clone()));
            points.push(ProjPoint { coords });
            let mut i = free;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < elems.len() {
                    break;
                }
                idx[i] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    let points = Arc::new(points);
    point_cache().lock().unwrap().entry(key).or_insert_with(|| points.clone()).clone()
}

/// Apply the action `v -> Q^{-1} v` and re-canonicalize.
pub fn act(q: &MatFq, v: &ProjPoint) -> Result<ProjPoint> {
    if q.dim() != v.dim() {
        return Err(Error::domain("dimension mismatch between matrix and point"));
    }
    let inv = q.inverse().map_err(|_| Error::domain("action requires an invertible matrix"))?;
    ProjPoint::new(inv.mul_vec(v.coords()))
}

/// The permutation of `P^{m-1}(F_q)` induced by `v -> Q^{-1} v`, realized
/// over the canonical point enumeration.
pub fn action_permutation(q: &MatFq) -> Result<Perm> {
    let points = enumerate_points(q.field(), q.dim());
    let index: BTreeMap<&ProjPoint, usize> =
        points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let inv = q.inverse().map_err(|_| Error::domain("action requires an invertible matrix"))?;
    let images = points
        .iter()
        .map(|p| {
            let image = ProjPoint::new(inv.mul_vec(p.coords()))?;
            Ok(index[&image])
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(Perm { domain: points, images })
}

/// A permutation of the canonical point list, stored as an image index
/// array. Equality is index-wise over the shared enumeration.
#[derive(Clone, PartialEq, Eq)]
pub struct Perm {
    domain: Arc<Vec<ProjPoint>>,
    images: Vec<usize>,
}

impl Perm {
    pub fn from_images(domain: Arc<Vec<ProjPoint>>, images: Vec<usize>) -> Result<Perm> {
        if !is_bijection(&images) {
            return Err(Error::domain("image array is not a bijection"));
        }
        if images.len() != domain.len() {
            return Err(Error::domain("image array does not match the domain size"));
        }
        Ok(Perm { domain, images })
    }

    pub fn domain(&self) -> &[ProjPoint] {
        &self.domain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Composition `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.domain.len(), other.domain.len());
        let images = other.images.iter().map(|&j| self.images[j]).collect();
        Perm { domain: self.domain.clone(), images }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { domain: self.domain.clone(), images }
    }

    pub fn cycle_type(&self) -> CycleType {
        cycle_type_of_images(&self.images)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({:?})", self.images)
    }
}

fn is_bijection(images: &[usize]) -> bool {
    let mut seen = vec![false; images.len()];
    for &j in images {
        if j >= images.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

/// Cycle-length multiset of a permutation, with the fixed-point count and
/// the sign broken out. Length-1 cycles are included in the map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleType {
    pub cycles: BTreeMap<u64, u64>,
    pub fixed: u64,
    pub sign: i8,
}

impl CycleType {
    pub fn total_points(&self) -> u64 {
        self.cycles.iter().map(|(len, count)| len * count).sum()
    }
}

/// Extract the cycle type directly from an image index array (which must be
/// a bijection).
pub fn cycle_type_of_images(images: &[usize]) -> CycleType {
    debug_assert!(is_bijection(images));
    let mut seen = vec![false; images.len()];
    let mut cycles: BTreeMap<u64, u64> = BTreeMap::new();
    let mut transpositions = 0u64;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = images[at];
            len += 1;
        }
        *cycles.entry(len).or_insert(0) += 1;
        transpositions += len - 1;
    }
    let fixed = cycles.get(&1).copied().unwrap_or(0);
    let sign = if transpositions % 2 == 0 { 1 } else { -1 };
    CycleType { cycles, fixed, sign }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqmat::enumerate_gl;
    use rand::SeedableRng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn mat(field: &Field, rows: &[Vec<i64>]) -> MatFq {
        MatFq::from_ints(field, rows).unwrap()
    }

    #[test]
    fn enumeration_counts_and_order() {
        let pts = enumerate_points(&f(3), 2);
        let rendered: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        assert_eq!(rendered, vec!["(0:1)", "(1:0)", "(1:1)", "(1:2)"]);
        assert_eq!(enumerate_points(&f(2), 3).len(), 7);
        assert_eq!(enumerate_points(&f(5), 2).len(), 6);
    }

    #[test]
    fn canonicalization_examples() {
        let f3 = f(3);
        let f5 = f(5);
        let p = ProjPoint::new(vec![f3.from_int(2), f3.from_int(2)]).unwrap();
        assert_eq!(p.to_string(), "(1:1)");
        let p = ProjPoint::new(vec![f5.from_int(0), f5.from_int(4)]).unwrap();
        assert_eq!(p.to_string(), "(0:1)");
        // scale by 2 = 2^{-1} mod 3
        let p = ProjPoint::new(vec![f3.from_int(2), f3.from_int(1)]).unwrap();
        assert_eq!(p.to_string(), "(1:2)");
        assert!(ProjPoint::new(vec![f3.zero(), f3.zero()]).is_err());
    }

    #[test]
    fn action_examples() {
        let f3 = f(3);
        // 5*I reduced mod 3 acts on the kernel point of the worked example
        let q = mat(&f3, &[vec![2, 0], vec![0, 1]]);
        let v = ProjPoint::new(vec![f3.from_int(1), f3.from_int(2)]).unwrap();
        assert_eq!(act(&q, &v).unwrap().to_string(), "(1:1)");

        let id = MatFq::identity(&f3, 2);
        for p in enumerate_points(&f3, 2).iter() {
            assert_eq!(&act(&id, p).unwrap(), p);
        }

        let q = mat(&f3, &[vec![0, 2], vec![1, 0]]);
        assert_eq!(q.inverse().unwrap(), mat(&f3, &[vec![0, 1], vec![2, 0]]));
        let v = ProjPoint::new(vec![f3.from_int(1), f3.from_int(0)]).unwrap();
        assert_eq!(act(&q, &v).unwrap().to_string(), "(0:1)");

        assert!(act(&mat(&f3, &[vec![1, 1], vec![1, 1]]), &v).is_err());
    }

    #[test]
    fn permutation_examples() {
        let f2 = f(2);
        let f3 = f(3);
        assert!(action_permutation(&MatFq::identity(&f3, 2)).unwrap().is_identity());

        // Q^2 = -I is scalar: two 2-cycles, no fixed points
        let perm = action_permutation(&mat(&f3, &[vec![0, 2], vec![1, 0]])).unwrap();
        let ct = perm.cycle_type();
        assert_eq!(ct.fixed, 0);
        assert_eq!(ct.cycles, BTreeMap::from([(2, 2)]));
        assert_eq!(ct.sign, 1);

        let perm = action_permutation(&mat(&f2, &[vec![1, 0], vec![1, 1]])).unwrap();
        let ct = perm.cycle_type();
        assert_eq!(ct.fixed, 1);
        assert_eq!(ct.cycles, BTreeMap::from([(1, 1), (2, 1)]));
    }

    #[test]
    fn cycle_type_examples() {
        let ct = cycle_type_of_images(&[0, 1, 2, 3]);
        assert_eq!(ct.cycles, BTreeMap::from([(1, 4)]));
        assert_eq!(ct.fixed, 4);
        assert_eq!(ct.sign, 1);
        assert_eq!(ct.total_points(), 4);

        let ct = cycle_type_of_images(&[1, 2, 0]);
        assert_eq!(ct.cycles, BTreeMap::from([(3, 1)]));
        assert_eq!(ct.sign, 1);
    }

    #[test]
    fn cycle_type_serializes_with_decimal_keys() {
        let ct = cycle_type_of_images(&[0, 1, 2, 3]);
        assert_eq!(
            serde_json::to_string(&ct).unwrap(),
            r#"{"cycles":{"1":4},"fixed":4,"sign":1}"#
        );
    }

    /// Composition reverses products: the permutation of `Q1` after the
    /// permutation of `Q2` equals the permutation of `Q2 * Q1`.
    #[test]
    fn action_is_an_anti_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (p, m) in [(3u64, 2usize), (2, 3), (5, 2)] {
            let field = f(p);
            for _ in 0..25 {
                let q1 = MatFq::random_invertible(&field, m, &mut rng);
                let q2 = MatFq::random_invertible(&field, m, &mut rng);
                let lhs = action_permutation(&q1)
                    .unwrap()
                    .compose(&action_permutation(&q2).unwrap());
                let rhs = action_permutation(&q2.mul(&q1)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn identity_permutation_iff_scalar() {
        for p in [2u64, 3] {
            let field = f(p);
            for q in enumerate_gl(&field, 2) {
                let perm = action_permutation(&q).unwrap();
                assert_eq!(perm.is_identity(), q.is_scalar(), "failed for {q}");
            }
        }
    }

    #[test]
    fn inverse_action_has_same_cycle_type() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (p, m) in [(3u64, 2usize), (5, 2), (2, 3)] {
            let field = f(p);
            for _ in 0..25 {
                let q = MatFq::random_invertible(&field, m, &mut rng);
                let a = action_permutation(&q).unwrap().cycle_type();
                let b = action_permutation(&q.inverse().unwrap()).unwrap().cycle_type();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn perm_composed_with_inverse_is_identity() {
        let f3 = f(3);
        let q = mat(&f3, &[vec![1, 1], vec![0, 1]]);
        let perm = action_permutation(&q).unwrap();
        assert!(perm.compose(&perm.inverse()).is_identity());
        assert!(perm.inverse().compose(&perm).is_identity());
    }
}
