//! The Hurwitz quaternion order: exact arithmetic over the integral basis
//! `{1, i, j, w}` with `w = (-1+i+j+ij)/2`, right-gcd factorization, prime
//! classes up to left units, metacommutation, the splitting map into
//! `M_2(F_p)` at odd primes, and the commuting-diagram check against the
//! projective action on `P^1(F_p)`.
//!
//! Coordinates in the `{1, i, j, w}` basis are plain integers, so
//! primitivity is a coordinate gcd and no half-integer storage is needed.
//! Products are computed by passing through doubled `{1, i, j, k}`
//! coordinates, which are integral for every Hurwitz quaternion.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fault;
use crate::fq::Field;
use crate::fqmat::MatFq;
use crate::projective::{self, ProjPoint};

/// A Hurwitz quaternion `a + b*i + c*j + d*w`, `w = (-1+i+j+ij)/2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quaternion {
    coords: [i64; 4],
}

impl Quaternion {
    pub fn new(coords: [i64; 4]) -> Quaternion {
        Quaternion { coords }
    }

    pub fn scalar(n: i64) -> Quaternion {
        Quaternion { coords: [n, 0, 0, 0] }
    }

    pub fn zero() -> Quaternion {
        Quaternion::scalar(0)
    }

    pub fn one() -> Quaternion {
        Quaternion::scalar(1)
    }

    pub fn coords(&self) -> [i64; 4] {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0, 0, 0, 0]
    }

    /// Doubled coordinates in the rational basis `{1, i, j, k}`: twice the
    /// quaternion, which is always integral for Hurwitz elements.
    pub fn to_ijk_doubled(&self) -> [i64; 4] {
        let [a, b, c, d] = self.coords;
        [2 * a - d, 2 * b + d, 2 * c + d, d]
    }

    fn from_ijk_doubled(doubled: [i64; 4]) -> Result<Quaternion> {
        let [w, x, y, z] = doubled;
        let parity = w.rem_euclid(2);
        if [x, y, z].iter().any(|v| v.rem_euclid(2) != parity) {
            return Err(Error::domain(
                "coordinates are not a Hurwitz integer: components must be all integral or all half-integral",
            ));
        }
        Ok(Quaternion { coords: [(w + z) / 2, (x - z) / 2, (y - z) / 2, z] })
    }

    /// Build from `{1, i, j, k}` coordinates `nums / den`, `den` 1 or 2.
    /// Half-integer combinations that are not Hurwitz are rejected.
    pub fn from_ijk(nums: [i64; 4], den: i64) -> Result<Quaternion> {
        match den {
            1 => Quaternion::from_ijk_doubled(nums.map(|v| 2 * v)),
            2 => Quaternion::from_ijk_doubled(nums),
            _ => Err(Error::domain("denominator must be 1 or 2")),
        }
    }

    pub fn conj(&self) -> Quaternion {
        let [a, b, c, d] = self.coords;
        Quaternion { coords: [a - d, -b, -c, -d] }
    }

    /// Reduced norm: multiplicative, nonnegative, zero only at zero.
    pub fn nrd(&self) -> i64 {
        let [w, x, y, z] = self.to_ijk_doubled().map(i128::from);
        let four_n = w * w + x * x + y * y + z * z;
        debug_assert_eq!(four_n % 4, 0);
        i64::try_from(four_n / 4).expect("norm fits in i64")
    }

    /// Reduced trace.
    pub fn trd(&self) -> i64 {
        2 * self.coords[0] - self.coords[3]
    }

    /// True when no integer `>= 2` divides all four coordinates.
    pub fn is_primitive(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::domain("the zero quaternion is neither primitive nor imprimitive"));
        }
        let g = self.coords.iter().fold(0i64, |acc, &c| acc.gcd(&c));
        Ok(g == 1)
    }

    /// `self * rhs^{-1}`, provided the quotient is a Hurwitz integer.
    pub fn div_exact_right(&self, rhs: &Quaternion) -> Result<Quaternion> {
        let n = rhs.nrd();
        if n == 0 {
            return Err(Error::domain("division by zero"));
        }
        let num = self * &rhs.conj();
        let mut coords = [0i64; 4];
        for (out, v) in coords.iter_mut().zip(num.coords) {
            if v % n != 0 {
                return Err(Error::consistency("quaternion quotient is not integral".to_string()));
            }
            *out = v / n;
        }
        Ok(Quaternion { coords })
    }

    pub fn divides_on_right(&self, of: &Quaternion) -> bool {
        of.div_exact_right(self).is_ok()
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coords;
        write!(f, "[{a},{b},{c},{d}]")
    }
}

impl std::ops::Add<&Quaternion> for &Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: &Quaternion) -> Quaternion {
        let mut coords = [0i64; 4];
        for (i, out) in coords.iter_mut().enumerate() {
            *out = self.coords[i] + rhs.coords[i];
        }
        Quaternion { coords }
    }
}

impl std::ops::Sub<&Quaternion> for &Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: &Quaternion) -> Quaternion {
        let mut coords = [0i64; 4];
        for (i, out) in coords.iter_mut().enumerate() {
            *out = self.coords[i] - rhs.coords[i];
        }
        Quaternion { coords }
    }
}

impl std::ops::Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion { coords: self.coords.map(|c| -c) }
    }
}

impl std::ops::Mul<&Quaternion> for &Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: &Quaternion) -> Quaternion {
        let [w1, x1, y1, z1] = self.to_ijk_doubled().map(i128::from);
        let [w2, x2, y2, z2] = rhs.to_ijk_doubled().map(i128::from);
        // Hamilton product of the doubled coordinates is 4x the true
        // product, i.e. twice the doubled coordinates of the product.
        let prod = [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ];
        let doubled = prod.map(|v| {
            debug_assert_eq!(v % 2, 0);
            i64::try_from(v / 2).expect("product coordinate fits in i64")
        });
        Quaternion::from_ijk_doubled(doubled).expect("product of Hurwitz integers is Hurwitz")
    }
}

/// The 24 units: exactly the elements of reduced norm 1.
pub fn units() -> &'static [Quaternion] {
    static UNITS: OnceLock<Vec<Quaternion>> = OnceLock::new();
    UNITS.get_or_init(|| {
        let mut out = Vec::new();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    for d in -2i64..=2 {
                        let q = Quaternion::new([a, b, c, d]);
                        if q.nrd() == 1 {
                            out.push(q);
                        }
                    }
                }
            }
        }
        assert_eq!(out.len(), 24);
        out
    })
}

/// Canonical representative of the left unit class: the lexicographically
/// smallest coordinate tuple among the 24 left associates.
pub fn canonical_class(q: &Quaternion) -> Result<Quaternion> {
    if q.is_zero() {
        return Err(Error::domain("the zero quaternion has no unit class"));
    }
    Ok(units().iter().map(|u| u * q).min().expect("unit orbit is nonempty"))
}

/// Right gcd: a generator of the left ideal `O*a + O*b`, computed by the
/// right-Euclidean algorithm and returned as a canonical class
/// representative.
pub fn right_gcd(a: &Quaternion, b: &Quaternion) -> Result<Quaternion> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::domain("gcd of two zeros is undefined"));
    }
    let mut x = *a;
    let mut y = *b;
    while !y.is_zero() {
        let r = euclidean_step(&x, &y)?;
        x = y;
        y = r;
    }
    canonical_class(&x)
}

/// One division step: `x - q*y` with strictly smaller norm. The quotient is
/// a nearest Hurwitz integer to `x * y^{-1}`; trying the nearest integral
/// point and the nearest half-integral point of the rational quaternion
/// always yields a remainder of norm at most half the divisor's.
fn euclidean_step(x: &Quaternion, y: &Quaternion) -> Result<Quaternion> {
    let n = i128::from(y.nrd());
    let num = x * &y.conj();
    let u = num.to_ijk_doubled().map(i128::from); // doubled numerator of x/y
    let den = 2 * n;

    let round_nearest = |num: i128, den: i128| -> i64 {
        i64::try_from(Integer::div_floor(&(2 * num + den), &(2 * den)))
            .expect("quotient fits in i64")
    };

    // nearest point with integral {1,i,j,k} coordinates
    let lipschitz =
        Quaternion::from_ijk(u.map(|c| round_nearest(c, den)), 1).expect("integers are Hurwitz");
    // nearest point with all-odd half coordinates
    let half = Quaternion::from_ijk(u.map(|c| 2 * round_nearest(2 * c - den, 2 * den) + 1), 2)
        .expect("all-odd halves are Hurwitz");

    for q in [lipschitz, half] {
        let r = x - &(&q * y);
        if r.nrd() < y.nrd() {
            return Ok(r);
        }
    }
    Err(Error::consistency(
        "no rounding candidate reduced the norm; the covering-radius bound was violated".to_string(),
    ))
}

/// Factor a primitive quaternion into factors of the listed prime norms, in
/// product order: `out[i]` has norm `primes[i]` and the product of the list
/// is exactly the input (the trailing unit is absorbed into the leftmost
/// factor). The rightmost factor is peeled first via the right gcd with the
/// last listed prime.
pub fn factor_by_primes(alpha: &Quaternion, primes: &[u64]) -> Result<Vec<Quaternion>> {
    if !alpha.is_primitive()? {
        return Err(Error::domain("quaternion is imprimitive: an integer >= 2 divides it"));
    }
    let product: i64 = primes.iter().try_fold(1i64, |acc, &p| {
        acc.checked_mul(i64::try_from(p).ok()?)
    }).ok_or_else(|| Error::capacity("prime product overflows".to_string()))?;
    if alpha.nrd() != product {
        return Err(Error::domain(format!(
            "norm {} is not the product of the listed primes",
            alpha.nrd()
        )));
    }
    let mut rev_factors = Vec::with_capacity(primes.len());
    let mut remaining = *alpha;
    for &p in primes.iter().rev() {
        let g = right_gcd(&remaining, &Quaternion::scalar(p as i64))?;
        if g.nrd() != p as i64 {
            return Err(Error::consistency(format!(
                "right factor has norm {}, expected {p}",
                g.nrd()
            )));
        }
        remaining = remaining.div_exact_right(&g)?;
        rev_factors.push(g);
    }
    if remaining.nrd() != 1 {
        return Err(Error::consistency("peeling left a non-unit".to_string()));
    }
    let leftmost = rev_factors.pop().expect("at least one prime");
    rev_factors.push(&remaining * &leftmost);
    rev_factors.reverse();
    let mut check = Quaternion::one();
    for f in &rev_factors {
        check = &check * f;
    }
    if check != *alpha {
        return Err(Error::consistency("factor chain does not multiply back".to_string()));
    }
    Ok(rev_factors)
}

type ClassCache = Mutex<HashMap<u64, &'static Vec<Quaternion>>>;

fn class_cache() -> &'static ClassCache {
    static CACHE: OnceLock<ClassCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The classes of reduced norm `p` up to left units, for odd primes `p`:
/// exactly `p + 1` of them, sorted by canonical representative. The prime 2
/// is ramified (a single class, trivial permutation) and rejected.
pub fn primes_of_norm(p: u64) -> Result<&'static [Quaternion]> {
    if p == 2 {
        return Err(Error::domain(
            "2 is ramified: a single class on which every metacommutation acts trivially",
        ));
    }
    if p % 2 == 0 || !is_prime_u64(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    if let Some(classes) = class_cache().lock().unwrap().get(&p) {
        return Ok(classes);
    }
    let mut set: BTreeSet<Quaternion> = BTreeSet::new();
    let p_i64 = p as i64;
    let bound = (4.0 * p as f64).sqrt() as i64 + 1;
    for d in -bound..=bound {
        let lo = (d - bound).div_euclid(2) - 1;
        let hi = (d + bound).div_euclid(2) + 1;
        for a in lo..=hi {
            for b in lo..=hi {
                for c in lo..=hi {
                    let q = Quaternion::new([a, b, c, d]);
                    if q.nrd() == p_i64 {
                        set.insert(canonical_class(&q)?);
                    }
                }
            }
        }
    }
    if set.len() as u64 != p + 1 {
        return Err(Error::consistency(format!(
            "found {} classes of norm {p}, expected {}",
            set.len(),
            p + 1
        )));
    }
    let classes: &'static Vec<Quaternion> = Box::leak(Box::new(set.into_iter().collect()));
    class_cache().lock().unwrap().insert(p, classes);
    Ok(classes)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Metacommutation: rewrite `pi * w = w' * pi'` where `pi` has odd prime
/// norm `p` and `nrd(w)` is coprime to `p`. Returns the canonical class of
/// `pi'` together with the exact left factor `w'`.
pub fn metacommute(pi: &Quaternion, w: &Quaternion) -> Result<(Quaternion, Quaternion)> {
    let p = pi.nrd();
    if p < 3 || p % 2 == 0 || !is_prime_u64(p as u64) {
        return Err(Error::domain(format!("norm {p} is not an odd prime")));
    }
    if w.nrd().gcd(&p) != 1 {
        return Err(Error::domain(format!(
            "nrd(w) = {} is not coprime to {p}",
            w.nrd()
        )));
    }
    let product = pi * w;
    let pi_prime = right_gcd(&product, &Quaternion::scalar(p))?;
    if pi_prime.nrd() != p {
        return Err(Error::consistency(format!(
            "metacommuted factor has norm {}, expected {p}",
            pi_prime.nrd()
        )));
    }
    let w_prime = product.div_exact_right(&pi_prime)?;
    debug_assert_eq!(&w_prime * &pi_prime, product);
    debug_assert_eq!(w_prime.nrd(), w.nrd());
    Ok((pi_prime, w_prime))
}

/// The permutation induced by `w` on the norm-`p` classes, as an image
/// index array over the [`primes_of_norm`] ordering.
pub fn class_permutation(w: &Quaternion, p: u64) -> Result<Vec<usize>> {
    let classes = primes_of_norm(p)?;
    classes
        .iter()
        .map(|pi| {
            let (pi_prime, _) = metacommute(pi, w)?;
            classes
                .binary_search(&pi_prime)
                .map_err(|_| Error::consistency("image class not in the class list".to_string()))
        })
        .collect()
}

/// The reduction map of the order into `M_2(F_p)` at an odd prime: `i` and
/// `j` go to the standard split pair determined by the smallest
/// `(a, b)` with `a^2 + b^2 = -1 mod p`, and the kernel is `p * O`.
pub struct SplitMap {
    p: u64,
    field: Field,
    i_img: MatFq,
    j_img: MatFq,
    w_img: MatFq,
}

impl SplitMap {
    pub fn new(p: u64) -> Result<SplitMap> {
        if p == 2 {
            return Err(Error::domain("the order does not split at the ramified prime 2"));
        }
        if !is_prime_u64(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        let field = Field::prime(p)?;
        let (a, b) = (0..p as i64)
            .flat_map(|a| (0..p as i64).map(move |b| (a, b)))
            .find(|&(a, b)| (a * a + b * b + 1) % p as i64 == 0)
            .expect("-1 is a sum of two squares mod every odd prime");
        let i_img = MatFq::from_ints(&field, &[vec![a, b], vec![b, -a]])?;
        let j_img = MatFq::from_ints(&field, &[vec![0, 1], vec![-1, 0]])?;
        let k_img = i_img.mul(&j_img);
        let neg_identity = MatFq::from_ints(&field, &[vec![-1, 0], vec![0, -1]])?;
        if i_img.mul(&i_img) != neg_identity
            || j_img.mul(&j_img) != neg_identity
            || i_img.mul(&j_img).add(&j_img.mul(&i_img)) != MatFq::zero(&field, 2)
        {
            return Err(Error::consistency("split images do not satisfy i^2 = j^2 = -1, ij = -ji".to_string()));
        }
        // w = (-1 + i + j + k) / 2
        let two_inv = field.from_int(2).inverse()?;
        let w_img = neg_identity
            .add(&i_img)
            .add(&j_img)
            .add(&k_img)
            .mul(&MatFq::scalar(&field, 2, &two_inv));
        Ok(SplitMap { p, field, i_img, j_img, w_img })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn apply(&self, q: &Quaternion) -> MatFq {
        let [a, b, c, d] = q.coords();
        let mut out = MatFq::scalar(&self.field, 2, &self.field.from_int(a));
        out = out.add(&self.i_img.mul(&MatFq::scalar(&self.field, 2, &self.field.from_int(b))));
        out = out.add(&self.j_img.mul(&MatFq::scalar(&self.field, 2, &self.field.from_int(c))));
        out = out.add(&self.w_img.mul(&MatFq::scalar(&self.field, 2, &self.field.from_int(d))));
        out
    }
}

/// Commuting-diagram check at an odd prime: for every norm-`p` class, the
/// kernel point of the metacommuted class is the image of the original
/// kernel point under the projective action of the reduced `w`. Also checks
/// that class -> kernel point is a bijection onto `P^1(F_p)`.
pub fn diagram_commutes(w: &Quaternion, p: u64) -> Result<bool> {
    let split = SplitMap::new(p)?;
    if w.nrd().gcd(&(p as i64)) != 1 {
        return Err(Error::domain(format!("nrd(w) = {} is not coprime to {p}", w.nrd())));
    }
    let classes = primes_of_norm(p)?;
    let mut w_red = split.apply(w);
    if fault::active("diagram-h") {
        w_red = w_red.inverse().expect("reduced w is invertible");
    }
    let mut seen_points: BTreeSet<ProjPoint> = BTreeSet::new();
    for pi in classes {
        let reduced = split.apply(pi);
        if reduced.rank() != 1 {
            return Err(Error::consistency(format!(
                "reduction of a norm-{p} class has rank {}, expected 1",
                reduced.rank()
            )));
        }
        let before = reduced.kernel_point()?;
        seen_points.insert(before.clone());
        let (pi_prime, _) = metacommute(pi, w)?;
        let after = split.apply(&pi_prime).kernel_point()?;
        if projective::act(&w_red, &before)? != after {
            return Ok(false);
        }
    }
    if seen_points.len() as u64 != p + 1 {
        return Err(Error::consistency(format!(
            "classes map to {} distinct kernel points, expected {}",
            seen_points.len(),
            p + 1
        )));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn q(coords: [i64; 4]) -> Quaternion {
        Quaternion::new(coords)
    }

    fn random_quat(rng: &mut impl Rng, bound: i64) -> Quaternion {
        q([
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
        ])
    }

    #[test]
    fn norm_examples() {
        assert_eq!(q([1, 1, 0, 0]).nrd(), 2); // 1 + i
        assert_eq!(q([1, 1, 1, 0]).nrd(), 3); // 1 + i + j
        assert_eq!(q([0, 0, 0, 1]).nrd(), 1); // w itself is a unit
    }

    #[test]
    fn basis_element_relations() {
        let w = q([0, 0, 0, 1]);
        let i = q([0, 1, 0, 0]);
        let j = q([0, 0, 1, 0]);
        let one = Quaternion::one();
        // w^2 + w + 1 = 0
        assert_eq!(&(&(&w * &w) + &w) + &one, Quaternion::zero());
        assert_eq!(&i * &i, -&one);
        assert_eq!(&j * &j, -&one);
        assert_eq!(&i * &j, -&(&j * &i));
        // 2w = -1 + i + j + ij
        let k = &i * &j;
        let sum = &(&(&(-&one) + &i) + &j) + &k;
        assert_eq!(sum, &w + &w);
    }

    #[test]
    fn ring_axioms_and_norm_multiplicativity_sampled() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let x = random_quat(&mut rng, 5);
            let y = random_quat(&mut rng, 5);
            let z = random_quat(&mut rng, 5);
            assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            assert_eq!(x.nrd() * y.nrd(), (&x * &y).nrd());
            assert!(x.nrd() >= 0);
            assert_eq!(x.nrd() == 0, x.is_zero());
            // x * conj(x) is the scalar nrd(x)
            assert_eq!(&x * &x.conj(), Quaternion::scalar(x.nrd()));
            assert_eq!(x.conj().conj(), x);
        }
    }

    #[test]
    fn unit_group_is_the_norm_one_set() {
        let us = units();
        assert_eq!(us.len(), 24);
        for u in us {
            assert_eq!(u.nrd(), 1);
            // 24 units are closed under inversion: conj is the inverse
            assert_eq!(&*u * &u.conj(), Quaternion::one());
        }
    }

    #[test]
    fn primitivity_examples() {
        assert!(q([1, 1, 0, 0]).is_primitive().unwrap());
        assert!(!q([2, 2, 0, 0]).is_primitive().unwrap());
        // i + j + k = 1 + 2w; conversion oracle from {1,i,j,k} coordinates
        let from_ijk = Quaternion::from_ijk([0, 1, 1, 1], 1).unwrap();
        assert_eq!(from_ijk, q([1, 0, 0, 2]));
        assert!(from_ijk.is_primitive().unwrap());
        assert!(q([0, 0, 0, 0]).is_primitive().is_err());
    }

    #[test]
    fn lipschitz_form_parsing() {
        // (1+i+j+k)/2 is Hurwitz
        assert_eq!(Quaternion::from_ijk([1, 1, 1, 1], 2).unwrap(), q([1, 0, 0, 1]));
        // (1+i)/2 is not
        assert!(Quaternion::from_ijk([1, 1, 0, 0], 2).is_err());
        assert!(Quaternion::from_ijk([1, 1, 0, 0], 3).is_err());
    }

    #[test]
    fn canonical_class_is_the_orbit_minimum() {
        // derived by enumerating the 24 left associates
        let one_class = canonical_class(&Quaternion::one()).unwrap();
        assert_eq!(one_class, q([-1, 0, 0, -1]));
        let pi = q([1, 1, 1, 0]);
        let class = canonical_class(&pi).unwrap();
        let orbit: Vec<Quaternion> = units().iter().map(|u| u * &pi).collect();
        assert_eq!(class, orbit.iter().copied().min().unwrap());
        for u in units() {
            assert_eq!(canonical_class(&(u * &pi)).unwrap(), class);
        }
        assert_eq!(canonical_class(&class).unwrap(), class);
    }

    /// Coordinate rows of left multiplication `e -> e * x` over the
    /// integral basis: the row lattice of this matrix is the left ideal
    /// `O * x` viewed inside `Z^4`.
    fn right_mul_matrix(x: &Quaternion) -> crate::intmat::MatZ {
        let basis = [q([1, 0, 0, 0]), q([0, 1, 0, 0]), q([0, 0, 1, 0]), q([0, 0, 0, 1])];
        let rows: Vec<Vec<i64>> = basis.iter().map(|e| (e * x).coords().to_vec()).collect();
        crate::intmat::MatZ::from_ints(&rows).unwrap()
    }

    /// Independent lattice-index oracle: `[O : O*a + O*b]` computed by
    /// integer-matrix HNF. This must equal `nrd(g)^2` for a generator `g`.
    fn ideal_index(a: &Quaternion, b: &Quaternion) -> num_bigint::BigInt {
        let g = crate::intmat::left_ideal_generator(&[right_mul_matrix(a), right_mul_matrix(b)])
            .unwrap();
        g.det()
    }

    #[test]
    fn right_gcd_needs_a_nonzero_input() {
        assert!(right_gcd(&Quaternion::zero(), &Quaternion::zero()).is_err());
        let alpha = q([3, 1, -2, 5]);
        assert_eq!(
            right_gcd(&alpha, &Quaternion::zero()).unwrap(),
            canonical_class(&alpha).unwrap()
        );
    }

    #[test]
    fn right_gcd_examples() {
        // gcd with a unit is the unit class
        let alpha = q([3, 1, -2, 5]);
        let g = right_gcd(&alpha, &Quaternion::one()).unwrap();
        assert_eq!(g, q([-1, 0, 0, -1]));
        assert_eq!(ideal_index(&alpha, &Quaternion::one()), 1.into());

        // O*(2+2i) + O*2 = 2*O
        let a = q([2, 2, 0, 0]);
        let b = Quaternion::scalar(2);
        let g = right_gcd(&a, &b).unwrap();
        assert_eq!(g.nrd(), 4);
        assert_eq!(g, canonical_class(&Quaternion::scalar(2)).unwrap());
        assert_eq!(g, q([-2, 0, 0, -2]));
        assert!(g.divides_on_right(&a));
        assert!(g.divides_on_right(&b));
        assert_eq!(ideal_index(&a, &b), 16.into());
    }

    #[test]
    fn right_gcd_spans_the_ideal_sampled() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let a = random_quat(&mut rng, 4);
            let b = random_quat(&mut rng, 4);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let g = right_gcd(&a, &b).unwrap();
            // divisibility gives O*a + O*b inside O*g; equal lattice index
            // inside O forces equality
            assert!(g.divides_on_right(&a));
            assert!(g.divides_on_right(&b));
            let index = num_bigint::BigInt::from(g.nrd()) * num_bigint::BigInt::from(g.nrd());
            assert_eq!(ideal_index(&a, &b), index);
        }
    }

    #[test]
    fn factorization_reconstructs_exactly() {
        // (1+i)(1+i+j) = 2i + j + k has norm 6
        let alpha = &q([1, 1, 0, 0]) * &q([1, 1, 1, 0]);
        assert_eq!(alpha, q([1, 1, 0, 2]));
        assert_eq!(alpha.nrd(), 6);
        let factors = factor_by_primes(&alpha, &[2, 3]).unwrap();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].nrd(), 2);
        assert_eq!(factors[1].nrd(), 3);
        assert_eq!(&factors[0] * &factors[1], alpha);

        let reversed = factor_by_primes(&alpha, &[3, 2]).unwrap();
        assert_eq!(reversed[0].nrd(), 3);
        assert_eq!(reversed[1].nrd(), 2);
        assert_eq!(&reversed[0] * &reversed[1], alpha);

        // a prime factors as itself
        let pi = q([1, 1, 1, 0]);
        assert_eq!(factor_by_primes(&pi, &[3]).unwrap(), vec![pi]);

        assert!(factor_by_primes(&q([2, 2, 0, 0]), &[2, 2, 2]).is_err());
        assert!(factor_by_primes(&alpha, &[2, 5]).is_err());
    }

    #[test]
    fn class_counts() {
        assert_eq!(primes_of_norm(3).unwrap().len(), 4);
        assert_eq!(primes_of_norm(5).unwrap().len(), 6);
        assert_eq!(primes_of_norm(13).unwrap().len(), 14);
        assert!(primes_of_norm(2).is_err());
        assert!(primes_of_norm(9).is_err());
    }

    /// Exhaustive oracle: the unique norm-p class dividing the product on
    /// the right.
    fn right_divisor_by_search(x: &Quaternion, p: u64) -> Quaternion {
        let hits: Vec<Quaternion> = primes_of_norm(p)
            .unwrap()
            .iter()
            .copied()
            .filter(|cand| cand.divides_on_right(x))
            .collect();
        assert_eq!(hits.len(), 1, "norm-{p} right divisor is not unique");
        hits[0]
    }

    #[test]
    fn metacommute_examples() {
        let pi = q([1, 1, 1, 0]); // norm 3
        let (class, _) = metacommute(&pi, &Quaternion::one()).unwrap();
        assert_eq!(class, canonical_class(&pi).unwrap());

        // scalar mod p*O acts trivially
        let w = &Quaternion::scalar(4) + &(&Quaternion::scalar(3) * &q([0, 1, 2, 1]));
        assert_eq!(w.nrd().gcd(&3), 1);
        let (class, _) = metacommute(&pi, &w).unwrap();
        assert_eq!(class, canonical_class(&pi).unwrap());

        // cross-check against the exhaustive right-divisor search
        let w = q([1, 2, 0, 0]); // 1 + 2i, norm 5
        assert_eq!(w.nrd(), 5);
        let (class, w_prime) = metacommute(&pi, &w).unwrap();
        assert_eq!(class, right_divisor_by_search(&(&pi * &w), 3));
        assert_eq!(&w_prime * &class, &pi * &w);
        assert_eq!(w_prime.nrd(), 5);

        // norm of pi must be an odd prime and nrd(w) coprime to it
        assert!(metacommute(&q([1, 1, 0, 0]), &w).is_err());
        assert!(metacommute(&pi, &q([1, 1, 1, 0])).is_err());
    }

    #[test]
    fn metacommutation_depends_only_on_w_mod_p() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let p = 5u64;
        for _ in 0..10 {
            let mut w = random_quat(&mut rng, 6);
            while w.nrd().gcd(&(p as i64)) != 1 {
                w = random_quat(&mut rng, 6);
            }
            let shift = &Quaternion::scalar(p as i64) * &random_quat(&mut rng, 3);
            let w2 = &w + &shift;
            assert_eq!(
                class_permutation(&w, p).unwrap(),
                class_permutation(&w2, p).unwrap()
            );
        }
    }

    #[test]
    fn split_map_examples() {
        let split = SplitMap::new(5).unwrap();
        let f5 = Field::prime(5).unwrap();
        assert_eq!(
            split.apply(&q([0, 1, 0, 0])),
            MatFq::from_ints(&f5, &[vec![0, 2], vec![2, 0]]).unwrap()
        );
        assert_eq!(split.apply(&Quaternion::one()), MatFq::identity(&f5, 2));

        let split3 = SplitMap::new(3).unwrap();
        let f3 = Field::prime(3).unwrap();
        let i_img = split3.apply(&q([0, 1, 0, 0]));
        assert_eq!(i_img, MatFq::from_ints(&f3, &[vec![1, 1], vec![1, -1]]).unwrap());
        assert_eq!(
            i_img.mul(&i_img),
            MatFq::from_ints(&f3, &[vec![-1, 0], vec![0, -1]]).unwrap()
        );
        assert!(SplitMap::new(2).is_err());
    }

    #[test]
    fn split_map_is_a_ring_morphism_with_kernel_p() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for p in [3u64, 5, 7] {
            let split = SplitMap::new(p).unwrap();
            for _ in 0..50 {
                let x = random_quat(&mut rng, 6);
                let y = random_quat(&mut rng, 6);
                assert_eq!(split.apply(&(&x * &y)), split.apply(&x).mul(&split.apply(&y)));
                assert_eq!(split.apply(&(&x + &y)), split.apply(&x).add(&split.apply(&y)));
                // det of the image is the norm mod p; for 2x2 the constant
                // term of charpoly(A) = det(xI - A) is det(A) itself
                let f = split.field();
                let det = split.apply(&x).charpoly().coeff(0);
                assert_eq!(det, f.from_int(x.nrd()));
                // kernel is p*O
                let zero = split.apply(&x).is_zero();
                let in_po = x.coords().iter().all(|c| c.rem_euclid(p as i64) == 0);
                assert_eq!(zero, in_po);
            }
        }
    }

    #[test]
    fn diagram_commutes_examples() {
        assert!(diagram_commutes(&Quaternion::one(), 3).unwrap());
        assert!(diagram_commutes(&Quaternion::one(), 5).unwrap());
        let w = q([1, 2, 0, 0]);
        assert!(diagram_commutes(&w, 3).unwrap());

        // the induced class permutation matches the projective action
        let split = SplitMap::new(3).unwrap();
        let classes = primes_of_norm(3).unwrap();
        let points = projective::enumerate_points(split.field(), 2);
        let to_point = |pi: &Quaternion| {
            let pt = split.apply(pi).kernel_point().unwrap();
            points.iter().position(|x| *x == pt).unwrap()
        };
        let images = class_permutation(&w, 3).unwrap();
        let tau = projective::action_permutation(&split.apply(&w)).unwrap();
        for (idx, pi) in classes.iter().enumerate() {
            let lhs = to_point(&classes[images[idx]]);
            let rhs = tau.images()[to_point(pi)];
            assert_eq!(lhs, rhs);
        }
    }
}
