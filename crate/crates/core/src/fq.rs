//! Finite fields `F_q` for prime powers `q = p^e`, polynomials over them,
//! factorization into monic irreducibles, and the two order invariants of a
//! polynomial: the least `n` with `f | x^n - 1`, and the least `n` with
//! `f | x^n - a` for some nonzero scalar `a`.
//!
//! Extension fields are represented as `F_p[x]/(g)` where `g` is the
//! lexicographically smallest monic irreducible of degree `e` over `F_p`
//! (coefficients compared constant term first). The choice is arbitrary but
//! must be deterministic so that runs are reproducible.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default iteration cap for the order searches. Irreducible inputs are
/// bounded by `q^deg - 1` anyway; the cap guards reducible inputs where no
/// tight a-priori bound is available.
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// Largest extension-field cardinality we will construct. The modulus search
/// enumerates all monic polynomials of degree `e`, so this is a hard wall
/// against accidental huge inputs, not a tuning knob.
const MAX_EXTENSION_ORDER: u64 = 1 << 20;

#[derive(Debug)]
struct FieldRepr {
    p: u64,
    e: u32,
    q: u64,
    /// Coefficients of the monic irreducible modulus over `F_p`, low degree
    /// first, length `e + 1`. Absent for prime fields.
    modulus: Option<Vec<u64>>,
}

/// A finite field `F_{p^e}`. Cheap to clone; two values with equal `(p, e)`
/// are interchangeable because the modulus is chosen deterministically.
#[derive(Clone)]
pub struct Field(Arc<FieldRepr>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.e)
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.e).hash(state);
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// Construct `F_{p^e}`. For `e > 1` the modulus is the lexicographically
    /// smallest monic irreducible of degree `e` over `F_p`.
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::domain("extension degree must be positive"));
        }
        if let Some(f) = field_cache().lock().unwrap().get(&(p, e)) {
            return Ok(f.clone());
        }
        let q = (0..e).try_fold(1u64, |acc, _| acc.checked_mul(p)).ok_or_else(|| {
            Error::capacity(format!("{p}^{e} does not fit in the working word size"))
        })?;
        let modulus = if e == 1 {
            None
        } else {
            if q > MAX_EXTENSION_ORDER {
                return Err(Error::capacity(format!(
                    "extension field of order {q} exceeds the supported bound {MAX_EXTENSION_ORDER}"
                )));
            }
            Some(smallest_irreducible(p, e))
        };
        let field = Field(Arc::new(FieldRepr { p, e, q, modulus }));
        field_cache().lock().unwrap().insert((p, e), field.clone());
        Ok(field)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.0.e
    }

    /// Number of elements, `q = p^e`.
    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Modulus coefficients (low degree first) for `e > 1`.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.0.modulus.as_deref()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { field: self.clone(), coeffs: vec![0; self.0.e as usize] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// Embed a rational integer (reduced mod `p`).
    pub fn from_int(&self, n: i64) -> FieldElem {
        let p = self.0.p as i64;
        let mut coeffs = vec![0; self.0.e as usize];
        coeffs[0] = n.rem_euclid(p) as u64;
        FieldElem { field: self.clone(), coeffs }
    }

    /// Element from an explicit coefficient vector (low degree first).
    /// Shorter vectors are zero-padded; entries are reduced mod `p`.
    pub fn element(&self, coeffs: &[i64]) -> Result<FieldElem> {
        if coeffs.len() > self.0.e as usize {
            return Err(Error::domain(format!(
                "coefficient vector of length {} for a degree-{} extension",
                coeffs.len(),
                self.0.e
            )));
        }
        let p = self.0.p as i64;
        let mut rep = vec![0; self.0.e as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            rep[i] = c.rem_euclid(p) as u64;
        }
        Ok(FieldElem { field: self.clone(), coeffs: rep })
    }

    /// The element whose coefficient vector is the base-`p` digits of `idx`
    /// (least significant digit = constant term). `idx` must be `< q`.
    pub fn from_index(&self, idx: u64) -> FieldElem {
        debug_assert!(idx < self.0.q);
        let mut coeffs = vec![0; self.0.e as usize];
        let mut n = idx;
        for c in coeffs.iter_mut() {
            *c = n % self.0.p;
            n /= self.0.p;
        }
        FieldElem { field: self.clone(), coeffs }
    }

    /// All `q` elements, sorted by coefficient vector (constant term first).
    pub fn elements(&self) -> Vec<FieldElem> {
        let e = self.0.e as usize;
        let p = self.0.p;
        let mut out = Vec::with_capacity(self.0.q as usize);
        let mut coeffs = vec![0u64; e];
        loop {
            out.push(FieldElem { field: self.clone(), coeffs: coeffs.clone() });
            // odometer with the last coordinate fastest keeps lex order
            let mut i = e;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    fn mul_mod_p(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0.p as u128) as u64
    }

    fn raw_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let e = self.0.e as usize;
        let p = self.0.p;
        if e == 1 {
            return vec![self.mul_mod_p(a[0], b[0])];
        }
        // schoolbook product, then reduce by the monic modulus
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.mul_mod_p(ai, bj)) % p;
            }
        }
        let modulus = self.0.modulus.as_ref().unwrap();
        for top in (e..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            // x^top = x^(top-e) * (x^e mod g)
            for k in 0..e {
                let sub = self.mul_mod_p(c, modulus[k]);
                let idx = top - e + k;
                prod[idx] = (prod[idx] + p - sub % p) % p;
            }
        }
        prod.truncate(e);
        prod
    }
}

/// An element of a [`Field`], stored as a fully reduced coefficient vector
/// of length `e` with entries in `[0, p)`.
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn inverse(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::domain("zero has no multiplicative inverse"));
        }
        // a^(q-2) = a^(-1); q is small throughout this crate
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn pow(&self, mut n: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Multiplicative order; the element must be nonzero.
    pub fn multiplicative_order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::domain("zero has no multiplicative order"));
        }
        let mut acc = self.clone();
        for n in 1..self.field.order() {
            if acc.is_one() {
                return Ok(n);
            }
            acc = &acc * self;
        }
        Ok(self.field.order() - 1)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElem {}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = (self.field.characteristic(), self.field.extension_degree());
        let other_key = (other.field.characteristic(), other.field.extension_degree());
        key.cmp(&other_key).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.extension_degree() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "[")?;
            for (i, c) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")
        }
    }
}

macro_rules! elem_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                assert_eq!(self.field, rhs.field, "mixed-field arithmetic");
                #[allow(clippy::redundant_closure_call)]
                ($body)(self, rhs)
            }
        }
    };
}

elem_binop!(Add, add, |a: &FieldElem, b: &FieldElem| {
    let p = a.field.characteristic();
    let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % p).collect();
    FieldElem { field: a.field.clone(), coeffs }
});

elem_binop!(Sub, sub, |a: &FieldElem, b: &FieldElem| {
    let p = a.field.characteristic();
    let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + p - y) % p).collect();
    FieldElem { field: a.field.clone(), coeffs }
});

elem_binop!(Mul, mul, |a: &FieldElem, b: &FieldElem| {
    FieldElem { field: a.field.clone(), coeffs: a.field.raw_mul(&a.coeffs, &b.coeffs) }
});

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        let p = self.field.characteristic();
        let coeffs = self.coeffs.iter().map(|&x| (p - x) % p).collect();
        FieldElem { field: self.field.clone(), coeffs }
    }
}

/// A polynomial over a [`Field`], stored low degree first with the leading
/// coefficient nonzero. The zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().map_or(false, FieldElem::is_zero) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        let elems = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Poly::from_coeffs(field, elems)
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::from_ints(field, &[1])
    }

    /// The monomial `x`.
    pub fn x(field: &Field) -> Poly {
        Poly::from_ints(field, &[0, 1])
    }

    pub fn constant(c: FieldElem) -> Poly {
        let field = c.field().clone();
        Poly::from_coeffs(&field, vec![c])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, FieldElem::is_one)
    }

    pub fn eval(&self, at: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lead) if lead.is_one() => self.clone(),
            Some(lead) => {
                let inv = lead.inverse().expect("nonzero leading coefficient");
                let coeffs = self.coeffs.iter().map(|c| c * &inv).collect();
                Poly { field: self.field.clone(), coeffs }
            }
        }
    }

    pub fn mul_scalar(&self, s: &FieldElem) -> Poly {
        let coeffs = self.coeffs.iter().map(|c| c * s).collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    /// Division with remainder: `self = q * rhs + r`, `deg r < deg rhs`.
    pub fn divrem(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        let d = rhs.degree().ok_or_else(|| Error::domain("division by the zero polynomial"))?;
        let lead_inv = rhs.leading().unwrap().inverse()?;
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n < d + 1 {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut quo = vec![self.field.zero(); n - d];
        for top in (d..n).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let factor = &rem[top] * &lead_inv;
            for k in 0..=d {
                let sub = &rhs.coeffs[k] * &factor;
                rem[top - d + k] = &rem[top - d + k] - &sub;
            }
            quo[top - d] = factor;
        }
        Ok((Poly::from_coeffs(&self.field, quo), Poly::from_coeffs(&self.field, rem)))
    }

    pub fn rem(&self, rhs: &Poly) -> Result<Poly> {
        Ok(self.divrem(rhs)?.1)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).map_or(false, |r| r.is_zero())
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Monic irreducible factors with multiplicities, sorted by degree and
    /// then by coefficient vector. The product of the factors times the
    /// leading coefficient reconstructs the input exactly.
    ///
    /// Trial division against monic polynomials of ascending degree: every
    /// divisor found is automatically irreducible because all smaller-degree
    /// irreducible factors have already been divided out.
    pub fn factor(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::domain("cannot factor the zero polynomial"));
        }
        let mut rem = self.monic();
        let mut out: Vec<(Poly, u32)> = Vec::new();
        let mut d = 1usize;
        while let Some(deg) = rem.degree() {
            if deg == 0 {
                break;
            }
            if 2 * d > deg {
                out.push((rem.clone(), 1));
                break;
            }
            for cand in monic_polys(&self.field, d) {
                if rem.degree().map_or(true, |rd| rd < d) {
                    break;
                }
                let mut mult = 0u32;
                while cand.divides(&rem) {
                    rem = rem.divrem(&cand)?.0;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
            }
            d += 1;
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        match self.degree() {
            None | Some(0) => Ok(false),
            Some(_) => {
                let factors = self.factor()?;
                Ok(factors.len() == 1 && factors[0].1 == 1)
            }
        }
    }

    /// Least `n >= 1` with `self | x^n - 1` (the order, or period, of the
    /// polynomial). Requires a monic polynomial with nonzero constant term.
    pub fn order(&self) -> Result<u64> {
        self.order_capped(DEFAULT_ORDER_CAP)
    }

    pub fn order_capped(&self, cap: u64) -> Result<u64> {
        self.order_search(cap, false)
    }

    /// Least `n >= 1` with `self | x^n - a` for some nonzero scalar `a`.
    pub fn projective_order(&self) -> Result<u64> {
        self.projective_order_capped(DEFAULT_ORDER_CAP)
    }

    pub fn projective_order_capped(&self, cap: u64) -> Result<u64> {
        self.order_search(cap, true)
    }

    fn order_search(&self, cap: u64, up_to_scalar: bool) -> Result<u64> {
        if !self.is_monic() {
            return Err(Error::domain("order is defined for monic polynomials"));
        }
        if self.coeff(0).is_zero() {
            return Err(Error::domain("x divides the polynomial, so x^n - a is never divisible"));
        }
        if self.degree() == Some(0) {
            return Ok(1);
        }
        // walk x, x^2, x^3, ... mod self
        let mut power = Poly::x(&self.field).rem(self)?;
        for n in 1..=cap {
            let hit = match power.degree() {
                Some(0) => up_to_scalar || power.coeffs[0].is_one(),
                _ => false,
            };
            if hit {
                return Ok(n);
            }
            power = shift_mod(&power, self)?;
        }
        Err(Error::capacity(format!("no n <= {cap} with x^n congruent to a scalar")))
    }
}

/// `p * x mod f` for monic `f`; one step of the order walk.
fn shift_mod(p: &Poly, f: &Poly) -> Result<Poly> {
    let field = p.field().clone();
    let mut coeffs = Vec::with_capacity(p.coeffs().len() + 1);
    coeffs.push(field.zero());
    coeffs.extend(p.coeffs().iter().cloned());
    Poly::from_coeffs(&field, coeffs).rem(f)
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $combine:expr) => {
        impl std::ops::$trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                assert_eq!(self.field, rhs.field, "mixed-field arithmetic");
                #[allow(clippy::redundant_closure_call)]
                ($combine)(self, rhs)
            }
        }
    };
}

poly_binop!(Add, add, |a: &Poly, b: &Poly| {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n).map(|i| &a.coeff(i) + &b.coeff(i)).collect();
    Poly::from_coeffs(&a.field, coeffs)
});

poly_binop!(Sub, sub, |a: &Poly, b: &Poly| {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n).map(|i| &a.coeff(i) - &b.coeff(i)).collect();
    Poly::from_coeffs(&a.field, coeffs)
});

poly_binop!(Mul, mul, |a: &Poly, b: &Poly| {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(&a.field);
    }
    let mut coeffs = vec![a.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ca) in a.coeffs.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.coeffs.iter().enumerate() {
            coeffs[i + j] = &coeffs[i + j] + &(ca * cb);
        }
    }
    Poly::from_coeffs(&a.field, coeffs)
});

/// All monic polynomials of exact degree `d`, in lexicographic order of the
/// coefficient vector (constant term most significant).
pub fn monic_polys(field: &Field, d: usize) -> Vec<Poly> {
    let elems = field.elements();
    let q = elems.len();
    let mut out = Vec::with_capacity(q.pow(d as u32));
    let mut idx = vec![0usize; d];
    loop {
        let mut coeffs: Vec<FieldElem> = idx.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(field.one());
        out.push(Poly { field: field.clone(), coeffs });
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < q {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// All monic irreducibles of exact degree `d` over `field`, lexicographic.
pub fn monic_irreducibles(field: &Field, d: usize) -> Vec<Poly> {
    monic_polys(field, d)
        .into_iter()
        .filter(|f| f.is_irreducible().unwrap_or(false))
        .collect()
}

/// Lexicographically smallest monic irreducible of degree `e` over `F_p`,
/// returned as a plain coefficient vector.
fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let base = Field::prime(p).expect("p was checked prime");
    let poly = monic_irreducibles(&base, e as usize)
        .into_iter()
        .next()
        .expect("irreducibles of every degree exist over a finite field");
    poly.coeffs.iter().map(|c| c.coeffs[0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64, e: u32) -> Field {
        Field::new(p, e).unwrap()
    }

    #[test]
    fn prime_fields_have_no_modulus() {
        assert!(f(2, 1).modulus().is_none());
        assert!(f(3, 1).modulus().is_none());
        assert_eq!(f(3, 1).order(), 3);
    }

    #[test]
    fn f4_modulus_is_smallest_irreducible() {
        // oracle: enumerate monic degree-2 polynomials over F_2 and test
        // irreducibility by root search
        let base = f(2, 1);
        let mut found = Vec::new();
        for c0 in 0..2 {
            for c1 in 0..2 {
                let cand = Poly::from_ints(&base, &[c0, c1, 1]);
                let has_root = (0..2).any(|x| cand.eval(&base.from_int(x)).is_zero());
                if !has_root {
                    found.push(cand);
                }
            }
        }
        assert_eq!(found.len(), 1);
        assert_eq!(found[0], Poly::from_ints(&base, &[1, 1, 1]));
        assert_eq!(f(2, 2).modulus(), Some(&[1, 1, 1][..]));
    }

    #[test]
    fn non_prime_characteristic_is_rejected() {
        assert!(matches!(Field::new(4, 1), Err(Error::Domain(_))));
        assert!(matches!(Field::new(1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn oversized_extension_is_rejected() {
        assert!(matches!(Field::new(2, 64), Err(Error::Capacity(_))));
    }

    #[test]
    fn factor_difference_of_squares() {
        let field = f(3, 1);
        let poly = Poly::from_ints(&field, &[-1, 0, 1]); // x^2 - 1
        let factors = poly.factor().unwrap();
        assert_eq!(
            factors,
            vec![
                (Poly::from_ints(&field, &[1, 1]), 1),
                (Poly::from_ints(&field, &[2, 1]), 1),
            ]
        );
    }

    #[test]
    fn factor_irreducible_quadratic() {
        let field = f(2, 1);
        let poly = Poly::from_ints(&field, &[1, 1, 1]);
        // oracle: no roots in F_2 and degree 2 force irreducibility
        assert!(!poly.eval(&field.from_int(0)).is_zero());
        assert!(!poly.eval(&field.from_int(1)).is_zero());
        assert_eq!(poly.factor().unwrap(), vec![(poly.clone(), 1)]);
        assert!(poly.is_irreducible().unwrap());
    }

    #[test]
    fn factor_perfect_square() {
        let field = f(3, 1);
        let poly = Poly::from_ints(&field, &[1, 2, 1]); // (x+1)^2
        assert_eq!(poly.factor().unwrap(), vec![(Poly::from_ints(&field, &[1, 1]), 2)]);
    }

    #[test]
    fn factor_zero_polynomial_is_domain_error() {
        assert!(matches!(Poly::zero(&f(3, 1)).factor(), Err(Error::Domain(_))));
    }

    #[test]
    fn order_examples() {
        let f2 = f(2, 1);
        let f3 = f(3, 1);
        assert_eq!(Poly::from_ints(&f3, &[-1, 1]).order().unwrap(), 1);
        // oracle for x^2+x+1 over F_2: brute-force n <= 3 by explicit division
        let phi = Poly::from_ints(&f2, &[1, 1, 1]);
        for n in 1..=3u32 {
            let mut xn = vec![0i64; n as usize + 1];
            xn[0] = -1;
            xn[n as usize] = 1;
            let divides = phi.divides(&Poly::from_ints(&f2, &xn));
            assert_eq!(divides, n == 3);
        }
        assert_eq!(phi.order().unwrap(), 3);
        // x^2 ≡ -1 mod x^2+1, so x^4 ≡ 1 and nothing smaller works
        assert_eq!(Poly::from_ints(&f3, &[1, 0, 1]).order().unwrap(), 4);
    }

    #[test]
    fn order_rejects_multiples_of_x() {
        let field = f(3, 1);
        assert!(matches!(Poly::from_ints(&field, &[0, 1]).order(), Err(Error::Domain(_))));
    }

    #[test]
    fn order_cap_is_enforced() {
        let field = f(3, 1);
        let phi = Poly::from_ints(&field, &[1, 0, 1]); // order 4
        assert!(matches!(phi.order_capped(3), Err(Error::Capacity(_))));
    }

    #[test]
    fn projective_order_examples() {
        let f2 = f(2, 1);
        let f3 = f(3, 1);
        // x^2 ≡ -1 = 2, a unit of F_3; matches 4 / gcd(2, 4)
        assert_eq!(Poly::from_ints(&f3, &[1, 0, 1]).projective_order().unwrap(), 2);
        assert_eq!(Poly::from_ints(&f3, &[-1, 1]).projective_order().unwrap(), 1);
        // (x+1)^2 = x^2+1 divides x^2-1 over F_2
        assert_eq!(Poly::from_ints(&f2, &[1, 0, 1]).projective_order().unwrap(), 2);
    }

    #[test]
    fn subexp_identity_small_fields() {
        // projective_order(f) * gcd(q-1, order(f)) == order(f) for monic
        // irreducibles of degree <= 3 over q <= 5
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let field = f(p, e);
            let q = field.order();
            for d in 1..=3 {
                for phi in monic_irreducibles(&field, d) {
                    if phi.coeff(0).is_zero() {
                        continue;
                    }
                    let exp = phi.order().unwrap();
                    let sub = phi.projective_order().unwrap();
                    assert_eq!(
                        sub * num_integer::gcd(q - 1, exp),
                        exp,
                        "identity failed for {phi} over F_{q}"
                    );
                }
            }
        }
    }

    #[test]
    fn factor_remultiplies_exactly() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let field = f(p, e);
            let q = field.order();
            for idx in 0..(q * q * q).min(200) {
                let c0 = (idx % q) as i64;
                let c1 = ((idx / q) % q) as i64;
                let c2 = ((idx / (q * q)) % q) as i64;
                let poly = Poly::from_ints(&field, &[c0, c1, c2, 1]);
                let factors = poly.factor().unwrap();
                let mut prod = Poly::one(&field);
                for (phi, k) in &factors {
                    assert!(phi.is_monic());
                    prod = &prod * &phi.pow(*k);
                }
                assert_eq!(prod.mul_scalar(poly.leading().unwrap()), poly);
            }
        }
    }

    fn arb_field() -> impl Strategy<Value = Field> {
        prop::sample::select(vec![f(2, 1), f(3, 1), f(5, 1), f(2, 2), f(3, 2), f(2, 3)])
    }

    proptest! {
        #[test]
        fn field_axioms((field, ia, ib, ic) in arb_field().prop_flat_map(|fld| {
            let q = fld.order();
            (Just(fld), 0..q, 0..q, 0..q)
        })) {
            let a = field.from_index(ia);
            let b = field.from_index(ib);
            let c = field.from_index(ic);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn frobenius_is_additive((field, ia, ib) in arb_field().prop_flat_map(|fld| {
            let q = fld.order();
            (Just(fld), 0..q, 0..q)
        })) {
            let p = field.characteristic();
            let a = field.from_index(ia);
            let b = field.from_index(ib);
            prop_assert_eq!((&a + &b).pow(p), &a.pow(p) + &b.pow(p));
        }
    }
}
