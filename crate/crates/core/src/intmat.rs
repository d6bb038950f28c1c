//! The matrix-ring case: left ideals of `M_n(Z)` as row lattices in Hermite
//! normal form, extraction of prime-determinant right factors, ideal
//! metacommutation `P -> P*w + p*M_n(Z)`, and the commuting-diagram check
//! against the projective action after reduction mod `p`.
//!
//! A left ideal of `M_n(Z)` is determined by the lattice generated by the
//! rows of any generator, so the unit-class representative throughout is the
//! row-style Hermite normal form: upper triangular, positive diagonal,
//! entries above each pivot reduced into `[0, pivot)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::fault;
use crate::fq::Field;
use crate::fqmat::MatFq;
use crate::projective::{self, ProjPoint};

/// A square integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatZ {
    n: usize,
    entries: Vec<BigInt>,
}

impl MatZ {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<MatZ> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix must be square and nonempty"));
        }
        Ok(MatZ { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<MatZ> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        MatZ::from_rows(rows)
    }

    pub fn identity(n: usize) -> MatZ {
        MatZ::scalar(n, &BigInt::one())
    }

    pub fn scalar(n: usize, c: &BigInt) -> MatZ {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = c.clone();
        }
        MatZ { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.n + c]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    pub fn mul(&self, rhs: &MatZ) -> MatZ {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * rhs.at(k, j);
                }
            }
        }
        MatZ { n, entries }
    }

    pub fn det(&self) -> BigInt {
        det_rows(&self.rows())
    }

    /// Transpose of the cofactor matrix, so `self * adjugate = det * I`.
    pub fn adjugate(&self) -> MatZ {
        let n = self.n;
        let rows = self.rows();
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = rows
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != i)
                    .map(|(_, row)| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let mut cof = if minor.is_empty() { BigInt::one() } else { det_rows(&minor) };
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                entries[j * n + i] = cof; // transposed
            }
        }
        MatZ { n, entries }
    }

    /// `self * rhs^{-1}`, provided the quotient is integral.
    pub fn div_exact_right(&self, rhs: &MatZ) -> Result<MatZ> {
        let det = rhs.det();
        if det.is_zero() {
            return Err(Error::domain("division by a singular matrix"));
        }
        let num = self.mul(&rhs.adjugate());
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for v in num.entries {
            let (q, r) = v.div_rem(&det);
            if !r.is_zero() {
                return Err(Error::consistency(
                    "matrix quotient is not integral".to_string(),
                ));
            }
            entries.push(q);
        }
        Ok(MatZ { n, entries })
    }

    /// Row-style Hermite normal form `U * self` with `U` unimodular: the
    /// canonical representative of the left unit class.
    pub fn hnf(&self) -> Result<MatZ> {
        if self.det().is_zero() {
            return Err(Error::domain("Hermite normal form of a singular matrix"));
        }
        let reduced = hnf_rows(self.rows());
        debug_assert_eq!(reduced.len(), self.n);
        MatZ::from_rows(reduced)
    }

    /// True when no integer `k >= 2` divides every entry.
    pub fn is_primitive(&self) -> bool {
        let mut g = BigInt::zero();
        for v in &self.entries {
            g = g.gcd(v);
        }
        g.is_one()
    }

    /// Entry-wise reduction into `F_p`.
    pub fn reduce_mod(&self, field: &Field) -> MatFq {
        let p = BigInt::from(field.characteristic());
        let rows: Vec<Vec<_>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let r = self.at(i, j).mod_floor(&p);
                        field.from_int(i64::try_from(r).expect("residue fits in i64"))
                    })
                    .collect()
            })
            .collect();
        MatFq::from_rows(field, rows).expect("square by construction")
    }
}

impl fmt::Debug for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn det_rows(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut det = BigInt::zero();
    for i in 0..n {
        if rows[i][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = rows
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let term = &rows[i][0] * det_rows(&minor);
        if i % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// Row Hermite normal form of a stack of row vectors: echelon with positive
/// pivots and the entries above each pivot reduced into `[0, pivot)`. Zero
/// rows are dropped.
fn hnf_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut rank = 0usize;
    for col in 0..cols {
        // gcd elimination below the pivot row
        loop {
            let mut best: Option<usize> = None;
            for r in rank..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                if best.map_or(true, |b| rows[r][col].abs() < rows[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            rows.swap(rank, b);
            let mut any_left = false;
            for r in rank + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[rank][col]);
                for c in 0..cols {
                    let sub = &q * &rows[rank][c];
                    rows[r][c] -= sub;
                }
                if !rows[r][col].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if rows[rank][col].is_zero() {
            continue;
        }
        if rows[rank][col].is_negative() {
            for c in 0..cols {
                rows[rank][c] = -rows[rank][c].clone();
            }
        }
        // reduce entries above the pivot into [0, pivot)
        for r in 0..rank {
            let q = rows[r][col].div_floor(&rows[rank][col]);
            if q.is_zero() {
                continue;
            }
            for c in 0..cols {
                let sub = &q * &rows[rank][c];
                rows[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

/// Generator, in Hermite normal form, of the left ideal spanned by the given
/// matrices: the row lattice of the stacked generators.
pub fn left_ideal_generator(gens: &[MatZ]) -> Result<MatZ> {
    let Some(first) = gens.first() else {
        return Err(Error::domain("no generators given"));
    };
    let n = first.dim();
    if gens.iter().any(|g| g.dim() != n) {
        return Err(Error::domain("generators must share one dimension"));
    }
    let stacked: Vec<Vec<BigInt>> = gens.iter().flat_map(|g| g.rows()).collect();
    let reduced = hnf_rows(stacked);
    if reduced.len() != n {
        return Err(Error::domain(
            "generators span a degenerate lattice; the ideal has no full-rank generator",
        ));
    }
    MatZ::from_rows(reduced)
}

/// Split `alpha = w1 * w2` where `w2` generates `O*alpha + O*a2` and has
/// determinant `a2`. Requires `a2 | det(alpha)` with the complementary part
/// coprime to `a2`.
pub fn split_factor(alpha: &MatZ, a2: &BigInt) -> Result<(MatZ, MatZ)> {
    let det = alpha.det();
    if det.is_zero() {
        return Err(Error::domain("cannot factor a singular matrix"));
    }
    if a2.is_zero() || !(&det % a2).is_zero() {
        return Err(Error::domain(format!("{a2} does not divide det = {det}")));
    }
    let cofactor = &det / a2;
    if !a2.gcd(&cofactor).is_one() {
        return Err(Error::domain(format!(
            "split {a2} * {cofactor} is not coprime; only coprime splits are supported"
        )));
    }
    let w2 = left_ideal_generator(&[alpha.clone(), MatZ::scalar(alpha.dim(), a2)])?;
    if w2.det() != a2.abs() {
        return Err(Error::consistency(format!(
            "right factor has determinant {}, expected {}",
            w2.det(),
            a2.abs()
        )));
    }
    let w1 = alpha.div_exact_right(&w2)?;
    debug_assert_eq!(w1.mul(&w2), *alpha);
    Ok((w1, w2))
}

/// Factor a primitive matrix into prime-determinant factors, peeling the
/// rightmost factor first: `primes[0]` is extracted first and becomes the
/// last factor of the returned product, so the output determinants read as
/// the reversed prime list. The primes must be distinct and their product
/// must be `|det|`. The product of the returned factors is exactly `alpha`.
pub fn factor_prime_chain(alpha: &MatZ, primes: &[u64]) -> Result<Vec<MatZ>> {
    if !alpha.is_primitive() {
        return Err(Error::domain("matrix is imprimitive: an integer >= 2 divides every entry"));
    }
    let mut product = BigInt::one();
    for &p in primes {
        product *= BigInt::from(p);
    }
    if alpha.det().abs() != product {
        return Err(Error::domain(format!(
            "det = {} is not the product of the given primes",
            alpha.det()
        )));
    }
    for (i, &p) in primes.iter().enumerate() {
        if primes[i + 1..].contains(&p) {
            return Err(Error::domain(format!(
                "prime {p} repeats; repeated primes break the coprime-split hypothesis"
            )));
        }
    }
    let mut chain: Vec<MatZ> = Vec::with_capacity(primes.len());
    let mut remaining = alpha.clone();
    for &p in primes {
        let (w1, w2) = split_factor(&remaining, &BigInt::from(p))?;
        chain.push(w2);
        remaining = w1;
    }
    // what is left is a unit; absorb it into the leftmost factor
    if !remaining.det().abs().is_one() {
        return Err(Error::consistency("peeling left a non-unit".to_string()));
    }
    let last = chain.pop().expect("at least one prime");
    chain.push(remaining.mul(&last));
    chain.reverse();
    let mut check = MatZ::identity(alpha.dim());
    for f in &chain {
        check = check.mul(f);
    }
    if check != *alpha {
        return Err(Error::consistency("factor chain does not multiply back".to_string()));
    }
    Ok(chain)
}

/// Metacommutation at `p`: given `P` of determinant `±p` and `w` with
/// determinant coprime to `p`, rewrite `P * w = w' * P'` where
/// `P' = P*w + p*O` in Hermite normal form. Returns `(w', P')`.
pub fn metacommute(p_mat: &MatZ, w: &MatZ, p: u64) -> Result<(MatZ, MatZ)> {
    let p_big = BigInt::from(p);
    if p_mat.det().abs() != p_big {
        return Err(Error::domain(format!(
            "determinant {} is not the prime +/-{p}",
            p_mat.det()
        )));
    }
    if !w.det().gcd(&p_big).is_one() {
        return Err(Error::domain(format!(
            "det(w) = {} is not coprime to {p}",
            w.det()
        )));
    }
    let product = p_mat.mul(w);
    let p_prime = left_ideal_generator(&[product.clone(), MatZ::scalar(p_mat.dim(), &p_big)])?;
    if p_prime.det() != p_big {
        return Err(Error::consistency(format!(
            "image ideal has determinant {}, expected {p}",
            p_prime.det()
        )));
    }
    let w_prime = product.div_exact_right(&p_prime)?;
    debug_assert_eq!(w_prime.mul(&p_prime), product);
    debug_assert_eq!(w_prime.det().abs(), w.det().abs());
    Ok((w_prime, p_prime))
}

/// The commuting-diagram check at one input: the kernel point of `P' mod p`
/// must be the image of the kernel point of `P mod p` under the projective
/// action of `w mod p`.
pub fn diagram_commutes(p_mat: &MatZ, w: &MatZ, p: u64) -> Result<bool> {
    let field = Field::prime(p)?;
    let p_red = p_mat.reduce_mod(&field);
    let rank = p_red.rank();
    if rank + 1 != p_mat.dim() {
        return Err(Error::Rank { expected: p_mat.dim() - 1, actual: rank });
    }
    let (_, p_prime) = metacommute(p_mat, w, p)?;
    let before = p_red.kernel_point()?;
    let after = p_prime.reduce_mod(&field).kernel_point()?;
    let mut w_red = w.reduce_mod(&field);
    if fault::active("diagram-z") {
        w_red = w_red.inverse().expect("det coprime to p");
    }
    Ok(projective::act(&w_red, &before)? == after)
}

/// Kernel points before and after metacommutation, for reporting.
pub fn kernel_pair(p_mat: &MatZ, p_prime: &MatZ, p: u64) -> Result<(ProjPoint, ProjPoint)> {
    let field = Field::prime(p)?;
    Ok((
        p_mat.reduce_mod(&field).kernel_point()?,
        p_prime.reduce_mod(&field).kernel_point()?,
    ))
}

/// All left ideals of `M_n(Z)` of norm `p`, as Hermite normal forms: the
/// diagonal carries a single `p` in position `i` and the only free entries
/// sit above it, giving `1 + p + ... + p^{n-1}` ideals.
pub fn ideals_of_norm(n: usize, p: u64) -> Vec<MatZ> {
    let p_big = BigInt::from(p);
    let mut out = Vec::new();
    for pos in 0..n {
        let combos = p.pow(pos as u32);
        for mut idx in 0..combos {
            let mut m = MatZ::identity(n);
            m.entries[pos * n + pos] = p_big.clone();
            for row in 0..pos {
                m.entries[row * n + pos] = BigInt::from(idx % p);
                idx /= p;
            }
            out.push(m);
        }
    }
    out
}

/// Uniformly random entry matrix with entries in `[-bound, bound]` whose
/// determinant is coprime to `p` (and in particular nonzero).
pub fn random_unit_mod_p<R: Rng>(n: usize, p: u64, bound: i64, rng: &mut R) -> MatZ {
    let p_big = BigInt::from(p);
    loop {
        let rows: Vec<Vec<i64>> =
            (0..n).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        let m = MatZ::from_ints(&rows).expect("square");
        if m.det().gcd(&p_big).is_one() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::collections::BTreeSet;

    fn mat(rows: &[Vec<i64>]) -> MatZ {
        MatZ::from_ints(rows).unwrap()
    }

    /// Independent lattice oracle: all vectors expressible as small integer
    /// combinations of the given rows, clipped to a coordinate box.
    fn span_in_box(rows: &[Vec<BigInt>], coeff: i64, edge: i64) -> BTreeSet<Vec<BigInt>> {
        let cols = rows[0].len();
        let mut set = BTreeSet::new();
        let k = rows.len();
        let total = (2 * coeff + 1).pow(k as u32);
        for mut idx in 0..total {
            let mut v = vec![BigInt::zero(); cols];
            for row in rows {
                let c = idx % (2 * coeff + 1) - coeff;
                idx /= 2 * coeff + 1;
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi += c * ri;
                }
            }
            if v.iter().all(|x| x.abs() <= BigInt::from(edge)) {
                set.insert(v);
            }
        }
        set
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(mat(&[vec![5, 0], vec![0, 1]]).hnf().unwrap(), mat(&[vec![5, 0], vec![0, 1]]));
        // the worked P' is already canonical
        assert_eq!(mat(&[vec![1, 2], vec![0, 3]]).hnf().unwrap(), mat(&[vec![1, 2], vec![0, 3]]));
        assert_eq!(mat(&[vec![3, 0], vec![1, 1]]).hnf().unwrap(), mat(&[vec![1, 1], vec![0, 3]]));
        assert!(mat(&[vec![1, 1], vec![1, 1]]).hnf().is_err());
    }

    #[test]
    fn hnf_is_idempotent_and_det_multiplicative() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = random_unit_mod_p(3, 2, 6, &mut rng);
            let b = random_unit_mod_p(3, 2, 6, &mut rng);
            assert_eq!(a.mul(&b).det(), a.det() * b.det());
            let h = a.hnf().unwrap();
            assert_eq!(h.hnf().unwrap(), h);
            assert_eq!(h.det(), a.det().abs());
        }
    }

    #[test]
    fn left_ideal_generator_examples() {
        let alpha = mat(&[vec![5, 1], vec![0, 3]]);

        // lattice oracle for O*alpha + O*5: rows of alpha and 5I
        let g = left_ideal_generator(&[alpha.clone(), MatZ::scalar(2, &BigInt::from(5))]).unwrap();
        assert_eq!(g, mat(&[vec![5, 0], vec![0, 1]]));
        let gens: Vec<Vec<BigInt>> =
            alpha.rows().into_iter().chain(MatZ::scalar(2, &BigInt::from(5)).rows()).collect();
        assert_eq!(span_in_box(&gens, 6, 10), span_in_box(&g.rows(), 25, 10));

        // adjoining the identity gives the whole ring
        let g = left_ideal_generator(&[alpha.clone(), MatZ::identity(2)]).unwrap();
        assert_eq!(g, MatZ::identity(2));

        // P*w + O*3 from the worked example
        let p = mat(&[vec![1, 1], vec![0, 3]]);
        let w = mat(&[vec![5, 0], vec![0, 1]]);
        let g =
            left_ideal_generator(&[p.mul(&w), MatZ::scalar(2, &BigInt::from(3))]).unwrap();
        assert_eq!(g, mat(&[vec![1, 2], vec![0, 3]]));
        let gens: Vec<Vec<BigInt>> =
            p.mul(&w).rows().into_iter().chain(MatZ::scalar(2, &BigInt::from(3)).rows()).collect();
        assert_eq!(span_in_box(&gens, 6, 10), span_in_box(&g.rows(), 25, 10));
    }

    #[test]
    fn split_factor_examples() {
        let alpha = mat(&[vec![5, 1], vec![0, 3]]);

        let (w1, w2) = split_factor(&alpha, &BigInt::from(5)).unwrap();
        assert_eq!(w2, mat(&[vec![5, 0], vec![0, 1]]));
        assert_eq!(w1, mat(&[vec![1, 1], vec![0, 3]]));
        assert_eq!(w1.mul(&w2), alpha);

        let (w1, w2) = split_factor(&alpha, &BigInt::one()).unwrap();
        assert_eq!(w2, MatZ::identity(2));
        assert_eq!(w1, alpha);

        let (w1, w2) = split_factor(&alpha, &BigInt::from(3)).unwrap();
        assert_eq!(w2, mat(&[vec![1, 2], vec![0, 3]]));
        assert_eq!(w1, mat(&[vec![5, -3], vec![0, 1]]));
        assert_eq!(w2.det(), BigInt::from(3));
        assert_eq!(w1.mul(&w2), alpha);

        // 9 * 5 = 45: would need the square split 9 = 3^2
        let sq = mat(&[vec![9, 1], vec![0, 5]]);
        assert!(split_factor(&sq, &BigInt::from(3)).is_err());
    }

    #[test]
    fn prime_chain_examples() {
        let alpha = mat(&[vec![5, 1], vec![0, 3]]);

        let chain = factor_prime_chain(&alpha, &[5, 3]).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[0].det(), BigInt::from(3));
        assert_eq!(chain[1].det(), BigInt::from(5));
        assert_eq!(chain[0].mul(&chain[1]), alpha);
        assert_eq!(chain[0], mat(&[vec![1, 1], vec![0, 3]]));
        assert_eq!(chain[1], mat(&[vec![5, 0], vec![0, 1]]));

        let chain = factor_prime_chain(&alpha, &[3, 5]).unwrap();
        assert_eq!(chain[0].det(), BigInt::from(5));
        assert_eq!(chain[1].det(), BigInt::from(3));
        assert_eq!(chain[0].mul(&chain[1]), alpha);
        assert_eq!(chain[1], mat(&[vec![1, 2], vec![0, 3]]));
        assert_eq!(chain[0], mat(&[vec![5, -3], vec![0, 1]]));

        // a single prime absorbs its unit, returning the input itself
        let p = mat(&[vec![0, -2], vec![1, 0]]);
        assert_eq!(factor_prime_chain(&p, &[2]).unwrap(), vec![p.clone()]);

        assert!(factor_prime_chain(&mat(&[vec![2, 0], vec![0, 2]]), &[2, 2]).is_err());
        assert!(factor_prime_chain(&alpha, &[5, 5]).is_err());
        assert!(factor_prime_chain(&alpha, &[7, 3]).is_err());
    }

    #[test]
    fn metacommute_worked_example() {
        let p = mat(&[vec![1, 1], vec![0, 3]]);
        let w = mat(&[vec![5, 0], vec![0, 1]]);
        let (w_prime, p_prime) = metacommute(&p, &w, 3).unwrap();
        assert_eq!(p_prime, mat(&[vec![1, 2], vec![0, 3]]));
        assert_eq!(w_prime, mat(&[vec![5, -3], vec![0, 1]]));
        assert_eq!(w_prime.mul(&p_prime), p.mul(&w));

        let (before, after) = kernel_pair(&p, &p_prime, 3).unwrap();
        assert_eq!(before.to_string(), "(1:2)");
        assert_eq!(after.to_string(), "(1:1)");
    }

    #[test]
    fn metacommute_trivial_and_fixed_cases() {
        let p = mat(&[vec![3, 0], vec![1, 1]]);
        let (w_prime, p_prime) = metacommute(&p, &MatZ::identity(2), 3).unwrap();
        assert_eq!(p_prime, p.hnf().unwrap());
        assert!(w_prime.det().abs().is_one());

        let p = mat(&[vec![1, 0], vec![0, 3]]);
        let w = mat(&[vec![5, 0], vec![0, 1]]);
        let (_, p_prime) = metacommute(&p, &w, 3).unwrap();
        assert_eq!(p_prime, p);
        assert!(diagram_commutes(&p, &w, 3).unwrap());
    }

    #[test]
    fn metacommute_rejects_bad_inputs() {
        let p = mat(&[vec![1, 1], vec![0, 3]]);
        let w = mat(&[vec![3, 0], vec![0, 1]]);
        // det(w) = 3 shares the prime
        assert!(metacommute(&p, &w, 3).is_err());
        // det(P) = 4 is not the prime
        assert!(metacommute(&mat(&[vec![2, 0], vec![0, 2]]), &MatZ::identity(2), 3).is_err());
    }

    #[test]
    fn ideal_enumeration_counts() {
        for p in [2u64, 3, 5, 7] {
            let ideals = ideals_of_norm(2, p);
            assert_eq!(ideals.len() as u64, p + 1);
            for ideal in &ideals {
                assert_eq!(ideal.det(), BigInt::from(p));
                assert_eq!(ideal.hnf().unwrap(), *ideal);
            }
        }
        assert_eq!(ideals_of_norm(3, 3).len(), 13);
    }

    #[test]
    fn metacommutation_permutes_the_ideal_set() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for p in [2u64, 3, 5, 7] {
            let ideals = ideals_of_norm(2, p);
            for _ in 0..5 {
                let w = random_unit_mod_p(2, p, 9, &mut rng);
                let images: Vec<MatZ> = ideals
                    .iter()
                    .map(|ideal| metacommute(ideal, &w, p).unwrap().1)
                    .collect();
                let distinct: BTreeSet<String> = images.iter().map(|m| m.to_string()).collect();
                assert_eq!(distinct.len(), ideals.len(), "not a bijection at p={p}");
                for image in &images {
                    assert!(ideals.contains(image));
                }
            }
        }
    }

    #[test]
    fn diagram_commutes_on_the_worked_example() {
        let p = mat(&[vec![1, 1], vec![0, 3]]);
        let w = mat(&[vec![5, 0], vec![0, 1]]);
        assert!(diagram_commutes(&p, &w, 3).unwrap());
        assert!(diagram_commutes(&p, &MatZ::identity(2), 3).unwrap());
    }

    #[test]
    fn diagram_check_rejects_wrong_rank() {
        // 2I reduces to zero mod 2: rank 0 instead of 1
        let err = diagram_commutes(&mat(&[vec![2, 0], vec![0, 2]]), &MatZ::identity(2), 2)
            .unwrap_err();
        assert!(matches!(err, Error::Rank { expected: 1, actual: 0 }));
    }

    #[test]
    fn degenerate_generators_are_rejected() {
        let singular = mat(&[vec![1, 0], vec![0, 0]]);
        assert!(left_ideal_generator(&[singular]).is_err());
        assert!(left_ideal_generator(&[]).is_err());
    }
}
