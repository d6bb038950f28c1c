//! Closed-form cycle structure of the projective action: exact fixed-point
//! counts from eigenspace dimensions, per-block cycle counts for
//! hypercompanion matrices, a fast path for the order of `phi^j` up to
//! scalars, the order-`ell` law for `GL_2`, the uniform-cycle criterion for
//! diagonalizable matrices, and a dispatcher with brute-force fallback.
//!
//! The brute-force path (realize the permutation, read off its cycles) is
//! the authority: every formula here is checked against it by the
//! verification sweeps, and a disagreement is a hard error.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fault;
use crate::fq::{Field, FieldElem, Poly};
use crate::fqmat::MatFq;
use crate::projective;

/// Which computation path produced a [`CycleReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CycleSource {
    #[serde(rename = "formula-single-block")]
    FormulaSingleBlock,
    #[serde(rename = "formula-gl2")]
    FormulaGl2,
    #[serde(rename = "formula-diagonalizable")]
    FormulaDiagonalizable,
    #[serde(rename = "brute-force")]
    BruteForce,
}

/// Cycle structure of the projective action of one matrix: the cycle-length
/// multiset (length-1 cycles included), the fixed-point count, the
/// permutation sign, the producing path, and the scalar order when the path
/// establishes one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub cycles: BTreeMap<u64, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    pub fixed: u64,
    pub sign: i8,
    pub source: CycleSource,
}

impl CycleReport {
    fn from_cycles(
        cycles: BTreeMap<u64, u64>,
        ell: Option<u64>,
        source: CycleSource,
        expected_points: u64,
    ) -> Result<CycleReport> {
        let total: u64 = cycles.iter().map(|(len, count)| len * count).sum();
        if total != expected_points {
            return Err(Error::consistency(format!(
                "cycle lengths sum to {total}, but the projective space has {expected_points} points"
            )));
        }
        let fixed = cycles.get(&1).copied().unwrap_or(0);
        let transpositions: u64 = cycles.iter().map(|(len, count)| (len - 1) * count).sum();
        let sign = if transpositions % 2 == 0 { 1 } else { -1 };
        Ok(CycleReport { cycles, ell, fixed, sign, source })
    }

    pub fn total_points(&self) -> u64 {
        self.cycles.iter().map(|(len, count)| len * count).sum()
    }
}

/// `(q^m - 1)/(q - 1)`, the number of points of `P^{m-1}(F_q)`.
pub fn projective_point_count(q: u64, m: u32) -> Result<u64> {
    let qm = q
        .checked_pow(m)
        .ok_or_else(|| Error::capacity(format!("{q}^{m} overflows the working word size")))?;
    Ok((qm - 1) / (q - 1))
}

/// Number of fixed points of the projective action of `q_mat`: the sum of
/// `(q^a - 1)/(q - 1)` over the eigenvalues in `F_q`, where `a` is the
/// eigenspace dimension `dim ker(Q - lambda I)`.
pub fn fixed_point_count(q_mat: &MatFq) -> Result<u64> {
    Ok(eigenvalue_fixed_points(q_mat)?.iter().map(|(_, _, pts)| pts).sum())
}

/// Per-eigenvalue breakdown behind [`fixed_point_count`]: for each distinct
/// eigenvalue in the base field, its eigenspace dimension and the number of
/// projective points it fixes. Sorted by eigenvalue.
pub fn eigenvalue_fixed_points(q_mat: &MatFq) -> Result<Vec<(FieldElem, usize, u64)>> {
    let m = q_mat.dim();
    if m < 2 {
        return Err(Error::domain("fixed-point count requires dimension at least 2"));
    }
    if !q_mat.is_invertible() {
        return Err(Error::domain("fixed-point count requires an invertible matrix"));
    }
    let field = q_mat.field().clone();
    let q = field.order();
    let cp = q_mat.charpoly();
    let mut out = Vec::new();
    for lambda in field.elements() {
        if !cp.eval(&lambda).is_zero() {
            continue;
        }
        let shifted = q_mat.sub(&MatFq::scalar(&field, m, &lambda));
        let dim = m - shifted.rank();
        let mut points = projective_point_count(q, dim as u32)?;
        if fault::active("fixedpoints") {
            points += 1;
        }
        out.push((lambda, dim, points));
    }
    Ok(out)
}

/// Cycle counts of the projective action of the hypercompanion matrix of
/// `phi^k`, by the per-block counting formula: for each `j <= k`, there are
/// `(q^{jd} - q^{jd-d}) / ((q-1) f_j)` cycles of length `f_j`, where `f_j`
/// is the order of `phi^j` up to scalars. Every division must be exact.
pub fn block_cycle_counts(phi: &Poly, k: u32) -> Result<BTreeMap<u64, u64>> {
    if !phi.is_irreducible()? {
        return Err(Error::domain("cycle-count formula requires an irreducible polynomial"));
    }
    let d = phi.degree().unwrap() as u32;
    let q = phi.field().order();
    let mut cycles: BTreeMap<u64, u64> = BTreeMap::new();
    let mut power = Poly::one(phi.field());
    for j in 1..=k {
        power = &power * phi;
        let f_j = power.projective_order()?;
        let qjd = q
            .checked_pow(j * d)
            .ok_or_else(|| Error::capacity(format!("{q}^{} overflows", j * d)))?;
        let numerator = qjd - qjd / q.pow(d);
        let denominator = (q - 1) * f_j;
        if numerator % denominator != 0 {
            return Err(Error::consistency(format!(
                "({qjd} - {qjd}/q^d) is not divisible by (q-1)*{f_j}; the counting formula was misapplied"
            )));
        }
        *cycles.entry(f_j).or_insert(0) += numerator / denominator;
    }
    if fault::active("fripertinger") {
        if let Some((&len, _)) = cycles.iter().next_back() {
            *cycles.get_mut(&len).unwrap() += 1;
        }
    }
    Ok(cycles)
}

/// Order of `phi^j` up to scalars, without searching: `s * p^t` where `s`
/// is the order of `phi` up to scalars and `t` is the least exponent with
/// `p^t >= j`. Cross-validated against the direct search by the sweeps.
pub fn projective_order_of_power(phi: &Poly, j: u32) -> Result<u64> {
    if !phi.is_irreducible()? {
        return Err(Error::domain("fast order formula requires an irreducible polynomial"));
    }
    let p = phi.field().characteristic();
    let base = if fault::active("subexp") { phi.order()? } else { phi.projective_order()? };
    let mut t_pow = 1u64;
    while t_pow < j as u64 {
        t_pow = t_pow
            .checked_mul(p)
            .ok_or_else(|| Error::capacity("p^t overflows the working word size".to_string()))?;
    }
    Ok(base * t_pow)
}

/// Least `ell >= 1` with `Q^ell` scalar (the order of `Q` in `PGL_m`).
pub fn pgl_order(q_mat: &MatFq) -> Result<u64> {
    if !q_mat.is_invertible() {
        return Err(Error::domain("order in PGL requires an invertible matrix"));
    }
    let group_bound: u64 = {
        let q = q_mat.field().order();
        let m = q_mat.dim() as u32;
        // |GL_m(F_q)| is a safe terminating bound
        (0..m)
            .try_fold(1u64, |acc, i| {
                let qm = q.checked_pow(m)?;
                let qi = q.checked_pow(i)?;
                acc.checked_mul(qm - qi)
            })
            .unwrap_or(u64::MAX)
    };
    let mut power = q_mat.clone();
    for ell in 1..=group_bound {
        if power.is_scalar() {
            let ell = if fault::active("gl2") { ell + 1 } else { ell };
            return Ok(ell);
        }
        power = power.mul(q_mat);
    }
    Err(Error::consistency("no power of an invertible matrix became scalar".to_string()))
}

/// Cycle structure of a `GL_2` action: all points not fixed lie in cycles of
/// length exactly `ell = pgl_order(Q)`.
pub fn gl2_cycle_structure(q_mat: &MatFq) -> Result<CycleReport> {
    if q_mat.dim() != 2 {
        return Err(Error::domain("this law applies to 2x2 matrices only"));
    }
    let q = q_mat.field().order();
    let ell = pgl_order(q_mat)?;
    let fixed = fixed_point_count(q_mat)?;
    let total = q + 1;
    let moving = total - fixed;
    let mut cycles = BTreeMap::new();
    if fixed > 0 {
        cycles.insert(1, fixed);
    }
    if moving > 0 {
        if ell == 0 || moving % ell != 0 {
            return Err(Error::consistency(format!(
                "{moving} non-fixed points do not split into cycles of length {ell}"
            )));
        }
        *cycles.entry(ell).or_insert(0) += moving / ell;
    }
    CycleReport::from_cycles(cycles, Some(ell), CycleSource::FormulaGl2, total)
}

/// Uniform-cycle criterion for a matrix that is diagonalizable over the
/// algebraic closure (squarefree minimal polynomial): if every ratio of
/// distinct eigenvalues has one common multiplicative order `ell`, the
/// action consists of fixed points and `ell`-cycles only, and that report is
/// returned. `Ok(None)` means the hypotheses are genuinely not met;
/// a non-diagonalizable input is a domain error instead.
pub fn uniform_cycle_structure(q_mat: &MatFq) -> Result<Option<CycleReport>> {
    if !q_mat.is_invertible() {
        return Err(Error::domain("uniform-cycle criterion requires an invertible matrix"));
    }
    let minpoly = q_mat.minpoly();
    if minpoly.factor()?.iter().any(|(_, k)| *k > 1) {
        return Err(Error::domain(
            "matrix is not diagonalizable over the algebraic closure (repeated factor in its minimal polynomial)",
        ));
    }
    let eigenvalues = eigenvalues_in_splitting_field(q_mat)?;
    let mut common_order: Option<u64> = None;
    for i in 0..eigenvalues.len() {
        for j in 0..eigenvalues.len() {
            if i == j {
                continue;
            }
            let ratio = &eigenvalues[i] * &eigenvalues[j].inverse()?;
            let order = ratio.multiplicative_order()?;
            match common_order {
                None => common_order = Some(order),
                Some(ell) if ell != order => return Ok(None),
                Some(_) => {}
            }
        }
    }
    let q = q_mat.field().order();
    let total = projective_point_count(q, q_mat.dim() as u32)?;
    // no pairs means a single eigenvalue, and diagonalizable forces scalar
    let ell = common_order.unwrap_or(1);
    let scalar_order = pgl_order(q_mat)?;
    if ell != scalar_order {
        return Err(Error::consistency(format!(
            "eigenvalue-ratio order {ell} disagrees with the scalar order {scalar_order}"
        )));
    }
    let fixed = fixed_point_count(q_mat)?;
    let moving = total - fixed;
    let mut cycles = BTreeMap::new();
    if fixed > 0 {
        cycles.insert(1, fixed);
    }
    if moving > 0 {
        if moving % ell != 0 {
            return Err(Error::consistency(format!(
                "{moving} non-fixed points do not split into cycles of length {ell}"
            )));
        }
        *cycles.entry(ell).or_insert(0) += moving / ell;
    }
    Ok(Some(CycleReport::from_cycles(
        cycles,
        Some(ell),
        CycleSource::FormulaDiagonalizable,
        total,
    )?))
}

/// Distinct eigenvalues of `q_mat`, computed inside `F_{q^s}` where `s` is
/// the lcm of the degrees of the irreducible factors of the characteristic
/// polynomial (the smallest field containing every eigenvalue).
fn eigenvalues_in_splitting_field(q_mat: &MatFq) -> Result<Vec<FieldElem>> {
    let field = q_mat.field().clone();
    let cp = q_mat.charpoly();
    let factors = cp.factor()?;
    let s = factors
        .iter()
        .map(|(phi, _)| phi.degree().unwrap() as u64)
        .fold(1u64, num_integer::lcm);
    let expected: usize = factors.iter().map(|(phi, _)| phi.degree().unwrap()).sum();
    if s == 1 {
        // all eigenvalues already live in the base field
        let mut out = Vec::new();
        for (phi, _) in &factors {
            out.push(-&phi.coeff(0));
        }
        return Ok(out);
    }
    let ext = Field::new(field.characteristic(), field.extension_degree() * s as u32)?;
    let embed = embedding(&field, &ext)?;
    let cp_ext = Poly::from_coeffs(&ext, cp.coeffs().iter().map(&embed).collect());
    let mut out = Vec::new();
    for lambda in ext.elements() {
        if cp_ext.eval(&lambda).is_zero() {
            out.push(lambda);
        }
    }
    if out.len() != expected {
        return Err(Error::consistency(format!(
            "found {} eigenvalues in the splitting field, expected {expected}",
            out.len()
        )));
    }
    Ok(out)
}

/// A field embedding `F_{p^e} -> F_{p^{e*s}}`, realized by sending the
/// generator to a root of the small field's modulus in the big field.
fn embedding(small: &Field, big: &Field) -> Result<Box<dyn Fn(&FieldElem) -> FieldElem>> {
    let big = big.clone();
    if small.extension_degree() == 1 {
        return Ok(Box::new(move |c: &FieldElem| big.from_int(c.coeffs()[0] as i64)));
    }
    let modulus: Vec<i64> = small.modulus().unwrap().iter().map(|&c| c as i64).collect();
    let g = Poly::from_ints(&big, &modulus);
    let root = big
        .elements()
        .into_iter()
        .find(|x| g.eval(x).is_zero())
        .ok_or_else(|| Error::consistency("modulus has no root in the extension field".to_string()))?;
    Ok(Box::new(move |c: &FieldElem| {
        let mut acc = big.zero();
        for &digit in c.coeffs().iter().rev() {
            acc = &(&acc * &root) + &big.from_int(digit as i64);
        }
        acc
    }))
}

/// Full dispatcher. Routes to the cheapest applicable law and records which
/// path produced the report:
/// 1. a single elementary divisor: per-block counting formula;
/// 2. `m = 2`: the `GL_2` law;
/// 3. diagonalizable with uniform eigenvalue-ratio orders: that law;
/// 4. otherwise brute force over the realized permutation.
pub fn cycle_structure(q_mat: &MatFq) -> Result<CycleReport> {
    if !q_mat.is_invertible() {
        return Err(Error::domain("cycle structure requires an invertible matrix"));
    }
    let q = q_mat.field().order();
    let total = projective_point_count(q, q_mat.dim() as u32)?;
    let divisors = q_mat.elementary_divisors()?;
    if divisors.len() == 1 {
        let (phi, k) = &divisors[0];
        let cycles = block_cycle_counts(phi, *k)?;
        return CycleReport::from_cycles(cycles, None, CycleSource::FormulaSingleBlock, total);
    }
    if q_mat.dim() == 2 {
        return gl2_cycle_structure(q_mat);
    }
    let diagonalizable = q_mat.minpoly().factor()?.iter().all(|(_, k)| *k == 1);
    if diagonalizable {
        if let Some(report) = uniform_cycle_structure(q_mat)? {
            return Ok(report);
        }
    }
    brute_force_cycle_structure(q_mat)
}

/// The authority: realize the permutation and read off its cycles.
pub fn brute_force_cycle_structure(q_mat: &MatFq) -> Result<CycleReport> {
    let perm = projective::action_permutation(q_mat)?;
    let ct = perm.cycle_type();
    let total = projective_point_count(q_mat.field().order(), q_mat.dim() as u32)?;
    CycleReport::from_cycles(ct.cycles, None, CycleSource::BruteForce, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::monic_irreducibles;

    fn f(p: u64, e: u32) -> Field {
        Field::new(p, e).unwrap()
    }

    fn mat(field: &Field, rows: &[Vec<i64>]) -> MatFq {
        MatFq::from_ints(field, rows).unwrap()
    }

    fn brute_cycles(q_mat: &MatFq) -> BTreeMap<u64, u64> {
        projective::action_permutation(q_mat).unwrap().cycle_type().cycles
    }

    #[test]
    fn fixed_point_examples() {
        let f3 = f(3, 1);
        assert_eq!(fixed_point_count(&MatFq::identity(&f3, 2)).unwrap(), 4);

        let d = mat(&f3, &[vec![1, 0], vec![0, 2]]);
        assert_eq!(fixed_point_count(&d).unwrap(), 2);
        let brute = projective::action_permutation(&d).unwrap().cycle_type().fixed;
        assert_eq!(brute, 2);

        // x^2 + 1 has no root in F_3
        let r = mat(&f3, &[vec![0, 2], vec![1, 0]]);
        assert_eq!(fixed_point_count(&r).unwrap(), 0);
    }

    #[test]
    fn block_cycle_count_examples() {
        let f2 = f(2, 1);
        let f3 = f(3, 1);

        // brute-force oracle first: H((x+1)^2) = [[1,0],[1,1]]
        let h = crate::fqmat::hypercompanion(&Poly::from_ints(&f2, &[1, 1]), 2).unwrap();
        assert_eq!(h, mat(&f2, &[vec![1, 0], vec![1, 1]]));
        let brute = brute_cycles(&h);
        assert_eq!(brute, BTreeMap::from([(1, 1), (2, 1)]));
        let formula = block_cycle_counts(&Poly::from_ints(&f2, &[1, 1]), 2).unwrap();
        assert_eq!(formula, brute);

        let phi = Poly::from_ints(&f3, &[1, 0, 1]);
        let h = crate::fqmat::hypercompanion(&phi, 1).unwrap();
        let brute = brute_cycles(&h);
        assert_eq!(brute, BTreeMap::from([(2, 2)]));
        assert_eq!(block_cycle_counts(&phi, 1).unwrap(), brute);

        // single point of P^0, fixed
        let linear = Poly::from_ints(&f3, &[-1, 1]);
        assert_eq!(block_cycle_counts(&linear, 1).unwrap(), BTreeMap::from([(1, 1)]));

        assert!(block_cycle_counts(&Poly::from_ints(&f3, &[-1, 0, 1]), 1).is_err());
    }

    #[test]
    fn fast_order_of_power_examples() {
        let f2 = f(2, 1);
        let f3 = f(3, 1);
        let xp1_f2 = Poly::from_ints(&f2, &[1, 1]);
        assert_eq!(projective_order_of_power(&xp1_f2, 2).unwrap(), 2);
        assert_eq!(xp1_f2.pow(2).projective_order().unwrap(), 2);

        let phi = Poly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(projective_order_of_power(&phi, 1).unwrap(), phi.projective_order().unwrap());

        let xp1_f3 = Poly::from_ints(&f3, &[1, 1]);
        assert_eq!(projective_order_of_power(&xp1_f3, 2).unwrap(), 3);
        assert_eq!(xp1_f3.pow(2).projective_order().unwrap(), 3);
    }

    #[test]
    fn fast_order_cross_validation() {
        for q in [2u64, 3, 5] {
            let field = f(q, 1);
            for d in 1..=3usize {
                for phi in monic_irreducibles(&field, d) {
                    if phi.coeff(0).is_zero() {
                        continue;
                    }
                    for j in 1..=4u32 {
                        assert_eq!(
                            projective_order_of_power(&phi, j).unwrap(),
                            phi.pow(j).projective_order().unwrap(),
                            "mismatch for {phi} over F_{q}, j={j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pgl_order_examples() {
        let f2 = f(2, 1);
        let f3 = f(3, 1);
        assert_eq!(pgl_order(&MatFq::scalar(&f3, 2, &f3.from_int(2))).unwrap(), 1);
        assert_eq!(pgl_order(&mat(&f3, &[vec![0, 2], vec![1, 0]])).unwrap(), 2);
        assert_eq!(pgl_order(&mat(&f2, &[vec![1, 0], vec![1, 1]])).unwrap(), 2);
    }

    #[test]
    fn gl2_examples() {
        let f3 = f(3, 1);
        let f5 = f(5, 1);
        let r = gl2_cycle_structure(&mat(&f3, &[vec![0, 2], vec![1, 0]])).unwrap();
        assert_eq!(r.cycles, BTreeMap::from([(2, 2)]));
        assert_eq!(r.ell, Some(2));
        assert_eq!(r.fixed, 0);
        assert_eq!(r.cycles, brute_cycles(&mat(&f3, &[vec![0, 2], vec![1, 0]])));

        let r = gl2_cycle_structure(&MatFq::identity(&f5, 2)).unwrap();
        assert_eq!(r.cycles, BTreeMap::from([(1, 6)]));
        assert_eq!(r.ell, Some(1));

        let r = gl2_cycle_structure(&mat(&f3, &[vec![1, 0], vec![0, 2]])).unwrap();
        assert_eq!(r.fixed, 2);
        assert_eq!(r.cycles, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(r.ell, Some(2));

        assert!(gl2_cycle_structure(&MatFq::identity(&f5, 3)).is_err());
    }

    #[test]
    fn uniform_cycle_examples() {
        let f7 = f(7, 1);
        let d = mat(&f7, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 4]]);
        let r = uniform_cycle_structure(&d).unwrap().unwrap();
        assert_eq!(r.ell, Some(3));
        assert_eq!(r.fixed, 3);
        assert_eq!(r.cycles, BTreeMap::from([(1, 3), (3, 18)]));
        assert_eq!(r.total_points(), 57);
        assert_eq!(r.cycles, brute_cycles(&d));

        let scalar = MatFq::scalar(&f7, 2, &f7.from_int(3));
        let r = uniform_cycle_structure(&scalar).unwrap().unwrap();
        assert_eq!(r.ell, Some(1));
        assert_eq!(r.fixed, 8);

        // two eigenvalues, single ratio of order 3
        let d = mat(&f7, &[vec![1, 0], vec![0, 2]]);
        let r = uniform_cycle_structure(&d).unwrap().unwrap();
        assert_eq!(r.ell, Some(3));

        // ratios 2, 3, 4 have orders 4, 4, 2 mod 5: not uniform
        let f5 = f(5, 1);
        let d = mat(&f5, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]);
        assert!(uniform_cycle_structure(&d).unwrap().is_none());

        // non-diagonalizable is a domain error, not "absent"
        let f3 = f(3, 1);
        let jordan = mat(&f3, &[vec![1, 1], vec![0, 1]]);
        assert!(matches!(uniform_cycle_structure(&jordan), Err(Error::Domain(_))));
    }

    #[test]
    fn uniform_cycle_with_extension_field_eigenvalues() {
        // charpoly of the companion of x^2+1 over F_3 splits only in F_9
        let f3 = f(3, 1);
        let c = mat(&f3, &[vec![0, 2], vec![1, 0]]);
        let r = uniform_cycle_structure(&c).unwrap().unwrap();
        assert_eq!(r.cycles, brute_cycles(&c));
    }

    #[test]
    fn dispatcher_examples() {
        let f2 = f(2, 1);
        let f3 = f(3, 1);
        let f5 = f(5, 1);

        let r = cycle_structure(&mat(&f2, &[vec![1, 0], vec![1, 1]])).unwrap();
        assert_eq!(r.source, CycleSource::FormulaSingleBlock);
        assert_eq!(r.cycles, BTreeMap::from([(1, 1), (2, 1)]));

        let d = mat(&f5, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]);
        let r = cycle_structure(&d).unwrap();
        assert_eq!(r.source, CycleSource::BruteForce);
        assert_eq!(r.total_points(), 31);
        assert_eq!(r.cycles, brute_cycles(&d));

        let r = cycle_structure(&MatFq::identity(&f3, 2)).unwrap();
        assert_eq!(r.cycles, BTreeMap::from([(1, 4)]));

        assert!(cycle_structure(&mat(&f3, &[vec![1, 1], vec![1, 1]])).is_err());
    }

    #[test]
    fn report_serialization_shape() {
        let f3 = f(3, 1);
        let r = cycle_structure(&MatFq::identity(&f3, 2)).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"cycles":{"1":4},"ell":1,"fixed":4,"sign":1,"source":"formula-gl2"}"#
        );
    }
}
