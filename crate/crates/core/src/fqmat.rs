//! Exact linear algebra over finite fields: reduced row echelon form,
//! kernels, characteristic and minimal polynomials, elementary divisors via
//! the Smith normal form of `xI - A` over `F_q[x]`, and the companion /
//! hypercompanion canonical blocks.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fq::{Field, FieldElem, Poly};
use crate::projective::ProjPoint;

/// A square matrix over a [`Field`], stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatFq {
    field: Field,
    m: usize,
    entries: Vec<FieldElem>,
}

impl MatFq {
    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElem>>) -> Result<MatFq> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::domain("matrix must be square"));
        }
        let entries = rows.into_iter().flatten().collect();
        Ok(MatFq { field: field.clone(), m, entries })
    }

    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> Result<MatFq> {
        let elems = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_int(v)).collect())
            .collect();
        MatFq::from_rows(field, elems)
    }

    pub fn identity(field: &Field, m: usize) -> MatFq {
        let mut mat = MatFq::zero(field, m);
        for i in 0..m {
            *mat.at_mut(i, i) = field.one();
        }
        mat
    }

    pub fn zero(field: &Field, m: usize) -> MatFq {
        MatFq { field: field.clone(), m, entries: vec![field.zero(); m * m] }
    }

    pub fn scalar(field: &Field, m: usize, c: &FieldElem) -> MatFq {
        let mut mat = MatFq::zero(field, m);
        for i in 0..m {
            *mat.at_mut(i, i) = c.clone();
        }
        mat
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldElem {
        &self.entries[r * self.m + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut FieldElem {
        &mut self.entries[r * self.m + c]
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.entries[r * self.m..(r + 1) * self.m]
    }

    pub fn mul(&self, rhs: &MatFq) -> MatFq {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        assert_eq!(self.field, rhs.field, "mixed-field arithmetic");
        let mut out = MatFq::zero(&self.field, self.m);
        for i in 0..self.m {
            for k in 0..self.m {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.m {
                    let add = a * rhs.at(k, j);
                    *out.at_mut(i, j) = &*out.at(i, j) + &add;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &MatFq) -> MatFq {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        MatFq { field: self.field.clone(), m: self.m, entries }
    }

    pub fn sub(&self, rhs: &MatFq) -> MatFq {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        MatFq { field: self.field.clone(), m: self.m, entries }
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.m);
        (0..self.m)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.m {
                    acc = &acc + &(self.at(i, j) * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElem::is_zero)
    }

    pub fn is_scalar(&self) -> bool {
        let diag = self.at(0, 0);
        for i in 0..self.m {
            for j in 0..self.m {
                if i == j {
                    if self.at(i, j) != diag {
                        return false;
                    }
                } else if !self.at(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Reduced row echelon form together with the rank.
    pub fn rref(&self) -> (MatFq, usize) {
        let mut mat = self.clone();
        let m = self.m;
        let mut rank = 0;
        for col in 0..m {
            let pivot = (rank..m).find(|&r| !mat.at(r, col).is_zero());
            let Some(pr) = pivot else { continue };
            mat.swap_rows(rank, pr);
            let inv = mat.at(rank, col).inverse().expect("pivot is nonzero");
            for j in 0..m {
                *mat.at_mut(rank, j) = &*mat.at(rank, j) * &inv;
            }
            for r in 0..m {
                if r == rank || mat.at(r, col).is_zero() {
                    continue;
                }
                let factor = mat.at(r, col).clone();
                for j in 0..m {
                    let sub = &factor * mat.at(rank, j);
                    *mat.at_mut(r, j) = &*mat.at(r, j) - &sub;
                }
            }
            rank += 1;
            if rank == m {
                break;
            }
        }
        (mat, rank)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m {
            self.entries.swap(a * self.m + j, b * self.m + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.m
    }

    pub fn inverse(&self) -> Result<MatFq> {
        let m = self.m;
        // row-reduce [A | I]
        let mut aug: Vec<Vec<FieldElem>> = (0..m)
            .map(|i| {
                let mut row: Vec<FieldElem> = self.row(i).to_vec();
                for j in 0..m {
                    row.push(if i == j { self.field.one() } else { self.field.zero() });
                }
                row
            })
            .collect();
        for col in 0..m {
            let pivot = (col..m).find(|&r| !aug[r][col].is_zero());
            let Some(pr) = pivot else {
                return Err(Error::domain("matrix is singular"));
            };
            aug.swap(col, pr);
            let inv = aug[col][col].inverse()?;
            for j in 0..2 * m {
                aug[col][j] = &aug[col][j] * &inv;
            }
            for r in 0..m {
                if r == col || aug[r][col].is_zero() {
                    continue;
                }
                let factor = aug[r][col].clone();
                for j in 0..2 * m {
                    let sub = &factor * &aug[col][j];
                    aug[r][j] = &aug[r][j] - &sub;
                }
            }
        }
        let rows = aug.into_iter().map(|row| row[m..].to_vec()).collect();
        MatFq::from_rows(&self.field, rows)
    }

    /// The kernel line of a rank `m-1` matrix, as a canonical projective
    /// point. Any other rank is a domain error carrying the actual rank.
    pub fn kernel_point(&self) -> Result<ProjPoint> {
        let (r, rank) = self.rref();
        if rank + 1 != self.m {
            return Err(Error::Rank { expected: self.m - 1, actual: rank });
        }
        // locate pivot columns of the RREF
        let mut pivot_col = vec![None; rank];
        let mut col = 0;
        for row in 0..rank {
            while col < self.m && r.at(row, col).is_zero() {
                col += 1;
            }
            pivot_col[row] = Some(col);
        }
        let free_col = (0..self.m)
            .find(|c| !pivot_col.contains(&Some(*c)))
            .expect("rank m-1 leaves exactly one free column");
        let mut v = vec![self.field.zero(); self.m];
        v[free_col] = self.field.one();
        for (row, pc) in pivot_col.iter().enumerate() {
            let pc = pc.unwrap();
            v[pc] = -&*r.at(row, free_col);
        }
        ProjPoint::new(v)
    }

    /// `det(xI - A)`, monic of degree `m`, by cofactor expansion over the
    /// polynomial ring. Exact and comfortably fast at desk scale.
    pub fn charpoly(&self) -> Poly {
        let m = self.m;
        let x = Poly::x(&self.field);
        let grid: Vec<Vec<Poly>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let a = Poly::constant(self.at(i, j).clone());
                        if i == j {
                            &x - &a
                        } else {
                            &Poly::zero(&self.field) - &a
                        }
                    })
                    .collect()
            })
            .collect();
        poly_det(&self.field, &grid)
    }

    /// Monic minimal polynomial: the first power of `A` that is linearly
    /// dependent on lower powers (in the `m^2`-dimensional matrix space).
    pub fn minpoly(&self) -> Poly {
        let m2 = self.m * self.m;
        // echelon basis rows of span{vec(A^0), vec(A^1), ...}, each carrying
        // the combination that produced it
        let mut basis: Vec<(Vec<FieldElem>, Vec<FieldElem>)> = Vec::new();
        let mut power = MatFq::identity(&self.field, self.m);
        for k in 0..=self.m {
            let mut vec_k = power.entries.clone();
            let mut combo = vec![self.field.zero(); self.m + 1];
            combo[k] = self.field.one();
            for (bvec, bcombo) in &basis {
                let lead = bvec.iter().position(|c| !c.is_zero()).unwrap();
                if vec_k[lead].is_zero() {
                    continue;
                }
                let factor = vec_k[lead].clone();
                for i in 0..m2 {
                    let sub = &factor * &bvec[i];
                    vec_k[i] = &vec_k[i] - &sub;
                }
                for i in 0..=self.m {
                    let sub = &factor * &bcombo[i];
                    combo[i] = &combo[i] - &sub;
                }
            }
            if vec_k.iter().all(FieldElem::is_zero) {
                return Poly::from_coeffs(&self.field, combo).monic();
            }
            let lead = vec_k.iter().position(|c| !c.is_zero()).unwrap();
            let inv = vec_k[lead].inverse().expect("leading entry nonzero");
            for c in vec_k.iter_mut() {
                *c = &*c * &inv;
            }
            for c in combo.iter_mut() {
                *c = &*c * &inv;
            }
            basis.push((vec_k, combo));
            power = power.mul(self);
        }
        unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by m");
    }

    /// Elementary divisors: the multiset of prime powers `phi^k` from the
    /// invariant factors of `xI - A` (Smith normal form over `F_q[x]`).
    /// Their product is the characteristic polynomial and their lcm is the
    /// minimal polynomial. Sorted by `(phi, k)`.
    pub fn elementary_divisors(&self) -> Result<Vec<(Poly, u32)>> {
        let m = self.m;
        let x = Poly::x(&self.field);
        let mut grid: Vec<Vec<Poly>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let a = Poly::constant(self.at(i, j).clone());
                        if i == j {
                            &x - &a
                        } else {
                            &Poly::zero(&self.field) - &a
                        }
                    })
                    .collect()
            })
            .collect();
        let invariant_factors = poly_smith_diagonal(&mut grid)?;
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for factor in invariant_factors {
            if factor.degree() == Some(0) {
                continue;
            }
            for (phi, k) in factor.factor()? {
                out.push((phi, k));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(out)
    }

    /// Block-diagonal assembly, used to realize the canonical form of a
    /// matrix from its elementary divisors.
    pub fn block_diag(field: &Field, blocks: &[MatFq]) -> MatFq {
        let m: usize = blocks.iter().map(|b| b.m).sum();
        let mut out = MatFq::zero(field, m);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.m {
                for j in 0..b.m {
                    *out.at_mut(off + i, off + j) = b.at(i, j).clone();
                }
            }
            off += b.m;
        }
        out
    }

    /// Uniformly random invertible matrix.
    pub fn random_invertible<R: Rng>(field: &Field, m: usize, rng: &mut R) -> MatFq {
        loop {
            let entries = (0..m * m)
                .map(|_| field.from_index(rng.gen_range(0..field.order())))
                .collect();
            let mat = MatFq { field: field.clone(), m, entries };
            if mat.is_invertible() {
                return mat;
            }
        }
    }
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.m {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.m {
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

/// Determinant of a grid of polynomials by cofactor expansion.
fn poly_det(field: &Field, grid: &[Vec<Poly>]) -> Poly {
    let n = grid.len();
    if n == 1 {
        return grid[0][0].clone();
    }
    let mut det = Poly::zero(field);
    for (i, row) in grid.iter().enumerate() {
        if row[0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = grid
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, r)| r[1..].to_vec())
            .collect();
        let term = &row[0] * &poly_det(field, &minor);
        det = if i % 2 == 0 { &det + &term } else { &det - &term };
    }
    det
}

/// Diagonal of the Smith normal form of a square polynomial matrix over
/// `F_q[x]`, entries normalized monic, each dividing the next.
fn poly_smith_diagonal(grid: &mut Vec<Vec<Poly>>) -> Result<Vec<Poly>> {
    let n = grid.len();
    let field = grid[0][0].field().clone();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        'outer: loop {
            // smallest-degree nonzero pivot in the remaining block
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if let Some(d) = grid[i][j].degree() {
                        if best.map_or(true, |(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                // remaining block is zero; xI - A never gets here, but keep
                // the general contract
                diag.push(Poly::zero(&field));
                break;
            };
            grid.swap(t, pi);
            for row in grid.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..n {
                if grid[i][t].is_zero() {
                    continue;
                }
                let (q, _) = grid[i][t].divrem(&grid[t][t])?;
                for j in t..n {
                    let sub = &q * &grid[t][j];
                    grid[i][j] = &grid[i][j] - &sub;
                }
                if !grid[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if grid[t][j].is_zero() {
                    continue;
                }
                let (q, _) = grid[t][j].divrem(&grid[t][t])?;
                for i in t..n {
                    let sub = &q * &grid[i][t];
                    grid[i][j] = &grid[i][j] - &sub;
                }
                if !grid[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide everything that remains for the divisibility
            // chain; if not, fold the offending row in and retry
            for i in t + 1..n {
                for j in t + 1..n {
                    if !grid[t][t].divides(&grid[i][j]) {
                        for k in t..n {
                            let add = grid[i][k].clone();
                            grid[t][k] = &grid[t][k] + &add;
                        }
                        continue 'outer;
                    }
                }
            }
            diag.push(grid[t][t].monic());
            break;
        }
    }
    Ok(diag)
}

/// The companion matrix of a monic polynomial: ones on the subdiagonal and
/// the negated coefficients down the last column.
pub fn companion(phi: &Poly) -> Result<MatFq> {
    if !phi.is_monic() {
        return Err(Error::domain("companion matrix requires a monic polynomial"));
    }
    let d = phi.degree().filter(|&d| d >= 1).ok_or_else(|| {
        Error::domain("companion matrix requires degree at least 1")
    })?;
    let field = phi.field().clone();
    let mut mat = MatFq::zero(&field, d);
    for i in 0..d - 1 {
        *mat.at_mut(i + 1, i) = field.one();
    }
    for i in 0..d {
        *mat.at_mut(i, d - 1) = -&phi.coeff(i);
    }
    Ok(mat)
}

/// The hypercompanion matrix of `phi^k`: companion blocks of `phi` on the
/// diagonal, with a single 1 in the top-right corner of each subdiagonal
/// block. `phi` must be monic irreducible.
pub fn hypercompanion(phi: &Poly, k: u32) -> Result<MatFq> {
    if !phi.is_irreducible()? {
        return Err(Error::domain("hypercompanion matrix requires an irreducible polynomial"));
    }
    if k == 0 {
        return Err(Error::domain("exponent must be positive"));
    }
    let c = companion(phi)?;
    let d = c.dim();
    let k = k as usize;
    let field = phi.field().clone();
    let mut mat = MatFq::zero(&field, d * k);
    for b in 0..k {
        for i in 0..d {
            for j in 0..d {
                *mat.at_mut(b * d + i, b * d + j) = c.at(i, j).clone();
            }
        }
        if b > 0 {
            *mat.at_mut(b * d, b * d - 1) = field.one();
        }
    }
    Ok(mat)
}

/// Every matrix in `GL_m(F_q)`, in lexicographic entry order. Only sensible
/// for the tiny groups the exhaustive sweeps use.
pub fn enumerate_gl(field: &Field, m: usize) -> Vec<MatFq> {
    let q = field.order();
    let total = q.pow((m * m) as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut n = idx;
        let entries: Vec<FieldElem> = (0..m * m)
            .map(|_| {
                let e = field.from_index(n % q);
                n /= q;
                e
            })
            .collect();
        let mat = MatFq { field: field.clone(), m, entries };
        if mat.is_invertible() {
            out.push(mat);
        }
    }
    out
}
