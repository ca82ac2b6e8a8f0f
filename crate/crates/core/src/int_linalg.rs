//! Exact integer linear algebra: Smith normal form, integer kernels,
//! determinants, characteristic polynomials, and cyclotomic factorization.
//!
//! Lattice computations (exponential lattices, torsion enumeration, dual
//! characters, lattice-automorphism orders) must be exact, so everything
//! here uses checked integer arithmetic and reports overflow instead of
//! wrapping.

use crate::error::{Error, Result};
use crate::linalg::RMat;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Internal("ragged integer matrix".into()));
        }
        let mut m = IntMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.rows {
            return Err(Error::Internal("integer matrix shape mismatch".into()));
        }
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let p = self[(i, k)]
                        .checked_mul(other[(k, j)])
                        .ok_or(Error::IntegerOverflow)?;
                    acc = acc.checked_add(p).ok_or(Error::IntegerOverflow)?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMat::identity(self.rows)
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_real(&self) -> RMat {
        RMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] as f64)
    }

    pub fn rows_as_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)]).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant by fraction-free Gaussian elimination (Bareiss) over i128.
pub fn det(m: &IntMat) -> Result<i64> {
    if m.rows != m.cols {
        return Err(Error::Internal("determinant of non-square matrix".into()));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<i128> = m.data.iter().map(|&v| v as i128).collect();
    let at = |a: &Vec<i128>, i: usize, j: usize| a[i * n + j];
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if at(&a, k, k) == 0 {
            let swap = (k + 1..n).find(|&i| at(&a, i, k) != 0);
            match swap {
                Some(i) => {
                    for j in 0..n {
                        a.swap(k * n + j, i * n + j);
                    }
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = at(&a, i, j)
                    .checked_mul(at(&a, k, k))
                    .and_then(|x| x.checked_sub(at(&a, i, k).checked_mul(at(&a, k, j))?))
                    .ok_or(Error::IntegerOverflow)?;
                a[i * n + j] = num / prev;
            }
            a[i * n + k] = 0;
        }
        prev = at(&a, k, k);
    }
    let d = sign * at(&a, n - 1, n - 1);
    i64::try_from(d).map_err(|_| Error::IntegerOverflow)
}

/// Smith normal form: unimodular `u`, `v` with `u * a * v = s`, `s` diagonal
/// with nonnegative entries satisfying the divisibility chain.
pub struct Snf {
    pub s: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        (0..self.s.rows.min(self.s.cols))
            .filter(|&i| self.s[(i, i)] != 0)
            .count()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)])
            .collect()
    }
}

fn checked_row_op(m: &mut IntMat, dst: usize, src: usize, factor: i64) -> Result<()> {
    for j in 0..m.cols {
        let add = factor
            .checked_mul(m[(src, j)])
            .ok_or(Error::IntegerOverflow)?;
        m[(dst, j)] = m[(dst, j)].checked_add(add).ok_or(Error::IntegerOverflow)?;
    }
    Ok(())
}

fn checked_col_op(m: &mut IntMat, dst: usize, src: usize, factor: i64) -> Result<()> {
    for i in 0..m.rows {
        let add = factor
            .checked_mul(m[(i, src)])
            .ok_or(Error::IntegerOverflow)?;
        m[(i, dst)] = m[(i, dst)].checked_add(add).ok_or(Error::IntegerOverflow)?;
    }
    Ok(())
}

fn swap_rows(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        let t = m[(a, j)];
        m[(a, j)] = m[(b, j)];
        m[(b, j)] = t;
    }
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let t = m[(i, a)];
        m[(i, a)] = m[(i, b)];
        m[(i, b)] = t;
    }
}

pub fn smith_normal_form(a: &IntMat) -> Result<Snf> {
    let mut s = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut v = IntMat::identity(a.cols);
    let steps_cap = 10_000 + 200 * (a.rows + a.cols) * (a.rows + a.cols);
    let mut steps = 0usize;
    let k_max = a.rows.min(a.cols);
    for k in 0..k_max {
        'pivot: loop {
            steps += 1;
            if steps > steps_cap {
                return Err(Error::Internal(
                    "smith normal form did not stabilize".into(),
                ));
            }
            // Find the entry of smallest nonzero magnitude in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in k..s.rows {
                for j in k..s.cols {
                    if s[(i, j)] != 0
                        && best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivot; // trailing block is zero
            };
            swap_rows(&mut s, k, pi);
            swap_rows(&mut u, k, pi);
            swap_cols(&mut s, k, pj);
            swap_cols(&mut v, k, pj);
            let p = s[(k, k)];
            // Clear the pivot column and row.
            let mut dirty = false;
            for i in k + 1..s.rows {
                let q = s[(i, k)].div_euclid(p);
                if q != 0 {
                    checked_row_op(&mut s, i, k, -q)?;
                    checked_row_op(&mut u, i, k, -q)?;
                }
                if s[(i, k)] != 0 {
                    dirty = true;
                }
            }
            for j in k + 1..s.cols {
                let q = s[(k, j)].div_euclid(p);
                if q != 0 {
                    checked_col_op(&mut s, j, k, -q)?;
                    checked_col_op(&mut v, j, k, -q)?;
                }
                if s[(k, j)] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Divisibility fix: fold any trailing entry not divisible by the
            // pivot into the pivot row and keep reducing.
            for i in k + 1..s.rows {
                for j in k + 1..s.cols {
                    if s[(i, j)] % p != 0 {
                        checked_row_op(&mut s, k, i, 1)?;
                        checked_row_op(&mut u, k, i, 1)?;
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if s[(k, k)] < 0 {
            for j in 0..s.cols {
                s[(k, j)] = -s[(k, j)];
            }
            for j in 0..u.cols {
                u[(k, j)] = -u[(k, j)];
            }
        }
    }
    Ok(Snf { s, u, v })
}

/// Integer basis of `{x : a x = 0}`, as matrix columns. The basis is
/// primitive: it extends to a basis of the full lattice.
pub fn integer_kernel(a: &IntMat) -> Result<IntMat> {
    let snf = smith_normal_form(a)?;
    let rank = snf.rank();
    let dim = a.cols - rank;
    let mut out = IntMat::zeros(a.cols, dim);
    for j in rank..a.cols {
        for i in 0..a.cols {
            out[(i, j - rank)] = snf.v[(i, j)];
        }
    }
    Ok(out)
}

/// Characteristic polynomial coefficients (ascending, monic) via the
/// Faddeev-LeVerrier recursion, exact over i128.
pub fn char_poly(m: &IntMat) -> Result<Vec<i128>> {
    if m.rows != m.cols {
        return Err(Error::Internal(
            "characteristic polynomial of non-square".into(),
        ));
    }
    let n = m.rows;
    let a: Vec<i128> = m.data.iter().map(|&v| v as i128).collect();
    let mul = |x: &[i128], y: &[i128]| -> Result<Vec<i128>> {
        let mut out = vec![0i128; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    let p = x[i * n + k]
                        .checked_mul(y[k * n + j])
                        .ok_or(Error::IntegerOverflow)?;
                    acc = acc.checked_add(p).ok_or(Error::IntegerOverflow)?;
                }
                out[i * n + j] = acc;
            }
        }
        Ok(out)
    };
    let trace = |x: &[i128]| -> i128 { (0..n).map(|i| x[i * n + i]).sum() };

    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut mk: Vec<i128> = {
        let mut id = vec![0i128; n * n];
        for i in 0..n {
            id[i * n + i] = 1;
        }
        id
    };
    for k in 1..=n {
        let am = mul(&a, &mk)?;
        let t = trace(&am);
        debug_assert_eq!(t % (k as i128), 0, "LeVerrier division must be exact");
        let ck = -t / (k as i128);
        coeffs[n - k] = ck;
        mk = am;
        for i in 0..n {
            mk[i * n + i] = mk[i * n + i]
                .checked_add(ck)
                .ok_or(Error::IntegerOverflow)?;
        }
    }
    Ok(coeffs)
}

pub fn euler_phi(m: u32) -> u32 {
    let mut result = m;
    let mut n = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients (ascending) of the m-th cyclotomic polynomial.
pub fn cyclotomic(m: u32) -> Vec<i128> {
    // x^m - 1 divided by all lower cyclotomics whose index divides m.
    let mut num = vec![0i128; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic(d);
            num = poly_div_exact(&num, &phi_d).expect("cyclotomic division is exact");
        }
    }
    num
}

/// Exact division of integer polynomials with a monic divisor (ascending
/// coefficients). Returns None when the division leaves a remainder.
pub fn poly_div_exact(num: &[i128], den: &[i128]) -> Option<Vec<i128>> {
    let dn = den.len() - 1;
    assert_eq!(den[dn], 1, "divisor must be monic");
    let mut rem: Vec<i128> = num.to_vec();
    let n = rem.len() - 1;
    if n < dn {
        return if rem.iter().all(|&c| c == 0) {
            Some(vec![0])
        } else {
            None
        };
    }
    let mut quot = vec![0i128; n - dn + 1];
    for k in (0..=n - dn).rev() {
        let q = rem[k + dn];
        quot[k] = q;
        for j in 0..=dn {
            rem[k + j] = rem[k + j].checked_sub(q.checked_mul(den[j])?)?;
        }
    }
    if rem.iter().all(|&c| c == 0) {
        Some(quot)
    } else {
        None
    }
}

fn poly_degree(p: &[i128]) -> usize {
    p.iter().rposition(|&c| c != 0).unwrap_or(0)
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

/// Exact order decision for an integer matrix of determinant +-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOrder {
    Finite(u32),
    Infinite,
    /// Finite but larger than the supported cap.
    BeyondCap,
}

/// Decide the multiplicative order of a unimodular integer matrix.
///
/// Powers up to `cap` are compared to the identity exactly. Failing that,
/// the characteristic polynomial is stripped of cyclotomic factors: a
/// non-cyclotomic remainder certifies an eigenvalue off the unit circle
/// (Kronecker), hence infinite order; a fully cyclotomic polynomial pins the
/// only possible finite order to the lcm `L` of the cyclotomic indices, so
/// `M^L != 1` certifies infinite order as well.
pub fn lattice_order(m: &IntMat, cap: u32) -> Result<LatticeOrder> {
    if m.rows != m.cols {
        return Err(Error::Internal("order of a non-square matrix".into()));
    }
    if m.rows == 0 {
        return Ok(LatticeOrder::Finite(1));
    }
    let mut p = m.clone();
    for n in 1..=cap {
        if p.is_identity() {
            return Ok(LatticeOrder::Finite(n));
        }
        p = p.mul(m)?;
    }
    let mut q = char_poly(m)?;
    let mut indices: Vec<u32> = Vec::new();
    let mut idx = 1u32;
    while poly_degree(&q) > 0 && !euler_phi_floor_exceeds(idx, poly_degree(&q)) {
        let deg_q = poly_degree(&q);
        if (euler_phi(idx) as usize) <= deg_q {
            let phi = cyclotomic(idx);
            if let Some(quot) = poly_div_exact(&q[..=deg_q], &phi) {
                indices.push(idx);
                q = quot;
                continue; // same index again for repeated factors
            }
        }
        idx += 1;
    }
    if poly_degree(&q) > 0 {
        return Ok(LatticeOrder::Infinite);
    }
    let l = indices.iter().fold(1u64, |acc, &i| lcm_u64(acc, i as u64));
    if l <= cap as u64 {
        // All eigenvalues are roots of unity of order dividing l, yet M^l was
        // already seen to differ from the identity: M is quasi-unipotent of
        // infinite order.
        return Ok(LatticeOrder::Infinite);
    }
    let lu = u32::try_from(l).map_err(|_| Error::IntegerOverflow)?;
    let mut p = m.clone();
    let mut overflowed = false;
    for _ in 1..lu {
        match p.mul(m) {
            Ok(next) => p = next,
            Err(Error::IntegerOverflow) => {
                overflowed = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if overflowed {
        // Entry growth beyond i64 cannot happen along a finite cyclic orbit.
        return Ok(LatticeOrder::Infinite);
    }
    if p.is_identity() {
        Ok(LatticeOrder::BeyondCap)
    } else {
        Ok(LatticeOrder::Infinite)
    }
}

/// True once every index >= idx has phi exceeding deg (phi(m) >= sqrt(m/2)).
fn euler_phi_floor_exceeds(idx: u32, deg: usize) -> bool {
    // phi(m) >= sqrt(m/2) for all m >= 1, so indices beyond 2*(deg+1)^2
    // cannot divide a polynomial of degree deg.
    idx as u64 > 2 * (deg as u64 + 1) * (deg as u64 + 1)
}
