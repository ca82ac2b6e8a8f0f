//! Dense complex/real matrix helpers.
//!
//! nalgebra supplies products, adjoints, Hermitian eigendecomposition, and
//! real SVD. On top of that we build the pieces the rest of the crate needs:
//! the exponential of anti-Hermitian matrices, unitary polar factors,
//! eigendecomposition of unitary (normal) matrices via a commuting Hermitian
//! pair, simultaneous diagonalization of commuting anti-Hermitian families,
//! and rank decisions with an explicit ill-conditioning gate.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::rng::stream;
use rand::Rng;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const I: C64 = Complex::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Frobenius distance to the identity.
pub fn dist_to_identity(m: &CMat) -> f64 {
    (m - identity(m.nrows())).norm()
}

/// Commutator `a*b - b*a`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Stack real and imaginary parts into a real vector (column-major).
pub fn to_real_vec(m: &CMat) -> RVec {
    let n = m.len();
    let mut v = RVec::zeros(2 * n);
    for (k, z) in m.iter().enumerate() {
        v[k] = z.re;
        v[n + k] = z.im;
    }
    v
}

/// Real `2·len x d` matrix whose columns are the flattened basis matrices.
pub fn flatten_basis(basis: &[CMat]) -> RMat {
    let d = basis.len();
    if d == 0 {
        return RMat::zeros(0, 0);
    }
    let rows = 2 * basis[0].len();
    let mut m = RMat::zeros(rows, d);
    for (j, b) in basis.iter().enumerate() {
        m.set_column(j, &to_real_vec(b));
    }
    m
}

/// Moore-Penrose pseudoinverse through the SVD.
pub fn pinv(m: &RMat, rel_tol: f64) -> RMat {
    // Thin SVD: u is nrows x k, v_t is k x ncols with k = min(nrows, ncols).
    let svd = m.clone().svd(true, true);
    let k = m.nrows().min(m.ncols());
    let smax = svd.singular_values.max();
    let thr = rel_tol * smax.max(f64::MIN_POSITIVE);
    let mut inv_s = RMat::zeros(k, k);
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > thr {
            inv_s[(i, i)] = 1.0 / s;
        }
    }
    svd.v_t.unwrap().transpose() * inv_s * svd.u.unwrap().transpose()
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues and a unitary
/// matrix of eigenvectors (columns), so `h = v * diag(vals) * v†`.
pub fn hermitian_eig(h: &CMat) -> (RVec, CMat) {
    // Symmetrize to scrub roundoff before handing to the solver.
    let hs = (h + h.adjoint()) * cr(0.5);
    let se = nalgebra::SymmetricEigen::new(hs);
    (se.eigenvalues, se.eigenvectors)
}

/// `exp(x)` for anti-Hermitian `x` via the Hermitian eigendecomposition of
/// `-i·x`.
pub fn exp_anti_hermitian(x: &CMat) -> CMat {
    let h = x * c(0.0, -1.0);
    let (vals, v) = hermitian_eig(&h);
    let phases = CMat::from_diagonal(&vals.map(|t| c(t.cos(), t.sin())));
    &v * phases * v.adjoint()
}

/// Unitary polar factor of `m`: the unitary `u` minimizing `|m - u|_F`.
///
/// Fails when `m` is too close to singular for the factor to be reliable.
pub fn polar_unitary(m: &CMat) -> Result<CMat> {
    let gram = m.adjoint() * m;
    let (vals, v) = hermitian_eig(&gram);
    let scale = vals.amax().max(f64::MIN_POSITIVE);
    if vals.min() < 1e-4 * scale {
        return Err(Error::ProjectionFailed {
            residual: f64::INFINITY,
        });
    }
    let inv_sqrt = CMat::from_diagonal(&vals.map(|t| cr(1.0 / t.sqrt())));
    Ok(m * &v * inv_sqrt * v.adjoint())
}

fn offdiag_norm(m: &CMat) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Joint eigendecomposition of a family of commuting anti-Hermitian
/// matrices.
///
/// Returns a unitary `v` and, per input matrix, the real phase vector `μ`
/// with `v† x v = diag(i·μ)`. A random real combination of the family is
/// diagonalized and the basis is verified against every member; degenerate
/// mixings are retried with fresh weights.
pub fn simultaneous_diag(mats: &[CMat], seed: u64) -> Result<(CMat, Vec<RVec>)> {
    if mats.is_empty() {
        return Ok((identity(0), Vec::new()));
    }
    let n = mats[0].nrows();
    let herms: Vec<CMat> = mats.iter().map(|x| x * c(0.0, -1.0)).collect();
    let scale: f64 = herms.iter().map(|h| h.norm()).fold(1.0, f64::max);
    let attempts = 12;
    for attempt in 0..attempts {
        let mut rng = stream(seed ^ 0x51d0_57a7, attempt as u64);
        let mut combo = CMat::zeros(n, n);
        for (i, h) in herms.iter().enumerate() {
            // First pass uses fixed incommensurate weights sqrt(2), sqrt(3),
            // sqrt(5), ...; retries draw random weights.
            let w: f64 = if attempt == 0 {
                (i as f64 + 2.0).sqrt()
            } else {
                rng.gen_range(0.25..1.0)
            };
            combo += h * cr(w);
        }
        let (_, v) = hermitian_eig(&combo);
        let mut phases = Vec::with_capacity(herms.len());
        let mut ok = true;
        for h in &herms {
            let d = v.adjoint() * h * &v;
            if offdiag_norm(&d) > 1e-9 * scale {
                ok = false;
                break;
            }
            phases.push(RVec::from_iterator(n, d.diagonal().iter().map(|z| z.re)));
        }
        if ok {
            return Ok((v, phases));
        }
    }
    Err(Error::GenericityFailure { attempts })
}

/// Eigendecomposition of a unitary matrix: eigenvalues (on the unit circle)
/// and a unitary eigenvector matrix.
///
/// A unitary `u` is normal, so its Hermitian and anti-Hermitian parts
/// commute; diagonalizing a generic combination of the two diagonalizes `u`.
pub fn unitary_eig(u: &CMat, seed: u64) -> Result<(Vec<C64>, CMat)> {
    let n = u.nrows();
    let h1 = (u + u.adjoint()) * cr(0.5);
    let h2 = (u - u.adjoint()) * c(0.0, -0.5);
    let attempts = 12;
    for attempt in 0..attempts {
        let mut rng = stream(seed ^ 0x0e1_9e1, attempt as u64);
        let (a, b) = if attempt == 0 {
            (1.0, 0.618_033_988_749_894_9)
        } else {
            (rng.gen_range(0.25..1.0), rng.gen_range(0.25..1.0))
        };
        let (_, v) = hermitian_eig(&(&h1 * cr(a) + &h2 * cr(b)));
        let d = v.adjoint() * u * &v;
        if offdiag_norm(&d) <= 1e-9 * (n as f64).sqrt() {
            let vals: Vec<C64> = d.diagonal().iter().copied().collect();
            return Ok((vals, v));
        }
    }
    Err(Error::GenericityFailure { attempts })
}

/// Rank of a list of singular values (descending) at a relative threshold,
/// with an error when any value sits inside the ambiguity window around the
/// threshold.
///
/// The threshold is `rel_tol * max(s_max, 1)`: every matrix handed to a rank
/// decision in this crate is O(1)-scaled (unitary factors, normalized
/// algebra bases), so the unit floor keeps numerically-zero matrices from
/// promoting roundoff into rank.
pub fn thresholded_rank(svals: &[f64], rel_tol: f64) -> Result<usize> {
    let smax = svals.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return Ok(0);
    }
    let thr = rel_tol * smax.max(1.0);
    for &s in svals {
        if s > thr / 10.0 && s < thr * 10.0 {
            return Err(Error::IllConditioned {
                value: s,
                threshold: thr,
            });
        }
    }
    Ok(svals.iter().filter(|&&s| s >= thr).count())
}

/// Numerical rank of a real matrix.
pub fn rank(m: &RMat, rel_tol: f64) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let svd = m.clone().svd(false, false);
    thresholded_rank(svd.singular_values.as_slice(), rel_tol)
}

/// Orthonormal basis of the kernel of a real matrix, as columns.
pub fn nullspace(m: &RMat, rel_tol: f64) -> Result<RMat> {
    let cols = m.ncols();
    if cols == 0 {
        return Ok(RMat::zeros(0, 0));
    }
    if m.nrows() == 0 {
        return Ok(RMat::identity(cols, cols));
    }
    let svd = m.clone().svd(false, true);
    let r = thresholded_rank(svd.singular_values.as_slice(), rel_tol)?;
    let v_t = svd.v_t.unwrap();
    let dim = cols - r;
    // Rows r.. of v_t span the kernel. v_t has min(nrows, ncols) rows; for a
    // wide matrix the remaining kernel directions are completed by
    // Gram-Schmidt of coordinate vectors against the known rows.
    let mut found: Vec<RVec> = (r..v_t.nrows()).map(|i| v_t.row(i).transpose()).collect();
    if found.len() < dim {
        let mut against: Vec<RVec> = (0..v_t.nrows()).map(|i| v_t.row(i).transpose()).collect();
        for k in 0..cols {
            if found.len() == dim {
                break;
            }
            let mut cand = RVec::zeros(cols);
            cand[k] = 1.0;
            for _ in 0..2 {
                for b in against.iter() {
                    let coef = b.dot(&cand);
                    cand -= b * coef;
                }
            }
            let nn = cand.norm();
            if nn > 1e-8 {
                cand /= nn;
                against.push(cand.clone());
                found.push(cand);
            }
        }
        if found.len() != dim {
            return Err(Error::Internal("kernel basis completion failed".into()));
        }
    }
    let mut basis = RMat::zeros(cols, dim);
    for (j, v) in found.iter().enumerate() {
        basis.set_column(j, v);
    }
    Ok(basis)
}

/// Optimal matching distance between two multisets of unit-modulus complex
/// numbers: the bottleneck cost of the best cyclic alignment of the two
/// angularly sorted lists. Returns infinity on a size mismatch.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let sort_key = |z: &C64| z.arg();
    let mut aa = a.to_vec();
    let mut bb = b.to_vec();
    aa.sort_by(|x, y| sort_key(x).partial_cmp(&sort_key(y)).unwrap());
    bb.sort_by(|x, y| sort_key(x).partial_cmp(&sort_key(y)).unwrap());
    let mut best = f64::INFINITY;
    for shift in 0..n {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            worst = worst.max((aa[i] - bb[(i + shift) % n]).norm());
        }
        best = best.min(worst);
    }
    best
}
