//! Dense complex linear algebra shared by the other modules.
//!
//! Everything here is double precision and deterministic: the eigensolver is
//! nalgebra's symmetric (Hermitian) solver with a fixed descending sort, and
//! all random matrices are drawn from caller-supplied ChaCha streams. The
//! operator-space conventions are fixed once here and reused everywhere:
//! matrices vectorize row-major, so `vec(A X B) = (A kron B^T) vec(X)` and the
//! Hilbert-Schmidt basis is the matrix units `E_ab` ordered by `(a, b)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Dense complex matrix used throughout the crate.
pub type CMat = DMatrix<Complex64>;
/// Dense complex vector.
pub type CVec = DVector<Complex64>;

/// Real number as a complex scalar.
pub fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Max entrywise deviation of `m` from its adjoint.
pub fn hermitian_deviation(m: &CMat) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian part `(m + m^*)/2`; removes antisymmetric float drift.
pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Max entrywise modulus, the norm used for entrywise identity checks.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian eigendecomposition with eigenvalues sorted nonincreasing.
/// Returns `(eigenvalues, u)` where column `i` of `u` pairs with value `i`.
pub fn eigh_desc(m: &CMat) -> (Vec<f64>, CMat) {
    assert_eq!(m.nrows(), m.ncols(), "eigh needs a square matrix");
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let vals = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut u = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        u.set_column(dst, &se.eigenvectors.column(src));
    }
    (vals, u)
}

/// Eigenvalues only, sorted nonincreasing.
pub fn eigvalsh_desc(m: &CMat) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let mut vals: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals
}

/// Trace norm `trace|M|` of a Hermitian matrix: sum of |eigenvalues|.
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    eigvalsh_desc(m).iter().map(|v| v.abs()).sum()
}

/// Operator (spectral) norm via the largest eigenvalue of `M^* M`.
pub fn operator_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    eigvalsh_desc(&gram)
        .first()
        .map(|v| v.max(0.0).sqrt())
        .unwrap_or(0.0)
}

/// Spectral square root of a PSD matrix; eigenvalues below zero are clamped.
pub fn sqrt_psd(m: &CMat) -> CMat {
    let (vals, u) = eigh_desc(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| cr(v.max(0.0).sqrt())),
    ));
    &u * d * u.adjoint()
}

/// Rank of the span of `vectors`, judged by Gram eigenvalues above `tol`.
pub fn span_rank(vectors: &[CVec], tol: f64) -> usize {
    let k = vectors.len();
    if k == 0 {
        return 0;
    }
    let mut gram = CMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = vectors[j].dotc(&vectors[i]);
        }
    }
    eigvalsh_desc(&gram).iter().filter(|&&v| v > tol).count()
}

/// Matrix unit `E_ab` of size `n`: one at `(a, b)`, zero elsewhere.
pub fn matrix_unit(n: usize, a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(a, b)] = cr(1.0);
    m
}

/// Rank-one operator `x (x) y^*`, mapping `v` to `<v, y> x`.
pub fn rank_one(x: &CVec, y: &CVec) -> CMat {
    x * y.adjoint()
}

/// Row-major vectorization: `vec(X)[a * ncols + b] = X[(a, b)]`.
pub fn vec_rm(m: &CMat) -> CVec {
    CVec::from_iterator(
        m.nrows() * m.ncols(),
        (0..m.nrows())
            .flat_map(|a| (0..m.ncols()).map(move |b| (a, b)))
            .map(|(a, b)| m[(a, b)]),
    )
}

/// Inverse of [`vec_rm`] for an `r x c` matrix.
pub fn unvec_rm(v: &CVec, r: usize, c: usize) -> CMat {
    assert_eq!(v.len(), r * c, "vector length must be r * c");
    CMat::from_fn(r, c, |a, b| v[a * c + b])
}

/// Superoperator of `X -> A X B` in the row-major vectorization:
/// `A kron B^T`.
pub fn sandwich_superop(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(&b.transpose())
}

/// Inner product linear in the first slot: `<u, v> = sum_i u_i conj(v_i)`.
pub fn inner(u: &CVec, v: &CVec) -> Complex64 {
    v.dotc(u)
}

/// Standard complex Gaussian (Ginibre) matrix with iid `N(0,1) + i N(0,1)`
/// entries.
pub fn ginibre(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMat {
    use rand::distributions::Distribution;
    let normal = StandardNormal;
    CMat::from_fn(r, c, |_, _| {
        Complex64::new(normal.sample(rng), normal.sample(rng))
    })
}

/// Random complex Gaussian vector.
pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    use rand::distributions::Distribution;
    let normal = StandardNormal;
    CVec::from_fn(n, |_, _| {
        Complex64::new(normal.sample(rng), normal.sample(rng))
    })
}

/// Haar-distributed random unitary: QR of a Ginibre matrix with the phases
/// of the R diagonal absorbed into Q.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = ginibre(rng, n, n);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            cr(1.0)
        };
        let col = u.column(j) * phase;
        u.set_column(j, &col);
    }
    u
}

/// Random Hermitian matrix `(G + G^*)/2` with Ginibre `G`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    hermitize(&ginibre(rng, n, n))
}

/// Random PSD matrix `G G^*` with Ginibre `G`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = ginibre(rng, n, n);
    &g * g.adjoint()
}

/// Marsaglia polar method; avoids pulling in a distributions crate for one
/// Gaussian.
struct StandardNormal;

impl rand::distributions::Distribution<f64> for StandardNormal {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = rng.gen_range(-1.0..1.0);
            let v: f64 = rng.gen_range(-1.0..1.0);
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }
}

/// 1-norm (max absolute column sum), the scaling norm for the exponential.
fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with the degree-13 Pade
/// approximant. Standard coefficients; squaring count from the 1-norm
/// against theta_13.
pub fn expm(m: &CMat) -> CMat {
    assert_eq!(m.nrows(), m.ncols(), "expm needs a square matrix");
    let n = m.nrows();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    const THETA_13: f64 = 5.371920351148152;
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let norm = one_norm(m);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = if s > 0 {
        m.map(|z| z / cr((2.0f64).powi(s)))
    } else {
        m.clone()
    };
    let id = CMat::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &a6 * (a6.scale(B[13]) + a4.scale(B[11]) + a2.scale(B[9]))
        + a6.scale(B[7])
        + a4.scale(B[5])
        + a2.scale(B[3])
        + id.scale(B[1]);
    let u = &a * u_inner;
    let v = &a6 * (a6.scale(B[12]) + a4.scale(B[10]) + a2.scale(B[8]))
        + a6.scale(B[6])
        + a4.scale(B[4])
        + a2.scale(B[2])
        + id.scale(B[0]);
    let num = &v + &u;
    let den = &v - &u;
    let mut r = den
        .lu()
        .solve(&num)
        .expect("Pade denominator is nonsingular for scaled input");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}
