//! Exact rationals, binomials, binary entropy and small symmetric eigensolvers.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Arbitrary-precision rational, always normalised.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int_to_rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Lossy conversion used only for floating-point reporting.
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators and denominators overflow f64 individually.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap();
        let d = (r.denom() >> shift).to_f64().unwrap();
        n / d
    })
}

pub fn big_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binom(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return domain(format!("entropy argument {p} outside [0, 1]"));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// Symmetric tridiagonal matrix with zero diagonal.
///
/// The dimension is `offdiag.len() + 1`, so an empty off-diagonal is the 1×1
/// zero matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymTridiag {
    pub offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(offdiag: Vec<f64>) -> Self {
        Self { offdiag }
    }

    pub fn dim(&self) -> usize {
        self.offdiag.len() + 1
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let m = self.dim();
        let mut a = DMatrix::zeros(m, m);
        for (i, &b) in self.offdiag.iter().enumerate() {
            a[(i, i + 1)] = b;
            a[(i + 1, i)] = b;
        }
        a
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = -x;
        if q < 0.0 {
            count += 1;
        }
        for &b in &self.offdiag {
            let denom = if q == 0.0 { f64::EPSILON * (b.abs() + 1.0) } else { q };
            q = -x - b * b / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// Largest eigenvalue of `t` by Sturm-count bisection.
pub fn tridiag_max_eig(t: &SymTridiag) -> f64 {
    if t.offdiag.is_empty() {
        return 0.0;
    }
    let m = t.dim();
    // Gershgorin disc radius bounds the spectrum.
    let mut r = 0.0f64;
    for i in 0..m {
        let left = if i > 0 { t.offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < m { t.offdiag[i].abs() } else { 0.0 };
        r = r.max(left + right);
    }
    let (mut lo, mut hi) = (-r - 1.0, r + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if t.count_below(mid) == m {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * (1.0 + r) {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub const DENSE_EIG_CAP: usize = 4096;

/// All eigenvalues of a real symmetric matrix, ascending.
pub fn dense_sym_eigs(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    crate::error::cap("matrix dimension", m.nrows(), DENSE_EIG_CAP)?;
    let scale = m.amax().max(1.0);
    for i in 0..m.nrows() {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return domain(format!("matrix not symmetric at ({i}, {j})"));
            }
        }
    }
    let mut eigs: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

/// Where pivoted Cholesky found a matrix not positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdFailure {
    /// Elimination step at which the failure surfaced.
    pub step: usize,
    /// Rows of the leading principal minor (in pivot order) that is not PSD.
    pub minor: Vec<usize>,
    pub pivot: f64,
}

/// PSD test by symmetric-pivoted Cholesky: the largest remaining diagonal is
/// eliminated at each step, and elimination stops once every remaining
/// pivot is within `tol` of zero.
pub fn check_psd(m: &DMatrix<f64>, tol: f64) -> std::result::Result<(), PsdFailure> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (p, &dmax) = (k..n)
            .map(|i| (i, &a[(order[i], order[i])]))
            .max_by(|x, y| x.1.total_cmp(y.1))
            .unwrap();
        order.swap(k, p);
        if dmax <= tol {
            // Remaining Schur complement must be numerically zero.
            for i in k..n {
                let di = a[(order[i], order[i])];
                if di < -tol {
                    let mut minor = order[..k].to_vec();
                    minor.push(order[i]);
                    return Err(PsdFailure { step: k, minor, pivot: di });
                }
                for j in k..i {
                    let dj = a[(order[j], order[j])];
                    let off = a[(order[i], order[j])];
                    if off * off > (di.max(0.0) + tol) * (dj.max(0.0) + tol) {
                        let mut minor = order[..k].to_vec();
                        minor.extend([order[j], order[i]]);
                        return Err(PsdFailure { step: k, minor, pivot: -off.abs() });
                    }
                }
            }
            return Ok(());
        }
        let pk = order[k];
        let s = dmax.sqrt();
        for i in k + 1..n {
            let pi = order[i];
            a[(pi, pk)] /= s;
        }
        for i in k + 1..n {
            let pi = order[i];
            let li = a[(pi, pk)];
            for j in k + 1..=i {
                let pj = order[j];
                let v = a[(pi, pj)] - li * a[(pj, pk)];
                a[(pi, pj)] = v;
                a[(pj, pi)] = v;
            }
        }
    }
    Ok(())
}

/// Largest absolute difference between an exact rational and a float.
pub fn abs_diff(a: &Rational, b: f64) -> f64 {
    (rat_to_f64(a) - b).abs()
}

/// Exact `⌊√n⌋` for nonnegative `n`.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    n.sqrt()
}

/// Rounds to 12 significant digits, the precision used for reported floats.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

/// Serialisers writing exact integers and rationals as decimal strings
/// (`"-2"`, `"17/3"`).
pub mod serde_big {
    use super::Rational;
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn ser<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn ser_rat<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn ser_rat_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn ser_opt_rat_vec<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => ser_rat_vec(v, s),
            None => s.serialize_none(),
        }
    }
}
