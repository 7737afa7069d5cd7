//! Binary Krawtchouk polynomials and the spectrum of the distance-`d` Hamming graph.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::numerics::{binom, isqrt, pow2, tridiag_max_eig, SymTridiag};

/// `K_d^n(x) = Σ_j (−1)^j C(x, j) C(n − x, d − j)`.
pub fn kraw(n: u64, d: u64, x: u64) -> Result<BigInt> {
    if d > n || x > n {
        return domain(format!("kraw needs 0 ≤ d, x ≤ n, got n={n} d={d} x={x}"));
    }
    Ok(kraw_unchecked(n, d, x))
}

fn kraw_unchecked(n: u64, d: u64, x: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=d.min(x) {
        let term = binom(x, j as i64) * binom(n - x, (d - j) as i64);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// The table `K_d^n(x)` for all `0 ≤ d, x ≤ n`, built by the three-term
/// recurrence `(d+1) K_{d+1} = (n − 2x) K_d − (n − d + 1) K_{d−1}`.
pub fn kraw_table(n: u64) -> Vec<Vec<BigInt>> {
    let m = n as usize + 1;
    let mut t = vec![vec![BigInt::zero(); m]; m];
    for x in 0..m {
        t[0][x] = BigInt::from(1);
        if n > 0 {
            t[1][x] = BigInt::from(n as i64 - 2 * x as i64);
        }
        for d in 1..n as usize {
            let v = BigInt::from(n as i64 - 2 * x as i64) * &t[d][x]
                - BigInt::from(n as i64 - d as i64 + 1) * &t[d - 1][x];
            t[d + 1][x] = v / (d as i64 + 1);
        }
    }
    t
}

/// `max |Σ_x C(n,x) K_d(x) K_{d'}(x) − δ_{dd'} C(n,d) 2^n|` over all `d, d'`.
pub fn orthogonality_defect(n: u64) -> Result<BigInt> {
    if n > 24 {
        return domain(format!("orthogonality_defect capped at n = 24, got {n}"));
    }
    let t = kraw_table(n);
    let weights: Vec<BigInt> = (0..=n).map(|x| binom(n, x as i64)).collect();
    let mut worst = BigInt::zero();
    for d in 0..=n as usize {
        for e in d..=n as usize {
            let mut s: BigInt = (0..=n as usize).map(|x| &weights[x] * &t[d][x] * &t[e][x]).sum();
            if d == e {
                s -= binom(n, d as i64) * pow2(n);
            }
            worst = worst.max(s.abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub x: u64,
    #[serde(serialize_with = "crate::numerics::serde_big::ser")]
    pub eigenvalue: BigInt,
    #[serde(serialize_with = "crate::numerics::serde_big::ser")]
    pub multiplicity: BigInt,
}

/// Distinct eigenvalues `K_d^n(x)` of `H(n, d)`, one entry per `x`, with
/// multiplicity `C(n, x)`. Entries with equal eigenvalue are not merged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HammingSpectrum {
    pub n: u64,
    pub d: u64,
    pub values: Vec<SpectrumEntry>,
    #[serde(serialize_with = "crate::numerics::serde_big::ser")]
    pub lambda_min: BigInt,
    #[serde(serialize_with = "crate::numerics::serde_big::ser")]
    pub lambda_max: BigInt,
}

impl HammingSpectrum {
    /// Eigenvalues repeated by multiplicity, ascending. Only for small `n`.
    pub fn expanded(&self) -> Vec<f64> {
        assert!(self.n <= 16);
        let mut v = Vec::new();
        for e in &self.values {
            let m: usize = (&e.multiplicity).try_into().unwrap();
            let lam = crate::numerics::big_to_f64(&e.eigenvalue);
            v.extend(std::iter::repeat_n(lam, m));
        }
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn spectrum(n: u64, d: u64) -> Result<HammingSpectrum> {
    if n == 0 || d == 0 || d > n {
        return domain(format!("spectrum needs 1 ≤ d ≤ n, got n={n} d={d}"));
    }
    let values: Vec<SpectrumEntry> = (0..=n)
        .map(|x| SpectrumEntry { x, eigenvalue: kraw_unchecked(n, d, x), multiplicity: binom(n, x as i64) })
        .collect();
    let lambda_min = values.iter().map(|e| e.eigenvalue.clone()).min().unwrap();
    let lambda_max = values.iter().map(|e| e.eigenvalue.clone()).max().unwrap();
    Ok(HammingSpectrum { n, d, values, lambda_min, lambda_max })
}

/// Smallest root of `K_d^n` as `n/2 − λ_max(T)` where `T` is the zero-diagonal
/// tridiagonal matrix with off-diagonal `√((i+1)(n−i))/2`, `i = 0..d−2`.
pub fn smallest_root(n: u64, d: u64) -> Result<f64> {
    if d == 0 || d > n {
        return domain(format!("smallest_root needs 1 ≤ d ≤ n, got n={n} d={d}"));
    }
    let off = (0..d.saturating_sub(1))
        .map(|i| (((i + 1) * (n - i)) as f64).sqrt() / 2.0)
        .collect();
    Ok(n as f64 / 2.0 - tridiag_max_eig(&SymTridiag::new(off)))
}

/// `[n/2 − √((n−d)d), n/2]`, which contains the smallest root for `d < n/2`.
pub fn root_interval(n: u64, d: u64) -> Result<(f64, f64)> {
    if d == 0 || 2 * d >= n {
        return domain(format!("root_interval needs 1 ≤ d < n/2, got n={n} d={d}"));
    }
    let h = n as f64 / 2.0;
    Ok((h - (((n - d) * d) as f64).sqrt(), h))
}

/// Smallest integer `x` with `K_d^n(x) ≤ 0`, so the smallest real root lies in
/// `(x − 1, x]`.
pub fn first_sign_change(n: u64, d: u64) -> Result<u64> {
    for x in 0..=n {
        if !kraw(n, d, x)?.is_positive() {
            return Ok(x);
        }
    }
    domain(format!("K_{d}^{n} has no sign change on 0..=n"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaMinBound {
    pub bound: f64,
    /// `⌈n/2 − √(d(n−d))⌉`, the lower binomial index.
    pub index: u64,
    #[serde(serialize_with = "crate::numerics::serde_big::ser")]
    pub lambda_min: BigInt,
    /// Exact test `λ_min² · C(n, index) ≤ 2^n C(n, d)`.
    pub holds: bool,
}

/// `√(2^n C(n,d) / C(n, ⌈n/2 − √(d(n−d))⌉))`, checked exactly against the
/// spectrum.
pub fn lambda_min_bound(n: u64, d: u64) -> Result<LambdaMinBound> {
    if !n.is_multiple_of(2) || !d.is_multiple_of(2) || d == 0 || 2 * d >= n {
        return domain(format!("lambda_min_bound needs even n, even 0 < d < n/2, got n={n} d={d}"));
    }
    // n/2 − m ≤ √s with m minimal means n/2 − m = ⌊√s⌋.
    let s = BigInt::from(d * (n - d));
    let r: u64 = isqrt(&s).try_into().unwrap();
    let index = n / 2 - r.min(n / 2);
    let num = pow2(n) * binom(n, d as i64);
    let den = binom(n, index as i64);
    let spec = spectrum(n, d)?;
    let lm = spec.lambda_min.clone();
    let holds = &lm * &lm * &den <= num;
    let bound = (crate::numerics::big_to_f64(&num) / crate::numerics::big_to_f64(&den)).sqrt();
    Ok(LambdaMinBound { bound, index, lambda_min: lm, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::hamming_graph;
    use crate::numerics::dense_sym_eigs;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Independent oracle: eigenvalue of the character `χ_u` is the sum of
    /// `(−1)^{u·w}` over all `w` of weight `d`.
    fn character_sum(n: u64, d: u64, x: u64) -> i64 {
        let u = (1u64 << x) - 1;
        (0u64..1 << n)
            .filter(|w| w.count_ones() as u64 == d)
            .map(|w| if (u & w).count_ones() % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    #[test]
    fn kraw_examples() {
        for n in 1..=10u64 {
            for d in 0..=n {
                assert_eq!(kraw(n, d, 0).unwrap(), binom(n, d as i64));
            }
        }
        assert_eq!(kraw(4, 1, 1).unwrap(), BigInt::from(2));
        assert_eq!(kraw(4, 2, 2).unwrap(), BigInt::from(-2));
        assert!(kraw(4, 5, 0).is_err());
        assert!(kraw(4, 1, 5).is_err());
    }

    #[test]
    fn kraw_matches_character_sums() {
        for n in 1..=10u64 {
            for d in 0..=n {
                for x in 0..=n {
                    assert_eq!(kraw(n, d, x).unwrap(), BigInt::from(character_sum(n, d, x)), "n={n} d={d} x={x}");
                }
            }
        }
    }

    #[test]
    fn recurrence_table_matches_definition() {
        for n in [1u64, 5, 12, 20] {
            let t = kraw_table(n);
            for d in 0..=n {
                for x in 0..=n {
                    assert_eq!(t[d as usize][x as usize], kraw(n, d, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn orthogonality_examples() {
        for n in [2, 8, 16] {
            assert!(orthogonality_defect(n).unwrap().is_zero());
        }
        assert!(orthogonality_defect(25).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(2, 1).unwrap();
        let ev: Vec<i64> = s.values.iter().map(|e| e.eigenvalue.clone().try_into().unwrap()).collect();
        let mult: Vec<i64> = s.values.iter().map(|e| e.multiplicity.clone().try_into().unwrap()).collect();
        assert_eq!(ev, vec![2, 0, -2]);
        assert_eq!(mult, vec![1, 2, 1]);
        let g = hamming_graph(2, 1).unwrap();
        let dense = dense_sym_eigs(&g.adjacency_matrix()).unwrap();
        for (a, b) in dense.iter().zip(s.expanded()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-9);
        }

        let s = spectrum(4, 2).unwrap();
        let ev: Vec<i64> = s.values.iter().map(|e| e.eigenvalue.clone().try_into().unwrap()).collect();
        assert_eq!(ev, vec![6, 0, -2, 0, 6]);
        assert_eq!(s.lambda_min, BigInt::from(-2));
        assert_eq!(s.lambda_max, BigInt::from(6));

        for n in 1..=9u64 {
            let s = spectrum(n, n).unwrap();
            for e in &s.values {
                assert_eq!(e.eigenvalue, BigInt::from(if e.x % 2 == 0 { 1 } else { -1 }));
            }
            assert_eq!(s.lambda_min, BigInt::from(-1));
        }
        assert!(spectrum(4, 0).is_err());
        assert!(spectrum(4, 5).is_err());
    }

    #[test]
    fn spectrum_trace_and_count() {
        for n in 1..=20u64 {
            for d in 1..=n {
                let s = spectrum(n, d).unwrap();
                let total: BigInt = s.values.iter().map(|e| e.multiplicity.clone()).sum();
                assert_eq!(total, pow2(n));
                let trace: BigInt = s.values.iter().map(|e| &e.eigenvalue * &e.multiplicity).sum();
                assert!(trace.is_zero());
                assert_eq!(s.lambda_max, binom(n, d as i64));
                if n % 2 == 0 && d % 2 == 0 && 2 * d < n {
                    assert!(s.lambda_min.is_negative());
                }
            }
        }
    }

    #[test]
    fn symmetric_about_half_for_even_parameters() {
        for n in (2..=20u64).step_by(2) {
            for d in (0..=n).step_by(2) {
                for x in 0..=n {
                    assert_eq!(kraw(n, d, x).unwrap(), kraw(n, d, n - x).unwrap());
                }
            }
        }
    }

    #[test]
    fn smallest_root_examples() {
        for n in 1..=20u64 {
            assert_abs_diff_eq!(smallest_root(n, 1).unwrap(), n as f64 / 2.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(smallest_root(4, 2).unwrap(), 1.0, epsilon = 1e-8);
        let r = smallest_root(8, 2).unwrap();
        let (lo, hi) = root_interval(8, 2).unwrap();
        assert_abs_diff_eq!(lo, 4.0 - 12f64.sqrt(), epsilon = 1e-15);
        assert!(lo <= r && r <= hi);
        assert!(root_interval(8, 4).is_err());
    }

    #[test]
    fn smallest_root_quadratic_closed_form() {
        // K_2^n(x) = ((n − 2x)² − n)/2 has smallest root (n − √n)/2.
        for n in 2..=40u64 {
            let want = (n as f64 - (n as f64).sqrt()) / 2.0;
            assert_abs_diff_eq!(smallest_root(n, 2).unwrap(), want, epsilon = 1e-9);
        }
    }

    #[test]
    fn lambda_min_bound_examples() {
        for (n, d) in [(8, 2), (12, 4), (16, 4)] {
            let b = lambda_min_bound(n, d).unwrap();
            assert!(b.holds, "n={n} d={d}");
            assert!(crate::numerics::big_to_f64(&b.lambda_min).abs() <= b.bound + 1e-9);
        }
        // (8,2): ⌈4 − √12⌉ = 1.
        assert_eq!(lambda_min_bound(8, 2).unwrap().index, 1);
        assert!(lambda_min_bound(8, 3).is_err());
        assert!(lambda_min_bound(9, 2).is_err());
    }

    proptest! {
        #[test]
        fn root_is_in_interval_and_brackets(half in 2u64..=16, dh in 1u64..8) {
            let n = 2 * half;
            let d = 2 * dh;
            prop_assume!(2 * d < n);
            let r = smallest_root(n, d).unwrap();
            let (lo, hi) = root_interval(n, d).unwrap();
            prop_assert!(lo - 1e-9 <= r && r <= hi + 1e-9);
            let x1 = first_sign_change(n, d).unwrap() as f64;
            prop_assert!(x1 - 1.0 - 1e-8 <= r && r <= x1 + 1e-8);
        }
    }
}
