//! Lovász theta: closed forms on transitive graphs and checkable certificates.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::graphs::Graph;
use crate::krawtchouk::spectrum;
use crate::numerics::{binom, check_psd, entropy, isqrt, pow2, rat_to_f64, Rational};
use crate::orthrep::{check, inner, OrthRep};

pub const PSD_TOL: f64 = 1e-8;
pub const ENTRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    /// Feasible point of the maximisation program; its value is a lower bound.
    Primal,
    /// Feasible point of the minimisation program; its value is an upper bound.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaCertificate {
    pub kind: CertificateKind,
    pub n: usize,
    #[serde(serialize_with = "row_major")]
    pub matrix: DMatrix<f64>,
    pub value: f64,
}

fn row_major<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq((0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])))
}

/// `1 − C(n,d)/λ_min` as an exact rational.
pub fn theta_complement_hamming_exact(n: u64, d: u64) -> Result<Rational> {
    let s = spectrum(n, d)?;
    if s.lambda_min.is_zero() {
        return domain(format!("λ_min of H({n},{d}) is zero"));
    }
    Ok(Rational::one() - Rational::new(binom(n, d as i64), s.lambda_min))
}

pub fn theta_complement_hamming(n: u64, d: u64) -> Result<f64> {
    Ok(rat_to_f64(&theta_complement_hamming_exact(n, d)?))
}

/// `ϑ(Ḡ) = 1 − λ_1/λ_n` for an edge-transitive `G` with extreme eigenvalues
/// `λ_1 ≥ … ≥ λ_n`.
pub fn theta_transitive(lambda_1: f64, lambda_n: f64) -> Result<f64> {
    if lambda_n >= 0.0 {
        return domain(format!("smallest eigenvalue must be negative, got {lambda_n}"));
    }
    Ok(1.0 - lambda_1 / lambda_n)
}

/// Dual certificate for `ϑ(Ḡ)` from an orthonormal representation of `G` in
/// dimension `d`: `Y_ii = d − 1`, `Y_ij = d |⟨u_i, u_j⟩|² − 1`.
pub fn dual_cert_from_orthrep(rep: &OrthRep, g: &Graph) -> Result<ThetaCertificate> {
    let report = check(rep, g)?;
    if !report.pass {
        return Err(Error::Assertion(format!(
            "not an orthonormal representation: norm defect {:.3e}, edge inner product {:.3e}",
            report.max_norm_defect, report.max_edge_inner_product
        )));
    }
    let n = g.vertex_count();
    let d = rep.dimension as f64;
    let vecs: Vec<&[_]> = (0..n).map(|v| rep.get(v).unwrap()).collect();
    let mut y = DMatrix::zeros(n, n);
    for i in 0..n {
        y[(i, i)] = d - 1.0;
        for j in 0..i {
            let v = if g.has_edge(i, j) { -1.0 } else { d * inner(vecs[i], vecs[j]).norm_sqr() - 1.0 };
            y[(i, j)] = v;
            y[(j, i)] = v;
        }
    }
    let cert = ThetaCertificate { kind: CertificateKind::Dual, n, matrix: y, value: d };
    verify_dual(&cert, &g.complement())?;
    Ok(cert)
}

/// Checks a dual certificate for `ϑ(h)`: PSD, diagonal `value − 1`, and `−1`
/// on every non-edge of `h`. Returns the certified upper bound.
pub fn verify_dual(cert: &ThetaCertificate, h: &Graph) -> Result<f64> {
    let y = &cert.matrix;
    let n = h.vertex_count();
    if y.nrows() != n || y.ncols() != n {
        return Err(Error::Dimension(format!("certificate is {}x{}, graph has {n} vertices", y.nrows(), y.ncols())));
    }
    for i in 0..n {
        if (y[(i, i)] - (cert.value - 1.0)).abs() > ENTRY_TOL {
            return Err(Error::Assertion(format!("diagonal entry {i} is {} not {}", y[(i, i)], cert.value - 1.0)));
        }
        for j in 0..i {
            if (y[(i, j)] - y[(j, i)]).abs() > ENTRY_TOL {
                return Err(Error::Assertion(format!("certificate not symmetric at ({i}, {j})")));
            }
            if !h.has_edge(i, j) && (y[(i, j)] + 1.0).abs() > ENTRY_TOL {
                return Err(Error::Assertion(format!("entry ({i}, {j}) on a non-edge is {} not -1", y[(i, j)])));
            }
        }
    }
    check_psd(y, PSD_TOL)
        .map_err(|f| Error::Assertion(format!("dual matrix not PSD: leading minor {:?}, pivot {:.3e}", f.minor, f.pivot)))?;
    Ok(cert.value)
}

/// Checks `X ⪰ 0`, `tr X = 1` and `X_ij = 0` on edges of `g`, returning
/// `Σ_ij X_ij`, a lower bound on `ϑ(g)`.
pub fn verify_primal(x: &DMatrix<f64>, g: &Graph) -> Result<f64> {
    let n = g.vertex_count();
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::Dimension(format!("matrix is {}x{}, graph has {n} vertices", x.nrows(), x.ncols())));
    }
    for i in 0..n {
        for j in 0..i {
            if (x[(i, j)] - x[(j, i)]).abs() > ENTRY_TOL {
                return domain(format!("X not symmetric at ({i}, {j})"));
            }
        }
    }
    let tr = x.trace();
    if (tr - 1.0).abs() > ENTRY_TOL {
        return Err(Error::Assertion(format!("trace constraint violated: tr X = {tr}")));
    }
    for (i, j) in g.edges() {
        if x[(i, j)].abs() > ENTRY_TOL {
            return Err(Error::Assertion(format!("edge constraint violated at ({i}, {j}): {}", x[(i, j)])));
        }
    }
    check_psd(x, PSD_TOL)
        .map_err(|f| Error::Assertion(format!("PSD constraint violated: leading minor {:?}, pivot {:.3e}", f.minor, f.pivot)))?;
    Ok(x.sum())
}

/// `J/k` on the support of an independent set, zero elsewhere.
pub fn independent_set_certificate(g: &Graph, set: &[usize]) -> Result<ThetaCertificate> {
    let n = g.vertex_count();
    for (a, &u) in set.iter().enumerate() {
        for &v in &set[a + 1..] {
            if g.has_edge(u, v) {
                return domain(format!("{u} and {v} are adjacent"));
            }
        }
    }
    let k = set.len() as f64;
    let mut x = DMatrix::zeros(n, n);
    for &u in set {
        for &v in set {
            x[(u, v)] = 1.0 / k;
        }
    }
    let value = verify_primal(&x, g)?;
    Ok(ThetaCertificate { kind: CertificateKind::Primal, n, matrix: x, value })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XiBound {
    pub n: u64,
    pub d: u64,
    /// `⌈n/2 − √((n−d)d)⌉`.
    pub index: u64,
    /// `log₂(1 + √(C(n,d) C(n,index) / 2^n))`.
    pub log2_bound: f64,
    /// `(H(α) + H(1/2 − √((1−α)α)) − 1)/2` at `α = d/n`.
    pub rate: f64,
}

/// Growth rate in `n` of `log₂` of the `ξ(H(n, αn))` lower bound.
pub fn fluffy_rate(alpha: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&alpha) {
        return domain(format!("rate needs α in [0, 1/2], got {alpha}"));
    }
    Ok((entropy(alpha)? + entropy(0.5 - ((1.0 - alpha) * alpha).sqrt())? - 1.0) / 2.0)
}

pub fn xi_lower_bound(n: u64, d: u64) -> Result<XiBound> {
    if !n.is_multiple_of(2) || !d.is_multiple_of(2) || d == 0 || 2 * d >= n {
        return domain(format!("xi_lower_bound needs even n, even 0 < d < n/2, got n={n} d={d}"));
    }
    let r: u64 = isqrt(&BigInt::from((n - d) * d)).try_into().unwrap();
    let index = n / 2 - r.min(n / 2);
    let ratio = Rational::new(binom(n, d as i64) * binom(n, index as i64), pow2(n));
    let log2_bound = (1.0 + rat_to_f64(&ratio).sqrt()).log2();
    Ok(XiBound { n, d, index, log2_bound, rate: fluffy_rate(d as f64 / n as f64)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::big_to_f64;
    use crate::graphs::{complete_graph, cycle_graph, empty_graph, hamming_graph, independence_number, max_clique};
    use crate::orthrep::{fourier_rep, padded_rep, standard_basis_rep};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::collections::BTreeMap;

    #[test]
    fn closed_form_examples() {
        assert_abs_diff_eq!(theta_complement_hamming(2, 1).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(theta_complement_hamming(4, 2).unwrap(), 4.0, epsilon = 1e-12);
        for n in 1..=12 {
            assert_abs_diff_eq!(theta_complement_hamming(n, n).unwrap(), 2.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(theta_transitive(2.0, -2.0).unwrap(), 2.0);
        assert_abs_diff_eq!(theta_transitive(6.0, -2.0).unwrap(), 4.0);
        assert!(theta_transitive(6.0, 0.0).is_err());
        for n in (2..=12u64).step_by(2) {
            for d in 1..=n {
                let s = spectrum(n, d).unwrap();
                if s.lambda_min.is_zero() {
                    continue;
                }
                let t = theta_transitive(big_to_f64(&s.lambda_max), big_to_f64(&s.lambda_min)).unwrap();
                assert_abs_diff_eq!(t, theta_complement_hamming(n, d).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn complement_of_c4_is_two_edges() {
        // ϑ of a perfect graph equals its clique cover number; 2K_2 has ϑ = 2.
        let h = hamming_graph(2, 1).unwrap().complement();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(independence_number(&h).unwrap(), 2);
    }

    #[test]
    fn dual_certificate_examples() {
        for k in 1..=5 {
            let cert = dual_cert_from_orthrep(&standard_basis_rep(k), &complete_graph(k).unwrap()).unwrap();
            assert_eq!(cert.value, k as f64);
            assert_eq!(verify_dual(&cert, &empty_graph(k).unwrap()).unwrap(), k as f64);
        }
        let h = hamming_graph(4, 2).unwrap();
        let cert = dual_cert_from_orthrep(&fourier_rep(4).unwrap(), &h).unwrap();
        assert_eq!(cert.value, 4.0);
        assert_abs_diff_eq!(cert.value, theta_complement_hamming(4, 2).unwrap(), epsilon = 1e-12);

        let mut m = BTreeMap::new();
        m.insert(0, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        m.insert(1, vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        m.insert(2, vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)]);
        m.insert(3, vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]);
        let cert = dual_cert_from_orthrep(&OrthRep::new(2, m).unwrap(), &cycle_graph(4).unwrap()).unwrap();
        assert_eq!(cert.value, 2.0);
        assert!(dual_cert_from_orthrep(&standard_basis_rep(3), &complete_graph(3).unwrap().complement()).is_ok());
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["kind"], "dual");
        assert_eq!(json["matrix"].as_array().unwrap().len(), 16);
    }

    #[test]
    fn dual_rejects_bad_reps_and_matrices() {
        let mut m = BTreeMap::new();
        for v in 0..3 {
            m.insert(v, vec![Complex64::new(1.0, 0.0)]);
        }
        assert!(dual_cert_from_orthrep(&OrthRep::new(1, m).unwrap(), &complete_graph(3).unwrap()).is_err());
        let bad = ThetaCertificate { kind: CertificateKind::Dual, n: 3, matrix: DMatrix::from_element(3, 3, -1.0), value: 0.0 };
        assert!(verify_dual(&bad, &empty_graph(3).unwrap()).is_err());
    }

    #[test]
    fn primal_examples() {
        let c4 = cycle_graph(4).unwrap();
        let cert = independent_set_certificate(&c4, &[0, 2]).unwrap();
        assert_abs_diff_eq!(cert.value, 2.0, epsilon = 1e-12);
        let x = DMatrix::identity(5, 5) / 5.0;
        assert_abs_diff_eq!(verify_primal(&x, &complete_graph(5).unwrap()).unwrap(), 1.0, epsilon = 1e-12);
        // Two disjoint edges: uniform 1/2 blocks on one vertex per edge.
        let two_k2 = hamming_graph(2, 1).unwrap().complement();
        let cert = independent_set_certificate(&two_k2, &[0, 1]).unwrap();
        assert_abs_diff_eq!(cert.value, 2.0, epsilon = 1e-12);
        assert!(independent_set_certificate(&c4, &[0, 1]).is_err());
        let mut bad = DMatrix::identity(4, 4) / 4.0;
        bad[(0, 1)] = 0.1;
        bad[(1, 0)] = 0.1;
        let err = verify_primal(&bad, &c4).unwrap_err();
        assert!(err.to_string().contains("edge constraint"));
        let err = verify_primal(&DMatrix::identity(4, 4), &c4).unwrap_err();
        assert!(err.to_string().contains("trace"));
    }

    #[test]
    fn weak_duality_on_hamming_graphs() {
        for (n, ell) in [(4u64, 0u64), (6, 0), (6, 1), (8, 1)] {
            let d = n / 2 - ell;
            let g = hamming_graph(n, d).unwrap();
            let rep = padded_rep(n, ell).unwrap();
            let cert = dual_cert_from_orthrep(&rep, &g).unwrap();
            let clique = max_clique(&g);
            // A clique of G is independent in Ḡ.
            let primal = independent_set_certificate(&g.complement(), &clique).unwrap();
            assert!(primal.value <= cert.value + 1e-9);
            if d % 2 == 0 && n % 2 == 0 {
                assert!(theta_complement_hamming(n, d).unwrap() <= cert.value + 1e-8);
            }
        }
    }

    #[test]
    fn xi_examples() {
        let b = xi_lower_bound(8, 2).unwrap();
        assert!(b.log2_bound > 0.0);
        assert_eq!(b.index, 1);
        // C(8,2)·C(8,1)/256 = 224/256.
        assert_abs_diff_eq!(b.log2_bound, (1.0 + (224.0f64 / 256.0).sqrt()).log2(), epsilon = 1e-12);
        let r = fluffy_rate(0.25).unwrap();
        assert_abs_diff_eq!(r, (0.811_278_124_459_132_8 + entropy(0.5 - 0.1875f64.sqrt()).unwrap() - 1.0) / 2.0, epsilon = 1e-12);
        assert!((r - 0.0833).abs() < 0.01);
        for a in [0.1, 0.2, 0.3, 0.4] {
            assert!(fluffy_rate(a).unwrap() > 0.0);
        }
        assert!(xi_lower_bound(8, 3).is_err());
        assert!(xi_lower_bound(8, 4).is_err());
    }
}
