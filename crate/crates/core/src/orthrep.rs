//! Orthonormal representations: the checker and the constructions for Hamming
//! graphs, `G_K` and list states.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::bits::{ceil_log2, BitString};
use crate::error::{domain, Error, Result};
use crate::graphs::Graph;
use crate::numerics::{binom, entropy, rat, rat_to_f64, Rational};

pub const ORTH_TOL: f64 = 1e-9;

/// `Σ conj(a_i) b_i`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Anything that assigns a vector to each vertex `0..vertex_count`.
pub trait VectorFamily {
    fn dimension(&self) -> usize;
    fn vertex_count(&self) -> usize;
    fn vector(&self, v: usize) -> Vec<Complex64>;

    fn materialize(&self) -> OrthRep {
        let vectors = (0..self.vertex_count()).map(|v| (v, self.vector(v))).collect();
        OrthRep { dimension: self.dimension(), vectors }
    }
}

/// Vertex → complex vector of a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthRep {
    pub dimension: usize,
    pub vectors: BTreeMap<usize, Vec<Complex64>>,
}

impl VectorFamily for OrthRep {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn vertex_count(&self) -> usize {
        self.vectors.keys().next_back().map_or(0, |&k| k + 1)
    }

    fn vector(&self, v: usize) -> Vec<Complex64> {
        self.vectors[&v].clone()
    }
}

#[derive(Debug, Serialize)]
struct VertexJson<'a> {
    vertex: usize,
    amplitudes: Vec<[f64; 2]>,
    #[serde(skip)]
    _p: std::marker::PhantomData<&'a ()>,
}

impl OrthRep {
    pub fn new(dimension: usize, vectors: BTreeMap<usize, Vec<Complex64>>) -> Result<Self> {
        if let Some((v, bad)) = vectors.iter().find(|(_, x)| x.len() != dimension) {
            return Err(Error::Dimension(format!("vertex {v} has length {} != {dimension}", bad.len())));
        }
        Ok(Self { dimension, vectors })
    }

    pub fn get(&self, v: usize) -> Option<&[Complex64]> {
        self.vectors.get(&v).map(|x| x.as_slice())
    }

    /// `{"dimension": d, "vectors": [{"vertex": v, "amplitudes": [[re, im], …]}, …]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let vs: Vec<_> = self
            .vectors
            .iter()
            .map(|(&vertex, x)| VertexJson {
                vertex,
                amplitudes: x.iter().map(|c| [c.re, c.im]).collect(),
                _p: std::marker::PhantomData,
            })
            .collect();
        serde_json::json!({ "dimension": self.dimension, "vectors": vs })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckReport {
    pub max_norm_defect: f64,
    pub max_edge_inner_product: f64,
    pub pass: bool,
}

impl CheckReport {
    fn new(norm: f64, edge: f64) -> Self {
        Self { max_norm_defect: norm, max_edge_inner_product: edge, pass: norm <= ORTH_TOL && edge <= ORTH_TOL }
    }
}

/// Unit norms on every vertex and orthogonality on every edge of `g`.
pub fn check(rep: &OrthRep, g: &Graph) -> Result<CheckReport> {
    for v in 0..g.vertex_count() {
        if !rep.vectors.contains_key(&v) {
            return domain(format!("representation misses vertex {v}"));
        }
    }
    let norm = (0..g.vertex_count()).map(|v| (norm_sqr(&rep.vectors[&v]).sqrt() - 1.0).abs()).fold(0.0, f64::max);
    let mut edge = 0.0f64;
    for (u, v) in g.edges() {
        edge = edge.max(inner(&rep.vectors[&u], &rep.vectors[&v]).norm());
    }
    Ok(CheckReport::new(norm, edge))
}

/// Check for families on `{0,1}^n` whose Gram entries depend only on `x ⊕ y`:
/// compares `φ(0)` against `φ(w)` for every `w` with `adjacent(w)`.
pub fn check_shift_invariant(
    fam: &impl VectorFamily,
    n: u64,
    adjacent: impl Fn(u64) -> bool,
) -> Result<CheckReport> {
    if fam.vertex_count() != 1 << n {
        return domain(format!("family has {} vertices, expected 2^{n}", fam.vertex_count()));
    }
    let v0 = fam.vector(0);
    let mut norm = 0.0f64;
    let mut edge = 0.0f64;
    for w in 0..1u64 << n {
        let vw = fam.vector(w as usize);
        norm = norm.max((norm_sqr(&vw).sqrt() - 1.0).abs());
        if adjacent(w) {
            edge = edge.max(inner(&v0, &vw).norm());
        }
    }
    Ok(CheckReport::new(norm, edge))
}

/// `e_0, …, e_{k−1}`: a representation of `K_k` in dimension `k`.
pub fn standard_basis_rep(k: usize) -> OrthRep {
    let vectors = (0..k)
        .map(|v| {
            let mut e = vec![Complex64::zero(); k];
            e[v] = Complex64::one();
            (v, e)
        })
        .collect();
    OrthRep { dimension: k, vectors }
}

/// Padded Fourier map: the first `2ℓ` bits choose a standard basis block and
/// the other `n − 2ℓ` bits are Fourier encoded inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaddedFamily {
    pub n: u64,
    pub ell: u64,
}

impl VectorFamily for PaddedFamily {
    fn dimension(&self) -> usize {
        (1usize << (2 * self.ell)) * (self.n - 2 * self.ell) as usize
    }

    fn vertex_count(&self) -> usize {
        1 << self.n
    }

    fn vector(&self, v: usize) -> Vec<Complex64> {
        let head = 2 * self.ell;
        let m = (self.n - head) as usize;
        let block = v & ((1 << head) - 1);
        let amp = 1.0 / (m as f64).sqrt();
        let mut out = vec![Complex64::zero(); self.dimension()];
        for i in 0..m {
            let bit = v >> (head as usize + i) & 1;
            out[block * m + i] = Complex64::new(if bit == 0 { amp } else { -amp }, 0.0);
        }
        out
    }
}

/// `x ↦ n^{-1/2} Σ_i (−1)^{x_i} e_i`, a representation of `H(n, n/2)`.
pub fn fourier_family(n: u64) -> Result<PaddedFamily> {
    padded_family(n, 0)
}

/// Representation of `H(n, n/2 − ℓ)` in dimension `2^{2ℓ}(n − 2ℓ)`.
pub fn padded_family(n: u64, ell: u64) -> Result<PaddedFamily> {
    if n == 0 || !n.is_multiple_of(2) {
        return domain(format!("padded representation needs positive even n, got {n}"));
    }
    if 2 * ell >= n {
        return domain(format!("padding needs 2ℓ < n, got n={n} ℓ={ell}"));
    }
    if n > 30 {
        return domain(format!("n = {n} too large for vertex enumeration"));
    }
    Ok(PaddedFamily { n, ell })
}

pub fn fourier_rep(n: u64) -> Result<OrthRep> {
    padded_rep(n, 0)
}

pub fn padded_rep(n: u64, ell: u64) -> Result<OrthRep> {
    let fam = padded_family(n, ell)?;
    crate::error::cap("explicit representation entries", fam.dimension() << n, 1 << 24)?;
    Ok(fam.materialize())
}

/// Multilinear polynomial `Σ_S α_S Π_{k∈S} z_k`, subsets stored as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    pub n: u64,
    pub coeffs: BTreeMap<u64, Rational>,
}

impl MultilinearPoly {
    pub fn zero(n: u64) -> Self {
        Self { n, coeffs: BTreeMap::new() }
    }

    pub fn constant(n: u64, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(0, c);
        p
    }

    /// `c + Σ_k z_k`.
    pub fn shifted_sum(n: u64, c: Rational) -> Self {
        let mut p = Self::constant(n, c);
        for k in 0..n {
            p.add_term(1 << k, Rational::one());
        }
        p
    }

    /// `Π_k z_k`.
    pub fn full_product(n: u64) -> Self {
        let mask = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        let mut p = Self::zero(n);
        p.add_term(mask, Rational::one());
        p
    }

    pub fn add_term(&mut self, mask: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(mask).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (&m, c) in &other.coeffs {
            p.add_term(m, c.clone());
        }
        p
    }

    /// Product with `z_k² = 1`, so monomials multiply by symmetric difference.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut p = Self::zero(self.n);
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                p.add_term(a ^ b, ca * cb);
            }
        }
        p
    }

    pub fn mon_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// `P(z)` where `z_k = −1` exactly for the bits set in `neg`.
    pub fn eval(&self, neg: u64) -> Rational {
        let mut pos = Rational::zero();
        let mut negs = Rational::zero();
        for (&m, c) in &self.coeffs {
            if (m & neg).count_ones().is_multiple_of(2) {
                pos += c;
            } else {
                negs += c;
            }
        }
        pos - negs
    }

    pub fn sum_coeffs(&self) -> Rational {
        self.coeffs.values().sum()
    }

    /// Integer evaluator for polynomials with small integer coefficients.
    pub fn int_evaluator(&self) -> Option<IntEvaluator> {
        let terms = self
            .coeffs
            .iter()
            .map(|(&m, c)| if c.is_integer() { c.to_integer().to_i64().map(|v| (m, v)) } else { None })
            .collect::<Option<Vec<_>>>()?;
        Some(IntEvaluator { terms })
    }
}

pub struct IntEvaluator {
    terms: Vec<(u64, i64)>,
}

impl IntEvaluator {
    pub fn eval(&self, neg: u64) -> i128 {
        self.terms
            .iter()
            .map(|&(m, c)| if (m & neg).count_ones().is_multiple_of(2) { c as i128 } else { -(c as i128) })
            .sum()
    }
}

/// `φ(x) = Σ_S √(α_S / P(1)) (−1)^{x·S} e_S` for a nonnegative polynomial.
#[derive(Debug, Clone)]
pub struct PolyFamily {
    pub n: u64,
    monomials: Vec<u64>,
    amps: Vec<f64>,
}

impl PolyFamily {
    pub fn new(p: &MultilinearPoly) -> Result<Self> {
        if !p.all_nonnegative() {
            let (m, c) = p.coeffs.iter().find(|(_, c)| c.is_negative()).unwrap();
            return Err(Error::Assertion(format!("negative coefficient {c} on monomial {m:#b}")));
        }
        let total = p.sum_coeffs();
        if !total.is_positive() {
            return Err(Error::Assertion("P(1, …, 1) must be positive".into()));
        }
        let monomials = p.coeffs.keys().copied().collect();
        let amps = p.coeffs.values().map(|c| rat_to_f64(&(c / &total)).sqrt()).collect();
        Ok(Self { n: p.n, monomials, amps })
    }
}

impl VectorFamily for PolyFamily {
    fn dimension(&self) -> usize {
        self.monomials.len()
    }

    fn vertex_count(&self) -> usize {
        1 << self.n
    }

    fn vector(&self, v: usize) -> Vec<Complex64> {
        self.monomials
            .iter()
            .zip(&self.amps)
            .map(|(&m, &a)| Complex64::new(if (m & v as u64).count_ones().is_multiple_of(2) { a } else { -a }, 0.0))
            .collect()
    }
}

/// The polynomial representation of `G_K(n)` with its size diagnostics.
#[derive(Debug, Clone)]
pub struct GkPolyRep {
    pub n: u64,
    pub poly: MultilinearPoly,
    pub family: PolyFamily,
    pub mon_count: usize,
    pub degree: u32,
    /// `2^{H(1/4) n + 1}`.
    pub entropy_bound: f64,
    /// `Σ_{k ≤ n/4 + 1} C(n, k)`: degrees reach `n/4 + 1` after reduction.
    pub slack_bound: BigInt,
    /// Twice `slack_bound`; `P_odd` pairs each monomial `S` with its complement.
    pub odd_slack_bound: BigInt,
    pub within_entropy_bound: bool,
    pub within_slack_bound: bool,
    pub within_odd_slack_bound: bool,
}

/// `P_even = Π_{k=0}^{n/4} (4k + Σ z)` and `P_odd = 1 + Π z`.
pub fn gk_polynomial(n: u64) -> Result<MultilinearPoly> {
    if n == 0 || !n.is_multiple_of(4) || n > 16 {
        return domain(format!("gk_poly_rep needs n divisible by 4 and n ≤ 16, got {n}"));
    }
    let mut p = MultilinearPoly::constant(n, Rational::one());
    for k in 0..=n / 4 {
        p = p.mul(&MultilinearPoly::shifted_sum(n, rat(4 * k as i64)));
    }
    let odd = MultilinearPoly::constant(n, Rational::one()).add(&MultilinearPoly::full_product(n));
    Ok(p.mul(&odd))
}

pub fn gk_poly_rep(n: u64) -> Result<GkPolyRep> {
    let poly = gk_polynomial(n)?;
    let family = PolyFamily::new(&poly)?;
    let mon_count = poly.mon_count();
    let entropy_bound = 2f64.powf(entropy(0.25)? * n as f64 + 1.0);
    let slack_bound: BigInt = (0..=n / 4 + 1).map(|k| binom(n, k as i64)).sum();
    let odd_slack_bound = 2 * &slack_bound;
    Ok(GkPolyRep {
        n,
        degree: poly.degree(),
        within_entropy_bound: (mon_count as f64) <= entropy_bound,
        within_slack_bound: BigInt::from(mon_count) <= slack_bound,
        within_odd_slack_bound: BigInt::from(mon_count) <= odd_slack_bound,
        poly,
        family,
        mon_count,
        entropy_bound,
        slack_bound,
        odd_slack_bound,
    })
}

/// `γ|0⟩|0⟩ + √((1−γ²)/n) Σ_i (−1)^{x_i} |1⟩|i⟩` with `γ² = 1 − n/(2d)`, in
/// dimension `2·2^{⌈log n⌉}` (control qubit most significant).
pub fn list_state(x: &BitString, n: usize, d: usize) -> Result<Vec<Complex64>> {
    let gamma_sq = list_gamma_sq(n, d)?;
    if x.len() != n {
        return Err(Error::Dimension(format!("x has {} bits, expected {n}", x.len())));
    }
    let block = 1usize << ceil_log2(n);
    let mut v = vec![Complex64::zero(); 2 * block];
    let g2 = rat_to_f64(&gamma_sq);
    v[0] = Complex64::new(g2.sqrt(), 0.0);
    let amp = ((1.0 - g2) / n as f64).sqrt();
    for i in 0..n {
        v[block + i] = Complex64::new(if x.get(i) { -amp } else { amp }, 0.0);
    }
    Ok(v)
}

/// `γ² = 1 − n/(2d)`, defined for `n/2 ≤ d ≤ n`.
pub fn list_gamma_sq(n: usize, d: usize) -> Result<Rational> {
    if n == 0 || 2 * d < n || d > n {
        return domain(format!("list state needs n/2 ≤ d ≤ n, got n={n} d={d}"));
    }
    Ok(Rational::one() - Rational::new(BigInt::from(n), BigInt::from(2 * d)))
}

/// `⟨φ_x, φ_y⟩` computed coordinate by coordinate on squared amplitudes, so
/// the value is exact.
pub fn list_state_inner_exact(x: &BitString, y: &BitString, n: usize, d: usize) -> Result<Rational> {
    let g2 = list_gamma_sq(n, d)?;
    let per = (Rational::one() - &g2) / rat(n as i64);
    let mut acc = g2;
    for i in 0..n {
        if x.get(i) == y.get(i) {
            acc += &per;
        } else {
            acc -= &per;
        }
    }
    Ok(acc)
}
