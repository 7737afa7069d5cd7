//! Dense state-vector simulation over named registers of arbitrary dimension.
//!
//! The first register in the layout is the most significant digit of the
//! amplitude index.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{domain, Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const NORM_TOL: f64 = 1e-12;
pub const BRANCH_TOL: f64 = 1e-10;
/// Largest state the simulator will allocate (2^24 amplitudes).
pub const MAX_AMPLITUDES: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    layout: Vec<(String, usize)>,
}

impl StateVector {
    /// `|0…0⟩` on the given layout.
    pub fn new(layout: &[(&str, usize)]) -> Result<Self> {
        Self::basis(layout, &vec![0; layout.len()])
    }

    pub fn basis(layout: &[(&str, usize)], digits: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(layout)?;
        if digits.len() != layout.len() {
            return Err(Error::Dimension("one digit per register required".into()));
        }
        let idx = s.compose(digits)?;
        s.amps[idx] = Complex64::one();
        Ok(s)
    }

    pub fn from_amplitudes(layout: &[(&str, usize)], amps: Vec<Complex64>) -> Result<Self> {
        let mut s = Self::zeros(layout)?;
        if amps.len() != s.amps.len() {
            return Err(Error::Dimension(format!("{} amplitudes for a space of dimension {}", amps.len(), s.amps.len())));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return domain(format!("state has squared norm {norm}"));
        }
        s.amps = amps;
        Ok(s)
    }

    fn zeros(layout: &[(&str, usize)]) -> Result<Self> {
        let mut total = 1usize;
        for (name, d) in layout {
            if *d == 0 {
                return domain(format!("register {name} has dimension 0"));
            }
            total = total.checked_mul(*d).filter(|&t| t <= MAX_AMPLITUDES).ok_or(Error::SizeCap {
                what: "state amplitudes",
                value: usize::MAX,
                cap: MAX_AMPLITUDES,
            })?;
        }
        let layout = layout.iter().map(|(n, d)| (n.to_string(), *d)).collect();
        Ok(Self { amps: vec![Complex64::zero(); total], layout })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn layout(&self) -> &[(String, usize)] {
        &self.layout
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.layout, other.layout);
        crate::orthrep::inner(&self.amps, &other.amps)
    }

    pub fn reg(&self, name: &str) -> Result<usize> {
        self.layout
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::Dimension(format!("no register named {name}")))
    }

    pub fn dim(&self, name: &str) -> Result<usize> {
        Ok(self.layout[self.reg(name)?].1)
    }

    fn stride(&self, pos: usize) -> usize {
        self.layout[pos + 1..].iter().map(|(_, d)| d).product()
    }

    fn compose(&self, digits: &[usize]) -> Result<usize> {
        let mut idx = 0;
        for ((name, d), &x) in self.layout.iter().zip(digits) {
            if x >= *d {
                return Err(Error::Dimension(format!("digit {x} out of range for register {name} of dimension {d}")));
            }
            idx = idx * d + x;
        }
        Ok(idx)
    }

    fn decompose(&self, mut idx: usize, out: &mut [usize]) {
        for (pos, (_, d)) in self.layout.iter().enumerate().rev() {
            out[pos] = idx % d;
            idx /= d;
        }
    }

    /// Applies a `d × d` matrix to one register.
    pub fn apply_matrix(&mut self, name: &str, m: &CMatrix) -> Result<()> {
        let pos = self.reg(name)?;
        let d = self.layout[pos].1;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Dimension(format!("{}x{} matrix on register {name} of dimension {d}", m.nrows(), m.ncols())));
        }
        let stride = self.stride(pos);
        let block = d * stride;
        let mut buf = vec![Complex64::zero(); d];
        for outer in (0..self.amps.len()).step_by(block) {
            for inner in 0..stride {
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = self.amps[outer + j * stride + inner];
                }
                for i in 0..d {
                    let mut acc = Complex64::zero();
                    for (j, b) in buf.iter().enumerate() {
                        acc += m[(i, j)] * b;
                    }
                    self.amps[outer + i * stride + inner] = acc;
                }
            }
        }
        Ok(())
    }

    /// Multiplies each basis state by `f(digits)`.
    pub fn apply_diagonal(&mut self, f: impl Fn(&[usize]) -> Complex64) {
        let mut digits = vec![0; self.layout.len()];
        for idx in 0..self.amps.len() {
            self.decompose(idx, &mut digits);
            self.amps[idx] *= f(&digits);
        }
    }

    /// Maps basis state `digits` to `f(digits)`; `f` must be a bijection.
    pub fn apply_permutation(&mut self, f: impl Fn(&[usize]) -> Vec<usize>) -> Result<()> {
        let mut out = vec![Complex64::zero(); self.amps.len()];
        let mut hit = vec![false; self.amps.len()];
        let mut digits = vec![0; self.layout.len()];
        for idx in 0..self.amps.len() {
            self.decompose(idx, &mut digits);
            let j = self.compose(&f(&digits))?;
            if hit[j] {
                return domain("basis map is not a permutation");
            }
            hit[j] = true;
            out[j] = self.amps[idx];
        }
        self.amps = out;
        Ok(())
    }

    /// Applies `m` to `target` on the branch where `control` holds `value`.
    pub fn apply_controlled(&mut self, control: &str, value: usize, target: &str, m: &CMatrix) -> Result<()> {
        let c = self.reg(control)?;
        let mut branch = self.clone();
        branch.apply_matrix(target, m)?;
        let mut digits = vec![0; self.layout.len()];
        for idx in 0..self.amps.len() {
            self.decompose(idx, &mut digits);
            if digits[c] == value {
                self.amps[idx] = branch.amps[idx];
            }
        }
        Ok(())
    }

    /// Appends a register in `|0⟩` as the least significant digit.
    pub fn add_register(&mut self, name: &str, dim: usize) -> Result<()> {
        if self.reg(name).is_ok() {
            return domain(format!("register {name} already exists"));
        }
        if self.amps.len() * dim > MAX_AMPLITUDES {
            return Err(Error::SizeCap { what: "state amplitudes", value: self.amps.len() * dim, cap: MAX_AMPLITUDES });
        }
        let mut amps = vec![Complex64::zero(); self.amps.len() * dim];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i * dim] = *a;
        }
        self.amps = amps;
        self.layout.push((name.to_string(), dim));
        Ok(())
    }

    /// Removes a register that is (within tolerance) in `|0⟩`.
    pub fn remove_register(&mut self, name: &str) -> Result<()> {
        let pos = self.reg(name)?;
        let mut digits = vec![0; self.layout.len()];
        let mut leak = 0.0;
        let mut amps = Vec::with_capacity(self.amps.len() / self.layout[pos].1);
        for idx in 0..self.amps.len() {
            self.decompose(idx, &mut digits);
            if digits[pos] == 0 {
                amps.push(self.amps[idx]);
            } else {
                leak += self.amps[idx].norm_sqr();
            }
        }
        if leak > 1e-10 {
            return Err(Error::Assertion(format!("register {name} not in |0⟩ (weight {leak:.3e} elsewhere)")));
        }
        self.amps = amps;
        self.layout.remove(pos);
        Ok(())
    }

    /// Probability of each value of one register.
    pub fn marginal(&self, name: &str) -> Result<Vec<f64>> {
        let pos = self.reg(name)?;
        let mut probs = vec![0.0; self.layout[pos].1];
        let mut digits = vec![0; self.layout.len()];
        for idx in 0..self.amps.len() {
            self.decompose(idx, &mut digits);
            probs[digits[pos]] += self.amps[idx].norm_sqr();
        }
        Ok(probs)
    }

    /// Outcome probabilities of measuring the registers `regs` (jointly, in
    /// the given order) against the orthonormal set `basis`. The last entry is
    /// the probability of the complementary outcome.
    pub fn project_probs(&self, regs: &[&str], basis: &[Vec<Complex64>]) -> Result<Vec<f64>> {
        let pos: Vec<usize> = regs.iter().map(|r| self.reg(r)).collect::<Result<_>>()?;
        let sub_dim: usize = pos.iter().map(|&p| self.layout[p].1).product();
        if let Some(b) = basis.iter().find(|b| b.len() != sub_dim) {
            return Err(Error::Dimension(format!("basis vector of length {} for subsystem of dimension {sub_dim}", b.len())));
        }
        let rest_dim = self.amps.len() / sub_dim;
        // Reshape ψ into (subsystem, environment).
        let mut psi = vec![Complex64::zero(); self.amps.len()];
        let rest: Vec<usize> = (0..self.layout.len()).filter(|p| !pos.contains(p)).collect();
        let mut digits = vec![0; self.layout.len()];
        for idx in 0..self.amps.len() {
            self.decompose(idx, &mut digits);
            let r = pos.iter().fold(0, |acc, &p| acc * self.layout[p].1 + digits[p]);
            let e = rest.iter().fold(0, |acc, &p| acc * self.layout[p].1 + digits[p]);
            psi[r * rest_dim + e] = self.amps[idx];
        }
        let mut probs = Vec::with_capacity(basis.len() + 1);
        for b in basis {
            let mut p = 0.0;
            for e in 0..rest_dim {
                let amp: Complex64 = (0..sub_dim).map(|r| b[r].conj() * psi[r * rest_dim + e]).sum();
                p += amp.norm_sqr();
            }
            probs.push(p);
        }
        let total: f64 = probs.iter().sum();
        probs.push((self.norm_sqr() - total).max(0.0));
        Ok(probs)
    }
}

/// One outcome of a computational-basis measurement.
#[derive(Debug, Clone)]
pub struct Branch {
    pub outcome: usize,
    pub probability: f64,
    pub state: StateVector,
}

/// Every outcome of measuring `name` with probability above `1e-10`, each with
/// its renormalised post-measurement state.
pub fn measure_branches(state: &StateVector, name: &str) -> Result<Vec<Branch>> {
    let pos = state.reg(name)?;
    let probs = state.marginal(name)?;
    let mut out = Vec::new();
    let mut digits = vec![0; state.layout.len()];
    for (outcome, &p) in probs.iter().enumerate() {
        if p <= BRANCH_TOL {
            continue;
        }
        let mut s = state.clone();
        let scale = 1.0 / p.sqrt();
        for idx in 0..s.amps.len() {
            state.decompose(idx, &mut digits);
            s.amps[idx] = if digits[pos] == outcome { s.amps[idx] * scale } else { Complex64::zero() };
        }
        out.push(Branch { outcome, probability: p, state: s });
    }
    Ok(out)
}

fn check_len(z: &BitString, state: &StateVector, reg: &str) -> Result<()> {
    let d = state.dim(reg)?;
    if z.len() != d {
        return Err(Error::Dimension(format!("{}-bit string on register {reg} of dimension {d}", z.len())));
    }
    Ok(())
}

/// `U_z = Σ_i (−1)^{z_i} |i⟩⟨i|`.
pub fn apply_query(state: &mut StateVector, z: &BitString, reg: &str) -> Result<()> {
    apply_phase_query(state, z, PI, reg)
}

/// `V_z(φ)`: phase `e^{iφ}` on `|j⟩` iff `z_j = 1`.
pub fn apply_phase_query(state: &mut StateVector, z: &BitString, varphi: f64, reg: &str) -> Result<()> {
    check_len(z, state, reg)?;
    let pos = state.reg(reg)?;
    let phase = if varphi == PI { Complex64::new(-1.0, 0.0) } else { Complex64::from_polar(1.0, varphi) };
    state.apply_diagonal(|d| if z.get(d[pos]) { phase } else { Complex64::one() });
    Ok(())
}

/// `F_n|j⟩ = n^{-1/2} Σ_k ω^{jk} |k⟩` with `ω = e^{2πi/n}`.
pub fn dft_matrix(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |k, j| Complex64::from_polar(s, 2.0 * PI * ((j * k) % n) as f64 / n as f64))
}

pub fn apply_dft(state: &mut StateVector, reg: &str) -> Result<()> {
    let n = state.dim(reg)?;
    state.apply_matrix(reg, &dft_matrix(n))
}

pub fn apply_inverse_dft(state: &mut StateVector, reg: &str) -> Result<()> {
    let n = state.dim(reg)?;
    state.apply_matrix(reg, &dft_matrix(n).adjoint())
}

/// `G = 2|s⟩⟨s| − I`.
pub fn apply_diffusion(state: &mut StateVector, reg: &str) -> Result<()> {
    let n = state.dim(reg)?;
    let m = CMatrix::from_fn(n, n, |i, j| {
        let v = 2.0 / n as f64 - if i == j { 1.0 } else { 0.0 };
        Complex64::new(v, 0.0)
    });
    state.apply_matrix(reg, &m)
}

/// `G(φ) = F_n V_0(φ) F_n†`, where `V_0(φ)` puts phase `e^{iφ}` on `|0⟩`.
pub fn apply_param_diffusion(state: &mut StateVector, phi: f64, reg: &str) -> Result<()> {
    let pos = state.reg(reg)?;
    apply_inverse_dft(state, reg)?;
    let phase = Complex64::from_polar(1.0, phi);
    state.apply_diagonal(|d| if d[pos] == 0 { phase } else { Complex64::one() });
    apply_dft(state, reg)
}

/// `Q_x |j⟩|b⟩ = |j⟩|b ⊕ x_j⟩`.
pub fn apply_cond_query(state: &mut StateVector, x: &BitString, idx: &str, bit: &str) -> Result<()> {
    check_len(x, state, idx)?;
    let (pi, pb) = (state.reg(idx)?, state.reg(bit)?);
    if state.dim(bit)? != 2 {
        return Err(Error::Dimension(format!("register {bit} must be a qubit")));
    }
    state.apply_permutation(|d| {
        let mut e = d.to_vec();
        e[pb] ^= x.get(d[pi]) as usize;
        e
    })
}

/// `R_y(φ) |j⟩|b⟩ = e^{iφ (b ⊕ y_j)} |j⟩|b⟩`.
pub fn apply_cond_phase(state: &mut StateVector, y: &BitString, varphi: f64, idx: &str, bit: &str) -> Result<()> {
    check_len(y, state, idx)?;
    let (pi, pb) = (state.reg(idx)?, state.reg(bit)?);
    let phase = Complex64::from_polar(1.0, varphi);
    state.apply_diagonal(|d| if (d[pb] == 1) != y.get(d[pi]) { phase } else { Complex64::one() });
    Ok(())
}

/// Real Householder reflection sending `|0⟩` to the unit vector `t`.
pub fn householder_to(t: &[Complex64]) -> CMatrix {
    let n = t.len();
    let mut v: Vec<Complex64> = t.iter().map(|x| -x).collect();
    v[0] += Complex64::one();
    let vv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    if vv < 1e-30 {
        return CMatrix::identity(n, n);
    }
    CMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { Complex64::one() } else { Complex64::zero() };
        id - v[i] * v[j].conj() * (2.0 / vv)
    })
}

/// The list-protocol preparation `U`: on `ctrl = 1` maps `|0⟩` of the index
/// register to `n^{-1/2} Σ_{i<n} |i⟩`; identity on `ctrl = 0`.
pub fn apply_list_prepare(state: &mut StateVector, n: usize, ctrl: &str, idx: &str) -> Result<()> {
    let d = state.dim(idx)?;
    if n > d || n == 0 {
        return Err(Error::Dimension(format!("n = {n} does not fit index register of dimension {d}")));
    }
    let mut t = vec![Complex64::zero(); d];
    for v in t.iter_mut().take(n) {
        *v = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    }
    state.apply_controlled(ctrl, 1, idx, &householder_to(&t))
}

/// Phase `(−1)^{x_i}` on `|1⟩|i⟩` for `i < |x|`; zero padding beyond.
pub fn apply_list_query(state: &mut StateVector, x: &BitString, ctrl: &str, idx: &str) -> Result<()> {
    let (pc, pi) = (state.reg(ctrl)?, state.reg(idx)?);
    if x.len() > state.dim(idx)? {
        return Err(Error::Dimension("string longer than index register".into()));
    }
    state.apply_diagonal(|d| {
        if d[pc] == 1 && d[pi] < x.len() && x.get(d[pi]) {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::one()
        }
    });
    Ok(())
}

pub fn hadamard() -> CMatrix {
    let s = 1.0 / 2f64.sqrt();
    CMatrix::from_row_slice(2, 2, &[s, s, s, -s].map(|v| Complex64::new(v, 0.0)))
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|v| Complex64::new(v, 0.0)))
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0].map(|v| Complex64::new(v, 0.0)))
}

/// Angles for exact Grover search with `d` of `n` items marked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverParams {
    /// Number of queries.
    pub ell: usize,
    /// Final diffusion angle.
    pub phi: f64,
    /// Final query angle.
    pub varphi: f64,
}

/// `⌈π/(4 arcsin √(d/n)) − 1/2⌉`, snapping values within `1e-9` of an integer.
pub fn grover_iterations(n: usize, d: usize) -> usize {
    let theta = (d as f64 / n as f64).sqrt().asin();
    let x = PI / (4.0 * theta) - 0.5;
    let r = x.round();
    if (x - r).abs() < 1e-9 { r.max(0.0) as usize } else { x.ceil().max(0.0) as usize }
}

/// Solves for the final-step angles and validates them by simulation on the
/// canonical marked set `{0, …, d−1}`.
pub fn exact_grover_params(n: usize, d: usize) -> Result<GroverParams> {
    if d == 0 || d > n {
        return domain(format!("exact Grover needs 1 ≤ d ≤ n, got n={n} d={d}"));
    }
    let ell = grover_iterations(n, d);
    let params = if ell == 0 {
        GroverParams { ell, phi: 0.0, varphi: 0.0 }
    } else {
        let theta = (d as f64 / n as f64).sqrt().asin();
        let (s, c) = theta.sin_cos();
        let angle = (2 * ell - 1) as f64 * theta;
        let (a, b) = (angle.sin(), angle.cos());
        if b.abs() < 1e-15 {
            GroverParams { ell, phi: 0.0, varphi: 0.0 }
        } else {
            // |amplitude on unmarked after G(φ)V(ϕ)|² can vanish iff g(ϕ) = 0.
            let g = |vp: f64| {
                let e = Complex64::from_polar(1.0, vp);
                s * s * (c * a * e - s * b).norm_sqr() - c * c * (s * a * e + c * b).norm_sqr()
            };
            let (mut lo, mut hi) = (0.0, PI);
            let (glo, ghi) = (g(lo), g(hi));
            if glo.signum() == ghi.signum() && glo != 0.0 && ghi != 0.0 {
                return Err(Error::Assertion(format!(
                    "no final query angle for n={n} d={d}: residuals {glo:.3e}, {ghi:.3e}"
                )));
            }
            if glo.abs() < 1e-14 {
                hi = lo;
            } else if ghi.abs() < 1e-14 {
                lo = hi;
            }
            for _ in 0..200 {
                if lo == hi {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if (g(mid) > 0.0) == (glo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let varphi = 0.5 * (lo + hi);
            let x = s * a * Complex64::from_polar(1.0, varphi) + c * b;
            let cc = -b / (c * x);
            let phi = (Complex64::one() + cc).arg();
            GroverParams { ell, phi, varphi }
        }
    };
    let mut z = BitString::zeros(n);
    for i in 0..d {
        z = BitString::new(n, z.word() | 1 << i)?;
    }
    let state = run_exact_grover(&z, &params)?;
    let worst = (0..n).filter(|&i| !z.get(i)).map(|i| state.amplitudes()[i].norm()).fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(Error::Assertion(format!("angles leave amplitude {worst:.3e} on an unmarked index (n={n} d={d})")));
    }
    Ok(params)
}

/// `ℓ − 1` plain iterations `G U_z` from `|s⟩`, then `G(φ) V_z(ϕ)`.
pub fn run_exact_grover(z: &BitString, p: &GroverParams) -> Result<StateVector> {
    let n = z.len();
    let mut st = uniform_state("idx", n)?;
    if p.ell == 0 {
        return Ok(st);
    }
    for _ in 1..p.ell {
        apply_query(&mut st, z, "idx")?;
        apply_diffusion(&mut st, "idx")?;
    }
    apply_phase_query(&mut st, z, p.varphi, "idx")?;
    apply_param_diffusion(&mut st, p.phi, "idx")?;
    Ok(st)
}

/// `|s⟩` on a single register.
pub fn uniform_state(name: &str, n: usize) -> Result<StateVector> {
    let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    StateVector::from_amplitudes(&[(name, n)], vec![a; n])
}

/// Success probability: weight on indices with `z_i = 1`.
pub fn success_probability(state: &StateVector, reg: &str, z: &BitString) -> Result<f64> {
    let m = state.marginal(reg)?;
    Ok(m.iter().enumerate().filter(|(i, _)| z.get(*i)).map(|(_, p)| p).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(layout: &[(&str, usize)], rng: &mut impl Rng) -> StateVector {
        let total: usize = layout.iter().map(|(_, d)| d).product();
        let mut v: Vec<Complex64> = (0..total).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let n: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= n);
        StateVector::from_amplitudes(layout, v).unwrap()
    }

    fn dist(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn gate_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s0 = random_state(&[("idx", 8)], &mut rng);
        let mut s = s0.clone();
        apply_query(&mut s, &BitString::zeros(8), "idx").unwrap();
        assert!(dist(&s, &s0) < 1e-15);
        let mut u = uniform_state("idx", 6).unwrap();
        apply_diffusion(&mut u, "idx").unwrap();
        assert!(dist(&u, &uniform_state("idx", 6).unwrap()) < 1e-12);
        assert!(apply_query(&mut u, &BitString::zeros(5), "idx").is_err());
        assert!(apply_query(&mut u, &BitString::zeros(6), "nope").is_err());
    }

    #[test]
    fn conditional_ops_simulate_phase_query() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x = BitString::random(8, &mut rng);
            let y = BitString::random(8, &mut rng);
            let varphi = rng.gen_range(0.0..2.0 * PI);
            let psi = random_state(&[("idx", 8)], &mut rng);
            let mut a = psi.clone();
            a.add_register("b", 2).unwrap();
            apply_cond_query(&mut a, &x, "idx", "b").unwrap();
            apply_cond_phase(&mut a, &y, varphi, "idx", "b").unwrap();
            apply_cond_query(&mut a, &x, "idx", "b").unwrap();
            let mut b = psi.clone();
            apply_phase_query(&mut b, &x.xor(&y), varphi, "idx").unwrap();
            b.add_register("b", 2).unwrap();
            assert!(dist(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn param_diffusion_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 7;
        let psi = random_state(&[("idx", n)], &mut rng);
        let phi = 1.234;
        let mut a = psi.clone();
        apply_param_diffusion(&mut a, phi, "idx").unwrap();
        let s = uniform_state("idx", n).unwrap();
        let overlap = s.inner(&psi);
        let want: Vec<Complex64> = psi
            .amplitudes()
            .iter()
            .zip(s.amplitudes())
            .map(|(p, sv)| p + (Complex64::from_polar(1.0, phi) - 1.0) * overlap * sv)
            .collect();
        let want = StateVector::from_amplitudes(&[("idx", n)], want).unwrap();
        assert!(dist(&a, &want) < 1e-12);
        // G(π) = −G.
        let mut b = psi.clone();
        apply_param_diffusion(&mut b, PI, "idx").unwrap();
        let mut c = psi.clone();
        apply_diffusion(&mut c, "idx").unwrap();
        assert!(b.amplitudes().iter().zip(c.amplitudes()).all(|(x, y)| (x + y).norm() < 1e-12));
    }

    #[test]
    fn measurement_examples() {
        let basis = StateVector::basis(&[("a", 3), ("b", 4)], &[2, 1]).unwrap();
        let br = measure_branches(&basis, "b").unwrap();
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].outcome, 1);
        assert!((br[0].probability - 1.0).abs() < 1e-15);
        let br = measure_branches(&uniform_state("idx", 4).unwrap(), "idx").unwrap();
        assert_eq!(br.len(), 4);
        assert!(br.iter().all(|b| (b.probability - 0.25).abs() < 1e-12));
    }

    #[test]
    fn two_round_grover_lands_on_marked() {
        // |z| = n/4: one plain iteration lands exactly on the marked set.
        let z = BitString::new(8, 0b0100_0010).unwrap();
        let mut st = uniform_state("idx", 8).unwrap();
        apply_query(&mut st, &z, "idx").unwrap();
        apply_diffusion(&mut st, "idx").unwrap();
        let br = measure_branches(&st, "idx").unwrap();
        let outs: Vec<usize> = br.iter().map(|b| b.outcome).collect();
        assert_eq!(outs, vec![1, 6]);
        assert!(br.iter().all(|b| (b.probability - 0.5).abs() < 1e-12));
    }

    #[test]
    fn grover_iteration_examples() {
        assert_eq!(grover_iterations(4, 1), 1);
        for n in (4..=64).step_by(4) {
            assert_eq!(grover_iterations(n, n / 4), 1, "n={n}");
        }
        assert_eq!(grover_iterations(16, 2), 2);
        assert_eq!(grover_iterations(16, 16), 0);
        assert_eq!(exact_grover_params(4, 1).unwrap().ell, 1);
        assert!(exact_grover_params(4, 0).is_err());
    }

    #[test]
    fn quarter_fraction_uses_plain_angles() {
        let p = exact_grover_params(16, 4).unwrap();
        assert!((p.varphi - PI).abs() < 1e-9);
        assert!((p.phi.abs() - PI).abs() < 1e-9);
    }

    #[test]
    fn final_angle_matches_closed_form() {
        // Oracle: cos ϕ = −b cos2θ / (a sin2θ), b = cos((2ℓ−1)θ), a = sin((2ℓ−1)θ).
        for n in 2..=32usize {
            for d in 1..=n {
                let p = exact_grover_params(n, d).unwrap();
                if p.ell == 0 {
                    continue;
                }
                let th = (d as f64 / n as f64).sqrt().asin();
                let ang = (2 * p.ell - 1) as f64 * th;
                let (a, b) = (ang.sin(), ang.cos());
                if b.abs() < 1e-12 {
                    continue;
                }
                let want = -b * (2.0 * th).cos() / (a * (2.0 * th).sin());
                assert!((p.varphi.cos() - want).abs() < 1e-8, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn teleportation_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let psi = random_state(&[("q", 2)], &mut rng);
            let mut st = psi.clone();
            st.add_register("a", 2).unwrap();
            st.add_register("b", 2).unwrap();
            st.apply_matrix("a", &hadamard()).unwrap();
            st.apply_controlled("a", 1, "b", &pauli_x()).unwrap();
            st.apply_controlled("q", 1, "a", &pauli_x()).unwrap();
            st.apply_matrix("q", &hadamard()).unwrap();
            for bq in measure_branches(&st, "q").unwrap() {
                for ba in measure_branches(&bq.state, "a").unwrap() {
                    assert!((bq.probability * ba.probability - 0.25).abs() < 1e-12);
                    let mut s = ba.state.clone();
                    if ba.outcome == 1 {
                        s.apply_matrix("b", &pauli_x()).unwrap();
                    }
                    if bq.outcome == 1 {
                        s.apply_matrix("b", &pauli_z()).unwrap();
                    }
                    let p = s.project_probs(&["b"], &[psi.amplitudes().to_vec()]).unwrap();
                    assert!((p[0] - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn list_gates_produce_list_state() {
        let n = 6;
        let x = BitString::new(n, 0b101100).unwrap();
        let g2: f64 = 1.0 - n as f64 / 8.0;
        let ctrl = vec![Complex64::new(g2.sqrt(), 0.0), Complex64::new((1.0 - g2).sqrt(), 0.0)];
        let mut st = StateVector::from_amplitudes(&[("c", 2)], ctrl).unwrap();
        st.add_register("i", 8).unwrap();
        apply_list_prepare(&mut st, n, "c", "i").unwrap();
        apply_list_query(&mut st, &x, "c", "i").unwrap();
        let want = crate::orthrep::list_state(&x, n, 4).unwrap();
        assert!(st.amplitudes().iter().zip(&want).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gates_preserve_norm(seed in any::<u64>(), n in 2usize..12, phi in 0.0f64..6.3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut st = random_state(&[("idx", n), ("b", 2)], &mut rng);
            let z = BitString::random(n, &mut rng);
            apply_query(&mut st, &z, "idx").unwrap();
            prop_assert!((st.norm_sqr() - 1.0).abs() < NORM_TOL);
            apply_diffusion(&mut st, "idx").unwrap();
            prop_assert!((st.norm_sqr() - 1.0).abs() < NORM_TOL);
            apply_phase_query(&mut st, &z, phi, "idx").unwrap();
            apply_param_diffusion(&mut st, phi, "idx").unwrap();
            prop_assert!((st.norm_sqr() - 1.0).abs() < NORM_TOL);
            apply_cond_query(&mut st, &z, "idx", "b").unwrap();
            apply_cond_phase(&mut st, &z, phi, "idx", "b").unwrap();
            prop_assert!((st.norm_sqr() - 1.0).abs() < NORM_TOL);
        }

        #[test]
        fn dft_is_unitary(seed in any::<u64>(), n in 1usize..20) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let st = random_state(&[("idx", n)], &mut rng);
            let mut t = st.clone();
            apply_dft(&mut t, "idx").unwrap();
            apply_inverse_dft(&mut t, "idx").unwrap();
            prop_assert!(dist(&t, &st) < 1e-10);
        }

        #[test]
        fn queries_commute(seed in any::<u64>(), n in 2usize..16) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let st = random_state(&[("idx", n)], &mut rng);
            let x = BitString::random(n, &mut rng);
            let y = BitString::random(n, &mut rng);
            let mut a = st.clone();
            apply_query(&mut a, &x, "idx").unwrap();
            apply_query(&mut a, &y, "idx").unwrap();
            let mut b = st.clone();
            apply_query(&mut b, &y, "idx").unwrap();
            apply_query(&mut b, &x, "idx").unwrap();
            let mut c = st.clone();
            apply_query(&mut c, &x.xor(&y), "idx").unwrap();
            prop_assert!(dist(&a, &b) < 1e-14);
            prop_assert!(dist(&a, &c) < 1e-14);
        }
    }
}
