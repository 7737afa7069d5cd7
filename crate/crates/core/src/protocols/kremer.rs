//! Compilation of small quantum protocols into one-round classical ones.
//!
//! Each party's workspace is a single vector space. Alice appends a fresh
//! register at her least significant end and Bob at his most significant end,
//! so with the joint space ordered `Alice ⊗ Bob` sending a register is a
//! reshape. The branch vectors `Ã_u(x)`, `B̃_u(y)` (amplitudes folded in)
//! satisfy `Σ_u Ã_u ⊗ B̃_u = |ψ(x, y)⟩`.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::classical::Speaker;
use super::quantum;
use crate::bits::{ceil_log2, BitString};
use crate::error::{domain, Error, Result};
use crate::graphs::{optimal_coloring, Graph};
use crate::orthrep::{fourier_family, inner, VectorFamily};
use crate::qsim::{householder_to, CMatrix};

pub const MAX_QUBITS: usize = 6;
pub const DEVIATION_BOUND: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QRound {
    pub speaker: Speaker,
    pub qubits: usize,
}

/// `(round, input) ↦` unitary on the speaker's workspace plus the fresh
/// register.
pub type UnitaryFn = Arc<dyn Fn(usize, usize) -> CMatrix + Send + Sync>;
/// `y ↦` Bob's final measurement as projectors on his workspace.
pub type MeasureFn = Arc<dyn Fn(usize) -> Vec<CMatrix> + Send + Sync>;

#[derive(Clone)]
pub struct QuantumProtocolSpec {
    pub name: String,
    pub alice_dim: usize,
    pub bob_dim: usize,
    pub rounds: Vec<QRound>,
    pub alice: UnitaryFn,
    pub bob: UnitaryFn,
    pub measurement: MeasureFn,
    /// `(x, y, answer)`; `answer` indexes Bob's measurement outcomes.
    pub promise: Vec<(usize, usize, usize)>,
}

impl QuantumProtocolSpec {
    pub fn total_qubits(&self) -> usize {
        self.rounds.iter().map(|r| r.qubits).sum()
    }

    fn validate(&self) -> Result<()> {
        if self.rounds.windows(2).any(|w| w[0].speaker == w[1].speaker) {
            return domain(format!("{}: rounds must alternate speakers", self.name));
        }
        let l = self.total_qubits();
        if l > MAX_QUBITS {
            return Err(Error::SizeCap { what: "total qubits", value: l, cap: MAX_QUBITS });
        }
        Ok(())
    }

    /// Workspace dimensions `(alice, bob)` before each round, then at the end.
    fn dims(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(self.alice_dim, self.bob_dim)];
        let (mut a, mut b) = (self.alice_dim, self.bob_dim);
        for r in &self.rounds {
            match r.speaker {
                Speaker::Alice => b <<= r.qubits,
                Speaker::Bob => a <<= r.qubits,
            }
            out.push((a, b));
        }
        out
    }

    fn unitary(&self, round: usize, input: usize) -> Result<CMatrix> {
        let r = self.rounds[round];
        let (a, b) = self.dims()[round];
        let (u, want) = match r.speaker {
            Speaker::Alice => ((self.alice)(round, input), a << r.qubits),
            Speaker::Bob => ((self.bob)(round, input), b << r.qubits),
        };
        if u.nrows() != want || u.ncols() != want {
            return Err(Error::Dimension(format!(
                "{}: round {round} unitary is {}x{}, expected {want}",
                self.name,
                u.nrows(),
                u.ncols()
            )));
        }
        let defect = (u.adjoint() * &u - CMatrix::identity(want, want)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(Error::Assertion(format!("{}: round {round} matrix is not unitary ({defect:.2e})", self.name)));
        }
        Ok(u)
    }

    fn projectors(&self, y: usize) -> Result<Vec<CMatrix>> {
        let b = self.dims().last().unwrap().1;
        let ms = (self.measurement)(y);
        let mut sum = CMatrix::zeros(b, b);
        for m in &ms {
            if m.nrows() != b || m.ncols() != b {
                return Err(Error::Dimension(format!("{}: projector is not {b}x{b}", self.name)));
            }
            sum += m;
        }
        let defect = (sum - CMatrix::identity(b, b)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(Error::Assertion(format!("{}: projectors do not sum to identity", self.name)));
        }
        Ok(ms)
    }
}

fn apply(u: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..u.nrows()).map(|i| (0..v.len()).map(|j| u[(i, j)] * v[j]).sum()).collect()
}

fn basis(dim: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::zero(); dim];
    v[0] = Complex64::new(1.0, 0.0);
    v
}

/// Final joint state by direct simulation.
pub fn joint_state(qp: &QuantumProtocolSpec, x: usize, y: usize) -> Result<Vec<Complex64>> {
    let dims = qp.dims();
    let mut psi = basis(qp.alice_dim * qp.bob_dim);
    for (i, r) in qp.rounds.iter().enumerate() {
        let (a, b) = dims[i];
        let f = 1usize << r.qubits;
        let mut next = vec![Complex64::zero(); a * f * b];
        match r.speaker {
            Speaker::Alice => {
                let u = qp.unitary(i, x)?;
                for ib in 0..b {
                    let col: Vec<Complex64> = (0..a * f).map(|k| if k % f == 0 { psi[(k / f) * b + ib] } else { Complex64::zero() }).collect();
                    for (k, v) in apply(&u, &col).into_iter().enumerate() {
                        next[k * b + ib] = v;
                    }
                }
            }
            Speaker::Bob => {
                let u = qp.unitary(i, y)?;
                for ia in 0..a {
                    let col: Vec<Complex64> = (0..f * b).map(|k| if k < b { psi[ia * b + k] } else { Complex64::zero() }).collect();
                    for (k, v) in apply(&u, &col).into_iter().enumerate() {
                        next[ia * f * b + k] = v;
                    }
                }
            }
        }
        psi = next;
    }
    Ok(psi)
}

/// Outcome probabilities `⟨ψ| I ⊗ M_j |ψ⟩` from the joint state.
pub fn joint_probabilities(qp: &QuantumProtocolSpec, x: usize, y: usize) -> Result<Vec<f64>> {
    let psi = joint_state(qp, x, y)?;
    let b = qp.dims().last().unwrap().1;
    let ms = qp.projectors(y)?;
    Ok(ms
        .iter()
        .map(|m| {
            psi.chunks(b)
                .map(|slice| {
                    let mv = apply(m, slice);
                    inner(slice, &mv).re
                })
                .sum()
        })
        .collect())
}

/// `{Ã_u(x)}` for all `u`, indexed by the concatenated basis strings.
pub fn alice_branches(qp: &QuantumProtocolSpec, x: usize) -> Result<Vec<Vec<Complex64>>> {
    let dims = qp.dims();
    let mut branches = vec![basis(qp.alice_dim)];
    for (i, r) in qp.rounds.iter().enumerate() {
        let a = dims[i].0;
        let f = 1usize << r.qubits;
        let mut next = Vec::with_capacity(branches.len() * f);
        match r.speaker {
            Speaker::Alice => {
                let u = qp.unitary(i, x)?;
                for v in &branches {
                    let col: Vec<Complex64> = (0..a * f).map(|k| if k % f == 0 { v[k / f] } else { Complex64::zero() }).collect();
                    let out = apply(&u, &col);
                    for w in 0..f {
                        next.push((0..a).map(|ia| out[ia * f + w]).collect());
                    }
                }
            }
            Speaker::Bob => {
                for v in &branches {
                    for w in 0..f {
                        let mut e = vec![Complex64::zero(); a * f];
                        for ia in 0..a {
                            e[ia * f + w] = v[ia];
                        }
                        next.push(e);
                    }
                }
            }
        }
        branches = next;
    }
    Ok(branches)
}

/// `{B̃_u(y)}` for all `u`.
pub fn bob_branches(qp: &QuantumProtocolSpec, y: usize) -> Result<Vec<Vec<Complex64>>> {
    let dims = qp.dims();
    let mut branches = vec![basis(qp.bob_dim)];
    for (i, r) in qp.rounds.iter().enumerate() {
        let b = dims[i].1;
        let f = 1usize << r.qubits;
        let mut next = Vec::with_capacity(branches.len() * f);
        match r.speaker {
            Speaker::Bob => {
                let u = qp.unitary(i, y)?;
                for v in &branches {
                    let col: Vec<Complex64> = (0..f * b).map(|k| if k < b { v[k] } else { Complex64::zero() }).collect();
                    let out = apply(&u, &col);
                    for w in 0..f {
                        next.push(out[w * b..(w + 1) * b].to_vec());
                    }
                }
            }
            Speaker::Alice => {
                for v in &branches {
                    for w in 0..f {
                        let mut e = vec![Complex64::zero(); f * b];
                        e[w * b..(w + 1) * b].copy_from_slice(v);
                        next.push(e);
                    }
                }
            }
        }
        branches = next;
    }
    Ok(branches)
}

/// Alice's Gram coefficients `a_{u,v}(x) = ⟨Ã_u, Ã_v⟩`, row-major.
pub fn alice_coefficients(qp: &QuantumProtocolSpec, x: usize) -> Result<Vec<Complex64>> {
    let br = alice_branches(qp, x)?;
    let m = br.len();
    let mut out = vec![Complex64::zero(); m * m];
    let live: Vec<usize> = (0..m).filter(|&u| br[u].iter().any(|z| z.norm_sqr() > 1e-28)).collect();
    for &u in &live {
        for &v in &live {
            out[u * m + v] = inner(&br[u], &br[v]);
        }
    }
    Ok(out)
}

/// Bob's coefficients `b^j_{u,v}(y) = ⟨B̃_u|M_j|B̃_v⟩`, one row-major matrix
/// per outcome.
pub fn bob_coefficients(qp: &QuantumProtocolSpec, y: usize) -> Result<Vec<Vec<Complex64>>> {
    let br = bob_branches(qp, y)?;
    let m = br.len();
    let live: Vec<usize> = (0..m).filter(|&u| br[u].iter().any(|z| z.norm_sqr() > 1e-28)).collect();
    qp.projectors(y)?
        .iter()
        .map(|mj| {
            let mut out = vec![Complex64::zero(); m * m];
            let images: Vec<Vec<Complex64>> = br.iter().map(|v| apply(mj, v)).collect();
            for &u in &live {
                for &v in &live {
                    out[u * m + v] = inner(&br[u], &images[v]);
                }
            }
            Ok(out)
        })
        .collect()
}

/// Rounds each real and imaginary part to the signed grid `k/(2^{b−1} − 1)`,
/// returning the grid integers.
pub fn quantize(a: &[Complex64], bits: usize) -> Result<Vec<(i64, i64)>> {
    if !(2..=40).contains(&bits) {
        return domain(format!("quantization needs 2 ≤ bits ≤ 40, got {bits}"));
    }
    let k = ((1i64 << (bits - 1)) - 1) as f64;
    let q = |t: f64| (t.clamp(-1.0, 1.0) * k).round() as i64;
    Ok(a.iter().map(|z| (q(z.re), q(z.im))).collect())
}

pub fn dequantize(m: &[(i64, i64)], bits: usize) -> Vec<Complex64> {
    let k = ((1i64 << (bits - 1)) - 1) as f64;
    m.iter().map(|&(r, i)| Complex64::new(r as f64 / k, i as f64 / k)).collect()
}

/// Bob's estimate `p̃_j = Σ_{u,v} ã_{u,v} b^j_{u,v}`.
pub fn estimate(a: &[Complex64], b: &[Vec<Complex64>]) -> Vec<Complex64> {
    b.iter().map(|bj| a.iter().zip(bj).map(|(x, y)| x * y).sum()).collect()
}

/// The unique `j` with `Re p̃_j > 1/2`.
pub fn decide(p: &[Complex64]) -> Option<usize> {
    let above: Vec<usize> = (0..p.len()).filter(|&j| p[j].re > 0.5).collect();
    (above.len() == 1).then(|| above[0])
}

#[derive(Debug, Clone, Serialize)]
pub struct PrecisionPoint {
    pub bits: usize,
    pub max_deviation: f64,
    pub within_bound: bool,
    pub decisions_correct: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KremerReport {
    pub protocol: String,
    pub total_qubits: usize,
    pub bits_per_component: usize,
    pub message_bits: usize,
    pub message_bits_bound: usize,
    pub inputs_checked: usize,
    /// Largest `|p_j^{Kremer} − p_j^{joint}|` before quantization.
    pub max_decomposition_error: f64,
    pub max_quantization_error: f64,
    pub max_deviation: f64,
    pub deviation_bound: f64,
    pub decisions_correct: bool,
    pub pass: bool,
}

/// Compiles `qp` at `bits` bits per component (default `2ℓ + 4`) and checks
/// every promise input against the joint-state simulation.
pub fn kremer_compile(qp: &QuantumProtocolSpec, bits: Option<usize>) -> Result<KremerReport> {
    qp.validate()?;
    let l = qp.total_qubits();
    let bits = bits.unwrap_or(2 * l + 4);
    let mut alice_cache = std::collections::BTreeMap::new();
    let mut bob_cache = std::collections::BTreeMap::new();
    let mut rep = KremerReport {
        protocol: qp.name.clone(),
        total_qubits: l,
        bits_per_component: bits,
        message_bits: (bits * 2) << (2 * l),
        message_bits_bound: ((2 * l + 4) * 2) << (2 * l),
        inputs_checked: 0,
        max_decomposition_error: 0.0,
        max_quantization_error: 0.0,
        max_deviation: 0.0,
        deviation_bound: DEVIATION_BOUND,
        decisions_correct: true,
        pass: false,
    };
    for &(x, y, answer) in &qp.promise {
        let joint = joint_probabilities(qp, x, y)?;
        if joint.get(answer).is_none_or(|p| *p < 1.0 - 1e-9) {
            return Err(Error::Assertion(format!(
                "{}: protocol is not exact on ({x}, {y}); outcome probabilities {joint:?}",
                qp.name
            )));
        }
        if let std::collections::btree_map::Entry::Vacant(e) = alice_cache.entry(x) {
            let a = alice_coefficients(qp, x)?;
            let q = dequantize(&quantize(&a, bits)?, bits);
            e.insert((a, q));
        }
        if let std::collections::btree_map::Entry::Vacant(e) = bob_cache.entry(y) {
            e.insert(bob_coefficients(qp, y)?);
        }
        let (a, aq) = &alice_cache[&x];
        let b = &bob_cache[&y];
        for (z, w) in a.iter().zip(aq) {
            rep.max_quantization_error = rep.max_quantization_error.max((z - w).norm());
        }
        let exact = estimate(a, b);
        let approx = estimate(aq, b);
        for j in 0..joint.len() {
            rep.max_decomposition_error = rep.max_decomposition_error.max((exact[j] - joint[j]).norm());
            rep.max_deviation = rep.max_deviation.max((approx[j] - exact[j]).norm());
        }
        if decide(&approx) != Some(answer) {
            rep.decisions_correct = false;
        }
        rep.inputs_checked += 1;
    }
    rep.pass = rep.decisions_correct
        && rep.max_deviation <= DEVIATION_BOUND
        && rep.max_decomposition_error <= 1e-9
        && rep.message_bits <= rep.message_bits_bound;
    Ok(rep)
}

/// Deviation and decision quality for each precision in `bits`.
pub fn precision_sweep(qp: &QuantumProtocolSpec, bits: impl IntoIterator<Item = usize>) -> Result<Vec<PrecisionPoint>> {
    bits.into_iter()
        .map(|b| {
            let r = kremer_compile(qp, Some(b))?;
            Ok(PrecisionPoint {
                bits: b,
                max_deviation: r.max_deviation,
                within_bound: r.max_deviation <= DEVIATION_BOUND,
                decisions_correct: r.decisions_correct,
            })
        })
        .collect()
}

/// Answer labels used by the equality fixtures.
pub const NOT_EQUAL: usize = 0;
pub const EQUAL: usize = 1;

fn projector_onto(v: &[Complex64]) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

fn eq_pair(m: CMatrix) -> Vec<CMatrix> {
    let n = m.nrows();
    vec![CMatrix::identity(n, n) - &m, m]
}

fn eq_promise(inputs: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for x in 0..inputs {
        for y in 0..inputs {
            if x == y {
                out.push((x, y, EQUAL));
            } else if adjacent(x, y) {
                out.push((x, y, NOT_EQUAL));
            }
        }
    }
    out
}

/// One round: Alice sends the basis state of her colour.
pub fn coloring_fixture(g: &Graph) -> Result<QuantumProtocolSpec> {
    let colors = Arc::new(optimal_coloring(g)?);
    let k = colors.iter().max().map_or(1, |m| m + 1);
    let q = ceil_log2(k).max(1);
    let dim = 1usize << q;
    let ca = colors.clone();
    let cb = colors.clone();
    let edges = g.clone();
    Ok(QuantumProtocolSpec {
        name: "coloring".into(),
        alice_dim: 1,
        bob_dim: 1,
        rounds: vec![QRound { speaker: Speaker::Alice, qubits: q }],
        alice: Arc::new(move |_, x| {
            let c = ca[x];
            CMatrix::from_fn(dim, dim, |i, j| if i == (j + c) % dim { Complex64::new(1.0, 0.0) } else { Complex64::zero() })
        }),
        bob: Arc::new(|_, _| CMatrix::identity(1, 1)),
        measurement: Arc::new(move |y| {
            let mut e = vec![Complex64::zero(); dim];
            e[cb[y]] = Complex64::new(1.0, 0.0);
            eq_pair(projector_onto(&e))
        }),
        promise: eq_promise(g.vertex_count(), move |x, y| edges.has_edge(x, y)),
    })
}

/// One round: Alice sends the Fourier vector of her input, correct on
/// `H(n, n/2)`.
pub fn fourier_fixture(n: u64) -> Result<QuantumProtocolSpec> {
    let fam = fourier_family(n)?;
    let dim = fam.dimension();
    if !dim.is_power_of_two() {
        return domain(format!("fourier fixture needs n a power of two, got {n}"));
    }
    let q = ceil_log2(dim);
    Ok(QuantumProtocolSpec {
        name: format!("fourier-H({n},{})", n / 2),
        alice_dim: 1,
        bob_dim: 1,
        rounds: vec![QRound { speaker: Speaker::Alice, qubits: q }],
        alice: Arc::new(move |_, x| householder_to(&fam.vector(x))),
        bob: Arc::new(|_, _| CMatrix::identity(1, 1)),
        measurement: Arc::new(move |y| eq_pair(projector_onto(&fam.vector(y)))),
        promise: eq_promise(1 << n, move |x, y| 2 * (x ^ y).count_ones() as u64 == n),
    })
}

/// The two-round equality protocol at `n = 4` in workspace form: Bob prepares
/// `U_y|s⟩`, Alice applies `G U_x` and copies `(i, x_i)` into a fresh 3-qubit
/// register instead of measuring.
pub fn eq_two_round_fixture() -> QuantumProtocolSpec {
    let n = 4usize;
    let bit = |v: usize, i: usize| v >> i & 1;
    QuantumProtocolSpec {
        name: "eq2-n4".into(),
        alice_dim: 1,
        bob_dim: 1,
        rounds: vec![QRound { speaker: Speaker::Bob, qubits: 2 }, QRound { speaker: Speaker::Alice, qubits: 3 }],
        bob: Arc::new(move |_, y| {
            let s = 0.5;
            let t: Vec<Complex64> = (0..n).map(|i| Complex64::new(if bit(y, i) == 1 { -s } else { s }, 0.0)).collect();
            householder_to(&t)
        }),
        alice: Arc::new(move |_, x| {
            // G U_x on the received index register, then |i⟩|k⟩ ↦ |i⟩|k ⊕ (2i + x_i)⟩.
            let g = CMatrix::from_fn(n, n, |i, j| {
                let gij = 2.0 / n as f64 - if i == j { 1.0 } else { 0.0 };
                let sign = if bit(x, j) == 1 { -1.0 } else { 1.0 };
                Complex64::new(gij * sign, 0.0)
            });
            let f = 8;
            CMatrix::from_fn(n * f, n * f, |r, c| {
                let (i, k) = (r / f, r % f);
                let (j, k0) = (c / f, c % f);
                if k == k0 ^ (2 * i + bit(x, i)) {
                    g[(i, j)]
                } else {
                    Complex64::zero()
                }
            })
        }),
        measurement: Arc::new(move |y| {
            let mut m = CMatrix::zeros(8, 8);
            for i in 0..n {
                let k = 2 * i + bit(y, i);
                m[(k, k)] = Complex64::new(1.0, 0.0);
            }
            eq_pair(m)
        }),
        promise: eq_promise(16, |x, y| (x ^ y).count_ones() == 1),
    }
}

/// Cross-check: the workspace fixture agrees with the branch-enumerating
/// simulator on the probability of answering "equal".
pub fn eq_fixture_matches_simulator(x: usize, y: usize) -> Result<bool> {
    let qp = eq_two_round_fixture();
    let p = joint_probabilities(&qp, x, y)?;
    let run = quantum::eq_two_round(&BitString::new(4, x as u64)?, &BitString::new(4, y as u64)?)?;
    let eq: f64 = run.branches.iter().filter(|b| b.outcome == super::Outcome::Equal).map(|b| b.probability).sum();
    Ok((eq - p[EQUAL]).abs() < 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::cycle_graph;

    #[test]
    fn decomposition_reconstructs_joint_state() {
        let qp = eq_two_round_fixture();
        for &(x, y, _) in qp.promise.iter().take(20) {
            let psi = joint_state(&qp, x, y).unwrap();
            let a = alice_branches(&qp, x).unwrap();
            let b = bob_branches(&qp, y).unwrap();
            let bd = b[0].len();
            let mut sum = vec![Complex64::zero(); psi.len()];
            for (au, bu) in a.iter().zip(&b) {
                for (i, av) in au.iter().enumerate() {
                    for (j, bv) in bu.iter().enumerate() {
                        sum[i * bd + j] += av * bv;
                    }
                }
            }
            let err = sum.iter().zip(&psi).map(|(s, p)| (s - p).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn basis_fixture_is_exact() {
        let qp = coloring_fixture(&cycle_graph(4).unwrap()).unwrap();
        let r = kremer_compile(&qp, None).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(r.total_qubits, 1);
    }

    #[test]
    fn eq2_compiles_within_bound() {
        let qp = eq_two_round_fixture();
        assert_eq!(qp.total_qubits(), 5);
        let r = kremer_compile(&qp, None).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.bits_per_component, 14);
        assert_eq!(r.message_bits, 14 * 2 * 1024);
        assert!(r.max_quantization_error <= 2f64.powi(-13));
        for x in 0..16 {
            for y in 0..16 {
                if (x ^ y as usize).count_ones() <= 1 {
                    assert!(eq_fixture_matches_simulator(x, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn fourier_fixture_compiles() {
        let r = kremer_compile(&fourier_fixture(4).unwrap(), None).unwrap();
        assert!(r.pass);
        assert_eq!(r.inputs_checked, 16 + 16 * 6);
    }

    #[test]
    fn coarse_precision_is_flagged() {
        let qp = eq_two_round_fixture();
        let sweep = precision_sweep(&qp, 2..=14).unwrap();
        assert!(sweep.last().unwrap().within_bound);
        assert!(sweep.iter().any(|p| !p.within_bound));
    }

    #[test]
    fn quantization_error_bound() {
        let a: Vec<Complex64> = (0..200).map(|i| Complex64::from_polar(1.0, i as f64 * 0.1) * (i as f64 / 200.0)).collect();
        for bits in 3..20 {
            let q = dequantize(&quantize(&a, bits).unwrap(), bits);
            let err = a.iter().zip(&q).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err <= 2f64.sqrt() / ((1u64 << bits) as f64 - 2.0) + 1e-15);
            assert!(err <= 2f64.powi(1 - bits as i32));
        }
    }

    #[test]
    fn rejects_non_alternating_rounds() {
        let mut qp = eq_two_round_fixture();
        qp.rounds[1].speaker = Speaker::Bob;
        assert!(kremer_compile(&qp, None).is_err());
    }
}
