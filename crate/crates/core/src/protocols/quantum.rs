//! Exact quantum and non-signaling protocols for promise equality and the
//! list problem.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{element, Outcome, ProtocolRun};
use crate::bits::{ceil_log2, BitString};
use crate::error::{domain, Error, Result};
use crate::graphs::{hamming_graph, max_clique_containing};
use crate::numerics::{rat_to_f64, Rational};
use crate::orthrep::{inner, list_gamma_sq, list_state};
use crate::qsim::{
    apply_cond_phase, apply_cond_query, apply_diffusion, apply_dft, apply_list_prepare, apply_list_query,
    apply_param_diffusion, apply_query, exact_grover_params, hadamard, measure_branches, pauli_x, pauli_z,
    uniform_state, StateVector, BRANCH_TOL,
};

fn same_len(x: &BitString, y: &BitString) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("inputs of length {} and {}", x.len(), y.len())));
    }
    Ok(x.len())
}

fn eq_outcome(x: &BitString, y: &BitString) -> Outcome {
    if x == y {
        Outcome::Equal
    } else {
        Outcome::NotEqual
    }
}

/// Alice measures the index register and reports `(i★, x_{i★})`; Bob compares
/// with `y_{i★}`.
fn finish_with_index(run: &mut ProtocolRun, st: &StateVector, x: &BitString, y: &BitString) -> Result<()> {
    for b in measure_branches(st, "idx")? {
        let i = b.outcome;
        let out = if x.get(i) == y.get(i) { Outcome::Equal } else { Outcome::NotEqual };
        run.record(format!("i={i}"), b.probability, out);
    }
    run.qubits_sent += ceil_log2(x.len()) + 1;
    run.rounds += 1;
    Ok(())
}

/// Two-round protocol for equality promised at distance 0 or `n/4`: Bob sends
/// `U_y|s⟩`, Alice applies `G U_x`, measures and reports one index.
pub fn eq_two_round(x: &BitString, y: &BitString) -> Result<ProtocolRun> {
    let n = same_len(x, y)?;
    if n == 0 || n % 4 != 0 {
        return domain(format!("eq_two_round needs n divisible by 4, got {n}"));
    }
    let dist = x.distance(y);
    if dist != 0 && dist != n / 4 {
        return Err(Error::Promise(format!("distance {dist} is neither 0 nor n/4 = {}", n / 4)));
    }
    let mut run = ProtocolRun::new("eq2", n, Some(n / 4), vec![x.to_hex(), y.to_hex()], eq_outcome(x, y));
    let mut st = uniform_state("idx", n)?;
    apply_query(&mut st, y, "idx")?;
    run.qubits_sent += ceil_log2(n);
    run.rounds += 1;
    apply_query(&mut st, x, "idx")?;
    apply_diffusion(&mut st, "idx")?;
    finish_with_index(&mut run, &st, x, y)?;
    Ok(run.finish())
}

/// Pads both inputs with `4d − n` zeros and runs [`eq_two_round`]; needs
/// `n/4 ≤ d < n/2` with `n` and `d` even.
pub fn eq_padded(x: &BitString, y: &BitString, d: usize) -> Result<ProtocolRun> {
    let n = same_len(x, y)?;
    if n % 2 != 0 || !d.is_multiple_of(2) || d == 0 {
        return domain(format!("eq_padded needs n and d even, got n={n} d={d}"));
    }
    if 4 * d < n || 2 * d >= n {
        return domain(format!("eq_padded needs n/4 ≤ d < n/2, got n={n} d={d}"));
    }
    let dist = x.distance(y);
    if dist != 0 && dist != d {
        return Err(Error::Promise(format!("distance {dist} is neither 0 nor {d}")));
    }
    let k = 4 * d - n;
    let mut run = eq_two_round(&x.pad_zeros(k)?, &y.pad_zeros(k)?)?;
    run.protocol = "eq-pad".into();
    run.n = n;
    run.d = Some(d);
    run.inputs = vec![x.to_hex(), y.to_hex()];
    Ok(run)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Party {
    Alice,
    Bob,
}

/// Multi-round exact Grover protocol for distance `d = αn`, `0 < α < 1/4`.
///
/// The `ℓ − 1` plain iterations take one message each with speakers
/// alternating so that Alice holds the state afterwards; `V_z(ϕ)` is then
/// simulated as `Q_x R_y(ϕ) Q_x` (two messages of `⌈log n⌉ + 1` qubits) and
/// Alice finishes with `G(φ)` and the index report.
pub fn eq_multiround(x: &BitString, y: &BitString, d: usize) -> Result<ProtocolRun> {
    let n = same_len(x, y)?;
    if n % 2 != 0 || !d.is_multiple_of(2) || d == 0 || 4 * d >= n {
        return domain(format!("eq_multiround needs n, d even and 0 < d < n/4, got n={n} d={d}"));
    }
    let dist = x.distance(y);
    if dist != 0 && dist != d {
        return Err(Error::Promise(format!("distance {dist} is neither 0 nor {d}")));
    }
    let p = exact_grover_params(n, d)?;
    let lg = ceil_log2(n);
    let mut run = ProtocolRun::new("eq-multi", n, Some(d), vec![x.to_hex(), y.to_hex()], eq_outcome(x, y));
    let input = |who: Party| if who == Party::Alice { x } else { y };

    let mut st = uniform_state("idx", n)?;
    let iterations = p.ell - 1;
    let mut holder = if iterations % 2 == 0 { Party::Alice } else { Party::Bob };
    if iterations > 0 {
        apply_query(&mut st, input(holder), "idx")?;
        for k in 0..iterations {
            run.qubits_sent += lg;
            run.rounds += 1;
            holder = if holder == Party::Alice { Party::Bob } else { Party::Alice };
            apply_query(&mut st, input(holder), "idx")?;
            apply_diffusion(&mut st, "idx")?;
            if k + 1 < iterations {
                apply_query(&mut st, input(holder), "idx")?;
            }
        }
    }
    debug_assert!(holder == Party::Alice);

    st.add_register("aux", 2)?;
    apply_cond_query(&mut st, x, "idx", "aux")?;
    run.qubits_sent += lg + 1;
    run.rounds += 1;
    apply_cond_phase(&mut st, y, p.varphi, "idx", "aux")?;
    run.qubits_sent += lg + 1;
    run.rounds += 1;
    apply_cond_query(&mut st, x, "idx", "aux")?;
    st.remove_register("aux")?;
    apply_param_diffusion(&mut st, p.phi, "idx")?;
    finish_with_index(&mut run, &st, x, y)?;
    Ok(run.finish())
}

/// Checks the list promise and returns the common pairwise distance (`n` for a
/// singleton list).
fn list_distance(x: &BitString, list: &[BitString]) -> Result<usize> {
    let n = x.len();
    if n == 0 || !n.is_multiple_of(2) {
        return domain(format!("list protocols need positive even n, got {n}"));
    }
    if let Some(w) = list.iter().find(|w| w.len() != n) {
        return Err(Error::Dimension(format!("list element of length {} for n = {n}", w.len())));
    }
    if !list.contains(x) {
        return Err(Error::Promise(format!("x = {} is not in the list", x.to_hex())));
    }
    let d = if list.len() > 1 { list[0].distance(&list[1]) } else { n };
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if a.distance(b) != d {
                return Err(Error::Promise(format!(
                    "list is not equidistant: {} and {} at distance {} (expected {d})",
                    a.to_hex(),
                    b.to_hex(),
                    a.distance(b)
                )));
            }
        }
    }
    if 2 * d < n {
        return Err(Error::Promise(format!("list distance {d} below n/2")));
    }
    Ok(d)
}

fn check_orthonormal(basis: &[Vec<Complex64>]) -> Result<()> {
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let want = if i == j { 1.0 } else { 0.0 };
            let got = inner(a, b);
            if (got - want).norm() > 1e-9 {
                return Err(Error::Assertion(format!("measurement vectors {i}, {j} have inner product {got}")));
            }
        }
    }
    Ok(())
}

fn record_list_outcomes(run: &mut ProtocolRun, list: &[BitString], probs: &[f64], prefix: &str) {
    for (w, &p) in list.iter().zip(probs) {
        if p > BRANCH_TOL {
            run.record(format!("{prefix}w={}", w.to_hex()), p, element(w));
        }
    }
    let rest = probs[list.len()];
    if rest > BRANCH_TOL {
        run.record(format!("{prefix}none"), rest, Outcome::Element(String::new()));
    }
}

/// Two-round list protocol: Bob sends `γ|0⟩ + √(1−γ²)|1⟩`, Alice returns
/// `U_x U` applied to it with a fresh index register, Bob measures in
/// `{φ_w : w ∈ L}`.
pub fn list_two_round(x: &BitString, list: &[BitString]) -> Result<ProtocolRun> {
    let d = list_distance(x, list)?;
    let n = x.len();
    let lg = ceil_log2(n);
    let g2 = rat_to_f64(&list_gamma_sq(n, d)?);
    let mut run = ProtocolRun::new("list2", n, Some(d), list_inputs(x, list), element(x));
    let ctrl = vec![Complex64::new(g2.sqrt(), 0.0), Complex64::new((1.0 - g2).sqrt(), 0.0)];
    let mut st = StateVector::from_amplitudes(&[("ctrl", 2)], ctrl)?;
    run.qubits_sent += 1;
    run.rounds += 1;
    st.add_register("idx", 1 << lg)?;
    apply_list_prepare(&mut st, n, "ctrl", "idx")?;
    apply_list_query(&mut st, x, "ctrl", "idx")?;
    run.qubits_sent += lg + 1;
    run.rounds += 1;
    let basis: Vec<_> = list.iter().map(|w| list_state(w, n, d)).collect::<Result<_>>()?;
    check_orthonormal(&basis)?;
    let probs = st.project_probs(&["ctrl", "idx"], &basis)?;
    record_list_outcomes(&mut run, list, &probs, "");
    Ok(run.finish())
}

fn list_inputs(x: &BitString, list: &[BitString]) -> Vec<String> {
    std::iter::once(x.to_hex()).chain(list.iter().map(|w| w.to_hex())).collect()
}

/// `γ|0⟩|s⟩ + √((1−γ²)/n) Σ_i (−1)^{w_i} |1⟩|i⟩`, the state Bob ends up with in
/// the entanglement-assisted protocol.
pub fn entangled_list_state(w: &BitString, n: usize, d: usize) -> Result<Vec<Complex64>> {
    let g2 = rat_to_f64(&list_gamma_sq(n, d)?);
    let mut v = vec![Complex64::zero(); 2 * n];
    let a0 = (g2 / n as f64).sqrt();
    let a1 = ((1.0 - g2) / n as f64).sqrt();
    for i in 0..n {
        v[i] = Complex64::new(a0, 0.0);
        v[n + i] = Complex64::new(if w.get(i) { -a1 } else { a1 }, 0.0);
    }
    Ok(v)
}

/// Entanglement-assisted list protocol with classical messages only.
///
/// The parties share `n^{-1/2} Σ_i |i⟩|i⟩` and an EPR pair. Bob's control
/// qubit reaches Alice by remote state preparation, modelled as an ideal
/// one-bit resource. Alice applies `U_x` and `F_n` on her half, measures `ĵ`,
/// and teleports the control qubit; Bob undoes the `ĵ` phase and measures in
/// `{ψ_w : w ∈ L}`.
pub fn list_entangled(x: &BitString, list: &[BitString]) -> Result<ProtocolRun> {
    let d = list_distance(x, list)?;
    let n = x.len();
    let lg = ceil_log2(n);
    let g2 = rat_to_f64(&list_gamma_sq(n, d)?);
    let mut run = ProtocolRun::new("list-ent", n, Some(d), list_inputs(x, list), element(x));

    let layout = [("ctrl", 2), ("ia", n), ("a", 2), ("b", 2), ("ib", n)];
    let mut amps = vec![Complex64::zero(); 2 * n * 4 * n];
    let ctrl = [g2.sqrt(), (1.0 - g2).sqrt()];
    let s = 1.0 / (2.0 * n as f64).sqrt();
    for (c, &cv) in ctrl.iter().enumerate() {
        for i in 0..n {
            for e in 0..2 {
                let idx = (((c * n + i) * 2 + e) * 2 + e) * n + i;
                amps[idx] = Complex64::new(cv * s, 0.0);
            }
        }
    }
    let mut st = StateVector::from_amplitudes(&layout, amps)?;
    run.cbits_sent += 1;
    run.rounds += 1;

    apply_list_query(&mut st, x, "ctrl", "ia")?;
    apply_dft(&mut st, "ia")?;
    st.apply_controlled("ctrl", 1, "a", &pauli_x())?;
    st.apply_matrix("ctrl", &hadamard())?;
    run.cbits_sent += lg + 2;
    run.rounds += 1;

    let basis: Vec<_> = list.iter().map(|w| entangled_list_state(w, n, d)).collect::<Result<_>>()?;
    check_orthonormal(&basis)?;
    for bj in measure_branches(&st, "ia")? {
        for bc in measure_branches(&bj.state, "ctrl")? {
            for ba in measure_branches(&bc.state, "a")? {
                let mut s = ba.state.clone();
                if ba.outcome == 1 {
                    s.apply_matrix("b", &pauli_x())?;
                }
                if bc.outcome == 1 {
                    s.apply_matrix("b", &pauli_z())?;
                }
                let j = bj.outcome;
                let pos = s.reg("ib")?;
                s.apply_diagonal(|dg| {
                    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * ((dg[pos] * j) % n) as f64 / n as f64)
                });
                let p = bj.probability * bc.probability * ba.probability;
                let probs = s.project_probs(&["b", "ib"], &basis)?;
                let scaled: Vec<f64> = probs.iter().map(|q| q * p).collect();
                record_list_outcomes(&mut run, list, &scaled, &format!("j={j},m={}{},", bc.outcome, ba.outcome));
            }
        }
    }
    Ok(run.finish())
}

/// The correlation `P(a, b | x, L)`: uniform over `{(a, a + i)}` where `i` is
/// the label of `x` in `L`.
#[derive(Debug, Clone)]
pub struct NonSignalingBox {
    pub omega: usize,
    /// Label of each list position in `Z_ω`.
    pub labels: Vec<usize>,
}

impl NonSignalingBox {
    pub fn new(omega: usize, labels: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; omega];
        for &l in &labels {
            if l >= omega || std::mem::replace(&mut seen[l], true) {
                return domain("labels must be distinct elements of Z_ω");
            }
        }
        Ok(Self { omega, labels })
    }

    /// Joint distribution for Alice's list position `pos`.
    pub fn joint(&self, pos: usize) -> Vec<Vec<Rational>> {
        let w = self.omega;
        let i = self.labels[pos];
        let p = Rational::new(1.into(), (w as i64).into());
        (0..w)
            .map(|a| (0..w).map(|b| if b == (a + i) % w { p.clone() } else { Rational::zero() }).collect())
            .collect()
    }

    /// Exact check that both marginals are uniform for every Alice input.
    pub fn marginals_uniform(&self) -> bool {
        let u = Rational::new(1.into(), (self.omega as i64).into());
        (0..self.labels.len()).all(|pos| {
            let j = self.joint(pos);
            let total: Rational = j.iter().flatten().sum();
            total.is_one()
                && (0..self.omega).all(|a| j[a].iter().sum::<Rational>() == u)
                && (0..self.omega).all(|b| j.iter().map(|r| &r[b]).sum::<Rational>() == u)
        })
    }
}

/// Non-signaling list protocol with list positions as labels.
pub fn list_nonsignaling(x: &BitString, list: &[BitString]) -> Result<ProtocolRun> {
    list_nonsignaling_labeled(x, list, &(0..list.len()).collect::<Vec<_>>())
}

/// Alice sends her box output `a`; Bob's output `a + i` reveals the label `i`.
pub fn list_nonsignaling_labeled(x: &BitString, list: &[BitString], labels: &[usize]) -> Result<ProtocolRun> {
    let pos = list
        .iter()
        .position(|w| w == x)
        .ok_or_else(|| Error::Promise(format!("x = {} is not in the list", x.to_hex())))?;
    if labels.len() != list.len() {
        return Err(Error::Dimension("one label per list element required".into()));
    }
    let omega = list.len();
    let bx = NonSignalingBox::new(omega, labels.to_vec())?;
    if !bx.marginals_uniform() {
        return Err(Error::Assertion("box marginals are not uniform".into()));
    }
    let mut run = ProtocolRun::new("list-ns", x.len(), None, list_inputs(x, list), element(x));
    run.cbits_sent = ceil_log2(omega);
    run.rounds = usize::from(omega > 1);
    let joint = bx.joint(pos);
    for (a, row) in joint.iter().enumerate() {
        for (b, p) in row.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let i = (b + omega - a) % omega;
            let got = labels.iter().position(|&l| l == i).map(|q| &list[q]).expect("labels are a bijection");
            run.record(format!("a={a}"), rat_to_f64(p), element(got));
        }
    }
    Ok(run.finish())
}

/// A largest set of `n`-bit strings containing `x` with all pairwise distances
/// equal to `d`, found by clique search in `H(n, d)`.
pub fn equidistant_list(n: usize, d: usize, x: &BitString) -> Result<Vec<BitString>> {
    if x.len() != n {
        return Err(Error::Dimension(format!("x has {} bits, expected {n}", x.len())));
    }
    let g = hamming_graph(n as u64, d as u64)?;
    max_clique_containing(&g, x.word() as usize)
        .into_iter()
        .map(|v| BitString::new(n, v as u64))
        .collect()
}

/// Every equidistant list of size `k` that contains `x`, as sorted lists.
pub fn equidistant_lists(n: usize, d: usize, x: &BitString, k: usize) -> Result<Vec<Vec<BitString>>> {
    if x.len() != n || n > 16 {
        return domain(format!("equidistant_lists needs |x| = n ≤ 16, got n={n}"));
    }
    let cands: Vec<u64> = (0..1u64 << n).filter(|&v| (v ^ x.word()).count_ones() as usize == d).collect();
    let mut out = Vec::new();
    let mut cur = vec![x.word()];
    fn rec(start: usize, cands: &[u64], d: usize, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for (i, &c) in cands.iter().enumerate().skip(start) {
            if cur.iter().all(|&w| (w ^ c).count_ones() as usize == d) {
                cur.push(c);
                rec(i + 1, cands, d, k, cur, out);
                cur.pop();
            }
        }
    }
    if k >= 1 {
        rec(0, &cands, d, k, &mut cur, &mut out);
    }
    out.into_iter()
        .map(|mut l| {
            l.sort_unstable();
            l.into_iter().map(|v| BitString::new(n, v)).collect()
        })
        .collect()
}

/// Inputs for promise-equality sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// `x = 0` against every string of weight `d`, plus `y = 0`.
    Canonical,
    /// Every pair at distance 0 or `d`.
    Full,
}

pub fn eq_sweep_pairs(n: usize, d: usize, mode: SweepMode) -> Result<Vec<(BitString, BitString)>> {
    let zero = BitString::zeros(n);
    match mode {
        SweepMode::Canonical => {
            crate::error::cap("sweep inputs", crate::numerics::big_to_f64(&crate::numerics::binom(n as u64, d as i64)) as usize, 1 << 22)?;
            let mut out = vec![(zero, zero)];
            out.extend(BitString::all_of_weight(n, d).into_iter().map(|y| (zero, y)));
            Ok(out)
        }
        SweepMode::Full => {
            if n > 12 {
                return Err(Error::SizeCap { what: "full sweep length", value: n, cap: 12 });
            }
            let shifts = BitString::all_of_weight(n, d);
            let mut out = Vec::new();
            for v in 0..1u64 << n {
                let x = BitString::new(n, v)?;
                out.push((x, x));
                for s in &shifts {
                    out.push((x, x.xor(s)));
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b(n: usize, v: u64) -> BitString {
        BitString::new(n, v).unwrap()
    }

    #[test]
    fn eq_two_round_examples() {
        let x = b(8, 0b1011_0010);
        let run = eq_two_round(&x, &x).unwrap();
        assert!(run.pass);
        assert!(run.branches.iter().all(|br| br.outcome == Outcome::Equal));
        assert_eq!(run.qubits_sent, 7);
        assert_eq!(run.rounds, 2);
        let y = x.xor(&b(8, 0b0001_0100));
        let run = eq_two_round(&x, &y).unwrap();
        assert!(run.pass);
        let ids: Vec<&str> = run.branches.iter().map(|br| br.id.as_str()).collect();
        assert_eq!(ids, ["i=2", "i=4"]);
        assert!(run.branches.iter().all(|br| br.outcome == Outcome::NotEqual));
        assert!(matches!(eq_two_round(&x, &x.xor(&b(8, 1))), Err(Error::Promise(_))));
    }

    #[test]
    fn eq_two_round_n16_canonical_sweep() {
        let pairs = eq_sweep_pairs(16, 4, SweepMode::Canonical).unwrap();
        assert_eq!(pairs.len(), 1 + 1820);
        for (x, y) in pairs {
            let run = eq_two_round(&x, &y).unwrap();
            assert!(run.pass, "{x} {y}");
            assert_eq!(run.qubits_sent, 9);
        }
    }

    #[test]
    fn shift_invariance_of_eq_outcomes() {
        // Runs on (x, y) and (x ⊕ u, y ⊕ u) have identical branch statistics.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (x, y) in eq_sweep_pairs(8, 2, SweepMode::Canonical).unwrap() {
            let u = BitString::random(8, &mut rng);
            let a = eq_two_round(&x, &y).unwrap();
            let c = eq_two_round(&x.xor(&u), &y.xor(&u)).unwrap();
            let pa: Vec<_> = a.branches.iter().map(|br| (br.id.clone(), br.probability)).collect();
            let pc: Vec<_> = c.branches.iter().map(|br| (br.id.clone(), br.probability)).collect();
            assert_eq!(pa.len(), pc.len());
            for ((ia, qa), (ic, qc)) in pa.iter().zip(&pc) {
                assert_eq!(ia, ic);
                assert!((qa - qc).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eq_padded_examples() {
        let x = b(12, 0);
        assert!(eq_padded(&x, &x, 4).unwrap().pass);
        for y in BitString::all_of_weight(12, 4) {
            let run = eq_padded(&x, &y, 4).unwrap();
            assert!(run.pass);
            assert_eq!(run.outcome, Outcome::NotEqual);
            assert!(run.qubits_sent <= 2 * 4 + 2 + 1);
        }
        assert!(eq_padded(&b(8, 0), &b(8, 0), 3).is_err());
        let y = b(8, 0b11);
        let a = eq_padded(&b(8, 0), &y, 2).unwrap();
        let c = eq_two_round(&b(8, 0), &y).unwrap();
        assert_eq!(a.qubits_sent, c.qubits_sent);
        assert!(a.pass);
    }

    #[test]
    fn eq_multiround_n16_d2_exhaustive() {
        let x = b(16, 0);
        let run = eq_multiround(&x, &x, 2).unwrap();
        assert!(run.pass);
        assert_eq!(run.rounds, 4);
        for y in BitString::all_of_weight(16, 2) {
            let run = eq_multiround(&x, &y, 2).unwrap();
            assert!(run.pass, "{y}");
            assert_eq!(run.outcome, Outcome::NotEqual);
        }
        assert!(eq_multiround(&x, &x, 4).is_err());
    }

    #[test]
    fn eq_multiround_schedules_for_larger_ell() {
        // d/n small enough that ℓ = 3 and ℓ = 4 exercise both speaker parities.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (n, d) in [(32, 2), (48, 2), (64, 2)] {
            let ell = crate::qsim::grover_iterations(n, d);
            for _ in 0..5 {
                let x = BitString::random(n, &mut rng);
                let mut s = BitString::zeros(n);
                while s.weight() < d {
                    s = BitString::new(n, s.word() | 1 << rand::Rng::gen_range(&mut rng, 0..n)).unwrap();
                }
                let run = eq_multiround(&x, &x.xor(&s), d).unwrap();
                assert!(run.pass, "n={n} ℓ={ell}");
                assert_eq!(run.rounds, ell + 2);
                assert!(eq_multiround(&x, &x, d).unwrap().pass);
            }
        }
    }

    #[test]
    fn list_two_round_examples() {
        let x = b(4, 0b0110);
        let l = equidistant_list(4, 2, &x).unwrap();
        assert_eq!(l.len(), 4);
        for w in &l {
            let run = list_two_round(w, &l).unwrap();
            assert!(run.pass);
            assert_eq!(run.qubits_sent, 4);
            assert_eq!(run.branches.len(), 1);
        }
        let pair = vec![x.clone(), x.complement()];
        assert!(list_two_round(&x, &pair).unwrap().pass);
        for l in equidistant_lists(8, 6, &b(8, 0), 3).unwrap() {
            for w in &l {
                assert!(list_two_round(w, &l).unwrap().pass);
            }
        }
        assert!(list_two_round(&x.complement(), &l).is_err());
        assert!(list_two_round(&x, &[x.clone(), b(4, 0b0111)]).is_err());
    }

    #[test]
    fn list_entangled_examples() {
        let x = b(4, 0b0011);
        let l = equidistant_list(4, 2, &x).unwrap();
        let run = list_entangled(&x, &l).unwrap();
        assert!(run.pass);
        assert_eq!(run.cbits_sent, 5);
        let js: std::collections::BTreeSet<_> = run.branches.iter().map(|b| b.id.split(',').next().unwrap().to_string()).collect();
        assert_eq!(js.len(), 4);
        let pair = vec![x.clone(), x.complement()];
        assert!(list_entangled(&x.complement(), &pair).unwrap().pass);
    }

    #[test]
    fn list_nonsignaling_examples() {
        let x = b(4, 5);
        let run = list_nonsignaling(&x, std::slice::from_ref(&x)).unwrap();
        assert!(run.pass);
        assert_eq!(run.cbits_sent, 0);
        let l: Vec<_> = (0..4).map(|v| b(4, v * 3)).collect();
        let perms = [[0, 1, 2, 3], [3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]];
        for labels in perms {
            for w in &l {
                let run = list_nonsignaling_labeled(w, &l, &labels).unwrap();
                assert!(run.pass);
                assert_eq!(run.branches.len(), 4);
                assert_eq!(run.cbits_sent, 2);
            }
        }
        assert!(NonSignalingBox::new(4, vec![0, 1, 2, 3]).unwrap().marginals_uniform());
        assert!(NonSignalingBox::new(4, vec![0, 0, 2, 3]).is_err());
    }

    #[test]
    fn entangled_states_are_orthonormal() {
        let l = equidistant_list(4, 2, &b(4, 0)).unwrap();
        let basis: Vec<_> = l.iter().map(|w| entangled_list_state(w, 4, 2).unwrap()).collect();
        check_orthonormal(&basis).unwrap();
    }

    #[test]
    fn full_sweep_small() {
        let pairs = eq_sweep_pairs(8, 2, SweepMode::Full).unwrap();
        assert_eq!(pairs.len(), 256 * 29);
        assert!(pairs.iter().take(300).all(|(x, y)| eq_two_round(x, y).unwrap().pass));
        assert!(eq_sweep_pairs(14, 2, SweepMode::Full).is_err());
    }
}
