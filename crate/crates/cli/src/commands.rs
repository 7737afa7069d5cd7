use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use roundelim::bits::{ceil_log2, BitString};
use roundelim::bounds::{
    bound_formulas, cover_free_check, entropy_gap, kleitman_check, transcripts_to_family, BoundParams,
};
use roundelim::graphs::{
    chromatic_number, cycle_graph, gadget_graph, hamming_graph, k_subsets, max_clique,
    nonisomorphic_graphs, suspension, Graph,
};
use roundelim::krawtchouk::{
    first_sign_change, lambda_min_bound, orthogonality_defect, root_interval, smallest_root, spectrum,
};
use roundelim::linopt::{delsarte_lp, delsarte_relaxation, delsarte_theta_prime, solve, verify, LpStatus};
use roundelim::numerics::{binom, dense_sym_eigs, entropy, pow2, rat};
use roundelim::orthrep::{check, check_shift_invariant, gk_poly_rep, padded_family, OrthRep, VectorFamily};
use roundelim::protocols::classical::{
    announce_protocol, bisection_protocol, bit_query_protocol, coloring_protocol, coordinate_query_protocol,
    distance_pairs, distinct_pairs, parity_exchange_protocol, ping_pong_protocol, ListProtocol,
};
use roundelim::protocols::kremer::{
    coloring_fixture, eq_two_round_fixture, fourier_fixture, precision_sweep, QuantumProtocolSpec,
};
use roundelim::protocols::quantum::{eq_sweep_pairs, list_nonsignaling_labeled, SweepMode};
use roundelim::protocols::{
    eq_multiround, eq_padded, eq_two_round, equidistant_list, kremer_compile, list_entangled, list_two_round,
    round_collapse, ClassicalProtocol, ProtocolRun,
};
use roundelim::qsim::{exact_grover_params, run_exact_grover, success_probability};
use roundelim::theta::{
    dual_cert_from_orthrep, fluffy_rate, independent_set_certificate, theta_complement_hamming,
    theta_complement_hamming_exact, xi_lower_bound,
};
use roundelim::{Error, Result};

use crate::report::{to_value, Outcome};

fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("missing required flag --{flag}")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    Graph::from_edge_list(&read(path)?)
}

fn even_pairs_below_half(max_n: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=max_n).step_by(2).flat_map(|n| (2..n).step_by(2).filter(move |&d| 2 * d < n).map(move |d| (n, d)))
}

pub fn spectrum_cmd(n: u64, d: u64, dense: bool, tol: f64) -> Result<Outcome> {
    let s = spectrum(n, d)?;
    let rows: Vec<Value> = s.values.iter().map(to_value).collect();
    let mut out = Outcome::new(&s);
    let mult: BigInt = s.values.iter().map(|e| e.multiplicity.clone()).sum();
    let trace: BigInt = s.values.iter().map(|e| &e.eigenvalue * &e.multiplicity).sum();
    out.check("multiplicities sum to 2^n", mult == pow2(n));
    out.check("trace is zero", trace.is_zero());
    out.check("lambda_max = C(n,d)", s.lambda_max == binom(n, d as i64));
    if dense {
        if n > 12 {
            return domain(format!("--dense needs n ≤ 12, got {n}"));
        }
        let exp = s.expanded();
        let eigs = dense_sym_eigs(&hamming_graph(n, d)?.adjacency_matrix())?;
        let err = exp.iter().zip(&eigs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        out.results["dense_max_error"] = json!(err);
        out.check(format!("dense eigenvalues agree within {tol:e}"), err <= tol);
    }
    Ok(out.table(rows))
}

pub fn theta_cmd(n: u64, d: u64, tol: f64) -> Result<Outcome> {
    let exact = theta_complement_hamming_exact(n, d)?;
    let value = theta_complement_hamming(n, d)?;
    let s = spectrum(n, d)?;
    let mut res = json!({
        "n": n,
        "d": d,
        "value": value,
        "exact": exact.to_string(),
        "lambda_min": s.lambda_min.to_string(),
        "lambda_max": s.lambda_max.to_string(),
    });
    let mut failures = Vec::new();
    if value < 1.0 - tol {
        failures.push("theta ≥ 1".to_string());
    }
    if n.is_multiple_of(2) && d >= 1 && 2 * d <= n && n <= 30 {
        let fam = padded_family(n, n / 2 - d)?;
        let rep = check_shift_invariant(&fam, n, |w| w.count_ones() as u64 == d)?;
        res["rep_dimension"] = json!(fam.dimension());
        res["rep_check"] = to_value(rep);
        if !rep.pass {
            failures.push("padded representation is orthonormal".into());
        }
        if value > fam.dimension() as f64 + tol {
            failures.push("theta ≤ representation dimension".into());
        }
        if n <= 6 {
            let g = hamming_graph(n, d)?;
            let upper = dual_cert_from_orthrep(&fam.materialize(), &g)?.value;
            let clique = max_clique(&g);
            let lower = independent_set_certificate(&g.complement(), &clique)?.value;
            res["certified_lower"] = json!(lower);
            res["certified_upper"] = json!(upper);
            if lower > value + tol || value > upper + tol {
                failures.push("certificates bracket theta".into());
            }
        }
    }
    let mut out = Outcome::new(res);
    out.failures = failures;
    Ok(out)
}

pub fn root_cmd(n: u64, d: u64) -> Result<Outcome> {
    let r = smallest_root(n, d)?;
    let x = first_sign_change(n, d)?;
    let mut res = json!({ "n": n, "d": d, "smallest_root": r, "sign_change": x });
    let mut out_fail = Vec::new();
    if !(r > x as f64 - 1.0 - 1e-9 && r <= x as f64 + 1e-9) {
        out_fail.push("root lies in (x−1, x] for the first sign change x".to_string());
    }
    if 2 * d < n {
        let (lo, hi) = root_interval(n, d)?;
        res["interval"] = json!([lo, hi]);
        if !(r >= lo - 1e-9 && r <= hi + 1e-9) {
            out_fail.push("root lies in [n/2 − √((n−d)d), n/2]".into());
        }
    }
    let mut out = Outcome::new(res);
    out.failures = out_fail;
    Ok(out)
}

pub fn bound_xi_cmd(n: Option<u64>, d: Option<u64>, alpha: Option<f64>) -> Result<Outcome> {
    if let Some(a) = alpha {
        let rate = fluffy_rate(a)?;
        let mut res = json!({ "alpha": a, "rate": rate });
        if a > 0.0 && a < 0.5 {
            res["entropy_gap"] = json!(entropy_gap(a)?);
        }
        let mut out = Outcome::new(res);
        out.check("rate is positive", a == 0.0 || a == 0.5 || rate > 0.0);
        return Ok(out);
    }
    let (n, d) = (need(n, "n")?, need(d, "d")?);
    let xi = xi_lower_bound(n, d)?;
    let lm = lambda_min_bound(n, d)?;
    let theta = theta_complement_hamming(n, d)?;
    let mut out = Outcome::new(json!({ "xi": xi, "lambda_min_bound": lm, "log2_theta": theta.log2() }));
    out.check("|lambda_min| ≤ bound (exact)", lm.holds);
    out.check("log2 bound ≤ log2 theta", xi.log2_bound <= theta.log2() + 1e-9);
    Ok(out)
}

pub fn lp_cmd(n: u64, degrees: Option<Vec<u64>>, export: Option<&Path>) -> Result<Outcome> {
    let lp = match &degrees {
        Some(ds) => delsarte_relaxation(n, ds)?,
        None => delsarte_lp(n)?,
    };
    if let Some(p) = export {
        std::fs::write(p, lp.to_text()).map_err(|e| Error::Domain(format!("cannot write {}: {e}", p.display())))?;
    }
    let sol = if degrees.is_none() { delsarte_theta_prime(n)? } else { solve(&lp)? };
    verify(&lp, &sol)?;
    let rows = sol
        .assignment
        .iter()
        .enumerate()
        .map(|(i, a)| json!({ "k": n / 2 + i as u64, "a_k": a.to_string() }))
        .collect();
    let mut out = Outcome::new(json!({ "n": n, "solution": sol, "bound_2n": 2 * n, "certified": true }));
    if sol.status == LpStatus::Optimal {
        out.check("optimum ≤ 2n", sol.value <= rat(2 * n as i64));
    } else {
        out.check("LP is bounded and feasible", degrees.is_some());
    }
    Ok(out.table(rows))
}

fn rep_outcome(fam: &impl VectorFamily, n: u64, tol: f64, adjacent: impl Fn(u64) -> bool, vectors: bool) -> Result<Outcome> {
    let rep = check_shift_invariant(fam, n, adjacent)?;
    let mut res = json!({ "n": n, "dimension": fam.dimension(), "check": rep });
    if vectors {
        if fam.dimension() << n > 1 << 16 {
            return domain("--vectors limited to 2^16 amplitudes");
        }
        res["representation"] = fam.materialize().to_json();
    }
    let mut out = Outcome::new(res);
    out.check(
        format!("orthonormal on every edge within {tol:e}"),
        rep.max_norm_defect <= tol && rep.max_edge_inner_product <= tol,
    );
    Ok(out)
}

pub fn rep_fourier(n: u64, tol: f64, vectors: bool) -> Result<Outcome> {
    let fam = padded_family(n, 0)?;
    rep_outcome(&fam, n, tol, |w| 2 * w.count_ones() as u64 == n, vectors)
}

pub fn rep_padded(n: u64, ell: Option<u64>, d: Option<u64>, tol: f64, vectors: bool) -> Result<Outcome> {
    let ell = match (ell, d) {
        (Some(l), _) => l,
        (None, Some(d)) if 2 * d <= n => n / 2 - d,
        (None, Some(d)) => return domain(format!("padding needs d ≤ n/2, got d={d}")),
        (None, None) => return domain("one of --ell or --d is required"),
    };
    let fam = padded_family(n, ell)?;
    let dist = n / 2 - ell;
    let mut out = rep_outcome(&fam, n, tol, |w| w.count_ones() as u64 == dist, vectors)?;
    out.results["d"] = json!(dist);
    out.results["ell"] = json!(ell);
    Ok(out)
}

pub fn rep_gk(n: u64, tol: f64, vectors: bool) -> Result<Outcome> {
    let rep = gk_poly_rep(n)?;
    let half = n / 2;
    let mut out = rep_outcome(&rep.family, n, tol, |w| w.count_ones() as u64 >= half, vectors)?;
    let ev = rep.poly.int_evaluator().ok_or_else(|| Error::Assertion("coefficients are not integral".into()))?;
    let exact = (0..1u64 << n).filter(|w| w.count_ones() as u64 >= half).all(|w| ev.eval(w) == 0);
    out.results["exact_zero_on_edges"] = json!(exact);
    out.results["mon_count"] = json!(rep.mon_count);
    out.results["degree"] = json!(rep.degree);
    out.results["entropy_bound"] = json!(rep.entropy_bound);
    out.results["slack_bound"] = json!(rep.slack_bound.to_string());
    out.results["within_entropy_bound"] = json!(rep.within_entropy_bound);
    out.results["within_slack_bound"] = json!(rep.within_slack_bound);
    out.results["odd_slack_bound"] = json!(rep.odd_slack_bound.to_string());
    out.results["within_odd_slack_bound"] = json!(rep.within_odd_slack_bound);
    out.check("Gram entries vanish exactly on edges", exact);
    Ok(out)
}

#[derive(Deserialize)]
struct RepFile {
    dimension: usize,
    vectors: Vec<RepVertex>,
}

#[derive(Deserialize)]
struct RepVertex {
    vertex: usize,
    amplitudes: Vec<[f64; 2]>,
}

pub fn rep_check(graph: &Path, rep: &Path, tol: f64, certificate: bool) -> Result<Outcome> {
    let g = load_graph(graph)?;
    let file: RepFile = serde_json::from_str(&read(rep)?).map_err(|e| Error::Domain(format!("bad representation file: {e}")))?;
    let vectors: BTreeMap<usize, Vec<num_complex::Complex64>> = file
        .vectors
        .into_iter()
        .map(|v| (v.vertex, v.amplitudes.iter().map(|&[re, im]| num_complex::Complex64::new(re, im)).collect()))
        .collect();
    let r = OrthRep::new(file.dimension, vectors)?;
    let report = check(&r, &g)?;
    let mut res = json!({ "vertices": g.vertex_count(), "edges": g.edge_count(), "dimension": r.dimension, "check": report });
    let ok = report.max_norm_defect <= tol && report.max_edge_inner_product <= tol;
    if certificate && ok {
        res["theta_complement_upper"] = json!(dual_cert_from_orthrep(&r, &g)?.value);
    }
    let mut out = Outcome::new(res);
    out.check(format!("orthonormal on every edge within {tol:e}"), ok);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scope {
    /// Every input class (one representative per shift unless --full).
    All,
    /// Seeded random promise pairs plus equal pairs.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqKind {
    Two,
    Padded,
    Multi,
}

impl EqKind {
    fn name(self) -> &'static str {
        match self {
            EqKind::Two => "eq2",
            EqKind::Padded => "eq-pad",
            EqKind::Multi => "eq-multi",
        }
    }
}

pub struct EqArgs {
    pub kind: EqKind,
    pub n: usize,
    pub d: usize,
    pub x: Option<String>,
    pub y: Option<String>,
    pub scope: Option<Scope>,
    pub full: bool,
    pub samples: usize,
    pub seed: u64,
}

fn run_row(r: &ProtocolRun) -> Value {
    json!({
        "inputs": r.inputs.join(";"),
        "expected": r.outcome,
        "pass": r.pass,
        "rounds": r.rounds,
        "qubits_sent": r.qubits_sent,
        "cbits_sent": r.cbits_sent,
        "branches": r.branches.len(),
        "lost_probability": r.lost_probability,
    })
}

/// Aggregates runs that must share their costs.
fn summarize(protocol: &str, runs: &[ProtocolRun], mode: &str) -> Outcome {
    let first = &runs[0];
    let failed: Vec<String> = runs.iter().filter(|r| !r.pass).map(|r| r.inputs.join(";")).take(10).collect();
    let uniform = runs.iter().all(|r| (r.rounds, r.qubits_sent, r.cbits_sent) == (first.rounds, first.qubits_sent, first.cbits_sent));
    let mut res = json!({
        "protocol": protocol,
        "mode": mode,
        "runs": runs.len(),
        "passed": runs.iter().filter(|r| r.pass).count(),
        "rounds": first.rounds,
        "qubits_sent": first.qubits_sent,
        "cbits_sent": first.cbits_sent,
        "failed_inputs": failed,
    });
    if runs.len() == 1 {
        res["run"] = to_value(first);
    }
    let mut out = Outcome::new(res).table(runs.iter().map(run_row).collect());
    out.check("every branch is correct", runs.iter().all(|r| r.pass));
    out.check("costs are input independent", uniform);
    out
}

fn parse_bits(n: usize, hex: &str) -> Result<BitString> {
    BitString::from_hex(n, hex)
}

fn random_pairs(n: usize, d: usize, samples: usize, seed: u64) -> Result<Vec<(BitString, BitString)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..samples {
        let x = BitString::random(n, &mut rng);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let mask = idx[..d].iter().fold(0u64, |m, &i| m | 1 << i);
        out.push((x, x.xor(&BitString::new(n, mask)?)));
    }
    for _ in 0..samples.div_ceil(10) {
        let x = BitString::random(n, &mut rng);
        out.push((x, x));
    }
    Ok(out)
}

pub fn protocol_eq(a: EqArgs) -> Result<Outcome> {
    let (n, d) = (a.n, a.d);
    let pairs = match (a.scope, &a.x, &a.y) {
        (None, Some(x), Some(y)) => vec![(parse_bits(n, x)?, parse_bits(n, y)?)],
        (None, _, _) => return domain("give --x and --y, or --sweep"),
        (Some(Scope::All), _, _) => eq_sweep_pairs(n, d, if a.full { SweepMode::Full } else { SweepMode::Canonical })?,
        (Some(Scope::Random), _, _) => random_pairs(n, d, a.samples, a.seed)?,
    };
    let runs: Vec<ProtocolRun> = pairs
        .par_iter()
        .map(|(x, y)| match a.kind {
            EqKind::Two => eq_two_round(x, y),
            EqKind::Padded => eq_padded(x, y, d),
            EqKind::Multi => eq_multiround(x, y, d),
        })
        .collect::<Result<_>>()?;
    let mode = match a.scope {
        None => "single",
        Some(Scope::All) if a.full => "full",
        Some(Scope::All) => "canonical",
        Some(Scope::Random) => "random",
    };
    let mut out = summarize(a.kind.name(), &runs, mode);
    out.results["n"] = json!(n);
    out.results["d"] = json!(d);
    let lg = ceil_log2(n);
    let cost = runs[0].qubits_sent + runs[0].cbits_sent;
    match a.kind {
        EqKind::Two => out.check("qubits_sent = 2⌈log n⌉+1", cost == 2 * lg + 1),
        EqKind::Padded => {
            let pad = ((4 * d) as f64 / n as f64).log2().ceil() as usize;
            out.results["cost_bound"] = json!(2 * lg + 2 * pad + 1);
            out.check("qubits_sent ≤ 2⌈log n⌉+2⌈log 4α⌉+1", cost <= 2 * lg + 2 * pad + 1);
        }
        EqKind::Multi => {
            let ell = exact_grover_params(n, d)?.ell;
            let want = (ell + 2) * lg + 2;
            out.results["ell"] = json!(ell);
            out.results["cost_formula"] = json!(want);
            out.check("rounds = ℓ+2", runs[0].rounds == ell + 2);
            out.check("qubits_sent = (ℓ+2)⌈log n⌉+2", cost == want);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListKind {
    Two,
    Entangled,
    NonSignaling,
}

pub struct ListArgs {
    pub kind: ListKind,
    pub n: usize,
    pub d: Option<usize>,
    pub x: Option<String>,
    pub list: Option<Vec<String>>,
    pub labels: Option<Vec<usize>>,
    pub all: bool,
}

pub fn protocol_list(a: ListArgs) -> Result<Outcome> {
    let n = a.n;
    let x = match &a.x {
        Some(h) => parse_bits(n, h)?,
        None => BitString::zeros(n),
    };
    let list = match (&a.list, a.d) {
        (Some(l), _) => l.iter().map(|h| parse_bits(n, h)).collect::<Result<Vec<_>>>()?,
        (None, Some(d)) => equidistant_list(n, d, &x)?,
        (None, None) => return domain("give --list or --d"),
    };
    let alices: Vec<BitString> = if a.all { list.clone() } else { vec![x] };
    let labels = a.labels.clone().unwrap_or_else(|| (0..list.len()).collect());
    let runs: Vec<ProtocolRun> = alices
        .par_iter()
        .map(|x| match a.kind {
            ListKind::Two => list_two_round(x, &list),
            ListKind::Entangled => list_entangled(x, &list),
            ListKind::NonSignaling => list_nonsignaling_labeled(x, &list, &labels),
        })
        .collect::<Result<_>>()?;
    let name = match a.kind {
        ListKind::Two => "list2",
        ListKind::Entangled => "list-ent",
        ListKind::NonSignaling => "list-ns",
    };
    let mut out = summarize(name, &runs, if a.all { "all" } else { "single" });
    out.results["n"] = json!(n);
    out.results["list"] = json!(list.iter().map(|w| w.to_hex()).collect::<Vec<_>>());
    let lg = ceil_log2(n);
    match a.kind {
        ListKind::Two => out.check("qubits_sent = ⌈log n⌉+2", runs[0].qubits_sent == lg + 2),
        ListKind::Entangled => out.check("cbits_sent = ⌈log n⌉+3", runs[0].cbits_sent == lg + 3),
        ListKind::NonSignaling => out.check("cbits_sent = ⌈log ω⌉", runs[0].cbits_sent == ceil_log2(list.len())),
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CollapseFixture {
    ParityExchange,
    Bisection,
    PingPong,
    Coloring,
}

fn widths(width: usize) -> Vec<u64> {
    (0..1u64 << width).collect()
}

pub fn collapse_cmd(fixtures: &[CollapseFixture], graph: Option<&Path>) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut all = true;
    for f in fixtures {
        let rep = match f {
            CollapseFixture::ParityExchange => round_collapse(&parity_exchange_protocol(), &widths(4), &distance_pairs(4, 2))?.1,
            CollapseFixture::Bisection => round_collapse(&bisection_protocol(), &widths(3), &distinct_pairs(8))?.1,
            CollapseFixture::PingPong => round_collapse(&ping_pong_protocol(), &widths(4), &distinct_pairs(16))?.1,
            CollapseFixture::Coloring => {
                let g = match graph {
                    Some(p) => load_graph(p)?,
                    None => cycle_graph(5)?,
                };
                let p: ClassicalProtocol<usize, usize, bool> = coloring_protocol(&g)?;
                let edges: Vec<(usize, usize)> = g.edges().into_iter().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
                let inputs: Vec<usize> = (0..g.vertex_count()).collect();
                round_collapse(&p, &inputs, &edges)?.1
            }
        };
        all &= rep.pass;
        let mut row = to_value(&rep);
        row["fixture"] = json!(format!("{f:?}"));
        rows.push(row);
    }
    let mut out = Outcome::new(json!({ "fixtures": rows.clone() })).table(rows);
    out.check("collapsed message ≤ original transcript", all);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KremerFixture {
    Eq2,
    Coloring,
    Fourier,
}

pub fn kremer_cmd(
    fixtures: &[KremerFixture],
    n: u64,
    graph: Option<&Path>,
    bits: Option<usize>,
    sweep_bits: &[usize],
) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut sweeps = BTreeMap::new();
    let mut all = true;
    for f in fixtures {
        let qp: QuantumProtocolSpec = match f {
            KremerFixture::Eq2 => eq_two_round_fixture(),
            KremerFixture::Coloring => coloring_fixture(&match graph {
                Some(p) => load_graph(p)?,
                None => cycle_graph(5)?,
            })?,
            KremerFixture::Fourier => fourier_fixture(n)?,
        };
        let r = kremer_compile(&qp, bits)?;
        all &= r.pass;
        if !sweep_bits.is_empty() {
            sweeps.insert(qp.name.clone(), precision_sweep(&qp, sweep_bits.iter().copied())?);
        }
        reports.push(r);
    }
    let rows = reports.iter().map(to_value).collect();
    let mut out = Outcome::new(json!({ "reports": reports, "precision_sweeps": sweeps })).table(rows);
    out.check("deviation ≤ 1/8 and every decision correct", all);
    Ok(out)
}

pub struct BoundsArgs {
    pub big_n: u64,
    pub k: u64,
    pub chi: Option<u64>,
    pub omega: Option<u64>,
    pub c: f64,
    pub slack: f64,
    pub kleitman: Option<(usize, usize)>,
    pub cover_free: bool,
    pub seed: u64,
}

pub fn bounds_cmd(a: BoundsArgs) -> Result<Outcome> {
    let mut p = BoundParams::new(a.big_n, a.k);
    p.chi = a.chi;
    p.omega = a.omega;
    p.c = a.c;
    p.slack = a.slack;
    let rep = bound_formulas(&p)?;
    let rows = rep.rows.iter().map(to_value).collect();
    let mut res = json!({ "formulas": rep });
    let mut failures = Vec::new();
    if !rep.ordering_violations.is_empty() {
        failures.push("lower ≤ upper for every defined pair".to_string());
    }
    if let Some((n, r)) = a.kleitman {
        let k = kleitman_check(n, r, a.seed)?;
        if !k.holds {
            failures.push("diameter-2r sets obey the ball bound".into());
        }
        res["kleitman"] = to_value(k);
    }
    if a.cover_free {
        let (big_n, k) = (a.big_n as usize, a.k as usize);
        if big_n > 6 || k > 3 {
            return domain("--cover-free needs N ≤ 6 and k ≤ 3");
        }
        let lists = k_subsets(big_n, k);
        let mut protos: Vec<ListProtocol> = vec![announce_protocol(big_n), coordinate_query_protocol(big_n)];
        if k == 2 {
            protos.push(bit_query_protocol(big_n));
        }
        let mut fams = Vec::new();
        for proto in &protos {
            let t = transcripts_to_family(proto, big_n, &lists)?;
            let cf = cover_free_check(&t.family, k - 1)?;
            if !cf.holds || t.distinct_members < big_n {
                failures.push(format!("{} transcript family is (k−1)-cover-free with |F| ≥ N", proto.name));
            }
            fams.push(json!({ "protocol": proto.name, "distinct_members": t.distinct_members, "cover_free": cf }));
        }
        res["transcript_families"] = json!(fams);
    }
    let mut out = Outcome::new(res).table(rows);
    out.failures = failures;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepTarget {
    /// Krawtchouk orthogonality defect for every n up to --max-n.
    Orthogonality,
    /// Krawtchouk spectra against dense eigensolves.
    Spectrum,
    /// Theta sandwich between 1 and the padded representation dimension.
    Theta,
    /// Smallest-root interval and integer bracketing.
    Root,
    /// Exact smallest-eigenvalue bound.
    LambdaMin,
    /// Exact Grover success on canonical and random marked sets.
    Grover,
    /// Delsarte LP optimum against 2n.
    Delsarte,
    /// Chromatic-number equivalences for gadget and suspension graphs.
    Gadget,
    /// Entropy inequality and gap on a grid.
    Entropy,
}

impl SweepTarget {
    fn default_max(self) -> u64 {
        match self {
            SweepTarget::Orthogonality | SweepTarget::LambdaMin => 20,
            SweepTarget::Spectrum => 10,
            SweepTarget::Theta | SweepTarget::Delsarte => 16,
            SweepTarget::Root | SweepTarget::Grover => 32,
            SweepTarget::Gadget => 5,
            SweepTarget::Entropy => 10_000,
        }
    }
}

pub fn sweep_cmd(target: SweepTarget, max_n: Option<u64>, seed: u64, tol: Option<f64>) -> Result<Outcome> {
    let m = max_n.unwrap_or(target.default_max());
    let mut rows: Vec<Value> = Vec::new();
    let mut bad: Vec<String> = Vec::new();
    match target {
        SweepTarget::Orthogonality => {
            let defects: Vec<(u64, BigInt)> =
                (1..=m).into_par_iter().map(|n| Ok((n, orthogonality_defect(n)?))).collect::<Result<_>>()?;
            for (n, def) in defects {
                if !def.is_zero() {
                    bad.push(format!("defect zero at n={n}"));
                }
                rows.push(json!({ "n": n, "defect": def.to_string() }));
            }
        }
        SweepTarget::Spectrum => {
            if m > 12 {
                return domain("spectrum sweep needs --max-n ≤ 12");
            }
            let tol = tol.unwrap_or(1e-6);
            let cases: Vec<(u64, u64)> = (1..=m).flat_map(|n| (1..=n).map(move |d| (n, d))).collect();
            let errs: Vec<f64> = cases
                .par_iter()
                .map(|&(n, d)| {
                    let eigs = dense_sym_eigs(&hamming_graph(n, d)?.adjacency_matrix())?;
                    Ok(spectrum(n, d)?.expanded().iter().zip(&eigs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                })
                .collect::<Result<_>>()?;
            for (&(n, d), err) in cases.iter().zip(errs) {
                if err > tol {
                    bad.push(format!("spectrum matches dense eigensolve at ({n},{d})"));
                }
                rows.push(json!({ "n": n, "d": d, "max_error": err }));
            }
        }
        SweepTarget::Theta => {
            let tol = tol.unwrap_or(1e-8);
            for (n, d) in even_pairs_below_half(m) {
                let t = theta_complement_hamming(n, d)?;
                let fam = padded_family(n, n / 2 - d)?;
                let ok = check_shift_invariant(&fam, n, |w| w.count_ones() as u64 == d)?.pass;
                if !ok || t < 1.0 - tol || t > fam.dimension() as f64 + tol {
                    bad.push(format!("1 ≤ theta ≤ dim at ({n},{d})"));
                }
                rows.push(json!({ "n": n, "d": d, "theta": t, "rep_dimension": fam.dimension() }));
            }
        }
        SweepTarget::Root => {
            for (n, d) in even_pairs_below_half(m) {
                let r = smallest_root(n, d)?;
                let (lo, hi) = root_interval(n, d)?;
                let x = first_sign_change(n, d)?;
                if !(r >= lo - 1e-9 && r <= hi + 1e-9 && r > x as f64 - 1.0 - 1e-9 && r <= x as f64 + 1e-9) {
                    bad.push(format!("root located at ({n},{d})"));
                }
                rows.push(json!({ "n": n, "d": d, "root": r, "lo": lo, "hi": hi, "sign_change": x }));
            }
        }
        SweepTarget::LambdaMin => {
            for (n, d) in even_pairs_below_half(m) {
                let b = lambda_min_bound(n, d)?;
                if !b.holds {
                    bad.push(format!("lambda_min bound at ({n},{d})"));
                }
                rows.push(json!({ "n": n, "d": d, "lambda_min": b.lambda_min.to_string(), "bound": b.bound }));
            }
        }
        SweepTarget::Grover => {
            let tol = tol.unwrap_or(1e-9);
            let cases: Vec<(usize, usize)> = (1..=m as usize).flat_map(|n| (1..=n).map(move |d| (n, d))).collect();
            let res: Vec<(usize, f64)> = cases
                .par_iter()
                .map(|&(n, d)| {
                    let p = exact_grover_params(n, d)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32 | d as u64));
                    let mut worst = 1.0f64;
                    let mut zs = vec![BitString::new(n, if d == 64 { u64::MAX } else { (1u64 << d) - 1 })?];
                    for _ in 0..10 {
                        let mut idx: Vec<usize> = (0..n).collect();
                        idx.shuffle(&mut rng);
                        zs.push(BitString::new(n, idx[..d].iter().fold(0u64, |m, &i| m | 1 << i))?);
                    }
                    for z in &zs {
                        worst = worst.min(success_probability(&run_exact_grover(z, &p)?, "idx", z)?);
                    }
                    Ok((p.ell, worst))
                })
                .collect::<Result<_>>()?;
            for (&(n, d), (ell, worst)) in cases.iter().zip(res) {
                if worst < 1.0 - tol || (4 * d == n && ell != 1) {
                    bad.push(format!("exact Grover at ({n},{d})"));
                }
                rows.push(json!({ "n": n, "d": d, "ell": ell, "min_success": worst }));
            }
        }
        SweepTarget::Delsarte => {
            for n in (4..=m).step_by(4) {
                let sol = delsarte_theta_prime(n)?;
                verify(&delsarte_lp(n)?, &sol)?;
                rows.push(json!({ "n": n, "optimum": sol.value.to_string(), "bound": 2 * n }));
            }
        }
        SweepTarget::Gadget => {
            for n in 1..=m as usize {
                for g in nonisomorphic_graphs(n)? {
                    let chi = chromatic_number(&g)?;
                    let chi_gadget = if n >= 2 { Some(chromatic_number(&gadget_graph(&g)?)?) } else { None };
                    if chi_gadget.is_some_and(|c| (chi <= 3) != (c == 3)) {
                        bad.push(format!("gadget equivalence on {}", g.to_edge_list().replace('\n', " ").trim()));
                    }
                    for t in 0..=3 {
                        if chromatic_number(&suspension(&g, t)?)? != chi + t {
                            bad.push(format!("suspension adds {t} colours"));
                        }
                    }
                    rows.push(json!({ "vertices": n, "edges": g.edge_count(), "chi": chi, "chi_gadget": chi_gadget }));
                }
            }
        }
        SweepTarget::Entropy => {
            let tol = tol.unwrap_or(1e-12);
            let mut tight = Vec::new();
            for i in 0..=m {
                let p = i as f64 / m as f64;
                let gap = entropy(p)? - (1.0 - (1.0 - 2.0 * p).powi(2));
                if gap < -tol {
                    bad.push(format!("H(p) ≥ 1 − (1−2p)² at p={p}"));
                }
                if gap.abs() <= tol {
                    tight.push(p);
                }
            }
            if tight.iter().any(|&p| p != 0.0 && p != 0.5 && p != 1.0) {
                bad.push("equality only at 0, 1/2, 1".into());
            }
            for i in 0..m {
                let p = 0.001 + 0.498 * (i as f64 + 0.5) / m as f64;
                if entropy_gap(p).is_err() {
                    bad.push(format!("entropy gap positive at p={p}"));
                }
            }
            let rate = fluffy_rate(0.25)?;
            rows.push(json!({ "grid_points": m + 1, "tight_points": tight, "rate_quarter": rate }));
        }
    }
    let mut out = Outcome::new(json!({ "target": format!("{target:?}"), "max": m, "rows": rows.clone() })).table(rows);
    bad.dedup();
    out.failures = bad;
    Ok(out)
}
