//! `roundelim` command-line front end.
//!
//! Every subcommand prints one JSON report (or CSV with `--csv`) on standard
//! output and a short summary on standard error. Exit status is 0 when every
//! checked invariant holds, 1 when one fails and 2 on invalid input.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::*;
use report::{envelope, error_envelope, exit_code, write_csv, Outcome};

#[derive(Parser)]
#[command(name = "roundelim", version, about = "Exact communication protocols, Hamming-scheme spectra and Lovász theta certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Emit the JSON report (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit the result table as CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance for floating-point checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Constant c of the cover-free family size bound.
    #[arg(long = "constant-c", global = true, default_value_t = 1.0)]
    constant_c: f64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct Nd {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spectrum of H(n,d): the eigenvalues are the Krawtchouk values K_d^n(x)
    /// with multiplicity C(n,x). Checks the multiplicity sum, the zero trace,
    /// lambda_max = C(n,d) and, with --dense, a dense eigensolve.
    Spectrum {
        #[command(flatten)]
        nd: Nd,
        /// Compare with a dense eigensolve of the adjacency matrix (n ≤ 12).
        #[arg(long)]
        dense: bool,
    },
    /// Theta of the complement of H(n,d) from the closed form
    /// 1 − C(n,d)/lambda_min, checked to lie between 1 and the dimension of
    /// the padded orthonormal representation; small n also get explicit
    /// primal and dual certificates.
    Theta {
        #[command(flatten)]
        nd: Nd,
    },
    /// Smallest root of K_d^n from the Levenshtein tridiagonal matrix,
    /// checked against [n/2 − √((n−d)d), n/2] and the first integer sign change.
    Root {
        #[command(flatten)]
        nd: Nd,
    },
    /// Lower bound on log2 of the orthogonal rank of H(n,d) via the
    /// smallest-eigenvalue bound, or with --alpha the linear growth rate
    /// (H(α) + H(1/2 − √((1−α)α)) − 1)/2 and the entropy gap.
    BoundXi {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Exact rational Delsarte LP for theta' of the complement of G_K(n),
    /// with a checked optimality certificate and the bound optimum ≤ 2n.
    LpThetaPrime {
        #[arg(long)]
        n: u64,
        /// Keep only these constraint degrees (comma separated).
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u64>>,
        /// Write the LP in text form to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Orthonormal representations and their checks.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Exact protocols simulated on every measurement branch.
    #[command(subcommand)]
    Protocol(ProtoCmd),
    /// Collapses multi-round classical promise-equality protocols to a
    /// single message no longer than the original transcript; both are
    /// checked on every promise pair.
    Collapse {
        /// Fixtures to collapse (default: all three multi-round fixtures).
        #[arg(long, value_enum, value_delimiter = ',')]
        fixture: Vec<CollapseFixture>,
        /// Graph for the colouring fixture (adjacency-list file).
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Compiles a few-qubit protocol into a one-round classical protocol by
    /// quantizing Gram coefficients to 2l+4 bits; checks every estimated
    /// outcome probability is within 1/8 and the > 1/2 rule decides correctly.
    Kremer {
        /// Fixtures to compile (default: all).
        #[arg(long, value_enum, value_delimiter = ',')]
        fixture: Vec<KremerFixture>,
        /// Input length for the Fourier fixture.
        #[arg(long, default_value_t = 4)]
        n: u64,
        /// Graph for the colouring fixture (adjacency-list file).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Bits per real component (default 2l+4).
        #[arg(long)]
        bits: Option<usize>,
        /// Also report deviation at each of these precisions.
        #[arg(long, value_delimiter = ',')]
        sweep_bits: Vec<usize>,
    },
    /// Closed-form communication bounds for list problems, with the check
    /// lower ≤ upper; optionally the Kleitman diameter bound and the
    /// transcript cover-free family of fixture protocols.
    Bounds {
        #[arg(long = "N")]
        big_n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        chi: Option<u64>,
        #[arg(long)]
        omega: Option<u64>,
        /// Value used for every O(1) term.
        #[arg(long, default_value_t = 1.0)]
        slack: f64,
        /// Kleitman check dimension (with --r).
        #[arg(long, requires = "r")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        r: Option<usize>,
        /// Check that fixture list protocols on all k-subsets of [N] yield
        /// (k−1)-cover-free transcript families.
        #[arg(long)]
        cover_free: bool,
    },
    /// Parameter sweeps over the library's invariants.
    Sweep {
        #[arg(value_enum)]
        target: SweepTarget,
        /// Largest parameter swept (n, vertex count, or grid size).
        #[arg(long)]
        max_n: Option<u64>,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// x ↦ n^{-1/2} Σ (−1)^{x_i} e_i, orthonormal on H(n, n/2).
    Fourier {
        #[arg(long)]
        n: u64,
        /// Include the vectors in the report.
        #[arg(long)]
        vectors: bool,
    },
    /// Padded Fourier representation of H(n, n/2 − l) in dimension 2^{2l}(n − 2l).
    Padded {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        vectors: bool,
    },
    /// Polynomial representation of G_K(n) whose Gram entries vanish at all
    /// distances ≥ n/2; reports the monomial count against 2^{H(1/4)n+1} and
    /// the binomial slack bound.
    GkPoly {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        vectors: bool,
    },
    /// Unit norms and orthogonality on every edge of a graph for a
    /// representation file; --certificate also derives the dual theta bound.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        certificate: bool,
    },
}

#[derive(Args)]
struct EqOpts {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Sweep inputs instead of running --x/--y.
    #[arg(long, value_enum)]
    sweep: Option<Scope>,
    /// With --sweep all, enumerate every pair rather than one per shift.
    #[arg(long)]
    full: bool,
    /// Promise pairs drawn by --sweep random.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args)]
struct ListOpts {
    #[arg(long)]
    n: usize,
    /// List distance; the list is a clique of H(n,d) containing x.
    #[arg(long)]
    d: Option<usize>,
    /// Alice's element (default 0).
    #[arg(long)]
    x: Option<String>,
    /// Bob's list as comma-separated hex strings.
    #[arg(long, value_delimiter = ',')]
    list: Option<Vec<String>>,
    /// Run with every list element as Alice's input.
    #[arg(long, value_enum)]
    sweep: Option<Scope>,
}

#[derive(Subcommand)]
enum ProtoCmd {
    /// Two-round equality on n-bit strings at distance 0 or n/4 with
    /// 2⌈log n⌉+1 qubits: Bob sends U_y|s⟩, Alice applies U_x and the
    /// diffusion, measures and reports (i, x_i).
    Eq2 {
        #[command(flatten)]
        o: EqOpts,
    },
    /// Equality at distance d ∈ [n/4, n/2) by padding to 4d bits and running
    /// the two-round protocol.
    EqPad {
        #[command(flatten)]
        o: EqOpts,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Equality at distance d < n/4 by exact Grover search split across
    /// l + 2 messages, target cost (l+2)⌈log n⌉+2 qubits.
    EqMulti {
        #[command(flatten)]
        o: EqOpts,
        #[arg(long)]
        d: usize,
    },
    /// Two-round list protocol: Bob learns x from an equidistant list with
    /// ⌈log n⌉+2 qubits.
    List2 {
        #[command(flatten)]
        o: ListOpts,
    },
    /// Entanglement-assisted list protocol with ⌈log n⌉+3 classical bits.
    ListEnt {
        #[command(flatten)]
        o: ListOpts,
    },
    /// Non-signaling-box list protocol with ⌈log |L|⌉ classical bits; box
    /// marginals are checked to be uniform.
    ListNs {
        #[command(flatten)]
        o: ListOpts,
        /// Box labels for the list positions (a permutation of 0..|L|).
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<usize>>,
    },
}

fn eq_args(kind: EqKind, o: EqOpts, d: usize, seed: u64) -> EqArgs {
    EqArgs { kind, n: o.n, d, x: o.x, y: o.y, scope: o.sweep, full: o.full, samples: o.samples, seed }
}

fn list_args(kind: ListKind, o: ListOpts, labels: Option<Vec<usize>>) -> ListArgs {
    ListArgs { kind, n: o.n, d: o.d, x: o.x, list: o.list, labels, all: o.sweep.is_some() }
}

fn pad_distance(n: usize, d: Option<usize>, alpha: Option<f64>) -> roundelim::Result<usize> {
    match (d, alpha) {
        (Some(d), _) => Ok(d),
        (None, Some(a)) => {
            let d = a * n as f64;
            if (d - d.round()).abs() > 1e-9 {
                return Err(roundelim::Error::Domain(format!("alpha·n = {d} is not an integer")));
            }
            Ok(d.round() as usize)
        }
        (None, None) => Err(roundelim::Error::Domain("one of --d or --alpha is required".into())),
    }
}

fn run(cmd: Cmd, g: &Global) -> (String, Value, roundelim::Result<Outcome>) {
    let tol = g.tol;
    match cmd {
        Cmd::Spectrum { nd, dense } => {
            ("spectrum".into(), json!({"n": nd.n, "d": nd.d, "dense": dense}), spectrum_cmd(nd.n, nd.d, dense, tol.unwrap_or(1e-6)))
        }
        Cmd::Theta { nd } => ("theta".into(), json!({"n": nd.n, "d": nd.d}), theta_cmd(nd.n, nd.d, tol.unwrap_or(1e-8))),
        Cmd::Root { nd } => ("root".into(), json!({"n": nd.n, "d": nd.d}), root_cmd(nd.n, nd.d)),
        Cmd::BoundXi { n, d, alpha } => ("bound-xi".into(), json!({"n": n, "d": d, "alpha": alpha}), bound_xi_cmd(n, d, alpha)),
        Cmd::LpThetaPrime { n, degrees, export } => {
            let p = json!({"n": n, "degrees": degrees});
            ("lp-theta-prime".into(), p, lp_cmd(n, degrees, export.as_deref()))
        }
        Cmd::Rep(r) => {
            let t = tol.unwrap_or(1e-9);
            match r {
                RepCmd::Fourier { n, vectors } => ("rep fourier".into(), json!({"n": n}), rep_fourier(n, t, vectors)),
                RepCmd::Padded { n, ell, d, vectors } => {
                    ("rep padded".into(), json!({"n": n, "ell": ell, "d": d}), rep_padded(n, ell, d, t, vectors))
                }
                RepCmd::GkPoly { n, vectors } => ("rep gk-poly".into(), json!({"n": n}), rep_gk(n, t, vectors)),
                RepCmd::Check { graph, rep, certificate } => {
                    let p = json!({"graph": graph.display().to_string(), "rep": rep.display().to_string()});
                    ("rep check".into(), p, rep_check(&graph, &rep, t, certificate))
                }
            }
        }
        Cmd::Protocol(p) => {
            let seed = g.seed;
            match p {
                ProtoCmd::Eq2 { o } => {
                    let d = o.n / 4;
                    let params = eq_params(&o, d, seed);
                    ("protocol eq2".into(), params, protocol_eq(eq_args(EqKind::Two, o, d, seed)))
                }
                ProtoCmd::EqPad { o, d, alpha } => match pad_distance(o.n, d, alpha) {
                    Ok(d) => {
                        let params = eq_params(&o, d, seed);
                        ("protocol eq-pad".into(), params, protocol_eq(eq_args(EqKind::Padded, o, d, seed)))
                    }
                    Err(e) => ("protocol eq-pad".into(), json!({"n": o.n}), Err(e)),
                },
                ProtoCmd::EqMulti { o, d } => {
                    let params = eq_params(&o, d, seed);
                    ("protocol eq-multi".into(), params, protocol_eq(eq_args(EqKind::Multi, o, d, seed)))
                }
                ProtoCmd::List2 { o } => {
                    let params = list_params(&o);
                    ("protocol list2".into(), params, protocol_list(list_args(ListKind::Two, o, None)))
                }
                ProtoCmd::ListEnt { o } => {
                    let params = list_params(&o);
                    ("protocol list-ent".into(), params, protocol_list(list_args(ListKind::Entangled, o, None)))
                }
                ProtoCmd::ListNs { o, labels } => {
                    let mut params = list_params(&o);
                    params["labels"] = json!(labels);
                    ("protocol list-ns".into(), params, protocol_list(list_args(ListKind::NonSignaling, o, labels)))
                }
            }
        }
        Cmd::Collapse { fixture, graph } => {
            let fixtures = if fixture.is_empty() {
                vec![CollapseFixture::ParityExchange, CollapseFixture::Bisection, CollapseFixture::PingPong]
            } else {
                fixture
            };
            let p = json!({"fixtures": fixtures.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>()});
            ("collapse".into(), p, collapse_cmd(&fixtures, graph.as_deref()))
        }
        Cmd::Kremer { fixture, n, graph, bits, sweep_bits } => {
            let fixtures = if fixture.is_empty() {
                vec![KremerFixture::Eq2, KremerFixture::Coloring, KremerFixture::Fourier]
            } else {
                fixture
            };
            let p = json!({
                "fixtures": fixtures.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>(),
                "n": n,
                "bits": bits,
                "sweep_bits": sweep_bits,
            });
            ("kremer".into(), p, kremer_cmd(&fixtures, n, graph.as_deref(), bits, &sweep_bits))
        }
        Cmd::Bounds { big_n, k, chi, omega, slack, n, r, cover_free } => {
            let p = json!({
                "N": big_n, "k": k, "chi": chi, "omega": omega, "constant_c": g.constant_c,
                "slack": slack, "kleitman_n": n, "kleitman_r": r, "cover_free": cover_free,
            });
            let a = BoundsArgs {
                big_n,
                k,
                chi,
                omega,
                c: g.constant_c,
                slack,
                kleitman: n.zip(r),
                cover_free,
                seed: g.seed,
            };
            ("bounds".into(), p, bounds_cmd(a))
        }
        Cmd::Sweep { target, max_n } => {
            let p = json!({"target": format!("{target:?}"), "max_n": max_n, "seed": g.seed, "tol": tol});
            ("sweep".into(), p, sweep_cmd(target, max_n, g.seed, tol))
        }
    }
}

fn eq_params(o: &EqOpts, d: usize, seed: u64) -> Value {
    json!({
        "n": o.n, "d": d, "x": o.x, "y": o.y,
        "sweep": o.sweep.map(|s| format!("{s:?}").to_lowercase()),
        "full": o.full, "samples": o.samples, "seed": seed,
    })
}

fn list_params(o: &ListOpts) -> Value {
    json!({
        "n": o.n, "d": o.d, "x": o.x, "list": o.list,
        "sweep": o.sweep.map(|s| format!("{s:?}").to_lowercase()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let csv = cli.global.csv;
    let (command, params, res) = run(cli.cmd, &cli.global);
    let elapsed = start.elapsed();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match res {
        Ok(o) => {
            let written = if csv {
                write_csv(&mut out, &o.table)
            } else {
                serde_json::to_writer_pretty(&mut out, &envelope(&command, params, &o)).map_err(std::io::Error::from).and_then(|_| writeln!(out))
            };
            if let Err(e) = written {
                eprintln!("write failed: {e}");
                return ExitCode::from(2);
            }
            if o.pass() {
                eprintln!("{command}: pass ({elapsed:.2?})");
                0
            } else {
                for f in &o.failures {
                    eprintln!("{command}: FAILED invariant: {f}");
                }
                1
            }
        }
        Err(e) => {
            if !csv {
                let _ = serde_json::to_writer_pretty(&mut out, &error_envelope(&command, params, &e));
                let _ = writeln!(out);
            }
            eprintln!("{command}: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code)
}
