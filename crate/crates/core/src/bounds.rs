//! Closed-form bound calculators and the combinatorial checks behind the
//! classical list lower bound.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{cap, domain, Error, Result};
use crate::graphs::{max_clique, Graph};
use crate::numerics::{binom, entropy};
use crate::protocols::classical::{check_list_protocol, ListProtocol, RoundFn, Speaker};

/// Subsets of the ground set `0..ground`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetFamily {
    pub ground: usize,
    pub members: Vec<BTreeSet<usize>>,
}

impl SetFamily {
    pub fn new(ground: usize, members: Vec<BTreeSet<usize>>) -> Result<Self> {
        for m in &members {
            if let Some(&e) = m.iter().find(|&&e| e >= ground) {
                return domain(format!("member element {e} outside ground set 0..{ground}"));
            }
        }
        Ok(Self { ground, members })
    }

    pub fn distinct_members(&self) -> usize {
        self.members.iter().collect::<BTreeSet<_>>().len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverFreeReport {
    pub r: usize,
    pub holds: bool,
    /// `(F_0, [F_1, …, F_r])` with `F_0 ⊆ F_1 ∪ … ∪ F_r`.
    pub witness: Option<(usize, Vec<usize>)>,
}

pub const COVER_FREE_MAX_MEMBERS: usize = 20;
pub const COVER_FREE_MAX_R: usize = 4;

/// Exhaustive `r`-cover-free test over every `F_0` and every `r` others.
pub fn cover_free_check(f: &SetFamily, r: usize) -> Result<CoverFreeReport> {
    let m = f.members.len();
    if r == 0 {
        return domain("cover-freeness needs r ≥ 1");
    }
    if m < r + 1 {
        return domain(format!("family of {m} sets is too small for r = {r}"));
    }
    cap("cover-free family size", m, COVER_FREE_MAX_MEMBERS)?;
    cap("cover-free r", r, COVER_FREE_MAX_R)?;
    for f0 in 0..m {
        let others: Vec<usize> = (0..m).filter(|&i| i != f0).collect();
        let mut pick = Vec::with_capacity(r);
        if let Some(w) = find_cover(f, f0, &others, 0, r, &mut pick) {
            return Ok(CoverFreeReport { r, holds: false, witness: Some((f0, w)) });
        }
    }
    Ok(CoverFreeReport { r, holds: true, witness: None })
}

fn find_cover(f: &SetFamily, f0: usize, others: &[usize], start: usize, r: usize, pick: &mut Vec<usize>) -> Option<Vec<usize>> {
    if pick.len() == r {
        let covered = f.members[f0].iter().all(|e| pick.iter().any(|&i| f.members[i].contains(e)));
        return covered.then(|| pick.clone());
    }
    for i in start..others.len() {
        if others.len() - i < r - pick.len() {
            break;
        }
        pick.push(others[i]);
        if let Some(w) = find_cover(f, f0, others, i + 1, r, pick) {
            return Some(w);
        }
        pick.pop();
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct TranscriptFamily {
    /// Transcripts as `|`-separated binary messages, indexed by ground element.
    pub transcripts: Vec<String>,
    /// Member `x` is the set of transcripts consistent with Alice holding `x`.
    pub family: SetFamily,
    pub distinct_members: usize,
}

/// The transcript family of a correct list protocol: `F_x` holds every
/// transcript `T` of the protocol on which Alice, given `x` and Bob's messages
/// in `T`, would send exactly Alice's messages in `T`.
pub fn transcripts_to_family(p: &ListProtocol, universe: usize, lists: &[Vec<usize>]) -> Result<TranscriptFamily> {
    check_list_protocol(p, lists)?;
    let mut index: BTreeMap<Vec<BitString>, usize> = BTreeMap::new();
    for l in lists {
        for &x in l {
            let t = p.execute(&x, l)?.0;
            let next = index.len();
            index.entry(t).or_insert(next);
        }
    }
    let mut transcripts = vec![String::new(); index.len()];
    for (t, &i) in &index {
        transcripts[i] = t.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("|");
    }
    let members: Vec<BTreeSet<usize>> = (0..universe)
        .map(|x| {
            index
                .iter()
                .filter(|(t, _)| {
                    p.rounds.iter().enumerate().all(|(i, r)| match &r.message {
                        RoundFn::Alice(f) => f(&x, &t[..i]) == t[i],
                        RoundFn::Bob(_) => true,
                    })
                })
                .map(|(_, &i)| i)
                .collect()
        })
        .collect();
    debug_assert!(p.rounds.iter().any(|r| r.speaker() == Speaker::Alice));
    let family = SetFamily::new(index.len(), members)?;
    let distinct_members = family.distinct_members();
    Ok(TranscriptFamily { transcripts, family, distinct_members })
}

/// Inputs to the bound formulas. `chi` and `omega` default to those of
/// `([N] choose k)`, whose list graph is complete.
#[derive(Debug, Clone, Serialize)]
pub struct BoundParams {
    pub big_n: u64,
    pub k: u64,
    pub chi: Option<u64>,
    pub omega: Option<u64>,
    /// The absolute constant `c` of the cover-free bound.
    pub c: f64,
    /// Value substituted for every `O(1)` / `Ω(1)` term.
    pub slack: f64,
}

impl BoundParams {
    pub fn new(big_n: u64, k: u64) -> Self {
        Self { big_n, k, chi: None, omega: None, c: 1.0, slack: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub name: &'static str,
    pub kind: BoundKind,
    pub value: f64,
    /// Configurable constants that enter this value.
    pub constants: Vec<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub params: BoundParams,
    pub rows: Vec<BoundRow>,
    /// Violated `lower ≤ upper` pairs.
    pub ordering_violations: Vec<(String, String)>,
}

fn lg(x: f64) -> f64 {
    x.log2()
}

/// `log log x` with the convention `0` for `x ≤ 2`.
fn lglg(x: f64) -> f64 {
    if x <= 2.0 {
        0.0
    } else {
        x.log2().log2()
    }
}

pub fn bound_formulas(p: &BoundParams) -> Result<BoundReport> {
    if p.big_n < 2 || p.k < 2 || p.k > p.big_n {
        return domain(format!("bounds need 2 ≤ k ≤ N, got N={} k={}", p.big_n, p.k));
    }
    if !(p.c > 0.0) || !p.slack.is_finite() {
        return domain("constants must be finite with c > 0");
    }
    let n = p.big_n as f64;
    let k = p.k as f64;
    let chi = p.chi.unwrap_or(p.big_n) as f64;
    let omega = p.omega.unwrap_or(p.k) as f64;
    if chi < 1.0 || omega < 1.0 {
        return domain("χ and ω must be positive");
    }
    let r = k - 1.0;
    let mut rows = vec![
        BoundRow {
            name: "classical_multiround_lower",
            kind: BoundKind::Lower,
            value: lglg(chi).max(lg(omega)),
            constants: vec![],
        },
        BoundRow {
            name: "list_cover_free_lower",
            kind: BoundKind::Lower,
            value: lglg(n) + 2.0 * lg(r) - (if r >= 2.0 { lg(lg(r)) } else { 0.0 }) - p.slack,
            constants: vec!["slack"],
        },
        BoundRow {
            name: "quantum_multiround_lower",
            kind: BoundKind::Lower,
            value: (p.c * lglg(chi)).max(lg(omega)),
            constants: vec!["c"],
        },
        BoundRow {
            name: "orlitsky_two_round_upper",
            kind: BoundKind::Upper,
            value: lglg(chi) + 3.0 * lg(omega) + 4.0,
            constants: vec![],
        },
        BoundRow {
            name: "nos_four_round_upper",
            kind: BoundKind::Upper,
            value: lglg(chi) + 2.0 * lg(omega) + 3.0 * lglg(omega) + 7.0,
            constants: vec![],
        },
    ];
    if r >= 2.0 {
        let s = p.c * r * r * lg(n) / lg(r);
        rows.push(BoundRow { name: "cover_free_ground_set_lower", kind: BoundKind::Lower, value: s, constants: vec!["c"] });
        rows.push(BoundRow {
            name: "transcript_bits_lower",
            kind: BoundKind::Lower,
            value: lg(s + 1.0) - 1.0,
            constants: vec!["c"],
        });
    }
    let mut ordering_violations = Vec::new();
    let lower = ["classical_multiround_lower", "list_cover_free_lower"];
    let upper = ["orlitsky_two_round_upper", "nos_four_round_upper"];
    let get = |name: &str| rows.iter().find(|r| r.name == name).map(|r| r.value);
    for lo in lower {
        for up in upper {
            if let (Some(a), Some(b)) = (get(lo), get(up)) {
                if a > b + 1e-12 {
                    ordering_violations.push((lo.to_string(), up.to_string()));
                }
            }
        }
    }
    Ok(BoundReport { params: p.clone(), rows, ordering_violations })
}

#[derive(Debug, Clone, Serialize)]
pub struct KleitmanReport {
    pub n: usize,
    pub r: usize,
    #[serde(serialize_with = "crate::numerics::serde_big::ser")]
    pub bound: BigInt,
    /// `"exhaustive"` for `n ≤ 6`, otherwise `"witness"`.
    pub mode: &'static str,
    pub sets_checked: usize,
    pub largest_found: usize,
    pub ball_diameter_ok: bool,
    pub ball_meets_bound: bool,
    pub holds: bool,
    /// A set of diameter `≤ 2r` larger than the bound, if one was found.
    pub violation: Option<Vec<String>>,
}

pub const KLEITMAN_MAX_N: usize = 14;
pub const KLEITMAN_EXHAUSTIVE_N: usize = 6;

fn ball(n: usize, r: usize) -> Vec<u64> {
    (0..1u64 << n).filter(|v| v.count_ones() as usize <= r).collect()
}

fn diameter(set: &[u64]) -> usize {
    let mut d = 0;
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            d = d.max((a ^ b).count_ones() as usize);
        }
    }
    d
}

/// Checks `|A| ≤ Σ_{k≤r} C(n,k)` for sets `A ⊆ {0,1}^n` of diameter `≤ 2r`.
pub fn kleitman_check(n: usize, r: usize, seed: u64) -> Result<KleitmanReport> {
    if n == 0 {
        return domain("kleitman_check needs n ≥ 1");
    }
    cap("kleitman n", n, KLEITMAN_MAX_N)?;
    if 2 * r > n {
        return domain(format!("kleitman_check needs r ≤ n/2, got n={n} r={r}"));
    }
    let bound: BigInt = (0..=r as i64).map(|k| binom(n as u64, k)).sum();
    let bound_usize: usize = (&bound).try_into().map_err(|_| Error::Assertion("bound overflow".into()))?;
    let b = ball(n, r);
    let ball_diameter_ok = diameter(&b) <= 2 * r;
    let ball_meets_bound = b.len() == bound_usize;
    let (mode, sets_checked, best) = if n <= KLEITMAN_EXHAUSTIVE_N {
        let mut g = Graph::new(1 << n)?;
        for u in 0..1u64 << n {
            for v in u + 1..1u64 << n {
                if (u ^ v).count_ones() as usize <= 2 * r {
                    g.add_edge(u as usize, v as usize)?;
                }
            }
        }
        let c: Vec<u64> = max_clique(&g).into_iter().map(|v| v as u64).collect();
        ("exhaustive", 1usize, c)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = b.clone();
        let trials = 20;
        let mut all: Vec<u64> = (0..1u64 << n).collect();
        for _ in 0..trials {
            all.shuffle(&mut rng);
            let start = rng.gen_range(0..all.len());
            let mut set = vec![all[start]];
            for &v in &all {
                if v != set[0] && set.iter().all(|&w| ((v ^ w).count_ones() as usize) <= 2 * r) {
                    set.push(v);
                }
            }
            if set.len() > best.len() {
                best = set;
            }
        }
        ("witness", trials + 1, best)
    };
    let holds = best.len() <= bound_usize && ball_diameter_ok && ball_meets_bound;
    let violation = (best.len() > bound_usize).then(|| {
        best.iter().map(|&v| BitString::new(n, v).expect("fits").to_string()).collect()
    });
    Ok(KleitmanReport {
        n,
        r,
        bound,
        mode,
        sets_checked,
        largest_found: best.len(),
        ball_diameter_ok,
        ball_meets_bound,
        holds,
        violation,
    })
}

/// `H(p) + H(1/2 − √((1−p)p)) − 1`, asserted positive.
pub fn entropy_gap(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return domain(format!("entropy_gap needs 0 < p < 1/2, got {p}"));
    }
    let g = entropy(p)? + entropy(0.5 - ((1.0 - p) * p).sqrt())? - 1.0;
    if g <= 0.0 {
        return Err(Error::Assertion(format!("entropy gap {g} is not positive at p = {p}")));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::k_subsets;
    use crate::protocols::classical::{announce_protocol, bit_query_protocol, coordinate_query_protocol};

    fn fam(sets: &[&[usize]], ground: usize) -> SetFamily {
        SetFamily::new(ground, sets.iter().map(|s| s.iter().copied().collect()).collect()).unwrap()
    }

    #[test]
    fn cover_free_examples() {
        assert!(cover_free_check(&fam(&[&[1], &[2], &[3]], 4), 1).unwrap().holds);
        let rep = cover_free_check(&fam(&[&[1], &[1, 2]], 3), 1).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.witness, Some((0, vec![1])));
        // {0,1},{1,2},{0,2}: 1-cover-free but each is covered by the other two.
        let tri = fam(&[&[0, 1], &[1, 2], &[0, 2]], 3);
        assert!(cover_free_check(&tri, 1).unwrap().holds);
        assert!(!cover_free_check(&tri, 2).unwrap().holds);
        assert!(cover_free_check(&tri, 3).is_err());
        let big = SetFamily::new(30, (0..21).map(|i| BTreeSet::from([i])).collect()).unwrap();
        assert!(matches!(cover_free_check(&big, 1), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn transcript_families() {
        let t = transcripts_to_family(&announce_protocol(4), 4, &k_subsets(4, 2)).unwrap();
        assert_eq!(t.family.members.len(), 4);
        assert!(t.family.members.iter().all(|m| m.len() == 1));
        assert!(cover_free_check(&t.family, 1).unwrap().holds);

        let t = transcripts_to_family(&bit_query_protocol(4), 4, &k_subsets(4, 2)).unwrap();
        assert!(cover_free_check(&t.family, 1).unwrap().holds);
        assert!(t.distinct_members >= 4);

        let t = transcripts_to_family(&coordinate_query_protocol(5), 5, &k_subsets(5, 3)).unwrap();
        assert!(cover_free_check(&t.family, 2).unwrap().holds);
        assert!(t.distinct_members >= 5);
    }

    #[test]
    fn bound_examples() {
        let rep = bound_formulas(&BoundParams::new(1 << 16, 16)).unwrap();
        let orl = rep.rows.iter().find(|r| r.name == "orlitsky_two_round_upper").unwrap();
        assert!((orl.value - 20.0).abs() < 1e-12);
        assert!(rep.ordering_violations.is_empty());
        let rep = bound_formulas(&BoundParams::new(16, 2)).unwrap();
        let cf = rep.rows.iter().find(|r| r.name == "list_cover_free_lower").unwrap();
        assert!((cf.value - (2.0 - 1.0)).abs() < 1e-12);
        assert!(bound_formulas(&BoundParams::new(4, 5)).is_err());
        for row in &rep.rows {
            if row.name == "quantum_multiround_lower" {
                assert_eq!(row.constants, vec!["c"]);
            }
        }
    }

    #[test]
    fn bound_ordering_grid() {
        for i in 0..10 {
            for j in 0..10 {
                let n = 1u64 << (2 + 3 * i);
                let k = (2 + j * 7).min(n);
                let rep = bound_formulas(&BoundParams::new(n, k)).unwrap();
                assert!(rep.ordering_violations.is_empty(), "N={n} k={k}");
            }
        }
    }

    #[test]
    fn kleitman_examples() {
        let r0 = kleitman_check(5, 0, 0).unwrap();
        assert_eq!(r0.bound, BigInt::from(1));
        assert!(r0.holds);
        let r = kleitman_check(4, 1, 0).unwrap();
        assert_eq!(r.bound, BigInt::from(5));
        assert_eq!(r.largest_found, 5);
        assert!(r.holds);
        assert!(kleitman_check(6, 2, 0).unwrap().holds);
        assert!(kleitman_check(10, 2, 7).unwrap().holds);
        // Diameter n is unconstrained: the whole cube beats the bound.
        let full = kleitman_check(4, 2, 0).unwrap();
        assert!(!full.holds);
        assert_eq!(full.largest_found, 16);
        assert!(full.violation.is_some());
        assert!(kleitman_check(15, 1, 0).is_err());
    }

    #[test]
    fn balls_meet_the_bound() {
        for n in 1..=12 {
            for r in 0..=n / 2 {
                let b = ball(n, r);
                assert!(diameter(&b) <= 2 * r);
                let want: BigInt = (0..=r as i64).map(|k| binom(n as u64, k)).sum();
                assert_eq!(BigInt::from(b.len()), want);
            }
        }
    }

    #[test]
    fn entropy_gap_examples() {
        assert!((entropy_gap(0.25).unwrap() - 0.1668).abs() < 1e-3);
        let small = entropy_gap(1e-6).unwrap();
        assert!(small > 0.0 && small < 1e-3);
        assert!(entropy_gap(0.0).is_err());
        assert!(entropy_gap(0.5).is_err());
        for i in 0..10_000 {
            let p = 0.001 + 0.498 * i as f64 / 9_999.0;
            assert!(entropy_gap(p).unwrap() > 0.0);
        }
    }
}
