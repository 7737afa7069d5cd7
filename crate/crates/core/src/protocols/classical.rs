//! Deterministic classical protocols, the one-round collapse for promise
//! equality, and fixture protocols.

use std::fmt::Debug;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::{ceil_log2, BitString};
use crate::error::{domain, Error, Result};
use crate::graphs::{optimal_coloring, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Speaker {
    Alice,
    Bob,
}

pub type AliceMsg<A> = Arc<dyn Fn(&A, &[BitString]) -> BitString + Send + Sync>;
pub type BobMsg<B> = Arc<dyn Fn(&B, &[BitString]) -> BitString + Send + Sync>;
pub type OutputFn<B, O> = Arc<dyn Fn(&B, &[BitString]) -> O + Send + Sync>;

#[derive(Clone)]
pub enum RoundFn<A, B> {
    Alice(AliceMsg<A>),
    Bob(BobMsg<B>),
}

/// One round: who speaks, how many bits, and the message as a function of the
/// speaker's input and the transcript so far.
#[derive(Clone)]
pub struct Round<A, B> {
    pub len: usize,
    pub message: RoundFn<A, B>,
}

impl<A, B> Round<A, B> {
    pub fn speaker(&self) -> Speaker {
        match self.message {
            RoundFn::Alice(_) => Speaker::Alice,
            RoundFn::Bob(_) => Speaker::Bob,
        }
    }
}

/// A deterministic protocol with fixed per-round message lengths; Bob
/// produces the output.
#[derive(Clone)]
pub struct ClassicalProtocol<A, B, O> {
    pub name: String,
    pub rounds: Vec<Round<A, B>>,
    pub output: OutputFn<B, O>,
}

impl<A, B, O> ClassicalProtocol<A, B, O> {
    pub fn new(name: &str, output: impl Fn(&B, &[BitString]) -> O + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), rounds: Vec::new(), output: Arc::new(output) }
    }

    pub fn alice(mut self, len: usize, f: impl Fn(&A, &[BitString]) -> BitString + Send + Sync + 'static) -> Self {
        self.rounds.push(Round { len, message: RoundFn::Alice(Arc::new(f)) });
        self
    }

    pub fn bob(mut self, len: usize, f: impl Fn(&B, &[BitString]) -> BitString + Send + Sync + 'static) -> Self {
        self.rounds.push(Round { len, message: RoundFn::Bob(Arc::new(f)) });
        self
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    /// Total transcript length; every transcript has this length.
    pub fn transcript_len(&self) -> usize {
        self.rounds.iter().map(|r| r.len).sum()
    }

    /// Runs the protocol, checking every message length.
    pub fn execute(&self, a: &A, b: &B) -> Result<(Vec<BitString>, O)> {
        let mut transcript = Vec::with_capacity(self.rounds.len());
        for (i, r) in self.rounds.iter().enumerate() {
            let m = match &r.message {
                RoundFn::Alice(f) => f(a, &transcript),
                RoundFn::Bob(f) => f(b, &transcript),
            };
            if m.len() != r.len {
                return Err(Error::Assertion(format!(
                    "{}: round {i} sent {} bits, declared {}",
                    self.name,
                    m.len(),
                    r.len
                )));
            }
            transcript.push(m);
        }
        let out = (self.output)(b, &transcript);
        Ok((transcript, out))
    }
}

fn bits(len: usize, v: u64) -> BitString {
    BitString::new(len, v).expect("message fits its declared length")
}

/// Splits a concatenated message into chunks of the given lengths.
fn split(msg: &BitString, lens: &[usize]) -> Vec<BitString> {
    let mut out = Vec::with_capacity(lens.len());
    let mut off = 0;
    for &l in lens {
        let mask = if l == 64 { u64::MAX } else { (1u64 << l) - 1 };
        out.push(bits(l, (msg.word() >> off) & mask));
        off += l;
    }
    out
}

fn concat(parts: &[BitString]) -> BitString {
    let mut word = 0u64;
    let mut off = 0;
    for p in parts {
        word |= p.word() << off;
        off += p.len();
    }
    bits(off, word)
}

#[derive(Debug, Clone, Serialize)]
pub struct CollapseReport {
    pub original_rounds: usize,
    pub original_length: usize,
    pub collapsed_length: usize,
    pub pairs_checked: usize,
    pub pass: bool,
}

/// Collapses a promise-equality protocol to one round.
///
/// Alice sends the whole transcript she would see if Bob's input equalled
/// hers. Bob recomputes each of his own messages against that transcript and
/// answers "not equal" (`false`) at the first mismatch; otherwise he applies
/// the original output rule. `inputs` is the input set and `promise` lists the
/// distinct pairs; both protocols are checked on every equal and promise pair.
pub fn round_collapse<X>(
    p: &ClassicalProtocol<X, X, bool>,
    inputs: &[X],
    promise: &[(X, X)],
) -> Result<(ClassicalProtocol<X, X, bool>, CollapseReport)>
where
    X: Clone + PartialEq + Debug + Send + Sync + 'static,
{
    let check = |q: &ClassicalProtocol<X, X, bool>| -> Result<usize> {
        let mut n = 0;
        for x in inputs {
            if !q.execute(x, x)?.1 {
                return Err(Error::Assertion(format!("{}: answers \"not equal\" on equal inputs {x:?}", q.name)));
            }
            n += 1;
        }
        for (x, y) in promise {
            if x == y {
                return domain(format!("promise pair ({x:?}, {y:?}) is not distinct"));
            }
            if q.execute(x, y)?.1 {
                return Err(Error::Assertion(format!("{}: answers \"equal\" on promise pair ({x:?}, {y:?})", q.name)));
            }
            n += 1;
        }
        Ok(n)
    };
    check(p)?;

    let lens: Vec<usize> = p.rounds.iter().map(|r| r.len).collect();
    let total = p.transcript_len();
    if total > 64 {
        return Err(Error::SizeCap { what: "collapsed message bits", value: total, cap: 64 });
    }
    let rounds = p.rounds.clone();
    let rounds_b = p.rounds.clone();
    let output = p.output.clone();
    let lens_b = lens.clone();
    let collapsed = ClassicalProtocol::new(&format!("{}-collapsed", p.name), move |y: &X, t: &[BitString]| {
        let parts = split(&t[0], &lens_b);
        for (i, r) in rounds_b.iter().enumerate() {
            if let RoundFn::Bob(f) = &r.message {
                if f(y, &parts[..i]) != parts[i] {
                    return false;
                }
            }
        }
        output(y, &parts)
    })
    .alice(total, move |x: &X, _| {
        let mut t: Vec<BitString> = Vec::with_capacity(rounds.len());
        for r in &rounds {
            let m = match &r.message {
                RoundFn::Alice(f) | RoundFn::Bob(f) => f(x, &t),
            };
            t.push(m);
        }
        concat(&t)
    });
    let pairs_checked = check(&collapsed)?;
    let report = CollapseReport {
        original_rounds: p.round_count(),
        original_length: total,
        collapsed_length: collapsed.transcript_len(),
        pairs_checked,
        pass: collapsed.transcript_len() <= total,
    };
    Ok((collapsed, report))
}

/// One-round protocol: Alice sends the colour of her vertex in an optimal
/// colouring; Bob answers "equal" iff it is his colour. Correct on edges.
pub fn coloring_protocol(g: &Graph) -> Result<ClassicalProtocol<usize, usize, bool>> {
    let colors = Arc::new(optimal_coloring(g)?);
    let k = colors.iter().max().map_or(1, |m| m + 1);
    let len = ceil_log2(k).max(1);
    let cb = colors.clone();
    Ok(ClassicalProtocol::new("coloring", move |y: &usize, t: &[BitString]| t[0].word() == cb[*y] as u64)
        .alice(len, move |x: &usize, _| bits(len, colors[*x] as u64)))
}

fn bit(v: u64, i: usize) -> u64 {
    v >> i & 1
}

/// Two rounds on 4-bit inputs, correct on distance-2 pairs. Bob sends
/// `y_0 ⊕ y_1`; Alice returns whether her own parity differs, `x_0` and `x_2`.
pub fn parity_exchange_protocol() -> ClassicalProtocol<u64, u64, bool> {
    ClassicalProtocol::new("parity-exchange", |y: &u64, t: &[BitString]| {
        let m = t[1].word();
        bit(m, 0) == 0 && bit(m, 1) == bit(*y, 0) && bit(m, 2) == bit(*y, 2)
    })
    .bob(1, |y: &u64, _| bits(1, bit(*y, 0) ^ bit(*y, 1)))
    .alice(3, |x: &u64, t| {
        let flag = (bit(*x, 0) ^ bit(*x, 1)) ^ t[0].word();
        bits(3, flag | bit(*x, 0) << 1 | bit(*x, 2) << 2)
    })
}

/// Three rounds on 3-bit inputs: Alice sends her high bit, Bob his middle
/// bit, Alice whether the middle bits differ together with her low bit.
pub fn bisection_protocol() -> ClassicalProtocol<u64, u64, bool> {
    ClassicalProtocol::new("bisection", |y: &u64, t: &[BitString]| {
        let m = t[2].word();
        t[0].word() == bit(*y, 2) && bit(m, 0) == 0 && bit(m, 1) == bit(*y, 0)
    })
    .alice(1, |x: &u64, _| bits(1, bit(*x, 2)))
    .bob(1, |y: &u64, _| bits(1, bit(*y, 1)))
    .alice(2, |x: &u64, t| bits(2, (bit(*x, 1) ^ t[1].word()) | bit(*x, 0) << 1))
}

/// Five one- or two-bit rounds on 4-bit inputs, alternating speakers.
pub fn ping_pong_protocol() -> ClassicalProtocol<u64, u64, bool> {
    ClassicalProtocol::new("ping-pong", |y: &u64, t: &[BitString]| {
        let m2 = t[2].word();
        t[0].word() == bit(*y, 0) && bit(m2, 0) == 0 && bit(m2, 1) == bit(*y, 2) && t[4].word() == 0
    })
    .alice(1, |x: &u64, _| bits(1, bit(*x, 0)))
    .bob(1, |y: &u64, _| bits(1, bit(*y, 1)))
    .alice(2, |x: &u64, t| bits(2, (bit(*x, 1) ^ t[1].word()) | bit(*x, 2) << 1))
    .bob(1, |y: &u64, _| bits(1, bit(*y, 3)))
    .alice(1, |x: &u64, t| bits(1, bit(*x, 3) ^ t[3].word()))
}

/// All pairs of `width`-bit values at Hamming distance `d` (both orders).
pub fn distance_pairs(width: usize, d: usize) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for x in 0..1u64 << width {
        for y in 0..1u64 << width {
            if (x ^ y).count_ones() as usize == d {
                out.push((x, y));
            }
        }
    }
    out
}

/// All ordered pairs of distinct values below `n`.
pub fn distinct_pairs(n: u64) -> Vec<(u64, u64)> {
    (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect()
}

/// List-problem protocol: Alice's input is an element of `0..N`, Bob's a list.
pub type ListProtocol = ClassicalProtocol<usize, Vec<usize>, usize>;

/// One round: Alice announces `x` in `⌈log N⌉` bits.
pub fn announce_protocol(universe: usize) -> ListProtocol {
    let len = ceil_log2(universe).max(1);
    ClassicalProtocol::new("announce", |_: &Vec<usize>, t: &[BitString]| t[0].word() as usize)
        .alice(len, move |x: &usize, _| bits(len, *x as u64))
}

/// Bits of positions in which `list` can be told apart: a greedy choice of
/// coordinates that separates all elements.
fn separating_mask(list: &[usize], width: usize) -> u64 {
    let mut mask = 0u64;
    let classes = |m: u64| {
        let mut v: Vec<u64> = list.iter().map(|&e| e as u64 & m).collect();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    while classes(mask) < list.len() {
        let best = (0..width)
            .filter(|&i| mask >> i & 1 == 0)
            .max_by_key(|&i| (classes(mask | 1 << i), std::cmp::Reverse(i)))
            .expect("distinct elements are separated by their bits");
        mask |= 1 << best;
    }
    mask
}

/// Two rounds: Bob sends a coordinate mask separating his list, Alice replies
/// with `x` restricted to it.
pub fn coordinate_query_protocol(universe: usize) -> ListProtocol {
    let width = ceil_log2(universe).max(1);
    ClassicalProtocol::new("coordinate-query", |l: &Vec<usize>, t: &[BitString]| {
        let (mask, reply) = (t[0].word(), t[1].word());
        l.iter().copied().find(|&e| e as u64 & mask == reply).unwrap_or(usize::MAX)
    })
    .bob(width, move |l: &Vec<usize>, _| bits(width, separating_mask(l, width)))
    .alice(width, move |x: &usize, t| bits(width, *x as u64 & t[0].word()))
}

/// Two rounds for lists of size two: Bob names one coordinate where his two
/// elements differ, Alice sends that bit of `x`.
pub fn bit_query_protocol(universe: usize) -> ListProtocol {
    let width = ceil_log2(universe).max(1);
    let ilen = ceil_log2(width).max(1);
    ClassicalProtocol::new("bit-query", |l: &Vec<usize>, t: &[BitString]| {
        let i = t[0].word();
        l.iter().copied().find(|&e| (e as u64 >> i & 1) == t[1].word()).unwrap_or(usize::MAX)
    })
    .bob(ilen, move |l: &Vec<usize>, _| {
        let diff = if l.len() >= 2 { l[0] ^ l[1] } else { 1 };
        bits(ilen, diff.trailing_zeros() as u64)
    })
    .alice(1, |x: &usize, t| bits(1, *x as u64 >> t[0].word() & 1))
}

/// Checks a list protocol on every `(x, L)` with `x ∈ L`.
pub fn check_list_protocol(p: &ListProtocol, lists: &[Vec<usize>]) -> Result<()> {
    for l in lists {
        for &x in l {
            let got = p.execute(&x, l)?.1;
            if got != x {
                return Err(Error::Assertion(format!("{}: on x={x}, L={l:?} Bob outputs {got}", p.name)));
            }
        }
    }
    Ok(())
}
