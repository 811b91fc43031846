//! Words `w ∈ Z^d`, their block intervals, overlap graphs, scattered
//! partitions, string/monomial correspondences and the parameter schedule.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mpoly::{Monomial, VarId, MAX_BLOCK_WIDTH};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("empty word")]
    Empty,
    #[error("entry {0} is zero")]
    ZeroEntry(usize),
    #[error("entry {index} has magnitude {value}, above the supported {max}")]
    EntryTooLarge { index: usize, value: i64, max: u8 },
    #[error("word too long ({0} entries)")]
    TooLong(usize),
    #[error("cannot parse word literal {0:?}")]
    Parse(String),
    #[error("word {0} is not balanced")]
    NotBalanced(String),
    #[error("monomial {0} is not set-multilinear over the requested blocks")]
    NotSetMultilinear(String),
    #[error("no balanced word of length {d} over the alphabet {{{a}, -{k}}}")]
    Infeasible { d: usize, a: u32, k: u32 },
    #[error("alphabet {{{a}, -{k}}} needs 1 <= a < k")]
    BadAlphabet { a: u32, k: u32 },
    #[error("string does not cover the interval of block {0}")]
    StringTooShort(usize),
}

/// A word of nonzero signed entries; indices are 1-based in every API.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Word(Vec<i8>);

impl Word {
    pub fn new(entries: &[i64]) -> Result<Word, WordError> {
        if entries.is_empty() {
            return Err(WordError::Empty);
        }
        if entries.len() > u16::MAX as usize {
            return Err(WordError::TooLong(entries.len()));
        }
        let mut out = Vec::with_capacity(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            if e == 0 {
                return Err(WordError::ZeroEntry(i + 1));
            }
            if e.unsigned_abs() > u64::from(MAX_BLOCK_WIDTH) {
                return Err(WordError::EntryTooLarge {
                    index: i + 1,
                    value: e,
                    max: MAX_BLOCK_WIDTH,
                });
            }
            out.push(e as i8);
        }
        Ok(Word(out))
    }

    /// Parses `"2,-3,2,-1"`.
    pub fn parse(s: &str) -> Result<Word, WordError> {
        let vals: Vec<i64> = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
                if digits.is_empty() || digits.len() > 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                t.parse().ok()
            })
            .collect::<Option<_>>()
            .ok_or_else(|| WordError::Parse(s.to_string()))?;
        Word::new(&vals)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry `w_i` for 1-based `i`.
    pub fn get(&self, i: usize) -> i64 {
        i64::from(self.0[i - 1])
    }

    pub fn entries(&self) -> Vec<i64> {
        self.0.iter().map(|&e| i64::from(e)).collect()
    }

    /// `b = max |w_i|`.
    pub fn bound(&self) -> u32 {
        self.0.iter().map(|e| u32::from(e.unsigned_abs())).max().unwrap_or(0)
    }

    /// Width of block `i`, `|w_i|`.
    pub fn width(&self, i: usize) -> u8 {
        self.0[i - 1].unsigned_abs()
    }

    /// Total number of variables `Σ 2^{|w_i|}`.
    pub fn num_vars(&self) -> u64 {
        self.0.iter().map(|e| 1u64 << e.unsigned_abs()).sum()
    }

    pub fn positives(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.get(i) > 0).collect()
    }

    pub fn negatives(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.get(i) < 0).collect()
    }
}

impl TryFrom<Vec<i64>> for Word {
    type Error = WordError;
    fn try_from(v: Vec<i64>) -> Result<Word, WordError> {
        Word::new(&v)
    }
}

impl From<Word> for Vec<i64> {
    fn from(w: Word) -> Vec<i64> {
        w.entries()
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Word, WordError> {
        Word::parse(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Closed integer interval `[lo, hi]`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u32,
    pub hi: u32,
}

impl Interval {
    pub fn len(&self) -> u32 {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains(&self, t: u32) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// Binary string indexed by a set of positions.
pub type BitString = BTreeMap<u32, bool>;

/// Block intervals of a word.
///
/// `intervals[i-1]` is `A_w^{(i)}` for a positive index and `B_w^{(j)}` for a
/// negative one. When the negative entries have smaller total magnitude the
/// roles are flipped: the negative family plays the x-role (longer strings
/// belong to the y-role family in both cases).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub word: Word,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    pub intervals: Vec<Interval>,
    pub flipped: bool,
}

pub fn derive_blocks(w: &Word) -> BlockLayout {
    let mut intervals = Vec::with_capacity(w.len());
    let (mut pe, mut ne) = (0u32, 0u32);
    for i in 1..=w.len() {
        let len = u32::from(w.width(i));
        let end = if w.get(i) > 0 { &mut pe } else { &mut ne };
        intervals.push(Interval {
            lo: *end + 1,
            hi: *end + len,
        });
        *end += len;
    }
    BlockLayout {
        word: w.clone(),
        pos: w.positives(),
        neg: w.negatives(),
        intervals,
        flipped: ne < pe,
    }
}

impl BlockLayout {
    pub fn interval(&self, i: usize) -> Interval {
        self.intervals[i - 1]
    }

    /// Blocks whose variables play the x-role.
    pub fn x_blocks(&self) -> &[usize] {
        if self.flipped {
            &self.neg
        } else {
            &self.pos
        }
    }

    /// Blocks whose variables play the y-role.
    pub fn y_blocks(&self) -> &[usize] {
        if self.flipped {
            &self.pos
        } else {
            &self.neg
        }
    }

    pub fn is_x_block(&self, i: usize) -> bool {
        (self.word.get(i) > 0) != self.flipped
    }

    /// Variable of block `i` for the string `sigma` over its interval, with
    /// the first position as the most significant bit.
    pub fn var(&self, i: usize, sigma: u32) -> VarId {
        let width = self.word.width(i);
        if self.is_x_block(i) {
            VarId::pos(i as u16, width, sigma)
        } else {
            VarId::neg(i as u16, width, sigma)
        }
    }

    /// All `2^{|w_i|}` variables of block `i` in string order.
    pub fn block_vars(&self, i: usize) -> Vec<VarId> {
        (0..(1u32 << self.word.width(i))).map(|s| self.var(i, s)).collect()
    }

    pub fn x_vars(&self) -> Vec<VarId> {
        self.x_blocks().iter().flat_map(|&i| self.block_vars(i)).collect()
    }

    pub fn y_vars(&self) -> Vec<VarId> {
        self.y_blocks().iter().flat_map(|&i| self.block_vars(i)).collect()
    }

    pub fn all_vars(&self) -> Vec<VarId> {
        (1..=self.word.len()).flat_map(|i| self.block_vars(i)).collect()
    }

    /// Block index of a variable belonging to this word's layout.
    pub fn block_of(&self, v: VarId) -> Option<usize> {
        let (block, width, x_role) = match v {
            VarId::Pos { block, width, .. } => (block as usize, width, true),
            VarId::Neg { block, width, .. } => (block as usize, width, false),
            _ => return None,
        };
        (block >= 1 && block <= self.word.len() && self.word.width(block) == width && self.is_x_block(block) == x_role)
            .then_some(block)
    }

    /// The string written by `sigma` on the interval of block `i`.
    pub fn string_of(&self, i: usize, sigma: u32) -> BitString {
        let iv = self.interval(i);
        let w = iv.len();
        (0..w).map(|t| (iv.lo + t, (sigma >> (w - 1 - t)) & 1 == 1)).collect()
    }

    /// Reads the value of block `i` from a string covering its interval.
    pub fn sigma_from(&self, i: usize, s: &BitString) -> Result<u32, WordError> {
        let iv = self.interval(i);
        let mut sigma = 0u32;
        for t in iv.lo..=iv.hi {
            let bit = *s.get(&t).ok_or(WordError::StringTooShort(i))?;
            sigma = (sigma << 1) | u32::from(bit);
        }
        Ok(sigma)
    }
}

/// Bipartite overlap graph between positive and negative indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapGraph {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    /// Edges `(i, j)` with `i` positive and `j` negative, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl OverlapGraph {
    /// Neighbourhood of any vertex.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(i, j)| {
                if i == v {
                    Some(j)
                } else if j == v {
                    Some(i)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(i, j)| i == v || j == v).count()
    }
}

pub fn overlap_graph(layout: &BlockLayout) -> OverlapGraph {
    let mut edges = Vec::new();
    for &i in &layout.pos {
        for &j in &layout.neg {
            if layout.interval(i).intersects(&layout.interval(j)) {
                edges.push((i, j));
            }
        }
    }
    OverlapGraph {
        pos: layout.pos.clone(),
        neg: layout.neg.clone(),
        edges,
    }
}

pub fn is_balanced(w: &Word) -> bool {
    let layout = derive_blocks(w);
    let g = overlap_graph(&layout);
    !g.pos.is_empty()
        && !g.neg.is_empty()
        && g.pos.iter().chain(g.neg.iter()).all(|&v| g.degree(v) > 0)
}

/// Partition of the x-role blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatteredPartition {
    pub parts: Vec<Vec<usize>>,
}

impl ScatteredPartition {
    pub fn r(&self) -> usize {
        self.parts.len()
    }

    /// Whether neighbourhoods are pairwise disjoint inside every part.
    pub fn is_scattered(&self, g: &OverlapGraph) -> bool {
        self.parts.iter().all(|part| {
            let mut seen = std::collections::BTreeSet::new();
            part.iter().all(|&i| g.neighbours(i).into_iter().all(|j| seen.insert(j)))
        })
    }

    /// Whether the parts exactly cover `blocks`.
    pub fn covers(&self, blocks: &[usize]) -> bool {
        let mut all: Vec<usize> = self.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        all == blocks
    }
}

/// Residue-class partition of the x-role blocks: the `t`-th block (1-based
/// rank) goes to the part `t mod ξ`, where `ξ` is the largest degree among the
/// y-role blocks. Empty parts are dropped.
pub fn scattered_partition(w: &Word) -> Result<ScatteredPartition, WordError> {
    if !is_balanced(w) {
        return Err(WordError::NotBalanced(w.to_string()));
    }
    let layout = derive_blocks(w);
    let g = overlap_graph(&layout);
    let xi = layout.y_blocks().iter().map(|&j| g.degree(j)).max().unwrap_or(1).max(1);
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); xi];
    for (t, &i) in layout.x_blocks().iter().enumerate() {
        // rank t+1 has least residue (t mod ξ) + 1 in [1, ξ]
        parts[t % xi].push(i);
    }
    parts.retain(|p| !p.is_empty());
    let sp = ScatteredPartition { parts };
    debug_assert!(sp.covers(layout.x_blocks()));
    if !sp.is_scattered(&g) {
        return Err(WordError::NotBalanced(w.to_string()));
    }
    Ok(sp)
}

/// For a monomial with exactly one degree-1 variable from each block of a
/// set `S` of same-role blocks, returns `S` and the string `σ(m)` indexed by
/// the union of their intervals.
pub fn sigma_of(layout: &BlockLayout, m: &Monomial) -> Result<(Vec<usize>, BitString), WordError> {
    let bad = || WordError::NotSetMultilinear(m.to_string());
    let mut blocks = Vec::new();
    let mut s = BitString::new();
    let mut role: Option<bool> = None;
    for &(v, e) in m.factors() {
        let i = layout.block_of(v).ok_or_else(bad)?;
        if e != 1 || blocks.contains(&i) {
            return Err(bad());
        }
        let r = layout.is_x_block(i);
        if *role.get_or_insert(r) != r {
            return Err(bad());
        }
        let sigma = match v {
            VarId::Pos { sigma, .. } | VarId::Neg { sigma, .. } => sigma,
            _ => unreachable!(),
        };
        s.extend(layout.string_of(i, sigma));
        blocks.push(i);
    }
    blocks.sort_unstable();
    Ok((blocks, s))
}

/// `m(σ)` for a string over the intervals of the given blocks.
pub fn monomial_of(layout: &BlockLayout, blocks: &[usize], s: &BitString) -> Result<Monomial, WordError> {
    let mut vars = Vec::with_capacity(blocks.len());
    for &i in blocks {
        vars.push(layout.var(i, layout.sigma_from(i, s)?));
    }
    Ok(Monomial::from_vars(vars))
}

/// `m(σ(m)|_{A^S})`: reads the blocks `target` off the string of `m`.
pub fn restrict(layout: &BlockLayout, m: &Monomial, target: &[usize]) -> Result<Monomial, WordError> {
    let (_, s) = sigma_of(layout, m)?;
    monomial_of(layout, target, &s)
}

/// All monomials with one variable from each of the given blocks.
pub fn sml_monomials(layout: &BlockLayout, blocks: &[usize]) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for &i in blocks {
        let vars = layout.block_vars(i);
        out = out
            .iter()
            .flat_map(|m| vars.iter().map(move |&v| m.mul(&Monomial::var(v))))
            .collect();
    }
    out
}

/// Whether `m` has one degree-1 variable from each block of the word.
pub fn is_set_multilinear(layout: &BlockLayout, m: &Monomial) -> bool {
    if m.factors().len() != layout.word.len() {
        return false;
    }
    let mut seen = vec![false; layout.word.len()];
    m.factors().iter().all(|&(v, e)| match layout.block_of(v) {
        Some(i) if e == 1 && !seen[i - 1] => {
            seen[i - 1] = true;
            true
        }
        _ => false,
    })
}

/// Balancedness over the alphabet `{a, −k}` depends only on the numbers of
/// positive (`p`) and negative (`q`) entries, since the intervals of each
/// family are laid out consecutively regardless of interleaving.
fn counts_balanced(p: u64, q: u64, a: u64, k: u64) -> bool {
    p >= 1 && q >= 1 && a * (p - 1) < k * q && k * (q - 1) < a * p
}

/// Generates a balanced word of length `d` over `{a, −k}`.
///
/// Greedy: emit `a` while the positive intervals would not run past the
/// end of the next negative interval, otherwise emit `−k`; the last slot is
/// forced negative if no negative entry was emitted. If the greedy counts
/// are unbalanced, the nearest balanced count is laid out by interval start.
pub fn word_gen(d: usize, a: u32, k: u32) -> Result<Word, WordError> {
    if a == 0 || a >= k || k > u32::from(MAX_BLOCK_WIDTH) {
        return Err(WordError::BadAlphabet { a, k });
    }
    let infeasible = WordError::Infeasible { d, a, k };
    if d < 2 {
        return Err(infeasible);
    }
    let (a64, k64) = (u64::from(a), u64::from(k));
    let mut out: Vec<i64> = Vec::with_capacity(d);
    let (mut pe, mut ne) = (0u64, 0u64);
    for t in 0..d {
        let force_neg = t + 1 == d && ne == 0;
        if !force_neg && pe + a64 <= ne + k64 {
            out.push(i64::from(a));
            pe += a64;
        } else {
            out.push(-i64::from(k));
            ne += k64;
        }
    }
    let p = out.iter().filter(|&&e| e > 0).count() as u64;
    if counts_balanced(p, d as u64 - p, a64, k64) {
        return Word::new(&out);
    }
    let best = (1..d as u64)
        .filter(|&p| counts_balanced(p, d as u64 - p, a64, k64))
        .min_by_key(|&c| (c.abs_diff(p), c))
        .ok_or(infeasible)?;
    Word::new(&interleave(best as usize, d - best as usize, a, k))
}

fn interleave(p: usize, q: usize, a: u32, k: u32) -> Vec<i64> {
    let (mut i, mut j) = (0usize, 0usize);
    let mut out = Vec::with_capacity(p + q);
    while i < p || j < q {
        let pos_start = i as u64 * u64::from(a);
        let neg_start = j as u64 * u64::from(k);
        if j == q || (i < p && pos_start <= neg_start) {
            out.push(i64::from(a));
            i += 1;
        } else {
            out.push(-i64::from(k));
            j += 1;
        }
    }
    out
}

/// Whether `{αk, −k}` has `½ ≤ α < 1`.
pub fn alphabet_in_range(ak: u32, k: u32) -> bool {
    ak < k && 2 * ak >= k
}

/// Fibonacci-style table `F(0)=1, F(1)=2, F(i)=F(i−1)+F(i−2)`, saturating.
pub fn fib(i: u32) -> u64 {
    let (mut a, mut b) = (1u64, 2u64);
    for _ in 0..i {
        let c = a.saturating_add(b);
        a = b;
        b = c;
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: String,
    pub delta: u32,
    pub log_n: u64,
    pub d: u64,
    pub g_delta: u64,
    pub lambda: u64,
    pub fib_prefix: Vec<u64>,
    pub k_lo: u64,
    pub k_hi: u64,
    /// Whether `Δ ≤ (log log log n)/4`.
    pub delta_in_range: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamsError {
    #[error("Δ must be at least 1")]
    DeltaZero,
    #[error("n must be at least 16")]
    NTooSmall,
}

/// `⌊x^{1/r}⌋` for `r ≥ 1`.
fn int_root(x: u64, r: u64) -> u64 {
    if r == 1 || x <= 1 {
        return x;
    }
    let r32 = u32::try_from(r).unwrap_or(u32::MAX);
    let mut lo = 1u64;
    let mut hi = x;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        let ok = mid.checked_pow(r32).is_some_and(|v| v <= x);
        if ok {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

pub fn params(n: &BigUint, delta: u32) -> Result<Params, ParamsError> {
    if delta == 0 {
        return Err(ParamsError::DeltaZero);
    }
    if *n < BigUint::from(16u32) {
        return Err(ParamsError::NTooSmall);
    }
    let log_n = n.bits() - 1;
    let d = log_n / 4;
    let g = fib(delta) - 1;
    let lambda = int_root(d, g);
    // 2^{2^{4Δ}} ≤ log n, exactly
    let delta_in_range = 4u64
        .checked_mul(u64::from(delta))
        .filter(|&e| e < 64)
        .map(|e| 1u64 << e)
        .is_some_and(|ee| ee < 64 && (1u64 << ee) <= log_n);
    Ok(Params {
        n: n.to_string(),
        delta,
        log_n,
        d,
        g_delta: g,
        lambda,
        fib_prefix: (0..=delta.max(4)).map(fib).collect(),
        k_lo: log_n.div_ceil(2),
        k_hi: log_n,
        delta_in_range,
    })
}

/// `n = 2^e` as a big integer.
pub fn pow2(e: u64) -> BigUint {
    BigUint::one() << e.to_usize().unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn blocks() {
        let l = derive_blocks(&w("2,-3,2,-1"));
        assert_eq!(l.pos, vec![1, 3]);
        assert_eq!(l.neg, vec![2, 4]);
        assert_eq!(l.interval(1), Interval { lo: 1, hi: 2 });
        assert_eq!(l.interval(3), Interval { lo: 3, hi: 4 });
        assert_eq!(l.interval(2), Interval { lo: 1, hi: 3 });
        assert_eq!(l.interval(4), Interval { lo: 4, hi: 4 });
        assert!(!l.flipped);
        let l = derive_blocks(&w("1,-1"));
        assert_eq!((l.interval(1), l.interval(2)), (Interval { lo: 1, hi: 1 }, Interval { lo: 1, hi: 1 }));
        let l = derive_blocks(&w("3,-1"));
        assert!(l.flipped);
        assert_eq!(l.x_blocks(), &[2]);
        assert!(matches!(Word::parse("1,0"), Err(WordError::ZeroEntry(2))));
    }

    #[test]
    fn overlap_and_balance() {
        let g = overlap_graph(&derive_blocks(&w("2,-3,2,-1")));
        assert_eq!(g.edges, vec![(1, 2), (3, 2), (3, 4)]);
        assert!(is_balanced(&w("2,-3,2,-1")));
        assert!(!is_balanced(&w("2,-3,1,-2")));
        assert!(is_balanced(&w("1,-1")));
    }

    #[test]
    fn partitions() {
        let sp = scattered_partition(&w("1,1,-2,1,1,-2")).unwrap();
        assert_eq!(sp.parts, vec![vec![1, 4], vec![2, 5]]);
        assert_eq!(scattered_partition(&w("1,-1")).unwrap().parts, vec![vec![1]]);
        assert!(scattered_partition(&w("2,-3,1,-2")).is_err());
    }

    #[test]
    fn strings() {
        let l = derive_blocks(&w("1,-1"));
        let m = Monomial::var(l.var(2, 0));
        let (blocks, s) = sigma_of(&l, &m).unwrap();
        assert_eq!(blocks, vec![2]);
        assert_eq!(s, [(1, false)].into());
        let l = derive_blocks(&w("2,-3,2,-1"));
        let m = Monomial::var(l.var(2, 0b101));
        assert_eq!(restrict(&l, &m, &[1]).unwrap(), Monomial::var(l.var(1, 0b10)));
    }

    #[test]
    fn generation() {
        assert_eq!(word_gen(6, 1, 2).unwrap().entries(), vec![1, 1, -2, 1, 1, -2]);
        assert_eq!(word_gen(2, 1, 2).unwrap().entries(), vec![1, -2]);
        assert!(matches!(word_gen(1, 1, 2), Err(WordError::Infeasible { .. })));
        assert!(matches!(word_gen(4, 1, 2), Err(WordError::Infeasible { .. })));
    }

    #[test]
    fn schedule() {
        assert_eq!((0..5).map(fib).collect::<Vec<_>>(), vec![1, 2, 3, 5, 8]);
        let p = params(&pow2(40), 2).unwrap();
        assert_eq!((p.d, p.g_delta, p.lambda), (10, 2, 3));
        let p = params(&pow2(40), 1).unwrap();
        assert_eq!((p.g_delta, p.lambda), (1, p.d));
        assert_eq!((p.k_lo, p.k_hi), (20, 40));
    }
}
