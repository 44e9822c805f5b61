//! The pair-wise independent network: terminals, per-pair key budgets and
//! the ideal pairwise key oracle.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::graph::WeightedGraph;
use crate::{Error, Result};

/// 0-indexed terminal. Terminal `t` here is terminal `t + 1` in 1-indexed notation.
pub type TerminalId = usize;

/// Dense index of a bit in a [`SourceBitBasis`].
pub type BitId = usize;

/// Unordered pair of distinct terminals, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    lo: TerminalId,
    hi: TerminalId,
}

impl Pair {
    /// Panics if `a == b`; use [`Pair::try_new`] for unchecked input.
    pub fn new(a: TerminalId, b: TerminalId) -> Self {
        Self::try_new(a, b).expect("pair endpoints must differ")
    }

    pub fn try_new(a: TerminalId, b: TerminalId) -> Result<Self> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Ok(Pair { lo: a, hi: b }),
            core::cmp::Ordering::Greater => Ok(Pair { lo: b, hi: a }),
            core::cmp::Ordering::Equal => Err(Error::SelfPair(a)),
        }
    }

    pub fn lo(self) -> TerminalId {
        self.lo
    }

    pub fn hi(self) -> TerminalId {
        self.hi
    }

    pub fn contains(self, t: TerminalId) -> bool {
        self.lo == t || self.hi == t
    }

    /// The endpoint that is not `t`. `t` must be an endpoint.
    pub fn other(self, t: TerminalId) -> TerminalId {
        debug_assert!(self.contains(t));
        if self.lo == t {
            self.hi
        } else {
            self.lo
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// Node count plus the number of shared secret bits available to each pair.
///
/// Absent pairs have budget 0; setting a budget of 0 removes the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    m: usize,
    budgets: BTreeMap<Pair, u64>,
}

impl NetworkSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::TooFewTerminals(m));
        }
        Ok(NetworkSpec {
            m,
            budgets: BTreeMap::new(),
        })
    }

    /// Builds a spec from `(i, j, bits)` triples. Later triples for the same pair win.
    pub fn from_budgets(m: usize, budgets: &[(TerminalId, TerminalId, u64)]) -> Result<Self> {
        let mut spec = Self::new(m)?;
        for &(i, j, bits) in budgets {
            spec.set_budget(i, j, bits)?;
        }
        Ok(spec)
    }

    /// Complete network on `m` terminals with every budget equal to `bits`.
    pub fn complete(m: usize, bits: u64) -> Result<Self> {
        let mut spec = Self::new(m)?;
        for i in 0..m {
            for j in i + 1..m {
                spec.set_budget(i, j, bits)?;
            }
        }
        Ok(spec)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn check_terminal(&self, t: TerminalId) -> Result<()> {
        if t < self.m {
            Ok(())
        } else {
            Err(Error::TerminalOutOfRange {
                terminal: t,
                m: self.m,
            })
        }
    }

    pub fn set_budget(&mut self, i: TerminalId, j: TerminalId, bits: u64) -> Result<()> {
        self.check_terminal(i)?;
        self.check_terminal(j)?;
        let pair = Pair::try_new(i, j)?;
        if bits == 0 {
            self.budgets.remove(&pair);
        } else {
            self.budgets.insert(pair, bits);
        }
        Ok(())
    }

    pub fn budget(&self, i: TerminalId, j: TerminalId) -> u64 {
        match Pair::try_new(i, j) {
            Ok(pair) => self.budgets.get(&pair).copied().unwrap_or(0),
            Err(_) => 0,
        }
    }

    /// Pairs with a positive budget, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (Pair, u64)> + '_ {
        self.budgets.iter().map(|(&p, &b)| (p, b))
    }

    pub fn total_budget(&self) -> u64 {
        self.budgets.values().sum()
    }

    /// The first pair with positive budget that does not involve terminal 0, if any.
    pub fn non_star_pair(&self) -> Option<Pair> {
        self.budgets.keys().copied().find(|p| p.lo() != 0)
    }

    pub fn graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.m);
        for (pair, bits) in self.pairs() {
            g.set_weight(pair.lo(), pair.hi(), bits);
        }
        g
    }
}

/// Identity of one bit in the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisLabel {
    /// Bit `index` of the pairwise key of `pair`.
    Key { pair: Pair, index: u64 },
    /// The `index`-th private random bit drawn by `terminal`.
    Local { terminal: TerminalId, index: u64 },
}

impl BasisLabel {
    /// Whether `t` knows this bit before any public communication.
    pub fn known_to(&self, t: TerminalId) -> bool {
        match *self {
            BasisLabel::Key { pair, .. } => pair.contains(t),
            BasisLabel::Local { terminal, .. } => terminal == t,
        }
    }
}

/// `k<lo>-<hi>.<index>` for key bits, `r<terminal>.<index>` for local bits.
impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Key { pair, index } => write!(f, "k{}.{}", pair, index),
            BasisLabel::Local { terminal, index } => write!(f, "r{}.{}", terminal, index),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseLabelError;

impl fmt::Display for ParseLabelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("malformed basis label")
    }
}

impl FromStr for BasisLabel {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let (head, index) = s.split_once('.').ok_or(ParseLabelError)?;
        let index: u64 = index.parse().map_err(|_| ParseLabelError)?;
        if let Some(pair) = head.strip_prefix('k') {
            let (a, b) = pair.split_once('-').ok_or(ParseLabelError)?;
            let a: TerminalId = a.parse().map_err(|_| ParseLabelError)?;
            let b: TerminalId = b.parse().map_err(|_| ParseLabelError)?;
            if a >= b {
                return Err(ParseLabelError);
            }
            Ok(BasisLabel::Key {
                pair: Pair::new(a, b),
                index,
            })
        } else if let Some(t) = head.strip_prefix('r') {
            let terminal = t.parse().map_err(|_| ParseLabelError)?;
            Ok(BasisLabel::Local { terminal, index })
        } else {
            Err(ParseLabelError)
        }
    }
}

/// Every independent uniform bit of a run, with its realized value.
///
/// All key bits, transcript bits and group-key bits are XORs of these.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceBitBasis {
    labels: Vec<BasisLabel>,
    values: Vec<bool>,
    index: BTreeMap<BasisLabel, BitId>,
}

impl SourceBitBasis {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: BitId) -> Option<BasisLabel> {
        self.labels.get(id).copied()
    }

    pub fn id_of(&self, label: &BasisLabel) -> Option<BitId> {
        self.index.get(label).copied()
    }

    pub fn value(&self, id: BitId) -> Option<bool> {
        self.values.get(id).copied()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    fn push(&mut self, label: BasisLabel, value: bool) -> BitId {
        let id = self.labels.len();
        let prev = self.index.insert(label, id);
        assert!(prev.is_none(), "duplicate basis label {label}");
        self.labels.push(label);
        self.values.push(value);
        id
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct KeySlot {
    start: BitId,
    len: usize,
    cursor: usize,
}

/// Bits handed out by [`PairwiseKeyStore::consume_bits`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsumedBits {
    pub ids: Range<BitId>,
    pub bits: Vec<bool>,
}

/// Ideal pairwise secret keys with per-pair consumption cursors.
///
/// Key bits for the pair `{i, j}` (with `i < j`) are read LSB-first from
/// successive 64-bit outputs of ChaCha20 seeded with `seed_from_u64(seed)`
/// on stream `(i << 32) | j`, so distinct pairs draw from disjoint streams
/// and a `(spec, seed)` combination always reproduces the same store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseKeyStore {
    m: usize,
    basis: SourceBitBasis,
    keys: BTreeMap<Pair, KeySlot>,
    local_counts: BTreeMap<TerminalId, u64>,
}

/// Stream id used for the private randomness of `terminal`.
pub(crate) fn local_stream(terminal: TerminalId) -> u64 {
    (1 << 63) | terminal as u64
}

fn pair_stream(pair: Pair) -> u64 {
    ((pair.lo() as u64) << 32) | pair.hi() as u64
}

/// `count` bits from the given ChaCha20 stream, LSB-first per 64-bit word.
pub(crate) fn stream_bits(seed: u64, stream: u64, count: usize) -> Vec<bool> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut bits = Vec::with_capacity(count);
    let mut word = 0u64;
    for k in 0..count {
        if k % 64 == 0 {
            word = rng.next_u64();
        }
        bits.push((word >> (k % 64)) & 1 == 1);
    }
    bits
}

impl PairwiseKeyStore {
    /// Materializes `budget(i, j)` uniformly random bits for every pair.
    pub fn generate(spec: &NetworkSpec, seed: u64) -> Self {
        let mut basis = SourceBitBasis::default();
        let mut keys = BTreeMap::new();
        for (pair, bits) in spec.pairs() {
            let len = usize::try_from(bits).expect("key budget exceeds address space");
            let start = basis.len();
            for (index, bit) in stream_bits(seed, pair_stream(pair), len).into_iter().enumerate() {
                basis.push(
                    BasisLabel::Key {
                        pair,
                        index: index as u64,
                    },
                    bit,
                );
            }
            keys.insert(
                pair,
                KeySlot {
                    start,
                    len,
                    cursor: 0,
                },
            );
        }
        PairwiseKeyStore {
            m: spec.m(),
            basis,
            keys,
            local_counts: BTreeMap::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn basis(&self) -> &SourceBitBasis {
        &self.basis
    }

    pub fn key_len(&self, i: TerminalId, j: TerminalId) -> usize {
        self.slot(i, j).map_or(0, |s| s.len)
    }

    pub fn remaining(&self, i: TerminalId, j: TerminalId) -> usize {
        self.slot(i, j).map_or(0, |s| s.len - s.cursor)
    }

    pub fn cursor(&self, i: TerminalId, j: TerminalId) -> usize {
        self.slot(i, j).map_or(0, |s| s.cursor)
    }

    /// Basis ids of the full key of `{i, j}`, consumed or not.
    pub fn key_ids(&self, i: TerminalId, j: TerminalId) -> Range<BitId> {
        self.slot(i, j)
            .map_or(0..0, |s| s.start..s.start + s.len)
    }

    /// Graph of unconsumed key material.
    pub fn residual_graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.m);
        for (pair, slot) in &self.keys {
            g.set_weight(pair.lo(), pair.hi(), (slot.len - slot.cursor) as u64);
        }
        g
    }

    fn slot(&self, i: TerminalId, j: TerminalId) -> Option<&KeySlot> {
        Pair::try_new(i, j).ok().and_then(|p| self.keys.get(&p))
    }

    /// Hands out the next `count` unused bits of the key shared by `i` and `j`.
    pub fn consume_bits(
        &mut self,
        i: TerminalId,
        j: TerminalId,
        count: usize,
    ) -> Result<ConsumedBits> {
        for t in [i, j] {
            if t >= self.m {
                return Err(Error::TerminalOutOfRange {
                    terminal: t,
                    m: self.m,
                });
            }
        }
        let pair = Pair::try_new(i, j)?;
        let remaining = self.remaining(i, j);
        if count > remaining {
            return Err(Error::InsufficientKeyMaterial {
                pair,
                requested: count,
                remaining,
            });
        }
        if count == 0 {
            return Ok(ConsumedBits {
                ids: 0..0,
                bits: Vec::new(),
            });
        }
        let slot = self.keys.get_mut(&pair).expect("positive remaining implies a slot");
        let ids = slot.start + slot.cursor..slot.start + slot.cursor + count;
        slot.cursor += count;
        let bits = self.basis.values[ids.clone()].to_vec();
        Ok(ConsumedBits { ids, bits })
    }

    /// Registers private random bits drawn by `terminal` and returns their ids.
    pub fn add_local_bits(&mut self, terminal: TerminalId, bits: &[bool]) -> Range<BitId> {
        let counter = self.local_counts.entry(terminal).or_insert(0);
        let start = self.basis.len();
        for &bit in bits {
            self.basis.push(
                BasisLabel::Local {
                    terminal,
                    index: *counter,
                },
                bit,
            );
            *counter += 1;
        }
        start..self.basis.len()
    }

    /// Every basis bit `t` holds privately: its pairwise keys and its own random bits.
    pub fn known_to(&self, t: TerminalId) -> impl Iterator<Item = BitId> + '_ {
        self.basis
            .labels
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.known_to(t))
            .map(|(id, _)| id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> NetworkSpec {
        NetworkSpec::from_budgets(3, &[(0, 1, 5), (0, 2, 4), (1, 2, 3)]).unwrap()
    }

    #[test]
    fn spec_rejects_bad_pairs() {
        assert_eq!(NetworkSpec::new(1), Err(Error::TooFewTerminals(1)));
        let mut spec = NetworkSpec::new(3).unwrap();
        assert_eq!(spec.set_budget(1, 1, 2), Err(Error::SelfPair(1)));
        assert!(matches!(
            spec.set_budget(0, 3, 2),
            Err(Error::TerminalOutOfRange { terminal: 3, m: 3 })
        ));
        spec.set_budget(2, 0, 4).unwrap();
        assert_eq!(spec.budget(0, 2), 4);
        assert_eq!(spec.budget(2, 0), 4);
        spec.set_budget(0, 2, 0).unwrap();
        assert_eq!(spec.pairs().count(), 0);
    }

    #[test]
    fn single_pair_store() {
        let spec = NetworkSpec::from_budgets(2, &[(0, 1, 5)]).unwrap();
        let store = PairwiseKeyStore::generate(&spec, 1);
        assert_eq!(store.key_len(0, 1), 5);
        assert_eq!(store.cursor(0, 1), 0);
        assert_eq!(store.basis().len(), 5);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = PairwiseKeyStore::generate(&triangle(), 7);
        let b = PairwiseKeyStore::generate(&triangle(), 7);
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_pairs_get_distinct_keys() {
        let store = PairwiseKeyStore::generate(&triangle(), 7);
        let k01: Vec<bool> = store.key_ids(0, 1).map(|id| store.basis().value(id).unwrap()).collect();
        let k02: Vec<bool> = store.key_ids(0, 2).map(|id| store.basis().value(id).unwrap()).collect();
        assert_ne!(&k01[..4], &k02[..]);
    }

    #[test]
    fn different_seeds_differ() {
        let spec = NetworkSpec::from_budgets(2, &[(0, 1, 128)]).unwrap();
        let a = PairwiseKeyStore::generate(&spec, 1);
        let b = PairwiseKeyStore::generate(&spec, 2);
        assert_ne!(a.basis().values(), b.basis().values());
    }

    #[test]
    fn consume_in_two_steps() {
        let spec = NetworkSpec::from_budgets(2, &[(0, 1, 5)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 1);
        let all = store.basis().values().to_vec();
        let first = store.consume_bits(0, 1, 3).unwrap();
        let second = store.consume_bits(1, 0, 2).unwrap();
        assert_eq!(first.ids, 0..3);
        assert_eq!(second.ids, 3..5);
        let mut joined = first.bits.clone();
        joined.extend(&second.bits);
        assert_eq!(joined, all);
        assert_eq!(store.remaining(0, 1), 0);
    }

    #[test]
    fn consume_zero_and_too_many() {
        let spec = NetworkSpec::from_budgets(2, &[(0, 1, 5)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 1);
        let none = store.consume_bits(0, 1, 0).unwrap();
        assert!(none.bits.is_empty());
        assert_eq!(store.cursor(0, 1), 0);
        assert_eq!(
            store.consume_bits(0, 1, 6),
            Err(Error::InsufficientKeyMaterial {
                pair: Pair::new(0, 1),
                requested: 6,
                remaining: 5
            })
        );
        assert_eq!(store.cursor(0, 1), 0);
    }

    #[test]
    fn labels_round_trip_through_text() {
        for label in [
            BasisLabel::Key {
                pair: Pair::new(3, 1),
                index: 12,
            },
            BasisLabel::Local {
                terminal: 4,
                index: 0,
            },
        ] {
            let text = alloc::format!("{label}");
            assert_eq!(text.parse::<BasisLabel>(), Ok(label));
        }
        assert!("k2-1.0".parse::<BasisLabel>().is_err());
        assert!("x1.0".parse::<BasisLabel>().is_err());
    }

    #[test]
    fn local_bits_get_fresh_labels() {
        let spec = NetworkSpec::from_budgets(2, &[(0, 1, 2)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 1);
        let a = store.add_local_bits(0, &[true, false]);
        let b = store.add_local_bits(0, &[true]);
        assert_eq!(a, 2..4);
        assert_eq!(b, 4..5);
        assert_eq!(
            store.basis().label(4),
            Some(BasisLabel::Local {
                terminal: 0,
                index: 2
            })
        );
        let known: Vec<_> = store.known_to(1).collect();
        assert_eq!(known, alloc::vec![0, 1]);
    }
}
