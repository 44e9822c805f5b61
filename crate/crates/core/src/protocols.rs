//! The three key-agreement protocols, run as deterministic message passing
//! over a simulated public channel.
//!
//! Every public bit is recorded together with the [`LinearForm`] that
//! produced it and the pad bit that masked it, so a run can be audited
//! exactly afterwards (see [`audit`]).

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::bounds::{self, BoundReport};
use crate::gf2::{BitRow, EchelonBasis};
use crate::graph::{self, FlowAssignment, SpanningTree, TieBreak, WeightedGraph, MAX_PARTITION_NODES};
use crate::model::{local_stream, stream_bits, BitId, NetworkSpec, Pair, PairwiseKeyStore};
use crate::secrecy::{self, LinearForm, SecrecyReport};
use crate::{Error, Result, TerminalId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Recipient {
    Terminal(TerminalId),
    Broadcast,
}

impl fmt::Display for Recipient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipient::Terminal(t) => write!(f, "{t}"),
            Recipient::Broadcast => f.write_str("*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicMessage {
    pub sender: TerminalId,
    pub receiver: Recipient,
    pub round: u64,
    pub payload: Vec<bool>,
    /// One form per payload bit.
    pub forms: Vec<LinearForm>,
    /// The one-time-pad bit masking each payload bit.
    pub pads: Vec<BitId>,
}

impl PublicMessage {
    /// A message whose `k`-th bit is `secret[k] ^ pad[k]`.
    fn masked(
        sender: TerminalId,
        receiver: TerminalId,
        round: u64,
        secret: &[(BitId, bool)],
        pad: &[(BitId, bool)],
    ) -> Self {
        debug_assert_eq!(secret.len(), pad.len());
        let mut msg = PublicMessage {
            sender,
            receiver: Recipient::Terminal(receiver),
            round,
            payload: Vec::with_capacity(secret.len()),
            forms: Vec::with_capacity(secret.len()),
            pads: Vec::with_capacity(secret.len()),
        };
        for (&(s_id, s), &(p_id, p)) in secret.iter().zip(pad) {
            msg.payload.push(s ^ p);
            msg.forms.push(LinearForm::from_ids([s_id, p_id]));
            msg.pads.push(p_id);
        }
        msg
    }
}

/// Ordered public messages with non-decreasing rounds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    messages: Vec<PublicMessage>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics if `msg` goes back in time or its forms and payload disagree in length.
    pub fn push(&mut self, msg: PublicMessage) {
        assert_eq!(msg.payload.len(), msg.forms.len(), "one form per payload bit");
        if let Some(last) = self.messages.last() {
            assert!(msg.round >= last.round, "rounds must be non-decreasing");
        }
        self.messages.push(msg);
    }

    pub fn messages(&self) -> &[PublicMessage] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Total number of public bits.
    pub fn bit_count(&self) -> usize {
        self.messages.iter().map(|m| m.payload.len()).sum()
    }

    /// Every public bit as (form, value), in order.
    pub fn bits(&self) -> impl Iterator<Item = (&LinearForm, bool)> + '_ {
        self.messages
            .iter()
            .flat_map(|m| m.forms.iter().zip(m.payload.iter().copied()))
    }

    pub fn forms(&self) -> Vec<LinearForm> {
        self.bits().map(|(f, _)| f.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Broadcast,
    Subgroup { s: TerminalId, t: TerminalId },
    Group,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Protocol::Broadcast => f.write_str("broadcast"),
            Protocol::Subgroup { s, t } => write!(f, "subgroup({s},{t})"),
            Protocol::Group => f.write_str("group"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunStats {
    /// Group protocol: number of spanning trees consumed.
    pub iterations: Option<u64>,
    /// Group protocol: the tree used in each iteration.
    pub trees: Vec<SpanningTree>,
    /// Group protocol: unconsumed budgets when the graph fell apart.
    pub residual: Option<WeightedGraph>,
    /// Sub-group protocol: the flow the key was routed along.
    pub flow: Option<FlowAssignment>,
    /// Matching upper bound; absent when the bound is too costly to enumerate.
    pub bound: Option<BoundReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupKeyResult {
    pub protocol: Protocol,
    pub holders: Vec<TerminalId>,
    pub key: Vec<bool>,
    pub key_forms: Vec<LinearForm>,
    pub transcript: Transcript,
    pub stats: RunStats,
}

impl GroupKeyResult {
    /// `bound - key length`, when the bound is known.
    pub fn gap(&self) -> Option<Ratio<i128>> {
        self.stats.bound.as_ref().map(|b| {
            Ratio::new(i128::from(*b.value.numer()), i128::from(*b.value.denom()))
                - Ratio::from_integer(self.key.len() as i128)
        })
    }
}

fn take(store: &mut PairwiseKeyStore, pair: Pair, count: usize) -> Result<Vec<(BitId, bool)>> {
    let bits = store.consume_bits(pair.lo(), pair.hi(), count)?;
    Ok(bits.ids.zip(bits.bits).collect())
}

/// Star network centered at terminal 0: everyone ends up with the shortest leaf key.
///
/// The center sends `K̄(0,i) ⊕ K(0,i*)` to every other leaf, where `K̄` is
/// the prefix of the same length as `K(0,i*)`. Ties pick the smallest leaf.
pub fn run_broadcast(store: &mut PairwiseKeyStore, spec: &NetworkSpec) -> Result<GroupKeyResult> {
    let bound = bounds::broadcast_bound(spec)?;
    let m = spec.m();
    let (star, len) = (1..m)
        .map(|i| (i, store.key_len(0, i)))
        .min_by_key(|&(i, len)| (len, i))
        .expect("m >= 2");

    let mut transcript = Transcript::new();
    let key = take(store, Pair::new(0, star), len)?;
    if len > 0 {
        for leaf in (1..m).filter(|&i| i != star) {
            let prefix = take(store, Pair::new(0, leaf), len)?;
            transcript.push(PublicMessage::masked(0, leaf, 0, &key, &prefix));
        }
    }
    let result = GroupKeyResult {
        protocol: Protocol::Broadcast,
        holders: (0..m).collect(),
        key: key.iter().map(|&(_, b)| b).collect(),
        key_forms: key.iter().map(|&(id, _)| LinearForm::single(id)).collect(),
        transcript,
        stats: RunStats {
            bound: Some(bound),
            ..RunStats::default()
        },
    };
    assert_eq!(Some(Ratio::from_integer(0)), result.gap(), "broadcast key must meet its bound");
    Ok(result)
}

/// Terminals `s` and `t` agree on `F` fresh random bits drawn by `s`, where
/// `F` is the maximum s-t flow of the budget graph.
///
/// Bits travel along the flow's paths (in lexicographic path order); every
/// hop one-time-pads them with the next unused bits of that pair's key,
/// and every relay decrypts and re-encrypts. `seed` drives `s`'s private
/// randomness. Messages are emitted hop-synchronously: round `h` carries
/// the `h`-th hop of every path.
pub fn run_subgroup(
    store: &mut PairwiseKeyStore,
    spec: &NetworkSpec,
    s: TerminalId,
    t: TerminalId,
    seed: u64,
) -> Result<GroupKeyResult> {
    let bound = bounds::subgroup_bound(spec, s, t)?;
    let flow = graph::max_flow(&spec.graph(), s, t)?;
    let count = usize::try_from(flow.value).expect("flow fits in memory");
    let random = stream_bits(seed, local_stream(s), count);
    let ids = store.add_local_bits(s, &random);
    let key: Vec<(BitId, bool)> = ids.zip(random).collect();

    let mut messages = Vec::new();
    let mut next = 0;
    for path in &flow.paths {
        let amount = path.amount as usize;
        let carried = &key[next..next + amount];
        next += amount;
        for (hop, step) in path.nodes.windows(2).enumerate() {
            let pad = take(store, Pair::new(step[0], step[1]), amount)?;
            messages.push(PublicMessage::masked(step[0], step[1], hop as u64, carried, &pad));
        }
    }
    messages.sort_by_key(|m| m.round);
    let mut transcript = Transcript::new();
    for msg in messages {
        transcript.push(msg);
    }

    let result = GroupKeyResult {
        protocol: Protocol::Subgroup { s, t },
        holders: vec![s, t],
        key: key.iter().map(|&(_, b)| b).collect(),
        key_forms: key.iter().map(|&(id, _)| LinearForm::single(id)).collect(),
        transcript,
        stats: RunStats {
            flow: Some(flow),
            bound: Some(bound),
            ..RunStats::default()
        },
    };
    assert_eq!(Some(Ratio::from_integer(0)), result.gap(), "sub-group key must meet its bound");
    Ok(result)
}

/// Output of one [`single_bit_round`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleBit {
    /// The selected tree edge whose shared bit becomes the common bit.
    pub edge: Pair,
    pub id: BitId,
    pub value: bool,
    pub messages: Vec<PublicMessage>,
    /// Rounds occupied, starting at the `first_round` passed in.
    pub rounds: u64,
}

/// Spreads one secret bit to every node of `tree` using one key bit per tree edge.
///
/// The lexicographically smallest tree edge supplies the common bit. It is
/// then pushed outward breadth-first (children in id order): a node that
/// knows it sends `bit ⊕ B(i,j)` to each neighbor that does not, giving
/// exactly `m - 2` messages.
pub fn single_bit_round(
    tree: &SpanningTree,
    store: &mut PairwiseKeyStore,
    first_round: u64,
) -> Result<SingleBit> {
    if tree.m() != store.m() {
        return Err(Error::InvalidTree("tree and network sizes differ"));
    }
    for &pair in tree.edges() {
        if store.remaining(pair.lo(), pair.hi()) == 0 {
            return Err(Error::InsufficientKeyMaterial {
                pair,
                requested: 1,
                remaining: 0,
            });
        }
    }
    let mut edge_bits = BTreeMap::new();
    for &pair in tree.edges() {
        edge_bits.insert(pair, take(store, pair, 1)?[0]);
    }
    let edge = tree.edges()[0];
    let secret = edge_bits[&edge];

    let adj = tree.adjacency();
    let mut depth = vec![None; tree.m()];
    depth[edge.lo()] = Some(0u64);
    depth[edge.hi()] = Some(0);
    let mut queue = VecDeque::from([edge.lo(), edge.hi()]);
    let mut messages = Vec::new();
    let mut rounds = 0;
    while let Some(u) = queue.pop_front() {
        let d = depth[u].expect("queued nodes know the bit");
        for &v in &adj[u] {
            if depth[v].is_none() {
                let pad = edge_bits[&Pair::new(u, v)];
                messages.push(PublicMessage::masked(u, v, first_round + d, &[secret], &[pad]));
                rounds = rounds.max(d + 1);
                depth[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(SingleBit {
        edge,
        id: secret.0,
        value: secret.1,
        messages,
        rounds,
    })
}

/// Picks the spanning tree used by each iteration of the group protocol.
pub trait TreeChooser {
    fn choose(&mut self, residual: &WeightedGraph) -> Result<SpanningTree>;
}

impl TreeChooser for TieBreak {
    fn choose(&mut self, residual: &WeightedGraph) -> Result<SpanningTree> {
        graph::maximum_spanning_tree(residual, *self)
    }
}

/// All terminals agree on one bit per maximum spanning tree of the budget
/// graph, lowering tree edges by one after each bit, until the graph is
/// disconnected.
pub fn run_group_key(
    store: &mut PairwiseKeyStore,
    spec: &NetworkSpec,
    tie_break: TieBreak,
) -> Result<GroupKeyResult> {
    run_group_key_with(store, spec, &mut { tie_break })
}

/// [`run_group_key`] with a caller-supplied tree choice.
///
/// Each chosen tree must span the residual graph using positive-weight edges.
pub fn run_group_key_with(
    store: &mut PairwiseKeyStore,
    spec: &NetworkSpec,
    chooser: &mut dyn TreeChooser,
) -> Result<GroupKeyResult> {
    let bound = if spec.m() <= MAX_PARTITION_NODES {
        Some(bounds::group_bound(spec)?)
    } else {
        None
    };
    let mut residual = spec.graph();
    let mut transcript = Transcript::new();
    let mut key = Vec::new();
    let mut key_forms = Vec::new();
    let mut trees = Vec::new();
    let mut round = 0;
    while residual.is_connected() {
        let tree = chooser.choose(&residual)?;
        if tree.m() != residual.m() {
            return Err(Error::InvalidTree("tree and network sizes differ"));
        }
        let mut next = residual.clone();
        next.remove_tree(&tree)?;
        let bit = single_bit_round(&tree, store, round)?;
        round += bit.rounds;
        for msg in bit.messages {
            transcript.push(msg);
        }
        key.push(bit.value);
        key_forms.push(LinearForm::single(bit.id));
        trees.push(tree);
        residual = next;
    }

    let result = GroupKeyResult {
        protocol: Protocol::Group,
        holders: (0..spec.m()).collect(),
        key,
        key_forms,
        transcript,
        stats: RunStats {
            iterations: Some(trees.len() as u64),
            trees,
            residual: Some(residual),
            bound,
            ..RunStats::default()
        },
    };
    if let Some(b) = &result.stats.bound {
        assert!(
            result.key.len() as u64 <= b.floor(),
            "group key longer than the multi-cut bound"
        );
    }
    Ok(result)
}

/// Reconstructs the key the way `terminal` would: from its own key bits,
/// its own random bits and the public transcript only.
///
/// Returns `None` if some key bit is not determined by that knowledge.
pub fn replay_key(
    store: &PairwiseKeyStore,
    terminal: TerminalId,
    transcript: &Transcript,
    key_forms: &[LinearForm],
) -> Option<Vec<bool>> {
    let width = store.basis().len();
    let mut known = EchelonBasis::new(width);
    for id in store.known_to(terminal) {
        let value = store.basis().value(id)?;
        known.insert(BitRow::from_columns(width, [id]), value);
    }
    for (form, value) in transcript.bits() {
        known.insert(form.to_row(width).ok()?, value);
    }
    key_forms
        .iter()
        .map(|f| known.solve(f.to_row(width).ok()?))
        .collect()
}

/// Post-run checks on a protocol result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Audit {
    pub secrecy: SecrecyReport,
    /// Every form evaluates to the bit it claims, for key and transcript.
    pub forms_faithful: bool,
    /// No basis bit pads more than one public bit, and no pad is part of the key.
    pub pads_single_use: bool,
    /// Holders for which [`replay_key`] did not reproduce the key.
    pub replay_failures: Vec<TerminalId>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.secrecy.is_secret()
            && self.forms_faithful
            && self.pads_single_use
            && self.replay_failures.is_empty()
    }
}

pub fn audit(result: &GroupKeyResult, store: &PairwiseKeyStore) -> Result<Audit> {
    let basis = store.basis();
    let transcript_forms = result.transcript.forms();
    let secrecy = secrecy::verify_independence(&result.key_forms, &transcript_forms, basis.len())?;

    let forms_faithful = result
        .transcript
        .bits()
        .all(|(f, v)| f.evaluate(basis.values()) == v)
        && result.key_forms.len() == result.key.len()
        && result
            .key_forms
            .iter()
            .zip(&result.key)
            .all(|(f, &v)| f.evaluate(basis.values()) == v);

    let key_ids: BTreeSet<BitId> = result.key_forms.iter().flat_map(|f| f.ids()).copied().collect();
    let mut pads = BTreeSet::new();
    let pads_single_use = result
        .transcript
        .messages()
        .iter()
        .flat_map(|m| m.pads.iter().zip(&m.forms))
        .all(|(&pad, form)| form.ids().contains(&pad) && !key_ids.contains(&pad) && pads.insert(pad));

    let replay_failures = result
        .holders
        .iter()
        .copied()
        .filter(|&h| {
            replay_key(store, h, &result.transcript, &result.key_forms).as_deref()
                != Some(&result.key[..])
        })
        .collect();

    Ok(Audit {
        secrecy,
        forms_faithful,
        pads_single_use,
        replay_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BasisLabel;

    fn triangle() -> NetworkSpec {
        NetworkSpec::from_budgets(3, &[(0, 1, 5), (0, 2, 4), (1, 2, 3)]).unwrap()
    }

    fn label(store: &PairwiseKeyStore, id: BitId) -> BasisLabel {
        store.basis().label(id).unwrap()
    }

    fn key_label(a: usize, b: usize, index: u64) -> BasisLabel {
        BasisLabel::Key {
            pair: Pair::new(a, b),
            index,
        }
    }

    #[test]
    fn broadcast_star() {
        let spec = NetworkSpec::from_budgets(4, &[(0, 1, 7), (0, 2, 5), (0, 3, 9)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 3);
        let r = run_broadcast(&mut store, &spec).unwrap();
        assert_eq!(r.key.len(), 5);
        assert_eq!(r.key_forms[0], LinearForm::single(store.key_ids(0, 2).start));
        assert_eq!(r.transcript.len(), 2);
        assert!(r.transcript.messages().iter().all(|m| m.payload.len() == 5));
        let receivers: Vec<_> = r.transcript.messages().iter().map(|m| m.receiver).collect();
        assert_eq!(receivers, [Recipient::Terminal(1), Recipient::Terminal(3)]);
        assert!(audit(&r, &store).unwrap().passed());
    }

    #[test]
    fn broadcast_degenerate_cases() {
        let two = NetworkSpec::from_budgets(2, &[(0, 1, 5)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&two, 3);
        let r = run_broadcast(&mut store, &two).unwrap();
        assert_eq!(r.key.len(), 5);
        assert!(r.transcript.is_empty());

        let zero = NetworkSpec::from_budgets(3, &[(0, 1, 5)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&zero, 3);
        let r = run_broadcast(&mut store, &zero).unwrap();
        assert!(r.key.is_empty());
        assert!(r.transcript.is_empty());
        assert_eq!(r.gap(), Some(Ratio::from_integer(0)));

        let mut store = PairwiseKeyStore::generate(&triangle(), 3);
        assert!(matches!(
            run_broadcast(&mut store, &triangle()),
            Err(Error::NotAStar(_))
        ));
    }

    #[test]
    fn subgroup_triangle() {
        let spec = triangle();
        let mut store = PairwiseKeyStore::generate(&spec, 3);
        let r = run_subgroup(&mut store, &spec, 0, 2, 11).unwrap();
        assert_eq!(r.key.len(), 7);
        assert_eq!(r.transcript.bit_count(), 10);
        assert_eq!(r.holders, [0, 2]);
        let hops: Vec<_> = r
            .transcript
            .messages()
            .iter()
            .map(|m| (m.round, m.sender, m.receiver, m.payload.len()))
            .collect();
        assert_eq!(
            hops,
            [
                (0, 0, Recipient::Terminal(1), 3),
                (0, 0, Recipient::Terminal(2), 4),
                (1, 1, Recipient::Terminal(2), 3),
            ]
        );
        assert_eq!(store.remaining(0, 1), 2);
        assert_eq!(store.remaining(1, 2), 0);
        assert_eq!(store.remaining(0, 2), 0);
        assert!(audit(&r, &store).unwrap().passed());
    }

    #[test]
    fn subgroup_edge_and_disconnected() {
        let edge = NetworkSpec::from_budgets(2, &[(0, 1, 5)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&edge, 3);
        let r = run_subgroup(&mut store, &edge, 0, 1, 1).unwrap();
        assert_eq!((r.key.len(), r.transcript.bit_count()), (5, 5));

        let split = NetworkSpec::from_budgets(4, &[(0, 1, 5), (2, 3, 5)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&split, 3);
        let r = run_subgroup(&mut store, &split, 0, 3, 1).unwrap();
        assert!(r.key.is_empty());
        assert!(r.transcript.is_empty());
    }

    #[test]
    fn single_bit_on_path() {
        let spec = NetworkSpec::from_budgets(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 5);
        let tree = SpanningTree::new(3, vec![Pair::new(0, 1), Pair::new(1, 2)]).unwrap();
        let bit = single_bit_round(&tree, &mut store, 0).unwrap();
        assert_eq!(bit.edge, Pair::new(0, 1));
        assert_eq!(bit.messages.len(), 1);
        let msg = &bit.messages[0];
        assert_eq!((msg.sender, msg.receiver), (1, Recipient::Terminal(2)));
        let labels: Vec<_> = msg.forms[0].ids().iter().map(|&id| label(&store, id)).collect();
        assert_eq!(labels, [key_label(0, 1, 0), key_label(1, 2, 0)]);
    }

    #[test]
    fn single_bit_on_two_nodes() {
        let spec = NetworkSpec::from_budgets(2, &[(0, 1, 1)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 5);
        let tree = SpanningTree::new(2, vec![Pair::new(0, 1)]).unwrap();
        let bit = single_bit_round(&tree, &mut store, 0).unwrap();
        assert!(bit.messages.is_empty());
        assert_eq!(bit.value, store.basis().value(0).unwrap());
        assert_eq!(
            single_bit_round(&tree, &mut store, 0).unwrap_err(),
            Error::InsufficientKeyMaterial {
                pair: Pair::new(0, 1),
                requested: 1,
                remaining: 0
            }
        );
    }

    #[test]
    fn single_bit_on_star() {
        let spec = NetworkSpec::complete(4, 1).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 5);
        let tree = SpanningTree::new(4, vec![Pair::new(0, 1), Pair::new(0, 2), Pair::new(0, 3)]).unwrap();
        let bit = single_bit_round(&tree, &mut store, 0).unwrap();
        let sent: Vec<_> = bit
            .messages
            .iter()
            .map(|m| {
                let labels: Vec<_> = m.forms[0].ids().iter().map(|&id| label(&store, id)).collect();
                (m.sender, m.receiver, labels)
            })
            .collect();
        assert_eq!(
            sent,
            [
                (0, Recipient::Terminal(2), vec![key_label(0, 1, 0), key_label(0, 2, 0)]),
                (0, Recipient::Terminal(3), vec![key_label(0, 1, 0), key_label(0, 3, 0)]),
            ]
        );
    }

    #[test]
    fn group_key_triangle_both_policies() {
        for tb in [TieBreak::LexKruskal, TieBreak::DegreeMin] {
            let spec = triangle();
            let mut store = PairwiseKeyStore::generate(&spec, 9);
            let r = run_group_key(&mut store, &spec, tb).unwrap();
            assert_eq!(r.key.len(), 6);
            assert_eq!(r.stats.iterations, Some(6));
            assert_eq!(r.gap(), Some(Ratio::from_integer(0)));
            assert!(!r.stats.residual.as_ref().unwrap().is_connected());
            assert!(audit(&r, &store).unwrap().passed());
        }
    }

    #[test]
    fn group_key_on_disconnected_graph() {
        let spec = NetworkSpec::from_budgets(3, &[(0, 1, 4)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 9);
        let r = run_group_key(&mut store, &spec, TieBreak::LexKruskal).unwrap();
        assert!(r.key.is_empty());
        assert_eq!(r.stats.iterations, Some(0));
    }

    #[test]
    fn replay_fails_without_knowledge() {
        let spec = triangle();
        let mut store = PairwiseKeyStore::generate(&spec, 3);
        let r = run_subgroup(&mut store, &spec, 0, 2, 11).unwrap();
        // an empty transcript leaves t unable to learn s's random bits
        assert_eq!(replay_key(&store, 2, &Transcript::new(), &r.key_forms), None);
        assert_eq!(replay_key(&store, 2, &r.transcript, &r.key_forms).unwrap(), r.key);
    }

    #[test]
    fn leaking_transcript_fails_audit() {
        let spec = NetworkSpec::from_budgets(2, &[(0, 1, 2)]).unwrap();
        let mut store = PairwiseKeyStore::generate(&spec, 3);
        let mut r = run_broadcast(&mut store, &spec).unwrap();
        let id = store.key_ids(0, 1).start;
        r.transcript.push(PublicMessage {
            sender: 0,
            receiver: Recipient::Broadcast,
            round: 0,
            payload: vec![store.basis().value(id).unwrap()],
            forms: vec![LinearForm::single(id)],
            pads: vec![id],
        });
        let a = audit(&r, &store).unwrap();
        assert_eq!(a.secrecy.leaked_bits, 1);
        assert!(!a.pads_single_use);
        assert!(!a.passed());
    }
}
