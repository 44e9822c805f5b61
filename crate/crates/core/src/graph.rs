//! Weighted undirected graphs and the combinatorial machinery the protocols
//! and bounds are built on.
//!
//! Edge weights are non-negative integers and are symmetric, so a single
//! undirected capacity stands in for both directions of a pair.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::model::Pair;
use crate::{Error, Rational, Result, TerminalId};

/// Largest node count accepted by [`min_st_cut_bruteforce`].
pub const MAX_CUT_ORACLE_NODES: usize = 20;
/// Largest node count accepted by [`enumerate_partitions`].
pub const MAX_PARTITION_NODES: usize = 12;
/// Largest node count accepted by [`optimal_tree_packing_bruteforce`].
pub const MAX_PACKING_NODES: usize = 6;
/// Largest total weight accepted by [`optimal_tree_packing_bruteforce`].
pub const MAX_PACKING_WEIGHT: u64 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    m: usize,
    edges: BTreeMap<Pair, u64>,
}

impl WeightedGraph {
    pub fn new(m: usize) -> Self {
        WeightedGraph {
            m,
            edges: BTreeMap::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sets the weight of `{i, j}`; weight 0 removes the edge.
    ///
    /// Panics if `i == j` or either endpoint is out of range.
    pub fn set_weight(&mut self, i: TerminalId, j: TerminalId, w: u64) {
        assert!(i < self.m && j < self.m, "edge {i}-{j} out of range");
        let pair = Pair::new(i, j);
        if w == 0 {
            self.edges.remove(&pair);
        } else {
            self.edges.insert(pair, w);
        }
    }

    pub fn weight(&self, i: TerminalId, j: TerminalId) -> u64 {
        Pair::try_new(i, j)
            .ok()
            .and_then(|p| self.edges.get(&p).copied())
            .unwrap_or(0)
    }

    /// Positive-weight edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Pair, u64)> + '_ {
        self.edges.iter().map(|(&p, &w)| (p, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Adjacency lists with neighbors in increasing id order.
    pub fn adjacency(&self) -> Vec<Vec<(TerminalId, u64)>> {
        let mut adj = vec![Vec::new(); self.m];
        for (p, w) in self.edges() {
            adj[p.lo()].push((p.hi(), w));
            adj[p.hi()].push((p.lo(), w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }

    /// Lowers every tree edge by one. Edges reaching zero disappear.
    pub fn remove_tree(&mut self, tree: &SpanningTree) -> Result<()> {
        for &pair in tree.edges() {
            if self.weight(pair.lo(), pair.hi()) == 0 {
                return Err(Error::InvalidTree("tree uses an edge of weight 0"));
            }
        }
        for &pair in tree.edges() {
            let w = self.edges[&pair];
            self.set_weight(pair.lo(), pair.hi(), w - 1);
        }
        Ok(())
    }
}

/// True iff every node is reachable from node 0 over positive-weight edges.
pub fn is_connected(g: &WeightedGraph) -> bool {
    if g.m <= 1 {
        return true;
    }
    let mut sets = DisjointSets::new(g.m);
    let mut components = g.m;
    for (p, _) in g.edges() {
        if sets.union(p.lo(), p.hi()) {
            components -= 1;
        }
    }
    components == 1
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Exactly `m - 1` edges forming a tree over all `m` nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanningTree {
    edges: Vec<Pair>,
}

impl SpanningTree {
    /// Validates and canonicalizes (sorts) the edge list.
    pub fn new(m: usize, mut edges: Vec<Pair>) -> Result<Self> {
        if m == 0 || edges.len() != m - 1 {
            return Err(Error::InvalidTree("a spanning tree needs exactly m - 1 edges"));
        }
        let mut sets = DisjointSets::new(m);
        for p in &edges {
            if p.hi() >= m {
                return Err(Error::InvalidTree("edge endpoint out of range"));
            }
            if !sets.union(p.lo(), p.hi()) {
                return Err(Error::InvalidTree("edges contain a cycle"));
            }
        }
        edges.sort_unstable();
        Ok(SpanningTree { edges })
    }

    pub fn edges(&self) -> &[Pair] {
        &self.edges
    }

    pub fn m(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn weight(&self, g: &WeightedGraph) -> u64 {
        self.edges.iter().map(|p| g.weight(p.lo(), p.hi())).sum()
    }

    pub fn degree(&self, t: TerminalId) -> usize {
        self.edges.iter().filter(|p| p.contains(t)).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.m()).map(|t| self.degree(t)).max().unwrap_or(0)
    }

    /// Neighbor lists in increasing id order.
    pub fn adjacency(&self) -> Vec<Vec<TerminalId>> {
        let mut adj = vec![Vec::new(); self.m()];
        for p in &self.edges {
            adj[p.lo()].push(p.hi());
            adj[p.hi()].push(p.lo());
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// A partition of `0..m` into non-empty blocks.
///
/// Blocks are sorted internally and ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    blocks: Vec<Vec<TerminalId>>,
}

impl Partition {
    /// Builds a partition from a block label per node.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: BTreeMap<usize, Vec<TerminalId>> = BTreeMap::new();
        for (node, &label) in labels.iter().enumerate() {
            by_label.entry(label).or_default().push(node);
        }
        let mut blocks: Vec<_> = by_label.into_values().collect();
        blocks.sort_unstable();
        Partition { blocks }
    }

    /// Two blocks: `side` and its complement in `0..m`.
    pub fn bipartition(m: usize, side: &[TerminalId]) -> Self {
        let labels: Vec<usize> = (0..m).map(|t| usize::from(!side.contains(&t))).collect();
        Self::from_labels(&labels)
    }

    pub fn singletons(m: usize) -> Self {
        Self::from_labels(&(0..m).collect::<Vec<_>>())
    }

    pub fn blocks(&self) -> &[Vec<TerminalId>] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn m(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Index of the block containing each node.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.m()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &t in block {
                labels[t] = b;
            }
        }
        labels
    }

    /// Sum of weights of edges whose endpoints lie in different blocks.
    pub fn crossing_weight(&self, g: &WeightedGraph) -> u64 {
        let labels = self.labels();
        g.edges()
            .filter(|(p, _)| labels[p.lo()] != labels[p.hi()])
            .map(|(_, w)| w)
            .sum()
    }

    /// Crossing weight divided by `k - 1`.
    pub fn normalized_weight(&self, g: &WeightedGraph) -> Rational {
        Rational::new(self.crossing_weight(g), (self.k() - 1) as u64)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            f.write_str("{")?;
            for (n, t) in block.iter().enumerate() {
                if n > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub value: u64,
    /// The side containing the source, sorted.
    pub source_side: Vec<TerminalId>,
    pub witness: Partition,
}

impl CutResult {
    fn from_side(g: &WeightedGraph, mut source_side: Vec<TerminalId>) -> Self {
        source_side.sort_unstable();
        let witness = Partition::bipartition(g.m(), &source_side);
        CutResult {
            value: witness.crossing_weight(g),
            source_side,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    /// `s, ..., t` without repeated nodes.
    pub nodes: Vec<TerminalId>,
    pub amount: u64,
}

/// An integral maximum flow together with its path decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowAssignment {
    pub source: TerminalId,
    pub sink: TerminalId,
    pub value: u64,
    /// Flow on directed arcs, only positive entries. At most one direction per pair is present.
    pub flows: BTreeMap<(TerminalId, TerminalId), u64>,
    /// Paths sorted lexicographically by node sequence; amounts sum to `value`.
    pub paths: Vec<FlowPath>,
    /// Nodes reachable from the source in the final residual graph.
    pub source_side: Vec<TerminalId>,
}

impl FlowAssignment {
    pub fn flow(&self, i: TerminalId, j: TerminalId) -> u64 {
        self.flows.get(&(i, j)).copied().unwrap_or(0)
    }

    /// The minimum cut certified by the final residual graph.
    pub fn min_cut(&self, g: &WeightedGraph) -> CutResult {
        CutResult::from_side(g, self.source_side.clone())
    }
}

fn check_endpoints(g: &WeightedGraph, s: TerminalId, t: TerminalId) -> Result<()> {
    for x in [s, t] {
        if x >= g.m() {
            return Err(Error::TerminalOutOfRange {
                terminal: x,
                m: g.m(),
            });
        }
    }
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    Ok(())
}

/// Shortest augmenting path maximum flow from `s` to `t`.
///
/// Neighbors are scanned in increasing id order, so the result is a
/// deterministic function of the graph.
pub fn max_flow(g: &WeightedGraph, s: TerminalId, t: TerminalId) -> Result<FlowAssignment> {
    check_endpoints(g, s, t)?;
    let m = g.m();
    let adj = g.adjacency();
    // net[u][v] = -net[v][u]; residual u->v is cap(u,v) - net[u][v]
    let mut net = vec![vec![0i128; m]; m];
    let residual = |net: &Vec<Vec<i128>>, u: usize, v: usize, cap: u64| cap as i128 - net[u][v];
    let mut value = 0u64;

    loop {
        let mut prev = vec![usize::MAX; m];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &(v, cap) in &adj[u] {
                if prev[v] == usize::MAX && residual(&net, u, v, cap) > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            break;
        }
        let mut bottleneck = i128::MAX;
        let mut v = t;
        while v != s {
            let u = prev[v];
            bottleneck = bottleneck.min(residual(&net, u, v, g.weight(u, v)));
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            net[u][v] += bottleneck;
            net[v][u] -= bottleneck;
            v = u;
        }
        value += bottleneck as u64;
    }

    let mut source_side = Vec::new();
    let mut seen = vec![false; m];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        source_side.push(u);
        for &(v, cap) in &adj[u] {
            if !seen[v] && residual(&net, u, v, cap) > 0 {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    source_side.sort_unstable();

    let paths = decompose(&adj, net, s, t);
    let mut flows = BTreeMap::new();
    for path in &paths {
        for hop in path.nodes.windows(2) {
            *flows.entry((hop[0], hop[1])).or_insert(0) += path.amount;
        }
    }
    debug_assert_eq!(paths.iter().map(|p| p.amount).sum::<u64>(), value);

    Ok(FlowAssignment {
        source: s,
        sink: t,
        value,
        flows,
        paths,
        source_side,
    })
}

/// Peels simple s-t paths off a net flow. Circulations left over are dropped.
fn decompose(
    adj: &[Vec<(TerminalId, u64)>],
    mut net: Vec<Vec<i128>>,
    s: TerminalId,
    t: TerminalId,
) -> Vec<FlowPath> {
    let m = adj.len();
    let mut found: BTreeMap<Vec<TerminalId>, u64> = BTreeMap::new();
    loop {
        let mut prev = vec![usize::MAX; m];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if prev[v] == usize::MAX && net[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            break;
        }
        let mut nodes = vec![t];
        let mut v = t;
        while v != s {
            v = prev[v];
            nodes.push(v);
        }
        nodes.reverse();
        let amount = nodes.windows(2).map(|h| net[h[0]][h[1]]).min().unwrap_or(0);
        for hop in nodes.windows(2) {
            net[hop[0]][hop[1]] -= amount;
            net[hop[1]][hop[0]] += amount;
        }
        *found.entry(nodes).or_insert(0) += amount as u64;
    }
    found
        .into_iter()
        .map(|(nodes, amount)| FlowPath { nodes, amount })
        .collect()
}

/// Minimum s-t cut by enumerating all `2^(m-2)` bipartitions separating `s` from `t`.
pub fn min_st_cut_bruteforce(g: &WeightedGraph, s: TerminalId, t: TerminalId) -> Result<CutResult> {
    check_endpoints(g, s, t)?;
    let m = g.m();
    if m > MAX_CUT_ORACLE_NODES {
        return Err(Error::InstanceTooLarge {
            what: "s-t cut enumeration",
            limit: MAX_CUT_ORACLE_NODES as u64,
            actual: m as u64,
        });
    }
    let free: Vec<TerminalId> = (0..m).filter(|&x| x != s && x != t).collect();
    let mut best: Option<(u64, Vec<TerminalId>)> = None;
    for mask in 0u32..(1u32 << free.len()) {
        let mut in_source = vec![false; m];
        in_source[s] = true;
        for (bit, &x) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                in_source[x] = true;
            }
        }
        let value: u64 = g
            .edges()
            .filter(|(p, _)| in_source[p.lo()] != in_source[p.hi()])
            .map(|(_, w)| w)
            .sum();
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            let side = (0..m).filter(|&x| in_source[x]).collect();
            best = Some((value, side));
        }
    }
    let (_, side) = best.expect("at least one s-t cut exists");
    Ok(CutResult::from_side(g, side))
}

/// Minimum weight 2-block cut of the whole graph, via `m - 1` max-flow runs from node 0.
pub fn global_min_cut(g: &WeightedGraph) -> Result<CutResult> {
    let mut best: Option<CutResult> = None;
    for t in 1..g.m() {
        let cut = max_flow(g, 0, t)?.min_cut(g);
        if best.as_ref().is_none_or(|b| cut.value < b.value) {
            best = Some(cut);
        }
    }
    best.ok_or(Error::TooFewTerminals(g.m()))
}

/// How to order equal-weight edges when building a maximum spanning tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Kruskal over edges sorted by (weight desc, lo asc, hi asc).
    #[default]
    LexKruskal,
    /// Kruskal where, among equal-weight candidates, the edge giving the
    /// smallest maximum degree in the partial forest goes first (ties by lex).
    DegreeMin,
}

impl TieBreak {
    pub fn name(self) -> &'static str {
        match self {
            TieBreak::LexKruskal => "lex-kruskal",
            TieBreak::DegreeMin => "degree-min",
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TieBreak {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "lex-kruskal" => Ok(TieBreak::LexKruskal),
            "degree-min" => Ok(TieBreak::DegreeMin),
            _ => Err("expected lex-kruskal or degree-min"),
        }
    }
}

pub fn maximum_spanning_tree(g: &WeightedGraph, tie_break: TieBreak) -> Result<SpanningTree> {
    if !is_connected(g) {
        return Err(Error::GraphDisconnected);
    }
    let m = g.m();
    let mut sorted: Vec<(Pair, u64)> = g.edges().collect();
    sorted.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut sets = DisjointSets::new(m);
    let mut chosen = Vec::with_capacity(m.saturating_sub(1));
    match tie_break {
        TieBreak::LexKruskal => {
            for (p, _) in sorted {
                if sets.union(p.lo(), p.hi()) {
                    chosen.push(p);
                }
            }
        }
        TieBreak::DegreeMin => {
            let mut degree = vec![0usize; m];
            let mut max_degree = 0;
            for group in sorted.chunk_by(|a, b| a.1 == b.1) {
                let mut pending: Vec<Pair> = group.iter().map(|&(p, _)| p).collect();
                loop {
                    pending.retain(|p| sets.find(p.lo()) != sets.find(p.hi()));
                    let Some(&best) = pending.iter().min_by_key(|p| {
                        let after = max_degree.max(degree[p.lo()] + 1).max(degree[p.hi()] + 1);
                        (after, **p)
                    }) else {
                        break;
                    };
                    sets.union(best.lo(), best.hi());
                    degree[best.lo()] += 1;
                    degree[best.hi()] += 1;
                    max_degree = max_degree.max(degree[best.lo()]).max(degree[best.hi()]);
                    chosen.push(best);
                }
            }
        }
    }
    SpanningTree::new(m, chosen)
}

/// Iterator over the partitions of `0..m` with at least two blocks in which
/// every block contains a node of the chosen set.
///
/// Partitions are produced in restricted-growth-string order.
#[derive(Debug, Clone)]
pub struct Partitions {
    labels: Vec<usize>,
    must_meet: Vec<bool>,
    done: bool,
}

impl Partitions {
    fn advance(&mut self) -> bool {
        let m = self.labels.len();
        // prefix_max[i] = max(labels[..i])
        let mut prefix_max = vec![0usize; m];
        for i in 1..m {
            prefix_max[i] = prefix_max[i - 1].max(self.labels[i - 1]);
        }
        for i in (1..m).rev() {
            if self.labels[i] <= prefix_max[i] {
                self.labels[i] += 1;
                for l in &mut self.labels[i + 1..] {
                    *l = 0;
                }
                return true;
            }
        }
        false
    }

    fn admissible(&self) -> bool {
        let k = self.labels.iter().max().map_or(0, |&x| x + 1);
        if k < 2 {
            return false;
        }
        let mut met = vec![false; k];
        for (node, &label) in self.labels.iter().enumerate() {
            if self.must_meet[node] {
                met[label] = true;
            }
        }
        met.into_iter().all(|x| x)
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        while !self.done {
            let current = self.admissible().then(|| Partition::from_labels(&self.labels));
            if !self.advance() {
                self.done = true;
            }
            if current.is_some() {
                return current;
            }
        }
        None
    }
}

/// Partitions of `0..m` into `k >= 2` blocks that each intersect `must_split`.
pub fn enumerate_partitions(m: usize, must_split: &[TerminalId]) -> Result<Partitions> {
    if m > MAX_PARTITION_NODES {
        return Err(Error::InstanceTooLarge {
            what: "partition enumeration",
            limit: MAX_PARTITION_NODES as u64,
            actual: m as u64,
        });
    }
    let mut must_meet = vec![false; m];
    for &t in must_split {
        if t >= m {
            return Err(Error::TerminalOutOfRange { terminal: t, m });
        }
        must_meet[t] = true;
    }
    Ok(Partitions {
        labels: vec![0; m],
        must_meet,
        done: m == 0,
    })
}

/// Minimum normalized multi-cut weight over partitions whose blocks all meet `must_split`.
///
/// The first partition (in enumeration order) attaining the minimum is the witness.
pub fn min_normalized_multicut(
    g: &WeightedGraph,
    must_split: &[TerminalId],
) -> Result<(Rational, Partition)> {
    let mut best: Option<(Rational, Partition)> = None;
    for partition in enumerate_partitions(g.m(), must_split)? {
        let value = partition.normalized_weight(g);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, partition));
        }
    }
    best.ok_or(Error::NoAdmissiblePartition(must_split.len()))
}

/// Every spanning tree of the positive-weight support of `g`, in lexicographic order.
pub(crate) fn spanning_trees(g: &WeightedGraph) -> Vec<SpanningTree> {
    let m = g.m();
    let edges: Vec<Pair> = g.edges().map(|(p, _)| p).collect();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(m);
    fn extend(
        edges: &[Pair],
        from: usize,
        m: usize,
        stack: &mut Vec<Pair>,
        out: &mut Vec<SpanningTree>,
    ) {
        if stack.len() + 1 == m {
            if let Ok(tree) = SpanningTree::new(m, stack.clone()) {
                out.push(tree);
            }
            return;
        }
        let needed = m - 1 - stack.len();
        for idx in from..edges.len() {
            if edges.len() - idx < needed {
                break;
            }
            stack.push(edges[idx]);
            // prune cycles early
            let mut sets = DisjointSets::new(m);
            if stack.iter().all(|p| sets.union(p.lo(), p.hi())) {
                extend(edges, idx + 1, m, stack, out);
            }
            stack.pop();
        }
    }
    extend(&edges, 0, m, &mut stack, &mut out);
    out
}

/// Largest number of spanning trees that can be removed one after another,
/// each lowering its edges by one, before the graph disconnects.
///
/// Exhaustive search over all tree sequences, memoized on the residual graph.
pub fn optimal_tree_packing_bruteforce(g: &WeightedGraph) -> Result<u64> {
    if g.m() > MAX_PACKING_NODES {
        return Err(Error::InstanceTooLarge {
            what: "tree packing search (nodes)",
            limit: MAX_PACKING_NODES as u64,
            actual: g.m() as u64,
        });
    }
    if g.total_weight() > MAX_PACKING_WEIGHT {
        return Err(Error::InstanceTooLarge {
            what: "tree packing search (total weight)",
            limit: MAX_PACKING_WEIGHT,
            actual: g.total_weight(),
        });
    }
    let mut memo = BTreeMap::new();
    Ok(pack(g, &mut memo))
}

fn pack(g: &WeightedGraph, memo: &mut BTreeMap<Vec<(Pair, u64)>, u64>) -> u64 {
    if !is_connected(g) {
        return 0;
    }
    let key: Vec<(Pair, u64)> = g.edges().collect();
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let ceiling = g.total_weight() / (g.m() as u64 - 1);
    let mut best = 0;
    for tree in spanning_trees(g) {
        let mut rest = g.clone();
        rest.remove_tree(&tree).expect("tree drawn from the support");
        best = best.max(1 + pack(&rest, memo));
        if best == ceiling {
            break;
        }
    }
    memo.insert(key, best);
    best
}
