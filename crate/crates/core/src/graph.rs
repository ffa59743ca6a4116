//! Connected Watts-Strogatz graphs and treatment-relative node partitions.
//!
//! Generation starts from a ring lattice where node `i` is joined to
//! `i ± 1 ..= i ± k/2 (mod n)`. The original lattice edges are then visited in
//! ascending `(u, v)` order with `u < v`; each one is replaced, with
//! probability `p`, by `(u, w)` where `w` is drawn uniformly from the nodes
//! that are neither `u` nor already adjacent to `u`. Rewiring keeps the edge
//! count (and therefore the mean degree) fixed. A disconnected result is
//! discarded and generation is retried on the next substream of the seed.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{sequential, Purpose};

pub type NodeId = u32;

/// Generation attempts before giving up on finding a connected graph.
pub const MAX_GENERATION_ATTEMPTS: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WattsStrogatzParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    #[serde(default)]
    pub seed: u64,
}

impl WattsStrogatzParams {
    pub fn new(n: usize, k: usize, p: f64, seed: u64) -> Self {
        Self { n, k, p, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(invalid(format!("n must be at least 3, got {}", self.n)));
        }
        if self.k == 0 || !self.k.is_multiple_of(2) {
            return Err(invalid(format!(
                "k must be a positive even integer, got {}",
                self.k
            )));
        }
        if self.k >= self.n {
            return Err(invalid(format!(
                "k must be smaller than n, got k={} n={}",
                self.k, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(invalid(format!("p must lie in [0, 1], got {}", self.p)));
        }
        if self.n > NodeId::MAX as usize {
            return Err(invalid(format!("n={} exceeds the node id range", self.n)));
        }
        Ok(())
    }
}

/// Immutable undirected graph in compressed adjacency form. Neighbour lists
/// are sorted and free of self-loops and duplicates.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edge_count", &self.edge_count())
            .finish()
    }
}

impl Graph {
    fn from_lists(lists: Vec<Vec<NodeId>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        offsets.push(0);
        for mut list in lists {
            list.sort_unstable();
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    /// Builds a graph from an undirected edge list, rejecting self-loops,
    /// duplicate edges and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(invalid(format!("edge ({u}, {v}) out of range for n={n}")));
            }
            if u == v {
                return Err(invalid(format!("self-loop at node {u}")));
            }
            lists[u as usize].push(v);
            lists[v as usize].push(u);
        }
        let g = Self::from_lists(lists);
        for i in 0..n {
            if g.neighbours(i).windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("duplicate edge at node {i}")));
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbours(&self, i: usize) -> &[NodeId] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn mean_degree(&self) -> f64 {
        self.targets.len() as f64 / self.n() as f64
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.neighbours(u).binary_search(&(v as NodeId)).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbours(u)
                .iter()
                .copied()
                .filter(move |&v| v as usize > u)
                .map(move |v| (u as NodeId, v))
        })
    }

    pub fn is_connected(&self) -> bool {
        lists_connected(self.n(), |i| self.neighbours(i))
    }
}

fn lists_connected<'a>(n: usize, neighbours: impl Fn(usize) -> &'a [NodeId]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in neighbours(u) {
            let v = v as usize;
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}

/// Lattice neighbours of `u` with a larger id, ascending.
fn forward_lattice_neighbours(u: usize, n: usize, half: usize, out: &mut Vec<usize>) {
    out.clear();
    for j in 1..=half {
        let right = (u + j) % n;
        let left = (u + n - j) % n;
        if right > u {
            out.push(right);
        }
        if left > u {
            out.push(left);
        }
    }
    out.sort_unstable();
    out.dedup();
}

fn ring_lattice(n: usize, half: usize) -> Vec<Vec<NodeId>> {
    (0..n)
        .map(|i| {
            let mut list = Vec::with_capacity(2 * half + 4);
            for j in 1..=half {
                list.push(((i + j) % n) as NodeId);
                list.push(((i + n - j) % n) as NodeId);
            }
            list
        })
        .collect()
}

fn remove_neighbour(list: &mut Vec<NodeId>, v: NodeId) {
    if let Some(pos) = list.iter().position(|&x| x == v) {
        list.swap_remove(pos);
    }
}

fn rewire_once(params: &WattsStrogatzParams, attempt: u32) -> Vec<Vec<NodeId>> {
    let n = params.n;
    let half = params.k / 2;
    let mut adj = ring_lattice(n, half);
    if params.p == 0.0 {
        return adj;
    }
    let mut rng = sequential(params.seed, Purpose::Graph, u64::from(attempt));
    let mut forward = Vec::with_capacity(2 * half);
    for u in 0..n {
        forward_lattice_neighbours(u, n, half, &mut forward);
        for &v in &forward {
            if rng.random::<f64>() >= params.p {
                continue;
            }
            // u already touches every other node: no legal replacement
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&(w as NodeId)) {
                    break w;
                }
            };
            remove_neighbour(&mut adj[u], v as NodeId);
            remove_neighbour(&mut adj[v], u as NodeId);
            adj[u].push(w as NodeId);
            adj[w].push(u as NodeId);
        }
    }
    adj
}

/// Generates a connected Watts-Strogatz graph. Pure in `params`, seed included.
pub fn generate_watts_strogatz(params: &WattsStrogatzParams) -> Result<Graph> {
    params.validate()?;
    for attempt in 0..MAX_GENERATION_ATTEMPTS {
        let adj = rewire_once(params, attempt);
        if lists_connected(params.n, |i| &adj[i]) {
            return Ok(Graph::from_lists(adj));
        }
    }
    Err(Error::Generation {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DegreeHistogram {
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn mean(&self) -> f64 {
        let weighted: usize = self.counts.iter().map(|(d, c)| d * c).sum();
        weighted as f64 / self.total() as f64
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let total = self.total() as f64;
        self.counts
            .iter()
            .map(|(&d, &c)| c as f64 * (d as f64 - mean).powi(2))
            .sum::<f64>()
            / total
    }
}

pub fn degree_histogram(g: &Graph) -> DegreeHistogram {
    let mut counts = BTreeMap::new();
    for i in 0..g.n() {
        *counts.entry(g.degree(i)).or_insert(0) += 1;
    }
    DegreeHistogram { counts }
}

fn check_ids(g: &Graph, nodes: &[NodeId], what: &str) -> Result<()> {
    if nodes.is_empty() {
        return Err(invalid(format!("{what} must not be empty")));
    }
    if let Some(&bad) = nodes.iter().find(|&&i| i as usize >= g.n()) {
        return Err(invalid(format!(
            "{what} contains node {bad}, graph has {} nodes",
            g.n()
        )));
    }
    Ok(())
}

/// Membership mask over all nodes of `g`.
pub fn node_mask(n: usize, nodes: &[NodeId]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &i in nodes {
        mask[i as usize] = true;
    }
    mask
}

pub fn mean_degree_of(g: &Graph, nodes: &[NodeId]) -> Result<f64> {
    check_ids(g, nodes, "node set")?;
    let total: usize = nodes.iter().map(|&i| g.degree(i as usize)).sum();
    Ok(total as f64 / nodes.len() as f64)
}

/// Fraction of `(member, neighbour)` incidences whose neighbour is also a member.
pub fn within_group_edge_fraction(g: &Graph, group: &[NodeId]) -> Result<f64> {
    check_ids(g, group, "group")?;
    let mask = node_mask(g.n(), group);
    let mut incidences = 0usize;
    let mut inside = 0usize;
    for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
        let nbrs = g.neighbours(i);
        incidences += nbrs.len();
        inside += nbrs.iter().filter(|&&j| mask[j as usize]).count();
    }
    if incidences == 0 {
        return Ok(0.0);
    }
    Ok(inside as f64 / incidences as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Treatment,
    Neighbours,
    Rest,
}

/// Treatment, its non-treated neighbours and everyone else. Control is the
/// union of the latter two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPartition {
    labels: Vec<Group>,
    treatment: Vec<NodeId>,
    neighbours: Vec<NodeId>,
    rest: Vec<NodeId>,
}

impl GroupPartition {
    pub fn labels(&self) -> &[Group] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Group {
        self.labels[i]
    }

    pub fn is_treated(&self, i: usize) -> bool {
        self.labels[i] == Group::Treatment
    }

    pub fn treatment(&self) -> &[NodeId] {
        &self.treatment
    }

    pub fn neighbours(&self) -> &[NodeId] {
        &self.neighbours
    }

    pub fn rest(&self) -> &[NodeId] {
        &self.rest
    }

    /// Sorted ids of neighbours ∪ rest.
    pub fn control(&self) -> Vec<NodeId> {
        let mut control = Vec::with_capacity(self.neighbours.len() + self.rest.len());
        control.extend_from_slice(&self.neighbours);
        control.extend_from_slice(&self.rest);
        control.sort_unstable();
        control
    }

    pub fn control_len(&self) -> usize {
        self.neighbours.len() + self.rest.len()
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }
}

/// Splits the nodes of `g` relative to `treatment`. Duplicate ids are ignored.
pub fn partition_by_treatment(g: &Graph, treatment: &[NodeId]) -> Result<GroupPartition> {
    check_ids(g, treatment, "treatment set")?;
    let n = g.n();
    let mut labels = vec![Group::Rest; n];
    for &i in treatment {
        labels[i as usize] = Group::Treatment;
    }
    for i in 0..n {
        if labels[i] != Group::Treatment {
            continue;
        }
        for &j in g.neighbours(i) {
            if labels[j as usize] == Group::Rest {
                labels[j as usize] = Group::Neighbours;
            }
        }
    }
    let mut treatment = Vec::new();
    let mut neighbours = Vec::new();
    let mut rest = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        let id = i as NodeId;
        match label {
            Group::Treatment => treatment.push(id),
            Group::Neighbours => neighbours.push(id),
            Group::Rest => rest.push(id),
        }
    }
    Ok(GroupPartition {
        labels,
        treatment,
        neighbours,
        rest,
    })
}

/// Writes the edge-list form: a `# n=.. k=.. p=.. seed=..` header followed by
/// one `u v` line per edge, `u < v`, ascending.
pub fn write_edge_list<W: Write>(
    g: &Graph,
    params: &WattsStrogatzParams,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(
        out,
        "# n={} k={} p={} seed={}",
        params.n, params.k, params.p, params.seed
    )?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

/// Parses the edge-list form back into its header parameters and graph.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<(WattsStrogatzParams, Graph)> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))?
        .map_err(|e| Error::Parse(e.to_string()))?;
    let params = parse_header(&header)?;
    let mut edges = Vec::with_capacity(params.n * params.k / 2);
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut field = || -> Result<NodeId> {
            parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge on line {}", lineno + 2)))
        };
        let u = field()?;
        let v = field()?;
        edges.push((u, v));
    }
    let g = Graph::from_edges(params.n, &edges)?;
    Ok((params, g))
}

fn parse_header(header: &str) -> Result<WattsStrogatzParams> {
    let body = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("missing '#' header".into()))?;
    let mut n = None;
    let mut k = None;
    let mut p = None;
    let mut seed = None;
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token '{token}'")))?;
        let bad = || Error::Parse(format!("bad header value '{token}'"));
        match key {
            "n" => n = Some(value.parse().map_err(|_| bad())?),
            "k" => k = Some(value.parse().map_err(|_| bad())?),
            "p" => p = Some(value.parse().map_err(|_| bad())?),
            "seed" => seed = Some(value.parse().map_err(|_| bad())?),
            _ => return Err(Error::Parse(format!("unknown header key '{key}'"))),
        }
    }
    match (n, k, p, seed) {
        (Some(n), Some(k), Some(p), Some(seed)) => Ok(WattsStrogatzParams { n, k, p, seed }),
        _ => Err(Error::Parse("header must carry n, k, p and seed".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ws(n: usize, k: usize, p: f64, seed: u64) -> Graph {
        generate_watts_strogatz(&WattsStrogatzParams::new(n, k, p, seed)).unwrap()
    }

    fn assert_well_formed(g: &Graph, k: usize) {
        let n = g.n();
        for i in 0..n {
            let nbrs = g.neighbours(i);
            assert!(
                nbrs.windows(2).all(|w| w[0] < w[1]),
                "node {i} unsorted/dup"
            );
            assert!(!nbrs.contains(&(i as NodeId)), "self-loop at {i}");
            for &j in nbrs {
                assert!(g.contains_edge(j as usize, i), "asymmetric {i}-{j}");
            }
        }
        assert!(g.is_connected());
        assert_eq!(g.edge_count(), n * k / 2);
    }

    #[test]
    fn rejects_bad_params() {
        for (n, k, p) in [
            (10, 3, 0.1),
            (10, 10, 0.1),
            (10, 0, 0.1),
            (2, 2, 0.0),
            (10, 4, 1.5),
        ] {
            let err = generate_watts_strogatz(&WattsStrogatzParams::new(n, k, p, 0)).unwrap_err();
            assert!(
                matches!(err, Error::InvalidParameter(_)),
                "{n} {k} {p}: {err}"
            );
        }
        let err = WattsStrogatzParams::new(10, 3, 0.1, 0)
            .validate()
            .unwrap_err();
        assert!(err.to_string().contains("even"));
    }

    #[test]
    fn p_zero_is_the_ring_lattice() {
        let g = ws(100, 6, 0.0, 9);
        assert_well_formed(&g, 6);
        assert_eq!(degree_histogram(&g).counts, BTreeMap::from([(6, 100)]));
        assert_eq!(g.neighbours(0), &[1, 2, 3, 97, 98, 99]);
        assert_eq!(g.neighbours(50), &[47, 48, 49, 51, 52, 53]);
    }

    #[test]
    fn small_lattice_has_expected_edges() {
        let g = ws(10, 4, 0.0, 0);
        assert_eq!(g.edge_count(), 20);
    }

    #[test]
    fn rewired_graphs_keep_edge_count_and_mean_degree() {
        for p in [0.1, 0.5, 1.0] {
            let g = ws(2000, 10, p, 3);
            assert_well_formed(&g, 10);
            let h = degree_histogram(&g);
            assert_eq!(h.total(), 2000);
            assert_eq!(h.mean(), 10.0);
            assert_eq!(g.mean_degree(), 10.0);
        }
    }

    #[test]
    fn complete_graph_edge_case() {
        // k = n - 1 is odd here; k = n - 2 leaves a single non-neighbour per node
        let g = ws(6, 4, 1.0, 1);
        assert_well_formed(&g, 4);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = ws(500, 8, 0.3, 42);
        let b = ws(500, 8, 0.3, 42);
        let c = ws(500, 8, 0.3, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn degree_variance_grows_with_p() {
        let var = |p: f64| -> f64 {
            (0..10u64)
                .map(|s| degree_histogram(&ws(10_000, 50, p, s)).variance())
                .sum::<f64>()
                / 10.0
        };
        let (low, high) = (var(0.1), var(1.0));
        assert!(high > low, "var(p=1)={high} var(p=0.1)={low}");
    }

    #[test]
    fn degree_spread_is_wider_above_the_mean() {
        let mut below = 0usize;
        let mut above = 0usize;
        for s in 0..10u64 {
            let h = degree_histogram(&ws(10_000, 50, 0.1, s));
            assert!(h.counts.range(..50).next().is_some());
            assert!(h.counts.range(51..).next().is_some());
            below = below.max(50 - h.min_degree().unwrap());
            above = above.max(h.max_degree().unwrap() - 50);
        }
        assert!(above > below, "max deviation above {above}, below {below}");
    }

    #[test]
    fn mean_degree_of_subsets() {
        let g = ws(1000, 10, 0.2, 5);
        let all: Vec<NodeId> = (0..1000).collect();
        assert_eq!(mean_degree_of(&g, &all).unwrap(), 10.0);
        assert_eq!(mean_degree_of(&g, &[17]).unwrap(), g.degree(17) as f64);
        assert!(mean_degree_of(&g, &[]).is_err());
        assert!(mean_degree_of(&g, &[1000]).is_err());
    }

    #[test]
    fn partition_of_everything() {
        let g = ws(100, 6, 0.1, 1);
        let all: Vec<NodeId> = (0..100).collect();
        let part = partition_by_treatment(&g, &all).unwrap();
        assert_eq!(part.treatment().len(), 100);
        assert!(part.neighbours().is_empty());
        assert!(part.rest().is_empty());
        assert_eq!(part.control_len(), 0);
    }

    #[test]
    fn partition_on_the_lattice() {
        let g = ws(100, 6, 0.0, 1);
        let part = partition_by_treatment(&g, &[0]).unwrap();
        assert_eq!(part.neighbours(), &[1, 2, 3, 97, 98, 99]);
        assert_eq!(part.rest().len(), 93);
        assert!(partition_by_treatment(&g, &[]).is_err());
        assert!(partition_by_treatment(&g, &[100]).is_err());
    }

    #[test]
    fn edge_fraction_cases() {
        let g = ws(100, 6, 0.0, 1);
        let all: Vec<NodeId> = (0..100).collect();
        assert_eq!(within_group_edge_fraction(&g, &all).unwrap(), 1.0);
        assert_eq!(within_group_edge_fraction(&g, &[5]).unwrap(), 0.0);
        // a block of 4 on a k=6 ring: 3+2+2+3... incidences inside = 12 of 24
        let frac = within_group_edge_fraction(&g, &[10, 11, 12, 13]).unwrap();
        assert_eq!(frac, 12.0 / 24.0);
        assert!(within_group_edge_fraction(&g, &[]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let params = WattsStrogatzParams::new(100, 6, 0.1, 77);
        let g = generate_watts_strogatz(&params).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &params, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# n=100 k=6 p=0.1 seed=77\n"));
        assert_eq!(text.lines().count(), 301);
        let (back_params, back) = read_edge_list(buf.as_slice()).unwrap();
        assert_eq!(back_params, params);
        assert_eq!(back, g);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn generated_graphs_hold_invariants(
            n in 5usize..120,
            half in 1usize..4,
            p in 0.0f64..=1.0,
            seed in any::<u64>(),
        ) {
            let k = 2 * half;
            prop_assume!(k < n);
            let params = WattsStrogatzParams::new(n, k, p, seed);
            match generate_watts_strogatz(&params) {
                Ok(g) => {
                    assert_well_formed(&g, k);
                    prop_assert_eq!(degree_histogram(&g).mean(), k as f64);
                    prop_assert_eq!(generate_watts_strogatz(&params).unwrap(), g);
                }
                // tiny sparse graphs at high p may fail to connect 100 times
                Err(Error::Generation { .. }) => prop_assert!(k == 2 && p > 0.0),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }

        #[test]
        fn partitions_cover_disjointly(
            seed in any::<u64>(),
            picks in proptest::collection::vec(0u32..200, 1..60),
        ) {
            let g = ws(200, 6, 0.2, seed % 1000);
            let part = partition_by_treatment(&g, &picks).unwrap();
            let mut all: Vec<NodeId> = part.treatment().to_vec();
            all.extend_from_slice(part.neighbours());
            all.extend_from_slice(part.rest());
            all.sort_unstable();
            prop_assert_eq!(all, (0..200).collect::<Vec<_>>());
            prop_assert_eq!(part.control_len(), 200 - part.treatment().len());
            for &j in part.neighbours() {
                prop_assert!(g.neighbours(j as usize).iter().any(|&i| part.is_treated(i as usize)));
            }
            for &j in part.rest() {
                prop_assert!(!g.neighbours(j as usize).iter().any(|&i| part.is_treated(i as usize)));
            }
            let inside = within_group_edge_fraction(&g, part.treatment()).unwrap();
            let outside = within_group_edge_fraction(&g, &part.control());
            prop_assert!((0.0..=1.0).contains(&inside));
            if let Ok(outside) = outside {
                prop_assert!((0.0..=1.0).contains(&outside));
            }
        }
    }
}
