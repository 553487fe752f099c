//! Branched spin-chain trees.
//!
//! Networks are rooted at a single input spin (node 0). Nodes are numbered
//! breadth-first from the input, children in the order they were specified,
//! and every node carries a column index equal to its distance from the
//! input. A node with two or more children is a hub.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a spin within a network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

/// Recursive description of a tree: a straight run of `segment_length`
/// spins, after which the last spin of the run splits into `children`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSpec {
    pub segment_length: usize,
    pub children: Vec<BranchSpec>,
}

impl BranchSpec {
    pub fn segment(segment_length: usize) -> Self {
        BranchSpec {
            segment_length,
            children: Vec::new(),
        }
    }

    pub fn with_children(segment_length: usize, children: Vec<BranchSpec>) -> Self {
        BranchSpec {
            segment_length,
            children,
        }
    }

    /// Star `(m, l, ..., l)`: input run of `m` spins feeding `p` outputs of `l` spins.
    pub fn star(m: usize, p: usize, l: usize) -> Self {
        BranchSpec::with_children(m, vec![BranchSpec::segment(l); p])
    }

    pub fn node_count(&self) -> usize {
        self.segment_length
            + self
                .children
                .iter()
                .map(BranchSpec::node_count)
                .sum::<usize>()
    }

    pub fn validate(&self) -> Result<()> {
        if self.segment_length == 0 {
            return Err(Error::InvalidSize(
                "segment_length must be at least 1".into(),
            ));
        }
        if self.children.len() == 1 {
            return Err(Error::SingleChild);
        }
        self.children.iter().try_for_each(BranchSpec::validate)
    }
}

/// Whether a tree may have leaves at different columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DepthPolicy {
    #[default]
    RequireEqual,
    /// Exploratory override; protocol operations still refuse such trees.
    AllowUnequal,
}

/// An undirected coupling, stored with `parent` closer to the input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub parent: NodeId,
    pub child: NodeId,
    pub coupling: Option<f64>,
}

/// A tree of spins with per-edge couplings and per-node energies.
///
/// Immutable once built; coupling assignment returns a new network.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinNetwork {
    edges: Vec<Edge>,
    onsite_energy: Vec<f64>,
    column: Vec<usize>,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    leaves: Vec<NodeId>,
}

impl SpinNetwork {
    /// Builds a general tree from undirected edges. Node 0 is the input.
    ///
    /// Columns, parents and leaves are derived by breadth-first search; node
    /// numbering is kept as given.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize, Option<f64>)]) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidSize(
                "a network needs at least one node".into(),
            ));
        }
        if edges.len() + 1 != node_count {
            return Err(Error::InvalidTree(format!(
                "{} nodes need {} edges, got {}",
                node_count,
                node_count - 1,
                edges.len()
            )));
        }
        let mut adjacency: Vec<Vec<(usize, Option<f64>)>> = vec![Vec::new(); node_count];
        for &(a, b, coupling) in edges {
            for n in [a, b] {
                if n >= node_count {
                    return Err(Error::InvalidNode {
                        node: n,
                        node_count,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidTree(format!("self loop at node {a}")));
            }
            if let Some(j) = coupling {
                if !(j > 0.0 && j.is_finite()) {
                    return Err(Error::InvalidTree(format!(
                        "coupling {j} on edge {a}-{b} is not strictly positive"
                    )));
                }
            }
            adjacency[a].push((b, coupling));
            adjacency[b].push((a, coupling));
        }

        let mut column = vec![usize::MAX; node_count];
        let mut parent = vec![None; node_count];
        let mut children = vec![Vec::new(); node_count];
        let mut directed = Vec::with_capacity(edges.len());
        let mut queue = VecDeque::from([0usize]);
        column[0] = 0;
        while let Some(u) = queue.pop_front() {
            for &(v, coupling) in &adjacency[u] {
                if Some(NodeId(v)) == parent[u] {
                    continue;
                }
                if column[v] != usize::MAX {
                    return Err(Error::InvalidTree(format!("cycle through node {v}")));
                }
                column[v] = column[u] + 1;
                parent[v] = Some(NodeId(u));
                children[u].push(NodeId(v));
                directed.push(Edge {
                    parent: NodeId(u),
                    child: NodeId(v),
                    coupling,
                });
                queue.push_back(v);
            }
        }
        if let Some(orphan) = column.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidTree(format!("node {orphan} is unreachable")));
        }
        directed.sort_by_key(|e| (e.parent, e.child));
        let leaves = (0..node_count)
            .filter(|&k| children[k].is_empty())
            .map(NodeId)
            .collect();

        Ok(SpinNetwork {
            edges: directed,
            onsite_energy: vec![0.0; node_count],
            column,
            parent,
            children,
            leaves,
        })
    }

    pub fn node_count(&self) -> usize {
        self.column.len()
    }

    pub fn input(&self) -> NodeId {
        NodeId(0)
    }

    /// Nodes without children, in index order.
    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn column(&self, node: NodeId) -> usize {
        self.column[node.0]
    }

    pub fn columns(&self) -> &[usize] {
        &self.column
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent[node.0]
    }

    pub fn children(&self, node: NodeId) -> &[NodeId] {
        &self.children[node.0]
    }

    pub fn is_hub(&self, node: NodeId) -> bool {
        self.children[node.0].len() >= 2
    }

    pub fn hubs(&self) -> Vec<NodeId> {
        (0..self.node_count())
            .map(NodeId)
            .filter(|&n| self.is_hub(n))
            .collect()
    }

    pub fn onsite_energy(&self) -> &[f64] {
        &self.onsite_energy
    }

    pub fn with_onsite_energies(mut self, energies: Vec<f64>) -> Result<Self> {
        if energies.len() != self.node_count() {
            return Err(Error::DimensionMismatch {
                expected: self.node_count(),
                actual: energies.len(),
            });
        }
        self.onsite_energy = energies;
        Ok(self)
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node.0 < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node: node.0,
                node_count: self.node_count(),
            })
        }
    }

    /// Column shared by every leaf.
    pub fn leaf_depth(&self) -> Result<usize> {
        let min = self
            .leaves
            .iter()
            .map(|&l| self.column(l))
            .min()
            .unwrap_or(0);
        let max = self
            .leaves
            .iter()
            .map(|&l| self.column(l))
            .max()
            .unwrap_or(0);
        if min == max {
            Ok(max)
        } else {
            Err(Error::DepthMismatch { min, max })
        }
    }

    pub fn is_equal_depth(&self) -> bool {
        self.leaf_depth().is_ok()
    }

    /// Length of the column-projected 1D chain, `D + 1`.
    pub fn equivalent_length(&self) -> Result<usize> {
        self.leaf_depth().map(|d| d + 1)
    }

    pub fn has_couplings(&self) -> bool {
        self.edges.iter().all(|e| e.coupling.is_some())
    }

    /// Overwrites the coupling of one edge. Used for perturbation studies.
    pub fn with_coupling(mut self, edge_index: usize, coupling: f64) -> Result<Self> {
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidTree(format!(
                "coupling {coupling} is not strictly positive"
            )));
        }
        let count = self.edges.len();
        let edge = self
            .edges
            .get_mut(edge_index)
            .ok_or(Error::InvalidSize(format!(
                "edge index {edge_index} out of range ({count} edges)"
            )))?;
        edge.coupling = Some(coupling);
        Ok(self)
    }

    pub(crate) fn set_couplings(&mut self, couplings: impl IntoIterator<Item = f64>) {
        for (edge, j) in self.edges.iter_mut().zip(couplings) {
            edge.coupling = Some(j);
        }
    }

    /// Product of `1/sqrt(children)` over the strict hub ancestors of each node.
    ///
    /// Input-run nodes and nodes before the first hub get weight 1.
    pub fn path_weights(&self) -> Vec<f64> {
        let mut weight = vec![1.0; self.node_count()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let kids = &self.children[u];
            let factor = if kids.len() >= 2 {
                (kids.len() as f64).sqrt().recip()
            } else {
                1.0
            };
            for &v in kids {
                weight[v.0] = weight[u] * factor;
                queue.push_back(v.0);
            }
        }
        weight
    }
}

/// Builds the star `(m, l, ..., l)` with `p` output branches.
pub fn build_star(m: usize, p: usize, l: usize) -> Result<SpinNetwork> {
    if p < 2 {
        return Err(Error::InvalidBranching(p));
    }
    if m < 1 || l < 1 {
        return Err(Error::InvalidSize(format!(
            "branch lengths must be at least 1 (m = {m}, l = {l})"
        )));
    }
    build_tree(&BranchSpec::star(m, p, l))
}

/// Builds an equal-depth tree from a branch specification.
pub fn build_tree(spec: &BranchSpec) -> Result<SpinNetwork> {
    build_tree_with(spec, DepthPolicy::RequireEqual)
}

pub fn build_tree_with(spec: &BranchSpec, policy: DepthPolicy) -> Result<SpinNetwork> {
    spec.validate()?;

    // Lay the spec out with provisional ids, recording children in order.
    let mut kids: Vec<Vec<usize>> = Vec::new();
    fn lay_out(spec: &BranchSpec, attach: Option<usize>, kids: &mut Vec<Vec<usize>>) {
        let mut prev = attach;
        for _ in 0..spec.segment_length {
            let id = kids.len();
            kids.push(Vec::new());
            if let Some(p) = prev {
                kids[p].push(id);
            }
            prev = Some(id);
        }
        for child in &spec.children {
            lay_out(child, prev, kids);
        }
    }
    lay_out(spec, None, &mut kids);

    // Relabel breadth-first.
    let mut label = vec![0usize; kids.len()];
    let mut order = Vec::with_capacity(kids.len());
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        label[u] = order.len();
        order.push(u);
        queue.extend(kids[u].iter().copied());
    }
    let mut edges = Vec::with_capacity(kids.len().saturating_sub(1));
    for &u in &order {
        for &v in &kids[u] {
            edges.push((label[u], label[v], None));
        }
    }

    let network = SpinNetwork::from_edges(kids.len(), &edges)?;
    if policy == DepthPolicy::RequireEqual {
        network.leaf_depth()?;
    }
    Ok(network)
}

/// Output amplitudes of the distributed state created at arrival time.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafWeights {
    pub leaves: Vec<NodeId>,
    pub weights: Vec<f64>,
}

impl LeafWeights {
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.leaves
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }
}

pub fn leaf_weights(network: &SpinNetwork) -> Result<LeafWeights> {
    network.leaf_depth()?;
    let path = network.path_weights();
    Ok(LeafWeights {
        leaves: network.leaves().to_vec(),
        weights: network.leaves().iter().map(|l| path[l.0]).collect(),
    })
}
