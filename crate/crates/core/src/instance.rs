//! Node-capacitated multiflow instances and their JSON form.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::tree_space::{Tree, TreeBuilder, VertexId};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("unbounded: terminals {0} and {1} are adjacent")]
    Unbounded(String, String),
}

/// An undirected network with terminals, node capacities on nonterminals,
/// and even edge costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiflowInstance {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    terminals: Vec<usize>,
    capacity: Vec<i64>,
    cost: Vec<i64>,
    terminal_index: Vec<Option<usize>>,
    incident: Vec<Vec<usize>>,
    edge_index: BTreeMap<(usize, usize), usize>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    terminals: Vec<String>,
    capacity: BTreeMap<String, i64>,
}

fn invalid(msg: impl Into<String>) -> InstanceError {
    InstanceError::Validation(msg.into())
}

impl MultiflowInstance {
    /// Builds an instance on nodes `0..names.len()`. `capacity` is indexed by
    /// node and must be zero on terminals. All edge costs start at zero.
    pub fn new(
        names: Vec<String>,
        edges: Vec<(usize, usize)>,
        terminals: Vec<usize>,
        capacity: Vec<i64>,
    ) -> Result<Self, InstanceError> {
        let n = names.len();
        if names.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(invalid("duplicate node id"));
        }
        if capacity.len() != n {
            return Err(invalid("capacity vector has wrong length"));
        }
        let mut terminal_index = vec![None; n];
        for (idx, &t) in terminals.iter().enumerate() {
            if t >= n {
                return Err(invalid(format!("unknown terminal index {t}")));
            }
            if terminal_index[t].replace(idx).is_some() {
                return Err(invalid(format!("terminal {} listed twice", names[t])));
            }
        }
        if terminals.len() < 2 {
            return Err(invalid("at least two terminals are required"));
        }
        for (v, &c) in capacity.iter().enumerate() {
            if c < 0 {
                return Err(invalid(format!("negative capacity at {}", names[v])));
            }
            if terminal_index[v].is_some() && c != 0 {
                return Err(invalid(format!("terminal {} carries a capacity", names[v])));
            }
        }
        let mut edge_index = BTreeMap::new();
        let mut incident = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(invalid("edge endpoint out of range"));
            }
            if u == v {
                return Err(invalid(format!("loop at {}", names[u])));
            }
            if edge_index.insert((u.min(v), u.max(v)), e).is_some() {
                return Err(invalid(format!("duplicate edge {}-{}", names[u], names[v])));
            }
            incident[u].push(e);
            incident[v].push(e);
        }
        for &(u, v) in &edges {
            if terminal_index[u].is_some() && terminal_index[v].is_some() {
                return Err(InstanceError::Unbounded(names[u].clone(), names[v].clone()));
            }
        }
        let cost = vec![0; edges.len()];
        Ok(MultiflowInstance { names, edges, terminals, capacity, cost, terminal_index, incident, edge_index })
    }

    /// The same network with every edge cost replaced by `cost`.
    pub fn with_uniform_cost(&self, cost: i64) -> Self {
        assert!(cost >= 0 && cost % 2 == 0, "edge costs must be even and nonnegative");
        MultiflowInstance { cost: vec![cost; self.edges.len()], ..self.clone() }
    }

    pub fn num_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    /// Position of `v` in the terminal list, if it is a terminal.
    pub fn terminal_index(&self, v: usize) -> Option<usize> {
        self.terminal_index[v]
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminal_index[v].is_some()
    }

    pub fn capacity(&self, v: usize) -> i64 {
        self.capacity[v]
    }

    pub fn cost(&self, e: usize) -> i64 {
        self.cost[e]
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_nodes()).filter(|&v| !self.is_terminal(v))
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| InstanceError::Syntax(e.to_string()))?;
        let index: HashMap<&str, usize> =
            raw.nodes.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lookup = |s: &str| {
            index.get(s).copied().ok_or_else(|| invalid(format!("unknown node id {s:?}")))
        };
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (u, v) in &raw.edges {
            edges.push((lookup(u)?, lookup(v)?));
        }
        let mut terminals = Vec::with_capacity(raw.terminals.len());
        for t in &raw.terminals {
            terminals.push(lookup(t)?);
        }
        let is_terminal: BTreeSet<usize> = terminals.iter().copied().collect();
        let mut capacity = vec![0; raw.nodes.len()];
        for (name, &c) in &raw.capacity {
            let v = lookup(name)?;
            if is_terminal.contains(&v) {
                return Err(invalid(format!("capacity given for terminal {name}")));
            }
            capacity[v] = c;
        }
        for (v, name) in raw.nodes.iter().enumerate() {
            if !is_terminal.contains(&v) && !raw.capacity.contains_key(name) {
                return Err(invalid(format!("missing capacity for {name}")));
            }
        }
        MultiflowInstance::new(raw.nodes, edges, terminals, capacity)
    }

    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            nodes: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| (self.names[u].clone(), self.names[v].clone()))
                .collect(),
            terminals: self.terminals.iter().map(|&t| self.names[t].clone()).collect(),
            capacity: self.nonterminals().map(|v| (self.names[v].clone(), self.capacity[v])).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

/// A tree together with one anchor vertex per terminal, in terminal order.
#[derive(Debug, Clone)]
pub struct TreeEmbedding {
    pub tree: Tree,
    pub anchors: Vec<VertexId>,
}

impl TreeEmbedding {
    pub fn anchor(&self, terminal_index: usize) -> VertexId {
        self.anchors[terminal_index]
    }
}

/// Star with center `v0` (vertex 0) and one leaf per terminal.
pub fn star_embedding(instance: &MultiflowInstance) -> TreeEmbedding {
    let mut b = TreeBuilder::new();
    let center = b.add_vertex("v0");
    let anchors: Vec<VertexId> = instance
        .terminals()
        .iter()
        .map(|&t| {
            let leaf = b.add_vertex(format!("v:{}", instance.name(t)));
            b.add_edge(center, leaf).expect("fresh leaf");
            leaf
        })
        .collect();
    TreeEmbedding { tree: b.build().expect("star is a tree"), anchors }
}
