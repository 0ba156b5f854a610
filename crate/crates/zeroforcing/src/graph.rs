use crate::set::VertexSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex id {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
}

/// Simple undirected graph on vertices `0..n`, stored as sorted adjacency
/// lists. Construction rejects self loops and duplicate edges.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { id: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Closed neighborhood `N[v]` as a set.
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = VertexSet::singleton(self.n(), v);
        for &w in &self.adj[v] {
            s.insert(w);
        }
        s
    }

    /// Union of open neighborhoods of the members of `s`.
    pub fn neighborhood_of_set(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::empty(self.n());
        for v in s.iter() {
            for &w in &self.adj[v] {
                out.insert(w);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0).card() == self.n()
    }

    /// Connected component containing `start`, as a set.
    pub fn component_of(&self, start: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(self.n(), start);
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            for &w in &self.adj[u] {
                if !seen.contains(w) {
                    seen.insert(w);
                    queue.push(w);
                }
            }
        }
        seen
    }

    /// Connected components of the subgraph induced by `within`, each as a
    /// set, ordered by their lowest-id member.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut remaining = within.clone();
        while let Some(start) = remaining.first() {
            let mut comp = VertexSet::singleton(self.n(), start);
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for &w in &self.adj[u] {
                    if within.contains(w) && !comp.contains(w) {
                        comp.insert(w);
                        queue.push(w);
                    }
                }
            }
            remaining.subtract(&comp);
            out.push(comp);
        }
        out
    }

    /// Does `s` induce a connected subgraph? The empty set counts as
    /// disconnected except on the empty graph.
    pub fn is_connected_within(&self, s: &VertexSet) -> bool {
        if s.is_empty() {
            return self.n() == 0;
        }
        let start = s.first().unwrap();
        let mut comp = VertexSet::singleton(self.n(), start);
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            for &w in &self.adj[u] {
                if s.contains(w) && !comp.contains(w) {
                    comp.insert(w);
                    queue.push(w);
                }
            }
        }
        comp == *s
    }
}
