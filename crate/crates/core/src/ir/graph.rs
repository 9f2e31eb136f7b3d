use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Undirected qubit-coupling graph over vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityGraph {
    adjacency: Vec<BTreeSet<usize>>,
}

impl ConnectivityGraph {
    /// Builds a graph from an edge list. Self-loops, duplicate edges and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Graph("graph has no vertices".into()));
        }
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Graph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop on vertex {u}")));
            }
            if !adjacency[u].insert(v) {
                return Err(Error::Graph(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[v].insert(u);
        }
        Ok(ConnectivityGraph { adjacency })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::new(n.max(1), &edges).expect("path graph")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Graph("a cycle needs at least 3 vertices".into()));
        }
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::new(n, &edges)
    }

    /// `rows x cols` square lattice, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::new(rows * cols, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::new(n, &edges)
    }

    /// Heap-ordered binary tree: vertex `v` is joined to `2v+1` and `2v+2`.
    pub fn binary_tree(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
        Self::new(n, &edges)
    }

    /// Vertex 0 joined to every other vertex.
    pub fn star(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Self::new(n, &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|a| a.contains(&v))
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    /// Breadth-first distances from `source`, restricted to `allowed` vertices.
    pub(crate) fn bfs_within(&self, source: usize, allowed: &[bool]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_vertices()];
        if !allowed[source] {
            return dist;
        }
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have a distance");
            for v in self.neighbors(u) {
                if allowed[v] && dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        self.bfs_within(source, &vec![true; self.num_vertices()])
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(Option::is_some)
    }

    /// Parses the text format: one `u v` edge per line, `#` starts a comment.
    /// The vertex count is one more than the largest id mentioned.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse(format!(
                    "line {}: expected 'u v', got '{}'",
                    lineno + 1,
                    raw.trim()
                )));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad vertex id '{s}'", lineno + 1)))
            };
            let (u, v) = (parse(fields[0])?, parse(fields[1])?);
            n = n.max(u + 1).max(v + 1);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(Error::Parse("graph file contains no edges".into()));
        }
        Self::new(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Two-rooted spanning forest that drives QuAND scheduling.
///
/// The root edge `(u, v)` joins the two roots; every other member vertex has
/// exactly one parent, one step closer to its root. Vertices outside both
/// trees (idle wires of a partial synthesis) have no tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingTree {
    pub root_edge: (usize, usize),
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    /// Which root each vertex hangs from.
    pub tree_of: Vec<Option<usize>>,
    /// Children per vertex, ascending.
    pub children: Vec<Vec<usize>>,
}

impl BranchingTree {
    /// Assembles a tree from explicit parent pointers, computing depths and
    /// children lists.
    pub fn from_parents(root_edge: (usize, usize), parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        let (u, v) = root_edge;
        if u >= n || v >= n || u == v {
            return Err(Error::Synthesis(format!("bad root edge ({u}, {v})")));
        }
        if parent[u].is_some() || parent[v].is_some() {
            return Err(Error::Synthesis("roots cannot have parents".into()));
        }
        let mut children = vec![Vec::new(); n];
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || p == c {
                    return Err(Error::Synthesis(format!("bad parent {p} for vertex {c}")));
                }
                children[p].push(c);
            }
        }
        let mut depth = vec![0; n];
        let mut tree_of = vec![None; n];
        for root in [u, v] {
            tree_of[root] = Some(root);
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &c in &children[x] {
                    if tree_of[c].is_some() {
                        return Err(Error::Synthesis("parent pointers form a cycle".into()));
                    }
                    tree_of[c] = Some(root);
                    depth[c] = depth[x] + 1;
                    queue.push_back(c);
                }
            }
        }
        for (c, p) in parent.iter().enumerate() {
            if p.is_some() && tree_of[c].is_none() {
                return Err(Error::Synthesis(format!(
                    "vertex {c} is not connected to either root"
                )));
            }
        }
        Ok(BranchingTree {
            root_edge,
            parent,
            depth,
            tree_of,
            children,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn roots(&self) -> [usize; 2] {
        [self.root_edge.0, self.root_edge.1]
    }

    /// Maximum vertex depth over both trees.
    pub fn height(&self) -> usize {
        (0..self.num_vertices())
            .filter(|&v| self.tree_of[v].is_some())
            .map(|v| self.depth[v])
            .max()
            .unwrap_or(0)
    }

    pub fn height_of(&self, root: usize) -> usize {
        self.members(root)
            .into_iter()
            .map(|v| self.depth[v])
            .max()
            .unwrap_or(0)
    }

    /// Vertices hanging from `root`, ascending, root included.
    pub fn members(&self, root: usize) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| self.tree_of[v] == Some(root))
            .collect()
    }

    /// Non-root members, i.e. the wires that act as a QuAND child once.
    pub fn non_roots(&self) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| self.parent[v].is_some())
            .collect()
    }

    /// Checks that every parent edge is a graph edge.
    pub fn respects(&self, graph: &ConnectivityGraph) -> bool {
        graph.has_edge(self.root_edge.0, self.root_edge.1)
            && self
                .parent
                .iter()
                .enumerate()
                .all(|(c, p)| p.is_none_or(|p| graph.has_edge(c, p)))
    }
}
