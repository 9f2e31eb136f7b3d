use crate::error::{Error, Result};
use crate::ir::{BranchingTree, ConnectivityGraph};

/// Builds the two-rooted tree used for an n-CZ over every vertex of `graph`.
///
/// Every edge is tried as root edge; each vertex joins the root it is closer
/// to (ties go to the lower-index root) and hangs from its lowest-index
/// neighbour one layer up. The edge with the smallest maximum height wins,
/// ties broken by the lexicographically smallest edge. `root_edge` skips the
/// search.
pub fn build_branching_tree(
    graph: &ConnectivityGraph,
    root_edge: Option<(usize, usize)>,
) -> Result<BranchingTree> {
    build_branching_tree_within(graph, &vec![true; graph.num_vertices()], root_edge)
}

/// As [`build_branching_tree`], restricted to the vertices flagged in
/// `members`. Other vertices stay outside both trees.
pub fn build_branching_tree_within(
    graph: &ConnectivityGraph,
    members: &[bool],
    root_edge: Option<(usize, usize)>,
) -> Result<BranchingTree> {
    let n = graph.num_vertices();
    if members.len() != n {
        return Err(Error::InvalidArgument(format!(
            "member mask has {} entries for {n} vertices",
            members.len()
        )));
    }
    let count = members.iter().filter(|&&m| m).count();
    if count < 2 {
        return Err(Error::Graph(
            "a branching tree needs at least 2 vertices".into(),
        ));
    }
    let first = members.iter().position(|&m| m).expect("count >= 2");
    if graph
        .bfs_within(first, members)
        .iter()
        .zip(members)
        .any(|(d, &m)| m && d.is_none())
    {
        return Err(Error::Disconnected);
    }
    if let Some((u, v)) = root_edge {
        if u >= n || v >= n || !members[u] || !members[v] || !graph.has_edge(u, v) {
            return Err(Error::Graph(format!(
                "root edge ({u}, {v}) is not an edge between synthesized vertices"
            )));
        }
        return Ok(tree_for_edge(graph, members, (u, v)));
    }
    let mut best: Option<BranchingTree> = None;
    for (u, v) in graph.edges() {
        if !(members[u] && members[v]) {
            continue;
        }
        let tree = tree_for_edge(graph, members, (u, v));
        if best.as_ref().is_none_or(|b| tree.height() < b.height()) {
            best = Some(tree);
        }
    }
    best.ok_or(Error::Disconnected)
}

fn tree_for_edge(
    graph: &ConnectivityGraph,
    members: &[bool],
    (u, v): (usize, usize),
) -> BranchingTree {
    let n = graph.num_vertices();
    let du = graph.bfs_within(u, members);
    let dv = graph.bfs_within(v, members);
    let (lo, hi) = (u.min(v), u.max(v));
    let (dlo, dhi) = if lo == u { (&du, &dv) } else { (&dv, &du) };
    let side: Vec<Option<usize>> = (0..n)
        .map(|w| match (dlo[w], dhi[w]) {
            (Some(a), Some(b)) => Some(if a <= b { lo } else { hi }),
            _ => None,
        })
        .collect();
    let dist = |root: usize, w: usize| if root == lo { dlo[w] } else { dhi[w] };
    let parent: Vec<Option<usize>> = (0..n)
        .map(|w| {
            let root = side[w]?;
            let d = dist(root, w)?;
            if d == 0 {
                return None;
            }
            graph
                .neighbors(w)
                .find(|&x| side[x] == Some(root) && dist(root, x) == Some(d - 1))
        })
        .collect();
    BranchingTree::from_parents((u, v), parent).expect("BFS parents form a forest")
}

/// Single tree over `members` hanging from `root`, joined by the root edge
/// `(root, target)` to a childless `target`.
pub(crate) fn single_tree(
    graph: &ConnectivityGraph,
    members: &[bool],
    root: usize,
    target: usize,
) -> Option<BranchingTree> {
    let dist = graph.bfs_within(root, members);
    if members.iter().zip(&dist).any(|(&m, d)| m && d.is_none()) {
        return None;
    }
    let parent = (0..graph.num_vertices())
        .map(|w| {
            let d = dist[w].filter(|&d| d > 0)?;
            graph.neighbors(w).find(|&x| dist[x] == Some(d - 1))
        })
        .collect();
    BranchingTree::from_parents((root, target), parent).ok()
}
