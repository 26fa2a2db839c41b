use std::collections::VecDeque;

use super::ConflictGraph;

const INF: usize = usize::MAX;

/// Maximum-cardinality matching in local (left, right) positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub mate_left: Vec<Option<usize>>,
    pub mate_right: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.mate_left.iter().filter(|m| m.is_some()).count()
    }

    /// Matched pairs as local positions, ordered by left vertex.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate_left
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.map(|v| (u, v)))
            .collect()
    }

    /// True when some alternating path joins two free vertices, i.e. the
    /// matching could still grow.
    pub fn has_augmenting_path(&self, g: &ConflictGraph) -> bool {
        let mut seen = vec![false; g.left.len()];
        let mut queue: VecDeque<usize> = (0..g.left.len())
            .filter(|&u| self.mate_left[u].is_none())
            .collect();
        for &u in &queue {
            seen[u] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &v in &g.adj[u] {
                match self.mate_right[v] {
                    None => return true,
                    Some(w) if !seen[w] => {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        false
    }
}

/// Hopcroft–Karp. Vertices and adjacency lists are visited in index order,
/// so the result is a deterministic function of the graph.
pub fn max_matching(g: &ConflictGraph) -> Matching {
    let nl = g.left.len();
    let nr = g.right.len();
    let mut mate_left: Vec<Option<usize>> = vec![None; nl];
    let mut mate_right: Vec<Option<usize>> = vec![None; nr];
    let mut dist = vec![INF; nl];
    let mut next_edge = vec![0usize; nl];

    loop {
        // layer free left vertices, stop at the first layer reaching a free right vertex
        let mut queue = VecDeque::new();
        for u in 0..nl {
            if mate_left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = INF;
        while let Some(u) = queue.pop_front() {
            if dist[u] >= found {
                continue;
            }
            for &v in &g.adj[u] {
                match mate_right[v] {
                    None => found = found.min(dist[u] + 1),
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if found == INF {
            break;
        }

        next_edge.iter_mut().for_each(|e| *e = 0);
        for root in 0..nl {
            if mate_left[root].is_none() {
                augment_from(root, g, &mut mate_left, &mut mate_right, &mut dist, &mut next_edge);
            }
        }
    }
    Matching {
        mate_left,
        mate_right,
    }
}

/// Iterative layered DFS; flips one shortest augmenting path if found.
fn augment_from(
    root: usize,
    g: &ConflictGraph,
    mate_left: &mut [Option<usize>],
    mate_right: &mut [Option<usize>],
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    // stack of (left vertex, right vertex used to reach the next level)
    let mut stack: Vec<usize> = vec![root];
    let mut via: Vec<usize> = Vec::new();
    while let Some(&u) = stack.last() {
        let mut advanced = false;
        while next_edge[u] < g.adj[u].len() {
            let v = g.adj[u][next_edge[u]];
            next_edge[u] += 1;
            match mate_right[v] {
                None => {
                    via.push(v);
                    // flip the path
                    for (&lu, &rv) in stack.iter().zip(&via) {
                        mate_left[lu] = Some(rv);
                        mate_right[rv] = Some(lu);
                    }
                    return true;
                }
                Some(w) if dist[w] != INF && dist[w] == dist[u] + 1 => {
                    via.push(v);
                    stack.push(w);
                    advanced = true;
                    break;
                }
                _ => {}
            }
        }
        if !advanced {
            dist[u] = INF;
            stack.pop();
            via.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    use crate::data::RandomStream;

    fn graph(nl: usize, nr: usize, edges: &[(usize, usize)]) -> ConflictGraph {
        let mut adj = vec![Vec::new(); nl];
        for &(u, v) in edges {
            adj[u].push(v);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        ConflictGraph {
            left: (0..nl).collect(),
            right: (nl..nl + nr).collect(),
            adj,
        }
    }

    fn brute(g: &ConflictGraph, u: usize, used: &mut Vec<bool>) -> usize {
        if u == g.left.len() {
            return 0;
        }
        let mut best = brute(g, u + 1, used);
        for &v in &g.adj[u] {
            if !used[v] {
                used[v] = true;
                best = best.max(1 + brute(g, u + 1, used));
                used[v] = false;
            }
        }
        best
    }

    #[test]
    fn empty_graph() {
        let g = graph(3, 2, &[]);
        assert_eq!(max_matching(&g).size(), 0);
    }

    #[test]
    fn complete_two_by_three() {
        let edges: Vec<_> = (0..2).flat_map(|u| (0..3).map(move |v| (u, v))).collect();
        let m = max_matching(&graph(2, 3, &edges));
        assert_eq!(m.size(), 2);
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = RandomStream::new(77, 0).rng();
        for _ in 0..300 {
            let nl = rng.random_range(0..=9);
            let nr = rng.random_range(0..=9);
            let p = rng.random::<f64>();
            let mut edges = Vec::new();
            for u in 0..nl {
                for v in 0..nr {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            let g = graph(nl, nr, &edges);
            let m = max_matching(&g);
            assert_eq!(m.size(), brute(&g, 0, &mut vec![false; nr]));
            assert!(!m.has_augmenting_path(&g));
            for (u, v) in m.pairs() {
                assert!(g.adj[u].contains(&v));
                assert_eq!(m.mate_right[v], Some(u));
            }
            assert_eq!(m, max_matching(&g));
        }
    }
}
