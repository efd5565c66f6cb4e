//! Shared fixtures for the unit tests of this crate.

use crate::graph::Graph;

/// The 4-vertex, 5-edge worked example used throughout the crate docs:
/// edges (0,1), (0,2), (1,2), (1,3), (2,3). Oriented rows read 0110, 0011,
/// 0001, 0000 (column 0 leftmost); it contains exactly two triangles,
/// 0-1-2 and 1-2-3.
pub fn toy_graph() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Triangle count by brute-force enumeration of all C(n, 3) vertex
/// triples. Only suitable for small n; completely independent of the
/// bit-matrix machinery, so it anchors the equivalence tests.
pub fn brute_force_triangles(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= 512, "brute force is O(n^3)");
    let mut adj = vec![false; n * n];
    for &(u, v) in g.edges() {
        adj[u as usize * n + v as usize] = true;
        adj[v as usize * n + u as usize] = true;
    }
    let mut count = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            if !adj[a * n + b] {
                continue;
            }
            for c in (b + 1)..n {
                if adj[a * n + c] && adj[b * n + c] {
                    count += 1;
                }
            }
        }
    }
    count
}
