//! Dense, oriented adjacency bit-matrix.
//!
//! Each undirected edge {u, v} is stored once, as bit (min(u,v), max(u,v)),
//! so the matrix is strictly upper-triangular and its set-bit count equals
//! the undirected edge count. Rows are `u64` word vectors (see
//! [`crate::bits`]), which is exactly the layout the AND + BitCount kernel
//! consumes.
//!
//! Memory is |V|^2 / 8 bytes. That is fine up to a few tens of thousands
//! of vertices; beyond that, use the sliced representation in
//! [`crate::slicing`], which only stores the non-zero parts.

use crate::bits;
use crate::graph::Graph;

/// Strictly upper-triangular bit-matrix of an undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedAdjacency {
    vertex_count: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

/// Builds the oriented bit-matrix of `g`. See the module docs for the
/// memory footprint.
pub fn orient(g: &Graph) -> OrientedAdjacency {
    let mut adj = OrientedAdjacency::zeroed(g.vertex_count());
    for &(u, v) in g.edges() {
        adj.set_bit(u as usize, v as usize);
    }
    adj
}

impl OrientedAdjacency {
    pub(crate) fn zeroed(vertex_count: usize) -> Self {
        let words_per_row = bits::words_for(vertex_count);
        OrientedAdjacency {
            vertex_count,
            words_per_row,
            words: vec![0; vertex_count * words_per_row],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Row `i` as a |V|-bit vector; bit `j` is set iff edge (i, j) with
    /// i < j exists.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn bit(&self, i: usize, j: usize) -> bool {
        assert!(i < self.vertex_count && j < self.vertex_count);
        bits::get(self.row(i), j)
    }

    /// Number of set bits; equals the undirected edge count.
    pub fn set_bit_count(&self) -> u64 {
        bits::popcount(&self.words)
    }

    /// Set bits in row-major order, i.e. the canonical edge list.
    pub fn set_bits(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count).flat_map(move |i| {
            bits::ones(self.row(i)).map(move |j| (i as u32, j as u32))
        })
    }

    pub(crate) fn set_bit(&mut self, i: usize, j: usize) {
        debug_assert!(i < j, "oriented matrix is strictly upper-triangular");
        debug_assert!(j < self.vertex_count);
        bits::set(
            &mut self.words[i * self.words_per_row..(i + 1) * self.words_per_row],
            j,
        );
    }

    /// The transpose as a flat word matrix: row `j` of the result is
    /// column j of `self`, i.e. the in-neighbor bit-vector C_j. Same
    /// memory footprint as `self`.
    pub(crate) fn transposed_words(&self) -> Vec<u64> {
        let mut t = vec![0u64; self.words.len()];
        for (i, j) in self.set_bits() {
            bits::set(
                &mut t[j as usize * self.words_per_row..(j as usize + 1) * self.words_per_row],
                i as usize,
            );
        }
        t
    }

    pub(crate) fn words_per_row(&self) -> usize {
        self.words_per_row
    }
}
