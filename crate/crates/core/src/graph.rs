//! Ground-truth bipartite graph storage.
//!
//! Black vertices `0..n_b` and white vertices `0..n_w` use independent dense
//! id spaces. Adjacency is kept in compressed sparse row form: one sorted,
//! duplicate-free run of white ids per black vertex, so an edge lookup is a
//! binary search over that run.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_b: u32,
    n_w: u32,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl BipartiteGraph {
    /// A graph with the given side sizes and no edges.
    pub fn empty(n_b: u32, n_w: u32) -> Self {
        Self {
            n_b,
            n_w,
            offsets: vec![0; n_b as usize + 1],
            neighbors: Vec::new(),
        }
    }

    /// Complete bipartite graph `K_{n_b, n_w}`.
    pub fn complete(n_b: u32, n_w: u32) -> Self {
        let row: Vec<u32> = (0..n_w).collect();
        Self::from_rows(n_w, (0..n_b).map(|_| row.clone()).collect())
            .expect("complete rows are in range")
    }

    /// Builds a graph from `(black, white)` pairs. Duplicate pairs are
    /// collapsed; the number removed is returned alongside the graph.
    pub fn from_edges<I>(n_b: u32, n_w: u32, edges: I) -> Result<(Self, u64)>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (b, w) in edges {
            if b >= n_b {
                return Err(Error::BlackOutOfRange { vertex: b, n_b });
            }
            if w >= n_w {
                return Err(Error::WhiteOutOfRange { vertex: w, n_w });
            }
            pairs.push((b, w));
        }
        Ok(Self::from_pairs(n_b, n_w, pairs))
    }

    /// Same as [`from_edges`](Self::from_edges) but takes ownership of an
    /// already range-checked pair list.
    pub(crate) fn from_pairs(n_b: u32, n_w: u32, mut pairs: Vec<(u32, u32)>) -> (Self, u64) {
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        let duplicates = (before - pairs.len()) as u64;

        let mut offsets = vec![0usize; n_b as usize + 1];
        for &(b, _) in &pairs {
            offsets[b as usize + 1] += 1;
        }
        for i in 0..n_b as usize {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = pairs.into_iter().map(|(_, w)| w).collect();
        (
            Self {
                n_b,
                n_w,
                offsets,
                neighbors,
            },
            duplicates,
        )
    }

    /// Builds a graph from one neighbor list per black vertex.
    pub fn from_rows(n_w: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n_b = rows.len() as u32;
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut neighbors = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        offsets.push(0);
        for mut row in rows {
            row.sort_unstable();
            row.dedup();
            if let Some(&w) = row.last() {
                if w >= n_w {
                    return Err(Error::WhiteOutOfRange { vertex: w, n_w });
                }
            }
            neighbors.extend_from_slice(&row);
            offsets.push(neighbors.len());
        }
        Ok(Self {
            n_b,
            n_w,
            offsets,
            neighbors,
        })
    }

    pub fn n_black(&self) -> u32 {
        self.n_b
    }

    pub fn n_white(&self) -> u32 {
        self.n_w
    }

    /// Number of edges.
    pub fn m(&self) -> u64 {
        self.neighbors.len() as u64
    }

    /// Sorted white neighbors of black vertex `b`.
    pub fn neighbors(&self, b: u32) -> Result<&[u32]> {
        self.check_black(b)?;
        Ok(self.row(b))
    }

    #[inline]
    pub(crate) fn row(&self, b: u32) -> &[u32] {
        let b = b as usize;
        &self.neighbors[self.offsets[b]..self.offsets[b + 1]]
    }

    /// Exact degree of black vertex `b`. Ground truth only: this never goes
    /// through a probe oracle.
    pub fn true_degree(&self, b: u32) -> Result<u32> {
        self.check_black(b)?;
        Ok(self.row(b).len() as u32)
    }

    /// Degrees of all black vertices, indexed by id.
    pub fn black_degrees(&self) -> Vec<u32> {
        self.offsets
            .windows(2)
            .map(|w| (w[1] - w[0]) as u32)
            .collect()
    }

    /// Degrees of all white vertices, indexed by id.
    pub fn white_degrees(&self) -> Vec<u32> {
        let mut degrees = vec![0u32; self.n_w as usize];
        for &w in &self.neighbors {
            degrees[w as usize] += 1;
        }
        degrees
    }

    /// Whether `(b, w)` is an edge.
    pub fn has_edge(&self, b: u32, w: u32) -> Result<bool> {
        self.check_black(b)?;
        if w >= self.n_w {
            return Err(Error::WhiteOutOfRange {
                vertex: w,
                n_w: self.n_w,
            });
        }
        Ok(self.row(b).binary_search(&w).is_ok())
    }

    /// All edges as `(black, white)` pairs in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n_b).flat_map(move |b| self.row(b).iter().map(move |&w| (b, w)))
    }

    /// The transposed graph: white vertices become black and vice versa.
    pub fn swap_sides(&self) -> Self {
        let mut offsets = vec![0usize; self.n_w as usize + 1];
        for &w in &self.neighbors {
            offsets[w as usize + 1] += 1;
        }
        for i in 0..self.n_w as usize {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; self.neighbors.len()];
        // Rows are visited in ascending black id, so every transposed row
        // comes out sorted.
        for (b, w) in self.edges() {
            let slot = &mut cursor[w as usize];
            neighbors[*slot] = b;
            *slot += 1;
        }
        Self {
            n_b: self.n_w,
            n_w: self.n_b,
            offsets,
            neighbors,
        }
    }

    /// Turns an undirected simple graph on `n` vertices into a bipartite
    /// graph with one clone of the vertex set on each side. `{i, j}` becomes
    /// both `(i, j)` and `(j, i)`, so black degree equals unipartite degree.
    ///
    /// Self-loops are rejected; repeated edges are collapsed, and the number
    /// collapsed is returned with the graph.
    pub fn clone_to_bipartite<I>(n: u32, edges: I) -> Result<(Self, u64)>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut pairs = Vec::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            for v in [i, j] {
                if v >= n {
                    return Err(Error::BlackOutOfRange { vertex: v, n_b: n });
                }
            }
            pairs.push((i, j));
            pairs.push((j, i));
        }
        let (graph, duplicates) = Self::from_pairs(n, n, pairs);
        // Each repeated undirected edge shows up twice in the directed pair list.
        Ok((graph, duplicates / 2))
    }

    fn check_black(&self, b: u32) -> Result<()> {
        if b >= self.n_b {
            return Err(Error::BlackOutOfRange {
                vertex: b,
                n_b: self.n_b,
            });
        }
        Ok(())
    }
}
