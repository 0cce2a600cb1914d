//! Pre-canonical forests as explicit graphs, and their reduction to walds.

use super::params::check_lambda;
use super::split::{LeafSet, Split};
use super::topology::Topology;
use super::wald::Wald;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub lambda: f64,
}

/// Graph with leaves `0..n` as its first vertices and a weight per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    n_leaves: usize,
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl Forest {
    pub fn new(n_leaves: usize) -> Forest {
        Forest {
            n_leaves,
            n_vertices: n_leaves,
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n_vertices += 1;
        self.n_vertices - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize, lambda: f64) {
        self.edges.push(Edge { a, b, lambda });
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_mut(&mut self) -> &mut [Edge] {
        &mut self.edges
    }

    fn validate(&self) -> Result<()> {
        for e in &self.edges {
            check_lambda(e.lambda)
                .map_err(|_| Error::InvalidForest(format!("edge weight {} outside [0, 1]", e.lambda)))?;
            if e.a >= self.n_vertices || e.b >= self.n_vertices {
                return Err(Error::InvalidForest("edge endpoint out of range".into()));
            }
            if e.a == e.b {
                return Err(Error::InvalidForest("self loop".into()));
            }
        }
        Ok(())
    }

    /// Adjacency lists as `(neighbour, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.a].push((e.b, i));
            adj[e.b].push((e.a, i));
        }
        adj
    }

    /// Leaf set of every connected component containing a leaf, indexed by
    /// vertex. Also checks that the graph is acyclic.
    fn component_leaves(&self, adj: &[Vec<(usize, usize)>]) -> Result<Vec<LeafSet>> {
        let mut comp = vec![usize::MAX; self.n_vertices];
        let mut sets = Vec::new();
        for start in 0..self.n_vertices {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = sets.len();
            let (mut set, mut nv, mut ne2) = (0u64, 0usize, 0usize);
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(v) = stack.pop() {
                nv += 1;
                ne2 += adj[v].len();
                if v < self.n_leaves {
                    set |= 1 << v;
                }
                for &(w, _) in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            if ne2 / 2 + 1 != nv {
                return Err(Error::InvalidForest("graph contains a cycle".into()));
            }
            sets.push(set);
        }
        Ok(comp.into_iter().map(|c| sets[c]).collect())
    }
}

/// The split induced by each edge, in edge order. Every leafless branch makes
/// a side empty, which is reported as an error.
pub fn edge_splits(f: &Forest) -> Result<Vec<Split>> {
    f.validate()?;
    let adj = f.adjacency();
    let comp = f.component_leaves(&adj)?;
    let mut out = Vec::with_capacity(f.edges.len());
    for (i, e) in f.edges.iter().enumerate() {
        let mut side = 0u64;
        let mut stack = vec![(e.b, e.a)];
        while let Some((v, from)) = stack.pop() {
            if v < f.n_leaves {
                side |= 1 << v;
            }
            for &(w, j) in &adj[v] {
                if w != from && j != i {
                    stack.push((w, v));
                }
            }
        }
        let s =
            Split::new(side, comp[e.a]).ok_or_else(|| Error::InvalidForest("edge with no leaf on one side".into()))?;
        out.push(s);
    }
    Ok(out)
}

/// Reduces a forest to its canonical wald.
///
/// Edges of weight 1 are deleted, internal edges of weight 0 contracted,
/// unlabelled vertices of degree 0 or 1 dropped together with their dangling
/// edge, and unlabelled degree-2 vertices suppressed by merging their two
/// edges into one of weight `λ₁ + λ₂ - λ₁λ₂`.
pub fn canonicalize(f: &Forest) -> Result<Wald> {
    f.validate()?;
    let n = f.n_leaves;
    let mut edges: Vec<(usize, usize, f64)> = f
        .edges
        .iter()
        .filter(|e| e.lambda < 1.0)
        .map(|e| (e.a, e.b, e.lambda))
        .collect();
    loop {
        if let Some(i) = edges.iter().position(|&(a, b, l)| l == 0.0 && a >= n && b >= n) {
            let (a, b, _) = edges.swap_remove(i);
            for e in edges.iter_mut() {
                if e.0 == b {
                    e.0 = a;
                }
                if e.1 == b {
                    e.1 = a;
                }
                if e.0 == e.1 {
                    return Err(Error::InvalidForest("graph contains a cycle".into()));
                }
            }
            continue;
        }
        let mut deg = vec![0usize; f.n_vertices];
        for &(a, b, _) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        if let Some(u) = (0..n).find(|&u| deg[u] > 1) {
            return Err(Error::InvalidForest(format!("leaf {} has degree {}", u + 1, deg[u])));
        }
        if let Some(v) = (n..f.n_vertices).find(|&v| deg[v] == 1) {
            let i = edges.iter().position(|e| e.0 == v || e.1 == v).unwrap();
            edges.swap_remove(i);
            continue;
        }
        if let Some(v) = (n..f.n_vertices).find(|&v| deg[v] == 2) {
            let i = edges.iter().position(|e| e.0 == v || e.1 == v).unwrap();
            let e1 = edges.swap_remove(i);
            let j = edges.iter().position(|e| e.0 == v || e.1 == v).unwrap();
            let e2 = edges.swap_remove(j);
            let x = if e1.0 == v { e1.1 } else { e1.0 };
            let y = if e2.0 == v { e2.1 } else { e2.0 };
            if x == y {
                return Err(Error::InvalidForest("graph contains a cycle".into()));
            }
            edges.push((x, y, e1.2 + e2.2 - e1.2 * e2.2));
            continue;
        }
        break;
    }

    // Leaves joined only through zero-weight edges coincide.
    let mut uf: Vec<usize> = (0..f.n_vertices).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for &(a, b, l) in &edges {
        if l == 0.0 {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            uf[ra] = rb;
        }
    }
    let mut owner = vec![usize::MAX; f.n_vertices];
    for u in 0..n {
        let r = find(&mut uf, u);
        if owner[r] != usize::MAX {
            return Err(Error::CoincidentLeaves(owner[r] + 1, u + 1));
        }
        owner[r] = u;
    }

    let mut reduced = Forest::new(n);
    reduced.n_vertices = f.n_vertices;
    for &(a, b, l) in &edges {
        reduced.add_edge(a, b, l);
    }
    let splits = edge_splits(&reduced)?;
    let mut pairs: Vec<(Split, f64)> = splits.into_iter().zip(edges.iter().map(|e| e.2)).collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let topology = Topology::new(n, pairs.iter().map(|p| p.0).collect())?;
    Wald::new(topology, pairs.iter().map(|p| p.1).collect())
}
