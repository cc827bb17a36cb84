//! Simple undirected graphs: incidence matrices, girth and vertex automorphisms.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::{BitMatrix, Permutation};

/// Default vertex cap for automorphism search.
pub const DEFAULT_VERTEX_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Builds a graph with edges sorted lexicographically.
    pub fn new(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        norm.sort_unstable();
        Self::with_edge_order(num_vertices, &norm)
    }

    /// Keeps the given edge order, so edge `i` is bit `i`.
    ///
    /// Used when a code fixes its own edge labelling.
    pub fn with_edge_order(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if u == v {
                return Err(Error::Invalid(format!("self-loop at vertex {u}")));
            }
            if v >= num_vertices {
                return Err(Error::Invalid(format!(
                    "edge ({u},{v}) leaves 0..{num_vertices}"
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::Invalid(format!("duplicate edge ({u},{v})")));
            }
            out.push((u, v));
        }
        Ok(SimpleGraph {
            num_vertices,
            edges: out,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.iter().position(|&e| e == key)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.num_vertices;
        let mut a = vec![vec![false; n]; n];
        for &(u, v) in &self.edges {
            a[u][v] = true;
            a[v][u] = true;
        }
        a
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.num_vertices];
        for &(u, v) in &self.edges {
            nb[u].push(v);
            nb[v].push(u);
        }
        nb
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let nb = self.neighbours();
        let mut seen = vec![false; self.num_vertices];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &nb[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Vertex-by-edge incidence matrix; column `e` marks both endpoints of edge `e`.
    pub fn incidence_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.num_vertices, self.edges.len());
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            m.set(u, e, true);
            m.set(v, e, true);
        }
        m
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let nb = self.neighbours();
        let n = self.num_vertices;
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &nb[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Parses `num_vertices` followed by one `u v` line per edge (0-indexed).
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("vertex count: {e}")))?;
        let mut edges = Vec::new();
        for l in lines {
            let nums: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<_>>()?;
            match nums[..] {
                [u, v] => edges.push((u, v)),
                _ => return Err(Error::Parse(format!("expected `u v`, got {l:?}"))),
            }
        }
        Self::new(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.num_vertices);
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Builder names accepted on the command line: `k4`, `kN`, `k33`, `kA,B`,
    /// `petersen`, `ring:n`.
    pub fn from_name(name: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown graph {name:?}"));
        match name {
            "petersen" => return Ok(petersen()),
            "k33" => return complete_bipartite(3, 3),
            _ => {}
        }
        if let Some(n) = name.strip_prefix("ring:") {
            return ring(n.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = name.strip_prefix('k') {
            if let Some((a, b)) = rest.split_once(',') {
                return complete_bipartite(
                    a.parse().map_err(|_| bad())?,
                    b.parse().map_err(|_| bad())?,
                );
            }
            return complete(rest.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

pub fn complete(n: usize) -> Result<SimpleGraph> {
    if n < 2 {
        return Err(Error::Invalid(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    SimpleGraph::new(n, &edges)
}

/// Parts are `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<SimpleGraph> {
    if a == 0 || b == 0 {
        return Err(Error::Invalid(
            "complete bipartite graph needs nonempty parts".into(),
        ));
    }
    let edges: Vec<_> = (0..a)
        .flat_map(|u| (0..b).map(move |v| (u, a + v)))
        .collect();
    SimpleGraph::new(a + b, &edges)
}

/// Outer 5-cycle on `0..5`, spokes `i–i+5`, inner pentagram on `5..10`.
pub fn petersen() -> SimpleGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    SimpleGraph::new(10, &edges).expect("petersen edges are valid")
}

pub fn ring(n: usize) -> Result<SimpleGraph> {
    if n < 3 {
        return Err(Error::Invalid(format!("ring needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::new(n, &edges)
}

pub fn path(n: usize) -> Result<SimpleGraph> {
    if n < 2 {
        return Err(Error::Invalid(format!("path needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    SimpleGraph::new(n, &edges)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GraphAutomorphism {
    pub vertex_perm: Permutation,
    pub edge_perm: Permutation,
}

/// The edge relabelling induced by a vertex permutation, if it preserves the edge set.
pub fn induced_edge_perm(g: &SimpleGraph, vertex_perm: &Permutation) -> Option<Permutation> {
    let index: HashMap<(usize, usize), usize> =
        g.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let images: Option<Vec<usize>> = g
        .edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (vertex_perm.apply(u), vertex_perm.apply(v));
            index.get(&if a < b { (a, b) } else { (b, a) }).copied()
        })
        .collect();
    Permutation::from_images(images?).ok()
}

/// All vertex automorphisms, sorted by vertex image array.
pub fn graph_automorphisms(g: &SimpleGraph, vertex_cap: usize) -> Result<Vec<GraphAutomorphism>> {
    let n = g.num_vertices;
    if n > vertex_cap {
        return Err(Error::CapExceeded(format!(
            "{n} vertices exceeds cap {vertex_cap}"
        )));
    }
    if n == 0 {
        return Ok(vec![GraphAutomorphism {
            vertex_perm: Permutation::identity(0),
            edge_perm: Permutation::identity(g.num_edges()),
        }]);
    }
    let adj = g.adjacency();
    let deg = g.degrees();

    fn extend(
        v: usize,
        img: &mut Vec<usize>,
        used: &mut [bool],
        adj: &[Vec<bool>],
        deg: &[usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = adj.len();
        if v == n {
            out.push(img.clone());
            return;
        }
        for c in 0..n {
            if used[c] || deg[c] != deg[v] {
                continue;
            }
            if (0..v).any(|u| adj[u][v] != adj[img[u]][c]) {
                continue;
            }
            used[c] = true;
            img.push(c);
            extend(v + 1, img, used, adj, deg, out);
            img.pop();
            used[c] = false;
        }
    }

    let mut found: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .filter(|&c| deg[c] == deg[0])
        .flat_map_iter(|c| {
            let mut used = vec![false; n];
            used[c] = true;
            let mut img = vec![c];
            let mut out = Vec::new();
            extend(1, &mut img, &mut used, &adj, &deg, &mut out);
            out
        })
        .collect();
    found.sort();
    Ok(found
        .into_iter()
        .map(|images| {
            let vertex_perm = Permutation::from_images(images).expect("search yields bijections");
            let edge_perm =
                induced_edge_perm(g, &vertex_perm).expect("automorphism preserves edges");
            GraphAutomorphism {
                vertex_perm,
                edge_perm,
            }
        })
        .collect())
}
