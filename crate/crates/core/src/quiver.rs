//! Quivers, integer weights and the structural transforms used by the cell
//! classification.
//!
//! Vertex and arrow ids are opaque strings; all arithmetic works on dense
//! indices into [`Quiver::vertices`] and [`Quiver::arrows`].

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// A finite directed multigraph. Loops and parallel arrows are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

/// Integer weight on the vertices of a quiver, indexed like [`Quiver::vertices`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    /// Per-component totals, keyed by the smallest vertex index of the component.
    pub fn component_totals(&self, q: &Quiver) -> BTreeMap<usize, i64> {
        let comp = q.component_labels();
        let mut totals = BTreeMap::new();
        for (v, &c) in comp.iter().enumerate() {
            *totals.entry(c).or_insert(0) += self.0[v];
        }
        totals
    }

    pub fn is_balanced(&self, q: &Quiver) -> bool {
        self.component_totals(q).values().all(|&t| t == 0)
    }
}

/// Undirected multigraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    pub name: String,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(name: impl Into<String>, n: usize, edges: Vec<(usize, usize)>) -> Self {
        UndirectedGraph {
            name: name.into(),
            n,
            edges,
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }
}

/// Maximal biconnected pieces of a quiver with their balanced weights.
#[derive(Debug, Clone)]
pub struct PrimeComponent {
    pub quiver: Quiver,
    pub weight: Weight,
    /// Indices (in the original quiver) of the vertices kept in this component.
    pub vertex_map: Vec<usize>,
    /// Indices (in the original quiver) of the arrows kept in this component.
    pub arrow_map: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PrimeDecomposition {
    pub components: Vec<PrimeComponent>,
    /// Cut vertices of the original quiver shared by two or more components.
    pub cut_vertices: Vec<usize>,
}

impl Quiver {
    pub fn new<V, A>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex id `{v}`")));
            }
        }
        let mut arrow_index = HashMap::new();
        let mut list = Vec::new();
        for (id, tail, head) in arrows {
            let t = *vertex_index
                .get(&tail)
                .ok_or_else(|| Error::UnknownVertex(tail.clone()))?;
            let h = *vertex_index
                .get(&head)
                .ok_or_else(|| Error::UnknownVertex(head.clone()))?;
            if arrow_index.insert(id.clone(), list.len()).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow id `{id}`")));
            }
            list.push(Arrow { id, tail: t, head: h });
        }
        Ok(Quiver {
            vertices,
            arrows: list,
            vertex_index,
            arrow_index,
        })
    }

    /// Builds a quiver from index pairs, naming vertices `v0..` and arrows `a0..`.
    pub fn from_indices(n: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let arrs = arrows
            .iter()
            .enumerate()
            .map(|(i, &(t, h))| {
                let tail = vs.get(t).cloned().unwrap_or_else(|| format!("v{t}"));
                let head = vs.get(h).cloned().unwrap_or_else(|| format!("v{h}"));
                (format!("a{i}"), tail, head)
            })
            .collect::<Vec<_>>();
        Quiver::new(vs.clone(), arrs)
    }

    /// Like [`Quiver::new`] but also checks that no oriented cycle exists.
    pub fn new_acyclic<V, A>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let q = Quiver::new(vertices, arrows)?;
        if !q.validate_acyclic() {
            return Err(Error::CyclicQuiver);
        }
        Ok(q)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn arrow(&self, id: &str) -> Result<usize> {
        self.arrow_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    /// Weight from `(vertex id, value)` pairs; unlisted vertices get zero.
    pub fn weight_from_pairs<'a>(
        &self,
        pairs: impl IntoIterator<Item = (&'a str, i64)>,
    ) -> Result<Weight> {
        let mut w = vec![0; self.num_vertices()];
        for (id, value) in pairs {
            w[self.vertex(id)?] = value;
        }
        Ok(Weight(w))
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.head == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.tail == v).count()
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.in_degree(v) == 0
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_degree(v) == 0
    }

    /// True iff there is no oriented cycle (loops count as cycles).
    pub fn validate_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Kahn's algorithm; ties resolved by smallest vertex index.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.head] += 1;
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.tail == v) {
                indeg[a.head] -= 1;
                if indeg[a.head] == 0 {
                    ready.insert(a.head);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Connected component label of each vertex (undirected sense), the
    /// label being the smallest vertex index in the component.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.num_vertices());
        for a in &self.arrows {
            uf.union(a.tail, a.head);
        }
        let mut min_of_root: HashMap<usize, usize> = HashMap::new();
        for v in 0..self.num_vertices() {
            let r = uf.find(v);
            let e = min_of_root.entry(r).or_insert(v);
            *e = (*e).min(v);
        }
        (0..self.num_vertices())
            .map(|v| min_of_root[&uf.find(v)])
            .collect()
    }

    pub fn num_components(&self) -> usize {
        let labels = self.component_labels();
        labels.iter().collect::<HashSet<_>>().len()
    }

    /// `|Q₁| − |Q₀| + #components`, the dimension of the flow space.
    pub fn chi(&self) -> i64 {
        self.num_arrows() as i64 - self.num_vertices() as i64 + self.num_components() as i64
    }

    /// Same quiver without the given arrow.
    pub fn remove_arrow(&self, id: &str) -> Result<Quiver> {
        let idx = self.arrow(id)?;
        let arrows = self
            .arrows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, a)| {
                (
                    a.id.clone(),
                    self.vertices[a.tail].clone(),
                    self.vertices[a.head].clone(),
                )
            })
            .collect::<Vec<_>>();
        Quiver::new(self.vertices.clone(), arrows)
    }

    /// Disjoint union; ids of the second quiver are prefixed to stay unique.
    pub fn disjoint_union(&self, other: &Quiver, prefix: &str) -> Result<Quiver> {
        let mut vs = self.vertices.clone();
        vs.extend(other.vertices.iter().map(|v| format!("{prefix}{v}")));
        let mut arrs: Vec<(String, String, String)> = self
            .arrows
            .iter()
            .map(|a| {
                (
                    a.id.clone(),
                    self.vertices[a.tail].clone(),
                    self.vertices[a.head].clone(),
                )
            })
            .collect();
        arrs.extend(other.arrows.iter().map(|a| {
            (
                format!("{prefix}{}", a.id),
                format!("{prefix}{}", other.vertices[a.tail]),
                format!("{prefix}{}", other.vertices[a.head]),
            )
        }));
        Quiver::new(vs, arrs)
    }

    /// Finds the first reducible pattern: a valency-2 sink `v` with weight 1
    /// fed by arrows `a ≠ b`, where `a⁻` is a source of weight −1 distinct from `b⁻`.
    fn find_reducible_sink(&self, theta: &Weight) -> Option<(usize, usize, usize)> {
        for v in 0..self.num_vertices() {
            if theta.0[v] != 1 || self.out_degree(v) != 0 {
                continue;
            }
            let into: Vec<usize> = (0..self.num_arrows())
                .filter(|&i| self.arrows[i].head == v)
                .collect();
            if into.len() != 2 {
                continue;
            }
            for (a, b) in [(into[0], into[1]), (into[1], into[0])] {
                let src = self.arrows[a].tail;
                if self.is_source(src) && theta.0[src] == -1 && src != self.arrows[b].tail {
                    return Some((v, a, b));
                }
            }
        }
        None
    }

    /// Replaces a reducible valency-2 sink by a single arrow `c: a⁻ → b⁻`
    /// and raises the weight of `b⁻` by one. The new arrow reuses the id of `a`.
    pub fn contract_reducible_sink(&self, theta: &Weight) -> Result<(Quiver, Weight)> {
        let (v, a, b) = self.find_reducible_sink(theta).ok_or(Error::PatternAbsent)?;
        let new_head = self.arrows[b].tail;
        let vertices: Vec<String> = (0..self.num_vertices())
            .filter(|&u| u != v)
            .map(|u| self.vertices[u].clone())
            .collect();
        let mut arrows = Vec::new();
        for (i, arr) in self.arrows.iter().enumerate() {
            if i == b {
                continue;
            }
            let head = if i == a { new_head } else { arr.head };
            arrows.push((
                arr.id.clone(),
                self.vertices[arr.tail].clone(),
                self.vertices[head].clone(),
            ));
        }
        let q = Quiver::new(vertices, arrows)?;
        let mut w: Vec<i64> = (0..self.num_vertices())
            .filter(|&u| u != v)
            .map(|u| theta.0[u])
            .collect();
        w[q.vertex(&self.vertices[new_head])?] += 1;
        Ok((q, Weight(w)))
    }

    /// Splits the quiver into maximal biconnected subquivers and balances
    /// the weight at shared cut vertices so every block nets to zero.
    pub fn prime_decompose(&self, theta: &Weight) -> Result<PrimeDecomposition> {
        if !self.validate_acyclic() {
            return Err(Error::CyclicQuiver);
        }
        for (c, total) in theta.component_totals(self) {
            if total != 0 {
                return Err(Error::Unbalanced(self.vertices[c].clone()));
            }
        }
        let blocks = self.biconnected_blocks();
        // vertex -> blocks containing it
        let mut blocks_of: Vec<Vec<usize>> = vec![Vec::new(); self.num_vertices()];
        let block_vertices: Vec<Vec<usize>> = blocks
            .iter()
            .map(|arrs| {
                let mut vs: Vec<usize> = arrs
                    .iter()
                    .flat_map(|&i| [self.arrows[i].tail, self.arrows[i].head])
                    .collect();
                vs.sort_unstable();
                vs.dedup();
                vs
            })
            .collect();
        for (b, vs) in block_vertices.iter().enumerate() {
            for &v in vs {
                blocks_of[v].push(b);
            }
        }
        let cut_vertices: Vec<usize> = (0..self.num_vertices())
            .filter(|&v| blocks_of[v].len() > 1)
            .collect();

        // Leaf-inward balancing over the block-cut tree.
        let mut remaining: Vec<i64> = theta.0.clone();
        let mut block_weights: Vec<Option<Vec<i64>>> = vec![None; blocks.len()];
        let mut open_blocks_at: Vec<usize> = blocks_of.iter().map(Vec::len).collect();
        let mut done = vec![false; blocks.len()];
        let mut progress = true;
        while progress {
            progress = false;
            for b in 0..blocks.len() {
                if done[b] {
                    continue;
                }
                let open_cuts: Vec<usize> = block_vertices[b]
                    .iter()
                    .copied()
                    .filter(|&v| open_blocks_at[v] > 1)
                    .collect();
                if open_cuts.len() > 1 {
                    continue;
                }
                let mut w: Vec<i64> = block_vertices[b].iter().map(|&v| remaining[v]).collect();
                if let Some(&cut) = open_cuts.first() {
                    let pos = block_vertices[b].iter().position(|&v| v == cut).unwrap();
                    let others: i64 = w
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != pos)
                        .map(|(_, x)| x)
                        .sum();
                    w[pos] = -others;
                    remaining[cut] -= w[pos];
                    open_blocks_at[cut] -= 1;
                }
                if w.iter().sum::<i64>() != 0 {
                    return Err(Error::Unbalanced(
                        self.vertices[block_vertices[b][0]].clone(),
                    ));
                }
                block_weights[b] = Some(w);
                done[b] = true;
                progress = true;
            }
        }
        if done.iter().any(|d| !d) {
            return Err(Error::InvalidQuiver("block-cut structure is not a forest".into()));
        }
        // isolated vertices must carry zero weight
        for v in 0..self.num_vertices() {
            if blocks_of[v].is_empty() && theta.0[v] != 0 {
                return Err(Error::Unbalanced(self.vertices[v].clone()));
            }
        }

        let mut components = Vec::new();
        for (b, arrs) in blocks.iter().enumerate() {
            let vmap = block_vertices[b].clone();
            let vs: Vec<String> = vmap.iter().map(|&v| self.vertices[v].clone()).collect();
            let arrows: Vec<(String, String, String)> = arrs
                .iter()
                .map(|&i| {
                    let a = &self.arrows[i];
                    (
                        a.id.clone(),
                        self.vertices[a.tail].clone(),
                        self.vertices[a.head].clone(),
                    )
                })
                .collect();
            components.push(PrimeComponent {
                quiver: Quiver::new(vs, arrows)?,
                weight: Weight(block_weights[b].take().unwrap()),
                vertex_map: vmap,
                arrow_map: arrs.clone(),
            });
        }
        Ok(PrimeDecomposition {
            components,
            cut_vertices,
        })
    }

    /// Arrow sets of the biconnected blocks of the underlying multigraph
    /// (Hopcroft–Tarjan). Parallel arrows land in the same block.
    pub fn biconnected_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, a) in self.arrows.iter().enumerate() {
            if a.tail == a.head {
                continue;
            }
            adj[a.tail].push((a.head, i));
            adj[a.head].push((a.tail, i));
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // iterative DFS: (vertex, parent edge, next adjacency index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
                if *idx < adj[v].len() {
                    let (w, e) = adj[v][*idx];
                    *idx += 1;
                    if e == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push(e);
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, e, 0));
                    } else if disc[w] < disc[v] {
                        edge_stack.push(e);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(u, _, _)) = stack.last() {
                        low[u] = low[u].min(low[v]);
                        if low[v] >= disc[u] {
                            let mut block = Vec::new();
                            while let Some(e) = edge_stack.pop() {
                                block.push(e);
                                if e == pe {
                                    break;
                                }
                            }
                            block.sort_unstable();
                            blocks.push(block);
                        }
                    }
                }
            }
        }
        // loops form their own blocks
        for (i, a) in self.arrows.iter().enumerate() {
            if a.tail == a.head {
                blocks.push(vec![i]);
            }
        }
        blocks.sort();
        blocks
    }
}

/// Places a valency-2 sink on each edge; original vertices become sources.
/// Vertices are named `g0..` (original) and `e0..` (edge sinks); the two
/// arrows of edge `i = {u, v}` are `e{i}_{u}` and `e{i}_{v}`.
pub fn star_subdivision(g: &UndirectedGraph) -> Result<Quiver> {
    let mut vertices: Vec<String> = (0..g.n).map(|i| format!("g{i}")).collect();
    let mut arrows = Vec::new();
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        if u == v {
            return Err(Error::LoopInGraph(u));
        }
        if u >= g.n || v >= g.n {
            return Err(Error::InvalidArgument(format!("edge {i} out of range")));
        }
        let sink = format!("e{i}");
        vertices.push(sink.clone());
        arrows.push((format!("e{i}_{u}"), format!("g{u}"), sink.clone()));
        arrows.push((format!("e{i}_{v}"), format!("g{v}"), sink));
    }
    Quiver::new(vertices, arrows)
}

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
