//! Lattice polytopes carried as a constraint system plus their enumerated
//! lattice points, with intrinsic-lattice geometry on top.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{self, dot, LinearSystem, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::flows::{self, CellIndex};
use crate::linalg;
use crate::quiver::{Quiver, UnionFind, Weight};

/// Where a polytope came from. Quiver-type origins license the degree-three
/// generation bound used by the ideal analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Quiver { quiver: Quiver, weight: Weight },
    QuiverCell { quiver: Quiver, weight: Weight, cell: CellIndex },
    CubeSlice,
    Product(Box<Origin>, Box<Origin>),
}

impl Origin {
    /// True when the polytope is a quiver polytope (cells and products of
    /// quiver polytopes are again quiver polytopes).
    pub fn is_quiver_type(&self) -> bool {
        match self {
            Origin::Quiver { .. } | Origin::QuiverCell { .. } => true,
            Origin::CubeSlice => false,
            Origin::Product(a, b) => a.is_quiver_type() && b.is_quiver_type(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Origin::Quiver { .. } => "quiver",
            Origin::QuiverCell { .. } => "quiver-cell",
            Origin::CubeSlice => "cube-slice",
            Origin::Product(..) => "product",
        }
    }
}

/// Limits for the brute-force facet and equivalence searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeometryBudget {
    pub max_vertices: usize,
    pub max_subsets: u64,
    pub nodes: u64,
}

impl Default for GeometryBudget {
    fn default() -> Self {
        GeometryBudget {
            max_vertices: 32,
            max_subsets: 5_000_000,
            nodes: DEFAULT_BUDGET,
        }
    }
}

/// A facet `⟨z, normal⟩ ≥ offset` in intrinsic coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
    /// Indices of the lattice points on the facet.
    pub tight: Vec<usize>,
}

/// Base point and lattice basis of the affine span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub base: Vec<i64>,
    /// Basis vectors of `AffSpan ∩ Z^n − base`.
    pub basis: Vec<Vec<i64>>,
    pub coordinate_rows: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Adjacency {
    /// Pairs of vertex point indices spanning an edge.
    pub edges: Vec<(usize, usize)>,
    /// Edge pairs with no other lattice point on the edge.
    pub neighbours: Vec<(usize, usize)>,
}

/// `z ↦ matrix · z + translation` between intrinsic coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineEquivalence {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl AffineEquivalence {
    pub fn apply(&self, z: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| dot(row, z) + t)
            .collect()
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &AffineEquivalence) -> AffineEquivalence {
        let n = self.matrix.len();
        let matrix = (0..n)
            .map(|i| {
                (0..first.matrix.first().map_or(0, Vec::len))
                    .map(|j| (0..n).map(|k| self.matrix[i][k] * first.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        AffineEquivalence {
            matrix,
            translation: self.apply(&first.translation),
        }
    }
}

#[derive(Debug)]
pub struct LatticePolytope {
    name: String,
    system: LinearSystem,
    order: Vec<usize>,
    origin: Origin,
    points: Vec<Vec<i64>>,
    frame: Option<Frame>,
    intrinsic: Vec<Vec<i64>>,
    vertices: Vec<usize>,
    budget: GeometryBudget,
    facets: OnceLock<Vec<Facet>>,
    adjacency: OnceLock<Adjacency>,
    compressed: OnceLock<bool>,
}

impl Clone for LatticePolytope {
    fn clone(&self) -> Self {
        LatticePolytope {
            name: self.name.clone(),
            system: self.system.clone(),
            order: self.order.clone(),
            origin: self.origin.clone(),
            points: self.points.clone(),
            frame: self.frame.clone(),
            intrinsic: self.intrinsic.clone(),
            vertices: self.vertices.clone(),
            budget: self.budget,
            facets: self.facets.clone(),
            adjacency: self.adjacency.clone(),
            compressed: self.compressed.clone(),
        }
    }
}

fn frame_of(points: &[Vec<i64>], n: usize) -> Frame {
    let base = points[0].clone();
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    let normals = if diffs.is_empty() {
        (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect()
    } else {
        linalg::nullspace(&diffs, n)
    };
    let kl = linalg::kernel_lattice(&normals, n);
    Frame {
        base,
        basis: kl.basis,
        coordinate_rows: kl.coordinate_rows,
    }
}

/// Calls `f` on every `r`-subset of `0..n` in lexicographic order until it returns false.
pub(crate) fn for_each_combination(n: usize, r: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] < i + n - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * u128::from(n - i) / u128::from(i + 1);
    }
    r.min(u128::from(u64::MAX)) as u64
}

/// Affine rank (dimension of the affine hull) of a point set.
pub fn affine_dimension(points: &[&[i64]]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&diffs)
}

impl LatticePolytope {
    /// Enumerates the lattice points of `system` and derives the intrinsic frame.
    pub fn from_system(
        name: impl Into<String>,
        system: LinearSystem,
        order: Vec<usize>,
        origin: Origin,
        budget: GeometryBudget,
    ) -> Result<Self> {
        let points = enumerate::enumerate(&system, &order, budget.nodes)?;
        Ok(Self::from_parts(name, system, order, origin, points, budget))
    }

    fn from_parts(
        name: impl Into<String>,
        system: LinearSystem,
        order: Vec<usize>,
        origin: Origin,
        mut points: Vec<Vec<i64>>,
        budget: GeometryBudget,
    ) -> Self {
        points.sort();
        points.dedup();
        let (frame, intrinsic) = if points.is_empty() {
            (None, Vec::new())
        } else {
            let frame = frame_of(&points, system.n);
            let intrinsic = points
                .iter()
                .map(|p| {
                    let d: Vec<i64> = p.iter().zip(&frame.base).map(|(a, b)| a - b).collect();
                    frame.coordinate_rows.iter().map(|r| dot(r, &d)).collect()
                })
                .collect();
            (Some(frame), intrinsic)
        };
        let mut p = LatticePolytope {
            name: name.into(),
            system,
            order,
            origin,
            points,
            frame,
            intrinsic,
            vertices: Vec::new(),
            budget,
            facets: OnceLock::new(),
            adjacency: OnceLock::new(),
            compressed: OnceLock::new(),
        };
        p.vertices = (0..p.points.len()).filter(|&i| p.rank_test(i)).collect();
        p
    }

    pub fn from_quiver(q: &Quiver, theta: &Weight, budget: GeometryBudget) -> Result<Self> {
        let system = flows::flow_system(q, theta, None)?;
        let order = flows::arrow_order(q)?;
        let origin = Origin::Quiver {
            quiver: q.clone(),
            weight: theta.clone(),
        };
        if !theta.is_balanced(q) {
            return Ok(Self::from_parts("quiver", system, order, origin, Vec::new(), budget));
        }
        Self::from_system("quiver", system, order, origin, budget)
    }

    /// The cell `∇(Q,θ) ∩ [k̲, k̲+1]` as a standalone polytope.
    pub fn from_quiver_cell(
        q: &Quiver,
        theta: &Weight,
        cell: &CellIndex,
        budget: GeometryBudget,
    ) -> Result<Self> {
        if cell.0.len() != q.num_arrows() {
            return Err(Error::InvalidArgument("cell index length mismatch".into()));
        }
        let system = flows::flow_system(q, theta, Some(cell))?;
        let order = flows::arrow_order(q)?;
        let origin = Origin::QuiverCell {
            quiver: q.clone(),
            weight: theta.clone(),
            cell: cell.clone(),
        };
        Self::from_system("quiver-cell", system, order, origin, budget)
    }

    /// Lattice points of the unit cube `[0,1]^d` cut by `A x = b`.
    pub fn from_cube_slice(
        d: usize,
        equalities: Vec<(Vec<i64>, i64)>,
        budget: GeometryBudget,
    ) -> Result<Self> {
        if equalities.iter().any(|(row, _)| row.len() != d) {
            return Err(Error::InvalidArgument("equality length differs from ambient dimension".into()));
        }
        let system = LinearSystem {
            n: d,
            equalities,
            lower: vec![0; d],
            upper: vec![1; d],
        };
        Self::from_system("cube-slice", system, (0..d).collect(), Origin::CubeSlice, budget)
    }

    pub fn product(p1: &LatticePolytope, p2: &LatticePolytope) -> Result<Self> {
        if p1.is_empty() || p2.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let (n1, n2) = (p1.ambient_dim(), p2.ambient_dim());
        let mut equalities = Vec::new();
        for (row, rhs) in &p1.system.equalities {
            let mut r = row.clone();
            r.extend(std::iter::repeat_n(0, n2));
            equalities.push((r, *rhs));
        }
        for (row, rhs) in &p2.system.equalities {
            let mut r = vec![0; n1];
            r.extend(row);
            equalities.push((r, *rhs));
        }
        let system = LinearSystem {
            n: n1 + n2,
            equalities,
            lower: p1.system.lower.iter().chain(&p2.system.lower).copied().collect(),
            upper: p1.system.upper.iter().chain(&p2.system.upper).copied().collect(),
        };
        let mut order = p1.order.clone();
        order.extend(p2.order.iter().map(|i| i + n1));
        let mut points = Vec::with_capacity(p1.points.len() * p2.points.len());
        for a in &p1.points {
            for b in &p2.points {
                let mut x = a.clone();
                x.extend(b);
                points.push(x);
            }
        }
        Ok(Self::from_parts(
            format!("{}x{}", p1.name, p2.name),
            system,
            order,
            Origin::Product(Box::new(p1.origin.clone()), Box::new(p2.origin.clone())),
            points,
            p1.budget,
        ))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn budget(&self) -> GeometryBudget {
        self.budget
    }

    pub fn ambient_dim(&self) -> usize {
        self.system.n
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Degree-one lattice points in lexicographic order.
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn point_index(&self, x: &[i64]) -> Option<usize> {
        self.points.binary_search_by(|p| p.as_slice().cmp(x)).ok()
    }

    pub fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    pub fn intrinsic_points(&self) -> &[Vec<i64>] {
        &self.intrinsic
    }

    /// Intrinsic coordinates of a point of the `k`-th dilation.
    pub fn intrinsic_of(&self, x: &[i64], k: i64) -> Result<Vec<i64>> {
        let f = self.frame.as_ref().ok_or(Error::EmptyPolytope)?;
        let d: Vec<i64> = x.iter().zip(&f.base).map(|(a, b)| a - k * b).collect();
        Ok(f.coordinate_rows.iter().map(|r| dot(r, &d)).collect())
    }

    pub fn dimension(&self) -> Result<usize> {
        self.frame
            .as_ref()
            .map(|f| f.basis.len())
            .ok_or(Error::EmptyPolytope)
    }

    /// Point indices of the vertices.
    pub fn vertices(&self) -> Result<&[usize]> {
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Ok(&self.vertices)
    }

    pub fn is_vertex(&self, i: usize) -> bool {
        self.vertices.binary_search(&i).is_ok()
    }

    fn rank_test(&self, i: usize) -> bool {
        let x = &self.points[i];
        let n = self.system.n;
        let mut rows: Vec<Vec<i64>> = self.system.equalities.iter().map(|(r, _)| r.clone()).collect();
        for j in 0..n {
            if x[j] == self.system.lower[j] || x[j] == self.system.upper[j] {
                let mut e = vec![0; n];
                e[j] = 1;
                rows.push(e);
            }
        }
        n == 0 || linalg::rank(&rows) == n
    }

    pub fn contains_dilate(&self, x: &[i64], k: i64) -> bool {
        self.system.contains_dilate(x, k)
    }

    /// Lattice points of `k·∇`, sorted.
    pub fn dilate_points(&self, k: u32, budget: u64) -> Result<Vec<Vec<i64>>> {
        if k == 0 {
            return Ok(vec![vec![0; self.system.n]]
                .into_iter()
                .filter(|x| self.system.contains_dilate(x, 0))
                .collect());
        }
        if k == 1 {
            return Ok(self.points.clone());
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        enumerate::enumerate(&self.system.dilate(i64::from(k)), &self.order, budget)
    }

    pub fn count_dilate(&self, k: u32, budget: u64) -> Result<u64> {
        if self.is_empty() {
            return Ok(0);
        }
        enumerate::count(&self.system.dilate(i64::from(k)), &self.order, budget)
    }

    /// Facets in intrinsic coordinates, sorted by tight set in descending order.
    pub fn facets(&self) -> Result<&[Facet]> {
        if let Some(f) = self.facets.get() {
            return Ok(f);
        }
        let computed = self.compute_facets()?;
        let _ = self.facets.set(computed);
        Ok(self.facets.get().unwrap())
    }

    fn compute_facets(&self) -> Result<Vec<Facet>> {
        let dim = self.dimension()?;
        if dim == 0 {
            return Ok(Vec::new());
        }
        let mut facets = if self.origin.is_quiver_type() {
            self.facets_from_bounds(dim)
        } else {
            self.facets_by_search(dim)?
        };
        facets.sort_by(|a, b| a.tight.cmp(&b.tight).reverse());
        Ok(facets)
    }

    /// Facets from the vertex-subset search regardless of origin, in the same order.
    pub fn facets_brute_force(&self) -> Result<Vec<Facet>> {
        let dim = self.dimension()?;
        if dim == 0 {
            return Ok(Vec::new());
        }
        let mut f = self.facets_by_search(dim)?;
        f.sort_by(|a, b| a.tight.cmp(&b.tight).reverse());
        Ok(f)
    }

    /// Totally unimodular systems: every facet is cut out by a coordinate bound.
    fn facets_from_bounds(&self, dim: usize) -> Vec<Facet> {
        let z = &self.intrinsic;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut facets = Vec::new();
        for j in 0..self.system.n {
            for bound in [self.system.lower[j], self.system.upper[j]] {
                let on: Vec<usize> = (0..z.len()).filter(|&i| self.points[i][j] == bound).collect();
                if on.len() < dim || on.len() == z.len() {
                    continue;
                }
                let mut chosen: Vec<&[i64]> = vec![&z[on[0]]];
                let mut diffs: Vec<Vec<i64>> = Vec::new();
                for &i in &on[1..] {
                    if chosen.len() == dim {
                        break;
                    }
                    let d: Vec<i64> = z[i].iter().zip(chosen[0]).map(|(a, b)| a - b).collect();
                    diffs.push(d);
                    if linalg::rank(&diffs) == diffs.len() {
                        chosen.push(&z[i]);
                    } else {
                        diffs.pop();
                    }
                }
                if chosen.len() < dim {
                    continue;
                }
                if let Some(f) = self.supporting_facet(&chosen) {
                    if seen.insert(f.tight.clone()) {
                        facets.push(f);
                    }
                }
            }
        }
        facets
    }

    /// The hyperplane through `pts`, oriented inward, if it supports the polytope.
    fn supporting_facet(&self, pts: &[&[i64]]) -> Option<Facet> {
        let z = &self.intrinsic;
        let mut normal = linalg::hyperplane_normal(pts);
        if normal.iter().all(|&c| c == 0) {
            return None;
        }
        let mut offset = dot(&normal, pts[0]);
        let (mut above, mut below) = (false, false);
        for p in z {
            let v = dot(&normal, p);
            above |= v > offset;
            below |= v < offset;
        }
        if above && below {
            return None;
        }
        if below {
            normal.iter_mut().for_each(|c| *c = -*c);
            offset = -offset;
        }
        let tight: Vec<usize> = (0..z.len()).filter(|&i| dot(&normal, &z[i]) == offset).collect();
        Some(Facet {
            normal,
            offset,
            tight,
        })
    }

    /// Brute force over affinely independent vertex subsets.
    fn facets_by_search(&self, dim: usize) -> Result<Vec<Facet>> {
        let nv = self.vertices.len();
        if nv > self.budget.max_vertices {
            return Err(Error::BudgetExceeded(format!(
                "{nv} vertices exceed the facet search limit of {}",
                self.budget.max_vertices
            )));
        }
        let subsets = binomial(nv as u64, dim as u64);
        if subsets > self.budget.max_subsets {
            return Err(Error::BudgetExceeded(format!(
                "{subsets} vertex subsets exceed the facet search limit"
            )));
        }
        let z = &self.intrinsic;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut facets = Vec::new();
        for_each_combination(nv, dim, &mut |idx| {
            let pts: Vec<&[i64]> = idx.iter().map(|&i| z[self.vertices[i]].as_slice()).collect();
            if let Some(f) = self.supporting_facet(&pts) {
                if seen.insert(f.tight.clone()) {
                    facets.push(f);
                }
            }
            true
        });
        Ok(facets)
    }

    /// `max ⟨z, a_F⟩ − c_F` over the lattice points.
    pub fn facet_width(&self, f: &Facet) -> i64 {
        self.intrinsic
            .iter()
            .map(|z| dot(&f.normal, z) - f.offset)
            .max()
            .unwrap_or(0)
    }

    pub fn is_compressed(&self) -> Result<bool> {
        if let Some(&c) = self.compressed.get() {
            return Ok(c);
        }
        let c = self.facets()?.iter().all(|f| self.facet_width(f) == 1);
        Ok(*self.compressed.get_or_init(|| c))
    }

    /// Vertex pairs spanning edges, and those that are lattice neighbours.
    pub fn edges_and_neighbours(&self) -> Result<&Adjacency> {
        if let Some(a) = self.adjacency.get() {
            return Ok(a);
        }
        let facets = self.facets()?;
        let dim = self.dimension()?;
        let mut adj = Adjacency::default();
        let on: Vec<HashSet<usize>> = facets.iter().map(|f| f.tight.iter().copied().collect()).collect();
        for (a, &v) in self.vertices.iter().enumerate() {
            for &w in &self.vertices[a + 1..] {
                let common: Vec<usize> = (0..facets.len())
                    .filter(|&f| on[f].contains(&v) && on[f].contains(&w))
                    .collect();
                let face: Vec<usize> = (0..self.points.len())
                    .filter(|i| common.iter().all(|&f| on[f].contains(i)))
                    .collect();
                let pts: Vec<&[i64]> = face.iter().map(|&i| self.intrinsic[i].as_slice()).collect();
                let face_dim = if common.is_empty() { dim } else { affine_dimension(&pts) };
                if face_dim == 1 {
                    adj.edges.push((v, w));
                    if face.len() == 2 {
                        adj.neighbours.push((v, w));
                    }
                }
            }
        }
        let _ = self.adjacency.set(adj);
        Ok(self.adjacency.get().unwrap())
    }

    /// Neighbour count of each vertex, in vertex order.
    pub fn neighbour_degrees(&self) -> Result<Vec<usize>> {
        let adj = self.edges_and_neighbours()?;
        Ok(self
            .vertices
            .iter()
            .map(|&v| adj.neighbours.iter().filter(|&&(a, b)| a == v || b == v).count())
            .collect())
    }

    /// Primitive edge directions at a vertex, in intrinsic coordinates.
    pub fn edge_directions(&self, v: usize) -> Result<Vec<Vec<i64>>> {
        let adj = self.edges_and_neighbours()?;
        Ok(adj
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    return None;
                };
                let d: Vec<i64> = self.intrinsic[w]
                    .iter()
                    .zip(&self.intrinsic[v])
                    .map(|(x, y)| x - y)
                    .collect();
                Some(linalg::primitive(&d))
            })
            .collect())
    }

    /// A vertex is smooth when its primitive edge directions form a basis of the intrinsic lattice.
    pub fn smooth_vertex(&self, v: usize) -> Result<bool> {
        if !self.is_vertex(v) {
            return Err(Error::InvalidArgument(format!("point {v} is not a vertex")));
        }
        let dim = self.dimension()?;
        let dirs = self.edge_directions(v)?;
        if dirs.len() != dim {
            return Ok(false);
        }
        if dim == 0 {
            return Ok(true);
        }
        let inv = linalg::smith_invariants(&dirs);
        Ok(inv.len() == dim && inv.iter().all(|&d| d == 1))
    }

    /// Smoothness flag per vertex, in vertex order.
    pub fn smooth_flags(&self) -> Result<Vec<bool>> {
        self.vertices.iter().map(|&v| self.smooth_vertex(v)).collect()
    }

    pub fn singular_vertices(&self) -> Result<Vec<usize>> {
        let flags = self.smooth_flags()?;
        Ok(self
            .vertices
            .iter()
            .zip(flags)
            .filter(|(_, s)| !s)
            .map(|(&v, _)| v)
            .collect())
    }

    pub fn report(&self) -> Result<PolytopeReport> {
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let facets = self.facets()?.to_vec();
        let smooth = self.smooth_flags()?;
        Ok(PolytopeReport {
            name: self.name.clone(),
            origin: self.origin.kind().to_string(),
            ambient_dim: self.ambient_dim(),
            dimension: self.dimension()?,
            num_points: self.points.len(),
            points: self.points.clone(),
            vertices: self.vertices.clone(),
            smooth,
            compressed: facets.iter().all(|f| self.facet_width(f) == 1),
            facets,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeReport {
    pub name: String,
    pub origin: String,
    pub ambient_dim: usize,
    pub dimension: usize,
    pub num_points: usize,
    pub points: Vec<Vec<i64>>,
    /// Indices into `points`.
    pub vertices: Vec<usize>,
    /// Smoothness of each entry of `vertices`.
    pub smooth: Vec<bool>,
    pub compressed: bool,
    pub facets: Vec<Facet>,
}

/// Sufficient smoothness test: the support of `x` connects every component of `q`.
pub fn smooth_by_support(q: &Quiver, x: &[i64]) -> bool {
    let mut uf = UnionFind::new(q.num_vertices());
    for (a, &v) in q.arrows().iter().zip(x) {
        if v > 0 {
            uf.union(a.tail, a.head);
        }
    }
    let labels = q.component_labels();
    (0..q.num_vertices()).all(|v| uf.find(v) == uf.find(labels[v]))
}

/// Invariants compared before searching for an equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub dim: usize,
    pub points: usize,
    pub vertices: usize,
    pub neighbour_degrees: Vec<usize>,
    pub second_dilation: u64,
}

pub fn fingerprint(p: &LatticePolytope) -> Result<Fingerprint> {
    let mut degs = p.neighbour_degrees()?;
    degs.sort_unstable();
    Ok(Fingerprint {
        dim: p.dimension()?,
        points: p.points.len(),
        vertices: p.vertices.len(),
        neighbour_degrees: degs,
        second_dilation: p.count_dilate(2, p.budget.nodes)?,
    })
}

/// Searches for a lattice-preserving affine bijection between the lattice
/// point sets, mapping a fixed frame of `p1` onto ordered frames of `p2`.
pub fn integral_affine_equivalent(
    p1: &LatticePolytope,
    p2: &LatticePolytope,
) -> Result<Option<AffineEquivalence>> {
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let limit = p1.budget.max_vertices.max(p2.budget.max_vertices);
    if p1.points.len() > limit * 4 || p2.points.len() > limit * 4 {
        return Err(Error::BudgetExceeded("too many lattice points for equivalence search".into()));
    }
    if fingerprint(p1)? != fingerprint(p2)? {
        return Ok(None);
    }
    let dim = p1.dimension()?;
    let z1 = &p1.intrinsic;
    let z2 = &p2.intrinsic;
    if dim == 0 {
        return Ok(Some(AffineEquivalence {
            matrix: Vec::new(),
            translation: Vec::new(),
        }));
    }
    let deg1 = p1.neighbour_degrees()?;
    let deg2 = p2.neighbour_degrees()?;
    let label = |p: &LatticePolytope, degs: &[usize], i: usize| -> Option<usize> {
        p.vertices.binary_search(&i).ok().map(|k| degs[k])
    };
    // frame of p1: vertices first, greedily affinely independent
    let mut frame: Vec<usize> = Vec::new();
    let candidates: Vec<usize> = p1
        .vertices
        .iter()
        .copied()
        .chain((0..z1.len()).filter(|i| !p1.is_vertex(*i)))
        .collect();
    for i in candidates {
        let mut trial: Vec<&[i64]> = frame.iter().map(|&j| z1[j].as_slice()).collect();
        trial.push(&z1[i]);
        if frame.is_empty() || affine_dimension(&trial) == frame.len() {
            frame.push(i);
        }
        if frame.len() == dim + 1 {
            break;
        }
    }
    let fmat: Vec<Vec<i64>> = (0..dim)
        .map(|r| (1..=dim).map(|c| z1[frame[c]][r] - z1[frame[0]][r]).collect())
        .collect();
    let det = linalg::determinant(&fmat);
    let adj = linalg::adjugate(&fmat);
    let set2: HashMap<&[i64], usize> = z2.iter().enumerate().map(|(i, z)| (z.as_slice(), i)).collect();
    let labels1: Vec<Option<usize>> = frame.iter().map(|&i| label(p1, &deg1, i)).collect();

    let try_frame = |g: &[usize]| -> Option<AffineEquivalence> {
        // M = G · adj(F) / det(F)
        let mut m = vec![vec![0i64; dim]; dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut s: i128 = 0;
                for k in 0..dim {
                    let gk = i128::from(z2[g[k + 1]][r] - z2[g[0]][r]);
                    s += gk * adj[k][c];
                }
                if s % det != 0 {
                    return None;
                }
                m[r][c] = (s / det) as i64;
            }
        }
        if linalg::determinant(&m).abs() != 1 {
            return None;
        }
        let f0 = &z1[frame[0]];
        let mf0: Vec<i64> = m.iter().map(|row| dot(row, f0)).collect();
        let t: Vec<i64> = z2[g[0]].iter().zip(&mf0).map(|(a, b)| a - b).collect();
        let e = AffineEquivalence {
            matrix: m,
            translation: t,
        };
        let mut hit = vec![false; z2.len()];
        for z in z1 {
            let img = e.apply(z);
            let j = *set2.get(img.as_slice())?;
            if hit[j] {
                return None;
            }
            hit[j] = true;
        }
        Some(e)
    };

    let compatible = |slot: usize, j: usize| labels1[slot] == label(p2, &deg2, j);
    let first: Vec<usize> = (0..z2.len()).filter(|&j| compatible(0, j)).collect();
    let found = first.par_iter().find_map_first(|&g0| {
        let mut chosen = vec![g0];
        search_frames(&mut chosen, dim + 1, z2.len(), &compatible, &try_frame)
    });
    Ok(found)
}

fn search_frames(
    chosen: &mut Vec<usize>,
    size: usize,
    n: usize,
    compatible: &dyn Fn(usize, usize) -> bool,
    try_frame: &dyn Fn(&[usize]) -> Option<AffineEquivalence>,
) -> Option<AffineEquivalence> {
    if chosen.len() == size {
        return try_frame(chosen);
    }
    let slot = chosen.len();
    for j in 0..n {
        if chosen.contains(&j) || !compatible(slot, j) {
            continue;
        }
        chosen.push(j);
        if let Some(e) = search_frames(chosen, size, n, compatible, try_frame) {
            return Some(e);
        }
        chosen.pop();
    }
    None
}

/// Returns true when `e` maps the lattice points of `p1` bijectively onto those of `p2`.
pub fn verify_equivalence(p1: &LatticePolytope, p2: &LatticePolytope, e: &AffineEquivalence) -> bool {
    if p1.points.len() != p2.points.len() {
        return false;
    }
    let m: Vec<Vec<i64>> = e.matrix.clone();
    if !m.is_empty() && linalg::determinant(&m).abs() != 1 {
        return false;
    }
    let set2: HashSet<&[i64]> = p2.intrinsic.iter().map(Vec::as_slice).collect();
    let images: HashSet<Vec<i64>> = p1.intrinsic.iter().map(|z| e.apply(z)).collect();
    images.len() == p1.points.len() && images.iter().all(|z| set2.contains(z.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kronecker(d: i64) -> LatticePolytope {
        let q = Quiver::from_indices(2, &[(0, 1), (0, 1)]).unwrap();
        LatticePolytope::from_quiver(&q, &Weight(vec![-d, d]), GeometryBudget::default()).unwrap()
    }

    fn birkhoff3() -> (Quiver, LatticePolytope) {
        let mut arrs = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                arrs.push((i, j));
            }
        }
        let q = Quiver::from_indices(6, &arrs).unwrap();
        let p = LatticePolytope::from_quiver(
            &q,
            &Weight(vec![-1, -1, -1, 1, 1, 1]),
            GeometryBudget::default(),
        )
        .unwrap();
        (q, p)
    }

    #[test]
    fn bound_facets_agree_with_search() {
        let (_, b3) = birkhoff3();
        assert_eq!(b3.facets().unwrap(), b3.facets_brute_force().unwrap().as_slice());
        let k = kronecker(3);
        assert_eq!(k.facets().unwrap(), k.facets_brute_force().unwrap().as_slice());
    }

    fn square() -> LatticePolytope {
        LatticePolytope::from_cube_slice(2, vec![], GeometryBudget::default()).unwrap()
    }

    fn simplex(n: usize) -> LatticePolytope {
        LatticePolytope::from_cube_slice(n + 1, vec![(vec![1; n + 1], 1)], GeometryBudget::default())
            .unwrap()
    }

    #[test]
    fn combinations_are_complete() {
        let mut count = 0;
        for_each_combination(6, 3, &mut |_| {
            count += 1;
            true
        });
        assert_eq!(count, 20);
        let mut count = 0;
        for_each_combination(3, 3, &mut |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn kronecker_segments() {
        let p = kronecker(1);
        assert_eq!(p.dimension().unwrap(), 1);
        assert_eq!(p.points().len(), 2);
        let p = kronecker(2);
        assert_eq!(p.points().len(), 3);
        assert_eq!(p.vertices().unwrap().len(), 2);
        assert!(!p.is_compressed().unwrap());
        assert_eq!(p.facets().unwrap().len(), 2);
        for f in p.facets().unwrap() {
            assert_eq!(p.facet_width(f), 2);
        }
        let adj = p.edges_and_neighbours().unwrap();
        assert_eq!(adj.edges.len(), 1);
        assert!(adj.neighbours.is_empty());
    }

    #[test]
    fn birkhoff_geometry() {
        let (_, p) = birkhoff3();
        assert_eq!(p.dimension().unwrap(), 4);
        assert_eq!(p.points().len(), 6);
        assert_eq!(p.vertices().unwrap().len(), 6);
        assert_eq!(p.facets().unwrap().len(), 9);
        assert!(p.is_compressed().unwrap());
        assert!(p.smooth_flags().unwrap().iter().all(|s| !s));
    }

    #[test]
    fn square_and_simplex() {
        let s = square();
        assert_eq!(s.facets().unwrap().len(), 4);
        assert_eq!(s.dimension().unwrap(), 2);
        assert!(s.smooth_flags().unwrap().iter().all(|&b| b));
        for n in 1..5 {
            let t = simplex(n);
            assert_eq!(t.dimension().unwrap(), n);
            assert_eq!(t.facets().unwrap().len(), n + 1);
            let adj = t.edges_and_neighbours().unwrap();
            assert_eq!(adj.neighbours.len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn cube_slices() {
        let seg = LatticePolytope::from_cube_slice(2, vec![(vec![1, 1], 1)], GeometryBudget::default()).unwrap();
        assert_eq!(seg.points().len(), 2);
        let empty = LatticePolytope::from_cube_slice(2, vec![(vec![1, 1], 3)], GeometryBudget::default()).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.dimension().unwrap_err(), Error::EmptyPolytope);
    }

    #[test]
    fn products_add_dimension() {
        let a = kronecker(1);
        let sq = LatticePolytope::product(&a, &a).unwrap();
        assert_eq!(sq.points().len(), 4);
        assert_eq!(sq.dimension().unwrap(), 2);
        assert!(integral_affine_equivalent(&sq, &square()).unwrap().is_some());
        assert!(sq.origin().is_quiver_type());
    }

    #[test]
    fn equivalence_basics() {
        let (_, b) = birkhoff3();
        let e = integral_affine_equivalent(&b, &b).unwrap().unwrap();
        assert!(verify_equivalence(&b, &b, &e));
        assert!(integral_affine_equivalent(&b, &simplex(4)).unwrap().is_none());
        assert!(integral_affine_equivalent(&kronecker(2), &kronecker(1)).unwrap().is_none());
        let s3 = simplex(3);
        let e = integral_affine_equivalent(&s3, &s3).unwrap().unwrap();
        assert!(verify_equivalence(&s3, &s3, &e));
    }

    #[test]
    fn support_smoothness_on_birkhoff() {
        let (q, p) = birkhoff3();
        for x in p.points() {
            assert!(!smooth_by_support(&q, x));
        }
    }
}
