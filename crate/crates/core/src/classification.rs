//! Maximal-dimensional cells of star-subdivided cubic graphs, up to
//! integral-affine equivalence.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, CatalogEntry};
use crate::error::{Error, Result};
use crate::ideal;
use crate::linalg;
use crate::polytope::{
    binomial, for_each_combination, integral_affine_equivalent, GeometryBudget, LatticePolytope,
    PolytopeReport,
};
use crate::quiver::{star_subdivision, Quiver, UndirectedGraph, Weight};

pub fn k4() -> UndirectedGraph {
    UndirectedGraph::new("K4", 4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// Two triangles `0,1,2` and `3,4,5` joined by the matching `0-4, 2-3, 1-5`.
pub fn y3() -> UndirectedGraph {
    UndirectedGraph::new(
        "Y3",
        6,
        vec![
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (0, 4),
            (2, 3),
            (1, 5),
        ],
    )
}

/// Sides `{0,1,2}` and `{3,4,5}`.
pub fn k33() -> UndirectedGraph {
    let mut e = Vec::new();
    for i in 0..3 {
        for j in 3..6 {
            e.push((i, j));
        }
    }
    UndirectedGraph::new("K3,3", 6, e)
}

pub fn builtin_graphs() -> Vec<UndirectedGraph> {
    vec![k4(), y3(), k33()]
}

pub fn builtin_graph(name: &str) -> Result<UndirectedGraph> {
    builtin_graphs()
        .into_iter()
        .find(|g| g.name.eq_ignore_ascii_case(name) || g.name.replace(',', "").eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::InvalidArgument(format!("unknown graph `{name}`")))
}

fn canonical_edges(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut e: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (p[a], p[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

pub fn graphs_isomorphic(g: &UndirectedGraph, h: &UndirectedGraph) -> bool {
    g.n == h.n && g.edges.len() == h.edges.len() && canonical_edges(g.n, &g.edges) == canonical_edges(h.n, &h.edges)
}

/// Every simple 3-regular graph on `n` vertices, one per isomorphism class.
pub fn cubic_graphs_bruteforce(n: usize) -> Vec<UndirectedGraph> {
    if n % 2 == 1 || n > 8 {
        return Vec::new();
    }
    let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let m = 3 * n / 2;
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for_each_combination(all.len(), m, &mut |idx| {
        let mut deg = vec![0; n];
        for &i in idx {
            deg[all[i].0] += 1;
            deg[all[i].1] += 1;
        }
        if deg.iter().all(|&d| d == 3) {
            let edges: Vec<(usize, usize)> = idx.iter().map(|&i| all[i]).collect();
            let c = canonical_edges(n, &edges);
            if !classes.contains(&c) {
                classes.push(c);
            }
        }
        true
    });
    classes
        .into_iter()
        .enumerate()
        .map(|(i, e)| UndirectedGraph::new(format!("cubic{n}_{i}"), n, e))
        .collect()
}

/// A weight on `G*`: −1 on `minus_one`, −2 on the other sources, 1 on every sink.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementSpec {
    pub graph: String,
    pub minus_one: Vec<usize>,
}

impl PlacementSpec {
    pub fn weight(&self, g: &UndirectedGraph) -> Weight {
        let mut w: Vec<i64> = (0..g.n)
            .map(|v| if self.minus_one.contains(&v) { -1 } else { -2 })
            .collect();
        w.extend(std::iter::repeat_n(1, g.edges.len()));
        Weight(w)
    }
}

/// All `C(2d−2, d−1)` ways to put −1 on half of the sources.
pub fn enumerate_placements(g: &UndirectedGraph) -> Vec<PlacementSpec> {
    let mut out = Vec::new();
    for_each_combination(g.n, g.n / 2, &mut |idx| {
        out.push(PlacementSpec {
            graph: g.name.clone(),
            minus_one: idx.to_vec(),
        });
        true
    });
    out
}

pub fn target_dimension(g: &UndirectedGraph) -> usize {
    g.n / 2 + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementResult {
    pub index: usize,
    pub minus_one: Vec<usize>,
    pub dimension: usize,
    pub num_points: usize,
    pub class: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub num_points: usize,
    pub num_vertices: usize,
    pub generation_degree: u32,
    pub conclusive: bool,
    pub unimodular_simplex: bool,
    pub birkhoff: bool,
    pub report: PolytopeReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub graph: String,
    pub target_dim: usize,
    pub placements: Vec<PlacementResult>,
    pub classes: Vec<CellClass>,
    /// Placements whose polytope has lower dimension.
    pub lower_dimensional: Vec<usize>,
}

/// The standard unimodular `d`-simplex as a cube slice.
pub fn unimodular_simplex(d: usize, budget: GeometryBudget) -> Result<LatticePolytope> {
    LatticePolytope::from_cube_slice(d + 1, vec![(vec![1; d + 1], 1)], budget)
}

pub fn birkhoff3(budget: GeometryBudget) -> Result<LatticePolytope> {
    catalog::birkhoff(3)?.polytope(budget).map(|p| p.with_name("B3"))
}

/// Builds every placement polytope, keeps those of the target dimension and
/// partitions them by integral-affine equivalence.
pub fn classify_cells(
    g: &UndirectedGraph,
    target_dim: usize,
    budget: GeometryBudget,
) -> Result<ClassificationReport> {
    let q = star_subdivision(g)?;
    let placements = enumerate_placements(g);
    let polys: Vec<LatticePolytope> = placements
        .par_iter()
        .enumerate()
        .map(|(i, pl)| {
            LatticePolytope::from_quiver(&q, &pl.weight(g), budget)
                .map(|p| p.with_name(format!("{}#{i}", g.name)))
        })
        .collect::<Result<_>>()?;
    let mut results = Vec::new();
    let mut lower = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, (pl, p)) in placements.iter().zip(&polys).enumerate() {
        let dim = if p.is_empty() { 0 } else { p.dimension()? };
        let mut class = None;
        if !p.is_empty() && dim == target_dim {
            for (c, &r) in reps.iter().enumerate() {
                if integral_affine_equivalent(&polys[r], p)?.is_some() {
                    class = Some(c);
                    break;
                }
            }
            if class.is_none() {
                reps.push(i);
                members.push(Vec::new());
                class = Some(reps.len() - 1);
            }
            members[class.unwrap()].push(i);
        } else {
            lower.push(i);
        }
        results.push(PlacementResult {
            index: i,
            minus_one: pl.minus_one.clone(),
            dimension: dim,
            num_points: p.points().len(),
            class,
        });
    }
    let simplex = unimodular_simplex(target_dim, budget)?;
    let b3 = birkhoff3(budget)?;
    let classes = reps
        .iter()
        .zip(members)
        .map(|(&r, m)| {
            let p = &polys[r];
            let gen = ideal::generation_degree(p, 3, budget.nodes)?;
            Ok(CellClass {
                representative: r,
                members: m,
                num_points: p.points().len(),
                num_vertices: p.vertices()?.len(),
                generation_degree: gen.generation_degree,
                conclusive: gen.conclusive,
                unimodular_simplex: integral_affine_equivalent(p, &simplex)?.is_some(),
                birkhoff: p.dimension()? == 4 && integral_affine_equivalent(p, &b3)?.is_some(),
                report: p.report()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ClassificationReport {
        graph: g.name.clone(),
        target_dim,
        placements: results,
        classes,
        lower_dimensional: lower,
    })
}

/// Classes of all builtin graphs with `|G₀|/2 + 1 = dim`, merged across graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionClassification {
    pub dim: usize,
    pub reports: Vec<ClassificationReport>,
    /// `(graph, class index)` of one representative per distinct class.
    pub distinct: Vec<(String, usize)>,
}

pub fn classify_dimension(dim: usize, budget: GeometryBudget) -> Result<DimensionClassification> {
    if dim < 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} is below the range of the cubic-graph pipeline (3 and up)"
        )));
    }
    let graphs: Vec<UndirectedGraph> = builtin_graphs()
        .into_iter()
        .filter(|g| target_dimension(g) == dim)
        .collect();
    if graphs.is_empty() {
        return Err(Error::InvalidArgument(format!("no builtin graph yields dimension {dim}")));
    }
    let reports: Vec<ClassificationReport> = graphs
        .iter()
        .map(|g| classify_cells(g, dim, budget))
        .collect::<Result<_>>()?;
    let mut distinct: Vec<(String, usize)> = Vec::new();
    let mut reps: Vec<LatticePolytope> = Vec::new();
    for (g, r) in graphs.iter().zip(&reports) {
        let q = star_subdivision(g)?;
        let pls = enumerate_placements(g);
        for (ci, c) in r.classes.iter().enumerate() {
            let p = LatticePolytope::from_quiver(&q, &pls[c.representative].weight(g), budget)?;
            let mut new = true;
            for other in &reps {
                if integral_affine_equivalent(other, &p)?.is_some() {
                    new = false;
                    break;
                }
            }
            if new {
                reps.push(p);
                distinct.push((g.name.clone(), ci));
            }
        }
    }
    Ok(DimensionClassification {
        dim,
        reports,
        distinct,
    })
}

/// The printed `(x, y, z, w)` coordinates of the six lattice points.
pub const CASE_ONE_TABLE: [[i64; 4]; 6] = [
    [0, 1, 1, 1],
    [0, 1, 0, 0],
    [0, 1, 1, 0],
    [1, 1, 0, 0],
    [1, 1, 1, 0],
    [0, 0, 0, 1],
];

/// Sources weighted −1 in the six-point prism placement.
pub const Y3_CASE_ONE: [usize; 3] = [0, 2, 5];
/// Sources weighted −1 in the unimodular-simplex prism placement.
pub const Y3_CASE_THREE: [usize; 3] = [0, 2, 4];
/// Sources weighted −1 in the square prism placement.
pub const Y3_CASE_TWO: [usize; 3] = [0, 1, 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOneRecord {
    pub num_points: usize,
    pub coordinates: Vec<[i64; 4]>,
    pub table_matches: bool,
    /// Coefficients of the affine dependency, in table order.
    pub dependency: Vec<i64>,
    pub dependency_matches: bool,
    pub singular: usize,
    pub smooth: usize,
    pub generation_degree: u32,
    pub contraction_steps: usize,
    pub contracted_shape: (usize, usize),
    pub equivalent_to_prism_cell: bool,
    pub contraction_equivalent: bool,
    pub ok: bool,
}

/// Applies the reducible-sink contraction until the pattern disappears.
pub fn contract_fully(q: &Quiver, theta: &Weight) -> Result<(Quiver, Weight, usize)> {
    let (mut q, mut t) = (q.clone(), theta.clone());
    let mut steps = 0;
    loop {
        match q.contract_reducible_sink(&t) {
            Ok((q2, t2)) => {
                q = q2;
                t = t2;
                steps += 1;
            }
            Err(Error::PatternAbsent) => return Ok((q, t, steps)),
            Err(e) => return Err(e),
        }
    }
}

/// Checks the reduced quiver against the printed table, the single affine
/// dependency, the vertex types and the generation degree.
pub fn reproduce_case_one(budget: GeometryBudget) -> Result<CaseOneRecord> {
    let CatalogEntry::Quiver { quiver, weight } = catalog::case_one()? else {
        unreachable!()
    };
    let p = LatticePolytope::from_quiver(&quiver, &weight, budget)?;
    let free: Vec<usize> = ["x", "y", "z", "w"]
        .iter()
        .map(|id| quiver.arrow(id))
        .collect::<Result<_>>()?;
    let mut coordinates: Vec<[i64; 4]> = p
        .points()
        .iter()
        .map(|x| [x[free[0]], x[free[1]], x[free[2]], x[free[3]]])
        .collect();
    coordinates.sort();
    let mut table = CASE_ONE_TABLE.to_vec();
    table.sort();
    let table_matches = coordinates == table;

    // affine dependencies among the points listed in table order
    let ordered: Vec<Vec<i64>> = CASE_ONE_TABLE
        .iter()
        .filter_map(|row| {
            p.points()
                .iter()
                .find(|x| [x[free[0]], x[free[1]], x[free[2]], x[free[3]]] == *row)
                .cloned()
        })
        .collect();
    let mut dependency = Vec::new();
    if ordered.len() == 6 {
        let n = ordered[0].len();
        let cols: Vec<Vec<i64>> = (0..=n)
            .map(|r| (0..6).map(|c| if r == n { 1 } else { ordered[c][r] }).collect())
            .collect();
        let ns = linalg::nullspace(&cols, 6);
        if ns.len() == 1 {
            dependency = ns[0].clone();
            if dependency.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
                dependency.iter_mut().for_each(|v| *v = -*v);
            }
        }
    }
    let dependency_matches = dependency == vec![0, 1, -1, -1, 1, 0];

    let flags = p.smooth_flags()?;
    let smooth = flags.iter().filter(|&&s| s).count();
    let singular = flags.len() - smooth;
    let generation_degree = ideal::generation_degree(&p, 3, budget.nodes)?.generation_degree;

    let g = y3();
    let star = star_subdivision(&g)?;
    let placement = PlacementSpec {
        graph: g.name.clone(),
        minus_one: Y3_CASE_ONE.to_vec(),
    };
    let prism = LatticePolytope::from_quiver(&star, &placement.weight(&g), budget)?;
    let equivalent_to_prism_cell = integral_affine_equivalent(&prism, &p)?.is_some();
    let (cq, ct, steps) = contract_fully(&star, &placement.weight(&g))?;
    let contracted = LatticePolytope::from_quiver(&cq, &ct, budget)?;
    let contraction_equivalent = integral_affine_equivalent(&contracted, &p)?.is_some();

    let ok = p.points().len() == 6
        && table_matches
        && dependency_matches
        && singular == 2
        && smooth == 4
        && generation_degree == 2
        && equivalent_to_prism_cell;
    Ok(CaseOneRecord {
        num_points: p.points().len(),
        coordinates,
        table_matches,
        dependency,
        dependency_matches,
        singular,
        smooth,
        generation_degree,
        contraction_steps: steps,
        contracted_shape: (cq.num_vertices(), cq.num_arrows()),
        equivalent_to_prism_cell,
        contraction_equivalent,
        ok,
    })
}

/// Number of placements for a graph on `2d − 2` vertices.
pub fn placement_count(d: usize) -> u64 {
    binomial(2 * d as u64 - 2, d as u64 - 1)
}
