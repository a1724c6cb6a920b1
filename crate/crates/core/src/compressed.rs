//! Support calculus on compressed polytopes and verification of quadratic
//! Gröbner bases under the facet-induced monomial order.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::dot;
use crate::error::{Error, Result};
use crate::ideal::{self, SemigroupElement};
use crate::polytope::LatticePolytope;

/// Facet ids (indices into `LatticePolytope::facets`) not tight at a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupportSet(pub Vec<usize>);

impl SupportSet {
    pub fn is_subset(&self, other: &SupportSet) -> bool {
        let o: HashSet<usize> = other.0.iter().copied().collect();
        self.0.iter().all(|f| o.contains(f))
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        let u: BTreeSet<usize> = self.0.iter().chain(&other.0).copied().collect();
        SupportSet(u.into_iter().collect())
    }
}

fn require_compressed(p: &LatticePolytope) -> Result<()> {
    if p.is_compressed()? {
        Ok(())
    } else {
        Err(Error::NotCompressed)
    }
}

/// Support of a semigroup element without the compressedness check.
pub fn support_unchecked(p: &LatticePolytope, s: &SemigroupElement) -> Result<SupportSet> {
    let z = p.intrinsic_of(&s.point, i64::from(s.degree))?;
    let k = i64::from(s.degree);
    Ok(SupportSet(
        p.facets()?
            .iter()
            .enumerate()
            .filter(|(_, f)| dot(&f.normal, &z) != k * f.offset)
            .map(|(i, _)| i)
            .collect(),
    ))
}

pub fn support(p: &LatticePolytope, s: &SemigroupElement) -> Result<SupportSet> {
    require_compressed(p)?;
    support_unchecked(p, s)
}

fn point_support(p: &LatticePolytope, i: usize) -> Result<SupportSet> {
    support_unchecked(
        p,
        &SemigroupElement {
            point: p.points()[i].clone(),
            degree: 1,
        },
    )
}

/// `m ≤ s` decided by `supp(m) ⊆ supp(s)`.
pub fn divides_by_support(p: &LatticePolytope, m: &[i64], s: &SemigroupElement) -> Result<bool> {
    require_compressed(p)?;
    let sm = support_unchecked(
        p,
        &SemigroupElement {
            point: m.to_vec(),
            degree: 1,
        },
    )?;
    Ok(sm.is_subset(&support_unchecked(p, s)?))
}

/// No third lattice point has support inside `supp(v₁) ∪ supp(v₂)`.
pub fn neighbours_by_support(p: &LatticePolytope, v1: usize, v2: usize) -> Result<bool> {
    if v1 == v2 {
        return Ok(false);
    }
    let u = point_support(p, v1)?.union(&point_support(p, v2)?);
    for i in 0..p.points().len() {
        if i != v1 && i != v2 && point_support(p, i)?.is_subset(&u) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A path of lattice neighbours from `a` to `b` through vertices dividing `s`.
pub fn neighbour_path(p: &LatticePolytope, s: &SemigroupElement, a: usize, b: usize) -> Result<Option<Vec<usize>>> {
    let adj = p.edges_and_neighbours()?;
    let allowed: HashSet<usize> = ideal::divisors(p, s)
        .into_iter()
        .filter(|&i| p.is_vertex(i))
        .collect();
    if !allowed.contains(&a) || !allowed.contains(&b) {
        return Ok(None);
    }
    let mut prev = std::collections::HashMap::new();
    let mut queue = VecDeque::from([a]);
    prev.insert(a, a);
    while let Some(v) = queue.pop_front() {
        if v == b {
            let mut path = vec![b];
            let mut c = b;
            while c != a {
                c = prev[&c];
                path.push(c);
            }
            path.reverse();
            return Ok(Some(path));
        }
        for &(x, y) in &adj.neighbours {
            let w = if x == v {
                y
            } else if y == v {
                x
            } else {
                continue;
            };
            if allowed.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularAdjacency {
    pub singular: Vec<usize>,
    /// Edges of the polytope with both ends singular.
    pub adjacent_pairs: Vec<(usize, usize)>,
}

impl SingularAdjacency {
    pub fn none_adjacent(&self) -> bool {
        self.adjacent_pairs.is_empty()
    }
}

pub fn singular_adjacency_check(p: &LatticePolytope) -> Result<SingularAdjacency> {
    require_compressed(p)?;
    let singular = p.singular_vertices()?;
    let set: HashSet<usize> = singular.iter().copied().collect();
    let adjacent_pairs = p
        .edges_and_neighbours()?
        .edges
        .iter()
        .copied()
        .filter(|(a, b)| set.contains(a) && set.contains(b))
        .collect();
    Ok(SingularAdjacency {
        singular,
        adjacent_pairs,
    })
}

/// Facet order, the vertex order it induces and the graded monomial order on top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrobnerOrder {
    pub facet_order: Vec<usize>,
    pub singular: Option<usize>,
    /// Point indices from smallest to largest.
    pub vertex_order: Vec<usize>,
    /// Position of each point index in `vertex_order`.
    pub rank: Vec<usize>,
}

impl GrobnerOrder {
    pub fn cmp_vertices(&self, a: usize, b: usize) -> Ordering {
        self.rank[a].cmp(&self.rank[b])
    }

    /// Graded order; at equal degree the monomial with fewer copies of the
    /// smallest vertex where the exponents differ is larger.
    pub fn cmp_monomials(&self, a: &[usize], b: &[usize]) -> Ordering {
        if a.len() != b.len() {
            return a.len().cmp(&b.len());
        }
        let n = self.rank.len();
        let mut ea = vec![0usize; n];
        let mut eb = vec![0usize; n];
        for &i in a {
            ea[self.rank[i]] += 1;
        }
        for &i in b {
            eb[self.rank[i]] += 1;
        }
        for r in 0..n {
            if ea[r] != eb[r] {
                return eb[r].cmp(&ea[r]);
            }
        }
        Ordering::Equal
    }
}

/// Puts the support of the singular vertex (if any) first, then orders
/// vertices lexicographically by their facet values in that order.
pub fn build_grobner_order(p: &LatticePolytope) -> Result<GrobnerOrder> {
    require_compressed(p)?;
    let singular = p.singular_vertices()?;
    if singular.len() > 1 {
        return Err(Error::TooManySingular(singular.len()));
    }
    let facets = p.facets()?;
    let sing = singular.first().copied();
    let first: Vec<usize> = match sing {
        Some(v) => point_support(p, v)?.0,
        None => Vec::new(),
    };
    let mut facet_order = first.clone();
    facet_order.extend((0..facets.len()).filter(|f| !first.contains(f)));
    let z = p.intrinsic_points();
    let key = |i: usize| -> Vec<i64> {
        facet_order
            .iter()
            .map(|&f| dot(&facets[f].normal, &z[i]) - facets[f].offset)
            .collect()
    };
    let mut vertex_order: Vec<usize> = (0..p.points().len()).collect();
    vertex_order.sort_by_key(|&i| (key(i), i));
    let mut rank = vec![0; vertex_order.len()];
    for (r, &i) in vertex_order.iter().enumerate() {
        rank[i] = r;
    }
    Ok(GrobnerOrder {
        facet_order,
        singular: sing,
        vertex_order,
        rank,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticBinomial {
    pub leading: [Vec<i64>; 2],
    pub trailing: [Vec<i64>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCount {
    pub d: u32,
    pub standard: u64,
    pub semigroup: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GBReport {
    pub generators: Vec<QuadraticBinomial>,
    pub verified_to_degree: u32,
    pub counts: Vec<DegreeCount>,
    pub verified: bool,
    pub failing_degree: Option<u32>,
}

/// Leading pairs `(i, j)`, `i ≤ j`, of the quadratic binomials, with their trailing pairs.
pub fn quadratic_binomials(p: &LatticePolytope, order: &GrobnerOrder) -> Vec<((usize, usize), (usize, usize))> {
    let n = p.points().len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            let s: Vec<i64> = p.points()[a]
                .iter()
                .zip(&p.points()[b])
                .map(|(x, y)| x + y)
                .collect();
            if !seen.insert(s.clone()) {
                continue;
            }
            let facs = ideal::all_factorizations(p, &s, 2);
            if facs.len() < 2 {
                continue;
            }
            let min = facs
                .iter()
                .min_by(|x, y| order.cmp_monomials(x, y))
                .unwrap()
                .clone();
            for f in facs {
                if f != min {
                    out.push(((f[0], f[1]), (min[0], min[1])));
                }
            }
        }
    }
    out.sort();
    out
}

/// Degree-`d` monomials avoiding every leading pair.
pub fn count_standard_monomials(n: usize, leading: &HashSet<(usize, usize)>, d: u32) -> u64 {
    // an already chosen index checks the square of itself
    fn go(n: usize, bad: &[Vec<bool>], chosen: &mut Vec<usize>, left: u32) -> u64 {
        if left == 0 {
            return 1;
        }
        let start = chosen.last().copied().unwrap_or(0);
        let mut total = 0;
        for j in start..n {
            if chosen.iter().any(|&i| bad[i][j]) {
                continue;
            }
            chosen.push(j);
            total += go(n, bad, chosen, left - 1);
            chosen.pop();
        }
        total
    }
    let mut bad = vec![vec![false; n]; n];
    for &(i, j) in leading {
        bad[i][j] = true;
        bad[j][i] = true;
    }
    go(n, &bad, &mut Vec::new(), d)
}

/// Compares standard-monomial counts against `|S(∇)_d|` for `d ≤ D`.
pub fn verify_quadratic_gb(p: &LatticePolytope, order: &GrobnerOrder, max_degree: u32, budget: u64) -> Result<GBReport> {
    let bins = quadratic_binomials(p, order);
    let leading: HashSet<(usize, usize)> = bins.iter().map(|(l, _)| *l).collect();
    let n = p.points().len();
    let counts: Vec<DegreeCount> = (1..=max_degree)
        .into_par_iter()
        .map(|d| {
            Ok(DegreeCount {
                d,
                standard: count_standard_monomials(n, &leading, d),
                semigroup: p.count_dilate(d, budget)?,
            })
        })
        .collect::<Result<_>>()?;
    let failing_degree = counts.iter().find(|c| c.standard != c.semigroup).map(|c| c.d);
    let pts = p.points();
    Ok(GBReport {
        generators: bins
            .iter()
            .map(|&((a, b), (c, d))| QuadraticBinomial {
                leading: [pts[a].clone(), pts[b].clone()],
                trailing: [pts[c].clone(), pts[d].clone()],
            })
            .collect(),
        verified_to_degree: failing_degree.map_or(max_degree, |d| d - 1),
        verified: failing_degree.is_none(),
        failing_degree,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deg2Check {
    pub none_adjacent: bool,
    pub generation_degree: u32,
    pub pass: bool,
}

/// When no two singular vertices are adjacent, the ideal must be generated in degree two.
pub fn no_adjacent_singular_implies_deg2(p: &LatticePolytope, max_degree: u32, budget: u64) -> Result<Deg2Check> {
    let adj = singular_adjacency_check(p)?;
    let g = ideal::generation_degree(p, max_degree, budget)?.generation_degree;
    Ok(Deg2Check {
        none_adjacent: adj.none_adjacent(),
        generation_degree: g,
        pass: !adj.none_adjacent() || g <= 2,
    })
}
