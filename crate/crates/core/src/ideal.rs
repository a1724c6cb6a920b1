//! The graded semigroup of a lattice polytope and the generation degree of
//! its toric ideal, decided through connectivity of divisor graphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::DEFAULT_BUDGET;
use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{LatticePolytope, Origin};
use crate::quiver::UnionFind;

/// A lattice point of `k·∇` together with its degree `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemigroupElement {
    pub point: Vec<i64>,
    pub degree: u32,
}

impl SemigroupElement {
    pub fn new(p: &LatticePolytope, point: Vec<i64>, degree: u32) -> Result<Self> {
        if !p.contains_dilate(&point, i64::from(degree)) {
            return Err(Error::InvalidArgument(format!(
                "point is not in the degree-{degree} dilation"
            )));
        }
        Ok(SemigroupElement { point, degree })
    }

    /// Sum of degree-one points.
    pub fn sum_of(points: &[&[i64]]) -> Self {
        let n = points.first().map_or(0, |p| p.len());
        let point = (0..n).map(|i| points.iter().map(|p| p[i]).sum()).collect();
        SemigroupElement {
            point,
            degree: points.len() as u32,
        }
    }
}

/// A homogeneous binomial `∏ left − ∏ right` in the lattice-point variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationWitness {
    pub degree: u32,
    pub left: Vec<Vec<i64>>,
    pub right: Vec<Vec<i64>>,
    pub sum: Vec<i64>,
}

impl RelationWitness {
    fn new(degree: u32, mut left: Vec<Vec<i64>>, mut right: Vec<Vec<i64>>) -> Result<Self> {
        left.sort();
        right.sort();
        let sum = |side: &[Vec<i64>]| -> Vec<i64> {
            let n = side.first().map_or(0, Vec::len);
            (0..n).map(|i| side.iter().map(|p| p[i]).sum()).collect()
        };
        let s = sum(&left);
        if left.len() != degree as usize || right.len() != degree as usize || s != sum(&right) || left == right {
            return Err(Error::Verification("malformed relation witness".into()));
        }
        Ok(RelationWitness {
            degree,
            left,
            right,
            sum: s,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVerdict {
    pub degree: u32,
    pub elements: usize,
    pub connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub polytope: String,
    pub degree_checked: u32,
    pub generation_degree: u32,
    pub conclusive: bool,
    /// What justifies a conclusive verdict, if any.
    pub license: Option<String>,
    pub verdicts: Vec<DegreeVerdict>,
    pub witnesses: Vec<RelationWitness>,
}

/// `m ≤ s`: the difference lies in the previous dilation.
pub fn divides(p: &LatticePolytope, m: &[i64], s: &SemigroupElement) -> bool {
    if s.degree == 0 || !p.contains_dilate(m, 1) {
        return false;
    }
    let d: Vec<i64> = s.point.iter().zip(m).map(|(a, b)| a - b).collect();
    p.contains_dilate(&d, i64::from(s.degree) - 1)
}

/// Indices of the degree-one points dividing `s`.
pub fn divisors(p: &LatticePolytope, s: &SemigroupElement) -> Vec<usize> {
    (0..p.points().len())
        .filter(|&i| divides(p, &p.points()[i], s))
        .collect()
}

/// Connected components of the divisor graph of `s`, where two divisors are
/// joined when their sum still divides `s`. Classes hold point indices.
pub fn sim_s_classes(p: &LatticePolytope, s: &SemigroupElement) -> Result<Vec<Vec<usize>>> {
    if s.degree < 2 {
        return Err(Error::InvalidArgument("degree must be at least two".into()));
    }
    let divs = divisors(p, s);
    let pts = p.points();
    let mut uf = UnionFind::new(divs.len());
    let rest = i64::from(s.degree) - 2;
    for a in 0..divs.len() {
        for b in a + 1..divs.len() {
            let d: Vec<i64> = s
                .point
                .iter()
                .zip(&pts[divs[a]])
                .zip(&pts[divs[b]])
                .map(|((x, y), z)| x - y - z)
                .collect();
            if p.contains_dilate(&d, rest) {
                uf.union(a, b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut root_class: std::collections::HashMap<usize, usize> = Default::default();
    for (a, &m) in divs.iter().enumerate() {
        let r = uf.find(a);
        let c = *root_class.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(m);
    }
    Ok(classes)
}

/// Writes `target` (a point of the `k`-th dilation) as a sum of `k` lattice
/// points, returned as nondecreasing point indices.
pub fn factor(p: &LatticePolytope, target: &[i64], k: u32) -> Option<Vec<usize>> {
    fn go(p: &LatticePolytope, target: &mut Vec<i64>, k: u32, from: usize, acc: &mut Vec<usize>) -> bool {
        if k == 0 {
            return target.iter().all(|&v| v == 0) || p.contains_dilate(target, 0);
        }
        for i in from..p.points().len() {
            let m = &p.points()[i];
            let d: Vec<i64> = target.iter().zip(m).map(|(a, b)| a - b).collect();
            if !p.contains_dilate(&d, i64::from(k) - 1) {
                continue;
            }
            let saved = std::mem::replace(target, d);
            acc.push(i);
            if go(p, target, k - 1, i, acc) {
                return true;
            }
            acc.pop();
            *target = saved;
        }
        false
    }
    let mut t = target.to_vec();
    let mut acc = Vec::new();
    go(p, &mut t, k, 0, &mut acc).then_some(acc)
}

/// Every way of writing `target` as an unordered sum of `k` lattice points.
pub fn all_factorizations(p: &LatticePolytope, target: &[i64], k: u32) -> Vec<Vec<usize>> {
    fn go(
        p: &LatticePolytope,
        target: &[i64],
        k: u32,
        from: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == 0 {
            if p.contains_dilate(target, 0) {
                out.push(acc.clone());
            }
            return;
        }
        for i in from..p.points().len() {
            let d: Vec<i64> = target.iter().zip(&p.points()[i]).map(|(a, b)| a - b).collect();
            if !p.contains_dilate(&d, i64::from(k) - 1) {
                continue;
            }
            acc.push(i);
            go(p, &d, k - 1, i, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(p, target, k, 0, &mut Vec::new(), &mut out);
    out
}

/// A binomial drawing its first factor from two different `~_s` classes.
pub fn witness_binomial(p: &LatticePolytope, s: &SemigroupElement) -> Result<Option<RelationWitness>> {
    let classes = sim_s_classes(p, s)?;
    if classes.len() < 2 {
        return Ok(None);
    }
    let pts = p.points();
    let side = |m: usize| -> Result<Vec<Vec<i64>>> {
        let d: Vec<i64> = s.point.iter().zip(&pts[m]).map(|(a, b)| a - b).collect();
        let f = factor(p, &d, s.degree - 1).ok_or_else(|| {
            Error::Verification("a divisor of s does not factor; the polytope is not normal".into())
        })?;
        let mut v = vec![pts[m].clone()];
        v.extend(f.into_iter().map(|i| pts[i].clone()));
        Ok(v)
    };
    let left = side(classes[0][0])?;
    let right = side(classes[1][0])?;
    RelationWitness::new(s.degree, left, right).map(Some)
}

/// True when the lifted lattice points `(m, 1)` are linearly independent,
/// i.e. the toric ideal is zero.
pub fn ideal_is_zero(p: &LatticePolytope) -> bool {
    let rows: Vec<Vec<i64>> = p
        .points()
        .iter()
        .map(|x| {
            let mut r = x.clone();
            r.push(1);
            r
        })
        .collect();
    linalg::rank(&rows) == rows.len()
}

fn license_for(origin: &Origin) -> Option<&'static str> {
    match origin {
        Origin::Quiver { .. } => Some("quiver polytope: degree-three bound"),
        Origin::QuiverCell { .. } => Some("quiver cell is a quiver polytope: degree-three bound"),
        Origin::Product(..) if origin.is_quiver_type() => {
            Some("product of quiver polytopes is a quiver polytope: degree-three bound")
        }
        _ => None,
    }
}

/// Analyses a single degree; returns the element count and the first witness.
pub fn degree_analysis(
    p: &LatticePolytope,
    degree: u32,
    budget: u64,
) -> Result<(usize, Option<RelationWitness>)> {
    let elements = p.dilate_points(degree, budget)?;
    let found = elements
        .par_iter()
        .map(|x| {
            let s = SemigroupElement {
                point: x.clone(),
                degree,
            };
            witness_binomial(p, &s)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let witness = match found {
        Some(Ok(w)) => w,
        Some(Err(e)) => return Err(e),
        None => None,
    };
    Ok((elements.len(), witness))
}

/// Smallest `r` such that every `s` of degree in `(r, D]` has one `~_s` class.
/// For quiver-type polytopes only degree three is inspected, which settles all degrees.
pub fn generation_degree(p: &LatticePolytope, max_degree: u32, budget: u64) -> Result<GenerationReport> {
    if p.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    if max_degree < 3 {
        return Err(Error::InvalidArgument("maximum degree must be at least 3".into()));
    }
    let mut report = GenerationReport {
        polytope: p.name().to_string(),
        degree_checked: max_degree,
        generation_degree: 0,
        conclusive: true,
        license: Some("lattice points are affinely independent".into()),
        verdicts: Vec::new(),
        witnesses: Vec::new(),
    };
    if ideal_is_zero(p) {
        return Ok(report);
    }
    let license = license_for(p.origin());
    let degrees: Vec<u32> = if license.is_some() {
        vec![3]
    } else {
        (3..=max_degree).collect()
    };
    report.degree_checked = *degrees.last().unwrap();
    report.generation_degree = 2;
    report.conclusive = license.is_some();
    report.license = license.map(str::to_string);
    for d in degrees {
        let (elements, witness) = degree_analysis(p, d, budget)?;
        report.verdicts.push(DegreeVerdict {
            degree: d,
            elements,
            connected: witness.is_none(),
        });
        if let Some(w) = witness {
            report.generation_degree = d;
            report.witnesses.push(w);
        }
    }
    Ok(report)
}

pub fn generation_degree_default(p: &LatticePolytope, max_degree: u32) -> Result<GenerationReport> {
    generation_degree(p, max_degree, DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCheck {
    pub first: u32,
    pub second: u32,
    pub product: u32,
    pub holds: bool,
}

/// Checks that the product is generated in degree two exactly when both factors are.
pub fn product_generation_check(
    p1: &LatticePolytope,
    p2: &LatticePolytope,
    max_degree: u32,
    budget: u64,
) -> Result<ProductCheck> {
    let prod = LatticePolytope::product(p1, p2)?;
    let a = generation_degree(p1, max_degree, budget)?.generation_degree;
    let b = generation_degree(p2, max_degree, budget)?.generation_degree;
    let c = generation_degree(&prod, max_degree, budget)?.generation_degree;
    Ok(ProductCheck {
        first: a,
        second: b,
        product: c,
        holds: (c <= 2) == (a <= 2 && b <= 2),
    })
}

/// Every lattice point of `k·∇` is a sum of `k` lattice points of `∇`.
pub fn normality_check(p: &LatticePolytope, k: u32, budget: u64) -> Result<bool> {
    let pts = p.dilate_points(k, budget)?;
    Ok(pts.par_iter().all(|x| factor(p, x, k).is_some()))
}
