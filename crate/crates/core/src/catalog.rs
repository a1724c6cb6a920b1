//! Named instances and the JSON input formats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{GeometryBudget, LatticePolytope};
use crate::quiver::{Quiver, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogEntry {
    Quiver { quiver: Quiver, weight: Weight },
    CubeSlice { ambient_dim: usize, equalities: Vec<(Vec<i64>, i64)> },
}

impl CatalogEntry {
    pub fn polytope(&self, budget: GeometryBudget) -> Result<LatticePolytope> {
        match self {
            CatalogEntry::Quiver { quiver, weight } => {
                LatticePolytope::from_quiver(quiver, weight, budget)
            }
            CatalogEntry::CubeSlice {
                ambient_dim,
                equalities,
            } => LatticePolytope::from_cube_slice(*ambient_dim, equalities.clone(), budget),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CatalogEntry::Quiver { quiver, weight } => {
                serde_json::to_value(QuiverJson::from_quiver(quiver, Some(weight))).unwrap()
            }
            CatalogEntry::CubeSlice {
                ambient_dim,
                equalities,
            } => serde_json::to_value(CubeSliceJson {
                ambient_dim: *ambient_dim,
                equalities: equalities
                    .iter()
                    .map(|(c, r)| EqualityJson {
                        coeffs: c.clone(),
                        rhs: *r,
                    })
                    .collect(),
            })
            .unwrap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, i64>>,
}

impl QuiverJson {
    pub fn from_quiver(q: &Quiver, weight: Option<&Weight>) -> Self {
        QuiverJson {
            vertices: q.vertices().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowJson {
                    id: a.id.clone(),
                    tail: q.vertices()[a.tail].clone(),
                    head: q.vertices()[a.head].clone(),
                })
                .collect(),
            weights: weight.map(|w| {
                q.vertices()
                    .iter()
                    .cloned()
                    .zip(w.0.iter().copied())
                    .collect()
            }),
        }
    }

    /// The quiver and its weight (zero where unspecified).
    pub fn to_quiver(&self) -> Result<(Quiver, Weight)> {
        let q = Quiver::new(
            self.vertices.clone(),
            self.arrows
                .iter()
                .map(|a| (a.id.clone(), a.tail.clone(), a.head.clone())),
        )?;
        let w = match &self.weights {
            Some(m) => q.weight_from_pairs(m.iter().map(|(k, v)| (k.as_str(), *v)))?,
            None => Weight::zero(q.num_vertices()),
        };
        Ok((q, w))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityJson {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeSliceJson {
    pub ambient_dim: usize,
    pub equalities: Vec<EqualityJson>,
}

/// Parses either input format, telling them apart by their keys.
pub fn parse_input_json(text: &str) -> Result<CatalogEntry> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if v.get("ambient_dim").is_some() {
        let c: CubeSliceJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(CatalogEntry::CubeSlice {
            ambient_dim: c.ambient_dim,
            equalities: c.equalities.into_iter().map(|e| (e.coeffs, e.rhs)).collect(),
        })
    } else {
        let q: QuiverJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        let (quiver, weight) = q.to_quiver()?;
        Ok(CatalogEntry::Quiver { quiver, weight })
    }
}

fn arrow(id: impl Into<String>, t: impl Into<String>, h: impl Into<String>) -> (String, String, String) {
    (id.into(), t.into(), h.into())
}

/// Directed `K_{n,n}` with weight −1 on one side and 1 on the other.
pub fn birkhoff(n: usize) -> Result<CatalogEntry> {
    if n == 0 || n > 5 {
        return Err(Error::BudgetExceeded(format!("birkhoff({n}) is outside 1..=5")));
    }
    let mut vs: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    vs.extend((1..=n).map(|j| format!("t{j}")));
    let mut arrs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            arrs.push(arrow(format!("a{i}{j}"), format!("s{i}"), format!("t{j}")));
        }
    }
    let quiver = Quiver::new(vs, arrs)?;
    let mut w = vec![-1; n];
    w.extend(vec![1; n]);
    Ok(CatalogEntry::Quiver {
        quiver,
        weight: Weight(w),
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Cube slice on the edges `(i, j)` of `K(n,n)` (coordinate `i·n + j`)
/// with one equality per perfect matching.
pub fn pn(n: usize) -> Result<CatalogEntry> {
    if n == 0 || n > 4 {
        return Err(Error::BudgetExceeded(format!("pn({n}) is outside 1..=4")));
    }
    let equalities = permutations(n)
        .into_iter()
        .map(|sigma| {
            let mut row = vec![0; n * n];
            for (i, &j) in sigma.iter().enumerate() {
                row[i * n + j] = 1;
            }
            (row, 1)
        })
        .collect();
    Ok(CatalogEntry::CubeSlice {
        ambient_dim: n * n,
        equalities,
    })
}

/// Indicator of the edges at vertex `v` of `K(n,n)`; `v < n` is a row vertex.
pub fn pn_vertex_point(n: usize, v: usize) -> Vec<i64> {
    let mut x = vec![0; n * n];
    for t in 0..n {
        let idx = if v < n { v * n + t } else { t * n + (v - n) };
        x[idx] = 1;
    }
    x
}

pub fn kronecker(d: i64) -> Result<CatalogEntry> {
    if d < 0 {
        return Err(Error::InvalidArgument("kronecker weight must be non-negative".into()));
    }
    let quiver = Quiver::new(
        ["v", "w"],
        vec![arrow("a1", "v", "w"), arrow("a2", "v", "w")],
    )?;
    Ok(CatalogEntry::Quiver {
        quiver,
        weight: Weight(vec![-d, d]),
    })
}

/// `k` Kronecker pairs `p{i}, q{i}: a{i+1} → a{i}` in a row, plus one arrow
/// `w: a{k+1} → a1`, carrying one unit of flow from `a{k+1}` to `a1`.
pub fn chain(k: usize) -> Result<CatalogEntry> {
    if k == 0 || k > 6 {
        return Err(Error::BudgetExceeded(format!("chain({k}) is outside 1..=6")));
    }
    let vs: Vec<String> = (1..=k + 1).map(|i| format!("a{i}")).collect();
    let mut arrs = Vec::new();
    for i in 1..=k {
        arrs.push(arrow(format!("p{i}"), format!("a{}", i + 1), format!("a{i}")));
        arrs.push(arrow(format!("q{i}"), format!("a{}", i + 1), format!("a{i}")));
    }
    arrs.push(arrow("w", format!("a{}", k + 1), "a1"));
    let quiver = Quiver::new(vs, arrs)?;
    let mut w = vec![0; k + 1];
    w[0] = 1;
    w[k] = -1;
    Ok(CatalogEntry::Quiver {
        quiver,
        weight: Weight(w),
    })
}

/// The point of `chain(k)` sending the whole unit through `w`.
pub fn chain_apex(k: usize) -> Vec<i64> {
    let mut x = vec![0; 2 * k + 1];
    x[2 * k] = 1;
    x
}

/// Directed `K_{3,3}` plus a hub `h` with arrows `b{i}: v{i} → h` and `c{j}: h → u{j}`.
pub fn k33hub() -> Result<CatalogEntry> {
    let mut vs: Vec<String> = (1..=3).map(|i| format!("v{i}")).collect();
    vs.extend((1..=3).map(|j| format!("u{j}")));
    vs.push("h".into());
    let mut arrs = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            arrs.push(arrow(format!("a{i}{j}"), format!("v{i}"), format!("u{j}")));
        }
    }
    for i in 1..=3 {
        arrs.push(arrow(format!("b{i}"), format!("v{i}"), "h"));
    }
    for j in 1..=3 {
        arrs.push(arrow(format!("c{j}"), "h", format!("u{j}")));
    }
    let quiver = Quiver::new(vs, arrs)?;
    Ok(CatalogEntry::Quiver {
        quiver,
        weight: Weight(vec![-1, -1, -1, 1, 1, 1, 0]),
    })
}

/// Reduced nine-vertex quiver of the six-point prism cell. The free arrows
/// `x, y, z, w` carry the coordinates of its lattice points.
pub fn case_one() -> Result<CatalogEntry> {
    let vs: Vec<String> = (1..=9).map(|i| format!("n{i}")).collect();
    let arrs = vec![
        arrow("x", "n1", "n9"),
        arrow("y", "n5", "n8"),
        arrow("z", "n4", "n7"),
        arrow("w", "n6", "n2"),
        arrow("n6n5", "n6", "n5"),
        arrow("n5n7", "n5", "n7"),
        arrow("n2n9", "n2", "n9"),
        arrow("n1n8", "n1", "n8"),
        arrow("n3n4", "n3", "n4"),
        arrow("n3n1", "n3", "n1"),
        arrow("n3n2", "n3", "n2"),
        arrow("n6n4", "n6", "n4"),
    ];
    let quiver = Quiver::new(vs, arrs)?;
    Ok(CatalogEntry::Quiver {
        quiver,
        weight: Weight(vec![0, 0, -1, 0, -1, -1, 1, 1, 1]),
    })
}

/// Parses `name(params)` or a bare `name`.
pub fn catalog(entry: &str) -> Result<CatalogEntry> {
    let entry = entry.trim();
    let (name, arg) = match entry.find('(') {
        Some(i) => {
            let inner = entry[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{entry}`")))?;
            (&entry[..i], Some(inner.trim()))
        }
        None => (entry, None),
    };
    let int = |a: Option<&str>| -> Result<i64> {
        a.ok_or_else(|| Error::Parse(format!("`{name}` needs a parameter")))?
            .parse::<i64>()
            .map_err(|e| Error::Parse(e.to_string()))
    };
    let size = |a: Option<&str>| -> Result<usize> {
        let v = int(a)?;
        usize::try_from(v).map_err(|_| Error::InvalidArgument(format!("negative size {v}")))
    };
    match name {
        "birkhoff" => birkhoff(size(arg)?),
        "pn" => pn(size(arg)?),
        "kronecker" => kronecker(int(arg)?),
        "chain" => chain(size(arg)?),
        "k33hub" => k33hub(),
        "caseI" => case_one(),
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert!(matches!(catalog("birkhoff(3)"), Ok(CatalogEntry::Quiver { .. })));
        assert!(matches!(catalog("pn(2)"), Ok(CatalogEntry::CubeSlice { .. })));
        assert!(matches!(catalog("nope"), Err(Error::UnknownCatalog(_))));
        assert!(matches!(catalog("chain(x)"), Err(Error::Parse(_))));
        assert!(matches!(catalog("pn(9)"), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn case_one_shape() {
        let CatalogEntry::Quiver { quiver, weight } = case_one().unwrap() else {
            panic!()
        };
        assert_eq!((quiver.num_vertices(), quiver.num_arrows()), (9, 12));
        assert_eq!(quiver.chi(), 4);
        assert!(weight.is_balanced(&quiver));
    }

    #[test]
    fn json_round_trip() {
        for name in ["birkhoff(2)", "pn(2)", "chain(2)", "k33hub"] {
            let e = catalog(name).unwrap();
            let text = e.to_json().to_string();
            assert_eq!(parse_input_json(&text).unwrap(), e);
        }
    }

    #[test]
    fn pn_points() {
        let p = pn(2).unwrap().polytope(GeometryBudget::default()).unwrap();
        assert_eq!(p.points().len(), 4);
        for v in 0..4 {
            assert!(p.point_index(&pn_vertex_point(2, v)).is_some());
        }
    }
}
