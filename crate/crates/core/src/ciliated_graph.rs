//! Ciliated graphs: half-edges with a fixed-point-free involution, incidence,
//! and a linear order of the half-edges at every vertex. Together with an
//! orientation they form the skeletons on which the moduli spaces are built.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// An edge `[α, α̌]`; `halves` is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub id: String,
    pub halves: [String; 2],
}

/// Canonical edge id: the sorted pair of half-edge ids joined by `:`.
pub fn edge_id(a: &str, b: &str) -> String {
    if a <= b {
        format!("{a}:{b}")
    } else {
        format!("{b}:{a}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiliatedGraph {
    vertices: Vec<String>,
    half_edges: Vec<String>,
    involution: BTreeMap<String, String>,
    incidence: BTreeMap<String, String>,
    orders: BTreeMap<String, Vec<String>>,
}

impl CiliatedGraph {
    /// Validated construction. Vertex and half-edge list order is kept and
    /// fixes all downstream indexing.
    pub fn new(
        vertices: Vec<String>,
        half_edges: Vec<String>,
        involution: BTreeMap<String, String>,
        incidence: BTreeMap<String, String>,
        orders: BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let g = Self { vertices, half_edges, involution, incidence, orders };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        let vset: BTreeSet<&String> = self.vertices.iter().collect();
        if vset.len() != self.vertices.len() {
            return bad("duplicate vertex id".into());
        }
        let hset: BTreeSet<&String> = self.half_edges.iter().collect();
        if hset.len() != self.half_edges.len() {
            return bad("duplicate half-edge id".into());
        }
        for h in &self.half_edges {
            let Some(partner) = self.involution.get(h) else {
                return bad(format!("half-edge `{h}` has no involution partner"));
            };
            if partner == h {
                return bad(format!("involution fixes half-edge `{h}`"));
            }
            if self.involution.get(partner) != Some(h) {
                return bad(format!("involution is not an involution at `{h}`"));
            }
            match self.incidence.get(h) {
                None => return bad(format!("half-edge `{h}` has no incident vertex")),
                Some(v) if !vset.contains(v) => return bad(format!("half-edge `{h}` is incident to unknown vertex `{v}`")),
                _ => {}
            }
        }
        if let Some(h) = self.involution.keys().find(|h| !hset.contains(h)) {
            return bad(format!("involution mentions unknown half-edge `{h}`"));
        }
        if let Some(h) = self.incidence.keys().find(|h| !hset.contains(h)) {
            return bad(format!("incidence mentions unknown half-edge `{h}`"));
        }
        if let Some(v) = self.orders.keys().find(|v| !vset.contains(v)) {
            return bad(format!("order given for unknown vertex `{v}`"));
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            let order = self.orders.get(v).map(Vec::as_slice).unwrap_or(&[]);
            for h in order {
                if self.incidence.get(h) != Some(v) {
                    return bad(format!("order of `{v}` lists `{h}`, which is not incident to it"));
                }
                if !seen.insert(h) {
                    return bad(format!("half-edge `{h}` appears twice in the orders"));
                }
            }
        }
        if seen.len() != self.half_edges.len() {
            let missing = self.half_edges.iter().find(|h| !seen.contains(h)).expect("some half-edge unordered");
            return bad(format!("half-edge `{missing}` is missing from its vertex order"));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn half_edges(&self) -> &[String] {
        &self.half_edges
    }

    pub fn involution(&self) -> &BTreeMap<String, String> {
        &self.involution
    }

    pub fn incidence(&self) -> &BTreeMap<String, String> {
        &self.incidence
    }

    pub fn orders(&self) -> &BTreeMap<String, Vec<String>> {
        &self.orders
    }

    /// `Γ_v` in cilium order.
    pub fn order(&self, v: &str) -> Result<&[String]> {
        if !self.has_vertex(v) {
            return Err(Error::UnknownVertex(v.into()));
        }
        Ok(self.orders.get(v).map(Vec::as_slice).unwrap_or(&[]))
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }

    pub fn vertex_index(&self, v: &str) -> Result<usize> {
        self.vertices.iter().position(|x| x == v).ok_or_else(|| Error::UnknownVertex(v.into()))
    }

    pub fn half_edge_index(&self, h: &str) -> Result<usize> {
        self.half_edges.iter().position(|x| x == h).ok_or_else(|| Error::UnknownHalfEdge(h.into()))
    }

    pub fn partner(&self, h: &str) -> Result<&str> {
        self.involution.get(h).map(String::as_str).ok_or_else(|| Error::UnknownHalfEdge(h.into()))
    }

    pub fn vertex_of(&self, h: &str) -> Result<&str> {
        self.incidence.get(h).map(String::as_str).ok_or_else(|| Error::UnknownHalfEdge(h.into()))
    }

    /// Edges in order of first appearance of a half-edge in [`Self::half_edges`].
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.half_edges.len() / 2);
        let mut done = BTreeSet::new();
        for h in &self.half_edges {
            if done.contains(h) {
                continue;
            }
            let p = &self.involution[h];
            done.insert(p.clone());
            let mut halves = [h.clone(), p.clone()];
            halves.sort();
            out.push(Edge { id: edge_id(h, p), halves });
        }
        out
    }

    pub fn edge_of(&self, h: &str) -> Result<String> {
        Ok(edge_id(h, self.partner(h)?))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges().iter().position(|e| e.id == id).ok_or_else(|| Error::UnknownEdge(id.into()))
    }

    pub fn edge_count(&self) -> usize {
        self.half_edges.len() / 2
    }

    /// Identifies `v1` and `v2` into a vertex named `v1=v2` at `v1`'s position;
    /// its order is `Γ_{v1}` followed by `Γ_{v2}`.
    pub fn fuse(&self, v1: &str, v2: &str) -> Result<Self> {
        if v1 == v2 {
            return Err(Error::InvalidArgument(format!("cannot fuse vertex `{v1}` with itself")));
        }
        self.vertex_index(v1)?;
        self.vertex_index(v2)?;
        let merged = format!("{v1}={v2}");
        if self.has_vertex(&merged) {
            return Err(Error::InvalidGraph(format!("vertex `{merged}` already exists")));
        }
        let vertices = self
            .vertices
            .iter()
            .filter(|v| *v != v2)
            .map(|v| if v == v1 { merged.clone() } else { v.clone() })
            .collect();
        let incidence = self
            .incidence
            .iter()
            .map(|(h, v)| (h.clone(), if v == v1 || v == v2 { merged.clone() } else { v.clone() }))
            .collect();
        let mut orders: BTreeMap<String, Vec<String>> =
            self.orders.iter().filter(|(v, _)| *v != v1 && *v != v2).map(|(v, o)| (v.clone(), o.clone())).collect();
        let mut order = self.order(v1)?.to_vec();
        order.extend_from_slice(self.order(v2)?);
        orders.insert(merged, order);
        Self::new(vertices, self.half_edges.clone(), self.involution.clone(), incidence, orders)
    }

    /// Splits `v` into `v.1` carrying the first `k` half-edges of its order
    /// and `v.2` carrying the rest; fusing them back at `(v.1, v.2)` gives
    /// `v` up to renaming.
    pub fn split(&self, v: &str, k: usize) -> Result<Self> {
        let order = self.order(v)?;
        if k == 0 || k >= order.len() {
            return Err(Error::InvalidArgument(format!("split point {k} must lie strictly inside the order of `{v}`")));
        }
        let (first, second) = (format!("{v}.1"), format!("{v}.2"));
        for name in [&first, &second] {
            if self.has_vertex(name) {
                return Err(Error::InvalidGraph(format!("vertex `{name}` already exists")));
            }
        }
        let mut vertices = Vec::with_capacity(self.vertices.len() + 1);
        for x in &self.vertices {
            if x == v {
                vertices.push(first.clone());
                vertices.push(second.clone());
            } else {
                vertices.push(x.clone());
            }
        }
        let mut incidence = self.incidence.clone();
        for (i, h) in order.iter().enumerate() {
            incidence.insert(h.clone(), if i < k { first.clone() } else { second.clone() });
        }
        let mut orders = self.orders.clone();
        orders.remove(v);
        orders.insert(first, order[..k].to_vec());
        orders.insert(second, order[k..].to_vec());
        Self::new(vertices, self.half_edges.clone(), self.involution.clone(), incidence, orders)
    }

    /// Union of graphs with disjoint ids.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().cloned());
        let mut half_edges = self.half_edges.clone();
        half_edges.extend(other.half_edges.iter().cloned());
        let mut involution = self.involution.clone();
        involution.extend(other.involution.clone());
        let mut incidence = self.incidence.clone();
        incidence.extend(other.incidence.clone());
        let mut orders = self.orders.clone();
        orders.extend(other.orders.clone());
        Self::new(vertices, half_edges, involution, incidence, orders)
    }

    /// Renames vertices and half-edges; unmapped ids are kept.
    pub fn relabel(&self, map: &Relabeling) -> Result<Self> {
        let v = |x: &String| map.vertices.get(x).cloned().unwrap_or_else(|| x.clone());
        let h = |x: &String| map.half_edges.get(x).cloned().unwrap_or_else(|| x.clone());
        Self::new(
            self.vertices.iter().map(v).collect(),
            self.half_edges.iter().map(h).collect(),
            self.involution.iter().map(|(a, b)| (h(a), h(b))).collect(),
            self.incidence.iter().map(|(a, x)| (h(a), v(x))).collect(),
            self.orders.iter().map(|(x, o)| (v(x), o.iter().map(h).collect())).collect(),
        )
    }

    /// Prefixes every id with `prefix`.
    pub fn prefixed(&self, prefix: &str) -> Result<Self> {
        let map = Relabeling {
            vertices: self.vertices.iter().map(|v| (v.clone(), format!("{prefix}{v}"))).collect(),
            half_edges: self.half_edges.iter().map(|h| (h.clone(), format!("{prefix}{h}"))).collect(),
        };
        self.relabel(&map)
    }
}

/// Maps ids of one graph to ids of another.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relabeling {
    pub vertices: BTreeMap<String, String>,
    pub half_edges: BTreeMap<String, String>,
}

impl Relabeling {
    pub fn vertex(mut self, from: &str, to: &str) -> Self {
        self.vertices.insert(from.into(), to.into());
        self
    }

    pub fn half_edge(mut self, from: &str, to: &str) -> Self {
        self.half_edges.insert(from.into(), to.into());
        self
    }
}

/// Structural equality of `g1` (after `relabel`) and `g2`; vertex and
/// half-edge lists compare as sets.
pub fn graph_equal(g1: &CiliatedGraph, g2: &CiliatedGraph, relabel: Option<&Relabeling>) -> bool {
    let g1 = match relabel {
        Some(map) => match g1.relabel(map) {
            Ok(g) => g,
            Err(_) => return false,
        },
        None => g1.clone(),
    };
    let set = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
    let nonempty = |o: &BTreeMap<String, Vec<String>>| {
        o.iter().filter(|(_, l)| !l.is_empty()).map(|(v, l)| (v.clone(), l.clone())).collect::<BTreeMap<_, _>>()
    };
    set(&g1.vertices) == set(&g2.vertices)
        && set(&g1.half_edges) == set(&g2.half_edges)
        && g1.involution == g2.involution
        && g1.incidence == g2.incidence
        && nonempty(&g1.orders) == nonempty(&g2.orders)
}

/// Source half-edge `α_γ` of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    sources: BTreeMap<String, String>,
}

impl Orientation {
    pub fn new(g: &CiliatedGraph, sources: BTreeMap<String, String>) -> Result<Self> {
        let edges = g.edges();
        for e in &edges {
            match sources.get(&e.id) {
                None => return Err(Error::InvalidGraph(format!("edge `{}` has no orientation", e.id))),
                Some(s) if !e.halves.contains(s) => {
                    return Err(Error::InvalidGraph(format!("source `{s}` does not belong to edge `{}`", e.id)))
                }
                _ => {}
            }
        }
        if let Some(id) = sources.keys().find(|id| !edges.iter().any(|e| &e.id == *id)) {
            return Err(Error::UnknownEdge(id.clone()));
        }
        Ok(Self { sources })
    }

    /// Each edge oriented out of its half-edge listed first in `g.half_edges()`.
    pub fn default_for(g: &CiliatedGraph) -> Self {
        let mut sources = BTreeMap::new();
        for h in g.half_edges() {
            sources.entry(g.edge_of(h).expect("valid graph")).or_insert_with(|| h.clone());
        }
        Self { sources }
    }

    pub fn sources(&self) -> &BTreeMap<String, String> {
        &self.sources
    }

    pub fn source(&self, edge: &str) -> Result<&str> {
        self.sources.get(edge).map(String::as_str).ok_or_else(|| Error::UnknownEdge(edge.into()))
    }

    pub fn target<'a>(&self, g: &'a CiliatedGraph, edge: &str) -> Result<&'a str> {
        g.partner(self.source(edge)?)
    }

    pub fn is_source(&self, g: &CiliatedGraph, h: &str) -> Result<bool> {
        Ok(self.source(&g.edge_of(h)?)? == h)
    }

    /// `ε(α) = +1` on source half-edges, `−1` on target half-edges.
    pub fn epsilon(&self, g: &CiliatedGraph, h: &str) -> Result<i8> {
        Ok(if self.is_source(g, h)? { 1 } else { -1 })
    }

    pub fn reverse_edge(&self, g: &CiliatedGraph, edge: &str) -> Result<Self> {
        let src = self.source(edge)?;
        let mut sources = self.sources.clone();
        sources.insert(edge.to_string(), g.partner(src)?.to_string());
        Ok(Self { sources })
    }
}

/// A ciliated graph with an orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub graph: CiliatedGraph,
    pub orientation: Orientation,
}

impl Skeleton {
    pub fn new(graph: CiliatedGraph, orientation: Orientation) -> Self {
        Self { graph, orientation }
    }

    /// Edge orientations are unaffected by fusion.
    pub fn fuse(&self, v1: &str, v2: &str) -> Result<Self> {
        Ok(Self { graph: self.graph.fuse(v1, v2)?, orientation: self.orientation.clone() })
    }

    pub fn split(&self, v: &str, k: usize) -> Result<Self> {
        Ok(Self { graph: self.graph.split(v, k)?, orientation: self.orientation.clone() })
    }

    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let graph = self.graph.disjoint_union(&other.graph)?;
        let mut sources = self.orientation.sources.clone();
        sources.extend(other.orientation.sources.clone());
        let orientation = Orientation::new(&graph, sources)?;
        Ok(Self { graph, orientation })
    }

    pub fn prefixed(&self, prefix: &str) -> Result<Self> {
        let graph = self.graph.prefixed(prefix)?;
        let sources = self
            .orientation
            .sources
            .values()
            .map(|s| {
                let s = format!("{prefix}{s}");
                (graph.edge_of(&s).expect("relabeled half-edge"), s)
            })
            .collect();
        let orientation = Orientation::new(&graph, sources)?;
        Ok(Self { graph, orientation })
    }

    pub fn reverse_edge(&self, edge: &str) -> Result<Self> {
        Ok(Self { graph: self.graph.clone(), orientation: self.orientation.reverse_edge(&self.graph, edge)? })
    }

    pub fn source_vertex(&self, edge: &str) -> Result<&str> {
        self.graph.vertex_of(self.orientation.source(edge)?)
    }

    pub fn target_vertex(&self, edge: &str) -> Result<&str> {
        self.graph.vertex_of(self.orientation.target(&self.graph, edge)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveDirection {
    /// `(v1→v2), (v2→v3)` becomes `(v1→v3), (v2→v3)`; `g_1 ↦ g_1 g_2`.
    Forward,
    /// Inverse of [`MoveDirection::Forward`]; `g_1 ↦ g_1 g_2^{-1}`.
    Backward,
}

/// Pivot of a local move: `moved` has its target half-edge re-based along `along`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub moved: String,
    pub along: String,
    pub direction: MoveDirection,
}

/// What a local move changed. Edge ids are preserved, so the induced
/// identification of edge sets is the identity on ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub pivot: Pivot,
    pub half_edge: String,
    pub from_vertex: String,
    pub to_vertex: String,
    pub vertex_map: BTreeMap<String, String>,
}

/// Re-attaches the target half-edge `β` of `pivot.moved`.
///
/// Forward: `moved = (α_1 → β)` with `β` at `v2` directly after the source
/// `α_2` of `along = (α_2 → α̌_2)`, `α̌_2` at `v3 ≠ v2` and `α_1` not at `v2`.
/// `β` moves to `v3`, directly before `α̌_2`. Backward undoes this.
pub fn local_move(s: &Skeleton, pivot: &Pivot) -> Result<(Skeleton, MoveRecord)> {
    let g = &s.graph;
    let o = &s.orientation;
    let fail = |m: &str| Err(Error::MovePattern(m.to_string()));
    if pivot.moved == pivot.along {
        return fail("the two pivot edges coincide");
    }
    let beta = o.target(g, &pivot.moved)?.to_string();
    let alpha1 = o.source(&pivot.moved)?.to_string();
    let alpha2 = o.source(&pivot.along)?.to_string();
    let alpha2_end = o.target(g, &pivot.along)?.to_string();
    let v2 = g.vertex_of(&alpha2)?.to_string();
    let v3 = g.vertex_of(&alpha2_end)?.to_string();
    if v2 == v3 {
        return fail("the second edge is a loop");
    }
    let v1 = g.vertex_of(&alpha1)?.to_string();
    let at_beta = g.vertex_of(&beta)?.to_string();
    let (from, to) = match pivot.direction {
        MoveDirection::Forward => {
            if at_beta != v2 {
                return fail("the moved edge does not end at the source vertex of the second edge");
            }
            if v1 == v2 {
                return fail("the moved edge starts at the middle vertex");
            }
            let ord = g.order(&v2)?;
            let i = ord.iter().position(|h| *h == alpha2).expect("incident");
            if ord.get(i + 1) != Some(&beta) {
                return fail("the moved half-edge does not directly follow the second edge's source");
            }
            (v2, v3)
        }
        MoveDirection::Backward => {
            if at_beta != v3 {
                return fail("the moved edge does not end at the target vertex of the second edge");
            }
            if v1 == v2 {
                return fail("the moved edge would start at the middle vertex");
            }
            let ord = g.order(&v3)?;
            let i = ord.iter().position(|h| *h == alpha2_end).expect("incident");
            if i == 0 || ord[i - 1] != beta {
                return fail("the moved half-edge does not directly precede the second edge's target");
            }
            (v3, v2)
        }
    };

    let mut orders = g.orders.clone();
    orders.get_mut(&from).expect("vertex has an order").retain(|h| *h != beta);
    let dest = orders.entry(to.clone()).or_default();
    match pivot.direction {
        MoveDirection::Forward => {
            let i = dest.iter().position(|h| *h == alpha2_end).expect("incident");
            dest.insert(i, beta.clone());
        }
        MoveDirection::Backward => {
            let i = dest.iter().position(|h| *h == alpha2).expect("incident");
            dest.insert(i + 1, beta.clone());
        }
    }
    let mut incidence = g.incidence.clone();
    incidence.insert(beta.clone(), to.clone());
    let graph = CiliatedGraph::new(g.vertices.clone(), g.half_edges.clone(), g.involution.clone(), incidence, orders)?;
    let record = MoveRecord {
        pivot: pivot.clone(),
        half_edge: beta,
        from_vertex: from,
        to_vertex: to,
        vertex_map: g.vertices.iter().map(|v| (v.clone(), v.clone())).collect(),
    };
    Ok((Skeleton { graph, orientation: o.clone() }, record))
}

fn strings<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// One edge `a1 → b1` from `v1` to `v2`.
pub fn disk2() -> Skeleton {
    edge_skeleton("v1", "v2", 1)
}

fn edge_skeleton(from: &str, to: &str, k: usize) -> Skeleton {
    let (a, b) = (format!("a{k}"), format!("b{k}"));
    let graph = CiliatedGraph::new(
        strings([from, to]),
        vec![a.clone(), b.clone()],
        [(a.clone(), b.clone()), (b.clone(), a.clone())].into_iter().collect(),
        [(a.clone(), from.to_string()), (b.clone(), to.to_string())].into_iter().collect(),
        [(from.to_string(), vec![a.clone()]), (to.to_string(), vec![b.clone()])].into_iter().collect(),
    )
    .expect("valid edge");
    let orientation = Orientation { sources: [(edge_id(&a, &b), a)].into_iter().collect() };
    Skeleton { graph, orientation }
}

fn union_all(parts: Vec<Skeleton>) -> Result<Skeleton> {
    let mut it = parts.into_iter();
    let mut acc = it.next().ok_or_else(|| Error::InvalidArgument("empty union".into()))?;
    for p in it {
        acc = acc.disjoint_union(&p)?;
    }
    Ok(acc)
}

/// `n` parallel edges `a_k → b_k` from `v1` to `v2`; `v1` is ordered
/// `a_1 < … < a_n` and `v2` is ordered `b_n < … < b_1`.
pub fn sigma_n(n: usize) -> Result<Skeleton> {
    if n < 1 {
        return Err(Error::InvalidArgument("sigma_n needs n ≥ 1".into()));
    }
    let a: Vec<String> = (1..=n).map(|k| format!("a{k}")).collect();
    let b: Vec<String> = (1..=n).map(|k| format!("b{k}")).collect();
    let mut involution = BTreeMap::new();
    let mut incidence = BTreeMap::new();
    let mut sources = BTreeMap::new();
    let mut half_edges = Vec::new();
    for k in 0..n {
        involution.insert(a[k].clone(), b[k].clone());
        involution.insert(b[k].clone(), a[k].clone());
        incidence.insert(a[k].clone(), "v1".to_string());
        incidence.insert(b[k].clone(), "v2".to_string());
        sources.insert(edge_id(&a[k], &b[k]), a[k].clone());
        half_edges.push(a[k].clone());
        half_edges.push(b[k].clone());
    }
    let orders = [("v1".to_string(), a), ("v2".to_string(), b.into_iter().rev().collect())].into_iter().collect();
    let graph = CiliatedGraph::new(strings(["v1", "v2"]), half_edges, involution, incidence, orders)?;
    let orientation = Orientation::new(&graph, sources)?;
    Ok(Skeleton { graph, orientation })
}

/// Path `v1 → v2 → … → v_{k+1}` with edges `a_i → b_i`; each interior vertex
/// is ordered (source of the next edge, target of the previous edge).
pub fn polygon_path(k: usize) -> Result<Skeleton> {
    if k < 2 {
        return Err(Error::InvalidArgument("polygon_path needs k ≥ 2".into()));
    }
    let mut half_edges = Vec::new();
    let mut involution = BTreeMap::new();
    let mut incidence = BTreeMap::new();
    let mut orders: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut sources = BTreeMap::new();
    let vertices: Vec<String> = (1..=k + 1).map(|i| format!("v{i}")).collect();
    for i in 1..=k {
        let (a, b) = (format!("a{i}"), format!("b{i}"));
        half_edges.push(a.clone());
        half_edges.push(b.clone());
        involution.insert(a.clone(), b.clone());
        involution.insert(b.clone(), a.clone());
        incidence.insert(a.clone(), vertices[i - 1].clone());
        incidence.insert(b.clone(), vertices[i].clone());
        sources.insert(edge_id(&a, &b), a.clone());
    }
    for (i, v) in vertices.iter().enumerate() {
        let mut order = Vec::new();
        if i < k {
            order.push(format!("a{}", i + 1));
        }
        if i > 0 {
            order.push(format!("b{i}"));
        }
        orders.insert(v.clone(), order);
    }
    let graph = CiliatedGraph::new(vertices, half_edges, involution, incidence, orders)?;
    let orientation = Orientation::new(&graph, sources)?;
    Ok(Skeleton { graph, orientation })
}

/// Annulus with `m` marked points: disks `a_i → b_i` from `v_{2i−1}` to
/// `v_{2i}`, fused at `(v_{2i+1}, v_{2i})` in turn and closed at `(v_1, v_{2m})`.
pub fn annulus_marked(m: usize) -> Result<Skeleton> {
    if m < 1 {
        return Err(Error::InvalidArgument("annulus_marked needs m ≥ 1".into()));
    }
    let disks = (1..=m).map(|i| edge_skeleton(&format!("v{}", 2 * i - 1), &format!("v{}", 2 * i), i)).collect();
    let mut s = union_all(disks)?;
    for i in 1..m {
        s = s.fuse(&format!("v{}", 2 * i + 1), &format!("v{}", 2 * i))?;
    }
    let first = s.graph.vertex_of("a1")?.to_string();
    let last = s.graph.vertex_of(&format!("b{m}"))?.to_string();
    s.fuse(&first, &last)
}

/// Adds an edge from `vertex` to a new leaf vertex; the new half-edge
/// `name` sits at `position` in the order of `vertex`.
pub fn attach_pendant(s: &Skeleton, vertex: &str, position: usize, name: &str) -> Result<Skeleton> {
    let g = &s.graph;
    let ord = g.order(vertex)?;
    if position > ord.len() {
        return Err(Error::InvalidArgument(format!("position {position} beyond order of `{vertex}`")));
    }
    let (near, far, leaf) = (name.to_string(), format!("{name}'"), format!("{name}.leaf"));
    let mut vertices = g.vertices.clone();
    vertices.push(leaf.clone());
    let mut half_edges = g.half_edges.clone();
    half_edges.push(near.clone());
    half_edges.push(far.clone());
    let mut involution = g.involution.clone();
    involution.insert(near.clone(), far.clone());
    involution.insert(far.clone(), near.clone());
    let mut incidence = g.incidence.clone();
    incidence.insert(near.clone(), vertex.to_string());
    incidence.insert(far.clone(), leaf.clone());
    let mut orders = g.orders.clone();
    orders.entry(vertex.to_string()).or_default().insert(position, near.clone());
    orders.insert(leaf, vec![far]);
    let graph = CiliatedGraph::new(vertices, half_edges, involution, incidence, orders)?;
    let mut sources = s.orientation.sources.clone();
    sources.insert(graph.edge_of(&near)?, near);
    let orientation = Orientation::new(&graph, sources)?;
    Ok(Skeleton { graph, orientation })
}

/// A random skeleton with `1..=max_vertices` vertices and `1..=max_edges`
/// edges, every vertex carrying at least one half-edge. Loops and multiple
/// edges occur; cilium orders and orientations are uniform.
pub fn random_skeleton<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Result<Skeleton> {
    if max_vertices < 1 || max_edges < 1 {
        return Err(Error::InvalidArgument("random_skeleton needs at least one vertex and edge".into()));
    }
    loop {
        let nv = rng.random_range(1..=max_vertices);
        let ne = rng.random_range(1..=max_edges);
        if 2 * ne < nv {
            continue;
        }
        let vertices: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
        let mut half_edges = Vec::new();
        let mut involution = BTreeMap::new();
        let mut incidence = BTreeMap::new();
        let mut orders: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut sources = BTreeMap::new();
        for k in 1..=ne {
            let (a, b) = (format!("a{k}"), format!("b{k}"));
            let (va, vb) = (&vertices[rng.random_range(0..nv)], &vertices[rng.random_range(0..nv)]);
            half_edges.push(a.clone());
            half_edges.push(b.clone());
            involution.insert(a.clone(), b.clone());
            involution.insert(b.clone(), a.clone());
            incidence.insert(a.clone(), va.clone());
            incidence.insert(b.clone(), vb.clone());
            orders.entry(va.clone()).or_default().push(a.clone());
            orders.entry(vb.clone()).or_default().push(b.clone());
            let src = if rng.random_bool(0.5) { a.clone() } else { b.clone() };
            sources.insert(edge_id(&a, &b), src);
        }
        if vertices.iter().any(|v| !orders.contains_key(v)) {
            continue;
        }
        for order in orders.values_mut() {
            order.shuffle(rng);
        }
        let graph = CiliatedGraph::new(vertices, half_edges, involution, incidence, orders)?;
        let orientation = Orientation::new(&graph, sources)?;
        return Ok(Skeleton { graph, orientation });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk2_counts() {
        let s = disk2();
        assert_eq!(s.graph.vertices().len(), 2);
        assert_eq!(s.graph.edge_count(), 1);
        assert_eq!(s.graph.half_edges().len(), 2);
        assert_eq!(s.source_vertex("a1:b1").unwrap(), "v1");
    }

    #[test]
    fn annulus_one_is_self_fused_disk() {
        let a = annulus_marked(1).unwrap();
        let f = disk2().fuse("v1", "v2").unwrap();
        assert_eq!(a, f);
        assert_eq!(a.graph.vertices(), ["v1=v2"]);
        assert_eq!(a.graph.order("v1=v2").unwrap(), ["a1", "b1"]);
        assert!(!graph_equal(&disk2().graph, &a.graph, None));
    }

    #[test]
    fn fixed_point_involution_is_rejected() {
        let g = CiliatedGraph::new(
            strings(["v"]),
            strings(["x"]),
            [("x".into(), "x".into())].into_iter().collect(),
            [("x".into(), "v".into())].into_iter().collect(),
            [("v".into(), strings(["x"]))].into_iter().collect(),
        );
        let msg = g.unwrap_err().to_string();
        assert!(msg.contains("`x`"), "{msg}");
    }

    #[test]
    fn order_must_match_incidence() {
        let s = disk2();
        let mut orders = s.graph.orders().clone();
        orders.insert("v1".into(), vec![]);
        let g = CiliatedGraph::new(
            s.graph.vertices().to_vec(),
            s.graph.half_edges().to_vec(),
            s.graph.involution().clone(),
            s.graph.incidence().clone(),
            orders,
        );
        assert!(g.is_err());
    }

    #[test]
    fn fuse_errors() {
        let s = disk2();
        assert!(s.fuse("v1", "v1").is_err());
        assert!(matches!(s.fuse("v1", "nope"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn reverse_is_involutive() {
        let s = annulus_marked(1).unwrap();
        let r = s.reverse_edge("a1:b1").unwrap();
        assert_eq!(r.orientation.source("a1:b1").unwrap(), "b1");
        let eps = |s: &Skeleton| {
            s.graph.order("v1=v2").unwrap().iter().map(|h| s.orientation.epsilon(&s.graph, h).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(eps(&s), [1, -1]);
        assert_eq!(eps(&r), [-1, 1]);
        assert_eq!(r.reverse_edge("a1:b1").unwrap(), s);
        assert!(s.reverse_edge("x:y").is_err());
    }

    #[test]
    fn sigma_three_shape() {
        let s = sigma_n(3).unwrap();
        assert_eq!(s.graph.vertices().len(), 2);
        assert_eq!(s.graph.edge_count(), 3);
        assert_eq!(s.graph.order("v1").unwrap(), ["a1", "a2", "a3"]);
        assert_eq!(s.graph.order("v2").unwrap(), ["b3", "b2", "b1"]);
    }

    #[test]
    fn local_move_on_three_point_disk() {
        let s = polygon_path(2).unwrap();
        let pivot = Pivot { moved: "a1:b1".into(), along: "a2:b2".into(), direction: MoveDirection::Forward };
        let (t, rec) = local_move(&s, &pivot).unwrap();
        assert_eq!(rec.half_edge, "b1");
        assert_eq!(t.target_vertex("a1:b1").unwrap(), "v3");
        assert_eq!(t.graph.order("v3").unwrap(), ["b1", "b2"]);
        assert_eq!(t.graph.order("v2").unwrap(), ["a2"]);
        let back = Pivot { direction: MoveDirection::Backward, ..pivot.clone() };
        let (u, _) = local_move(&t, &back).unwrap();
        assert_eq!(u, s);
        assert!(local_move(&s, &back).is_err());
        let swapped = Pivot { moved: "a2:b2".into(), along: "a1:b1".into(), direction: MoveDirection::Forward };
        assert!(local_move(&s, &swapped).is_err());
    }

    #[test]
    fn random_skeletons_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_skeleton(&mut rng, 4, 6).unwrap();
            s.graph.validate().unwrap();
            assert!(s.graph.vertices().len() <= 4 && s.graph.edge_count() <= 6);
            assert!(s.graph.vertices().iter().all(|v| !s.graph.order(v).unwrap().is_empty()));
        }
    }

    #[test]
    fn split_inverts_fuse() {
        let a = annulus_marked(1).unwrap();
        let parts = a.split("v1=v2", 1).unwrap();
        assert_eq!(parts.graph.order("v1=v2.1").unwrap(), ["a1"]);
        let back = parts.fuse("v1=v2.1", "v1=v2.2").unwrap();
        let rename = Relabeling::default().vertex("v1=v2.1=v1=v2.2", "v1=v2");
        assert!(graph_equal(&back.graph, &a.graph, Some(&rename)));
        assert!(a.split("v1=v2", 2).is_err());
    }

}
