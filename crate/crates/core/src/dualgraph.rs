//! Weighted dual graphs of reduced boundary divisors.
//!
//! Each vertex is a component `D_i` with its arithmetic genus and
//! self-intersection; each edge carries the intersection number `D_u . D_v`.
//! Multiplicities above one are allowed (they are flagged by
//! [`DualGraph::snc_violations`]) and make both endpoints ineligible for
//! chains.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::matrix::{is_negative_definite, QMatrix};
use crate::rational::{as_i64, fmt_q, q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    #[serde(rename = "self")]
    pub self_int: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: String,
    pub v: String,
    pub mult: u32,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<Vertex>,
    #[serde(default)]
    edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classes: Option<BTreeMap<String, DivisorClass>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    classes: Option<BTreeMap<String, DivisorClass>>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<(usize, u32)>>,
}

impl TryFrom<GraphJson> for DualGraph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Self> {
        let mut graph = DualGraph::new(g.vertices, g.edges)?;
        if let Some(classes) = g.classes {
            graph = graph.with_classes(classes)?;
        }
        Ok(graph)
    }
}

impl From<DualGraph> for GraphJson {
    fn from(g: DualGraph) -> Self {
        GraphJson { vertices: g.vertices, edges: g.edges, classes: g.classes }
    }
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {:?}", v.id)));
            }
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        for e in &edges {
            let u = *index.get(&e.u).ok_or_else(|| Error::UnknownVertex(e.u.clone()))?;
            let v = *index.get(&e.v).ok_or_else(|| Error::UnknownVertex(e.v.clone()))?;
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {:?}", e.u)));
            }
            if e.mult == 0 {
                return Err(Error::InvalidGraph(format!("zero multiplicity on {}-{}", e.u, e.v)));
            }
            if adj[u].iter().any(|&(w, _)| w == v) {
                return Err(Error::InvalidGraph(format!("repeated edge {}-{}", e.u, e.v)));
            }
            adj[u].push((v, e.mult));
            adj[v].push((u, e.mult));
        }
        Ok(DualGraph { vertices, edges, classes: None, index, adj })
    }

    /// Build the dual graph of the components `(id, class)` from the lattice
    /// pairing: genus by adjunction, self-intersection and edge weights from
    /// the Gram matrix.
    pub fn from_classes(model: &SurfaceModel, comps: &[(String, DivisorClass)]) -> Result<Self> {
        let mut vertices = Vec::new();
        for (id, c) in comps {
            let pa = model.arithmetic_genus(c)?;
            let genus = as_i64(&pa)
                .filter(|g| *g >= 0)
                .ok_or_else(|| Error::InvalidGraph(format!("component {id} has arithmetic genus {}", fmt_q(&pa))))?;
            let s = model.square(c)?;
            let self_int = as_i64(&s)
                .ok_or_else(|| Error::InvalidGraph(format!("component {id} has non-integral square")))?;
            vertices.push(Vertex { id: id.clone(), genus: genus as u32, self_int });
        }
        let mut edges = Vec::new();
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                let m = model.intersect(&comps[i].1, &comps[j].1)?;
                if m.is_zero() {
                    continue;
                }
                let mult = as_i64(&m).filter(|m| *m > 0).ok_or_else(|| {
                    Error::InvalidGraph(format!(
                        "components {} and {} meet with {}",
                        comps[i].0,
                        comps[j].0,
                        fmt_q(&m)
                    ))
                })?;
                edges.push(Edge { u: comps[i].0.clone(), v: comps[j].0.clone(), mult: mult as u32 });
            }
        }
        let classes = comps.iter().cloned().collect();
        DualGraph::new(vertices, edges)?.with_classes(classes)
    }

    pub fn with_classes(mut self, classes: BTreeMap<String, DivisorClass>) -> Result<Self> {
        for id in classes.keys() {
            if !self.index.contains_key(id) {
                return Err(Error::UnknownVertex(id.clone()));
            }
        }
        self.classes = Some(classes);
        Ok(self)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn classes(&self) -> Option<&BTreeMap<String, DivisorClass>> {
        self.classes.as_ref()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// `D_i . D_j` as recorded in the graph.
    pub(crate) fn entry(&self, i: usize, j: usize) -> Q {
        if i == j {
            q(self.vertices[i].self_int)
        } else {
            self.adj[i].iter().find(|&&(k, _)| k == j).map_or_else(Q::zero, |&(_, m)| q(m as i64))
        }
    }

    /// Number of distinct components meeting `id`.
    pub fn branching_number(&self, id: &str) -> Result<usize> {
        Ok(self.adj[self.index_of(id)?].len())
    }

    pub(crate) fn beta(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Sum of edge multiplicities, i.e. `sum_{i<j} D_i . D_j`.
    pub fn total_edge_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.mult as i64).sum()
    }

    /// `sum p_a(D_i) + 1 + l - r`.
    pub fn arithmetic_genus(&self) -> i64 {
        let genera: i64 = self.vertices.iter().map(|v| v.genus as i64).sum();
        genera + 1 + self.total_edge_weight() - self.vertices.len() as i64
    }

    pub fn gram(&self) -> QMatrix {
        let idx: Vec<usize> = (0..self.len()).collect();
        self.gram_on(&idx)
    }

    /// Intersection matrix of the components at `idx`, in that order.
    pub fn gram_on(&self, idx: &[usize]) -> QMatrix {
        QMatrix(idx.iter().map(|&i| idx.iter().map(|&j| self.entry(i, j)).collect()).collect())
    }

    /// Connected components as sorted index lists, ordered by smallest index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Reasons this graph is not the dual graph of an SNC divisor.
    pub fn snc_violations(&self) -> Vec<String> {
        self.edges
            .iter()
            .filter(|e| e.mult > 1)
            .map(|e| format!("{} and {} meet with multiplicity {}", e.u, e.v, e.mult))
            .collect()
    }

    /// Check the recorded genera, self-intersections and edge weights against
    /// the lattice pairing of the attached classes.
    pub fn check_against(&self, model: &SurfaceModel) -> Result<()> {
        let Some(classes) = &self.classes else {
            return Ok(());
        };
        for (id, c) in classes {
            let v = &self.vertices[self.index_of(id)?];
            let s = model.square(c)?;
            if s != q(v.self_int) {
                return Err(Error::InvalidGraph(format!(
                    "{id}: self-intersection {} in graph, {} from class",
                    v.self_int,
                    fmt_q(&s)
                )));
            }
            let pa = model.arithmetic_genus(c)?;
            if pa != q(v.genus as i64) {
                return Err(Error::InvalidGraph(format!(
                    "{id}: genus {} in graph, {} from class",
                    v.genus,
                    fmt_q(&pa)
                )));
            }
        }
        let ids: Vec<&String> = classes.keys().collect();
        for (a, u) in ids.iter().enumerate() {
            for w in &ids[a + 1..] {
                let (iu, iw) = (self.index_of(u)?, self.index_of(w)?);
                let in_graph = self.adj[iu].iter().find(|&&(k, _)| k == iw).map_or(0, |&(_, m)| m);
                let pairing = model.intersect(&classes[*u], &classes[*w])?;
                if pairing != q(in_graph as i64) {
                    return Err(Error::InvalidGraph(format!(
                        "{u}.{w} = {} from classes but {in_graph} in graph",
                        fmt_q(&pairing)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sum of the attached classes, when every vertex has one.
    pub fn total_class(&self, model: &SurfaceModel) -> Option<DivisorClass> {
        let classes = self.classes.as_ref()?;
        if classes.len() != self.len() {
            return None;
        }
        Some(classes.values().fold(DivisorClass::zero(model.basis_len()), |acc, c| &acc + c))
    }

    /// Why vertex `i` cannot sit inside a rod, twig or fork.
    fn ineligible(&self, i: usize) -> Option<&'static str> {
        let v = &self.vertices[i];
        if v.genus > 0 {
            Some("non-rational component")
        } else if v.self_int == -1 {
            Some("contains a (-1)-curve")
        } else if v.self_int >= 0 {
            Some("non-negative self-intersection")
        } else if self.adj[i].iter().any(|&(_, m)| m >= 2) {
            Some("edge multiplicity >= 2")
        } else {
            None
        }
    }

    pub fn classify_segments(&self) -> SegmentReport {
        let (segs, excluded) = self.segments();
        let name = |idx: &[usize]| -> Vec<String> {
            idx.iter().map(|&i| self.vertices[i].id.clone()).collect()
        };
        let mut report = SegmentReport {
            tips: (0..self.len())
                .filter(|&i| self.beta(i) == 1)
                .map(|i| self.vertices[i].id.clone())
                .collect(),
            excluded,
            ..Default::default()
        };
        for s in segs {
            match s.kind {
                SegmentKind::Rod => report.rods.push(name(&s.vertices)),
                SegmentKind::Twig => {
                    let at = s.attached_to.expect("twig without attachment");
                    report.twigs.push(Twig {
                        vertices: name(&s.vertices),
                        attached_to: self.vertices[at].id.clone(),
                        attachment_branching: self.beta(at),
                    })
                }
                SegmentKind::Fork => {
                    let center = s.vertices[0];
                    let branches = s.branches.iter().map(|b| name(b)).collect();
                    report.forks.push(Fork { center: self.vertices[center].id.clone(), branches })
                }
            }
        }
        report
    }

    /// Maximal admissible rational twigs, rods and forks, by vertex index.
    pub(crate) fn segments(&self) -> (Vec<Segment>, Vec<Exclusion>) {
        let mut segs = Vec::new();
        let mut excluded = Vec::new();
        let ids = |idx: &[usize]| -> Vec<String> {
            idx.iter().map(|&i| self.vertices[i].id.clone()).collect()
        };
        for comp in self.components() {
            let pairs: usize = comp.iter().map(|&i| self.beta(i)).sum::<usize>() / 2;
            let is_tree = pairs + 1 == comp.len();
            let max_beta = comp.iter().map(|&i| self.beta(i)).max().unwrap_or(0);
            let first_bad = comp.iter().find_map(|&i| self.ineligible(i));

            if is_tree && max_beta <= 2 {
                let order = self.walk_chain(&comp);
                match first_bad {
                    None if self.is_nd(&order) => {
                        segs.push(Segment::rod(order));
                        continue;
                    }
                    None => excluded.push(Exclusion::new(ids(&order), "rod", "not negative definite")),
                    Some(why) => excluded.push(Exclusion::new(ids(&order), "rod", why)),
                }
            } else if is_tree && max_beta == 3 && comp.iter().filter(|&&i| self.beta(i) == 3).count() == 1 {
                let center = *comp.iter().find(|&&i| self.beta(i) == 3).unwrap();
                let branches: Vec<Vec<usize>> = self.adj[center]
                    .iter()
                    .map(|&(start, _)| self.walk_branch(center, start))
                    .collect();
                let mut all = vec![center];
                all.extend(branches.iter().flatten());
                let why = match first_bad {
                    Some(why) => Some(why),
                    None if !self.is_nd(&all) => Some("not negative definite"),
                    None if !self.is_log_terminal_star(&branches) => Some("not log terminal"),
                    None => None,
                };
                match why {
                    None => {
                        segs.push(Segment { kind: SegmentKind::Fork, vertices: all, attached_to: None, branches });
                        continue;
                    }
                    Some(why) => excluded.push(Exclusion::new(ids(&all), "fork", why)),
                }
            }

            // Twigs hanging off the rest of the component.
            for &tip in comp.iter().filter(|&&i| self.beta(i) == 1) {
                if let Some(why) = self.ineligible(tip) {
                    excluded.push(Exclusion::new(ids(&[tip]), "twig", why));
                    continue;
                }
                let mut path = vec![tip];
                let (mut prev, mut cur) = (tip, self.adj[tip][0].0);
                loop {
                    if self.beta(cur) == 2 && self.ineligible(cur).is_none() {
                        path.push(cur);
                        let next = self.adj[cur].iter().map(|&(w, _)| w).find(|&w| w != prev).unwrap();
                        prev = cur;
                        cur = next;
                    } else {
                        break;
                    }
                }
                if self.is_nd(&path) {
                    segs.push(Segment { kind: SegmentKind::Twig, vertices: path, attached_to: Some(cur), branches: vec![] });
                } else {
                    excluded.push(Exclusion::new(ids(&path), "twig", "not negative definite"));
                }
            }
        }
        (segs, excluded)
    }

    fn is_nd(&self, idx: &[usize]) -> bool {
        is_negative_definite(&self.gram_on(idx)).unwrap_or(false)
    }

    /// Vertices of a chain component, starting from its lowest-index end.
    fn walk_chain(&self, comp: &[usize]) -> Vec<usize> {
        let start = *comp.iter().find(|&&i| self.beta(i) <= 1).unwrap_or(&comp[0]);
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&(next, _)) = self.adj[cur].iter().find(|&&(w, _)| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        order
    }

    /// Branch of a star starting at `start`, away from `center`; ordered from
    /// the center's neighbour out to the tip.
    fn walk_branch(&self, center: usize, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let (mut prev, mut cur) = (center, start);
        while let Some(&(next, _)) = self.adj[cur].iter().find(|&&(w, _)| w != prev) {
            out.push(next);
            prev = cur;
            cur = next;
        }
        out
    }

    /// A star with three chain branches of determinants `d_i` is log terminal
    /// iff `sum 1/d_i > 1`.
    fn is_log_terminal_star(&self, branches: &[Vec<usize>]) -> bool {
        let s: Q = branches
            .iter()
            .map(|b| {
                let d = self.gram_on(b).determinant().abs();
                if d.is_zero() {
                    Q::zero()
                } else {
                    Q::one() / d
                }
            })
            .sum();
        s > Q::one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SegmentKind {
    Rod,
    Twig,
    Fork,
}

#[derive(Clone, Debug)]
pub(crate) struct Segment {
    pub kind: SegmentKind,
    /// Chains: tip first. Forks: center first, then the branches.
    pub vertices: Vec<usize>,
    pub attached_to: Option<usize>,
    pub branches: Vec<Vec<usize>>,
}

impl Segment {
    fn rod(vertices: Vec<usize>) -> Self {
        Segment { kind: SegmentKind::Rod, vertices, attached_to: None, branches: vec![] }
    }

    /// Chain ends with branching number at most one. A single isolated
    /// component is both ends of its chain.
    pub fn tip_ends(&self) -> usize {
        match self.kind {
            SegmentKind::Rod => 2,
            SegmentKind::Twig => 1,
            SegmentKind::Fork => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twig {
    /// Tip first.
    pub vertices: Vec<String>,
    pub attached_to: String,
    pub attachment_branching: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fork {
    pub center: String,
    /// Each branch runs from the center's neighbour out to a tip.
    pub branches: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub vertices: Vec<String>,
    pub shape: String,
    pub reason: String,
}

impl Exclusion {
    fn new(vertices: Vec<String>, shape: &str, reason: &str) -> Self {
        Exclusion { vertices, shape: shape.into(), reason: reason.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub tips: Vec<String>,
    pub rods: Vec<Vec<String>>,
    pub twigs: Vec<Twig>,
    pub forks: Vec<Fork>,
    /// Shapes that look like a rod, twig or fork but are not admissible
    /// rational; every listed segment above is admissible.
    pub excluded: Vec<Exclusion>,
}

pub fn branching_number(g: &DualGraph, v: &str) -> Result<usize> {
    g.branching_number(v)
}

pub fn graph_arithmetic_genus(g: &DualGraph) -> i64 {
    g.arithmetic_genus()
}

pub fn classify_segments(g: &DualGraph) -> SegmentReport {
    g.classify_segments()
}

/// Helpers for building graphs in code and tests.
pub mod build {
    use super::*;

    pub fn v(id: &str, genus: u32, self_int: i64) -> Vertex {
        Vertex { id: id.into(), genus, self_int }
    }

    pub fn e(u: &str, v: &str, mult: u32) -> Edge {
        Edge { u: u.into(), v: v.into(), mult }
    }

    /// Chain `prefix0 - prefix1 - ...` of rational curves with the given
    /// self-intersections.
    pub fn chain(prefix: &str, selfs: &[i64]) -> (Vec<Vertex>, Vec<Edge>) {
        let vs: Vec<Vertex> = selfs.iter().enumerate().map(|(i, &s)| v(&format!("{prefix}{i}"), 0, s)).collect();
        let es = (1..selfs.len())
            .map(|i| e(&format!("{prefix}{}", i - 1), &format!("{prefix}{i}"), 1))
            .collect();
        (vs, es)
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;
    use proptest::prelude::*;

    fn example_two() -> DualGraph {
        DualGraph::new(
            vec![v("C1", 0, -3), v("C2", 0, -1), v("C3", 0, 0)],
            vec![e("C1", "C3", 1), e("C2", "C3", 3)],
        )
        .unwrap()
    }

    fn d4() -> DualGraph {
        DualGraph::new(
            vec![v("c", 0, -2), v("a", 0, -2), v("b", 0, -2), v("d", 0, -2)],
            vec![e("c", "a", 1), e("c", "b", 1), e("c", "d", 1)],
        )
        .unwrap()
    }

    #[test]
    fn branching_numbers() {
        let g = DualGraph::new(vec![v("x", 0, -2)], vec![]).unwrap();
        assert_eq!(g.branching_number("x").unwrap(), 0);
        let (vs, es) = chain("c", &[-2, -2, -2]);
        let g = DualGraph::new(vs, es).unwrap();
        assert_eq!(g.branching_number("c1").unwrap(), 2);
        let g = example_two();
        assert_eq!(g.branching_number("C3").unwrap(), 2);
        assert_eq!(g.branching_number("zz"), Err(Error::UnknownVertex("zz".into())));
    }

    #[test]
    fn genus_from_graph() {
        let g = DualGraph::new(vec![v("x", 0, -2)], vec![]).unwrap();
        assert_eq!(g.arithmetic_genus(), 0);
        let g = DualGraph::new(
            vec![v("a", 0, 1), v("b", 0, 1), v("c", 0, 1)],
            vec![e("a", "b", 1), e("b", "c", 1), e("a", "c", 1)],
        )
        .unwrap();
        assert_eq!(g.arithmetic_genus(), 1);
        assert_eq!(example_two().arithmetic_genus(), 2);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(DualGraph::new(vec![v("a", 0, -2)], vec![e("a", "a", 1)]).is_err());
        assert!(DualGraph::new(vec![v("a", 0, -2), v("a", 0, -2)], vec![]).is_err());
        assert!(DualGraph::new(vec![v("a", 0, -2), v("b", 0, -2)], vec![e("a", "b", 1), e("b", "a", 1)]).is_err());
        assert!(DualGraph::new(vec![v("a", 0, -2)], vec![e("a", "q", 1)]).is_err());
        assert_eq!(example_two().snc_violations().len(), 1);
    }

    #[test]
    fn isolated_minus_two_is_a_rod() {
        let g = DualGraph::new(vec![v("x", 0, -2)], vec![]).unwrap();
        let r = g.classify_segments();
        assert_eq!(r.rods, vec![vec!["x".to_string()]]);
        assert!(r.twigs.is_empty() && r.forks.is_empty());
    }

    #[test]
    fn twig_on_branch_vertex() {
        // Genus-one center with three branches; one branch is a (-2)-(-2) chain.
        let mut vs = vec![v("z", 1, -1)];
        let (cv, mut es) = chain("t", &[-2, -2]);
        vs.extend(cv);
        vs.extend([v("p", 0, -3), v("s", 0, -4)]);
        es.extend([e("t1", "z", 1), e("p", "z", 1), e("s", "z", 1)]);
        let r = DualGraph::new(vs, es).unwrap().classify_segments();
        assert_eq!(r.twigs.len(), 3);
        let long = r.twigs.iter().find(|t| t.vertices.len() == 2).unwrap();
        assert_eq!(long.vertices, vec!["t0".to_string(), "t1".to_string()]);
        assert_eq!(long.attached_to, "z");
        assert!(long.attachment_branching >= 3);
        assert!(r.rods.is_empty() && r.forks.is_empty());
    }

    #[test]
    fn d4_is_a_fork() {
        let r = d4().classify_segments();
        assert_eq!(r.forks.len(), 1);
        assert_eq!(r.forks[0].center, "c");
        assert!(r.twigs.is_empty() && r.rods.is_empty());
        assert_eq!(r.tips.len(), 3);
    }

    #[test]
    fn non_log_terminal_star_is_not_a_fork() {
        // Branch determinants 2, 3, 7 give 1/2 + 1/3 + 1/7 < 1.
        let g = DualGraph::new(
            vec![v("c", 0, -3), v("a", 0, -2), v("b", 0, -3), v("d", 0, -7)],
            vec![e("c", "a", 1), e("c", "b", 1), e("c", "d", 1)],
        )
        .unwrap();
        let r = g.classify_segments();
        assert!(r.forks.is_empty());
        assert_eq!(r.excluded[0].reason, "not log terminal");
        // The branches remain twigs on the center.
        assert_eq!(r.twigs.len(), 3);
    }

    #[test]
    fn heavy_edges_block_chains() {
        // C1 is a (-3) tip hanging off C3; C3 cannot extend it (square 0 and
        // a triple edge), and C2 is a (-1)-curve.
        let r = example_two().classify_segments();
        assert!(r.rods.is_empty() && r.forks.is_empty());
        assert_eq!(r.twigs.len(), 1);
        assert_eq!(r.twigs[0].vertices, vec!["C1".to_string()]);
        assert_eq!(r.twigs[0].attached_to, "C3");
        assert!(r.excluded.iter().any(|x| x.vertices == vec!["C2".to_string()]));
        let g = DualGraph::new(
            vec![v("a", 0, -2), v("b", 0, -2), v("c", 0, -2)],
            vec![e("a", "b", 1), e("b", "c", 2)],
        )
        .unwrap();
        let r = g.classify_segments();
        assert_eq!(r.twigs.len(), 1);
        assert_eq!(r.twigs[0].vertices, vec!["a".to_string()]);
        assert_eq!(r.twigs[0].attached_to, "b");
    }

    #[test]
    fn minus_one_in_chain_splits_into_twigs() {
        let (vs, es) = chain("c", &[-2, -1, -3]);
        let r = DualGraph::new(vs, es).unwrap().classify_segments();
        assert!(r.rods.is_empty());
        assert_eq!(r.excluded[0].reason, "contains a (-1)-curve");
        assert_eq!(r.twigs.len(), 2);
        assert!(r.twigs.iter().all(|t| t.attached_to == "c1"));
    }

    #[test]
    fn graph_from_classes_matches_example_two() {
        let m = SurfaceModel::plane(8);
        let comps = vec![
            ("C1".to_string(), m.plane_class(2, &[1, 1, 1, 1, 1, 1, 1, 0]).unwrap()),
            ("C2".to_string(), m.plane_class(2, &[1, 1, 1, 1, 0, 0, 0, 1]).unwrap()),
            ("C3".to_string(), m.plane_class(2, &[0, 0, 0, 0, 1, 1, 1, 1]).unwrap()),
        ];
        let g = DualGraph::from_classes(&m, &comps).unwrap();
        assert_eq!(g.vertices(), example_two().vertices());
        assert_eq!(g.total_edge_weight(), 4);
        g.check_against(&m).unwrap();
        let total = g.total_class(&m).unwrap();
        assert_eq!(total, m.plane_class(6, &[2; 8]).unwrap());
        assert_eq!(m.arithmetic_genus(&total).unwrap(), q(g.arithmetic_genus()));
    }

    #[test]
    fn check_against_catches_mismatch() {
        let m = SurfaceModel::plane(1);
        let g = DualGraph::new(vec![v("L", 0, 0)], vec![])
            .unwrap()
            .with_classes(BTreeMap::from([("L".to_string(), DivisorClass::from_i64(&[1, -1]))]))
            .unwrap();
        g.check_against(&m).unwrap();
        let g = DualGraph::new(vec![v("L", 0, 1)], vec![])
            .unwrap()
            .with_classes(BTreeMap::from([("L".to_string(), DivisorClass::from_i64(&[1, -1]))]))
            .unwrap();
        assert!(g.check_against(&m).is_err());
    }

    #[test]
    fn graph_json() {
        let js = r#"{"vertices":[{"id":"C1","genus":0,"self":-3},{"id":"C3","genus":0,"self":0}],
                     "edges":[{"u":"C1","v":"C3","mult":1}]}"#;
        let g: DualGraph = serde_json::from_str(js).unwrap();
        assert_eq!(g.len(), 2);
        let back: DualGraph = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    proptest! {
        #[test]
        fn minus_two_chains_are_negative_definite(r in 1usize..=12) {
            let (vs, es) = chain("c", &vec![-2; r]);
            let g = DualGraph::new(vs, es).unwrap();
            prop_assert!(is_negative_definite(&g.gram()).unwrap());
            // det of -A_r is r+1.
            let d = g.gram().determinant();
            prop_assert_eq!(d.abs(), q(r as i64 + 1));
        }
    }
}
