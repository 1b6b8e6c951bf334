//! Explicit directed graphs and graph covers.
//!
//! Graphs here are finite, immutable and use dense vertex ids. A
//! [`CoverMap`] is a vertex map between two graphs; the validators check the
//! three axioms a cover must satisfy (edge surjectivity of both graphs, the
//! homomorphism property and bidirectionality) and report every violation
//! they find rather than stopping at the first.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({from}, {to}) references a vertex outside 0..{vertex_count}")]
    VertexOutOfRange {
        from: VertexId,
        to: VertexId,
        vertex_count: usize,
    },
    #[error("graph has {0} vertices, more than vertex ids can address")]
    TooManyVertices(usize),
    #[error("vertex map has {got} entries but the source graph has {expected} vertices")]
    MapLengthMismatch { expected: usize, got: usize },
    #[error("vertex map sends {vertex} to {image}, but the target has {target_count} vertices")]
    ImageOutOfRange {
        vertex: VertexId,
        image: VertexId,
        target_count: usize,
    },
    #[error("path step {index} ({from} -> {to}) is not an edge of the graph")]
    NotAPath {
        index: usize,
        from: VertexId,
        to: VertexId,
    },
    #[error("path vertex {0} does not exist")]
    PathVertexOutOfRange(VertexId),
    #[error("covers do not compose: inner target differs from outer source")]
    GraphMismatch,
}

/// A finite directed graph `(V, E)` with `V = 0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaterializedGraph {
    vertex_count: usize,
    // Sorted by (source, target), deduplicated.
    edges: Vec<(VertexId, VertexId)>,
    out_start: Vec<usize>,
    in_start: Vec<usize>,
    in_sources: Vec<VertexId>,
}

impl MaterializedGraph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        if vertex_count > VertexId::MAX as usize {
            return Err(GraphError::TooManyVertices(vertex_count));
        }
        let mut edges: Vec<_> = edges.into_iter().collect();
        for &(from, to) in &edges {
            if from as usize >= vertex_count || to as usize >= vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    from,
                    to,
                    vertex_count,
                });
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let mut out_start = vec![0usize; vertex_count + 1];
        let mut in_count = vec![0usize; vertex_count + 1];
        for &(from, to) in &edges {
            out_start[from as usize + 1] += 1;
            in_count[to as usize + 1] += 1;
        }
        for v in 0..vertex_count {
            out_start[v + 1] += out_start[v];
            in_count[v + 1] += in_count[v];
        }
        let in_start = in_count.clone();
        let mut fill = in_count;
        let mut in_sources = vec![0; edges.len()];
        for &(from, to) in &edges {
            in_sources[fill[to as usize]] = from;
            fill[to as usize] += 1;
        }
        Ok(Self {
            vertex_count,
            edges,
            out_start,
            in_start,
            in_sources,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let v = v as usize;
        self.edges[self.out_start[v]..self.out_start[v + 1]]
            .iter()
            .map(|&(_, to)| to)
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.in_sources[self.in_start[v]..self.in_start[v + 1]]
    }

    pub fn has_edge(&self, from: VertexId, to: VertexId) -> bool {
        if from as usize >= self.vertex_count {
            return false;
        }
        let out = &self.edges[self.out_start[from as usize]..self.out_start[from as usize + 1]];
        out.binary_search(&(from, to)).is_ok()
    }

    /// Returns true if some cycle of the graph avoids `vertex` entirely.
    pub fn has_cycle_avoiding(&self, vertex: VertexId) -> bool {
        // Kahn's algorithm on the subgraph without `vertex`.
        let n = self.vertex_count;
        let mut indegree = vec![0usize; n];
        for &(from, to) in &self.edges {
            if from != vertex && to != vertex {
                indegree[to as usize] += 1;
            }
        }
        let mut stack: Vec<VertexId> = (0..n as VertexId)
            .filter(|&v| v != vertex && indegree[v as usize] == 0)
            .collect();
        let mut removed = 0usize;
        while let Some(v) = stack.pop() {
            removed += 1;
            for to in self.successors(v) {
                if to == vertex {
                    continue;
                }
                indegree[to as usize] -= 1;
                if indegree[to as usize] == 0 {
                    stack.push(to);
                }
            }
        }
        let considered = if (vertex as usize) < n { n - 1 } else { n };
        removed < considered
    }

    /// Graphviz rendering, one line per edge. Vertex `i` is named `v{i}`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::with_capacity(16 * self.edges.len() + 32);
        let _ = writeln!(out, "digraph {name} {{");
        for &(from, to) in &self.edges {
            let _ = writeln!(out, "  v{from} -> v{to};");
        }
        out.push_str("}\n");
        out
    }
}

/// A path given by its vertex sequence. A single vertex is the empty path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexPath {
    vertices: Vec<VertexId>,
}

impl VertexPath {
    pub fn new(graph: &MaterializedGraph, vertices: Vec<VertexId>) -> Result<Self, GraphError> {
        check_path(graph, &vertices)?;
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of edges on the path.
    pub fn edge_len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

fn check_path(graph: &MaterializedGraph, vertices: &[VertexId]) -> Result<(), GraphError> {
    for &v in vertices {
        if v as usize >= graph.vertex_count() {
            return Err(GraphError::PathVertexOutOfRange(v));
        }
    }
    for (index, pair) in vertices.windows(2).enumerate() {
        if !graph.has_edge(pair[0], pair[1]) {
            return Err(GraphError::NotAPath {
                index,
                from: pair[0],
                to: pair[1],
            });
        }
    }
    Ok(())
}

/// A vertex map `source -> target`, candidate for being a bd-cover.
#[derive(Debug, Clone)]
pub struct CoverMap {
    source: Arc<MaterializedGraph>,
    target: Arc<MaterializedGraph>,
    vertex_map: Vec<VertexId>,
}

impl CoverMap {
    pub fn new(
        source: Arc<MaterializedGraph>,
        target: Arc<MaterializedGraph>,
        vertex_map: Vec<VertexId>,
    ) -> Result<Self, GraphError> {
        if vertex_map.len() != source.vertex_count() {
            return Err(GraphError::MapLengthMismatch {
                expected: source.vertex_count(),
                got: vertex_map.len(),
            });
        }
        if let Some((vertex, &image)) = vertex_map
            .iter()
            .enumerate()
            .find(|(_, &w)| w as usize >= target.vertex_count())
        {
            return Err(GraphError::ImageOutOfRange {
                vertex: vertex as VertexId,
                image,
                target_count: target.vertex_count(),
            });
        }
        Ok(Self {
            source,
            target,
            vertex_map,
        })
    }

    pub fn identity(graph: Arc<MaterializedGraph>) -> Self {
        let vertex_map = (0..graph.vertex_count() as VertexId).collect();
        Self {
            source: graph.clone(),
            target: graph,
            vertex_map,
        }
    }

    pub fn source(&self) -> &Arc<MaterializedGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MaterializedGraph> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    pub fn image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v as usize]
    }
}

impl PartialEq for CoverMap {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_map == other.vertex_map
            && same_graph(&self.source, &other.source)
            && same_graph(&self.target, &other.target)
    }
}

fn same_graph(a: &Arc<MaterializedGraph>, b: &Arc<MaterializedGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "vertex", rename_all = "snake_case")]
pub enum SurjectivityViolation {
    NoIncoming(VertexId),
    NoOutgoing(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomomorphismViolation {
    pub edge: (VertexId, VertexId),
    pub image: (VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BidirectionalViolation {
    /// Out-neighbours of `vertex` have more than one image.
    Successors { vertex: VertexId, images: Vec<VertexId> },
    /// In-neighbours of `vertex` have more than one image.
    Predecessors { vertex: VertexId, images: Vec<VertexId> },
}

pub fn validate_edge_surjective(g: &MaterializedGraph) -> Vec<SurjectivityViolation> {
    let mut violations = Vec::new();
    for v in 0..g.vertex_count() as VertexId {
        if g.predecessors(v).is_empty() {
            violations.push(SurjectivityViolation::NoIncoming(v));
        }
        if g.successors(v).next().is_none() {
            violations.push(SurjectivityViolation::NoOutgoing(v));
        }
    }
    violations
}

pub fn validate_homomorphism(c: &CoverMap) -> Vec<HomomorphismViolation> {
    c.source
        .edges()
        .iter()
        .filter_map(|&(u, v)| {
            let image = (c.image(u), c.image(v));
            (!c.target.has_edge(image.0, image.1)).then_some(HomomorphismViolation {
                edge: (u, v),
                image,
            })
        })
        .collect()
}

pub fn validate_bidirectional(c: &CoverMap) -> Vec<BidirectionalViolation> {
    let mut violations = Vec::new();
    for u in 0..c.source.vertex_count() as VertexId {
        let images: BTreeSet<_> = c.source.successors(u).map(|v| c.image(v)).collect();
        if images.len() > 1 {
            violations.push(BidirectionalViolation::Successors {
                vertex: u,
                images: images.into_iter().collect(),
            });
        }
        let images: BTreeSet<_> = c
            .source
            .predecessors(u)
            .iter()
            .map(|&w| c.image(w))
            .collect();
        if images.len() > 1 {
            violations.push(BidirectionalViolation::Predecessors {
                vertex: u,
                images: images.into_iter().collect(),
            });
        }
    }
    violations
}

pub fn apply_cover_to_path(c: &CoverMap, p: &VertexPath) -> Result<VertexPath, GraphError> {
    check_path(&c.source, &p.vertices)?;
    Ok(VertexPath {
        vertices: p.vertices.iter().map(|&v| c.image(v)).collect(),
    })
}

/// `outer ∘ inner`: first apply `inner`, then `outer`.
pub fn compose_covers(outer: &CoverMap, inner: &CoverMap) -> Result<CoverMap, GraphError> {
    if !same_graph(&inner.target, &outer.source) {
        return Err(GraphError::GraphMismatch);
    }
    Ok(CoverMap {
        source: inner.source.clone(),
        target: outer.target.clone(),
        vertex_map: inner.vertex_map.iter().map(|&v| outer.image(v)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> MaterializedGraph {
        MaterializedGraph::new(n as usize, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    #[test]
    fn single_loop_is_edge_surjective() {
        let g = MaterializedGraph::new(1, [(0, 0)]).unwrap();
        assert!(validate_edge_surjective(&g).is_empty());
    }

    #[test]
    fn lone_edge_lacks_in_and_out() {
        let g = MaterializedGraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(
            validate_edge_surjective(&g),
            vec![
                SurjectivityViolation::NoIncoming(0),
                SurjectivityViolation::NoOutgoing(1)
            ]
        );
    }

    #[test]
    fn out_of_range_edge_is_rejected() {
        let err = MaterializedGraph::new(2, [(0, 2)]).unwrap_err();
        assert!(matches!(err, GraphError::VertexOutOfRange { to: 2, .. }));
    }

    #[test]
    fn identity_is_a_cover() {
        let g = Arc::new(cycle(5));
        let id = CoverMap::identity(g);
        assert!(validate_homomorphism(&id).is_empty());
        assert!(validate_bidirectional(&id).is_empty());
    }

    #[test]
    fn non_adjacent_image_breaks_homomorphism() {
        let src = Arc::new(cycle(4));
        let dst = Arc::new(cycle(4));
        let c = CoverMap::new(src, dst, vec![0, 2, 2, 3]).unwrap();
        let v = validate_homomorphism(&c);
        assert!(v.contains(&HomomorphismViolation {
            edge: (0, 1),
            image: (0, 2)
        }));
    }

    #[test]
    fn split_successors_break_bidirectionality() {
        // Base 0 with loop and a 2-cycle 0 -> 1 -> 0, mapped onto the same shape
        // but with the loop successor and the cycle successor sent apart.
        let g = Arc::new(MaterializedGraph::new(2, [(0, 0), (0, 1), (1, 0)]).unwrap());
        let c = CoverMap::new(g.clone(), g, vec![0, 1]).unwrap();
        let v = validate_bidirectional(&c);
        assert!(v.contains(&BidirectionalViolation::Successors {
            vertex: 0,
            images: vec![0, 1]
        }));
    }

    #[test]
    fn map_length_is_checked() {
        let g = Arc::new(cycle(3));
        let err = CoverMap::new(g.clone(), g, vec![0, 1]).unwrap_err();
        assert_eq!(
            err,
            GraphError::MapLengthMismatch {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn empty_path_maps_to_single_vertex() {
        let src = Arc::new(cycle(6));
        let dst = Arc::new(cycle(3));
        let c = CoverMap::new(src.clone(), dst, vec![0, 1, 2, 0, 1, 2]).unwrap();
        let p = VertexPath::new(&src, vec![4]).unwrap();
        let image = apply_cover_to_path(&c, &p).unwrap();
        assert_eq!(image.vertices(), &[1]);
        assert_eq!(image.edge_len(), 0);
    }

    #[test]
    fn path_outside_source_is_rejected() {
        let src = Arc::new(cycle(6));
        let c = CoverMap::identity(src.clone());
        let bogus = VertexPath {
            vertices: vec![0, 2],
        };
        assert!(matches!(
            apply_cover_to_path(&c, &bogus),
            Err(GraphError::NotAPath { index: 0, .. })
        ));
    }

    #[test]
    fn composing_with_identity_is_neutral() {
        let src = Arc::new(cycle(6));
        let dst = Arc::new(cycle(3));
        let c = CoverMap::new(src.clone(), dst.clone(), vec![0, 1, 2, 0, 1, 2]).unwrap();
        let left = compose_covers(&CoverMap::identity(dst), &c).unwrap();
        let right = compose_covers(&c, &CoverMap::identity(src)).unwrap();
        assert_eq!(left, c);
        assert_eq!(right, c);
    }

    #[test]
    fn composition_checks_graphs() {
        let a = Arc::new(cycle(6));
        let b = Arc::new(cycle(3));
        let c = CoverMap::identity(a);
        let d = CoverMap::identity(b);
        assert_eq!(compose_covers(&d, &c), Err(GraphError::GraphMismatch));
    }

    #[test]
    fn cycle_avoiding_detection() {
        let bouquet = MaterializedGraph::new(4, [(0, 0), (0, 1), (1, 2), (2, 0), (0, 3), (3, 0)])
            .unwrap();
        assert!(!bouquet.has_cycle_avoiding(0));
        let with_side_loop =
            MaterializedGraph::new(3, [(0, 0), (0, 1), (1, 2), (2, 1), (2, 0)]).unwrap();
        assert!(with_side_loop.has_cycle_avoiding(0));
    }

    #[test]
    fn dot_has_a_line_per_edge() {
        let g = MaterializedGraph::new(2, [(0, 0), (0, 1), (1, 0)]).unwrap();
        let dot = g.to_dot("G");
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 3);
        assert!(dot.contains("v0 -> v0;"));
    }
}
