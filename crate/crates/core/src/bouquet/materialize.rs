//! Explicit graphs for small levels.
//!
//! Vertex ids follow the layout: `0` is the base, then the interior vertices
//! of `c_1` in position order, then those of `c_2`, and so on. The vertex
//! map of the cover is produced by walking the image formula edge by edge,
//! which makes it an independent check on [`Construction::project_addr`].

use std::ops::ControlFlow;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{Atom, BouquetError, Construction, Locus};
use crate::graph::{CoverMap, MaterializedGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLayout {
    level: usize,
    lengths: Vec<u64>,
    // First id used by each cycle.
    offsets: Vec<u64>,
    vertex_count: u64,
}

impl VertexLayout {
    fn new(level: usize, lengths: Vec<u64>) -> Self {
        let mut offsets = Vec::with_capacity(lengths.len());
        let mut next = 1u64;
        for &l in &lengths {
            offsets.push(next);
            next += l - 1;
        }
        Self {
            level,
            lengths,
            offsets,
            vertex_count: next,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    pub fn cycle_lengths(&self) -> &[u64] {
        &self.lengths
    }

    fn id_of(&self, cycle: usize, position: u64) -> VertexId {
        (self.offsets[cycle - 1] + position - 1) as VertexId
    }

    pub fn id(&self, locus: &Locus) -> Option<VertexId> {
        match locus {
            Locus::Base => Some(0),
            Locus::OnCycle { cycle, position } => {
                let len = *self.lengths.get(cycle.checked_sub(1)?)?;
                let p = position.to_u64()?;
                (p >= 1 && p < len).then(|| self.id_of(*cycle, p))
            }
        }
    }

    pub fn locus(&self, id: VertexId) -> Locus {
        let id = id as u64;
        if id == 0 {
            return Locus::Base;
        }
        let index = self.offsets.partition_point(|&o| o <= id) - 1;
        Locus::on_cycle(index + 1, id - self.offsets[index] + 1)
    }

    /// Vertex ids of `c_cycle`, starting and ending at the base.
    pub fn cycle_path(&self, cycle: usize) -> Vec<VertexId> {
        let len = self.lengths[cycle - 1];
        let mut path = vec![0];
        path.extend((1..len).map(|p| self.id_of(cycle, p)));
        path.push(0);
        path
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphStats {
    pub level: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub cycle_lengths: Vec<u64>,
}

/// Level `n` as an explicit graph, with the cover onto level `n - 1`.
#[derive(Debug, Clone)]
pub struct Materialized {
    pub graph: Arc<MaterializedGraph>,
    pub layout: VertexLayout,
    /// `None` at level 0.
    pub cover: Option<CoverMap>,
    pub lower_layout: Option<VertexLayout>,
}

impl Materialized {
    pub fn stats(&self) -> GraphStats {
        GraphStats {
            level: self.layout.level,
            vertex_count: self.graph.vertex_count(),
            edge_count: self.graph.edge_count(),
            cycle_lengths: self.layout.lengths.clone(),
        }
    }
}

impl Construction {
    /// `1 + sum_i (|c_{n,i}| - 1)`.
    pub fn vertex_count_estimate(&self, n: usize) -> Result<BigUint, BouquetError> {
        let lengths = self.cycle_lengths(n)?;
        Ok(lengths.iter().fold(BigUint::from(1u32), |acc, l| acc + l - 1u32))
    }

    fn layout(&self, n: usize, budget: u64) -> Result<VertexLayout, BouquetError> {
        let estimate = self.vertex_count_estimate(n)?;
        if estimate > BigUint::from(budget) || estimate > BigUint::from(VertexId::MAX) {
            return Err(BouquetError::BudgetExceeded {
                what: "materialization",
                required: estimate,
                budget,
            });
        }
        let lengths = self
            .cycle_lengths(n)?
            .iter()
            .map(|l| l.to_u64().expect("bounded by budget"))
            .collect();
        Ok(VertexLayout::new(n, lengths))
    }

    fn graph_for(layout: &VertexLayout) -> Result<MaterializedGraph, BouquetError> {
        let mut edges = Vec::with_capacity(layout.vertex_count as usize + layout.lengths.len());
        edges.push((0, 0));
        for cycle in 1..=layout.lengths.len() {
            let path = layout.cycle_path(cycle);
            edges.extend(path.windows(2).map(|w| (w[0], w[1])));
        }
        Ok(MaterializedGraph::new(layout.vertex_count as usize, edges)?)
    }

    pub fn materialize_graph(&self, n: usize, budget: u64) -> Result<Materialized, BouquetError> {
        let layout = self.layout(n, budget)?;
        let graph = Arc::new(Self::graph_for(&layout)?);
        if n == 0 {
            return Ok(Materialized {
                graph,
                layout,
                cover: None,
                lower_layout: None,
            });
        }
        let lower_layout = self.layout(n - 1, budget)?;
        let lower = Arc::new(Self::graph_for(&lower_layout)?);
        let spec = self.spec(n - 1)?;

        let mut map: Vec<VertexId> = vec![0; layout.vertex_count as usize];
        for (index, formula) in spec.image_formulas.iter().enumerate() {
            let cycle = index + 1;
            let len = layout.lengths[index];
            let mut p = 0u64;
            let mut assign = |p: u64, image: VertexId| {
                if p < len {
                    map[layout.id_of(cycle, p) as usize] = image;
                }
            };
            let _ = formula.for_each_segment(|_, atom, count| {
                let count = count.to_u64().expect("bounded by budget");
                match atom {
                    Atom::Edge => {
                        for _ in 0..count {
                            p += 1;
                            assign(p, 0);
                        }
                    }
                    Atom::Cycle(c) => {
                        let lower_path = lower_layout.cycle_path(*c);
                        for _ in 0..count {
                            for &v in &lower_path[1..] {
                                p += 1;
                                assign(p, v);
                            }
                        }
                    }
                }
                ControlFlow::Continue(())
            });
            if p != len {
                return Err(BouquetError::InconsistentLevels {
                    level: n,
                    reason: format!("image of c{cycle} has {p} edges, cycle has {len}"),
                });
            }
        }
        let cover = CoverMap::new(graph.clone(), lower, map)?;
        Ok(Materialized {
            graph,
            layout,
            cover: Some(cover),
            lower_layout: Some(lower_layout),
        })
    }
}
