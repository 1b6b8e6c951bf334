use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::level::builtin_level;
use super::{BouquetError, LevelSpec, Locus, VertexAddr};
use crate::decimal;

/// Numbers roughly double in bit size per level; callers should warn when
/// asked to go deeper than this.
pub const SPINE_WARN_LEVEL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Builtin,
    /// Finite tower whose highest level is `top`.
    Custom { top: usize },
}

/// A tower of bouquet levels with lazily built, cached level specs.
///
/// The built-in tower is unbounded; towers loaded from a document stop at
/// their last declared level. The cache only grows, and two threads racing to
/// extend it compute identical values.
#[derive(Debug)]
pub struct Construction {
    source: Source,
    cache: RwLock<Vec<Arc<LevelSpec>>>,
}

/// Preimages of an address one level up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lifts {
    pub choices: Vec<VertexAddr>,
    /// Number of preimages in total, of which `choices` is a prefix.
    #[serde(with = "decimal")]
    pub total: BigUint,
}

impl Default for Construction {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Construction {
    pub fn builtin() -> Self {
        Self {
            source: Source::Builtin,
            cache: RwLock::new(vec![Arc::new(builtin_level(0, Vec::new()))]),
        }
    }

    /// A finite tower. `specs[n]` must describe level `n`, and its image
    /// formulas must have the lengths declared by `specs[n + 1]`. The last
    /// spec is the top level and must have no image formulas.
    pub fn from_level_specs(specs: Vec<LevelSpec>) -> Result<Self, BouquetError> {
        let top = specs.len().checked_sub(1).ok_or(BouquetError::InconsistentLevels {
            level: 0,
            reason: "no levels".into(),
        })?;
        if !specs[0].cycle_lengths.is_empty() {
            return Err(BouquetError::InconsistentLevels {
                level: 0,
                reason: "level 0 must consist of the base vertex only".into(),
            });
        }
        for (n, spec) in specs.iter().enumerate() {
            if spec.level != n {
                return Err(BouquetError::InconsistentLevels {
                    level: n,
                    reason: format!("spec declares level {}", spec.level),
                });
            }
            if n < top && spec.image_lengths() != specs[n + 1].cycle_lengths {
                return Err(BouquetError::InconsistentLevels {
                    level: n + 1,
                    reason: "cycle lengths differ from the image formula lengths".into(),
                });
            }
            if n == top && !spec.image_formulas.is_empty() {
                return Err(BouquetError::InconsistentLevels {
                    level: n,
                    reason: "top level has image formulas".into(),
                });
            }
            if let Some(zero) = spec.cycle_lengths.iter().position(|l| *l < BigUint::from(2u32)) {
                return Err(BouquetError::InconsistentLevels {
                    level: n,
                    reason: format!("cycle c{} is shorter than 2 edges", zero + 1),
                });
            }
        }
        Ok(Self {
            source: Source::Custom { top },
            cache: RwLock::new(specs.into_iter().map(Arc::new).collect()),
        })
    }

    pub fn is_builtin(&self) -> bool {
        self.source == Source::Builtin
    }

    /// Highest level with known vertices, `None` for the unbounded tower.
    pub fn max_level(&self) -> Option<usize> {
        match self.source {
            Source::Builtin => None,
            Source::Custom { top } => Some(top),
        }
    }

    pub fn spec(&self, n: usize) -> Result<Arc<LevelSpec>, BouquetError> {
        {
            let cache = self.cache.read().expect("level cache poisoned");
            if let Some(spec) = cache.get(n) {
                return Ok(spec.clone());
            }
        }
        match self.source {
            Source::Custom { top } => Err(BouquetError::LevelUnavailable { level: n, max: top }),
            Source::Builtin => {
                let mut cache = self.cache.write().expect("level cache poisoned");
                while cache.len() <= n {
                    let next = cache.last().expect("level 0 cached").builtin_successor();
                    cache.push(Arc::new(next));
                }
                Ok(cache[n].clone())
            }
        }
    }

    /// Spec of level `n - 1`, which carries the formulas for level `n`.
    fn formulas_for(&self, n: usize) -> Result<Arc<LevelSpec>, BouquetError> {
        if n == 0 {
            return Err(BouquetError::BottomLevel);
        }
        if let Some(top) = self.max_level() {
            if n > top {
                return Err(BouquetError::LevelUnavailable { level: n, max: top });
            }
        }
        self.spec(n - 1)
    }

    pub fn cycle_count(&self, n: usize) -> Result<usize, BouquetError> {
        Ok(self.spec(n)?.cycle_count())
    }

    pub fn cycle_lengths(&self, n: usize) -> Result<Vec<BigUint>, BouquetError> {
        Ok(self.spec(n)?.cycle_lengths.clone())
    }

    /// `|c_{n,i}|`.
    pub fn cycle_length(&self, n: usize, i: usize) -> Result<BigUint, BouquetError> {
        let spec = self.spec(n)?;
        if i == 0 || i > spec.cycle_count() {
            return Err(BouquetError::CycleIndexOutOfRange {
                level: n,
                cycle: i,
                count: spec.cycle_count(),
            });
        }
        Ok(spec.cycle_lengths[i - 1].clone())
    }

    pub fn k_value(&self, n: usize) -> Result<BigUint, BouquetError> {
        Ok(self.spec(n)?.k_value.clone())
    }

    pub fn check_addr(&self, a: &VertexAddr) -> Result<(), BouquetError> {
        self.spec(a.level)?;
        if let Locus::OnCycle { cycle, position } = &a.locus {
            let length = self.cycle_length(a.level, *cycle)?;
            if position.is_zero() || position >= &length {
                return Err(BouquetError::PositionOutOfRange {
                    level: a.level,
                    cycle: *cycle,
                    position: position.clone(),
                    length,
                });
            }
        }
        Ok(())
    }

    /// Image of a level `n + 1` address under the cover to level `n`.
    pub fn project_addr(&self, a: &VertexAddr) -> Result<VertexAddr, BouquetError> {
        self.check_addr(a)?;
        let below = self.formulas_for(a.level)?;
        let locus = match &a.locus {
            Locus::Base => Locus::Base,
            Locus::OnCycle { cycle, position } => {
                below.image_formulas[cycle - 1].locate(position)?.locus
            }
        };
        Ok(VertexAddr {
            level: a.level - 1,
            locus,
        })
    }

    /// Coordinates of `a` at every level `0..=a.level`, bottom first.
    pub fn column(&self, a: &VertexAddr) -> Result<Vec<VertexAddr>, BouquetError> {
        self.check_addr(a)?;
        let mut column = vec![a.clone()];
        let mut current = a.clone();
        while current.level > 0 {
            if current.locus.is_base() {
                current = VertexAddr::base(current.level - 1);
            } else {
                current = self.project_addr(&current)?;
            }
            column.push(current.clone());
        }
        column.reverse();
        Ok(column)
    }

    pub fn project_to(&self, a: &VertexAddr, level: usize) -> Result<VertexAddr, BouquetError> {
        self.check_addr(a)?;
        let mut current = a.clone();
        while current.level > level {
            current = self.project_addr(&current)?;
        }
        Ok(current)
    }

    /// Addresses one level up that project onto `a`, in increasing
    /// `(cycle, position)` order with the base first, truncated to
    /// `max_results`.
    pub fn lift_choices(&self, a: &VertexAddr, max_results: usize) -> Result<Lifts, BouquetError> {
        self.check_addr(a)?;
        let spec = self.formulas_for(a.level + 1)?;
        let mut choices = Vec::new();
        let mut total = BigUint::zero();
        if a.locus.is_base() {
            total += BigUint::one();
            if max_results > 0 {
                choices.push(VertexAddr::base(a.level + 1));
            }
        }
        for (index, formula) in spec.image_formulas.iter().enumerate() {
            total += formula.count_locus(&a.locus);
            let room = max_results - choices.len();
            if room > 0 {
                choices.extend(
                    formula
                        .offsets_of(&a.locus, room)
                        .into_iter()
                        .map(|p| VertexAddr::on_cycle(a.level + 1, index + 1, p)),
                );
            }
        }
        Ok(Lifts { choices, total })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_lengths_from_the_cache() {
        let c = Construction::builtin();
        assert_eq!(c.cycle_length(1, 1).unwrap(), BigUint::from(10u32));
        assert_eq!(c.cycle_length(3, 3).unwrap(), BigUint::from(12_560u32));
        assert!(matches!(
            c.cycle_length(3, 4),
            Err(BouquetError::CycleIndexOutOfRange { .. })
        ));
        assert!(matches!(
            c.cycle_length(3, 0),
            Err(BouquetError::CycleIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn level_four_first_cycle_matches_independent_sum() {
        // Sum the term lengths of the first formula at level 3 by hand.
        let (c31, c32, c33) = (3_421_640u128, 182u128, 12_560u128);
        let k3 = 2 * (1 + c31 + c32 + c33);
        let blocks: u128 = (1..=k3).map(|j| j + 2 * c31).sum();
        let expected = blocks + 1 + 2 * c32 + 2 * c33 + 1;
        let c = Construction::builtin();
        assert_eq!(c.cycle_length(4, 1).unwrap(), BigUint::from(expected));
        assert!(expected > 7 * 10u128.pow(13) && expected < 8 * 10u128.pow(13));
    }

    #[test]
    fn projection_examples() {
        let c = Construction::builtin();
        assert_eq!(
            c.project_addr(&VertexAddr::on_cycle(2, 2, 7u32)).unwrap(),
            VertexAddr::base(1)
        );
        assert_eq!(
            c.project_addr(&VertexAddr::on_cycle(2, 1, 2u32)).unwrap(),
            VertexAddr::on_cycle(1, 1, 1u32)
        );
        assert_eq!(c.project_addr(&VertexAddr::base(9)).unwrap(), VertexAddr::base(8));
        assert_eq!(
            c.project_addr(&VertexAddr::base(0)),
            Err(BouquetError::BottomLevel)
        );
    }

    #[test]
    fn position_range_is_checked() {
        let c = Construction::builtin();
        assert!(matches!(
            c.project_addr(&VertexAddr::on_cycle(1, 1, 10u32)),
            Err(BouquetError::PositionOutOfRange { .. })
        ));
        assert!(matches!(
            c.project_addr(&VertexAddr::on_cycle(1, 1, 0u32)),
            Err(BouquetError::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn lift_examples() {
        let c = Construction::builtin();
        let bottom = c.lift_choices(&VertexAddr::base(0), 100).unwrap();
        assert_eq!(bottom.total, BigUint::from(10u32));
        assert_eq!(bottom.choices.len(), 10);
        assert_eq!(bottom.choices[0], VertexAddr::base(1));

        let first = c.lift_choices(&VertexAddr::on_cycle(1, 1, 1u32), 1000).unwrap();
        assert_eq!(first.total, BigUint::from(44u32));
        assert!(first.choices.iter().all(|b| b.locus.cycle_index() == 1));

        let base1 = c.lift_choices(&VertexAddr::base(1), 2).unwrap();
        assert_eq!(
            base1.choices,
            vec![VertexAddr::base(2), VertexAddr::on_cycle(2, 1, 1u32)]
        );
    }

    #[test]
    fn custom_tower_stops_at_its_top() {
        let bottom = LevelSpec::new(0, vec![], vec![vec![super::super::Term::edges(3u32)]]).unwrap();
        let top = LevelSpec::new(1, vec![BigUint::from(3u32)], vec![]).unwrap();
        let c = Construction::from_level_specs(vec![bottom, top]).unwrap();
        assert_eq!(c.max_level(), Some(1));
        assert!(matches!(
            c.lift_choices(&VertexAddr::base(1), 4),
            Err(BouquetError::LevelUnavailable { level: 2, max: 1 })
        ));
        assert_eq!(
            c.project_addr(&VertexAddr::on_cycle(1, 1, 2u32)).unwrap(),
            VertexAddr::base(0)
        );
    }
}
