use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{Atom, BouquetError, PathExpr, Ramp, RampTerm, Term};
use crate::decimal;

/// Level `n` of a bouquet tower together with the cover from level `n + 1`.
///
/// `cycle_lengths[i - 1] = |c_{n,i}|`, and `image_formulas[i - 1]` is the
/// image of `c_{n+1,i}` written over the symbols of level `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSpec {
    pub level: usize,
    #[serde(with = "decimal::vec")]
    pub cycle_lengths: Vec<BigUint>,
    /// `2 (1 + sum_i |c_{n,i}|)`: block count of the ramp in the image of
    /// the first cycle one level up.
    #[serde(with = "decimal")]
    pub k_value: BigUint,
    pub image_formulas: Vec<PathExpr>,
}

impl LevelSpec {
    pub fn new(
        level: usize,
        cycle_lengths: Vec<BigUint>,
        image_terms: Vec<Vec<Term>>,
    ) -> Result<Self, BouquetError> {
        let k_value = k_value(&cycle_lengths);
        let image_formulas = image_terms
            .into_iter()
            .map(|terms| PathExpr::new(terms, &cycle_lengths))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            level,
            cycle_lengths,
            k_value,
            image_formulas,
        })
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths.len()
    }

    /// Lengths of the cycles one level up.
    pub fn image_lengths(&self) -> Vec<BigUint> {
        self.image_formulas.iter().map(|f| f.len().clone()).collect()
    }

    /// Level `n + 1` of the built-in construction, given level `n`.
    pub(crate) fn builtin_successor(&self) -> LevelSpec {
        builtin_level(self.level + 1, self.image_lengths())
    }
}

pub(crate) fn k_value(cycle_lengths: &[BigUint]) -> BigUint {
    let total: BigUint = cycle_lengths.iter().sum();
    (total + 1u32) * 2u32
}

/// Built-in image formulas out of a level with the given cycle lengths.
pub(crate) fn builtin_terms(level: usize, lengths: &[BigUint], k: &BigUint) -> Vec<Vec<Term>> {
    let n = level;
    if n == 0 {
        return vec![vec![Term::edges(10u32)]];
    }
    let mut formulas = Vec::with_capacity(n + 1);

    // c_{n+1,1}: sum_{j=1..k_n} (j e + 2 c1) + e + 2 c2 + ... + 2 cn + e
    let mut first = vec![Term::Ramp(Ramp {
        from: BigUint::one(),
        to: k.clone(),
        body: vec![
            RampTerm::indexed(Atom::Edge),
            RampTerm::fixed(Atom::Cycle(1), 2u32),
        ],
    })];
    first.push(Term::edges(1u32));
    first.extend((2..=n).map(|i| Term::cycles(i, 2u32)));
    first.push(Term::edges(1u32));
    formulas.push(first);

    // c_{n+1,i}, 2 <= i <= n: e + 2 ci + ... + 2 cn + e
    for i in 2..=n {
        let mut f = vec![Term::edges(1u32)];
        f.extend((i..=n).map(|j| Term::cycles(j, 2u32)));
        f.push(Term::edges(1u32));
        formulas.push(f);
    }

    // c_{n+1,n+1}: (n+2)^2 (sum_i |c_{n,i}|) e
    let total: BigUint = lengths.iter().sum();
    let square = BigUint::from((n + 2) * (n + 2));
    formulas.push(vec![Term::edges(square * total)]);
    formulas
}

pub(crate) fn builtin_level(level: usize, cycle_lengths: Vec<BigUint>) -> LevelSpec {
    let k = k_value(&cycle_lengths);
    let terms = builtin_terms(level, &cycle_lengths, &k);
    LevelSpec::new(level, cycle_lengths, terms).expect("built-in formulas are well formed")
}

/// Level `n` of the built-in construction, computed from scratch.
///
/// [`super::Construction::builtin`] caches the same values.
pub fn build_level_spec(n: usize) -> LevelSpec {
    let mut spec = builtin_level(0, Vec::new());
    for _ in 0..n {
        spec = spec.builtin_successor();
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lengths(spec: &LevelSpec) -> Vec<u64> {
        spec.cycle_lengths
            .iter()
            .map(|l| u64::try_from(l.clone()).unwrap())
            .collect()
    }

    #[test]
    fn bottom_level_maps_first_cycle_to_ten_loops() {
        let s = build_level_spec(0);
        assert_eq!(s.image_formulas.len(), 1);
        assert_eq!(s.image_formulas[0].terms(), &[Term::edges(10u32)]);
        assert_eq!(s.k_value, BigUint::from(2u32));
    }

    #[test]
    fn small_level_table() {
        let s1 = build_level_spec(1);
        assert_eq!(lengths(&s1), vec![10]);
        assert_eq!(s1.k_value, BigUint::from(22u32));
        let s2 = build_level_spec(2);
        assert_eq!(lengths(&s2), vec![695, 90]);
        assert_eq!(s2.k_value, BigUint::from(1572u32));
        let s3 = build_level_spec(3);
        assert_eq!(lengths(&s3), vec![3_421_640, 182, 12_560]);
    }

    #[test]
    fn formulas_start_and_end_on_the_base_loop() {
        for n in 0..8 {
            let s = build_level_spec(n);
            assert!(s.image_formulas.iter().all(PathExpr::is_edge_bounded), "level {n}");
        }
    }

    #[test]
    fn first_formula_expands_to_the_literal_block_list() {
        let s = build_level_spec(2);
        let flat = s.image_formulas[0].expanded_terms(10_000).unwrap();
        let k = 1572u32;
        let mut expected = Vec::new();
        for j in 1..=k {
            expected.push(Term::edges(j));
            expected.push(Term::cycles(1, 2u32));
        }
        expected.push(Term::edges(1u32));
        expected.push(Term::cycles(2, 2u32));
        expected.push(Term::edges(1u32));
        assert_eq!(flat, expected);
    }
}
