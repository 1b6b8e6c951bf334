use chaoscope_core::analysis::{degree_of_column, DegreeValue};
use chaoscope_core::bouquet::Atom;
use chaoscope_core::dsl::{
    parse, serialize, validate_document, AtomRef, CoverDocument, CycleDecl, FormulaTerm, LevelBlock, LevelBody, Mode,
};
use chaoscope_core::dynamics::random_handle;
use chaoscope_core::{Construction, Locus, PointHandle, VertexAddr};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::ControlFlow;
use std::sync::OnceLock;

fn tower() -> &'static Construction {
    static C: OnceLock<Construction> = OnceLock::new();
    C.get_or_init(Construction::builtin)
}

fn handle(seed: u64, spine: usize, reserve: u64) -> PointHandle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_handle(tower(), &mut rng, spine, &BigUint::from(reserve)).unwrap()
}

// Forward steps available to `h`, capped at `cap`.
fn room(h: &PointHandle, cap: i64) -> i64 {
    h.forward_horizon(tower())
        .unwrap()
        .and_then(|d| d.to_i64())
        .map_or(cap, |d| d.min(cap))
}

// One step moves every coordinate along one edge of its own level.
fn is_edge(c: &Construction, from: &Locus, to: &Locus, level: usize) -> bool {
    match (from, to) {
        (Locus::Base, Locus::Base) => true,
        (Locus::Base, Locus::OnCycle { position, .. }) => *position == BigUint::from(1u32),
        (Locus::OnCycle { cycle, position }, Locus::Base) => {
            position + 1u32 == c.cycle_length(level, *cycle).unwrap()
        }
        (Locus::OnCycle { cycle: a, position: p }, Locus::OnCycle { cycle: b, position: q }) => a == b && p + 1u32 == *q,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn segment_lengths_sum_to_cycle_length(n in 1usize..4, pick in 0usize..8) {
        let c = tower();
        let spec = c.spec(n).unwrap();
        let i = pick % spec.cycle_count() + 1;
        let lower: Vec<BigUint> = c.cycle_lengths(n).unwrap();
        let mut total = BigUint::default();
        let _ = spec.image_formulas[i - 1].for_each_segment(|_, atom, count| {
            total += match atom {
                Atom::Edge => count.clone(),
                Atom::Cycle(r) => count * &lower[r - 1],
            };
            ControlFlow::Continue(())
        });
        prop_assert_eq!(total, c.cycle_length(n + 1, i).unwrap());
    }

    #[test]
    fn projection_is_a_cover_step(n in 2usize..7, pick in 0usize..8, frac in 0.0f64..1.0) {
        // Consecutive vertices of a cycle project to equal or adjacent vertices.
        let c = tower();
        let i = pick % c.cycle_count(n).unwrap() + 1;
        let len = c.cycle_length(n, i).unwrap();
        let scaled = BigUint::from((frac * 1e9) as u64) * (&len - 2u32) / BigUint::from(1_000_000_000u64);
        let p = scaled + 1u32;
        let a = c.project_addr(&VertexAddr::on_cycle(n, i, p.clone())).unwrap();
        let next = if &p + 1u32 == len { VertexAddr::base(n) } else { VertexAddr::on_cycle(n, i, &p + 1u32) };
        let b = c.project_addr(&next).unwrap();
        prop_assert!(a.locus == b.locus || is_edge(c, &a.locus, &b.locus, n - 1));
    }

    #[test]
    fn step_round_trips(seed in any::<u64>(), spine in 1usize..9, delta in 1i64..1_000_000) {
        let c = tower();
        let h = handle(seed, spine, 1_000_000);
        let d = BigInt::from(delta.min(room(&h, delta)));
        let there = h.step(c, &d).unwrap();
        prop_assert_eq!(there.step(c, &-d).unwrap(), h);
    }

    #[test]
    fn steps_compose(seed in any::<u64>(), spine in 1usize..9, a in 0i64..500_000, b in 0i64..500_000) {
        let c = tower();
        let h = handle(seed, spine, 1_000_000);
        let (a, b) = (a.min(room(&h, a)), b.min(room(&h, b) - a.min(room(&h, a))));
        let split = h.step_by(c, a).unwrap().step_by(c, b).unwrap();
        let joined = h.step_by(c, a + b).unwrap();
        prop_assert_eq!(split.column_of(c, spine).unwrap(), joined.column_of(c, spine).unwrap());
    }

    #[test]
    fn one_step_moves_along_edges(seed in any::<u64>(), spine in 1usize..9, t in 0i64..100_000) {
        let c = tower();
        let h = handle(seed, spine, 200_000);
        let h = h.step_by(c, t.min(room(&h, t) - 1)).unwrap();
        let before = h.column_of(c, spine).unwrap();
        let after = h.step_by(c, 1).unwrap().column_of(c, spine).unwrap();
        for level in 0..=spine {
            prop_assert!(is_edge(c, &before[level].locus, &after[level].locus, level), "level {}", level);
        }
    }

    #[test]
    fn columns_are_consistent_projections(seed in any::<u64>(), spine in 2usize..10) {
        let c = tower();
        let h = handle(seed, spine, 0);
        let column = h.column_of(c, spine).unwrap();
        for level in 1..=spine {
            prop_assert_eq!(&c.project_addr(&column[level]).unwrap(), &column[level - 1]);
        }
    }

    #[test]
    fn degree_is_monotone_in_depth(seed in any::<u64>(), spine in 1usize..10) {
        let c = tower();
        let h = handle(seed, spine, 0);
        let mut last = DegreeValue::Infinite;
        for depth in 0..=spine {
            let d = degree_of_column(c, &h, depth).unwrap();
            prop_assert!(d <= last);
            last = d;
        }
    }

    #[test]
    fn base_hits_are_base(seed in any::<u64>(), spine in 1usize..9, m in 0usize..4) {
        let c = tower();
        let h = handle(seed, spine, 0);
        let m = m.min(spine);
        let d = h.next_base_time(c, m).unwrap();
        let at = h.step(c, &BigInt::from(d.clone())).unwrap();
        prop_assert!(at.column_of(c, m).unwrap()[m].locus.is_base());
        if let Some(d) = d.to_u64().filter(|&d| d > 0 && d < 10_000) {
            for s in 0..d {
                prop_assert!(!h.step_by(c, s as i64).unwrap().column_of(c, m).unwrap()[m].locus.is_base());
            }
        }
    }

    #[test]
    fn documents_round_trip(doc in document()) {
        let text = serialize(&doc);
        let parsed = parse(&text).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(serialize(&parsed), text);
        prop_assert!(validate_document(&parsed).is_empty(), "{:?}", validate_document(&parsed));
    }
}

// Random valid bouquet documents: each formula is edge runs and cycle runs
// over the level below, framed by edges.
fn document() -> impl Strategy<Value = CoverDocument> {
    let counts = prop::collection::vec(1usize..4, 1..4);
    (counts, any::<u64>()).prop_map(|(counts, seed)| {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut doc = CoverDocument::empty("random", Mode::Bouquet);
        let mut below = 0usize;
        for (offset, &count) in counts.iter().enumerate() {
            let cycles = (1..=count)
                .map(|index| {
                    let mut formula = vec![run(rng.gen_range(1..4u32), AtomRef::Edge)];
                    for _ in 0..rng.gen_range(0..4) {
                        if below > 0 {
                            formula.push(run(rng.gen_range(1..4u32), AtomRef::Cycle(rng.gen_range(1..=below))));
                        }
                        formula.push(run(rng.gen_range(1..4u32), AtomRef::Edge));
                    }
                    formula.push(run(rng.gen_range(1..4u32), AtomRef::Edge));
                    CycleDecl {
                        index,
                        declared_length: None,
                        formula,
                    }
                })
                .collect();
            doc.levels.push(LevelBlock {
                level: offset + 1,
                body: LevelBody::Bouquet { cycles },
            });
            below = count;
        }
        doc
    })
}

fn run(count: u32, atom: AtomRef) -> FormulaTerm {
    FormulaTerm::Run {
        count: count.into(),
        atom,
    }
}
