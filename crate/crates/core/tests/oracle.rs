//! Checks the symbolic arithmetic against a plain `u64` re-derivation of the
//! tower, written without touching the library's formula code.

use chaoscope_core::{Construction, Locus, VertexAddr};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    Edge,
    Cycle(usize),
}

/// Cycle lengths per level, `lengths[n][i - 1] = |c_{n,i}|`.
fn lengths_upto(max: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![], vec![10]];
    for n in 1..max {
        let prev = &out[n];
        let total: u64 = prev.iter().sum();
        let k = 2 * (1 + total);
        let tail = |i: usize| -> u64 { prev.iter().skip(i - 1).map(|l| 2 * l).sum() };
        let mut next = Vec::new();
        next.push((1..=k).map(|j| j + 2 * prev[0]).sum::<u64>() + 2 + tail(2));
        for i in 2..=n {
            next.push(2 + tail(i));
        }
        next.push(((n + 2) * (n + 2)) as u64 * total);
        out.push(next);
    }
    out.truncate(max + 1);
    out
}

/// Image of `c_{n+1,i}` written out symbol by symbol over level `n`.
fn image(n: usize, i: usize, lengths: &[Vec<u64>]) -> Vec<Sym> {
    let count = lengths[n].len();
    let mut out = Vec::new();
    if n == 0 {
        out.extend(std::iter::repeat_n(Sym::Edge, 10));
        return out;
    }
    let push = |out: &mut Vec<Sym>, s: Sym, times: u64| out.extend(std::iter::repeat_n(s, times as usize));
    if i == count + 1 {
        let total: u64 = lengths[n].iter().sum();
        push(&mut out, Sym::Edge, ((n + 2) * (n + 2)) as u64 * total);
        return out;
    }
    if i == 1 {
        let k = 2 * (1 + lengths[n].iter().sum::<u64>());
        for j in 1..=k {
            push(&mut out, Sym::Edge, j);
            push(&mut out, Sym::Cycle(1), 2);
        }
        push(&mut out, Sym::Edge, 1);
        for r in 2..=count {
            push(&mut out, Sym::Cycle(r), 2);
        }
        push(&mut out, Sym::Edge, 1);
        return out;
    }
    push(&mut out, Sym::Edge, 1);
    for r in i..=count {
        push(&mut out, Sym::Cycle(r), 2);
    }
    push(&mut out, Sym::Edge, 1);
    out
}

fn image_length(syms: &[Sym], lower: &[u64]) -> u64 {
    syms.iter()
        .map(|s| match s {
            Sym::Edge => 1,
            Sym::Cycle(r) => lower[r - 1],
        })
        .sum()
}

/// Lower locus reached after each edge of the image, index `p` for position `p`.
fn walk(syms: &[Sym], lower: &[u64]) -> Vec<Locus> {
    let mut out = vec![Locus::Base];
    for s in syms {
        match s {
            Sym::Edge => out.push(Locus::Base),
            Sym::Cycle(r) => {
                for q in 1..lower[r - 1] {
                    out.push(Locus::on_cycle(*r, q));
                }
                out.push(Locus::Base);
            }
        }
    }
    out
}

#[test]
fn oracle_lengths_match_known_values() {
    let l = lengths_upto(3);
    assert_eq!(l[1], vec![10]);
    assert_eq!(l[2], vec![695, 90]);
    assert_eq!(l[3], vec![3_421_640, 182, 12_560]);
}

#[test]
fn image_lengths_equal_cycle_lengths() {
    let l = lengths_upto(3);
    for n in 0..3 {
        for i in 1..=l[n + 1].len() {
            assert_eq!(image_length(&image(n, i, &l), &l[n]), l[n + 1][i - 1], "c_{{{},{i}}}", n + 1);
        }
    }
}

#[test]
fn library_lengths_match_oracle() {
    let c = Construction::builtin();
    let l = lengths_upto(4);
    for (n, row) in l.iter().enumerate() {
        let lib: Vec<u64> = c.cycle_lengths(n).unwrap().iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(&lib, row, "level {n}");
    }
    assert_eq!(c.k_value(1).unwrap(), BigUint::from(22u32));
    assert_eq!(c.k_value(2).unwrap(), BigUint::from(1572u32));
}

#[test]
fn projection_matches_oracle_walk() {
    let c = Construction::builtin();
    let l = lengths_upto(3);
    for n in 1..3 {
        for i in 1..=l[n + 1].len() {
            let path = walk(&image(n, i, &l), &l[n]);
            let len = l[n + 1][i - 1];
            // Every position at level 2; a stride through the long level-3 cycles.
            let stride = if len > 100_000 { 997 } else { 1 };
            for p in (1..len).step_by(stride) {
                let got = c.project_addr(&VertexAddr::on_cycle(n + 1, i, p)).unwrap();
                assert_eq!(got.level, n);
                assert_eq!(got.locus, path[p as usize], "c_{{{},{i}}} position {p}", n + 1);
            }
        }
    }
}
