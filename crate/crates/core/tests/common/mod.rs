#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sqrtmeas::linalg::{real_matrix, CMatrix, C64};
use sqrtmeas::{GroupSpec, StateSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

pub fn normalize_columns(a: &mut CMatrix) {
    for mut c in a.column_iter_mut() {
        let n = c.norm();
        c.iter_mut().for_each(|z| *z /= n);
    }
}

/// Random normalized set; with `rank` below `min(n, m)` the columns span a
/// `rank`-dimensional subspace.
pub fn random_set(n: usize, m: usize, rank: Option<usize>, rng: &mut impl Rng) -> StateSet {
    let mut phi = match rank {
        Some(k) => gaussian(n, k, rng) * gaussian(k, m, rng),
        None => gaussian(n, m, rng),
    };
    normalize_columns(&mut phi);
    StateSet::new(phi, None).unwrap()
}

/// Random shape with `n, m` in the given ranges and, every third draw, a
/// forced rank deficiency.
pub fn random_shaped_set(
    draw: usize,
    max_n: usize,
    max_m: usize,
    rng: &mut impl Rng,
) -> (StateSet, bool) {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_m);
    let deficient = draw.is_multiple_of(3) && n.min(m) >= 2;
    let rank = deficient.then(|| rng.random_range(1..n.min(m)));
    (random_set(n, m, rank, rng), deficient)
}

pub fn two_state() -> StateSet {
    let r3 = 3f64.sqrt();
    StateSet::new(real_matrix(2, 2, &[1.0, -0.5, 0.0, r3 / 2.0]), None).unwrap()
}

pub fn gu_four() -> StateSet {
    StateSet::new(
        real_matrix(
            4,
            4,
            &[
                1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, -1.0,
                1.0,
            ],
        )
        .scale(0.5),
        None,
    )
    .unwrap()
}

pub fn gu_four_group() -> GroupSpec {
    GroupSpec::new(
        vec![2, 2],
        vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
    )
    .unwrap()
}

pub fn printed_gu_measurement() -> CMatrix {
    let r2 = 2f64.sqrt();
    real_matrix(
        4,
        4,
        &[
            1.0, -1.0, -1.0, 1.0, r2, r2, -r2, -r2, r2, -r2, r2, -r2, 1.0, -1.0, -1.0, 1.0,
        ],
    )
    .scale(1.0 / (2.0 * r2))
}

pub fn peres_wootters() -> StateSet {
    let cols: Vec<Vec<C64>> = (0..3)
        .map(|k| {
            let t = k as f64 * PI / 3.0;
            let a = [t.cos(), t.sin()];
            let mut v = Vec::with_capacity(4);
            for x in a {
                for y in a {
                    v.push(C64::new(x * y, 0.0));
                }
            }
            v
        })
        .collect();
    StateSet::from_columns(&cols, None).unwrap()
}

/// Random GU set over `factors`: commuting diagonal unitaries built from
/// random characters, conjugated by a random unitary, applied to a random
/// seed state. The returned group carries the unitaries as generators.
pub fn random_gu_set(factors: &[usize], n: usize, rng: &mut impl Rng) -> (StateSet, GroupSpec) {
    let g = GroupSpec::lexicographic(factors.to_vec()).unwrap();
    let chars: Vec<Vec<usize>> = (0..n)
        .map(|_| factors.iter().map(|&mk| rng.random_range(0..mk)).collect())
        .collect();
    let basis = sqrtmeas::optimality::random_unitary(n, rng);
    let mut seed = gaussian(n, 1, rng);
    normalize_columns(&mut seed);
    let mut phi = CMatrix::zeros(n, g.len());
    let mut unitaries = Vec::with_capacity(g.len());
    for (j, elem) in g.order().iter().enumerate() {
        let diag: Vec<C64> = chars
            .iter()
            .map(|h| {
                let angle: f64 = h
                    .iter()
                    .zip(elem)
                    .zip(factors)
                    .map(|((&hk, &gk), &mk)| 2.0 * PI * (hk * gk) as f64 / mk as f64)
                    .sum();
                C64::from_polar(1.0, angle)
            })
            .collect();
        let u =
            &basis * CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)) * basis.adjoint();
        phi.set_column(j, &(&u * &seed).column(0));
        unitaries.push(u);
    }
    let g = g.with_generators(unitaries).unwrap();
    (StateSet::new(phi, None).unwrap(), g)
}
