//! Shared generators and oracles for the integration and acceptance tests.
//!
//! Everything here is deliberately independent of the library's solution
//! paths: envelopes come from a parametric quarter-ellipse, LP reference
//! optima from exhaustive vertex enumeration, and transfer-plan reference
//! costs from grid search over the raw feasibility predicate.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use runway_core::{CapacityEnvelope, ControlPoint, DemandDomain, SlotContext};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid envelope: control points sampled from a quarter ellipse,
/// which guarantees strict monotonicity and strict concavity.
pub fn random_envelope(rng: &mut ChaCha8Rng, name: &str) -> CapacityEnvelope {
    let segments = rng.gen_range(1..=5usize);
    let x_max: f64 = rng.gen_range(5.0..20.0);
    let y_max: f64 = rng.gen_range(5.0..20.0);

    // Interior angles from a 10-degree grid keep vertices well separated.
    let mut grid: Vec<f64> = (1..9).map(|k| k as f64 * 10.0).collect();
    grid.shuffle(rng);
    let mut angles: Vec<f64> = grid.into_iter().take(segments - 1).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut points = vec![ControlPoint::new(x_max, 0.0)];
    for angle in angles {
        let rad = angle.to_radians();
        points.push(ControlPoint::new(x_max * rad.cos(), y_max * rad.sin()));
    }
    points.push(ControlPoint::new(0.0, y_max));
    CapacityEnvelope::new(name, points).expect("ellipse points form a valid envelope")
}

/// Random tolerances and variability coefficients in the ranges the
/// acceptance criteria exercise.
pub fn random_tolerances(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    let q_a = rng.gen_range(1.0..5.0);
    let q_d = rng.gen_range(1.0..5.0);
    let p_a = rng.gen_range(0.4..2.5);
    let p_d = rng.gen_range(0.4..2.5);
    (q_a, q_d, p_a, p_d)
}

/// A random context that admits a sustainable policy: demand is sampled
/// inside the envelope and scaled down until the existence condition holds.
pub fn random_sustainable_context(rng: &mut ChaCha8Rng, name: &str) -> SlotContext {
    let envelope = random_envelope(rng, name);
    let (q_a, q_d, p_a, p_d) = random_tolerances(rng);
    let mut lambda_a = rng.gen_range(0.0..0.6 * envelope.mu_a_max());
    let mut lambda_d = rng.gen_range(0.0..0.6 * envelope.mu_d_max());
    for _ in 0..60 {
        let ctx = SlotContext::new(
            envelope.clone(),
            q_a,
            q_d,
            p_a,
            p_d,
            lambda_a,
            lambda_d,
        )
        .unwrap();
        if runway_core::sustainable_exists(&ctx) {
            return ctx;
        }
        lambda_a *= 0.7;
        lambda_d *= 0.7;
    }
    // Zero demand exists whenever the tolerances are reachable at all;
    // retry with laxer tolerances if even that failed.
    let ctx = SlotContext::new(envelope.clone(), q_a, q_d, p_a, p_d, 0.0, 0.0).unwrap();
    if runway_core::sustainable_exists(&ctx) {
        return ctx;
    }
    SlotContext::new(envelope, q_a, q_d, 5.0, 5.0, 0.0, 0.0).unwrap()
}

/// Gaussian elimination with partial pivoting; `None` for (near-)singular
/// systems. Used to enumerate basic solutions of random LPs.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot_row][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Reference optimum of `min c.x  s.t.  rows.x <= bounds, x >= 0` by brute
/// force over every basic point: each choice of n active constraints among
/// the rows and the axis planes.
pub fn brute_force_lp_optimum(c: &[f64], rows: &[Vec<f64>], bounds: &[f64]) -> Option<f64> {
    let n = c.len();
    let m = rows.len();
    let total = m + n; // rows, then axis planes x_j = 0
    let mut best: Option<f64> = None;
    let mut combo: Vec<usize> = (0..n).collect();
    loop {
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for &pick in &combo {
            if pick < m {
                a.push(rows[pick].clone());
                b.push(bounds[pick]);
            } else {
                let mut axis = vec![0.0; n];
                axis[pick - m] = 1.0;
                a.push(axis);
                b.push(0.0);
            }
        }
        if let Some(x) = solve_square(a, b) {
            let feasible = x.iter().all(|&v| v >= -1e-9)
                && rows.iter().zip(bounds).all(|(row, &bound)| {
                    row.iter().zip(&x).map(|(r, v)| r * v).sum::<f64>() <= bound + 1e-7
                });
            if feasible {
                let value = c.iter().zip(&x).map(|(ci, v)| ci * v).sum::<f64>();
                best = Some(best.map_or(value, |b: f64| b.min(value)));
            }
        }
        // next lexicographic n-combination of 0..total
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if combo[i] != i + total - n {
                combo[i] += 1;
                for j in i + 1..n {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Grid-search oracle for arrival-only transfer instances (every slot has
/// `lambda_d = 0`, which forces all departure transfers to zero).
///
/// Scans `s_a` on a uniform grid, checking raw demand-domain membership of
/// the induced secondary schedule, and returns the minimal transfer cost
/// `c_a * sum(s_a)` over feasible grid points.
pub fn grid_search_arrival_transfers(
    demands: &[f64],
    domains: &[&DemandDomain],
    c_a: f64,
    step: f64,
) -> Option<f64> {
    let n = demands.len();
    let feasible_last = |lambda2: f64, i: usize| domains[i].contains(lambda2, 0.0);
    match n {
        1 => feasible_last(demands[0], 0).then_some(0.0),
        2 => {
            let mut best = None;
            let steps = (demands[0] / step).ceil() as usize;
            for k in 0..=steps {
                let s1 = (k as f64 * step).min(demands[0]);
                if domains[0].contains(demands[0] - s1, 0.0)
                    && feasible_last(demands[1] + s1, 1)
                {
                    best = Some(c_a * s1);
                    break; // cost is increasing in s1
                }
            }
            best
        }
        3 => {
            let mut best: Option<f64> = None;
            let steps1 = (demands[0] / step).ceil() as usize;
            for k1 in 0..=steps1 {
                let s1 = (k1 as f64 * step).min(demands[0]);
                if best.is_some_and(|b| c_a * s1 >= b) {
                    break;
                }
                if !domains[0].contains(demands[0] - s1, 0.0) {
                    continue;
                }
                let cap2 = demands[1] + s1;
                let steps2 = (cap2 / step).ceil() as usize;
                for k2 in 0..=steps2 {
                    let s2 = (k2 as f64 * step).min(cap2);
                    let cost = c_a * (s1 + s2);
                    if best.is_some_and(|b| cost >= b) {
                        break;
                    }
                    if domains[1].contains(cap2 - s2, 0.0) && feasible_last(demands[2] + s2, 2) {
                        best = Some(cost);
                        break;
                    }
                }
            }
            best
        }
        _ => panic!("grid oracle supports up to 3 slots"),
    }
}
