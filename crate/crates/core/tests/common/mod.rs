#![allow(dead_code)]

use dof_core::{AntennaConfig, DoFPoint, DoFRegion, Rational};
use num_traits::{One, Zero};
use rand::Rng;

/// Every sorted config with `2 <= K <= max_k` and all antenna counts in `1..=max_ant`.
pub fn all_configs(max_k: usize, max_ant: u32) -> Vec<AntennaConfig> {
    fn rec(out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, len: usize, lo: i64, hi: i64) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=hi {
            cur.push(v);
            rec(out, cur, len, v, hi);
            cur.pop();
        }
    }
    let mut cfgs = Vec::new();
    for k in 2..=max_k {
        let mut ns = Vec::new();
        rec(&mut ns, &mut Vec::new(), k, 1, i64::from(max_ant));
        for m in 1..=i64::from(max_ant) {
            for n in &ns {
                cfgs.push(AntennaConfig::new(m, n).unwrap());
            }
        }
    }
    cfgs
}

pub fn random_config<R: Rng>(rng: &mut R, ks: std::ops::RangeInclusive<usize>, max_ant: i64) -> AntennaConfig {
    let k = rng.random_range(ks);
    let m = rng.random_range(1..=max_ant);
    let n: Vec<i64> = (0..k).map(|_| rng.random_range(1..=max_ant)).collect();
    AntennaConfig::new(m, &n).unwrap()
}

fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col] / a[col][col];
                let pivot_row = a[col].clone();
                for (x, v) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= f * v;
                }
                let v = b[col];
                b[r] -= f * v;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Vertices by brute force: every `K`-subset of constraints (halfspaces and
/// coordinate planes) with a unique feasible intersection point.
pub fn basis_vertices(region: &DoFRegion) -> Vec<DoFPoint> {
    let k = region.dim();
    let mut rows: Vec<(Vec<Rational>, Rational)> = region
        .halfspaces()
        .iter()
        .map(|h| (h.coeffs().to_vec(), h.rhs()))
        .collect();
    for i in 0..k {
        let mut e = vec![Rational::zero(); k];
        e[i] = Rational::one();
        rows.push((e, Rational::zero()));
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let a = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b = idx.iter().map(|&i| rows[i].1).collect();
        if let Some(x) = solve(a, b) {
            let nonneg = x.iter().all(|c| *c >= Rational::zero());
            if nonneg && region.halfspaces().iter().all(|h| h.satisfied_by(&x)) && !out.contains(&x) {
                out.push(x);
            }
        }
        // next combination
        let mut pos = k;
        loop {
            if pos == 0 {
                out.sort();
                return out.into_iter().map(|c| DoFPoint::new(c).unwrap()).collect();
            }
            pos -= 1;
            if idx[pos] < rows.len() - k + pos {
                break;
            }
        }
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn strictly_positive(p: &DoFPoint) -> bool {
    p.coords().iter().all(|c| *c > Rational::zero())
}
