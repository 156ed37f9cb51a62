//! Exact vertex enumeration for bounded polytopes `{x >= 0, A x <= b}` by the
//! double description method on the homogenized cone `{(x, t) >= 0, A x <= b t}`.
//!
//! Rays are primitive nonnegative integer vectors, so every extreme ray has a
//! unique representative and deduplication is structural.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::config::Rational;
use crate::error::{Error, Result};

/// Small fixed-capacity bitset over constraint indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Incidence(Vec<u64>);

impl Incidence {
    fn empty(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains_all(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

#[derive(Debug, Clone)]
struct Ray {
    coords: Vec<i128>,
    zeros: Incidence,
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .expect("integer overflow in exact vertex enumeration")
    })
}

fn primitive(mut v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        for x in &mut v {
            *x /= g;
        }
    }
    v
}

/// Scale `(a, b)` so that `b*t - a.x >= 0` has integer coefficients.
fn integer_row(a: &[Rational], b: &Rational) -> Vec<i128> {
    let l = a.iter().chain(std::iter::once(b)).fold(1i64, |l, r| l.lcm(r.denom()));
    let scale = |r: &Rational| i128::from(*r.numer()) * i128::from(l / r.denom());
    let mut row: Vec<i128> = a.iter().map(|r| -scale(r)).collect();
    row.push(scale(b));
    primitive(row)
}

/// All vertices of `{x >= 0 : a_j . x <= b_j for all j}` with `b_j >= 0`.
///
/// Returns `Error::Unbounded` if the polytope has a recession direction.
pub(crate) fn enumerate_vertices(dim: usize, rows: &[(Vec<Rational>, Rational)]) -> Result<Vec<Vec<Rational>>> {
    let d = dim + 1;
    let total = d + rows.len();
    // Constraint 0..d are the orthant (x_k >= 0, t >= 0); the rest are the rows.
    let mut rays: Vec<Ray> = (0..d)
        .map(|k| {
            let mut coords = vec![0i128; d];
            coords[k] = 1;
            let mut zeros = Incidence::empty(total);
            (0..d).filter(|&j| j != k).for_each(|j| zeros.set(j));
            Ray { coords, zeros }
        })
        .collect();

    for (idx, (a, b)) in rows.iter().enumerate() {
        debug_assert_eq!(a.len(), dim);
        let cidx = d + idx;
        let g = integer_row(a, b);
        let vals: Vec<i128> = rays.iter().map(|r| dot(&g, &r.coords)).collect();

        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.set(cidx);
                }
            }
            continue;
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if (common.count() as usize) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !r.zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let (vp, vn) = (vals[p], -vals[n]);
                let coords: Vec<i128> = rays[p]
                    .coords
                    .iter()
                    .zip(&rays[n].coords)
                    .map(|(xp, xn)| {
                        vn.checked_mul(*xp)
                            .zip(vp.checked_mul(*xn))
                            .and_then(|(a, b)| a.checked_add(b))
                            .expect("integer overflow in exact vertex enumeration")
                    })
                    .collect();
                let mut zeros = common;
                zeros.set(cidx);
                next.push(Ray {
                    coords: primitive(coords),
                    zeros,
                });
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i] > 0 {
                next.push(r);
            } else if vals[i] == 0 {
                r.zeros.set(cidx);
                next.push(r);
            }
        }
        rays = next;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in &rays {
        let t = r.coords[dim];
        if t.is_zero() {
            let k = r.coords.iter().position(|c| c.is_positive()).unwrap_or(0);
            return Err(Error::Unbounded(k));
        }
        let v: Vec<Rational> = r.coords[..dim]
            .iter()
            .map(|&c| {
                let num = i64::try_from(c).expect("vertex numerator exceeds i64");
                let den = i64::try_from(t).expect("vertex denominator exceeds i64");
                Rational::new(num, den)
            })
            .collect();
        out.push(v);
    }
    out.sort();
    out.dedup();
    Ok(out)
}
