//! Normalized symmetric sum-DoF versus `M/N`.

use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;

use crate::config::{parse_rational, Rational};
use crate::error::{Error, Result};
use crate::region::{symmetric_sum_dof, CsitMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvePoint {
    pub k: u32,
    /// `M / N`.
    pub ratio: Rational,
    pub mode: CsitMode,
    /// Sum-DoF divided by `N`.
    pub normalized: Rational,
}

/// Evaluates both modes for every `K` on the `M/N` grid. `N` is fixed to the
/// least common denominator of the grid so every `M` is an integer.
pub fn sum_dof_curve(ks: &[u32], ratios: &[Rational]) -> Result<Vec<CurvePoint>> {
    if let Some(r) = ratios.iter().find(|r| !r.is_positive()) {
        return Err(Error::Parse(format!("M/N must be positive, got {r}")));
    }
    if let Some(k) = ks.iter().find(|&&k| k < 2) {
        return Err(Error::Parse(format!("K must be at least 2, got {k}")));
    }
    let n = ratios.iter().fold(1i64, |l, r| l.lcm(r.denom()));
    let n_u32 = u32::try_from(n).map_err(|_| Error::Parse("grid denominators too large".into()))?;
    let mut out = Vec::with_capacity(ks.len() * ratios.len() * 2);
    for &k in ks {
        for &ratio in ratios {
            let m = u32::try_from((ratio * Rational::from_integer(n)).to_integer())
                .map_err(|_| Error::Parse(format!("M/N = {ratio} too large")))?;
            for mode in [CsitMode::NoCsit, CsitMode::Delayed] {
                out.push(CurvePoint {
                    k,
                    ratio,
                    mode,
                    normalized: symmetric_sum_dof(m, n_u32, k, mode) / Rational::from_integer(n),
                });
            }
        }
    }
    Ok(out)
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list of rationals.
pub fn parse_grid(s: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (parse_rational(start)?, parse_rational(stop)?, parse_rational(step)?);
            if !step.is_positive() {
                return Err(Error::Parse("grid step must be positive".into()));
            }
            let mut out = Vec::new();
            let mut x = start;
            while x <= stop {
                out.push(x);
                x += step;
                if out.len() > 100_000 {
                    return Err(Error::Parse("grid too large".into()));
                }
            }
            Ok(out)
        }
        [list] => list.split(',').map(parse_rational).collect(),
        _ => Err(Error::Parse(format!("bad grid {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn value(points: &[CurvePoint], k: u32, ratio: Rational, mode: CsitMode) -> Rational {
        points
            .iter()
            .find(|p| p.k == k && p.ratio == ratio && p.mode == mode)
            .unwrap()
            .normalized
    }

    #[test]
    fn reported_values() {
        let pts = sum_dof_curve(&[2, 3], &[r(2, 1)]).unwrap();
        assert_eq!(value(&pts, 3, r(2, 1), CsitMode::Delayed), r(6, 5));
        assert_eq!(value(&pts, 3, r(2, 1), CsitMode::NoCsit), r(1, 1));
        assert_eq!(value(&pts, 2, r(2, 1), CsitMode::Delayed), r(4, 3));
    }

    #[test]
    fn below_one_modes_agree() {
        let grid = parse_grid("1/4:1:1/4").unwrap();
        let pts = sum_dof_curve(&[2, 3, 5], &grid).unwrap();
        for p in &pts {
            assert_eq!(p.normalized, p.ratio);
        }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("1/2:3/2:1/2").unwrap(), vec![r(1, 2), r(1, 1), r(3, 2)]);
        assert_eq!(parse_grid("1,3/2,2").unwrap(), vec![r(1, 1), r(3, 2), r(2, 1)]);
        assert!(parse_grid("1:2:0").is_err());
        assert!(sum_dof_curve(&[3], &[r(0, 1)]).is_err());
        assert!(sum_dof_curve(&[1], &[r(1, 1)]).is_err());
    }

    #[test]
    fn shape_in_m() {
        let grid = parse_grid("1:4:1/8").unwrap();
        for k in 2..6 {
            let pts = sum_dof_curve(&[k], &grid).unwrap();
            let delayed: Vec<_> = pts.iter().filter(|p| p.mode == CsitMode::Delayed).collect();
            for w in delayed.windows(2) {
                if w[1].ratio <= r(2, 1) {
                    assert!(w[1].normalized > w[0].normalized);
                } else {
                    assert_eq!(w[1].normalized, w[0].normalized);
                }
            }
            for p in &delayed {
                let lo = p.ratio.min(r(1, 1));
                let hi = p.ratio.min(r(2, 1));
                assert!(lo <= p.normalized && p.normalized <= hi);
            }
        }
    }
}
