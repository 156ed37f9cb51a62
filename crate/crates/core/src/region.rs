//! DoF regions as exact rational polytopes over the nonnegative orthant.
//!
//! Coordinate `i` (0-based) of every region is `d_{-(i+1)}`, the DoF of the
//! message not wanted by canonical receiver `i`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{AntennaConfig, DoFPoint, Rational};
use crate::error::{Error, Result};
use crate::polytope::enumerate_vertices;

/// Largest dimension accepted by [`DoFRegion::vertices`].
pub const MAX_VERTEX_DIM: usize = 8;

/// Which transmitter knowledge a region describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CsitMode {
    #[serde(rename = "noCSIT")]
    NoCsit,
    #[serde(rename = "delayedCSIT")]
    Delayed,
}

impl CsitMode {
    pub fn tag(self) -> &'static str {
        match self {
            CsitMode::NoCsit => "noCSIT",
            CsitMode::Delayed => "delayedCSIT",
        }
    }
}

impl std::str::FromStr for CsitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "nocsit" | "none" => Ok(CsitMode::NoCsit),
            "delayed" | "delayedcsit" => Ok(CsitMode::Delayed),
            _ => Err(Error::Parse(format!("unknown mode {s:?} (expected noCSIT or delayed)"))),
        }
    }
}

/// Halfspace `a . d <= rhs` with nonnegative coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl HalfSpace {
    /// Halfspace `a . d <= 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        Self::with_rhs(coeffs, Rational::one())
    }

    /// Halfspace `a . d <= rhs`; a positive right-hand side is normalized to 1.
    pub fn with_rhs(coeffs: Vec<Rational>, rhs: Rational) -> Result<Self> {
        if coeffs.iter().any(|c| c.is_negative()) || rhs.is_negative() {
            return Err(Error::Parse("halfspace coefficients must be nonnegative".into()));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Parse("halfspace needs a positive coefficient".into()));
        }
        if rhs.is_positive() {
            let coeffs = coeffs.into_iter().map(|c| c / rhs).collect();
            Ok(Self {
                coeffs,
                rhs: Rational::one(),
            })
        } else {
            Ok(Self { coeffs, rhs })
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn rhs(&self) -> Rational {
        self.rhs
    }

    pub fn lhs(&self, p: &[Rational]) -> Rational {
        self.coeffs.iter().zip(p).map(|(a, x)| a * x).sum()
    }

    pub fn satisfied_by(&self, p: &[Rational]) -> bool {
        self.lhs(p) <= self.rhs
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "d-{}", i + 1)?;
            } else {
                write!(f, "({c})d-{}", i + 1)?;
            }
        }
        write!(f, " <= {}", self.rhs)
    }
}

/// Finite intersection of halfspaces with the nonnegative orthant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoFRegion {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
}

fn min_recip(a: u32, b: u32) -> Rational {
    Rational::new(1, i64::from(a.min(b)))
}

impl DoFRegion {
    /// Builds a region, dropping exact duplicates and keeping first occurrences.
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        let mut kept: Vec<HalfSpace> = Vec::with_capacity(halfspaces.len());
        for h in halfspaces {
            if h.coeffs.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: h.coeffs.len(),
                });
            }
            if !kept.contains(&h) {
                kept.push(h);
            }
        }
        Ok(Self { dim, halfspaces: kept })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    /// Region with no CSIT: a single halfspace
    /// `sum_{i>=2} d_{-i}/min{M,N_1} + d_{-1}/min{M,N_2} <= 1`.
    pub fn no_csit(cfg: &AntennaConfig) -> Self {
        let (m, n) = (cfg.m(), cfg.n());
        let mut a = vec![min_recip(m, n[0]); cfg.k()];
        a[0] = min_recip(m, n[1]);
        Self {
            dim: cfg.k(),
            halfspaces: vec![HalfSpace {
                coeffs: a,
                rhs: Rational::one(),
            }],
        }
    }

    /// Region with delayed CSIT: one halfspace per receiver `j`, with
    /// `1/min{M,N_j}` on every foreign message and `1/min{M,N_j + N_o}` on
    /// message `j`, where `N_o` is the smallest antenna count among the others.
    pub fn delayed_csit(cfg: &AntennaConfig) -> Self {
        let (m, n) = (cfg.m(), cfg.n());
        let rows = (0..cfg.k())
            .map(|j| {
                let partner = if j == 0 { n[1] } else { n[0] };
                Self::receiver_row(m, n, j, partner)
            })
            .collect();
        Self::new(cfg.k(), rows).expect("rows have matching dimension")
    }

    /// Outer region from every ordered receiver pair `(j, i)`, `i != j`,
    /// before redundancy elimination (duplicates merged).
    pub fn raw_outer(cfg: &AntennaConfig) -> Self {
        let (m, n) = (cfg.m(), cfg.n());
        let k = cfg.k();
        let rows = (0..k)
            .flat_map(|j| (0..k).filter(move |&i| i != j).map(move |i| (j, i)))
            .map(|(j, i)| Self::receiver_row(m, n, j, n[i]))
            .collect();
        Self::new(k, rows).expect("rows have matching dimension")
    }

    /// Number of halfspaces the raw outer construction emits before merging.
    pub fn raw_outer_generated(cfg: &AntennaConfig) -> usize {
        cfg.k() * (cfg.k() - 1)
    }

    fn receiver_row(m: u32, n: &[u32], j: usize, partner: u32) -> HalfSpace {
        let mut a = vec![min_recip(m, n[j]); n.len()];
        a[j] = min_recip(m, n[j] + partner);
        HalfSpace {
            coeffs: a,
            rhs: Rational::one(),
        }
    }

    fn rows(&self, skip: Option<usize>) -> Vec<(Vec<Rational>, Rational)> {
        self.halfspaces
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, h)| (h.coeffs.clone(), h.rhs))
            .collect()
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    /// Exact membership test, including `d >= 0`.
    pub fn contains(&self, p: &DoFPoint) -> Result<bool> {
        self.check_dim(p.dim())?;
        Ok(self.first_violation(p)?.is_none())
    }

    /// Index and left-hand side of the first violated halfspace, if any.
    pub fn first_violation(&self, p: &DoFPoint) -> Result<Option<(usize, Rational)>> {
        self.check_dim(p.dim())?;
        Ok(self.halfspaces.iter().enumerate().find_map(|(i, h)| {
            let lhs = h.lhs(p.coords());
            (lhs > h.rhs).then_some((i, lhs))
        }))
    }

    /// All extreme points, sorted lexicographically.
    pub fn vertices(&self) -> Result<Vec<DoFPoint>> {
        if self.dim > MAX_VERTEX_DIM {
            return Err(Error::DimensionGuard {
                max: MAX_VERTEX_DIM,
                got: self.dim,
            });
        }
        let v = enumerate_vertices(self.dim, &self.rows(None))?;
        Ok(v.into_iter()
            .map(|c| DoFPoint::new(c).expect("vertices are nonnegative"))
            .collect())
    }

    /// Vertices of the region with halfspace `skip` deleted that violate it.
    fn relaxed_witness(&self, skip: usize) -> Result<Option<DoFPoint>> {
        let h = &self.halfspaces[skip];
        let v = enumerate_vertices(self.dim, &self.rows(Some(skip)))?;
        Ok(v.into_iter()
            .find(|p| !h.satisfied_by(p))
            .map(|c| DoFPoint::new(c).expect("vertices are nonnegative")))
    }

    /// Minimal halfspace set describing the same point set.
    ///
    /// Halfspaces are dropped one at a time; a halfspace survives only when a
    /// vertex of the region without it violates it.
    pub fn remove_redundant(&self) -> Result<Self> {
        Ok(self.remove_redundant_with_witnesses()?.0)
    }

    /// Like [`Self::remove_redundant`], also returning for each kept halfspace
    /// the certifying vertex of the relaxed region.
    pub fn remove_redundant_with_witnesses(&self) -> Result<(Self, Vec<DoFPoint>)> {
        let mut current = self.clone();
        let mut i = 0;
        let mut witnesses = Vec::new();
        while i < current.halfspaces.len() {
            match current.relaxed_witness(i) {
                Ok(Some(w)) => {
                    witnesses.push(w);
                    i += 1;
                }
                Ok(None) => {
                    current.halfspaces.remove(i);
                }
                // Dropping this halfspace would unbound the region, so it is needed.
                Err(Error::Unbounded(_)) => {
                    witnesses.push(self.unbounded_witness(&current, i));
                    i += 1;
                }
                Err(e) => return Err(e),
            }
        }
        Ok((current, witnesses))
    }

    // A point past the halfspace along a coordinate no other halfspace bounds.
    fn unbounded_witness(&self, current: &Self, skip: usize) -> DoFPoint {
        let h = &current.halfspaces[skip];
        let k = (0..self.dim)
            .find(|&k| {
                h.coeffs[k].is_positive()
                    && current
                        .halfspaces
                        .iter()
                        .enumerate()
                        .all(|(i, g)| i == skip || g.coeffs[k].is_zero())
            })
            .unwrap_or(0);
        let mut p = vec![Rational::zero(); self.dim];
        p[k] = (h.rhs + Rational::one()) / h.coeffs[k];
        DoFPoint::new(p).expect("nonnegative")
    }

    /// A vertex of `self` lying outside `other`, if any. Strictly positive
    /// vertices are preferred.
    pub fn vertex_outside(&self, other: &Self) -> Result<Option<DoFPoint>> {
        self.check_dim(other.dim)?;
        let mut outside = Vec::new();
        for v in self.vertices()? {
            if !other.contains(&v)? {
                outside.push(v);
            }
        }
        let positive = outside.iter().position(|v| v.coords().iter().all(|c| c.is_positive()));
        Ok(match positive {
            Some(i) => Some(outside.swap_remove(i)),
            None => outside.into_iter().next(),
        })
    }

    /// `self ⊆ other`, decided on the vertices of `self`.
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        Ok(self.vertex_outside(other)?.is_none())
    }

    /// Equality as point sets.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    /// Largest coordinate sum over the region.
    pub fn max_sum_dof(&self) -> Result<Rational> {
        Ok(self
            .vertices()?
            .iter()
            .map(DoFPoint::sum)
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// Serializable form.
    pub fn to_json(&self) -> RegionJson {
        let all_one = self.halfspaces.iter().all(|h| h.rhs.is_one());
        RegionJson {
            k: self.dim,
            halfspaces: self.halfspaces.iter().map(|h| h.coeffs.clone()).collect(),
            rhs: (!all_one).then(|| self.halfspaces.iter().map(|h| h.rhs).collect()),
        }
    }

    pub fn from_json(json: &RegionJson) -> Result<Self> {
        let rhs = match &json.rhs {
            Some(r) if r.len() != json.halfspaces.len() => {
                return Err(Error::Parse("rhs length differs from halfspace count".into()))
            }
            Some(r) => r.clone(),
            None => vec![Rational::one(); json.halfspaces.len()],
        };
        let hs = json
            .halfspaces
            .iter()
            .zip(rhs)
            .map(|(a, b)| HalfSpace::with_rhs(a.clone(), b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.k, hs)
    }
}

/// `{"K": int, "halfspaces": [[[num,den], ...], ...]}`; `rhs` is present only
/// when some right-hand side differs from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionJson {
    #[serde(rename = "K")]
    pub k: usize,
    pub halfspaces: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Vec<Rational>>,
}

/// Sum of the strictly positive corner for `N_1 = ... = N_K = N`:
/// `min{M,N}` without CSIT, `K / ((K-1)/min{M,N} + 1/min{M,2N})` with delayed CSIT.
pub fn symmetric_sum_dof(m: u32, n: u32, k: u32, mode: CsitMode) -> Rational {
    let single = Rational::from_integer(i64::from(m.min(n)));
    match mode {
        CsitMode::NoCsit => single,
        CsitMode::Delayed => {
            let k = Rational::from_integer(i64::from(k));
            k / ((k - Rational::one()) / single + min_recip(m, 2 * n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn cfg(m: i64, n: &[i64]) -> AntennaConfig {
        AntennaConfig::new(m, n).unwrap()
    }

    fn hs(c: &[(i64, i64)]) -> HalfSpace {
        HalfSpace::new(c.iter().map(|&(a, b)| r(a, b)).collect()).unwrap()
    }

    fn pt(c: &[(i64, i64)]) -> DoFPoint {
        DoFPoint::new(c.iter().map(|&(a, b)| r(a, b)).collect()).unwrap()
    }

    #[test]
    fn no_csit_examples() {
        let reg = DoFRegion::no_csit(&cfg(2, &[1, 1, 1]));
        assert_eq!(reg.halfspaces(), &[hs(&[(1, 1), (1, 1), (1, 1)])]);
        let reg = DoFRegion::no_csit(&cfg(3, &[1, 2]));
        assert_eq!(reg.halfspaces(), &[hs(&[(1, 2), (1, 1)])]);
        let reg = DoFRegion::no_csit(&cfg(1, &[1, 1]));
        assert_eq!(reg.halfspaces(), &[hs(&[(1, 1), (1, 1)])]);
    }

    #[test]
    fn delayed_examples() {
        let reg = DoFRegion::delayed_csit(&cfg(2, &[1, 1, 1]));
        assert_eq!(
            reg.halfspaces(),
            &[
                hs(&[(1, 2), (1, 1), (1, 1)]),
                hs(&[(1, 1), (1, 2), (1, 1)]),
                hs(&[(1, 1), (1, 1), (1, 2)]),
            ]
        );
        let reg = DoFRegion::delayed_csit(&cfg(3, &[1, 2]));
        assert_eq!(reg.halfspaces(), &[hs(&[(1, 3), (1, 1)]), hs(&[(1, 2), (1, 3)])]);

        let c = cfg(1, &[1, 1, 1]);
        assert_eq!(
            DoFRegion::delayed_csit(&c).halfspaces(),
            DoFRegion::no_csit(&c).halfspaces()
        );
    }

    #[test]
    fn raw_outer_counts() {
        let c = cfg(2, &[1, 1, 1]);
        assert_eq!(DoFRegion::raw_outer_generated(&c), 6);
        assert_eq!(DoFRegion::raw_outer(&c).halfspaces().len(), 3);
        let c = cfg(3, &[1, 2]);
        assert_eq!(DoFRegion::raw_outer(&c).halfspaces().len(), 2);
        for c in [cfg(2, &[1, 1, 1]), cfg(4, &[1, 2, 3]), cfg(5, &[1, 1, 2, 4])] {
            let raw = DoFRegion::raw_outer(&c);
            for h in DoFRegion::delayed_csit(&c).halfspaces() {
                assert!(raw.halfspaces().contains(h));
            }
        }
    }

    #[test]
    fn redundancy_examples() {
        let c = cfg(2, &[1, 1, 1]);
        let reduced = DoFRegion::raw_outer(&c).remove_redundant().unwrap();
        let mut got = reduced.halfspaces().to_vec();
        let mut want = DoFRegion::delayed_csit(&c).halfspaces().to_vec();
        got.sort();
        want.sort();
        assert_eq!(got, want);

        let h = hs(&[(1, 1), (1, 2)]);
        let dup = DoFRegion {
            dim: 2,
            halfspaces: vec![h.clone(), h.clone()],
        };
        assert_eq!(dup.remove_redundant().unwrap().halfspaces(), &[h]);

        let c = cfg(4, &[1, 2, 3]);
        let reduced = DoFRegion::raw_outer(&c).remove_redundant().unwrap();
        assert!(reduced.equals(&DoFRegion::delayed_csit(&c)).unwrap());
        // the receiver-3 row is implied by the other two here
        assert_eq!(reduced.halfspaces().len(), 2);
        assert!(!reduced.halfspaces().contains(&hs(&[(1, 3), (1, 3), (1, 4)])));
    }

    #[test]
    fn witnesses_certify_kept_rows() {
        let c = cfg(4, &[1, 2, 3]);
        let (reduced, wit) = DoFRegion::raw_outer(&c).remove_redundant_with_witnesses().unwrap();
        for (i, w) in wit.iter().enumerate() {
            assert!(!reduced.halfspaces()[i].satisfied_by(w.coords()));
            for (j, h) in reduced.halfspaces().iter().enumerate() {
                if j != i {
                    assert!(h.satisfied_by(w.coords()));
                }
            }
        }
    }

    #[test]
    fn membership() {
        let c = cfg(2, &[1, 1, 1]);
        let p = pt(&[(2, 5), (2, 5), (2, 5)]);
        let delayed = DoFRegion::delayed_csit(&c);
        assert!(delayed.contains(&p).unwrap());
        for h in delayed.halfspaces() {
            assert_eq!(h.lhs(p.coords()), r(1, 1));
        }
        assert!(!DoFRegion::no_csit(&c).contains(&p).unwrap());
        assert!(delayed.contains(&DoFPoint::origin(3)).unwrap());
        assert_eq!(
            delayed.contains(&DoFPoint::origin(2)),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn vertex_examples() {
        let v = DoFRegion::delayed_csit(&cfg(3, &[1, 2])).vertices().unwrap();
        assert_eq!(
            v,
            vec![
                pt(&[(0, 1), (0, 1)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(12, 7), (3, 7)]),
                pt(&[(2, 1), (0, 1)])
            ]
        );
        let v = DoFRegion::no_csit(&cfg(2, &[1, 1, 1])).vertices().unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.contains(&pt(&[(0, 1), (0, 1), (1, 1)])));
        let line = DoFRegion::new(1, vec![hs(&[(1, 1)])]).unwrap();
        assert_eq!(line.vertices().unwrap(), vec![pt(&[(0, 1)]), pt(&[(1, 1)])]);

        let big = DoFRegion::new(9, vec![hs(&[(1, 1); 9])]).unwrap();
        assert_eq!(big.vertices(), Err(Error::DimensionGuard { max: 8, got: 9 }));
    }

    #[test]
    fn delayed_symmetric_vertices() {
        // on each coordinate face the remaining rows collapse to d_a + d_b <= 1
        let v = DoFRegion::delayed_csit(&cfg(2, &[1, 1, 1])).vertices().unwrap();
        assert_eq!(
            v,
            vec![
                pt(&[(0, 1), (0, 1), (0, 1)]),
                pt(&[(0, 1), (0, 1), (1, 1)]),
                pt(&[(0, 1), (1, 1), (0, 1)]),
                pt(&[(2, 5), (2, 5), (2, 5)]),
                pt(&[(1, 1), (0, 1), (0, 1)]),
            ]
        );
    }

    #[test]
    fn subset_and_equality() {
        let c = cfg(2, &[1, 1, 1]);
        let (no, del) = (DoFRegion::no_csit(&c), DoFRegion::delayed_csit(&c));
        assert!(no.is_subset(&del).unwrap());
        assert!(!del.is_subset(&no).unwrap());
        assert!(!no.equals(&del).unwrap());
        assert_eq!(del.vertex_outside(&no).unwrap(), Some(pt(&[(2, 5), (2, 5), (2, 5)])));

        let c = cfg(1, &[1, 1]);
        let (no, del) = (DoFRegion::no_csit(&c), DoFRegion::delayed_csit(&c));
        assert!(del.is_subset(&no).unwrap());
        assert!(del.equals(&no).unwrap());
        assert!(del.is_subset(&del).unwrap());
    }

    #[test]
    fn sum_dof() {
        assert_eq!(symmetric_sum_dof(2, 1, 3, CsitMode::Delayed), r(6, 5));
        assert_eq!(symmetric_sum_dof(2, 1, 2, CsitMode::Delayed), r(4, 3));
        assert_eq!(symmetric_sum_dof(1, 1, 3, CsitMode::Delayed), r(1, 1));
        assert_eq!(symmetric_sum_dof(1, 1, 3, CsitMode::NoCsit), r(1, 1));

        let c = cfg(2, &[1, 1, 1]);
        assert_eq!(DoFRegion::delayed_csit(&c).max_sum_dof().unwrap(), r(6, 5));
        assert_eq!(DoFRegion::no_csit(&c).max_sum_dof().unwrap(), r(1, 1));

        let zero = |k: usize| {
            let mut a = vec![r(0, 1); 3];
            a[k] = r(1, 1);
            HalfSpace::with_rhs(a, r(0, 1)).unwrap()
        };
        let flat = DoFRegion::new(3, vec![zero(0), zero(1), zero(2)]).unwrap();
        assert_eq!(flat.max_sum_dof().unwrap(), r(0, 1));
        assert_eq!(flat.vertices().unwrap(), vec![DoFPoint::origin(3)]);
    }

    #[test]
    fn json_round_trip() {
        let reg = DoFRegion::delayed_csit(&cfg(3, &[1, 2]));
        let text = serde_json::to_string(&reg.to_json()).unwrap();
        assert_eq!(text, r#"{"K":2,"halfspaces":[[[1,3],[1,1]],[[1,2],[1,3]]]}"#);
        let back: RegionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(DoFRegion::from_json(&back).unwrap(), reg);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("delayed".parse::<CsitMode>().unwrap(), CsitMode::Delayed);
        assert_eq!("noCSIT".parse::<CsitMode>().unwrap(), CsitMode::NoCsit);
        assert_eq!("no-csit".parse::<CsitMode>().unwrap(), CsitMode::NoCsit);
        assert!("full".parse::<CsitMode>().is_err());
    }
}
