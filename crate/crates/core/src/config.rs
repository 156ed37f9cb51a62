//! Validated antenna configurations, DoF points and exact rationals.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::Ratio<i64>;

/// Raw on-disk configuration, `{"M": int, "N": [int, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSpec {
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "N")]
    pub n: Vec<i64>,
}

/// Transmitter antenna count `M` and receiver antenna counts `N_1 <= ... <= N_K`.
///
/// Receivers are relabeled so that antenna counts ascend. `labels[k]` is the
/// user-facing (input) index of canonical receiver `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntennaConfig {
    m: u32,
    n: Vec<u32>,
    labels: Vec<usize>,
}

impl AntennaConfig {
    /// Validate raw antenna counts and sort receivers ascending.
    pub fn new(m: i64, n: &[i64]) -> Result<Self> {
        if n.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 receivers, got {}",
                n.len()
            )));
        }
        if m < 1 {
            return Err(Error::InvalidConfig(format!("M must be positive, got {m}")));
        }
        if let Some((i, v)) = n.iter().enumerate().find(|(_, v)| **v < 1) {
            return Err(Error::InvalidConfig(format!("N[{i}] must be positive, got {v}")));
        }
        let to_u32 =
            |v: i64| u32::try_from(v).map_err(|_| Error::InvalidConfig(format!("antenna count {v} too large")));
        let m = to_u32(m)?;
        let mut labels: Vec<usize> = (0..n.len()).collect();
        labels.sort_by_key(|&i| n[i]);
        let n = labels.iter().map(|&i| to_u32(n[i])).collect::<Result<Vec<_>>>()?;
        Ok(Self { m, n, labels })
    }

    pub fn from_spec(spec: &ConfigSpec) -> Result<Self> {
        Self::new(spec.m, &spec.n)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ConfigSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_spec(&spec)
    }

    /// Canonical (sorted) form as a raw spec.
    pub fn to_spec(&self) -> ConfigSpec {
        ConfigSpec {
            m: i64::from(self.m),
            n: self.n.iter().map(|&v| i64::from(v)).collect(),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Ascending receiver antenna counts.
    pub fn n(&self) -> &[u32] {
        &self.n
    }

    /// Number of receivers.
    pub fn k(&self) -> usize {
        self.n.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Reorder a sequence indexed by canonical receiver into user order.
    pub fn to_user_order<T: Clone>(&self, canonical: &[T]) -> Vec<T> {
        assert_eq!(canonical.len(), self.k());
        let mut out = canonical.to_vec();
        for (k, &label) in self.labels.iter().enumerate() {
            out[label] = canonical[k].clone();
        }
        out
    }

    /// Reorder a sequence indexed by user label into canonical order.
    pub fn to_canonical_order<T: Clone>(&self, user: &[T]) -> Vec<T> {
        assert_eq!(user.len(), self.k());
        self.labels.iter().map(|&label| user[label].clone()).collect()
    }

    /// Whether delayed CSIT enlarges the region (`N_2 < M`).
    pub fn delayed_csit_useful(&self) -> bool {
        self.n[1] < self.m
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M={}; N=", self.m)?;
        for (i, v) in self.n.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A DoF tuple `(d_{-1}, ..., d_{-K})`; entry `i` belongs to the message
/// not wanted by receiver `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DoFPoint(Vec<Rational>);

impl DoFPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if let Some(c) = coords.iter().find(|c| c.is_negative()) {
            return Err(Error::Parse(format!("DoF coordinates must be nonnegative, got {c}")));
        }
        Ok(Self(coords))
    }

    pub fn origin(k: usize) -> Self {
        Self(vec![Rational::zero(); k])
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().copied().sum()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl fmt::Display for DoFPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for DoFPoint {
    type Err = Error;

    /// Parses `"2/5,2/5,2/5"`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = body
            .split(',')
            .map(|part| parse_rational(part.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}

/// Twelve-digit decimal rendering for plotting tools.
pub fn rational_to_decimal(r: &Rational) -> String {
    format!("{:.12}", *r.numer() as f64 / *r.denom() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_input_kept() {
        let cfg = AntennaConfig::new(2, &[1, 1, 1]).unwrap();
        assert_eq!(cfg.k(), 3);
        assert_eq!(cfg.n(), &[1, 1, 1]);
        assert_eq!(cfg.labels(), &[0, 1, 2]);
    }

    #[test]
    fn unsorted_input_relabeled() {
        let cfg = AntennaConfig::new(3, &[2, 1]).unwrap();
        assert_eq!(cfg.n(), &[1, 2]);
        assert_eq!(cfg.labels(), &[1, 0]);
        assert_eq!(cfg.to_user_order(&["a", "b"]), vec!["b", "a"]);
    }

    #[test]
    fn rejects_bad_counts() {
        assert!(matches!(AntennaConfig::new(2, &[0, 1]), Err(Error::InvalidConfig(_))));
        assert!(matches!(AntennaConfig::new(0, &[1, 1]), Err(Error::InvalidConfig(_))));
        assert!(matches!(AntennaConfig::new(2, &[1]), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn json_round_trip() {
        let cfg = AntennaConfig::from_json(r#"{"M": 3, "N": [3, 1, 2]}"#).unwrap();
        assert_eq!(cfg.n(), &[1, 2, 3]);
        let text = serde_json::to_string(&cfg.to_spec()).unwrap();
        assert_eq!(text, r#"{"M":3,"N":[1,2,3]}"#);
        assert!(AntennaConfig::from_json(r#"{"M": 3}"#).is_err());
    }

    #[test]
    fn point_parsing() {
        let p: DoFPoint = "(2/5, 2/5,2/5)".parse().unwrap();
        assert_eq!(p.to_string(), "(2/5,2/5,2/5)");
        assert_eq!(p.sum(), Rational::new(6, 5));
        assert!("1,-1".parse::<DoFPoint>().is_err());
        assert!("1,x".parse::<DoFPoint>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn validation_is_idempotent(m in 1i64..8, n in prop::collection::vec(1i64..8, 2..6)) {
                let cfg = AntennaConfig::new(m, &n).unwrap();
                let again = AntennaConfig::from_spec(&cfg.to_spec()).unwrap();
                prop_assert_eq!(again.m(), cfg.m());
                prop_assert_eq!(again.n(), cfg.n());
                let identity: Vec<usize> = (0..n.len()).collect();
                prop_assert_eq!(again.labels(), identity.as_slice());
            }

            #[test]
            fn permutation_round_trip(n in prop::collection::vec(1i64..8, 2..7), seq in prop::collection::vec(any::<i32>(), 7)) {
                let cfg = AntennaConfig::new(4, &n).unwrap();
                let seq = &seq[..n.len()];
                prop_assert_eq!(cfg.to_user_order(&cfg.to_canonical_order(seq)), seq.to_vec());
                prop_assert_eq!(cfg.to_canonical_order(&cfg.to_user_order(seq)), seq.to_vec());
                // canonical order of the user N is sorted
                let canon = cfg.to_canonical_order(&n);
                prop_assert!(canon.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
}
