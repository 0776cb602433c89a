use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Strictly increasing vector of positive lags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LagVector(Vec<usize>);

impl LagVector {
    pub fn new(lags: Vec<usize>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::InvalidInput("lag vector is empty".into()));
        }
        if lags[0] == 0 {
            return Err(Error::InvalidInput("lags must be positive".into()));
        }
        if let Some(w) = lags.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "lags must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self(lags))
    }

    /// `[1, 2, ..., n]`.
    pub fn consecutive(n: usize) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest lag.
    pub fn last(&self) -> usize {
        *self.0.last().expect("non-empty by construction")
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for LagVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for LagVector {
    type Err = Error;

    /// Parses comma- or semicolon-separated lags, e.g. `1,2,5`.
    fn from_str(s: &str) -> Result<Self> {
        let lags = s
            .split([',', ';'])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad lag {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lags)
    }
}

/// Regression lags `j` together with the lags `l` of the autocovariance equations used to fit them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LagSelection {
    j: LagVector,
    l: LagVector,
}

impl LagSelection {
    pub fn new(j: LagVector, l: LagVector) -> Result<Self> {
        if j.len() != l.len() {
            return Err(Error::InvalidInput(format!(
                "j has {} lags but l has {}",
                j.len(),
                l.len()
            )));
        }
        Ok(Self { j, l })
    }

    pub fn from_vecs(j: Vec<usize>, l: Vec<usize>) -> Result<Self> {
        Self::new(LagVector::new(j)?, LagVector::new(l)?)
    }

    /// `j = l`.
    pub fn matched(j: LagVector) -> Self {
        Self { l: j.clone(), j }
    }

    pub fn j(&self) -> &LagVector {
        &self.j
    }

    pub fn l(&self) -> &LagVector {
        &self.l
    }

    pub fn len(&self) -> usize {
        self.j.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest target lag touched when assembling the fitting system.
    pub fn max_target_lag(&self) -> usize {
        let j = self.j.as_slice();
        let l = self.l.as_slice();
        let cross = l
            .iter()
            .flat_map(|&ln| j.iter().map(move |&jm| ln.abs_diff(jm)))
            .max()
            .unwrap_or(0);
        cross.max(self.j.last()).max(self.l.last())
    }
}

impl fmt::Display for LagSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j={} l={}", self.j, self.l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(LagVector::new(vec![]).is_err());
        assert!(LagVector::new(vec![0, 1]).is_err());
        assert!(LagVector::new(vec![1, 1]).is_err());
        assert!(LagVector::new(vec![3, 2]).is_err());
        assert_eq!(LagVector::new(vec![1, 2, 5]).unwrap().last(), 5);
        assert!(LagSelection::from_vecs(vec![1, 2], vec![1]).is_err());
    }

    #[test]
    fn parse_and_display() {
        let v: LagVector = "1, 2,5".parse().unwrap();
        assert_eq!(v.as_slice(), &[1, 2, 5]);
        assert_eq!(v.to_string(), "[1,2,5]");
        assert_eq!("1;6;12".parse::<LagVector>().unwrap().as_slice(), &[1, 6, 12]);
        assert!("1,x".parse::<LagVector>().is_err());
    }

    #[test]
    fn max_target_lag_covers_cross_terms() {
        let s = LagSelection::from_vecs(vec![1, 2, 7], vec![1, 6, 12]).unwrap();
        assert_eq!(s.max_target_lag(), 12);
        let s = LagSelection::from_vecs(vec![1, 20], vec![1, 2]).unwrap();
        assert_eq!(s.max_target_lag(), 20);
    }
}
