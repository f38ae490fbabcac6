use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{is_ramsey, Graph};

/// Identifies a class of Ramsey graphs such as `R(3,9,32,e<=112)`.
///
/// `min_edges` is only used by exact-edge classes (`e=63`), which appear in
/// pair-gluing plans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CensusSpec {
    pub s: usize,
    pub t: usize,
    pub n: usize,
    pub max_edges: Option<usize>,
    pub min_edges: Option<usize>,
}

impl CensusSpec {
    pub fn new(s: usize, t: usize, n: usize) -> Self {
        CensusSpec { s, t, n, max_edges: None, min_edges: None }
    }

    pub fn triangle_free(t: usize, n: usize) -> Self {
        Self::new(3, t, n)
    }

    pub fn with_max_edges(mut self, e: usize) -> Self {
        self.max_edges = Some(e);
        self
    }

    pub fn with_exact_edges(mut self, e: usize) -> Self {
        self.max_edges = Some(e);
        self.min_edges = Some(e);
        self
    }

    pub fn edges_ok(&self, e: usize) -> bool {
        self.max_edges.is_none_or(|m| e <= m) && self.min_edges.is_none_or(|m| e >= m)
    }

    /// Membership: order, edge range and the Ramsey property.
    pub fn contains(&self, g: &Graph) -> bool {
        g.order() == self.n && self.edges_ok(g.edge_count()) && is_ramsey(g, self.s, self.t)
    }

    /// Edge bound implied by the parameters alone: in a triangle-free graph
    /// every neighbourhood is independent, so degrees are below `t`.
    pub fn effective_max_edges(&self) -> usize {
        let implied = if self.s == 3 { self.n * self.t.saturating_sub(1) / 2 } else { self.n * self.n.saturating_sub(1) / 2 };
        self.max_edges.map_or(implied, |m| m.min(implied))
    }
}

/// Known values of `R(3, t)`.
pub fn ramsey_number_3(t: usize) -> Option<usize> {
    const KNOWN: [usize; 10] = [1, 1, 2, 6, 9, 14, 18, 23, 28, 36];
    KNOWN.get(t).copied()
}

impl fmt::Display for CensusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R({},{},{}", self.s, self.t, self.n)?;
        match (self.min_edges, self.max_edges) {
            (Some(lo), Some(hi)) if lo == hi => write!(f, ",e={hi}")?,
            (Some(lo), Some(hi)) => write!(f, ",e>={lo},e<={hi}")?,
            (Some(lo), None) => write!(f, ",e>={lo}")?,
            (None, Some(hi)) => write!(f, ",e<={hi}")?,
            (None, None) => {}
        }
        write!(f, ")")
    }
}

impl FromStr for CensusSpec {
    type Err = Error;

    /// Parses `R(s,t,n)`, optionally followed by `,e<=E`, `,e=E` or `,e>=E`
    /// terms. The leading `R` is optional.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::BadSpec(text.to_string());
        let body = text.trim();
        let body = body.strip_prefix('R').unwrap_or(body);
        let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() < 3 {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let mut spec = CensusSpec::new(num(parts[0])?, num(parts[1])?, num(parts[2])?);
        for term in &parts[3..] {
            if let Some(v) = term.strip_prefix("e<=") {
                spec.max_edges = Some(num(v)?);
            } else if let Some(v) = term.strip_prefix("e>=") {
                spec.min_edges = Some(num(v)?);
            } else if let Some(v) = term.strip_prefix("e=") {
                let e = num(v)?;
                spec.max_edges = Some(e);
                spec.min_edges = Some(e);
            } else {
                return Err(bad());
            }
        }
        if spec.s == 0 || spec.t == 0 {
            return Err(bad());
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for text in ["R(3,9,32,e<=112)", "R(3,8,24,e=63)", "R(3,5,13)", "R(3,7,16,e>=20,e<=24)"] {
            let spec: CensusSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        let s: CensusSpec = "(3, 6, 17)".parse().unwrap();
        assert_eq!(s, CensusSpec::new(3, 6, 17));
        assert!("R(3,6)".parse::<CensusSpec>().is_err());
        assert!("R(3,6,17,x=3)".parse::<CensusSpec>().is_err());
        assert!("R(3,6,17".parse::<CensusSpec>().is_err());
    }

    #[test]
    fn membership() {
        let c5 = Graph::cycle(5);
        assert!(CensusSpec::new(3, 3, 5).contains(&c5));
        assert!(!CensusSpec::new(3, 3, 5).with_max_edges(4).contains(&c5));
        assert!(CensusSpec::new(3, 3, 5).with_exact_edges(5).contains(&c5));
        assert!(!CensusSpec::new(3, 4, 3).contains(&Graph::complete(3)));
    }

    #[test]
    fn small_ramsey_numbers() {
        assert_eq!(ramsey_number_3(3), Some(6));
        assert_eq!(ramsey_number_3(9), Some(36));
        assert_eq!(ramsey_number_3(10), None);
    }

    #[test]
    fn implied_edge_bound() {
        assert_eq!(CensusSpec::new(3, 7, 22).effective_max_edges(), 66);
        assert_eq!(CensusSpec::new(3, 7, 22).with_max_edges(60).effective_max_edges(), 60);
    }
}
