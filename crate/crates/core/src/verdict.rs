use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Why a numerical run stopped before its horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BreakdownCause {
    NegativeDensity,
    CflCollapse,
    GradientThreshold,
    NonFinite,
}

impl BreakdownCause {
    pub fn as_str(self) -> &'static str {
        match self {
            BreakdownCause::NegativeDensity => "NegativeDensity",
            BreakdownCause::CflCollapse => "CflCollapse",
            BreakdownCause::GradientThreshold => "GradientThreshold",
            BreakdownCause::NonFinite => "NonFinite",
        }
    }
}

impl fmt::Display for BreakdownCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BreakdownCause {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "NegativeDensity" => Ok(BreakdownCause::NegativeDensity),
            "CflCollapse" => Ok(BreakdownCause::CflCollapse),
            "GradientThreshold" => Ok(BreakdownCause::GradientThreshold),
            "NonFinite" => Ok(BreakdownCause::NonFinite),
            other => Err(Error::config("verdict", format!("unknown breakdown cause `{other}`"))),
        }
    }
}

/// Outcome of a lifespan classification or of a simulation.
///
/// `Global` from a simulation means "no breakdown up to the horizon"; the
/// horizon itself is carried by the run output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Global,
    FiniteLifespan(f64),
    NumericalBreakdown { t: f64, cause: BreakdownCause },
}

impl Verdict {
    pub fn is_global(&self) -> bool {
        matches!(self, Verdict::Global)
    }

    /// Lifespan or breakdown time, if any.
    pub fn time(&self) -> Option<f64> {
        match *self {
            Verdict::Global => None,
            Verdict::FiniteLifespan(t) => Some(t),
            Verdict::NumericalBreakdown { t, .. } => Some(t),
        }
    }
}

/// Formats as `Global`, `FiniteLifespan:<T>` or `NumericalBreakdown:<t>:<cause>`,
/// with times in shortest round-trip decimal form.
impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Global => f.write_str("Global"),
            Verdict::FiniteLifespan(t) => write!(f, "FiniteLifespan:{t:?}"),
            Verdict::NumericalBreakdown { t, cause } => {
                write!(f, "NumericalBreakdown:{t:?}:{cause}")
            }
        }
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::config("verdict", format!("cannot parse verdict `{s}`"));
        let mut parts = s.trim().split(':');
        match parts.next() {
            Some("Global") => Ok(Verdict::Global),
            Some("FiniteLifespan") => {
                let t = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                Ok(Verdict::FiniteLifespan(t))
            }
            Some("NumericalBreakdown") => {
                let t = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let cause = parts.next().ok_or_else(bad)?.parse()?;
                Ok(Verdict::NumericalBreakdown { t, cause })
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips() {
        for v in [
            Verdict::Global,
            Verdict::FiniteLifespan(35.0),
            Verdict::FiniteLifespan(0.1 + 0.2),
            Verdict::NumericalBreakdown {
                t: 12.5,
                cause: BreakdownCause::GradientThreshold,
            },
        ] {
            let text = v.to_string();
            assert_eq!(text.parse::<Verdict>().unwrap(), v, "{text}");
        }
        assert_eq!(Verdict::FiniteLifespan(35.0).to_string(), "FiniteLifespan:35.0");
    }

    #[test]
    fn rejects_garbage() {
        assert!("Sometimes".parse::<Verdict>().is_err());
        assert!("NumericalBreakdown:1.0:Gremlins".parse::<Verdict>().is_err());
    }
}
