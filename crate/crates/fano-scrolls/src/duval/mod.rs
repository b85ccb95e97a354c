//! Classification of isolated surface singularity germs into ADE types.
//!
//! Three independent methods are implemented: quasi-homogeneous weight
//! recognition, algebraic invariants (Milnor number, Hessian corank, cubic
//! factor structure), and explicit iterated blow-up resolution followed by
//! Dynkin graph recognition.

mod graph;
mod invariants;
mod isolated;
mod resolve;
mod tower;
mod weights;

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::poly::{PolyError, Polynomial};

pub use graph::{recognize_graph, DualGraph};
pub use invariants::classify_by_invariants;
pub use isolated::check_isolated;
pub use resolve::resolve;
pub use weights::{classify_by_weights, WeightMatch};

/// Simply laced family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdeFamily {
    A,
    D,
    E,
}

/// An ADE type `A_n (n>=1)`, `D_n (n>=4)`, `E_6/E_7/E_8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdeType {
    pub family: AdeFamily,
    pub index: u32,
}

impl AdeType {
    pub fn new(family: AdeFamily, index: u32) -> Option<AdeType> {
        let ok = match family {
            AdeFamily::A => index >= 1,
            AdeFamily::D => index >= 4,
            AdeFamily::E => (6..=8).contains(&index),
        };
        ok.then_some(AdeType { family, index })
    }

    pub fn a(n: u32) -> AdeType {
        AdeType::new(AdeFamily::A, n).expect("A_n needs n >= 1")
    }

    pub fn d(n: u32) -> AdeType {
        AdeType::new(AdeFamily::D, n).expect("D_n needs n >= 4")
    }

    pub fn e(n: u32) -> AdeType {
        AdeType::new(AdeFamily::E, n).expect("E_n needs n in 6..=8")
    }

    pub fn parse(text: &str) -> Option<AdeType> {
        if text.len() < 2 || !text.is_char_boundary(1) {
            return None;
        }
        let (fam, rest) = text.split_at(1);
        let index: u32 = rest.parse().ok()?;
        let family = match fam {
            "A" => AdeFamily::A,
            "D" => AdeFamily::D,
            "E" => AdeFamily::E,
            _ => return None,
        };
        AdeType::new(family, index)
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            AdeFamily::A => "A",
            AdeFamily::D => "D",
            AdeFamily::E => "E",
        };
        write!(f, "{}{}", fam, self.index)
    }
}

/// Outcome of classifying a germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// The germ has a non-vanishing linear part.
    Smooth,
    /// An isolated Du Val point of the given type.
    Ade(AdeType),
    /// Isolated, but not a rational double point.
    NotDuVal,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Smooth => write!(f, "smooth"),
            Classification::Ade(t) => write!(f, "{t}"),
            Classification::NotDuVal => write!(f, "not-du-val"),
        }
    }
}

/// Errors from the classification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DuvalError {
    #[error("germ does not vanish at the origin")]
    NotAGerm,
    #[error("the singular locus is positive-dimensional at the origin")]
    NonIsolated,
    #[error("Milnor computation did not stabilize; classification inconclusive")]
    Inconclusive,
    #[error("resolution exceeded the blow-up budget of {0}")]
    MaxBlowups(u32),
    #[error("the blow-up process left the rational double point range")]
    NotDuValConfiguration,
    #[error("germs must live in exactly three variables")]
    WrongVariableCount,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A polynomial surface germ at the origin of affine three-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Germ {
    poly: Polynomial,
}

impl Germ {
    /// Wrap a polynomial in `(x, y, z)` vanishing at the origin.
    pub fn new(poly: Polynomial) -> Result<Germ, DuvalError> {
        if poly.vars().len() != 3 {
            return Err(DuvalError::WrongVariableCount);
        }
        if !poly.constant_term().is_zero() {
            return Err(DuvalError::NotAGerm);
        }
        Ok(Germ { poly })
    }

    pub fn parse(text: &str) -> Result<Germ, DuvalError> {
        let poly = Polynomial::parse(text, &["x", "y", "z"])?;
        Germ::new(poly)
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// A germ with non-vanishing linear part is a smooth surface point.
    pub fn is_smooth_point(&self) -> bool {
        !self.poly.degree_part(1).is_zero()
    }
}

/// All three classification methods run on one germ.
#[derive(Debug, Clone)]
pub struct MethodOutcomes {
    pub smooth: bool,
    pub weights: Option<weights::WeightMatch>,
    pub invariants: Result<Classification, DuvalError>,
    pub resolution: Result<Classification, DuvalError>,
}

impl MethodOutcomes {
    /// Render one method outcome for reports.
    pub fn render(outcome: &Result<Classification, DuvalError>) -> String {
        match outcome {
            Ok(c) => c.to_string(),
            Err(DuvalError::NonIsolated) => "non-isolated".into(),
            Err(DuvalError::Inconclusive) => "inconclusive".into(),
            Err(e) => format!("error: {e}"),
        }
    }

    /// The computed type fed to downstream decisions: the invariant-based
    /// answer when available, otherwise the resolution answer.
    pub fn classified(&self) -> Option<Classification> {
        if self.smooth {
            return Some(Classification::Smooth);
        }
        match &self.invariants {
            Ok(c) => Some(*c),
            Err(_) => self.resolution.as_ref().ok().copied(),
        }
    }
}

/// Run quasi-homogeneous recognition, the invariant classifier, and the
/// blow-up resolution on one germ.
pub fn classify_all_methods(germ: &Germ, truncation: u32, max_blowups: u32) -> MethodOutcomes {
    if germ.is_smooth_point() {
        return MethodOutcomes {
            smooth: true,
            weights: None,
            invariants: Ok(Classification::Smooth),
            resolution: Ok(Classification::Smooth),
        };
    }
    let weights = classify_by_weights(germ).ok().flatten();
    let invariants = classify_by_invariants(germ, truncation);
    let resolution = match resolve(germ, max_blowups) {
        Ok(graph) => Ok(recognize_graph(&graph)),
        Err(DuvalError::NotDuValConfiguration) => Ok(Classification::NotDuVal),
        Err(e) => Err(e),
    };
    MethodOutcomes {
        smooth: false,
        weights,
        invariants,
        resolution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ade_type_display_and_parse() {
        assert_eq!(AdeType::a(5).to_string(), "A5");
        assert_eq!(AdeType::d(4).to_string(), "D4");
        assert_eq!(AdeType::e(7).to_string(), "E7");
        assert_eq!(AdeType::parse("E8"), Some(AdeType::e(8)));
        assert_eq!(AdeType::parse("D3"), None);
        assert_eq!(AdeType::parse("E9"), None);
        assert_eq!(AdeType::parse("A0"), None);
    }

    #[test]
    fn classification_rendering() {
        assert_eq!(Classification::Smooth.to_string(), "smooth");
        assert_eq!(Classification::Ade(AdeType::a(1)).to_string(), "A1");
        assert_eq!(Classification::NotDuVal.to_string(), "not-du-val");
    }

    #[test]
    fn germ_construction() {
        assert!(Germ::parse("x^2+y^2+z^2").is_ok());
        assert!(matches!(Germ::parse("1+x"), Err(DuvalError::NotAGerm)));
        assert!(Germ::parse("x+y^2").unwrap().is_smooth_point());
        assert!(!Germ::parse("x^2+y^2+z^2").unwrap().is_smooth_point());
    }
}
