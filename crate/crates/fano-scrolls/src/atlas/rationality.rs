//! The rationality decision cascade.
//!
//! For a trigonal case the general fiber of the natural fibration is a cubic
//! surface: a singular point defined over the function field of the base
//! gives a birational projection to the plane, so any case whose fiber germ
//! is singular is rational, and so is any case whose singular bisection
//! splits into two sections (the split forces base-field singular points).
//! For a hyperelliptic case the general fiber is a degree-2 del Pezzo
//! surface: a Du Val point of type D5 or worse, E6, E7, or A7 or longer
//! splits into enough exceptional components over the base field to force
//! Picard rank at least five on the minimal resolution, which is the
//! rationality range for the fiber. Everything else falls back to recorded
//! literature verdicts or stays unknown.

use serde::Serialize;

use crate::duval::{AdeFamily, AdeType, Classification};
use crate::scroll::{DivisorClass, Family, Scroll};

use super::enumerate::{CaseKind, FanoCase};
use super::tables;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rationality {
    pub verdict: String,
    pub method: String,
    #[serde(rename = "ref")]
    pub reference: String,
}

impl Rationality {
    fn rational(method: &str, reference: &str) -> Rationality {
        Rationality {
            verdict: "rational".into(),
            method: method.into(),
            reference: reference.into(),
        }
    }

    fn non_rational(reference: &str) -> Rationality {
        Rationality {
            verdict: "non-rational-general".into(),
            method: "literature".into(),
            reference: reference.into(),
        }
    }

    fn unknown() -> Rationality {
        Rationality {
            verdict: "unknown".into(),
            method: "none".into(),
            reference: String::new(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.verdict == "rational"
    }
}

/// A type strong enough for the degree-2 del Pezzo descent: D_{n>=5}, E6,
/// E7, or A_{k>=7}.
pub fn descent_applies(ade: AdeType) -> bool {
    match ade.family {
        AdeFamily::D => ade.index >= 5,
        AdeFamily::E => ade.index == 6 || ade.index == 7,
        AdeFamily::A => ade.index >= 7,
    }
}

/// The singular bisection of a trigonal case splits into two sections
/// exactly when the quadric in the last two coordinates multiplying `x1`
/// has coefficient forms of degree zero while the corresponding `x2`
/// monomials are absent from the system.
pub fn split_bisection(scroll: &Scroll, class: &DivisorClass) -> bool {
    if scroll.rank() != 4 {
        return false;
    }
    let d: Vec<i64> = scroll.degrees().iter().map(|&x| i64::from(x)).collect();
    let b = class.b;
    // The bisection exists: the x2-quadric monomials are not sections.
    let bisection_exists = d[1] + 2 * d[2] + b < 0;
    // It splits: the x1-quadric coefficient forms are constants.
    let split = d[0] + 2 * d[2] + b == 0 && d[0] + d[2] + d[3] + b == 0 && d[0] + 2 * d[3] + b == 0;
    bisection_exists && split
}

/// Decide the rationality of one case given the computed fiber germ type
/// (`None` when no germ is computed, e.g. the base-point-free rows).
pub fn rationality_verdict(case: &FanoCase, classified: Option<Classification>) -> Rationality {
    if let CaseKind::Scroll { scroll, class, .. } = &case.kind {
        match case.family {
            Family::Trigonal => {
                if let Some(Classification::Ade(_)) = classified {
                    return Rationality::rational(
                        "cubic-fibration-projection",
                        "projection from the base-field singular point of the general cubic surface fiber",
                    );
                }
                if split_bisection(scroll, class) {
                    return Rationality::rational(
                        "split-bisection",
                        "the singular bisection has constant coefficients and splits into two sections of base-field singular points",
                    );
                }
            }
            Family::Hyperelliptic => {
                if let Some(Classification::Ade(ade)) = classified {
                    if descent_applies(ade) {
                        return Rationality::rational(
                            "exceptional-locus-descent",
                            "the exceptional locus over the base field forces Picard rank at least five on the resolved degree-2 del Pezzo fiber",
                        );
                    }
                }
            }
        }
    }
    let literature = match case.family {
        Family::Hyperelliptic => tables::hyperelliptic_literature(),
        Family::Trigonal => tables::trigonal_literature(),
    };
    if let Some(entry) = literature.into_iter().find(|e| e.index == case.index) {
        return if entry.rational {
            Rationality::rational("literature", entry.reference)
        } else {
            Rationality::non_rational(entry.reference)
        };
    }
    Rationality::unknown()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::enumerate::find_case;

    #[test]
    fn split_bisection_rows() {
        // Exactly the six recorded rows split.
        let mut split = Vec::new();
        for case in crate::atlas::enumerate::enumerate_trigonal() {
            if let CaseKind::Scroll { scroll, class, .. } = &case.kind {
                if split_bisection(scroll, class) {
                    split.push(case.index);
                }
            }
        }
        assert_eq!(split, vec![17, 19, 26, 28, 36, 45]);
    }

    #[test]
    fn descent_set() {
        assert!(descent_applies(AdeType::d(5)));
        assert!(descent_applies(AdeType::e(7)));
        assert!(descent_applies(AdeType::a(7)));
        assert!(!descent_applies(AdeType::d(4)));
        assert!(!descent_applies(AdeType::a(6)));
        assert!(!descent_applies(AdeType::e(8)));
    }

    #[test]
    fn literature_fallbacks() {
        let h5 = find_case("H5").unwrap();
        let v = rationality_verdict(&h5, Some(Classification::Smooth));
        assert_eq!(v.verdict, "non-rational-general");

        let h9 = find_case("H9").unwrap();
        let v = rationality_verdict(&h9, None);
        assert!(v.is_rational());

        let h30 = find_case("H30").unwrap();
        // A5 is below the descent range: no computable verdict.
        let v = rationality_verdict(&h30, Some(Classification::Ade(AdeType::a(5))));
        assert_eq!(v.verdict, "unknown");

        let h33 = find_case("H33").unwrap();
        let v = rationality_verdict(&h33, Some(Classification::Ade(AdeType::e(7))));
        assert_eq!(v.method, "exceptional-locus-descent");
    }
}
