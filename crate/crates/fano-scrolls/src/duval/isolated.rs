//! Exact isolatedness test for the singular locus of a germ.
//!
//! The three partials are eliminated pairwise in each variable; the gcd of
//! the three resultants bounds the corresponding coordinate projection of the
//! singular locus. A genuine curve of singular points through the origin
//! projects to a plane curve through the origin in at least two of the three
//! directions, so the test declares the germ non-isolated exactly when two or
//! more direction gcds vanish at the origin (or vanish identically).

use num_traits::Zero;

use crate::poly::{PolyError, Polynomial};
use crate::resultant::{poly_gcd_many, sylvester_resultant};

use super::{DuvalError, Germ};

/// True when the only common zero of the three partials near the origin is
/// the origin itself.
pub fn check_isolated(germ: &Germ) -> Result<bool, DuvalError> {
    let f = germ.poly();
    if f.is_zero() {
        return Err(DuvalError::Poly(PolyError::ZeroPolynomial));
    }
    let partials = f.partials();
    let vars: Vec<String> = f.vars().to_vec();
    let mut bad_directions = 0;
    for v in &vars {
        // Constraint curves in the remaining two variables: partials free of
        // `v` constrain the projection directly; pairs with positive degree
        // contribute their resultant.
        let vi = f.var_index(v).unwrap();
        let mut constraints: Vec<Polynomial> = Vec::new();
        let mut saw_vanishing = false;
        let positive: Vec<&Polynomial> = partials
            .iter()
            .filter(|p| {
                if p.is_zero() {
                    return false;
                }
                if p.degree_in(vi).unwrap_or(0) == 0 {
                    constraints.push((*p).clone());
                    false
                } else {
                    true
                }
            })
            .collect();
        for i in 0..positive.len() {
            for j in (i + 1)..positive.len() {
                let r = sylvester_resultant(positive[i], positive[j], v)?;
                if r.is_zero() {
                    saw_vanishing = true;
                } else {
                    constraints.push(r);
                }
            }
        }
        if constraints.is_empty() {
            // No usable constraint: either everything vanished identically
            // or every pairwise resultant did.
            bad_directions += 1;
            continue;
        }
        let _ = saw_vanishing;
        let g = poly_gcd_many(&constraints);
        if g.constant_term().is_zero() {
            bad_directions += 1;
        }
    }
    Ok(bad_directions < 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn isolated(text: &str) -> bool {
        check_isolated(&Germ::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn ordinary_double_point_is_isolated() {
        assert!(isolated("x^2+y^2+z^2"));
    }

    #[test]
    fn cylinder_is_not_isolated() {
        // Singular along the z-axis.
        assert!(!isolated("x^2+y^2"));
    }

    #[test]
    fn weighted_leading_part_of_trigonal_case_is_isolated() {
        assert!(isolated("x^2+x*z^2+y^2*z"));
    }

    #[test]
    fn normal_forms_are_isolated() {
        for n in 1..=8 {
            assert!(isolated(&format!("x^2+y^2+z^{}", n + 1)), "A_{n}");
        }
        for n in 4..=8 {
            assert!(isolated(&format!("x^2+y^2*z+z^{}", n - 1)), "D_{n}");
        }
        assert!(isolated("x^2+y^3+z^4"));
        assert!(isolated("x^2+y^3+y*z^3"));
        assert!(isolated("x^2+y^3+z^5"));
    }

    #[test]
    fn whitney_umbrella_is_not_isolated() {
        assert!(!isolated("x^2+y^2*z"));
    }

    #[test]
    fn cone_times_line_is_not_isolated() {
        assert!(!isolated("x^2+y^3"));
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        let germ = Germ::new(Polynomial::zero(&["x", "y", "z"])).unwrap();
        assert!(check_isolated(&germ).is_err());
    }
}
