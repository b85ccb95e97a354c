//! Invariant-based classification: Milnor number, Hessian corank, and the
//! factor structure of the cubic part on the Hessian kernel.
//!
//! For corank 0 the germ is an ordinary double point. For corank 1 it is
//! `A_mu`. For corank 2 the quadratic part reduces to a single square and
//! the splitting lemma leaves a plane cubic on the two kernel directions:
//! three distinct roots give `D_4`, exactly two give `D_mu`, a perfect cube
//! gives `E_mu` for `mu` in 6..8, and a vanishing cubic is beyond ADE.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::milnor::{milnor_number_with_retry, MilnorResult};
use crate::poly::Polynomial;

use super::{check_isolated, AdeType, Classification, DuvalError, Germ};

/// Classify a germ from `(mu, corank, cubic factors)`.
pub fn classify_by_invariants(germ: &Germ, truncation: u32) -> Result<Classification, DuvalError> {
    if germ.is_smooth_point() {
        return Ok(Classification::Smooth);
    }
    if !check_isolated(germ)? {
        return Err(DuvalError::NonIsolated);
    }
    let mu = match milnor_number_with_retry(germ.poly(), truncation)? {
        MilnorResult::Mu(mu) => mu,
        MilnorResult::NotIsolated => return Err(DuvalError::NonIsolated),
        MilnorResult::NotConverged => return Err(DuvalError::Inconclusive),
    };
    let mu32 = u32::try_from(mu).map_err(|_| DuvalError::Inconclusive)?;
    match germ.poly().hessian_corank() {
        0 => {
            debug_assert_eq!(mu, 1);
            Ok(Classification::Ade(AdeType::a(1)))
        }
        1 => {
            if mu32 >= 2 {
                Ok(Classification::Ade(AdeType::a(mu32)))
            } else {
                Err(DuvalError::Inconclusive)
            }
        }
        2 => {
            let kernel = germ.poly().hessian_kernel();
            debug_assert_eq!(kernel.len(), 2);
            let cubic = restrict_cubic(germ.poly(), &kernel[0], &kernel[1]);
            match distinct_root_count(&cubic) {
                None => Ok(Classification::NotDuVal),
                Some(3) => {
                    if mu == 4 {
                        Ok(Classification::Ade(AdeType::d(4)))
                    } else {
                        Err(DuvalError::Inconclusive)
                    }
                }
                Some(2) => {
                    if mu32 >= 5 {
                        Ok(Classification::Ade(AdeType::d(mu32)))
                    } else {
                        Err(DuvalError::Inconclusive)
                    }
                }
                Some(1) => match mu {
                    6 | 7 | 8 => Ok(Classification::Ade(AdeType::e(mu32))),
                    _ => Ok(Classification::NotDuVal),
                },
                Some(_) => unreachable!("a nonzero binary cubic has 1..=3 roots"),
            }
        }
        _ => Ok(Classification::NotDuVal),
    }
}

/// Binary cubic obtained by restricting the degree-3 part of `f` to the
/// plane spanned by `v1` and `v2`.
fn restrict_cubic(f: &Polynomial, v1: &[BigRational], v2: &[BigRational]) -> [BigRational; 4] {
    let cubic = f.degree_part(3);
    let mut coeffs = [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ];
    // Expand cubic(s*v1 + t*v2) term by term; collect s^3, s^2 t, s t^2, t^3.
    for (m, c) in cubic.terms() {
        // Multinomial expansion over the (at most three) participating slots.
        let mut partial: Vec<(u32, BigRational)> = vec![(0, c.clone())];
        for (slot, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut next: Vec<(u32, BigRational)> = Vec::new();
            for (s_deg, coef) in &partial {
                // (v1[slot] s + v2[slot] t)^e
                for k in 0..=e {
                    let binom = binomial(e, k);
                    let term = coef
                        * &pow_rat(&v1[slot], k)
                        * &pow_rat(&v2[slot], e - k)
                        * BigRational::from(BigInt::from(binom));
                    if term.is_zero() {
                        continue;
                    }
                    merge(&mut next, s_deg + k, term);
                }
            }
            partial = next;
        }
        for (s_deg, coef) in partial {
            coeffs[3 - s_deg as usize] = &coeffs[3 - s_deg as usize] + &coef;
        }
    }
    // coeffs[i] multiplies s^(3-i) t^i.
    coeffs
}

fn merge(acc: &mut Vec<(u32, BigRational)>, deg: u32, term: BigRational) {
    for (d, c) in acc.iter_mut() {
        if *d == deg {
            *c = &*c + &term;
            return;
        }
    }
    acc.push((deg, term));
}

fn pow_rat(base: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::from(BigInt::from(1));
    for _ in 0..e {
        acc *= base;
    }
    acc
}

fn binomial(n: u32, k: u32) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * u64::from(n - i) / u64::from(i + 1);
    }
    acc
}

/// Number of distinct roots of a binary cubic in the projective line over the
/// complex numbers, by discriminant and the quadratic Hessian covariant;
/// `None` for the zero form. Exact, no numeric root finding.
fn distinct_root_count(c: &[BigRational; 4]) -> Option<u8> {
    let [a, b, cc, d] = c.clone();
    if a.is_zero() && b.is_zero() && cc.is_zero() && d.is_zero() {
        return None;
    }
    let i18 = BigRational::from(BigInt::from(18));
    let i4 = BigRational::from(BigInt::from(4));
    let i27 = BigRational::from(BigInt::from(27));
    let disc = &(&(&(&(&i18 * &a) * &b) * &cc) * &d)
        - &(&(&(&i4 * &b) * &b) * &(&b * &d))
        + &(&(&b * &b) * &(&cc * &cc))
        - &(&(&(&i4 * &a) * &cc) * &(&cc * &cc))
        - &(&(&(&i27 * &a) * &a) * &(&d * &d));
    if !disc.is_zero() {
        return Some(3);
    }
    let i3 = BigRational::from(BigInt::from(3));
    let i9 = BigRational::from(BigInt::from(9));
    let h0 = &(&b * &b) - &(&(&i3 * &a) * &cc);
    let h1 = &(&b * &cc) - &(&(&i9 * &a) * &d);
    let h2 = &(&cc * &cc) - &(&(&i3 * &b) * &d);
    if h0.is_zero() && h1.is_zero() && h2.is_zero() {
        Some(1)
    } else {
        Some(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(text: &str) -> Classification {
        classify_by_invariants(&Germ::parse(text).unwrap(), 14).unwrap()
    }

    #[test]
    fn ordinary_double_point() {
        assert_eq!(classify("x^2+y^2+z^2"), Classification::Ade(AdeType::a(1)));
    }

    #[test]
    fn resolution_case_germ_is_a5_by_invariants() {
        let got = classify("x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+y^3");
        assert_eq!(got, Classification::Ade(AdeType::a(5)));
    }

    #[test]
    fn e7_normal_form() {
        assert_eq!(classify("x^2+y^3+y*z^3"), Classification::Ade(AdeType::e(7)));
    }

    #[test]
    fn normal_forms_by_invariants() {
        for n in 1..=8u32 {
            assert_eq!(
                classify(&format!("x^2+y^2+z^{}", n + 1)),
                Classification::Ade(AdeType::a(n)),
                "A_{n}"
            );
        }
        for n in 4..=8u32 {
            assert_eq!(
                classify(&format!("x^2+y^2*z+z^{}", n - 1)),
                Classification::Ade(AdeType::d(n)),
                "D_{n}"
            );
        }
        assert_eq!(classify("x^2+y^3+z^4"), Classification::Ade(AdeType::e(6)));
        assert_eq!(classify("x^2+y^3+z^5"), Classification::Ade(AdeType::e(8)));
    }

    #[test]
    fn beyond_ade_is_rejected() {
        // Perfect-cube cubic with mu = 12: outside the E range.
        assert_eq!(classify("x^2+y^3+z^7"), Classification::NotDuVal);
        // Corank 3.
        assert_eq!(classify("x^3+y^3+z^3"), Classification::NotDuVal);
        // Corank 2 with zero cubic on the kernel.
        assert_eq!(classify("x^2+y^4+z^4"), Classification::NotDuVal);
    }

    #[test]
    fn smooth_short_circuit() {
        assert_eq!(classify("x+y^3"), Classification::Smooth);
    }

    #[test]
    fn non_isolated_reports_error() {
        let got = classify_by_invariants(&Germ::parse("x^2+y^2").unwrap(), 14);
        assert_eq!(got, Err(DuvalError::NonIsolated));
    }

    #[test]
    fn cubic_root_counts() {
        let q = |n: i64| BigRational::from(BigInt::from(n));
        // s t (s + t): roots 0, infinity, -1.
        assert_eq!(
            distinct_root_count(&[q(0), q(1), q(1), q(0)]),
            Some(3)
        );
        // s^2 t: double root + simple root.
        assert_eq!(distinct_root_count(&[q(0), q(1), q(0), q(0)]), Some(2));
        // (s + t)^3.
        assert_eq!(distinct_root_count(&[q(1), q(3), q(3), q(1)]), Some(1));
        assert_eq!(distinct_root_count(&[q(0), q(0), q(0), q(0)]), None);
    }
}
