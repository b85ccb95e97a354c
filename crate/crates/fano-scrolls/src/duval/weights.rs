//! Quasi-homogeneous weight recognition.
//!
//! A germ is tested against the candidate weight triples of the ADE normal
//! forms: `(n+1, n+1, 2)` for `A_n`, `(n-1, n-2, 2)` for `D_n`, and
//! `(6,4,3)`, `(9,6,4)`, `(15,10,6)` for `E_6`, `E_7`, `E_8`. A candidate is
//! accepted when the lowest-weight part of the germ has an isolated singular
//! point and the weighted degree `d` satisfies `2w_i <= d` for each variable
//! and `w_x + w_y + w_z > d`. Families are searched in the order A (index
//! ascending), D (index ascending), E6, E7, E8, with the six variable
//! assignments per candidate in lexicographic order; the first hit wins.

use crate::poly::WeightVector;

use super::{check_isolated, AdeType, DuvalError, Germ};

/// The successful candidate, normalized to primitive weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatch {
    pub ade: AdeType,
    pub weights: WeightVector,
    pub degree: u64,
}

/// Search the normal-form weight candidates; `None` when no candidate
/// certifies the germ.
pub fn classify_by_weights(germ: &Germ) -> Result<Option<WeightMatch>, DuvalError> {
    if germ.is_smooth_point() {
        return Ok(None);
    }
    if !check_isolated(germ)? {
        return Err(DuvalError::NonIsolated);
    }
    let total_degree = germ.poly().total_degree().unwrap_or(0) as u64;
    let n_max = (total_degree + 2).min(24) as u32;
    let mut candidates: Vec<(AdeType, [u64; 3])> = Vec::new();
    for n in 1..=n_max {
        candidates.push((AdeType::a(n), [u64::from(n) + 1, u64::from(n) + 1, 2]));
    }
    for n in 4..=n_max.max(4) {
        candidates.push((AdeType::d(n), [u64::from(n) - 1, u64::from(n) - 2, 2]));
    }
    candidates.push((AdeType::e(6), [6, 4, 3]));
    candidates.push((AdeType::e(7), [9, 6, 4]));
    candidates.push((AdeType::e(8), [15, 10, 6]));

    let var_names: Vec<String> = germ.poly().vars().to_vec();
    for (ade, triple) in candidates {
        for assignment in distinct_permutations(triple) {
            let w = WeightVector::new(
                var_names
                    .iter()
                    .cloned()
                    .zip(assignment.iter().copied()),
            )
            .expect("normal form weights are positive");
            let (d, leading) = germ.poly().weighted_order(&w)?;
            if assignment.iter().any(|&wi| 2 * wi > d) {
                continue;
            }
            if assignment.iter().sum::<u64>() <= d {
                continue;
            }
            // The leading part must itself be singular at the origin with an
            // isolated singular point.
            if !leading.degree_part(1).is_zero() {
                continue;
            }
            let lead_germ = Germ::new(leading).expect("leading part vanishes at origin");
            if !check_isolated(&lead_germ)? {
                continue;
            }
            let g = gcd3(assignment);
            return Ok(Some(WeightMatch {
                ade,
                weights: w.primitive(),
                degree: d / g,
            }));
        }
    }
    Ok(None)
}

fn gcd3(t: [u64; 3]) -> u64 {
    num_integer::gcd(num_integer::gcd(t[0], t[1]), t[2]).max(1)
}

/// All distinct permutations of a triple, in lexicographic order.
fn distinct_permutations(t: [u64; 3]) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    let idx = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for p in idx {
        let cand = [t[p[0]], t[p[1]], t[p[2]]];
        if !out.contains(&cand) {
            out.push(cand);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(text: &str) -> Option<WeightMatch> {
        classify_by_weights(&Germ::parse(text).unwrap()).unwrap()
    }

    fn weights_of(m: &WeightMatch) -> Vec<u64> {
        m.weights.iter().map(|(_, w)| w).collect()
    }

    #[test]
    fn hyperelliptic_fiber_germ_is_a5_with_halved_weights() {
        let m = classify("x^2+y^4+y^3*z+y^3+y^2*z^2+y^2*z+y^2+y*z^3").unwrap();
        assert_eq!(m.ade, AdeType::a(5));
        assert_eq!(weights_of(&m), vec![3, 3, 1]);
        assert_eq!(m.degree, 6);
    }

    #[test]
    fn trigonal_fiber_germ_is_d5() {
        let m = classify("x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*z^2+y^3+y^2*z").unwrap();
        assert_eq!(m.ade, AdeType::d(5));
        assert_eq!(weights_of(&m), vec![4, 3, 2]);
    }

    #[test]
    fn resolution_case_has_no_good_weights() {
        let got = classify("x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+y^3");
        assert_eq!(got, None);
    }

    #[test]
    fn normal_forms_recover_their_weights() {
        let cases: Vec<(String, AdeType, Vec<u64>)> = vec![
            ("x^2+y^2+z^2".into(), AdeType::a(1), vec![1, 1, 1]),
            ("x^2+y^2+z^3".into(), AdeType::a(2), vec![3, 3, 2]),
            ("x^2+y^2+z^4".into(), AdeType::a(3), vec![2, 2, 1]),
            ("x^2+y^2*z+z^3".into(), AdeType::d(4), vec![3, 2, 2]),
            ("x^2+y^2*z+z^4".into(), AdeType::d(5), vec![4, 3, 2]),
            ("x^2+y^3+z^4".into(), AdeType::e(6), vec![6, 4, 3]),
            ("x^2+y^3+y*z^3".into(), AdeType::e(7), vec![9, 6, 4]),
            ("x^2+y^3+z^5".into(), AdeType::e(8), vec![15, 10, 6]),
        ];
        for (text, expected, ws) in cases {
            let m = classify(&text).unwrap_or_else(|| panic!("{text} not recognized"));
            assert_eq!(m.ade, expected, "{text}");
            let mut sorted = ws.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(m.weights.sorted_weights(), sorted, "{text}");
        }
    }

    #[test]
    fn permutation_equivariant() {
        // Same germ with variables relabeled classifies identically.
        let m1 = classify("x^2+y^2*z+z^4").unwrap();
        let m2 = classify("z^2+x^2*y+y^4").unwrap();
        assert_eq!(m1.ade, m2.ade);
        assert_eq!(
            m1.weights.sorted_weights(),
            m2.weights.sorted_weights()
        );
    }

    #[test]
    fn smooth_point_yields_none() {
        assert_eq!(classify("x+y^2+z^3"), None);
    }

    #[test]
    fn non_isolated_is_an_error() {
        let got = classify_by_weights(&Germ::parse("x^2+y^2").unwrap());
        assert_eq!(got, Err(DuvalError::NonIsolated));
    }
}
