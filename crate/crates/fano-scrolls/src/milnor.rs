//! Milnor numbers by exact linear algebra on the truncated local algebra.
//!
//! The dimension of `Q[[x..]]/(jacobian ideal + m^D)` is computed for the
//! requested truncation degree `D` and for `D+1`; when the two agree the
//! common value is reported as the Milnor number. A strictly growing
//! dimension across three consecutive truncations is the signature of a
//! non-isolated singularity.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::{Monomial, PolyError, Polynomial};

/// Outcome of the truncated local-algebra computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MilnorResult {
    /// Stabilized dimension of the Milnor algebra.
    Mu(u64),
    /// Dimensions kept moving between truncations without linear growth.
    NotConverged,
    /// Dimension grows linearly with the truncation degree.
    NotIsolated,
}

/// Milnor number of `f` at the origin, truncating the local algebra at the
/// given total degree.
pub fn milnor_number(f: &Polynomial, truncation: u32) -> Result<MilnorResult, PolyError> {
    if !f.constant_term().is_zero() {
        return Err(PolyError::NotVanishingAtOrigin);
    }
    if truncation < 4 {
        return Err(PolyError::TruncationTooSmall(truncation));
    }
    let d0 = local_algebra_dim(f, truncation) as i64;
    let d1 = local_algebra_dim(f, truncation + 1) as i64;
    if d0 == d1 {
        return Ok(MilnorResult::Mu(d0 as u64));
    }
    let d2 = local_algebra_dim(f, truncation + 2) as i64;
    if d2 - d1 == d1 - d0 && d1 > d0 {
        Ok(MilnorResult::NotIsolated)
    } else {
        Ok(MilnorResult::NotConverged)
    }
}

/// Milnor number with the default retry protocol: on `NotConverged` at the
/// requested truncation, retry once at degree 20.
pub fn milnor_number_with_retry(
    f: &Polynomial,
    truncation: u32,
) -> Result<MilnorResult, PolyError> {
    match milnor_number(f, truncation)? {
        MilnorResult::NotConverged if truncation < 20 => milnor_number(f, 20),
        other => Ok(other),
    }
}

/// dim Q[x..]/(J + m^D) where J is generated by the partials of `f`.
///
/// Rows are kept as primitive integer vectors; reductions cross-multiply and
/// strip the content, which keeps the entries small without any rational
/// arithmetic.
fn local_algebra_dim(f: &Polynomial, d: u32) -> usize {
    use num_bigint::BigInt;

    let nvars = f.vars().len();
    let monos = monomials_below(nvars, d);
    let index: BTreeMap<Monomial, usize> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let partials: Vec<Polynomial> = f.partials().into_iter().filter(|p| !p.is_zero()).collect();

    // Clear denominators once per partial.
    let int_partials: Vec<Vec<(Monomial, BigInt)>> = partials
        .iter()
        .map(|p| {
            let lcm = p.terms().fold(BigInt::from(1), |acc, (_, c)| {
                num_integer::lcm(acc, c.denom().clone())
            });
            p.terms()
                .map(|(m, c)| (m.clone(), c.numer() * &lcm / c.denom()))
                .collect()
        })
        .collect();

    // Relation rows, generated with small multipliers first so that pivot
    // rows stay short.
    let mut rows: Vec<Vec<(usize, BigInt)>> = Vec::new();
    for (p, terms) in partials.iter().zip(&int_partials) {
        let ord = p.order().unwrap_or(0);
        if ord >= d {
            continue;
        }
        for m in monomials_below(nvars, d - ord) {
            let mut row: Vec<(usize, BigInt)> = Vec::new();
            for (pm, pc) in terms {
                let prod = pm.mul(&m);
                if prod.degree() < d {
                    row.push((index[&prod], pc.clone()));
                }
            }
            if !row.is_empty() {
                row.sort_by(|a, b| b.0.cmp(&a.0));
                rows.push(row);
            }
        }
    }
    rows.sort_by(|a, b| b[0].0.cmp(&a[0].0));

    let mut echelon: BTreeMap<usize, Vec<(usize, BigInt)>> = BTreeMap::new();
    for row in rows {
        reduce_into(&mut echelon, row);
    }
    monos.len() - echelon.len()
}

/// Reduce a sparse integer row against the echelon and insert it if nonzero.
/// Rows are sorted by column descending; column 0 is the smallest monomial.
fn reduce_into(
    echelon: &mut BTreeMap<usize, Vec<(usize, num_bigint::BigInt)>>,
    mut row: Vec<(usize, num_bigint::BigInt)>,
) {
    loop {
        let Some(&(lead_col, ref lead_coef)) = row.first() else {
            return;
        };
        let lead_coef = lead_coef.clone();
        match echelon.get(&lead_col) {
            None => {
                make_primitive(&mut row);
                echelon.insert(lead_col, row);
                return;
            }
            Some(pivot_row) => {
                row = cross_eliminate(&row, pivot_row, &lead_coef);
            }
        }
    }
}

/// pivot_lead * row - row_lead * pivot, stripped to primitive form.
fn cross_eliminate(
    row: &[(usize, num_bigint::BigInt)],
    pivot: &[(usize, num_bigint::BigInt)],
    row_lead: &num_bigint::BigInt,
) -> Vec<(usize, num_bigint::BigInt)> {
    use num_bigint::BigInt;
    let pivot_lead = &pivot[0].1;
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(row.len() + pivot.len());
    let mut i = 0;
    let mut j = 0;
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                let c = &a.1 * pivot_lead - row_lead * &b.1;
                if !c.is_zero() {
                    out.push((a.0, c));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a.0 > b.0 => {
                out.push((a.0, &a.1 * pivot_lead));
                let _ = b;
                i += 1;
            }
            (Some(_), Some(b)) => {
                let c = -(row_lead * &b.1);
                out.push((b.0, c));
                j += 1;
            }
            (Some(a), None) => {
                out.push((a.0, &a.1 * pivot_lead));
                i += 1;
            }
            (None, Some(b)) => {
                out.push((b.0, -(row_lead * &b.1)));
                j += 1;
            }
            (None, None) => break,
        }
    }
    let mut out = out;
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut Vec<(usize, num_bigint::BigInt)>) {
    use num_bigint::BigInt;
    use num_traits::Signed;
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::from(0);
    for (_, c) in row.iter() {
        g = num_integer::gcd(g, c.abs());
        if g == BigInt::from(1) {
            break;
        }
    }
    let negate = row[0].1 < BigInt::from(0);
    if g > BigInt::from(1) || negate {
        for (_, c) in row.iter_mut() {
            let mut v = &*c / &g;
            if negate {
                v = -v;
            }
            *c = v;
        }
    }
}

/// All monomials of total degree < d, ascending in the graded-lex order.
fn monomials_below(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    gen_monos(&mut out, &mut current, 0, d);
    out.sort();
    out
}

fn gen_monos(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, budget: u32) {
    if pos == current.len() {
        out.push(Monomial(current.clone()));
        return;
    }
    for e in 0..budget {
        current[pos] = e;
        gen_monos(out, current, pos + 1, budget - e);
        current[pos] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Polynomial {
        Polynomial::parse(text, &["x", "y", "z"]).unwrap()
    }

    fn mu(text: &str) -> MilnorResult {
        milnor_number(&p(text), 14).unwrap()
    }

    #[test]
    fn ordinary_double_point_has_mu_one() {
        assert_eq!(mu("x^2+y^2+z^2"), MilnorResult::Mu(1));
    }

    #[test]
    fn e8_has_mu_eight() {
        // Milnor algebra spanned by {1, y, z, z^2, z^3, yz, yz^2, yz^3}.
        assert_eq!(mu("x^2+y^3+z^5"), MilnorResult::Mu(8));
    }

    #[test]
    fn d5_has_mu_five() {
        assert_eq!(mu("x^2+y^2*z+z^4"), MilnorResult::Mu(5));
    }

    #[test]
    fn brieskorn_product_formula() {
        // mu(x^a + y^b + z^c) = (a-1)(b-1)(c-1).
        assert_eq!(mu("x^2+y^3+z^4"), MilnorResult::Mu(6));
        assert_eq!(mu("x^3+y^3+z^3"), MilnorResult::Mu(8));
        assert_eq!(mu("x^2+y^2+z^7"), MilnorResult::Mu(6));
    }

    #[test]
    fn non_isolated_grows_linearly() {
        // Singular along the z-axis in both cases.
        assert_eq!(mu("x^2+y^2"), MilnorResult::NotIsolated);
        assert_eq!(mu("x^2+y^2*z"), MilnorResult::NotIsolated);
        // A two-dimensional singular locus grows faster than linearly.
        assert!(mu("x^2") != MilnorResult::Mu(0) && !matches!(mu("x^2"), MilnorResult::Mu(_)));
    }

    #[test]
    fn truncation_guard() {
        assert_eq!(
            milnor_number(&p("x^2+y^2+z^2"), 3),
            Err(PolyError::TruncationTooSmall(3))
        );
    }

    #[test]
    fn requires_vanishing_at_origin() {
        assert_eq!(
            milnor_number(&p("1+x^2"), 14),
            Err(PolyError::NotVanishingAtOrigin)
        );
    }

    #[test]
    fn normal_forms_match_subscripts() {
        for n in 1..=8u32 {
            let f = Polynomial::parse(&format!("x^2+y^2+z^{}", n + 1), &["x", "y", "z"]).unwrap();
            assert_eq!(
                milnor_number(&f, 14).unwrap(),
                MilnorResult::Mu(n as u64),
                "A_{n}"
            );
        }
        for n in 4..=8u32 {
            let f = Polynomial::parse(&format!("x^2+y^2*z+z^{}", n - 1), &["x", "y", "z"]).unwrap();
            assert_eq!(
                milnor_number(&f, 14).unwrap(),
                MilnorResult::Mu(n as u64),
                "D_{n}"
            );
        }
        assert_eq!(mu("x^2+y^3+z^4"), MilnorResult::Mu(6));
        assert_eq!(mu("x^2+y^3+y*z^3"), MilnorResult::Mu(7));
        assert_eq!(mu("x^2+y^3+z^5"), MilnorResult::Mu(8));
    }
}
