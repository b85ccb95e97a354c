//! Rational scrolls over the projective line and their linear systems.
//!
//! A scroll `F(d_1,...,d_k)` carries the two-generator Picard lattice spanned
//! by the tautological class `M` and the fiber class `L`. The module computes
//! explicit monomial bases of `|aM+bL|`, vanishing orders along the negative
//! subscrolls (both by the arithmetic criterion and by scanning the basis),
//! seeded general members, and the local equations of fiber germs used by the
//! singularity pipeline.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScrollError {
    #[error("splitting degrees must be non-increasing and start with a positive entry")]
    InvalidDegrees,
    #[error("subscroll index {0} out of range 2..={1}")]
    InvalidSubscroll(usize, usize),
    #[error("the class a={0} is not effective (a < 0)")]
    NegativeFiberDegree(i64),
    #[error("the linear system is empty")]
    EmptySystem,
    #[error("a double-cover branch class must have a=4, got a={0}")]
    NotBranchClass(i64),
    #[error("a trigonal divisor class must have a=3, got a={0}")]
    NotTrigonalClass(i64),
    #[error("hyperelliptic germs need a rank-3 scroll, trigonal germs rank 4; got rank {0}")]
    WrongRank(usize),
    #[error("cannot parse `{0}` as a scroll")]
    ParseScroll(String),
    #[error("cannot parse `{0}` as a divisor class")]
    ParseClass(String),
}

/// The projectivization of a sum of line bundles of degrees `d_1 >= ... >= d_k >= 0`
/// over the projective line, with `d_1 != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scroll {
    d: Vec<u32>,
}

impl Scroll {
    pub fn new(d: &[u32]) -> Result<Self, ScrollError> {
        if d.is_empty() || d[0] == 0 || d.windows(2).any(|w| w[0] < w[1]) {
            return Err(ScrollError::InvalidDegrees);
        }
        Ok(Scroll { d: d.to_vec() })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.d
    }

    /// Number of homogeneous fiber coordinates.
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn degree_sum(&self) -> u32 {
        self.d.iter().sum()
    }

    /// Parse the serialized form `F(6,2,0)`.
    pub fn parse(text: &str) -> Result<Self, ScrollError> {
        let inner = text
            .trim()
            .strip_prefix("F(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| ScrollError::ParseScroll(text.to_string()))?;
        let d: Vec<u32> = inner
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| ScrollError::ParseScroll(text.to_string()))?;
        Scroll::new(&d)
    }
}

impl fmt::Display for Scroll {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.d.iter().map(|d| d.to_string()).collect();
        write!(f, "F({})", list.join(","))
    }
}

/// An integral divisor class `aM + bL` on a scroll.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub a: i64,
    pub b: i64,
}

impl DivisorClass {
    pub fn new(a: i64, b: i64) -> Self {
        DivisorClass { a, b }
    }

    /// Parse the serialized form `4M-12L`.
    pub fn parse(text: &str) -> Result<Self, ScrollError> {
        let s = text.trim().replace(' ', "");
        let err = || ScrollError::ParseClass(text.to_string());
        let m_pos = s.find('M').ok_or_else(err)?;
        let l_pos = s.find('L').ok_or_else(err)?;
        if l_pos != s.len() - 1 || m_pos + 1 >= l_pos {
            return Err(err());
        }
        let a: i64 = s[..m_pos].parse().map_err(|_| err())?;
        let bs = &s[m_pos + 1..l_pos];
        let b: i64 = match bs.strip_prefix('+') {
            Some(rest) => rest.parse().map_err(|_| err())?,
            None => bs.parse().map_err(|_| err())?,
        };
        Ok(DivisorClass { a, b })
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b < 0 {
            write!(f, "{}M{}L", self.a, self.b)
        } else {
            write!(f, "{}M+{}L", self.a, self.b)
        }
    }
}

/// The negative subscroll `Y_j = {x_1 = ... = x_{j-1} = 0}` for `2 <= j <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subscroll(pub usize);

impl Subscroll {
    pub fn all(scroll: &Scroll) -> Vec<Subscroll> {
        (2..=scroll.rank()).map(Subscroll).collect()
    }
}

/// One fiber monomial `x_1^{i_1} ... x_k^{i_k}` of a linear system, together
/// with the degree of its base coefficient form in `(t_1 : t_2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMonomial {
    pub exponents: Vec<u32>,
    pub coeff_degree: i64,
}

/// Which of the two families a case belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hyperelliptic,
    Trigonal,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Hyperelliptic => write!(f, "hyperelliptic"),
            Family::Trigonal => write!(f, "trigonal"),
        }
    }
}

/// Coefficient specialization for fiber germ extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMode {
    /// Every coefficient form becomes the constant 1.
    AllOnes,
    /// Seeded general coefficients, evaluated at the fiber (1 : 1).
    Seeded(u64),
}

/// The monomials spanning `|aM + bL|`: exponent tuples summing to `a` whose
/// coefficient degree `b + sum_j i_j d_j` is non-negative. Tuples are listed
/// in descending lexicographic order. An empty result means the system is
/// empty.
pub fn monomial_basis(s: &Scroll, c: &DivisorClass) -> Result<Vec<BasisMonomial>, ScrollError> {
    if c.a < 0 {
        return Err(ScrollError::NegativeFiberDegree(c.a));
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; s.rank()];
    enumerate_exponents(s, c, 0, c.a as u32, &mut exps, &mut out);
    out.sort_by(|p, q| q.exponents.cmp(&p.exponents));
    Ok(out)
}

fn enumerate_exponents(
    s: &Scroll,
    c: &DivisorClass,
    pos: usize,
    remaining: u32,
    exps: &mut Vec<u32>,
    out: &mut Vec<BasisMonomial>,
) {
    if pos == s.rank() - 1 {
        exps[pos] = remaining;
        let coeff_degree = c.b
            + exps
                .iter()
                .zip(s.degrees())
                .map(|(e, d)| i64::from(*e) * i64::from(*d))
                .sum::<i64>();
        if coeff_degree >= 0 {
            out.push(BasisMonomial {
                exponents: exps.clone(),
                coeff_degree,
            });
        }
        exps[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[pos] = e;
        enumerate_exponents(s, c, pos + 1, remaining - e, exps, out);
        exps[pos] = 0;
    }
}

/// Number of global sections: each basis monomial contributes a coefficient
/// space of dimension `coeff_degree + 1`.
pub fn section_count(s: &Scroll, c: &DivisorClass) -> Result<i64, ScrollError> {
    Ok(monomial_basis(s, c)?
        .iter()
        .map(|m| m.coeff_degree + 1)
        .sum())
}

/// Vanishing order of a general member of `|aM+bL|` along `Y_j` by the
/// arithmetic criterion: the largest `q >= 0` such that
/// `a*d_j + b + (d_1 - d_j)(q' - 1) < 0` for every `1 <= q' <= q`.
pub fn reid_multiplicity(s: &Scroll, c: &DivisorClass, y: Subscroll) -> Result<u32, ScrollError> {
    check_subscroll(s, y)?;
    if monomial_basis(s, c)?.is_empty() {
        return Err(ScrollError::EmptySystem);
    }
    let d1 = i64::from(s.degrees()[0]);
    let dj = i64::from(s.degrees()[y.0 - 1]);
    let mut q = 0u32;
    loop {
        let next = i64::from(q) + 1;
        if c.a * dj + c.b + (d1 - dj) * (next - 1) < 0 {
            q += 1;
        } else {
            return Ok(q);
        }
        assert!(q < 10_000, "runaway multiplicity; system cannot be effective");
    }
}

/// Independent oracle for the arithmetic criterion: the minimum over the
/// monomial basis of the total exponent in `x_1..x_{j-1}`.
pub fn multiplicity_by_basis_scan(
    s: &Scroll,
    c: &DivisorClass,
    y: Subscroll,
) -> Result<u32, ScrollError> {
    check_subscroll(s, y)?;
    let basis = monomial_basis(s, c)?;
    if basis.is_empty() {
        return Err(ScrollError::EmptySystem);
    }
    Ok(basis
        .iter()
        .map(|m| m.exponents[..y.0 - 1].iter().sum::<u32>())
        .min()
        .unwrap())
}

/// The base locus reported as the largest subscroll `Y_j` along which every
/// basis monomial vanishes, i.e. the smallest index `j` with positive scan
/// multiplicity. `None` means the system is base point free.
pub fn base_locus(s: &Scroll, c: &DivisorClass) -> Result<Option<Subscroll>, ScrollError> {
    for y in Subscroll::all(s) {
        if multiplicity_by_basis_scan(s, c, y)? > 0 {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

fn check_subscroll(s: &Scroll, y: Subscroll) -> Result<(), ScrollError> {
    if y.0 < 2 || y.0 > s.rank() {
        return Err(ScrollError::InvalidSubscroll(y.0, s.rank()));
    }
    Ok(())
}

/// Deterministic stream of small nonzero integers in `[-9, 9]`.
struct SmallInts {
    state: u64,
}

impl SmallInts {
    fn new(seed: u64) -> Self {
        SmallInts {
            state: seed.wrapping_add(0x5851_F42D_4C95_7F2D),
        }
    }

    fn next_u64(&mut self) -> u64 {
        // splitmix64
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn next_nonzero(&mut self) -> i64 {
        loop {
            let v = (self.next_u64() % 19) as i64 - 9;
            if v != 0 {
                return v;
            }
        }
    }
}

/// Variable names `t1, t2, x1..xk` for a member polynomial.
pub fn member_vars(k: usize) -> Vec<String> {
    let mut vars = vec!["t1".to_string(), "t2".to_string()];
    for i in 1..=k {
        vars.push(format!("x{i}"));
    }
    vars
}

/// A general member of `|aM+bL|`: for each basis monomial a dense coefficient
/// form in `(t1, t2)` of its coefficient degree, with nonzero small integer
/// coefficients drawn deterministically from the seed. Bit-identical across
/// runs for a fixed seed.
pub fn general_member(s: &Scroll, c: &DivisorClass, seed: u64) -> Result<Polynomial, ScrollError> {
    let basis = monomial_basis(s, c)?;
    if basis.is_empty() {
        return Err(ScrollError::EmptySystem);
    }
    let k = s.rank();
    let vars = member_vars(k);
    let mut rng = SmallInts::new(seed);
    let mut terms: Vec<(Vec<u32>, BigRational)> = Vec::new();
    for bm in &basis {
        let deg = bm.coeff_degree as u32;
        for t1_pow in (0..=deg).rev() {
            let coef = BigRational::from(BigInt::from(rng.next_nonzero()));
            let mut exps = vec![t1_pow, deg - t1_pow];
            exps.extend_from_slice(&bm.exponents);
            terms.push((exps, coef));
        }
    }
    Ok(Polynomial::from_terms(&vars, terms))
}

/// Local equation of a general fiber of the family near the distinguished
/// point of the last coordinate section, in coordinates `(x, y, z)`.
///
/// For the hyperelliptic family (rank-3 scrolls, branch class `4M+bL`) the
/// germ is the double-cover equation `x^2 + f(y, z)` obtained by renaming
/// `(omega, x1, x2) -> (x, y, z)` and setting `x3 = 1`. For the trigonal
/// family (rank-4 scrolls, class `3M+bL`) it is the cubic `f(x, y, z)` with
/// `(x1, x2, x3) -> (x, y, z)` and `x4 = 1`. All coefficient forms are
/// specialized to constants: 1 in `AllOnes` mode, the seeded forms evaluated
/// at `(1 : 1)` in `Seeded` mode.
pub fn fiber_local_germ(
    s: &Scroll,
    c: &DivisorClass,
    family: Family,
    mode: CoefficientMode,
) -> Result<Polynomial, ScrollError> {
    match family {
        Family::Hyperelliptic => {
            if s.rank() != 3 {
                return Err(ScrollError::WrongRank(s.rank()));
            }
            if c.a != 4 {
                return Err(ScrollError::NotBranchClass(c.a));
            }
        }
        Family::Trigonal => {
            if s.rank() != 4 {
                return Err(ScrollError::WrongRank(s.rank()));
            }
            if c.a != 3 {
                return Err(ScrollError::NotTrigonalClass(c.a));
            }
        }
    }
    let basis = monomial_basis(s, c)?;
    if basis.is_empty() {
        return Err(ScrollError::EmptySystem);
    }
    let vars = ["x", "y", "z"];
    let mut rng = match mode {
        CoefficientMode::AllOnes => None,
        CoefficientMode::Seeded(seed) => Some(SmallInts::new(seed)),
    };
    let mut coefficient = |deg: i64| -> BigRational {
        match rng.as_mut() {
            None => BigRational::one(),
            Some(r) => {
                // The dense form of this degree evaluated at (1 : 1).
                let mut acc = BigRational::zero();
                for _ in 0..=deg {
                    acc += BigRational::from(BigInt::from(r.next_nonzero()));
                }
                acc
            }
        }
    };
    let mut terms: Vec<(Vec<u32>, BigRational)> = Vec::new();
    match family {
        Family::Hyperelliptic => {
            terms.push((vec![2, 0, 0], BigRational::one()));
            for bm in &basis {
                let coef = coefficient(bm.coeff_degree);
                terms.push((vec![0, bm.exponents[0], bm.exponents[1]], coef));
            }
        }
        Family::Trigonal => {
            for bm in &basis {
                let coef = coefficient(bm.coeff_degree);
                terms.push((
                    vec![bm.exponents[0], bm.exponents[1], bm.exponents[2]],
                    coef,
                ));
            }
        }
    }
    Ok(Polynomial::from_terms(&vars, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f620() -> Scroll {
        Scroll::new(&[6, 2, 0]).unwrap()
    }

    #[test]
    fn scroll_validation() {
        assert!(Scroll::new(&[6, 2, 0]).is_ok());
        assert!(Scroll::new(&[2, 6, 0]).is_err());
        assert!(Scroll::new(&[0, 0, 0]).is_err());
        assert!(Scroll::new(&[]).is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let s = f620();
        assert_eq!(s.to_string(), "F(6,2,0)");
        assert_eq!(Scroll::parse("F(6,2,0)").unwrap(), s);
        let c = DivisorClass::new(4, -12);
        assert_eq!(c.to_string(), "4M-12L");
        assert_eq!(DivisorClass::parse("4M-12L").unwrap(), c);
        assert_eq!(DivisorClass::parse("3M+2L").unwrap(), DivisorClass::new(3, 2));
    }

    #[test]
    fn basis_of_branch_system_on_f620() {
        // 4M - 12L on F(6,2,0): exactly the seven monomials with the listed
        // coefficient degrees.
        let basis = monomial_basis(&f620(), &DivisorClass::new(4, -12)).unwrap();
        let got: Vec<(Vec<u32>, i64)> = basis
            .iter()
            .map(|b| (b.exponents.clone(), b.coeff_degree))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![4, 0, 0], 12),
                (vec![3, 1, 0], 8),
                (vec![3, 0, 1], 6),
                (vec![2, 2, 0], 4),
                (vec![2, 1, 1], 2),
                (vec![2, 0, 2], 0),
                (vec![1, 3, 0], 0),
            ]
        );
    }

    #[test]
    fn tautological_class_counts_sections() {
        // h^0(M) = sum (d_i + 1).
        for d in [&[6u32, 2, 0][..], &[3, 1, 1], &[12, 8, 6, 0], &[1, 1, 1, 1]] {
            let s = Scroll::new(d).unwrap();
            let count = section_count(&s, &DivisorClass::new(1, 0)).unwrap();
            let expected: i64 = d.iter().map(|&x| i64::from(x) + 1).sum();
            assert_eq!(count, expected);
        }
    }

    #[test]
    fn trivial_class_is_single_constant() {
        let s = Scroll::new(&[1, 1, 1]).unwrap();
        let basis = monomial_basis(&s, &DivisorClass::new(0, 0)).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].exponents, vec![0, 0, 0]);
        assert_eq!(basis[0].coeff_degree, 0);
    }

    #[test]
    fn negative_fiber_degree_is_an_error() {
        assert!(matches!(
            monomial_basis(&f620(), &DivisorClass::new(-1, 0)),
            Err(ScrollError::NegativeFiberDegree(-1))
        ));
    }

    #[test]
    fn reid_multiplicities_on_f620() {
        let c = DivisorClass::new(4, -12);
        assert_eq!(reid_multiplicity(&f620(), &c, Subscroll(3)).unwrap(), 2);
        assert_eq!(reid_multiplicity(&f620(), &c, Subscroll(2)).unwrap(), 1);
    }

    #[test]
    fn reid_multiplicity_vanishes_for_trigonal_y2() {
        let s = Scroll::new(&[12, 8, 6, 0]).unwrap();
        let c = DivisorClass::new(3, -24);
        assert_eq!(reid_multiplicity(&s, &c, Subscroll(2)).unwrap(), 0);
    }

    #[test]
    fn basis_scan_matches_reid_on_f620() {
        let c = DivisorClass::new(4, -12);
        assert_eq!(
            multiplicity_by_basis_scan(&f620(), &c, Subscroll(3)).unwrap(),
            2
        );
        assert_eq!(
            multiplicity_by_basis_scan(&f620(), &c, Subscroll(2)).unwrap(),
            1
        );
    }

    #[test]
    fn constant_section_has_no_vanishing() {
        let s = Scroll::new(&[3, 1, 0]).unwrap();
        let c = DivisorClass::new(0, 0);
        for y in Subscroll::all(&s) {
            assert_eq!(multiplicity_by_basis_scan(&s, &c, y).unwrap(), 0);
        }
    }

    #[test]
    fn base_locus_of_branch_system() {
        assert_eq!(
            base_locus(&f620(), &DivisorClass::new(4, -12)).unwrap(),
            Some(Subscroll(2))
        );
        // Base point free case.
        let s = Scroll::new(&[1, 1, 1]).unwrap();
        assert_eq!(base_locus(&s, &DivisorClass::new(4, -2)).unwrap(), None);
    }

    #[test]
    fn general_member_support_and_determinism() {
        let c = DivisorClass::new(4, -12);
        let m1 = general_member(&f620(), &c, 1).unwrap();
        let m2 = general_member(&f620(), &c, 1).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1.render(), m2.render());
        // Support in the fiber variables equals the 7 basis monomials.
        let mut support: Vec<Vec<u32>> = m1.terms().map(|(m, _)| m.0[2..].to_vec()).collect();
        support.sort();
        support.dedup();
        assert_eq!(support.len(), 7);
        // Every coefficient form is dense: degree d contributes d+1 terms.
        let expected_terms: usize = monomial_basis(&f620(), &c)
            .unwrap()
            .iter()
            .map(|b| b.coeff_degree as usize + 1)
            .sum();
        assert_eq!(m1.num_terms(), expected_terms);
    }

    #[test]
    fn general_member_of_trivial_class_is_nonzero_constant() {
        let s = Scroll::new(&[2, 1, 0]).unwrap();
        let m = general_member(&s, &DivisorClass::new(0, 0), 7).unwrap();
        assert_eq!(m.num_terms(), 1);
        assert!(!m.constant_term().is_zero());
    }

    #[test]
    fn t4_row_has_nineteen_basis_monomials() {
        // F(1,1,1,0) with 3M-L: every cubic monomial except x4^3.
        let s = Scroll::new(&[1, 1, 1, 0]).unwrap();
        let basis = monomial_basis(&s, &DivisorClass::new(3, -1)).unwrap();
        assert_eq!(basis.len(), 19);
        assert!(!basis.iter().any(|b| b.exponents == vec![0, 0, 0, 3]));
    }

    #[test]
    fn hyperelliptic_germ_matches_published_local_equation() {
        let germ = fiber_local_germ(
            &f620(),
            &DivisorClass::new(4, -12),
            Family::Hyperelliptic,
            CoefficientMode::AllOnes,
        )
        .unwrap();
        let expected = Polynomial::parse(
            "x^2+y^4+y^3*z+y^3+y^2*z^2+y^2*z+y^2+y*z^3",
            &["x", "y", "z"],
        )
        .unwrap();
        assert_eq!(germ, expected);
    }

    #[test]
    fn trigonal_germ_f6530() {
        let s = Scroll::new(&[6, 5, 3, 0]).unwrap();
        let germ = fiber_local_germ(
            &s,
            &DivisorClass::new(3, -12),
            Family::Trigonal,
            CoefficientMode::AllOnes,
        )
        .unwrap();
        let expected = Polynomial::parse(
            "x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*z^2+y^3+y^2*z",
            &["x", "y", "z"],
        )
        .unwrap();
        assert_eq!(germ, expected);
    }

    #[test]
    fn trigonal_germ_f7310() {
        let s = Scroll::new(&[7, 3, 1, 0]).unwrap();
        let germ = fiber_local_germ(
            &s,
            &DivisorClass::new(3, -9),
            Family::Trigonal,
            CoefficientMode::AllOnes,
        )
        .unwrap();
        let expected = Polynomial::parse(
            "x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+y^3",
            &["x", "y", "z"],
        )
        .unwrap();
        assert_eq!(germ, expected);
    }

    #[test]
    fn germ_rejects_wrong_class_or_rank() {
        assert!(matches!(
            fiber_local_germ(
                &f620(),
                &DivisorClass::new(3, -12),
                Family::Hyperelliptic,
                CoefficientMode::AllOnes
            ),
            Err(ScrollError::NotBranchClass(3))
        ));
        assert!(matches!(
            fiber_local_germ(
                &f620(),
                &DivisorClass::new(3, -12),
                Family::Trigonal,
                CoefficientMode::AllOnes
            ),
            Err(ScrollError::WrongRank(3))
        ));
    }
}
