//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` under graded lexicographic order in the
//! declared variable order, which fixes a canonical rendering and makes all
//! downstream linear algebra pivoting deterministic. The empty term map is
//! the unique representation of zero; no zero coefficient is ever stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Errors raised by polynomial construction and the operations on germs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("variable `{0}` is not part of this polynomial's variable list")]
    NoSuchVariable(String),
    #[error("weight vector does not cover variable `{0}`")]
    MissingWeight(String),
    #[error("weights must be positive integers")]
    NonPositiveWeight,
    #[error("polynomial does not vanish at the origin")]
    NotVanishingAtOrigin,
    #[error("chart variable must belong to the blow-up center")]
    ChartNotInCenter,
    #[error("{0} has degree zero in the elimination variable")]
    NoDegreeInVariable(String),
    #[error("truncation degree {0} is too small to resolve the quadratic part")]
    TruncationTooSmall(u32),
}

/// Exponent vector of a single term, indexed by variable slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: first by total degree, ties broken
    /// lexicographically in the declared variable order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Positive integer weights attached to variable names (quasi-homogeneous
/// gradings in the sense of the weighted order decomposition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<(String, u64)>,
}

impl WeightVector {
    pub fn new<I, S>(pairs: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let weights: Vec<(String, u64)> = pairs.into_iter().map(|(s, w)| (s.into(), w)).collect();
        if weights.iter().any(|(_, w)| *w == 0) {
            return Err(PolyError::NonPositiveWeight);
        }
        Ok(WeightVector { weights })
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.weights
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, w)| *w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.weights.iter().map(|(n, w)| (n.as_str(), *w))
    }

    /// Divide all weights by their gcd. `(6,6,2)` and `(3,3,1)` define the
    /// same filtration, so comparisons are done on the primitive form.
    pub fn primitive(&self) -> WeightVector {
        let g = self
            .weights
            .iter()
            .fold(0u64, |acc, (_, w)| num_integer::gcd(acc, *w));
        let g = g.max(1);
        WeightVector {
            weights: self
                .weights
                .iter()
                .map(|(n, w)| (n.clone(), w / g))
                .collect(),
        }
    }

    /// Multiset of weights, sorted descending; used for "up to variable
    /// permutation" comparisons against recorded table data.
    pub fn sorted_weights(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.weights.iter().map(|(_, w)| *w).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Sparse exact-rational multivariate polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero<S: Into<String> + Clone>(vars: &[S]) -> Self {
        Polynomial {
            vars: vars.iter().cloned().map(Into::into).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: Into<String> + Clone>(vars: &[S], c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(p.vars.len()), c);
        }
        p
    }

    pub fn var<S: Into<String> + Clone>(vars: &[S], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let idx = p
            .var_index(name)
            .ok_or_else(|| PolyError::NoSuchVariable(name.to_string()))?;
        let mut exps = vec![0; p.vars.len()];
        exps[idx] = 1;
        p.terms.insert(Monomial(exps), BigRational::one());
        Ok(p)
    }

    pub fn from_terms<S: Into<String> + Clone>(
        vars: &[S],
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), p.vars.len());
            p.add_term(Monomial(exps), c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Largest term in the graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Self::constant(&self.vars, BigRational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Total degree of the highest term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Order of vanishing at the origin (minimal total degree of a term).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// The homogeneous part of total degree `d`.
    pub fn degree_part(&self, d: u32) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining slots (the
    /// slot of `var` is zeroed out).
    pub fn coeff_of_power(&self, var: usize, k: u32) -> Polynomial {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut e = m.0.clone();
                e[var] = 0;
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&vec![0; self.vars.len()])
    }

    /// Formal partial derivative in the given variable slot.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut exps = m.0.clone();
                exps[var] = e - 1;
                out.add_term(Monomial(exps), c * BigRational::from(BigInt::from(e)));
            }
        }
        out
    }

    /// One partial derivative per variable, in declared order.
    pub fn partials(&self) -> Vec<Polynomial> {
        (0..self.vars.len()).map(|i| self.derivative(i)).collect()
    }

    /// Substitute a polynomial (over the same variable list) for one variable.
    pub fn substitute(&self, var: usize, value: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, value.vars);
        let mut powers: Vec<Polynomial> = vec![Self::constant(&self.vars, BigRational::one())];
        let maxdeg = self.degree_in(var).unwrap_or(0);
        for k in 1..=maxdeg {
            powers.push(&powers[(k - 1) as usize] * value);
        }
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[var];
            e[var] = 0;
            let base = Polynomial {
                vars: self.vars.clone(),
                terms: BTreeMap::from([(Monomial(e), c.clone())]),
            };
            out = &out + &(&base * &powers[k as usize]);
        }
        out
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, v) in m.0.iter().zip(point) {
                for _ in 0..*e {
                    t *= v;
                }
            }
            acc += t;
        }
        acc
    }

    /// Rename the variable list without touching exponents. The new list must
    /// have the same length.
    pub fn with_vars<S: Into<String> + Clone>(&self, vars: &[S]) -> Polynomial {
        assert_eq!(vars.len(), self.vars.len());
        Polynomial {
            vars: vars.iter().cloned().map(Into::into).collect(),
            terms: self.terms.clone(),
        }
    }

    /// Weighted order decomposition: the minimal weighted degree `d` over all
    /// terms together with the sum of exactly the terms of weighted degree `d`.
    pub fn weighted_order(&self, w: &WeightVector) -> Result<(u64, Polynomial), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let ws: Vec<u64> = self
            .vars
            .iter()
            .map(|v| w.get(v).ok_or_else(|| PolyError::MissingWeight(v.clone())))
            .collect::<Result<_, _>>()?;
        let wdeg = |m: &Monomial| -> u64 {
            m.0.iter()
                .zip(&ws)
                .map(|(e, w)| u64::from(*e) * w)
                .sum::<u64>()
        };
        let d = self.terms.keys().map(&wdeg).min().unwrap();
        let leading = Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| wdeg(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        };
        Ok((d, leading))
    }

    /// One affine chart of the blow-up of the coordinate subspace cut out by
    /// `center_vars`. Every center variable other than `chart_var` is replaced
    /// by its product with `chart_var`; the result is divided exactly by
    /// `chart_var^m` where `m` is the multiplicity of `self` along the center.
    /// Returns the strict transform and `m`.
    pub fn blowup_chart(
        &self,
        center_vars: &[&str],
        chart_var: &str,
    ) -> Result<(Polynomial, u32), PolyError> {
        if !self.constant_term().is_zero() {
            return Err(PolyError::NotVanishingAtOrigin);
        }
        if !center_vars.contains(&chart_var) {
            return Err(PolyError::ChartNotInCenter);
        }
        let center: Vec<usize> = center_vars
            .iter()
            .map(|v| {
                self.var_index(v)
                    .ok_or_else(|| PolyError::NoSuchVariable(v.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let chart = self.var_index(chart_var).unwrap();
        let m = self
            .terms
            .keys()
            .map(|mono| center.iter().map(|&i| mono.0[i]).sum::<u32>())
            .min()
            .unwrap_or(0);
        let mut out = Self::zero(&self.vars);
        for (mono, c) in &self.terms {
            let central: u32 = center.iter().map(|&i| mono.0[i]).sum();
            let mut e = mono.0.clone();
            // v -> v * chart for every center variable v other than chart
            // raises the chart exponent to `central`; dividing by chart^m
            // then leaves `central - m`.
            e[chart] = central - m;
            out.add_term(Monomial(e), c.clone());
        }
        Ok((out, m))
    }

    /// Corank of the Hessian of the quadratic part at the origin: the number
    /// of variables minus the rank of the symmetric matrix of second-order
    /// coefficients, computed exactly.
    pub fn hessian_corank(&self) -> usize {
        let n = self.vars.len();
        let mut h = vec![vec![BigRational::zero(); n]; n];
        let two = BigRational::from(BigInt::from(2));
        for (m, c) in &self.terms {
            if m.degree() != 2 {
                continue;
            }
            let nz: Vec<usize> = (0..n).filter(|&i| m.0[i] > 0).collect();
            match nz.as_slice() {
                [i] => h[*i][*i] = c * &two,
                [i, j] => {
                    h[*i][*j] = c.clone();
                    h[*j][*i] = c.clone();
                }
                _ => unreachable!(),
            }
        }
        n - rational_rank(&mut h)
    }

    /// Kernel of the Hessian of the quadratic part, as exact basis vectors.
    pub fn hessian_kernel(&self) -> Vec<Vec<BigRational>> {
        let n = self.vars.len();
        let mut h = vec![vec![BigRational::zero(); n]; n];
        let two = BigRational::from(BigInt::from(2));
        for (m, c) in &self.terms {
            if m.degree() != 2 {
                continue;
            }
            let nz: Vec<usize> = (0..n).filter(|&i| m.0[i] > 0).collect();
            match nz.as_slice() {
                [i] => h[*i][*i] = c * &two,
                [i, j] => {
                    h[*i][*j] = c.clone();
                    h[*j][*i] = c.clone();
                }
                _ => unreachable!(),
            }
        }
        rational_kernel(h)
    }
}

/// Row-reduce a rational matrix in place and return its rank.
fn rational_rank(m: &mut [Vec<BigRational>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let lead = m[rank][col].clone();
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &lead;
                for c in col..cols {
                    let sub = &m[rank][c] * &factor;
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact kernel basis of a square rational matrix.
fn rational_kernel(mut m: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let lead = m[rank][col].clone();
        for c in 0..cols {
            m[rank][c] = &m[rank][c] / &lead;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..cols {
                    let sub = &m[rank][c] * &factor;
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for col in 0..cols {
            if let Some(r) = pivot_of_col[col] {
                v[col] = -&m[r][free];
            }
        }
        basis.push(v);
    }
    basis
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "variable lists must agree");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "variable lists must agree");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "variable lists must agree");
        let mut out = Polynomial::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Parsing and rendering
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Int(BigInt),
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, PolyError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push((i, Token::Minus));
                i += c.len_utf8();
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            '/' => {
                out.push((i, Token::Slash));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().unwrap();
                out.push((start, Token::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(PolyError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

impl Polynomial {
    /// Parse the interchange text format: terms separated by `+`/`-`, each a
    /// product of an optional rational coefficient and `var[^exp]` factors.
    /// `*` between factors is optional, whitespace is ignored, and variable
    /// names are matched against the declared list.
    pub fn parse<S: Into<String> + Clone>(text: &str, vars: &[S]) -> Result<Self, PolyError> {
        let mut poly = Self::zero(vars);
        let toks = tokenize(text)?;
        if toks.is_empty() {
            return Err(PolyError::Syntax {
                pos: 0,
                msg: "empty input".into(),
            });
        }
        let nvars = poly.vars.len();
        let mut i = 0;
        loop {
            // Sign prefix.
            let mut negative = false;
            while i < toks.len() {
                match toks[i].1 {
                    Token::Plus => i += 1,
                    Token::Minus => {
                        negative = !negative;
                        i += 1;
                    }
                    _ => break,
                }
            }
            if i >= toks.len() {
                let pos = toks.last().map(|t| t.0).unwrap_or(0);
                return Err(PolyError::Syntax {
                    pos,
                    msg: "expected a term".into(),
                });
            }
            // One term: factors until +/- or end.
            let mut coef = BigRational::one();
            let mut exps = vec![0u32; nvars];
            let mut saw_factor = false;
            loop {
                match &toks.get(i) {
                    Some((_, Token::Star)) if saw_factor => {
                        i += 1;
                        continue;
                    }
                    Some((pos, Token::Int(n))) => {
                        let mut value = BigRational::from(n.clone());
                        i += 1;
                        if let Some((_, Token::Slash)) = toks.get(i) {
                            match toks.get(i + 1) {
                                Some((_, Token::Int(d))) if !d.is_zero() => {
                                    value /= BigRational::from(d.clone());
                                    i += 2;
                                }
                                _ => {
                                    return Err(PolyError::Syntax {
                                        pos: *pos,
                                        msg: "expected nonzero integer denominator".into(),
                                    })
                                }
                            }
                        }
                        coef *= value;
                        saw_factor = true;
                    }
                    Some((pos, Token::Ident(name))) => {
                        let Some(idx) = poly.var_index(name) else {
                            return Err(PolyError::UnknownVariable {
                                name: name.clone(),
                                pos: *pos,
                            });
                        };
                        i += 1;
                        let mut exp: u32 = 1;
                        if let Some((_, Token::Caret)) = toks.get(i) {
                            match toks.get(i + 1) {
                                Some((_, Token::Int(n))) => {
                                    exp = u32::try_from(n.clone()).map_err(|_| {
                                        PolyError::Syntax {
                                            pos: *pos,
                                            msg: "exponent out of range".into(),
                                        }
                                    })?;
                                    i += 2;
                                }
                                other => {
                                    let pos = other.map(|t| t.0).unwrap_or(*pos);
                                    return Err(PolyError::Syntax {
                                        pos,
                                        msg: "expected integer exponent after `^`".into(),
                                    });
                                }
                            }
                        }
                        exps[idx] += exp;
                        saw_factor = true;
                    }
                    _ => break,
                }
            }
            if !saw_factor {
                return Err(PolyError::Syntax {
                    pos: toks[i].0,
                    msg: "expected a coefficient or variable".into(),
                });
            }
            if negative {
                coef = -coef;
            }
            poly.add_term(Monomial(exps), coef);
            if i >= toks.len() {
                break;
            }
            match toks[i].1 {
                Token::Plus | Token::Minus => continue,
                _ => {
                    return Err(PolyError::Syntax {
                        pos: toks[i].0,
                        msg: "expected `+` or `-` between terms".into(),
                    })
                }
            }
        }
        Ok(poly)
    }

    /// Canonical rendering: graded-lex descending term order.
    pub fn render(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.degree() == 0;
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || is_const {
                if mag.denom().is_one() {
                    factors.push(mag.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", mag.numer(), mag.denom()));
                }
            }
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xyz() -> [&'static str; 3] {
        ["x", "y", "z"]
    }

    fn p(text: &str) -> Polynomial {
        Polynomial::parse(text, &xyz()).unwrap()
    }

    #[test]
    fn parse_simple_terms() {
        let f = p("x^2+y^2+z^2");
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.coefficient(&[2, 0, 0]), BigRational::one());
    }

    #[test]
    fn parse_e8_normal_form() {
        let f = p("x^2 + y^3 + z^5");
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.coefficient(&[0, 0, 5]), BigRational::one());
    }

    #[test]
    fn parse_cancellation_gives_zero() {
        let f = p("2*x*y - 2*x*y");
        assert!(f.is_zero());
        assert_eq!(f.num_terms(), 0);
    }

    #[test]
    fn parse_rational_coefficients_and_implicit_products() {
        let f = p("3/2x^2y - 2z");
        assert_eq!(
            f.coefficient(&[2, 1, 0]),
            BigRational::new(3.into(), 2.into())
        );
        assert_eq!(f.coefficient(&[0, 0, 1]), -BigRational::from(BigInt::from(2)));
    }

    #[test]
    fn parse_rejects_unknown_variable() {
        let err = Polynomial::parse("x + w", &xyz()).unwrap_err();
        assert!(matches!(err, PolyError::UnknownVariable { .. }));
    }

    #[test]
    fn parse_reports_syntax_position() {
        let err = Polynomial::parse("x + + ", &xyz()).unwrap_err();
        assert!(matches!(err, PolyError::Syntax { .. }));
    }

    #[test]
    fn render_round_trip() {
        let f = p("x^2 - 1/2*y*z + 3");
        let again = Polynomial::parse(&f.render(), &xyz()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn partials_power_rule() {
        let f = p("x^2+y^3+z^5");
        let d = f.partials();
        assert_eq!(d[0], p("2x"));
        assert_eq!(d[1], p("3y^2"));
        assert_eq!(d[2], p("5z^4"));
    }

    #[test]
    fn partials_of_constant_vanish() {
        let f = p("1");
        assert!(f.partials().into_iter().all(|d| d.is_zero()));
    }

    #[test]
    fn partials_product() {
        let f = p("x^2+x*y");
        let d = f.partials();
        assert_eq!(d[0], p("2x+y"));
        assert_eq!(d[1], p("x"));
    }

    #[test]
    fn weighted_order_example_hyperelliptic_germ() {
        // Fiber germ of the degree-16 double cover case, weights (3,3,1).
        let f = p("x^2+y^4+y^3*z+y^3+y^2*z^2+y^2*z+y^2+y*z^3");
        let w = WeightVector::new([("x", 3), ("y", 3), ("z", 1)]).unwrap();
        let (d, lead) = f.weighted_order(&w).unwrap();
        assert_eq!(d, 6);
        assert_eq!(lead, p("x^2+y^2+y*z^3"));
    }

    #[test]
    fn weighted_order_single_term() {
        let f = p("x^2");
        let w = WeightVector::new([("x", 7), ("y", 1), ("z", 1)]).unwrap();
        let (d, lead) = f.weighted_order(&w).unwrap();
        assert_eq!(d, 14);
        assert_eq!(lead, f);
    }

    #[test]
    fn weighted_order_d5_germ() {
        let f = p("x^2+x*z^2+y^2*z");
        let w = WeightVector::new([("x", 4), ("y", 3), ("z", 2)]).unwrap();
        let (d, lead) = f.weighted_order(&w).unwrap();
        assert_eq!(d, 8);
        assert_eq!(lead, f);
    }

    #[test]
    fn weighted_order_rejects_zero() {
        let f = Polynomial::zero(&xyz());
        let w = WeightVector::new([("x", 1), ("y", 1), ("z", 1)]).unwrap();
        assert_eq!(f.weighted_order(&w), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn blowup_chart_x_of_quartic_surface_germ() {
        let f = p("x^2+x*y+x*z^2+y^3");
        let (strict, m) = f.blowup_chart(&["x", "y", "z"], "x").unwrap();
        assert_eq!(m, 2);
        assert_eq!(strict, p("1+y+x*z^2+x*y^3"));
    }

    #[test]
    fn blowup_chart_z_of_quartic_surface_germ() {
        let f = p("x^2+x*y+x*z^2+y^3");
        let (strict, m) = f.blowup_chart(&["x", "y", "z"], "z").unwrap();
        assert_eq!(m, 2);
        assert_eq!(strict, p("x^2+x*y+x*z+y^3*z"));
    }

    #[test]
    fn blowup_chart_ordinary_double_point() {
        let f = p("x^2+y^2+z^2");
        let (strict, m) = f.blowup_chart(&["x", "y", "z"], "y").unwrap();
        assert_eq!(m, 2);
        assert_eq!(strict, p("x^2+1+z^2"));
        assert!(!strict.constant_term().is_zero());
    }

    #[test]
    fn blowup_chart_requires_vanishing() {
        let f = p("1+x");
        assert_eq!(
            f.blowup_chart(&["x", "y", "z"], "x"),
            Err(PolyError::NotVanishingAtOrigin)
        );
    }

    #[test]
    fn blowup_reconstruction_identity() {
        // strict * chart^m equals f with the chart substitution applied.
        let f = p("x^2+x*y+x*z^2+y^3");
        for chart in ["x", "y", "z"] {
            let (strict, m) = f.blowup_chart(&["x", "y", "z"], chart).unwrap();
            let ci = f.var_index(chart).unwrap();
            let chart_poly = Polynomial::var(&xyz(), chart).unwrap();
            let mut substituted = f.clone();
            for v in ["x", "y", "z"] {
                if v == chart {
                    continue;
                }
                let vi = substituted.var_index(v).unwrap();
                let replacement = &Polynomial::var(&xyz(), v).unwrap() * &chart_poly;
                substituted = substituted.substitute(vi, &replacement);
            }
            let mut recomposed = strict;
            for _ in 0..m {
                recomposed = &recomposed * &chart_poly;
            }
            let _ = ci;
            assert_eq!(recomposed, substituted, "chart {chart}");
        }
    }

    #[test]
    fn hessian_corank_examples() {
        assert_eq!(p("x^2+y^2+z^2").hessian_corank(), 0);
        assert_eq!(p("x^2+y^3+z^4").hessian_corank(), 2);
        assert_eq!(p("x^2+y^2+z^4").hessian_corank(), 1);
        assert_eq!(p("x^2+y^2+z^9").hessian_corank(), 1);
    }

    #[test]
    fn hessian_mixed_terms() {
        // x^2+xy has rank-2 quadratic part.
        assert_eq!(p("x^2+x*y+y^3").hessian_corank(), 1);
        assert_eq!(p("x*y+z^2").hessian_corank(), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn distributivity_is_exact(
            fa in small_poly(),
            fb in small_poly(),
            fc in small_poly(),
        ) {
            let left = &(&fa + &fb) * &fc;
            let right = &(&fa * &fc) + &(&fb * &fc);
            prop_assert_eq!(left, right);
        }

        #[test]
        fn render_parse_round_trip(f in small_poly()) {
            let text = f.render();
            let back = Polynomial::parse(&text, &["x", "y", "z"]).unwrap();
            prop_assert_eq!(f, back);
        }
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(
            ((0u32..4, 0u32..4, 0u32..4), -6i64..=6),
            0..6,
        )
        .prop_map(|terms| {
            Polynomial::from_terms(
                &["x", "y", "z"],
                terms.into_iter().map(|((a, b, c), q)| {
                    (vec![a, b, c], BigRational::from(BigInt::from(q)))
                }),
            )
        })
    }
}
