//! Sylvester resultants and polynomial gcds over the rationals.
//!
//! The resultant is taken in one declared variable; matrix entries are
//! polynomials in the remaining slots and the determinant is expanded by
//! fraction-free Gaussian elimination (Bareiss), which only ever needs exact
//! divisions inside the polynomial ring.

use num_rational::BigRational;
use num_traits::One;

use crate::poly::{Monomial, PolyError, Polynomial};

/// Resultant of `f` and `g` with respect to `var`: the determinant of the
/// Sylvester matrix with the `f` rows first and coefficients in descending
/// powers of `var`. It vanishes identically exactly when `f` and `g` share a
/// factor of positive degree in `var`.
pub fn sylvester_resultant(
    f: &Polynomial,
    g: &Polynomial,
    var: &str,
) -> Result<Polynomial, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let vi = f
        .var_index(var)
        .ok_or_else(|| PolyError::NoSuchVariable(var.to_string()))?;
    let n = f.degree_in(vi).unwrap_or(0) as usize;
    let m = g.degree_in(vi).unwrap_or(0) as usize;
    if n == 0 {
        return Err(PolyError::NoDegreeInVariable("f".into()));
    }
    if m == 0 {
        return Err(PolyError::NoDegreeInVariable("g".into()));
    }
    let size = n + m;
    let fc: Vec<Polynomial> = (0..=n)
        .rev()
        .map(|k| f.coeff_of_power(vi, k as u32))
        .collect();
    let gc: Vec<Polynomial> = (0..=m)
        .rev()
        .map(|k| g.coeff_of_power(vi, k as u32))
        .collect();
    let zero = Polynomial::zero(f.vars());
    let mut matrix = vec![vec![zero.clone(); size]; size];
    for row in 0..m {
        for (j, c) in fc.iter().enumerate() {
            matrix[row][row + j] = c.clone();
        }
    }
    for row in 0..n {
        for (j, c) in gc.iter().enumerate() {
            matrix[m + row][row + j] = c.clone();
        }
    }
    Ok(poly_determinant(matrix, f.vars()))
}

/// Determinant of a matrix of polynomials by the Bareiss fraction-free scheme.
fn poly_determinant(mut m: Vec<Vec<Polynomial>>, vars: &[String]) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::constant(vars, BigRational::one());
    }
    let mut sign_flip = false;
    let mut prev = Polynomial::constant(vars, BigRational::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Polynomial::zero(vars);
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = exact_div(&num, &prev).expect("Bareiss division is exact");
            }
            m[i][k] = Polynomial::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

/// Exact division in the polynomial ring; `None` if the division leaves a
/// remainder. Divisor leading term is taken in the graded-lex order.
pub fn exact_div(num: &Polynomial, den: &Polynomial) -> Option<Polynomial> {
    assert!(!den.is_zero(), "division by the zero polynomial");
    let vars = num.vars().to_vec();
    let mut rem = num.clone();
    let mut quot = Polynomial::zero(&vars);
    let (dlm, dlc) = den.terms().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
    while !rem.is_zero() {
        let (rlm, rlc) = {
            let (m, c) = rem.terms().next_back().unwrap();
            (m.clone(), c.clone())
        };
        let mut exps = Vec::with_capacity(rlm.0.len());
        for (a, b) in rlm.0.iter().zip(&dlm.0) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        let t = Polynomial::from_terms(&vars, [(exps, &rlc / &dlc)]);
        quot = &quot + &t;
        rem = &rem - &(&t * den);
    }
    Some(quot)
}

/// Gcd of multivariate polynomials over the rationals, normalized so that the
/// leading coefficient (graded-lex) is one. Denominators are cleared and the
/// computation runs as a primitive polynomial remainder sequence on dense
/// integer polynomials, stripping contents at every step.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let vars = a.vars().to_vec();
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    let za = zp::from_poly(a);
    let zb = zp::from_poly(b);
    let g = zp::gcd(&za, &zb);
    monic(&zp::to_poly(&g, &vars))
}

/// Dense integer polynomial arithmetic for the gcd kernel. Variables are
/// nested by slot: a polynomial is either a constant or a coefficient vector
/// in its outermost used variable.
mod zp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    use crate::poly::Polynomial;

    /// Dense recursive representation: coefficients of `x_level^k` live one
    /// level down; level 0 is the constant layer.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub enum Zp {
        C(BigInt),
        V(Vec<Zp>),
    }

    impl Zp {
        pub fn zero() -> Zp {
            Zp::C(BigInt::zero())
        }

        pub fn is_zero(&self) -> bool {
            match self {
                Zp::C(c) => c.is_zero(),
                Zp::V(cs) => cs.iter().all(|c| c.is_zero()),
            }
        }

        fn trim(cs: Vec<Zp>) -> Zp {
            let mut cs = cs;
            while cs.last().is_some_and(|c| c.is_zero()) {
                cs.pop();
            }
            match cs.len() {
                0 => Zp::zero(),
                1 => cs.pop().unwrap(),
                _ => Zp::V(cs),
            }
        }

        /// Degree in the top variable of this layer (constants are layer 0).
        fn deg(&self) -> usize {
            match self {
                Zp::C(_) => 0,
                Zp::V(cs) => cs.len().saturating_sub(1),
            }
        }

        fn coeffs(&self) -> Vec<Zp> {
            match self {
                Zp::C(_) => vec![self.clone()],
                Zp::V(cs) => cs.clone(),
            }
        }
    }

    pub fn from_poly(p: &Polynomial) -> Zp {
        // Clear denominators.
        let lcm = p
            .terms()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let nvars = p.vars().len();
        let mut acc = Zp::zero();
        for (m, c) in p.terms() {
            let int = c.numer() * &lcm / c.denom();
            let mut term = Zp::C(int);
            for level in 0..nvars {
                let e = m.0[level] as usize;
                if e > 0 {
                    // term *= x_level^e at the appropriate nesting depth.
                    term = shift_up(term, level, e, nvars);
                }
            }
            acc = add(&acc, &term);
        }
        acc
    }

    /// Multiply by x_level^e. The nesting convention puts the LAST variable
    /// outermost, so slot `level` sits at depth `nvars - 1 - level`.
    fn shift_up(t: Zp, level: usize, e: usize, nvars: usize) -> Zp {
        fn go(t: Zp, depth: usize, e: usize) -> Zp {
            if depth == 0 {
                let mut cs = vec![Zp::zero(); e];
                cs.push(t);
                return Zp::trim(cs);
            }
            match t {
                Zp::C(_) => go_wrap(t, depth, e),
                Zp::V(cs) => Zp::trim(cs.into_iter().map(|c| go(c, depth - 1, e)).collect()),
            }
        }
        fn go_wrap(t: Zp, depth: usize, e: usize) -> Zp {
            // A constant viewed at a deeper layer: descend through virtual
            // singleton layers.
            let inner = if depth == 0 {
                let mut cs = vec![Zp::zero(); e];
                cs.push(t);
                return Zp::trim(cs);
            } else {
                go_wrap(t, depth - 1, e)
            };
            inner
        }
        let depth = nvars - 1 - level;
        go(t, depth, e)
    }

    pub fn to_poly(z: &Zp, vars: &[String]) -> Polynomial {
        let mut terms: Vec<(Vec<u32>, BigRational)> = Vec::new();
        let nvars = vars.len();
        collect(z, nvars, &mut vec![0u32; nvars], &mut terms);
        Polynomial::from_terms(vars, terms)
    }

    fn collect(z: &Zp, layer: usize, exps: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, BigRational)>) {
        match z {
            Zp::C(c) => {
                if !c.is_zero() {
                    out.push((exps.clone(), BigRational::from(c.clone())));
                }
            }
            Zp::V(cs) => {
                let var = layer - 1;
                for (k, c) in cs.iter().enumerate() {
                    exps[var] = k as u32;
                    collect(c, layer - 1, exps, out);
                    exps[var] = 0;
                }
                exps[var] = 0;
            }
        }
    }

    pub fn add(a: &Zp, b: &Zp) -> Zp {
        match (a, b) {
            (Zp::C(x), Zp::C(y)) => Zp::C(x + y),
            (Zp::V(xs), Zp::C(_)) => {
                let mut out = xs.clone();
                if out.is_empty() {
                    return b.clone();
                }
                out[0] = add(&out[0], b);
                Zp::trim(out)
            }
            (Zp::C(_), Zp::V(_)) => add(b, a),
            (Zp::V(xs), Zp::V(ys)) => {
                let len = xs.len().max(ys.len());
                let mut out = Vec::with_capacity(len);
                let zero = Zp::zero();
                for i in 0..len {
                    out.push(add(xs.get(i).unwrap_or(&zero), ys.get(i).unwrap_or(&zero)));
                }
                Zp::trim(out)
            }
        }
    }

    pub fn neg(a: &Zp) -> Zp {
        match a {
            Zp::C(x) => Zp::C(-x),
            Zp::V(xs) => Zp::V(xs.iter().map(neg).collect()),
        }
    }

    pub fn mul(a: &Zp, b: &Zp) -> Zp {
        if a.is_zero() || b.is_zero() {
            return Zp::zero();
        }
        match (a, b) {
            (Zp::C(x), Zp::C(y)) => Zp::C(x * y),
            (Zp::V(xs), Zp::C(_)) => Zp::trim(xs.iter().map(|c| mul(c, b)).collect()),
            (Zp::C(_), Zp::V(_)) => mul(b, a),
            (Zp::V(xs), Zp::V(ys)) => {
                let mut out = vec![Zp::zero(); xs.len() + ys.len() - 1];
                for (i, x) in xs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in ys.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        out[i + j] = add(&out[i + j], &mul(x, y));
                    }
                }
                Zp::trim(out)
            }
        }
    }

    /// Gcd of all integer constants inside.
    fn int_content(a: &Zp, acc: &mut BigInt) {
        match a {
            Zp::C(c) => *acc = acc.gcd(c),
            Zp::V(cs) => {
                for c in cs {
                    if acc.is_one() {
                        return;
                    }
                    int_content(c, acc);
                }
            }
        }
    }

    fn div_int(a: &Zp, d: &BigInt) -> Zp {
        match a {
            Zp::C(c) => Zp::C(c / d),
            Zp::V(cs) => Zp::V(cs.iter().map(|c| div_int(c, d)).collect()),
        }
    }

    /// Remove the integer content and normalize the sign of the leading
    /// constant.
    fn int_primitive(a: &Zp) -> Zp {
        if a.is_zero() {
            return Zp::zero();
        }
        let mut g = BigInt::zero();
        int_content(a, &mut g);
        let mut out = if g.is_one() { a.clone() } else { div_int(a, &g) };
        if leading_constant(&out).is_negative() {
            out = neg(&out);
        }
        out
    }

    fn leading_constant(a: &Zp) -> BigInt {
        match a {
            Zp::C(c) => c.clone(),
            Zp::V(cs) => leading_constant(cs.last().expect("trimmed nonzero")),
        }
    }

    /// Content of `a` in its top layer: the gcd of its coefficient layers.
    fn layer_content(a: &Zp) -> Zp {
        let coeffs = a.coeffs();
        let mut acc = Zp::zero();
        for c in coeffs {
            acc = gcd(&acc, &c);
            if acc.deg() == 0 {
                if let Zp::C(ref k) = acc {
                    if k.is_one() {
                        return acc;
                    }
                }
            }
        }
        acc
    }

    /// Exact division (a = q * b), panics if not exact.
    fn exact_div(a: &Zp, b: &Zp) -> Zp {
        if a.is_zero() {
            return Zp::zero();
        }
        if let Zp::C(d) = b {
            return div_int(a, d);
        }
        // Long division in the top layer with recursive coefficient division.
        let mut rem = a.coeffs();
        let bc = b.coeffs();
        let db = bc.len() - 1;
        let mut q = vec![Zp::zero(); rem.len().saturating_sub(db)];
        while rem.len() > db {
            let lead = rem.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let k = rem.len() - db;
            let factor = exact_div(&lead, &bc[db]);
            for i in 0..db {
                let s = mul(&factor, &bc[i]);
                rem[k + i] = add(&rem[k + i], &neg(&s));
            }
            q[k] = factor;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "division is not exact");
        Zp::trim(q)
    }

    /// Primitive-PRS gcd with content stripping at every remainder step.
    pub fn gcd(a: &Zp, b: &Zp) -> Zp {
        if a.is_zero() {
            return int_primitive(b);
        }
        if b.is_zero() {
            return int_primitive(a);
        }
        match (a, b) {
            (Zp::C(x), _) => {
                let mut g = x.abs();
                int_content(b, &mut g);
                Zp::C(g)
            }
            (_, Zp::C(_)) => gcd(b, a),
            (Zp::V(_), Zp::V(_)) => {
                let ca = layer_content(a);
                let cb = layer_content(b);
                let cont = gcd(&ca, &cb);
                let mut f = exact_div(a, &ca);
                let mut g = exact_div(b, &cb);
                while !g.is_zero() && g.deg() > 0 {
                    let r = prem(&f, &g);
                    f = g;
                    g = if r.is_zero() {
                        r
                    } else {
                        let c = layer_content(&r);
                        int_primitive(&exact_div(&r, &c))
                    };
                }
                if !g.is_zero() {
                    // A nonzero constant-layer remainder: the primitive parts
                    // are coprime.
                    return int_primitive(&cont);
                }
                let fp = exact_div(&f, &layer_content(&f));
                int_primitive(&mul(&cont, &fp))
            }
        }
    }

    /// Pseudo-remainder in the top layer, with contents stripped after every
    /// reduction step to stop coefficient growth.
    fn prem(f: &Zp, g: &Zp) -> Zp {
        let gc = g.coeffs();
        let dg = gc.len() - 1;
        let lead_g = &gc[dg];
        let mut rem = f.clone();
        loop {
            if rem.is_zero() {
                return rem;
            }
            let rc = rem.coeffs();
            let dr = if matches!(rem, Zp::C(_)) { 0 } else { rc.len() - 1 };
            if dr < dg {
                return rem;
            }
            let lead_r = rc.last().unwrap().clone();
            // lead_g * rem - lead_r * x^(dr-dg) * g
            let mut shifted = vec![Zp::zero(); dr - dg];
            for c in &gc {
                shifted.push(mul(&lead_r, c));
            }
            let shifted = Zp::trim(shifted);
            let scaled: Vec<Zp> = rc.iter().map(|c| mul(c, lead_g)).collect();
            let next = add(&Zp::trim(scaled), &neg(&shifted));
            if next.is_zero() {
                return next;
            }
            rem = int_primitive(&next);
        }
    }
}

/// Gcd of a list of polynomials.
pub fn poly_gcd_many(polys: &[Polynomial]) -> Polynomial {
    let mut it = polys.iter();
    let Some(first) = it.next() else {
        panic!("gcd of an empty list");
    };
    let mut acc = first.clone();
    for p in it {
        acc = poly_gcd(&acc, p);
    }
    monic(&acc)
}

fn monic(p: &Polynomial) -> Polynomial {
    match p.terms().next_back() {
        None => p.clone(),
        Some((_, lc)) => {
            let inv = BigRational::one() / lc.clone();
            p.scale(&inv)
        }
    }
}

/// Square-free part of a univariate-in-`v` polynomial: `p / gcd(p, dp/dv)`.
pub fn square_free_part(p: &Polynomial, v: usize) -> Polynomial {
    let dp = p.derivative(v);
    if dp.is_zero() {
        return monic(p);
    }
    let g = poly_gcd(p, &dp);
    monic(&exact_div(p, &g).expect("gcd divides"))
}

#[allow(dead_code)]
fn leading_monomial(p: &Polynomial) -> Option<Monomial> {
    p.terms().next_back().map(|(m, _)| m.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn p(text: &str) -> Polynomial {
        Polynomial::parse(text, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn resultant_of_parabola_and_line() {
        // Res_x(x^2 - y, x - y) expands to y^2 - y by the 3x3 determinant.
        let r = sylvester_resultant(&p("x^2-y"), &p("x-y"), "x").unwrap();
        assert_eq!(r, p("y^2-y"));
    }

    #[test]
    fn resultant_detects_common_factor() {
        let r = sylvester_resultant(&p("x"), &p("x"), "x").unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn resultant_of_two_lines_is_constant() {
        // Descending-power Sylvester rows with f first: det [[1,-1],[1,1]] = 2.
        let r = sylvester_resultant(&p("x-1"), &p("x+1"), "x").unwrap();
        assert_eq!(r, p("2"));
    }

    #[test]
    fn resultant_rejects_zero_input() {
        let err = sylvester_resultant(&Polynomial::zero(&["x", "y", "z"]), &p("x"), "x");
        assert_eq!(err, Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn resultant_classical_discriminant_shape() {
        // Res_x(x^2 + y, 2x) = 4y.
        let r = sylvester_resultant(&p("x^2+y"), &p("2x"), "x").unwrap();
        assert_eq!(r, p("4y"));
    }

    #[test]
    fn gcd_univariate() {
        let g = poly_gcd(&p("x^2-1"), &p("x^2-2x+1"));
        assert_eq!(g, p("x-1"));
    }

    #[test]
    fn gcd_multivariate() {
        let a = &p("x+y") * &p("x-z");
        let b = &p("x+y") * &p("y+z");
        let g = poly_gcd(&a, &b);
        assert_eq!(g, p("x+y"));
    }

    #[test]
    fn square_free_strips_multiplicity() {
        let f = &(&p("x-y") * &p("x-y")) * &p("x+1");
        let vi = 0;
        let sf = square_free_part(&f, vi);
        assert_eq!(sf, monic(&(&p("x-y") * &p("x+1"))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Resultant vanishes exactly when the two polynomials share a factor
        /// of positive x-degree, checked against constructed products.
        #[test]
        fn resultant_zero_iff_common_factor(
            a in factor_poly(),
            b in factor_poly(),
            c in factor_poly(),
            share in proptest::bool::ANY,
        ) {
            let f = if share { &a * &c } else { a.clone() };
            let g = &b * &c;
            prop_assume!(f.degree_in(0).unwrap_or(0) > 0);
            prop_assume!(g.degree_in(0).unwrap_or(0) > 0);
            let r = sylvester_resultant(&f, &g, "x").unwrap();
            if share && c.degree_in(0).unwrap_or(0) > 0 {
                prop_assert!(r.is_zero());
            } else {
                let gcd = poly_gcd(&f, &g);
                prop_assert_eq!(r.is_zero(), gcd.degree_in(0).unwrap_or(0) > 0);
            }
        }
    }

    fn factor_poly() -> impl Strategy<Value = Polynomial> {
        // Small polynomials in x and y, guaranteed nonzero.
        (
            -3i64..=3,
            -3i64..=3,
            -3i64..=3,
            0u32..3,
            0u32..3,
        )
            .prop_map(|(c0, c1, c2, e1, e2)| {
                let mut terms = vec![(vec![0, 0, 0], BigRational::from(BigInt::from(c0)))];
                terms.push((vec![e1 + 1, 0, 0], BigRational::from(BigInt::from(c1))));
                terms.push((vec![0, e2, 0], BigRational::from(BigInt::from(c2))));
                let f = Polynomial::from_terms(&["x", "y", "z"], terms);
                if f.is_zero() {
                    Polynomial::parse("x+1", &["x", "y", "z"]).unwrap()
                } else {
                    f
                }
            })
    }
}
