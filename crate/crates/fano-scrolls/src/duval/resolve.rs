//! Iterated blow-up resolution of isolated double points.
//!
//! Every singular point in sight is blown up inside a chosen affine chart of
//! the ambient blow-up; the strict transform restricted to the exceptional
//! plane is the projectivized tangent cone, whose rank decides the local
//! picture: a smooth conic (rank 3), two lines through a point (rank 2), or
//! a double line (rank 1). Exceptional curves are tracked as parametrized
//! curves through the sites below them, and edges of the dual graph are
//! collected where curves meet at smooth points of the strict transform.
//!
//! Every blown-up point must have multiplicity exactly two and the final
//! surface must be smooth; the pull-back of the canonical class is then
//! unchanged at every step, so each exceptional curve is a smooth rational
//! curve with self-intersection -2. Any violation (multiplicity three, a
//! singular curve on the strict transform) aborts the resolution as a
//! configuration that is not a rational double point.
//!
//! Conjugate points and conjugate curve pairs are handled by the dynamic
//! tower algebra of [`super::tower`]: a single generic representative is
//! processed per orbit, and the dual graph is expanded afterwards by the
//! orbit degrees. Zero-divisor splits restart the resolution with the
//! offending level refined.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::Polynomial;

use super::tower::{Elem, Level, LevelKey, SplitRequest, Tower, UPoly};
use super::{check_isolated, DualGraph, DuvalError, Germ};

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

/// Resolve an isolated double point by iterated blow-ups and return the dual
/// graph of the exceptional curves, all of which carry self-intersection -2.
pub fn resolve(germ: &Germ, max_blowups: u32) -> Result<DualGraph, DuvalError> {
    if germ.is_smooth_point() {
        return Ok(DualGraph::new(Vec::new(), Vec::new()));
    }
    if !check_isolated(germ)? {
        return Err(DuvalError::NonIsolated);
    }
    let mut store: BTreeMap<LevelKey, Vec<StoredFactor>> = BTreeMap::new();
    let mut restarts = 0usize;
    loop {
        let mut ctx = Ctx {
            store: &store,
            classes: Vec::new(),
            edges: Vec::new(),
            blowups: 0,
            max_blowups,
        };
        let tower = Tower::default();
        let tri = TriPoly::from_polynomial(germ.poly());
        let site = SiteInput {
            path: Vec::new(),
            deps: Vec::new(),
            tower,
            germ: tri,
            incidents: Vec::new(),
        };
        match process_site(&mut ctx, site) {
            Ok(()) => return Ok(assemble(&ctx)),
            Err(Abort::Fail(e)) => return Err(e),
            Err(Abort::Split(req)) => {
                restarts += 1;
                if std::env::var("RESOLVE_TRACE").is_ok() {
                    eprintln!(
                        "split #{restarts}: key=({:?},{}) factor_deg={:?}",
                        req.key.site_path,
                        req.key.seq,
                        req.factor.degree()
                    );
                }
                assert!(restarts < 256, "resolution did not stabilize after splits");
                let entry = store.entry(req.key.clone()).or_default();
                entry.push(StoredFactor {
                    coeffs: req.factor.0.iter().map(flatten).collect(),
                });
            }
        }
    }
}

enum Abort {
    Split(SplitRequest),
    Fail(DuvalError),
}

impl From<SplitRequest> for Abort {
    fn from(r: SplitRequest) -> Abort {
        Abort::Split(r)
    }
}

fn not_du_val() -> Abort {
    Abort::Fail(DuvalError::NotDuValConfiguration)
}

/// A stored factor of a level modulus, kept in a tower-independent flat form
/// (exponent maps over level keys).
struct StoredFactor {
    coeffs: Vec<FlatElem>,
}

type FlatElem = Vec<(Vec<(LevelKey, u32)>, BigRational)>;

fn flatten(e: &Elem) -> FlatElem {
    // Positions are resolved lazily; flatten against an implicit depth by
    // walking the nesting from the top. The caller records per-position keys
    // separately, so here we flatten positionally and attach keys on load.
    // To keep the representation self-contained we tag positions by depth
    // index; keys are substituted at unflatten time.
    fn walk(e: &Elem, depth_from_top: usize, acc_exp: &mut Vec<(usize, u32)>, out: &mut Vec<(Vec<(usize, u32)>, BigRational)>) {
        match e {
            Elem::Q(r) => {
                if !r.is_zero() {
                    out.push((acc_exp.clone(), r.clone()));
                }
            }
            Elem::Ext(cs) => {
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        acc_exp.push((depth_from_top, k as u32));
                    }
                    walk(c, depth_from_top + 1, acc_exp, out);
                    if k > 0 {
                        acc_exp.pop();
                    }
                }
            }
        }
    }
    let mut raw = Vec::new();
    walk(e, 0, &mut Vec::new(), &mut raw);
    // Depth-from-top positions are converted to keys by the split requester,
    // which knows its tower; SplitRequest factors live over the prefix below
    // the split level, and the prefix keys are recorded in the request.
    raw.into_iter()
        .map(|(exps, c)| {
            (
                exps.into_iter()
                    .map(|(pos, e)| {
                        (
                            LevelKey {
                                site_path: vec![u32::MAX],
                                seq: pos as u32,
                            },
                            e,
                        )
                    })
                    .collect(),
                c,
            )
        })
        .collect()
}

/// Evaluate a flat element over the current tower. The flat positions count
/// from the top of the prefix the factor was created over; they are matched
/// against the prefix below the level being refined.
fn unflatten(tower: &Tower, prefix_len: usize, flat: &FlatElem) -> Option<Elem> {
    let mut acc = tower.zero();
    for (exps, c) in flat {
        let mut term = tower.from_rational(c.clone());
        for (poskey, e) in exps {
            let pos_from_top = poskey.seq as usize;
            if pos_from_top >= prefix_len {
                return None;
            }
            let level_index = prefix_len - 1 - pos_from_top;
            let gen = tower.generator(level_index);
            for _ in 0..*e {
                term = tower.mul(&term, &gen);
            }
        }
        acc = tower.add(&acc, &term);
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// Trivariate polynomials over a tower
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct TriPoly {
    terms: BTreeMap<[u32; 3], Elem>,
}

impl TriPoly {
    fn from_polynomial(p: &Polynomial) -> TriPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in p.terms() {
            terms.insert([m.0[0], m.0[1], m.0[2]], Elem::Q(c.clone()));
        }
        TriPoly { terms }
    }

    /// Re-embed all coefficients after the tower grew by `added` levels.
    fn lifted(&self, tower: &Tower, old_depth: usize) -> TriPoly {
        TriPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, tower.lift(c, old_depth)))
                .collect(),
        }
    }

    /// Drop coefficients that vanish in every branch; afterwards the term
    /// support is meaningful in all branches.
    fn normalized(&self, tower: &Tower) -> Result<TriPoly, SplitRequest> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if !tower.is_zero(c)? {
                terms.insert(*e, c.clone());
            }
        }
        Ok(TriPoly { terms })
    }

    fn is_structurally_zero(&self) -> bool {
        self.terms.values().all(|c| c.structurally_zero())
    }

    /// Minimal total degree of the (normalized) support.
    fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).min()
    }

    fn degree_part(&self, d: u32) -> TriPoly {
        TriPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[0] + e[1] + e[2] == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    fn coeff(&self, e: [u32; 3]) -> Option<&Elem> {
        self.terms.get(&e)
    }

    fn partial(&self, tower: &Tower, var: usize) -> TriPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            let factor = tower.from_rational(BigRational::from(num_bigint::BigInt::from(e[var])));
            let nc = tower.mul(c, &factor);
            merge_term(&mut terms, tower, ne, nc);
        }
        TriPoly { terms }
    }

    /// Chart `c` of the blow-up at the origin: substitute `x_j -> x_j x_c`
    /// for `j != c` and divide by `x_c^m` where `m` is the multiplicity.
    fn chart_strict(&self, m: u32, chart: usize) -> TriPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let total = e[0] + e[1] + e[2];
            let mut ne = *e;
            ne[chart] = total - m;
            terms.insert(ne, c.clone());
        }
        TriPoly { terms }
    }

    /// Substitute `x_var -> x_var + alpha`.
    fn translate(&self, tower: &Tower, var: usize, alpha: &Elem) -> TriPoly {
        if tower.is_zero_unchecked(alpha) {
            return self.clone();
        }
        let mut terms: BTreeMap<[u32; 3], Elem> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            // (x + alpha)^k expanded with binomials, highest power first.
            let mut alpha_pow = tower.one();
            for j in (0..=k).rev() {
                let scale = tower.mul(&tower.from_rational(binomial(k, j)), &alpha_pow);
                let nc = tower.mul(c, &scale);
                let mut ne = *e;
                ne[var] = j;
                merge_term(&mut terms, tower, ne, nc);
                if j > 0 {
                    alpha_pow = tower.mul(&alpha_pow, alpha);
                }
            }
        }
        TriPoly { terms }
    }

    /// Evaluate along a polynomial parametrization of a curve.
    fn eval_on_params(&self, tower: &Tower, params: &[UPoly; 3]) -> UPoly {
        let mut acc = UPoly::zero();
        for (e, c) in &self.terms {
            let mut term = UPoly(vec![c.clone()]);
            for (i, p) in params.iter().enumerate() {
                for _ in 0..e[i] {
                    term = tower.upoly_mul(&term, p);
                }
            }
            acc = tower.upoly_add(&acc, &term);
        }
        acc
    }
}

fn merge_term(terms: &mut BTreeMap<[u32; 3], Elem>, tower: &Tower, e: [u32; 3], c: Elem) {
    if c.structurally_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = tower.add(o.get(), &c);
            if sum.structurally_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn binomial(n: u32, k: u32) -> BigRational {
    let mut acc = num_bigint::BigInt::from(1);
    for i in 0..k.min(n - k) {
        acc = acc * num_bigint::BigInt::from(n - i) / num_bigint::BigInt::from(i + 1);
    }
    BigRational::from(acc)
}

impl Tower {
    /// Structural-only zero check, used where a split is impossible.
    fn is_zero_unchecked(&self, e: &Elem) -> bool {
        e.structurally_zero()
    }
}

// ---------------------------------------------------------------------------
// Rational-function curve parametrizations
// ---------------------------------------------------------------------------

/// A component of a curve parametrization: `num/den` with `den(0)` a unit.
#[derive(Debug, Clone)]
struct Rat {
    num: UPoly,
    den: UPoly,
}

impl Rat {
    fn from_upoly(p: UPoly, tower: &Tower) -> Rat {
        Rat {
            num: p,
            den: UPoly(vec![tower.one()]),
        }
    }

    fn zero() -> Rat {
        Rat {
            num: UPoly::zero(),
            den: UPoly(vec![Elem::Q(BigRational::from(num_bigint::BigInt::from(1)))]),
        }
    }

    /// Order of vanishing at the parameter origin; `None` for the zero
    /// component.
    fn ord(&self, tower: &Tower) -> Result<Option<usize>, SplitRequest> {
        for (i, c) in self.num.0.iter().enumerate() {
            if !tower.is_zero(c)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn coeff_at(&self, k: usize) -> Elem {
        self.num.coeff(k)
    }

    fn den0(&self) -> Elem {
        self.den.coeff(0)
    }

    fn value0(&self, tower: &Tower) -> Result<Elem, SplitRequest> {
        let inv = tower.invert(&self.den0())?;
        Ok(tower.mul(&self.num.coeff(0), &inv))
    }

    fn sub_const(&self, tower: &Tower, c: &Elem) -> Rat {
        // num/den - c = (num - c*den)/den
        let cd = tower.upoly_scale(&self.den, c);
        Rat {
            num: tower.upoly_sub(&self.num, &cd),
            den: self.den.clone(),
        }
    }

    fn lifted(&self, tower: &Tower, old_depth: usize) -> Rat {
        Rat {
            num: UPoly(self.num.0.iter().map(|c| tower.lift(c, old_depth)).collect()),
            den: UPoly(self.den.0.iter().map(|c| tower.lift(c, old_depth)).collect()),
        }
    }
}

/// An exceptional curve passing through the current site, with its global
/// class id and a parametrization centered at the site origin.
#[derive(Debug, Clone)]
struct Incident {
    class: usize,
    param: [Rat; 3],
}

// ---------------------------------------------------------------------------
// Bookkeeping of classes and edge records
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct ClassInfo {
    /// Tower levels the curve depends on, with their degrees.
    levels: Vec<(LevelKey, usize)>,
    /// For conjugate line pairs: the quadratic level distinguishing the two
    /// members.
    pair_level: Option<LevelKey>,
}

#[derive(Debug, Clone)]
struct EdgeRec {
    a: usize,
    b: usize,
    mult: u32,
    /// Union of the endpoint level sets.
    levels: Vec<(LevelKey, usize)>,
    /// Set for the edge between the two members of one pair class.
    intra_pair: Option<LevelKey>,
    /// Flip the digit of this (quadratic) level when projecting endpoint
    /// `b`: the edge targets the conjugate member of the pair.
    twist_b: Option<LevelKey>,
}

struct Ctx<'s> {
    store: &'s BTreeMap<LevelKey, Vec<StoredFactor>>,
    classes: Vec<ClassInfo>,
    edges: Vec<EdgeRec>,
    blowups: u32,
    max_blowups: u32,
}

impl Ctx<'_> {
    fn new_class(&mut self, levels: Vec<(LevelKey, usize)>, pair: Option<LevelKey>) -> usize {
        self.classes.push(ClassInfo {
            levels,
            pair_level: pair,
        });
        self.classes.len() - 1
    }

    fn record_edge(&mut self, a: usize, b: usize, mult: u32) {
        self.record_edge_twisted(a, b, mult, None);
    }

    fn record_edge_twisted(&mut self, a: usize, b: usize, mult: u32, twist_b: Option<LevelKey>) {
        let mut levels = self.classes[a].levels.clone();
        for lv in &self.classes[b].levels {
            if !levels.iter().any(|(k, _)| k == &lv.0) {
                levels.push(lv.clone());
            }
        }
        self.edges.push(EdgeRec {
            a,
            b,
            mult,
            levels,
            intra_pair: None,
            twist_b,
        });
    }

    fn record_intra_pair_edge(&mut self, class: usize) {
        let info = self.classes[class].clone();
        let pair = info.pair_level.clone().expect("intra-pair edge on a pair class");
        self.edges.push(EdgeRec {
            a: class,
            b: class,
            mult: 1,
            levels: info.levels,
            intra_pair: Some(pair),
            twist_b: None,
        });
    }
}

// ---------------------------------------------------------------------------
// Site processing
// ---------------------------------------------------------------------------

struct SiteInput {
    path: Vec<u32>,
    /// Levels the site's coordinates depend on (with degrees), in tower
    /// order. These become the levels of curve classes born here.
    deps: Vec<(LevelKey, usize)>,
    tower: Tower,
    germ: TriPoly,
    incidents: Vec<Incident>,
}

fn process_site(ctx: &mut Ctx, site: SiteInput) -> Result<(), Abort> {
    if std::env::var("RESOLVE_TRACE").is_ok() {
        eprintln!(
            "site path={:?} depth={} germ_terms={}",
            site.path,
            site.tower.depth(),
            site.germ.terms.len()
        );
    }
    ctx.blowups += 1;
    if ctx.blowups > ctx.max_blowups {
        return Err(Abort::Fail(DuvalError::MaxBlowups(ctx.max_blowups)));
    }
    let tower = site.tower.clone();
    let germ = site.germ.normalized(&tower).map_err(Abort::Split)?;
    let m = germ.order().unwrap_or(0);
    if m >= 3 {
        return Err(not_du_val());
    }
    assert_eq!(m, 2, "sites are created only at singular points");

    // Strict transforms of the incident curves.
    let mut strict_incidents = Vec::new();
    for inc in &site.incidents {
        strict_incidents.push(strict_transform(&tower, inc).map_err(Abort::Split)?);
    }

    let quad = germ.degree_part(2);
    let cone = analyze_cone(&tower, &quad).map_err(Abort::Split)?;
    match cone {
        Cone::Rank3 => rank3_site(ctx, &site, &tower, strict_incidents),
        Cone::Rank2 => rank2_site(ctx, &site, &tower, &germ, strict_incidents, m),
        Cone::Rank1 { line } => rank1_site(ctx, &site, &tower, &germ, line, strict_incidents, m),
    }
}

/// Strict transform of an incident through the blown-up origin: the chart of
/// its tangent direction, the recentered parametrization in that chart, and
/// the direction as a projective point.
#[derive(Clone)]
struct StrictIncident {
    class: usize,
    chart: usize,
    /// Parametrization in chart coordinates, centered at the direction point.
    param: [Rat; 3],
    /// Homogeneous coordinates of the direction point.
    dir: [Elem; 3],
    /// Order of contact of the curve with the exceptional plane.
    exceptional_contact: u32,
}

fn strict_transform(tower: &Tower, inc: &Incident) -> Result<StrictIncident, SplitRequest> {
    let ords: Vec<Option<usize>> = inc
        .param
        .iter()
        .map(|r| r.ord(tower))
        .collect::<Result<_, _>>()?;
    let m = ords
        .iter()
        .flatten()
        .min()
        .copied()
        .expect("incident parametrization is not the zero curve");
    assert!(m >= 1, "incident must pass through the site origin");
    // Direction point, cross-multiplied by denominators.
    let d0 = [
        inc.param[0].den0(),
        inc.param[1].den0(),
        inc.param[2].den0(),
    ];
    let mut dir = [tower.zero(), tower.zero(), tower.zero()];
    for i in 0..3 {
        let mut v = inc.param[i].coeff_at(m);
        for (j, dj) in d0.iter().enumerate() {
            if j != i {
                v = tower.mul(&v, dj);
            }
        }
        dir[i] = v;
    }
    let chart = {
        let mut chart = None;
        for (i, o) in ords.iter().enumerate() {
            if *o == Some(m) && !tower.is_zero(&dir[i])? {
                chart = Some(i);
                break;
            }
        }
        chart.expect("some component realizes the minimal order")
    };
    // New components: chart stays, others become ratios. Cancel t^m.
    let num_c_shift = UPoly(inc.param[chart].num.0[m..].to_vec());
    let den_c = inc.param[chart].den.clone();
    let mut param: [Rat; 3] = [Rat::zero(), Rat::zero(), Rat::zero()];
    for i in 0..3 {
        if i == chart {
            param[i] = inc.param[i].clone();
            continue;
        }
        let oi = ords[i];
        let num = match oi {
            None => UPoly::zero(),
            Some(_) => {
                // (num_i / den_i) / (num_c / den_c) with t^m cancelled:
                // num_i is divisible by t^m only coefficient-wise after the
                // shift below; o_i >= m guarantees exactness.
                let shifted = UPoly(inc.param[i].num.0[m.min(inc.param[i].num.0.len())..].to_vec());
                tower.upoly_mul(&shifted, &den_c)
            }
        };
        let den = tower.upoly_mul(&inc.param[i].den, &num_c_shift);
        param[i] = Rat { num, den };
    }
    // Exceptional contact: order of the chart component (the local equation
    // of the exceptional divisor cycle along the curve).
    let contact = param[chart].ord(tower)?.expect("chart component vanishes at origin") as u32;
    // Recenter the non-chart components at the direction point.
    for i in 0..3 {
        if i == chart {
            continue;
        }
        if param[i].num.is_zero() {
            continue;
        }
        let v = param[i].value0(tower)?;
        param[i] = param[i].sub_const(tower, &v);
    }
    Ok(StrictIncident {
        class: inc.class,
        chart,
        param,
        dir,
        exceptional_contact: contact,
    })
}

// ---------------------------------------------------------------------------
// Tangent cone analysis
// ---------------------------------------------------------------------------

/// A linear form on the exceptional projective plane.
type LinForm = [Elem; 3];

enum Cone {
    Rank3,
    Rank2,
    Rank1 { line: LinForm },
}

/// Decompose the quadratic tangent cone by rank.
fn analyze_cone(tower: &Tower, quad: &TriPoly) -> Result<Cone, SplitRequest> {
    // Symmetric matrix entries (doubled diagonal convention is unnecessary:
    // rank over a field of characteristic zero can use 2*q_ii and q_ij).
    let two = tower.from_rational(BigRational::from(num_bigint::BigInt::from(2)));
    let entry = |i: usize, j: usize| -> Elem {
        if i == j {
            let mut e = [0u32; 3];
            e[i] = 2;
            let c = quad.coeff(e).cloned().unwrap_or_else(|| tower.zero());
            tower.mul(&two, &c)
        } else {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            quad.coeff(e).cloned().unwrap_or_else(|| tower.zero())
        }
    };
    let mut mat = [[tower.zero(), tower.zero(), tower.zero()],
        [tower.zero(), tower.zero(), tower.zero()],
        [tower.zero(), tower.zero(), tower.zero()]];
    for i in 0..3 {
        for j in 0..3 {
            mat[i][j] = entry(i, j);
        }
    }
    let rank = matrix_rank(tower, &mut mat.clone())?;
    match rank {
        3 => Ok(Cone::Rank3),
        2 => Ok(Cone::Rank2),
        1 => Ok(Cone::Rank1 {
            line: rank1_line(tower, quad)?,
        }),
        _ => unreachable!("a double point has a nonzero tangent cone"),
    }
}

fn matrix_rank(tower: &Tower, m: &mut [[Elem; 3]; 3]) -> Result<usize, SplitRequest> {
    let mut rank = 0;
    for col in 0..3 {
        let mut pivot = None;
        for row in rank..3 {
            if !tower.is_zero(&m[row][col])? {
                pivot = Some(row);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = tower.invert(&m[rank][col])?;
        for row in 0..3 {
            if row == rank {
                continue;
            }
            if tower.is_zero(&m[row][col])? {
                continue;
            }
            let factor = tower.mul(&m[row][col], &inv);
            for c in 0..3 {
                let sub = tower.mul(&factor, &m[rank][c]);
                m[row][c] = tower.sub(&m[row][c], &sub);
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Kernel direction of a rank-2 symmetric form, as a projective point.
fn kernel_vector(tower: &Tower, quad: &TriPoly) -> Result<[Elem; 3], SplitRequest> {
    let two = tower.from_rational(BigRational::from(num_bigint::BigInt::from(2)));
    let entry = |i: usize, j: usize| -> Elem {
        if i == j {
            let mut e = [0u32; 3];
            e[i] = 2;
            let c = quad.coeff(e).cloned().unwrap_or_else(|| tower.zero());
            tower.mul(&two, &c)
        } else {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            quad.coeff(e).cloned().unwrap_or_else(|| tower.zero())
        }
    };
    // Solve M v = 0 by elimination over the tower.
    let mut m: Vec<[Elem; 4]> = Vec::new();
    for i in 0..3 {
        m.push([entry(i, 0), entry(i, 1), entry(i, 2), tower.zero()]);
    }
    // Reduced row echelon on the 3x3 part.
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for col in 0..3 {
        let mut pivot = None;
        for row in r..3 {
            if !tower.is_zero(&m[row][col])? {
                pivot = Some(row);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = tower.invert(&m[r][col])?;
        for c in 0..3 {
            m[r][c] = tower.mul(&m[r][c], &inv);
        }
        for row in 0..3 {
            if row != r && !tower.is_zero(&m[row][col])? {
                let factor = m[row][col].clone();
                for c in 0..3 {
                    let sub = tower.mul(&factor, &m[r][c]);
                    m[row][c] = tower.sub(&m[row][c], &sub);
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let free_col = (0..3)
        .find(|c| !pivot_cols.contains(c))
        .expect("rank 2 leaves one free column");
    let mut v = [tower.zero(), tower.zero(), tower.zero()];
    v[free_col] = tower.one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = tower.neg(&m[row][free_col]);
    }
    Ok(v)
}

/// Factor a rank-2 ternary quadratic into two linear forms, possibly over a
/// quadratic extension. The extension level (if any) is appended by the
/// caller via the returned modulus.
enum Rank2Factors {
    Split(LinForm, LinForm),
    NeedsSqrt {
        /// Q = s0 * l0^2 + s1 * l1^2 with -s1/s0 not a known square;
        /// the members are l0 +- theta * l1 with theta^2 = -s1/s0.
        l0: LinForm,
        l1: LinForm,
        delta: Elem,
    },
}

fn factor_rank2_raw(tower: &Tower, quad: &TriPoly) -> Result<Rank2Factors, SplitRequest> {
    let coeff = |e: [u32; 3]| quad.coeff(e).cloned().unwrap_or_else(|| tower.zero());
    let sq = [coeff([2, 0, 0]), coeff([0, 2, 0]), coeff([0, 0, 2])];
    let mixed = |i: usize, j: usize| {
        let mut e = [0u32; 3];
        e[i] += 1;
        e[j] += 1;
        coeff(e)
    };
    // Try a variable with nonzero square coefficient.
    for i in 0..3 {
        if tower.is_zero(&sq[i])? {
            continue;
        }
        let (j, k) = others(i);
        // Q = a (x_i + p x_j + q x_k)^2 + Q'(x_j, x_k), Q' of rank one.
        let a = sq[i].clone();
        let inv2a = tower.invert(&tower.mul(&two(tower), &a))?;
        let p = tower.mul(&mixed(i, j), &inv2a);
        let q = tower.mul(&mixed(i, k), &inv2a);
        let mut l0 = [tower.zero(), tower.zero(), tower.zero()];
        l0[i] = tower.one();
        l0[j] = p.clone();
        l0[k] = q.clone();
        // Q' coefficients.
        let ap2 = tower.mul(&a, &tower.mul(&p, &p));
        let aq2 = tower.mul(&a, &tower.mul(&q, &q));
        let apq = tower.mul(&two(tower), &tower.mul(&a, &tower.mul(&p, &q)));
        let cjj = tower.sub(&sq[j], &ap2);
        let ckk = tower.sub(&sq[k], &aq2);
        let cjk = tower.sub(&mixed(j, k), &apq);
        // Q' = cjj x_j^2 + cjk x_j x_k + ckk x_k^2, rank one.
        let mut l1 = [tower.zero(), tower.zero(), tower.zero()];
        let r;
        if !tower.is_zero(&cjj)? {
            // Q' = cjj (x_j + cjk/(2cjj) x_k)^2
            let inv = tower.invert(&tower.mul(&two(tower), &cjj))?;
            l1[j] = tower.one();
            l1[k] = tower.mul(&cjk, &inv);
            r = cjj;
        } else if !tower.is_zero(&ckk)? {
            l1[k] = tower.one();
            r = ckk;
        } else {
            // Q' = cjk x_j x_k nonzero would have rank 2; impossible here.
            assert!(tower.is_zero(&cjk)?, "rank-2 residual cannot be a product");
            unreachable!("rank-2 cone with vanishing residual is rank 1");
        }
        // Q = a l0^2 + r l1^2 = a (l0 + theta l1)(l0 - theta l1),
        // theta^2 = -r/a.
        let delta = tower.neg(&tower.mul(&r, &tower.invert(&a)?));
        if let Some(s) = tower.try_rational_sqrt(&delta) {
            let mut lp = l0.clone();
            let mut lm = l0.clone();
            for t in 0..3 {
                let sl = tower.mul(&s, &l1[t]);
                lp[t] = tower.add(&lp[t], &sl);
                lm[t] = tower.sub(&lm[t], &sl);
            }
            return Ok(Rank2Factors::Split(lp, lm));
        }
        return Ok(Rank2Factors::NeedsSqrt { l0, l1, delta });
    }
    // All squares vanish: Q = sum of mixed terms, splits rationally.
    let c01 = mixed(0, 1);
    let c02 = mixed(0, 2);
    let c12 = mixed(1, 2);
    let z01 = tower.is_zero(&c01)?;
    let z02 = tower.is_zero(&c02)?;
    let z12 = tower.is_zero(&c12)?;
    let mk = |i: usize| {
        let mut l = [tower.zero(), tower.zero(), tower.zero()];
        l[i] = tower.one();
        l
    };
    if z12 && !z01 && !z02 {
        // x_0 (c01 x_1 + c02 x_2)
        let mut l = [tower.zero(), tower.zero(), tower.zero()];
        l[1] = c01;
        l[2] = c02;
        return Ok(Rank2Factors::Split(mk(0), l));
    }
    if z02 && !z01 && !z12 {
        let mut l = [tower.zero(), tower.zero(), tower.zero()];
        l[0] = c01;
        l[2] = c12;
        return Ok(Rank2Factors::Split(mk(1), l));
    }
    if z01 && !z02 && !z12 {
        let mut l = [tower.zero(), tower.zero(), tower.zero()];
        l[0] = c02;
        l[1] = c12;
        return Ok(Rank2Factors::Split(mk(2), l));
    }
    // Exactly one mixed term nonzero.
    if !z01 {
        return Ok(Rank2Factors::Split(mk(0), mk(1)));
    }
    if !z02 {
        return Ok(Rank2Factors::Split(mk(0), mk(2)));
    }
    Ok(Rank2Factors::Split(mk(1), mk(2)))
}

fn two(tower: &Tower) -> Elem {
    tower.from_rational(BigRational::from(num_bigint::BigInt::from(2)))
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// The reduced line of a rank-1 cone: `Q = c * l^2`.
fn rank1_line(tower: &Tower, quad: &TriPoly) -> Result<LinForm, SplitRequest> {
    let coeff = |e: [u32; 3]| quad.coeff(e).cloned().unwrap_or_else(|| tower.zero());
    for i in 0..3 {
        let mut e = [0u32; 3];
        e[i] = 2;
        let cii = coeff(e);
        if tower.is_zero(&cii)? {
            continue;
        }
        let (j, k) = others(i);
        let inv2 = tower.invert(&tower.mul(&two(tower), &cii))?;
        let mut l = [tower.zero(), tower.zero(), tower.zero()];
        l[i] = tower.one();
        let mut ej = [0u32; 3];
        ej[i] += 1;
        ej[j] += 1;
        l[j] = tower.mul(&coeff(ej), &inv2);
        let mut ek = [0u32; 3];
        ek[i] += 1;
        ek[k] += 1;
        l[k] = tower.mul(&coeff(ek), &inv2);
        return Ok(l);
    }
    unreachable!("a rank-1 quadric has a nonzero square term")
}

// ---------------------------------------------------------------------------
// Shared point helpers
// ---------------------------------------------------------------------------

/// Projective equality of two points of the exceptional plane.
fn projective_eq(tower: &Tower, p: &[Elem; 3], q: &[Elem; 3]) -> Result<bool, SplitRequest> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            let cross = tower.sub(
                &tower.mul(&p[i], &q[j]),
                &tower.mul(&p[j], &q[i]),
            );
            if !tower.is_zero(&cross)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn linform_eval(tower: &Tower, l: &LinForm, p: &[Elem; 3]) -> Elem {
    let mut acc = tower.zero();
    for i in 0..3 {
        acc = tower.add(&acc, &tower.mul(&l[i], &p[i]));
    }
    acc
}

/// First index with a nonzero homogeneous coordinate: the blow-up chart
/// containing the point.
fn chart_of_point(tower: &Tower, p: &[Elem; 3]) -> Result<usize, SplitRequest> {
    for i in 0..3 {
        if !tower.is_zero(&p[i])? {
            return Ok(i);
        }
    }
    panic!("projective point has a nonzero coordinate");
}

/// Affine coordinates of a point inside its chart: the chart slot is zero
/// (the exceptional plane), the others are ratios.
fn affine_in_chart(
    tower: &Tower,
    p: &[Elem; 3],
    chart: usize,
) -> Result<[Elem; 3], SplitRequest> {
    let inv = tower.invert(&p[chart])?;
    let mut out = [tower.zero(), tower.zero(), tower.zero()];
    for i in 0..3 {
        if i != chart {
            out[i] = tower.mul(&p[i], &inv);
        }
    }
    Ok(out)
}

/// The strict transform translated so that the given exceptional point is
/// the origin of its chart.
fn germ_at_point(
    tower: &Tower,
    germ: &TriPoly,
    m: u32,
    p: &[Elem; 3],
) -> Result<(usize, TriPoly, [Elem; 3]), SplitRequest> {
    let chart = chart_of_point(tower, p)?;
    let affine = affine_in_chart(tower, p, chart)?;
    let mut g = germ.chart_strict(m, chart);
    for i in 0..3 {
        if i != chart && !affine[i].structurally_zero() {
            g = g.translate(tower, i, &affine[i]);
        }
    }
    Ok((chart, g, affine))
}

/// Is the strict transform singular at the given exceptional point?
fn is_singular_at(
    tower: &Tower,
    germ: &TriPoly,
    m: u32,
    p: &[Elem; 3],
) -> Result<bool, SplitRequest> {
    let (_, g, _) = germ_at_point(tower, germ, m, p)?;
    let g = g.normalized(tower)?;
    match g.order() {
        None => Ok(true),
        Some(0) => panic!("point does not lie on the strict transform"),
        Some(1) => Ok(false),
        Some(_) => Ok(true),
    }
}

/// Level indices actually used by an element (0 = bottom of the tower).
fn levels_used(tower: &Tower, e: &Elem) -> Vec<usize> {
    fn walk(e: &Elem, depth_from_top: usize, used: &mut Vec<usize>, total: usize) {
        if let Elem::Ext(cs) = e {
            if cs.len() >= 2 {
                let idx = total - 1 - depth_from_top;
                if !used.contains(&idx) {
                    used.push(idx);
                }
            }
            for c in cs {
                walk(c, depth_from_top + 1, used, total);
            }
        }
    }
    let mut used = Vec::new();
    walk(e, 0, &mut used, tower.depth());
    used
}

/// Dependency set: the union of site deps and the levels used by the listed
/// elements, ordered by tower position.
fn deps_with_elems(
    tower: &Tower,
    base: &[(LevelKey, usize)],
    elems: &[&Elem],
) -> Vec<(LevelKey, usize)> {
    let mut used: Vec<usize> = Vec::new();
    for e in elems {
        for idx in levels_used(tower, e) {
            if !used.contains(&idx) {
                used.push(idx);
            }
        }
    }
    let mut out: Vec<(LevelKey, usize)> = Vec::new();
    for (idx, level) in tower.levels.iter().enumerate() {
        let in_base = base.iter().any(|(k, _)| k == &level.key);
        if in_base || used.contains(&idx) {
            out.push((level.key.clone(), level.degree));
        }
    }
    out
}

/// Tangent vector of a recentered parametrization, cross-multiplied into a
/// projective triple.
fn tangent_vector(tower: &Tower, param: &[Rat; 3]) -> [Elem; 3] {
    let d0 = [param[0].den0(), param[1].den0(), param[2].den0()];
    let mut out = [tower.zero(), tower.zero(), tower.zero()];
    for i in 0..3 {
        let mut v = param[i].coeff_at(1);
        for (j, dj) in d0.iter().enumerate() {
            if j != i {
                v = tower.mul(&v, dj);
            }
        }
        out[i] = v;
    }
    out
}

// ---------------------------------------------------------------------------
// Level creation with stored refinements
// ---------------------------------------------------------------------------

/// Build the modulus pieces for a new level, refining by any factors stored
/// for this key by earlier split requests.
fn create_level_pieces(
    ctx: &Ctx,
    tower: &Tower,
    key: &LevelKey,
    modulus: &UPoly,
) -> Result<Vec<UPoly>, SplitRequest> {
    let mut pieces = vec![modulus.clone()];
    let trace = std::env::var("RESOLVE_TRACE").is_ok();
    let Some(stored) = ctx.store.get(key) else {
        if trace {
            eprintln!("create_level ({:?},{}): no stored factors", key.site_path, key.seq);
        }
        return Ok(pieces);
    };
    if trace {
        eprintln!(
            "create_level ({:?},{}): {} stored factors, modulus deg {:?}",
            key.site_path,
            key.seq,
            stored.len(),
            modulus.degree()
        );
    }
    for factor in stored {
        let coeffs: Option<Vec<Elem>> = factor
            .coeffs
            .iter()
            .map(|f| unflatten(tower, tower.depth(), f))
            .collect();
        let Some(coeffs) = coeffs else {
            if trace {
                eprintln!("  stored factor failed to unflatten");
            }
            continue;
        };
        let f = UPoly(coeffs);
        if trace {
            eprintln!("  stored factor deg {:?}", f.degree());
        }
        if f.is_zero() {
            continue;
        }
        let mut next = Vec::new();
        for q in pieces {
            let dq = q.degree().unwrap_or(0);
            let g = tower.upoly_gcd(&q, &f)?;
            let dg = g.degree().unwrap_or(0);
            if dg == 0 || dg == dq {
                next.push(q);
            } else {
                let (cof, rem) = tower.upoly_divrem(&q, &g)?;
                debug_assert!(rem.is_zero());
                next.push(g);
                next.push(tower.upoly_monic(&cof)?);
            }
        }
        pieces = next;
    }
    if trace {
        eprintln!(
            "  pieces: {:?}",
            pieces.iter().map(|p| p.degree()).collect::<Vec<_>>()
        );
    }
    Ok(pieces)
}

// ---------------------------------------------------------------------------
// Site handlers per tangent cone rank
// ---------------------------------------------------------------------------

/// Rank 3: the exceptional curve is a smooth conic and the strict transform
/// is smooth along it; the site terminates here.
fn rank3_site(
    ctx: &mut Ctx,
    site: &SiteInput,
    tower: &Tower,
    incidents: Vec<StrictIncident>,
) -> Result<(), Abort> {
    let conic = ctx.new_class(site.deps.clone(), None);
    for inc in &incidents {
        ctx.record_edge(inc.class, conic, inc.exceptional_contact);
    }
    incident_pair_edges(ctx, tower, &incidents).map_err(Abort::Split)?;
    Ok(())
}

/// Pairwise edges among incidents meeting at the same smooth point.
fn incident_pair_edges(
    ctx: &mut Ctx,
    tower: &Tower,
    incidents: &[StrictIncident],
) -> Result<(), SplitRequest> {
    for i in 0..incidents.len() {
        for j in (i + 1)..incidents.len() {
            if projective_eq(tower, &incidents[i].dir, &incidents[j].dir)? {
                let ti = tangent_vector(tower, &incidents[i].param);
                let tj = tangent_vector(tower, &incidents[j].param);
                let mult = if projective_eq(tower, &ti, &tj)? { 2 } else { 1 };
                ctx.record_edge(incidents[i].class, incidents[j].class, mult);
            }
        }
    }
    Ok(())
}

/// Rank 2: two lines through a rational crossing point; only the crossing
/// can be singular. The factorization may require a square root: the level
/// is adjoined here (subject to stored refinements, which can resolve it
/// into two rational roots instead).
fn rank2_site(
    ctx: &mut Ctx,
    site: &SiteInput,
    tower: &Tower,
    germ: &TriPoly,
    incidents: Vec<StrictIncident>,
    m: u32,
) -> Result<(), Abort> {
    let quad = germ.degree_part(2);
    match factor_rank2_raw(tower, &quad).map_err(Abort::Split)? {
        Rank2Factors::Split(l1, l2) => {
            rank2_with_mode(ctx, site, tower, germ, Mode::Split(l1, l2), incidents, m)
        }
        Rank2Factors::NeedsSqrt { l0, l1, delta } => {
            let key = LevelKey {
                site_path: site.path.clone(),
                seq: 0,
            };
            let modulus = UPoly(vec![tower.neg(&delta), tower.zero(), tower.one()]);
            let pieces = create_level_pieces(ctx, tower, &key, &modulus).map_err(Abort::Split)?;
            if pieces.len() == 1 {
                // Genuine (or undecided) conjugate pair over a quadratic level.
                let mut ext = tower.clone();
                ext.levels.push(Level {
                    key: key.clone(),
                    modulus: pieces[0].clone(),
                    degree: 2,
                });
                let old_depth = tower.depth();
                let theta = ext.generator(ext.depth() - 1);
                let lift3 = |l: &LinForm, t: &Tower| -> LinForm {
                    [
                        t.lift(&l[0], old_depth),
                        t.lift(&l[1], old_depth),
                        t.lift(&l[2], old_depth),
                    ]
                };
                let l0e = lift3(&l0, &ext);
                let l1e = lift3(&l1, &ext);
                let mut member = [ext.zero(), ext.zero(), ext.zero()];
                for t in 0..3 {
                    member[t] = ext.add(&l0e[t], &ext.mul(&theta, &l1e[t]));
                }
                let lifted_germ = germ.lifted(&ext, old_depth);
                let lifted_incidents: Vec<StrictIncident> = incidents
                    .iter()
                    .map(|inc| StrictIncident {
                        class: inc.class,
                        chart: inc.chart,
                        param: [
                            inc.param[0].lifted(&ext, old_depth),
                            inc.param[1].lifted(&ext, old_depth),
                            inc.param[2].lifted(&ext, old_depth),
                        ],
                        dir: [
                            ext.lift(&inc.dir[0], old_depth),
                            ext.lift(&inc.dir[1], old_depth),
                            ext.lift(&inc.dir[2], old_depth),
                        ],
                        exceptional_contact: inc.exceptional_contact,
                    })
                    .collect();
                rank2_with_mode(
                    ctx,
                    site,
                    &ext,
                    &lifted_germ,
                    Mode::Pair(member, key),
                    lifted_incidents,
                    m,
                )
            } else {
                // Refined into two linear pieces. When the two roots are
                // conjugate over an existing quadratic level, the two lines
                // are one Galois orbit and must stay a single pair class.
                assert_eq!(pieces.len(), 2, "a quadratic splits into two linears");
                let mut lines = Vec::new();
                for piece in &pieces {
                    assert_eq!(piece.degree(), Some(1));
                    // Monic t + c has root -c.
                    let root = tower.neg(&piece.coeff(0));
                    let mut l = [tower.zero(), tower.zero(), tower.zero()];
                    for t in 0..3 {
                        l[t] = tower.add(&l0[t], &tower.mul(&root, &l1[t]));
                    }
                    lines.push(l);
                }
                let l2 = lines.pop().unwrap();
                let l1f = lines.pop().unwrap();
                if let Some(pair_key) =
                    conjugate_pair_level(tower, &l1f, &l2).map_err(Abort::Split)?
                {
                    rank2_with_mode(
                        ctx,
                        site,
                        tower,
                        germ,
                        Mode::Pair(l1f, pair_key),
                        incidents,
                        m,
                    )
                } else {
                    rank2_with_mode(ctx, site, tower, germ, Mode::Split(l1f, l2), incidents, m)
                }
            }
        }
    }
}

enum Mode {
    /// Two individually rational lines.
    Split(LinForm, LinForm),
    /// One conjugate pair: the generic member and its quadratic level.
    Pair(LinForm, LevelKey),
}

#[allow(clippy::too_many_arguments)]
fn rank2_with_mode(
    ctx: &mut Ctx,
    site: &SiteInput,
    tower: &Tower,
    germ: &TriPoly,
    mode: Mode,
    incidents: Vec<StrictIncident>,
    m: u32,
) -> Result<(), Abort> {
    let quad = germ.degree_part(2);
    let crossing = kernel_vector(tower, &quad).map_err(Abort::Split)?;
    // Register curve classes.
    let (classes, member_forms): (Vec<usize>, Vec<LinForm>) = match &mode {
        Mode::Split(l1, l2) => {
            let deps1 = deps_with_elems(tower, &site.deps, &[&l1[0], &l1[1], &l1[2]]);
            let deps2 = deps_with_elems(tower, &site.deps, &[&l2[0], &l2[1], &l2[2]]);
            let c1 = ctx.new_class(deps1, None);
            let c2 = ctx.new_class(deps2, None);
            (vec![c1, c2], vec![l1.clone(), l2.clone()])
        }
        Mode::Pair(l, key) => {
            let mut deps = deps_with_elems(tower, &site.deps, &[&l[0], &l[1], &l[2]]);
            if !deps.iter().any(|(k, _)| k == key) {
                let idx = tower.find_level(key).expect("pair level in tower");
                deps.push((key.clone(), tower.levels[idx].degree));
                deps.sort_by_key(|(k, _)| tower.find_level(k));
            }
            let c = ctx.new_class(deps, Some(key.clone()));
            (vec![c], vec![l.clone()])
        }
    };

    let crossing_singular =
        is_singular_at(tower, germ, m, &crossing).map_err(Abort::Split)?;

    // Incidents: route those through the crossing, attach the rest to the
    // line containing their direction.
    let mut at_crossing: Vec<StrictIncident> = Vec::new();
    let mut elsewhere: Vec<StrictIncident> = Vec::new();
    for inc in incidents {
        if projective_eq(tower, &inc.dir, &crossing).map_err(Abort::Split)? {
            at_crossing.push(inc);
        } else {
            elsewhere.push(inc);
        }
    }
    for inc in &elsewhere {
        match &mode {
            Mode::Split(l1, _l2) => {
                let on_first = tower
                    .is_zero(&linform_eval(tower, l1, &inc.dir))
                    .map_err(Abort::Split)?;
                let target = if on_first { classes[0] } else { classes[1] };
                ctx.record_edge(inc.class, target, inc.exceptional_contact);
            }
            Mode::Pair(l, key) => {
                // Freshly adjoined levels always split here, rerunning the
                // site with the correlation resolved. For a pair bound to an
                // older level the answer can be definite: the direction lies
                // on the marked member (edge as recorded) or on its
                // conjugate (edge with the pair digit twisted).
                let on_member = tower
                    .is_zero(&linform_eval(tower, l, &inc.dir))
                    .map_err(Abort::Split)?;
                if on_member {
                    ctx.record_edge(inc.class, classes[0], inc.exceptional_contact);
                } else {
                    ctx.record_edge_twisted(
                        inc.class,
                        classes[0],
                        inc.exceptional_contact,
                        Some(key.clone()),
                    );
                }
            }
        }
    }
    incident_pair_edges(ctx, tower, &elsewhere).map_err(Abort::Split)?;

    if !crossing_singular {
        // The two lines meet transversally at a smooth point.
        match &mode {
            Mode::Split(_, _) => ctx.record_edge(classes[0], classes[1], 1),
            Mode::Pair(_, _) => ctx.record_intra_pair_edge(classes[0]),
        }
        for inc in &at_crossing {
            // An incident through a smooth crossing meets the full cycle;
            // transverse contact is one with each line.
            let tangent = tangent_vector(tower, &inc.param);
            let mut tangential = false;
            for l in &member_forms {
                // Tangent parallel to a line: the tangent lies on it.
                if tower
                    .is_zero(&linform_eval(tower, l, &tangent))
                    .map_err(Abort::Split)?
                {
                    tangential = true;
                }
            }
            let mult = if tangential || inc.exceptional_contact != 2 {
                2
            } else {
                1
            };
            match &mode {
                Mode::Split(_, _) => {
                    ctx.record_edge(inc.class, classes[0], mult);
                    ctx.record_edge(inc.class, classes[1], mult);
                }
                Mode::Pair(_, _) => ctx.record_edge(inc.class, classes[0], mult),
            }
        }
        incident_pair_edges(ctx, tower, &at_crossing).map_err(Abort::Split)?;
        return Ok(());
    }

    // Singular crossing: one child site at the crossing, with the lines and
    // the crossing incidents passing through.
    let (chart, child_germ, _affine) =
        germ_at_point(tower, germ, m, &crossing).map_err(Abort::Split)?;
    let mut child_incidents: Vec<Incident> = Vec::new();
    for (class, l) in classes.iter().zip(&member_forms) {
        child_incidents.push(line_incident(tower, *class, l, &crossing, chart).map_err(Abort::Split)?);
    }
    for inc in &at_crossing {
        assert_eq!(
            inc.chart, chart,
            "incident chart agrees with the crossing chart"
        );
        child_incidents.push(Incident {
            class: inc.class,
            param: inc.param.clone(),
        });
    }
    let crossing_deps = deps_with_elems(
        tower,
        &site.deps,
        &[&crossing[0], &crossing[1], &crossing[2]],
    );
    let mut path = site.path.clone();
    path.push(0);
    process_site(
        ctx,
        SiteInput {
            path,
            deps: crossing_deps,
            tower: tower.clone(),
            germ: child_germ,
            incidents: child_incidents,
        },
    )
}

/// Parametrization of a line of the exceptional plane through a given point,
/// centered at that point, in the point's chart.
fn line_incident(
    tower: &Tower,
    class: usize,
    l: &LinForm,
    through: &[Elem; 3],
    chart: usize,
) -> Result<Incident, SplitRequest> {
    debug_assert!(tower.is_zero(&linform_eval(tower, l, through)).unwrap_or(true));
    let (j, k) = others(chart);
    // Direction of the dehomogenized line l_j u + l_k v + l_chart = 0.
    let dir_j = l[k].clone();
    let dir_k = tower.neg(&l[j]);
    let mut param = [Rat::zero(), Rat::zero(), Rat::zero()];
    param[chart] = Rat::from_upoly(UPoly::zero(), tower);
    param[j] = Rat::from_upoly(UPoly(vec![tower.zero(), dir_j]), tower);
    param[k] = Rat::from_upoly(UPoly(vec![tower.zero(), dir_k]), tower);
    Ok(Incident { class, param })
}

/// If the two linear forms are swapped by the conjugation of some quadratic
/// tower level with an even modulus, they form a single Galois orbit; return
/// that level's key.
fn conjugate_pair_level(
    tower: &Tower,
    a: &LinForm,
    b: &LinForm,
) -> Result<Option<LevelKey>, SplitRequest> {
    for (idx, level) in tower.levels.iter().enumerate() {
        if level.degree != 2 {
            continue;
        }
        if !level.modulus.coeff(1).structurally_zero() {
            continue;
        }
        let used = a
            .iter()
            .chain(b.iter())
            .any(|e| levels_used(tower, e).contains(&idx));
        if !used {
            continue;
        }
        let conj_a: LinForm = [
            conjugate_at(&a[0], tower.depth(), idx),
            conjugate_at(&a[1], tower.depth(), idx),
            conjugate_at(&a[2], tower.depth(), idx),
        ];
        if projective_eq(tower, &conj_a, b)? {
            return Ok(Some(level.key.clone()));
        }
    }
    Ok(None)
}

/// Negate the odd powers of the generator of one level (valid when the
/// level modulus is even).
fn conjugate_at(e: &Elem, depth: usize, level_idx: usize) -> Elem {
    fn negate_all(e: &Elem) -> Elem {
        match e {
            Elem::Q(r) => Elem::Q(-r.clone()),
            Elem::Ext(cs) => Elem::Ext(cs.iter().map(negate_all).collect()),
        }
    }
    match e {
        Elem::Q(_) => e.clone(),
        Elem::Ext(cs) => {
            if depth - 1 == level_idx {
                Elem::Ext(
                    cs.iter()
                        .enumerate()
                        .map(|(k, c)| if k % 2 == 1 { negate_all(c) } else { c.clone() })
                        .collect(),
                )
            } else {
                Elem::Ext(
                    cs.iter()
                        .map(|c| conjugate_at(c, depth - 1, level_idx))
                        .collect(),
                )
            }
        }
    }
}

/// Rank 1: a double line; the singular points along it are the roots of the
/// gcd of the partials restricted to the line, plus possibly the point at
/// infinity of the chosen chart.
#[allow(clippy::too_many_arguments)]
fn rank1_site(
    ctx: &mut Ctx,
    site: &SiteInput,
    tower: &Tower,
    germ: &TriPoly,
    line: LinForm,
    incidents: Vec<StrictIncident>,
    m: u32,
) -> Result<(), Abort> {
    let line_class = ctx.new_class(
        deps_with_elems(tower, &site.deps, &[&line[0], &line[1], &line[2]]),
        None,
    );

    // Primary chart: first chart whose affine plane meets the line.
    let mut primary = None;
    for c in 0..3 {
        let (j, k) = others(c);
        let zj = tower.is_zero(&line[j]).map_err(Abort::Split)?;
        let zk = tower.is_zero(&line[k]).map_err(Abort::Split)?;
        if !(zj && zk) {
            primary = Some(c);
            break;
        }
    }
    let primary = primary.expect("a nonzero linear form");
    let strict = germ.chart_strict(m, primary);

    // Affine parametrization of the line in the primary chart.
    let (j, k) = others(primary);
    let zk = tower.is_zero(&line[k]).map_err(Abort::Split)?;
    // sigma |-> point(sigma) with components as degree<=1 polynomials.
    let mut line_param: [UPoly; 3] = [UPoly::zero(), UPoly::zero(), UPoly::zero()];
    if !zk {
        let invk = tower.invert(&line[k]).map_err(Abort::Split)?;
        // u = sigma, v = -(l_primary + l_j sigma)/l_k
        line_param[j] = UPoly(vec![tower.zero(), tower.one()]);
        line_param[k] = UPoly(vec![
            tower.neg(&tower.mul(&line[primary], &invk)),
            tower.neg(&tower.mul(&line[j], &invk)),
        ]);
    } else {
        let invj = tower.invert(&line[j]).map_err(Abort::Split)?;
        // v = sigma, u = -l_primary / l_j
        line_param[j] = UPoly(vec![tower.neg(&tower.mul(&line[primary], &invj))]);
        line_param[k] = UPoly(vec![tower.zero(), tower.one()]);
    }

    // Singularity conditions along the line.
    let mut conditions: Vec<UPoly> = Vec::new();
    for v in 0..3 {
        let dv = strict.partial(tower, v);
        let restricted = dv.eval_on_params(tower, &line_param);
        conditions.push(restricted);
    }
    let nonzero: Vec<UPoly> = conditions.into_iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        // Singular along the entire exceptional line.
        return Err(not_du_val());
    }
    let mut h = nonzero[0].clone();
    for c in &nonzero[1..] {
        h = tower.upoly_gcd(&h, c).map_err(Abort::Split)?;
    }
    if h.is_zero() {
        return Err(not_du_val());
    }
    let mut h = tower.upoly_square_free(&h).map_err(Abort::Split)?;

    // The point of the line at infinity of the primary chart.
    let mut p_inf = [tower.zero(), tower.zero(), tower.zero()];
    p_inf[j] = line[k].clone();
    p_inf[k] = tower.neg(&line[j]);
    let inf_singular = is_singular_at(tower, germ, m, &p_inf).map_err(Abort::Split)?;

    // Classify incident directions: at infinity, at a finite singular point,
    // or at a smooth point of the line.
    struct DirGroup {
        sigma: Option<Elem>,
        members: Vec<usize>,
        singular: bool,
    }
    let mut groups: Vec<DirGroup> = Vec::new();
    for (idx, inc) in incidents.iter().enumerate() {
        let at_inf = tower.is_zero(&inc.dir[primary]).map_err(Abort::Split)?;
        let sigma = if at_inf {
            None
        } else {
            // sigma coordinate read off the free slot of the parametrization.
            let invp = tower.invert(&inc.dir[primary]).map_err(Abort::Split)?;
            let free = if !zk { j } else { k };
            Some(tower.mul(&inc.dir[free], &invp))
        };
        let mut placed = false;
        for g in groups.iter_mut() {
            let same = match (&g.sigma, &sigma) {
                (None, None) => true,
                (Some(a), Some(b)) => tower
                    .is_zero(&tower.sub(a, b))
                    .map_err(Abort::Split)?,
                _ => false,
            };
            if same {
                g.members.push(idx);
                placed = true;
                break;
            }
        }
        if !placed {
            let singular = match &sigma {
                None => inf_singular,
                Some(_) => is_singular_at(tower, germ, m, &inc.dir).map_err(Abort::Split)?,
            };
            groups.push(DirGroup {
                sigma,
                members: vec![idx],
                singular,
            });
        }
    }

    // Smooth groups: edges to the line (half the cycle contact) and among
    // the group members.
    for g in &groups {
        if g.singular {
            continue;
        }
        for &idx in &g.members {
            let inc = &incidents[idx];
            assert!(
                inc.exceptional_contact % 2 == 0,
                "contact with a doubled line is even"
            );
            ctx.record_edge(inc.class, line_class, inc.exceptional_contact / 2);
        }
        let members: Vec<StrictIncident> = g
            .members
            .iter()
            .map(|&i| incidents[i].clone())
            .collect();
        incident_pair_edges(ctx, tower, &members).map_err(Abort::Split)?;
    }

    // Children at singular incident directions; divide their factors out of
    // the remaining singular locus.
    let mut child_slot = 0u32;
    for g in &groups {
        if !g.singular {
            continue;
        }
        let point = match &g.sigma {
            None => p_inf.clone(),
            Some(s) => {
                let mut p = [tower.zero(), tower.zero(), tower.zero()];
                for (t, comp) in line_param.iter().enumerate() {
                    p[t] = tower.upoly_eval(comp, s);
                }
                p[primary] = tower.one();
                p
            }
        };
        if let Some(s) = &g.sigma {
            // Remove sigma - s from h if it divides.
            let lin = UPoly(vec![tower.neg(s), tower.one()]);
            let val = tower.upoly_eval(&h, s);
            if tower.is_zero(&val).map_err(Abort::Split)? {
                let (q, r) = tower.upoly_divrem(&h, &lin).map_err(Abort::Split)?;
                debug_assert!(r.is_zero());
                h = q;
            }
        }
        let (chart, child_germ, _) =
            germ_at_point(tower, germ, m, &point).map_err(Abort::Split)?;
        let mut child_incidents =
            vec![line_incident(tower, line_class, &line, &point, chart).map_err(Abort::Split)?];
        for &idx in &g.members {
            let inc = &incidents[idx];
            assert_eq!(inc.chart, chart, "incident chart matches child chart");
            child_incidents.push(Incident {
                class: inc.class,
                param: inc.param.clone(),
            });
        }
        let mut elem_refs: Vec<&Elem> = vec![&point[0], &point[1], &point[2]];
        if let Some(s) = &g.sigma {
            elem_refs.push(s);
        }
        let deps = deps_with_elems(tower, &site.deps, &elem_refs);
        let mut path = site.path.clone();
        path.push(child_slot);
        child_slot += 1;
        process_site(
            ctx,
            SiteInput {
                path,
                deps,
                tower: tower.clone(),
                germ: child_germ,
                incidents: child_incidents,
            },
        )?;
    }

    // Child at the infinity point when singular and not already visited via
    // an incident group.
    let inf_has_group = groups.iter().any(|g| g.sigma.is_none());
    if inf_singular && !inf_has_group {
        let (chart, child_germ, _) =
            germ_at_point(tower, germ, m, &p_inf).map_err(Abort::Split)?;
        let child_incidents =
            vec![line_incident(tower, line_class, &line, &p_inf, chart).map_err(Abort::Split)?];
        let deps = deps_with_elems(tower, &site.deps, &[&p_inf[0], &p_inf[1], &p_inf[2]]);
        let mut path = site.path.clone();
        path.push(100);
        process_site(
            ctx,
            SiteInput {
                path,
                deps,
                tower: tower.clone(),
                germ: child_germ,
                incidents: child_incidents,
            },
        )?;
    }

    // Generic children at the remaining singular locus.
    let hdeg = h.degree().unwrap_or(0);
    if hdeg >= 1 {
        let key = LevelKey {
            site_path: site.path.clone(),
            seq: 1,
        };
        let monic = tower.upoly_monic(&h).map_err(Abort::Split)?;
        let pieces = create_level_pieces(ctx, tower, &key, &monic).map_err(Abort::Split)?;
        for (piece_idx, piece) in pieces.into_iter().enumerate() {
            let deg = piece.degree().unwrap_or(0);
            if deg == 0 {
                continue;
            }
            let mut child_tower = tower.clone();
            child_tower.levels.push(Level {
                key: key.clone(),
                modulus: piece.clone(),
                degree: deg,
            });
            let theta = child_tower.generator(child_tower.depth() - 1);
            let old_depth = tower.depth();
            let lifted_germ = germ.lifted(&child_tower, old_depth);
            let lifted_line: LinForm = [
                child_tower.lift(&line[0], old_depth),
                child_tower.lift(&line[1], old_depth),
                child_tower.lift(&line[2], old_depth),
            ];
            let mut point = [
                child_tower.zero(),
                child_tower.zero(),
                child_tower.zero(),
            ];
            for (t, comp) in line_param.iter().enumerate() {
                let lifted = UPoly(
                    comp.0
                        .iter()
                        .map(|c| child_tower.lift(c, old_depth))
                        .collect(),
                );
                point[t] = child_tower.upoly_eval(&lifted, &theta);
            }
            point[primary] = child_tower.one();
            let (chart, child_germ, _) =
                germ_at_point(&child_tower, &lifted_germ, m, &point).map_err(Abort::Split)?;
            let child_incidents = vec![
                line_incident(&child_tower, line_class, &lifted_line, &point, chart)
                    .map_err(Abort::Split)?,
            ];
            let mut deps = site.deps.clone();
            deps.push((key.clone(), deg));
            let mut path = site.path.clone();
            path.push(200 + piece_idx as u32);
            process_site(
                ctx,
                SiteInput {
                    path,
                    deps,
                    tower: child_tower,
                    germ: child_germ,
                    incidents: child_incidents,
                },
            )?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Graph assembly
// ---------------------------------------------------------------------------

fn class_copy_count(info: &ClassInfo) -> usize {
    info.levels.iter().map(|(_, d)| *d).product::<usize>().max(1)
}

/// Copy index of a class under a digit assignment keyed by level.
fn project_index(info: &ClassInfo, digits: &[(LevelKey, usize)]) -> usize {
    let mut idx = 0usize;
    for (key, deg) in &info.levels {
        let digit = digits
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, d)| *d)
            .unwrap_or(0);
        idx = idx * deg + digit;
    }
    idx
}

/// Copy index with one (quadratic) level's digit flipped.
fn project_index_flipped(
    info: &ClassInfo,
    digits: &[(LevelKey, usize)],
    flip: &LevelKey,
) -> usize {
    let mut idx = 0usize;
    for (key, deg) in &info.levels {
        let digit = digits
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, d)| *d)
            .unwrap_or(0);
        let digit = if key == flip { deg - 1 - digit } else { digit };
        idx = idx * deg + digit;
    }
    idx
}

fn project_index_pair(
    info: &ClassInfo,
    digits: &[(LevelKey, usize)],
    pair_key: &LevelKey,
    pair_digit: usize,
) -> usize {
    let mut idx = 0usize;
    for (key, deg) in &info.levels {
        let digit = if key == pair_key {
            pair_digit
        } else {
            digits
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, d)| *d)
                .unwrap_or(0)
        };
        idx = idx * deg + digit;
    }
    idx
}

fn assemble(ctx: &Ctx) -> DualGraph {
    let mut offsets = Vec::with_capacity(ctx.classes.len());
    let mut total = 0usize;
    for info in &ctx.classes {
        offsets.push(total);
        total += class_copy_count(info);
    }
    let self_ints = vec![-2i64; total];
    let mut edge_acc: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for rec in &ctx.edges {
        let expand_levels: Vec<(LevelKey, usize)> = match &rec.intra_pair {
            Some(pair) => rec
                .levels
                .iter()
                .filter(|(k, _)| k != pair)
                .cloned()
                .collect(),
            None => rec.levels.clone(),
        };
        let mut assignment: Vec<(LevelKey, usize)> =
            expand_levels.iter().map(|(k, _)| (k.clone(), 0)).collect();
        loop {
            let (va, vb) = match &rec.intra_pair {
                Some(pair) => {
                    let a = project_index_pair(&ctx.classes[rec.a], &assignment, pair, 0);
                    let b = project_index_pair(&ctx.classes[rec.b], &assignment, pair, 1);
                    (offsets[rec.a] + a, offsets[rec.b] + b)
                }
                None => {
                    let a = project_index(&ctx.classes[rec.a], &assignment);
                    let b = match &rec.twist_b {
                        None => project_index(&ctx.classes[rec.b], &assignment),
                        Some(key) => project_index_flipped(&ctx.classes[rec.b], &assignment, key),
                    };
                    (offsets[rec.a] + a, offsets[rec.b] + b)
                }
            };
            let key = (va.min(vb), va.max(vb));
            *edge_acc.entry(key).or_insert(0) += rec.mult;
            // Advance the mixed-radix assignment.
            let mut pos = 0;
            loop {
                if pos == assignment.len() {
                    break;
                }
                assignment[pos].1 += 1;
                if assignment[pos].1 < expand_levels[pos].1 {
                    break;
                }
                assignment[pos].1 = 0;
                pos += 1;
            }
            if pos == assignment.len() {
                break;
            }
        }
    }
    let edges: Vec<(usize, usize, u32)> = edge_acc
        .into_iter()
        .map(|((a, b), m)| (a, b, m))
        .collect();
    DualGraph::new(self_ints, edges)
}

#[cfg(test)]
mod tests {
    use super::super::{recognize_graph, AdeType, Classification};
    use super::*;

    fn resolve_type(text: &str) -> Classification {
        let germ = Germ::parse(text).unwrap();
        match resolve(&germ, 24) {
            Ok(graph) => recognize_graph(&graph),
            Err(DuvalError::NotDuValConfiguration) => Classification::NotDuVal,
            Err(e) => panic!("{text}: {e}"),
        }
    }

    #[test]
    fn ordinary_double_point_resolves_to_one_curve() {
        let germ = Germ::parse("x^2+y^2+z^2").unwrap();
        let graph = resolve(&germ, 24).unwrap();
        assert_eq!(graph.vertex_count(), 1);
        assert_eq!(graph.self_intersections(), &[-2]);
        assert!(graph.edges().is_empty());
    }

    #[test]
    fn a2_two_crossing_lines() {
        let germ = Germ::parse("x^2+y^2+z^3").unwrap();
        let graph = resolve(&germ, 24).unwrap();
        assert_eq!(graph.vertex_count(), 2);
        assert_eq!(graph.edges(), &[(0, 1, 1)]);
    }

    #[test]
    fn a_chain_normal_forms() {
        for n in 1..=8u32 {
            let got = resolve_type(&format!("x^2+y^2+z^{}", n + 1));
            assert_eq!(got, Classification::Ade(AdeType::a(n)), "A_{n}");
        }
    }

    #[test]
    fn d_fork_normal_forms() {
        for n in 4..=8u32 {
            let got = resolve_type(&format!("x^2+y^2*z+z^{}", n - 1));
            assert_eq!(got, Classification::Ade(AdeType::d(n)), "D_{n}");
        }
    }

    #[test]
    fn exceptional_normal_forms() {
        assert_eq!(resolve_type("x^2+y^3+z^4"), Classification::Ade(AdeType::e(6)));
        assert_eq!(resolve_type("x^2+y^3+y*z^3"), Classification::Ade(AdeType::e(7)));
        assert_eq!(resolve_type("x^2+y^3+z^5"), Classification::Ade(AdeType::e(8)));
    }

    #[test]
    fn published_blowup_example_gives_a5() {
        // Two blow-ups plus an ordinary double point assemble a chain of 5.
        let got = resolve_type("x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+y^3");
        assert_eq!(got, Classification::Ade(AdeType::a(5)));
    }

    #[test]
    fn five_resolution_germs() {
        // The second germ is recorded as A3 in the reference table, but its
        // Milnor number is 4 and the first blow-up meets an A2 point (the
        // crossing germ has quadratic part (x+y)(x+z) plus cubic -xyz), so
        // the exact type is A4. The acceptance suite tracks the discrepancy
        // against the recorded value; here we assert the computed truth.
        let cases = [
            (
                "x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+x*z+y^3",
                AdeType::a(2),
            ),
            (
                "x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+x*z+y^3+y^2*z",
                AdeType::a(4),
            ),
            (
                "x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+x*z+y^3+y^2*z+y*z^2+z^3",
                AdeType::a(3),
            ),
            (
                "x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+y^3+y^2*z",
                AdeType::a(4),
            ),
            (
                "x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+y^3",
                AdeType::a(5),
            ),
        ];
        for (germ, expected) in cases {
            assert_eq!(resolve_type(germ), Classification::Ade(expected), "{germ}");
        }
        // Resolution agrees with the invariant classifier on all five.
        use super::super::classify_by_invariants;
        for (germ, expected) in cases {
            let g = Germ::parse(germ).unwrap();
            assert_eq!(
                classify_by_invariants(&g, 14).unwrap(),
                Classification::Ade(expected),
                "{germ}"
            );
        }
    }

    #[test]
    fn beyond_ade_is_detected() {
        assert_eq!(resolve_type("x^2+y^4+z^4"), Classification::NotDuVal);
        assert_eq!(resolve_type("x^2+y^3+z^7"), Classification::NotDuVal);
        // Multiplicity three at the origin.
        assert_eq!(resolve_type("x^3+y^3+z^3"), Classification::NotDuVal);
    }

    #[test]
    fn vertex_count_matches_milnor_number() {
        use crate::milnor::{milnor_number, MilnorResult};
        for text in [
            "x^2+y^2+z^2",
            "x^2+y^2+z^5",
            "x^2+y^2*z+z^3",
            "x^2+y^2*z+z^5",
            "x^2+y^3+z^4",
            "x^2+y^3+y*z^3",
            "x^2+y^3+z^5",
        ] {
            let germ = Germ::parse(text).unwrap();
            let graph = resolve(&germ, 24).unwrap();
            let mu = match milnor_number(germ.poly(), 14).unwrap() {
                MilnorResult::Mu(mu) => mu as usize,
                other => panic!("{text}: {other:?}"),
            };
            assert_eq!(graph.vertex_count(), mu, "{text}");
        }
    }

    #[test]
    fn non_isolated_input_is_rejected() {
        let germ = Germ::parse("x^2+y^2").unwrap();
        assert_eq!(resolve(&germ, 24), Err(DuvalError::NonIsolated));
    }

    #[test]
    fn blowup_budget_is_enforced() {
        let germ = Germ::parse("x^2+y^2+z^9").unwrap();
        assert_eq!(resolve(&germ, 2), Err(DuvalError::MaxBlowups(2)));
    }
}
