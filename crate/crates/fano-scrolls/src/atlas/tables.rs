//! Embedded reference data: the published classification tables, the special
//! low-degree cases, the rationality verdicts settled in the literature, and
//! the singularity summaries kept as annotations.

use crate::duval::AdeType;

/// What the reference table records for a scroll case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpectedSingularity {
    /// The linear system is base point free; the general member is smooth.
    BasePointFree,
    /// The fiber germ at the distinguished point is a smooth surface point.
    SmoothGerm,
    /// A Du Val point, with the recorded recognition weights when the table
    /// lists them.
    Ade {
        ade: AdeType,
        weights: Option<[u64; 3]>,
    },
}

/// One reference row: paper index, splitting degrees, fiber-class
/// coefficient `b`, and the recorded singularity data.
pub struct TableRow {
    pub index: u32,
    pub d: &'static [u32],
    pub b: i64,
    pub expected: ExpectedSingularity,
}

use ExpectedSingularity::{Ade, BasePointFree, SmoothGerm};

fn a(n: u32) -> AdeType {
    AdeType::a(n)
}
fn dn(n: u32) -> AdeType {
    AdeType::d(n)
}
fn e(n: u32) -> AdeType {
    AdeType::e(n)
}

/// The 44 hyperelliptic scroll rows (indices 4..=47).
pub fn hyperelliptic_rows() -> Vec<TableRow> {
    let t = |index, d, b, expected| TableRow {
        index,
        d,
        b,
        expected,
    };
    vec![
        t(4, &[1, 1, 1], -2, BasePointFree),
        t(5, &[2, 1, 0], -2, SmoothGerm),
        t(6, &[2, 1, 1], -4, BasePointFree),
        t(7, &[2, 2, 0], -4, Ade { ade: a(1), weights: Some([1, 1, 1]) }),
        t(8, &[2, 2, 1], -6, Ade { ade: a(1), weights: Some([1, 1, 1]) }),
        t(9, &[2, 2, 2], -8, BasePointFree),
        t(10, &[3, 0, 0], -2, SmoothGerm),
        t(11, &[3, 1, 0], -4, Ade { ade: a(1), weights: Some([1, 1, 1]) }),
        t(12, &[3, 1, 1], -6, SmoothGerm),
        t(13, &[3, 2, 0], -6, Ade { ade: a(2), weights: Some([3, 3, 2]) }),
        t(14, &[3, 2, 1], -8, Ade { ade: a(3), weights: Some([2, 2, 1]) }),
        t(15, &[3, 3, 0], -8, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(16, &[3, 3, 1], -10, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(17, &[4, 0, 0], -4, SmoothGerm),
        t(18, &[4, 1, 0], -6, Ade { ade: a(3), weights: Some([2, 2, 1]) }),
        t(19, &[4, 2, 0], -8, Ade { ade: a(3), weights: Some([2, 2, 1]) }),
        t(20, &[4, 2, 1], -10, Ade { ade: a(5), weights: Some([3, 3, 1]) }),
        t(21, &[4, 3, 0], -10, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(22, &[4, 3, 1], -12, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(23, &[4, 4, 0], -12, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(24, &[5, 1, 0], -8, Ade { ade: a(5), weights: Some([3, 3, 1]) }),
        t(25, &[5, 2, 0], -10, Ade { ade: a(5), weights: Some([3, 3, 1]) }),
        t(26, &[5, 3, 0], -12, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(27, &[5, 3, 1], -14, Ade { ade: dn(6), weights: Some([5, 4, 2]) }),
        t(28, &[5, 4, 0], -14, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(29, &[5, 4, 1], -16, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(30, &[6, 2, 0], -12, Ade { ade: a(5), weights: Some([3, 3, 1]) }),
        t(31, &[6, 3, 0], -14, Ade { ade: dn(6), weights: Some([5, 4, 2]) }),
        t(32, &[6, 4, 0], -16, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(33, &[6, 4, 1], -18, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
        t(34, &[6, 5, 0], -18, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(35, &[7, 3, 0], -16, Ade { ade: dn(6), weights: Some([5, 4, 2]) }),
        t(36, &[7, 4, 0], -18, Ade { ade: dn(6), weights: Some([5, 4, 2]) }),
        t(37, &[7, 5, 0], -20, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(38, &[7, 5, 1], -22, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
        t(39, &[8, 4, 0], -20, Ade { ade: dn(6), weights: Some([5, 4, 2]) }),
        t(40, &[8, 5, 0], -22, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
        t(41, &[8, 6, 0], -24, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(42, &[9, 5, 0], -24, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
        t(43, &[9, 6, 0], -26, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
        t(44, &[10, 6, 0], -28, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
        t(45, &[10, 7, 0], -30, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
        t(46, &[11, 7, 0], -32, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
        t(47, &[12, 8, 0], -36, Ade { ade: e(7), weights: Some([9, 6, 4]) }),
    ]
}

/// The 66 trigonal scroll rows (indices 4..=69).
pub fn trigonal_rows() -> Vec<TableRow> {
    let t = |index, d, b, expected| TableRow {
        index,
        d,
        b,
        expected,
    };
    vec![
        t(4, &[1, 1, 1, 0], -1, SmoothGerm),
        t(5, &[1, 1, 1, 1], -2, BasePointFree),
        t(6, &[2, 1, 0, 0], -1, SmoothGerm),
        t(7, &[2, 1, 1, 0], -2, SmoothGerm),
        t(8, &[2, 1, 1, 1], -3, BasePointFree),
        t(9, &[2, 2, 0, 0], -2, SmoothGerm),
        t(10, &[2, 2, 1, 0], -3, Ade { ade: a(1), weights: Some([1, 1, 1]) }),
        t(11, &[2, 2, 1, 1], -4, SmoothGerm),
        t(12, &[2, 2, 2, 0], -4, Ade { ade: a(1), weights: Some([1, 1, 1]) }),
        t(13, &[2, 2, 2, 1], -5, Ade { ade: a(1), weights: Some([1, 1, 1]) }),
        t(14, &[2, 2, 2, 2], -6, BasePointFree),
        t(15, &[3, 1, 0, 0], -2, SmoothGerm),
        t(16, &[3, 1, 1, 0], -3, SmoothGerm),
        t(17, &[3, 2, 0, 0], -3, SmoothGerm),
        t(18, &[3, 2, 1, 0], -4, Ade { ade: a(1), weights: Some([1, 1, 1]) }),
        t(19, &[3, 2, 1, 1], -5, SmoothGerm),
        t(20, &[3, 2, 2, 0], -5, Ade { ade: a(3), weights: None }),
        t(21, &[3, 2, 2, 1], -6, Ade { ade: a(3), weights: None }),
        t(22, &[3, 3, 1, 0], -5, Ade { ade: a(3), weights: Some([2, 2, 1]) }),
        t(23, &[3, 3, 2, 0], -6, Ade { ade: a(2), weights: Some([3, 3, 2]) }),
        t(24, &[3, 3, 2, 1], -7, Ade { ade: a(3), weights: Some([2, 2, 1]) }),
        t(25, &[4, 1, 0, 0], -3, SmoothGerm),
        t(26, &[4, 2, 0, 0], -4, SmoothGerm),
        t(27, &[4, 2, 1, 0], -5, Ade { ade: a(3), weights: None }),
        t(28, &[4, 2, 1, 1], -6, SmoothGerm),
        t(29, &[4, 2, 2, 0], -6, Ade { ade: a(3), weights: None }),
        t(30, &[4, 3, 1, 0], -6, Ade { ade: a(3), weights: Some([2, 2, 1]) }),
        t(31, &[4, 3, 2, 0], -7, Ade { ade: a(3), weights: Some([2, 2, 1]) }),
        t(32, &[4, 3, 2, 1], -8, Ade { ade: a(4), weights: None }),
        t(33, &[4, 3, 3, 0], -8, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(34, &[4, 3, 3, 1], -9, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(35, &[4, 4, 2, 0], -8, Ade { ade: a(3), weights: Some([2, 2, 1]) }),
        t(36, &[5, 2, 0, 0], -5, SmoothGerm),
        t(37, &[5, 2, 1, 0], -6, Ade { ade: a(2), weights: None }),
        t(38, &[5, 3, 1, 0], -7, Ade { ade: a(4), weights: None }),
        t(39, &[5, 3, 2, 0], -8, Ade { ade: a(4), weights: None }),
        t(40, &[5, 3, 2, 1], -9, Ade { ade: a(5), weights: None }),
        t(41, &[5, 3, 3, 0], -9, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(42, &[5, 4, 2, 0], -9, Ade { ade: a(4), weights: None }),
        t(43, &[5, 4, 3, 0], -10, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(44, &[5, 4, 3, 1], -11, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(45, &[6, 2, 0, 0], -6, SmoothGerm),
        t(46, &[6, 3, 1, 0], -8, Ade { ade: a(5), weights: None }),
        t(47, &[6, 3, 2, 0], -9, Ade { ade: a(5), weights: None }),
        t(48, &[6, 4, 2, 0], -10, Ade { ade: a(4), weights: None }),
        t(49, &[6, 4, 3, 0], -11, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(50, &[6, 4, 3, 1], -12, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(51, &[6, 4, 4, 0], -12, Ade { ade: dn(4), weights: Some([3, 2, 2]) }),
        t(52, &[6, 5, 3, 0], -12, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(53, &[7, 3, 1, 0], -9, Ade { ade: a(5), weights: None }),
        t(54, &[7, 4, 2, 0], -11, Ade { ade: a(5), weights: None }),
        t(55, &[7, 4, 3, 0], -12, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(56, &[7, 5, 3, 0], -13, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(57, &[7, 5, 4, 0], -14, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(58, &[7, 5, 4, 1], -15, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(59, &[8, 4, 2, 0], -12, Ade { ade: a(5), weights: None }),
        t(60, &[8, 5, 3, 0], -14, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(61, &[8, 5, 4, 0], -15, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(62, &[8, 6, 4, 0], -16, Ade { ade: dn(5), weights: Some([4, 3, 2]) }),
        t(63, &[9, 5, 3, 0], -15, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(64, &[9, 6, 4, 0], -17, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(65, &[9, 6, 5, 0], -18, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(66, &[10, 6, 4, 0], -18, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(67, &[10, 7, 5, 0], -20, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(68, &[11, 7, 5, 0], -21, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
        t(69, &[12, 8, 6, 0], -24, Ade { ade: e(6), weights: Some([6, 4, 3]) }),
    ]
}

/// The low-degree special cases that precede the scroll families.
pub struct SpecialCase {
    pub index: u32,
    pub degree: i64,
    pub description: &'static str,
}

pub fn hyperelliptic_specials() -> Vec<SpecialCase> {
    vec![
        SpecialCase {
            index: 1,
            degree: 8,
            description: "double cover of the cone over the Veronese surface; \
                          a hypersurface of degree 6 in P(1,1,1,2,3)",
        },
        SpecialCase {
            index: 2,
            degree: 2,
            description: "double cover of P^3 branched in a sextic surface; \
                          a hypersurface of degree 6 in P(1,1,1,1,3)",
        },
        SpecialCase {
            index: 3,
            degree: 4,
            description: "double cover of a quadric threefold; a complete \
                          intersection of a quadric cone and a quartic in P(1,1,1,1,1,2)",
        },
    ]
}

pub fn trigonal_specials() -> Vec<SpecialCase> {
    vec![
        SpecialCase {
            index: 1,
            degree: 4,
            description: "quartic hypersurface in P^4",
        },
        SpecialCase {
            index: 2,
            degree: 6,
            description: "complete intersection of a quadric and a cubic in P^5",
        },
        SpecialCase {
            index: 3,
            degree: 10,
            description: "divisor of class 2T+F on the P^2-bundle \
                          P(O(2)+O+O); a hypersurface of degree 5 in P(1,1,1,2,2)",
        },
    ]
}

/// Rationality verdicts settled outside the computable decision rules,
/// recorded as data with a short description of the construction.
pub struct LiteratureVerdict {
    pub index: u32,
    pub rational: bool,
    pub reference: &'static str,
}

pub fn hyperelliptic_literature() -> Vec<LiteratureVerdict> {
    vec![
        LiteratureVerdict { index: 1, rational: false, reference: "classical non-rationality of double Veronese cones" },
        LiteratureVerdict { index: 2, rational: false, reference: "classical non-rationality of sextic double solids" },
        LiteratureVerdict { index: 3, rational: false, reference: "classical non-rationality of quartic double quadrics" },
        LiteratureVerdict { index: 4, rational: false, reference: "classical non-rationality of (2,4) double covers of P1xP2" },
        LiteratureVerdict { index: 5, rational: false, reference: "conic bundle over F1 with degeneration 6s+8l, beyond the rationality range" },
        LiteratureVerdict { index: 6, rational: false, reference: "blow-up of a quartic double solid along a half-anticanonical intersection" },
        LiteratureVerdict { index: 7, rational: false, reference: "conic bundle over P1xP1 with degeneration of bidegree (6,4)" },
        LiteratureVerdict { index: 8, rational: true, reference: "conic bundle over P1xP1 with degeneration of bidegree (6,2)" },
        LiteratureVerdict { index: 9, rational: true, reference: "product of a line with a degree-2 del Pezzo surface" },
    ]
}

pub fn trigonal_literature() -> Vec<LiteratureVerdict> {
    vec![
        LiteratureVerdict { index: 1, rational: false, reference: "classical non-rationality of quartic threefolds" },
        LiteratureVerdict { index: 2, rational: false, reference: "classical non-rationality of quadric-cubic intersections" },
        LiteratureVerdict { index: 3, rational: false, reference: "conic bundle over P2 with a degree-7 degeneration curve" },
        LiteratureVerdict { index: 4, rational: false, reference: "conic bundle over P2 with a degree-7 degeneration curve after a flop" },
        LiteratureVerdict { index: 5, rational: true, reference: "divisor of bidegree (1,3) in P1xP3; the projection to P3 is birational" },
        LiteratureVerdict { index: 6, rational: false, reference: "conic bundle over F1 with degeneration 5s+7l" },
        LiteratureVerdict { index: 7, rational: false, reference: "birational to a double space of index two branched in a quartic" },
        LiteratureVerdict { index: 8, rational: false, reference: "blow-up of a cubic threefold along a plane cubic" },
        LiteratureVerdict { index: 9, rational: false, reference: "conic bundle over P1xP1 with degeneration of bidegree (5,4)" },
        LiteratureVerdict { index: 11, rational: true, reference: "conic bundle over P1xP1 with degeneration of bidegree (5,2); a del Pezzo fibration of degree 6 appears" },
        LiteratureVerdict { index: 14, rational: true, reference: "product of a line with a cubic surface" },
        LiteratureVerdict { index: 25, rational: true, reference: "conic bundle over F3 whose degeneration meets a general section once" },
    ]
}

/// The published rationality index sets, kept as acceptance fixtures.
pub fn published_rational_hyperelliptic() -> Vec<u32> {
    let mut v = vec![8, 9, 22, 26, 27, 28, 29];
    v.extend(31..=47);
    v
}

pub fn published_rational_trigonal() -> Vec<u32> {
    let mut v = vec![5, 10, 11, 12, 13, 14];
    v.extend(17..=69);
    v
}

pub fn published_nonrational_hyperelliptic() -> Vec<u32> {
    (1..=7).collect()
}

pub fn published_nonrational_trigonal() -> Vec<u32> {
    vec![1, 2, 3, 4, 6, 7, 8, 9]
}

/// Singularity summaries for the threefolds themselves, kept as annotations
/// (the pipeline certifies only the fiber germ over the distinguished
/// section).
pub fn threefold_annotation(hyperelliptic: bool, index: u32) -> &'static str {
    if hyperelliptic {
        match index {
            1 | 2 | 3 | 4 | 6 | 9 => "a general member is smooth",
            5 => "a general member has a single ordinary double point",
            8 | 10 | 12 | 14 | 16 | 17 | 18 | 20 | 22 | 27 | 29 | 33 | 38 => {
                "the threefold has non-isolated singularities"
            }
            _ => "a general member has a single isolated point beyond compound Du Val",
        }
    } else {
        match index {
            1 | 2 | 5 | 8 | 14 => "a general member is smooth",
            4 | 7 | 11 | 16 | 19 => "a general member has only isolated ordinary double points",
            6 | 9 | 13 | 15 | 17 | 21 | 24 | 25 | 26 | 28 | 32 | 34 | 36 | 40 | 41 | 44 | 45
            | 50 | 58 => "the threefold has non-isolated singularities",
            _ => "the threefold has at least one point beyond compound Du Val",
        }
    }
}
