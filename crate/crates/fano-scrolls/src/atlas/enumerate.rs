//! Enumeration of the admissible scrolls of both families.
//!
//! The vanishing-order bounds along the negative subscrolls translate into
//! linear inequalities on the splitting degrees; scanning them in ascending
//! lexicographic order reproduces the published case lists, with the three
//! special low-degree cases preceding the scroll families.

use crate::scroll::{DivisorClass, Family, Scroll};

use super::tables::{self, ExpectedSingularity, TableRow};

/// One case of the classification.
#[derive(Debug, Clone)]
pub struct FanoCase {
    pub family: Family,
    pub index: u32,
    pub kind: CaseKind,
    /// Anticanonical degree.
    pub degree: i64,
}

#[derive(Debug, Clone)]
pub enum CaseKind {
    Scroll {
        scroll: Scroll,
        class: DivisorClass,
        expected: ExpectedSingularity,
    },
    Special {
        description: &'static str,
    },
}

impl FanoCase {
    pub fn id(&self) -> String {
        match self.family {
            Family::Hyperelliptic => format!("H{}", self.index),
            Family::Trigonal => format!("T{}", self.index),
        }
    }

    pub fn is_scroll(&self) -> bool {
        matches!(self.kind, CaseKind::Scroll { .. })
    }
}

/// Splitting degrees admissible for the double-cover family, ascending
/// lexicographically: `d1 >= d2 >= d3 >= 0`, `d1 != 0`, total at least 3,
/// and the two vanishing-order bounds
/// `d1 - d3 - 2 d2 + 4 >= 0`, `d2 - d1 - 2 d3 + 4 >= 0`.
pub fn hyperelliptic_tuples() -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for d1 in 1i64..=16 {
        for d2 in 0..=d1 {
            for d3 in 0..=d2 {
                if d1 + d2 + d3 < 3 {
                    continue;
                }
                if d1 - d3 - 2 * d2 + 4 < 0 {
                    continue;
                }
                if d2 - d1 - 2 * d3 + 4 < 0 {
                    continue;
                }
                out.push([d1 as u32, d2 as u32, d3 as u32]);
            }
        }
    }
    out
}

/// Splitting degrees admissible for the trigonal family:
/// `2 d2 - d1 - d3 - d4 + 2 >= 0`, `d3 - d2 - d4 + 2 >= 0`,
/// `d1 - d2 - d3 + 2 >= 0`, with the usual ordering constraints and total
/// at least 3.
pub fn trigonal_tuples() -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for d1 in 1i64..=20 {
        for d2 in 0..=d1 {
            for d3 in 0..=d2 {
                for d4 in 0..=d3 {
                    if d1 + d2 + d3 + d4 < 3 {
                        continue;
                    }
                    if 2 * d2 - d1 - d3 - d4 + 2 < 0 {
                        continue;
                    }
                    if d3 - d2 - d4 + 2 < 0 {
                        continue;
                    }
                    if d1 - d2 - d3 + 2 < 0 {
                        continue;
                    }
                    out.push([d1 as u32, d2 as u32, d3 as u32, d4 as u32]);
                }
            }
        }
    }
    out
}

fn scroll_cases(family: Family, rows: Vec<TableRow>) -> Vec<FanoCase> {
    rows.into_iter()
        .map(|row| {
            let scroll = Scroll::new(row.d).expect("table degrees are admissible");
            let total: i64 = row.d.iter().map(|&x| i64::from(x)).sum();
            let (a, degree) = match family {
                Family::Hyperelliptic => (4, 2 * total),
                Family::Trigonal => (3, 2 * total + 2),
            };
            FanoCase {
                family,
                index: row.index,
                kind: CaseKind::Scroll {
                    scroll,
                    class: DivisorClass::new(a, row.b),
                    expected: row.expected,
                },
                degree,
            }
        })
        .collect()
}

/// All 47 hyperelliptic cases: the three special covers followed by the 44
/// scroll cases with branch class `4M - 2(sum d - 2)L`.
pub fn enumerate_hyperelliptic() -> Vec<FanoCase> {
    let mut out: Vec<FanoCase> = tables::hyperelliptic_specials()
        .into_iter()
        .map(|s| FanoCase {
            family: Family::Hyperelliptic,
            index: s.index,
            kind: CaseKind::Special {
                description: s.description,
            },
            degree: s.degree,
        })
        .collect();
    out.extend(scroll_cases(
        Family::Hyperelliptic,
        tables::hyperelliptic_rows(),
    ));
    out
}

/// All 69 trigonal cases: the three special cases followed by the 66 scroll
/// cases with divisor class `3M - (sum d - 2)L`.
pub fn enumerate_trigonal() -> Vec<FanoCase> {
    let mut out: Vec<FanoCase> = tables::trigonal_specials()
        .into_iter()
        .map(|s| FanoCase {
            family: Family::Trigonal,
            index: s.index,
            kind: CaseKind::Special {
                description: s.description,
            },
            degree: s.degree,
        })
        .collect();
    out.extend(scroll_cases(Family::Trigonal, tables::trigonal_rows()));
    out
}

/// Look up one case by its label, e.g. `H30` or `T50`.
pub fn find_case(id: &str) -> Option<FanoCase> {
    let (family, rest) = match id.split_at(1) {
        ("H", rest) => (Family::Hyperelliptic, rest),
        ("T", rest) => (Family::Trigonal, rest),
        _ => return None,
    };
    let index: u32 = rest.parse().ok()?;
    let cases = match family {
        Family::Hyperelliptic => enumerate_hyperelliptic(),
        Family::Trigonal => enumerate_trigonal(),
    };
    cases.into_iter().find(|c| c.index == index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_scan_counts() {
        assert_eq!(hyperelliptic_tuples().len(), 44);
        assert_eq!(trigonal_tuples().len(), 66);
    }

    #[test]
    fn scan_matches_embedded_rows_item_for_item() {
        let tuples = hyperelliptic_tuples();
        for (tuple, row) in tuples.iter().zip(tables::hyperelliptic_rows()) {
            assert_eq!(&tuple[..], row.d);
        }
        let tuples = trigonal_tuples();
        for (tuple, row) in tuples.iter().zip(tables::trigonal_rows()) {
            assert_eq!(&tuple[..], row.d);
        }
    }

    #[test]
    fn case_counts_and_degrees() {
        let h = enumerate_hyperelliptic();
        assert_eq!(h.len(), 47);
        assert_eq!(h.iter().filter(|c| c.is_scroll()).count(), 44);
        let t = enumerate_trigonal();
        assert_eq!(t.len(), 69);
        assert_eq!(t.iter().filter(|c| c.is_scroll()).count(), 66);
    }

    #[test]
    fn named_rows() {
        let h30 = find_case("H30").unwrap();
        match &h30.kind {
            CaseKind::Scroll { scroll, class, .. } => {
                assert_eq!(scroll.degrees(), &[6, 2, 0]);
                assert_eq!((class.a, class.b), (4, -12));
            }
            _ => panic!("H30 is a scroll case"),
        }
        assert_eq!(h30.degree, 16);

        let h47 = find_case("H47").unwrap();
        assert_eq!(h47.degree, 40);
        match &h47.kind {
            CaseKind::Scroll { scroll, class, .. } => {
                assert_eq!(scroll.degrees(), &[12, 8, 0]);
                assert_eq!(class.b, -36);
            }
            _ => panic!(),
        }

        let t69 = find_case("T69").unwrap();
        assert_eq!(t69.degree, 54);
        match &t69.kind {
            CaseKind::Scroll { scroll, class, .. } => {
                assert_eq!(scroll.degrees(), &[12, 8, 6, 0]);
                assert_eq!(class.b, -24);
            }
            _ => panic!(),
        }

        let t5 = find_case("T5").unwrap();
        assert_eq!(t5.degree, 10);

        assert!(find_case("H48").is_none());
        assert!(find_case("X1").is_none());
    }

    #[test]
    fn specials_have_descriptions() {
        for id in ["H1", "H2", "H3", "T1", "T2", "T3"] {
            let case = find_case(id).unwrap();
            match case.kind {
                CaseKind::Special { description } => assert!(!description.is_empty()),
                _ => panic!("{id} is a special case"),
            }
        }
    }
}
