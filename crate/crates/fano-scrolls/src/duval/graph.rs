//! Dual graphs of exceptional curves and Dynkin diagram recognition.

use super::{AdeType, Classification};

/// Intersection graph of the exceptional curves of a resolution. Vertices
/// carry self-intersection numbers; edges carry intersection multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    self_intersections: Vec<i64>,
    edges: Vec<(usize, usize, u32)>,
}

impl DualGraph {
    pub fn new(self_intersections: Vec<i64>, edges: Vec<(usize, usize, u32)>) -> DualGraph {
        for &(a, b, _) in &edges {
            assert!(a < self_intersections.len() && b < self_intersections.len());
            assert_ne!(a, b, "no self-loops in a dual graph");
        }
        DualGraph {
            self_intersections,
            edges,
        }
    }

    /// A chain of `n` curves of the given self-intersection.
    pub fn chain(n: usize, self_int: i64) -> DualGraph {
        DualGraph::new(
            vec![self_int; n],
            (1..n).map(|i| (i - 1, i, 1)).collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.self_intersections.len()
    }

    pub fn self_intersections(&self) -> &[i64] {
        &self.self_intersections
    }

    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| a == v || b == v)
            .count()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Match a dual graph against the simply laced Dynkin diagrams: a connected
/// tree of (-2)-curves with simple intersections that is a chain (`A_n`), a
/// fork with two length-one prongs (`D_n`), or one of the three exceptional
/// arm patterns (`E_6`, `E_7`, `E_8`). Anything else is not a Du Val
/// configuration.
pub fn recognize_graph(g: &DualGraph) -> Classification {
    let n = g.vertex_count();
    if n == 0 {
        return Classification::NotDuVal;
    }
    if g.self_intersections().iter().any(|&s| s != -2) {
        return Classification::NotDuVal;
    }
    if g.edges().iter().any(|&(_, _, m)| m != 1) {
        return Classification::NotDuVal;
    }
    // Duplicate edges between the same pair are multi-edges in disguise.
    {
        let mut pairs: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b, _)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        if pairs.len() != before {
            return Classification::NotDuVal;
        }
    }
    if !g.is_connected() {
        return Classification::NotDuVal;
    }
    // A connected graph is a tree iff #edges = #vertices - 1.
    if g.edges().len() != n - 1 {
        return Classification::NotDuVal;
    }
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    if degrees.iter().any(|&d| d > 3) {
        return Classification::NotDuVal;
    }
    let branch_nodes: Vec<usize> = (0..n).filter(|&v| degrees[v] == 3).collect();
    match branch_nodes.len() {
        0 => Classification::Ade(AdeType::a(n as u32)),
        1 => {
            let center = branch_nodes[0];
            let mut arms: Vec<usize> = g
                .neighbors(center)
                .into_iter()
                .map(|start| arm_length(g, center, start))
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, k] => Classification::Ade(AdeType::d(*k as u32 + 3)),
                [1, 2, 2] => Classification::Ade(AdeType::e(6)),
                [1, 2, 3] => Classification::Ade(AdeType::e(7)),
                [1, 2, 4] => Classification::Ade(AdeType::e(8)),
                _ => Classification::NotDuVal,
            }
        }
        _ => Classification::NotDuVal,
    }
}

/// Length of the arm starting at `start`, walking away from `center`.
fn arm_length(g: &DualGraph, center: usize, start: usize) -> usize {
    let mut length = 1;
    let mut prev = center;
    let mut cur = start;
    loop {
        let next: Vec<usize> = g.neighbors(cur).into_iter().filter(|&w| w != prev).collect();
        match next.as_slice() {
            [] => return length,
            [one] => {
                prev = cur;
                cur = *one;
                length += 1;
            }
            // A second branch point on an arm: not an ADE shape; report an
            // impossible length so the caller falls through to NotDuVal.
            _ => return usize::MAX / 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(arms: &[usize]) -> DualGraph {
        // Vertex 0 is the center.
        let mut self_ints = vec![-2i64];
        let mut edges = Vec::new();
        for &len in arms {
            let mut prev = 0usize;
            for _ in 0..len {
                let v = self_ints.len();
                self_ints.push(-2);
                edges.push((prev, v, 1));
                prev = v;
            }
        }
        DualGraph::new(self_ints, edges)
    }

    #[test]
    fn chains_are_a_n() {
        for n in 1..=8 {
            assert_eq!(
                recognize_graph(&DualGraph::chain(n, -2)),
                Classification::Ade(AdeType::a(n as u32))
            );
        }
    }

    #[test]
    fn fork_with_three_unit_arms_is_d4() {
        assert_eq!(
            recognize_graph(&star(&[1, 1, 1])),
            Classification::Ade(AdeType::d(4))
        );
    }

    #[test]
    fn d_and_e_shapes() {
        assert_eq!(recognize_graph(&star(&[1, 1, 2])), Classification::Ade(AdeType::d(5)));
        assert_eq!(recognize_graph(&star(&[1, 1, 4])), Classification::Ade(AdeType::d(7)));
        assert_eq!(recognize_graph(&star(&[1, 2, 2])), Classification::Ade(AdeType::e(6)));
        assert_eq!(recognize_graph(&star(&[1, 2, 3])), Classification::Ade(AdeType::e(7)));
        assert_eq!(recognize_graph(&star(&[1, 2, 4])), Classification::Ade(AdeType::e(8)));
        assert_eq!(recognize_graph(&star(&[1, 2, 5])), Classification::NotDuVal);
        assert_eq!(recognize_graph(&star(&[2, 2, 2])), Classification::NotDuVal);
    }

    #[test]
    fn cycles_are_rejected() {
        let triangle = DualGraph::new(vec![-2, -2, -2], vec![(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        assert_eq!(recognize_graph(&triangle), Classification::NotDuVal);
    }

    #[test]
    fn wrong_self_intersections_are_rejected() {
        let g = DualGraph::new(vec![-2, -1], vec![(0, 1, 1)]);
        assert_eq!(recognize_graph(&g), Classification::NotDuVal);
    }

    #[test]
    fn multi_edges_and_disconnection_are_rejected() {
        let double = DualGraph::new(vec![-2, -2], vec![(0, 1, 2)]);
        assert_eq!(recognize_graph(&double), Classification::NotDuVal);
        let dup = DualGraph::new(vec![-2, -2], vec![(0, 1, 1), (1, 0, 1)]);
        assert_eq!(recognize_graph(&dup), Classification::NotDuVal);
        let split = DualGraph::new(vec![-2, -2], vec![]);
        assert_eq!(recognize_graph(&split), Classification::NotDuVal);
    }

    #[test]
    fn single_vertex_is_a1() {
        let g = DualGraph::new(vec![-2], vec![]);
        assert_eq!(recognize_graph(&g), Classification::Ade(AdeType::a(1)));
    }
}
