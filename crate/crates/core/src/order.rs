//! The Tamari order on formulas, defined independently of the sequent
//! calculus via right rotations. Serves as the brute-force oracle, plus
//! poset/lattice construction and exports for small sizes.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use thiserror::Error;

use crate::syntax::{Atom, Formula};

pub const DEFAULT_SIZE_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("size {n} exceeds the configured limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("frontier mismatch between {a} and {b}")]
    FrontierMismatch { a: String, b: String },
    #[error("{0} bound is not unique; lattice property falsified")]
    BoundNotUnique(&'static str),
    #[error("{0} bound does not exist")]
    BoundMissing(&'static str),
}

/// All formulas obtained by rewriting exactly one subterm
/// `(A*B)*C -> A*(B*C)`. Each successor is strictly above the input.
pub fn rotation_successors(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    collect_rotations(f, &mut |g| out.push(g));
    out.dedup();
    out
}

fn collect_rotations(f: &Formula, emit: &mut dyn FnMut(Formula)) {
    if let Formula::Prod(l, r) = f {
        if let Formula::Prod(a, b) = &**l {
            // ((A*B)*C) -> (A*(B*C)) at the root
            emit(Formula::prod((**a).clone(), Formula::prod((**b).clone(), (**r).clone())));
        }
        collect_rotations(l, &mut |g| emit(Formula::prod(g, (**r).clone())));
        collect_rotations(r, &mut |g| emit(Formula::prod((**l).clone(), g)));
    }
}

/// `a <= b` in the Tamari order, decided by breadth-first search over the
/// rotation closure starting from `a`.
pub fn leq_bruteforce(a: &Formula, b: &Formula) -> bool {
    if a == b {
        return true;
    }
    if a.frontier() != b.frontier() {
        return false;
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(a.clone());
    queue.push_back(a.clone());
    while let Some(cur) = queue.pop_front() {
        for succ in rotation_successors(&cur) {
            if succ == *b {
                return true;
            }
            if seen.insert(succ.clone()) {
                queue.push_back(succ);
            }
        }
    }
    false
}

/// All tree shapes of size `n` over the constant frontier `p^(n+1)`, in a
/// deterministic order: recursion on the root split with smaller left
/// subtrees first.
pub fn enumerate_shapes(n: usize) -> Vec<Formula> {
    let p = Formula::Atom(Atom::new("p").unwrap());
    fn go(n: usize, p: &Formula, memo: &mut HashMap<usize, Vec<Formula>>) -> Vec<Formula> {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let out = if n == 0 {
            vec![p.clone()]
        } else {
            let mut out = Vec::new();
            for left_size in 0..n {
                let lefts = go(left_size, p, memo);
                let rights = go(n - 1 - left_size, p, memo);
                for l in &lefts {
                    for r in &rights {
                        out.push(Formula::prod(l.clone(), r.clone()));
                    }
                }
            }
            out
        };
        memo.insert(n, out.clone());
        out
    }
    go(n, &p, &mut HashMap::new())
}

/// The Tamari lattice on all shapes of a fixed size, with the full order
/// relation and the covering (Hasse) edges.
#[derive(Debug, Clone)]
pub struct TamariPoset {
    pub n: usize,
    pub elements: Vec<Formula>,
    /// leq[i] holds the set of indices j with elements[i] <= elements[j].
    leq: Vec<Vec<bool>>,
    /// Covering pairs (i, j): j covers i.
    pub covers: Vec<(usize, usize)>,
}

impl TamariPoset {
    pub fn build(n: usize) -> Result<TamariPoset, OrderError> {
        Self::build_with_limit(n, DEFAULT_SIZE_LIMIT)
    }

    pub fn build_with_limit(n: usize, limit: usize) -> Result<TamariPoset, OrderError> {
        if n > limit {
            return Err(OrderError::LimitExceeded { n, limit });
        }
        let elements = enumerate_shapes(n);
        let index: HashMap<&Formula, usize> =
            elements.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let succs: Vec<Vec<usize>> = elements
            .iter()
            .map(|f| rotation_successors(f).iter().map(|g| index[g]).collect())
            .collect();

        // Memoized reachability: process sources in reverse topological
        // order (every rotation strictly increases the element, and our
        // enumeration is not topologically sorted, so do a DFS with a
        // per-source cache folded into the table).
        let m = elements.len();
        let mut leq = vec![vec![false; m]; m];
        let mut done = vec![false; m];
        fn close(
            i: usize,
            succs: &[Vec<usize>],
            leq: &mut Vec<Vec<bool>>,
            done: &mut Vec<bool>,
        ) {
            if done[i] {
                return;
            }
            done[i] = true;
            leq[i][i] = true;
            for &j in &succs[i] {
                close(j, succs, leq, done);
                let row_j = leq[j].clone();
                for (k, hit) in row_j.iter().enumerate() {
                    if *hit {
                        leq[i][k] = true;
                    }
                }
            }
        }
        for i in 0..m {
            close(i, &succs, &mut leq, &mut done);
        }

        // Transitive reduction: keep (i, j) iff i < j with no k strictly
        // between. Rotation edges suffice as candidates since they generate
        // the order.
        let mut covers = Vec::new();
        for (i, js) in succs.iter().enumerate() {
            for &j in js {
                let strictly_between = (0..m).any(|k| {
                    k != i && k != j && leq[i][k] && leq[k][j]
                });
                if !strictly_between && !covers.contains(&(i, j)) {
                    covers.push((i, j));
                }
            }
        }
        covers.sort();
        Ok(TamariPoset { n, elements, leq, covers })
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.elements.iter().position(|g| g == f)
    }

    pub fn count_intervals(&self) -> BigUint {
        let mut count: u64 = 0;
        for row in &self.leq {
            count += row.iter().filter(|&&b| b).count() as u64;
        }
        BigUint::from(count)
    }

    /// DOT export of the Hasse diagram, cover edges drawn upward.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tamari {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for (i, f) in self.elements.iter().enumerate() {
            out.push_str(&format!("  n{} [label=\"{}\"];\n", i, f));
        }
        for (i, j) in &self.covers {
            out.push_str(&format!("  n{} -> n{};\n", i, j));
        }
        out.push_str("}\n");
        out
    }

    /// CSV export of the order relation matrix.
    pub fn leq_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("elem");
        for f in &self.elements {
            out.push_str(&format!(",{}", f));
        }
        out.push('\n');
        for (i, f) in self.elements.iter().enumerate() {
            out.push_str(&f.to_string());
            for j in 0..self.elements.len() {
                out.push_str(if self.leq[i][j] { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }
}

/// Number of pairs `(A, B)` with `A <= B` over all shapes of size `n`.
pub fn count_intervals_bruteforce(n: usize) -> Result<BigUint, OrderError> {
    Ok(TamariPoset::build(n)?.count_intervals())
}

fn bound(
    a: &Formula,
    b: &Formula,
    lower: bool,
) -> Result<Formula, OrderError> {
    if a.frontier() != b.frontier() {
        return Err(OrderError::FrontierMismatch { a: a.to_string(), b: b.to_string() });
    }
    let n = a.size();
    let poset = TamariPoset::build_with_limit(n, usize::MAX)?;
    // Relabel to the constant frontier to look up shapes, then map the
    // answer's shape back onto the common frontier.
    let constant = |_: &Atom| Atom::new("p").unwrap();
    let ia = poset.index_of(&a.relabel(&constant)).expect("shape enumerated");
    let ib = poset.index_of(&b.relabel(&constant)).expect("shape enumerated");
    let name = if lower { "greatest lower" } else { "least upper" };
    let candidates: Vec<usize> = (0..poset.elements.len())
        .filter(|&c| {
            if lower {
                poset.leq(c, ia) && poset.leq(c, ib)
            } else {
                poset.leq(ia, c) && poset.leq(ib, c)
            }
        })
        .collect();
    // For the meet, keep the maximal candidates; in a finite poset a unique
    // maximal element is the greatest one. Dually for the join.
    let extreme: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&c| {
            !candidates.iter().any(|&d| {
                d != c && if lower { poset.leq(c, d) } else { poset.leq(d, c) }
            })
        })
        .collect();
    match extreme.as_slice() {
        [i] => {
            let frontier = a.frontier();
            let mut pos = 0usize;
            Ok(fill_frontier(&poset.elements[*i], &frontier, &mut pos))
        }
        [] => Err(OrderError::BoundMissing(name)),
        _ => Err(OrderError::BoundNotUnique(name)),
    }
}

fn fill_frontier(shape: &Formula, frontier: &[Atom], pos: &mut usize) -> Formula {
    match shape {
        Formula::Atom(_) => {
            let a = frontier[*pos].clone();
            *pos += 1;
            Formula::Atom(a)
        }
        Formula::Prod(l, r) => {
            let lf = fill_frontier(l, frontier, pos);
            let rf = fill_frontier(r, frontier, pos);
            Formula::prod(lf, rf)
        }
    }
}

/// Greatest lower bound of two same-frontier formulas, by brute force.
pub fn meet(a: &Formula, b: &Formula) -> Result<Formula, OrderError> {
    bound(a, b, true)
}

/// Least upper bound of two same-frontier formulas, by brute force.
pub fn join(a: &Formula, b: &Formula) -> Result<Formula, OrderError> {
    bound(a, b, false)
}

pub fn catalan(n: usize) -> BigUint {
    // binom(2n, n) / (n + 1)
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for k in 0..n {
        num *= BigUint::from((2 * n - k) as u64);
        den *= BigUint::from((k + 1) as u64);
    }
    num / den / BigUint::from((n + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn fml(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn rotation_successor_cases() {
        assert_eq!(rotation_successors(&fml("(p*q)*r")), vec![fml("p*(q*r)")]);
        assert_eq!(rotation_successors(&fml("p*(q*r)")), Vec::<Formula>::new());
        assert_eq!(
            rotation_successors(&fml("((p*q)*r)*s")),
            vec![fml("(p*q)*(r*s)"), fml("(p*(q*r))*s")]
        );
    }

    #[test]
    fn leq_cases() {
        assert!(leq_bruteforce(&fml("(p*q)*r"), &fml("p*(q*r)")));
        assert!(!leq_bruteforce(&fml("p*(q*r)"), &fml("(p*q)*r")));
        assert!(leq_bruteforce(&fml("(p*(q*r))*s"), &fml("p*(q*(r*s))")));
    }

    #[test]
    fn poset_small() {
        let y3 = TamariPoset::build(3).unwrap();
        assert_eq!(y3.elements.len(), 5);
        assert_eq!(y3.covers.len(), 5); // pentagon
        let y1 = TamariPoset::build(1).unwrap();
        assert_eq!(y1.elements.len(), 1);
        assert!(y1.covers.is_empty());
        let y4 = TamariPoset::build(4).unwrap();
        assert_eq!(y4.elements.len(), 14);
    }

    #[test]
    fn interval_counts() {
        assert_eq!(count_intervals_bruteforce(3).unwrap(), BigUint::from(13u32));
        assert_eq!(count_intervals_bruteforce(0).unwrap(), BigUint::from(1u32));
        assert_eq!(count_intervals_bruteforce(4).unwrap(), BigUint::from(68u32));
    }

    #[test]
    fn limit_enforced() {
        assert!(matches!(
            TamariPoset::build_with_limit(4, 3),
            Err(OrderError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn catalan_counts_elements() {
        for n in 0..=8 {
            let expect = catalan(n);
            assert_eq!(BigUint::from(enumerate_shapes(n).len() as u64), expect, "n={n}");
        }
    }

    #[test]
    fn order_is_partial_order() {
        for n in 0..=5 {
            let poset = TamariPoset::build(n).unwrap();
            let m = poset.elements.len();
            for i in 0..m {
                assert!(poset.leq(i, i));
                for j in 0..m {
                    if poset.leq(i, j) && poset.leq(j, i) {
                        assert_eq!(i, j, "antisymmetry at n={n}");
                    }
                    for k in 0..m {
                        if poset.leq(i, j) && poset.leq(j, k) {
                            assert!(poset.leq(i, k), "transitivity at n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn covers_are_transitive_reduction() {
        // Every cover edge is a rotation, and removing any cover changes
        // reachability. Checked directly on small lattices.
        for n in 0..=4 {
            let poset = TamariPoset::build(n).unwrap();
            let m = poset.elements.len();
            for i in 0..m {
                for j in 0..m {
                    if i == j || !poset.leq(i, j) {
                        continue;
                    }
                    let strictly_between =
                        (0..m).any(|k| k != i && k != j && poset.leq(i, k) && poset.leq(k, j));
                    assert_eq!(poset.covers.contains(&(i, j)), !strictly_between);
                }
            }
        }
    }

    #[test]
    fn meet_join_cases() {
        let a = fml("(p*q)*r");
        assert_eq!(meet(&a, &a).unwrap(), a);
        assert_eq!(join(&fml("(p*q)*r"), &fml("p*(q*r)")).unwrap(), fml("p*(q*r)"));
        assert!(meet(&fml("p*q"), &fml("q*p")).is_err());
    }

    #[test]
    fn lattice_property_small() {
        for n in 1..=5 {
            let shapes = enumerate_shapes(n);
            for a in &shapes {
                for b in &shapes {
                    meet(a, b).unwrap();
                    join(a, b).unwrap();
                }
            }
        }
    }

    #[test]
    fn dot_and_csv_shapes() {
        let y3 = TamariPoset::build(3).unwrap();
        let dot = y3.to_dot();
        assert!(dot.starts_with("digraph tamari {"));
        assert_eq!(dot.matches(" -> ").count(), 5);
        let csv = y3.leq_csv();
        assert_eq!(csv.lines().count(), 6);
    }
}
