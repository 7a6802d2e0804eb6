//! Linear, planar and indecomposable lambda terms: application trees,
//! binding diagrams and binding forests, beta- and rho-reduction, canonical
//! enumeration, and the bijection with Tamari intervals through the sequent
//! calculus.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{self, Derivation, Rule};
use crate::syntax::{Atom, Context, Formula, Sequent};

pub const DEFAULT_ENUM_LIMIT: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("bound variable {name:?} violates the Barendregt convention; rename it (e.g. to {hint:?})")]
    Barendregt { name: String, hint: String },
    #[error("term is not linear")]
    NotLinear,
    #[error("not planar/indecomposable at binder {0}")]
    ForestSideCondition(String),
    #[error("term is not closed")]
    NotClosed,
    #[error("closed indecomposable term must be an abstraction")]
    NotAbstraction,
    #[error("size {n} exceeds the configured limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("derivation uses {0:?}, which has no term interpretation")]
    UnsupportedRule(Rule),
    #[error("not a Tamari interval: {0}")]
    NotAnInterval(String),
    #[error("frontier mismatch between {a} and {b}")]
    FrontierMismatch { a: String, b: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A lambda term: variable, application, or abstraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Term {
    Var(String),
    App(Box<Term>, Box<Term>),
    Abs(String, Box<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn abs(x: &str, body: Term) -> Term {
        Term::Abs(x.to_string(), Box::new(body))
    }

    /// Size is the number of applications (internal nodes of the
    /// application tree).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, b) => b.size(),
        }
    }

    /// Free variables in order of first occurrence in the binding diagram.
    pub fn free_vars(&self) -> Vec<String> {
        fn go(m: &Term, bound: &mut HashSet<String>, out: &mut Vec<String>) {
            match m {
                Term::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
                Term::Abs(x, b) => {
                    let added = bound.insert(x.clone());
                    go(b, bound, out);
                    if added {
                        bound.remove(x);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut HashSet::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn var_occurrences(&self, x: &str) -> usize {
        match self {
            Term::Var(y) => usize::from(y == x),
            Term::App(f, a) => f.var_occurrences(x) + a.var_occurrences(x),
            Term::Abs(y, b) => {
                if y == x {
                    0 // shadowed; cannot happen under the Barendregt convention
                } else {
                    b.var_occurrences(x)
                }
            }
        }
    }

    /// Every abstraction binds exactly one occurrence and every free
    /// variable occurs exactly once.
    pub fn is_linear(&self) -> bool {
        fn abstractions_linear(m: &Term) -> bool {
            match m {
                Term::Var(_) => true,
                Term::App(f, a) => abstractions_linear(f) && abstractions_linear(a),
                Term::Abs(x, b) => b.var_occurrences(x) == 1 && abstractions_linear(b),
            }
        }
        fn count_free(m: &Term, counts: &mut HashMap<String, usize>, bound: &mut HashSet<String>) {
            match m {
                Term::Var(x) => {
                    if !bound.contains(x) {
                        *counts.entry(x.clone()).or_insert(0) += 1;
                    }
                }
                Term::App(f, a) => {
                    count_free(f, counts, bound);
                    count_free(a, counts, bound);
                }
                Term::Abs(x, b) => {
                    let added = bound.insert(x.clone());
                    count_free(b, counts, bound);
                    if added {
                        bound.remove(x);
                    }
                }
            }
        }
        let mut counts = HashMap::new();
        count_free(self, &mut counts, &mut HashSet::new());
        abstractions_linear(self) && counts.values().all(|&c| c == 1)
    }

    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = vec![self];
        match self {
            Term::Var(_) => {}
            Term::App(f, a) => {
                out.extend(f.subterms());
                out.extend(a.subterms());
            }
            Term::Abs(_, b) => out.extend(b.subterms()),
        }
        out
    }

    /// No closed proper subterms.
    pub fn is_indecomposable(&self) -> bool {
        self.subterms().iter().skip(1).all(|s| !s.is_closed())
    }

    pub fn is_beta_normal(&self) -> bool {
        self.subterms()
            .iter()
            .all(|s| !matches!(s, Term::App(f, _) if matches!(**f, Term::Abs(..))))
    }

    /// Check the Barendregt convention: distinct binder names, and no name
    /// both free and bound.
    pub fn check_barendregt(&self) -> Result<(), LambdaError> {
        fn binders(m: &Term, out: &mut Vec<String>) {
            match m {
                Term::Var(_) => {}
                Term::App(f, a) => {
                    binders(f, out);
                    binders(a, out);
                }
                Term::Abs(x, b) => {
                    out.push(x.clone());
                    binders(b, out);
                }
            }
        }
        let mut bs = Vec::new();
        binders(self, &mut bs);
        let mut seen = HashSet::new();
        for (i, b) in bs.iter().enumerate() {
            if !seen.insert(b.clone()) {
                return Err(LambdaError::Barendregt { name: b.clone(), hint: format!("{b}{i}") });
            }
        }
        for v in self.free_vars() {
            if seen.contains(&v) {
                return Err(LambdaError::Barendregt { name: v.clone(), hint: format!("{v}0") });
            }
        }
        Ok(())
    }
}

/// Structural analysis flags for a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub linear: bool,
    pub closed: bool,
    pub indecomposable: bool,
    pub planar: bool,
    pub beta_normal: bool,
}

pub fn analyze(m: &Term) -> Analysis {
    let linear = m.is_linear();
    Analysis {
        linear,
        closed: m.is_closed(),
        indecomposable: m.is_indecomposable(),
        planar: linear && word_planar(&bind_word(m)),
        beta_normal: m.is_beta_normal(),
    }
}

/// The application tree: applications become products, abstractions are
/// erased, variables label the leaves.
pub fn apptree(m: &Term) -> Formula {
    match m {
        Term::Var(x) => Formula::atom(x),
        Term::App(f, a) => Formula::prod(apptree(f), apptree(a)),
        Term::Abs(_, b) => apptree(b),
    }
}

/// An (at-most-)double-occurrence word recording the order of abstractions
/// and variable uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BindingDiagram {
    pub word: Vec<String>,
}

impl fmt::Display for BindingDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word.join(" "))
    }
}

fn bind_word(m: &Term) -> Vec<String> {
    match m {
        Term::Var(x) => vec![x.clone()],
        Term::App(f, a) => {
            let mut w = bind_word(f);
            w.extend(bind_word(a));
            w
        }
        Term::Abs(x, b) => {
            let mut w = vec![x.clone()];
            w.extend(bind_word(b));
            w
        }
    }
}

/// The binding diagram of a linear term under the Barendregt convention.
pub fn binddiag(m: &Term) -> Result<BindingDiagram, LambdaError> {
    m.check_barendregt()?;
    if !m.is_linear() {
        return Err(LambdaError::NotLinear);
    }
    Ok(BindingDiagram { word: bind_word(m) })
}

fn occurrence_counts(word: &[String]) -> HashMap<&String, usize> {
    let mut counts = HashMap::new();
    for letter in word {
        *counts.entry(letter).or_insert(0) += 1;
    }
    counts
}

fn is_dow(word: &[String]) -> bool {
    occurrence_counts(word).values().all(|&c| c == 2)
}

/// Planarity of a word: for every subword `x, delta, x`, the enclosed
/// segment `delta` is a double-occurrence word.
fn word_planar(word: &[String]) -> bool {
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] == word[j] && !is_dow(&word[i + 1..j]) {
                return false;
            }
        }
    }
    true
}

/// A double-occurrence word is indecomposable when it is not the
/// concatenation of two nonempty double-occurrence words.
fn word_indecomposable(word: &[String]) -> bool {
    is_dow(word) && !(1..word.len()).any(|k| is_dow(&word[..k]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiagramChecks {
    pub double_occurrence: bool,
    pub planar: bool,
    pub indecomposable: bool,
}

pub fn diagram_checks(w: &BindingDiagram) -> DiagramChecks {
    DiagramChecks {
        double_occurrence: is_dow(&w.word),
        planar: word_planar(&w.word),
        indecomposable: word_indecomposable(&w.word),
    }
}

/// Substitute `n` for the free occurrences of `x` in `m`. Linear terms have
/// a single occurrence and the Barendregt convention rules out capture.
fn substitute(m: &Term, x: &str, n: &Term) -> Term {
    match m {
        Term::Var(y) if y == x => n.clone(),
        Term::Var(_) => m.clone(),
        Term::App(f, a) => Term::app(substitute(f, x, n), substitute(a, x, n)),
        Term::Abs(y, _) if y == x => m.clone(),
        Term::Abs(y, b) => Term::abs(y, substitute(b, x, n)),
    }
}

/// All one-step beta-reducts, at every subterm position.
pub fn beta_step(m: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if let Term::App(f, a) = m {
        if let Term::Abs(x, body) = &**f {
            out.push(substitute(body, x, a));
        }
    }
    match m {
        Term::Var(_) => {}
        Term::App(f, a) => {
            out.extend(beta_step(f).into_iter().map(|f2| Term::app(f2, (**a).clone())));
            out.extend(beta_step(a).into_iter().map(|a2| Term::app((**f).clone(), a2)));
        }
        Term::Abs(x, b) => {
            out.extend(beta_step(b).into_iter().map(|b2| Term::abs(x, b2)));
        }
    }
    out
}

/// All one-step rho-reducts: `(\x.M)(N) -> \x.M(N)` at every position.
pub fn rho_step(m: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if let Term::App(f, a) = m {
        if let Term::Abs(x, body) = &**f {
            out.push(Term::abs(x, Term::app((**body).clone(), (**a).clone())));
        }
    }
    match m {
        Term::Var(_) => {}
        Term::App(f, a) => {
            out.extend(rho_step(f).into_iter().map(|f2| Term::app(f2, (**a).clone())));
            out.extend(rho_step(a).into_iter().map(|a2| Term::app((**f).clone(), a2)));
        }
        Term::Abs(x, b) => {
            out.extend(rho_step(b).into_iter().map(|b2| Term::abs(x, b2)));
        }
    }
    out
}

/// Apply rho-steps to a normal form; terminates because each abstraction
/// can be rotated only finitely many times.
pub fn rho_normalize(m: &Term) -> Term {
    let mut cur = m.clone();
    while let Some(next) = rho_step(&cur).into_iter().next() {
        cur = next;
    }
    cur
}

/// Canonical renaming: binders are renamed `b1, b2, ...` in the order they
/// appear in the binding diagram; free names are kept.
pub fn canonicalize(m: &Term) -> Term {
    fn go(m: &Term, map: &mut HashMap<String, String>, counter: &mut usize) -> Term {
        match m {
            Term::Var(x) => Term::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            Term::App(f, a) => {
                let f2 = go(f, map, counter);
                let a2 = go(a, map, counter);
                Term::app(f2, a2)
            }
            Term::Abs(x, b) => {
                *counter += 1;
                let fresh = format!("b{counter}");
                let shadowed = map.insert(x.clone(), fresh.clone());
                let b2 = go(b, map, counter);
                match shadowed {
                    Some(old) => map.insert(x.clone(), old),
                    None => map.remove(x),
                };
                Term::Abs(fresh, Box::new(b2))
            }
        }
    }
    go(m, &mut HashMap::new(), &mut 0)
}

/// Rho-equivalence via the complete invariant: equal application trees and
/// equal binding diagrams (after canonical renaming).
pub fn rho_equiv(m: &Term, n: &Term) -> Result<bool, LambdaError> {
    if !m.is_linear() || !n.is_linear() {
        return Err(LambdaError::NotLinear);
    }
    let cm = canonicalize(m);
    let cn = canonicalize(n);
    Ok(apptree(&cm) == apptree(&cn) && bind_word(&cm) == bind_word(&cn))
}

/// The binding forest: one tree per free variable, built by merging the two
/// leading trees at each abstraction. The side condition that the bound
/// variable sits at the rightmost end of the first tree's frontier enforces
/// planarity.
pub fn binding_forest(m: &Term) -> Result<Vec<Formula>, LambdaError> {
    match m {
        Term::Var(x) => Ok(vec![Formula::atom(x)]),
        Term::App(f, a) => {
            let mut forest = binding_forest(f)?;
            forest.extend(binding_forest(a)?);
            Ok(forest)
        }
        Term::Abs(x, b) => {
            let forest = binding_forest(b)?;
            if forest.len() < 2 {
                return Err(LambdaError::ForestSideCondition(x.clone()));
            }
            let first = &forest[0];
            let rightmost = first.frontier().last().cloned().unwrap();
            if rightmost.name() != x {
                return Err(LambdaError::ForestSideCondition(x.clone()));
            }
            let mut out = vec![Formula::prod(first.clone(), forest[1].clone())];
            out.extend_from_slice(&forest[2..]);
            Ok(out)
        }
    }
}

/// The binding tree of a closed indecomposable planar term: the single tree
/// in the binding forest of its body.
pub fn binding_tree(m: &Term) -> Result<Formula, LambdaError> {
    if !m.is_closed() {
        return Err(LambdaError::NotClosed);
    }
    let Term::Abs(_, body) = m else {
        return Err(LambdaError::NotAbstraction);
    };
    let forest = binding_forest(body)?;
    match <[Formula; 1]>::try_from(forest) {
        Ok([tree]) => Ok(tree),
        Err(forest) => Err(LambdaError::Precondition(format!(
            "body has {} free variables, expected 1",
            forest.len()
        ))),
    }
}

/// Interpret a term as a sequent derivation of
/// `binding_forest(m) |- apptree(m)`: abstractions become *L, applications
/// become the right rule, variables become atomic identities. Closed terms
/// are unwrapped through their outer abstraction first.
pub fn term_to_derivation(m: &Term) -> Result<Derivation, LambdaError> {
    if m.is_closed() {
        let Term::Abs(_, body) = m else {
            return Err(LambdaError::NotAbstraction);
        };
        return term_to_derivation(body);
    }
    match m {
        Term::Var(x) => {
            let atom = Atom::new(x.clone())
                .map_err(|e| LambdaError::Precondition(e.to_string()))?;
            Ok(Derivation::id_atm(atom))
        }
        Term::App(f, a) => {
            let left = term_to_derivation(f)?;
            let right = term_to_derivation(a)?;
            if left.conclusion.context.is_irreducible() {
                Ok(Derivation::star_r_foc(left, right).expect("checked irreducible"))
            } else {
                Ok(Derivation::star_r(left, right))
            }
        }
        Term::Abs(x, b) => {
            let inner = term_to_derivation(b)?;
            let ctx = inner.conclusion.context.formulas();
            if ctx.len() < 2 {
                return Err(LambdaError::ForestSideCondition(x.clone()));
            }
            let rightmost = ctx[0].frontier().last().cloned().unwrap();
            if rightmost.name() != x {
                return Err(LambdaError::ForestSideCondition(x.clone()));
            }
            Ok(Derivation::star_l(inner).expect("context length checked"))
        }
    }
}

/// Interpret a cut-free derivation over *L, the right rules, and atomic
/// identity as an indecomposable planar term with one free variable per
/// context entry. Variables are freshly named by frontier position, which
/// the frontier-invariance property justifies.
pub fn derivation_to_term(d: &Derivation) -> Result<Term, LambdaError> {
    calculus::validate(d).map_err(|e| LambdaError::Precondition(e.to_string()))?;
    if let Some(bad) = find_rule(d, &[Rule::Cut, Rule::Id]) {
        return Err(LambdaError::UnsupportedRule(bad));
    }
    let names: Vec<String> =
        (0..d.conclusion.context.frontier_len()).map(|i| format!("v{}", i + 1)).collect();
    Ok(interp(d, &names))
}

fn find_rule(d: &Derivation, rules: &[Rule]) -> Option<Rule> {
    if rules.contains(&d.rule) {
        return Some(d.rule);
    }
    d.premises.iter().find_map(|p| find_rule(p, rules))
}

fn interp(d: &Derivation, names: &[String]) -> Term {
    match d.rule {
        Rule::IdAtm => Term::Var(names[0].clone()),
        Rule::StarL => {
            let premise = &d.premises[0];
            let bound = premise.conclusion.context.formulas()[0].frontier_len() - 1;
            Term::abs(&names[bound], interp(premise, names))
        }
        Rule::StarR | Rule::StarRFoc => {
            let split = d.premises[0].conclusion.context.frontier_len();
            Term::app(
                interp(&d.premises[0], &names[..split]),
                interp(&d.premises[1], &names[split..]),
            )
        }
        Rule::Id | Rule::Cut => unreachable!("rejected before interpretation"),
    }
}

/// The interval of a closed indecomposable planar term: its binding tree
/// paired with its application tree. The first component is always below
/// the second in the Tamari order.
pub fn term_to_interval(m: &Term) -> Result<(Formula, Formula), LambdaError> {
    Ok((binding_tree(m)?, apptree(m)))
}

/// The unique closed indecomposable beta-normal planar term whose binding
/// tree is `a` and application tree is `b`; fails when `a <= b` does not
/// hold in the Tamari order.
pub fn interval_to_term(a: &Formula, b: &Formula) -> Result<Term, LambdaError> {
    if a.frontier() != b.frontier() {
        return Err(LambdaError::FrontierMismatch { a: a.to_string(), b: b.to_string() });
    }
    let sequent = Sequent::new(Context::singleton(a.clone()), b.clone());
    let derivation = calculus::decide_focused(&sequent)
        .ok_or_else(|| LambdaError::NotAnInterval(format!("{a} |- {b} is underivable")))?;
    let body = derivation_to_term(&derivation)?;
    let free = body.free_vars();
    let [x] = free.as_slice() else {
        return Err(LambdaError::Precondition(format!(
            "expected one free variable, found {}",
            free.len()
        )));
    };
    Ok(canonicalize(&Term::abs(x, body)))
}

/// Term filters for enumeration; unset flags leave the property free.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Filters {
    pub closed: bool,
    pub planar: bool,
    pub indecomposable: bool,
    pub normal: bool,
}

impl Filters {
    pub fn all() -> Filters {
        Filters { closed: true, planar: true, indecomposable: true, normal: true }
    }

    fn accepts(&self, analysis: &Analysis) -> bool {
        (!self.closed || analysis.closed)
            && (!self.planar || analysis.planar)
            && (!self.indecomposable || analysis.indecomposable)
            && (!self.normal || analysis.beta_normal)
    }
}

// Skeletons of abstractions and applications with unnamed variables.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Skeleton {
    Var,
    App(Box<Skeleton>, Box<Skeleton>),
    Abs(Box<Skeleton>),
}

fn skeletons(apps: usize, abss: usize, memo: &mut HashMap<(usize, usize), Vec<Skeleton>>) -> Vec<Skeleton> {
    if let Some(v) = memo.get(&(apps, abss)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if apps == 0 && abss == 0 {
        out.push(Skeleton::Var);
    }
    if abss >= 1 {
        for s in skeletons(apps, abss - 1, memo) {
            out.push(Skeleton::Abs(Box::new(s)));
        }
    }
    if apps >= 1 {
        for a1 in 0..apps {
            for b1 in 0..=abss {
                let lefts = skeletons(a1, b1, memo);
                if lefts.is_empty() {
                    continue;
                }
                let rights = skeletons(apps - 1 - a1, abss - b1, memo);
                for l in &lefts {
                    for r in &rights {
                        out.push(Skeleton::App(Box::new(l.clone()), Box::new(r.clone())));
                    }
                }
            }
        }
    }
    memo.insert((apps, abss), out.clone());
    out
}

// Every linear filling of a skeleton: each binder binds exactly one leaf
// below it, and unbound leaves become free variables named in left-to-right
// order. `binder_path[leaf] = Some(binder index)`.
fn linear_fillings(sk: &Skeleton) -> Vec<Term> {
    // Collect leaves with the set of enclosing binder indices.
    fn walk(sk: &Skeleton, binders: &mut Vec<usize>, next: &mut usize, leaves: &mut Vec<Vec<usize>>) {
        match sk {
            Skeleton::Var => leaves.push(binders.clone()),
            Skeleton::App(l, r) => {
                walk(l, binders, next, leaves);
                walk(r, binders, next, leaves);
            }
            Skeleton::Abs(b) => {
                let idx = *next;
                *next += 1;
                binders.push(idx);
                walk(b, binders, next, leaves);
                binders.pop();
            }
        }
    }
    let mut leaves = Vec::new();
    let mut nb = 0usize;
    walk(sk, &mut Vec::new(), &mut nb, &mut leaves);

    // Assign each binder a distinct leaf it encloses; leftover leaves are
    // free.
    let mut assignments = Vec::new();
    let mut current: Vec<Option<usize>> = vec![None; leaves.len()]; // leaf -> binder
    fn assign(
        binder: usize,
        nb: usize,
        leaves: &[Vec<usize>],
        current: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<Option<usize>>>,
    ) {
        if binder == nb {
            out.push(current.clone());
            return;
        }
        for (leaf, enclosing) in leaves.iter().enumerate() {
            if current[leaf].is_none() && enclosing.contains(&binder) {
                current[leaf] = Some(binder);
                assign(binder + 1, nb, leaves, current, out);
                current[leaf] = None;
            }
        }
    }
    assign(0, nb, &leaves, &mut current, &mut assignments);

    // Rebuild named terms.
    assignments
        .into_iter()
        .map(|assignment| {
            let mut leaf_idx = 0usize;
            let mut binder_idx = 0usize;
            let mut free_count = 0usize;
            fn build(
                sk: &Skeleton,
                assignment: &[Option<usize>],
                leaf_idx: &mut usize,
                binder_idx: &mut usize,
                free_count: &mut usize,
            ) -> Term {
                match sk {
                    Skeleton::Var => {
                        let leaf = *leaf_idx;
                        *leaf_idx += 1;
                        match assignment[leaf] {
                            Some(b) => Term::Var(format!("x{}", b + 1)),
                            None => {
                                *free_count += 1;
                                Term::Var(format!("f{free_count}"))
                            }
                        }
                    }
                    Skeleton::App(l, r) => {
                        let lt = build(l, assignment, leaf_idx, binder_idx, free_count);
                        let rt = build(r, assignment, leaf_idx, binder_idx, free_count);
                        Term::app(lt, rt)
                    }
                    Skeleton::Abs(b) => {
                        let idx = *binder_idx;
                        *binder_idx += 1;
                        let body = build(b, assignment, leaf_idx, binder_idx, free_count);
                        Term::Abs(format!("x{}", idx + 1), Box::new(body))
                    }
                }
            }
            canonicalize(&build(
                sk,
                &assignment,
                &mut leaf_idx,
                &mut binder_idx,
                &mut free_count,
            ))
        })
        .collect()
}

/// Enumerate linear terms of the given size (number of applications),
/// duplicate-free up to alpha-equivalence, in a deterministic order:
/// skeleton order first, then the binder-to-leaf matching order.
pub fn enumerate_terms(n: usize, filters: Filters) -> Result<Vec<Term>, LambdaError> {
    enumerate_terms_with_limit(n, filters, DEFAULT_ENUM_LIMIT)
}

pub fn enumerate_terms_with_limit(
    n: usize,
    filters: Filters,
    limit: usize,
) -> Result<Vec<Term>, LambdaError> {
    if n > limit {
        return Err(LambdaError::LimitExceeded { n, limit });
    }
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    // With a apps there are a+1 leaves, so at most a+1 binders; closed
    // linear terms need exactly a+1.
    let abs_range = if filters.closed { (n + 1)..=(n + 1) } else { 0..=(n + 1) };
    for abss in abs_range {
        for sk in skeletons(n, abss, &mut memo) {
            for term in linear_fillings(&sk) {
                let analysis = analyze(&term);
                debug_assert!(analysis.linear);
                if filters.accepts(&analysis) {
                    out.push(term);
                }
            }
        }
    }
    Ok(out)
}

/// Parse a term. Abstractions (`\x.M`) take scope to the right as far as
/// possible and application is left-associative juxtaposition.
pub fn parse_term(text: &str) -> Result<Term, LambdaError> {
    let mut p = TermScanner { src: text, pos: 0 };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(LambdaError::Parse {
            pos: p.pos,
            msg: format!("unexpected {:?}", &p.src[p.pos..p.pos + 1]),
        });
    }
    t.check_barendregt()?;
    Ok(t)
}

struct TermScanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> TermScanner<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err(&self, msg: impl Into<String>) -> LambdaError {
        LambdaError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn var_name(&mut self) -> Result<String, LambdaError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        let name = &rest[..len];
        if len == 0 || !name.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(self.err("expected a variable name"));
        }
        self.pos += len;
        Ok(name.to_string())
    }

    fn term(&mut self) -> Result<Term, LambdaError> {
        match self.peek() {
            Some('\\') | Some('λ') => {
                let c = self.peek().unwrap();
                self.pos += c.len_utf8();
                let x = self.var_name()?;
                self.skip_ws();
                if self.peek() != Some('.') {
                    return Err(self.err("expected '.' after the binder"));
                }
                self.pos += 1;
                let body = self.term()?;
                Ok(Term::Abs(x, Box::new(body)))
            }
            _ => self.application(),
        }
    }

    fn application(&mut self) -> Result<Term, LambdaError> {
        let mut acc = self.atom_term()?;
        loop {
            match self.peek() {
                Some('(') => {
                    let arg = self.atom_term()?;
                    acc = Term::app(acc, arg);
                }
                Some(c) if c.is_ascii_lowercase() => {
                    let arg = self.atom_term()?;
                    acc = Term::app(acc, arg);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom_term(&mut self) -> Result<Term, LambdaError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(c) if c.is_ascii_lowercase() => Ok(Term::Var(self.var_name()?)),
            _ => Err(self.err("expected a term")),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Abs(x, b) => write!(f, "\\{x}.{b}"),
            Term::App(fun, arg) => {
                match **fun {
                    Term::Abs(..) => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                write!(f, "({arg})")
            }
        }
    }
}
