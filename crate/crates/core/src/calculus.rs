//! Derivations and rules of the sequent calculus, the deterministic focused
//! decision procedure, the focusing transformation (admissibility of id, cut
//! and the unrestricted right rule), and the exhaustive enumerator used for
//! coherence checking.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Atom, Context, Formula, Sequent, SequentClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "L")]
    StarL,
    #[serde(rename = "R")]
    StarR,
    #[serde(rename = "Rfoc")]
    StarRFoc,
    #[serde(rename = "id")]
    Id,
    #[serde(rename = "id_atm")]
    IdAtm,
    #[serde(rename = "cut")]
    Cut,
}

impl Rule {
    pub fn arity(self) -> usize {
        match self {
            Rule::Id | Rule::IdAtm => 0,
            Rule::StarL => 1,
            Rule::StarR | Rule::StarRFoc | Rule::Cut => 2,
        }
    }
}

/// Split positions carried by a cut node: the cut conclusion is
/// `Gamma, Theta, Delta |- B` with `|Gamma| = gamma_len` and
/// `|Theta| = theta_len`. Context concatenation is not injective, so the
/// node records the split explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CutInfo {
    pub formula: Formula,
    pub gamma_len: usize,
    pub theta_len: usize,
}

/// A rule-labeled tree whose nodes carry sequents. All derivations in this
/// representation are closed (leaves are identity rules).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<Derivation>,
    pub cut: Option<CutInfo>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("invalid derivation at {at}: {msg}")]
    Invalid { at: String, msg: String },
    #[error("frontier length {len} exceeds the configured limit {limit}")]
    LimitExceeded { len: usize, limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

fn invalid(at: &Sequent, msg: impl Into<String>) -> CalculusError {
    CalculusError::Invalid { at: at.to_string(), msg: msg.into() }
}

fn precondition(msg: impl Into<String>) -> CalculusError {
    CalculusError::Precondition(msg.into())
}

impl Derivation {
    pub fn new(
        rule: Rule,
        conclusion: Sequent,
        premises: Vec<Derivation>,
        cut: Option<CutInfo>,
    ) -> Derivation {
        Derivation { rule, conclusion, premises, cut }
    }

    pub fn id(a: Formula) -> Derivation {
        let conclusion = Sequent::new(Context::singleton(a.clone()), a);
        Derivation::new(Rule::Id, conclusion, vec![], None)
    }

    pub fn id_atm(p: Atom) -> Derivation {
        let f = Formula::Atom(p);
        let conclusion = Sequent::new(Context::singleton(f.clone()), f);
        Derivation::new(Rule::IdAtm, conclusion, vec![], None)
    }

    /// Apply *L to a premise whose context starts with two formulas.
    pub fn star_l(premise: Derivation) -> Result<Derivation, CalculusError> {
        let ctx = premise.conclusion.context.formulas();
        if ctx.len() < 2 {
            return Err(precondition("*L premise context must have length >= 2"));
        }
        let mut formulas = vec![Formula::prod(ctx[0].clone(), ctx[1].clone())];
        formulas.extend_from_slice(&ctx[2..]);
        let conclusion = Sequent::new(Context::new(formulas), premise.conclusion.goal.clone());
        Ok(Derivation::new(Rule::StarL, conclusion, vec![premise], None))
    }

    fn combine_r(rule: Rule, left: Derivation, right: Derivation) -> Derivation {
        let context = left.conclusion.context.concat(&right.conclusion.context);
        let goal = Formula::prod(left.conclusion.goal.clone(), right.conclusion.goal.clone());
        Derivation::new(rule, Sequent::new(context, goal), vec![left, right], None)
    }

    pub fn star_r(left: Derivation, right: Derivation) -> Derivation {
        Derivation::combine_r(Rule::StarR, left, right)
    }

    pub fn star_r_foc(left: Derivation, right: Derivation) -> Result<Derivation, CalculusError> {
        if left.conclusion.context.is_reducible() {
            return Err(precondition("*Rfoc left premise context must be irreducible"));
        }
        Ok(Derivation::combine_r(Rule::StarRFoc, left, right))
    }

    /// Cut `theta` (concluding `Theta |- A`) into `main` at the given context
    /// position, which must hold the formula `A`.
    pub fn cut(
        theta: Derivation,
        main: Derivation,
        position: usize,
    ) -> Result<Derivation, CalculusError> {
        let a = theta.conclusion.goal.clone();
        let ctx = main.conclusion.context.formulas();
        if ctx.get(position) != Some(&a) {
            return Err(precondition(format!(
                "cut formula {a} not found at position {position}"
            )));
        }
        let mut formulas = ctx[..position].to_vec();
        formulas.extend_from_slice(theta.conclusion.context.formulas());
        formulas.extend_from_slice(&ctx[position + 1..]);
        let info = CutInfo {
            formula: a,
            gamma_len: position,
            theta_len: theta.conclusion.context.len(),
        };
        let conclusion = Sequent::new(Context::new(formulas), main.conclusion.goal.clone());
        Ok(Derivation::new(Rule::Cut, conclusion, vec![theta, main], Some(info)))
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }
}

/// Check that every node of the derivation instantiates its rule schema
/// exactly; a diagnostic variant of [`check_derivation`].
pub fn validate(d: &Derivation) -> Result<(), CalculusError> {
    let concl = &d.conclusion;
    if d.premises.len() != d.rule.arity() {
        return Err(invalid(concl, format!("{:?} expects {} premises", d.rule, d.rule.arity())));
    }
    if d.cut.is_some() != (d.rule == Rule::Cut) {
        return Err(invalid(concl, "cut info present iff the rule is cut"));
    }
    match d.rule {
        Rule::Id | Rule::IdAtm => {
            if concl.context.formulas() != [concl.goal.clone()] {
                return Err(invalid(concl, "identity requires context = [goal]"));
            }
            if d.rule == Rule::IdAtm && !concl.goal.is_atom() {
                return Err(invalid(concl, "id_atm requires an atomic formula"));
            }
        }
        Rule::StarL => {
            let prem = &d.premises[0].conclusion;
            let (a, b) = match concl.context.formulas().first() {
                Some(Formula::Prod(a, b)) => ((**a).clone(), (**b).clone()),
                _ => return Err(invalid(concl, "*L conclusion context must start with a product")),
            };
            let mut expected = vec![a, b];
            expected.extend_from_slice(&concl.context.formulas()[1..]);
            if prem.context.formulas() != expected || prem.goal != concl.goal {
                return Err(invalid(concl, "*L premise does not match the schema"));
            }
        }
        Rule::StarR | Rule::StarRFoc => {
            let left = &d.premises[0].conclusion;
            let right = &d.premises[1].conclusion;
            let expected_goal = Formula::prod(left.goal.clone(), right.goal.clone());
            let expected_ctx = left.context.concat(&right.context);
            if concl.goal != expected_goal || concl.context != expected_ctx {
                return Err(invalid(concl, "*R conclusion does not match its premises"));
            }
            if d.rule == Rule::StarRFoc && left.context.is_reducible() {
                return Err(invalid(concl, "*Rfoc left premise context must be irreducible"));
            }
        }
        Rule::Cut => {
            let info = d.cut.as_ref().unwrap();
            let theta = &d.premises[0].conclusion;
            let main = &d.premises[1].conclusion;
            if theta.goal != info.formula {
                return Err(invalid(concl, "cut formula differs from the left premise goal"));
            }
            if theta.context.len() != info.theta_len {
                return Err(invalid(concl, "theta split length mismatch"));
            }
            let g = info.gamma_len;
            let main_ctx = main.context.formulas();
            if main_ctx.get(g) != Some(&info.formula) {
                return Err(invalid(concl, "cut formula missing at the recorded position"));
            }
            let mut expected = main_ctx[..g].to_vec();
            expected.extend_from_slice(theta.context.formulas());
            expected.extend_from_slice(&main_ctx[g + 1..]);
            if concl.context.formulas() != expected || concl.goal != main.goal {
                return Err(invalid(concl, "cut conclusion does not match its premises"));
            }
        }
    }
    for p in &d.premises {
        validate(p)?;
    }
    Ok(())
}

pub fn check_derivation(d: &Derivation) -> bool {
    validate(d).is_ok()
}

/// A valid closed derivation is focused iff left-inverting sequents appear
/// only as conclusions of *L, right-focusing ones only of *R, and atomic
/// ones only of identity (so in particular it is cut-free).
pub fn is_focused(d: &Derivation) -> bool {
    check_derivation(d) && placement_ok(d)
}

fn placement_ok(d: &Derivation) -> bool {
    let rule_ok = match d.conclusion.classify() {
        SequentClass::LeftInverting => d.rule == Rule::StarL,
        SequentClass::RightFocusing => matches!(d.rule, Rule::StarR | Rule::StarRFoc),
        SequentClass::Atomic => matches!(d.rule, Rule::Id | Rule::IdAtm),
        SequentClass::EmptyContext => false,
    };
    rule_ok && d.premises.iter().all(placement_ok)
}

/// Deterministic focused proof search. Returns the unique focused derivation
/// when one exists; absence signals underivability.
///
/// The right-focusing case exploits frontier refinement: the context split
/// is forced by the frontier length of the goal's left factor, so no
/// backtracking is needed.
pub fn decide_focused(s: &Sequent) -> Option<Derivation> {
    match s.classify() {
        SequentClass::EmptyContext => None,
        SequentClass::Atomic => {
            match s.context.formulas() {
                [f] if *f == s.goal => {
                    let Formula::Atom(p) = &s.goal else { unreachable!() };
                    Some(Derivation::id_atm(p.clone()))
                }
                _ => None,
            }
        }
        SequentClass::LeftInverting => {
            let ctx = s.context.formulas();
            let Formula::Prod(a, b) = &ctx[0] else { unreachable!() };
            let mut formulas = vec![(**a).clone(), (**b).clone()];
            formulas.extend_from_slice(&ctx[1..]);
            let premise = decide_focused(&Sequent::new(Context::new(formulas), s.goal.clone()))?;
            Some(Derivation::star_l(premise).expect("premise has length >= 2"))
        }
        SequentClass::RightFocusing => {
            let Formula::Prod(a, b) = &s.goal else { unreachable!() };
            let target = a.frontier_len();
            let ctx = s.context.formulas();
            let mut acc = 0;
            let mut split = None;
            for (i, f) in ctx.iter().enumerate() {
                acc += f.frontier_len();
                if acc >= target {
                    if acc == target {
                        split = Some(i + 1);
                    }
                    break;
                }
            }
            let k = split?;
            if k == ctx.len() {
                return None; // right factor would get an empty context
            }
            let left = decide_focused(&Sequent::new(
                Context::new(ctx[..k].to_vec()),
                (**a).clone(),
            ))?;
            let right = decide_focused(&Sequent::new(
                Context::new(ctx[k..].to_vec()),
                (**b).clone(),
            ))?;
            Some(Derivation::star_r_foc(left, right).expect("prefix of irreducible context"))
        }
    }
}

/// Whether `a <= b` holds in the Tamari order, via the focused calculus.
pub fn entails(a: &Formula, b: &Formula) -> bool {
    decide_focused(&Sequent::new(Context::singleton(a.clone()), b.clone())).is_some()
}

/// Exhaustive backtracking search over the focused fragment, trying every
/// context split in the right rule. This deliberately ignores the frontier
/// shortcut used by [`decide_focused`] and serves as the independent oracle
/// for the coherence theorem.
pub fn enumerate_focused(s: &Sequent, limit: usize) -> Result<Vec<Derivation>, CalculusError> {
    let len = s.context.frontier_len();
    if len > limit {
        return Err(CalculusError::LimitExceeded { len, limit });
    }
    Ok(enumerate_all(s))
}

fn enumerate_all(s: &Sequent) -> Vec<Derivation> {
    match s.classify() {
        SequentClass::EmptyContext => vec![],
        SequentClass::Atomic => match s.context.formulas() {
            [f] if *f == s.goal => {
                let Formula::Atom(p) = &s.goal else { unreachable!() };
                vec![Derivation::id_atm(p.clone())]
            }
            _ => vec![],
        },
        SequentClass::LeftInverting => {
            let ctx = s.context.formulas();
            let Formula::Prod(a, b) = &ctx[0] else { unreachable!() };
            let mut formulas = vec![(**a).clone(), (**b).clone()];
            formulas.extend_from_slice(&ctx[1..]);
            enumerate_all(&Sequent::new(Context::new(formulas), s.goal.clone()))
                .into_iter()
                .map(|p| Derivation::star_l(p).expect("premise has length >= 2"))
                .collect()
        }
        SequentClass::RightFocusing => {
            let Formula::Prod(a, b) = &s.goal else { unreachable!() };
            let ctx = s.context.formulas();
            let mut out = Vec::new();
            for k in 1..ctx.len() {
                let lefts = enumerate_all(&Sequent::new(
                    Context::new(ctx[..k].to_vec()),
                    (**a).clone(),
                ));
                if lefts.is_empty() {
                    continue;
                }
                let rights = enumerate_all(&Sequent::new(
                    Context::new(ctx[k..].to_vec()),
                    (**b).clone(),
                ));
                for l in &lefts {
                    for r in &rights {
                        out.push(
                            Derivation::star_r_foc(l.clone(), r.clone())
                                .expect("prefix of irreducible context"),
                        );
                    }
                }
            }
            out
        }
    }
}

/// The derivation of the semi-associative law `(A*B)*C |- A*(B*C)`, exactly
/// as used in the completeness proof (unrestricted identities at A, B, C).
pub fn derive_semiassoc(a: &Formula, b: &Formula, c: &Formula) -> Derivation {
    let inner = Derivation::star_r(
        Derivation::id(a.clone()),
        Derivation::star_r(Derivation::id(b.clone()), Derivation::id(c.clone())),
    );
    let once = Derivation::star_l(inner).expect("three-formula context");
    Derivation::star_l(once).expect("two-formula context")
}

/// The focused deduction construction. `k` maps any focused derivation of
/// `Gamma^irr |- a` to a focused derivation of `Gamma^irr, Delta |- b` (for
/// the fixed `Delta` and `b` it closes over); the result is the focused
/// derivation of `a, Delta |- b`.
fn deduction(a: &Formula, k: &dyn Fn(Derivation) -> Derivation) -> Derivation {
    match a {
        Formula::Atom(p) => k(Derivation::id_atm(p.clone())),
        Formula::Prod(a1, a2) => {
            let body = deduction(a1, &|d1: Derivation| {
                let d2 = admit_id(a2);
                let paired =
                    Derivation::star_r_foc(d1, d2).expect("deduction feeds irreducible contexts");
                k(paired)
            });
            Derivation::star_l(body).expect("deduction body context has length >= 2")
        }
    }
}

/// Focused derivation of `a |- a`, built by the deduction construction.
pub fn admit_id(a: &Formula) -> Derivation {
    deduction(a, &|d| d)
}

/// Cut admissibility: given focused `theta : Theta |- A` and focused
/// `main : Gamma, A, Delta |- B` with `A` at context index `position`,
/// produce the focused derivation of `Gamma, Theta, Delta |- B`.
pub fn admit_cut(
    theta: &Derivation,
    main: &Derivation,
    position: usize,
) -> Result<Derivation, CalculusError> {
    if !is_focused(theta) || !is_focused(main) {
        return Err(precondition("admit_cut requires focused inputs"));
    }
    if main.conclusion.context.formulas().get(position) != Some(&theta.conclusion.goal) {
        return Err(precondition(format!(
            "cut formula {} not at position {position}",
            theta.conclusion.goal
        )));
    }
    Ok(cut_rec(theta, main, position))
}

fn cut_rec(theta: &Derivation, main: &Derivation, position: usize) -> Derivation {
    let a = &theta.conclusion.goal;
    if a.is_atom() {
        // Frontier refinement forces Theta = [p]; the cut is trivial.
        return main.clone();
    }
    match main.rule {
        Rule::IdAtm | Rule::Id => unreachable!("compound cut formula in an atomic identity"),
        Rule::StarR | Rule::StarRFoc => {
            let split = main.premises[0].conclusion.context.len();
            if position < split {
                let left = cut_rec(theta, &main.premises[0], position);
                Derivation::star_r_foc(left, main.premises[1].clone())
                    .expect("cut keeps the left context irreducible")
            } else {
                let right = cut_rec(theta, &main.premises[1], position - split);
                Derivation::star_r_foc(main.premises[0].clone(), right)
                    .expect("left premise untouched")
            }
        }
        Rule::StarL => {
            if position > 0 {
                // The leftmost compound formula is untouched; the cut
                // formula shifts one slot right in the premise.
                let inner = cut_rec(theta, &main.premises[0], position + 1);
                Derivation::star_l(inner).expect("context length preserved")
            } else {
                // The cut formula A1*A2 is the unfolded one; analyze theta.
                let unfolded = &main.premises[0]; // A1, A2, Delta |- B
                match theta.rule {
                    Rule::StarL => {
                        let inner = cut_rec(&theta.premises[0], main, 0);
                        Derivation::star_l(inner).expect("context length >= 2")
                    }
                    Rule::StarR | Rule::StarRFoc => {
                        // Both cuts are at smaller formulas; A1 first.
                        let d1 = &theta.premises[0];
                        let d2 = &theta.premises[1];
                        let step1 = cut_rec(d1, unfolded, 0);
                        cut_rec(d2, &step1, d1.conclusion.context.len())
                    }
                    Rule::IdAtm | Rule::Id | Rule::Cut => {
                        unreachable!("focused derivation of a compound goal")
                    }
                }
            }
        }
        Rule::Cut => unreachable!("focused derivations are cut-free"),
    }
}

/// Admissibility of the unrestricted right rule: from focused derivations of
/// `Gamma |- A` and `Delta |- B`, the focused derivation of
/// `Gamma, Delta |- A*B` (deduction twice to get `A, B |- A*B`, then two
/// cuts).
pub fn admit_star_r(
    left: &Derivation,
    right: &Derivation,
) -> Result<Derivation, CalculusError> {
    if !is_focused(left) || !is_focused(right) {
        return Err(precondition("admit_star_r requires focused inputs"));
    }
    let b = right.conclusion.goal.clone();
    let pair = deduction(&left.conclusion.goal, &|d1: Derivation| {
        Derivation::star_r_foc(d1, admit_id(&b)).expect("deduction feeds irreducible contexts")
    });
    // pair : A, B |- A*B
    let step1 = cut_rec(left, &pair, 0); // Gamma, B |- A*B
    let step2 = cut_rec(right, &step1, left.conclusion.context.len());
    Ok(step2)
}

/// Transform an arbitrary valid derivation into the focused derivation of
/// the same conclusion, replacing cut by cut admissibility, unrestricted
/// identity by the deduction construction, and unrestricted *R by its
/// admissibility. Offending nodes are handled leaves-first.
pub fn focus(d: &Derivation) -> Result<Derivation, CalculusError> {
    validate(d)?;
    Ok(focus_rec(d))
}

fn focus_rec(d: &Derivation) -> Derivation {
    match d.rule {
        Rule::IdAtm => d.clone(),
        Rule::Id => admit_id(&d.conclusion.goal),
        Rule::StarL => {
            let p = focus_rec(&d.premises[0]);
            Derivation::star_l(p).expect("context length preserved by focusing")
        }
        Rule::StarR | Rule::StarRFoc => {
            let l = focus_rec(&d.premises[0]);
            let r = focus_rec(&d.premises[1]);
            if l.conclusion.context.is_irreducible() {
                Derivation::star_r_foc(l, r).expect("checked irreducible")
            } else {
                admit_star_r(&l, &r).expect("focused premises")
            }
        }
        Rule::Cut => {
            let info = d.cut.as_ref().unwrap();
            let theta = focus_rec(&d.premises[0]);
            let main = focus_rec(&d.premises[1]);
            cut_rec(&theta, &main, info.gamma_len)
        }
    }
}

/// The single-step permutation of *L under *R: a right-rule node whose left
/// premise ends in *L is rewritten so the *L moves to the root. The
/// conclusion is unchanged.
pub fn permute_l_under_r(d: &Derivation) -> Result<Derivation, CalculusError> {
    if !matches!(d.rule, Rule::StarR | Rule::StarRFoc) {
        return Err(precondition("root must be a right rule"));
    }
    let left = &d.premises[0];
    if left.rule != Rule::StarL {
        return Err(precondition("left premise root must be *L"));
    }
    let inner = Derivation::star_r(left.premises[0].clone(), d.premises[1].clone());
    Derivation::star_l(inner)
}

/// Indented proof-tree rendering, premises above their rule line.
pub fn pretty(d: &Derivation) -> String {
    let mut out = String::new();
    fn go(d: &Derivation, depth: usize, out: &mut String) {
        let label = match d.rule {
            Rule::StarL => "L",
            Rule::StarR => "R",
            Rule::StarRFoc => "Rfoc",
            Rule::Id => "id",
            Rule::IdAtm => "id_atm",
            Rule::Cut => "cut",
        };
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{label}: {}\n", d.conclusion));
        for p in &d.premises {
            go(p, depth + 1, out);
        }
    }
    go(d, 0, &mut out);
    out
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

// JSON form: {"rule": ..., "sequent": ..., "premises": [...]} with
// "cut_formula" and "splits" only on cut nodes.
#[derive(Serialize, Deserialize)]
struct DerivationJson {
    rule: Rule,
    sequent: Sequent,
    premises: Vec<DerivationJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    cut_formula: Option<Formula>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    splits: Option<[usize; 2]>,
}

impl Serialize for Derivation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Derivation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(from_json(DerivationJson::deserialize(d)?))
    }
}

fn to_json(d: &Derivation) -> DerivationJson {
    DerivationJson {
        rule: d.rule,
        sequent: d.conclusion.clone(),
        premises: d.premises.iter().map(to_json).collect(),
        cut_formula: d.cut.as_ref().map(|c| c.formula.clone()),
        splits: d.cut.as_ref().map(|c| [c.gamma_len, c.theta_len]),
    }
}

fn from_json(j: DerivationJson) -> Derivation {
    let cut = match (j.cut_formula, j.splits) {
        (Some(formula), Some([gamma_len, theta_len])) => {
            Some(CutInfo { formula, gamma_len, theta_len })
        }
        _ => None,
    };
    Derivation {
        rule: j.rule,
        conclusion: j.sequent,
        premises: j.premises.into_iter().map(from_json).collect(),
        cut,
    }
}
