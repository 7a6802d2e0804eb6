//! Property tests for the structural laws connecting formulas, contexts,
//! the Tamari order, and the focused calculus.

use proptest::prelude::*;

use tamari_core::calculus::{self, decide_focused, enumerate_focused};
use tamari_core::lambda::{self, Filters};
use tamari_core::order::{enumerate_shapes, leq_bruteforce, rotation_successors};
use tamari_core::syntax::{
    parse_context, parse_formula, parse_sequent, right_action, Atom, Context, Formula, Sequent,
};

fn atom_name() -> impl Strategy<Value = String> {
    prop_oneof![Just("a"), Just("b"), Just("c"), Just("x1")].prop_map(str::to_string)
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    atom_name()
        .prop_map(|n| Formula::atom(&n))
        .prop_recursive(4, 24, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| Formula::prod(l, r))
        })
}

fn context_strategy() -> impl Strategy<Value = Context> {
    prop::collection::vec(formula_strategy(), 1..4).prop_map(Context::new)
}

proptest! {
    #[test]
    fn formula_print_parse_round_trip(f in formula_strategy()) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn context_print_parse_round_trip(ctx in context_strategy()) {
        prop_assert_eq!(parse_context(&ctx.to_string()).unwrap(), ctx);
    }

    #[test]
    fn sequent_print_parse_round_trip(ctx in context_strategy(), goal in formula_strategy()) {
        let s = Sequent::new(ctx, goal);
        prop_assert_eq!(parse_sequent(&s.to_string()).unwrap(), s);
    }

    // Maximal decomposition is inverse to context flattening.
    #[test]
    fn max_decomposition_section(f in formula_strategy()) {
        let ctx = f.max_decomposition();
        prop_assert!(ctx.is_irreducible());
        prop_assert_eq!(ctx.to_formula().unwrap(), f);
    }

    #[test]
    fn max_decomposition_retraction(
        head in atom_name(),
        rest in prop::collection::vec(formula_strategy(), 0..3),
    ) {
        let mut formulas = vec![Formula::atom(&head)];
        formulas.extend(rest);
        let ctx = Context::new(formulas);
        assert!(ctx.is_irreducible());
        let f = ctx.to_formula().unwrap();
        prop_assert_eq!(f.max_decomposition(), ctx);
    }

    #[test]
    fn right_action_matches_flattening(f in formula_strategy(), ctx in context_strategy()) {
        let acted = right_action(&f, ctx.formulas());
        let flattened = Context::singleton(f).concat(&ctx).to_formula().unwrap();
        prop_assert_eq!(acted, flattened);
    }

    // Rotation successors are strictly above and share the frontier.
    #[test]
    fn rotations_preserve_frontier(f in formula_strategy()) {
        for succ in rotation_successors(&f) {
            prop_assert_eq!(succ.frontier(), f.frontier());
            prop_assert_ne!(&succ, &f);
            prop_assert!(leq_bruteforce(&f, &succ));
        }
    }

    // The product is monotone in each argument.
    #[test]
    fn product_monotone(a in formula_strategy(), c in formula_strategy()) {
        for b in rotation_successors(&a) {
            prop_assert!(leq_bruteforce(
                &Formula::prod(a.clone(), c.clone()),
                &Formula::prod(b.clone(), c.clone()),
            ));
            prop_assert!(leq_bruteforce(
                &Formula::prod(c.clone(), a.clone()),
                &Formula::prod(c.clone(), b),
            ));
        }
    }
}

// Every sequent appearing in a focused derivation relates the context
// frontier to the goal frontier.
#[test]
fn frontier_refinement_throughout_derivations() {
    fn walk(d: &calculus::Derivation) {
        assert_eq!(d.conclusion.context.frontier(), d.conclusion.goal.frontier());
        for p in &d.premises {
            walk(p);
        }
    }
    for n in 0..=5 {
        let shapes = enumerate_shapes(n);
        for a in &shapes {
            for b in &shapes {
                if let Some(d) = decide_focused(&Sequent::new(
                    Context::singleton(a.clone()),
                    b.clone(),
                )) {
                    walk(&d);
                }
            }
        }
    }
}

// Replacing the head formula by its maximal decomposition does not change
// derivability.
#[test]
fn max_decomposition_preserves_derivability() {
    for n in 0..=4 {
        let shapes = enumerate_shapes(n);
        for a in &shapes {
            for b in &shapes {
                let whole = decide_focused(&Sequent::new(
                    Context::singleton(a.clone()),
                    b.clone(),
                ));
                let split = decide_focused(&Sequent::new(a.max_decomposition(), b.clone()));
                assert_eq!(whole.is_some(), split.is_some(), "{a} vs {b}");
            }
        }
    }
}

// The deterministic decision procedure agrees with exhaustive search over
// all context splits.
#[test]
fn decide_agrees_with_enumeration() {
    for n in 0..=4 {
        let shapes = enumerate_shapes(n);
        for a in &shapes {
            for b in &shapes {
                let s = Sequent::new(Context::singleton(a.clone()), b.clone());
                let all = enumerate_focused(&s, 32).unwrap();
                match decide_focused(&s) {
                    Some(d) => assert_eq!(all, vec![d]),
                    None => assert!(all.is_empty()),
                }
            }
        }
    }
}

// Parsing inverts printing for enumerated lambda terms, and enumeration
// produces well-formed linear terms.
#[test]
fn term_print_parse_round_trip() {
    for n in 0..=3 {
        for m in lambda::enumerate_terms(n, Filters::default()).unwrap() {
            assert_eq!(lambda::parse_term(&m.to_string()).unwrap(), m);
            assert!(m.is_linear());
            assert!(m.check_barendregt().is_ok());
        }
    }
}

// The order only depends on tree shapes, not on atom names, as long as
// both sides carry the same frontier.
#[test]
fn order_ignores_atom_names() {
    fn positional(f: &Formula) -> Formula {
        let i = std::cell::Cell::new(0usize);
        f.relabel(&|_| {
            let k = i.get();
            i.set(k + 1);
            Atom::new(format!("v{}", k + 1)).unwrap()
        })
    }
    for n in 0..=4 {
        let shapes = enumerate_shapes(n);
        for a in &shapes {
            for b in &shapes {
                assert_eq!(
                    leq_bruteforce(a, b),
                    leq_bruteforce(&positional(a), &positional(b))
                );
            }
        }
    }
}
