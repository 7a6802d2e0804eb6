//! End-to-end acceptance checks. Each test exercises one acceptance
//! criterion and prints a single PASS line on success (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tamari_core::calculus::{
    check_derivation, decide_focused, derive_semiassoc, enumerate_focused, focus, is_focused,
    Derivation,
};
use tamari_core::counting::{
    chapoton_equation_holds, chapoton_phi, closed_formula, focused_count_oracle, intervals_count,
    solve_series,
};
use tamari_core::lambda::{
    self, apptree, beta_step, binddiag, binding_tree, canonicalize, diagram_checks,
    interval_to_term, parse_term, rho_step, term_to_interval, Filters, Term,
};
use tamari_core::order::{count_intervals_bruteforce, enumerate_shapes, leq_bruteforce};
use tamari_core::syntax::{parse_formula, Context, Formula, Sequent};

const INTERVAL_COUNTS: [u64; 8] = [1, 1, 3, 13, 68, 399, 2530, 16965];

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

// Criterion 1: four independent ways of counting Tamari intervals agree
// for n = 0..=6.
#[test]
fn acceptance_1_interval_counts_agree() {
    for (n, &count) in INTERVAL_COUNTS.iter().take(7).enumerate() {
        let expected = big(count);
        assert_eq!(intervals_count(n), expected, "series, n={n}");
        assert_eq!(closed_formula(n), expected, "closed formula, n={n}");
        assert_eq!(focused_count_oracle(n).unwrap(), expected, "focused oracle, n={n}");
        assert_eq!(count_intervals_bruteforce(n).unwrap(), expected, "brute force, n={n}");
    }
    println!("acceptance 1 (interval counts agree four ways, n<=6): PASS");
}

// Criterion 2: golden values for the bivariate series and its x=1
// specialization.
#[test]
fn acceptance_2_series_golden_values() {
    let (_, r) = solve_series(7);
    let golden_z5: [(usize, u64); 5] = [(2, 68), (3, 100), (4, 105), (5, 84), (6, 42)];
    let slice = r.slice(5);
    for (k, c) in golden_z5 {
        assert_eq!(slice.coeff(k), big(c), "z^5 x^{k}");
    }
    assert_eq!(slice.degree(), Some(6));
    assert_eq!(slice.coeff(0), big(0));
    assert_eq!(slice.coeff(1), big(0));

    let at_one = r.at_x_one();
    let expected: Vec<BigUint> = INTERVAL_COUNTS.iter().map(|&c| big(c)).collect();
    assert_eq!(at_one, expected);
    println!("acceptance 2 (series golden values through z^7): PASS");
}

// Criterion 3: the series solution matches the closed formula far past the
// range where lattices can be enumerated.
#[test]
fn acceptance_3_series_matches_closed_formula() {
    for n in 0..=30usize {
        assert_eq!(intervals_count(n), closed_formula(n), "n={n}");
    }
    println!("acceptance 3 (series equals closed formula, n<=30): PASS");
}

// Criterion 4: the focused decision procedure decides exactly the Tamari
// order, on every pair of trees up to size 6.
#[test]
fn acceptance_4_decision_procedure_is_the_order() {
    for n in 0..=6usize {
        let shapes = enumerate_shapes(n);
        for a in &shapes {
            for b in &shapes {
                let s = Sequent::new(Context::singleton(a.clone()), b.clone());
                assert_eq!(
                    decide_focused(&s).is_some(),
                    leq_bruteforce(a, b),
                    "n={n}, {a} vs {b}"
                );
            }
        }
    }
    println!("acceptance 4 (decision procedure matches rotation closure, n<=6): PASS");
}

// Criterion 5: coherence. Exhaustive search finds at most one focused
// derivation, and exactly the one the decision procedure returns.
#[test]
fn acceptance_5_unique_focused_derivations() {
    let check = |s: &Sequent| {
        let all = enumerate_focused(s, 32).unwrap();
        assert!(all.len() <= 1, "{s}");
        match decide_focused(s) {
            Some(d) => assert_eq!(all, vec![d], "{s}"),
            None => assert!(all.is_empty(), "{s}"),
        }
    };
    for n in 0..=5usize {
        let shapes = enumerate_shapes(n);
        for a in &shapes {
            for b in &shapes {
                check(&Sequent::new(Context::singleton(a.clone()), b.clone()));
                check(&Sequent::new(a.max_decomposition(), b.clone()));
            }
        }
    }
    println!("acceptance 5 (focused derivations are unique, n<=5): PASS");
}

fn cut_built_example() -> Derivation {
    let p = parse_formula("p").unwrap();
    let q = parse_formula("q").unwrap();
    let r = parse_formula("r").unwrap();
    let s = parse_formula("s").unwrap();
    let qr = parse_formula("q*r").unwrap();
    let sa1 = derive_semiassoc(&p, &q, &r);
    let lift = Derivation::star_l(Derivation::star_r(sa1, Derivation::id(s.clone()))).unwrap();
    let sa2 = derive_semiassoc(&p, &qr, &s);
    Derivation::cut(lift, sa2, 0).unwrap()
}

fn random_formula(rng: &mut ChaCha8Rng, size: usize) -> Formula {
    let atoms = ["p", "q", "r", "s"];
    if size == 0 || rng.gen_bool(0.4) {
        Formula::atom(atoms[rng.gen_range(0..atoms.len())])
    } else {
        let left = rng.gen_range(0..size);
        Formula::prod(
            random_formula(rng, left),
            random_formula(rng, size - 1 - left),
        )
    }
}

// Random well-formed derivations mixing identity, both product rules, and
// cuts.
fn random_derivation(rng: &mut ChaCha8Rng, budget: usize) -> Derivation {
    if budget == 0 {
        return Derivation::id(random_formula(rng, 2));
    }
    match rng.gen_range(0..5) {
        0 => Derivation::id(random_formula(rng, 2)),
        1 => Derivation::star_r(
            random_derivation(rng, budget - 1),
            random_derivation(rng, budget - 1),
        ),
        2 => {
            let p = random_derivation(rng, budget - 1);
            if p.conclusion.context.len() >= 2 {
                Derivation::star_l(p).unwrap()
            } else {
                p
            }
        }
        _ => {
            let theta = random_derivation(rng, budget - 1);
            let other = random_derivation(rng, budget - 1);
            let goal = theta.conclusion.goal.clone();
            if rng.gen_bool(0.5) {
                let main = Derivation::star_r(Derivation::id(goal), other);
                Derivation::cut(theta, main, 0).unwrap()
            } else {
                let pos = other.conclusion.context.len();
                let main = Derivation::star_r(other, Derivation::id(goal));
                Derivation::cut(theta, main, pos).unwrap()
            }
        }
    }
}

// Criterion 6: the focusing transformation reproduces the canonical
// focused derivation on the worked cut example and preserves conclusions
// on random derivations.
#[test]
fn acceptance_6_focusing_transformation() {
    let cut = cut_built_example();
    assert!(check_derivation(&cut));
    let focused = focus(&cut).unwrap();
    let canonical = decide_focused(&cut.conclusion).unwrap();
    assert_eq!(focused, canonical);

    let mut rng = ChaCha8Rng::seed_from_u64(0x7a3a11);
    for _ in 0..1000 {
        let d = random_derivation(&mut rng, 3);
        assert!(check_derivation(&d));
        let f = focus(&d).unwrap();
        assert_eq!(f.conclusion, d.conclusion);
        assert!(check_derivation(&f));
        assert!(is_focused(&f));
    }
    println!("acceptance 6 (focusing: canonical result and conclusion preservation): PASS");
}

// Criterion 7: the bijection between intervals and closed indecomposable
// beta-normal planar terms, checked by counting and by inverting.
#[test]
fn acceptance_7_interval_term_bijection() {
    let expected = [1usize, 3, 13, 68, 399];
    for n in 1..=5usize {
        let terms = lambda::enumerate_terms(n, Filters::all()).unwrap();
        assert_eq!(terms.len(), expected[n - 1], "n={n}");

        let mut intervals = HashSet::new();
        for m in &terms {
            let (bind, app) = term_to_interval(m).unwrap();
            assert!(intervals.insert((bind.clone(), app.clone())), "duplicate for {m}");
            let back = interval_to_term(&bind, &app).unwrap();
            assert_eq!(canonicalize(&back), canonicalize(m), "{m}");
        }
    }
    println!("acceptance 7 (terms biject with intervals, n<=5): PASS");
}

// Criterion 8: structural properties of binding diagrams and the two
// reductions.
#[test]
fn acceptance_8_term_properties() {
    // Chord counts: a linear term with n applications and k free variables
    // has n+1-k bound chords; closed terms have 2n+2 letters.
    for n in 0..=4usize {
        for m in lambda::enumerate_terms(n, Filters::default()).unwrap() {
            let w = binddiag(&m).unwrap().word;
            let k = m.free_vars().len();
            let letters: HashSet<&String> = w.iter().collect();
            let full_chords = letters
                .iter()
                .filter(|l| w.iter().filter(|x| x == *l).count() == 2)
                .count();
            assert_eq!(full_chords, n + 1 - k, "{m}");
            if k == 0 {
                assert_eq!(w.len(), 2 * n + 2, "{m}");
            }
        }
    }

    for n in 0..=3usize {
        let all = lambda::enumerate_terms(n, Filters::default()).unwrap();
        for m in &all {
            // The rho-rule preserves the invariant pair.
            let cm = canonicalize(m);
            for r in rho_step(m) {
                let cr = canonicalize(&r);
                assert_eq!(apptree(&cm), apptree(&cr), "{m}");
                assert_eq!(binddiag(&cm).unwrap(), binddiag(&cr).unwrap(), "{m}");
                assert!(lambda::rho_equiv(m, &r).unwrap());
            }
            // Beta- and rho-redexes occupy the same positions.
            assert_eq!(beta_step(m).is_empty(), rho_step(m).is_empty(), "{m}");
        }
        // The invariant pair is complete: it separates terms exactly up to
        // rho-equivalence.
        for m1 in &all {
            for m2 in &all {
                let by_invariant = lambda::rho_equiv(m1, m2).unwrap();
                let by_normalization = canonicalize(&lambda::rho_normalize(m1))
                    == canonicalize(&lambda::rho_normalize(m2));
                assert_eq!(by_invariant, by_normalization, "{m1} vs {m2}");
            }
        }
    }

    // Indecomposable closed terms have indecomposable diagrams; the
    // converse fails.
    let closed = Filters { closed: true, ..Filters::default() };
    for n in 0..=4usize {
        for m in lambda::enumerate_terms(n, closed).unwrap() {
            if m.is_indecomposable() {
                assert!(diagram_checks(&binddiag(&m).unwrap()).indecomposable, "{m}");
            }
        }
    }
    let counterexample = parse_term("\\x.(\\y.y)(x)").unwrap();
    assert!(!counterexample.is_beta_normal());
    assert!(!counterexample.is_indecomposable());
    assert!(diagram_checks(&binddiag(&counterexample).unwrap()).indecomposable);

    // The binding tree sits below the application tree in the Tamari
    // order, including for non-normal terms.
    let cip = Filters { closed: true, indecomposable: true, planar: true, normal: false };
    for n in 1..=4usize {
        for m in lambda::enumerate_terms(n, cip).unwrap() {
            let bind = binding_tree(&m).unwrap();
            let app = apptree(&m);
            assert!(leq_bruteforce(&bind, &app), "{m}");
        }
    }
    println!("acceptance 8 (diagram and reduction properties): PASS");
}

// Criterion 9: the shifted series satisfies the functional equation with
// zero residual through z^10.
#[test]
fn acceptance_9_functional_equation() {
    let phi = chapoton_phi(10);
    assert!(chapoton_equation_holds(&phi));
    println!("acceptance 9 (functional equation residual is zero through z^10): PASS");
}

// Smoke check kept alongside the numbered criteria: enumerating all
// filters off stays consistent with the closed filter.
#[test]
fn enumeration_filters_are_consistent() {
    for n in 0..=3usize {
        let all = lambda::enumerate_terms(n, Filters::default()).unwrap();
        let closed: Vec<&Term> = all.iter().filter(|m| m.is_closed()).collect();
        let direct = lambda::enumerate_terms(n, Filters { closed: true, ..Filters::default() })
            .unwrap();
        assert_eq!(closed.len(), direct.len());
    }
}
