//! Exact enumeration of Tamari intervals: truncated bivariate series for the
//! generating functions of focused derivations, the closed-form count, and
//! the cross-check against Chapoton's functional equation.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::calculus::entails;
use crate::order::enumerate_shapes;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("size {n} exceeds the configured limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
}

/// A polynomial in x with exact nonnegative integer coefficients,
/// `coefficients[k]` being the coefficient of x^k. Trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct XPoly {
    pub coefficients: Vec<BigUint>,
}

impl XPoly {
    pub fn zero() -> XPoly {
        XPoly { coefficients: vec![] }
    }

    /// The monomial x^k.
    pub fn x_power(k: usize) -> XPoly {
        let mut coefficients = vec![BigUint::zero(); k + 1];
        coefficients[k] = BigUint::one();
        XPoly { coefficients }
    }

    fn trim(mut self) -> XPoly {
        while self.coefficients.last().is_some_and(Zero::is_zero) {
            self.coefficients.pop();
        }
        self
    }

    pub fn coeff(&self, k: usize) -> BigUint {
        self.coefficients.get(k).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn add(&self, other: &XPoly) -> XPoly {
        let n = self.coefficients.len().max(other.coefficients.len());
        let coefficients = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        XPoly { coefficients }.trim()
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        if self.is_zero() || other.is_zero() {
            return XPoly::zero();
        }
        let mut coefficients =
            vec![BigUint::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                coefficients[i + j] += a * b;
            }
        }
        XPoly { coefficients }.trim()
    }

    /// Checked subtraction; None if any coefficient would go negative.
    pub fn checked_sub(&self, other: &XPoly) -> Option<XPoly> {
        let n = self.coefficients.len().max(other.coefficients.len());
        let mut coefficients = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeff(k);
            let b = other.coeff(k);
            if b > a {
                return None;
            }
            coefficients.push(a - b);
        }
        Some(XPoly { coefficients }.trim())
    }

    /// Evaluation at x = 1: the sum of coefficients.
    pub fn eval_at_one(&self) -> BigUint {
        self.coefficients.iter().sum()
    }

    /// The exact quotient `(p(x) - p(1)) / (x - 1)`; x = 1 is always a root
    /// of the numerator, so the division has zero remainder and the
    /// quotient's coefficients are the nonnegative partial sums
    /// `q_k = sum_{j > k} p_j` (synthetic division).
    pub fn difference_quotient(&self) -> XPoly {
        let d = self.coefficients.len();
        if d <= 1 {
            return XPoly::zero();
        }
        let mut coefficients = vec![BigUint::zero(); d - 1];
        let mut acc = BigUint::zero();
        for k in (1..d).rev() {
            acc += &self.coefficients[k];
            coefficients[k - 1] = acc.clone();
        }
        let q = XPoly { coefficients }.trim();
        // Hard check of exactness: (x-1)*q + p(1) must reproduce p.
        let restored = q.mul(&XPoly::x_power(1)).add(&XPoly {
            coefficients: vec![self.eval_at_one()],
        });
        let back = restored
            .checked_sub(&q)
            .expect("difference quotient leaves zero remainder");
        assert_eq!(&back, self, "difference quotient leaves zero remainder");
        q
    }

    /// Exact division by x; panics if the constant term is nonzero.
    pub fn div_x(&self) -> XPoly {
        if self.is_zero() {
            return XPoly::zero();
        }
        assert!(self.coefficients[0].is_zero(), "division by x must be exact");
        XPoly { coefficients: self.coefficients[1..].to_vec() }.trim()
    }

    /// Multiplication by x.
    pub fn mul_x(&self) -> XPoly {
        if self.is_zero() {
            return XPoly::zero();
        }
        let mut coefficients = vec![BigUint::zero()];
        coefficients.extend_from_slice(&self.coefficients);
        XPoly { coefficients }
    }
}

/// A truncated bivariate power series: `by_z_degree[n]` is the coefficient
/// of z^n, a polynomial in x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesLX {
    pub by_z_degree: Vec<XPoly>,
}

impl SeriesLX {
    pub fn truncation_order(&self) -> usize {
        self.by_z_degree.len() - 1
    }

    pub fn slice(&self, n: usize) -> XPoly {
        self.by_z_degree.get(n).cloned().unwrap_or_else(XPoly::zero)
    }

    /// Coefficient of x^k z^n.
    pub fn coeff(&self, k: usize, n: usize) -> BigUint {
        self.slice(n).coeff(k)
    }

    /// The univariate series obtained by setting x = 1.
    pub fn at_x_one(&self) -> Vec<BigUint> {
        self.by_z_degree.iter().map(XPoly::eval_at_one).collect()
    }

    fn mul_truncated(&self, other: &SeriesLX, order: usize) -> SeriesLX {
        let mut by_z_degree = vec![XPoly::zero(); order + 1];
        for (n, slot) in by_z_degree.iter_mut().enumerate() {
            for i in 0..=n {
                let prod = self.slice(i).mul(&other.slice(n - i));
                *slot = slot.add(&prod);
            }
        }
        SeriesLX { by_z_degree }
    }
}

/// Solve the functional equations of the focused-derivation generating
/// functions degree by degree in z:
///
/// the z^0 slice of R is forced to be x; each higher slice of R comes from
/// `R = z*R*L + x`, which only consults strictly lower slices, and the
/// same-degree slice of L comes from the discrete difference operator
/// `L = x * (R(z,x) - R(z,1)) / (x - 1)`. A single forward pass suffices.
pub fn solve_series(order: usize) -> (SeriesLX, SeriesLX) {
    let mut r: Vec<XPoly> = Vec::with_capacity(order + 1);
    let mut l: Vec<XPoly> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let r_n = if n == 0 {
            XPoly::x_power(1)
        } else {
            // Coefficient of z^n in z*R*L.
            let mut acc = XPoly::zero();
            for i in 0..n {
                acc = acc.add(&r[i].mul(&l[n - 1 - i]));
            }
            acc
        };
        let l_n = r_n.difference_quotient().mul_x();
        r.push(r_n);
        l.push(l_n);
    }
    let r = SeriesLX { by_z_degree: r };
    let l = SeriesLX { by_z_degree: l };
    check_l_equation(&l, &r);
    (l, r)
}

/// The defining equation `L = (L - x*L1) / x + R`, checked coefficient-wise.
/// It is not used in construction, so it serves as an independent
/// cross-check on the solved series.
pub fn l_equation_holds(l: &SeriesLX, r: &SeriesLX) -> bool {
    for n in 0..=r.truncation_order() {
        let l_n = l.slice(n);
        let l1 = l_n.coeff(1);
        let Some(minus) =
            l_n.checked_sub(&XPoly { coefficients: vec![BigUint::zero(), l1] }.trim())
        else {
            return false;
        };
        if minus.div_x().add(&r.slice(n)) != l_n {
            return false;
        }
    }
    true
}

fn check_l_equation(l: &SeriesLX, r: &SeriesLX) {
    assert!(l_equation_holds(l, r), "L equation fails");
}

/// Number of Tamari intervals at size n, from the series engine.
pub fn intervals_count(n: usize) -> BigUint {
    let (_, r) = solve_series(n);
    r.slice(n).eval_at_one()
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

/// The closed formula `2*(4n+1)! / ((n+1)! * (3n+2)!)`, evaluated exactly.
pub fn closed_formula(n: usize) -> BigUint {
    let num = BigUint::from(2u32) * factorial(4 * n + 1);
    let den = factorial(n + 1) * factorial(3 * n + 2);
    let rem = &num % &den;
    assert!(rem.is_zero(), "closed formula division is exact");
    num / den
}

/// Chapoton's series `Phi = R - x`, truncated at z^order.
pub fn chapoton_phi(order: usize) -> SeriesLX {
    let (_, r) = solve_series(order);
    let by_z_degree = r
        .by_z_degree
        .iter()
        .enumerate()
        .map(|(n, slice)| {
            if n == 0 {
                slice
                    .checked_sub(&XPoly::x_power(1))
                    .expect("z^0 slice of R is x")
            } else {
                slice.clone()
            }
        })
        .collect();
    SeriesLX { by_z_degree }
}

/// Residual check of Chapoton's functional equation
/// `Phi = x^2 z (1 + Phi/x)(1 + (Phi(z,x) - Phi(z,1))/(x-1))` through the
/// series truncation order. Returns true when both sides agree exactly.
pub fn chapoton_equation_holds(phi: &SeriesLX) -> bool {
    let order = phi.truncation_order();
    // 1 + Phi/x
    let first = SeriesLX {
        by_z_degree: (0..=order)
            .map(|n| {
                let t = phi.slice(n).div_x();
                if n == 0 {
                    t.add(&XPoly { coefficients: vec![num_bigint::BigUint::from(1u32)] })
                } else {
                    t
                }
            })
            .collect(),
    };
    // 1 + (Phi(z,x) - Phi(z,1))/(x-1)
    let second = SeriesLX {
        by_z_degree: (0..=order)
            .map(|n| {
                let t = phi.slice(n).difference_quotient();
                if n == 0 {
                    t.add(&XPoly { coefficients: vec![num_bigint::BigUint::from(1u32)] })
                } else {
                    t
                }
            })
            .collect(),
    };
    let prod = first.mul_truncated(&second, order);
    // x^2 z * prod
    let x2 = XPoly::x_power(2);
    let mut rhs = vec![XPoly::zero()];
    for n in 0..order {
        rhs.push(prod.slice(n).mul(&x2));
    }
    let rhs = SeriesLX { by_z_degree: rhs };
    *phi == rhs
}

pub const FOCUSED_ORACLE_LIMIT: usize = 6;

/// Count Tamari intervals by running the focused decision procedure over
/// all ordered pairs of constant-frontier shapes of size n. Independent of
/// the series engine.
pub fn focused_count_oracle(n: usize) -> Result<BigUint, CountingError> {
    focused_count_oracle_with_limit(n, FOCUSED_ORACLE_LIMIT)
}

pub fn focused_count_oracle_with_limit(
    n: usize,
    limit: usize,
) -> Result<BigUint, CountingError> {
    if n > limit {
        return Err(CountingError::LimitExceeded { n, limit });
    }
    let shapes = enumerate_shapes(n);
    let mut count = BigUint::zero();
    for a in &shapes {
        for b in &shapes {
            if entails(a, b) {
                count += BigUint::one();
            }
        }
    }
    Ok(count)
}

/// JSON dump of R's coefficient triangle r_{k,n}.
pub fn r_triangle_json(r: &SeriesLX) -> serde_json::Value {
    serde_json::Value::Array(
        r.by_z_degree
            .iter()
            .map(|slice| {
                serde_json::Value::Array(
                    slice
                        .coefficients
                        .iter()
                        .map(|c| serde_json::Value::String(c.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}
