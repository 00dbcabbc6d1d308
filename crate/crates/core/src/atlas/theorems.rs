use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::scalar::Scalar;
use crate::registry::{Named, Registry};

/// One piece `s(γ) = a + b/γ` valid for `γ ≥ start` up to the next piece.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Piece<S> {
    pub start: S,
    pub a: S,
    pub b: S,
    pub regime: &'static str,
}

impl<S: Scalar> Piece<S> {
    pub fn value(&self, gamma: &S) -> S {
        self.a.clone() + self.b.clone() / gamma.clone()
    }
}

fn piece<S: Scalar>(start: S, a: S, b: S, regime: &'static str) -> Piece<S> {
    Piece { start, a, b, regime }
}

fn zero_piece<S: Scalar>(regime: &'static str) -> Piece<S> {
    piece(S::zero(), S::zero(), S::zero(), regime)
}

/// A sharp-exponent theorem: its `(α, m)` hypothesis and the piecewise form
/// of `s(γ)`, in floating point and in exact rationals.
pub trait Theorem: Named + Send + Sync {
    /// The `(α, m)` hypothesis, for display.
    fn hypothesis(&self) -> &'static str;
    fn covers(&self, alpha: f64, m: f64) -> bool;
    fn covers_exact(&self, alpha: &BigRational, m: &BigRational) -> bool;
    fn pieces(&self, alpha: f64, m: f64) -> Vec<Piece<f64>>;
    fn pieces_exact(&self, alpha: &BigRational, m: &BigRational) -> Vec<Piece<BigRational>>;
}

trait Rule: Send + Sync {
    const LABEL: &'static str;
    const HYPOTHESIS: &'static str;
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool;
    fn pieces_g<S: Scalar>(a: &S, m: &S) -> Vec<Piece<S>>;
}

struct Entry<R>(std::marker::PhantomData<R>);

impl<R: Rule> Named for Entry<R> {
    fn name(&self) -> &str {
        R::LABEL
    }
}

impl<R: Rule> Theorem for Entry<R> {
    fn hypothesis(&self) -> &'static str {
        R::HYPOTHESIS
    }

    fn covers(&self, alpha: f64, m: f64) -> bool {
        R::covers_g(&alpha, &m)
    }

    fn covers_exact(&self, alpha: &BigRational, m: &BigRational) -> bool {
        R::covers_g(alpha, m)
    }

    fn pieces(&self, alpha: f64, m: f64) -> Vec<Piece<f64>> {
        R::pieces_g(&alpha, &m)
    }

    fn pieces_exact(&self, alpha: &BigRational, m: &BigRational) -> Vec<Piece<BigRational>> {
        R::pieces_g(alpha, m)
    }
}

fn two<S: Scalar>() -> S {
    S::ratio(2, 1)
}

fn is_two<S: Scalar>(m: &S) -> bool {
    *m == two()
}

/// `0` below `mα`, `1/2 − mα/(2γ)` on `[mα, 1)`.
fn rising<S: Scalar>(a: &S, m: &S) -> [Piece<S>; 2] {
    let ma = m.clone() * a.clone();
    [
        zero_piece("(0, mα)"),
        piece(ma.clone(), S::half(), -(ma / two()), "[mα, 1)"),
    ]
}

/// `(m/4)(1 − 1/γ)` from `start`, then `1/4` from `m/(m−1)`.
fn saturating<S: Scalar>(start: S, m: &S, regime: &'static str) -> [Piece<S>; 2] {
    let q = m.clone() / S::ratio(4, 1);
    [
        piece(start, q.clone(), -q, regime),
        piece(m.clone() / (m.clone() - S::one()), S::quarter(), S::zero(), "[m/(m−1), ∞)"),
    ]
}

struct T1;
impl Rule for T1 {
    const LABEL: &'static str = "T1";
    const HYPOTHESIS: &'static str = "m = 2, α ∈ [1/2, 1]";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        is_two(m) && *a >= S::half() && *a <= S::one()
    }
    fn pieces_g<S: Scalar>(_a: &S, _m: &S) -> Vec<Piece<S>> {
        vec![
            zero_piece("(0, 1)"),
            piece(S::one(), S::half(), -S::half(), "[1, 2)"),
            piece(two(), S::quarter(), S::zero(), "[2, ∞)"),
        ]
    }
}

struct T2;
impl Rule for T2 {
    const LABEL: &'static str = "T2";
    const HYPOTHESIS: &'static str = "m = 2, α ∈ (0, 1/4]";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        is_two(m) && *a > S::zero() && *a <= S::quarter()
    }
    fn pieces_g<S: Scalar>(a: &S, _m: &S) -> Vec<Piece<S>> {
        vec![
            zero_piece("(0, 2α)"),
            piece(two::<S>() * a.clone(), S::half(), -a.clone(), "[2α, 1)"),
            piece(S::one(), S::half() - a.clone(), S::zero(), "[1, ∞)"),
        ]
    }
}

struct T3;
impl Rule for T3 {
    const LABEL: &'static str = "T3";
    const HYPOTHESIS: &'static str = "m = 2, α ∈ (1/4, 1/2)";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        is_two(m) && *a > S::quarter() && *a < S::half()
    }
    fn pieces_g<S: Scalar>(a: &S, _m: &S) -> Vec<Piece<S>> {
        vec![
            zero_piece("(0, 2α)"),
            piece(two::<S>() * a.clone(), S::half(), -a.clone(), "[2α, 1)"),
            piece(S::one(), S::half() - a.clone(), S::zero(), "[1, 1/(2α))"),
            piece(S::one() / (two::<S>() * a.clone()), S::half(), -S::half(), "[1/(2α), 2)"),
            piece(two(), S::quarter(), S::zero(), "[2, ∞)"),
        ]
    }
}

/// `min{(1/2)(1 − mα), (1/2)(1 − mα/γ)^+}`.
fn capped_pieces<S: Scalar>(a: &S, m: &S) -> Vec<Piece<S>> {
    let ma = m.clone() * a.clone();
    let [p0, p1] = rising(a, m);
    vec![p0, p1, piece(S::one(), (S::one() - ma) / two(), S::zero(), "[1, ∞)")]
}

struct T41;
impl Rule for T41 {
    const LABEL: &'static str = "T4.1";
    const HYPOTHESIS: &'static str = "m ∈ (0, 1), α ∈ (0, 1/2]";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        *m > S::zero() && *m < S::one() && *a > S::zero() && *a <= S::half()
    }
    fn pieces_g<S: Scalar>(a: &S, m: &S) -> Vec<Piece<S>> {
        capped_pieces(a, m)
    }
}

struct T42;
impl Rule for T42 {
    const LABEL: &'static str = "T4.2";
    const HYPOTHESIS: &'static str = "m ∈ (0, 1), α ∈ (1/2, 1]";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        *m > S::zero() && *m < S::one() && *a > S::half() && *a <= S::one()
    }
    fn pieces_g<S: Scalar>(a: &S, m: &S) -> Vec<Piece<S>> {
        let [p0, p1] = rising(a, m);
        let four = S::ratio(4, 1);
        vec![
            p0,
            p1,
            piece(
                S::one(),
                (two::<S>() - m.clone()) / four.clone(),
                m.clone() * (S::one() - two::<S>() * a.clone()) / four,
                "[1, ∞)",
            ),
        ]
    }
}

struct T43;
impl Rule for T43 {
    const LABEL: &'static str = "T4.3";
    const HYPOTHESIS: &'static str = "m = 1, α ∈ (0, 1]";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        *m == S::one() && *a > S::zero() && *a <= S::one()
    }
    fn pieces_g<S: Scalar>(a: &S, _m: &S) -> Vec<Piece<S>> {
        vec![
            zero_piece("(0, α)"),
            piece(a.clone(), S::half(), -(a.clone() / two()), "[α, ∞)"),
        ]
    }
}

struct T44;
impl Rule for T44 {
    const LABEL: &'static str = "T4.4";
    const HYPOTHESIS: &'static str = "m ∈ (1, ∞) \\ {2}, α ∈ (0, 1/(2m)]";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        *m > S::one() && !is_two(m) && *a > S::zero() && *a <= S::one() / (two::<S>() * m.clone())
    }
    fn pieces_g<S: Scalar>(a: &S, m: &S) -> Vec<Piece<S>> {
        capped_pieces(a, m)
    }
}

struct T45;
impl Rule for T45 {
    const LABEL: &'static str = "T4.5";
    const HYPOTHESIS: &'static str = "m ∈ (1, ∞) \\ {2}, α ∈ (1/(2m), min{1/2, 1/m})";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        let upper = S::min_of(S::half(), S::one() / m.clone());
        *m > S::one() && !is_two(m) && *a > S::one() / (two::<S>() * m.clone()) && *a < upper
    }
    fn pieces_g<S: Scalar>(a: &S, m: &S) -> Vec<Piece<S>> {
        let ma = m.clone() * a.clone();
        let knee = m.clone() / (m.clone() - two::<S>() + two::<S>() * ma.clone());
        let [p0, p1] = rising(a, m);
        let [p3, p4] = saturating(knee, m, "[m/(m−2+2mα), m/(m−1))");
        vec![
            p0,
            p1,
            piece(S::one(), (S::one() - ma) / two(), S::zero(), "[1, m/(m−2+2mα))"),
            p3,
            p4,
        ]
    }
}

struct T47;
impl Rule for T47 {
    const LABEL: &'static str = "T4.7";
    const HYPOTHESIS: &'static str = "m ∈ (1, ∞) \\ {2}, α ∈ [1/m, 1]";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        *m > S::one() && !is_two(m) && *a >= S::one() / m.clone() && *a <= S::one()
    }
    fn pieces_g<S: Scalar>(_a: &S, m: &S) -> Vec<Piece<S>> {
        let [p1, p2] = saturating(S::one(), m, "[1, m/(m−1))");
        vec![zero_piece("(0, 1)"), p1, p2]
    }
}

struct T46;
impl Rule for T46 {
    const LABEL: &'static str = "T4.6";
    const HYPOTHESIS: &'static str = "m ∈ (1, 2), α ∈ [1/2, 1/m)";
    fn covers_g<S: Scalar>(a: &S, m: &S) -> bool {
        *m > S::one() && *m < two() && *a >= S::half() && *a < S::one() / m.clone()
    }
    fn pieces_g<S: Scalar>(a: &S, m: &S) -> Vec<Piece<S>> {
        let four = S::ratio(4, 1);
        let knee = m.clone() * (S::one() - a.clone()) / (m.clone() - S::one());
        let [p0, p1] = rising(a, m);
        let [p3, p4] = saturating(knee, m, "[m(1−α)/(m−1), m/(m−1))");
        vec![
            p0,
            p1,
            piece(
                S::one(),
                (two::<S>() - m.clone()) / four.clone(),
                m.clone() * (S::one() - two::<S>() * a.clone()) / four,
                "[1, m(1−α)/(m−1))",
            ),
            p3,
            p4,
        ]
    }
}

fn entry<R: Rule + 'static>() -> Arc<dyn Theorem> {
    Arc::new(Entry::<R>(std::marker::PhantomData))
}

/// All built-in theorems, keyed by label.
pub fn theorems() -> Registry<dyn Theorem> {
    let mut r: Registry<dyn Theorem> = Registry::new("theorem");
    r.register(entry::<T1>())
        .register(entry::<T2>())
        .register(entry::<T3>())
        .register(entry::<T41>())
        .register(entry::<T42>())
        .register(entry::<T43>())
        .register(entry::<T44>())
        .register(entry::<T45>())
        .register(entry::<T47>())
        .register(entry::<T46>());
    r
}

/// Evaluates a piece list at `γ > 0` (left-closed pieces).
pub fn eval_pieces<S: Scalar>(pieces: &[Piece<S>], gamma: &S) -> (S, &'static str) {
    let p = pieces
        .iter()
        .rev()
        .find(|p| p.start <= *gamma && (p.start > S::zero() || *gamma > S::zero()))
        .unwrap_or(&pieces[0]);
    let v = if p.b.is_zero() { p.a.clone() } else { p.value(gamma) };
    (v, p.regime)
}
