//! Special-function kernels.
//!
//! Everything here is a pure function of its arguments. Real arguments only.
//!
//! * `log_gamma`: Lanczos approximation.
//! * `wallis`: `W_p = ∫₀^{π/2} cos^p θ dθ` in closed form through `log_gamma`.
//! * `kummer_m`: the confluent hypergeometric `M(a, b, z) = ₁F₁(a; b; z)`.
//! * `tricomi_u`: the second solution `U(a, b, z)` of Kummer's equation
//!   `z w'' + (b − z) w' − a w = 0`.
//! * `f1`, `f2`: the fundamental solutions `t e^{−t} M(3/4, 2, t)` and
//!   `t e^{−t} U(3/4, 2, t)` of `t f'' + t f' + f/4 = 0`.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Lanczos parameter `g` matching [`LANCZOS_COEFFS`].
const LANCZOS_G: f64 = 7.0;

/// Lanczos coefficients for g = 7, n = 9 (P. Godfrey's set, as tabulated in
/// Press et al., *Numerical Recipes*, 3rd ed., §6.1, and widely reproduced).
/// Relative accuracy of Γ is about 1e-15 on the positive axis.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Hard cap on power-series terms for `M`.
const MAX_SERIES_TERMS: usize = 1_000_000;
const MAX_ASYMPTOTIC_TERMS: usize = 2_000;
const MAX_TAYLOR_TERMS: usize = 600;

/// Below this argument `M` goes through Kummer's transformation
/// `M(a,b,z) = e^z M(b−a,b,−z)`.
pub const KUMMER_REFLECT_BELOW: f64 = -10.0;

/// Above this argument `M` is evaluated from its large-`z` expansion.
pub const KUMMER_ASYMPTOTIC_ABOVE: f64 = 50.0;

/// Smallest anchor for the backward continuation of `U`.
pub const TRICOMI_ANCHOR: f64 = 50.0;

/// Each Taylor piece of the `U` continuation reaches `0.4 · center` below its
/// center; the next center sits at `0.6 · center`.
const TAYLOR_REACH: f64 = 0.4;

/// Parameters of the fundamental solutions `f1`, `f2`.
const FUND_A: f64 = 0.75;
const FUND_B: f64 = 2.0;

// ---------------------------------------------------------------------------
// Gamma / Wallis
// ---------------------------------------------------------------------------

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "log_gamma",
            format!("argument must be positive and finite, got {x}"),
        ));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x)
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        let series = LANCZOS_COEFFS
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (x + i as f64));
        0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
    }
}

/// `(ln |Γ(x)|, sign Γ(x))` for any real `x` that is not a pole.
fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (ln_gamma_pos(x), 1.0)
    } else {
        let s = (PI * x).sin();
        ((PI / s.abs()).ln() - ln_gamma_pos(1.0 - x), s.signum())
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Cosine power of a Wallis integral; non-integer powers allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallisIndex(f64);

impl WallisIndex {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::domain(
                "wallis",
                format!("index must be finite and >= 0, got {p}"),
            ));
        }
        Ok(Self(p))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `W_p = ∫₀^{π/2} cos^p θ dθ = (√π/2) Γ((p+1)/2) / Γ(p/2 + 1)`.
pub fn wallis(p: WallisIndex) -> f64 {
    let p = p.0;
    0.5 * PI.sqrt() * (ln_gamma_pos(0.5 * (p + 1.0)) - ln_gamma_pos(0.5 * p + 1.0)).exp()
}

/// `ln W_p`, for indices large enough that `W_p` itself is inconveniently small.
pub fn ln_wallis(p: WallisIndex) -> f64 {
    let p = p.0;
    0.5 * PI.ln() - 2f64.ln() + ln_gamma_pos(0.5 * (p + 1.0)) - ln_gamma_pos(0.5 * p + 1.0)
}

// ---------------------------------------------------------------------------
// Confluent hypergeometric functions
// ---------------------------------------------------------------------------

/// Arguments `(a, b, z)` of `M` and `U`; `b` is never a non-positive integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

impl KummerArgs {
    pub fn new(a: f64, b: f64, z: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && z.is_finite()) {
            return Err(Error::domain("KummerArgs", "arguments must be finite"));
        }
        if is_nonpositive_integer(b) {
            return Err(Error::domain(
                "KummerArgs",
                format!("b must not be a non-positive integer, got {b}"),
            ));
        }
        Ok(Self { a, b, z })
    }
}

/// Kummer's function `M(a, b, z) = Σ (a)_n zⁿ / ((b)_n n!)`.
///
/// Direct power series for `-10 ≤ z ≤ 50`, Kummer's transformation below that
/// and the large-argument expansion above. Returns an error if the result
/// overflows.
pub fn kummer_m(args: KummerArgs) -> Result<f64> {
    let KummerArgs { a, b, z } = args;
    let value = if is_nonpositive_integer(a) {
        m_series(a, b, z)?
    } else if z < KUMMER_REFLECT_BELOW {
        kummer_m_scaled(KummerArgs { a: b - a, b, z: -z })?
    } else if z > KUMMER_ASYMPTOTIC_ABOVE {
        m_scaled_asymptotic(a, b, z)? * z.exp()
    } else {
        m_series(a, b, z)?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("kummer_m"))
    }
}

/// `e^{−z} M(a, b, z)`, finite for large positive `z`.
pub fn kummer_m_scaled(args: KummerArgs) -> Result<f64> {
    let KummerArgs { a, b, z } = args;
    let value = if is_nonpositive_integer(a) {
        (-z).exp() * m_series(a, b, z)?
    } else if z < KUMMER_REFLECT_BELOW {
        // e^{-z} M(a,b,z) = M(b-a, b, -z)
        kummer_m(KummerArgs { a: b - a, b, z: -z })?
    } else if z > KUMMER_ASYMPTOTIC_ABOVE {
        m_scaled_asymptotic(a, b, z)?
    } else {
        (-z).exp() * m_series(a, b, z)?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("kummer_m_scaled"))
    }
}

fn m_series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    // Neumaier compensation
    let mut carry = 0.0_f64;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        let next = sum + term;
        carry += if sum.abs() >= term.abs() {
            (sum - next) + term
        } else {
            (term - next) + sum
        };
        sum = next;
        if term == 0.0 {
            return Ok(sum + carry);
        }
        let next_ratio = ((a + nf + 1.0) * z / ((b + nf + 1.0) * (nf + 2.0))).abs();
        if next_ratio < 1.0 && term.abs() <= f64::EPSILON * 0.5 * sum.abs() {
            return Ok(sum + carry);
        }
    }
    Err(Error::NonConvergence {
        op: "kummer_m",
        iterations: MAX_SERIES_TERMS,
    })
}

/// `e^{−z} M(a,b,z) ≈ Γ(b)/Γ(a) z^{a−b} Σ_s (1−a)_s (b−a)_s / (s! z^s)`;
/// the companion term is smaller by a factor `e^{−z}` and dropped.
fn m_scaled_asymptotic(a: f64, b: f64, z: f64) -> Result<f64> {
    let (lgb, sb) = ln_gamma_signed(b);
    let (lga, sa) = ln_gamma_signed(a);
    let series = asymptotic_sum(1.0 - a, b - a, 1.0 / z, "kummer_m")?;
    Ok(sb * sa * (lgb - lga + (a - b) * z.ln()).exp() * series)
}

/// `Σ_s (p)_s (q)_s x^s / s!`, truncated at its smallest term.
fn asymptotic_sum(p: f64, q: f64, x: f64, op: &'static str) -> Result<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    // terms may grow for a while when p or q is large before they shrink
    let growth_allowed = p.abs() + q.abs() + 2.0;
    for s in 0..MAX_ASYMPTOTIC_TERMS {
        let sf = s as f64;
        let next = term * (p + sf) * (q + sf) * x / (sf + 1.0);
        if next == 0.0 {
            return Ok(sum);
        }
        if sf > growth_allowed && next.abs() >= term.abs() {
            return if term.abs() <= 1e-15 * sum.abs() {
                Ok(sum)
            } else {
                Err(Error::NonConvergence { op, iterations: s })
            };
        }
        term = next;
        sum += term;
        if term.abs() <= f64::EPSILON * 0.5 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        op,
        iterations: MAX_ASYMPTOTIC_TERMS,
    })
}

/// Tricomi's function `U(a, b, z)` for `z > 0`.
///
/// Large `z` uses `U ~ z^{−a} Σ (a)_s (a−b+1)_s / s! (−z)^{−s}`. Smaller
/// arguments continue the solution of Kummer's equation backwards from an
/// anchor (≥ 50) where that expansion is accurate, one Taylor piece at a
/// time. Integer `b` needs no special treatment.
pub fn tricomi_u(args: KummerArgs) -> Result<f64> {
    Ok(tricomi_u_with_derivative(args)?.0)
}

/// `(U(a,b,z), dU/dz)`.
pub fn tricomi_u_with_derivative(args: KummerArgs) -> Result<(f64, f64)> {
    let KummerArgs { a, b, z } = args;
    if !(z > 0.0) {
        return Err(Error::domain(
            "tricomi_u",
            format!("argument must be positive, got {z}"),
        ));
    }
    if is_nonpositive_integer(a) {
        // the expansion terminates and is exact
        return u_asymptotic(a, b, z);
    }
    if z >= TRICOMI_ANCHOR {
        if let Ok(v) = u_asymptotic(a, b, z) {
            return Ok(v);
        }
    }
    let mut anchor = TRICOMI_ANCHOR.max(z);
    let (mut w, mut dw) = loop {
        match u_asymptotic(a, b, anchor) {
            Ok(v) => break v,
            Err(_) if anchor < 1e5 => anchor *= 2.0,
            Err(e) => return Err(e),
        }
    };
    let mut center = anchor;
    loop {
        let reach = center * (1.0 - TAYLOR_REACH);
        if z >= reach {
            return taylor_continue(a, b, center, w, dw, z - center);
        }
        (w, dw) = taylor_continue(a, b, center, w, dw, reach - center)?;
        center = reach;
    }
}

/// `U` and `U' = −a U(a+1, b+1, z)` from the large-argument expansion.
fn u_asymptotic(a: f64, b: f64, z: f64) -> Result<(f64, f64)> {
    let x = -1.0 / z;
    let u = z.powf(-a) * asymptotic_sum(a, a - b + 1.0, x, "tricomi_u")?;
    let du = if a == 0.0 {
        0.0
    } else {
        -a * z.powf(-a - 1.0) * asymptotic_sum(a + 1.0, a - b + 1.0, x, "tricomi_u")?
    };
    Ok((u, du))
}

/// Taylor expansion of the Kummer-equation solution with value `w` and slope
/// `dw` at `center`, evaluated at `center + s`. Coefficients follow
/// `c_{n+2} = [(c − b − n)(n+1) c_{n+1} + (n + a) c_n] / (c (n+2)(n+1))`.
fn taylor_continue(a: f64, b: f64, center: f64, w: f64, dw: f64, s: f64) -> Result<(f64, f64)> {
    if s == 0.0 {
        return Ok((w, dw));
    }
    let mut c_prev = w;
    let mut c_cur = dw;
    let mut value = w + dw * s;
    let mut slope = dw;
    let mut power = s;
    let mut quiet = 0;
    for n in 0..MAX_TAYLOR_TERMS {
        let nf = n as f64;
        let c_next = ((center - b - nf) * (nf + 1.0) * c_cur + (nf + a) * c_prev)
            / (center * (nf + 2.0) * (nf + 1.0));
        let slope_term = (nf + 2.0) * c_next * power;
        power *= s;
        let value_term = c_next * power;
        value += value_term;
        slope += slope_term;
        let small = value_term.abs() <= f64::EPSILON * 0.25 * value.abs()
            && slope_term.abs() <= f64::EPSILON * 0.25 * slope.abs();
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= 2 {
            return Ok((value, slope));
        }
        c_prev = c_cur;
        c_cur = c_next;
    }
    Err(Error::NonConvergence {
        op: "tricomi_u",
        iterations: MAX_TAYLOR_TERMS,
    })
}

// ---------------------------------------------------------------------------
// Fundamental solutions of t f'' + t f' + f/4 = 0
// ---------------------------------------------------------------------------

fn check_positive(op: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("t must be positive, got {t}")))
    }
}

/// `f₁(t) = t e^{−t} M(3/4, 2, t)`; behaves like `t^{−1/4}/Γ(3/4)` for large t.
pub fn f1(t: f64) -> Result<f64> {
    check_positive("f1", t)?;
    Ok(t * kummer_m_scaled(KummerArgs::new(FUND_A, FUND_B, t)?)?)
}

/// The same solution written as `t M(5/4, 2, −t)`.
pub fn f1_reflected(t: f64) -> Result<f64> {
    check_positive("f1_reflected", t)?;
    Ok(t * kummer_m(KummerArgs::new(FUND_B - FUND_A, FUND_B, -t)?)?)
}

/// `f₂(t) = t e^{−t} U(3/4, 2, t)`; underflows past t ≈ 745, see [`f2_scaled`].
pub fn f2(t: f64) -> Result<f64> {
    Ok((-t).exp() * f2_scaled(t)?)
}

/// `e^{t} f₂(t) = t U(3/4, 2, t)`.
pub fn f2_scaled(t: f64) -> Result<f64> {
    check_positive("f2", t)?;
    Ok(t * tricomi_u(KummerArgs::new(FUND_A, FUND_B, t)?)?)
}

/// `f₁'(t) = e^{−t}[(1 − t) M(3/4,2,t) + (3/8) t M(7/4,3,t)]`.
pub fn f1_derivative(t: f64) -> Result<f64> {
    check_positive("f1_derivative", t)?;
    let m0 = kummer_m_scaled(KummerArgs::new(FUND_A, FUND_B, t)?)?;
    let m1 = kummer_m_scaled(KummerArgs::new(FUND_A + 1.0, FUND_B + 1.0, t)?)?;
    Ok((1.0 - t) * m0 + (FUND_A / FUND_B) * t * m1)
}

/// `f₂'(t) = e^{−t}[(1 − t) U(3/4,2,t) − (3/4) t U(7/4,3,t)]`.
pub fn f2_derivative(t: f64) -> Result<f64> {
    check_positive("f2_derivative", t)?;
    let (u, du) = tricomi_u_with_derivative(KummerArgs::new(FUND_A, FUND_B, t)?)?;
    // dU/dz = -a U(a+1, b+1, z)
    Ok((-t).exp() * ((1.0 - t) * u + t * du))
}

/// `W(t) = f₁ f₂' − f₁' f₂`, which equals `−e^{−t}/Γ(3/4)`.
pub fn wronskian(t: f64) -> Result<f64> {
    Ok((-t).exp() * wronskian_scaled(t)?)
}

/// `e^{t} W(t)`; constant in `t`.
pub fn wronskian_scaled(t: f64) -> Result<f64> {
    check_positive("wronskian", t)?;
    let m0 = kummer_m_scaled(KummerArgs::new(FUND_A, FUND_B, t)?)?;
    let m1 = kummer_m_scaled(KummerArgs::new(FUND_A + 1.0, FUND_B + 1.0, t)?)?;
    let (u, du) = tricomi_u_with_derivative(KummerArgs::new(FUND_A, FUND_B, t)?)?;
    let f1s = t * m0;
    let df1s = (1.0 - t) * m0 + (FUND_A / FUND_B) * t * m1;
    let f2s = t * u;
    let df2s = (1.0 - t) * u + t * du;
    Ok(f1s * df2s - df1s * f2s)
}

/// `|t f'' + t f' + f/4|` at `t` with centered differences of step `h`.
pub fn kummer_ode_residual<F>(f: F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0 && t > 2.0 * h) {
        return Err(Error::domain(
            "kummer_ode_residual",
            format!("need t > 2h > 0, got t = {t}, h = {h}"),
        ));
    }
    let fm = f(t - h)?;
    let f0 = f(t)?;
    let fp = f(t + h)?;
    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
    let d1 = (fp - fm) / (2.0 * h);
    Ok((t * d2 + t * d1 + 0.25 * f0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn m(a: f64, b: f64, z: f64) -> f64 {
        kummer_m(KummerArgs::new(a, b, z).unwrap()).unwrap()
    }

    fn u(a: f64, b: f64, z: f64) -> f64 {
        tricomi_u(KummerArgs::new(a, b, z).unwrap()).unwrap()
    }

    #[test]
    fn log_gamma_reference_points() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        assert_relative_eq!(log_gamma(0.5).unwrap(), 0.5 * PI.ln(), max_relative = 1e-13);
        assert_relative_eq!(log_gamma(0.5).unwrap(), 0.572_364_942_9, epsilon = 1e-10);
    }

    #[test]
    fn log_gamma_factorials() {
        let mut ln_fact = 0.0_f64;
        for n in 2..60 {
            ln_fact += ((n - 1) as f64).ln();
            assert_relative_eq!(log_gamma(n as f64).unwrap(), ln_fact, max_relative = 1e-13);
        }
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn wallis_small_indices() {
        let w = |p: f64| wallis(WallisIndex::new(p).unwrap());
        assert_relative_eq!(w(0.0), PI / 2.0, max_relative = 1e-13);
        assert_relative_eq!(w(1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(w(3.0), 2.0 / 3.0, max_relative = 1e-13);
        assert!(WallisIndex::new(-0.1).is_err());
    }

    #[test]
    fn wallis_recurrence() {
        for n in 2..200 {
            let w = |p: usize| wallis(WallisIndex::new(p as f64).unwrap());
            let lhs = w(n);
            let rhs = (n as f64 - 1.0) / n as f64 * w(n - 2);
            assert!((lhs - rhs).abs() <= 1e-10, "n = {n}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn kummer_trivial_cases() {
        assert_eq!(m(0.75, 2.0, 0.0), 1.0);
        assert_eq!(m(0.0, 2.0, 5.0), 1.0);
        assert!(KummerArgs::new(0.5, -2.0, 1.0).is_err());
        assert!(KummerArgs::new(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn kummer_against_brute_force_series() {
        // plain partial sums, no stopping heuristics
        let brute = |a: f64, b: f64, z: f64| {
            let mut term = 1.0_f64;
            let mut sum = 1.0_f64;
            for n in 0..400 {
                let nf = n as f64;
                term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
                sum += term;
            }
            sum
        };
        assert_relative_eq!(
            m(0.75, 2.0, 1.0),
            brute(0.75, 2.0, 1.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(m(0.75, 2.0, 1.0), 1.51499, epsilon = 1e-4);
        assert_relative_eq!(m(1.3, 2.5, 7.0), brute(1.3, 2.5, 7.0), max_relative = 1e-13);
    }

    #[test]
    fn kummer_regimes_agree_at_switch_points() {
        // across the reflection threshold
        let below = m(0.75, 2.0, KUMMER_REFLECT_BELOW - 1e-9);
        let above = m(0.75, 2.0, KUMMER_REFLECT_BELOW + 1e-9);
        assert_relative_eq!(below, above, max_relative = 1e-8);
        // across the asymptotic threshold (scaled form)
        let s = |z: f64| kummer_m_scaled(KummerArgs::new(0.75, 2.0, z).unwrap()).unwrap();
        assert_relative_eq!(
            s(KUMMER_ASYMPTOTIC_ABOVE - 1e-9),
            s(KUMMER_ASYMPTOTIC_ABOVE + 1e-9),
            max_relative = 1e-10
        );
    }

    #[test]
    fn kummer_overflow_is_an_error() {
        assert!(kummer_m(KummerArgs::new(0.75, 2.0, 800.0).unwrap()).is_err());
        assert!(kummer_m_scaled(KummerArgs::new(0.75, 2.0, 800.0).unwrap()).is_ok());
    }

    #[test]
    fn tricomi_trivial_and_asymptotic() {
        assert_relative_eq!(u(0.0, 2.0, 3.0), 1.0, max_relative = 1e-15);
        let big = u(0.75, 2.0, 50.0);
        assert_relative_eq!(big, 50f64.powf(-0.75), max_relative = 0.03);
        assert!(tricomi_u(KummerArgs::new(0.75, 2.0, 0.0).unwrap()).is_err());
        assert!(tricomi_u(KummerArgs::new(0.75, 2.0, -1.0).unwrap()).is_err());
    }

    #[test]
    fn tricomi_polynomial_case() {
        // U(-1, b, z) = z - b
        assert_relative_eq!(u(-1.0, 2.0, 0.7), 0.7 - 2.0, max_relative = 1e-14);
        assert_relative_eq!(u(-1.0, 2.5, 30.0), 30.0 - 2.5, max_relative = 1e-14);
    }

    #[test]
    fn tricomi_continuous_across_anchor() {
        let (z_lo, z_hi) = (TRICOMI_ANCHOR * (1.0 - 1e-9), TRICOMI_ANCHOR * (1.0 + 1e-9));
        let (hi, du) =
            tricomi_u_with_derivative(KummerArgs::new(0.75, 2.0, z_hi).unwrap()).unwrap();
        let lo = u(0.75, 2.0, z_lo);
        assert_relative_eq!(lo, hi + du * (z_lo - z_hi), max_relative = 1e-14);
    }

    #[test]
    fn f1_forms_agree() {
        for i in 0..=100 {
            let t = 0.1 + 9.9 * i as f64 / 100.0;
            assert_relative_eq!(
                f1(t).unwrap(),
                f1_reflected(t).unwrap(),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn f1_small_argument_and_reference_value() {
        assert!(f1(1e-12).unwrap().abs() < 1e-11);
        assert_relative_eq!(f1(1.0).unwrap(), 0.557_37, epsilon = 1e-3);
    }

    #[test]
    fn residual_of_constant_is_quarter() {
        let r = kummer_ode_residual(|_| Ok(1.0), 2.0, 1e-3).unwrap();
        assert_relative_eq!(r, 0.25, max_relative = 1e-12);
        assert!(kummer_ode_residual(|_| Ok(1.0), 1e-4, 1e-4).is_err());
    }

    #[test]
    fn fundamental_solutions_solve_the_ode() {
        assert!(kummer_ode_residual(f1, 2.0, 1e-4).unwrap() < 1e-6);
        assert!(kummer_ode_residual(f2, 2.0, 1e-4).unwrap() < 1e-6);
    }

    #[test]
    fn wronskian_is_closed_form() {
        let expected = -(-log_gamma(0.75).unwrap()).exp();
        for t in [0.5, 1.0, 3.0, 7.5, 10.0, 40.0, 200.0] {
            assert_relative_eq!(wronskian_scaled(t).unwrap(), expected, max_relative = 1e-9);
        }
    }
}
