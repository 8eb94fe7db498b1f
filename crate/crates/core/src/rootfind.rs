//! Scalar root finding: fixed-point iteration, bisection, secant and
//! Newton–Raphson, plus a harness that runs all four side by side.
//!
//! Loop counters follow the classic textbook layout: fixed-point, bisection
//! and Newton count from 1, secant from 2 (its two starting points already
//! "use up" the first iteration). A report's `iterations` is the counter
//! value at which the method stopped, or `max_iters` when it ran out.
//!
//! ```
//! use graphcon::rootfind::{newton, ScalarFunction};
//!
//! let f = ScalarFunction::tanx();
//! let report = newton(&f, 4.5, 1e-6, 50).unwrap();
//! assert!((report.root.unwrap() - 4.493409).abs() < 1e-6);
//! ```

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use thiserror::Error;

/// Derivatives smaller than this stop Newton's method.
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function on an interval, with an optional analytic derivative and
/// an optional fixed-point map `g` whose fixed points are roots.
pub struct ScalarFunction {
    name: String,
    f: RealFn,
    df: Option<RealFn>,
    g: Option<RealFn>,
    domain: (f64, f64),
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("derivative", &self.df.is_some())
            .finish()
    }
}

impl ScalarFunction {
    pub fn new<F>(name: impl Into<String>, f: F, domain: (f64, f64)) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarFunction {
            name: name.into(),
            f: Box::new(f),
            df: None,
            g: None,
            domain,
        }
    }

    pub fn with_derivative<F>(mut self, df: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.df = Some(Box::new(df));
        self
    }

    pub fn with_fixed_point_map<F>(mut self, g: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.g = Some(Box::new(g));
        self
    }

    /// `x cos x - sin x` on `[0, 5]`, derivative `-x sin x`, fixed-point map
    /// `tan x` (the rearrangement `x = tan x`).
    pub fn tanx() -> Self {
        ScalarFunction::new("tanx", |x: f64| x * x.cos() - x.sin(), (0.0, 5.0))
            .with_derivative(|x: f64| -x * x.sin())
            .with_fixed_point_map(f64::tan)
    }

    /// `x² - 2` on `[0, 2]`, fixed-point map `x - (x² - 2) / 4`.
    pub fn quadratic2() -> Self {
        ScalarFunction::new("quadratic2", |x: f64| x * x - 2.0, (0.0, 2.0))
            .with_derivative(|x: f64| 2.0 * x)
            .with_fixed_point_map(|x: f64| x - (x * x - 2.0) / 4.0)
    }

    /// Built-in functions by id: `tanx`, `quadratic2`.
    pub fn builtin(id: &str) -> Option<Self> {
        match id {
            "tanx" => Some(ScalarFunction::tanx()),
            "quadratic2" => Some(ScalarFunction::quadratic2()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn has_derivative(&self) -> bool {
        self.df.is_some()
    }

    /// Analytic derivative, or a central difference with step
    /// `ε^(1/3) · max(1, |x|)`.
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.df {
            Some(df) => df(x),
            None => {
                let h = f64::EPSILON.cbrt() * x.abs().max(1.0);
                (self.eval(x + h) - self.eval(x - h)) / (2.0 * h)
            }
        }
    }

    /// The fixed-point map; `x - f(x)` when none was supplied.
    pub fn fixed_point_map(&self, x: f64) -> f64 {
        match &self.g {
            Some(g) => g(x),
            None => x - self.eval(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    FixedPoint,
    Bisection,
    Secant,
    Newton,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::FixedPoint,
        Method::Bisection,
        Method::Secant,
        Method::Newton,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Method::FixedPoint => "fixed_point",
            Method::Bisection => "bisection",
            Method::Secant => "secant",
            Method::Newton => "newton",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = RootFindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "fixed_point" => Ok(Method::FixedPoint),
            "bisection" => Ok(Method::Bisection),
            "secant" => Ok(Method::Secant),
            "newton" => Ok(Method::Newton),
            _ => Err(RootFindError::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootFindReport {
    pub method: Method,
    /// Every new approximation, in order (starting points excluded).
    pub iterates: Vec<f64>,
    pub root: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RootFindError {
    #[error("{method}: non-finite value at iteration {iteration}")]
    NonFinite {
        method: Method,
        iteration: usize,
        iterates: Vec<f64>,
    },
    #[error("bracket [{a}, {b}] does not straddle a sign change (f(a) = {fa}, f(b) = {fb})")]
    Bracket { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("secant: f takes the same value at both points at iteration {iteration}")]
    DegenerateSecant { iteration: usize, iterates: Vec<f64> },
    #[error("newton: derivative {derivative:e} at x = {x} is below {DERIVATIVE_FLOOR:e}")]
    DerivativeSingular {
        x: f64,
        derivative: f64,
        iterates: Vec<f64>,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn check_settings(tol: f64, max_iters: usize) -> Result<(), RootFindError> {
    if !(tol > 0.0) {
        return Err(RootFindError::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if max_iters == 0 {
        return Err(RootFindError::InvalidArgument("max_iters must be positive".into()));
    }
    Ok(())
}

fn finished(method: Method, iterates: Vec<f64>, i: usize, tol: f64) -> RootFindReport {
    RootFindReport {
        method,
        root: iterates.last().copied(),
        iterates,
        iterations: i,
        converged: true,
        tolerance: tol,
    }
}

fn exhausted(method: Method, iterates: Vec<f64>, max_iters: usize, tol: f64) -> RootFindReport {
    RootFindReport {
        method,
        iterates,
        root: None,
        iterations: max_iters,
        converged: false,
        tolerance: tol,
    }
}

/// `p ← g(p)` until `|p - p_prev| < tol`.
pub fn fixed_point<G>(g: G, p0: f64, tol: f64, max_iters: usize) -> Result<RootFindReport, RootFindError>
where
    G: Fn(f64) -> f64,
{
    check_settings(tol, max_iters)?;
    let method = Method::FixedPoint;
    let mut iterates = Vec::new();
    let mut prev = p0;
    for i in 1..=max_iters {
        let p = g(prev);
        iterates.push(p);
        if !p.is_finite() {
            return Err(RootFindError::NonFinite { method, iteration: i, iterates });
        }
        if (p - prev).abs() < tol {
            return Ok(finished(method, iterates, i, tol));
        }
        prev = p;
    }
    Ok(exhausted(method, iterates, max_iters, tol))
}

/// Interval halving on `[a, b]`; stops when `f(p) = 0` or the half-width
/// `(b - a) / 2` drops below `tol`.
pub fn bisection(
    f: &ScalarFunction,
    a: f64,
    b: f64,
    tol: f64,
    max_iters: usize,
) -> Result<RootFindReport, RootFindError> {
    check_settings(tol, max_iters)?;
    let method = Method::Bisection;
    let (mut a, mut b) = (a, b);
    let fa = f.eval(a);
    let fb = f.eval(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(RootFindError::NonFinite { method, iteration: 0, iterates: Vec::new() });
    }
    if fa.signum() * fb.signum() >= 0.0 || fa == 0.0 || fb == 0.0 {
        return Err(RootFindError::Bracket { a, b, fa, fb });
    }
    let mut iterates = Vec::new();
    for i in 1..=max_iters {
        let half = (b - a) / 2.0;
        let p = a + half;
        let fp = f.eval(p);
        iterates.push(p);
        if !fp.is_finite() {
            return Err(RootFindError::NonFinite { method, iteration: i, iterates });
        }
        if fp == 0.0 || half < tol {
            return Ok(finished(method, iterates, i, tol));
        }
        // f(a) keeps its sign whenever a moves, so the initial value decides.
        if fa.signum() * fp.signum() > 0.0 {
            a = p;
        } else {
            b = p;
        }
    }
    Ok(exhausted(method, iterates, max_iters, tol))
}

/// Secant iteration from `p0, p1`; stops when `|p - p1| < tol`.
pub fn secant(
    f: &ScalarFunction,
    p0: f64,
    p1: f64,
    tol: f64,
    max_iters: usize,
) -> Result<RootFindReport, RootFindError> {
    check_settings(tol, max_iters)?;
    let method = Method::Secant;
    let (mut p0, mut p1) = (p0, p1);
    let (mut q0, mut q1) = (f.eval(p0), f.eval(p1));
    let mut iterates = Vec::new();
    if !q0.is_finite() || !q1.is_finite() {
        return Err(RootFindError::NonFinite { method, iteration: 1, iterates });
    }
    for i in 2..=max_iters {
        if q1 == q0 {
            return Err(RootFindError::DegenerateSecant { iteration: i, iterates });
        }
        let p = p1 - q1 * (p1 - p0) / (q1 - q0);
        iterates.push(p);
        if !p.is_finite() {
            return Err(RootFindError::NonFinite { method, iteration: i, iterates });
        }
        if (p - p1).abs() < tol {
            return Ok(finished(method, iterates, i, tol));
        }
        p0 = p1;
        q0 = q1;
        p1 = p;
        q1 = f.eval(p);
        if !q1.is_finite() {
            return Err(RootFindError::NonFinite { method, iteration: i, iterates });
        }
    }
    Ok(exhausted(method, iterates, max_iters, tol))
}

/// Newton–Raphson `p ← p - f(p) / f'(p)`; stops when `|p - p_prev| < tol`.
pub fn newton(
    f: &ScalarFunction,
    p0: f64,
    tol: f64,
    max_iters: usize,
) -> Result<RootFindReport, RootFindError> {
    check_settings(tol, max_iters)?;
    let method = Method::Newton;
    let mut iterates = Vec::new();
    let mut prev = p0;
    for i in 1..=max_iters {
        let d = f.derivative(prev);
        if !(d.abs() >= DERIVATIVE_FLOOR) {
            return Err(RootFindError::DerivativeSingular { x: prev, derivative: d, iterates });
        }
        let p = prev - f.eval(prev) / d;
        iterates.push(p);
        if !p.is_finite() {
            return Err(RootFindError::NonFinite { method, iteration: i, iterates });
        }
        if (p - prev).abs() < tol {
            return Ok(finished(method, iterates, i, tol));
        }
        prev = p;
    }
    Ok(exhausted(method, iterates, max_iters, tol))
}

/// Starting points and stopping rule shared by [`compare_methods`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareConfig {
    pub bracket: (f64, f64),
    pub secant_start: (f64, f64),
    pub newton_start: f64,
    pub fixed_point_start: f64,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl CompareConfig {
    /// Bisection and secant start from the bracket ends, Newton and
    /// fixed-point iteration from its midpoint.
    pub fn for_bracket(a: f64, b: f64, tolerance: f64, max_iters: usize) -> Self {
        let mid = a + (b - a) / 2.0;
        CompareConfig {
            bracket: (a, b),
            secant_start: (a, b),
            newton_start: mid,
            fixed_point_start: mid,
            tolerance,
            max_iters,
        }
    }
}

impl Default for CompareConfig {
    /// `[4, 5]`, tolerance `1e-6`, 100 iterations.
    fn default() -> Self {
        CompareConfig::for_bracket(4.0, 5.0, 1e-6, 100)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub method: Method,
    pub outcome: Result<RootFindReport, RootFindError>,
    /// Converged, but outside the queried bracket.
    pub out_of_bracket: bool,
}

impl ComparisonRow {
    pub fn root(&self) -> Option<f64> {
        self.outcome.as_ref().ok().and_then(|r| r.root)
    }

    pub fn iterations(&self) -> Option<usize> {
        self.outcome.as_ref().ok().map(|r| r.iterations)
    }

    pub fn converged(&self) -> bool {
        matches!(&self.outcome, Ok(r) if r.converged)
    }

    pub fn note(&self) -> String {
        match &self.outcome {
            Err(e) => format!("error: {e}"),
            Ok(r) if !r.converged => "fail to converge".to_string(),
            Ok(_) if self.out_of_bracket => "out-of-bracket".to_string(),
            Ok(_) => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub function: String,
    pub config: CompareConfig,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn row(&self, method: Method) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    /// Aligned text table: method, iterations, result, note.
    pub fn to_table(&self) -> String {
        let mut lines = vec![format!(
            "{:<12} {:>10} {:>12}  {}",
            "Method", "Iterations", "Result", "Note"
        )];
        for row in &self.rows {
            let iterations = row.iterations().map_or("-".to_string(), |i| i.to_string());
            let result = row.root().map_or("-".to_string(), |x| format!("{x:.6}"));
            lines.push(
                format!("{:<12} {:>10} {:>12}  {}", row.method.id(), iterations, result, row.note())
                    .trim_end()
                    .to_string(),
            );
        }
        lines.join("\n") + "\n"
    }

    /// CSV with header `method,iterations,result,converged`. Failed methods
    /// leave `iterations` and `result` empty.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["method", "iterations", "result", "converged"])?;
        for row in &self.rows {
            w.write_record([
                row.method.id().to_string(),
                row.iterations().map_or(String::new(), |i| i.to_string()),
                row.root().map_or(String::new(), |x| x.to_string()),
                row.converged().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs one method under `config`.
pub fn run_method(
    f: &ScalarFunction,
    method: Method,
    config: &CompareConfig,
) -> Result<RootFindReport, RootFindError> {
    let (tol, n) = (config.tolerance, config.max_iters);
    match method {
        Method::FixedPoint => fixed_point(|x| f.fixed_point_map(x), config.fixed_point_start, tol, n),
        Method::Bisection => bisection(f, config.bracket.0, config.bracket.1, tol, n),
        Method::Secant => secant(f, config.secant_start.0, config.secant_start.1, tol, n),
        Method::Newton => newton(f, config.newton_start, tol, n),
    }
}

/// Runs the given methods; failures are kept per row.
pub fn compare_methods(f: &ScalarFunction, methods: &[Method], config: &CompareConfig) -> Comparison {
    let (lo, hi) = config.bracket;
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let rows = methods
        .iter()
        .map(|&method| {
            let outcome = run_method(f, method, config);
            let out_of_bracket = matches!(
                &outcome,
                Ok(RootFindReport { root: Some(x), converged: true, .. }) if !(lo..=hi).contains(x)
            );
            ComparisonRow { method, outcome, out_of_bracket }
        })
        .collect();
    Comparison {
        function: f.name().to_string(),
        config: *config,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn func(f: fn(f64) -> f64) -> ScalarFunction {
        ScalarFunction::new("test", f, (-10.0, 10.0))
    }

    #[test]
    fn identity_map_converges_at_once() {
        let r = fixed_point(|x| x, 2.7, 1e-8, 10).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.root, Some(2.7));
    }

    #[test]
    fn cosine_fixed_point() {
        // oracle: iterate cos until the value stops changing
        let mut dottie = 1.0f64;
        for _ in 0..10_000 {
            dottie = dottie.cos();
        }
        let r = fixed_point(f64::cos, 1.0, 1e-8, 1000).unwrap();
        assert!((r.root.unwrap() - dottie).abs() < 1e-7);
        assert!((dottie - 0.739_085_1).abs() < 1e-7);
    }

    #[test]
    fn halving_map_goes_to_zero() {
        let r = fixed_point(|x| x / 2.0, 1.0, 1e-6, 100).unwrap();
        assert!(r.converged);
        assert!(r.root.unwrap().abs() < 2e-6);
    }

    #[test]
    fn fixed_point_failure_modes() {
        let r = fixed_point(|x| x + 1.0, 0.0, 1e-6, 5).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 5);
        assert_eq!(r.root, None);
        let e = fixed_point(|x| x * 1e300, 1.0, 1e-6, 5).unwrap_err();
        match e {
            RootFindError::NonFinite { iterates, .. } => assert_eq!(iterates.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bisection_cases() {
        let r = bisection(&ScalarFunction::tanx(), 4.0, 5.0, 1e-6, 100).unwrap();
        assert!((r.root.unwrap() - 4.493409).abs() < 1e-5);
        assert_eq!(r.iterations, 20);

        let r = bisection(&func(|x| x), -1.0, 1.0, 1e-6, 100).unwrap();
        assert_eq!(r.root, Some(0.0));
        assert_eq!(r.iterations, 1);

        let r = bisection(&ScalarFunction::quadratic2(), 1.0, 2.0, 1e-10, 100).unwrap();
        assert!((r.root.unwrap() - SQRT2).abs() < 1e-8);

        let e = bisection(&ScalarFunction::quadratic2(), 2.0, 3.0, 1e-6, 100).unwrap_err();
        assert!(matches!(e, RootFindError::Bracket { .. }));
    }

    #[test]
    fn secant_cases() {
        let r = secant(&ScalarFunction::tanx(), 4.0, 5.0, 1e-6, 100).unwrap();
        assert!((r.root.unwrap() - 4.493409).abs() < 1e-5);

        let r = secant(&func(|x| x - 3.0), 0.0, 1.0, 1e-9, 100).unwrap();
        assert_eq!(r.iterates[0], 3.0);
        assert_eq!(r.root, Some(3.0));

        let r = secant(&ScalarFunction::quadratic2(), 1.0, 2.0, 1e-10, 100).unwrap();
        assert!((r.root.unwrap() - SQRT2).abs() < 1e-8);

        let e = secant(&func(|_| 1.0), 0.0, 1.0, 1e-9, 100).unwrap_err();
        assert!(matches!(e, RootFindError::DegenerateSecant { iteration: 2, .. }));
    }

    #[test]
    fn newton_cases() {
        let r = newton(&ScalarFunction::tanx(), 4.5, 1e-6, 100).unwrap();
        assert!((r.root.unwrap() - 4.493409).abs() < 1e-6);

        let r = newton(&func(|x| x * x).with_derivative(|x| 2.0 * x), 1.0, 1e-6, 100).unwrap();
        assert!(r.converged);
        assert!(r.root.unwrap().abs() < 1e-5);
        // the double root halves the error each step
        assert!((r.iterates[1] / r.iterates[0] - 0.5).abs() < 1e-12);

        let r = newton(&ScalarFunction::quadratic2(), 1.5, 1e-10, 100).unwrap();
        assert!((r.root.unwrap() - SQRT2).abs() < 1e-10);
        assert!(r.iterations <= 4);

        let e = newton(&func(|x| x * x + 1.0).with_derivative(|x| 2.0 * x), 0.0, 1e-6, 10)
            .unwrap_err();
        assert!(matches!(e, RootFindError::DerivativeSingular { .. }));
    }

    #[test]
    fn finite_difference_fallback() {
        let f = func(|x| x * x - 2.0);
        assert!((f.derivative(3.0) - 6.0).abs() < 1e-8);
        let r = newton(&f, 1.5, 1e-10, 50).unwrap();
        assert!((r.root.unwrap() - SQRT2).abs() < 1e-10);
    }

    #[test]
    fn linear_function_all_methods_agree() {
        let f = func(|x| x - 3.0).with_derivative(|_| 1.0);
        let cmp = compare_methods(&f, &Method::ALL, &CompareConfig::for_bracket(0.0, 5.0, 1e-9, 50));
        for row in &cmp.rows {
            assert!((row.root().unwrap() - 3.0).abs() < 1e-8, "{row:?}");
        }
    }

    #[test]
    fn cubic_bracketing_and_derivative_methods() {
        let f = func(|x| x * x * x - x).with_derivative(|x| 3.0 * x * x - 1.0);
        let cmp = compare_methods(
            &f,
            &[Method::Bisection, Method::Secant, Method::Newton],
            &CompareConfig::for_bracket(0.5, 2.0, 1e-10, 200),
        );
        for row in &cmp.rows {
            assert!((row.root().unwrap() - 1.0).abs() < 1e-8, "{row:?}");
        }
    }

    #[test]
    fn method_names_parse() {
        for m in Method::ALL {
            assert_eq!(m.id().parse::<Method>().unwrap(), m);
        }
        assert_eq!("fixed-point".parse::<Method>().unwrap(), Method::FixedPoint);
        assert!("regula_falsi".parse::<Method>().is_err());
    }
}
