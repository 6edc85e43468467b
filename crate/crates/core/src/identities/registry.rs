use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, LN_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Identity, Inconclusive, ParamGrid, ParamPoint, Plan, Side, SideResult, TestFunction, TolClass};
use crate::quadrature::{
    integrate_1d_ends, integrate_nd_ends, monte_carlo_nd, Abscissa, AxisSpec, QuadPolicy, QuadResult, Transform,
};
use crate::reduction::{reduce, s_region, s_square, sin_product, watson_closed_form, SinProductIntegral};
use crate::specfun::{
    bessel_i0, catalan_const, ellip_k, ellip_k_comp, hyp3f2_half, i0_minus_l0, struve_l0, Modulus, SpecFunError,
};

pub fn registry() -> &'static [Identity] {
    &REGISTRY
}

static REGISTRY: [Identity; 19] = [
    Identity {
        id: "EQ1",
        statement: "∫₀¹ t I₀(xt)/√(1−t²) dt = sinh(x)/x",
        erratum: None,
        grid: grid_exponential,
        class: class_tight,
        domain: dom_x_positive,
        reach: reach_none,
        lhs: eq1_lhs,
        rhs: eq1_rhs,
    },
    Identity {
        id: "EQ3",
        statement: "∫₀¹ t L₀(xt)/√(1−t²) dt = (cosh(x) − 1)/x",
        erratum: None,
        grid: grid_exponential,
        class: class_tight,
        domain: dom_x_positive,
        reach: reach_none,
        lhs: eq3_lhs,
        rhs: eq3_rhs,
    },
    Identity {
        id: "EQ4",
        statement: "∫₀¹ t [I₀(xt) − L₀(xt)]/√(1−t²) dt = (1 − e^{−x})/x",
        erratum: None,
        grid: grid_exponential,
        class: class_tight,
        domain: dom_x_positive,
        reach: reach_none,
        lhs: eq4_lhs,
        rhs: eq4_rhs,
    },
    Identity {
        id: "EQ5",
        statement: "(π/2)[I₀(x) − L₀(x)] = ∫₀¹ e^{−xt}/√(1−t²) dt",
        erratum: None,
        grid: grid_exponential,
        class: class_tight,
        domain: dom_x_positive,
        reach: reach_none,
        lhs: eq5_lhs,
        rhs: eq5_rhs,
    },
    Identity {
        id: "EQ7",
        statement: "∫₀^{π/2}∫₀^{π/2} sin φ e^{−x sin φ sin θ} dθ dφ = (π/2x)(1 − e^{−x})",
        erratum: None,
        grid: grid_exponential,
        class: class_standard,
        domain: dom_x_positive,
        reach: reach_none,
        lhs: eq7_lhs,
        rhs: eq7_rhs,
    },
    Identity {
        id: "EQ9",
        statement: "∫₀^{π/2}∫₀^{π/2} sin φ F(x sin φ sin θ) dθ dφ = (π/2x) ∫₀^x F(t) dt",
        erratum: None,
        grid: grid_eq9,
        class: class_standard_or_piecewise,
        domain: dom_fn_x_positive,
        reach: reach_x,
        lhs: eq9_lhs,
        rhs: eq9_rhs,
    },
    Identity {
        id: "EQ11",
        statement: "∫∫∫ sin β F(x sin β sin φ sin θ) = (π/4) ∫₀¹ ln((1+√(1−u²))/(1−√(1−u²))) F(xu) du",
        erratum: None,
        grid: grid_eq11,
        class: class_singular3d,
        domain: dom_fn_x_unit_closed,
        reach: reach_x,
        lhs: eq11_lhs,
        rhs: eq11_rhs,
    },
    Identity {
        id: "EQ12_14",
        statement: "∫₀¹∫₀¹ f(x+y)F(xy)/√((1−x²)(1−y²)) = 2∫₀¹ F(v) ∫_{2√v}^{1+v} f(u) du/√((u²−4v)((1+v)²−u²)) dv",
        erratum: Some("inner integration variable is u over [2√v, 1+v]"),
        grid: grid_pairs,
        class: class_standard,
        domain: dom_pair,
        reach: reach_none,
        lhs: eq12_lhs,
        rhs: eq14_rhs,
    },
    Identity {
        id: "EQ15",
        statement: "∫_{2√v}^{1+v} du/√((u²−4v)((1+v)²−u²)) = K((1−v)/(1+v))/(1+v)",
        erratum: None,
        grid: grid_v,
        class: class_standard,
        domain: dom_v_open,
        reach: reach_none,
        lhs: eq15_lhs,
        rhs: eq15_rhs,
    },
    Identity {
        id: "EQ16",
        statement: "∫₀¹ K(t) F((1−t)/(1+t)) dt/(1+t) = ½ ∫₀^{π/2}∫₀^{π/2} F(sin θ sin φ) dθ dφ",
        erratum: None,
        grid: grid_functions,
        class: class_eq16,
        domain: dom_fn,
        reach: reach_one,
        lhs: eq16_lhs,
        rhs: eq16_rhs,
    },
    Identity {
        id: "EQ19",
        statement: "∫₀^{π/2}∫₀^{π/2} dθ dφ / K((1 − sin θ sin φ)/(1 + sin θ sin φ)) = 2 ln 2",
        erratum: None,
        grid: grid_none,
        class: class_standard,
        domain: dom_none,
        reach: reach_none,
        lhs: eq19_lhs,
        rhs: eq19_rhs,
    },
    Identity {
        id: "EQ20",
        statement: "∫₀^{π/2} K(a sin θ) dθ = K²(√((1 − √(1−a²))/2))",
        erratum: None,
        grid: grid_a,
        class: class_tight,
        domain: dom_a_unit,
        reach: reach_none,
        lhs: eq20_lhs,
        rhs: eq20_rhs,
    },
    Identity {
        id: "EQ21",
        statement: "∫₀¹ K(xt) dt = (π/2) ₃F₂(½,½,½; 1,3/2; x²)",
        erratum: Some(
            "prefactor is π/2, not π/4: at x = 0 the left side is K(0) = π/2 while ₃F₂ = 1",
        ),
        grid: grid_x_unit,
        class: class_standard,
        domain: dom_x_unit_open,
        reach: reach_none,
        lhs: eq21_lhs,
        rhs: eq21_rhs,
    },
    Identity {
        id: "EQ22",
        statement: "∫₀¹ u K²(√((1 − √(1−x²u²))/2)) du/√(1−u²) = (π²/4) ₃F₂(½,½,½; 1,3/2; x²)",
        erratum: None,
        grid: grid_x_unit,
        class: class_standard,
        domain: dom_x_unit_open,
        reach: reach_none,
        lhs: eq22_lhs,
        rhs: eq22_rhs,
    },
    Identity {
        id: "EQ23",
        statement: "∫₀^{1/√2} k K²(k) dk = πG/4",
        erratum: None,
        grid: grid_none,
        class: class_tight,
        domain: dom_none,
        reach: reach_none,
        lhs: eq23_lhs,
        rhs: eq23_rhs,
    },
    Identity {
        id: "EQ24",
        statement: "∫₀¹∫₀¹∫₀¹ u du dv dw/√((1−u²)(1−v²)(1−w²)(1−u²v²w²)) = πG \
                    (route 0: 3-D cubature, 1: log-kernel reduction, 2: Monte Carlo)",
        erratum: None,
        grid: grid_eq24,
        class: class_by_route_eq24,
        domain: dom_route,
        reach: reach_none,
        lhs: eq24_lhs,
        rhs: eq24_rhs,
    },
    Identity {
        id: "EQ25",
        statement: "∫∫∫ sin β dβ dφ dθ/(1 − x sin β sin φ sin θ) = (π/4x)[arccos²x − 2π arccos x + 3π²/4] \
                    (route 0: log-kernel reduction, 1: 3-D cubature, 2: Monte Carlo)",
        erratum: None,
        grid: grid_eq25,
        class: class_by_route_eq25,
        domain: dom_eq25,
        reach: reach_none,
        lhs: eq25_lhs,
        rhs: eq25_rhs,
    },
    Identity {
        id: "EQ26",
        statement: "∫₀¹ K(u) f(u) du = ∫₀^{π/2}∫₀^{π/2} f((1 − sin θ sin φ)/(1 + sin θ sin φ)) dθ dφ/(1 + sin θ sin φ)",
        erratum: None,
        grid: grid_functions,
        class: class_standard_or_piecewise,
        domain: dom_fn,
        reach: reach_one,
        lhs: eq26_lhs,
        rhs: eq26_rhs,
    },
    Identity {
        id: "EQ27",
        statement: "∫₀^{π/2}∫₀^{π/2} dθ dφ/√(sin θ sin φ (1 + sin θ sin φ)) = 4k K(k) K′(k), k = √2 − 1",
        erratum: None,
        grid: grid_none,
        class: class_standard,
        domain: dom_none,
        reach: reach_none,
        lhs: eq27_lhs,
        rhs: eq27_rhs,
    },
];

// ---- grids -----------------------------------------------------------------

fn grid_none() -> ParamGrid {
    ParamGrid::new()
}

fn grid_exponential() -> ParamGrid {
    ParamGrid::new().axis("x", &[0.1, 1.0, 5.0, 10.0])
}

fn grid_eq9() -> ParamGrid {
    ParamGrid::new()
        .functions(TestFunction::catalog())
        .axis("x", &[0.1, 0.5, 1.0, 5.0, 10.0])
}

fn grid_eq11() -> ParamGrid {
    ParamGrid::new().functions(TestFunction::catalog()).axis("x", &[0.1, 0.5, 0.9])
}

fn grid_functions() -> ParamGrid {
    ParamGrid::new().functions(TestFunction::catalog())
}

fn grid_x_unit() -> ParamGrid {
    ParamGrid::new().axis("x", &[0.1, 0.3, 0.5, 0.7, 0.9])
}

fn grid_a() -> ParamGrid {
    ParamGrid::new().axis("a", &[0.1, 0.3, 0.5, 0.7, 0.9])
}

fn grid_v() -> ParamGrid {
    ParamGrid::new().axis("v", &[0.1, 0.25, 0.5, 0.75, 0.9])
}

fn grid_pairs() -> ParamGrid {
    let k: Vec<f64> = (0..10).map(f64::from).collect();
    ParamGrid::new().axis("pair", &k)
}

fn grid_eq24() -> ParamGrid {
    ParamGrid::new().axis("route", &[0.0, 1.0, 2.0])
}

fn grid_eq25() -> ParamGrid {
    ParamGrid::new()
        .axis("x", &[0.1, 0.3, 0.5, 0.7, 0.9])
        .axis("route", &[0.0, 1.0])
}

// ---- tolerance classes -----------------------------------------------------

fn class_tight(_: &ParamPoint) -> TolClass {
    TolClass::Tight
}

fn class_standard(_: &ParamPoint) -> TolClass {
    TolClass::Standard
}

fn class_singular3d(_: &ParamPoint) -> TolClass {
    TolClass::Singular3d
}

fn class_standard_or_piecewise(p: &ParamPoint) -> TolClass {
    match p.function {
        Some(f) if f.is_discontinuous() => TolClass::Piecewise,
        _ => TolClass::Standard,
    }
}

fn class_eq16(p: &ParamPoint) -> TolClass {
    match p.function {
        Some(f) if f.is_discontinuous() => TolClass::Piecewise,
        Some(f) if f.is_singular_at_one() => TolClass::Standard,
        _ => TolClass::Tight,
    }
}

fn class_by_route_eq24(p: &ParamPoint) -> TolClass {
    match route(p) {
        0 => TolClass::Singular3d,
        1 => TolClass::Tight,
        _ => TolClass::Statistical,
    }
}

fn class_by_route_eq25(p: &ParamPoint) -> TolClass {
    match route(p) {
        0 => TolClass::Standard,
        1 => TolClass::Singular3d,
        _ => TolClass::Statistical,
    }
}

// ---- domains ---------------------------------------------------------------

fn dom_none(_: &ParamPoint) -> Result<(), String> {
    Ok(())
}

fn need(p: &ParamPoint, axis: &str) -> Result<f64, String> {
    p.get(axis).ok_or_else(|| format!("missing axis `{axis}`"))
}

fn dom_x_positive(p: &ParamPoint) -> Result<(), String> {
    let x = need(p, "x")?;
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(format!("x = {x} must be positive"))
    }
}

fn dom_x_unit_open(p: &ParamPoint) -> Result<(), String> {
    let x = need(p, "x")?;
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(format!("x = {x} must lie in (0, 1)"))
    }
}

fn dom_a_unit(p: &ParamPoint) -> Result<(), String> {
    let a = need(p, "a")?;
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(format!("a = {a} must lie in (0, 1)"))
    }
}

fn dom_v_open(p: &ParamPoint) -> Result<(), String> {
    let v = need(p, "v")?;
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(format!("v = {v} must lie in (0, 1)"))
    }
}

fn dom_fn(p: &ParamPoint) -> Result<(), String> {
    p.function.map(|_| ()).ok_or_else(|| "missing test function".to_string())
}

fn dom_fn_x_positive(p: &ParamPoint) -> Result<(), String> {
    dom_fn(p)?;
    dom_x_positive(p)
}

fn dom_fn_x_unit_closed(p: &ParamPoint) -> Result<(), String> {
    dom_fn(p)?;
    let x = need(p, "x")?;
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(format!("x = {x} must lie in (0, 1]"))
    }
}

fn small_index(p: &ParamPoint, axis: &str, max: f64) -> Result<(), String> {
    let k = need(p, axis)?;
    if k >= 0.0 && k <= max && k.fract() == 0.0 {
        Ok(())
    } else {
        Err(format!("{axis} = {k} must be an integer in [0, {max}]"))
    }
}

fn dom_pair(p: &ParamPoint) -> Result<(), String> {
    small_index(p, "pair", 1e6)
}

fn dom_route(p: &ParamPoint) -> Result<(), String> {
    small_index(p, "route", 2.0)
}

fn dom_eq25(p: &ParamPoint) -> Result<(), String> {
    dom_x_unit_open(p)?;
    dom_route(p)
}

fn reach_none(_: &ParamPoint) -> f64 {
    0.0
}

fn reach_one(_: &ParamPoint) -> f64 {
    1.0
}

fn reach_x(p: &ParamPoint) -> f64 {
    p.get("x").unwrap_or(f64::NAN)
}

// ---- shared pieces ---------------------------------------------------------

fn x_of(p: &ParamPoint) -> f64 {
    p.get("x").unwrap_or(f64::NAN)
}

fn func(p: &ParamPoint) -> Result<TestFunction, Inconclusive> {
    p.function.ok_or_else(|| Inconclusive {
        best: None,
        reason: "missing test function".into(),
    })
}

fn route(p: &ParamPoint) -> u32 {
    p.get("route").unwrap_or(0.0) as u32
}

fn finite(r: Result<f64, SpecFunError>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// `K` from the complementary modulus; NaN outside `(0, 1]`.
fn k_from_complement(kp: f64) -> f64 {
    Modulus::from_complement(kp.min(1.0)).map_or(f64::NAN, ellip_k)
}

fn k_of(k: f64) -> f64 {
    Modulus::new(k).map_or(f64::NAN, ellip_k)
}

fn unit(t: Transform) -> AxisSpec {
    AxisSpec::new(0.0, 1.0, t).expect("unit axis")
}

fn quad1<F: Fn(Abscissa) -> f64>(f: F, axis: AxisSpec, plan: &Plan) -> SideResult {
    Ok(Side::quad(integrate_1d_ends(f, &axis, &plan.policy)?))
}

/// `∫₀¹ t g(t) / √(1 − t²) dt`
fn arcsine_moment<G: Fn(f64) -> f64>(g: G, plan: &Plan) -> SideResult {
    quad1(
        |p| p.x * g(p.x) / (p.to_hi * (1.0 + p.x)).sqrt(),
        unit(Transform::InverseSqrtEndpoint),
        plan,
    )
}

/// Double integral over two angle axes, optionally with the integration
/// order swapped.
pub(crate) fn double_angle<G>(g: G, axis: AxisSpec, policy: &QuadPolicy, swap: bool) -> Result<QuadResult, crate::quadrature::QuadError>
where
    G: Fn(Abscissa, Abscissa) -> f64,
{
    integrate_nd_ends(
        |ps| if swap { g(ps[1], ps[0]) } else { g(ps[0], ps[1]) },
        &[axis, axis],
        policy,
    )
}

/// `[0, π/2]` with both ends flattened, for integrands that are singular on
/// the boundary of the angle square.
fn smoothed_quarter_turn() -> AxisSpec {
    AxisSpec::new(0.0, FRAC_PI_2, Transform::LogEndpoint).expect("quarter turn")
}

fn gap_product(a: Abscissa, b: Abscissa) -> (f64, f64) {
    sin_product(&[a, b])
}

// ---- EQ1–EQ7 ---------------------------------------------------------------

fn eq1_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let x = x_of(p);
    arcsine_moment(|t| finite(bessel_i0(x * t)), plan)
}

fn eq1_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    let x = x_of(p);
    Ok(Side::exact(x.sinh() / x))
}

fn eq3_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let x = x_of(p);
    arcsine_moment(|t| finite(struve_l0(x * t)), plan)
}

fn eq3_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    let x = x_of(p);
    // cosh x − 1 = 2 sinh²(x/2)
    let s = (0.5 * x).sinh();
    Ok(Side::exact(2.0 * s * s / x))
}

fn eq4_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let x = x_of(p);
    arcsine_moment(|t| finite(i0_minus_l0(x * t)), plan)
}

fn eq4_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    let x = x_of(p);
    Ok(Side::exact(-(-x).exp_m1() / x))
}

fn eq5_lhs(p: &ParamPoint, _: &Plan) -> SideResult {
    Ok(Side::exact(FRAC_PI_2 * i0_minus_l0(x_of(p))?))
}

fn eq5_rhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let x = x_of(p);
    quad1(
        |q| (-x * q.x).exp() / (q.to_hi * (1.0 + q.x)).sqrt(),
        unit(Transform::InverseSqrtEndpoint),
        plan,
    )
}

fn eq7_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let i = SinProductIntegral::new(2, x_of(p), TestFunction::ExpNeg)?;
    Ok(Side::quad(i.naive(&plan.policy)?))
}

fn eq7_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    let x = x_of(p);
    Ok(Side::exact(-FRAC_PI_2 / x * (-x).exp_m1()))
}

// ---- EQ9, EQ11 -------------------------------------------------------------

fn eq9_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let i = SinProductIntegral::new(2, x_of(p), func(p)?)?;
    Ok(Side::quad(i.naive(&plan.policy)?))
}

fn eq9_rhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let i = SinProductIntegral::new(2, x_of(p), func(p)?)?;
    match i.closed_form() {
        Some(v) => Ok(Side::exact(v)),
        None => Ok(Side::quad(reduce(&i)?.evaluate(&plan.policy)?)),
    }
}

fn eq11_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let i = SinProductIntegral::new(3, x_of(p), func(p)?)?;
    Ok(Side::quad(i.naive(&plan.policy)?))
}

fn eq11_rhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let i = SinProductIntegral::new(3, x_of(p), func(p)?)?;
    Ok(Side::quad(reduce(&i)?.evaluate(&plan.policy)?))
}

// ---- EQ12_14, EQ15 ---------------------------------------------------------

/// Coefficients `(f, F)` of the `k`-th random quadratic pair for a seed.
pub(crate) fn poly_pair(seed: u64, k: u64) -> ([f64; 3], [f64; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let mut draw = || -> [f64; 3] { std::array::from_fn(|_| rng.random_range(-1.0..=1.0)) };
    let f = draw();
    (f, draw())
}

fn horner(c: &[f64; 3], t: f64) -> f64 {
    c[0] + t * (c[1] + t * c[2])
}

fn pair_of(p: &ParamPoint, plan: &Plan) -> ([f64; 3], [f64; 3]) {
    poly_pair(plan.seed, p.get("pair").unwrap_or(0.0) as u64)
}

fn eq12_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let (f, g) = pair_of(p, plan);
    Ok(Side::quad(s_square(|u| horner(&f, u), |v| horner(&g, v), &plan.policy)?))
}

fn eq14_rhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let (f, g) = pair_of(p, plan);
    Ok(Side::quad(s_region(|u| horner(&f, u), |v| horner(&g, v), &plan.policy)?))
}

/// `K((1 − v)/(1 + v)) / (1 + v)` for `v ∈ (0, 1]`.
///
/// The complementary modulus is `2√v/(1 + v)`, so no cancellation occurs as
/// the modulus approaches one.
pub fn kernel_eq15(v: f64) -> Result<f64, SpecFunError> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(SpecFunError::Domain { func: "kernel_eq15", arg: v });
    }
    let m = Modulus::from_complement((2.0 * v.sqrt() / (1.0 + v)).min(1.0))?;
    Ok(ellip_k(m) / (1.0 + v))
}

/// `∫_{2√v}^{1+v} du / √((u² − 4v)((1 + v)² − u²))` by double-exponential
/// quadrature on the original interval.
fn eq15_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let v = p.get("v").unwrap_or(f64::NAN);
    let rv = v.sqrt();
    let axis = AxisSpec::new(2.0 * rv, 1.0 + v, Transform::DoubleExponential)?;
    Ok(Side::quad(integrate_1d_ends(
        |q| 1.0 / (q.from_lo * (q.x + 2.0 * rv) * q.to_hi * (1.0 + v + q.x)).sqrt(),
        &axis,
        &plan.policy,
    )?))
}

fn eq15_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    Ok(Side::exact(kernel_eq15(p.get("v").unwrap_or(f64::NAN))?))
}

// ---- EQ16, EQ19, EQ26, EQ27 ------------------------------------------------

fn eq16_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let f = func(p)?;
    quad1(
        |q| {
            let t = q.x;
            let k = k_from_complement((q.to_hi * (1.0 + t)).sqrt());
            // (1 − t)/(1 + t) and its gap 2t/(1 + t)
            k * f.eval_c(q.to_hi / (1.0 + t), 2.0 * t / (1.0 + t)) / (1.0 + t)
        },
        unit(Transform::LogEndpoint),
        plan,
    )
}

pub(crate) fn eq16_double(f: TestFunction, policy: &QuadPolicy, swap: bool) -> Result<QuadResult, crate::quadrature::QuadError> {
    double_angle(
        |a, b| {
            let (q, gap) = gap_product(a, b);
            f.eval_c(q, gap)
        },
        smoothed_quarter_turn(),
        policy,
        swap,
    )
}

fn eq16_rhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    Ok(Side::quad(eq16_double(func(p)?, &plan.policy.tightened(2.0), false)?).scaled(0.5))
}

pub(crate) fn eq19_double(policy: &QuadPolicy, swap: bool) -> Result<QuadResult, crate::quadrature::QuadError> {
    double_angle(
        |a, b| {
            let (q, _) = gap_product(a, b);
            if q <= 0.0 {
                // K → ∞ as the product vanishes.
                return 0.0;
            }
            1.0 / k_from_complement(2.0 * q.sqrt() / (1.0 + q))
        },
        AxisSpec::quarter_turn(),
        policy,
        swap,
    )
}

fn eq19_lhs(_: &ParamPoint, plan: &Plan) -> SideResult {
    Ok(Side::quad(eq19_double(&plan.policy, false)?))
}

fn eq19_rhs(_: &ParamPoint, _: &Plan) -> SideResult {
    Ok(Side::exact(2.0 * LN_2))
}

fn eq26_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let f = func(p)?;
    quad1(
        |q| k_from_complement((q.to_hi * (1.0 + q.x)).sqrt()) * f.eval_c(q.x, q.to_hi),
        unit(Transform::LogEndpoint),
        plan,
    )
}

pub(crate) fn eq26_double(f: TestFunction, policy: &QuadPolicy, swap: bool) -> Result<QuadResult, crate::quadrature::QuadError> {
    double_angle(
        |a, b| {
            let (q, gap) = gap_product(a, b);
            let d = 1.0 + q;
            f.eval_c(gap / d, 2.0 * q / d) / d
        },
        smoothed_quarter_turn(),
        policy,
        swap,
    )
}

fn eq26_rhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    Ok(Side::quad(eq26_double(func(p)?, &plan.policy, false)?))
}

pub(crate) fn eq27_double(policy: &QuadPolicy, swap: bool) -> Result<QuadResult, crate::quadrature::QuadError> {
    let axis = AxisSpec::new(0.0, FRAC_PI_2, Transform::LogEndpoint)?;
    double_angle(
        |a, b| {
            let q = a.x.sin() * b.x.sin();
            1.0 / (q * (1.0 + q)).sqrt()
        },
        axis,
        policy,
        swap,
    )
}

fn eq27_lhs(_: &ParamPoint, plan: &Plan) -> SideResult {
    Ok(Side::quad(eq27_double(&plan.policy, false)?))
}

fn eq27_rhs(_: &ParamPoint, _: &Plan) -> SideResult {
    let k = 2f64.sqrt() - 1.0;
    Ok(Side::exact(4.0 * k * k_of(k) * ellip_k_comp(k)?))
}

// ---- EQ20–EQ23 -------------------------------------------------------------

fn eq20_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let a = p.get("a").unwrap_or(f64::NAN);
    quad1(
        |q| {
            let s = a * q.x.sin();
            k_from_complement(((1.0 - s) * (1.0 + s)).sqrt())
        },
        AxisSpec::quarter_turn(),
        plan,
    )
}

/// `k² = (1 − √(1 − a²))/2` written without cancellation.
fn half_angle_modulus(a: f64) -> f64 {
    let c = ((1.0 - a) * (1.0 + a)).sqrt();
    (a * a / (2.0 * (1.0 + c))).sqrt()
}

fn eq20_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    let a = p.get("a").unwrap_or(f64::NAN);
    let k = ellip_k(Modulus::new(half_angle_modulus(a))?);
    Ok(Side::exact(k * k))
}

fn eq21_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let x = x_of(p);
    quad1(|q| k_of(x * q.x), unit(Transform::None), plan)
}

fn eq21_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    Ok(Side::exact(FRAC_PI_2 * hyp3f2_half(x_of(p))?))
}

pub(crate) fn eq22_integral(x: f64, policy: &QuadPolicy) -> Result<QuadResult, crate::quadrature::QuadError> {
    integrate_1d_ends(
        |q| {
            let k = k_of(half_angle_modulus(x * q.x));
            q.x * k * k / (q.to_hi * (1.0 + q.x)).sqrt()
        },
        &unit(Transform::InverseSqrtEndpoint),
        policy,
    )
}

fn eq22_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    Ok(Side::quad(eq22_integral(x_of(p), &plan.policy)?))
}

fn eq22_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    Ok(Side::exact(0.25 * PI * PI * hyp3f2_half(x_of(p))?))
}

pub(crate) fn eq23_integral(policy: &QuadPolicy) -> Result<QuadResult, crate::quadrature::QuadError> {
    integrate_1d_ends(
        |q| {
            let k = k_of(q.x);
            q.x * k * k
        },
        &AxisSpec::plain(0.0, FRAC_1_SQRT_2),
        policy,
    )
}

fn eq23_lhs(_: &ParamPoint, plan: &Plan) -> SideResult {
    Ok(Side::quad(eq23_integral(&plan.policy)?))
}

fn eq23_rhs(_: &ParamPoint, _: &Plan) -> SideResult {
    Ok(Side::exact(0.25 * PI * catalan_const()))
}

// ---- EQ24, EQ25 ------------------------------------------------------------

const ANGLE_BOX: [(f64, f64); 3] = [(0.0, FRAC_PI_2); 3];

fn monte_carlo_side<F>(f: F, plan: &Plan) -> SideResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    Ok(Side::quad(monte_carlo_nd(f, &ANGLE_BOX, plan.mc_samples, plan.seed)?))
}

fn eq24_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let i = SinProductIntegral::new(3, 1.0, TestFunction::InvSqrtOneMinusT2)?;
    match route(p) {
        0 => Ok(Side::quad(i.naive(&plan.policy)?)),
        1 => Ok(Side::quad(reduce(&i)?.evaluate(&plan.policy)?)),
        _ => monte_carlo_side(
            |t| {
                let q = t[0].sin() * t[1].sin() * t[2].sin();
                t[0].sin() / ((1.0 - q) * (1.0 + q)).sqrt()
            },
            plan,
        ),
    }
}

fn eq24_rhs(_: &ParamPoint, _: &Plan) -> SideResult {
    Ok(Side::exact(PI * catalan_const()))
}

fn eq25_lhs(p: &ParamPoint, plan: &Plan) -> SideResult {
    let x = x_of(p);
    let i = SinProductIntegral::new(3, x, TestFunction::OneOverOneMinusT)?;
    match route(p) {
        0 => Ok(Side::quad(reduce(&i)?.evaluate(&plan.policy)?)),
        1 => Ok(Side::quad(i.naive(&plan.policy)?)),
        _ => monte_carlo_side(
            |t| t[0].sin() / (1.0 - x * t[0].sin() * t[1].sin() * t[2].sin()),
            plan,
        ),
    }
}

fn eq25_rhs(p: &ParamPoint, _: &Plan) -> SideResult {
    Ok(Side::exact(watson_closed_form(x_of(p))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{evaluate_identity, EvalContext, Verdict};
    use crate::reduction::naive_with;

    fn policy() -> QuadPolicy {
        QuadPolicy::with_tol(1e-10)
    }

    #[test]
    fn ids_are_unique_and_grids_admissible() {
        let mut ids: Vec<&str> = registry().iter().map(|i| i.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), 19);
        for i in registry() {
            let pts = i.points(&i.default_grid()).unwrap();
            assert!(!pts.is_empty(), "{}", i.id);
        }
    }

    #[test]
    fn kernel_eq15_limits_and_domain() {
        assert!((kernel_eq15(1.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!(kernel_eq15(0.0).is_err());
        assert!(kernel_eq15(1.5).is_err());
    }

    #[test]
    fn kernel_eq15_matches_direct_quadrature() {
        for v in [1e-3, 0.1, 0.5, 1.0 - 1e-3] {
            let p = ParamPoint::empty().with("v", v);
            let r = evaluate_identity("EQ15", &p, &EvalContext::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
    }

    #[test]
    fn eq9_with_constant_function_is_half_pi() {
        for x in [0.3, 4.0] {
            let p = ParamPoint::empty().with("x", x).with_function(TestFunction::Power(0.0));
            let r = evaluate_identity("EQ9", &p, &EvalContext::default()).unwrap();
            assert!((r.lhs - FRAC_PI_2).abs() < 1e-10);
            assert!((r.rhs - FRAC_PI_2).abs() < 1e-15);
        }
    }

    #[test]
    fn eq9_scaling_consistency() {
        // Both sides for F at scale x equal those for F(x·) at scale 1.
        let x = 0.7;
        for f in [TestFunction::ExpNeg, TestFunction::Cosine, TestFunction::EllipticK] {
            let direct = naive_with(2, x, 0, None, |t, g| f.eval_c(t, g), &policy()).unwrap().value;
            let rescaled = naive_with(2, 1.0, 0, None, |t, g| f.eval_c(x * t, (1.0 - x) + x * g), &policy()).unwrap().value;
            assert!((direct - rescaled).abs() < 1e-9, "{f}");
        }
    }

    #[test]
    fn double_integrals_symmetric_under_swap() {
        let p = QuadPolicy::with_tol(1e-9);
        let close = |a: QuadResult, b: QuadResult| (a.value - b.value).abs() < 1e-8;
        assert!(close(eq19_double(&p, false).unwrap(), eq19_double(&p, true).unwrap()));
        assert!(close(eq27_double(&p, false).unwrap(), eq27_double(&p, true).unwrap()));
        for f in [TestFunction::ExpNeg, TestFunction::EllipticK, TestFunction::Power(2.5)] {
            assert!(close(eq16_double(f, &p, false).unwrap(), eq16_double(f, &p, true).unwrap()));
            assert!(close(eq26_double(f, &p, false).unwrap(), eq26_double(f, &p, true).unwrap()));
        }
    }

    #[test]
    fn eq22_at_unit_argument_is_four_times_eq23() {
        let p = QuadPolicy::with_tol(1e-11);
        let lhs22 = eq22_integral(1.0, &p).unwrap().value;
        let lhs23 = eq23_integral(&p).unwrap().value;
        assert!((lhs22 - 4.0 * lhs23).abs() < 1e-9, "{lhs22} vs {}", 4.0 * lhs23);
        assert!((lhs22 - PI * catalan_const()).abs() < 1e-9);
    }

    #[test]
    fn printed_eq21_prefactor_is_off_by_two() {
        let p = ParamPoint::empty().with("x", 0.3);
        let r = evaluate_identity("EQ21", &p, &EvalContext::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let printed = 0.25 * PI * hyp3f2_half(0.3).unwrap();
        assert!((r.lhs / printed - 2.0).abs() < 1e-9);
        assert!(r.note.unwrap().contains("π/2"));
    }

    #[test]
    fn poly_pairs_are_seeded_and_bounded() {
        assert_eq!(poly_pair(0, 3), poly_pair(0, 3));
        assert_ne!(poly_pair(0, 3), poly_pair(0, 4));
        assert_ne!(poly_pair(0, 3), poly_pair(1, 3));
        let (f, g) = poly_pair(42, 0);
        assert!(f.iter().chain(&g).all(|c| c.abs() <= 1.0));
    }

    #[test]
    fn half_angle_modulus_is_stable() {
        let a: f64 = 1e-9;
        // k ≈ a/2 for small a
        assert!((half_angle_modulus(a) / (0.5 * a) - 1.0).abs() < 1e-15);
        let a: f64 = 0.6;
        let naive = ((1.0 - (1.0 - a * a).sqrt()) / 2.0).sqrt();
        assert!((half_angle_modulus(a) - naive).abs() < 1e-15);
    }
}
