use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bochner::{
    antiholo_4frame_defect, generalized_bochner, nk_flat_form_3_4, rk_bochner, DEFAULT_SAMPLES,
};
use crate::charts::{curvature_at, identities_at, make_chart, Chart, FdConfig, ModelSpec};
use crate::curvature::{
    ahsc, complex_space_form_tensor, direct_sum, identity_defects, ricci_family, space_form_tensor,
    validate_point, HermitianPoint,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::multilinear::CurvTensor;
use crate::tol::Tolerances;

use super::report::{Check, Expect, Params, ScenarioReport};

/// Scenario ids in the order `all` runs them.
pub const SCENARIOS: [&str; 11] = [
    "thm21_forward",
    "thm21_converse",
    "cor22",
    "thm31_s6",
    "thm31_product",
    "thm31_counterexample",
    "thm32_models",
    "cor33_spotcheck",
    "identities_s6",
    "identities_cp",
    "bianchi",
];

/// Named residual read off a per-point record.
type Field<T> = (&'static str, &'static str, fn(&T) -> f64);

const CHART_POINTS: usize = 3;
const IDENTITY_POINTS: usize = 5;
const EPSILONS: [f64; 3] = [1e-3, 1e-2, 1e-1];

/// Scenario inputs after defaults are applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioInput {
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub c: f64,
    pub mu: f64,
    pub seed: u64,
    pub h: f64,
}

impl Default for ScenarioInput {
    fn default() -> Self {
        let p = Params::default();
        Self {
            m: None,
            k: None,
            c: p.c,
            mu: p.mu,
            seed: p.seed,
            h: p.h,
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

impl ScenarioInput {
    fn check(&self) -> Result<()> {
        if let Some(m) = self.m {
            if !(2..=6).contains(&m) {
                return Err(invalid(format!("m = {m} outside 2..=6")));
            }
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(invalid(format!("c = {} must be positive", self.c)));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(invalid(format!("mu = {} must be positive", self.mu)));
        }
        if !(self.h > 0.0 && self.h <= 0.05) {
            return Err(invalid(format!("h = {} outside (0, 0.05]", self.h)));
        }
        Ok(())
    }

    /// `m`, or `default` when unset; `fixed` rejects any other value.
    fn m_or(&self, default: usize, fixed: bool) -> Result<usize> {
        match self.m {
            Some(m) if fixed && m != default => Err(invalid(format!(
                "this scenario fixes m = {default}, got {m}"
            ))),
            Some(m) => Ok(m),
            None => Ok(default),
        }
    }

    fn split(&self, m: usize) -> Result<usize> {
        let k = self.k.unwrap_or(1);
        if k == 0 || k >= m {
            return Err(invalid(format!("k = {k} must satisfy 1 <= k < m = {m}")));
        }
        Ok(k)
    }

    fn params(&self, m: usize) -> Params {
        Params {
            m,
            k: self.k,
            c: self.c,
            mu: self.mu,
            seed: self.seed,
            h: self.h,
        }
    }
}

struct Ctx {
    input: ScenarioInput,
    tol: Tolerances,
    fd: FdConfig,
}

impl Ctx {
    fn alg(&self, scale: f64) -> f64 {
        self.tol.tol_alg * scale.max(1.0)
    }
}

fn csf(m: usize, mu: f64) -> (HermitianPoint, CurvTensor) {
    let p = HermitianPoint::standard(m);
    let r = complex_space_form_tensor(&p, mu);
    (p, r)
}

fn product(factors: &[(HermitianPoint, CurvTensor)]) -> Result<(HermitianPoint, CurvTensor)> {
    let mut acc = factors[0].clone();
    for (p, r) in &factors[1..] {
        acc = direct_sum(&acc.0, &acc.1, p, r)?;
    }
    Ok(acc)
}

fn b_star_norm(pr: &(HermitianPoint, CurvTensor)) -> Result<f64> {
    Ok(generalized_bochner(&pr.0, &pr.1)?.norm)
}

const ANCHOR_B_STAR_PRODUCT: &str =
    "B* = 0 for a complex space form or a product of two with holomorphic curvatures mu and -mu";
const ANCHOR_B_STAR_CONVERSE: &str =
    "B* != 0 once the holomorphic curvatures of the product factors are not opposite";
const ANCHOR_B_RK: &str = "B = 0 for the RK model spaces";

fn thm21_forward(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, false)?;
    let mu = ctx.input.mu;
    let tol = ctx.alg(mu);
    let mut checks = Vec::new();
    for sign in [1.0, -1.0] {
        let n = b_star_norm(&csf(m, sign * mu))?;
        checks.push(Check::new(
            format!("b_star_norm[csf({m},{})]", sign * mu),
            ANCHOR_B_STAR_PRODUCT,
            n,
            tol,
            Expect::Below,
        ));
    }
    let splits: Vec<usize> = match ctx.input.k {
        Some(_) => vec![ctx.input.split(m)?],
        None => (1..m).collect(),
    };
    for k in splits {
        let pr = product(&[csf(k, mu), csf(m - k, -mu)])?;
        let n = b_star_norm(&pr)?;
        checks.push(Check::new(
            format!("b_star_norm[k={k}]"),
            ANCHOR_B_STAR_PRODUCT,
            n,
            tol,
            Expect::Below,
        ));
    }
    Ok(ScenarioReport::new(
        "thm21_forward",
        ctx.input.params(m),
        checks,
    ))
}

fn thm21_converse(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, false)?;
    let k = ctx.input.split(m)?;
    let mu = ctx.input.mu;
    let tol = ctx.alg(mu);
    let mut checks = vec![Check::new(
        "b_star_norm[eps=0]",
        ANCHOR_B_STAR_PRODUCT,
        b_star_norm(&product(&[csf(k, mu), csf(m - k, -mu)])?)?,
        tol,
        Expect::Below,
    )];
    let mut norms = Vec::new();
    for eps in EPSILONS {
        let n = b_star_norm(&product(&[csf(k, mu), csf(m - k, -mu + eps)])?)?;
        checks.push(Check::new(
            format!("b_star_norm[eps={eps:e}]"),
            ANCHOR_B_STAR_CONVERSE,
            n,
            tol,
            Expect::Above,
        ));
        norms.push(n);
    }
    let growth = norms
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::new(
        "b_star_growth",
        "norm(B*) increases strictly with the perturbation",
        growth,
        0.0,
        Expect::Above,
    ));
    Ok(ScenarioReport::new(
        "thm21_converse",
        ctx.input.params(m),
        checks,
    ))
}

fn cor22(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, false)?;
    if m < 3 {
        return Err(invalid("cor22 needs m >= 3 for three factors".into()));
    }
    let mu = ctx.input.mu;
    let tol = ctx.alg(mu);
    let dims = [1, 1, m - 2];
    let cases: [([f64; 3], Expect); 4] = [
        ([0.0, 0.0, 0.0], Expect::Below),
        ([mu, -mu, 0.0], Expect::Above),
        ([0.0, 0.0, mu], Expect::Above),
        ([mu, mu, -mu], Expect::Above),
    ];
    let anchor = "B* of a product of three complex space forms vanishes iff all holomorphic sectional curvatures vanish";
    let mut checks = Vec::new();
    for (mus, expect) in cases {
        let pr = product(&[
            csf(dims[0], mus[0]),
            csf(dims[1], mus[1]),
            csf(dims[2], mus[2]),
        ])?;
        let n = b_star_norm(&pr)?;
        checks.push(Check::new(
            format!("b_star_norm[hsc=({},{},{})]", mus[0], mus[1], mus[2]),
            anchor,
            n,
            tol,
            expect,
        ));
    }
    Ok(ScenarioReport::new("cor22", ctx.input.params(m), checks))
}

/// Curvature the chart should produce at a point, assembled factor by factor.
fn expected_curvature(spec: &ModelSpec, p: &HermitianPoint) -> Result<CurvTensor> {
    Ok(match *spec {
        ModelSpec::Flat { m } => CurvTensor::zeros(2 * m),
        ModelSpec::Sphere6 { c } => space_form_tensor(p, c),
        ModelSpec::ComplexProjective { mu, .. } | ModelSpec::ComplexHyperbolic { mu, .. } => {
            complex_space_form_tensor(p, mu)
        }
        ModelSpec::Product(ref a, ref b) => {
            let (n1, n2) = (a.dim(), b.dim());
            let sub = |off: usize, n: usize| -> Result<HermitianPoint> {
                let g: DMatrix<f64> = p.g().view((off, off), (n, n)).into_owned();
                let j: DMatrix<f64> = p.j().view((off, off), (n, n)).into_owned();
                Ok(validate_point(g, j, p.tol())?.with_tol(p.tol()))
            };
            let (pa, pb) = (sub(0, n1)?, sub(n1, n2)?);
            let ra = expected_curvature(a, &pa)?;
            let rb = expected_curvature(b, &pb)?;
            direct_sum(&pa, &ra, &pb, &rb)?.1
        }
    })
}

fn contains_sphere(spec: &ModelSpec) -> bool {
    spec.factors()
        .iter()
        .any(|f| matches!(f, ModelSpec::Sphere6 { .. }))
}

/// Per-point chart quantities, already relative to the chart scale.
#[derive(Debug, Clone, Copy)]
struct ChartPoint {
    curvature_rel: f64,
    b_norm: Option<f64>,
    b_star_norm: f64,
    ids: crate::charts::PointIdentities,
}

fn chart_point(
    chart: &dyn Chart,
    spec: &ModelSpec,
    x: &[f64],
    fd: &FdConfig,
) -> Result<ChartPoint> {
    let (p, r) = curvature_at(chart, x, fd)?;
    let want = expected_curvature(spec, &p)?;
    let scale = if spec.scale() > 0.0 {
        spec.scale()
    } else {
        1.0
    };
    let curvature_rel = (&r - &want).max_abs() / want.max_abs().max(scale);
    let b_norm = if p.m() >= 3 {
        Some(rk_bochner(&p, &r)?.norm / scale)
    } else {
        None
    };
    let b_star_norm = generalized_bochner(&p, &r)?.norm / scale;
    let ids = identities_at(chart, x, fd)?;
    Ok(ChartPoint {
        curvature_rel,
        b_norm,
        b_star_norm,
        ids,
    })
}

/// What the chart suite asserts about quantities that only vanish on some models.
#[derive(Debug, Clone, Copy)]
struct ChartExpect {
    /// For `S − S' − (τ−τ')/(2m) g` and `τ − 5τ'`; `None` reports them as absent.
    six_dim: Option<Expect>,
    b_star: Option<Expect>,
}

fn chart_checks(
    ctx: &Ctx,
    spec: &ModelSpec,
    points: usize,
    expect: ChartExpect,
) -> Result<Vec<Check>> {
    let chart = make_chart(spec)?;
    let xs = chart.sample_points(ctx.input.seed, points);
    let fd = &ctx.fd;
    let per: Vec<ChartPoint> = exec::try_map(&xs, |x| chart_point(&chart, spec, x, fd))?;
    let max = |f: &dyn Fn(&ChartPoint) -> f64| exec::max_of(&per.iter().map(f).collect::<Vec<_>>());
    let min = |f: &dyn Fn(&ChartPoint) -> f64| per.iter().map(f).fold(f64::INFINITY, f64::min);
    let (t1, t2) = (ctx.tol.tol_fd1, ctx.tol.tol_fd2);
    let tag = |name: &str| format!("chart_{name}[{spec}]");
    let mut out = vec![Check::new(
        tag("curvature_rel"),
        "finite-difference curvature equals the model curvature",
        max(&|p| p.curvature_rel),
        t2,
        Expect::Below,
    )];
    out.push(Check::new(
        tag("nk"),
        "(nabla_X J)X = 0",
        max(&|p| p.ids.nk.nk),
        t1,
        Expect::Below,
    ));
    if spec.is_kahler() {
        out.push(Check::new(
            tag("nabla_j_norm"),
            "nabla J = 0 on Kaehler models",
            max(&|p| p.ids.nk.nabla_j_norm),
            t1,
            Expect::Below,
        ));
    } else {
        out.push(Check::new(
            tag("nabla_j_max"),
            "nabla J != 0 on the strict nearly Kaehler factor",
            min(&|p| p.ids.nk.nabla_j_max),
            0.1,
            Expect::Above,
        ));
    }
    let nk_ids: [Field<ChartPoint>; 4] = [
        (
            "id_1_1",
            "R(X,Y,Z,U) - R(X,Y,JZ,JU) = -g((nabla_X J)Y, (nabla_Z J)U)",
            |p| p.ids.nk.id_1_1,
        ),
        (
            "id_1_2",
            "2 g((nabla_X(nabla_Y J))Z, U) = cyclic sum over (Y,U,Z) of R(X,JY,U,Z)",
            |p| p.ids.nk.id_1_2,
        ),
        (
            "id_1_3",
            "2 nabla_X(S - S') = (S - S')((nabla_X J)., J.) + (S - S')(J., (nabla_X J).)",
            |p| p.ids.nk.id_1_3,
        ),
        ("id_1_5", "<S - S', S - 5S'> = 0", |p| p.ids.nk.id_1_5),
    ];
    for (name, anchor, f) in nk_ids {
        out.push(Check::new(
            tag(name),
            anchor,
            max(&|p| f(p)),
            t2,
            Expect::Below,
        ));
    }
    let six: [Field<ChartPoint>; 2] = [
        ("id_3_2", "S - S' = (tau - tau')/(2m) g", |p| {
            p.ids.nk.id_3_2
        }),
        ("id_3_3", "tau = 5 tau'", |p| p.ids.nk.id_3_3),
    ];
    for (name, anchor, f) in six {
        out.push(match expect.six_dim {
            Some(e) => Check::new(tag(name), anchor, max(&|p| f(p)), t2, e),
            None => Check::absent(tag(name), anchor, t2, Expect::Below),
        });
    }
    let bianchi: [Field<ChartPoint>; 3] = [
        ("id_1_4", "tau - tau' is constant", |p| p.ids.bianchi.id_1_4),
        ("id_1_6", "contracted second Bianchi identity for R", |p| {
            p.ids.bianchi.id_1_6
        }),
        ("id_1_7", "div S = d tau / 2", |p| p.ids.bianchi.id_1_7),
    ];
    for (name, anchor, f) in bianchi {
        out.push(Check::new(
            tag(name),
            anchor,
            max(&|p| f(p)),
            t2,
            Expect::Below,
        ));
    }
    if per.iter().all(|p| p.b_norm.is_some()) {
        out.push(Check::new(
            tag("b_norm"),
            ANCHOR_B_RK,
            max(&|p| p.b_norm.unwrap_or(0.0)),
            t2,
            Expect::Below,
        ));
    }
    if let Some(e) = expect.b_star {
        out.push(Check::new(
            tag("b_star_norm"),
            ANCHOR_B_STAR_PRODUCT,
            max(&|p| p.b_star_norm),
            t2,
            e,
        ));
    }
    Ok(out)
}

fn sphere_algebraic_checks(ctx: &Ctx, c: f64) -> Result<Vec<Check>> {
    let (p, r) = ModelSpec::Sphere6 { c }.algebraic()?;
    let tol = ctx.alg(c);
    let fam = ricci_family(&p, &r)?;
    let ids = identity_defects(&p, &r)?;
    let flat_form = nk_flat_form_3_4(&p, &fam.s, fam.tau)?;
    Ok(vec![
        Check::new("b_norm", ANCHOR_B_RK, rk_bochner(&p, &r)?.norm, tol, Expect::Below),
        Check::new("b_star_norm", ANCHOR_B_STAR_PRODUCT, generalized_bochner(&p, &r)?.norm, tol, Expect::Below),
        Check::new("tau", "tau = 30c", (fam.tau - 30.0 * c).abs(), tol, Expect::Below),
        Check::new("tau_prime", "tau' = 6c", (fam.tau_prime - 6.0 * c).abs(), tol, Expect::Below),
        Check::new("id_3_3", "tau = 5 tau'", (fam.tau - 5.0 * fam.tau_prime).abs(), tol, Expect::Below),
        Check::new("star_relation", "4S* = S + 3S'", ids.star_relation, tol, Expect::Below),
        Check::new("id_1_5", "<S - S', S - 5S'> = 0", ids.id_1_5, tol * c, Expect::Below),
        Check::new(
            "nk_flat_form",
            "R is determined by S and tau on a six-dimensional nearly Kaehler manifold with vanishing B",
            (&flat_form - &r).max_abs(),
            tol,
            Expect::Below,
        ),
    ])
}

fn thm31_s6(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, true)?;
    let c = ctx.input.c;
    let mut checks = sphere_algebraic_checks(ctx, c)?;
    checks.extend(chart_checks(
        ctx,
        &ModelSpec::Sphere6 { c },
        CHART_POINTS,
        ChartExpect {
            six_dim: Some(Expect::Below),
            b_star: Some(Expect::Below),
        },
    )?);
    Ok(ScenarioReport::new("thm31_s6", ctx.input.params(m), checks))
}

fn cd_times_s6(m1: usize, c: f64) -> ModelSpec {
    ModelSpec::product(
        ModelSpec::ComplexHyperbolic { m: m1, mu: -c },
        ModelSpec::Sphere6 { c },
    )
}

fn thm31_product(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(4, true)?;
    let c = ctx.input.c;
    let spec = cd_times_s6(1, c);
    let (p, r) = spec.algebraic()?;
    let tol = ctx.alg(c);
    let anti = antiholo_4frame_defect(&p, &r, DEFAULT_SAMPLES, ctx.input.seed)?.unwrap_or(0.0);
    let mut checks = vec![
        Check::new(
            "b_norm",
            ANCHOR_B_RK,
            rk_bochner(&p, &r)?.norm,
            tol,
            Expect::Below,
        ),
        Check::new(
            "b_star_norm",
            ANCHOR_B_STAR_PRODUCT,
            generalized_bochner(&p, &r)?.norm,
            tol,
            Expect::Below,
        ),
        Check::new(
            "antiholo_4frame",
            "R vanishes on antiholomorphic orthonormal 4-frames",
            anti,
            tol,
            Expect::Below,
        ),
    ];
    checks.extend(chart_checks(
        ctx,
        &spec,
        CHART_POINTS,
        ChartExpect {
            six_dim: Some(Expect::Violated),
            b_star: Some(Expect::Below),
        },
    )?);
    Ok(ScenarioReport::new(
        "thm31_product",
        ctx.input.params(m),
        checks,
    ))
}

fn thm31_counterexample(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(5, false)?;
    if m < 5 {
        return Err(invalid(format!("the counterexample needs m >= 5, got {m}")));
    }
    let c = ctx.input.c;
    let (p, r) = cd_times_s6(m - 3, c).algebraic()?;
    let b = rk_bochner(&p, &r)?.norm;
    let anti = antiholo_4frame_defect(&p, &r, DEFAULT_SAMPLES, ctx.input.seed)?.unwrap_or(0.0);
    let checks = vec![
        Check::new(
            "b_norm",
            "B != 0 for CD^(m-3)(-c) x S6(c) when m > 4",
            b,
            1e-3 * c,
            Expect::Above,
        ),
        Check::new(
            "antiholo_4frame",
            "R does not vanish on all antiholomorphic orthonormal 4-frames",
            anti,
            1e-3 * c,
            Expect::Above,
        ),
    ];
    Ok(ScenarioReport::new(
        "thm31_counterexample",
        ctx.input.params(m),
        checks,
    ))
}

fn thm32_specs(m: usize, k: usize, c: f64, mu: f64) -> Vec<ModelSpec> {
    vec![
        ModelSpec::Flat { m },
        ModelSpec::ComplexHyperbolic { m, mu: -mu },
        ModelSpec::ComplexProjective { m, mu },
        ModelSpec::Sphere6 { c },
        cd_times_s6(1, c),
        ModelSpec::product(
            ModelSpec::ComplexHyperbolic { m: k, mu: -c },
            ModelSpec::ComplexProjective { m: m - k, mu: c },
        ),
    ]
}

fn thm32_models(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, false)?;
    let k = ctx.input.split(m)?;
    let anchor = "B = 0 on the nearly Kaehler models with vanishing Bochner tensor";
    let mut checks = Vec::new();
    for spec in thm32_specs(m, k, ctx.input.c, ctx.input.mu) {
        let (p, r) = spec.algebraic()?;
        let tol = ctx.alg(spec.scale());
        let name = format!("b_norm[{spec}]");
        if p.m() < 3 {
            checks.push(Check::absent(name, anchor, tol, Expect::Below));
            continue;
        }
        checks.push(Check::new(
            name,
            anchor,
            rk_bochner(&p, &r)?.norm,
            tol,
            Expect::Below,
        ));
        let chart = make_chart(&spec)?;
        let fd = &ctx.fd;
        let xs = chart.sample_points(ctx.input.seed, 1);
        let scale = if spec.scale() > 0.0 {
            spec.scale()
        } else {
            1.0
        };
        let norms = exec::try_map(&xs, |x| -> Result<f64> {
            let (p, r) = curvature_at(&chart, x, fd)?;
            Ok(rk_bochner(&p, &r)?.norm / scale)
        })?;
        checks.push(Check::new(
            format!("chart_b_norm[{spec}]"),
            anchor,
            exec::max_of(&norms),
            ctx.tol.tol_fd2,
            Expect::Below,
        ));
    }
    Ok(ScenarioReport::new(
        "thm32_models",
        ctx.input.params(m),
        checks,
    ))
}

/// Spread of the sectional curvature over seeded antiholomorphic planes.
fn ahsc_spread(p: &HermitianPoint, r: &CurvTensor, seed: u64, samples: usize) -> Result<f64> {
    let n = p.dim();
    let g = p.g();
    let values = exec::try_map(
        &(0..samples as u64).collect::<Vec<_>>(),
        |&i| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let x = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let mut y = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let jx = p.j() * &x;
            // Project y off span{x, Jx}, which is g-orthogonal.
            for b in [&x, &jx] {
                let coef = b.dot(&(g * &y)) / b.dot(&(g * b));
                y -= b * coef;
            }
            ahsc(p, r, &x, &y)
        },
    )?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(hi - lo)
}

fn cor33_spotcheck(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, false)?;
    let (c, mu) = (ctx.input.c, ctx.input.mu);
    let p = HermitianPoint::random(m, ctx.input.seed);
    let models: Vec<(String, CurvTensor, f64)> = vec![
        (format!("space_form({c})"), space_form_tensor(&p, c), c),
        (format!("space_form({})", -c), space_form_tensor(&p, -c), c),
        (format!("csf({mu})"), complex_space_form_tensor(&p, mu), mu),
        (
            format!("csf({})", -mu),
            complex_space_form_tensor(&p, -mu),
            mu,
        ),
    ];
    let mut checks = Vec::new();
    for (label, r, scale) in models {
        let tol = ctx.alg(scale);
        checks.push(Check::new(
            format!("ahsc_spread[{label}]"),
            "constant antiholomorphic sectional curvature",
            ahsc_spread(&p, &r, ctx.input.seed, 64)?,
            tol,
            Expect::Below,
        ));
        let anchor = "B = 0 when the antiholomorphic sectional curvature is constant";
        let name = format!("b_norm[{label}]");
        if m < 3 {
            checks.push(Check::absent(name, anchor, tol, Expect::Below));
        } else {
            checks.push(Check::new(
                name,
                anchor,
                rk_bochner(&p, &r)?.norm,
                tol,
                Expect::Below,
            ));
        }
    }
    Ok(ScenarioReport::new(
        "cor33_spotcheck",
        ctx.input.params(m),
        checks,
    ))
}

fn identities_s6(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, true)?;
    let checks = chart_checks(
        ctx,
        &ModelSpec::Sphere6 { c: ctx.input.c },
        IDENTITY_POINTS,
        ChartExpect {
            six_dim: Some(Expect::Below),
            b_star: None,
        },
    )?;
    Ok(ScenarioReport::new(
        "identities_s6",
        ctx.input.params(m),
        checks,
    ))
}

fn identities_cp(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, false)?;
    let spec = ModelSpec::ComplexProjective {
        m,
        mu: ctx.input.mu,
    };
    let checks = chart_checks(
        ctx,
        &spec,
        IDENTITY_POINTS,
        ChartExpect {
            six_dim: None,
            b_star: Some(Expect::Below),
        },
    )?;
    Ok(ScenarioReport::new(
        "identities_cp",
        ctx.input.params(m),
        checks,
    ))
}

fn bianchi(ctx: &Ctx) -> Result<ScenarioReport> {
    let m = ctx.input.m_or(3, false)?;
    let (c, mu) = (ctx.input.c, ctx.input.mu);
    let specs = [
        ModelSpec::Sphere6 { c },
        ModelSpec::ComplexProjective { m, mu },
        ModelSpec::ComplexHyperbolic { m, mu: -mu },
        cd_times_s6(1, c),
    ];
    let mut checks = Vec::new();
    for spec in specs {
        let chart = make_chart(&spec)?;
        let xs = chart.sample_points(ctx.input.seed, CHART_POINTS);
        let fd = &ctx.fd;
        let per = exec::try_map(&xs, |x| crate::charts::bianchi_suite(&chart, x, fd))?;
        let fields: [Field<crate::charts::BianchiDefects>; 3] = [
            ("id_1_4", "tau - tau' is constant", |b| b.id_1_4),
            ("id_1_6", "contracted second Bianchi identity for R", |b| {
                b.id_1_6
            }),
            ("id_1_7", "div S = d tau / 2", |b| b.id_1_7),
        ];
        for (name, anchor, f) in fields {
            let v = exec::max_of(&per.iter().map(f).collect::<Vec<_>>());
            checks.push(Check::new(
                format!("{name}[{spec}]"),
                anchor,
                v,
                ctx.tol.tol_fd2,
                Expect::Below,
            ));
        }
    }
    Ok(ScenarioReport::new("bianchi", ctx.input.params(m), checks))
}

/// Runs one scenario.
pub fn run_scenario(id: &str, input: &ScenarioInput, tol: &Tolerances) -> Result<ScenarioReport> {
    input.check()?;
    let mut fd = FdConfig::from_tolerances(tol, input.seed);
    fd.h = input.h;
    let ctx = Ctx {
        input: *input,
        tol: Tolerances { h: input.h, ..*tol },
        fd,
    };
    match id {
        "thm21_forward" => thm21_forward(&ctx),
        "thm21_converse" => thm21_converse(&ctx),
        "cor22" => cor22(&ctx),
        "thm31_s6" => thm31_s6(&ctx),
        "thm31_product" => thm31_product(&ctx),
        "thm31_counterexample" => thm31_counterexample(&ctx),
        "thm32_models" => thm32_models(&ctx),
        "cor33_spotcheck" => cor33_spotcheck(&ctx),
        "identities_s6" => identities_s6(&ctx),
        "identities_cp" => identities_cp(&ctx),
        "bianchi" => bianchi(&ctx),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

/// Runs every scenario with default parameters, seed and step taken from
/// `input`. Reports come back in [`SCENARIOS`] order.
pub fn run_all(input: &ScenarioInput, tol: &Tolerances) -> Result<Vec<ScenarioReport>> {
    let base = ScenarioInput {
        seed: input.seed,
        h: input.h,
        ..ScenarioInput::default()
    };
    exec::try_map(&SCENARIOS, |id| run_scenario(id, &base, tol))
}

/// Chart identities on an arbitrary model, for the `identities` command.
pub fn identities_report(
    spec: &ModelSpec,
    points: usize,
    input: &ScenarioInput,
    tol: &Tolerances,
) -> Result<ScenarioReport> {
    input.check()?;
    if points == 0 {
        return Err(invalid("need at least one point".into()));
    }
    let mut fd = FdConfig::from_tolerances(tol, input.seed);
    fd.h = input.h;
    let ctx = Ctx {
        input: *input,
        tol: Tolerances { h: input.h, ..*tol },
        fd,
    };
    let six_dim = match spec {
        ModelSpec::Sphere6 { .. } => Some(Expect::Below),
        _ if contains_sphere(spec) => Some(Expect::Violated),
        _ => None,
    };
    let checks = chart_checks(
        &ctx,
        spec,
        points,
        ChartExpect {
            six_dim,
            b_star: None,
        },
    )?;
    Ok(ScenarioReport::new(
        &format!("identities[{spec}]"),
        ctx.input.params(spec.dim() / 2),
        checks,
    ))
}
