use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::{
    complex_space_form_tensor, direct_sum, space_form_tensor, standard_j, HermitianPoint,
};
use crate::error::{Error, Result};
use crate::multilinear::CurvTensor;

use super::octonion;

/// Radius of the coordinate ball the samplers draw from.
pub const SAMPLE_RADIUS: f64 = 0.8;

/// A coordinate chart carrying an almost Hermitian structure.
///
/// Implementors provide smooth `g` and `J` fields; the finite-difference
/// layer derives everything else. Models other than [`ChartModel`] are
/// accepted but come with no accuracy guarantees.
pub trait Chart: Sync {
    fn dim(&self) -> usize;
    fn metric_at(&self, x: &[f64]) -> DMatrix<f64>;
    fn j_at(&self, x: &[f64]) -> DMatrix<f64>;
    /// Distance from `x` to the chart boundary, `f64::INFINITY` if unbounded.
    fn margin_at(&self, x: &[f64]) -> f64;
    /// Seeded interior points at distance ≥ `1 − SAMPLE_RADIUS` from any
    /// boundary.
    fn sample_points(&self, seed: u64, count: usize) -> Vec<Vec<f64>>;
    /// Curvature scale (`|c|` or `|μ|`) used to make residuals relative.
    fn scale(&self) -> f64;
    fn label(&self) -> String;
}

/// The model spaces: flat `CEᵐ`, the round `S⁶(c)` with its octonionic
/// nearly Kähler structure, `CPᵐ(μ)`, `CDᵐ(μ)` and products.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Flat { m: usize },
    Sphere6 { c: f64 },
    ComplexProjective { m: usize, mu: f64 },
    ComplexHyperbolic { m: usize, mu: f64 },
    Product(Box<ModelSpec>, Box<ModelSpec>),
}

impl ModelSpec {
    pub fn product(a: ModelSpec, b: ModelSpec) -> Self {
        ModelSpec::Product(Box::new(a), Box::new(b))
    }

    /// Real dimension.
    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::Flat { m }
            | ModelSpec::ComplexProjective { m, .. }
            | ModelSpec::ComplexHyperbolic { m, .. } => 2 * m,
            ModelSpec::Sphere6 { .. } => 6,
            ModelSpec::Product(a, b) => a.dim() + b.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::Flat { m }
            | ModelSpec::ComplexProjective { m, .. }
            | ModelSpec::ComplexHyperbolic { m, .. }
                if m == 0 =>
            {
                Err(Error::InvalidParameter(format!(
                    "{self}: complex dimension must be positive"
                )))
            }
            ModelSpec::Sphere6 { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidParameter(format!("{self}: S6 needs c > 0")))
            }
            ModelSpec::ComplexProjective { mu, .. } if !(mu > 0.0 && mu.is_finite()) => {
                Err(Error::InvalidParameter(format!("{self}: CP needs mu > 0")))
            }
            ModelSpec::ComplexHyperbolic { mu, .. } if !(mu < 0.0 && mu.is_finite()) => {
                Err(Error::InvalidParameter(format!("{self}: CD needs mu < 0")))
            }
            ModelSpec::Product(ref a, ref b) => {
                a.validate()?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    /// Curvature scale of the model (max over product factors).
    pub fn scale(&self) -> f64 {
        match *self {
            ModelSpec::Flat { .. } => 0.0,
            ModelSpec::Sphere6 { c } => c.abs(),
            ModelSpec::ComplexProjective { mu, .. } | ModelSpec::ComplexHyperbolic { mu, .. } => {
                mu.abs()
            }
            ModelSpec::Product(ref a, ref b) => a.scale().max(b.scale()),
        }
    }

    /// `true` for models whose `J` is parallel.
    pub fn is_kahler(&self) -> bool {
        match self {
            ModelSpec::Sphere6 { .. } => false,
            ModelSpec::Product(a, b) => a.is_kahler() && b.is_kahler(),
            _ => true,
        }
    }

    pub fn factors(&self) -> Vec<&ModelSpec> {
        match self {
            ModelSpec::Product(a, b) => {
                let mut v = a.factors();
                v.extend(b.factors());
                v
            }
            other => vec![other],
        }
    }

    /// The model's curvature at an orthonormal point with the standard `J`.
    pub fn algebraic(&self) -> Result<(HermitianPoint, CurvTensor)> {
        self.validate()?;
        Ok(match *self {
            ModelSpec::Flat { m } => (HermitianPoint::standard(m), CurvTensor::zeros(2 * m)),
            ModelSpec::Sphere6 { c } => {
                let p = HermitianPoint::standard(3);
                let r = space_form_tensor(&p, c);
                (p, r)
            }
            ModelSpec::ComplexProjective { m, mu } | ModelSpec::ComplexHyperbolic { m, mu } => {
                let p = HermitianPoint::standard(m);
                let r = complex_space_form_tensor(&p, mu);
                (p, r)
            }
            ModelSpec::Product(ref a, ref b) => {
                let (pa, ra) = a.algebraic()?;
                let (pb, rb) = b.algebraic()?;
                direct_sum(&pa, &ra, &pb, &rb)?
            }
        })
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Flat { m } => write!(f, "ce({m})"),
            ModelSpec::Sphere6 { c } => write!(f, "s6({})", fmt_num(*c)),
            ModelSpec::ComplexProjective { m, mu } => write!(f, "cp({m},{})", fmt_num(*mu)),
            ModelSpec::ComplexHyperbolic { m, mu } => write!(f, "cd({m},{})", fmt_num(*mu)),
            ModelSpec::Product(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

/// Parameters substituted for bare model names (`s6`, `cp`, ...).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelDefaults {
    /// Complex dimension; `Some` when set explicitly by the caller.
    pub m: Option<usize>,
    pub c: f64,
    pub mu: f64,
}

impl Default for ModelDefaults {
    fn default() -> Self {
        Self {
            m: None,
            c: 1.0,
            mu: 1.0,
        }
    }
}

impl ModelSpec {
    /// Parses `ce(3)`, `s6(1)`, `cp(3,4)`, `cd(1,-1)`, products `a*b` or
    /// `product(a,b)`, and bare names filled from `defaults`.
    pub fn parse_with(text: &str, defaults: ModelDefaults) -> Result<Self> {
        let mut p = Parser {
            s: text.as_bytes(),
            pos: 0,
            defaults,
            src: text,
        };
        let spec = p.product()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl FromStr for ModelSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with(s, ModelDefaults::default())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    defaults: ModelDefaults,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::UnknownModel(format!("{} ({what} at offset {})", self.src, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn product(&mut self) -> Result<ModelSpec> {
        let mut acc = self.term()?;
        while self.eat(b'*') {
            let rhs = self.term()?;
            acc = ModelSpec::product(acc, rhs);
        }
        Ok(acc)
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        self.src[start..self.pos].to_ascii_lowercase()
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && matches!(
                self.s[self.pos],
                b'0'..=b'9' | b'.' | b'-' | b'+' | b'e' | b'E'
            )
        {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map_err(|_| self.err("expected a number"))
    }

    fn args(&mut self) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        if !self.eat(b'(') {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat(b')') {
                return Ok(out);
            }
            if !self.eat(b',') {
                return Err(self.err("expected ',' or ')'"));
            }
        }
    }

    fn complex_dim(&self, v: f64) -> Result<usize> {
        if v >= 1.0 && v.fract() == 0.0 && v <= 64.0 {
            Ok(v as usize)
        } else {
            Err(Error::InvalidParameter(format!("complex dimension {v}")))
        }
    }

    fn term(&mut self) -> Result<ModelSpec> {
        let name = self.ident();
        if name == "product" {
            if !self.eat(b'(') {
                return Err(self.err("expected '('"));
            }
            let a = self.product()?;
            if !self.eat(b',') {
                return Err(self.err("expected ','"));
            }
            let b = self.product()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(ModelSpec::product(a, b));
        }
        let args = self.args()?;
        let d = self.defaults;
        let m_default = d.m.unwrap_or(3);
        match (name.as_str(), args.as_slice()) {
            ("ce", []) => Ok(ModelSpec::Flat { m: m_default }),
            ("ce", [m]) => Ok(ModelSpec::Flat {
                m: self.complex_dim(*m)?,
            }),
            ("s6", _) if d.m.is_some_and(|m| m != 3) => Err(Error::InvalidParameter(format!(
                "s6 has complex dimension 3, got m = {}",
                d.m.unwrap_or_default()
            ))),
            ("s6", []) => Ok(ModelSpec::Sphere6 { c: d.c }),
            ("s6", [c]) => Ok(ModelSpec::Sphere6 { c: *c }),
            ("cp", []) => Ok(ModelSpec::ComplexProjective {
                m: m_default,
                mu: d.mu.abs(),
            }),
            ("cp", [m]) => Ok(ModelSpec::ComplexProjective {
                m: self.complex_dim(*m)?,
                mu: d.mu.abs(),
            }),
            ("cp", [m, mu]) => Ok(ModelSpec::ComplexProjective {
                m: self.complex_dim(*m)?,
                mu: *mu,
            }),
            ("cd", []) => Ok(ModelSpec::ComplexHyperbolic {
                m: m_default,
                mu: -d.mu.abs(),
            }),
            ("cd", [m]) => Ok(ModelSpec::ComplexHyperbolic {
                m: self.complex_dim(*m)?,
                mu: -d.mu.abs(),
            }),
            ("cd", [m, mu]) => Ok(ModelSpec::ComplexHyperbolic {
                m: self.complex_dim(*m)?,
                mu: *mu,
            }),
            _ => Err(self.err("unknown model or wrong argument count")),
        }
    }
}

/// A [`ModelSpec`] realized as a coordinate chart.
///
/// * `CEᵐ`: flat metric, standard `J`.
/// * `S⁶(c)`: stereographic coordinates on the sphere of radius `1/√c` in
///   `ℝ⁷`; `J_p v = n(p) × v` with the octonionic cross product, pulled back
///   through the embedding differential.
/// * `CPᵐ(μ)`: Fubini–Study metric `(4/μ)·Re[((1+|z|²)⟨dz,dz⟩ − |z̄·dz|²)/(1+|z|²)²]`
///   in an affine chart.
/// * `CDᵐ(μ)`: Bergman metric `(4/|μ|)·Re[((1−|z|²)⟨dz,dz⟩ + |z̄·dz|²)/(1−|z|²)²]`
///   on the unit ball.
///
/// Complex coordinates are realified as `(x₁, y₁, x₂, y₂, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartModel {
    spec: ModelSpec,
}

/// Builds the chart of a model.
pub fn make_chart(spec: &ModelSpec) -> Result<ChartModel> {
    spec.validate()?;
    Ok(ChartModel { spec: spec.clone() })
}

impl ChartModel {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }
}

fn sphere_embedding_jacobian(x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    // Unit sphere: p = (2x, s − 1)/(1 + s), s = |x|².
    let s: f64 = x.iter().map(|v| v * v).sum();
    let d = 1.0 + s;
    let mut p = DVector::zeros(7);
    let mut jac = DMatrix::zeros(7, 6);
    for i in 0..6 {
        p[i] = 2.0 * x[i] / d;
        for j in 0..6 {
            let delta = if i == j { 1.0 } else { 0.0 };
            jac[(i, j)] = 2.0 * delta / d - 4.0 * x[i] * x[j] / (d * d);
        }
        jac[(6, i)] = 4.0 * x[i] / (d * d);
    }
    p[6] = (s - 1.0) / d;
    (p, jac)
}

fn sphere_j(x: &[f64]) -> DMatrix<f64> {
    let (n, jac) = sphere_embedding_jacobian(x);
    let n7: [f64; 7] = std::array::from_fn(|i| n[i]);
    let cross_n = DMatrix::from_fn(7, 7, |r, c| {
        let e: [f64; 7] = std::array::from_fn(|i| if i == c { 1.0 } else { 0.0 });
        octonion::cross(&n7, &e)[r]
    });
    // Pullback through the conformal embedding: (DᵀD)⁻¹ Dᵀ (n×) D.
    let gram = jac.transpose() * &jac;
    let inv = gram
        .try_inverse()
        .expect("stereographic embedding is immersive");
    inv * jac.transpose() * cross_n * jac
}

fn complex_metric(x: &[f64], mu: f64) -> DMatrix<f64> {
    let m = x.len() / 2;
    let z: Vec<Complex64> = (0..m)
        .map(|p| Complex64::new(x[2 * p], x[2 * p + 1]))
        .collect();
    let s: f64 = z.iter().map(|w| w.norm_sqr()).sum();
    let sign = mu.signum();
    // Real basis vector a as a complex vector: e_p or i·e_p.
    let unit = |a: usize| {
        if a.is_multiple_of(2) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        }
    };
    let zbar_dot = |a: usize| z[a / 2].conj() * unit(a);
    let denom = (1.0 + sign * s).powi(2);
    DMatrix::from_fn(2 * m, 2 * m, |a, b| {
        let inner = if a / 2 == b / 2 {
            (unit(a) * unit(b).conj()).re
        } else {
            0.0
        };
        let h = (1.0 + sign * s) * inner - sign * (zbar_dot(a) * zbar_dot(b).conj()).re;
        4.0 / mu.abs() * h / denom
    })
}

fn sample_ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let len = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if len < 1e-3 {
            continue;
        }
        let radius = SAMPLE_RADIUS * rng.random_range(0.0..1.0f64).powf(1.0 / n as f64);
        return v.into_iter().map(|a| a * radius / len).collect();
    }
}

fn block_diag(a: DMatrix<f64>, b: DMatrix<f64>) -> DMatrix<f64> {
    let (n1, n2) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n1 + n2, n1 + n2);
    out.view_mut((0, 0), (n1, n1)).copy_from(&a);
    out.view_mut((n1, n1), (n2, n2)).copy_from(&b);
    out
}

fn metric_of(spec: &ModelSpec, x: &[f64]) -> DMatrix<f64> {
    match *spec {
        ModelSpec::Flat { m } => DMatrix::identity(2 * m, 2 * m),
        ModelSpec::Sphere6 { c } => {
            let s: f64 = x.iter().map(|v| v * v).sum();
            DMatrix::identity(6, 6) * (4.0 / (c * (1.0 + s).powi(2)))
        }
        ModelSpec::ComplexProjective { mu, .. } | ModelSpec::ComplexHyperbolic { mu, .. } => {
            complex_metric(x, mu)
        }
        ModelSpec::Product(ref a, ref b) => {
            let (xa, xb) = x.split_at(a.dim());
            block_diag(metric_of(a, xa), metric_of(b, xb))
        }
    }
}

fn j_of(spec: &ModelSpec, x: &[f64]) -> DMatrix<f64> {
    match *spec {
        ModelSpec::Sphere6 { .. } => sphere_j(x),
        ModelSpec::Product(ref a, ref b) => {
            let (xa, xb) = x.split_at(a.dim());
            block_diag(j_of(a, xa), j_of(b, xb))
        }
        _ => standard_j(spec.dim() / 2),
    }
}

fn margin_of(spec: &ModelSpec, x: &[f64]) -> f64 {
    match *spec {
        ModelSpec::ComplexHyperbolic { .. } => 1.0 - x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        ModelSpec::Product(ref a, ref b) => {
            let (xa, xb) = x.split_at(a.dim());
            margin_of(a, xa).min(margin_of(b, xb))
        }
        _ => f64::INFINITY,
    }
}

impl Chart for ChartModel {
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn metric_at(&self, x: &[f64]) -> DMatrix<f64> {
        metric_of(&self.spec, x)
    }

    fn j_at(&self, x: &[f64]) -> DMatrix<f64> {
        j_of(&self.spec, x)
    }

    fn margin_at(&self, x: &[f64]) -> f64 {
        margin_of(&self.spec, x)
    }

    fn sample_points(&self, seed: u64, count: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.spec
                    .factors()
                    .into_iter()
                    .flat_map(|f| sample_ball(&mut rng, f.dim()))
                    .collect()
            })
            .collect()
    }

    fn scale(&self) -> f64 {
        self.spec.scale()
    }

    fn label(&self) -> String {
        self.spec.to_string()
    }
}
