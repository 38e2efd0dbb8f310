//! One function per subcommand: typed parameters in, check reports out.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use loopgamma::fourier::{check_base_kernel, check_finite_kernel, fourier_wiener_check, LineFunction};
use loopgamma::gamma::{check_large_t_limit, gamma_reg_prime, recurrence_report};
use loopgamma::loop_gamma::{check_functional_equation, check_kernel_reduction};
use loopgamma::mc::checks::{check_direct_integral, check_translation};
use loopgamma::mc::functional::ProductForm;
use loopgamma::rep::checks::{
    check_a_commutation, check_commutators, check_homomorphism, check_intertwiner, check_unitarity, X0Quadrature,
};
use loopgamma::rep::group::{distance, inverse, multiply};
use loopgamma::rep::lie::DEFAULT_EPS;
use loopgamma::{
    gamma_reg, hat_gamma, sample_bridge, sample_wiener, CheckReport, Error, Grid, GroupElement, McParams,
    MeasureConfig, Path, RegGammaParams, RepContext, Sampler, Tilt,
};

use crate::config::{ConfigError, RunConfig};
use crate::spec::{ComplexLoopSpec, ComplexSpec, FunctionalSpec, GroupSpec, LoopSpec, ProfileSpec, Trig};

/// Pointwise tolerance for the exact algebraic identities.
pub const PATHWISE_TOL: f64 = 1e-10;
/// Pathwise tolerance for the kernel reduction.
pub const KERNEL_TOL: f64 = 1e-12;

pub struct Command {
    pub name: &'static str,
    /// Name of the check it runs, as it appears in reports.
    pub check: &'static str,
    pub about: &'static str,
    run: fn(&Ctx) -> Result<Outcome, CliError>,
    /// Extra field used as the plot abscissa.
    plot_key: Option<&'static str>,
}

pub const COMMANDS: &[Command] = &[
    Command {
        name: "sample",
        check: "path_sampling",
        about: "free Wiener or pinned bridge paths on the grid",
        run: sample,
        plot_key: None,
    },
    Command {
        name: "check-translation",
        check: "translation",
        about: "Cameron-Martin translation invariance with common random numbers",
        run: translation,
        plot_key: None,
    },
    Command {
        name: "check-direct-integral",
        check: "direct_integral",
        about: "free measure as the endpoint integral of pinned measures",
        run: direct_integral,
        plot_key: None,
    },
    Command {
        name: "check-unitarity",
        check: "unitarity",
        about: "paired inner products before and after the representation",
        run: unitarity,
        plot_key: None,
    },
    Command {
        name: "check-group-law",
        check: "group_law",
        about: "associativity, inverses, homomorphism and A-subgroup commutation",
        run: group_law,
        plot_key: None,
    },
    Command {
        name: "check-commutators",
        check: "commutators",
        about: "generator brackets and the central constant",
        run: commutators,
        plot_key: None,
    },
    Command {
        name: "check-intertwiner",
        check: "endpoint_intertwiner",
        about: "equivalence of representations at different endpoints",
        run: intertwiner,
        plot_key: None,
    },
    Command {
        name: "gamma-loop",
        check: "loop_gamma",
        about: "Monte Carlo value of the loop Gamma functional",
        run: gamma_loop,
        plot_key: None,
    },
    Command {
        name: "check-functional-eq",
        check: "loop_gamma_functional_equation",
        about: "functional equation of the loop Gamma functional",
        run: functional_eq,
        plot_key: None,
    },
    Command {
        name: "kernel",
        check: "kernel_reduction",
        about: "kernel of the real representation as a loop Gamma value",
        run: kernel,
        plot_key: None,
    },
    Command {
        name: "gamma-reg",
        check: "gamma_reg",
        about: "regularized Gamma value, or its recurrence with --recurrence",
        run: gamma_reg_cmd,
        plot_key: None,
    },
    Command {
        name: "check-limit",
        check: "gamma_reg_large_t",
        about: "large-t limit of the regularized Gamma function",
        run: limit,
        plot_key: Some("t"),
    },
    Command {
        name: "check-prop22",
        check: "finite_gamma_kernel",
        about: "Gamma kernel of the finite ax+b representation after Laplace transform",
        run: finite_kernel,
        plot_key: Some("t1"),
    },
    Command {
        name: "check-theorem52",
        check: "base_gamma_kernel",
        about: "Gamma kernel of the loop representation in the base coordinate",
        run: base_kernel,
        plot_key: Some("z"),
    },
    Command {
        name: "fourier-wiener",
        check: "fourier_wiener_unitarity",
        about: "unitarity of the Fourier-Wiener transform on exponentials",
        run: fourier_wiener,
        plot_key: None,
    },
];

pub fn find(name: &str) -> Option<&'static Command> {
    COMMANDS.iter().find(|c| c.name == name)
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(Error),
    Io(String),
}

impl CliError {
    /// 2 for bad input, 1 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Accuracy { .. } | Error::Eval { .. }) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

pub struct Outcome {
    pub reports: Vec<CheckReport>,
    pub data: Option<Value>,
    pub plot_key: Option<&'static str>,
}

impl Outcome {
    fn reports(reports: Vec<CheckReport>) -> Self {
        Self {
            reports,
            data: None,
            plot_key: None,
        }
    }

    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

/// Everything a command needs besides its own parameters.
struct Ctx<'a> {
    config: &'a RunConfig,
    grid: Grid,
    cfg: MeasureConfig,
    mc: McParams,
}

impl Ctx<'_> {
    fn params<T: serde::de::DeserializeOwned>(&self) -> Result<T, CliError> {
        Ok(self.config.typed()?)
    }

    fn rep(&self, lambda: &ComplexLoopSpec, k: f64) -> Result<RepContext, CliError> {
        Ok(RepContext::new(self.grid, lambda.values(self.grid)?, k, self.cfg)?)
    }

    fn wiener_paths(&self, count: usize) -> Vec<Path> {
        (0..count as u64)
            .map(|i| sample_wiener(&self.grid, &self.cfg, self.mc.seed, i))
            .collect()
    }

    fn bridge_paths(&self, end: f64, count: usize) -> Vec<Path> {
        (0..count as u64)
            .map(|i| sample_bridge(&self.grid, &self.cfg, end, self.mc.seed, i))
            .collect()
    }
}

pub fn run(command: &Command, config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let ctx = Ctx {
        config,
        grid: Grid::new(config.m)?,
        cfg: MeasureConfig::new(config.t)?,
        mc: McParams::new(config.n, config.seed),
    };
    let mut out = (command.run)(&ctx)?;
    out.plot_key = command.plot_key;
    Ok(out)
}

fn sampler(bridge: Option<f64>) -> Sampler {
    bridge.map_or(Sampler::Free, Sampler::Bridge)
}

fn trig(c0: f64, sin: &[f64], cos: &[f64]) -> LoopSpec {
    LoopSpec::Trig(Trig {
        c0,
        linear: 0.0,
        sin: sin.to_vec(),
        cos: cos.to_vec(),
    })
}

fn imaginary(h: LoopSpec) -> ComplexLoopSpec {
    ComplexLoopSpec::Parts {
        re: LoopSpec::Const(0.0),
        im: h,
    }
}

fn real(h: LoopSpec) -> ComplexLoopSpec {
    ComplexLoopSpec::Parts {
        re: h,
        im: LoopSpec::Const(0.0),
    }
}

fn exp_functional(re: LoopSpec, im: LoopSpec) -> FunctionalSpec {
    FunctionalSpec::Exp { re, im }
}

fn default_x0s() -> Vec<f64> {
    vec![-0.5, 0.0, 0.8]
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct SampleParams {
    /// Pin the paths at this endpoint.
    bridge: Option<f64>,
    count: usize,
}

impl Default for SampleParams {
    fn default() -> Self {
        Self { bridge: None, count: 1 }
    }
}

fn sample(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: SampleParams = ctx.params()?;
    let s = sampler(p.bridge);
    let paths: Vec<_> = (0..p.count as u64)
        .map(|i| s.sample(&ctx.grid, &ctx.cfg, ctx.mc.seed, i).to_record(&ctx.cfg))
        .collect();
    Ok(Outcome {
        reports: Vec::new(),
        data: Some(json!({ "paths": paths })),
        plot_key: None,
    })
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct TranslationParams {
    f: FunctionalSpec,
    y: LoopSpec,
    bridge: Option<f64>,
}

impl Default for TranslationParams {
    fn default() -> Self {
        Self {
            f: exp_functional(LoopSpec::Const(0.0), trig(0.0, &[], &[0.3])),
            y: LoopSpec::sin(0.3),
            bridge: None,
        }
    }
}

fn translation(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: TranslationParams = ctx.params()?;
    let f = p.f.build(ctx.grid)?;
    let y = p.y.build(ctx.grid)?;
    let r = check_translation(f.as_ref(), &y, sampler(p.bridge), &ctx.grid, &ctx.cfg, &ctx.mc)?;
    Ok(Outcome::reports(vec![r]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct DirectParams {
    f: FunctionalSpec,
    /// Endpoint quadrature nodes.
    nodes: usize,
}

impl Default for DirectParams {
    fn default() -> Self {
        Self {
            f: FunctionalSpec::Char { node: 128, freq: 1.0 },
            nodes: 49,
        }
    }
}

fn direct_integral(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: DirectParams = ctx.params()?;
    let f = p.f.build(ctx.grid)?;
    Ok(Outcome::reports(vec![check_direct_integral(
        f.as_ref(),
        &ctx.grid,
        &ctx.cfg,
        &ctx.mc,
        p.nodes,
    )?]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct X0Spec {
    lo: f64,
    hi: f64,
    step: f64,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct UnitarityParams {
    element: GroupSpec,
    k: f64,
    /// Must be purely imaginary.
    lambda: ComplexLoopSpec,
    f: FunctionalSpec,
    f_profile: ProfileSpec,
    h: FunctionalSpec,
    h_profile: ProfileSpec,
    x0: X0Spec,
    bridge: Option<f64>,
}

impl Default for UnitarityParams {
    fn default() -> Self {
        Self {
            element: GroupSpec {
                alpha: trig(0.2, &[0.3], &[]),
                b: trig(0.5, &[], &[0.4]),
                s: 0.3,
            },
            k: 1.0,
            lambda: imaginary(trig(1.0, &[], &[0.5])),
            f: exp_functional(LoopSpec::Const(0.0), LoopSpec::sin(0.5)),
            f_profile: ProfileSpec::default(),
            h: FunctionalSpec::Char { node: 100, freq: 1.2 },
            h_profile: ProfileSpec {
                center: 0.3,
                width: 0.8,
                freq: 0.5,
            },
            x0: X0Spec {
                lo: -9.0,
                hi: 9.0,
                step: 0.05,
            },
            bridge: None,
        }
    }
}

fn unitarity(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: UnitarityParams = ctx.params()?;
    let g = p.element.build(ctx.grid)?;
    let rep = ctx.rep(&p.lambda, p.k)?;
    let f = std::sync::Arc::new(ProductForm {
        path: p.f.build(ctx.grid)?,
        profile: p.f_profile.profile(),
    });
    let h = std::sync::Arc::new(ProductForm {
        path: p.h.build(ctx.grid)?,
        profile: p.h_profile.profile(),
    });
    let q = X0Quadrature {
        lo: p.x0.lo,
        hi: p.x0.hi,
        step: p.x0.step,
    };
    Ok(Outcome::reports(vec![check_unitarity(
        &g,
        &rep,
        f,
        h,
        sampler(p.bridge),
        &q,
        &ctx.mc,
    )?]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct GroupLawParams {
    g1: GroupSpec,
    g2: GroupSpec,
    g3: GroupSpec,
    k: f64,
    lambda: ComplexLoopSpec,
    f: FunctionalSpec,
    paths: usize,
    x0s: Vec<f64>,
}

impl Default for GroupLawParams {
    fn default() -> Self {
        Self {
            g1: GroupSpec {
                alpha: trig(0.2, &[0.3], &[]),
                b: trig(0.5, &[], &[0.4]),
                s: 0.3,
            },
            g2: GroupSpec {
                alpha: trig(0.0, &[], &[0.5]),
                b: trig(-0.3, &[0.6], &[]),
                s: -1.1,
            },
            g3: GroupSpec {
                alpha: trig(0.1, &[-0.5], &[]),
                b: trig(0.2, &[0.2], &[0.2]),
                s: 0.7,
            },
            k: 1.0,
            lambda: imaginary(trig(1.0, &[0.4], &[])),
            f: exp_functional(trig(0.0, &[], &[0.1]), LoopSpec::sin(0.3)),
            paths: 4,
            x0s: default_x0s(),
        }
    }
}

fn group_law(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: GroupLawParams = ctx.params()?;
    let (g1, g2, g3) = (p.g1.build(ctx.grid)?, p.g2.build(ctx.grid)?, p.g3.build(ctx.grid)?);
    let k = p.k;
    let left = multiply(&multiply(&g1, &g2, k)?, &g3, k)?;
    let right = multiply(&g1, &multiply(&g2, &g3, k)?, k)?;
    let e = GroupElement::identity(ctx.grid);
    let inv =
        distance(&multiply(&g1, &inverse(&g1, k), k)?, &e).max(distance(&multiply(&inverse(&g1, k), &g1, k)?, &e));
    let rep = ctx.rep(&p.lambda, k)?;
    let f = p.f.build(ctx.grid)?;
    let paths = ctx.wiener_paths(p.paths);
    let hom = check_homomorphism(&g1, &g2, &rep, f.clone(), &paths, &p.x0s)?;
    let a1 = GroupElement::exponential(g1.alpha.clone(), g1.s);
    let a2 = GroupElement::exponential(g2.alpha.clone(), g2.s);
    let commute = check_a_commutation(&a1, &a2, &rep, f, &paths, &p.x0s)?;
    Ok(Outcome::reports(vec![
        CheckReport::residual("group_associativity", distance(&left, &right), PATHWISE_TOL),
        CheckReport::residual("group_inverse", inv, PATHWISE_TOL),
        CheckReport::residual("homomorphism", hom.residual, PATHWISE_TOL)
            .with("literal_residual", hom.literal_residual),
        CheckReport::residual("a_subgroup_commutation", commute, PATHWISE_TOL),
    ]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct CommutatorParams {
    a1: LoopSpec,
    a2: LoopSpec,
    b: LoopSpec,
    k: f64,
    lambda: ComplexLoopSpec,
    f: FunctionalSpec,
    paths: usize,
    x0s: Vec<f64>,
    eps: f64,
}

impl Default for CommutatorParams {
    fn default() -> Self {
        Self {
            a1: LoopSpec::sin(1.0),
            a2: trig(0.0, &[], &[1.0]),
            b: trig(0.3, &[0.2], &[]),
            k: 1.0,
            lambda: imaginary(trig(1.0, &[], &[0.3])),
            f: exp_functional(LoopSpec::Const(0.0), LoopSpec::sin(0.2)),
            paths: 3,
            x0s: vec![-0.3, 0.4],
            eps: DEFAULT_EPS,
        }
    }
}

fn commutators(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: CommutatorParams = ctx.params()?;
    let rep = ctx.rep(&p.lambda, p.k)?;
    let r = check_commutators(
        &p.a1.build(ctx.grid)?,
        &p.a2.build(ctx.grid)?,
        &p.b.build(ctx.grid)?,
        &rep,
        p.f.build(ctx.grid)?,
        &ctx.wiener_paths(p.paths),
        &p.x0s,
        p.eps,
    )?;
    Ok(Outcome::reports(vec![r.to_report()]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct IntertwinerParams {
    x1: f64,
    x2: f64,
    /// Defaults to `(x1 - x2)·u/2π + 0.2 sin u`.
    xi: Option<LoopSpec>,
    element: GroupSpec,
    lambda: ComplexLoopSpec,
    f: FunctionalSpec,
    paths: usize,
    x0s: Vec<f64>,
}

impl Default for IntertwinerParams {
    fn default() -> Self {
        Self {
            x1: 0.5,
            x2: 0.0,
            xi: None,
            element: GroupSpec {
                alpha: trig(0.2, &[0.3], &[]),
                b: trig(0.5, &[], &[0.4]),
                s: 0.6,
            },
            lambda: imaginary(trig(1.0, &[], &[0.3])),
            f: exp_functional(trig(0.0, &[], &[0.1]), LoopSpec::sin(0.3)),
            paths: 4,
            x0s: vec![0.0, 0.5],
        }
    }
}

fn intertwiner(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: IntertwinerParams = ctx.params()?;
    let xi = p.xi.unwrap_or_else(|| {
        LoopSpec::Trig(Trig {
            linear: p.x1 - p.x2,
            sin: vec![0.2],
            ..Trig::default()
        })
    });
    let rep = ctx.rep(&p.lambda, 0.0)?;
    let r = check_intertwiner(
        p.x1,
        p.x2,
        &xi.build(ctx.grid)?,
        &p.element.build(ctx.grid)?,
        &rep,
        p.f.build(ctx.grid)?,
        &ctx.bridge_paths(p.x2, p.paths),
        &p.x0s,
    )?;
    Ok(Outcome::reports(vec![CheckReport::residual(
        "endpoint_intertwiner",
        r,
        PATHWISE_TOL,
    )]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct GammaLoopParams {
    z: ComplexLoopSpec,
    mu: LoopSpec,
    tilt: Tilt,
}

impl Default for GammaLoopParams {
    fn default() -> Self {
        Self {
            z: ComplexLoopSpec::Real(0.3),
            mu: LoopSpec::Const(1.0),
            tilt: Tilt::Auto,
        }
    }
}

fn gamma_loop(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: GammaLoopParams = ctx.params()?;
    let z = p.z.argument(ctx.grid)?;
    let e = hat_gamma(&z, &p.mu.mu(ctx.grid)?, &ctx.cfg, &ctx.mc, p.tilt)?;
    let r = CheckReport::new("loop_gamma", e.mean, e.mean, e.stderr, true).with("n", e.n as f64);
    Ok(Outcome {
        reports: vec![r],
        data: Some(json!({ "mean": [e.mean.re, e.mean.im], "stderr": e.stderr, "n": e.n, "seed": e.seed })),
        plot_key: None,
    })
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct FunctionalEqParams {
    z: ComplexLoopSpec,
    mu: LoopSpec,
    /// Test function vanishing at both ends.
    g: LoopSpec,
    tilt: Tilt,
}

impl Default for FunctionalEqParams {
    fn default() -> Self {
        Self {
            z: ComplexLoopSpec::Real(0.3),
            mu: LoopSpec::Const(1.0),
            g: trig(1.0, &[], &[-1.0]),
            tilt: Tilt::Auto,
        }
    }
}

fn functional_eq(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: FunctionalEqParams = ctx.params()?;
    let r = check_functional_equation(
        &p.z.argument(ctx.grid)?,
        &p.mu.mu(ctx.grid)?,
        &p.g.test_function(ctx.grid)?,
        &ctx.cfg,
        &ctx.mc,
        p.tilt,
    )?;
    Ok(Outcome::reports(vec![r.to_report()]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct KernelParams {
    element: GroupSpec,
    k: f64,
    /// Must be real.
    lambda: ComplexLoopSpec,
    x0: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            element: GroupSpec {
                alpha: trig(0.0, &[0.4], &[]),
                b: trig(-1.2, &[-1.0], &[]),
                s: 0.3,
            },
            k: 1.0,
            lambda: real(trig(1.0, &[], &[0.2])),
            x0: 0.0,
        }
    }
}

fn kernel(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: KernelParams = ctx.params()?;
    let rep = ctx.rep(&p.lambda, p.k)?;
    let x = sample_bridge(&ctx.grid, &ctx.cfg, 0.0, ctx.mc.seed, 0);
    let y = sample_bridge(&ctx.grid, &ctx.cfg, 0.0, ctx.mc.seed, 1);
    let r = check_kernel_reduction(&x, &y, p.x0, &p.element.build(ctx.grid)?, &rep, &ctx.mc)?;
    let report = CheckReport::new(
        "kernel_reduction",
        r.direct.mean,
        r.reduced.mean,
        0.0,
        r.residual <= KERNEL_TOL,
    )
    .with("residual", r.residual)
    .with("tol", KERNEL_TOL)
    .with("direct_stderr", r.direct.stderr)
    .with("prefactor_re", r.prefactor.re)
    .with("prefactor_im", r.prefactor.im);
    Ok(Outcome::reports(vec![report]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct GammaRegParams {
    z: ComplexSpec,
    mu: f64,
    recurrence: bool,
}

impl Default for GammaRegParams {
    fn default() -> Self {
        Self {
            z: ComplexSpec::Real(1.5),
            mu: 1.0,
            recurrence: false,
        }
    }
}

fn gamma_reg_cmd(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: GammaRegParams = ctx.params()?;
    let params = RegGammaParams::new(p.mu, ctx.cfg.t(), p.z.value())?;
    if p.recurrence {
        return Ok(Outcome::reports(vec![recurrence_report(&params)?]));
    }
    let v = gamma_reg(&params)?;
    let d = gamma_reg_prime(&params)?;
    let r = CheckReport::new("gamma_reg", v, v, 0.0, true)
        .with("mu", p.mu)
        .with("t", ctx.cfg.t())
        .with("z_re", params.z.re)
        .with("z_im", params.z.im)
        .with("prime_re", d.re)
        .with("prime_im", d.im);
    Ok(Outcome::reports(vec![r]))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct LimitParams {
    z: ComplexSpec,
    mu: f64,
    ts: Vec<f64>,
}

impl Default for LimitParams {
    fn default() -> Self {
        Self {
            z: ComplexSpec::Real(1.0),
            mu: 1.0,
            ts: vec![1e2, 1e3, 1e4],
        }
    }
}

fn limit(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: LimitParams = ctx.params()?;
    let r = check_large_t_limit(p.z.value(), p.mu, &p.ts)?;
    Ok(Outcome {
        reports: r.to_reports(),
        data: Some(json!({
            "oracle": [r.oracle.re, r.oracle.im],
            "oracle_quadrature": [r.oracle_quadrature.re, r.oracle_quadrature.im],
            "printed": [r.printed.re, r.printed.im],
            "errors": r.errors,
            "rates": r.rates,
            "monotone": r.monotone,
        })),
        plot_key: None,
    })
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct FiniteKernelParams {
    a: f64,
    b: f64,
    lambda: f64,
    /// Gaussian test function `exp(-(t-center)²/2width²)` on `[-half_width, half_width]`.
    center: f64,
    width: f64,
    half_width: f64,
    points: usize,
    t1: Vec<f64>,
}

impl Default for FiniteKernelParams {
    fn default() -> Self {
        Self {
            a: 1.7,
            b: 0.4,
            lambda: -2.5,
            center: 0.0,
            width: 0.5f64.sqrt(),
            half_width: 8.0,
            points: 3200,
            t1: vec![-2.0, -0.5, 0.0, 0.7, 1.5, 3.0],
        }
    }
}

fn finite_kernel(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: FiniteKernelParams = ctx.params()?;
    let f = LineFunction::gaussian_bump(p.center, p.width, p.half_width, p.points)?;
    Ok(Outcome::reports(
        check_finite_kernel(p.a, p.b, p.lambda, &f, &p.t1)?.to_reports(),
    ))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct BaseKernelParams {
    element: GroupSpec,
    k: f64,
    lambda: ComplexLoopSpec,
    /// Path part `exp ∫eta·x du` of the functional.
    eta: LoopSpec,
    profile: ProfileSpec,
    z: Vec<f64>,
    /// Bridge path `(seed, path)` at which the kernel is evaluated.
    path: u64,
}

impl Default for BaseKernelParams {
    fn default() -> Self {
        Self {
            element: GroupSpec {
                alpha: trig(0.3, &[0.2], &[]),
                b: trig(1.0, &[], &[0.3]),
                s: 0.4,
            },
            k: 0.7,
            lambda: ComplexLoopSpec::Real(-1.0),
            eta: LoopSpec::sin(0.1),
            profile: ProfileSpec {
                center: 0.3,
                width: 0.9,
                freq: 0.6,
            },
            z: vec![-2.0, -0.5, 0.0, 1.0, 3.0],
            path: 0,
        }
    }
}

fn base_kernel(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: BaseKernelParams = ctx.params()?;
    let rep = ctx.rep(&p.lambda, p.k)?;
    let x = sample_bridge(&ctx.grid, &ctx.cfg, 0.0, ctx.mc.seed, p.path);
    let f = exp_functional(p.eta, LoopSpec::Const(0.0)).build(ctx.grid)?;
    let r = check_base_kernel(&x, &p.element.build(ctx.grid)?, &rep, f, p.profile.profile(), &p.z)?;
    Ok(Outcome::reports(r.to_reports()))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct FourierWienerParams {
    eta: LoopSpec,
    zeta: LoopSpec,
}

impl Default for FourierWienerParams {
    fn default() -> Self {
        Self {
            eta: LoopSpec::sin(0.3),
            zeta: trig(0.2, &[], &[0.2]),
        }
    }
}

fn fourier_wiener(ctx: &Ctx) -> Result<Outcome, CliError> {
    let p: FourierWienerParams = ctx.params()?;
    let r = fourier_wiener_check(&p.eta.build(ctx.grid)?, &p.zeta.build(ctx.grid)?, &ctx.cfg)?;
    Ok(Outcome::reports(vec![r.to_report()]))
}
