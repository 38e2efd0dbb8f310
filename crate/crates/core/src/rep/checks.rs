//! Verifications for the representation: group law, unitarity, the
//! endpoint intertwiner, and the generator brackets.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, usage, Result};
use crate::grid::{quad_product, Grid};
use crate::mc::checks::{gated, SE_GATE};
use crate::mc::engine::{run, McParams};
use crate::mc::functional::{Constant, Functional, SharedFunctional};
use crate::mc::within_se;
use crate::paths::{increment_pairing, MeasureConfig, Path, SmoothLoop};
use crate::rep::group::{multiply, GroupElement};
use crate::rep::lie::{lie_d, lie_t};
use crate::rep::operator::{apply_rep, apply_rep_arc, RepContext};
use crate::report::CheckReport;
use crate::sampling::Sampler;

fn max_residual(a: &dyn Functional, b: &dyn Functional, paths: &[Path], x0s: &[f64]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for x in paths {
        for &x0 in x0s {
            worst = worst.max((a.eval(x, x0)? - b.eval(x, x0)?).norm());
        }
    }
    Ok(worst)
}

/// Residuals of `ρ(g₁)ρ(g₂)F - ρ(g₁g₂)F` on pinned paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomomorphismResidual {
    /// Product taken at central charge `-k`, the law the operators realize.
    pub residual: f64,
    /// Product taken at the context charge `k` as printed; nonzero unless
    /// the cocycle vanishes.
    pub literal_residual: f64,
}

pub fn check_homomorphism(
    g1: &GroupElement,
    g2: &GroupElement,
    ctx: &RepContext,
    f: SharedFunctional,
    paths: &[Path],
    x0s: &[f64],
) -> Result<HomomorphismResidual> {
    let k = ctx.k();
    let composed = apply_rep(g1, ctx, apply_rep_arc(g2, ctx, f.clone())?)?;
    let direct = apply_rep(&multiply(g1, g2, -k)?, ctx, f.clone())?;
    let literal = apply_rep(&multiply(g1, g2, k)?, ctx, f)?;
    Ok(HomomorphismResidual {
        residual: max_residual(&composed, &direct, paths, x0s)?,
        literal_residual: max_residual(&composed, &literal, paths, x0s)?,
    })
}

/// Operators of `(α₁, 0, s₁)` at charge `k` and `(α₂, 0, s₂)` at charge
/// `-k` commute: max pointwise residual of the two orders.
pub fn check_a_commutation(
    a1: &GroupElement,
    a2: &GroupElement,
    ctx: &RepContext,
    f: SharedFunctional,
    paths: &[Path],
    x0s: &[f64],
) -> Result<f64> {
    if a1.b.values().iter().chain(a2.b.values()).any(|v| *v != 0.0) {
        return usage("A-subgroup elements must have b = 0");
    }
    let plus = ctx.clone();
    let minus = ctx.with_k(-ctx.k());
    let ab = apply_rep(a1, &plus, apply_rep_arc(a2, &minus, f.clone())?)?;
    let ba = apply_rep(a2, &minus, apply_rep_arc(a1, &plus, f)?)?;
    max_residual(&ab, &ba, paths, x0s)
}

/// Uniform trapezoid nodes for the base coordinate `x₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct X0Quadrature {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl X0Quadrature {
    pub fn nodes(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        if !(self.hi > self.lo) || !(self.step > 0.0) {
            return usage(format!("invalid x₀ quadrature {self:?}"));
        }
        let n = ((self.hi - self.lo) / self.step).round() as usize;
        let h = (self.hi - self.lo) / n as f64;
        let x: Vec<f64> = (0..=n).map(|j| self.lo + j as f64 * h).collect();
        let w = (0..=n).map(|j| if j == 0 || j == n { 0.5 * h } else { h }).collect();
        Ok((x, w))
    }
}

/// Paired estimates of `⟨ρF, ρH⟩` and `⟨F, H⟩` over paths × `dx₀`.
#[allow(clippy::too_many_arguments)]
pub fn check_unitarity(
    g: &GroupElement,
    ctx: &RepContext,
    f: SharedFunctional,
    h: SharedFunctional,
    sampler: Sampler,
    x0: &X0Quadrature,
    params: &McParams,
) -> Result<CheckReport> {
    if !ctx.is_unitary() {
        return domain("unitarity needs purely imaginary λ; real parts give the contraction semigroup");
    }
    let grid = *ctx.grid();
    let cfg = *ctx.cfg();
    let rf = apply_rep(g, ctx, f.clone())?;
    let rh = apply_rep(g, ctx, h.clone())?;
    let (nodes, weights) = x0.nodes()?;
    let n = nodes.len();
    gated(params, |p| {
        let seed = p.seed;
        let est = run(
            p,
            3,
            || {
                (
                    Path::from_parts(grid, vec![0.0; grid.len()], sampler.kind()),
                    vec![Complex64::default(); 4 * n],
                )
            },
            |i, (x, buf), out| {
                x.set_kind(sampler.kind());
                sampler.sample_into(&grid, &cfg, seed, i, x.values_mut());
                let (a, rest) = buf.split_at_mut(n);
                let (b, rest) = rest.split_at_mut(n);
                let (c, d) = rest.split_at_mut(n);
                rf.eval_x0_batch(x, &nodes, a)?;
                rh.eval_x0_batch(x, &nodes, b)?;
                f.eval_x0_batch(x, &nodes, c)?;
                h.eval_x0_batch(x, &nodes, d)?;
                let mut l = Complex64::default();
                let mut r = Complex64::default();
                for j in 0..n {
                    l += weights[j] * a[j] * b[j].conj();
                    r += weights[j] * c[j] * d[j].conj();
                }
                out[0] = l;
                out[1] = r;
                out[2] = l - r;
                Ok(())
            },
        )?;
        let d = est[2];
        let scale = est[0].mean.norm().max(est[1].mean.norm());
        Ok(CheckReport::new(
            "unitarity",
            est[0].mean,
            est[1].mean,
            d.stderr,
            within_se(d.mean, d.stderr, SE_GATE, 0.0, scale),
        )
        .with("n", p.n as f64)
        .with("k", ctx.k()))
    })
}

/// `(U_ξF)(y, x₀) = exp(-S(ξ, y)/2t - Q(ξ)/4t)·F(y + ξ, x₀)`: maps functionals
/// on paths ending at `X₁` to functionals on paths ending at `X₁ - ξ(2π)`.
#[derive(Clone)]
pub struct Intertwiner {
    xi: SmoothLoop,
    t: f64,
    f: SharedFunctional,
    inverse: bool,
}

impl Intertwiner {
    pub fn new(xi: &SmoothLoop, cfg: &MeasureConfig, f: SharedFunctional) -> Result<Self> {
        xi.require_cameron_martin()?;
        Ok(Self {
            xi: xi.clone(),
            t: cfg.t(),
            f,
            inverse: false,
        })
    }

    /// `U_ξ⁻¹`.
    pub fn new_inverse(xi: &SmoothLoop, cfg: &MeasureConfig, f: SharedFunctional) -> Result<Self> {
        Ok(Self {
            inverse: true,
            ..Self::new(xi, cfg, f)?
        })
    }
}

impl Functional for Intertwiner {
    fn eval(&self, y: &Path, x0: f64) -> Result<Complex64> {
        let grid = self.xi.grid();
        let q = self.xi.energy();
        let mut z = y.clone();
        if self.inverse {
            z.shift_in_place(self.xi.values(), -1.0);
            let lw = -increment_pairing(grid, self.xi.values(), z.values()) / (2.0 * self.t) - q / (4.0 * self.t);
            Ok(self.f.eval(&z, x0)? / lw.exp())
        } else {
            let lw = -increment_pairing(grid, self.xi.values(), y.values()) / (2.0 * self.t) - q / (4.0 * self.t);
            z.shift_in_place(self.xi.values(), 1.0);
            Ok(self.f.eval(&z, x0)? * lw.exp())
        }
    }

    fn differentiable(&self) -> bool {
        self.f.differentiable()
    }
}

/// Context for the equivalent representation on the other endpoint:
/// `λ ↦ e^{ξ}λ`.
pub fn transported_context(xi: &SmoothLoop, ctx: &RepContext) -> Result<RepContext> {
    let lambda = ctx.lambda().iter().zip(xi.values()).map(|(l, v)| l * v.exp()).collect();
    ctx.with_lambda(lambda)
}

/// Max residual of `U_ξ ρ^{X₁}_λ(g) = ρ^{X₂}_{e^ξλ}(g) U_ξ` over test paths
/// pinned at `X₂` and base points `x0s`.
///
/// The intertwiner is exact without the central extension, so the context
/// must have `k = 0`.
#[allow(clippy::too_many_arguments)]
pub fn check_intertwiner(
    x1: f64,
    x2: f64,
    xi: &SmoothLoop,
    g: &GroupElement,
    ctx: &RepContext,
    f: SharedFunctional,
    paths: &[Path],
    x0s: &[f64],
) -> Result<f64> {
    if ctx.k() != 0.0 {
        return usage("the endpoint intertwiner is defined for k = 0");
    }
    xi.require_cameron_martin()?;
    if (xi.end() - (x1 - x2)).abs() > 1e-12 * (1.0 + (x1 - x2).abs()) {
        return usage(format!("ξ must end at X₁ - X₂ = {}, ends at {}", x1 - x2, xi.end()));
    }
    if let Some(p) = paths.iter().find(|p| (p.end() - x2).abs() > 1e-12 * (1.0 + x2.abs())) {
        return usage(format!("test paths must end at X₂ = {x2}, found {}", p.end()));
    }
    let cfg = ctx.cfg();
    let lhs = Intertwiner::new(xi, cfg, apply_rep_arc(g, ctx, f.clone())?)?;
    let moved = transported_context(xi, ctx)?;
    let rhs = apply_rep(g, &moved, Arc::new(Intertwiner::new(xi, cfg, f)?))?;
    max_residual(&lhs, &rhs, paths, x0s)
}

/// `U_ξ⁻¹ ρ^{X₂}_{e^ξλ}(g) U_ξ F`, which should not depend on `ξ`.
pub fn conjugated_operator(
    xi: &SmoothLoop,
    g: &GroupElement,
    ctx: &RepContext,
    f: SharedFunctional,
) -> Result<SharedFunctional> {
    let cfg = ctx.cfg();
    let moved = transported_context(xi, ctx)?;
    let inner = apply_rep_arc(g, &moved, Arc::new(Intertwiner::new(xi, cfg, f)?))?;
    Ok(Arc::new(Intertwiner::new_inverse(xi, cfg, inner)?))
}

/// Measured generator brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    /// `[D₁, D₂]1`, averaged over the test paths.
    pub central: Complex64,
    /// `2ik∫α₁′α₂du`, the value implied by the operators' composition law.
    pub predicted: Complex64,
    /// `2|k|·|∫α₁′α₂du|`.
    pub expected_magnitude: f64,
    /// Max of `|[D₁, D₂]F - cF|`.
    pub bracket_residual: f64,
    /// Max of `|[D_α, T_b]F - T_{αb}F|`.
    pub dt_residual: f64,
    /// Max of `|[D_{k,α₁}, D_{-k,α₂}]F|`.
    pub opposite_residual: f64,
    pub pass: bool,
}

impl CommutatorReport {
    pub fn to_report(&self) -> CheckReport {
        CheckReport::new("commutators", self.central, self.predicted, 0.0, self.pass)
            .with("central_abs", self.central.norm())
            .with("expected_abs", self.expected_magnitude)
            .with("central_sign_im", self.central.im.signum())
            .with("bracket_residual", self.bracket_residual)
            .with("dt_residual", self.dt_residual)
            .with("opposite_residual", self.opposite_residual)
    }
}

pub const CENTRAL_TOL: f64 = 1e-3;
pub const BRACKET_TOL: f64 = 1e-6;

fn pointwise_product(a: &SmoothLoop, b: &SmoothLoop) -> Result<SmoothLoop> {
    let v = a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect();
    let d = (0..a.values().len())
        .map(|j| a.d1()[j] * b.values()[j] + a.values()[j] * b.d1()[j])
        .collect();
    SmoothLoop::new(*a.grid(), v, d, None)
}

/// Brackets of the generators by nested central differences:
/// `[D₁, D₂] = c`, `[D_α, T_b] = T_{αb}`, and `[D_{k,α₁}, D_{-k,α₂}] = 0`.
///
/// Passes when `|c|` matches `2|k||∫α₁′α₂|` within `1e-3` and the other two
/// relations hold within `1e-6` on `F` at every test point.
#[allow(clippy::too_many_arguments)]
pub fn check_commutators(
    a1: &SmoothLoop,
    a2: &SmoothLoop,
    b: &SmoothLoop,
    ctx: &RepContext,
    f: SharedFunctional,
    paths: &[Path],
    x0s: &[f64],
    eps: f64,
) -> Result<CommutatorReport> {
    if paths.is_empty() || x0s.is_empty() {
        return usage("commutator check needs test paths and base points");
    }
    let grid: Grid = *ctx.grid();
    let one: SharedFunctional = Arc::new(Constant(Complex64::new(1.0, 0.0)));
    let bracket =
        |c1: &RepContext, c2: &RepContext, g: SharedFunctional| -> Result<(SharedFunctional, SharedFunctional)> {
            let d2g: SharedFunctional = Arc::new(lie_d(a2, c2, g.clone(), eps, false)?);
            let d1g: SharedFunctional = Arc::new(lie_d(a1, c1, g, eps, false)?);
            let d1d2: SharedFunctional = Arc::new(lie_d(a1, c1, d2g, eps, false)?);
            let d2d1: SharedFunctional = Arc::new(lie_d(a2, c2, d1g, eps, false)?);
            Ok((d1d2, d2d1))
        };

    let (p1, m1) = bracket(ctx, ctx, one)?;
    let mut csum = Complex64::default();
    let mut count = 0.0;
    for x in paths {
        for &x0 in x0s {
            csum += p1.eval(x, x0)? - m1.eval(x, x0)?;
            count += 1.0;
        }
    }
    let central = csum / count;

    let (pf, mf) = bracket(ctx, ctx, f.clone())?;
    let mut bracket_residual = 0.0_f64;
    for x in paths {
        for &x0 in x0s {
            let v = pf.eval(x, x0)? - mf.eval(x, x0)? - central * f.eval(x, x0)?;
            bracket_residual = bracket_residual.max(v.norm());
        }
    }

    let t_b = lie_t(b, ctx)?;
    let t_ab = lie_t(&pointwise_product(a1, b)?, ctx)?.applied_to(f.clone());
    let d_tb = lie_d(a1, ctx, Arc::new(t_b.applied_to(f.clone())), eps, false)?;
    let d_f: SharedFunctional = Arc::new(lie_d(a1, ctx, f.clone(), eps, false)?);
    let tb_d = t_b.applied_to(d_f);
    let mut dt_residual = 0.0_f64;
    for x in paths {
        for &x0 in x0s {
            let v = d_tb.eval(x, x0)? - tb_d.eval(x, x0)? - t_ab.eval(x, x0)?;
            dt_residual = dt_residual.max(v.norm());
        }
    }

    let (po, mo) = bracket(ctx, &ctx.with_k(-ctx.k()), f)?;
    let opposite_residual = max_residual(&*po, &*mo, paths, x0s)?;

    let overlap = quad_product(&grid, a1.d1(), a2.values());
    let k = ctx.k();
    let expected_magnitude = 2.0 * k.abs() * overlap.abs();
    let pass = (central.norm() - expected_magnitude).abs() <= CENTRAL_TOL
        && dt_residual <= BRACKET_TOL
        && opposite_residual <= BRACKET_TOL;
    Ok(CommutatorReport {
        central,
        predicted: Complex64::new(0.0, 2.0 * k * overlap),
        expected_magnitude,
        bracket_residual,
        dt_residual,
        opposite_residual,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::functional::{ExpLinear, NodeCharacteristic, ProductForm, X0Profile};
    use crate::rep::group::inverse;
    use crate::sampling::sample_bridge;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(128).unwrap()
    }

    fn cfg() -> MeasureConfig {
        MeasureConfig::new(1.0).unwrap()
    }

    fn sin(g: Grid) -> SmoothLoop {
        SmoothLoop::periodic(g, f64::sin, f64::cos, Some(&|u: f64| -u.sin()))
    }

    fn cos(g: Grid) -> SmoothLoop {
        SmoothLoop::periodic(g, f64::cos, |u| -u.sin(), Some(&|u: f64| -u.cos()))
    }

    fn paths(g: Grid, end: f64, n: u64) -> Vec<Path> {
        (0..n).map(|i| sample_bridge(&g, &cfg(), end, 77, i)).collect()
    }

    fn test_f(g: Grid) -> SharedFunctional {
        let eta = g.sample_complex(|u| Complex64::new(0.05 * u.cos(), 0.2 * (2.0 * u).sin()));
        Arc::new(ProductForm {
            path: Arc::new(ExpLinear::new(g, eta).unwrap()),
            profile: X0Profile {
                center: 0.0,
                width: 1.0,
                freq: 0.3,
            },
        })
    }

    fn element(g: Grid, seed: f64) -> GroupElement {
        let a = SmoothLoop::periodic(
            g,
            move |u| 0.3 * (u + seed).sin() + 0.1 * seed,
            move |u| 0.3 * (u + seed).cos(),
            Some(&move |u: f64| -0.3 * (u + seed).sin()),
        );
        let b = SmoothLoop::periodic(
            g,
            move |u| 0.5 + 0.2 * (2.0 * u - seed).cos(),
            move |u| -0.4 * (2.0 * u - seed).sin(),
            None,
        );
        GroupElement::new(a, b, seed).unwrap()
    }

    #[test]
    fn homomorphism_with_identity_is_exact() {
        let g = grid();
        let ctx = RepContext::imaginary(g, |u| 1.0 + 0.2 * u.sin(), 1.0, cfg());
        let r = check_homomorphism(
            &element(g, 0.4),
            &GroupElement::identity(g),
            &ctx,
            test_f(g),
            &paths(g, 0.0, 3),
            &[0.0, 0.5],
        )
        .unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn homomorphism_for_random_pairs() {
        let g = grid();
        for k in [0.0, 1.0, -0.7] {
            let ctx = RepContext::imaginary(g, |u| 1.0 + 0.2 * u.sin(), k, cfg());
            let r = check_homomorphism(
                &element(g, 0.4),
                &element(g, 1.3),
                &ctx,
                test_f(g),
                &paths(g, 0.0, 4),
                &[-0.5, 0.0, 0.8],
            )
            .unwrap();
            assert!(r.residual <= 1e-10, "k={k}: {r:?}");
        }
        // with b = 0 and k ≠ 0 the printed charge leaves a cocycle phase
        // e^{2πik}, invisible at integer k
        let ctx = RepContext::imaginary(g, |_| 1.0, 0.7, cfg());
        let r = check_homomorphism(
            &GroupElement::exponential(sin(g), 0.0),
            &GroupElement::exponential(cos(g), 0.0),
            &ctx,
            test_f(g),
            &paths(g, 0.0, 3),
            &[0.0],
        )
        .unwrap();
        assert!(r.residual <= 1e-10);
        assert!(r.literal_residual > 1e-3);
    }

    #[test]
    fn inverse_acts_as_inverse_operator() {
        let g = grid();
        let k = 0.8;
        let ctx = RepContext::imaginary(g, |u| 1.0 + 0.2 * u.cos(), k, cfg());
        let x = element(g, 0.9);
        // the operators compose at charge -k
        let xi = inverse(&x, -k);
        let f = test_f(g);
        let round = apply_rep(&x, &ctx, apply_rep_arc(&xi, &ctx, f.clone()).unwrap()).unwrap();
        assert!(max_residual(&round, &*f, &paths(g, 0.0, 3), &[0.0, 0.3]).unwrap() < 1e-10);
    }

    #[test]
    fn a_subgroup_opposite_charges_commute() {
        let g = grid();
        let ctx = RepContext::imaginary(g, |_| 1.0, 1.0, cfg());
        let a1 = GroupElement::exponential(sin(g), 0.3);
        let a2 = GroupElement::exponential(cos(g).scaled(0.5), -0.2);
        let r = check_a_commutation(&a1, &a2, &ctx, test_f(g), &paths(g, 0.0, 5), &[0.0, 0.4]).unwrap();
        assert!(r <= 1e-10, "{r}");
        // same charge does not commute
        let same = apply_rep(&a1, &ctx, apply_rep_arc(&a2, &ctx, test_f(g)).unwrap()).unwrap();
        let swapped = apply_rep(&a2, &ctx, apply_rep_arc(&a1, &ctx, test_f(g)).unwrap()).unwrap();
        assert!(max_residual(&same, &swapped, &paths(g, 0.0, 2), &[0.0]).unwrap() > 1e-3);
    }

    #[test]
    fn unitarity_trivial_cases() {
        let g = grid();
        let ctx = RepContext::imaginary(g, |_| 1.0, 1.0, cfg());
        let q = X0Quadrature {
            lo: -8.0,
            hi: 8.0,
            step: 0.4,
        };
        let p = McParams::new(2000, 1);
        let r = check_unitarity(
            &GroupElement::identity(g),
            &ctx,
            test_f(g),
            test_f(g),
            Sampler::Bridge(0.0),
            &q,
            &p,
        )
        .unwrap();
        assert!(r.pass && r.diff() == Complex64::default());
        let b = SmoothLoop::periodic(g, |u| 1.0 + u.sin(), f64::cos, None);
        let r = check_unitarity(
            &GroupElement::translation(b),
            &ctx,
            test_f(g),
            test_f(g),
            Sampler::Bridge(0.0),
            &q,
            &p,
        )
        .unwrap();
        assert!(r.pass && r.diff().norm() < 1e-13, "{r:?}");
        let real = RepContext::real(g, |_| -1.0, 0.0, cfg());
        assert!(matches!(
            check_unitarity(
                &GroupElement::identity(g),
                &real,
                test_f(g),
                test_f(g),
                Sampler::Bridge(0.0),
                &q,
                &p
            ),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn unitarity_with_sin_alpha() {
        let g = grid();
        let ctx = RepContext::imaginary(g, |_| 1.0, 1.0, cfg());
        let q = X0Quadrature {
            lo: -8.0,
            hi: 8.0,
            step: 0.4,
        };
        let el = GroupElement::new(sin(g), SmoothLoop::periodic(g, |_| 1.0, |_| 0.0, None), 0.5).unwrap();
        let h: SharedFunctional = Arc::new(ProductForm {
            path: Arc::new(NodeCharacteristic { node: 30, freq: 1.0 }),
            profile: X0Profile {
                center: 0.5,
                width: 0.7,
                freq: -0.2,
            },
        });
        let r = check_unitarity(
            &el,
            &ctx,
            test_f(g),
            h,
            Sampler::Bridge(0.0),
            &q,
            &McParams::new(100_000, 2),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn intertwiner_examples() {
        let g = grid();
        let ctx = RepContext::imaginary(g, |u| 1.0 + 0.3 * u.cos(), 0.0, cfg());
        let el = element(g, 0.6);
        let f = test_f(g);
        let r = check_intertwiner(
            0.0,
            0.0,
            &SmoothLoop::zero(g),
            &el,
            &ctx,
            f.clone(),
            &paths(g, 0.0, 3),
            &[0.0, 0.5],
        )
        .unwrap();
        assert_eq!(r, 0.0);
        let lin = SmoothLoop::from_fn(g, |u| u / (2.0 * PI), |_| 1.0 / (2.0 * PI), None);
        let r = check_intertwiner(1.0, 0.0, &lin, &el, &ctx, f.clone(), &paths(g, 0.0, 4), &[0.0, 0.5]).unwrap();
        assert!(r <= 1e-10, "{r}");
        assert!(check_intertwiner(2.0, 0.0, &lin, &el, &ctx, f.clone(), &paths(g, 0.0, 1), &[0.0]).is_err());
        assert!(check_intertwiner(1.0, 0.0, &lin, &el, &ctx.with_k(1.0), f, &paths(g, 0.0, 1), &[0.0]).is_err());
    }

    #[test]
    fn conjugation_is_independent_of_xi() {
        let g = grid();
        let ctx = RepContext::imaginary(g, |u| 1.0 + 0.3 * u.cos(), 0.0, cfg());
        let el = element(g, 0.2);
        let f = test_f(g);
        let lin = SmoothLoop::from_fn(g, |u| u / (2.0 * PI), |_| 1.0 / (2.0 * PI), None);
        let bent = SmoothLoop::from_fn(
            g,
            |u| u / (2.0 * PI) + 0.4 * u.sin(),
            |u| 1.0 / (2.0 * PI) + 0.4 * u.cos(),
            None,
        );
        let a = conjugated_operator(&lin, &el, &ctx, f.clone()).unwrap();
        let b = conjugated_operator(&bent, &el, &ctx, f.clone()).unwrap();
        let direct = apply_rep(&el, &ctx, f).unwrap();
        let ps = paths(g, 1.0, 4);
        assert!(max_residual(&*a, &*b, &ps, &[0.0, 0.3]).unwrap() <= 1e-10);
        assert!(max_residual(&*a, &direct, &ps, &[0.0, 0.3]).unwrap() <= 1e-10);
    }

    #[test]
    fn commutator_constants() {
        let g = Grid::new(256).unwrap();
        let ps = paths(g, 0.0, 3);
        let b = SmoothLoop::periodic(g, |u| 1.0 + 0.5 * u.cos(), |u| -0.5 * u.sin(), None);
        for k in [0.0, 1.0] {
            let ctx = RepContext::imaginary(g, |_| 1.0, k, cfg());
            let r = check_commutators(&sin(g), &cos(g), &b, &ctx, test_f(g), &ps, &[0.0, 0.2], 1e-4).unwrap();
            assert!(r.pass, "k={k}: {r:?}");
            assert!((r.central.norm() - 2.0 * PI * k).abs() < 1e-3);
        }
    }
}
