//! JSON building blocks for command parameters.

use std::f64::consts::TAU;
use std::sync::Arc;

use loopgamma::loop_gamma::{ComplexLoopArgument, MuWeight, TestFunction};
use loopgamma::mc::functional::{Constant, ExpLinear, NodeCharacteristic, NodePower, SharedFunctional, X0Profile};
use loopgamma::{Complex64, Error, Grid, GroupElement, Result, SmoothLoop};
use serde::{Deserialize, Serialize};

/// A function on `[0, 2π]`: a constant, a trigonometric series, or raw
/// samples on the grid (derivatives by finite differences).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LoopSpec {
    Const(f64),
    Trig(Trig),
    Samples(Vec<f64>),
}

/// `c0 + linear·u/2π + Σ sin[n-1]·sin(nu) + Σ cos[n-1]·cos(nu)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trig {
    #[serde(default)]
    pub c0: f64,
    #[serde(default)]
    pub linear: f64,
    #[serde(default)]
    pub sin: Vec<f64>,
    #[serde(default)]
    pub cos: Vec<f64>,
}

impl Trig {
    fn eval(&self, u: f64, order: u32) -> f64 {
        let mut v = match order {
            0 => self.c0 + self.linear * u / TAU,
            1 => self.linear / TAU,
            _ => 0.0,
        };
        for (j, a) in self.sin.iter().enumerate() {
            let n = (j + 1) as f64;
            v += a
                * n.powi(order as i32)
                * match order % 4 {
                    0 => (n * u).sin(),
                    1 => (n * u).cos(),
                    2 => -(n * u).sin(),
                    _ => -(n * u).cos(),
                };
        }
        for (j, a) in self.cos.iter().enumerate() {
            let n = (j + 1) as f64;
            v += a
                * n.powi(order as i32)
                * match order % 4 {
                    0 => (n * u).cos(),
                    1 => -(n * u).sin(),
                    2 => -(n * u).cos(),
                    _ => (n * u).sin(),
                };
        }
        v
    }
}

impl Default for LoopSpec {
    fn default() -> Self {
        LoopSpec::Const(0.0)
    }
}

impl LoopSpec {
    pub fn sin(a: f64) -> Self {
        LoopSpec::Trig(Trig {
            sin: vec![a],
            ..Trig::default()
        })
    }

    pub fn build(&self, grid: Grid) -> Result<SmoothLoop> {
        match self {
            LoopSpec::Const(c) => {
                let c = *c;
                Ok(SmoothLoop::periodic(grid, move |_| c, |_| 0.0, Some(&|_| 0.0)))
            }
            LoopSpec::Trig(t) => {
                let d2 = |u| t.eval(u, 2);
                if t.linear == 0.0 {
                    Ok(SmoothLoop::periodic(
                        grid,
                        |u| t.eval(u, 0),
                        |u| t.eval(u, 1),
                        Some(&d2),
                    ))
                } else {
                    Ok(SmoothLoop::from_fn(grid, |u| t.eval(u, 0), |u| t.eval(u, 1), Some(&d2)))
                }
            }
            LoopSpec::Samples(v) => SmoothLoop::from_samples(grid, v.clone()),
        }
    }

    pub fn test_function(&self, grid: Grid) -> Result<TestFunction> {
        match self {
            LoopSpec::Trig(t) => TestFunction::new(grid, |u| t.eval(u, 0), |u| t.eval(u, 1), |u| t.eval(u, 2)),
            _ => TestFunction::from_samples(grid, self.build(grid)?.values().to_vec()),
        }
    }

    pub fn mu(&self, grid: Grid) -> Result<MuWeight> {
        MuWeight::new(grid, self.build(grid)?.values().to_vec())
    }
}

/// A complex number: `1.5`, `[re, im]` or `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Pair([f64; 2]),
    Parts { re: f64, im: f64 },
}

impl ComplexSpec {
    pub fn value(&self) -> Complex64 {
        match *self {
            ComplexSpec::Real(r) => Complex64::new(r, 0.0),
            ComplexSpec::Pair([re, im]) | ComplexSpec::Parts { re, im } => Complex64::new(re, im),
        }
    }
}

/// A complex function on the grid: a constant (`0.3` or `[re, im]`),
/// `[re, im]` samples per node, or `{re, im}` loops.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexLoopSpec {
    Real(f64),
    Constant([f64; 2]),
    Samples(Vec<[f64; 2]>),
    Parts {
        #[serde(default)]
        re: LoopSpec,
        #[serde(default)]
        im: LoopSpec,
    },
}

impl ComplexLoopSpec {
    pub fn values(&self, grid: Grid) -> Result<Vec<Complex64>> {
        match self {
            ComplexLoopSpec::Real(r) => Ok(vec![Complex64::new(*r, 0.0); grid.len()]),
            ComplexLoopSpec::Constant([re, im]) => Ok(vec![Complex64::new(*re, *im); grid.len()]),
            ComplexLoopSpec::Samples(v) => {
                if v.len() != grid.len() {
                    return Err(Error::Usage(format!(
                        "complex samples: expected {} values, got {}",
                        grid.len(),
                        v.len()
                    )));
                }
                Ok(v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            }
            ComplexLoopSpec::Parts { re, im } => {
                let a = re.build(grid)?;
                let b = im.build(grid)?;
                Ok(a.values()
                    .iter()
                    .zip(b.values())
                    .map(|(x, y)| Complex64::new(*x, *y))
                    .collect())
            }
        }
    }

    pub fn argument(&self, grid: Grid) -> Result<ComplexLoopArgument> {
        ComplexLoopArgument::new(grid, self.values(grid)?)
    }
}

/// Test functional `F(x)` of a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionalSpec {
    /// `F ≡ 1`.
    One,
    /// `exp ∫(re + i·im)x du`.
    Exp {
        #[serde(default)]
        re: LoopSpec,
        #[serde(default)]
        im: LoopSpec,
    },
    /// `e^{i·freq·x(u_node)}`.
    Char { node: usize, freq: f64 },
    /// `x(u_node)^power`.
    Power { node: usize, power: i32 },
}

impl FunctionalSpec {
    pub fn build(&self, grid: Grid) -> Result<SharedFunctional> {
        Ok(match self {
            FunctionalSpec::One => Arc::new(Constant(Complex64::new(1.0, 0.0))),
            FunctionalSpec::Exp { re, im } => {
                let eta = ComplexLoopSpec::Parts {
                    re: re.clone(),
                    im: im.clone(),
                };
                Arc::new(ExpLinear::new(grid, eta.values(grid)?)?)
            }
            FunctionalSpec::Char { node, freq } => Arc::new(NodeCharacteristic {
                node: *node,
                freq: *freq,
            }),
            FunctionalSpec::Power { node, power } => Arc::new(NodePower {
                node: *node,
                power: *power,
            }),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    #[serde(default)]
    pub center: f64,
    #[serde(default = "one")]
    pub width: f64,
    #[serde(default)]
    pub freq: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ProfileSpec {
    fn default() -> Self {
        Self {
            center: 0.0,
            width: 1.0,
            freq: 0.0,
        }
    }
}

impl ProfileSpec {
    pub fn profile(&self) -> X0Profile {
        X0Profile {
            center: self.center,
            width: self.width,
            freq: self.freq,
        }
    }
}

/// `(e^α, b, s)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub alpha: LoopSpec,
    #[serde(default)]
    pub b: LoopSpec,
    #[serde(default)]
    pub s: f64,
}

impl GroupSpec {
    pub fn build(&self, grid: Grid) -> Result<GroupElement> {
        GroupElement::new(self.alpha.build(grid)?, self.b.build(grid)?, self.s)
    }
}
