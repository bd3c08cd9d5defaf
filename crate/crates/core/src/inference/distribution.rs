use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{beta_reg, ln_beta};
use crate::uf::UfParams;

/// Uniform interface over the fitted models, so goodness-of-fit and residual
/// code does not care which family it is looking at.
pub trait UnitDistribution: Send + Sync {
    fn model(&self) -> Model;
    fn params(&self) -> Vec<f64>;
    fn ln_pdf(&self, w: f64) -> f64;
    fn cdf(&self, w: f64) -> f64;

    fn pdf(&self, w: f64) -> f64 {
        self.ln_pdf(w).exp()
    }

    fn k_params(&self) -> usize {
        self.params().len()
    }

    fn name(&self) -> &'static str {
        self.model().name()
    }

    fn loglik(&self, values: &[f64]) -> f64 {
        values.iter().map(|&w| self.ln_pdf(w)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Uf,
    Beta,
    Kumaraswamy,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Uf, Model::Beta, Model::Kumaraswamy];

    pub fn name(self) -> &'static str {
        match self {
            Model::Uf => "uf",
            Model::Beta => "beta",
            Model::Kumaraswamy => "kumaraswamy",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Model::Uf => &["sigma", "alpha", "rho"],
            Model::Beta | Model::Kumaraswamy => &["a", "b"],
        }
    }

    /// Rebuilds a distribution from a parameter vector in
    /// [`Model::param_names`] order.
    pub fn distribution(self, params: &[f64]) -> Result<Box<dyn UnitDistribution>> {
        let want = self.param_names().len();
        if params.len() != want {
            return Err(Error::Mismatch(format!(
                "{} takes {want} parameters, got {}",
                self.name(),
                params.len()
            )));
        }
        Ok(match self {
            Model::Uf => Box::new(UfParams::new(params[0], params[1], params[2])?),
            Model::Beta => Box::new(BetaDist::new(params[0], params[1])?),
            Model::Kumaraswamy => Box::new(Kumaraswamy::new(params[0], params[1])?),
        })
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uf" | "unit-frechet" => Ok(Model::Uf),
            "beta" => Ok(Model::Beta),
            "kumaraswamy" | "kw" => Ok(Model::Kumaraswamy),
            other => Err(Error::Mismatch(format!("unknown model `{other}`"))),
        }
    }
}

impl UnitDistribution for UfParams {
    fn model(&self) -> Model {
        Model::Uf
    }

    fn params(&self) -> Vec<f64> {
        self.to_array().to_vec()
    }

    fn ln_pdf(&self, w: f64) -> f64 {
        UfParams::ln_pdf(self, w)
    }

    fn cdf(&self, w: f64) -> f64 {
        UfParams::cdf(self, w)
    }
}

fn check_shape(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, v, "must be positive and finite"))
    }
}

/// Beta(a, b), density `w^{a-1}(1-w)^{b-1}/B(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaDist {
    a: f64,
    b: f64,
}

impl BetaDist {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_shape("a", a)?;
        check_shape("b", b)?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

impl UnitDistribution for BetaDist {
    fn model(&self) -> Model {
        Model::Beta
    }

    fn params(&self) -> Vec<f64> {
        vec![self.a, self.b]
    }

    fn ln_pdf(&self, w: f64) -> f64 {
        if !(w > 0.0 && w < 1.0) {
            return f64::NEG_INFINITY;
        }
        (self.a - 1.0) * w.ln() + (self.b - 1.0) * (-w).ln_1p() - ln_beta(self.a, self.b)
    }

    fn cdf(&self, w: f64) -> f64 {
        beta_reg(self.a, self.b, w)
    }
}

/// Kumaraswamy(a, b), CDF `1 - (1 - w^a)^b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kumaraswamy {
    a: f64,
    b: f64,
}

impl Kumaraswamy {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_shape("a", a)?;
        check_shape("b", b)?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// `ln(1 - w^a)` without cancellation for small `w^a`.
pub(crate) fn ln_1m_pow(w: f64, a: f64) -> f64 {
    (-(a * w.ln()).exp()).ln_1p()
}

impl UnitDistribution for Kumaraswamy {
    fn model(&self) -> Model {
        Model::Kumaraswamy
    }

    fn params(&self) -> Vec<f64> {
        vec![self.a, self.b]
    }

    fn ln_pdf(&self, w: f64) -> f64 {
        if !(w > 0.0 && w < 1.0) {
            return f64::NEG_INFINITY;
        }
        self.a.ln() + self.b.ln() + (self.a - 1.0) * w.ln() + (self.b - 1.0) * ln_1m_pow(w, self.a)
    }

    fn cdf(&self, w: f64) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        if w >= 1.0 {
            return 1.0;
        }
        -(self.b * ln_1m_pow(w, self.a)).exp_m1()
    }
}
