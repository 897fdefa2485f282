//! Braiding spec files.
//!
//! Scalars are exact: an integer, a rational string `"p/q"`, a root of unity
//! `{"zeta": [k, N], "coeff": "p/q"}` meaning `coeff · ζ_N^k`, or an array
//! whose entries are summed.

use std::str::FromStr;

use num_rational::BigRational;
use serde::Deserialize;

use nichols_core::braiding::{
    cartan_braiding, custom_braiding, diagonal_braiding, jordanian_braiding, rack_braiding, BraidedSpace,
};
use nichols_core::nichols::{ComputeMode, EngineConfig};
use nichols_core::racks::{
    affine_rack, conjugation_rack, cube_faces_rack, cube_faces_rack_clockwise, rack_from_table, Cocycle, Rack,
};
use nichols_core::scalars::{lcm, Cyc, CyclotomicField, Field};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Root {
    pub zeta: (i64, u32),
    #[serde(default)]
    pub coeff: Option<Rational>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
    Root(Root),
    Sum(Vec<Scalar>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Order {
    Fixed(u32),
    Named(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleSpec {
    Constant(Scalar),
    Matrix(Vec<Vec<Scalar>>),
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Counterclockwise,
    Clockwise,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BraidingSpec {
    Diagonal {
        q: Vec<Vec<Scalar>>,
    },
    Cartan {
        matrix: Vec<Vec<i64>>,
        q: Scalar,
    },
    RackAffine {
        moduli: Vec<u32>,
        g: Vec<Vec<i64>>,
        cocycle: CocycleSpec,
    },
    RackConjugation {
        n: usize,
        cocycle: CocycleSpec,
    },
    RackCube {
        #[serde(default)]
        orientation: Orientation,
        cocycle: CocycleSpec,
    },
    RackTable {
        table: Vec<Vec<usize>>,
        cocycle: CocycleSpec,
    },
    Jordanian {
        theta: usize,
        q: Scalar,
    },
    Custom {
        n: usize,
        /// `[i, j, k, l, c]` for `c(x_i⊗x_j) ∋ c · x_k⊗x_l`.
        coefficients: Vec<(usize, usize, usize, usize, Scalar)>,
    },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub max_degree: Option<usize>,
    pub dense_cap: Option<u64>,
    pub memory_budget: Option<u64>,
    pub primes: Option<usize>,
    pub exact_threshold: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    #[serde(default = "auto")]
    pub scalars: Order,
    pub braiding: BraidingSpec,
    #[serde(default)]
    pub caps: Caps,
}

fn auto() -> Order {
    Order::Named("auto".into())
}

/// A parsed spec: the braided space and, for rack families, the rack.
#[derive(Debug, Clone)]
pub struct Built {
    pub name: String,
    pub space: Result<BraidedSpace, String>,
    pub rack: Option<Result<Rack, String>>,
    pub caps: Caps,
}

impl Caps {
    pub fn apply(&self, cfg: &mut EngineConfig) {
        if let Some(v) = self.max_degree {
            cfg.max_degree = v;
        }
        if let Some(v) = self.dense_cap {
            cfg.dense_cap = v;
        }
        if let Some(v) = self.memory_budget {
            cfg.memory_budget = v;
        }
        if let Some(v) = self.primes {
            cfg.primes = v;
        }
        if let Some(v) = self.exact_threshold {
            cfg.exact_threshold = v;
        }
    }
}

pub fn default_config() -> EngineConfig {
    EngineConfig { mode: ComputeMode::Modular, ..EngineConfig::default() }
}

impl Scalar {
    fn orders(&self, out: &mut Vec<u32>) {
        match self {
            Scalar::Root(r) => out.push(r.zeta.1),
            Scalar::Sum(v) => v.iter().for_each(|s| s.orders(out)),
            Scalar::Int(_) | Scalar::Text(_) => {}
        }
    }

    pub fn to_cyc(&self, k: &CyclotomicField) -> Result<Cyc, String> {
        match self {
            Scalar::Int(v) => Ok(k.from_i64(*v)),
            Scalar::Text(s) => Ok(k.from_rational(parse_rational(s)?)),
            Scalar::Root(r) => {
                let (e, n) = r.zeta;
                let z = k.root_of_unity(e, n).map_err(|e| e.to_string())?;
                let c = match &r.coeff {
                    None => k.one(),
                    Some(Rational::Int(v)) => k.from_i64(*v),
                    Some(Rational::Text(s)) => k.from_rational(parse_rational(s)?),
                };
                Ok(k.mul(&c, &z))
            }
            Scalar::Sum(v) => v.iter().try_fold(k.zero(), |acc, s| Ok(k.add(&acc, &s.to_cyc(k)?))),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    BigRational::from_str(s.trim()).map_err(|_| format!("not a rational number: {s:?}"))
}

/// Reads a scalar written in spec-file syntax, e.g. `-1` or `"1/2"`.
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    serde_json::from_str(text).or_else(|_| serde_json::from_str(&format!("{text:?}"))).map_err(|e| e.to_string())
}

impl BraidingSpec {
    fn scalars(&self) -> Vec<&Scalar> {
        match self {
            BraidingSpec::Diagonal { q } => q.iter().flatten().collect(),
            BraidingSpec::Cartan { q, .. } | BraidingSpec::Jordanian { q, .. } => vec![q],
            BraidingSpec::RackAffine { cocycle: c, .. }
            | BraidingSpec::RackConjugation { cocycle: c, .. }
            | BraidingSpec::RackCube { cocycle: c, .. }
            | BraidingSpec::RackTable { cocycle: c, .. } => match c {
                CocycleSpec::Constant(s) => vec![s],
                CocycleSpec::Matrix(m) => m.iter().flatten().collect(),
            },
            BraidingSpec::Custom { coefficients, .. } => coefficients.iter().map(|t| &t.4).collect(),
        }
    }
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// `ℚ(ζ_N)` with `N` given, or the lcm of every root order used.
    pub fn field(&self) -> Result<CyclotomicField, String> {
        let order = match &self.scalars {
            Order::Fixed(n) => *n,
            Order::Named(s) if s == "auto" => {
                let mut orders = Vec::new();
                self.braiding.scalars().iter().for_each(|s| s.orders(&mut orders));
                if orders.contains(&0) {
                    return Err("root-of-unity order must be positive".into());
                }
                orders.into_iter().fold(1, lcm)
            }
            Order::Named(s) => return Err(format!("scalars must be a positive integer or \"auto\", got {s:?}")),
        };
        CyclotomicField::new(order).map_err(|e| e.to_string())
    }

    pub fn build(&self) -> Result<Built, String> {
        let k = self.field()?;
        let one = |s: &Scalar| s.to_cyc(&k);
        let matrix = |m: &[Vec<Scalar>]| -> Result<Vec<Vec<Cyc>>, String> {
            m.iter().map(|row| row.iter().map(one).collect()).collect()
        };
        let rack = match &self.braiding {
            BraidingSpec::RackAffine { moduli, g, .. } => Some(affine_rack(moduli, g).map_err(|e| e.to_string())),
            BraidingSpec::RackConjugation { n, .. } => Some(conjugation_rack(*n).map_err(|e| e.to_string())),
            BraidingSpec::RackCube { orientation, .. } => Some(Ok(match orientation {
                Orientation::Counterclockwise => cube_faces_rack(),
                Orientation::Clockwise => cube_faces_rack_clockwise(),
            })),
            BraidingSpec::RackTable { table, .. } => {
                Some(rack_from_table(table.clone(), &self.name).map_err(|e| e.to_string()))
            }
            _ => None,
        };
        let space = match (&self.braiding, &rack) {
            (_, Some(Err(e))) => Err(e.clone()),
            (
                BraidingSpec::RackAffine { cocycle, .. }
                | BraidingSpec::RackConjugation { cocycle, .. }
                | BraidingSpec::RackCube { cocycle, .. }
                | BraidingSpec::RackTable { cocycle, .. },
                Some(Ok(r)),
            ) => {
                let n = r.size();
                let q = match cocycle {
                    CocycleSpec::Constant(s) => vec![vec![one(s)?; n]; n],
                    CocycleSpec::Matrix(m) => matrix(m)?,
                };
                rack_braiding(r, &Cocycle { field: k.clone(), q }).map_err(|e| e.to_string())
            }
            (BraidingSpec::Diagonal { q }, _) => diagonal_braiding(&k, &matrix(q)?).map_err(|e| e.to_string()),
            (BraidingSpec::Cartan { matrix: a, q }, _) => cartan_braiding(&k, a, &one(q)?).map_err(|e| e.to_string()),
            (BraidingSpec::Jordanian { theta, q }, _) => {
                jordanian_braiding(&k, *theta, &one(q)?).map_err(|e| e.to_string())
            }
            (BraidingSpec::Custom { n, coefficients }, _) => {
                let coeffs = coefficients
                    .iter()
                    .map(|(i, j, a, b, c)| Ok((*i, *j, *a, *b, one(c)?)))
                    .collect::<Result<Vec<_>, String>>()?;
                custom_braiding(*n, &k, coeffs).map_err(|e| e.to_string())
            }
            _ => unreachable!("rack families always carry a rack"),
        };
        Ok(Built { name: self.name.clone(), space, rack, caps: self.caps.clone() })
    }
}
