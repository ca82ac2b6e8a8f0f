//! Scenario configuration: the JSON document accepted by `compute-h1` and
//! `decide`.
//!
//! Complex entries are `[re, im]` pairs; lattice matrices are plain integer
//! arrays. Unknown fields are rejected. Defaults are filled in explicitly
//! so the echoed configuration in every report is self-contained.

use serde::{Deserialize, Serialize};
use twisted_weyl::automorphism::{Automorphism, Kind};
use twisted_weyl::int_linalg::IntMat;
use twisted_weyl::linalg::{c, CMat};
use twisted_weyl::{Config, Error, Family, Group, GroupDescriptor, GroupElement};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_or_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<Vec<GroupCfg>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismCfg {
    pub kind: String,
    pub matrix: serde_json::Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionCfg {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integers: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesCfg {
    #[serde(default = "default_membership")]
    pub membership: f64,
    #[serde(default = "default_witness")]
    pub witness: f64,
    #[serde(default = "default_rank")]
    pub rank_threshold: f64,
}

fn default_membership() -> f64 {
    1e-9
}
fn default_witness() -> f64 {
    1e-7
}
fn default_rank() -> f64 {
    1e-8
}

impl Default for TolerancesCfg {
    fn default() -> Self {
        TolerancesCfg {
            membership: default_membership(),
            witness: default_witness(),
            rank_threshold: default_rank(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchCfg {
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_restarts() -> usize {
    64
}
fn default_budget() -> usize {
    64
}

impl Default for SearchCfg {
    fn default() -> Self {
        SearchCfg {
            restarts: default_restarts(),
            budget: default_budget(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub group: GroupCfg,
    pub automorphism: AutomorphismCfg,
    pub action: ActionCfg,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(Vec<f64>, Vec<f64>)>>,
    #[serde(default)]
    pub tolerances: TolerancesCfg,
    #[serde(default)]
    pub search: SearchCfg,
    #[serde(default)]
    pub seed: u64,
}

fn parse_family(cfg: &GroupCfg) -> Result<Family, Error> {
    if let Some(product) = &cfg.product {
        if cfg.family.is_some() || cfg.n_or_k.is_some() {
            return Err(Error::UnsupportedFamily(
                "group must be either a family or a product, not both".into(),
            ));
        }
        let factors = product
            .iter()
            .map(parse_family)
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Family::Product(factors));
    }
    let name = cfg
        .family
        .as_deref()
        .ok_or_else(|| Error::UnsupportedFamily("missing family".into()))?;
    let n = cfg
        .n_or_k
        .ok_or_else(|| Error::UnsupportedFamily(format!("{name}: missing n_or_k")))?;
    match name.to_ascii_lowercase().as_str() {
        "unitary" | "u" => Ok(Family::Unitary(n)),
        "special_unitary" | "su" => Ok(Family::SpecialUnitary(n)),
        "special_orthogonal" | "so" => Ok(Family::SpecialOrthogonal(n)),
        "torus" | "t" => Ok(Family::Torus(n)),
        other => Err(Error::UnsupportedFamily(other.into())),
    }
}

fn parse_complex_matrix(v: &serde_json::Value, n: usize) -> Result<CMat, Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Internal("matrix must be an array of rows".into()))?;
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: rows.len(),
            cols: rows
                .first()
                .and_then(|r| r.as_array())
                .map_or(0, |r| r.len()),
        });
    }
    let mut m = CMat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| Error::Internal(format!("row {i} must have {n} entries")))?;
        for (j, entry) in row.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Internal("complex entries are [re, im] pairs".into()))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Internal("re not a number".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Internal("im not a number".into()))?;
            m[(i, j)] = c(re, im);
        }
    }
    Ok(m)
}

fn parse_integer_matrix(v: &serde_json::Value, n: usize) -> Result<IntMat, Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Internal("matrix must be an array of rows".into()))?;
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: rows.len(),
            cols: 0,
        });
    }
    let mut data = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| Error::Internal(format!("row {i} must have {n} entries")))?;
        let mut out = Vec::with_capacity(n);
        for entry in row {
            out.push(
                entry
                    .as_i64()
                    .ok_or_else(|| Error::Internal("lattice entries are integers".into()))?,
            );
        }
        data.push(out);
    }
    IntMat::from_rows(&data)
}

pub struct Scenario {
    pub group: Group,
    pub sigma: Automorphism,
    pub config: Config,
}

impl ScenarioConfig {
    pub fn build(&self) -> Result<Scenario, Error> {
        let family = parse_family(&self.group)?;
        let group = GroupDescriptor::with_tolerance(family, self.tolerances.membership)?;
        let n = group.ambient_size;
        let kind = match self.automorphism.kind.to_ascii_lowercase().as_str() {
            "hol" => Kind::Hol(parse_complex_matrix(&self.automorphism.matrix, n)?),
            "antihol" => Kind::AntiHol(parse_complex_matrix(&self.automorphism.matrix, n)?),
            "lattice" => Kind::Lattice(parse_integer_matrix(&self.automorphism.matrix, n)?),
            other => {
                return Err(Error::UnsupportedFamily(format!(
                    "automorphism kind {other}"
                )))
            }
        };
        let sigma = Automorphism::new(kind, &group)?;
        match (self.action.cyclic, self.action.integers) {
            (Some(_), None) | (None, Some(true)) => {}
            _ => {
                return Err(Error::InvalidParameter {
                    family: "action".into(),
                    message: "specify exactly one of {\"cyclic\": n} or {\"integers\": true}"
                        .into(),
                })
            }
        }
        let mut config = Config {
            seed: self.seed,
            ..Config::default()
        };
        config.tolerances.membership = self.tolerances.membership;
        config.tolerances.witness = self.tolerances.witness;
        config.tolerances.rank_rel = self.tolerances.rank_threshold;
        config.search.restarts = self.search.restarts;
        config.search.budget = self.search.budget;
        Ok(Scenario {
            group,
            sigma,
            config,
        })
    }

    /// Decision pairs as group elements `exp(i diag(θ))`.
    pub fn pair_elements(&self, group: &Group) -> Result<Vec<(GroupElement, GroupElement)>, Error> {
        let n = group.ambient_size;
        let mut out = Vec::new();
        let Some(pairs) = &self.pairs else {
            return Ok(out);
        };
        for (a, b) in pairs {
            out.push((phase_element(group, a, n)?, phase_element(group, b, n)?));
        }
        Ok(out)
    }
}

fn phase_element(group: &Group, phases: &[f64], n: usize) -> Result<GroupElement, Error> {
    if phases.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: phases.len(),
            cols: 1,
        });
    }
    let mut m = CMat::zeros(n, n);
    for (i, &t) in phases.iter().enumerate() {
        m[(i, i)] = c(t.cos(), t.sin());
    }
    GroupElement::new(group, m)
}
