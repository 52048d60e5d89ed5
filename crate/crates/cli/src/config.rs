//! JSON problem files.

use std::path::Path;

use apollonius_core::solver::{Configuration, InputObject};
use apollonius_core::{BaseField, FieldDescriptor};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A coordinate written either as a JSON number or as a string such as "7/8".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn text(&self) -> String {
        match self {
            Num::Int(n) => n.to_string(),
            Num::Text(s) => s.trim().to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

impl FieldSpec {
    /// "Q", "Fp:13" or "13".
    pub fn parse(s: &str) -> Result<FieldSpec, CliError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Q);
        }
        let n = t.strip_prefix("Fp:").or_else(|| t.strip_prefix("fp:")).or_else(|| t.strip_prefix("F")).unwrap_or(t);
        n.parse().map(FieldSpec::Fp).map_err(|_| CliError::Usage(format!("bad field `{s}`")))
    }

    pub fn descriptor(&self) -> Result<FieldDescriptor, CliError> {
        Ok(match self {
            FieldSpec::Q => FieldDescriptor::rationals(),
            FieldSpec::Fp(p) => FieldDescriptor::new(BaseField::prime(*p).map_err(|e| CliError::Usage(e.to_string()))?),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircleSpec {
    pub center: [Num; 2],
    pub r2: Num,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectSpec {
    Circle(CircleSpec),
    Point([Num; 2]),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Options {
    pub check_main: bool,
    pub per_point: bool,
    pub duality: bool,
    pub svg: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options { check_main: true, per_point: true, duality: false, svg: None }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub field: FieldSpec,
    pub objects: Vec<ObjectSpec>,
    #[serde(default)]
    pub radii_branches: Option<[i8; 3]>,
    #[serde(default)]
    pub options: Options,
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ProblemConfig = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        if cfg.objects.len() != 3 {
            return Err(CliError::Usage(format!("config: expected 3 objects, found {}", cfg.objects.len())));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Three unit-free circles given as (a, b, r²) strings.
    pub fn circles(field: FieldSpec, data: [(&str, &str, &str); 3]) -> Self {
        let t = |s: &str| Num::Text(s.to_string());
        ProblemConfig {
            field,
            objects: data
                .iter()
                .map(|(a, b, r2)| ObjectSpec::Circle(CircleSpec { center: [t(a), t(b)], r2: t(r2) }))
                .collect(),
            radii_branches: None,
            options: Options::default(),
        }
    }

    pub fn branches(&self) -> [i8; 3] {
        self.radii_branches.unwrap_or([1, 1, 1])
    }

    /// The configuration over the configured field.
    pub fn build(&self) -> Result<Configuration, CliError> {
        self.build_over(&self.field.descriptor()?).map_err(|e| match e {
            CliError::Math(e) => CliError::Usage(e.to_string()),
            e => e,
        })
    }

    /// The configuration with every coordinate read in `field`; fails with
    /// a math error when a denominator vanishes there.
    pub fn build_over(&self, field: &FieldDescriptor) -> Result<Configuration, CliError> {
        let parse = |n: &Num| field.parse(&n.text()).map_err(CliError::from);
        let objs: Vec<InputObject> = self
            .objects
            .iter()
            .map(|o| match o {
                ObjectSpec::Circle(c) => Ok(InputObject::circle(&parse(&c.center[0])?, &parse(&c.center[1])?, &parse(&c.r2)?)),
                ObjectSpec::Point(p) => Ok(InputObject::point(&parse(&p[0])?, &parse(&p[1])?)),
            })
            .collect::<Result<_, CliError>>()?;
        let objs: [InputObject; 3] = objs.try_into().map_err(|_| CliError::Usage("expected 3 objects".into()))?;
        Ok(Configuration::new(objs)?)
    }
}
