//! Bundle spec files: `{"schema": "fellbundle/1", "group": ..., "ambient_dim": n, "fibers": {"s": [matrix, ...]}}`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use fell_core::{Bundle, CMatrix, Cx, FiniteGroup, GradedBundle};
use serde_json::{json, Map, Value};

use crate::CliError;

pub const SCHEMA: &str = "fellbundle/1";

/// How a group was named, so it can be written back out.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

impl GroupSpec {
    /// `cyclic:4`, `dihedral:3`, `symmetric:3`, `trivial`, or `A*B`.
    pub fn parse_short(s: &str) -> Result<Self, CliError> {
        if let Some((a, b)) = s.split_once('*') {
            return Ok(GroupSpec::Product(Box::new(Self::parse_short(a)?), Box::new(Self::parse_short(b)?)));
        }
        let bad = || CliError::Validation(format!("group `{s}`: expected kind:param, e.g. cyclic:4"));
        if s.trim() == "trivial" {
            return Ok(GroupSpec::Trivial);
        }
        let (kind, param) = s.split_once(':').ok_or_else(bad)?;
        let m: usize = param.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "cyclic" => Ok(GroupSpec::Cyclic(m)),
            "dihedral" => Ok(GroupSpec::Dihedral(m)),
            "symmetric" => Ok(GroupSpec::Symmetric(m)),
            _ => Err(bad()),
        }
    }

    pub fn from_json(v: &Value, field: &str) -> Result<Self, CliError> {
        let obj = v.as_object().ok_or_else(|| CliError::Parse(format!("{field}: expected an object")))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::Parse(format!("{field}: missing string field `kind`")))?;
        let params = obj.get("params").and_then(Value::as_array).cloned().unwrap_or_default();
        let int = |i: usize| {
            params
                .get(i)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| CliError::Validation(format!("{field}.params[{i}]: expected a non-negative integer")))
        };
        match kind {
            "trivial" => Ok(GroupSpec::Trivial),
            "cyclic" => Ok(GroupSpec::Cyclic(int(0)?)),
            "dihedral" => Ok(GroupSpec::Dihedral(int(0)?)),
            "symmetric" => Ok(GroupSpec::Symmetric(int(0)?)),
            "direct_product" => {
                let part = |i: usize| {
                    params
                        .get(i)
                        .ok_or_else(|| CliError::Validation(format!("{field}.params[{i}]: missing factor")))
                        .and_then(|p| Self::from_json(p, &format!("{field}.params[{i}]")))
                };
                Ok(GroupSpec::Product(Box::new(part(0)?), Box::new(part(1)?)))
            }
            "table" => {
                let rows = obj
                    .get("table")
                    .and_then(Value::as_array)
                    .ok_or_else(|| CliError::Parse(format!("{field}: missing array field `table`")))?;
                let table = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        r.as_array()
                            .and_then(|r| r.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
                            .ok_or_else(|| CliError::Validation(format!("{field}.table[{i}]: expected integers")))
                    })
                    .collect::<Result<_, _>>()?;
                Ok(GroupSpec::Table(table))
            }
            other => Err(CliError::Validation(format!("{field}.kind: unknown group kind `{other}`"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroupSpec::Trivial => json!({"kind": "trivial", "params": []}),
            GroupSpec::Cyclic(m) => json!({"kind": "cyclic", "params": [m]}),
            GroupSpec::Dihedral(m) => json!({"kind": "dihedral", "params": [m]}),
            GroupSpec::Symmetric(m) => json!({"kind": "symmetric", "params": [m]}),
            GroupSpec::Product(a, b) => json!({"kind": "direct_product", "params": [a.to_json(), b.to_json()]}),
            GroupSpec::Table(t) => json!({"kind": "table", "table": t}),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup, CliError> {
        let g = match self {
            GroupSpec::Trivial => Ok(FiniteGroup::trivial()),
            GroupSpec::Cyclic(m) => FiniteGroup::cyclic(*m),
            GroupSpec::Dihedral(m) => FiniteGroup::dihedral(*m),
            GroupSpec::Symmetric(m) => FiniteGroup::symmetric(*m),
            GroupSpec::Product(a, b) => a.build()?.direct_product(&b.build()?),
            GroupSpec::Table(t) => FiniteGroup::from_table("table", t),
        };
        g.map_err(|e| CliError::Validation(format!("group: {e}")))
    }
}

/// A parsed bundle spec file.
#[derive(Clone, Debug)]
pub struct BundleSpec {
    pub group_spec: GroupSpec,
    pub group: Arc<FiniteGroup>,
    pub bundle: Bundle,
    pub normal_subgroup: Option<Vec<usize>>,
    pub tolerance: Option<f64>,
    pub multipliers: Option<BTreeMap<usize, CMatrix>>,
}

pub fn parse_matrix(v: &Value, n: usize, field: &str) -> Result<CMatrix, CliError> {
    let shape = || CliError::Validation(format!("{field}: expected a {n}x{n} matrix of [re, im] entries"));
    let rows = v.as_array().filter(|r| r.len() == n).ok_or_else(shape)?;
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        let row = row.as_array().filter(|r| r.len() == n).ok_or_else(shape)?;
        for x in row {
            let z = match x {
                Value::Number(a) => a.as_f64().map(|a| Cx::new(a, 0.0)),
                Value::Array(p) if p.len() == 2 => match (p[0].as_f64(), p[1].as_f64()) {
                    (Some(a), Some(b)) => Some(Cx::new(a, b)),
                    _ => None,
                },
                _ => None,
            };
            data.push(z.filter(|z| z.re.is_finite() && z.im.is_finite()).ok_or_else(shape)?);
        }
    }
    Ok(CMatrix::from_vec(n, n, data))
}

pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|z| json!([clean(z.re), clean(z.im)])).collect()))
            .collect(),
    )
}

/// `-0.0` prints as `-0.0`; normalize it so equal reports compare equal.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn element_key(key: &str, order: usize, field: &str) -> Result<usize, CliError> {
    key.parse::<usize>()
        .ok()
        .filter(|&s| s < order)
        .ok_or_else(|| CliError::Validation(format!("{field}: `{key}` is not an element index below {order}")))
}

pub fn parse_spec_str(text: &str, tol: f64) -> Result<BundleSpec, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| CliError::Parse("top level: expected an object".into()))?;
    if let Some(schema) = obj.get("schema") {
        if schema.as_str() != Some(SCHEMA) {
            return Err(CliError::Validation(format!("schema: expected \"{SCHEMA}\"")));
        }
    }
    let group_spec = GroupSpec::from_json(obj.get("group").ok_or_else(|| CliError::Parse("missing field `group`".into()))?, "group")?;
    let group = Arc::new(group_spec.build()?);
    let n = obj
        .get("ambient_dim")
        .ok_or_else(|| CliError::Parse("missing field `ambient_dim`".into()))?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation("ambient_dim: expected a positive integer".into()))? as usize;
    let fibers = obj
        .get("fibers")
        .ok_or_else(|| CliError::Parse("missing field `fibers`".into()))?
        .as_object()
        .ok_or_else(|| CliError::Validation("fibers: expected an object".into()))?;
    let mut spans = vec![Vec::new(); group.order()];
    for (key, mats) in fibers {
        let s = element_key(key, group.order(), "fibers")?;
        let list = mats.as_array().ok_or_else(|| CliError::Validation(format!("fibers.{key}: expected a list of matrices")))?;
        for (i, m) in list.iter().enumerate() {
            spans[s].push(parse_matrix(m, n, &format!("fibers.{key}[{i}]"))?);
        }
    }
    let bundle = GradedBundle::from_spanning(group.clone(), n, &spans, tol).map_err(|e| CliError::Validation(format!("fibers: {e}")))?;
    let normal_subgroup = match obj.get("normal_subgroup") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_index_list(v, "normal_subgroup")?),
    };
    let tolerance = match obj.get("tolerance") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_f64().filter(|t| *t > 0.0).ok_or_else(|| CliError::Validation("tolerance: expected a positive number".into()))?),
    };
    let multipliers = match obj.get("multipliers") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let m = v.as_object().ok_or_else(|| CliError::Validation("multipliers: expected an object".into()))?;
            let mut out = BTreeMap::new();
            for (key, mat) in m {
                out.insert(key.parse::<usize>().map_err(|_| CliError::Validation(format!("multipliers: bad key `{key}`")))?, parse_matrix(mat, n, &format!("multipliers.{key}"))?);
            }
            Some(out)
        }
    };
    Ok(BundleSpec { group_spec, group, bundle, normal_subgroup, tolerance, multipliers })
}

fn parse_index_list(v: &Value, field: &str) -> Result<Vec<usize>, CliError> {
    v.as_array()
        .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| CliError::Validation(format!("{field}: expected a list of element indices")))
}

/// Comma-separated element indices, as given to `--normal`.
pub fn parse_index_flag(s: &str, flag: &str) -> Result<Vec<usize>, CliError> {
    let mut v = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| CliError::Validation(format!("--{flag}: `{x}` is not an element index"))))
        .collect::<Result<Vec<_>, _>>()?;
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

pub fn read_spec(path: &Path, tol: f64) -> Result<BundleSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_spec_str(&text, tol).map_err(|e| e.with_context(&path.display().to_string()))
}

/// The spec of `bundle`, fibers written as their orthonormal bases.
pub fn bundle_json(group: &GroupSpec, bundle: &Bundle) -> Value {
    let mut fibers = Map::new();
    for (s, f) in bundle.fibers().iter().enumerate() {
        if f.dim() > 0 {
            fibers.insert(s.to_string(), Value::Array(f.basis().iter().map(matrix_json).collect()));
        }
    }
    json!({
        "schema": SCHEMA,
        "group": group.to_json(),
        "ambient_dim": bundle.ambient_dim(),
        "fibers": fibers,
    })
}

/// A witness file `{"f": {"s": matrix}}`.
pub fn parse_witness(text: &str, n: usize, order: usize) -> Result<BTreeMap<usize, CMatrix>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let f = v.get("f").and_then(Value::as_object).ok_or_else(|| CliError::Parse("witness: missing object field `f`".into()))?;
    let mut out = BTreeMap::new();
    for (key, m) in f {
        out.insert(element_key(key, order, "f")?, parse_matrix(m, n, &format!("f.{key}"))?);
    }
    Ok(out)
}
