//! Flat model strings such as `smo:alpha=0.35,beta=0.7`.
//!
//! Grammar: `name(:key=value(,key=value)*)?`. Names are `indep`, `comono`,
//! `fgm` (theta), `mo` (alpha, beta), `smo` (alpha, beta), `ag` (alpha, beta,
//! theta), `sag` (alpha, beta, theta) and `t` (nu, rho). A `surv-` prefix
//! applies the survival transform to any of them. Every listed key is
//! required, unknown or repeated keys are rejected.

use std::collections::BTreeMap;

use tailpath::CopulaModel;

pub fn parse_model(spec: &str) -> Result<CopulaModel, String> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("surv-") {
        return parse_model(rest).map(CopulaModel::survival);
    }
    let (name, params) = match spec.split_once(':') {
        Some((name, params)) => (name, parse_params(params)?),
        None => (spec, BTreeMap::new()),
    };
    let mut params = Params { name, map: params };
    let model = match name {
        "indep" => CopulaModel::Independence,
        "comono" => CopulaModel::Comonotone,
        "fgm" => build(CopulaModel::fgm(params.take("theta")?))?,
        "mo" | "smo" => {
            let m = build(CopulaModel::marshall_olkin(params.take("alpha")?, params.take("beta")?))?;
            if name == "smo" { m.survival() } else { m }
        }
        "ag" | "sag" => {
            let (a, b, t) = (params.take("alpha")?, params.take("beta")?, params.take("theta")?);
            let m = build(CopulaModel::asym_gumbel(a, b, t))?;
            if name == "sag" { m.survival() } else { m }
        }
        "t" => build(CopulaModel::student_t(params.take("nu")?, params.take("rho")?))?,
        "" => return Err("empty model name".into()),
        other => {
            return Err(format!(
                "unknown model '{other}' (expected indep, comono, fgm, mo, smo, ag, sag or t, optionally prefixed by surv-)"
            ))
        }
    };
    params.finish()?;
    Ok(model)
}

fn build(model: tailpath::Result<CopulaModel>) -> Result<CopulaModel, String> {
    model.map_err(|e| e.to_string())
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, String> {
    let mut map = BTreeMap::new();
    for item in s.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, found '{item}'"))?;
        let key = key.trim();
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("'{value}' is not a number (key '{key}')"))?;
        if map.insert(key.to_string(), value).is_some() {
            return Err(format!("parameter '{key}' given twice"));
        }
    }
    Ok(map)
}

struct Params<'a> {
    name: &'a str,
    map: BTreeMap<String, f64>,
}

impl Params<'_> {
    fn take(&mut self, key: &str) -> Result<f64, String> {
        self.map
            .remove(key)
            .ok_or_else(|| format!("model '{}' needs parameter '{key}'", self.name))
    }

    fn finish(self) -> Result<(), String> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(key) => Err(format!("model '{}' has no parameter '{key}'", self.name)),
        }
    }
}
