//! Run configuration: a TOML file plus `--key value` overrides.
//!
//! ```toml
//! experiment = "breuer-major"
//! seed = 7
//! workers = 4          # optional
//! out = "runs/bm"      # optional
//!
//! [params]
//! rho = 0.5
//! n = [256, 4096]
//! ```
//!
//! Flags win over the file. Keys that the experiment does not declare are
//! rejected, and a run without a seed is refused.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::Value as Json;

use crate::CliError;

/// Type of one experiment parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Int,
    Float,
    IntList,
    FloatList,
}

/// One declared experiment parameter.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    /// Default in flag syntax (`"0.5"`, `"256,4096"`).
    pub default: &'static str,
    pub doc: &'static str,
}

/// A parsed parameter value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    IntList(Vec<u64>),
    FloatList(Vec<f64>),
}

impl Value {
    fn parse(kind: Kind, raw: &str) -> Result<Value, String> {
        let ints = |s: &str| -> Result<Vec<u64>, String> {
            s.split(',').map(|t| t.trim().parse::<u64>().map_err(|e| format!("`{t}`: {e}"))).collect()
        };
        let floats = |s: &str| -> Result<Vec<f64>, String> {
            s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"))).collect()
        };
        Ok(match kind {
            Kind::Int => Value::Int(raw.trim().parse().map_err(|e| format!("`{raw}`: {e}"))?),
            Kind::Float => Value::Float(raw.trim().parse().map_err(|e| format!("`{raw}`: {e}"))?),
            Kind::IntList => Value::IntList(ints(raw)?),
            Kind::FloatList => Value::FloatList(floats(raw)?),
        })
    }

    fn from_toml(kind: Kind, v: &toml::Value) -> Result<Value, String> {
        let as_f64 = |v: &toml::Value| match v {
            toml::Value::Float(x) => Ok(*x),
            toml::Value::Integer(i) => Ok(*i as f64),
            other => Err(format!("expected a number, got {other}")),
        };
        let as_u64 = |v: &toml::Value| match v {
            toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
            other => Err(format!("expected a nonnegative integer, got {other}")),
        };
        let list = |v: &toml::Value| match v {
            toml::Value::Array(a) => a.clone(),
            scalar => vec![scalar.clone()],
        };
        Ok(match kind {
            Kind::Int => Value::Int(as_u64(v)?),
            Kind::Float => Value::Float(as_f64(v)?),
            Kind::IntList => Value::IntList(list(v).iter().map(as_u64).collect::<Result<_, _>>()?),
            Kind::FloatList => Value::FloatList(list(v).iter().map(as_f64).collect::<Result<_, _>>()?),
        })
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => Json::from(*i),
            Value::Float(x) => Json::from(*x),
            Value::IntList(v) => Json::from(v.clone()),
            Value::FloatList(v) => Json::from(v.clone()),
        }
    }
}

impl fmt::Display for Value {
    /// TOML syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |parts: Vec<String>| format!("[{}]", parts.join(", "));
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::IntList(v) => write!(f, "{}", join(v.iter().map(|i| i.to_string()).collect())),
            Value::FloatList(v) => write!(f, "{}", join(v.iter().map(|x| format!("{x:?}")).collect())),
        }
    }
}

/// Fully resolved parameters of one run (defaults filled in).
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    values: BTreeMap<String, Value>,
}

impl Params {
    pub fn defaults(specs: &[ParamSpec]) -> Self {
        let values = specs
            .iter()
            .map(|s| (s.name.to_string(), Value::parse(s.kind, s.default).expect("valid default")))
            .collect();
        Params { values }
    }

    fn value(&self, name: &str) -> &Value {
        self.values
            .get(name)
            .unwrap_or_else(|| panic!("experiment reads undeclared parameter `{name}`"))
    }

    pub fn int(&self, name: &str) -> u64 {
        match self.value(name) {
            Value::Int(i) => *i,
            other => panic!("parameter `{name}` is {other:?}, not an integer"),
        }
    }

    pub fn usize(&self, name: &str) -> usize {
        self.int(name) as usize
    }

    pub fn float(&self, name: &str) -> f64 {
        match self.value(name) {
            Value::Float(x) => *x,
            other => panic!("parameter `{name}` is {other:?}, not a float"),
        }
    }

    pub fn ints(&self, name: &str) -> Vec<usize> {
        match self.value(name) {
            Value::IntList(v) => v.iter().map(|&i| i as usize).collect(),
            other => panic!("parameter `{name}` is {other:?}, not an integer list"),
        }
    }

    pub fn floats(&self, name: &str) -> Vec<f64> {
        match self.value(name) {
            Value::FloatList(v) => v.clone(),
            other => panic!("parameter `{name}` is {other:?}, not a float list"),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> + '_ {
        self.values.iter()
    }

    pub fn to_json(&self) -> Json {
        Json::Object(self.values.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
    }

    /// Override one parameter, checking the name and type.
    pub fn set(&mut self, specs: &[ParamSpec], name: &str, raw: &str) -> Result<(), CliError> {
        let spec = find_spec(specs, name)?;
        let v = Value::parse(spec.kind, raw).map_err(|e| CliError::Config(format!("--{name}: {e}")))?;
        self.values.insert(name.to_string(), v);
        Ok(())
    }

    fn set_toml(&mut self, specs: &[ParamSpec], name: &str, v: &toml::Value) -> Result<(), CliError> {
        let spec = find_spec(specs, name)?;
        let v = Value::from_toml(spec.kind, v).map_err(|e| CliError::Config(format!("params.{name}: {e}")))?;
        self.values.insert(name.to_string(), v);
        Ok(())
    }
}

fn find_spec<'a>(specs: &'a [ParamSpec], name: &str) -> Result<&'a ParamSpec, CliError> {
    specs.iter().find(|s| s.name == name).ok_or_else(|| {
        let known: Vec<&str> = specs.iter().map(|s| s.name).collect();
        CliError::Config(format!("unknown parameter `{name}` (known: {})", known.join(", ")))
    })
}

/// Everything needed to run one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub params: Params,
}

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "CHAOSLAB_OUT";

impl ExperimentConfig {
    /// Output directory: `--out`/`out`, else `$CHAOSLAB_OUT/<experiment>`,
    /// else `chaoslab-out/<experiment>`.
    pub fn out_dir(&self) -> PathBuf {
        if let Some(p) = &self.out {
            return p.clone();
        }
        let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("chaoslab-out"));
        root.join(&self.experiment)
    }
}

#[derive(Default)]
struct Partial {
    experiment: Option<String>,
    seed: Option<u64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    params: Vec<(String, toml::Value)>,
}

fn read_file(path: &Path) -> Result<Partial, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_toml(&text)
}

/// Parse a config file body. Only `experiment`, `seed`, `workers`, `out` and
/// a `[params]` table are allowed at the top level.
fn parse_toml(text: &str) -> Result<Partial, CliError> {
    let table: toml::Table = text.parse().map_err(|e| CliError::Config(format!("config: {e}")))?;
    let mut p = Partial::default();
    for (k, v) in table {
        let bad = |what: &str| CliError::Config(format!("`{k}` must be {what}"));
        match k.as_str() {
            "experiment" => p.experiment = Some(v.as_str().ok_or_else(|| bad("a string"))?.to_string()),
            "seed" => {
                let s = v.as_integer().filter(|s| *s >= 0).ok_or_else(|| bad("a nonnegative integer"))?;
                p.seed = Some(s as u64);
            }
            "workers" => {
                let w = v.as_integer().filter(|w| *w >= 1).ok_or_else(|| bad("a positive integer"))?;
                p.workers = Some(w as usize);
            }
            "out" => p.out = Some(PathBuf::from(v.as_str().ok_or_else(|| bad("a string"))?)),
            "params" => {
                let t = v.as_table().ok_or_else(|| bad("a table"))?;
                p.params = t.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            }
            _ => return Err(CliError::Config(format!("unknown config key `{k}`"))),
        }
    }
    Ok(p)
}

/// Build a config from an optional experiment name and `run` arguments:
/// `--config FILE`, `--seed N`, `--workers N`, `--out DIR` and
/// `--<param> VALUE` (also `--<param>=VALUE`).
pub fn resolve(
    name: Option<&str>,
    args: &[String],
    lookup: impl Fn(&str) -> Option<&'static [ParamSpec]>,
) -> Result<ExperimentConfig, CliError> {
    let mut pairs = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let key = a
            .strip_prefix("--")
            .ok_or_else(|| CliError::Config(format!("expected `--key value`, got `{a}`")))?;
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| CliError::Config(format!("--{key} needs a value")))?;
                (key.to_string(), v.clone())
            }
        };
        pairs.push((key, value));
    }

    let mut base = match pairs.iter().find(|(k, _)| k == "config") {
        Some((_, path)) => read_file(Path::new(path))?,
        None => Partial::default(),
    };
    let experiment = match (name, &base.experiment) {
        (Some(n), Some(f)) if n != f => {
            return Err(CliError::Config(format!("command line names `{n}` but the config file names `{f}`")));
        }
        (Some(n), _) => n.to_string(),
        (None, Some(f)) => f.clone(),
        (None, None) => return Err(CliError::Config("no experiment named".into())),
    };
    let specs = lookup(&experiment).ok_or_else(|| CliError::Config(format!("unknown experiment `{experiment}`")))?;

    let mut params = Params::defaults(specs);
    for (k, v) in &base.params {
        params.set_toml(specs, k, v)?;
    }
    for (k, v) in &pairs {
        let num = |v: &str| v.parse::<u64>().map_err(|e| CliError::Config(format!("--{k}: {e}")));
        match k.as_str() {
            "config" => {}
            "seed" => base.seed = Some(num(v)?),
            "workers" => {
                let w = num(v)? as usize;
                if w == 0 {
                    return Err(CliError::Config("--workers must be at least 1".into()));
                }
                base.workers = Some(w);
            }
            "out" => base.out = Some(PathBuf::from(v)),
            _ => params.set(specs, k, v)?,
        }
    }
    let seed = base.seed.ok_or_else(|| CliError::Config("a seed is required (--seed N or `seed = N`)".into()))?;
    Ok(ExperimentConfig {
        experiment,
        seed,
        workers: base.workers,
        out: base.out,
        params,
    })
}

/// A commented TOML template with every parameter at its default.
pub fn template(name: &str, summary: &str, specs: &[ParamSpec]) -> String {
    let mut s = format!("# {summary}\nexperiment = \"{name}\"\nseed = 0\n\n[params]\n");
    let defaults = Params::defaults(specs);
    for spec in specs {
        s.push_str(&format!("# {}\n{} = {}\n", spec.doc, spec.name, defaults.value(spec.name)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPECS: &[ParamSpec] = &[
        ParamSpec { name: "rho", kind: Kind::Float, default: "0.5", doc: "correlation" },
        ParamSpec { name: "n", kind: Kind::IntList, default: "4,8", doc: "sizes" },
        ParamSpec { name: "reps", kind: Kind::Int, default: "10", doc: "replicates" },
    ];

    fn lookup(name: &str) -> Option<&'static [ParamSpec]> {
        (name == "demo").then_some(SPECS)
    }

    fn args(s: &[&str]) -> Vec<String> {
        s.iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn flags_override_defaults() {
        let c = resolve(Some("demo"), &args(&["--seed", "3", "--n", "1,2,3", "--rho=0.25"]), lookup).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.params.ints("n"), vec![1, 2, 3]);
        assert_eq!(c.params.float("rho"), 0.25);
        assert_eq!(c.params.usize("reps"), 10);
    }

    #[test]
    fn seed_is_mandatory_and_unknown_keys_fail() {
        assert!(matches!(resolve(Some("demo"), &[], lookup), Err(CliError::Config(_))));
        assert!(resolve(Some("demo"), &args(&["--seed", "1", "--bogus", "2"]), lookup).is_err());
        assert!(resolve(Some("nope"), &args(&["--seed", "1"]), lookup).is_err());
        assert!(resolve(Some("demo"), &args(&["--seed", "1", "--reps", "x"]), lookup).is_err());
        assert!(resolve(Some("demo"), &args(&["--seed"]), lookup).is_err());
    }

    #[test]
    fn file_then_flags() {
        let dir = std::env::temp_dir().join(format!("chaoslab-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.toml");
        std::fs::write(&path, "experiment = \"demo\"\nseed = 9\n[params]\nrho = 1\nn = [16]\n").unwrap();
        let p = path.to_str().unwrap();
        let c = resolve(None, &args(&["--config", p, "--n", "32"]), lookup).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.params.float("rho"), 1.0);
        assert_eq!(c.params.ints("n"), vec![32]);
        std::fs::write(&path, "experiment = \"demo\"\nseed = 9\ncolour = 1\n").unwrap();
        assert!(resolve(None, &args(&["--config", p]), lookup).is_err());
        std::fs::write(&path, "experiment = \"demo\"\nseed = 9\n[params]\nrhoo = 1\n").unwrap();
        assert!(resolve(None, &args(&["--config", p]), lookup).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn template_round_trips() {
        let t = template("demo", "a demo", SPECS);
        let p = parse_toml(&t).unwrap();
        assert_eq!(p.experiment.as_deref(), Some("demo"));
        let mut params = Params::defaults(SPECS);
        for (k, v) in &p.params {
            params.set_toml(SPECS, k, v).unwrap();
        }
        assert_eq!(params, Params::defaults(SPECS));
    }
}
