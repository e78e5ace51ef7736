//! `key = value` configuration files.
//!
//! ```text
//! # estimation settings
//! EEsteps = 500
//! useIFDsampler = True
//! arclistFile = network.net
//! structParams = {Reciprocity, AinSpread, AltKTrianglesT(3)}
//! attrParams = {Sender(gender), Matching(region)}
//! ```
//!
//! Keys are case-insensitive and may appear once. `#` starts a comment.
//! List values are enclosed in braces and may span lines. An effect entry
//! may carry a parameter value, `Reciprocity = 4.25`, which is used by
//! simulation and validation. Relative file names are resolved against the
//! directory of the config file.

use std::path::{Path, PathBuf};

use crate::attributes::AttributeSet;
use crate::estimator::EeConfig;
use crate::model::{Effect, ModelSpec};
use crate::sampler::SamplerKind;
use crate::{Error, Result};

pub const DEFAULT_NUM_RUNS: usize = 8;
pub const DEFAULT_NUM_NETWORKS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct EffectEntry {
    /// Effect as written, e.g. `Sender(gender)`.
    pub spec: String,
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub ee: EeConfig,
    pub num_runs: usize,
    pub seed: u64,
    pub arclist_file: Option<PathBuf>,
    pub binattr_file: Option<PathBuf>,
    pub catattr_file: Option<PathBuf>,
    pub contattr_file: Option<PathBuf>,
    pub struct_params: Vec<EffectEntry>,
    pub attr_params: Vec<EffectEntry>,
    pub num_nodes: Option<usize>,
    pub burnin: Option<u64>,
    pub interval: Option<u64>,
    pub num_samples: usize,
    pub bin_true_fraction: Option<f64>,
    pub num_categories: Option<u32>,
    pub num_networks: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            ee: EeConfig::default(),
            num_runs: DEFAULT_NUM_RUNS,
            seed: 1,
            arclist_file: None,
            binattr_file: None,
            catattr_file: None,
            contattr_file: None,
            struct_params: Vec::new(),
            attr_params: Vec::new(),
            num_nodes: None,
            burnin: None,
            interval: None,
            num_samples: 1,
            bin_true_fraction: None,
            num_categories: None,
            num_networks: DEFAULT_NUM_NETWORKS,
        }
    }
}

struct Statement<'a> {
    line: usize,
    key: &'a str,
    value: String,
}

fn strip_comment(l: &str) -> &str {
    l.find('#').map_or(l, |k| &l[..k])
}

fn statements<'a>(text: &'a str, source: &str) -> Result<Vec<Statement<'a>>> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, strip_comment(l)));
    while let Some((line, l)) = lines.next() {
        if l.trim().is_empty() {
            continue;
        }
        let (key, rest) = l
            .split_once('=')
            .ok_or_else(|| Error::parse(source, line, format!("expected 'key = value', got '{}'", l.trim())))?;
        let key = key.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::parse(source, line, format!("bad key '{key}'")));
        }
        let mut value = rest.trim().to_string();
        if value.starts_with('{') {
            while !value.contains('}') {
                let (_, more) = lines
                    .next()
                    .ok_or_else(|| Error::parse(source, line, format!("unterminated list for {key}")))?;
                value.push(' ');
                value.push_str(more.trim());
            }
            if !value.ends_with('}') || value.matches('{').count() != 1 || value.matches('}').count() != 1 {
                return Err(Error::parse(source, line, format!("malformed list for {key}")));
            }
            value = value[1..value.len() - 1].to_string();
        }
        out.push(Statement { line, key, value });
    }
    Ok(out)
}

/// Splits on commas outside parentheses.
fn split_list(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts.retain(|p| !p.is_empty());
    parts
}

fn parse_effects(value: &str, source: &str, line: usize) -> Result<Vec<EffectEntry>> {
    split_list(value)
        .into_iter()
        .map(|item| {
            let (spec, v) = match item.rfind('=') {
                Some(k) if k > item.rfind(')').unwrap_or(0) => {
                    let v = item[k + 1..].trim();
                    let x: f64 = v
                        .parse()
                        .map_err(|_| Error::parse(source, line, format!("bad parameter value '{v}'")))?;
                    if !x.is_finite() {
                        return Err(Error::parse(
                            source,
                            line,
                            format!("non-finite value for {}", item[..k].trim()),
                        ));
                    }
                    (item[..k].trim(), Some(x))
                }
                _ => (item, None),
            };
            Ok(EffectEntry {
                spec: spec.to_string(),
                value: v,
            })
        })
        .collect()
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

impl Config {
    /// Parses config text; `base` resolves relative file names.
    pub fn parse(text: &str, source: &str, base: &Path) -> Result<Config> {
        let mut cfg = Config::default();
        let mut seen: Vec<String> = Vec::new();
        for st in statements(text, source)? {
            let key = st.key.to_ascii_lowercase();
            if seen.contains(&key) {
                return Err(Error::parse(source, st.line, format!("duplicate key {}", st.key)));
            }
            seen.push(key.clone());
            let v = st.value.trim();
            let err = |what: &str| Error::parse(source, st.line, format!("{} must be {what}, got '{v}'", st.key));
            let pos_f64 = || -> Result<f64> {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite() && *x > 0.0)
                    .ok_or_else(|| err("a positive number"))
            };
            let pos_usize = || -> Result<usize> {
                v.parse::<usize>()
                    .ok()
                    .filter(|x| *x > 0)
                    .ok_or_else(|| err("a positive integer"))
            };
            let path = || -> Result<PathBuf> {
                if v.is_empty() {
                    return Err(err("a file name"));
                }
                Ok(base.join(v))
            };
            match key.as_str() {
                "aca_s" => cfg.ee.aca_s = pos_f64()?,
                "aca_ee" => {
                    cfg.ee.aca_ee = v
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite() && *x >= 0.0)
                        .ok_or_else(|| err("a non-negative number"))?
                }
                "compc" => cfg.ee.comp_c = pos_f64()?,
                "samplersteps" => cfg.ee.sampler_steps = pos_usize()?,
                "ssteps" => cfg.ee.s_steps = v.parse().map_err(|_| err("a non-negative integer"))?,
                "eesteps" => cfg.ee.ee_steps = pos_usize()?,
                "einnersteps" => cfg.ee.ee_inner_steps = pos_usize()?,
                "useifdsampler" => {
                    cfg.ee.sampler = if parse_bool(v).ok_or_else(|| err("True or False"))? {
                        SamplerKind::Ifd
                    } else {
                        SamplerKind::Basic
                    }
                }
                "ifd_k" => cfg.ee.ifd_k = pos_f64()?,
                "numruns" => cfg.num_runs = pos_usize()?,
                "seed" => cfg.seed = v.parse().map_err(|_| err("a non-negative integer"))?,
                "arclistfile" => cfg.arclist_file = Some(path()?),
                "binattrfile" => cfg.binattr_file = Some(path()?),
                "catattrfile" => cfg.catattr_file = Some(path()?),
                "contattrfile" => cfg.contattr_file = Some(path()?),
                "structparams" => cfg.struct_params = parse_effects(v, source, st.line)?,
                "attrparams" => cfg.attr_params = parse_effects(v, source, st.line)?,
                "numnodes" => cfg.num_nodes = Some(pos_usize()?),
                "burnin" => cfg.burnin = Some(pos_usize()? as u64),
                "interval" => cfg.interval = Some(pos_usize()? as u64),
                "numsamples" => cfg.num_samples = pos_usize()?,
                "bintruefraction" => {
                    let f: f64 = v.parse().map_err(|_| err("a fraction"))?;
                    if !(0.0..=1.0).contains(&f) {
                        return Err(err("in [0, 1]"));
                    }
                    cfg.bin_true_fraction = Some(f);
                }
                "numcategories" => cfg.num_categories = Some(pos_usize()? as u32),
                "numnetworks" => cfg.num_networks = pos_usize()?,
                _ => {
                    return Err(Error::parse(source, st.line, format!("unknown key '{}'", st.key)));
                }
            }
        }
        cfg.ee.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Config> {
        let text = crate::io::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Config::parse(&text, &path.display().to_string(), base)
    }

    pub fn effect_entries(&self) -> impl Iterator<Item = &EffectEntry> {
        self.struct_params.iter().chain(&self.attr_params)
    }

    /// The model of all listed effects, in order: structural then attribute.
    pub fn model(&self, attrs: &AttributeSet) -> Result<ModelSpec> {
        let mut m = ModelSpec::new();
        for e in self.effect_entries() {
            m.push(Effect::parse(&e.spec, attrs)?)?;
        }
        Ok(m)
    }

    /// Model and parameter values; every effect must have a value.
    pub fn model_with_values(&self, attrs: &AttributeSet) -> Result<(ModelSpec, Vec<f64>)> {
        let model = self.model(attrs)?;
        let values = self
            .effect_entries()
            .map(|e| {
                e.value
                    .ok_or_else(|| Error::Config(format!("effect {} needs a value, as in '{} = 0.5'", e.spec, e.spec)))
            })
            .collect::<Result<_>>()?;
        Ok((model, values))
    }

    /// Attribute column names referenced by effects of each kind, in order of
    /// first use.
    pub fn referenced_columns(&self, base_names: &[&str]) -> Vec<String> {
        let mut cols = Vec::new();
        for e in &self.attr_params {
            if let Some((base, rest)) = e.spec.split_once('(') {
                if base_names.contains(&base.trim()) {
                    let col = rest.trim_end_matches(')').trim().to_string();
                    if !cols.contains(&col) {
                        cols.push(col);
                    }
                }
            }
        }
        cols
    }
}
