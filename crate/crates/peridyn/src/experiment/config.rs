//! Declarative experiment configuration: a flat `key = value` text format
//! plus command-line overrides that take precedence over the file.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::integrator::ModelVariant;

use super::ic::IcDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    HConv,
    EpsConv,
    Compare,
    Gap,
    Consistency,
    Stability,
    SingleRun,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::HConv => "h-conv",
            ExperimentKind::EpsConv => "eps-conv",
            ExperimentKind::Compare => "compare",
            ExperimentKind::Gap => "gap",
            ExperimentKind::Consistency => "consistency",
            ExperimentKind::Stability => "stability",
            ExperimentKind::SingleRun => "run",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "h-conv" => Ok(ExperimentKind::HConv),
            "eps-conv" => Ok(ExperimentKind::EpsConv),
            "compare" => Ok(ExperimentKind::Compare),
            "gap" => Ok(ExperimentKind::Gap),
            "consistency" => Ok(ExperimentKind::Consistency),
            "stability" => Ok(ExperimentKind::Stability),
            "run" => Ok(ExperimentKind::SingleRun),
            other => Err(Error::InvalidConfig(format!("unknown experiment kind '{other}'"))),
        }
    }
}

/// Everything an experiment needs; unused fields are ignored by drivers that
/// do not read them. Defaults follow the nondimensional bar on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    // material
    pub alpha: f64,
    pub amplitude: Option<f64>,
    pub decay: f64,
    pub rho: f64,
    // geometry
    pub a: f64,
    pub b: f64,
    // dynamics
    pub ic: IcDescriptor,
    pub eps: Option<f64>,
    pub h: Option<f64>,
    pub h_list: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub eps_over_h: Option<f64>,
    pub pair_eps: Vec<f64>,
    pub pair_h: Vec<f64>,
    pub reference_h: Option<f64>,
    pub p: usize,
    pub p_list: Vec<usize>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub sample_steps: Vec<usize>,
    pub sample_every: Option<usize>,
    pub model: ModelVariant,
    /// `(n, m)` pairs for the stability sweep; `n` is the element count.
    pub grids: Vec<(usize, usize)>,
    /// Amplitude of the consistency test function `A sin(2 pi x)`.
    pub test_amplitude: f64,
    pub out: Option<PathBuf>,
    pub scale: String,
    pub allow_unstable: bool,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentSpec {
            kind,
            alpha: 0.4,
            amplitude: None,
            decay: 1.0,
            rho: 1.0,
            a: 0.0,
            b: 1.0,
            ic: IcDescriptor::Gauss {
                amp: 0.005,
                beta: 1e-5,
                center: 0.5,
            },
            eps: None,
            h: None,
            h_list: Vec::new(),
            eps_list: Vec::new(),
            eps_over_h: None,
            pair_eps: Vec::new(),
            pair_h: Vec::new(),
            reference_h: None,
            p: 1,
            p_list: Vec::new(),
            dt: None,
            t_final: None,
            sample_steps: Vec::new(),
            sample_every: None,
            model: ModelVariant::Nonlinear,
            grids: Vec::new(),
            test_amplitude: 1.0,
            out: None,
            scale: "desk".to_string(),
            allow_unstable: false,
        }
    }

    /// Loads `key = value` lines; `#` starts a comment. Unknown keys are
    /// rejected so typos surface as config errors.
    pub fn from_file(kind: ExperimentKind, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(kind, &text)
    }

    pub fn from_str(kind: ExperimentKind, text: &str) -> Result<Self> {
        let mut spec = ExperimentSpec::new(kind);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key = value, got '{raw}'", lineno + 1))
            })?;
            spec.set(key.trim(), value.trim())?;
        }
        Ok(spec)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidConfig(format!("bad {what} value '{value}'"));
        match key {
            "kind" => {
                let k = ExperimentKind::parse(value)?;
                if k != self.kind {
                    return Err(Error::InvalidConfig(format!(
                        "config declares kind '{}' but the subcommand requested '{}'",
                        k.label(),
                        self.kind.label()
                    )));
                }
            }
            "alpha" => self.alpha = value.parse().map_err(|_| bad("alpha"))?,
            "amplitude" => {
                self.amplitude = if value.is_empty() {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad("amplitude"))?)
                }
            }
            "decay" => self.decay = value.parse().map_err(|_| bad("decay"))?,
            "rho" => self.rho = value.parse().map_err(|_| bad("rho"))?,
            "a" => self.a = value.parse().map_err(|_| bad("a"))?,
            "b" => self.b = value.parse().map_err(|_| bad("b"))?,
            "ic" => self.ic = IcDescriptor::parse(value)?,
            "eps" => self.eps = Some(value.parse().map_err(|_| bad("eps"))?),
            "h" => self.h = Some(value.parse().map_err(|_| bad("h"))?),
            "h_list" => self.h_list = parse_f64_list(value)?,
            "eps_list" => self.eps_list = parse_f64_list(value)?,
            "eps_over_h" => self.eps_over_h = Some(value.parse().map_err(|_| bad("eps_over_h"))?),
            "pair_eps" => self.pair_eps = parse_f64_list(value)?,
            "pair_h" => self.pair_h = parse_f64_list(value)?,
            "reference_h" => {
                self.reference_h = Some(value.parse().map_err(|_| bad("reference_h"))?)
            }
            "p" => self.p = value.parse().map_err(|_| bad("p"))?,
            "p_list" => {
                self.p_list = value
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| bad("p_list")))
                    .collect::<Result<_>>()?
            }
            "dt" => self.dt = Some(value.parse().map_err(|_| bad("dt"))?),
            "T" => self.t_final = Some(value.parse().map_err(|_| bad("T"))?),
            "sample_steps" => {
                self.sample_steps = value
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| bad("sample_steps")))
                    .collect::<Result<_>>()?
            }
            "sample_every" => {
                self.sample_every = Some(value.parse().map_err(|_| bad("sample_every"))?)
            }
            "model" => self.model = ModelVariant::parse(value)?,
            "grids" => {
                self.grids = value
                    .split(',')
                    .map(|t| {
                        let (n, m) = t
                            .trim()
                            .split_once(':')
                            .ok_or_else(|| bad("grids (expected n:m pairs)"))?;
                        Ok((
                            n.parse::<usize>().map_err(|_| bad("grids"))?,
                            m.parse::<usize>().map_err(|_| bad("grids"))?,
                        ))
                    })
                    .collect::<Result<_>>()?
            }
            "test_amplitude" => {
                self.test_amplitude = value.parse().map_err(|_| bad("test_amplitude"))?
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "scale" => self.scale = value.to_string(),
            "allow_unstable" => {
                self.allow_unstable = value.parse().map_err(|_| bad("allow_unstable"))?
            }
            other => {
                return Err(Error::InvalidConfig(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }

    /// Full echo of the spec; written as the provenance header of every
    /// output so a run is reconstructible from its files alone.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("kind".into(), self.kind.label().to_string()),
            ("alpha".into(), format!("{}", self.alpha)),
            (
                "amplitude".into(),
                self.amplitude.map(|v| format!("{v}")).unwrap_or_else(|| "normalized".into()),
            ),
            ("decay".into(), format!("{}", self.decay)),
            ("rho".into(), format!("{}", self.rho)),
            ("a".into(), format!("{}", self.a)),
            ("b".into(), format!("{}", self.b)),
            ("ic".into(), self.ic.canonical()),
            ("p".into(), format!("{}", self.p)),
            ("model".into(), self.model.label().to_string()),
            ("scale".into(), self.scale.clone()),
        ];
        let mut opt = |key: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((key.into(), v));
            }
        };
        opt("eps", self.eps.map(|v| format!("{v}")));
        opt("h", self.h.map(|v| format!("{v}")));
        opt("dt", self.dt.map(|v| format!("{v}")));
        opt("T", self.t_final.map(|v| format!("{v}")));
        opt("eps_over_h", self.eps_over_h.map(|v| format!("{v}")));
        opt("reference_h", self.reference_h.map(|v| format!("{v}")));
        opt("sample_every", self.sample_every.map(|v| format!("{v}")));
        if !self.h_list.is_empty() {
            out.push(("h_list".into(), join_f64(&self.h_list)));
        }
        if !self.eps_list.is_empty() {
            out.push(("eps_list".into(), join_f64(&self.eps_list)));
        }
        if !self.pair_eps.is_empty() {
            out.push(("pair_eps".into(), join_f64(&self.pair_eps)));
            out.push(("pair_h".into(), join_f64(&self.pair_h)));
        }
        if !self.p_list.is_empty() {
            out.push((
                "p_list".into(),
                self.p_list.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","),
            ));
        }
        if !self.sample_steps.is_empty() {
            out.push((
                "sample_steps".into(),
                self.sample_steps.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
            ));
        }
        if !self.grids.is_empty() {
            out.push((
                "grids".into(),
                self.grids.iter().map(|(n, m)| format!("{n}:{m}")).collect::<Vec<_>>().join(","),
            ));
        }
        if self.kind == ExperimentKind::Consistency {
            out.push(("test_amplitude".into(), format!("{}", self.test_amplitude)));
        }
        if self.allow_unstable {
            out.push(("allow_unstable".into(), "true".into()));
        }
        out
    }
}

fn parse_f64_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad number '{t}' in list")))
        })
        .collect()
}

fn join_f64(vals: &[f64]) -> String {
    vals.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(",")
}

/// Command-line overrides; every `Some` field replaces the config value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub eps: Option<f64>,
    pub h: Option<f64>,
    pub p: Option<usize>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub out: Option<PathBuf>,
    pub model: Option<ModelVariant>,
    pub ic: Option<IcDescriptor>,
    pub allow_unstable: bool,
}

impl Overrides {
    pub fn apply(&self, spec: &mut ExperimentSpec) {
        if let Some(v) = self.eps {
            spec.eps = Some(v);
        }
        if let Some(v) = self.h {
            spec.h = Some(v);
        }
        if let Some(v) = self.p {
            spec.p = v;
        }
        if let Some(v) = self.dt {
            spec.dt = Some(v);
        }
        if let Some(v) = self.t_final {
            spec.t_final = Some(v);
        }
        if let Some(v) = &self.out {
            spec.out = Some(v.clone());
        }
        if let Some(v) = self.model {
            spec.model = v;
        }
        if let Some(v) = self.ic {
            spec.ic = v;
        }
        if self.allow_unstable {
            spec.allow_unstable = true;
        }
    }
}
