pub mod check;
pub mod lattice;

use std::path::Path;

use anyhow::{bail, Context, Result};
use newton_forge::synthesis::{build_m_n, build_max_icnn, build_polytope_icnn, decompose_polygon, pyramid_fixture, synthesize_depth2_planar};
use newton_forge::{circuit_to_net, eval_circuit, net_to_circuit, Rat, Scalar};
use serde::Serialize;

use crate::input::{self, Input};
use crate::report::RunReport;
use crate::svg;

pub struct Ctx {
    pub command: Vec<String>,
    pub seed: u64,
}

impl Ctx {
    pub fn report(&self) -> RunReport {
        RunReport::new(self.command.clone(), self.seed)
    }
}

pub enum Output {
    /// A constructed object. `ok` is false when its own certificate failed.
    Artifact { text: String, ok: bool },
    Report(RunReport),
}

pub type Run = (Output, Option<String>);

fn artifact<T: Serialize>(v: &T) -> Result<Run> {
    Ok((Output::Artifact { text: serde_json::to_string_pretty(v)?, ok: true }, None))
}

pub fn eval(ctx: &Ctx, file: &Path, x: &str) -> Result<Run> {
    let x = input::parse_point(x)?;
    let mut rep = ctx.report();
    rep.fixture(file.display().to_string());
    let value = match input::load(file)? {
        Input::Net(net) => {
            let bad = net.validate();
            let detail = bad.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
            rep.check(format!("network satisfies the {} discipline", net.kind), bad.is_empty(), detail);
            rep.count("depth", net.depth());
            net.eval(&x)?
        }
        Input::Circuit(c) => {
            let p = eval_circuit(&c)?;
            if x.is_zero() {
                if x.dim() != c.dim {
                    bail!("point has dimension {}, circuit has dimension {}", x.dim(), c.dim);
                }
                Rat::from_int(0)
            } else {
                p.output().support_value(&x)?
            }
        }
        Input::Function(f) => f.eval(&x)?,
        Input::Polytope(p) => {
            if x.is_zero() {
                Rat::from_int(0)
            } else {
                p.support_value(&x)?
            }
        }
    };
    rep.number("value", &value);
    Ok((Output::Report(rep), None))
}

pub fn convert(file: &Path) -> Result<Run> {
    match input::load(file)? {
        Input::Net(n) => artifact(&net_to_circuit(&n).context("network has no polytope circuit")?),
        Input::Circuit(c) => artifact(&circuit_to_net(&c)?),
        _ => bail!("{}: convert takes a network or a polytope circuit", file.display()),
    }
}

pub fn synth2d(file: &Path) -> Result<Run> {
    let f = input::load_function(file)?;
    let net = synthesize_depth2_planar(&f)?;
    let (out, _) = artifact(&net)?;
    Ok((out, Some(svg::regions(&f))))
}

pub fn decompose(file: &Path) -> Result<Run> {
    let p = input::load_polytope(file)?;
    let d = decompose_polygon(&p)?;
    let (out, _) = artifact(&d)?;
    Ok((out, Some(svg::decomposition(&p, &d))))
}

pub fn build_mn(n: usize, circuit: bool) -> Result<Run> {
    let net = build_m_n::<Rat>(n)?;
    if circuit {
        artifact(&net_to_circuit(&net)?)
    } else {
        artifact(&net)
    }
}

pub fn build_maxicnn(n: usize, circuit: bool) -> Result<Run> {
    let (c, net) = build_max_icnn::<Rat>(n)?;
    if circuit {
        artifact(&c)
    } else {
        artifact(&net)
    }
}

pub fn build_pyramid(circuit: bool) -> Result<Run> {
    let (p, f) = pyramid_fixture::<Rat>();
    if circuit {
        artifact(&build_polytope_icnn(&p))
    } else {
        artifact(&f)
    }
}
