//! Property checks over one or more input files.

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use newton_forge::cpwl::{integrate_abs_diff, isotonic_check, Isotonicity, Rect};
use newton_forge::sampling::{self, SampleRng};
use newton_forge::{set_leq, AffineMax, CpwlFn, NetKind, Rat, ReluNetwork, Scalar, Vector};
use rayon::prelude::*;
use serde_json::json;

use super::{Ctx, Output, Run};
use crate::input::{self, Input};
use crate::report::Part;

/// The gap every isotonic candidate must keep from `MAX_2`.
pub fn epsilon() -> Rat {
    Rat::from_ratio(1, 256)
}

/// One stream per fixture, so results do not depend on `--jobs`.
fn stream(ctx: &Ctx, index: usize) -> SampleRng {
    sampling::rng(ctx.seed.wrapping_add(index as u64))
}

fn over_files(ctx: &Ctx, files: &[PathBuf], f: impl Fn(&Path, SampleRng) -> Result<Part> + Sync) -> Result<Run> {
    let parts: Vec<Part> =
        files.par_iter().enumerate().map(|(i, p)| f(p, stream(ctx, i))).collect::<Result<_>>()?;
    let mut rep = ctx.report();
    for p in parts {
        rep.absorb(p);
    }
    Ok((Output::Report(rep), None))
}

fn name(p: &Path) -> String {
    p.display().to_string()
}

fn sampled_isotonic(grad: impl Fn(&Vector) -> Result<newton_forge::Polytope>, dim: usize, rng: &mut SampleRng, samples: usize) -> Result<(usize, Option<(Vector, Vector)>)> {
    let mut bad = 0;
    let mut first = None;
    for _ in 0..samples {
        let (x, y) = sampling::ordered_pair::<Rat, _>(rng, dim);
        if !set_leq(&grad(&x)?, &grad(&y)?)? {
            bad += 1;
            first.get_or_insert((x, y));
        }
    }
    Ok((bad, first))
}

fn pair_detail(bad: usize, samples: usize, first: &Option<(Vector, Vector)>) -> String {
    match first {
        None => format!("{samples} pairs"),
        Some((x, y)) => format!("{bad} of {samples} pairs fail, first at x = {x}, y = {y}"),
    }
}

pub fn isotonic(ctx: &Ctx, files: &[PathBuf], samples: usize) -> Result<Run> {
    over_files(ctx, files, |path, mut rng| {
        let f = input::load_function(path)?;
        let mut part = Part::new(name(path));
        part.count("generators", f.generators().len());
        match isotonic_check(&f)? {
            Isotonicity::Isotonic(set) => {
                part.count("edges", set.edges.len());
                part.check("isotonic subgradient map", true, "every edge of the Newton polytope is comparable");
                part.data = json!({ "edges": set });
            }
            Isotonicity::Violated(w) => {
                let detail = format!("x = {} <= y = {} but the subgradients are not ordered", w.x, w.y);
                part.check("isotonic subgradient map", false, detail);
                part.data = json!({ "witness": w });
            }
        }
        let (bad, first) = sampled_isotonic(|x| Ok(f.subgradient(x)?.carrier), f.dim(), &mut rng, samples)?;
        part.count("sampled pairs out of order", bad);
        part.check("isotonic on sampled pairs", bad == 0, pair_detail(bad, samples, &first));
        Ok(part)
    })
}

fn discipline(net: &ReluNetwork, kind: NetKind) -> (bool, String) {
    let mut as_kind = net.clone();
    as_kind.kind = kind;
    let bad = as_kind.validate();
    (bad.is_empty(), bad.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))
}

pub fn monotone(ctx: &Ctx, files: &[PathBuf], samples: usize) -> Result<Run> {
    over_files(ctx, files, |path, mut rng| {
        let net = input::load_net(path)?;
        let mut part = Part::new(name(path));
        part.count("depth", net.depth());
        let (ok, detail) = discipline(&net, NetKind::Monotone);
        part.check("non-negative weights", ok, detail);
        part.data = json!({ "homogeneous": !net.has_biases() });
        let am = match net.to_affine_max() {
            Ok(am) => am,
            Err(e) => {
                part.check("affine-max form", false, e.to_string());
                return Ok(part);
            }
        };
        part.count("affine pieces", am.pieces().len());
        part.check("non-negative subgradients", am.has_nonneg_gradients(), "");
        let dim = net.input_dim;
        let mut drops = 0;
        for _ in 0..samples {
            let (x, y) = sampling::ordered_pair::<Rat, _>(&mut rng, dim);
            if net.eval(&x)? > net.eval(&y)? {
                drops += 1;
            }
        }
        part.check("non-decreasing on sampled pairs", drops == 0, format!("{drops} of {samples} pairs decrease"));
        let (bad, first) = sampled_isotonic(|x| Ok(am.subgradient(x)?), dim, &mut rng, samples)?;
        part.check("isotonic on sampled pairs", bad == 0, pair_detail(bad, samples, &first));
        Ok(part)
    })
}

pub fn icnn(ctx: &Ctx, files: &[PathBuf], samples: usize) -> Result<Run> {
    over_files(ctx, files, |path, mut rng| {
        let net = input::load_net(path)?;
        let mut part = Part::new(name(path));
        part.count("depth", net.depth());
        let (ok, detail) = discipline(&net, NetKind::Icnn);
        part.check("non-negative gate-to-gate weights", ok, detail);
        let dim = net.input_dim;
        let two = Rat::from_int(2);
        let mut bad = 0;
        for _ in 0..samples {
            let x: Vector = sampling::vector(&mut rng, dim, -4, 4, 6);
            let y: Vector = sampling::vector(&mut rng, dim, -4, 4, 6);
            let mid = (&x + &y).scale(&(Rat::from_int(1) / two.clone()));
            if net.eval(&mid)? * two.clone() > net.eval(&x)? + net.eval(&y)? {
                bad += 1;
            }
        }
        part.check("convex on sampled midpoints", bad == 0, format!("{bad} of {samples} midpoints lie above the chord"));
        match net.to_affine_max() {
            Ok(am) => {
                part.count("affine pieces", am.pieces().len());
                let mut off = 0;
                for _ in 0..samples.min(100) {
                    let x: Vector = sampling::vector(&mut rng, dim, -4, 4, 6);
                    if am.eval(&x)? != net.eval(&x)? {
                        off += 1;
                    }
                }
                part.check("affine-max form agrees with the network", off == 0, format!("{off} disagreements"));
            }
            Err(e) => part.check("affine-max form", false, e.to_string()),
        }
        Ok(part)
    })
}

fn homogeneous_as_affine(f: &CpwlFn) -> Result<AffineMax> {
    let pieces = f
        .generators()
        .iter()
        .map(|g| newton_forge::cpwl::AffinePiece { grad: g.clone(), bias: Rat::from_int(0) })
        .collect();
    Ok(AffineMax::new(f.dim(), pieces)?)
}

/// The candidate and the reason it counts as isotonic, if any.
fn candidate(path: &Path) -> Result<(AffineMax, Option<String>)> {
    let homog_check = |f: &CpwlFn| -> Result<Option<String>> {
        Ok(isotonic_check(f)?.is_isotonic().then(|| "the Newton polygon has only positive edges".to_string()))
    };
    match input::load(path)? {
        Input::Net(net) => {
            let am = net.to_affine_max()?;
            if discipline(&net, NetKind::Monotone).0 {
                return Ok((am, Some("monotone network".into())));
            }
            if am.has_chain_gradients() {
                return Ok((am, Some("gradients form a chain".into())));
            }
            Ok((am, None))
        }
        Input::Function(am) => {
            if am.has_chain_gradients() {
                return Ok((am, Some("gradients form a chain".into())));
            }
            if am.pieces().iter().all(|p| p.bias == Rat::from_int(0)) {
                let f = CpwlFn::new(am.dim(), am.pieces().iter().map(|p| p.grad.clone()).collect())?;
                let why = homog_check(&f)?;
                return Ok((am, why));
            }
            Ok((am, None))
        }
        Input::Circuit(_) | Input::Polytope(_) => {
            let f = input::load_function(path)?;
            let why = homog_check(&f)?;
            Ok((homogeneous_as_affine(&f)?, why))
        }
    }
}

pub fn inapprox(ctx: &Ctx, files: &[PathBuf]) -> Result<Run> {
    let max2 = AffineMax::<Rat>::from_parts(2, &[(&[1, 0], Rat::from_int(0)), (&[0, 1], Rat::from_int(0))])?;
    let eps = epsilon();
    over_files(ctx, files, |path, _| {
        let (am, why) = candidate(path)?;
        if am.dim() != 2 {
            bail!("{}: candidate has {} inputs, MAX_2 has 2", path.display(), am.dim());
        }
        let mut part = Part::new(name(path));
        let e = integrate_abs_diff(&am, &max2, &Rect::unit())?;
        part.number("E|F - MAX_2|", &e);
        part.number("epsilon", &eps);
        part.count("affine pieces", am.pieces().len());
        part.check("isotonic candidate", why.is_some(), why.unwrap_or_else(|| "no isotonicity certificate".into()));
        part.check("E|F - MAX_2| >= 1/256", e >= eps, format!("{e} against {eps}"));
        Ok(part)
    })
}
