//! Lattice balls, the coloring game and the isoperimetric scan.

use anyhow::{bail, Result};
use newton_forge::lattice::{
    build_ball as ball, isoperimetry_scan, play, realize_polytope, GameTree, GreedyStrategy, IsoMode, LatticeBall, LatticeError,
    OptimalSearch, SeparatorStrategy, Strategy, OPTIMAL_SIZE_LIMIT,
};
use newton_forge::lattice::Realization;
use newton_forge::{Rat, Scalar};
use rayon::prelude::*;
use serde_json::json;

use super::{Ctx, Output, Run};
use crate::report::Part;
use crate::svg::{self, Frame};
use crate::{IsoModeName, StrategyName};

pub fn build_ball(r: usize) -> Result<Run> {
    let g = ball(r);
    let fig = svg::ball_frames(&g, &[Frame { black: g.full_set(), selected: None }]);
    Ok((Output::Artifact { text: serde_json::to_string_pretty(&g)?, ok: true }, Some(fig)))
}

pub fn realize(r: usize) -> Result<Run> {
    let g = ball(r);
    let real: Realization = realize_polytope(&g)?;
    let ok = real.certificate.passed();
    if !ok {
        eprintln!("face certificate failed: {} of {} triangles certified", real.certificate.certified, real.certificate.triangles);
    }
    Ok((Output::Artifact { text: serde_json::to_string_pretty(&real)?, ok }, None))
}

/// Node ids from the root along the most expensive child.
fn costliest_path(t: &GameTree) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = 0;
    while let Some(n) = t.nodes.get(cur) {
        out.push(cur);
        match n.children.iter().max_by_key(|&&c| (t.nodes[c].cost, std::cmp::Reverse(c))) {
            Some(&c) => cur = c,
            None => break,
        }
    }
    out
}

fn frames(g: &LatticeBall, t: &GameTree) -> Result<Vec<Frame>> {
    costliest_path(t)
        .into_iter()
        .map(|i| Ok(Frame { black: g.set_of(&t.nodes[i].set)?, selected: t.nodes[i].selected }))
        .collect()
}

fn one_game(r: usize, which: StrategyName) -> Result<(Part, Option<(LatticeBall, GameTree)>)> {
    if r == 0 {
        bail!("radius must be at least 1");
    }
    let g = ball(r);
    let mut part = Part::new(format!("r={r}"));
    part.count("vertices", g.vertex_count());
    let full = g.full_set();
    let mut search = OptimalSearch::new();
    let strategy: &mut dyn Strategy = match which {
        StrategyName::Optimal => {
            if g.vertex_count() > OPTIMAL_SIZE_LIMIT {
                return Err(LatticeError::SizeGuard { size: g.vertex_count(), limit: OPTIMAL_SIZE_LIMIT }.into());
            }
            &mut search
        }
        StrategyName::Separator => &mut SeparatorStrategy,
        StrategyName::Greedy => &mut GreedyStrategy,
    };
    let tree = match play(&g, strategy, &full) {
        Ok(t) => t,
        Err(LatticeError::ClaimViolated(why)) => {
            part.check("at most six components per move and boundary covered by B_1(L)", false, why);
            return Ok((part, None));
        }
        Err(e) => return Err(e.into()),
    };
    part.check("at most six components per move and boundary covered by B_1(L)", true, "");
    let cost = tree.cost();
    part.count("cost", cost);
    part.number("cost/r", &Rat::from_ratio(cost as i64, r as i64));
    part.count("max branching", tree.max_branching());
    part.count("tree nodes", tree.nodes.len());
    if let StrategyName::Separator = which {
        part.check("cost <= 6r", cost <= 6 * r, format!("{cost} against {}", 6 * r));
    }
    if let StrategyName::Optimal = which {
        part.count("memo states", search.states());
    }
    let path: Vec<Option<usize>> = costliest_path(&tree).into_iter().map(|i| tree.nodes[i].selected).collect();
    part.data = json!({ "cost": cost, "costliest_selections": path });
    Ok((part, Some((g, tree))))
}

pub fn game(ctx: &Ctx, radii: &[usize], which: StrategyName) -> Result<Run> {
    let runs = radii.par_iter().map(|&r| one_game(r, which)).collect::<Result<Vec<_>>>()?;
    let mut rep = ctx.report();
    let mut figure = None;
    for (part, tree) in runs {
        if figure.is_none() {
            if let Some((g, t)) = &tree {
                figure = Some(svg::ball_frames(g, &frames(g, t)?));
            }
        }
        rep.absorb(part);
    }
    Ok((Output::Report(rep), figure))
}

pub fn iso_scan(ctx: &Ctx, r: usize, mode: IsoModeName, samples: usize) -> Result<Run> {
    let g = ball(r);
    let mode = match mode {
        IsoModeName::Exhaustive => IsoMode::Exhaustive,
        IsoModeName::Sample => IsoMode::Sampled { samples, seed: ctx.seed },
    };
    let iso = isoperimetry_scan(&g, mode)?;
    let mut rep = ctx.report();
    rep.fixture(format!("r={r}"));
    rep.count("vertices", g.vertex_count());
    rep.count("sets scanned", iso.scanned as usize);
    rep.count("min boundary", iso.min_boundary);
    rep.number("min boundary / r", &iso.min_ratio);
    rep.check("every set in the window has a non-empty boundary", iso.min_boundary > 0, "");
    rep.data = serde_json::to_value(&iso)?;
    let fig = svg::ball_frames(&g, &[Frame { black: g.set_of(&iso.witness)?, selected: None }]);
    Ok((Output::Report(rep), Some(fig)))
}
