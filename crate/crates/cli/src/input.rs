use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use newton_forge::network::Violation;
use newton_forge::{eval_circuit, net_to_circuit, AffineMax, CpwlFn, Polytope, PolytopeCircuit, Rat, ReluNetwork, Scalar, Vector};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// What a JSON file holds, told apart by its keys.
pub enum Input {
    Net(ReluNetwork),
    Circuit(PolytopeCircuit),
    Function(AffineMax),
    Polytope(Polytope),
}

pub fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse<T: DeserializeOwned>(v: Value, path: &Path, what: &str) -> Result<T> {
    serde_json::from_value(v).with_context(|| format!("{} is not a valid {what}", path.display()))
}

pub fn load(path: &Path) -> Result<Input> {
    let text = read_text(path)?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let has = |k: &str| v.get(k).is_some();
    if has("input_dim") {
        let net: ReluNetwork = parse(v, path, "network")?;
        // Weight signs are a discipline question; broken wiring is malformed input.
        let broken: Vec<String> =
            net.validate().iter().filter(|x| !matches!(x, Violation::NegativeWeight { .. })).map(|x| x.to_string()).collect();
        if !broken.is_empty() {
            bail!("{}: malformed network: {}", path.display(), broken.join("; "));
        }
        Ok(Input::Net(net))
    } else if has("gates") {
        Ok(Input::Circuit(parse(v, path, "polytope circuit")?))
    } else if has("generators") {
        Ok(Input::Function(parse(v, path, "function")?))
    } else if has("vertices") {
        Ok(Input::Polytope(parse(v, path, "polytope")?))
    } else {
        bail!("{}: expected a network, circuit, function or polytope", path.display())
    }
}

pub fn load_net(path: &Path) -> Result<ReluNetwork> {
    match load(path)? {
        Input::Net(n) => Ok(n),
        _ => bail!("{}: expected a network", path.display()),
    }
}

pub fn load_polytope(path: &Path) -> Result<Polytope> {
    match load(path)? {
        Input::Polytope(p) => Ok(p),
        Input::Function(f) => Ok(homogeneous(&f, path)?.newton_polytope()),
        _ => bail!("{}: expected a polytope", path.display()),
    }
}

fn homogeneous(f: &AffineMax, path: &Path) -> Result<CpwlFn> {
    if f.pieces().iter().any(|p| p.bias != Rat::from_int(0)) {
        bail!("{}: function has non-zero biases; a homogeneous function is required", path.display());
    }
    Ok(CpwlFn::new(f.dim(), f.pieces().iter().map(|p| p.grad.clone()).collect())?)
}

/// A homogeneous convex function, from a function file, a bias-free network
/// or a circuit.
pub fn load_function(path: &Path) -> Result<CpwlFn> {
    match load(path)? {
        Input::Function(f) => homogeneous(&f, path),
        Input::Net(n) => {
            let c = net_to_circuit(&n).with_context(|| format!("{}: network has no Newton polytope", path.display()))?;
            Ok(CpwlFn::support_of(eval_circuit(&c)?.output()))
        }
        Input::Circuit(c) => Ok(CpwlFn::support_of(eval_circuit(&c)?.output())),
        Input::Polytope(p) => Ok(CpwlFn::support_of(&p)),
    }
}

/// `"1, 1/2, -3"`.
pub fn parse_point(s: &str) -> Result<Vector> {
    let coords = s
        .split(',')
        .map(|c| Rat::parse_exact(c).ok_or_else(|| anyhow!("{c:?} is not a rational number")))
        .collect::<Result<Vec<_>>>()?;
    if coords.is_empty() {
        bail!("empty point");
    }
    Ok(Vector::new(coords))
}
