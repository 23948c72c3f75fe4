//! Canonical JSON shapes for distributions, densities and germs.
//!
//! Rationals are strings `"p/q"`, Gaussian rationals `"a+bi"`; weights are
//! flat integer lists (torus components, then cyclic residues).

use super::density::{Comb, GeneralizedDensity, Piece};
use super::fourier::{FourierDistribution, Part};
use super::germ::{Germ, GermBody, Taylor};
use super::group::{GroupDescriptor, GroupElement, Weight};
use crate::ball::Ball;
use crate::error::{IndexError, Result};
use crate::poly::{MPoly, UPoly};
use crate::scalar::{fmt_q, parse_q, GaussQ, Q};
use serde_json::{json, Value};
use std::collections::BTreeMap;

fn bad(msg: impl Into<String>) -> IndexError {
    IndexError::Invalid(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("`{what}` must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("`{what}` must be an array")))
}

pub fn gauss_to_json(c: &GaussQ) -> Value {
    Value::String(c.to_string())
}

pub fn gauss_from_json(v: &Value) -> Result<GaussQ> {
    match v {
        Value::Number(n) => n.as_i64().map(GaussQ::int).ok_or_else(|| bad(format!("non-integer number {n}; use a \"p/q\" string"))),
        Value::String(s) => s.parse().map_err(|e| bad(format!("{e}"))),
        _ => Err(bad("coefficient must be a string or integer")),
    }
}

fn q_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::Number(n) => n.as_i64().map(|k| Q::from_integer(k.into())).ok_or_else(|| bad(format!("non-integer number {n}"))),
        Value::String(s) => parse_q(s).map_err(|e| bad(format!("{e}"))),
        _ => Err(bad("rational must be a string or integer")),
    }
}

pub fn group_to_json(g: &GroupDescriptor) -> Value {
    json!({"rank": g.rank, "cyclic": g.cyclic})
}

pub fn group_from_json(v: &Value) -> Result<GroupDescriptor> {
    let g: GroupDescriptor = serde_json::from_value(v.clone()).map_err(|e| bad(format!("group: {e}")))?;
    g.validate()?;
    Ok(g)
}

fn weight_from_json(g: &GroupDescriptor, v: &Value) -> Result<Weight> {
    let flat: Vec<i64> = as_array(v, "weight")?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| bad("weight components must be integers")))
        .collect::<Result<_>>()?;
    Weight::from_flat(g, &flat)
}

fn upoly_to_json(p: &UPoly) -> Value {
    Value::Array(p.0.iter().map(gauss_to_json).collect())
}

fn upoly_from_json(v: &Value) -> Result<UPoly> {
    Ok(UPoly::new(as_array(v, "poly")?.iter().map(gauss_from_json).collect::<Result<_>>()?))
}

fn mpoly_to_json(p: &MPoly) -> Value {
    Value::Array(p.terms.iter().map(|(e, c)| json!({"exps": e, "coeff": gauss_to_json(c)})).collect())
}

fn mpoly_from_json(nvars: usize, v: &Value) -> Result<MPoly> {
    let mut p = MPoly::zero(nvars);
    for t in as_array(v, "poly")? {
        let exps: Vec<u32> = serde_json::from_value(get(t, "exps")?.clone()).map_err(|e| bad(format!("exps: {e}")))?;
        if exps.len() != nvars {
            return Err(IndexError::InvalidWeight(format!("exponent vector of length {} for rank {nvars}", exps.len())));
        }
        p.add_term(exps, gauss_from_json(get(t, "coeff")?)?);
    }
    Ok(p)
}

pub fn distribution_to_json(d: &FourierDistribution) -> Value {
    let parts: Vec<Value> = d
        .parts
        .iter()
        .map(|p| match p {
            Part::Atoms(m) => json!({
                "kind": "atoms",
                "terms": m.iter().map(|(w, c)| json!({"weight": w.flat(), "value": gauss_to_json(c)})).collect::<Vec<_>>(),
            }),
            Part::Ray { offset, step, poly } => json!({
                "kind": "ray", "offset": offset.flat(), "step": step.flat(), "poly": upoly_to_json(poly),
            }),
            Part::Lattice(p) => json!({"kind": "delta", "poly": mpoly_to_json(p)}),
            Part::Tensor(fs) => json!({"kind": "tensor", "factors": fs.iter().map(distribution_to_json).collect::<Vec<_>>()}),
        })
        .collect();
    json!({"group": group_to_json(&d.group), "parts": parts})
}

pub fn distribution_from_json(v: &Value) -> Result<FourierDistribution> {
    let g = group_from_json(get(v, "group")?)?;
    let mut out = FourierDistribution::zero(&g);
    for p in as_array(get(v, "parts")?, "parts")? {
        let kind = as_str(get(p, "kind")?, "kind")?;
        let d = match kind {
            "atoms" => {
                let mut items = vec![];
                for t in as_array(get(p, "terms")?, "terms")? {
                    items.push((weight_from_json(&g, get(t, "weight")?)?, gauss_from_json(get(t, "value")?)?));
                }
                FourierDistribution::atoms(&g, items)
            }
            "ray" => FourierDistribution::ray(
                &g,
                weight_from_json(&g, get(p, "offset")?)?,
                weight_from_json(&g, get(p, "step")?)?,
                upoly_from_json(get(p, "poly")?)?,
            )?,
            "delta" => {
                let poly = match p.get("poly") {
                    Some(x) => mpoly_from_json(g.rank, x)?,
                    None => MPoly::one(g.rank),
                };
                FourierDistribution::lattice(&g, poly)
            }
            "tensor" => {
                let fs: Vec<FourierDistribution> = as_array(get(p, "factors")?, "factors")?.iter().map(distribution_from_json).collect::<Result<_>>()?;
                let prod = fs.iter().skip(1).fold(fs.first().cloned().unwrap_or_else(|| FourierDistribution::constant(&GroupDescriptor::trivial(), GaussQ::one())), |a, b| a.external_product(b));
                if prod.group != g {
                    return Err(IndexError::GroupMismatch(format!("tensor factors give {} but the distribution is on {g}", prod.group)));
                }
                prod
            }
            other => return Err(bad(format!("unknown part kind `{other}`"))),
        };
        out = out.add(&d)?;
    }
    Ok(out)
}

pub fn density_to_json(u: &GeneralizedDensity) -> Value {
    let q = |x: &Q| Value::String(fmt_q(x));
    let oq = |x: &Option<Q>| x.as_ref().map(q).unwrap_or(Value::Null);
    json!({
        "atoms": u.atoms.iter().map(|(a, m)| json!({"at": q(a), "mass": gauss_to_json(m)})).collect::<Vec<_>>(),
        "combs": u.combs.iter().map(|c: &Comb| json!({
            "anchor": q(&c.anchor), "spacing": q(&c.spacing), "start": c.start, "dir": c.dir, "mass": upoly_to_json(&c.mass),
        })).collect::<Vec<_>>(),
        "pieces": u.pieces.iter().map(|p: &Piece| json!({"lo": oq(&p.lo), "hi": oq(&p.hi), "poly": upoly_to_json(&p.poly)})).collect::<Vec<_>>(),
    })
}

pub fn density_from_json(v: &Value) -> Result<GeneralizedDensity> {
    let mut u = GeneralizedDensity::zero();
    let empty = vec![];
    let arr = |k: &str| -> Result<&Vec<Value>> { v.get(k).map(|x| as_array(x, k)).unwrap_or(Ok(&empty)) };
    for a in arr("atoms")? {
        u.add_atom(q_from_json(get(a, "at")?)?, gauss_from_json(get(a, "mass")?)?);
    }
    for c in arr("combs")? {
        let dir = get(c, "dir")?.as_i64().ok_or_else(|| bad("comb dir"))?;
        if dir != 1 && dir != -1 {
            return Err(bad("comb dir must be 1 or -1"));
        }
        u.combs.push(Comb {
            anchor: q_from_json(get(c, "anchor")?)?,
            spacing: q_from_json(get(c, "spacing")?)?,
            start: get(c, "start")?.as_i64().ok_or_else(|| bad("comb start"))?,
            dir: dir as i8,
            mass: upoly_from_json(get(c, "mass")?)?,
        });
    }
    for p in arr("pieces")? {
        let end = |k: &str| -> Result<Option<Q>> {
            match p.get(k) {
                None | Some(Value::Null) => Ok(None),
                Some(x) => q_from_json(x).map(Some),
            }
        };
        u.pieces.push(Piece { lo: end("lo")?, hi: end("hi")?, poly: upoly_from_json(get(p, "poly")?)? });
    }
    Ok(u.canonical())
}

fn ball_to_json(b: &Ball) -> Value {
    json!({"re": b.mid.re, "im": b.mid.im, "rad": b.rad})
}

pub fn point_to_json(s: &GroupElement) -> Value {
    json!({
        "torus": s.torus.iter().map(fmt_q).collect::<Vec<_>>(),
        "cyclic": s.cyclic,
        "orders": s.orders,
        "label": s.to_string(),
    })
}

pub fn taylor_to_json(t: &Taylor) -> Value {
    match t {
        Taylor::Exact(s) => Value::Array(s.terms.iter().map(|(e, c)| json!({"exps": e, "value": gauss_to_json(c)})).collect()),
        Taylor::Numeric(s) => Value::Array(s.terms.iter().map(|(e, c)| json!({"exps": e, "value": ball_to_json(c)})).collect()),
    }
}

pub fn germ_to_json(g: &Germ) -> Value {
    let mut v = json!({"point": point_to_json(&g.point), "order": g.order, "exact": g.is_exact()});
    let m = v.as_object_mut().expect("object");
    match &g.body {
        GermBody::Taylor(t) => {
            m.insert("kind".into(), json!("taylor"));
            m.insert("series".into(), taylor_to_json(t));
        }
        GermBody::Delta(p) => {
            m.insert("kind".into(), json!("delta"));
            m.insert("poly".into(), mpoly_to_json(p));
        }
        GermBody::Density(u) => {
            m.insert("kind".into(), json!("density"));
            m.insert("density".into(), density_to_json(u));
        }
        GermBody::Product(gs) => {
            m.insert("kind".into(), json!("product"));
            m.insert("factors".into(), Value::Array(gs.iter().map(germ_to_json).collect()));
        }
        GermBody::Sum(gs) => {
            m.insert("kind".into(), json!("sum"));
            m.insert("terms".into(), Value::Array(gs.iter().map(germ_to_json).collect()));
        }
    }
    v
}

/// Coefficients on the window `|k|_∞ ≤ r`, nonzero entries only.
pub fn coefficients_to_json(d: &FourierDistribution, r: i64) -> Value {
    Value::Array(
        d.coefficients(r)
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| json!({"weight": w.flat(), "value": gauss_to_json(&c)}))
            .collect(),
    )
}

pub fn coefficient_map(d: &FourierDistribution, r: i64) -> BTreeMap<Vec<i64>, GaussQ> {
    d.coefficients(r).into_iter().map(|(w, c)| (w.flat(), c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ray_shape() {
        let v = distribution_to_json(&FourierDistribution::atiyah(1));
        assert_eq!(v, json!({"group":{"rank":1,"cyclic":[]},"parts":[{"kind":"ray","offset":[1],"step":[1],"poly":["-1"]}]}));
    }

    #[test]
    fn round_trip() {
        let a = FourierDistribution::atiyah(2);
        let d = a.external_product(&FourierDistribution::delta(&GroupDescriptor::cyclic_group(2)));
        for x in [a, d, FourierDistribution::delta(&GroupDescriptor::torus(2))] {
            assert_eq!(distribution_from_json(&distribution_to_json(&x)).unwrap(), x);
        }
    }

    #[test]
    fn density_round_trip() {
        let u = GeneralizedDensity::indicator(Q::from_integer((-1).into()), Q::from_integer(0.into()))
            .add(&GeneralizedDensity::comb(Q::from_integer(1.into()), Q::from_integer(1.into()), 1, UPoly::from_ints(&[-1])));
        assert_eq!(density_from_json(&density_to_json(&u)).unwrap(), u.canonical());
    }
}
