//! Group and homomorphism specifications from the command line.

use std::path::Path;

use nctower::fp::{Presentation, PresentedGroup};
use nctower::presets::{parse_element, preset};
use nctower::{Error, GroupHom, PermGroup, Permutation, Result};
use serde_json::Value;

/// A preset name, a JSON object `{"degree", "generators"}` (optionally with
/// `"labels"` and `"relators"`), or a path to a file holding either.
pub fn parse_group(spec: &str) -> Result<PresentedGroup> {
    let t = spec.trim();
    if t.starts_with('{') {
        return group_from_json(t);
    }
    match preset(t) {
        Ok(g) => Ok(g),
        Err(unknown) => {
            let path = Path::new(t);
            if path.is_file() {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
                let text = text.trim();
                if text.starts_with('{') {
                    group_from_json(text)
                } else {
                    preset(text)
                }
            } else {
                Err(unknown)
            }
        }
    }
}

fn group_from_json(text: &str) -> Result<PresentedGroup> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed group JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| Error::invalid("group JSON must be an object"))?;
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::invalid("group JSON needs a positive integer \"degree\""))? as usize;
    if degree == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let gens = obj
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::invalid("group JSON needs a \"generators\" array"))?;
    let perms = gens
        .iter()
        .enumerate()
        .map(|(i, g)| generator(g, degree).map_err(|e| e.context(&format!("generator {}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let group = PermGroup::new(degree, perms)?;
    match obj.get("relators") {
        None => PresentedGroup::from_group(group),
        Some(r) => {
            let relators = strings(r, "relators")?;
            let labels = match obj.get("labels") {
                Some(l) => strings(l, "labels")?,
                None => nctower::fp::default_labels(group.generators().len()),
            };
            let l: Vec<&str> = labels.iter().map(String::as_str).collect();
            let r: Vec<&str> = relators.iter().map(String::as_str).collect();
            PresentedGroup::new(group, Presentation::parse(&l, &r)?)
        }
    }
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .and_then(|a| a.iter().map(|x| x.as_str().map(String::from)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| Error::invalid(format!("\"{what}\" must be an array of strings")))
}

fn generator(v: &Value, degree: usize) -> Result<Permutation> {
    let p = match v {
        Value::String(s) => Permutation::parse_cycles(s, degree)?,
        Value::Array(a) => {
            let images = a
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| Error::invalid("image arrays hold positive integers")))
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_one_based(&images)?
        }
        _ => return Err(Error::invalid("a generator is a cycle string or an image array")),
    };
    if p.degree() != degree {
        return Err(Error::invalid(format!(
            "degree mismatch: generator acts on {} points, group degree is {degree}",
            p.degree()
        )));
    }
    Ok(p)
}

/// An element of `g`: an image array such as `[2,1,3]`, or anything
/// [`parse_element`] accepts.
pub fn parse_image(g: &PresentedGroup, text: &str) -> Result<Permutation> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::invalid(format!("malformed image array: {e}")))?;
        let p = generator(&v, g.group().degree())?;
        if !g.group().contains(&p) {
            return Err(Error::invalid(format!("{t} is not in the codomain")));
        }
        return Ok(p);
    }
    parse_element(g, t)
}

pub struct HomInput {
    pub domain: PresentedGroup,
    pub phi: GroupHom,
}

pub fn parse_hom(domain: &str, codomain: &str, images: &[String]) -> Result<HomInput> {
    let domain = parse_group(domain).map_err(|e| e.context("domain"))?;
    let codomain = parse_group(codomain).map_err(|e| e.context("codomain"))?;
    let n = domain.group().generators().len();
    if images.len() != n {
        return Err(Error::invalid(format!(
            "the domain has {n} generators but {} images were given",
            images.len()
        )));
    }
    let imgs = images
        .iter()
        .map(|s| parse_image(&codomain, s))
        .collect::<Result<Vec<_>>>()?;
    let phi = GroupHom::new(domain.group().clone(), codomain.group().clone(), imgs)?;
    Ok(HomInput { domain, phi })
}
