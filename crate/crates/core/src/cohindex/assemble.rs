//! Assembly of the global index from its germs at the sample points.

use super::germs::index_germ_at;
use super::identity::identity_eval;
use super::{IndexValue, Provenance, GLUE_TOL};
use crate::distributions::germ::{GermBody, Taylor};
use crate::distributions::{glue, FourierDistribution, Germ, GroupElement, Weight};
use crate::error::{IndexError, Result};
use crate::scalar::GaussQ;
use crate::symbols::SymbolDescriptor;
use rayon::prelude::*;

/// Deliberate corruption, used to check that gluing localizes errors.
#[derive(Clone, Debug, PartialEq)]
pub enum Fault {
    /// Add `delta` to the germ at the `point`-th sample.
    Germ { point: usize, delta: GaussQ },
    /// Add an atom to the glued candidate.
    Coefficient { weight: Weight, delta: GaussQ },
}

pub fn assemble_index(sigma: &SymbolDescriptor, samples: &[GroupElement], order: u32) -> Result<IndexValue> {
    assemble_index_with(sigma, samples, order, None)
}

fn perturb(g: Germ, delta: &GaussQ) -> Germ {
    let n = g.point.torus.len();
    let bump = Taylor::constant(n, g.order, delta.clone());
    match g.body {
        GermBody::Taylor(t) => Germ::taylor(g.point, t.add(&bump)),
        body => {
            let point = g.point.clone();
            let inner = Germ { point: point.clone(), order: g.order, body };
            Germ { point: point.clone(), order: g.order, body: GermBody::Sum(vec![Germ::taylor(point, bump), inner]) }
        }
    }
}

/// Evaluate the germs at `samples` and glue them against the closed form.
/// A failed symbolic reduction at the identity leaves a germs-only value.
pub fn assemble_index_with(sigma: &SymbolDescriptor, samples: &[GroupElement], order: u32, fault: Option<&Fault>) -> Result<IndexValue> {
    sigma.validate()?;
    let g = sigma.group();
    for s in samples {
        if s.group() != g {
            return Err(IndexError::GroupMismatch(format!("sample {s} is not in {g}")));
        }
    }
    let mut provenance = vec![];
    let mut degraded = None;
    let ident = match identity_eval(sigma, order) {
        Ok(e) => {
            provenance.push(Provenance::new(format!("germ at {}", g.identity()), e.route.to_string()));
            Some(e)
        }
        Err(IndexError::ReductionUnavailable(why)) => {
            degraded = Some(why);
            None
        }
        Err(e) => return Err(e),
    };
    let others: Vec<Result<Option<Germ>>> = samples
        .par_iter()
        .map(|s| {
            if s.is_identity() {
                return Ok(None);
            }
            match index_germ_at(sigma, s, order) {
                Ok(germ) => Ok(Some(germ)),
                Err(IndexError::ReductionUnavailable(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut germs = vec![];
    for (s, r) in samples.iter().zip(others) {
        if s.is_identity() {
            if let Some(e) = &ident {
                germs.push(e.germ.clone());
            }
            continue;
        }
        match r? {
            Some(germ) => {
                provenance.push(Provenance::new(format!("germ at {s}"), "fixed point Λ_s·Ch_s"));
                germs.push(germ);
            }
            None => provenance.push(Provenance::new(format!("germ at {s}"), "unavailable")),
        }
    }
    let mut candidate = ident.and_then(|e| e.distribution);
    match fault {
        Some(Fault::Germ { point, delta }) => {
            if let Some(i) = germs.iter().position(|x| samples.get(*point) == Some(&x.point)) {
                let gm = germs.remove(i);
                germs.insert(i, perturb(gm, delta));
            }
        }
        Some(Fault::Coefficient { weight, delta }) => {
            if let Some(c) = &candidate {
                candidate = Some(c.add(&FourierDistribution::atoms(&g, [(weight.clone(), delta.clone())]))?);
            }
        }
        None => {}
    }
    let glue_report = candidate.as_ref().map(|c| glue(&germs, c, order, GLUE_TOL));
    if candidate.is_some() {
        provenance.push(Provenance::new("distribution", "glued from the germs"));
    } else if degraded.is_none() {
        degraded = Some("no closed form for the identity germ".into());
    }
    Ok(IndexValue { symbol: sigma.to_string(), group: g, distribution: candidate, germs, provenance, glue: glue_report, degraded })
}

#[cfg(test)]
mod tests {
    use super::super::sample_points;
    use super::*;
    use crate::distributions::{GroupDescriptor, DEFAULT_ORDER};
    use crate::scalar::Q;

    fn four(g: &GroupDescriptor) -> Vec<GroupElement> {
        [0, 1, 2, 3].iter().filter_map(|k| g.diagonal(&Q::new((*k).into(), 4.into()))).collect()
    }

    #[test]
    fn atiyah_glues() {
        let s = SymbolDescriptor::atiyah(1);
        let v = assemble_index(&s, &sample_points(&s.group()), DEFAULT_ORDER).unwrap();
        assert!(v.glued(), "{:?}", v.glue);
        assert_eq!(v.distribution.unwrap(), FourierDistribution::atiyah(1));
    }

    #[test]
    fn catalog_glues_at_quarter_turns() {
        for (name, s) in crate::symbols::catalog() {
            let v = assemble_index(&s, &four(&s.group()), DEFAULT_ORDER).unwrap();
            assert!(v.glued(), "{name}: {:?} {:?}", v.glue, v.degraded);
            let v = assemble_index(&s, &sample_points(&s.group()), DEFAULT_ORDER).unwrap();
            assert!(v.glued(), "{name} at the default samples: {:?}", v.glue);
        }
    }

    #[test]
    fn coefficient_fault_is_localized() {
        let s = SymbolDescriptor::atiyah(1);
        let pts = four(&s.group());
        let f = Fault::Coefficient { weight: Weight::scalar(3), delta: GaussQ::frac(1, 1000) };
        let v = assemble_index_with(&s, &pts, DEFAULT_ORDER, Some(&f)).unwrap();
        let r = v.glue.unwrap();
        assert!(!r.pass);
        // the atom shows at every sample; the identity comparison names its weight
        assert_eq!(r.failing_points().len(), pts.len());
        assert!(r.entries[0].comparison.detail.contains("k = (3)"), "{}", r.entries[0].comparison.detail);
    }

    #[test]
    fn germ_fault_names_its_point() {
        let s = SymbolDescriptor::zero_on_torus(1);
        let pts = four(&s.group());
        let f = Fault::Germ { point: 2, delta: GaussQ::frac(1, 1000) };
        let v = assemble_index_with(&s, &pts, DEFAULT_ORDER, Some(&f)).unwrap();
        let r = v.glue.unwrap();
        assert_eq!(r.failing_points(), vec![&pts[2]]);
    }
}
