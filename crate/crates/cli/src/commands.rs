//! One function per subcommand. Each returns the certificate, an optional
//! result document and any diagnostics meant for stderr.

use std::fs;
use std::io::Read;

use qfunctor_core::document::{AlgebraDoc, FamilyDoc, HomDoc, RelationDoc, SubspaceDoc};
use qfunctor_core::qfun::{
    extract_family, g_forward, g_inverse, generation_sides, homomorphism_from_family, intertwine_residual,
    quantum_function_residuals, require_quantum_function, DilationIsometry, Homomorphism,
};
use qfunctor_core::qrel::QuantumRelation;
use qfunctor_core::{Error, Tolerances};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::battery::{run_all, subspace_distance, BatteryConfig};
use crate::certificate::{digest, Certificate, Check};
use crate::error::CliError;

pub struct Outcome {
    pub certificate: Certificate,
    pub result: Option<Value>,
    pub diagnostics: Vec<String>,
}

/// Reads and parses `path` (`-` is stdin). Returns the typed document and
/// the raw value used for the input digest.
pub fn load<T: DeserializeOwned>(path: &str) -> Result<(T, Value), CliError> {
    let mut text = String::new();
    let read = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| CliError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    let parse_err = |e: serde_json::Error| CliError::Parse {
        path: path.to_string(),
        message: e.to_string(),
    };
    let raw: Value = serde_json::from_str(&text).map_err(parse_err)?;
    let doc: T = serde_json::from_str(&text).map_err(parse_err)?;
    Ok((doc, raw))
}

/// Errors caused by the input itself, as opposed to a construction that
/// ran and failed.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::ShapeMismatch(_)
            | Error::InvalidMatrix(_)
            | Error::InvalidInput(_)
            | Error::InvalidTolerance(_)
            | Error::AlgebraMismatch(_)
            | Error::NonDiagonal(_)
    )
}

/// Accumulates checks; a non-input error becomes a failed check.
struct Run {
    tol: Tolerances,
    checks: Vec<Check>,
    diagnostics: Vec<String>,
}

impl Run {
    fn new(tol: &Tolerances) -> Self {
        Self {
            tol: *tol,
            checks: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn attempt<T>(&mut self, name: &str, r: qfunctor_core::Result<T>) -> Result<Option<T>, CliError> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e) if is_input_error(&e) => Err(e.into()),
            Err(e) => {
                self.diagnostics.push(format!("{name}: {e}"));
                self.checks.push(Check::failed(name));
                Ok(None)
            }
        }
    }

    /// Records `residual <= bound` and returns whether it passed.
    fn bound(&mut self, name: &str, residual: f64, bound: f64) -> bool {
        let c = Check::at_most(name, residual, bound);
        let pass = c.pass;
        self.checks.push(c);
        pass
    }

    fn homomorphism(&mut self, pi: &Homomorphism) -> Result<bool, CliError> {
        match self.attempt("homomorphism", pi.residuals())? {
            Some(r) => Ok(self.bound("homomorphism", r.max(), self.tol.eq_tol)),
            None => Ok(false),
        }
    }

    /// Bimodule property, then both quantum-function inclusions.
    fn quantum_function(&mut self, r: &QuantumRelation) -> Result<bool, CliError> {
        let Some(bimodule) = self.attempt("bimodule", r.bimodule_residual())? else {
            return Ok(false);
        };
        if !self.bound("bimodule", bimodule, self.tol.membership_tol) {
            return Ok(false);
        }
        let Some(q) = self.attempt("totality", quantum_function_residuals(r, &self.tol))? else {
            return Ok(false);
        };
        let t = self.bound("totality", q.totality, self.tol.membership_tol);
        let s = self.bound("single_valuedness", q.single_valuedness, self.tol.membership_tol);
        Ok(t && s)
    }

    fn finish(self, command: &str, inputs: &Value, result: Option<Value>) -> Outcome {
        Outcome {
            certificate: Certificate::new(command, digest(inputs), self.checks, self.tol),
            result,
            diagnostics: self.diagnostics,
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("documents serialize")
}

pub fn commutant(doc: &AlgebraDoc, raw: &Value, tol: &Tolerances) -> Result<Outcome, CliError> {
    let mut run = Run::new(tol);
    let inputs = json!({ "algebra": raw });
    let Some(m) = run.attempt("algebra", doc.build(tol))? else {
        return Ok(run.finish("commutant", &inputs, None));
    };
    if let Some(r) = run.attempt("double_commutant", m.double_commutant_residual(tol))? {
        run.bound("double_commutant", r, tol.membership_tol);
    }
    run.bound("commutation", m.commutation_residual(), tol.eq_tol);
    let result = json!({
        "algebra_dim": m.dim(),
        "commutant_dim": m.commutant().dim(),
        "commutant": to_value(&SubspaceDoc::from(m.commutant())),
    });
    Ok(run.finish("commutant", &inputs, Some(result)))
}

pub fn relprops(doc: &RelationDoc, raw: &Value, tol: &Tolerances) -> Result<Outcome, CliError> {
    let mut run = Run::new(tol);
    let inputs = json!({ "relation": raw });
    let r = doc.build(tol)?;
    if !r.source().same_algebra(r.target(), tol)? {
        return Err(CliError::Input(
            "relation properties need a relation on a single algebra".to_string(),
        ));
    }
    let valid = match run.attempt("bimodule", r.bimodule_residual())? {
        Some(b) => run.bound("bimodule", b, tol.membership_tol),
        None => false,
    };
    let properties = if valid {
        run.attempt("properties", r.property_residuals(tol))?.map(|p| {
            let holds = p.holds(tol);
            json!({
                "reflexive": { "holds": holds.reflexive, "residual": p.reflexive },
                "symmetric": { "holds": holds.symmetric, "residual": p.symmetric },
                "antisymmetric": { "holds": holds.antisymmetric, "residual": p.antisymmetric },
                "transitive": { "holds": holds.transitive, "residual": p.transitive },
            })
        })
    } else {
        None
    };
    let result = json!({ "valid": valid, "properties": properties });
    Ok(run.finish("relprops", &inputs, Some(result)))
}

pub fn gmap(doc: &HomDoc, raw: &Value, tol: &Tolerances) -> Result<Outcome, CliError> {
    let mut run = Run::new(tol);
    let inputs = json!({ "homomorphism": raw });
    let pi = doc.build(tol)?;
    if !run.homomorphism(&pi)? {
        return Ok(run.finish("gmap", &inputs, None));
    }
    let Some(g) = run.attempt("relation", g_forward(&pi, tol))? else {
        return Ok(run.finish("gmap", &inputs, None));
    };
    run.quantum_function(&g)?;
    let out = RelationDoc {
        source: doc.target.clone(),
        target: doc.source.clone(),
        space: SubspaceDoc::from(g.space()),
    };
    Ok(run.finish("gmap", &inputs, Some(to_value(&out))))
}

pub fn ginv(doc: &RelationDoc, raw: &Value, tol: &Tolerances) -> Result<Outcome, CliError> {
    let mut run = Run::new(tol);
    let inputs = json!({ "relation": raw });
    let r = doc.build(tol)?;
    if !run.quantum_function(&r)? {
        if let Err(e) = require_quantum_function(&r, tol) {
            run.diagnostics.push(e.to_string());
        }
        return Ok(run.finish("ginv", &inputs, None));
    }
    let Some(family) = run.attempt("family", extract_family(&r, tol))? else {
        return Ok(run.finish("ginv", &inputs, None));
    };
    let f = family.residuals();
    run.bound("partial_isometry", f.partial_isometry, tol.eq_tol);
    run.bound("orthogonality", f.orthogonality, tol.eq_tol);
    run.bound("completeness", f.completeness, tol.eq_tol);
    let Some(pi) = run.attempt("homomorphism", homomorphism_from_family(&r, &family, tol))? else {
        return Ok(run.finish("ginv", &inputs, None));
    };
    run.homomorphism(&pi)?;
    let hom = HomDoc {
        source: doc.target.clone(),
        target: doc.source.clone(),
        images: pi.images().to_vec(),
    };
    let result = json!({
        "homomorphism": to_value(&hom),
        "family": to_value(&FamilyDoc::from(&family)),
    });
    Ok(run.finish("ginv", &inputs, Some(result)))
}

pub fn roundtrip(doc: &HomDoc, raw: &Value, tol: &Tolerances) -> Result<Outcome, CliError> {
    let mut run = Run::new(tol);
    let inputs = json!({ "homomorphism": raw });
    let pi = doc.build(tol)?;
    if !run.homomorphism(&pi)? {
        return Ok(run.finish("roundtrip", &inputs, None));
    }
    let Some(g) = run.attempt("relation", g_forward(&pi, tol))? else {
        return Ok(run.finish("roundtrip", &inputs, None));
    };
    run.quantum_function(&g)?;
    let back = g_inverse(&g, tol).and_then(|back| back.distance(&pi, tol));
    let Some(d) = run.attempt("roundtrip", back)? else {
        return Ok(run.finish("roundtrip", &inputs, None));
    };
    run.bound("roundtrip", d, tol.membership_tol);
    let result = json!({ "max_image_residual": d });
    Ok(run.finish("roundtrip", &inputs, Some(result)))
}

pub fn dilate(doc: &HomDoc, raw: &Value, generation: bool, tol: &Tolerances) -> Result<Outcome, CliError> {
    let mut run = Run::new(tol);
    let inputs = json!({ "homomorphism": raw, "generation": generation });
    let pi = doc.build(tol)?;
    if !run.homomorphism(&pi)? {
        return Ok(run.finish("dilate", &inputs, None));
    }
    let built = g_forward(&pi, tol).and_then(|g| {
        let family = extract_family(&g, tol)?;
        let w = DilationIsometry::from_family(&family)?;
        Ok((g, family, w))
    });
    let Some((g, family, w)) = run.attempt("dilation", built)? else {
        return Ok(run.finish("dilate", &inputs, None));
    };
    run.bound("isometry", w.isometry_residual(), tol.eq_tol);
    if let Some(r) = run.attempt("intertwining", intertwine_residual(&w, &pi))? {
        run.bound("intertwining", r, tol.membership_tol);
    }
    if generation {
        let sides = generation_sides(&g, &w, tol).and_then(|(l, r)| subspace_distance(&l, &r));
        if let Some(r) = run.attempt("generation", sides)? {
            run.bound("generation", r, tol.membership_tol);
        }
    }
    let result = json!({
        "w": to_value(w.matrix()),
        "index_size": w.index_size(),
        "family": to_value(&FamilyDoc::from(&family)),
    });
    Ok(run.finish("dilate", &inputs, Some(result)))
}

pub fn selftest(cfg: &BatteryConfig, tol: &Tolerances) -> Outcome {
    let reports = run_all(cfg, tol);
    let checks = reports
        .iter()
        .map(|r| Check {
            name: r.name.to_string(),
            pass: r.pass(),
            residual: r.worst.is_finite().then_some(r.worst),
        })
        .collect();
    let diagnostics = reports
        .iter()
        .flat_map(|r| r.notes.iter().map(move |n| format!("{}: {n}", r.name)))
        .collect();
    let inputs = to_value(cfg);
    Outcome {
        certificate: Certificate::new("selftest", digest(&inputs), checks, *tol),
        result: Some(json!({ "config": inputs, "reports": to_value(&reports) })),
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfunctor_core::vnalg::BlockSpec;
    use qfunctor_core::ComplexMatrix;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn amplification() -> HomDoc {
        let spec = BlockSpec::new(&[(2, 1)]);
        let m = qfunctor_core::vnalg::VonNeumannAlgebra::from_blocks(&spec).unwrap();
        HomDoc {
            source: AlgebraDoc::from(&spec),
            target: AlgebraDoc::from(&BlockSpec::new(&[(2, 2)])),
            images: m.basis().iter().map(|b| b.kron(&ComplexMatrix::identity(2))).collect(),
        }
    }

    #[test]
    fn gmap_then_ginv_recovers_images() {
        let doc = amplification();
        let g = gmap(&doc, &Value::Null, &tol()).unwrap();
        assert!(g.certificate.overall);
        let rel: RelationDoc = serde_json::from_value(g.result.unwrap()).unwrap();
        let back = ginv(&rel, &Value::Null, &tol()).unwrap();
        assert!(back.certificate.overall, "{:?}", back.certificate);
        let hom: HomDoc = serde_json::from_value(back.result.unwrap()["homomorphism"].clone()).unwrap();
        for (a, b) in hom.images.iter().zip(&doc.images) {
            assert!(a.distance(b) < 1e-9);
        }
    }

    #[test]
    fn dilate_reports_generation_when_asked() {
        let doc = amplification();
        let without = dilate(&doc, &Value::Null, false, &tol()).unwrap();
        let with = dilate(&doc, &Value::Null, true, &tol()).unwrap();
        assert!(with.certificate.overall);
        assert_eq!(with.certificate.checks.len(), without.certificate.checks.len() + 1);
        assert_eq!(with.result.unwrap()["index_size"], 2);
    }

    #[test]
    fn broken_homomorphism_fails_without_error() {
        let mut doc = amplification();
        doc.images[1] = doc.images[1].transpose();
        let out = roundtrip(&doc, &Value::Null, &tol()).unwrap();
        assert!(!out.certificate.overall);
        assert_eq!(out.certificate.checks[0].name, "homomorphism");
    }

    #[test]
    fn wrong_image_count_is_input_error() {
        let mut doc = amplification();
        doc.images.pop();
        assert!(matches!(gmap(&doc, &Value::Null, &tol()), Err(CliError::Input(_))));
    }

    #[test]
    fn digest_depends_on_input() {
        let doc = amplification();
        let a = roundtrip(&doc, &json!(1), &tol()).unwrap();
        let b = roundtrip(&doc, &json!(2), &tol()).unwrap();
        assert_ne!(a.certificate.inputs_digest, b.certificate.inputs_digest);
    }
}
