//! The self-test battery: seeded random instances plus exhaustive classical
//! cases, one report per property.
//!
//! Each group draws from its own ChaCha stream of the configured seed, so
//! changing one group's instance count leaves the others untouched. Bounds
//! are fixed here rather than taken from the user's tolerances: the
//! tolerances drive the computations, the bounds judge them.

use qfunctor_core::classical::{
    classical_predicates, function_to_hom, hom_to_function, quantum_to_relation, relation_to_quantum, ClassicalFunction,
    ClassicalRelation,
};
use qfunctor_core::matkernel::polar_partial_isometry;
use qfunctor_core::qfun::{
    compose_hom, extract_family, g_forward, g_inverse, generation_sides, homomorphism_from_family, homotopy_residual,
    intertwine_residual, is_quantum_function, quantum_function_residuals, DilationIsometry, Homomorphism,
};
use qfunctor_core::qrel::QuantumRelation;
use qfunctor_core::sample::{random_algebra, random_distinct_pair, random_hom, random_hom_from, random_matrix};
use qfunctor_core::vnalg::{BlockSpec, VonNeumannAlgebra};
use qfunctor_core::{ComplexMatrix, OperatorSubspace, Result, Tolerances};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const ROUNDTRIP_BOUND: f64 = 1e-8;
pub const ISOMETRY_BOUND: f64 = 1e-9;
pub const INTERTWINE_BOUND: f64 = 1e-8;
pub const SUBSPACE_BOUND: f64 = 1e-8;
pub const GENERATION_MAX_DIM: usize = 4;
pub const CLASSICAL_MAX_POINTS: usize = 3;

#[derive(Debug, Clone, Serialize)]
pub struct BatteryConfig {
    pub seed: u64,
    pub max_dim: usize,
    /// Random homomorphisms for round trip, dilation and generation.
    pub instances: usize,
    /// Composable pairs for functoriality, and distinct pairs for injectivity.
    pub pairs: usize,
    /// Break the built-in fixture on purpose.
    pub corrupt_fixture: bool,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_dim: 6,
            instances: 200,
            pairs: 100,
            corrupt_fixture: false,
        }
    }
}

/// Outcome of one property over all its instances.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: &'static str,
    pub instances: usize,
    pub failures: usize,
    /// Largest residual seen, or for `injectivity` the smallest separation.
    pub worst: f64,
    pub bound: f64,
    /// First few error messages, if any instance errored.
    pub notes: Vec<String>,
    /// Set when the property has no instances at this size.
    pub vacuous: Option<&'static str>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.failures == 0 && (self.instances > 0 || self.vacuous.is_some())
    }
}

struct Tally {
    report: Report,
}

impl Tally {
    fn new(name: &'static str, bound: f64) -> Self {
        Self {
            report: Report {
                name,
                instances: 0,
                failures: 0,
                worst: 0.0,
                bound,
                notes: Vec::new(),
                vacuous: None,
            },
        }
    }

    fn residual(&mut self, r: f64) {
        self.report.instances += 1;
        if r.is_nan() || r > self.report.bound {
            self.report.failures += 1;
        }
        if r.is_nan() || r > self.report.worst {
            self.report.worst = r;
        }
    }

    fn outcome(&mut self, ok: bool) {
        self.report.instances += 1;
        if !ok {
            self.report.failures += 1;
            self.report.worst += 1.0;
        }
    }

    fn error(&mut self, context: &str, e: impl std::fmt::Display) {
        self.report.instances += 1;
        self.report.failures += 1;
        self.report.worst = f64::INFINITY;
        if self.report.notes.len() < 3 {
            self.report.notes.push(format!("{context}: {e}"));
        }
    }

    fn finish(self) -> Report {
        self.report
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Two-sided distance between subspaces; infinite when the dimensions differ.
pub fn subspace_distance(a: &OperatorSubspace, b: &OperatorSubspace) -> Result<f64> {
    if a.dim() != b.dim() {
        return Ok(f64::INFINITY);
    }
    Ok(a.max_residual_of(b)?.max(b.max_residual_of(a)?))
}

/// Round trip, quantum-function axioms, well-definedness, dilation and
/// generation, all on the same random homomorphisms.
pub fn homomorphism_battery(cfg: &BatteryConfig, tol: &Tolerances) -> Vec<Report> {
    let mut rng = stream(cfg.seed, 1);
    let mut roundtrip = Tally::new("roundtrip", ROUNDTRIP_BOUND);
    let mut axioms = Tally::new("quantum_function_axioms", tol.membership_tol);
    let mut well_defined = Tally::new("well_definedness", ROUNDTRIP_BOUND);
    let mut isometry = Tally::new("dilation_isometry", ISOMETRY_BOUND);
    let mut intertwine = Tally::new("dilation_intertwining", INTERTWINE_BOUND);
    let mut homotopy = Tally::new("dilation_homotopy", INTERTWINE_BOUND);
    let mut generation = Tally::new("generation", SUBSPACE_BOUND);

    for i in 0..cfg.instances {
        let inst = match random_hom(&mut rng, cfg.max_dim, tol) {
            Ok(inst) => inst,
            Err(e) => {
                roundtrip.error(&format!("instance {i}"), e);
                continue;
            }
        };
        let pi = &inst.hom;
        let g = match g_forward(pi, tol) {
            Ok(g) => g,
            Err(e) => {
                roundtrip.error(&format!("instance {i}: G"), e);
                continue;
            }
        };
        match quantum_function_residuals(&g, tol) {
            Ok(q) => axioms.residual(q.totality.max(q.single_valuedness)),
            Err(e) => axioms.error(&format!("instance {i}"), e),
        }
        match g_inverse(&g, tol).and_then(|back| back.distance(pi, tol)) {
            Ok(d) => roundtrip.residual(d),
            Err(e) => roundtrip.error(&format!("instance {i}: G⁻¹"), e),
        }

        let mut order: Vec<usize> = (0..g.space().dim()).collect();
        order.shuffle(&mut rng);
        let families = g
            .with_basis_order(&order)
            .and_then(|g2| Ok((extract_family(&g, tol)?, extract_family(&g2, tol)?)));
        let (f0, f1) = match families {
            Ok(f) => f,
            Err(e) => {
                well_defined.error(&format!("instance {i}: families"), e);
                continue;
            }
        };
        let agree = (|| {
            let p0 = homomorphism_from_family(&g, &f0, tol)?;
            let p1 = homomorphism_from_family(&g, &f1, tol)?;
            let padded = homomorphism_from_family(&g, &f1.padded(f1.len() + 1), tol)?;
            Ok::<f64, qfunctor_core::Error>(p0.distance(&p1, tol)?.max(p0.distance(&padded, tol)?))
        })();
        match agree {
            Ok(d) => well_defined.residual(d),
            Err(e) => well_defined.error(&format!("instance {i}"), e),
        }

        let dilations = DilationIsometry::from_family(&f0).and_then(|w0| Ok((w0, DilationIsometry::from_family(&f1)?)));
        let (w0, w1) = match dilations {
            Ok(w) => w,
            Err(e) => {
                isometry.error(&format!("instance {i}"), e);
                continue;
            }
        };
        isometry.residual(w0.isometry_residual().max(w1.isometry_residual()));
        match intertwine_residual(&w0, pi).and_then(|a| Ok(a.max(intertwine_residual(&w1, pi)?))) {
            Ok(r) => intertwine.residual(r),
            Err(e) => intertwine.error(&format!("instance {i}"), e),
        }
        match homotopy_residual(&w0, &w1, pi) {
            Ok(r) => homotopy.residual(r),
            Err(e) => homotopy.error(&format!("instance {i}"), e),
        }

        if g.source().hilbert_dim() <= GENERATION_MAX_DIM && g.target().hilbert_dim() <= GENERATION_MAX_DIM {
            match generation_sides(&g, &w0, tol).and_then(|(l, r)| subspace_distance(&l, &r)) {
                Ok(r) => generation.residual(r),
                Err(e) => generation.error(&format!("instance {i}"), e),
            }
        }
    }
    vec![
        roundtrip.finish(),
        axioms.finish(),
        well_defined.finish(),
        isometry.finish(),
        intertwine.finish(),
        homotopy.finish(),
        generation.finish(),
    ]
}

/// `G(π0 ∘ π1) = G(π1) G(π0)`, `G(ι) = M'`, and closure of quantum
/// functions under composition.
pub fn functoriality_battery(cfg: &BatteryConfig, tol: &Tolerances) -> Vec<Report> {
    let mut rng = stream(cfg.seed, 2);
    let mut functor = Tally::new("functoriality", SUBSPACE_BOUND);
    let mut identity = Tally::new("identity", SUBSPACE_BOUND);
    let mut closure = Tally::new("composition_closure", tol.membership_tol);

    for i in 0..cfg.pairs {
        let chain = (|| {
            let m2 = random_algebra(&mut rng, cfg.max_dim, tol)?;
            let pi1 = random_hom_from(&mut rng, &m2, cfg.max_dim, tol)?;
            let pi0 = random_hom_from(&mut rng, &pi1.target, cfg.max_dim, tol)?;
            Ok::<_, qfunctor_core::Error>((m2, pi1, pi0))
        })();
        let (m2, pi1, pi0) = match chain {
            Ok(c) => c,
            Err(e) => {
                functor.error(&format!("pair {i}"), e);
                continue;
            }
        };
        let sides = (|| {
            let lhs = g_forward(&compose_hom(&pi0.hom, &pi1.hom, tol)?, tol)?;
            let rhs = QuantumRelation::compose(&g_forward(&pi1.hom, tol)?, &g_forward(&pi0.hom, tol)?, tol)?;
            Ok::<_, qfunctor_core::Error>((lhs, rhs))
        })();
        match sides {
            Ok((lhs, rhs)) => {
                match subspace_distance(lhs.space(), rhs.space()) {
                    Ok(d) => functor.residual(d),
                    Err(e) => functor.error(&format!("pair {i}"), e),
                }
                match quantum_function_residuals(&rhs, tol) {
                    Ok(q) => closure.residual(q.totality.max(q.single_valuedness)),
                    Err(e) => closure.error(&format!("pair {i}"), e),
                }
            }
            Err(e) => functor.error(&format!("pair {i}"), e),
        }
        let id = g_forward(&Homomorphism::identity(&m2.algebra), tol)
            .and_then(|g| subspace_distance(g.space(), QuantumRelation::diagonal(&m2.algebra).space()));
        match id {
            Ok(d) => identity.residual(d),
            Err(e) => identity.error(&format!("pair {i}"), e),
        }
    }
    vec![functor.finish(), identity.finish(), closure.finish()]
}

/// Distinct homomorphisms must have distinct images under `G`.
pub fn injectivity_battery(cfg: &BatteryConfig, tol: &Tolerances) -> Report {
    let mut rng = stream(cfg.seed, 3);
    let mut tally = Tally::new("injectivity", tol.membership_tol);
    if cfg.max_dim < 2 {
        // only the identity of C exists
        let mut report = tally.finish();
        report.vacuous = Some("no distinct homomorphisms below dimension 2");
        return report;
    }
    let mut closest = f64::INFINITY;
    for i in 0..cfg.pairs {
        let sep = (|| {
            let (a, b) = random_distinct_pair(&mut rng, cfg.max_dim, tol)?;
            subspace_distance(g_forward(&a.hom, tol)?.space(), g_forward(&b.hom, tol)?.space())
        })();
        match sep {
            Ok(s) => {
                closest = closest.min(s);
                tally.outcome(s > tol.membership_tol);
            }
            Err(e) => tally.error(&format!("pair {i}"), e),
        }
    }
    let mut report = tally.finish();
    if report.notes.is_empty() {
        report.worst = closest;
    }
    report
}

/// Everything on `ℓ∞(X)`, `ℓ∞(Y)` with at most three points each. All
/// comparisons are exact: sets, maps and booleans.
pub fn classical_battery(tol: &Tolerances) -> Report {
    let mut tally = Tally::new("classical_exhaustive", 0.0);
    for x in 1..=CLASSICAL_MAX_POINTS {
        for y in 1..=CLASSICAL_MAX_POINTS {
            for f in ClassicalRelation::enumerate(x, y) {
                let checked = (|| {
                    let q = relation_to_quantum(&f, tol)?;
                    let mut ok = quantum_to_relation(&q, tol)? == f;
                    ok &= is_quantum_function(&q, tol)? == f.as_function().is_some();
                    if x == y {
                        ok &= q.properties(tol)? == classical_predicates(&f)?;
                    }
                    Ok::<bool, qfunctor_core::Error>(ok)
                })();
                match checked {
                    Ok(ok) => tally.outcome(ok),
                    Err(e) => tally.error(&format!("{f:?}"), e),
                }
            }
            for f in ClassicalFunction::enumerate(x, y) {
                let checked = (|| {
                    let pi = function_to_hom(&f)?;
                    let mut ok = hom_to_function(&pi, tol)? == f;
                    let graph = relation_to_quantum(&f.graph(), tol)?;
                    ok &= quantum_to_relation(&g_forward(&pi, tol)?, tol)? == f.graph();
                    ok &= hom_to_function(&g_inverse(&graph, tol)?, tol)? == f;
                    Ok::<bool, qfunctor_core::Error>(ok)
                })();
                match checked {
                    Ok(ok) => tally.outcome(ok),
                    Err(e) => tally.error(&format!("{f:?}"), e),
                }
            }
        }
    }
    tally.finish()
}

/// Module-level invariants on random inputs: orthonormal bases and polar
/// parts, double commutants, bimodule closures.
pub fn module_battery(cfg: &BatteryConfig, tol: &Tolerances) -> Vec<Report> {
    let mut rng = stream(cfg.seed, 4);
    let count = (cfg.instances / 10).max(5);
    let mut kernel = Tally::new("matkernel_invariants", ISOMETRY_BOUND);
    let mut algebra = Tally::new("algebra_invariants", SUBSPACE_BOUND);
    let mut relation = Tally::new("relation_invariants", SUBSPACE_BOUND);
    let dim = cfg.max_dim.max(1);

    for i in 0..count {
        let k = 1 + i % dim;
        let vecs: Vec<ComplexMatrix> = (0..k).map(|_| random_matrix(&mut rng, dim, 1 + i % 3)).collect();
        let m = random_matrix(&mut rng, dim, 1 + i % 3);
        let r = (|| {
            let s = OperatorSubspace::orthonormalize(1 + i % 3, dim, &vecs, tol)?;
            let p = s.project(&m)?;
            let polar = polar_partial_isometry(&m, tol)?;
            let u = &polar.u;
            Ok::<f64, qfunctor_core::Error>(
                s.orthonormality_defect()
                    .max(s.project(&p)?.distance(&p))
                    .max((&(u * &u.adjoint()) * u).distance(u))
                    .max((u * &polar.abs).distance(&m) / m.frobenius_norm()),
            )
        })();
        match r {
            Ok(r) => kernel.residual(r),
            Err(e) => kernel.error(&format!("case {i}"), e),
        }

        let r = (|| {
            let a = random_algebra(&mut rng, dim, tol)?;
            let n2: usize = a.spec.blocks.iter().map(|b| b.n * b.n).sum();
            let m2: usize = a.spec.blocks.iter().map(|b| b.m * b.m).sum();
            if a.algebra.dim() != n2 || a.algebra.commutant().dim() != m2 {
                return Ok(f64::INFINITY);
            }
            let regenerated = VonNeumannAlgebra::from_generators(a.algebra.basis(), a.hilbert_dim(), tol)?;
            Ok::<f64, qfunctor_core::Error>(
                a.algebra
                    .double_commutant_residual(tol)?
                    .max(a.algebra.commutation_residual())
                    .max(subspace_distance(regenerated.algebra(), a.algebra.algebra())?),
            )
        })();
        match r {
            Ok(r) => algebra.residual(r),
            Err(e) => algebra.error(&format!("case {i}"), e),
        }

        let r = (|| {
            let m = random_algebra(&mut rng, dim, tol)?.algebra;
            let n = random_algebra(&mut rng, dim, tol)?.algebra;
            let seed = random_matrix(&mut rng, n.hilbert_dim(), m.hilbert_dim());
            let rel = QuantumRelation::bimodule_closure(m, n, &[seed], tol)?;
            let twice = rel.inverse(tol)?.inverse(tol)?;
            Ok::<f64, qfunctor_core::Error>(rel.bimodule_residual()?.max(subspace_distance(twice.space(), rel.space())?))
        })();
        match r {
            Ok(r) => relation.residual(r),
            Err(e) => relation.error(&format!("case {i}"), e),
        }
    }
    vec![kernel.finish(), algebra.finish(), relation.finish()]
}

/// The built-in fixture: the amplification `M2 -> M2 ⊗ 1_2`. Corrupting it
/// replaces one image by its transpose, which is no longer multiplicative.
pub fn fixture_homomorphism(corrupt: bool) -> Result<Homomorphism> {
    let n = VonNeumannAlgebra::from_blocks(&BlockSpec::new(&[(2, 1)]))?;
    let m = VonNeumannAlgebra::from_blocks(&BlockSpec::new(&[(2, 2)]))?;
    let i2 = ComplexMatrix::identity(2);
    let mut images: Vec<ComplexMatrix> = n.basis().iter().map(|b| b.kron(&i2)).collect();
    if corrupt {
        images[1] = images[1].transpose();
    }
    Homomorphism::new(n, m, images)
}

pub fn fixture_battery(cfg: &BatteryConfig, tol: &Tolerances) -> Report {
    let mut tally = Tally::new("fixture", ROUNDTRIP_BOUND);
    let r = (|| {
        let pi = fixture_homomorphism(cfg.corrupt_fixture)?;
        let valid = pi.residuals()?.max();
        if valid > tol.eq_tol {
            return Ok(valid);
        }
        let back = g_inverse(&g_forward(&pi, tol)?, tol)?;
        back.distance(&pi, tol)
    })();
    match r {
        Ok(r) => tally.residual(r),
        Err(e) => tally.error("fixture", e),
    }
    tally.finish()
}

/// Every group, in a fixed order.
pub fn run_all(cfg: &BatteryConfig, tol: &Tolerances) -> Vec<Report> {
    let mut reports = vec![fixture_battery(cfg, tol)];
    reports.extend(module_battery(cfg, tol));
    reports.extend(homomorphism_battery(cfg, tol));
    reports.extend(functoriality_battery(cfg, tol));
    reports.push(classical_battery(tol));
    reports.push(injectivity_battery(cfg, tol));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BatteryConfig {
        BatteryConfig {
            seed: 3,
            max_dim: 3,
            instances: 6,
            pairs: 4,
            corrupt_fixture: false,
        }
    }

    #[test]
    fn small_battery_passes() {
        let t = Tolerances::default();
        for r in run_all(&small(), &t) {
            assert!(r.pass(), "{r:?}");
        }
    }

    #[test]
    fn corrupted_fixture_fails() {
        let t = Tolerances::default();
        let cfg = BatteryConfig {
            corrupt_fixture: true,
            ..small()
        };
        assert!(!fixture_battery(&cfg, &t).pass());
        assert!(fixture_battery(&small(), &t).pass());
    }

    #[test]
    fn scalar_dimension_cases_pass() {
        let t = Tolerances::default();
        let cfg = BatteryConfig {
            max_dim: 1,
            ..small()
        };
        for r in run_all(&cfg, &t) {
            assert!(r.pass(), "{r:?}");
        }
        assert!(injectivity_battery(&cfg, &t).vacuous.is_some());
    }

    #[test]
    fn nan_counts_as_failure() {
        let mut t = Tally::new("x", 1.0);
        t.residual(f64::NAN);
        assert_eq!(t.finish().failures, 1);
    }
}
