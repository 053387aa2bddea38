use serde::Serialize;

use crate::error::{Error, Result};
use crate::matkernel::{axpy, ComplexMatrix, Tolerances};
use crate::vnalg::VonNeumannAlgebra;

/// A linear map `π: N -> M`, given by the images of `N`'s basis.
///
/// `source` is `N` on `K` and `target` is `M` on `H`; `images[i]` is
/// `π(source.basis()[i])`, an `H x H` matrix.
#[derive(Debug, Clone, Serialize)]
pub struct Homomorphism {
    source: VonNeumannAlgebra,
    target: VonNeumannAlgebra,
    images: Vec<ComplexMatrix>,
}

/// Frobenius residuals of the unital *-homomorphism identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomomorphismResiduals {
    pub unital: f64,
    pub star: f64,
    pub multiplicative: f64,
    pub range: f64,
}

impl HomomorphismResiduals {
    pub fn max(&self) -> f64 {
        self.unital.max(self.star).max(self.multiplicative).max(self.range)
    }

    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.max() <= tol.eq_tol
    }
}

impl Homomorphism {
    pub fn new(source: VonNeumannAlgebra, target: VonNeumannAlgebra, images: Vec<ComplexMatrix>) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::ShapeMismatch(format!(
                "source algebra has dimension {} but {} images were given",
                source.dim(),
                images.len()
            )));
        }
        let h = target.hilbert_dim();
        if let Some(bad) = images.iter().find(|x| x.shape() != (h, h)) {
            return Err(Error::ShapeMismatch(format!(
                "image is {}x{}, expected {h}x{h}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self { source, target, images })
    }

    /// Identity map of `m`.
    pub fn identity(m: &VonNeumannAlgebra) -> Self {
        Self {
            source: m.clone(),
            target: m.clone(),
            images: m.basis().to_vec(),
        }
    }

    /// Builds `π` from a function evaluated on the source basis.
    pub fn from_fn(
        source: VonNeumannAlgebra,
        target: VonNeumannAlgebra,
        f: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Self> {
        let images = source.basis().iter().map(f).collect();
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &VonNeumannAlgebra {
        &self.source
    }

    pub fn target(&self) -> &VonNeumannAlgebra {
        &self.target
    }

    pub fn images(&self) -> &[ComplexMatrix] {
        &self.images
    }

    /// `π(x)` through the expansion of `x` in the source basis.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let coeffs = self.source.algebra().coefficients(x)?;
        let h = self.target.hilbert_dim();
        let mut out = ComplexMatrix::zeros(h, h);
        for (c, img) in coeffs.iter().zip(&self.images) {
            axpy(&mut out, *c, img);
        }
        Ok(out)
    }

    pub fn residuals(&self) -> Result<HomomorphismResiduals> {
        let id_k = self.source.identity();
        let unital = self.apply(&id_k)?.distance(&self.target.identity());

        let basis = self.source.basis();
        let mut star = 0.0f64;
        let mut multiplicative = 0.0f64;
        for (bi, img_i) in basis.iter().zip(&self.images) {
            star = star.max(self.apply(&bi.adjoint())?.distance(&img_i.adjoint()));
            for (bj, img_j) in basis.iter().zip(&self.images) {
                let lhs = self.apply(&(bi * bj))?;
                multiplicative = multiplicative.max(lhs.distance(&(img_i * img_j)));
            }
        }
        let range = self
            .images
            .iter()
            .flat_map(|img| self.target.commutant().basis().iter().map(move |c| img.commutator(c).frobenius_norm()))
            .fold(0.0, f64::max);
        Ok(HomomorphismResiduals {
            unital,
            star,
            multiplicative,
            range,
        })
    }

    /// Unital, *-preserving, multiplicative, with range inside the target.
    pub fn validate(&self, tol: &Tolerances) -> Result<bool> {
        Ok(self.residuals()?.passes(tol))
    }

    pub(crate) fn require_valid(&self, tol: &Tolerances) -> Result<()> {
        let r = self.residuals()?;
        if r.passes(tol) {
            return Ok(());
        }
        let (name, value) = [
            ("unitality", r.unital),
            ("adjoint preservation", r.star),
            ("multiplicativity", r.multiplicative),
            ("range in target algebra", r.range),
        ]
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("four residuals");
        Err(Error::InvalidHomomorphism(format!("{name} fails (residual {value:.3e})")))
    }

    /// Largest `||π(b) - σ(b)||_F` over this map's source basis. Both maps
    /// must share a source algebra.
    pub fn distance(&self, other: &Self, tol: &Tolerances) -> Result<f64> {
        if !self.source.same_algebra(&other.source, tol)? || !self.target.same_algebra(&other.target, tol)? {
            return Err(Error::AlgebraMismatch("homomorphisms act between different algebras".into()));
        }
        self.source
            .basis()
            .iter()
            .zip(&self.images)
            .map(|(b, img)| Ok(other.apply(b)?.distance(img)))
            .try_fold(0.0f64, |acc, d: Result<f64>| Ok(acc.max(d?)))
    }
}

/// `π0 ∘ π1` for `π1: M2 -> M1` and `π0: M1 -> M0`.
pub fn compose_hom(pi0: &Homomorphism, pi1: &Homomorphism, tol: &Tolerances) -> Result<Homomorphism> {
    if !pi1.target.same_algebra(&pi0.source, tol)? {
        return Err(Error::AlgebraMismatch(
            "target of the inner homomorphism differs from source of the outer one".into(),
        ));
    }
    let images = pi1.images.iter().map(|x| pi0.apply(x)).collect::<Result<_>>()?;
    let out = Homomorphism::new(pi1.source.clone(), pi0.target.clone(), images)?;
    out.require_valid(tol)?;
    Ok(out)
}
