//! Mukai lattices and orthogonal complements `v^⊥`.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::json;
use crate::error::{Error, Result};
use crate::lattice::{IntLattice, LatticeVector, SublatticeEmbedding};
use crate::mukai::{MukaiVector, SurfaceKind, SurfaceModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    /// The whole even cohomology.
    Full,
    /// `Z ⊕ NS ⊕ Z` with coordinates `(r, c, s)`.
    Algebraic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MukaiLatticeModel {
    pub kind: SurfaceKind,
    pub flavor: Flavor,
    pub lattice: IntLattice,
}

/// `U⁴ ⊕ E8(−1)²` for K3, `U⁴` for abelian surfaces.
pub fn full_mukai_lattice(kind: SurfaceKind) -> MukaiLatticeModel {
    let u = IntLattice::standard("U").expect("standard");
    let mut parts = vec![u.clone(), u.clone(), u.clone(), u];
    if kind == SurfaceKind::K3 {
        let e8 = IntLattice::standard("E8_minus").expect("standard");
        parts.push(e8.clone());
        parts.push(e8);
    }
    let label = match kind {
        SurfaceKind::K3 => "U^4+E8(-1)^2",
        SurfaceKind::Abelian => "U^4",
    };
    MukaiLatticeModel {
        kind,
        flavor: Flavor::Full,
        lattice: IntLattice::direct_sum_all(&parts).with_label(label),
    }
}

/// Gram `[[0, 0, −1], [0, NS, 0], [−1, 0, 0]]` in coordinates `(r, c, s)`.
pub fn algebraic_mukai_lattice(surface: &SurfaceModel) -> MukaiLatticeModel {
    let rho = surface.rho();
    let n = rho + 2;
    let mut gram = vec![vec![BigInt::from(0); n]; n];
    gram[0][n - 1] = -BigInt::one();
    gram[n - 1][0] = -BigInt::one();
    for i in 0..rho {
        for j in 0..rho {
            gram[i + 1][j + 1] = surface.ns.gram()[i][j].clone();
        }
    }
    MukaiLatticeModel {
        kind: surface.kind,
        flavor: Flavor::Algebraic,
        lattice: IntLattice::new(gram).expect("symmetric").with_label("algebraic Mukai lattice"),
    }
}

impl MukaiLatticeModel {
    /// Coordinates of a Mukai vector in the algebraic model.
    pub fn embed(&self, v: &MukaiVector) -> Result<LatticeVector> {
        if self.flavor != Flavor::Algebraic {
            return Err(Error::Inapplicable("only the algebraic model embeds Mukai vectors directly".into()));
        }
        if v.c.len() + 2 != self.lattice.rank() {
            return Err(Error::DimensionMismatch { expected: self.lattice.rank() - 2, found: v.c.len() });
        }
        let mut coords = Vec::with_capacity(v.c.len() + 2);
        coords.push(v.r.clone());
        coords.extend(v.c.coords.iter().cloned());
        coords.push(v.s.clone());
        Ok(LatticeVector::new(coords))
    }

    /// `e + f` in the first hyperbolic plane: square 2, primitive.
    pub fn canonical_square2_vector(&self) -> Result<LatticeVector> {
        if self.flavor != Flavor::Full {
            return Err(Error::Inapplicable("the algebraic model takes an explicit vector".into()));
        }
        let mut coords = vec![BigInt::from(0); self.lattice.rank()];
        coords[0] = BigInt::one();
        coords[1] = BigInt::one();
        Ok(LatticeVector::new(coords))
    }
}

/// Saturated complement `x^⊥` in the model.
pub fn perp(model: &MukaiLatticeModel, x: &LatticeVector) -> Result<SublatticeEmbedding> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    model.lattice.orthogonal_complement(std::slice::from_ref(x))
}

/// `v^⊥` inside `Z ⊕ NS ⊕ Z`.
pub fn algebraic_perp(surface: &SurfaceModel, v: &MukaiVector) -> Result<SublatticeEmbedding> {
    let model = algebraic_mukai_lattice(surface);
    perp(&model, &model.embed(v)?)
}

fn check_twice_square2(surface: &SurfaceModel, v: &MukaiVector) -> Result<()> {
    let w = v.halved().ok_or_else(|| Error::NotOlsShape(format!("{v} is not divisible by 2")))?;
    if w.is_zero() || !w.is_primitive()? || surface.square(&w)? != BigInt::from(2) {
        return Err(Error::NotOlsShape(format!("{v} is not 2w with w primitive of square 2")));
    }
    Ok(())
}

/// Second Betti number of the symplectic resolution: `rank(w^⊥) + 1`, the
/// extra class being the exceptional divisor. Every primitive square-2 class
/// of the full lattice lies in one isometry orbit, so the canonical
/// representative is used.
pub fn resolution_b2(kind: SurfaceKind) -> usize {
    let model = full_mukai_lattice(kind);
    let w = model.canonical_square2_vector().expect("full model");
    perp(&model, &w).expect("nonzero").rank() + 1
}

/// As [`resolution_b2`], after checking that `v` has the `2w`, `w² = 2` shape.
pub fn resolution_b2_for(surface: &SurfaceModel, v: &MukaiVector) -> Result<usize> {
    check_twice_square2(surface, v)?;
    Ok(resolution_b2(surface.kind))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerpReport {
    pub rank: usize,
    pub signature: [usize; 3],
    #[serde(with = "json::scalar")]
    pub discriminant: BigInt,
    #[serde(with = "json::matrix")]
    pub gram: Vec<Vec<BigInt>>,
    /// Present when the report is the complement of a square-2 class in a
    /// full lattice, where it predicts `H²` of the resolution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_b2: Option<usize>,
}

impl PerpReport {
    pub fn new(e: &SublatticeEmbedding, predicted_b2: Option<usize>) -> Self {
        PerpReport {
            rank: e.rank(),
            signature: e.induced.signature().as_array(),
            discriminant: e.induced.discriminant(),
            gram: e.induced.gram().to_vec(),
            predicted_b2,
        }
    }
}

/// Report for the canonical square-2 class of the full lattice of `kind`.
pub fn full_perp_report(kind: SurfaceKind) -> PerpReport {
    let model = full_mukai_lattice(kind);
    let w = model.canonical_square2_vector().expect("full model");
    let e = perp(&model, &w).expect("nonzero");
    let b2 = e.rank() + 1;
    PerpReport::new(&e, Some(b2))
}
