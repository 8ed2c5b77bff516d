//! Trace-linear constraint sets `{P >= 0 : Tr(A_k P) = c_k}` and membership tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix, Field, HermitianMatrix, SquareMatrix, C64};

/// `(A + A*)/2`.
pub fn symmetrize_constraint(a: &SquareMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrized(a.field(), a.as_matrix().clone())
}

/// One equality constraint `Tr(A P) = c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(rename = "A", deserialize_with = "deserialize_constraint_matrix")]
    pub a: HermitianMatrix,
    #[serde(deserialize_with = "deserialize_target")]
    pub c: f64,
}

impl Constraint {
    /// Residual scale `max(1, |c|, ||A||_F)`.
    pub fn scale(&self) -> f64 {
        1f64.max(self.c.abs()).max(self.a.frobenius_norm())
    }
}

fn deserialize_constraint_matrix<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<HermitianMatrix, D::Error> {
    let raw = SquareMatrix::deserialize(d)?;
    Ok(symmetrize_constraint(&raw))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TargetJson {
    Real(f64),
    Complex([f64; 2]),
}

fn deserialize_target<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    use serde::de::Error as _;
    match TargetJson::deserialize(d)? {
        TargetJson::Real(c) => Ok(c),
        TargetJson::Complex([re, im]) => real_target(C64::new(re, im)).map_err(D::Error::custom),
    }
}

/// Accept a target value only if it is real; `Tr(A P)` is real for Hermitian `A` and PSD `P`.
pub fn real_target(c: C64) -> Result<f64> {
    if c.im != 0.0 {
        return Err(Error::Domain(format!(
            "constraint target {c} has nonzero imaginary part; no Hermitian constraint can attain it"
        )));
    }
    Ok(c.re)
}

/// Which canonical constraint family to build.
#[derive(Clone, Debug)]
pub enum SpectrahedronKind {
    /// Unit diagonal: `(e_j e_j*, 1)` for `j = 1..n`.
    Elliptope(usize),
    /// Unit trace: `(I, 1)`.
    Density(usize),
    /// User constraints, symmetrized on ingestion.
    Custom(Vec<(Option<String>, SquareMatrix, f64)>),
}

/// A finite set of trace-linear equality constraints over a field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrahedron {
    field: Field,
    n: usize,
    constraints: Vec<Constraint>,
}

impl Spectrahedron {
    pub fn new(field: Field, n: usize, constraints: Vec<Constraint>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("ambient dimension must be at least 1".into()));
        }
        for (k, con) in constraints.iter().enumerate() {
            if con.a.n() != n {
                return Err(Error::Shape(format!(
                    "constraint {k} has size {} but the ambient dimension is {n}",
                    con.a.n()
                )));
            }
            if !con.c.is_finite() {
                return Err(Error::Domain(format!("constraint {k} has a non-finite target")));
            }
        }
        let constraints = constraints
            .into_iter()
            .map(|c| Ok(Constraint { a: c.a.with_field(field)?, ..c }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { field, n, constraints })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn targets(&self) -> impl Iterator<Item = f64> + '_ {
        self.constraints.iter().map(|c| c.c)
    }

    /// Apply `A -> U A U*` to every constraint.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        let constraints = self
            .constraints
            .iter()
            .map(|c| Ok(Constraint { a: c.a.conjugate_by(u)?, ..c.clone() }))
            .collect::<Result<Vec<_>>>()?;
        let field = if u.iter().any(|z| z.im != 0.0) { Field::Complex } else { self.field };
        Self::new(field, self.n, constraints)
    }
}

impl<'de> Deserialize<'de> for Spectrahedron {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            field: Field,
            n: usize,
            constraints: Vec<Constraint>,
        }
        let r = Repr::deserialize(d)?;
        Spectrahedron::new(r.field, r.n, r.constraints).map_err(D::Error::custom)
    }
}

pub fn build_spectrahedron(kind: SpectrahedronKind, field: Field) -> Result<Spectrahedron> {
    match kind {
        SpectrahedronKind::Elliptope(n) => {
            if n == 0 {
                return Err(Error::Shape("elliptope dimension must be at least 1".into()));
            }
            let constraints = (0..n)
                .map(|j| {
                    let mut d = vec![0.0; n];
                    d[j] = 1.0;
                    Constraint {
                        label: Some(format!("diag[{j}]")),
                        a: HermitianMatrix::diagonal(field, &d),
                        c: 1.0,
                    }
                })
                .collect();
            Spectrahedron::new(field, n, constraints)
        }
        SpectrahedronKind::Density(n) => {
            if n == 0 {
                return Err(Error::Shape("density dimension must be at least 1".into()));
            }
            let con = Constraint { label: Some("trace".into()), a: HermitianMatrix::identity(n, field), c: 1.0 };
            Spectrahedron::new(field, n, vec![con])
        }
        SpectrahedronKind::Custom(list) => {
            let n = list
                .first()
                .map(|(_, a, _)| a.n())
                .ok_or_else(|| Error::Shape("custom constraint list is empty".into()))?;
            let constraints = list
                .into_iter()
                .map(|(label, a, c)| Constraint { label, a: symmetrize_constraint(&a), c })
                .collect();
            Spectrahedron::new(field, n, constraints)
        }
    }
}

pub fn elliptope(n: usize, field: Field) -> Result<Spectrahedron> {
    build_spectrahedron(SpectrahedronKind::Elliptope(n), field)
}

pub fn density(n: usize, field: Field) -> Result<Spectrahedron> {
    build_spectrahedron(SpectrahedronKind::Density(n), field)
}

/// Feasibility diagnostics of a point against a spectrahedron.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    /// `max(0, -lambda_min(P))`.
    pub psd_violation: f64,
    pub min_eigenvalue: f64,
    /// `|Tr(A_k P) - c_k|` in constraint order.
    pub constraint_residuals: Vec<f64>,
    pub residual_scales: Vec<f64>,
    pub feasible: bool,
    pub tol: f64,
}

impl MembershipReport {
    pub fn max_residual(&self) -> f64 {
        self.constraint_residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Largest residual divided by its scale.
    pub fn max_scaled_residual(&self) -> f64 {
        self.constraint_residuals
            .iter()
            .zip(&self.residual_scales)
            .map(|(r, s)| r / s)
            .fold(0.0, f64::max)
    }
}

pub fn check_point(c: &Spectrahedron, p: &HermitianMatrix) -> Result<()> {
    if p.n() != c.n() {
        return Err(Error::Shape(format!(
            "point has dimension {} but the spectrahedron has dimension {}",
            p.n(),
            c.n()
        )));
    }
    if c.field() == Field::Real && p.as_matrix().iter().any(|z| z.im != 0.0) {
        return Err(Error::Shape("complex point tested against a real spectrahedron".into()));
    }
    Ok(())
}

pub fn membership(c: &Spectrahedron, p: &HermitianMatrix, tol: f64) -> Result<MembershipReport> {
    check_point(c, p)?;
    let min_eigenvalue = eigh(p)?.min_eigenvalue();
    let psd_violation = (-min_eigenvalue).max(0.0);
    let constraint_residuals: Vec<f64> =
        c.constraints().iter().map(|con| (con.a.trace_product(p) - con.c).abs()).collect();
    let residual_scales: Vec<f64> = c.constraints().iter().map(Constraint::scale).collect();
    let feasible = psd_violation <= tol
        && constraint_residuals.iter().zip(&residual_scales).all(|(r, s)| *r <= tol * s);
    Ok(MembershipReport { psd_violation, min_eigenvalue, constraint_residuals, residual_scales, feasible, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn symmetrize_examples() {
        let a = SquareMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        let s = symmetrize_constraint(&a);
        assert_eq!(s.real_part(), nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let again = symmetrize_constraint(&s.clone().into());
        assert_eq!(again, s);
    }

    #[test]
    fn symmetrize_rejects_non_square() {
        let a = CMatrix::zeros(2, 3);
        assert!(matches!(SquareMatrix::new(Field::Real, a), Err(Error::Shape(_))));
    }

    #[test]
    fn builders() {
        let e = elliptope(2, Field::Real).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.constraints()[0].a, HermitianMatrix::diagonal(Field::Real, &[1.0, 0.0]));
        assert_eq!(e.constraints()[1].a, HermitianMatrix::diagonal(Field::Real, &[0.0, 1.0]));
        assert!(e.targets().all(|c| c == 1.0));

        let d = density(3, Field::Complex).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.constraints()[0].a, HermitianMatrix::identity(3, Field::Complex));
        assert_eq!(d.constraints()[0].c, 1.0);

        let raw = SquareMatrix::from_real_rows(&[vec![1.0, 4.0], vec![0.0, 3.0]]).unwrap();
        let c = build_spectrahedron(SpectrahedronKind::Custom(vec![(None, raw, 2.0)]), Field::Real).unwrap();
        assert_eq!(c.constraints()[0].a.real_part()[(0, 1)], 2.0);
        assert_eq!(c.constraints()[0].a.real_part()[(1, 0)], 2.0);
    }

    #[test]
    fn custom_dimension_mismatch() {
        let a = SquareMatrix::from_real_rows(&[vec![1.0]]).unwrap();
        let b = SquareMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = build_spectrahedron(SpectrahedronKind::Custom(vec![(None, a, 1.0), (None, b, 1.0)]), Field::Real);
        assert!(matches!(r, Err(Error::Shape(_))));
        assert!(build_spectrahedron(SpectrahedronKind::Custom(vec![]), Field::Real).is_err());
    }

    #[test]
    fn membership_examples() {
        let e3 = elliptope(3, Field::Real).unwrap();
        let r = membership(&e3, &HermitianMatrix::identity(3, Field::Real), 1e-10).unwrap();
        assert!(r.feasible);
        assert!(r.constraint_residuals.iter().all(|&x| x == 0.0));

        let d2 = density(2, Field::Real).unwrap();
        let r = membership(&d2, &HermitianMatrix::diagonal(Field::Real, &[0.7, 0.4]), 1e-8).unwrap();
        assert!(!r.feasible);
        assert_abs_diff_eq!(r.constraint_residuals[0], 0.1, epsilon = 1e-15);

        let j3 = HermitianMatrix::from_real_rows(&vec![vec![1.0; 3]; 3]).unwrap();
        assert!(membership(&e3, &j3, 1e-8).unwrap().feasible);

        let wrong = HermitianMatrix::identity(2, Field::Real);
        assert!(matches!(membership(&e3, &wrong, 1e-8), Err(Error::Shape(_))));
    }

    #[test]
    fn json_rejects_nonreal_target_and_symmetrizes() {
        let text = r#"{"field":"complex","n":1,"constraints":[{"A":{"field":"complex","n":1,"rows":[[[1.0,0.0]]]},"c":[1.0,0.5]}]}"#;
        assert!(serde_json::from_str::<Spectrahedron>(text).is_err());
        let ok = r#"{"field":"real","n":2,"constraints":[{"label":"x","A":{"field":"real","n":2,"rows":[[0,2],[0,0]]},"c":1}]}"#;
        let s: Spectrahedron = serde_json::from_str(ok).unwrap();
        assert_eq!(s.constraints()[0].a.real_part()[(1, 0)], 1.0);
        assert_eq!(s.constraints()[0].label.as_deref(), Some("x"));
        let back: Spectrahedron = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
