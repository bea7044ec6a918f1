use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arrangement::LinearForm;
use crate::error::{Error, Result};
use crate::exact::{det, identity, inverse, mat_vec, vec_mat, Mat4, Vec4, Q};

/// A projective change of coordinates `old = matrix * new`, followed by
/// dehomogenisation at `affine_coordinate = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    #[serde(serialize_with = "ser_mat")]
    matrix: Mat4,
    #[serde(skip)]
    inverse: Mat4,
    pub affine_coordinate: usize,
}

fn ser_mat<S: serde::Serializer>(m: &Mat4, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    serde::Serialize::serialize(&rows, s)
}

impl Chart {
    pub fn identity() -> Self {
        Self { matrix: identity(), inverse: identity(), affine_coordinate: 3 }
    }

    pub fn new(matrix: Mat4, affine_coordinate: usize) -> Result<Self> {
        assert!(affine_coordinate < 4);
        let inverse = inverse(&matrix).ok_or(Error::SingularChart)?;
        Ok(Self { matrix, inverse, affine_coordinate })
    }

    /// Chart given by the new coordinates as functions of the old ones.
    pub fn from_new_coordinates(new_in_old: Mat4) -> Result<Self> {
        let matrix = inverse(&new_in_old).ok_or(Error::SingularChart)?;
        Ok(Self { matrix, inverse: new_in_old, affine_coordinate: 3 })
    }

    /// A chart in which `form` becomes the new `t`, so the plane lies at
    /// infinity. The other new coordinates are old ones; the one dropped is
    /// the last with coefficient `+-1` in `form` (or its last nonzero one),
    /// which keeps the determinant small.
    pub fn sending_to_infinity(form: &LinearForm) -> Result<Self> {
        let c = form.coeffs();
        let drop = (0..4)
            .rev()
            .find(|&i| c[i].abs() == 1)
            .or_else(|| (0..4).rev().find(|&i| c[i] != 0))
            .ok_or(Error::ZeroForm)?;
        let mut rows: Vec<Vec4> = (0..4).filter(|&i| i != drop).map(|i| identity()[i].clone()).collect();
        rows.push(form.to_rational());
        Self::from_new_coordinates([rows[0].clone(), rows[1].clone(), rows[2].clone(), rows[3].clone()])
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Mat4 {
        &self.inverse
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.inverse.clone(), inverse: self.matrix.clone(), affine_coordinate: self.affine_coordinate }
    }

    pub fn det(&self) -> Q {
        det(&self.matrix)
    }

    pub fn abs_det(&self) -> Q {
        self.det().abs()
    }

    /// Coefficients of `a . old` in the new coordinates.
    pub fn transform_form(&self, a: &Vec4) -> Vec4 {
        vec_mat(a, &self.matrix)
    }

    pub fn point_to_new(&self, p: &Vec4) -> Vec4 {
        mat_vec(&self.inverse, p)
    }

    pub fn point_to_old(&self, p: &Vec4) -> Vec4 {
        mat_vec(&self.matrix, p)
    }

    /// Splits homogeneous new coordinates into the three affine ones and the
    /// dehomogenising one.
    pub fn split(&self, v: &Vec4) -> ([Q; 3], Q) {
        let mut rest = (0..4).filter(|&i| i != self.affine_coordinate).map(|i| v[i].clone());
        let xyz = [rest.next().unwrap(), rest.next().unwrap(), rest.next().unwrap()];
        (xyz, v[self.affine_coordinate].clone())
    }

    /// Affine image of a homogeneous new point, or `None` at infinity.
    pub fn dehomogenise(&self, v: &Vec4) -> Option<[Q; 3]> {
        let (xyz, w) = self.split(v);
        (!w.is_zero()).then(|| xyz.map(|x| x / &w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, vec4};

    #[test]
    fn t_to_t_minus_x() {
        let chart = Chart::from_new_coordinates([vec4([1, 0, 0, 0]), vec4([0, 1, 0, 0]), vec4([0, 0, 1, 0]), vec4([1, 0, 0, 1])]).unwrap();
        assert_eq!(chart.transform_form(&vec4([0, 0, 0, 1])), vec4([-1, 0, 0, 1]));
        assert_eq!(chart.transform_form(&vec4([1, 0, 0, 1])), vec4([0, 0, 0, 1]));
        assert_eq!(chart.point_to_new(&vec4([1, -1, 1, -1])), vec4([1, -1, 1, 0]));
        assert_eq!(chart.det(), q(1));
        assert_eq!(chart.inverse().inverse(), chart);
    }

    #[test]
    fn plane_goes_to_infinity() {
        let form = LinearForm::new([1, 1, -1, 1]).unwrap();
        let chart = Chart::sending_to_infinity(&form).unwrap();
        assert_eq!(chart.transform_form(&form.to_rational()), vec4([0, 0, 0, 1]));
        assert_eq!(chart.abs_det(), q(1));
        let form = LinearForm::new([0, 2, 3, 0]).unwrap();
        let chart = Chart::sending_to_infinity(&form).unwrap();
        assert_eq!(chart.transform_form(&form.to_rational()), vec4([0, 0, 0, 1]));
    }
}
