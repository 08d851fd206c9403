use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{int, Coeff};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    Linear,
    Quadratic,
}

impl FitModel {
    fn degree(self) -> usize {
        match self {
            FitModel::Linear => 1,
            FitModel::Quadratic => 2,
        }
    }

    fn min_points(self) -> usize {
        match self {
            FitModel::Linear => 3,
            FitModel::Quadratic => 4,
        }
    }
}

impl std::str::FromStr for FitModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(FitModel::Linear),
            "quadratic" => Ok(FitModel::Quadratic),
            _ => Err(Error::invalid(format!("unknown fit model `{s}`"))),
        }
    }
}

/// Least-squares polynomial fit with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fit {
    pub model: FitModel,
    /// Leading coefficient first: `[a, b]` for `a·x + b`, `[a, b, c]` for
    /// `a·x² + b·x + c`.
    pub coefficients: Vec<Coeff>,
    pub r_squared: Coeff,
}

impl Fit {
    pub fn leading(&self) -> &Coeff {
        &self.coefficients[0]
    }

    pub fn coefficients_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn r_squared_f64(&self) -> f64 {
        self.r_squared.to_f64().unwrap_or(f64::NAN)
    }

    pub fn predict(&self, x: &Coeff) -> Coeff {
        self.coefficients.iter().fold(Coeff::zero(), |acc, c| acc * x + c)
    }
}

/// Solves the normal equations `(XᵀX)β = Xᵀy` by Gaussian elimination over
/// the rationals.
pub fn fit(model: FitModel, points: &[(Coeff, Coeff)]) -> Result<Fit> {
    if points.len() < model.min_points() {
        return Err(Error::invalid(format!("{model:?} fit needs at least {} points", model.min_points())));
    }
    let mut xs: Vec<&Coeff> = points.iter().map(|p| &p.0).collect();
    xs.sort();
    xs.dedup();
    if xs.len() <= model.degree() {
        return Err(Error::invalid("not enough distinct abscissae"));
    }
    let k = model.degree() + 1;
    // powers[j] = x^j for j in 0..2k−1
    let mut moments = vec![Coeff::zero(); 2 * k - 1];
    let mut rhs = vec![Coeff::zero(); k];
    for (x, y) in points {
        let mut pw = Coeff::one();
        for (j, m) in moments.iter_mut().enumerate() {
            if j < k {
                rhs[j] += &pw * y;
            }
            *m += &pw;
            pw *= x;
        }
    }
    let mut a: Vec<Vec<Coeff>> = (0..k)
        .map(|r| {
            let mut row: Vec<Coeff> = (0..k).map(|c| moments[r + c].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero()).ok_or_else(|| Error::Numeric("singular normal equations".into()))?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in &mut a[col][col..] {
            *v /= &p;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= &f * pv;
                }
            }
        }
    }
    // a[j][k] is the coefficient of x^j
    let coefficients: Vec<Coeff> = (0..k).rev().map(|j| a[j][k].clone()).collect();
    let mut out = Fit { model, coefficients, r_squared: Coeff::zero() };

    let n = int(points.len() as i64);
    let mean = points.iter().fold(Coeff::zero(), |acc, p| acc + &p.1) / n;
    let (mut ss_res, mut ss_tot) = (Coeff::zero(), Coeff::zero());
    for (x, y) in points {
        let r = y - out.predict(x);
        ss_res += &r * &r;
        let d = y - &mean;
        ss_tot += &d * &d;
    }
    out.r_squared = if ss_tot.is_zero() {
        if ss_res.is_zero() {
            Coeff::one()
        } else {
            Coeff::zero()
        }
    } else {
        Coeff::one() - ss_res / ss_tot
    };
    Ok(out)
}

/// [`fit`] over integer points.
pub fn fit_points(model: FitModel, points: &[(i64, i64)]) -> Result<Fit> {
    let pts: Vec<(Coeff, Coeff)> = points.iter().map(|&(x, y)| (int(x), int(y))).collect();
    fit(model, &pts)
}
