//! Newton polygons of polynomials and their factorization by slope.
//!
//! For P = x^n + c_1 x^(n-1) + ... + c_n the polygon is the lower convex hull of the
//! points (i, v(c_i)), so the segment slopes read left to right are the valuations
//! of the roots in increasing order.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::padic::{PadicScalar, UnramifiedField};
use crate::poly::Poly;
use crate::scalar::{Scalar, ScalarField, Valuation};

/// A slope, with ∞ standing for the root 0 (and for torsion in the symbolic calculus).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Rational64),
    Infinite,
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp(b),
            (Slope::Finite(_), Slope::Infinite) => Ordering::Less,
            (Slope::Infinite, Slope::Finite(_)) => Ordering::Greater,
            (Slope::Infinite, Slope::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{r}"),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

/// Lower convex hull with its slopes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// Hull vertices (i, v), i counted from the leading coefficient.
    pub vertices: Vec<(usize, i64)>,
    /// Distinct slopes, increasing, with multiplicities.
    pub slopes: Vec<(Rational64, usize)>,
    /// Order of vanishing at 0 (roots of slope ∞, not part of the hull).
    pub zero_roots: usize,
}

impl NewtonPolygon {
    /// Polygon from known points; the caller guarantees distinct increasing i.
    pub fn from_points(points: &[(usize, i64)], zero_roots: usize) -> Self {
        let mut hull: Vec<(usize, i64)> = Vec::new();
        for &pt in points {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                // drop the middle point unless it lies strictly below the chord
                let cross = (x2 as i128 - x1 as i128) * (pt.1 as i128 - y1 as i128)
                    - (y2 as i128 - y1 as i128) * (pt.0 as i128 - x1 as i128);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let slopes = hull
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                (Rational64::new(w[1].1 - w[0].1, len as i64), len)
            })
            .collect();
        NewtonPolygon {
            vertices: hull,
            slopes,
            zero_roots,
        }
    }

    /// Height of the hull at abscissa x.
    pub fn height_at(&self, x: usize) -> Option<Rational64> {
        self.vertices.windows(2).find_map(|w| {
            if w[0].0 <= x && x <= w[1].0 {
                let t = Rational64::new((x - w[0].0) as i64, (w[1].0 - w[0].0) as i64);
                Some(Rational64::from(w[0].1) + t * Rational64::from(w[1].1 - w[0].1))
            } else {
                None
            }
        })
    }

    /// Slopes expanded with multiplicity, increasing.
    pub fn slope_multiset(&self) -> Vec<Rational64> {
        self.slopes
            .iter()
            .flat_map(|&(s, m)| std::iter::repeat_n(s, m))
            .collect()
    }

    /// Width of the hull (number of nonzero roots).
    pub fn width(&self) -> usize {
        self.slopes.iter().map(|s| s.1).sum()
    }
}

/// Newton polygon of a polynomial with certified leading coefficient.
///
/// Coefficients that are zero within precision are allowed only when their
/// valuation bound keeps them off (or on) the hull; otherwise the hull cannot be
/// certified and a precision error is returned.
pub fn newton_polygon<S: Scalar>(poly: &Poly<S>) -> Result<NewtonPolygon> {
    let n = poly.degree();
    let lead = poly.leading();
    if lead.is_zero() {
        return Err(Error::Precision("leading coefficient vanishes within precision".into()));
    }
    let coeffs = poly.coeffs();
    let mut zero_roots = 0;
    while zero_roots < n && coeffs[zero_roots].certify_zero()? {
        zero_roots += 1;
    }
    let mut exact = Vec::new();
    let mut bounds = Vec::new();
    for i in 0..=n - zero_roots {
        match coeffs[n - i].valuation() {
            Valuation::Exact(v) => exact.push((i, v)),
            Valuation::AtLeast(b) => bounds.push((i, b)),
        }
    }
    let polygon = NewtonPolygon::from_points(&exact, zero_roots);
    for (i, b) in bounds {
        let h = polygon.height_at(i).expect("interior abscissa");
        if Rational64::from(b) < h {
            return Err(Error::Precision(format!(
                "coefficient of x^{} (valuation >= {b}) may lie below the hull",
                n - i
            )));
        }
    }
    Ok(polygon)
}

/// Monic factors of a polynomial, one per slope.
#[derive(Debug, Clone)]
pub struct SlopeFactorization {
    /// Finite slopes increasing, then the factor x^k for the root 0 if present.
    pub factors: Vec<(Slope, Poly<PadicScalar>)>,
    /// Digits of absolute precision lost; factors are known modulo p^(N - loss).
    pub precision_loss: i64,
}

const MAX_HENSEL_STEPS: usize = 200;

/// Factor a monic polynomial into pieces whose Newton polygons are single segments.
///
/// Each vertex of the polygon is split off by Newton iteration on the Sylvester
/// system G·δH + H·δG = P - G·H, starting from the coefficient truncation at the
/// vertex. The iteration self-corrects, so intermediate approximations are lifted
/// to full precision; the final precision is charged with the valuation of the
/// resultant at each split.
pub fn slope_factorization(poly: &Poly<PadicScalar>) -> Result<SlopeFactorization> {
    if !poly.is_monic() {
        return Err(Error::InvalidParameter("slope factorization needs a monic polynomial".into()));
    }
    let field = poly.field().clone();
    let cap = field.precision() as i64;
    let input_loss = poly
        .coeffs()
        .iter()
        .map(|c| cap - c.precision())
        .max()
        .unwrap_or(0)
        .max(0);
    let polygon = newton_polygon(poly)?;
    let k = polygon.zero_roots;
    let stripped = Poly::new(&field, poly.coeffs()[k..].to_vec());

    let mut factors = Vec::new();
    let mut loss = input_loss;
    let mut rest = stripped;
    let mut slopes = polygon.slopes.clone();
    while slopes.len() > 1 {
        let (slope, width) = slopes[0];
        let (g, h, split_loss) = split_at(&rest, width)?;
        loss += split_loss;
        factors.push((Slope::Finite(slope), g));
        rest = h;
        slopes.remove(0);
    }
    if let Some(&(slope, _)) = slopes.first() {
        factors.push((Slope::Finite(slope), rest));
    }
    if k > 0 {
        let mut xk = vec![field.zero(); k];
        xk.push(field.one());
        factors.push((Slope::Infinite, Poly::new(&field, xk)));
    }
    if loss >= cap - field.certify_floor() {
        return Err(Error::Precision(format!(
            "slope factorization loses {loss} of {cap} digits"
        )));
    }
    let factors = factors
        .into_iter()
        .map(|(s, f)| {
            let coeffs = f.coeffs().iter().map(|c| c.truncated(cap - loss)).collect();
            (s, Poly::new(&field, coeffs))
        })
        .collect();
    Ok(SlopeFactorization {
        factors,
        precision_loss: loss,
    })
}

/// Split monic P (no zero roots) as G·H with deg G = `width` carrying the first
/// segment. Returns the factors and the digits of precision they lost.
fn split_at(
    p: &Poly<PadicScalar>,
    width: usize,
) -> Result<(Poly<PadicScalar>, Poly<PadicScalar>, i64)> {
    let field = p.field().clone();
    let n = p.degree();
    let m = n - width;
    // c_j = coefficient of x^(n-j)
    let c = |j: usize| p.coeff(n - j);
    let mut g: Vec<PadicScalar> = (0..=width).map(|j| c(width - j)).collect();
    g[width] = field.one();
    let pivot_inv = c(width).inv()?;
    let mut h: Vec<PadicScalar> = (0..=m).map(|j| c(n - j).mul(&pivot_inv)).collect();
    h[m] = field.one();
    let mut g = Poly::new(&field, g.iter().map(|x| x.lifted()).collect());
    let mut h = Poly::new(&field, h.iter().map(|x| x.lifted()).collect());

    let cap = field.precision() as i64;
    let mut best = i64::MIN;
    let mut stalled = 0;
    for _ in 0..MAX_HENSEL_STEPS {
        let sylvester = sylvester_matrix(&field, &g, &h);
        let res_val = sylvester.det_valuation()?;
        let err = p.sub(&g.mul(&h));
        let e: Vec<PadicScalar> = (0..n).map(|i| err.coeff(i)).collect();
        let ve = e.iter().map(|x| x.valuation().bound()).min().unwrap_or(cap);
        // once the residual stops improving it sits at the noise floor of the
        // truncated arithmetic
        if ve >= cap || stalled >= 2 {
            let loss = (cap - ve).max(0) + res_val;
            return Ok((g, h, loss));
        }
        if ve > best {
            best = ve;
            stalled = 0;
        } else {
            stalled += 1;
        }
        let sol = sylvester.solve(&e)?;
        // columns: δH coefficients first (m of them), then δG (width)
        let dh = Poly::new(&field, sol[..m].to_vec());
        let dg = Poly::new(&field, sol[m..].to_vec());
        let ng: Vec<PadicScalar> = (0..=width)
            .map(|i| {
                if i == width {
                    field.one()
                } else {
                    g.coeff(i).add(&dg.coeff(i)).lifted()
                }
            })
            .collect();
        let nh: Vec<PadicScalar> = (0..=m)
            .map(|i| {
                if i == m {
                    field.one()
                } else {
                    h.coeff(i).add(&dh.coeff(i)).lifted()
                }
            })
            .collect();
        g = Poly::new(&field, ng);
        h = Poly::new(&field, nh);
    }
    Err(Error::Precision(format!(
        "Hensel lifting did not converge (residual valuation {best})"
    )))
}

/// Matrix of (δH, δG) ↦ G·δH + H·δG on coefficient vectors of degree < n.
fn sylvester_matrix(
    field: &UnramifiedField,
    g: &Poly<PadicScalar>,
    h: &Poly<PadicScalar>,
) -> Matrix<PadicScalar> {
    let width = g.degree();
    let m = h.degree();
    let n = width + m;
    let mut s = Matrix::zeros(field, n, n);
    for j in 0..m {
        for (i, gc) in g.coeffs().iter().enumerate() {
            if i + j < n {
                s.set(i + j, j, gc.clone());
            }
        }
    }
    for j in 0..width {
        for (i, hc) in h.coeffs().iter().enumerate() {
            if i + j < n {
                s.set(i + j, m + j, hc.clone());
            }
        }
    }
    s
}
