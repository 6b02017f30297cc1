use super::multi::{Monomial, MultiPoly};
use super::scalar::Coeff;
use crate::error::{Error, Result};
use crate::linalg::det;

/// Sylvester matrix of two univariate coefficient lists (low to high), using
/// their formal degrees `a.len() - 1` and `b.len() - 1`.
pub fn sylvester_matrix<C: Coeff>(a: &[C], b: &[C]) -> Vec<Vec<C>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut s = vec![vec![C::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            s[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            s[n + i][i + k] = c.clone();
        }
    }
    s
}

pub fn univariate_resultant<C: Coeff>(a: &[C], b: &[C]) -> C {
    det(&sylvester_matrix(a, b))
}

/// Resultant of `f` and `g` with respect to `var`, as a polynomial in the
/// remaining variables (same variable count, `var` absent).
///
/// The Sylvester determinant is evaluated on a tensor grid of the remaining
/// variables and interpolated. Exact when the coefficients are rational; the
/// complex-float path samples on roots of unity.
pub fn elimination_resultant<C: Coeff>(
    f: &MultiPoly<C>,
    g: &MultiPoly<C>,
    var: usize,
) -> Result<MultiPoly<C>> {
    let nvars = f.nvars();
    if g.nvars() != nvars {
        return Err(Error::DimensionMismatch {
            expected: nvars,
            got: g.nvars(),
        });
    }
    if nvars > 3 {
        return Err(Error::Unsupported(
            "resultants of more than three variables".into(),
        ));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = f.degree_in(var).unwrap_or(0) as usize;
    let n = g.degree_in(var).unwrap_or(0) as usize;
    if m == 0 && n == 0 {
        return Err(Error::ConstantInVariable(var));
    }
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let others: Vec<usize> = (0..nvars).filter(|&v| v != var).collect();

    // degree bound of the resultant in each remaining variable
    let bound = |v: usize| -> usize {
        let df = f.degree_in(v).unwrap_or(0) as usize;
        let dg = g.degree_in(v).unwrap_or(0) as usize;
        df * n + dg * m
    };
    let sizes: Vec<usize> = others.iter().map(|&v| bound(v) + 1).collect();
    let nodes: Vec<Vec<C>> = sizes.iter().map(|&s| C::interpolation_nodes(s)).collect();

    let eval_at = |point: &[C]| -> C {
        let mut x = vec![C::zero(); nvars];
        for (k, &v) in others.iter().enumerate() {
            x[v] = point[k].clone();
        }
        let a: Vec<C> = fc.iter().map(|c| c.eval(&x).expect("nvars")).collect();
        let b: Vec<C> = gc.iter().map(|c| c.eval(&x).expect("nvars")).collect();
        univariate_resultant(&a, &b)
    };

    let mut out = MultiPoly::zero(nvars);
    match others.len() {
        0 => {
            out.add_term(Monomial::default(), eval_at(&[]));
        }
        1 => {
            let vals: Vec<C> = nodes[0]
                .iter()
                .map(|t| eval_at(std::slice::from_ref(t)))
                .collect();
            let coeffs = C::interpolate(&nodes[0], &vals);
            for (k, c) in coeffs.into_iter().enumerate() {
                let mut e = [0u32; 4];
                e[others[0]] = k as u32;
                out.add_term(Monomial::new(&e), c);
            }
        }
        _ => {
            // interpolate along the first remaining variable for each node of the second
            let mut partial: Vec<Vec<C>> = Vec::with_capacity(sizes[1]);
            for t1 in &nodes[1] {
                let vals: Vec<C> = nodes[0]
                    .iter()
                    .map(|t0| eval_at(&[t0.clone(), t1.clone()]))
                    .collect();
                partial.push(C::interpolate(&nodes[0], &vals));
            }
            for k0 in 0..sizes[0] {
                let vals: Vec<C> = partial.iter().map(|row| row[k0].clone()).collect();
                let coeffs = C::interpolate(&nodes[1], &vals);
                for (k1, c) in coeffs.into_iter().enumerate() {
                    let mut e = [0u32; 4];
                    e[others[0]] = k0 as u32;
                    e[others[1]] = k1 as u32;
                    out.add_term(Monomial::new(&e), c);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::multi::parse_poly;
    use crate::poly::scalar::int;

    #[test]
    fn linear_pair() {
        let f = parse_poly(2, "x0 - x1").unwrap();
        let g = parse_poly(2, "x0 + x1").unwrap();
        let r = elimination_resultant(&f, &g, 0).unwrap();
        assert_eq!(r, parse_poly(2, "2*x1").unwrap());
    }

    #[test]
    fn circle_and_line() {
        let f = parse_poly(2, "x0^2 + x1^2 - 1").unwrap();
        let g = parse_poly(2, "x0 - x1").unwrap();
        let r = elimination_resultant(&f, &g, 0).unwrap();
        assert_eq!(r, parse_poly(2, "2*x1^2 - 1").unwrap());
    }

    #[test]
    fn constant_in_variable() {
        let f = parse_poly(2, "x1 + 1").unwrap();
        let g = parse_poly(2, "x1^2").unwrap();
        assert!(matches!(
            elimination_resultant(&f, &g, 0),
            Err(Error::ConstantInVariable(0))
        ));
    }

    #[test]
    fn three_variables_exact_and_float_agree() {
        let f = parse_poly(3, "x0^2*x1 - 3*x1*x2^2 + x0*x1*x2 + 2*x2^3").unwrap();
        let g = parse_poly(3, "x0^2 - x1^2 + 5*x0*x2 - x2^2").unwrap();
        let exact = elimination_resultant(&f, &g, 0).unwrap();
        assert!(exact.is_homogeneous());
        assert_eq!(exact.degree(), Some(6));
        assert_eq!(exact.degree_in(0), Some(0));
        let approx = elimination_resultant(&f.to_c64(), &g.to_c64(), 0).unwrap();
        assert!(approx.distance(&exact.to_c64()) < 1e-9 * exact.to_c64().max_coeff());
        // the resultant vanishes where the curves meet in x0 for fixed (x1, x2)
        let x = [int(0), int(1), int(1)];
        let fr = f.specialize(1, &int(1)).specialize(2, &int(1));
        let gr = g.specialize(1, &int(1)).specialize(2, &int(1));
        let direct = univariate_resultant(
            &fr.coefficients_in(0)
                .iter()
                .map(|c| c.eval(&x).unwrap())
                .collect::<Vec<_>>(),
            &gr.coefficients_in(0)
                .iter()
                .map(|c| c.eval(&x).unwrap())
                .collect::<Vec<_>>(),
        );
        assert_eq!(exact.eval(&x).unwrap(), direct);
    }
}
