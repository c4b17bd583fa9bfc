use super::Polynomial;
use crate::field::Field;

/// Coefficients of `T(s*v + t*w)` as a binary cubic in `(s, t)`.
///
/// Index `k` holds the coefficient of `s^(3-k) t^k`, so the array reads
/// `(s^3, s^2 t, s t^2, t^3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCoefficients<F: Field>(pub [Polynomial<F>; 4]);

impl<F: Field> LineCoefficients<F> {
    /// Coefficient of `s^i t^(3-i)`.
    pub fn s_power(&self, i: usize) -> &Polynomial<F> {
        &self.0[3 - i]
    }

    pub fn all_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

/// Restricts a cubic form to the line through the symbolic points `v` and `w`,
/// whose coordinates are polynomials in a common parameter ring.
pub fn substitute_line<F: Field>(
    t: &Polynomial<F>,
    v: &[Polynomial<F>],
    w: &[Polynomial<F>],
) -> LineCoefficients<F> {
    assert_eq!(v.len(), t.nvars(), "v needs one coordinate per variable");
    assert_eq!(w.len(), t.nvars(), "w needs one coordinate per variable");
    let field = t.field();
    let pvars = v.first().map_or(0, |p| p.nvars());
    let zero = || Polynomial::zero(field, pvars);

    // Binary forms indexed by the power of s.
    let mul_forms = |a: &[Polynomial<F>], b: &[Polynomial<F>]| {
        let mut out: Vec<Polynomial<F>> = (0..a.len() + b.len() - 1).map(|_| zero()).collect();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + k] = out[i + k].add(&x.mul(y));
                }
            }
        }
        out
    };

    let mut acc: Vec<Polynomial<F>> = (0..4).map(|_| zero()).collect();
    for (mono, c) in t.terms() {
        let mut form = vec![Polynomial::constant(field, pvars, c.clone())];
        for k in 0..t.nvars() {
            let linear = [w[k].clone(), v[k].clone()];
            for _ in 0..mono.exp(k) {
                form = mul_forms(&form, &linear);
            }
        }
        assert_eq!(form.len(), 4, "substitute_line expects a cubic form");
        for (a, f) in acc.iter_mut().zip(form) {
            *a = a.add(&f);
        }
    }
    // acc[i] is the coefficient of s^i t^(3-i)
    let [a0, a1, a2, a3]: [Polynomial<F>; 4] = acc.try_into().ok().expect("four coefficients");
    LineCoefficients([a3, a2, a1, a0])
}
