use super::forms::BinaryForm;
use crate::finite_field::Field;

/// Polynomial in t whose coefficients are binary forms; `coeffs[j]` multiplies
/// t^j and the formal t-degree is `coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormPoly {
    pub coeffs: Vec<BinaryForm>,
}

impl FormPoly {
    pub fn new(coeffs: Vec<BinaryForm>) -> FormPoly {
        assert!(!coeffs.is_empty());
        FormPoly { coeffs }
    }

    pub fn t_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    /// Common degree of the coefficient forms, when they all agree.
    pub fn uniform_form_degree(&self) -> Option<usize> {
        let d = self.coeffs[0].degree();
        self.coeffs.iter().all(|c| c.degree() == d).then_some(d)
    }

    /// Drop vanishing top coefficients (keeps at least one entry).
    pub fn trimmed(&self) -> FormPoly {
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().unwrap().is_zero() {
            c.pop();
        }
        FormPoly { coeffs: c }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ResultantError {
    #[error("both polynomials are constant in t")]
    BothConstant,
}

/// Determinant of the Sylvester matrix of f and g over the ring of binary
/// forms, using the formal t-degrees of the inputs. When each input has
/// coefficient forms of one common degree the result has the expected degree
/// n deg(f_i) + m deg(g_j), also when it vanishes.
pub fn sylvester_resultant(f: &FormPoly, g: &FormPoly) -> Result<BinaryForm, ResultantError> {
    let (m, n) = (f.t_degree(), g.t_degree());
    if m == 0 && n == 0 {
        return Err(ResultantError::BothConstant);
    }
    let field = f.field();
    let size = m + n;
    let zero = BinaryForm::zero(field, 0);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for k in 0..=m {
            mat[i][i + k] = f.coeffs[m - k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = g.coeffs[n - k].clone();
        }
    }
    let expected = match (f.uniform_form_degree(), g.uniform_form_degree()) {
        (Some(a), Some(b)) => Some(n * a + m * b),
        _ => None,
    };
    let det = determinant(&mat, 0, (1u32 << size) - 1, field);
    match expected {
        Some(e) if det.is_zero() => Ok(BinaryForm::zero(field, e)),
        Some(e) => {
            assert_eq!(det.degree(), e, "inhomogeneous Sylvester determinant");
            Ok(det)
        }
        None => Ok(det),
    }
}

/// Laplace expansion along row `row` over the columns in `cols` (signs are
/// irrelevant in characteristic 2).
fn determinant(mat: &[Vec<BinaryForm>], row: usize, cols: u32, field: Field) -> BinaryForm {
    if row == mat.len() {
        return BinaryForm::constant(field.one());
    }
    let mut acc = BinaryForm::zero(field, 0);
    for c in 0..mat.len() {
        if cols >> c & 1 == 0 || mat[row][c].is_zero() {
            continue;
        }
        let minor = determinant(mat, row + 1, cols & !(1 << c), field);
        if minor.is_zero() {
            continue;
        }
        acc = acc.add(&mat[row][c].mul(&minor));
    }
    acc
}

/// Res_t(t a + b, Σ H_j t^j) by the closed form Σ_j H_j b^j a^(n-j).
pub fn linear_resultant_closed_form(a: &BinaryForm, b: &BinaryForm, h: &FormPoly) -> BinaryForm {
    let n = h.t_degree();
    let mut acc = BinaryForm::zero(a.field(), 0);
    for (j, hj) in h.coeffs.iter().enumerate() {
        acc = acc.add(&hj.mul(&b.pow(j)).mul(&a.pow(n - j)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::Field;

    fn form(f: Field, bits: &[u32]) -> BinaryForm {
        BinaryForm::new(f, bits.iter().map(|&b| f.elem(b)).collect())
    }

    #[test]
    fn two_by_two() {
        let f = Field::new(3).unwrap();
        let (a, b) = (form(f, &[1, 3]), form(f, &[2, 0]));
        let (a2, b2) = (form(f, &[5, 7]), form(f, &[6, 1]));
        let r = sylvester_resultant(&FormPoly::new(vec![b.clone(), a.clone()]), &FormPoly::new(vec![b2.clone(), a2.clone()]))
            .unwrap();
        assert_eq!(r, a.mul(&b2).add(&a2.mul(&b)));
    }

    #[test]
    fn constant_second_argument() {
        let f = Field::new(2).unwrap();
        let c = form(f, &[1, 2, 3]);
        let lin = FormPoly::new(vec![form(f, &[1, 1]), form(f, &[0, 1])]);
        assert_eq!(sylvester_resultant(&lin, &FormPoly::new(vec![c.clone()])).unwrap(), c);
        assert!(sylvester_resultant(&FormPoly::new(vec![c.clone()]), &FormPoly::new(vec![c])).is_err());
    }

    #[test]
    fn scalar_degree_one_by_five_matches_root_product() {
        // With scalar entries, Res(t a + b, h) = a^5 h(-b/a).
        let f = Field::new(4).unwrap();
        let (a, b) = (f.elem(7), f.elem(11));
        let hs: Vec<_> = [3u32, 0, 9, 14, 1, 6].iter().map(|&x| f.elem(x)).collect();
        let lin = FormPoly::new(vec![BinaryForm::constant(b), BinaryForm::constant(a)]);
        let h = FormPoly::new(hs.iter().map(|&x| BinaryForm::constant(x)).collect());
        let r = sylvester_resultant(&lin, &h).unwrap();
        let root = b / a;
        let hv = hs.iter().rev().fold(f.zero(), |acc, &c| acc * root + c);
        assert_eq!(r.coeff(0), a.pow(5) * hv);
    }
}
