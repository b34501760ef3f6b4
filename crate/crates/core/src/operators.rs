//! Textual Pauli-sum operator specs such as `"0.5*ZZ1 + X2"` or `"Z1Z2 - 0.3*Y3"`.
//!
//! A factor is one or more Pauli letters followed by a 1-based site index; a
//! run of letters occupies consecutive sites starting at that index, so `ZZ1`
//! is `Z` on sites 1 and 2. `I` letters are identity placeholders.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianOperator, Pauli};

/// One weighted tensor product of single-site Paulis.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    /// `(site, axis)` pairs with 1-based, pairwise distinct sites.
    pub factors: Vec<(usize, Pauli)>,
}

impl PauliTerm {
    pub fn to_operator(&self, n_qubits: usize) -> Result<HermitianOperator> {
        let mut acc = CMatrix::identity(1, 1);
        for site in 1..=n_qubits {
            let factor = self
                .factors
                .iter()
                .find(|(s, _)| *s == site)
                .map(|(_, p)| p.matrix())
                .unwrap_or_else(|| CMatrix::identity(2, 2));
            acc = acc.kronecker(&factor);
        }
        if let Some((site, _)) = self.factors.iter().find(|(s, _)| *s == 0 || *s > n_qubits) {
            return Err(Error::SiteOutOfRange {
                site: *site,
                n_qubits,
            });
        }
        Ok(HermitianOperator::from_matrix_unchecked(
            acc * C64::new(self.coeff, 0.0),
        ))
    }
}

/// Parse a Pauli-sum expression into its terms.
pub fn parse_pauli_sum(input: &str) -> Result<Vec<PauliTerm>> {
    let err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty expression"));
    }

    // split into signed terms, ignoring signs that belong to an exponent
    let mut pieces: Vec<(f64, String)> = Vec::new();
    let mut sign = 1.0;
    let mut current = String::new();
    let chars: Vec<char> = compact.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        let in_exponent = i > 0
            && matches!(chars[i - 1], 'e' | 'E')
            && current.chars().any(|c| c.is_ascii_digit());
        if (ch == '+' || ch == '-') && !in_exponent {
            if !current.is_empty() {
                pieces.push((sign, std::mem::take(&mut current)));
            } else if i > 0 {
                return Err(err("dangling operator sign"));
            }
            sign = if ch == '-' { -1.0 } else { 1.0 };
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(err("expression ends with an operator sign"));
    }
    pieces.push((sign, current));

    pieces
        .into_iter()
        .map(|(sign, body)| {
            parse_term(&body)
                .map(|mut t| {
                    t.coeff *= sign;
                    t
                })
                .map_err(|reason| err(&reason))
        })
        .collect()
}

fn parse_term(body: &str) -> std::result::Result<PauliTerm, String> {
    let (coeff, product) = match body.split_once('*') {
        Some((c, p)) => (
            c.parse::<f64>()
                .map_err(|_| format!("bad coefficient `{c}`"))?,
            p,
        ),
        None => (1.0, body),
    };
    if product.is_empty() {
        return Err("missing Pauli product".into());
    }
    let mut factors: Vec<(usize, Pauli)> = Vec::new();
    let chars: Vec<char> = product.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let start = i;
        while i < chars.len() && chars[i].is_ascii_alphabetic() {
            i += 1;
        }
        let letters = &chars[start..i];
        if letters.is_empty() {
            return Err(format!("expected Pauli letter in `{product}`"));
        }
        let digits_start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        if digits_start == i {
            return Err(format!("missing site index in `{product}`"));
        }
        let site: usize = chars[digits_start..i]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| "bad site index".to_string())?;
        if site == 0 {
            return Err("site indices are 1-based".into());
        }
        for (offset, &letter) in letters.iter().enumerate() {
            let here = site + offset;
            if letter.eq_ignore_ascii_case(&'I') {
                continue;
            }
            let axis = Pauli::from_char(letter)
                .ok_or_else(|| format!("unknown Pauli letter `{letter}`"))?;
            if factors.iter().any(|(s, _)| *s == here) {
                return Err(format!("site {here} repeated within one term"));
            }
            factors.push((here, axis));
        }
    }
    factors.sort_by_key(|(s, _)| *s);
    Ok(PauliTerm { coeff, factors })
}

/// Highest site index referenced by the expression.
pub fn max_site(terms: &[PauliTerm]) -> usize {
    terms
        .iter()
        .flat_map(|t| t.factors.iter().map(|(s, _)| *s))
        .max()
        .unwrap_or(1)
}

/// Dense operator for a Pauli-sum expression on `n_qubits`.
pub fn operator_from_str(input: &str, n_qubits: usize) -> Result<HermitianOperator> {
    let terms = parse_pauli_sum(input)?;
    let dim = 1usize << n_qubits;
    let mut acc = HermitianOperator::zeros(dim);
    for t in &terms {
        acc = acc.add(&t.to_operator(n_qubits)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli_embed;

    #[test]
    fn parses_run_of_letters_as_consecutive_sites() {
        let terms = parse_pauli_sum("0.5*ZZ1 + X2").unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].coeff, 0.5);
        assert_eq!(terms[0].factors, vec![(1, Pauli::Z), (2, Pauli::Z)]);
        assert_eq!(terms[1].factors, vec![(2, Pauli::X)]);
    }

    #[test]
    fn explicit_sites_match_embedding() {
        let op = operator_from_str("Z1Z2 - 0.25*Y2", 2).unwrap();
        let z1 = pauli_embed(Pauli::Z, 1, 2).unwrap();
        let z2 = pauli_embed(Pauli::Z, 2, 2).unwrap();
        let y2 = pauli_embed(Pauli::Y, 2, 2).unwrap();
        let expected = z1.matrix() * z2.matrix() - y2.matrix() * C64::new(0.25, 0.0);
        assert!((op.matrix() - expected).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn leading_sign_and_exponent() {
        let terms = parse_pauli_sum("-1e-1*X1 + 2E+0*Z1").unwrap();
        assert_eq!(terms[0].coeff, -0.1);
        assert_eq!(terms[1].coeff, 2.0);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "X", "Q1", "0.5*", "X1 +", "X1X1", "X0", "abc*X1"] {
            assert!(parse_pauli_sum(bad).is_err(), "{bad}");
        }
        assert!(operator_from_str("X3", 2).is_err());
    }
}
