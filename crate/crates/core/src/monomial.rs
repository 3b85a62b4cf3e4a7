//! Dense multivariate monomial polynomials, used for exact partial
//! derivatives and harmonicity checks.

use std::collections::BTreeMap;

/// Polynomial in `d` variables as a map from exponent triples to
/// coefficients (unused trailing exponents stay zero for d = 2).
#[derive(Clone, Debug, Default)]
pub(crate) struct MonoPoly {
    pub d: usize,
    pub terms: BTreeMap<[u16; 3], f64>,
}

impl MonoPoly {
    pub fn zero(d: usize) -> Self {
        MonoPoly {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(d: usize, a: f64) -> Self {
        let mut p = Self::zero(d);
        p.add_term([0, 0, 0], a);
        p
    }

    pub fn add_term(&mut self, e: [u16; 3], a: f64) {
        if a == 0.0 {
            return;
        }
        let c = self.terms.entry(e).or_insert(0.0);
        *c += a;
        if *c == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (e, &a) in &self.terms {
            let mut t = a;
            for i in 0..self.d {
                t *= x[i].powi(e[i] as i32);
            }
            s += t;
        }
        s
    }

    pub fn add_scaled(&mut self, other: &MonoPoly, s: f64) {
        for (&e, &a) in &other.terms {
            self.add_term(e, s * a);
        }
    }

    pub fn mul(&self, other: &MonoPoly) -> MonoPoly {
        let mut out = MonoPoly::zero(self.d);
        for (ea, &a) in &self.terms {
            for (eb, &b) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, a * b);
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> MonoPoly {
        let mut out = MonoPoly::zero(self.d);
        for (&e, &a) in &self.terms {
            out.add_term(e, s * a);
        }
        out
    }

    /// Exact partial derivative with respect to coordinate `i`.
    pub fn derivative(&self, i: usize) -> MonoPoly {
        let mut out = MonoPoly::zero(self.d);
        for (&e, &a) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut en = e;
            en[i] -= 1;
            out.add_term(en, a * e[i] as f64);
        }
        out
    }

    #[allow(dead_code)] // exercised by the harmonicity tests
    pub fn laplacian(&self) -> MonoPoly {
        let mut out = MonoPoly::zero(self.d);
        for i in 0..self.d {
            out.add_scaled(&self.derivative(i).derivative(i), 1.0);
        }
        out
    }

    #[allow(dead_code)]
    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| (e[0] + e[1] + e[2]) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, a| m.max(a.abs()))
    }
}
