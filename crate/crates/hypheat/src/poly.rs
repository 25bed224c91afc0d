//! Exact integer-coefficient sparse multivariate polynomials in T_1..T_m,
//! housing the family P_{m,i} with
//!
//!   P_{1,0} = T_1,
//!   P_{m+1,i} = T_1 P_{m,i} + 2 sum_j (dP_{m,i-1}/dT_j) T_{j+1}.
//!
//! Every generated P_{m,i} is homogeneous of degree m - i, weighted
//! homogeneous of degree m (T_j counted with weight j), and has strictly
//! positive integer coefficients.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Largest table index built by default (dimension n = 2m + 1 = 31).
pub const MAX_P_INDEX: usize = 15;

/// Monomial key: sorted (variable index, exponent) pairs, 1-based variables.
pub type Monomial = Vec<(u32, u32)>;

/// Sparse polynomial with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The variable T_j.
    pub fn var(j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(j, 1)], BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mono: Monomial, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let mut mono: Monomial = mono.into_iter().filter(|&(_, e)| e > 0).collect();
        mono.sort_unstable_by_key(|&(v, _)| v);
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coef);
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &BigInt) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c * factor);
        }
        out
    }

    /// Multiply every term by T_j.
    pub fn mul_var(&self, j: u32) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (mono, c) in self.terms() {
            let mut m = mono.clone();
            match m.iter_mut().find(|(v, _)| *v == j) {
                Some((_, e)) => *e += 1,
                None => m.push((j, 1)),
            }
            out.add_term(m, c.clone());
        }
        out
    }

    /// Exact formal derivative with respect to T_j; absent variables give zero.
    pub fn partial_derivative(&self, j: u32) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (mono, c) in self.terms() {
            if let Some(&(_, e)) = mono.iter().find(|(v, _)| *v == j) {
                let mut m: Monomial = mono
                    .iter()
                    .map(|&(v, ex)| if v == j { (v, ex - 1) } else { (v, ex) })
                    .collect();
                m.retain(|&(_, ex)| ex > 0);
                out.add_term(m, c * BigInt::from(e));
            }
        }
        out
    }

    /// Largest variable index appearing in any term.
    pub fn max_var(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|&(v, _)| v))
            .max()
            .unwrap_or(0)
    }

    /// Substitute values[j-1] for T_j; direct term summation.
    pub fn eval(&self, values: &[f64]) -> Result<f64> {
        let need = self.max_var() as usize;
        if values.len() < need {
            return Err(Error::domain(format!(
                "poly needs {need} variable values, got {}",
                values.len()
            )));
        }
        let mut acc = 0.0;
        for (mono, c) in self.terms() {
            let mut term = c.to_f64().unwrap_or(f64::INFINITY);
            for &(v, e) in mono {
                term *= values[v as usize - 1].powi(e as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Total degree of a monomial (sum of exponents).
    pub fn monomial_degree(mono: &Monomial) -> u32 {
        mono.iter().map(|&(_, e)| e).sum()
    }

    /// Weighted degree with T_j carrying weight j.
    pub fn monomial_weighted_degree(mono: &Monomial) -> u32 {
        mono.iter().map(|&(v, e)| v * e).sum()
    }
}

/// The table P_{m,0}, ..., P_{m,m-1} plus cached partial derivatives.
#[derive(Debug, Clone)]
pub struct PTable {
    pub m: usize,
    pub polys: Vec<SparsePoly>,
    /// derivs[i][j-1] = dP_{m,i}/dT_j
    pub derivs: Vec<Vec<SparsePoly>>,
}

impl PTable {
    fn from_polys(m: usize, polys: Vec<SparsePoly>) -> Self {
        let derivs = polys
            .iter()
            .map(|p| (1..=m as u32).map(|j| p.partial_derivative(j)).collect())
            .collect();
        PTable { m, polys, derivs }
    }

    /// JSON dump: {"m": 3, "polys": [[{"exps": {"1": 3}, "coef": "1"}], ...]}.
    pub fn to_json(&self) -> Value {
        let polys: Vec<Value> = self
            .polys
            .iter()
            .map(|p| {
                let terms: Vec<Value> = p
                    .terms()
                    .map(|(mono, c)| {
                        let exps: serde_json::Map<String, Value> = mono
                            .iter()
                            .map(|&(v, e)| (v.to_string(), json!(e)))
                            .collect();
                        json!({"exps": exps, "coef": c.to_string()})
                    })
                    .collect();
                Value::Array(terms)
            })
            .collect();
        json!({"m": self.m, "polys": polys})
    }

    /// Parse the `to_json` schema back; used for round trips and fuzzing.
    pub fn from_json(v: &Value) -> Result<PTable> {
        let m = v
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::domain("missing integer field 'm'"))? as usize;
        if m < 1 || m > 64 {
            return Err(Error::domain(format!("table index m = {m} out of range")));
        }
        let polys_json = v
            .get("polys")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::domain("missing array field 'polys'"))?;
        let mut polys = Vec::with_capacity(polys_json.len());
        for pj in polys_json {
            let terms = pj
                .as_array()
                .ok_or_else(|| Error::domain("poly entry must be an array of terms"))?;
            let mut p = SparsePoly::zero();
            for t in terms {
                let coef_s = t
                    .get("coef")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::domain("term missing string 'coef'"))?;
                let coef: BigInt = coef_s
                    .parse()
                    .map_err(|_| Error::domain(format!("bad integer coefficient {coef_s:?}")))?;
                let exps = t
                    .get("exps")
                    .and_then(Value::as_object)
                    .ok_or_else(|| Error::domain("term missing object 'exps'"))?;
                let mut mono = Monomial::new();
                for (k, ev) in exps {
                    let var: u32 = k
                        .parse()
                        .map_err(|_| Error::domain(format!("bad variable index {k:?}")))?;
                    if var < 1 || var > 64 {
                        return Err(Error::domain(format!("variable index {var} out of range")));
                    }
                    let e = ev
                        .as_u64()
                        .filter(|&e| e <= 64)
                        .ok_or_else(|| Error::domain("bad exponent"))?
                        as u32;
                    mono.push((var, e));
                }
                p.add_term(mono, coef);
            }
            polys.push(p);
        }
        Ok(PTable::from_polys(m, polys))
    }
}

type TableCache = Mutex<HashMap<usize, Arc<PTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Build (or fetch) the table for index m via the table recurrence.
pub fn build_p(m: usize) -> Result<Arc<PTable>> {
    if m < 1 || m > MAX_P_INDEX {
        return Err(Error::domain(format!(
            "table index m = {m} outside 1..={MAX_P_INDEX}"
        )));
    }
    if let Some(hit) = table_cache().lock().unwrap().get(&m) {
        return Ok(hit.clone());
    }
    let mut polys = vec![SparsePoly::var(1)]; // P_{1,0} = T_1
    let mut cur = 1usize;
    while cur < m {
        let mut next = Vec::with_capacity(cur + 1);
        let two = BigInt::from(2);
        for i in 0..=cur {
            // P_{cur+1,i} = T_1 P_{cur,i} + 2 sum_j dP_{cur,i-1}/dT_j * T_{j+1}
            let mut p = if i < cur {
                polys[i].mul_var(1)
            } else {
                SparsePoly::zero()
            };
            if i >= 1 {
                for j in 1..=cur as u32 {
                    let d = polys[i - 1].partial_derivative(j);
                    if !d.is_zero() {
                        p = p.add(&d.mul_var(j + 1).scale(&two));
                    }
                }
            }
            next.push(p);
        }
        polys = next;
        cur += 1;
    }
    let table = Arc::new(PTable::from_polys(m, polys));
    table_cache()
        .lock()
        .unwrap()
        .entry(m)
        .or_insert(table.clone());
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn poly_t1_pow(m: u32) -> SparsePoly {
        let mut p = SparsePoly::zero();
        p.add_term(vec![(1, m)], BigInt::one());
        p
    }

    #[test]
    fn small_tables() {
        let t1 = build_p(1).unwrap();
        assert_eq!(t1.polys, vec![SparsePoly::var(1)]);

        let t2 = build_p(2).unwrap();
        assert_eq!(t2.polys[0], poly_t1_pow(2));
        let mut two_t2 = SparsePoly::zero();
        two_t2.add_term(vec![(2, 1)], BigInt::from(2));
        assert_eq!(t2.polys[1], two_t2);

        // m=3: {T1^3, 6 T1 T2, 4 T3}
        let t3 = build_p(3).unwrap();
        assert_eq!(t3.polys[0], poly_t1_pow(3));
        let mut mid = SparsePoly::zero();
        mid.add_term(vec![(1, 1), (2, 1)], BigInt::from(6));
        assert_eq!(t3.polys[1], mid);
        let mut last = SparsePoly::zero();
        last.add_term(vec![(3, 1)], BigInt::from(4));
        assert_eq!(t3.polys[2], last);
    }

    #[test]
    fn table_structure_up_to_max() {
        for m in 1..=12usize {
            let t = build_p(m).unwrap();
            assert_eq!(t.polys.len(), m);
            assert_eq!(t.polys[0], poly_t1_pow(m as u32));
            let mut expect_last = SparsePoly::zero();
            expect_last.add_term(
                vec![(m as u32, 1)],
                BigInt::from(2).pow(m as u32 - 1),
            );
            assert_eq!(t.polys[m - 1], expect_last);
            for (i, p) in t.polys.iter().enumerate() {
                for (mono, c) in p.terms() {
                    assert!(c > &BigInt::zero(), "m={m} i={i}");
                    assert_eq!(
                        SparsePoly::monomial_degree(mono) as usize,
                        m - i,
                        "homogeneity m={m} i={i}"
                    );
                    assert_eq!(
                        SparsePoly::monomial_weighted_degree(mono) as usize,
                        m,
                        "weighted homogeneity m={m} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let t2 = build_p(2).unwrap();
        assert_relative_eq!(t2.polys[0].eval(&[1.0, 0.0]).unwrap(), 1.0);
        assert_relative_eq!(t2.polys[1].eval(&[0.0, 1.0 / 3.0]).unwrap(), 2.0 / 3.0);
        // 6 T1 T2 at (f1(1), f2(1)); value frozen from extended precision
        let t3 = build_p(3).unwrap();
        let v = t3.polys[1]
            .eval(&[0.8509181282393216, 0.22665684875970903])
            .unwrap();
        assert_relative_eq!(v, 1.1571985289954076, max_relative = 1e-12);
    }

    #[test]
    fn derivative_examples() {
        let sq = poly_t1_pow(2);
        let mut expect = SparsePoly::zero();
        expect.add_term(vec![(1, 1)], BigInt::from(2));
        assert_eq!(sq.partial_derivative(1), expect);

        let mut two_t2 = SparsePoly::zero();
        two_t2.add_term(vec![(2, 1)], BigInt::from(2));
        assert!(two_t2.partial_derivative(1).is_zero());

        let mut prod = SparsePoly::zero();
        prod.add_term(vec![(1, 1), (2, 1)], BigInt::from(6));
        let mut expect2 = SparsePoly::zero();
        expect2.add_term(vec![(1, 1)], BigInt::from(6));
        assert_eq!(prod.partial_derivative(2), expect2);
    }

    #[test]
    fn eval_length_mismatch() {
        let t3 = build_p(3).unwrap();
        assert!(t3.polys[2].eval(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn out_of_range() {
        assert!(build_p(0).is_err());
        assert!(build_p(MAX_P_INDEX + 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = build_p(4).unwrap();
        let v = t.to_json();
        let back = PTable::from_json(&v).unwrap();
        assert_eq!(back.polys, t.polys);
        assert_eq!(back.m, 4);
    }
}
