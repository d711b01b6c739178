//! Seed substreams and JSON encoders shared by the commands.

use ivhs_core::{CurvePoint, Error, Field, Form, Matrix, QuadricCert};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// An independent seed for `(tag, index)` derived from the scenario seed.
pub fn substream(seed: u64, tag: &str, index: u64) -> u64 {
    let digest = Sha256::digest(tag.as_bytes());
    let stream = u64::from_le_bytes(digest[..8].try_into().unwrap()).wrapping_add(index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

pub fn rng(seed: u64, tag: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream(seed, tag, index))
}

/// Digest of the field and the canonical form of the equation.
pub fn curve_hash<K: Field>(k: &K, f: &Form<K>) -> String {
    hex::encode(Sha256::digest(format!("{}|{}", k.describe(), f.to_poly()).as_bytes()))
}

pub fn elem<K: Field>(k: &K, a: &K::Elem) -> Value {
    let s = k.format_elem(a);
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

pub fn vector<K: Field>(k: &K, v: &[K::Elem]) -> Value {
    Value::Array(v.iter().map(|a| elem(k, a)).collect())
}

pub fn point<K: Field>(k: &K, p: &CurvePoint<K>) -> Value {
    vector(k, &p.coords)
}

pub fn form<K: Field>(f: &Form<K>) -> Value {
    json!(f.to_poly().to_string())
}

/// Upper triangle `Q_ij`, `i <= j`, row by row.
pub fn sym_upper<K: Field>(k: &K, q: &Matrix<K>) -> Value {
    let n = q.rows();
    Value::Array((0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| elem(k, q.get(i, j))).collect())
}

pub fn cert<K: Field>(k: &K, c: &QuadricCert<K>, hash: &str, pointwise: usize) -> Value {
    json!({
        "q_coeffs": sym_upper(k, &c.q),
        "cofactor": c.cofactor.as_ref().map(form),
        "curve_hash": hash,
        "verified": c.verified,
        "pointwise_checked": pointwise,
    })
}

pub fn error(e: &Error) -> Value {
    json!({ "kind": e.kind(), "message": e.to_string() })
}

/// A named invariant and whether it held.
pub fn check(name: &str, ok: bool) -> Value {
    json!({ "invariant": name, "ok": ok })
}

/// Removes every `timing` member, recursively.
pub fn strip_timing(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(m.iter().filter(|(k, _)| k.as_str() != "timing").map(|(k, v)| (k.clone(), strip_timing(v))).collect()),
        Value::Array(a) => Value::Array(a.iter().map(strip_timing).collect()),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_are_stable_and_distinct() {
        assert_eq!(substream(1, "a", 0), substream(1, "a", 0));
        assert_ne!(substream(1, "a", 0), substream(1, "a", 1));
        assert_ne!(substream(1, "a", 0), substream(1, "b", 0));
        assert_ne!(substream(1, "a", 0), substream(2, "a", 0));
    }

    #[test]
    fn timing_is_stripped_everywhere() {
        let v = json!({"a": 1, "timing": {"ms": 3}, "b": [{"timing": 1, "c": 2}]});
        assert_eq!(strip_timing(&v), json!({"a": 1, "b": [{"c": 2}]}));
    }
}
