//! Exact rationals serialize as `"p/q"` strings.

use num_rational::BigRational;
use serde::Serializer;

pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}
