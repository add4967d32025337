use crate::error::{Error, Result};
use crate::words::FactorOracle;

use super::model::Scheme;
use super::paths::{is_symmetric, path_words};
use super::trace::trace;

/// Front words up to this length are also checked by direct search.
pub const EXPLICIT_LIMIT: u64 = 1 << 16;

/// Whether the front word of a symmetric path is a factor.
///
/// Short front words are searched for directly; independently, the path is
/// looked up in a trace long enough to contain every factor of that length.
/// When both answers are available they must agree.
pub fn admissible(s: &Scheme, path: &[u32], oracle: &mut FactorOracle) -> Result<bool> {
    if !is_symmetric(s, path) {
        return Err(Error::InvalidPath("path is not symmetric".into()));
    }
    let (f, _) = path_words(s, path)?;
    let n = f.len();
    let explicit = if n <= EXPLICIT_LIMIT && oracle.searchable(n as usize)? {
        let w = oracle.materialize_rope(&f, EXPLICIT_LIMIT)?;
        Some(oracle.contains(&w)?)
    } else {
        None
    };
    let traced = match oracle.window_certificate(n as usize)? {
        Some(wc) => Some(trace(s, oracle, wc)?.find_path(path).is_some()),
        None => None,
    };
    match (explicit, traced) {
        (Some(a), Some(b)) if a != b => {
            Err(Error::OracleDisagreement(format!("direct search says {a}, trace says {b} for path {path:?}")))
        }
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Err(Error::HorizonExceeded { needed: n, cap: EXPLICIT_LIMIT }),
    }
}
