use std::path::Path;

use super::{DecayClass, WeightFunction};
use crate::numerics::{Interval, RealFunction, Tail};
use crate::{Error, Result};

/// Reads a two-column `(v, G)` CSV. Lines starting with `#` are skipped and a
/// non-numeric first row is treated as a header.
///
/// A weight that is zero at both ends is taken as compactly supported on the
/// hull of its positive part; otherwise `tail_exponent` must declare the
/// power-law decay beyond the sampled window.
pub fn load_weight_csv(path: &Path, tail_exponent: Option<f64>) -> Result<WeightFunction> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).from_path(path)?;
    let mut v = Vec::new();
    let mut g = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            return Err(Error::Parse(format!("row {} has {} columns, expected 2", i + 1, rec.len())));
        }
        let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
        match parsed {
            (Ok(a), Ok(b)) => {
                v.push(a);
                g.push(b);
            }
            _ if i == 0 => continue,
            _ => return Err(Error::Parse(format!("row {} is not numeric", i + 1))),
        }
    }
    let n = v.len();
    if n < 8 {
        return Err(Error::InvalidGrid(format!("{n} samples, need at least 8")));
    }
    let label = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    if g[0] == 0.0 && g[n - 1] == 0.0 {
        let first = g.iter().position(|&x| x != 0.0);
        let support = match first {
            Some(i) => {
                let j = g.iter().rposition(|&x| x != 0.0).unwrap_or(i);
                Interval::new(v[i.saturating_sub(1)], v[(j + 1).min(n - 1)])?
            }
            None => Interval::new(v[0], v[n - 1])?,
        };
        let f = RealFunction::from_samples(v, g, Tail::Zero, Tail::Zero)?;
        Ok(WeightFunction::new(f, Some(support), DecayClass::Compact)?.with_label(label))
    } else {
        let p = tail_exponent.ok_or_else(|| Error::InvalidWeight("weight does not vanish at the window edges; declare a tail exponent".into()))?;
        let t = Tail::PowerDecay { exponent: p };
        let f = RealFunction::from_samples(v, g, t, t)?;
        Ok(WeightFunction::new(f, None, DecayClass::Schwartz)?.with_label(label))
    }
}
