//! Parsers for user-supplied text: real lists, Bloch vectors, amplitude
//! lists and histogram CSV files. None of them panic on malformed input.

use std::collections::BTreeMap;

use crate::montecarlo::Histogram;
use crate::statevec::{BlochVector, PureState, Register};
use crate::{Error, Result, C64};

/// Typed-in Bloch vectors and amplitude lists within this distance of unit
/// norm are rescaled; anything further off is rejected.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-4;

/// Largest number of amplitudes accepted from text.
pub const MAX_TEXT_AMPLITUDES: usize = 1 << 16;

/// Comma-separated finite reals; surrounding whitespace is ignored.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    trimmed
        .split(',')
        .enumerate()
        .map(|(i, item)| {
            let item = item.trim();
            let value: f64 = item
                .parse()
                .map_err(|_| Error::Parse(format!("entry {} ({item:?}) is not a number", i + 1)))?;
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::Parse(format!("entry {} ({item:?}) is not finite", i + 1)))
            }
        })
        .collect()
}

/// `x,y,z`, rescaled to unit length when within [`INPUT_NORM_TOLERANCE`].
pub fn parse_bloch(text: &str) -> Result<BlochVector> {
    let v = parse_real_list(text)?;
    let [x, y, z] = v[..] else {
        return Err(Error::Parse(format!("Bloch vector needs 3 components, got {}", v.len())));
    };
    let b = BlochVector::new(x, y, z);
    if (b.norm_sqr().sqrt() - 1.0).abs() > INPUT_NORM_TOLERANCE {
        return Err(Error::InvalidBlochVector { x, y, z });
    }
    b.normalized()
}

/// `re0,im0,re1,im1,...`; the length fixes the register (a power of two
/// gives qubits, anything else a single qudit).
pub fn parse_amplitudes(text: &str) -> Result<PureState> {
    let v = parse_real_list(text)?;
    if v.len() % 2 != 0 {
        return Err(Error::Parse(format!("{} numbers do not form (re, im) pairs", v.len())));
    }
    if v.len() / 2 > MAX_TEXT_AMPLITUDES {
        return Err(Error::ResourceLimit(format!("more than {MAX_TEXT_AMPLITUDES} amplitudes")));
    }
    let amplitudes: Vec<C64> = v.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
    let register = Register::from_dim(amplitudes.len())?;
    let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if !norm_sqr.is_finite() || (norm_sqr.sqrt() - 1.0).abs() > INPUT_NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm_sqr));
    }
    PureState::from_unnormalized(amplitudes, register)
}

/// Histogram in the CSV layout written by [`Histogram::write_csv`].
pub fn parse_histogram_csv(text: &str) -> Result<Histogram> {
    let mut meta = BTreeMap::new();
    for line in text.lines() {
        if let Some(comment) = line.trim_start().strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
    }
    let number = |key: &str| -> Result<Option<u64>> {
        meta.get(key)
            .map(|v| v.parse::<u64>().map_err(|_| Error::Parse(format!("{key}={v:?} is not an integer"))))
            .transpose()
    };
    let total = number("total_samples")?.ok_or_else(|| Error::Parse("missing total_samples comment".into()))?;
    let seed = number("seed")?.unwrap_or(0);
    let declared_out_of_range = number("out_of_range")?;

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(format!("bad header: {e}")))?.clone();
    let expected = ["bin_left", "bin_right", "count", "density"];
    if headers.len() != expected.len() || headers.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(Error::Parse(format!("unexpected columns {headers:?}")));
    }
    let mut edges = Vec::new();
    let mut counts = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let real = |i: usize| -> Result<f64> {
            field(i)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("row {}: {:?} is not a finite number", row + 1, field(i))))
        };
        let (left, right) = (real(0)?, real(1)?);
        let count: u64 = field(2)
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: {:?} is not a count", row + 1, field(2))))?;
        match edges.last() {
            None => edges.push(left),
            Some(&prev) if prev == left => {}
            Some(&prev) => {
                return Err(Error::Parse(format!("row {}: bin starts at {left}, previous ended at {prev}", row + 1)));
            }
        }
        edges.push(right);
        counts.push(count);
    }
    if counts.is_empty() {
        return Err(Error::Parse("no bins".into()));
    }
    let mut h = Histogram::from_parts(edges, counts, total).map_err(|e| match e {
        Error::InvalidEdges => Error::Parse("bin edges are not strictly increasing".into()),
        Error::InvalidArgument(m) => Error::Parse(m),
        other => other,
    })?;
    if let Some(declared) = declared_out_of_range {
        if declared != h.out_of_range() {
            return Err(Error::Parse(format!(
                "out_of_range={declared} disagrees with {} implied by the counts",
                h.out_of_range()
            )));
        }
    }
    h.seed = seed;
    h.measure_tag = meta.get("measure").cloned().unwrap_or_default();
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn real_lists() {
        assert_eq!(parse_real_list(" 1, -2.5 ,3e-1").unwrap(), vec![1.0, -2.5, 0.3]);
        assert!(parse_real_list("").is_err());
        assert!(parse_real_list("1,,2").is_err());
        assert!(parse_real_list("1,nan").is_err());
        assert!(parse_real_list("inf").is_err());
    }

    #[test]
    fn bloch_inputs() {
        let b = parse_bloch("0.57735,0.57735,0.57735").unwrap();
        assert!((b.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(parse_bloch("1,0").is_err());
        assert!(matches!(parse_bloch("0.5,0,0"), Err(Error::InvalidBlochVector { .. })));
    }

    #[test]
    fn amplitude_inputs() {
        let s = parse_amplitudes("1,0,0,0").unwrap();
        assert_eq!(s.dim(), 2);
        let s = parse_amplitudes("1,0,0,0,0,0").unwrap();
        assert_eq!(s.local_dim(), 3);
        assert!(parse_amplitudes("1,0,0").is_err());
        assert!(parse_amplitudes("1,0").is_err());
        assert!(matches!(parse_amplitudes("2,0,0,0"), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn histogram_rejects_gaps_and_bad_counts() {
        let gap = "# total_samples=2\nbin_left,bin_right,count,density\n0,1,1,0.5\n1.5,2,1,1\n";
        assert!(parse_histogram_csv(gap).is_err());
        let neg = "# total_samples=2\nbin_left,bin_right,count,density\n0,1,-1,0\n";
        assert!(parse_histogram_csv(neg).is_err());
        let excess = "# total_samples=1\nbin_left,bin_right,count,density\n0,1,5,0\n";
        assert!(parse_histogram_csv(excess).is_err());
        let missing = "bin_left,bin_right,count,density\n0,1,1,1\n";
        assert!(parse_histogram_csv(missing).is_err());
    }

    proptest! {
        #[test]
        fn parsers_never_panic(s in ".{0,200}") {
            let _ = parse_real_list(&s);
            let _ = parse_bloch(&s);
            let _ = parse_amplitudes(&s);
            let _ = parse_histogram_csv(&s);
        }

        #[test]
        fn real_list_round_trip(v in proptest::collection::vec(-1e300f64..1e300, 1..20)) {
            let text = v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",");
            prop_assert_eq!(parse_real_list(&text).unwrap(), v);
        }
    }
}
