//! Binned empirical densities.

use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    total_samples: u64,
    out_of_range: u64,
    pub seed: u64,
    pub measure_tag: String,
}

fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 || edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidEdges);
    }
    Ok(())
}

/// `bins` equal-width edges spanning `[lo, hi]`.
pub fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Result<Vec<f64>> {
    if bins == 0 || !(hi > lo) {
        return Err(Error::InvalidEdges);
    }
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect();
    edges.push(hi);
    validate_edges(&edges)?;
    Ok(edges)
}

/// Edges at `center -/+ eps` with `eps` log-spaced from `eps_min` to
/// `eps_max`, `per_side` bins on each side; the central bin
/// `[center - eps_min, center + eps_min]` is left in place.
pub fn geometric_edges(center: f64, eps_min: f64, eps_max: f64, per_side: usize) -> Result<Vec<f64>> {
    if !(eps_min > 0.0 && eps_max > eps_min) || per_side == 0 {
        return Err(Error::InvalidEdges);
    }
    let ratio = (eps_max / eps_min).ln();
    let eps: Vec<f64> = (0..=per_side)
        .map(|i| eps_min * (ratio * i as f64 / per_side as f64).exp())
        .collect();
    let mut edges: Vec<f64> = eps.iter().rev().map(|e| center - e).collect();
    edges.extend(eps.iter().map(|e| center + e));
    validate_edges(&edges)?;
    Ok(edges)
}

impl Histogram {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        validate_edges(&edges)?;
        let bins = edges.len() - 1;
        Ok(Self {
            edges,
            counts: vec![0; bins],
            total_samples: 0,
            out_of_range: 0,
            seed: 0,
            measure_tag: String::new(),
        })
    }

    /// Rebuilds a histogram from stored parts.
    pub fn from_parts(edges: Vec<f64>, counts: Vec<u64>, total_samples: u64) -> Result<Self> {
        validate_edges(&edges)?;
        if counts.len() + 1 != edges.len() {
            return Err(Error::InvalidArgument(format!(
                "{} counts for {} edges",
                counts.len(),
                edges.len()
            )));
        }
        let in_range = counts.iter().try_fold(0u64, |acc, &c| acc.checked_add(c));
        let in_range = in_range.ok_or_else(|| Error::InvalidArgument("count overflow".into()))?;
        if in_range > total_samples {
            return Err(Error::InvalidArgument(format!(
                "{in_range} binned samples exceed the total {total_samples}"
            )));
        }
        Ok(Self {
            edges,
            counts,
            total_samples,
            out_of_range: total_samples - in_range,
            seed: 0,
            measure_tag: String::new(),
        })
    }

    pub fn with_provenance(mut self, seed: u64, tag: impl Into<String>) -> Self {
        self.seed = seed;
        self.measure_tag = tag.into();
        self
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_samples(&self) -> u64 {
        self.total_samples
    }

    pub fn out_of_range(&self) -> u64 {
        self.out_of_range
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.edges[0], self.edges[self.edges.len() - 1])
    }

    /// Bin holding `x`: intervals are left-closed, right-open, except the
    /// last, which is closed.
    pub fn bin_index(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.range();
        if !(x >= lo && x <= hi) {
            return None;
        }
        if x == hi {
            return Some(self.counts.len() - 1);
        }
        Some(self.edges.partition_point(|&e| e <= x) - 1)
    }

    pub fn add(&mut self, x: f64) {
        self.total_samples += 1;
        match self.bin_index(x) {
            Some(i) => self.counts[i] += 1,
            None => self.out_of_range += 1,
        }
    }

    pub fn extend<I: IntoIterator<Item = f64>>(&mut self, samples: I) {
        for x in samples {
            self.add(x);
        }
    }

    /// Adds the counts of a histogram over identical edges.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::InvalidArgument("cannot merge histograms with different edges".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total_samples += other.total_samples;
        self.out_of_range += other.out_of_range;
        Ok(())
    }

    pub(crate) fn add_counts(&mut self, counts: &[u64], total: u64, out_of_range: u64) {
        for (a, b) in self.counts.iter_mut().zip(counts) {
            *a += b;
        }
        self.total_samples += total;
        self.out_of_range += out_of_range;
    }

    pub fn width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    pub fn center(&self, i: usize) -> f64 {
        0.5 * (self.edges[i] + self.edges[i + 1])
    }

    /// `counts_i / (total * width_i)`; zero for an empty histogram.
    pub fn density(&self, i: usize) -> f64 {
        if self.total_samples == 0 {
            0.0
        } else {
            self.counts[i] as f64 / (self.total_samples as f64 * self.width(i))
        }
    }

    pub fn densities(&self) -> Vec<f64> {
        (0..self.bins()).map(|i| self.density(i)).collect()
    }

    /// Index and value of the largest density; the lowest index wins ties.
    pub fn max_density_bin(&self) -> (usize, f64) {
        (0..self.bins()).fold((0, f64::NEG_INFINITY), |best, i| {
            let d = self.density(i);
            if d > best.1 {
                (i, d)
            } else {
                best
            }
        })
    }

    /// Writes `bin_left,bin_right,count,density` rows, preceded by
    /// `# key=value` comment lines.
    pub fn write_csv<W: Write>(&self, mut out: W, comments: &[(String, String)]) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
        for (k, v) in comments {
            write!(out, "# {k}={v}\r\n").map_err(io)?;
        }
        write!(out, "# total_samples={}\r\n", self.total_samples).map_err(io)?;
        write!(out, "# out_of_range={}\r\n", self.out_of_range).map_err(io)?;
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        let csv_err = |e: csv::Error| Error::InvalidArgument(format!("write failed: {e}"));
        writer.write_record(["bin_left", "bin_right", "count", "density"]).map_err(csv_err)?;
        for i in 0..self.bins() {
            writer
                .write_record([
                    format!("{:.16e}", self.edges[i]),
                    format!("{:.16e}", self.edges[i + 1]),
                    self.counts[i].to_string(),
                    format!("{:.16e}", self.density(i)),
                ])
                .map_err(csv_err)?;
        }
        writer.flush().map_err(io)?;
        Ok(())
    }

    /// Parses the format written by [`Histogram::write_csv`]. The
    /// `total_samples` comment is required; `seed` and `measure` comments are
    /// picked up when present.
    pub fn read_csv<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("unreadable histogram: {e}")))?;
        crate::input::parse_histogram_csv(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_example() {
        let mut h = Histogram::new(vec![0.35, 0.55, 0.75]).unwrap();
        h.extend([0.4, 0.5, 0.6]);
        assert_eq!(h.counts(), &[2, 1]);
        assert_eq!(h.out_of_range(), 0);
    }

    #[test]
    fn empty_stream() {
        let h = Histogram::new(uniform_edges(0.0, 1.0, 4).unwrap()).unwrap();
        assert_eq!(h.counts(), &[0, 0, 0, 0]);
        assert_eq!(h.density(0), 0.0);
    }

    #[test]
    fn closed_last_bin_and_out_of_range() {
        let mut h = Histogram::new(vec![0.0, 1.0, 2.0]).unwrap();
        h.extend([0.0, 1.0, 2.0, 2.5, -0.1, f64::NAN]);
        assert_eq!(h.counts(), &[1, 2]);
        assert_eq!(h.out_of_range(), 3);
        assert_eq!(h.total_samples(), 6);
    }

    #[test]
    fn invalid_edges() {
        assert!(matches!(Histogram::new(vec![1.0]), Err(Error::InvalidEdges)));
        assert!(matches!(Histogram::new(vec![0.0, 0.0, 1.0]), Err(Error::InvalidEdges)));
        assert!(matches!(Histogram::new(vec![0.0, f64::NAN]), Err(Error::InvalidEdges)));
    }

    #[test]
    fn geometric_layout() {
        let e = geometric_edges(0.5, 1e-4, 1e-2, 10).unwrap();
        assert_eq!(e.len(), 22);
        assert!((e[0] - 0.49).abs() < 1e-15);
        assert!((e[10] - (0.5 - 1e-4)).abs() < 1e-15);
        assert!((e[11] - (0.5 + 1e-4)).abs() < 1e-15);
    }

    #[test]
    fn merge_adds_counts() {
        let edges = uniform_edges(0.0, 1.0, 2).unwrap();
        let mut a = Histogram::new(edges.clone()).unwrap();
        let mut b = Histogram::new(edges).unwrap();
        a.extend([0.1, 0.9]);
        b.extend([0.2, 3.0]);
        a.merge(&b).unwrap();
        assert_eq!(a.counts(), &[2, 1]);
        assert_eq!(a.total_samples(), 4);
        assert_eq!(a.out_of_range(), 1);
    }

    #[test]
    fn csv_round_trip() {
        let mut h = Histogram::new(uniform_edges(-1.0, 1.0, 5).unwrap()).unwrap().with_provenance(9, "N_2/q2/n1");
        h.extend([-0.9, 0.1, 0.15, 0.99, 7.0]);
        let mut buf = Vec::new();
        h.write_csv(&mut buf, &[("seed".into(), "9".into()), ("measure".into(), "N_2/q2/n1".into())])
            .unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\r\n"));
        let back = Histogram::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, h);
    }
}
