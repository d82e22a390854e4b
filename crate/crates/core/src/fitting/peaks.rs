//! Peak extraction from transmission traces.

use crate::error::{Error, Result};
use crate::response::TransmissionTrace;

/// A located peak: sub-grid-refined frequency and magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub frequency: f64,
    pub magnitude: f64,
}

/// Local maxima of `|t|` whose prominence exceeds
/// `min_prominence * max |t|`, sorted by frequency.
///
/// Prominence is the drop from the peak to the higher of the valleys
/// separating it from its neighbors (or the trace edge). Peak positions are
/// refined by three-point parabolic interpolation.
pub fn extract_peaks(trace: &TransmissionTrace, min_prominence: f64) -> Result<Vec<Peak>> {
    if trace.f.is_empty() {
        return Err(Error::invalid("extract_peaks: empty trace"));
    }
    if !(min_prominence > 0.0 && min_prominence < 1.0) {
        return Err(Error::invalid(
            "extract_peaks: min_prominence must be in (0, 1)",
        ));
    }
    let mag: Vec<f64> = trace.t.iter().map(|z| z.norm()).collect();
    let n = mag.len();
    if n < 3 {
        return Ok(Vec::new());
    }
    let global_max = mag.iter().copied().fold(0.0, f64::max);
    if global_max == 0.0 {
        return Ok(Vec::new());
    }

    let maxima: Vec<usize> = (1..n - 1)
        .filter(|&i| mag[i] > mag[i - 1] && mag[i] >= mag[i + 1])
        .collect();
    if maxima.is_empty() {
        return Ok(Vec::new());
    }

    // Topographic prominence: walk outward until the terrain rises above
    // the peak (or the trace ends); the flanking minimum is the lowest
    // sample on that stretch, and the prominence is the drop to the higher
    // of the two flanking minima.
    let flank = |i: usize, dir: isize| -> f64 {
        let mut lowest = mag[i];
        let mut j = i as isize + dir;
        while (0..n as isize).contains(&j) {
            let v = mag[j as usize];
            if v > mag[i] {
                break;
            }
            lowest = lowest.min(v);
            j += dir;
        }
        lowest
    };
    let threshold = min_prominence * global_max;
    let mut peaks = Vec::new();
    for &i in &maxima {
        let prominence = mag[i] - flank(i, -1).max(flank(i, 1));
        if prominence <= threshold {
            continue;
        }
        peaks.push(refine(&trace.f, &mag, i));
    }
    Ok(peaks)
}

/// Three-point parabolic vertex through `(f, mag)` at index `i`.
fn refine(f: &[f64], mag: &[f64], i: usize) -> Peak {
    let (a, b, c) = (mag[i - 1], mag[i], mag[i + 1]);
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return Peak {
            frequency: f[i],
            magnitude: b,
        };
    }
    let delta = 0.5 * (a - c) / denom;
    let step = 0.5 * (f[i + 1] - f[i - 1]);
    Peak {
        frequency: f[i] + delta * step,
        magnitude: b - 0.25 * (a - c) * delta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;
    use num_complex::Complex64;

    fn lorentz_trace(
        centers: &[f64],
        hwhm: f64,
        f_lo: f64,
        f_hi: f64,
        n: usize,
    ) -> TransmissionTrace {
        let f = linspace(f_lo, f_hi, n);
        let t: Vec<Complex64> = f
            .iter()
            .map(|&fi| {
                let m: f64 = centers
                    .iter()
                    .map(|&c| hwhm * hwhm / ((fi - c) * (fi - c) + hwhm * hwhm))
                    .sum();
                Complex64::new(m, 0.0)
            })
            .collect();
        TransmissionTrace::new(f, t).unwrap()
    }

    #[test]
    fn three_resonances_found() {
        let centers = [3.164e9, 3.176e9, 3.197e9];
        let trace = lorentz_trace(&centers, 0.5e6, 3.15e9, 3.21e9, 6001);
        let peaks = extract_peaks(&trace, 0.2).unwrap();
        assert_eq!(peaks.len(), 3);
        let step = (3.21e9 - 3.15e9) / 6000.0;
        for (p, c) in peaks.iter().zip(centers.iter()) {
            assert!((p.frequency - c).abs() < step);
        }
    }

    #[test]
    fn monotone_trace_has_no_peaks() {
        let f = linspace(1.0e9, 2.0e9, 101);
        let t: Vec<Complex64> = f
            .iter()
            .map(|&fi| Complex64::new(fi / 2.0e9, 0.0))
            .collect();
        let trace = TransmissionTrace::new(f, t).unwrap();
        assert!(extract_peaks(&trace, 0.1).unwrap().is_empty());
    }

    #[test]
    fn two_equal_peaks_with_high_prominence() {
        let trace = lorentz_trace(&[3.0e9, 3.1e9], 2.0e6, 2.9e9, 3.2e9, 3001);
        let peaks = extract_peaks(&trace, 0.5).unwrap();
        assert_eq!(peaks.len(), 2);
        // Brute-force argmax lands on one of the two refined peaks.
        let mags = trace.magnitudes();
        let arg = mags
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let nearest = peaks
            .iter()
            .map(|p| (trace.f[arg] - p.frequency).abs())
            .fold(f64::MAX, f64::min);
        assert!(nearest < 2.0 * (3.2e9 - 2.9e9) / 3000.0);
    }

    #[test]
    fn scale_invariance_of_positions() {
        let trace = lorentz_trace(&[3.0e9, 3.1e9], 2.0e6, 2.9e9, 3.2e9, 3001);
        let scaled =
            TransmissionTrace::new(trace.f.clone(), trace.t.iter().map(|z| z * 4.0).collect())
                .unwrap();
        let a = extract_peaks(&trace, 0.3).unwrap();
        let b = extract_peaks(&scaled, 0.3).unwrap();
        assert_eq!(a.len(), b.len());
        for (pa, pb) in a.iter().zip(b.iter()) {
            // Scaling by a power of two is exact in floating point.
            assert_eq!(pa.frequency, pb.frequency);
            assert_eq!(4.0 * pa.magnitude, pb.magnitude);
        }
    }
}
