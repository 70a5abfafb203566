use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mehler::check_theta;
use crate::norms::davies_norm;

/// Largest number of grid points a contour job may request.
pub const MAX_CONTOUR_POINTS: usize = 4_000_000;

/// Evenly spaced values `start, start + step, ...` up to `stop` (inclusive, up to rounding).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl GridAxis {
    pub fn new(start: f64, step: f64, stop: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || !(step > 0.0) || stop < start {
            return Err(Error::InvalidInput(format!("bad grid {start}:{step}:{stop}: need step > 0 and stop >= start")));
        }
        Ok(GridAxis { start, step, stop })
    }

    pub fn count(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    /// `start + i step`, with values within rounding of zero snapped to `0`.
    pub fn value(&self, i: usize) -> f64 {
        let v = self.start + i as f64 * self.step;
        if v.abs() < 1e-9 * self.step {
            0.0
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourJob {
    pub theta: f64,
    pub re: GridAxis,
    pub im: GridAxis,
}

impl ContourJob {
    pub fn new(theta: f64, re: GridAxis, im: GridAxis) -> Result<Self> {
        check_theta(theta)?;
        if re.start < 0.0 {
            return Err(Error::InvalidInput(format!("Re t grid must start at or after 0, got {}", re.start)));
        }
        let points = re.count().saturating_mul(im.count());
        if points > MAX_CONTOUR_POINTS {
            return Err(Error::GridGuard { points, limit: MAX_CONTOUR_POINTS });
        }
        Ok(ContourJob { theta, re, im })
    }

    pub fn points(&self) -> usize {
        self.re.count() * self.im.count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContourSummary {
    pub points: usize,
    pub bounded: usize,
}

/// C-style `%.12e`: twelve decimals and a signed exponent of at least two digits.
pub fn format_sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

fn row(job: &ContourJob, j: usize) -> Result<(String, usize)> {
    let s = job.im.value(j);
    let mut line = String::with_capacity(job.re.count() * 60);
    let mut bounded = 0;
    for i in 0..job.re.count() {
        let r = job.re.value(i);
        let value = match davies_norm(job.theta, Complex64::new(r, s)) {
            Ok(d) => {
                bounded += 1;
                format_sci(d.norm.ln())
            }
            Err(Error::Unbounded { .. }) => "inf".to_string(),
            Err(e) => return Err(e),
        };
        line.push_str(&format_sci(r));
        line.push(',');
        line.push_str(&format_sci(s));
        line.push(',');
        line.push_str(&value);
        line.push('\n');
    }
    Ok((line, bounded))
}

/// Write `re_t,im_t,log_norm` rows, `Im t` in the outer loop. Rows are computed in parallel
/// and written in order, so the output does not depend on scheduling.
pub fn write_contour(job: &ContourJob, out: &mut dyn Write) -> Result<ContourSummary> {
    out.write_all(b"re_t,im_t,log_norm\n")?;
    let mut bounded = 0;
    let rows = job.im.count();
    let chunk = 64;
    for start in (0..rows).step_by(chunk) {
        let lines: Vec<(String, usize)> = (start..(start + chunk).min(rows)).into_par_iter().map(|j| row(job, j)).collect::<Result<_>>()?;
        for (line, b) in lines {
            out.write_all(line.as_bytes())?;
            bounded += b;
        }
    }
    Ok(ContourSummary { points: job.points(), bounded })
}

pub fn run_contour(job: &ContourJob, path: &Path) -> Result<ContourSummary> {
    let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let summary = write_contour(job, &mut w)?;
    w.flush()?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mehler::region_report;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn csv(job: &ContourJob) -> String {
        let mut buf = Vec::new();
        write_contour(job, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn sci_format() {
        assert_eq!(format_sci(1.234567890123), "1.234567890123e+00");
        assert_eq!(format_sci(-0.00012), "-1.200000000000e-04");
        assert_eq!(format_sci(0.0), "0.000000000000e+00");
        assert_eq!(format_sci(1e100), "1.000000000000e+100");
        assert_eq!(format_sci(f64::INFINITY), "inf");
    }

    #[test]
    fn axis_counts() {
        assert_eq!(GridAxis::new(0.0, 0.002, 1.5).unwrap().count(), 751);
        assert_eq!(GridAxis::new(-1.0, 0.002, 2.0).unwrap().count(), 1501);
        let g = GridAxis::new(-1.0, 0.1, 1.0).unwrap();
        assert_eq!(g.value(10), 0.0);
        assert!(GridAxis::new(1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn guard_and_validation() {
        let re = GridAxis::new(0.0, 1e-4, 1.0).unwrap();
        let im = GridAxis::new(0.0, 1e-4, 1.0).unwrap();
        assert!(matches!(ContourJob::new(0.3, re, im), Err(Error::GridGuard { .. })));
        let re = GridAxis::new(-0.5, 0.1, 1.0).unwrap();
        assert!(ContourJob::new(0.3, re, im).is_err());
        assert!(ContourJob::new(PI, GridAxis::new(0.0, 1.0, 1.0).unwrap(), im).is_err());
    }

    #[test]
    fn self_adjoint_slice_is_minus_re_t() {
        let job = ContourJob::new(0.0, GridAxis::new(0.05, 0.05, 1.5).unwrap(), GridAxis::new(-1.0, 0.05, 2.0).unwrap()).unwrap();
        let out = csv(&job);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("re_t,im_t,log_norm"));
        let mut n = 0;
        for line in lines {
            let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!((f[2] + f[0]).abs() < 1e-12, "{line}");
            n += 1;
        }
        assert_eq!(n, job.points());
    }

    #[test]
    fn inf_exactly_off_region_and_deterministic() {
        let theta = 5.0 * PI / 12.0;
        let job = ContourJob::new(theta, GridAxis::new(0.01, 0.05, 1.5).unwrap(), GridAxis::new(-1.0, 0.05, 2.0).unwrap()).unwrap();
        let out = csv(&job);
        for line in out.lines().skip(1) {
            let parts: Vec<&str> = line.split(',').collect();
            let t = Complex64::new(parts[0].parse().unwrap(), parts[1].parse().unwrap());
            let bounded = region_report(theta, t).unwrap().bounded;
            assert_eq!(parts[2] == "inf", !bounded, "{line}");
        }
        assert!(out.contains("1.000000000000e-02,7.000000000000e-01,inf"));
        assert_eq!(out, csv(&job));
    }

    #[test]
    fn spot_value_at_one() {
        let job = ContourJob::new(FRAC_PI_4, GridAxis::new(0.0, 0.05, 1.5).unwrap(), GridAxis::new(-1.0, 0.05, 2.0).unwrap()).unwrap();
        let out = csv(&job);
        let line = out.lines().find(|l| l.starts_with("1.000000000000e+00,0.000000000000e+00,")).unwrap();
        let v: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        let a = 0.5 * 2f64.sinh().powi(2);
        let expected = -0.5 * ((1.0 + a).sqrt() + a.sqrt()).ln();
        assert!((v - expected).abs() < 1e-11);
    }
}
