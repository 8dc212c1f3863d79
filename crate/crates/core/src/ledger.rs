//! Sampled scalar histories of one run, and their CSV serialization.

use crate::error::{Error, Result};
use crate::real::Real;
use std::fmt::Write as _;
use std::path::Path;

/// Per-sample scalar columns. `E = |v|_2^2`, `D = |grad v|_2^2`,
/// `S = |P Lap v|_2^2`, `Tt = |v_t|_2^2`, `G = d/dt |grad v|_2^2`
/// (instantaneous spectral value), then `|v|_q` for the configured q grid
/// and `|v|_inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesLedger<T: Real> {
    pub times: Vec<T>,
    pub e: Vec<T>,
    pub d: Vec<T>,
    pub s: Vec<T>,
    pub tt: Vec<T>,
    pub g: Vec<T>,
    /// Exponents of the Lq columns.
    pub qs: Vec<T>,
    /// `lq[i][j]` = `|v(t_j)|_{q_i}`.
    pub lq: Vec<Vec<T>>,
    pub linf: Vec<T>,
}

impl<T: Real> TimeSeriesLedger<T> {
    pub fn new(qs: Vec<T>) -> Self {
        TimeSeriesLedger {
            times: Vec::new(),
            e: Vec::new(),
            d: Vec::new(),
            s: Vec::new(),
            tt: Vec::new(),
            g: Vec::new(),
            lq: vec![Vec::new(); qs.len()],
            qs,
            linf: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn push(&mut self, t: T, e: T, d: T, s: T, tt: T, g: T, lq: &[T], linf: T) {
        assert_eq!(lq.len(), self.qs.len());
        self.times.push(t);
        self.e.push(e);
        self.d.push(d);
        self.s.push(s);
        self.tt.push(tt);
        self.g.push(g);
        for (col, &v) in self.lq.iter_mut().zip(lq) {
            col.push(v);
        }
        self.linf.push(linf);
    }

    pub fn time_range(&self) -> (T, T) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    /// Index of the sample closest to `t`, requiring `t` inside the range.
    pub fn snap(&self, t: T) -> Result<usize> {
        let (lo, hi) = self.time_range();
        let slack = T::of(1e-9) * (hi - lo).max(T::one());
        if t < lo - slack || t > hi + slack {
            return Err(Error::WindowOutsideLedger {
                s: t.to64(),
                t: t.to64(),
                lo: lo.to64(),
                hi: hi.to64(),
            });
        }
        let mut best = 0usize;
        let mut dist = T::infinity();
        for (i, &tau) in self.times.iter().enumerate() {
            let d = (tau - t).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        Ok(best)
    }

    /// Snap a window `(s, t)` to sample indices; must span at least one step.
    pub fn snap_window(&self, s: T, t: T) -> Result<(usize, usize)> {
        let i = self.snap(s)?;
        let j = self.snap(t)?;
        if j <= i {
            return Err(Error::WindowTooShort {
                s: s.to64(),
                t: t.to64(),
            });
        }
        Ok((i, j))
    }

    /// Column lookup for a configured q (exact match on the stored grid).
    pub fn lq_column(&self, q: T) -> Option<&[T]> {
        self.qs
            .iter()
            .position(|&x| (x - q).abs() <= T::of(1e-12) * q.abs().max(T::one()))
            .map(|i| self.lq[i].as_slice())
    }

    /// Structural invariants: strictly increasing times, finite entries,
    /// energy non-increasing up to `e_slack` per step.
    pub fn check_invariants(&self, e_slack: T) -> Result<()> {
        for j in 1..self.len() {
            if !(self.times[j] > self.times[j - 1]) {
                return Err(Error::LedgerParse(format!(
                    "times not strictly increasing at row {j}"
                )));
            }
            if self.e[j] > self.e[j - 1] + e_slack {
                return Err(Error::LedgerParse(format!(
                    "energy increased beyond tolerance at row {j}: {} -> {}",
                    self.e[j - 1],
                    self.e[j]
                )));
            }
        }
        let all_finite = self
            .times
            .iter()
            .chain(&self.e)
            .chain(&self.d)
            .chain(&self.s)
            .chain(&self.tt)
            .chain(&self.g)
            .chain(self.lq.iter().flatten())
            .chain(&self.linf)
            .all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::LedgerParse("non-finite ledger entry".into()));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("t,E,D,S,Tt,G");
        for q in &self.qs {
            let _ = write!(out, ",Lq_{q}");
        }
        out.push_str(",Linf\n");
        for j in 0..self.len() {
            let _ = write!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e}",
                self.times[j], self.e[j], self.d[j], self.s[j], self.tt[j], self.g[j]
            );
            for col in &self.lq {
                let _ = write!(out, ",{:e}", col[j]);
            }
            let _ = writeln!(out, ",{:e}", self.linf[j]);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::LedgerParse("empty file".into()))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 7 || cols[0] != "t" || cols[cols.len() - 1] != "Linf" {
            return Err(Error::LedgerParse(format!("unexpected header: {header}")));
        }
        let mut qs = Vec::new();
        for c in &cols[6..cols.len() - 1] {
            let q = c
                .strip_prefix("Lq_")
                .ok_or_else(|| Error::LedgerParse(format!("unexpected column {c}")))?;
            let q: f64 = q
                .parse()
                .map_err(|_| Error::LedgerParse(format!("bad q exponent {q}")))?;
            qs.push(T::of(q));
        }
        let mut ledger = TimeSeriesLedger::new(qs);
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let vals: std::result::Result<Vec<f64>, _> =
                line.split(',').map(str::parse::<f64>).collect();
            let vals = vals
                .map_err(|e| Error::LedgerParse(format!("row {}: {e}", lineno + 2)))?;
            if vals.len() != cols.len() {
                return Err(Error::LedgerParse(format!(
                    "row {} has {} fields, expected {}",
                    lineno + 2,
                    vals.len(),
                    cols.len()
                )));
            }
            let lq: Vec<T> = vals[6..vals.len() - 1].iter().map(|&x| T::of(x)).collect();
            ledger.push(
                T::of(vals[0]),
                T::of(vals[1]),
                T::of(vals[2]),
                T::of(vals[3]),
                T::of(vals[4]),
                T::of(vals[5]),
                &lq,
                T::of(vals[vals.len() - 1]),
            );
        }
        if ledger.is_empty() {
            return Err(Error::LedgerParse("no samples".into()));
        }
        Ok(ledger)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> TimeSeriesLedger<f64> {
        let mut l = TimeSeriesLedger::new(vec![8.0, 16.0]);
        for j in 0..5 {
            let t = j as f64 * 0.1;
            let e = (-t).exp();
            l.push(t, e, 2.0 * e, 4.0 * e, e, -2.0 * e, &[e, e], e.sqrt());
        }
        l
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let l = toy();
        let parsed = TimeSeriesLedger::<f64>::from_csv(&l.to_csv()).unwrap();
        assert_eq!(l, parsed);
    }

    #[test]
    fn invariants_catch_energy_growth() {
        let mut l = toy();
        l.check_invariants(1e-12).unwrap();
        l.e[3] = l.e[2] * 2.0;
        assert!(l.check_invariants(1e-12).is_err());
    }

    #[test]
    fn snap_window_rejects_degenerate_and_outside() {
        let l = toy();
        assert!(l.snap_window(0.1, 0.3).is_ok());
        assert!(l.snap_window(0.3, 0.3).is_err());
        assert!(l.snap_window(0.0, 9.0).is_err());
    }
}
