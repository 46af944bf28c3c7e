//! Measurement ensembles and the intensity map `y(n) = |<phi_n, x>|^2`.
//!
//! The inner product is `<a, b> = sum_j conj(a_j) b_j`.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::{self, NormalSampler};
use crate::signal::{parse_f64_list, RealSignal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnsembleKind {
    Gaussian { seed: u64 },
    /// Zero-padded partial DFT rows for signals of length `signal_len`.
    Fourier { signal_len: usize, freqs: Vec<usize> },
    Explicit,
}

/// Measurement vectors stored as the rows of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Vectors {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl Vectors {
    pub fn nrows(&self) -> usize {
        match self {
            Vectors::Real(a) => a.nrows(),
            Vectors::Complex(a) => a.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            Vectors::Real(a) => a.ncols(),
            Vectors::Complex(a) => a.ncols(),
        }
    }
}

/// An ordered collection of `N` measurement vectors of common length `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementEnsemble {
    vectors: Vectors,
    kind: EnsembleKind,
}

impl MeasurementEnsemble {
    /// Real ensemble from explicit rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let l = check_rows(rows)?;
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Ok(MeasurementEnsemble {
            vectors: Vectors::Real(DMatrix::from_row_slice(rows.len(), l, &data)),
            kind: EnsembleKind::Explicit,
        })
    }

    /// Complex ensemble from explicit rows.
    pub fn from_complex_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let l = check_rows(rows)?;
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Ok(MeasurementEnsemble {
            vectors: Vectors::Complex(DMatrix::from_row_slice(rows.len(), l, &data)),
            kind: EnsembleKind::Explicit,
        })
    }

    pub fn from_real_matrix(a: DMatrix<f64>) -> Self {
        MeasurementEnsemble {
            vectors: Vectors::Real(a),
            kind: EnsembleKind::Explicit,
        }
    }

    /// Number of vectors `N`.
    pub fn count(&self) -> usize {
        self.vectors.nrows()
    }

    /// Vector length `L`.
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    /// Expected length of the measured signal: `L`, or `L / 2` for Fourier.
    pub fn signal_len(&self) -> usize {
        match &self.kind {
            EnsembleKind::Fourier { signal_len, .. } => *signal_len,
            _ => self.dim(),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self.vectors, Vectors::Real(_))
    }

    pub fn kind(&self) -> &EnsembleKind {
        &self.kind
    }

    pub fn vectors(&self) -> &Vectors {
        &self.vectors
    }

    pub fn real_matrix(&self) -> Option<&DMatrix<f64>> {
        match &self.vectors {
            Vectors::Real(a) => Some(a),
            Vectors::Complex(_) => None,
        }
    }

    /// Rows as a complex matrix (real ensembles are promoted).
    pub fn complex_matrix(&self) -> DMatrix<Complex64> {
        match &self.vectors {
            Vectors::Real(a) => a.map(|v| Complex64::new(v, 0.0)),
            Vectors::Complex(a) => a.clone(),
        }
    }

    /// A stable identifier used to link measurements to their ensemble.
    pub fn id(&self) -> String {
        match &self.kind {
            EnsembleKind::Gaussian { seed } => {
                format!("gaussian:M={}:N={}:seed={}", self.dim(), self.count(), seed)
            }
            EnsembleKind::Fourier { signal_len, freqs } => {
                format!("fourier:M={}:freqs={}", signal_len, join_usize(freqs, ";"))
            }
            EnsembleKind::Explicit => {
                let mut h: u64 = 0xcbf2_9ce4_8422_2325;
                let mut feed = |x: f64| {
                    for b in x.to_bits().to_le_bytes() {
                        h ^= b as u64;
                        h = h.wrapping_mul(0x0100_0000_01b3);
                    }
                };
                match &self.vectors {
                    Vectors::Real(a) => a.iter().for_each(|v| feed(*v)),
                    Vectors::Complex(a) => a.iter().for_each(|v| {
                        feed(v.re);
                        feed(v.im);
                    }),
                }
                format!("explicit:L={}:N={}:h={:016x}", self.dim(), self.count(), h)
            }
        }
    }

    /// CSV with a one-line header comment; complex entries as `re,im` pairs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let field = if self.is_real() { "real" } else { "complex" };
        let _ = write!(
            out,
            "# kind={} field={} M={} N={}",
            match self.kind {
                EnsembleKind::Gaussian { .. } => "gaussian",
                EnsembleKind::Fourier { .. } => "fourier",
                EnsembleKind::Explicit => "explicit",
            },
            field,
            self.signal_len(),
            self.count()
        );
        match &self.kind {
            EnsembleKind::Gaussian { seed } => {
                let _ = write!(out, " seed={seed}");
            }
            EnsembleKind::Fourier { freqs, .. } => {
                let _ = write!(out, " freqs={}", join_usize(freqs, ";"));
            }
            EnsembleKind::Explicit => {}
        }
        out.push('\n');
        for n in 0..self.count() {
            let row: Vec<String> = match &self.vectors {
                Vectors::Real(a) => a.row(n).iter().map(|v| format!("{v}")).collect(),
                Vectors::Complex(a) => a
                    .row(n)
                    .iter()
                    .map(|v| format!("{},{}", v.re, v.im))
                    .collect(),
            };
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty ensemble file".into(),
        })?;
        let header = header.trim().strip_prefix('#').ok_or(Error::Parse {
            line: 1,
            msg: "missing '#' header line".into(),
        })?;
        let mut kind = None;
        let mut field = None;
        let mut m = None;
        let mut n = None;
        let mut seed = None;
        let mut freqs = None;
        for tok in header.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or(Error::Parse {
                line: 1,
                msg: format!("bad header token {tok:?}"),
            })?;
            let bad = |what: &str| Error::Parse {
                line: 1,
                msg: format!("bad {what} {v:?}"),
            };
            match k {
                "kind" => kind = Some(v.to_string()),
                "field" => field = Some(v.to_string()),
                "M" => m = Some(v.parse::<usize>().map_err(|_| bad("M"))?),
                "N" => n = Some(v.parse::<usize>().map_err(|_| bad("N"))?),
                "seed" => seed = Some(v.parse::<u64>().map_err(|_| bad("seed"))?),
                "freqs" => {
                    freqs = Some(
                        v.split(';')
                            .filter(|s| !s.is_empty())
                            .map(|s| s.parse::<usize>().map_err(|_| bad("freqs")))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => {}
            }
        }
        let missing = |what: &str| Error::Parse {
            line: 1,
            msg: format!("header lacks {what}"),
        };
        let kind = kind.ok_or_else(|| missing("kind"))?;
        let field = field.ok_or_else(|| missing("field"))?;
        let m = m.ok_or_else(|| missing("M"))?;
        let n = n.ok_or_else(|| missing("N"))?;
        let complex = match field.as_str() {
            "real" => false,
            "complex" => true,
            other => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unknown field {other:?}"),
                })
            }
        };

        let mut real_rows = Vec::new();
        let mut complex_rows = Vec::new();
        for (idx, line) in lines {
            let vals = parse_f64_list(line, idx + 1)?;
            if complex {
                if vals.len() % 2 != 0 {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: "complex row needs re,im pairs".into(),
                    });
                }
                complex_rows.push(
                    vals.chunks(2)
                        .map(|c| Complex64::new(c[0], c[1]))
                        .collect::<Vec<_>>(),
                );
            } else {
                real_rows.push(vals);
            }
        }
        let mut ens = if complex {
            MeasurementEnsemble::from_complex_rows(&complex_rows)?
        } else {
            MeasurementEnsemble::from_real_rows(&real_rows)?
        };
        if ens.count() != n {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header says N={n} but found {} rows", ens.count()),
            });
        }
        ens.kind = match kind.as_str() {
            "gaussian" => EnsembleKind::Gaussian {
                seed: seed.ok_or_else(|| missing("seed"))?,
            },
            "fourier" => {
                let freqs = freqs.ok_or_else(|| missing("freqs"))?;
                if ens.dim() != 2 * m || freqs.len() != n {
                    return Err(Error::Parse {
                        line: 1,
                        msg: "fourier rows must have length 2M and one frequency each".into(),
                    });
                }
                EnsembleKind::Fourier {
                    signal_len: m,
                    freqs,
                }
            }
            "explicit" => EnsembleKind::Explicit,
            other => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unknown kind {other:?}"),
                })
            }
        };
        if !matches!(ens.kind, EnsembleKind::Fourier { .. }) && ens.dim() != m && n > 0 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header says M={m} but rows have length {}", ens.dim()),
            });
        }
        Ok(ens)
    }
}

fn check_rows<T>(rows: &[Vec<T>]) -> Result<usize> {
    let l = rows.first().map(|r| r.len()).unwrap_or(0);
    for r in rows {
        if r.len() != l {
            return Err(Error::DimensionMismatch {
                expected: l,
                actual: r.len(),
            });
        }
    }
    Ok(l)
}

fn join_usize(v: &[usize], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// `N` i.i.d. standard normal vectors of length `M`. Vector `n` is drawn from
/// stream `n` of the seed (see [`crate::rng`]), so the ensemble is a pure
/// function of `(M, N, seed)`.
pub fn gaussian_ensemble(m: usize, n: usize, seed: u64) -> Result<MeasurementEnsemble> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "gaussian ensemble needs M >= 1 and N >= 1 (got M={m}, N={n})"
        )));
    }
    let mut a = DMatrix::<f64>::zeros(n, m);
    for row in 0..n {
        let mut s = NormalSampler::new(rng::stream(seed, row as u64));
        for col in 0..m {
            a[(row, col)] = s.sample();
        }
    }
    Ok(MeasurementEnsemble {
        vectors: Vectors::Real(a),
        kind: EnsembleKind::Gaussian { seed },
    })
}

/// `exp(-i pi r / M)`, exact at quarter turns.
pub(crate) fn unit_root(r: usize, m: usize) -> Complex64 {
    let period = 2 * m;
    let r = r % period;
    if (4 * r) % period == 0 {
        return match 4 * r / period {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
    }
    Complex64::from_polar(1.0, -PI * r as f64 / m as f64)
}

pub(crate) fn validate_freqs(m: usize, freqs: &[usize]) -> Result<()> {
    let mut seen = HashSet::new();
    for &k in freqs {
        if k >= 2 * m {
            return Err(Error::FrequencyOutOfRange {
                freq: k,
                limit: 2 * m,
            });
        }
        if !seen.insert(k) {
            return Err(Error::DuplicateFrequency(k));
        }
    }
    Ok(())
}

/// Rows `phi_n(j) = exp(-i 2 pi j k_n / 2M)`, `j = 0..2M`.
pub fn fourier_rows(m: usize, freqs: &[usize]) -> Result<MeasurementEnsemble> {
    if m == 0 {
        return Err(Error::InvalidArgument("signal length M must be >= 1".into()));
    }
    validate_freqs(m, freqs)?;
    let l = 2 * m;
    let a = DMatrix::from_fn(freqs.len(), l, |n, j| unit_root(j * freqs[n], m));
    Ok(MeasurementEnsemble {
        vectors: Vectors::Complex(a),
        kind: EnsembleKind::Fourier {
            signal_len: m,
            freqs: freqs.to_vec(),
        },
    })
}

/// Nonnegative intensities linked to the ensemble that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityMeasurements {
    values: Vec<f64>,
    link: String,
}

impl IntensityMeasurements {
    pub fn new(values: Vec<f64>, link: impl Into<String>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "intensity {v} is not a nonnegative number"
            )));
        }
        Ok(IntensityMeasurements {
            values,
            link: link.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn link(&self) -> &str {
        &self.link
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Evaluates `y(n) = |<phi_n, x>|^2`. Fourier ensembles zero-pad `x` from
/// length `M` to `2M`.
pub fn intensity_measure(
    phi: &MeasurementEnsemble,
    x: &RealSignal,
) -> Result<IntensityMeasurements> {
    let expected = phi.signal_len();
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: x.len(),
        });
    }
    let xs = x.values();
    let values = match &phi.vectors {
        Vectors::Real(a) => (0..a.nrows())
            .map(|n| {
                let ip: f64 = xs.iter().enumerate().map(|(j, v)| a[(n, j)] * v).sum();
                ip * ip
            })
            .collect(),
        Vectors::Complex(a) => (0..a.nrows())
            .map(|n| {
                // padded entries are zero, so only the first M columns matter
                let ip: Complex64 = xs
                    .iter()
                    .enumerate()
                    .map(|(j, v)| a[(n, j)].conj() * *v)
                    .sum();
                ip.norm_sqr()
            })
            .collect(),
    };
    IntensityMeasurements::new(values, phi.id())
}
