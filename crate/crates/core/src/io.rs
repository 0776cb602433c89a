//! File formats: CSV tables, model JSON, generation logs and raw realization binaries.
//!
//! Floats are written in Rust's shortest round-trip form, so every table
//! parses back to the identical `f64` values.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::ar::{LagVector, RestrictedArModel};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::optimizer::{BenchmarkRow, GenerationLog};
use crate::target::TargetAutocovariance;
use crate::var::{CovarianceMatrixFunction, RestrictedVarModel};

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn joined(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad {what} {s:?}: {e}")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad {what} {s:?}: {e}")))
}

fn expect_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().map(str::trim).ne(expected.iter().copied()) {
        return Err(Error::Parse(format!(
            "expected header {}, found {}",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

/// Writes a `lag,value` table.
pub fn write_series_csv(w: impl Write, values: &[f64]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["lag", "value"])?;
    for (l, v) in values.iter().enumerate() {
        wtr.write_record([l.to_string(), num(*v)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a `lag,value` table whose lags run `0, 1, 2, ...`.
pub fn read_series_csv(r: impl Read) -> Result<Vec<f64>> {
    let mut rdr = csv::Reader::from_reader(r);
    expect_header(&mut rdr, &["lag", "value"])?;
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let lag = parse_usize(&rec[0], "lag")?;
        if lag != values.len() {
            return Err(Error::Parse(format!("expected lag {}, found {lag}", values.len())));
        }
        values.push(parse_f64(&rec[1], "value")?);
    }
    Ok(values)
}

pub fn write_target_csv(w: impl Write, target: &TargetAutocovariance<f64>) -> Result<()> {
    write_series_csv(w, target.values())
}

/// Reads a target table; the lag spacing is not part of the file.
pub fn read_target_csv(r: impl Read, delta_r: f64) -> Result<TargetAutocovariance<f64>> {
    TargetAutocovariance::new(read_series_csv(r)?, delta_r)
}

/// Writes a `lag,i,j,value` table with every entry of `Γ_0..Γ_n`.
pub fn write_covariance_csv(w: impl Write, cov: &CovarianceMatrixFunction<f64>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["lag", "i", "j", "value"])?;
    for (l, m) in cov.mats().iter().enumerate() {
        for i in 0..cov.k() {
            for j in 0..cov.k() {
                wtr.write_record([l.to_string(), i.to_string(), j.to_string(), num(m[(i, j)])])?;
            }
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_covariance_csv(r: impl Read) -> Result<CovarianceMatrixFunction<f64>> {
    let mut rdr = csv::Reader::from_reader(r);
    expect_header(&mut rdr, &["lag", "i", "j", "value"])?;
    let mut entries = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        entries.push((
            parse_usize(&rec[0], "lag")?,
            parse_usize(&rec[1], "row")?,
            parse_usize(&rec[2], "column")?,
            parse_f64(&rec[3], "value")?,
        ));
    }
    let k = entries
        .iter()
        .map(|e| e.1.max(e.2) + 1)
        .max()
        .ok_or_else(|| Error::Parse("empty covariance table".into()))?;
    let n = entries.iter().map(|e| e.0).max().unwrap_or(0);
    let mut mats = vec![Matrix::from_fn(k, k, |_, _| f64::NAN); n + 1];
    for (l, i, j, v) in entries {
        mats[l][(i, j)] = v;
    }
    if mats.iter().any(|m| !m.is_finite()) {
        return Err(Error::Parse("covariance table is missing entries".into()));
    }
    CovarianceMatrixFunction::new(mats)
}

/// Serialized model, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelFile {
    Ar {
        j: Vec<usize>,
        a: Vec<f64>,
        b: f64,
    },
    Var {
        k: usize,
        j: Vec<usize>,
        #[serde(rename = "A")]
        a: Vec<Vec<Vec<f64>>>,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
    },
}

/// A model loaded from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyModel {
    Ar(RestrictedArModel<f64>),
    Var(RestrictedVarModel<f64>),
}

impl AnyModel {
    pub fn order(&self) -> usize {
        match self {
            AnyModel::Ar(m) => m.order(),
            AnyModel::Var(m) => m.order(),
        }
    }
}

impl From<&RestrictedArModel<f64>> for ModelFile {
    fn from(m: &RestrictedArModel<f64>) -> Self {
        ModelFile::Ar {
            j: m.j().as_slice().to_vec(),
            a: m.a().to_vec(),
            b: m.b(),
        }
    }
}

impl From<&RestrictedVarModel<f64>> for ModelFile {
    fn from(m: &RestrictedVarModel<f64>) -> Self {
        ModelFile::Var {
            k: m.k(),
            j: m.j().as_slice().to_vec(),
            a: m.a().iter().map(Matrix::to_rows).collect(),
            b: m.b().to_rows(),
        }
    }
}

impl ModelFile {
    pub fn into_model(self) -> Result<AnyModel> {
        match self {
            ModelFile::Ar { j, a, b } => Ok(AnyModel::Ar(RestrictedArModel::new(LagVector::new(j)?, a, b)?)),
            ModelFile::Var { k, j, a, b } => {
                let square = |rows: &[Vec<f64>]| {
                    Matrix::from_rows(rows)
                        .filter(|m| m.rows() == k && m.cols() == k)
                        .ok_or_else(|| Error::Parse(format!("expected a {k}×{k} matrix")))
                };
                let a = a.iter().map(|m| square(m)).collect::<Result<Vec<_>>>()?;
                Ok(AnyModel::Var(RestrictedVarModel::new(
                    LagVector::new(j)?,
                    a,
                    square(&b)?,
                )?))
            }
        }
    }
}

pub fn write_model_json(w: impl Write, model: &ModelFile) -> Result<()> {
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, model)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_model_json(r: impl Read) -> Result<AnyModel> {
    let file: ModelFile = serde_json::from_reader(r)?;
    file.into_model()
}

/// Writes a `k,value` table.
pub fn write_spectrum_csv(w: impl Write, points: &[(f64, f64)]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["k", "value"])?;
    for &(k, v) in points {
        wtr.write_record([num(k), num(v)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_spectrum_csv(r: impl Read) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_reader(r);
    expect_header(&mut rdr, &["k", "value"])?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok((parse_f64(&rec[0], "wavenumber")?, parse_f64(&rec[1], "value")?))
        })
        .collect()
}

/// Writes `lag,target,model,abs_err` over the common lag range.
pub fn write_fit_report_csv(w: impl Write, target: &[f64], model: &[f64]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["lag", "target", "model", "abs_err"])?;
    for (l, (t, m)) in target.iter().zip(model).enumerate() {
        wtr.write_record([l.to_string(), num(*t), num(*m), num((t - m).abs())])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes `lag,gamma_e,gamma_ar,abs_err`.
pub fn write_ensemble_csv(w: impl Write, gamma_e: &[f64], gamma_ar: &[f64]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["lag", "gamma_e", "gamma_ar", "abs_err"])?;
    for (l, (e, a)) in gamma_e.iter().zip(gamma_ar).enumerate() {
        wtr.write_record([l.to_string(), num(*e), num(*a), num((e - a).abs())])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes `lag,i,j,<left>,<right>,abs_err` for every entry of two matrix sequences.
fn write_matrix_comparison(w: impl Write, names: [&str; 2], left: &[Matrix<f64>], right: &[Matrix<f64>]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["lag", "i", "j", names[0], names[1], "abs_err"])?;
    for (l, (x, y)) in left.iter().zip(right).enumerate() {
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                let (a, b) = (x[(i, j)], y[(i, j)]);
                wtr.write_record([
                    l.to_string(),
                    i.to_string(),
                    j.to_string(),
                    num(a),
                    num(b),
                    num((a - b).abs()),
                ])?;
            }
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Multivariate fit report `lag,i,j,target,model,abs_err`.
pub fn write_covariance_report_csv(w: impl Write, target: &[Matrix<f64>], model: &[Matrix<f64>]) -> Result<()> {
    write_matrix_comparison(w, ["target", "model"], target, model)
}

/// Multivariate ensemble report `lag,i,j,gamma_e,gamma_var,abs_err`.
pub fn write_ensemble_covariance_csv(w: impl Write, gamma_e: &[Matrix<f64>], gamma_var: &[Matrix<f64>]) -> Result<()> {
    write_matrix_comparison(w, ["gamma_e", "gamma_var"], gamma_e, gamma_var)
}

pub fn write_benchmark_csv(w: impl Write, rows: &[BenchmarkRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["N", "approach", "mse", "j", "l"])?;
    for r in rows {
        wtr.write_record([
            r.n.to_string(),
            r.approach.clone(),
            num(r.mse),
            joined(&r.j),
            joined(&r.l),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_benchmark_csv(r: impl Read) -> Result<Vec<BenchmarkRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    expect_header(&mut rdr, &["N", "approach", "mse", "j", "l"])?;
    let lags = |s: &str| s.split(';').map(|t| parse_usize(t, "lag")).collect::<Result<Vec<_>>>();
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(BenchmarkRow {
                n: parse_usize(&rec[0], "N")?,
                approach: rec[1].to_string(),
                mse: parse_f64(&rec[2], "mse")?,
                j: lags(&rec[3])?,
                l: lags(&rec[4])?,
            })
        })
        .collect()
}

/// Appends one JSON line per generation.
pub fn write_generation_jsonl(mut w: impl Write, entries: &[GenerationLog]) -> Result<()> {
    for e in entries {
        serde_json::to_writer(&mut w, e)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Writes `t,z` (one component) or `t,z1,...,zk`; each inner vector is one time step.
pub fn write_realization_csv(w: impl Write, samples: &[Vec<f64>]) -> Result<()> {
    let k = samples.first().map_or(1, Vec::len);
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["t".to_string()];
    if k == 1 {
        header.push("z".into());
    } else {
        header.extend((1..=k).map(|i| format!("z{i}")));
    }
    wtr.write_record(&header)?;
    for (t, zt) in samples.iter().enumerate() {
        let mut rec = vec![t.to_string()];
        rec.extend(zt.iter().map(|&v| num(v)));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_realization_csv(r: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::Reader::from_reader(r);
    if rdr.headers()?.get(0).map(str::trim) != Some("t") {
        return Err(Error::Parse("realization table must start with a t column".into()));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            rec.iter().skip(1).map(|s| parse_f64(s, "sample")).collect()
        })
        .collect()
}

/// Magic bytes opening a binary realization file.
pub const BINARY_MAGIC: &[u8; 8] = b"ARSYN1\0\0";

/// Raw layout: magic, `u32` dimension, `u32` reserved, then little-endian `f64` samples, time-major.
pub fn write_realization_bin(mut w: impl Write, samples: &[Vec<f64>]) -> Result<()> {
    let k = samples.first().map_or(1, Vec::len);
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(k as u32).to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    for zt in samples {
        for v in zt {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_realization_bin(mut r: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..8] != BINARY_MAGIC {
        return Err(Error::Parse("not a realization binary (bad magic)".into()));
    }
    let k = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes")) as usize;
    if k == 0 {
        return Err(Error::Parse("realization binary has dimension 0".into()));
    }
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() % (8 * k) != 0 {
        return Err(Error::Parse("truncated realization binary".into()));
    }
    Ok(body
        .chunks_exact(8 * k)
        .map(|row| {
            row.chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip() {
        let v = vec![1.0, 0.766_945_121_884_781, -1e-300, 0.1 + 0.2];
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &v).unwrap();
        assert!(String::from_utf8(buf.clone())
            .unwrap()
            .starts_with("lag,value\n0,1.0\n"));
        assert_eq!(read_series_csv(buf.as_slice()).unwrap(), v);
        assert!(read_series_csv("lag,value\n1,1.0\n".as_bytes()).is_err());
        assert!(read_series_csv("l,v\n0,1.0\n".as_bytes()).is_err());
    }

    #[test]
    fn model_json_round_trip() {
        let m = RestrictedArModel::new(LagVector::new(vec![1, 2, 5]).unwrap(), vec![0.6, 0.2, 0.05], 0.63).unwrap();
        let mut buf = Vec::new();
        write_model_json(&mut buf, &ModelFile::from(&m)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"kind\": \"ar\""));
        assert_eq!(read_model_json(buf.as_slice()).unwrap(), AnyModel::Ar(m));

        let b = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.3, 0.9]);
        let a = vec![Matrix::from_row_slice(2, 2, &[0.5, 0.1, 0.0, 0.4])];
        let v = RestrictedVarModel::new(LagVector::new(vec![2]).unwrap(), a, b).unwrap();
        let json = serde_json::to_string(&ModelFile::from(&v)).unwrap();
        assert!(json.contains("\"A\":[[[0.5,0.1],[0.0,0.4]]]"));
        assert_eq!(read_model_json(json.as_bytes()).unwrap(), AnyModel::Var(v));
        assert!(read_model_json(r#"{"kind":"ar","j":[1],"a":[1.5],"b":1.0}"#.as_bytes()).is_err());
    }

    #[test]
    fn binary_round_trip() {
        let s = vec![vec![1.0, -2.0], vec![0.5, f64::MIN_POSITIVE]];
        let mut buf = Vec::new();
        write_realization_bin(&mut buf, &s).unwrap();
        assert_eq!(&buf[..8], b"ARSYN1\0\0");
        assert_eq!(buf.len(), 16 + 4 * 8);
        assert_eq!(read_realization_bin(buf.as_slice()).unwrap(), s);
        assert!(read_realization_bin(&buf[..20]).is_err());
    }

    #[test]
    fn benchmark_round_trip() {
        let rows = vec![BenchmarkRow {
            n: 3,
            approach: "GA-10".into(),
            mse: 1.1e-5,
            j: vec![1, 2, 7],
            l: vec![1, 6, 12],
        }];
        let mut buf = Vec::new();
        write_benchmark_csv(&mut buf, &rows).unwrap();
        assert!(String::from_utf8(buf.clone())
            .unwrap()
            .contains("3,GA-10,1.1e-5,1;2;7,1;6;12"));
        assert_eq!(read_benchmark_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn covariance_round_trip() {
        let g0 = Matrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 1.0]);
        let g1 = Matrix::from_row_slice(2, 2, &[0.5, 0.3, 0.1, 0.4]);
        let c = CovarianceMatrixFunction::new(vec![g0, g1]).unwrap();
        let mut buf = Vec::new();
        write_covariance_csv(&mut buf, &c).unwrap();
        assert_eq!(read_covariance_csv(buf.as_slice()).unwrap(), c);

        let mut buf = Vec::new();
        write_ensemble_covariance_csv(&mut buf, c.mats(), &[Matrix::identity(2)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("0,0,1,0.2,0.0,0.2"));
    }
}
