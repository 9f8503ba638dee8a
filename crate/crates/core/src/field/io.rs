//! CSV dumps: header `rho,theta,<columns>`, rows in storage order (ρ outer, θ inner).

use std::io::{Read, Write};

use super::fields::{ComplexField, OneFormField, ScalarField};
use super::grid::LogPolarGrid;
use crate::error::{Error, Result};

fn write_rows<W: Write>(
    out: W,
    grid: &LogPolarGrid,
    columns: &[&str],
    row: impl Fn(usize) -> Vec<f64>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["rho", "theta"];
    header.extend_from_slice(columns);
    w.write_record(&header)?;
    for (k, (i, j)) in grid.nodes().enumerate() {
        let mut rec = vec![grid.rho(i).to_string(), grid.theta(j).to_string()];
        rec.extend(row(k).into_iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

impl ScalarField {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(out, self.grid(), &["value"], |k| vec![self.values()[k]])
    }

    /// Read a dump written by [`ScalarField::write_csv`] on the same grid.
    pub fn read_csv<R: Read>(grid: LogPolarGrid, input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["rho", "theta", "value"] {
            return Err(Error::Invalid(format!("unexpected header {headers:?}")));
        }
        let mut values = Vec::with_capacity(grid.len());
        for rec in rdr.records() {
            let rec = rec?;
            let v: f64 = rec[2]
                .parse()
                .map_err(|e| Error::Invalid(format!("bad value {:?}: {e}", &rec[2])))?;
            values.push(v);
        }
        ScalarField::new(grid, values)
    }
}

impl ComplexField {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(out, self.grid(), &["value_re", "value_im"], |k| {
            let v = self.values()[k];
            vec![v.re, v.im]
        })
    }
}

impl OneFormField {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(out, self.grid(), &["a_x", "a_y"], |k| {
            self.components()[k].to_vec()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_order() {
        let g = LogPolarGrid::new(0.0, 1.0, 4, 8).unwrap();
        let f = ScalarField::from_polar_fn(g, |rho, theta| rho + 10.0 * theta).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("rho,theta,value"));
        // second data row: same rho, next theta
        let second: Vec<f64> = lines
            .nth(1)
            .unwrap()
            .split(',')
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(second[0], 0.0);
        assert!((second[1] - g.d_theta()).abs() < 1e-15);
        let back = ScalarField::read_csv(g, buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn one_form_header() {
        let g = LogPolarGrid::new(0.0, 1.0, 4, 8).unwrap();
        let mut buf = Vec::new();
        OneFormField::zero(g).write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("rho,theta,a_x,a_y\n"));
    }
}
