//! Grid evaluation and CSV emission.

use std::io::Write;

use gwsense_core::{differential_phase, signal_amplitude, Scenario};
use rayon::prelude::*;

use crate::config::{Axis, RunSpec};

pub const SCHEMA: &str = "gwsense-sweep v1";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub result: Result<Values, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Values {
    /// Requested components at the configured wave phase.
    pub components: Vec<f64>,
    pub catalog: Option<CatalogColumns>,
    /// Signal amplitude of the first requested component.
    pub phi_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogColumns {
    pub value: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub phi_s: f64,
}

/// Evaluates one scenario. Errors are stringified for the row.
pub fn evaluate(s: &Scenario, spec: &RunSpec) -> Result<Values, String> {
    let go = || -> gwsense_core::Result<Values> {
        let setup = s.setup()?.with_options(spec.engine);
        let phases = differential_phase(&setup)?;
        let components = spec.components.iter().map(|c| phases.get(*c)).collect();
        let phi_s = signal_amplitude(&setup, spec.components[0])?.phi_s;
        let catalog = match s.catalog_reference()? {
            None => None,
            Some((comp, amp)) => {
                let (c, si) = (s.phase0.cos(), s.phase0.sin());
                let value = amp.cos_coeff * c + amp.sin_coeff * si;
                let abs_residual = (phases.get(comp) - value).abs();
                Some(CatalogColumns {
                    value,
                    abs_residual,
                    rel_residual: abs_residual / value.abs(),
                    phi_s: amp.phi_s,
                })
            }
        };
        Ok(Values {
            components,
            catalog,
            phi_s,
        })
    };
    go().map_err(|e| e.to_string())
}

/// All grid rows in grid order.
pub fn run_sweep(spec: &RunSpec) -> Vec<Row> {
    let Some(sweep) = &spec.sweep else {
        return vec![Row {
            x: f64::NAN,
            result: evaluate(&spec.scenario, spec),
        }];
    };
    sweep
        .grid()
        .into_par_iter()
        .map(|x| Row {
            x,
            result: evaluate(&sweep.axis.apply(&spec.scenario, x), spec),
        })
        .collect()
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn header_comment(spec: &RunSpec) -> String {
    let s = &spec.scenario;
    let catalog = s
        .catalog_reference()
        .ok()
        .flatten()
        .map_or("none", |(c, _)| c.name());
    format!(
        "# {SCHEMA} sensor={} sequence={} phi_s_of={} catalog_of={catalog}",
        s.sensor,
        s.sequence,
        spec.components[0].name()
    )
}

fn column_names(spec: &RunSpec) -> Vec<String> {
    let axis = spec.sweep.as_ref().map_or("point", |w| w.axis.name());
    let mut cols = vec![axis.to_string()];
    cols.extend(spec.components.iter().map(|c| c.name().to_string()));
    cols.extend(
        ["catalog", "abs_residual", "rel_residual", "phi_s", "phi_s_catalog", "error"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols
}

/// Writes the versioned comment line, the column header and one record per row.
pub fn write_csv<W: Write>(spec: &RunSpec, rows: &[Row], out: W) -> csv::Result<()> {
    let mut out = out;
    writeln!(out, "{}", header_comment(spec))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(column_names(spec))?;
    let width = spec.components.len();
    for (i, row) in rows.iter().enumerate() {
        let x = match spec.sweep.as_ref().map(|w| w.axis) {
            None => i.to_string(),
            Some(Axis::N) => (row.x as usize).to_string(),
            Some(_) => num(row.x),
        };
        let mut rec = vec![x];
        match &row.result {
            Ok(v) => {
                rec.extend(v.components.iter().map(|c| num(*c)));
                match v.catalog {
                    Some(c) => rec.extend([num(c.value), num(c.abs_residual), num(c.rel_residual)]),
                    None => rec.extend([String::new(), String::new(), String::new()]),
                }
                rec.push(num(v.phi_s));
                rec.push(v.catalog.map_or_else(String::new, |c| num(c.phi_s)));
                rec.push(String::new());
            }
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), width + 5));
                rec.push(e.clone());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_str;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let digits = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 17);
        }
    }

    #[test]
    fn row_errors_do_not_stop_the_sweep() {
        // omega_t_ratio = 1 puts the trap on resonance
        let spec = parse_str(
            "[scenario]\nsensor = \"clock_stationary\"\nsequence = \"echo\"\n\
             [sweep]\naxis = \"omega_t_ratio\"\nstart = 0.5\nstop = 1.5\npoints = 3\n",
        )
        .unwrap();
        let rows = run_sweep(&spec);
        assert_eq!(rows.len(), 3);
        assert!(rows[0].result.is_ok() && rows[2].result.is_ok());
        assert!(rows[1].result.as_ref().unwrap_err().contains("resonant"));
        let mut buf = Vec::new();
        write_csv(&spec, &rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(3).unwrap();
        assert!(line.starts_with("1.0000000000000000e0,,"), "{line}");
    }
}
