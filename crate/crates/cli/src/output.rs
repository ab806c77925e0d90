//! Artifact files: CSV tables, the manifest and optional SVG plots.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use lambda_wqed_core::analysis::BandReport;
use lambda_wqed_core::VERSION;

use crate::config::detuning_tag;
use crate::plot;
use crate::run::{LatticeResult, RunError, ScenarioResult};

/// Shortest string that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn transmission_csv(l: &LatticeResult) -> Vec<u8> {
    let s = &l.series;
    let rows = (0..s.len()).map(|i| {
        vec![
            fmt_f64(s.detunings[i]),
            fmt_f64(s.amplitude[i].re),
            fmt_f64(s.amplitude[i].im),
            fmt_f64(s.transmission[i]),
            fmt_f64(s.chi[i].re),
            fmt_f64(s.chi[i].im),
        ]
    });
    csv_bytes(&["delta_omega", "re_t", "im_t", "T", "re_chi", "im_chi"], rows)
}

pub fn susceptibility_csv(l: &LatticeResult) -> Vec<u8> {
    let s = &l.series;
    let rows = (0..s.len()).map(|i| vec![fmt_f64(s.detunings[i]), fmt_f64(s.chi[i].re), fmt_f64(s.chi[i].im)]);
    csv_bytes(&["delta_omega", "re_chi", "im_chi"], rows)
}

/// One row per window, then one row per width (`w`, `w_prime`, `w1`, `w2`, `w3`) with `lo`/`hi` left empty.
pub fn bands_csv(r: &BandReport) -> Vec<u8> {
    let mut rows: Vec<Vec<String>> = r
        .windows
        .iter()
        .map(|w| vec![w.kind.name().into(), fmt_f64(w.lo), fmt_f64(w.hi), fmt_f64(w.width()), w.touches_edge.to_string()])
        .collect();
    for (name, v) in [("w", r.w), ("w_prime", r.w_prime), ("w1", r.w1), ("w2", r.w2), ("w3", r.w3)] {
        rows.push(vec![name.into(), String::new(), String::new(), fmt_opt(v), String::new()]);
    }
    csv_bytes(&["kind", "lo", "hi", "width", "touches_edge"], rows)
}

pub fn inelastic_csv(s: &lambda_wqed_core::two_photon::TwoPhotonSpectrum) -> Vec<u8> {
    let k = fmt_f64(s.input_detuning);
    let e = fmt_f64(s.elastic_coefficient);
    let rows = s
        .output_grid
        .iter()
        .zip(&s.intensity)
        .map(|(&nu, &i)| vec![k.clone(), fmt_f64(nu), fmt_f64(i), e.clone()]);
    csv_bytes(&["input_detuning", "nu", "intensity", "elastic_T4"], rows)
}

pub fn h1_csv(l: &LatticeResult) -> Vec<u8> {
    let m = &l.h1.matrix;
    let rows = (0..m.nrows()).flat_map(|i| {
        (0..m.ncols()).map(move |j| vec![i.to_string(), j.to_string(), fmt_f64(m[(i, j)].re), fmt_f64(m[(i, j)].im)])
    });
    csv_bytes(&["row", "col", "re", "im"], rows)
}

pub fn table1_csv(rows: &[lambda_wqed_core::analysis::Table1Row]) -> Vec<u8> {
    let rows = rows.iter().map(|r| vec![fmt_f64(r.j1), fmt_f64(r.j2), fmt_opt(r.w_prime), fmt_opt(r.w)]);
    csv_bytes(&["j1", "j2", "w_prime", "w"], rows)
}

/// Flat `key = value` record of the resolved configuration and the run's summary numbers.
pub fn manifest(result: &ScenarioResult) -> String {
    let c = &result.config;
    let p = &c.params;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    kv("version", VERSION.into());
    kv("preset", c.preset.clone().unwrap_or_default());
    for (i, n) in c.notes.iter().enumerate() {
        kv(&format!("note.{i}"), n.clone());
    }
    for (k, v) in [
        ("gamma_1d", p.gamma_1d),
        ("gamma_e", p.gamma_e),
        ("omega_c", p.omega_c),
        ("delta_c", p.delta_c),
        ("j1", p.j1),
        ("j2", p.j2),
        ("k0d", p.k0d),
        ("a_over_d", p.a_over_d),
    ] {
        kv(&format!("params.{k}"), fmt_f64(v));
    }
    kv("grid.min", fmt_f64(c.grid.min));
    kv("grid.max", fmt_f64(c.grid.max));
    kv("grid.points", c.grid.points.to_string());
    kv("thresholds.t_low", fmt_f64(c.thresholds.t_low));
    kv("thresholds.t_high", fmt_f64(c.thresholds.t_high));
    kv("inelastic.inputs", c.inelastic_inputs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(","));
    kv("inelastic.points", c.inelastic_points.to_string());
    kv("inelastic.half_span", fmt_f64(c.inelastic_half_span));
    for l in &result.lattices {
        let label = l.label();
        kv(&format!("lattice.{label}.geometry"), l.spec.geometry.name().into());
        kv(&format!("lattice.{label}.m_cells"), l.config.m_cells.to_string());
        kv(&format!("lattice.{label}.n_per_cell"), l.config.n_per_cell.to_string());
        kv(&format!("lattice.{label}.atoms"), l.spec.n_atoms().to_string());
        kv(&format!("lattice.{label}.w"), fmt_opt(l.bands.w));
        kv(&format!("lattice.{label}.w_prime"), fmt_opt(l.bands.w_prime));
        for ine in &l.inelastic {
            let tag = detuning_tag(ine.spectrum.input_detuning);
            let peaks = ine.peaks.iter().map(|pk| fmt_f64(pk.nu)).collect::<Vec<_>>().join(",");
            kv(&format!("lattice.{label}.inelastic.{tag}.max_intensity"), fmt_f64(ine.spectrum.max_intensity()));
            kv(&format!("lattice.{label}.inelastic.{tag}.peaks"), peaks);
        }
    }
    if let Some(t) = &c.table1 {
        kv("table1.m_cells", t.m_cells.to_string());
        kv("table1.j2", t.j2.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(","));
    }
    kv("diagnostics", result.warnings.len().to_string());
    for (i, w) in result.warnings.iter().enumerate() {
        kv(&format!("diagnostic.{i}"), w.to_string());
    }
    out
}

/// Every artifact as (relative path, contents), in a fixed order.
pub fn artifacts(result: &ScenarioResult) -> Vec<(PathBuf, Vec<u8>)> {
    let plots = result.config.plots;
    let mut files = Vec::new();
    for l in &result.lattices {
        let dir = PathBuf::from(l.label());
        files.push((dir.join("transmission.csv"), transmission_csv(l)));
        files.push((dir.join("susceptibility.csv"), susceptibility_csv(l)));
        files.push((dir.join("bands.csv"), bands_csv(&l.bands)));
        for ine in &l.inelastic {
            let name = format!("inelastic_{}", detuning_tag(ine.spectrum.input_detuning));
            files.push((dir.join(format!("{name}.csv")), inelastic_csv(&ine.spectrum)));
            if plots {
                let svg = plot::line_chart(&format!("{} inelastic, input {}", l.label(), ine.spectrum.input_detuning), "nu", "intensity", &ine.spectrum.output_grid, &ine.spectrum.intensity);
                files.push((dir.join(format!("{name}.svg")), svg.into_bytes()));
            }
        }
        if result.config.dump_h1 {
            files.push((dir.join("h1.csv"), h1_csv(l)));
        }
        if plots {
            let s = &l.series;
            let re: Vec<f64> = s.chi.iter().map(|c| c.re).collect();
            files.push((dir.join("transmission.svg"), plot::line_chart(&format!("{} transmission", l.label()), "delta_omega", "T", &s.detunings, &s.transmission).into_bytes()));
            files.push((dir.join("susceptibility.svg"), plot::line_chart(&format!("{} susceptibility", l.label()), "delta_omega", "re chi", &s.detunings, &re).into_bytes()));
        }
    }
    if let Some(rows) = &result.table1 {
        files.push((PathBuf::from("table1.csv"), table1_csv(rows)));
    }
    files.push((PathBuf::from("manifest.txt"), manifest(result).into_bytes()));
    files
}

/// Write all artifacts; on any failure remove whatever this call created.
pub fn write_all(result: &ScenarioResult, out_dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let files = artifacts(result);
    let mut created_dirs: Vec<PathBuf> = Vec::new();
    let mut written: Vec<PathBuf> = Vec::new();
    let outcome = (|| -> Result<(), RunError> {
        for (rel, bytes) in &files {
            let path = out_dir.join(rel);
            let parent = path.parent().unwrap_or(out_dir).to_path_buf();
            let mut missing = Vec::new();
            let mut p = parent.as_path();
            while !p.exists() {
                missing.push(p.to_path_buf());
                match p.parent() {
                    Some(q) if !q.as_os_str().is_empty() => p = q,
                    _ => break,
                }
            }
            fs::create_dir_all(&parent).map_err(|source| RunError::Io { path: parent.clone(), source })?;
            created_dirs.extend(missing);
            let mut f = fs::File::create(&path).map_err(|source| RunError::Io { path: path.clone(), source })?;
            written.push(path.clone());
            f.write_all(bytes).map_err(|source| RunError::Io { path: path.clone(), source })?;
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        for f in written.iter().rev() {
            let _ = fs::remove_file(f);
        }
        created_dirs.sort_by_key(|d| std::cmp::Reverse(d.components().count()));
        for d in &created_dirs {
            let _ = fs::remove_dir(d);
        }
        return Err(e);
    }
    Ok(written)
}
