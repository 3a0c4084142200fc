//! CSV and JSON writers. Numbers are written with 17 significant digits so
//! every file parses back to the exact doubles, and nothing time- or
//! host-dependent is recorded, so identical runs give identical bytes.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use congestion_core::{DiagnosticsRecord, RunConfig, RunResult, Snapshot};
use serde::Serialize;

use crate::error::{SimError, SimResult};

pub const SNAPSHOT_HEADER: [&str; 6] = ["x", "rho", "u", "rho_star", "pi", "Z"];
pub const DIAGNOSTICS_HEADER: [&str; 9] = [
    "time",
    "total_mass",
    "total_energy",
    "max_Z",
    "rho_star_min",
    "rho_star_max",
    "newton_iterations",
    "max_wave_speed",
    "cfl_ok",
];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `snapshot_<index>_t<time>.csv`; the index keeps names unique and sorted.
pub fn snapshot_file_name(index: usize, time: f64) -> String {
    format!("snapshot_{index:03}_t{time:.6}.csv")
}

/// `1e-2`, `2.5e-3`: shortest form that parses back to `epsilon`.
pub fn epsilon_label(epsilon: f64) -> String {
    format!("{epsilon:e}")
}

fn create(path: &Path) -> SimResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| SimError::Write {
            path: dir.to_owned(),
            source,
        })?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| SimError::Write {
            path: path.to_owned(),
            source,
        })
}

fn csv_writer(path: &Path) -> SimResult<csv::Writer<BufWriter<File>>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create(path)?))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> SimError + '_ {
    move |source| SimError::Csv {
        path: path.to_owned(),
        source,
    }
}

fn finish(mut w: csv::Writer<BufWriter<File>>, path: &Path) -> SimResult<()> {
    w.flush().map_err(|source| SimError::Write {
        path: path.to_owned(),
        source,
    })
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> SimResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| SimError::Json {
        path: path.to_owned(),
        source,
    })?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|source| SimError::Write {
            path: path.to_owned(),
            source,
        })
}

#[derive(Serialize)]
struct SnapshotSidecar<'a> {
    code_version: &'static str,
    core_version: &'static str,
    csv: &'a str,
    time: f64,
    config: &'a RunConfig,
}

/// Writes `path` as CSV (`x,rho,u,rho_star,pi,Z`, one row per cell) and a
/// JSON sidecar next to it with the run configuration.
pub fn write_snapshot(snapshot: &Snapshot, config: &RunConfig, path: &Path) -> SimResult<()> {
    let n = config.grid.n_cells;
    let lens = [
        snapshot.rho.len(),
        snapshot.velocity.len(),
        snapshot.rho_star.len(),
        snapshot.pi.len(),
    ];
    if lens.iter().any(|l| *l != n) {
        return Err(SimError::Format {
            path: path.to_owned(),
            reason: format!("snapshot fields have lengths {lens:?}, grid has {n} cells"),
        });
    }
    let mut w = csv_writer(path)?;
    w.write_record(SNAPSHOT_HEADER).map_err(csv_err(path))?;
    let z = snapshot.density_fraction();
    for (i, zi) in z.iter().enumerate() {
        let row = [
            config.grid.cell_center(i),
            snapshot.rho[i],
            snapshot.velocity[i],
            snapshot.rho_star[i],
            snapshot.pi[i],
            *zi,
        ];
        w.write_record(row.iter().map(|v| fmt_f64(*v)))
            .map_err(csv_err(path))?;
    }
    finish(w, path)?;

    let sidecar = SnapshotSidecar {
        code_version: crate::VERSION,
        core_version: congestion_core::VERSION,
        csv: path
            .file_name()
            .and_then(|s| s.to_str())
            .unwrap_or_default(),
        time: snapshot.time,
        config,
    };
    write_json(&sidecar, &path.with_extension("json"))
}

pub fn write_diagnostics(records: &[DiagnosticsRecord], path: &Path) -> SimResult<()> {
    let mut w = csv_writer(path)?;
    w.write_record(DIAGNOSTICS_HEADER).map_err(csv_err(path))?;
    for d in records {
        let row = [
            fmt_f64(d.time),
            fmt_f64(d.total_mass),
            fmt_f64(d.total_energy),
            fmt_f64(d.max_z),
            fmt_f64(d.rho_star_min),
            fmt_f64(d.rho_star_max),
            d.newton_iterations.to_string(),
            fmt_f64(d.max_wave_speed),
            u8::from(d.cfl_ok).to_string(),
        ];
        w.write_record(&row).map_err(csv_err(path))?;
    }
    finish(w, path)
}

/// Columns of a snapshot CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SnapshotTable {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub rho_star: Vec<f64>,
    pub pi: Vec<f64>,
    pub z: Vec<f64>,
}

fn read_table(path: &Path, header: &[&str]) -> SimResult<Vec<Vec<String>>> {
    let file = File::open(path).map_err(|source| SimError::Read {
        path: path.to_owned(),
        source,
    })?;
    let mut r = csv::Reader::from_reader(file);
    let found = r.headers().map_err(csv_err(path))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(SimError::Format {
            path: path.to_owned(),
            reason: format!("unexpected header {:?}", found.iter().collect::<Vec<_>>()),
        });
    }
    r.records()
        .map(|rec| {
            rec.map(|rec| rec.iter().map(str::to_owned).collect())
                .map_err(csv_err(path))
        })
        .collect()
}

fn parse_f64(path: &Path, s: &str) -> SimResult<f64> {
    s.parse().map_err(|_| SimError::Format {
        path: path.to_owned(),
        reason: format!("'{s}' is not a number"),
    })
}

pub fn read_snapshot(path: &Path) -> SimResult<SnapshotTable> {
    let mut t = SnapshotTable::default();
    for row in read_table(path, &SNAPSHOT_HEADER)? {
        let v = row
            .iter()
            .map(|s| parse_f64(path, s))
            .collect::<SimResult<Vec<f64>>>()?;
        t.x.push(v[0]);
        t.rho.push(v[1]);
        t.u.push(v[2]);
        t.rho_star.push(v[3]);
        t.pi.push(v[4]);
        t.z.push(v[5]);
    }
    Ok(t)
}

pub fn read_diagnostics(path: &Path) -> SimResult<Vec<DiagnosticsRecord>> {
    read_table(path, &DIAGNOSTICS_HEADER)?
        .iter()
        .map(|row| {
            let f = |i: usize| parse_f64(path, &row[i]);
            let int = |i: usize| {
                row[i].parse::<usize>().map_err(|_| SimError::Format {
                    path: path.to_owned(),
                    reason: format!("'{}' is not a count", row[i]),
                })
            };
            Ok(DiagnosticsRecord {
                time: f(0)?,
                total_mass: f(1)?,
                total_energy: f(2)?,
                max_z: f(3)?,
                rho_star_min: f(4)?,
                rho_star_max: f(5)?,
                newton_iterations: int(6)?,
                max_wave_speed: f(7)?,
                cfl_ok: int(8)? != 0,
            })
        })
        .collect()
}

/// Writes every snapshot of `result` into `dir`; returns the file names.
pub fn write_snapshots(
    result: &RunResult,
    config: &RunConfig,
    dir: &Path,
) -> SimResult<Vec<PathBuf>> {
    result
        .snapshots
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let name = PathBuf::from(snapshot_file_name(k, s.time));
            write_snapshot(s, config, &dir.join(&name))?;
            Ok(name)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 8.1e-3, f64::MAX, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(0.7), "6.9999999999999996e-1");
        assert!(fmt_f64(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    #[test]
    fn file_names() {
        assert_eq!(snapshot_file_name(2, 0.05), "snapshot_002_t0.050000.csv");
        assert_eq!(epsilon_label(1e-2), "1e-2");
        assert_eq!(epsilon_label(2.5e-3), "2.5e-3");
    }
}
