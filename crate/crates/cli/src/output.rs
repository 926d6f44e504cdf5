use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dualmon::io::Table;

use crate::config::{Format, RunConfig};
use crate::Failure;

/// How a table should be drawn by the generated gnuplot script.
#[derive(Debug, Clone, Copy)]
pub enum Plot<'a> {
    /// Colour map of column `z` over columns `x`, `y` (1-based).
    Map { x: usize, y: usize, z: usize, title: &'a str },
    /// Curve of column `y` against column `x`.
    Line { x: usize, y: usize, title: &'a str },
}

/// Writes `name.csv` or `name.json` and, for CSV, `name.gp`.
pub fn emit(config: &RunConfig, name: &str, table: &Table, plots: &[Plot]) -> Result<PathBuf, Failure> {
    let path = config.out.join(format!("{name}.{}", config.format.extension()));
    let mut w = BufWriter::new(File::create(&path)?);
    match config.format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => table.write_json(&mut w)?,
    }
    w.flush()?;
    if config.format == Format::Csv && !plots.is_empty() {
        write_gnuplot(&config.out, name, table, plots)?;
    }
    Ok(path)
}

fn quoted(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

fn write_gnuplot(dir: &Path, name: &str, table: &Table, plots: &[Plot]) -> Result<(), Failure> {
    let mut s = String::new();
    let data = quoted(&format!("{name}.csv"));
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile commentschars '#'\n");
    s.push_str("set terminal pngcairo size 900,700 noenhanced\n");
    let col = |i: usize| table.columns.get(i - 1).map(String::as_str).unwrap_or("?");
    for (n, plot) in plots.iter().enumerate() {
        let png = quoted(&if plots.len() == 1 {
            format!("{name}.png")
        } else {
            format!("{name}_{n}.png")
        });
        match *plot {
            Plot::Map { x, y, z, title } => {
                s.push_str(&format!("set output {png}\nset title {}\n", quoted(title)));
                s.push_str(&format!("set xlabel {}\nset ylabel {}\n", quoted(col(x)), quoted(col(y))));
                s.push_str("set view map\nunset key\n");
                s.push_str(&format!(
                    "splot {data} every ::1 using {x}:{y}:{z} with points pointtype 5 pointsize 0.6 palette\n"
                ));
            }
            Plot::Line { x, y, title } => {
                s.push_str(&format!("set output {png}\nset title {}\n", quoted(title)));
                s.push_str(&format!("set xlabel {}\nset ylabel {}\n", quoted(col(x)), quoted(col(y))));
                s.push_str(&format!("plot {data} every ::1 using {x}:{y} with lines notitle\n"));
            }
        }
    }
    std::fs::write(dir.join(format!("{name}.gp")), s)?;
    Ok(())
}
