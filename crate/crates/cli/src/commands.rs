use std::f64::consts::PI;

use dualmon::elementary::sweep;
use dualmon::fock::{band_grids, ho_zak_wavefunction};
use dualmon::io::{band_table, bias_scan_table, elementary_table, rate_table, trace_table, transition_table, Cell, Table};
use dualmon::open_system::eigenoperator_rates;
use dualmon::perturbation::band_energy_first_order;
use dualmon::spectroscopy::{bias_scan, transition_frequency, transition_map, transmission_trace};
use dualmon::{Environment, Point};
use serde_json::json;

use crate::config::{z_values, BiasArgs, Command, RunConfig, ThermalArgs, TransmissionArgs, ZakArgs};
use crate::output::{emit, Plot};
use crate::Failure;

pub fn dispatch(config: &RunConfig) -> Result<(), Failure> {
    match &config.command {
        Command::Elementary(_) => elementary(config),
        Command::Bands => bands(config),
        Command::Transmission(a) => transmission(config, a),
        Command::TransitionMap => transition(config),
        Command::ZakWavefunction(a) => zak(config, a),
        Command::BiasScan(a) => bias(config, a),
        Command::ThermalRates(a) => thermal(config, a),
    }
}

fn point(k: f64, phi: f64) -> Point {
    Point::new(k, phi).expect("validated in RunConfig")
}

fn elementary(config: &RunConfig) -> Result<(), Failure> {
    let noise = config.noise.expect("validated in RunConfig");
    let samples = sweep(&config.params, &noise, config.grid);
    let zero = samples.iter().filter(|s| s.gamma_vs_ground == 0.0).count();
    let table = elementary_table(&samples);
    let plots = [
        Plot::Map { x: 1, y: 2, z: 3, title: "E(k, phi)" },
        Plot::Map { x: 1, y: 2, z: 4, title: "dE/dk" },
        Plot::Map { x: 1, y: 2, z: 5, title: "dE/dphi" },
        Plot::Map { x: 1, y: 2, z: 6, title: "Gamma against (0, 0)" },
    ];
    let path = emit(config, "elementary", &table, &plots)?;
    println!("wrote {} ({} samples, {zero} with zero dephasing)", path.display(), samples.len());
    Ok(())
}

fn bands(config: &RunConfig) -> Result<(), Failure> {
    let params = &config.params;
    let grids = band_grids(params, &[0, 1], config.grid, config.truncation)?;
    let mut deviations = Vec::new();
    let mut table = Table::new(&["m", "k", "phi", "E", "E_first_order", "deviation"]);
    for g in &grids {
        let mut worst = 0.0f64;
        for i in 0..g.grid.nk {
            for j in 0..g.grid.nphi {
                let p = g.point(i, j);
                let e = g.at(i, j);
                let first = band_energy_first_order(params, g.band as u32, &p)?;
                let d = (e - first).abs();
                if d.is_finite() {
                    worst = worst.max(d);
                }
                table.push(vec![
                    Cell::Int(g.band as i64),
                    Cell::Real(g.k_samples[i]),
                    Cell::Real(g.phi_samples[j]),
                    Cell::Real(e),
                    Cell::Real(first),
                    Cell::Real(e - first),
                ]);
            }
        }
        deviations.push(json!({"band": g.band, "max_abs_deviation": worst, "in_units_of_e_j": worst / params.e_j()}));
        println!(
            "band {}: max |E - E_first_order| = {:.6} E_J, truncation drift {:.2e}, {} failed cells",
            g.band,
            worst / params.e_j(),
            g.max_drift,
            g.failures.len()
        );
    }
    let meta = band_table(&grids).metadata;
    for (k, v) in meta {
        table = table.with_meta(&k, v);
    }
    table = table.with_meta("deviation_summary", json!(deviations));
    let plots = [
        Plot::Map { x: 2, y: 3, z: 4, title: "E_m(k, phi)" },
        Plot::Map { x: 2, y: 3, z: 6, title: "E - E_first_order" },
    ];
    let path = emit(config, "bands", &table, &plots)?;
    println!("wrote {}", path.display());

    let failed: usize = grids.iter().map(|g| g.failures.len()).sum();
    if failed > 0 {
        return Err(Failure::Convergence(format!("{failed} band cells failed to diagonalise")));
    }
    if let Some(g) = grids.iter().find(|g| !g.converged) {
        return Err(Failure::Convergence(format!(
            "band {} drifts by {:.2e} between N = {} and N + 8",
            g.band, g.max_drift, g.truncation
        )));
    }
    Ok(())
}

fn transmission(config: &RunConfig, args: &TransmissionArgs) -> Result<(), Failure> {
    let params = &config.params;
    let wg = config.waveguide.expect("validated in RunConfig");
    let states = [(point(0.0, PI), "transmission_0_pi"), (point(0.0, 0.0), "transmission_0_0")];
    let split = transition_frequency(params, &states[1].0)? - transition_frequency(params, &states[0].0)?;
    let (lo, hi) = (split.min(0.0) - 8.0 * wg.gamma, split.max(0.0) + 8.0 * wg.gamma);
    let n = args.points;
    let detunings: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    for (p, name) in states {
        let trace = transmission_trace(params, &wg, &p, &detunings)?;
        let table = trace_table(&trace);
        let path = emit(config, name, &table, &[Plot::Line { x: 1, y: 2, title: name }])?;
        match trace.dip() {
            Some((d, t)) => println!("wrote {}: dip at detuning {d:.6} with T = {t:.4}", path.display()),
            None => println!("wrote {}", path.display()),
        }
    }
    Ok(())
}

fn transition(config: &RunConfig) -> Result<(), Failure> {
    let map = transition_map(&config.params, config.grid)?;
    let table = transition_table(&map);
    let path = emit(config, "transition_map", &table, &[Plot::Map { x: 1, y: 2, z: 3, title: "Omega10(k, phi)" }])?;
    let (hi, lo) = (map.argmax_cells(0.0), map.argmin_cells(0.0));
    println!(
        "wrote {}: {} maximal and {} minimal cells, resolution {:.4e}",
        path.display(),
        hi.len(),
        lo.len(),
        map.resolution()
    );
    Ok(())
}

fn zak(config: &RunConfig, args: &ZakArgs) -> Result<(), Failure> {
    let ks = config.grid.k_samples::<f64>();
    let phis = config.grid.phi_samples::<f64>();
    for (z, label) in z_values(args).into_iter().zip(&args.z_over_pi) {
        let mut table = Table::new(&["k", "phi", "re", "im", "abs"]).with_meta("z", json!(z));
        for &k in &ks {
            for &phi in &phis {
                let psi = ho_zak_wavefunction(z, &point(k, phi))?;
                table.push(vec![
                    Cell::Real(k),
                    Cell::Real(phi),
                    Cell::Real(psi.re),
                    Cell::Real(psi.im),
                    Cell::Real(psi.norm()),
                ]);
            }
        }
        let name = format!("zak_z{label}pi");
        let title = format!("|psi(k, phi)| at z = {label} pi");
        let path = emit(config, &name, &table, &[Plot::Map { x: 1, y: 2, z: 5, title: &title }])?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn bias(config: &RunConfig, args: &BiasArgs) -> Result<(), Failure> {
    let origin = point(args.k, args.phi);
    let scan = bias_scan(&config.params, &origin, config.grid, config.truncation)?;
    let w = config.params.oscillator_gap()?;
    let table = bias_scan_table(&scan).with_meta("truncation", json!(config.truncation));
    let path = emit(config, "bias_scan", &table, &[Plot::Map { x: 1, y: 2, z: 3, title: "E0(n_x, phi_x)" }])?;
    let rel = scan.max_deviation / w;
    println!("wrote {}: max deviation from shifted band {rel:.2e} hbar Omega", path.display());
    if !(rel <= args.tol) {
        return Err(Failure::Convergence(format!(
            "bias-shifted levels differ by {rel:.2e} hbar Omega, above {:.1e}",
            args.tol
        )));
    }
    Ok(())
}

fn thermal(config: &RunConfig, args: &ThermalArgs) -> Result<(), Failure> {
    let env = Environment::new(args.nu, args.kt)?;
    let p = point(args.k, args.phi);
    let rates = eigenoperator_rates(&config.params, &env, &p, 2, config.truncation)?;
    let table = rate_table(&rates)
        .with_meta("nu", json!(args.nu))
        .with_meta("kT", json!(args.kt))
        .with_meta("state", json!({"k": p.k(), "phi": p.phi()}))
        .with_meta("truncation", json!(config.truncation));
    let path = emit(config, "thermal_rates", &table, &[])?;
    println!("wrote {} ({} transitions)", path.display(), rates.len());
    Ok(())
}
