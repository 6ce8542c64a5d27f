use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use dqdot::capnet::CapacitanceNetwork;
use dqdot::extract::{extract_from_map, format_record, format_report, Extraction, RECORD_HEADER};
use dqdot::honeycomb::{
    add_gaussian_noise, cell_dimensions, conductance_map, coulomb_diamonds, parse_map, regime_sweep,
    to_pgm, write_map, ConductanceMap, Resolution, Window,
};

use crate::output::{ensure_dir, invalid, write_atomic, CliResult, Context};
use crate::{DiamondArgs, ExtractArgs, RoundtripArgs, SimArgs, SweepArgs};

const MIN_RES: usize = 16;

fn read(path: &Path, stage: &str) -> CliResult<String> {
    fs::read_to_string(path).context(&format!("{stage}: reading {}", path.display()))
}

fn load_network(path: &Path) -> CliResult<CapacitanceNetwork> {
    let text = read(path, "network")?;
    CapacitanceNetwork::parse(&text).context(&format!("network: {}", path.display()))
}

/// The output path must be a directory or not exist yet.
fn check_out_dir(dir: &Path) -> CliResult<()> {
    if dir.exists() && !dir.is_dir() {
        return Err(invalid(format!("output: {} is not a directory", dir.display())));
    }
    Ok(())
}

pub struct SimOutput {
    net: CapacitanceNetwork,
    map: ConductanceMap,
}

fn synthesize(a: &SimArgs) -> CliResult<SimOutput> {
    check_out_dir(&a.out)?;
    let net = load_network(&a.network)?;
    if a.res < MIN_RES {
        return Err(invalid(format!("simulate: resolution must be at least {MIN_RES}, got {}", a.res)));
    }
    if !a.bias.is_finite() {
        return Err(invalid("simulate: bias must be finite"));
    }
    if !a.noise.is_finite() || a.noise < 0.0 {
        return Err(invalid(format!("simulate: noise must be non-negative, got {}", a.noise)));
    }
    let window = match (&a.window, a.cells) {
        (Some(w), _) => Window::new((w[0], w[1]), (w[2], w[3])).context("simulate: window")?,
        (None, Some(n)) => Window::cells(&net, n).context("simulate: cells")?,
        (None, None) => unreachable!("clap requires --window or --cells"),
    };
    let res = Resolution::square(a.res).context("simulate: resolution")?;
    let mut map = conductance_map(&net, &window, res, a.bias, 1.0, 1.0).context("simulate")?;
    if a.noise > 0.0 {
        add_gaussian_noise(&mut map, a.noise, a.seed).context("simulate: noise")?;
    }
    Ok(SimOutput { net, map })
}

/// Writes map, graymap and the analytic geometry sidecar.
pub fn simulate(a: &SimArgs) -> CliResult<SimOutput> {
    let sim = synthesize(a)?;
    let geometry = cell_dimensions(&sim.net, a.bias);
    let files = [
        ("map.dqdmap", write_map(&sim.map)),
        ("map.pgm", to_pgm(&sim.map)),
        ("geometry.txt", geometry.to_string()),
    ];
    ensure_dir(&a.out)?;
    for (name, body) in &files {
        write_atomic(&a.out, name, body)?;
    }
    println!(
        "wrote {}×{} map to {}",
        sim.map.cols(),
        sim.map.rows(),
        a.out.display()
    );
    Ok(sim)
}

fn write_reports(dir: &Path, x: &Extraction) -> CliResult<()> {
    let report = format_report(&x.params, Some(x));
    let record = format!("{RECORD_HEADER}\n{}\n", format_record(&x.params));
    ensure_dir(dir)?;
    write_atomic(dir, "report.txt", &report)?;
    write_atomic(dir, "report.csv", &record)
}

pub fn extract(a: &ExtractArgs) -> CliResult<()> {
    check_out_dir(&a.out)?;
    let text = read(&a.map, "map")?;
    let map = parse_map(&text).context(&format!("map: {}", a.map.display()))?;
    let x = extract_from_map(&map).context("extract")?;
    write_reports(&a.out, &x)?;
    print!("{}", format_report(&x.params, None));
    Ok(())
}

pub fn roundtrip(a: &RoundtripArgs) -> CliResult<()> {
    if !a.tolerance.is_finite() || a.tolerance <= 0.0 {
        return Err(invalid(format!("roundtrip: tolerance must be positive, got {}", a.tolerance)));
    }
    let sim = simulate(&a.sim)?;
    let x = extract_from_map(&sim.map).context("extract")?;
    write_reports(&a.sim.out, &x)?;

    let net = &sim.net;
    let p = &x.params;
    let checks = [
        ("c_gate_left_aF", net.c_gate_left(), p.c_gate_left),
        ("c_gate_right_aF", net.c_gate_right(), p.c_gate_right),
        ("c_sigma_left_aF", net.c_sigma_left(), p.c_sigma_left),
        ("c_sigma_right_aF", net.c_sigma_right(), p.c_sigma_right),
        ("c_m_from_left_aF", net.c_m(), p.c_m_from_left),
        ("c_m_from_right_aF", net.c_m(), p.c_m_from_right),
    ];
    let mut failed = Vec::new();
    for (name, want, got) in checks {
        let rel = if want == 0.0 { got.abs() } else { (got - want).abs() / want };
        let ok = rel <= a.tolerance;
        println!("{name}\t{want}\t{got}\t{rel:.5}\t{}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(crate::output::Failure {
            code: 3,
            message: format!(
                "roundtrip: {} outside tolerance {}",
                failed.join(", "),
                a.tolerance
            ),
        })
    }
}

pub fn sweep(a: &SweepArgs) -> CliResult<()> {
    if let Some(dir) = &a.out {
        check_out_dir(dir)?;
    }
    let net = load_network(&a.network)?;
    let mut rows: Vec<(String, Result<f64, String>)> = Vec::new();
    if let Some(cms) = &a.cm {
        rows.extend(cms.iter().map(|&c| (c.to_string(), Ok(c))));
    }
    if let Some(ecms) = &a.ecm {
        rows.extend(ecms.iter().map(|&e| {
            let c = net.c_m_for_coupling_energy(e).map_err(|err| err.to_string());
            (format!("{e} meV"), c)
        }));
    }
    let valid: Vec<f64> = rows.iter().filter_map(|(_, c)| c.as_ref().ok().copied()).collect();
    let mut results = regime_sweep(&net, &valid).into_iter();

    let mut table = String::from(
        "input\tc_m_aF\tfractional_splitting\tregime\te_c_m_meV\tdv_gl_m_V\tdv_gr_m_V\tphysical\n",
    );
    let mut errors = 0;
    for (input, c) in &rows {
        let row = match c {
            Ok(_) => results.next().expect("one result per valid row").map_err(|e| e.to_string()),
            Err(e) => Err(e.clone()),
        };
        match row {
            Ok(r) => {
                let _ = writeln!(
                    table,
                    "{input}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.c_m, r.fractional_splitting, r.label, r.e_c_m, r.dv_gl_m, r.dv_gr_m, r.physical
                );
            }
            Err(e) => {
                errors += 1;
                let _ = writeln!(table, "{input}\terror: {e}");
            }
        }
    }
    print!("{table}");
    if let Some(dir) = &a.out {
        ensure_dir(dir)?;
        write_atomic(dir, "sweep.tsv", &table)?;
    }
    if errors > 0 {
        return Err(invalid(format!("sweep: {errors} of {} rows invalid", rows.len())));
    }
    Ok(())
}

pub fn diamonds(a: &DiamondArgs) -> CliResult<()> {
    if let Some(dir) = &a.out {
        check_out_dir(dir)?;
    }
    let set = coulomb_diamonds(a.c_gate, a.c_source, a.c_sigma, a.count).context("diamonds")?;
    let mut text = String::new();
    let _ = writeln!(text, "# {}", set.convention);
    let _ = writeln!(text, "# gate_period_V = {}", set.gate_period);
    let _ = writeln!(text, "# half_height_V = {}", set.half_height);
    let _ = writeln!(text, "# addition_energy_meV = {}", set.addition_energy);
    let _ = writeln!(text, "# lever_arm = {}", set.lever_arm);
    let _ = writeln!(text, "# positive_slope = {}", set.positive_slope);
    match set.negative_slope {
        Some(s) => {
            let _ = writeln!(text, "# negative_slope = {s}");
        }
        None => {
            let _ = writeln!(text, "# negative_slope = vertical");
        }
    }
    text.push_str("n\tleft_V\ttop_V\tright_V\tbottom_V\n");
    for d in &set.diamonds {
        let [l, t, r, b] = d.vertices;
        let _ = writeln!(
            text,
            "{}\t{},{}\t{},{}\t{},{}\t{},{}",
            d.n, l.0, l.1, t.0, t.1, r.0, r.1, b.0, b.1
        );
    }
    print!("{text}");
    if let Some(dir) = &a.out {
        ensure_dir(dir)?;
        write_atomic(dir, "diamonds.tsv", &text)?;
    }
    Ok(())
}
