//! The three report-producing commands. Each returns the rendered report
//! text plus its exit code; `main` handles where the bytes go.
//!
//! Reports are deterministic: no timestamps, stable key order (struct field
//! order for JSON, fixed column order for CSV), and every effective option
//! echoed under `config` so a published number can be reproduced from the
//! report alone.

use serde::Serialize;

use hylie_core::localhy::{
    estimate_local_constant, LocalParams, Profile, ProfileKind, SymmetrizedProfile,
};
use hylie_core::sharpness::{
    build_translation_set, character_experiment, fit_growth_exponent,
    growth_certificate, CharacterReport, GrowthCertificate,
};
use hylie_core::spectral::{
    central_fourier_from_numerator, plancherel_check, random_character_poly,
};
use hylie_core::torus::TorusGrid;
use hylie_core::{Error, Result, RootSystem, WeylGroup};

use crate::config::{validate_grid, Options, OutputFormat};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CONVENTION: &str = "weights in fundamental-weight coordinates; long roots have squared length 2; Haar and torus measures normalized to total mass 1";

/// Rendered report plus process exit code; `note` goes to stderr.
pub struct CmdOutput {
    pub text: String,
    pub exit: i32,
    pub note: Option<String>,
}

#[derive(Serialize)]
struct Envelope<C: Serialize, R: Serialize> {
    version: &'static str,
    convention: &'static str,
    command: &'static str,
    config: C,
    report: R,
}

fn render_json<C: Serialize, R: Serialize>(env: &Envelope<C, R>) -> Result<String> {
    let mut text = serde_json::to_string_pretty(env)
        .map_err(|e| Error::Internal(format!("json: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Provenance comment lines shared by every CSV report: version, convention,
/// command, then one `# key=value` line per effective config entry.
fn csv_provenance<C: Serialize>(command: &str, config: &C) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("# version={VERSION}\n"));
    out.push_str(&format!("# convention={CONVENTION}\n"));
    out.push_str(&format!("# command={command}\n"));
    let value = serde_json::to_value(config)
        .map_err(|e| Error::Internal(format!("json: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Internal("config echo must be an object".into()))?;
    for (k, v) in obj {
        match v {
            serde_json::Value::String(s) => out.push_str(&format!("# {k}={s}\n")),
            other => out.push_str(&format!("# {k}={other}\n")),
        }
    }
    Ok(out)
}

fn build_group(opts: &Options) -> Result<(RootSystem, WeylGroup)> {
    let label = opts.require_group()?;
    let spec = label.parse()?;
    let rs = RootSystem::new(spec)?;
    let wg = WeylGroup::new(&rs)?;
    Ok((rs, wg))
}

fn check_pq(p: Option<f64>, q: Option<f64>) -> Result<()> {
    if let (Some(p), Some(q)) = (p, q) {
        if !(1.0 <= p && p < q && q <= 2.0) {
            return Err(Error::Domain(format!(
                "exponents must satisfy 1 <= p < q <= 2, got p = {p}, q = {q}"
            )));
        }
    }
    Ok(())
}

fn positive_sizes(list: &[i64], what: &str) -> Result<Vec<usize>> {
    list.iter()
        .map(|&n| {
            usize::try_from(n)
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Domain(format!("{what} must be positive, got {n}")))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// plancherel
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PlancherelConfig {
    group: String,
    grid: usize,
    cutoff: f64,
    trials: usize,
    seed: u64,
    terms: usize,
    max_coord: i64,
    tolerance: f64,
}

#[derive(Serialize)]
struct PlancherelTrial {
    trial: usize,
    cutoff: f64,
    spectral_l2: f64,
    torus_l2: f64,
    residual: f64,
}

#[derive(Serialize)]
struct PlancherelSummary {
    trials: Vec<PlancherelTrial>,
    worst_trial: usize,
    worst_residual: f64,
    pass: bool,
}

pub fn cmd_plancherel(opts: &Options) -> Result<CmdOutput> {
    let (rs, wg) = build_group(opts)?;
    check_pq(opts.p, opts.q)?;
    let rank = rs.rank();
    let cfg = PlancherelConfig {
        group: rs.spec().to_string(),
        grid: validate_grid(opts.grid.unwrap_or(if rank == 1 { 256 } else { 128 }))?,
        cutoff: opts.cutoff.unwrap_or(32.0),
        trials: opts.trials.unwrap_or(20),
        seed: opts.seed.unwrap_or(1),
        terms: opts.terms.unwrap_or(6),
        max_coord: opts.max_coord.unwrap_or(if rank == 1 { 20 } else { 4 }),
        tolerance: opts.tolerance.unwrap_or(1e-8),
    };
    if !(cfg.cutoff > 0.0) {
        return Err(Error::Domain(format!("cutoff must be positive, got {}", cfg.cutoff)));
    }
    if cfg.trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    if !(cfg.tolerance > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            cfg.tolerance
        )));
    }
    if cfg.max_coord <= 0 {
        return Err(Error::Domain(format!(
            "max_coord must be positive, got {}",
            cfg.max_coord
        )));
    }

    let grid = TorusGrid::new(rank, cfg.grid)?;
    let mut trials = Vec::with_capacity(cfg.trials);
    let mut worst = (0usize, -1.0f64);
    for t in 0..cfg.trials {
        let poly = random_character_poly(
            &rs,
            cfg.seed.wrapping_add(t as u64),
            cfg.terms,
            cfg.max_coord,
        )?;
        let cutoff = cfg.cutoff.max(poly.min_cutoff(&rs));
        let h = poly.numerator_grid(&rs, &wg, grid)?;
        let spectrum = central_fourier_from_numerator(&rs, &h, cutoff)?;
        let rep = plancherel_check(&rs, &h, &spectrum)?;
        if rep.residual > worst.1 {
            worst = (t, rep.residual);
        }
        trials.push(PlancherelTrial {
            trial: t,
            cutoff,
            spectral_l2: rep.spectral_l2,
            torus_l2: rep.torus_l2,
            residual: rep.residual,
        });
    }
    let pass = worst.1 <= cfg.tolerance;
    let report = PlancherelSummary {
        trials,
        worst_trial: worst.0,
        worst_residual: worst.1,
        pass,
    };
    let note = (!pass).then(|| {
        format!(
            "plancherel residual {:.3e} in trial {} exceeds tolerance {:.3e}",
            worst.1, worst.0, cfg.tolerance
        )
    });

    let format = opts.format.unwrap_or(OutputFormat::Json);
    let text = match format {
        OutputFormat::Json => render_json(&Envelope {
            version: VERSION,
            convention: CONVENTION,
            command: "plancherel",
            config: &cfg,
            report: &report,
        })?,
        OutputFormat::Csv => {
            let mut text = csv_provenance("plancherel", &cfg)?;
            text.push_str("trial,cutoff,spectral_l2,torus_l2,residual\n");
            for row in &report.trials {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.trial, row.cutoff, row.spectral_l2, row.torus_l2, row.residual
                ));
            }
            text.push_str(&format!("# worst_trial={}\n", report.worst_trial));
            text.push_str(&format!("# worst_residual={}\n", report.worst_residual));
            text.push_str(&format!("# pass={}\n", report.pass));
            text
        }
    };
    Ok(CmdOutput {
        text,
        exit: if pass { 0 } else { 1 },
        note,
    })
}

// ---------------------------------------------------------------------------
// local-constant
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LocalConfig {
    group: String,
    q: f64,
    profile: ProfileKind,
    radius: f64,
    k_list: Vec<i64>,
    grid: usize,
    cutoff: f64,
    xi_max: f64,
    xi_step: f64,
    euclid_n: usize,
}

pub fn cmd_local_constant(opts: &Options) -> Result<CmdOutput> {
    let (rs, wg) = build_group(opts)?;
    check_pq(opts.p, opts.q)?;
    let rank = rs.rank();
    let q = opts.q.unwrap_or(1.5);

    let kind: ProfileKind = opts
        .profile
        .as_deref()
        .unwrap_or("smooth")
        .parse()?;
    let radius = match opts.radius {
        Some(r) => r,
        // Largest radius that keeps the symmetrized support inside the
        // fundamental cell, with 20% headroom.
        None => 0.4 / wg.max_dual_row_sum() as f64,
    };
    let profile = Profile::new(kind, radius)?;

    let mut params = LocalParams::for_rank(rank);
    if let Some(n) = opts.grid {
        params.grid_n = validate_grid(n)?;
    }
    if let Some(c) = opts.cutoff {
        if !(c > 0.0) {
            return Err(Error::Domain(format!("cutoff must be positive, got {c}")));
        }
        params.cutoff_base = c;
    }
    if let Some(v) = opts.xi_max {
        params.xi_max = v;
    }
    if let Some(v) = opts.xi_step {
        params.xi_step = v;
    }
    if let Some(v) = opts.euclid_n {
        params.euclid_n = v;
    }
    let ks = match &opts.k_list {
        Some(list) => list.clone(),
        None => {
            if rank == 1 {
                vec![1, 2, 4, 8]
            } else {
                vec![1, 2, 4]
            }
        }
    };

    let cfg = LocalConfig {
        group: rs.spec().to_string(),
        q,
        profile: kind,
        radius,
        k_list: ks.clone(),
        grid: params.grid_n,
        cutoff: params.cutoff_base,
        xi_max: params.xi_max,
        xi_step: params.xi_step,
        euclid_n: params.euclid_n,
    };

    let report = estimate_local_constant(&rs, &wg, profile, q, &ks, &params)?;

    let format = opts.format.unwrap_or(OutputFormat::Json);
    let text = match format {
        OutputFormat::Json => render_json(&Envelope {
            version: VERSION,
            convention: CONVENTION,
            command: "local-constant",
            config: &cfg,
            report: &report,
        })?,
        OutputFormat::Csv => {
            let mut text = csv_provenance("local-constant", &cfg)?;
            text.push_str("k,lq_norm,spectral_norm,quotient,riemann_deviation\n");
            for run in &report.runs {
                match run.riemann_deviation {
                    Some(dev) => text.push_str(&format!(
                        "{},{},{},{},{}\n",
                        run.k, run.lq_norm, run.spectral_norm, run.quotient, dev
                    )),
                    None => text.push_str(&format!(
                        "{},{},{},{},\n",
                        run.k, run.lq_norm, run.spectral_norm, run.quotient
                    )),
                }
            }
            text.push_str(&format!("# estimate={}\n", report.estimate));
            if let Some(v) = report.closed_form {
                text.push_str(&format!("# closed_form={v}\n"));
            }
            if let Some(v) = report.euclid_reference {
                text.push_str(&format!("# euclid_reference={v}\n"));
            }
            text
        }
    };
    Ok(CmdOutput {
        text,
        exit: 0,
        note: None,
    })
}

// ---------------------------------------------------------------------------
// certificate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CertificateConfig {
    group: String,
    p: f64,
    q: f64,
    n_list: Vec<usize>,
    character: bool,
    profile: Option<ProfileKind>,
    radius: Option<f64>,
    grid: usize,
    cutoff: Option<f64>,
}

#[derive(Serialize)]
struct CertificateSummary {
    certificates: Vec<GrowthCertificate>,
    /// Least-squares exponent of `lower_bound` against `n`; equals
    /// `1/p - 1/q` up to rounding because the prefactor is shared.
    lower_growth_exponent: Option<f64>,
}

#[derive(Serialize)]
struct CharacterSummary {
    rows: Vec<CharacterReport>,
    /// Least-squares exponent of `phi_norm / n^{1/p'}` against `n` — the
    /// excess growth of the space-side norm over the flat baseline.
    phi_growth_exponent: Option<f64>,
}

pub fn cmd_certificate(opts: &Options) -> Result<CmdOutput> {
    let (rs, wg) = build_group(opts)?;
    let p = opts.p.unwrap_or(1.0);
    let q = opts.q.unwrap_or(1.5);
    check_pq(Some(p), Some(q))?;
    let sizes = positive_sizes(
        opts.n_list.as_deref().unwrap_or(&[1, 2, 4, 8]),
        "system size",
    )?;
    let format = opts.format.unwrap_or(OutputFormat::Json);

    if opts.character {
        let grid_n = validate_grid(opts.grid.unwrap_or(256))?;
        let cfg = CertificateConfig {
            group: rs.spec().to_string(),
            p,
            q,
            n_list: sizes.clone(),
            character: true,
            profile: None,
            radius: None,
            grid: grid_n,
            cutoff: None,
        };
        let mut rows = Vec::with_capacity(sizes.len());
        for &n in &sizes {
            // Character ladder lambda_k = k * (1, ..., 1), k = 1..n: distinct
            // dominant weights with strictly growing dimensions.
            let weights: Vec<Vec<i64>> = (1..=n as i64)
                .map(|k| vec![k; rs.rank()])
                .collect();
            rows.push(character_experiment(&rs, &wg, p, q, &weights, grid_n)?);
        }
        let inv_pprime = 1.0 - 1.0 / p;
        let samples: Vec<(usize, f64)> = rows
            .iter()
            .map(|r| (r.n, r.phi_norm / (r.n as f64).powf(inv_pprime)))
            .collect();
        let phi_growth_exponent = if samples.len() >= 2 {
            Some(fit_growth_exponent(&samples)?)
        } else {
            None
        };
        let report = CharacterSummary {
            rows,
            phi_growth_exponent,
        };
        let text = match format {
            OutputFormat::Json => render_json(&Envelope {
                version: VERSION,
                convention: CONVENTION,
                command: "certificate",
                config: &cfg,
                report: &report,
            })?,
            OutputFormat::Csv => {
                let mut text = csv_provenance("certificate", &cfg)?;
                text.push_str("n,phat_norm,phat_target,phi_norm,ratio\n");
                for r in &report.rows {
                    text.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.n, r.phat_norm, r.phat_target, r.phi_norm, r.ratio
                    ));
                }
                if let Some(v) = report.phi_growth_exponent {
                    text.push_str(&format!("# phi_growth_exponent={v}\n"));
                }
                text
            }
        };
        return Ok(CmdOutput {
            text,
            exit: 0,
            note: None,
        });
    }

    let kind: ProfileKind = opts
        .profile
        .as_deref()
        .unwrap_or("smooth")
        .parse()?;
    // Small default radius so the default n_list up to 8 disjoint
    // translates fits on the torus.
    let radius = opts.radius.unwrap_or(0.05);
    let profile = Profile::new(kind, radius)?;
    let grid_n = validate_grid(opts.grid.unwrap_or(512))?;
    let cutoff = opts.cutoff.unwrap_or(80.0);
    if !(cutoff > 0.0) {
        return Err(Error::Domain(format!("cutoff must be positive, got {cutoff}")));
    }
    let cfg = CertificateConfig {
        group: rs.spec().to_string(),
        p,
        q,
        n_list: sizes.clone(),
        character: false,
        profile: Some(kind),
        radius: Some(radius),
        grid: grid_n,
        cutoff: Some(cutoff),
    };

    let support = SymmetrizedProfile::new(&wg, profile)?.support_radius();
    let mut certificates = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let ts = build_translation_set(&rs, n, support)?;
        certificates.push(growth_certificate(
            &rs, &wg, profile, &ts, p, q, grid_n, cutoff,
        )?);
    }
    let samples: Vec<(usize, f64)> = certificates
        .iter()
        .map(|c| (c.n, c.lower_bound))
        .collect();
    let lower_growth_exponent = if samples.len() >= 2 {
        Some(fit_growth_exponent(&samples)?)
    } else {
        None
    };
    let report = CertificateSummary {
        certificates,
        lower_growth_exponent,
    };
    let text = match format {
        OutputFormat::Json => render_json(&Envelope {
            version: VERSION,
            convention: CONVENTION,
            command: "certificate",
            config: &cfg,
            report: &report,
        })?,
        OutputFormat::Csv => {
            let mut text = csv_provenance("certificate", &cfg)?;
            text.push_str("n,lower_bound,upper_bound,K,residual_max\n");
            for c in &report.certificates {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.n, c.lower_bound, c.upper_bound, c.k, c.residual_max
                ));
            }
            if let Some(v) = report.lower_growth_exponent {
                text.push_str(&format!("# lower_growth_exponent={v}\n"));
            }
            text
        }
    };
    Ok(CmdOutput {
        text,
        exit: 0,
        note: None,
    })
}
