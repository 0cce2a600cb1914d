use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use waldspace::baselines::{compare_metrics, TreeMetric};
use waldspace::io::{format_number, geodesic_tables, matrix_table, Cell, Table};
use waldspace::projection::{
    project_exhaustive, project_global, project_within_orthant, recursive_geodesic, star_distance_profile,
    symmetrized_geodesic, Chart, ProjectOptions, ProjectionResult,
};
use waldspace::riemann::{
    connect_geodesic, random_plane_curvatures, shoot_geodesic, ConnectOptions, LambdaChart, ShootOptions,
};
use waldspace::spd::{covariance_of, frechet_mean_spd, spd_distance, GaussianMetric};
use waldspace::twostate::TwoStateMetric;
use waldspace::{
    random_wald, to_newick, Error, GeodesicPath, MetricProvider, Param, RandomWald, Result, Topology, Wald,
};

use crate::output::{emit, emit_text, extension, render, write_file};
use crate::{input, Algorithm, Command, Format, Global, Mode, Model};

pub fn run(g: &Global, cmd: Command) -> Result<()> {
    let param = Param::from(g.param);
    let out = g.out.as_deref();
    match cmd {
        Command::Parse { tree, newick } => {
            let w = input::wald(&tree, param)?;
            if newick {
                emit_text(&(to_newick(&w, param) + "\n"), out)
            } else {
                emit(&split_table(&w, param), g.format, out)
            }
        }
        Command::Dist { metric, a, b, cap } => {
            let m: TreeMetric = metric.parse()?;
            let d = m.distance(&input::wald(&a, param)?, &input::wald(&b, param)?, cap)?;
            match g.format {
                Format::Csv => emit_text(&(format_number(d) + "\n"), out),
                Format::Json => {
                    let mut t = Table::new(["metric", "distance"]);
                    t.push(vec![m.name().into(), d.into()]);
                    emit(&t, g.format, out)
                }
            }
        }
        Command::Shoot {
            tree,
            model,
            directions,
            plane,
            dt,
            max_time,
            no_clamp,
            per_direction,
        } => {
            let w = input::wald(&tree, param)?;
            let opts = ShootOptions {
                dt,
                max_time,
                pendant_clamp: !no_clamp,
                ..ShootOptions::default()
            };
            let fan = Fan {
                directions,
                plane: &plane,
                opts: &opts,
            };
            let tables = match (model, param) {
                (Model::Gaussian, Param::Length) => fan.run(&GaussianMetric::new(w.topology())?, &w, param),
                (Model::Gaussian, Param::Lambda) => {
                    fan.run(&LambdaChart::new(GaussianMetric::new(w.topology())?), &w, param)
                }
                (Model::Twostate, Param::Length) => fan.run(&TwoStateMetric::new(w.topology())?, &w, param),
                (Model::Twostate, Param::Lambda) => {
                    fan.run(&LambdaChart::new(TwoStateMetric::new(w.topology())?), &w, param)
                }
            }?;
            if per_direction {
                let dir = out.ok_or_else(|| Error::InvalidArgument("--per-direction needs --out DIR".into()))?;
                for (j, t) in tables.iter().enumerate() {
                    write_file(
                        &dir.join(format!("direction_{j:02}.{}", extension(g.format))),
                        &render(t, g.format),
                    )?;
                }
                Ok(())
            } else {
                let mut all = Table::new(tables[0].headers.clone());
                all.rows = tables.into_iter().flat_map(|t| t.rows).collect();
                emit(&all, g.format, out)
            }
        }
        Command::Connect {
            a,
            b,
            algorithm,
            k,
            model,
            sidecar,
        } => {
            let (a, b) = (input::wald(&a, param)?, input::wald(&b, param)?);
            let popts = ProjectOptions::default();
            let g_path = match algorithm {
                Algorithm::Recursive => recursive_geodesic(&a, &b, k, &popts)?,
                Algorithm::Symmetrized => symmetrized_geodesic(&a, &b, k, &popts)?,
                Algorithm::Ode => return connect_ode(g, &a, &b, model, param),
            };
            eprintln!("total length {}", format_number(g_path.total_length));
            let (points, topologies) = geodesic_tables(&g_path);
            emit(&points, g.format, out)?;
            if let Some(p) = sidecar.or_else(|| out.map(|o| sidecar_path(o, g.format))) {
                write_file(&p, &render(&topologies, g.format))?;
            }
            Ok(())
        }
        Command::Project {
            target,
            matrix,
            mode,
            start,
            seed_length,
            tol,
            max_iter,
        } => {
            let s0 = match (&target, &matrix) {
                (Some(t), _) => covariance_of(&input::wald(t, param)?)?,
                (None, Some(m)) => input::matrix(m)?,
                (None, None) => return Err(Error::InvalidArgument("give --target or --matrix".into())),
            };
            let opts = ProjectOptions {
                tol,
                max_iter,
                ..ProjectOptions::default()
            };
            let seed = || -> Result<Chart> {
                let s = start
                    .as_deref()
                    .ok_or_else(|| Error::InvalidArgument("this mode needs --from TREE".into()))?;
                Chart::from_wald(&input::wald(s, param)?)
            };
            let r = match mode {
                Mode::Orthant => project_within_orthant(&s0, &seed()?, &opts)?,
                Mode::Global => project_global(&s0, &seed()?, &opts)?,
                Mode::Exhaustive => project_exhaustive(&s0, seed_length, &opts)?,
            };
            emit(&projection_table(&r, param), g.format, out)
        }
        Command::Curvature {
            tree,
            leaves,
            samples,
            model,
        } => {
            let mut t = Table::new(["sample", "newick", "curvature"]);
            let fixed = tree.map(|s| input::wald(&s, param)).transpose()?;
            for i in 0..samples {
                let seed = g.seed.wrapping_add(i as u64);
                let w = match &fixed {
                    Some(w) => w.clone(),
                    None => random_wald(leaves, seed, &RandomWald::default())?,
                };
                let x = w.lengths();
                let k = match model {
                    Model::Gaussian => random_plane_curvatures(&GaussianMetric::new(w.topology())?, &x, 1, seed)?,
                    Model::Twostate => random_plane_curvatures(&TwoStateMetric::new(w.topology())?, &x, 1, seed)?,
                }[0];
                t.push(vec![i.into(), to_newick(&w, param).into(), k.into()]);
            }
            let ks: Vec<f64> = t
                .rows
                .iter()
                .filter_map(|r| if let Cell::Num(k) = r[2] { Some(k) } else { None })
                .collect();
            eprintln!(
                "{} positive, {} negative, {} zero",
                ks.iter().filter(|&&k| k > 0.0).count(),
                ks.iter().filter(|&&k| k < 0.0).count(),
                ks.iter().filter(|&&k| k == 0.0).count()
            );
            emit(&t, g.format, out)
        }
        Command::Frechet {
            trees,
            project,
            tol,
            max_iter,
        } => {
            let sample = input::walds(&trees, param)?;
            let covs = sample.iter().map(covariance_of).collect::<Result<Vec<_>>>()?;
            let mean = frechet_mean_spd(&covs, tol, max_iter)?;
            eprintln!(
                "{} iterations, residual {}",
                mean.iterations,
                format_number(mean.residual)
            );
            if !project {
                let labels: Vec<String> = (1..=mean.mean.dim()).map(|i| i.to_string()).collect();
                return emit(&matrix_table(&labels, mean.mean.matrix()), g.format, out);
            }
            let nearest = covs
                .iter()
                .enumerate()
                .min_by(|a, b| spd_distance(&mean.mean, a.1).total_cmp(&spd_distance(&mean.mean, b.1)))
                .map(|(i, _)| i)
                .expect("sample is non-empty");
            let r = project_global(
                &mean.mean,
                &Chart::from_wald(&sample[nearest])?,
                &ProjectOptions::default(),
            )?;
            emit(&projection_table(&r, param), g.format, out)
        }
        Command::StarProfile { lambda0, k, grid } => {
            if grid == 0 {
                return Err(Error::InvalidArgument("--grid must be positive".into()));
            }
            let mut lambdas: Vec<f64> = (0..4).map(|i| 10f64.powf(-3.0 + 0.25 * i as f64)).collect();
            lambdas.extend((1..=grid).map(|i| i as f64 / grid as f64));
            lambdas.sort_by(f64::total_cmp);
            lambdas.dedup();
            let profile = star_distance_profile(lambda0, &lambdas, k, &ProjectOptions::default())?;
            let mut t = Table::new(["lambda", "distance"]);
            for (l, d) in profile {
                t.push(vec![l.into(), d.into()]);
            }
            emit(&t, g.format, out)
        }
        Command::Compare {
            trees,
            metrics,
            cap,
            matrices,
        } => {
            let mut chosen = Vec::new();
            for m in &metrics {
                if m == "tropical" {
                    eprintln!("notice: the tropical metric is not available and was skipped");
                    continue;
                }
                chosen.push(m.parse::<TreeMetric>()?);
            }
            let sample = input::walds(&trees, param)?;
            let report = compare_metrics(&sample, &chosen, cap)?;
            for f in &report.failures {
                eprintln!("{} failed for t{} and t{}: {}", f.metric, f.i + 1, f.j + 1, f.message);
            }
            if let Some(dir) = matrices {
                for (m, mat) in report.metrics.iter().zip(&report.matrices) {
                    let path = dir.join(format!("{}.{}", m.name(), extension(g.format)));
                    write_file(&path, &render(&matrix_table(&report.labels, mat), g.format))?;
                }
            }
            let names: Vec<String> = report.metrics.iter().map(|m| m.name().to_string()).collect();
            emit(&matrix_table(&names, &report.correlations), g.format, out)
        }
    }
}

fn split_table(w: &Wald, param: Param) -> Table {
    let mut t = Table::new(["split", "pendant", weight_name(param)]);
    for (s, v) in w.splits().iter().zip(w.params(param)) {
        t.push(vec![s.to_string().into(), usize::from(s.is_pendant()).into(), v.into()]);
    }
    t
}

fn weight_name(param: Param) -> &'static str {
    match param {
        Param::Length => "length",
        Param::Lambda => "lambda",
    }
}

fn projection_table(r: &ProjectionResult, param: Param) -> Table {
    let mut t = Table::new(["newick", "distance", "iterations", "converged", "orthants_visited"]);
    t.push(vec![
        to_newick(&r.wald, param).into(),
        r.distance.into(),
        r.iterations.into(),
        usize::from(r.converged).into(),
        r.orthants.len().into(),
    ]);
    t
}

fn sidecar_path(out: &Path, format: Format) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.topologies.{}", extension(format)))
}

fn coordinate_headers(t: &Topology, param: Param) -> Vec<String> {
    t.splits()
        .iter()
        .map(|s| format!("{}[{s}]", weight_name(param)))
        .collect()
}

fn path_rows(table: &mut Table, prefix: &[Cell], p: &GeodesicPath) {
    for i in 0..p.len() {
        let mut row = prefix.to_vec();
        row.push(i.into());
        row.push(p.t[i].into());
        row.extend(p.x[i].iter().map(|&v| Cell::Num(v)));
        row.push(usize::from(p.clamped[i]).into());
        row.push(p.cumulative_length[i].into());
        row.push(p.termination.as_str().into());
        table.push(row);
    }
}

fn path_headers(prefix: &[&str], t: &Topology, param: Param) -> Vec<String> {
    prefix
        .iter()
        .map(|s| s.to_string())
        .chain(["step", "t"].map(String::from))
        .chain(coordinate_headers(t, param))
        .chain(["clamped", "cumulative_length", "termination"].map(String::from))
        .collect()
}

struct Fan<'a> {
    directions: usize,
    plane: &'a [usize],
    opts: &'a ShootOptions,
}

impl Fan<'_> {
    /// One table per direction. Directions are evenly spaced angles in the
    /// plane of the two chosen internal splits, unit length in coordinates.
    fn run<M: MetricProvider>(&self, m: &M, w: &Wald, param: Param) -> Result<Vec<Table>> {
        let internal = w.topology().internal_indices();
        let [a, b] = self.plane else {
            return Err(Error::InvalidArgument("--plane takes two positions".into()));
        };
        let (&ia, &ib) = match (internal.get(*a), internal.get(*b)) {
            (Some(x), Some(y)) if x != y => (x, y),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "the tree has {} internal splits; --plane {a},{b} does not name two of them",
                    internal.len()
                )))
            }
        };
        if self.directions == 0 {
            return Err(Error::InvalidArgument("--directions must be positive".into()));
        }
        let x0 = w.params(param);
        let headers = path_headers(&["direction", "angle"], w.topology(), param);
        (0..self.directions)
            .map(|j| {
                let angle = 2.0 * PI * j as f64 / self.directions as f64;
                let mut v = vec![0.0; x0.len()];
                v[ia] = angle.cos();
                v[ib] = angle.sin();
                let p = shoot_geodesic(m, &x0, &v, self.opts)?;
                let mut t = Table::new(headers.clone());
                path_rows(&mut t, &[j.into(), angle.into()], &p);
                Ok(t)
            })
            .collect()
    }
}

fn connect_ode(g: &Global, a: &Wald, b: &Wald, model: Model, param: Param) -> Result<()> {
    if a.topology() != b.topology() {
        return Err(Error::InvalidArgument(
            "the ODE algorithm needs both walds in the same orthant".into(),
        ));
    }
    let (x0, x1) = (a.params(param), b.params(param));
    let opts = ConnectOptions::default();
    let p = match (model, param) {
        (Model::Gaussian, Param::Length) => connect_geodesic(&GaussianMetric::new(a.topology())?, &x0, &x1, &opts),
        (Model::Gaussian, Param::Lambda) => {
            connect_geodesic(&LambdaChart::new(GaussianMetric::new(a.topology())?), &x0, &x1, &opts)
        }
        (Model::Twostate, Param::Length) => connect_geodesic(&TwoStateMetric::new(a.topology())?, &x0, &x1, &opts),
        (Model::Twostate, Param::Lambda) => {
            connect_geodesic(&LambdaChart::new(TwoStateMetric::new(a.topology())?), &x0, &x1, &opts)
        }
    }?;
    eprintln!("total length {}", format_number(p.total_length()));
    let mut t = Table::new(path_headers(&[], a.topology(), param));
    path_rows(&mut t, &[], &p);
    emit(&t, g.format, g.out.as_deref())
}
