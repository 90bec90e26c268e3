//! Fisher linear discriminant analysis.
//!
//! Training builds the within-group (`S_w`) and between-group (`S_b`)
//! scatter matrices and solves the generalized symmetric eigenproblem
//! `S_b v = λ S_w v` through a Cholesky factor of `S_w`. Each retained
//! eigenvector becomes one discriminant function, scaled to unit pooled
//! within-group variance and centred so the grand mean scores zero.
//! Classification assigns the label of the nearest group centroid in the
//! full discriminant space.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::features::EventFeatureVector;
use crate::stats::f_upper_tail;

pub const MODEL_MAGIC: &str = "RSSI-LDA";
pub const MODEL_VERSION: u32 = 1;

/// `S_w` condition number above which ridge regularization kicks in.
pub const MAX_CONDITION: f64 = 1e12;
/// Ridge strength relative to the mean diagonal of `S_w`.
pub const RIDGE_SCALE: f64 = 1e-6;
/// Structure-matrix loadings at or above this magnitude are significant.
pub const LOADING_THRESHOLD: f64 = 0.3;

#[derive(Debug, Error)]
pub enum LdaError {
    #[error("need at least 2 groups, found {0}")]
    TooFewGroups(usize),
    #[error("group {group} has {count} samples; at least 2 required")]
    TooFewSamples { group: u32, count: usize },
    #[error("sample {0} has no label")]
    Unlabeled(usize),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("dimension mismatch: model expects {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("model format error: {0}")]
    Format(String),
    #[error("unsupported model version {0}")]
    Version(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LdaModel {
    /// One row of `p` coefficients per discriminant function.
    pub coefficients: Vec<Vec<f64>>,
    pub constants: Vec<f64>,
    /// One row per group (ordered as `group_labels`), one column per function.
    pub centroids: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub variance_pct: Vec<f64>,
    pub canonical_correlations: Vec<f64>,
    /// `p` rows, one column per function.
    pub structure_matrix: Vec<Vec<f64>>,
    pub group_labels: Vec<u32>,
    pub p: usize,
    pub regularization_used: f64,
    /// Resubstitution group accuracy on the training set.
    pub training_accuracy: Option<f64>,
}

/// Labeled observations as rows.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u32>,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Vec<u32>) -> Self {
        assert_eq!(rows.len(), labels.len(), "rows and labels differ in length");
        Dataset { rows, labels }
    }

    pub fn from_features(data: &[EventFeatureVector]) -> Result<Self, LdaError> {
        let mut rows = Vec::with_capacity(data.len());
        let mut labels = Vec::with_capacity(data.len());
        for (i, v) in data.iter().enumerate() {
            labels.push(v.label.ok_or(LdaError::Unlabeled(i))?);
            rows.push(v.values.to_vec());
        }
        Ok(Dataset { rows, labels })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn groups(&self) -> Vec<u32> {
        let mut g = self.labels.clone();
        g.sort_unstable();
        g.dedup();
        g
    }

    fn group_indices(&self, groups: &[u32]) -> Vec<Vec<usize>> {
        groups
            .iter()
            .map(|&g| (0..self.len()).filter(|&i| self.labels[i] == g).collect())
            .collect()
    }
}

struct Scatter {
    groups: Vec<u32>,
    members: Vec<Vec<usize>>,
    means: Vec<DVector<f64>>,
    grand_mean: DVector<f64>,
    within: DMatrix<f64>,
    between: DMatrix<f64>,
}

fn scatter(data: &Dataset) -> Result<Scatter, LdaError> {
    let p = data.dim();
    if let Some(bad) = data.rows.iter().find(|r| r.len() != p) {
        return Err(LdaError::DimensionMismatch {
            expected: p,
            got: bad.len(),
        });
    }
    let groups = data.groups();
    if groups.len() < 2 {
        return Err(LdaError::TooFewGroups(groups.len()));
    }
    let members = data.group_indices(&groups);
    for (g, m) in groups.iter().zip(&members) {
        if m.len() < 2 {
            return Err(LdaError::TooFewSamples {
                group: *g,
                count: m.len(),
            });
        }
    }
    let n = data.len() as f64;
    let row = |i: usize| DVector::from_column_slice(&data.rows[i]);
    let grand_mean = (0..data.len()).fold(DVector::zeros(p), |acc, i| acc + row(i)) / n;
    let means: Vec<DVector<f64>> = members
        .iter()
        .map(|m| m.iter().fold(DVector::zeros(p), |acc, &i| acc + row(i)) / m.len() as f64)
        .collect();

    let mut within = DMatrix::zeros(p, p);
    let mut between = DMatrix::zeros(p, p);
    for (m, mean) in members.iter().zip(&means) {
        for &i in m {
            let d = row(i) - mean;
            within += &d * d.transpose();
        }
        let d = mean - &grand_mean;
        between += (&d * d.transpose()) * m.len() as f64;
    }
    Ok(Scatter {
        groups,
        members,
        means,
        grand_mean,
        within,
        between,
    })
}

/// Ridge to add to `S_w`, or 0 when it is well conditioned.
fn ridge_for(within: &DMatrix<f64>, between: &DMatrix<f64>) -> f64 {
    let p = within.nrows() as f64;
    let eig = SymmetricEigen::new(within.clone()).eigenvalues;
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 && max / min <= MAX_CONDITION {
        return 0.0;
    }
    let tw = within.trace();
    let base = if tw > 0.0 { tw } else { between.trace() };
    RIDGE_SCALE * base / p
}

fn canonical_sign(v: &mut DVector<f64>) {
    let scale = v.amax();
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * scale) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}

impl LdaModel {
    pub fn fit(data: &Dataset) -> Result<LdaModel, LdaError> {
        let sc = scatter(data)?;
        let p = data.dim();
        let n = data.len();
        let g = sc.groups.len();
        if sc.within.trace() <= 0.0 && sc.between.trace() <= 0.0 {
            return Err(LdaError::Degenerate("all samples identical".into()));
        }

        let ridge = ridge_for(&sc.within, &sc.between);
        let regularized = &sc.within + DMatrix::identity(p, p) * ridge;
        let chol = regularized.clone().cholesky().ok_or_else(|| {
            LdaError::Degenerate("within-group scatter is not positive definite".into())
        })?;
        let l = chol.l();
        let lt = l.transpose();
        let half = l
            .solve_lower_triangular(&sc.between)
            .ok_or_else(|| LdaError::Degenerate("singular Cholesky factor".into()))?;
        let whitened = l
            .solve_lower_triangular(&half.transpose())
            .ok_or_else(|| LdaError::Degenerate("singular Cholesky factor".into()))?;
        let whitened = (&whitened + whitened.transpose()) * 0.5;

        let eig = SymmetricEigen::new(whitened);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let k = (g - 1).min(p);
        let dof = (n - g) as f64;

        let mut coefficients = Vec::with_capacity(k);
        let mut eigenvalues = Vec::with_capacity(k);
        for &idx in order.iter().take(k) {
            let y = eig.eigenvectors.column(idx).into_owned();
            let mut v = lt
                .solve_upper_triangular(&y)
                .ok_or_else(|| LdaError::Degenerate("singular Cholesky factor".into()))?;
            let wvar = (v.transpose() * &sc.within * &v)[(0, 0)];
            let rvar = (v.transpose() * &regularized * &v)[(0, 0)];
            let var = if wvar > 0.0 { wvar } else { rvar };
            v *= (dof / var).sqrt();
            canonical_sign(&mut v);
            coefficients.push(v.iter().cloned().collect::<Vec<f64>>());
            eigenvalues.push(eig.eigenvalues[idx].max(0.0));
        }

        let constants: Vec<f64> = coefficients
            .iter()
            .map(|v| -v.iter().zip(sc.grand_mean.iter()).map(|(a, b)| a * b).sum::<f64>())
            .collect();

        let total: f64 = eigenvalues.iter().sum();
        let variance_pct = if total > 0.0 {
            eigenvalues.iter().map(|l| l / total * 100.0).collect()
        } else {
            vec![100.0 / k as f64; k]
        };
        let canonical_correlations = eigenvalues
            .iter()
            .map(|&l| (l / (1.0 + l)).sqrt())
            .collect();

        let mut model = LdaModel {
            coefficients,
            constants,
            centroids: Vec::new(),
            eigenvalues,
            variance_pct,
            canonical_correlations,
            structure_matrix: Vec::new(),
            group_labels: sc.groups.clone(),
            p,
            regularization_used: ridge,
            training_accuracy: None,
        };
        model.centroids = sc
            .means
            .iter()
            .map(|m| model.score_unchecked(m.as_slice()))
            .collect();
        model.structure_matrix = structure_matrix(&model, data)?.loadings;

        let correct = data
            .rows
            .iter()
            .zip(&data.labels)
            .filter(|(x, &l)| model.classify_unchecked(x) == l)
            .count();
        model.training_accuracy = Some(correct as f64 / n as f64);
        debug_assert_eq!(sc.members.iter().map(Vec::len).sum::<usize>(), n);
        Ok(model)
    }

    pub fn fit_features(data: &[EventFeatureVector]) -> Result<LdaModel, LdaError> {
        LdaModel::fit(&Dataset::from_features(data)?)
    }

    pub fn n_functions(&self) -> usize {
        self.coefficients.len()
    }

    pub fn n_groups(&self) -> usize {
        self.group_labels.len()
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), LdaError> {
        if x.len() != self.p {
            return Err(LdaError::DimensionMismatch {
                expected: self.p,
                got: x.len(),
            });
        }
        Ok(())
    }

    fn score_unchecked(&self, x: &[f64]) -> Vec<f64> {
        self.coefficients
            .iter()
            .zip(&self.constants)
            .map(|(v, c)| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + c)
            .collect()
    }

    /// Discriminant scores `D_k = Σ_j v_kj x_j + c_k`.
    pub fn score(&self, x: &[f64]) -> Result<Vec<f64>, LdaError> {
        self.check_dim(x)?;
        Ok(self.score_unchecked(x))
    }

    fn classify_unchecked(&self, x: &[f64]) -> u32 {
        nearest_centroid(&self.score_unchecked(x), &self.centroids, &self.group_labels)
    }

    pub fn classify(&self, x: &[f64]) -> Result<u32, LdaError> {
        self.check_dim(x)?;
        Ok(self.classify_unchecked(x))
    }

    pub fn classify_features(&self, v: &EventFeatureVector) -> Result<u32, LdaError> {
        self.classify(&v.values)
    }
}

/// Label of the centroid closest to `scores`; ties resolve to the smaller
/// label.
pub fn nearest_centroid(scores: &[f64], centroids: &[Vec<f64>], labels: &[u32]) -> u32 {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by_key(|&i| labels[i]);
    let mut best: Option<(f64, u32)> = None;
    for i in order {
        let d: f64 = centroids[i]
            .iter()
            .zip(scores)
            .map(|(c, s)| (c - s).powi(2))
            .sum();
        match best {
            Some((bd, _)) if d >= bd - 1e-12 * bd.max(1.0) => {}
            _ => best = Some((d, labels[i])),
        }
    }
    best.map_or(0, |(_, l)| l)
}

pub fn canonical_correlation(eigenvalue: f64) -> Result<f64, LdaError> {
    if !(eigenvalue >= 0.0) {
        return Err(LdaError::Domain(format!("negative eigenvalue {eigenvalue}")));
    }
    if eigenvalue.is_infinite() {
        return Ok(1.0);
    }
    Ok((eigenvalue / (1.0 + eigenvalue)).sqrt())
}

/// Percentage of the total eigenvalue mass carried by each function.
pub fn variance_percentages(eigenvalues: &[f64]) -> Vec<f64> {
    let total: f64 = eigenvalues.iter().sum();
    eigenvalues.iter().map(|l| l / total * 100.0).collect()
}

/// One-way F statistic implied by Wilks' lambda for `n` samples in `g`
/// groups.
pub fn f_from_lambda(lambda: f64, n: usize, g: usize) -> f64 {
    ((1.0 - lambda) / lambda) * ((n - g) as f64 / (g - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupStats {
    pub wilks_lambda: f64,
    pub f_stat: f64,
    pub p_value: f64,
}

/// Univariate test of equal group means for one variable.
pub fn wilks_univariate(data: &Dataset, variable: usize) -> Result<GroupStats, LdaError> {
    let p = data.dim();
    if variable >= p {
        return Err(LdaError::DimensionMismatch {
            expected: p,
            got: variable + 1,
        });
    }
    let groups = data.groups();
    if groups.len() < 2 {
        return Err(LdaError::TooFewGroups(groups.len()));
    }
    let n = data.len();
    let g = groups.len();
    if n <= g {
        return Err(LdaError::Degenerate(format!("{n} samples for {g} groups")));
    }
    let xs: Vec<f64> = data.rows.iter().map(|r| r[variable]).collect();
    let grand = xs.iter().sum::<f64>() / n as f64;
    let ss_total: f64 = xs.iter().map(|x| (x - grand).powi(2)).sum();
    let ss_within: f64 = data
        .group_indices(&groups)
        .iter()
        .map(|m| {
            let mean = m.iter().map(|&i| xs[i]).sum::<f64>() / m.len() as f64;
            m.iter().map(|&i| (xs[i] - mean).powi(2)).sum::<f64>()
        })
        .sum();
    if ss_total <= 0.0 {
        return Err(LdaError::Degenerate(format!(
            "variable {variable} has zero total sum of squares"
        )));
    }
    let lambda = (ss_within / ss_total).clamp(0.0, 1.0);
    let f_stat = if lambda == 0.0 {
        f64::INFINITY
    } else {
        f_from_lambda(lambda, n, g).max(0.0)
    };
    Ok(GroupStats {
        wilks_lambda: lambda,
        f_stat,
        p_value: f_upper_tail(f_stat, (g - 1) as f64, (n - g) as f64),
    })
}

pub fn group_stats_table(data: &Dataset) -> Result<Vec<GroupStats>, LdaError> {
    (0..data.dim()).map(|j| wilks_univariate(data, j)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureMatrix {
    /// `p` rows × functions.
    pub loadings: Vec<Vec<f64>>,
    pub significant: Vec<Vec<bool>>,
    /// Variables with zero pooled within-group variance.
    pub degenerate: Vec<bool>,
}

/// Pooled within-group correlations between each variable and each
/// discriminant score.
pub fn structure_matrix(model: &LdaModel, data: &Dataset) -> Result<StructureMatrix, LdaError> {
    if data.dim() != model.p {
        return Err(LdaError::DimensionMismatch {
            expected: model.p,
            got: data.dim(),
        });
    }
    let groups = data.groups();
    let members = data.group_indices(&groups);
    let k = model.n_functions();
    let p = model.p;
    let scores: Vec<Vec<f64>> = data.rows.iter().map(|r| model.score_unchecked(r)).collect();

    // deviations from group means
    let mut dx = vec![vec![0.0; p]; data.len()];
    let mut ds = vec![vec![0.0; k]; data.len()];
    for m in &members {
        let cnt = m.len() as f64;
        let mx: Vec<f64> = (0..p)
            .map(|j| m.iter().map(|&i| data.rows[i][j]).sum::<f64>() / cnt)
            .collect();
        let ms: Vec<f64> = (0..k)
            .map(|f| m.iter().map(|&i| scores[i][f]).sum::<f64>() / cnt)
            .collect();
        for &i in m {
            for j in 0..p {
                dx[i][j] = data.rows[i][j] - mx[j];
            }
            for f in 0..k {
                ds[i][f] = scores[i][f] - ms[f];
            }
        }
    }
    let var_x: Vec<f64> = (0..p).map(|j| dx.iter().map(|d| d[j] * d[j]).sum()).collect();
    let var_s: Vec<f64> = (0..k).map(|f| ds.iter().map(|d| d[f] * d[f]).sum()).collect();
    let scale_x = var_x.iter().cloned().fold(0.0, f64::max);

    let mut loadings = vec![vec![0.0; k]; p];
    let mut degenerate = vec![false; p];
    for j in 0..p {
        if var_x[j] <= 1e-24 * scale_x.max(1.0) {
            degenerate[j] = true;
            continue;
        }
        for f in 0..k {
            if var_s[f] <= 0.0 {
                continue;
            }
            let cov: f64 = dx.iter().zip(&ds).map(|(a, b)| a[j] * b[f]).sum();
            loadings[j][f] = (cov / (var_x[j] * var_s[f]).sqrt()).clamp(-1.0, 1.0);
        }
    }
    let significant = loadings
        .iter()
        .map(|row| row.iter().map(|r| r.abs() >= LOADING_THRESHOLD).collect())
        .collect();
    Ok(StructureMatrix {
        loadings,
        significant,
        degenerate,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub expect_p: Option<usize>,
    pub expect_g: Option<usize>,
    /// Accept a model whose dimensions differ from the expectations.
    pub allow_mismatch: bool,
}

fn write_row(out: &mut String, key: &str, row: &[f64]) {
    out.push_str(key);
    for x in row {
        let _ = write!(out, " {x:?}");
    }
    out.push('\n');
}

impl LdaModel {
    /// Text serialization: magic/version line, dimensions, then row-major
    /// matrices. Floats are written in shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut out = format!("{MODEL_MAGIC} {MODEL_VERSION}\n");
        let _ = writeln!(out, "p {}", self.p);
        let _ = writeln!(out, "groups {}", self.group_labels.len());
        let _ = writeln!(out, "functions {}", self.n_functions());
        let labels: Vec<String> = self.group_labels.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "labels {}", labels.join(" "));
        let _ = writeln!(out, "regularization {:?}", self.regularization_used);
        match self.training_accuracy {
            Some(a) => {
                let _ = writeln!(out, "training_accuracy {a:?}");
            }
            None => out.push_str("training_accuracy none\n"),
        }
        write_row(&mut out, "eigenvalues", &self.eigenvalues);
        write_row(&mut out, "variance_pct", &self.variance_pct);
        write_row(&mut out, "canonical_correlations", &self.canonical_correlations);
        write_row(&mut out, "constants", &self.constants);
        out.push_str("coefficients\n");
        for r in &self.coefficients {
            write_row(&mut out, "row", r);
        }
        out.push_str("centroids\n");
        for r in &self.centroids {
            write_row(&mut out, "row", r);
        }
        out.push_str("structure\n");
        for r in &self.structure_matrix {
            write_row(&mut out, "row", r);
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str, opts: LoadOptions) -> Result<LdaModel, LdaError> {
        let fmt = |m: &str| LdaError::Format(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut next = |what: &str| lines.next().ok_or_else(|| fmt(&format!("truncated before {what}")));

        let head = next("header")?;
        let mut parts = head.split_whitespace();
        if parts.next() != Some(MODEL_MAGIC) {
            return Err(fmt("bad magic"));
        }
        let version: u32 = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| fmt("missing version"))?;
        if version != MODEL_VERSION {
            return Err(LdaError::Version(version));
        }

        fn keyed<'a>(line: &'a str, key: &str) -> Result<&'a str, LdaError> {
            line.strip_prefix(key)
                .filter(|r| r.is_empty() || r.starts_with(' '))
                .map(str::trim)
                .ok_or_else(|| LdaError::Format(format!("expected {key}, found {line:?}")))
        }
        fn usize_of(s: &str) -> Result<usize, LdaError> {
            s.parse().map_err(|_| LdaError::Format(format!("bad integer {s:?}")))
        }
        fn floats(s: &str) -> Result<Vec<f64>, LdaError> {
            s.split_whitespace()
                .map(|x| x.parse::<f64>().map_err(|_| LdaError::Format(format!("bad number {x:?}"))))
                .collect()
        }

        let p = usize_of(keyed(next("p")?, "p")?)?;
        let g = usize_of(keyed(next("groups")?, "groups")?)?;
        let k = usize_of(keyed(next("functions")?, "functions")?)?;
        if !opts.allow_mismatch {
            if let Some(ep) = opts.expect_p.filter(|&ep| ep != p) {
                return Err(LdaError::DimensionMismatch { expected: ep, got: p });
            }
            if let Some(eg) = opts.expect_g.filter(|&eg| eg != g) {
                return Err(fmt(&format!("model has {g} groups, expected {eg}")));
            }
        }
        let group_labels: Vec<u32> = keyed(next("labels")?, "labels")?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| fmt("bad label")))
            .collect::<Result<_, _>>()?;
        let regularization_used = floats(keyed(next("regularization")?, "regularization")?)?
            .first()
            .copied()
            .ok_or_else(|| fmt("missing regularization"))?;
        let acc = keyed(next("training_accuracy")?, "training_accuracy")?;
        let training_accuracy = if acc == "none" {
            None
        } else {
            floats(acc)?.first().copied()
        };
        let eigenvalues = floats(keyed(next("eigenvalues")?, "eigenvalues")?)?;
        let variance_pct = floats(keyed(next("variance_pct")?, "variance_pct")?)?;
        let canonical_correlations =
            floats(keyed(next("canonical_correlations")?, "canonical_correlations")?)?;
        let constants = floats(keyed(next("constants")?, "constants")?)?;

        let mut matrix = |name: &str, rows: usize, cols: usize| -> Result<Vec<Vec<f64>>, LdaError> {
            keyed(next(name)?, name)?;
            (0..rows)
                .map(|_| {
                    let r = floats(keyed(next(name)?, "row")?)?;
                    if r.len() != cols {
                        return Err(LdaError::Format(format!("{name} row has {} values, expected {cols}", r.len())));
                    }
                    Ok(r)
                })
                .collect()
        };
        let coefficients = matrix("coefficients", k, p)?;
        let centroids = matrix("centroids", g, k)?;
        let structure_matrix = matrix("structure", p, k)?;
        keyed(next("end")?, "end")?;

        if group_labels.len() != g
            || eigenvalues.len() != k
            || variance_pct.len() != k
            || canonical_correlations.len() != k
            || constants.len() != k
        {
            return Err(fmt("vector lengths disagree with declared dimensions"));
        }
        Ok(LdaModel {
            coefficients,
            constants,
            centroids,
            eigenvalues,
            variance_pct,
            canonical_correlations,
            structure_matrix,
            group_labels,
            p,
            regularization_used,
            training_accuracy,
        })
    }
}

pub fn save_model(model: &LdaModel, path: impl AsRef<Path>) -> Result<(), LdaError> {
    fs::write(path, model.to_text())?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>, opts: LoadOptions) -> Result<LdaModel, LdaError> {
    LdaModel::from_text(&fs::read_to_string(path)?, opts)
}
