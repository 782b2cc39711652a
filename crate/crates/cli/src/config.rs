//! Flat `key = value` scenario files.
//!
//! Blank lines and lines starting with `#` or `;` are skipped, as are
//! `[section]` headers. Keys are case-sensitive (`R` and `r` differ).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use polarlab_core::geometry::{make_annulus_mask, make_disk_mask, make_steiner_mask, SteinerShape};
use polarlab_core::optimizer::{Direction, OptStatus};
use polarlab_core::{DomainMask, Grid2D, ScalarField};

use crate::CliError;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Ordered `key → value` pairs; duplicate keys are an error.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(bad(format!("line {}: expected `key = value`, got {line:?}", n + 1)));
        };
        // trailing comments
        let v = v.split(" #").next().unwrap_or(v).trim();
        let k = k.trim();
        if k.is_empty() {
            return Err(bad(format!("line {}: empty key", n + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(bad(format!("line {}: duplicate key {k:?}", n + 1)));
        }
    }
    Ok(out)
}

/// Pulls typed values out of a pair map and remembers which keys were read.
pub(crate) struct Pairs {
    map: BTreeMap<String, String>,
}

impl Pairs {
    pub(crate) fn new(map: BTreeMap<String, String>) -> Self {
        Self { map }
    }

    pub(crate) fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    pub(crate) fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|e| bad(format!("{key} = {v:?}: {e}"))),
        }
    }

    pub(crate) fn real(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.parsed::<f64>(key)?.unwrap_or(default))
    }

    pub(crate) fn finish(self) -> Result<(), CliError> {
        match self.map.keys().next() {
            Some(k) => Err(bad(format!("unknown key {k:?}"))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Disk {
        outer: f64,
    },
    Annulus {
        outer: f64,
        inner: f64,
        shift: f64,
    },
    Steiner(SteinerShape),
    /// Interior of the unit square.
    Square,
    File(PathBuf),
}

impl DomainSpec {
    pub(crate) fn from_pairs(kind: &str, p: &mut Pairs, base: &Path) -> Result<Self, CliError> {
        let spec = match kind {
            "disk" => DomainSpec::Disk { outer: p.real("R", 1.0)? },
            "annulus" => {
                DomainSpec::Annulus { outer: p.real("R", 1.0)?, inner: p.real("r", 0.5)?, shift: p.real("t", 0.0)? }
            }
            "ellipse" => DomainSpec::Steiner(SteinerShape::Ellipse { a: p.real("a", 1.0)?, b: p.real("b", 0.5)? }),
            "rectangle" => DomainSpec::Steiner(SteinerShape::Rectangle {
                half_width: p.real("a", 1.0)?,
                half_height: p.real("b", 0.5)?,
            }),
            "stadium" => {
                DomainSpec::Steiner(SteinerShape::Stadium { half_length: p.real("a", 0.5)?, radius: p.real("b", 0.5)? })
            }
            "square" => DomainSpec::Square,
            "file" => {
                let path = p.take("mask").ok_or_else(|| bad("domain = file needs a `mask` path"))?;
                DomainSpec::File(base.join(path))
            }
            other => return Err(bad(format!("unknown domain {other:?}"))),
        };
        Ok(spec)
    }

    /// Builds the mask on an `n`-cell grid sized to the shape.
    pub fn build(&self, n: usize) -> Result<DomainMask, CliError> {
        let cfg = |e: polarlab_core::Error| bad(format!("domain: {e}"));
        match self {
            DomainSpec::Disk { outer } => {
                let g = Grid2D::covering(n, *outer).map_err(cfg)?;
                make_disk_mask(g, g.middle(), *outer).map_err(cfg)
            }
            DomainSpec::Annulus { outer, inner, shift } => {
                let g = Grid2D::covering(n, *outer).map_err(cfg)?;
                make_annulus_mask(g, *outer, *inner, *shift).map_err(cfg)
            }
            DomainSpec::Steiner(shape) => {
                let extent = match *shape {
                    SteinerShape::Ellipse { a, b } => a.max(b),
                    SteinerShape::Rectangle { half_width, half_height } => half_width.max(half_height),
                    SteinerShape::Stadium { half_length, radius } => half_length + radius.max(0.0),
                };
                let g = Grid2D::covering(n, extent).map_err(cfg)?;
                make_steiner_mask(g, *shape).map_err(cfg)
            }
            DomainSpec::Square => {
                let g = Grid2D::unit_square(n.saturating_sub(1)).map_err(cfg)?;
                DomainMask::from_fn(g, |c, _| !g.is_border(c)).map_err(cfg)
            }
            DomainSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
                DomainMask::from_text(&text).map_err(cfg)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DomainSpec::Disk { outer } => format!("disk R={outer}"),
            DomainSpec::Annulus { outer, inner, shift } => format!("annulus R={outer} r={inner} t={shift}"),
            DomainSpec::Steiner(s) => format!("{s:?}"),
            DomainSpec::Square => "unit square".into(),
            DomainSpec::File(p) => format!("mask file {}", p.display()),
        }
    }
}

/// Initial profile of `g₀` or `V₀`. Only its multiset of values matters for
/// the class; the layout is the start when `init = given`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Constant(f64),
    /// The first `round(fraction · cells)` cells in row-major order carry
    /// `amplitude`, the rest zero.
    Chi {
        fraction: f64,
        amplitude: f64,
    },
    /// `Σ c_k |x − m|^k` about the grid middle `m`.
    Radial(Vec<f64>),
    File(PathBuf),
}

impl FieldSpec {
    pub fn parse(s: &str, base: &Path) -> Result<Self, CliError> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| bad(format!("field spec {s:?}: {e}")));
        match kind.trim() {
            "constant" => Ok(FieldSpec::Constant(num(rest)?)),
            "chi" => {
                let mut it = rest.split(':');
                let fraction = num(it.next().unwrap_or(""))?;
                let amplitude = it.next().map(num).transpose()?.unwrap_or(1.0);
                if !(0.0..=1.0).contains(&fraction) {
                    return Err(bad(format!("chi fraction must lie in [0, 1], got {fraction}")));
                }
                Ok(FieldSpec::Chi { fraction, amplitude })
            }
            "radial" => Ok(FieldSpec::Radial(rest.split(',').map(num).collect::<Result<_, _>>()?)),
            "file" => Ok(FieldSpec::File(base.join(rest.trim()))),
            other => Err(bad(format!("unknown field spec {other:?} in {s:?}"))),
        }
    }

    pub fn build(&self, mask: &Arc<DomainMask>) -> Result<ScalarField, CliError> {
        let cfg = |e: polarlab_core::Error| bad(format!("field: {e}"));
        match self {
            FieldSpec::Constant(c) => ScalarField::constant(mask.clone(), *c).map_err(cfg),
            FieldSpec::Chi { fraction, amplitude } => {
                let k = (fraction * mask.len() as f64).round() as usize;
                let v = (0..mask.len()).map(|s| if s < k { *amplitude } else { 0.0 }).collect();
                ScalarField::new(mask.clone(), v).map_err(cfg)
            }
            FieldSpec::Radial(coef) => {
                let m = mask.grid().middle();
                ScalarField::from_fn(mask.clone(), |_, x| {
                    let r = (x[0] - m[0]).hypot(x[1] - m[1]);
                    coef.iter().rev().fold(0.0, |acc, c| acc * r + c)
                })
                .map_err(cfg)
            }
            FieldSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
                let f = ScalarField::from_text(&text).map_err(cfg)?;
                if **f.mask() != **mask {
                    return Err(bad(format!("{}: field mask differs from the domain", path.display())));
                }
                ScalarField::new(mask.clone(), f.into_values()).map_err(cfg)
            }
        }
    }
}

/// Checks run against the finished optimization; any failure gives exit 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    /// Report entry (by name) at most this large.
    AtMost(String, f64),
    ArgmaxInLOmega(bool),
    GRadial(bool),
    Iterations(usize),
    Status(OptStatus),
    Lambda {
        value: f64,
        rtol: f64,
    },
    /// `Λ*` equals the starting `Λ` to `1e-12` relative.
    LambdaUnchanged,
    FoliationAxis(String),
}

const BOUNDED: [&str; 8] = [
    "schwarz_defect_phi",
    "schwarz_defect_g",
    "steiner_defect_phi",
    "steiner_defect_g",
    "foliated_defect_phi",
    "foliated_defect_g",
    "foliated_defect_v_opposite",
    "ball_symdiff_fraction",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Random,
    Given,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub domain: DomainSpec,
    pub grid: usize,
    pub g0: FieldSpec,
    pub v0: FieldSpec,
    pub direction: Direction,
    pub tol: Option<f64>,
    pub eigen_tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub restarts: usize,
    pub init: Init,
    pub pgm: bool,
    pub out: Option<PathBuf>,
    pub expect: Vec<Expectation>,
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        Self::from_text(&text, base, stem)
    }

    pub fn from_text(text: &str, base: &Path, default_name: &str) -> Result<Self, CliError> {
        let mut p = Pairs::new(parse_pairs(text)?);
        let name = p.take("name").unwrap_or_else(|| default_name.to_string());
        let kind = p.take("domain").ok_or_else(|| bad("missing key `domain`"))?;
        let domain = DomainSpec::from_pairs(&kind, &mut p, base)?;
        let grid = p.parsed::<usize>("grid")?.unwrap_or(64);
        let g0 = FieldSpec::parse(&p.take("g0").ok_or_else(|| bad("missing key `g0`"))?, base)?;
        let v0 = FieldSpec::parse(&p.take("V0").unwrap_or_else(|| "constant:0".into()), base)?;
        let direction = match p.take("direction").as_deref() {
            None | Some("minimize") | Some("min") => Direction::Minimize,
            Some("maximize") | Some("max") => Direction::Maximize,
            Some(other) => return Err(bad(format!("direction must be minimize or maximize, got {other:?}"))),
        };
        let init = match p.take("init").as_deref() {
            None | Some("random") => Init::Random,
            Some("given") => Init::Given,
            Some(other) => return Err(bad(format!("init must be random or given, got {other:?}"))),
        };
        let tol = p.parsed::<f64>("tol")?;
        let eigen_tol = p.real("eigen_tol", 1e-10)?;
        let max_iters = p.parsed::<usize>("max_iters")?.unwrap_or(200);
        let seed = p.parsed::<u64>("seed")?.unwrap_or(0);
        let restarts = p.parsed::<usize>("restarts")?.unwrap_or(1);
        let pgm = p.parsed::<bool>("pgm")?.unwrap_or(true);
        let out = p.take("out").map(|o| base.join(o));

        let mut expect = Vec::new();
        for key in BOUNDED {
            if let Some(v) = p.parsed::<f64>(&format!("expect_{key}"))? {
                expect.push(Expectation::AtMost(key.to_string(), v));
            }
        }
        if let Some(b) = p.parsed::<bool>("expect_argmax_in_l_omega")? {
            expect.push(Expectation::ArgmaxInLOmega(b));
        }
        if let Some(b) = p.parsed::<bool>("expect_g_radial")? {
            expect.push(Expectation::GRadial(b));
        }
        if let Some(n) = p.parsed::<usize>("expect_iterations")? {
            expect.push(Expectation::Iterations(n));
        }
        if let Some(s) = p.take("expect_status") {
            let st = match s.as_str() {
                "converged" => OptStatus::Converged,
                "cycled" => OptStatus::Cycled,
                "max_iters" => OptStatus::MaxIters,
                other => return Err(bad(format!("unknown status {other:?}"))),
            };
            expect.push(Expectation::Status(st));
        }
        let rtol = p.real("expect_lambda_rtol", 1e-9)?;
        if let Some(value) = p.parsed::<f64>("expect_lambda")? {
            expect.push(Expectation::Lambda { value, rtol });
        }
        if p.parsed::<bool>("expect_lambda_unchanged")? == Some(true) {
            expect.push(Expectation::LambdaUnchanged);
        }
        if let Some(axis) = p.take("expect_foliation_axis") {
            expect.push(Expectation::FoliationAxis(axis));
        }
        p.finish()?;

        if grid < 5 {
            return Err(bad(format!("grid must be at least 5, got {grid}")));
        }
        Ok(Scenario {
            name,
            domain,
            grid,
            g0,
            v0,
            direction,
            tol,
            eigen_tol,
            max_iters,
            seed,
            restarts,
            init,
            pgm,
            out,
            expect,
        })
    }
}

/// Parses a one-line domain spec such as `annulus,grid=96,R=1,r=0.3,t=0.2`
/// and returns it with its grid size.
pub fn parse_mask_spec(spec: &str) -> Result<(DomainSpec, usize), CliError> {
    let mut parts = spec.split(',');
    let kind = parts.next().unwrap_or("").trim().to_string();
    let text: String = parts.map(|s| format!("{}\n", s.trim())).collect();
    let mut p = Pairs::new(parse_pairs(&text)?);
    let domain = DomainSpec::from_pairs(&kind, &mut p, Path::new("."))?;
    let grid = p.parsed::<usize>("grid")?.unwrap_or(64);
    p.finish()?;
    Ok((domain, grid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_skip_comments_and_sections() {
        let m = parse_pairs("# c\n[run]\n a = 1 # note\n; x\nb=two\n").unwrap();
        assert_eq!(m.get("a").unwrap(), "1");
        assert_eq!(m.get("b").unwrap(), "two");
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn duplicate_and_malformed_lines_are_rejected() {
        assert!(matches!(parse_pairs("a = 1\na = 2"), Err(CliError::Config(_))));
        assert!(matches!(parse_pairs("just words"), Err(CliError::Config(_))));
    }

    #[test]
    fn scenario_defaults_and_unknown_keys() {
        let s = Scenario::from_text("domain = disk\ng0 = chi:0.3\n", Path::new("."), "x").unwrap();
        assert_eq!(s.name, "x");
        assert_eq!(s.v0, FieldSpec::Constant(0.0));
        assert_eq!(s.direction, Direction::Minimize);
        let e = Scenario::from_text("domain = disk\ng0 = chi:0.3\ncolour = red\n", Path::new("."), "x");
        assert!(matches!(e, Err(CliError::Config(m)) if m.contains("colour")));
    }

    #[test]
    fn field_specs() {
        let b = Path::new(".");
        assert_eq!(FieldSpec::parse("chi:0.25", b).unwrap(), FieldSpec::Chi { fraction: 0.25, amplitude: 1.0 });
        assert_eq!(FieldSpec::parse("chi:0.25:4", b).unwrap(), FieldSpec::Chi { fraction: 0.25, amplitude: 4.0 });
        assert_eq!(FieldSpec::parse("radial:1,0,-1", b).unwrap(), FieldSpec::Radial(vec![1.0, 0.0, -1.0]));
        assert!(FieldSpec::parse("chi:1.5", b).is_err());
        assert!(FieldSpec::parse("wave:1", b).is_err());
    }

    #[test]
    fn radial_profile_is_a_polynomial_in_the_radius() {
        let mask = Arc::new(DomainSpec::Disk { outer: 1.0 }.build(21).unwrap());
        let f = FieldSpec::Radial(vec![1.0, 0.0, -1.0]).build(&mask).unwrap();
        let m = mask.grid().middle();
        for (s, c) in mask.cells().enumerate() {
            let x = mask.grid().center(c);
            let r2 = (x[0] - m[0]).powi(2) + (x[1] - m[1]).powi(2);
            assert!((f.values()[s] - (1.0 - r2)).abs() < 1e-12);
        }
    }

    #[test]
    fn mask_spec_line() {
        let (d, n) = parse_mask_spec("annulus,grid=40,R=1,r=0.3,t=0.2").unwrap();
        assert_eq!(d, DomainSpec::Annulus { outer: 1.0, inner: 0.3, shift: 0.2 });
        assert_eq!(n, 40);
        assert!(parse_mask_spec("annulus,grid=40,q=1").is_err());
        assert!(parse_mask_spec("torus").is_err());
    }
}
