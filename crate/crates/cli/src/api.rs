//! Request and response shapes shared by the command line and the HTTP service.
//!
//! Both front ends call the functions here and emit [`render`]ed JSON, so the
//! same input produces the same bytes whichever way it arrives.

use std::time::Duration;

use peaceful_core::{
    blocked_cells_with_witness, bounds, count_buckets, two_columns, two_rows, verify_limited,
    witness, AngleSpec, Bounds, Construction, Error, ForbiddenTriple, GridDim, Point, SearchConfig,
    SearchMode, Slope, SlopeBucketIndex, SolveReport,
};
use serde::{Deserialize, Serialize};

/// Largest grid side the service accepts unless configured otherwise.
pub const DEFAULT_N_CAP: u32 = 64;

/// A client-side failure: a stable machine-readable code plus a message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApiError {
    #[serde(rename = "error")]
    pub code: &'static str,
    pub message: String,
    #[serde(skip)]
    pub status: u16,
}

impl ApiError {
    pub fn new(status: u16, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            status,
        }
    }

    pub fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(400, code, message)
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, code) = match &e {
            Error::Domain(_) => (400, "domain_error"),
            Error::OutOfGrid { .. } => (400, "out_of_grid"),
            Error::Parse(_) => (400, "parse_error"),
            Error::NotRepresentable(_) => (400, "not_representable"),
            Error::DegenerateAngle(_) => (400, "degenerate_angle"),
            Error::UnsupportedParameter(_) => (400, "unsupported_parameter"),
            Error::NotPeaceful(_) => (409, "not_peaceful"),
            Error::HypothesisNotMet(_) => (400, "hypothesis_not_met"),
            Error::TooLarge { .. } => (422, "too_large"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

pub type ApiResult<T> = Result<T, ApiError>;

/// Compact JSON followed by a newline.
pub fn render<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string(value).expect("response types always serialize");
    out.push('\n');
    out
}

pub fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> ApiResult<T> {
    serde_json::from_str(text).map_err(|e| ApiError::bad_request("malformed_json", e.to_string()))
}

pub fn parse_theta(text: &str) -> ApiResult<AngleSpec> {
    Ok(peaceful_core::parse_theta(text)?)
}

/// Validates `n` against the grid rules and the size cap.
pub fn grid(n: u32, cap: u32) -> ApiResult<GridDim> {
    if n > cap {
        return Err(Error::TooLarge {
            n,
            cap,
            hint: "use a smaller grid".into(),
        }
        .into());
    }
    Ok(GridDim::new(n)?)
}

/// `{n, theta, points}` as posted to the verify and blocked endpoints.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsRequest {
    pub n: u32,
    pub theta: String,
    #[serde(default)]
    pub points: Vec<Point>,
    /// Stop after this many violations.
    #[serde(default)]
    pub limit: Option<usize>,
}

impl PointsRequest {
    fn resolve(&self, cap: u32) -> ApiResult<(Construction, AngleSpec)> {
        let theta = parse_theta(&self.theta)?;
        let dim = grid(self.n, cap)?;
        Ok((Construction::new(dim, self.points.iter().copied())?, theta))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyResponse {
    pub n: GridDim,
    pub theta: AngleSpec,
    pub size: usize,
    /// `"peaceful"` or `"violations"`.
    pub status: &'static str,
    pub violations: Vec<ForbiddenTriple>,
    pub limit: Option<usize>,
}

impl VerifyResponse {
    pub fn is_peaceful(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify(c: &Construction, theta: AngleSpec, limit: Option<usize>) -> VerifyResponse {
    let violations = verify_limited(c, theta, limit).violations().to_vec();
    VerifyResponse {
        n: c.dim(),
        theta,
        size: c.len(),
        status: if violations.is_empty() {
            "peaceful"
        } else {
            "violations"
        },
        violations,
        limit,
    }
}

pub fn verify_request(req: &PointsRequest, cap: u32) -> ApiResult<VerifyResponse> {
    let (c, theta) = req.resolve(cap)?;
    Ok(verify(&c, theta, req.limit))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockedCell {
    pub cell: Point,
    /// A forbidden triple that placing `cell` would complete.
    pub triple: ForbiddenTriple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockedResponse {
    pub n: GridDim,
    pub theta: AngleSpec,
    pub size: usize,
    pub count: usize,
    pub blocked: Vec<BlockedCell>,
}

pub fn blocked_request(req: &PointsRequest, cap: u32) -> ApiResult<BlockedResponse> {
    let (c, theta) = req.resolve(cap)?;
    let blocked: Vec<BlockedCell> = blocked_cells_with_witness(&c, theta)?
        .into_iter()
        .map(|(cell, triple)| BlockedCell { cell, triple })
        .collect();
    Ok(BlockedResponse {
        n: c.dim(),
        theta,
        size: c.len(),
        count: blocked.len(),
        blocked,
    })
}

pub fn bounds_request(n: u32, theta: &str, cap: u32) -> ApiResult<Bounds> {
    let theta = parse_theta(theta)?;
    Ok(bounds(theta, grid(n, cap)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructKind {
    TwoRows,
    Witness,
}

impl std::str::FromStr for ConstructKind {
    type Err = ApiError;

    fn from_str(s: &str) -> ApiResult<Self> {
        match s {
            "two-rows" | "two_rows" => Ok(ConstructKind::TwoRows),
            "witness" => Ok(ConstructKind::Witness),
            _ => Err(ApiError::bad_request(
                "unknown_kind",
                format!("unknown construction kind {s:?} (two-rows, witness)"),
            )),
        }
    }
}

/// Builds a named construction. `two-rows` needs `n`; `witness` needs `theta`
/// and picks its own grid. `transpose` swaps the axes (two columns).
pub fn construct(
    kind: ConstructKind,
    n: Option<u32>,
    theta: Option<&str>,
    transpose: bool,
    cap: u32,
) -> ApiResult<Construction> {
    let c = match kind {
        ConstructKind::TwoRows => {
            let n = n.ok_or_else(|| ApiError::bad_request("missing_n", "two-rows needs n"))?;
            let dim = grid(n, cap)?;
            return Ok(if transpose {
                two_columns(dim)?
            } else {
                two_rows(dim)?
            });
        }
        ConstructKind::Witness => {
            let theta = theta
                .ok_or_else(|| ApiError::bad_request("missing_theta", "witness needs theta"))?;
            let w = witness(parse_theta(theta)?)?;
            grid(w.dim.n(), cap)?;
            if let Some(n) = n {
                if n != w.dim.n() {
                    return Err(ApiError::bad_request(
                        "domain_error",
                        format!("the witness for {theta} lives on G_{}, not G_{n}", w.dim),
                    ));
                }
            }
            w.construction()
        }
    };
    Ok(if transpose {
        let dim = c.dim();
        Construction::new(dim, c.points().map(|p| Point::new(p.y, p.x)))?
    } else {
        c
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BucketsResponse {
    pub n: GridDim,
    pub slope: String,
    pub count: usize,
    /// `pn + qn - pq`, when the slope is `±p/q` with `p, q < n`.
    pub formula: Option<u64>,
    pub formula_match: Option<bool>,
    pub buckets: Vec<Vec<Point>>,
}

pub fn buckets(n: u32, slope: &str, cap: u32) -> ApiResult<BucketsResponse> {
    let dim = grid(n, cap)?;
    let slope: Slope = slope.parse()?;
    let index = SlopeBucketIndex::new(dim, slope);
    let formula = count_buckets(slope, dim).ok();
    Ok(BucketsResponse {
        n: dim,
        slope: slope.to_string(),
        count: index.len(),
        formula,
        formula_match: formula.map(|f| f == index.len() as u64),
        buckets: index.buckets().to_vec(),
    })
}

/// Search parameters, shared by `peaceful solve` and `POST /api/solve`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    pub n: u32,
    pub theta: String,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    #[serde(default)]
    pub budget_seconds: Option<f64>,
    #[serde(default)]
    pub symmetry_breaking: Option<bool>,
    #[serde(default)]
    pub restarts: Option<u32>,
}

impl SolveRequest {
    pub fn config(&self, cap: u32) -> ApiResult<(GridDim, AngleSpec, SearchConfig)> {
        let theta = parse_theta(&self.theta)?;
        let dim = grid(self.n, cap)?;
        let mut cfg = SearchConfig::default();
        if let Some(mode) = &self.mode {
            cfg.mode = mode.parse::<SearchMode>()?;
        }
        if let Some(seed) = self.seed {
            cfg.rng_seed = seed;
        }
        cfg.node_budget = self.budget_nodes;
        if let Some(secs) = self.budget_seconds {
            cfg.time_budget = Some(Duration::try_from_secs_f64(secs).map_err(|_| {
                ApiError::bad_request("invalid_budget", format!("bad time budget {secs}"))
            })?);
        }
        if let Some(sym) = self.symmetry_breaking {
            cfg.symmetry_breaking = sym;
        }
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        Ok((dim, theta, cfg))
    }
}

pub fn solve(req: &SolveRequest, cap: u32) -> ApiResult<SolveReport> {
    let (dim, theta, cfg) = req.config(cap)?;
    Ok(peaceful_core::solve(dim, theta, &cfg)?)
}
