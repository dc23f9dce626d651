//! Seeded sampling of marked point clouds and coupled binomial/Poisson views.

use super::density::{DensityModel, GridDensity};
use crate::geometry::{Point2, Point3, TAU};
use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Master seed plus stream id. Identical pairs reproduce identical samples
/// on any thread count; concurrent replicates take distinct stream ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    pub master: u64,
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(master: u64, stream: u64) -> Self {
        Self { master, stream }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// Positions plus i.i.d.-uniform sector inclinations.
#[derive(Debug, Clone, Default)]
pub struct MarkedPointCloud {
    pub positions: Vec<Point2>,
    pub inclinations: Vec<f64>,
}

impl MarkedPointCloud {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// 3-d cloud: positions plus azimuth and elevation marks.
#[derive(Debug, Clone, Default)]
pub struct MarkedPointCloud3 {
    pub positions: Vec<Point3>,
    pub azimuths: Vec<f64>,
    pub elevations: Vec<f64>,
}

impl MarkedPointCloud3 {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

fn sample_position(d: &DensityModel, rng: &mut ChaCha8Rng) -> Point2 {
    match d {
        DensityModel::UniformUnitSquare => Point2::new(rng.gen::<f64>(), rng.gen::<f64>()),
        DensityModel::StdGaussian2 => {
            // Box-Muller keeps the draw count fixed at two uniforms
            let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.gen::<f64>();
            let r = (-2.0 * u1.ln()).sqrt();
            let theta = TAU * u2;
            Point2::new(r * theta.cos(), r * theta.sin())
        }
        DensityModel::Grid(g) => sample_grid(g, rng),
    }
}

fn sample_grid(g: &GridDensity, rng: &mut ChaCha8Rng) -> Point2 {
    // inverse CDF over the flattened cells, then uniform within the cell
    let cell_area = g.cell_size * g.cell_size;
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut chosen = g.values().len() - 1;
    for (idx, &v) in g.values().iter().enumerate() {
        acc += v * cell_area;
        if u < acc {
            chosen = idx;
            break;
        }
    }
    let ix = chosen % g.nx;
    let iy = chosen / g.nx;
    let (x0, y0, _, _) = g.cell_rect(ix, iy);
    Point2::new(
        x0 + rng.gen::<f64>() * g.cell_size,
        y0 + rng.gen::<f64>() * g.cell_size,
    )
}

/// Sample `n` positions i.i.d. from the density plus uniform inclinations.
pub fn sample_marked(d: &DensityModel, n: usize, seed: SeedSpec) -> MarkedPointCloud {
    let mut rng = seed.rng();
    sample_marked_with(d, n, &mut rng)
}

fn sample_marked_with(d: &DensityModel, n: usize, rng: &mut ChaCha8Rng) -> MarkedPointCloud {
    let mut positions = Vec::with_capacity(n);
    let mut inclinations = Vec::with_capacity(n);
    for _ in 0..n {
        positions.push(sample_position(d, rng));
        inclinations.push(rng.gen::<f64>() * TAU);
    }
    MarkedPointCloud {
        positions,
        inclinations,
    }
}

/// Uniform-cube 3-d cloud with uniform azimuth and elevation marks.
pub fn sample_marked_cube3(n: usize, seed: SeedSpec) -> MarkedPointCloud3 {
    let mut rng = seed.rng();
    let mut positions = Vec::with_capacity(n);
    let mut azimuths = Vec::with_capacity(n);
    let mut elevations = Vec::with_capacity(n);
    for _ in 0..n {
        positions.push(Point3::new(rng.gen(), rng.gen(), rng.gen()));
        azimuths.push(rng.gen::<f64>() * TAU);
        elevations.push(rng.gen::<f64>() * TAU);
    }
    MarkedPointCloud3 {
        positions,
        azimuths,
        elevations,
    }
}

/// One i.i.d. stream serving both the size-`n` binomial view (first `n`
/// points) and the Poisson view (first `n_poisson` points).
#[derive(Debug, Clone)]
pub struct CoupledSample {
    pub cloud: MarkedPointCloud,
    pub n: usize,
    pub n_poisson: usize,
}

/// Draw `N ~ Poi(n)`, then a single marked stream of length `max(n, N)`.
pub fn sample_coupled(d: &DensityModel, n: usize, seed: SeedSpec) -> CoupledSample {
    assert!(n >= 1);
    let mut rng = seed.rng();
    let poisson = rand_distr::Poisson::new(n as f64).expect("n >= 1");
    let n_poisson = poisson.sample(&mut rng) as usize;
    let cloud = sample_marked_with(d, n.max(n_poisson), &mut rng);
    CoupledSample {
        cloud,
        n,
        n_poisson,
    }
}
