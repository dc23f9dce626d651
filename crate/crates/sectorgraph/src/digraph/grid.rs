//! Flat CSR bucket grids over point clouds, 2-d and 3-d.
//!
//! Cell coordinates are signed 64-bit so unbounded supports (Gaussian
//! positions) index safely; storage is dense over the sample bounding box.

use crate::geometry::{Point2, Point3};

pub struct Grid2 {
    pub cell: f64,
    min_x: f64,
    min_y: f64,
    nx: i64,
    ny: i64,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl Grid2 {
    pub fn build(points: &[Point2], cell: f64) -> Self {
        assert!(cell > 0.0);
        if points.is_empty() {
            return Self {
                cell,
                min_x: 0.0,
                min_y: 0.0,
                nx: 0,
                ny: 0,
                starts: vec![0],
                items: vec![],
            };
        }
        let mut min_x = f64::INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for p in points {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        let nx = ((max_x - min_x) / cell).floor() as i64 + 1;
        let ny = ((max_y - min_y) / cell).floor() as i64 + 1;
        let cells = (nx * ny) as usize;
        assert!(cells <= 1 << 28, "grid too fine: {cells} cells");
        let index = |p: &Point2| -> usize {
            let cx = (((p.x - min_x) / cell).floor() as i64).min(nx - 1);
            let cy = (((p.y - min_y) / cell).floor() as i64).min(ny - 1);
            (cy * nx + cx) as usize
        };
        let mut counts = vec![0u32; cells + 1];
        for p in points {
            counts[index(p) + 1] += 1;
        }
        for i in 0..cells {
            counts[i + 1] += counts[i];
        }
        let starts = counts.clone();
        let mut cursor = counts;
        let mut items = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let c = index(p);
            items[cursor[c] as usize] = i as u32;
            cursor[c] += 1;
        }
        Self {
            cell,
            min_x,
            min_y,
            nx,
            ny,
            starts,
            items,
        }
    }

    pub fn cell_of(&self, p: Point2) -> (i64, i64) {
        (
            ((p.x - self.min_x) / self.cell).floor() as i64,
            ((p.y - self.min_y) / self.cell).floor() as i64,
        )
    }

    pub fn bucket(&self, cx: i64, cy: i64) -> &[u32] {
        if cx < 0 || cy < 0 || cx >= self.nx || cy >= self.ny {
            return &[];
        }
        let c = (cy * self.nx + cx) as usize;
        &self.items[self.starts[c] as usize..self.starts[c + 1] as usize]
    }

    pub fn dims(&self) -> (i64, i64) {
        (self.nx, self.ny)
    }

    /// Visit buckets covering the box `[lo, hi]`.
    pub fn for_each_in_box(&self, lo: Point2, hi: Point2, mut visit: impl FnMut(u32)) {
        let (cx0, cy0) = self.cell_of(lo);
        let (cx1, cy1) = self.cell_of(hi);
        for cy in cy0.max(0)..=cy1.min(self.ny - 1) {
            for cx in cx0.max(0)..=cx1.min(self.nx - 1) {
                for &j in self.bucket(cx, cy) {
                    visit(j);
                }
            }
        }
    }
}

pub struct Grid3 {
    cell: f64,
    min: Point3,
    nx: i64,
    ny: i64,
    nz: i64,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl Grid3 {
    pub fn build(points: &[Point3], cell: f64) -> Self {
        assert!(cell > 0.0);
        if points.is_empty() {
            return Self {
                cell,
                min: Point3::new(0.0, 0.0, 0.0),
                nx: 0,
                ny: 0,
                nz: 0,
                starts: vec![0],
                items: vec![],
            };
        }
        let mut min = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut max = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = Point3::new(min.x.min(p.x), min.y.min(p.y), min.z.min(p.z));
            max = Point3::new(max.x.max(p.x), max.y.max(p.y), max.z.max(p.z));
        }
        let nx = ((max.x - min.x) / cell).floor() as i64 + 1;
        let ny = ((max.y - min.y) / cell).floor() as i64 + 1;
        let nz = ((max.z - min.z) / cell).floor() as i64 + 1;
        let cells = (nx * ny * nz) as usize;
        assert!(cells <= 1 << 28, "grid too fine: {cells} cells");
        let index = |p: &Point3| -> usize {
            let cx = (((p.x - min.x) / cell).floor() as i64).min(nx - 1);
            let cy = (((p.y - min.y) / cell).floor() as i64).min(ny - 1);
            let cz = (((p.z - min.z) / cell).floor() as i64).min(nz - 1);
            ((cz * ny + cy) * nx + cx) as usize
        };
        let mut counts = vec![0u32; cells + 1];
        for p in points {
            counts[index(p) + 1] += 1;
        }
        for i in 0..cells {
            counts[i + 1] += counts[i];
        }
        let starts = counts.clone();
        let mut cursor = counts;
        let mut items = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let c = index(p);
            items[cursor[c] as usize] = i as u32;
            cursor[c] += 1;
        }
        Self {
            cell,
            min,
            nx,
            ny,
            nz,
            starts,
            items,
        }
    }

    pub fn for_each_in_box(&self, lo: Point3, hi: Point3, mut visit: impl FnMut(u32)) {
        let cx0 = (((lo.x - self.min.x) / self.cell).floor() as i64).max(0);
        let cy0 = (((lo.y - self.min.y) / self.cell).floor() as i64).max(0);
        let cz0 = (((lo.z - self.min.z) / self.cell).floor() as i64).max(0);
        let cx1 = (((hi.x - self.min.x) / self.cell).floor() as i64).min(self.nx - 1);
        let cy1 = (((hi.y - self.min.y) / self.cell).floor() as i64).min(self.ny - 1);
        let cz1 = (((hi.z - self.min.z) / self.cell).floor() as i64).min(self.nz - 1);
        for cz in cz0..=cz1 {
            for cy in cy0..=cy1 {
                for cx in cx0..=cx1 {
                    let c = ((cz * self.ny + cy) * self.nx + cx) as usize;
                    for &j in &self.items[self.starts[c] as usize..self.starts[c + 1] as usize] {
                        visit(j);
                    }
                }
            }
        }
    }
}
