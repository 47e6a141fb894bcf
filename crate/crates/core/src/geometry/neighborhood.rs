use super::{theta_weight, AnisoParams, PhaseGrid, RegionMask, Shape};
use crate::error::{invalid, Error, Result};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Dilates a raster by the point-dependent boxes |x − y| < εθ^ρ, |ξ − η| < εθ^{ρσ}.
///
/// Radii are rounded up to whole cells (at least one), so the result contains
/// every lattice point of the exact neighbourhood of the raster.
pub fn dilate_raster(grid: &PhaseGrid, raster: &[bool], p: &AnisoParams, eps: f64) -> Vec<bool> {
    let (nx, nxi) = (grid.nx, grid.nxi);
    let (hx, hxi) = (grid.hx(), grid.hxi());
    let (rho, sigma) = (p.rho(), p.sigma());
    let mut diff = vec![0i32; (nx + 1) * nxi];
    for (idx, _) in raster.iter().enumerate().filter(|(_, &b)| b) {
        let (i, j) = grid.coords(idx);
        let th = theta_weight(p, grid.point(i, j));
        let cx = ((eps * th.powf(rho) / hx).ceil() as usize).max(1);
        let cxi = ((eps * th.powf(rho * sigma) / hxi).ceil() as usize).max(1);
        let i0 = i.saturating_sub(cx);
        let i1 = (i + cx + 1).min(nx);
        for jj in j.saturating_sub(cxi)..(j + cxi + 1).min(nxi) {
            let row = jj * (nx + 1);
            diff[row + i0] += 1;
            diff[row + i1] -= 1;
        }
    }
    let mut out = vec![false; grid.len()];
    for jj in 0..nxi {
        let mut acc = 0i32;
        for i in 0..nx {
            acc += diff[jj * (nx + 1) + i];
            out[grid.index(i, jj)] = acc > 0;
        }
    }
    out
}

/// Ω_{ρ,ε}: anisotropic ε-neighbourhood of the rasterised region.
pub fn aniso_neighborhood(p: &AnisoParams, omega: &RegionMask, eps: f64) -> Result<RegionMask> {
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    let grid = *omega.grid();
    let sources: Vec<_> = omega
        .raster()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(idx, _)| grid.point_at(idx))
        .collect();
    if sources.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let raster = dilate_raster(&grid, omega.raster(), p, eps);
    let shape = Shape::Neighborhood { sources: Arc::new(sources), eps, params: *p };
    Ok(RegionMask::from_parts(grid, raster, shape))
}

/// Largest μ on the ladder min(1, δ − ε)·2^{−i} for which the μ-neighbourhoods of
/// Ω_{ρ,ε} and of the complement of Ω_{ρ,δ} are disjoint on the raster.
pub fn separation_mu(p: &AnisoParams, omega: &RegionMask, eps: f64, delta: f64) -> Result<f64> {
    if !(0.0 < eps && eps < delta && delta < 1.0) {
        return Err(invalid("need 0 < eps < delta < 1"));
    }
    if omega.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let grid = *omega.grid();
    let inner = dilate_raster(&grid, omega.raster(), p, eps);
    let outer: Vec<bool> = dilate_raster(&grid, omega.raster(), p, delta).iter().map(|b| !b).collect();
    let mut mu = (delta - eps).min(1.0);
    while mu >= 1e-6 {
        let a = dilate_raster(&grid, &inner, p, mu);
        let b = dilate_raster(&grid, &outer, p, mu);
        if !a.iter().zip(&b).any(|(x, y)| *x && *y) {
            return Ok(mu);
        }
        mu *= 0.5;
    }
    Err(Error::NoSeparatingMu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{PhasePoint, Region};

    #[test]
    fn single_point_box() {
        let g = PhaseGrid::square(4.0, 81).unwrap();
        let p = AnisoParams::isotropic();
        let om = RegionMask::from_region(Region::Point { x: 1.0, xi: 0.0 }, g);
        let n = aniso_neighborhood(&p, &om, 0.5).unwrap();
        assert!(n.contains(PhasePoint::new(1.5, 0.5)));
        assert!(!n.contains(PhasePoint::new(2.1, 0.0)));
        // exact lattice neighbourhood ⊆ raster
        for idx in 0..g.len() {
            if n.contains(g.point_at(idx)) {
                assert!(n.raster()[idx]);
            }
        }
    }

    #[test]
    fn contains_region() {
        let g = PhaseGrid::square(6.0, 65).unwrap();
        let p = AnisoParams::new(2, 1, 0.7).unwrap();
        let om = RegionMask::from_region(Region::FreqCone { c: 2.0, k: 2, m: 1 }, g);
        for eps in [0.01, 0.1, 0.4] {
            let n = aniso_neighborhood(&p, &om, eps).unwrap();
            assert!(om.is_subset_of(&n).unwrap());
        }
    }

    #[test]
    fn empty_region_rejected() {
        let g = PhaseGrid::square(2.0, 17).unwrap();
        let om = RegionMask::from_region(Region::Empty, g);
        assert_eq!(aniso_neighborhood(&AnisoParams::isotropic(), &om, 0.1).unwrap_err(), Error::EmptyRegion);
    }
}
