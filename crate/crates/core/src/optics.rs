//! Free-space image formation onto the 5x6 grating-coupler pixel array,
//! the path-loss budget from collimator to waveguide, and the balanced
//! routing of pixels into four overlapping 3x4 sub-images.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seedmix::derive_seed;

/// Pixel-array columns.
pub const COLS: usize = 5;
/// Pixel-array rows.
pub const ROWS: usize = 6;
/// Total pixels.
pub const PIXELS: usize = COLS * ROWS;
/// Sub-images routed to the first layer.
pub const PATCHES: usize = 4;
/// Pixels per sub-image.
pub const PATCH_PIXELS: usize = 12;

/// Flat pixel index for (col, row), row-major.
pub fn pixel_index(col: usize, row: usize) -> usize {
    row * COLS + col
}

/// Illumination beam from the collimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamParams {
    /// Optical power at the object plane, mW.
    pub power_mw: f64,
    /// Collimated beam diameter, um.
    pub diameter_um: f64,
    pub profile: BeamProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamProfile {
    Uniform,
    /// Gaussian intensity profile with the given 1-sigma radius in um.
    Gaussian { sigma_um: f64 },
}

impl Default for BeamParams {
    fn default() -> Self {
        Self {
            power_mw: 63.0,
            diameter_um: 870.0,
            profile: BeamProfile::Uniform,
        }
    }
}

/// Geometry and coupling figures of the grating-coupler array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    /// Aperture width, um.
    pub aperture_w_um: f64,
    /// Aperture height, um.
    pub aperture_h_um: f64,
    /// Grating-coupler coupling efficiency (fraction).
    pub gc_efficiency: f64,
    /// Light-collecting area of one coupler relative to the aperture area.
    pub fill_factor: f64,
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        Self {
            aperture_w_um: 140.0,
            aperture_h_um: 150.0,
            // "about 30%": 10^-0.5, i.e. exactly 5 dB of coupling loss.
            gc_efficiency: 0.316227766016838,
            fill_factor: 0.0048,
        }
    }
}

impl ArrayGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.gc_efficiency > 0.0 && self.gc_efficiency <= 1.0) {
            return Err(Error::InvalidParams("gc_efficiency must lie in (0, 1]".into()));
        }
        if !(self.fill_factor > 0.0 && self.fill_factor <= 1.0) {
            return Err(Error::InvalidParams("fill_factor must lie in (0, 1]".into()));
        }
        if !(self.aperture_w_um > 0.0 && self.aperture_h_um > 0.0) {
            return Err(Error::InvalidParams("aperture dimensions must be > 0".into()));
        }
        Ok(())
    }

    pub fn aperture_area_um2(&self) -> f64 {
        self.aperture_w_um * self.aperture_h_um
    }

    /// Center of pixel (col, row) relative to the aperture center, um.
    pub fn pixel_center_um(&self, col: usize, row: usize) -> (f64, f64) {
        let pitch_x = self.aperture_w_um / COLS as f64;
        let pitch_y = self.aperture_h_um / ROWS as f64;
        (
            (col as f64 + 0.5) * pitch_x - self.aperture_w_um / 2.0,
            (row as f64 + 0.5) * pitch_y - self.aperture_h_um / 2.0,
        )
    }
}

/// Transmittance pattern placed at the object plane, entries in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    values: [f64; PIXELS],
}

impl Scene {
    pub fn new(values: [f64; PIXELS]) -> Result<Self> {
        for &v in &values {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::SceneOutOfRange(v));
            }
        }
        Ok(Self { values })
    }

    pub fn uniform(v: f64) -> Result<Self> {
        Self::new([v; PIXELS])
    }

    pub fn values(&self) -> &[f64; PIXELS] {
        &self.values
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[pixel_index(col, row)]
    }

    /// Parses a 6-line grid of 5 numbers (whitespace or comma separated).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut values = [0.0; PIXELS];
        let mut n = 0usize;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                if n >= PIXELS {
                    return Err(Error::InvalidDataset("scene grid has too many entries".into()));
                }
                values[n] = tok.parse::<f64>().map_err(|e| {
                    Error::InvalidDataset(format!("bad scene value {tok:?}: {e}"))
                })?;
                n += 1;
            }
        }
        if n != PIXELS {
            return Err(Error::InvalidDataset(format!(
                "scene grid has {n} entries, expected {PIXELS}"
            )));
        }
        Self::new(values)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..ROWS {
            let row: Vec<String> = (0..COLS).map(|c| self.get(c, r).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Optical power coupled into each pixel's waveguide, W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PixelFrame {
    powers_w: [f64; PIXELS],
}

impl PixelFrame {
    pub fn new(powers_w: [f64; PIXELS]) -> Result<Self> {
        for &p in &powers_w {
            if !(p >= 0.0) {
                return Err(Error::NegativePower(p));
            }
        }
        Ok(Self { powers_w })
    }

    pub fn dark() -> Self {
        Self {
            powers_w: [0.0; PIXELS],
        }
    }

    pub fn powers(&self) -> &[f64; PIXELS] {
        &self.powers_w
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.powers_w[pixel_index(col, row)]
    }

    pub fn total_power(&self) -> f64 {
        self.powers_w.iter().sum()
    }
}

/// Amplitude-level noise injected at the imaging stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Bound of the fixed per-pixel gain spread (fraction).
    pub pixel_nonuniformity: f64,
    /// Relative std of the per-sample power jitter.
    pub photocurrent_sigma: f64,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            pixel_nonuniformity: 0.05,
            photocurrent_sigma: 0.01,
            seed: 0,
        }
    }
}

impl NoiseModel {
    pub fn none() -> Self {
        Self {
            pixel_nonuniformity: 0.0,
            photocurrent_sigma: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.05).contains(&self.pixel_nonuniformity) {
            return Err(Error::InvalidParams(
                "pixel_nonuniformity must lie in [0, 0.05]".into(),
            ));
        }
        if !(self.photocurrent_sigma >= 0.0) {
            return Err(Error::InvalidParams("photocurrent_sigma must be >= 0".into()));
        }
        Ok(())
    }
}

/// Per-component path loss from collimator to waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBudget {
    /// Aperture-to-beam area overlap loss, dB.
    pub overlap_db: f64,
    /// Coupler fill-factor loss, dB.
    pub fill_db: f64,
    /// Grating-coupler insertion loss, dB.
    pub gc_db: f64,
    pub total_db: f64,
}

impl LossBudget {
    /// Linear power fraction surviving the full budget.
    pub fn linear_fraction(&self) -> f64 {
        10f64.powf(-self.total_db / 10.0)
    }
}

/// Breaks the collimator-to-waveguide loss into its three components.
///
/// The beam must overfill the array aperture; the uniform-illumination
/// assumption does not hold otherwise.
pub fn path_loss_budget(beam: &BeamParams, geo: &ArrayGeometry) -> Result<LossBudget> {
    geo.validate()?;
    if !(beam.power_mw > 0.0 && beam.diameter_um > 0.0) {
        return Err(Error::InvalidParams("beam power and diameter must be > 0".into()));
    }
    let diagonal = (geo.aperture_w_um.powi(2) + geo.aperture_h_um.powi(2)).sqrt();
    if beam.diameter_um < diagonal {
        return Err(Error::UnsupportedGeometry(format!(
            "beam diameter {} um smaller than aperture diagonal {:.1} um",
            beam.diameter_um, diagonal
        )));
    }
    let beam_area = std::f64::consts::PI * (beam.diameter_um / 2.0).powi(2);
    let overlap_db = -10.0 * (geo.aperture_area_um2() / beam_area).log10();
    let fill_db = -10.0 * geo.fill_factor.log10();
    let gc_db = -10.0 * geo.gc_efficiency.log10();
    Ok(LossBudget {
        overlap_db,
        fill_db,
        gc_db,
        total_db: overlap_db + fill_db + gc_db,
    })
}

/// One physical pixel array with its frozen gain non-uniformity.
///
/// The non-uniformity is drawn once at construction; per-sample jitter is
/// derived from the sample seed, so identical (instance, scene, seed)
/// triples always produce identical frames.
#[derive(Debug, Clone)]
pub struct ImagingSystem {
    beam: BeamParams,
    geometry: ArrayGeometry,
    noise: NoiseModel,
    budget: LossBudget,
    /// Fixed multiplicative gain per pixel, in [1-u, 1+u].
    pixel_gain: [f64; PIXELS],
}

impl ImagingSystem {
    pub fn new(beam: BeamParams, geometry: ArrayGeometry, noise: NoiseModel) -> Result<Self> {
        noise.validate()?;
        let budget = path_loss_budget(&beam, &geometry)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(noise.seed, &[0x1a67]));
        let u = noise.pixel_nonuniformity;
        let mut pixel_gain = [1.0; PIXELS];
        for g in pixel_gain.iter_mut() {
            *g = if u > 0.0 { rng.gen_range(1.0 - u..=1.0 + u) } else { 1.0 };
        }
        Ok(Self {
            beam,
            geometry,
            noise,
            budget,
            pixel_gain,
        })
    }

    pub fn budget(&self) -> &LossBudget {
        &self.budget
    }

    pub fn beam(&self) -> &BeamParams {
        &self.beam
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    /// Nominal (noise-free, all-ones scene) power per pixel, W.
    pub fn nominal_pixel_power_w(&self) -> f64 {
        self.beam.power_mw * 1e-3 * self.budget.linear_fraction()
    }

    /// Relative beam-profile weight at each pixel, mean 1 over the array.
    fn profile_weights(&self) -> [f64; PIXELS] {
        match self.beam.profile {
            BeamProfile::Uniform => [1.0; PIXELS],
            BeamProfile::Gaussian { sigma_um } => {
                let mut w = [0.0; PIXELS];
                let mut sum = 0.0;
                for r in 0..ROWS {
                    for c in 0..COLS {
                        let (x, y) = self.geometry.pixel_center_um(c, r);
                        let g = (-(x * x + y * y) / (2.0 * sigma_um * sigma_um)).exp();
                        w[pixel_index(c, r)] = g;
                        sum += g;
                    }
                }
                let mean = sum / PIXELS as f64;
                for g in w.iter_mut() {
                    *g /= mean;
                }
                w
            }
        }
    }

    /// Forms the image of `scene` on the array.
    ///
    /// Per-pixel power is the budgeted beam power, weighted by the beam
    /// profile, scaled by the scene transmittance, the frozen pixel gain,
    /// and a seeded per-sample jitter.
    pub fn form_image(&self, scene: &Scene, sample_seed: u64) -> PixelFrame {
        let nominal = self.nominal_pixel_power_w();
        let weights = self.profile_weights();
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(self.noise.seed, &[0x5a11, sample_seed]));
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        let mut powers = [0.0; PIXELS];
        for i in 0..PIXELS {
            // Jitter is drawn for every pixel so a fixed sample seed yields
            // the same realization regardless of the scene content.
            let jitter = if self.noise.photocurrent_sigma > 0.0 {
                (1.0 + self.noise.photocurrent_sigma * normal.sample(&mut rng)).max(0.0)
            } else {
                1.0
            };
            powers[i] = nominal * weights[i] * scene.values()[i] * self.pixel_gain[i] * jitter;
        }
        PixelFrame { powers_w: powers }
    }

    /// Brightest frame the system can form: all-ones scene, no noise.
    pub fn reference_frame(&self) -> PixelFrame {
        let nominal = self.nominal_pixel_power_w();
        let weights = self.profile_weights();
        let mut powers = [0.0; PIXELS];
        for i in 0..PIXELS {
            powers[i] = nominal * weights[i];
        }
        PixelFrame { powers_w: powers }
    }
}

/// Assignment of pixels to the four overlapping sub-images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingPlan {
    /// Four ordered lists of (col, row) pixel coordinates.
    pub patches: [[(usize, usize); PATCH_PIXELS]; PATCHES],
    /// Excess loss applied identically to all 48 paths, dB.
    pub route_loss_db: f64,
}

impl RoutingPlan {
    /// The stride-2 tiling of 3x4 patches anchored at columns {0, 2} and
    /// rows {0, 2}; the only such tiling that covers the 5x6 array.
    pub fn default_overlap() -> Self {
        Self::with_anchors([(0, 0), (2, 0), (0, 2), (2, 2)], 2.0)
    }

    /// Builds patches of 3 columns x 4 rows at the given (col, row) anchors.
    pub fn with_anchors(anchors: [(usize, usize); PATCHES], route_loss_db: f64) -> Self {
        let mut patches = [[(0usize, 0usize); PATCH_PIXELS]; PATCHES];
        for (k, &(c0, r0)) in anchors.iter().enumerate() {
            let mut j = 0;
            for r in 0..4 {
                for c in 0..3 {
                    patches[k][j] = (c0 + c, r0 + r);
                    j += 1;
                }
            }
        }
        Self {
            patches,
            route_loss_db,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.route_loss_db >= 0.0) {
            return Err(Error::InvalidPlan("route loss must be >= 0 dB".into()));
        }
        let mut covered = [0u8; PIXELS];
        for (k, patch) in self.patches.iter().enumerate() {
            let min_c = patch.iter().map(|p| p.0).min().unwrap();
            let min_r = patch.iter().map(|p| p.1).min().unwrap();
            let mut seen = [false; PATCH_PIXELS];
            for &(c, r) in patch {
                if c >= COLS || r >= ROWS {
                    return Err(Error::InvalidPlan(format!(
                        "patch {k} references pixel ({c}, {r}) outside the array"
                    )));
                }
                let (dc, dr) = (c - min_c, r - min_r);
                if dc >= 3 || dr >= 4 {
                    return Err(Error::InvalidPlan(format!(
                        "patch {k} is not a contiguous 3x4 block"
                    )));
                }
                let local = dr * 3 + dc;
                if seen[local] {
                    return Err(Error::InvalidPlan(format!(
                        "patch {k} repeats pixel ({c}, {r})"
                    )));
                }
                seen[local] = true;
                covered[pixel_index(c, r)] += 1;
            }
        }
        if covered.iter().any(|&n| n == 0) {
            return Err(Error::InvalidPlan("patches do not cover the array".into()));
        }
        let total: u32 = covered.iter().map(|&n| n as u32).sum();
        if total != 48 {
            return Err(Error::InvalidPlan(format!(
                "expected 48 pixel memberships, found {total}"
            )));
        }
        Ok(())
    }

    /// Number of patches a pixel belongs to.
    pub fn split_count(&self, col: usize, row: usize) -> usize {
        self.patches
            .iter()
            .flatten()
            .filter(|&&p| p == (col, row))
            .count()
    }

    /// Per-pixel split counts, flat-indexed.
    pub fn split_counts(&self) -> [usize; PIXELS] {
        let mut counts = [0usize; PIXELS];
        for &(c, r) in self.patches.iter().flatten() {
            counts[pixel_index(c, r)] += 1;
        }
        counts
    }
}

/// Routes a frame into the four 12-input vectors seen by the first layer.
///
/// Power at shared pixels divides evenly among the patches that contain
/// them; the common excess route loss applies to every path.
pub fn route_subimages(
    frame: &PixelFrame,
    plan: &RoutingPlan,
) -> Result<[[f64; PATCH_PIXELS]; PATCHES]> {
    plan.validate()?;
    let counts = plan.split_counts();
    let loss = 10f64.powf(-plan.route_loss_db / 10.0);
    let mut out = [[0.0; PATCH_PIXELS]; PATCHES];
    for (k, patch) in plan.patches.iter().enumerate() {
        for (j, &(c, r)) in patch.iter().enumerate() {
            let idx = pixel_index(c, r);
            out[k][j] = frame.powers_w[idx] * loss / counts[idx] as f64;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn budget_matches_published_components() {
        let budget = path_loss_budget(&BeamParams::default(), &ArrayGeometry::default()).unwrap();
        // 21000 um^2 aperture over a 870 um diameter spot.
        assert_relative_eq!(budget.overlap_db, 14.518, max_relative = 1e-3);
        assert_relative_eq!(budget.fill_db, 23.188, max_relative = 1e-3);
        assert_relative_eq!(budget.gc_db, 5.0, max_relative = 1e-9);
        assert!((budget.total_db - 42.0).abs() < 1.0);
    }

    #[test]
    fn budget_lossless_limit() {
        let geo = ArrayGeometry {
            gc_efficiency: 1.0,
            fill_factor: 1.0,
            ..ArrayGeometry::default()
        };
        // Beam area equal to the aperture area.
        let diameter = (4.0 * geo.aperture_area_um2() / std::f64::consts::PI).sqrt();
        let beam = BeamParams {
            diameter_um: diameter,
            ..BeamParams::default()
        };
        let budget = path_loss_budget(&beam, &geo).unwrap();
        assert_relative_eq!(budget.total_db, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn budget_rejects_underfilled_aperture() {
        let beam = BeamParams {
            diameter_um: 100.0,
            ..BeamParams::default()
        };
        assert!(matches!(
            path_loss_budget(&beam, &ArrayGeometry::default()),
            Err(Error::UnsupportedGeometry(_))
        ));
    }

    #[test]
    fn form_image_all_ones_is_uniform_at_budget_power() {
        let sys = ImagingSystem::new(
            BeamParams::default(),
            ArrayGeometry::default(),
            NoiseModel::none(),
        )
        .unwrap();
        let frame = sys.form_image(&Scene::uniform(1.0).unwrap(), 0);
        // 63 mW through the 42.7 dB budget.
        let expected = 63e-3 * 10f64.powf(-sys.budget().total_db / 10.0);
        assert_relative_eq!(expected, 3.378e-6, max_relative = 1e-3);
        for &p in frame.powers() {
            assert_relative_eq!(p, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn form_image_dark_scene_stays_dark() {
        let sys = ImagingSystem::new(
            BeamParams::default(),
            ArrayGeometry::default(),
            NoiseModel::default(),
        )
        .unwrap();
        let frame = sys.form_image(&Scene::uniform(0.0).unwrap(), 3);
        assert!(frame.powers().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn nonuniformity_keeps_spread_within_bound() {
        for seed in 0..20 {
            let sys = ImagingSystem::new(
                BeamParams::default(),
                ArrayGeometry::default(),
                NoiseModel {
                    pixel_nonuniformity: 0.05,
                    photocurrent_sigma: 0.0,
                    seed,
                },
            )
            .unwrap();
            let frame = sys.form_image(&Scene::uniform(1.0).unwrap(), 0);
            let max = frame.powers().iter().cloned().fold(f64::MIN, f64::max);
            let min = frame.powers().iter().cloned().fold(f64::MAX, f64::min);
            assert!(max / min <= 1.0 + 0.1053, "spread {} too wide", max / min);
        }
    }

    #[test]
    fn form_image_linear_in_scene_for_fixed_realization() {
        let sys = ImagingSystem::new(
            BeamParams::default(),
            ArrayGeometry::default(),
            NoiseModel::default(),
        )
        .unwrap();
        let mut values = [0.0; PIXELS];
        for (i, v) in values.iter_mut().enumerate() {
            *v = (i as f64 * 0.618).fract();
        }
        let scene = Scene::new(values).unwrap();
        let mut scaled = *scene.values();
        for v in scaled.iter_mut() {
            *v *= 0.25;
        }
        let a = sys.form_image(&scene, 11);
        let b = sys.form_image(&Scene::new(scaled).unwrap(), 11);
        for i in 0..PIXELS {
            assert_relative_eq!(b.powers()[i], 0.25 * a.powers()[i], max_relative = 1e-12);
        }
    }

    #[test]
    fn default_plan_is_valid_with_expected_splits() {
        let plan = RoutingPlan::default_overlap();
        plan.validate().unwrap();
        // Column multiplicities 1,1,2,1,1; row multiplicities 1,1,2,2,1,1.
        assert_eq!(plan.split_count(0, 0), 1);
        assert_eq!(plan.split_count(2, 0), 2);
        assert_eq!(plan.split_count(2, 2), 4);
        assert_eq!(plan.split_count(4, 5), 1);
        assert_eq!(plan.split_counts().iter().sum::<usize>(), 48);
    }

    #[test]
    fn routing_conserves_power_without_loss() {
        let sys = ImagingSystem::new(
            BeamParams::default(),
            ArrayGeometry::default(),
            NoiseModel::default(),
        )
        .unwrap();
        let mut values = [0.0; PIXELS];
        for (i, v) in values.iter_mut().enumerate() {
            *v = ((i * 7 + 3) % 11) as f64 / 11.0;
        }
        let frame = sys.form_image(&Scene::new(values).unwrap(), 5);
        let plan = RoutingPlan {
            route_loss_db: 0.0,
            ..RoutingPlan::default_overlap()
        };
        let routed = route_subimages(&frame, &plan).unwrap();
        let routed_total: f64 = routed.iter().flatten().sum();
        assert_relative_eq!(routed_total, frame.total_power(), max_relative = 1e-12);
    }

    #[test]
    fn routing_divides_shared_pixels() {
        let mut powers = [0.0; PIXELS];
        powers[pixel_index(2, 2)] = 4e-6; // membership 4
        powers[pixel_index(0, 0)] = 1e-6; // membership 1
        let frame = PixelFrame::new(powers).unwrap();
        let plan = RoutingPlan {
            route_loss_db: 0.0,
            ..RoutingPlan::default_overlap()
        };
        let routed = route_subimages(&frame, &plan).unwrap();
        for (k, patch) in plan.patches.iter().enumerate() {
            for (j, &(c, r)) in patch.iter().enumerate() {
                if (c, r) == (2, 2) {
                    assert_relative_eq!(routed[k][j], 1e-6, max_relative = 1e-12);
                }
                if (c, r) == (0, 0) {
                    assert_relative_eq!(routed[k][j], 1e-6, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn malformed_plan_rejected() {
        let mut plan = RoutingPlan::default_overlap();
        plan.patches[0][0] = (4, 5); // breaks contiguity
        assert!(plan.validate().is_err());
    }

    #[test]
    fn scene_round_trips_through_text() {
        let mut values = [0.0; PIXELS];
        values[7] = 0.5;
        values[29] = 1.0;
        let scene = Scene::new(values).unwrap();
        let parsed = Scene::from_text(&scene.to_text()).unwrap();
        assert_eq!(scene, parsed);
    }

    #[test]
    fn scene_rejects_out_of_range() {
        let mut values = [0.0; PIXELS];
        values[3] = 1.2;
        assert!(Scene::new(values).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn routed_outputs_never_exceed_source_pixel(
                seed in 0u64..500,
                loss_db in 0.0f64..6.0,
            ) {
                let sys = ImagingSystem::new(
                    BeamParams::default(),
                    ArrayGeometry::default(),
                    NoiseModel { seed, ..NoiseModel::default() },
                ).unwrap();
                let frame = sys.form_image(&Scene::uniform(1.0).unwrap(), seed);
                let plan = RoutingPlan { route_loss_db: loss_db, ..RoutingPlan::default_overlap() };
                let routed = route_subimages(&frame, &plan).unwrap();
                for (k, patch) in plan.patches.iter().enumerate() {
                    for (j, &(c, r)) in patch.iter().enumerate() {
                        prop_assert!(routed[k][j] <= frame.get(c, r) + 1e-18);
                    }
                }
            }
        }
    }
}
