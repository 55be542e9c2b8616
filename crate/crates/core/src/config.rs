/// Global tuning knobs with documented defaults.
///
/// Heuristic checks on the sampled backend are falsifiable only relative to
/// these thresholds; every report carries an exact/heuristic tag so that a
/// reader can tell which checks depended on them.
#[derive(Debug, Clone)]
pub struct Config {
    /// Coarsest grid index; eps_k = 2^-k.
    pub k_min: u32,
    /// Finest grid index.
    pub k_max: u32,
    /// Negligibility threshold: a sampled net counts as negligible when its
    /// estimated valuation is at least this.
    pub m_max: f64,
    /// Moderateness threshold: estimated valuation must exceed -big_m_max.
    pub big_m_max: f64,
    /// Number of tail grid points used for the valuation slope fit.
    pub slope_window: usize,
    /// Relative tolerance for adaptive quadrature.
    pub quad_tol: f64,
    /// Graph mesh exponent: per-eps meshes have width eps^m_mesh.
    pub m_mesh: u32,
    /// Default chain depth for saturation witnesses.
    pub n_max: u32,
    /// Cap for the continuity-modulus search.
    pub modulus_cap: u32,
    /// Seed for randomized probes (continuity modulus, sampled fallbacks).
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            k_min: 2,
            k_max: 48,
            m_max: 25.0,
            big_m_max: 50.0,
            slope_window: 16,
            quad_tol: 1e-12,
            m_mesh: 8,
            n_max: 20,
            modulus_cap: 24,
            seed: 0x636f6c6f,
        }
    }
}

impl Config {
    pub fn validate(&self) -> crate::Result<()> {
        if self.k_min < 1 || self.k_max < self.k_min + 8 {
            return Err(crate::Error::Syntax(
                "grid must satisfy k_min >= 1 and k_max >= k_min + 8".into(),
            ));
        }
        if self.quad_tol <= 0.0 {
            return Err(crate::Error::Syntax("tolerances must be positive".into()));
        }
        Ok(())
    }
}
