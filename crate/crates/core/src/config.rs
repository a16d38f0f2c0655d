//! Declared blow-up configurations and the root classes they make effective.
//!
//! Realizability of a configuration over a field is not checked: the
//! incidences are taken on trust.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

/// A blow-up of the plane at `r` possibly infinitely near points.
///
/// Point indices are 1-based. The JSON form uses exactly these field names;
/// every field except `r` may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub r: usize,
    #[serde(default)]
    pub general_position: bool,
    /// Pairs `[i, j]`: point `j` lies infinitely near point `i`, making `ei - ej` effective.
    #[serde(default)]
    pub infinitely_near: Vec<[usize; 2]>,
    #[serde(default)]
    pub collinear: Vec<[usize; 3]>,
    #[serde(default)]
    pub on_conic: Vec<[usize; 6]>,
    /// The nine points are the base points of a pencil of cubics.
    #[serde(default)]
    pub cubic_pencil: bool,
    /// All points lie on one cubic, so `-K` is effective.
    #[serde(default)]
    pub on_cubic: bool,
    #[serde(default)]
    pub extra_effective_roots: Vec<DivisorClass>,
}

impl SurfaceConfig {
    /// `r` points with no special position declared (`general_position = false`).
    pub fn new(r: usize) -> Self {
        SurfaceConfig {
            r,
            ..Default::default()
        }
    }

    pub fn general(r: usize) -> Self {
        SurfaceConfig {
            r,
            general_position: true,
            ..Default::default()
        }
    }

    pub fn model(&self) -> SurfaceModel {
        SurfaceModel::new(self.r)
    }

    fn has_incidences(&self) -> bool {
        !self.infinitely_near.is_empty()
            || !self.collinear.is_empty()
            || !self.on_conic.is_empty()
            || !self.extra_effective_roots.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidConfig(msg));
        let check_set = |set: &[usize]| -> Result<()> {
            for &i in set {
                if i == 0 || i > self.r {
                    return Err(Error::InvalidConfig(format!(
                        "point index {i} outside 1..={}",
                        self.r
                    )));
                }
            }
            let distinct: BTreeSet<_> = set.iter().collect();
            if distinct.len() != set.len() {
                return Err(Error::InvalidConfig(format!("repeated index in {set:?}")));
            }
            Ok(())
        };
        for pair in &self.infinitely_near {
            check_set(pair)?;
        }
        for triple in &self.collinear {
            check_set(triple)?;
        }
        for six in &self.on_conic {
            check_set(six)?;
        }
        if self.general_position && (self.has_incidences() || self.cubic_pencil) {
            return invalid("general_position excludes incidences and cubic_pencil".into());
        }
        if self.cubic_pencil && self.r != 9 {
            return invalid(format!("cubic_pencil requires r = 9, found r = {}", self.r));
        }
        let model = self.model();
        for root in &self.extra_effective_roots {
            model.check(root).map_err(|_| {
                Error::InvalidConfig(format!(
                    "extra root {root:?} has {} exceptional coefficients, expected {}",
                    root.r(),
                    self.r
                ))
            })?;
            if !model.is_root(root)? {
                return invalid(format!("extra root {root:?} fails R^2 = -2, R.K = 0"));
            }
        }
        Ok(())
    }

    /// Root classes made effective by the declared incidences.
    pub fn declared_roots(&self) -> Result<BTreeSet<DivisorClass>> {
        self.validate()?;
        let r = self.r;
        let mut roots = BTreeSet::new();
        for &[i, j] in &self.infinitely_near {
            let root =
                DivisorClass::exceptional(r, i).checked_sub(&DivisorClass::exceptional(r, j))?;
            roots.insert(root);
        }
        for triple in &self.collinear {
            roots.insert(DivisorClass::line_through(r, triple));
        }
        for six in &self.on_conic {
            let mut m = vec![0; r];
            for &p in six {
                m[p - 1] = 1;
            }
            roots.insert(DivisorClass::new(2, m));
        }
        roots.extend(self.extra_effective_roots.iter().cloned());

        let model = self.model();
        for root in &roots {
            if !model.is_root(root)? {
                return Err(Error::InvariantBreach(format!(
                    "declared root {root:?} fails the root predicate"
                )));
            }
        }
        Ok(roots)
    }

    /// Whether `-K` is known to be effective.
    ///
    /// True for `r <= 9` since `chi(-K) = 10 - r > 0` and `h0(K + K)` vanishes
    /// on a rational surface; otherwise only when a cubic through the points
    /// has been declared.
    pub fn is_anticanonical(&self) -> bool {
        self.r <= 9 || self.on_cubic || self.cubic_pencil
    }
}
