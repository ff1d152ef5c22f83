//! Browser bindings: render a Fatou raster, inspect the component under the
//! cursor, and wind a circle image around a point.

use std::f64::consts::PI;

use serde_json::json;
use wasm_bindgen::prelude::*;

use wandering::certify::{winding_number, Circle};
use wandering::cli::label_color;
use wandering::dynamics::{classify_grid, Corridor, OrbitConfig, RasterGrid};
use wandering::maps::{build_family, FamilyId, MeromorphicMap, Params};
use wandering::numerics::ComplexBox;
use wandering::topology::{connectivity, label_components, surrounds, ComponentMap};
use wandering::ComplexPoint;

fn js(e: wandering::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Explorer {
    map: MeromorphicMap,
    corridor: Option<Corridor>,
    raster: Option<(RasterGrid, ComponentMap)>,
}

#[wasm_bindgen]
impl Explorer {
    /// `family` is `ex1`, `ex2` or `ex5`; `eps` is ignored for `ex5`.
    /// `ex1` uses `a = 2^-6`, `ex2` the certified radius `1/32`.
    #[wasm_bindgen(constructor)]
    pub fn new(family: &str, eps: f64) -> Result<Explorer, JsError> {
        let id: FamilyId = family.parse().map_err(js)?;
        let r1 = 1.0 / 32.0;
        let (params, corridor) = match id {
            FamilyId::Ex1 => (Params::from([("a".into(), 2f64.powi(-6)), ("eps".into(), eps)]), None),
            FamilyId::Ex2 => (
                Params::from([("eps".into(), eps), ("r1".into(), r1)]),
                Some(Corridor {
                    origin: ComplexPoint::new(0.0, 0.0),
                    step: ComplexPoint::new(2.0 * PI, 0.0),
                    radius: r1,
                }),
            ),
            FamilyId::Ex5 => (Params::new(), None),
            other => return Err(JsError::new(&format!("family `{other}` is not offered here"))),
        };
        let map = build_family(id, &params).map_err(js)?;
        Ok(Explorer { map, corridor, raster: None })
    }

    /// Classifies the window and returns RGBA bytes, top row first.
    #[allow(clippy::too_many_arguments)]
    pub fn render(
        &mut self,
        re_lo: f64,
        re_hi: f64,
        im_lo: f64,
        im_hi: f64,
        width: usize,
        height: usize,
        max_iter: usize,
    ) -> Result<Vec<u8>, JsError> {
        let cfg = OrbitConfig { max_iter, ..OrbitConfig::default() };
        let window = ComplexBox::new(re_lo, re_hi, im_lo, im_hi);
        let grid = classify_grid(&self.map, window, width, height, &cfg, self.corridor.as_ref()).map_err(js)?;
        let cm = label_components(&grid);
        let mut rgba = Vec::with_capacity(width * height * 4);
        for j in (0..height).rev() {
            for i in 0..width {
                rgba.extend_from_slice(&label_color(grid.label(i, j)));
                rgba.push(255);
            }
        }
        self.raster = Some((grid, cm));
        Ok(rgba)
    }

    /// JSON description of the component under `(re, im)` in the last render.
    pub fn component_at(&self, re: f64, im: f64) -> Result<String, JsError> {
        let (grid, cm) = self.raster.as_ref().ok_or_else(|| JsError::new("nothing rendered yet"))?;
        let p = ComplexPoint::new(re, im);
        let (i, j) = grid.pixel_of(p).map_err(js)?;
        let label = serde_json::to_value(grid.label(i, j)).unwrap_or_default();
        let Some(id) = cm.component_at(p).map_err(js)? else {
            return Ok(json!({ "label": label, "component": null }).to_string());
        };
        let info = cm.component(id).map_err(js)?;
        let report = connectivity(cm, id).map_err(js)?;
        let origin = ComplexPoint::new(0.0, 0.0);
        let around_origin = grid.window.contains_point(origin) && surrounds(cm, id, origin).map_err(js)?;
        Ok(json!({
            "label": label,
            "component": id,
            "pixels": info.pixel_count,
            "touches_border": info.touches_border,
            "connectivity": report.connectivity,
            "surrounds_origin": around_origin,
        })
        .to_string())
    }

    /// JSON winding result of `f(|z - c| = radius)` around `w`.
    pub fn winding(&self, c_re: f64, c_im: f64, radius: f64, w_re: f64, w_im: f64) -> Result<String, JsError> {
        let circle = Circle::new(ComplexPoint::new(c_re, c_im), radius);
        let r = winding_number(&self.map, &circle, ComplexPoint::new(w_re, w_im)).map_err(js)?;
        serde_json::to_string(&r).map_err(|e| JsError::new(&e.to_string()))
    }
}
