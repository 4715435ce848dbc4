use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use spreadweb::classify::atlas::{genealogy_atlas, AtlasOptions};
use spreadweb::classify::{fingerprint_and_label, spread_stabilizer_order, spreads_isomorphic};
use spreadweb::formats;
use spreadweb::planes::spread_p_rank;
use spreadweb::replace::{apply_replacement, find_bruck_replacements, reguli_in_spread, reverse_regulus};
use spreadweb::spreadcore::{Spread, SpreadSource};
use spreadweb::webs::{search_webs, Web};
use spreadweb::Context;

fn err(e: spreadweb::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// PG(3,q) with its regular spread and that spread's stabilizer.
#[pyclass(name = "Geometry", frozen)]
struct PyGeometry {
    ctx: Arc<Context>,
}

#[pyclass(name = "Spread", frozen)]
struct PySpread {
    ctx: Arc<Context>,
    inner: Spread,
}

#[pyclass(name = "Web", frozen)]
struct PyWeb {
    ctx: Arc<Context>,
    inner: Web,
}

#[pymethods]
impl PyGeometry {
    #[new]
    fn new(q: u32) -> PyResult<Self> {
        Ok(Self {
            ctx: Arc::new(Context::new(q).map_err(err)?),
        })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.ctx.q()
    }

    fn point_count(&self) -> usize {
        self.ctx.pg().point_count()
    }

    fn circle_count(&self) -> usize {
        self.ctx.regular().circle_count()
    }

    fn regular_spread(&self) -> PySpread {
        PySpread {
            ctx: self.ctx.clone(),
            inner: self.ctx.regular_spread(),
        }
    }

    /// Spread from line ids; raises if they do not form a spread.
    fn spread(&self, lines: Vec<u16>) -> PyResult<PySpread> {
        let inner = Spread::new(self.ctx.pg(), lines, SpreadSource::External("python".into())).map_err(err)?;
        Ok(PySpread {
            ctx: self.ctx.clone(),
            inner,
        })
    }

    fn parse_spread(&self, text: &str) -> PyResult<PySpread> {
        let inner = formats::parse_spread(self.ctx.pg(), text, "<string>").map_err(err)?;
        Ok(PySpread {
            ctx: self.ctx.clone(),
            inner,
        })
    }

    fn web(&self, circles: Vec<u16>, k: u32) -> PyResult<PyWeb> {
        let inner = Web::new(self.ctx.regular(), circles, k).map_err(err)?;
        Ok(PyWeb {
            ctx: self.ctx.clone(),
            inner,
        })
    }

    /// All k-webs up to equivalence.
    fn search_webs(&self, py: Python<'_>, k: u32) -> Vec<PyWeb> {
        let ctx = self.ctx.clone();
        let webs = py.detach(|| search_webs(&ctx, k));
        webs.into_iter()
            .map(|inner| PyWeb {
                ctx: self.ctx.clone(),
                inner,
            })
            .collect()
    }

    /// The plane-of-order-25 table as TSV.
    #[pyo3(signature = (all_replacements = false))]
    fn atlas_tsv(&self, py: Python<'_>, all_replacements: bool) -> PyResult<String> {
        let ctx = self.ctx.clone();
        let atlas = py.detach(|| genealogy_atlas(&ctx, AtlasOptions { all_replacements })).map_err(err)?;
        Ok(atlas.to_tsv())
    }
}

#[pymethods]
impl PyWeb {
    #[getter]
    fn k(&self) -> u32 {
        self.inner.k
    }

    #[getter]
    fn circles(&self) -> Vec<u16> {
        self.inner.circles.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Spreads from Bruck-replacing this web in the regular spread.
    fn bruck_replacements(&self) -> PyResult<Vec<PySpread>> {
        let regular = self.ctx.regular_spread();
        find_bruck_replacements(&self.ctx, &self.inner)
            .map_err(err)?
            .iter()
            .map(|r| {
                let inner = apply_replacement(&self.ctx, &regular, r).map_err(err)?;
                Ok(PySpread {
                    ctx: self.ctx.clone(),
                    inner,
                })
            })
            .collect()
    }

    fn to_text(&self) -> String {
        formats::write_web(self.ctx.q(), self.ctx.regular(), &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Web(k={}, circles={:?})", self.inner.k, self.inner.circles)
    }
}

#[pymethods]
impl PySpread {
    #[getter]
    fn lines(&self) -> Vec<u16> {
        self.inner.lines().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.lines().len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn p_rank(&self, py: Python<'_>) -> PyResult<usize> {
        py.detach(|| spread_p_rank(self.ctx.pg(), &self.inner)).map_err(err)
    }

    fn stabilizer_order(&self, py: Python<'_>) -> u64 {
        py.detach(|| spread_stabilizer_order(self.ctx.pg(), &self.inner))
    }

    fn regulus_count(&self) -> usize {
        reguli_in_spread(self.ctx.pg(), &self.inner).len()
    }

    /// Spreads obtained by reversing each contained regulus.
    fn derivations(&self) -> PyResult<Vec<PySpread>> {
        let pg = self.ctx.pg();
        reguli_in_spread(pg, &self.inner)
            .iter()
            .map(|r| {
                Ok(PySpread {
                    ctx: self.ctx.clone(),
                    inner: reverse_regulus(pg, &self.inner, &r.lines).map_err(err)?,
                })
            })
            .collect()
    }

    fn is_isomorphic(&self, py: Python<'_>, other: &Self) -> bool {
        py.detach(|| spreads_isomorphic(self.ctx.pg(), &self.inner, &other.inner).is_some())
    }

    /// `(p_rank, group_order, regulus_count, label)`; the label is None
    /// outside the table of order 25.
    fn fingerprint(&self, py: Python<'_>) -> PyResult<(usize, u64, usize, Option<String>)> {
        let f = py.detach(|| fingerprint_and_label(self.ctx.pg(), &self.inner)).map_err(err)?;
        Ok((f.p_rank, f.full_group_order, f.regulus_count, f.label))
    }

    fn to_text(&self) -> String {
        formats::write_spread(self.ctx.pg(), &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Spread(q={}, lines={})", self.inner.q(), self.inner.lines().len())
    }
}

#[pymodule]
fn pyspreadweb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGeometry>()?;
    m.add_class::<PySpread>()?;
    m.add_class::<PyWeb>()?;
    Ok(())
}
