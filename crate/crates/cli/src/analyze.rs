use serde_json::{json, Value};

use ilm_core::harness::Caps;
use ilm_core::ilm::{bits_from_lineage, snapshot};
use ilm_core::io::fmt_float;
use ilm_core::metrics::{big_to_f64, clustering_coefficient};
use ilm_core::params::{find_partition_pair, parameter_report};
use ilm_core::spectral::{spectrum_with, SpectrumOptions};
use ilm_core::structure::{complement_is_dirac, hamiltonian, lineage_cycle};
use ilm_core::{Error, Graph, Result};

pub struct Sections {
    pub metrics: bool,
    pub params: bool,
    pub spectral: bool,
    pub structure: bool,
}

/// One report per snapshot `ILM_0 ..= ILM_T` when lineage is known,
/// otherwise a single report.
pub fn analyze(g: &Graph, sections: &Sections, caps: &Caps) -> Result<Value> {
    let bits = bits_from_lineage(g);
    let mut steps = Vec::with_capacity(bits.len() + 1);
    for t in 0..=bits.len() {
        let h = if bits.is_empty() { g.clone() } else { snapshot(g, t)? };
        let mut row = json!({ "t": t, "n": h.n(), "edges": h.edge_count() });
        if t > 0 {
            row["bit"] = json!(bits[t - 1]);
        }
        if sections.metrics {
            row["metrics"] = metrics(&h, caps)?;
        }
        if sections.params {
            row["params"] = serde_json::to_value(parameter_report(&h, caps.coloring_budget, caps.domination_cap))?;
        }
        if sections.spectral {
            row["spectral"] = spectral(&h, caps)?;
        }
        if sections.structure {
            row["structure"] = structure(&h, caps)?;
        }
        steps.push(row);
    }
    Ok(json!({ "steps": steps }))
}

fn metrics(g: &Graph, caps: &Caps) -> Result<Value> {
    let n = g.n();
    let e = g.edge_count();
    let density = if n < 2 { 0.0 } else { 2.0 * e as f64 / (n * (n - 1)) as f64 };
    let clustering = if n <= caps.clustering_max_vertices {
        let c = clustering_coefficient(g)?;
        json!({ "exact": c.to_string(), "value": fmt_float(big_to_f64(&c)) })
    } else {
        Value::Null
    };
    Ok(json!({
        "density": fmt_float(density),
        "edges_per_vertex": fmt_float(e as f64 / n.max(1) as f64),
        "min_degree": g.min_degree(),
        "max_degree": g.max_degree(),
        "clustering": clustering,
    }))
}

fn spectral(g: &Graph, caps: &Caps) -> Result<Value> {
    let opts = SpectrumOptions {
        max_vertices: caps.spectral_max_vertices.max(caps.residual_check_vertices),
        residual_max_vertices: caps.residual_check_vertices,
    };
    match spectrum_with(g, &opts) {
        Ok(sp) => Ok(json!({
            "gap": fmt_float(sp.gap),
            "lambda_1": sp.eigenvalues.get(1).map(|&x| fmt_float(x)),
            "lambda_max": sp.eigenvalues.last().map(|&x| fmt_float(x)),
            "residual": sp.residual.map(fmt_float),
            "isolated": sp.isolated_count,
        })),
        Err(e @ Error::Capacity { .. }) => Ok(json!({ "skipped": e.to_string() })),
        Err(e) => Err(e),
    }
}

fn structure(g: &Graph, caps: &Caps) -> Result<Value> {
    let mut out = json!({
        "complement_dirac": complement_is_dirac(g),
        "partition_pair": find_partition_pair(g),
        "connected": g.is_connected(),
    });
    if g.n() >= 3 && g.n() <= caps.hamilton_max_vertices {
        let h = hamiltonian(g, &caps.hamilton)?;
        out["hamiltonicity"] = json!({ "status": h.status() });
        out["hamiltonicity"]["detail"] = serde_json::to_value(&h)?;
        if !h.is_hamiltonian() && !h.is_non_hamiltonian() {
            out["lineage_cycle"] = json!(lineage_cycle(g)?.is_some());
        }
    }
    Ok(out)
}
