//! Pattern names, host generator specs and edge-list files.

use std::path::Path;

use chroma_core::graph::{self, named, GraphSpec};
use chroma_core::{parse_edge_list, Graph};

use crate::error::CliError;

/// A loaded graph plus, for relabeled files, the original vertex labels.
pub struct Loaded {
    pub graph: Graph,
    pub labels: Option<Vec<String>>,
}

fn number(text: &str, what: &str) -> Result<usize, CliError> {
    text.parse()
        .map_err(|_| CliError::Usage(format!("bad {what} {text:?}")))
}

/// Named patterns: `k2`, `k3`, `k_s`, `k1_r`, `c_n`, `path_n`, `wheel_n`,
/// `diamond`, `tadpole`, `bowtie`, `k4-pendant`, `c4-pendant`. Underscores
/// between the letter and the size are optional (`k5`, `c4`, `path4`).
pub fn named_pattern(name: &str) -> Result<Option<Graph>, CliError> {
    let name = name.trim().to_ascii_lowercase();
    let fixed = match name.as_str() {
        "diamond" => Some(named::diamond()),
        "tadpole" | "paw" => Some(named::tadpole()),
        "bowtie" => Some(named::bowtie()),
        "k4-pendant" | "k4_pendant" => Some(named::k4_pendant()),
        "c4-pendant" | "c4_pendant" => Some(named::c4_pendant()),
        _ => None,
    };
    if fixed.is_some() {
        return Ok(fixed);
    }
    let sized = |prefix: &str| {
        name.strip_prefix(prefix)
            .map(|rest| rest.strip_prefix('_').unwrap_or(rest))
            .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    };
    if let Some(r) = sized("k1_").or_else(|| sized("k1,")) {
        return Ok(Some(graph::star(number(r, "star size")?)));
    }
    if let Some(n) = sized("path") {
        return Ok(Some(graph::path(number(n, "path length")?)));
    }
    if let Some(n) = sized("wheel") {
        let n = number(n, "wheel size")?;
        return graph::generate(&GraphSpec::Wheel(n)).map(Some).map_err(CliError::from);
    }
    if let Some(n) = sized("k") {
        return Ok(Some(graph::complete(number(n, "clique size")?)));
    }
    if let Some(n) = sized("c") {
        let n = number(n, "cycle length")?;
        return graph::generate(&GraphSpec::Cycle(n)).map(Some).map_err(CliError::from);
    }
    Ok(None)
}

pub fn read_file(path: &Path, labels: bool) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if labels {
        let (graph, labels) = graph::parse_labeled_edge_list(&text)?;
        Ok(Loaded {
            graph,
            labels: Some(labels),
        })
    } else {
        Ok(Loaded {
            graph: parse_edge_list(&text)?,
            labels: None,
        })
    }
}

pub fn pattern(text: &str, labels: bool) -> Result<Graph, CliError> {
    if let Some(g) = named_pattern(text)? {
        return Ok(g);
    }
    let path = Path::new(text);
    if path.exists() {
        return Ok(read_file(path, labels)?.graph);
    }
    Err(CliError::Usage(format!("unknown pattern {text:?}: not a known name or a readable file")))
}

/// Host graphs: an edge-list file, a generator spec
/// (`complete:n`, `cycle:n`, `path:n`, `star:r`, `wheel:n`,
/// `multipartite:a,b,..`, `er:n:p:seed`, `copies:<pattern>:m`,
/// `pyramid:<pattern>:n`, `counterexample:<pattern>:n:lambda`) or a pattern
/// name.
pub fn host(text: &str, labels: bool) -> Result<Loaded, CliError> {
    let path = Path::new(text);
    if path.exists() {
        return read_file(path, labels);
    }
    let graph = generated(text)?;
    Ok(Loaded { graph, labels: None })
}

fn generated(text: &str) -> Result<Graph, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let arity = |k: usize| -> Result<(), CliError> {
        if parts.len() == k + 1 {
            Ok(())
        } else {
            Err(CliError::Usage(format!("generator {:?} takes {k} argument(s)", parts[0])))
        }
    };
    let spec = match parts[0] {
        "complete" | "cycle" | "path" | "star" | "wheel" => {
            arity(1)?;
            let n = number(parts[1], "size")?;
            match parts[0] {
                "complete" => GraphSpec::Complete(n),
                "cycle" => GraphSpec::Cycle(n),
                "path" => GraphSpec::Path(n),
                "star" => GraphSpec::Star(n),
                _ => GraphSpec::Wheel(n),
            }
        }
        "multipartite" => {
            arity(1)?;
            let sizes = parts[1]
                .split(',')
                .map(|p| number(p.trim(), "part size"))
                .collect::<Result<Vec<_>, _>>()?;
            GraphSpec::CompleteMultipartite(sizes)
        }
        "er" => {
            arity(3)?;
            let p: f64 = parts[2]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad probability {:?}", parts[2])))?;
            let seed: u64 = parts[3]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad seed {:?}", parts[3])))?;
            GraphSpec::ErdosRenyi {
                n: number(parts[1], "size")?,
                p,
                seed,
            }
        }
        "copies" => {
            arity(2)?;
            let h = pattern(parts[1], false)?;
            return Ok(graph::copies(&h, number(parts[2], "copy count")?));
        }
        "pyramid" => {
            arity(2)?;
            let h = pattern(parts[1], false)?;
            return Ok(graph::pyramid(&h, number(parts[2], "height")?)?);
        }
        "counterexample" => {
            arity(3)?;
            let h = pattern(parts[1], false)?;
            let lambda: f64 = parts[3]
                .parse()
                .map_err(|_| CliError::Usage(format!("bad rate {:?}", parts[3])))?;
            return Ok(graph::counterexample_graph(&h, number(parts[2], "height")?, lambda)?);
        }
        _ => {
            if parts.len() == 1 {
                if let Some(g) = named_pattern(text)? {
                    return Ok(g);
                }
            }
            return Err(CliError::Usage(format!(
                "unknown graph {text:?}: not a file, generator spec or pattern name"
            )));
        }
    };
    Ok(graph::generate(&spec)?)
}
