//! Graph and report writers: GEXF, GraphML, DOT, JSON and CSV. All writers
//! order nodes and edges deterministically, so identical inputs produce
//! byte-identical files. Timestamps appear only when explicitly pinned.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{AttributionGraph, ChangeReport, CoverageStats, Network, NetworkStats};
use crate::model::{DomainKey, TrackingId};

#[derive(Debug, Clone, Default)]
pub struct ExportOptions {
    /// Pinned export timestamp (free-form, e.g. `2021-04-20`); omitted from
    /// the output when unset so default runs stay reproducible.
    pub timestamp: Option<String>,
}

/// Supported graph file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Gexf,
    GraphMl,
    Dot,
    Json,
    CsvEdges,
}

impl GraphFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gexf" => Some(Self::Gexf),
            "graphml" => Some(Self::GraphMl),
            "dot" => Some(Self::Dot),
            "json" => Some(Self::Json),
            "csv-edges" | "csv_edges" | "csv" => Some(Self::CsvEdges),
            _ => None,
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            Self::Gexf => "gexf",
            Self::GraphMl => "graphml",
            Self::Dot => "dot",
            Self::Json => "json",
            Self::CsvEdges => "csv",
        }
    }
}

/// Renders a graph in the requested format.
pub fn write_graph(
    graph: &AttributionGraph,
    networks: &[Network],
    format: GraphFormat,
    opts: &ExportOptions,
) -> String {
    match format {
        GraphFormat::Gexf => write_gexf(graph, networks, opts),
        GraphFormat::GraphMl => write_graphml(graph, opts),
        GraphFormat::Dot => write_dot(graph, opts),
        GraphFormat::Json => write_graph_json(graph, networks, opts),
        GraphFormat::CsvEdges => write_edges_csv(graph),
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn domain_node_id(d: &DomainKey) -> String {
    format!("domain:{}", d.registrable())
}

fn id_node_id(id: &TrackingId) -> String {
    format!("id:{}", id.canonical())
}

fn provenance_label(graph: &AttributionGraph, key: &(DomainKey, TrackingId)) -> String {
    graph.edges[key].iter().map(|c| c.to_string()).collect::<Vec<_>>().join("|")
}

fn network_of(networks: &[Network]) -> BTreeMap<DomainKey, String> {
    let mut map = BTreeMap::new();
    for net in networks {
        for member in &net.members {
            map.insert(member.clone(), net.network_id.clone());
        }
    }
    map
}

pub fn write_gexf(graph: &AttributionGraph, networks: &[Network], opts: &ExportOptions) -> String {
    let net_of = network_of(networks);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n");
    match &opts.timestamp {
        Some(ts) => out.push_str(&format!("  <meta lastmodifieddate=\"{}\">\n", xml_escape(ts))),
        None => out.push_str("  <meta>\n"),
    }
    out.push_str(&format!("    <creator>linkhound {}</creator>\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!(
        "    <description>domain-id attribution graph from wave {}</description>\n",
        xml_escape(&graph.built_from)
    ));
    out.push_str("  </meta>\n");
    out.push_str("  <graph defaultedgetype=\"undirected\">\n");
    out.push_str("    <attributes class=\"node\">\n");
    out.push_str("      <attribute id=\"0\" title=\"type\" type=\"string\"/>\n");
    out.push_str("      <attribute id=\"1\" title=\"seed\" type=\"boolean\"/>\n");
    out.push_str("      <attribute id=\"2\" title=\"category\" type=\"string\"/>\n");
    out.push_str("      <attribute id=\"3\" title=\"network\" type=\"string\"/>\n");
    out.push_str("    </attributes>\n");
    out.push_str("    <attributes class=\"edge\">\n");
    out.push_str("      <attribute id=\"0\" title=\"provenance\" type=\"string\"/>\n");
    out.push_str("    </attributes>\n");
    out.push_str("    <nodes>\n");
    for d in &graph.domains {
        out.push_str(&format!(
            "      <node id=\"{}\" label=\"{}\">\n",
            xml_escape(&domain_node_id(d)),
            xml_escape(d.registrable())
        ));
        out.push_str("        <attvalues>\n");
        out.push_str("          <attvalue for=\"0\" value=\"domain\"/>\n");
        out.push_str(&format!(
            "          <attvalue for=\"1\" value=\"{}\"/>\n",
            graph.seed_domains.contains(d)
        ));
        if let Some(cat) = graph.categories.get(d) {
            out.push_str(&format!("          <attvalue for=\"2\" value=\"{}\"/>\n", xml_escape(cat)));
        }
        if let Some(net) = net_of.get(d) {
            out.push_str(&format!("          <attvalue for=\"3\" value=\"{}\"/>\n", xml_escape(net)));
        }
        out.push_str("        </attvalues>\n");
        out.push_str("      </node>\n");
    }
    for id in &graph.ids {
        out.push_str(&format!(
            "      <node id=\"{}\" label=\"{}\">\n",
            xml_escape(&id_node_id(id)),
            xml_escape(&id.canonical())
        ));
        out.push_str("        <attvalues>\n          <attvalue for=\"0\" value=\"id\"/>\n        </attvalues>\n");
        out.push_str("      </node>\n");
    }
    out.push_str("    </nodes>\n");
    out.push_str("    <edges>\n");
    for (i, key) in graph.edges.keys().enumerate() {
        out.push_str(&format!(
            "      <edge id=\"{i}\" source=\"{}\" target=\"{}\">\n",
            xml_escape(&domain_node_id(&key.0)),
            xml_escape(&id_node_id(&key.1))
        ));
        out.push_str(&format!(
            "        <attvalues>\n          <attvalue for=\"0\" value=\"{}\"/>\n        </attvalues>\n",
            xml_escape(&provenance_label(graph, key))
        ));
        out.push_str("      </edge>\n");
    }
    out.push_str("    </edges>\n  </graph>\n</gexf>\n");
    out
}

pub fn write_graphml(graph: &AttributionGraph, opts: &ExportOptions) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    if let Some(ts) = &opts.timestamp {
        out.push_str(&format!("  <!-- exported {} -->\n", xml_escape(ts)));
    }
    out.push_str("  <key id=\"type\" for=\"node\" attr.name=\"type\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"seed\" for=\"node\" attr.name=\"seed\" attr.type=\"boolean\"/>\n");
    out.push_str("  <key id=\"category\" for=\"node\" attr.name=\"category\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"provenance\" for=\"edge\" attr.name=\"provenance\" attr.type=\"string\"/>\n");
    out.push_str("  <graph id=\"attribution\" edgedefault=\"undirected\">\n");
    for d in &graph.domains {
        out.push_str(&format!("    <node id=\"{}\">\n", xml_escape(&domain_node_id(d))));
        out.push_str("      <data key=\"type\">domain</data>\n");
        out.push_str(&format!("      <data key=\"seed\">{}</data>\n", graph.seed_domains.contains(d)));
        if let Some(cat) = graph.categories.get(d) {
            out.push_str(&format!("      <data key=\"category\">{}</data>\n", xml_escape(cat)));
        }
        out.push_str("    </node>\n");
    }
    for id in &graph.ids {
        out.push_str(&format!("    <node id=\"{}\">\n", xml_escape(&id_node_id(id))));
        out.push_str("      <data key=\"type\">id</data>\n    </node>\n");
    }
    for key in graph.edges.keys() {
        out.push_str(&format!(
            "    <edge source=\"{}\" target=\"{}\">\n",
            xml_escape(&domain_node_id(&key.0)),
            xml_escape(&id_node_id(&key.1))
        ));
        out.push_str(&format!(
            "      <data key=\"provenance\">{}</data>\n    </edge>\n",
            xml_escape(&provenance_label(graph, key))
        ));
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn write_dot(graph: &AttributionGraph, opts: &ExportOptions) -> String {
    let mut out = String::new();
    out.push_str("graph attribution {\n");
    if let Some(ts) = &opts.timestamp {
        out.push_str(&format!("  // exported {ts}\n"));
    }
    for d in &graph.domains {
        let seed = graph.seed_domains.contains(d);
        match graph.categories.get(d) {
            Some(cat) => out.push_str(&format!(
                "  {} [type=domain, seed={seed}, category={}];\n",
                dot_quote(d.registrable()),
                dot_quote(cat)
            )),
            None => out.push_str(&format!("  {} [type=domain, seed={seed}];\n", dot_quote(d.registrable()))),
        }
    }
    for id in &graph.ids {
        out.push_str(&format!("  {} [type=id];\n", dot_quote(&id.canonical())));
    }
    for key in graph.edges.keys() {
        out.push_str(&format!(
            "  {} -- {} [provenance={}];\n",
            dot_quote(key.0.registrable()),
            dot_quote(&key.1.canonical()),
            dot_quote(&provenance_label(graph, key))
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonNode {
    id: String,
    label: String,
    #[serde(rename = "type")]
    node_type: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    category: Option<String>,
}

#[derive(Serialize)]
struct JsonEdge {
    domain: String,
    id: String,
    provenance: Vec<String>,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    built_from: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    exported_at: Option<&'a str>,
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
    networks: &'a [Network],
}

pub fn write_graph_json(graph: &AttributionGraph, networks: &[Network], opts: &ExportOptions) -> String {
    let mut nodes = Vec::new();
    for d in &graph.domains {
        nodes.push(JsonNode {
            id: domain_node_id(d),
            label: d.registrable().to_string(),
            node_type: "domain",
            seed: Some(graph.seed_domains.contains(d)),
            category: graph.categories.get(d).cloned(),
        });
    }
    for id in &graph.ids {
        nodes.push(JsonNode {
            id: id_node_id(id),
            label: id.canonical(),
            node_type: "id",
            seed: None,
            category: None,
        });
    }
    let edges = graph
        .edges
        .iter()
        .map(|((d, id), provs)| JsonEdge {
            domain: d.registrable().to_string(),
            id: id.canonical(),
            provenance: provs.iter().map(|c| c.to_string()).collect(),
        })
        .collect();
    let doc = JsonGraph {
        built_from: &graph.built_from,
        exported_at: opts.timestamp.as_deref(),
        nodes,
        edges,
        networks,
    };
    let mut json = serde_json::to_string_pretty(&doc).expect("serializable");
    json.push('\n');
    json
}

fn csv_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    build(&mut writer).expect("csv write");
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
}

pub fn write_edges_csv(graph: &AttributionGraph) -> String {
    csv_string(|w| {
        w.write_record(["domain", "id", "provenance"])?;
        for ((d, id), provs) in &graph.edges {
            let label = provs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("|");
            w.write_record([d.registrable(), &id.canonical(), &label])?;
        }
        Ok(())
    })
}

pub fn write_networks_csv(networks: &[Network]) -> String {
    csv_string(|w| {
        w.write_record(["network_id", "dimension", "members", "linking_ids", "seed_members"])?;
        for net in networks {
            let members = net.members.iter().map(|d| d.registrable()).collect::<Vec<_>>().join("|");
            let ids = net.linking_ids.iter().map(|i| i.canonical()).collect::<Vec<_>>().join("|");
            let seeds = net.seed_members.iter().map(|d| d.registrable()).collect::<Vec<_>>().join("|");
            w.write_record([&net.network_id, &net.dimension.to_string(), &members, &ids, &seeds])?;
        }
        Ok(())
    })
}

pub fn write_stats_csv(stats: &NetworkStats) -> String {
    csv_string(|w| {
        w.write_record(["n", "min", "max", "mean", "sd", "sd_convention", "sd_degenerate"])?;
        w.write_record([
            stats.n.to_string(),
            stats.min.to_string(),
            stats.max.to_string(),
            format!("{:.3}", stats.mean),
            format!("{:.3}", stats.sd),
            format!("{:?}", stats.sd_convention).to_lowercase(),
            stats.sd_degenerate.to_string(),
        ])?;
        Ok(())
    })
}

pub fn write_coverage_csv(coverage: &CoverageStats, note: Option<&str>) -> String {
    csv_string(|w| {
        w.write_record(["active_seeds", "seeds_with_id", "percent", "note"])?;
        w.write_record([
            coverage.active_seeds.to_string(),
            coverage.seeds_with_id.to_string(),
            coverage.percent_string(),
            note.unwrap_or("").to_string(),
        ])?;
        Ok(())
    })
}

pub fn write_categories_csv(frequency: &[(String, usize)]) -> String {
    csv_string(|w| {
        w.write_record(["category", "count"])?;
        for (label, count) in frequency {
            w.write_record([label, &count.to_string()])?;
        }
        Ok(())
    })
}

pub fn write_changes_csv(report: &ChangeReport) -> String {
    csv_string(|w| {
        w.write_record(["domain", "change", "detail"])?;
        for (domain, delta) in &report.per_domain {
            for id in &delta.ids_deleted {
                w.write_record([domain.registrable(), "id_deleted", &id.canonical()])?;
            }
            for id in &delta.ids_added {
                w.write_record([domain.registrable(), "id_added", &id.canonical()])?;
            }
            for kind in &delta.kinds_added {
                w.write_record([domain.registrable(), "kind_added", kind.as_str()])?;
            }
        }
        for net in &report.networks_dissolved {
            w.write_record(["", "network_dissolved", net])?;
        }
        for net in &report.networks_new {
            w.write_record(["", "network_new", &net.network_id])?;
        }
        Ok(())
    })
}
