use super::{EdgeKind, QDigraph, Role};

/// Graphviz DOT export. Drivers are boxes, drive edges blue, entanglement
/// edges dashed. Output depends only on the graph.
pub fn to_dot(g: &QDigraph) -> String {
    let mut out = String::from("digraph G {\n");
    for v in g.vertices() {
        let attrs = match v.role {
            Role::State => "shape=circle",
            Role::Driver => "shape=box, color=blue",
        };
        out.push_str(&format!("  {} [{}];\n", quote(&v.label), attrs));
    }
    for e in g.edges() {
        let attrs = match e.kind {
            EdgeKind::Intrinsic => "",
            EdgeKind::Entanglement => " [style=dashed]",
            EdgeKind::Drive => " [color=blue]",
        };
        out.push_str(&format!(
            "  {} -> {}{};\n",
            quote(g.label(e.src)),
            quote(g.label(e.dst)),
            attrs
        ));
    }
    out.push_str("}\n");
    out
}

fn quote(label: &str) -> String {
    let mut s = String::with_capacity(label.len() + 2);
    s.push('"');
    for c in label.chars() {
        if c == '"' || c == '\\' {
            s.push('\\');
        }
        s.push(c);
    }
    s.push('"');
    s
}
