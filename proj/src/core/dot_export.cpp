#include "core/dot_export.hpp"

#include <map>
#include <set>
#include <sstream>

namespace pagelink {

namespace {

const char* kShapes[] = {"ellipse", "box", "diamond", "hexagon", "octagon", "trapezium"};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const HeteroGraph& graph, NodeIndex source, NodeIndex target,
                   const Explanation* explanation, const GroundTruth* gt) {
  std::set<NodeIndex> nodes{source, target};
  std::set<EdgeIndex> expl_edges, gt_edges;
  if (explanation) {
    for (const auto& path : explanation->paths) {
      nodes.insert(path.nodes.begin(), path.nodes.end());
      expl_edges.insert(path.edges.begin(), path.edges.end());
    }
  }
  if (gt) {
    for (const auto& path : gt->paths) {
      nodes.insert(path.nodes.begin(), path.nodes.end());
      gt_edges.insert(path.edges.begin(), path.edges.end());
    }
  }

  std::ostringstream out;
  out << "digraph explanation {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontsize=10];\n";
  for (NodeIndex v : nodes) {
    const auto& rec = graph.node(v);
    out << "  n" << v << " [label=" << quote(graph.node_label(v)) << " shape="
        << kShapes[rec.type % (sizeof(kShapes) / sizeof(kShapes[0]))];
    if (v == source || v == target) out << " style=bold color=red";
    out << "];\n";
  }
  // predicted link
  out << "  n" << source << " -> n" << target
      << " [style=dashed color=red constraint=false label=\"predicted\"];\n";
  std::set<EdgeIndex> all_edges = expl_edges;
  all_edges.insert(gt_edges.begin(), gt_edges.end());
  for (EdgeIndex e : all_edges) {
    const auto& rec = graph.edge(e);
    const bool in_expl = expl_edges.count(e) > 0;
    const bool in_gt = gt_edges.count(e) > 0;
    out << "  n" << rec.src << " -> n" << rec.dst << " [label="
        << quote(graph.edge_type_name(rec.type));
    if (in_expl)
      out << " color=forestgreen penwidth=2";
    else if (in_gt)
      out << " color=gray style=dashed";
    if (in_expl && in_gt) out << " fontcolor=forestgreen";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace pagelink
