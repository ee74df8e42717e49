#include "prospecies/quiver.hpp"

#include <algorithm>
#include <queue>

namespace prospecies {

int Quiver::add_vertex(const std::string& label) {
  require(!has_vertex(label) && !has_arrow(label), "LabelCollision",
          "vertex label '" + label + "' already used");
  vertices_.push_back(label);
  return vertex_count() - 1;
}

int Quiver::add_arrow(const std::string& label, const std::string& source,
                      const std::string& target) {
  require(!has_vertex(label) && !has_arrow(label), "LabelCollision",
          "arrow label '" + label + "' already used");
  int s = vertex_index(source);
  int t = vertex_index(target);
  arrows_.push_back({label, s, t});
  return arrow_count() - 1;
}

int Quiver::vertex_index(const std::string& label) const {
  for (int i = 0; i < vertex_count(); ++i)
    if (vertices_[i] == label) return i;
  fail("UnknownLabel", "no vertex '" + label + "'");
}

int Quiver::arrow_index(const std::string& label) const {
  for (int i = 0; i < arrow_count(); ++i)
    if (arrows_[i].label == label) return i;
  fail("UnknownLabel", "no arrow '" + label + "'");
}

bool Quiver::has_vertex(const std::string& label) const {
  return std::find(vertices_.begin(), vertices_.end(), label) !=
         vertices_.end();
}

bool Quiver::has_arrow(const std::string& label) const {
  for (const Arrow& a : arrows_)
    if (a.label == label) return true;
  return false;
}

std::vector<int> Quiver::arrows_from(int v) const {
  std::vector<int> r;
  for (int a = 0; a < arrow_count(); ++a)
    if (arrows_[a].source == v) r.push_back(a);
  return r;
}

std::vector<int> Quiver::arrows_into(int v) const {
  std::vector<int> r;
  for (int a = 0; a < arrow_count(); ++a)
    if (arrows_[a].target == v) r.push_back(a);
  return r;
}

bool Quiver::is_sink(int v) const { return arrows_from(v).empty(); }
bool Quiver::is_source(int v) const { return arrows_into(v).empty(); }

bool Quiver::is_acyclic() const {
  std::vector<int> indeg(vertex_count(), 0);
  for (const Arrow& a : arrows_) ++indeg[a.target];
  std::queue<int> q;
  for (int v = 0; v < vertex_count(); ++v)
    if (indeg[v] == 0) q.push(v);
  int seen = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    ++seen;
    for (int a : arrows_from(v))
      if (--indeg[arrows_[a].target] == 0) q.push(arrows_[a].target);
  }
  return seen == vertex_count();
}

std::vector<int> Quiver::topological_order() const {
  std::vector<int> indeg(vertex_count(), 0);
  for (const Arrow& a : arrows_) ++indeg[a.target];
  std::vector<int> order;
  std::vector<bool> used(vertex_count(), false);
  for (int step = 0; step < vertex_count(); ++step) {
    int pick = -1;
    for (int v = 0; v < vertex_count(); ++v)
      if (!used[v] && indeg[v] == 0) {
        pick = v;
        break;
      }
    require(pick >= 0, "NotAcyclic", "quiver has an oriented cycle");
    used[pick] = true;
    order.push_back(pick);
    for (int a : arrows_from(pick)) --indeg[arrows_[a].target];
  }
  return order;
}

int Quiver::path_source(const Path& p) const {
  return p.trivial() ? p.vertex : arrows_[p.arrows.front()].source;
}

int Quiver::path_target(const Path& p) const {
  return p.trivial() ? p.vertex : arrows_[p.arrows.back()].target;
}

Path Quiver::trivial_path(int v) const {
  require(v >= 0 && v < vertex_count(), "UnknownLabel", "bad vertex index");
  return Path{v, {}};
}

Path Quiver::compose(const Path& after, const Path& first) const {
  require(path_target(first) == path_source(after), "NotComposable",
          "path endpoints do not match");
  if (first.trivial()) return after;
  if (after.trivial()) return first;
  Path r = first;
  r.vertex = -1;
  r.arrows.insert(r.arrows.end(), after.arrows.begin(), after.arrows.end());
  return r;
}

std::string Quiver::path_label(const Path& p) const {
  if (p.trivial()) return "e(" + vertices_[p.vertex] + ")";
  std::string s;
  for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it) {
    if (!s.empty()) s += '.';
    s += arrows_[*it].label;
  }
  return s;
}

std::vector<Path> Quiver::enumerate_paths(int max_len) const {
  require(max_len >= 0, "BadArgument", "negative path length bound");
  std::vector<Path> out;
  std::vector<Path> layer;
  for (int v = 0; v < vertex_count(); ++v) layer.push_back(trivial_path(v));
  out.insert(out.end(), layer.begin(), layer.end());
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Path> next;
    for (const Path& p : layer)
      for (int a = 0; a < arrow_count(); ++a)
        if (arrows_[a].source == path_target(p)) {
          Path q = p;
          q.arrows.push_back(a);
          next.push_back(std::move(q));
        }
    auto label_seq = [&](const Path& p) {
      std::vector<std::string> s;
      for (int a : p.arrows) s.push_back(arrows_[a].label);
      return s;
    };
    std::sort(next.begin(), next.end(), [&](const Path& a, const Path& b) {
      return label_seq(a) < label_seq(b);
    });
    if (next.empty()) break;
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::vector<Path> Quiver::all_paths() const {
  require(is_acyclic(), "NotAcyclic",
          "path set is infinite on a quiver with oriented cycles");
  return enumerate_paths(std::max(0, vertex_count() - 1));
}

Quiver Quiver::double_quiver() const {
  Quiver d;
  for (const std::string& v : vertices_) d.add_vertex(v);
  for (const Arrow& a : arrows_) {
    require(a.label.size() < 5 ||
                a.label.substr(a.label.size() - 5) != "_star",
            "LabelCollision", "arrow '" + a.label + "' already starred");
    d.add_arrow(a.label, vertices_[a.source], vertices_[a.target]);
  }
  for (const Arrow& a : arrows_)
    d.add_arrow(starred(a.label), vertices_[a.target], vertices_[a.source]);
  return d;
}

Quiver Quiver::separated_quiver() const {
  Quiver s;
  for (const std::string& v : vertices_) s.add_vertex(v);
  for (const std::string& v : vertices_) s.add_vertex(barred(v));
  for (const Arrow& a : arrows_)
    s.add_arrow(barred(a.label), vertices_[a.source],
                barred(vertices_[a.target]));
  return s;
}

Quiver Quiver::reflected_quiver(int v, Direction dir) const {
  require(v >= 0 && v < vertex_count(), "UnknownLabel", "bad vertex index");
  if (dir == Direction::Sink)
    require(is_sink(v), "NotSinkOrSource",
            "vertex '" + vertices_[v] + "' is not a sink");
  else
    require(is_source(v), "NotSinkOrSource",
            "vertex '" + vertices_[v] + "' is not a source");
  Quiver r;
  for (const std::string& lab : vertices_) r.add_vertex(lab);
  for (const Arrow& a : arrows_) {
    bool touches = (dir == Direction::Sink) ? a.target == v : a.source == v;
    if (touches)
      r.add_arrow(starred(a.label), vertices_[a.target], vertices_[a.source]);
    else
      r.add_arrow(a.label, vertices_[a.source], vertices_[a.target]);
  }
  return r;
}

bool Quiver::operator==(const Quiver& o) const {
  if (vertices_ != o.vertices_ || arrow_count() != o.arrow_count())
    return false;
  for (int a = 0; a < arrow_count(); ++a) {
    if (arrows_[a].label != o.arrows_[a].label ||
        arrows_[a].source != o.arrows_[a].source ||
        arrows_[a].target != o.arrows_[a].target)
      return false;
  }
  return true;
}

}  // namespace prospecies
