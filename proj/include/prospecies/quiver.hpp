#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prospecies/exact.hpp"

namespace prospecies {

struct Arrow {
  std::string label;
  int source = -1;
  int target = -1;
};

// A path stores its arrows in application order: arrows[0] is traversed
// first.  Written multiplicatively the path is arrows[n-1] ... arrows[0],
// matching function composition.  A trivial path has no arrows and remembers
// its vertex.
struct Path {
  int vertex = -1;            // only meaningful when arrows is empty
  std::vector<int> arrows;    // arrow indices, application order

  int length() const { return static_cast<int>(arrows.size()); }
  bool trivial() const { return arrows.empty(); }
  bool operator==(const Path& o) const {
    return trivial() == o.trivial() &&
           (trivial() ? vertex == o.vertex : arrows == o.arrows);
  }
};

class Quiver {
public:
  Quiver() = default;

  int add_vertex(const std::string& label);
  int add_arrow(const std::string& label, const std::string& source,
                const std::string& target);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int arrow_count() const { return static_cast<int>(arrows_.size()); }
  const std::string& vertex_label(int v) const { return vertices_[v]; }
  const Arrow& arrow(int a) const { return arrows_[a]; }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  int vertex_index(const std::string& label) const;  // UnknownLabel on miss
  int arrow_index(const std::string& label) const;
  bool has_vertex(const std::string& label) const;
  bool has_arrow(const std::string& label) const;

  std::vector<int> arrows_from(int v) const;
  std::vector<int> arrows_into(int v) const;
  bool is_sink(int v) const;    // no outgoing arrows
  bool is_source(int v) const;  // no incoming arrows

  bool is_acyclic() const;
  // Vertices in an order where every arrow goes forward; NotAcyclic if none.
  std::vector<int> topological_order() const;

  int path_source(const Path& p) const;
  int path_target(const Path& p) const;
  Path trivial_path(int v) const;
  // after ∘ first: the arrows of `first` are traversed, then those of
  // `after`.  Requires target(first) == source(after).
  Path compose(const Path& after, const Path& first) const;
  std::string path_label(const Path& p) const;  // composition order, '.' separated

  // All paths of length <= max_len, ordered by length then by the
  // lexicographic order of the arrow label sequence.  Trivial paths come
  // first, ordered by vertex insertion order.
  std::vector<Path> enumerate_paths(int max_len) const;
  // Every path of an acyclic quiver (length <= vertex_count - 1).
  std::vector<Path> all_paths() const;

  Quiver double_quiver() const;     // adds label_star reversals
  Quiver separated_quiver() const;  // bipartite: i -> j becomes i -> j_bar
  enum class Direction { Sink, Source };
  Quiver reflected_quiver(int v, Direction dir) const;

  bool operator==(const Quiver& o) const;

private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
};

inline std::string starred(const std::string& label) { return label + "_star"; }
inline std::string barred(const std::string& label) { return label + "_bar"; }

}  // namespace prospecies
