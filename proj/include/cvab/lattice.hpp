#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace cvab::lattice {

enum class Boundary { toroidal, open };

enum class Axis { horizontal, vertical };

enum class PathKind { primal, dual };

/// What a node of the cluster grid becomes after the reduction to the code.
enum class NodeRole { horizontal_edge, vertical_edge, vertex, face };

/// Cluster-grid coordinates. x runs left to right, y bottom to top.
struct Site {
  int x = 0;
  int y = 0;
};

struct Vertex {
  int index = 0;
  int row = 0;
  int col = 0;
  Site site;
  int cluster_node = 0;
};

struct Edge {
  int index = 0;
  Axis axis = Axis::horizontal;
  Site site;
  int cluster_node = 0;
  /// Edge column (horizontal) or vertex column (vertical).
  int col = 0;
  /// Vertex row (horizontal) or gap row below-to-above (vertical).
  int row = 0;
  /// Endpoints in +x / +y order; -1 marks a dangling end on a rough boundary.
  int lower = -1;
  int upper = -1;
  /// +1 when the edge points along +x / +y, -1 otherwise.
  int orientation = 1;
};

struct FaceTerm {
  int edge = 0;
  int sign = 1;  // o(e,f)
};

struct Face {
  int index = 0;
  Site site;
  int cluster_node = 0;
  std::vector<FaceTerm> boundary;  // counterclockwise from the bottom edge
};

/// Ordered edges with o(e) for primal paths or framing f(e) for dual paths.
struct OrientedPath {
  PathKind kind = PathKind::primal;
  std::vector<int> edges;
  std::vector<int> signs;

  std::size_t size() const { return edges.size(); }
  bool contains(int edge) const;
  int sign_of(int edge) const;  // 0 when absent
};

class Lattice {
 public:
  /// rows x cols counts vertex rows and columns. Throws ValidationError.
  Lattice(int rows, int cols, Boundary boundary);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Boundary boundary() const { return boundary_; }
  bool toroidal() const { return boundary_ == Boundary::toroidal; }

  int cluster_width() const { return width_; }
  int cluster_height() const { return height_; }
  int num_cluster_nodes() const { return width_ * height_; }
  int cluster_node(int x, int y) const;
  Site site_of(int node) const;
  static NodeRole role_at(int x, int y);
  NodeRole role(int node) const;
  /// Nearest neighbours on the cluster grid, ascending.
  std::vector<int> cluster_neighbors(int node) const;

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  /// Index lookups from a cluster node; -1 when the node has a different role.
  int edge_at_node(int node) const { return edge_of_node_.at(node); }
  int vertex_at_node(int node) const { return vertex_of_node_.at(node); }
  int face_at_node(int node) const { return face_of_node_.at(node); }

  int vertex_index(int row, int col) const;
  int horizontal_edge(int edge_col, int row) const;
  int vertical_edge(int vertex_col, int gap_row) const;
  int edge_columns() const { return toroidal() ? cols_ : cols_ + 1; }
  int gap_rows() const { return toroidal() ? rows_ : rows_ - 1; }

  std::vector<int> star(int vertex) const;
  /// o(e,f), or 0 when e is not on the boundary of f.
  int incidence(int edge, int face) const;
  /// Faces whose cluster nodes touch the edge node.
  std::vector<int> faces_beside(int edge) const;

  /// Horizontal primal line along vertex row `row`, traversed +x.
  OrientedPath primal_row(int row) const;
  /// Vertical primal loop along vertex column `col`, traversed +y (torus only).
  OrientedPath primal_column(int col) const;
  /// Dual line crossing every horizontal line at edge column `edge_col`,
  /// traversed +y and framed towards +x.
  OrientedPath dual_column(int edge_col) const;

  /// Sign of the edge when walked from `from` towards the other end.
  int traversal_sign(int edge, bool forward) const;

 private:
  int rows_;
  int cols_;
  Boundary boundary_;
  int width_;
  int height_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<int> edge_of_node_;
  std::vector<int> vertex_of_node_;
  std::vector<int> face_of_node_;
};

Lattice build_lattice(int rows, int cols, Boundary boundary);

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& name);

struct Arc {
  int player = 0;
  int row = 0;
  int first_edge_col = 0;
  int width = 0;
  OrientedPath path;
};

struct WedgePartition {
  int n = 0;
  int w = 0;
  int row = 0;
  std::vector<Arc> arcs;

  /// Player owning edge column `edge_col`; -1 if none.
  int owner_of_column(int edge_col) const;
};

/// Splits the horizontal line at `row` into n contiguous arcs of width w.
WedgePartition partition_wedges(const Lattice& lattice, int n, int w, int row = 0);

struct Percolated {};

struct ReroutedArc {
  OrientedPath path;
  int start_row = 0;
  int end_row = 0;
  /// True when the crossing had to leave the arc's original row at a wedge boundary.
  bool endpoints_moved = false;
  int detour_length = 0;
};

using RerouteResult = std::variant<ReroutedArc, Percolated>;

/// Shortest crossing of the wedge that avoids `lost_edges`.
/// First tries to keep the arc's endpoints; otherwise accepts any left-to-right
/// crossing and reports the moved endpoints.
RerouteResult reroute_path(const Lattice& lattice, const std::set<int>& lost_edges, const Arc& wedge);

/// Edges that belong to the wedge subgraph of `wedge` (horizontal edges of its
/// columns at every row, vertical edges at interior vertex columns).
std::vector<int> wedge_edges(const Lattice& lattice, const Arc& wedge);

}  // namespace cvab::lattice
