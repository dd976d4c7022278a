#include "cvab/lattice.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "cvab/errors.hpp"

namespace cvab::lattice {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

int parity_sign(int k) { return (mod(k, 2) == 0) ? 1 : -1; }

}  // namespace

bool OrientedPath::contains(int edge) const {
  return std::find(edges.begin(), edges.end(), edge) != edges.end();
}

int OrientedPath::sign_of(int edge) const {
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges[k] == edge) return signs[k];
  }
  return 0;
}

Lattice::Lattice(int rows, int cols, Boundary boundary)
    : rows_(rows), cols_(cols), boundary_(boundary) {
  if (rows < 1 || cols < 1) {
    std::ostringstream msg;
    msg << "lattice needs rows, cols >= 1 (got " << rows << "x" << cols << ")";
    throw ValidationError(msg.str());
  }
  if (boundary == Boundary::toroidal) {
    if (rows < 2 || cols < 2 || rows % 2 != 0 || cols % 2 != 0) {
      std::ostringstream msg;
      msg << "toroidal lattice needs an even number (>= 2) of vertex rows and columns (got " << rows
          << "x" << cols << ")";
      throw ValidationError(msg.str());
    }
    width_ = 2 * cols;
    height_ = 2 * rows;
  } else {
    width_ = 2 * cols + 1;
    height_ = 2 * rows - 1;
  }

  const int nodes = width_ * height_;
  edge_of_node_.assign(nodes, -1);
  vertex_of_node_.assign(nodes, -1);
  face_of_node_.assign(nodes, -1);

  for (int node = 0; node < nodes; ++node) {
    const Site st = site_of(node);
    switch (role_at(st.x, st.y)) {
      case NodeRole::vertex: {
        Vertex v;
        v.index = static_cast<int>(vertices_.size());
        v.row = st.y / 2;
        v.col = (st.x - 1) / 2;
        v.site = st;
        v.cluster_node = node;
        vertex_of_node_[node] = v.index;
        vertices_.push_back(v);
        break;
      }
      case NodeRole::horizontal_edge:
      case NodeRole::vertical_edge: {
        Edge e;
        e.index = static_cast<int>(edges_.size());
        e.site = st;
        e.cluster_node = node;
        edge_of_node_[node] = e.index;
        edges_.push_back(e);
        break;
      }
      case NodeRole::face: {
        Face f;
        f.index = static_cast<int>(faces_.size());
        f.site = st;
        f.cluster_node = node;
        face_of_node_[node] = f.index;
        faces_.push_back(f);
        break;
      }
    }
  }

  // Endpoints and orientation. The orientation alternates in a checkerboard so
  // that signs along every straight line alternate.
  for (Edge& e : edges_) {
    if (role_at(e.site.x, e.site.y) == NodeRole::horizontal_edge) {
      e.axis = Axis::horizontal;
      e.col = e.site.x / 2;
      e.row = e.site.y / 2;
      const int left = e.col - 1;
      const int right = e.col;
      if (toroidal()) {
        e.lower = vertex_index(e.row, mod(left, cols_));
        e.upper = vertex_index(e.row, mod(right, cols_));
      } else {
        e.lower = left >= 0 ? vertex_index(e.row, left) : -1;
        e.upper = right < cols_ ? vertex_index(e.row, right) : -1;
      }
      e.orientation = parity_sign(e.col + e.row);
    } else {
      e.axis = Axis::vertical;
      e.col = (e.site.x - 1) / 2;
      e.row = (e.site.y - 1) / 2;
      e.lower = vertex_index(e.row, e.col);
      e.upper = vertex_index(toroidal() ? mod(e.row + 1, rows_) : e.row + 1, e.col);
      e.orientation = -parity_sign(e.col + e.row);
    }
  }

  // Counterclockwise boundary: bottom, right, top, left.
  for (Face& f : faces_) {
    const int c = f.site.x / 2;
    const int g = (f.site.y - 1) / 2;
    auto add = [&](int edge, int traversal) {
      f.boundary.push_back({edge, traversal * edges_[edge].orientation});
    };
    const int top_row = toroidal() ? mod(g + 1, rows_) : g + 1;
    add(horizontal_edge(c, g), +1);
    if (toroidal() || c < cols_) add(vertical_edge(toroidal() ? mod(c, cols_) : c, g), +1);
    add(horizontal_edge(c, top_row), -1);
    if (toroidal() || c >= 1) add(vertical_edge(toroidal() ? mod(c - 1, cols_) : c - 1, g), -1);
  }
}

int Lattice::cluster_node(int x, int y) const {
  if (x < 0 || x >= width_ || y < 0 || y >= height_) {
    throw IndexError("cluster site outside the grid");
  }
  return y * width_ + x;
}

Site Lattice::site_of(int node) const {
  if (node < 0 || node >= num_cluster_nodes()) throw IndexError("cluster node out of range");
  return {node % width_, node / width_};
}

NodeRole Lattice::role_at(int x, int y) {
  const bool xe = x % 2 == 0;
  const bool ye = y % 2 == 0;
  if (xe && ye) return NodeRole::horizontal_edge;
  if (!xe && !ye) return NodeRole::vertical_edge;
  if (!xe && ye) return NodeRole::vertex;
  return NodeRole::face;
}

NodeRole Lattice::role(int node) const {
  const Site st = site_of(node);
  return role_at(st.x, st.y);
}

std::vector<int> Lattice::cluster_neighbors(int node) const {
  const Site st = site_of(node);
  std::vector<int> out;
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    int x = st.x + dx[k];
    int y = st.y + dy[k];
    if (toroidal()) {
      x = mod(x, width_);
      y = mod(y, height_);
    } else if (x < 0 || x >= width_ || y < 0 || y >= height_) {
      continue;
    }
    out.push_back(y * width_ + x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int Lattice::vertex_index(int row, int col) const {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) throw IndexError("vertex out of range");
  return row * cols_ + col;
}

int Lattice::horizontal_edge(int edge_col, int row) const {
  if (edge_col < 0 || edge_col >= edge_columns() || row < 0 || row >= rows_) {
    throw IndexError("horizontal edge out of range");
  }
  return edge_of_node_[cluster_node(2 * edge_col, 2 * row)];
}

int Lattice::vertical_edge(int vertex_col, int gap_row) const {
  if (vertex_col < 0 || vertex_col >= cols_ || gap_row < 0 || gap_row >= gap_rows()) {
    throw IndexError("vertical edge out of range");
  }
  return edge_of_node_[cluster_node(2 * vertex_col + 1, 2 * gap_row + 1)];
}

std::vector<int> Lattice::star(int vertex) const {
  if (vertex < 0 || vertex >= num_vertices()) throw IndexError("vertex out of range");
  std::vector<int> out;
  for (const Edge& e : edges_) {
    if (e.lower == vertex || e.upper == vertex) out.push_back(e.index);
  }
  return out;
}

int Lattice::incidence(int edge, int face) const {
  if (face < 0 || face >= num_faces()) throw IndexError("face out of range");
  for (const FaceTerm& t : faces_[face].boundary) {
    if (t.edge == edge) return t.sign;
  }
  return 0;
}

std::vector<int> Lattice::faces_beside(int edge) const {
  if (edge < 0 || edge >= num_edges()) throw IndexError("edge out of range");
  std::vector<int> out;
  for (int nb : cluster_neighbors(edges_[edge].cluster_node)) {
    if (face_of_node_[nb] >= 0) out.push_back(face_of_node_[nb]);
  }
  return out;
}

OrientedPath Lattice::primal_row(int row) const {
  if (row < 0 || row >= rows_) throw IndexError("primal row out of range");
  OrientedPath p;
  p.kind = PathKind::primal;
  for (int c = 0; c < edge_columns(); ++c) {
    const int e = horizontal_edge(c, row);
    p.edges.push_back(e);
    p.signs.push_back(edges_[e].orientation);
  }
  return p;
}

OrientedPath Lattice::primal_column(int col) const {
  if (!toroidal()) throw UnsupportedError("vertical primal loops exist only on the torus");
  if (col < 0 || col >= cols_) throw IndexError("primal column out of range");
  OrientedPath p;
  p.kind = PathKind::primal;
  for (int g = 0; g < rows_; ++g) {
    const int e = vertical_edge(col, g);
    p.edges.push_back(e);
    p.signs.push_back(edges_[e].orientation);
  }
  return p;
}

OrientedPath Lattice::dual_column(int edge_col) const {
  if (edge_col < 0 || edge_col >= edge_columns()) throw IndexError("dual column out of range");
  OrientedPath p;
  p.kind = PathKind::dual;
  for (int j = 0; j < rows_; ++j) {
    const int e = horizontal_edge(edge_col, j);
    p.edges.push_back(e);
    p.signs.push_back(edges_[e].orientation);
  }
  return p;
}

int Lattice::traversal_sign(int edge, bool forward) const {
  if (edge < 0 || edge >= num_edges()) throw IndexError("edge out of range");
  return forward ? edges_[edge].orientation : -edges_[edge].orientation;
}

Lattice build_lattice(int rows, int cols, Boundary boundary) { return Lattice(rows, cols, boundary); }

std::string to_string(Boundary b) { return b == Boundary::toroidal ? "toroidal" : "open"; }

Boundary boundary_from_string(const std::string& name) {
  if (name == "toroidal" || name == "torus") return Boundary::toroidal;
  if (name == "open") return Boundary::open;
  throw ValidationError("unknown boundary '" + name + "' (expected toroidal or open)");
}

int WedgePartition::owner_of_column(int edge_col) const {
  for (const Arc& a : arcs) {
    if (edge_col >= a.first_edge_col && edge_col < a.first_edge_col + a.width) return a.player;
  }
  return -1;
}

WedgePartition partition_wedges(const Lattice& lattice, int n, int w, int row) {
  if (n < 2) throw PartitionError("need at least 2 players");
  if (w < 1) throw PartitionError("arc width must be >= 1");
  const OrientedPath line = lattice.primal_row(row);
  if (static_cast<std::size_t>(n) * static_cast<std::size_t>(w) != line.size()) {
    std::ostringstream msg;
    msg << "n*w = " << n * w << " does not match the " << line.size() << " edges of the primal line";
    throw PartitionError(msg.str());
  }
  WedgePartition part;
  part.n = n;
  part.w = w;
  part.row = row;
  for (int j = 0; j < n; ++j) {
    Arc arc;
    arc.player = j;
    arc.row = row;
    arc.first_edge_col = j * w;
    arc.width = w;
    arc.path.kind = PathKind::primal;
    for (int k = 0; k < w; ++k) {
      arc.path.edges.push_back(line.edges[j * w + k]);
      arc.path.signs.push_back(line.signs[j * w + k]);
    }
    part.arcs.push_back(std::move(arc));
  }
  return part;
}

namespace {

// Wedge subgraph: slots (k, j) with k = 0..w the position between edge columns
// and j the vertex row. Slots 0 and w sit on the wedge's boundary columns.
struct WedgeGraph {
  const Lattice& lat;
  const Arc& arc;
  int w;
  int rows;

  int slot(int k, int j) const { return j * (w + 1) + k; }
  int num_slots() const { return rows * (w + 1); }
  int edge_col(int k) const {
    const int c = arc.first_edge_col + k;
    return lat.toroidal() ? ((c % lat.edge_columns()) + lat.edge_columns()) % lat.edge_columns() : c;
  }
  int vertex_col(int k) const {
    const int c = arc.first_edge_col + k - 1;
    return lat.toroidal() ? ((c % lat.cols()) + lat.cols()) % lat.cols() : c;
  }

  struct Step {
    int to;
    int edge;
    int sign;
  };

  std::vector<Step> steps(int s) const {
    const int k = s % (w + 1);
    const int j = s / (w + 1);
    std::vector<Step> out;
    if (k >= 1) {
      const int e = lat.horizontal_edge(edge_col(k - 1), j);
      out.push_back({slot(k - 1, j), e, lat.traversal_sign(e, false)});
    }
    if (k <= w - 1) {
      const int e = lat.horizontal_edge(edge_col(k), j);
      out.push_back({slot(k + 1, j), e, lat.traversal_sign(e, true)});
    }
    if (k >= 1 && k <= w - 1) {
      const int vc = vertex_col(k);
      if (lat.toroidal() || j + 1 < rows) {
        const int e = lat.vertical_edge(vc, j);
        out.push_back({slot(k, (j + 1) % rows), e, lat.traversal_sign(e, true)});
      }
      if (lat.toroidal() || j >= 1) {
        const int g = (j - 1 + rows) % rows;
        const int e = lat.vertical_edge(vc, g);
        out.push_back({slot(k, g), e, lat.traversal_sign(e, false)});
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const Step& a, const Step& b) { return a.to < b.to; });
    return out;
  }
};

struct Visit {
  int parent = -1;
  int edge = -1;
  int sign = 0;
  int dist = -1;
};

std::vector<Visit> bfs(const WedgeGraph& g, const std::set<int>& lost, const std::vector<int>& sources) {
  std::vector<Visit> visit(g.num_slots());
  std::deque<int> queue;
  for (int s : sources) {
    visit[s].dist = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (const auto& step : g.steps(s)) {
      if (lost.count(step.edge) || visit[step.to].dist >= 0) continue;
      visit[step.to] = {s, step.edge, step.sign, visit[s].dist + 1};
      queue.push_back(step.to);
    }
  }
  return visit;
}

OrientedPath trace(const std::vector<Visit>& visit, int target) {
  OrientedPath p;
  p.kind = PathKind::primal;
  for (int s = target; visit[s].parent >= 0; s = visit[s].parent) {
    p.edges.push_back(visit[s].edge);
    p.signs.push_back(visit[s].sign);
  }
  std::reverse(p.edges.begin(), p.edges.end());
  std::reverse(p.signs.begin(), p.signs.end());
  return p;
}

}  // namespace

std::vector<int> wedge_edges(const Lattice& lattice, const Arc& wedge) {
  WedgeGraph g{lattice, wedge, wedge.width, lattice.rows()};
  std::set<int> out;
  for (int s = 0; s < g.num_slots(); ++s) {
    for (const auto& step : g.steps(s)) out.insert(step.edge);
  }
  return {out.begin(), out.end()};
}

RerouteResult reroute_path(const Lattice& lattice, const std::set<int>& lost_edges, const Arc& wedge) {
  if (wedge.width < 1) throw ValidationError("wedge has no edges");
  if (wedge.row < 0 || wedge.row >= lattice.rows()) throw IndexError("wedge row out of range");
  if (wedge.first_edge_col < 0 || wedge.first_edge_col + wedge.width > lattice.edge_columns()) {
    throw IndexError("wedge columns outside the lattice");
  }
  for (int e : lost_edges) {
    if (e < 0 || e >= lattice.num_edges()) throw IndexError("lost edge out of range");
  }
  const WedgeGraph g{lattice, wedge, wedge.width, lattice.rows()};
  const int w = wedge.width;

  // Keep the agreed endpoints if possible.
  {
    const auto visit = bfs(g, lost_edges, {g.slot(0, wedge.row)});
    const int target = g.slot(w, wedge.row);
    if (visit[target].dist >= 0) {
      ReroutedArc out;
      out.path = trace(visit, target);
      out.start_row = out.end_row = wedge.row;
      out.detour_length = static_cast<int>(out.path.size()) - w;
      return out;
    }
  }

  // Otherwise any left-to-right crossing; endpoints move and the caller renegotiates.
  std::vector<int> sources;
  for (int j = 0; j < g.rows; ++j) sources.push_back(g.slot(0, j));
  const auto visit = bfs(g, lost_edges, sources);
  int best = -1;
  for (int j = 0; j < g.rows; ++j) {
    const int t = g.slot(w, j);
    if (visit[t].dist < 0) continue;
    if (best < 0 || visit[t].dist < visit[best].dist) best = t;
  }
  if (best < 0) return Percolated{};
  ReroutedArc out;
  out.path = trace(visit, best);
  int s = best;
  while (visit[s].parent >= 0) s = visit[s].parent;
  out.start_row = s / (w + 1);
  out.end_row = best / (w + 1);
  out.endpoints_moved = true;
  out.detour_length = static_cast<int>(out.path.size()) - w;
  return out;
}

}  // namespace cvab::lattice
