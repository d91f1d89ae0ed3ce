#include "klein/systole.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "klein/error.hpp"
#include "klein/quadrature.hpp"

namespace klein {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

struct Dir {
  int di;
  int dj;
};

// Forward half of the 16-neighbour stencil; the other half is the negation.
constexpr std::array<Dir, 8> kForward{{{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {2, -1}, {1, 2}, {1, -2}}};
constexpr int kRowDir = 0;
constexpr int kColDir = 1;

struct Node {
  std::int64_t i = 0;
  std::int64_t j = 0;
  bool operator==(const Node&) const = default;
};

// Edge weights of the lifted lattice. The lifted factor has periods 2 n_u in I and
// n_v in J, so one table of that size covers the whole plane.
class EdgeTable {
 public:
  explicit EdgeTable(const GridMetric& m)
      : n_u_(m.n_u()), n_v_(m.n_v()), period_i_(2 * m.n_u()), du_(m.du()), dw_(m.dw()) {
    weights_.resize(static_cast<std::size_t>(period_i_) * n_v_ * kForward.size());
    std::array<double, kForward.size()> len{};
    for (std::size_t d = 0; d < kForward.size(); ++d) {
      len[d] = std::hypot(kForward[d].di * du_, kForward[d].dj * dw_);
    }
    phi_min_ = kInf;
    for (std::int64_t j = 0; j < n_v_; ++j) {
      for (std::int64_t i = 0; i < period_i_; ++i) {
        for (std::size_t d = 0; d < kForward.size(); ++d) {
          const double mid = midpoint_factor(m, 2 * i + kForward[d].di, 2 * j + kForward[d].dj);
          phi_min_ = std::min(phi_min_, mid);
          weights_[index(i, j, static_cast<int>(d))] = mid * len[d];
        }
      }
    }
  }

  double forward(std::int64_t I, std::int64_t J, int d) const {
    return weights_[index(floor_mod(I, period_i_), floor_mod(J, n_v_), d)];
  }

  // Weight of direction d out of the node whose reduced indices are (i, j).
  double reduced(std::int64_t i, std::int64_t j, int d) const { return weights_[index(i, j, d)]; }
  std::int64_t period_i() const { return period_i_; }

  int n_u() const { return n_u_; }
  int n_v() const { return n_v_; }
  double du() const { return du_; }
  double dw() const { return dw_; }
  double phi_min() const { return phi_min_; }

  double row_sum(std::int64_t I0, std::int64_t J, std::int64_t steps) const {
    double s = 0.0;
    for (std::int64_t k = 0; k < steps; ++k) s += forward(I0 + k, J, kRowDir);
    return s;
  }

  double column_sum(std::int64_t I, std::int64_t J0, std::int64_t steps) const {
    double s = 0.0;
    for (std::int64_t k = 0; k < steps; ++k) s += forward(I, J0 + k, kColDir);
    return s;
  }

 private:
  std::size_t index(std::int64_t i, std::int64_t j, int d) const {
    return (static_cast<std::size_t>(j) * period_i_ + static_cast<std::size_t>(i)) * kForward.size() +
           static_cast<std::size_t>(d);
  }

  // Bilinear value at the half-integer lattice point (X2 / 2, Y2 / 2).
  static double midpoint_factor(const GridMetric& m, std::int64_t X2, std::int64_t Y2) {
    const std::int64_t x0 = floor_div(X2, 2);
    const std::int64_t y0 = floor_div(Y2, 2);
    const bool hx = (X2 & 1) != 0;
    const bool hy = (Y2 & 1) != 0;
    if (!hx && !hy) return m.lifted(x0, y0);
    if (hx && !hy) return 0.5 * (m.lifted(x0, y0) + m.lifted(x0 + 1, y0));
    if (!hx && hy) return 0.5 * (m.lifted(x0, y0) + m.lifted(x0, y0 + 1));
    return 0.25 * (m.lifted(x0, y0) + m.lifted(x0 + 1, y0) + m.lifted(x0, y0 + 1) +
                   m.lifted(x0 + 1, y0 + 1));
  }

  int n_u_;
  int n_v_;
  std::int64_t period_i_;
  double du_;
  double dw_;
  double phi_min_ = 0.0;
  std::vector<double> weights_;
};

// The deck maps on lattice indices. SigmaT is t^-1 sigma, the second one-sided class.
enum class Deck { Sigma, SigmaT, Vertical, Horizontal };

Node apply(Deck g, Node p, int n_u, int n_v) {
  switch (g) {
    case Deck::Sigma: return {p.i + n_u, n_v - p.j};
    case Deck::SigmaT: return {p.i + n_u, -p.j};
    case Deck::Vertical: return {p.i, p.j + n_v};
    case Deck::Horizontal: return {p.i + 2 * static_cast<std::int64_t>(n_u), p.j};
  }
  return p;
}

struct PathNode {
  Node node;
  double g;
};

struct Workspace {
  std::vector<double> g;
  std::vector<std::int32_t> pred;
  std::vector<std::uint8_t> closed;
  std::vector<std::pair<double, std::int32_t>> heap;
};

thread_local Workspace tls_workspace;

// A* from src to dst inside a window around both, with the admissible heuristic
// phi_min * Euclidean distance. Returns +inf if every path is at least `cutoff`.
double shortest_path(const EdgeTable& t, Node src, Node dst, double cutoff, std::vector<PathNode>* path) {
  const std::int64_t mu = std::max(2, t.n_u() / 2);
  const std::int64_t mv = std::max(2, t.n_v() / 2);
  const std::int64_t i0 = std::min(src.i, dst.i) - mu;
  const std::int64_t j0 = std::min(src.j, dst.j) - mv;
  const std::int64_t width = std::max(src.i, dst.i) + mu - i0 + 1;
  const std::int64_t height = std::max(src.j, dst.j) + mv - j0 + 1;
  const std::int64_t count = width * height;
  if (count > std::numeric_limits<std::int32_t>::max()) {
    throw Error("shortest-path window too large: " + std::to_string(count) + " nodes");
  }

  Workspace& ws = tls_workspace;
  ws.g.assign(static_cast<std::size_t>(count), kInf);
  ws.pred.assign(static_cast<std::size_t>(count), -1);
  ws.closed.assign(static_cast<std::size_t>(count), 0);
  ws.heap.clear();

  // Reduced lattice indices over the window plus the stencil reach, to avoid divisions.
  constexpr std::int64_t kReach = 2;
  thread_local std::vector<std::int64_t> imod;
  thread_local std::vector<std::int64_t> jmod;
  imod.resize(static_cast<std::size_t>(width + 2 * kReach));
  jmod.resize(static_cast<std::size_t>(height + 2 * kReach));
  for (std::int64_t x = 0; x < width + 2 * kReach; ++x) imod[x] = floor_mod(i0 - kReach + x, t.period_i());
  for (std::int64_t y = 0; y < height + 2 * kReach; ++y) jmod[y] = floor_mod(j0 - kReach + y, t.n_v());
  auto weight = [&](std::int64_t i, std::int64_t j, int d) {
    return t.reduced(imod[i - i0 + kReach], jmod[j - j0 + kReach], d);
  };

  const double du = t.du();
  const double dw = t.dw();
  const double hscale = t.phi_min() * (1.0 - 1e-12);
  auto heuristic = [&](std::int64_t i, std::int64_t j) {
    return hscale * std::hypot((dst.i - i) * du, (dst.j - j) * dw);
  };
  auto local = [&](std::int64_t i, std::int64_t j) { return static_cast<std::int32_t>((j - j0) * width + (i - i0)); };
  auto cmp = [](const auto& a, const auto& b) { return a.first > b.first; };

  const std::int32_t s = local(src.i, src.j);
  const std::int32_t target = local(dst.i, dst.j);
  ws.g[s] = 0.0;
  ws.heap.emplace_back(heuristic(src.i, src.j), s);

  bool reached = false;
  while (!ws.heap.empty()) {
    std::pop_heap(ws.heap.begin(), ws.heap.end(), cmp);
    const auto [f, k] = ws.heap.back();
    ws.heap.pop_back();
    if (ws.closed[k]) continue;
    if (f >= cutoff) break;
    ws.closed[k] = 1;
    if (k == target) {
      reached = true;
      break;
    }
    const std::int64_t i = i0 + k % width;
    const std::int64_t j = j0 + k / width;
    const double gk = ws.g[k];
    auto relax = [&](std::int64_t ni, std::int64_t nj, double w) {
      if (ni < i0 || nj < j0 || ni >= i0 + width || nj >= j0 + height) return;
      const std::int32_t nk = local(ni, nj);
      if (ws.closed[nk]) return;
      const double ng = gk + w;
      if (ng < ws.g[nk]) {
        ws.g[nk] = ng;
        ws.pred[nk] = k;
        ws.heap.emplace_back(ng + heuristic(ni, nj), nk);
        std::push_heap(ws.heap.begin(), ws.heap.end(), cmp);
      }
    };
    for (int d = 0; d < static_cast<int>(kForward.size()); ++d) {
      const Dir dir = kForward[d];
      relax(i + dir.di, j + dir.dj, weight(i, j, d));
      relax(i - dir.di, j - dir.dj, weight(i - dir.di, j - dir.dj, d));
    }
  }
  if (!reached) return kInf;

  if (path != nullptr) {
    path->clear();
    for (std::int32_t k = target; k >= 0; k = ws.pred[k]) {
      path->push_back({{i0 + k % width, j0 + k / width}, ws.g[k]});
    }
    std::reverse(path->begin(), path->end());
  }
  return ws.g[target];
}

struct Search {
  double length = kInf;
  Node base;
  int searches = 0;
};

// Local search over basepoints: from p, the loop p -> g(p) passes through its midpoint q,
// and by deck invariance of the graph d(q, g q) <= d(p, g p). Iterate from several seeds.
Search optimise(const EdgeTable& t, Deck g, const std::vector<Node>& seeds, double straight,
                Node straight_base, const GraphOptions& opts) {
  Search best{straight, straight_base, 0};
  const std::int64_t period_i = 2 * static_cast<std::int64_t>(t.n_u());
  std::vector<PathNode> path;
  for (Node p : seeds) {
    double prev = kInf;
    for (int it = 0; it <= opts.max_refinements; ++it) {
      const double d = shortest_path(t, p, apply(g, p, t.n_u(), t.n_v()), best.length * (1.0 + 1e-9), &path);
      ++best.searches;
      if (!std::isfinite(d)) break;
      if (d < best.length) {
        best.length = d;
        best.base = p;
      }
      if (d >= prev * (1.0 - 1e-12)) break;
      prev = d;
      const double half = 0.5 * d;
      const auto mid = std::min_element(path.begin(), path.end(), [half](const PathNode& a, const PathNode& b) {
        return std::abs(a.g - half) < std::abs(b.g - half);
      });
      Node q = mid->node;
      if (q == p) break;
      q.i = floor_mod(q.i, period_i);  // sigma^2 commutes with every class used here
      p = q;
    }
  }
  return best;
}

Search search_class(const EdgeTable& t, Deck g, const GraphOptions& opts) {
  const int n_u = t.n_u();
  const int n_v = t.n_v();
  const int seeds = std::max(1, opts.seeds);
  std::vector<Node> starts;
  double straight = kInf;
  Node straight_base;
  switch (g) {
    case Deck::Sigma:
    case Deck::SigmaT: {
      // Every one-sided loop crosses the row fixed by its reflection.
      const std::int64_t row = g == Deck::Sigma ? n_v / 2 : 0;
      straight_base = {0, row};
      straight = t.row_sum(0, row, n_u);
      for (int k = 0; k < seeds; ++k) starts.push_back({static_cast<std::int64_t>(k) * n_u / seeds, row});
      break;
    }
    case Deck::Vertical: {
      for (std::int64_t i = 0; i < n_u; ++i) {
        const double s = t.column_sum(i, 0, n_v);
        if (s < straight) {
          straight = s;
          straight_base = {i, 0};
        }
      }
      starts.push_back(straight_base);
      for (int k = 1; k < seeds; ++k) starts.push_back({static_cast<std::int64_t>(k) * n_u / seeds, 0});
      break;
    }
    case Deck::Horizontal: {
      for (std::int64_t j = 0; j < n_v; ++j) {
        const double s = t.row_sum(0, j, 2 * static_cast<std::int64_t>(n_u));
        if (s < straight) {
          straight = s;
          straight_base = {0, j};
        }
      }
      starts.push_back(straight_base);
      for (int k = 1; k < seeds; ++k) starts.push_back({0, static_cast<std::int64_t>(k) * n_v / seeds});
      break;
    }
  }
  return optimise(t, g, starts, straight, straight_base, opts);
}

Search search(const EdgeTable& t, HomotopyClass c, const GraphOptions& opts) {
  switch (c) {
    case HomotopyClass::Sigma: {
      Search a = search_class(t, Deck::Sigma, opts);
      Search b = search_class(t, Deck::SigmaT, opts);
      const int total = a.searches + b.searches;
      Search best = b.length < a.length ? b : a;
      best.searches = total;
      return best;
    }
    case HomotopyClass::Vertical: return search_class(t, Deck::Vertical, opts);
    case HomotopyClass::Horizontal: return search_class(t, Deck::Horizontal, opts);
  }
  throw Error("unknown homotopy class");
}

std::optional<GridMetric> half_grid(const GridMetric& m) {
  if (m.n_u() % 2 != 0 || m.n_v() % 4 != 0) return std::nullopt;
  const int hu = m.n_u() / 2;
  const int hv = m.n_v() / 2;
  std::vector<double> f(static_cast<std::size_t>(hu) * hv);
  for (int j = 0; j < hv; ++j) {
    for (int i = 0; i < hu; ++i) f[static_cast<std::size_t>(j) * hu + i] = m.at(2 * i, 2 * j);
  }
  return GridMetric(m.beta(), hu, hv, std::move(f));
}

}  // namespace

std::string_view to_string(HomotopyClass c) {
  switch (c) {
    case HomotopyClass::Sigma: return "sigma";
    case HomotopyClass::Vertical: return "v";
    case HomotopyClass::Horizontal: return "h";
  }
  return "unknown";
}

HomotopyClass parse_homotopy_class(std::string_view name) {
  if (name == "sigma") return HomotopyClass::Sigma;
  if (name == "v" || name == "vertical") return HomotopyClass::Vertical;
  if (name == "h" || name == "horizontal") return HomotopyClass::Horizontal;
  throw DomainError("unknown homotopy class '" + std::string(name) + "' (expected sigma, v or h)");
}

Point deck_image(HomotopyClass c, const FundamentalDomain& d, Point p) {
  switch (c) {
    case HomotopyClass::Sigma: return d.sigma(p);
    case HomotopyClass::Vertical: return d.t(p);
    case HomotopyClass::Horizontal: return d.sigma2(p);
  }
  return p;
}

double great_circle_latitude(const GreatCircle& c, double u) {
  return std::atan(std::tan(c.a) * std::cos(u - c.theta));
}

double great_circle_slope(const GreatCircle& c, double u) {
  const double ta = std::tan(c.a);
  const double k = ta * std::cos(u - c.theta);
  return -ta * std::sin(u - c.theta) / (1.0 + k * k);
}

double great_circle_length(const GreatCircle& c) {
  auto ds = [&c](double u) {
    const double v = great_circle_latitude(c, u);
    const double cv = std::cos(v);
    const double dv = great_circle_slope(c, u);
    return std::sqrt(cv * cv + dv * dv);
  };
  return gauss_legendre_composite(ds, c.theta - kHalfPi, c.theta + kHalfPi, {}, 64, 4);
}

std::optional<double> length_closed_form(HomotopyClass c, const ProfileMetric& m) {
  switch (c) {
    case HomotopyClass::Vertical: return 2.0 * m.half_height();
    case HomotopyClass::Horizontal: return 2.0 * kPi * m.min_value();
    case HomotopyClass::Sigma:
      if (m.has_spherical_caps()) return kPi;
      if (m.kind() == ProfileKind::Constant) return kPi * m.c();
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

void require_graph_resolution(const GridMetric& m) {
  if (m.n_u() < 64 || m.n_v() < 64) {
    throw DomainError("graph lengths need a grid of at least 64 x 64, got " + std::to_string(m.n_u()) +
                      " x " + std::to_string(m.n_v()));
  }
}

// Fine and (optional) coarse edge tables, built once and shared by every class.
struct TablePair {
  EdgeTable fine;
  std::optional<EdgeTable> coarse;

  TablePair(const GridMetric& m, const GraphOptions& opts, const GridMetric* coarse_grid) : fine(m) {
    if (!opts.richardson) return;
    if (coarse_grid != nullptr) {
      coarse.emplace(*coarse_grid);
    } else if (auto sub = half_grid(m)) {
      coarse.emplace(*sub);
    }
  }
};

GraphLength graph_length(HomotopyClass c, const TablePair& tables, const GraphOptions& opts) {
  const Search fine = search(tables.fine, c, opts);
  if (!std::isfinite(fine.length)) throw Error("lifted lattice is disconnected");
  GraphLength out;
  out.length = fine.length;
  out.base_i = fine.base.i;
  out.base_j = fine.base.j;
  out.searches = fine.searches;
  out.error_estimate = kNaN;
  out.coarse_length = kNaN;
  if (tables.coarse) {
    out.coarse_length = search(*tables.coarse, c, opts).length;
    out.error_estimate = std::abs(out.length - out.coarse_length);
  }
  return out;
}

}  // namespace

GraphLength length_graph(HomotopyClass c, const GridMetric& m, const GraphOptions& opts,
                         const GridMetric* coarse) {
  require_graph_resolution(m);
  return graph_length(c, TablePair(m, opts, coarse), opts);
}

std::string_view to_string(LengthMethod m) {
  switch (m) {
    case LengthMethod::ClosedForm: return "closed-form";
    case LengthMethod::Graph: return "graph";
    case LengthMethod::NotComputed: return "not-computed";
  }
  return "unknown";
}

ClassMask ClassMask::only(HomotopyClass c) {
  return {c == HomotopyClass::Sigma, c == HomotopyClass::Vertical, c == HomotopyClass::Horizontal};
}

bool ClassMask::has(HomotopyClass c) const {
  switch (c) {
    case HomotopyClass::Sigma: return sigma;
    case HomotopyClass::Vertical: return vertical;
    case HomotopyClass::Horizontal: return horizontal;
  }
  return false;
}

double SystoleReport::length(HomotopyClass c) const {
  switch (c) {
    case HomotopyClass::Sigma: return l_sigma;
    case HomotopyClass::Vertical: return l_v;
    case HomotopyClass::Horizontal: return l_h;
  }
  return kNaN;
}

namespace {

struct Slot {
  double* value;
  double* error;
  LengthMethod* method;
};

Slot slot(SystoleReport& r, HomotopyClass c) {
  switch (c) {
    case HomotopyClass::Sigma: return {&r.l_sigma, &r.error_sigma, &r.method_sigma};
    case HomotopyClass::Vertical: return {&r.l_v, &r.error_v, &r.method_v};
    case HomotopyClass::Horizontal: return {&r.l_h, &r.error_h, &r.method_h};
  }
  throw Error("unknown homotopy class");
}

void finish(SystoleReport& r) {
  if (!std::isnan(r.l_sigma) && !std::isnan(r.l_h)) {
    r.L_sigma = std::min(r.l_sigma, r.l_h);
  } else {
    r.L_sigma = std::isnan(r.l_sigma) ? r.l_h : r.l_sigma;
  }
  r.error_estimate = 0.0;
  bool any_nan = false;
  for (double e : {r.error_sigma, r.error_v, r.error_h}) {
    if (std::isnan(e)) any_nan = true;
    else r.error_estimate = std::max(r.error_estimate, e);
  }
  if (any_nan && r.error_estimate == 0.0) r.error_estimate = kNaN;
}

SystoleReport empty_report() {
  SystoleReport r;
  r.l_sigma = r.l_v = r.l_h = kNaN;
  return r;
}

constexpr std::array<HomotopyClass, 3> kClasses{HomotopyClass::Sigma, HomotopyClass::Vertical,
                                                HomotopyClass::Horizontal};

}  // namespace

SystoleReport systole_report(const ProfileMetric& m, int n_u, int n_v, ClassMask mask, bool force_graph,
                             const GraphOptions& opts) {
  SystoleReport r = empty_report();
  const auto vol = volume_closed_form(m);
  r.volume = vol ? *vol : volume(m);

  std::optional<TablePair> tables;
  for (HomotopyClass c : kClasses) {
    if (!mask.has(c)) continue;
    Slot s = slot(r, c);
    const auto closed = force_graph ? std::nullopt : length_closed_form(c, m);
    if (closed) {
      *s.value = *closed;
      *s.error = 0.0;
      *s.method = LengthMethod::ClosedForm;
      continue;
    }
    if (!tables) {
      const GridMetric grid = to_conformal_grid(m, n_u, n_v);
      require_graph_resolution(grid);
      std::optional<GridMetric> coarse;
      if (opts.richardson && n_u % 2 == 0 && n_v % 4 == 0) coarse = to_conformal_grid(m, n_u / 2, n_v / 2);
      tables.emplace(grid, opts, coarse ? &*coarse : nullptr);
      r.n_u = n_u;
      r.n_v = n_v;
    }
    const GraphLength g = graph_length(c, *tables, opts);
    *s.value = g.length;
    *s.error = g.error_estimate;
    *s.method = LengthMethod::Graph;
  }
  finish(r);
  return r;
}

SystoleReport systole_report(const GridMetric& m, ClassMask mask, const GraphOptions& opts) {
  SystoleReport r = empty_report();
  r.volume = volume(m);
  r.n_u = m.n_u();
  r.n_v = m.n_v();
  require_graph_resolution(m);
  const TablePair tables(m, opts, nullptr);
  for (HomotopyClass c : kClasses) {
    if (!mask.has(c)) continue;
    Slot s = slot(r, c);
    const GraphLength g = graph_length(c, tables, opts);
    *s.value = g.length;
    *s.error = g.error_estimate;
    *s.method = LengthMethod::Graph;
  }
  finish(r);
  return r;
}

}  // namespace klein
