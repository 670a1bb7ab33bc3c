#include "leafstab/leaf.hpp"

#include <omp.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>

#include "leafstab/section.hpp"

namespace leafstab::leaf {

Grid::Grid(std::size_t n1, std::size_t n2) : n1(n1), n2(n2) {
  if (n1 < 8 || n2 < 8) throw DomainError("grid resolution must be at least 8 in each direction");
}

double Grid::h1() const { return 2 * std::numbers::pi / static_cast<double>(n1); }
double Grid::h2() const { return 2 * std::numbers::pi / static_cast<double>(n2); }

std::array<double, 2> Grid::coordinates(std::size_t p) const {
  return {static_cast<double>(p / n2) * h1(), static_cast<double>(p % n2) * h2()};
}

DiscreteSection::DiscreteSection(Grid grid, std::size_t fiber_dim)
    : grid_(grid), m_(fiber_dim), v_(grid.points() * fiber_dim, 0.0) {}

DiscreteSection::DiscreteSection(Grid grid, std::size_t fiber_dim, std::vector<double> values)
    : grid_(grid), m_(fiber_dim), v_(std::move(values)) {
  if (v_.size() != grid_.points() * m_) throw DomainError("section values do not match grid and fiber dimension");
  for (double x : v_) {
    if (!std::isfinite(x)) throw DomainError("section values must be finite");
  }
}

DiscreteSection DiscreteSection::sample(Grid grid, std::size_t fiber_dim,
                                        const std::function<double(double, double, std::size_t)>& f) {
  DiscreteSection s(grid, fiber_dim);
  for (std::size_t p = 0; p < grid.points(); ++p) {
    auto x = grid.coordinates(p);
    for (std::size_t a = 0; a < fiber_dim; ++a) s(p, a) = f(x[0], x[1], a);
  }
  return s;
}

double DiscreteSection::dot(const DiscreteSection& o) const {
  if (o.v_.size() != v_.size()) throw DomainError("sections have different shapes");
  double acc = 0;
  for (std::size_t i = 0; i < v_.size(); ++i) acc += v_[i] * o.v_[i];
  return acc * grid_.cell_area();
}

DiscreteSection& DiscreteSection::operator+=(const DiscreteSection& o) { return axpy(1.0, o); }

DiscreteSection& DiscreteSection::axpy(double alpha, const DiscreteSection& o) {
  if (o.v_.size() != v_.size()) throw DomainError("sections have different shapes");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += alpha * o.v_[i];
  return *this;
}

DiscreteSection& DiscreteSection::operator*=(double alpha) {
  for (double& x : v_) x *= alpha;
  return *this;
}

// ---------------------------------------------------------------------------

DiscreteTriple::DiscreteTriple(std::size_t fiber_dim, bool first_order) : m_(fiber_dim), first_order_(first_order) {
  if (m_ < 1 || m_ > 3) throw DomainError("fiber dimension must be between 1 and 3");
}

PointJet DiscreteTriple::make_jet() const {
  PointJet j;
  j.vertical.resize(pairs());
  j.d_vertical.resize(pairs() * m_);
  j.connection.resize(2 * m_);
  j.d_connection.resize(2 * m_ * m_);
  return j;
}

namespace {

// Polynomial with double coefficients and sparse exponents.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Poly& p) {
    for (const auto& [e, c] : p.terms()) {
      Term t{c.get_d(), {}};
      for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] != 0) t.powers.emplace_back(v, e[v]);
      }
      terms_.push_back(std::move(t));
    }
  }
  double operator()(const double* pt) const {
    double acc = 0;
    for (const auto& t : terms_) {
      double m = t.c;
      for (const auto& [v, k] : t.powers) {
        for (unsigned i = 0; i < k; ++i) m *= pt[v];
      }
      acc += m;
    }
    return acc;
  }

 private:
  struct Term {
    double c;
    std::vector<std::pair<std::size_t, unsigned>> powers;
  };
  std::vector<Term> terms_;
};

class CompiledRF {
 public:
  CompiledRF() = default;
  explicit CompiledRF(const RationalFunction& f)
      : num_(f.numerator()), den_(f.denominator()), constant_den_(f.denominator().is_constant()) {}
  double operator()(const double* pt) const {
    const double n = num_(pt);
    if (constant_den_) return n / den_(pt);
    const double d = den_(pt);
    const double v = n / d;
    if (d == 0 || !std::isfinite(v)) throw NumericError("fiber value outside the domain of the triple");
    return v;
  }

 private:
  CompiledPoly num_, den_;
  bool constant_den_ = true;
};

class SampledTriple final : public DiscreteTriple {
 public:
  explicit SampledTriple(const GeometricTriple& t)
      : DiscreteTriple(t.chart()->fiber_dim(), is_first_order(t)) {
    const Chart& c = *t.chart();
    const std::size_t m = fiber_dim();
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        auto f = t.vertical.coefficient({}, {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
        vertical_.emplace_back(f);
        for (std::size_t k = 0; k < m; ++k) d_vertical_.emplace_back(f.derivative(c.fiber_index(k)));
      }
    }
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t a = 0; a < m; ++a) {
        const auto& f = t.connection.coefficient(i, a);
        connection_.emplace_back(f);
        for (std::size_t k = 0; k < m; ++k) d_connection_.emplace_back(f.derivative(c.fiber_index(k)));
      }
    }
    horizontal_ = CompiledRF(t.horizontal.coefficient({0, 1}, {}));
  }

  void evaluate(double x1, double x2, const double* y, PointJet& out) const override {
    std::array<double, 5> pt{x1, x2, 0, 0, 0};
    for (std::size_t a = 0; a < fiber_dim(); ++a) pt[2 + a] = y[a];
    for (std::size_t k = 0; k < vertical_.size(); ++k) out.vertical[k] = vertical_[k](pt.data());
    for (std::size_t k = 0; k < d_vertical_.size(); ++k) out.d_vertical[k] = d_vertical_[k](pt.data());
    for (std::size_t k = 0; k < connection_.size(); ++k) out.connection[k] = connection_[k](pt.data());
    for (std::size_t k = 0; k < d_connection_.size(); ++k) out.d_connection[k] = d_connection_[k](pt.data());
    out.horizontal = horizontal_(pt.data());
  }

 private:
  std::vector<CompiledRF> vertical_, d_vertical_, connection_, d_connection_;
  CompiledRF horizontal_;
};

class CallableTriple final : public DiscreteTriple {
 public:
  explicit CallableTriple(TripleCallbacks cb) : DiscreteTriple(cb.fiber_dim), cb_(std::move(cb)) {}

  void evaluate(double x1, double x2, const double* y, PointJet& out) const override {
    constexpr double h = 1e-6;
    const std::size_t m = fiber_dim();
    std::array<double, 3> yp{}, ym{};
    auto v = vertical(x1, x2, y);
    auto g = cb_.connection(x1, x2, y);
    if (g.size() != 2 * m) throw DomainError("connection callback must return 2m values");
    std::copy(v.begin(), v.end(), out.vertical.begin());
    std::copy(g.begin(), g.end(), out.connection.begin());
    for (std::size_t c = 0; c < m; ++c) {
      std::copy(y, y + m, yp.begin());
      std::copy(y, y + m, ym.begin());
      yp[c] += h;
      ym[c] -= h;
      auto vp = vertical(x1, x2, yp.data()), vm = vertical(x1, x2, ym.data());
      for (std::size_t k = 0; k < pairs(); ++k) out.d_vertical[k * m + c] = (vp[k] - vm[k]) / (2 * h);
      auto gp = cb_.connection(x1, x2, yp.data()), gm = cb_.connection(x1, x2, ym.data());
      for (std::size_t k = 0; k < 2 * m; ++k) out.d_connection[k * m + c] = (gp[k] - gm[k]) / (2 * h);
    }
    out.horizontal = cb_.horizontal ? cb_.horizontal(x1, x2, y) : 0.0;
  }

 private:
  std::vector<double> vertical(double x1, double x2, const double* y) const {
    if (pairs() == 0) return {};
    auto v = cb_.vertical(x1, x2, y);
    if (v.size() != pairs()) throw DomainError("vertical callback must return m(m-1)/2 values");
    return v;
  }
  TripleCallbacks cb_;
};

}  // namespace

std::shared_ptr<const DiscreteTriple> sample_triple(const GeometricTriple& t) {
  const Chart& c = *t.chart();
  if (c.base_dim() != 2) throw DomainError("sampled triples need a two-dimensional base");
  if (c.param_dim() != 0) throw DomainError("sampled triples must not contain free parameters");
  return std::make_shared<SampledTriple>(t);
}

std::shared_ptr<const DiscreteTriple> callable_triple(TripleCallbacks cb) {
  if (!cb.connection || (cb.fiber_dim > 1 && !cb.vertical)) throw DomainError("triple callbacks are incomplete");
  return std::make_shared<CallableTriple>(std::move(cb));
}

std::vector<std::string> family_names() { return {"torus-area-family", "torus-epsilon", "torus-f-shift"}; }

GeometricTriple family_triple(const std::string& name, const std::map<std::string, Rational>& params) {
  auto allowed = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
        throw DomainError("family '" + name + "' has no parameter '" + k + "'");
      }
    }
  };
  auto get = [&](const std::string& k) {
    auto it = params.find(k);
    return it == params.end() ? Rational(0) : it->second;
  };
  auto chart = make_chart({"x1", "x2"}, {"y1"});
  const std::size_t nv = chart->num_vars();
  const RationalFunction y(Poly::variable(nv, 2));
  auto area = [&](const RationalFunction& f) {
    BigradedElement h(chart, 0, 2);
    h.add_term({0, 1}, {}, f);
    return GeometricTriple(BigradedElement(chart, 2, 0), ConnectionData(chart), h);
  };
  if (name == "torus-area-family") {
    allowed({"a"});
    return area(RationalFunction(nv, 1) + y * RationalFunction(nv, get("a")));
  }
  if (name == "torus-f-shift") {
    allowed({"a", "delta"});
    return area(RationalFunction(nv, 1 + get("delta")) + y * RationalFunction(nv, get("a")));
  }
  if (name == "torus-epsilon") {
    allowed({"eps"});
    Multivector b(chart, 2);
    b.add_term({1, 0}, RationalFunction(nv, 1));
    b.add_term({1, 2}, RationalFunction(nv, get("eps")));
    return triple_from_bivector(b);
  }
  throw DomainError("unknown family '" + name + "'");
}

double DiscreteObstruction::max_abs() const {
  double m = 0;
  for (double v : vertical) m = std::max(m, std::abs(v));
  for (double v : connection) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

DiscreteSection difference(const DiscreteSection& s, int direction) {
  const Grid& g = s.grid();
  const std::size_t m = s.fiber_dim();
  const double h = direction == 0 ? g.h1() : g.h2();
  DiscreteSection d(g, m);
  for (std::size_t j1 = 0; j1 < g.n1; ++j1) {
    for (std::size_t j2 = 0; j2 < g.n2; ++j2) {
      const std::size_t p = j1 * g.n2 + j2;
      std::size_t p1, p2;
      if (direction == 0) {
        p1 = ((j1 + 1) % g.n1) * g.n2 + j2;
        p2 = ((j1 + 2) % g.n1) * g.n2 + j2;
      } else {
        p1 = j1 * g.n2 + (j2 + 1) % g.n2;
        p2 = j1 * g.n2 + (j2 + 2) % g.n2;
      }
      for (std::size_t a = 0; a < m; ++a) d(p, a) = (4 * (s(p1, a) - s(p, a)) - (s(p2, a) - s(p, a))) / (2 * h);
    }
  }
  return d;
}

DiscreteSection difference_transpose(const DiscreteSection& s, int direction) {
  const Grid& g = s.grid();
  const std::size_t m = s.fiber_dim();
  const double h = direction == 0 ? g.h1() : g.h2();
  DiscreteSection d(g, m);
  for (std::size_t j1 = 0; j1 < g.n1; ++j1) {
    for (std::size_t j2 = 0; j2 < g.n2; ++j2) {
      const std::size_t p = j1 * g.n2 + j2;
      std::size_t p1, p2;
      if (direction == 0) {
        p1 = ((j1 + g.n1 - 1) % g.n1) * g.n2 + j2;
        p2 = ((j1 + g.n1 - 2) % g.n1) * g.n2 + j2;
      } else {
        p1 = j1 * g.n2 + (j2 + g.n2 - 1) % g.n2;
        p2 = j1 * g.n2 + (j2 + g.n2 - 2) % g.n2;
      }
      for (std::size_t a = 0; a < m; ++a) d(p, a) = (4 * (s(p1, a) - s(p, a)) - (s(p2, a) - s(p, a))) / (2 * h);
    }
  }
  return d;
}

int thread_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("LEAFSTAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<long>(n, cap);
  }
  return std::max(n, 1);
}

namespace {

void check_shapes(const DiscreteTriple& t, const DiscreteSection& s) {
  if (t.fiber_dim() != s.fiber_dim()) throw DomainError("section and triple have different fiber dimensions");
}

// Runs body(p, jet) for every grid point, sequentially or with OpenMP. The
// body performs identical arithmetic either way.
template <bool Parallel, class Body>
void for_each_point(const DiscreteTriple& t, std::size_t n, Body&& body) {
  if constexpr (Parallel) {
    std::exception_ptr failure;
#pragma omp parallel num_threads(thread_count())
    {
      PointJet jet = t.make_jet();
#pragma omp for schedule(static)
      for (long p = 0; p < static_cast<long>(n); ++p) {
        try {
          body(static_cast<std::size_t>(p), jet);
        } catch (...) {
#pragma omp critical(leafstab_failure)
          if (!failure) failure = std::current_exception();
        }
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    PointJet jet = t.make_jet();
    for (std::size_t p = 0; p < n; ++p) body(p, jet);
  }
}

struct Workspace {
  DiscreteObstruction ob;
  std::vector<double> d_vertical;    // [p * pairs * m + ...]
  std::vector<double> d_connection;  // [p * 2m * m + ...]
};

template <bool Parallel>
Workspace evaluate_all(const DiscreteTriple& t, const DiscreteSection& s, bool jets) {
  check_shapes(t, s);
  const Grid& g = s.grid();
  const std::size_t m = t.fiber_dim(), np = t.pairs(), n = g.points();
  const DiscreteSection d0 = difference(s, 0), d1 = difference(s, 1);
  Workspace w;
  w.ob.points = n;
  w.ob.pairs = np;
  w.ob.fiber_dim = m;
  w.ob.vertical.assign(n * np, 0.0);
  w.ob.connection.assign(n * 2 * m, 0.0);
  if (jets) {
    w.d_vertical.assign(n * np * m, 0.0);
    w.d_connection.assign(n * 2 * m * m, 0.0);
  }
  for_each_point<Parallel>(t, n, [&](std::size_t p, PointJet& jet) {
    const auto x = g.coordinates(p);
    std::array<double, 3> y{};
    for (std::size_t a = 0; a < m; ++a) y[a] = s(p, a);
    t.evaluate(x[0], x[1], y.data(), jet);
    for (std::size_t k = 0; k < np; ++k) w.ob.vertical[p * np + k] = jet.vertical[k];
    for (std::size_t a = 0; a < m; ++a) {
      w.ob.connection[p * 2 * m + a] = jet.connection[a] - d0(p, a);
      w.ob.connection[p * 2 * m + m + a] = jet.connection[m + a] - d1(p, a);
    }
    if (jets) {
      std::copy(jet.d_vertical.begin(), jet.d_vertical.end(), w.d_vertical.begin() + p * np * m);
      std::copy(jet.d_connection.begin(), jet.d_connection.end(), w.d_connection.begin() + p * 2 * m * m);
    }
  });
  return w;
}

// Fixed row-major accumulation.
double sum_of_squares(const DiscreteObstruction& ob, double area) {
  const std::size_t np = ob.pairs, nc = 2 * ob.fiber_dim;
  double acc = 0;
  for (std::size_t p = 0; p < ob.points; ++p) {
    double local = 0;
    for (std::size_t k = 0; k < np; ++k) local += ob.vertical[p * np + k] * ob.vertical[p * np + k];
    for (std::size_t k = 0; k < nc; ++k) local += ob.connection[p * nc + k] * ob.connection[p * nc + k];
    acc += local;
  }
  return acc * area;
}

template <bool Parallel>
DiscreteSection gradient_impl(const DiscreteTriple& t, const DiscreteSection& s) {
  const Workspace w = evaluate_all<Parallel>(t, s, true);
  const Grid& g = s.grid();
  const std::size_t m = t.fiber_dim(), np = t.pairs(), n = g.points();
  DiscreteSection c0(g, m), c1(g, m);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t a = 0; a < m; ++a) {
      c0(p, a) = w.ob.connection[p * 2 * m + a];
      c1(p, a) = w.ob.connection[p * 2 * m + m + a];
    }
  }
  const DiscreteSection t0 = difference_transpose(c0, 0), t1 = difference_transpose(c1, 1);
  const double scale = 2 * g.cell_area();
  DiscreteSection out(g, m);
  for_each_point<Parallel>(t, n, [&](std::size_t p, PointJet&) {
    for (std::size_t c = 0; c < m; ++c) {
      double acc = 0;
      for (std::size_t k = 0; k < np; ++k) acc += w.ob.vertical[p * np + k] * w.d_vertical[(p * np + k) * m + c];
      for (std::size_t k = 0; k < 2 * m; ++k) {
        acc += w.ob.connection[p * 2 * m + k] * w.d_connection[(p * 2 * m + k) * m + c];
      }
      acc -= t0(p, c) + t1(p, c);
      out(p, c) = scale * acc;
    }
  });
  return out;
}

}  // namespace

namespace serial {
DiscreteObstruction discrete_obstruction(const DiscreteTriple& t, const DiscreteSection& s) {
  return evaluate_all<false>(t, s, false).ob;
}
double functional(const DiscreteTriple& t, const DiscreteSection& s) {
  return sum_of_squares(evaluate_all<false>(t, s, false).ob, s.grid().cell_area());
}
DiscreteSection gradient(const DiscreteTriple& t, const DiscreteSection& s) { return gradient_impl<false>(t, s); }
}  // namespace serial

namespace omp {
DiscreteObstruction discrete_obstruction(const DiscreteTriple& t, const DiscreteSection& s) {
  return evaluate_all<true>(t, s, false).ob;
}
double functional(const DiscreteTriple& t, const DiscreteSection& s) {
  return sum_of_squares(evaluate_all<true>(t, s, false).ob, s.grid().cell_area());
}
DiscreteSection gradient(const DiscreteTriple& t, const DiscreteSection& s) { return gradient_impl<true>(t, s); }
}  // namespace omp

// ---------------------------------------------------------------------------

std::vector<DiscreteSection> kernel_basis(const DiscreteTriple& t, const Grid& grid) {
  const std::size_t m = t.fiber_dim(), np = t.pairs(), n = grid.points(), dim = n * m;
  const Workspace w = evaluate_all<true>(t, DiscreteSection(grid, m), true);
  Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<std::pair<std::size_t, double>> row;
  auto accumulate = [&]() {
    for (const auto& [i, a] : row) {
      for (const auto& [j, b] : row) jtj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += a * b;
    }
  };
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < np; ++k) {
      row.clear();
      for (std::size_t c = 0; c < m; ++c) row.emplace_back(p * m + c, w.d_vertical[(p * np + k) * m + c]);
      accumulate();
    }
    const std::size_t j1 = p / grid.n2, j2 = p % grid.n2;
    for (int i = 0; i < 2; ++i) {
      const double h = i == 0 ? grid.h1() : grid.h2();
      const std::size_t p1 = i == 0 ? ((j1 + 1) % grid.n1) * grid.n2 + j2 : j1 * grid.n2 + (j2 + 1) % grid.n2;
      const std::size_t p2 = i == 0 ? ((j1 + 2) % grid.n1) * grid.n2 + j2 : j1 * grid.n2 + (j2 + 2) % grid.n2;
      for (std::size_t a = 0; a < m; ++a) {
        row.clear();
        for (std::size_t c = 0; c < m; ++c) {
          row.emplace_back(p * m + c, w.d_connection[(p * 2 * m + i * m + a) * m + c]);
        }
        row.emplace_back(p * m + a, 3 / (2 * h));
        row.emplace_back(p1 * m + a, -4 / (2 * h));
        row.emplace_back(p2 * m + a, 1 / (2 * h));
        accumulate();
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jtj);
  if (solver.info() != Eigen::Success) throw NumericError("eigen decomposition of the linearized operator failed");
  const auto& ev = solver.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 1e-300);
  constexpr double kernel_tol = 1e-10, range_tol = 1e-7;
  std::vector<DiscreteSection> basis;
  const double norm = 1 / std::sqrt(grid.cell_area());
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double rel = ev(k) / top;
    if (rel > range_tol) continue;
    if (rel > kernel_tol) {
      throw NumericError("rank decision failure: eigenvalue ratio " + std::to_string(rel) +
                         " is neither in the kernel nor in the range");
    }
    auto v = solver.eigenvectors().col(k);
    Eigen::Index lead = 0;
    v.cwiseAbs().maxCoeff(&lead);
    const double sign = v(lead) < 0 ? -norm : norm;
    std::vector<double> vals(dim);
    for (std::size_t i = 0; i < dim; ++i) vals[i] = sign * v(static_cast<Eigen::Index>(i));
    basis.emplace_back(grid, m, std::move(vals));
  }
  return basis;
}

DiscreteSection project_out(const DiscreteSection& s, const std::vector<DiscreteSection>& basis) {
  DiscreteSection r = s;
  for (const auto& e : basis) r.axpy(-s.dot(e), e);
  return r;
}

OptimReport find_leaf(const DiscreteTriple& t_ref, const DiscreteTriple& t, const DiscreteSection& s0,
                      const FindLeafParams& params) {
  if (t_ref.fiber_dim() != t.fiber_dim()) throw DomainError("reference and target triples have different fiber dimensions");
  check_shapes(t, s0);
  const Grid& grid = s0.grid();
  const auto basis = kernel_basis(t_ref, grid);
  OptimReport rep{s0, 0, 0, false, {}, {}, {}};
  for (const auto& e : basis) rep.kernel_component.push_back(s0.dot(e));

  DiscreteSection s = s0;
  double phi = functional(t, s);
  rep.trace.push_back(phi);
  const double area = grid.cell_area();
  std::optional<DiscreteSection> prev_s, prev_g;
  for (;;) {
    if (std::sqrt(phi) <= params.tol) {
      rep.converged = true;
      rep.stop_reason = "tolerance reached";
      break;
    }
    if (rep.iterations >= params.max_iter) {
      rep.stop_reason = "iteration limit";
      break;
    }
    DiscreteSection g = gradient(t, s);
    DiscreteSection lg = g;
    lg *= 1 / area;
    lg = project_out(lg, basis);
    const double gnorm = std::sqrt(lg.dot(lg));
    if (!(gnorm > params.grad_tol * std::sqrt(phi))) {
      rep.stop_reason = "stationary on the search space";
      break;
    }
    DiscreteSection d = lg;
    d *= -1;
    double slope = 0;
    for (std::size_t i = 0; i < g.values().size(); ++i) slope += g.values()[i] * d.values()[i];

    double alpha = phi / -slope;
    if (prev_s) {
      DiscreteSection ds = s, dg = lg;
      ds.axpy(-1, *prev_s);
      dg.axpy(-1, *prev_g);
      const double sy = ds.dot(dg);
      if (sy > 0) alpha = ds.dot(ds) / sy;
    }
    bool accepted = false;
    DiscreteSection trial = s;
    double trial_phi = phi;
    while (alpha >= params.min_step) {
      trial = s;
      trial.axpy(alpha, d);
      trial_phi = functional(t, trial);
      if (trial_phi <= phi + params.armijo_c1 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= params.shrink;
    }
    if (!accepted) {
      rep.stop_reason = "step underflow";
      break;
    }
    const bool stalled = phi - trial_phi <= params.stall_tol * phi;
    prev_s = s;
    prev_g = lg;
    s = std::move(trial);
    phi = trial_phi;
    ++rep.iterations;
    rep.trace.push_back(phi);
    if (stalled && std::sqrt(phi) > params.tol) {
      rep.stop_reason = "no further decrease";
      break;
    }
  }
  rep.final_section = s;
  rep.residual = std::sqrt(phi);
  return rep;
}

std::vector<double> strong_obstruction(const DiscreteTriple& t, const DiscreteSection& s, const DiscreteSection& beta,
                                       const std::vector<double>& omega) {
  check_shapes(t, s);
  const Grid& g = s.grid();
  if (beta.fiber_dim() != 2 || beta.values().size() != g.points() * 2) throw DomainError("beta needs two components per grid point");
  if (omega.size() != g.points()) throw DomainError("omega needs one value per grid point");
  DiscreteSection b1(g, 1), b2(g, 1);
  for (std::size_t p = 0; p < g.points(); ++p) {
    b1(p, 0) = beta(p, 0);
    b2(p, 0) = beta(p, 1);
  }
  const DiscreteSection db2 = difference(b2, 0), db1 = difference(b1, 1);
  std::vector<double> out(g.points());
  for_each_point<true>(t, g.points(), [&](std::size_t p, PointJet& jet) {
    const auto x = g.coordinates(p);
    std::array<double, 3> y{};
    for (std::size_t a = 0; a < s.fiber_dim(); ++a) y[a] = s(p, a);
    t.evaluate(x[0], x[1], y.data(), jet);
    out[p] = jet.horizontal - omega[p] + (db2(p, 0) - db1(p, 0));
  });
  return out;
}

}  // namespace leafstab::leaf
