#include "leafstab/cohomology.hpp"

#include <bit>
#include <map>

namespace leafstab {

namespace {

using Cube = std::vector<std::vector<std::vector<Rational>>>;

// ab - ba - c.
QMatrix commutator_minus(const QMatrix& a, const QMatrix& b, const QMatrix& c) {
  QMatrix r = a * b;
  QMatrix s = b * a;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) -= s(i, j) + c(i, j);
  }
  return r;
}

// k-subsets of {0..n-1} as bitmasks, in lexicographic order of sorted tuples.
std::vector<unsigned> subsets(std::size_t n, std::size_t k) {
  std::vector<unsigned> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return out;
  while (true) {
    unsigned mask = 0;
    for (auto i : idx) mask |= 1u << i;
    out.push_back(mask);
    std::size_t p = k;
    while (p > 0 && idx[p - 1] == n - k + p - 1) --p;
    if (p == 0) break;
    ++idx[p - 1];
    for (std::size_t q = p; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return out;
}

std::vector<std::size_t> members(unsigned mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1) {
    if (mask & 1u) out.push_back(i);
  }
  return out;
}

}  // namespace

LieAlgebraData::LieAlgebraData(std::string name, Cube c) : name_(std::move(name)), c_(std::move(c)) {
  const std::size_t n = c_.size();
  if (n > 16) throw DomainError("Lie algebra dimension above 16 is not supported");
  for (const auto& row : c_) {
    if (row.size() != n) throw DomainError("structure constants must be n x n x n");
    for (const auto& v : row) {
      if (v.size() != n) throw DomainError("structure constants must be n x n x n");
    }
  }
  for (auto& row : c_) {
    for (auto& v : row) {
      for (auto& x : v) x.canonicalize();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (c_[i][j][k] != -c_[j][i][k]) throw DomainError("structure constants are not antisymmetric");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t r = 0; r < n; ++r) {
          Rational s = 0;
          for (std::size_t m = 0; m < n; ++m) {
            s += c_[i][j][m] * c_[m][k][r] + c_[j][k][m] * c_[m][i][r] + c_[k][i][m] * c_[m][j][r];
          }
          if (s != 0) throw DomainError("structure constants violate the Jacobi identity");
        }
      }
    }
  }
}

LieAlgebraData LieAlgebraData::abelian(std::size_t n) {
  return LieAlgebraData("abelian" + std::to_string(n), Cube(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n))));
}

LieAlgebraData LieAlgebraData::aff1() {
  Cube c(2, std::vector<std::vector<Rational>>(2, std::vector<Rational>(2)));
  c[0][1][0] = 1;
  c[1][0][0] = -1;
  return LieAlgebraData("aff1", std::move(c));
}

LieAlgebraData LieAlgebraData::su2() {
  Cube c(3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3)));
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
    c[i][j][k] = 1;
    c[j][i][k] = -1;
  }
  return LieAlgebraData("su2", std::move(c));
}

ModuleData::ModuleData(const LieAlgebraData& g, std::string name, std::vector<QMatrix> action)
    : name_(std::move(name)), dim_(action.empty() ? 0 : action[0].rows()), action_(std::move(action)) {
  const std::size_t n = g.dim();
  if (action_.size() != n) throw DomainError("one action matrix per Lie algebra generator is required");
  for (const auto& a : action_) {
    if (a.rows() != dim_ || a.cols() != dim_) throw DomainError("action matrices must be square of the module dimension");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      QMatrix rhs(dim_, dim_);
      for (std::size_t k = 0; k < n; ++k) {
        const Rational& c = g.structure_constant(i, j, k);
        if (c == 0) continue;
        for (std::size_t r = 0; r < dim_; ++r) {
          for (std::size_t s = 0; s < dim_; ++s) rhs(r, s) += c * action_[k](r, s);
        }
      }
      if (!commutator_minus(action_[i], action_[j], rhs).is_zero()) {
        throw DomainError("action matrices do not define a representation");
      }
    }
  }
}

ModuleData ModuleData::trivial(const LieAlgebraData& g, std::size_t dim) {
  return ModuleData(g, "trivial", std::vector<QMatrix>(g.dim(), QMatrix(dim, dim)));
}

ModuleData ModuleData::adjoint(const LieAlgebraData& g) {
  const std::size_t n = g.dim();
  std::vector<QMatrix> a(n, QMatrix(n, n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) a[i](k, j) = g.structure_constant(i, j, k);
    }
  }
  return ModuleData(g, "adjoint", std::move(a));
}

ModuleData ModuleData::coadjoint(const LieAlgebraData& g) {
  const std::size_t n = g.dim();
  std::vector<QMatrix> a(n, QMatrix(n, n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) a[i](j, k) = -g.structure_constant(i, j, k);
    }
  }
  return ModuleData(g, "coadjoint", std::move(a));
}

CochainComplex::CochainComplex(std::vector<QMatrix> d) : d_(std::move(d)) {
  for (std::size_t k = 0; k + 1 < d_.size(); ++k) {
    if (d_[k + 1].cols() != d_[k].rows()) throw DomainError("differential shapes do not compose");
    if (!(d_[k + 1] * d_[k]).is_zero()) throw DomainError("not a cochain complex: D_{k+1} D_k != 0");
  }
}

std::vector<std::size_t> CochainComplex::cochain_dims() const {
  std::vector<std::size_t> out;
  if (d_.empty()) return out;
  for (const auto& m : d_) out.push_back(m.cols());
  out.push_back(d_.back().rows());
  return out;
}

CochainComplex ce_complex(const LieAlgebraData& g, const ModuleData& v) {
  const std::size_t n = g.dim(), m = v.dim();
  std::vector<std::vector<unsigned>> basis(n + 1);
  std::vector<std::map<unsigned, std::size_t>> position(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    basis[k] = subsets(n, k);
    for (std::size_t p = 0; p < basis[k].size(); ++p) position[k][basis[k][p]] = p;
  }
  std::vector<QMatrix> d;
  for (std::size_t k = 0; k < n; ++k) {
    QMatrix dk(basis[k + 1].size() * m, basis[k].size() * m);
    for (std::size_t row = 0; row < basis[k + 1].size(); ++row) {
      const unsigned jmask = basis[k + 1][row];
      const auto j = members(jmask);
      for (std::size_t i = 0; i <= k; ++i) {
        const int sign = i % 2 == 0 ? 1 : -1;
        const std::size_t col = position[k].at(jmask & ~(1u << j[i]));
        const QMatrix& rho = v.action(j[i]);
        for (std::size_t w = 0; w < m; ++w) {
          for (std::size_t b = 0; b < m; ++b) {
            if (rho(w, b) != 0) dk(row * m + w, col * m + b) += sign * rho(w, b);
          }
        }
      }
      for (std::size_t i = 0; i <= k; ++i) {
        for (std::size_t l = i + 1; l <= k; ++l) {
          const int sign = (i + l) % 2 == 0 ? 1 : -1;
          const unsigned rest = jmask & ~(1u << j[i]) & ~(1u << j[l]);
          for (std::size_t e = 0; e < n; ++e) {
            const Rational& c = g.structure_constant(j[i], j[l], e);
            if (c == 0 || (rest & (1u << e))) continue;
            const int before = std::popcount(rest & ((1u << e) - 1));
            const int s = before % 2 == 0 ? sign : -sign;
            const std::size_t col = position[k].at(rest | (1u << e));
            for (std::size_t b = 0; b < m; ++b) dk(row * m + b, col * m + b) += s * c;
          }
        }
      }
    }
    d.push_back(std::move(dk));
  }
  if (d.empty()) d.emplace_back(0, m);
  return CochainComplex(std::move(d));
}

std::vector<std::size_t> cohomology_dims(const CochainComplex& c) {
  const auto& d = c.differentials();
  const auto dims = c.cochain_dims();
  std::vector<std::size_t> ranks;
  for (const auto& m : d) ranks.push_back(rank(m));
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    std::size_t kernel = k < ranks.size() ? dims[k] - ranks[k] : dims[k];
    std::size_t image = k > 0 ? ranks[k - 1] : 0;
    out.push_back(kernel - image);
  }
  return out;
}

GradedRingModel::GradedRingModel(std::string name, std::vector<std::size_t> dims, std::vector<QMatrix> cup,
                                 std::vector<Rational> sigma_class, std::optional<QMatrix> coboundaries)
    : name_(std::move(name)),
      betti_(std::move(dims)),
      cup_(std::move(cup)),
      sigma_(std::move(sigma_class)),
      coboundaries_(std::move(coboundaries)) {
  if (betti_.empty()) throw DomainError("ring model needs at least H^0");
  for (std::size_t k = 0; k < cup_.size(); ++k) {
    const int kk = static_cast<int>(k);
    if (cup_[k].rows() != betti(kk + 2) || cup_[k].cols() != betti(kk)) {
      throw DomainError("cup_sigma shape does not match Betti numbers in degree " + std::to_string(k));
    }
  }
  if (sigma_.size() != betti(2)) throw DomainError("sigma class length must equal dim H^2");
  for (auto& x : sigma_) x.canonicalize();
  if (!cup_.empty() && betti(0) == 1) {
    for (std::size_t r = 0; r < betti(2); ++r) {
      if (cup_[0](r, 0) != sigma_[r]) throw DomainError("cup_sigma on H^0 is inconsistent with the sigma class");
    }
  }
  if (coboundaries_ && coboundaries_->rows() != betti(2)) {
    throw DomainError("coboundary matrix must have dim H^2 rows");
  }
}

std::size_t GradedRingModel::betti(int k) const {
  if (k < 0 || k >= static_cast<int>(betti_.size())) return 0;
  return betti_[k];
}

QMatrix GradedRingModel::cup_sigma(int k) const {
  if (k >= 0 && k < static_cast<int>(cup_.size())) return cup_[k];
  return QMatrix(betti(k + 2), betti(k));
}

GradedRingModel GradedRingModel::torus(const Rational& area) {
  QMatrix c0(1, 1);
  c0(0, 0) = area;
  return GradedRingModel("t2", {1, 2, 1}, {c0}, {area});
}

GradedRingModel GradedRingModel::sphere() {
  return GradedRingModel("s2", {1, 0, 1}, {QMatrix(1, 1)}, {Rational(0)});
}

GradedRingModel GradedRingModel::s2xs2() {
  // H^2 basis ω₁, ω₂; H^4 basis ω₁ω₂; ω₁² = ω₂² = 0.
  QMatrix c0(2, 1), c2(1, 2);
  c0(0, 0) = -1;
  c0(1, 0) = 1;
  c2(0, 0) = 1;
  c2(0, 1) = -1;
  return GradedRingModel("s2xs2", {1, 0, 2, 0, 1}, {c0, QMatrix(0, 0), c2}, {Rational(-1), Rational(1)});
}

GradedRingModel GradedRingModel::preset(const std::string& name) {
  if (name == "t2") return torus();
  if (name == "s2") return sphere();
  if (name == "s2xs2") return s2xs2();
  throw DomainError("unknown ring model preset '" + name + "'");
}

std::size_t cone_cohomology(const GradedRingModel& r, int k) {
  if (k < 0) throw DomainError("cone_cohomology: degree must be non-negative");
  const std::size_t coker = r.betti(k) - rank(r.cup_sigma(k - 2));
  const std::size_t ker = r.betti(k - 1) - rank(r.cup_sigma(k - 1));
  return coker + ker;
}

bool sigma_exactness_test(const GradedRingModel& r, const std::vector<Rational>& class2) {
  if (class2.size() != r.betti(2)) throw DomainError("class length must equal dim H^2");
  bool zero = true;
  for (const auto& x : class2) zero = zero && x == 0;
  if (zero) return true;
  if (!r.coboundaries()) return false;
  return in_column_span(*r.coboundaries(), class2);
}

CriteriaReport evaluate_criteria(const GradedRingModel& r) {
  CriteriaReport rep;
  rep.family = r.name() + " x I";
  const std::size_t rel = r.betti(1);
  const std::size_t restricted = cone_cohomology(r, 2);
  const std::size_t normal = cone_cohomology(r, 1);
  rep.groups = {{"H^2_pi(M,S)", rel}, {"H^2_pi,S(M)", restricted}, {"H^1_pi,S(M;nu_S)", normal}};
  rep.criterion1 = rel == 0;
  rep.criterion2 = restricted == 0;
  rep.criterion3 = normal == 0;
  return rep;
}

CriteriaReport evaluate_criteria(const LieAlgebraData& g) {
  CriteriaReport rep;
  rep.family = "point leaf, isotropy " + g.name();
  auto dims = [](const CochainComplex& c, std::size_t k) {
    auto h = cohomology_dims(c);
    return k < h.size() ? h[k] : std::size_t{0};
  };
  const std::size_t h2 = dims(ce_complex(g, ModuleData::trivial(g)), 2);
  const std::size_t h1_adj = dims(ce_complex(g, ModuleData::adjoint(g)), 1);
  const std::size_t h1_coadj = dims(ce_complex(g, ModuleData::coadjoint(g)), 1);
  rep.groups = {{"H^2(g)", h2}, {"H^1(g;g)", h1_adj}, {"H^1(g;g*)", h1_coadj}};
  rep.criterion1 = h2 == 0;
  rep.criterion2 = h2 == 0;
  rep.criterion3 = h1_coadj == 0;
  return rep;
}

}  // namespace leafstab
