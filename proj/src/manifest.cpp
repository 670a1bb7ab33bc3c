#include "leafstab/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "leafstab/expression.hpp"

namespace leafstab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Entry {
  std::size_t line;
  std::string key;
  std::string value;
};

struct Block {
  std::size_t line;
  std::string kind;
  std::string name;
  std::vector<Entry> entries;
};

class Loader {
 public:
  explicit Loader(const std::string& text) { split(text); }

  Manifest load() {
    Manifest m;
    auto chart_it = std::find_if(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.kind == "chart"; });
    for (const auto& b : blocks_) {
      if (b.kind == "chart") {
        if (m.chart) fail(b.line, b, "", "duplicate [chart] section");
        m.chart = chart(b);
      }
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& b : blocks_) {
      if (b.kind == "chart") continue;
      if (!seen.insert({b.kind, b.name}).second) fail(b.line, b, "", "duplicate section name");
      const bool needs_chart = b.kind == "bivector" || b.kind == "triple" || b.kind == "section" || b.kind == "cochain";
      if (needs_chart && !m.chart) fail(b.line, b, "", "a [chart] section is required before geometric objects");
      if (needs_chart && chart_it->line > b.line) fail(b.line, b, "", "[chart] must precede geometric objects");
      if (b.kind == "bivector") {
        m.bivectors.emplace(b.name, bivector(b, m.chart));
      } else if (b.kind == "triple") {
        m.triples.emplace(b.name, triple(b, m.chart));
      } else if (b.kind == "section") {
        m.sections.emplace(b.name, section(b, m.chart));
      } else if (b.kind == "cochain") {
        m.cochains.emplace(b.name, cochain(b, m.chart));
      } else if (b.kind == "lie_algebra") {
        m.lie_algebras.emplace(b.name, lie_algebra(b));
      } else if (b.kind == "ring") {
        m.rings.emplace(b.name, ring(b));
      } else if (b.kind == "family") {
        m.families.emplace(b.name, family(b));
      } else if (b.kind == "grid") {
        m.grids.emplace(b.name, grid(b));
      } else {
        fail(b.line, b, "", "unknown section type '" + b.kind + "'");
      }
    }
    return m;
  }

 private:
  [[noreturn]] static void fail(std::size_t line, const Block& b, const std::string& key, const std::string& what) {
    std::string where = "line " + std::to_string(line) + ": [" + b.kind + (b.name.empty() ? "" : " " + b.name) + "]";
    if (!key.empty()) where += " key '" + key + "'";
    throw ManifestError(where + ": " + what);
  }

  void split(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const std::string s = trim(raw);
      if (s.empty() || s[0] == '#') continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ManifestError("line " + std::to_string(line) + ": unterminated section header");
        auto w = words(s.substr(1, s.size() - 2));
        if (w.empty() || w.size() > 2) throw ManifestError("line " + std::to_string(line) + ": malformed section header");
        if (w[0] != "chart" && w.size() != 2) {
          throw ManifestError("line " + std::to_string(line) + ": section [" + w[0] + "] needs a name");
        }
        blocks_.push_back({line, w[0], w.size() == 2 ? w[1] : "", {}});
        continue;
      }
      if (blocks_.empty()) throw ManifestError("line " + std::to_string(line) + ": entry outside of any section");
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, blocks_.back(), s, "expected 'key = value'");
      std::string key = trim(s.substr(0, eq));
      // Normalize internal whitespace of the key.
      std::string norm;
      for (const auto& w : words(key)) norm += (norm.empty() ? "" : " ") + w;
      for (const auto& e : blocks_.back().entries) {
        if (e.key == norm) fail(line, blocks_.back(), norm, "duplicate key");
      }
      blocks_.back().entries.push_back({line, norm, trim(s.substr(eq + 1))});
    }
  }

  static const Entry* find(const Block& b, const std::string& key) {
    for (const auto& e : b.entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  static void only_keys(const Block& b, std::initializer_list<const char*> keys) {
    for (const auto& e : b.entries) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return e.key == k; })) {
        fail(e.line, b, e.key, "unknown key");
      }
    }
  }

  static RationalFunction expression(const Block& b, const Entry& e, const Chart& c) {
    try {
      return parse_expression(e.value, c);
    } catch (const ParseError& err) {
      fail(e.line, b, e.key, err.what());
    }
  }

  static std::size_t variable(const Block& b, const Entry& e, const Chart& c, const std::string& name) {
    auto idx = c.index_of(name);
    if (!idx) fail(e.line, b, e.key, "unknown variable '" + name + "'");
    if (c.is_param(*idx)) fail(e.line, b, e.key, "parameter '" + name + "' cannot be used as a direction");
    return *idx;
  }

  static ChartPtr chart(const Block& b) {
    only_keys(b, {"base", "fiber", "params"});
    auto get = [&](const char* k) {
      const Entry* e = find(b, k);
      return e ? words(e->value) : std::vector<std::string>{};
    };
    try {
      return make_chart(get("base"), get("fiber"), get("params"));
    } catch (const Error& err) {
      fail(b.line, b, "", err.what());
    }
  }

  static Multivector bivector(const Block& b, const ChartPtr& c) {
    Multivector m(c, 2);
    for (const auto& e : b.entries) {
      auto w = words(e.key);
      if (w.size() != 2) fail(e.line, b, e.key, "bivector keys name two variables");
      const auto i = variable(b, e, *c, w[0]), j = variable(b, e, *c, w[1]);
      if (i == j) fail(e.line, b, e.key, "repeated variable");
      m.add_term({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)}, expression(b, e, *c));
    }
    return m;
  }

  static std::uint8_t fiber_position(const Block& b, const Entry& e, const Chart& c, const std::string& name) {
    const auto i = variable(b, e, c, name);
    if (!c.is_fiber(i)) fail(e.line, b, e.key, "'" + name + "' is not a fiber variable");
    return static_cast<std::uint8_t>(i - c.base_dim());
  }

  static std::uint8_t base_position(const Block& b, const Entry& e, const Chart& c, const std::string& name) {
    const auto i = variable(b, e, c, name);
    if (i >= c.base_dim()) fail(e.line, b, e.key, "'" + name + "' is not a base variable");
    return static_cast<std::uint8_t>(i);
  }

  static GeometricTriple triple(const Block& b, const ChartPtr& c) {
    GeometricTriple t(c);
    for (const auto& e : b.entries) {
      const auto colon = e.key.find(':');
      if (colon == std::string::npos) fail(e.line, b, e.key, "keys start with vertical:, connection: or horizontal:");
      const std::string part = trim(e.key.substr(0, colon));
      const auto w = words(e.key.substr(colon + 1));
      const auto f = expression(b, e, *c);
      if (part == "vertical") {
        if (w.size() != 2) fail(e.line, b, e.key, "vertical keys name two fiber variables");
        const auto a = fiber_position(b, e, *c, w[0]), bb = fiber_position(b, e, *c, w[1]);
        if (a == bb) fail(e.line, b, e.key, "repeated variable");
        t.vertical.add_term({}, {a, bb}, f);
      } else if (part == "connection") {
        if (w.size() != 2) fail(e.line, b, e.key, "connection keys name a base and a fiber variable");
        t.connection.set(base_position(b, e, *c, w[0]), fiber_position(b, e, *c, w[1]),
                         t.connection.coefficient(base_position(b, e, *c, w[0]), fiber_position(b, e, *c, w[1])) + f);
      } else if (part == "horizontal") {
        if (w.size() != 2) fail(e.line, b, e.key, "horizontal keys name two base variables");
        const auto i = base_position(b, e, *c, w[0]), j = base_position(b, e, *c, w[1]);
        if (i == j) fail(e.line, b, e.key, "repeated variable");
        t.horizontal.add_term({i, j}, {}, f);
      } else {
        fail(e.line, b, e.key, "unknown component '" + part + "'");
      }
    }
    return t;
  }

  static Section section(const Block& b, const ChartPtr& c) {
    std::vector<Poly> comps(c->fiber_dim(), Poly(c->num_vars()));
    for (const auto& e : b.entries) {
      const auto a = fiber_position(b, e, *c, e.key);
      const auto f = expression(b, e, *c);
      if (!f.is_polynomial()) fail(e.line, b, e.key, "section components must be polynomials");
      for (std::size_t k = 0; k < c->fiber_dim(); ++k) {
        if (f.depends_on(c->fiber_index(k))) fail(e.line, b, e.key, "section components must not depend on fiber variables");
      }
      comps[a] = f.numerator();
    }
    return Section(c, std::move(comps));
  }

  static GradedSum cochain(const Block& b, const ChartPtr& c) {
    GradedSum g(c);
    for (const auto& e : b.entries) {
      const auto bar = e.key.find('|');
      if (bar == std::string::npos) fail(e.line, b, e.key, "cochain keys have the form 'base... | fiber...'");
      MultiIndex base, fiber;
      for (const auto& w : words(e.key.substr(0, bar))) base.push_back(base_position(b, e, *c, w));
      for (const auto& w : words(e.key.substr(bar + 1))) fiber.push_back(fiber_position(b, e, *c, w));
      BigradedElement el(c, static_cast<int>(fiber.size()), static_cast<int>(base.size()));
      try {
        el.add_term(base, fiber, expression(b, e, *c));
      } catch (const Error& err) {
        fail(e.line, b, e.key, err.what());
      }
      g.add(el);
    }
    return g;
  }

  static LieAlgebraData lie_algebra(const Block& b) {
    const Entry* basis = find(b, "basis");
    if (!basis) fail(b.line, b, "basis", "missing key");
    const auto names = words(basis->value);
    if (names.empty()) fail(basis->line, b, "basis", "empty basis");
    ChartPtr c;
    try {
      c = make_chart(names, {});
    } catch (const Error& err) {
      fail(basis->line, b, "basis", err.what());
    }
    const std::size_t n = names.size();
    std::vector<std::vector<std::vector<Rational>>> k(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
    for (const auto& e : b.entries) {
      if (e.key == "basis") continue;
      const auto w = words(e.key);
      if (w.size() != 2) fail(e.line, b, e.key, "bracket keys name two basis elements");
      const auto i = variable(b, e, *c, w[0]), j = variable(b, e, *c, w[1]);
      const auto f = expression(b, e, *c);
      if (!f.is_polynomial()) fail(e.line, b, e.key, "brackets must be linear combinations of basis elements");
      for (const auto& [exp, coef] : f.numerator().terms()) {
        std::size_t deg = 0, at = 0;
        for (std::size_t v = 0; v < n; ++v) {
          deg += exp[v];
          if (exp[v]) at = v;
        }
        if (deg != 1) fail(e.line, b, e.key, "brackets must be linear combinations of basis elements");
        k[i][j][at] += coef;
        k[j][i][at] -= coef;
      }
    }
    try {
      return LieAlgebraData(b.name, std::move(k));
    } catch (const Error& err) {
      fail(b.line, b, "", err.what());
    }
  }

  static std::vector<Rational> rational_list(const Block& b, const Entry& e) {
    std::vector<Rational> out;
    for (const auto& w : words(e.value)) {
      try {
        out.push_back(parse_rational(w));
      } catch (const Error& err) {
        fail(e.line, b, e.key, err.what());
      }
    }
    return out;
  }

  static GradedRingModel ring(const Block& b) {
    const Entry* be = find(b, "betti");
    if (!be) fail(b.line, b, "betti", "missing key");
    std::vector<std::size_t> betti;
    for (const auto& r : rational_list(b, *be)) {
      if (r < 0 || r.get_den() != 1) fail(be->line, b, "betti", "Betti numbers are non-negative integers");
      betti.push_back(r.get_num().get_ui());
    }
    auto dim = [&](int k) { return k >= 0 && k < static_cast<int>(betti.size()) ? betti[k] : std::size_t{0}; };
    auto matrix = [&](const Entry& e, std::size_t rows, std::size_t cols) {
      QMatrix m(rows, cols);
      std::vector<std::string> row_text;
      std::string v = e.value;
      std::size_t start = 0;
      for (std::size_t p; (p = v.find(';', start)) != std::string::npos; start = p + 1) row_text.push_back(v.substr(start, p - start));
      row_text.push_back(v.substr(start));
      if (rows == 0 && row_text.size() == 1 && trim(row_text[0]).empty()) return m;
      if (row_text.size() != rows) fail(e.line, b, e.key, "expected " + std::to_string(rows) + " rows separated by ';'");
      for (std::size_t r = 0; r < rows; ++r) {
        Entry tmp{e.line, e.key, row_text[r]};
        auto vals = rational_list(b, tmp);
        if (vals.size() != cols) fail(e.line, b, e.key, "expected " + std::to_string(cols) + " entries per row");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = vals[c];
      }
      return m;
    };
    std::vector<QMatrix> cup;
    std::vector<Rational> sigma(dim(2));
    std::optional<QMatrix> cob;
    std::map<int, QMatrix> cups;
    for (const auto& e : b.entries) {
      if (e.key == "betti") continue;
      if (e.key == "sigma") {
        sigma = rational_list(b, e);
      } else if (e.key == "coboundaries") {
        const auto cols = words(e.value.substr(0, e.value.find(';'))).size();
        cob = matrix(e, dim(2), cols);
      } else if (e.key.rfind("cup", 0) == 0) {
        int k = -1;
        try {
          k = std::stoi(e.key.substr(3));
        } catch (...) {
        }
        if (k < 0 || k + 2 >= static_cast<int>(betti.size())) fail(e.line, b, e.key, "cup degree out of range");
        cups[k] = matrix(e, dim(k + 2), dim(k));
      } else {
        fail(e.line, b, e.key, "unknown key");
      }
    }
    for (int k = 0; k + 2 < static_cast<int>(betti.size()); ++k) {
      auto it = cups.find(k);
      cup.push_back(it != cups.end() ? it->second : QMatrix(dim(k + 2), dim(k)));
    }
    try {
      return GradedRingModel(b.name, betti, cup, sigma, cob);
    } catch (const Error& err) {
      fail(b.line, b, "", err.what());
    }
  }

  static FamilySpec family(const Block& b) {
    FamilySpec f;
    for (const auto& e : b.entries) {
      if (e.key == "name") {
        f.name = e.value;
        continue;
      }
      try {
        f.params[e.key] = parse_rational(e.value);
      } catch (const Error& err) {
        fail(e.line, b, e.key, err.what());
      }
    }
    if (f.name.empty()) fail(b.line, b, "name", "missing key");
    try {
      leaf::family_triple(f.name, f.params);
    } catch (const Error& err) {
      fail(b.line, b, "name", err.what());
    }
    return f;
  }

  static leaf::Grid grid(const Block& b) {
    only_keys(b, {"n1", "n2"});
    auto get = [&](const char* k) -> std::size_t {
      const Entry* e = find(b, k);
      if (!e) fail(b.line, b, k, "missing key");
      try {
        std::size_t used = 0;
        long v = std::stol(e->value, &used);
        if (used != e->value.size() || v < 0) throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        fail(e->line, b, k, "expected a non-negative integer");
      }
    };
    try {
      return leaf::Grid(get("n1"), get("n2"));
    } catch (const DomainError& err) {
      fail(b.line, b, "", err.what());
    }
  }

  std::vector<Block> blocks_;
};

}  // namespace

Rational parse_rational(const std::string& text) {
  const std::string t = trim(text);
  std::size_t i = 0;
  if (i < t.size() && (t[i] == '-' || t[i] == '+')) ++i;
  const std::size_t digits = i;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == digits) throw DomainError("'" + text + "' is not a rational number");
  if (i < t.size()) {
    if (t[i] != '/') throw DomainError("'" + text + "' is not a rational number");
    const std::size_t den = ++i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i == den || i != t.size()) throw DomainError("'" + text + "' is not a rational number");
  }
  Rational r;
  if (r.set_str(t[0] == '+' ? t.substr(1) : t, 10) != 0) throw DomainError("'" + text + "' is not a rational number");
  if (r.get_den() == 0) throw DomainError("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

Manifest parse_manifest(const std::string& text) {
  Manifest m = Loader(text).load();
  m.source = text;
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

}  // namespace leafstab
