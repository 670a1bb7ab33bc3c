#include "leafstab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "leafstab/expression.hpp"
#include "leafstab/manifest.hpp"
#include "leafstab/report.hpp"

namespace leafstab {

namespace {

struct Options {
  std::string manifest;
  std::string output;
  std::string bivector, triple, section, cochain, reference;
  std::string lie_algebra, coeff = "trivial", ring, preset, family;
  std::string t = "1", eps, a, delta, s0 = "zero";
  std::vector<std::string> sets;
  int degree = -1;
  unsigned bound = 2;
  std::size_t grid = 32, n1 = 0, n2 = 0;
  int max_iter = 5000;
  double tol = 1e-10;
};

class Command {
 public:
  Command(const Options& o, std::vector<std::string> args) : o_(o), args_(std::move(args)) {
    if (!o_.manifest.empty()) manifest_ = load_manifest(o_.manifest);
  }

  Json header(const std::string& name) const {
    std::vector<std::string> norm;
    for (std::size_t i = 0; i < args_.size(); ++i) {
      if (args_[i] == "--output" || args_[i] == "-o") {
        ++i;
        continue;
      }
      if (args_[i] == "--manifest" && i + 1 < args_.size()) {
        norm.push_back(args_[i]);
        norm.push_back(std::filesystem::path(args_[++i]).filename().string());
        continue;
      }
      norm.push_back(args_[i]);
    }
    std::string digest_input = manifest_ ? manifest_->source : std::string();
    digest_input += "\n--\n";
    for (const auto& a : norm) digest_input += a + "\n";
    Json j;
    j["tool"] = "leafstab";
    j["format"] = 1;
    j["command"] = name;
    j["arguments"] = norm;
    j["input_digest"] = "fnv1a64:" + hex64(fnv1a64(digest_input));
    return j;
  }

  const Manifest& manifest() const {
    if (!manifest_) throw DomainError("this command needs --manifest");
    return *manifest_;
  }

  template <class Map>
  const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* what) const {
    auto it = m.find(name);
    if (it == m.end()) throw DomainError(std::string("manifest has no ") + what + " named '" + name + "'");
    return it->second;
  }

  // --triple NAME, or --bivector NAME converted to its triple.
  GeometricTriple triple() const {
    if (!o_.triple.empty()) return lookup(manifest().triples, o_.triple, "triple");
    if (!o_.bivector.empty()) return triple_from_bivector(lookup(manifest().bivectors, o_.bivector, "bivector"));
    throw DomainError("pass --triple or --bivector");
  }

  Section section(const ChartPtr& chart) const {
    if (o_.section.empty()) return Section::zero(chart);
    return lookup(manifest().sections, o_.section, "section");
  }

  const Options& opts() const { return o_; }

 private:
  const Options& o_;
  std::vector<std::string> args_;
  std::optional<Manifest> manifest_;
};

std::string str(const Rational& r) { return r.get_str(); }

Json triple_json(const GeometricTriple& t) {
  Json j;
  j["vertical"] = t.vertical.to_string();
  j["connection"] = t.connection.as_element().to_string();
  j["horizontal"] = t.horizontal.to_string();
  return j;
}

Json residual_json(const StructureResiduals& r) {
  Json j;
  j["r1_vertical_poisson"] = r.r1.to_string();
  j["r2_vertical_parallel"] = r.r2.to_string();
  j["r3_horizontal_closed"] = r.r3.to_string();
  j["r4_curvature"] = r.r4.to_string();
  j["all_zero"] = r.all_zero();
  return j;
}

Json check_poisson(const Command& c) {
  const auto& pi = c.lookup(c.manifest().bivectors, c.opts().bivector, "bivector");
  Json r;
  r["bivector"] = c.opts().bivector;
  r["poisson"] = is_poisson(pi);
  r["schouten_square"] = schouten(pi, pi).to_string();
  return r;
}

Json triple_cmd(const Command& c) {
  const auto& pi = c.lookup(c.manifest().bivectors, c.opts().bivector, "bivector");
  const GeometricTriple t = triple_from_bivector(pi);
  const Multivector back = bivector_from_triple(t);
  Json r = triple_json(t);
  r["round_trip_equal"] = back == pi;
  r["round_trip_digest"] = "fnv1a64:" + hex64(fnv1a64(back.to_string()));
  return r;
}

Json verify(const Command& c) { return residual_json(verify_structure_equations(c.triple())); }

Json leaf_check(const Command& c) {
  const GeometricTriple t = c.triple();
  const auto ob = leaf_obstruction(t, c.section(t.chart()));
  Json r;
  r["vertical_part"] = ob.vertical_part.to_string();
  r["connection_part"] = ob.connection_part.to_string();
  r["is_leaf"] = ob.is_zero();
  return r;
}

Json linearize_cmd(const Command& c) {
  const GeometricTriple t = c.triple();
  return triple_json(linearize_triple(t, c.section(t.chart())));
}

Json jet(const Command& c) {
  const GeometricTriple j = first_jet(c.triple());
  Json r = triple_json(j);
  r["first_order"] = is_first_order(j);
  r["residuals_zero"] = verify_structure_equations(j).all_zero();
  return r;
}

Json kernel(const Command& c) {
  const GeometricTriple j = first_jet(c.triple());
  const auto basis = flat_kernel_sections(j, c.opts().bound);
  Json r;
  r["degree_bound"] = c.opts().bound;
  r["dimension"] = basis.size();
  Json secs = Json::array();
  for (const auto& s : basis) {
    Json comps = Json::array();
    for (const auto& p : s.components()) comps.push_back(p.to_string(*j.chart()));
    secs.push_back(comps);
  }
  r["sections"] = secs;
  return r;
}

LieAlgebraData lie_algebra(const Command& c) {
  const std::string& n = c.opts().lie_algebra;
  if (n == "su2") return LieAlgebraData::su2();
  if (n == "aff1") return LieAlgebraData::aff1();
  if (n.rfind("abelian", 0) == 0 && n.size() > 7 && std::all_of(n.begin() + 7, n.end(), ::isdigit)) {
    return LieAlgebraData::abelian(std::stoul(n.substr(7)));
  }
  return c.lookup(c.manifest().lie_algebras, n, "lie_algebra");
}

GradedRingModel ring(const Command& c) {
  if (!c.opts().preset.empty()) return GradedRingModel::preset(c.opts().preset);
  return c.lookup(c.manifest().rings, c.opts().ring, "ring");
}

Json cohomology(const Command& c) {
  Json r;
  if (!c.opts().lie_algebra.empty()) {
    const auto g = lie_algebra(c);
    ModuleData v = [&] {
      const auto& k = c.opts().coeff;
      if (k == "trivial") return ModuleData::trivial(g);
      if (k == "adjoint") return ModuleData::adjoint(g);
      if (k == "coadjoint") return ModuleData::coadjoint(g);
      throw DomainError("--coeff must be trivial, adjoint or coadjoint");
    }();
    const auto dims = cohomology_dims(ce_complex(g, v));
    r["lie_algebra"] = g.name();
    r["coefficients"] = v.name();
    r["dims"] = dims;
    if (c.opts().degree >= 0) {
      r["degree"] = c.opts().degree;
      r["dim"] = static_cast<std::size_t>(c.opts().degree) < dims.size() ? dims[c.opts().degree] : 0;
    }
    return r;
  }
  if (c.opts().preset.empty() && c.opts().ring.empty()) throw DomainError("pass --lie-algebra, --ring or --preset");
  const auto m = ring(c);
  std::vector<std::size_t> cone;
  for (int k = 0; k <= static_cast<int>(m.top_degree()) + 2; ++k) cone.push_back(cone_cohomology(m, k));
  r["ring"] = m.name();
  r["betti"] = m.betti_numbers();
  r["cone_dims"] = cone;
  if (c.opts().degree >= 0) {
    r["degree"] = c.opts().degree;
    r["dim"] = cone_cohomology(m, c.opts().degree);
  }
  return r;
}

Json criteria(const Command& c) {
  CriteriaReport rep;
  Json r;
  if (!c.opts().lie_algebra.empty()) {
    rep = evaluate_criteria(lie_algebra(c));
  } else if (!c.opts().preset.empty() || !c.opts().ring.empty()) {
    const auto m = ring(c);
    rep = evaluate_criteria(m);
    r["sigma_class_exact"] = sigma_exactness_test(m, m.sigma_class());
  } else {
    throw DomainError("pass --preset, --ring or --lie-algebra");
  }
  Json out;
  out["family"] = rep.family;
  Json groups = Json::array();
  for (const auto& g : rep.groups) groups.push_back(Json{{"name", g.name}, {"dim", g.dim}});
  out["groups"] = groups;
  out["criterion1_stable"] = rep.criterion1;
  out["criterion2_strongly_stable"] = rep.criterion2;
  out["criterion3_algebroid_stable"] = rep.criterion3;
  for (auto& [k, v] : r.items()) out[k] = v;
  return out;
}

Json deform(const Command& c) {
  const GeometricTriple t = c.triple();
  const auto& cc = c.lookup(c.manifest().cochains, c.opts().cochain, "cochain");
  const Rational p = parse_rational(c.opts().t);
  const GeometricTriple d = deform_by_cocycle(t, cc, p);
  Json r;
  r["t"] = str(p);
  r["is_cocycle"] = is_cocycle(t, cc);
  r["deformed"] = triple_json(d);
  r["residuals"] = residual_json(verify_structure_equations(d));
  return r;
}

// Substitutes parameter values and moves the triple to a parameter-free chart.
GeometricTriple instantiate(const GeometricTriple& t, const std::vector<std::string>& sets) {
  const Chart& c = *t.chart();
  std::map<std::string, Rational> values;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw DomainError("--set expects NAME=VALUE, got '" + s + "'");
    values[s.substr(0, eq)] = parse_rational(s.substr(eq + 1));
  }
  std::vector<std::optional<Poly>> repl(c.num_vars());
  for (std::size_t k = 0; k < c.param_dim(); ++k) {
    auto it = values.find(c.params()[k]);
    if (it == values.end()) throw DomainError("parameter '" + c.params()[k] + "' needs a value (--set " + c.params()[k] + "=...)");
    repl[c.param_index(k)] = Poly(c.num_vars(), it->second);
  }
  for (const auto& [k, v] : values) {
    auto idx = c.index_of(k);
    if (!idx || !c.is_param(*idx)) throw DomainError("--set names unknown parameter '" + k + "'");
  }
  auto target = make_chart(c.base_vars(), c.fiber_vars());
  const std::size_t nv = target->num_vars();
  auto move_poly = [&](const Poly& p) {
    Poly out(nv);
    for (const auto& [e, q] : p.terms()) out.add_term(Exponent(e.begin(), e.begin() + static_cast<long>(nv)), q);
    return out;
  };
  auto move = [&](const RationalFunction& f) {
    RationalFunction g = f.substitute(repl);
    return RationalFunction(move_poly(g.numerator())) / RationalFunction(move_poly(g.denominator()));
  };
  auto move_element = [&](const BigradedElement& e) {
    BigradedElement out(target, e.q(), e.p());
    e.for_each_term([&](const MultiIndex& b, const MultiIndex& f, const RationalFunction& co) { out.add_term(b, f, move(co)); });
    return out;
  };
  ConnectionData g(target);
  for (std::size_t i = 0; i < c.base_dim(); ++i) {
    for (std::size_t a = 0; a < c.fiber_dim(); ++a) g.set(i, a, move(t.connection.coefficient(i, a)));
  }
  return GeometricTriple(move_element(t.vertical), g, move_element(t.horizontal));
}

Json find_leaf_cmd(const Command& c, int& exit_code) {
  const Options& o = c.opts();
  std::shared_ptr<const leaf::DiscreteTriple> target, reference;
  Json source;
  if (!o.family.empty()) {
    FamilySpec spec{o.family, {}};
    bool from_manifest = false;
    if (!o.manifest.empty()) {
      auto it = c.manifest().families.find(o.family);
      if (it != c.manifest().families.end()) {
        spec = it->second;
        from_manifest = true;
      }
    }
    if (!from_manifest) {
      if (!o.eps.empty()) spec.params["eps"] = parse_rational(o.eps);
      if (!o.a.empty()) spec.params["a"] = parse_rational(o.a);
      if (!o.delta.empty()) spec.params["delta"] = parse_rational(o.delta);
    }
    std::map<std::string, Rational> ref_params;
    if (spec.params.count("a")) ref_params["a"] = spec.params.at("a");
    target = leaf::sample_triple(leaf::family_triple(spec.name, spec.params));
    reference = leaf::sample_triple(leaf::family_triple("torus-area-family", ref_params));
    source["family"] = spec.name;
    Json ps = Json::object();
    for (const auto& [k, v] : spec.params) ps[k] = str(v);
    source["parameters"] = ps;
  } else if (!o.triple.empty()) {
    target = leaf::sample_triple(instantiate(c.triple(), o.sets));
    const std::string ref = o.reference.empty() ? o.triple : o.reference;
    reference = leaf::sample_triple(instantiate(c.lookup(c.manifest().triples, ref, "triple"), o.sets));
    source["triple"] = o.triple;
    source["reference"] = ref;
  } else {
    throw DomainError("pass --family or --triple");
  }
  const leaf::Grid grid(o.n1 ? o.n1 : o.grid, o.n2 ? o.n2 : o.grid);
  const std::size_t m = target->fiber_dim();
  leaf::DiscreteSection s0(grid, m);
  if (o.s0 == "zero") {
  } else if (o.s0.rfind("const:", 0) == 0) {
    const double v = parse_rational(o.s0.substr(6)).get_d();
    s0 = leaf::DiscreteSection::sample(grid, m, [&](double, double, std::size_t) { return v; });
  } else if (o.s0.rfind("wave:", 0) == 0) {
    const double amp = parse_rational(o.s0.substr(5)).get_d();
    s0 = leaf::DiscreteSection::sample(grid, m, [&](double x1, double x2, std::size_t a) {
      return amp * (std::sin(x1 + static_cast<double>(a)) + 0.5 * std::cos(2 * x2));
    });
  } else {
    throw DomainError("--s0 must be zero, const:VALUE or wave:AMPLITUDE");
  }
  leaf::FindLeafParams params;
  params.max_iter = o.max_iter;
  params.tol = o.tol;
  const auto rep = leaf::find_leaf(*reference, *target, s0, params);
  Json r = source;
  r["grid"] = {grid.n1, grid.n2};
  r["s0"] = o.s0;
  r["converged"] = rep.converged;
  r["residual"] = rep.residual;
  r["iterations"] = rep.iterations;
  r["stop_reason"] = rep.stop_reason;
  r["kernel_dimension"] = rep.kernel_component.size();
  r["kernel_component"] = rep.kernel_component;
  // At most 64 trace entries: evenly spaced, always including the last one.
  Json trace = Json::array();
  const std::size_t n = rep.trace.size(), step = n > 64 ? (n + 62) / 63 : 1;
  for (std::size_t i = 0; i < n; i += step) trace.push_back(Json{{"iteration", i}, {"phi", rep.trace[i]}});
  if ((n - 1) % step != 0) trace.push_back(Json{{"iteration", n - 1}, {"phi", rep.trace[n - 1]}});
  r["trace"] = trace;
  if (!rep.converged) exit_code = kExitNoConvergence;
  return r;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult res;
  Options o;
  CLI::App app{"Leaf stability toolkit for Poisson structures", "leafstab"};
  app.require_subcommand(1);
  struct Subcommand {
    const char* name;
    const char* help;
    std::function<Json(const Command&, int&)> run;
  };
  auto simple = [](Json (*f)(const Command&)) {
    return [f](const Command& c, int&) { return f(c); };
  };
  const std::vector<Subcommand> subcommands{
      {"check-poisson", "Test [pi,pi] = 0 for a manifest bivector", simple(check_poisson)},
      {"triple", "Extract the geometric triple of a bivector and check the round trip", simple(triple_cmd)},
      {"verify", "Structure-equation residuals of a triple", simple(verify)},
      {"leaf-check", "Leaf obstruction of a triple along a section", simple(leaf_check)},
      {"linearize", "Linearization of a triple along a section", simple(linearize_cmd)},
      {"jet", "First jet along the zero section", simple(jet)},
      {"kernel", "Flat polynomial sections of the first jet", simple(kernel)},
      {"cohomology", "Chevalley-Eilenberg or mapping-cone dimensions", simple(cohomology)},
      {"criteria", "Evaluate the three stability criteria", simple(criteria)},
      {"deform", "Deform a first-order triple by a cochain and verify", simple(deform)},
      {"find-leaf", "Search for a leaf of a perturbed structure on the torus", find_leaf_cmd},
  };
  std::map<CLI::App*, const Subcommand*> by_app;
  for (const auto& s : subcommands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--manifest", o.manifest, "Manifest file");
    sub->add_option("-o,--output", o.output, "Write the report to a file instead of stdout");
    const std::string n = s.name;
    if (n == "check-poisson" || n == "triple") sub->add_option("--bivector", o.bivector)->required();
    if (n == "verify" || n == "leaf-check" || n == "linearize" || n == "jet" || n == "kernel" || n == "deform") {
      sub->add_option("--triple", o.triple, "Triple name");
      sub->add_option("--bivector", o.bivector, "Bivector name (converted to its triple)");
    }
    if (n == "leaf-check" || n == "linearize") sub->add_option("--section", o.section, "Section name (default zero)");
    if (n == "kernel") sub->add_option("--degree-bound", o.bound, "Polynomial degree bound");
    if (n == "cohomology" || n == "criteria") {
      sub->add_option("--lie-algebra", o.lie_algebra, "su2, aff1, abelianN or a manifest name");
      sub->add_option("--ring", o.ring, "Ring model from the manifest");
      sub->add_option("--preset", o.preset, "Built-in ring model: t2, s2, s2xs2");
    }
    if (n == "cohomology") {
      sub->add_option("--coeff", o.coeff, "trivial, adjoint or coadjoint");
      sub->add_option("--degree", o.degree, "Report one degree");
    }
    if (n == "deform") {
      sub->add_option("--cochain", o.cochain)->required();
      sub->add_option("--t", o.t, "Deformation parameter (rational)");
    }
    if (n == "find-leaf") {
      sub->add_option("--family", o.family, "torus-area-family, torus-epsilon, torus-f-shift or a manifest family");
      sub->add_option("--eps", o.eps);
      sub->add_option("-a,--a", o.a);
      sub->add_option("--delta", o.delta);
      sub->add_option("--triple", o.triple, "Symbolic triple from the manifest");
      sub->add_option("--reference", o.reference, "Unperturbed triple for the kernel (default: --triple)");
      sub->add_option("--set", o.sets, "Parameter value NAME=RATIONAL");
      sub->add_option("--grid", o.grid, "Points per direction");
      sub->add_option("--n1", o.n1);
      sub->add_option("--n2", o.n2);
      sub->add_option("--s0", o.s0, "zero, const:VALUE or wave:AMPLITUDE");
      sub->add_option("--max-iter", o.max_iter);
      sub->add_option("--tol", o.tol);
    }
    by_app[sub] = &s;
  }

  std::ostringstream out, err;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    res.output = out.str();
    res.error = err.str();
    res.exit_code = code == 0 ? kExitOk : kExitValidation;
    return res;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Subcommand& chosen = *by_app.at(sub);
  std::vector<std::string> rest(args.begin() + 1, args.end());
  try {
    Command cmd(o, rest);
    int code = kExitOk;
    Json report = cmd.header(chosen.name);
    report["result"] = chosen.run(cmd, code);
    const std::string text = dump_report(report);
    if (!o.output.empty()) {
      std::ofstream f(o.output, std::ios::binary);
      if (!f) throw DomainError("cannot write '" + o.output + "'");
      f << text;
    } else {
      res.output = text;
    }
    res.exit_code = code;
  } catch (const NumericError& e) {
    res.error = std::string("error: ") + e.what() + "\n";
    res.exit_code = kExitNoConvergence;
  } catch (const std::exception& e) {
    res.error = std::string("error: ") + e.what() + "\n";
    res.exit_code = kExitValidation;
  }
  return res;
}

}  // namespace leafstab
