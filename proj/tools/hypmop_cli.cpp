#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hypmop/hppade.hpp"
#include "hypmop/rmt.hpp"
#include "hypmop/sweep.hpp"
#include "hypmop/zeros.hpp"

using namespace hypmop;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Config {
  std::string command;
  std::string setting, a, b, c, n, m, z, model, kind, variant, sweep;
  long samples = 0;
  std::uint64_t seed = 1;
  int precision = 40;
  int p = -1, q = -1, k = 8, n_max = 0, size = 6;
  std::string format = "json", out;
  bool ks = false;
};

struct CheckRow {
  std::string name;
  bool passed;
  std::string residual;
  bool exact;
};

struct Output {
  Json results = Json::object();
  std::vector<CheckRow> checks;
  std::vector<std::pair<double, double>> table;  // CSV x,value
  bool has_table = false;

  void check(std::string name, bool passed, std::string residual, bool exact) {
    checks.push_back({std::move(name), passed, std::move(residual), exact});
  }
  void report(const Report& r, bool exact = true) {
    for (const auto& c : r.checks) check(r.subject.empty() ? c.name : r.subject + ": " + c.name, c.passed, c.residual, exact);
  }
};

Json rats(const RatVec& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(to_string(x));
  return j;
}

Json poly_json(const Poly& p) { return rats(p.coeffs()); }

std::string mpf_str(const mpf_class& x, int digits) {
  if (sgn(x) == 0) return "0";
  mp_exp_t e;
  std::string s = x.get_str(e, 10, digits);
  std::string sign;
  if (s[0] == '-') {
    sign = "-";
    s.erase(0, 1);
  }
  std::string out = sign + s.substr(0, 1);
  if (s.size() > 1) out += "." + s.substr(1);
  return out + "e" + std::to_string(e - 1);
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& r : parse_rat_list(s)) {
    if (!is_integer(r)) throw std::invalid_argument("expected integers, got " + to_string(r));
    out.push_back(static_cast<int>(r.get_num().get_si()));
  }
  return out;
}

ParamSystem system_from(const Config& c) {
  ParamSystem sys(parse_rat_list(c.a), parse_rat_list(c.b));
  if (!c.setting.empty() && c.setting != setting_name(sys.setting()))
    throw std::invalid_argument("--setting " + c.setting + " does not match p=" + std::to_string(sys.p()) +
                                ", q=" + std::to_string(sys.q()) + " (" + setting_name(sys.setting()) + ")");
  return sys;
}

MultiIndex index_from(const Config& c, const ParamSystem& sys) {
  if (c.n.empty()) throw std::invalid_argument("--n is required");
  MultiIndex idx(int_list(c.n), c.m.empty() ? std::vector<int>{} : int_list(c.m));
  require_valid(sys, idx);
  return idx;
}

// "u:alpha", "vjacobi:r", "mp", "delta:p", "law:p,q"
DensityModel model_from(const std::string& s) {
  const auto colon = s.find(':');
  const std::string name = s.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (name == "u") return DensityModel::deformed_arcsin(arg.empty() ? 0.0 : parse_rat(arg).get_d());
  if (name == "mp") return DensityModel::marchenko_pastur();
  if (name == "vjacobi") return DensityModel::vjacobi(arg.empty() ? 1 : std::stoi(arg));
  if (name == "delta") return DensityModel::delta_arcsine_mixture(std::stoi(arg));
  if (name == "law") {
    auto v = int_list(arg);
    if (v.size() != 2) throw std::invalid_argument("law model needs law:p,q");
    return DensityModel::jacobi_laguerre_law(v[0], v[1]);
  }
  throw std::invalid_argument("unknown model '" + s + "' (u:alpha, vjacobi:r, mp, delta:p, law:p,q)");
}

void cmd_construct(const Config& c, Output& o) {
  auto sys = system_from(c);
  auto n = index_from(c, sys);
  auto t2 = type2_construct(sys, n);
  o.results["setting"] = setting_name(sys.setting());
  o.results["coefficients"] = poly_json(t2.poly);
  o.results["monic"] = poly_json(t2.poly.monic());
  o.report(verify_orthogonality(t2, sys, n));
  const bool laguerre = sys.setting() == Setting::Laguerre;
  if (laguerre || sys.hypotheses().closed_form_type1()) {
    auto t1 = type1_construct(sys, n, laguerre);
    Json polys = Json::array();
    for (const auto& p : t1.polys) polys.push_back(poly_json(p));
    o.results["type1"] = {{"closed_form", t1.closed_form}, {"polys", polys}};
    o.report(verify_orthogonality(t1, sys, n));
  }
}

void cmd_verify(const Config& c, Output& o) {
  std::vector<ParamSystem> systems;
  if (!c.sweep.empty()) {
    if (c.sweep != "default") throw std::invalid_argument("unknown sweep '" + c.sweep + "'");
    systems = default_sweep(c.seed);
  } else {
    systems.push_back(system_from(c));
  }
  Json rows = Json::array();
  int passed = 0, total = 0;
  for (const auto& sys : systems) {
    auto rep = verify_system(sys, c.size);
    const auto* bad = rep.first_failure();
    rows.push_back({{"system", rep.subject}, {"checks", rep.checks.size()}, {"ok", rep.ok()}});
    total += static_cast<int>(rep.checks.size());
    for (const auto& ch : rep.checks) passed += ch.passed;
    if (systems.size() == 1) o.report(rep);
    else o.check(rep.subject, bad == nullptr, bad ? bad->name + " residual " + bad->residual : "0", true);
  }
  o.results["systems"] = rows;
  o.results["max_size"] = c.size;
  o.results["checks_passed"] = passed;
  o.results["checks_total"] = total;
}

void cmd_zeros(const Config& c, Output& o) {
  auto sys = system_from(c);
  auto n = index_from(c, sys);
  auto zs = real_roots(type2_construct(sys, n), c.precision);
  if (sys.setting() == Setting::Laguerre) {
    Rat s = 1;
    for (int i = 0; i < sys.p() - sys.q(); ++i) s *= n.size();
    zs = zs.scaled(s);
  }
  Json roots = Json::array();
  for (size_t i = 0; i < zs.roots.size(); ++i) {
    roots.push_back(mpf_str(zs.roots[i], c.precision));
    o.table.emplace_back(zs.roots[i].get_d(), zs.multiplicity[i]);
  }
  o.has_table = true;
  o.results["degree"] = zs.degree;
  o.results["scale"] = to_string(zs.scale);
  o.results["roots"] = roots;
  o.results["multiplicity"] = zs.multiplicity;
  o.results["complex_present"] = zs.complex_present;
  o.results["out_of_scope"] = zs.out_of_scope;
  if (!zs.out_of_scope && sys.hypotheses().real_zero_condition) {
    o.check("all zeros real", zs.count() == zs.degree, std::to_string(zs.degree - zs.count()), true);
    o.check("zeros simple", zs.all_simple(), "", true);
    o.check("zeros positive", zs.roots.empty() || zs.roots.front() > 0, "", true);
  }
  if (!c.model.empty() && !zs.roots.empty()) {
    auto cmp = compare_distribution(zs, model_from(c.model));
    o.results["comparison"] = {{"model", model_from(c.model).str()}, {"ks", cmp.ks}, {"n", cmp.n}};
  }
}

void cmd_density(const Config& c, Output& o) {
  if (c.model.empty()) throw std::invalid_argument("density needs --model");
  auto m = model_from(c.model);
  auto iv = support(m);
  const int rows = 512;
  Json xs = Json::array(), vs = Json::array();
  for (int i = 0; i < rows; ++i) {
    const double x = iv.lo + (iv.hi - iv.lo) * (i + 0.5) / rows;
    const double v = density_eval(m, x);
    o.table.emplace_back(x, v);
    xs.push_back(x);
    vs.push_back(v);
  }
  o.has_table = true;
  o.results["model"] = m.str();
  o.results["support"] = {iv.lo, iv.hi};
  auto mom = density_moments(m, c.k);
  o.results["moments"] = mom.m;
  o.results["x"] = xs;
  o.results["value"] = vs;
}

void cmd_freeconv(const Config& c, Output& o) {
  if (!c.model.empty()) {
    // moments of the model against an explicit free product of its factors
    auto m = model_from(c.model);
    auto mom = density_moments(m, c.k);
    o.results["model"] = m.str();
    o.results["moments"] = mom.m;
    return;
  }
  auto sys = system_from(c);
  auto n = index_from(c, sys);
  auto d = verify_decomposition(sys, n);
  Json items = Json::array();
  for (const auto& it : d.items) {
    Json fs = Json::array();
    for (const auto& f : it.factors) fs.push_back(poly_json(f));
    items.push_back({{"name", it.name},
                     {"target", poly_json(it.target)},
                     {"factors", fs},
                     {"scalar", it.scalar ? Json(to_string(*it.scalar)) : Json(nullptr)},
                     {"displayed_scalar", it.displayed_scalar ? Json(to_string(*it.displayed_scalar)) : Json(nullptr)}});
  }
  o.results["decompositions"] = items;
  o.report(d.report);
}

EnsembleSpec ensemble_from(const Config& c) {
  auto ints = [](const std::string& s, size_t len) {
    return s.empty() ? std::vector<int>(len, 0) : int_list(s);
  };
  const std::string kind = c.kind.empty() ? "trunc" : c.kind;
  if (kind == "trunc") {
    auto n = int_list(c.n);
    return build_truncation_ensemble(n, ints(c.a, n.size()), ints(c.b, n.size()));
  }
  if (kind == "ginibre") {
    auto m = int_list(c.n);
    return build_mixed_ensemble({}, m, {}, {}, ints(c.c, m.size()));
  }
  if (kind == "mixed") {
    auto n = c.n.empty() ? std::vector<int>{} : int_list(c.n);
    auto m = int_list(c.m);
    return build_mixed_ensemble(n, m, ints(c.a, n.size()), ints(c.b, n.size()), ints(c.c, m.size()));
  }
  throw std::invalid_argument("unknown --kind '" + kind + "' (trunc, ginibre, mixed)");
}

void cmd_rmt(const Config& c, Output& o) {
  auto e = ensemble_from(c);
  const int samples = c.samples > 0 ? static_cast<int>(c.samples) : 10000;
  Json fs = Json::array();
  for (const auto& f : e.factors) fs.push_back(f.str());
  o.results["ensemble"] = e.str();
  o.results["factors"] = fs;
  if (c.ks) {
    if (c.model.empty()) throw std::invalid_argument("--ks needs --model");
    auto cmp = compare_spectrum(e, samples, c.seed, model_from(c.model));
    o.results["ks"] = {{"distance", cmp.ks}, {"lower_bound", cmp.ks_lower}, {"samples", cmp.samples}, {"scale", cmp.scale}};
    return;
  }
  auto pred = predicted_charpoly(e);
  auto est = mc_avg_charpoly(e, samples, c.seed);
  auto cmp = compare_charpoly(est, pred);
  o.results["predicted"] = poly_json(pred);
  o.results["mean"] = est.mean;
  o.results["stderr"] = est.stderr_;
  o.results["samples"] = est.samples;
  o.results["max_z"] = cmp.max_z;
  o.check("mean charpoly within 3 stderr", cmp.within(3), format_double(cmp.max_z), false);
}

void cmd_hp(const Config& c, Output& o) {
  HPSpec spec;
  if (c.variant == "confluent" || (c.variant.empty() && c.a.empty() && c.b.empty())) {
    spec = HPSpec::confluent(c.p < 0 ? 0 : c.p, c.q < 0 ? 1 : c.q);
  } else if (c.variant.empty() || c.variant == "generic") {
    spec = HPSpec::generic(system_from(c));
  } else {
    throw std::invalid_argument("unknown --variant '" + c.variant + "'");
  }
  const Rat z = c.z.empty() ? Rat(1) : parse_rat(c.z);
  o.results["spec"] = spec.str();
  o.results["z"] = to_string(z);
  if (c.n_max > 0) {
    const int lo = c.n.empty() ? 2 : int_list(c.n).at(0);
    auto r = quality_report(spec, lo, c.n_max, z, c.precision);
    Json rows = Json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"n", row.n},
                      {"D_n", row.D.get_str()},
                      {"log_abs_error", row.log_abs_error},
                      {"log_max_coeff", row.log_max_coeff},
                      {"log_sigma", row.log_sigma},
                      {"error_scaled", row.error_scaled},
                      {"coeff_scaled", row.coeff_scaled}});
    o.results["rows"] = rows;
    o.results["C"] = r.C;
    o.results["D"] = r.D;
    o.results["E"] = r.E;
    o.results["error_fit_residual"] = r.error_fit.max_residual;
    o.results["coeff_fit_residual"] = r.coeff_fit.max_residual;
    o.results["sigma"] = {r.sigma_a, r.sigma_b};
    o.results["tau"] = r.tau;
    o.results["dim_lower_bound"] = r.dim_lower_bound;
    o.report(r.report);
    return;
  }
  if (c.n.empty()) throw std::invalid_argument("--n is required");
  auto nv = int_list(c.n);
  HPApproximant h = spec.variant == HPSpec::Variant::Confluent
                        ? hp_confluent(spec.p, spec.q, nv.at(0))
                        : hp_generic(spec.sys, nv.size() == 1 ? MultiIndex(std::vector<int>(spec.q, nv[0])) : MultiIndex(nv));
  Json as = Json::array();
  for (const auto& p : h.Astar) as.push_back(poly_json(p));
  o.results["n"] = h.n.str();
  o.results["Astar"] = as;
  o.results["B"] = poly_json(h.B);
  o.report(h.report);
  auto err = hp_error_eval(h, z, c.precision);
  auto direct = hp_error_direct(h, z, c.precision, err);
  o.results["error"] = mpf_str(err, c.precision);
  o.results["error_direct"] = mpf_str(direct, c.precision);
  auto dc = denominator_clear(h, z);
  o.results["D_n"] = dc.D.get_str();
  if (dc.bound) o.results["D_bound"] = dc.bound->get_str();
  o.report(dc.report);
}

std::string csv(const Output& o) {
  std::string s = "x,value\n";
  for (auto [x, v] : o.table) s += format_double(x) + "," + format_double(v) + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypergeometric multiple orthogonal polynomials"};
  Config c;
  app.add_option("command", c.command, "construct | verify | zeros | density | freeconv | rmt | hp")
      ->required()
      ->check(CLI::IsMember({"construct", "verify", "zeros", "density", "freeconv", "rmt", "hp"}));
  std::vector<std::pair<std::string, CLI::Option*>> echoed;
  auto opt = [&](const char* name, auto& var, const char* help) {
    echoed.emplace_back(std::string(name).substr(2), app.add_option(name, var, help));
  };
  opt("--setting", c.setting, "jacobi | laguerre | bessel (checked against p, q)");
  opt("--a", c.a, "comma-separated rationals");
  opt("--b", c.b, "comma-separated rationals");
  opt("--c", c.c, "Ginibre shifts for rmt");
  opt("--n", c.n, "multi-index (head)");
  opt("--m", c.m, "Laguerre tail index, or Ginibre index for rmt --kind mixed");
  opt("--z", c.z, "rational evaluation point for hp");
  opt("--samples", c.samples, "Monte Carlo samples");
  opt("--seed", c.seed, "RNG seed");
  opt("--precision", c.precision, "decimal digits");
  opt("--model", c.model, "u:alpha | vjacobi:r | mp | delta:p | law:p,q");
  opt("--kind", c.kind, "rmt ensemble: trunc | ginibre | mixed");
  opt("--variant", c.variant, "hp: generic | confluent");
  opt("--p", c.p, "hp confluent p");
  opt("--q", c.q, "hp confluent q");
  opt("--k", c.k, "number of moments");
  opt("--n-max", c.n_max, "hp: quality report over n..n-max");
  opt("--size", c.size, "verify: maximal index size");
  opt("--sweep", c.sweep, "verify: named sweep (default)");
  echoed.emplace_back("ks", app.add_flag("--ks", c.ks, "rmt: KS distance of the spectrum against --model"));
  app.add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", c.out, "output path (stdout when absent)");
  CLI11_PARSE(app, argc, argv);

  Output o;
  try {
    if (c.command == "construct") cmd_construct(c, o);
    else if (c.command == "verify") cmd_verify(c, o);
    else if (c.command == "zeros") cmd_zeros(c, o);
    else if (c.command == "density") cmd_density(c, o);
    else if (c.command == "freeconv") cmd_freeconv(c, o);
    else if (c.command == "rmt") cmd_rmt(c, o);
    else if (c.command == "hp") cmd_hp(c, o);
  } catch (const std::exception& e) {
    std::cerr << "hypmop " << c.command << ": " << e.what() << "\n";
    return 2;
  }

  std::string text;
  if (c.format == "csv") {
    if (!o.has_table) {
      std::cerr << "hypmop " << c.command << ": csv output is only available for density and zeros\n";
      return 2;
    }
    text = csv(o);
  } else {
    Json doc;
    doc["command"] = c.command;
    Json inputs = Json::object();
    for (const auto& [name, op] : echoed)
      if (op->count() > 0) inputs[name] = op->as<std::string>();
    doc["inputs"] = inputs;
    doc["results"] = o.results;
    Json checks = Json::array();
    for (const auto& ch : o.checks)
      checks.push_back({{"name", ch.name}, {"status", ch.passed ? "pass" : "fail"}, {"residual", ch.residual}});
    doc["checks"] = checks;
    doc["seed"] = c.seed;
    doc["precision"] = c.precision;
    doc["version"] = kVersion;
    text = doc.dump(2) + "\n";
  }
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out);
    if (!f || !(f << text)) {
      std::cerr << "hypmop: cannot write " << c.out << "\n";
      return 2;
    }
  }
  int status = 0;
  for (const auto& ch : o.checks)
    if (ch.exact && !ch.passed) {
      std::cerr << "failed: " << ch.name << " (residual " << ch.residual << ")\n";
      status = 1;
    }
  return status;
}
