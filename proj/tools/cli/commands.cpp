#include "commands.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ainf/curved.hpp"
#include "ainf/error.hpp"
#include "ainf/hochschild.hpp"
#include "ainf/isotopy.hpp"
#include "ainf/presets.hpp"
#include "ainf/rescaling.hpp"
#include "algebra_file.hpp"
#include "gauge_spec.hpp"

namespace ainf::cli {

using nlohmann::json;

namespace {

/// Exit 1 with a message, for mathematical outcomes that are not errors.
struct Outcome {
  int code = kSuccess;
  json report;
  std::string text;
};

json float_map_json(const FloatMap& f) {
  json entries = json::array();
  const auto& space = *f.space;
  for (const auto& [inputs, row] : f.table) {
    for (const auto& [j, v] : row) {
      if (v == 0.0) continue;
      json in = json::array();
      for (auto i : inputs) in.push_back(space[i].name);
      entries.push_back({{"inputs", in}, {"output", space[j].name}, {"value", v}});
    }
  }
  return {{"arity", f.arity}, {"max_abs", f.max_abs()}, {"entries", entries}};
}

Scalar parse_scalar_flag(const std::string& text, const std::string& flag) {
  try {
    return Scalar::parse(text);
  } catch (const Error& e) {
    throw DomainError(flag + ": " + e.what());
  }
}

Element parse_element_flag(const SpacePtr& space, const std::string& text, const std::string& flag) {
  try {
    return parse_element(space, text);
  } catch (const Error& e) {
    throw DomainError(flag + ": " + e.what());
  }
}

std::map<std::size_t, int> load_weights(const SpacePtr& space, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open weights file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
  if (!doc.is_object()) throw ParseError(path + ": weights file must map basis names to integers", 0, 0);
  std::map<std::size_t, int> out;
  for (const auto& [name, w] : doc.items()) {
    const auto i = space->find(name);
    if (!i) throw ParseError(path + ": unknown basis element '" + name + "'", 0, 0);
    if (!w.is_number_integer()) throw ParseError(path + ": weight of '" + name + "' must be an integer", 0, 0);
    out[*i] = w.get<int>();
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("AINF_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw DomainError(std::string("AINF_SEED must be a non-negative integer, got '") + s + "'");
    }
  }
  return 0;
}

// ---------------------------------------------------------------- check

struct CheckOptions {
  std::string file;
  std::optional<int> max_n;
  std::string convention;
};

Outcome cmd_check(const CheckOptions& o) {
  auto file = load_algebra(o.file);
  StructurePtr a = file.structure;
  if (!o.convention.empty()) {
    std::vector<MultiMap> maps;
    for (const auto& [k, m] : a->ops()) maps.push_back(m);
    a = std::make_shared<const AInftyStructure>(a->space(), convention_from_string(o.convention), a->kmax(),
                                                std::move(maps), Validation::Deferred);
  }
  const int first = first_equation_index(*a);
  const int last = o.max_n.value_or(2 * a->kmax() - 1);
  Outcome r;
  r.report = {{"command", "check"}, {"convention", to_string(a->convention())}, {"range", {first, last}}};
  std::ostringstream text;
  for (int n = first; n <= last; ++n) {
    if (auto w = first_nonzero(check_construction(*a, n))) {
      r.code = kMathFailure;
      r.report["ok"] = false;
      r.report["witness"] = {{"n", n}, {"arity", w->arity}, {"description", w->describe()}};
      text << "FAIL: construction equation " << n << " fails at " << w->describe() << "\n";
      r.text = text.str();
      return r;
    }
  }
  r.report["ok"] = true;
  r.report["witness"] = nullptr;
  text << "OK: construction equations " << first << ".." << last << " hold exactly\n";
  r.text = text.str();
  return r;
}

// ------------------------------------------------------------------- hh

struct HHOptions {
  std::string file;
  int degree = 2;
  int arity_cap = 3;
};

Outcome cmd_hh(const HHOptions& o) {
  const auto file = load_algebra(o.file);
  const auto& a = *file.structure;
  if (auto w = check_all_constructions(a)) throw AxiomError("not an A-infinity structure: " + w->describe());
  const HHReport h = hh_rank(a, o.degree, o.arity_cap);
  const bool euler = euler_certificate(a).holds;
  json unit = "n/a";
  if (file.unit) {
    try {
      unit = unit_class_certificate(a, Element::basis(a.space(), a.space()->index_of(*file.unit))).nonzero_class;
    } catch (const PreconditionError&) {
      unit = false;
    }
  }
  Outcome r;
  r.report = {{"degree", h.degree},
              {"kernel", h.kernel},
              {"image", h.image},
              {"rank_at_truncation", h.rank_at_truncation},
              {"stable_rank", h.stable_rank ? json(*h.stable_rank) : json(nullptr)},
              {"certificates", {{"euler", euler}, {"unit", unit}}}};
  std::ostringstream text;
  text << "degree " << h.degree << ", arity cap " << h.arity_cap << ": cochains " << h.cochain_dim << ", kernel "
       << h.kernel << ", image " << h.image << ", rank " << h.rank_at_truncation << "\n";
  if (h.stable_rank) text << "stable rank (arity <= " << h.stable_arity << "): " << *h.stable_rank << "\n";
  if (!h.caveat.empty()) text << "note: " << h.caveat << "\n";
  text << "euler certificate D(I-E) = m: " << (euler ? "true" : "false") << "\n";
  text << "unit class certificate: " << (unit.is_string() ? "n/a" : (unit.get<bool>() ? "true" : "false")) << "\n";
  r.text = text.str();
  return r;
}

// -------------------------------------------------------------- rescale

struct RescaleOptions {
  std::string file;
  std::string lambda = "1";
  int a = 0;
  int b = 0;
  std::string output;
};

Outcome cmd_rescale(const RescaleOptions& o) {
  auto file = load_algebra(o.file);
  const RescaleParams p{parse_scalar_flag(o.lambda, "--lambda"), o.a, o.b};
  auto rescaled = std::make_shared<const AInftyStructure>(rescale(*file.structure, p));
  const bool axioms = !check_all_constructions(*rescaled).has_value();
  const Morphism f = rescaling_morphism(file.structure, p);
  const bool morphism = !check_morphism_upto(f).has_value();
  const MultiMap f1 = rescaling_linear_part(file.structure->space(), p);
  Outcome r;
  r.code = axioms && morphism ? kSuccess : kMathFailure;
  r.report = {{"command", "rescale"}, {"lambda", p.lambda.to_string()}, {"a", p.a}, {"b", p.b},
              {"axioms", axioms},     {"morphism", morphism},          {"linear_part", f1.to_string()}};
  std::ostringstream text;
  text << "rescaled by lambda = " << p.lambda << ", a = " << p.a << ", b = " << p.b << "\n";
  text << "axioms: " << (axioms ? "hold" : "FAIL") << "\n";
  text << "rescaling morphism: " << (morphism ? "verified" : "FAIL") << "\n";
  text << "f1:\n" << f1.to_string() << "\n";
  r.text = text.str();
  if (!o.output.empty()) {
    file.structure = rescaled;
    save_algebra(file, o.output);
  }
  return r;
}

// --------------------------------------------------------------- deform

struct DeformOptions {
  std::string file;
  std::string b;
  std::string output;
};

Outcome cmd_deform(const DeformOptions& o) {
  auto file = load_algebra(o.file);
  const auto& a = *file.structure;
  const Element b = parse_element_flag(a.space(), o.b, "--b-elem");
  auto deformed = std::make_shared<const AInftyStructure>(deform(a, b));
  const bool axioms = !check_all_constructions(*deformed).has_value();
  const bool round_trip = inverse_deform_certificate(a, b).holds();
  Outcome r;
  r.code = axioms && round_trip ? kSuccess : kMathFailure;
  r.report = {{"command", "deform"},
              {"b", b.to_string()},
              {"curvature", deformed->curvature().to_string()},
              {"axioms", axioms},
              {"inverse_round_trip", round_trip}};
  std::ostringstream text;
  text << "deformed by b = " << b.to_string() << "\n";
  text << "curvature m0(1) = " << deformed->curvature().to_string() << "\n";
  text << "axioms: " << (axioms ? "hold" : "FAIL") << "\n";
  text << "inverse deformation round trip: " << (round_trip ? "exact" : "FAIL") << "\n";
  r.text = text.str();
  if (!o.output.empty()) {
    file.structure = deformed;
    save_algebra(file, o.output);
  }
  return r;
}

// ------------------------------------------------------------------- mc

struct MCOptions {
  std::string file;
  std::string target = "0";
  std::string strategy = "filtration";
  std::string weights;
  std::string seed;
};

Outcome cmd_mc(const MCOptions& o) {
  const auto file = load_algebra(o.file);
  MCProblem p;
  p.structure = file.structure;
  p.target = parse_element_flag(p.structure->space(), o.target, "--target-elem");
  p.strategy = o.strategy == "newton" ? MCStrategy::Newton : MCStrategy::Filtration;
  if (!o.weights.empty()) p.weights = load_weights(p.structure->space(), o.weights);
  if (!o.seed.empty()) p.seed = parse_element_flag(p.structure->space(), o.seed, "--b0");
  const MCResult m = solve_mc(p);
  Outcome r;
  r.code = m.solution ? kSuccess : kMathFailure;
  r.report = {{"command", "mc"},
              {"solved", m.solution.has_value()},
              {"solution", m.solution ? json(m.solution->to_string()) : json(nullptr)},
              {"provably_unsolvable", m.provably_unsolvable},
              {"residual", m.residual ? json(m.residual->to_string()) : json(nullptr)},
              {"float_residual", m.float_residual},
              {"iterations", m.iterations},
              {"note", m.note}};
  std::ostringstream text;
  if (m.solution) {
    text << "solution b = " << m.solution->to_string() << " (verified exactly)\n";
  } else {
    text << "no certificate";
    if (m.provably_unsolvable) text << ": provably unsolvable, m(e^b) - a is constant";
    text << "\n";
    if (m.residual) text << "exact residual: " << m.residual->to_string() << "\n";
    text << "float residual: " << m.float_residual << "\n";
  }
  if (!m.note.empty()) text << "note: " << m.note << "\n";
  r.text = text.str();
  return r;
}

// -------------------------------------------------------------- isotopy

struct IsotopyOptions {
  std::string file;
  std::string path = "linear";
  std::string delta_scale = "1";
  std::string lambda = "2";
  int a = 0;
  int b = 1;
  std::string gauge = "auto";
  std::string t = "1";
  int kmax = 1;
  int vmax = 20;
  std::string quad = "gauss:16";
  std::optional<std::uint64_t> seed;
};

Outcome cmd_isotopy(const IsotopyOptions& o) {
  const auto file = load_algebra(o.file);
  const StructurePtr& base = file.structure;
  Path path = [&] {
    if (o.path == "rescaling") {
      return Path::rescaling(base, {parse_scalar_flag(o.lambda, "--lambda"), o.a, o.b});
    }
    const Scalar c = parse_scalar_flag(o.delta_scale, "--delta-scale");
    std::vector<MultiMap> delta;
    for (const auto& [k, m] : base->ops()) delta.push_back(c * m);
    return Path::linear(base, delta);
  }();
  const Gauge gauge = parse_gauge(o.gauge, path);
  const Scalar t = parse_scalar_flag(o.t, "--t");
  Quadrature q = Quadrature::parse(o.quad);
  q.seed = o.seed.value_or(default_seed());

  const auto check = verify_pseudo_isotopy(path, gauge);
  Outcome r;
  r.report = {{"command", "isotopy"}, {"pseudo_isotopy", check.holds}, {"mismatch", check.mismatch}};
  std::ostringstream text;
  if (!check.holds) {
    r.code = kMathFailure;
    r.report["components"] = json::array();
    r.report["tail"] = nullptr;
    r.report["trees"] = 0;
    r.report["strict_exp"] = nullptr;
    text << "not a pseudo-isotopy: " << check.mismatch << "\n";
    r.text = text.str();
    return r;
  }
  text << "pseudo-isotopy equation holds exactly\n";
  const auto f = formal_endomorphism(path, gauge, t, o.kmax, o.vmax, q);
  json comps = json::array();
  for (const auto& c : f.components) comps.push_back(float_map_json(c));
  r.report["components"] = comps;
  r.report["tail"] = f.tail;
  r.report["trees"] = f.trees;
  text << f.trees << " trees, tail layer " << f.tail << "\n";
  for (const auto& c : f.components) {
    text << "f_" << c.arity << ":\n" << (c.max_abs() == 0.0 ? std::string("  0\n") : c.to_string());
  }
  r.report["strict_exp"] = nullptr;
  if (gauge.is_linear()) {
    try {
      const auto s = strict_exp(gauge, t);
      r.report["strict_exp"] = {{"exact", s.exact ? json(s.exact->to_string()) : json(nullptr)},
                                {"value", float_map_json(s.value)},
                                {"note", s.note}};
      text << "exp(C(t)) [" << s.note << "]:\n" << (s.exact ? s.exact->to_string() + "\n" : s.value.to_string());
    } catch (const FamilyError& e) {
      text << "exp(C(t)) unavailable: " << e.what() << "\n";
    }
  }
  r.text = text.str();
  return r;
}

// --------------------------------------------------------------- preset

struct PresetOptions {
  std::string name;
  std::string alpha = "1";
  std::string output;
};

Outcome cmd_preset(const PresetOptions& o) {
  AlgebraFile file;
  auto lower = [](std::string x) {
    for (auto& ch : x) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return x;
  };
  if (lower(o.name) == "e3") {
    file.structure = presets::e3(parse_scalar_flag(o.alpha, "--alpha"));
  } else {
    for (const auto& [name, a] : presets::all()) {
      if (lower(name) == lower(o.name)) file.structure = a;
    }
  }
  if (!file.structure) throw DomainError("unknown preset '" + o.name + "'");
  if (auto u = presets::unit_of(*file.structure)) {
    if (u->coeffs().size() == 1 && u->coeffs().begin()->second == Scalar(1)) {
      file.unit = (*file.structure->space())[u->coeffs().begin()->first].name;
    }
  }
  file.metadata = {{"preset", lower(o.name)}};
  if (lower(o.name) == "e3") file.metadata["alpha"] = parse_scalar_flag(o.alpha, "--alpha").to_string();
  Outcome r;
  if (o.output.empty()) {
    r.text = emit_algebra(file);
  } else {
    save_algebra(file, o.output);
    r.text = "wrote " + o.output + "\n";
  }
  r.report = {{"command", "preset"}, {"name", o.name}, {"output", o.output}};
  return r;
}

int error_exit(std::ostream& out, std::ostream& err, bool as_json, int code, const std::string& kind,
               const std::string& message) {
  if (as_json) {
    out << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump(2) << "\n";
  } else {
    err << "error: " << message << "\n";
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact workbench for strict and curved A-infinity algebras", "ainf"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable report on stdout");

  CheckOptions check;
  auto* c = app.add_subcommand("check", "Verify the construction equations");
  c->add_option("file", check.file, "Algebra file")->required();
  c->add_option("--max-n", check.max_n, "Last equation index (default 2*kmax-1)")->check(CLI::NonNegativeNumber);
  c->add_option("--convention-override", check.convention, "map-level or element-level")
      ->check(CLI::IsMember({"map-level", "element-level"}));

  HHOptions hh;
  auto* h = app.add_subcommand("hh", "Hochschild ranks and certificates");
  h->add_option("file", hh.file, "Algebra file")->required();
  h->add_option("--degree", hh.degree, "Total degree L");
  h->add_option("--arity-cap", hh.arity_cap, "Arity truncation N")->check(CLI::NonNegativeNumber);

  RescaleOptions rs;
  auto* s = app.add_subcommand("rescale", "Rescale m_k by lambda^(a k + b)");
  s->add_option("file", rs.file, "Algebra file")->required();
  s->add_option("--lambda", rs.lambda, "Nonzero rational p/q");
  s->add_option("--a", rs.a);
  s->add_option("--b", rs.b);
  s->add_option("-o,--output", rs.output, "Write the rescaled structure here");

  DeformOptions df;
  auto* d = app.add_subcommand("deform", "Deform by e^b");
  d->add_option("file", df.file, "Algebra file")->required();
  d->add_option("--b-elem", df.b, "Degree-1 element, e.g. \"x:1/2,y:-1\"")->required();
  d->add_option("-o,--output", df.output, "Write the deformed structure here");

  MCOptions mc;
  auto* m = app.add_subcommand("mc", "Solve the Maurer-Cartan equation m(e^b) = a");
  m->add_option("file", mc.file, "Algebra file")->required();
  m->add_option("--target-elem", mc.target, "Degree-2 target a (default 0)");
  m->add_option("--strategy", mc.strategy)->check(CLI::IsMember({"filtration", "newton"}));
  m->add_option("--weights", mc.weights, "JSON object of filtration weights per basis name");
  m->add_option("--b0", mc.seed, "Newton starting point");

  IsotopyOptions iso;
  auto* i = app.add_subcommand("isotopy", "Integrate a pseudo-isotopy over ribbon trees");
  i->add_option("file", iso.file, "Algebra file")->required();
  i->add_option("--path", iso.path)->check(CLI::IsMember({"linear", "rescaling"}));
  i->add_option("--delta-scale", iso.delta_scale, "Linear path m + t c m");
  i->add_option("--lambda", iso.lambda);
  i->add_option("--a", iso.a);
  i->add_option("--b", iso.b);
  i->add_option("--gauge", iso.gauge, "auto, or terms like recip(1,1)*lin(1,-1)");
  i->add_option("--t", iso.t, "End time");
  i->add_option("--kmax", iso.kmax)->check(CLI::NonNegativeNumber);
  i->add_option("--vmax", iso.vmax)->check(CLI::NonNegativeNumber);
  i->add_option("--quad", iso.quad, "gauss:q or mc:N");
  i->add_option("--seed", iso.seed, "Monte Carlo seed (default $AINF_SEED or 0)");

  PresetOptions pr;
  auto* p = app.add_subcommand("preset", "Write a bundled structure as an algebra file");
  p->add_option("name", pr.name, "e1, e2, e3, e4 or interval")->required();
  p->add_option("--alpha", pr.alpha, "Parameter of e3");
  p->add_option("-o,--output", pr.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    return error_exit(out, err, as_json, kUsage, "usage", e.what());
  }

  try {
    Outcome r;
    if (*c) r = cmd_check(check);
    else if (*h) r = cmd_hh(hh);
    else if (*s) r = cmd_rescale(rs);
    else if (*d) r = cmd_deform(df);
    else if (*m) r = cmd_mc(mc);
    else if (*i) r = cmd_isotopy(iso);
    else r = cmd_preset(pr);
    if (as_json) {
      out << r.report.dump(2) << "\n";
    } else {
      out << r.text;
    }
    return r.code;
  } catch (const ParseError& e) {
    return error_exit(out, err, as_json, kUsage, "parse", e.what());
  } catch (const DivergenceError& e) {
    return error_exit(out, err, as_json, kMathFailure, "divergence", std::string("divergence: ") + e.what());
  } catch (const DomainError& e) {
    return error_exit(out, err, as_json, kUsage, "usage", e.what());
  } catch (const ArityError& e) {
    return error_exit(out, err, as_json, kUsage, "usage", e.what());
  } catch (const DegreeError& e) {
    return error_exit(out, err, as_json, kUsage, "usage", e.what());
  } catch (const ConventionError& e) {
    return error_exit(out, err, as_json, kUsage, "usage", e.what());
  } catch (const Error& e) {
    return error_exit(out, err, as_json, kMathFailure, "math", e.what());
  }
}

}  // namespace ainf::cli
