#include "core/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "core/error.hpp"

namespace blowup {

namespace {

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& where, const std::string& value, const char* expected) {
  throw Error(ErrorKind::InvalidConfig, where + " = '" + value + "' is not " + expected);
}

double to_double(const std::string& where, const std::string& raw) {
  const std::string v = trim(raw);
  double d = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), d);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(where, v, "a number");
  return d;
}

long to_long(const std::string& where, const std::string& raw) {
  const std::string v = trim(raw);
  long n = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), n);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(where, v, "an integer");
  return n;
}


bool to_bool(const std::string& where, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(where, v, "a boolean");
}

std::vector<double> to_list(const std::string& where, const std::string& raw) {
  std::istringstream is(raw);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    if (!tok.empty() && tok.back() == ',') tok.pop_back();
    if (!tok.empty()) out.push_back(to_double(where, tok));
  }
  return out;
}

struct Binding {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string& where, const std::string&)> set;
};

#define BIND_NUM(sec, name, member)                                                                        \
  Binding {                                                                                                \
    sec, name, [](const RunConfig& c) { return fmt(c.member); },                                           \
        [](RunConfig& c, const std::string& w, const std::string& v) { c.member = to_double(w, v); }       \
  }
#define BIND_INT(sec, name, member)                                                                        \
  Binding {                                                                                                \
    sec, name, [](const RunConfig& c) { return std::to_string(c.member); },                                \
        [](RunConfig& c, const std::string& w, const std::string& v) {                                     \
          c.member = static_cast<decltype(c.member)>(to_long(w, v));                                       \
        }                                                                                                  \
  }
#define BIND_BOOL(sec, name, member)                                                                       \
  Binding {                                                                                                \
    sec, name, [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); },                \
        [](RunConfig& c, const std::string& w, const std::string& v) { c.member = to_bool(w, v); }         \
  }
#define BIND_LIST(sec, name, member)                                                                       \
  Binding {                                                                                                \
    sec, name, [](const RunConfig& c) { return fmt_list(c.member); },                                      \
        [](RunConfig& c, const std::string& w, const std::string& v) { c.member = to_list(w, v); }         \
  }
#define BIND_STR(sec, name, member)                                                                        \
  Binding {                                                                                                \
    sec, name, [](const RunConfig& c) { return c.member; },                                                \
        [](RunConfig& c, const std::string&, const std::string& v) { c.member = trim(v); }                 \
  }

// Profile keys shared by [surface] and [data].
void profile_bindings(std::vector<Binding>& out, const std::string& sec, Profile RunConfig::*p) {
  auto add_num = [&](const char* name, double Profile::*m) {
    out.push_back({sec, name, [p, m](const RunConfig& c) { return fmt(c.*p.*m); },
                   [p, m](RunConfig& c, const std::string& w, const std::string& v) { c.*p.*m = to_double(w, v); }});
  };
  auto add_list = [&](const char* name, std::vector<double> Profile::*m) {
    out.push_back({sec, name, [p, m](const RunConfig& c) { return fmt_list(c.*p.*m); },
                   [p, m](RunConfig& c, const std::string& w, const std::string& v) { c.*p.*m = to_list(w, v); }});
  };
  out.push_back({sec, "family", [p](const RunConfig& c) { return std::string(to_string((c.*p).family)); },
                 [p](RunConfig& c, const std::string&, const std::string& v) {
                   (c.*p).family = parse_profile_family(trim(v));
                 }});
  add_num("amplitude", &Profile::amplitude);
  add_num("wavenumber", &Profile::wavenumber);
  add_num("center", &Profile::center);
  add_num("width", &Profile::width);
  add_num("period", &Profile::period);
  add_num("offset", &Profile::offset);
  add_num("slope", &Profile::slope);
  add_list("cos", &Profile::cos_coeffs);
  add_list("sin", &Profile::sin_coeffs);
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    std::vector<Binding> b;
    b.push_back(BIND_INT("grid", "dim", grid.dim));
    b.push_back(BIND_INT("grid", "points", grid.points));
    b.push_back(BIND_NUM("grid", "length", grid.length));
    b.push_back(BIND_NUM("grid", "origin", grid.origin));

    profile_bindings(b, "surface", &RunConfig::surface);
    b.push_back(BIND_NUM("surface", "lambda", lambda));

    b.push_back(BIND_NUM("data", "theta", theta));
    profile_bindings(b, "data", &RunConfig::datum);

    b.push_back(BIND_NUM("indices", "s0", s0));
    b.push_back(BIND_NUM("indices", "sigma", sigma));
    b.push_back(BIND_NUM("indices", "s", s));

    b.push_back(BIND_NUM("budget", "epsilon", epsilon));
    b.push_back(BIND_NUM("budget", "alpha", alpha));

    b.push_back(BIND_NUM("integrator", "T_start", integrator.T_start));
    b.push_back(BIND_NUM("integrator", "b", integrator.b));
    b.push_back(BIND_NUM("integrator", "cfl", integrator.cfl));
    b.push_back(BIND_NUM("integrator", "dtau_max", integrator.dtau_max));
    b.push_back(BIND_NUM("integrator", "dw_max", integrator.dw_max));
    b.push_back(BIND_INT("integrator", "shift", integrator.shift));
    b.push_back(BIND_NUM("integrator", "u_guard", integrator.u_guard));
    b.push_back(BIND_NUM("integrator", "min_dtau", integrator.min_dtau));
    b.push_back(BIND_INT("integrator", "max_steps", integrator.max_steps));
    b.push_back(BIND_INT("integrator", "energy_every", integrator.energy_every));
    b.push_back(BIND_INT("integrator", "seed_order", seed_order));
    b.push_back(BIND_INT("integrator", "dump_every", dump_every));

    b.push_back(BIND_NUM("verifier", "courant", verifier.courant));
    b.push_back(BIND_NUM("verifier", "t_max", verifier.t_max));
    b.push_back(BIND_NUM("verifier", "u_max", verifier.u_max));
    b.push_back(BIND_LIST("verifier", "ladder", verifier.ladder));
    b.push_back(BIND_NUM("verifier", "fit_tolerance", verifier.fit_tolerance));
    b.push_back(BIND_BOOL("verifier", "nonlinear", verifier.nonlinear));
    b.push_back(BIND_STR("verifier", "mode", verify.mode));
    b.push_back(BIND_NUM("verifier", "omega_a", verify.omega.a));
    b.push_back(BIND_NUM("verifier", "omega_b", verify.omega.b));
    b.push_back(BIND_INT("verifier", "trace_stride", verify.trace_stride));
    b.push_back(BIND_NUM("verifier", "K_tol", verify.K_tol));
    b.push_back(BIND_BOOL("verifier", "write_trace", write_trace));

    b.push_back(BIND_NUM("expand", "T_hi", expand.T_hi));
    b.push_back(BIND_NUM("expand", "T_lo", expand.T_lo));
    b.push_back(BIND_INT("expand", "per_decade", expand.per_decade));
    b.push_back(BIND_INT("expand", "oracle_order", expand.oracle_order));

    b.push_back(BIND_LIST("sweep", "lambdas", sweep_lambdas));
    b.push_back(BIND_LIST("sweep", "thetas", sweep_thetas));
    b.push_back(BIND_INT("sweep", "threads", threads));

    b.push_back(BIND_STR("run", "out", out));
    b.push_back(BIND_INT("run", "seed", seed));

    b.push_back(BIND_INT("check", "surfaces", check.surfaces));
    b.push_back(BIND_NUM("check", "perturb_A", check.perturb_A));
    b.push_back(BIND_NUM("check", "perturb_oracle", check.perturb_oracle));
    return b;
  }();
  return table;
}

const Binding* find_binding(const std::string& section, const std::string& key) {
  for (const Binding& b : bindings())
    if (b.section == section && b.key == key) return &b;
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  grid.validate();
  if (surface.family == ProfileFamily::Linear && surface.slope != 0.0)
    throw Error(ErrorKind::InvalidConfig, "a sloped linear surface is not periodic");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidConfig, "surface.lambda must be >= 0");
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidConfig, "data.theta must be finite");
  const double n = grid.dim;
  if (!(s0 > n / 2.0 + 1.0)) throw Error(ErrorKind::InvalidConfig, "indices.s0 must exceed n/2 + 1");
  if (!(s >= s0 + 1.0)) throw Error(ErrorKind::InvalidConfig, "indices.s must be at least s0 + 1");
  if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidConfig, "indices.sigma must be nonnegative");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidConfig, "budget.epsilon must be positive");
  if (alpha != 0.0 && !(alpha > 2.0)) throw Error(ErrorKind::InvalidConfig, "budget.alpha must be 0 (auto) or exceed 2");
  integrator.validate();
  if (seed_order < 0 || seed_order > 12) throw Error(ErrorKind::InvalidConfig, "integrator.seed_order must be in 0..12");
  if (dump_every < 0) throw Error(ErrorKind::InvalidConfig, "integrator.dump_every must be >= 0");
  if (verify.mode != "periodic" && verify.mode != "dirichlet")
    throw Error(ErrorKind::InvalidConfig, "verifier.mode must be periodic or dirichlet");
  if (!(verify.omega.a < verify.omega.b)) throw Error(ErrorKind::InvalidConfig, "verifier.omega_a must be below omega_b");
  if (verify.trace_stride < 1) throw Error(ErrorKind::InvalidConfig, "verifier.trace_stride must be >= 1");
  if (!(expand.T_lo > 0.0 && expand.T_lo < expand.T_hi && expand.T_hi <= 0.5))
    throw Error(ErrorKind::InvalidConfig, "expand needs 0 < T_lo < T_hi <= 0.5");
  if (expand.per_decade < 1) throw Error(ErrorKind::InvalidConfig, "expand.per_decade must be >= 1");
  if (expand.oracle_order < 5 || expand.oracle_order > 10)
    throw Error(ErrorKind::InvalidConfig, "expand.oracle_order must be in 5..10");
  if (sweep_lambdas.empty() || sweep_thetas.empty()) throw Error(ErrorKind::InvalidConfig, "sweep lists must be nonempty");
  for (double l : sweep_lambdas)
    if (!(l >= 0.0)) throw Error(ErrorKind::InvalidConfig, "sweep.lambdas must be >= 0");
  if (check.surfaces < 1) throw Error(ErrorKind::InvalidConfig, "check.surfaces must be >= 1");
  if (out.empty()) throw Error(ErrorKind::InvalidConfig, "run.out must be nonempty");
}

PipelineConfig RunConfig::pipeline() const {
  PipelineConfig p;
  p.grid = grid;
  p.surface = scaled_surface();
  p.bump = datum;
  p.theta = theta;
  p.epsilon = epsilon;
  p.s0 = s0;
  p.alpha = alpha;
  p.integrator = integrator;
  p.integrator.energy_s = s;
  p.seed_order = seed_order;
  return p;
}

VerifierConfig RunConfig::verifier_for(double a, double psi_min) const {
  VerifierConfig v = verifier;
  if (v.t_max == 0.0) v.t_max = a - psi_min + 0.5;
  return v;
}

RunConfig default_config() {
  RunConfig c;
  c.verifier.t_max = 0.0;
  return c;
}

void set_value(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  const Binding* b = find_binding(section, key);
  if (!b) throw Error(ErrorKind::InvalidConfig, "unknown key '" + section + "." + key + "'");
  b->set(cfg, section + "." + key, value);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw Error(ErrorKind::InvalidConfig, "override '" + assignment + "' is not section.key=value");
  set_value(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
            assignment.substr(eq + 1));
}

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config syntax: ") + e.what());
  }
  RunConfig cfg = default_config();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw Error(ErrorKind::InvalidConfig, "key '" + section + "' outside any section");
    for (const auto& [key, node] : body) set_value(cfg, section, key, node.data());
  }
  if (auto surf = tree.get_child_optional("surface"); surf && !surf->get_child_optional("family"))
    throw Error(ErrorKind::InvalidConfig, "[surface] given without a family");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_ini(const RunConfig& cfg) {
  std::ostringstream os;
  std::string current;
  for (const Binding& b : bindings()) {
    if (b.section != current) {
      if (!current.empty()) os << "\n";
      os << "[" << b.section << "]\n";
      current = b.section;
    }
    os << b.key << " = " << b.get(cfg) << "\n";
  }
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_ini(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace blowup
