#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cagt/io/json.hpp"
#include "cagt/verify/suites.hpp"

namespace {

using namespace cagt;
using io::json;

enum Exit : int { kOk = 0, kUsage = 1, kGate = 2, kCertificate = 3 };

struct Options {
  std::string config;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::vector<std::string> tamper;
};

struct PipelineConfig {
  std::string complex = "builtin:simplex3";
  int subdivision = 0;
  std::size_t l = 2;
  std::string backend = "exact";
  std::size_t N = 3;
  std::size_t taylor_arity = 2;
  int order = 12;
  double e = 10.0;
  json gammas = json::array();
  json gauges = json::array();
  std::vector<std::string> suites;
  int samples = 6;
  int degree_cap = 20;
  int probe_degree = 3;
};

PipelineConfig load_config(const std::string& path, bool verify_defaults) {
  PipelineConfig c;
  if (verify_defaults) c.N = 2;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  const json j = json::parse(in);
  c.complex = j.value("complex", c.complex);
  c.subdivision = j.value("subdivision", c.subdivision);
  c.l = j.value("l", c.l);
  c.backend = j.value("backend", c.backend);
  if (j.contains("truncation")) {
    const auto& t = j["truncation"];
    c.N = t.value("N", c.N);
    c.taylor_arity = t.value("taylor_arity", c.taylor_arity);
    c.order = t.value("order", c.order);
  }
  c.e = j.value("e", c.e);
  c.gammas = j.value("gammas", json::array());
  c.gauges = j.value("gauges", json::array());
  c.suites = j.value("suites", std::vector<std::string>{});
  c.samples = j.value("samples", c.samples);
  c.degree_cap = j.value("degree_cap", c.degree_cap);
  c.probe_degree = j.value("probe_degree", c.probe_degree);
  if (c.backend != "exact" && c.backend != "float64") throw StructuralError("backend must be exact or float64");
  if (c.l == 0 || c.N == 0 || c.order <= 0 || c.e <= 0.0 || c.subdivision < 0 || c.samples <= 0 || c.degree_cap <= 0)
    throw StructuralError("config: l, N, order, e, samples and degree_cap must be positive; subdivision >= 0");
  return c;
}

ComplexPtr config_complex(const PipelineConfig& c) {
  auto k = io::load_complex(c.complex);
  return c.subdivision > 0 ? barycentric_subdivide(k, c.subdivision) : k;
}

json header(const std::string& command, const PipelineConfig& c, const Options& o) {
  json j;
  j["command"] = command;
  j["complex"] = c.complex;
  j["subdivision"] = c.subdivision;
  j["l"] = c.l;
  j["backend"] = c.backend;
  j["truncation"] = {{"N", c.N}, {"taylor_arity", c.taylor_arity}, {"order", c.order}};
  j["e"] = c.e;
  j["seed"] = o.seed;
  const char* threads = std::getenv("CAGT_THREADS");
  j["threads"] = threads ? threads : "1";
  return j;
}

template <class F>
struct Pipeline {
  const PipelineConfig& cfg;
  SimplicialSetup<F> setup;
  std::vector<std::pair<std::string, PolyForm<F>>> gammas;

  Pipeline(const PipelineConfig& c, HomotopyVariant variant)
      : cfg(c), setup(make_simplicial_setup<F>(config_complex(c), c.l, c.degree_cap, variant)) {
    if (c.gammas.empty()) gammas.emplace_back("zero", PolyForm<F>(setup.ctx));
    for (const auto& g : c.gammas)
      gammas.emplace_back(g.at("name").get<std::string>(), io::form_from_json<F>(setup.ctx, g.value("terms", json::array())));
  }
  TransferSettings settings() const { return {cfg.order, cfg.N, 64}; }
  GateOptions gate_options() const { return {false, cfg.probe_degree}; }
  const PolyForm<F>& gamma(const std::string& name) const {
    for (const auto& [n, g] : gammas)
      if (n == name) return g;
    throw StructuralError("unknown gamma '" + name + "'");
  }
};

/// Runs the gate for every γ before any transfer; returns false if one is rejected.
template <class F>
bool admit_all(const Pipeline<F>& p, json& report) {
  bool ok = true;
  json adm = json::object();
  for (const auto& [name, g] : p.gammas) {
    const auto d = gamma_gate(p.setup, g, p.cfg.e, p.cfg.N, p.cfg.probe_degree);
    adm[name] = io::gamma_gate_to_json(d);
    ok = ok && d.admitted;
  }
  report["admission"] = adm;
  return ok;
}

template <class F>
int cmd_transfer(const PipelineConfig& cfg, const Options& o, json& report) {
  Pipeline<F> p(cfg, HomotopyVariant::dupont);
  report["certificate"] = io::certificate_to_json(p.setup.certificate);
  if (!p.setup.certificate.granted) return kCertificate;
  if (!admit_all(p, report)) return kGate;
  json out = json::object();
  for (const auto& [name, g] : p.gammas) {
    const auto t = transfer_structure(p.setup, g, p.settings(), p.gate_options());
    auto j = io::transfer_to_json(p.setup, t, cfg.taylor_arity);
    j["gram_min_singular_value"] = gram_min_singular_value(p.setup, t);
    out[name] = j;
  }
  report["transfers"] = out;
  (void)o;
  return kOk;
}

template <class F>
int cmd_action(const PipelineConfig& cfg, const Options& o, json& report) {
  Pipeline<F> p(cfg, HomotopyVariant::dupont);
  report["certificate"] = io::certificate_to_json(p.setup.certificate);
  if (!p.setup.certificate.granted) return kCertificate;
  // Targets of gauge arrows are admitted together with the listed γ.
  std::vector<std::pair<std::string, GaugeElement<F>>> elements;
  for (const auto& a : cfg.gauges) {
    const auto src = a.at("source").get<std::string>();
    const auto g = io::gauge_from_json<F>(p.setup.ctx, a.at("element"));
    const auto name = a.at("name").get<std::string>();
    p.gammas.emplace_back(name + "." + src, gauge_act(p.gamma(src), g));
    elements.emplace_back(name, g);
  }
  if (!admit_all(p, report)) return kGate;
  for (const auto& [name, g] : elements) require_homotopy_commutes(p.setup, g);

  auto theory = transferred_gauge_theory(p.setup, cfg.e, p.settings(), p.gate_options());
  json values = json::object();
  for (const auto& [name, g] : p.gammas) {
    const auto& t = theory.at(g);
    json v = io::action_to_json(transferred_action(p.setup, t));
    v["upstairs"] = io::action_to_json(upstairs_action(p.setup, g));
    values[name] = v;
  }
  report["actions"] = values;

  json deltas = json::array();
  bool within = true;
  for (std::size_t k = 0; k < cfg.gauges.size(); ++k) {
    const auto& a = cfg.gauges[k];
    const auto src = a.at("source").get<std::string>();
    const auto& g = elements[k].second;
    const auto arrow = GaugeArrow<F>::make(p.gamma(src), g);
    const auto rho = theory.arrow(arrow);
    const auto& from = theory.at(arrow.source);
    const auto& to = theory.at(arrow.target);
    // S̃_{γ′}(ρ̃D̃_γρ̃⁻¹) with ρ̃⁻¹1 = 1.
    const auto conj = rho(from.engine.differential(TensorElem<F>::unit()));
    const F lhs = transferred_inner_product(p.setup, to, conj, conj);
    const F base = transferred_inner_product(p.setup, from, from.engine.differential(TensorElem<F>::unit()),
                                             from.engine.differential(TensorElem<F>::unit()));
    const F diff = lhs - base;
    const double tol = 10.0 * (from.engine.tail_bound() + to.engine.tail_bound());
    const bool ok = ScalarTraits<F>::exact ? ScalarTraits<F>::is_zero(diff)
                                           : std::abs(ScalarTraits<F>::to_double(diff)) <= std::max(tol, 1e-9);
    within = within && ok;
    json d{{"arrow", elements[k].first}, {"source", src}, {"target", elements[k].first + "." + src}};
    d["conjugated_action"] = io::scalar_to_json<F>(lhs);
    d["source_action"] = io::scalar_to_json<F>(base);
    d["delta"] = io::scalar_to_json<F>(ScalarTraits<F>::exact ? diff : F(std::abs(ScalarTraits<F>::to_double(diff))));
    d["tolerance"] = ScalarTraits<F>::exact ? 0.0 : tol;
    d["within_tolerance"] = ok;
    deltas.push_back(d);
  }
  report["gauge_invariance"] = deltas;
  report["all_within_tolerance"] = within;
  (void)o;
  return within ? kOk : kCertificate;
}

int cmd_verify(const PipelineConfig& cfg, const Options& o, json& report) {
  verify::VerifyOptions v;
  v.complex = config_complex(cfg);
  v.l = cfg.l;
  v.seed = o.seed;
  v.samples = cfg.samples;
  v.degree_cap = cfg.degree_cap;
  v.max_length = cfg.N;
  v.tamper = verify::parse_tamper(o.tamper);
  v.suites = cfg.suites;
  report["tamper"] = o.tamper;
  json suites = json::array();
  std::vector<std::string> failed;
  for (const auto& r : verify::run_verify(v)) {
    json s{{"suite", r.name}, {"passed", r.passed}};
    if (!r.passed) {
      s["failing_identity"] = r.failing;
      failed.push_back(r.name + ": " + r.failing);
    }
    json res = json::object();
    for (const auto& [k, x] : r.residuals) res[k] = x;
    s["residuals"] = res;
    s["case_residuals"] = r.case_residuals;
    s["cases"] = r.cases;
    suites.push_back(s);
  }
  report["suites"] = suites;
  report["failed"] = failed;
  for (const auto& f : failed) std::cerr << "FAILED " << f << "\n";
  return failed.empty() ? kOk : kCertificate;
}

template <class Fn>
int run(const std::string& command, const Options& o, Fn&& fn) {
  json report;
  try {
    const auto cfg = load_config(o.config, command == "verify");
    report = header(command, cfg, o);
    int code = kOk;
    if (command == "verify") code = cmd_verify(cfg, o, report);
    else if (cfg.backend == "exact") code = fn(Rational{}, cfg, report);
    else code = fn(Float64{}, cfg, report);
    report["exit_code"] = code;
    io::write_json(report, o.out);
    return code;
  } catch (const ConvergenceGateError& e) {
    report["error"] = {{"kind", "gate"}, {"message", e.what()}, {"ratio", e.ratio}};
    report["exit_code"] = kGate;
  } catch (const HypothesisViolation& e) {
    report["error"] = {{"kind", "hypothesis"}, {"message", e.what()}};
    report["exit_code"] = kCertificate;
  } catch (const std::exception& e) {
    std::cerr << "cagt: " << e.what() << "\n";
    return kUsage;
  }
  std::cerr << "cagt: " << report["error"]["message"].get<std::string>() << "\n";
  try {
    io::write_json(report, o.out);
  } catch (const std::exception& e) {
    std::cerr << "cagt: " << e.what() << "\n";
    return kUsage;
  }
  return report["exit_code"].get<int>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer of curved dg gauge data from polynomial forms to simplicial cochains"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "pipeline config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "seed for randomized inputs");
    sub->add_option("--out", o.out, "report path, - for stdout");
  };
  auto* transfer = app.add_subcommand("transfer", "transfer D_gamma for each configured gamma");
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  auto* action = app.add_subcommand("action", "transferred action values and gauge-invariance deltas");
  for (auto* s : {transfer, verify, action}) add_common(s);
  verify->add_option("--debug-tamper", o.tamper, "negative control: koszul-sign, h-scale, drop-annihilation")
      ->check(CLI::IsMember({"koszul-sign", "h-scale", "drop-annihilation"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (*transfer)
    return run("transfer", o, [&o](auto tag, const PipelineConfig& c, json& r) {
      return cmd_transfer<decltype(tag)>(c, o, r);
    });
  if (*action)
    return run("action", o, [&o](auto tag, const PipelineConfig& c, json& r) {
      return cmd_action<decltype(tag)>(c, o, r);
    });
  return run("verify", o, [](auto, const PipelineConfig&, json&) { return int(kOk); });
}
