#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "tailscale/asymptotics.hpp"
#include "tailscale/edgeworth.hpp"
#include "tailscale/errors.hpp"
#include "tailscale/model_io.hpp"
#include "tailscale/models.hpp"
#include "tailscale/oracle.hpp"
#include "tailscale/overdispersion.hpp"

namespace tailscale::cli {

using nlohmann::json;

namespace {

std::vector<double> parse_triple(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParamError(std::string(what) + " expects three comma-separated numbers");
    }
  }
  if (out.size() != 3) throw ParamError(std::string(what) + " expects three comma-separated numbers");
  return out;
}

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw ParamError(std::string("missing ") + flag);
  return *v;
}

json oracle_json(const OracleResult& r) {
  json out{{"method", to_string(r.method)},
           {"probability", r.probability},
           {"log_probability", r.log_probability}};
  if (const auto* s = std::get_if<StatisticalError>(&r.error)) {
    out["estimate"] = r.probability;
    out["std_error"] = s->std_error;
    out["samples"] = s->samples;
    out["seed"] = s->seed;
    out["workers"] = s->workers;
  } else {
    out["error_bound"] = std::get<RigorousError>(r.error).bound;
  }
  return out;
}

EvalMode parse_mode(const std::string& mode, const std::string& order) {
  if (mode == "direct") return EvalMode::direct();
  if (mode != "series") throw ParamError("mode must be 'direct' or 'series'");
  if (order == "default") return EvalMode::series(0);
  if (order == "auto") return EvalMode::series(EvalMode::kAdaptive);
  try {
    std::size_t used = 0;
    const int M = std::stoi(order, &used);
    if (used != order.size() || M < 1) throw std::invalid_argument(order);
    return EvalMode::series(M);
  } catch (const std::exception&) {
    throw ParamError("--M must be a positive integer, 'default' or 'auto'");
  }
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, j);
  }
}

std::string scalar(const json& v, int digits) {
  if (v.is_number_float()) return format_sci(v.get<double>(), digits);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "nan";
  return v.dump();
}

}  // namespace

ResolvedModel resolve_model(const ModelSource& src) {
  const int given = !src.path.empty() + !src.inline_json.empty() + !src.pg.empty() + !src.gp.empty();
  if (given == 0) throw ParamError("a model source is required (--model, --model-json, --pg or --gp)");
  if (given > 1) throw ParamError("model sources are mutually exclusive");

  std::optional<ModelPair> model;
  std::optional<double> f;
  if (!src.path.empty() || !src.inline_json.empty()) {
    auto spec = src.path.empty() ? parse_model_json(src.inline_json) : load_model_json(src.path);
    model = spec.model;
    f = spec.f;
  } else if (!src.pg.empty()) {
    const auto v = parse_triple(src.pg, "--pg");
    model = WorkedModel::poisson_gamma(v[0], v[1], v[2]).pair();
  } else {
    const auto v = parse_triple(src.gp, "--gp");
    model = WorkedModel::gamma_poisson(v[0], v[1], v[2]).pair();
  }
  if (src.f) f = src.f;
  if (!f) throw ParamError("the scaling exponent f is required (model file or --f)");
  return {*model, PowerScaling(*f)};
}

json cmd_approx(const ApproxConfig& cfg) {
  const auto rm = resolve_model(cfg.source);
  const auto mode = parse_mode(cfg.mode, cfg.order);
  bool lattice;
  if (cfg.lattice == "auto") lattice = lattice_applicable(rm.model, rm.scaling);
  else if (cfg.lattice == "on") lattice = true;
  else if (cfg.lattice == "off") lattice = false;
  else throw ParamError("--lattice must be auto, on or off");

  const auto est = approx(rm.model, rm.scaling, cfg.n, cfg.u, mode, lattice);
  const auto info = classify(rm.scaling);
  json terms = json::array();
  for (const auto& t : est.exponent_terms) terms.push_back({{"label", t.label}, {"value", t.value}});
  json out{{"regime", to_string(est.regime)},
           {"prefactor", est.prefactor},
           {"exponent_terms", terms},
           {"log_value", est.log_value},
           {"value", est.value},
           {"mode", est.mode.describe()},
           {"lattice_adjusted", est.lattice_adjusted},
           {"leading_tilt", est.leading_tilt},
           {"sigma", est.sigma},
           {"n", cfg.n},
           {"u", cfg.u},
           {"f", rm.scaling.f()}};
  if (info.m_plus) out["m_plus"] = *info.m_plus;
  if (info.m_minus) out["m_minus"] = *info.m_minus;
  return out;
}

json cmd_oracle(const OracleConfig& cfg) {
  if (cfg.method == "negbin") {
    return oracle_json(negbin_tail(require(cfg.successes, "--successes"), require(cfg.p, "--p"),
                                   require(cfg.threshold, "--threshold")));
  }
  if (cfg.method == "compound") {
    return oracle_json(compound_poisson_gamma_tail(
        require(cfg.rate, "--rate"), require(cfg.shape, "--shape"),
        require(cfg.jump_rate, "--jump-rate"), require(cfg.threshold, "--threshold")));
  }
  if (cfg.method != "exact" && cfg.method != "is" && cfg.method != "plain")
    throw ParamError("--method must be exact, negbin, compound, is or plain");

  const auto rm = resolve_model(cfg.source);
  const double n = require(cfg.n, "--n"), u = require(cfg.u, "--u");
  if (cfg.method == "exact") {
    auto wm = WorkedModel::from_pair(rm.model);
    if (!wm) throw ParamError("exact oracle needs a Poisson/Gamma worked model");
    return oracle_json(exact_tail(*wm, rm.scaling, n, u));
  }
  if (!cfg.seed) throw ParamError("--seed is required for Monte Carlo methods");
  const McConfig mc{cfg.samples, *cfg.seed, cfg.workers};
  if (cfg.method == "is") return oracle_json(is_tail(rm.model, rm.scaling, n, u, mc));
  return oracle_json(plain_mc_tail(rm.model, rm.scaling, n, u, mc));
}

json cmd_tables(const TablesConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw ParamError("cannot create output directory '" + cfg.out_dir + "'");
  json files = json::array();
  for (const auto& table : reproduce_tables()) {
    const auto csv = fs::path(cfg.out_dir) / (table.name + ".csv");
    const auto sidecar = fs::path(cfg.out_dir) / (table.name + ".json");
    std::ofstream c(csv), j(sidecar);
    if (!c || !j) throw ParamError("cannot write into '" + cfg.out_dir + "'");
    write_csv(table, c, cfg.digits);
    j << table_json(table) << '\n';
    files.push_back({{"table", table.name}, {"csv", csv.string()}, {"json", sidecar.string()},
                     {"rows", table.rows.size()}});
  }
  return {{"files", files}};
}

json cmd_edgeworth(const EdgeworthConfig& cfg) {
  const auto rm = resolve_model(cfg.source);
  auto wm = WorkedModel::from_pair(rm.model);
  if (!wm) throw ParamError("edgeworth diagnostic needs a Poisson/Gamma worked model");
  const auto d = edgeworth_diagnostic(*wm, rm.scaling, cfg.n, cfg.u, cfg.x_min, cfg.x_max, cfg.points);
  json grid = json::array();
  for (const auto& p : d.grid)
    grid.push_back({{"x", p.x}, {"approx", p.approx}, {"exact", p.exact},
                    {"gap", std::abs(p.approx - p.exact)}});
  json out{{"regime", to_string(d.expansion.regime)},
           {"branch", to_string(d.expansion.branch)},
           {"kappa", d.expansion.kappa},
           {"c1", d.expansion.c1 ? json(*d.expansion.c1) : json(nullptr)},
           {"sup_gap", d.sup_gap},
           {"scaled_sup_gap", d.scaled_sup_gap},
           {"grid", grid}};
  return out;
}

json cmd_overdispersion(const OverdispersionConfig& cfg) {
  const ArrivalQuery q(cfg.K, cfg.u_bar, cfg.mu_bar);
  const int mf = cfg.M_fast.value_or(adaptive_fast_order(q));
  const int ms = cfg.M_slow.value_or(adaptive_slow_order(q));
  return {{"K", q.K},
          {"u_bar", q.u_bar},
          {"mu_bar", q.mu_bar},
          {"rho", q.rho()},
          {"pi_exact", oracle_json(pi_exact(q))},
          {"pi_pois", pi_pois(q)},
          {"pi_gamma", pi_gamma(q)},
          {"pi_gamma_continuous", pi_gamma(q, GammaThreshold::Continuous)},
          {"pi_hat_fast", pi_hat_fast(q)},
          {"pi_hat_slow", pi_hat_slow(q)},
          {"pi_fast", pi_fast(q, mf)},
          {"M_fast", mf},
          {"pi_slow", pi_slow(q, ms)},
          {"M_slow", ms}};
}

unsigned resolve_workers(std::optional<unsigned> flag) {
  if (flag) {
    if (*flag < 1) throw ParamError("--threads must be positive");
    return *flag;
  }
  if (const char* env = std::getenv("TAILSCALE_THREADS")) {
    try {
      std::size_t used = 0;
      const long v = std::stol(env, &used);
      if (used == std::string(env).size() && v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ParamError("TAILSCALE_THREADS must be a positive integer");
  }
  return 1;
}

std::string render(const json& report, const std::string& format, int digits,
                   const std::string& table_key) {
  if (format == "json") return report.dump(2) + "\n";
  std::ostringstream os;
  if (format == "text") {
    std::vector<std::pair<std::string, json>> flat;
    flatten(report, "", flat);
    for (const auto& [k, v] : flat) os << k << ": " << scalar(v, digits) << '\n';
    return os.str();
  }
  if (format != "csv") throw ParamError("--format must be json, text or csv");
  std::vector<json> rows;
  if (!table_key.empty() && report.contains(table_key) && report.at(table_key).is_array())
    rows.assign(report.at(table_key).begin(), report.at(table_key).end());
  else
    rows.push_back(report);
  bool header = false;
  for (const auto& row : rows) {
    std::vector<std::pair<std::string, json>> flat;
    flatten(row, "", flat);
    if (!header) {
      for (std::size_t i = 0; i < flat.size(); ++i) os << (i ? "," : "") << flat[i].first;
      os << '\n';
      header = true;
    }
    for (std::size_t i = 0; i < flat.size(); ++i) os << (i ? "," : "") << scalar(flat[i].second, digits);
    os << '\n';
  }
  return os.str();
}

}  // namespace tailscale::cli
