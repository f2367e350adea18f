#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "tailscale/levy.hpp"

namespace tailscale::cli {

struct ModelSource {
  std::string path;
  std::string inline_json;
  std::string pg;  // "lambda,r,mu"
  std::string gp;  // "r,mu,lambda"
  std::optional<double> f;
};

struct ResolvedModel {
  ModelPair model;
  PowerScaling scaling;
};

ResolvedModel resolve_model(const ModelSource& src);

struct ApproxConfig {
  ModelSource source;
  double n = 0.0;
  double u = 0.0;
  std::string mode = "direct";   // direct | series
  std::string order = "default"; // default | auto | integer
  std::string lattice = "auto";  // auto | on | off
};

struct OracleConfig {
  std::string method = "exact";  // exact | negbin | compound | is | plain
  ModelSource source;
  std::optional<double> n, u;
  std::optional<double> successes, p, threshold;
  std::optional<double> rate, shape, jump_rate;
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

struct TablesConfig {
  std::string out_dir = ".";
  int digits = 3;
};

struct EdgeworthConfig {
  ModelSource source;
  double n = 0.0;
  double u = 0.0;
  double x_min = -6.0;
  double x_max = 6.0;
  int points = 25;
};

struct OverdispersionConfig {
  std::int64_t K = 0;
  double u_bar = 0.0;
  double mu_bar = 0.0;
  std::optional<int> M_fast;
  std::optional<int> M_slow;
};

nlohmann::json cmd_approx(const ApproxConfig& cfg);
nlohmann::json cmd_oracle(const OracleConfig& cfg);
nlohmann::json cmd_tables(const TablesConfig& cfg);
nlohmann::json cmd_edgeworth(const EdgeworthConfig& cfg);
nlohmann::json cmd_overdispersion(const OverdispersionConfig& cfg);

/// Worker count: explicit flag, else TAILSCALE_THREADS, else 1.
unsigned resolve_workers(std::optional<unsigned> flag);

/// Renders a report as json, text (key: value lines) or csv. For csv, the array
/// under table_key (if present) becomes the rows; otherwise scalars form one row.
std::string render(const nlohmann::json& report, const std::string& format, int digits,
                   const std::string& table_key = "");

}  // namespace tailscale::cli
