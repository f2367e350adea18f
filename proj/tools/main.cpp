#include <omp.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "tailscale/errors.hpp"

namespace {

using namespace tailscale::cli;

void add_model_flags(CLI::App* cmd, ModelSource& src) {
  auto* m = cmd->add_option("--model", src.path, "Model JSON file");
  auto* j = cmd->add_option("--model-json", src.inline_json, "Inline model JSON");
  auto* pg = cmd->add_option("--pg", src.pg, "Poisson o Gamma as lambda,r,mu");
  auto* gp = cmd->add_option("--gp", src.gp, "Gamma o Poisson as r,mu,lambda");
  m->excludes(j)->excludes(pg)->excludes(gp);
  j->excludes(pg)->excludes(gp);
  pg->excludes(gp);
  cmd->add_option("--f", src.f, "Timescale exponent (overrides the model file)");
}

struct Output {
  std::string format = "json";
  std::string path;
  int digits = 3;
};

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_option("--format", out.format, "json | text | csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  cmd->add_option("--output", out.path, "Write the report to this file");
  cmd->add_option("--digits", out.digits, "Significant digits for text/csv")
      ->check(CLI::Range(1, 17));
}

void emit(const std::string& text, const Output& out) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw tailscale::ParamError("cannot write '" + out.path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tail asymptotics for Levy processes subordinated at two timescales"};
  app.require_subcommand(1);

  Output out;
  ApproxConfig approx_cfg;
  OracleConfig oracle_cfg;
  TablesConfig tables_cfg;
  EdgeworthConfig edge_cfg;
  OverdispersionConfig od_cfg;
  std::optional<unsigned> threads;

  auto* approx = app.add_subcommand("approx", "Asymptotic tail approximation");
  add_model_flags(approx, approx_cfg.source);
  approx->add_option("--n", approx_cfg.n, "Scale parameter n")->required();
  approx->add_option("--u", approx_cfg.u, "Threshold rate u")->required();
  approx->add_option("--mode", approx_cfg.mode, "direct | series")
      ->check(CLI::IsMember({"direct", "series"}));
  approx->add_option("--M", approx_cfg.order, "Series order: integer, default or auto");
  approx->add_option("--lattice", approx_cfg.lattice, "auto | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  add_output_flags(approx, out);

  auto* oracle = app.add_subcommand("oracle", "Exact or Monte Carlo tail probability");
  oracle->add_option("--method", oracle_cfg.method, "exact | negbin | compound | is | plain")
      ->check(CLI::IsMember({"exact", "negbin", "compound", "is", "plain"}));
  add_model_flags(oracle, oracle_cfg.source);
  oracle->add_option("--n", oracle_cfg.n, "Scale parameter n");
  oracle->add_option("--u", oracle_cfg.u, "Threshold rate u");
  oracle->add_option("--successes", oracle_cfg.successes, "NB successes k");
  oracle->add_option("--p", oracle_cfg.p, "NB success probability");
  oracle->add_option("--threshold", oracle_cfg.threshold, "Tail threshold");
  oracle->add_option("--rate", oracle_cfg.rate, "Compound Poisson rate");
  oracle->add_option("--shape", oracle_cfg.shape, "Gamma jump shape");
  oracle->add_option("--jump-rate", oracle_cfg.jump_rate, "Gamma jump rate");
  oracle->add_option("--samples", oracle_cfg.samples, "Monte Carlo sample budget");
  oracle->add_option("--seed", oracle_cfg.seed, "Monte Carlo seed");
  oracle->add_option("--threads", threads, "Worker substreams (default TAILSCALE_THREADS or 1)");
  add_output_flags(oracle, out);

  auto* tables = app.add_subcommand("tables", "Write the two overdispersion tables");
  tables->add_option("--out-dir", tables_cfg.out_dir, "Output directory");
  tables->add_option("--digits", tables_cfg.digits, "Significant digits in the CSV")
      ->check(CLI::Range(1, 17));

  auto* edge = app.add_subcommand("edgeworth", "Edgeworth expansion vs exact tilted CDF");
  add_model_flags(edge, edge_cfg.source);
  edge->add_option("--n", edge_cfg.n, "Scale parameter n")->required();
  edge->add_option("--u", edge_cfg.u, "Threshold rate u")->required();
  edge->add_option("--x-min", edge_cfg.x_min, "Grid start");
  edge->add_option("--x-max", edge_cfg.x_max, "Grid end");
  edge->add_option("--points", edge_cfg.points, "Grid size");
  add_output_flags(edge, out);

  auto* od = app.add_subcommand("overdispersion", "Resampled-Poisson arrival tail");
  od->add_option("--K", od_cfg.K, "Resampling slots")->required();
  od->add_option("--u-bar", od_cfg.u_bar, "Count threshold")->required();
  od->add_option("--mu-bar", od_cfg.mu_bar, "Exponential rate of the intensities")->required();
  od->add_option("--M-fast", od_cfg.M_fast, "Fast truncation order (default adaptive)");
  od->add_option("--M-slow", od_cfg.M_slow, "Slow truncation order (default adaptive)");
  add_output_flags(od, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "UsageError: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*approx) {
      emit(render(cmd_approx(approx_cfg), out.format, out.digits, "exponent_terms"), out);
    } else if (*oracle) {
      oracle_cfg.workers = resolve_workers(threads);
      omp_set_num_threads(static_cast<int>(oracle_cfg.workers));
      emit(render(cmd_oracle(oracle_cfg), out.format, out.digits), out);
    } else if (*tables) {
      std::cout << cmd_tables(tables_cfg).dump(2) << '\n';
    } else if (*edge) {
      emit(render(cmd_edgeworth(edge_cfg), out.format, out.digits, "grid"), out);
    } else if (*od) {
      emit(render(cmd_overdispersion(od_cfg), out.format, out.digits), out);
    }
  } catch (const tailscale::Error& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
