// pmns: verification harness for the wavelet Navier-Stokes toolkit.
//
// Subcommands:
//   verify-basis      orthonormality, partition of unity, round trips, Parseval
//   verify-estimates  per-estimate certification table with fitted constants
//   solve             Picard runs with residual, rescaling and plot-ready CSVs

#include <filesystem>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "pmns/suites.hpp"

namespace {

using pmns::json;

// Flat key=value config file; '#' starts a comment.
std::map<std::string, std::string> load_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError(
          "--config", "line " + std::to_string(lineno) + ": expected key=value");
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return kv;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "pmns-out";
  std::uint64_t seed = 1;
  int resolution = 0;  // 0: per-command default
  int dim = 2;
};

void apply_config(const std::map<std::string, std::string>& kv, CommonArgs& args,
                  std::map<std::string, double>& numbers) {
  for (const auto& [key, value] : kv) {
    if (key == "out") args.out_dir = value;
    else if (key == "seed") args.seed = std::stoull(value);
    else if (key == "resolution") args.resolution = std::stoi(value);
    else if (key == "dimension") args.dim = std::stoi(value);
    else numbers[key] = std::stod(value);
  }
}

double number_or(const std::map<std::string, double>& numbers,
                 const std::string& key, double fallback) {
  const auto it = numbers.find(key);
  return it == numbers.end() ? fallback : it->second;
}

void write_report(const CommonArgs& args, const json& report) {
  std::filesystem::create_directories(args.out_dir);
  std::ofstream out(args.out_dir + "/report.json");
  out << report.dump(2) << '\n';
}

json config_echo(const CommonArgs& args) {
  return json{{"dimension", args.dim},
              {"resolution", args.resolution},
              {"seed", args.seed},
              {"out", args.out_dir},
              {"config_file", args.config_path}};
}

void print_checks(const pmns::SuiteReport& report) {
  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "  pass  " : "  FAIL  ") << c.name << "  value "
              << c.value << "  limit " << c.limit << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelet Navier-Stokes verification harness"};
  app.require_subcommand(1);

  CommonArgs args;
  std::map<std::string, double> numbers;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "key=value config file");
    cmd->add_option("--seed", args.seed, "ensemble seed");
    cmd->add_option("--resolution", args.resolution, "points per axis");
    cmd->add_option("--dimension", args.dim, "2 or 3");
    cmd->add_option("--out", args.out_dir, "output directory");
  };

  auto* basis = app.add_subcommand("verify-basis", "basis certification suite");
  add_common(basis);
  std::string inject;
  basis->add_option("--inject", inject,
                    "failure injection hook (bad-ramp)");

  auto* estimates =
      app.add_subcommand("verify-estimates", "estimate certification table");
  add_common(estimates);
  std::vector<std::string> estimate_ids;
  estimates->add_option("--estimate", estimate_ids,
                        "estimate id (repeatable; default: all)");
  bool no_stability = false;
  estimates->add_flag("--no-stability", no_stability,
                      "skip the resolution-doubling refits");

  auto* solve = app.add_subcommand("solve", "Picard solver run");
  add_common(solve);
  std::string preset = "single-atom";
  double scale = 1e-3;
  int lambda = 0;
  solve->add_option("--preset", preset,
                    "single-atom | random-ensemble | taylor-green");
  solve->add_option("--scale", scale, "target Besov norm of the initial data");
  solve->add_option("--lambda", lambda, "rescaling factor (2 or 4)")
      ->check(CLI::IsMember({0, 2, 4}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (!args.config_path.empty())
      apply_config(load_config(args.config_path), args, numbers);

    if (basis->parsed()) {
      pmns::BasisSuiteConfig cfg;
      cfg.dim = args.dim;
      cfg.resolution = args.resolution > 0 ? args.resolution : 256;
      cfg.seed = args.seed;
      cfg.gram_atoms = static_cast<int>(number_or(numbers, "gram_atoms", 200));
      cfg.parameter_levels =
          static_cast<int>(number_or(numbers, "parameter_levels", 5));
      if (!inject.empty()) {
        if (inject != "bad-ramp")
          throw CLI::ValidationError("--inject", "unknown hook '" + inject + "'");
        cfg.inject_bad_ramp = true;
      }
      args.resolution = cfg.resolution;
      const pmns::SuiteReport report = pmns::run_basis_suite(cfg);
      json out = report.to_json();
      out["config"] = config_echo(args);
      write_report(args, out);
      std::cout << "verify-basis: " << (report.pass ? "PASS" : "FAIL") << '\n';
      print_checks(report);
      return report.pass ? 0 : 1;
    }

    if (estimates->parsed()) {
      pmns::EstimatesSuiteConfig cfg;
      cfg.dim = args.dim;
      cfg.resolution = args.resolution > 0 ? args.resolution : 128;
      cfg.seed = args.seed;
      cfg.ensemble = static_cast<int>(number_or(numbers, "ensemble", 100));
      cfg.bilinear_pairs =
          static_cast<int>(number_or(numbers, "bilinear_pairs", 50));
      cfg.embedding_members =
          static_cast<int>(number_or(numbers, "embedding_members", 20));
      cfg.shell_lo = static_cast<int>(number_or(numbers, "shell_lo", 0));
      cfg.shell_hi = static_cast<int>(number_or(numbers, "shell_hi", 2));
      cfg.p = number_or(numbers, "p", 4.0);
      cfg.m = number_or(numbers, "m", 1.0);
      cfg.estimates = estimate_ids;
      cfg.resolution_stability = !no_stability;
      args.resolution = cfg.resolution;
      const pmns::SuiteReport report = pmns::run_estimates_suite(cfg);
      json out = report.to_json();
      out["config"] = config_echo(args);
      write_report(args, out);
      std::cout << "verify-estimates: " << (report.pass ? "PASS" : "FAIL")
                << '\n';
      for (const auto& row : report.extra["table"]) {
        if (row.contains("estimate_id")) {
          std::cout << "  " << row["estimate_id"].get<std::string>() << ": C = "
                    << row["constant"].get<double>();
          if (row.contains("rate"))
            std::cout << ", rate = " << row["rate"].get<double>();
          if (row.contains("poly_order"))
            std::cout << ", N = " << row["poly_order"].get<int>();
          if (row.contains("constant_2x"))
            std::cout << ", refit C = " << row["constant_2x"].get<double>();
          std::cout << "  (" << row["sample_count"].get<std::size_t>()
                    << " samples)\n";
        } else {
          std::cout << "  " << row["estimate"].get<std::string>()
                    << ": constants = " << row["constants"].dump() << '\n';
        }
      }
      print_checks(report);
      return report.pass ? 0 : 1;
    }

    if (solve->parsed()) {
      pmns::SolveSuiteConfig cfg;
      cfg.dim = args.dim;
      cfg.resolution = args.resolution > 0 ? args.resolution : 128;
      cfg.seed = args.seed;
      cfg.preset = preset;
      cfg.scale = scale;
      cfg.lambda = lambda;
      cfg.atom_level = static_cast<int>(number_or(numbers, "atom_level", 2));
      cfg.solver.p = number_or(numbers, "p", 4.0);
      cfg.solver.m = number_or(numbers, "m", 1.0);
      cfg.solver.shell_lo = static_cast<int>(number_or(numbers, "shell_lo", 0));
      cfg.solver.shell_hi = static_cast<int>(number_or(numbers, "shell_hi", 3));
      cfg.solver.samples_per_shell =
          static_cast<int>(number_or(numbers, "samples_per_shell", 16));
      cfg.solver.max_iterations =
          static_cast<int>(number_or(numbers, "max_iterations", 12));
      cfg.solver.increment_tol = number_or(numbers, "increment_tol", 1e-8);
      cfg.solver.smallness_threshold =
          number_or(numbers, "smallness_threshold", 0.01);
      if (lambda > 0) {
        // Leave level headroom for the exact rescaling run.
        const int safe =
            product_safe_level_max(pmns::FrequencyLattice(args.dim, cfg.resolution));
        const int top = safe - (lambda == 2 ? 1 : 2);
        cfg.solver.top_level =
            static_cast<int>(number_or(numbers, "top_level", top));
        cfg.solver.shell_hi = static_cast<int>(
            number_or(numbers, "shell_hi", std::max(top - 1, cfg.solver.shell_lo)));
        cfg.atom_level = static_cast<int>(
            number_or(numbers, "atom_level", std::max(top - 2, 0)));
      }
      cfg.mesh_doubling_check =
          number_or(numbers, "mesh_doubling_check", 1.0) != 0.0;
      cfg.smallness_check = number_or(numbers, "smallness_check", 1.0) != 0.0;
      args.resolution = cfg.resolution;
      const pmns::SolveSuiteResult result = pmns::run_solve_suite(cfg);
      json out = result.report.to_json();
      out["config"] = config_echo(args);
      out["preset"] = preset;
      write_report(args, out);
      {
        std::ofstream inc(args.out_dir + "/increments.csv");
        pmns::write_increments_csv(inc, result.state);
        std::ofstream blk(args.out_dir + "/blocks.csv");
        pmns::write_blocks_csv(blk, result.solution_norms);
        // Product-term energies at the earliest covered shell time.
        const auto& st = result.state;
        double t_rep = 0.0;
        for (double t : st.solution.times)
          if (std::ldexp(t, 2 * cfg.solver.shell_hi) >= 1.0) {
            t_rep = t;
            break;
          }
        if (t_rep > 0.0) {
          const auto it = std::find(st.solution.times.begin(),
                                    st.solution.times.end(), t_rep);
          const auto& u = st.solution
                              .states[it - st.solution.times.begin()];
          const pmns::ParaproductTerms terms = pmns::paraproduct_decompose(
              u[0], u[1], pmns::build_window(), t_rep, st.top_level);
          std::ofstream trm(args.out_dir + "/terms.csv");
          pmns::write_term_energy_csv(trm, terms);
        }
      }
      std::cout << "solve: " << (result.report.pass ? "PASS" : "FAIL") << '\n';
      print_checks(result.report);
      if (result.state.status != "converged")
        std::cout << "  status: " << result.state.status << '\n';
      return result.report.pass ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
