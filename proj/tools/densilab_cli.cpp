// densilab command-line frontend. Talks to the library only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "densilab/densilab.h"

using nlohmann::json;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;

struct Config {
  double tolerance = 1e-12;
  std::uint64_t samples = 1000000;
  int j_min = 0;
  int j_max = 8;
  std::uint64_t seed = 0;
  int bound = 10;
  int l_max = 12;
  unsigned threads = 0;
  std::string format = "json";
};

struct Failure {
  dl_status status;
  std::string message;
};

void check(dl_status s) {
  if (s != DL_OK) throw Failure{s, dl_last_error()};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON text with every float rendered as %.17g.
std::string dump(const json& j);

void dump_into(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::number_float:
      out += fmt(j.get<double>());
      break;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_into(v, out);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_into(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      out += j.dump();
  }
}

std::string dump(const json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

std::string read_matrix_text(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return arg;  // inline form
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json take_json(char* s) {
  std::unique_ptr<char, decltype(&dl_string_free)> holder(s, dl_string_free);
  return json::parse(s);
}

struct MatrixHandle {
  dl_matrix* m = nullptr;
  MatrixHandle(const std::string& arg, double tol) { check(dl_matrix_parse(read_matrix_text(arg).c_str(), tol, &m)); }
  ~MatrixHandle() { dl_matrix_free(m); }
  MatrixHandle(const MatrixHandle&) = delete;
  MatrixHandle& operator=(const MatrixHandle&) = delete;
};

struct RegionHandle {
  dl_region* r = nullptr;
  RegionHandle(const json& descriptor, int dim) { check(dl_region_parse(descriptor.dump().c_str(), dim, &r)); }
  ~RegionHandle() { dl_region_free(r); }
  RegionHandle(const RegionHandle&) = delete;
  RegionHandle& operator=(const RegionHandle&) = delete;
};

void print_kv_csv(const json& j, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      print_kv_csv(*it, key);
    } else if (it->is_number_float()) {
      std::cout << key << ',' << fmt(it->get<double>()) << '\n';
    } else {
      std::string v = it->is_string() ? it->get<std::string>() : dump(*it);
      if (v.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : v) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        v = quoted + "\"";
      }
      std::cout << key << ',' << v << '\n';
    }
  }
}

void print_text(const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object()) {
      std::cout << pad << it.key() << ":\n";
      print_text(*it, indent + 2);
    } else if (it->is_number_float()) {
      std::cout << pad << it.key() << ": " << fmt(it->get<double>()) << '\n';
    } else {
      std::cout << pad << it.key() << ": " << (it->is_string() ? it->get<std::string>() : dump(*it)) << '\n';
    }
  }
}

void emit(const json& report, const Config& cfg) {
  if (cfg.format == "json") std::cout << dump(report) << '\n';
  else if (cfg.format == "csv") {
    std::cout << "key,value\n";
    print_kv_csv(report);
  } else {
    print_text(report);
  }
}

int cmd_analyze(const Config& cfg, const std::string& matrix) {
  MatrixHandle m(matrix, cfg.tolerance);
  char* out = nullptr;
  check(dl_analyze_json(m.m, cfg.tolerance, &out));
  emit(take_json(out), cfg);
  return kExitTrue;
}

int cmd_equiv(const Config& cfg, const std::string& first, const std::string& second) {
  MatrixHandle a(first, cfg.tolerance);
  MatrixHandle b(second, cfg.tolerance);
  // Surfaces NotExpansive and dimension errors before the combined report.
  dl_verdict* v = nullptr;
  check(dl_decide_equivalence(a.m, b.m, cfg.tolerance, &v));
  dl_verdict_free(v);
  char* out = nullptr;
  check(dl_mra_report_json(a.m, b.m, &out));
  const json report = take_json(out);
  emit(report, cfg);
  return report["status"] == "NotEquivalent" ? kExitFalse : kExitTrue;
}

struct DensityArgs {
  std::string matrix;
  std::string set = "ealpha";
  std::string region_json;
  double alpha = 2.0;
  double delta = 1.0;
  double kappa = 0.5;
  double radius = 1.0;
  std::string window = "cube";
  bool complement = false;
  bool exact = false;
};

int cmd_density(const Config& cfg, const DensityArgs& args) {
  MatrixHandle m(args.matrix, cfg.tolerance);
  const int dim = dl_matrix_dim(m.m);
  json descriptor;
  if (!args.region_json.empty()) {
    try {
      descriptor = json::parse(read_matrix_text(args.region_json));
    } catch (const json::exception& e) {
      throw Failure{DL_PARSE_ERROR, std::string("region descriptor: ") + e.what()};
    }
  } else if (args.set == "ealpha") {
    descriptor = {{"type", "ealpha"}, {"alpha", args.alpha}};
  } else if (args.set == "gdelta" || args.set == "fdelta") {
    descriptor = {{"type", args.set}, {"delta", args.delta}};
  } else if (args.set == "cone") {
    descriptor = {{"type", "cone"}, {"kappa", args.kappa}};
  } else if (args.set == "ball" || args.set == "cube") {
    descriptor = {{"type", args.set}, {"r", args.radius}};
  } else if (args.set == "all") {
    descriptor = {{"type", "all"}};
  } else {
    throw Failure{DL_BAD_PARAMETER, "unknown --set '" + args.set + "'"};
  }
  if (args.complement) descriptor = {{"type", "complement"}, {"of", descriptor}};

  std::vector<double> exact;
  if (args.exact) {
    const bool ealpha = descriptor.value("type", "") == "ealpha" && descriptor.value("i", 0) == 0 &&
                        descriptor.value("l", 1) == 1;
    std::vector<double> e(static_cast<std::size_t>(dim * dim));
    check(dl_matrix_entries(m.m, e.data()));
    if (!ealpha || dim != 2 || e[1] != 0.0 || e[2] != 0.0 || args.window != "cube")
      throw Failure{DL_BAD_PARAMETER, "--exact needs an ealpha set, a diagonal 2x2 matrix and a cube window"};
    for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
      double r = 0.0;
      check(dl_exact_ealpha_ratio(std::abs(e[0]), std::abs(e[3]), descriptor["alpha"].get<double>(), j, &r));
      exact.push_back(r);
    }
  }

  RegionHandle region(descriptor, dim);
  RegionHandle window(json{{"type", args.window}, {"r", args.radius}}, dim);
  const dl_sampling opts{cfg.samples, cfg.seed, cfg.threads};
  dl_series* series = nullptr;
  check(dl_density_sweep(region.r, m.m, window.r, cfg.j_min, cfg.j_max, &opts, &series));
  std::unique_ptr<dl_series, decltype(&dl_series_free)> holder(series, dl_series_free);
  char* out = nullptr;
  check(dl_series_json(series, &out));
  json report = take_json(out);
  report["region"] = descriptor;
  if (args.exact) {
    // Closed form for the complement of E_alpha.
    report["exact_complement"] = exact;
  }

  if (cfg.format == "csv") {
    std::cout << "j,ratio,stderr,samples" << (args.exact ? ",exact_complement" : "") << '\n';
    const auto& rows = report["estimates"];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::cout << rows[i]["j"].get<int>() << ',' << fmt(rows[i]["ratio"].get<double>()) << ','
                << fmt(rows[i]["stderr"].get<double>()) << ',' << rows[i]["samples"].get<std::uint64_t>();
      if (args.exact) std::cout << ',' << fmt(exact[i]);
      std::cout << '\n';
    }
    std::cout << "# classification," << report["classification"].get<std::string>() << '\n';
  } else if (cfg.format == "text") {
    for (std::size_t i = 0; i < report["estimates"].size(); ++i) {
      const auto& r = report["estimates"][i];
      std::cout << "j=" << r["j"].get<int>() << "  ratio=" << fmt(r["ratio"].get<double>())
                << "  stderr=" << fmt(r["stderr"].get<double>());
      if (args.exact) std::cout << "  exact_complement=" << fmt(exact[i]);
      std::cout << '\n';
    }
    std::cout << "classification: " << report["classification"].get<std::string>() << " ("
              << report["note"].get<std::string>() << ")\n";
  } else {
    std::cout << dump(report) << '\n';
  }
  return kExitTrue;
}

int cmd_classify(const Config& cfg, const std::string& matrix) {
  char* out = nullptr;
  check(dl_classify_json(read_matrix_text(matrix).c_str(), cfg.bound, cfg.l_max, &out));
  emit(take_json(out), cfg);
  return kExitTrue;
}

int cmd_dyadic(const Config& cfg, const std::string& matrix) {
  MatrixHandle m(matrix, cfg.tolerance);
  int dyadic = 0;
  double t = 0.0;
  check(dl_dyadic_class(m.m, &dyadic, &t));
  json report{{"dyadic", dyadic != 0}, {"t", dyadic ? json(t) : json(nullptr)}};
  emit(report, cfg);
  return dyadic ? kExitTrue : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"densilab: A-density, equivalence of expansive maps, integer dilation classification"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_config("--config", "", "TOML configuration file");

  Config cfg;
  app.add_option("--tolerance", cfg.tolerance, "relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--samples", cfg.samples, "Monte Carlo samples per j")->check(CLI::PositiveNumber);
  app.add_option("--j-min,--j_min", cfg.j_min, "first j");
  app.add_option("--j-max,--j_max", cfg.j_max, "last j");
  app.add_option("--seed", cfg.seed, "sampling seed")->envname("DENSILAB_SEED");
  app.add_option("--search-bound,--search_bound", cfg.bound, "unimodular search radius N")
      ->check(CLI::PositiveNumber);
  app.add_option("--l-max,--l_max", cfg.l_max, "largest l for M^l = nI")->check(CLI::PositiveNumber);
  app.add_option("--threads", cfg.threads, "sampling threads (0: all cores)");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));

  std::string m1, m2;
  auto* analyze = app.add_subcommand("analyze", "spectrum, expansiveness, positivity, lattice condition");
  analyze->add_option("matrix", m1, "matrix file or inline rows")->required();
  auto* equiv = app.add_subcommand("equiv", "decide whether two maps give the same dense sets");
  equiv->add_option("first", m1)->required();
  equiv->add_option("second", m2)->required();

  DensityArgs dargs;
  auto* density = app.add_subcommand("density", "density sweep over j");
  density->add_option("--matrix", dargs.matrix, "expansive symmetric map")->required();
  density->add_option("--set", dargs.set, "ealpha, gdelta, fdelta, cone, ball, cube, all");
  density->add_option("--region", dargs.region_json, "region descriptor JSON or file (overrides --set)");
  density->add_option("--alpha", dargs.alpha);
  density->add_option("--delta", dargs.delta);
  density->add_option("--kappa", dargs.kappa);
  density->add_option("--radius", dargs.radius, "window radius");
  density->add_option("--window", dargs.window)->check(CLI::IsMember({"cube", "ball"}));
  density->add_flag("--complement", dargs.complement, "sweep the complement of the set");
  density->add_flag("--exact", dargs.exact, "closed-form complement column for ealpha");

  auto* classify = app.add_subcommand("classify", "integer dilation classification");
  classify->add_option("matrix", m1)->required();
  auto* dyadic = app.add_subcommand("dyadic", "membership in the dyadic equivalence class");
  dyadic->add_option("matrix", m1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }
  if (cfg.j_max < cfg.j_min) {
    std::cerr << "error: --j-max must be >= --j-min\n";
    return kExitError;
  }

  try {
    if (*analyze) return cmd_analyze(cfg, m1);
    if (*equiv) return cmd_equiv(cfg, m1, m2);
    if (*density) return cmd_density(cfg, dargs);
    if (*classify) return cmd_classify(cfg, m1);
    if (*dyadic) return cmd_dyadic(cfg, m1);
  } catch (const Failure& f) {
    std::cerr << "error: " << dl_status_name(f.status) << ": " << f.message << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
