#include "meanflow/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "meanflow/bounds.hpp"
#include "meanflow/ext_real.hpp"
#include "meanflow/hierarchical.hpp"
#include "meanflow/massive.hpp"
#include "meanflow/massless.hpp"
#include "meanflow/report.hpp"
#include "meanflow/tensor.hpp"

namespace meanflow::cli {
namespace {

using nlohmann::json;

const std::vector<std::string> kCommands = {"scan", "scan-massive", "table", "bounds", "tensors", "oracle"};

std::string real_field(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a decimal string");
  return v.get<std::string>();
}

template <class T>
T int_field(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<T>();
}

ExtReal real(const std::string& text, const char* what) {
  try {
    return ExtReal(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError(std::string(what) + ": not a decimal number: '" + text + "'");
  }
}

std::vector<ExtReal> real_grid(const std::vector<std::string>& grid, const char* what) {
  if (grid.empty()) throw ConfigError(std::string(what) + ": empty grid");
  std::vector<ExtReal> out;
  for (const auto& s : grid) out.push_back(real(s, what));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

CsvTable report_table(const std::vector<BoundReport>& reports) {
  CsvTable t{{"target", "params", "lhs", "rhs", "margin", "pass"}, {}};
  for (const auto& r : reports)
    t.rows.push_back({r.target, r.params_text(), r.lhs.str(), r.rhs.str(), r.margin.str(), r.pass ? "1" : "0"});
  return t;
}

void check_couplings(const ExtReal& c04) {
  if (c04.sign() < 0) throw ConfigError("c04 must be >= 0");
}

UvScanOptions scan_options(const RunConfig& c) {
  if (c.n_max < 2 || c.n_max % 2 != 0) throw ConfigError("--n-max must be even and >= 2");
  UvScanOptions o;
  o.n_report = c.n_max;
  return o;
}

CsvTable run_scan(const RunConfig& c) {
  const ExtReal c02 = real(c.c02, "c02");
  const ExtReal c04 = real(c.c04, "c04");
  check_couplings(c04);
  const std::vector<ExtReal> grid = real_grid(c.mu_max, "mu_max");
  const UvScanOptions o = scan_options(c);
  CsvTable t{{"mu_max", "n", "f_n"}, {}};
  // boundary values depend on mu_max through alpha0 only when c02 != 0
  for (const auto& mu : grid) {
    if (mu.sign() <= 0) throw ConfigError("mu_max values must be > 0");
    MasslessModel m{c.N, c02, c04, mu, c.large_n};
    const BoundaryValues bv = boundary_values(m);
    const UvScanResult r = uv_scan(c.N, bv.f2_0, bv.f4_0, {mu}, o);
    for (const auto& row : r.rows) t.rows.push_back({row.mu_max.str(), std::to_string(row.n), row.value.str()});
  }
  return t;
}

CsvTable run_scan_massive(const RunConfig& c) {
  const ExtReal c02 = real(c.c02, "c02");
  const ExtReal c04 = real(c.c04, "c04");
  check_couplings(c04);
  const std::vector<ExtReal> grid = real_grid(c.mu_max, "mu_max");
  for (const auto& mu : grid)
    if (mu.sign() <= 0) throw ConfigError("mu_max values must be > 0");
  const MassiveScanResult r = massive_uv_scan_couplings(c02, c04, grid, scan_options(c));
  CsvTable t{{"mu_max", "n", "f_n"}, {}};
  for (const auto& row : r.rows) t.rows.push_back({row.mu_max_tilde.str(), std::to_string(row.n), row.value.str()});
  return t;
}

BoundaryValues seeds(const RunConfig& c) { return {real(c.f20, "f20"), real(c.g40, "g40")}; }

TaylorTable table_for(const RunConfig& c) {
  if (c.n_max < 4 || c.n_max % 2 != 0) throw ConfigError("--n-max must be even and >= 4");
  if (c.k_max < 1) throw ConfigError("--k-max must be >= 1");
  const BoundaryValues bv = seeds(c);
  return fill_taylor_table(bv.f2_0, bv.f4_0, c.N, c.n_max, c.k_max);
}

CsvTable run_table(const RunConfig& c) {
  const TaylorTable tab = table_for(c);
  CsvTable t{{"n", "k", "value"}, {}};
  for (std::size_t k = 0; k < tab.f2().size(); ++k)
    t.rows.push_back({"2", std::to_string(k), tab.f2()[k].str()});
  for (int n = 4; n <= tab.n_max(); n += 2)
    for (int k = 0; k <= tab.k_limit(n); ++k) t.rows.push_back({std::to_string(n), std::to_string(k), tab.g(n, k).str()});
  return t;
}

std::vector<ExtReal> uniform_grid(const ExtReal& lo, const ExtReal& hi, int points) {
  std::vector<ExtReal> g;
  for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * ExtReal(i) / ExtReal(points - 1));
  return g;
}

std::vector<BoundReport> run_bounds(const RunConfig& c) {
  const std::string& tg = c.target;
  if (tg.empty()) throw ConfigError("bounds: --target is required");
  if (tg == "eq54" && c.exhaustive) return eq54_exhaustive(12);
  if (tg == "eq194" && c.exhaustive) return eq194_range(12, 400);
  if (tg == "eq54" || tg == "eq194" || tg == "lemma33" || tg == "lemma34" || tg == "eq195") {
    std::map<std::string, std::string> p = c.params;
    if (tg == "eq195" && !p.count("seed")) p["seed"] = std::to_string(c.seed);
    return {check_combinatorics(tg, p)};
  }
  if (tg == "growth") {
    const TaylorTable tab = table_for(c);
    KSelection sel = select_K(tab, c.large_n ? GrowthRegime::LargeN : GrowthRegime::Massless);
    return sel.reports;
  }
  if (tg == "suite") {
    const BoundaryValues bv = seeds(c);
    BoundSuiteOptions o;
    o.N = c.N;
    o.n_max = c.n_max;
    o.k_max = c.k_max;
    return massless_bound_suite(bv.f2_0, bv.f4_0, o).reports;
  }
  if (tg == "H") {
    const HKernel kernel(real(c.beta0, "beta0"));
    return check_H_family(kernel, 8, uniform_grid(ExtReal(0), kernel.mu_max_tilde(), 50));
  }
  throw ConfigError("bounds: unknown target '" + tg + "'");
}

std::vector<BoundReport> run_tensors(const RunConfig& c) {
  std::vector<BoundReport> out;
  std::vector<int> ranks = {2, 4, 6, 8};
  if (c.rank != 0) ranks = {c.rank};
  for (int r : ranks) out.push_back(verify_contraction_identities(c.N, r));
  return out;
}

std::vector<BoundReport> run_oracle(const RunConfig& c) {
  std::vector<BoundReport> out;
  const int n = std::min(c.n_max, 12);
  out.push_back(equivalence_check(n, c.N, c.seed));
  // degree-6 potential from the flow at mu = 1; the convolution is one-dimensional, so N = 1
  const BoundaryValues bv = seeds(c);
  const PotentialPoly u = potential_from_flow(bv.f2_0, bv.f4_0, 1, ExtReal(1), 6);
  for (auto& r : convolution_order_reports(u, {ExtReal(0), ExtReal("0.1"), ExtReal("0.5")}))
    out.push_back(std::move(r));
  return out;
}

void write_output(const CsvTable& t, const std::string& path) {
  if (path.empty()) {
    emit_csv(t, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  emit_csv(t, f);
  f.flush();
  if (!f) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace

int exit_code_for(const std::vector<BoundReport>& reports) { return all_pass(reports) ? 0 : 1; }

void emit_csv(const CsvTable& table, std::ostream& os) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

RunConfig config_from_json(const std::string& text, RunConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") base.command = v.get<std::string>();
      else if (key == "N") base.N = int_field<int>(j, "N");
      else if (key == "c02") base.c02 = real_field(j, "c02");
      else if (key == "c04") base.c04 = real_field(j, "c04");
      else if (key == "large_n") base.large_n = v.get<bool>();
      else if (key == "mu_max") {
        base.mu_max.clear();
        for (const auto& x : v) {
          if (!x.is_string()) throw ConfigError("'mu_max' entries must be decimal strings");
          base.mu_max.push_back(x.get<std::string>());
        }
      } else if (key == "f20") base.f20 = real_field(j, "f20");
      else if (key == "g40") base.g40 = real_field(j, "g40");
      else if (key == "beta0") base.beta0 = real_field(j, "beta0");
      else if (key == "n_max") base.n_max = int_field<int>(j, "n_max");
      else if (key == "k_max") base.k_max = int_field<int>(j, "k_max");
      else if (key == "rank") base.rank = int_field<int>(j, "rank");
      else if (key == "prec_bits") base.prec_bits = int_field<long>(j, "prec_bits");
      else if (key == "out") base.out = v.get<std::string>();
      else if (key == "seed") base.seed = int_field<std::uint64_t>(j, "seed");
      else if (key == "target") base.target = v.get<std::string>();
      else if (key == "exhaustive") base.exhaustive = v.get<bool>();
      else if (key == "params") {
        for (const auto& [pk, pv] : v.items()) {
          if (!pv.is_string()) throw ConfigError("'params' values must be strings");
          base.params[pk] = pv.get<std::string>();
        }
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return base;
}

int run(const RunConfig& config, std::ostream& err) {
  try {
    if (std::find(kCommands.begin(), kCommands.end(), config.command) == kCommands.end())
      throw ConfigError("unknown command '" + config.command + "'");
    if (config.N < 1) throw ConfigError("N must be >= 1");
    if (config.prec_bits < 64 || config.prec_bits > 1 << 20) throw ConfigError("--prec-bits must be in [64, 2^20]");
    PrecisionScope scope(config.prec_bits);

    if (config.command == "scan") {
      write_output(run_scan(config), config.out);
      return 0;
    }
    if (config.command == "scan-massive") {
      write_output(run_scan_massive(config), config.out);
      return 0;
    }
    if (config.command == "table") {
      write_output(run_table(config), config.out);
      return 0;
    }
    std::vector<BoundReport> reports;
    if (config.command == "bounds") reports = run_bounds(config);
    else if (config.command == "tensors") reports = run_tensors(config);
    else reports = run_oracle(config);
    write_output(report_table(reports), config.out);
    return exit_code_for(reports);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {  // includes PreconditionError
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int main_entry(int argc, char** argv) {
  // A config file supplies the defaults; explicit flags override it.
  RunConfig cfg;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) != "--config") continue;
    std::ifstream f(argv[i + 1]);
    if (!f) {
      std::cerr << "error: cannot read config '" << argv[i + 1] << "'\n";
      return 2;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      cfg = config_from_json(ss.str(), cfg);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }

  CLI::App app{"mean-field flow coefficients, bounds and oracles"};
  app.require_subcommand(0, 1);
  std::string config_path;
  std::vector<std::string> param_list;
  app.add_option("--config", config_path, "JSON config; reals as decimal strings");
  app.add_option("--prec-bits", cfg.prec_bits, "working precision in bits")->capture_default_str();
  app.add_option("--n-max", cfg.n_max, "largest moment index")->capture_default_str();
  app.add_option("--k-max", cfg.k_max, "largest Taylor order")->capture_default_str();
  app.add_option("--out", cfg.out, "output CSV path (default stdout)");
  app.add_option("--seed", cfg.seed, "seed for randomized targets")->capture_default_str();
  app.add_option("--N", cfg.N, "number of field components")->capture_default_str();
  app.add_option("--c02", cfg.c02, "bare quadratic coupling")->capture_default_str();
  app.add_option("--c04", cfg.c04, "bare quartic coupling")->capture_default_str();
  app.add_option("--mu-max", cfg.mu_max, "UV grid")->delimiter(',');
  app.add_flag("--large-n", cfg.large_n, "divide the quartic coupling by N");
  app.add_option("--f20", cfg.f20, "seed f_{2,0} for table/bounds/oracle")->capture_default_str();
  app.add_option("--g40", cfg.g40, "seed g_{4,0} for table/bounds/oracle")->capture_default_str();
  app.add_option("--beta0", cfg.beta0, "massive kernel beta0")->capture_default_str();
  app.add_option("--rank", cfg.rank, "tensor rank (0 = 2,4,6,8)");
  app.add_option("--target", cfg.target, "bounds target");
  app.add_flag("--exhaustive", cfg.exhaustive, "run the exhaustive range of an identity target");
  app.add_option("--param", param_list, "k=v parameter for single bound targets");
  const std::map<std::string, std::string> about = {
      {"scan", "f_n at each mu_max of the UV grid (massless flow)"},
      {"scan-massive", "tilded f_n at each mu_max of the UV grid (massive flow)"},
      {"table", "Taylor table f_{2,k}, g_{n,k} from the f20/g40 seeds"},
      {"bounds", "bound reports for --target (suite, growth, H, or a single identity)"},
      {"tensors", "contraction identities of the pairing tensor"},
      {"oracle", "hierarchical-model equivalence and convolution order checks"}};
  for (const auto& name : kCommands) app.add_subcommand(name, about.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.command.empty()) {
    std::cerr << "error: no command given\n" << app.help();
    return 2;
  }
  for (const auto& kv : param_list) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --param expects k=v, got '" << kv << "'\n";
      return 2;
    }
    cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return run(cfg, std::cerr);
}

}  // namespace meanflow::cli
