#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "meanflow/report.hpp"

namespace meanflow::cli {

// Reals are kept as decimal strings until the working precision is set.
struct RunConfig {
  std::string command;  // scan | scan-massive | table | bounds | tensors | oracle
  int N = 1;
  std::string c02 = "0";
  std::string c04 = "1";
  bool large_n = false;
  std::vector<std::string> mu_max = {"10", "100", "1000", "10000"};
  // seeds of the table-based commands (table, bounds, oracle)
  std::string f20 = "0.1";
  std::string g40 = "0.01";
  std::string beta0 = "0.01";
  int n_max = 24;
  int k_max = 24;
  int rank = 0;  // tensors: 0 = every rank up to 8
  long prec_bits = 256;
  std::string out;  // empty = stdout
  std::uint64_t seed = 1;
  std::string target;
  bool exhaustive = false;
  std::map<std::string, std::string> params;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fills a config from a JSON object; every real must be given as a string.
RunConfig config_from_json(const std::string& text, RunConfig base = {});

// Exit codes: 0 success, 1 some report failed, 2 usage or configuration error.
int run(const RunConfig& config, std::ostream& err);

// Parses argv (subcommand first) and runs. Returns the exit code.
int main_entry(int argc, char** argv);

// 1 when any report failed, else 0.
int exit_code_for(const std::vector<BoundReport>& reports);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void emit_csv(const CsvTable& table, std::ostream& os);

}  // namespace meanflow::cli
