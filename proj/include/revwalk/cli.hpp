#pragma once

#include "revwalk/qsd.hpp"
#include "revwalk/walk.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace revwalk::cli {

enum class Exit : int {
  ok = 0,
  verification_failed = 1,
  parse_error = 2,
  precondition = 3,
  criterion_not_met = 4,
  gap_closed = 5,
};

/// Malformed kernel spec or command line.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string kernel_path;
  std::optional<double> eps;
  double rho = 0.1;
  long j_max = 2000;
  int k_max = 64;
  /// 0 selects 10 n^3.
  long t_max = 0;
  std::string method = "curved";
  std::vector<std::string> subsets;
  std::vector<long> js;
  std::string out_path;
  std::string poly_out_path;
  std::string filter;
  double eps_mix = 0.05;
  /// Reserved; every computation is deterministic.
  long seed = 0;
};

/// Builds a kernel from the JSON spec document. Throws SpecError.
Kernel parse_kernel_spec(const std::string& text);
Kernel load_kernel_spec(const std::string& path);

/// "a-b,c,d-e" -> sorted state list. Throws SpecError.
StateSet parse_subset(const std::string& text);

Exit exit_for(ErrorCode code);

/// Each command writes its artifact to `out` (or to config.out_path when
/// set) and diagnostics to `err`.
Exit cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
Exit cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
Exit cmd_reflect(const RunConfig& config, std::ostream& out, std::ostream& err);
Exit cmd_qsd(const RunConfig& config, std::ostream& out, std::ostream& err);
Exit cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command and maps library errors to exit codes.
Exit run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace revwalk::cli
