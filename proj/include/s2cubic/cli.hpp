#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "s2cubic/serialize.hpp"

namespace s2cubic::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2 };

struct CommandRequest {
  /// certify, ball, minimize, maximize, scale, verify-cert, random, selftest
  std::string subcommand;
  std::optional<std::string> input_path;  // "-" reads standard input
  std::optional<std::string> inline_json;
  std::string format = "json";  // json | text
  double tol_gap = 1e-9;
  double tol_feas = 1e-9;
  int grid = 20000;
  std::uint64_t seed = 0;
  /// random: emit only cubic coefficients.
  bool homogeneous = false;
  /// One JSON request per line; each may carry its own "command".
  std::optional<std::string> batch_path;
  /// Solver iterates as JSON lines on the error stream.
  bool trace = false;
};

const std::vector<std::string>& subcommands();

/// Executes one request and writes the report. Returns an ExitCode.
int run(const CommandRequest& req, std::ostream& out, std::ostream& err);

/// Computes the JSON report of a single command on an already parsed
/// document. Throws io::ParseError / std::invalid_argument on bad input and
/// NumericalFailure when the solver fails.
io::Json execute(const std::string& command, const io::Json& doc, const CommandRequest& req, std::ostream* trace);

struct SelfCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick invariant checks backing the selftest subcommand.
std::vector<SelfCheck> selftest();

/// Parses argv with CLI11 and calls run().
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace s2cubic::cli
