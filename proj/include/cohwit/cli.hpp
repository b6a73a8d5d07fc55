#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cohwit/io.hpp"

namespace cohwit::cli {

enum class Status { ok, detected, not_detected, certified, rejected };

const char* to_string(Status s);

/// 0 for ok/detected/certified, 1 for rejected/not_detected.
int exit_code(Status s);

inline constexpr int kInputError = 2;

using Value = std::variant<double, long long, bool, std::string>;

struct InputDigest {
  std::string name;
  std::string path;
  std::string sha256;
};

/// Result of one CLI invocation. Rendered as `key: value` lines with numbers
/// at 12 significant digits, or as a JSON document carrying full precision.
struct Report {
  std::string command;
  std::vector<InputDigest> inputs;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<std::pair<std::string, Value>> outputs;
  Status status = Status::ok;
  std::vector<std::string> warnings;

  void add_input(std::string name, const std::filesystem::path& path);
  void set(std::string key, Value v) { outputs.emplace_back(std::move(key), std::move(v)); }

  std::string text() const;
  io::json to_json() const;
};

/// %.12g
std::string format12(double x);

std::string sha256_file(const std::filesystem::path& path);

/// Runs one command line (arguments after the program name). Reports go to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cohwit::cli
