#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "revcat/io.hpp"

namespace revcat::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRefuted = 2;

struct GlobalOptions {
  Tolerance tol;
  Limits limits;
  /// Where the main artifact (decomposition, witness, Q, dataset) is written.
  std::optional<std::filesystem::path> out;
  /// Replay: check this artifact against the inputs instead of recomputing.
  std::optional<std::filesystem::path> verify;
  /// Adds wall-clock time; the only field that breaks byte-identical reports.
  bool timing = false;
};

/// Outcome of one command; serializes deterministically.
struct RunReport {
  std::string command;
  io::Json inputs = io::Json::array();
  io::Json verdicts = io::Json::object();
  io::Json artifacts = io::Json::array();
  io::Json artifact;
  int exit_code = kExitClean;
  std::optional<double> elapsed_ms;

  io::Json to_json() const;
};

RunReport cmd_validate(const GlobalOptions& options, const std::filesystem::path& dataset);
RunReport cmd_detect(const GlobalOptions& options, const std::filesystem::path& dataset, bool weak);
/// partition: "auto", a JSON file path, or inline JSON such as [["a","b"],["c"]].
RunReport cmd_decompose(const GlobalOptions& options, const std::filesystem::path& dataset,
                        const std::string& partition, bool weak);
/// local: comma-separated ids of G; empty for the global RUM test.
RunReport cmd_rum(const GlobalOptions& options, const std::filesystem::path& dataset, const std::string& local,
                  const std::string& method);
/// enumerate: paths = {partition spec}; induce: {Q}; synthesize: {dataset, partition spec}.
RunReport cmd_population(const GlobalOptions& options, const std::string& subcommand,
                         const std::vector<std::filesystem::path>& paths);
RunReport cmd_synthesize(const GlobalOptions& options, const std::filesystem::path& model_spec);
RunReport cmd_classify(const GlobalOptions& options, const std::filesystem::path& dataset);

/// Parses argv, runs one command, prints the report to `out` and usage
/// problems to `err`. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of the file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace revcat::cli
