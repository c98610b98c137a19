#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "sbvp/config.hpp"

namespace sbvp::cli {

enum class Command { Solve, Modes, Lopatinskii, Expand, Sweep, Kg };
enum class Format { Json, Csv };

struct RunConfig {
  Command command = Command::Solve;
  std::string config_path;
  std::string output_dir = ".";
  Format format = Format::Json;
  std::optional<unsigned> seed;  // overrides [run] seed
  bool quiet = false;
};

// Sections and keys accepted in a config file.
const Config::Schema& schema();

const char* command_name(Command c);

// Exit status: 0 success, 1 config error, 2 numerical failure.
int run(const RunConfig& rc, std::ostream& out, std::ostream& err);

// Parses argv and calls run.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sbvp::cli
