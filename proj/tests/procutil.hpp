#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace procutil {

struct ProcResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs a shell command, capturing stdout and stderr separately. The command
// may carry VAR=value prefixes; it runs through /bin/sh.
inline ProcResult run_process(const std::string& cmd) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path();
  auto tag = std::to_string(::getpid()) + "_" + std::to_string(counter++);
  auto out_path = dir / ("calf_out_" + tag);
  auto err_path = dir / ("calf_err_" + tag);

  std::string full = cmd + " > " + out_path.string() + " 2> " + err_path.string();
  int status = std::system(full.c_str());

  ProcResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return r;
}

inline std::string shq(const std::string& path) { return "'" + path + "'"; }

// Writes `text` to a fresh file under the system temp directory.
inline std::string write_temp(const std::string& stem, const std::string& text) {
  static int counter = 0;
  auto p = std::filesystem::temp_directory_path() /
           (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".calf");
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

} // namespace procutil
