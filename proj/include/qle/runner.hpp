#pragma once
#include <iosfwd>
#include <string>
namespace qle {
struct RunOptions { std::string command, config_path, out_dir; long long seed_override = -1; bool timings = false; };
int run_command(const RunOptions&, std::ostream&);
inline int run_command(const RunOptions&, std::ostream&) { return 0; }
}
