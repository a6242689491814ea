#pragma once

#include "seleq/config.hpp"

#include <iosfwd>
#include <string>

namespace seleq {

inline constexpr const char* kToolVersion = "seleq 0.1.0";

/// Dispatches one subcommand against a loaded configuration, writing the
/// certificate (or file outputs under out_dir) to the stream.
/// Returns 0 when the run confirms / is consistent, 1 when the instance is
/// falsified or a deviation was found.
int run_subcommand(const std::string& name, const RunConfig& cfg, const std::string& out_dir,
                   std::ostream& out);

/// Full command-line front end. Returns 0/1 as above, 2 on input errors.
int run_cli(int argc, char** argv);

} // namespace seleq
