#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relent/config.hpp"
#include "relent/experiments.hpp"

namespace relent {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Command-line entry point: `generate`, `evaluate`, `experiment <name>`,
/// `young` and `diagnose`, each with `--config PATH --out DIR`, plus
/// `--list`. Returns 0 on success, 1 on a failed hypothesis or check and 2
/// on usage or configuration errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relent
