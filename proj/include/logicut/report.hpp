#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "logicut/instance_io.hpp"
#include "logicut/master.hpp"

namespace logicut {

// FNV-1a hash of the canonical serialization; identifies the instance inside
// reports without embedding the whole document.
std::uint64_t instance_digest(const InstanceFile& file);

std::string solve_status_name(SolveStatus status);

// Machine-readable run report ("schema_version": 1). Always carries both
// bounds and the gap; infinite values are encoded as the strings "inf" /
// "-inf" because JSON numbers cannot express them. For maximization
// instances "objective" is the negated upper bound, i.e. the value in the
// instance's own sense.
nlohmann::json report_to_json(const SolveReport& report, const ParsedInstance& instance,
                              const SolverConfig& config, const std::string& mode);

// Command-line driver (subcommands: solve, generate, convert). Takes the
// argument list without the program name. Returns the process exit code:
// 0 on success (including limit hits with an incumbent), 2 when no feasible
// point is available (proven infeasibility, or a heuristic run that found
// nothing), 1 on any error.
int run_cli(const std::vector<std::string>& args);

}  // namespace logicut
