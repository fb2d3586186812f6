#pragma once

#include "logstar/duflo.hpp"
#include "logstar/graphs.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace logstar::cli {

using json = nlohmann::ordered_json;

/// Exit codes of the command-line tool.
enum ExitCode : int { kPass = 0, kCheckFailure = 1, kInputError = 2 };

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
    /// Offending inputs and both sides of the violated identity; null on pass.
    json witness;
};

struct RunReport {
    std::string command;
    std::string inputs_digest;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    /// Command specific payload (results, tables).
    json data = json::object();
    /// Only filled when requested, so that reports stay reproducible.
    std::vector<std::pair<std::string, double>> timings;

    bool passed() const;
    int exit_code() const { return passed() ? kPass : kCheckFailure; }
};

json to_json(const RunReport& report);
std::string render_text(const RunReport& report);

struct CommonOptions {
    bool timings = false;
    /// Directory for the persistent rewriting cache; empty = $QUANT_CACHE_DIR.
    std::string cache_dir;
};

RunReport cmd_list_algebras();

/// Validates an algebra (built-in name or JSON file). Structural violations
/// are check failures with a witness; unreadable input throws InputError.
RunReport cmd_check_algebra(const std::string& algebra, const CommonOptions& common = {});

struct StarRequest {
    std::string algebra;
    StarProductKind kind = StarProductKind::Standard;
    std::string f;
    std::string g;
    int cap = kDefaultTruncation;
    bool orders = false;
};

RunReport cmd_star(const StarRequest& request, const CommonOptions& common = {});

struct VerifyRequest {
    std::string algebra;
    /// assoc, derivation, equivalence, nilpotent-collapse, pbw
    std::string suite;
    int cap = kDefaultTruncation;
    int trials = 20;
    std::uint64_t seed = 1;
};

std::vector<std::string> verify_suites();
RunReport cmd_verify(const VerifyRequest& request, const CommonOptions& common = {});

struct WeightsRequest {
    /// Either a graph file, or an (n, m) type to enumerate.
    std::string graph_file;
    std::optional<std::pair<int, int>> enumerate;
    Propagator propagator = Propagator::Standard;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::optional<double> expect;
    double tolerance = 0.01;
    /// Widens the gate to max(tolerance, sigmas * std_error).
    double sigmas = 0.0;
    Gauge gauge;
};

RunReport cmd_weights(const WeightsRequest& request, const CommonOptions& common = {});

/// FNV-1a 64-bit, as 16 hex digits.
std::string digest_hex(const std::string& text);

} // namespace logstar::cli
