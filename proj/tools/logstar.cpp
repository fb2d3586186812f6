#include "logstar/cli.hpp"
#include "logstar/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace logstar;
using namespace logstar::cli;

Gauge parse_gauge(const std::string& text) {
    if (text.empty() || text == "default") return {};
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const int anchor = colon == std::string::npos ? 0 : std::stoi(text.substr(colon + 1)) - 1;
    if (kind == "fix-real-pair") return {Gauge::Kind::FixRealPair, 0};
    if (kind == "real-anchor") return {Gauge::Kind::RealAnchor, anchor};
    if (kind == "point-anchor") return {Gauge::Kind::PointAnchor, anchor};
    throw InputError("unknown gauge \"" + text + "\"");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and numerical checks of star products on linear Poisson structures"};
    app.require_subcommand(1);
    bool as_json = false;
    CommonOptions common;
    app.add_flag("--json", as_json, "Print the full JSON report");
    app.add_flag("--timings", common.timings, "Include wall-clock timings in the report");
    app.add_option("--cache-dir", common.cache_dir, "Rewriting cache directory (default $QUANT_CACHE_DIR)");

    auto* list = app.add_subcommand("list-algebras", "List built-in Lie algebras");

    std::string algebra;
    auto* check = app.add_subcommand("check-algebra", "Validate a Lie algebra (built-in name or JSON file)");
    check->add_option("algebra", algebra)->required();

    StarRequest star;
    std::string kind = "standard";
    auto* star_cmd = app.add_subcommand("star", "Star product of two polynomials");
    star_cmd->add_option("algebra", star.algebra)->required();
    star_cmd->add_option("kind", kind, "standard, logarithmic or gutt")->required();
    star_cmd->add_option("f", star.f)->required();
    star_cmd->add_option("g", star.g)->required();
    star_cmd->add_flag("--orders", star.orders, "Also print the order-k components");
    star_cmd->add_option("--cap", star.cap, "Truncation degree")->capture_default_str();

    VerifyRequest verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run an exact property suite");
    verify_cmd->add_option("algebra", verify.algebra)->required();
    verify_cmd->add_option("suite", verify.suite, "assoc, derivation, equivalence, nilpotent-collapse, pbw")
        ->required();
    verify_cmd->add_option("--cap", verify.cap)->capture_default_str();
    verify_cmd->add_option("--trials", verify.trials)->capture_default_str();
    verify_cmd->add_option("--seed", verify.seed)->capture_default_str();

    WeightsRequest weights;
    std::string propagator = "standard", gauge;
    std::vector<int> enumerate;
    double expect = 0.0;
    auto* weights_cmd = app.add_subcommand("weights", "Monte Carlo graph weights");
    weights_cmd->add_option("graph", weights.graph_file, "Graph JSON file");
    auto* enum_opt = weights_cmd->add_option("--enumerate", enumerate, "All graphs of type n m")->expected(2);
    weights_cmd->add_option("--propagator", propagator, "standard, logarithmic or four-colored")
        ->capture_default_str();
    weights_cmd->add_option("--samples", weights.samples)->capture_default_str();
    weights_cmd->add_option("--seed", weights.seed)->capture_default_str();
    auto* expect_opt = weights_cmd->add_option("--expect", expect, "Expected value; gates the exit code");
    weights_cmd->add_option("--tol", weights.tolerance)->capture_default_str();
    weights_cmd->add_option("--sigmas", weights.sigmas, "Widen the gate to this many standard errors");
    weights_cmd->add_option("--gauge", gauge, "fix-real-pair, real-anchor[:v], point-anchor[:v]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }

    try {
        RunReport report;
        if (*list) {
            report = cmd_list_algebras();
        } else if (*check) {
            report = cmd_check_algebra(algebra, common);
        } else if (*star_cmd) {
            star.kind = parse_star_product_kind(kind);
            report = cmd_star(star, common);
        } else if (*verify_cmd) {
            report = cmd_verify(verify, common);
        } else {
            weights.propagator = parse_propagator(propagator);
            weights.gauge = parse_gauge(gauge);
            if (*enum_opt) weights.enumerate = std::make_pair(enumerate[0], enumerate[1]);
            if (*expect_opt) weights.expect = expect;
            report = cmd_weights(weights, common);
        }
        if (as_json) std::cout << to_json(report).dump(2) << "\n";
        else std::cout << render_text(report);
        return report.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
