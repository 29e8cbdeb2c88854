// Command-line front end: `gcd <x> <y>` and `run <scenario> [overrides]`.

#include "overlap/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

constexpr int exit_usage = 1;
constexpr int exit_engine = 2;

} // namespace

int main(int argc, char** argv)
{
    using namespace overlap;

    CLI::App app{"Overlapping rule engine driver"};
    app.require_subcommand(1);

    long long gcd_x = 0;
    long long gcd_y = 0;
    auto* gcd = app.add_subcommand("gcd", "Compute a gcd with two persistent subtraction rules");
    gcd->add_option("x", gcd_x, "first positive integer")->required();
    gcd->add_option("y", gcd_y, "second positive integer")->required();

    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> policy;
    std::optional<std::uint64_t> max_instants;
    auto* run = app.add_subcommand("run", "Run a scenario file and print its trace");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--policy", policy,
                    "override the policy: allbest|randbest|alldownto:<v>|randdownto:<v>");
    run->add_option("--max-instants", max_instants, "override maxInstants");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    if (*gcd) {
        if (gcd_x < 1 || gcd_y < 1) {
            std::cerr << "gcd: arguments must be positive integers\n";
            return exit_usage;
        }
        std::cout << harness::run_gcd(static_cast<std::uint64_t>(gcd_x),
                                      static_cast<std::uint64_t>(gcd_y))
                  << "\n";
        return 0;
    }

    harness::Scenario scenario;
    try {
        scenario = harness::load_scenario(scenario_path);
        if (seed)
            scenario.seed = *seed;
        if (policy)
            scenario.policy = rules::parse_policy(*policy);
        if (max_instants)
            scenario.max_instants = *max_instants;
        harness::validate(scenario);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        auto result = harness::run_scenario(scenario);
        harness::write_trace(std::cout, result);
    } catch (const std::exception& e) {
        std::cout.flush();
        std::cerr << "engine error: " << e.what() << "\n";
        return exit_engine;
    }
    return 0;
}
