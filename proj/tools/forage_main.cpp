#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forage/errors.hpp"
#include "forage/harness.hpp"

namespace {

forage::ScenarioConfig resolve(const std::string& name_or_path) {
    if (forage::is_scenario_name(name_or_path)) return forage::scenario(name_or_path);
    return forage::load_config_file(name_or_path);
}

void apply_overrides(forage::ScenarioConfig& config, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw forage::ConfigError("override '" + o + "' is not key=value");
        forage::set_config_value(config, o.substr(0, eq), o.substr(eq + 1));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy foraging swarm simulator"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int replications = 0;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    unsigned threads = 0;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its outputs");
    run_cmd->add_option("--scenario", scenario_arg, "Library scenario name or config file path")->required();
    run_cmd->add_option("--seed", seed, "Base seed")->each([&](const std::string&) { seed_given = true; });
    run_cmd->add_option("--replications", replications, "Number of seeds to run")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--override", overrides, "key=value applied after loading")->take_all();
    run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* list_cmd = app.add_subcommand("list", "List library scenarios and config keys");
    bool list_keys = false;
    list_cmd->add_flag("--keys", list_keys, "Print every config key instead");

    std::string show_arg;
    std::vector<std::string> show_overrides;
    auto* show_cmd = app.add_subcommand("show", "Print the resolved config of a scenario");
    show_cmd->add_option("scenario", show_arg, "Library scenario name or config file path")->required();
    show_cmd->add_option("--override", show_overrides, "key=value applied after loading")->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list_cmd) {
            if (list_keys) {
                for (const auto& k : forage::config_keys()) std::cout << k << '\n';
            } else {
                for (const auto& n : forage::scenario_names()) {
                    const auto c = forage::scenario(n);
                    std::cout << n << "\t" << c.strategy << "\t" << c.robot_count() << " robots\n";
                }
            }
            return 0;
        }
        if (*show_cmd) {
            auto config = resolve(show_arg);
            apply_overrides(config, show_overrides);
            forage::validate(config);
            forage::write_resolved(std::cout, config);
            return 0;
        }

        auto config = resolve(scenario_arg);
        if (seed_given) config.seed = seed;
        if (replications > 0) config.replications = replications;
        apply_overrides(config, overrides);
        forage::validate(config);

        const auto results = forage::run_replications(config, threads);
        const std::filesystem::path out{out_dir};
        double phi_sum = 0.0;
        for (const auto& r : results) {
            const auto dir = results.size() == 1 ? out : out / ("seed-" + std::to_string(r.config.seed));
            forage::write_outputs(dir, r);
            phi_sum += r.summary.swarm_phi;
            std::printf("seed %llu  phi %.4f  deaths %d  recharges %d  crossings %d\n",
                        static_cast<unsigned long long>(r.config.seed), r.summary.swarm_phi,
                        r.summary.deaths, r.summary.recharges, r.summary.crossings);
        }
        if (results.size() > 1)
            std::printf("mean phi %.4f over %zu seeds\n", phi_sum / static_cast<double>(results.size()),
                        results.size());
        return 0;
    } catch (const forage::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
