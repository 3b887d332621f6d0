// gpscat run <config.json> | accept --level fast|full | symbols list
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "gpscat/acceptance.hpp"
#include "gpscat/config.hpp"
#include "gpscat/gp_symbols.hpp"
#include "gpscat/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Gross-Pitaevskii scattering toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
    run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

    std::string level = "fast";
    bool mutate = false;
    std::vector<int> only;
    auto* accept = app.add_subcommand("accept", "Run the acceptance battery");
    accept->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    accept->add_flag("--mutate-b4", mutate, "flip the sign of B4 (the battery must then fail)");
    accept->add_option("--only", only, "criterion ids to run");

    auto* symbols = app.add_subcommand("symbols", "List the named symbols");
    symbols->add_subcommand("list", "print every accepted symbol name")->required();
    symbols->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            gps::RunManifest m = gps::run(gps::load_config(config_path));
            std::cout << m.to_json().dump(2) << "\n";
            return m.pass() ? 0 : 1;
        }
        if (*accept) {
            gps::AcceptanceOptions opt;
            opt.level = gps::acceptance_level_from_string(level);
            opt.mutate_B4 = mutate;
            opt.only = only;
            std::printf("acceptance level %s, %d worker thread(s)\n", level.c_str(), gps::worker_count());
            auto rs = gps::acceptance_suite(opt, [](const gps::CriterionResult& r) {
                std::printf("%s\n", gps::format_result(r).c_str());
                std::fflush(stdout);
            });
            return gps::all_pass(rs) ? 0 : 1;
        }
        if (*symbols) {
            std::printf("single multipliers: 1 U H laplacian bracket^<p> U^<p> abs^<s> riesz<j> d<j>\n");
            std::printf("bilinear:");
            for (const auto& n : gps::gp::bilinear_names()) std::printf(" %s", n.c_str());
            std::printf("\ntrilinear:");
            for (const auto& n : gps::gp::trilinear_names()) std::printf(" %s", n.c_str());
            std::printf("\ndivisor pieces: B1 B2 B3\n");
            return 0;
        }
    } catch (const gps::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
