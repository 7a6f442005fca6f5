// radv command-line front end.
//
//   radv <band|phase-sweep|regime-map|simulate|mass-sim|ref-shift-check>
//        --scenario FILE [--out FILE] [--format csv|json] [--seed N] [--quiet]
//
// Exit status: 0 ok, 1 validation or parse error, 2 numerical non-convergence,
// 3 ref-shift bound violated.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "radv/radv.hpp"

namespace {

struct Options {
    std::string scenario;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("RADV_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
    }
    return p;
}

int run(const std::string& command, const Options& opt) {
    using Command = std::function<radv::ResultTable(const radv::Scenario&)>;
    static const std::map<std::string, Command> commands{
        {"band", radv::cmd_band},
        {"phase-sweep", radv::cmd_phase_sweep},
        {"regime-map", radv::cmd_regime_map},
        {"simulate", radv::cmd_simulate},
        {"mass-sim", radv::cmd_mass_sim},
        {"ref-shift-check", radv::cmd_ref_shift_check},
    };

    radv::Scenario scenario = radv::load_scenario(opt.scenario);
    if (opt.seed) scenario.seed = *opt.seed;
    const std::string format = opt.format.empty() ? scenario.output.format : opt.format;

    const radv::ResultTable table = commands.at(command)(scenario);
    const std::string text = table.render(format);

    std::optional<std::string> target;
    if (!opt.out.empty()) target = opt.out;
    else if (scenario.output.path) target = *scenario.output.path;

    if (target) {
        const auto path = resolve_output(*target);
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream file(path, std::ios::binary);
        if (!file) throw radv::ValidationError("output: path is writable (" + path.string() + ")");
        file << text;
        if (!opt.quiet) std::cerr << command << ": wrote " << table.rows().size() << " rows to " << path.string() << '\n';
    } else {
        std::cout << text;
    }

    if (command == "ref-shift-check") {
        const std::string* all = table.meta("all_hold");
        if (all && *all != "true") {
            if (!opt.quiet) std::cerr << "ref-shift-check: bound violated for at least one kappa\n";
            return 3;
        }
    }
    if (command == "mass-sim" && !opt.quiet) {
        if (const std::string* w = table.meta("warning")) std::cerr << "mass-sim: " << *w << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rational adversary models: phases, regimes and stability"};
    app.set_version_flag("--version", radv::tool_version);
    app.require_subcommand(1);

    Options opt;
    const char* names[] = {"band", "phase-sweep", "regime-map", "simulate", "mass-sim", "ref-shift-check"};
    const char* blurbs[] = {
        "fragile cooperation band of the payoff matrix",
        "phase of the transformed game across a range of w",
        "regime of the adversary's stopping problem over two parameter axes",
        "sample paths of the surplus process under a stop/continue rule",
        "mass praise/attack dynamics around a fixed point",
        "reference-shift stability check for a list of shifts",
    };
    for (std::size_t i = 0; i < std::size(names); ++i) {
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--scenario", opt.scenario, "scenario JSON file")->required();
        sub->add_option("--out", opt.out, "output file (default: stdout)");
        sub->add_option("--format", opt.format, "csv or json (default: scenario output.format)")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", opt.seed, "seed, overriding the scenario");
        sub->add_flag("--quiet", opt.quiet, "suppress diagnostics on stderr");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, opt);
    } catch (const radv::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const radv::NonConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const radv::NoFixedPointFound& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const radv::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
