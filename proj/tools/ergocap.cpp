#include "ergocap/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace ergocap;

    CLI::App app{"Finite ergodic components of upper probabilities, in exact arithmetic"};
    std::string command, file, probability_file, function_file;
    cli::Options opt;
    bool json_only = false;

    std::string commands;
    for (const auto& c : cli::command_names()) commands += (commands.empty() ? "" : ", ") + c;
    app.add_option("command", command, "one of: " + commands)->required()->check(CLI::IsMember(cli::command_names()));
    app.add_option("file", file, "system description (JSON); optional for oracle-verify");
    app.add_option("--probability", probability_file, "probability file for decompose, independence, noninvariant");
    app.add_option("--function", function_file, "function file for birkhoff, noninvariant");
    app.add_option("--seed", opt.seed, "seed for sampled sweeps and oracle-verify")->capture_default_str();
    app.add_option("--nmax", opt.nmax, "length of convergence traces")->capture_default_str();
    app.add_option("--instances", opt.instances, "random systems (or functions, with a file) for oracle-verify")->capture_default_str();
    app.add_flag("--json-only", json_only, "print only the machine-readable block");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!file.empty()) {
            opt.system = cli::load_system(file);
            opt.system_path = file;
        } else if (command != "oracle-verify") {
            throw InputError("command " + command + " needs a system file");
        }
        const std::size_t width = opt.system ? opt.system->omega_size : 0;
        if (!probability_file.empty()) {
            if (!opt.system) throw InputError("--probability needs a system file");
            opt.probability = cli::load_probability(probability_file, width);
        }
        if (!function_file.empty()) {
            if (!opt.system) throw InputError("--function needs a system file");
            opt.function = cli::load_function(function_file, width);
        }
        const auto report = cli::run_command(command, opt);
        std::cout << report.render(json_only);
        return report.exit_code;
    } catch (const InputError& e) {
        std::cerr << "ergocap: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "ergocap: " << e.what() << "\n";
        return 2;
    }
}
