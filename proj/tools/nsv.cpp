// Command-line driver: run scenarios, list presets, fit decay rates, verify.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nsv/nsv.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;

int cmd_run(const std::string& config_path, const std::string& out_path) {
    nsv::Scenario s = nsv::parse_config(config_path);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw nsv::Error(nsv::ErrorKind::IoError, "cannot open '" + out_path + "'");
    nsv::CsvWriter writer(out);
    nsv::RunInfo info;
    try {
        nsv::run(s, [&](const nsv::DiagnosticsRecord& r) { writer.emit(r); }, &info);
    } catch (...) {
        writer.flush();
        throw;
    }
    writer.flush();
    std::cerr << s.name << ": " << info.steps << " steps of dt=" << nsv::format_double(info.dt)
              << " written to " << out_path << '\n';
    return 0;
}

int cmd_presets() {
    for (const auto& e : nsv::preset_registry())
        std::cout << e.name << "  " << e.summary << '\n';
    return 0;
}

/// Column series, or |m1 - m2| for the derived metric "m1-m2".
std::vector<std::pair<double, double>> metric_series(const nsv::CsvTable& t,
                                                     const std::string& metric) {
    if (metric == "m1-m2") {
        auto a = t.series("m1");
        auto b = t.series("m2");
        for (std::size_t i = 0; i < a.size(); ++i) a[i].second = std::abs(a[i].second - b[i].second);
        return a;
    }
    return t.series(metric);
}

int cmd_fit(const std::string& metric, const std::string& csv_path, const std::string& window) {
    auto comma = window.find(',');
    if (comma == std::string::npos)
        throw nsv::Error(nsv::ErrorKind::InvalidParameter, "--window expects a,b");
    double a = std::stod(window.substr(0, comma));
    double b = std::stod(window.substr(comma + 1));
    nsv::CsvTable t = nsv::read_csv_file(csv_path);
    auto series = metric_series(t, metric);
    auto fit = nsv::fit_decay(series, {a, b}, metric);
    std::cout << "metric " << metric << '\n'
              << "rate " << nsv::format_double(fit.rate) << '\n'
              << "r2 " << nsv::format_double(fit.r_squared) << '\n'
              << "samples " << fit.n_samples << '\n';
    return 0;
}

int cmd_verify() {
    bool all = true;
    for (const auto& r : nsv::run_verification()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << nsv::format_double(r.value)
                  << " <= " << nsv::format_double(r.tolerance) << ")\n";
        all = all && r.passed;
    }
    return all ? 0 : kExitError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Navier-Stokes-Vlasov 1D simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    auto* run = app.add_subcommand("run", "run a scenario and write its diagnostics CSV");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out_path, "output CSV path")->required();

    auto* presets = app.add_subcommand("presets", "list the built-in presets");

    std::string metric, csv_path, window;
    auto* fit = app.add_subcommand("fit", "fit an exponential decay rate to a CSV column");
    fit->add_option("--metric", metric, "column name, or m1-m2 for |m1 - m2|")->required();
    fit->add_option("--csv", csv_path, "CSV written by run")->required();
    fit->add_option("--window", window, "time window a,b")->required();

    auto* verify = app.add_subcommand("verify", "run the oracle property checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return kExitError;
    }

    try {
        if (*run) return cmd_run(config_path, out_path);
        if (*presets) return cmd_presets();
        if (*fit) return cmd_fit(metric, csv_path, window);
        if (*verify) return cmd_verify();
    } catch (const nsv::Error& e) {
        std::cerr << "error: " << nsv::to_string(e.kind()) << ": " << e.what() << '\n';
        if (e.kind() == nsv::ErrorKind::ConfigError || e.kind() == nsv::ErrorKind::UnknownKey)
            return kExitConfig;
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
