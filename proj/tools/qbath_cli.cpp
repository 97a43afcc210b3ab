// qbath: command-line front end for the qubit/reactive-bath experiments

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qbath/runner.hpp"

namespace {

using namespace qbath;

struct Common {
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c, bool config_required = true) {
    auto* opt = sub->add_option("--config", c.config_path, "run configuration (INI)");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "output directory (overrides output.directory)");
    sub->add_option("--seed", c.seed, "bath seed (overrides bath.seed)");
}

std::string load_config_text(const Common& c) {
    std::string text = io::read_text(c.config_path);
    if (!c.seed) return text;
    const auto cfg = config::parse_config(text);
    if (cfg.bath && (cfg.bath->kind == BathKind::UniformTLS || cfg.bath->kind == BathKind::DegenerateTLS)) {
        return config::override_key(text, "bath.seed", std::to_string(*c.seed));
    }
    std::cerr << "note: --seed ignored, bath is not random\n";
    return text;
}

int finish(const runner::RunOutcome& r) {
    if (r.exit_code != runner::kSuccess) std::cerr << "error: " << r.message << '\n';
    else std::cout << "wrote " << r.directory.string() << '\n';
    return r.exit_code;
}

template <typename F>
int with_config(const Common& c, F&& pipeline) {
    config::RunConfig cfg;
    try {
        cfg = config::parse_config(load_config_text(c));
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const io::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return runner::kIoError;
    }
    const std::filesystem::path dir = c.out.empty() ? std::filesystem::path(cfg.output.directory) : std::filesystem::path(c.out);
    return finish(pipeline(cfg, dir));
}

int report(const std::string& series_path, const Common& c) {
    try {
        const auto series = io::parse_series_csv(io::read_text(series_path));
        config::AnalysisSection analysis;
        std::optional<runner::Predictions> pred;
        if (!c.config_path.empty()) {
            const auto cfg = config::parse_config(load_config_text(c));
            analysis = cfg.analysis;
            if (cfg.bath) pred = runner::predict(cfg, runner::build_bath(cfg));
        }
        const std::string text = runner::key_values_text(runner::make_report(pred, runner::analyze(series, analysis)));
        std::cout << text;
        if (!c.out.empty()) {
            std::filesystem::create_directories(c.out);
            io::write_text(std::filesystem::path(c.out) / "report.txt", text);
        }
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return runner::kIoError;
    }
    return runner::kSuccess;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qubit coupled to reactive baths"};
    app.require_subcommand(1);

    Common c;
    auto* imp = app.add_subcommand("impedance", "input impedance sweep of the junction ladder");
    auto* dis = app.add_subcommand("dispersion", "dispersion table and located resonances");
    auto* evo = app.add_subcommand("evolve", "single-excitation dynamics with analysis report");
    auto* swp = app.add_subcommand("sweep", "evolve over a list of values of one key");
    auto* rep = app.add_subcommand("report", "re-run the analytics on an existing series CSV");
    for (auto* s : {imp, dis, evo, swp}) add_common(s, c);
    add_common(rep, c, false);

    std::string param;
    std::vector<std::string> values;
    std::size_t jobs = 1;
    swp->add_option("--param", param, "section.key to vary")->required();
    swp->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    swp->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

    std::string series_path;
    rep->add_option("--series", series_path, "series CSV")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (*imp) return with_config(c, runner::run_impedance);
    if (*dis) return with_config(c, runner::run_dispersion);
    if (*evo) return with_config(c, runner::run_evolve);
    if (*rep) return report(series_path, c);

    try {
        const std::string text = load_config_text(c);
        const auto cfg = config::parse_config(text);
        const std::filesystem::path dir = c.out.empty() ? std::filesystem::path(cfg.output.directory) : std::filesystem::path(c.out);
        const int status = runner::sweep(text, param, values, jobs, dir);
        std::cout << "wrote " << (dir / "summary.csv").string() << '\n';
        return status;
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return runner::kIoError;
    }
}
