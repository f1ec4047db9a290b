#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "emitcorr/error.hpp"
#include "emitcorr/parallel.hpp"
#include "emitcorr/scenario.hpp"
#include "emitcorr/verify.hpp"

namespace {

enum Exit { ok = 0, validation = 1, numerical = 2, verify_failed = 3 };

void emit(const emitcorr::OutputTable& table, const std::string& path) {
    if (path.empty() || path == "-") {
        table.write_csv(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw emitcorr::Error(emitcorr::ErrorKind::InvalidArgument, "cannot write " + path);
    table.write_csv(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation dynamics of two dipole-coupled emitters"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, geometry_path, filter;
    bool project = false;

    auto* evolve = app.add_subcommand("evolve", "Propagate a scenario and print correlation measures as CSV");
    evolve->add_option("scenario", scenario_path, "Scenario file")->required();
    evolve->add_option("-o,--output", out_path, "Output CSV (default stdout)");
    evolve->add_flag("--project", project, "Hermitize each reported sample");

    auto* coup = app.add_subcommand("couplings", "Print V and gamma for an emitter geometry");
    coup->add_option("geometry", geometry_path, "Geometry file")->required();

    auto* scan = app.add_subcommand("scan", "Sweep one parameter and print each trajectory as CSV");
    scan->add_option("scenario", scenario_path, "Scenario file with scan.* keys")->required();
    scan->add_option("-o,--output", out_path, "Output CSV (default stdout)");
    scan->add_flag("--project", project, "Hermitize each reported sample");

    auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
    verify->add_option("--filter", filter, "Criterion id (3, c03) or name substring");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    const unsigned threads = emitcorr::default_thread_count();
    try {
        if (*evolve || *scan) {
            emitcorr::Scenario s = emitcorr::load_scenario(scenario_path);
            s.project = s.project || project;
            emit(*evolve ? emitcorr::run_scenario(s, threads) : emitcorr::run_scan(s, threads), out_path);
        } else if (*coup) {
            auto g = emitcorr::parse_geometry(emitcorr::KeyValueConfig::load(geometry_path));
            std::cout << emitcorr::format_couplings(g);
        } else if (*verify) {
            bool any = false, all = true;
            for (const auto& c : emitcorr::verify::acceptance_criteria()) any = any || emitcorr::verify::matches(c, filter);
            if (!any) {
                std::cerr << "error: no criterion matches '" << filter << "'\n";
                return validation;
            }
            for (const auto& r : emitcorr::verify::run(filter, threads, std::cout)) all = all && r.passed();
            return all ? ok : verify_failed;
        }
    } catch (const emitcorr::PropagationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return numerical;
    } catch (const emitcorr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return emitcorr::is_numerical(e.kind()) ? numerical : validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return validation;
    }
    return ok;
}
