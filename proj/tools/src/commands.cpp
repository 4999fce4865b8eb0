#include "bcinv/cli/commands.hpp"

#include "bcinv/characterization.hpp"
#include "bcinv/error.hpp"

#include <ostream>

namespace bcinv::cli {

namespace {

std::string output_or(const RunConfig& config, const char* fallback) {
    return config.out.empty() ? fallback : config.out;
}

ResponseFunction load_response(const RunConfig& config) {
    if (config.response_path.empty()) throw InvalidInput("no response file given (--response)");
    ResponseFunction r = response_from_json(read_json_file(config.response_path));
    if (config.grid_explicit && !(r.grid() == config.grid()))
        throw InvalidInput("response grid (N, T, M) differs from the configured grid");
    return r;
}

std::string describe(const SpaceTimeGrid& g) {
    return "N=" + std::to_string(g.n()) + " T=" + format_double(g.horizon()) + " M=" + std::to_string(g.steps());
}

Json record_to_json(const SweepRecord& rec) {
    Json j;
    j["xi_index"] = rec.xi_steps;
    j["xi"] = rec.xi;
    j["sigma_min"] = rec.sigma_min;
    j["sigma_max"] = rec.sigma_max;
    j["rcond"] = rec.rcond;
    j["kernel_norm"] = rec.kernel_norm;
    j["pass"] = rec.pass;
    return j;
}

}  // namespace

std::filesystem::path sibling_path(const std::filesystem::path& path, const std::string& suffix) {
    std::filesystem::path out = path;
    out.replace_filename(path.stem().string() + "." + suffix);
    return out;
}

int cmd_forward(const RunConfig& config, std::ostream& log) {
    config.validate();
    const SpaceTimeGrid grid = config.grid();
    const ResponseFunction r = forward_response(evaluate_potential(config, grid));
    const std::string out = output_or(config, "response.json");
    write_text_file(out, dump_json(response_to_json(r)));
    log << "forward: " << describe(grid) << " -> " << out << "\n";
    return exit_ok;
}

int cmd_invert(const RunConfig& config, std::ostream& log) {
    const ResponseFunction r = load_response(config);
    const std::filesystem::path out = output_or(config, "potential.json");
    const std::filesystem::path rcond_path = sibling_path(out, "rcond.csv");
    CsvTable table({"xi_index", "xi", "rcond", "pass"});
    try {
        const RecoveredPotential v =
            invert_response(r, {config.method, config.stride, config.rcond_threshold});
        for (const auto& d : v.diagnostics)
            table.add_row({std::to_string(d.xi_steps), format_double(d.xi), format_double(d.rcond), "1"});
        write_text_file(out, dump_json(potential_to_json(v.values)));
        write_text_file(rcond_path, table.str());
        log << "invert: " << to_string(v.method) << " path, " << describe(r.grid()) << ", stride " << v.stride
            << " -> " << out.string() << "\n";
        return exit_ok;
    } catch (const CharacterizationFailure&) {
        const CharacterizationReport report = sigma_min_sweep(r, config.stride, config.threshold);
        for (const auto& rec : report.records)
            table.add_row({std::to_string(rec.xi_steps), format_double(rec.xi), format_double(rec.rcond),
                           rec.rcond > config.rcond_threshold ? "1" : "0"});
        write_text_file(rcond_path, table.str());
        log << "invert: partial rcond report -> " << rcond_path.string() << "\n";
        throw;
    }
}

int cmd_characterize(const RunConfig& config, std::ostream& log) {
    const ResponseFunction r = load_response(config);
    const SpaceTimeGrid& grid = r.grid();
    const CharacterizationReport report = sigma_min_sweep(r, config.stride, config.threshold);

    Json doc;
    doc["kind"] = "characterization";
    doc["N"] = grid.n();
    doc["T"] = grid.horizon();
    doc["M"] = grid.steps();
    doc["stride"] = report.stride;
    doc["threshold"] = report.threshold;
    doc["verdict"] = report.pass ? "pass" : "fail";
    doc["argmin_xi"] = report.weakest().xi;
    doc["min_sigma"] = report.weakest().sigma_min;
    const auto failure = report.first_failure();
    doc["first_failure_xi"] = failure ? Json(failure->xi) : Json(nullptr);
    const SweepRecord& full = report.records.back();
    doc["full_horizon_pass"] = full.pass;
    Json records = Json::array();
    for (const auto& rec : report.records) records.push_back(record_to_json(rec));
    doc["records"] = std::move(records);

    if (config.full) {
        Json ids;
        if (report.pass) {
            const int m = grid.steps();
            const FactorizationReport f = check_factorization(r);
            const IntertwiningReport it = check_intertwining(r, m / 2);
            const ProjectorReport p = check_projector_identities(r, m / 2, (3 * m) / 4);
            const SymmetricPdReport s = check_symmetric_pd(r);
            ids["factorization_residual"] = f.relative_residual;
            ids["triangularity"] = f.triangularity;
            ids["triangularity_dual"] = f.triangularity_dual;
            ids["intertwining_xi"] = grid.x(m / 2);
            ids["intertwining_residual"] = it.relative_residual;
            ids["intertwining_dual_residual"] = it.dual_relative_residual;
            ids["projector_idempotency"] = p.idempotency;
            ids["projector_intertwining"] = p.intertwining;
            ids["projector_nesting"] = p.nesting;
            ids["projector_range_defect"] = p.range_defect;
            ids["symmetric_part_min_eigenvalue"] = s.min_eigenvalue;
            ids["symmetric_part_max_eigenvalue"] = s.max_eigenvalue;
            doc["identities"] = std::move(ids);
        } else {
            doc["identities"] = nullptr;
        }
    }

    const std::string out = output_or(config, "characterization.json");
    write_text_file(out, dump_json(doc));
    log << "characterize: " << describe(grid) << " verdict " << (report.pass ? "pass" : "fail");
    if (failure) log << " (first failure at xi=" << format_double(failure->xi) << ")";
    log << ", C^T " << (full.pass ? "passes" : "fails") << " -> " << out << "\n";
    return report.pass ? exit_ok : exit_characterization_failure;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
    config.validate();
    if (config.control_path.empty()) throw InvalidInput("no control file given (--control)");
    if (!config.time) throw InvalidInput("no snapshot time given (--time)");
    const Control f = control_from_json(read_json_file(config.control_path));
    const SpaceTimeGrid grid = config.grid_explicit ? config.grid() : f.grid();
    if (!(f.grid() == grid)) throw InvalidInput("control grid differs from the configured grid");
    const WaveField u = evaluate_wavefield(solve_goursat(evaluate_potential(config, grid)), f, *config.time);

    std::vector<std::string> header{"x"};
    for (int a = 0; a < grid.n(); ++a) header.push_back("u" + std::to_string(a));
    CsvTable table(header);
    for (int i = 0; i <= grid.steps(); ++i) {
        std::vector<double> row{grid.x(i)};
        for (int a = 0; a < grid.n(); ++a) row.push_back(u.samples[i][a]);
        table.add_row(row);
    }
    const std::string out = output_or(config, "wavefield.csv");
    write_text_file(out, table.str());
    log << "simulate: t=" << format_double(u.time()) << " -> " << out << "\n";
    return exit_ok;
}

int cmd_roundtrip(const RunConfig& config, std::ostream& log) {
    config.validate();
    CsvTable table({"M", "h", "error", "ratio"});
    double previous = 0.0;
    for (int level = 0; level < 3; ++level) {
        const SpaceTimeGrid grid = config.grid().refined(config.steps << level);
        const MatrixFunction1D v = evaluate_potential(config, grid);
        const RecoveredPotential recovered = invert_response(forward_response(v), {config.method, 1, config.rcond_threshold});
        const double error = MatrixFunction1D::max_difference(recovered.values, v);
        table.add_row({std::to_string(grid.steps()), format_double(grid.h()), format_double(error),
                       level == 0 ? std::string() : format_double(previous / error)});
        log << "roundtrip: M=" << grid.steps() << " error " << format_double(error) << "\n";
        previous = error;
    }
    const std::string out = output_or(config, "roundtrip.csv");
    write_text_file(out, table.str());
    return exit_ok;
}

int cmd_scan(const RunConfig& config, std::ostream& log) {
    config.validate();
    const SpaceTimeGrid grid = config.grid();
    ScanOptions options;
    options.threshold = config.threshold;
    const ScanResult found = scan_cosine_family(grid, options);
    if (!found.found) {
        log << "scan: no amplitude in [" << format_double(options.amplitude_min) << ", "
            << format_double(options.amplitude_max) << "] makes some C^xi fail while C^T passes\n";
        return exit_ok;
    }
    const std::string out = output_or(config, "scan_response.json");
    write_text_file(out, dump_json(response_to_json(cosine_response(grid, found.amplitude, options.frequency))));
    log << "scan: a=" << format_double(found.amplitude) << " C^xi fails at xi=" << format_double(found.xi)
        << " (sigma ratio " << format_double(found.sigma_ratio) << ") while C^T has ratio "
        << format_double(found.sigma_ratio_full) << " -> " << out << "\n";
    return exit_ok;
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const CharacterizationFailure& e) {
        err << "error: " << e.what() << "\n";
        return exit_characterization_failure;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const GridTooCoarse& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical_failure;
    }
}

}  // namespace bcinv::cli
