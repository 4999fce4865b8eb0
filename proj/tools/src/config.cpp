#include "bcinv/cli/config.hpp"

#include "bcinv/error.hpp"

#include <cmath>

namespace bcinv::cli {

void RunConfig::validate() const {
    if (n < 1) throw InvalidInput("config: N must be at least 1");
    if (steps < 8) throw InvalidInput("config: M must be at least 8");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidInput("config: T must be positive");
    if (stride < 1) throw InvalidInput("config: stride must be positive");
    if (!(threshold > 0.0) || !(rcond_threshold > 0.0)) throw InvalidInput("config: thresholds must be positive");
}

RunConfig config_from_json(const Json& doc) {
    if (!doc.is_object()) throw InvalidInput("config: expected a JSON object");
    RunConfig c;
    try {
        c.grid_explicit = doc.contains("N") || doc.contains("T") || doc.contains("M");
        c.n = doc.value("N", c.n);
        c.horizon = doc.value("T", c.horizon);
        c.steps = doc.value("M", c.steps);
        if (doc.contains("potential")) c.potential = doc.at("potential");
        if (doc.contains("method")) c.method = parse_method(doc.at("method").get<std::string>());
        c.stride = doc.value("stride", c.stride);
        c.threshold = doc.value("threshold", c.threshold);
        c.rcond_threshold = doc.value("rcond_threshold", c.rcond_threshold);
        c.full = doc.value("full", c.full);
        c.out = doc.value("out", c.out);
        c.response_path = doc.value("response", c.response_path);
        c.control_path = doc.value("control", c.control_path);
        if (doc.contains("time")) c.time = doc.at("time").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    return config_from_json(read_json_file(path));
}

namespace {

Matrix flat_matrix(const Json& row, int n, const char* what) {
    if (!row.is_array() || static_cast<int>(row.size()) != n * n)
        throw InvalidInput(std::string("potential: ") + what + " must hold N*N numbers");
    Matrix m(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(a, b) = row[a * n + b].get<double>();
    return m;
}

Matrix trigonometric(const Json& entries, int n, double x) {
    if (!entries.is_array() || static_cast<int>(entries.size()) != n)
        throw InvalidInput("potential: trigonometric entries must be an N x N array");
    Matrix m(n, n);
    for (int a = 0; a < n; ++a) {
        const Json& row = entries[a];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw InvalidInput("potential: trigonometric entries must be an N x N array");
        for (int b = 0; b < n; ++b) {
            const Json& e = row[b];
            const double arg = e.value("frequency", 1.0) * x + e.value("phase", 0.0);
            const std::string fn = e.value("function", std::string("sin"));
            if (fn != "sin" && fn != "cos") throw InvalidInput("potential: function must be sin or cos");
            m(a, b) = e.value("offset", 0.0) + e.value("amplitude", 0.0) * (fn == "sin" ? std::sin(arg) : std::cos(arg));
        }
    }
    return m;
}

}  // namespace

MatrixFunction1D evaluate_potential(const RunConfig& config, const SpaceTimeGrid& grid) {
    if (!config.potential) throw InvalidInput("config: no potential given");
    const Json& source = *config.potential;
    const int n = grid.n();
    std::vector<Matrix> samples;
    samples.reserve(grid.space_nodes());
    try {
        const std::string family = source.at("family").get<std::string>();
        if (family == "constant") {
            const Matrix value = flat_matrix(source.at("value"), n, "value");
            samples.assign(grid.space_nodes(), value);
        } else if (family == "polynomial") {
            std::vector<Matrix> coefficients;
            for (const auto& c : source.at("coefficients")) coefficients.push_back(flat_matrix(c, n, "coefficient"));
            for (int i = 0; i <= grid.steps(); ++i) {
                Matrix v = Matrix::Zero(n, n);
                for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * grid.x(i) + *it;
                samples.push_back(std::move(v));
            }
        } else if (family == "trigonometric") {
            for (int i = 0; i <= grid.steps(); ++i) samples.push_back(trigonometric(source.at("entries"), n, grid.x(i)));
        } else if (family == "samples") {
            for (const auto& row : source.at("samples")) samples.push_back(flat_matrix(row, n, "sample"));
            if (static_cast<int>(samples.size()) != grid.space_nodes())
                throw InvalidInput("potential: expected M + 1 inline samples");
        } else if (family == "file") {
            const MatrixFunction1D loaded =
                potential_from_json(read_json_file(source.at("path").get<std::string>()));
            if (!(loaded.grid() == grid)) throw InvalidInput("potential: file grid differs from the configured grid");
            return loaded;
        } else {
            throw InvalidInput("potential: unknown family '" + family + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("potential: ") + e.what());
    }
    return {grid, std::move(samples)};
}

}  // namespace bcinv::cli
