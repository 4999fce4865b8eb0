#include "bcinv/cli/io.hpp"

#include "bcinv/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bcinv::cli {

std::string format_double(double value) {
    if (!std::isfinite(value)) throw InvalidInput("cannot serialize a non-finite value");
    if (value == 0.0) return "0";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    return {buffer, result.ptr};
}

namespace {

bool is_scalar_array(const Json& value) {
    for (const auto& item : value)
        if (item.is_structured()) return false;
    return true;
}

void dump(const Json& value, int indent, std::string& out) {
    const std::string pad(indent, ' ');
    const std::string inner(indent + 2, ' ');
    switch (value.type()) {
        case Json::value_t::number_float:
            out += format_double(value.get<double>());
            return;
        case Json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : value.items()) {
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(key).dump() + ": ";
                dump(item, indent + 2, out);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                return;
            }
            if (is_scalar_array(value)) {
                out += "[";
                for (std::size_t i = 0; i < value.size(); ++i) {
                    if (i) out += ", ";
                    dump(value[i], indent, out);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                dump(value[i], indent + 2, out);
            }
            out += "\n" + pad + "]";
            return;
        }
        default:
            out += value.dump();
    }
}

Json header(const char* kind, const SpaceTimeGrid& grid) {
    Json doc;
    doc["kind"] = kind;
    doc["N"] = grid.n();
    doc["T"] = grid.horizon();
    doc["M"] = grid.steps();
    return doc;
}

Json matrix_samples(const std::vector<Matrix>& samples) {
    Json out = Json::array();
    for (const auto& s : samples) {
        Json row = Json::array();
        for (Eigen::Index a = 0; a < s.rows(); ++a)
            for (Eigen::Index b = 0; b < s.cols(); ++b) row.push_back(s(a, b));
        out.push_back(std::move(row));
    }
    return out;
}

template <class T>
T field(const Json& doc, const char* name) {
    if (!doc.contains(name)) throw InvalidInput(std::string("missing field '") + name + "'");
    try {
        return doc.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidInput(std::string("field '") + name + "' has the wrong type");
    }
}

SpaceTimeGrid read_header(const Json& doc, const char* kind) {
    if (!doc.is_object()) throw InvalidInput("expected a JSON object");
    const auto found = field<std::string>(doc, "kind");
    if (found != kind) throw InvalidInput("expected kind '" + std::string(kind) + "', got '" + found + "'");
    return {field<int>(doc, "N"), field<double>(doc, "T"), field<int>(doc, "M")};
}

std::vector<double> numbers(const Json& row, std::size_t expected) {
    if (!row.is_array() || row.size() != expected)
        throw InvalidInput("sample has " + std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " +
                           std::to_string(expected));
    std::vector<double> out;
    out.reserve(expected);
    for (const auto& v : row) {
        if (!v.is_number()) throw InvalidInput("sample entry is not a number");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<Matrix> read_matrix_samples(const Json& doc, const SpaceTimeGrid& grid, int count) {
    const Json& samples = doc.contains("samples") ? doc.at("samples") : throw InvalidInput("missing field 'samples'");
    if (!samples.is_array() || static_cast<int>(samples.size()) != count)
        throw InvalidInput("expected " + std::to_string(count) + " samples");
    const int n = grid.n();
    std::vector<Matrix> out;
    out.reserve(count);
    for (const auto& row : samples) {
        const auto v = numbers(row, static_cast<std::size_t>(n) * n);
        Matrix m(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) m(a, b) = v[a * n + b];
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace

std::string dump_json(const Json& value) {
    std::string out;
    dump(value, 0, out);
    out += "\n";
    return out;
}

Json potential_to_json(const MatrixFunction1D& potential) {
    Json doc = header("potential", potential.grid());
    doc["samples"] = matrix_samples(potential.samples());
    return doc;
}

Json response_to_json(const ResponseFunction& response) {
    Json doc = header("response", response.grid());
    doc["samples"] = matrix_samples(response.values().samples());
    return doc;
}

Json control_to_json(const Control& control) {
    Json doc = header("control", control.grid());
    Json samples = Json::array();
    for (const auto& s : control.samples()) samples.push_back(std::vector<double>(s.data(), s.data() + s.size()));
    doc["samples"] = std::move(samples);
    return doc;
}

MatrixFunction1D potential_from_json(const Json& doc) {
    const SpaceTimeGrid grid = read_header(doc, "potential");
    return {grid, read_matrix_samples(doc, grid, grid.space_nodes())};
}

ResponseFunction response_from_json(const Json& doc) {
    const SpaceTimeGrid grid = read_header(doc, "response");
    return ResponseFunction(MatrixFunction1D(grid, read_matrix_samples(doc, grid, grid.time_nodes())));
}

Control control_from_json(const Json& doc) {
    const SpaceTimeGrid grid = read_header(doc, "control");
    const Json& samples = doc.contains("samples") ? doc.at("samples") : throw InvalidInput("missing field 'samples'");
    if (!samples.is_array() || static_cast<int>(samples.size()) != grid.space_nodes())
        throw InvalidInput("expected " + std::to_string(grid.space_nodes()) + " control samples");
    std::vector<Vector> out;
    for (const auto& row : samples) {
        const auto v = numbers(row, grid.n());
        out.emplace_back(Eigen::Map<const Vector>(v.data(), grid.n()));
    }
    return {grid, std::move(out)};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) { add_row(header); }

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw InvalidInput("csv: row width differs from header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    add_row(cells);
}

}  // namespace bcinv::cli
