#pragma once

#include "bcinv/forward.hpp"
#include "bcinv/grid.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace bcinv::cli {

using Json = nlohmann::ordered_json;

/// printf("%.17g") text, locale-independent; -0 is written as 0.
std::string format_double(double value);

/// Deterministic JSON text: 2-space indentation, arrays of scalars on one
/// line, floats through format_double.
std::string dump_json(const Json& value);

Json potential_to_json(const MatrixFunction1D& potential);
Json response_to_json(const ResponseFunction& response);
Json control_to_json(const Control& control);

MatrixFunction1D potential_from_json(const Json& doc);
ResponseFunction response_from_json(const Json& doc);
Control control_from_json(const Json& doc);

/// Throws InvalidInput on missing files or malformed JSON.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Comma-separated table with a header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& values);

    std::string str() const { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

}  // namespace bcinv::cli
