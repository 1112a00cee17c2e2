#include "edrpav/matrix_io.hpp"

#include "edrpav/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace edrpav {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end != '\0') {
        if (!std::isspace(static_cast<unsigned char>(*end))) return false;
        ++end;
    }
    return true;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Resolves the response selector to a 0-based column index, or -1 for none.
Index resolve_response(const std::string& selector, const std::vector<std::string>& header,
                       Index n_cols) {
    if (selector.empty()) return -1;
    if (selector == "last") return n_cols - 1;
    if (selector == "first") return 0;

    double numeric = 0.0;
    if (parse_double(selector, numeric)) {
        const Index idx = static_cast<Index>(numeric);
        if (idx < 1 || idx > n_cols)
            throw Error("response column index " + selector + " out of range 1.." +
                        std::to_string(n_cols));
        return idx - 1;
    }
    for (std::size_t j = 0; j < header.size(); ++j)
        if (trim(header[j]) == selector) return static_cast<Index>(j);
    throw Error("response column '" + selector + "' not found");
}

}  // namespace

LoadedMatrix load_matrix(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("file is empty", 1, 1);

    // Delimiter: whichever of comma/tab appears more often in the first line.
    const std::string& first = lines.front();
    const auto commas = std::count(first.begin(), first.end(), ',');
    const auto tabs = std::count(first.begin(), first.end(), '\t');
    const char delimiter = tabs > commas ? '\t' : ',';

    LoadedMatrix out;
    out.delimiter = delimiter;

    // Header: present iff any first-row field fails to parse as a number.
    auto first_fields = split_line(first, delimiter);
    const std::size_t n_cols = first_fields.size();
    std::size_t data_start = 0;
    double ignored = 0.0;
    for (const auto& f : first_fields)
        if (!parse_double(trim(f), ignored)) {
            data_start = 1;
            break;
        }
    if (data_start == 1) {
        out.header.reserve(n_cols);
        for (const auto& f : first_fields) out.header.push_back(trim(f));
    }

    const std::size_t n_rows = lines.size() - data_start;
    if (n_rows == 0) throw ParseError("file has a header but no data rows", 1, 1);

    Matrix values(static_cast<Index>(n_rows), static_cast<Index>(n_cols));
    for (std::size_t i = 0; i < n_rows; ++i) {
        const std::size_t lineno = i + data_start + 1;  // 1-based, counting the header
        const auto fields = split_line(lines[i + data_start], delimiter);
        if (fields.size() != n_cols) throw RaggedRowsError(lineno, n_cols, fields.size());
        for (std::size_t j = 0; j < n_cols; ++j) {
            double v = 0.0;
            const std::string token = trim(fields[j]);
            if (!parse_double(token, v)) throw NonNumericCellError(lineno, j + 1, token);
            values(static_cast<Index>(i), static_cast<Index>(j)) = v;
        }
    }

    const Index response_col = resolve_response(options.response, out.header,
                                                static_cast<Index>(n_cols));
    if (response_col < 0) {
        out.values = std::move(values);
        return out;
    }
    if (values.cols() < 2) throw Error("matrix needs at least one covariate besides the response");

    out.response = values.col(response_col);
    out.values.resize(values.rows(), values.cols() - 1);
    Index dst = 0;
    for (Index j = 0; j < values.cols(); ++j) {
        if (j == response_col) continue;
        out.values.col(dst++) = values.col(j);
    }
    if (!out.header.empty()) out.header.erase(out.header.begin() + response_col);
    return out;
}

void save_matrix(const std::string& path, const Matrix& values, const Vector* response,
                 char delimiter, const std::vector<std::string>& header) {
    if (response && response->size() != values.rows())
        throw Error("response length does not match the matrix");

    std::ofstream outfile(path);
    if (!outfile) throw IoError("cannot open '" + path + "' for writing");

    std::string out;
    char buf[64];
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j > 0) out += delimiter;
            out += header[j];
        }
        out += '\n';
    }
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
            if (j > 0) out += delimiter;
            std::snprintf(buf, sizeof(buf), "%.17g", values(i, j));
            out += buf;
        }
        if (response) {
            out += delimiter;
            std::snprintf(buf, sizeof(buf), "%.17g", (*response)[i]);
            out += buf;
        }
        out += '\n';
    }
    outfile << out;
    if (!outfile.good()) throw IoError("write to '" + path + "' failed");
}

}  // namespace edrpav
