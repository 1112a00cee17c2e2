#pragma once

#include "edrpav/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace edrpav {

struct LoadOptions {
    // Which column holds the response: "" (none), "first", "last", a 1-based
    // column index, or a column name when the file has a header row.
    std::string response;
};

struct LoadedMatrix {
    Matrix values;                    // response column removed
    std::optional<Vector> response;
    std::vector<std::string> header;  // empty when the file has no header row
    char delimiter = ',';
};

// Reads a delimited numeric matrix (samples as rows). The delimiter (comma
// or tab) and an optional single header row are autodetected.
LoadedMatrix load_matrix(const std::string& path, const LoadOptions& options = {});

// Writes values (plus an optional trailing response column) with 17
// significant digits so a save/load round trip reproduces every entry
// bit for bit.
void save_matrix(const std::string& path, const Matrix& values,
                 const Vector* response = nullptr, char delimiter = ',',
                 const std::vector<std::string>& header = {});

}  // namespace edrpav
