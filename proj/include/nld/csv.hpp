#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace nld {

/// Shortest round-trip form: printf "%.17g".
std::string fmt17(double v);

/// Comma-separated file with a fixed header. Throws std::runtime_error when
/// the file cannot be opened.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);

private:
    std::FILE* file_;
    std::size_t columns_;
};

}  // namespace nld
