#include "nld/csv.hpp"

#include <stdexcept>

namespace nld {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : file_(std::fopen(path.c_str(), "w")), columns_(header.size()) {
    if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    row(header);
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(file_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) std::fputc(',', file_);
        std::fputs(cells[i].c_str(), file_);
    }
    std::fputc('\n', file_);
}

}  // namespace nld
