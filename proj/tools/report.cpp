#include "report.hpp"

#include <sstream>
#include <stdexcept>

namespace micropol::cli {

std::string format_real(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : os_(path, std::ios::trunc) {
    if (!os_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_real(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) os_ << ',';
        os_ << cells[k];
    }
    os_ << '\n';
    os_.flush();
    if (!os_) throw std::runtime_error("write failed");
}

void Summary::add(const std::string& key, double value) { entries_.emplace_back(key, format_real(value)); }

void Summary::write(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
}

}  // namespace micropol::cli
