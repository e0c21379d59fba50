#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nsk {

/// Deterministic CSV writer: schema comment line, header, then rows with
/// %.17g doubles (shortest exact round trip is not needed; fixed width is
/// reproducible across runs).
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header, int schema = 1,
              bool append = false)
        : out_(path, append ? std::ios::app : std::ios::trunc) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        if (!append) {
            out_ << "# schema=" << schema << "\n";
            for (std::size_t i = 0; i < header.size(); ++i)
                out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
        }
    }

    static std::string fmt(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }

    void row_values(const std::vector<double>& vals) {
        std::vector<std::string> cells;
        cells.reserve(vals.size());
        for (double v : vals) cells.push_back(fmt(v));
        row(cells);
    }

private:
    std::ofstream out_;
};

/// Read back the first column of data rows (skipping comments/header);
/// used by the resumable sweep.
inline std::vector<std::string> csv_first_column(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> out;
    if (!in) return out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto comma = line.find(',');
        out.push_back(line.substr(0, comma));
    }
    return out;
}

} // namespace nsk
