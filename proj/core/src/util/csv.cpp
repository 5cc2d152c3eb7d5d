#include "epiregime/util/csv.hpp"

#include <cstdio>
#include <sstream>

#include "epiregime/util/errors.hpp"

namespace epiregime::csv {

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

Table read_string(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto cells = split_line(line);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Table t = read_string(buf.str());
    if (t.header.empty()) throw ValidationError("empty csv file: " + path);
    return t;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Writer::Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw ValidationError("cannot open file for writing: " + path);
}

void Writer::header(const std::vector<std::string>& names) { row(names); }

void Writer::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void Writer::flush() { out_.flush(); }

}  // namespace epiregime::csv
