#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace epiregime::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

/// Read a comma-separated file with a header row. No quoting support; the
/// schemas used by this project never need it.
Table read_file(const std::string& path);

Table read_string(const std::string& text);

/// Format a double with enough digits to round-trip bit-exactly.
std::string format_double(double x);

class Writer {
public:
    explicit Writer(const std::string& path);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);
    void flush();

private:
    std::ofstream out_;
};

}  // namespace epiregime::csv
