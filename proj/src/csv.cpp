#include "datasim/csv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace datasim {

namespace {

std::vector<std::string> split_line(const std::string& line) {
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
    for (auto& s : cells) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
    }
    return cells;
}

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

bool looks_like_real(const std::string& s) {
    if (is_integer(s)) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    (void)v;
    return end != nullptr && *end == '\0' && end != s.c_str();
}

} // namespace

CsvLoadResult parse_csv_text(const std::string& text, bool has_target) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty file");
    }
    const std::vector<std::string> header = split_line(line);
    const std::size_t ncols = header.size();
    if (ncols == 0 || (has_target && ncols < 2)) {
        throw std::invalid_argument("too few columns");
    }

    std::vector<std::vector<std::string>> cells(ncols);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto row = split_line(line);
        if (row.size() != ncols) {
            throw std::invalid_argument("ragged row: expected " + std::to_string(ncols) +
                                        " cells, got " + std::to_string(row.size()));
        }
        for (std::size_t j = 0; j < ncols; ++j) {
            if (looks_like_real(row[j])) {
                throw std::invalid_argument("non-categorical cell '" + row[j] + "'");
            }
            cells[j].push_back(row[j]);
        }
    }
    const std::size_t n = cells[0].size();
    if (n == 0) {
        throw std::invalid_argument("empty file");
    }

    const std::size_t p = has_target ? ncols - 1 : ncols;
    if (p == 0) {
        throw std::invalid_argument("no covariate columns");
    }

    CsvLoadResult out;
    out.column_names.assign(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(p));

    // Sorted-unique mapping per column: integer columns sort numerically,
    // otherwise lexicographically. The mapping depends only on column content.
    std::vector<Code> values(n * p);
    std::vector<Code> arities(p);
    out.label_maps.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const bool all_int = std::all_of(cells[j].begin(), cells[j].end(), is_integer);
        std::vector<std::string> uniq = cells[j];
        if (all_int) {
            std::sort(uniq.begin(), uniq.end(), [](const std::string& a, const std::string& b) {
                return std::stoll(a) < std::stoll(b);
            });
        } else {
            std::sort(uniq.begin(), uniq.end());
        }
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq.size() < 2) {
            throw std::invalid_argument("arity<2 in column '" + header[j] + "'");
        }
        std::map<std::string, Code> code_of;
        for (std::size_t c = 0; c < uniq.size(); ++c) {
            code_of[uniq[c]] = static_cast<Code>(c);
        }
        for (std::size_t i = 0; i < n; ++i) {
            values[i * p + j] = code_of[cells[j][i]];
        }
        arities[j] = static_cast<Code>(uniq.size());
        out.label_maps[j] = std::move(uniq);
    }

    std::optional<std::vector<Code>> target;
    if (has_target) {
        std::vector<Code> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& s = cells[ncols - 1][i];
            if (s == "0") {
                t[i] = 0;
            } else if (s == "1") {
                t[i] = 1;
            } else {
                throw std::invalid_argument("target cell '" + s + "' is not 0/1");
            }
        }
        target = std::move(t);
    }

    out.dataset = CategoricalDataset(std::move(values), n, p, std::move(arities), std::move(target));
    return out;
}

CsvLoadResult load_csv(const std::string& path, bool has_target) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv_text(ss.str(), has_target);
}

void write_code_mapping_csv(const CsvLoadResult& loaded, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    f << "column,code,label\n";
    for (std::size_t j = 0; j < loaded.label_maps.size(); ++j) {
        for (std::size_t c = 0; c < loaded.label_maps[j].size(); ++c) {
            f << loaded.column_names[j] << "," << c << "," << loaded.label_maps[j][c] << "\n";
        }
    }
}

} // namespace datasim
