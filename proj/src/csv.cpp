#include "longmem/csv.hpp"

#include "longmem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace longmem {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v))
            throw std::invalid_argument("trailing garbage");
        return v;
    } catch (...) {
        throw input_error(std::string("line ") + std::to_string(line_no) +
                          ": unparseable " + what + " '" + text + "'");
    }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

PriceSeries ingest_csv(const std::string& path, const CsvMapping& mapping,
                       std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open input file '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw input_error("input file '" + path + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);

    auto find_col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int c_date = find_col(mapping.date_col);
    const int c_price = find_col(mapping.price_col);
    const int c_vol = find_col(mapping.volume_col);
    if (c_date < 0)
        throw input_error("input has no '" + mapping.date_col + "' column");
    if (c_price < 0)
        throw input_error("input has no '" + mapping.price_col + "' column");

    struct Row {
        Date date;
        double price;
        double volume;
        int line_no;
    };
    std::vector<Row> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        const int need = std::max(c_price, std::max(c_date, c_vol));
        if (static_cast<int>(cells.size()) <= need)
            throw input_error("line " + std::to_string(line_no) +
                              ": expected at least " + std::to_string(need + 1) +
                              " columns");
        Row r;
        r.line_no = line_no;
        try {
            r.date = parse_date(cells[c_date]);
        } catch (const input_error& e) {
            throw input_error("line " + std::to_string(line_no) + ": " +
                              e.what());
        }
        r.price = parse_number(cells[c_price], line_no, "price");
        if (!(r.price > 0.0))
            throw input_error("line " + std::to_string(line_no) +
                              ": nonpositive price " + cells[c_price]);
        r.volume = (c_vol >= 0) ? parse_number(cells[c_vol], line_no, "volume")
                                : 0.0;
        rows.push_back(r);
    }
    if (rows.size() < 2)
        throw input_error("input '" + path + "' has fewer than 2 data rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });

    PriceSeries out;
    const bool has_vol = c_vol >= 0;
    for (const Row& r : rows) {
        if (!out.dates.empty() && out.dates.back() == r.date) {
            const bool same = out.prices.back() == r.price &&
                              (!has_vol || out.volume.back() == r.volume);
            if (same) {
                if (warnings)
                    warnings->push_back("line " + std::to_string(r.line_no) +
                                        ": exact duplicate row for " +
                                        r.date.to_string() + " dropped");
                continue;
            }
            throw input_error("line " + std::to_string(r.line_no) +
                              ": conflicting duplicate rows for date " +
                              r.date.to_string());
        }
        out.dates.push_back(r.date);
        out.prices.push_back(r.price);
        if (has_vol) out.volume.push_back(r.volume);
    }
    out.validate();
    return out;
}

}  // namespace longmem
