#pragma once

#include "longmem/series.hpp"

#include <string>
#include <vector>

namespace longmem {

struct CsvMapping {
    std::string date_col = "date";
    std::string price_col = "price";
    std::string volume_col = "volume";  // used only when present in the file
};

// Reads a headered CSV into a validated PriceSeries. Rows are sorted by
// date; exact duplicate rows are dropped (with a warning collected into
// `warnings`), duplicated dates with conflicting values are an error.
// Errors cite the 1-based line number of the offending row.
PriceSeries ingest_csv(const std::string& path, const CsvMapping& mapping,
                       std::vector<std::string>* warnings = nullptr);

// Minimal CSV line splitter (no embedded-quote support; the inputs here are
// plain numeric tables).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace longmem
