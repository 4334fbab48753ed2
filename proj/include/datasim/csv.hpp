#pragma once

#include "datasim/dataset.hpp"

#include <string>
#include <vector>

namespace datasim {

struct CsvLoadResult {
    CategoricalDataset dataset;
    std::vector<std::string> column_names;
    // label_maps[j][code] = original cell text, the deterministic
    // sorted-unique mapping used for column j.
    std::vector<std::vector<std::string>> label_maps;
};

// Reads a header CSV of categorical cells (integers or strings). String
// categories map to codes via sorted-unique order per column. If has_target
// is set, the last column must be 0/1 and becomes the target.
CsvLoadResult load_csv(const std::string& path, bool has_target);

CsvLoadResult parse_csv_text(const std::string& text, bool has_target);

void write_code_mapping_csv(const CsvLoadResult& loaded, const std::string& path);

} // namespace datasim
