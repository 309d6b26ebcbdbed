// Deterministic text I/O: shortest round-trip decimal formatting for doubles,
// CSV emission with fixed '\n' line endings, and CSV field loaders.

#ifndef PARVEX_CSVIO_HPP
#define PARVEX_CSVIO_HPP

#include <string>
#include <vector>

#include "parvex/exponent_field.hpp"
#include "parvex/mesh.hpp"

namespace parvex {

// shortest decimal string that round-trips to the same double
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::string csv_line(const std::vector<std::string>& fields);

// Loaders accept headers "node,value" (mesh node index) or coordinate headers
// "x,value", "x,y,value", "x,t,value", "x,y,t,value" (nearest-node snap).
// Exponent CSVs may carry the value "inf" to mark infinite-exponent nodes.
GridFunction load_grid_function_csv(MeshPtr mesh, const std::string& path);
ExponentField load_exponent_field_csv(MeshPtr mesh, const std::string& path);

} // namespace parvex

#endif
