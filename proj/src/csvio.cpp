#include "parvex/csvio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "parvex/lebesgue.hpp"

namespace parvex {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open CSV file: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            table.header = cells;
            first = false;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) {
            if (c == "inf") {
                row.push_back(kInfinity);
            } else {
                try {
                    row.push_back(std::stod(c));
                } catch (const std::exception&) {
                    throw StructuralError("malformed CSV number '" + c + "' in " + path);
                }
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw StructuralError("CSV file has no header: " + path);
    return table;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary); // fixed '\n' endings
    if (!out) throw StructuralError("cannot write file: " + path);
    out << content;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    line += '\n';
    return line;
}

namespace {

enum class CsvLayout { NodeIndex, X, XY, XT, XYT };

CsvLayout detect_layout(const CsvTable& table, const Mesh& mesh) {
    const auto& h = table.header;
    auto is = [&](std::initializer_list<const char*> names) {
        if (h.size() != names.size() + 1) return false;
        std::size_t i = 0;
        for (const char* n : names)
            if (h[i++] != n) return false;
        return h.back() == "value";
    };
    if (is({"node"})) return CsvLayout::NodeIndex;
    if (is({"x"})) return CsvLayout::X;
    if (is({"x", "y"})) return CsvLayout::XY;
    if (is({"x", "t"})) return CsvLayout::XT;
    if (is({"x", "y", "t"})) return CsvLayout::XYT;
    (void)mesh;
    throw StructuralError("unrecognized CSV header; expected node/x[,y][,t],value");
}

int nearest_index(double coord, const Axis& axis) {
    const double h = axis.spacing();
    int i = static_cast<int>(std::lround(coord / h));
    return std::min(std::max(i, 0), axis.nodes - 1);
}

std::vector<double> load_samples(const MeshPtr& mesh, const std::string& path,
                                 std::vector<char>* mask) {
    const CsvTable table = read_csv(path);
    const CsvLayout layout = detect_layout(table, *mesh);
    std::vector<double> values(static_cast<std::size_t>(mesh->node_count()), 0.0);
    std::vector<char> seen(values.size(), 0);
    if (mask) mask->assign(values.size(), 0);
    for (const auto& row : table.rows) {
        int node = -1;
        switch (layout) {
        case CsvLayout::NodeIndex:
            node = static_cast<int>(std::lround(row.at(0)));
            break;
        case CsvLayout::X:
            node = nearest_index(row.at(0), mesh->axis(0));
            break;
        case CsvLayout::XY:
            node = mesh->space_index(nearest_index(row.at(0), mesh->axis(0)),
                                     nearest_index(row.at(1), mesh->axis(1)));
            break;
        case CsvLayout::XT: {
            const int s = nearest_index(row.at(0), mesh->axis(0));
            const int t = nearest_index(row.at(1), mesh->time_axis());
            node = mesh->node_index(s, t);
            break;
        }
        case CsvLayout::XYT: {
            const int s = mesh->space_index(nearest_index(row.at(0), mesh->axis(0)),
                                            nearest_index(row.at(1), mesh->axis(1)));
            const int t = nearest_index(row.at(2), mesh->time_axis());
            node = mesh->node_index(s, t);
            break;
        }
        }
        if (node < 0 || node >= mesh->node_count())
            throw StructuralError("CSV row addresses a node outside the mesh: " + path);
        const double v = row.back();
        if (std::isinf(v)) {
            if (!mask) throw StructuralError("infinite value in a plain field CSV: " + path);
            (*mask)[static_cast<std::size_t>(node)] = 1;
        } else {
            values[static_cast<std::size_t>(node)] = v;
        }
        seen[static_cast<std::size_t>(node)] = 1;
    }
    for (char c : seen)
        if (!c) throw StructuralError("CSV does not cover every mesh node: " + path);
    return values;
}

} // namespace

GridFunction load_grid_function_csv(MeshPtr mesh, const std::string& path) {
    std::vector<double> values = load_samples(mesh, path, nullptr);
    return GridFunction(std::move(mesh), std::move(values));
}

ExponentField load_exponent_field_csv(MeshPtr mesh, const std::string& path) {
    std::vector<char> mask;
    std::vector<double> values = load_samples(mesh, path, &mask);
    bool any = false;
    for (char c : mask) any = any || c != 0;
    return ExponentField::from_samples(std::move(mesh), std::move(values),
                                       any ? std::move(mask) : std::vector<char>{});
}

} // namespace parvex
