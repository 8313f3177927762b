#include "parasource/experiments.hpp"

#include "parasource/error.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace parasource {

namespace {

void put(std::ostream& os, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    os << buf;
}

// Lattice index whose coordinate is closest to zero.
std::size_t origin_index(const Axis& axis)
{
    const double i = std::round(-axis.lower / axis.spacing());
    if (i <= 0.0)
        return 0;
    return std::min(static_cast<std::size_t>(i), axis.points - 1);
}

void write_slice(const Field& field, std::size_t fixed_axis, const std::filesystem::path& path)
{
    const Grid& g = field.grid();
    const std::size_t a = fixed_axis == 0 ? 1 : 0;
    const std::size_t b = fixed_axis == 2 ? 1 : 2;
    const char* names = "xyz";
    std::ostringstream os;
    os << names[a] << ',' << names[b] << ",f\n";
    std::array<std::size_t, 3> idx{};
    idx[fixed_axis] = origin_index(g.axis(fixed_axis));
    for (std::size_t i = 0; i < g.axis(a).points; ++i) {
        idx[a] = i;
        for (std::size_t j = 0; j < g.axis(b).points; ++j) {
            idx[b] = j;
            put(os, g.axis(a).coordinate(i));
            os << ',';
            put(os, g.axis(b).coordinate(j));
            os << ',';
            put(os, field[g.flatten(idx)]);
            os << '\n';
        }
    }
    write_text_file(path, os.str());
}

} // namespace

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::filesystem::path> export_field(const Field& field, const std::filesystem::path& stem)
{
    const Grid& g = field.grid();
    if (g.dim() == 3) {
        std::vector<std::filesystem::path> files;
        const char* suffix[] = {"_x0.csv", "_y0.csv", "_z0.csv"};
        for (std::size_t k = 0; k < 3; ++k) {
            auto path = stem;
            path += suffix[k];
            write_slice(field, k, path);
            files.push_back(path);
        }
        return files;
    }

    std::ostringstream os;
    os << (g.dim() == 1 ? "x,f\n" : "x,y,f\n");
    std::vector<double> x(g.dim());
    for (std::size_t i = 0; i < field.size(); ++i) {
        g.point(i, x);
        for (double c : x) {
            put(os, c);
            os << ',';
        }
        put(os, field[i]);
        os << '\n';
    }
    auto path = stem;
    path += ".csv";
    write_text_file(path, os.str());
    return {path};
}

} // namespace parasource
