#include "metastab/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metastab/errors.hpp"

namespace metastab::io {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_path_csv(std::ostream& os, const EuclideanPath& path) {
    if (path.points.empty()) throw DegeneratePath("empty path");
    const auto dim = path.points.front().size();
    os << "t";
    for (Eigen::Index j = 0; j < dim; ++j) os << ",x" << j;
    os << '\n';
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        os << format_double(path.times[i]);
        for (Eigen::Index j = 0; j < dim; ++j) os << ',' << format_double(path.points[i](j));
        os << '\n';
    }
}

EuclideanPath read_path_csv(std::istream& is) {
    EuclideanPath path;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{}) throw InvalidArgument("malformed number in path CSV: " + cell);
            row.push_back(v);
        }
        if (row.size() < 2) throw InvalidArgument("path CSV rows need t and at least one coordinate");
        path.times.push_back(row[0]);
        path.points.push_back(Eigen::Map<const Vector>(row.data() + 1, static_cast<Eigen::Index>(row.size() - 1)));
        if (path.points.back().size() != path.points.front().size()) throw ShapeMismatch("ragged path CSV");
    }
    return path;
}

void write_field_jsonl(std::ostream& os, double t, const SpectralField& phi) {
    nlohmann::json j;
    j["t"] = t;
    j["d"] = phi.dim();
    j["L"] = phi.length();
    j["N"] = phi.cutoff();
    std::vector<double> re, im;
    for (const auto& c : phi.coeffs()) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    j["re"] = re;
    j["im"] = im;
    os << j.dump() << '\n';
}

FieldPath read_field_path_jsonl(std::istream& is) {
    FieldPath path;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        SpectralField f(j.at("d").get<int>(), j.at("L").get<double>(), j.at("N").get<int>());
        const auto re = j.at("re").get<std::vector<double>>();
        const auto im = j.at("im").get<std::vector<double>>();
        if (re.size() != f.mode_count() || im.size() != f.mode_count()) throw ShapeMismatch("snapshot mode count");
        auto c = f.coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = Complex{re[i], im[i]};
        path.times.push_back(j.at("t").get<double>());
        path.points.push_back(std::move(f));
    }
    return path;
}

void write_snapshot_csv(std::ostream& os, double t, const SpectralField& phi, int grid_points) {
    const auto values = phi.to_grid(grid_points);
    os << "# d=" << phi.dim() << " L=" << format_double(phi.length()) << " N=" << phi.cutoff()
       << " t=" << format_double(t) << '\n';
    const int rows = phi.dim() == 1 ? 1 : grid_points;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < grid_points; ++c) {
            if (c > 0) os << ',';
            os << format_double(values[static_cast<std::size_t>(r) * grid_points + c]);
        }
        os << '\n';
    }
}

void write_summary_jsonl(std::ostream& os, double t, const SpectralField& phi, double energy) {
    nlohmann::json j;
    j["t"] = t;
    j["mean"] = phi.mean();
    j["l2"] = std::sqrt(phi.l2_norm_squared());
    j["energy"] = energy;
    os << j.dump() << '\n';
}

}  // namespace metastab::io
