#include "subexp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "subexp/errors.hpp"

namespace subexp {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_csv(std::ostream& os, const std::string& config_hash,
               std::span<const std::string> columns,
               const std::vector<std::vector<std::string>>& rows) {
    os << "# config_hash=" << config_hash << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
}

std::vector<double> read_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sample file '" + path + "'");
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t a = line.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r\n");
        std::string token = line.substr(a, b - a + 1);
        try {
            std::size_t used = 0;
            double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            values.push_back(v);
        } catch (const std::exception&) {
            throw InputError("sample file '" + path + "' line " + std::to_string(lineno) +
                             ": cannot parse '" + token + "' as a real number");
        }
    }
    return values;
}

void write_svg_loglog(std::ostream& os, const std::string& title,
                      std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw InputError("write_svg_loglog: need matching nonempty coordinate lists");

    double floor_y = std::numeric_limits<double>::infinity();
    for (double y : ys)
        if (y > 0.0) floor_y = std::min(floor_y, y);
    floor_y = std::isfinite(floor_y) ? floor_y / 10.0 : 1e-16;

    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0.0) throw InputError("write_svg_loglog: x values must be positive");
        lx[i] = std::log10(xs[i]);
        ly[i] = std::log10(std::max(ys[i], floor_y));
    }
    auto [lx_min_it, lx_max_it] = std::minmax_element(lx.begin(), lx.end());
    auto [ly_min_it, ly_max_it] = std::minmax_element(ly.begin(), ly.end());
    double lx0 = *lx_min_it, lx1 = *lx_max_it, ly0 = *ly_min_it, ly1 = *ly_max_it;
    if (lx1 - lx0 < 1e-9) lx1 = lx0 + 1.0;
    if (ly1 - ly0 < 1e-9) ly1 = ly0 + 1.0;

    const double W = 640, H = 440, ml = 70, mr = 20, mt = 40, mb = 50;
    auto px = [&](double v) { return ml + (v - lx0) / (lx1 - lx0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (v - ly0) / (ly1 - ly0) * (H - mt - mb); };
    auto fmt2 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"14\">"
       << title << "</text>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
       << H - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";

    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < lx.size(); ++i)
        os << (i ? " " : "") << fmt2(px(lx[i])) << "," << fmt2(py(ly[i]));
    os << "\"/>\n";
    for (std::size_t i = 0; i < lx.size(); ++i) {
        os << "<circle cx=\"" << fmt2(px(lx[i])) << "\" cy=\"" << fmt2(py(ly[i]))
           << "\" r=\"3\" fill=\"steelblue\"/>\n";
        os << "<text x=\"" << fmt2(px(lx[i])) << "\" y=\"" << H - mb + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << format_double(xs[i]) << "</text>\n";
    }
    os << "<text x=\"" << fmt2(px(lx.front())) << "\" y=\"" << fmt2(py(ly.front()) - 8)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(ys.front())
       << "</text>\n";
    os << "<text x=\"" << fmt2(px(lx.back())) << "\" y=\"" << fmt2(py(ly.back()) - 8)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(ys.back())
       << "</text>\n";
    os << "<text x=\"" << (W + ml - mr) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">N (log)</text>\n";
    os << "<text x=\"18\" y=\"" << (H + mt - mb) / 2
       << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
       << (H + mt - mb) / 2 << ")\">gap (log)</text>\n";
    os << "</svg>\n";
}

} // namespace subexp
