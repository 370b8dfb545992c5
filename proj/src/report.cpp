#include "dmt/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace dmt {

std::string format_double(double v) {
    char buf[64];
    // Shortest representation that parses back to the same double.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string csv_provenance_comment(std::uint64_t config_hash, std::uint64_t seed) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "# dmt-csv %s artifact=%s config=%016llx seed=%llu",
                  std::string(kCsvSchemaVersion).c_str(), std::string(kArtifactVersion).c_str(),
                  static_cast<unsigned long long>(config_hash),
                  static_cast<unsigned long long>(seed));
    return buf;
}

namespace {

constexpr const char* kHeader =
    "run_id,test_name,regime,b_true_index,alpha,beta,epsilon,m,dict_size,n_reps,rejections,"
    "rate,ci_low,ci_high,seed,notes";

}  // namespace

std::string render_csv(const std::vector<ReportRow>& rows, std::uint64_t config_hash,
                       std::uint64_t seed) {
    std::ostringstream out;
    out << csv_provenance_comment(config_hash, seed) << '\n' << kHeader << '\n';
    for (const ReportRow& r : rows) {
        out << r.run_id << ',' << csv_escape(r.test_name) << ',' << csv_escape(r.regime) << ','
            << r.b_true_index << ',' << format_double(r.alpha) << ',' << format_double(r.beta)
            << ',' << format_double(r.epsilon) << ',' << r.m << ',' << r.dict_size << ','
            << r.n_reps << ',' << r.rejections << ',' << format_double(r.rate) << ','
            << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ',' << r.seed << ','
            << csv_escape(r.notes) << '\n';
    }
    return out.str();
}

std::string render_table_csv(const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows,
                             std::uint64_t config_hash, std::uint64_t seed) {
    std::ostringstream out;
    out << csv_provenance_comment(config_hash, seed) << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(header[i]);
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_power_svg(const std::string& title,
                             const std::map<std::string, std::vector<std::pair<double, double>>>&
                                 series) {
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 480.0;
    constexpr double kLeft = 70.0;
    constexpr double kRight = 610.0;
    constexpr double kTop = 50.0;
    constexpr double kBottom = 420.0;

    double xmin = 0.0;
    double xmax = 1.0;
    bool first = true;
    for (const auto& [name, pts] : series) {
        for (const auto& [x, y] : pts) {
            if (first) {
                xmin = xmax = x;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
            }
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;

    const auto px = [&](double x) {
        return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
    };
    const auto py = [&](double y) { return kBottom - y * (kBottom - kTop); };

    static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e"};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    // Axes
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ((kLeft + kRight) / 2)
        << "\" y=\"460\" text-anchor=\"middle\" font-size=\"13\">scale</text>\n";
    out << "<text x=\"18\" y=\"" << ((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << ((kTop + kBottom) / 2) << ")\">acceptance rate</text>\n";
    // Ticks: y at 0, 0.25, ..., 1; x at min, mid, max.
    for (int i = 0; i <= 4; ++i) {
        const double y = 0.25 * i;
        out << "<line x1=\"" << (kLeft - 5) << "\" y1=\"" << py(y) << "\" x2=\"" << kLeft
            << "\" y2=\"" << py(y) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << (kLeft - 10) << "\" y=\"" << (py(y) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << svg_num(y) << "</text>\n";
    }
    for (double x : {xmin, (xmin + xmax) / 2.0, xmax}) {
        out << "<line x1=\"" << px(x) << "\" y1=\"" << kBottom << "\" x2=\"" << px(x) << "\" y2=\""
            << (kBottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(x) << "\" y=\"" << (kBottom + 20)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << svg_num(x) << "</text>\n";
    }
    std::size_t color = 0;
    double legend_y = kTop + 10.0;
    for (const auto& [name, pts] : series) {
        const char* stroke = kColors[color % 5];
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) out << ' ';
            out << svg_num(px(pts[i].first)) << ',' << svg_num(py(pts[i].second));
        }
        out << "\"/>\n";
        out << "<text x=\"" << (kRight - 150) << "\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
            << stroke << "\">" << name << "</text>\n";
        legend_y += 16.0;
        ++color;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace dmt
